//! Riemann–Roch spaces of plane curves over prime fields.

pub mod cli;
pub mod divisors;
pub mod error;
pub mod field_tower;
pub mod funcfield;
pub mod integral_bases;
pub mod om_places;
pub mod polymat;
pub mod rr_engine;

pub use error::{Error, Result};
