//! Arithmetic in k[t], k(t), k[t][X] and L = k(t)[X]/(f).

mod bipoly;
mod curve;
mod element;
mod print;
mod ratfunc;
mod resultant;

pub use bipoly::BiPoly;
pub use curve::{reverse, CurveModel, Transform};
pub use element::FunctionFieldElement;
pub use print::{format_bipoly, format_ratfunc, format_tpoly};
pub use ratfunc::{RationalFunction, TPoly};
pub use resultant::{discriminant, resultant_in_x, squarefree_part};

use crate::field_tower::{Poly, PrimeField};

/// Multiplicity of the irreducible `p` in `a`; None for a = 0.
pub fn val_at(k: &PrimeField, p: &TPoly, a: &TPoly) -> Option<usize> {
    if a.is_zero() {
        return None;
    }
    let mut v = 0;
    let mut cur = a.clone();
    loop {
        let (q, r) = cur.divrem(k, p);
        if !r.is_zero() {
            return Some(v);
        }
        v += 1;
        cur = q;
    }
}

/// Multiplicity of t in a.
pub fn val_t(a: &TPoly) -> Option<usize> {
    a.coeffs().iter().position(|&c| c != 0)
}

pub fn tpoly(k: &PrimeField, c: &[i64]) -> TPoly {
    use crate::field_tower::Field;
    Poly::from_vec(k, c.iter().map(|&x| k.from_int(x)).collect())
}
