//! Finite fields (prime fields and explicit towers), dense univariate
//! polynomials over them, and factorization.

mod extension;
mod factor;
mod flatten;
mod poly;
mod prime;

pub use extension::ExtensionField;
pub use factor::{factor, factor_with_seed, is_irreducible, DEFAULT_SEED};
pub use flatten::{flatten_tower, Flattening};
pub use poly::Poly;
pub use prime::PrimeField;

use rand::RngCore;
use std::fmt::Debug;
use std::hash::Hash;

/// A finite field acting as the context for its element values.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn characteristic(&self) -> u64;
    /// Absolute degree over the prime field.
    fn degree(&self) -> usize;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_int(&self, v: i64) -> Self::Elem;
    /// Coordinates over the prime field, each in `0..p`.
    fn coords(&self, a: &Self::Elem) -> Vec<u64>;
    fn from_coords(&self, c: &[u64]) -> Self::Elem;

    fn order(&self) -> u128 {
        (self.characteristic() as u128).pow(self.degree() as u32)
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Inverse of the Frobenius map.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        let p = self.characteristic() as u128;
        let mut r = a.clone();
        for _ in 1..self.degree() {
            r = self.pow(&r, p);
        }
        r
    }

    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem {
        let p = self.characteristic();
        let c: Vec<u64> = (0..self.degree()).map(|_| rng.next_u64() % p).collect();
        self.from_coords(&c)
    }

    /// Element with base-p digit expansion `idx` (enumeration order).
    fn from_index(&self, mut idx: u128) -> Self::Elem {
        let p = self.characteristic() as u128;
        let c: Vec<u64> = (0..self.degree())
            .map(|_| {
                let d = (idx % p) as u64;
                idx /= p;
                d
            })
            .collect();
        self.from_coords(&c)
    }
}
