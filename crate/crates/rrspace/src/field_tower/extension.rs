use super::{Field, Poly, PrimeField};
use crate::error::{Error, Result};
use std::sync::Arc;

#[derive(Debug, PartialEq, Eq)]
struct Level {
    /// Monic modulus over the level below, low to high, elements flattened.
    modulus: Vec<Vec<u64>>,
    below: usize,
}

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    prime: PrimeField,
    levels: Vec<Level>,
    abs_degree: usize,
}

/// A tower F_p ⊂ F_1 ⊂ ... ⊂ F_r of simple extensions, shared by handle.
///
/// Elements are coordinate vectors of length equal to the absolute degree,
/// laid out recursively: the top level's coefficients, each an element of
/// the level below.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionField {
    inner: Arc<Inner>,
}

impl ExtensionField {
    /// The prime field viewed as a depth-0 tower.
    pub fn prime(prime: PrimeField) -> Self {
        ExtensionField {
            inner: Arc::new(Inner {
                prime,
                levels: Vec::new(),
                abs_degree: 1,
            }),
        }
    }

    /// F_p[z]/(modulus).
    pub fn simple(prime: PrimeField, modulus: &Poly<u64>) -> Result<Self> {
        let base = ExtensionField::prime(prime);
        let lifted = Poly::from_vec(&base, modulus.coeffs().iter().map(|c| vec![*c]).collect());
        base.extend(&lifted)
    }

    /// Adjoins a root of `modulus`, which must be monic irreducible over `self`.
    pub fn extend(&self, modulus: &Poly<Vec<u64>>) -> Result<Self> {
        let d = modulus
            .degree()
            .ok_or_else(|| Error::InvalidInput("zero modulus".into()))?;
        if d == 0 || !self.is_one(modulus.lead().unwrap()) {
            return Err(Error::InvalidInput(
                "modulus must be monic of positive degree".into(),
            ));
        }
        if !super::is_irreducible(self, modulus) {
            return Err(Error::InvalidInput("modulus is reducible".into()));
        }
        Ok(self.extend_unchecked(modulus))
    }

    pub(crate) fn extend_unchecked(&self, modulus: &Poly<Vec<u64>>) -> Self {
        let d = modulus.degree().unwrap();
        let mut levels: Vec<Level> = self
            .inner
            .levels
            .iter()
            .map(|l| Level {
                modulus: l.modulus.clone(),
                below: l.below,
            })
            .collect();
        levels.push(Level {
            modulus: modulus.coeffs().to_vec(),
            below: self.inner.abs_degree,
        });
        ExtensionField {
            inner: Arc::new(Inner {
                prime: self.inner.prime,
                levels,
                abs_degree: self.inner.abs_degree * d,
            }),
        }
    }

    pub fn prime_field(&self) -> PrimeField {
        self.inner.prime
    }

    pub fn depth(&self) -> usize {
        self.inner.levels.len()
    }

    /// Degree of the top step.
    pub fn top_degree(&self) -> usize {
        match self.inner.levels.last() {
            Some(l) => l.modulus.len() - 1,
            None => 1,
        }
    }

    /// The field one step down (the prime field for depth <= 1).
    pub fn base(&self) -> ExtensionField {
        let mut levels: Vec<Level> = Vec::new();
        let n = self.depth().saturating_sub(1);
        for l in &self.inner.levels[..n] {
            levels.push(Level {
                modulus: l.modulus.clone(),
                below: l.below,
            });
        }
        let abs = if n == 0 {
            1
        } else {
            self.inner.levels[n].below
        };
        ExtensionField {
            inner: Arc::new(Inner {
                prime: self.inner.prime,
                levels,
                abs_degree: abs,
            }),
        }
    }

    /// Modulus of the top step as a polynomial over `base()`.
    pub fn top_modulus(&self) -> Option<Poly<Vec<u64>>> {
        self.inner
            .levels
            .last()
            .map(|l| Poly::from_vec(&self.base(), l.modulus.clone()))
    }

    /// Root of the top modulus.
    pub fn generator(&self) -> Vec<u64> {
        let mut v = vec![0; self.inner.abs_degree];
        match self.inner.levels.last() {
            Some(l) if l.modulus.len() > 2 => v[l.below] = 1,
            Some(l) => {
                // degree-1 step: the root is -modulus[0]
                let base = self.base();
                let r = base.neg(&l.modulus[0]);
                v[..l.below].copy_from_slice(&r);
            }
            None => v[0] = 0,
        }
        v
    }

    /// Embeds an element of `base()` as a constant.
    pub fn lift_base(&self, a: &[u64]) -> Vec<u64> {
        let mut v = vec![0; self.inner.abs_degree];
        v[..a.len()].copy_from_slice(a);
        v
    }

    /// Splits an element into its top-level coefficients over `base()`.
    pub fn split_top(&self, a: &[u64]) -> Vec<Vec<u64>> {
        match self.inner.levels.last() {
            Some(l) => a.chunks(l.below).map(|c| c.to_vec()).collect(),
            None => vec![a.to_vec()],
        }
    }

    fn mul_at(&self, depth: usize, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.inner.prime;
        if depth == 0 {
            return vec![p.mul(&a[0], &b[0])];
        }
        let lvl = &self.inner.levels[depth - 1];
        let w = lvl.below;
        let d = lvl.modulus.len() - 1;
        let mut prod = vec![vec![0u64; w]; 2 * d - 1];
        for i in 0..d {
            let ai = &a[i * w..(i + 1) * w];
            if ai.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..d {
                let bj = &b[j * w..(j + 1) * w];
                if bj.iter().all(|&x| x == 0) {
                    continue;
                }
                let m = self.mul_at(depth - 1, ai, bj);
                for (s, t) in prod[i + j].iter_mut().zip(m) {
                    *s = p.add(s, &t);
                }
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..d {
                let m = self.mul_at(depth - 1, &c, &lvl.modulus[j]);
                for (s, t) in prod[k - d + j].iter_mut().zip(m) {
                    *s = p.sub(s, &t);
                }
            }
        }
        prod.truncate(d);
        prod.concat()
    }
}

impl Field for ExtensionField {
    type Elem = Vec<u64>;

    fn characteristic(&self) -> u64 {
        self.inner.prime.p()
    }
    fn degree(&self) -> usize {
        self.inner.abs_degree
    }
    fn zero(&self) -> Vec<u64> {
        vec![0; self.inner.abs_degree]
    }
    fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&x| x == 0)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.inner.prime;
        a.iter().zip(b).map(|(x, y)| p.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.inner.prime;
        a.iter().zip(b).map(|(x, y)| p.sub(x, y)).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        let p = self.inner.prime;
        a.iter().map(|x| p.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        self.mul_at(self.depth(), a, b)
    }
    fn inv(&self, a: &Vec<u64>) -> Vec<u64> {
        assert!(!self.is_zero(a), "inverse of zero");
        if self.depth() == 0 {
            return vec![self.inner.prime.inv(&a[0])];
        }
        // s·a + t·m = 1 over the level below
        let base = self.base();
        let pa = Poly::from_vec(&base, self.split_top(a));
        let (g, s, _) = pa.xgcd(&base, &self.top_modulus().unwrap());
        debug_assert!(g.is_one(&base));
        let mut out = self.zero();
        let w = base.degree();
        for (i, c) in s.coeffs().iter().enumerate() {
            out[i * w..(i + 1) * w].copy_from_slice(c);
        }
        out
    }
    fn from_int(&self, v: i64) -> Vec<u64> {
        let mut e = self.zero();
        e[0] = self.inner.prime.from_int(v);
        e
    }
    fn coords(&self, a: &Vec<u64>) -> Vec<u64> {
        a.clone()
    }
    fn from_coords(&self, c: &[u64]) -> Vec<u64> {
        let p = self.characteristic();
        let mut v = self.zero();
        for (s, x) in v.iter_mut().zip(c) {
            *s = x % p;
        }
        v
    }
}
