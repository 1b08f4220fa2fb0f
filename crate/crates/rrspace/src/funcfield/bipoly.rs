use super::TPoly;
use crate::field_tower::{Poly, PrimeField};

/// A polynomial in X with coefficients in k[t], dense in X.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    c: Vec<TPoly>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { c: Vec::new() }
    }

    pub fn from_coeffs(mut c: Vec<TPoly>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        BiPoly { c }
    }

    pub fn constant(a: TPoly) -> Self {
        Self::from_coeffs(vec![a])
    }

    pub fn one(k: &PrimeField) -> Self {
        Self::constant(Poly::one(k))
    }

    /// a·X^i.
    pub fn monomial(a: TPoly, i: usize) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Poly::zero(); i + 1];
        c[i] = a;
        BiPoly { c }
    }

    pub fn x(k: &PrimeField) -> Self {
        Self::monomial(Poly::one(k), 1)
    }

    pub fn coeffs(&self) -> &[TPoly] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> TPoly {
        self.c.get(i).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn lead(&self) -> Option<&TPoly> {
        self.c.last()
    }

    pub fn is_monic(&self, k: &PrimeField) -> bool {
        self.lead().is_some_and(|l| l.is_one(k))
    }

    /// Largest t-degree among the coefficients.
    pub fn t_degree(&self) -> isize {
        self.c.iter().map(|a| a.deg()).max().unwrap_or(-1)
    }

    pub fn add(&self, k: &PrimeField, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i).add(k, &o.coeff(i))).collect())
    }

    pub fn sub(&self, k: &PrimeField, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i).sub(k, &o.coeff(i))).collect())
    }

    pub fn neg(&self, k: &PrimeField) -> Self {
        BiPoly {
            c: self.c.iter().map(|a| a.neg(k)).collect(),
        }
    }

    pub fn scale(&self, k: &PrimeField, a: &TPoly) -> Self {
        Self::from_coeffs(self.c.iter().map(|x| x.mul(k, a)).collect())
    }

    pub fn shift(&self, i: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Poly::zero(); i];
        c.extend(self.c.iter().cloned());
        BiPoly { c }
    }

    pub fn mul(&self, k: &PrimeField, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Poly::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] = v[i + j].add(k, &a.mul(k, b));
                }
            }
        }
        Self::from_coeffs(v)
    }

    pub fn pow(&self, k: &PrimeField, e: usize) -> Self {
        let mut acc = Self::one(k);
        for _ in 0..e {
            acc = acc.mul(k, self);
        }
        acc
    }

    /// Division by a polynomial monic in X.
    pub fn divrem_monic(&self, k: &PrimeField, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero");
        assert!(d.is_monic(k), "divisor must be monic in X");
        if self.c.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut r = self.c.clone();
        let mut q = vec![Poly::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = std::mem::take(&mut r[i]);
            if c.is_zero() {
                continue;
            }
            for j in 0..dd {
                if !d.c[j].is_zero() {
                    r[i - dd + j] = r[i - dd + j].sub(k, &c.mul(k, &d.c[j]));
                }
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    pub fn rem_monic(&self, k: &PrimeField, d: &Self) -> Self {
        self.divrem_monic(k, d).1
    }

    /// Pseudo-remainder: lc(d)^(deg self - deg d + 1)·self mod d.
    pub fn prem(&self, k: &PrimeField, d: &Self) -> Self {
        let dd = d.degree().expect("division by zero");
        if self.c.len() <= dd {
            return self.clone();
        }
        let l = d.lead().unwrap().clone();
        let mut r = self.clone();
        let mut steps = self.c.len() - dd;
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.c[rd].clone();
            r = r.scale(k, &l).sub(k, &d.scale(k, &c).shift(rd - dd));
            steps -= 1;
        }
        r.scale(k, &l.pow(k, steps as u64))
    }

    pub fn derivative(&self, k: &PrimeField) -> Self {
        use crate::field_tower::Field;
        Self::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a.scale(k, &k.from_int(i as i64)))
                .collect(),
        )
    }

    /// Substitutes t = t0, giving a polynomial over k in X.
    pub fn eval_t(&self, k: &PrimeField, t0: u64) -> Poly<u64> {
        Poly::from_vec(k, self.c.iter().map(|a| a.eval(k, &t0)).collect())
    }

    /// Reduces every coefficient modulo `m` in k[t].
    pub fn rem_coeffs(&self, k: &PrimeField, m: &TPoly) -> Self {
        Self::from_coeffs(self.c.iter().map(|a| a.rem(k, m)).collect())
    }

    pub fn map_coeffs(&self, g: impl Fn(&TPoly) -> TPoly) -> Self {
        Self::from_coeffs(self.c.iter().map(g).collect())
    }
}
