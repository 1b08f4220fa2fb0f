use crate::field_tower::{Field, Poly, PrimeField};

pub type TPoly = Poly<u64>;

/// An element of k(t) in lowest terms with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: TPoly,
    den: TPoly,
}

impl RationalFunction {
    pub fn new(k: &PrimeField, num: TPoly, den: TPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero(k);
        }
        let g = num.gcd(k, &den);
        let (mut n, mut d) = (num.quo(k, &g), den.quo(k, &g));
        let l = k.inv(d.lead().unwrap());
        n = n.scale(k, &l);
        d = d.scale(k, &l);
        RationalFunction { num: n, den: d }
    }

    pub fn zero(k: &PrimeField) -> Self {
        RationalFunction {
            num: Poly::zero(),
            den: Poly::one(k),
        }
    }

    pub fn one(k: &PrimeField) -> Self {
        Self::from_poly(k, Poly::one(k))
    }

    pub fn from_poly(k: &PrimeField, a: TPoly) -> Self {
        RationalFunction {
            num: a,
            den: Poly::one(k),
        }
    }

    pub fn constant(k: &PrimeField, c: u64) -> Self {
        Self::from_poly(k, Poly::constant(k, c))
    }

    pub fn num(&self) -> &TPoly {
        &self.num
    }

    pub fn den(&self) -> &TPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// deg(num) - deg(den); None for zero.
    pub fn degree(&self) -> Option<i64> {
        self.num.degree().map(|d| d as i64 - self.den.deg() as i64)
    }

    pub fn add(&self, k: &PrimeField, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(k, self.num.add(k, &o.num), self.den.clone());
        }
        Self::new(
            k,
            self.num.mul(k, &o.den).add(k, &o.num.mul(k, &self.den)),
            self.den.mul(k, &o.den),
        )
    }

    pub fn neg(&self, k: &PrimeField) -> Self {
        RationalFunction {
            num: self.num.neg(k),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, k: &PrimeField, o: &Self) -> Self {
        self.add(k, &o.neg(k))
    }

    pub fn mul(&self, k: &PrimeField, o: &Self) -> Self {
        Self::new(k, self.num.mul(k, &o.num), self.den.mul(k, &o.den))
    }

    pub fn inv(&self, k: &PrimeField) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::new(k, self.den.clone(), self.num.clone())
    }

    pub fn div(&self, k: &PrimeField, o: &Self) -> Self {
        self.mul(k, &o.inv(k))
    }

    pub fn mul_poly(&self, k: &PrimeField, a: &TPoly) -> Self {
        Self::new(k, self.num.mul(k, a), self.den.clone())
    }

    pub fn div_poly(&self, k: &PrimeField, a: &TPoly) -> Self {
        Self::new(k, self.num.clone(), self.den.mul(k, a))
    }

    /// Valuation at the monic irreducible `p`; None for zero.
    pub fn valuation(&self, k: &PrimeField, p: &TPoly) -> Option<i64> {
        let vn = super::val_at(k, p, &self.num)? as i64;
        Some(vn - super::val_at(k, p, &self.den).unwrap() as i64)
    }
}
