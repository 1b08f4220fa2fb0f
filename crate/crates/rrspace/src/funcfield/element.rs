use super::{BiPoly, CurveModel, RationalFunction, TPoly};
use crate::error::{Error, Result};
use crate::field_tower::{Poly, PrimeField};
use std::sync::Arc;

/// An element Σ a_i x^i of L with a_i in k(t).
#[derive(Clone, Debug)]
pub struct FunctionFieldElement {
    model: Arc<CurveModel>,
    coords: Vec<RationalFunction>,
}

impl PartialEq for FunctionFieldElement {
    fn eq(&self, o: &Self) -> bool {
        self.coords == o.coords && same_model(&self.model, &o.model)
    }
}

fn same_model(a: &Arc<CurveModel>, b: &Arc<CurveModel>) -> bool {
    Arc::ptr_eq(a, b) || (a.field() == b.field() && a.f() == b.f())
}

type KPoly = Vec<RationalFunction>;

fn ktrim(mut a: KPoly) -> KPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn kdivrem(k: &PrimeField, a: &KPoly, b: &KPoly) -> (KPoly, KPoly) {
    let db = b.len() - 1;
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let inv = b[db].inv(k);
    let mut q = vec![RationalFunction::zero(k); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i].mul(k, &inv);
        if c.is_zero() {
            continue;
        }
        for j in 0..=db {
            r[i - db + j] = r[i - db + j].sub(k, &c.mul(k, &b[j]));
        }
        q[i - db] = c;
    }
    r.truncate(db);
    (ktrim(q), ktrim(r))
}

fn kmul(k: &PrimeField, a: &KPoly, b: &KPoly) -> KPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![RationalFunction::zero(k); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] = v[i + j].add(k, &x.mul(k, y));
        }
    }
    ktrim(v)
}

fn ksub(k: &PrimeField, a: &KPoly, b: &KPoly) -> KPoly {
    let n = a.len().max(b.len());
    let z = RationalFunction::zero(k);
    ktrim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z).sub(k, b.get(i).unwrap_or(&z)))
            .collect(),
    )
}

impl FunctionFieldElement {
    pub fn new(model: Arc<CurveModel>, coords: Vec<RationalFunction>) -> Result<Self> {
        if coords.len() != model.n() {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates, got {}",
                model.n(),
                coords.len()
            )));
        }
        Ok(FunctionFieldElement { model, coords })
    }

    /// h/c with h reduced modulo f.
    pub fn from_bipoly(model: &Arc<CurveModel>, h: &BiPoly, c: &TPoly) -> Self {
        let k = *model.field();
        let r = h.rem_monic(&k, model.f());
        let coords = (0..model.n())
            .map(|i| RationalFunction::new(&k, r.coeff(i), c.clone()))
            .collect();
        FunctionFieldElement {
            model: model.clone(),
            coords,
        }
    }

    pub fn from_rational(model: &Arc<CurveModel>, a: RationalFunction) -> Self {
        let k = *model.field();
        let mut coords = vec![RationalFunction::zero(&k); model.n()];
        coords[0] = a;
        FunctionFieldElement {
            model: model.clone(),
            coords,
        }
    }

    pub fn zero(model: &Arc<CurveModel>) -> Self {
        Self::from_rational(model, RationalFunction::zero(model.field()))
    }

    pub fn one(model: &Arc<CurveModel>) -> Self {
        Self::from_rational(model, RationalFunction::one(model.field()))
    }

    pub fn t(model: &Arc<CurveModel>) -> Self {
        let k = *model.field();
        Self::from_rational(model, RationalFunction::from_poly(&k, Poly::x(&k)))
    }

    pub fn x(model: &Arc<CurveModel>) -> Self {
        let k = *model.field();
        Self::from_bipoly(model, &BiPoly::x(&k), &Poly::one(&k))
    }

    pub fn model(&self) -> &Arc<CurveModel> {
        &self.model
    }

    pub fn coords(&self) -> &[RationalFunction] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn k(&self) -> PrimeField {
        *self.model.field()
    }

    fn check(&self, o: &Self) -> Result<()> {
        if same_model(&self.model, &o.model) {
            Ok(())
        } else {
            Err(Error::InvalidInput(
                "elements belong to different curves".into(),
            ))
        }
    }

    /// (h, c) with self = h/c, c monic of least degree.
    pub fn to_common(&self) -> (BiPoly, TPoly) {
        let k = self.k();
        let mut c = Poly::one(&k);
        for a in &self.coords {
            let g = c.gcd(&k, a.den());
            c = c.mul(&k, &a.den().quo(&k, &g));
        }
        let h = BiPoly::from_coeffs(
            self.coords
                .iter()
                .map(|a| a.num().mul(&k, &c.quo(&k, a.den())))
                .collect(),
        );
        (h, c)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let k = self.k();
        Ok(FunctionFieldElement {
            model: self.model.clone(),
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a.add(&k, b))
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        let k = self.k();
        FunctionFieldElement {
            model: self.model.clone(),
            coords: self.coords.iter().map(|a| a.neg(&k)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let k = self.k();
        let (h1, c1) = self.to_common();
        let (h2, c2) = o.to_common();
        Ok(Self::from_bipoly(
            &self.model,
            &h1.mul(&k, &h2),
            &c1.mul(&k, &c2),
        ))
    }

    pub fn scale(&self, a: &RationalFunction) -> Self {
        let k = self.k();
        FunctionFieldElement {
            model: self.model.clone(),
            coords: self.coords.iter().map(|c| c.mul(&k, a)).collect(),
        }
    }

    /// Multiplication by t^j (j may be negative).
    pub fn mul_t_pow(&self, j: i64) -> Self {
        let k = self.k();
        let tj = Poly::monomial(&k, 1, j.unsigned_abs() as usize);
        let a = if j >= 0 {
            RationalFunction::from_poly(&k, tj)
        } else {
            RationalFunction::new(&k, Poly::one(&k), tj)
        };
        self.scale(&a)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(&self.model);
        for _ in 0..e {
            acc = acc.mul(self).unwrap();
        }
        acc
    }

    /// Inverse via the extended Euclidean algorithm with f over k(t).
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidInput("inverse of zero".into()));
        }
        let k = self.k();
        let fk: KPoly = self
            .model
            .f()
            .coeffs()
            .iter()
            .map(|c| RationalFunction::from_poly(&k, c.clone()))
            .collect();
        let a: KPoly = ktrim(self.coords.clone());
        // s·a ≡ g (mod f)
        let (mut r0, mut r1) = (fk, a);
        let (mut s0, mut s1): (KPoly, KPoly) = (Vec::new(), vec![RationalFunction::one(&k)]);
        while !r1.is_empty() {
            let (q, r) = kdivrem(&k, &r0, &r1);
            let s2 = ksub(&k, &s0, &kmul(&k, &q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r0.len() != 1 {
            return Err(Error::NotIrreducible);
        }
        let ig = r0[0].inv(&k);
        let mut coords: Vec<RationalFunction> = s0.iter().map(|c| c.mul(&k, &ig)).collect();
        coords.resize(self.model.n(), RationalFunction::zero(&k));
        Ok(FunctionFieldElement {
            model: self.model.clone(),
            coords,
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inv()?)
    }

    /// N_{L/K}(self).
    pub fn norm(&self) -> RationalFunction {
        let k = self.k();
        let (h, c) = self.to_common();
        if h.is_zero() {
            return RationalFunction::zero(&k);
        }
        let r = if h.degree() == Some(0) {
            h.coeff(0).pow(&k, self.model.n() as u64)
        } else {
            super::resultant_in_x(&k, self.model.f(), &h).expect("f has positive degree")
        };
        RationalFunction::new(&k, r, c.pow(&k, self.model.n() as u64))
    }
}
