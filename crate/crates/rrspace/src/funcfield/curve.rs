use super::{discriminant, BiPoly, TPoly};
use crate::error::{Error, Result};
use crate::field_tower::{factor, Poly, PrimeField};

/// Projective change of coordinates applied while preparing a curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transform {
    /// Columns are the images of the coordinate points e0, e1, e2.
    pub matrix: [[u64; 3]; 3],
    /// Whether the roles of t and x were exchanged afterwards.
    pub swapped: bool,
}

/// A plane curve f(t, X) = 0, f monic and separable in X.
#[derive(Clone, Debug)]
pub struct CurveModel {
    field: PrimeField,
    f: BiPoly,
    n: usize,
    disc: TPoly,
    disc_primes: Vec<TPoly>,
    lambda: usize,
    f_inf: BiPoly,
    transform: Option<Transform>,
}

impl CurveModel {
    pub fn new(field: PrimeField, f: BiPoly) -> Result<Self> {
        let n = f.degree().unwrap_or(0);
        if n == 0 {
            return Err(Error::InvalidInput(
                "curve must have positive degree in x".into(),
            ));
        }
        if !f.is_monic(&field) {
            return Err(Error::NotMonic);
        }
        let disc = discriminant(&field, &f)?;
        if disc.is_zero() {
            return Err(Error::InvalidInput("curve is not separable in x".into()));
        }
        let disc_primes = factor(&field, &disc)?
            .into_iter()
            .map(|(g, _)| g)
            .filter(|g| g.degree().unwrap_or(0) > 0)
            .collect();
        let lambda = (0..n)
            .map(|i| {
                let d = f.coeff(i).deg();
                if d <= 0 {
                    0
                } else {
                    (d as usize).div_ceil(n - i)
                }
            })
            .max()
            .unwrap_or(0);
        let f_inf = infinity_model(&field, &f, lambda);
        Ok(CurveModel {
            field,
            f,
            n,
            disc,
            disc_primes,
            lambda,
            f_inf,
            transform: None,
        })
    }

    pub(crate) fn with_transform(mut self, t: Transform) -> Self {
        self.transform = Some(t);
        self
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }
    pub fn f(&self) -> &BiPoly {
        &self.f
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn discriminant(&self) -> &TPoly {
        &self.disc
    }
    /// Monic irreducible factors of the discriminant, sorted.
    pub fn discriminant_primes(&self) -> &[TPoly] {
        &self.disc_primes
    }
    pub fn discriminant_sf(&self) -> TPoly {
        self.disc_primes
            .iter()
            .fold(Poly::one(&self.field), |a, g| a.mul(&self.field, g))
    }
    pub fn lambda(&self) -> usize {
        self.lambda
    }
    /// f∞(Y) = t^(-nλ) f(t^λ Y) written in u = 1/t.
    pub fn f_infinity(&self) -> &BiPoly {
        &self.f_inf
    }
    pub fn transform(&self) -> Option<&Transform> {
        self.transform.as_ref()
    }
}

/// u^(d) a(1/u) for d >= deg a.
pub fn reverse(k: &PrimeField, a: &TPoly, d: usize) -> TPoly {
    if a.is_zero() {
        return Poly::zero();
    }
    let mut c = vec![0u64; d + 1];
    for (i, x) in a.coeffs().iter().enumerate() {
        c[d - i] = *x;
    }
    Poly::from_vec(k, c)
}

fn infinity_model(k: &PrimeField, f: &BiPoly, lambda: usize) -> BiPoly {
    let n = f.degree().unwrap();
    BiPoly::from_coeffs(
        (0..=n)
            .map(|i| reverse(k, &f.coeff(i), lambda * (n - i)))
            .collect(),
    )
}
