use super::{BiPoly, TPoly};
use crate::error::{Error, Result};
use crate::field_tower::{Poly, PrimeField};

fn exact_div(k: &PrimeField, a: &TPoly, b: &TPoly) -> TPoly {
    let (q, r) = a.divrem(k, b);
    debug_assert!(r.is_zero(), "inexact division in subresultant sequence");
    q
}

/// Res_X(a, b) by the subresultant PRS.
pub fn resultant_in_x(k: &PrimeField, a: &BiPoly, b: &BiPoly) -> Result<TPoly> {
    if a.is_zero() || b.is_zero() {
        return Ok(Poly::zero());
    }
    let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
    if da == 0 && db == 0 {
        return Err(Error::InvalidInput(
            "resultant of two polynomials constant in X".into(),
        ));
    }
    if db == 0 {
        return Ok(b.coeff(0).pow(k, da as u64));
    }
    if da == 0 {
        return Ok(a.coeff(0).pow(k, db as u64));
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut neg = false;
    if da < db {
        std::mem::swap(&mut a, &mut b);
        neg = (da * db) % 2 == 1;
    }
    let one = Poly::one(k);
    let (mut g, mut h) = (one.clone(), one.clone());
    loop {
        let (ma, mb) = (a.degree().unwrap(), b.degree().unwrap());
        let delta = ma - mb;
        if ma % 2 == 1 && mb % 2 == 1 {
            neg = !neg;
        }
        let r = a.prem(k, &b);
        if r.is_zero() {
            return Ok(Poly::zero());
        }
        a = b;
        let den = g.mul(k, &h.pow(k, delta as u64));
        b = r.map_coeffs(|c| exact_div(k, c, &den));
        g = a.lead().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            exact_div(k, &g.pow(k, delta as u64), &h.pow(k, delta as u64 - 1))
        };
        if b.degree() == Some(0) {
            let ma = a.degree().unwrap() as u64;
            let lb = b.coeff(0);
            let res = exact_div(k, &lb.pow(k, ma), &h.pow(k, ma - 1));
            return Ok(if neg { res.neg(k) } else { res });
        }
    }
}

/// disc_X(f) = (-1)^(n(n-1)/2)·Res(f, f') for f monic.
pub fn discriminant(k: &PrimeField, f: &BiPoly) -> Result<TPoly> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Err(Error::InvalidInput("discriminant of a constant".into()));
    }
    if n == 1 {
        return Ok(Poly::one(k));
    }
    let df = f.derivative(k);
    if df.is_zero() {
        return Ok(Poly::zero());
    }
    // f monic, so Res(f, f') is the product of f' over the roots
    let r = resultant_in_x(k, f, &df)?;
    let s = n * (n - 1) / 2;
    Ok(if s % 2 == 1 { r.neg(k) } else { r })
}

/// Squarefree part (product of distinct monic irreducible factors).
pub fn squarefree_part(k: &PrimeField, a: &TPoly) -> Result<TPoly> {
    let mut out = Poly::one(k);
    for (g, _) in crate::field_tower::factor(k, a)? {
        out = out.mul(k, &g);
    }
    Ok(out)
}
