//! Montes-style decomposition of a prime of k[v] in k[v][X]/(f).

use super::chain::{expand, Base, Chain, Q};
use crate::error::{Error, Result};
use crate::field_tower::{factor, ExtensionField, Field, Poly, PrimeField};
use crate::funcfield::{BiPoly, TPoly};
use std::sync::Arc;

/// A branch of the decomposition: a complete chain and a key polynomial
/// approximating the local factor.
#[derive(Clone, Debug)]
pub(crate) struct Branch {
    pub chain: Chain,
    pub phi: BiPoly,
    pub e: usize,
    pub f: usize,
}

/// Lower convex hull sides with slope λ > κ, as (s0, s1, λ).
fn principal_sides(pts: &[(usize, Q)], kappa: Q) -> Vec<(usize, usize, Q)> {
    let mut hull: Vec<(usize, Q)> = Vec::new();
    for &(s, y) in pts {
        while hull.len() >= 2 {
            let (s1, y1) = hull[hull.len() - 2];
            let (s2, y2) = hull[hull.len() - 1];
            // drop (s2,y2) if it lies on or above the segment (s1,y1)-(s,y)
            let lhs = (y2 - y1) * (s as i64 - s1 as i64);
            let rhs = (y - y1) * (s2 as i64 - s1 as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((s, y));
    }
    hull.windows(2)
        .map(|w| {
            let lambda = (w[0].1 - w[1].1) / (w[1].0 as i64 - w[0].0 as i64);
            (w[0].0, w[1].0, lambda)
        })
        .take_while(|&(_, _, l)| l > kappa)
        .collect()
}

pub(crate) fn decompose_prime(k: PrimeField, f: &BiPoly, p: &TPoly) -> Result<Vec<Branch>> {
    let dp = p
        .degree()
        .ok_or_else(|| Error::InvalidInput("zero prime".into()))?;
    if dp == 0 {
        return Err(Error::InvalidInput("constant prime".into()));
    }
    let f0 = if dp == 1 {
        ExtensionField::prime(k)
    } else {
        ExtensionField::simple(k, p)?
    };
    let fbar = Poly::from_vec(
        &f0,
        f.coeffs()
            .iter()
            .map(|c| {
                let mut r = c.rem(&k, p).into_coeffs();
                r.resize(dp, 0);
                r
            })
            .collect(),
    );
    let mut out = Vec::new();
    for (psi0, omega) in factor(&f0, &fbar)? {
        let base = Arc::new(Base::new(k, p.clone(), f0.clone(), psi0.clone()));
        let phi1 = BiPoly::from_coeffs(psi0.coeffs().iter().map(|c| base.lift0(c)).collect());
        let chain = Chain::new(base.clone());
        if omega == 1 {
            out.push(Branch {
                chain,
                phi: phi1,
                e: 1,
                f: base.m1,
            });
        } else {
            recurse(&chain, f, &phi1, &mut out);
        }
    }
    Ok(out)
}

fn recurse(chain: &Chain, f: &BiPoly, phi: &BiPoly, out: &mut Vec<Branch>) {
    let k = *chain.k();
    let i = chain.depth() + 1;
    let a = expand(&k, f, phi);
    let kappa = if i == 1 {
        Q::from_integer(0)
    } else {
        chain.mu(i - 1, phi).unwrap()
    };
    let pts: Vec<(usize, Q)> = a
        .iter()
        .enumerate()
        .filter_map(|(s, b)| chain.mu(i - 1, b).map(|v| (s, v)))
        .collect();
    for (s0, s1, lambda) in principal_sides(&pts, kappa) {
        let e = chain.rel_e(i, lambda);
        let r = chain.residual_poly(i, &a, s0, s1, lambda, e);
        let fi = chain.field(i).clone();
        let factors = factor(&fi, &r.monic(&fi)).expect("nonzero residual polynomial");
        for (psi, mult) in factors {
            let key = chain.key_poly(i, phi, lambda, e, &psi);
            if mult == 1 {
                let nc = chain.push(phi, lambda, e, &psi);
                let fdeg: usize = nc.base.m1 * nc.levels.iter().map(|l| l.fdeg).product::<usize>();
                out.push(Branch {
                    e: nc.big_e(nc.depth()) as usize,
                    f: fdeg,
                    chain: nc,
                    phi: key,
                });
            } else if e == 1 && psi.degree() == Some(1) {
                recurse(chain, f, &key, out);
            } else {
                let nc = chain.push(phi, lambda, e, &psi);
                recurse(&nc, f, &key, out);
            }
        }
    }
}

/// v̄(φ(θ)) for the key φ of a branch: None if φ divides f.
pub(crate) fn measure(chain: &Chain, f: &BiPoly, phi: &BiPoly) -> Option<Q> {
    let k = chain.k();
    let r = chain.depth();
    let (q, a0) = f.divrem_monic(k, phi);
    if a0.is_zero() {
        return None;
    }
    let a1 = q.rem_monic(k, phi);
    Some(chain.mu(r, &a0).unwrap() - chain.mu(r, &a1).expect("unit coefficient"))
}

/// One Newton step: a key of the same degree with larger value.
pub(crate) fn improve(chain: &Chain, f: &BiPoly, phi: &BiPoly, lambda: Q) -> BiPoly {
    let k = *chain.k();
    let i = chain.depth() + 1;
    let (q, a0) = f.divrem_monic(&k, phi);
    let a1 = q.rem_monic(&k, phi);
    let a = [a0, a1];
    let fi = chain.field(i).clone();
    let r = chain.residual_poly(i, &a, 0, 1, lambda, 1);
    let rho = fi.neg(&fi.div(&r.coeff(&fi, 0), &r.coeff(&fi, 1)));
    let psi = Poly::from_vec(&fi, vec![fi.neg(&rho), fi.one()]);
    chain.key_poly(i, phi, lambda, 1, &psi)
}

/// Coefficients reduced modulo p^n.
pub(crate) fn truncate(k: &PrimeField, a: &BiPoly, pn: &TPoly) -> BiPoly {
    a.rem_coeffs(k, pn)
}

/// φ-adic expansion with exactly `slots` coefficients.
pub(crate) fn expand_padded(k: &PrimeField, a: &BiPoly, phi: &BiPoly, slots: usize) -> Vec<BiPoly> {
    let mut v = expand(k, a, phi);
    debug_assert!(v.len() <= slots);
    v.resize(slots, BiPoly::zero());
    v
}
