//! Bringing a projective plane curve to a model monic and separable in X.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field_tower::{Field, Poly, PrimeField};
use crate::funcfield::{BiPoly, CurveModel, TPoly, Transform};
use crate::om_places::{Center, PlaceTable};

/// A homogeneous polynomial in X0, X1, X2 over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousPoly {
    k: PrimeField,
    terms: BTreeMap<[usize; 3], u64>,
}

type Sparse = BTreeMap<[usize; 3], u64>;

fn sparse_mul(k: &PrimeField, a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            let c = out.entry(e).or_insert(0);
            *c = k.add(c, &k.mul(ca, cb));
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

impl HomogeneousPoly {
    pub fn new(k: PrimeField, terms: impl IntoIterator<Item = ([usize; 3], u64)>) -> Result<Self> {
        let mut map = Sparse::new();
        for (e, c) in terms {
            let s = map.entry(e).or_insert(0);
            *s = k.add(s, &(c % k.p()));
        }
        map.retain(|_, c| *c != 0);
        let mut degs = map.keys().map(|e| e[0] + e[1] + e[2]);
        let Some(d) = degs.next() else {
            return Err(Error::InvalidInput("zero polynomial".into()));
        };
        if degs.any(|x| x != d) {
            return Err(Error::InvalidInput("polynomial is not homogeneous".into()));
        }
        Ok(HomogeneousPoly { k, terms: map })
    }

    /// X0^n·f(X1/X0, X2/X0) with n the total degree of f.
    pub fn homogenize(k: PrimeField, f: &BiPoly) -> Result<Self> {
        let n = f
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| i + c.deg() as usize)
            .max()
            .unwrap_or(0);
        let mut terms = Vec::new();
        for (i, c) in f.coeffs().iter().enumerate() {
            for (j, a) in c.coeffs().iter().enumerate() {
                if *a != 0 {
                    terms.push(([n - i - j, j, i], *a));
                }
            }
        }
        Self::new(k, terms)
    }

    pub fn field(&self) -> &PrimeField {
        &self.k
    }

    pub fn terms(&self) -> &BTreeMap<[usize; 3], u64> {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        let e = self.terms.keys().next().unwrap();
        e[0] + e[1] + e[2]
    }

    pub fn eval(&self, v: &[u64; 3]) -> u64 {
        let k = &self.k;
        self.terms.iter().fold(0, |acc, (e, c)| {
            let m = (0..3).fold(*c, |m, i| k.mul(&m, &k.pow(&v[i], e[i] as u128)));
            k.add(&acc, &m)
        })
    }

    /// F(M·v): each X_i becomes Σ_j M[i][j]·X_j.
    pub fn transform(&self, m: &[[u64; 3]; 3]) -> Self {
        let k = &self.k;
        let unit = |j: usize| {
            let mut e = [0; 3];
            e[j] = 1;
            e
        };
        let forms: Vec<Sparse> = (0..3)
            .map(|i| {
                (0..3)
                    .filter(|&j| m[i][j] % k.p() != 0)
                    .map(|j| (unit(j), m[i][j] % k.p()))
                    .collect()
            })
            .collect();
        let mut out = Sparse::new();
        for (e, c) in &self.terms {
            let mut t: Sparse = [([0; 3], *c)].into_iter().collect();
            for i in 0..3 {
                for _ in 0..e[i] {
                    t = sparse_mul(k, &t, &forms[i]);
                }
            }
            for (ee, cc) in t {
                let s = out.entry(ee).or_insert(0);
                *s = k.add(s, &cc);
            }
        }
        out.retain(|_, c| *c != 0);
        HomogeneousPoly {
            k: self.k,
            terms: out,
        }
    }

    /// F(1, t, X), or F(1, X, t) when `swapped`.
    pub fn dehomogenize(&self, swapped: bool) -> BiPoly {
        let k = &self.k;
        let n = self.degree();
        let mut c: Vec<Vec<u64>> = vec![vec![0; n + 1]; n + 1];
        for (e, a) in &self.terms {
            let (tj, xi) = if swapped { (e[2], e[1]) } else { (e[1], e[2]) };
            c[xi][tj] = k.add(&c[xi][tj], a);
        }
        BiPoly::from_coeffs(c.into_iter().map(|v| Poly::from_vec(k, v)).collect())
    }
}

fn det3(k: &PrimeField, m: &[[u64; 3]; 3]) -> u64 {
    let term = |a: usize, b: usize, c: usize| k.mul(&m[0][a], &k.mul(&m[1][b], &m[2][c]));
    let pos = k.add(&k.add(&term(0, 1, 2), &term(1, 2, 0)), &term(2, 0, 1));
    let neg = k.add(&k.add(&term(2, 1, 0), &term(0, 2, 1)), &term(1, 0, 2));
    k.sub(&pos, &neg)
}

fn model_from(g: &HomogeneousPoly, swapped: bool) -> Option<CurveModel> {
    let k = g.k;
    let n = g.degree();
    let lead = if swapped { [0, n, 0] } else { [0, 0, n] };
    let c = *g.terms.get(&lead)?;
    let inv = k.inv(&c);
    let f = g
        .dehomogenize(swapped)
        .map_coeffs(|a: &TPoly| a.scale(&k, &inv));
    CurveModel::new(k, f).ok()
}

/// Projective points of P²(F_p), each normalized with first nonzero entry 1.
fn points(p: u64) -> impl Iterator<Item = [u64; 3]> {
    let a = (0..p).flat_map(move |a| (0..p).map(move |b| [1, a, b]));
    let b = (0..p).map(|b| [0, 1, b]);
    a.chain(b).chain(std::iter::once([0, 0, 1]))
}

/// A model of the curve F = 0 that is monic and separable in X, found by
/// sending two rational points off the curve to (0:1:0) and (0:0:1).
pub fn prepare_curve(big_f: &HomogeneousPoly, cap: usize) -> Result<CurveModel> {
    let k = big_f.k;
    let n = big_f.degree();
    if n == 0 {
        return Err(Error::InvalidInput("curve of degree 0".into()));
    }
    let identity = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let finish = |model: CurveModel, matrix: [[u64; 3]; 3], swapped: bool| -> Result<CurveModel> {
        if !is_irreducible_curve(&model, cap)? {
            return Err(Error::NotIrreducible);
        }
        let trivial = matrix == identity && !swapped;
        Ok(if trivial {
            model
        } else {
            model.with_transform(Transform { matrix, swapped })
        })
    };
    for swapped in [false, true] {
        if let Some(m) = model_from(big_f, swapped) {
            return finish(m, identity, swapped);
        }
    }
    let off: Vec<[u64; 3]> = points(k.p()).filter(|v| big_f.eval(v) != 0).collect();
    for p in &off {
        for q in &off {
            if p == q {
                continue;
            }
            for r in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
                let m = [[r[0], q[0], p[0]], [r[1], q[1], p[1]], [r[2], q[2], p[2]]];
                if det3(&k, &m) == 0 {
                    continue;
                }
                let g = big_f.transform(&m);
                for swapped in [false, true] {
                    if let Some(model) = model_from(&g, swapped) {
                        return finish(model, m, swapped);
                    }
                }
                break;
            }
        }
    }
    // Over a field with more than n elements two off-curve points always
    // exist and some separable variable does too unless F has a square factor.
    if k.p() as usize > n {
        return Err(Error::NotIrreducible);
    }
    Err(Error::FieldTooSmall {
        size: k.p() as u128,
        degree: n,
    })
}

/// Irreducibility of f over k(t) by recombining the local factors at t = 0:
/// a factor of f monic in X has t-degrees at most λ·n, so its image modulo
/// t^{λn+1} determines it.
pub fn is_irreducible_curve(model: &CurveModel, cap: usize) -> Result<bool> {
    let k = *model.field();
    let n = model.n();
    let table = PlaceTable::with_cap(Arc::new(model.clone()), cap);
    let places = table.places(&Center::Finite(Poly::x(&k)))?;
    if places.len() == 1 {
        return Ok(true);
    }
    let prec = model.lambda() * n + 1;
    let modulus: TPoly = Poly::monomial(&k, 1, prec);
    let factors = places
        .iter()
        .map(|p| Ok(p.lift_factor(prec, table.cap())?.lifted_factor))
        .collect::<Result<Vec<_>>>()?;
    let r = factors.len();
    for mask in 1..(1u32 << (r - 1)) {
        let mut g = BiPoly::one(&k);
        for (i, h) in factors.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g = g.mul(&k, h).map_coeffs(|a| a.rem(&k, &modulus));
            }
        }
        if model.f().rem_monic(&k, &g).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
