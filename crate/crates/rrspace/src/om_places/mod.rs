//! Places of the function field above a prime of k[t] or above infinity,
//! via OM (Montes) types, with valuations and factor lifting.

mod chain;
mod montes;

pub use chain::Q;

use crate::error::{Error, Result};
use crate::field_tower::{Poly, PrimeField};
use crate::funcfield::{
    format_bipoly, format_tpoly, resultant_in_x, reverse, val_at, BiPoly, CurveModel,
    FunctionFieldElement, TPoly,
};
use chain::Chain;
use montes::{decompose_prime, improve, measure, truncate, Branch};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

pub const DEFAULT_PRECISION_CAP: usize = 4096;

/// A prime of k[t] (monic irreducible) or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Center {
    Finite(TPoly),
    Infinity,
}

impl Center {
    fn key(&self) -> (u8, usize, Vec<u64>) {
        match self {
            Center::Finite(p) => (0, p.deg().max(0) as usize, p.coeffs().to_vec()),
            Center::Infinity => (1, 0, Vec::new()),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Center::Finite(p) => p.deg().max(0) as usize,
            Center::Infinity => 1,
        }
    }

    pub fn format(&self, k: &PrimeField) -> String {
        match self {
            Center::Finite(p) => format_tpoly(k, p, "t"),
            Center::Infinity => "inf".to_string(),
        }
    }
}

impl Ord for Center {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key().cmp(&o.key())
    }
}

impl PartialOrd for Center {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaceId {
    pub center: Center,
    pub index: usize,
}

impl PlaceId {
    pub fn new(center: Center, index: usize) -> Self {
        PlaceId { center, index }
    }

    pub fn format(&self, k: &PrimeField) -> String {
        format!("[{};{}]", self.center.format(k), self.index)
    }
}

#[derive(Debug)]
struct Approx {
    phi: BiPoly,
    lambda: Option<Q>,
}

/// A place: ramification index, residue degree over the center, OM type.
#[derive(Clone, Debug)]
pub struct Place {
    pub id: PlaceId,
    pub e: usize,
    pub f: usize,
    /// Key polynomials in X (y at infinity), lowest degree first.
    pub keys: Vec<BiPoly>,
    /// Monic factor of the local defining polynomial, known modulo p^precision.
    pub lifted_factor: BiPoly,
    pub precision: usize,
    k: PrimeField,
    chain: Chain,
    poly: Arc<BiPoly>,
    /// Σ (e_j f_j − 1) λ_j: bounds the gap between Gauss and chain values.
    slack: Q,
    approx: Arc<Mutex<Approx>>,
}

impl Place {
    /// Degree over k: f times the degree of the center.
    pub fn degree(&self) -> usize {
        self.f * self.id.center.degree()
    }

    pub fn prime(&self) -> &TPoly {
        &self.chain.base.p
    }

    /// Key polynomials as strings, in t and x (u and y at infinity).
    pub fn type_strings(&self) -> Vec<String> {
        let (a, b) = match self.id.center {
            Center::Finite(_) => ("t", "x"),
            Center::Infinity => ("u", "y"),
        };
        self.keys
            .iter()
            .map(|h| format_bipoly(&self.k, h, a, b))
            .collect()
    }

    /// Refines the approximation until its value reaches `goal`.
    fn refine_to(&self, goal: Q, cap: usize) -> Result<()> {
        let mut st = self.approx.lock().unwrap();
        let t = (goal.ceil().to_integer().max(0) as usize) + 2;
        if t > cap + 2 {
            return Err(Error::PrecisionCap(cap));
        }
        let pt = self.chain.base.p_pow(t);
        while let Some(l) = st.lambda {
            if l >= goal {
                break;
            }
            let next = improve(&self.chain, &self.poly, &st.phi, l);
            st.phi = truncate(&self.k, &next, &pt);
            st.lambda = measure(&self.chain, &self.poly, &st.phi);
        }
        Ok(())
    }

    /// v̄(h(θ)) in units where v(p) = 1; None if h(θ) = 0.
    fn reduced_value(&self, h: &BiPoly, cap: usize) -> Result<Option<Q>> {
        if h.is_zero() {
            return Ok(None);
        }
        let r = self.chain.depth();
        loop {
            let (b0, lambda) = {
                let st = self.approx.lock().unwrap();
                (h.rem_monic(&self.k, &st.phi), st.lambda)
            };
            let v = self.chain.mu(r, &b0);
            match (v, lambda) {
                (None, None) => return Ok(None),
                (Some(v), None) => return Ok(Some(v)),
                (Some(v), Some(l)) if v < l => return Ok(Some(v)),
                (v, Some(l)) => {
                    let goal = v.map_or(l, |v| v.max(l)) + 1;
                    self.refine_to(goal, cap)?;
                }
            }
        }
    }

    /// Valuation at this place of h ∈ A[X] (A = k[t], or k[u] at infinity).
    pub fn valuation_poly(&self, h: &BiPoly, cap: usize) -> Result<Option<i64>> {
        Ok(self.reduced_value(h, cap)?.map(|v| {
            let w = v * self.e as i64;
            debug_assert!(w.is_integer());
            w.to_integer()
        }))
    }

    /// Same valuation computed from v_p(Res(h, F̃)) with a lifted factor F̃,
    /// doubling the precision until the result is certified.
    pub fn valuation_poly_resultant(
        &self,
        h: &BiPoly,
        start: usize,
        cap: usize,
    ) -> Result<Option<i64>> {
        if h.is_zero() {
            return Ok(None);
        }
        let mut n = start.max(4);
        loop {
            let lifted = self.lift_factor(n, cap)?;
            let r = resultant_in_x(&self.k, h, &lifted.lifted_factor)?;
            match val_at(&self.k, self.prime(), &r) {
                Some(v) if v + 2 < n => {
                    debug_assert!(v % self.f == 0);
                    return Ok(Some((v / self.f) as i64));
                }
                _ => {
                    if n >= cap {
                        return Err(Error::PrecisionCap(cap));
                    }
                    n = (2 * n).min(cap);
                }
            }
        }
    }

    /// A copy whose `lifted_factor` is congruent to the local factor mod p^n.
    pub fn lift_factor(&self, n: usize, cap: usize) -> Result<Place> {
        if n > cap {
            return Err(Error::PrecisionCap(cap));
        }
        self.refine_to(self.slack + n as i64, cap)?;
        let phi = self.approx.lock().unwrap().phi.clone();
        let mut out = self.clone();
        out.lifted_factor = truncate(&self.k, &phi, &self.chain.base.p_pow(n));
        out.precision = n;
        Ok(out)
    }

    /// The chain values λ_j, ramification indices e_j and residual degrees f_j.
    pub fn slopes(&self) -> Vec<(Q, usize, usize)> {
        self.chain
            .levels
            .iter()
            .map(|l| (l.lambda, l.e as usize, l.fdeg))
            .collect()
    }

    /// Current approximation of the local factor and its value v̄(φ(θ)),
    /// after refining to at least `goal`.
    pub(crate) fn approximation(&self, goal: Q, cap: usize) -> Result<(BiPoly, Option<Q>)> {
        self.refine_to(goal, cap)?;
        let st = self.approx.lock().unwrap();
        Ok((st.phi.clone(), st.lambda))
    }

    /// Multiadic coefficients of h (degree below the approximation's): for
    /// each monomial in the keys, its value and the A-coefficients of X^l,
    /// l < deg φ_1. The layout depends only on the chain.
    pub(crate) fn multiadic(&self, h: &BiPoly, top_degree: usize) -> Vec<(Q, TPoly)> {
        let mut out = Vec::new();
        let r = self.chain.depth();
        multiadic_rec(&self.chain, r, h, top_degree, Q::from_integer(0), &mut out);
        out
    }

    pub fn is_infinite(&self) -> bool {
        self.id.center == Center::Infinity
    }
}

fn multiadic_rec(
    chain: &Chain,
    j: usize,
    b: &BiPoly,
    top: usize,
    base: Q,
    out: &mut Vec<(Q, TPoly)>,
) {
    let k = chain.k();
    if j == 0 {
        for l in 0..chain.base.m1 {
            out.push((base, b.coeff(l)));
        }
        return;
    }
    let lv = &chain.levels[j - 1];
    let slots = top / lv.m;
    let parts = montes::expand_padded(k, b, &lv.phi, slots);
    for (s, part) in parts.iter().enumerate() {
        multiadic_rec(chain, j - 1, part, lv.m, base + lv.lambda * s as i64, out);
    }
}

fn sort_key(k: &PrimeField, keys: &[BiPoly]) -> (usize, Vec<usize>, Vec<Vec<Vec<u64>>>) {
    let _ = k;
    (
        keys.len(),
        keys.iter().map(|h| h.degree().unwrap_or(0)).collect(),
        keys.iter()
            .map(|h| h.coeffs().iter().map(|c| c.coeffs().to_vec()).collect())
            .collect(),
    )
}

fn displayed_keys(b: &Branch) -> Vec<BiPoly> {
    let mut all: Vec<BiPoly> = b.chain.levels.iter().map(|l| l.phi.clone()).collect();
    all.push(b.phi.clone());
    let mut out: Vec<BiPoly> = Vec::new();
    for h in all {
        if let Some(last) = out.last() {
            if last.degree() == h.degree() {
                out.pop();
            }
        }
        out.push(h);
    }
    out
}

/// Places above `center`, in canonical order.
pub fn decompose(model: &CurveModel, center: &Center) -> Result<Vec<Place>> {
    let k = *model.field();
    let (poly, p) = match center {
        Center::Finite(p) => {
            if !p.is_monic(&k) || !crate::field_tower::is_irreducible(&k, p) {
                return Err(Error::InvalidInput(
                    "center must be monic irreducible".into(),
                ));
            }
            (model.f().clone(), p.clone())
        }
        Center::Infinity => (model.f_infinity().clone(), Poly::x(&k)),
    };
    let poly = Arc::new(poly);
    let mut branches = decompose_prime(k, &poly, &p)?;
    branches.sort_by_cached_key(|b| sort_key(&k, &displayed_keys(b)));
    let places = branches
        .into_iter()
        .enumerate()
        .map(|(idx, b)| {
            let slack = b
                .chain
                .levels
                .iter()
                .map(|l| l.lambda * (l.e * l.fdeg as i64 - 1))
                .fold(Q::from_integer(0), |a, x| a + x);
            let lambda = measure(&b.chain, &poly, &b.phi);
            Place {
                id: PlaceId::new(center.clone(), idx),
                e: b.e,
                f: b.f,
                keys: displayed_keys(&b),
                lifted_factor: b.phi.clone(),
                precision: 1,
                k,
                approx: Arc::new(Mutex::new(Approx {
                    phi: b.phi.clone(),
                    lambda,
                })),
                chain: b.chain,
                poly: poly.clone(),
                slack,
            }
        })
        .collect();
    Ok(places)
}

/// Writes b as h / (c · u^{-g}) with h ∈ k[u][y], returning (h, g) where
/// u = 1/t, y = x·u^λ, and c a unit at u = 0.
fn to_infinity(model: &CurveModel, b: &FunctionFieldElement) -> (BiPoly, i64) {
    let k = *model.field();
    let lam = model.lambda() as i64;
    let coords = b.coords();
    let mut parts = Vec::new();
    for (i, a) in coords.iter().enumerate() {
        if a.num().is_zero() {
            parts.push(None);
            continue;
        }
        let dn = a.num().deg() as i64;
        let dd = a.den().deg() as i64;
        let num = reverse(&k, a.num(), dn as usize);
        let den = reverse(&k, a.den(), dd as usize);
        parts.push(Some((num, den, dd - dn - lam * i as i64)));
    }
    let g = parts.iter().flatten().map(|x| x.2).min().unwrap_or(0);
    let mut c = Poly::one(&k);
    for (_, den, _) in parts.iter().flatten() {
        c = c.mul(&k, &den.quo(&k, &den.gcd(&k, &c)));
    }
    let coeffs = parts
        .into_iter()
        .map(|x| match x {
            None => Poly::zero(),
            Some((num, den, gi)) => num.mul(&k, &c.quo(&k, &den)).shift(&k, (gi - g) as usize),
        })
        .collect();
    (BiPoly::from_coeffs(coeffs), g)
}

/// Valuation of a function field element at a place; None for zero.
pub fn valuation(
    model: &CurveModel,
    place: &Place,
    b: &FunctionFieldElement,
    cap: usize,
) -> Result<Option<i64>> {
    valuation_by(model, place, b, |h| place.valuation_poly(h, cap))
}

/// As [`valuation`] but through resultants with a lifted local factor.
pub fn valuation_resultant(
    model: &CurveModel,
    place: &Place,
    b: &FunctionFieldElement,
    cap: usize,
) -> Result<Option<i64>> {
    let start = 2 * val_at(model.field(), place.prime(), model.discriminant()).unwrap_or(0) + 4;
    valuation_by(model, place, b, |h| {
        place.valuation_poly_resultant(h, start, cap)
    })
}

fn valuation_by(
    model: &CurveModel,
    place: &Place,
    b: &FunctionFieldElement,
    vh: impl Fn(&BiPoly) -> Result<Option<i64>>,
) -> Result<Option<i64>> {
    if b.is_zero() {
        return Ok(None);
    }
    let k = *model.field();
    match &place.id.center {
        Center::Finite(p) => {
            let (h, c) = b.to_common();
            let vc = val_at(&k, p, &c).unwrap() as i64;
            Ok(vh(&h)?.map(|v| v - place.e as i64 * vc))
        }
        Center::Infinity => {
            let (h, g) = to_infinity(model, b);
            Ok(vh(&h)?.map(|v| v + place.e as i64 * g))
        }
    }
}

/// Decompositions computed on demand and cached per center.
#[derive(Debug)]
pub struct PlaceTable {
    model: Arc<CurveModel>,
    cap: usize,
    cache: RwLock<BTreeMap<Center, Arc<Vec<Place>>>>,
}

impl PlaceTable {
    pub fn new(model: Arc<CurveModel>) -> Self {
        Self::with_cap(model, DEFAULT_PRECISION_CAP)
    }

    pub fn with_cap(model: Arc<CurveModel>, cap: usize) -> Self {
        PlaceTable {
            model,
            cap,
            cache: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn model(&self) -> &Arc<CurveModel> {
        &self.model
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn places(&self, center: &Center) -> Result<Arc<Vec<Place>>> {
        if let Some(v) = self.cache.read().unwrap().get(center) {
            return Ok(v.clone());
        }
        let v = Arc::new(decompose(&self.model, center)?);
        self.cache
            .write()
            .unwrap()
            .insert(center.clone(), v.clone());
        Ok(v)
    }

    pub fn place(&self, id: &PlaceId) -> Result<Place> {
        let k = *self.model.field();
        let unknown = || Error::UnknownPlace(id.format(&k));
        let places = self.places(&id.center).map_err(|_| unknown())?;
        places.get(id.index).cloned().ok_or_else(unknown)
    }

    pub fn valuation(&self, id: &PlaceId, b: &FunctionFieldElement) -> Result<Option<i64>> {
        let place = self.place(id)?;
        valuation(&self.model, &place, b, self.cap)
    }
}

impl fmt::Display for PlaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.center {
            Center::Finite(p) => write!(f, "[{:?};{}]", p.coeffs(), self.index),
            Center::Infinity => write!(f, "[inf;{}]", self.index),
        }
    }
}
