//! Triangular bases of I(D) over k[t] and of I∞(D) over k[1/t]_(1/t).
//!
//! Locally at a prime p, the numerators of the normalized ideal I* are read
//! off a lattice: h ∈ A[X]_{<n} satisfies h/p^E ∈ I* iff finitely many
//! multiadic coefficients of h vanish modulo prescribed powers of p. The
//! kernel of these congruences is put in triangular (Hermite) form over
//! A/p^E. Local numerators are then glued by CRT.

use crate::divisors::{normalize, Divisor, NormalizationData};
use crate::error::{Error, Result};
use crate::field_tower::{Field, Poly, PrimeField};
use crate::funcfield::{
    discriminant, format_bipoly, reverse, val_at, BiPoly, CurveModel, FunctionFieldElement,
    RationalFunction, TPoly,
};
use crate::om_places::{Center, Place, PlaceTable, Q};
use crate::polymat::PolyMatrix;
use std::sync::Arc;

/// Monic numerators h_i of degree i with h_i/p^{w_i} an A_p-basis of I*_p.
#[derive(Clone, Debug)]
pub struct LocalBasis {
    pub prime: TPoly,
    pub numerators: Vec<BiPoly>,
    pub exponents: Vec<usize>,
}

impl LocalBasis {
    fn trivial(k: &PrimeField, prime: &TPoly, n: usize) -> Self {
        LocalBasis {
            prime: prime.clone(),
            numerators: (0..n).map(|i| BiPoly::x(k).pow(k, i)).collect(),
            exponents: vec![0; n],
        }
    }

    pub fn index(&self) -> usize {
        self.exponents.iter().sum()
    }
}

/// Arithmetic in A/p^E.
struct Truncated<'a> {
    k: &'a PrimeField,
    p: &'a TPoly,
    modulus: TPoly,
    e: usize,
}

impl<'a> Truncated<'a> {
    fn new(k: &'a PrimeField, p: &'a TPoly, e: usize) -> Self {
        Truncated {
            k,
            p,
            modulus: p.pow(k, e as u64),
            e,
        }
    }

    fn red(&self, a: &TPoly) -> TPoly {
        a.rem(self.k, &self.modulus)
    }

    fn val(&self, a: &TPoly) -> usize {
        val_at(self.k, self.p, a).map_or(self.e, |v| v.min(self.e))
    }

    fn p_pow(&self, c: usize) -> TPoly {
        self.p.pow(self.k, c as u64)
    }

    fn unit_inv(&self, u: &TPoly) -> TPoly {
        let (g, s, _) = u.xgcd(self.k, &self.modulus);
        debug_assert!(g.is_one(self.k));
        self.red(&s)
    }

    /// q with a ≡ q·b, assuming v(a) ≥ v(b).
    fn quot(&self, a: &TPoly, b: &TPoly) -> TPoly {
        let s = self.val(b);
        let ps = self.p_pow(s);
        let a1 = a.quo(self.k, &ps);
        let b1 = b.quo(self.k, &ps);
        self.red(&a1.mul(self.k, &self.unit_inv(&b1)))
    }

    fn axpy(&self, x: &mut [TPoly], f: &TPoly, y: &[TPoly]) {
        for (xi, yi) in x.iter_mut().zip(y) {
            *xi = self.red(&xi.sub(self.k, &f.mul(self.k, yi)));
        }
    }
}

fn ceil_q(q: Q) -> i64 {
    q.ceil().to_integer()
}

/// Local triangular basis at the prime below `places` of the ideal with
/// multiplicities `nstar` (≥ 0) at those places.
pub fn local_basis(
    k: &PrimeField,
    prime: &TPoly,
    places: &[Place],
    nstar: &[i64],
    n: usize,
    disc_val: usize,
    cap: usize,
) -> Result<LocalBasis> {
    let bound = places
        .iter()
        .zip(nstar)
        .map(|(q, &m)| (m + q.e as i64 - 1).div_euclid(q.e as i64))
        .max()
        .unwrap_or(0)
        .max(0) as usize;
    let big_e = bound + disc_val / 2;
    if big_e == 0 {
        return Ok(LocalBasis::trivial(k, prime, n));
    }
    let r = Truncated::new(k, prime, big_e);
    // congruence rows over the columns X^0..X^{n-1}
    let mut rows: Vec<Vec<TPoly>> = Vec::new();
    for (q, &m) in places.iter().zip(nstar) {
        let gamma = Q::from_integer(big_e as i64) - Q::new(m, q.e as i64);
        let (phi, _) = q.approximation(gamma, cap)?;
        let top = phi.degree().unwrap();
        let cols: Vec<Vec<(Q, TPoly)>> = (0..n)
            .map(|i| q.multiadic(&BiPoly::x(k).pow(k, i).rem_monic(k, &phi), top))
            .collect();
        for slot in 0..cols[0].len() {
            let a = ceil_q(gamma - cols[0][slot].0);
            if a <= 0 {
                continue;
            }
            let scale = r.p_pow(big_e - a as usize);
            rows.push(
                cols.iter()
                    .map(|c| r.red(&c[slot].1.mul(k, &scale)))
                    .collect(),
            );
        }
    }
    let gens = kernel(&r, rows, n);
    let (numerators, exponents) = hermite(&r, gens, n)?;
    Ok(LocalBasis {
        prime: prime.clone(),
        numerators,
        exponents,
    })
}

/// Generators of {h : C·h ≡ 0 mod p^E}, by simultaneous row and column
/// elimination with minimal-valuation pivots.
fn kernel(r: &Truncated, mut c: Vec<Vec<TPoly>>, n: usize) -> Vec<Vec<TPoly>> {
    let k = r.k;
    let mut v: Vec<Vec<TPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Poly::one(k) } else { Poly::zero() })
                .collect()
        })
        .collect();
    let mut row_done = vec![false; c.len()];
    let mut col_done = vec![false; n];
    let mut scale = vec![0usize; n];
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in c.iter().enumerate() {
            if row_done[i] {
                continue;
            }
            for j in 0..n {
                if col_done[j] {
                    continue;
                }
                let s = r.val(&row[j]);
                if s < r.e && best.map_or(true, |b| s < b.2) {
                    best = Some((i, j, s));
                }
            }
        }
        let Some((pi, pj, s)) = best else { break };
        for j in 0..n {
            if j == pj || col_done[j] || c[pi][j].is_zero() {
                continue;
            }
            let f = r.quot(&c[pi][j], &c[pi][pj]);
            for row in c.iter_mut().chain(v.iter_mut()) {
                let d = r.red(&row[j].sub(k, &f.mul(k, &row[pj])));
                row[j] = d;
            }
        }
        let pivot_row = c[pi].clone();
        for (i, row) in c.iter_mut().enumerate() {
            if i != pi && !row_done[i] && !row[pj].is_zero() {
                let f = r.quot(&row[pj], &pivot_row[pj]);
                r.axpy(row, &f, &pivot_row);
            }
        }
        row_done[pi] = true;
        col_done[pj] = true;
        scale[pj] = r.e - s;
    }
    (0..n)
        .map(|j| {
            let m = r.p_pow(scale[j]);
            (0..n).map(|i| r.red(&v[i][j].mul(k, &m))).collect()
        })
        .collect()
}

/// Triangular form of the lattice spanned by `gens` and p^E·A^n; returns
/// the monic numerators and exponents w_j = E − v(diagonal_j).
fn hermite(
    r: &Truncated,
    mut gens: Vec<Vec<TPoly>>,
    n: usize,
) -> Result<(Vec<BiPoly>, Vec<usize>)> {
    let k = r.k;
    let mut nums = vec![BiPoly::zero(); n];
    let mut exps = vec![0usize; n];
    for j in (0..n).rev() {
        let best = gens
            .iter()
            .enumerate()
            .map(|(i, g)| (r.val(&g[j]), i))
            .filter(|x| x.0 < r.e)
            .min();
        let Some((c, idx)) = best else {
            nums[j] = BiPoly::x(k).pow(k, j);
            continue;
        };
        let mut b = gens.swap_remove(idx);
        let unit = b[j].quo(k, &r.p_pow(c));
        let ui = r.unit_inv(&unit);
        for x in b.iter_mut() {
            *x = r.red(&x.mul(k, &ui));
        }
        for g in gens.iter_mut() {
            if !g[j].is_zero() {
                let f = r.quot(&g[j], &b[j]);
                r.axpy(g, &f, &b);
            }
        }
        let w = r.e - c;
        let pc = r.p_pow(c);
        let pw = r.p_pow(w);
        let mut coeffs = Vec::with_capacity(j + 1);
        for x in &b[..j] {
            let (q, rem) = x.divrem(k, &pc);
            if !rem.is_zero() {
                return Err(Error::ContractViolation(
                    "non-integral triangular numerator".into(),
                ));
            }
            coeffs.push(q.rem(k, &pw));
        }
        coeffs.push(Poly::one(k));
        nums[j] = BiPoly::from_coeffs(coeffs);
        exps[j] = w;
    }
    if exps.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::ContractViolation(
            "triangular exponents not monotone".into(),
        ));
    }
    Ok((nums, exps))
}

/// Combines local numerators so that g_i ≡ h_{i,p} mod p^{w_{i,p}}.
fn crt_glue(k: &PrimeField, locals: &[LocalBasis], n: usize) -> (Vec<BiPoly>, Vec<TPoly>) {
    let mut nums: Vec<BiPoly> = Vec::with_capacity(n);
    let mut dens: Vec<TPoly> = Vec::with_capacity(n);
    for i in 0..n {
        let mut modulus: TPoly = Poly::one(k);
        let mut coeffs: Vec<TPoly> = vec![Poly::zero(); i];
        for lb in locals {
            let w = lb.exponents[i];
            if w == 0 {
                continue;
            }
            let m = lb.prime.pow(k, w as u64);
            let (_, s, _) = modulus.xgcd(k, &m);
            // s·modulus ≡ 1 mod m
            for (l, c) in coeffs.iter_mut().enumerate() {
                let target = lb.numerators[i].coeff(l);
                let delta = target.sub(k, c).mul(k, &s).rem(k, &m);
                *c = c.add(k, &modulus.mul(k, &delta));
            }
            modulus = modulus.mul(k, &m);
        }
        for c in coeffs.iter_mut() {
            *c = c.rem(k, &modulus);
        }
        coeffs.push(Poly::one(k));
        let mut g = BiPoly::from_coeffs(coeffs);
        // Hermite reduction: coefficient of x^l modulo p_i/p_l
        for l in (1..i).rev() {
            let ratio = modulus.quo(k, &dens[l]);
            let a = g.coeff(l).quo(k, &ratio);
            if !a.is_zero() {
                g = g.sub(k, &nums[l].scale(k, &a.mul(k, &ratio)));
            }
        }
        if i > 0 {
            let mut c = g.coeffs().to_vec();
            c[0] = c[0].rem(k, &modulus);
            g = BiPoly::from_coeffs(c);
        }
        nums.push(g);
        dens.push(modulus);
    }
    (nums, dens)
}

/// A k[t]-basis (q·g_i/p_i) of I(D), g_i monic of degree i in x.
#[derive(Clone, Debug)]
pub struct TriangularBasisFinite {
    k: PrimeField,
    pub q: RationalFunction,
    pub numerators: Vec<BiPoly>,
    pub denominators: Vec<TPoly>,
    pub locals: Vec<LocalBasis>,
}

impl TriangularBasisFinite {
    pub fn delta(&self) -> usize {
        self.denominators
            .iter()
            .map(|p| p.deg().max(0) as usize)
            .sum()
    }

    pub fn exp(&self) -> usize {
        self.denominators
            .last()
            .map_or(0, |p| p.deg().max(0) as usize)
    }

    pub fn elements(&self, model: &Arc<CurveModel>) -> Vec<FunctionFieldElement> {
        let k = *model.field();
        self.numerators
            .iter()
            .zip(&self.denominators)
            .map(|(g, p)| {
                FunctionFieldElement::from_bipoly(
                    model,
                    &g.scale(&k, self.q.num()),
                    &p.mul(&k, self.q.den()),
                )
            })
            .collect()
    }

    /// p_{n−1}·M*, the rows of I* = (1, g_1/p_1, …) cleared to k[t].
    pub fn m_tilde(&self) -> PolyMatrix {
        let n = self.numerators.len();
        let k = self.k();
        let top = self.denominators[n - 1].clone();
        let rows = self
            .numerators
            .iter()
            .zip(&self.denominators)
            .map(|(g, p)| {
                let f = top.quo(&k, p);
                (0..n).map(|j| g.coeff(j).mul(&k, &f)).collect()
            })
            .collect();
        PolyMatrix::from_rows(rows).expect("square")
    }

    fn k(&self) -> PrimeField {
        self.k
    }

    pub fn format_entries(&self) -> Vec<(String, String)> {
        let k = self.k();
        self.numerators
            .iter()
            .zip(&self.denominators)
            .map(|(g, p)| {
                (
                    format_bipoly(&k, g, "t", "x"),
                    crate::funcfield::format_tpoly(&k, p, "t"),
                )
            })
            .collect()
    }
}

/// A k[u]_(u)-basis u^m·(h_i(u,y)/u^{m_i}) of I∞(D), with y = x·u^λ.
#[derive(Clone, Debug)]
pub struct TriangularBasisInfinity {
    pub m: i64,
    pub numerators: Vec<BiPoly>,
    pub exponents: Vec<usize>,
}

impl TriangularBasisInfinity {
    pub fn delta(&self) -> usize {
        self.exponents.iter().sum()
    }

    pub fn exp(&self) -> usize {
        self.exponents.last().copied().unwrap_or(0)
    }

    pub fn elements(&self, model: &Arc<CurveModel>) -> Vec<FunctionFieldElement> {
        let k = *model.field();
        let lam = model.lambda() as i64;
        self.numerators
            .iter()
            .zip(&self.exponents)
            .map(|(h, &mi)| {
                let coords = (0..model.n())
                    .map(|j| u_to_t(&k, &h.coeff(j), self.m - mi as i64 + lam * j as i64))
                    .collect();
                FunctionFieldElement::new(model.clone(), coords).expect("length n")
            })
            .collect()
    }

    /// u^e·N'·diag(1, u^λ, …) in k[u], e = m_{n−1}.
    pub fn n_tilde(&self, k: PrimeField, lambda: usize) -> PolyMatrix {
        let n = self.numerators.len();
        let e = self.exp();
        let rows = self
            .numerators
            .iter()
            .zip(&self.exponents)
            .map(|(h, &mi)| {
                (0..n)
                    .map(|j| h.coeff(j).shift(&k, e - mi + lambda * j))
                    .collect()
            })
            .collect();
        PolyMatrix::from_rows(rows).expect("square")
    }
}

/// c(u)·u^s as a rational function of t = 1/u.
pub fn u_to_t(k: &PrimeField, c: &TPoly, s: i64) -> RationalFunction {
    if c.is_zero() {
        return RationalFunction::zero(k);
    }
    let d = c.deg() as usize;
    let num = reverse(k, c, d);
    let e = s + d as i64;
    let tp = Poly::monomial(k, k.one(), e.unsigned_abs() as usize);
    if e >= 0 {
        RationalFunction::new(k, num, tp)
    } else {
        RationalFunction::new(k, num.mul(k, &tp), Poly::one(k))
    }
}

fn star_at(norm: &NormalizationData, places: &[Place]) -> Vec<i64> {
    places.iter().map(|p| norm.star.get(&p.id)).collect()
}

pub fn triangular_basis_finite(table: &PlaceTable, d: &Divisor) -> Result<TriangularBasisFinite> {
    let norm = normalize(table, d)?;
    triangular_basis_finite_with(table, d, &norm)
}

pub(crate) fn triangular_basis_finite_with(
    table: &PlaceTable,
    d: &Divisor,
    norm: &NormalizationData,
) -> Result<TriangularBasisFinite> {
    let model = table.model();
    let k = *model.field();
    let n = model.n();
    let mut primes: Vec<Center> = model
        .discriminant_primes()
        .iter()
        .cloned()
        .map(Center::Finite)
        .collect();
    primes.extend(d.centers().into_iter().filter(|c| *c != Center::Infinity));
    primes.sort();
    primes.dedup();
    let mut locals = Vec::new();
    for c in &primes {
        let Center::Finite(p) = c else { unreachable!() };
        let places = table.places(c)?;
        let dv = val_at(&k, p, model.discriminant()).unwrap_or(0);
        locals.push(local_basis(
            &k,
            p,
            &places,
            &star_at(norm, &places),
            n,
            dv,
            table.cap(),
        )?);
    }
    let (numerators, denominators) = crt_glue(&k, &locals, n);
    Ok(TriangularBasisFinite {
        k,
        q: norm.q_i.clone(),
        numerators,
        denominators,
        locals,
    })
}

pub fn triangular_basis_infinity(
    table: &PlaceTable,
    d: &Divisor,
) -> Result<TriangularBasisInfinity> {
    let norm = normalize(table, d)?;
    triangular_basis_infinity_with(table, &norm)
}

pub(crate) fn triangular_basis_infinity_with(
    table: &PlaceTable,
    norm: &NormalizationData,
) -> Result<TriangularBasisInfinity> {
    let model = table.model();
    let k = *model.field();
    let n = model.n();
    let places = table.places(&Center::Infinity)?;
    let u = Poly::x(&k);
    let disc = discriminant(&k, model.f_infinity())?;
    let dv = val_at(&k, &u, &disc).unwrap_or(0);
    let lb = local_basis(&k, &u, &places, &star_at(norm, &places), n, dv, table.cap())?;
    Ok(TriangularBasisInfinity {
        m: norm.m_inf,
        numerators: lb.numerators,
        exponents: lb.exponents,
    })
}

/// Semi-valuation w(h) = min over places above p of (v_q(h) + n*_q)/e_q.
pub fn semivaluation(places: &[Place], nstar: &[i64], h: &BiPoly, cap: usize) -> Result<Option<Q>> {
    let mut w: Option<Q> = None;
    for (q, &m) in places.iter().zip(nstar) {
        if let Some(v) = q.valuation_poly(h, cap)? {
            let x = Q::new(v + m, q.e as i64);
            w = Some(w.map_or(x, |y| y.min(x)));
        }
    }
    Ok(w)
}

/// MaxMin search over monic products of X, the key polynomials and the
/// approximate local factors, maximizing ⌊w⌋ in each degree.
pub fn maxmin_local(
    k: &PrimeField,
    places: &[Place],
    nstar: &[i64],
    n: usize,
    cap: usize,
) -> Result<(Vec<BiPoly>, Vec<i64>)> {
    let mut atoms: Vec<BiPoly> = vec![BiPoly::x(k)];
    for q in places {
        atoms.extend(q.keys.iter().cloned());
        let (phi, _) = q.approximation(Q::from_integer(n as i64 + 2), cap)?;
        atoms.push(phi);
    }
    atoms.sort_by_key(|a| {
        (
            a.degree(),
            a.coeffs()
                .iter()
                .map(|c| c.coeffs().to_vec())
                .collect::<Vec<_>>(),
        )
    });
    atoms.dedup();
    let mut best: Vec<Option<(i64, BiPoly)>> = vec![None; n];
    best[0] = Some((0, BiPoly::one(k)));
    let mut stack: Vec<(usize, BiPoly)> = vec![(0, BiPoly::one(k))];
    while let Some((start, h)) = stack.pop() {
        let d = h.degree().unwrap();
        for (ai, a) in atoms.iter().enumerate().skip(start) {
            let nd = d + a.degree().unwrap();
            if nd >= n {
                continue;
            }
            let g = h.mul(k, a);
            if let Some(w) = semivaluation(places, nstar, &g, cap)? {
                let fw = w.floor().to_integer();
                if best[nd].as_ref().map_or(true, |b| fw > b.0) {
                    best[nd] = Some((fw, g.clone()));
                }
            }
            stack.push((ai, g));
        }
    }
    let (mut hs, mut ws) = (Vec::new(), Vec::new());
    for b in best {
        let (w, h) =
            b.ok_or_else(|| Error::MaxMinIncomplete("no candidate of some degree".into()))?;
        hs.push(h);
        ws.push(w);
    }
    Ok((hs, ws))
}
