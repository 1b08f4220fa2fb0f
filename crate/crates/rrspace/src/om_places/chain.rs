//! MacLane chains of augmented valuations over a prime p of k[v]:
//! values, residues, lifts and key polynomials.

use crate::field_tower::{flatten_tower, ExtensionField, Field, Flattening, Poly, PrimeField};
use crate::funcfield::{BiPoly, TPoly};
use num_rational::Ratio;
use std::sync::Arc;

pub type Q = Ratio<i64>;

#[derive(Debug)]
pub(crate) struct Base {
    pub k: PrimeField,
    pub p: TPoly,
    pub f0: ExtensionField,
    pub m1: usize,
    pub flat0: Flattening,
}

#[derive(Debug)]
pub(crate) struct Level {
    pub phi: BiPoly,
    pub m: usize,
    pub lambda: Q,
    pub e: i64,
    pub fdeg: usize,
    pub flat: Flattening,
    pub z: Vec<u64>,
    pub z_inv: Vec<u64>,
    /// exponents of the normalizing monomial of e·λ one level down
    pub pi_el: Vec<i64>,
    /// e_1⋯e_j
    pub big_e: i64,
}

#[derive(Clone, Debug)]
pub(crate) struct Chain {
    pub base: Arc<Base>,
    pub levels: Vec<Arc<Level>>,
}

fn add_exps(a: &[i64], b: &[i64], kb: i64) -> Vec<i64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0) + kb * b.get(i).copied().unwrap_or(0))
        .collect()
}

impl Base {
    pub fn new(k: PrimeField, p: TPoly, f0: ExtensionField, psi0: Poly<Vec<u64>>) -> Self {
        let m1 = psi0.degree().unwrap();
        let tower = f0.extend_unchecked(&psi0);
        let flat0 = flatten_tower(&tower);
        Base {
            k,
            p,
            f0,
            m1,
            flat0,
        }
    }

    pub fn dp(&self) -> usize {
        self.p.degree().unwrap()
    }

    /// A → A/p.
    pub fn reduce0(&self, a: &TPoly) -> Vec<u64> {
        let r = a.rem(&self.k, &self.p);
        let mut c = r.into_coeffs();
        c.resize(self.dp(), 0);
        c
    }

    /// A/p → A (degree < deg p).
    pub fn lift0(&self, c: &[u64]) -> TPoly {
        Poly::from_vec(&self.k, c.to_vec())
    }

    pub fn vp(&self, a: &TPoly) -> Option<i64> {
        crate::funcfield::val_at(&self.k, &self.p, a).map(|v| v as i64)
    }

    pub fn p_pow(&self, n: usize) -> TPoly {
        self.p.pow(&self.k, n as u64)
    }
}

pub(crate) fn expand(k: &PrimeField, a: &BiPoly, phi: &BiPoly) -> Vec<BiPoly> {
    let mut out = Vec::new();
    let mut cur = a.clone();
    while !cur.is_zero() {
        let (q, r) = cur.divrem_monic(k, phi);
        out.push(r);
        cur = q;
    }
    out
}

impl Chain {
    pub fn new(base: Arc<Base>) -> Self {
        Chain {
            base,
            levels: Vec::new(),
        }
    }

    pub fn k(&self) -> &PrimeField {
        &self.base.k
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// F_j.
    pub fn field(&self, j: usize) -> &ExtensionField {
        match j {
            0 => &self.base.f0,
            1 => &self.base.flat0.flat,
            _ => &self.levels[j - 2].flat.flat,
        }
    }

    pub fn big_e(&self, j: usize) -> i64 {
        if j == 0 {
            1
        } else {
            self.levels[j - 1].big_e
        }
    }

    /// μ_j(a); None for a = 0.
    pub fn mu(&self, j: usize, a: &BiPoly) -> Option<Q> {
        if a.is_zero() {
            return None;
        }
        if j == 0 {
            return a
                .coeffs()
                .iter()
                .filter_map(|c| self.base.vp(c))
                .min()
                .map(Q::from_integer);
        }
        let l = &self.levels[j - 1];
        expand(self.k(), a, &l.phi)
            .iter()
            .enumerate()
            .filter_map(|(s, b)| self.mu(j - 1, b).map(|v| v + l.lambda * s as i64))
            .min()
    }

    /// Exponents (c_0, …, c_j) of the normalizing monomial of value ν ∈ Γ_j.
    pub fn pi_exps(&self, j: usize, nu: Q) -> Vec<i64> {
        let mut out = vec![0i64; j + 1];
        let mut v = nu;
        for l in (1..=j).rev() {
            let lv = &self.levels[l - 1];
            let below = self.big_e(l - 1);
            let c = (0..lv.e)
                .find(|&c| ((v - lv.lambda * c) * below).is_integer())
                .expect("value outside the value group");
            out[l] = c;
            v -= lv.lambda * c;
        }
        assert!(v.is_integer(), "value outside the value group");
        out[0] = v.to_integer();
        out
    }

    /// Residue in F_{j+1} of a value-zero monomial with exponents (c_0..c_j).
    pub fn eps(&self, j: usize, exps: &[i64]) -> Vec<u64> {
        if j == 0 {
            debug_assert!(exps.first().copied().unwrap_or(0) == 0);
            return self.field(1).one();
        }
        let l = &self.levels[j - 1];
        let cj = exps.get(j).copied().unwrap_or(0);
        debug_assert!(cj % l.e == 0, "monomial of nonzero value");
        let kk = cj / l.e;
        let lower = add_exps(&exps[..j.min(exps.len())], &l.pi_el, kk);
        let inner = self.eps(j - 1, &lower);
        let next = &l.flat.flat;
        let emb = l.flat.embed(&l.flat.tower.lift_base(&inner));
        let zk = if kk >= 0 {
            next.pow(&l.z, kk as u128)
        } else {
            next.pow(&l.z_inv, (-kk) as u128)
        };
        next.mul(&emb, &zk)
    }

    /// Residue in F_j of a/Π_{j-1}(μ_{j-1}(a)) for deg a < m_j.
    pub fn res(&self, j: usize, a: &BiPoly) -> Vec<u64> {
        let fj = self.field(j).clone();
        if a.is_zero() {
            return fj.zero();
        }
        let k = self.k();
        if j == 1 {
            let nu = self.mu(0, a).unwrap().to_integer();
            let pn = self.base.p_pow(nu as usize);
            let mut tower = Vec::with_capacity(self.base.m1 * self.base.dp());
            for l in 0..self.base.m1 {
                let c = a.coeff(l);
                let (q, r) = c.divrem(k, &pn);
                debug_assert!(r.is_zero());
                tower.extend(self.base.reduce0(&q));
            }
            return self.base.flat0.embed(&tower);
        }
        let l = &self.levels[j - 2];
        let nu = self.mu(j - 1, a).unwrap();
        let c = self.pi_exps(j - 1, nu)[j - 1];
        let base_ex = self.pi_exps(j - 2, nu - l.lambda * c);
        let b = expand(k, a, &l.phi);
        let below = self.field(j - 1).clone();
        let mut tower = Vec::new();
        for kk in 0..l.fdeg as i64 {
            let s = (c + kk * l.e) as usize;
            let mut coef = below.zero();
            if let Some(bs) = b.get(s) {
                if let Some(vs) = self.mu(j - 2, bs) {
                    if vs + l.lambda * s as i64 == nu {
                        let mono = add_exps(
                            &add_exps(&self.pi_exps(j - 2, vs), &l.pi_el, kk),
                            &base_ex,
                            -1,
                        );
                        coef = below.mul(&self.res(j - 1, bs), &self.eps(j - 2, &mono));
                    }
                }
            }
            tower.extend(coef);
        }
        l.flat.embed(&tower)
    }

    /// A polynomial a of degree < m_j with μ_{j-1}(a) = ν and res_j(a) = c.
    pub fn lift(&self, j: usize, c: &[u64], nu: Q) -> BiPoly {
        let fj = self.field(j);
        if fj.is_zero(&c.to_vec()) {
            return BiPoly::zero();
        }
        let k = *self.k();
        if j == 1 {
            assert!(
                nu.is_integer() && nu >= Q::from_integer(0),
                "lift needs a nonnegative value"
            );
            let pn = self.base.p_pow(nu.to_integer() as usize);
            let tower = self.base.flat0.section(c);
            let coeffs = tower
                .chunks(self.base.dp())
                .map(|d| self.base.lift0(d).mul(&k, &pn))
                .collect();
            return BiPoly::from_coeffs(coeffs);
        }
        let l = &self.levels[j - 2];
        let cexp = self.pi_exps(j - 1, nu)[j - 1];
        let base_ex = self.pi_exps(j - 2, nu - l.lambda * cexp);
        let below = self.field(j - 1).clone();
        let tower = l.flat.section(c);
        let mut out = BiPoly::zero();
        for (kk, d) in tower.chunks(below.degree()).enumerate() {
            let d = d.to_vec();
            if below.is_zero(&d) {
                continue;
            }
            let kk = kk as i64;
            let s = cexp + kk * l.e;
            let vs = nu - l.lambda * s;
            let mono = add_exps(
                &add_exps(&self.pi_exps(j - 2, vs), &l.pi_el, kk),
                &base_ex,
                -1,
            );
            let target = below.div(&d, &self.eps(j - 2, &mono));
            let b = self.lift(j - 1, &target, vs);
            out = out.add(&k, &b.mul(&k, &l.phi.pow(&k, s as usize)));
        }
        out
    }

    /// Residual polynomial over F_i of the side [s0, s1] with slope λ of the
    /// φ_i-expansion `a`.
    pub fn residual_poly(
        &self,
        i: usize,
        a: &[BiPoly],
        s0: usize,
        s1: usize,
        lambda: Q,
        e: i64,
    ) -> Poly<Vec<u64>> {
        let fi = self.field(i).clone();
        let nu0 = self.mu(i - 1, &a[s0]).unwrap();
        let line = nu0 + lambda * s0 as i64;
        let pe = self.pi_exps(i - 1, lambda * e);
        let base_ex = self.pi_exps(i - 1, nu0);
        let deg = (s1 - s0) / e as usize;
        let coeffs = (0..=deg)
            .map(|kk| {
                let s = s0 + kk * e as usize;
                match a.get(s).and_then(|x| self.mu(i - 1, x).map(|v| (x, v))) {
                    Some((x, v)) if v + lambda * s as i64 == line => {
                        let mono = add_exps(
                            &add_exps(&self.pi_exps(i - 1, v), &pe, kk as i64),
                            &base_ex,
                            -1,
                        );
                        fi.mul(&self.res(i, x), &self.eps(i - 1, &mono))
                    }
                    _ => fi.zero(),
                }
            })
            .collect();
        Poly::from_vec(&fi, coeffs)
    }

    /// Key polynomial of degree deg(φ_i)·e·deg ψ whose residual polynomial
    /// for slope λ is proportional to ψ.
    pub fn key_poly(
        &self,
        i: usize,
        phi: &BiPoly,
        lambda: Q,
        e: i64,
        psi: &Poly<Vec<u64>>,
    ) -> BiPoly {
        let k = *self.k();
        let fi = self.field(i).clone();
        let f = psi.degree().unwrap() as i64;
        let nu0 = lambda * (f * e);
        let base_ex = self.pi_exps(i - 1, nu0);
        let pe = self.pi_exps(i - 1, lambda * e);
        let top = add_exps(&add_exps(&vec![0; i], &pe, f), &base_ex, -1);
        let kappa = self.eps(i - 1, &top);
        let phie = phi.pow(&k, e as usize);
        let mut out = phie.pow(&k, f as usize);
        let mut pw = BiPoly::one(&k);
        for kk in 0..f {
            let c = psi.coeff(&fi, kk as usize);
            if !fi.is_zero(&c) {
                let nuk = lambda * ((f - kk) * e);
                let mono = add_exps(&add_exps(&self.pi_exps(i - 1, nuk), &pe, kk), &base_ex, -1);
                let target = fi.div(&fi.mul(&c, &kappa), &self.eps(i - 1, &mono));
                out = out.add(&k, &self.lift(i, &target, nuk).mul(&k, &pw));
            }
            pw = pw.mul(&k, &phie);
        }
        out
    }

    /// Appends the level (φ_i, λ, e, ψ) with i = depth + 1.
    pub fn push(&self, phi: &BiPoly, lambda: Q, e: i64, psi: &Poly<Vec<u64>>) -> Chain {
        let i = self.depth() + 1;
        let fi = self.field(i);
        let tower = fi.extend_unchecked(psi);
        let flat = flatten_tower(&tower);
        let z = flat.embed(&tower.generator());
        let z_inv = flat.flat.inv(&z);
        let pi_el = self.pi_exps(i - 1, lambda * e);
        let level = Level {
            phi: phi.clone(),
            m: phi.degree().unwrap(),
            lambda,
            e,
            fdeg: psi.degree().unwrap(),
            flat,
            z,
            z_inv,
            pi_el,
            big_e: self.big_e(i - 1) * e,
        };
        let mut levels = self.levels.clone();
        levels.push(Arc::new(level));
        Chain {
            base: self.base.clone(),
            levels,
        }
    }

    /// Smallest e with e·λ in Γ_{i-1}.
    pub fn rel_e(&self, i: usize, lambda: Q) -> i64 {
        *(lambda * self.big_e(i - 1)).denom()
    }
}
