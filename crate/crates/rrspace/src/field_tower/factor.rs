use super::{Field, Poly};
use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed of the equal-degree splitting sequence.
pub const DEFAULT_SEED: u64 = 0x5eed_0f_f1e1d;

/// Monic irreducible factors with multiplicities, sorted by degree then
/// coefficients.
pub fn factor<F: Field>(f: &F, g: &Poly<F::Elem>) -> Result<Vec<(Poly<F::Elem>, usize)>> {
    factor_with_seed(f, g, DEFAULT_SEED)
}

pub fn factor_with_seed<F: Field>(
    f: &F,
    g: &Poly<F::Elem>,
    seed: u64,
) -> Result<Vec<(Poly<F::Elem>, usize)>> {
    if g.is_zero() {
        return Err(Error::InvalidInput(
            "cannot factor the zero polynomial".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (s, m) in squarefree(f, &g.monic(f)) {
        for (h, d) in distinct_degree(f, &s) {
            for irr in equal_degree(f, &h, d, &mut rng) {
                out.push((irr, m));
            }
        }
    }
    out.sort_by(|a, b| a.0.sort_key(f).cmp(&b.0.sort_key(f)));
    Ok(out)
}

pub fn is_irreducible<F: Field>(f: &F, g: &Poly<F::Elem>) -> bool {
    match g.degree() {
        None | Some(0) => false,
        Some(_) => {
            let sq = squarefree(f, &g.monic(f));
            if sq.len() != 1 || sq[0].1 != 1 {
                return false;
            }
            let dd = distinct_degree(f, &sq[0].0);
            dd.len() == 1 && dd[0].0.degree() == Some(dd[0].1)
        }
    }
}

fn pth_root_poly<F: Field>(f: &F, g: &Poly<F::Elem>) -> Poly<F::Elem> {
    let p = f.characteristic() as usize;
    let v = g
        .coeffs()
        .iter()
        .step_by(p)
        .map(|a| f.pth_root(a))
        .collect();
    Poly::from_vec(f, v)
}

/// Pairwise coprime squarefree parts with multiplicities (monic input).
fn squarefree<F: Field>(f: &F, g: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
    let mut out = Vec::new();
    if g.degree().unwrap_or(0) == 0 {
        return out;
    }
    let p = f.characteristic() as usize;
    let dg = g.derivative(f);
    let mut c = g.gcd(f, &dg);
    let mut w = g.quo(f, &c);
    let mut i = 1;
    while !w.is_one(f) {
        let y = w.gcd(f, &c);
        let z = w.quo(f, &y);
        if !z.is_one(f) {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.quo(f, &w);
    }
    if !c.is_one(f) {
        for (h, m) in squarefree(f, &pth_root_poly(f, &c)) {
            out.push((h, m * p));
        }
    }
    out
}

/// h^q mod g, as m successive p-th powers so that q never has to fit a machine word.
fn frobenius<F: Field>(f: &F, h: &Poly<F::Elem>, g: &Poly<F::Elem>) -> Poly<F::Elem> {
    let p = f.characteristic() as u128;
    (0..f.degree()).fold(h.clone(), |a, _| a.powmod(f, p, g))
}

/// Splits a squarefree monic polynomial into products of irreducibles of equal degree.
fn distinct_degree<F: Field>(f: &F, g: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
    let mut out = Vec::new();
    let mut rest = g.clone();
    let x = Poly::x(f);
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = frobenius(f, &h, &rest);
        let gd = h.sub(f, &x).gcd(f, &rest);
        if !gd.is_one(f) {
            rest = rest.quo(f, &gd);
            h = h.rem(f, &rest);
            out.push((gd, d));
        }
    }
    if let Some(k) = rest.degree() {
        if k > 0 {
            out.push((rest, k));
        }
    }
    out
}

fn equal_degree<F: Field>(
    f: &F,
    g: &Poly<F::Elem>,
    d: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Poly<F::Elem>> {
    let n = g.degree().unwrap();
    if n == d {
        return vec![g.clone()];
    }
    let p = f.characteristic();
    loop {
        let r = Poly::from_vec(f, (0..n).map(|_| f.random(rng)).collect());
        if r.degree().unwrap_or(0) == 0 {
            continue;
        }
        let s = if p % 2 == 1 {
            // r^((q^d - 1)/2) = (r·r^p·…·r^(p^(m d - 1)))^((p-1)/2)
            let mut norm = r.rem(f, g);
            let mut fr = norm.clone();
            for _ in 1..f.degree() * d {
                fr = fr.powmod(f, p as u128, g);
                norm = norm.mul(f, &fr).rem(f, g);
            }
            norm.powmod(f, (p as u128 - 1) / 2, g).sub(f, &Poly::one(f))
        } else {
            // absolute trace r + r^2 + … + r^(2^(m d - 1))
            let steps = f.degree() * d;
            let mut acc = r.rem(f, g);
            let mut cur = acc.clone();
            for _ in 1..steps {
                cur = cur.mul(f, &cur).rem(f, g);
                acc = acc.add(f, &cur);
            }
            acc
        };
        let h = s.gcd(f, g);
        let k = h.degree().unwrap_or(0);
        if k > 0 && k < n {
            let mut out = equal_degree(f, &h, d, rng);
            out.extend(equal_degree(f, &g.quo(f, &h), d, rng));
            return out;
        }
    }
}
