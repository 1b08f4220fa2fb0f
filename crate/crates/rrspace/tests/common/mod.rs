#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rrspace::divisors::Divisor;
use rrspace::field_tower::{Poly, PrimeField};
use rrspace::funcfield::*;
use rrspace::om_places::{Center, PlaceId, PlaceTable};
use std::sync::Arc;

pub fn bp(k: &PrimeField, rows: &[&[i64]]) -> BiPoly {
    BiPoly::from_coeffs(rows.iter().map(|r| tpoly(k, r)).collect())
}

pub fn model(p: u64, rows: &[&[i64]]) -> Arc<CurveModel> {
    let k = PrimeField::new(p).unwrap();
    Arc::new(CurveModel::new(k, bp(&k, rows)).unwrap())
}

/// X³ − X² + t² over F5.
pub fn cubic() -> Arc<CurveModel> {
    model(5, &[&[0, 0, 1], &[], &[-1], &[1]])
}

/// 3·[t;0] + 2·[t;1] − [t−1;0] − [t−1;1] + [inf;0] on the cubic.
pub fn worked_divisor(k: &PrimeField) -> Divisor {
    let t = Center::Finite(tpoly(k, &[0, 1]));
    let t1 = Center::Finite(tpoly(k, &[-1, 1]));
    Divisor::from_terms([
        (PlaceId::new(t.clone(), 0), 3),
        (PlaceId::new(t, 1), 2),
        (PlaceId::new(t1.clone(), 0), -1),
        (PlaceId::new(t1, 1), -1),
        (PlaceId::new(Center::Infinity, 0), 1),
    ])
}

/// One corpus curve with its genus from a classical formula.
pub struct CorpusCurve {
    pub name: &'static str,
    pub p: u64,
    pub rows: &'static [&'static [i64]],
    pub genus: i64,
    pub singular: bool,
    pub wild: bool,
    /// Smooth projective plane model (λ = 1), usable by the oracle.
    pub smooth_plane: bool,
}

pub const CORPUS: &[CorpusCurve] = &[
    CorpusCurve {
        name: "nodal cubic F5",
        p: 5,
        rows: &[&[0, 0, 1], &[], &[-1], &[1]],
        genus: 0,
        singular: true,
        wild: false,
        smooth_plane: false,
    },
    CorpusCurve {
        name: "artin-schreier elliptic F2",
        p: 2,
        rows: &[&[0, 0, 0, 1], &[1], &[1]],
        genus: 1,
        singular: false,
        wild: true,
        smooth_plane: false,
    },
    CorpusCurve {
        name: "ordinary elliptic F2",
        p: 2,
        rows: &[&[1, 0, 0, 1], &[0, 1], &[1]],
        genus: 1,
        singular: false,
        wild: true,
        smooth_plane: false,
    },
    CorpusCurve {
        name: "artin-schreier cubic F3",
        p: 3,
        rows: &[&[0, 0, -1], &[-1], &[], &[1]],
        genus: 1,
        singular: false,
        wild: true,
        smooth_plane: true,
    },
    CorpusCurve {
        name: "elliptic F3",
        p: 3,
        rows: &[&[0, -1, 0, -1], &[], &[1]],
        genus: 1,
        singular: false,
        wild: false,
        smooth_plane: false,
    },
    CorpusCurve {
        name: "fermat cubic F13",
        p: 13,
        rows: &[&[1, 0, 0, 1], &[], &[], &[1]],
        genus: 1,
        singular: false,
        wild: false,
        smooth_plane: true,
    },
    CorpusCurve {
        name: "hyperelliptic F7",
        p: 7,
        rows: &[&[-1, 0, 0, 0, 0, -1], &[], &[1]],
        genus: 2,
        singular: false,
        wild: false,
        smooth_plane: false,
    },
    CorpusCurve {
        name: "fermat quartic F5",
        p: 5,
        rows: &[&[1, 0, 0, 0, 1], &[], &[], &[], &[1]],
        genus: 3,
        singular: false,
        wild: false,
        smooth_plane: true,
    },
    CorpusCurve {
        name: "nodal F13",
        p: 13,
        rows: &[&[0, 0, -1, -1], &[], &[1]],
        genus: 0,
        singular: true,
        wild: false,
        smooth_plane: false,
    },
    CorpusCurve {
        name: "cusp F7",
        p: 7,
        rows: &[&[0, 0, -1], &[], &[], &[1]],
        genus: 0,
        singular: true,
        wild: false,
        smooth_plane: false,
    },
    CorpusCurve {
        name: "quartic cusp F7",
        p: 7,
        rows: &[&[0, 0, 0, -1], &[], &[], &[], &[1]],
        genus: 0,
        singular: true,
        wild: false,
        smooth_plane: false,
    },
    CorpusCurve {
        name: "superelliptic F5",
        p: 5,
        rows: &[&[0, 0, 0, 0, -1, -1], &[], &[], &[1]],
        genus: 1,
        singular: true,
        wild: false,
        smooth_plane: false,
    },
    CorpusCurve {
        name: "artin-schreier quintic F5",
        p: 5,
        rows: &[&[0, 0, -1], &[-1], &[], &[], &[], &[1]],
        genus: 2,
        singular: true,
        wild: true,
        smooth_plane: false,
    },
    CorpusCurve {
        name: "fermat quintic F13",
        p: 13,
        rows: &[&[1, 0, 0, 0, 0, 1], &[], &[], &[], &[], &[1]],
        genus: 6,
        singular: false,
        wild: false,
        smooth_plane: true,
    },
    CorpusCurve {
        name: "fermat quartic F13",
        p: 13,
        rows: &[&[1, 0, 0, 0, 1], &[], &[], &[], &[1]],
        genus: 3,
        singular: false,
        wild: false,
        smooth_plane: true,
    },
];

impl CorpusCurve {
    pub fn model(&self) -> Arc<CurveModel> {
        model(self.p, self.rows)
    }
}

/// Rank over F_p by Gaussian elimination.
pub fn rank(p: u64, mut rows: Vec<Vec<u64>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let inv = |a: u64| {
        let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rk = 0;
    for c in 0..cols {
        let Some(piv) = (rk..rows.len()).find(|&i| rows[i][c] % p != 0) else {
            continue;
        };
        rows.swap(rk, piv);
        let iv = inv(rows[rk][c]);
        for j in 0..cols {
            rows[rk][j] = rows[rk][j] * iv % p;
        }
        for i in 0..rows.len() {
            if i != rk && rows[i][c] != 0 {
                let m = rows[i][c];
                for j in 0..cols {
                    rows[i][j] = (rows[i][j] + p * p - m * rows[rk][j] % p) % p;
                }
            }
        }
        rk += 1;
    }
    rk
}

/// Coefficient vectors of the elements over a shared denominator.
pub fn coefficient_rows(k: &PrimeField, elems: &[FunctionFieldElement]) -> Vec<Vec<u64>> {
    let mut den = Poly::one(k);
    for b in elems {
        for c in b.coords() {
            let g = den.gcd(k, c.den());
            den = den.mul(k, &c.den().quo(k, &g));
        }
    }
    let polys: Vec<Vec<TPoly>> = elems
        .iter()
        .map(|b| {
            b.coords()
                .iter()
                .map(|c| c.num().mul(k, &den.quo(k, c.den())))
                .collect()
        })
        .collect();
    let width = polys
        .iter()
        .flatten()
        .map(|a| a.deg().max(0) as usize + 1)
        .max()
        .unwrap_or(1);
    polys
        .iter()
        .map(|row| {
            row.iter()
                .flat_map(|a| {
                    (0..width).map(move |i| {
                        if (i as isize) <= a.deg() {
                            a.coeffs()[i]
                        } else {
                            0
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Truncated power series over F_p.
fn series_mul(p: u64, a: &[u64], b: &[u64], m: usize) -> Vec<u64> {
    let mut out = vec![0; m];
    for (i, x) in a.iter().enumerate().take(m) {
        for (j, y) in b.iter().enumerate().take(m - i) {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn modp(p: u64, c: i64) -> u64 {
    c.rem_euclid(p as i64) as u64
}

/// Σ f_ij (a+s)^j X^i evaluated at X = x(s), mod s^m.
fn eval_series(p: u64, f: &[Vec<u64>], a: u64, x: &[u64], m: usize) -> Vec<u64> {
    let mut ts = vec![0; m];
    ts[0] = a % p;
    if m > 1 {
        ts[1] = 1;
    }
    let mut out = vec![0; m];
    let mut xp = vec![0; m];
    xp[0] = 1;
    for row in f {
        let mut tp = vec![0; m];
        tp[0] = 1;
        for &c in row {
            let term = series_mul(p, &tp, &xp, m);
            for i in 0..m {
                out[i] = (out[i] + c * term[i]) % p;
            }
            tp = series_mul(p, &tp, &ts, m);
        }
        xp = series_mul(p, &xp, x, m);
    }
    out
}

/// The branch x(s), s = t − a, through (a, b) with f_X(a, b) ≠ 0.
fn branch(p: u64, f: &[Vec<u64>], a: u64, b: u64, m: usize) -> Vec<u64> {
    let mut x = vec![0; m];
    x[0] = b;
    let df: Vec<Vec<u64>> = (1..f.len())
        .map(|i| f[i].iter().map(|c| c * i as u64 % p).collect())
        .collect();
    let d0 = eval_series(p, &df, a, &x, 1)[0];
    assert!(d0 != 0, "singular or ramified point");
    let mut inv = 1;
    while inv * d0 % p != 1 {
        inv += 1;
    }
    for k in 1..m {
        let r = eval_series(p, f, a, &x, k + 1)[k];
        x[k] = (p - r * inv % p) % p;
    }
    x
}

/// dim L(D) for D = Σ n_ab·(a, b) an effective divisor of rational affine
/// points on a smooth projective plane curve, counted directly: L(D) is
/// h/∏(t − a)^{N_a} with h of total degree at most Σ N_a and x-degree below
/// n, vanishing to order N_a − n_ab on the branch through (a, b). Each used
/// fibre t = a must split into n distinct rational points.
pub fn oracle_dimension(p: u64, rows: &[&[i64]], points: &[(u64, u64, i64)]) -> usize {
    let f: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&c| modp(p, c)).collect())
        .collect();
    let n = f.len() - 1;
    let mut fibres: Vec<(u64, i64)> = Vec::new();
    for &(a, _, m) in points {
        match fibres.iter_mut().find(|(b, _)| *b == a) {
            Some(e) => e.1 = e.1.max(m),
            None => fibres.push((a, m)),
        }
    }
    let big_n: i64 = fibres.iter().map(|(_, m)| m).sum();
    let monomials: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (0..=(big_n as usize).saturating_sub(j)).map(move |i| (i, j)))
        .filter(|(i, j)| (i + j) as i64 <= big_n)
        .collect();
    let mut conditions: Vec<Vec<u64>> = Vec::new();
    for &(a, na) in &fibres {
        let roots: Vec<u64> = (0..p)
            .filter(|&b| eval_series(p, &f, a, &[b], 1)[0] == 0)
            .collect();
        assert_eq!(roots.len(), n, "fibre over {a} must split");
        for b in roots {
            let mult = points
                .iter()
                .find(|q| q.0 == a && q.1 == b)
                .map_or(0, |q| q.2);
            let order = (na - mult) as usize;
            if order == 0 {
                continue;
            }
            let x = branch(p, &f, a, b, order);
            let cols: Vec<Vec<u64>> = monomials
                .iter()
                .map(|&(i, j)| {
                    let mut mono = vec![vec![0u64; i + 1]; j + 1];
                    mono[j][i] = 1;
                    eval_series(p, &mono, a, &x, order)
                })
                .collect();
            for r in 0..order {
                conditions.push(cols.iter().map(|c| c[r]).collect());
            }
        }
    }
    if conditions.is_empty() {
        return monomials.len();
    }
    monomials.len() - rank(p, conditions)
}

/// Rational points (a, b) with f(a, X) split into n distinct rational roots.
pub fn split_fibres(p: u64, rows: &[&[i64]]) -> Vec<(u64, Vec<u64>)> {
    let f: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&c| modp(p, c)).collect())
        .collect();
    let n = f.len() - 1;
    (0..p)
        .filter_map(|a| {
            let roots: Vec<u64> = (0..p)
                .filter(|&b| eval_series(p, &f, a, &[b], 1)[0] == 0)
                .collect();
            (roots.len() == n).then_some((a, roots))
        })
        .collect()
}

/// Random divisor supported on places over small primes and at infinity.
pub fn random_divisor(
    table: &PlaceTable,
    rng: &mut ChaCha8Rng,
    terms: usize,
    lo: i64,
    hi: i64,
) -> Divisor {
    let k = *table.model().field();
    let p = k.p() as i64;
    let mut d = Divisor::zero();
    for _ in 0..terms {
        let center = match rng.gen_range(0..4) {
            0 => Center::Infinity,
            1 => {
                let c = rng.gen_range(0..p);
                let b = rng.gen_range(0..p);
                let g = tpoly(&k, &[c, b, 1]);
                if rrspace::field_tower::is_irreducible(&k, &g) {
                    Center::Finite(g)
                } else {
                    Center::Finite(tpoly(&k, &[-c, 1]))
                }
            }
            _ => Center::Finite(tpoly(&k, &[-rng.gen_range(0..p), 1])),
        };
        let places = table.places(&center).unwrap();
        let i = rng.gen_range(0..places.len());
        d.add_term(PlaceId::new(center, i), rng.gen_range(lo..=hi));
    }
    d
}

pub fn rf(k: &PrimeField, num: &[i64], den: &[i64]) -> RationalFunction {
    RationalFunction::new(k, tpoly(k, num), tpoly(k, den))
}

/// Reference elements for the worked example: the closed forms b0, b2, the
/// rows (q/t^4)·M̃_red listed alongside them, and the corrected third row
/// (0, −t², t²).
pub fn reference_elements(
    m: &std::sync::Arc<CurveModel>,
) -> (Vec<FunctionFieldElement>, Vec<FunctionFieldElement>) {
    let k = *m.field();
    let t4 = [0, 0, 0, 0, 1];
    let t2 = [0, 0, 1];
    // (3t − 1)(t − 1) = 3t² − 4t + 1, (t² + 1)(t − 1) = t³ − t² + t − 1
    let b0 = vec![
        rf(&k, &[-1, 0, 1], &t2),
        rf(&k, &[1, -4, 3], &t4),
        rf(&k, &[-1, 0, 1], &t4),
    ];
    let b2 = vec![
        RationalFunction::zero(&k),
        rf(&k, &[1, -1], &t2),
        rf(&k, &[-1, 1, -1, 1], &t4),
    ];
    let closed = vec![
        FunctionFieldElement::new(m.clone(), b0).unwrap(),
        FunctionFieldElement::new(m.clone(), b2).unwrap(),
    ];
    let rows: [[&[i64]; 3]; 4] = [
        [&[0, 1, 1], &[-1, -2], &[1, 1]],
        [&[0, 0, -1], &[0, 0, 1], &[]],
        [&[], &[0, 0, -1], &[1, 0, 1]],
        [&[], &[0, 0, -1], &[0, 0, 1]],
    ];
    let q = tpoly(&k, &[-1, 1]);
    let rows = rows
        .iter()
        .map(|r| FunctionFieldElement::from_bipoly(m, &bp(&k, r).scale(&k, &q), &tpoly(&k, &t4)))
        .collect();
    (closed, rows)
}

/// An effective divisor of degree at most 8 on the first two split fibres,
/// with the matching (a, b, multiplicity) points for [`oracle_dimension`].
pub fn oracle_divisor(
    table: &PlaceTable,
    fibres: &[(u64, Vec<u64>)],
    rng: &mut ChaCha8Rng,
    trial: usize,
) -> (Divisor, Vec<(u64, u64, i64)>) {
    let m = table.model().clone();
    let k = *m.field();
    let mut points = Vec::new();
    let mut d = Divisor::zero();
    let mut total = 0;
    for (a, roots) in fibres.iter().take(2) {
        let center = Center::Finite(tpoly(&k, &[-(*a as i64), 1]));
        let places = table.places(&center).unwrap();
        for b in roots {
            let mult = rng.gen_range(0..=(2 + trial % 2)) as i64;
            if mult == 0 || total + mult > 8 {
                continue;
            }
            total += mult;
            // match the place to the root by the valuation of x − b
            let xb = FunctionFieldElement::from_bipoly(
                &m,
                &bp(&k, &[&[-(*b as i64)], &[1]]),
                &tpoly(&k, &[1]),
            );
            let place = places
                .iter()
                .find(|p| table.valuation(&p.id, &xb).unwrap().unwrap() > 0)
                .unwrap();
            d.add_term(place.id.clone(), mult);
            points.push((*a, *b, mult));
        }
    }
    (d, points)
}
