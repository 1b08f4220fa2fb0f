//! Compressed bases of L(D) from the finite and infinite triangular bases.

mod prepare;

pub use prepare::{is_irreducible_curve, prepare_curve, HomogeneousPoly};

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::divisors::{normalize, Divisor};
use crate::error::{Error, Result};
use crate::field_tower::{factor, Poly, PrimeField};
use crate::funcfield::{reverse, BiPoly, CurveModel, FunctionFieldElement, TPoly};
use crate::integral_bases::{triangular_basis_finite_with, triangular_basis_infinity_with};
use crate::om_places::{Center, PlaceId, PlaceTable};
use crate::polymat::PolyMatrix;

/// Pairs (b_i, d_i): for every r, {t^j·b_i : 0 ≤ j ≤ d_i + r} is a k-basis
/// of L(D + r·D∞).
#[derive(Clone, Debug)]
pub struct CompressedBasis {
    pub pairs: Vec<(FunctionFieldElement, i64)>,
    pub divisor: Divisor,
}

impl CompressedBasis {
    pub fn degrees(&self) -> Vec<i64> {
        self.pairs.iter().map(|(_, d)| *d).collect()
    }

    /// dim L(D + r·D∞).
    pub fn dimension(&self, r: i64) -> usize {
        self.pairs
            .iter()
            .map(|(_, d)| (d + r + 1).max(0) as usize)
            .sum()
    }

    pub fn expand(&self, r: i64) -> Vec<FunctionFieldElement> {
        expand_basis(self, r)
    }
}

/// The flat basis {t^j·b_i : 0 ≤ j ≤ d_i + r}.
pub fn expand_basis(cb: &CompressedBasis, r: i64) -> Vec<FunctionFieldElement> {
    let mut out = Vec::new();
    for (b, d) in &cb.pairs {
        for j in 0..=(d + r) {
            out.push(b.mul_t_pow(j));
        }
    }
    out
}

/// Which reduction route to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Shifted reduction when exp(I∞) = 0, the general route otherwise.
    Auto,
    General,
    Shifted,
}

/// Intermediate matrices of one run, kept for inspection and tests.
#[derive(Clone, Debug)]
pub struct RrComputation {
    pub basis: CompressedBasis,
    pub m_tilde: PolyMatrix,
    /// Row reduced Ñ over k[u]; identity-shaped on the shifted route.
    pub n_tilde_red: PolyMatrix,
    pub p: PolyMatrix,
    pub p_red: PolyMatrix,
    pub m_tilde_red: PolyMatrix,
    /// δ = m_{n−1} − m − deg(q/p_{n−1}).
    pub shift: i64,
    pub shifted: bool,
}

impl RrComputation {
    pub fn p_red_row_degrees(&self) -> Vec<i64> {
        self.basis
            .pairs
            .iter()
            .map(|(_, d)| self.shift - d)
            .collect()
    }
}

pub fn riemann_roch(table: &PlaceTable, d: &Divisor) -> Result<CompressedBasis> {
    Ok(riemann_roch_with(table, d, Route::Auto)?.basis)
}

pub fn riemann_roch_with(table: &PlaceTable, d: &Divisor, route: Route) -> Result<RrComputation> {
    let model = table.model().clone();
    let k = *model.field();
    let n = model.n();
    let lambda = model.lambda();
    let norm = normalize(table, d)?;
    let fin = triangular_basis_finite_with(table, d, &norm)?;
    let inf = triangular_basis_infinity_with(table, &norm)?;
    let e = inf.exp();
    let mt = fin.m_tilde();
    let trivial_inf = e == 0
        && inf
            .numerators
            .iter()
            .enumerate()
            .all(|(i, h)| *h == BiPoly::monomial(Poly::one(&k), i));
    let shifted = match route {
        Route::Auto => trivial_inf,
        Route::General => false,
        Route::Shifted => {
            if !trivial_inf {
                return Err(Error::InvalidInput(
                    "shifted route needs exp(I∞) = 0".into(),
                ));
            }
            true
        }
    };

    let (n_red, p, p_red, m_red, rdeg) = if shifted {
        let s: Vec<i64> = (0..n).map(|j| (j * lambda) as i64).collect();
        let (m_red, _) = mt.row_reduce(&k, Some(&s))?;
        let diag =
            PolyMatrix::diagonal((0..n).map(|j| Poly::monomial(&k, 1, j * lambda)).collect());
        let p = mt.mul(&k, &diag)?;
        let p_red = m_red.mul(&k, &diag)?;
        let rdeg = m_red.shifted_row_degrees(&s);
        let n_red =
            PolyMatrix::diagonal((0..n).map(|j| Poly::monomial(&k, 1, j * lambda)).collect());
        (n_red, p, p_red, m_red, rdeg)
    } else {
        let nt = inf.n_tilde(k, lambda);
        let (n_red, _) = nt.row_reduce(&k, None)?;
        let big_e = e + n * lambda;
        let w = n_red.inverse_row_reduced(&k, big_e)?;
        let w_t = w.map(|a| reverse(&k, a, big_e));
        let p = mt.mul(&k, &w_t)?;
        let (p_red, u) = p.row_reduce(&k, None)?;
        let dn = (n_red.degree().max(0) as usize).max(big_e);
        let n_rev = n_red.map(|a| reverse(&k, a, dn));
        let prod = p_red.mul(&k, &n_rev)?;
        let td = Poly::monomial(&k, 1, dn);
        let rows = prod
            .rows()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|a| {
                        let (q, rem) = a.divrem(&k, &td);
                        if rem.is_zero() {
                            Ok(q)
                        } else {
                            Err(Error::ContractViolation(
                                "P_red·Ñ_red is not divisible by t^E".into(),
                            ))
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let m_red = PolyMatrix::from_rows(rows)?;
        if m_red != u.mul(&k, &mt)? {
            return Err(Error::ContractViolation(
                "U·M̃ differs from P_red·Ñ_red".into(),
            ));
        }
        let rdeg = p_red
            .row_degrees()
            .into_iter()
            .map(|d| d.map(|d| d as i64))
            .collect();
        (n_red, p, p_red, m_red, rdeg)
    };

    let top = &fin.denominators[n - 1];
    let scale = fin.q.div_poly(&k, top);
    let shift = e as i64 - inf.m - scale.degree().unwrap_or(0);
    let mut pairs = Vec::with_capacity(n);
    for (row, rd) in m_red.rows().iter().zip(rdeg) {
        let rd = rd.ok_or(Error::SingularMatrix)?;
        let coords = row.iter().map(|a| scale.mul_poly(&k, a)).collect();
        pairs.push((
            FunctionFieldElement::new(model.clone(), coords)?,
            shift - rd,
        ));
    }
    Ok(RrComputation {
        basis: CompressedBasis {
            pairs,
            divisor: d.clone(),
        },
        m_tilde: mt,
        n_tilde_red: n_red,
        p,
        p_red,
        m_tilde_red: m_red,
        shift,
        shifted,
    })
}

/// A place where v_P(b) + n_P < 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub place: PlaceId,
    pub valuation: i64,
    pub multiplicity: i64,
}

/// Outcome of [`contains`]; `violations` is empty iff b ∈ L(D).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub violations: Vec<Violation>,
}

impl Membership {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn push_factors(k: &PrimeField, a: &TPoly, out: &mut BTreeSet<Center>) -> Result<()> {
    if a.deg() > 0 {
        for (g, _) in factor(k, &a.monic(k))? {
            out.insert(Center::Finite(g));
        }
    }
    Ok(())
}

/// Places where b or D can be nonzero: supp D, the discriminant primes, the
/// primes of the coordinate denominators, and infinity.
pub fn probe_centers(
    table: &PlaceTable,
    d: &Divisor,
    b: &FunctionFieldElement,
) -> Result<BTreeSet<Center>> {
    let model = table.model();
    let k = *model.field();
    let mut out = d.centers();
    out.extend(
        model
            .discriminant_primes()
            .iter()
            .cloned()
            .map(Center::Finite),
    );
    for c in b.coords() {
        push_factors(&k, c.den(), &mut out)?;
    }
    out.insert(Center::Infinity);
    Ok(out)
}

/// Whether div(b) + D ≥ 0, checked on the probe set.
pub fn contains(table: &PlaceTable, d: &Divisor, b: &FunctionFieldElement) -> Result<Membership> {
    if b.is_zero() {
        return Err(Error::InvalidInput("membership of zero".into()));
    }
    d.resolve(table)?;
    let mut violations = Vec::new();
    for c in probe_centers(table, d, b)? {
        for place in table.places(&c)?.iter() {
            let v = table.valuation(&place.id, b)?.expect("nonzero element");
            let m = d.get(&place.id);
            if v + m < 0 {
                violations.push(Violation {
                    place: place.id.clone(),
                    valuation: v,
                    multiplicity: m,
                });
            }
        }
    }
    Ok(Membership { violations })
}

/// Index and genus data of a curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveInvariants {
    pub delta_finite: i64,
    pub delta_infinite: i64,
    pub delta_curve: i64,
    /// dim L(0), the degree of the field of constants over k.
    pub rho: usize,
    /// Geometric genus; withheld when rho > 1.
    pub genus: Option<i64>,
}

pub fn curve_invariants(table: &PlaceTable) -> Result<CurveInvariants> {
    let model = table.model();
    let n = model.n() as i64;
    let zero = Divisor::zero();
    let norm = normalize(table, &zero)?;
    let delta_finite = triangular_basis_finite_with(table, &zero, &norm)?.delta() as i64;
    let delta_infinite = triangular_basis_infinity_with(table, &norm)?.delta() as i64;
    let cb = riemann_roch(table, &zero)?;
    let rho = cb.dimension(0);
    // For r large, dim L(r·D∞) = n·r + n + Σd_i = n·r + 1 − g.
    let genus = (rho == 1).then(|| 1 - n - cb.degrees().iter().sum::<i64>());
    if let Some(g) = genus {
        if g < 0 {
            return Err(Error::ContractViolation(format!("negative genus {g}")));
        }
        if model.lambda() == 1 && g != (n - 1) * (n - 2) / 2 - delta_finite - delta_infinite {
            return Err(Error::ContractViolation(
                "genus disagrees with the plane genus formula".into(),
            ));
        }
    }
    Ok(CurveInvariants {
        delta_finite,
        delta_infinite,
        delta_curve: delta_finite + delta_infinite,
        rho,
        genus,
    })
}

/// Convenience: a shared model and its place table.
pub fn table_for(k: PrimeField, f: BiPoly, cap: usize) -> Result<PlaceTable> {
    Ok(PlaceTable::with_cap(Arc::new(CurveModel::new(k, f)?), cap))
}
