//! Divisors as sparse maps from place ids to multiplicities, principal
//! divisors, and the normalization (q_I, m_{I∞}, D*).

use crate::error::{Error, Result};
use crate::field_tower::{factor, Poly, PrimeField};
use crate::funcfield::{format_tpoly, FunctionFieldElement, RationalFunction, TPoly};
use crate::om_places::{Center, PlaceId, PlaceTable};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Divisor {
    terms: BTreeMap<PlaceId, i64>,
}

impl Divisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (PlaceId, i64)>) -> Self {
        let mut d = Self::zero();
        for (id, n) in terms {
            d.add_term(id, n);
        }
        d
    }

    pub fn add_term(&mut self, id: PlaceId, n: i64) {
        let v = self.terms.entry(id.clone()).or_insert(0);
        *v += n;
        if *v == 0 {
            self.terms.remove(&id);
        }
    }

    pub fn get(&self, id: &PlaceId) -> i64 {
        self.terms.get(id).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PlaceId, i64)> {
        self.terms.iter().map(|(k, v)| (k, *v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&n| n > 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut d = self.clone();
        for (id, n) in o.terms() {
            d.add_term(id.clone(), n);
        }
        d
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::from_terms(self.terms().map(|(id, n)| (id.clone(), c * n)))
    }

    /// D⁺: the terms with positive multiplicity.
    pub fn positive(&self) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|t| t.1 > 0)
                .map(|(id, n)| (id.clone(), n)),
        )
    }

    /// D⁻, so that D = D⁺ − D⁻.
    pub fn negative(&self) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|t| t.1 < 0)
                .map(|(id, n)| (id.clone(), -n)),
        )
    }

    pub fn centers(&self) -> BTreeSet<Center> {
        self.terms.keys().map(|id| id.center.clone()).collect()
    }

    pub fn degree(&self, table: &PlaceTable) -> Result<i64> {
        let mut s = 0;
        for (id, n) in self.terms() {
            s += n * table.place(id)?.degree() as i64;
        }
        Ok(s)
    }

    /// Checks that every id names an existing place.
    pub fn resolve(&self, table: &PlaceTable) -> Result<()> {
        for id in self.terms.keys() {
            table.place(id)?;
        }
        Ok(())
    }

    /// Text form, e.g. `2*[t;0] + 3*[t;1] - [t-1;0] + [inf;0]`.
    pub fn format(&self, k: &PrimeField) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (id, n)) in self.terms().enumerate() {
            let place = format_place(k, id);
            let a = n.unsigned_abs();
            let body = if a == 1 {
                place
            } else {
                format!("{a}*{place}")
            };
            match (i, n < 0) {
                (0, false) => s.push_str(&body),
                (0, true) => s.push_str(&format!("-{body}")),
                (_, false) => s.push_str(&format!(" + {body}")),
                (_, true) => s.push_str(&format!(" - {body}")),
            }
        }
        s
    }
}

pub fn format_place(k: &PrimeField, id: &PlaceId) -> String {
    let c = match &id.center {
        Center::Finite(p) => format_tpoly(k, p, "t").replace(' ', ""),
        Center::Infinity => "inf".into(),
    };
    format!("[{c};{}]", id.index)
}

fn irreducible_factors(k: &PrimeField, a: &TPoly, out: &mut Vec<TPoly>) -> Result<()> {
    if a.deg() > 0 {
        for (q, _) in factor(k, &a.monic(k))? {
            out.push(q);
        }
    }
    Ok(())
}

/// div(b) = Σ v_P(b)·P.
pub fn principal_divisor(table: &PlaceTable, b: &FunctionFieldElement) -> Result<Divisor> {
    if b.is_zero() {
        return Err(Error::InvalidInput("divisor of zero".into()));
    }
    let model = table.model();
    let k = *model.field();
    let mut primes: Vec<TPoly> = model.discriminant_primes().to_vec();
    for c in b.coords() {
        irreducible_factors(&k, c.den(), &mut primes)?;
    }
    let nb = b.norm();
    irreducible_factors(&k, nb.num(), &mut primes)?;
    irreducible_factors(&k, nb.den(), &mut primes)?;
    let mut centers: BTreeSet<Center> = primes.into_iter().map(Center::Finite).collect();
    centers.insert(Center::Infinity);
    let mut d = Divisor::zero();
    for c in centers {
        for place in table.places(&c)?.iter() {
            if let Some(v) = table.valuation(&place.id, b)? {
                d.add_term(place.id.clone(), v);
            }
        }
    }
    Ok(d)
}

/// D∞, the divisor of poles of t.
pub fn infinity_divisor(table: &PlaceTable) -> Result<Divisor> {
    Ok(Divisor::from_terms(
        table
            .places(&Center::Infinity)?
            .iter()
            .map(|p| (p.id.clone(), p.e as i64)),
    ))
}

/// Output of [`normalize`].
#[derive(Clone, Debug)]
pub struct NormalizationData {
    /// min over places above p of ⌊n_P/e_P⌋, for the finite centers of D.
    pub m_p: BTreeMap<Center, i64>,
    /// ∏ p^{−m_p}.
    pub q_i: RationalFunction,
    /// m_{I∞} = −min over infinite places of ⌊n_P/e_P⌋.
    pub m_inf: i64,
    /// D*, the effective divisor with I(D) = q_I·I(D*) and I∞(D) = u^{m_{I∞}}·I∞(D*).
    pub star: Divisor,
    /// r_D = m_{I∞} + deg q_I.
    pub r_d: i64,
}

pub fn normalize(table: &PlaceTable, d: &Divisor) -> Result<NormalizationData> {
    d.resolve(table)?;
    let k = *table.model().field();
    let mut m_p = BTreeMap::new();
    let mut num = Poly::one(&k);
    let mut den = Poly::one(&k);
    let mut star = Divisor::zero();
    let mut m_inf = 0;
    let mut centers = d.centers();
    centers.insert(Center::Infinity);
    for c in centers {
        let places = table.places(&c)?;
        let m = places
            .iter()
            .map(|p| d.get(&p.id).div_euclid(p.e as i64))
            .min()
            .unwrap_or(0);
        for p in places.iter() {
            star.add_term(p.id.clone(), d.get(&p.id) - p.e as i64 * m);
        }
        match &c {
            Center::Finite(p) => {
                m_p.insert(c.clone(), m);
                let pw = p.pow(&k, m.unsigned_abs());
                if m < 0 {
                    num = num.mul(&k, &pw);
                } else {
                    den = den.mul(&k, &pw);
                }
            }
            Center::Infinity => m_inf = -m,
        }
    }
    let q_i = RationalFunction::new(&k, num, den);
    let r_d = m_inf + q_i.degree().unwrap_or(0);
    Ok(NormalizationData {
        m_p,
        q_i,
        m_inf,
        star,
        r_d,
    })
}
