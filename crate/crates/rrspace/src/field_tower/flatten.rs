use super::{ExtensionField, Field, Poly};

/// A single-step presentation of a tower with the isomorphisms both ways.
#[derive(Clone, Debug)]
pub struct Flattening {
    pub tower: ExtensionField,
    pub flat: ExtensionField,
    /// Row i: flat coordinates of the i-th tower basis vector.
    to_flat: Vec<Vec<u64>>,
    /// Row j: tower coordinates of γ^j.
    to_tower: Vec<Vec<u64>>,
    identity: bool,
}

impl Flattening {
    /// Tower element to flat element.
    pub fn embed(&self, a: &[u64]) -> Vec<u64> {
        if self.identity {
            return a.to_vec();
        }
        apply(&self.tower, a, &self.to_flat)
    }

    /// Flat element to tower element.
    pub fn section(&self, a: &[u64]) -> Vec<u64> {
        if self.identity {
            return a.to_vec();
        }
        apply(&self.tower, a, &self.to_tower)
    }
}

fn apply(f: &ExtensionField, a: &[u64], rows: &[Vec<u64>]) -> Vec<u64> {
    let p = f.prime_field();
    let mut out = vec![0u64; rows[0].len()];
    for (ai, row) in a.iter().zip(rows) {
        if *ai == 0 {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row) {
            *o = p.add(o, &p.mul(ai, r));
        }
    }
    out
}

/// Rewrites a tower as F_p[z]/(m(z)) for a primitive element γ.
pub fn flatten_tower(e: &ExtensionField) -> Flattening {
    let m = e.degree();
    if e.depth() <= 1 {
        return Flattening {
            tower: e.clone(),
            flat: e.clone(),
            to_flat: Vec::new(),
            to_tower: Vec::new(),
            identity: true,
        };
    }
    let gamma = primitive_element(e);
    let (powers, minpoly) = power_basis(e, &gamma);
    let minpoly = minpoly.expect("primitive element has full degree");
    let prime = e.prime_field();
    let flat = ExtensionField::simple(prime, &Poly::from_vec(&prime, minpoly))
        .expect("minimal polynomial is irreducible");
    let to_flat = invert(e, &powers);
    debug_assert_eq!(to_flat.len(), m);
    Flattening {
        tower: e.clone(),
        flat,
        to_flat,
        to_tower: powers,
        identity: false,
    }
}

/// Generators of every level (bottom first) with the level's absolute degree.
fn level_generators(e: &ExtensionField) -> Vec<(Vec<u64>, usize)> {
    let mut fields = vec![e.clone()];
    while fields.last().unwrap().depth() > 1 {
        let b = fields.last().unwrap().base();
        fields.push(b);
    }
    fields
        .iter()
        .rev()
        .map(|f| {
            let mut g = f.generator();
            g.resize(e.degree(), 0);
            (g, f.degree())
        })
        .collect()
}

fn primitive_element(e: &ExtensionField) -> Vec<u64> {
    let m = e.degree();
    let gens = level_generators(e);
    let p = e.characteristic();
    let mut gamma = gens[0].0.clone();
    for (g, want) in &gens[1..] {
        let hit = (0..p)
            .map(|c| e.add(&gamma, &e.mul(&e.from_int(c as i64), g)))
            .find(|cand| degree_of(e, cand) == *want);
        match hit {
            Some(c) => gamma = c,
            None => break,
        }
    }
    if degree_of(e, &gamma) == m {
        return gamma;
    }
    // exhaustive fallback, reached only for tiny prime fields
    (1..e.order())
        .map(|i| e.from_index(i))
        .find(|c| degree_of(e, c) == m)
        .expect("finite field has a primitive element")
}

fn degree_of(e: &ExtensionField, a: &Vec<u64>) -> usize {
    power_basis(e, a).0.len()
}

/// Powers 1, a, a², … up to the first linear dependency, plus the monic
/// minimal polynomial if the powers span the whole field.
fn power_basis(e: &ExtensionField, a: &Vec<u64>) -> (Vec<Vec<u64>>, Option<Vec<u64>>) {
    let p = e.prime_field();
    let m = e.degree();
    let mut powers: Vec<Vec<u64>> = Vec::new();
    // echelon rows: (reduced vector, combination of powers)
    let mut ech: Vec<(Vec<u64>, Vec<u64>, usize)> = Vec::new();
    let mut cur = e.one();
    loop {
        let k = powers.len();
        let mut v = cur.clone();
        let mut comb = vec![0u64; k + 1];
        comb[k] = 1;
        for (row, rc, piv) in &ech {
            let c = v[*piv];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = p.sub(x, &p.mul(&c, y));
                }
                for (x, y) in comb.iter_mut().zip(rc) {
                    *x = p.sub(x, &p.mul(&c, y));
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            Some(piv) => {
                let inv = p.inv(&v[piv]);
                for x in v.iter_mut() {
                    *x = p.mul(x, &inv);
                }
                for x in comb.iter_mut() {
                    *x = p.mul(x, &inv);
                }
                ech.push((v, comb, piv));
                powers.push(cur.clone());
                cur = e.mul(&cur, a);
            }
            None => {
                let full = k == m;
                return (powers, if full { Some(comb) } else { None });
            }
        }
    }
}

/// Inverse of a square matrix over F_p (rows as vectors).
fn invert(e: &ExtensionField, rows: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let p = e.prime_field();
    let n = rows.len();
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..n).map(|j| u64::from(i == j)));
            v
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0).expect("invertible");
        a.swap(col, piv);
        let inv = p.inv(&a[col][col]);
        for x in a[col].iter_mut() {
            *x = p.mul(x, &inv);
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let c = a[r][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x = p.sub(x, &p.mul(&c, y));
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}
