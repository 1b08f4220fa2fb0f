//! Dense matrices over k[t]: products, determinants, (shifted) row
//! reduction with the unimodular transform, and scaled inverses.

use crate::error::{Error, Result};
use crate::field_tower::{Field, Poly, PrimeField};
use crate::funcfield::TPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: Vec<Vec<TPoly>>,
    cols: usize,
}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<TPoly>>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged matrix".into()));
        }
        Ok(PolyMatrix { rows, cols })
    }

    pub fn zero(n: usize, m: usize) -> Self {
        PolyMatrix {
            rows: vec![vec![Poly::zero(); m]; n],
            cols: m,
        }
    }

    pub fn identity(k: &PrimeField, n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.rows[i][i] = Poly::one(k);
        }
        m
    }

    pub fn diagonal(d: Vec<TPoly>) -> Self {
        let n = d.len();
        let mut m = Self::zero(n, n);
        for (i, x) in d.into_iter().enumerate() {
            m.rows[i][i] = x;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &TPoly {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, a: TPoly) {
        self.rows[i][j] = a;
    }

    pub fn row(&self, i: usize) -> &[TPoly] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<TPoly>] {
        &self.rows
    }

    pub fn map(&self, g: impl Fn(&TPoly) -> TPoly) -> Self {
        PolyMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(&g).collect())
                .collect(),
            cols: self.cols,
        }
    }

    pub fn mul(&self, k: &PrimeField, o: &Self) -> Result<Self> {
        if self.cols != o.nrows() {
            return Err(Error::InvalidInput("dimension mismatch in product".into()));
        }
        let mut out = Self::zero(self.nrows(), o.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for (l, a) in r.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o.rows[l][j];
                    if !b.is_zero() {
                        out.rows[i][j] = out.rows[i][j].add(k, &a.mul(k, b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Largest entry degree (-1 for the zero matrix).
    pub fn degree(&self) -> isize {
        self.rows
            .iter()
            .flat_map(|r| r.iter().map(|a| a.deg()))
            .max()
            .unwrap_or(-1)
    }

    /// Row degrees; None stands for a zero row.
    pub fn row_degrees(&self) -> Vec<Option<usize>> {
        self.shifted_row_degrees(&vec![0; self.cols])
            .into_iter()
            .map(|d| d.map(|x| x as usize))
            .collect()
    }

    pub fn shifted_row_degrees(&self, shift: &[i64]) -> Vec<Option<i64>> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(shift)
                    .filter_map(|(a, s)| a.degree().map(|d| d as i64 + s))
                    .max()
            })
            .collect()
    }

    /// |rdeg|, skipping zero rows.
    pub fn rdeg_sum(&self) -> i64 {
        self.row_degrees()
            .into_iter()
            .flatten()
            .map(|d| d as i64)
            .sum()
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self, k: &PrimeField) -> TPoly {
        let n = self.nrows();
        assert_eq!(n, self.cols, "determinant of a non-square matrix");
        if n == 0 {
            return Poly::one(k);
        }
        let mut a = self.rows.clone();
        let mut neg = false;
        let mut prev = Poly::one(k);
        for c in 0..n - 1 {
            if a[c][c].is_zero() {
                match (c + 1..n).find(|&i| !a[i][c].is_zero()) {
                    Some(i) => {
                        a.swap(c, i);
                        neg = !neg;
                    }
                    None => return Poly::zero(),
                }
            }
            for i in c + 1..n {
                for j in c + 1..n {
                    let v = a[i][j].mul(k, &a[c][c]).sub(k, &a[i][c].mul(k, &a[c][j]));
                    a[i][j] = v.quo(k, &prev);
                }
                a[i][c] = Poly::zero();
            }
            prev = a[c][c].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if neg {
            d.neg(k)
        } else {
            d
        }
    }

    /// Leading coefficient matrix with respect to a shift, over k.
    pub fn leading_matrix(&self, shift: &[i64]) -> Vec<Vec<u64>> {
        let rd = self.shifted_row_degrees(shift);
        self.rows
            .iter()
            .zip(rd)
            .map(|(r, d)| {
                r.iter()
                    .zip(shift)
                    .map(|(a, s)| match d {
                        Some(d) if d - s >= 0 => {
                            a.coeffs().get((d - s) as usize).copied().unwrap_or(0)
                        }
                        _ => 0,
                    })
                    .collect()
            })
            .collect()
    }

    /// Row reducedness via the leading coefficient matrix.
    pub fn is_row_reduced(&self, k: &PrimeField, shift: Option<&[i64]>) -> bool {
        let zero = vec![0; self.cols];
        let s = shift.unwrap_or(&zero);
        if self.shifted_row_degrees(s).iter().any(|d| d.is_none()) {
            return false;
        }
        let lm: Vec<Vec<TPoly>> = self
            .leading_matrix(s)
            .into_iter()
            .map(|r| r.into_iter().map(|c| Poly::constant(k, c)).collect())
            .collect();
        !PolyMatrix::from_rows(lm).unwrap().determinant(k).is_zero()
    }

    /// Weak Popov reduction: returns (R, U) with R = U·self row reduced in
    /// the shifted sense and U unimodular.
    pub fn row_reduce(&self, k: &PrimeField, shift: Option<&[i64]>) -> Result<(Self, Self)> {
        let n = self.nrows();
        if n != self.cols {
            return Err(Error::InvalidInput(
                "row reduction needs a square matrix".into(),
            ));
        }
        let zero = vec![0; n];
        let s = shift.unwrap_or(&zero);
        if s.len() != n {
            return Err(Error::InvalidInput("shift length mismatch".into()));
        }
        let mut r = self.clone();
        let mut u = Self::identity(k, n);
        loop {
            let info: Vec<Option<(i64, usize)>> = (0..n).map(|i| leading(&r.rows[i], s)).collect();
            if info.iter().any(|x| x.is_none()) {
                return Err(Error::SingularMatrix);
            }
            let mut collision = None;
            'outer: for c in 0..n {
                let mut rows: Vec<usize> = (0..n).filter(|&i| info[i].unwrap().1 == c).collect();
                if rows.len() >= 2 {
                    rows.sort_by_key(|&i| (info[i].unwrap().0, i));
                    collision = Some((rows[0], rows[1], c));
                    break 'outer;
                }
            }
            let Some((b, a, c)) = collision else { break };
            let (da, db) = (info[a].unwrap().0, info[b].unwrap().0);
            let ca = *r.rows[a][c].lead().unwrap();
            let cb = *r.rows[b][c].lead().unwrap();
            let m = Poly::monomial(k, k.div(&ca, &cb), (da - db) as usize);
            for j in 0..n {
                let x = r.rows[b][j].mul(k, &m);
                r.rows[a][j] = r.rows[a][j].sub(k, &x);
                let y = u.rows[b][j].mul(k, &m);
                u.rows[a][j] = u.rows[a][j].sub(k, &y);
            }
        }
        Ok((r, u))
    }

    /// t^d·self⁻¹ for a matrix promised to make it polynomial of degree <= d,
    /// by fraction-free Gauss–Jordan elimination.
    pub fn inverse_row_reduced(&self, k: &PrimeField, d: usize) -> Result<Self> {
        let n = self.nrows();
        if n != self.cols {
            return Err(Error::InvalidInput("inverse of a non-square matrix".into()));
        }
        let mut a: Vec<Vec<TPoly>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut v = r.clone();
                v.extend((0..n).map(|j| if i == j { Poly::one(k) } else { Poly::zero() }));
                v
            })
            .collect();
        let mut prev = Poly::one(k);
        for c in 0..n {
            if a[c][c].is_zero() {
                let i = (c + 1..n)
                    .find(|&i| !a[i][c].is_zero())
                    .ok_or(Error::SingularMatrix)?;
                a.swap(c, i);
            }
            for i in 0..n {
                if i == c {
                    continue;
                }
                let aic = a[i][c].clone();
                for j in 0..2 * n {
                    if j == c {
                        continue;
                    }
                    let v = a[i][j].mul(k, &a[c][c]).sub(k, &aic.mul(k, &a[c][j]));
                    let (q, rem) = v.divrem(k, &prev);
                    debug_assert!(rem.is_zero(), "inexact fraction-free step");
                    a[i][j] = q;
                }
                a[i][c] = Poly::zero();
            }
            prev = a[c][c].clone();
        }
        let td = Poly::monomial(k, 1, d);
        let mut out = Self::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let (q, rem) = a[i][n + j].mul(k, &td).divrem(k, &prev);
                if !rem.is_zero() {
                    return Err(Error::ContractViolation(
                        "scaled inverse is not polynomial".into(),
                    ));
                }
                if q.deg() > d as isize {
                    return Err(Error::ContractViolation(
                        "scaled inverse exceeds the degree bound".into(),
                    ));
                }
                out.rows[i][j] = q;
            }
        }
        let check = self.mul(k, &out)?;
        if check != Self::identity(k, n).map(|x| x.mul(k, &td)) {
            return Err(Error::ContractViolation("inverse check failed".into()));
        }
        Ok(out)
    }
}

/// (shifted degree, rightmost column attaining it) of a row.
fn leading(row: &[TPoly], s: &[i64]) -> Option<(i64, usize)> {
    let mut best: Option<(i64, usize)> = None;
    for (j, (a, sj)) in row.iter().zip(s).enumerate() {
        if let Some(d) = a.degree() {
            let v = d as i64 + sj;
            if best.is_none_or(|(b, _)| v >= b) {
                best = Some((v, j));
            }
        }
    }
    best
}
