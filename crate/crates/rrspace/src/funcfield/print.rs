use super::{BiPoly, RationalFunction, TPoly};
use crate::field_tower::PrimeField;

fn monomial(c: i64, parts: &[(&str, usize)], first: bool) -> String {
    let vars: Vec<String> = parts
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|(v, e)| {
            if *e == 1 {
                v.to_string()
            } else {
                format!("{v}^{e}")
            }
        })
        .collect();
    let a = c.unsigned_abs();
    let body = if vars.is_empty() {
        a.to_string()
    } else if a == 1 {
        vars.join("*")
    } else {
        format!("{a}*{}", vars.join("*"))
    };
    match (first, c < 0) {
        (true, true) => format!("-{body}"),
        (true, false) => body,
        (false, true) => format!(" - {body}"),
        (false, false) => format!(" + {body}"),
    }
}

/// Polynomial in one variable with symmetric coefficient representatives.
pub fn format_tpoly(k: &PrimeField, a: &TPoly, var: &str) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, c) in a.coeffs().iter().enumerate().rev() {
        if *c != 0 {
            s += &monomial(k.signed(*c), &[(var, i)], s.is_empty());
        }
    }
    s
}

/// Bivariate polynomial, highest power of the outer variable first.
pub fn format_bipoly(k: &PrimeField, h: &BiPoly, tvar: &str, xvar: &str) -> String {
    if h.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (j, a) in h.coeffs().iter().enumerate().rev() {
        for (i, c) in a.coeffs().iter().enumerate().rev() {
            if *c != 0 {
                s += &monomial(k.signed(*c), &[(tvar, i), (xvar, j)], s.is_empty());
            }
        }
    }
    s
}

/// `num` or `(num)/(den)`.
pub fn format_ratfunc(k: &PrimeField, a: &RationalFunction, var: &str) -> String {
    if a.is_poly() {
        format_tpoly(k, a.num(), var)
    } else {
        format!(
            "({})/({})",
            format_tpoly(k, a.num(), var),
            format_tpoly(k, a.den(), var)
        )
    }
}
