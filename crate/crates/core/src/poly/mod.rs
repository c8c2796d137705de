//! Sparse multivariate polynomials with real coefficients.
//!
//! Terms are keyed by their exponent vector and kept in graded lexicographic
//! order, so printing and equality are deterministic. Zero coefficients are
//! never stored.

mod map;
mod parse;

pub use map::{parse_floats, PolyMap, ProblemFile};
pub use parse::parse_polynomial;

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("variable x{index} at line {line}, column {column} exceeds the declared {nvars} variables")]
    Index {
        index: usize,
        nvars: usize,
        line: usize,
        column: usize,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// A multi-index `κ`, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn zero(nvars: usize) -> Self {
        Exponent(vec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize, power: u32) -> Self {
        let mut e = vec![0; nvars];
        e[var] = power;
        Exponent(e)
    }

    /// `|κ|`
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One term `a_κ x^κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponent, f64>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.add_term(Exponent::zero(nvars), c);
        p
    }

    /// The polynomial `x_{var+1}` (0-based `var`).
    pub fn variable(nvars: usize, var: usize) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.add_term(Exponent::unit(nvars, var, 1), 1.0);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated exponents and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(PolyError::Shape(format!(
                    "exponent vector of length {} in a polynomial of {} variables",
                    exps.len(),
                    nvars
                )));
            }
            p.add_term(Exponent(exps), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Exponent::degree).max().unwrap_or(0)
    }

    /// Highest power of each variable appearing in any term.
    pub fn max_powers(&self) -> Vec<u32> {
        let mut out = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (o, &k) in out.iter_mut().zip(&e.0) {
                *o = (*o).max(k);
            }
        }
        out
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, f64)> + '_ {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms
            .iter()
            .map(|(e, &c)| Monomial {
                exponents: e.0.clone(),
                coefficient: c,
            })
            .collect()
    }

    pub fn coefficient(&self, exps: &[u32]) -> f64 {
        self.terms
            .get(&Exponent(exps.to_vec()))
            .copied()
            .unwrap_or(0.0)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    fn add_term(&mut self, e: Exponent, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0.0 {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: f64) -> Polynomial {
        if c == 0.0 {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::constant(self.nvars, 1.0);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Exact term-wise partial derivative with respect to variable `var` (0-based).
    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (e, &c) in &self.terms {
            let k = e.0[var];
            if k == 0 {
                continue;
            }
            let mut d = e.clone();
            d.0[var] -= 1;
            out.add_term(d, c * k as f64);
        }
        out
    }

    /// Keeps only the terms whose exponents satisfy `keep`.
    pub fn filter_terms<F: Fn(&[u32]) -> bool>(&self, keep: F) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(&e.0))
                .map(|(e, &c)| (e.clone(), c))
                .collect(),
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let table = PowerTable::new(x, &self.max_powers());
        self.evaluate_with(&table)
    }

    /// Term-sum evaluation against precomputed powers of the point.
    pub fn evaluate_with(&self, table: &PowerTable) -> f64 {
        let mut acc = 0.0;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (j, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    t *= table.get(j, k);
                }
            }
            acc += t;
        }
        acc
    }
}

/// Cached powers `x_j^k` for `k` up to the largest exponent of each variable.
#[derive(Debug, Clone)]
pub struct PowerTable {
    rows: Vec<Vec<f64>>,
}

impl PowerTable {
    pub fn new(x: &[f64], max_powers: &[u32]) -> Self {
        let rows = x
            .iter()
            .zip(max_powers)
            .map(|(&xi, &k)| {
                let mut row = Vec::with_capacity(k as usize + 1);
                let mut acc = 1.0;
                row.push(acc);
                for _ in 0..k {
                    acc *= xi;
                    row.push(acc);
                }
                row
            })
            .collect();
        PowerTable { rows }
    }

    #[inline]
    pub fn get(&self, var: usize, k: u32) -> f64 {
        self.rows[var][k as usize]
    }
}

fn write_number(f: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    // `{}` on f64 prints the shortest string that round-trips, and never uses
    // exponent notation, so the output stays inside the grammar.
    write!(f, "{}", c)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, &c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else if c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        format!("x{}", j + 1)
                    } else {
                        format!("x{}^{}", j + 1, k)
                    }
                })
                .collect();
            if vars.is_empty() {
                write_number(f, mag)?;
            } else {
                if mag != 1.0 {
                    write_number(f, mag)?;
                    write!(f, "*")?;
                }
                write!(f, "{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(text: &str, n: usize) -> Polynomial {
        parse_polynomial(text, n).unwrap()
    }

    #[test]
    fn grlex_order_sorts_by_degree_first() {
        let a = Exponent(vec![0, 3]);
        let b = Exponent(vec![2, 0]);
        let c = Exponent(vec![1, 2]);
        assert!(b < a);
        // equal degree: the larger x1 power ranks higher
        assert!(a < c);
        assert!(b < c);
    }

    #[test]
    fn motzkin_terms() {
        let m = poly("x1^2*x2^4 + x1^4*x2^2 - 3*x1^2*x2^2 + 1", 2);
        assert_eq!(m.len(), 4);
        let mut exps: Vec<Vec<u32>> = m.monomials().into_iter().map(|t| t.exponents).collect();
        exps.sort();
        assert_eq!(exps, vec![vec![0, 0], vec![2, 2], vec![2, 4], vec![4, 2]]);
        assert_eq!(m.coefficient(&[2, 2]), -3.0);
    }

    #[test]
    fn cancellation_and_merging() {
        assert!(poly("0*x1 + x2 - x2", 2).is_zero());
        let p = poly("x1 + x1", 1);
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(&[1]), 2.0);
    }

    #[test]
    fn evaluation_examples() {
        let m = poly("x1^2*x2^4 + x1^4*x2^2 - 3*x1^2*x2^2 + 1", 2);
        assert_eq!(m.evaluate(&[1.0, 1.0]), 0.0);
        assert_eq!(m.evaluate(&[0.0, 0.0]), 1.0);
        let h = poly("(x1*x2 - 1)^2 + x1^2", 2);
        // hand evaluation: (0*5 - 1)^2 + 0 = 1
        assert_eq!(h.evaluate(&[0.0, 5.0]), 1.0);
    }

    #[test]
    fn derivative_of_monomial() {
        let p = poly("3*x1^2*x2", 2);
        let d = p.derivative(0);
        assert_eq!(d.coefficient(&[1, 1]), 6.0);
        assert!(p.derivative(0).derivative(0).derivative(0).is_zero());
    }

    #[test]
    fn display_round_trips() {
        let p = poly("-x1^2 + 0.5*x1*x2 - 7 + x2^3", 2);
        let text = p.to_string();
        assert_eq!(poly(&text, 2), p);
        assert_eq!(Polynomial::zero(3).to_string(), "0");
    }
}
