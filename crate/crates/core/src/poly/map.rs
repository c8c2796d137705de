//! Polynomial maps `f: R^n -> R^m` and the text formats that describe them.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use super::parse::parse_at_line;
use super::{PolyError, Polynomial, PowerTable};

/// A polynomial map with its gradient and Hessian polynomials precomputed.
#[derive(Debug, Clone)]
pub struct PolyMap {
    nvars: usize,
    components: Vec<Polynomial>,
    max_powers: Vec<u32>,
    gradients: Vec<Vec<Polynomial>>,
    hessians: Vec<Vec<Vec<Polynomial>>>,
}

impl PartialEq for PolyMap {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.components == other.components
    }
}

impl PolyMap {
    pub fn new(components: Vec<Polynomial>) -> Result<Self, PolyError> {
        let Some(first) = components.first() else {
            return Err(PolyError::Shape("a map needs at least one component".into()));
        };
        let nvars = first.nvars();
        if nvars == 0 {
            return Err(PolyError::Shape("a map needs at least one variable".into()));
        }
        if components.iter().any(|c| c.nvars() != nvars) {
            return Err(PolyError::Shape("components disagree on the variable count".into()));
        }
        let gradients: Vec<Vec<Polynomial>> = components
            .iter()
            .map(|c| (0..nvars).map(|j| c.derivative(j)).collect())
            .collect();
        let hessians = gradients
            .iter()
            .map(|g| {
                g.iter()
                    .map(|gj| (0..nvars).map(|k| gj.derivative(k)).collect())
                    .collect()
            })
            .collect();
        let mut max_powers = vec![0; nvars];
        for c in &components {
            for (o, k) in max_powers.iter_mut().zip(c.max_powers()) {
                *o = (*o).max(k);
            }
        }
        Ok(PolyMap {
            nvars,
            components,
            max_powers,
            gradients,
            hessians,
        })
    }

    /// Parses one component per non-blank line; `#` starts a comment.
    pub fn parse(text: &str, nvars: usize) -> Result<Self, PolyError> {
        let mut comps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.trim().is_empty() {
                continue;
            }
            comps.push(parse_at_line(line, nvars, i + 1)?);
        }
        if comps.is_empty() {
            return Err(PolyError::Parse {
                line: 1,
                column: 1,
                message: "no component polynomials".into(),
            });
        }
        PolyMap::new(comps)
    }

    /// Parses a map file: a `vars: <n>` header followed by component lines.
    pub fn from_map_file(text: &str) -> Result<Self, PolyError> {
        Ok(ProblemFile::parse(text)?.map)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ncomponents(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn gradient_polys(&self, i: usize) -> &[Polynomial] {
        &self.gradients[i]
    }

    pub fn power_table(&self, x: &[f64]) -> PowerTable {
        PowerTable::new(x, &self.max_powers)
    }

    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        let t = self.power_table(x);
        self.components.iter().map(|c| c.evaluate_with(&t)).collect()
    }

    /// `Df(x)` as an `m x n` matrix.
    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let t = self.power_table(x);
        self.jacobian_with(&t)
    }

    pub fn jacobian_with(&self, t: &PowerTable) -> DMatrix<f64> {
        let m = self.components.len();
        DMatrix::from_fn(m, self.nvars, |i, j| self.gradients[i][j].evaluate_with(t))
    }

    pub fn gradient(&self, i: usize, x: &[f64]) -> DVector<f64> {
        let t = self.power_table(x);
        DVector::from_iterator(
            self.nvars,
            self.gradients[i].iter().map(|g| g.evaluate_with(&t)),
        )
    }

    pub fn hessian_with(&self, i: usize, t: &PowerTable) -> DMatrix<f64> {
        let n = self.nvars;
        let h = &self.hessians[i];
        let mut out = DMatrix::zeros(n, n);
        for j in 0..n {
            for k in j..n {
                let v = h[j][k].evaluate_with(t);
                out[(j, k)] = v;
                out[(k, j)] = v;
            }
        }
        out
    }

    /// Values, Jacobian and per-component Hessians from one power table.
    pub fn second_order(&self, x: &[f64]) -> (Vec<f64>, DMatrix<f64>, Vec<DMatrix<f64>>) {
        let t = self.power_table(x);
        let vals = self.components.iter().map(|c| c.evaluate_with(&t)).collect();
        let jac = self.jacobian_with(&t);
        let hess = (0..self.components.len())
            .map(|i| self.hessian_with(i, &t))
            .collect();
        (vals, jac, hess)
    }

    /// The map `c * f`.
    pub fn scaled(&self, c: f64) -> PolyMap {
        PolyMap::new(self.components.iter().map(|p| p.scale(c)).collect())
            .expect("scaling preserves shape")
    }

    /// The map with components reordered as `perm[k]`-th component at slot `k`.
    pub fn permuted(&self, perm: &[usize]) -> PolyMap {
        PolyMap::new(perm.iter().map(|&k| self.components[k].clone()).collect())
            .expect("permutation preserves shape")
    }

    /// Canonical text: the map-file form that parses back to the same map.
    pub fn to_map_text(&self) -> String {
        let mut s = format!("vars: {}\n", self.nvars);
        for c in &self.components {
            s.push_str(&c.to_string());
            s.push('\n');
        }
        s
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    }
}

/// A `.vp` problem file: map file plus optional `tbar:` and `budget:` lines.
///
/// ```text
/// # comment
/// vars: 2
/// tbar: 0.5
/// budget: n_starts=64 r_max=1e5
/// x1^2*x2^4 + x1^4*x2^2 - 3*x1^2*x2^2 + 1
/// ```
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub map: PolyMap,
    pub tbar: Option<Vec<f64>>,
    pub budget: BTreeMap<String, f64>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, PolyError> {
        let mut nvars: Option<usize> = None;
        let mut tbar: Option<(Vec<f64>, usize)> = None;
        let mut budget = BTreeMap::new();
        let mut comps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = strip_comment(raw);
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let err = |message: String| PolyError::Parse {
                line: lineno,
                column: line.len() - line.trim_start().len() + 1,
                message,
            };
            if let Some(rest) = trimmed.strip_prefix("vars:") {
                if nvars.is_some() {
                    return Err(err("duplicate vars line".into()));
                }
                let n: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("invalid variable count '{}'", rest.trim())))?;
                if n == 0 {
                    return Err(err("variable count must be positive".into()));
                }
                nvars = Some(n);
            } else if let Some(rest) = trimmed.strip_prefix("tbar:") {
                let vals = parse_floats(rest).map_err(err)?;
                tbar = Some((vals, lineno));
            } else if let Some(rest) = trimmed.strip_prefix("budget:") {
                for kv in rest.split_whitespace() {
                    let (k, v) = kv
                        .split_once('=')
                        .ok_or_else(|| err(format!("expected key=value, got '{}'", kv)))?;
                    let v: f64 = v
                        .parse()
                        .map_err(|_| err(format!("invalid budget value '{}'", v)))?;
                    budget.insert(k.to_string(), v);
                }
            } else {
                let Some(n) = nvars else {
                    return Err(err("the first entry must be 'vars: <n>'".into()));
                };
                comps.push(parse_at_line(line, n, lineno)?);
            }
        }
        if nvars.is_none() {
            return Err(PolyError::Parse {
                line: 1,
                column: 1,
                message: "missing 'vars: <n>' line".into(),
            });
        }
        if comps.is_empty() {
            return Err(PolyError::Parse {
                line: text.lines().count().max(1),
                column: 1,
                message: "no component polynomials".into(),
            });
        }
        let map = PolyMap::new(comps)?;
        let tbar = match tbar {
            Some((v, lineno)) => {
                if v.len() != map.ncomponents() {
                    return Err(PolyError::Parse {
                        line: lineno,
                        column: 1,
                        message: format!(
                            "tbar has {} entries but the map has {} components",
                            v.len(),
                            map.ncomponents()
                        ),
                    });
                }
                Some(v)
            }
            None => None,
        };
        Ok(ProblemFile { map, tbar, budget })
    }
}

/// Parses a comma- or whitespace-separated list of finite floats.
pub fn parse_floats(text: &str) -> Result<Vec<f64>, String> {
    let vals: Result<Vec<f64>, String> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("invalid number '{}'", s))
        })
        .collect();
    let vals = vals?;
    if vals.is_empty() {
        return Err("expected at least one number".into());
    }
    Ok(vals)
}
