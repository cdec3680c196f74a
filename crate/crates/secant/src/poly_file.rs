//! Text format for polynomials in the coordinates `x_{i,J}`:
//!
//! ```text
//! # vars m=3 k=3 n=6 degree=6
//! 1  1,1,2,3  1,4,5,6  2,1,2,4  …
//! ```
//!
//! `m`, `k`, `n` are `dim V`, the wedge order and `dim W`. Each term line holds
//! the coefficient and then one 1-based `i,j1,…,jk` label per factor, factors
//! ascending, lines ordered by their factor lists. LF line endings.

use std::fmt::Write as _;

use num_bigint::BigInt;
use secant_core::poly::{Monomial, SparsePoly};
use secant_core::SecantSpec;

use crate::json::FormatError;

/// `(dim V, wedge order, dim W)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub v_dim: usize,
    pub wedge: usize,
    pub w_dim: usize,
}

impl Shape {
    pub fn spec(&self) -> Result<SecantSpec, FormatError> {
        if self.v_dim == 0 || self.wedge == 0 || self.w_dim == 0 {
            return Err(FormatError::Invalid("dimensions must be positive".into()));
        }
        SecantSpec::new(self.v_dim - 1, self.wedge - 1, self.w_dim - 1, 1).map_err(|e| FormatError::Invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyFile {
    pub shape: Shape,
    pub degree: usize,
    pub poly: SparsePoly,
}

fn label(labels: &[(usize, Vec<usize>)], var: usize) -> String {
    let (i, cols) = &labels[var];
    let mut s = (i + 1).to_string();
    for c in cols {
        let _ = write!(s, ",{}", c + 1);
    }
    s
}

pub fn write_poly_file(poly: &SparsePoly, shape: Shape) -> Result<String, FormatError> {
    let spec = shape.spec()?;
    if poly.num_vars() != spec.num_coords() {
        return Err(FormatError::Invalid("polynomial variables do not match the shape".into()));
    }
    let labels = spec.coord_labels();
    let degree = poly.degree().unwrap_or(0);
    let mut rows: Vec<(Vec<usize>, String)> = poly
        .terms()
        .map(|(m, c)| {
            let vars: Vec<usize> = m.vars().collect();
            let mut line = c.to_string();
            for &v in &vars {
                line.push_str("  ");
                line.push_str(&label(&labels, v));
            }
            (vars, line)
        })
        .collect();
    rows.sort();
    let mut out = format!("# vars m={} k={} n={} degree={}\n", shape.v_dim, shape.wedge, shape.w_dim, degree);
    for (_, line) in rows {
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

fn header_value(field: Option<&str>, key: &str) -> Result<usize, FormatError> {
    field
        .and_then(|f| f.strip_prefix(key))
        .and_then(|f| f.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| FormatError::Invalid(format!("header field {key} missing or malformed")))
}

pub fn parse_poly_file(text: &str) -> Result<PolyFile, FormatError> {
    let bad = |msg: String| FormatError::Invalid(msg);
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty polynomial file".into()))?;
    let mut fields = header.strip_prefix("# vars ").ok_or_else(|| bad("missing header".into()))?.split(' ');
    let v_dim = header_value(fields.next(), "m")?;
    let wedge = header_value(fields.next(), "k")?;
    let w_dim = header_value(fields.next(), "n")?;
    let degree = header_value(fields.next(), "degree")?;
    let shape = Shape { v_dim, wedge, w_dim };
    let spec = shape.spec()?;
    let mut poly = SparsePoly::zero(spec.num_coords());
    for (no, line) in lines.enumerate() {
        let mut parts = line.split("  ");
        let coeff: BigInt = parts
            .next()
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| bad(format!("line {}: bad coefficient", no + 2)))?;
        let mut vars = Vec::new();
        for factor in parts {
            let nums: Vec<usize> = factor
                .split(',')
                .map(|x| x.parse::<usize>().ok().filter(|&x| x >= 1).map(|x| x - 1))
                .collect::<Option<_>>()
                .ok_or_else(|| bad(format!("line {}: bad factor {factor:?}", no + 2)))?;
            let ok = nums.len() == wedge + 1
                && nums[0] < v_dim
                && nums[1..].windows(2).all(|w| w[0] < w[1])
                && nums[1..].iter().all(|&c| c < w_dim);
            if !ok {
                return Err(bad(format!("line {}: factor {factor:?} out of range", no + 2)));
            }
            vars.push(spec.coord_index(nums[0], &nums[1..]));
        }
        let mono = Monomial::from_vars(&vars).map_err(|e| bad(e.to_string()))?;
        poly.add_term(mono, coeff);
    }
    if !poly.is_zero() && poly.degree() != Some(degree) {
        return Err(bad("header degree does not match the terms".into()));
    }
    Ok(PolyFile { shape, degree, poly })
}
