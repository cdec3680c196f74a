use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::combinatorics::{next_permutation, sort_sign};
use crate::error::{invalid, Error, Result};
use crate::poly::{Monomial, SparsePoly};

/// A pair of tableau fillings: `v_rows` for the `V` factor (one letter per
/// cell, each letter once) and `w_rows` for the `W` factor (each letter
/// `wedge` times). Letters are `a, b, c, …` stored as `0, 1, 2, …`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FillingPair {
    v_rows: Vec<Vec<u8>>,
    w_rows: Vec<Vec<u8>>,
}

fn parse_rows(rows: &[&str]) -> Result<Vec<Vec<u8>>> {
    let parsed: Vec<Vec<u8>> = rows
        .iter()
        .map(|r| {
            r.bytes()
                .map(|b| {
                    if b.is_ascii_lowercase() {
                        Ok(b - b'a')
                    } else {
                        Err(invalid("tableau letters must be a-z"))
                    }
                })
                .collect::<Result<Vec<u8>>>()
        })
        .collect::<Result<_>>()?;
    let width = parsed.first().map_or(0, |r| r.len());
    if width == 0 || parsed.iter().any(|r| r.len() != width) {
        return Err(invalid("tableau must be a non-empty rectangle"));
    }
    Ok(parsed)
}

impl FillingPair {
    /// Strict constructor: rectangular tableaux, every letter once in `V`, and
    /// the same number of times in `W`.
    pub fn new(v_rows: &[&str], w_rows: &[&str]) -> Result<Self> {
        let pair = FillingPair::from_rows_unchecked(v_rows, w_rows)?;
        if !pair.is_valid() {
            return Err(invalid("letter multiplicities do not match"));
        }
        Ok(pair)
    }

    /// Checks shapes only. Degenerate letter multiplicities are allowed and
    /// produce the zero invariant.
    pub fn from_rows_unchecked(v_rows: &[&str], w_rows: &[&str]) -> Result<Self> {
        let pair = FillingPair {
            v_rows: parse_rows(v_rows)?,
            w_rows: parse_rows(w_rows)?,
        };
        let cells = pair.degree() * pair.wedge();
        if pair.w_rows.len() * pair.w_rows[0].len() != cells || pair.degree() * pair.wedge() == 0 {
            return Err(invalid("W tableau size must be a multiple of the V tableau size"));
        }
        if pair.all_letters().any(|l| usize::from(l) >= pair.degree()) {
            return Err(invalid("letters must lie in the first `degree` letters"));
        }
        Ok(pair)
    }

    /// The filling `ac/be/df ⊗ abc/abd/ade/bdf/cef/cef` whose symmetrizer gives
    /// the degree-6 invariant of `C^3 ⊗ Λ^3 C^6`.
    pub fn degree_six() -> Self {
        FillingPair::new(&["ac", "be", "df"], &["abc", "abd", "ade", "bdf", "cef", "cef"])
            .expect("built-in filling is valid")
    }

    fn all_letters(&self) -> impl Iterator<Item = u8> + '_ {
        self.v_rows.iter().chain(&self.w_rows).flatten().copied()
    }

    pub fn v_dim(&self) -> usize {
        self.v_rows.len()
    }

    pub fn w_dim(&self) -> usize {
        self.w_rows.len()
    }

    /// Number of letters, which is the degree of the invariant.
    pub fn degree(&self) -> usize {
        self.v_rows.len() * self.v_rows[0].len()
    }

    /// How many times each letter occurs in `W` (the exterior power `Λ^wedge W`).
    pub fn wedge(&self) -> usize {
        let w_cells = self.w_rows.len() * self.w_rows[0].len();
        w_cells / self.degree()
    }

    pub fn is_valid(&self) -> bool {
        let d = self.degree();
        let mut v_count = vec![0usize; d];
        let mut w_count = vec![0usize; d];
        self.v_rows.iter().flatten().for_each(|&l| v_count[usize::from(l)] += 1);
        self.w_rows.iter().flatten().for_each(|&l| w_count[usize::from(l)] += 1);
        v_count.iter().all(|&c| c == 1) && w_count.iter().all(|&c| c == self.wedge())
    }

    /// Columns of the `V` tableau, top to bottom.
    pub fn v_columns(&self) -> Vec<Vec<u8>> {
        (0..self.v_rows[0].len())
            .map(|c| self.v_rows.iter().map(|r| r[c]).collect())
            .collect()
    }

    /// Columns of the `W` tableau as `(letter, occurrence)`; the occurrence index
    /// counts earlier appearances of the letter in row-major reading order.
    pub fn w_columns(&self) -> Vec<Vec<(u8, usize)>> {
        let width = self.w_rows[0].len();
        let mut seen = vec![0usize; self.degree()];
        let mut occ = vec![vec![0usize; width]; self.w_rows.len()];
        for (r, row) in self.w_rows.iter().enumerate() {
            for (c, &l) in row.iter().enumerate() {
                occ[r][c] = seen[usize::from(l)];
                seen[usize::from(l)] += 1;
            }
        }
        (0..width)
            .map(|c| (0..self.w_rows.len()).map(|r| (self.w_rows[r][c], occ[r][c])).collect())
            .collect()
    }

    pub fn v_row_strings(&self) -> Vec<String> {
        self.v_rows.iter().map(|r| letters(r)).collect()
    }

    pub fn w_row_strings(&self) -> Vec<String> {
        self.w_rows.iter().map(|r| letters(r)).collect()
    }

    pub(crate) fn w_cells(&self) -> Vec<u8> {
        self.w_rows.iter().flatten().copied().collect()
    }

    pub(crate) fn v_cells(&self) -> Vec<u8> {
        self.v_rows.iter().flatten().copied().collect()
    }

    pub(crate) fn from_cells(&self, v_cells: &[u8], w_cells: &[u8]) -> FillingPair {
        let vw = self.v_rows[0].len();
        let ww = self.w_rows[0].len();
        FillingPair {
            v_rows: v_cells.chunks(vw).map(|c| c.to_vec()).collect(),
            w_rows: w_cells.chunks(ww).map(|c| c.to_vec()).collect(),
        }
    }
}

fn letters(row: &[u8]) -> String {
    row.iter().map(|&l| char::from(b'a' + l)).collect()
}

impl fmt::Debug for FillingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FillingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊗ {}", self.v_row_strings().join("/"), self.w_row_strings().join("/"))
    }
}

/// A determinant whose row `r` is the run of variables `rows[r] .. rows[r] + ncols`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetFactor {
    pub rows: Vec<usize>,
    pub ncols: usize,
}

impl DetFactor {
    /// Leibniz expansion.
    pub fn expand(&self, num_vars: usize) -> Result<SparsePoly> {
        let n = self.rows.len();
        if n != self.ncols {
            return Err(invalid("determinant factor must be square"));
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut out = SparsePoly::zero(num_vars);
        loop {
            let vars: Vec<usize> = perm.iter().enumerate().map(|(r, &c)| self.rows[r] + c).collect();
            out.add_term(Monomial::from_vars(&vars)?, BigInt::from(sort_sign(&perm)));
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Ok(out)
    }
}

/// `p_V · p_W` kept as a product of column determinants.
///
/// Variable numbering: `V` letter variables `ℓ_i` come first
/// (`ℓ · dim V + i`), then the `W` variables `ℓ_{r,c}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnDeterminants {
    filling: FillingPair,
    pub v_factors: Vec<DetFactor>,
    pub w_factors: Vec<DetFactor>,
}

impl ColumnDeterminants {
    pub fn filling(&self) -> &FillingPair {
        &self.filling
    }

    pub fn v_var(&self, letter: usize, i: usize) -> usize {
        letter * self.filling.v_dim() + i
    }

    pub fn w_var(&self, letter: usize, occurrence: usize, col: usize) -> usize {
        let f = &self.filling;
        f.degree() * f.v_dim() + (letter * f.wedge() + occurrence) * f.w_dim() + col
    }

    /// Number of auxiliary letter variables.
    pub fn num_letter_vars(&self) -> usize {
        let f = &self.filling;
        f.degree() * (f.v_dim() + f.wedge() * f.w_dim())
    }

    pub fn p_v(&self) -> Result<SparsePoly> {
        product(&self.v_factors, self.num_letter_vars(), usize::MAX)
    }

    pub fn p_w(&self, max_terms: usize) -> Result<SparsePoly> {
        product(&self.w_factors, self.num_letter_vars(), max_terms)
    }

    /// Fully expanded `p_V · p_W`; fails once an intermediate exceeds `max_terms`.
    pub fn expand(&self, max_terms: usize) -> Result<SparsePoly> {
        let all: Vec<DetFactor> = self.v_factors.iter().chain(&self.w_factors).cloned().collect();
        product(&all, self.num_letter_vars(), max_terms)
    }
}

fn product(factors: &[DetFactor], num_vars: usize, max_terms: usize) -> Result<SparsePoly> {
    let mut acc = SparsePoly::one(num_vars);
    for f in factors {
        let e = f.expand(num_vars)?;
        if acc.len().saturating_mul(e.len()) > max_terms {
            return Err(Error::Refused(alloc::format!(
                "expansion would exceed {max_terms} terms"
            )));
        }
        acc = acc.mul(&e)?;
    }
    Ok(acc)
}

/// The product of column determinants attached to a filling.
pub fn column_determinant_product(filling: &FillingPair) -> Result<ColumnDeterminants> {
    let mut cd = ColumnDeterminants {
        filling: filling.clone(),
        v_factors: Vec::new(),
        w_factors: Vec::new(),
    };
    if filling.v_columns().iter().any(|c| c.len() != filling.v_dim())
        || filling.w_columns().iter().any(|c| c.len() != filling.w_dim())
    {
        return Err(invalid("columns must be as tall as the space dimension"));
    }
    cd.v_factors = filling
        .v_columns()
        .iter()
        .map(|col| DetFactor {
            rows: col.iter().map(|&l| cd.v_var(usize::from(l), 0)).collect(),
            ncols: filling.v_dim(),
        })
        .collect();
    cd.w_factors = filling
        .w_columns()
        .iter()
        .map(|col| DetFactor {
            rows: col.iter().map(|&(l, r)| cd.w_var(usize::from(l), r, 0)).collect(),
            ncols: filling.w_dim(),
        })
        .collect();
    Ok(cd)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn displayed_rows_of_p_w() {
        let f = FillingPair::degree_six();
        let cols = f.w_columns();
        let as_labels = |col: &Vec<(u8, usize)>| -> Vec<(char, usize)> {
            col.iter().map(|&(l, r)| (char::from(b'a' + l), r + 1)).collect()
        };
        assert_eq!(as_labels(&cols[0]), [('a', 1), ('a', 2), ('a', 3), ('b', 3), ('c', 2), ('c', 3)]);
        assert_eq!(as_labels(&cols[1]), [('b', 1), ('b', 2), ('d', 2), ('d', 3), ('e', 2), ('e', 3)]);
        assert_eq!(as_labels(&cols[2]), [('c', 1), ('d', 1), ('e', 1), ('f', 1), ('f', 2), ('f', 3)]);
        assert_eq!(f.v_columns(), [[0, 1, 3], [2, 4, 5]]);
    }

    #[test]
    fn p_v_has_36_terms() {
        let cd = column_determinant_product(&FillingPair::degree_six()).unwrap();
        let pv = cd.p_v().unwrap();
        assert_eq!(pv.len(), 36);
        assert!(pv.terms().all(|(m, c)| m.degree() == 6 && (*c == BigInt::from(1) || *c == BigInt::from(-1))));
        // a_1 b_2 d_3 c_1 e_2 f_3 appears with coefficient +1 (both diagonals)
        let diag = Monomial::from_vars(&[
            cd.v_var(0, 0),
            cd.v_var(1, 1),
            cd.v_var(3, 2),
            cd.v_var(2, 0),
            cd.v_var(4, 1),
            cd.v_var(5, 2),
        ])
        .unwrap();
        assert_eq!(pv.coeff(&diag), BigInt::from(1));
    }

    #[test]
    fn repeated_letter_in_v_column_vanishes() {
        let f = FillingPair::from_rows_unchecked(&["ac", "ae", "df"], &["abc", "abd", "ade", "bdf", "cef", "cef"]).unwrap();
        assert!(!f.is_valid());
        let cd = column_determinant_product(&f).unwrap();
        assert!(cd.p_v().unwrap().is_zero());
    }

    #[test]
    fn full_expansion_is_refused_when_too_large() {
        let cd = column_determinant_product(&FillingPair::degree_six()).unwrap();
        assert!(matches!(cd.expand(1_000_000), Err(Error::Refused(_))));
    }

    #[test]
    fn invalid_fillings() {
        assert!(FillingPair::new(&["ab", "c"], &["abc"]).is_err());
        assert!(FillingPair::new(&["aB"], &["ab"]).is_err());
        assert!(FillingPair::new(&["ac", "be", "df"], &["abc", "abd", "ade", "bdf", "cef", "ceg"]).is_err());
        assert!(FillingPair::new(&["ac", "be", "df"], &["abc", "abd", "ade", "bdf", "cef", "cee"]).is_err());
    }

    #[test]
    fn display_roundtrip() {
        let f = FillingPair::degree_six();
        assert_eq!(alloc::format!("{f}"), "ac/be/df ⊗ abc/abd/ade/bdf/cef/cef");
        assert_eq!(f.degree(), 6);
        assert_eq!(f.wedge(), 3);
        assert_eq!((f.v_dim(), f.w_dim()), (3, 6));
    }
}
