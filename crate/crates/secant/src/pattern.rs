//! Symbolic export of `φ_T`: one line `row col sign i j k` per nonzero entry,
//! 1-based, row-major, where the entry is `sign · x_{i,j,k}`.

use secant_core::flattening::{phi_matrix, PhiMatrix};

use crate::json::FormatError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternEntry {
    pub row: usize,
    pub col: usize,
    pub sign: i8,
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

pub fn pattern_entries(phi: &PhiMatrix) -> Vec<PatternEntry> {
    phi.pattern()
        .nonzero_entries()
        .map(|(row, col, e)| {
            let (i, j, k) = phi.var_label(e.var);
            PatternEntry {
                row: row + 1,
                col: col + 1,
                sign: e.sign,
                i: i + 1,
                j: j + 1,
                k: k + 1,
            }
        })
        .collect()
}

pub fn export_pattern(phi: &PhiMatrix) -> String {
    pattern_entries(phi)
        .iter()
        .map(|e| format!("{} {} {} {} {} {}\n", e.row, e.col, e.sign, e.i, e.j, e.k))
        .collect()
}

pub fn parse_pattern(text: &str) -> Result<Vec<PatternEntry>, FormatError> {
    text.lines()
        .enumerate()
        .map(|(no, line)| {
            let f: Vec<i64> = line
                .split(' ')
                .map(|x| x.parse().ok())
                .collect::<Option<_>>()
                .filter(|f: &Vec<i64>| f.len() == 6 && (f[2] == 1 || f[2] == -1) && f.iter().enumerate().all(|(n, &x)| n == 2 || x >= 1))
                .ok_or_else(|| FormatError::Invalid(format!("pattern line {}: {line:?}", no + 1)))?;
            Ok(PatternEntry {
                row: f[0] as usize,
                col: f[1] as usize,
                sign: f[2] as i8,
                i: f[3] as usize,
                j: f[4] as usize,
                k: f[5] as usize,
            })
        })
        .collect()
}

/// The pattern of `φ_T` for `ℓ`, exported.
pub fn phi_pattern_text(ell: usize) -> String {
    export_pattern(&phi_matrix(ell))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ell_one_pattern() {
        let text = phi_pattern_text(1);
        let entries = parse_pattern(&text).unwrap();
        // 3 · 2 off-diagonal factor pairs × 7 · 6 skew pairs
        assert_eq!(entries.len(), 6 * 42);
        assert_eq!(entries, pattern_entries(&phi_matrix(1)));
        assert!(entries.iter().all(|e| e.row <= 21 && e.col <= 21 && e.i <= 3 && e.j < e.k && e.k <= 7));
        assert!(text.ends_with('\n') && !text.contains('\r'));
        // symmetric as a matrix of signed variables
        for e in &entries {
            let t = entries.iter().find(|f| f.row == e.col && f.col == e.row).unwrap();
            assert_eq!((t.sign, t.i, t.j, t.k), (e.sign, e.i, e.j, e.k));
        }
    }

    #[test]
    fn bad_lines() {
        assert!(parse_pattern("1 2 3 1 1 2\n").is_err());
        assert!(parse_pattern("1 2 1 1 1\n").is_err());
        assert!(parse_pattern("0 2 1 1 1 2\n").is_err());
    }
}
