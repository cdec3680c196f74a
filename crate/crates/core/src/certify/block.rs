use alloc::vec::Vec;

use num_complex::Complex64;
use rand::RngCore;

use crate::combinatorics::{binomial, subset_rank};
use crate::error::{invalid, Error, Result};
use crate::flattening::{box_product, GenericSkewMatrix};
use crate::invariants::allowed_invariant_degrees;
use crate::linalg::{determinant, gaussian_vec, hadamard_scale, CMatrix};
use crate::tensor::MAX_RESAMPLES;

/// Size of the leading block `Q'` of `Q`.
pub const LEADING: usize = 3;
/// The leading `9 × 9` determinant counts as singular below this fraction of its Hadamard scale.
const SINGULAR_BLOCK: f64 = 1e-12;

/// Both sides of the block identity for `P ⊠ Q` with `Q` of size `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockIdentity {
    /// `det(P ⊠ Q)` with the cross variables of `Q` set to zero.
    pub projected: Complex64,
    /// `det(P ⊠ Q')` on the leading block.
    pub leading: Complex64,
    pub leading_scale: f64,
    /// `det(P ⊠ Q'^c)` on the complementary block.
    pub complement: Complex64,
    /// Hadamard scale of the complementary matrix.
    pub complement_scale: f64,
}

impl BlockIdentity {
    pub fn rhs(&self) -> Complex64 {
        self.leading * self.complement
    }

    /// `|lhs − rhs|` relative to `max(|lhs|, |rhs|)`, or to `|C|·‖P ⊠ Q'^c‖_H`
    /// when the complementary determinant vanishes.
    pub fn residual(&self) -> f64 {
        let (lhs, rhs) = (self.projected, self.rhs());
        let diff = (lhs - rhs).norm();
        let singular = self.complement.norm() <= 1e3 * f64::EPSILON * self.complement_scale;
        let scale = if singular {
            self.leading.norm() * self.complement_scale
        } else {
            lhs.norm().max(rhs.norm())
        };
        if diff == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }
}

/// Evaluates both sides at `values`, one per variable of `P ⊠ Q`
/// (index `p_var · C(s,2) + q_var`). Cross variables are projected to zero.
pub fn block_identity(s: usize, values: &[Complex64]) -> Result<BlockIdentity> {
    if s < LEADING + 1 {
        return Err(invalid("block identity needs s ≥ 4"));
    }
    let qv = binomial(s, 2);
    if values.len() != 3 * qv {
        return Err(invalid("value vector does not match the pattern"));
    }
    let pattern = box_product(&GenericSkewMatrix::generic(3), &GenericSkewMatrix::generic(s));
    let in_leading = |k: usize| k < LEADING;
    let mut projected_values = values.to_vec();
    for k in 0..s {
        for l in k + 1..s {
            if in_leading(k) != in_leading(l) {
                for pv in 0..3 {
                    projected_values[pv * qv + subset_rank(&[k, l], s)] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }
    let projected = determinant(&pattern.evaluate(&projected_values));

    // values of the ⊠ pattern on the diagonal block of Q at `offset..offset + size`
    let block = |offset: usize, size: usize| -> CMatrix {
        let mut out = Vec::with_capacity(3 * binomial(size, 2));
        for pv in 0..3 {
            for k in 0..size {
                for l in k + 1..size {
                    out.push(values[pv * qv + subset_rank(&[k + offset, l + offset], s)]);
                }
            }
        }
        box_product(&GenericSkewMatrix::generic(3), &GenericSkewMatrix::generic(size)).evaluate(&out)
    };
    let lead = block(0, LEADING);
    let comp = block(LEADING, s - LEADING);
    Ok(BlockIdentity {
        projected,
        leading: determinant(&lead),
        leading_scale: hadamard_scale(&lead),
        complement: determinant(&comp),
        complement_scale: hadamard_scale(&comp),
    })
}

/// Random draw of the block identity; draws with a singular leading block are redrawn.
pub fn block_specialization_check(s: usize, rng: &mut dyn RngCore) -> Result<f64> {
    if s < LEADING + 1 {
        return Err(invalid("block identity needs s ≥ 4"));
    }
    for _ in 0..MAX_RESAMPLES {
        let values = gaussian_vec(rng, 3 * binomial(s, 2));
        let id = block_identity(s, &values)?;
        if id.leading.norm() > SINGULAR_BLOCK * id.leading_scale {
            return Ok(id.residual());
        }
    }
    Err(Error::DegenerateSample { attempts: MAX_RESAMPLES })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapEntry {
    pub s: usize,
    /// Degrees `0 < d < 3s` an invariant factor of `det(P ⊠ Q)` could have.
    pub intermediate: Vec<usize>,
}

impl GapEntry {
    /// No intermediate degree: `det(P ⊠ Q)` is irreducible whenever it is nonzero.
    pub fn forced(&self) -> bool {
        self.intermediate.is_empty()
    }
}

pub fn degree_gap(s: usize) -> GapEntry {
    GapEntry {
        s,
        intermediate: allowed_invariant_degrees(s, 3 * s)
            .into_iter()
            .filter(|&d| d > 0 && d < 3 * s)
            .collect(),
    }
}

/// [`degree_gap`] for `s = 1..=s_max`.
pub fn lemma_gap_scan(s_max: usize) -> Vec<GapEntry> {
    (1..=s_max).map(degree_gap).collect()
}
