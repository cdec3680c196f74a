use alloc::collections::BTreeSet;

/// Degrees `d ≤ min(dmax, 3s)` that an `SL(3) × SL(s)` invariant on
/// `C^3 ⊗ Λ^2 C^s` may have: the invariant is indexed by a `3 × d/3` and an
/// `s × 2d/s` tableau, so `3 | d` and `s | 2d`.
pub fn allowed_invariant_degrees(s: usize, dmax: usize) -> BTreeSet<usize> {
    assert!(s >= 1, "s must be positive");
    (0..=dmax.min(3 * s)).filter(|d| d % 3 == 0 && (2 * d) % s == 0).collect()
}
