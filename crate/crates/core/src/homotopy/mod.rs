//! Degrees of parametrized hypersurfaces by monodromy and the trace test.
//!
//! Points of `H ∩ L` for a line `L = {a + t·b}` are represented through the
//! parametrization: unknowns `(p, t, λ)` with `F(p) = λ(a + t·b)`, plus random
//! affine slices that cut the positive-dimensional fibres of `F` down to points.

mod system;
pub mod toy;
mod tracker;
mod witness;

pub use system::{build_secant_system, build_sliced_system, Line, Segment, SlicedSystem, WitnessPoint};
pub use tracker::{track_path, PathResult, PathStatus, TrackerOptions};
pub use witness::{
    hypersurface_degree, hypersurface_degree_of, monodromy_loop, trace_endpoints, trace_residual, trace_test, TraceDirection,
    DegreeReport, HomotopyConfig, LoopReport, TraceEndpoints, TraceOutcome, WitnessSet, DEFAULT_DEDUP_TOL,
    DEFAULT_LOOP_BUDGET, TRACE_TOL,
};

use alloc::vec::Vec;

/// Applies `f` to every item, in parallel when the `std` feature is on; output
/// order always matches input order.
pub(crate) fn map_in_order<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "std")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "std"))]
    {
        items.iter().map(f).collect()
    }
}
