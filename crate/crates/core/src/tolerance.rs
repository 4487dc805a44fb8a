//! Numerical tolerances and size guards shared by every module.

/// Validity checks: norms, unitarity, stochasticity, completeness, traces.
pub const EPS_NORM: f64 = 1e-9;

/// Probabilities at or below this are treated as zero.
pub const EPS_PROB: f64 = 1e-12;

/// Allowed deviation from 0/1 when checking exact promise solutions.
pub const EPS_EXACT: f64 = 1e-9;

/// Longest input accepted by the real-time simulators. Rotation phase error
/// grows roughly linearly with the number of steps.
pub const MAX_INPUT_LEN: usize = 1_000_000;

/// Largest `k` for the EVENODD machine before `pi / 2^(k+1)` underflows usefully.
pub const EVENODD_MAX_K: u32 = 50;

/// Largest number of tensor factors in a MOD_p composite (2^12 = 4096 states).
pub const MAX_COMPOSITE_FACTORS: usize = 12;

/// Default number of left-to-right passes a two-way run may use.
pub const DEFAULT_PASS_BUDGET: u64 = 1_000_000_000;
