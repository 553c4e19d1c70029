//! Tolerances shared by operations and tests.

/// Eigen-residual bound, relative to the operator norm.
pub const EPS_RESID: f64 = 1e-10;
/// Hermiticity defect allowed on inputs, relative to `max(1, max|X_ij|)`.
pub const EPS_HERM: f64 = 1e-12;
/// Slack on `L >= 0`.
pub const EPS_POSITIVE: f64 = 1e-12;
/// Minimum eigenvalue for an eigenoperator or state to count as positive.
pub const EPS_PHYSICAL: f64 = 1e-9;
/// Below this `|Tr|` a unit-norm eigenvector is treated as traceless.
pub const EPS_TRACELESS: f64 = 1e-10;
/// Relative cutoff on `|c_nu|` for initial support.
pub const EPS_SUPPORT: f64 = 1e-10;
/// Real parts closer than this count as degenerate.
pub const EPS_DEGENERATE: f64 = 1e-10;
/// Eigenvector-matrix condition number above which a Liouvillian is near-defective.
pub const MAX_EIGVEC_CONDITION: f64 = 1e8;
/// Minimum `|Tr(l^† r)|` for a usable left/right pair.
pub const EPS_PAIRING: f64 = 1e-12;
/// Entry magnitude treated as blow-up during integration.
pub const BLOWUP: f64 = 1e12;
/// Purity rates below this are reported as an infinite decoherence time.
pub const EPS_RATE_ZERO: f64 = 1e-14;
/// Determinants in `[-EPS_DET_CLIP, 0)` are clipped to zero.
pub const EPS_DET_CLIP: f64 = 1e-12;
/// Relative distance to a phase boundary that earns the boundary tag.
pub const EPS_PHASE_BOUNDARY: f64 = 1e-9;
/// Unit-trace check on user-supplied states.
pub const EPS_TRACE: f64 = 1e-10;
