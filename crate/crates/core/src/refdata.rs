//! Published reference data for the cubic-spline, delay-3, 5-tap design
//! problem: tap coefficients of three causal direct filters and the
//! worst-case magnitude of their reconstruction residuals. These are the
//! fixed comparison baselines used by the analysis commands and the
//! regression tests; the design procedures behind the least-squares and
//! windowed filters are not reimplemented here.

/// 5-tap minimax-optimal FIR direct filter (cubic spline, delay 3,
/// unweighted). The unconstrained optimum is near-palindromic but not
/// exactly so; the published last-digit asymmetry is kept as-is.
pub const HINF_FIR_5TAP_D3: [f64; 5] =
    [0.1152359, -0.4614954, 1.7307475, -0.4614951, 0.1152352];

/// 5-tap constrained least-squares direct filter (exact DC reconstruction).
pub const CLSD_5TAP_D3: [f64; 5] = [0.0991561, -0.4599156, 1.7215190, -0.4599156, 0.0991561];

/// 5-tap Kaiser-windowed approximation of the ideal direct filter.
pub const KWA_5TAP_D3: [f64; 5] =
    [0.06049527, -0.37739071, 1.63379087, -0.37739071, 0.06049527];

/// Peak residual magnitudes `||z^-3 - psi phi||_inf` for the four reference
/// designs (cubic spline, delay 3).
pub const NORM_IIR_OPT: f64 = 0.019238;
pub const NORM_FIR_OPT: f64 = 0.038597;
pub const NORM_CLSD: f64 = 0.053446;
pub const NORM_KWA: f64 = 0.16348;

/// The same peak magnitudes in decibels.
pub const NORM_IIR_OPT_DB: f64 = -34.3168;
pub const NORM_FIR_OPT_DB: f64 = -28.2689;
pub const NORM_CLSD_DB: f64 = -25.4417;
pub const NORM_KWA_DB: f64 = -15.7307;

/// Reference end-to-end reconstruction error norms for the demonstration
/// signal (square wave through an 8th-order lowpass): constrained
/// least-squares, unweighted minimax IIR, and frequency-weighted minimax FIR.
/// The exact values depend on simulation duration and quadrature, which the
/// published source does not state; they are matched loosely (see the
/// acceptance suite) while the ordering is exact.
pub const SIM_L2_CLSD: f64 = 1.9181;
pub const SIM_L2_IIR_OPT: f64 = 1.2289;
pub const SIM_L2_WEIGHTED_FIR: f64 = 0.7993;
