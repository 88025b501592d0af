//! Reference values the `reproduce` command checks against.

/// `S(ρ_k)/k` of the trine source for `k = 1..=12`, as printed to four
/// decimals.
pub const TRINE_RATES: [f64; 12] = [
    1.0, 0.9528, 0.9306, 0.9169, 0.9076, 0.9008, 0.8957, 0.8918, 0.8886, 0.8861, 0.8839, 0.8822,
];

/// Half a unit in the last printed decimal.
pub const TRINE_TOLERANCE: f64 = 5e-4;

/// Upper bound on `S(ρ_12)/12` for the trine source.
pub const TRINE_FINAL_BOUND: f64 = 0.8827;

/// The Bell source has `S(ρ_k) = k` and `EL*_k = 1`; checked for these k.
pub const BELL_KMAX: usize = 10;

pub const BELL_TOLERANCE: f64 = 1e-9;

/// The i.i.d. demo has a constant `S(ρ_k)/k`; checked for these k.
pub const IID_DEMO_KMAX: usize = 8;

pub const IID_DEMO_TOLERANCE: f64 = 1e-9;
