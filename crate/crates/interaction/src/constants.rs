use crate::{InteractionError, InteractionSpec};
use serde::Serialize;

/// Number of sites of `Z^d` at `l^inf` distance exactly `r` from the origin.
pub fn shell_size(d: usize, r: u64) -> f64 {
    if r == 0 {
        return 1.0;
    }
    let (a, b) = ((2 * r + 1) as f64, (2 * r - 1) as f64);
    a.powi(d as i32) - b.powi(d as i32)
}

/// `sum_{r >= 1} shell_size(d, r) q^r` for `0 <= q < 1`.
pub fn weighted_shell_sum(d: usize, q: f64) -> f64 {
    assert!((0.0..1.0).contains(&q), "ratio must lie in [0,1)");
    if q == 0.0 {
        return 0.0;
    }
    let mut total = 0.0;
    let mut r = 1u64;
    loop {
        let term = shell_size(d, r) * q.powi(r as i32);
        total += term;
        // Terms decrease once r exceeds d / |ln q|.
        if term <= 1e-18 * total && (r as f64) * (-q.ln()) > d as f64 {
            return total;
        }
        r += 1;
    }
}

/// Derivative bounds of the potential, uniform in the finite lattice.
///
/// Second and higher mixed derivatives are weighted by `weight_eps^r`, where
/// `weight_eps = sqrt(eps)` lies strictly between the coupling decay rate and
/// one so that the weighted sums over `Z^d` converge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HypothesisConstants {
    /// Bound on `sup_l |dV/dx_l|`.
    pub m1: f64,
    /// Bound on `sup_l sum_m |d^2 V/dx_l dx_m| / weight_eps^|l-m|`.
    pub m2: f64,
    /// `m2^(-1/2)`, infinite when `m2 == 0`.
    pub t0: f64,
    pub weight_eps: f64,
    /// Per-row weighted sum of pair-coupling magnitudes (times a derivative bound).
    pub pair_row_sum: f64,
}

impl HypothesisConstants {
    /// Bound for `sum_m sup |d^a_l d^b_m B_lm| / weight_eps^|l-m|` with `a, b >= 0`.
    pub fn pair_derivative_sum(&self) -> f64 {
        self.pair_row_sum
    }

    /// Largest admissible inverse temperature scale `t0 / hbar`.
    pub fn time_scale(&self, hbar: f64) -> f64 {
        self.t0 / hbar
    }
}

/// Compute `M1`, `M2` and `T0` for an interaction.
pub fn hypothesis_constants(spec: &InteractionSpec) -> Result<HypothesisConstants, InteractionError> {
    spec.validate()?;
    let a1 = spec.site.derivative_sup(1).ok_or(InteractionError::OutsideHypothesis("unbounded site gradient"))?;
    let a2 = spec.site.derivative_sup(2).ok_or(InteractionError::OutsideHypothesis("unbounded site curvature"))?;
    let weight_eps = spec.eps.sqrt();
    let j = if spec.pair.is_trivial() { 0.0 } else { spec.pair.coupling.abs() };
    let gb = spec.pair.kind.derivative_bound();
    let plain = weighted_shell_sum(spec.dim, spec.eps);
    let weighted = weighted_shell_sum(spec.dim, spec.eps / weight_eps);
    // Each neighbour m enters the row of l through B_lm and B_ml.
    let m1 = a1 + 2.0 * j * gb * plain;
    let m2 = a2 + 2.0 * j * gb * plain + 2.0 * j * gb * weighted;
    let t0 = if m2 == 0.0 { f64::INFINITY } else { m2.powf(-0.5) };
    Ok(HypothesisConstants { m1, m2, t0, weight_eps, pair_row_sum: j * gb * weighted })
}
