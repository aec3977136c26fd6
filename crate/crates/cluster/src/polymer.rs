use crate::ClusterError;
use heatcorr_lattice::{enumerate_polymers, linf_dist, LatticeBox, Polymer, Site};
use serde::Serialize;

/// `sup_{R > 0} (1 + R)^(6d) s^R`; infinite for `s >= 1`.
pub fn phi_sup(s: f64, d: usize) -> f64 {
    if s >= 1.0 {
        return f64::INFINITY;
    }
    if s <= 0.0 {
        return 1.0;
    }
    let k = 6.0 * d as f64;
    let r = -k / s.ln() - 1.0;
    if r <= 0.0 {
        1.0
    } else {
        (k * (1.0 + r).ln() + r * s.ln()).exp()
    }
}

/// `N(Pi) = prod_j T eps^diam(Q_j) <Q_j>^(2d)` with `<Q> = 1 + diam Q`.
pub fn polymer_weight(polymer: &Polymer, eps: f64, temperature: f64, d: usize) -> f64 {
    polymer
        .boxes
        .iter()
        .map(|q| temperature * eps.powi(q.diam() as i32) * ((1 + q.diam()) as f64).powi(2 * d as i32))
        .product()
}

/// Largest `T` with `gamma (1 + T Phi(eps / gamma)) <= delta`, `gamma = sqrt(eps delta)`.
pub fn admissible_temperature(eps: f64, delta: f64, d: usize) -> f64 {
    let gamma = (eps * delta).sqrt();
    (delta / gamma - 1.0) / phi_sup(eps / gamma, d)
}

#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PolymerBoundParams {
    pub eps: f64,
    pub delta: f64,
    pub temperature: f64,
    pub max_boxes: usize,
    pub max_diam: i64,
    /// Report rows outside the admissible range instead of failing.
    pub report_only: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PolymerBoundRow {
    pub distance: i64,
    pub polymers: usize,
    pub lhs_sum: f64,
    pub rhs_bound: f64,
    /// `rhs_bound - lhs_sum`.
    pub margin: f64,
    pub admissible: bool,
}

/// Sum of `N(Pi)` over enumerated polymers from `e1` to `e2`, against
/// `T min(|E1|, |E2|) Phi(sqrt(eps/delta)) delta^dist / (1 - delta)`.
pub fn polymer_bound_check(
    e1: &[Site],
    e2: &[Site],
    lattice: &LatticeBox,
    p: &PolymerBoundParams,
) -> Result<PolymerBoundRow, ClusterError> {
    if !(0.0 < p.eps && p.eps < p.delta && p.delta < 1.0) {
        return Err(ClusterError::InvalidArgument("need 0 < eps < delta < 1".into()));
    }
    let d = lattice.dim();
    let admissible = p.temperature < admissible_temperature(p.eps, p.delta, d);
    if !admissible && !p.report_only {
        return Err(ClusterError::Inadmissible);
    }
    let polymers = enumerate_polymers(e1, e2, lattice, p.max_boxes, p.max_diam, true)?;
    let lhs_sum: f64 = polymers.iter().map(|pi| polymer_weight(pi, p.eps, p.temperature, d)).sum();
    let distance = linf_dist(e1, e2)?;
    let rhs_bound = p.temperature * e1.len().min(e2.len()) as f64 * phi_sup((p.eps / p.delta).sqrt(), d)
        * p.delta.powi(distance as i32)
        / (1.0 - p.delta);
    Ok(PolymerBoundRow { distance, polymers: polymers.len(), lhs_sum, rhs_bound, margin: rhs_bound - lhs_sum, admissible })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(boxes: &[(i64, i64)]) -> Polymer {
        Polymer { boxes: boxes.iter().map(|&(a, b)| LatticeBox::interval(a, b).unwrap()).collect() }
    }

    #[test]
    fn weights_of_short_polymers() {
        let (t, e) = (0.05, 0.2);
        assert!((polymer_weight(&poly(&[(0, 1)]), e, t, 1) - 4.0 * t * e).abs() < 1e-15);
        assert!((polymer_weight(&poly(&[(0, 1), (1, 2)]), e, t, 1) - 16.0 * t * t * e * e).abs() < 1e-15);
    }

    #[test]
    fn phi_is_the_supremum() {
        let s = 0.6;
        let phi = phi_sup(s, 1);
        let grid_max = (1..100_000).map(|k| k as f64 * 1e-3).map(|r| (1.0 + r).powi(6) * s.powf(r)).fold(0.0, f64::max);
        assert!(phi >= grid_max && (phi - grid_max) / phi < 1e-6);
        assert_eq!(phi_sup(0.001, 1), 1.0);
        assert!(phi_sup(1.0, 1).is_infinite());
    }

    #[test]
    fn admissibility_threshold() {
        let t1 = admissible_temperature(0.2, 0.5, 1);
        assert!(t1 > 0.0 && t1 < 1e-4);
        let gamma = (0.1f64).sqrt();
        assert!((gamma * (1.0 + t1 * phi_sup(0.2 / gamma, 1)) - 0.5).abs() < 1e-12);
    }
}
