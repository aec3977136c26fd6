use heatcorr_cluster::{admissible_temperature, polymer_bound_check, ClusterError, PolymerBoundParams};
use heatcorr_lattice::{LatticeBox, Site};

fn params(report_only: bool) -> PolymerBoundParams {
    PolymerBoundParams { eps: 0.2, delta: 0.5, temperature: 0.05, max_boxes: 4, max_diam: 4, report_only }
}

#[test]
fn enumerated_weights_stay_below_the_bound() {
    let lattice = LatticeBox::chain(5).unwrap();
    let mut last = f64::INFINITY;
    for r in 1..=4 {
        let row = polymer_bound_check(&[Site::scalar(0)], &[Site::scalar(r)], &lattice, &params(true)).unwrap();
        assert_eq!(row.distance, r);
        assert!(row.polymers > 0);
        assert!(row.lhs_sum <= row.rhs_bound, "r = {r}: {} > {}", row.lhs_sum, row.rhs_bound);
        assert!(row.lhs_sum < last);
        assert!(!row.admissible);
        last = row.lhs_sum;
    }
}

#[test]
fn strict_mode_rejects_inadmissible_temperatures() {
    let lattice = LatticeBox::chain(4).unwrap();
    let e1 = [Site::scalar(0)];
    let e2 = [Site::scalar(3)];
    assert!(matches!(polymer_bound_check(&e1, &e2, &lattice, &params(false)), Err(ClusterError::Inadmissible)));
    let t1 = admissible_temperature(0.2, 0.5, 1);
    let ok = PolymerBoundParams { temperature: 0.5 * t1, ..params(false) };
    let row = polymer_bound_check(&e1, &e2, &lattice, &ok).unwrap();
    assert!(row.admissible && row.margin > 0.0);
}

#[test]
fn parameter_order_is_checked() {
    let lattice = LatticeBox::chain(3).unwrap();
    let bad = PolymerBoundParams { eps: 0.6, ..params(true) };
    assert!(polymer_bound_check(&[Site::scalar(0)], &[Site::scalar(2)], &lattice, &bad).is_err());
}
