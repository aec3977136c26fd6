use heatcorr_interaction::*;
use heatcorr_lattice::{linf, LatticeBox, Site};
use proptest::prelude::*;

fn spec(j: f64, eps: f64, kind: PairKind, a: f64) -> InteractionSpec {
    InteractionSpec::new(SitePotential::PseudoLinearWell { strength: a }, PairCoupling { kind, coupling: j }, eps)
}

fn arb_kind() -> impl Strategy<Value = PairKind> {
    prop_oneof![Just(PairKind::CosineDiff), Just(PairKind::BoundedProduct)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gradient_never_exceeds_m1(j in 0.0f64..0.5, eps in 0.05f64..0.9, a in 0.1f64..2.0, kind in arb_kind(),
                                 x in prop::collection::vec(-6.0f64..6.0, 5)) {
        let s = spec(j, eps, kind, a);
        let c = hypothesis_constants(&s).unwrap();
        let v = LatticePotential::on_box(&s, &LatticeBox::chain(5).unwrap()).unwrap();
        for g in v.gradient(&x) {
            prop_assert!(g.abs() <= c.m1 + 1e-12);
        }
    }

    #[test]
    fn weighted_hessian_rows_never_exceed_m2(j in 0.0f64..0.5, eps in 0.05f64..0.9, kind in arb_kind(),
                                             x in prop::collection::vec(-6.0f64..6.0, 9)) {
        let s = spec(j, eps, kind, 1.0).with_dim(2);
        let c = hypothesis_constants(&s).unwrap();
        let lattice = LatticeBox::new(vec![0, 0], vec![2, 2]).unwrap();
        let sites = lattice.sites();
        let v = LatticePotential::on_box(&s, &lattice).unwrap();
        for l in 0..sites.len() {
            let row: f64 = (0..sites.len())
                .map(|m| v.partial(&x, &[l, m]).abs() / c.weight_eps.powi(linf(&sites[l], &sites[m]) as i32))
                .sum();
            prop_assert!(row <= c.m2 + 1e-12);
        }
    }

    #[test]
    fn pair_derivative_sums_bounded(j in 0.0f64..0.5, eps in 0.05f64..0.9, kind in arb_kind(),
                                    x in -4.0f64..4.0, y in -4.0f64..4.0, da in 0usize..3, db in 0usize..3) {
        let s = spec(j, eps, kind, 1.0);
        let c = hypothesis_constants(&s).unwrap();
        let origin = Site::scalar(0);
        let mut total = 0.0;
        for m in 1..60i64 {
            for sign in [-1, 1] {
                let r = linf(&origin, &Site::scalar(sign * m));
                total += (s.pair_weight(r) * kind.derivative(da, db, x, y)).abs() / c.weight_eps.powi(r as i32);
            }
        }
        prop_assert!(total <= c.pair_derivative_sum() + 1e-12);
    }

    #[test]
    fn potential_is_permutation_consistent(j in -0.5f64..0.5, x in prop::collection::vec(-3.0f64..3.0, 3)) {
        // Reversing the chain maps the potential to itself.
        let s = spec(j, 0.3, PairKind::CosineDiff, 1.0);
        let l = LatticeBox::chain(3).unwrap();
        let rev: Vec<f64> = x.iter().rev().cloned().collect();
        let a = potential_value(&s, &l, &x).unwrap();
        let b = potential_value(&s, &l, &rev).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn spec_roundtrips_through_json() {
    let s = spec(0.1, 0.2, PairKind::CosineDiff, 1.0);
    let text = serde_json::to_string(&s).unwrap();
    let back: InteractionSpec = serde_json::from_str(&text).unwrap();
    assert_eq!(s, back);
    let bad = r#"{"site":{"kind":"zero"},"pair":{"kind":"zero"},"eps":0.2,"bogus":1}"#;
    assert!(serde_json::from_str::<InteractionSpec>(bad).is_err());
}
