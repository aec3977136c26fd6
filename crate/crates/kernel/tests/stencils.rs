use heatcorr_grid::{Budget, GridSpec};
use heatcorr_interaction::{InteractionSpec, LatticePotential, PairCoupling, SitePotential};
use heatcorr_kernel::{partial, translate_difference, weighted_norm, KernelField, NormKind, SpectralKernel, WeightSets};
use heatcorr_lattice::LatticeBox;
use proptest::prelude::*;

fn polynomial_field(c: [f64; 4]) -> KernelField {
    let spec = InteractionSpec::new(SitePotential::Zero, PairCoupling::zero(), 0.5);
    let pot = LatticePotential::on_box(&spec, &LatticeBox::chain(2).unwrap()).unwrap();
    let grid = GridSpec::new(2.0, 9).with_margin(0).with_window(1.0);
    let base = SpectralKernel::new(&pot, &grid, 1.0, &Budget::default()).unwrap().field(1.0).unwrap();
    let dim = base.dim();
    let psi: Vec<f64> = (0..dim * dim)
        .map(|k| {
            let (x, y) = (base.coords(k / dim), base.coords(k % dim));
            c[0] * x[0] * x[0] * x[1] + c[1] * x[1] * y[0] + c[2] * x[0].powi(3) + c[3] * y[1]
        })
        .collect();
    base.with_values(psi, vec![true; dim * dim])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn low_order_stencils_are_exact_on_cubics(c in prop::array::uniform4(-2.0f64..2.0), i in 2usize..7, j in 2usize..7) {
        let f = polynomial_field(c);
        let (x, y) = ([i, j], [j, i]);
        let (x0, x1, y0) = (f.grid().point(i), f.grid().point(j), f.grid().point(j));
        let d0 = partial(&f, &x, &y, &[0]).unwrap();
        let want = 2.0 * c[0] * x0 * x1 + 3.0 * c[2] * x0 * x0;
        // the central first difference has error c2 dx^2 per cubic term
        let dx = f.grid().spacing();
        prop_assert!((d0 - want - c[2] * dx * dx).abs() < 1e-9);
        let d01 = partial(&f, &x, &y, &[0, 1]).unwrap();
        prop_assert!((d01 - 2.0 * c[0] * x0).abs() < 1e-9);
        let d12 = partial(&f, &x, &y, &[1, 2]).unwrap();
        prop_assert!((d12 - c[1]).abs() < 1e-9);
        let d000 = partial(&f, &x, &y, &[0, 0, 0]).unwrap();
        prop_assert!((d000 - 6.0 * c[2]).abs() < 1e-8);
        let _ = y0;
    }

    #[test]
    fn diagonal_shift_of_translation_invariant_field_vanishes(c in -2.0f64..2.0) {
        let f = polynomial_field([0.0, 0.0, 0.0, 0.0]);
        let dim = f.dim();
        let psi: Vec<f64> = (0..dim * dim)
            .map(|k| {
                let (x, y) = (f.coords(k / dim), f.coords(k % dim));
                c * ((x[0] - y[0]).powi(2) + (x[1] - y[1]).sin())
            })
            .collect();
        let g = f.with_values(psi, vec![true; dim * dim]);
        let s = translate_difference(&g, &[1, -2]).unwrap();
        prop_assert!(s.valid_count() > 0);
        prop_assert!(s.sup_abs() < 1e-12);
    }
}

#[test]
fn weighted_norms_respect_weights() {
    let f = polynomial_field([0.0, 1.0, 0.0, 0.0]);
    // only the mixed (x_1, y_0) entry is nonzero; it appears as a pure-x
    // derivative only through x_1, which has vanishing second x-derivative
    let n2 = weighted_norm(&f, 2, 0.5, WeightSets::default(), NormKind::Entry).unwrap();
    assert!(n2 < 1e-9);
    let g = polynomial_field([1.0, 0.0, 0.0, 0.0]);
    let e = weighted_norm(&g, 2, 0.5, WeightSets::default(), NormKind::Entry).unwrap();
    // d^2/dx0 dx1 = 2 x0 at sites distance 1 apart dominates; |x0| <= 1.5 where the stencil fits
    assert!((e - 2.0 * 1.5 / 0.5).abs() < 1e-9, "{e}");
    let row = weighted_norm(&g, 2, 0.5, WeightSets::default(), NormKind::Row).unwrap();
    assert!(row >= e);
}
