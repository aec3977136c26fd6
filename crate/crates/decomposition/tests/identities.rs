use heatcorr_decomposition::{
    decompose, diagonal_support_defect, t_q_doubled, t_q_single, telescoping_defect, telescoping_defect_doubled,
    DecompositionError,
};
use heatcorr_grid::{Budget, GridSpec, Stencil};
use heatcorr_interaction::{InteractionSpec, LatticePotential, PairCoupling, SitePotential};
use heatcorr_kernel::{Execution, KernelField, SpectralKernel};
use heatcorr_lattice::LatticeBox;
use proptest::prelude::*;

fn pair() -> LatticeBox {
    LatticeBox::chain(2).unwrap()
}

#[test]
fn product_on_two_sites() {
    let f = |x: &[f64]| x[0] * x[1];
    let x = [1.3, -0.7];
    let p0 = LatticeBox::interval(0, 0).unwrap();
    let p1 = LatticeBox::interval(1, 1).unwrap();
    assert_eq!(t_q_single(f, &p0, &pair(), &x).unwrap(), 0.0);
    assert_eq!(t_q_single(f, &p1, &pair(), &x).unwrap(), 0.0);
    assert!((t_q_single(f, &pair(), &pair(), &x).unwrap() - x[0] * x[1]).abs() < 1e-15);
}

#[test]
fn function_of_one_site_has_no_wide_terms() {
    let lattice = LatticeBox::chain(3).unwrap();
    let f = |x: &[f64]| (x[0] + 0.3).sin();
    let x = [0.4, 1.1, -2.0];
    for q in heatcorr_lattice::enumerate_boxes(&lattice, 2) {
        if !q.contains(&heatcorr_lattice::Site::scalar(0)) && q.diam() >= 1 {
            assert_eq!(t_q_single(f, &q, &lattice, &x).unwrap(), 0.0);
        }
    }
}

fn cubic(coeffs: &[f64], x: &[f64]) -> f64 {
    let n = x.len();
    let mut k = 0;
    let mut total = 0.0;
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                total += coeffs[k % coeffs.len()] * x[a] * x[b] * x[c];
                k += 1;
            }
            total += coeffs[k % coeffs.len()] * x[a] * x[b];
            k += 1;
        }
        total += coeffs[k % coeffs.len()] * x[a];
        k += 1;
    }
    total + 0.5
}

fn lattices() -> Vec<LatticeBox> {
    vec![
        LatticeBox::chain(1).unwrap(),
        pair(),
        LatticeBox::chain(3).unwrap(),
        LatticeBox::new(vec![0, 0], vec![1, 1]).unwrap(),
        LatticeBox::new(vec![0, 0], vec![2, 0]).unwrap(),
    ]
}

proptest! {
    #[test]
    fn single_telescoping_on_random_cubics(
        coeffs in prop::collection::vec(-2.0f64..2.0, 20),
        x in prop::collection::vec(-3.0f64..3.0, 4),
        which in 0usize..5,
    ) {
        let lattice = &lattices()[which];
        let x = &x[..lattice.len()];
        let d = telescoping_defect(|z| cubic(&coeffs, z), lattice, x).unwrap();
        prop_assert!(d.abs() < 1e-12, "defect {d}");
    }
}

fn base_field(sites: usize, n: usize) -> KernelField {
    let spec = InteractionSpec::new(SitePotential::PseudoLinearWell { strength: 1.0 }, PairCoupling::cosine_diff(0.1), 0.2);
    let pot = LatticePotential::on_box(&spec, &LatticeBox::chain(sites).unwrap()).unwrap();
    let grid = GridSpec::new(2.0, n).with_margin(1).with_window(0.8).with_stencil(Stencil::SineDvr);
    SpectralKernel::new(&pot, &grid, 1.0, &Budget::default()).unwrap().field(1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn doubled_telescoping_on_random_smooth_fields(
        a in prop::collection::vec(-1.0f64..1.0, 6),
        sites in 1usize..=3,
    ) {
        let base = base_field(sites, 7);
        let dim = base.dim();
        let psi: Vec<f64> = (0..dim * dim)
            .map(|k| {
                let (x, y) = (base.coords(k / dim), base.coords(k % dim));
                let s: f64 = x.iter().zip(&y).enumerate().map(|(i, (x, y))| a[i] * (x * y).sin() + a[i + 3] * x * x).sum();
                s + a[0] * x.iter().product::<f64>() * y[0].cos()
            })
            .collect();
        let field = base.with_values(psi, vec![true; dim * dim]);
        let lattice = LatticeBox::chain(sites).unwrap();
        let (d, n) = telescoping_defect_doubled(&field, &lattice, Execution::Auto).unwrap();
        prop_assert!(n > 0);
        prop_assert!(d < 1e-10, "defect {d}");
    }
}

#[test]
fn doubled_telescoping_on_extracted_phase() {
    for sites in 1..=3 {
        let field = base_field(sites, 9);
        let lattice = LatticeBox::chain(sites).unwrap();
        let (d, n) = telescoping_defect_doubled(&field, &lattice, Execution::Auto).unwrap();
        assert!(n > 0);
        assert!(d < 1e-10, "|L| = {sites}: defect {d}");
    }
}

#[test]
fn terms_are_supported_on_their_box_along_the_diagonal() {
    let field = base_field(3, 7);
    let lattice = LatticeBox::chain(3).unwrap();
    for term in decompose(&field, &lattice, 2, Execution::Auto).unwrap() {
        assert!(diagonal_support_defect(&field, &lattice, &term) <= 1e-10);
    }
}

#[test]
fn even_grid_is_rejected() {
    let spec = InteractionSpec::new(SitePotential::Zero, PairCoupling::zero(), 0.2);
    let pot = LatticePotential::on_box(&spec, &pair()).unwrap();
    let grid = GridSpec::new(2.0, 8).with_margin(1);
    let field = SpectralKernel::new(&pot, &grid, 1.0, &Budget::default()).unwrap().field(1.0).unwrap();
    let err = t_q_doubled(&field, &pair(), &pair(), Execution::Sequential).unwrap_err();
    assert!(matches!(err, DecompositionError::NoOrigin));
    assert_eq!(err.to_string(), "grid must contain origin");
}

#[test]
fn sequential_and_parallel_terms_agree() {
    let field = base_field(2, 9);
    let a = t_q_doubled(&field, &pair(), &pair(), Execution::Sequential).unwrap();
    let b = t_q_doubled(&field, &pair(), &pair(), Execution::Parallel).unwrap();
    assert_eq!(a.mask, b.mask);
    assert!(a.values.iter().zip(&b.values).all(|(x, y)| x == y || (x.is_nan() && y.is_nan())));
}
