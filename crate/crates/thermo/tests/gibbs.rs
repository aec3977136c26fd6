use heatcorr_grid::{
    Budget, DenseSpectrum, GridSpec, LatticeHamiltonian, LocalObservable, ObservableRepr, Stencil, TraceMethod,
};
use heatcorr_interaction::{InteractionSpec, LatticePotential, PairCoupling, SitePotential};
use heatcorr_lattice::{LatticeBox, Site};
use heatcorr_thermo::{
    central_difference_energy, covariance, gibbs_mean, mean_energy, Execution, GibbsMethod, GibbsState, SiteFunction,
    ThermoError,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn chain(sites: usize, n: usize, j: f64) -> (LatticeHamiltonian, GridSpec, Vec<Site>) {
    let lattice = LatticeBox::chain(sites).unwrap();
    let spec = InteractionSpec::new(SitePotential::PseudoLinearWell { strength: 1.0 }, PairCoupling::cosine_diff(j), 0.2);
    let pot = LatticePotential::on_box(&spec, &lattice).unwrap();
    let grid = GridSpec::new(3.0, n).with_margin(0);
    (LatticeHamiltonian::build(&pot, &grid, 1.0, &Budget::default()).unwrap(), grid, lattice.sites())
}

#[test]
fn identity_has_unit_mean() {
    let (h, _, sites) = chain(2, 8, 0.2);
    let one = LocalObservable::new(vec![Site::scalar(1)], 8, ObservableRepr::Multiplication(vec![1.0; 8])).unwrap();
    assert!((gibbs_mean(&h, &sites, &one, 0.7, &Budget::default()).unwrap() - 1.0).abs() < 1e-13);
}

#[test]
fn odd_observable_has_zero_mean_in_a_symmetric_well() {
    let grid = GridSpec::new(4.0, 41).with_stencil(Stencil::SineDvr);
    let spec = InteractionSpec::new(SitePotential::Harmonic { omega: 1.0 }, PairCoupling::zero(), 0.2);
    let pot = LatticePotential::on_box(&spec, &LatticeBox::chain(1).unwrap()).unwrap();
    let h = LatticeHamiltonian::build(&pot, &grid, 1.0, &Budget::default()).unwrap();
    let x = LocalObservable::multiplication(vec![Site::scalar(0)], &grid, |x| x[0]).unwrap();
    assert!(gibbs_mean(&h, pot.sites(), &x, 0.5, &Budget::default()).unwrap().abs() < 1e-10);
}

#[test]
fn low_temperature_mean_approaches_the_ground_state() {
    let (h, grid, sites) = chain(1, 31, 0.0);
    let spectrum = DenseSpectrum::new(&h, &Budget::default()).unwrap();
    let a = LocalObservable::multiplication(vec![Site::scalar(0)], &grid, |x| x[0].cos()).unwrap();
    let ground: f64 = (0..31).map(|i| spectrum.vector(i, 0).powi(2) * grid.point(i).cos()).sum();
    let gap = spectrum.values()[1] - spectrum.values()[0];
    let t = 40.0 / gap;
    let mean = GibbsState::from_spectrum(&spectrum, &sites, t).mean(&a).unwrap();
    assert!((mean - ground).abs() < 1e-10, "{mean} vs {ground}");
}

#[test]
fn decoupled_covariance_vanishes() {
    let (h, grid, sites) = chain(3, 7, 0.0);
    let a = SiteFunction::Tanh.at(Site::scalar(0), &grid).unwrap();
    let b = SiteFunction::Tanh.at(Site::scalar(2), &grid).unwrap();
    assert!(covariance(&h, &sites, &a, &b, 0.4, &Budget::default()).unwrap().abs() <= 1e-12);
}

#[test]
fn overlapping_and_foreign_supports_fail() {
    let (h, grid, sites) = chain(2, 6, 0.1);
    let a = SiteFunction::Tanh.at(Site::scalar(0), &grid).unwrap();
    assert!(matches!(covariance(&h, &sites, &a, &a, 0.4, &Budget::default()), Err(ThermoError::Overlap)));
    let far = SiteFunction::Tanh.at(Site::scalar(5), &grid).unwrap();
    assert!(matches!(gibbs_mean(&h, &sites, &far, 0.4, &Budget::default()), Err(ThermoError::OutsideLattice)));
}

#[test]
fn coupled_diagonal_covariance_matches_brute_force() {
    let (h, _, sites) = chain(3, 6, 0.3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let fa: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let fb: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let a = LocalObservable::new(vec![Site::scalar(0)], 6, ObservableRepr::Multiplication(fa.clone())).unwrap();
    let b = LocalObservable::new(vec![Site::scalar(2)], 6, ObservableRepr::Multiplication(fb.clone())).unwrap();
    let t = 0.6;
    let spectrum = DenseSpectrum::new(&h, &Budget::default()).unwrap();
    let heat = spectrum.heat_matrix(t);
    let (mut z, mut ea, mut eb, mut eab) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..216 {
        let w = heat.scaled(i, i);
        let (ia, ib) = (i / 36, i % 6);
        z += w;
        ea += w * fa[ia];
        eb += w * fb[ib];
        eab += w * fa[ia] * fb[ib];
    }
    let brute = eab / z - ea * eb / (z * z);
    let cov = covariance(&h, &sites, &a, &b, t, &Budget::default()).unwrap();
    assert!((cov - brute).abs() <= 1e-13);
    let swapped = covariance(&h, &sites, &b, &a, t, &Budget::default()).unwrap();
    assert!((cov - swapped).abs() <= 1e-15);
}

#[test]
fn local_quadrature_state_matches_dense_for_multiplication() {
    let (h, grid, sites) = chain(3, 8, 0.2);
    let a = SiteFunction::Tanh.at(Site::scalar(0), &grid).unwrap();
    let b = SiteFunction::Cos.at(Site::scalar(2), &grid).unwrap();
    let b_exec = Execution::Auto;
    let dense = GibbsState::new(&h, &sites, 0.3, GibbsMethod::Dense, &Budget::default(), b_exec).unwrap();
    let local = GibbsState::new(&h, &sites, 0.3, GibbsMethod::LocalQuadrature { steps: 14 }, &Budget::default(), b_exec).unwrap();
    assert!((dense.covariance(&a, &b).unwrap() - local.covariance(&a, &b).unwrap()).abs() < 1e-12);
    assert!((dense.mean(&b).unwrap() - local.mean(&b).unwrap()).abs() < 1e-12);
    let m = LocalObservable::new(vec![Site::scalar(1)], 8, ObservableRepr::Dense(vec![0.0; 64])).unwrap();
    assert!(matches!(local.mean(&m), Err(ThermoError::NotDiagonal)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn covariance_is_bounded_by_operator_norms(seed in any::<u64>(), t in 0.1f64..2.0) {
        let (h, _, sites) = chain(2, 6, 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut dense = vec![0.0; 36];
        for i in 0..6 {
            for j in i..6 {
                let v = rng.gen_range(-1.0..1.0);
                dense[i * 6 + j] = v;
                dense[j * 6 + i] = v;
            }
        }
        let a = LocalObservable::new(vec![Site::scalar(0)], 6, ObservableRepr::Dense(dense)).unwrap();
        let b = LocalObservable::new(vec![Site::scalar(1)], 6, ObservableRepr::Multiplication((0..6).map(|_| rng.gen_range(-1.0..1.0)).collect())).unwrap();
        let c = covariance(&h, &sites, &a, &b, t, &Budget::default()).unwrap();
        prop_assert!(c.abs() <= 2.0 * a.op_norm() * b.op_norm() + 1e-12);
    }
}

#[test]
fn single_level_energy() {
    let spectrum = DenseSpectrum::from_row_major(&[2.5], 1).unwrap();
    assert!((central_difference_energy(&spectrum, 1.0, 1e-3).unwrap() + 2.5).abs() < 1e-12);
    assert!((spectrum.mean_energy(1.0) + 2.5).abs() < 1e-15);
}

#[test]
fn mean_energy_matches_central_difference() {
    let (h, _, _) = chain(2, 12, 0.2);
    let b = Budget::default();
    let spectrum = DenseSpectrum::new(&h, &b).unwrap();
    for t in [0.2, 0.5, 1.0] {
        let x = mean_energy(&h, t, TraceMethod::Dense, &b, Execution::Auto).unwrap().mean_energy;
        let fd = central_difference_energy(&spectrum, t, 1e-4).unwrap();
        assert!((x - fd).abs() <= 1e-6, "t = {t}: {x} vs {fd}");
    }
}

#[test]
fn stochastic_energy_is_close_to_dense_at_dim_4096() {
    let (h, _, _) = chain(2, 64, 0.2);
    let b = Budget::default();
    let dense = mean_energy(&h, 0.5, TraceMethod::Dense, &b, Execution::Auto).unwrap().mean_energy;
    let est = mean_energy(&h, 0.5, TraceMethod::Hutchinson { probes: 32, steps: 40, seed: 11 }, &b, Execution::Auto).unwrap();
    assert!(((est.mean_energy - dense) / dense).abs() <= 0.05, "{} vs {dense}", est.mean_energy);
    assert!(est.rel_std_error.unwrap() > 0.0);
}
