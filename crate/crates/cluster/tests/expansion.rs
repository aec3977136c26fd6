use heatcorr_cluster::{
    averaged_kernel_direct, averaged_kernel_mayer, fitted_mayer_constant, group_elements, diagonal_cancellation_check,
    mayer_reconstruct, signed_family_sum, ClusterError, Execution, MayerFactors,
};
use heatcorr_grid::{Budget, GridSpec, Stencil};
use heatcorr_interaction::{InteractionSpec, LatticePotential, PairCoupling, SitePotential};
use heatcorr_kernel::{ExtractionOptions, SpectralKernel};
use heatcorr_lattice::{classify_family, enumerate_boxes, Connectivity, LatticeBox, Site};

use std::sync::OnceLock;

const T: f64 = 0.4;

fn factors(sites: usize, j: f64) -> MayerFactors {
    let lattice = LatticeBox::chain(sites).unwrap();
    let spec = InteractionSpec::new(SitePotential::PseudoLinearWell { strength: 1.0 }, PairCoupling::cosine_diff(j), 0.2);
    let pot = LatticePotential::on_box(&spec, &lattice).unwrap();
    let n = if sites == 3 { 13 } else { 21 };
    let grid = GridSpec::new(3.0, n).with_margin(1).with_stencil(Stencil::SineDvr);
    let mut kernel = SpectralKernel::new(&pot, &grid, 1.0, &Budget::default()).unwrap();
    kernel.options = ExtractionOptions { relative_floor: 1e-6, ..Default::default() };
    let field = kernel.field(T).unwrap();
    MayerFactors::new(field, &lattice, sites as i64 - 1, Execution::Auto).unwrap()
}

fn coupled_chain() -> &'static MayerFactors {
    static CHAIN: OnceLock<MayerFactors> = OnceLock::new();
    CHAIN.get_or_init(|| factors(3, 0.1))
}

fn s(i: i64) -> Site {
    Site::scalar(i)
}

#[test]
fn reconstruction_two_sites() {
    let f = factors(2, 0.1);
    let report = mayer_reconstruct(&f, &f.sample_points(2000, 7)).unwrap();
    assert_eq!(report.families, 2);
    assert!(report.points > 500, "only {} usable points", report.points);
    assert!(report.max_relative_error <= 1e-8, "{:e}", report.max_relative_error);
}

#[test]
fn reconstruction_three_sites() {
    let f = coupled_chain();
    let mut points = f.sample_points(2000, 11);
    points.extend(f.diagonal_points(37));
    let report = mayer_reconstruct(&f, &points).unwrap();
    assert_eq!(report.families, 8);
    assert!(report.points > 500, "only {} usable points", report.points);
    assert!(report.max_relative_error <= 1e-6, "{:e}", report.max_relative_error);
}

#[test]
fn factors_are_nonnegative() {
    let f = coupled_chain();
    let all: Vec<usize> = (0..f.boxes().len()).collect();
    for p in f.sample_points(500, 3) {
        for q in 0..f.boxes().len() {
            if let Some(v) = f.f_box(q, &p) {
                assert!(v >= 0.0);
            }
        }
        if let Some(k) = f.k_gamma(&all, &p) {
            assert!(k >= 0.0);
        }
        if let Some(v) = f.f_points(&p) {
            assert!(v > 0.0);
        }
    }
}

#[test]
fn decoupled_factors_vanish() {
    let f = factors(3, 0.0);
    for q in 0..f.boxes().len() {
        assert!(f.m_q(q).abs() <= 1e-8);
    }
    for row in f.summary() {
        assert!(row.sup_f <= 1e-8, "{:?}", row);
    }
    let report = mayer_reconstruct(&f, &f.sample_points(300, 5)).unwrap();
    assert!(report.max_relative_error <= 1e-6);
    for p in f.sample_points(300, 6) {
        if let (Some(k0), Some(_)) = (f.k_gamma(&[], &p), f.f_box(0, &p)) {
            let u = f.doubled_kernel(&p);
            assert!((k0 - u).abs() <= 1e-6 * u);
        }
    }
}

#[test]
fn wide_boxes_have_smaller_factors() {
    let f = coupled_chain();
    let rows = f.summary();
    let narrow = rows.iter().filter(|r| r.diam == 1).map(|r| r.sup_f).fold(0.0, f64::max);
    let wide = rows.iter().find(|r| r.diam == 2).unwrap().sup_f;
    assert!(wide < narrow);
    let a = fitted_mayer_constant(&f, 0.2, 1);
    assert!(a.is_finite() && a > 0.0);
}

#[test]
fn enlarging_a_family_stays_in_the_envelope() {
    let f = coupled_chain();
    let sup: Vec<f64> = f.summary().iter().map(|r| r.sup_f).collect();
    for p in f.sample_points(300, 13) {
        let Some(base) = f.k_gamma(&[0], &p) else { continue };
        if let Some(big) = f.k_gamma(&[0, 1, 2], &p) {
            assert!(big <= base * (1.0 + sup[1]) * (1.0 + sup[2]) * (1.0 + 1e-12));
        }
    }
}

#[test]
fn averaged_kernel_two_routes_agree() {
    let f = coupled_chain();
    for (e1, e2) in [(vec![s(0)], vec![s(2)]), (vec![s(0)], vec![s(1)]), (vec![s(0), s(1)], vec![s(2)])] {
        let group = group_elements(f.sites(), &e1, &e2).unwrap();
        let mut points = f.diagonal_points(53);
        points.extend(f.sample_points(200, 17));
        let mut checked = 0;
        for p in &points {
            let Some(via_mayer) = averaged_kernel_mayer(&f, &group, p).unwrap() else { continue };
            let direct = averaged_kernel_direct(&f, &group, p);
            let scale = group.iter().map(|g| f.doubled_kernel(&p.act(g))).fold(0.0, f64::max);
            assert!((via_mayer - direct).abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE), "{via_mayer} vs {direct}");
            checked += 1;
        }
        assert!(checked > 20);
        // swapping the roles of the supports leaves the average unchanged
        let swapped = group_elements(f.sites(), &e2, &e1).unwrap();
        for p in points.iter().take(50) {
            let a = averaged_kernel_direct(&f, &group, p);
            let b = averaged_kernel_direct(&f, &swapped, p);
            assert!((a - b).abs() <= 1e-15 * a.abs().max(1.0));
        }
    }
}

#[test]
fn averaged_kernel_vanishes_on_the_diagonal_when_decoupled() {
    let f = factors(3, 0.0);
    let group = group_elements(f.sites(), &[s(0)], &[s(2)]).unwrap();
    for p in f.diagonal_points(29) {
        let w = averaged_kernel_direct(&f, &group, &p);
        assert!(w.abs() <= 1e-10 * f.doubled_kernel(&p), "{w:e}");
    }
}

fn disjoint_pairs(n: i64) -> Vec<(Vec<Site>, Vec<Site>)> {
    let mut out = Vec::new();
    let all = 3usize.pow(n as u32);
    for code in 0..all {
        let (mut a, mut b) = (Vec::new(), Vec::new());
        let mut c = code;
        for i in 0..n {
            match c % 3 {
                1 => a.push(s(i)),
                2 => b.push(s(i)),
                _ => {}
            }
            c /= 3;
        }
        if !a.is_empty() && !b.is_empty() {
            out.push((a, b));
        }
    }
    out
}

#[test]
fn non_connecting_families_cancel_on_the_diagonal() {
    for sites in [2usize, 3] {
        let owned;
        let f = if sites == 3 {
            coupled_chain()
        } else {
            owned = factors(sites, 0.1);
            &owned
        };
        let lattice = LatticeBox::chain(sites).unwrap();
        let boxes: Vec<LatticeBox> = enumerate_boxes(&lattice, 2).into_iter().filter(|b| b.diam() >= 1).collect();
        let points = f.diagonal_points(if sites == 3 { 7 } else { 1 });
        let mut families_checked = 0;
        for (e1, e2) in disjoint_pairs(sites as i64) {
            for bits in 0..1usize << boxes.len() {
                let fam: Vec<LatticeBox> = (0..boxes.len()).filter(|q| bits >> q & 1 == 1).map(|q| boxes[q].clone()).collect();
                match classify_family(&fam, &e1, &e2) {
                    Connectivity::NonConnecting => {
                        let r = diagonal_cancellation_check(&f, &fam, &e1, &e2, &points).unwrap();
                        assert!(r.signed_sum <= 1e-10 * r.scale, "{fam:?} {e1:?} {e2:?}: {:e} vs {:e}", r.signed_sum, r.scale);
                        families_checked += 1;
                    }
                    Connectivity::Connecting => {
                        assert!(matches!(diagonal_cancellation_check(&f, &fam, &e1, &e2, &points), Err(ClusterError::Connecting)));
                    }
                }
            }
        }
        assert!(families_checked >= if sites == 3 { 12 } else { 2 }, "{families_checked}");
    }
}

#[test]
fn cancellation_fails_off_the_diagonal() {
    let f = coupled_chain();
    let e1 = [s(0)];
    let e2 = [s(2)];
    let fam = f.family(&[LatticeBox::interval(0, 1).unwrap()]).unwrap();
    let group = group_elements(f.sites(), &e1, &e2).unwrap();
    let off: Vec<_> = f.sample_points(400, 23).into_iter().filter(|p| !p.is_diagonal()).collect();
    let (signed, scale) = signed_family_sum(&f, &fam, &group, &off);
    assert!(signed > 1e-6 * scale, "{signed:e} vs {scale:e}");
}

#[test]
fn subset_budget_is_enforced() {
    let lattice = LatticeBox::chain(6).unwrap();
    let spec = InteractionSpec::new(SitePotential::Harmonic { omega: 1.0 }, PairCoupling::zero(), 0.2);
    let pot = LatticePotential::on_box(&spec, &lattice).unwrap();
    let grid = GridSpec::new(3.0, 3).with_margin(0);
    let mut kernel = SpectralKernel::new(&pot, &grid, 1.0, &Budget::default()).unwrap();
    kernel.options = ExtractionOptions { resolution_margin: 0.0, ..Default::default() };
    let field = kernel.field(1.0).unwrap();
    let f = MayerFactors::new(field, &lattice, 5, Execution::Sequential).unwrap();
    assert_eq!(f.boxes().len(), 15);
    assert!(matches!(mayer_reconstruct(&f, &[]), Err(ClusterError::SubsetBudget(15))));
}
