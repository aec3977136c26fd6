use heatcorr_grid::{Budget, GridSpec, Stencil};
use heatcorr_interaction::{InteractionSpec, PairCoupling, SitePotential};
use heatcorr_thermo::{decay_sweep, fit_decay, DecayConfig, DecayRow, Execution, FitStatus, GibbsMethod, SiteFunction};

fn spec(eps: f64, j: f64) -> InteractionSpec {
    InteractionSpec::new(SitePotential::PseudoLinearWell { strength: 1.0 }, PairCoupling::cosine_diff(j), eps)
}

fn config() -> DecayConfig {
    DecayConfig {
        chain_length: 5,
        t: 0.2,
        hbar: 1.0,
        grid: GridSpec::new(4.0, 10).with_margin(0).with_stencil(Stencil::ThreePoint),
        method: GibbsMethod::LocalQuadrature { steps: 6 },
        first: SiteFunction::Tanh,
        second: SiteFunction::Tanh,
    }
}

#[test]
fn coupled_chain_decays_exponentially() {
    let fit = decay_sweep(&spec(0.2, 0.1), &config(), &Budget::default(), Execution::Auto).unwrap();
    assert_eq!(fit.status, FitStatus::Fitted);
    let delta = fit.fitted_delta.unwrap();
    assert!(delta < 0.5, "delta {delta}");
    assert!(fit.r2.unwrap() >= 0.9);
    assert!(fit.monotone);
    assert_eq!(fit.envelope.len(), 4);
}

#[test]
fn decoupled_chain_has_zero_covariances() {
    let fit = decay_sweep(&spec(0.2, 0.0), &config(), &Budget::default(), Execution::Auto).unwrap();
    assert_eq!(fit.status, FitStatus::Decoupled);
    assert!(fit.rows.iter().all(|r| r.covariance.abs() <= 1e-12 && r.zero_class));
    assert!(fit.fitted_delta.is_none());
}

#[test]
fn weaker_decay_parameter_gives_faster_decay() {
    let cfg = DecayConfig { chain_length: 4, ..config() };
    let deltas: Vec<f64> = [0.1, 0.2, 0.4]
        .iter()
        .map(|&e| decay_sweep(&spec(e, 0.1), &cfg, &Budget::default(), Execution::Auto).unwrap().fitted_delta.unwrap())
        .collect();
    assert!(deltas[0] < deltas[1] && deltas[1] < deltas[2], "{deltas:?}");
}

#[test]
fn fit_recovers_a_geometric_sequence() {
    let rows: Vec<DecayRow> = (1..5)
        .map(|r| DecayRow { distance: r, covariance: 0.3 * 0.25f64.powi(r as i32), zero_class: false })
        .collect();
    let fit = fit_decay(rows, 0.5, false);
    assert!((fit.fitted_delta.unwrap() - 0.25).abs() < 1e-12);
    assert!((fit.r2.unwrap() - 1.0).abs() < 1e-12);
    for e in fit.envelope {
        assert!((e - 0.6).abs() < 1e-10);
    }
}

#[test]
fn floor_rows_are_left_out() {
    let rows = vec![
        DecayRow { distance: 1, covariance: 1e-3, zero_class: false },
        DecayRow { distance: 2, covariance: 1e-15, zero_class: true },
    ];
    assert_eq!(fit_decay(rows, 0.2, false).status, FitStatus::TooFewPoints);
}
