//! Experiment runners. Each writes its tables as soon as they are complete,
//! so a failure part-way leaves the finished ones on disk.

use crate::config::{Experiment, ExperimentConfig};
use crate::output::{coords, flag, num, opt, OutputWriter, Table};
use heatcorr_cluster::{
    doubled_covariance, diagonal_cancellation_check, mayer_reconstruct, non_connecting_families, polymer_bound_check, MayerFactors,
    PolymerBoundParams,
};
use heatcorr_decomposition::{decay_profile, decompose, telescoping_defect_doubled};
use heatcorr_exec::Execution;
use heatcorr_grid::{DenseSpectrum, LatticeHamiltonian};
use heatcorr_interaction::{hypothesis_constants, LatticePotential};
use heatcorr_kernel::{gradient_sup, KernelField, SpectralKernel};
use heatcorr_lattice::{LatticeBox, Site};
use heatcorr_thermo::{
    decay_sweep, fit_decay, theta_interpolation, thermo_sweep, DecayConfig, DecayRow, FitStatus, GibbsMethod, GibbsState,
    ThermoConfig, ThetaConfig, COVARIANCE_FLOOR,
};
use serde_json::json;

/// Tolerances recorded as contract violations when exceeded.
pub const TELESCOPING_TOLERANCE: f64 = 1e-10;
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-6;
pub const CANCELLATION_TOLERANCE: f64 = 1e-10;
pub const DOUBLING_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Default)]
pub struct RunReport {
    pub violations: Vec<String>,
    pub summary: serde_json::Value,
}

/// A mid-run failure; tables written before it stay on disk.
#[derive(Debug)]
pub struct RunFailure(pub String);

impl<E: std::fmt::Display> From<E> for RunFailure {
    fn from(e: E) -> Self {
        RunFailure(e.to_string())
    }
}

type RunResult = Result<RunReport, RunFailure>;

pub fn run_experiment(cfg: &ExperimentConfig, exp: Experiment, seed: u64, out: &mut OutputWriter, exec: Execution) -> RunResult {
    match exp {
        Experiment::Kernel => kernel(cfg, out),
        Experiment::Decompose => decompose_run(cfg, out, exec),
        Experiment::Mayer => mayer(cfg, seed, out, exec),
        Experiment::Correlate => correlate(cfg, out, exec),
        Experiment::Thermo => thermo(cfg, out, exec),
        Experiment::Verify => Err(RunFailure("verify runs through the suite runner".into())),
    }
}

fn spectral_kernel(cfg: &ExperimentConfig) -> Result<(SpectralKernel, LatticeBox), RunFailure> {
    let lattice = cfg.lattice_box();
    let pot = LatticePotential::on_box(&cfg.interaction, &lattice)?;
    let mut k = SpectralKernel::new(&pot, &cfg.grid, cfg.schedule.hbar, &cfg.budget.to_budget())?;
    k.options = cfg.extraction;
    Ok((k, lattice))
}

fn config_label(c: &[usize], field: &KernelField) -> String {
    c.iter().map(|&i| num(field.grid().point(i))).collect::<Vec<_>>().join(";")
}

fn kernel(cfg: &ExperimentConfig, out: &mut OutputWriter) -> RunResult {
    let (sk, _) = spectral_kernel(cfg)?;
    let constants = hypothesis_constants(&cfg.interaction).ok();
    let hbar = cfg.schedule.hbar;
    let mut gradient = Table::new("kernel_gradient.csv");
    let mut slice = Table::new("kernel_slice.csv");
    let mut violations = Vec::new();
    for &t in &cfg.schedule.t {
        let field = sk.field(t)?;
        let g = gradient_sup(&field);
        let (m1, scale) = constants.as_ref().map(|c| (c.m1, c.time_scale(hbar))).unwrap_or((f64::NAN, f64::NAN));
        let bound = 1.1 * t * m1;
        let checked = t <= 0.5 * scale;
        let within = g <= bound;
        if checked && !within {
            violations.push(format!("gradient {g:e} exceeds 1.1 t M1 = {bound:e} at t = {t}"));
        }
        gradient.push(vec![
            num(t),
            field.valid_count().to_string(),
            num(field.sup_abs()),
            num(g),
            num(m1),
            num(scale),
            num(bound),
            flag(checked),
            flag(within),
        ]);
        let centre = vec![field.grid().points / 2; field.n_sites()];
        let yi = field.flat(&centre);
        for xi in 0..field.dim() {
            let k = field.index(xi, yi);
            if field.mask()[k] {
                slice.push(vec![num(t), config_label(&field.multi(xi), &field), num(field.u()[k]), num(field.psi()[k])]);
            }
        }
    }
    out.write_table(&gradient)?;
    out.write_table(&slice)?;
    Ok(RunReport { violations, summary: json!({ "times": cfg.schedule.t.len(), "slicePoints": slice.len() }) })
}

fn decompose_run(cfg: &ExperimentConfig, out: &mut OutputWriter, exec: Execution) -> RunResult {
    let (sk, lattice) = spectral_kernel(cfg)?;
    let mut terms_t = Table::new("decompose_terms.csv");
    let mut profile_t = Table::new("decompose_profile.csv");
    let mut tele_t = Table::new("decompose_telescoping.csv");
    let mut violations = Vec::new();
    let t = cfg.schedule.t[0];
    let field = sk.field(t)?;
    let terms = decompose(&field, &lattice, lattice.diam(), exec)?;
    for term in &terms {
        terms_t.push(vec![coords(term.region.lo()), coords(term.region.hi()), term.diam.to_string(), num(term.sup_norm)]);
    }
    out.write_table(&terms_t)?;
    let profile = decay_profile(&terms, cfg.interaction.eps, t, lattice.dim());
    for r in &profile.rows {
        profile_t.push(vec![r.diam.to_string(), num(r.sup_norm), num(r.normalized), r.boxes_counted.to_string()]);
    }
    out.write_table(&profile_t)?;
    for &t in &cfg.schedule.t {
        let field = sk.field(t)?;
        let (defect, points) = telescoping_defect_doubled(&field, &lattice, exec)?;
        if points == 0 || defect > TELESCOPING_TOLERANCE {
            violations.push(format!("telescoping defect {defect:e} over {points} points at t = {t}"));
        }
        tele_t.push(vec![num(t), num(defect), points.to_string()]);
    }
    out.write_table(&tele_t)?;
    Ok(RunReport { violations, summary: json!({ "terms": terms.len(), "decreasing": !profile.violation }) })
}

fn sites_label(s: &[Site]) -> String {
    s.iter().map(|x| coords(&x.0)).collect::<Vec<_>>().join(" ")
}

fn mayer(cfg: &ExperimentConfig, seed: u64, out: &mut OutputWriter, exec: Execution) -> RunResult {
    let (sk, lattice) = spectral_kernel(cfg)?;
    let t = cfg.schedule.t[0];
    let max_diam = cfg.mayer.max_diam.unwrap_or(lattice.diam());
    let factors = MayerFactors::new(sk.field(t)?, &lattice, max_diam, exec)?;
    let mut violations = Vec::new();

    let mut fac_t = Table::new("mayer_factors.csv");
    for s in factors.summary() {
        fac_t.push(vec![coords(s.region.lo()), coords(s.region.hi()), s.diam.to_string(), num(s.m_q), num(s.sup_f)]);
    }
    out.write_table(&fac_t)?;

    let mut points = factors.sample_points(cfg.mayer.samples, seed);
    points.extend(factors.diagonal_points(cfg.mayer.diagonal_stride));
    let rec = mayer_reconstruct(&factors, &points)?;
    if rec.max_relative_error > RECONSTRUCTION_TOLERANCE {
        violations.push(format!("reconstruction error {:e} exceeds {RECONSTRUCTION_TOLERANCE:e}", rec.max_relative_error));
    }
    let mut rec_t = Table::new("mayer_reconstruction.csv");
    rec_t.push(vec![rec.families.to_string(), rec.points.to_string(), num(rec.max_relative_error)]);
    out.write_table(&rec_t)?;

    let sites = lattice.sites();
    let pairs: Vec<(Vec<Site>, Vec<Site>)> = match &cfg.supports {
        Some(s) => vec![s.sites()],
        None => {
            let mut v = Vec::new();
            for a in 0..sites.len() {
                for b in a + 1..sites.len() {
                    v.push((vec![sites[a].clone()], vec![sites[b].clone()]));
                }
            }
            v
        }
    };
    let diagonal = factors.diagonal_points(cfg.mayer.diagonal_stride);
    let mut can_t = Table::new("mayer_cancellation.csv");
    let mut worst = 0.0f64;
    for (e1, e2) in &pairs {
        for fam in non_connecting_families(&factors, e1, e2)? {
            let r = diagonal_cancellation_check(&factors, &fam, e1, e2, &diagonal)?;
            let rel = if r.scale > 0.0 { r.signed_sum / r.scale } else { 0.0 };
            worst = worst.max(rel);
            let fam_label = fam.iter().map(|q| format!("{}:{}", coords(q.lo()), coords(q.hi()))).collect::<Vec<_>>().join(" ");
            can_t.push(vec![sites_label(e1), sites_label(e2), fam_label, num(r.signed_sum), num(r.scale), num(rel)]);
        }
    }
    out.write_table(&can_t)?;
    if worst > CANCELLATION_TOLERANCE {
        violations.push(format!("diagonal cancellation {worst:e} exceeds {CANCELLATION_TOLERANCE:e}"));
    }

    let mut polymer_rows = 0;
    if let Some(p) = &cfg.polymer {
        let params = PolymerBoundParams {
            eps: cfg.interaction.eps,
            delta: p.delta,
            temperature: p.temperature,
            max_boxes: p.max_boxes,
            max_diam: p.max_diam,
            report_only: p.report_only,
        };
        let e1 = cfg.supports.as_ref().map(|s| s.sites().0).unwrap_or_else(|| vec![sites[0].clone()]);
        let mut poly_t = Table::new("mayer_polymer.csv");
        let mut failure = None;
        for s in sites.iter().filter(|s| !e1.contains(s)) {
            match polymer_bound_check(&e1, std::slice::from_ref(s), &lattice, &params) {
                Ok(row) => {
                    if row.lhs_sum > row.rhs_bound {
                        violations.push(format!("polymer sum {:e} exceeds bound {:e} at {:?}", row.lhs_sum, row.rhs_bound, s.0));
                    }
                    poly_t.push(vec![
                        row.distance.to_string(),
                        row.polymers.to_string(),
                        num(row.lhs_sum),
                        num(row.rhs_bound),
                        num(row.margin),
                        flag(row.admissible),
                    ]);
                }
                Err(e) => {
                    failure = Some(e);
                    break;
                }
            }
        }
        polymer_rows = poly_t.len();
        out.write_table(&poly_t)?;
        if let Some(e) = failure {
            violations.push(format!("polymer bound: {e}"));
        }
    }
    Ok(RunReport {
        violations,
        summary: json!({
            "families": rec.families,
            "reconstructionPoints": rec.points,
            "maxRelativeError": rec.max_relative_error,
            "cancellationRows": can_t.len(),
            "worstCancellation": worst,
            "polymerRows": polymer_rows,
        }),
    })
}

fn correlate(cfg: &ExperimentConfig, out: &mut OutputWriter, exec: Execution) -> RunResult {
    let lattice = cfg.lattice_box();
    let chain = lattice.len();
    let budget = cfg.budget.to_budget();
    let decoupled = cfg.interaction.pair.is_trivial();
    let mut cov_t = Table::new("correlate_covariance.csv");
    let mut fit_t = Table::new("correlate_fit.csv");
    let mut violations = Vec::new();
    let mut fits = Vec::new();
    let dense = match cfg.method {
        GibbsMethod::Dense => {
            let chain_box = LatticeBox::chain(chain)?;
            let pot = LatticePotential::on_box(&cfg.interaction, &chain_box)?;
            let h = LatticeHamiltonian::build(&pot, &cfg.grid, cfg.schedule.hbar, &budget)?;
            Some((DenseSpectrum::new(&h, &budget)?, chain_box.sites()))
        }
        GibbsMethod::LocalQuadrature { .. } => None,
    };
    let a = cfg.observables.first.at(Site::scalar(0), &cfg.grid)?;
    for &t in &cfg.schedule.t {
        let fit = match &dense {
            Some((spectrum, sites)) => {
                let state = GibbsState::from_spectrum(spectrum, sites, t);
                let mut rows = Vec::new();
                for r in 1..chain as i64 {
                    let b = cfg.observables.second.at(Site::scalar(r), &cfg.grid)?;
                    let c = state.covariance(&a, &b)?;
                    let d = doubled_covariance(spectrum, sites, &a, &b, t)?;
                    if (c - d).abs() > DOUBLING_TOLERANCE {
                        violations.push(format!("doubled covariance differs by {:e} at r = {r}, t = {t}", (c - d).abs()));
                    }
                    let zero = c.abs() < COVARIANCE_FLOOR;
                    cov_t.push(vec![num(t), r.to_string(), num(c), num(d), flag(zero)]);
                    rows.push(DecayRow { distance: r, covariance: c, zero_class: zero });
                }
                fit_decay(rows, t, decoupled)
            }
            None => {
                let dc = DecayConfig {
                    chain_length: chain,
                    t,
                    hbar: cfg.schedule.hbar,
                    grid: cfg.grid,
                    method: cfg.method,
                    first: cfg.observables.first,
                    second: cfg.observables.second,
                };
                let fit = decay_sweep(&cfg.interaction, &dc, &budget, exec)?;
                for r in &fit.rows {
                    cov_t.push(vec![num(t), r.distance.to_string(), num(r.covariance), String::new(), flag(r.zero_class)]);
                }
                fit
            }
        };
        if decoupled && fit.rows.iter().any(|r| !r.zero_class) {
            violations.push(format!("decoupled chain has a covariance above the zero floor at t = {t}"));
        }
        if let Some(d) = fit.fitted_delta {
            if d >= 1.0 {
                violations.push(format!("fitted decay rate {d} is not below 1 at t = {t}"));
            }
        }
        let status = match fit.status {
            FitStatus::Fitted => "fitted",
            FitStatus::Decoupled => "decoupled",
            FitStatus::TooFewPoints => "tooFewPoints",
        };
        fit_t.push(vec![num(t), status.into(), opt(fit.fitted_delta), opt(fit.r2), flag(fit.monotone)]);
        fits.push(fit);
    }
    out.write_table(&cov_t)?;
    out.write_table(&fit_t)?;
    Ok(RunReport { violations, summary: json!({ "fits": fits }) })
}

fn thermo(cfg: &ExperimentConfig, out: &mut OutputWriter, exec: Execution) -> RunResult {
    let budget = cfg.budget.to_budget();
    let tc = ThermoConfig {
        n_range: cfg.thermo.n_range.clone(),
        t: cfg.schedule.t[0],
        hbar: cfg.schedule.hbar,
        grid: cfg.grid,
        method: cfg.method,
        observable: cfg.observables.first,
    };
    let sweep = thermo_sweep(&cfg.interaction, &tc, &budget, exec)?;
    let mut sweep_t = Table::new("thermo_sweep.csv");
    for r in &sweep.rows {
        sweep_t.push(vec![
            r.n.to_string(),
            r.sites.to_string(),
            num(r.local_mean),
            num(r.energy_per_site),
            opt(r.additivity_defect),
        ]);
    }
    out.write_table(&sweep_t)?;
    if !sweep.skipped.is_empty() {
        let why: Vec<String> = sweep.skipped.iter().map(|(n, e)| format!("n = {n}: {e}")).collect();
        return Err(RunFailure(format!("budget exceeded mid-run: {}", why.join("; "))));
    }
    let mut theta_rows = 0;
    if !cfg.schedule.theta.is_empty() {
        let chain = cfg.lattice_box().len();
        let th = ThetaConfig {
            split: cfg.thermo.split.unwrap_or(chain / 2),
            t: cfg.schedule.t[0],
            hbar: cfg.schedule.hbar,
            grid: cfg.thermo.theta_grid.unwrap_or(cfg.grid),
            thetas: cfg.schedule.theta.clone(),
            step: 1e-2,
            extraction: cfg.extraction,
        };
        let rows = theta_interpolation(&cfg.interaction, chain, &th, &budget)?;
        let mut theta_t = Table::new("thermo_theta.csv");
        for r in &rows {
            for g in &r.gradients {
                theta_t.push(vec![num(r.theta), g.site.to_string(), num(g.distance), num(g.sup), num(r.sup_dtheta_psi)]);
            }
        }
        theta_rows = theta_t.len();
        out.write_table(&theta_t)?;
    }
    Ok(RunReport {
        violations: Vec::new(),
        summary: json!({
            "meanDifferences": sweep.mean_differences,
            "energyDifferences": sweep.energy_differences,
            "thetaRows": theta_rows,
        }),
    })
}
