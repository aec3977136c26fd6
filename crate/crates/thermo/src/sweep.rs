use crate::{GibbsMethod, GibbsState, SiteFunction, ThermoError};
use heatcorr_exec::{map_slice, Execution};
use heatcorr_grid::{partition_function, Budget, GridSpec, LatticeHamiltonian, TraceMethod};
use heatcorr_interaction::{InteractionSpec, LatticePotential};
use heatcorr_lattice::{LatticeBox, Site};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ThermoConfig {
    /// Half-widths `n`; the lattice is `{-n, ..., n}`.
    pub n_range: Vec<usize>,
    pub t: f64,
    pub hbar: f64,
    pub grid: GridSpec,
    pub method: GibbsMethod,
    pub observable: SiteFunction,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ThermoRow {
    pub n: usize,
    pub sites: usize,
    /// `E(f(x_0))` on `{-n, ..., n}`.
    pub local_mean: f64,
    /// `X / |Lambda|`.
    pub energy_per_site: f64,
    /// `|X_Lambda - X_{-n..0} - X_{1..n}|`; absent for `n = 0`.
    pub additivity_defect: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ThermoSweep {
    pub rows: Vec<ThermoRow>,
    /// `|mean_{k+1} - mean_k|` between consecutive rows.
    pub mean_differences: Vec<f64>,
    pub energy_differences: Vec<f64>,
    /// Rows that could not be computed, with the reason.
    pub skipped: Vec<(usize, String)>,
}

fn trace_method(m: GibbsMethod) -> TraceMethod {
    match m {
        GibbsMethod::Dense => TraceMethod::Dense,
        GibbsMethod::LocalQuadrature { steps } => TraceMethod::LocalQuadrature { steps },
    }
}

fn energy(spec: &InteractionSpec, lattice: &LatticeBox, cfg: &ThermoConfig, budget: &Budget) -> Result<f64, ThermoError> {
    let pot = LatticePotential::on_box(spec, lattice)?;
    let h = LatticeHamiltonian::build(&pot, &cfg.grid, cfg.hbar, budget)?;
    Ok(partition_function(&h, cfg.t, trace_method(cfg.method), budget, Execution::Sequential)?.mean_energy)
}

fn row(spec: &InteractionSpec, n: usize, cfg: &ThermoConfig, budget: &Budget) -> Result<ThermoRow, ThermoError> {
    let n_i = n as i64;
    let lattice = LatticeBox::interval(-n_i, n_i)?;
    let pot = LatticePotential::on_box(spec, &lattice)?;
    let h = LatticeHamiltonian::build(&pot, &cfg.grid, cfg.hbar, budget)?;
    let sites = lattice.sites();
    let state = GibbsState::new(&h, &sites, cfg.t, cfg.method, budget, Execution::Sequential)?;
    let local_mean = state.mean(&cfg.observable.at(Site::scalar(0), &cfg.grid)?)?;
    let x = partition_function(&h, cfg.t, trace_method(cfg.method), budget, Execution::Sequential)?.mean_energy;
    let additivity_defect = if n == 0 {
        None
    } else {
        let left = energy(spec, &LatticeBox::interval(-n_i, 0)?, cfg, budget)?;
        let right = energy(spec, &LatticeBox::interval(1, n_i)?, cfg, budget)?;
        Some((x - left - right).abs())
    };
    Ok(ThermoRow { n, sites: sites.len(), local_mean, energy_per_site: x / sites.len() as f64, additivity_defect })
}

/// Local means and energies per site on the growing chains `{-n, ..., n}`.
///
/// Rows exceeding the budget are reported in `skipped`; the remaining rows
/// are still returned.
pub fn thermo_sweep(spec: &InteractionSpec, cfg: &ThermoConfig, budget: &Budget, exec: Execution) -> Result<ThermoSweep, ThermoError> {
    if !(cfg.t > 0.0) {
        return Err(ThermoError::InvalidArgument("inverse temperature must be positive".into()));
    }
    let results = map_slice(exec, &cfg.n_range, |&n| (n, row(spec, n, cfg, budget)));
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (n, r) in results {
        match r {
            Ok(r) => rows.push(r),
            Err(ThermoError::Grid(e)) => skipped.push((n, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    rows.sort_by_key(|r| r.n);
    let diffs = |f: fn(&ThermoRow) -> f64| rows.windows(2).map(|w| (f(&w[1]) - f(&w[0])).abs()).collect::<Vec<_>>();
    Ok(ThermoSweep {
        mean_differences: diffs(|r| r.local_mean),
        energy_differences: diffs(|r| r.energy_per_site),
        rows,
        skipped,
    })
}
