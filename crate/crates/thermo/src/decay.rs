use crate::{GibbsMethod, GibbsState, SiteFunction, ThermoError};
use heatcorr_exec::Execution;
use heatcorr_grid::{Budget, GridSpec, LatticeHamiltonian};
use heatcorr_interaction::{InteractionSpec, LatticePotential};
use heatcorr_lattice::{LatticeBox, Site};
use serde::{Deserialize, Serialize};

/// Covariances below this magnitude are treated as zero and left out of fits.
pub const COVARIANCE_FLOOR: f64 = 1e-14;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DecayConfig {
    pub chain_length: usize,
    pub t: f64,
    pub hbar: f64,
    pub grid: GridSpec,
    pub method: GibbsMethod,
    pub first: SiteFunction,
    pub second: SiteFunction,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecayRow {
    pub distance: i64,
    pub covariance: f64,
    pub zero_class: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum FitStatus {
    Fitted,
    /// The pair coupling vanishes; every covariance is zero-class.
    Decoupled,
    TooFewPoints,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecayFit {
    pub rows: Vec<DecayRow>,
    pub status: FitStatus,
    pub fitted_delta: Option<f64>,
    pub r2: Option<f64>,
    /// `|Cov|` never increases with distance.
    pub monotone: bool,
    /// `|Cov| / (t min(|E1|, |E2|) delta_fit^r)` per row.
    pub envelope: Vec<f64>,
}

/// Least-squares line `y = a + b x`; returns `(a, b, r^2)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (my - slope * mx, slope, r2)
}

/// Fit `ln |Cov|` against distance.
pub fn fit_decay(rows: Vec<DecayRow>, t: f64, decoupled: bool) -> DecayFit {
    let monotone = rows.windows(2).all(|w| w[1].covariance.abs() <= w[0].covariance.abs());
    let used: Vec<&DecayRow> = rows.iter().filter(|r| !r.zero_class).collect();
    let (status, delta, r2) = if decoupled {
        (FitStatus::Decoupled, None, None)
    } else if used.len() < 2 {
        (FitStatus::TooFewPoints, None, None)
    } else {
        let x: Vec<f64> = used.iter().map(|r| r.distance as f64).collect();
        let y: Vec<f64> = used.iter().map(|r| r.covariance.abs().ln()).collect();
        let (_, slope, r2) = linear_fit(&x, &y);
        (FitStatus::Fitted, Some(slope.exp()), Some(r2))
    };
    let envelope = match delta {
        Some(d) => rows.iter().map(|r| r.covariance.abs() / (t * d.powi(r.distance as i32))).collect(),
        None => Vec::new(),
    };
    DecayFit { rows, status, fitted_delta: delta, r2, monotone, envelope }
}

/// `|Cov(f(x_0), g(x_r))|` for `r = 1 .. chain_length - 1` on a chain.
pub fn decay_sweep(spec: &InteractionSpec, cfg: &DecayConfig, budget: &Budget, exec: Execution) -> Result<DecayFit, ThermoError> {
    if cfg.chain_length < 2 {
        return Err(ThermoError::InvalidArgument("chain needs at least two sites".into()));
    }
    let lattice = LatticeBox::chain(cfg.chain_length)?;
    let pot = LatticePotential::on_box(spec, &lattice)?;
    let h = LatticeHamiltonian::build(&pot, &cfg.grid, cfg.hbar, budget)?;
    let sites = lattice.sites();
    let state = GibbsState::new(&h, &sites, cfg.t, cfg.method, budget, exec)?;
    let a = cfg.first.at(Site::scalar(0), &cfg.grid)?;
    let mut rows = Vec::new();
    for r in 1..cfg.chain_length as i64 {
        let b = cfg.second.at(Site::scalar(r), &cfg.grid)?;
        let c = state.covariance(&a, &b)?;
        rows.push(DecayRow { distance: r, covariance: c, zero_class: c.abs() <= COVARIANCE_FLOOR });
    }
    let decoupled = !pot.is_coupled();
    if !decoupled && rows.iter().all(|r| r.zero_class) {
        return Err(ThermoError::SignalUnderflow);
    }
    Ok(fit_decay(rows, cfg.t, decoupled))
}
