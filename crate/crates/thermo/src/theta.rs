use crate::ThermoError;
use heatcorr_grid::{Budget, GridSpec, LatticeHamiltonian};
use heatcorr_interaction::{interaction_split, InteractionSpec, LatticePotential};
use heatcorr_kernel::{partial, ExtractionOptions, KernelField, SpectralKernel};
use heatcorr_lattice::LatticeBox;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ThetaConfig {
    /// Number of sites in the left part; the cut lies between sites
    /// `split - 1` and `split` of the chain.
    pub split: usize,
    pub t: f64,
    pub hbar: f64,
    pub grid: GridSpec,
    pub thetas: Vec<f64>,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default)]
    pub extraction: ExtractionOptions,
}

fn default_step() -> f64 {
    1e-2
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SiteGradient {
    pub site: usize,
    /// Distance from the site to the cut, a half-integer.
    pub distance: f64,
    /// `sup |d/dx_l d/dtheta psi|` over the trusted region.
    pub sup: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ThetaRow {
    pub theta: f64,
    pub sup_dtheta_psi: f64,
    pub gradients: Vec<SiteGradient>,
}

/// Potential `V - theta V_inter` with `V_inter` the interaction across the cut.
pub fn interpolated_potential(spec: &InteractionSpec, chain: usize, split: usize, theta: f64) -> Result<LatticePotential, ThermoError> {
    if split == 0 || split >= chain {
        return Err(ThermoError::InvalidArgument("the cut must separate two non-empty parts".into()));
    }
    let lattice = LatticeBox::chain(chain)?;
    let sites = lattice.sites();
    let full = LatticePotential::on_box(spec, &lattice)?;
    let cross = interaction_split(spec, &sites[..split], &sites[split..])?;
    // the full potential counts each cross pair in both orders
    Ok(full.minus_scaled(2.0 * theta, &cross)?)
}

/// Kernel field of the interpolated system.
pub fn interpolated_field(
    spec: &InteractionSpec,
    chain: usize,
    cfg: &ThetaConfig,
    theta: f64,
    budget: &Budget,
) -> Result<KernelField, ThermoError> {
    let pot = interpolated_potential(spec, chain, cfg.split, theta)?;
    let h = LatticeHamiltonian::build(&pot, &cfg.grid, cfg.hbar, budget)?;
    let mut kernel = SpectralKernel::from_hamiltonian(&h, pot.sites(), budget)?;
    kernel.options = cfg.extraction;
    Ok(kernel.field(cfg.t)?)
}

/// `d/dtheta psi` by central differences at each requested `theta`.
pub fn theta_interpolation(spec: &InteractionSpec, chain: usize, cfg: &ThetaConfig, budget: &Budget) -> Result<Vec<ThetaRow>, ThermoError> {
    let mut rows = Vec::new();
    for &theta in &cfg.thetas {
        let plus = interpolated_field(spec, chain, cfg, theta + cfg.step, budget)?;
        let minus = interpolated_field(spec, chain, cfg, theta - cfg.step, budget)?;
        let (psi, mask): (Vec<f64>, Vec<bool>) = plus
            .psi()
            .iter()
            .zip(minus.psi())
            .zip(plus.mask().iter().zip(minus.mask()))
            .map(|((p, m), (&a, &b))| if a && b { ((p - m) / (2.0 * cfg.step), true) } else { (f64::NAN, false) })
            .unzip();
        let d = plus.with_values(psi, mask);
        let sup_dtheta_psi = d.sup_abs();
        let mut gradients: Vec<SiteGradient> = (0..chain)
            .map(|l| SiteGradient { site: l, distance: (l as f64 - (cfg.split as f64 - 0.5)).abs(), sup: 0.0 })
            .collect();
        for xi in 0..d.dim() {
            let x = d.multi(xi);
            for yi in 0..d.dim() {
                if !d.mask()[d.index(xi, yi)] {
                    continue;
                }
                let y = d.multi(yi);
                for g in gradients.iter_mut() {
                    if let Some(v) = partial(&d, &x, &y, &[g.site]) {
                        g.sup = g.sup.max(v.abs());
                    }
                }
            }
        }
        rows.push(ThetaRow { theta, sup_dtheta_psi, gradients });
    }
    Ok(rows)
}
