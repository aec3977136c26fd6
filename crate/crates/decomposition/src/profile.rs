use crate::{DecompositionError, DecompositionTerm};
use heatcorr_grid::{Budget, GridSpec};
use heatcorr_interaction::{InteractionSpec, LatticePotential, SitePotential};
use heatcorr_kernel::quadrature::gauss_legendre;
use heatcorr_kernel::{ExtractionOptions, KernelField, SpectralKernel};
use heatcorr_lattice::{LatticeBox, Site};
use serde::Serialize;
use std::sync::OnceLock;

fn segment_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(64, 0.0, 1.0))
}

/// Mean of `A` on the segment from `y` to `x`.
pub fn segment_average(a: &SitePotential, x: f64, y: f64) -> f64 {
    let (nodes, weights) = segment_rule();
    nodes.iter().zip(weights).map(|(th, w)| w * a.value(y + th * (x - y))).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecayRow {
    pub diam: i64,
    pub sup_norm: f64,
    /// `sup_norm / (t eps^diam (1 + diam)^(2d))`.
    pub normalized: f64,
    pub boxes_counted: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecayProfile {
    pub rows: Vec<DecayRow>,
    /// Set when some non-point diameter fails to decrease the sup norm.
    pub violation: bool,
}

impl DecayProfile {
    /// `sup(diam + 1) / sup(diam)` for consecutive non-point diameters.
    pub fn ratios(&self) -> Vec<f64> {
        self.rows.windows(2).filter(|w| w[0].diam >= 1).map(|w| w[1].sup_norm / w[0].sup_norm).collect()
    }
}

/// Per-diameter maxima of the term sup norms.
pub fn decay_profile(terms: &[DecompositionTerm], eps: f64, t: f64, dim: usize) -> DecayProfile {
    let mut rows: Vec<DecayRow> = Vec::new();
    for term in terms {
        let scale = t * eps.powi(term.diam as i32) * ((1 + term.diam) as f64).powi(2 * dim as i32);
        match rows.iter_mut().find(|r| r.diam == term.diam) {
            Some(r) => {
                r.sup_norm = r.sup_norm.max(term.sup_norm);
                r.normalized = r.normalized.max(term.sup_norm / scale);
                r.boxes_counted += 1;
            }
            None => rows.push(DecayRow {
                diam: term.diam,
                sup_norm: term.sup_norm,
                normalized: term.sup_norm / scale,
                boxes_counted: 1,
            }),
        }
    }
    rows.sort_by_key(|r| r.diam);
    let violation = rows.windows(2).any(|w| w[0].diam >= 1 && w[1].sup_norm > w[0].sup_norm);
    DecayProfile { rows, violation }
}

/// `sup |T_{l} psi - t A~(x_l, y_l) + t A~(0, y_l - x_l)|` for a point term.
pub fn point_term_defect(term: &DecompositionTerm, field: &KernelField, site_term: &SitePotential, slot: usize) -> f64 {
    let t = field.t();
    let dim = field.dim();
    let mut worst = 0.0f64;
    for xi in 0..dim {
        let x = field.coords(xi)[slot];
        for yi in 0..dim {
            let Some(v) = term.value(field.index(xi, yi)) else { continue };
            let y = field.coords(yi)[slot];
            let reference = t * segment_average(site_term, x, y) - t * segment_average(site_term, 0.0, y - x);
            worst = worst.max((v - reference).abs());
        }
    }
    worst
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SplittingReport {
    pub t: f64,
    pub sup_defect: f64,
    /// `|E| (t + h^2 t^2)`.
    pub reference_scale: f64,
    pub points: usize,
}

/// Compare `psi_Lambda` with `t sum_{l in E} A~_l + psi_{Lambda \ E}`, the
/// complement computed by its own spectral run.
pub fn splitting_check(
    spec: &InteractionSpec,
    lattice: &LatticeBox,
    split: &[Site],
    t: f64,
    grid: &GridSpec,
    budget: &Budget,
    options: ExtractionOptions,
) -> Result<SplittingReport, DecompositionError> {
    let sites = lattice.sites();
    if split.is_empty() || split.iter().any(|s| !lattice.contains(s)) {
        return Err(DecompositionError::Incompatible("split set must be a non-empty subset of the lattice".into()));
    }
    let hbar = spec.hbar;
    let full = LatticePotential::on_box(spec, lattice)?;
    let mut kernel = SpectralKernel::new(&full, grid, hbar, budget)?;
    kernel.options = options;
    let big = kernel.field(t)?;
    let in_split: Vec<bool> = sites.iter().map(|s| split.contains(s)).collect();
    let rest: Vec<Site> = sites.iter().zip(&in_split).filter(|(_, &e)| !e).map(|(s, _)| s.clone()).collect();
    let small = if rest.is_empty() {
        None
    } else {
        let pot = LatticePotential::full(spec, &rest)?;
        let mut k = SpectralKernel::new(&pot, grid, hbar, budget)?;
        k.options = options;
        Some(k.field(t)?)
    };
    let dim = big.dim();
    let mut sup_defect = 0.0f64;
    let mut points = 0;
    for xi in 0..dim {
        let xm = big.multi(xi);
        let xc = big.coords(xi);
        for yi in 0..dim {
            let k = big.index(xi, yi);
            if !big.mask()[k] {
                continue;
            }
            let ym = big.multi(yi);
            let yc = big.coords(yi);
            let mut reference = 0.0;
            let (mut rx, mut ry) = (Vec::new(), Vec::new());
            for s in 0..sites.len() {
                if in_split[s] {
                    reference += t * segment_average(&spec.site, xc[s], yc[s]);
                } else {
                    rx.push(xm[s]);
                    ry.push(ym[s]);
                }
            }
            if let Some(f) = &small {
                match f.psi_at(&rx, &ry) {
                    Some(p) => reference += p,
                    None => continue,
                }
            }
            sup_defect = sup_defect.max((big.psi()[k] - reference).abs());
            points += 1;
        }
    }
    if points == 0 {
        return Err(heatcorr_kernel::KernelError::Underflow.into());
    }
    Ok(SplittingReport { t, sup_defect, reference_scale: split.len() as f64 * (t + hbar * hbar * t * t), points })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_averages() {
        assert!((segment_average(&SitePotential::Constant { value: 2.5 }, -1.0, 3.0) - 2.5).abs() < 1e-14);
        let lin = segment_average(&SitePotential::Linear { slope: 0.7 }, 1.2, -0.4);
        assert!((lin - 0.7 * 0.4).abs() < 1e-14);
        let plw = segment_average(&SitePotential::PseudoLinearWell { strength: 1.0 }, 2.0, 0.0);
        let exact = 0.25 * (2.0 * 5f64.sqrt() + 2f64.asinh());
        assert!((plw - exact).abs() < 1e-13);
    }

    #[test]
    fn slope_of_power_law() {
        let x = [0.05, 0.1, 0.2];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(1.5)).collect();
        assert!((log_log_slope(&x, &y) - 1.5).abs() < 1e-12);
    }
}
