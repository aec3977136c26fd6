use crate::KernelError;
use heatcorr_grid::{Budget, DenseSpectrum, GridSpec, HeatMatrix, LatticeHamiltonian};
use heatcorr_interaction::LatticePotential;
use heatcorr_lattice::Site;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Thresholds deciding where the phase `psi` is trusted.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct ExtractionOptions {
    /// Absolute floor below which `U` counts as underflowed.
    pub underflow_floor: f64,
    /// Entries below this fraction of `max U` are dominated by rounding noise.
    pub relative_floor: f64,
    /// Multiple of the band-limit residue `exp(-t h^2 (pi/dx)^2 / 2) max U`
    /// below which the grid cannot resolve `U`.
    pub resolution_margin: f64,
}

impl Default for ExtractionOptions {
    fn default() -> Self {
        ExtractionOptions { underflow_floor: 1e-290, relative_floor: 1e-9, resolution_margin: 1e3 }
    }
}

/// Kernel `U(x, y)` on `grid^N x grid^N` with its phase `psi` and validity mask.
///
/// Entry `(i, j)` sits at `i * dim + j`, with `i` the flat index of `x` and `j`
/// that of `y`.
#[derive(Clone, Debug)]
pub struct KernelField {
    grid: GridSpec,
    sites: Vec<Site>,
    t: f64,
    hbar: f64,
    dim: usize,
    u: Vec<f64>,
    psi: Vec<f64>,
    mask: Vec<bool>,
}

impl KernelField {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Number of grid points of one configuration, `n^N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn valid_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        x * self.dim + y
    }

    /// Flat configuration index from per-site grid indices.
    pub fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.grid.points + i)
    }

    pub fn multi(&self, mut flat: usize) -> Vec<usize> {
        let n = self.grid.points;
        let mut out = vec![0; self.n_sites()];
        for a in (0..self.n_sites()).rev() {
            out[a] = flat % n;
            flat /= n;
        }
        out
    }

    /// `psi(x, y)` at per-site grid indices, if valid.
    pub fn psi_at(&self, x: &[usize], y: &[usize]) -> Option<f64> {
        let k = self.index(self.flat(x), self.flat(y));
        self.mask[k].then_some(self.psi[k])
    }

    /// Replace the phase and mask (used by derived fields).
    pub fn with_values(&self, psi: Vec<f64>, mask: Vec<bool>) -> KernelField {
        KernelField { psi, mask, ..self.clone() }
    }

    /// Restrict the mask to points where `keep` holds.
    pub fn restrict_mask(&mut self, keep: impl Fn(&[usize], &[usize]) -> bool) {
        for xi in 0..self.dim {
            let xm = self.multi(xi);
            for yi in 0..self.dim {
                let k = xi * self.dim + yi;
                if self.mask[k] && !keep(&xm, &self.multi(yi)) {
                    self.mask[k] = false;
                }
            }
        }
    }

    /// Coordinates of configuration `flat`.
    pub fn coords(&self, flat: usize) -> Vec<f64> {
        self.multi(flat).into_iter().map(|i| self.grid.point(i)).collect()
    }

    /// `sup |psi|` over the valid points.
    pub fn sup_abs(&self) -> f64 {
        self.psi.iter().zip(&self.mask).filter(|(_, &m)| m).map(|(p, _)| p.abs()).fold(0.0, f64::max)
    }
}

/// Phase `psi = -ln U - |x-y|^2 / (2 t h^2) - (N/2) ln(2 pi t h^2)` of kernel values.
pub fn extract_psi(
    u: &[f64],
    grid: &GridSpec,
    n_sites: usize,
    t: f64,
    hbar: f64,
    opts: &ExtractionOptions,
) -> Result<(Vec<f64>, Vec<bool>), KernelError> {
    let n = grid.points;
    let dim = n.pow(n_sites as u32);
    if u.len() != dim * dim {
        return Err(KernelError::Incompatible("kernel size does not match the grid".into()));
    }
    let coords = grid.coordinates();
    let window: Vec<bool> = (0..n).map(|i| grid.in_window(i)).collect();
    let umax = u.iter().cloned().fold(0.0, f64::max);
    let th2 = t * hbar * hbar;
    let k_max = PI / grid.spacing();
    let residue = opts.resolution_margin * (-0.5 * th2 * k_max * k_max).exp();
    let floor = opts.underflow_floor.max(opts.relative_floor.max(residue) * umax);
    let norm = 0.5 * n_sites as f64 * (2.0 * PI * th2).ln();
    let multi = |mut f: usize| {
        let mut out = vec![0usize; n_sites];
        for a in (0..n_sites).rev() {
            out[a] = f % n;
            f /= n;
        }
        out
    };
    let configs: Vec<Vec<usize>> = (0..dim).map(multi).collect();
    let in_win: Vec<bool> = configs.iter().map(|c| c.iter().all(|&i| window[i])).collect();
    let mut psi = vec![f64::NAN; dim * dim];
    let mut mask = vec![false; dim * dim];
    let mut any = false;
    for xi in 0..dim {
        for yi in 0..dim {
            let k = xi * dim + yi;
            let val = u[k];
            if !(val > floor) {
                continue;
            }
            let d2: f64 = configs[xi].iter().zip(&configs[yi]).map(|(&a, &b)| (coords[a] - coords[b]).powi(2)).sum();
            psi[k] = -val.ln() - d2 / (2.0 * th2) - norm;
            if in_win[xi] && in_win[yi] {
                mask[k] = true;
                any = true;
            }
        }
    }
    if !any {
        return Err(KernelError::Underflow);
    }
    Ok((psi, mask))
}

/// Kernel field from a dense heat matrix, `U = Op / dx^N`.
pub fn kernel_from_operator(
    heat: &HeatMatrix,
    grid: &GridSpec,
    sites: &[Site],
    t: f64,
    hbar: f64,
    opts: &ExtractionOptions,
) -> Result<KernelField, KernelError> {
    let n_sites = sites.len();
    let dim = grid.points.pow(n_sites as u32);
    if heat.dim != dim {
        return Err(KernelError::Incompatible("operator size does not match the grid".into()));
    }
    let scale = heat.log_scale.exp() / grid.spacing().powi(n_sites as i32);
    let u: Vec<f64> = heat.matrix.iter().map(|v| v * scale).collect();
    let (psi, mask) = extract_psi(&u, grid, n_sites, t, hbar, opts)?;
    Ok(KernelField { grid: *grid, sites: sites.to_vec(), t, hbar, dim, u, psi, mask })
}

/// Dense spectral solver producing kernel fields at any `t`.
pub struct SpectralKernel {
    spectrum: DenseSpectrum,
    grid: GridSpec,
    sites: Vec<Site>,
    hbar: f64,
    pub options: ExtractionOptions,
}

impl SpectralKernel {
    pub fn new(potential: &LatticePotential, grid: &GridSpec, hbar: f64, budget: &Budget) -> Result<Self, KernelError> {
        let h = LatticeHamiltonian::build(potential, grid, hbar, budget)?;
        Self::from_hamiltonian(&h, potential.sites(), budget)
    }

    pub fn from_hamiltonian(h: &LatticeHamiltonian, sites: &[Site], budget: &Budget) -> Result<Self, KernelError> {
        if h.dim() > budget.dense {
            return Err(KernelError::DenseRequired(h.dim()));
        }
        Ok(SpectralKernel {
            spectrum: DenseSpectrum::new(h, budget)?,
            grid: *h.grid(),
            sites: sites.to_vec(),
            hbar: h.hbar(),
            options: ExtractionOptions::default(),
        })
    }

    pub fn spectrum(&self) -> &DenseSpectrum {
        &self.spectrum
    }

    pub fn field(&self, t: f64) -> Result<KernelField, KernelError> {
        if !(t > 0.0) {
            return Err(KernelError::InvalidArgument("t must be positive".into()));
        }
        kernel_from_operator(&self.spectrum.heat_matrix(t), &self.grid, &self.sites, t, self.hbar, &self.options)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_has_zero_phase() {
        let g = GridSpec::new(3.0, 7).with_margin(1);
        let t = 0.4;
        let u: Vec<f64> = (0..49)
            .map(|k| {
                let (x, y) = (g.point(k / 7), g.point(k % 7));
                (2.0 * PI * t).powf(-0.5) * (-(x - y).powi(2) / (2.0 * t)).exp() * (-1.5f64).exp()
            })
            .collect();
        let opts = ExtractionOptions { resolution_margin: 0.0, ..Default::default() };
        let (psi, mask) = extract_psi(&u, &g, 1, t, 1.0, &opts).unwrap();
        for k in 0..49 {
            if mask[k] {
                assert!((psi[k] - 1.5).abs() < 1e-12);
            }
        }
        let all = mask.iter().filter(|&&m| m).count();
        // on this coarse grid the band-limit residue exceeds every entry
        assert_eq!(extract_psi(&u, &g, 1, t, 1.0, &ExtractionOptions::default()), Err(KernelError::Underflow));
        let fine = ExtractionOptions { resolution_margin: 0.05, ..Default::default() };
        let (_, mask) = extract_psi(&u, &g, 1, t, 1.0, &fine).unwrap();
        assert!(mask.iter().filter(|&&m| m).count() < all);
    }

    #[test]
    fn all_underflow_is_an_error() {
        let g = GridSpec::new(3.0, 5).with_margin(1);
        let u = vec![0.0; 25];
        assert_eq!(extract_psi(&u, &g, 1, 0.1, 1.0, &ExtractionOptions::default()), Err(KernelError::Underflow));
    }
}
