use crate::GridError;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Discretisation of the one-dimensional kinetic term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Stencil {
    /// Second-order central differences (tridiagonal, nearest neighbour).
    #[default]
    ThreePoint,
    /// Sine discrete-variable representation: spectrally accurate, dense per axis.
    SineDvr,
}

fn default_points() -> usize {
    32
}
fn default_half_width() -> f64 {
    6.0
}
fn default_margin() -> usize {
    6
}
fn default_window() -> f64 {
    0.6
}

/// Uniform grid `x_i = -L + i dx`, `dx = 2L/(n-1)`, with Dirichlet walls one
/// spacing beyond either end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "default_half_width")]
    pub half_width: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    /// Points excluded at each end when forming the interior window.
    #[serde(default = "default_margin")]
    pub interior_margin: usize,
    /// Fraction of `[-L, L]` kept in the interior window.
    #[serde(default = "default_window")]
    pub window_fraction: f64,
    #[serde(default)]
    pub stencil: Stencil,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            half_width: default_half_width(),
            points: default_points(),
            interior_margin: default_margin(),
            window_fraction: default_window(),
            stencil: Stencil::ThreePoint,
        }
    }
}

impl GridSpec {
    pub fn new(half_width: f64, points: usize) -> Self {
        GridSpec { half_width, points, ..Default::default() }
    }

    pub fn with_stencil(mut self, stencil: Stencil) -> Self {
        self.stencil = stencil;
        self
    }

    pub fn with_margin(mut self, margin: usize) -> Self {
        self.interior_margin = margin;
        self
    }

    pub fn with_window(mut self, fraction: f64) -> Self {
        self.window_fraction = fraction;
        self
    }

    pub fn validate(&self) -> Result<(), GridError> {
        if self.points < 3 {
            return Err(GridError::InvalidGrid("at least three points are required".into()));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(GridError::InvalidGrid("half width must be positive".into()));
        }
        if !(self.window_fraction > 0.0 && self.window_fraction <= 1.0) {
            return Err(GridError::InvalidGrid("window fraction must lie in (0,1]".into()));
        }
        if 2 * self.interior_margin >= self.points {
            return Err(GridError::InvalidGrid("interior margin leaves no points".into()));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.point(i)).collect()
    }

    /// Index of `x = 0` when the grid contains it.
    pub fn origin_index(&self) -> Option<usize> {
        (self.points % 2 == 1).then_some(self.points / 2)
    }

    /// Whether point `i` belongs to the interior window.
    pub fn in_window(&self, i: usize) -> bool {
        i >= self.interior_margin
            && i + self.interior_margin < self.points
            && self.point(i).abs() <= self.window_fraction * self.half_width + 1e-12
    }

    /// Dense symmetric `n x n` kinetic matrix `-(h^2/2) d^2/dx^2`, row-major.
    pub fn kinetic_matrix(&self, hbar: f64) -> Vec<f64> {
        let n = self.points;
        let dx = self.spacing();
        let mut k = vec![0.0; n * n];
        match self.stencil {
            Stencil::ThreePoint => {
                let c = hbar * hbar / (dx * dx);
                for i in 0..n {
                    k[i * n + i] = c;
                    if i + 1 < n {
                        k[i * n + i + 1] = -0.5 * c;
                        k[(i + 1) * n + i] = -0.5 * c;
                    }
                }
            }
            Stencil::SineDvr => {
                // Walls at -L - dx and L + dx: n interior points, n + 1 intervals.
                let intervals = (n + 1) as f64;
                let width = intervals * dx;
                let norm = 2.0 / intervals;
                let modes: Vec<f64> = (1..=n).map(|m| 0.5 * hbar * hbar * (m as f64 * PI / width).powi(2)).collect();
                let basis: Vec<f64> = (0..n)
                    .flat_map(|i| (1..=n).map(move |m| ((i + 1) as f64 * m as f64 * PI / intervals).sin()))
                    .collect();
                for i in 0..n {
                    for j in i..n {
                        let s: f64 = (0..n).map(|m| basis[i * n + m] * basis[j * n + m] * modes[m]).sum();
                        k[i * n + j] = norm * s;
                        k[j * n + i] = norm * s;
                    }
                }
            }
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_point_matrix() {
        let g = GridSpec::new(1.0, 5);
        let k = g.kinetic_matrix(1.0);
        let c = 1.0 / (0.5 * 0.5);
        assert!((k[0] - c).abs() < 1e-14);
        assert!((k[1] + 0.5 * c).abs() < 1e-14);
        assert_eq!(k[2], 0.0);
    }

    #[test]
    fn dvr_is_symmetric_and_positive() {
        let g = GridSpec::new(2.0, 9).with_stencil(Stencil::SineDvr);
        let k = g.kinetic_matrix(1.0);
        for i in 0..9 {
            for j in 0..9 {
                assert!((k[i * 9 + j] - k[j * 9 + i]).abs() < 1e-12);
            }
            assert!(k[i * 9 + i] > 0.0);
        }
    }

    #[test]
    fn origin_only_for_odd_grids() {
        assert_eq!(GridSpec::new(1.0, 5).origin_index(), Some(2));
        assert_eq!(GridSpec::new(1.0, 6).origin_index(), None);
        assert!(GridSpec::new(1.0, 5).point(2).abs() < 1e-15);
    }

    #[test]
    fn window_is_central() {
        let g = GridSpec::new(5.0, 11).with_margin(1);
        let w: Vec<usize> = (0..11).filter(|&i| g.in_window(i)).collect();
        assert_eq!(w, vec![2, 3, 4, 5, 6, 7, 8]);
    }
}
