use crate::InteractionError;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// One-body potential `A(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", deny_unknown_fields)]
pub enum SitePotential {
    Zero,
    Constant { value: f64 },
    Linear { slope: f64 },
    /// `a * sqrt(1 + x^2)`.
    PseudoLinearWell { strength: f64 },
    /// `omega^2 x^2 / 2`; unbounded gradient, used only as an exact reference.
    Harmonic { omega: f64 },
}

impl SitePotential {
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            SitePotential::Zero => 0.0,
            SitePotential::Constant { value } => value,
            SitePotential::Linear { slope } => slope * x,
            SitePotential::PseudoLinearWell { strength } => strength * (1.0 + x * x).sqrt(),
            SitePotential::Harmonic { omega } => 0.5 * omega * omega * x * x,
        }
    }

    /// Derivative of order `k <= 3`.
    pub fn derivative(&self, k: usize, x: f64) -> f64 {
        if k == 0 {
            return self.value(x);
        }
        match *self {
            SitePotential::Zero | SitePotential::Constant { .. } => 0.0,
            SitePotential::Linear { slope } => {
                if k == 1 {
                    slope
                } else {
                    0.0
                }
            }
            SitePotential::PseudoLinearWell { strength: a } => {
                let s = 1.0 + x * x;
                match k {
                    1 => a * x / s.sqrt(),
                    2 => a / (s * s.sqrt()),
                    3 => -3.0 * a * x / (s * s * s.sqrt()),
                    _ => unimplemented!("derivative order above 3"),
                }
            }
            SitePotential::Harmonic { omega } => match k {
                1 => omega * omega * x,
                2 => omega * omega,
                _ => 0.0,
            },
        }
    }

    /// `sup_x |A^(k)(x)|`, or `None` when unbounded.
    pub fn derivative_sup(&self, k: usize) -> Option<f64> {
        match *self {
            SitePotential::Zero | SitePotential::Constant { .. } => Some(0.0),
            SitePotential::Linear { slope } => Some(if k == 1 { slope.abs() } else { 0.0 }),
            SitePotential::PseudoLinearWell { strength } => {
                let a = strength.abs();
                match k {
                    1 | 2 => Some(a),
                    // max of 3|x|/(1+x^2)^(5/2) is attained at x = 1/2.
                    3 => Some(3.0 * a * 0.5 / 1.25f64.powf(2.5)),
                    _ => None,
                }
            }
            SitePotential::Harmonic { omega } => match k {
                2 => Some(omega * omega),
                3 => Some(0.0),
                _ => None,
            },
        }
    }

    pub fn is_reference_only(&self) -> bool {
        matches!(self, SitePotential::Harmonic { .. })
    }
}

/// Shape `g` of a pair coupling `B(x, y) = J * eps^r * g(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum PairKind {
    Zero,
    /// `cos(x - y)`.
    CosineDiff,
    /// `sin(x) sin(y)`.
    BoundedProduct,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PairCoupling {
    pub kind: PairKind,
    #[serde(default)]
    pub coupling: f64,
}

impl PairCoupling {
    pub fn zero() -> Self {
        PairCoupling { kind: PairKind::Zero, coupling: 0.0 }
    }

    pub fn cosine_diff(coupling: f64) -> Self {
        PairCoupling { kind: PairKind::CosineDiff, coupling }
    }

    pub fn bounded_product(coupling: f64) -> Self {
        PairCoupling { kind: PairKind::BoundedProduct, coupling }
    }

    /// Whether the coupling vanishes identically.
    pub fn is_trivial(&self) -> bool {
        self.kind == PairKind::Zero || self.coupling == 0.0
    }
}

impl PairKind {
    /// `d^a/dx^a d^b/dy^b g(x, y)`.
    pub fn derivative(self, a: usize, b: usize, x: f64, y: f64) -> f64 {
        match self {
            PairKind::Zero => 0.0,
            PairKind::CosineDiff => {
                let sign = if b % 2 == 0 { 1.0 } else { -1.0 };
                sign * (x - y + (a + b) as f64 * FRAC_PI_2).cos()
            }
            PairKind::BoundedProduct => (x + a as f64 * FRAC_PI_2).sin() * (y + b as f64 * FRAC_PI_2).sin(),
        }
    }

    pub fn value(self, x: f64, y: f64) -> f64 {
        self.derivative(0, 0, x, y)
    }

    /// Uniform bound on every partial derivative of `g`.
    pub fn derivative_bound(self) -> f64 {
        match self {
            PairKind::Zero => 0.0,
            PairKind::CosineDiff | PairKind::BoundedProduct => 1.0,
        }
    }
}

fn default_dim() -> usize {
    1
}

fn default_hbar() -> f64 {
    1.0
}

/// Full description of the interaction on `Z^d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct InteractionSpec {
    pub site: SitePotential,
    pub pair: PairCoupling,
    /// Geometric decay rate of the coupling with distance.
    pub eps: f64,
    #[serde(default = "default_dim")]
    pub dim: usize,
    /// Semiclassical parameter.
    #[serde(default = "default_hbar")]
    pub hbar: f64,
}

impl InteractionSpec {
    pub fn new(site: SitePotential, pair: PairCoupling, eps: f64) -> Self {
        InteractionSpec { site, pair, eps, dim: 1, hbar: 1.0 }
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    pub fn with_hbar(mut self, hbar: f64) -> Self {
        self.hbar = hbar;
        self
    }

    /// Check parameter ranges.
    pub fn validate(&self) -> Result<(), InteractionError> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(InteractionError::DecayOutOfRange);
        }
        if self.dim == 0 {
            return Err(InteractionError::InvalidParameter("lattice dimension must be positive".into()));
        }
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(InteractionError::InvalidParameter("hbar must be positive".into()));
        }
        if !self.pair.coupling.is_finite() {
            return Err(InteractionError::InvalidParameter("coupling must be finite".into()));
        }
        Ok(())
    }

    /// Weight `J * eps^r` of the pair term at distance `r >= 1`.
    pub fn pair_weight(&self, r: i64) -> f64 {
        if self.pair.kind == PairKind::Zero {
            0.0
        } else {
            self.pair.coupling * self.eps.powi(r as i32)
        }
    }

    /// The same model with the pair coupling switched off.
    pub fn decoupled(&self) -> Self {
        InteractionSpec { pair: PairCoupling::zero(), ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finite_diff(f: impl Fn(f64) -> f64, x: f64) -> f64 {
        let h = 1e-5;
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn site_derivatives_match_differences() {
        let a = SitePotential::PseudoLinearWell { strength: 1.3 };
        for &x in &[-2.0, -0.3, 0.0, 0.7, 3.0] {
            for k in 0..3 {
                let fd = finite_diff(|z| a.derivative(k, z), x);
                assert!((fd - a.derivative(k + 1, x)).abs() < 1e-7, "k={k} x={x}");
            }
        }
    }

    #[test]
    fn pair_derivatives_match_differences() {
        for kind in [PairKind::CosineDiff, PairKind::BoundedProduct] {
            let (x, y) = (0.4, -1.1);
            for a in 0..3 {
                for b in 0..3 {
                    let dx = finite_diff(|z| kind.derivative(a, b, z, y), x);
                    let dy = finite_diff(|z| kind.derivative(a, b, x, z), y);
                    assert!((dx - kind.derivative(a + 1, b, x, y)).abs() < 1e-8);
                    assert!((dy - kind.derivative(a, b + 1, x, y)).abs() < 1e-8);
                }
            }
            assert_eq!(kind.value(x, y), kind.value(y, x));
        }
    }

    #[test]
    fn third_derivative_sup_is_attained() {
        let a = SitePotential::PseudoLinearWell { strength: 1.0 };
        let sampled = (0..20001).map(|i| a.derivative(3, -5.0 + i as f64 * 5e-4).abs()).fold(0.0, f64::max);
        let sup = a.derivative_sup(3).unwrap();
        assert!(sampled <= sup + 1e-12 && sampled > sup - 1e-6);
    }

    #[test]
    fn decay_range_is_enforced() {
        let spec = InteractionSpec::new(SitePotential::Zero, PairCoupling::zero(), 1.0);
        assert_eq!(spec.validate(), Err(InteractionError::DecayOutOfRange));
        assert_eq!(spec.validate().unwrap_err().to_string(), "decay parameter must lie in (0,1)");
    }
}
