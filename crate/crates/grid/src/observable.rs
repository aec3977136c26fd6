use crate::{symmetric_eigen, GridError, GridSpec};
use heatcorr_lattice::Site;

/// Representation of a local observable on `grid^|E|`.
#[derive(Clone, Debug, PartialEq)]
pub enum ObservableRepr {
    /// Multiplication by a function sampled on the support grid.
    Multiplication(Vec<f64>),
    /// Real symmetric matrix on the support grid, row-major.
    Dense(Vec<f64>),
}

/// Bounded operator acting on the sites of `support` only.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalObservable {
    support: Vec<Site>,
    points: usize,
    repr: ObservableRepr,
}

/// An observable padded with the identity to the full lattice.
#[derive(Clone, Debug, PartialEq)]
pub enum Embedded {
    Diagonal(Vec<f64>),
    Dense(Vec<f64>),
}

impl Embedded {
    pub fn to_dense(&self) -> Vec<f64> {
        match self {
            Embedded::Dense(m) => m.clone(),
            Embedded::Diagonal(d) => {
                let n = d.len();
                let mut m = vec![0.0; n * n];
                for (i, v) in d.iter().enumerate() {
                    m[i * n + i] = *v;
                }
                m
            }
        }
    }
}

fn local_dim(points: usize, sites: usize) -> usize {
    points.pow(sites as u32)
}

impl LocalObservable {
    /// Multiplication by `f`, evaluated at the grid coordinates of the support.
    pub fn multiplication(support: Vec<Site>, grid: &GridSpec, f: impl Fn(&[f64]) -> f64) -> Result<Self, GridError> {
        let coords = grid.coordinates();
        let k = support.len();
        let dim = local_dim(grid.points, k);
        let values = (0..dim)
            .map(|mut flat| {
                let mut x = vec![0.0; k];
                for a in (0..k).rev() {
                    x[a] = coords[flat % grid.points];
                    flat /= grid.points;
                }
                f(&x)
            })
            .collect();
        Self::new(support, grid.points, ObservableRepr::Multiplication(values))
    }

    pub fn new(support: Vec<Site>, points: usize, repr: ObservableRepr) -> Result<Self, GridError> {
        if support.is_empty() {
            return Err(GridError::InvalidArgument("observable support must be non-empty".into()));
        }
        let mut sorted = support.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != support.len() {
            return Err(GridError::InvalidArgument("observable support has repeated sites".into()));
        }
        let dim = local_dim(points, support.len());
        let ok = match &repr {
            ObservableRepr::Multiplication(v) => v.len() == dim,
            ObservableRepr::Dense(m) => {
                m.len() == dim * dim && (0..dim).all(|i| (0..i).all(|j| (m[i * dim + j] - m[j * dim + i]).abs() <= 1e-12))
            }
        };
        if !ok {
            return Err(GridError::InvalidArgument(format!(
                "observable data must be a symmetric operator on {dim} support points"
            )));
        }
        Ok(LocalObservable { support, points, repr })
    }

    pub fn support(&self) -> &[Site] {
        &self.support
    }

    pub fn repr(&self) -> &ObservableRepr {
        &self.repr
    }

    pub fn is_multiplication(&self) -> bool {
        matches!(self.repr, ObservableRepr::Multiplication(_))
    }

    /// Operator norm: `sup |f|` or the spectral norm.
    pub fn op_norm(&self) -> f64 {
        match &self.repr {
            ObservableRepr::Multiplication(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            ObservableRepr::Dense(m) => {
                let dim = local_dim(self.points, self.support.len());
                let (vals, _) = symmetric_eigen(m, dim);
                vals.iter().fold(0.0, |a, x| a.max(x.abs()))
            }
        }
    }

    /// Whether the supports share a site.
    pub fn overlaps(&self, other: &LocalObservable) -> bool {
        self.support.iter().any(|s| other.support.contains(s))
    }

    /// Slots of the support within `sites`.
    pub fn slots(&self, sites: &[Site]) -> Result<Vec<usize>, GridError> {
        self.support
            .iter()
            .map(|s| {
                sites.iter().position(|t| t == s).ok_or_else(|| {
                    GridError::InvalidArgument(format!("observable site {:?} lies outside the lattice", s.0))
                })
            })
            .collect()
    }

    /// Pad with the identity on the remaining sites of `sites`.
    pub fn embed(&self, sites: &[Site]) -> Result<Embedded, GridError> {
        let slots = self.slots(sites)?;
        let n = self.points;
        let full = local_dim(n, sites.len());
        let local_index = |flat: usize| {
            let mut idx = 0;
            for &s in &slots {
                let digit = (flat / n.pow((sites.len() - 1 - s) as u32)) % n;
                idx = idx * n + digit;
            }
            idx
        };
        let locals: Vec<usize> = (0..full).map(local_index).collect();
        Ok(match &self.repr {
            ObservableRepr::Multiplication(v) => Embedded::Diagonal(locals.iter().map(|&l| v[l]).collect()),
            ObservableRepr::Dense(m) => {
                let ld = local_dim(n, slots.len());
                // the rest of the configuration, with support digits zeroed
                let rest: Vec<usize> = (0..full)
                    .map(|mut flat| {
                        let mut key = 0;
                        for s in 0..sites.len() {
                            let stride = n.pow((sites.len() - 1 - s) as u32);
                            let digit = flat / stride;
                            flat %= stride;
                            if !slots.contains(&s) {
                                key += digit * stride;
                            }
                        }
                        key
                    })
                    .collect();
                let mut out = vec![0.0; full * full];
                for i in 0..full {
                    for j in 0..full {
                        if rest[i] == rest[j] {
                            out[i * full + j] = m[locals[i] * ld + locals[j]];
                        }
                    }
                }
                Embedded::Dense(out)
            }
        })
    }
}
