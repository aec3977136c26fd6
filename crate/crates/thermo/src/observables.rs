use heatcorr_grid::{GridError, GridSpec, LocalObservable};
use heatcorr_lattice::Site;
use serde::{Deserialize, Serialize};

/// Bounded single-site functions used as default observables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SiteFunction {
    Tanh,
    Cos,
    Sin,
}

impl SiteFunction {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            SiteFunction::Tanh => x.tanh(),
            SiteFunction::Cos => x.cos(),
            SiteFunction::Sin => x.sin(),
        }
    }

    /// Multiplication by this function at `site`.
    pub fn at(self, site: Site, grid: &GridSpec) -> Result<LocalObservable, GridError> {
        LocalObservable::multiplication(vec![site], grid, |x| self.eval(x[0]))
    }
}
