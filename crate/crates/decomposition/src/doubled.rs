use crate::DecompositionError;
use heatcorr_exec::{map_range, Execution};
use heatcorr_kernel::KernelField;
use heatcorr_lattice::{enumerate_boxes, interior_boxes, LatticeBox};
use serde::Serialize;

/// One term `T_Q psi` of the doubled decomposition on the kernel grid.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecompositionTerm {
    pub region: LatticeBox,
    pub diam: i64,
    #[serde(skip)]
    pub values: Vec<f64>,
    #[serde(skip)]
    pub mask: Vec<bool>,
    pub sup_norm: f64,
}

impl DecompositionTerm {
    pub fn value(&self, k: usize) -> Option<f64> {
        self.mask[k].then(|| self.values[k])
    }
}

struct Projector {
    n: usize,
    origin: usize,
}

impl Projector {
    fn new(field: &KernelField, lattice: &LatticeBox) -> Result<Self, DecompositionError> {
        if field.sites() != lattice.sites().as_slice() {
            return Err(DecompositionError::Incompatible("kernel sites differ from the lattice".into()));
        }
        let origin = field.grid().origin_index().ok_or(DecompositionError::NoOrigin)?;
        Ok(Projector { n: field.grid().points, origin })
    }

    /// `psi(Pi_keep (x, y))`; `None` when the projected point is off-grid or untrusted.
    fn eval(&self, field: &KernelField, keep: &[bool], x: &[usize], y: &[usize], px: &mut [usize], py: &mut [usize]) -> Option<f64> {
        for s in 0..keep.len() {
            if keep[s] {
                px[s] = x[s];
                py[s] = y[s];
            } else {
                let j = (self.origin + y[s]).checked_sub(x[s])?;
                if j >= self.n {
                    return None;
                }
                px[s] = self.origin;
                py[s] = j;
            }
        }
        field.psi_at(px, py)
    }
}

fn membership(lattice: &LatticeBox, region: &LatticeBox) -> Vec<bool> {
    lattice.sites().iter().map(|s| region.contains(s)).collect()
}

/// Doubled `T_Q psi(x, y) = sum_{Q'} (-1)^{m(Q,Q')} [psi(Pi_{Q'}(x, y)) - psi(0, y - x)]`.
pub fn t_q_doubled(
    field: &KernelField,
    lattice: &LatticeBox,
    q: &LatticeBox,
    exec: Execution,
) -> Result<DecompositionTerm, DecompositionError> {
    let proj = Projector::new(field, lattice)?;
    if !lattice.contains_box(q) {
        return Err(heatcorr_lattice::LatticeError::OutsideLattice(q.lo().to_vec()).into());
    }
    let parts: Vec<(Vec<bool>, f64)> =
        interior_boxes(q).into_iter().map(|ib| (membership(lattice, &ib.region), ib.sign())).collect();
    let none = vec![false; lattice.len()];
    let dim = field.dim();
    let rows: Vec<Vec<Option<f64>>> = map_range(exec, dim, |xi| {
        let x = field.multi(xi);
        let mut px = vec![0; x.len()];
        let mut py = vec![0; x.len()];
        (0..dim)
            .map(|yi| {
                if !field.mask()[field.index(xi, yi)] {
                    return None;
                }
                let y = field.multi(yi);
                let gauge = proj.eval(field, &none, &x, &y, &mut px, &mut py)?;
                let mut total = 0.0;
                for (keep, sign) in &parts {
                    total += sign * (proj.eval(field, keep, &x, &y, &mut px, &mut py)? - gauge);
                }
                Some(total)
            })
            .collect()
    });
    let mut values = Vec::with_capacity(dim * dim);
    let mut mask = Vec::with_capacity(dim * dim);
    let mut sup_norm = 0.0f64;
    for v in rows.into_iter().flatten() {
        mask.push(v.is_some());
        let v = v.unwrap_or(f64::NAN);
        if v.is_finite() {
            sup_norm = sup_norm.max(v.abs());
        }
        values.push(v);
    }
    Ok(DecompositionTerm { region: q.clone(), diam: q.diam(), values, mask, sup_norm })
}

/// All terms for boxes of `lattice` up to `max_diam`, computed concurrently.
pub fn decompose(
    field: &KernelField,
    lattice: &LatticeBox,
    max_diam: i64,
    exec: Execution,
) -> Result<Vec<DecompositionTerm>, DecompositionError> {
    let boxes = enumerate_boxes(lattice, max_diam);
    boxes.iter().map(|q| t_q_doubled(field, lattice, q, exec)).collect()
}

/// `sup |psi(x, y) - psi(0, y - x) - sum_Q T_Q psi(x, y)|` over the points where
/// every term is defined, together with the number of such points.
pub fn telescoping_defect_doubled(
    field: &KernelField,
    lattice: &LatticeBox,
    exec: Execution,
) -> Result<(f64, usize), DecompositionError> {
    let proj = Projector::new(field, lattice)?;
    let terms = decompose(field, lattice, i64::MAX, exec)?;
    let none = vec![false; lattice.len()];
    let dim = field.dim();
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut px = vec![0; lattice.len()];
    let mut py = vec![0; lattice.len()];
    for xi in 0..dim {
        let x = field.multi(xi);
        for yi in 0..dim {
            let k = field.index(xi, yi);
            let Some(psi) = field.psi()[k].is_finite().then(|| field.psi()[k]).filter(|_| field.mask()[k]) else {
                continue;
            };
            let y = field.multi(yi);
            let Some(gauge) = proj.eval(field, &none, &x, &y, &mut px, &mut py) else { continue };
            let sum: Option<f64> = terms.iter().map(|t| t.value(k)).sum();
            if let Some(sum) = sum {
                worst = worst.max((psi - gauge - sum).abs());
                count += 1;
            }
        }
    }
    Ok((worst, count))
}

/// Largest change of `T_Q psi` on the diagonal when only coordinates off `Q` move.
pub fn diagonal_support_defect(field: &KernelField, lattice: &LatticeBox, term: &DecompositionTerm) -> f64 {
    let inside = membership(lattice, &term.region);
    let mut seen: std::collections::HashMap<Vec<usize>, f64> = std::collections::HashMap::new();
    let mut worst = 0.0f64;
    for xi in 0..field.dim() {
        let Some(v) = term.value(field.index(xi, xi)) else { continue };
        let key: Vec<usize> = field.multi(xi).into_iter().zip(&inside).filter(|(_, &k)| k).map(|(i, _)| i).collect();
        let first = *seen.entry(key).or_insert(v);
        worst = worst.max((v - first).abs());
    }
    worst
}
