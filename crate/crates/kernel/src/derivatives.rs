use crate::{KernelError, KernelField};
use heatcorr_interaction::LatticePotential;
use heatcorr_lattice::{linf_dist, Site};
use serde::Serialize;

fn stencil(order: usize) -> (&'static [i64], &'static [f64]) {
    match order {
        1 => (&[-1, 1], &[-0.5, 0.5]),
        2 => (&[-1, 0, 1], &[1.0, -2.0, 1.0]),
        3 => (&[-2, -1, 1, 2], &[-0.5, 1.0, -1.0, 0.5]),
        _ => panic!("derivative order {order} is not supported"),
    }
}

/// Central-difference partial derivative of `psi` at `(x, y)`.
///
/// Axes `0..N` are the `x` coordinates and `N..2N` the `y` coordinates; a
/// repeated axis means a higher derivative along it. Returns `None` when the
/// stencil leaves the valid region.
pub fn partial(field: &KernelField, x: &[usize], y: &[usize], axes: &[usize]) -> Option<f64> {
    let n_sites = field.n_sites();
    let n = field.grid().points as i64;
    let dx = field.grid().spacing();
    let mut distinct: Vec<(usize, usize)> = Vec::new();
    for &a in axes {
        match distinct.iter_mut().find(|(b, _)| *b == a) {
            Some(e) => e.1 += 1,
            None => distinct.push((a, 1)),
        }
    }
    let mut point: Vec<i64> = x.iter().chain(y).map(|&i| i as i64).collect();
    let base = point.clone();
    let mut total = 0.0;
    let mut choice = vec![0usize; distinct.len()];
    loop {
        let mut coef = 1.0;
        point.copy_from_slice(&base);
        for (d, &(axis, order)) in distinct.iter().enumerate() {
            let (off, c) = stencil(order);
            point[axis] += off[choice[d]];
            coef *= c[choice[d]];
        }
        if point.iter().any(|&p| p < 0 || p >= n) {
            return None;
        }
        let xs: Vec<usize> = point[..n_sites].iter().map(|&p| p as usize).collect();
        let ys: Vec<usize> = point[n_sites..].iter().map(|&p| p as usize).collect();
        total += coef * field.psi_at(&xs, &ys)?;
        let mut d = distinct.len();
        loop {
            if d == 0 {
                return Some(total / dx.powi(axes.len() as i32));
            }
            d -= 1;
            if choice[d] + 1 < stencil(distinct[d].1).0.len() {
                choice[d] += 1;
                break;
            }
            choice[d] = 0;
        }
    }
}

/// Which weighted norm of the `m`-th `x`-differential to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    /// Supremum over the first `m - 1` indices of a weighted sum over the last
    /// (for `m = 1` with sets: a weighted sum over all sites; without sets: the
    /// supremum over sites).
    Row,
    /// Supremum over all index tuples.
    Entry,
}

/// Sets entering the weight exponent besides the derivative sites.
#[derive(Clone, Copy, Debug, Default)]
pub struct WeightSets<'a> {
    pub first: Option<&'a [Site]>,
    pub second: Option<&'a [Site]>,
}

fn spread(field: &KernelField, slots: &[usize], sets: &WeightSets) -> i64 {
    let sites = field.sites();
    let mut items: Vec<Vec<Site>> = slots.iter().map(|&s| vec![sites[s].clone()]).collect();
    items.extend(sets.first.map(|s| s.to_vec()));
    items.extend(sets.second.map(|s| s.to_vec()));
    let mut best = 0;
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            best = best.max(linf_dist(&items[i], &items[j]).unwrap_or(0));
        }
    }
    best
}

/// Weighted norm of `d^m_x psi`, maximised over the valid points.
pub fn weighted_norm(field: &KernelField, m: usize, eps: f64, sets: WeightSets, kind: NormKind) -> Result<f64, KernelError> {
    if !(1..=3).contains(&m) {
        return Err(KernelError::InvalidArgument("norm order must be 1, 2 or 3".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(heatcorr_interaction::InteractionError::DecayOutOfRange.into());
    }
    let n_sites = field.n_sites();
    let has_sets = sets.first.is_some() || sets.second.is_some();
    let tuples: Vec<Vec<usize>> = {
        let mut out = vec![vec![]];
        for _ in 0..m {
            out = out.into_iter().flat_map(|t| (0..n_sites).map(move |l| [t.clone(), vec![l]].concat())).collect();
        }
        out
    };
    let weights: Vec<f64> = tuples.iter().map(|tu| eps.powi(spread(field, tu, &sets) as i32)).collect();
    let dim = field.dim();
    let mut best = 0.0f64;
    for xi in 0..dim {
        let xm = field.multi(xi);
        for yi in 0..dim {
            if !field.mask()[field.index(xi, yi)] {
                continue;
            }
            let ym = field.multi(yi);
            let vals: Option<Vec<f64>> = tuples.iter().map(|tu| partial(field, &xm, &ym, tu).map(f64::abs)).collect();
            let Some(vals) = vals else { continue };
            let ratios: Vec<f64> = vals.iter().zip(&weights).map(|(v, w)| v / w).collect();
            let value = match kind {
                NormKind::Entry => ratios.iter().cloned().fold(0.0, f64::max),
                NormKind::Row if m == 1 && !has_sets => ratios.iter().cloned().fold(0.0, f64::max),
                NormKind::Row => ratios.chunks(n_sites).map(|c| c.iter().sum::<f64>()).fold(0.0, f64::max),
            };
            best = best.max(value);
        }
    }
    Ok(best)
}

/// `sup_l |grad_(x_l, y_l) psi|` over the valid points.
pub fn gradient_sup(field: &KernelField) -> f64 {
    let n_sites = field.n_sites();
    let dim = field.dim();
    let mut best = 0.0f64;
    for xi in 0..dim {
        let xm = field.multi(xi);
        for yi in 0..dim {
            if !field.mask()[field.index(xi, yi)] {
                continue;
            }
            let ym = field.multi(yi);
            for l in 0..n_sites {
                if let (Some(gx), Some(gy)) = (partial(field, &xm, &ym, &[l]), partial(field, &xm, &ym, &[n_sites + l])) {
                    best = best.max(gx.hypot(gy));
                }
            }
        }
    }
    best
}

/// Supremum of the residual of the phase equation, evaluated with centred
/// differences in `t` (fields at `t - dt`, `t`, `t + dt`) and in `x`.
#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResidualReport {
    pub sup: f64,
    pub points: usize,
}

pub fn residual_check(
    before: &KernelField,
    at: &KernelField,
    after: &KernelField,
    potential: &LatticePotential,
    min_relative: f64,
) -> Result<ResidualReport, KernelError> {
    let dt = 0.5 * (after.t() - before.t());
    if !(dt > 0.0) || (at.t() - before.t() - dt).abs() > 1e-12 * at.t() {
        return Err(KernelError::Incompatible("times must be equally spaced and increasing".into()));
    }
    if before.dim() != at.dim() || after.dim() != at.dim() || potential.len() != at.n_sites() {
        return Err(KernelError::Incompatible("fields live on different grids".into()));
    }
    let n_sites = at.n_sites();
    let t = at.t();
    let h2 = at.hbar() * at.hbar();
    let umax = at.u().iter().cloned().fold(0.0, f64::max);
    let dim = at.dim();
    let mut sup = 0.0f64;
    let mut points = 0;
    for xi in 0..dim {
        let xm = at.multi(xi);
        let xc = at.coords(xi);
        let v = potential.value(&xc);
        for yi in 0..dim {
            let k = at.index(xi, yi);
            if !(at.mask()[k] && before.mask()[k] && after.mask()[k]) || at.u()[k] < min_relative * umax {
                continue;
            }
            let ym = at.multi(yi);
            let yc = at.coords(yi);
            let mut drift = 0.0;
            let mut lap = 0.0;
            let mut grad2 = 0.0;
            let mut ok = true;
            for l in 0..n_sites {
                match (partial(at, &xm, &ym, &[l]), partial(at, &xm, &ym, &[l, l])) {
                    (Some(g), Some(d2)) => {
                        drift += (xc[l] - yc[l]) / t * g;
                        lap += d2;
                        grad2 += g * g;
                    }
                    _ => ok = false,
                }
            }
            if !ok {
                continue;
            }
            let dpsi = (after.psi()[k] - before.psi()[k]) / (2.0 * dt);
            let r = dpsi + drift - 0.5 * h2 * lap - v + 0.5 * h2 * grad2;
            sup = sup.max(r.abs());
            points += 1;
        }
    }
    if points == 0 {
        return Err(KernelError::Underflow);
    }
    Ok(ResidualReport { sup, points })
}

/// `S_u psi (x, y) = psi(x + u, y + u) - psi(x, y)` for a shift `u` given in
/// grid steps per site.
pub fn translate_difference(field: &KernelField, shift: &[i64]) -> Result<KernelField, KernelError> {
    if shift.len() != field.n_sites() {
        return Err(KernelError::Incompatible("shift must have one entry per site".into()));
    }
    let n = field.grid().points as i64;
    let dim = field.dim();
    let mut psi = vec![f64::NAN; dim * dim];
    let mut mask = vec![false; dim * dim];
    for xi in 0..dim {
        let xm = field.multi(xi);
        let xs: Option<Vec<usize>> = xm.iter().zip(shift).map(|(&i, &s)| usize::try_from(i as i64 + s).ok().filter(|&v| (v as i64) < n)).collect();
        let Some(xs) = xs else { continue };
        for yi in 0..dim {
            let k = field.index(xi, yi);
            if !field.mask()[k] {
                continue;
            }
            let ym = field.multi(yi);
            let ys: Option<Vec<usize>> = ym.iter().zip(shift).map(|(&i, &s)| usize::try_from(i as i64 + s).ok().filter(|&v| (v as i64) < n)).collect();
            let Some(ys) = ys else { continue };
            if let Some(p) = field.psi_at(&xs, &ys) {
                psi[k] = p - field.psi()[k];
                mask[k] = true;
            }
        }
    }
    Ok(field.with_values(psi, mask))
}
