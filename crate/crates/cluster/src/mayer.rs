//! Mayer factors of the doubled phase `psi~(X) = psi(x', y') + psi(x'', y'')`.
//!
//! Every doubled quantity is evaluated pointwise from the single-system terms
//! `T_Q psi`, since `T_Q` acts identically on both copies.

use crate::{ClusterError, SymmetryElement};
use heatcorr_decomposition::{decompose, DecompositionTerm};
use heatcorr_exec::Execution;
use heatcorr_kernel::KernelField;
use heatcorr_lattice::{LatticeBox, Site};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

/// Point `X = (x', x'', y', y'')` given by per-site grid indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DoubledPoint {
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
    pub y1: Vec<usize>,
    pub y2: Vec<usize>,
}

impl DoubledPoint {
    /// `sigma X`: exchange the copies on the swapped sites.
    pub fn act(&self, sigma: &SymmetryElement) -> DoubledPoint {
        let mut p = self.clone();
        for (s, &sw) in sigma.swaps.iter().enumerate() {
            if sw {
                std::mem::swap(&mut p.x1[s], &mut p.x2[s]);
                std::mem::swap(&mut p.y1[s], &mut p.y2[s]);
            }
        }
        p
    }

    pub fn is_diagonal(&self) -> bool {
        self.x1 == self.y1 && self.x2 == self.y2
    }
}

/// Factor fields `M_Q`, `f_Q`, `f_l` and `Phi_0` of the Mayer expansion.
pub struct MayerFactors {
    field: KernelField,
    lattice: LatticeBox,
    sites: Vec<Site>,
    points: Vec<DecompositionTerm>,
    boxes: Vec<DecompositionTerm>,
    /// `M_Q` of the doubled phase, aligned with `boxes()`.
    sups: Vec<f64>,
    gauge: Vec<Option<f64>>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FactorSummary {
    pub region: LatticeBox,
    pub diam: i64,
    pub m_q: f64,
    pub sup_f: f64,
}

impl MayerFactors {
    /// Build the factors from a single-system kernel field on `lattice`, with
    /// non-point boxes up to `max_diam`.
    pub fn new(field: KernelField, lattice: &LatticeBox, max_diam: i64, exec: Execution) -> Result<Self, ClusterError> {
        let terms = decompose(&field, lattice, max_diam, exec)?;
        let (points, boxes): (Vec<_>, Vec<_>) = terms.into_iter().partition(|t| t.diam == 0);
        let mut sups = Vec::with_capacity(boxes.len());
        for b in &boxes {
            let sup = b.values.iter().zip(&b.mask).filter(|(_, &m)| m).map(|(v, _)| *v).fold(f64::NEG_INFINITY, f64::max);
            if !sup.is_finite() {
                return Err(ClusterError::InsufficientSupport);
            }
            sups.push(2.0 * sup);
        }
        let origin = field.grid().origin_index().ok_or(heatcorr_decomposition::DecompositionError::NoOrigin)?;
        let n = field.grid().points;
        let dim = field.dim();
        let mut gauge = vec![None; dim * dim];
        let zero = vec![origin; lattice.len()];
        let configs: Vec<Vec<usize>> = (0..dim).map(|i| field.multi(i)).collect();
        let base = field.flat(&zero) * dim;
        for (xi, x) in configs.iter().enumerate() {
            for (yi, y) in configs.iter().enumerate() {
                let mut flat = 0;
                let mut inside = true;
                for (&a, &b) in x.iter().zip(y) {
                    match (origin + b).checked_sub(a).filter(|&j| j < n) {
                        Some(j) => flat = flat * n + j,
                        None => {
                            inside = false;
                            break;
                        }
                    }
                }
                if inside && field.mask()[base + flat] {
                    gauge[xi * dim + yi] = Some(field.psi()[base + flat]);
                }
            }
        }
        Ok(MayerFactors { sites: lattice.sites(), lattice: lattice.clone(), field, points, boxes, sups, gauge })
    }

    pub fn field(&self) -> &KernelField {
        &self.field
    }

    pub fn lattice(&self) -> &LatticeBox {
        &self.lattice
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    /// Non-point boxes carrying a factor `f_Q`.
    pub fn boxes(&self) -> Vec<LatticeBox> {
        self.boxes.iter().map(|b| b.region.clone()).collect()
    }

    pub fn m_q(&self, q: usize) -> f64 {
        self.sups[q]
    }

    fn box_index(&self, q: &LatticeBox) -> Option<usize> {
        self.boxes.iter().position(|b| &b.region == q)
    }

    fn pair(&self, x: &[usize], y: &[usize]) -> usize {
        self.field.index(self.field.flat(x), self.field.flat(y))
    }

    fn keys(&self, p: &DoubledPoint) -> (usize, usize) {
        (self.pair(&p.x1, &p.y1), self.pair(&p.x2, &p.y2))
    }

    fn doubled_term(term: &DecompositionTerm, k: (usize, usize)) -> Option<f64> {
        Some(term.value(k.0)? + term.value(k.1)?)
    }

    /// `f_Q(X) = exp(M_Q - T_Q psi~(X)) - 1`.
    pub fn f_box(&self, q: usize, p: &DoubledPoint) -> Option<f64> {
        let t = Self::doubled_term(&self.boxes[q], self.keys(p))?;
        Some((self.sups[q] - t).exp_m1())
    }

    /// `prod_l f_{l}(X) = exp(-sum_l T_{l} psi~(X))`.
    pub fn f_points(&self, p: &DoubledPoint) -> Option<f64> {
        let k = self.keys(p);
        let mut s = 0.0;
        for term in &self.points {
            s += Self::doubled_term(term, k)?;
        }
        Some((-s).exp())
    }

    fn free_kernel(&self, x: &[usize], y: &[usize]) -> f64 {
        let th2 = self.field.t() * self.field.hbar().powi(2);
        let g = self.field.grid();
        let d2: f64 = x.iter().zip(y).map(|(&a, &b)| (g.point(a) - g.point(b)).powi(2)).sum();
        (2.0 * PI * th2).powf(-0.5 * x.len() as f64) * (-d2 / (2.0 * th2)).exp()
    }

    /// `Phi_0(X) = U~0(X) exp(-psi~(0, y - x)) exp(-sum_Q M_Q)`.
    pub fn phi0(&self, p: &DoubledPoint) -> Option<f64> {
        let (k1, k2) = self.keys(p);
        let g = self.gauge[k1]? + self.gauge[k2]?;
        let m: f64 = self.sups.iter().sum();
        Some(self.free_kernel(&p.x1, &p.y1) * self.free_kernel(&p.x2, &p.y2) * (-g - m).exp())
    }

    /// `K_Gamma(X)` for the family given by box indices.
    pub fn k_gamma(&self, family: &[usize], p: &DoubledPoint) -> Option<f64> {
        let mut v = self.phi0(p)? * self.f_points(p)?;
        for &q in family {
            v *= self.f_box(q, p)?;
        }
        Some(v)
    }

    /// Resolve boxes to indices; every box must carry a factor.
    pub fn family(&self, boxes: &[LatticeBox]) -> Result<Vec<usize>, ClusterError> {
        boxes
            .iter()
            .map(|q| {
                self.box_index(q)
                    .ok_or_else(|| ClusterError::InvalidArgument(format!("box {:?}..{:?} has no factor", q.lo(), q.hi())))
            })
            .collect()
    }

    /// `U~(X) = U(x', y') U(x'', y'')` straight from the kernel.
    pub fn doubled_kernel(&self, p: &DoubledPoint) -> f64 {
        let (k1, k2) = self.keys(p);
        self.field.u()[k1] * self.field.u()[k2]
    }

    pub fn summary(&self) -> Vec<FactorSummary> {
        self.boxes
            .iter()
            .zip(&self.sups)
            .map(|(b, &m)| {
                let inf = b.values.iter().zip(&b.mask).filter(|(_, &k)| k).map(|(v, _)| *v).fold(f64::INFINITY, f64::min);
                FactorSummary { region: b.region.clone(), diam: b.diam, m_q: m, sup_f: (m - 2.0 * inf).exp_m1() }
            })
            .collect()
    }

    /// Random points whose two copies both lie in the trusted region.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<DoubledPoint> {
        let dim = self.field.dim();
        let valid: Vec<usize> = (0..dim * dim).filter(|&k| self.field.mask()[k] && self.gauge[k].is_some()).collect();
        if valid.is_empty() {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let a = valid[rng.gen_range(0..valid.len())];
                let b = valid[rng.gen_range(0..valid.len())];
                DoubledPoint {
                    x1: self.field.multi(a / dim),
                    y1: self.field.multi(a % dim),
                    x2: self.field.multi(b / dim),
                    y2: self.field.multi(b % dim),
                }
            })
            .collect()
    }

    /// Diagonal points `(x', x'', x', x'')`, subsampled with the given stride.
    pub fn diagonal_points(&self, stride: usize) -> Vec<DoubledPoint> {
        let dim = self.field.dim();
        let ok: Vec<usize> = (0..dim).filter(|&i| self.field.mask()[i * dim + i]).collect();
        let mut out = Vec::new();
        for (a, &i) in ok.iter().enumerate() {
            for (b, &j) in ok.iter().enumerate() {
                if (a * ok.len() + b) % stride.max(1) == 0 {
                    let (x1, x2) = (self.field.multi(i), self.field.multi(j));
                    out.push(DoubledPoint { y1: x1.clone(), y2: x2.clone(), x1, x2 });
                }
            }
        }
        out
    }
}

/// Every subset of the factor boxes, as index lists.
pub fn all_families(factors: &MayerFactors, budget: usize) -> Result<Vec<Vec<usize>>, ClusterError> {
    let m = factors.boxes.len();
    if m > budget {
        return Err(ClusterError::SubsetBudget(m));
    }
    Ok((0..1usize << m).map(|bits| (0..m).filter(|q| bits >> q & 1 == 1).collect()).collect())
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReconstructionReport {
    pub families: usize,
    pub points: usize,
    pub max_relative_error: f64,
}

/// Compare `sum_Gamma K_Gamma` with `U~` at the given points.
pub fn mayer_reconstruct(factors: &MayerFactors, points: &[DoubledPoint]) -> Result<ReconstructionReport, ClusterError> {
    let families = all_families(factors, 12)?;
    let mut worst = 0.0f64;
    let mut used = 0;
    for p in points {
        let sum: Option<f64> = families.iter().map(|g| factors.k_gamma(g, p)).sum();
        let Some(sum) = sum else { continue };
        let exact = factors.doubled_kernel(p);
        worst = worst.max((sum - exact).abs() / exact);
        used += 1;
    }
    if used == 0 {
        return Err(ClusterError::InsufficientSupport);
    }
    Ok(ReconstructionReport { families: families.len(), points: used, max_relative_error: worst })
}

/// `W(X)` by signed averaging of `U~` over the group.
pub fn averaged_kernel_direct(factors: &MayerFactors, group: &[SymmetryElement], p: &DoubledPoint) -> f64 {
    let s: f64 = group.iter().map(|g| g.sign as f64 * factors.doubled_kernel(&p.act(g))).sum();
    s / group.len() as f64
}

/// `W(X)` as the signed average of the Mayer terms.
pub fn averaged_kernel_mayer(factors: &MayerFactors, group: &[SymmetryElement], p: &DoubledPoint) -> Result<Option<f64>, ClusterError> {
    if group.len() > 1 << 16 {
        return Err(ClusterError::GroupBudget(group.len()));
    }
    let families = all_families(factors, 12)?;
    let mut total = 0.0;
    for g in group {
        let q = p.act(g);
        for fam in &families {
            match factors.k_gamma(fam, &q) {
                Some(k) => total += g.sign as f64 * k,
                None => return Ok(None),
            }
        }
    }
    Ok(Some(total / group.len() as f64))
}

/// Largest `|sum_sigma sgn(sigma) K_Gamma(sigma X)|` over `points`, and the
/// largest `K_Gamma` seen, as `(signed, scale)`.
pub fn signed_family_sum(
    factors: &MayerFactors,
    family: &[usize],
    group: &[SymmetryElement],
    points: &[DoubledPoint],
) -> (f64, f64) {
    let mut signed = 0.0f64;
    let mut scale = 0.0f64;
    for p in points {
        let mut s = 0.0;
        let mut ok = true;
        for g in group {
            match factors.k_gamma(family, &p.act(g)) {
                Some(k) => {
                    s += g.sign as f64 * k;
                    scale = scale.max(k.abs());
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            signed = signed.max(s.abs());
        }
    }
    (signed, scale)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CancellationReport {
    pub family: Vec<LatticeBox>,
    pub signed_sum: f64,
    pub scale: f64,
    pub points: usize,
}

/// Signed group sum of `K_Gamma` on diagonal points for a non-connecting family.
pub fn diagonal_cancellation_check(
    factors: &MayerFactors,
    family: &[LatticeBox],
    e1: &[Site],
    e2: &[Site],
    points: &[DoubledPoint],
) -> Result<CancellationReport, ClusterError> {
    if heatcorr_lattice::classify_family(family, e1, e2) == heatcorr_lattice::Connectivity::Connecting {
        return Err(ClusterError::Connecting);
    }
    let group = crate::group_elements(factors.sites(), e1, e2)?;
    let idx = factors.family(family)?;
    let (signed_sum, scale) = signed_family_sum(factors, &idx, &group, points);
    Ok(CancellationReport { family: family.to_vec(), signed_sum, scale, points: points.len() })
}

/// Fitted `a` with `sup f_Q <= a eps^diam <Q>^(2d)` over the factor boxes.
pub fn fitted_mayer_constant(factors: &MayerFactors, eps: f64, d: usize) -> f64 {
    factors
        .summary()
        .iter()
        .map(|s| s.sup_f / (eps.powi(s.diam as i32) * ((1 + s.diam) as f64).powi(2 * d as i32)))
        .fold(0.0, f64::max)
}

/// Every family of factor boxes that does not link `e1` to `e2`.
pub fn non_connecting_families(factors: &MayerFactors, e1: &[Site], e2: &[Site]) -> Result<Vec<Vec<LatticeBox>>, ClusterError> {
    let boxes = factors.boxes();
    Ok(all_families(factors, 12)?
        .into_iter()
        .map(|idx| idx.into_iter().map(|q| boxes[q].clone()).collect::<Vec<_>>())
        .filter(|fam| heatcorr_lattice::classify_family(fam, e1, e2) == heatcorr_lattice::Connectivity::NonConnecting)
        .collect())
}
