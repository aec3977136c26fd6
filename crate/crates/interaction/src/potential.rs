use crate::{InteractionError, InteractionSpec, PairKind, SitePotential};
use heatcorr_lattice::{linf, LatticeBox, Site};

/// One pair contribution `weight * g(x_a, x_b)` between site slots `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairTerm {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

/// A potential on a finite ordered list of sites:
/// `sum_l c_l A(x_l) + sum_k w_k g(x_{a_k}, x_{b_k})`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticePotential {
    sites: Vec<Site>,
    site_term: SitePotential,
    site_weights: Vec<f64>,
    pair_kind: PairKind,
    pairs: Vec<PairTerm>,
}

impl LatticePotential {
    /// The full potential on `sites`, summing over ordered pairs.
    pub fn full(spec: &InteractionSpec, sites: &[Site]) -> Result<Self, InteractionError> {
        spec.validate()?;
        check_sites(spec, sites)?;
        let mut pairs = Vec::new();
        if !spec.pair.is_trivial() {
            for (a, sa) in sites.iter().enumerate() {
                for (b, sb) in sites.iter().enumerate() {
                    if a != b {
                        pairs.push(PairTerm { a, b, weight: spec.pair_weight(linf(sa, sb)) });
                    }
                }
            }
        }
        Ok(LatticePotential {
            sites: sites.to_vec(),
            site_term: spec.site,
            site_weights: vec![1.0; sites.len()],
            pair_kind: spec.pair.kind,
            pairs,
        })
    }

    /// The full potential on every site of a box.
    pub fn on_box(spec: &InteractionSpec, lattice: &LatticeBox) -> Result<Self, InteractionError> {
        Self::full(spec, &lattice.sites())
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn site_term(&self) -> SitePotential {
        self.site_term
    }

    pub fn site_weights(&self) -> &[f64] {
        &self.site_weights
    }

    pub fn pair_kind(&self) -> PairKind {
        self.pair_kind
    }

    pub fn pairs(&self) -> &[PairTerm] {
        &self.pairs
    }

    /// Whether any two distinct sites interact.
    pub fn is_coupled(&self) -> bool {
        self.pair_kind != PairKind::Zero && self.pairs.iter().any(|p| p.weight != 0.0)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.sites.len());
        let mut v = 0.0;
        for (w, &xi) in self.site_weights.iter().zip(x) {
            if *w != 0.0 {
                v += w * self.site_term.value(xi);
            }
        }
        for p in &self.pairs {
            v += p.weight * self.pair_kind.value(x[p.a], x[p.b]);
        }
        v
    }

    /// Mixed partial derivative `d/dx_{i_1} ... d/dx_{i_k} V` for `k <= 3`.
    pub fn partial(&self, x: &[f64], idx: &[usize]) -> f64 {
        if idx.is_empty() {
            return self.value(x);
        }
        let mut out = 0.0;
        if idx.iter().all(|&i| i == idx[0]) {
            let i = idx[0];
            out += self.site_weights[i] * self.site_term.derivative(idx.len(), x[i]);
        }
        for p in &self.pairs {
            if idx.iter().all(|&i| i == p.a || i == p.b) {
                let na = idx.iter().filter(|&&i| i == p.a).count();
                let nb = idx.len() - na;
                out += p.weight * self.pair_kind.derivative(na, nb, x[p.a], x[p.b]);
            }
        }
        out
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (0..self.len()).map(|i| self.partial(x, &[i])).collect()
    }

    /// The potential `self - theta * other` on the same sites.
    pub fn minus_scaled(&self, theta: f64, other: &LatticePotential) -> Result<Self, InteractionError> {
        if other.sites != self.sites {
            return Err(InteractionError::InvalidParameter("potentials live on different sites".into()));
        }
        if other.site_term != self.site_term && other.site_weights.iter().any(|&w| w != 0.0) {
            return Err(InteractionError::InvalidParameter("incompatible site terms".into()));
        }
        if other.pair_kind != self.pair_kind && !other.pairs.is_empty() {
            return Err(InteractionError::InvalidParameter("incompatible pair kinds".into()));
        }
        let mut out = self.clone();
        for (w, o) in out.site_weights.iter_mut().zip(&other.site_weights) {
            *w -= theta * o;
        }
        out.pairs.extend(other.pairs.iter().map(|p| PairTerm { weight: -theta * p.weight, ..*p }));
        Ok(out)
    }

    /// Restrict to a subset of slots, keeping only the terms inside it.
    pub fn restrict(&self, slots: &[usize]) -> Self {
        let map = |i: usize| slots.iter().position(|&s| s == i);
        let pairs = self
            .pairs
            .iter()
            .filter_map(|p| Some(PairTerm { a: map(p.a)?, b: map(p.b)?, weight: p.weight }))
            .collect();
        LatticePotential {
            sites: slots.iter().map(|&i| self.sites[i].clone()).collect(),
            site_term: self.site_term,
            site_weights: slots.iter().map(|&i| self.site_weights[i]).collect(),
            pair_kind: self.pair_kind,
            pairs,
        }
    }
}

fn check_sites(spec: &InteractionSpec, sites: &[Site]) -> Result<(), InteractionError> {
    if sites.is_empty() {
        return Err(heatcorr_lattice::LatticeError::EmptyGeometry.into());
    }
    if let Some(s) = sites.iter().find(|s| s.dim() != spec.dim) {
        return Err(heatcorr_lattice::LatticeError::DimensionMismatch { expected: spec.dim, found: s.dim() }.into());
    }
    Ok(())
}

/// `V_Lambda(x)` for a configuration indexed like `lattice.sites()`.
pub fn potential_value(spec: &InteractionSpec, lattice: &LatticeBox, x: &[f64]) -> Result<f64, InteractionError> {
    if x.len() != lattice.len() {
        return Err(heatcorr_lattice::LatticeError::FieldMismatch { expected: lattice.len(), found: x.len() }.into());
    }
    Ok(LatticePotential::on_box(spec, lattice)?.value(x))
}

/// Cross interaction `sum_{l in part1, m in part2} B_lm(x_l, x_m)` on the
/// concatenated site list `part1 ++ part2`.
///
/// Each cross pair appears once here, whereas the full potential counts it in
/// both orders, so `V_total = V_1 + V_2 + 2 * V_cross`.
pub fn interaction_split(
    spec: &InteractionSpec,
    part1: &[Site],
    part2: &[Site],
) -> Result<LatticePotential, InteractionError> {
    spec.validate()?;
    if part1.iter().any(|s| part2.contains(s)) {
        return Err(InteractionError::Overlap);
    }
    let sites: Vec<Site> = part1.iter().chain(part2).cloned().collect();
    check_sites(spec, &sites)?;
    let mut pairs = Vec::new();
    if !spec.pair.is_trivial() {
        for (a, sa) in part1.iter().enumerate() {
            for (b, sb) in part2.iter().enumerate() {
                pairs.push(PairTerm { a, b: part1.len() + b, weight: spec.pair_weight(linf(sa, sb)) });
            }
        }
    }
    Ok(LatticePotential {
        sites,
        site_term: spec.site,
        site_weights: vec![0.0; part1.len() + part2.len()],
        pair_kind: spec.pair.kind,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PairCoupling;

    fn chain(n: i64) -> Vec<Site> {
        (0..n).map(Site::scalar).collect()
    }

    #[test]
    fn two_site_value() {
        let spec = InteractionSpec::new(SitePotential::PseudoLinearWell { strength: 1.0 }, PairCoupling::cosine_diff(0.1), 0.2);
        let v = potential_value(&spec, &LatticeBox::chain(2).unwrap(), &[0.0, 0.0]).unwrap();
        assert!((v - 2.04).abs() < 1e-14);
    }

    #[test]
    fn split_single_pair() {
        let spec = InteractionSpec::new(SitePotential::Zero, PairCoupling::cosine_diff(0.3), 0.2);
        let cross = interaction_split(&spec, &[Site::scalar(0)], &[Site::scalar(1)]).unwrap();
        assert!((cross.value(&[0.0, 0.0]) - 0.3 * 0.2).abs() < 1e-15);
        let far = interaction_split(&spec, &[Site::scalar(0)], &[Site::scalar(3)]).unwrap();
        assert!((far.value(&[0.0, 0.0]) - 0.3 * 0.008).abs() < 1e-15);
    }

    #[test]
    fn split_accounts_for_both_orders() {
        let spec = InteractionSpec::new(SitePotential::PseudoLinearWell { strength: 0.7 }, PairCoupling::bounded_product(0.4), 0.3);
        let sites = chain(4);
        let x = [0.3, -1.2, 0.8, 2.0];
        let total = LatticePotential::full(&spec, &sites).unwrap().value(&x);
        let v1 = LatticePotential::full(&spec, &sites[..2]).unwrap().value(&x[..2]);
        let v2 = LatticePotential::full(&spec, &sites[2..]).unwrap().value(&x[2..]);
        let cross = interaction_split(&spec, &sites[..2], &sites[2..]).unwrap().value(&x);
        assert!((total - v1 - v2 - 2.0 * cross).abs() < 1e-13);
    }

    #[test]
    fn interpolation_removes_cross_terms() {
        let spec = InteractionSpec::new(SitePotential::Linear { slope: 0.5 }, PairCoupling::cosine_diff(0.2), 0.4);
        let sites = chain(3);
        let full = LatticePotential::full(&spec, &sites).unwrap();
        let cross = interaction_split(&spec, &sites[..1], &sites[1..]).unwrap();
        let decoupled = full.minus_scaled(2.0, &cross).unwrap();
        let x = [0.1, 0.9, -0.4];
        let expect = LatticePotential::full(&spec, &sites[..1]).unwrap().value(&x[..1])
            + LatticePotential::full(&spec, &sites[1..]).unwrap().value(&x[1..]);
        assert!((decoupled.value(&x) - expect).abs() < 1e-14);
        let restricted = full.restrict(&[1, 2]);
        assert!((restricted.value(&x[1..]) - LatticePotential::full(&spec, &sites[1..]).unwrap().value(&x[1..])).abs() < 1e-14);
    }

    #[test]
    fn overlapping_split_rejected() {
        let spec = InteractionSpec::new(SitePotential::Zero, PairCoupling::cosine_diff(0.3), 0.2);
        assert_eq!(interaction_split(&spec, &chain(2), &chain(1)), Err(InteractionError::Overlap));
    }

    #[test]
    fn partials_match_differences() {
        let spec = InteractionSpec::new(SitePotential::PseudoLinearWell { strength: 1.0 }, PairCoupling::cosine_diff(0.3), 0.5);
        let v = LatticePotential::full(&spec, &chain(3)).unwrap();
        let x = [0.2, -0.5, 1.1];
        let h = 1e-5;
        for i in 0..3 {
            for j in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[j] += h;
                xm[j] -= h;
                let fd = (v.partial(&xp, &[i]) - v.partial(&xm, &[i])) / (2.0 * h);
                assert!((fd - v.partial(&x, &[i, j])).abs() < 1e-8);
                for k in 0..3 {
                    let fd3 = (v.partial(&xp, &[i, k]) - v.partial(&xm, &[i, k])) / (2.0 * h);
                    assert!((fd3 - v.partial(&x, &[i, k, j])).abs() < 1e-7);
                }
            }
        }
    }
}
