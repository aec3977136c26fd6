use crate::{LatticeBox, LatticeError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// A point of `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site(pub Vec<i64>);

impl Site {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Site(coords.into())
    }

    /// One-dimensional site.
    pub fn scalar(c: i64) -> Self {
        Site(vec![c])
    }

    pub fn origin(d: usize) -> Self {
        Site(vec![0; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

/// `l^inf` distance between two sites of the same dimension.
pub fn linf(a: &Site, b: &Site) -> i64 {
    debug_assert_eq!(a.dim(), b.dim());
    a.0.iter().zip(&b.0).map(|(x, y)| (x - y).abs()).max().unwrap_or(0)
}

/// Largest pairwise `l^inf` distance; zero for fewer than two sites.
pub fn diameter(sites: &[Site]) -> i64 {
    let mut best = 0;
    for (i, a) in sites.iter().enumerate() {
        for b in &sites[i + 1..] {
            best = best.max(linf(a, b));
        }
    }
    best
}

/// A finite sorted set of sites.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteSet(Vec<Site>);

impl SiteSet {
    pub fn new(sites: impl IntoIterator<Item = Site>) -> Self {
        let set: BTreeSet<Site> = sites.into_iter().collect();
        SiteSet(set.into_iter().collect())
    }

    pub fn sites(&self) -> &[Site] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, s: &Site) -> bool {
        self.0.binary_search(s).is_ok()
    }
}

impl FromIterator<Site> for SiteSet {
    fn from_iter<I: IntoIterator<Item = Site>>(iter: I) -> Self {
        SiteSet::new(iter)
    }
}

/// Anything that denotes a finite set of sites.
pub trait Region {
    fn region_sites(&self) -> Vec<Site>;
}

impl Region for Site {
    fn region_sites(&self) -> Vec<Site> {
        vec![self.clone()]
    }
}

impl Region for SiteSet {
    fn region_sites(&self) -> Vec<Site> {
        self.0.clone()
    }
}

impl Region for LatticeBox {
    fn region_sites(&self) -> Vec<Site> {
        self.sites()
    }
}

impl Region for [Site] {
    fn region_sites(&self) -> Vec<Site> {
        self.to_vec()
    }
}

impl Region for Vec<Site> {
    fn region_sites(&self) -> Vec<Site> {
        self.clone()
    }
}

/// Smallest `l^inf` distance between two regions.
pub fn linf_dist<A: Region + ?Sized, B: Region + ?Sized>(a: &A, b: &B) -> Result<i64, LatticeError> {
    let (sa, sb) = (a.region_sites(), b.region_sites());
    if sa.is_empty() || sb.is_empty() {
        return Err(LatticeError::EmptyGeometry);
    }
    let d = sa[0].dim();
    if let Some(bad) = sa.iter().chain(&sb).find(|s| s.dim() != d) {
        return Err(LatticeError::DimensionMismatch { expected: d, found: bad.dim() });
    }
    let mut best = i64::MAX;
    for x in &sa {
        for y in &sb {
            best = best.min(linf(x, y));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        let a = Site::new([0, 0]);
        let b = Site::new([3, -1]);
        assert_eq!(linf(&a, &b), 3);
        assert_eq!(linf_dist(&a, &b).unwrap(), 3);
        let q = LatticeBox::new(vec![1, 0], vec![2, 0]).unwrap();
        assert_eq!(linf_dist(&a, &q).unwrap(), 1);
        assert_eq!(diameter(&q.sites()), 1);
    }

    #[test]
    fn empty_region_is_rejected() {
        let empty = SiteSet::default();
        assert_eq!(linf_dist(&empty, &Site::scalar(0)), Err(LatticeError::EmptyGeometry));
    }

    #[test]
    fn mixed_dimensions_rejected() {
        let r = linf_dist(&Site::scalar(0), &Site::new([0, 0]));
        assert!(matches!(r, Err(LatticeError::DimensionMismatch { .. })));
    }
}
