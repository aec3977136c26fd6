use crate::{LatticeError, Site};
use serde::{Deserialize, Serialize};

/// Rectangular box `[lo_1, hi_1] x ... x [lo_d, hi_d]` in `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeBox {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl LatticeBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self, LatticeError> {
        if lo.is_empty() {
            return Err(LatticeError::EmptyGeometry);
        }
        if lo.len() != hi.len() {
            return Err(LatticeError::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        if let Some(axis) = (0..lo.len()).find(|&a| lo[a] > hi[a]) {
            return Err(LatticeError::InvalidBox { axis });
        }
        Ok(LatticeBox { lo, hi })
    }

    /// The segment `{a, ..., b}` of `Z`.
    pub fn interval(a: i64, b: i64) -> Result<Self, LatticeError> {
        Self::new(vec![a], vec![b])
    }

    /// A chain `{0, ..., len-1}` of `Z`.
    pub fn chain(len: usize) -> Result<Self, LatticeError> {
        if len == 0 {
            return Err(LatticeError::EmptyGeometry);
        }
        Self::interval(0, len as i64 - 1)
    }

    /// The single-site box `{s}`.
    pub fn point(s: &Site) -> Self {
        LatticeBox { lo: s.0.clone(), hi: s.0.clone() }
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Side length (number of sites) along `axis`.
    pub fn extent(&self, axis: usize) -> usize {
        (self.hi[axis] - self.lo[axis] + 1) as usize
    }

    pub fn len(&self) -> usize {
        (0..self.dim()).map(|a| self.extent(a)).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `l^inf` diameter.
    pub fn diam(&self) -> i64 {
        (0..self.dim()).map(|a| self.hi[a] - self.lo[a]).max().unwrap_or(0)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, s: &Site) -> bool {
        s.dim() == self.dim() && (0..self.dim()).all(|a| self.lo[a] <= s.0[a] && s.0[a] <= self.hi[a])
    }

    pub fn contains_box(&self, other: &LatticeBox) -> bool {
        other.dim() == self.dim()
            && (0..self.dim()).all(|a| self.lo[a] <= other.lo[a] && other.hi[a] <= self.hi[a])
    }

    pub fn intersects(&self, other: &LatticeBox) -> bool {
        other.dim() == self.dim()
            && (0..self.dim()).all(|a| self.lo[a].max(other.lo[a]) <= self.hi[a].min(other.hi[a]))
    }

    /// Whether any of `sites` lies in the box.
    pub fn meets(&self, sites: &[Site]) -> bool {
        sites.iter().any(|s| self.contains(s))
    }

    /// Sites in lexicographic order (last axis fastest).
    pub fn sites(&self) -> Vec<Site> {
        let mut out = Vec::with_capacity(self.len());
        let mut cur = self.lo.clone();
        loop {
            out.push(Site(cur.clone()));
            let mut axis = self.dim();
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                if cur[axis] < self.hi[axis] {
                    cur[axis] += 1;
                    break;
                }
                cur[axis] = self.lo[axis];
            }
        }
    }

    /// Position of `s` in [`LatticeBox::sites`].
    pub fn index_of(&self, s: &Site) -> Option<usize> {
        if !self.contains(s) {
            return None;
        }
        let mut idx = 0;
        for a in 0..self.dim() {
            idx = idx * self.extent(a) + (s.0[a] - self.lo[a]) as usize;
        }
        Some(idx)
    }
}

/// A face-removal interior `Q'` of a box together with the number of removed faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteriorBox {
    pub region: LatticeBox,
    pub removed: usize,
}

impl InteriorBox {
    /// `(-1)^removed`.
    pub fn sign(&self) -> f64 {
        if self.removed % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// All non-empty boxes obtained from `q` by removing a subset of its faces.
///
/// Per axis the choices are keep, drop the lower face, drop the upper face, or
/// drop both; a degenerate axis admits only keep and an axis with two sites
/// cannot lose both faces.
pub fn interior_boxes(q: &LatticeBox) -> Vec<InteriorBox> {
    let per_axis: Vec<Vec<(i64, i64, usize)>> = (0..q.dim())
        .map(|a| {
            let (l, h) = (q.lo[a], q.hi[a]);
            let mut opts = vec![(l, h, 0)];
            if h > l {
                opts.push((l + 1, h, 1));
                opts.push((l, h - 1, 1));
                if h - l >= 2 {
                    opts.push((l + 1, h - 1, 2));
                }
            }
            opts
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; q.dim()];
    loop {
        let mut lo = Vec::with_capacity(q.dim());
        let mut hi = Vec::with_capacity(q.dim());
        let mut removed = 0;
        for (a, &c) in choice.iter().enumerate() {
            let (l, h, m) = per_axis[a][c];
            lo.push(l);
            hi.push(h);
            removed += m;
        }
        out.push(InteriorBox { region: LatticeBox { lo, hi }, removed });
        let mut axis = q.dim();
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if choice[axis] + 1 < per_axis[axis].len() {
                choice[axis] += 1;
                break;
            }
            choice[axis] = 0;
        }
    }
}

/// Every box contained in `lattice` with diameter at most `max_diam`,
/// ordered lexicographically by `(lo, hi)`.
pub fn enumerate_boxes(lattice: &LatticeBox, max_diam: i64) -> Vec<LatticeBox> {
    let corners = lattice.sites();
    let mut out = Vec::new();
    for lo in &corners {
        for hi in &corners {
            if (0..lattice.dim()).all(|a| lo.0[a] <= hi.0[a])
                && (0..lattice.dim()).map(|a| hi.0[a] - lo.0[a]).max().unwrap_or(0) <= max_diam
            {
                out.push(LatticeBox { lo: lo.0.clone(), hi: hi.0.clone() });
            }
        }
    }
    out.sort();
    out
}
