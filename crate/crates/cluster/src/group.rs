use crate::ClusterError;
use heatcorr_lattice::Site;

/// A map from sites to `{identity, swap}` constant on both supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryElement {
    /// `swaps[slot]` is set where the two copies are exchanged.
    pub swaps: Vec<bool>,
    pub sign: i8,
}

impl SymmetryElement {
    pub fn identity(n: usize) -> Self {
        SymmetryElement { swaps: vec![false; n], sign: 1 }
    }

    /// `tau_F`: swap exactly on the slots in `f`.
    pub fn swap_on(n: usize, f: &[usize]) -> Self {
        let mut swaps = vec![false; n];
        for &s in f {
            swaps[s] = true;
        }
        SymmetryElement { swaps, sign: 1 }
    }
}

/// Slots of `part` within `sites`, rejecting empty or foreign parts.
pub(crate) fn slots_of(sites: &[Site], part: &[Site]) -> Result<Vec<usize>, ClusterError> {
    if part.is_empty() {
        return Err(ClusterError::InvalidSupports);
    }
    part.iter().map(|s| sites.iter().position(|t| t == s).ok_or(ClusterError::InvalidSupports)).collect()
}

/// All of `G(E1, E2)`, of size `2^(|L| - |E1| - |E2| + 2)`.
pub fn group_elements(sites: &[Site], e1: &[Site], e2: &[Site]) -> Result<Vec<SymmetryElement>, ClusterError> {
    let s1 = slots_of(sites, e1)?;
    let s2 = slots_of(sites, e2)?;
    if s1.iter().any(|s| s2.contains(s)) {
        return Err(ClusterError::InvalidSupports);
    }
    let free: Vec<usize> = (0..sites.len()).filter(|s| !s1.contains(s) && !s2.contains(s)).collect();
    let count = 1usize << (free.len() + 2);
    let mut out = Vec::with_capacity(count);
    for bits in 0..count {
        let mut swaps = vec![false; sites.len()];
        let (b1, b2) = (bits & 1 == 1, bits & 2 == 2);
        for &s in &s1 {
            swaps[s] = b1;
        }
        for &s in &s2 {
            swaps[s] = b2;
        }
        for (k, &s) in free.iter().enumerate() {
            swaps[s] = (bits >> (k + 2)) & 1 == 1;
        }
        let sign = if b1 != b2 { -1 } else { 1 };
        out.push(SymmetryElement { swaps, sign });
    }
    Ok(out)
}
