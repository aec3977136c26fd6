use crate::{enumerate_boxes, LatticeBox, LatticeError, Site};

/// A finite sequence of boxes, each of diameter at least one, in which
/// consecutive boxes intersect.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polymer {
    pub boxes: Vec<LatticeBox>,
}

impl Polymer {
    /// Sum of the box diameters.
    pub fn total_diam(&self) -> i64 {
        self.boxes.iter().map(LatticeBox::diam).sum()
    }
}

fn check_subset(sites: &[Site], lattice: &LatticeBox) -> Result<(), LatticeError> {
    if sites.is_empty() {
        return Err(LatticeError::EmptyGeometry);
    }
    match sites.iter().find(|s| !lattice.contains(s)) {
        Some(s) => Err(LatticeError::OutsideLattice(s.0.clone())),
        None => Ok(()),
    }
}

/// All polymers inside `lattice` whose first box meets `e1` and whose last box
/// meets `e2`, with at most `max_boxes` boxes of diameter in `[1, max_diam]`.
///
/// With `allow_repeats == false` a box may occur only once per sequence.
pub fn enumerate_polymers(
    e1: &[Site],
    e2: &[Site],
    lattice: &LatticeBox,
    max_boxes: usize,
    max_diam: i64,
    allow_repeats: bool,
) -> Result<Vec<Polymer>, LatticeError> {
    check_subset(e1, lattice)?;
    check_subset(e2, lattice)?;
    let candidates: Vec<LatticeBox> =
        enumerate_boxes(lattice, max_diam).into_iter().filter(|b| b.diam() >= 1).collect();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn extend(
        cands: &[LatticeBox],
        e2: &[Site],
        max_boxes: usize,
        allow_repeats: bool,
        stack: &mut Vec<usize>,
        out: &mut Vec<Polymer>,
    ) {
        let last = &cands[*stack.last().expect("non-empty chain")];
        if last.meets(e2) {
            out.push(Polymer { boxes: stack.iter().map(|&i| cands[i].clone()).collect() });
        }
        if stack.len() == max_boxes {
            return;
        }
        for (j, b) in cands.iter().enumerate() {
            if b.intersects(last) && (allow_repeats || !stack.contains(&j)) {
                stack.push(j);
                extend(cands, e2, max_boxes, allow_repeats, stack, out);
                stack.pop();
            }
        }
    }
    if max_boxes == 0 {
        return Ok(out);
    }
    for (i, b) in candidates.iter().enumerate() {
        if b.meets(e1) {
            stack.push(i);
            extend(&candidates, e2, max_boxes, allow_repeats, &mut stack, &mut out);
            stack.pop();
        }
    }
    Ok(out)
}

/// Whether a family of boxes links `e1` to `e2` through intersecting boxes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connectivity {
    Connecting,
    NonConnecting,
}

/// Classify a family of non-point boxes via union-find on the intersection graph.
pub fn classify_family(family: &[LatticeBox], e1: &[Site], e2: &[Site]) -> Connectivity {
    let n = family.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if family[i].intersects(&family[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    for i in 0..n {
        if !family[i].meets(e1) {
            continue;
        }
        for j in 0..n {
            if family[j].meets(e2) && find(&mut parent, i) == find(&mut parent, j) {
                return Connectivity::Connecting;
            }
        }
    }
    Connectivity::NonConnecting
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: i64) -> Site {
        Site::scalar(c)
    }

    #[test]
    fn single_box_links_adjacent_sites() {
        let l = LatticeBox::chain(3).unwrap();
        let p = enumerate_polymers(&[s(0)], &[s(1)], &l, 1, 2, false).unwrap();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn non_connecting_family() {
        let fam = [LatticeBox::interval(0, 1).unwrap()];
        assert_eq!(classify_family(&fam, &[s(0)], &[s(2)]), Connectivity::NonConnecting);
        let fam = [LatticeBox::interval(0, 1).unwrap(), LatticeBox::interval(1, 2).unwrap()];
        assert_eq!(classify_family(&fam, &[s(0)], &[s(2)]), Connectivity::Connecting);
        assert_eq!(classify_family(&[], &[s(0)], &[s(2)]), Connectivity::NonConnecting);
    }

    #[test]
    fn empty_sets_rejected() {
        let l = LatticeBox::chain(3).unwrap();
        assert_eq!(enumerate_polymers(&[], &[s(1)], &l, 2, 2, false), Err(LatticeError::EmptyGeometry));
    }
}
