use crate::DecompositionError;
use heatcorr_lattice::{enumerate_boxes, interior_boxes, LatticeBox};

fn check(lattice: &LatticeBox, q: &LatticeBox, x: &[f64]) -> Result<(), DecompositionError> {
    if x.len() != lattice.len() {
        return Err(DecompositionError::Incompatible(format!(
            "configuration has {} entries for {} sites",
            x.len(),
            lattice.len()
        )));
    }
    if !lattice.contains_box(q) {
        return Err(heatcorr_lattice::LatticeError::OutsideLattice(q.lo().to_vec()).into());
    }
    Ok(())
}

/// `T_Q f (x) = sum_{Q' in Int(Q)} (-1)^{m(Q,Q')} [f(pi_{Q'} x) - f(0)]`, with
/// `x` listed in the site order of `lattice`.
pub fn t_q_single(
    f: impl Fn(&[f64]) -> f64,
    q: &LatticeBox,
    lattice: &LatticeBox,
    x: &[f64],
) -> Result<f64, DecompositionError> {
    check(lattice, q, x)?;
    let sites = lattice.sites();
    let f0 = f(&vec![0.0; x.len()]);
    let mut buf = vec![0.0; x.len()];
    let mut total = 0.0;
    for inner in interior_boxes(q) {
        for ((b, s), &v) in buf.iter_mut().zip(&sites).zip(x) {
            *b = if inner.region.contains(s) { v } else { 0.0 };
        }
        total += inner.sign() * (f(&buf) - f0);
    }
    Ok(total)
}

/// `f(x) - f(0) - sum_Q T_Q f(x)` over every box of `lattice`.
pub fn telescoping_defect(f: impl Fn(&[f64]) -> f64, lattice: &LatticeBox, x: &[f64]) -> Result<f64, DecompositionError> {
    check(lattice, lattice, x)?;
    let mut sum = 0.0;
    for q in enumerate_boxes(lattice, i64::MAX) {
        sum += t_q_single(&f, &q, lattice, x)?;
    }
    Ok(f(x) - f(&vec![0.0; x.len()]) - sum)
}
