//! Covariances through the doubled system `H~ = H (x) 1 + 1 (x) H`.

use crate::{group_elements, ClusterError};
use faer::Mat;
use heatcorr_grid::{DenseSpectrum, Embedded, LocalObservable};
use heatcorr_lattice::Site;

fn check_supports(a: &LocalObservable, b: &LocalObservable) -> Result<(), ClusterError> {
    if a.overlaps(b) {
        return Err(ClusterError::InvalidSupports);
    }
    Ok(())
}

fn to_mat(e: &Embedded, dim: usize) -> Mat<f64> {
    match e {
        Embedded::Diagonal(d) => Mat::from_fn(dim, dim, |i, j| if i == j { d[i] } else { 0.0 }),
        Embedded::Dense(m) => Mat::from_fn(dim, dim, |i, j| m[i * dim + j]),
    }
}

/// `Tr(P X)` for row-major `P` and an embedded `X`.
fn trace_with(p: &[f64], x: &Embedded, dim: usize) -> f64 {
    match x {
        Embedded::Diagonal(d) => (0..dim).map(|i| p[i * dim + i] * d[i]).sum(),
        Embedded::Dense(m) => (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|(i, j)| p[i * dim + j] * m[j * dim + i]).sum(),
    }
}

/// `Tr(P A B)` for embedded `A`, `B`.
fn trace_product(p: &[f64], a: &Embedded, b: &Embedded, dim: usize) -> f64 {
    match (a, b) {
        (Embedded::Diagonal(x), Embedded::Diagonal(y)) => (0..dim).map(|i| p[i * dim + i] * x[i] * y[i]).sum(),
        _ => {
            let ab = to_mat(a, dim) * to_mat(b, dim);
            (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|(i, j)| p[i * dim + j] * ab[(j, i)]).sum()
        }
    }
}

/// `Tr(e^{-tH~} (A' - A'')(B' - B'')) / (2 Z~)` evaluated through the
/// Kronecker factorisation `Tr((P (x) P)(X (x) Y)) = Tr(PX) Tr(PY)`.
pub fn doubled_covariance(
    spectrum: &DenseSpectrum,
    sites: &[Site],
    a: &LocalObservable,
    b: &LocalObservable,
    t: f64,
) -> Result<f64, ClusterError> {
    check_supports(a, b)?;
    let dim = spectrum.dim();
    let heat = spectrum.heat_matrix(t);
    let p = &heat.matrix;
    let (ea, eb) = (a.embed(sites)?, b.embed(sites)?);
    let z: f64 = (0..dim).map(|i| p[i * dim + i]).sum();
    let (pa, pb) = (trace_with(p, &ea, dim), trace_with(p, &eb, dim));
    let pab = trace_product(p, &ea, &eb, dim);
    // (A'-A'')(B'-B'') = AB(x)1 - A(x)B - B(x)A + 1(x)AB
    let doubled = 2.0 * z * pab - 2.0 * pa * pb;
    Ok(doubled / (2.0 * z * z))
}

/// Largest configuration count for which the doubled operator is assembled.
pub const EXPLICIT_DIM_LIMIT: usize = 16;

/// The same quantity with `P (x) P` and the doubled observables built explicitly.
pub fn doubled_covariance_explicit(
    spectrum: &DenseSpectrum,
    sites: &[Site],
    a: &LocalObservable,
    b: &LocalObservable,
    t: f64,
) -> Result<f64, ClusterError> {
    check_supports(a, b)?;
    let dim = spectrum.dim();
    if dim > EXPLICIT_DIM_LIMIT {
        return Err(ClusterError::InvalidArgument(format!("explicit doubling needs dim <= {EXPLICIT_DIM_LIMIT}, got {dim}")));
    }
    let heat = spectrum.heat_matrix(t);
    let p = Mat::from_fn(dim, dim, |i, j| heat.matrix[i * dim + j]);
    let ma = to_mat(&a.embed(sites)?, dim);
    let mb = to_mat(&b.embed(sites)?, dim);
    let id = Mat::<f64>::identity(dim, dim);
    let big = dim * dim;
    let kron = |x: &Mat<f64>, y: &Mat<f64>| Mat::from_fn(big, big, |i, j| x[(i / dim, j / dim)] * y[(i % dim, j % dim)]);
    let pp = kron(&p, &p);
    let da = kron(&ma, &id) - kron(&id, &ma);
    let db = kron(&mb, &id) - kron(&id, &mb);
    let prod = &pp * &da * &db;
    let tr: f64 = (0..big).map(|i| prod[(i, i)]).sum();
    let z2: f64 = (0..big).map(|i| pp[(i, i)]).sum();
    Ok(tr / (2.0 * z2))
}

/// The same quantity for multiplication observables, as a diagonal sum of the
/// signed group average `W` against `(a' - a'')(b' - b'')`.
pub fn doubled_covariance_averaged(
    spectrum: &DenseSpectrum,
    sites: &[Site],
    a: &LocalObservable,
    b: &LocalObservable,
    t: f64,
) -> Result<f64, ClusterError> {
    check_supports(a, b)?;
    let (Embedded::Diagonal(fa), Embedded::Diagonal(fb)) = (a.embed(sites)?, b.embed(sites)?) else {
        return Err(ClusterError::InvalidArgument("averaged path needs multiplication observables".into()));
    };
    let group = group_elements(sites, a.support(), b.support())?;
    let n = (spectrum.dim() as f64).powf(1.0 / sites.len() as f64).round() as usize;
    let (_, diag) = spectrum.heat_diagonal(t);
    let dim = diag.len();
    let z: f64 = diag.iter().sum();
    let split = |flat: usize| {
        let mut out = vec![0usize; sites.len()];
        let mut f = flat;
        for s in (0..sites.len()).rev() {
            out[s] = f % n;
            f /= n;
        }
        out
    };
    let join = |idx: &[usize]| idx.iter().fold(0usize, |acc, &i| acc * n + i);
    let configs: Vec<Vec<usize>> = (0..dim).map(split).collect();
    let mut total = 0.0;
    for x1 in 0..dim {
        for x2 in 0..dim {
            let weight = (fa[x1] - fa[x2]) * (fb[x1] - fb[x2]);
            if weight == 0.0 {
                continue;
            }
            let mut w = 0.0;
            for g in &group {
                let (mut c1, mut c2) = (configs[x1].clone(), configs[x2].clone());
                for (s, &sw) in g.swaps.iter().enumerate() {
                    if sw {
                        std::mem::swap(&mut c1[s], &mut c2[s]);
                    }
                }
                w += g.sign as f64 * diag[join(&c1)] * diag[join(&c2)];
            }
            total += w / group.len() as f64 * weight;
        }
    }
    Ok(total / (2.0 * z * z))
}
