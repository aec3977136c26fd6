use crate::{LatticeBox, LatticeError};

/// A real value per site of a box lattice, in lexicographic site order.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldConfig {
    lattice: LatticeBox,
    values: Vec<f64>,
}

impl FieldConfig {
    pub fn new(lattice: LatticeBox, values: Vec<f64>) -> Result<Self, LatticeError> {
        if values.len() != lattice.len() {
            return Err(LatticeError::FieldMismatch { expected: lattice.len(), found: values.len() });
        }
        Ok(FieldConfig { lattice, values })
    }

    pub fn zeros(lattice: LatticeBox) -> Self {
        let n = lattice.len();
        FieldConfig { lattice, values: vec![0.0; n] }
    }

    pub fn lattice(&self) -> &LatticeBox {
        &self.lattice
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

fn check_inside(lattice: &LatticeBox, q: &LatticeBox) -> Result<(), LatticeError> {
    if q.dim() != lattice.dim() {
        return Err(LatticeError::DimensionMismatch { expected: lattice.dim(), found: q.dim() });
    }
    if !lattice.contains_box(q) {
        return Err(LatticeError::OutsideLattice(q.lo().to_vec()));
    }
    Ok(())
}

/// Keep the coordinates on `q` and zero the rest.
pub fn project(x: &FieldConfig, q: &LatticeBox) -> Result<FieldConfig, LatticeError> {
    check_inside(&x.lattice, q)?;
    let values = x
        .lattice
        .sites()
        .iter()
        .zip(&x.values)
        .map(|(s, &v)| if q.contains(s) { v } else { 0.0 })
        .collect();
    Ok(FieldConfig { lattice: x.lattice.clone(), values })
}

/// Doubled projection: `(x_l, y_l)` on `q`, `(0, y_l - x_l)` off `q`.
pub fn project_doubled(
    x: &FieldConfig,
    y: &FieldConfig,
    q: &LatticeBox,
) -> Result<(FieldConfig, FieldConfig), LatticeError> {
    if x.lattice != y.lattice {
        return Err(LatticeError::FieldMismatch { expected: x.values.len(), found: y.values.len() });
    }
    check_inside(&x.lattice, q)?;
    let sites = x.lattice.sites();
    let mut px = Vec::with_capacity(sites.len());
    let mut py = Vec::with_capacity(sites.len());
    for (i, s) in sites.iter().enumerate() {
        if q.contains(s) {
            px.push(x.values[i]);
            py.push(y.values[i]);
        } else {
            px.push(0.0);
            py.push(y.values[i] - x.values[i]);
        }
    }
    Ok((
        FieldConfig { lattice: x.lattice.clone(), values: px },
        FieldConfig { lattice: x.lattice.clone(), values: py },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_zeroes_outside() {
        let l = LatticeBox::chain(3).unwrap();
        let x = FieldConfig::new(l.clone(), vec![1.0, 2.0, 3.0]).unwrap();
        let q = LatticeBox::interval(1, 2).unwrap();
        assert_eq!(project(&x, &q).unwrap().values(), &[0.0, 2.0, 3.0]);
    }

    #[test]
    fn doubled_projection_keeps_differences() {
        let l = LatticeBox::chain(2).unwrap();
        let x = FieldConfig::new(l.clone(), vec![1.0, 2.0]).unwrap();
        let y = FieldConfig::new(l.clone(), vec![5.0, 7.0]).unwrap();
        let q = LatticeBox::interval(0, 0).unwrap();
        let (px, py) = project_doubled(&x, &y, &q).unwrap();
        assert_eq!(px.values(), &[1.0, 0.0]);
        assert_eq!(py.values(), &[5.0, 5.0]);
    }

    #[test]
    fn projection_outside_lattice_fails() {
        let l = LatticeBox::chain(2).unwrap();
        let x = FieldConfig::zeros(l);
        assert!(project(&x, &LatticeBox::interval(1, 2).unwrap()).is_err());
    }
}
