//! Points of the hypercube `[0,1]^X`.

use crate::error::{Error, Result};
use crate::setfn::{GroundSet, Subset};

const BOUND_TOL: f64 = 1e-12;

/// A point `x ∈ [0,1]^X`, labeled by a ground set.
///
/// Construction clamps coordinates within `1e-12` of the bounds and rejects
/// anything further outside.
#[derive(Debug, Clone, PartialEq)]
pub struct PointInCube {
    ground: GroundSet,
    coords: Vec<f64>,
}

impl PointInCube {
    pub fn new(ground: GroundSet, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != ground.n() {
            return Err(Error::input(format!(
                "point has {} coordinates but the ground set has {} elements",
                coords.len(),
                ground.n()
            )));
        }
        let mut clamped = coords;
        for (i, c) in clamped.iter_mut().enumerate() {
            if !c.is_finite() || *c < -BOUND_TOL || *c > 1.0 + BOUND_TOL {
                return Err(Error::input(format!(
                    "coordinate {} = {} lies outside [0,1]",
                    ground.label(i),
                    *c
                )));
            }
            *c = c.clamp(0.0, 1.0);
        }
        Ok(PointInCube { ground, coords: clamped })
    }

    /// The indicator vector of a subset.
    pub fn indicator(ground: GroundSet, s: &Subset) -> Result<Self> {
        if s.ground_size() != ground.n() {
            return Err(Error::input("subset ranges over a different ground set"));
        }
        let coords = (0..ground.n())
            .map(|i| if s.contains(i) { 1.0 } else { 0.0 })
            .collect();
        PointInCube::new(ground, coords)
    }

    pub fn constant(ground: GroundSet, value: f64) -> Result<Self> {
        let n = ground.n();
        PointInCube::new(ground, vec![value; n])
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> f64 {
        self.coords[i]
    }

    /// True when every coordinate is within `tol` of 0 or 1.
    pub fn is_integral(&self, tol: f64) -> bool {
        self.coords
            .iter()
            .all(|&c| c <= tol || c >= 1.0 - tol)
    }

    /// The support of the rounded point, for integral points.
    pub fn rounded_support(&self) -> Subset {
        let mut s = Subset::empty(self.n());
        for (i, &c) in self.coords.iter().enumerate() {
            if c >= 0.5 {
                s.insert(i);
            }
        }
        s
    }

    /// Pointwise dominance `self ⪯ other`.
    pub fn dominated_by(&self, other: &PointInCube) -> bool {
        self.coords
            .iter()
            .zip(&other.coords)
            .all(|(&a, &b)| a <= b + BOUND_TOL)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_tiny_overshoot_rejects_large() {
        let g = GroundSet::with_size(2).unwrap();
        let p = PointInCube::new(g.clone(), vec![1.0 + 1e-13, -1e-13]).unwrap();
        assert_eq!(p.coords(), &[1.0, 0.0]);
        assert!(PointInCube::new(g.clone(), vec![1.1, 0.0]).is_err());
        assert!(PointInCube::new(g, vec![0.5]).is_err());
    }

    #[test]
    fn indicator_round_trip() {
        let g = GroundSet::with_size(3).unwrap();
        let s = Subset::from_indices(3, &[0, 2]);
        let p = PointInCube::indicator(g, &s).unwrap();
        assert!(p.is_integral(1e-12));
        assert_eq!(p.rounded_support(), s);
    }
}
