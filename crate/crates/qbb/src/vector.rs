//! Coordinate vectors over a pivot basis of one weight space. Used for
//! elements of `U_q^-(g)` and of `V(λ)` alike.

use num_traits::Zero;

use crate::cartan::RootVector;
use crate::qrat::ScalarQ;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedVector {
    pub root: RootVector,
    pub coords: Vec<ScalarQ>,
}

impl GradedVector {
    pub fn zero(root: RootVector, dim: usize) -> Self {
        GradedVector { root, coords: vec![ScalarQ::zero(); dim] }
    }

    pub fn basis(root: RootVector, dim: usize, k: usize) -> Self {
        let mut v = GradedVector::zero(root, dim);
        v.coords[k] = ScalarQ::from_int(1);
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &GradedVector) -> GradedVector {
        assert_eq!(self.root, o.root, "adding vectors of different weights");
        GradedVector {
            root: self.root.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &GradedVector) -> GradedVector {
        assert_eq!(self.root, o.root, "subtracting vectors of different weights");
        GradedVector {
            root: self.root.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &ScalarQ) -> GradedVector {
        GradedVector { root: self.root.clone(), coords: self.coords.iter().map(|a| a * c).collect() }
    }

    /// Coordinate-wise bar. Pivot basis vectors are words applied to `1`
    /// or `v_λ`, which are bar-invariant, so this is the bar involution.
    pub fn bar(&self) -> GradedVector {
        GradedVector { root: self.root.clone(), coords: self.coords.iter().map(|a| a.bar()).collect() }
    }
}

pub type UElement = GradedVector;
pub type VElement = GradedVector;
