use crate::exactmath::CxMatrix;

/// A bundle map over a finite base: point `i` goes to `targets[i]` with
/// linear map `blocks[i]` from the fiber at `i` to the fiber at `targets[i]`.
#[derive(Debug, Clone)]
pub struct FiberMap {
    pub targets: Vec<usize>,
    pub blocks: Vec<CxMatrix>,
}

impl FiberMap {
    pub fn identity(points: usize, fiber_dim: usize) -> Self {
        FiberMap {
            targets: (0..points).collect(),
            blocks: vec![CxMatrix::identity(fiber_dim); points],
        }
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &FiberMap) -> FiberMap {
        FiberMap {
            targets: self.targets.iter().map(|&t| next.targets[t]).collect(),
            blocks: self
                .targets
                .iter()
                .zip(&self.blocks)
                .map(|(&t, b)| &next.blocks[t] * b)
                .collect(),
        }
    }

    /// Inverse map; `None` if the base map is not a bijection or a block is singular.
    pub fn inverse(&self) -> Option<FiberMap> {
        let n = self.len();
        let mut targets = vec![usize::MAX; n];
        let mut blocks = vec![CxMatrix::zeros(0, 0); n];
        for (i, (&t, b)) in self.targets.iter().zip(&self.blocks).enumerate() {
            if targets[t] != usize::MAX {
                return None;
            }
            targets[t] = i;
            blocks[t] = b.inverse()?;
        }
        Some(FiberMap { targets, blocks })
    }

    /// Largest block deviation, or infinity if the base maps differ.
    pub fn distance(&self, other: &FiberMap) -> f64 {
        if self.targets != other.targets {
            return f64::INFINITY;
        }
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_composes_to_identity() {
        let m = FiberMap {
            targets: vec![1, 0],
            blocks: vec![CxMatrix::from_real(1, 1, &[2.0]), CxMatrix::from_real(1, 1, &[-1.0])],
        };
        let id = m.then(&m.inverse().unwrap());
        assert!(id.distance(&FiberMap::identity(2, 1)) < 1e-12);
    }

    #[test]
    fn non_bijective_base_has_no_inverse() {
        let m = FiberMap {
            targets: vec![0, 0],
            blocks: vec![CxMatrix::identity(1); 2],
        };
        assert!(m.inverse().is_none());
    }
}
