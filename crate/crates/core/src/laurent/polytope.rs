use alloc::vec::Vec;

/// The Newton polytope of a polynomial with respect to the `t` variables.
///
/// For one `t` variable this is the exact interval hull. For more it is the
/// support itself together with its bounding box.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum LatticePolytopeT {
    Interval { lo: i64, hi: i64 },
    Points { points: Vec<Vec<i64>>, lo: Vec<i64>, hi: Vec<i64> },
}

impl LatticePolytopeT {
    pub fn interval(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "empty interval");
        LatticePolytopeT::Interval { lo, hi }
    }

    pub fn as_interval(&self) -> Option<(i64, i64)> {
        match self {
            LatticePolytopeT::Interval { lo, hi } => Some((*lo, *hi)),
            LatticePolytopeT::Points { .. } => None,
        }
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        match self {
            LatticePolytopeT::Interval { lo, hi } => v.len() == 1 && *lo <= v[0] && v[0] <= *hi,
            LatticePolytopeT::Points { points, .. } => points.iter().any(|q| q.as_slice() == v),
        }
    }

    /// Minkowski sum `self + k·other` of intervals.
    pub fn add_scaled(&self, other: &Self, k: i64) -> Option<Self> {
        let (a, b) = (self.as_interval()?, other.as_interval()?);
        Some(LatticePolytopeT::Interval { lo: a.0 + k * b.0, hi: a.1 + k * b.1 })
    }
}
