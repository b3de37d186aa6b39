use alloc::vec::Vec;

use super::{IndexSet, TuplePoly};
use crate::laurent::{LaurentPoly, PolyRing, SigmaScope, VarLayout};
use crate::ring::{Matrix, Ring, TPoly};
use crate::{Error, Result};

/// `A(m, Δ', Δ'', F)` with entry `(u, v) = Coeff_{p^m v − u}(F)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HasseWittMatrix {
    pub m: u32,
    pub rows: IndexSet,
    pub cols: IndexSet,
    pub entries: Matrix<LaurentPoly>,
}

fn target(p: u64, m: u32, u: &[i64], v: &[i64]) -> Result<Vec<i64>> {
    let pm = i64::try_from(p.checked_pow(m).ok_or(Error::ExponentOverflow)?).map_err(|_| Error::ExponentOverflow)?;
    u.iter()
        .zip(v)
        .map(|(ui, vi)| pm.checked_mul(*vi).and_then(|x| x.checked_sub(*ui)).ok_or(Error::ExponentOverflow))
        .collect()
}

/// Build `A(m, Δ', Δ'', F)`.
pub fn hasse_witt<P: TuplePoly>(p: u64, m: u32, rows: &IndexSet, cols: &IndexSet, f: &P) -> Result<HasseWittMatrix> {
    let mut data = Vec::with_capacity(rows.len() * cols.len());
    for u in rows.points() {
        for v in cols.points() {
            data.push(f.coeff_t(&target(p, m, u, v)?)?);
        }
    }
    let mut it = data.into_iter();
    let entries = Matrix::from_fn(rows.len(), cols.len(), |_, _| it.next().unwrap());
    Ok(HasseWittMatrix { m, rows: rows.clone(), cols: cols.clone(), entries })
}

/// `A(m, Δ', Δ'', F)(a)` from `F(t, a)` (one `t` variable).
pub fn hasse_witt_values<R: Ring>(ring: &R, p: u64, m: u32, rows: &IndexSet, cols: &IndexSet, f: &TPoly<R::Elem>) -> Result<Matrix<R::Elem>> {
    if rows.dim() != 1 {
        return Err(Error::DimensionUnsupported("point evaluation of Hasse–Witt matrices needs one t variable".into()));
    }
    let mut data = Vec::with_capacity(rows.len() * cols.len());
    for u in rows.points() {
        for v in cols.points() {
            data.push(f.coeff(ring, target(p, m, u, v)?[0]));
        }
    }
    let mut it = data.into_iter();
    Ok(Matrix::from_fn(rows.len(), cols.len(), |_, _| it.next().unwrap()))
}

impl HasseWittMatrix {
    pub fn layout(&self) -> Option<VarLayout> {
        self.entries.entries().first().map(LaurentPoly::layout)
    }

    /// `σ^k` on the `z` variables of every entry.
    pub fn sigma_z(&self, p: u64, k: u32) -> Result<Matrix<LaurentPoly>> {
        self.entries.try_map(|f| f.sigma_subst(p, k, SigmaScope::ZOnly))
    }

    pub fn determinant(&self) -> Result<LaurentPoly> {
        let layout = self.layout().ok_or(Error::DimensionUnsupported("empty matrix".into()))?;
        Ok(self.entries.det(&PolyRing::exact(layout)))
    }
}
