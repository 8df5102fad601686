//! Subspaces of Q^n in canonical reduced-echelon form, with exact
//! intersection and equality.

use crate::matrix::Matrix;
use crate::rational::Rational;
use crate::{PwError, Result};
use num::traits::Zero;

/// A linear subspace of Q^ambient. The basis rows are the nonzero rows of a
/// reduced row echelon form, so equal subspaces have identical
/// representations and `==` is decision procedure enough.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_spanning(ambient, Matrix::identity(ambient).rows_vec()).unwrap()
    }

    /// Adopt rows that are already in reduced echelon form (validated):
    /// nonzero rows, strictly increasing unit pivots, pivot columns cleared
    /// elsewhere. Lets block-diagonal bases be assembled without
    /// re-elimination.
    pub fn from_canonical_rows(ambient: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        use num::traits::One;
        let mut last_pivot: Option<usize> = None;
        for row in &rows {
            if row.len() != ambient {
                return Err(PwError::DimensionMismatch("row length vs ambient".into()));
            }
            let Some(pivot) = row.iter().position(|x| !x.is_zero()) else {
                return Err(PwError::InvalidParameter("zero row in canonical basis".into()));
            };
            if !row[pivot].is_one() {
                return Err(PwError::InvalidParameter("pivot entry is not 1".into()));
            }
            if let Some(lp) = last_pivot {
                if pivot <= lp {
                    return Err(PwError::InvalidParameter("pivots not increasing".into()));
                }
            }
            for other in &rows {
                if !std::ptr::eq(other, row) && !other[pivot].is_zero() {
                    return Err(PwError::InvalidParameter("pivot column not cleared".into()));
                }
            }
            last_pivot = Some(pivot);
        }
        Ok(Subspace { ambient, basis: rows })
    }

    /// Canonicalize a spanning set (zero vectors and dependencies allowed).
    pub fn from_spanning(ambient: usize, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient) {
            return Err(PwError::DimensionMismatch(
                "spanning vector length differs from ambient".into(),
            ));
        }
        if vectors.is_empty() {
            return Ok(Subspace::zero(ambient));
        }
        let (e, pivots) = Matrix::from_rows(vectors)?.rref();
        let basis = (0..pivots.len()).map(|i| e.row(i).to_vec()).collect();
        Ok(Subspace { ambient, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(PwError::DimensionMismatch("vector length vs ambient".into()));
        }
        // Reduce v against the echelon rows; membership iff the residue is 0.
        let mut r = v.to_vec();
        for row in &self.basis {
            let pivot = row.iter().position(|x| !x.is_zero()).unwrap();
            if !r[pivot].is_zero() {
                let f = r[pivot].clone();
                for (ri, bi) in r.iter_mut().zip(row.iter()) {
                    *ri -= &f * bi;
                }
            }
        }
        Ok(r.iter().all(Rational::is_zero))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        if self.ambient != other.ambient {
            return Err(PwError::DimensionMismatch("ambient dimensions differ".into()));
        }
        for v in &self.basis {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Span of the union.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(PwError::DimensionMismatch("ambient dimensions differ".into()));
        }
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::from_spanning(self.ambient, rows)
    }

    /// Intersection by the Zassenhaus block trick: reduce rows [u | u] for u
    /// in the first basis and [v | 0] for v in the second; rows whose left
    /// half vanishes carry the intersection in their right half.
    pub fn intersect_pair(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(PwError::DimensionMismatch("ambient dimensions differ".into()));
        }
        let n = self.ambient;
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for u in &self.basis {
            let mut row = u.clone();
            row.extend(u.iter().cloned());
            rows.push(row);
        }
        for v in &other.basis {
            let mut row = v.clone();
            row.extend(std::iter::repeat(Rational::zero()).take(n));
            rows.push(row);
        }
        if rows.is_empty() {
            return Ok(Subspace::zero(n));
        }
        let (e, pivots) = Matrix::from_rows(rows)?.rref();
        let mut inter = Vec::new();
        for i in 0..pivots.len() {
            if pivots[i] >= n {
                inter.push(e.row(i)[n..].to_vec());
            }
        }
        Subspace::from_spanning(n, inter)
    }

    /// Intersection of any number of subspaces of a common ambient space.
    pub fn intersect(spaces: &[Subspace]) -> Result<Subspace> {
        let Some(first) = spaces.first() else {
            return Err(PwError::InvalidParameter("intersect of empty list".into()));
        };
        let mut acc = first.clone();
        for s in &spaces[1..] {
            acc = acc.intersect_pair(s)?;
        }
        Ok(acc)
    }

    /// Canonical-form equality (the representation is unique).
    pub fn equal(&self, other: &Subspace) -> Result<bool> {
        if self.ambient != other.ambient {
            return Err(PwError::DimensionMismatch("ambient dimensions differ".into()));
        }
        Ok(self == other)
    }
}
