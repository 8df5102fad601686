//! Bi-graded modules with the nilpotent operator Y = α∪ of type (2, 2):
//! hard Lefschetz across the weight grading, primitive subspaces, the
//! primitive projection, and the isobaric decomposition H = ⊕ Y^j P_w.

use crate::matrix::Matrix;
use crate::rational::Rational;
use crate::ring::RingPresentation;
use crate::subspace::Subspace;
use crate::{PwError, Result};
use num::traits::Zero;
use std::cell::RefCell;
use std::collections::BTreeMap;

/// Finite-dimensional bi-graded vector space with Y-matrices between
/// adjacent (d, w) pieces. Weights run in [0, 2 w0]; Y^l identifies the
/// weight-(w0 - l) stack with the weight-(w0 + l) stack.
pub struct BiGradedModule {
    pub w0: usize,
    dims: BTreeMap<(usize, usize), usize>,
    y: BTreeMap<(usize, usize), Matrix>,
    y_cache: RefCell<BTreeMap<(usize, usize, usize), Matrix>>,
}

/// Verdict of one hard-Lefschetz pairing Y^l: H_{w0-l} -> H_{w0+l}.
#[derive(Debug, Clone, serde::Serialize)]
pub struct HlVerdict {
    pub l: usize,
    pub dim_lo: usize,
    pub dim_hi: usize,
    pub rank: usize,
    pub bijective: bool,
}

impl BiGradedModule {
    /// Extract dimensions and cup-by-α matrices from a ring presentation.
    pub fn from_ring(pres: &RingPresentation) -> Result<Self> {
        let alpha = pres.alpha();
        let mut dims = BTreeMap::new();
        let mut y = BTreeMap::new();
        for ((d, w), dim) in pres.dims() {
            dims.insert((d, w), dim);
            y.insert((d, w), pres.multiplication_matrix(&alpha, d, w)?);
        }
        Ok(BiGradedModule { w0: pres.w0, dims, y, y_cache: RefCell::new(BTreeMap::new()) })
    }

    pub fn dim_at(&self, d: usize, w: usize) -> usize {
        self.dims.get(&(d, w)).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.dims.iter().map(|(&k, &v)| (k, v))
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// Degrees with a nonzero piece at this weight, ascending.
    pub fn weight_stack(&self, w: usize) -> Vec<(usize, usize)> {
        self.dims
            .iter()
            .filter(|(&(_, pw), _)| pw == w)
            .map(|(&(d, _), &dim)| (d, dim))
            .collect()
    }

    pub fn weight_stack_dim(&self, w: usize) -> usize {
        self.weight_stack(w).iter().map(|&(_, dim)| dim).sum()
    }

    /// Degrees with a nonzero piece at this degree, ascending by weight.
    pub fn degree_stack(&self, d: usize) -> Vec<(usize, usize)> {
        self.dims
            .iter()
            .filter(|(&(pd, _), _)| pd == d)
            .map(|(&(_, w), &dim)| (w, dim))
            .collect()
    }

    pub fn max_degree(&self) -> usize {
        self.dims.keys().map(|&(d, _)| d).max().unwrap_or(0)
    }

    /// The single cup-by-α step out of (d, w).
    pub fn y_single(&self, d: usize, w: usize) -> Matrix {
        self.y
            .get(&(d, w))
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.dim_at(d + 2, w + 2), self.dim_at(d, w)))
    }

    /// Composite Y^l from (d, w) to (d + 2l, w + 2l).
    pub fn y_power(&self, d: usize, w: usize, l: usize) -> Matrix {
        if let Some(m) = self.y_cache.borrow().get(&(d, w, l)) {
            return m.clone();
        }
        let mut acc = Matrix::identity(self.dim_at(d, w));
        for step in 0..l {
            let next = self.y_single(d + 2 * step, w + 2 * step);
            acc = next.mul(&acc).expect("chained bi-degrees");
        }
        self.y_cache.borrow_mut().insert((d, w, l), acc.clone());
        acc
    }

    /// Block matrix of Y^l from the weight-w stack to the weight-(w + 2l)
    /// stack, blocks ordered by ascending degree.
    pub fn stacked_y_power(&self, w: usize, l: usize) -> Matrix {
        let source = self.weight_stack(w);
        let target = self.weight_stack(w + 2 * l);
        let rows: usize = target.iter().map(|&(_, dim)| dim).sum();
        let cols: usize = source.iter().map(|&(_, dim)| dim).sum();
        let mut m = Matrix::zero(rows, cols);
        let mut col_off = 0;
        for &(d, dim) in &source {
            let block = self.y_power(d, w, l);
            if block.rows > 0 {
                let mut row_off = 0;
                for &(td, tdim) in &target {
                    if td == d + 2 * l {
                        break;
                    }
                    let _ = td;
                    row_off += tdim;
                }
                // only place the block when the target degree exists
                if target.iter().any(|&(td, _)| td == d + 2 * l) {
                    for i in 0..block.rows {
                        for j in 0..block.cols {
                            let v = block.get(i, j);
                            if !v.is_zero() {
                                m.set(row_off + i, col_off + j, v.clone());
                            }
                        }
                    }
                }
            }
            col_off += dim;
        }
        m
    }

    /// Hard Lefschetz across the weight grading: for every l the map
    /// Y^l: H_{w0-l} -> H_{w0+l} must be a bijection.
    pub fn hard_lefschetz_verify(&self) -> Vec<HlVerdict> {
        let mut out = Vec::new();
        for l in 0..=self.w0 {
            let lo = self.w0 - l;
            let hi = self.w0 + l;
            let dim_lo = self.weight_stack_dim(lo);
            let dim_hi = self.weight_stack_dim(hi);
            let rank = if dim_lo == 0 { 0 } else { self.stacked_y_power(lo, l).rank() };
            out.push(HlVerdict { l, dim_lo, dim_hi, rank, bijective: dim_lo == dim_hi && rank == dim_lo });
        }
        out
    }

    /// P^d_w = Ker(Y^{w0 - w + 1}) inside the (d, w) piece; zero for w > w0.
    pub fn primitive_basis(&self, d: usize, w: usize) -> Result<Subspace> {
        let dim = self.dim_at(d, w);
        if w > self.w0 {
            return Ok(Subspace::zero(dim));
        }
        let power = self.y_power(d, w, self.w0 - w + 1);
        Subspace::from_spanning(dim, power.kernel_basis())
    }

    /// Σ_d dim P^d_w.
    pub fn primitive_stack_dim(&self, w: usize) -> Result<usize> {
        let mut total = 0;
        for (d, _) in self.weight_stack(w) {
            total += self.primitive_basis(d, w)?.dim();
        }
        Ok(total)
    }

    /// Primitive projection at (d, w): the unique p with u = p + Y v,
    /// p primitive. Zero for weights above w0.
    pub fn primitive_projection(&self, u: &[Rational], d: usize, w: usize) -> Result<Vec<Rational>> {
        let dim = self.dim_at(d, w);
        if u.len() != dim {
            return Err(PwError::DimensionMismatch(format!(
                "projection input length {} vs piece dimension {}",
                u.len(),
                dim
            )));
        }
        if w > self.w0 {
            return Ok(vec![Rational::zero(); dim]);
        }
        let prim = self.primitive_basis(d, w)?;
        let p_cols = prim.dim();
        let y_img = if d >= 2 && w >= 2 {
            self.y_single(d - 2, w - 2)
        } else {
            Matrix::zero(dim, 0)
        };
        // columns: primitive basis then the Y-image generators
        let mut m = Matrix::zero(dim, p_cols + y_img.cols);
        for (j, b) in prim.basis().iter().enumerate() {
            for (i, v) in b.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        for j in 0..y_img.cols {
            for i in 0..dim {
                let v = y_img.get(i, j);
                if !v.is_zero() {
                    m.set(i, p_cols + j, v.clone());
                }
            }
        }
        let x = m.solve(u)?.ok_or_else(|| {
            PwError::NoSolution(format!("({}, {}) does not split as P + Y·H", d, w))
        })?;
        let mut p = vec![Rational::zero(); dim];
        for (j, b) in prim.basis().iter().enumerate() {
            if x[j].is_zero() {
                continue;
            }
            for (i, v) in b.iter().enumerate() {
                if !v.is_zero() {
                    p[i] = p[i].clone() + &x[j] * v;
                }
            }
        }
        Ok(p)
    }

    /// Y^j P_w inside the degree-d piece of weight w + 2j.
    pub fn isobaric_piece(&self, w: usize, j: usize, d_target: usize) -> Result<Subspace> {
        let ambient = self.dim_at(d_target, w + 2 * j);
        if d_target < 2 * j || w > self.w0 {
            return Ok(Subspace::zero(ambient));
        }
        let d_src = d_target - 2 * j;
        let prim = self.primitive_basis(d_src, w)?;
        let map = self.y_power(d_src, w, j);
        let mut vectors = Vec::new();
        for b in prim.basis() {
            vectors.push(map.apply(b)?);
        }
        Subspace::from_spanning(ambient, vectors)
    }

    /// Per (d, w): the pieces Y^j P_{w - 2j} must sum directly to the whole
    /// piece. Returns the first failing bi-degree, if any.
    pub fn isobaric_decomposition_check(&self) -> Result<Option<(usize, usize)>> {
        for (&(d, w), &dim) in &self.dims {
            let mut acc = Subspace::zero(dim);
            let mut dim_sum = 0;
            for j in 0..=w / 2 {
                let piece = self.isobaric_piece(w - 2 * j, j, d)?;
                dim_sum += piece.dim();
                acc = acc.sum(&piece)?;
            }
            if dim_sum != dim || acc.dim() != dim {
                return Ok(Some((d, w)));
            }
        }
        Ok(None)
    }

    /// Δ = d - w, constant along every piece.
    pub fn delta(d: usize, w: usize) -> isize {
        d as isize - w as isize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn module(g: usize, deg_d: usize) -> (RingPresentation, BiGradedModule) {
        let pres = RingPresentation::build(g, deg_d).unwrap();
        let m = BiGradedModule::from_ring(&pres).unwrap();
        (pres, m)
    }

    #[test]
    fn hard_lefschetz_holds_for_small_cases() {
        for (g, deg_d) in [(2usize, 2usize), (2, 3)] {
            let (_, m) = module(g, deg_d);
            for v in m.hard_lefschetz_verify() {
                assert!(
                    v.bijective,
                    "Y^{} not bijective for g={} degD={}: {} -> {} rank {}",
                    v.l, g, deg_d, v.dim_lo, v.dim_hi, v.rank
                );
            }
        }
    }

    #[test]
    fn primitive_dims_match_weight_differences() {
        // dim P_w = dim H_w - dim H_{w-2} for w <= w0, a consequence of
        // injectivity of Y below the middle weight
        let (_, m) = module(2, 3);
        for w in (0..=m.w0).step_by(2) {
            let expected = m.weight_stack_dim(w) as isize
                - if w >= 2 { m.weight_stack_dim(w - 2) as isize } else { 0 };
            assert_eq!(m.primitive_stack_dim(w).unwrap() as isize, expected, "w={}", w);
        }
    }

    #[test]
    fn projection_is_idempotent_and_kills_y_image() {
        let (_, m) = module(2, 3);
        for (&(d, w), &dim) in m.dims.clone().iter() {
            if w > m.w0 {
                continue;
            }
            // each unit vector: project twice, compare
            for j in 0..dim {
                let mut u = vec![Rational::zero(); dim];
                u[j] = rat(1);
                let p = m.primitive_projection(&u, d, w).unwrap();
                let pp = m.primitive_projection(&p, d, w).unwrap();
                assert_eq!(p, pp);
            }
            // the projection annihilates Y-exact classes
            if d >= 2 && w >= 2 {
                let y = m.y_single(d - 2, w - 2);
                for j in 0..y.cols {
                    let img = y.column(j);
                    let p = m.primitive_projection(&img, d, w).unwrap();
                    assert!(p.iter().all(Rational::is_zero), "Π(Y·e_{}) != 0 at ({}, {})", j, d, w);
                }
            }
        }
    }

    #[test]
    fn projection_fixes_primitives() {
        let (_, m) = module(2, 2);
        for (&(d, w), _) in m.dims.clone().iter() {
            if w > m.w0 {
                continue;
            }
            let prim = m.primitive_basis(d, w).unwrap();
            for b in prim.basis() {
                let p = m.primitive_projection(b, d, w).unwrap();
                assert_eq!(&p, b);
            }
        }
    }

    #[test]
    fn isobaric_decomposition_is_direct_and_exhaustive() {
        for (g, deg_d) in [(2usize, 2usize), (2, 3)] {
            let (_, m) = module(g, deg_d);
            assert_eq!(m.isobaric_decomposition_check().unwrap(), None);
            // string lengths: Y^j P_w vanishes past j = w0 - w
            for w in (0..=m.w0).step_by(2) {
                let pw = m.primitive_stack_dim(w).unwrap();
                if pw == 0 {
                    continue;
                }
                let j_dead = m.w0 - w + 1;
                let mut dead_total = 0;
                for (d, _) in m.weight_stack(w + 2 * j_dead) {
                    dead_total += m.isobaric_piece(w, j_dead, d).unwrap().dim();
                }
                assert_eq!(dead_total, 0, "string from weight {} survives past its length", w);
            }
        }
    }

    #[test]
    fn total_dim_splits_over_strings() {
        let (_, m) = module(2, 3);
        let mut by_strings = 0;
        for w in 0..=m.w0 {
            let pw = m.primitive_stack_dim(w).unwrap();
            by_strings += pw * (m.w0 - w + 1);
        }
        assert_eq!(by_strings, m.total_dim());
    }
}
