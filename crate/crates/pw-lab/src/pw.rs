//! Comparison of the weight and perverse filtrations on the cohomology ring.
//!
//! The weight side is read off the bigrading: level i of H^d is spanned by
//! the basis classes of weight ≤ i. The perverse side is assembled from the
//! sl₂ strings: level i of H^d is Σ Y^j P^{d−2j}_w over w + 2j ≤ i. Both are
//! materialized as canonical subspaces of the degree stack ⊕_w H^d_w and
//! compared as subspaces, not merely by dimension.

use std::collections::BTreeMap;

use num::traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::lefschetz::{BiGradedModule, HlVerdict};
use crate::rational::{binomial, Rational};
use crate::ring::RingPresentation;
use crate::subspace::Subspace;
use crate::{PwError, Result};

/// Coordinate layout of the degree stack ⊕_w H^d_w (weights ascending).
#[derive(Debug, Clone)]
pub struct DegreeLayout {
    pub d: usize,
    /// (weight, dimension, offset) per block.
    pub blocks: Vec<(usize, usize, usize)>,
    pub total: usize,
}

impl DegreeLayout {
    pub fn new(module: &BiGradedModule, d: usize) -> Self {
        let mut blocks = Vec::new();
        let mut offset = 0;
        for (w, dim) in module.degree_stack(d) {
            blocks.push((w, dim, offset));
            offset += dim;
        }
        DegreeLayout { d, blocks, total: offset }
    }

    pub fn block(&self, w: usize) -> Option<(usize, usize)> {
        self.blocks
            .iter()
            .find(|&&(bw, _, _)| bw == w)
            .map(|&(_, dim, offset)| (dim, offset))
    }

    /// Place a vector living in the (d, w) piece at its block offset.
    pub fn embed(&self, w: usize, v: &[Rational]) -> Result<Vec<Rational>> {
        let (dim, offset) = self
            .block(w)
            .ok_or_else(|| PwError::InvalidParameter(format!("no block of weight {w} in degree {}", self.d)))?;
        if v.len() != dim {
            return Err(PwError::DimensionMismatch(format!(
                "vector of length {} into block of dimension {dim}",
                v.len()
            )));
        }
        let mut out = vec![Rational::zero(); self.total];
        out[offset..offset + dim].clone_from_slice(v);
        Ok(out)
    }

    /// Split a stacked vector back into its weight components.
    pub fn split(&self, v: &[Rational]) -> Vec<(usize, Vec<Rational>)> {
        self.blocks
            .iter()
            .map(|&(w, dim, offset)| (w, v[offset..offset + dim].to_vec()))
            .collect()
    }
}

/// One row of the filtration comparison: degree, level, both dimensions and
/// whether the two subspaces agree exactly.
#[derive(Debug, Clone, Serialize)]
pub struct LevelVerdict {
    pub d: usize,
    pub level: usize,
    pub weight_dim: usize,
    pub perverse_dim: usize,
    pub equal: bool,
}

/// Per-weight check that the primitives are spanned by projections of the
/// monomials β^s ψ_S with 2(s + |S|) = w.
#[derive(Debug, Clone, Serialize)]
pub struct PrimitiveSpanVerdict {
    pub d: usize,
    pub w: usize,
    pub primitive_dim: usize,
    pub span_dim: usize,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorPlacement {
    pub name: String,
    pub degree: usize,
    pub level: Option<usize>,
}

/// Aggregate result of the filtration comparison for one (g, degD) case.
#[derive(Debug, Clone, Serialize)]
pub struct PwReport {
    pub g: usize,
    pub deg_d: usize,
    pub w0: usize,
    pub levels: Vec<LevelVerdict>,
    pub primitive_spans: Vec<PrimitiveSpanVerdict>,
    pub curious_hl: Vec<HlVerdict>,
    pub generators: Vec<GeneratorPlacement>,
    pub no_mixing_ok: bool,
    pub perversity_window_ok: bool,
    /// Canonical case only: the middle perverse level of the top degree dies.
    pub top_degree_middle_vanishes: Option<bool>,
    /// Canonical case only: β^s is primitive of bidegree (4s, 2s), s ≤ g−1.
    pub beta_powers_primitive: Option<bool>,
    pub multiplicativity_ok: bool,
    pub pass: bool,
}

/// Filtration analysis bound to one ring presentation and its sl₂ module.
pub struct PwChecker<'a> {
    pres: &'a RingPresentation,
    module: &'a BiGradedModule,
    /// Per degree: layout and the canonical block subspaces Σ_j Y^j P pieces
    /// of each weight (the perverse level-w contribution inside H^d_w).
    degrees: BTreeMap<usize, DegreeData>,
}

struct DegreeData {
    layout: DegreeLayout,
    /// weight → canonical subspace of that block spanned by the isobaric
    /// pieces Y^j P^{d−2j}_{w−2j}.
    perverse_blocks: BTreeMap<usize, Subspace>,
}

impl<'a> PwChecker<'a> {
    pub fn new(pres: &'a RingPresentation, module: &'a BiGradedModule) -> Result<Self> {
        let mut degrees = BTreeMap::new();
        for d in 0..=module.max_degree() {
            let layout = DegreeLayout::new(module, d);
            if layout.total == 0 {
                continue;
            }
            let mut perverse_blocks = BTreeMap::new();
            for &(w, dim, _) in &layout.blocks {
                let mut vectors = Vec::new();
                // Pieces of perverse level exactly w inside H^d_w: Y^j applied
                // to the primitives of weight w − 2j in degree d − 2j.
                for j in 0..=w / 2 {
                    let w_src = w - 2 * j;
                    if 2 * j > d {
                        break;
                    }
                    let piece = module.isobaric_piece(w_src, j, d)?;
                    vectors.extend(piece.basis().iter().cloned());
                }
                let span = Subspace::from_spanning(dim, vectors)?;
                perverse_blocks.insert(w, span);
            }
            degrees.insert(d, DegreeData { layout, perverse_blocks });
        }
        Ok(PwChecker { pres, module, degrees })
    }

    pub fn presentation(&self) -> &RingPresentation {
        self.pres
    }

    pub fn layout(&self, d: usize) -> Option<&DegreeLayout> {
        self.degrees.get(&d).map(|data| &data.layout)
    }

    /// Weight filtration level i of H^d as a canonical subspace of the stack.
    pub fn weight_filtration_level(&self, d: usize, level: usize) -> Result<Subspace> {
        let Some(data) = self.degrees.get(&d) else {
            return Subspace::from_spanning(0, Vec::new());
        };
        let mut rows = Vec::new();
        for &(w, dim, offset) in &data.layout.blocks {
            if w > level {
                continue;
            }
            for c in 0..dim {
                let mut row = vec![Rational::zero(); data.layout.total];
                row[offset + c] = Rational::from_integer(1.into());
                rows.push(row);
            }
        }
        Subspace::from_canonical_rows(data.layout.total, rows)
    }

    /// Perverse filtration level i of H^d as a canonical subspace of the
    /// stack: the sum of Y^j P^{d−2j}_w over w + 2j ≤ i.
    pub fn perverse_filtration_level(&self, d: usize, level: usize) -> Result<Subspace> {
        let Some(data) = self.degrees.get(&d) else {
            return Subspace::from_spanning(0, Vec::new());
        };
        let mut rows = Vec::new();
        for &(w, _, _) in &data.layout.blocks {
            if w > level {
                continue;
            }
            let block = &data.perverse_blocks[&w];
            for v in block.basis() {
                rows.push(data.layout.embed(w, v)?);
            }
        }
        // Blocks occupy disjoint coordinate ranges, so the pieced-together
        // rows are already a reduced echelon basis.
        Subspace::from_canonical_rows(data.layout.total, rows)
    }

    /// Compare both filtrations at every degree and level.
    pub fn filtration_verdicts(&self) -> Result<Vec<LevelVerdict>> {
        let mut rows = Vec::new();
        let top_level = 2 * self.module.w0;
        for (&d, _) in &self.degrees {
            for level in 0..=top_level {
                let wside = self.weight_filtration_level(d, level)?;
                let pside = self.perverse_filtration_level(d, level)?;
                rows.push(LevelVerdict {
                    d,
                    level,
                    weight_dim: wside.dim(),
                    perverse_dim: pside.dim(),
                    equal: wside.equal(&pside)?,
                });
            }
        }
        Ok(rows)
    }

    /// Per (d, w): primitives coincide with the span of projections of the
    /// monomials β^s ψ_S of that bidegree (s = d − 3w/2, |S| = w/2 − s).
    pub fn primitive_span_verdicts(&self) -> Result<Vec<PrimitiveSpanVerdict>> {
        let g = self.pres.g;
        let mut rows = Vec::new();
        for ((d, w), _) in self.module.dims() {
            if w > self.module.w0 || w % 2 != 0 {
                continue;
            }
            let primitive = self.module.primitive_basis(d, w)?;
            let mut vectors = Vec::new();
            if 3 * w <= 2 * d && 2 * d <= 4 * w {
                // 4s + 3t = d and 2s + 2t = w pin down the exponents.
                let double_s = 2 * d - 3 * w;
                if double_s % 2 == 0 {
                    let s = double_s / 2;
                    let t = w / 2 - s;
                    for subset in crate::exterior::subsets_of_size(2 * g, t) {
                        let mono = self.pres.monomial_beta_psi(s, subset)?;
                        if mono.is_zero() {
                            continue;
                        }
                        let coords = self.pres.coords_at(&mono, d, w)?;
                        let projected = self.module.primitive_projection(&coords, d, w)?;
                        vectors.push(projected);
                    }
                }
            }
            let dim = self.module.dim_at(d, w);
            let span = Subspace::from_spanning(dim, vectors)?;
            rows.push(PrimitiveSpanVerdict {
                d,
                w,
                primitive_dim: primitive.dim(),
                span_dim: span.dim(),
                equal: primitive.equal(&span)?,
            });
        }
        Ok(rows)
    }

    /// Curious hard Lefschetz: cupping with α^k maps the weight-(w0−k) stack
    /// isomorphically onto the weight-(w0+k) stack.
    pub fn curious_hl_check(&self) -> Vec<HlVerdict> {
        self.module.hard_lefschetz_verify()
    }

    /// Smallest perverse level containing a stacked degree-d vector, if any.
    pub fn perverse_level_of(&self, d: usize, stacked: &[Rational]) -> Result<Option<usize>> {
        let Some(data) = self.degrees.get(&d) else {
            return Ok(None);
        };
        if stacked.len() != data.layout.total {
            return Err(PwError::DimensionMismatch("stacked vector vs degree layout".into()));
        }
        let mut level = 0usize;
        for (w, component) in data.layout.split(stacked) {
            if component.iter().all(|x| x.is_zero()) {
                continue;
            }
            if !data.perverse_blocks[&w].contains(&component)? {
                return Ok(None);
            }
            level = level.max(w);
        }
        Ok(Some(level))
    }

    fn stacked_coords(&self, elem: &crate::ring::RingElement, d: usize) -> Result<Vec<Rational>> {
        let Some(data) = self.degrees.get(&d) else {
            return Err(PwError::InvalidParameter(format!("degree {d} is empty")));
        };
        let mut out = vec![Rational::zero(); data.layout.total];
        for (&idx, coeff) in elem.coeffs() {
            let be = &self.pres.basis[idx];
            if be.d() != d {
                return Err(PwError::NotHomogeneous(format!(
                    "element mixes degrees {d} and {}",
                    be.d()
                )));
            }
            let (dim, offset) = data
                .layout
                .block(be.w())
                .ok_or_else(|| PwError::InvalidParameter("missing weight block".into()))?;
            let local = self.pres.basis_indices_at(d, be.w());
            let pos = local
                .iter()
                .position(|&j| j == idx)
                .ok_or_else(|| PwError::InvalidParameter("basis index outside its block".into()))?;
            debug_assert!(pos < dim);
            out[offset + pos] = coeff.clone();
        }
        Ok(out)
    }

    /// Perverse level of a homogeneous ring element.
    pub fn level_of_element(&self, elem: &crate::ring::RingElement) -> Result<Option<usize>> {
        if elem.is_zero() {
            return Ok(Some(0));
        }
        let (d, _) = degree_of(self.pres, elem)?;
        let stacked = self.stacked_coords(elem, d)?;
        self.perverse_level_of(d, &stacked)
    }

    /// Levels of the multiplicative generators: α, β and each ψ_i sit at
    /// perverse level 2.
    pub fn generator_placements(&self) -> Result<Vec<GeneratorPlacement>> {
        let mut out = Vec::new();
        let alpha = self.pres.alpha();
        out.push(GeneratorPlacement {
            name: "alpha".into(),
            degree: 2,
            level: self.level_of_element(&alpha)?,
        });
        let beta = self.pres.beta();
        out.push(GeneratorPlacement {
            name: "beta".into(),
            degree: 4,
            level: self.level_of_element(&beta)?,
        });
        for i in 1..=2 * self.pres.g {
            let psi = self.pres.psi_gen(i)?;
            out.push(GeneratorPlacement {
                name: format!("psi{i}"),
                degree: 3,
                level: self.level_of_element(&psi)?,
            });
        }
        Ok(out)
    }

    /// No mixing: inside each perverse level, the classes killed by the
    /// complementary power of Y are exactly the primitives of that level.
    pub fn no_mixing_check(&self) -> Result<bool> {
        let w0 = self.module.w0;
        for (&d, data) in &self.degrees {
            for &(p, _, _) in &data.layout.blocks {
                if p > w0 {
                    continue;
                }
                let filt = self.perverse_filtration_level(d, p)?;
                let kernel = self.stacked_y_kernel(d, w0 + 1 - p)?;
                let meet = filt.intersect_pair(&kernel)?;
                let primitive = self.module.primitive_basis(d, p)?;
                let mut embedded = Vec::new();
                for v in primitive.basis() {
                    embedded.push(data.layout.embed(p, v)?);
                }
                let target = Subspace::from_spanning(data.layout.total, embedded)?;
                if !meet.is_subspace_of(&target)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Kernel of Y^l on the degree stack, taken blockwise (Y preserves
    /// weights up to the shift by 2l in degree and weight).
    fn stacked_y_kernel(&self, d: usize, l: usize) -> Result<Subspace> {
        let data = &self.degrees[&d];
        let mut rows = Vec::new();
        for &(w, dim, _) in &data.layout.blocks {
            let map = self.module.y_power(d, w, l);
            for v in map.kernel_basis() {
                rows.push(data.layout.embed(w, &v)?);
            }
            debug_assert!(map.cols == dim);
        }
        Subspace::from_spanning(data.layout.total, rows)
    }

    /// Every class of degree d sits at perverse level within [⌈d/2⌉, d].
    pub fn perversity_window_check(&self) -> bool {
        self.module
            .dims()
            .all(|((d, w), dim)| dim == 0 || (2 * w >= d && w <= d))
    }

    /// Canonical case: level 3g−3 of H^{6g−6} vanishes even though the space
    /// itself does not.
    pub fn top_degree_middle_check(&self) -> Result<Option<bool>> {
        if self.pres.n != 0 {
            return Ok(None);
        }
        let g = self.pres.g;
        let d = 6 * g - 6;
        let half = 3 * g - 3;
        let level = self.perverse_filtration_level(d, half)?;
        let total = self.degrees.get(&d).map_or(0, |data| data.layout.total);
        Ok(Some(level.dim() == 0 && total > 0))
    }

    /// Canonical case: β^s lands in P^{4s}_{2s} without projection, s ≤ g−1,
    /// and the top power β^{g−1} is nonzero.
    pub fn beta_powers_primitive_check(&self) -> Result<Option<bool>> {
        if self.pres.n != 0 {
            return Ok(None);
        }
        let g = self.pres.g;
        let beta = self.pres.beta();
        let mut power = self.pres.one();
        for s in 0..=g - 1 {
            if s > 0 {
                power = self.pres.mul(&power, &beta)?;
            }
            if power.is_zero() {
                return Ok(Some(false));
            }
            let coords = self.pres.coords_at(&power, 4 * s, 2 * s)?;
            let primitive = self.module.primitive_basis(4 * s, 2 * s)?;
            if !primitive.contains(&coords)? {
                return Ok(Some(false));
            }
        }
        Ok(Some(true))
    }

    /// Products of generators land at the sum of the factors' levels or
    /// lower, exercising multiplicativity of the perverse filtration.
    pub fn multiplicativity_check(&self) -> Result<bool> {
        let mut gens: Vec<crate::ring::RingElement> = vec![self.pres.alpha(), self.pres.beta()];
        for i in 1..=2 * self.pres.g {
            gens.push(self.pres.psi_gen(i)?);
        }
        let mut levels = Vec::new();
        for gen in &gens {
            match self.level_of_element(gen)? {
                Some(l) => levels.push(l),
                None => return Ok(false),
            }
        }
        for (a, la) in gens.iter().zip(&levels) {
            for (b, lb) in gens.iter().zip(&levels) {
                let prod = self.pres.mul(a, b)?;
                if prod.is_zero() {
                    continue;
                }
                match self.level_of_element(&prod)? {
                    Some(lp) => {
                        if lp > la + lb {
                            return Ok(false);
                        }
                    }
                    None => return Ok(false),
                }
            }
        }
        Ok(true)
    }

    /// Run the whole battery and fold the verdicts into one report.
    pub fn full_report(&self) -> Result<PwReport> {
        let levels = self.filtration_verdicts()?;
        let primitive_spans = self.primitive_span_verdicts()?;
        let curious_hl = self.curious_hl_check();
        let generators = self.generator_placements()?;
        let no_mixing_ok = self.no_mixing_check()?;
        let perversity_window_ok = self.perversity_window_check();
        let top_degree_middle_vanishes = self.top_degree_middle_check()?;
        let beta_powers_primitive = self.beta_powers_primitive_check()?;
        let multiplicativity_ok = self.multiplicativity_check()?;

        let generators_ok = generators.iter().all(|p| p.level == Some(2));
        let pass = levels.iter().all(|v| v.equal)
            && primitive_spans.iter().all(|v| v.equal)
            && curious_hl.iter().all(|v| v.bijective)
            && generators_ok
            && no_mixing_ok
            && perversity_window_ok
            && top_degree_middle_vanishes != Some(false)
            && beta_powers_primitive != Some(false)
            && multiplicativity_ok;

        Ok(PwReport {
            g: self.pres.g,
            deg_d: self.pres.deg_d,
            w0: self.module.w0,
            levels,
            primitive_spans,
            curious_hl,
            generators,
            no_mixing_ok,
            perversity_window_ok,
            top_degree_middle_vanishes,
            beta_powers_primitive,
            multiplicativity_ok,
            pass,
        })
    }

    /// Weight-filtration level dimensions L(d, i) for the group extension.
    fn level_dims(&self) -> Result<BTreeMap<(usize, usize), usize>> {
        let mut out = BTreeMap::new();
        let top = 2 * self.module.w0;
        for (&d, data) in &self.degrees {
            for i in 0..=top {
                let dim: usize = data
                    .layout
                    .blocks
                    .iter()
                    .filter(|&&(w, _, _)| w <= i)
                    .map(|&(_, dim, _)| dim)
                    .sum();
                out.insert((d, i), dim);
            }
        }
        Ok(out)
    }

    fn perverse_level_dims(&self) -> Result<BTreeMap<(usize, usize), usize>> {
        let mut out = BTreeMap::new();
        let top = 2 * self.module.w0;
        for (&d, data) in &self.degrees {
            for i in 0..=top {
                let dim: usize = data
                    .layout
                    .blocks
                    .iter()
                    .filter(|&&(w, _, _)| w <= i)
                    .map(|&(w, _, _)| data.perverse_blocks[&w].dim())
                    .sum();
                out.insert((d, i), dim);
            }
        }
        Ok(out)
    }

    /// Filtration comparison after tensoring with the exterior algebra of the
    /// torus: levels convolve with binomial weights, the odd generators ε_i
    /// entering at level 1.
    pub fn gl2_check(&self) -> Result<Gl2PwReport> {
        let g = self.pres.g;
        let weight_levels = self.level_dims()?;
        let perverse_levels = self.perverse_level_dims()?;
        let max_d = self.module.max_degree() + 2 * g;
        let max_level = 2 * self.module.w0 + 2 * g;

        let convolve = |table: &BTreeMap<(usize, usize), usize>, d: usize, i: usize| -> usize {
            let mut total = 0usize;
            for j in 0..=2 * g {
                if j > d || j > i {
                    continue;
                }
                let coef = binomial(2 * g, j as isize)
                    .to_usize()
                    .expect("binomial fits usize");
                let inner = table.get(&(d - j, i - j)).copied().unwrap_or_else(|| {
                    // Levels saturate above the window; reuse the top row.
                    if d - j <= self.module.max_degree() {
                        *table
                            .range((d - j, 0)..=(d - j, usize::MAX))
                            .last()
                            .map(|(_, v)| v)
                            .unwrap_or(&0)
                    } else {
                        0
                    }
                });
                total += coef * inner;
            }
            total
        };

        let mut rows = Vec::new();
        let mut all_equal = true;
        for d in 0..=max_d {
            for i in 0..=max_level {
                let wdim = convolve(&weight_levels, d, i);
                let pdim = convolve(&perverse_levels, d, i);
                if wdim == 0 && pdim == 0 {
                    continue;
                }
                if wdim != pdim {
                    all_equal = false;
                }
                rows.push(Gl2LevelRow { d, level: i, weight_dim: wdim, perverse_dim: pdim });
            }
        }

        // ε_i lives in degree 1; its level is where H^1 first becomes nonzero.
        let epsilon_level = (0..=max_level)
            .find(|&i| convolve(&perverse_levels, 1, i) > 0)
            .ok_or_else(|| PwError::InvalidParameter("degree 1 stays empty".into()))?;
        let epsilon_count = convolve(&perverse_levels, 1, epsilon_level);

        let pass = all_equal && epsilon_level == 1 && epsilon_count == 2 * g;
        Ok(Gl2PwReport { g, deg_d: self.pres.deg_d, rows, epsilon_level, epsilon_count, pass })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Gl2LevelRow {
    pub d: usize,
    pub level: usize,
    pub weight_dim: usize,
    pub perverse_dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Gl2PwReport {
    pub g: usize,
    pub deg_d: usize,
    pub rows: Vec<Gl2LevelRow>,
    pub epsilon_level: usize,
    pub epsilon_count: usize,
    pub pass: bool,
}

fn degree_of(pres: &RingPresentation, elem: &crate::ring::RingElement) -> Result<(usize, Vec<usize>)> {
    let mut degree = None;
    let mut weights = Vec::new();
    for (&idx, _) in elem.coeffs() {
        let be = &pres.basis[idx];
        match degree {
            None => degree = Some(be.d()),
            Some(d) if d == be.d() => {}
            Some(d) => {
                return Err(PwError::NotHomogeneous(format!("degrees {d} and {} mixed", be.d())))
            }
        }
        weights.push(be.w());
    }
    let d = degree.ok_or_else(|| PwError::InvalidParameter("zero element has no degree".into()))?;
    Ok((d, weights))
}
