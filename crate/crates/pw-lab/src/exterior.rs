//! Exterior algebra on 2g odd generators ψ_1, ..., ψ_2g with the symplectic
//! class γ = -2 Σ ψ_i ψ_{i+g}, its primitive subspaces, and the Lefschetz
//! decomposition of wedge powers.

use crate::matrix::Matrix;
use crate::rational::{rat, Rational};
use crate::{PwError, Result};
use num::traits::Zero;
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// Generators are indexed 1..=2g; a monomial ψ_S is stored as the bitmask
/// with bit i-1 set for each i in S.
pub type Subset = u32;

/// Sign produced when concatenating two disjoint sorted index sets and
/// resorting: parity of the number of pairs (i in a, j in b) with j < i.
pub fn merge_sign(a: Subset, b: Subset) -> i32 {
    let mut inversions = 0u32;
    let mut bits = a;
    while bits != 0 {
        let i = bits.trailing_zeros();
        inversions += (b & ((1u32 << i) - 1)).count_ones();
        bits &= bits - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All k-element subsets of {1..n} as bitmasks, in increasing numeric order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Subset> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    // Gosper-style walk over masks of fixed popcount.
    if k == 0 {
        return vec![0];
    }
    let mut s: Subset = (1u32 << k) - 1;
    let limit: Subset = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    while s <= limit {
        out.push(s);
        let c = s & s.wrapping_neg();
        let r = s + c;
        if r == 0 {
            break;
        }
        s = (((r ^ s) >> 2) / c) | r;
    }
    out
}

/// Element of the exterior algebra on 2g generators; sparse over the subset
/// basis, zero coefficients never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorElement {
    pub g: usize,
    terms: BTreeMap<Subset, Rational>,
}

impl ExteriorElement {
    pub fn zero(g: usize) -> Self {
        ExteriorElement { g, terms: BTreeMap::new() }
    }

    pub fn one(g: usize) -> Self {
        Self::monomial(g, 0, rat(1))
    }

    /// c · ψ_S.
    pub fn monomial(g: usize, subset: Subset, coeff: Rational) -> Self {
        let mut e = ExteriorElement::zero(g);
        e.add_term(subset, coeff);
        e
    }

    /// The generator ψ_i, 1 <= i <= 2g.
    pub fn psi(g: usize, i: usize) -> Result<Self> {
        if i == 0 || i > 2 * g {
            return Err(PwError::InvalidParameter(format!(
                "psi index {} out of 1..={}",
                i,
                2 * g
            )));
        }
        Ok(Self::monomial(g, 1 << (i - 1), rat(1)))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Subset, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, subset: Subset) -> Rational {
        self.terms.get(&subset).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, subset: Subset, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(subset).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&subset);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_genus(other)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(*s, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return ExteriorElement::zero(self.g);
        }
        let terms = self.terms.iter().map(|(s, v)| (*s, v * c)).collect();
        ExteriorElement { g: self.g, terms }
    }

    /// Wedge product; terms with a repeated generator vanish.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_genus(other)?;
        let mut out = ExteriorElement::zero(self.g);
        for (s1, c1) in &self.terms {
            for (s2, c2) in &other.terms {
                if s1 & s2 != 0 {
                    continue;
                }
                let sign = merge_sign(*s1, *s2);
                out.add_term(s1 | s2, c1 * c2 * rat(sign as i64));
            }
        }
        Ok(out)
    }

    /// Exterior degree when homogeneous; None for the zero element.
    pub fn homogeneous_degree(&self) -> Result<Option<usize>> {
        let mut deg = None;
        for s in self.terms.keys() {
            let k = s.count_ones() as usize;
            match deg {
                None => deg = Some(k),
                Some(d) if d != k => {
                    return Err(PwError::NotHomogeneous(format!(
                        "mixed exterior degrees {} and {}",
                        d, k
                    )))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Coordinates over the size-k subset basis in increasing numeric order.
    pub fn to_vector(&self, k: usize) -> Result<Vec<Rational>> {
        let subsets = subsets_of_size(2 * self.g, k);
        let mut v = vec![Rational::zero(); subsets.len()];
        for (s, c) in &self.terms {
            if s.count_ones() as usize != k {
                return Err(PwError::NotHomogeneous(format!(
                    "term of degree {} in a degree-{} vector",
                    s.count_ones(),
                    k
                )));
            }
            let idx = subsets.binary_search(s).expect("subset in basis");
            v[idx] = c.clone();
        }
        Ok(v)
    }

    pub fn from_vector(g: usize, k: usize, v: &[Rational]) -> Result<Self> {
        let subsets = subsets_of_size(2 * g, k);
        if subsets.len() != v.len() {
            return Err(PwError::DimensionMismatch(format!(
                "degree-{} coordinate length {} vs {}",
                k,
                v.len(),
                subsets.len()
            )));
        }
        let mut e = ExteriorElement::zero(g);
        for (s, c) in subsets.iter().zip(v) {
            e.add_term(*s, c.clone());
        }
        Ok(e)
    }

    fn check_genus(&self, other: &Self) -> Result<()> {
        if self.g != other.g {
            return Err(PwError::GenusMismatch { left: self.g, right: other.g });
        }
        Ok(())
    }
}

/// γ = -2 Σ_{i=1}^{g} ψ_i ψ_{i+g}; degree 2 in the exterior grading.
pub fn gamma_element(g: usize) -> ExteriorElement {
    let mut e = ExteriorElement::zero(g);
    for i in 1..=g {
        let mask = (1u32 << (i - 1)) | (1u32 << (i - 1 + g));
        e.add_term(mask, rat(-2));
    }
    e
}

/// γ^p as an exterior element.
pub fn gamma_power(g: usize, p: usize) -> ExteriorElement {
    let mut acc = ExteriorElement::one(g);
    let gamma = gamma_element(g);
    for _ in 0..p {
        acc = acc.wedge(&gamma).expect("same genus");
    }
    acc
}

/// Matrix of (elem ∧ ·) from degree k to degree k + deg(elem), in subset
/// coordinates.
pub fn wedge_matrix(elem: &ExteriorElement, k: usize) -> Result<Matrix> {
    let g = elem.g;
    let m = elem
        .homogeneous_degree()?
        .ok_or_else(|| PwError::InvalidParameter("wedge matrix of zero element".into()))?;
    let source = subsets_of_size(2 * g, k);
    let target_len = subsets_of_size(2 * g, k + m).len();
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(source.len());
    for s in &source {
        let prod = elem.wedge(&ExteriorElement::monomial(g, *s, rat(1)))?;
        cols.push(prod.to_vector(k + m)?);
    }
    // assemble column-wise
    let mut out = Matrix::zero(target_len, source.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            if !v.is_zero() {
                out.set(i, j, v.clone());
            }
        }
    }
    Ok(out)
}

/// Canonical basis of Λ_0^k = Ker(γ^{g+1-k} ∧ · : ∧^k → ∧^{2g+2-k}) for
/// 0 <= k <= g; the zero space for k > g.
#[derive(Debug, Clone)]
pub struct Lambda0Basis {
    pub g: usize,
    pub k: usize,
    pub vectors: Vec<ExteriorElement>,
}

impl Lambda0Basis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// The exterior algebra with its primitive bases and decomposition solvers
/// precomputed per degree.
pub struct ExteriorAlgebra {
    pub g: usize,
    lambda0: Vec<Lambda0Basis>,
    decomp_inverse: Vec<OnceLock<Matrix>>,
}

/// One piece of a Lefschetz decomposition: the coefficient vector of the
/// Λ_0^{k-2i} component under γ^i.
#[derive(Debug, Clone)]
pub struct LefschetzComponent {
    pub i: usize,
    pub k0: usize,
    pub coords: Vec<Rational>,
}

impl ExteriorAlgebra {
    pub fn new(g: usize) -> Result<Self> {
        if g == 0 {
            return Err(PwError::InvalidParameter("genus must be positive".into()));
        }
        if 2 * g > 20 {
            return Err(PwError::InvalidParameter(format!(
                "genus {} exceeds the supported subset-basis width",
                g
            )));
        }
        let mut lambda0 = Vec::with_capacity(2 * g + 1);
        for k in 0..=2 * g {
            lambda0.push(Self::compute_lambda0(g, k)?);
        }
        let decomp_inverse = (0..=2 * g).map(|_| OnceLock::new()).collect();
        Ok(ExteriorAlgebra { g, lambda0, decomp_inverse })
    }

    fn compute_lambda0(g: usize, k: usize) -> Result<Lambda0Basis> {
        if k > g {
            return Ok(Lambda0Basis { g, k, vectors: Vec::new() });
        }
        let power = gamma_power(g, g + 1 - k);
        let vectors = if power.is_zero() {
            // γ^{g+1-k} already vanishes: the whole degree is primitive.
            subsets_of_size(2 * g, k)
                .into_iter()
                .map(|s| ExteriorElement::monomial(g, s, rat(1)))
                .collect()
        } else {
            let m = wedge_matrix(&power, k)?;
            m.kernel_basis()
                .into_iter()
                .map(|v| ExteriorElement::from_vector(g, k, &v))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Lambda0Basis { g, k, vectors })
    }

    pub fn lambda0(&self, k: usize) -> &Lambda0Basis {
        static EMPTY: OnceLock<Lambda0Basis> = OnceLock::new();
        if k <= 2 * self.g {
            &self.lambda0[k]
        } else {
            EMPTY.get_or_init(|| Lambda0Basis { g: 0, k: usize::MAX, vectors: Vec::new() })
        }
    }

    pub fn lambda0_dim(&self, k: usize) -> usize {
        self.lambda0(k).dim()
    }

    /// Column layout of the decomposition matrix at degree k: for each i with
    /// 0 <= k-2i and Λ_0^{k-2i} nonzero, the columns γ^i ∧ (basis of
    /// Λ_0^{k-2i}).
    fn decomposition_layout(&self, k: usize) -> Vec<(usize, usize)> {
        let mut layout = Vec::new();
        for i in 0..=k / 2 {
            let k0 = k - 2 * i;
            // γ^i is injective on Λ_0^{k0} only while i <= g - k0
            if self.lambda0_dim(k0) > 0 && i + k0 <= self.g {
                layout.push((i, k0));
            }
        }
        layout
    }

    fn decomposition_inverse(&self, k: usize) -> Result<&Matrix> {
        if let Some(m) = self.decomp_inverse[k].get() {
            return Ok(m);
        }
        let n = subsets_of_size(2 * self.g, k).len();
        let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(n);
        for (i, k0) in self.decomposition_layout(k) {
            let gp = gamma_power(self.g, i);
            for b in &self.lambda0(k0).vectors {
                cols.push(gp.wedge(b)?.to_vector(k)?);
            }
        }
        if cols.len() != n {
            return Err(PwError::DimensionMismatch(format!(
                "Lefschetz decomposition at degree {} spans {} of {}",
                k,
                cols.len(),
                n
            )));
        }
        let mut m = Matrix::zero(n, n);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        let inv = m.inverse().ok_or_else(|| {
            PwError::NoSolution(format!("decomposition matrix at degree {} is singular", k))
        })?;
        let _ = self.decomp_inverse[k].set(inv);
        Ok(self.decomp_inverse[k].get().expect("just set"))
    }

    /// Lefschetz decomposition of a homogeneous element: v = Σ_i γ^i ∧ c_i
    /// with c_i in Λ_0^{k-2i}. Unique; components returned as coefficient
    /// vectors over the stored Λ_0 bases.
    pub fn lefschetz_decompose(&self, v: &ExteriorElement) -> Result<Vec<LefschetzComponent>> {
        if v.g != self.g {
            return Err(PwError::GenusMismatch { left: self.g, right: v.g });
        }
        let Some(k) = v.homogeneous_degree()? else {
            return Ok(Vec::new());
        };
        if k > 2 * self.g {
            return Ok(Vec::new());
        }
        let inv = self.decomposition_inverse(k)?;
        let x = inv.apply(&v.to_vector(k)?)?;
        let mut out = Vec::new();
        let mut offset = 0;
        for (i, k0) in self.decomposition_layout(k) {
            let d = self.lambda0_dim(k0);
            let coords = x[offset..offset + d].to_vec();
            offset += d;
            if coords.iter().any(|c| !c.is_zero()) {
                out.push(LefschetzComponent { i, k0, coords });
            }
        }
        Ok(out)
    }

    /// Realize a component as an exterior element γ^i ∧ (Σ coords · basis).
    pub fn component_element(&self, c: &LefschetzComponent) -> Result<ExteriorElement> {
        let mut prim = ExteriorElement::zero(self.g);
        for (coef, b) in c.coords.iter().zip(&self.lambda0(c.k0).vectors) {
            prim = prim.add(&b.scale(coef))?;
        }
        gamma_power(self.g, c.i).wedge(&prim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{binomial, ratio};
    use num::bigint::BigInt;
    use proptest::prelude::*;

    /// Direct-expansion oracle for γ ∧ γ: square -2 Σ ψ_i ψ_{i+g} by looping
    /// over ordered pairs, computing each sign by counting inversions of the
    /// concatenated index sequence (independent of merge_sign).
    fn gamma_square_oracle(g: usize) -> BTreeMap<Vec<usize>, i64> {
        let mut acc: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
        for i in 1..=g {
            for j in 1..=g {
                if i == j {
                    continue; // repeated generators kill the term
                }
                let seq = vec![i, i + g, j, j + g];
                let mut sorted = seq.clone();
                let mut sign = 1i64;
                // bubble sort counting swaps
                for a in 0..sorted.len() {
                    for b in 0..sorted.len() - 1 - a {
                        if sorted[b] > sorted[b + 1] {
                            sorted.swap(b, b + 1);
                            sign = -sign;
                        }
                    }
                }
                *acc.entry(sorted).or_insert(0) += 4 * sign; // (-2)(-2) = 4
            }
        }
        acc.retain(|_, v| *v != 0);
        acc
    }

    #[test]
    fn generators_anticommute() {
        let g = 2;
        let p1 = ExteriorElement::psi(g, 1).unwrap();
        let p2 = ExteriorElement::psi(g, 2).unwrap();
        let a = p1.wedge(&p2).unwrap();
        let b = p2.wedge(&p1).unwrap();
        assert_eq!(a, b.scale(&rat(-1)));
        assert!(p1.wedge(&p1).unwrap().is_zero());
    }

    #[test]
    fn gamma_square_matches_direct_expansion() {
        for g in 1..=3 {
            let sq = gamma_element(g).wedge(&gamma_element(g)).unwrap();
            let oracle = gamma_square_oracle(g);
            let mut expected = ExteriorElement::zero(g);
            for (indices, c) in &oracle {
                let mut mask = 0u32;
                for i in indices {
                    mask |= 1 << (i - 1);
                }
                expected.add_term(mask, rat(*c));
            }
            assert_eq!(sq, expected);
        }
        // frozen value: for g=2 the square is -8 ψ_1ψ_2ψ_3ψ_4
        let sq = gamma_power(2, 2);
        assert_eq!(sq.coeff(0b1111), rat(-8));
        assert_eq!(sq.terms().count(), 1);
    }

    #[test]
    fn gamma_square_vanishes_at_genus_one() {
        assert!(gamma_power(1, 2).is_zero());
    }

    #[test]
    fn lambda0_dims_small_genus() {
        // frozen: g=2 -> [1, 4, 5]; g=3 -> [1, 6, 14, 14]
        let a2 = ExteriorAlgebra::new(2).unwrap();
        assert_eq!((0..=2).map(|k| a2.lambda0_dim(k)).collect::<Vec<_>>(), vec![1, 4, 5]);
        assert_eq!(a2.lambda0_dim(3), 0);
        let a3 = ExteriorAlgebra::new(3).unwrap();
        assert_eq!(
            (0..=3).map(|k| a3.lambda0_dim(k)).collect::<Vec<_>>(),
            vec![1, 6, 14, 14]
        );
    }

    #[test]
    fn lambda0_dim_matches_binomial_difference() {
        for g in 1..=4usize {
            let alg = ExteriorAlgebra::new(g).unwrap();
            for k in 0..=g {
                let expected = binomial(2 * g, k as isize) - binomial(2 * g, k as isize - 2);
                assert_eq!(BigInt::from(alg.lambda0_dim(k)), expected, "g={} k={}", g, k);
            }
        }
    }

    #[test]
    fn lambda0_vectors_lie_in_kernel() {
        for g in 2..=3usize {
            let alg = ExteriorAlgebra::new(g).unwrap();
            for k in 0..=g {
                let power = gamma_power(g, g + 1 - k);
                for b in &alg.lambda0(k).vectors {
                    assert!(power.wedge(b).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn decomposition_of_a_symplectic_pair() {
        // frozen: for g=2, ψ_1ψ_3 has γ-component -1/4
        let alg = ExteriorAlgebra::new(2).unwrap();
        let v = ExteriorElement::monomial(2, 0b0101, rat(1)); // ψ_1 ψ_3
        let comps = alg.lefschetz_decompose(&v).unwrap();
        let gamma_comp = comps.iter().find(|c| c.k0 == 0).unwrap();
        assert_eq!(gamma_comp.i, 1);
        assert_eq!(gamma_comp.coords, vec![ratio(-1, 4)]);
        // a primitive monomial has no γ-component
        let w = ExteriorElement::monomial(2, 0b0011, rat(1)); // ψ_1 ψ_2
        let comps = alg.lefschetz_decompose(&w).unwrap();
        assert!(comps.iter().all(|c| c.k0 == 2));
    }

    #[test]
    fn decomposition_recombines() {
        for g in 1..=3usize {
            let alg = ExteriorAlgebra::new(g).unwrap();
            for k in 0..=2 * g {
                // deterministic pseudo-random coefficients
                let subsets = subsets_of_size(2 * g, k);
                let mut v = ExteriorElement::zero(g);
                for (t, s) in subsets.iter().enumerate() {
                    let c = ((7 * t + 3 * k + g) % 11) as i64 - 5;
                    v.add_term(*s, rat(c));
                }
                let comps = alg.lefschetz_decompose(&v).unwrap();
                let mut recombined = ExteriorElement::zero(g);
                for c in &comps {
                    recombined = recombined.add(&alg.component_element(c).unwrap()).unwrap();
                }
                assert_eq!(recombined, v, "g={} k={}", g, k);
            }
        }
    }

    #[test]
    fn subset_enumeration_is_sorted_and_complete() {
        for n in 0..=8usize {
            let mut total = 0;
            for k in 0..=n {
                let subs = subsets_of_size(n, k);
                assert!(subs.windows(2).all(|w| w[0] < w[1]));
                assert!(subs.iter().all(|s| s.count_ones() as usize == k));
                total += subs.len();
            }
            assert_eq!(total, 1 << n);
        }
    }

    fn arb_homogeneous(g: usize, k: usize) -> impl Strategy<Value = ExteriorElement> {
        let subsets = subsets_of_size(2 * g, k);
        let len = subsets.len();
        prop::collection::vec(-4i64..=4, len).prop_map(move |coeffs| {
            let mut e = ExteriorElement::zero(g);
            for (s, c) in subsets.iter().zip(coeffs) {
                e.add_term(*s, rat(c));
            }
            e
        })
    }

    proptest! {
        #[test]
        fn wedge_is_graded_commutative(
            (a, b, p, q) in (1usize..=3, 0usize..=3, 0usize..=3).prop_flat_map(|(g, p, q)| {
                (arb_homogeneous(g, p), arb_homogeneous(g, q), Just(p), Just(q))
            })
        ) {
            let ab = a.wedge(&b).unwrap();
            let ba = b.wedge(&a).unwrap();
            let sign = if (p * q) % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(ab, ba.scale(&rat(sign)));
        }

        #[test]
        fn wedge_is_bilinear(
            (a, b, c) in (1usize..=2, 0usize..=2, 0usize..=2).prop_flat_map(|(g, p, q)| {
                (arb_homogeneous(g, p), arb_homogeneous(g, p), arb_homogeneous(g, q))
            })
        ) {
            let lhs = a.add(&b).unwrap().wedge(&c).unwrap();
            let rhs = a.wedge(&c).unwrap().add(&b.wedge(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn decompose_recombine_random(
            (g, v) in (2usize..=3, 0usize..=4).prop_flat_map(|(g, k)| {
                (Just(g), arb_homogeneous(g, k.min(2 * g)))
            })
        ) {
            let alg = ExteriorAlgebra::new(g).unwrap();
            let comps = alg.lefschetz_decompose(&v).unwrap();
            let mut back = ExteriorElement::zero(g);
            for c in &comps {
                back = back.add(&alg.component_element(c).unwrap()).unwrap();
            }
            prop_assert_eq!(back, v);
        }
    }
}
