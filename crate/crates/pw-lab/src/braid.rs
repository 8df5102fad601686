//! Monodromy of branched double covers of a disc: explicit twist matrices
//! for the subgroup of the braid group that preserves a multiplicity type,
//! their exterior-power actions, and brute-force invariant dimensions
//! matched against closed product formulas.

use std::collections::BTreeMap;

use num::traits::{One, Zero};
use serde::Serialize;

use crate::exterior::{merge_sign, subsets_of_size, Subset};
use crate::matrix::Matrix;
use crate::rational::Rational;
use crate::{PwError, Result};

/// Multiplicity type of a branch divisor: odd parts first (their count 2ω),
/// then even parts (count ε). The total d is even.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    parts: Vec<usize>,
    omega: usize,
    epsilon: usize,
}

impl Partition {
    /// Accepts parts in any order and stores them odd-first, preserving the
    /// relative order inside each block.
    pub fn new(parts: &[usize]) -> Result<Self> {
        if parts.is_empty() {
            return Err(PwError::InvalidParameter("partition needs at least one part".into()));
        }
        if parts.iter().any(|&a| a == 0) {
            return Err(PwError::InvalidParameter("partition parts must be positive".into()));
        }
        let odd: Vec<usize> = parts.iter().copied().filter(|a| a % 2 == 1).collect();
        let even: Vec<usize> = parts.iter().copied().filter(|a| a % 2 == 0).collect();
        if odd.len() % 2 != 0 {
            return Err(PwError::InvalidParameter("odd parts must come in pairs".into()));
        }
        let omega = odd.len() / 2;
        let epsilon = even.len();
        let mut ordered = odd;
        ordered.extend(even);
        Ok(Partition { parts: ordered, omega, epsilon })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    pub fn epsilon(&self) -> usize {
        self.epsilon
    }

    pub fn d(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Partial sums d_1, ..., d_{2ω+ε}; the last one equals d.
    pub fn partial_sums(&self) -> Vec<usize> {
        self.parts
            .iter()
            .scan(0usize, |acc, &a| {
                *acc += a;
                Some(*acc)
            })
            .collect()
    }

    /// Twists available inside the stabilizing subgroup: the interior
    /// partial sums are removed from {1, ..., d−1}.
    pub fn generator_indices(&self) -> Vec<usize> {
        let sums = self.partial_sums();
        let excluded: Vec<usize> = sums[..sums.len() - 1].to_vec();
        (1..self.d()).filter(|i| !excluded.contains(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variant {
    Disc,
    Conn,
}

/// Vanishing cycles λ_1, ..., λ_{2r−1} and the relative cycle μ of a double
/// cover of the disc branched at 2r points, with their intersection pairing.
#[derive(Debug, Clone)]
pub struct IntersectionData {
    pub r: usize,
}

impl IntersectionData {
    pub fn new(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(PwError::InvalidParameter("need at least two branch points".into()));
        }
        Ok(IntersectionData { r })
    }

    /// Basis size: the 2r−1 cycles plus μ.
    pub fn dim(&self) -> usize {
        2 * self.r
    }

    /// Pairing of basis elements; positions 0..2r−2 hold λ_1..λ_{2r−1} and
    /// position 2r−1 holds μ. Consecutive cycles meet once, μ meets λ_1.
    pub fn pairing(&self, a: usize, b: usize) -> i64 {
        let mu = self.dim() - 1;
        let value = |x: usize, y: usize| -> i64 {
            // Forward pairings only; antisymmetry is applied by the caller.
            if x < mu && y < mu {
                if y == x + 1 {
                    return 1;
                }
                if x == y + 1 {
                    return -1;
                }
                return 0;
            }
            if x == mu && y == 0 {
                return 1;
            }
            if x == 0 && y == mu {
                return -1;
            }
            0
        };
        value(a, b)
    }

    pub fn pairing_matrix(&self) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zero(n, n);
        for a in 0..n {
            for b in 0..n {
                let v = self.pairing(a, b);
                if v != 0 {
                    m.set(a, b, Rational::from_integer(v.into()));
                }
            }
        }
        m
    }
}

/// The variation map of the i-th half twist, c ↦ c + (c, λ_i) λ_i, on the
/// basis {λ_1, ..., λ_{2r−1}, μ}.
pub fn picard_lefschetz_twist(data: &IntersectionData, i: usize) -> Result<Matrix> {
    if i == 0 || i > 2 * data.r - 1 {
        return Err(PwError::InvalidParameter(format!("twist index {i} out of range")));
    }
    let n = data.dim();
    let lam_i = i - 1;
    let mut m = Matrix::identity(n);
    for col in 0..n {
        let coeff = data.pairing(col, lam_i);
        if coeff != 0 {
            let prev = m.get(lam_i, col).clone();
            m.set(lam_i, col, prev + Rational::from_integer(coeff.into()));
        }
    }
    Ok(m)
}

/// The same half-twist action written directly from the tabulated rules
/// T_i(λ_{i±1}) = λ_{i±1} ∓ λ_i on an arbitrary list of cycle indices.
pub fn tabulated_twist(indices: &[usize], i: usize) -> Matrix {
    let n = indices.len();
    let pos: BTreeMap<usize, usize> = indices.iter().enumerate().map(|(p, &j)| (j, p)).collect();
    let mut m = Matrix::identity(n);
    if let Some(&row) = pos.get(&i) {
        if let Some(&col) = pos.get(&(i + 1)) {
            m.set(row, col, -Rational::one());
        }
        if i >= 1 {
            if let Some(&col) = pos.get(&(i - 1)) {
                m.set(row, col, Rational::one());
            }
        }
    }
    m
}

/// A finite set of invertible matrices generating the monodromy action on
/// the chosen homology space.
#[derive(Debug, Clone)]
pub struct BraidRep {
    pub variant: Variant,
    pub dimension: usize,
    pub generators: Vec<(usize, Matrix)>,
}

/// Monodromy representation of the stabilizing subgroup for the given
/// multiplicity type. The connected flavor acts on λ_0, ..., λ_{d−1}; the
/// disconnected one on λ_1, ..., λ_{d−1} modulo the boundary relation, with
/// λ_{a_1} eliminated.
pub fn build_rep(p: &Partition, variant: Variant) -> Result<BraidRep> {
    match variant {
        Variant::Conn => {
            let d = p.d();
            let indices: Vec<usize> = (0..d).collect();
            let generators = p
                .generator_indices()
                .into_iter()
                .map(|i| (i, tabulated_twist(&indices, i)))
                .collect();
            Ok(BraidRep { variant, dimension: d, generators })
        }
        Variant::Disc => disc_rep_eliminating(p, p.parts()[0]),
    }
}

/// Disconnected-cover representation with a chosen odd cycle index
/// substituted by the boundary relation λ_elim = −Σ other odd λ_j. Any odd
/// choice yields a conjugate action; the default is a_1.
pub fn disc_rep_eliminating(p: &Partition, elim: usize) -> Result<BraidRep> {
    if p.omega() == 0 {
        return Err(PwError::InvalidParameter(
            "disconnected cover requires at least one pair of odd parts".into(),
        ));
    }
    let d = p.d();
    if elim % 2 == 0 || elim > d - 1 {
        return Err(PwError::InvalidParameter(format!(
            "eliminated index {elim} must be an odd cycle index"
        )));
    }
    let ambient: Vec<usize> = (1..d).collect();
    let reduced: Vec<usize> = (1..d).filter(|&j| j != elim).collect();
    let n = ambient.len();
    let k = reduced.len();

    // Inclusion of the reduced basis and the substitution going back.
    let mut incl = Matrix::zero(n, k);
    for (col, &j) in reduced.iter().enumerate() {
        incl.set(j - 1, col, Rational::one());
    }
    let mut subst = Matrix::zero(k, n);
    for (row, &j) in reduced.iter().enumerate() {
        subst.set(row, j - 1, Rational::one());
    }
    for (row, &j) in reduced.iter().enumerate() {
        if j % 2 == 1 {
            subst.set(row, elim - 1, -Rational::one());
        }
    }

    let mut generators = Vec::new();
    for i in p.generator_indices() {
        let ambient_twist = tabulated_twist(&ambient, i);
        let restricted = subst.mul(&ambient_twist)?.mul(&incl)?;
        generators.push((i, restricted));
    }
    Ok(BraidRep { variant: Variant::Disc, dimension: k, generators })
}

/// Boundary cycle Σ_{odd j ≤ d−1} λ_j in the ambient coordinates of the
/// cycle list (1, ..., d−1).
pub fn boundary_cycle(d: usize) -> Vec<Rational> {
    (1..d)
        .map(|j| if j % 2 == 1 { Rational::one() } else { Rational::zero() })
        .collect()
}

/// Matrix of the exterior-power action ∧^l T on the subset basis.
pub fn wedge_power(t: &Matrix, l: usize) -> Result<Matrix> {
    let n = t.rows;
    if t.cols != n {
        return Err(PwError::DimensionMismatch("exterior power needs a square matrix".into()));
    }
    if n > 16 {
        return Err(PwError::InvalidParameter("representation dimension capped at 16".into()));
    }
    let subsets = subsets_of_size(n, l);
    let index_of: BTreeMap<Subset, usize> = subsets.iter().enumerate().map(|(p, &s)| (s, p)).collect();
    let mut m = Matrix::zero(subsets.len(), subsets.len());
    for (col_pos, &s) in subsets.iter().enumerate() {
        // Wedge the image columns of the subset, left to right.
        let mut acc: BTreeMap<Subset, Rational> = BTreeMap::new();
        acc.insert(0, Rational::one());
        let mut bits = s;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let column = t.column(j);
            let mut next: BTreeMap<Subset, Rational> = BTreeMap::new();
            for (&mask, coeff) in &acc {
                for (r, x) in column.iter().enumerate() {
                    if x.is_zero() || mask & (1 << r) != 0 {
                        continue;
                    }
                    let sign = merge_sign(mask, 1 << r);
                    let term = coeff * x * Rational::from_integer(sign.into());
                    let entry = next.entry(mask | (1 << r)).or_insert_with(Rational::zero);
                    *entry += term;
                }
            }
            acc = next;
        }
        for (mask, coeff) in acc {
            if coeff.is_zero() {
                continue;
            }
            let row_pos = index_of[&mask];
            m.set(row_pos, col_pos, coeff);
        }
    }
    Ok(m)
}

/// Dimension of the joint fixed space in each exterior degree. Fixing the
/// generators fixes the whole group they generate.
pub fn exterior_invariants(rep: &BraidRep) -> Result<Vec<usize>> {
    let n = rep.dimension;
    if n > 16 {
        return Err(PwError::InvalidParameter("representation dimension capped at 16".into()));
    }
    let mut per_degree = Vec::with_capacity(n + 1);
    for l in 0..=n {
        let size = subsets_of_size(n, l).len();
        if rep.generators.is_empty() {
            per_degree.push(size);
            continue;
        }
        let mut blocks = Vec::new();
        for (_, t) in &rep.generators {
            let wedge = wedge_power(t, l)?;
            let mut diff = wedge;
            for i in 0..size {
                let v = diff.get(i, i).clone();
                diff.set(i, i, v - Rational::one());
            }
            blocks.push(diff);
        }
        let mut stacked = blocks[0].clone();
        for b in &blocks[1..] {
            stacked = stacked.vstack(b)?;
        }
        per_degree.push(size - stacked.rank());
    }
    Ok(per_degree)
}

/// Total invariant dimension over the full exterior algebra.
pub fn exterior_invariants_dim(rep: &BraidRep) -> Result<usize> {
    Ok(exterior_invariants(rep)?.iter().sum())
}

/// Product formula for the invariant count: Π(a_i+1) for the connected
/// cover, a quarter of that for the disconnected one.
pub fn closed_form_invariants(p: &Partition, variant: Variant) -> Result<u128> {
    let product: u128 = p.parts().iter().map(|&a| (a + 1) as u128).product();
    match variant {
        Variant::Conn => Ok(product),
        Variant::Disc => {
            if p.omega() == 0 {
                return Err(PwError::InvalidParameter(
                    "disconnected cover requires at least one pair of odd parts".into(),
                ));
            }
            debug_assert!(product % 4 == 0);
            Ok(product / 4)
        }
    }
}

/// Local monodromy invariants for a genus-g base: the trivial factor from
/// the cycles away from the branch locus contributes 2^{4g} (disc) or
/// 2^{4g−2} (conn); both products equal 2^{4g−2} Π(a_i+1).
pub fn total_local_invariants(g: usize, p: &Partition, variant: Variant) -> Result<u128> {
    if g == 0 {
        return Err(PwError::InvalidParameter("base genus must be positive".into()));
    }
    let rep = build_rep(p, variant)?;
    let inv = exterior_invariants_dim(&rep)? as u128;
    let trivial_factor = match variant {
        Variant::Disc => 1u128 << (4 * g),
        Variant::Conn => 1u128 << (4 * g - 2),
    };
    Ok(inv * trivial_factor)
}

/// The monodromy count agrees with the Betti total of the compactified
/// Jacobian attached to the same ramification orders.
pub fn match_jacobian_bound(g: usize, p: &Partition) -> Result<bool> {
    let monodromy = total_local_invariants(g, p, Variant::Conn)?;
    let st = crate::jacobian::singular_type_from_orders(g, p.parts())?;
    Ok(monodromy == crate::jacobian::compactified_jacobian_betti(&st))
}

/// Which generator subset of the 2m-cycle configuration to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LinalgCase {
    Full,
    TailOnly,
    Split { t: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct LinalgReport {
    pub m: usize,
    pub case: LinalgCase,
    pub expected: usize,
    pub brute_force: usize,
    pub omega_invariant: bool,
    pub omega_top_power_nonzero: bool,
    pub pass: bool,
}

fn linalg_generator_set(m: usize, case: LinalgCase) -> Result<Vec<usize>> {
    match case {
        LinalgCase::Full => Ok((1..=2 * m).collect()),
        LinalgCase::TailOnly => Ok((2..=2 * m).collect()),
        LinalgCase::Split { t } => {
            if t % 2 == 0 || t >= 2 * m {
                return Err(PwError::InvalidParameter("split case needs odd t < 2m".into()));
            }
            Ok((2..=t).chain(t + 2..=2 * m).collect())
        }
    }
}

fn linalg_expected(m: usize, case: LinalgCase) -> usize {
    match case {
        LinalgCase::Full => m + 1,
        LinalgCase::TailOnly => 2 * m + 1,
        LinalgCase::Split { t } => (t + 1) * (2 * m - t + 1),
    }
}

/// The two-form Ω = Σ_s c_{[1,2s−1]} ∧ c_{2s} on the subset basis, where
/// c_{[a,b]} sums every other cycle from a to b.
fn omega_two_form(m: usize) -> BTreeMap<Subset, Rational> {
    let mut omega: BTreeMap<Subset, Rational> = BTreeMap::new();
    for s in 1..=m {
        // c_{[1,2s−1]} has positions 0, 2, ..., 2s−2; c_{2s} sits at 2s−1.
        let hi = 2 * s - 1;
        for a in (0..hi).step_by(2) {
            let mask = (1u32 << a) | (1u32 << hi);
            let sign = merge_sign(1 << a, 1 << hi);
            let entry = omega.entry(mask).or_insert_with(Rational::zero);
            *entry += Rational::from_integer(sign.into());
        }
    }
    omega
}

fn apply_wedge(map: &BTreeMap<Subset, Rational>, wedge: &Matrix, n: usize, l: usize) -> BTreeMap<Subset, Rational> {
    let subsets = subsets_of_size(n, l);
    let index_of: BTreeMap<Subset, usize> = subsets.iter().enumerate().map(|(p, &s)| (s, p)).collect();
    let mut coords = vec![Rational::zero(); subsets.len()];
    for (mask, coeff) in map {
        coords[index_of[mask]] = coeff.clone();
    }
    let out = wedge.apply(&coords).expect("wedge dimensions agree");
    subsets
        .iter()
        .zip(out)
        .filter(|(_, c)| !c.is_zero())
        .map(|(&s, c)| (s, c))
        .collect()
}

fn wedge_maps(a: &BTreeMap<Subset, Rational>, b: &BTreeMap<Subset, Rational>) -> BTreeMap<Subset, Rational> {
    let mut out: BTreeMap<Subset, Rational> = BTreeMap::new();
    for (&ma, ca) in a {
        for (&mb, cb) in b {
            if ma & mb != 0 {
                continue;
            }
            let sign = merge_sign(ma, mb);
            let term = ca * cb * Rational::from_integer(sign.into());
            let entry = out.entry(ma | mb).or_insert_with(Rational::zero);
            *entry += term;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Brute-force the invariant dimension of one configuration case against
/// its formula, and verify the explicit invariant Ω directly.
pub fn lemma_linealg_check(m: usize, case: LinalgCase) -> Result<LinalgReport> {
    if m == 0 {
        return Err(PwError::InvalidParameter("configuration needs m >= 1".into()));
    }
    let n = 2 * m;
    if n > 16 {
        return Err(PwError::InvalidParameter("representation dimension capped at 16".into()));
    }
    let indices: Vec<usize> = (1..=n).collect();
    let generator_ids = linalg_generator_set(m, case)?;
    let generators: Vec<(usize, Matrix)> = generator_ids
        .iter()
        .map(|&i| (i, tabulated_twist(&indices, i)))
        .collect();
    let rep = BraidRep { variant: Variant::Conn, dimension: n, generators };
    let brute_force = exterior_invariants_dim(&rep)?;
    let expected = linalg_expected(m, case);

    // Ω is fixed by the full generator set, hence by every case's subset.
    let omega = omega_two_form(m);
    let mut omega_invariant = true;
    for i in 1..=n {
        let t = tabulated_twist(&indices, i);
        let wedge = wedge_power(&t, 2)?;
        if apply_wedge(&omega, &wedge, n, 2) != omega {
            omega_invariant = false;
        }
    }
    let mut power = omega.clone();
    for _ in 1..m {
        power = wedge_maps(&power, &omega);
    }
    let omega_top_power_nonzero = !power.is_empty();

    let pass = brute_force == expected && omega_invariant && omega_top_power_nonzero;
    Ok(LinalgReport { m, case, expected, brute_force, omega_invariant, omega_top_power_nonzero, pass })
}

#[derive(Debug, Clone, Serialize)]
pub struct BraidReport {
    pub partition: Vec<usize>,
    pub variant: Variant,
    pub dimension: usize,
    pub generator_indices: Vec<usize>,
    pub per_degree_invariants: Vec<usize>,
    pub total: usize,
    pub closed_form: u128,
    pub matches: bool,
}

/// Build, brute-force and compare one partition/variant pair.
pub fn analyze(p: &Partition, variant: Variant) -> Result<BraidReport> {
    let rep = build_rep(p, variant)?;
    let per_degree_invariants = exterior_invariants(&rep)?;
    let total: usize = per_degree_invariants.iter().sum();
    let closed_form = closed_form_invariants(p, variant)?;
    Ok(BraidReport {
        partition: p.parts().to_vec(),
        variant,
        dimension: rep.dimension,
        generator_indices: rep.generators.iter().map(|(i, _)| *i).collect(),
        per_degree_invariants,
        total,
        closed_form,
        matches: total as u128 == closed_form,
    })
}

/// All partitions of d with an even number of odd parts, odd-first.
pub fn partitions_of(d: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(current.clone());
            return;
        }
        for a in (1..=rest.min(max)).rev() {
            current.push(a);
            go(rest - a, a, current, out);
            current.pop();
        }
    }
    let mut raw = Vec::new();
    go(d, d, &mut Vec::new(), &mut raw);
    raw.iter()
        .filter_map(|parts| Partition::new(parts).ok())
        .collect()
}

/// Number of partitions counted by `partitions_of`, as a sanity anchor: the
/// generating function Π (1−q^k)^{-1} filtered by even odd-part count.
pub fn admissible_partition_count(d: usize) -> usize {
    partitions_of(d).len()
}
