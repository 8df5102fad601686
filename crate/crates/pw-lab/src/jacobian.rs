//! Betti numbers of compactified Jacobians of spectral curves with planar
//! A_k singularities, together with the blow-up poset that degenerates onto
//! them.
//!
//! A point of type A_k has delta invariant ⌈k/2⌉. Odd k (even local
//! intersection order) gives what we call an odd-type point, even k an
//! even-type point; the two contribute different local factors.

use num::traits::{One, Zero};
use serde::Serialize;

use crate::rational::Rational;
use crate::{PwError, Result};

/// δ(A_k) = ⌈k/2⌉.
pub fn delta_invariant(k: usize) -> usize {
    k.div_ceil(2)
}

/// Singularity data of an integral curve: delta invariants of the odd-type
/// and even-type points plus the geometric genus of the normalization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularType {
    pub odd_points: Vec<usize>,
    pub even_points: Vec<usize>,
    pub g_tilde: usize,
}

impl SingularType {
    pub fn new(odd_points: Vec<usize>, even_points: Vec<usize>, g_tilde: usize) -> Result<Self> {
        if odd_points.iter().chain(&even_points).any(|&d| d == 0) {
            return Err(PwError::InvalidParameter("delta invariants must be positive".into()));
        }
        Ok(SingularType { odd_points, even_points, g_tilde })
    }

    /// Arithmetic genus g̃ + Σδ.
    pub fn arithmetic_genus(&self) -> usize {
        self.g_tilde + self.odd_points.iter().sum::<usize>() + self.even_points.iter().sum::<usize>()
    }
}

/// Singular spectral curve attached to local ramification orders a_1, ..., a_m
/// over a genus-g base: order a contributes A_{a−1}, so even a gives an
/// odd-type point with δ = a/2, odd a > 1 an even-type point with
/// δ = (a−1)/2, and a = 1 no singular point at all. The normalization has
/// genus 2g − 1 + ω where 2ω counts the odd orders.
pub fn singular_type_from_orders(g: usize, orders: &[usize]) -> Result<SingularType> {
    if orders.iter().any(|&a| a == 0) {
        return Err(PwError::InvalidParameter("ramification orders must be positive".into()));
    }
    let odd_count = orders.iter().filter(|&&a| a % 2 == 1).count();
    if odd_count % 2 != 0 {
        return Err(PwError::InvalidParameter(
            "odd ramification orders must come in pairs".into(),
        ));
    }
    let omega = odd_count / 2;
    let mut odd_points = Vec::new();
    let mut even_points = Vec::new();
    for &a in orders {
        if a % 2 == 0 {
            odd_points.push(a / 2);
        } else if a > 1 {
            even_points.push((a - 1) / 2);
        }
    }
    let g_tilde = 2 * g + omega;
    let g_tilde = g_tilde
        .checked_sub(1)
        .ok_or_else(|| PwError::InvalidParameter("normalization genus would be negative".into()))?;
    SingularType::new(odd_points, even_points, g_tilde)
}

/// Total Betti number of the compactified Jacobian of a curve of geometric
/// genus g̃ with o odd-type points (even-type points do not enter): 2^{2g̃+o}.
pub fn jac_betti_sum(g_tilde: usize, odd_points: usize) -> u128 {
    1u128 << (2 * g_tilde + odd_points)
}

/// Sum of Betti totals over the blow-up poset Π [0, δ_a]: each tuple I
/// records how far each point has been blown up, and the fiber over I is the
/// Jacobian of a curve that kept the odd-type points with i_a < δ_a.
pub fn blowup_poset_sum(st: &SingularType) -> u128 {
    let deltas: Vec<(usize, bool)> = st
        .odd_points
        .iter()
        .map(|&d| (d, true))
        .chain(st.even_points.iter().map(|&d| (d, false)))
        .collect();
    let mut total = 0u128;
    let mut index = vec![0usize; deltas.len()];
    loop {
        let surviving_odd = index
            .iter()
            .zip(&deltas)
            .filter(|(&i, &(delta, odd))| odd && i < delta)
            .count();
        total += jac_betti_sum(st.g_tilde, surviving_odd);
        // Advance the mixed-radix counter over Π [0, δ_a].
        let mut pos = 0;
        loop {
            if pos == deltas.len() {
                return total;
            }
            if index[pos] < deltas[pos].0 {
                index[pos] += 1;
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}

/// Closed form for the poset sum: 2^{2g̃} Π_odd (2δ+1) Π_even (δ+1).
pub fn compactified_jacobian_betti(st: &SingularType) -> u128 {
    let mut total = 1u128 << (2 * st.g_tilde);
    for &d in &st.odd_points {
        total *= (2 * d + 1) as u128;
    }
    for &d in &st.even_points {
        total *= (d + 1) as u128;
    }
    total
}

/// How to read the local factor of an even-type point in the Poincaré
/// polynomial. The tabulated factor stops at t^δ, which cannot be right as
/// printed for δ > 1: its value at t = 1 disagrees with the poset count that
/// the spectral sequence degenerates onto. Extending the even powers up to
/// t^{2δ} restores δ + 1 terms and matches every count, so that is the
/// default; the printed truncation stays available for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EvenFactorReading {
    EvenPowersToTwiceDelta,
    PrintedTruncation,
}

impl Default for EvenFactorReading {
    fn default() -> Self {
        EvenFactorReading::EvenPowersToTwiceDelta
    }
}

/// Univariate polynomial with rational coefficients, index = exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![Rational::one()] }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    /// 1 + t + ... + t^k.
    pub fn geometric(k: usize) -> Self {
        Polynomial { coeffs: vec![Rational::one(); k + 1] }
    }

    /// 1 + t² + ... + t^{2k}.
    pub fn even_geometric(k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); 2 * k + 1];
        for j in 0..=k {
            coeffs[2 * j] = Rational::one();
        }
        Polynomial { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::from_coeffs(coeffs)
    }

    pub fn pow(&self, e: usize) -> Polynomial {
        let mut out = Polynomial::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Evaluate at an integer point.
    pub fn eval_int(&self, x: i64) -> Rational {
        let xr = Rational::from_integer(x.into());
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &xr + c;
        }
        acc
    }

    /// Render as "1+2t+t^3" with ascending exponents.
    pub fn display(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = crate::rational::rational_string(c);
            let part = match (k, coeff.as_str()) {
                (0, _) => coeff,
                (1, "1") => "t".into(),
                (1, _) => format!("{coeff}t"),
                (_, "1") => format!("t^{k}"),
                _ => format!("{coeff}t^{k}"),
            };
            parts.push(part);
        }
        parts.join("+")
    }
}

/// Poincaré polynomial of the compactified Jacobian:
/// (1+t)^{2g̃} Π_odd (1+t+...+t^{2δ}) Π_even (even-type factor).
pub fn poincare_polynomial(st: &SingularType, reading: EvenFactorReading) -> Polynomial {
    let mut p = Polynomial::geometric(1).pow(2 * st.g_tilde);
    for &d in &st.odd_points {
        p = p.mul(&Polynomial::geometric(2 * d));
    }
    for &d in &st.even_points {
        let factor = match reading {
            EvenFactorReading::EvenPowersToTwiceDelta => Polynomial::even_geometric(d),
            EvenFactorReading::PrintedTruncation => {
                // Literal reading: even powers of t up to t^δ only.
                let mut coeffs = vec![Rational::zero(); d + 1];
                let mut j = 0;
                while 2 * j <= d {
                    coeffs[2 * j] = Rational::one();
                    j += 1;
                }
                Polynomial::from_coeffs(coeffs)
            }
        };
        p = p.mul(&factor);
    }
    p
}

#[derive(Debug, Clone, Serialize)]
pub struct JacobianReport {
    pub singular_type: SingularType,
    /// Total Betti count of the compactified Jacobian, from the closed form.
    pub betti_sum: u128,
    /// The same count summed over the blow-up stratification.
    pub poset_sum: u128,
    /// Betti sum of the open stratum, the Jacobian of the normalization.
    pub normalization_betti: u128,
    pub e1_degenerate: bool,
    pub poincare_poly: String,
}

/// Run the poset, the closed form and the polynomial against each other.
pub fn analyze(st: &SingularType) -> JacobianReport {
    let poset_sum = blowup_poset_sum(st);
    let closed_form = compactified_jacobian_betti(st);
    let poly = poincare_polynomial(st, EvenFactorReading::default());
    let poly_at_one = poly.eval_int(1);
    let e1_degenerate = poset_sum == closed_form
        && poly_at_one == Rational::from_integer(num::BigInt::from(closed_form));
    JacobianReport {
        singular_type: st.clone(),
        betti_sum: closed_form,
        poset_sum,
        normalization_betti: jac_betti_sum(st.g_tilde, st.odd_points.len()),
        e1_degenerate,
        poincare_poly: poly.display(),
    }
}

/// Self-similarity of the blow-up poset: above a fixed tuple I the sub-poset
/// is again of the same shape, with each δ_a cut down to δ_a − i_a. The sum
/// over it must equal the closed form of that smaller singular type.
pub fn self_similarity_check(st: &SingularType, index: &[usize]) -> Result<bool> {
    let deltas: Vec<(usize, bool)> = st
        .odd_points
        .iter()
        .map(|&d| (d, true))
        .chain(st.even_points.iter().map(|&d| (d, false)))
        .collect();
    if index.len() != deltas.len() {
        return Err(PwError::DimensionMismatch("index tuple vs singular points".into()));
    }
    if index.iter().zip(&deltas).any(|(&i, &(d, _))| i > d) {
        return Err(PwError::InvalidParameter("index exceeds delta".into()));
    }
    let mut odd = Vec::new();
    let mut even = Vec::new();
    for (&i, &(d, is_odd)) in index.iter().zip(&deltas) {
        let rest = d - i;
        if rest == 0 {
            continue;
        }
        if is_odd {
            odd.push(rest);
        } else {
            even.push(rest);
        }
    }
    let sub = SingularType::new(odd, even, st.g_tilde)?;

    // Direct sum over the tuples J ≥ I inside the original poset.
    let mut total = 0u128;
    let mut cursor: Vec<usize> = index.to_vec();
    loop {
        let surviving_odd = cursor
            .iter()
            .zip(&deltas)
            .filter(|(&j, &(d, is_odd))| is_odd && j < d)
            .count();
        total += jac_betti_sum(st.g_tilde, surviving_odd);
        let mut pos = 0;
        loop {
            if pos == deltas.len() {
                return Ok(total == compactified_jacobian_betti(&sub));
            }
            if cursor[pos] < deltas[pos].0 {
                cursor[pos] += 1;
                break;
            }
            cursor[pos] = index[pos];
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_of_simple_types() {
        // A_1 node and A_2 cusp both have δ = 1, A_3 tacnode has δ = 2.
        assert_eq!(delta_invariant(1), 1);
        assert_eq!(delta_invariant(2), 1);
        assert_eq!(delta_invariant(3), 2);
        assert_eq!(delta_invariant(4), 2);
        assert_eq!(delta_invariant(5), 3);
    }

    #[test]
    fn rational_nodal_curve() {
        // One node on a rational curve: Betti total 2^{0+1} = 2 for the
        // Jacobian itself, 3 once the blow-up poset is summed.
        let st = SingularType::new(vec![1], vec![], 0).unwrap();
        assert_eq!(jac_betti_sum(0, 1), 2);
        assert_eq!(blowup_poset_sum(&st), 3);
        assert_eq!(compactified_jacobian_betti(&st), 3);
        let poly = poincare_polynomial(&st, EvenFactorReading::default());
        assert_eq!(poly.display(), "1+t+t^2");
        assert_eq!(poly.eval_int(1), Rational::from_integer(3.into()));
    }

    #[test]
    fn cuspidal_genus_one() {
        // A cusp on a normalization of genus 1: 2^2 · (1+1) = 8 classes.
        let st = SingularType::new(vec![], vec![1], 1).unwrap();
        assert_eq!(blowup_poset_sum(&st), 8);
        assert_eq!(compactified_jacobian_betti(&st), 8);
        let poly = poincare_polynomial(&st, EvenFactorReading::default());
        assert_eq!(poly.display(), "1+2t+2t^2+2t^3+t^4");
        assert_eq!(poly.eval_int(1), Rational::from_integer(8.into()));
    }

    #[test]
    fn orders_to_singular_type() {
        // Orders (3, 1, 2) over genus 3: one even order 2 → odd-type δ = 1,
        // one odd order 3 → even-type δ = 1, the pair of odd orders gives
        // ω = 1, so g̃ = 2·3 + 1 − 1 = 6.
        let st = singular_type_from_orders(3, &[3, 1, 2]).unwrap();
        assert_eq!(st, SingularType::new(vec![1], vec![1], 6).unwrap());
        // Bridge to the ramification data: 2^{2g̃} · 3 · 2 = 2^{12} · 6.
        assert_eq!(compactified_jacobian_betti(&st), (1u128 << 12) * 6);
    }

    #[test]
    fn orders_bridge_identity() {
        // 2^{4g−2} Π (a_i + 1) = 2^{2g̃} Π_odd (2δ+1) Π_even (δ+1) for every
        // admissible order tuple.
        for (g, orders) in [
            (2usize, vec![2usize]),
            (2, vec![1, 1]),
            (2, vec![4]),
            (2, vec![2, 2]),
            (2, vec![3, 1]),
            (3, vec![3, 1, 2]),
            (3, vec![5, 1]),
            (2, vec![1, 1, 1, 1]),
        ] {
            let st = singular_type_from_orders(g, &orders).unwrap();
            let lhs: u128 = (1u128 << (4 * g - 2))
                * orders.iter().map(|&a| (a + 1) as u128).product::<u128>();
            assert_eq!(compactified_jacobian_betti(&st), lhs, "g={g} orders={orders:?}");
        }
    }

    #[test]
    fn odd_orders_must_pair_up() {
        assert!(singular_type_from_orders(2, &[3]).is_err());
        assert!(singular_type_from_orders(2, &[3, 5, 1]).is_err());
        assert!(singular_type_from_orders(2, &[3, 5]).is_ok());
    }

    #[test]
    fn smooth_spectral_curve() {
        // All orders 1: no singular points, g̃ = 2g + r/2 − 1.
        let st = singular_type_from_orders(2, &[1, 1, 1, 1]).unwrap();
        assert!(st.odd_points.is_empty() && st.even_points.is_empty());
        assert_eq!(st.g_tilde, 5);
        assert_eq!(blowup_poset_sum(&st), 1 << 10);
    }

    #[test]
    fn poset_matches_closed_form_mixed() {
        let st = SingularType::new(vec![2, 1], vec![3], 2).unwrap();
        assert_eq!(blowup_poset_sum(&st), compactified_jacobian_betti(&st));
        // 2^4 · 5 · 3 · 4 = 960.
        assert_eq!(compactified_jacobian_betti(&st), 960);
    }

    #[test]
    fn printed_truncation_disagrees_at_one() {
        // For δ = 2 the literal factor 1 + t² has mass 2 at t = 1 instead of
        // the δ + 1 = 3 that the blow-up count demands.
        let st = SingularType::new(vec![], vec![2], 0).unwrap();
        let default_poly = poincare_polynomial(&st, EvenFactorReading::default());
        let printed = poincare_polynomial(&st, EvenFactorReading::PrintedTruncation);
        assert_eq!(default_poly.eval_int(1), Rational::from_integer(3.into()));
        assert_eq!(printed.eval_int(1), Rational::from_integer(2.into()));
        // Even at δ = 1 the truncated ladder cannot reach t², so only the
        // extended reading carries the right mass.
        let st1 = SingularType::new(vec![], vec![1], 0).unwrap();
        let default1 = poincare_polynomial(&st1, EvenFactorReading::default());
        let printed1 = poincare_polynomial(&st1, EvenFactorReading::PrintedTruncation);
        assert_eq!(default1.eval_int(1), Rational::from_integer(2.into()));
        assert_eq!(printed1.eval_int(1), Rational::from_integer(1.into()));
    }

    #[test]
    fn self_similarity_above_interior_points() {
        let st = SingularType::new(vec![2], vec![2], 1).unwrap();
        for i in 0..=2usize {
            for j in 0..=2usize {
                assert!(self_similarity_check(&st, &[i, j]).unwrap(), "I = ({i}, {j})");
            }
        }
    }

    #[test]
    fn analyze_agrees_with_pieces() {
        let st = singular_type_from_orders(2, &[2]).unwrap();
        let report = analyze(&st);
        assert!(report.e1_degenerate);
        assert_eq!(report.poset_sum, report.betti_sum);
        assert_eq!(report.betti_sum, (1u128 << 6) * 3);
        assert_eq!(report.normalization_betti, 1u128 << 7);
    }

    #[test]
    fn poset_sum_randomized_against_closed_form() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n_odd = rng.gen_range(0..3);
            let n_even = rng.gen_range(0..3);
            let odd: Vec<usize> = (0..n_odd).map(|_| rng.gen_range(1..4)).collect();
            let even: Vec<usize> = (0..n_even).map(|_| rng.gen_range(1..4)).collect();
            let g_tilde = rng.gen_range(0..4);
            let st = SingularType::new(odd, even, g_tilde).unwrap();
            assert_eq!(blowup_poset_sum(&st), compactified_jacobian_betti(&st));
        }
    }
}
