//! Variant-part bookkeeping for the SL2 moduli space: the E-polynomial of
//! the variant summand, its Betti numbers, weight and perversity placement,
//! and the assembled ring skeleton on top of the invariant part.

use std::collections::BTreeMap;

use num::traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::rational::{binomial, Rational};
use crate::ring::RingPresentation;
use crate::{PwError, Result};

/// Polynomial in x and y with rational coefficients, zero terms absent.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BivariatePolynomial {
    terms: BTreeMap<(usize, usize), Rational>,
}

impl BivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, Rational::one())
    }

    pub fn monomial(i: usize, j: usize, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn add_term(&mut self, i: usize, j: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(&k, v)| (k, v * c)).collect();
        BivariatePolynomial { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c1) in &self.terms {
            for (&(i, j), c2) in &other.terms {
                out.add_term(a + i, b + j, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// True when every monomial has the shape x^p y^p.
    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == j)
    }

    /// True when (xy)^n P(1/x, 1/y) = P(x, y).
    pub fn is_palindromic(&self, n: usize) -> bool {
        self.terms.iter().all(|(&(i, j), c)| {
            i <= n && j <= n && self.coeff(n - i, n - j) == *c
        })
    }
}

/// E-polynomial of the variant part from the product closed form
/// (2^{2g}−1)(xy)^{2g−2}((xy−1)^{2g−2} − (xy+1)^{2g−2})/2.
pub fn e_var_product(g: usize) -> Result<BivariatePolynomial> {
    if g < 2 {
        return Err(PwError::InvalidParameter("variant part needs g >= 2".into()));
    }
    let xy = BivariatePolynomial::monomial(1, 1, Rational::one());
    let minus = xy.sub(&BivariatePolynomial::one()).pow(2 * g - 2);
    let plus = xy.add(&BivariatePolynomial::one()).pow(2 * g - 2);
    let half = Rational::new(1.into(), 2.into());
    let scalar = Rational::from_integer(((1u128 << (2 * g)) - 1).into());
    Ok(minus.sub(&plus).scale(&half).mul(&xy.pow(2 * g - 2)).scale(&scalar))
}

/// The same polynomial from the expanded form. The tabulated expansion
/// reads Σ_i (2^{2g}−1) C(2g−2, 2i−1) (xy)^{2g−3+2i} with no sign, but the
/// product form and the odd cohomological degrees force every coefficient
/// negative, so the sum carries a global minus here.
pub fn e_var_expansion(g: usize) -> Result<BivariatePolynomial> {
    if g < 2 {
        return Err(PwError::InvalidParameter("variant part needs g >= 2".into()));
    }
    let scalar = Rational::from_integer(((1u128 << (2 * g)) - 1).into());
    let mut out = BivariatePolynomial::zero();
    for i in 1..=g - 1 {
        let b = Rational::from_integer(binomial(2 * g - 2, (2 * i - 1) as isize));
        let exp = 2 * g - 3 + 2 * i;
        out.add_term(exp, exp, -(&scalar * b));
    }
    Ok(out)
}

/// Compute both closed forms, assert they agree, and return the polynomial.
pub fn e_var(g: usize) -> Result<BivariatePolynomial> {
    let product = e_var_product(g)?;
    let expansion = e_var_expansion(g)?;
    if product != expansion {
        return Err(PwError::InvalidParameter(format!(
            "the two closed forms of the variant E-polynomial disagree at g = {g}"
        )));
    }
    Ok(product)
}

/// Betti numbers of the variant part with their weight and perversity
/// placement: nonzero only in degrees k = 4g+2d−5, 1 ≤ d ≤ g−1, where the
/// weight is 2k−4g+4 and the perversity k−2g+2.
#[derive(Debug, Clone, Serialize)]
pub struct VariantTable {
    pub g: usize,
    pub dims: BTreeMap<usize, usize>,
    pub weights: BTreeMap<usize, usize>,
    pub perversities: BTreeMap<usize, usize>,
}

pub fn variant_dims(g: usize) -> Result<VariantTable> {
    if g < 2 {
        return Err(PwError::InvalidParameter("variant part needs g >= 2".into()));
    }
    let scalar = (1u128 << (2 * g)) - 1;
    let mut dims = BTreeMap::new();
    let mut weights = BTreeMap::new();
    let mut perversities = BTreeMap::new();
    for d in 1..=g - 1 {
        let k = 4 * g + 2 * d - 5;
        let b = binomial(2 * g - 2, (2 * g - 2 * d - 1) as isize)
            .to_u128()
            .expect("binomial fits");
        let dim = (scalar * b).to_usize().expect("dimension fits usize");
        dims.insert(k, dim);
        weights.insert(k, 2 * k - (4 * g - 4));
        perversities.insert(k, k - (2 * g - 2));
    }
    Ok(VariantTable { g, dims, weights, perversities })
}

#[derive(Debug, Clone, Serialize)]
pub struct VariantConsistencyReport {
    pub g: usize,
    pub forms_agree: bool,
    pub diagonal_only: bool,
    pub palindromic: bool,
    pub two_p_equals_w: bool,
    pub hl_dims_symmetric: bool,
    pub e_var_accounts_dims: bool,
    pub pass: bool,
}

/// Cross-check the variant table against the E-polynomial and the hard
/// Lefschetz pairing.
pub fn variant_consistency(g: usize) -> Result<VariantConsistencyReport> {
    let product = e_var_product(g)?;
    let expansion = e_var_expansion(g)?;
    let forms_agree = product == expansion;
    let diagonal_only = product.is_diagonal();
    let palindromic = product.is_palindromic(6 * g - 6);

    let table = variant_dims(g)?;
    let two_p_equals_w = table
        .dims
        .keys()
        .all(|k| 2 * table.perversities[k] == table.weights[k]);

    // Cup products with powers of α pair degree 4g+2d−5 with 6g−5−2d.
    let mut hl_dims_symmetric = true;
    for d in 1..=g - 1 {
        let k_lo = 4 * g + 2 * d - 5;
        let k_hi = 6 * g - 5 - 2 * d;
        if table.dims.get(&k_lo) != table.dims.get(&k_hi) {
            hl_dims_symmetric = false;
        }
    }

    // Odd-degree classes enter the E-polynomial negatively: the coefficient
    // of (xy)^{w/2} in −E_var is exactly the Betti number.
    let neg = product.scale(&-Rational::one());
    let mut e_var_accounts_dims = table.dims.iter().all(|(k, &dim)| {
        let p = table.weights[k] / 2;
        neg.coeff(p, p) == Rational::from_integer(dim.into())
    });
    // And nothing else appears: total mass matches.
    let total: Rational = neg
        .terms()
        .values()
        .fold(Rational::zero(), |acc, c| acc + c);
    let dim_sum: usize = table.dims.values().sum();
    if total != Rational::from_integer(dim_sum.into()) {
        e_var_accounts_dims = false;
    }

    let pass = forms_agree
        && diagonal_only
        && palindromic
        && two_p_equals_w
        && hl_dims_symmetric
        && e_var_accounts_dims;
    Ok(VariantConsistencyReport {
        g,
        forms_agree,
        diagonal_only,
        palindromic,
        two_p_equals_w,
        hl_dims_symmetric,
        e_var_accounts_dims,
        pass,
    })
}

/// Structural multiplication rules of the assembled ring. The variant part
/// has no explicit basis, so the rules are recorded as data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum RingRule {
    /// Degree reasons kill every product of two variant classes.
    VariantTimesVariantVanishes,
    /// β lands outside the variant weight window, so it acts by zero.
    BetaAnnihilatesVariant,
    /// Each ψ_i likewise acts by zero on the variant part.
    PsiAnnihilatesVariant,
    /// Cupping with α^power maps variant degree from_degree isomorphically
    /// onto to_degree.
    AlphaChain { power: usize, from_degree: usize, to_degree: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct Sl2Skeleton {
    pub g: usize,
    pub invariant_dims: BTreeMap<usize, usize>,
    pub variant: VariantTable,
    pub total_dims: BTreeMap<usize, usize>,
    pub rules: Vec<RingRule>,
}

/// Dimension table and multiplication rules of the full ring: the invariant
/// part contributes the given presentation (canonical divisor case), the
/// variant part its Betti table, and the rules tie the two together.
pub fn assemble_sl2_ring_skeleton(pres: &RingPresentation) -> Result<Sl2Skeleton> {
    if pres.n != 0 {
        return Err(PwError::InvalidParameter(
            "the assembled ring lives over the canonical divisor case".into(),
        ));
    }
    let g = pres.g;
    let variant = variant_dims(g)?;

    let mut invariant_dims: BTreeMap<usize, usize> = BTreeMap::new();
    for ((d, _), dim) in pres.dims() {
        *invariant_dims.entry(d).or_default() += dim;
    }
    let mut total_dims = invariant_dims.clone();
    for (&k, &dim) in &variant.dims {
        *total_dims.entry(k).or_default() += dim;
    }

    let mut rules = vec![
        RingRule::VariantTimesVariantVanishes,
        RingRule::BetaAnnihilatesVariant,
        RingRule::PsiAnnihilatesVariant,
    ];
    for d in 1..=g - 1 {
        if 2 * d < g {
            let from_degree = 4 * g + 2 * d - 5;
            let to_degree = 6 * g - 5 - 2 * d;
            // The rule only makes sense if the paired dims agree.
            if variant.dims.get(&from_degree) != variant.dims.get(&to_degree) {
                return Err(PwError::DimensionMismatch(format!(
                    "variant dims differ across the α-chain {from_degree} -> {to_degree}"
                )));
            }
            rules.push(RingRule::AlphaChain { power: g - 2 * d, from_degree, to_degree });
        }
    }
    Ok(Sl2Skeleton { g, invariant_dims, variant, total_dims, rules })
}
