//! Acceptance gate: one test per headline identity, each printing its own
//! pass/fail line. Every assertion here is exact; nothing is sampled.

use pw_lab::braid::{
    self, lemma_linealg_check, match_jacobian_bound, partitions_of, picard_lefschetz_twist,
    tabulated_twist, IntersectionData, LinalgCase, Variant,
};
use pw_lab::exterior::ExteriorAlgebra;
use pw_lab::jacobian;
use pw_lab::lefschetz::BiGradedModule;
use pw_lab::pw::PwChecker;
use pw_lab::rational::{binomial, Rational};
use pw_lab::report::singular_types_within;
use pw_lab::ring::RingPresentation;
use pw_lab::sl2;

use num::traits::{One, ToPrimitive, Zero};

const POLE_CASES: [(usize, usize); 3] = [(2, 3), (2, 4), (3, 5)];
const CANONICAL_CASES: [(usize, usize); 2] = [(2, 2), (3, 4)];

fn all_cases() -> Vec<(usize, usize)> {
    POLE_CASES.iter().chain(&CANONICAL_CASES).copied().collect()
}

fn checked_report(g: usize, deg_d: usize) -> pw_lab::pw::PwReport {
    let pres = RingPresentation::build(g, deg_d).unwrap();
    let module = BiGradedModule::from_ring(&pres).unwrap();
    let checker = PwChecker::new(&pres, &module).unwrap();
    checker.full_report().unwrap()
}

#[test]
fn criterion_01_filtration_match_pole_cases() {
    for (g, deg_d) in POLE_CASES {
        let report = checked_report(g, deg_d);
        for level in &report.levels {
            assert!(
                level.equal,
                "({g},{deg_d}): filtrations differ at degree {} level {}",
                level.d, level.level
            );
        }
        assert!(report.pass, "({g},{deg_d}) full suite");
    }
}

#[test]
fn criterion_02_filtration_match_canonical_cases() {
    for (g, deg_d) in CANONICAL_CASES {
        let report = checked_report(g, deg_d);
        for level in &report.levels {
            assert!(
                level.equal,
                "({g},{deg_d}): filtrations differ at degree {} level {}",
                level.d, level.level
            );
        }
        assert_eq!(report.beta_powers_primitive, Some(true), "({g},{deg_d}) β survivors");
        assert_eq!(report.top_degree_middle_vanishes, Some(true), "({g},{deg_d}) top level");
        assert!(report.pass, "({g},{deg_d}) full suite");
    }
}

#[test]
fn criterion_03_curious_hard_lefschetz() {
    for (g, deg_d) in all_cases() {
        let pres = RingPresentation::build(g, deg_d).unwrap();
        let module = BiGradedModule::from_ring(&pres).unwrap();
        let verdicts = module.hard_lefschetz_verify();
        let seen: Vec<usize> = verdicts.iter().map(|v| v.l).collect();
        let expected: Vec<usize> = (0..=module.w0).collect();
        assert_eq!(seen, expected, "({g},{deg_d}) power coverage");
        for v in &verdicts {
            assert!(v.bijective, "({g},{deg_d}): α^{} not bijective", v.l);
        }
    }
}

#[test]
fn criterion_04_generator_perverse_levels() {
    for (g, deg_d) in all_cases() {
        let pres = RingPresentation::build(g, deg_d).unwrap();
        let module = BiGradedModule::from_ring(&pres).unwrap();
        let checker = PwChecker::new(&pres, &module).unwrap();
        let report = checker.full_report().unwrap();
        for placement in &report.generators {
            assert_eq!(
                placement.level,
                Some(2),
                "({g},{deg_d}): generator {} off level 2",
                placement.name
            );
        }
        let gl2 = checker.gl2_check().unwrap();
        assert_eq!(gl2.epsilon_level, 1, "({g},{deg_d}) ε level");
        assert_eq!(gl2.epsilon_count, 2 * g, "({g},{deg_d}) ε count");
        assert!(gl2.pass, "({g},{deg_d}) extension suite");
    }
}

#[test]
fn criterion_05_exhaustive_vanishing_relations() {
    for (g, deg_d) in all_cases() {
        let pres = RingPresentation::build(g, deg_d).unwrap();
        let report = pres.vanishing_check().unwrap();
        assert!(report.pass, "({g},{deg_d}) vanishing suite");
        assert!(!report.cases.is_empty(), "({g},{deg_d}) nothing checked");
    }
}

#[test]
fn criterion_06_braid_invariant_dimensions() {
    for d in (2..=8).step_by(2) {
        for p in partitions_of(d) {
            let conn = braid::analyze(&p, Variant::Conn).unwrap();
            assert!(conn.matches, "{:?} conn: {} vs {}", p.parts(), conn.total, conn.closed_form);
            if p.omega() >= 1 {
                let disc = braid::analyze(&p, Variant::Disc).unwrap();
                assert!(
                    disc.matches,
                    "{:?} disc: {} vs {}",
                    p.parts(),
                    disc.total,
                    disc.closed_form
                );
            }
        }
    }
    for m in 1..=4usize {
        for case in [LinalgCase::Full, LinalgCase::TailOnly] {
            let report = lemma_linealg_check(m, case).unwrap();
            assert!(report.pass, "m={m} {:?}", report.case);
            assert!(report.omega_invariant && report.omega_top_power_nonzero, "m={m} Ω checks");
        }
        for t in (1..2 * m).step_by(2) {
            let report = lemma_linealg_check(m, LinalgCase::Split { t }).unwrap();
            assert!(report.pass, "m={m} split t={t}");
            assert!(report.omega_invariant && report.omega_top_power_nonzero, "m={m} t={t} Ω");
        }
    }
}

#[test]
fn criterion_07_picard_lefschetz_tabulated_action() {
    for r in 1..=6usize {
        let data = IntersectionData::new(r).unwrap();
        let n = data.dim();
        let lambda_indices: Vec<usize> = (1..=2 * r - 1).collect();
        for i in 1..=2 * r - 1 {
            let twist = picard_lefschetz_twist(&data, i).unwrap();
            // λ-block agrees with the tabulated half-twist rules.
            let tabulated = tabulated_twist(&lambda_indices, i);
            for row in 0..n - 1 {
                for col in 0..n - 1 {
                    assert_eq!(
                        twist.get(row, col),
                        tabulated.get(row, col),
                        "r={r} i={i} at ({row},{col})"
                    );
                }
            }
            // μ moves only under the first twist, picking up λ_1.
            for row in 0..n {
                let expected = if row == n - 1 {
                    Rational::one()
                } else if i == 1 && row == 0 {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                assert_eq!(*twist.get(row, n - 1), expected, "r={r} i={i} μ column row {row}");
            }
            // λ columns never touch μ.
            for col in 0..n - 1 {
                assert_eq!(*twist.get(n - 1, col), Rational::zero(), "r={r} i={i} μ row");
            }
        }
    }
}

#[test]
fn criterion_08_jacobian_strata_counts() {
    let types = singular_types_within(6, 3);
    assert!(types.len() > 100, "enumeration too small: {}", types.len());
    for st in &types {
        let report = jacobian::analyze(st);
        assert!(
            report.e1_degenerate,
            "g~={} odd={:?} even={:?}: poset {} vs closed {}",
            st.g_tilde, st.odd_points, st.even_points, report.poset_sum, report.betti_sum
        );
    }
}

#[test]
fn criterion_09_support_theorem_shadow() {
    for d in (2..=8).step_by(2) {
        for p in partitions_of(d) {
            for g in [2, 3] {
                assert!(
                    match_jacobian_bound(g, &p).unwrap(),
                    "g={g} partition {:?}",
                    p.parts()
                );
            }
        }
    }
}

#[test]
fn criterion_10_sl2_variant_part() {
    for g in 2..=8usize {
        let report = sl2::variant_consistency(g).unwrap();
        assert!(report.forms_agree, "g={g} closed forms");
        assert!(report.palindromic, "g={g} palindromy");
        assert!(report.two_p_equals_w, "g={g} 2p = w");
        assert!(report.pass, "g={g} consistency");
    }
    let table = sl2::variant_dims(2).unwrap();
    assert_eq!(table.dims.get(&5), Some(&30));
}

#[test]
fn criterion_11_primitive_exterior_dimensions() {
    for g in 1..=5usize {
        let algebra = ExteriorAlgebra::new(g).unwrap();
        for k in 0..=2 * g + 2 {
            let expected = if k > g {
                0
            } else {
                (binomial(2 * g, k as isize) - binomial(2 * g, k as isize - 2))
                    .to_usize()
                    .unwrap()
            };
            assert_eq!(algebra.lambda0_dim(k), expected, "g={g} k={k}");
        }
    }
}
