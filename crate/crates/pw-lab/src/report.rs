//! Report assembly: JSON payloads under a versioned envelope, a CSV
//! flattening of the same data, and the batch verification driver.

use num::traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::braid::{self, LinalgCase, Partition, Variant};
use crate::exterior::ExteriorAlgebra;
use crate::jacobian::{self, EvenFactorReading, SingularType};
use crate::lefschetz::BiGradedModule;
use crate::pw::PwChecker;
use crate::rational::{binomial, rational_string};
use crate::ring::RingPresentation;
use crate::sl2;
use crate::Result;

pub const SCHEMA: &str = "pw-lab/1";

/// Wrap a payload in the versioned envelope.
pub fn envelope(kind: &str, payload: Value) -> Value {
    json!({ "schema": SCHEMA, "kind": kind, "report": payload })
}

/// Dimension table of the bigraded ring, optionally with the rank-preserving
/// GL2 extension dims alongside.
pub fn ring_payload(g: usize, deg_d: usize, gl2: bool) -> Result<(Value, bool)> {
    let pres = RingPresentation::build(g, deg_d)?;
    let mut dims: Vec<Value> = pres
        .dims()
        .map(|((d, w), dim)| json!({ "d": d, "w": w, "dim": dim }))
        .collect();
    dims.sort_by_key(|v| (v["d"].as_u64(), v["w"].as_u64()));
    let mut payload = json!({
        "g": pres.g,
        "degD": pres.deg_d,
        "n": pres.n,
        "w0": pres.w0,
        "total_dim": pres.basis.len(),
        "dims": dims,
    });
    if gl2 {
        let rows: Vec<Value> = pres
            .gl2_dims()
            .into_iter()
            .map(|((d, w), dim)| json!({ "d": d, "w": w, "dim": dim }))
            .collect();
        payload["gl2_dims"] = Value::Array(rows);
    }
    let vanishing = pres.vanishing_check()?;
    payload["vanishing_ok"] = Value::Bool(vanishing.pass);
    Ok((payload, vanishing.pass))
}

/// Cup-with-α bijectivity verdicts between opposite weight stacks.
pub fn lefschetz_payload(g: usize, deg_d: usize) -> Result<(Value, bool)> {
    let pres = RingPresentation::build(g, deg_d)?;
    let module = BiGradedModule::from_ring(&pres)?;
    let verdicts = module.hard_lefschetz_verify();
    let bijective = verdicts.iter().all(|v| v.bijective);
    let isobaric_failure = module.isobaric_decomposition_check()?;
    let pass = bijective && isobaric_failure.is_none();
    let payload = json!({
        "g": g,
        "degD": deg_d,
        "w0": module.w0,
        "verdicts": serde_json::to_value(&verdicts).expect("verdicts serialize"),
        "isobaric_decomposition_ok": isobaric_failure.is_none(),
        "pass": pass,
    });
    Ok((payload, pass))
}

/// The full filtration-comparison suite for one (g, degD) pair.
pub fn pw_payload(g: usize, deg_d: usize) -> Result<(Value, bool)> {
    let pres = RingPresentation::build(g, deg_d)?;
    let module = BiGradedModule::from_ring(&pres)?;
    let checker = PwChecker::new(&pres, &module)?;
    let report = checker.full_report()?;
    let gl2 = checker.gl2_check()?;
    let pass = report.pass && gl2.pass;
    let payload = json!({
        "filtrations": serde_json::to_value(&report).expect("report serializes"),
        "gl2": serde_json::to_value(&gl2).expect("report serializes"),
        "pass": pass,
    });
    Ok((payload, pass))
}

/// Betti count, blow-up poset sum and Poincaré polynomial of one singular
/// type. The printed-truncation reading of the even factor is reported
/// alongside on request.
pub fn jacobian_payload(st: &SingularType, printed_reading: bool) -> Result<(Value, bool)> {
    let report = jacobian::analyze(st);
    let pass = report.e1_degenerate;
    let mut payload = serde_json::to_value(&report).expect("report serializes");
    if printed_reading {
        let poly = jacobian::poincare_polynomial(st, EvenFactorReading::PrintedTruncation);
        payload["poincare_poly_printed_reading"] = Value::String(poly.display());
    }
    Ok((payload, pass))
}

/// Invariant dimensions for one partition/variant pair, with the global
/// totals over a genus-g base and the Jacobian-side cross-check.
pub fn braid_payload(g: usize, p: &Partition, variant: Variant) -> Result<(Value, bool)> {
    let report = braid::analyze(p, variant)?;
    let total = braid::total_local_invariants(g, p, variant)?;
    let factor = match variant {
        Variant::Disc => 1u128 << (4 * g),
        Variant::Conn => 1u128 << (4 * g - 2),
    };
    let closed_total = report.closed_form * factor;
    let jacobian_bound = match variant {
        Variant::Conn => Some(braid::match_jacobian_bound(g, p)?),
        Variant::Disc => None,
    };
    let pass = report.matches && total == closed_total && jacobian_bound != Some(false);
    let payload = json!({
        "g": g,
        "partition": report.partition,
        "variant": report.variant,
        "dimension": report.dimension,
        "generator_indices": report.generator_indices,
        "per_degree_invariants": report.per_degree_invariants,
        "local_sum": report.total,
        "local_closed_form": report.closed_form,
        "total": total,
        "total_closed_form": closed_total,
        "jacobian_bound_match": jacobian_bound,
        "pass": pass,
    });
    Ok((payload, pass))
}

/// Variant-part E-polynomial coefficients, dimension table and consistency
/// verdicts.
pub fn sl2_payload(g: usize) -> Result<(Value, bool)> {
    let e_var = sl2::e_var(g)?;
    let table = sl2::variant_dims(g)?;
    let consistency = sl2::variant_consistency(g)?;
    let coefficients: Vec<Value> = e_var
        .terms()
        .iter()
        .map(|(&(i, j), c)| json!({ "x_exp": i, "y_exp": j, "coeff": rational_string(c) }))
        .collect();
    let pass = consistency.pass;
    let payload = json!({
        "g": g,
        "e_var": coefficients,
        "variant": serde_json::to_value(&table).expect("table serializes"),
        "consistency": serde_json::to_value(&consistency).expect("report serializes"),
        "pass": pass,
    });
    Ok((payload, pass))
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteItem {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub max_g: usize,
    pub max_deg_d: usize,
    pub max_d: usize,
    pub items: Vec<SuiteItem>,
    pub pass: bool,
}

fn item(name: String, pass: bool, detail: String) -> SuiteItem {
    SuiteItem { name, pass, detail }
}

fn item_from<F>(name: String, run: F) -> SuiteItem
where
    F: FnOnce() -> Result<(bool, String)>,
{
    match run() {
        Ok((pass, detail)) => item(name, pass, detail),
        Err(e) => item(name, false, format!("error: {e}")),
    }
}

/// All singular types with Σδ ≤ delta_budget and g̃ ≤ g_budget, each δ list
/// sorted descending, types distinguished only up to reordering.
pub fn singular_types_within(delta_budget: usize, g_budget: usize) -> Vec<SingularType> {
    fn partitions_into_parts(total: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if total == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max_part.min(total)).rev() {
            prefix.push(part);
            partitions_into_parts(total - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut types = Vec::new();
    for g_tilde in 0..=g_budget {
        for total in 0..=delta_budget {
            let mut parts = Vec::new();
            partitions_into_parts(total, total.max(1), &mut Vec::new(), &mut parts);
            for partition in parts {
                // Two-color the multiset without duplicates: per distinct
                // value, choose how many copies are odd-type.
                let distinct: Vec<(usize, usize)> = {
                    let mut v: Vec<(usize, usize)> = Vec::new();
                    for &p in &partition {
                        match v.last_mut() {
                            Some((val, count)) if *val == p => *count += 1,
                            _ => v.push((p, 1)),
                        }
                    }
                    v
                };
                let mut colorings = vec![(Vec::new(), Vec::new())];
                for &(val, count) in &distinct {
                    let mut next = Vec::new();
                    for (odd, even) in &colorings {
                        for odd_copies in 0..=count {
                            let mut o = odd.clone();
                            let mut e = even.clone();
                            o.extend(std::iter::repeat(val).take(odd_copies));
                            e.extend(std::iter::repeat(val).take(count - odd_copies));
                            next.push((o, e));
                        }
                    }
                    colorings = next;
                }
                for (odd, even) in colorings {
                    types.push(SingularType::new(odd, even, g_tilde).expect("positive deltas"));
                }
            }
        }
    }
    types
}

/// Batch driver: run every suite family within the given bounds. A zero in
/// any bound means nothing to verify and an empty summary.
pub fn verify_all(max_g: usize, max_deg_d: usize, max_d: usize) -> VerifySummary {
    let mut jobs: Vec<Box<dyn FnOnce() -> SuiteItem + Send>> = Vec::new();
    if max_g > 0 && max_deg_d > 0 && max_d > 0 {
        for g in 2..=max_g {
            for deg_d in (2 * g - 2)..=max_deg_d {
                jobs.push(Box::new(move || {
                    item_from(format!("ring g={g} degD={deg_d}"), || {
                        let pres = RingPresentation::build(g, deg_d)?;
                        let vanishing = pres.vanishing_check()?;
                        Ok((vanishing.pass, format!("basis {}", pres.basis.len())))
                    })
                }));
                jobs.push(Box::new(move || {
                    item_from(format!("lefschetz g={g} degD={deg_d}"), || {
                        let (_, pass) = lefschetz_payload(g, deg_d)?;
                        Ok((pass, "α-cup powers bijective".into()))
                    })
                }));
                jobs.push(Box::new(move || {
                    item_from(format!("pw g={g} degD={deg_d}"), || {
                        let (_, pass) = pw_payload(g, deg_d)?;
                        Ok((pass, "filtrations agree".into()))
                    })
                }));
            }
        }
        for g in 1..=max_g {
            jobs.push(Box::new(move || {
                item_from(format!("lambda0 g={g}"), || {
                    let algebra = ExteriorAlgebra::new(g)?;
                    let ok = (0..=2 * g + 2).all(|k| {
                        let expected = if k > g {
                            0
                        } else {
                            let diff = binomial(2 * g, k as isize) - binomial(2 * g, k as isize - 2);
                            diff.to_usize().unwrap_or(0)
                        };
                        algebra.lambda0_dim(k) == expected
                    });
                    Ok((ok, "kernel ranks match binomials".into()))
                })
            }));
        }
        for d in (2..=max_d).step_by(2) {
            for p in braid::partitions_of(d) {
                jobs.push(Box::new(move || {
                    item_from(format!("braid {:?}", p.parts()), || {
                        let conn = braid::analyze(&p, Variant::Conn)?;
                        let mut ok = conn.matches;
                        let mut detail = format!("conn {}", conn.total);
                        if p.omega() >= 1 {
                            let disc = braid::analyze(&p, Variant::Disc)?;
                            ok = ok && disc.matches;
                            detail.push_str(&format!(" disc {}", disc.total));
                        }
                        for g in 2..=max_g {
                            ok = ok && braid::match_jacobian_bound(g, &p)?;
                        }
                        Ok((ok, detail))
                    })
                }));
            }
        }
        for st in singular_types_within(max_d.min(6), max_g.min(3)) {
            jobs.push(Box::new(move || {
                item_from(
                    format!(
                        "jacobian g~={} odd={:?} even={:?}",
                        st.g_tilde, st.odd_points, st.even_points
                    ),
                    || {
                        let report = jacobian::analyze(&st);
                        Ok((report.e1_degenerate, format!("betti {}", report.betti_sum)))
                    },
                )
            }));
        }
        for g in 2..=max_g {
            jobs.push(Box::new(move || {
                item_from(format!("sl2 g={g}"), || {
                    let report = sl2::variant_consistency(g)?;
                    Ok((report.pass, "closed forms and dims agree".into()))
                })
            }));
        }
        for m in 1..=(max_d / 2).min(4) {
            jobs.push(Box::new(move || {
                item_from(format!("linealg m={m}"), || {
                    let mut ok = braid::lemma_linealg_check(m, LinalgCase::Full)?.pass;
                    ok = ok && braid::lemma_linealg_check(m, LinalgCase::TailOnly)?.pass;
                    for t in (1..2 * m).step_by(2) {
                        ok = ok && braid::lemma_linealg_check(m, LinalgCase::Split { t })?.pass;
                    }
                    Ok((ok, "invariant counts match".into()))
                })
            }));
        }
    }
    let items: Vec<SuiteItem> = jobs.into_par_iter().map(|job| job()).collect();
    let pass = items.iter().all(|i| i.pass);
    VerifySummary { max_g, max_deg_d, max_d, items, pass }
}

pub fn summary_payload(summary: &VerifySummary) -> (Value, bool) {
    let payload = serde_json::to_value(summary).expect("summary serializes");
    (payload, summary.pass)
}

/// Flatten a JSON value to two-column CSV, one row per leaf, paths joined
/// with dots and array entries indexed.
pub fn csv_from_value(value: &Value) -> String {
    fn escape(field: &str) -> String {
        if field.contains(',') || field.contains('"') || field.contains('\n') {
            format!("\"{}\"", field.replace('"', "\"\""))
        } else {
            field.to_string()
        }
    }
    fn walk(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
        match value {
            Value::Object(map) => {
                for (k, v) in map {
                    let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&path, v, rows);
                }
            }
            Value::Array(items) => {
                for (i, v) in items.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), v, rows);
                }
            }
            Value::Null => rows.push((prefix.to_string(), String::new())),
            Value::Bool(b) => rows.push((prefix.to_string(), b.to_string())),
            Value::Number(n) => rows.push((prefix.to_string(), n.to_string())),
            Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        }
    }
    let mut rows = Vec::new();
    walk("", value, &mut rows);
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&escape(&k));
        out.push(',');
        out.push_str(&escape(&v));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_carries_schema_tag() {
        let v = envelope("ring", json!({ "x": 1 }));
        assert_eq!(v["schema"], "pw-lab/1");
        assert_eq!(v["kind"], "ring");
        assert_eq!(v["report"]["x"], 1);
    }

    #[test]
    fn braid_example_total() {
        let p = Partition::new(&[2]).unwrap();
        let (payload, pass) = braid_payload(2, &p, Variant::Conn).unwrap();
        assert!(pass);
        assert_eq!(payload["total"], 192);
        assert_eq!(payload["jacobian_bound_match"], Value::Bool(true));
    }

    #[test]
    fn jacobian_example_payload() {
        let st = SingularType::new(vec![1], vec![], 0).unwrap();
        let (payload, pass) = jacobian_payload(&st, false).unwrap();
        assert!(pass);
        assert_eq!(payload["betti_sum"], 3);
        assert_eq!(payload["poincare_poly"], "1+t+t^2");
    }

    #[test]
    fn json_output_is_deterministic() {
        let (a, _) = sl2_payload(3).unwrap();
        let (b, _) = sl2_payload(3).unwrap();
        assert_eq!(
            serde_json::to_string(&envelope("sl2", a)).unwrap(),
            serde_json::to_string(&envelope("sl2", b)).unwrap()
        );
    }

    #[test]
    fn csv_flattening_escapes_and_indexes() {
        let v = json!({ "a": [ { "x": 1 }, { "x": "p,q" } ], "b": true });
        let csv = csv_from_value(&v);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "key,value");
        assert!(lines.contains(&"a.0.x,1"));
        assert!(lines.contains(&"a.1.x,\"p,q\""));
        assert!(lines.contains(&"b,true"));
    }

    #[test]
    fn verify_all_zero_bounds_is_empty() {
        let summary = verify_all(0, 4, 6);
        assert!(summary.items.is_empty());
        assert!(summary.pass);
    }

    #[test]
    fn verify_all_small_bounds_pass() {
        let summary = verify_all(2, 2, 2);
        assert!(!summary.items.is_empty());
        assert!(summary.pass, "{:?}", summary.items.iter().filter(|i| !i.pass).collect::<Vec<_>>());
    }

    #[test]
    fn singular_type_enumeration_counts() {
        // Budget 2, g̃ ≤ 0: types are {}, {odd [1]}, {even [1]}, {[2]}×2,
        // {[1,1]} with 3 colorings.
        let types = singular_types_within(2, 0);
        assert_eq!(types.len(), 8);
    }

    #[test]
    fn u128_counts_serialize() {
        let st = SingularType::new(vec![3], vec![2], 3).unwrap();
        let report = jacobian::analyze(&st);
        let v = serde_json::to_value(&report).unwrap();
        assert!(v["betti_sum"].is_u64());
    }
}
