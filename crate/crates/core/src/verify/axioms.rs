use std::time::Instant;

use serde_json::json;

use super::{name, par_map, vec_json, Window};
use crate::error::{Result, VlaError};
use crate::exactlin::{int, sign, SparseVec};
use crate::report::VerificationReport;
use crate::vertex::{apply_translation, mode_product, SkewIdeal, VertexRealization};

/// `1_n v = δ_{n,-1} v`, `v_n 1 = 0` for `n ≥ 0`, `v_{-1} 1 = v` and, when
/// `D` is present, `D1 = 0`.
pub fn check_vacuum_axioms(r: &dyn VertexRealization, window: &Window) -> Result<VerificationReport> {
    let vacuum = r
        .vacuum()
        .ok_or_else(|| VlaError::Precondition(format!("{} has no vacuum", r.label())))?;
    let started = Instant::now();
    let mut report = VerificationReport::new("vacuum_axioms").param("realization", r.label());
    window.stamp(&mut report);
    for s in r.states(window.max_degree) {
        let v = SparseVec::unit(s);
        for n in window.modes() {
            let expected = if n == -1 { v.clone() } else { SparseVec::new() };
            let got = mode_product(r, &vacuum, n, &v)?;
            if got != expected {
                report.fail(
                    json!({"axiom": "vacuum", "v": name(r, s), "n": n}),
                    json!({"expected": vec_json(r, &expected), "got": vec_json(r, &got)}),
                );
            }
        }
        for n in window.mode_min.max(-1)..=window.mode_max {
            let expected = if n == -1 { v.clone() } else { SparseVec::new() };
            let got = mode_product(r, &v, n, &vacuum)?;
            if got != expected {
                report.fail(
                    json!({"axiom": "creation", "v": name(r, s), "n": n}),
                    json!({"expected": vec_json(r, &expected), "got": vec_json(r, &got)}),
                );
            }
        }
    }
    if let Some(&first) = vacuum.keys().next() {
        if r.translation(first).is_some() {
            let d1 = apply_translation(r, &vacuum)?;
            if !d1.is_zero() {
                report.fail(json!({"axiom": "translation"}), json!({"D1": vec_json(r, &d1)}));
            }
        }
    }
    Ok(report.timed(started))
}

/// Every basis vector of `J̄` annihilates every state of the window:
/// `a_n w = 0`. Products whose degree lies beyond the saturated window are
/// skipped and counted.
pub fn check_ideal_annihilation(ideal: &SkewIdeal, window: &Window) -> Result<VerificationReport> {
    let started = Instant::now();
    let dext = ideal.dext().as_ref();
    let mut report = VerificationReport::new("ideal_annihilation").param("realization", dext.label());
    window.stamp(&mut report);
    report.set_param("ideal_max_degree", ideal.max_degree());
    let generators: Vec<SparseVec> = ideal
        .basis_vectors()
        .into_iter()
        .filter(|a| a.keys().all(|&s| dext.degree(s) <= window.max_degree))
        .collect();
    let states = dext.states(window.max_degree);
    let results = par_map(&generators, |a| {
        let deg_a = a.keys().map(|&s| dext.degree(s)).max().unwrap_or(0);
        let mut failures = Vec::new();
        let mut skipped = 0usize;
        for &w in &states {
            for n in window.modes() {
                if deg_a + dext.degree(w) - n - 1 > ideal.max_degree() {
                    skipped += 1;
                    continue;
                }
                let value = mode_product(dext, a, n, &SparseVec::unit(w))?;
                if !value.is_zero() {
                    failures.push((
                        json!({"a": vec_json(dext, a), "n": n, "w": name(dext, w)}),
                        json!({"product": vec_json(dext, &value)}),
                    ));
                }
            }
        }
        Ok((failures, skipped))
    })?;
    let mut skipped = 0usize;
    for (failures, s) in results {
        skipped += s;
        for (input, detail) in failures {
            report.fail(input, detail);
        }
    }
    report.set_summary("ideal_vectors", generators.len());
    report.set_summary("skipped_beyond_window", skipped);
    Ok(report.timed(started))
}

/// For each `m` in `[m_min, m_max]` with `v_{m+j} u = 0` for all `j > 0`,
/// compares `u_m v` with `(-1)^{m-1} v_m u`. A mismatch certifies that `V`
/// embeds in no vertex algebra. When no `m` qualifies the status is
/// `not_applicable`.
pub fn embedding_obstruction(
    r: &dyn VertexRealization,
    u: usize,
    v: usize,
    m_min: i64,
    m_max: i64,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut report = VerificationReport::new("embedding_obstruction")
        .param("realization", r.label())
        .param("u", r.describe(u))
        .param("v", r.describe(v))
        .param("m_min", m_min)
        .param("m_max", m_max);
    let (qualifying, failures) = obstruction_pair(r, u, v, m_min, m_max)?;
    for (input, detail) in failures {
        report.fail(input, detail);
    }
    report.set_summary("qualifying_m", qualifying.clone());
    report.set_summary("status", status(qualifying.is_empty(), report.pass));
    Ok(report.timed(started))
}

fn status(none_qualify: bool, pass: bool) -> &'static str {
    match (none_qualify, pass) {
        (_, false) => "obstruction",
        (true, true) => "not_applicable",
        (false, true) => "pass",
    }
}

type Witnesses = Vec<(serde_json::Value, serde_json::Value)>;

fn obstruction_pair(r: &dyn VertexRealization, u: usize, v: usize, m_min: i64, m_max: i64) -> Result<(Vec<i64>, Witnesses)> {
    let (eu, ev) = (SparseVec::unit(u), SparseVec::unit(v));
    let bound = r.annihilation(v, u);
    let mut qualifying = Vec::new();
    let mut failures = Vec::new();
    for m in m_min..=m_max {
        let mut qualifies = true;
        let mut j = 1;
        while m + j < bound {
            if !mode_product(r, &ev, m + j, &eu)?.is_zero() {
                qualifies = false;
                break;
            }
            j += 1;
        }
        if !qualifies {
            continue;
        }
        qualifying.push(m);
        let lhs = mode_product(r, &eu, m, &ev)?;
        let rhs = mode_product(r, &ev, m, &eu)?.scaled(&sign(m - 1));
        if lhs != rhs {
            let mut defect = lhs.clone();
            defect.add_scaled(&int(-1), &rhs);
            failures.push((
                json!({"u": name(r, u), "v": name(r, v), "m": m}),
                json!({
                    "u_m v": vec_json(r, &lhs),
                    "(-1)^(m-1) v_m u": vec_json(r, &rhs),
                    "defect": vec_json(r, &defect),
                }),
            ));
        }
    }
    Ok((qualifying, failures))
}

/// The obstruction test on every basis pair of degree at most
/// `window.max_degree`, with `m` ranging over the mode window.
pub fn embedding_scan(r: &dyn VertexRealization, window: &Window) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut report = VerificationReport::new("embedding_scan").param("realization", r.label());
    window.stamp(&mut report);
    let states = r.states(window.max_degree);
    let pairs: Vec<(usize, usize)> = states
        .iter()
        .flat_map(|&u| states.iter().map(move |&v| (u, v)))
        .collect();
    let results = par_map(&pairs, |&(u, v)| obstruction_pair(r, u, v, window.mode_min, window.mode_max))?;
    let mut not_applicable = Vec::new();
    let mut checked = 0usize;
    for (&(u, v), (qualifying, failures)) in pairs.iter().zip(results) {
        if qualifying.is_empty() {
            not_applicable.push(json!([r.describe(u), r.describe(v)]));
        } else {
            checked += 1;
        }
        for (input, detail) in failures {
            report.fail(input, detail);
        }
    }
    report.set_summary("pairs_checked", checked);
    report.set_summary("pairs_not_applicable", not_applicable);
    report.set_summary("status", status(checked == 0, report.pass));
    Ok(report.timed(started))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::leibniz::LeibnizAlgebra;
    use crate::vertex::{adjoin_vacuum, hemisemidirect, perm_vertex, saturate_ideal, DExtension, PermAlgebra, VgRealization};

    #[test]
    fn n2_obstruction_and_abelian_not_applicable() {
        let g = LeibnizAlgebra::from_brackets("n2", &["x", "y"], &[(0, 0, vec![(1, int(1))])]).unwrap();
        let v = VgRealization::adjoint(&g, 6).unwrap();
        let x = v.module().bottom_state(0);
        let report = embedding_obstruction(&v, x, x, 0, 0).unwrap();
        assert!(!report.pass);
        assert_eq!(report.summary["status"], json!("obstruction"));
        assert_eq!(report.findings[0].detail["defect"], json!({"y": "2"}));
        let none = embedding_obstruction(&v, x, x, -3, -1).unwrap();
        assert_eq!(none.summary["status"], json!("not_applicable"));
        assert!(none.to_text().starts_with("[NOT APPLICABLE]"));
    }

    #[test]
    fn vacuum_axioms_and_hemisemidirect_creation() {
        let p = PermAlgebra::truncated_polynomial(3);
        let v = Arc::new(adjoin_vacuum(Arc::new(perm_vertex(&p).unwrap())).unwrap());
        assert!(check_vacuum_axioms(v.as_ref(), &Window::default()).unwrap().pass);
        let h = hemisemidirect(v).unwrap();
        let report = check_vacuum_axioms(&h, &Window::default()).unwrap();
        assert!(!report.pass);
        assert!(report
            .findings
            .iter()
            .all(|f| f.input["axiom"] == json!("creation") && f.input["v"].as_str().unwrap().starts_with("(0,")));
    }

    #[test]
    fn injected_vector_breaks_annihilation() {
        let g = LeibnizAlgebra::from_brackets("n2", &["x", "y"], &[(0, 0, vec![(1, int(1))])]).unwrap();
        let base = VgRealization::adjoint(&g, 4).unwrap();
        let gens: Vec<SparseVec> = (0..2).map(|b| base.generator_state(b).unwrap()).collect();
        let x = gens[0].clone();
        let dext = Arc::new(DExtension::new(Arc::new(base), 4).unwrap());
        let ideal = saturate_ideal(dext, &gens, None).unwrap();
        let window = Window::new(3, -1, 2).unwrap();
        assert!(check_ideal_annihilation(&ideal, &window).unwrap().pass);
        let bad = ideal.with_injected(&x).unwrap();
        assert!(!check_ideal_annihilation(&bad, &window).unwrap().pass);
    }
}
