use std::time::Instant;

use serde_json::json;

use super::{name, par_map, require_translation, vec_json, within_exact, Window};
use crate::error::Result;
use crate::exactlin::{int, SparseVec};
use crate::report::VerificationReport;
use crate::vertex::{apply_translation, mode_product, skew_defect, VertexRealization};

/// `u_n v = Σ_{i≥0} (-1)^{n+i+1} (1/i!) D^i (v_{n+i} u)` for every `n` in the
/// mode window. Each nonzero defect is a finding.
pub fn check_skew_symmetry(
    r: &dyn VertexRealization,
    u: usize,
    v: usize,
    window: &Window,
) -> Result<VerificationReport> {
    require_translation(r)?;
    let started = Instant::now();
    let mut report = VerificationReport::new("skew_symmetry").param("realization", r.label());
    window.stamp(&mut report);
    for (input, detail) in skew_pair(r, u, v, window)? {
        report.fail(input, detail);
    }
    Ok(report.timed(started))
}

fn skew_pair(
    r: &dyn VertexRealization,
    u: usize,
    v: usize,
    window: &Window,
) -> Result<Vec<(serde_json::Value, serde_json::Value)>> {
    let (eu, ev) = (SparseVec::unit(u), SparseVec::unit(v));
    let mut out = Vec::new();
    for n in window.modes() {
        let defect = skew_defect(r, &eu, &ev, n)?;
        if !defect.is_zero() {
            out.push((
                json!({"u": name(r, u), "v": name(r, v), "n": n}),
                json!({"defect": vec_json(r, &defect)}),
            ));
        }
    }
    Ok(out)
}

/// Skew symmetry for every basis pair of the window.
pub fn skew_sweep(r: &dyn VertexRealization, window: &Window) -> Result<VerificationReport> {
    require_translation(r)?;
    let started = Instant::now();
    let mut report = VerificationReport::new("skew_symmetry_sweep").param("realization", r.label());
    window.stamp(&mut report);
    let states = r.states(window.max_degree);
    let pairs: Vec<(usize, usize)> = states
        .iter()
        .flat_map(|&u| states.iter().map(move |&v| (u, v)))
        .filter(|&(u, v)| within_exact(r, r.degree(u) + r.degree(v)))
        .collect();
    let results = par_map(&pairs, |&(u, v)| skew_pair(r, u, v, window))?;
    for (input, detail) in results.into_iter().flatten() {
        report.fail(input, detail);
    }
    report.set_summary("pairs", pairs.len());
    Ok(report.timed(started))
}

/// The bracket property `D(u_n w) - u_n(Dw) = -n u_{n-1} w` and the derivative
/// property `(Du)_n w = -n u_{n-1} w`, reported separately in the summary.
pub fn check_d_properties(r: &dyn VertexRealization, window: &Window) -> Result<VerificationReport> {
    require_translation(r)?;
    let started = Instant::now();
    let mut report = VerificationReport::new("d_properties").param("realization", r.label());
    window.stamp(&mut report);
    let states = r.states(window.max_degree);
    let pairs: Vec<(usize, usize)> = states
        .iter()
        .flat_map(|&u| states.iter().map(move |&w| (u, w)))
        .filter(|&(u, w)| within_exact(r, r.degree(u) + r.degree(w)))
        .collect();
    let results = par_map(&pairs, |&(u, w)| {
        let (eu, ew) = (SparseVec::unit(u), SparseVec::unit(w));
        let du = apply_translation(r, &eu)?;
        let dw = apply_translation(r, &ew)?;
        let mut out = Vec::new();
        for n in window.modes() {
            let lower = mode_product(r, &eu, n - 1, &ew)?.scaled(&int(-n));
            let mut bracket = apply_translation(r, &mode_product(r, &eu, n, &ew)?)?;
            bracket.add_scaled(&int(-1), &mode_product(r, &eu, n, &dw)?);
            bracket.add_scaled(&int(-1), &lower);
            let mut derivative = mode_product(r, &du, n, &ew)?;
            derivative.add_scaled(&int(-1), &lower);
            for (property, defect) in [("bracket", bracket), ("derivative", derivative)] {
                if !defect.is_zero() {
                    out.push((
                        property,
                        json!({"u": name(r, u), "w": name(r, w), "n": n}),
                        json!({"property": property, "defect": vec_json(r, &defect)}),
                    ));
                }
            }
        }
        Ok(out)
    })?;
    let (mut bracket_ok, mut derivative_ok) = (true, true);
    for (property, input, detail) in results.into_iter().flatten() {
        match property {
            "bracket" => bracket_ok = false,
            _ => derivative_ok = false,
        }
        report.fail(input, detail);
    }
    report.set_summary("bracket_property", bracket_ok);
    report.set_summary("derivative_property", derivative_ok);
    Ok(report.timed(started))
}
