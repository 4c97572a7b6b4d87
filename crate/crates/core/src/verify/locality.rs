use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::{json, Value};

use super::{module_name, module_vec_json, name, par_map, within_exact, Window};
use crate::error::Result;
use crate::exactlin::{int, sign, SparseVec};
use crate::formal::gen_binomial;
use crate::report::VerificationReport;
use crate::vertex::{module_action, Adjoint, VertexModule, VertexRealization};

/// `Σ_j (-1)^j C(k,j) [u_{p+k-j}, v_{q+j}] w`.
fn commutator_component(
    m: &dyn VertexModule,
    u: usize,
    v: usize,
    k: usize,
    p: i64,
    q: i64,
    w: usize,
) -> Result<SparseVec> {
    let (eu, ev, ew) = (SparseVec::unit(u), SparseVec::unit(v), SparseVec::unit(w));
    let mut out = SparseVec::new();
    for j in 0..=k as i64 {
        let c = gen_binomial(k as i64, j as u64) * sign(j);
        let a = p + k as i64 - j;
        let b = q + j;
        let uv = module_action(m, &eu, a, &module_action(m, &ev, b, &ew)?)?;
        let vu = module_action(m, &ev, b, &module_action(m, &eu, a, &ew)?)?;
        out.add_scaled(&c, &uv);
        out.add_scaled(&-c, &vu);
    }
    Ok(out)
}

/// Smallest `k ≤ max_order` with `(x₁ - x₂)^k [Y(u,x₁), Y(v,x₂)] = 0` on every
/// mode pair of the window and every basis state of degree at most
/// `window.max_degree`, or `None` when no such `k` is witnessed.
pub fn locality_order(
    r: &dyn VertexRealization,
    u: usize,
    v: usize,
    window: &Window,
    max_order: usize,
) -> Result<Option<usize>> {
    let m = Adjoint(r);
    let targets: Vec<usize> = r
        .states(window.max_degree)
        .into_iter()
        .filter(|&w| within_exact(r, r.degree(u) + r.degree(v) + r.degree(w)))
        .collect();
    'orders: for k in 0..=max_order {
        for p in window.modes() {
            for q in window.modes() {
                for &w in &targets {
                    if !commutator_component(&m, u, v, k, p, q, w)?.is_zero() {
                        continue 'orders;
                    }
                }
            }
        }
        return Ok(Some(k));
    }
    Ok(None)
}

/// Locality orders of all basis pairs. A pair without a witnessed order is a
/// finding.
pub fn locality_sweep(r: &dyn VertexRealization, window: &Window, max_order: usize) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut report = VerificationReport::new("locality")
        .param("realization", r.label())
        .param("max_order", max_order);
    window.stamp(&mut report);
    let states = r.states(window.max_degree);
    let pairs: Vec<(usize, usize)> = states
        .iter()
        .flat_map(|&u| states.iter().map(move |&v| (u, v)))
        .collect();
    let orders = par_map(&pairs, |&(u, v)| locality_order(r, u, v, window, max_order))?;
    let mut table = serde_json::Map::new();
    let mut highest = 0usize;
    for (&(u, v), order) in pairs.iter().zip(orders) {
        let key = format!("{},{}", r.describe(u), r.describe(v));
        match order {
            Some(k) => {
                highest = highest.max(k);
                table.insert(key, json!(k));
            }
            None => {
                table.insert(key, Value::Null);
                report.fail(
                    json!({"u": name(r, u), "v": name(r, v)}),
                    json!({"order": "exceeds window"}),
                );
            }
        }
    }
    report.set_summary("max_order", highest);
    report.set_summary("orders", Value::Object(table));
    Ok(report.timed(started))
}

/// `Σ_{i=0}^{l} C(l,i) (u_{m+l-i}v)_{n+i} w` and
/// `Σ_{j≥0} C(j-m-1, j) u_{m+l-j}(v_{n+j} w)`, the `x₀^{-m-1} x₂^{-n-1}`
/// coefficients of both sides of weak associativity of order `l`.
#[allow(clippy::too_many_arguments)]
fn associativity_sides(
    r: &dyn VertexRealization,
    module: &dyn VertexModule,
    u: usize,
    v: usize,
    w: usize,
    l: i64,
    m: i64,
    n: i64,
) -> Result<(SparseVec, SparseVec)> {
    let (eu, ew) = (SparseVec::unit(u), SparseVec::unit(w));
    let mut lhs = SparseVec::new();
    for i in 0..=l {
        let uv = r.mode(u, m + l - i, v)?;
        lhs.add_scaled(&gen_binomial(l, i as u64), &module_action(module, &uv, n + i, &ew)?);
    }
    let mut rhs = SparseVec::new();
    let ann_vw = module.act_annihilation(v, w);
    let mut j = 0i64;
    while n + j < ann_vw {
        let c = gen_binomial(j - m - 1, j as u64);
        if c != int(0) {
            let inner = module.act(v, n + j, w)?;
            rhs.add_scaled(&c, &module_action(module, &eu, m + l - j, &inner)?);
        }
        j += 1;
    }
    Ok((lhs, rhs))
}

/// Searches the smallest `l` for which weak associativity holds on the whole
/// mode window. The search stops at the annihilation order of `u` on `w`,
/// which suffices whenever the Jacobi identity holds.
pub fn check_weak_associativity(
    r: &dyn VertexRealization,
    module: Option<&dyn VertexModule>,
    u: usize,
    v: usize,
    w: usize,
    window: &Window,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let adjoint = Adjoint(r);
    let module = module.unwrap_or(&adjoint);
    let mut report = VerificationReport::new("weak_associativity").param("realization", r.label());
    window.stamp(&mut report);
    let (order, failure) = associativity_order(r, module, u, v, w, window)?;
    match order {
        Some(l) => report.set_summary("order", l),
        None => {
            let (input, detail) = failure.expect("a missing order has a witness");
            report.fail(input, detail);
        }
    }
    Ok(report.timed(started))
}

type Witness = (Value, Value);

fn associativity_order(
    r: &dyn VertexRealization,
    module: &dyn VertexModule,
    u: usize,
    v: usize,
    w: usize,
    window: &Window,
) -> Result<(Option<i64>, Option<Witness>)> {
    let limit = module.act_annihilation(u, w).max(0);
    let mut last = None;
    'orders: for l in 0..=limit {
        for m in window.modes() {
            for n in window.modes() {
                let (lhs, rhs) = associativity_sides(r, module, u, v, w, l, m, n)?;
                if lhs != rhs {
                    let mut diff = lhs.clone();
                    diff.add_scaled(&int(-1), &rhs);
                    last = Some((
                        json!({"l": l, "m": m, "n": n, "u": name(r, u), "v": name(r, v), "w": module_name(module, w)}),
                        json!({
                            "lhs": module_vec_json(module, &lhs),
                            "rhs": module_vec_json(module, &rhs),
                            "difference": module_vec_json(module, &diff),
                        }),
                    ));
                    continue 'orders;
                }
            }
        }
        return Ok((Some(l), None));
    }
    Ok((None, last))
}

/// Weak associativity for every basis triple of the window.
pub fn weak_associativity_sweep(
    r: &dyn VertexRealization,
    module: Option<&dyn VertexModule>,
    window: &Window,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let adjoint = Adjoint(r);
    let module = module.unwrap_or(&adjoint);
    let mut report = VerificationReport::new("weak_associativity_sweep")
        .param("realization", r.label())
        .param("module", module.module_label());
    window.stamp(&mut report);
    let states = r.states(window.max_degree);
    let targets = module.module_states(window.max_degree);
    let mut triples = Vec::new();
    for &u in &states {
        for &v in &states {
            for &w in &targets {
                if within_exact(r, r.degree(u) + r.degree(v) + module.module_degree(w)) {
                    triples.push((u, v, w));
                }
            }
        }
    }
    let results = par_map(&triples, |&(u, v, w)| associativity_order(r, module, u, v, w, window))?;
    let mut histogram: BTreeMap<i64, usize> = BTreeMap::new();
    for (order, failure) in results {
        match order {
            Some(l) => *histogram.entry(l).or_default() += 1,
            None => {
                let (input, detail) = failure.expect("a missing order has a witness");
                report.fail(input, detail);
            }
        }
    }
    report.set_summary("triples", triples.len());
    report.set_summary(
        "orders",
        Value::Object(histogram.into_iter().map(|(l, c)| (l.to_string(), json!(c))).collect()),
    );
    Ok(report.timed(started))
}
