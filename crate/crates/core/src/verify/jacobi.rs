use std::collections::HashMap;
use std::time::Instant;

use serde_json::json;

use super::{module_name, module_vec_json, name, par_map, within_exact, Window};
use crate::error::Result;
use crate::exactlin::{int, sign, SparseVec};
use crate::formal::gen_binomial;
use crate::report::VerificationReport;
use crate::vertex::{module_action, Adjoint, VertexModule, VertexRealization};

/// Basis degree a realization must be built to for a Jacobi sweep over
/// `window`: the output degree of the extreme tuple.
pub fn jacobi_required_degree(window: &Window) -> i64 {
    3 * window.max_degree - 3 * window.mode_min.min(0) - 2
}

/// The three composite products of one triple `(u, v, w)`, memoized across
/// the `(l, m, n)` grid.
struct Triple<'a> {
    r: &'a dyn VertexRealization,
    m: &'a dyn VertexModule,
    u: usize,
    v: usize,
    w: usize,
    ann_uv: i64,
    ann_uw: i64,
    ann_vw: i64,
    u_after_v: HashMap<(i64, i64), SparseVec>,
    v_after_u: HashMap<(i64, i64), SparseVec>,
    iterate: HashMap<(i64, i64), SparseVec>,
}

impl<'a> Triple<'a> {
    fn new(r: &'a dyn VertexRealization, m: &'a dyn VertexModule, u: usize, v: usize, w: usize) -> Self {
        Self {
            r,
            m,
            u,
            v,
            w,
            ann_uv: r.annihilation(u, v),
            ann_uw: m.act_annihilation(u, w),
            ann_vw: m.act_annihilation(v, w),
            u_after_v: HashMap::new(),
            v_after_u: HashMap::new(),
            iterate: HashMap::new(),
        }
    }

    /// `u_p (v_q w)`.
    fn u_after_v(&mut self, p: i64, q: i64) -> Result<SparseVec> {
        if let Some(hit) = self.u_after_v.get(&(p, q)) {
            return Ok(hit.clone());
        }
        let inner = self.m.act(self.v, q, self.w)?;
        let value = module_action(self.m, &SparseVec::unit(self.u), p, &inner)?;
        self.u_after_v.insert((p, q), value.clone());
        Ok(value)
    }

    /// `v_q (u_p w)`.
    fn v_after_u(&mut self, q: i64, p: i64) -> Result<SparseVec> {
        if let Some(hit) = self.v_after_u.get(&(q, p)) {
            return Ok(hit.clone());
        }
        let inner = self.m.act(self.u, p, self.w)?;
        let value = module_action(self.m, &SparseVec::unit(self.v), q, &inner)?;
        self.v_after_u.insert((q, p), value.clone());
        Ok(value)
    }

    /// `(u_a v)_b w`.
    fn iterate(&mut self, a: i64, b: i64) -> Result<SparseVec> {
        if let Some(hit) = self.iterate.get(&(a, b)) {
            return Ok(hit.clone());
        }
        let uv = self.r.mode(self.u, a, self.v)?;
        let value = module_action(self.m, &uv, b, &SparseVec::unit(self.w))?;
        self.iterate.insert((a, b), value.clone());
        Ok(value)
    }

    fn sides(&mut self, l: i64, m: i64, n: i64) -> Result<(SparseVec, SparseVec)> {
        let mut lhs = SparseVec::new();
        let mut terms = (self.ann_vw - n).max(self.ann_uw - m).max(0);
        if l >= 0 {
            terms = terms.min(l + 1);
        }
        for i in 0..terms {
            let c = gen_binomial(l, i as u64) * sign(i);
            if n + i < self.ann_vw {
                lhs.add_scaled(&c, &self.u_after_v(m + l - i, n + i)?);
            }
            if m + i < self.ann_uw {
                lhs.add_scaled(&(-&c * sign(l)), &self.v_after_u(n + l - i, m + i)?);
            }
        }
        let mut rhs = SparseVec::new();
        let mut terms = (self.ann_uv - l).max(0);
        if m >= 0 {
            terms = terms.min(m + 1);
        }
        for i in 0..terms {
            rhs.add_scaled(&gen_binomial(m, i as u64), &self.iterate(l + i, m + n - i)?);
        }
        Ok((lhs, rhs))
    }
}

fn witness(t: &Triple, l: i64, m: i64, n: i64) -> serde_json::Value {
    json!({
        "l": l, "m": m, "n": n,
        "u": name(t.r, t.u), "v": name(t.r, t.v), "w": module_name(t.m, t.w),
    })
}

fn defect_json(m: &dyn VertexModule, lhs: &SparseVec, rhs: &SparseVec) -> serde_json::Value {
    let mut diff = lhs.clone();
    diff.add_scaled(&int(-1), rhs);
    json!({
        "lhs": module_vec_json(m, lhs),
        "rhs": module_vec_json(m, rhs),
        "difference": module_vec_json(m, &diff),
    })
}

/// The Jacobi identity in components,
///
/// ```text
/// Σ_i (-1)^i C(l,i) [u_{m+l-i}(v_{n+i}w) - (-1)^l v_{n+l-i}(u_{m+i}w)]
///     = Σ_i C(m,i) (u_{l+i}v)_{m+n-i} w
/// ```
///
/// for basis states `u, v` of `r` and `w` of `module` (the adjoint module
/// when `None`).
#[allow(clippy::too_many_arguments)]
pub fn check_jacobi_component(
    r: &dyn VertexRealization,
    module: Option<&dyn VertexModule>,
    l: i64,
    m: i64,
    n: i64,
    u: usize,
    v: usize,
    w: usize,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let adjoint = Adjoint(r);
    let module = module.unwrap_or(&adjoint);
    let mut t = Triple::new(r, module, u, v, w);
    let mut report = VerificationReport::new("jacobi_component").param("realization", r.label());
    let (lhs, rhs) = t.sides(l, m, n)?;
    if lhs != rhs {
        report.fail(witness(&t, l, m, n), defect_json(module, &lhs, &rhs));
    }
    Ok(report.timed(started))
}

/// The component identity for every basis triple with degrees at most
/// `window.max_degree` and every `l, m, n` in the mode window.
pub fn jacobi_sweep(
    r: &dyn VertexRealization,
    module: Option<&dyn VertexModule>,
    window: &Window,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let adjoint = Adjoint(r);
    let module = module.unwrap_or(&adjoint);
    let mut report = VerificationReport::new("jacobi_sweep")
        .param("realization", r.label())
        .param("module", module.module_label());
    window.stamp(&mut report);

    let states = r.states(window.max_degree);
    let targets = module.module_states(window.max_degree);
    let mut triples = Vec::new();
    let mut skipped = 0usize;
    for &u in &states {
        for &v in &states {
            for &w in &targets {
                if within_exact(r, r.degree(u) + r.degree(v) + module.module_degree(w)) {
                    triples.push((u, v, w));
                } else {
                    skipped += 1;
                }
            }
        }
    }
    let modes: Vec<i64> = window.modes().collect();
    let results = par_map(&triples, |&(u, v, w)| {
        let mut t = Triple::new(r, module, u, v, w);
        let mut failures = Vec::new();
        for &l in &modes {
            for &m in &modes {
                for &n in &modes {
                    let (lhs, rhs) = t.sides(l, m, n)?;
                    if lhs != rhs {
                        failures.push((witness(&t, l, m, n), defect_json(module, &lhs, &rhs)));
                    }
                }
            }
        }
        Ok(failures)
    })?;
    for (input, detail) in results.into_iter().flatten() {
        report.fail(input, detail);
    }
    report.set_summary("triples", triples.len());
    report.set_summary("tuples_checked", triples.len() * modes.len().pow(3));
    if skipped > 0 {
        report.set_summary("triples_beyond_exact_degree", skipped);
    }
    Ok(report.timed(started))
}
