//! Vertex Leibniz algebras given by their modes on a basis.
//!
//! A realization knows `u_n w` for basis states `u, w` and every integer `n`,
//! together with an upper bound beyond which the modes vanish. Everything else
//! (vector arguments, skew defects, the verification sweeps) is derived from
//! that table by linearity.

mod dext;
mod fault;
mod hemi;
mod ideal;
mod perm;
mod vacuum;
mod vg;

use std::sync::Arc;

use serde_json::Value;

use crate::error::{Result, VlaError};
use crate::exactlin::{factorial, sign, Rational, SparseVec};
use crate::report::{vector_json, vector_text};

pub use dext::{DExtension, DState};
pub use fault::{BrokenTranslation, FaultInjected};
pub use hemi::{hemisemidirect, Hemisemidirect};
pub use ideal::{level_zero_map, saturate_ideal, LevelZeroMap, QuotientRealization, SkewIdeal};
pub use perm::{check_perm_axioms, extract_perm, perm_vertex, ExtractedPerm, PermAlgebra, PermRealization};
pub use vacuum::{adjoin_vacuum, VacuumAdjoined};
pub use vg::{VgAction, VgModule, VgRealization};

/// `(V, Y)` presented by its mode table on a basis.
pub trait VertexRealization: Send + Sync {
    fn label(&self) -> String;

    /// Basis states of degree at most `max_degree`, in sweep order.
    fn states(&self, max_degree: i64) -> Vec<usize>;

    fn degree(&self, s: usize) -> i64;

    fn describe(&self, s: usize) -> String;

    /// `u_n w`.
    fn mode(&self, u: usize, n: i64, w: usize) -> Result<Arc<SparseVec>>;

    /// Some `n₀` with `u_n w = 0` for every `n ≥ n₀`.
    fn annihilation(&self, u: usize, w: usize) -> i64;

    /// The translation operator `D` on a basis state, if the realization has one.
    fn translation(&self, _s: usize) -> Option<Result<SparseVec>> {
        None
    }

    fn vacuum(&self) -> Option<SparseVec> {
        None
    }

    /// Largest total degree of a tuple on which the realization is exact, for
    /// finite truncations of infinite algebras.
    fn exact_total_degree(&self) -> Option<i64> {
        None
    }
}

/// A module `W` for a vertex Leibniz algebra `V`: the modes `u_n w` for
/// `u ∈ V`, `w ∈ W`.
pub trait VertexModule: Send + Sync {
    fn module_label(&self) -> String;

    fn module_states(&self, max_degree: i64) -> Vec<usize>;

    fn module_degree(&self, w: usize) -> i64;

    fn describe_module_state(&self, w: usize) -> String;

    fn act(&self, u: usize, n: i64, w: usize) -> Result<Arc<SparseVec>>;

    fn act_annihilation(&self, u: usize, w: usize) -> i64;
}

/// A realization viewed as a module over itself.
pub struct Adjoint<'a>(pub &'a dyn VertexRealization);

impl VertexModule for Adjoint<'_> {
    fn module_label(&self) -> String {
        format!("{} (adjoint)", self.0.label())
    }

    fn module_states(&self, max_degree: i64) -> Vec<usize> {
        self.0.states(max_degree)
    }

    fn module_degree(&self, w: usize) -> i64 {
        self.0.degree(w)
    }

    fn describe_module_state(&self, w: usize) -> String {
        self.0.describe(w)
    }

    fn act(&self, u: usize, n: i64, w: usize) -> Result<Arc<SparseVec>> {
        self.0.mode(u, n, w)
    }

    fn act_annihilation(&self, u: usize, w: usize) -> i64 {
        self.0.annihilation(u, w)
    }
}

pub fn describe_vec(r: &dyn VertexRealization, v: &SparseVec) -> String {
    vector_text(v, |k| r.describe(k))
}

pub fn state_json(r: &dyn VertexRealization, v: &SparseVec) -> Value {
    vector_json(v, |k| r.describe(k))
}

/// `u_n w` extended bilinearly.
pub fn mode_product(r: &dyn VertexRealization, u: &SparseVec, n: i64, w: &SparseVec) -> Result<SparseVec> {
    let mut out = SparseVec::new();
    for (&a, ca) in u.iter() {
        for (&b, cb) in w.iter() {
            if n >= r.annihilation(a, b) {
                continue;
            }
            out.add_scaled(&(ca * cb), &*r.mode(a, n, b)?);
        }
    }
    Ok(out)
}

/// `u_n w` for `u ∈ V`, `w ∈ W`, extended bilinearly.
pub fn module_action(m: &dyn VertexModule, u: &SparseVec, n: i64, w: &SparseVec) -> Result<SparseVec> {
    let mut out = SparseVec::new();
    for (&a, ca) in u.iter() {
        for (&b, cb) in w.iter() {
            if n >= m.act_annihilation(a, b) {
                continue;
            }
            out.add_scaled(&(ca * cb), &*m.act(a, n, b)?);
        }
    }
    Ok(out)
}

/// Smallest bound valid for every pair of terms (`i64::MIN` if either is zero).
pub fn annihilation_vec(r: &dyn VertexRealization, u: &SparseVec, w: &SparseVec) -> i64 {
    let mut bound = i64::MIN;
    for &a in u.keys() {
        for &b in w.keys() {
            bound = bound.max(r.annihilation(a, b));
        }
    }
    bound
}

pub fn module_annihilation_vec(m: &dyn VertexModule, u: &SparseVec, w: &SparseVec) -> i64 {
    let mut bound = i64::MIN;
    for &a in u.keys() {
        for &b in w.keys() {
            bound = bound.max(m.act_annihilation(a, b));
        }
    }
    bound
}

/// `D v` extended linearly.
pub fn apply_translation(r: &dyn VertexRealization, v: &SparseVec) -> Result<SparseVec> {
    v.try_linear_map(|&s| {
        r.translation(s)
            .unwrap_or_else(|| Err(VlaError::Precondition(format!("{} has no translation operator", r.label()))))
    })
}

/// The skew-symmetry defect
/// `u_n v - Σ_{i≥0} (-1)^{n+i-1} (1/i!) D^i (v_{n+i} u)`.
pub fn skew_defect(r: &dyn VertexRealization, u: &SparseVec, v: &SparseVec, n: i64) -> Result<SparseVec> {
    let mut out = mode_product(r, u, n, v)?;
    let bound = annihilation_vec(r, v, u);
    let mut i = 0i64;
    while n + i < bound {
        let mut term = mode_product(r, v, n + i, u)?;
        for _ in 0..i {
            if term.is_zero() {
                break;
            }
            term = apply_translation(r, &term)?;
        }
        let scale = -sign(n + i - 1) / factorial(i as u64);
        out.add_scaled(&scale, &term);
        i += 1;
    }
    Ok(out)
}

/// `Σ_k x^k D^k(s)/k!` for `k ≤ max_power`, through the formal module.
pub fn exp_x_translation(
    r: &dyn VertexRealization,
    s: &SparseVec,
    max_power: i64,
) -> Result<crate::formal::TruncatedLaurent<SparseVec>> {
    crate::formal::exp_xd(s, |v: &SparseVec| apply_translation(r, v), max_power)
}

/// `Y(u, x) w` on the exponent window `[lo, hi]` of `x`, i.e. the modes
/// `u_n w` with `-n-1 ∈ [lo, hi]`.
pub fn vertex_operator(
    r: &dyn VertexRealization,
    u: &SparseVec,
    w: &SparseVec,
    lo: i64,
    hi: i64,
) -> Result<crate::formal::TruncatedLaurent<SparseVec>> {
    let mut series = crate::formal::TruncatedLaurent::zero(lo, hi)?;
    for e in lo..=hi {
        let coeff = mode_product(r, u, -e - 1, w)?;
        series.add_term(e, &Rational::from_integer(1.into()), &coeff)?;
    }
    Ok(series)
}
