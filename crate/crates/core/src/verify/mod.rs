//! Coefficient-exact checks of the vertex algebra identities on finite
//! windows of states and modes.
//!
//! Every check takes an explicit [`Window`], records it in its report and
//! names each failing tuple. Sweeps over many tuples run on the worker pool
//! and merge their findings in tuple order, so reports are reproducible.

mod axioms;
mod jacobi;
mod locality;
mod skew;

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Result, VlaError};
use crate::exactlin::SparseVec;
use crate::report::VerificationReport;
use crate::vertex::{state_json, VertexModule, VertexRealization};

pub use axioms::{check_ideal_annihilation, check_vacuum_axioms, embedding_obstruction, embedding_scan};
pub use jacobi::{check_jacobi_component, jacobi_required_degree, jacobi_sweep};
pub use locality::{check_weak_associativity, locality_order, locality_sweep, weak_associativity_sweep};
pub use skew::{check_d_properties, check_skew_symmetry, skew_sweep};

/// Degree cutoff for the swept states and the closed interval of modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub max_degree: i64,
    pub mode_min: i64,
    pub mode_max: i64,
}

impl Default for Window {
    fn default() -> Self {
        Self {
            max_degree: 3,
            mode_min: -2,
            mode_max: 3,
        }
    }
}

impl Window {
    pub fn new(max_degree: i64, mode_min: i64, mode_max: i64) -> Result<Self> {
        if mode_min > mode_max {
            return Err(VlaError::Precondition(format!(
                "empty mode window [{mode_min}, {mode_max}]"
            )));
        }
        Ok(Self {
            max_degree,
            mode_min,
            mode_max,
        })
    }

    pub fn modes(&self) -> RangeInclusive<i64> {
        self.mode_min..=self.mode_max
    }

    fn stamp(&self, report: &mut VerificationReport) {
        report.set_param("max_degree", self.max_degree);
        report.set_param("mode_min", self.mode_min);
        report.set_param("mode_max", self.mode_max);
    }
}

/// Runs `f` on every item in parallel and returns the results in item order.
fn par_map<T, R, F>(items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    crate::parallel::install(|| items.par_iter().map(&f).collect())
}

fn within_exact(r: &dyn VertexRealization, total_degree: i64) -> bool {
    r.exact_total_degree().is_none_or(|t| total_degree <= t)
}

fn name(r: &dyn VertexRealization, s: usize) -> Value {
    json!(r.describe(s))
}

fn module_name(m: &dyn VertexModule, s: usize) -> Value {
    json!(m.describe_module_state(s))
}

fn vec_json(r: &dyn VertexRealization, v: &SparseVec) -> Value {
    state_json(r, v)
}

fn module_vec_json(m: &dyn VertexModule, v: &SparseVec) -> Value {
    crate::report::vector_json(v, |k| m.describe_module_state(k))
}

fn require_translation(r: &dyn VertexRealization) -> Result<()> {
    match r.states(i64::MAX).first() {
        Some(&s) if r.translation(s).is_none() => Err(VlaError::Precondition(format!(
            "{} has no translation operator D",
            r.label()
        ))),
        _ => Ok(()),
    }
}
