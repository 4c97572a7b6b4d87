//! The graded induced module `V_g(U) = U(L(g_Lie)) ⊗ U`.
//!
//! `U` is a `g_Lie`-module placed in degree `δ`, with `g ⊗ tC[t]` acting
//! trivially on it. A loop mode `c_n = c ⊗ tⁿ` lowers the degree by `n`. The
//! basis is the PBW basis of negative modes applied to basis vectors of `U`,
//! and modes act by straightening with `[c_n, a_{-m}] = [c, a]_{n-m}`.

mod basis;

use std::sync::Arc;

use dashmap::DashMap;
use serde_json::Value;

use crate::error::{Result, VlaError};
use crate::exactlin::{Matrix, SparseVec};
use crate::leibniz::{document::Scalar, left_multiplication_rep, lie_quotient, LeibnizAlgebra, LieQuotientData};

pub use basis::{GradedBasis, PbwMonomial};
use basis::letter_key;

/// A `g_Lie`-module `U`: one action matrix per basis vector of `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpec {
    pub label: String,
    pub dim: usize,
    pub actions: Vec<Matrix>,
    /// Degree of the bottom layer `U`.
    pub delta: i64,
    pub bottom_names: Vec<String>,
}

impl ModuleSpec {
    /// `U = g` with the left regular action, in degree one.
    pub fn adjoint(g: &LeibnizAlgebra) -> Result<Self> {
        Ok(Self {
            label: "adjoint".into(),
            dim: g.dim(),
            actions: left_multiplication_rep(g)?,
            delta: 1,
            bottom_names: g.basis().to_vec(),
        })
    }

    /// `U = C·1` with the zero action, in degree zero.
    pub fn trivial(g: &LeibnizAlgebra) -> Self {
        Self {
            label: "trivial".into(),
            dim: 1,
            actions: vec![Matrix::zeros(1, 1); g.dim()],
            delta: 0,
            bottom_names: vec!["1".into()],
        }
    }

    pub fn custom(dim: usize, actions: Vec<Matrix>, delta: i64) -> Self {
        Self {
            label: "custom".into(),
            dim,
            actions,
            delta,
            bottom_names: (0..dim).map(|i| format!("u{i}")).collect(),
        }
    }

    /// Interprets the `"module"` entry of an algebra document; absent means
    /// adjoint.
    pub fn from_document(g: &LeibnizAlgebra, module: Option<&Value>) -> Result<Self> {
        match module {
            None => Self::adjoint(g),
            Some(Value::String(s)) if s == "adjoint" => Self::adjoint(g),
            Some(Value::String(s)) if s == "trivial" => Ok(Self::trivial(g)),
            Some(Value::Object(map)) => {
                let bad = |what: &str| VlaError::Document(format!("module: {what}"));
                let dim = map
                    .get("dim")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| bad("\"dim\" must be a positive integer"))? as usize;
                let delta = match map.get("delta") {
                    None => 1,
                    Some(v) => match v.as_i64() {
                        Some(d @ (0 | 1)) => d,
                        _ => return Err(bad("\"delta\" must be 0 or 1")),
                    },
                };
                let actions: Vec<Vec<Vec<Scalar>>> = serde_json::from_value(
                    map.get("actions").cloned().ok_or_else(|| bad("\"actions\" missing"))?,
                )
                .map_err(|e| bad(&e.to_string()))?;
                if actions.len() != g.dim() {
                    return Err(bad(&format!("expected {} action matrices", g.dim())));
                }
                let mut mats = Vec::new();
                for (i, rows) in actions.iter().enumerate() {
                    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                        return Err(bad(&format!("action {i} must be {dim}x{dim}")));
                    }
                    let parsed = rows
                        .iter()
                        .map(|r| r.iter().map(Scalar::value).collect::<Result<Vec<_>>>())
                        .collect::<Result<Vec<_>>>()?;
                    mats.push(Matrix::from_rows(parsed));
                }
                Ok(Self::custom(dim, mats, delta))
            }
            Some(other) => Err(VlaError::Document(format!(
                "module must be \"adjoint\", \"trivial\" or a record, found {other}"
            ))),
        }
    }

    /// Checks that the matrices define a `g_Lie`-module.
    pub fn validate(&self, g: &LeibnizAlgebra) -> Result<()> {
        if self.delta != 0 && self.delta != 1 {
            return Err(VlaError::InvalidModule(format!("bottom degree {} is not 0 or 1", self.delta)));
        }
        if self.actions.len() != g.dim() {
            return Err(VlaError::InvalidModule(format!(
                "{} action matrices for a {}-dimensional algebra",
                self.actions.len(),
                g.dim()
            )));
        }
        if self.actions.iter().any(|m| m.rows() != self.dim || m.cols() != self.dim) {
            return Err(VlaError::InvalidModule(format!("action matrices must be {0}x{0}", self.dim)));
        }
        let combine = |v: &SparseVec| {
            let mut m = Matrix::zeros(self.dim, self.dim);
            for (&i, c) in v.iter() {
                m.add_scaled(c, &self.actions[i]);
            }
            m
        };
        for row in crate::leibniz::squares_ideal(g).rows() {
            if !combine(row).is_zero() {
                return Err(VlaError::InvalidModule(format!(
                    "the square {} acts nontrivially",
                    g.describe(row)
                )));
            }
        }
        for a in 0..g.dim() {
            for b in 0..g.dim() {
                if self.actions[a].commutator(&self.actions[b]) != combine(g.bracket_basis(a, b)) {
                    return Err(VlaError::InvalidModule(format!(
                        "commutator of the actions of {} and {} is not the action of their bracket",
                        g.basis()[a],
                        g.basis()[b]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `V_g(U)` truncated at `max_degree`, with memoized mode actions.
pub struct InducedModule {
    algebra: LeibnizAlgebra,
    lie: Arc<LieQuotientData>,
    spec: ModuleSpec,
    basis: GradedBasis,
    /// Action of the `r`-th quotient representative on `U`.
    rep_actions: Vec<Matrix>,
    cache: DashMap<(usize, i64, usize), Arc<SparseVec>>,
}

impl std::fmt::Debug for InducedModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InducedModule")
            .field("algebra", &self.algebra.name())
            .field("module", &self.spec.label)
            .field("max_degree", &self.basis.max_degree())
            .finish()
    }
}

impl InducedModule {
    pub fn new(g: &LeibnizAlgebra, spec: ModuleSpec, max_degree: i64) -> Result<Self> {
        let lie = lie_quotient(g)?;
        spec.validate(g)?;
        let basis = GradedBasis::build(lie.dim(), spec.dim, spec.delta, max_degree)?;
        let rep_actions = lie.reps.iter().map(|&r| spec.actions[r].clone()).collect();
        Ok(Self {
            algebra: g.clone(),
            lie: Arc::new(lie),
            spec,
            basis,
            rep_actions,
            cache: DashMap::new(),
        })
    }

    /// `V_g`: the adjoint module.
    pub fn adjoint(g: &LeibnizAlgebra, max_degree: i64) -> Result<Self> {
        Self::new(g, ModuleSpec::adjoint(g)?, max_degree)
    }

    pub fn algebra(&self) -> &LeibnizAlgebra {
        &self.algebra
    }

    pub fn lie(&self) -> &LieQuotientData {
        &self.lie
    }

    pub fn spec(&self) -> &ModuleSpec {
        &self.spec
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn delta(&self) -> i64 {
        self.spec.delta
    }

    pub fn max_degree(&self) -> i64 {
        self.basis.max_degree()
    }

    pub fn bottom_state(&self, b: usize) -> usize {
        self.basis
            .index_of(&PbwMonomial::bottom(b))
            .expect("bottom layer is always built")
    }

    /// `x_{-2}x_{-1}y` style name of a basis state.
    pub fn describe(&self, idx: usize) -> String {
        let m = self.basis.monomial(idx);
        let mut out = String::new();
        for &(r, part) in &m.word {
            out.push_str(&format!("{}_{{{}}}", self.algebra.basis()[self.lie.reps[r]], -part));
        }
        out.push_str(&self.spec.bottom_names[m.bottom]);
        out
    }

    pub fn describe_vec(&self, v: &SparseVec) -> String {
        crate::report::vector_text(v, |k| self.describe(k))
    }

    pub fn vector_json(&self, v: &SparseVec) -> Value {
        crate::report::vector_json(v, |k| self.describe(k))
    }

    /// The degree of `v` if it is nonzero and homogeneous.
    pub fn homogeneous_degree(&self, v: &SparseVec) -> Option<i64> {
        let mut degrees = v.keys().map(|&k| self.basis.degree(k));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// `n₀ = deg v - δ + 1`: every mode `c_n` with `n ≥ n₀` kills `v`.
    pub fn annihilation_bound(&self, v: &SparseVec) -> Result<i64> {
        match self.homogeneous_degree(v) {
            Some(d) => Ok(d - self.delta() + 1),
            None if v.is_zero() => Ok(1),
            None => Err(VlaError::Precondition("annihilation bound needs a homogeneous vector".into())),
        }
    }

    /// `c_n v` for `c ∈ g` given in the basis of `g`.
    pub fn mode_action(&self, c: &SparseVec, n: i64, v: &SparseVec) -> Result<SparseVec> {
        let projected = self.lie.project(c);
        let mut out = SparseVec::new();
        for (&r, coeff) in projected.iter() {
            out.add_scaled(coeff, &self.rep_action_vec(r, n, v)?);
        }
        Ok(out)
    }

    /// Mode of the `r`-th quotient representative on a vector.
    pub fn rep_action_vec(&self, r: usize, n: i64, v: &SparseVec) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for (&idx, coeff) in v.iter() {
            out.add_scaled(coeff, &*self.rep_action(r, n, idx)?);
        }
        Ok(out)
    }

    /// Mode of the `r`-th quotient representative on a basis state, memoized.
    pub fn rep_action(&self, r: usize, n: i64, idx: usize) -> Result<Arc<SparseVec>> {
        let degree = self.basis.degree(idx) - n;
        if degree < self.delta() {
            return Ok(Arc::new(SparseVec::new()));
        }
        if degree > self.max_degree() {
            return Err(VlaError::WindowExceeded {
                required: degree,
                available: self.max_degree(),
            });
        }
        let key = (r, n, idx);
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit.clone());
        }
        let value = Arc::new(self.straighten(r, n, idx)?);
        self.cache.insert(key, value.clone());
        Ok(value)
    }

    fn state(&self, word: Vec<(usize, i64)>, bottom: usize) -> Result<usize> {
        let m = PbwMonomial { word, bottom };
        self.basis
            .index_of(&m)
            .ok_or_else(|| VlaError::Internal(format!("non-canonical or unbuilt state {m:?}")))
    }

    fn straighten(&self, r: usize, n: i64, idx: usize) -> Result<SparseVec> {
        let m = self.basis.monomial(idx);
        let Some(&(a, m1)) = m.word.first() else {
            return match n {
                0 => {
                    let image = self.rep_actions[r].column(m.bottom);
                    image.try_linear_map(|&b| Ok(SparseVec::unit(self.state(Vec::new(), b)?)))
                }
                _ if n < 0 => Ok(SparseVec::unit(self.state(vec![(r, -n)], m.bottom)?)),
                _ => Ok(SparseVec::new()),
            };
        };
        if n < 0 && letter_key((r, -n)) <= letter_key((a, m1)) {
            let mut word = Vec::with_capacity(m.word.len() + 1);
            word.push((r, -n));
            word.extend_from_slice(&m.word);
            return Ok(SparseVec::unit(self.state(word, m.bottom)?));
        }
        // c_n a_{-m₁} X = a_{-m₁} c_n X + [c, a]_{n-m₁} X
        let tail = self.basis.tail(idx).expect("nonempty word has a tail");
        let inner = self.rep_action(r, n, tail)?;
        let mut out = self.rep_action_vec(a, -m1, &inner)?;
        for (&s, coeff) in self.lie.bracket_basis(r, a).iter() {
            out.add_scaled(coeff, &*self.rep_action(s, n - m1, tail)?);
        }
        Ok(out)
    }

    /// Applies the mode word of `mono` (rightmost letter first) to `v`.
    pub fn apply_word(&self, word: &[(usize, i64)], v: &SparseVec) -> Result<SparseVec> {
        let mut current = v.clone();
        for &(r, part) in word.iter().rev() {
            current = self.rep_action_vec(r, -part, &current)?;
        }
        Ok(current)
    }
}

/// The level-zero module `V_g(C·1)` generated by the vacuum.
pub fn level_zero_target(g: &LeibnizAlgebra, max_degree: i64) -> Result<InducedModule> {
    InducedModule::new(g, ModuleSpec::trivial(g), max_degree)
}
