use std::sync::Arc;

use dashmap::DashMap;

use super::{VertexModule, VertexRealization};
use crate::error::{Result, VlaError};
use crate::exactlin::{int, sign, SparseVec};
use crate::formal::gen_binomial;
use crate::leibniz::LeibnizAlgebra;
use crate::loopmod::{level_zero_target, InducedModule};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Bottom {
    /// Bottom states are the generators `b ∈ g`, acting by their loop modes.
    Generators,
    /// The bottom state is a vacuum, `1_n = δ_{n,-1}`.
    Vacuum,
}

/// The modes `u_n w` of `u ∈ V_g` (or of the level-zero algebra) on a target
/// induced module, generated from the loop modes of `g` by the iterate
/// recursion
///
/// ```text
/// (c_{-m} v')_n w = Σ_{i≥0} C(m+i-1, i) [ c_{-m-i}(v'_{n+i} w) - (-1)^m v'_{n-m-i}(c_i w) ]
/// ```
pub struct VgAction {
    source: Arc<InducedModule>,
    target: Arc<InducedModule>,
    bottom: Bottom,
    cache: DashMap<(usize, i64, usize), Arc<SparseVec>>,
}

impl VgAction {
    pub fn new(source: Arc<InducedModule>, target: Arc<InducedModule>) -> Result<Self> {
        if source.algebra() != target.algebra() {
            return Err(VlaError::Precondition("source and target are built over different algebras".into()));
        }
        let bottom = match source.spec().label.as_str() {
            "adjoint" => Bottom::Generators,
            "trivial" => Bottom::Vacuum,
            other => {
                return Err(VlaError::Precondition(format!(
                    "a {other} module carries no vertex algebra structure; use the adjoint or trivial module as source"
                )))
            }
        };
        Ok(Self {
            source,
            target,
            bottom,
            cache: DashMap::new(),
        })
    }

    pub fn source(&self) -> &InducedModule {
        &self.source
    }

    pub fn target(&self) -> &InducedModule {
        &self.target
    }

    pub fn source_has_vacuum(&self) -> bool {
        self.bottom == Bottom::Vacuum
    }

    /// `u_n w = 0` for `n` at least this.
    pub fn bound(&self, u: usize, w: usize) -> i64 {
        self.source.basis().degree(u) + self.target.basis().degree(w) - self.target.delta()
    }

    pub fn mode(&self, u: usize, n: i64, w: usize) -> Result<Arc<SparseVec>> {
        let degree = self.source.basis().degree(u) + self.target.basis().degree(w) - n - 1;
        if degree < self.target.delta() {
            return Ok(Arc::new(SparseVec::new()));
        }
        if degree > self.target.max_degree() {
            return Err(VlaError::WindowExceeded {
                required: degree,
                available: self.target.max_degree(),
            });
        }
        if let Some(hit) = self.cache.get(&(u, n, w)) {
            return Ok(hit.clone());
        }
        let value = Arc::new(self.iterate(u, n, w)?);
        self.cache.insert((u, n, w), value.clone());
        Ok(value)
    }

    /// `u_n v` for a target vector `v`.
    pub fn mode_on(&self, u: usize, n: i64, v: &SparseVec) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for (&w, c) in v.iter() {
            out.add_scaled(c, &*self.mode(u, n, w)?);
        }
        Ok(out)
    }

    fn iterate(&self, u: usize, n: i64, w: usize) -> Result<SparseVec> {
        let basis = self.source.basis();
        let mono = basis.monomial(u);
        let Some(&(c, m)) = mono.word.first() else {
            return match self.bottom {
                Bottom::Generators => {
                    self.target
                        .mode_action(&SparseVec::unit(mono.bottom), n, &SparseVec::unit(w))
                }
                Bottom::Vacuum if n == -1 => Ok(SparseVec::unit(w)),
                Bottom::Vacuum => Ok(SparseVec::new()),
            };
        };
        let tail = basis.tail(u).expect("nonempty word has a tail");
        let dw = self.target.basis().degree(w);
        let dt = self.target.delta();
        let tail_bound = basis.degree(tail) + dw - dt;
        let mut out = SparseVec::new();
        let mut i = 0i64;
        while n + i < tail_bound {
            let inner = self.mode(tail, n + i, w)?;
            if !inner.is_zero() {
                let coeff = gen_binomial(m + i - 1, i as u64);
                out.add_scaled(&coeff, &self.target.rep_action_vec(c, -m - i, &inner)?);
            }
            i += 1;
        }
        let twist = -sign(m);
        for i in 0..=(dw - dt) {
            let ciw = self.target.rep_action(c, i, w)?;
            if ciw.is_zero() {
                continue;
            }
            let coeff = gen_binomial(m + i - 1, i as u64) * &twist;
            out.add_scaled(&coeff, &self.mode_on(tail, n - m - i, &ciw)?);
        }
        Ok(out)
    }
}

/// `V_g` (or the level-zero algebra `V_g(C·1)`) acting on itself.
pub struct VgRealization {
    action: VgAction,
}

impl VgRealization {
    /// `V_g = V_g(g)` with the adjoint bottom in degree one.
    pub fn adjoint(g: &LeibnizAlgebra, max_degree: i64) -> Result<Self> {
        let m = Arc::new(InducedModule::adjoint(g, max_degree)?);
        Ok(Self {
            action: VgAction::new(m.clone(), m)?,
        })
    }

    /// The level-zero vertex algebra `V_g(C·1)` with its vacuum in degree zero.
    pub fn level_zero(g: &LeibnizAlgebra, max_degree: i64) -> Result<Self> {
        let m = Arc::new(level_zero_target(g, max_degree)?);
        Ok(Self {
            action: VgAction::new(m.clone(), m)?,
        })
    }

    pub fn module(&self) -> &InducedModule {
        self.action.target()
    }

    pub fn action(&self) -> &VgAction {
        &self.action
    }

    /// The basis state of the generator `e_b` (adjoint case) or of `e_b(-1)1`
    /// (level-zero case).
    pub fn generator_state(&self, b: usize) -> Result<SparseVec> {
        let m = self.module();
        let bottom = SparseVec::unit(m.bottom_state(0));
        if self.action.source_has_vacuum() {
            m.mode_action(&SparseVec::unit(b), -1, &bottom)
        } else {
            Ok(SparseVec::unit(m.bottom_state(b)))
        }
    }

    /// `D(c_{-m} v') = m c_{-m-1} v' + c_{-m} D v'`, `D 1 = 0`.
    fn level_zero_translation(&self, s: usize) -> Result<SparseVec> {
        let m = self.module();
        let degree = m.basis().degree(s) + 1;
        if degree > m.max_degree() {
            return Err(VlaError::WindowExceeded {
                required: degree,
                available: m.max_degree(),
            });
        }
        let mono = m.basis().monomial(s);
        let Some(&(c, part)) = mono.word.first() else {
            return Ok(SparseVec::new());
        };
        let tail = m.basis().tail(s).expect("nonempty word has a tail");
        let mut out = m.rep_action(c, -part - 1, tail)?.scaled(&int(part));
        let d_tail = self.level_zero_translation(tail)?;
        out.add_scaled(&int(1), &m.rep_action_vec(c, -part, &d_tail)?);
        Ok(out)
    }
}

impl VertexRealization for VgRealization {
    fn label(&self) -> String {
        let m = self.module();
        if self.action.source_has_vacuum() {
            format!("V_{}(C1)", m.algebra().name())
        } else {
            format!("V_{}", m.algebra().name())
        }
    }

    fn states(&self, max_degree: i64) -> Vec<usize> {
        self.module().basis().through(max_degree).collect()
    }

    fn degree(&self, s: usize) -> i64 {
        self.module().basis().degree(s)
    }

    fn describe(&self, s: usize) -> String {
        self.module().describe(s)
    }

    fn mode(&self, u: usize, n: i64, w: usize) -> Result<Arc<SparseVec>> {
        self.action.mode(u, n, w)
    }

    fn annihilation(&self, u: usize, w: usize) -> i64 {
        self.action.bound(u, w)
    }

    fn translation(&self, s: usize) -> Option<Result<SparseVec>> {
        self.action
            .source_has_vacuum()
            .then(|| self.level_zero_translation(s))
    }

    fn vacuum(&self) -> Option<SparseVec> {
        self.action
            .source_has_vacuum()
            .then(|| SparseVec::unit(self.module().bottom_state(0)))
    }
}

/// `V_g` acting on an induced module `V_g(U)`.
pub struct VgModule {
    action: VgAction,
}

impl VgModule {
    pub fn new(source: Arc<InducedModule>, target: Arc<InducedModule>) -> Result<Self> {
        Ok(Self {
            action: VgAction::new(source, target)?,
        })
    }

    pub fn action(&self) -> &VgAction {
        &self.action
    }
}

impl VertexModule for VgModule {
    fn module_label(&self) -> String {
        format!("V_{}({})", self.action.target().algebra().name(), self.action.target().spec().label)
    }

    fn module_states(&self, max_degree: i64) -> Vec<usize> {
        self.action.target().basis().through(max_degree).collect()
    }

    fn module_degree(&self, w: usize) -> i64 {
        self.action.target().basis().degree(w)
    }

    fn describe_module_state(&self, w: usize) -> String {
        self.action.target().describe(w)
    }

    fn act(&self, u: usize, n: i64, w: usize) -> Result<Arc<SparseVec>> {
        self.action.mode(u, n, w)
    }

    fn act_annihilation(&self, u: usize, w: usize) -> i64 {
        self.action.bound(u, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vertex::{describe_vec, mode_product, skew_defect};

    fn n2() -> LeibnizAlgebra {
        LeibnizAlgebra::from_brackets("n2", &["x", "y"], &[(0, 0, vec![(1, int(1))])]).unwrap()
    }

    #[test]
    fn n2_mode_products() {
        let v = VgRealization::adjoint(&n2(), 6).unwrap();
        let m = v.module();
        let x = SparseVec::unit(m.bottom_state(0));
        let y = SparseVec::unit(m.bottom_state(1));
        let xm1x = m.mode_action(&SparseVec::unit(0), -1, &x).unwrap();
        assert!(mode_product(&v, &xm1x, 0, &y).unwrap().is_zero());
        let got = mode_product(&v, &xm1x, -1, &y).unwrap();
        assert_eq!(describe_vec(&v, &got), "x_{-1}x_{-1}y");
        assert_eq!(mode_product(&v, &x, 0, &x).unwrap(), y);
    }

    #[test]
    fn generators_act_by_loop_modes() {
        let v = VgRealization::adjoint(&n2(), 5).unwrap();
        let m = v.module();
        let x = m.bottom_state(0);
        for w in m.basis().through(3) {
            for n in -2..=3 {
                let expected = m.mode_action(&SparseVec::unit(0), n, &SparseVec::unit(w)).unwrap();
                assert_eq!(*v.mode(x, n, w).unwrap(), expected);
            }
        }
    }

    #[test]
    fn level_zero_vacuum_is_identity() {
        let v = VgRealization::level_zero(&n2(), 5).unwrap();
        let vac = v.vacuum().unwrap();
        for w in v.states(4) {
            let w = SparseVec::unit(w);
            assert_eq!(mode_product(&v, &vac, -1, &w).unwrap(), w);
            assert!(mode_product(&v, &vac, 0, &w).unwrap().is_zero());
        }
        let x = v.generator_state(0).unwrap();
        assert_eq!(mode_product(&v, &x, -1, &vac).unwrap(), x);
    }

    #[test]
    fn skew_defect_needs_translation() {
        let v = VgRealization::adjoint(&n2(), 4).unwrap();
        let x = SparseVec::unit(v.module().bottom_state(0));
        // x_0 x = y and x_0 x reversed gives (-1)^{-1} y, so a D-free
        // realization still reports the defect at n = 0 ...
        assert!(skew_defect(&v, &x, &x, 0).is_ok());
        // ... but needs D as soon as higher modes of the reversed pair survive.
        assert!(skew_defect(&v, &x, &x, -1).is_err());
    }
}
