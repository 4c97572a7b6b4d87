use std::sync::Arc;

use super::{apply_translation, VertexRealization};
use crate::error::{Result, VlaError};
use crate::exactlin::{factorial, Rational, SparseVec};

/// `V̄ = V ⊕ C1` with `Ȳ(u, x)(v + λ1) = Y(u, x)v + λ e^{xD}u`,
/// `Ȳ(1, x) = id` and `D1 = 0`. The vacuum has index `dim V`.
pub struct VacuumAdjoined {
    base: Arc<dyn VertexRealization>,
    vacuum: usize,
    /// `powers[s][k] = D^k s / k!`, up to the first vanishing power.
    powers: Vec<Vec<SparseVec>>,
}

/// Fails unless the base has consecutively numbered states and a
/// translation operator that is nilpotent on every state.
pub fn adjoin_vacuum(base: Arc<dyn VertexRealization>) -> Result<VacuumAdjoined> {
    if base.vacuum().is_some() {
        return Err(VlaError::Precondition(format!("{} already has a vacuum", base.label())));
    }
    let states = base.states(i64::MAX);
    if states.iter().enumerate().any(|(i, &s)| i != s) {
        return Err(VlaError::Precondition("vacuum adjunction needs consecutively numbered states".into()));
    }
    let dim = states.len();
    let mut powers = Vec::with_capacity(dim);
    for &s in &states {
        let mut chain = vec![SparseVec::unit(s)];
        let mut current = SparseVec::unit(s);
        for k in 1..=dim as u64 + 1 {
            current = apply_translation(base.as_ref(), &current)?;
            if current.is_zero() {
                break;
            }
            if k == dim as u64 + 1 {
                return Err(VlaError::Precondition(format!(
                    "D is not nilpotent on {}, so e^{{xD}} does not terminate",
                    base.describe(s)
                )));
            }
            let inv = Rational::from_integer(1.into()) / factorial(k);
            chain.push(current.scaled(&inv));
        }
        powers.push(chain);
    }
    Ok(VacuumAdjoined { base, vacuum: dim, powers })
}

impl VacuumAdjoined {
    pub fn base(&self) -> &Arc<dyn VertexRealization> {
        &self.base
    }

    pub fn vacuum_index(&self) -> usize {
        self.vacuum
    }
}

impl VertexRealization for VacuumAdjoined {
    fn label(&self) -> String {
        format!("{} ⊕ C1", self.base.label())
    }

    fn states(&self, max_degree: i64) -> Vec<usize> {
        let mut out = self.base.states(max_degree);
        if max_degree >= 0 {
            out.push(self.vacuum);
        }
        out
    }

    fn degree(&self, s: usize) -> i64 {
        if s == self.vacuum {
            0
        } else {
            self.base.degree(s)
        }
    }

    fn describe(&self, s: usize) -> String {
        if s == self.vacuum {
            "1".into()
        } else {
            self.base.describe(s)
        }
    }

    fn mode(&self, u: usize, n: i64, w: usize) -> Result<Arc<SparseVec>> {
        if u == self.vacuum {
            return Ok(Arc::new(if n == -1 { SparseVec::unit(w) } else { SparseVec::new() }));
        }
        if w == self.vacuum {
            let k = -n - 1;
            let term = usize::try_from(k).ok().and_then(|k| self.powers[u].get(k));
            return Ok(Arc::new(term.cloned().unwrap_or_default()));
        }
        self.base.mode(u, n, w)
    }

    fn annihilation(&self, u: usize, w: usize) -> i64 {
        if u == self.vacuum || w == self.vacuum {
            0
        } else {
            self.base.annihilation(u, w)
        }
    }

    fn translation(&self, s: usize) -> Option<Result<SparseVec>> {
        if s == self.vacuum {
            Some(Ok(SparseVec::new()))
        } else {
            self.base.translation(s)
        }
    }

    fn vacuum(&self) -> Option<SparseVec> {
        Some(SparseVec::unit(self.vacuum))
    }

    fn exact_total_degree(&self) -> Option<i64> {
        self.base.exact_total_degree()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::int;
    use crate::vertex::{perm_vertex, vertex_operator, PermAlgebra};

    fn borcherds() -> VacuumAdjoined {
        let p = PermAlgebra::truncated_polynomial(3);
        adjoin_vacuum(Arc::new(perm_vertex(&p).unwrap())).unwrap()
    }

    #[test]
    fn creation_series_of_t() {
        let v = borcherds();
        let one = SparseVec::unit(v.vacuum_index());
        let t = SparseVec::unit(1);
        let y = vertex_operator(&v, &t, &one, -3, 3).unwrap();
        let terms: Vec<_> = y.terms().map(|(e, c)| (e, c.clone())).collect();
        assert_eq!(terms, vec![(0, t.clone()), (1, SparseVec::unit(0))]);
        let t3 = SparseVec::unit(3);
        let y = vertex_operator(&v, &t3, &one, 0, 3).unwrap();
        let terms: Vec<_> = y.terms().map(|(e, c)| (e, c.clone())).collect();
        assert_eq!(
            terms,
            vec![
                (0, t3),
                (1, SparseVec::unit(2).scaled(&int(3))),
                (2, SparseVec::unit(1).scaled(&int(3))),
                (3, SparseVec::unit(0)),
            ]
        );
    }

    #[test]
    fn vacuum_acts_as_identity() {
        let v = borcherds();
        for w in v.states(i64::MAX) {
            assert_eq!(*v.mode(v.vacuum_index(), -1, w).unwrap(), SparseVec::unit(w));
            assert!(v.mode(v.vacuum_index(), 0, w).unwrap().is_zero());
        }
    }

    #[test]
    fn rejects_non_nilpotent_translation() {
        let mut p = PermAlgebra::projection(1);
        p.product[0] = SparseVec::new();
        p.derivation.set(0, 0, int(1));
        let r = perm_vertex(&p).unwrap();
        assert!(matches!(adjoin_vacuum(Arc::new(r)), Err(VlaError::Precondition(_))));
    }
}
