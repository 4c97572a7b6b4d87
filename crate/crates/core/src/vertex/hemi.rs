use std::sync::Arc;

use super::VertexRealization;
use crate::error::{Result, VlaError};
use crate::exactlin::SparseVec;

/// `V ⊕ W` for `W` an adjoint copy of `V`, with
/// `Y(u + w, x)(v' + w') = Y(u, x)v' + Y(u, x)w'`. The copy of state `s`
/// has index `dim V + s`.
pub struct Hemisemidirect {
    base: Arc<dyn VertexRealization>,
    offset: usize,
}

pub fn hemisemidirect(base: Arc<dyn VertexRealization>) -> Result<Hemisemidirect> {
    if base.vacuum().is_none() {
        return Err(VlaError::Precondition(format!("{} has no vacuum", base.label())));
    }
    let states = base.states(i64::MAX);
    if states.iter().enumerate().any(|(i, &s)| i != s) {
        return Err(VlaError::Precondition("the hemisemidirect product needs consecutively numbered states".into()));
    }
    Ok(Hemisemidirect {
        offset: states.len(),
        base,
    })
}

impl Hemisemidirect {
    pub fn base(&self) -> &Arc<dyn VertexRealization> {
        &self.base
    }

    /// Index of the copy `(0, s)`.
    pub fn copy_of(&self, s: usize) -> usize {
        self.offset + s
    }

    pub fn is_copy(&self, s: usize) -> bool {
        s >= self.offset
    }

    fn split(&self, s: usize) -> (bool, usize) {
        if s >= self.offset {
            (true, s - self.offset)
        } else {
            (false, s)
        }
    }
}

impl VertexRealization for Hemisemidirect {
    fn label(&self) -> String {
        format!("{} ⋉ W", self.base.label())
    }

    fn states(&self, max_degree: i64) -> Vec<usize> {
        let base = self.base.states(max_degree);
        let copies: Vec<usize> = base.iter().map(|&s| self.copy_of(s)).collect();
        base.into_iter().chain(copies).collect()
    }

    fn degree(&self, s: usize) -> i64 {
        self.base.degree(self.split(s).1)
    }

    fn describe(&self, s: usize) -> String {
        match self.split(s) {
            (false, b) => format!("({}, 0)", self.base.describe(b)),
            (true, b) => format!("(0, {})", self.base.describe(b)),
        }
    }

    fn mode(&self, u: usize, n: i64, w: usize) -> Result<Arc<SparseVec>> {
        let (u_copy, u0) = self.split(u);
        if u_copy {
            return Ok(Arc::new(SparseVec::new()));
        }
        let (w_copy, w0) = self.split(w);
        let value = self.base.mode(u0, n, w0)?;
        if w_copy {
            Ok(Arc::new(value.map_keys(|&k| k + self.offset)))
        } else {
            Ok(value)
        }
    }

    fn annihilation(&self, u: usize, w: usize) -> i64 {
        self.base.annihilation(self.split(u).1, self.split(w).1)
    }

    fn translation(&self, s: usize) -> Option<Result<SparseVec>> {
        let (copy, b) = self.split(s);
        let d = self.base.translation(b)?;
        Some(d.map(|v| if copy { v.map_keys(|&k| k + self.offset) } else { v }))
    }

    fn vacuum(&self) -> Option<SparseVec> {
        self.base.vacuum()
    }

    fn exact_total_degree(&self) -> Option<i64> {
        self.base.exact_total_degree()
    }
}
