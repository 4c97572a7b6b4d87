use std::sync::Arc;

use super::VertexRealization;
use crate::error::Result;
use crate::exactlin::SparseVec;

/// A realization whose mode `u_n w` on one basis triple is replaced.
pub struct FaultInjected {
    inner: Arc<dyn VertexRealization>,
    u: usize,
    n: i64,
    w: usize,
    replacement: Arc<SparseVec>,
}

impl FaultInjected {
    pub fn new(inner: Arc<dyn VertexRealization>, u: usize, n: i64, w: usize, replacement: SparseVec) -> Self {
        Self {
            inner,
            u,
            n,
            w,
            replacement: Arc::new(replacement),
        }
    }
}

impl VertexRealization for FaultInjected {
    fn label(&self) -> String {
        format!("{} with {}_{{{}}}{} replaced", self.inner.label(), self.inner.describe(self.u), self.n, self.inner.describe(self.w))
    }

    fn states(&self, max_degree: i64) -> Vec<usize> {
        self.inner.states(max_degree)
    }

    fn degree(&self, s: usize) -> i64 {
        self.inner.degree(s)
    }

    fn describe(&self, s: usize) -> String {
        self.inner.describe(s)
    }

    fn mode(&self, u: usize, n: i64, w: usize) -> Result<Arc<SparseVec>> {
        if (u, n, w) == (self.u, self.n, self.w) {
            Ok(self.replacement.clone())
        } else {
            self.inner.mode(u, n, w)
        }
    }

    fn annihilation(&self, u: usize, w: usize) -> i64 {
        let bound = self.inner.annihilation(u, w);
        if (u, w) == (self.u, self.w) {
            bound.max(self.n + 1)
        } else {
            bound
        }
    }

    fn translation(&self, s: usize) -> Option<Result<SparseVec>> {
        self.inner.translation(s)
    }

    fn vacuum(&self) -> Option<SparseVec> {
        self.inner.vacuum()
    }

    fn exact_total_degree(&self) -> Option<i64> {
        self.inner.exact_total_degree()
    }
}

/// A realization whose translation operator is replaced by the identity.
pub struct BrokenTranslation {
    inner: Arc<dyn VertexRealization>,
}

impl BrokenTranslation {
    pub fn new(inner: Arc<dyn VertexRealization>) -> Self {
        Self { inner }
    }
}

impl VertexRealization for BrokenTranslation {
    fn label(&self) -> String {
        format!("{} with D = id", self.inner.label())
    }

    fn states(&self, max_degree: i64) -> Vec<usize> {
        self.inner.states(max_degree)
    }

    fn degree(&self, s: usize) -> i64 {
        self.inner.degree(s)
    }

    fn describe(&self, s: usize) -> String {
        self.inner.describe(s)
    }

    fn mode(&self, u: usize, n: i64, w: usize) -> Result<Arc<SparseVec>> {
        self.inner.mode(u, n, w)
    }

    fn annihilation(&self, u: usize, w: usize) -> i64 {
        self.inner.annihilation(u, w)
    }

    fn translation(&self, s: usize) -> Option<Result<SparseVec>> {
        Some(Ok(SparseVec::unit(s)))
    }

    fn vacuum(&self) -> Option<SparseVec> {
        self.inner.vacuum()
    }

    fn exact_total_degree(&self) -> Option<i64> {
        self.inner.exact_total_degree()
    }
}
