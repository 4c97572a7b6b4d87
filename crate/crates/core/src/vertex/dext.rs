use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use dashmap::DashMap;

use super::VertexRealization;
use crate::error::{Result, VlaError};
use crate::exactlin::{factorial, sign, SparseVec};
use crate::formal::gen_binomial;

/// An element of `C[D] ⊗ V`, stored over the flattened indices of a
/// [`DExtension`].
pub type DState = SparseVec;

/// The formal translation extension `C[D] ⊗ V` with
///
/// ```text
/// (D^a u)_N (D^b w) = Σ_{j=0}^{b} C(b,j) (-1)^a (a+j)! C(N, a+j) D^{b-j} (u_{N-a-j} w)
/// ```
///
/// The state `D^k ⊗ s` has index `k * stride + s` and degree `k + deg s`.
pub struct DExtension {
    base: Arc<dyn VertexRealization>,
    max_degree: i64,
    min_degree: i64,
    stride: usize,
    states: Vec<usize>,
    layers: BTreeMap<i64, Vec<usize>>,
    local: HashMap<usize, usize>,
    cache: DashMap<(usize, i64, usize), Arc<SparseVec>>,
}

impl DExtension {
    pub fn new(base: Arc<dyn VertexRealization>, max_degree: i64) -> Result<Self> {
        let base_states = base.states(max_degree);
        if base_states.iter().enumerate().any(|(i, &s)| i != s) {
            return Err(VlaError::Precondition(
                "the D-extension needs a base whose states are numbered consecutively".into(),
            ));
        }
        let stride = base_states.len();
        let min_degree = base_states
            .iter()
            .map(|&s| base.degree(s))
            .min()
            .ok_or_else(|| VlaError::Precondition("empty base realization".into()))?;
        let mut layers: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for k in 0..=(max_degree - min_degree) {
            for &s in &base_states {
                let degree = base.degree(s) + k;
                if degree <= max_degree {
                    layers.entry(degree).or_default().push(k as usize * stride + s);
                }
            }
        }
        let states: Vec<usize> = layers.values().flatten().copied().collect();
        let local = layers
            .values()
            .flat_map(|layer| layer.iter().enumerate().map(|(i, &s)| (s, i)))
            .collect();
        Ok(Self {
            base,
            max_degree,
            min_degree,
            stride,
            states,
            layers,
            local,
            cache: DashMap::new(),
        })
    }

    pub fn base(&self) -> &Arc<dyn VertexRealization> {
        &self.base
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    /// Index of `D^k ⊗ s`.
    pub fn encode(&self, k: usize, s: usize) -> usize {
        k * self.stride + s
    }

    /// `(k, s)` for the index of `D^k ⊗ s`.
    pub fn decode(&self, idx: usize) -> (usize, usize) {
        (idx / self.stride, idx % self.stride)
    }

    /// Embeds a base vector as `1 ⊗ v`.
    pub fn lift(&self, v: &SparseVec) -> DState {
        v.clone()
    }

    /// States of total degree `d` (empty outside the window).
    pub fn layer(&self, d: i64) -> &[usize] {
        self.layers.get(&d).map_or(&[], Vec::as_slice)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.layers.keys().copied()
    }

    /// Position of a state inside its degree layer.
    pub fn local_index(&self, idx: usize) -> usize {
        self.local[&idx]
    }

    /// Splits a vector into per-degree local coordinates.
    pub fn to_local(&self, v: &SparseVec) -> Result<BTreeMap<i64, SparseVec>> {
        let mut out: BTreeMap<i64, SparseVec> = BTreeMap::new();
        for (&idx, c) in v.iter() {
            let d = self.degree(idx);
            if d > self.max_degree {
                return Err(VlaError::WindowExceeded {
                    required: d,
                    available: self.max_degree,
                });
            }
            out.entry(d).or_default().add_term(self.local_index(idx), c);
        }
        Ok(out)
    }

    pub fn from_local(&self, d: i64, v: &SparseVec) -> SparseVec {
        let layer = self.layer(d);
        v.map_keys(|&i| layer[i])
    }

    /// `D`: raises the power of `D` on every term.
    pub fn apply_d(&self, v: &DState) -> Result<DState> {
        if let Some(d) = v.keys().map(|&i| self.degree(i)).max() {
            if d + 1 > self.max_degree {
                return Err(VlaError::WindowExceeded {
                    required: d + 1,
                    available: self.max_degree,
                });
            }
        }
        Ok(v.map_keys(|&i| i + self.stride))
    }

    fn combine(&self, u: usize, n: i64, w: usize) -> Result<SparseVec> {
        let (a, u0) = self.decode(u);
        let (b, w0) = self.decode(w);
        let bound = self.base.annihilation(u0, w0);
        let mut out = SparseVec::new();
        for j in 0..=b {
            let p = (a + j) as i64;
            if n - p >= bound {
                continue;
            }
            let choose = gen_binomial(n, p as u64);
            if choose == crate::exactlin::int(0) {
                continue;
            }
            let coeff = gen_binomial(b as i64, j as u64) * sign(a as i64) * factorial(p as u64) * choose;
            let term = self.base.mode(u0, n - p, w0)?;
            let shift = (b - j) * self.stride;
            for (&k, c) in term.iter() {
                out.add_term(k + shift, &(&coeff * c));
            }
        }
        Ok(out)
    }
}

impl VertexRealization for DExtension {
    fn label(&self) -> String {
        format!("C[D]⊗{}", self.base.label())
    }

    fn states(&self, max_degree: i64) -> Vec<usize> {
        self.states
            .iter()
            .copied()
            .filter(|&s| self.degree(s) <= max_degree)
            .collect()
    }

    fn degree(&self, s: usize) -> i64 {
        let (k, base) = self.decode(s);
        k as i64 + self.base.degree(base)
    }

    fn describe(&self, s: usize) -> String {
        let (k, base) = self.decode(s);
        match k {
            0 => self.base.describe(base),
            1 => format!("D({})", self.base.describe(base)),
            _ => format!("D^{k}({})", self.base.describe(base)),
        }
    }

    fn mode(&self, u: usize, n: i64, w: usize) -> Result<Arc<SparseVec>> {
        let degree = self.degree(u) + self.degree(w) - n - 1;
        if degree < self.min_degree {
            return Ok(Arc::new(SparseVec::new()));
        }
        if degree > self.max_degree {
            return Err(VlaError::WindowExceeded {
                required: degree,
                available: self.max_degree,
            });
        }
        if let Some(hit) = self.cache.get(&(u, n, w)) {
            return Ok(hit.clone());
        }
        let value = Arc::new(self.combine(u, n, w)?);
        self.cache.insert((u, n, w), value.clone());
        Ok(value)
    }

    fn annihilation(&self, u: usize, w: usize) -> i64 {
        let (a, u0) = self.decode(u);
        let (b, w0) = self.decode(w);
        self.base.annihilation(u0, w0) + (a + b) as i64
    }

    fn translation(&self, s: usize) -> Option<Result<SparseVec>> {
        Some(self.apply_d(&SparseVec::unit(s)))
    }
}
