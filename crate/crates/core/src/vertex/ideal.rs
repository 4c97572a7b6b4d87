use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use super::{apply_translation, mode_product, skew_defect, DExtension, VertexRealization};
use crate::error::{Result, VlaError};
use crate::exactlin::{intersect, kernel, SparseVec, SubspaceBasis};
use crate::leibniz::LeibnizAlgebra;
use crate::loopmod::{level_zero_target, InducedModule};
use crate::parallel;
use crate::report::VerificationReport;

/// The ideal `J̄ ⊂ C[D] ⊗ V` generated by all skew defects, saturated on a
/// finite window. Each degree is stored as a reduced row-echelon basis in the
/// local coordinates of that degree's layer; ranks are lower bounds.
#[derive(Clone)]
pub struct SkewIdeal {
    dext: Arc<DExtension>,
    mode_window: Option<(i64, i64)>,
    parts: BTreeMap<i64, SubspaceBasis>,
    generator_count: usize,
    closure_steps: usize,
}

/// Saturates the skew-defect ideal of `dext`.
///
/// Generators are `skew_defect(u, v, n)` over all basis pairs and every `n`
/// (optionally restricted to `mode_window`) whose output degree lies in the
/// window. The span is then closed under `D` and under the left modes of
/// `generators` until no rank grows.
pub fn saturate_ideal(
    dext: Arc<DExtension>,
    generators: &[SparseVec],
    mode_window: Option<(i64, i64)>,
) -> Result<SkewIdeal> {
    let max = dext.max_degree();
    let min = dext.min_degree();
    let states = dext.states(max);
    let pairs: Vec<(usize, usize)> = states
        .iter()
        .flat_map(|&u| states.iter().map(move |&v| (u, v)))
        .collect();
    let realization: &dyn VertexRealization = dext.as_ref();
    let defects: Vec<Vec<SparseVec>> = parallel::install(|| {
        pairs
            .par_iter()
            .map(|&(u, v)| {
                let total = realization.degree(u) + realization.degree(v) - 1;
                let (mut lo, mut hi) = (total - max, total - min);
                if let Some((wlo, whi)) = mode_window {
                    lo = lo.max(wlo);
                    hi = hi.min(whi);
                }
                let (eu, ev) = (SparseVec::unit(u), SparseVec::unit(v));
                (lo..=hi)
                    .map(|n| skew_defect(realization, &eu, &ev, n))
                    .filter(|d| !matches!(d, Ok(v) if v.is_zero()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut ideal = SkewIdeal {
        dext: dext.clone(),
        mode_window,
        parts: BTreeMap::new(),
        generator_count: 0,
        closure_steps: 0,
    };
    let mut worklist = Vec::new();
    for d in defects.into_iter().flatten() {
        ideal.generator_count += 1;
        worklist.extend(ideal.insert(&d)?);
    }
    while let Some(a) = worklist.pop() {
        ideal.closure_steps += 1;
        let degree = dext.degree(*a.keys().next().expect("worklist vectors are nonzero"));
        if degree < max {
            let da = apply_translation(realization, &a)?;
            worklist.extend(ideal.insert(&da)?);
        }
        for c in generators {
            let Some(&c0) = c.keys().next() else { continue };
            let total = dext.degree(c0) + degree - 1;
            for k in (total - max)..=(total - min) {
                let image = mode_product(realization, c, k, &a)?;
                worklist.extend(ideal.insert(&image)?);
            }
        }
    }
    Ok(ideal)
}

impl SkewIdeal {
    /// Adds `v`; returns the new independent directions it contributed.
    fn insert(&mut self, v: &SparseVec) -> Result<Vec<SparseVec>> {
        let mut grown = Vec::new();
        for (d, local) in self.dext.to_local(v)? {
            let dim = self.dext.layer(d).len();
            let part = self.parts.entry(d).or_insert_with(|| SubspaceBasis::zero(dim));
            let reduced = part.reduce(&local);
            if !reduced.is_zero() {
                part.insert(reduced.clone())?;
                grown.push(self.dext.from_local(d, &reduced));
            }
        }
        Ok(grown)
    }

    /// A copy with `v` forced into the ideal, without closing the span again.
    pub fn with_injected(&self, v: &SparseVec) -> Result<Self> {
        let mut out = self.clone();
        out.insert(v)?;
        Ok(out)
    }

    pub fn dext(&self) -> &Arc<DExtension> {
        &self.dext
    }

    pub fn max_degree(&self) -> i64 {
        self.dext.max_degree()
    }

    pub fn mode_window(&self) -> Option<(i64, i64)> {
        self.mode_window
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn closure_steps(&self) -> usize {
        self.closure_steps
    }

    /// Lower bounds on `dim J̄_d` for every degree of the window.
    pub fn ranks(&self) -> BTreeMap<i64, usize> {
        self.dext
            .degrees()
            .map(|d| (d, self.parts.get(&d).map_or(0, SubspaceBasis::rank)))
            .collect()
    }

    /// Basis vectors of `J̄`, degree by degree.
    pub fn basis_vectors(&self) -> Vec<SparseVec> {
        self.parts
            .iter()
            .flat_map(|(&d, part)| part.rows().map(move |r| (d, r)))
            .map(|(d, r)| self.dext.from_local(d, r))
            .collect()
    }

    /// Canonical representative of `v` modulo `J̄`.
    pub fn reduce(&self, v: &SparseVec) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for (d, local) in self.dext.to_local(v)? {
            let reduced = match self.parts.get(&d) {
                Some(part) => part.reduce(&local),
                None => local,
            };
            out.add_scaled(&crate::exactlin::int(1), &self.dext.from_local(d, &reduced));
        }
        Ok(out)
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool> {
        Ok(self.reduce(v)?.is_zero())
    }

    /// `J_V = J̄ ∩ (1 ⊗ V)` per degree, in the layer's local coordinates.
    pub fn jv_kernel(&self) -> Result<BTreeMap<i64, SubspaceBasis>> {
        let mut out = BTreeMap::new();
        for d in self.dext.degrees() {
            let layer = self.dext.layer(d);
            let undifferentiated = layer
                .iter()
                .enumerate()
                .filter(|(_, &s)| self.dext.decode(s).0 == 0)
                .map(|(i, _)| i);
            let coordinate = SubspaceBasis::coordinate(layer.len(), undifferentiated)?;
            let part = self.parts.get(&d).cloned().unwrap_or_else(|| SubspaceBasis::zero(layer.len()));
            out.insert(d, intersect(&part, &coordinate)?);
        }
        Ok(out)
    }

    /// Basis vectors of `J_V` as vectors of the base `V`, degree by degree.
    pub fn jv_vectors(&self) -> Result<BTreeMap<i64, Vec<SparseVec>>> {
        Ok(self
            .jv_kernel()?
            .into_iter()
            .map(|(d, b)| {
                let rows = b
                    .rows()
                    .map(|r| self.dext.from_local(d, r).map_keys(|&s| self.dext.decode(s).1))
                    .collect();
                (d, rows)
            })
            .collect())
    }
}

/// `Ṽ = (C[D] ⊗ V) / J̄` on canonical representatives.
pub struct QuotientRealization {
    ideal: Arc<SkewIdeal>,
}

impl QuotientRealization {
    pub fn new(ideal: Arc<SkewIdeal>) -> Self {
        Self { ideal }
    }

    pub fn ideal(&self) -> &SkewIdeal {
        &self.ideal
    }
}

impl VertexRealization for QuotientRealization {
    fn label(&self) -> String {
        format!("({})/J", self.ideal.dext.label())
    }

    fn states(&self, max_degree: i64) -> Vec<usize> {
        self.ideal.dext.states(max_degree)
    }

    fn degree(&self, s: usize) -> i64 {
        self.ideal.dext.degree(s)
    }

    fn describe(&self, s: usize) -> String {
        self.ideal.dext.describe(s)
    }

    fn mode(&self, u: usize, n: i64, w: usize) -> Result<Arc<SparseVec>> {
        let raw = self.ideal.dext.mode(u, n, w)?;
        Ok(Arc::new(self.ideal.reduce(&raw)?))
    }

    fn annihilation(&self, u: usize, w: usize) -> i64 {
        self.ideal.dext.annihilation(u, w)
    }

    fn translation(&self, s: usize) -> Option<Result<SparseVec>> {
        Some(
            self.ideal
                .dext
                .apply_d(&SparseVec::unit(s))
                .and_then(|v| self.ideal.reduce(&v)),
        )
    }
}

/// The module map `φ: V_g -> V_g(C·1)`, `c¹_{-m₁}···b ↦ c¹_{-m₁}···b_{-1}1`.
pub struct LevelZeroMap {
    source: Arc<InducedModule>,
    target: InducedModule,
    images: Vec<SparseVec>,
}

pub fn level_zero_map(g: &LeibnizAlgebra, max_degree: i64) -> Result<LevelZeroMap> {
    let source = Arc::new(InducedModule::adjoint(g, max_degree)?);
    LevelZeroMap::new(source)
}

impl LevelZeroMap {
    pub fn new(source: Arc<InducedModule>) -> Result<Self> {
        let max = source.max_degree();
        let target = level_zero_target(source.algebra(), max)?;
        let vacuum = SparseVec::unit(target.bottom_state(0));
        let mut images = Vec::with_capacity(source.basis().len());
        for s in 0..source.basis().len() {
            let mono = source.basis().monomial(s);
            let bottom = target.mode_action(&SparseVec::unit(mono.bottom), -1, &vacuum)?;
            images.push(target.apply_word(&mono.word, &bottom)?);
        }
        Ok(Self { source, target, images })
    }

    pub fn source(&self) -> &InducedModule {
        &self.source
    }

    pub fn target(&self) -> &InducedModule {
        &self.target
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&s, c) in v.iter() {
            out.add_scaled(c, &self.images[s]);
        }
        out
    }

    /// `ker φ` in degree `d`, in the local coordinates of the source layer.
    pub fn kernel_at(&self, d: i64) -> Result<SubspaceBasis> {
        let range = self.source.basis().range_at(d);
        let offset = self.target.basis().range_at(d).start;
        let dim = self.target.basis().dim_at(d);
        let images: Vec<SparseVec> = range.map(|s| self.images[s].map_keys(|&t| t - offset)).collect();
        if images.iter().any(|v| v.max_key().is_some_and(|&k| k >= dim)) {
            return Err(VlaError::Internal("level-zero image left its degree".into()));
        }
        Ok(kernel(&images, dim)?)
    }

    pub fn kernel_ranks(&self) -> Result<BTreeMap<i64, usize>> {
        (self.source.delta()..=self.source.max_degree())
            .map(|d| Ok((d, self.kernel_at(d)?.rank())))
            .collect()
    }

    /// `φ(c_n s) = c_n φ(s)` for generators `c`, states of degree at most
    /// `max_state_degree` and modes in `[mode_min, mode_max]`.
    pub fn check_module_map(&self, max_state_degree: i64, mode_min: i64, mode_max: i64) -> Result<VerificationReport> {
        let mut report = VerificationReport::new("level_zero_module_map")
            .param("algebra", self.source.algebra().name())
            .param("max_state_degree", max_state_degree)
            .param("modes", json!([mode_min, mode_max]));
        let g = self.source.algebra();
        for s in self.source.basis().through(max_state_degree) {
            let es = SparseVec::unit(s);
            for c in 0..g.dim() {
                let ec = SparseVec::unit(c);
                for n in mode_min..=mode_max {
                    if self.source.basis().degree(s) - n > self.source.max_degree() {
                        continue;
                    }
                    let lhs = self.apply(&self.source.mode_action(&ec, n, &es)?);
                    let rhs = self.target.mode_action(&ec, n, &self.images[s])?;
                    if lhs != rhs {
                        report.fail(
                            json!({"generator": g.basis()[c], "n": n, "state": self.source.describe(s)}),
                            self.target.vector_json(&(&lhs - &rhs)),
                        );
                    }
                }
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::int;
    use crate::vertex::VgRealization;

    fn setup(g: &LeibnizAlgebra, max: i64) -> (SkewIdeal, Vec<SparseVec>) {
        let base = VgRealization::adjoint(g, max).unwrap();
        let gens: Vec<SparseVec> = (0..g.dim()).map(|b| base.generator_state(b).unwrap()).collect();
        let dext = Arc::new(DExtension::new(Arc::new(base), max).unwrap());
        (saturate_ideal(dext, &gens, None).unwrap(), gens)
    }

    #[test]
    fn n2_ideal_contains_y() {
        let g = LeibnizAlgebra::from_brackets("n2", &["x", "y"], &[(0, 0, vec![(1, int(1))])]).unwrap();
        let (ideal, gens) = setup(&g, 3);
        let jv = ideal.jv_vectors().unwrap();
        assert_eq!(jv[&1].len(), 1);
        assert!(ideal.contains(&gens[1]).unwrap());
        assert!(ideal.reduce(&gens[1]).unwrap().is_zero());
        assert!(!ideal.contains(&gens[0]).unwrap());
        let phi = level_zero_map(&g, 3).unwrap();
        assert_eq!(phi.kernel_at(1).unwrap().rank(), 1);
        for v in jv.values().flatten() {
            assert!(phi.apply(v).is_zero());
        }
        assert!(phi.check_module_map(2, -1, 2).unwrap().pass);
    }

    #[test]
    fn abelian_one_has_no_level_zero_defects() {
        let g = LeibnizAlgebra::from_brackets("abelian1", &["a"], &[]).unwrap();
        let (ideal, _) = setup(&g, 4);
        assert!(ideal.jv_kernel().unwrap().values().all(|k| k.rank() == 0));
        assert!(ideal.ranks().values().any(|&r| r > 0));
    }
}
