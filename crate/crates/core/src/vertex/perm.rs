//! Perm algebras and their vertex Leibniz algebras `Y(a, x) b = (e^{xD} a) b`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::VertexRealization;
use crate::error::{Result, VlaError};
use crate::exactlin::{factorial, int, Matrix, Rational, SparseVec};
use crate::leibniz::document::Scalar;
use crate::report::{vector_json, VerificationReport};

/// An associative algebra with `a(bc) = b(ac)` and a linear map `D` with
/// `(D(ab) - D(a)b - aD(b))c = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermAlgebra {
    pub name: String,
    pub basis: Vec<String>,
    /// `product[i * dim + j] = e_i e_j`.
    pub product: Vec<SparseVec>,
    /// Column `j` is `D e_j`.
    pub derivation: Matrix,
    /// Optional grading of the basis, used to describe truncations.
    pub degrees: Option<Vec<i64>>,
    /// Tuples whose degrees sum to at most this agree with the untruncated
    /// algebra.
    pub truncation_degree: Option<i64>,
}

/// ```json
/// {"name": "...", "dim": 2, "basis": ["a", "b"],
///  "product": [[["1","0"], ["0","1"]], [["1","0"], ["0","1"]]],
///  "derivation": [["0","0"], ["0","0"]],
///  "degrees": [0, 1], "truncation_degree": 1}
/// ```
///
/// `product[i][j]` lists the coefficients of `e_i e_j`; `derivation[i][j]` is
/// the coefficient of `e_i` in `D e_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PermDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub basis: Vec<String>,
    pub product: Vec<Vec<Vec<Scalar>>>,
    pub derivation: Vec<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_degree: Option<i64>,
}

impl PermAlgebra {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: PermDocument = serde_json::from_str(text)
            .map_err(|e| VlaError::Document(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        Self::from_document(&doc)
    }

    pub fn from_document(doc: &PermDocument) -> Result<Self> {
        let dim = doc.dim;
        let bad = |what: String| VlaError::Document(what);
        if dim == 0 || doc.basis.len() != dim {
            return Err(bad(format!("\"basis\" must list {dim} > 0 names")));
        }
        if doc.product.len() != dim || doc.product.iter().any(|row| row.len() != dim) {
            return Err(bad(format!("\"product\" must be {dim}x{dim}")));
        }
        let mut product = Vec::with_capacity(dim * dim);
        for (i, row) in doc.product.iter().enumerate() {
            for (j, coeffs) in row.iter().enumerate() {
                if coeffs.len() != dim {
                    return Err(bad(format!("product[{i}][{j}] must have {dim} coefficients")));
                }
                let mut v = SparseVec::new();
                for (k, c) in coeffs.iter().enumerate() {
                    v.add_term(k, &c.value()?);
                }
                product.push(v);
            }
        }
        if doc.derivation.len() != dim || doc.derivation.iter().any(|r| r.len() != dim) {
            return Err(bad(format!("\"derivation\" must be {dim}x{dim}")));
        }
        let rows = doc
            .derivation
            .iter()
            .map(|r| r.iter().map(Scalar::value).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if let Some(d) = &doc.degrees {
            if d.len() != dim {
                return Err(bad(format!("\"degrees\" must have {dim} entries")));
            }
        }
        Ok(Self {
            name: doc.name.clone().unwrap_or_else(|| "perm".into()),
            basis: doc.basis.clone(),
            product,
            derivation: Matrix::from_rows(rows),
            degrees: doc.degrees.clone(),
            truncation_degree: doc.truncation_degree,
        })
    }

    pub fn to_document(&self) -> PermDocument {
        let dim = self.dim();
        PermDocument {
            name: Some(self.name.clone()),
            dim,
            basis: self.basis.clone(),
            product: (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| {
                            let v = self.product_basis(i, j);
                            (0..dim).map(|k| Scalar::from_rational(&v.coeff(&k))).collect()
                        })
                        .collect()
                })
                .collect(),
            derivation: (0..dim)
                .map(|i| (0..dim).map(|j| Scalar::from_rational(self.derivation.get(i, j))).collect())
                .collect(),
            degrees: self.degrees.clone(),
            truncation_degree: self.truncation_degree,
        }
    }

    /// `e_i e_j = e_j` with `D = 0`.
    pub fn projection(dim: usize) -> Self {
        let product = (0..dim * dim).map(|ij| SparseVec::unit(ij % dim)).collect();
        Self {
            name: format!("projection{dim}"),
            basis: (0..dim).map(|i| format!("e{i}")).collect(),
            product,
            derivation: Matrix::zeros(dim, dim),
            degrees: None,
            truncation_degree: None,
        }
    }

    /// `C[t]/(t^{top+1})` with `D = d/dt`, graded by the power of `t`.
    pub fn truncated_polynomial(top: usize) -> Self {
        let dim = top + 1;
        let mut product = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                product.push(if i + j <= top { SparseVec::unit(i + j) } else { SparseVec::new() });
            }
        }
        let mut derivation = Matrix::zeros(dim, dim);
        for j in 1..dim {
            derivation.set(j - 1, j, int(j as i64));
        }
        Self {
            name: format!("C[t]/(t^{dim})"),
            basis: (0..dim).map(|i| format!("t{i}")).collect(),
            product,
            derivation,
            degrees: Some((0..dim as i64).collect()),
            truncation_degree: Some(top as i64),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees.as_ref().map_or(0, |d| d[i])
    }

    pub fn product_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.product[i * self.dim() + j]
    }

    pub fn multiply(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, ci) in a.iter() {
            for (&j, cj) in b.iter() {
                out.add_scaled(&(ci * cj), self.product_basis(i, j));
            }
        }
        out
    }

    pub fn derive(&self, v: &SparseVec) -> SparseVec {
        self.derivation.apply(v)
    }

    pub fn with_product_entry(&self, i: usize, j: usize, k: usize, value: Rational) -> Self {
        let mut out = self.clone();
        let dim = self.dim();
        let slot = &mut out.product[i * dim + j];
        let delta = value - slot.coeff(&k);
        slot.add_term(k, &delta);
        out
    }

    fn vector_json(&self, v: &SparseVec) -> serde_json::Value {
        vector_json(v, |k| self.basis[k].clone())
    }
}

/// Associativity, the left permutation identity and derivation compatibility
/// on all basis triples. With `exact_only`, triples beyond the truncation
/// degree are skipped.
pub fn check_perm_axioms(p: &PermAlgebra, exact_only: bool) -> VerificationReport {
    let dim = p.dim();
    let mut report = VerificationReport::new("perm_axioms")
        .param("algebra", p.name.as_str())
        .param("exact_only", exact_only);
    let limit = if exact_only { p.truncation_degree } else { None };
    if let Some(t) = limit {
        report.set_param("max_total_degree", t);
    }
    let mut skipped = 0usize;
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                if limit.is_some_and(|t| p.degree(a) + p.degree(b) + p.degree(c) > t) {
                    skipped += 1;
                    continue;
                }
                let (ea, eb, ec) = (SparseVec::unit(a), SparseVec::unit(b), SparseVec::unit(c));
                let ab = p.product_basis(a, b);
                let a_bc = p.multiply(&ea, p.product_basis(b, c));
                let assoc = &p.multiply(ab, &ec) - &a_bc;
                let perm = &a_bc - &p.multiply(&eb, p.product_basis(a, c));
                let leibniz = &(&p.derive(ab) - &p.multiply(&p.derive(&ea), &eb)) - &p.multiply(&ea, &p.derive(&eb));
                let compat = p.multiply(&leibniz, &ec);
                let triple = json!([p.basis[a], p.basis[b], p.basis[c]]);
                for (name, defect) in [("associativity", assoc), ("permutation", perm), ("derivation", compat)] {
                    if !defect.is_zero() {
                        report.fail(
                            triple.clone(),
                            json!({"identity": name, "defect": p.vector_json(&defect)}),
                        );
                    }
                }
            }
        }
    }
    if skipped > 0 {
        report.set_summary("skipped_beyond_truncation", skipped);
    }
    report
}

/// `Y(a, x) b = (e^{xD} a) b`: `a_{-1-k} b = (D^k a / k!) b`, `a_n b = 0` for
/// `n ≥ 0`.
#[derive(Clone, Debug)]
pub struct PermRealization {
    algebra: Arc<PermAlgebra>,
}

pub fn perm_vertex(p: &PermAlgebra) -> Result<PermRealization> {
    let report = check_perm_axioms(p, true);
    if let Some(f) = report.findings.first() {
        return Err(VlaError::Precondition(format!(
            "{} is not a Perm algebra: {} fails at {}",
            p.name, f.detail, f.input
        )));
    }
    Ok(PermRealization {
        algebra: Arc::new(p.clone()),
    })
}

impl PermRealization {
    pub fn algebra(&self) -> &PermAlgebra {
        &self.algebra
    }
}

impl VertexRealization for PermRealization {
    fn label(&self) -> String {
        format!("Perm({})", self.algebra.name)
    }

    fn states(&self, max_degree: i64) -> Vec<usize> {
        (0..self.algebra.dim())
            .filter(|&s| self.algebra.degree(s) <= max_degree)
            .collect()
    }

    fn degree(&self, s: usize) -> i64 {
        self.algebra.degree(s)
    }

    fn describe(&self, s: usize) -> String {
        self.algebra.basis[s].clone()
    }

    fn mode(&self, u: usize, n: i64, w: usize) -> Result<Arc<SparseVec>> {
        if n >= 0 {
            return Ok(Arc::new(SparseVec::new()));
        }
        let k = -n - 1;
        let mut du = SparseVec::unit(u);
        for _ in 0..k {
            if du.is_zero() {
                break;
            }
            du = self.algebra.derive(&du);
        }
        let scaled = du.scaled(&(Rational::from_integer(1.into()) / factorial(k as u64)));
        Ok(Arc::new(self.algebra.multiply(&scaled, &SparseVec::unit(w))))
    }

    fn annihilation(&self, _u: usize, _w: usize) -> i64 {
        0
    }

    fn translation(&self, s: usize) -> Option<Result<SparseVec>> {
        Some(Ok(self.algebra.derivation.column(s)))
    }

    fn exact_total_degree(&self) -> Option<i64> {
        self.algebra.truncation_degree
    }
}

/// The product `u·v = u_{-1} v` read off a realization without negative
/// powers, with its Perm identities checked.
#[derive(Clone, Debug)]
pub struct ExtractedPerm {
    pub algebra: PermAlgebra,
    pub report: VerificationReport,
}

/// Reads `u·v` as the constant term of `Y(u, x) v`, after confirming that the
/// modes `u_n v` vanish for `0 ≤ n < window` on every basis pair.
pub fn extract_perm(r: &dyn VertexRealization, window: i64) -> Result<ExtractedPerm> {
    let states = r.states(i64::MAX);
    if states.iter().enumerate().any(|(i, &s)| i != s) {
        return Err(VlaError::Precondition("extraction needs consecutively numbered states".into()));
    }
    let dim = states.len();
    let mut product = Vec::with_capacity(dim * dim);
    for &u in &states {
        for &w in &states {
            for n in 0..window {
                let m = r.mode(u, n, w)?;
                if !m.is_zero() {
                    return Err(VlaError::Precondition(format!(
                        "Y({}, x){} has the negative power x^{}",
                        r.describe(u),
                        r.describe(w),
                        -n - 1
                    )));
                }
            }
            product.push((*r.mode(u, -1, w)?).clone());
        }
    }
    let mut derivation = Matrix::zeros(dim, dim);
    for &s in &states {
        if let Some(d) = r.translation(s) {
            for (&k, c) in d?.iter() {
                derivation.set(k, s, c.clone());
            }
        }
    }
    let degrees: Vec<i64> = states.iter().map(|&s| r.degree(s)).collect();
    let algebra = PermAlgebra {
        name: r.label(),
        basis: states.iter().map(|&s| r.describe(s)).collect(),
        product,
        derivation,
        degrees: Some(degrees),
        truncation_degree: r.exact_total_degree(),
    };
    let report = check_perm_axioms(&algebra, true);
    Ok(ExtractedPerm { algebra, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vertex::{mode_product, vertex_operator};

    #[test]
    fn projection_algebra() {
        let p = PermAlgebra::projection(3);
        assert!(check_perm_axioms(&p, false).pass);
        let r = perm_vertex(&p).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let y = vertex_operator(&r, &SparseVec::unit(i), &SparseVec::unit(j), -3, 3).unwrap();
                let terms: Vec<_> = y.terms().map(|(e, v)| (e, v.clone())).collect();
                assert_eq!(terms, vec![(0, SparseVec::unit(j))]);
            }
        }
        let back = extract_perm(&r, 4).unwrap();
        assert_eq!(back.algebra.product, p.product);
        assert!(back.report.pass);
    }

    #[test]
    fn truncated_polynomial_modes() {
        let p = PermAlgebra::truncated_polynomial(3);
        let r = perm_vertex(&p).unwrap();
        let t = SparseVec::unit(1);
        // Y(t, x) t = t² + x t
        assert_eq!(mode_product(&r, &t, -1, &t).unwrap(), SparseVec::unit(2));
        assert_eq!(mode_product(&r, &t, -2, &t).unwrap(), SparseVec::unit(1));
        assert!(mode_product(&r, &t, -3, &t).unwrap().is_zero());
        let back = extract_perm(&r, 3).unwrap();
        assert_eq!(back.algebra.product, p.product);
        assert!(back.report.pass);
    }

    #[test]
    fn truncation_breaks_the_derivation_rule() {
        let p = PermAlgebra::truncated_polynomial(3);
        let report = check_perm_axioms(&p, false);
        assert!(!report.pass);
        assert!(report
            .findings
            .iter()
            .any(|f| f.input == json!(["t1", "t3", "t0"]) && f.detail["identity"] == "derivation"));
    }

    #[test]
    fn corrupted_table_names_a_witness() {
        let p = PermAlgebra::projection(2).with_product_entry(0, 1, 0, int(1));
        let report = check_perm_axioms(&p, false);
        assert!(!report.pass);
        assert!(perm_vertex(&p).is_err());
    }

    #[test]
    fn documents_round_trip() {
        let p = PermAlgebra::truncated_polynomial(3);
        let text = serde_json::to_string(&p.to_document()).unwrap();
        assert_eq!(PermAlgebra::parse(&text).unwrap(), p);
        assert!(PermAlgebra::parse("{\"dim\": 1}").is_err());
    }
}
