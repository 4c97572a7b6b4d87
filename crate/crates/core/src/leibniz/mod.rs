//! Finite-dimensional left Leibniz algebras given by structure constants.
//!
//! A left Leibniz algebra satisfies `[a,[b,c]] = [[a,b],c] + [b,[a,c]]`. The
//! squares `[a,a]` span a two-sided ideal `J(g)` acting trivially from the
//! left, and `g / J(g)` is a Lie algebra.

pub mod document;

use serde_json::json;

use crate::error::{Result, VlaError};
use crate::exactlin::{Matrix, Rational, SparseVec, SubspaceBasis};
use crate::report::{vector_json, VerificationReport};

pub use document::AlgebraDocument;

/// A nonzero bracket `[e_l, e_r] = Σ c_k e_k` as `(l, r, [(k, c_k)])`.
pub type BracketTriple = (usize, usize, Vec<(usize, Rational)>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizAlgebra {
    name: String,
    basis: Vec<String>,
    /// `table[i * dim + j] = [e_i, e_j]`.
    table: Vec<SparseVec>,
    form: Option<Matrix>,
}

impl LeibnizAlgebra {
    pub fn new(name: String, basis: Vec<String>, table: Vec<SparseVec>, form: Option<Matrix>) -> Result<Self> {
        let dim = basis.len();
        if dim == 0 {
            return Err(VlaError::Document("algebra must have positive dimension".into()));
        }
        if table.len() != dim * dim {
            return Err(VlaError::Document(format!("bracket table must have {} entries", dim * dim)));
        }
        if table.iter().any(|v| v.max_key().is_some_and(|&k| k >= dim)) {
            return Err(VlaError::Document("bracket output index out of range".into()));
        }
        if let Some(m) = &form {
            if m.rows() != dim || m.cols() != dim {
                return Err(VlaError::Document(format!("form must be {dim}x{dim}")));
            }
        }
        Ok(Self {
            name,
            basis,
            table,
            form,
        })
    }

    /// Builds an algebra from the nonzero brackets `(l, r, [(k, c)])`.
    pub fn from_brackets(name: &str, basis: &[&str], brackets: &[BracketTriple]) -> Result<Self> {
        let dim = basis.len();
        let mut table = vec![SparseVec::new(); dim * dim];
        for (l, r, out) in brackets {
            if *l >= dim || *r >= dim {
                return Err(VlaError::Document("bracket index out of range".into()));
            }
            for (k, c) in out {
                table[l * dim + r].add_term(*k, c);
            }
        }
        Self::new(name.to_string(), basis.iter().map(|s| s.to_string()).collect(), table, None)
    }

    pub fn with_form(mut self, form: Matrix) -> Result<Self> {
        let dim = self.dim();
        if form.rows() != dim || form.cols() != dim {
            return Err(VlaError::Document(format!("form must be {dim}x{dim}")));
        }
        self.form = Some(form);
        Ok(self)
    }

    /// Copy with the single structure constant `c[l][r][k]` replaced.
    pub fn with_structure_constant(&self, l: usize, r: usize, k: usize, value: Rational) -> Self {
        let dim = self.dim();
        let mut out = self.clone();
        let slot = &mut out.table[l * dim + r];
        let delta = value - slot.coeff(&k);
        slot.add_term(k, &delta);
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn form(&self) -> Option<&Matrix> {
        self.form.as_ref()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim() + j]
    }

    pub fn bracket(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, ci) in a.iter() {
            for (&j, cj) in b.iter() {
                out.add_scaled(&(ci * cj), self.bracket_basis(i, j));
            }
        }
        out
    }

    /// `c1*x + c2*y` style rendering in this algebra's basis names.
    pub fn describe(&self, v: &SparseVec) -> String {
        crate::report::vector_text(v, |k| self.basis[k].clone())
    }

    pub fn vector_json(&self, v: &SparseVec) -> serde_json::Value {
        vector_json(v, |k| self.basis[k].clone())
    }

    pub fn is_lie(&self) -> bool {
        squares_ideal(self).is_zero()
    }
}

/// `[e_i,[e_j,e_k]] - [[e_i,e_j],e_k] - [e_j,[e_i,e_k]]` over all basis triples.
pub fn check_left_leibniz(g: &LeibnizAlgebra) -> VerificationReport {
    let mut report = VerificationReport::new("left_leibniz").param("algebra", g.name());
    let dim = g.dim();
    for i in 0..dim {
        let ei = SparseVec::unit(i);
        for j in 0..dim {
            let ej = SparseVec::unit(j);
            let eij = g.bracket_basis(i, j);
            for k in 0..dim {
                let ek = SparseVec::unit(k);
                let mut defect = g.bracket(&ei, g.bracket_basis(j, k));
                defect = &defect - &g.bracket(eij, &ek);
                defect = &defect - &g.bracket(&ej, g.bracket_basis(i, k));
                if !defect.is_zero() {
                    report.fail(
                        json!([g.basis[i], g.basis[j], g.basis[k]]),
                        g.vector_json(&defect),
                    );
                }
            }
        }
    }
    report
}

/// The span of the polarized squares `[e_i,e_j] + [e_j,e_i]`.
pub fn squares_ideal(g: &LeibnizAlgebra) -> SubspaceBasis {
    let dim = g.dim();
    let mut basis = SubspaceBasis::zero(dim);
    for i in 0..dim {
        for j in i..dim {
            let sq = g.bracket_basis(i, j) + g.bracket_basis(j, i);
            basis.insert(sq).expect("bracket outputs are in range");
        }
    }
    basis
}

/// `g_Lie = g / J(g)` on the non-pivot coset representatives of `rref(J(g))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieQuotientData {
    pub squares: SubspaceBasis,
    /// `reps[r]` is the index in `g` of the `r`-th quotient basis vector.
    pub reps: Vec<usize>,
    /// `brackets[a * reps.len() + b]` is `[r_a, r_b]` in quotient coordinates.
    pub brackets: Vec<SparseVec>,
    /// The projection `g -> g_Lie` (`reps.len()` rows, `dim g` columns).
    pub projection: Matrix,
}

impl LieQuotientData {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &SparseVec {
        &self.brackets[a * self.dim() + b]
    }

    pub fn project(&self, v: &SparseVec) -> SparseVec {
        self.projection.apply(v)
    }

    pub fn lift(&self, v: &SparseVec) -> SparseVec {
        v.map_keys(|&r| self.reps[r])
    }
}

pub fn lie_quotient(g: &LeibnizAlgebra) -> Result<LieQuotientData> {
    let dim = g.dim();
    let squares = squares_ideal(g);
    let pivots: Vec<usize> = squares.pivots().collect();
    let reps: Vec<usize> = (0..dim).filter(|i| !pivots.contains(i)).collect();
    let position = |k: usize| reps.iter().position(|&r| r == k).expect("reduced vectors avoid pivots");
    let columns: Vec<SparseVec> = (0..dim)
        .map(|i| squares.reduce(&SparseVec::unit(i)).map_keys(|&k| position(k)))
        .collect();
    let projection = Matrix::from_columns(reps.len(), &columns);
    let n = reps.len();
    let mut brackets = Vec::with_capacity(n * n);
    for &a in &reps {
        for &b in &reps {
            brackets.push(projection.apply(g.bracket_basis(a, b)));
        }
    }
    let q = LieQuotientData {
        squares,
        reps,
        brackets,
        projection,
    };
    verify_lie(&q)?;
    Ok(q)
}

fn verify_lie(q: &LieQuotientData) -> Result<()> {
    let n = q.dim();
    let bracket = |a: &SparseVec, b: &SparseVec| {
        let mut out = SparseVec::new();
        for (&i, ci) in a.iter() {
            for (&j, cj) in b.iter() {
                out.add_scaled(&(ci * cj), q.bracket_basis(i, j));
            }
        }
        out
    };
    for a in 0..n {
        for b in 0..n {
            if !(q.bracket_basis(a, b) + q.bracket_basis(b, a)).is_zero() {
                return Err(VlaError::Internal(format!("quotient bracket not antisymmetric at ({a}, {b})")));
            }
            for c in 0..n {
                let ea = SparseVec::unit(a);
                let eb = SparseVec::unit(b);
                let ec = SparseVec::unit(c);
                let jac = &(&bracket(&ea, &bracket(&eb, &ec)) + &bracket(&eb, &bracket(&ec, &ea)))
                    + &bracket(&ec, &bracket(&ea, &eb));
                if !jac.is_zero() {
                    return Err(VlaError::Internal(format!("quotient Jacobi fails at ({a}, {b}, {c})")));
                }
            }
        }
    }
    Ok(())
}

/// Matrices of `L_{e_i}: b -> [e_i, b]`, verified to factor through `g_Lie`
/// and to form a representation.
pub fn left_multiplication_rep(g: &LeibnizAlgebra) -> Result<Vec<Matrix>> {
    let dim = g.dim();
    let mats: Vec<Matrix> = (0..dim)
        .map(|i| {
            let cols: Vec<SparseVec> = (0..dim).map(|j| g.bracket_basis(i, j).clone()).collect();
            Matrix::from_columns(dim, &cols)
        })
        .collect();
    let combine = |v: &SparseVec| {
        let mut m = Matrix::zeros(dim, dim);
        for (&i, c) in v.iter() {
            m.add_scaled(c, &mats[i]);
        }
        m
    };
    for row in squares_ideal(g).rows() {
        if !combine(row).is_zero() {
            return Err(VlaError::Precondition(format!(
                "left multiplication by the square {} is nonzero; the algebra is not left Leibniz",
                g.describe(row)
            )));
        }
    }
    for a in 0..dim {
        for b in 0..dim {
            if mats[a].commutator(&mats[b]) != combine(g.bracket_basis(a, b)) {
                return Err(VlaError::Precondition(format!(
                    "[L_{}, L_{}] differs from L_[{}, {}]; the algebra is not left Leibniz",
                    g.basis[a], g.basis[b], g.basis[a], g.basis[b]
                )));
            }
        }
    }
    Ok(mats)
}

/// `a ⊗ t^power` in the loop algebra `g ⊗ C[t, t^-1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopElement {
    pub coeffs: SparseVec,
    pub power: i64,
}

impl LoopElement {
    pub fn new(coeffs: SparseVec, power: i64) -> Self {
        Self { coeffs, power }
    }
}

/// `[a ⊗ t^m, b ⊗ t^n] = [a, b] ⊗ t^{m+n}`.
pub fn loop_bracket(g: &LeibnizAlgebra, u: &LoopElement, v: &LoopElement) -> LoopElement {
    LoopElement::new(g.bracket(&u.coeffs, &v.coeffs), u.power + v.power)
}

/// The trace form `<a, b> = tr(L_a L_b)`.
pub fn trace_form(g: &LeibnizAlgebra) -> Matrix {
    let dim = g.dim();
    let mats: Vec<Matrix> = (0..dim)
        .map(|i| {
            let cols: Vec<SparseVec> = (0..dim).map(|j| g.bracket_basis(i, j).clone()).collect();
            Matrix::from_columns(dim, &cols)
        })
        .collect();
    let mut form = Matrix::zeros(dim, dim);
    for a in 0..dim {
        for b in 0..dim {
            form.set(a, b, mats[a].mul(&mats[b]).trace());
        }
    }
    form
}

/// Checks `<a,[b,c]> = <[a,b],c> = -<b,[a,c]>` on all basis triples.
pub fn check_invariant_form(g: &LeibnizAlgebra) -> Result<VerificationReport> {
    let form = g
        .form()
        .ok_or_else(|| VlaError::Precondition("the algebra carries no bilinear form".into()))?;
    let dim = g.dim();
    let pair = |a: &SparseVec, b: &SparseVec| {
        let mut acc = Rational::from_integer(0.into());
        for (&i, ci) in a.iter() {
            for (&j, cj) in b.iter() {
                acc += ci * cj * form.get(i, j);
            }
        }
        acc
    };
    let mut report = VerificationReport::new("invariant_form").param("algebra", g.name());
    for a in 0..dim {
        let ea = SparseVec::unit(a);
        for b in 0..dim {
            let eb = SparseVec::unit(b);
            for c in 0..dim {
                let ec = SparseVec::unit(c);
                let left = pair(&ea, g.bracket_basis(b, c));
                let middle = pair(g.bracket_basis(a, b), &ec);
                let right = -pair(&eb, g.bracket_basis(a, c));
                if left != middle || middle != right {
                    report.fail(
                        json!([g.basis[a], g.basis[b], g.basis[c]]),
                        json!({
                            "<a,[b,c]>": left.to_string(),
                            "<[a,b],c>": middle.to_string(),
                            "-<b,[a,c]>": right.to_string(),
                        }),
                    );
                }
            }
        }
    }
    let nondegenerate = form.rank() == dim;
    let is_lie = g.is_lie();
    report.set_summary("nondegenerate", nondegenerate);
    report.set_summary("is_lie", is_lie);
    if nondegenerate && !is_lie {
        report.note("a non-degenerate invariant form forces the squares ideal to vanish, so none exists on a non-Lie algebra");
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::int;

    fn n2() -> LeibnizAlgebra {
        LeibnizAlgebra::from_brackets("n2", &["x", "y"], &[(0, 0, vec![(1, int(1))])]).unwrap()
    }

    fn r2() -> LeibnizAlgebra {
        LeibnizAlgebra::from_brackets(
            "r2",
            &["a", "b"],
            &[(0, 1, vec![(1, int(1))]), (1, 0, vec![(1, int(-1))])],
        )
        .unwrap()
    }

    fn abelian(dim: usize) -> LeibnizAlgebra {
        let names: Vec<String> = (0..dim).map(|i| format!("e{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        LeibnizAlgebra::from_brackets("abelian", &refs, &[]).unwrap()
    }

    fn n2_plus_n2() -> LeibnizAlgebra {
        LeibnizAlgebra::from_brackets(
            "n2+n2",
            &["x", "y", "u", "v"],
            &[(0, 0, vec![(1, int(1))]), (2, 2, vec![(3, int(1))])],
        )
        .unwrap()
    }

    #[test]
    fn leibniz_axiom_examples() {
        assert!(check_left_leibniz(&abelian(3)).pass);
        assert!(check_left_leibniz(&n2()).pass);
        let bad = LeibnizAlgebra::from_brackets(
            "bad",
            &["x", "y"],
            &[(0, 1, vec![(0, int(1))]), (1, 1, vec![(1, int(1))])],
        )
        .unwrap();
        let report = check_left_leibniz(&bad);
        assert!(!report.pass);
        assert!(!report.findings.is_empty());
    }

    #[test]
    fn squares_ideal_examples() {
        assert_eq!(squares_ideal(&r2()).rank(), 0);
        let j = squares_ideal(&n2());
        assert_eq!(j.rank(), 1);
        assert!(j.contains(&SparseVec::unit(1)).unwrap());
        assert_eq!(squares_ideal(&n2_plus_n2()).rank(), 2);
    }

    #[test]
    fn lie_quotient_examples() {
        let q = lie_quotient(&r2()).unwrap();
        assert_eq!(q.projection, Matrix::identity(2));
        let q = lie_quotient(&n2()).unwrap();
        assert_eq!(q.reps, vec![0]);
        assert!(q.bracket_basis(0, 0).is_zero());
        assert!(q.project(&SparseVec::unit(1)).is_zero());
        let g = LeibnizAlgebra::from_brackets("n2+c", &["x", "y", "z"], &[(0, 0, vec![(1, int(1))])]).unwrap();
        let q = lie_quotient(&g).unwrap();
        assert_eq!(q.reps, vec![0, 2]);
        assert!(q.brackets.iter().all(SparseVec::is_zero));
    }

    #[test]
    fn left_multiplication_examples() {
        assert!(left_multiplication_rep(&abelian(2)).unwrap().iter().all(Matrix::is_zero));
        let l = left_multiplication_rep(&n2()).unwrap();
        assert_eq!(l[0].apply(&SparseVec::unit(0)), SparseVec::unit(1));
        assert!(l[0].apply(&SparseVec::unit(1)).is_zero());
        assert!(l[1].is_zero());
        let l = left_multiplication_rep(&r2()).unwrap();
        assert_eq!(l[0].apply(&SparseVec::unit(1)), SparseVec::unit(1));
        assert!(l[0].apply(&SparseVec::unit(0)).is_zero());
        let mut lb = Matrix::zeros(2, 2);
        lb.add_scaled(&int(1), &l[1]);
        assert_eq!(l[0].commutator(&l[1]), lb);
    }

    #[test]
    fn loop_bracket_examples() {
        let g = n2();
        let u = LoopElement::new(SparseVec::unit(0), 2);
        let v = LoopElement::new(SparseVec::unit(0), -1);
        assert_eq!(loop_bracket(&g, &u, &v), LoopElement::new(SparseVec::unit(1), 1));
        let zero = LoopElement::new(SparseVec::new(), 5);
        assert!(loop_bracket(&g, &u, &zero).coeffs.is_zero());
    }

    #[test]
    fn invariant_form_examples() {
        let g = n2().with_form(Matrix::zeros(2, 2)).unwrap();
        assert!(check_invariant_form(&g).unwrap().pass);
        let r = r2();
        let killing = trace_form(&r);
        assert_eq!(killing.get(0, 0), &int(1));
        let report = check_invariant_form(&r.clone().with_form(killing).unwrap()).unwrap();
        assert_eq!(report.summary["is_lie"], json!(true));
        assert!(check_invariant_form(&n2()).is_err());
    }

    #[test]
    fn no_nondegenerate_form_on_n2() {
        // Symmetric forms on a 2-dim space are spanned by three elementary
        // forms; every non-degenerate combination must fail.
        let coeffs = [-1, 0, 1, 2];
        for &p in &coeffs {
            for &q in &coeffs {
                for &r in &coeffs {
                    let m = Matrix::from_rows(vec![vec![int(p), int(q)], vec![int(q), int(r)]]);
                    if m.rank() < 2 {
                        continue;
                    }
                    let report = check_invariant_form(&n2().with_form(m).unwrap()).unwrap();
                    assert!(!report.pass, "form ({p},{q},{r}) passed");
                    assert!(!report.notes.is_empty());
                }
            }
        }
    }

    #[test]
    fn structure_constant_mutation() {
        let g = n2().with_structure_constant(0, 0, 0, int(1));
        assert_eq!(g.bracket_basis(0, 0), &SparseVec::from_pairs([(0, int(1)), (1, int(1))]));
        assert!(!check_left_leibniz(&g).pass);
    }
}
