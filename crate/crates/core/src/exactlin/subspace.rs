use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{LinError, Rational, SparseVec};

/// A subspace of `Q^dim` stored as a reduced row-echelon basis.
///
/// Rows are keyed by their pivot (the smallest index with a nonzero entry),
/// each pivot entry is one, and every pivot column vanishes in all other rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    dim: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl SubspaceBasis {
    /// The zero subspace of `Q^dim`.
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            rows: BTreeMap::new(),
        }
    }

    /// The span of the given coordinate directions.
    pub fn coordinate(dim: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self, LinError> {
        let mut basis = Self::zero(dim);
        for i in indices {
            basis.insert(SparseVec::unit(i))?;
        }
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> + '_ {
        self.rows.values()
    }

    fn check_indices(&self, v: &SparseVec) -> Result<(), LinError> {
        match v.max_key() {
            Some(&index) if index >= self.dim => Err(LinError::IndexOutOfRange {
                index,
                dim: self.dim,
            }),
            _ => Ok(()),
        }
    }

    /// Eliminates every pivot coordinate of `v`; the result is the canonical
    /// representative of `v` modulo this subspace.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        // Subtracting a row never creates entries in other pivot columns, so
        // one pass over the pivots present in `v` suffices.
        let hits: Vec<usize> = v.keys().filter(|k| self.rows.contains_key(k)).copied().collect();
        for pivot in hits {
            let c = out.coeff(&pivot);
            if !c.is_zero() {
                out.add_scaled(&(-c), &self.rows[&pivot]);
            }
        }
        out
    }

    /// Adds `v` to the span, keeping the basis reduced. Returns whether the
    /// rank grew.
    pub fn insert(&mut self, v: SparseVec) -> Result<bool, LinError> {
        self.check_indices(&v)?;
        let reduced = self.reduce(&v);
        let (pivot, lead) = match reduced.leading() {
            None => return Ok(false),
            Some((&p, c)) => (p, c.clone()),
        };
        let row = reduced.scaled(&(Rational::one() / lead));
        for other in self.rows.values_mut() {
            let c = other.coeff(&pivot);
            if !c.is_zero() {
                other.add_scaled(&(-c), &row);
            }
        }
        self.rows.insert(pivot, row);
        Ok(true)
    }

    /// Coordinates of `v` with respect to the rows (in pivot order), or `None`
    /// when `v` lies outside the span.
    pub fn membership(&self, v: &SparseVec) -> Result<Option<Vec<Rational>>, LinError> {
        self.check_indices(v)?;
        if !self.reduce(v).is_zero() {
            return Ok(None);
        }
        Ok(Some(self.rows.keys().map(|p| v.coeff(p)).collect()))
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool, LinError> {
        Ok(self.membership(v)?.is_some())
    }

    /// Whether every row of `self` lies in `other`.
    pub fn is_subspace_of(&self, other: &SubspaceBasis) -> Result<bool, LinError> {
        if self.dim != other.dim {
            return Err(LinError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        for row in self.rows.values() {
            if !other.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Linear combination of the rows with the given coefficients.
    pub fn combine(&self, coords: &[Rational]) -> SparseVec {
        let mut out = SparseVec::new();
        for (row, c) in self.rows.values().zip(coords) {
            out.add_scaled(c, row);
        }
        out
    }
}

/// Reduced row-echelon basis of the span of `rows`.
pub fn rref<'a, I>(rows: I, ambient_dim: usize) -> Result<SubspaceBasis, LinError>
where
    I: IntoIterator<Item = &'a SparseVec>,
{
    let mut basis = SubspaceBasis::zero(ambient_dim);
    for row in rows {
        basis.insert(row.clone())?;
    }
    Ok(basis)
}

pub fn sum(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<SubspaceBasis, LinError> {
    if a.dim != b.dim {
        return Err(LinError::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    let mut out = a.clone();
    for row in b.rows() {
        out.insert(row.clone())?;
    }
    Ok(out)
}

/// Basis of the left kernel `{λ : Σ λ_i v_i = 0}` of a list of vectors in
/// `Q^ambient_dim`, as vectors in `Q^vectors.len()`.
///
/// Row-reduces `[v_i | e_i]`; rows whose ambient part vanished carry the
/// kernel in their tag part.
fn left_kernel(vectors: &[SparseVec], ambient_dim: usize) -> Result<SubspaceBasis, LinError> {
    let mut stacked = SubspaceBasis::zero(ambient_dim + vectors.len());
    for (i, v) in vectors.iter().enumerate() {
        if let Some(&index) = v.max_key() {
            if index >= ambient_dim {
                return Err(LinError::IndexOutOfRange {
                    index,
                    dim: ambient_dim,
                });
            }
        }
        let mut tagged = v.clone();
        tagged.add_term(ambient_dim + i, &Rational::one());
        stacked.insert(tagged)?;
    }
    let mut kernel = SubspaceBasis::zero(vectors.len());
    for (&pivot, row) in &stacked.rows {
        if pivot >= ambient_dim {
            kernel.insert(row.map_keys(|k| k - ambient_dim))?;
        }
    }
    Ok(kernel)
}

/// Kernel of the linear map sending the `i`-th domain basis vector to
/// `images[i]` in `Q^codomain_dim`.
pub fn kernel(images: &[SparseVec], codomain_dim: usize) -> Result<SubspaceBasis, LinError> {
    left_kernel(images, codomain_dim)
}

/// Intersection of two subspaces via the kernel of the stacked matrix
/// `[A; B]`: every kernel vector `(α, β)` yields `Σ α_i a_i ∈ A ∩ B`.
pub fn intersect(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<SubspaceBasis, LinError> {
    if a.dim != b.dim {
        return Err(LinError::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    let a_rows: Vec<&SparseVec> = a.rows().collect();
    let stacked: Vec<SparseVec> = a.rows().chain(b.rows()).cloned().collect();
    let ker = left_kernel(&stacked, a.dim)?;
    let mut out = SubspaceBasis::zero(a.dim);
    for k in ker.rows() {
        let mut v = SparseVec::new();
        for (&i, c) in k.iter() {
            if i < a_rows.len() {
                v.add_scaled(c, a_rows[i]);
            }
        }
        out.insert(v)?;
    }
    Ok(out)
}
