//! Truncated formal Laurent calculus.
//!
//! A [`TruncatedLaurent`] is a Laurent polynomial known exactly on an exponent
//! window `[lo, hi]`. Every identity in the engine is checked in component
//! form; this module supplies the series-level operations (residues,
//! derivatives, binomial expansions, `e^{xD}`) that serve as the independent
//! reference for those component formulas.
//!
//! Expansion convention: `(x + y)^m` is always expanded in non-negative powers
//! of the second variable, `Σ_i C(m, i) x^{m-i} y^i`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactlin::{factorial, Coefficient, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormalError {
    #[error("invalid exponent window [{lo}, {hi}]")]
    InvalidWindow { lo: i64, hi: i64 },
    #[error("exponent {exponent} lies outside the window [{lo}, {hi}]")]
    OutsideWindow { exponent: i64, lo: i64, hi: i64 },
    #[error("comparison window [{lo}, {hi}] is not covered by both operands")]
    UncoveredComparison { lo: i64, hi: i64 },
    #[error("negative exponential order {0}")]
    NegativePower(i64),
}

/// Generalized binomial coefficient `m(m-1)···(m-i+1)/i!`, i.e. the
/// coefficient of `y^i` in the expansion of `(x + y)^m`.
pub fn gen_binomial(m: i64, i: u64) -> Rational {
    let mut numer = BigInt::one();
    for k in 0..i as i64 {
        numer *= BigInt::from(m - k);
        if numer.is_zero() {
            return Rational::zero();
        }
    }
    Rational::from_integer(numer) / factorial(i)
}

/// Coefficients `C(m, 0), …, C(m, terms-1)` of `(x + y)^m` in powers of `y`.
pub fn binomial_expansion(m: i64, terms: usize) -> Vec<Rational> {
    (0..terms as u64).map(|i| gen_binomial(m, i)).collect()
}

/// A formal Laurent polynomial `Σ c_e x^e` known exactly for `e ∈ [lo, hi]`.
/// Absent exponents inside the window are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedLaurent<V: Coefficient> {
    lo: i64,
    hi: i64,
    coeffs: BTreeMap<i64, V>,
}

/// Outcome of comparing two series on a window.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesComparison<V: Coefficient> {
    pub equal: bool,
    /// Smallest exponent where the operands differ, with `a - b` there.
    pub first_difference: Option<(i64, V)>,
}

impl<V: Coefficient> TruncatedLaurent<V> {
    pub fn zero(lo: i64, hi: i64) -> Result<Self, FormalError> {
        if lo > hi {
            return Err(FormalError::InvalidWindow { lo, hi });
        }
        Ok(Self {
            lo,
            hi,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn from_terms<I>(lo: i64, hi: i64, terms: I) -> Result<Self, FormalError>
    where
        I: IntoIterator<Item = (i64, V)>,
    {
        let mut s = Self::zero(lo, hi)?;
        for (e, c) in terms {
            s.add_term(e, &Rational::one(), &c)?;
        }
        Ok(s)
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn covers(&self, lo: i64, hi: i64) -> bool {
        self.lo <= lo && hi <= self.hi
    }

    /// Coefficient of `x^exponent` (zero if absent).
    pub fn coeff(&self, exponent: i64) -> Result<V, FormalError> {
        if exponent < self.lo || exponent > self.hi {
            return Err(FormalError::OutsideWindow {
                exponent,
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(self.coeffs.get(&exponent).cloned().unwrap_or_else(V::vanishing))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &V)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    /// `self += scale · value · x^exponent`.
    pub fn add_term(&mut self, exponent: i64, scale: &Rational, value: &V) -> Result<(), FormalError> {
        if exponent < self.lo || exponent > self.hi {
            return Err(FormalError::OutsideWindow {
                exponent,
                lo: self.lo,
                hi: self.hi,
            });
        }
        let slot = self.coeffs.entry(exponent).or_insert_with(V::vanishing);
        slot.add_scaled(scale, value);
        if slot.vanishes() {
            self.coeffs.remove(&exponent);
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Res_x`, the coefficient of `x^{-1}`.
    pub fn residue(&self) -> Result<V, FormalError> {
        self.coeff(-1)
    }

    /// Term-wise `d/dx`; the window shifts down by one.
    pub fn deriv(&self) -> Self {
        let mut out = Self {
            lo: self.lo - 1,
            hi: self.hi - 1,
            coeffs: BTreeMap::new(),
        };
        for (&e, c) in &self.coeffs {
            if e != 0 {
                out.add_term(e - 1, &Rational::from_integer(e.into()), c)
                    .expect("shifted exponent stays in shifted window");
            }
        }
        out
    }

    /// Product with a scalar series. The result window is the sum of the
    /// windows; it is exact because both factors vanish outside theirs.
    pub fn mul_scalar_series(&self, scalar: &TruncatedLaurent<Rational>) -> Self {
        let mut out = Self {
            lo: self.lo + scalar.lo,
            hi: self.hi + scalar.hi,
            coeffs: BTreeMap::new(),
        };
        for (&e1, s) in &scalar.coeffs {
            for (&e2, c) in &self.coeffs {
                out.add_term(e1 + e2, s, c).expect("product exponent within summed window");
            }
        }
        out
    }

    /// Exact comparison on `[lo, hi]`.
    pub fn compare(&self, other: &Self, lo: i64, hi: i64) -> Result<SeriesComparison<V>, FormalError> {
        series_equal(self, other, lo, hi)
    }
}

/// Compares `a` and `b` coefficient-wise on `[lo, hi]`, reporting the smallest
/// differing exponent and the defect `a - b` there.
pub fn series_equal<V: Coefficient>(
    a: &TruncatedLaurent<V>,
    b: &TruncatedLaurent<V>,
    lo: i64,
    hi: i64,
) -> Result<SeriesComparison<V>, FormalError> {
    if lo > hi {
        return Err(FormalError::InvalidWindow { lo, hi });
    }
    if !a.covers(lo, hi) || !b.covers(lo, hi) {
        return Err(FormalError::UncoveredComparison { lo, hi });
    }
    let exponents: std::collections::BTreeSet<i64> = a
        .coeffs
        .keys()
        .chain(b.coeffs.keys())
        .copied()
        .filter(|e| (lo..=hi).contains(e))
        .collect();
    for e in exponents {
        let mut defect = a.coeff(e)?;
        defect.add_scaled(&-Rational::one(), &b.coeff(e)?);
        if !defect.vanishes() {
            return Ok(SeriesComparison {
                equal: false,
                first_difference: Some((e, defect)),
            });
        }
    }
    Ok(SeriesComparison {
        equal: true,
        first_difference: None,
    })
}

/// `Σ_{k=0}^{max_power} x^k D^k(s)/k!` as a polynomial on the window
/// `[0, max_power]`.
pub fn exp_xd<V, E, F>(s: &V, mut apply_d: F, max_power: i64) -> Result<TruncatedLaurent<V>, E>
where
    V: Coefficient,
    E: From<FormalError>,
    F: FnMut(&V) -> Result<V, E>,
{
    if max_power < 0 {
        return Err(FormalError::NegativePower(max_power).into());
    }
    let mut out = TruncatedLaurent::zero(0, max_power)?;
    let mut current = s.clone();
    for k in 0..=max_power {
        if current.vanishes() {
            break;
        }
        out.add_term(k, &(Rational::one() / factorial(k as u64)), &current)?;
        if k < max_power {
            current = apply_d(&current)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{int, rat, SparseVec};

    fn scalar(lo: i64, hi: i64, terms: &[(i64, i64)]) -> TruncatedLaurent<Rational> {
        TruncatedLaurent::from_terms(lo, hi, terms.iter().map(|&(e, c)| (e, int(c)))).unwrap()
    }

    #[test]
    fn residue_picks_minus_one() {
        assert_eq!(scalar(-3, 3, &[(-1, 1)]).residue().unwrap(), int(1));
        assert_eq!(scalar(0, 4, &[(0, 5), (3, 2)]).residue().unwrap_err(), FormalError::OutsideWindow { exponent: -1, lo: 0, hi: 4 });
        assert_eq!(scalar(-2, 4, &[(0, 5), (3, 2)]).residue().unwrap(), int(0));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(gen_binomial(-1, 3), int(-1));
        assert_eq!(gen_binomial(-2, 3), int(-4));
        assert_eq!(gen_binomial(5, 0), int(1));
        assert_eq!(gen_binomial(4, 2), int(6));
        assert_eq!(gen_binomial(2, 3), int(0));
        assert_eq!(gen_binomial(-3, 2), int(6));
        assert_eq!(binomial_expansion(-1, 4), vec![int(1), int(-1), int(1), int(-1)]);
    }

    #[test]
    fn pascal_recurrence_on_grid() {
        for m in -5i64..=5 {
            for i in 1u64..=8 {
                assert_eq!(
                    gen_binomial(m, i),
                    gen_binomial(m - 1, i) + gen_binomial(m - 1, i - 1),
                    "m={m} i={i}"
                );
            }
            assert_eq!(gen_binomial(m, 0), int(1));
        }
    }

    #[test]
    fn binomial_vanishes_exactly_below_order() {
        for m in -6i64..=6 {
            for i in 0u64..=8 {
                let zero = gen_binomial(m, i).is_zero();
                assert_eq!(zero, 0 <= m && (m as u64) < i, "m={m} i={i}");
            }
        }
    }

    #[test]
    fn derivative_rules() {
        let c = scalar(0, 0, &[(0, 7)]);
        assert!(c.deriv().is_zero());
        let sq = scalar(0, 3, &[(2, 1)]);
        assert_eq!(sq.deriv(), scalar(-1, 2, &[(1, 2)]));
        let p = scalar(-4, 4, &[(-3, 1), (-1, 2), (2, 5), (4, -1)]);
        let second = p.deriv().deriv();
        for (e, c) in p.terms() {
            let expected = Rational::from_integer((e * (e - 1)).into()) * c;
            assert_eq!(second.coeff(e - 2).unwrap(), expected);
        }
    }

    #[test]
    fn window_semantics_in_comparison() {
        let a = scalar(-2, 5, &[(0, 1), (5, 3)]);
        let b = scalar(-2, 5, &[(0, 1), (5, 4)]);
        assert!(series_equal(&a, &b, -2, 4).unwrap().equal);
        let cmp = series_equal(&a, &b, -2, 5).unwrap();
        assert!(!cmp.equal);
        assert_eq!(cmp.first_difference, Some((5, int(-1))));
        assert!(series_equal(&a, &b, -3, 0).is_err());
    }

    #[test]
    fn exp_xd_orders() {
        // D = 0: constant series.
        let s = SparseVec::unit(2usize);
        let e = exp_xd::<_, FormalError, _>(&s, |_| Ok(SparseVec::new()), 4).unwrap();
        assert_eq!(e.terms().count(), 1);
        assert_eq!(e.coeff(0).unwrap(), s);
        let e0 = exp_xd::<_, FormalError, _>(&s, |v| Ok(v.clone()), 0).unwrap();
        assert_eq!(e0.coeff(0).unwrap(), s);
        assert!(exp_xd::<_, FormalError, _>(&s, |v| Ok(v.clone()), -1).is_err());
        // D = identity: coefficients 1/k!.
        let e = exp_xd::<_, FormalError, _>(&s, |v| Ok(v.clone()), 3).unwrap();
        assert_eq!(e.coeff(3).unwrap(), s.scaled(&rat(1, 6)));
    }

    #[test]
    fn exp_xd_on_truncated_polynomials() {
        // basis 1, t, t^2, t^3 ; D = d/dt
        let d = |v: &SparseVec| -> Result<SparseVec, FormalError> {
            Ok(v.iter()
                .filter(|(&k, _)| k > 0)
                .map(|(&k, c)| (k - 1, c * int(k as i64)))
                .collect())
        };
        let e = exp_xd(&SparseVec::unit(1usize), d, 3).unwrap();
        assert_eq!(e.coeff(0).unwrap(), SparseVec::unit(1));
        assert_eq!(e.coeff(1).unwrap(), SparseVec::unit(0));
        assert!(e.coeff(2).unwrap().is_zero());
        assert!(e.coeff(3).unwrap().is_zero());
    }

    #[test]
    fn scalar_series_product() {
        let a = scalar(-1, 1, &[(-1, 1), (1, 1)]);
        let b = scalar(0, 1, &[(0, 1), (1, -1)]);
        let p = TruncatedLaurent::<Rational>::mul_scalar_series(&a, &b);
        assert_eq!(p, scalar(-1, 2, &[(-1, 1), (0, -1), (1, 1), (2, -1)]));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::exactlin::int;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn derivative_has_no_residue(terms in proptest::collection::vec((-6i64..6, -9i64..9), 0..8)) {
            let p = TruncatedLaurent::from_terms(-6, 6, terms.into_iter().map(|(e, c)| (e, int(c)))).unwrap();
            let d = p.deriv();
            prop_assert!(d.residue().unwrap().is_zero());
        }
    }
}
