//! Mode products of `V_g` computed directly from the residue formula
//!
//! ```text
//! Y(c_{-m} v', x₂) w = Res_{x₁} [ (x₁ - x₂)^{-m} Y(c, x₁) Y(v', x₂) w
//!                               - (-x₂ + x₁)^{-m} Y(v', x₂) Y(c, x₁) w ]
//! ```
//!
//! with every factor materialized as a truncated Laurent series in `x₁`.
//! This shares nothing with the iterate recursion except the loop modes of
//! the generators, and serves as its reference.

use num_traits::Zero;

use vla::exactlin::{sign, Rational, SparseVec};
use vla::formal::{binomial_expansion, TruncatedLaurent};
use vla::vertex::VgAction;
use vla::Result;

/// `u_n w` for a source basis state `u` and a target vector `w`.
pub fn residue_oracle(action: &VgAction, u: usize, n: i64, w: &SparseVec) -> Result<SparseVec> {
    let mut out = SparseVec::new();
    for (&t, c) in w.iter() {
        out.add_scaled(c, &oracle_state(action, u, n, t)?);
    }
    Ok(out)
}

fn single_term(exponent: i64, coeff: Rational) -> Result<TruncatedLaurent<Rational>> {
    Ok(TruncatedLaurent::from_terms(exponent, exponent, [(exponent, coeff)])?)
}

fn oracle_state(action: &VgAction, u: usize, n: i64, w: usize) -> Result<SparseVec> {
    let source = action.source();
    let target = action.target();
    let mono = source.basis().monomial(u);
    let Some(&(c, m)) = mono.word.first() else {
        if action.source_has_vacuum() {
            return Ok(if n == -1 { SparseVec::unit(w) } else { SparseVec::new() });
        }
        return target.mode_action(&SparseVec::unit(mono.bottom), n, &SparseVec::unit(w));
    };
    let tail = source.basis().tail(u).expect("nonempty word has a tail");
    let dt = target.delta();
    let dw = target.basis().degree(w);
    let d_tail = source.basis().degree(tail);
    let one = Rational::from_integer(1.into());

    // First kernel: (x₁ - x₂)^{-m} = Σ_i C(-m, i) (-1)^i x₁^{-m-i} x₂^i, paired
    // with the x₂^{-n-1-i} coefficient v'_{n+i} w of Y(v', x₂) w.
    let terms_a = (d_tail + dw - dt - n).max(0);
    let kernel_a = binomial_expansion(-m, terms_a as usize);
    let mut out = SparseVec::new();
    for i in 0..terms_a {
        let inner = residue_oracle(action, tail, n + i, &SparseVec::unit(w))?;
        if inner.is_zero() {
            continue;
        }
        let deg_inner = d_tail + dw - n - i - 1;
        let (p_lo, p_hi) = (-m - i, deg_inner - dt);
        let mut field = TruncatedLaurent::zero(-p_hi - 1, -p_lo - 1)?;
        for p in p_lo..=p_hi {
            field.add_term(-p - 1, &one, &target.rep_action_vec(c, p, &inner)?)?;
        }
        let k = &kernel_a[i as usize] * sign(i);
        if k.is_zero() {
            continue;
        }
        let product = field.mul_scalar_series(&single_term(-m - i, k)?);
        out.add_scaled(&one, &product.residue()?);
    }

    // Second kernel: (-x₂ + x₁)^{-m} = Σ_i C(-m, i) (-1)^{-m-i} x₂^{-m-i} x₁^i,
    // paired with the x₂^{-n+m+i-1} coefficient v'_{n-m-i} of Y(v', x₂).
    let terms_b = (dw - dt + 1).max(0);
    let kernel_b = binomial_expansion(-m, terms_b as usize);
    for i in 0..terms_b {
        let (p_lo, p_hi) = (i, dw - dt);
        let mut field = TruncatedLaurent::zero(-p_hi - 1, -p_lo - 1)?;
        for p in p_lo..=p_hi {
            let cpw = target.rep_action(c, p, w)?;
            if cpw.is_zero() {
                continue;
            }
            let value = residue_oracle(action, tail, n - m - i, &cpw)?;
            field.add_term(-p - 1, &one, &value)?;
        }
        let k = &kernel_b[i as usize] * sign(-m - i);
        if k.is_zero() {
            continue;
        }
        let product = field.mul_scalar_series(&single_term(i, k)?);
        out.add_scaled(&-one.clone(), &product.residue()?);
    }
    Ok(out)
}
