use std::collections::HashMap;
use std::ops::Range;

use crate::error::{Result, VlaError};

/// `c¹_{-m₁} ··· cʳ_{-m_r} u_b` with parts non-increasing and ties ordered by
/// ascending representative index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbwMonomial {
    /// `(representative, part)` pairs; every part is at least one.
    pub word: Vec<(usize, i64)>,
    pub bottom: usize,
}

/// Sort key of a mode letter: larger parts come first.
pub(crate) fn letter_key(letter: (usize, i64)) -> (i64, usize) {
    (-letter.1, letter.0)
}

impl PbwMonomial {
    pub fn new(word: Vec<(usize, i64)>, bottom: usize) -> Result<Self> {
        if word.iter().any(|&(_, m)| m < 1) {
            return Err(VlaError::Internal(format!("mode word {word:?} has a non-negative mode")));
        }
        if word.windows(2).any(|w| letter_key(w[0]) > letter_key(w[1])) {
            return Err(VlaError::Internal(format!("mode word {word:?} is not canonical")));
        }
        Ok(Self { word, bottom })
    }

    pub fn bottom(bottom: usize) -> Self {
        Self {
            word: Vec::new(),
            bottom,
        }
    }

    pub fn weight(&self) -> i64 {
        self.word.iter().map(|&(_, m)| m).sum()
    }
}

/// All canonical monomials of degree `δ ..= max_degree`, enumerated degree by
/// degree.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    delta: i64,
    max_degree: i64,
    lie_dim: usize,
    bottom_dim: usize,
    states: Vec<PbwMonomial>,
    degrees: Vec<i64>,
    /// `offsets[d - δ] .. offsets[d - δ + 1]` are the states of degree `d`.
    offsets: Vec<usize>,
    /// Index of the monomial with the first letter removed.
    tails: Vec<Option<usize>>,
    index: HashMap<PbwMonomial, usize>,
}

/// Canonical words of total weight `weight` over `lie_dim` letters.
fn words(lie_dim: usize, weight: i64) -> Vec<Vec<(usize, i64)>> {
    fn extend(
        lie_dim: usize,
        remaining: i64,
        floor: (i64, usize),
        prefix: &mut Vec<(usize, i64)>,
        out: &mut Vec<Vec<(usize, i64)>>,
    ) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=remaining).rev() {
            for rep in 0..lie_dim {
                let letter = (rep, part);
                if letter_key(letter) < floor {
                    continue;
                }
                prefix.push(letter);
                extend(lie_dim, remaining - part, letter_key(letter), prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(lie_dim, weight, (i64::MIN, 0), &mut Vec::new(), &mut out);
    out
}

impl GradedBasis {
    pub fn build(lie_dim: usize, bottom_dim: usize, delta: i64, max_degree: i64) -> Result<Self> {
        if max_degree < delta {
            return Err(VlaError::Precondition(format!(
                "max_degree {max_degree} is below the bottom degree {delta}"
            )));
        }
        let mut states = Vec::new();
        let mut degrees = Vec::new();
        let mut offsets = vec![0];
        for degree in delta..=max_degree {
            for word in words(lie_dim, degree - delta) {
                for bottom in 0..bottom_dim {
                    states.push(PbwMonomial {
                        word: word.clone(),
                        bottom,
                    });
                    degrees.push(degree);
                }
            }
            offsets.push(states.len());
        }
        let index: HashMap<PbwMonomial, usize> = states.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let tails = states
            .iter()
            .map(|m| {
                if m.word.is_empty() {
                    None
                } else {
                    let tail = PbwMonomial {
                        word: m.word[1..].to_vec(),
                        bottom: m.bottom,
                    };
                    Some(index[&tail])
                }
            })
            .collect();
        Ok(Self {
            delta,
            max_degree,
            lie_dim,
            bottom_dim,
            states,
            degrees,
            offsets,
            tails,
            index,
        })
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    pub fn lie_dim(&self) -> usize {
        self.lie_dim
    }

    pub fn bottom_dim(&self) -> usize {
        self.bottom_dim
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn monomial(&self, idx: usize) -> &PbwMonomial {
        &self.states[idx]
    }

    pub fn degree(&self, idx: usize) -> i64 {
        self.degrees[idx]
    }

    pub fn tail(&self, idx: usize) -> Option<usize> {
        self.tails[idx]
    }

    pub fn index_of(&self, m: &PbwMonomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Global indices of the states of degree `d` (empty outside the window).
    pub fn range_at(&self, d: i64) -> Range<usize> {
        if d < self.delta || d > self.max_degree {
            return 0..0;
        }
        let k = (d - self.delta) as usize;
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn dim_at(&self, d: i64) -> usize {
        self.range_at(d).len()
    }

    /// `(degree, dimension)` for every degree in the window.
    pub fn graded_dims(&self) -> Vec<(i64, usize)> {
        (self.delta..=self.max_degree).map(|d| (d, self.dim_at(d))).collect()
    }

    /// States of degree at most `d`.
    pub fn through(&self, d: i64) -> Range<usize> {
        if d < self.delta {
            return 0..0;
        }
        0..self.range_at(d.min(self.max_degree)).end
    }
}
