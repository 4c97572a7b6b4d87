//! Independent reference computations shared by the integration tests.

#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

use num_rational::BigRational;
use num_traits::{One, Zero};

use vla::leibniz::document::AlgebraDocument;
use vla::leibniz::LeibnizAlgebra;
use vla::vertex::PermAlgebra;

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../algebras").join(name)
}

pub fn load_algebra(name: &str) -> LeibnizAlgebra {
    let text = std::fs::read_to_string(corpus_path(&format!("{name}.json"))).expect("corpus file");
    AlgebraDocument::parse(&text).and_then(|d| d.algebra()).expect("corpus algebra")
}

pub fn load_perm(name: &str) -> PermAlgebra {
    let text = std::fs::read_to_string(corpus_path(&format!("{name}.json"))).expect("corpus file");
    PermAlgebra::parse(&text).expect("corpus perm algebra")
}

/// Number of partitions of `n`, by the standard dynamic program over parts.
pub fn partitions(n: usize) -> usize {
    let mut p = vec![0usize; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for k in part..=n {
            p[k] += p[k - part];
        }
    }
    p[n]
}

/// Number of partitions of `n` into parts of `colors` colors.
pub fn colored_partitions(n: usize, colors: usize) -> usize {
    let mut p = vec![0usize; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for _ in 0..colors {
            for k in part..=n {
                p[k] += p[k - part];
            }
        }
    }
    p[n]
}

/// Structure constants as a dense cube `c[l][r][k]`.
pub fn dense_table(g: &LeibnizAlgebra) -> Vec<Vec<Vec<BigRational>>> {
    let n = g.dim();
    (0..n)
        .map(|l| {
            (0..n)
                .map(|r| (0..n).map(|k| g.bracket_basis(l, r).coeff(&k)).collect())
                .collect()
        })
        .collect()
}

/// Checks `[a,[b,c]] = [[a,b],c] + [b,[a,c]]` on basis triples with dense
/// arithmetic.
pub fn is_left_leibniz(c: &[Vec<Vec<BigRational>>]) -> bool {
    let n = c.len();
    let bracket = |x: &[BigRational], y: &[BigRational]| -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); n];
        for i in 0..n {
            for j in 0..n {
                if x[i].is_zero() || y[j].is_zero() {
                    continue;
                }
                for k in 0..n {
                    out[k] += &x[i] * &y[j] * &c[i][j][k];
                }
            }
        }
        out
    };
    let unit = |i: usize| -> Vec<BigRational> {
        (0..n).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }).collect()
    };
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                let (ea, eb, ed) = (unit(a), unit(b), unit(d));
                let lhs = bracket(&ea, &bracket(&eb, &ed));
                let r1 = bracket(&bracket(&ea, &eb), &ed);
                let r2 = bracket(&eb, &bracket(&ea, &ed));
                if (0..n).any(|k| lhs[k] != &r1[k] + &r2[k]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Rank of a dense rational matrix by plain Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = &row[col] / &pivot_row[col];
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}
