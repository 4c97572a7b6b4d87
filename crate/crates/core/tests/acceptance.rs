//! Acceptance suite: one line per criterion with its verdict, runtime and
//! budget. Every comparison is exact; the only tolerances are the runtime
//! budgets.

mod support;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vla::exactlin::{int, SparseVec};
use vla::leibniz::{check_left_leibniz, lie_quotient, squares_ideal, LeibnizAlgebra};
use vla::loopmod::InducedModule;
use vla::vertex::{
    adjoin_vacuum, hemisemidirect, level_zero_map, perm_vertex, saturate_ideal, skew_defect,
    DExtension, FaultInjected, QuotientRealization, SkewIdeal, VertexRealization, VgRealization,
};
use vla::verify::{
    check_d_properties, check_ideal_annihilation, check_skew_symmetry, check_vacuum_axioms, embedding_obstruction,
    jacobi_required_degree, jacobi_sweep, locality_order, Window,
};

use support::{dense_table, is_left_leibniz, load_algebra, load_perm, partitions, rank};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Option<u64>, fn() -> Outcome);

fn ensure(condition: bool, message: impl Into<String>) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message.into())
    }
}

fn e<T: std::fmt::Debug>(err: T) -> String {
    format!("{err:?}")
}

fn ideal_for(g: &LeibnizAlgebra, max: i64) -> Result<(SkewIdeal, VgRealization), String> {
    let base = VgRealization::adjoint(g, max).map_err(e)?;
    let gens = (0..g.dim()).map(|b| base.generator_state(b)).collect::<Result<Vec<_>, _>>().map_err(e)?;
    let keep = VgRealization::adjoint(g, max).map_err(e)?;
    let dext = Arc::new(DExtension::new(Arc::new(base), max).map_err(e)?);
    Ok((saturate_ideal(dext, &gens, None).map_err(e)?, keep))
}

fn criterion_1() -> Outcome {
    let n2 = load_algebra("n2");
    ensure(check_left_leibniz(&n2).pass, "n2 fails the left Leibniz identity")?;
    let squares = squares_ideal(&n2);
    ensure(squares.rank() == 1, format!("n2 squares rank {}", squares.rank()))?;
    ensure(squares.contains(&SparseVec::unit(1)).map_err(e)?, "n2 squares ideal misses y")?;
    let quotient = lie_quotient(&n2).map_err(e)?;
    ensure(quotient.dim() == 1, "n2 Lie quotient is not 1-dimensional")?;
    ensure(quotient.bracket_basis(0, 0).is_zero(), "n2 Lie quotient is not abelian")?;
    let r2 = load_algebra("r2");
    ensure(check_left_leibniz(&r2).pass, "r2 fails the left Leibniz identity")?;
    ensure(r2.is_lie(), "r2 is not reported Lie")?;
    ensure(!n2.is_lie(), "n2 is reported Lie")?;
    Ok("n2: squares = span{y}, g_Lie abelian of dim 1; r2 Leibniz and Lie".into())
}

fn criterion_2() -> Outcome {
    let n2 = load_algebra("n2");
    let m = InducedModule::adjoint(&n2, 5).map_err(e)?;
    let dims: Vec<usize> = (1..=5).map(|d| m.basis().dim_at(d)).collect();
    let oracle: Vec<usize> = (1..=5).map(|d| 2 * partitions(d - 1)).collect();
    ensure(dims == vec![2, 2, 4, 6, 10], format!("dims {dims:?}"))?;
    ensure(dims == oracle, format!("dims {dims:?} vs oracle {oracle:?}"))?;
    Ok(format!("dims {dims:?} = 2·p(d-1)"))
}

fn criterion_3() -> Outcome {
    let window = Window::default();
    let mut parts = Vec::new();
    for name in ["n2", "r2"] {
        let g = load_algebra(name);
        let v = VgRealization::adjoint(&g, jacobi_required_degree(&window)).map_err(e)?;
        let report = jacobi_sweep(&v, None, &window).map_err(e)?;
        ensure(report.pass, format!("{name}: {}", report.to_text()))?;
        parts.push(format!("{name} {} tuples", report.summary["tuples_checked"]));
    }
    Ok(format!("degrees <= 3, l,m,n in [-2,3]: {}", parts.join(", ")))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0usize;
    for name in ["n2", "r2", "sl2"] {
        let g = load_algebra(name);
        let v = VgRealization::adjoint(&g, 7).map_err(e)?;
        let states = v.states(3);
        for _ in 0..40 {
            let u = states[rng.gen_range(0..states.len())];
            let w = states[rng.gen_range(0..states.len())];
            let n = rng.gen_range(-2..=3);
            let expected = v.action().mode(u, n, w).map_err(e)?;
            let got = support::oracle::residue_oracle(v.action(), u, n, &SparseVec::unit(w)).map_err(e)?;
            ensure(
                *expected == got,
                format!("{name}: ({})_{n} {} differs", v.describe(u), v.describe(w)),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{checked} random products agree with the residue oracle"))
}

fn criterion_5() -> Outcome {
    let n2 = load_algebra("n2");
    let (ideal, base) = ideal_for(&n2, 4)?;
    let dext = ideal.dext();
    let x = SparseVec::unit(base.module().bottom_state(0));
    let y = SparseVec::unit(base.module().bottom_state(1));
    let defect = skew_defect(dext.as_ref(), &x, &x, 0).map_err(e)?;
    ensure(defect == y.scaled(&int(2)), format!("skew_defect(x,x,0) = {defect:?}"))?;
    let jv = ideal.jv_vectors().map_err(e)?;
    ensure(jv[&1].len() == 1, format!("n2 degree-1 J_V rank {}", jv[&1].len()))?;
    ensure(ideal.contains(&y).map_err(e)?, "y not in J_V")?;

    let abelian1 = load_algebra("abelian1");
    let (ideal1, _) = ideal_for(&abelian1, 5)?;
    let ranks: Vec<usize> = ideal1.jv_kernel().map_err(e)?.values().map(|b| b.rank()).collect();
    ensure(ranks.iter().all(|&r| r == 0), format!("abelian1 J_V ranks {ranks:?}"))?;

    let xi = base.module().bottom_state(0);
    let obstruction = embedding_obstruction(&base, xi, xi, 0, 0).map_err(e)?;
    ensure(!obstruction.pass, "n2 (x,x,0) not obstructed")?;
    let abelian2 = load_algebra("abelian2");
    let v2 = VgRealization::adjoint(&abelian2, 4).map_err(e)?;
    let (a, b) = (v2.module().bottom_state(0), v2.module().bottom_state(1));
    let ab = embedding_obstruction(&v2, a, b, -1, -1).map_err(e)?;
    ensure(!ab.pass, "abelian2 (a,b,-1) not obstructed")?;
    let r2 = load_algebra("r2");
    let vr = VgRealization::adjoint(&r2, 4).map_err(e)?;
    let (a, b) = (vr.module().bottom_state(0), vr.module().bottom_state(1));
    let rb = embedding_obstruction(&vr, a, b, 0, 0).map_err(e)?;
    ensure(rb.pass && rb.summary["status"] == "pass", "r2 (a,b,0) does not pass")?;
    Ok(format!(
        "skew_defect(x,x,0) = 2y; J_V(n2)_1 = span{{y}}; J_V(abelian1) ranks {ranks:?}; obstructions n2 and abelian2, r2 passes"
    ))
}

fn criterion_6() -> Outcome {
    let mut parts = Vec::new();
    for name in ["n2", "abelian1", "abelian2", "r2", "sl2"] {
        let g = load_algebra(name);
        let (ideal, _) = ideal_for(&g, 3)?;
        let phi = level_zero_map(&g, 3).map_err(e)?;
        let jv = ideal.jv_vectors().map_err(e)?;
        for (d, vectors) in &jv {
            for v in vectors {
                ensure(phi.apply(v).is_zero(), format!("{name}: J_V vector in degree {d} outside ker φ"))?;
            }
        }
        let jv_ranks: Vec<usize> = (1..=3).map(|d| jv.get(&d).map_or(0, Vec::len)).collect();
        let ker_ranks: Vec<usize> = (1..=3).map(|d| phi.kernel_at(d).map(|k| k.rank())).collect::<Result<_, _>>().map_err(e)?;
        for (j, k) in jv_ranks.iter().zip(&ker_ranks) {
            ensure(j <= k, format!("{name}: J_V ranks {jv_ranks:?} exceed kernel ranks {ker_ranks:?}"))?;
        }
        if name == "sl2" {
            let c = dense_table(&g);
            let pairs = [(0, 1), (0, 2), (1, 2)];
            let rows = pairs.iter().map(|&(a, b)| c[a][b].clone()).collect();
            ensure(rank(rows) == 3, "Λ²sl2 -> sl2 is not injective")?;
            ensure(ker_ranks[1] == 0, format!("sl2 degree-2 level-zero kernel rank {}", ker_ranks[1]))?;
            ensure(jv_ranks[1] == 0, "sl2 degree-2 J_V nonzero")?;
        }
        parts.push(format!("{name} J_V {jv_ranks:?} ⊆ ker φ {ker_ranks:?}"));
    }
    Ok(parts.join("; "))
}

fn borcherds_vacuum() -> Result<Arc<dyn VertexRealization>, String> {
    let p = load_perm("borcherds");
    let base = perm_vertex(&p).map_err(e)?;
    Ok(Arc::new(adjoin_vacuum(Arc::new(base)).map_err(e)?))
}

fn criterion_7() -> Outcome {
    let v = borcherds_vacuum()?;
    let window = Window::default();
    let vac = check_vacuum_axioms(v.as_ref(), &window).map_err(e)?;
    ensure(vac.pass, vac.to_text())?;
    for u in v.states(window.max_degree) {
        for w in v.states(window.max_degree) {
            let k = locality_order(v.as_ref(), u, w, &window, 3).map_err(e)?;
            ensure(k == Some(0), format!("locality order of ({}, {}) is {k:?}", v.describe(u), v.describe(w)))?;
        }
    }
    let d = check_d_properties(v.as_ref(), &window).map_err(e)?;
    ensure(d.pass, d.to_text())?;
    let j = jacobi_sweep(v.as_ref(), None, &window).map_err(e)?;
    ensure(j.pass, j.to_text())?;
    Ok(format!(
        "vacuum axioms, locality 0, both D-properties and Jacobi ({} tuples) hold",
        j.summary["tuples_checked"]
    ))
}

fn criterion_8() -> Outcome {
    let h = hemisemidirect(borcherds_vacuum()?).map_err(e)?;
    let window = Window::default();
    let j = jacobi_sweep(&h, None, &window).map_err(e)?;
    ensure(j.pass, j.to_text())?;
    let vac = h.vacuum().ok_or("no vacuum")?;
    let copies: Vec<usize> = h.states(window.max_degree).into_iter().filter(|&s| h.is_copy(s)).collect();
    for &s in &copies {
        let w = SparseVec::unit(s);
        let defect = skew_defect(&h, &vac, &w, -1).map_err(e)?;
        ensure(defect == w, format!("skew_defect(1, {}, -1) = {defect:?}", h.describe(s)))?;
    }
    Ok(format!(
        "Jacobi ({} tuples) holds; skew_defect(1, w, -1) = w for all {} copies",
        j.summary["tuples_checked"],
        copies.len()
    ))
}

fn criterion_9() -> Outcome {
    let n2 = load_algebra("n2");
    let (ideal, _) = ideal_for(&n2, 6)?;
    let dext = ideal.dext().clone();
    let window = Window::new(2, -2, 3).map_err(e)?;
    let mut reduced = 0usize;
    for u in dext.states(window.max_degree) {
        for v in dext.states(window.max_degree) {
            for n in window.modes() {
                if dext.degree(u) + dext.degree(v) - n - 1 > ideal.max_degree() {
                    continue;
                }
                let d = skew_defect(dext.as_ref(), &SparseVec::unit(u), &SparseVec::unit(v), n).map_err(e)?;
                ensure(ideal.reduce(&d).map_err(e)?.is_zero(), format!("defect ({u},{v},{n}) survives"))?;
                reduced += 1;
            }
        }
    }
    let ideal = Arc::new(ideal);
    let quotient = QuotientRealization::new(ideal.clone());
    let x = dext.layer(1)[0];
    let skew = check_skew_symmetry(&quotient, x, x, &Window::new(1, -2, 3).map_err(e)?).map_err(e)?;
    ensure(skew.pass, skew.to_text())?;
    let ann = check_ideal_annihilation(&ideal, &Window::new(4, -2, 3).map_err(e)?).map_err(e)?;
    ensure(ann.pass, ann.to_text())?;
    Ok(format!(
        "{reduced} defects reduce to 0; annihilation by {} ideal vectors through degree 4",
        ann.summary["ideal_vectors"]
    ))
}

fn criterion_10() -> Outcome {
    let n2 = load_algebra("n2");
    let mutated = n2.with_structure_constant(0, 0, 0, int(1));
    let report = check_left_leibniz(&mutated);
    ensure(!report.pass && !report.findings.is_empty(), "mutated n2 passes check_left_leibniz")?;

    let window = Window::new(2, -2, 3).map_err(e)?;
    let v = Arc::new(VgRealization::adjoint(&n2, jacobi_required_degree(&window)).map_err(e)?);
    let (x, y) = (v.module().bottom_state(0), v.module().bottom_state(1));
    let mut replacement = SparseVec::unit(x);
    replacement.add_term(y, &int(1));
    let faulty = FaultInjected::new(v, x, 0, x, replacement);
    let sweep = jacobi_sweep(&faulty, None, &window).map_err(e)?;
    ensure(!sweep.pass && !sweep.findings.is_empty(), "fault-injected mode table passes Jacobi")?;

    let mut detected = 0;
    let mut genuine = 0;
    for l in 0..2 {
        for r in 0..2 {
            for k in 0..2 {
                let old = n2.bracket_basis(l, r).coeff(&k);
                let g = n2.with_structure_constant(l, r, k, old + int(1));
                if !check_left_leibniz(&g).pass {
                    detected += 1;
                } else {
                    ensure(is_left_leibniz(&dense_table(&g)), "an undetected mutation is not Leibniz")?;
                    genuine += 1;
                }
            }
        }
    }
    Ok(format!(
        "[x,x] = x+y caught with witness {}; Jacobi witness {}; {detected} of 8 mutations caught, {genuine} remain Leibniz",
        report.findings[0].input, sweep.findings[0].input
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "Leibniz axioms, squares ideal, Lie quotient", Some(1), criterion_1),
        (2, "graded dimensions of V_n2", Some(1), criterion_2),
        (3, "Jacobi component sweep on V_n2 and V_r2", Some(60), criterion_3),
        (4, "iterate recursion vs residue oracle", Some(30), criterion_4),
        (5, "embedding dichotomy", None, criterion_5),
        (6, "J_V inside the level-zero kernel", Some(120), criterion_6),
        (7, "vacuum adjunction on C[t]/(t^4)", Some(5), criterion_7),
        (8, "hemisemidirect product", Some(5), criterion_8),
        (9, "quotient by the skew ideal", None, criterion_9),
        (10, "mutation detection", None, criterion_10),
    ];
    let mut failed = 0;
    for (id, title, budget, run) in criteria {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = started.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= Duration::from_secs(b));
        let (verdict, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over budget: {d}")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        let limit = budget.map_or("no budget".to_string(), |b| format!("budget {b}s"));
        println!(
            "criterion {id:>2} [{verdict}] {title} ({:.2}s, {limit}): {detail}",
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
