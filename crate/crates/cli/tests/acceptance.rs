//! Acceptance criteria, one printed PASS/FAIL line each. Runs as a plain
//! binary (`harness = false`) so the lines always reach the output.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use mkstar_core::eigen::{group_multiplicities, multiplicity_at, sym_eigen};
use mkstar_core::partition::{
    compare_signs, fiedler, kway, recursive_bisection, sign_bipartition, KSelect, RsbStop,
    SignStatus,
};
use mkstar_core::reduce::{
    lift_vector, reduce_all, reduce_star, sym_mass_adjacency, sym_mass_laplacian, LiftSource,
    Policy, Reduction,
};
use mkstar_core::structure::{
    detect_stars, group_by_weight, plant_ldependent_graph, plant_star_graph, verify_ldependent,
    StarSpec,
};
use mkstar_core::{Graph, Matrix, MatrixKind};

type Verdict = Result<String, String>;

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Verdict,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "star fixture spectrum", limit: Some(Duration::from_secs(1)), run: c1 },
        Criterion { id: 2, name: "star multiplicities, 200 planted graphs", limit: Some(Duration::from_secs(30)), run: c2 },
        Criterion { id: 3, name: "l-dependent multiplicities, 200 planted blocks", limit: Some(Duration::from_secs(30)), run: c3 },
        Criterion { id: 4, name: "adjacency reduction", limit: None, run: c4 },
        Criterion { id: 5, name: "laplacian reduction", limit: None, run: c5 },
        Criterion { id: 6, name: "interlacing, 500 planted reductions", limit: Some(Duration::from_secs(120)), run: c6 },
        Criterion { id: 7, name: "fiedler sign agreement, 200 planted graphs", limit: None, run: c7 },
        Criterion { id: 8, name: "partitioning sanity", limit: None, run: c8 },
        Criterion { id: 9, name: "cli contract", limit: None, run: c9 },
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(c.run))
            .unwrap_or_else(|p| Err(format!("panicked: {}", panic_text(&p))));
        let elapsed = start.elapsed();
        let verdict = match (verdict, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {:.2} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs()))
            }
            (v, _) => v,
        };
        let (tag, msg) = match &verdict {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        println!(
            "criterion {} ({}): {tag}  {msg}  [{:.2} s]",
            c.id,
            c.name,
            elapsed.as_secs_f64()
        );
        failed += usize::from(verdict.is_err());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}

fn panic_text(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn k32() -> Graph {
    Graph::new(5, (0..3).flat_map(|i| [(i, 3, 1.0), (i, 4, 1.0)])).unwrap()
}

fn path4() -> Graph {
    Graph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap()
}

fn two_triangles() -> Graph {
    let t = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)];
    Graph::new(6, t.iter().map(|&(u, v)| (u, v, 1.0)).chain([(2, 3, 1e-3)])).unwrap()
}

fn values(m: &Matrix) -> Vec<f64> {
    sym_eigen(m).unwrap().values
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "{a:?} vs {b:?}");
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn mult(values: &[f64], lambda: f64, tol: f64) -> usize {
    multiplicity_at(&group_multiplicities(values, tol), lambda, tol)
}

/// Deterministic star layout for a seed: 1 to 3 stars, weights in
/// {0.5, 1, 2}, `base + extra` vertices.
fn star_specs(seed: u64, extra: u64) -> (usize, Vec<StarSpec>) {
    let count = 1 + seed % 3;
    let specs: Vec<StarSpec> = (0..count)
        .map(|j| StarSpec {
            m: 2 + ((seed / 3 + 5 * j) % 4) as usize,
            k: 1 + ((seed / 12 + 3 * j) % 4) as usize,
            w: [0.5, 1.0, 2.0][((seed / 2 + j) % 3) as usize],
        })
        .collect();
    let base: usize = specs.iter().map(|s| s.m + s.k).sum();
    (base + 5 + extra as usize, specs)
}

fn planted(seed: u64, extra: u64) -> Result<Graph, String> {
    let (n, specs) = star_specs(seed, extra);
    plant_star_graph(seed, n, &specs)
        .map(|p| p.graph)
        .map_err(|e| format!("seed {seed}: generator failed: {e}"))
}

/// Removes `1..m-1` twins (varying with the seed) from every uniform star.
fn seeded_reduction(g: &Graph, seed: u64) -> Reduction {
    let qs = detect_stars(g)
        .iter()
        .enumerate()
        .map(|(i, s)| if s.is_uniform() { 1 + (seed as usize + i) % (s.m() - 1) } else { 0 })
        .collect();
    reduce_all(g, Policy::Explicit(qs)).unwrap()
}

/// Sorted `original` minus, for each `(value, count)`, the `count` entries
/// nearest to `value`.
fn remove_copies(original: &[f64], removals: &[(f64, usize)]) -> Vec<f64> {
    let mut pool = original.to_vec();
    for &(value, count) in removals {
        for _ in 0..count {
            let i = (0..pool.len())
                .min_by(|&a, &b| (pool[a] - value).abs().total_cmp(&(pool[b] - value).abs()))
                .unwrap();
            pool.remove(i);
        }
    }
    pool
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Worst relative residual `|op K v - mu K v| / |K v|` over all eigenpairs
/// of `reduced_op`.
fn worst_lift_residual(op: &Matrix, k: &Matrix, reduced_op: &Matrix) -> f64 {
    let s = sym_eigen(reduced_op).unwrap();
    (0..s.order())
        .map(|i| {
            let x = k.mul_vec(&s.vector(i));
            let y = op.mul_vec(&x);
            let r: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a - s.values[i] * b).collect();
            norm(&r) / norm(&x)
        })
        .fold(0.0, f64::max)
}

fn c1() -> Verdict {
    let g = k32();
    let got = values(&g.laplacian());
    // K_{m,k}: 0, k with multiplicity m-1, m with multiplicity k-1, m+k
    let (m, k) = (3.0, 2.0);
    let closed = [0.0, k, k, m, m + k];
    let err = max_diff(&got, &closed);
    ensure(err <= 1e-10, || format!("spectrum {got:?}, error {err:e}"))?;
    let at_w = mult(&got, 2.0, 1e-8);
    ensure(at_w >= 2, || format!("multiplicity at 2 is {at_w}"))?;
    Ok(format!("spectrum {{0,2,2,3,5}} error {err:.1e}; multiplicity at w=2 is {at_w}"))
}

fn c2() -> Verdict {
    let mut classes = 0;
    for seed in 0..200 {
        let g = planted(seed, (seed * 7) % 40)?;
        ensure(g.n() <= 100, || format!("seed {seed}: n = {}", g.n()))?;
        let stars = detect_stars(&g);
        let groups = group_by_weight(&stars, 1e-8);
        let lap = values(&g.laplacian());
        let sgn = values(&g.signless_laplacian());
        let nrm = values(&g.matrix(MatrixKind::Normalized).unwrap());
        let mut total = 0;
        for c in &groups {
            let (ml, mq) = (mult(&lap, c.weight, 1e-8), mult(&sgn, c.weight, 1e-8));
            ensure(ml >= c.degree && mq >= c.degree, || {
                format!("seed {seed}: w = {} has L {ml}, Q {mq}, degree {}", c.weight, c.degree)
            })?;
            total += c.degree;
            classes += 1;
        }
        let m1 = mult(&nrm, 1.0, 1e-8);
        ensure(m1 >= total, || format!("seed {seed}: normalized multiplicity {m1} < {total}"))?;
    }
    Ok(format!("200 graphs, {classes} star classes, all bounds hold"))
}

fn c3() -> Verdict {
    let mut cases: Vec<(u64, (usize, usize, usize), f64)> = (0..200u64)
        .map(|seed| {
            let a = 1 + (seed % 3) as usize;
            let b = a + ((seed / 3) % 3) as usize;
            let l = 1 + ((seed / 9) % 4) as usize;
            (seed, (a, b, l), if seed % 2 == 0 { 4.0 } else { 6.0 })
        })
        .collect();
    cases.push((1000, (2, 3, 1), 6.0));
    cases.push((1001, (3, 4, 3), 4.0));
    for (seed, sizes, wt) in cases {
        let p = plant_ldependent_graph(seed, sizes, wt).map_err(|e| format!("seed {seed}: {e}"))?;
        let block = verify_ldependent(&p.graph, &p.candidate)
            .map_err(|e| format!("seed {seed}: planted block rejected: {e}"))?;
        let l = sizes.2;
        ensure(block.l() == l, || format!("seed {seed}: l = {}", block.l()))?;
        let ml = mult(&values(&p.graph.laplacian()), wt, 1e-8);
        let m1 = mult(&values(&p.graph.matrix(MatrixKind::Normalized).unwrap()), 1.0, 1e-8);
        ensure(ml >= l && m1 >= l, || {
            format!("seed {seed}: sizes {sizes:?}: L multiplicity {ml}, normalized {m1}, l {l}")
        })?;
    }
    Ok("202 blocks accepted (including sizes (2,3,1) at 6 and (3,4,3) at 4); bounds hold".into())
}

struct Worst {
    ktk: f64,
    congruence: f64,
    spectrum: f64,
    lift: f64,
}

fn check_adjacency(g: &Graph, r: &Reduction, w: &mut Worst) -> Result<(), String> {
    let k = &r.k_matrix;
    let a = g.adjacency();
    let bt = sym_mass_adjacency(r);
    w.ktk = w.ktk.max(k.transpose().mul(k).sub(&Matrix::identity(k.cols())).max_abs());
    w.congruence = w.congruence.max(k.transpose().mul(&a).mul(k).sub(&bt).max_abs());
    let expected = remove_copies(&values(&a), &[(0.0, r.q())]);
    w.spectrum = w.spectrum.max(max_diff(&values(&bt), &expected));
    w.lift = w.lift.max(worst_lift_residual(&a, k, &bt));
    ensure(w.ktk <= 1e-10 && w.congruence <= 1e-9 && w.spectrum <= 1e-8 && w.lift <= 1e-8, || {
        format!(
            "K^TK {:.1e}, congruence {:.1e}, spectrum {:.1e}, lift {:.1e}",
            w.ktk, w.congruence, w.spectrum, w.lift
        )
    })
}

fn c4() -> Verdict {
    let mut w = Worst { ktk: 0.0, congruence: 0.0, spectrum: 0.0, lift: 0.0 };
    let g = k32();
    let star = detect_stars(&g).remove(0);
    for q in [1, 2] {
        check_adjacency(&g, &reduce_star(&g, &star, q).unwrap(), &mut w)
            .map_err(|e| format!("fixture q={q}: {e}"))?;
    }
    for seed in 0..200 {
        let g = planted(seed, (seed * 7) % 40)?;
        let r = seeded_reduction(&g, seed);
        check_adjacency(&g, &r, &mut w).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok(format!(
        "fixture q=1,2 and 200 reductions: max K^TK-I {:.1e}, congruence {:.1e}, spectrum {:.1e}, lift residual {:.1e}",
        w.ktk, w.congruence, w.spectrum, w.lift
    ))
}

fn check_laplacian(g: &Graph, r: &Reduction, w: &mut Worst) -> Result<(), String> {
    let l = g.laplacian();
    let lt = sym_mass_laplacian(r);
    let removals: Vec<(f64, usize)> = r.stars.iter().map(|s| (s.weight, s.q)).collect();
    let expected = remove_copies(&values(&l), &removals);
    w.spectrum = w.spectrum.max(max_diff(&values(&lt), &expected));
    w.lift = w.lift.max(worst_lift_residual(&l, &r.k_matrix, &lt));
    ensure(w.spectrum <= 1e-8 && w.lift <= 1e-8, || {
        format!("spectrum {:.1e}, lift {:.1e}", w.spectrum, w.lift)
    })
}

fn c5() -> Verdict {
    let g = k32();
    let star = detect_stars(&g).remove(0);
    let r = reduce_star(&g, &star, 1).unwrap();
    let lt = sym_mass_laplacian(&r);
    let s = sym_eigen(&lt).unwrap();
    let err = max_diff(&s.values, &[0.0, 2.0, 3.0, 5.0]);
    ensure(err <= 1e-10, || format!("reduced spectrum {:?}", s.values))?;
    let lifted = lift_vector(&r, &s.vector(3), LiftSource::TildeL).unwrap();
    let target = [1.0, 1.0, 1.0, -1.5, -1.5];
    let (ln, tn) = (norm(&lifted), norm(&target));
    let sign = if lifted[0] < 0.0 { -1.0 } else { 1.0 };
    let shape = lifted
        .iter()
        .zip(target)
        .map(|(x, t)| (sign * x / ln - t / tn).abs())
        .fold(0.0, f64::max);
    ensure(shape <= 1e-8, || format!("lifted eigenvector {lifted:?}"))?;

    let mut w = Worst { ktk: 0.0, congruence: 0.0, spectrum: 0.0, lift: 0.0 };
    for seed in 0..200 {
        let g = planted(seed, (seed * 7) % 40)?;
        let r = seeded_reduction(&g, seed);
        check_laplacian(&g, &r, &mut w).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok(format!(
        "fixture spectrum error {err:.1e}, eigenvector shape error {shape:.1e}; 200 reductions: spectrum {:.1e}, lift residual {:.1e}",
        w.spectrum, w.lift
    ))
}

fn c6() -> Verdict {
    let mut largest = 0;
    for seed in 0..500 {
        let g = planted(seed, (seed * 37) % 150)?;
        largest = largest.max(g.n());
        ensure(g.n() <= 200, || format!("seed {seed}: n = {}", g.n()))?;
        let r = seeded_reduction(&g, seed);
        let a = g.adjacency();
        let k = &r.k_matrix;
        let mut alpha = values(&a);
        let mut beta = values(&k.transpose().mul(&a).mul(k));
        alpha.reverse();
        beta.reverse();
        let (na, nb) = (alpha.len(), beta.len());
        for i in 0..nb {
            ensure(alpha[i] >= beta[i] - 1e-8 && beta[i] >= alpha[na - nb + i] - 1e-8, || {
                format!("seed {seed}: index {i}: alpha {} beta {} alpha' {}", alpha[i], beta[i], alpha[na - nb + i])
            })?;
        }
    }
    Ok(format!("500 reductions, largest n = {largest}"))
}

fn c7() -> Verdict {
    let (mut agree, mut degenerate) = (0, 0);
    for seed in 0..200 {
        let g = planted(seed, (seed * 7) % 40)?;
        let qs = detect_stars(&g).iter().map(|s| usize::from(s.is_uniform())).collect();
        let r = reduce_all(&g, Policy::Explicit(qs)).unwrap();
        let rep = compare_signs(&g, &r).map_err(|e| format!("seed {seed}: {e}"))?;
        match rep.status {
            SignStatus::Agree => agree += 1,
            SignStatus::Degenerate => degenerate += 1,
            SignStatus::Disagree => {
                return Err(format!("seed {seed}: agreement {}", rep.agreement));
            }
        }
    }
    ensure(agree >= 100, || format!("only {agree} of 200 seeds are non-degenerate"))?;
    Ok(format!("{agree} non-degenerate seeds all agree; {degenerate} degenerate excluded"))
}

fn c8() -> Verdict {
    let f = fiedler(&path4()).map_err(|e| e.to_string())?;
    let signs: Vec<bool> = f.vector.iter().map(|&x| x > 0.0).collect();
    ensure(signs == [true, true, false, false], || format!("fiedler vector {:?}", f.vector))?;
    let err = (f.lambda2 - (2.0 - 2f64.sqrt())).abs();
    ensure(err <= 1e-10, || format!("lambda2 = {}", f.lambda2))?;
    let g = two_triangles();
    let want = vec![0, 0, 0, 1, 1, 1];
    let bisect = sign_bipartition(&g).unwrap().labels;
    let rsb = recursive_bisection(&g, RsbStop::MaxClusters(2)).unwrap().labels;
    let kw = kway(&g, KSelect::Fixed(2)).unwrap().labels;
    ensure(bisect == want && rsb == want && kw == want, || {
        format!("bisect {bisect:?}, rsb {rsb:?}, kway {kw:?}")
    })?;
    Ok(format!("path signs (+,+,-,-), lambda2 error {err:.1e}; triangles recovered by all three methods"))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn c9() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_mkstar");
    for f in ["f1.graph", "f2.graph", "f3.graph", "f4.graph"] {
        let o = Command::new(bin).args(["verify", &fixture(f)]).output().unwrap();
        ensure(o.status.code() == Some(0), || {
            format!("verify {f} exited {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stdout))
        })?;
        let a = Command::new(bin).args(["verify", &fixture(f), "--json"]).output().unwrap();
        let b = Command::new(bin).args(["verify", &fixture(f), "--json"]).output().unwrap();
        ensure(a.stdout == b.stdout && !a.stdout.is_empty(), || format!("{f}: JSON differs between runs"))?;
    }
    let o = Command::new(bin).args(["verify", &fixture("f1_mutated.graph")]).output().unwrap();
    let err = String::from_utf8_lossy(&o.stderr).into_owned();
    ensure(o.status.code() == Some(2), || format!("mutated fixture exited {:?}", o.status.code()))?;
    ensure(err.contains("star_premise"), || format!("failed check not named: {err}"))?;
    Ok(format!("fixtures exit 0, JSON byte-stable; mutated fixture exits 2 ({})", err.trim()))
}
