//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sumchoice::choosability::{color_from_lists, decide, is_sufficient, transversal_check, SizeFunction, DEFAULT_BUDGET};
use sumchoice::graph::{complete_bipartite, complete_split, random_graph, Graph};
use sumchoice::kaq::{self, LogBase};
use sumchoice::sum::{greedy_sufficient_f, sum_choice_exact, sum_choice_type2_exact, SearchOptions};
use sumchoice::turan::{independent_sdr, sharp_family, split_bounds, split_witness, t_balanced};
use sumchoice::type2::{beta, chi_sc2_reduced, expand_witness, type2_insufficient};

use common::*;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() <= limit, || format!("took {:.1?}, limit {limit:?}", start.elapsed()))
}

fn exact_value(g: &Graph) -> Result<usize, String> {
    let r = sum_choice_exact(g, &SearchOptions::default()).map_err(|e| e.to_string())?;
    r.value.ok_or_else(|| format!("undecided in {}..={}", r.lower, r.upper))
}

fn isqrt(n: u64) -> u64 {
    (0..=n).take_while(|r| r * r <= n).last().unwrap()
}

fn closed_forms() -> Outcome {
    let start = Instant::now();
    let mut seen = Vec::new();
    for (a, q, listed) in [(2, 1, 5), (2, 2, 8), (2, 3, 10), (2, 4, 13), (3, 1, 7), (3, 2, 10), (3, 3, 13)] {
        let formula = if a == 2 { 2 * q + 1 + isqrt(4 * q + 1) } else { 2 * q + 1 + isqrt(12 * q + 4) };
        ensure(formula == listed, || format!("formula gives {formula} at ({a},{q})"))?;
        let got = exact_value(&complete_bipartite(a as usize, q as usize))?;
        ensure(got as u64 == listed, || format!("K_{{{a},{q}}}: exact {got}, expected {listed}"))?;
        seen.push(got.to_string());
    }
    within(start, Duration::from_secs(15 * 60))?;
    Ok(format!("values {} in {:.1?}", seen.join(","), start.elapsed()))
}

fn trees() -> Outcome {
    let mut counts = Vec::new();
    for n in 1..=6 {
        let classes = brute_trees(n);
        counts.push(classes.len());
        for t in &classes {
            let got = exact_value(t)?;
            ensure(got == 2 * n - 1, || format!("tree {:?}: {got} != {}", t.edges(), 2 * n - 1))?;
        }
    }
    ensure(counts == [1, 1, 1, 2, 3, 6], || format!("class counts {counts:?}"))?;
    Ok(format!("{} trees, class counts {counts:?}", counts.iter().sum::<usize>()))
}

fn load_fixture(name: &str) -> Graph {
    let path = format!("{}/tests/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

fn is_triangulation(g: &Graph) -> bool {
    let n = g.n();
    g.edge_count() == 3 * n - 6
        && g.edges().iter().all(|&(u, v)| (0..n).filter(|&w| g.has_edge(u, w) && g.has_edge(v, w)).count() >= 2)
}

fn degeneracy() -> Outcome {
    let names = ["k4", "triangular_bipyramid", "octahedron", "pentagonal_bipyramid", "icosahedron"];
    for name in names {
        let g = load_fixture(name);
        ensure(g.n() <= 12 && is_triangulation(&g), || format!("{name} is not a triangulation"))?;
        let f = greedy_sufficient_f(&g);
        let (sum, max) = (f.iter().sum::<usize>(), *f.iter().max().unwrap());
        ensure(sum <= 4 * g.n() - 6 && max <= 6, || format!("{name}: sum {sum}, max {max}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..50 {
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(0..=n * (n - 1) / 2);
        let g = random_graph(n, m, rng.gen());
        let f = greedy_sufficient_f(&g);
        let d = is_sufficient(&g, &f, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(d.verdict.is_sufficient(), || format!("random graph {i} ({n} vertices): {:?}", d.verdict))?;
        if f.iter().sum::<usize>() <= 7 {
            ensure(brute_sufficient(&g, &f), || format!("random graph {i}: brute force disagrees"))?;
        }
    }
    Ok("5 triangulations within 4n-6 and 6, 50 random graphs sufficient".into())
}

fn construction() -> Outcome {
    let start = Instant::now();
    for (t, l) in [(2, 1), (2, 2)] {
        let c = kaq::constr_assignment(t, l).map_err(|e| e.to_string())?;
        let (a, q) = (c.a_lists.len(), c.q_lists.len());
        ensure(a == 1 << t && q == t * l * l, || format!("constr({t},{l}) has shape {a} x {q}"))?;
        ensure(transversal_check(&c.a_lists, &c.q_lists).is_none(), || format!("constr({t},{l}) has a transversal"))?;
        ensure(!brute_transversal(&c.a_lists, &c.q_lists), || format!("constr({t},{l}): subset search finds a transversal"))?;
        let lists: Vec<Vec<u32>> = c.a_lists.iter().chain(&c.q_lists).cloned().collect();
        ensure(!colorable(&complete_bipartite(a, q), &lists), || format!("constr({t},{l}) is colourable"))?;
        let size = ((q as f64) * (a as f64).log2()).sqrt();
        ensure(c.a_lists.iter().all(|x| x.len() as f64 == size), || format!("constr({t},{l}) list sizes differ from {size}"))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("both uncolourable, checked in {:.1?}", start.elapsed()))
}

fn sandwich() -> Outcome {
    let mut parts = Vec::new();
    for (a, q) in [(2u64, 12u64), (2, 20), (3, 100)] {
        let (af, qf) = (a as f64, q as f64);
        let lb = 2.0 * qf + 0.06 * af * (qf * af.ln()).sqrt();
        let ub = 2 * q + a * (32.0 * qf * (1.0 + af.ln())).sqrt().ceil() as u64;
        let mid = if a == 2 { 2 * q + 1 + isqrt(4 * q + 1) } else { 2 * q + 1 + isqrt(12 * q + 4) };
        let lib_lb = kaq::lb_bound(a, q, LogBase::Natural).map_err(|e| e.to_string())?;
        let lib_ub = kaq::ub_bound(a, q).map_err(|e| e.to_string())?;
        ensure((lib_lb - lb).abs() < 1e-9 && lib_ub == ub, || format!("({a},{q}): library bounds {lib_lb}, {lib_ub} vs {lb}, {ub}"))?;
        ensure(kaq::closed_form(a, q) == Some(mid), || format!("({a},{q}): closed form mismatch"))?;
        ensure(lb <= mid as f64 && mid <= ub, || format!("({a},{q}): {lb} <= {mid} <= {ub} fails"))?;
        parts.push(format!("{lb:.1}<={mid}<={ub}"));
    }
    Ok(parts.join(", "))
}

fn random_process() -> Outcome {
    let start = Instant::now();
    let (a, q) = (4usize, 64usize);
    let r = (32.0 * q as f64 * (1.0 + (a as f64).ln())).sqrt().ceil() as usize;
    let p = (2.0 * (1.0 + (a as f64).ln()) / q as f64).sqrt();
    ensure((kaq::default_p(a as u64, q as u64) - p).abs() < 1e-12, || "p disagrees".into())?;
    let g = complete_bipartite(a, q);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..100 {
        let universe = 2 * r;
        let a_lists: Vec<Vec<u32>> = (0..a)
            .map(|_| {
                let mut l: Vec<u32> = sample(&mut rng, universe, r).into_iter().map(|c| c as u32).collect();
                l.sort_unstable();
                l
            })
            .collect();
        let q_lists: Vec<Vec<u32>> = (0..q)
            .map(|_| {
                let pair = sample(&mut rng, universe, 2);
                let mut l = vec![pair.index(0) as u32, pair.index(1) as u32];
                l.sort_unstable();
                l
            })
            .collect();
        let found = kaq::random_transversal(&a_lists, &q_lists, p, i, 50).map_err(|e| e.to_string())?;
        let (t, _) = found.ok_or_else(|| format!("assignment {i}: no success in 50 trials"))?;
        ensure(a_lists.iter().all(|l| l.iter().any(|c| t.contains(c))), || format!("assignment {i}: T misses an A-list"))?;
        ensure(q_lists.iter().all(|l| !l.iter().all(|c| t.contains(c))), || format!("assignment {i}: T spans a Q-list"))?;
        let color = kaq::coloring_from_transversal(&a_lists, &q_lists, &t).ok_or_else(|| format!("assignment {i}: no colouring"))?;
        let lists: Vec<Vec<u32>> = a_lists.iter().chain(&q_lists).cloned().collect();
        ensure(is_proper(&g, &lists, &color), || format!("assignment {i}: improper colouring"))?;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("r = {r}, p = {p:.4}, 100/100 coloured in {:.1?}", start.elapsed()))
}

fn turan() -> Outcome {
    for s in 0..=20 {
        for k in 1..=6 {
            ensure(t_balanced(s, k) == brute_t(s, k), || format!("t({s},{k}) = {} vs {}", t_balanced(s, k), brute_t(s, k)))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..500 {
        let a = rng.gen_range(2..=4);
        let s = rng.gen_range(a..=12);
        let n = rng.gen_range(s..=12);
        let bound = t_balanced(s, a - 1).min(n * (n - 1) / 2 + 1);
        let m = rng.gen_range(0..bound);
        let g = random_graph(n, m, rng.gen());
        let lists: Vec<Vec<usize>> = (0..a)
            .map(|_| {
                let mut l = sample(&mut rng, n, s).into_vec();
                l.sort_unstable();
                l
            })
            .collect();
        let sdr = independent_sdr(&g, &lists).map_err(|e| e.to_string())?.ok_or_else(|| format!("instance {i}: no SDR found"))?;
        let reps = sdr.by_list();
        let distinct = reps.iter().collect::<std::collections::BTreeSet<_>>().len() == a;
        let valid = distinct && reps.iter().zip(&lists).all(|(v, l)| l.contains(v)) && g.is_independent(&reps);
        ensure(valid, || format!("instance {i}: invalid SDR {reps:?}"))?;
    }
    let mut sharp = 0;
    for a in 2..=5 {
        for s in a - 1..=10 {
            let (g, lists) = sharp_family(s, a).map_err(|e| e.to_string())?;
            ensure(g.n() <= 10, || format!("sharp family ({s},{a}) too large"))?;
            ensure(g.edge_count() == brute_t(s, a - 1), || format!("sharp family ({s},{a}) has {} edges", g.edge_count()))?;
            ensure(!has_independent_sdr(&g, &lists), || format!("sharp family ({s},{a}) has an SDR"))?;
            sharp += 1;
        }
    }
    Ok(format!("t matches on s<=20, k<=6; 500 SDRs valid; {sharp} sharp families blocked"))
}

fn type2() -> Outcome {
    let mut checked = 0;
    for q in 1..=6usize {
        let g = complete_bipartite(2, q);
        for f1 in 1..=6 {
            for f2 in 1..=6 {
                let insufficient = f1 * f2 <= q;
                let mut f = vec![f1, f2];
                f.extend(std::iter::repeat_n(2, q));
                let direct = decide(&g, &SizeFunction::new(f).unwrap(), DEFAULT_BUDGET).map_err(|e| e.to_string())?;
                let reduced = type2_insufficient(&[f1, f2], q as u64, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
                ensure(direct.verdict.is_insufficient() == insufficient, || format!("direct verdict wrong at f = ({f1},{f2}), q = {q}"))?;
                ensure(reduced.is_some() == insufficient, || format!("reduced verdict wrong at f = ({f1},{f2}), q = {q}"))?;
                if let Some(w) = reduced {
                    let lists = expand_witness(&w, &[f1, f2], q).map_err(|e| e.to_string())?;
                    ensure(!colorable(&g, &lists.lists), || format!("expanded witness colourable at ({f1},{f2}), q = {q}"))?;
                }
                checked += 1;
            }
        }
    }
    let mut values = Vec::new();
    for q in 1..=6 {
        let direct = sum_choice_type2_exact(2, q, DEFAULT_BUDGET).map_err(|e| e.to_string())?.value;
        let reduced = chi_sc2_reduced(2, q, DEFAULT_BUDGET).map_err(|e| e.to_string())?.value;
        ensure(direct == Some(reduced), || format!("q = {q}: direct {direct:?}, reduced {reduced:?}"))?;
        values.push(reduced.to_string());
    }
    Ok(format!("{checked} size functions agree; chi_sc2(K_2,q) = {}", values.join(",")))
}

fn limits() -> Outcome {
    let start = Instant::now();
    let b2 = beta(2, 1e-6).map_err(|e| e.to_string())?.beta;
    let b3 = beta(3, 1e-4).map_err(|e| e.to_string())?.beta;
    ensure((b2 - 2.0).abs() <= 1e-6, || format!("beta(2) = {b2}"))?;
    ensure((b3 - 12f64.sqrt()).abs() <= 0.05 && (b3 - 3.4641).abs() <= 0.05, || format!("beta(3) = {b3}"))?;
    within(start, Duration::from_secs(600))?;
    Ok(format!("beta(2) = {b2:.6}, beta(3) = {b3:.5}"))
}

fn sorted_vectors(a: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..a {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                let lo = v.last().copied().unwrap_or(1);
                (lo..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn split() -> Outcome {
    let b = split_bounds(2, 5).map_err(|e| e.to_string())?;
    let g = complete_split(2, 5);
    let d = is_sufficient(&g, &b.upper_f, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(d.verdict.is_sufficient(), || format!("G_{{2,5}} upper f {:?}: {:?}", b.upper_f.to_vec(), d.verdict))?;

    let b = split_bounds(3, 4).map_err(|e| e.to_string())?;
    let d = decide(&complete_split(3, 4), &b.upper_f, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(d.verdict.is_sufficient(), || format!("G_{{3,4}} upper f {:?}: {:?}", b.upper_f.to_vec(), d.verdict))?;

    let mut built = 0;
    for a in 1..=4 {
        for s in sorted_vectors(a, 4) {
            for q in 1..=6 {
                let Some(w) = split_witness(&s, q).map_err(|e| e.to_string())? else {
                    continue;
                };
                let g = complete_split(a, q);
                let sizes: Vec<usize> = w.assignment.lists.iter().map(Vec::len).collect();
                let mut want = s.clone();
                want.extend(std::iter::repeat_n(2, q));
                ensure(sizes == want, || format!("witness for {s:?}, q = {q} has sizes {sizes:?}"))?;
                let lib = color_from_lists(&g, &w.assignment).map_err(|e| e.to_string())?;
                ensure(lib.is_none() && !colorable(&g, &w.assignment.lists), || format!("witness for {s:?}, q = {q} is colourable"))?;
                built += 1;
            }
        }
    }
    Ok(format!("upper f sufficient on G_2,5 and G_3,4; {built} witnesses uncolourable"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("closed forms match exact search", closed_forms),
        ("trees have sum choice number 2n-1", trees),
        ("degeneracy bound on planar graphs", degeneracy),
        ("construction is insufficient", construction),
        ("lower and upper bounds sandwich", sandwich),
        ("random process colours type-II instances", random_process),
        ("Turan function and independent SDR", turan),
        ("type-II reduction matches direct search", type2),
        ("limits of the normalised excess", limits),
        ("split graph bounds and witnesses", split),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} [{tag}] {name}: {detail} ({:.1?})", i + 1, start.elapsed());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
