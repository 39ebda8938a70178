mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sumchoice::choosability::{
    color_from_lists, decide, enumerate_canonical_assignments, is_sufficient, transversal_check, ListAssignment, SizeFunction, DEFAULT_BUDGET,
};
use sumchoice::graph::{complete_bipartite, complete_split, Graph};
use sumchoice::kaq::{self, LogBase};
use sumchoice::turan::{independent_sdr, split_witness, t_balanced};
use sumchoice::type2::{chi_sc2_reduced, enumerate_blocking, expand_witness, is_blocking, symmetrize, type2_insufficient, ReducedGraph};

use common::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |mask| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::new(n, pairs.zip(mask).filter(|(_, keep)| *keep).map(|(e, _)| e)).unwrap()
        })
    })
}

fn lists_strategy(n: usize, universe: u32, max_len: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
    proptest::collection::vec(proptest::collection::btree_set(0..universe, 1..=max_len), n)
        .prop_map(|ls| ls.into_iter().map(|s| s.into_iter().collect()).collect())
}

fn graph_and_lists() -> impl Strategy<Value = (Graph, Vec<Vec<u32>>)> {
    graph_strategy(6).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), lists_strategy(n, 6, 3))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn coloring_matches_backtracking((g, lists) in graph_and_lists()) {
        let got = color_from_lists(&g, &ListAssignment { lists: lists.clone() }).unwrap();
        prop_assert_eq!(got.is_some(), colorable(&g, &lists));
        if let Some(w) = got {
            prop_assert!(is_proper(&g, &lists, &w.color));
        }
    }

    #[test]
    fn coloring_ignores_colour_names((g, lists) in graph_and_lists(), perm in Just((0..6u32).collect::<Vec<_>>()).prop_shuffle()) {
        let renamed: Vec<Vec<u32>> = lists.iter().map(|l| l.iter().map(|&c| perm[c as usize]).collect()).collect();
        let before = color_from_lists(&g, &ListAssignment { lists }).unwrap().is_some();
        let after = color_from_lists(&g, &ListAssignment::new(renamed)).unwrap().is_some();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn sufficiency_matches_brute_force(g in graph_strategy(4), f in proptest::collection::vec(1usize..=3, 4)) {
        let f: Vec<usize> = f[..g.n()].to_vec();
        prop_assume!(f.iter().sum::<usize>() <= 7);
        let d = is_sufficient(&g, &SizeFunction::new(f.clone()).unwrap(), DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(d.verdict.is_sufficient(), brute_sufficient(&g, &f));
        if let Some(w) = d.verdict.witness() {
            prop_assert_eq!(w.sizes(), f);
            prop_assert!(!colorable(&g, &w.lists));
        }
    }

    #[test]
    fn sufficiency_is_monotone(g in graph_strategy(4), f in proptest::collection::vec(1usize..=3, 4), v in 0usize..4) {
        let f: Vec<usize> = f[..g.n()].to_vec();
        let v = v % g.n();
        let mut bigger = f.clone();
        bigger[v] += 1;
        let small = decide(&g, &SizeFunction::new(f).unwrap(), DEFAULT_BUDGET).unwrap();
        let large = decide(&g, &SizeFunction::new(bigger).unwrap(), DEFAULT_BUDGET).unwrap();
        prop_assert!(!small.verdict.is_sufficient() || large.verdict.is_sufficient());
    }

    #[test]
    fn transversal_matches_colouring(a in 1usize..=3, q in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut list = |len: usize| -> Vec<u32> {
            let mut l: Vec<u32> = rand::seq::index::sample(&mut rng, 5, len).into_iter().map(|c| c as u32).collect();
            l.sort_unstable();
            l
        };
        let a_lists: Vec<Vec<u32>> = (0..a).map(|_| list(1 + seed as usize % 3)).collect();
        let q_lists: Vec<Vec<u32>> = (0..q).map(|i| list(1 + (seed as usize >> i) % 2)).collect();
        let all: Vec<Vec<u32>> = a_lists.iter().chain(&q_lists).cloned().collect();
        let g = complete_bipartite(a, q);
        let t = transversal_check(&a_lists, &q_lists);
        prop_assert_eq!(t.is_some(), colorable(&g, &all));
        prop_assert_eq!(t.is_some(), brute_transversal(&a_lists, &q_lists));
    }

    #[test]
    fn canonical_assignments_cover_every_class(f in proptest::collection::vec(1usize..=2, 1..=3)) {
        let universe = f.iter().sum::<usize>() as u32;
        let perms = permutations(universe as usize);
        let canon = |lists: &[Vec<u32>]| -> Vec<Vec<u32>> {
            perms
                .iter()
                .map(|p| lists.iter().map(|l| {
                    let mut m: Vec<u32> = l.iter().map(|&c| p[c as usize] as u32).collect();
                    m.sort_unstable();
                    m
                }).collect::<Vec<_>>())
                .min()
                .unwrap()
        };
        let classes: BTreeSet<_> = all_assignments(&f, universe).iter().map(|l| canon(l)).collect();
        let produced: Vec<ListAssignment> = enumerate_canonical_assignments(&SizeFunction::new(f.clone()).unwrap()).collect();
        let images: BTreeSet<_> = produced.iter().map(|l| canon(&l.lists)).collect();
        prop_assert_eq!(produced.len(), classes.len());
        prop_assert_eq!(images, classes);
    }

    #[test]
    fn turan_matches_compositions(s in 0usize..=24, k in 1usize..=7) {
        prop_assert_eq!(t_balanced(s, k), brute_t(s, k));
        prop_assert!(t_balanced(s, k + 1) <= t_balanced(s, k));
    }

    #[test]
    fn sdr_is_valid_when_found(g in graph_strategy(8), a in 1usize..=4, seed in any::<u64>()) {
        let n = g.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = 1 + seed as usize % n;
        let lists: Vec<Vec<usize>> = (0..a)
            .map(|_| {
                let mut l = rand::seq::index::sample(&mut rng, n, len).into_vec();
                l.sort_unstable();
                l
            })
            .collect();
        if let Some(r) = independent_sdr(&g, &lists).unwrap() {
            let reps = r.by_list();
            prop_assert_eq!(reps.iter().collect::<BTreeSet<_>>().len(), a);
            prop_assert!(reps.iter().zip(&lists).all(|(v, l)| l.contains(v)));
            prop_assert!(g.is_independent(&reps));
            prop_assert!(has_independent_sdr(&g, &lists));
        }
        if a >= 2 && g.edge_count() < t_balanced(len, a - 1) {
            prop_assert!(independent_sdr(&g, &lists).unwrap().is_some());
        }
    }

    #[test]
    fn split_witnesses_are_uncolourable(s in proptest::collection::vec(1usize..=5, 1..=3), q in 1usize..=6) {
        let mut s = s;
        s.sort_unstable();
        if let Some(w) = split_witness(&s, q).unwrap() {
            prop_assert!(!colorable(&complete_split(s.len(), q), &w.assignment.lists));
        }
    }

    #[test]
    fn lb_witnesses_are_uncolourable(f_a in proptest::collection::vec(1usize..=4, 1..=4), f_q in proptest::collection::vec(1usize..=3, 1..=8)) {
        let (a, q) = (f_a.len(), f_q.len());
        if let Some(w) = kaq::lb_witness(&f_a, &f_q, q).unwrap() {
            let mut sizes = f_a.clone();
            sizes.extend(&f_q);
            prop_assert_eq!(w.assignment.sizes(), sizes);
            prop_assert!(!colorable(&complete_bipartite(a, q), &w.assignment.lists));
        }
    }

    #[test]
    fn random_trace_is_consistent(a in 1usize..=4, q in 1usize..=30, r in 2usize..=12, seed in any::<u64>()) {
        let (la, lq) = kaq::random_type2_assignment(a, q, r, 2 * r, seed).unwrap();
        let p = kaq::default_p(a as u64, q as u64);
        for trace in kaq::random_trials(&la, &lq, p, seed, 8).unwrap() {
            let picked: BTreeSet<u32> = trace.picked.iter().copied().collect();
            prop_assert!(trace.transversal.iter().all(|c| picked.contains(c)));
            prop_assert_eq!(trace.spanned, lq.iter().filter(|l| l.iter().all(|c| picked.contains(c))).count());
            prop_assert!(lq.iter().all(|l| !l.iter().all(|c| trace.transversal.contains(c))));
            let hits_all = la.iter().all(|l| l.iter().any(|c| trace.transversal.contains(c)));
            prop_assert_eq!(trace.success, hits_all);
            prop_assert!(!trace.counting_condition() || trace.success);
            for (h, l) in trace.hits.iter().zip(&la) {
                prop_assert_eq!(*h, l.iter().filter(|c| picked.contains(c)).count());
            }
        }
    }

    #[test]
    fn symmetrize_keeps_insufficiency(seed in any::<u64>(), a in 2usize..=3) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a_lists: Vec<Vec<u32>> = (0..a)
            .map(|_| {
                let mut l: Vec<u32> = rand::seq::index::sample(&mut rng, 6, 2).into_iter().map(|c| c as u32).collect();
                l.sort_unstable();
                l
            })
            .collect();
        let mut edges = Vec::new();
        for u in 0..6u32 {
            for v in u + 1..6 {
                if rng.gen_bool(0.6) {
                    edges.push((u, v));
                }
            }
        }
        let q_lists: Vec<Vec<u32>> = edges.iter().map(|&(u, v)| vec![u, v]).collect();
        match symmetrize(&a_lists, &edges) {
            Err(_) => prop_assert!(brute_transversal(&a_lists, &q_lists)),
            Ok(s) => {
                prop_assert!(!brute_transversal(&a_lists, &q_lists));
                let after: Vec<Vec<u32>> = s.edges.iter().map(|&(u, v)| vec![u, v]).collect();
                prop_assert!(!brute_transversal(&a_lists, &after));
                prop_assert!(s.edges.len() <= edges.len());
                prop_assert!(is_blocking(&s.r, a).unwrap());
            }
        }
    }

    #[test]
    fn blocking_ignores_index_names(idx in 0usize..227, perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let all = enumerate_blocking(3).unwrap();
        let r = &all[idx % all.len()];
        prop_assert!(is_blocking(&r.permute(&perm), 3).unwrap());
        prop_assert_eq!(r.permute(&perm).canonical(3), r.clone());
    }

    #[test]
    fn type2_witnesses_expand_to_uncolourable(f in proptest::collection::vec(1usize..=4, 2..=3), q in 1usize..=5) {
        let a = f.len();
        if let Some(w) = type2_insufficient(&f, q as u64, DEFAULT_BUDGET).unwrap() {
            let lists = expand_witness(&w, &f, q).unwrap();
            let mut sizes = f.clone();
            sizes.extend(std::iter::repeat_n(2, q));
            prop_assert_eq!(lists.sizes(), sizes);
            prop_assert!(!colorable(&complete_bipartite(a, q), &lists.lists));
        }
    }

    #[test]
    fn bounds_sandwich_closed_forms(a in 2u64..=3, q in 40u64..=400) {
        let mid = kaq::closed_form(a, q).unwrap() as f64;
        prop_assert!(mid <= kaq::ub_bound(a, q).unwrap() as f64);
        if let Ok(lb) = kaq::lb_bound(a, q, LogBase::Natural) {
            prop_assert!(lb <= mid);
        }
    }
}

/// Blocking by definition: every set of atoms whose union is `[a]`
/// contains both ends of some edge.
fn blocking_by_definition(vs: &[u32], edges: &[(usize, usize)], a: usize) -> bool {
    let full = (1u32 << a) - 1;
    (1u32..1 << vs.len()).all(|c| {
        let union = (0..vs.len()).filter(|&i| c >> i & 1 == 1).fold(0, |m, i| m | vs[i]);
        union != full || edges.iter().any(|&(u, v)| c >> u & 1 == 1 && c >> v & 1 == 1)
    })
}

fn relabel(atom: u32, perm: &[usize]) -> u32 {
    (0..perm.len()).filter(|&i| atom >> i & 1 == 1).fold(0, |m, i| m | 1 << perm[i])
}

fn brute_blocking_classes(a: usize) -> BTreeSet<(Vec<u32>, Vec<(u32, u32)>)> {
    let atoms: Vec<u32> = (1..1u32 << a).collect();
    let perms = permutations(a);
    let mut out = BTreeSet::new();
    for vmask in 1u32..1 << atoms.len() {
        let vs: Vec<u32> = (0..atoms.len()).filter(|&i| vmask >> i & 1 == 1).map(|i| atoms[i]).collect();
        if vs.iter().fold(0, |m, &v| m | v) != (1 << a) - 1 {
            continue;
        }
        let pairs: Vec<(usize, usize)> = (0..vs.len()).flat_map(|u| (u + 1..vs.len()).map(move |v| (u, v))).collect();
        for emask in 0u64..1 << pairs.len() {
            let edges: Vec<(usize, usize)> = (0..pairs.len()).filter(|k| emask >> k & 1 == 1).map(|k| pairs[k]).collect();
            if !blocking_by_definition(&vs, &edges, a) {
                continue;
            }
            let image = perms
                .iter()
                .map(|p| {
                    let mut v: Vec<u32> = vs.iter().map(|&x| relabel(x, p)).collect();
                    v.sort_unstable();
                    let mut e: Vec<(u32, u32)> = edges
                        .iter()
                        .map(|&(x, y)| {
                            let (x, y) = (relabel(vs[x], p), relabel(vs[y], p));
                            (x.min(y), x.max(y))
                        })
                        .collect();
                    e.sort_unstable();
                    (v, e)
                })
                .min()
                .unwrap();
            out.insert(image);
        }
    }
    out
}

fn as_pairs(rs: &[ReducedGraph]) -> BTreeSet<(Vec<u32>, Vec<(u32, u32)>)> {
    rs.iter().map(|r| (r.vertices.clone(), r.edges.clone())).collect()
}

#[test]
fn blocking_classes_match_definition() {
    for a in 1..=3 {
        let listed = enumerate_blocking(a).unwrap();
        let brute = brute_blocking_classes(a);
        assert_eq!(listed.len(), brute.len(), "a = {a}");
        assert_eq!(as_pairs(&listed), brute, "a = {a}");
    }
}

#[test]
fn excess_over_2q_is_nondecreasing() {
    let values: Vec<usize> = (1..=12).map(|q| chi_sc2_reduced(2, q, DEFAULT_BUDGET).unwrap().value - 2 * q).collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]), "{values:?}");
    for (q, v) in (1..=12u64).zip(&values) {
        assert_eq!(kaq::closed_form(2, q).unwrap() - 2 * q, *v as u64, "q = {q}");
    }
}
