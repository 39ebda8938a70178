//! Brute-force oracles shared by the integration tests. None of them call
//! into the search code they are used to check.

#![allow(dead_code)]

use sumchoice::graph::Graph;

/// Backtracking list colouring over vertices in index order.
pub fn colorable(g: &Graph, lists: &[Vec<u32>]) -> bool {
    fn go(g: &Graph, lists: &[Vec<u32>], color: &mut Vec<u32>) -> bool {
        let v = color.len();
        if v == lists.len() {
            return true;
        }
        for &c in &lists[v] {
            if (0..v).all(|u| color[u] != c || !g.has_edge(u, v)) {
                color.push(c);
                if go(g, lists, color) {
                    return true;
                }
                color.pop();
            }
        }
        false
    }
    assert_eq!(g.n(), lists.len());
    go(g, lists, &mut Vec::new())
}

pub fn is_proper(g: &Graph, lists: &[Vec<u32>], color: &[u32]) -> bool {
    color.len() == g.n()
        && color.iter().zip(lists).all(|(c, l)| l.contains(c))
        && g.edges().iter().all(|&(u, v)| color[u] != color[v])
}

/// Every `f`-assignment over colours `0..universe`, up to nothing.
pub fn all_assignments(f: &[usize], universe: u32) -> Vec<Vec<Vec<u32>>> {
    fn subsets(k: usize, universe: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for mask in 0u32..1 << universe {
            if mask.count_ones() as usize == k {
                out.push((0..universe).filter(|c| mask >> c & 1 == 1).collect());
            }
        }
        out
    }
    let mut out = vec![Vec::new()];
    for &k in f {
        let choices = subsets(k, universe);
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Vec<u32>>| {
                choices.iter().map(move |s| {
                    let mut p = prefix.clone();
                    p.push(s.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// Sufficiency by trying every assignment over `Σf` colours.
pub fn brute_sufficient(g: &Graph, f: &[usize]) -> bool {
    let universe = f.iter().sum::<usize>() as u32;
    all_assignments(f, universe).iter().all(|l| colorable(g, l))
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Lexicographically least sorted edge list over all relabellings.
pub fn canonical_edges(n: usize, edges: &[(usize, usize)], perms: &[Vec<usize>]) -> Vec<(usize, usize)> {
    perms
        .iter()
        .map(|p| {
            let mut e: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v]))).collect();
            e.sort_unstable();
            e
        })
        .min()
        .unwrap_or_else(|| {
            assert_eq!(n, 0);
            Vec::new()
        })
}

/// Representatives of every isomorphism class of trees on `n` vertices,
/// found by filtering all `(n-1)`-edge subsets for connectivity.
pub fn brute_trees(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let m = n.saturating_sub(1);
    for mask in 0u64..1 << pairs.len() {
        if mask.count_ones() as usize != m {
            continue;
        }
        let edges: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        if !connected(n, &edges) {
            continue;
        }
        if seen.insert(canonical_edges(n, &edges, &perms)) {
            out.push(Graph::new(n, edges).unwrap());
        }
    }
    out
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        parent[a] = b;
    }
    (0..n).map(|x| find(&mut parent, x)).collect::<std::collections::BTreeSet<_>>().len() <= 1
}

/// Minimum of `Σ C(d_i, 2)` over all compositions of `s` into `k` parts,
/// by dynamic programming over the last part.
pub fn brute_t(s: usize, k: usize) -> usize {
    let c2 = |d: usize| d * d.saturating_sub(1) / 2;
    let mut best: Vec<usize> = (0..=s).map(c2).collect();
    for _ in 1..k {
        best = (0..=s).map(|total| (0..=total).map(|d| c2(d) + best[total - d]).min().unwrap()).collect();
    }
    best[s]
}

/// Distinct, pairwise non-adjacent representatives, one per list.
pub fn has_independent_sdr(g: &Graph, lists: &[Vec<usize>]) -> bool {
    fn go(g: &Graph, lists: &[Vec<usize>], chosen: &mut Vec<usize>) -> bool {
        let Some(list) = lists.get(chosen.len()) else {
            return true;
        };
        for &v in list {
            if !chosen.contains(&v) && chosen.iter().all(|&u| !g.has_edge(u, v)) {
                chosen.push(v);
                if go(g, lists, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    go(g, lists, &mut Vec::new())
}

/// Whether some colour set hits every A-list and contains no Q-list,
/// checked over every subset of the colours in use.
pub fn brute_transversal(a_lists: &[Vec<u32>], q_lists: &[Vec<u32>]) -> bool {
    let mut colors: Vec<u32> = a_lists.iter().chain(q_lists).flatten().copied().collect();
    colors.sort_unstable();
    colors.dedup();
    assert!(colors.len() <= 24);
    (0u32..1 << colors.len()).any(|mask| {
        let inside = |c: &u32| mask >> colors.binary_search(c).unwrap() & 1 == 1;
        a_lists.iter().all(|l| l.iter().any(inside)) && q_lists.iter().all(|l| !l.iter().all(inside))
    })
}
