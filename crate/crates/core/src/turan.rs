//! The Turán-type function `t(s,k)`, the greedy independent system of
//! distinct representatives, and bounds and insufficient assignments for
//! complete split graphs `G_{a,q}`.

use serde::Serialize;

use crate::choosability::{Color, ListAssignment, SizeFunction};
use crate::error::{Error, Result};
use crate::graph::{disjoint_cliques, Graph};

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Minimum of `Σ C(d_i, 2)` over `k` non-negative parts summing to `s`.
pub fn t_balanced(s: usize, k: usize) -> usize {
    assert!(k >= 1, "t(s,k) needs k >= 1");
    let (m, r) = (s / k, s % k);
    r * choose2(m + 1) + (k - r) * choose2(m)
}

/// Part sizes of the balanced split, larger parts first.
pub fn balanced_parts(s: usize, k: usize) -> Vec<usize> {
    let (m, r) = (s / k, s % k);
    (0..k).map(|i| if i < r { m + 1 } else { m }).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SdrStep {
    pub vertex: usize,
    pub list: usize,
    /// Closed neighbourhood of `vertex` in the remaining graph.
    pub neighborhood: Vec<usize>,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SdrResult {
    /// `representatives[k]` is taken from list `list_indices[k]`.
    pub representatives: Vec<usize>,
    pub list_indices: Vec<usize>,
    pub steps: Vec<SdrStep>,
}

impl SdrResult {
    /// Representative chosen for each list, in list order.
    pub fn by_list(&self) -> Vec<usize> {
        let mut out = vec![0; self.list_indices.len()];
        for (&i, &u) in self.list_indices.iter().zip(&self.representatives) {
            out[i] = u;
        }
        out
    }

    pub fn is_valid_for(&self, g: &Graph, lists: &[Vec<usize>]) -> bool {
        let mut seen = self.list_indices.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == lists.len()
            && self.list_indices.len() == lists.len()
            && self.list_indices.iter().zip(&self.representatives).all(|(&i, u)| lists[i].contains(u))
            && g.is_independent(&self.representatives)
    }
}

/// Greedy search for pairwise non-adjacent distinct representatives of
/// `lists`, which must all have the same size.
///
/// Each step takes a minimum-degree vertex of the graph induced on the
/// still-available vertices of the unused lists (lowest index on ties),
/// assigns it to the lowest unused list containing it, and deletes its
/// closed neighbourhood.
pub fn independent_sdr(g: &Graph, lists: &[Vec<usize>]) -> Result<Option<SdrResult>> {
    if let Some(first) = lists.first() {
        if let Some(bad) = lists.iter().find(|l| l.len() != first.len()) {
            return Err(Error::SizeMismatch { expected: first.len(), got: bad.len() });
        }
    }
    if let Some(&v) = lists.iter().flatten().find(|&&v| v >= g.n()) {
        return Err(Error::InvalidParameter(format!("list vertex {v} outside a graph on {} vertices", g.n())));
    }
    let mut used = vec![false; lists.len()];
    let mut removed = vec![false; g.n()];
    let mut result = SdrResult { representatives: Vec::new(), list_indices: Vec::new(), steps: Vec::new() };
    for _ in 0..lists.len() {
        let mut alive = vec![false; g.n()];
        for (i, l) in lists.iter().enumerate() {
            if !used[i] {
                for &v in l {
                    alive[v] = !removed[v];
                }
            }
        }
        let degree = |v: usize| g.neighbors(v).iter().filter(|&&w| alive[w]).count();
        let Some(u) = (0..g.n()).filter(|&v| alive[v]).min_by_key(|&v| (degree(v), v)) else {
            return Ok(None);
        };
        let list = (0..lists.len()).find(|&i| !used[i] && lists[i].contains(&u)).unwrap();
        let mut neighborhood: Vec<usize> = g.neighbors(u).iter().copied().filter(|&w| alive[w]).collect();
        neighborhood.push(u);
        neighborhood.sort_unstable();
        for &w in &neighborhood {
            removed[w] = true;
        }
        used[list] = true;
        result.representatives.push(u);
        result.list_indices.push(list);
        result.steps.push(SdrStep { vertex: u, list, d: neighborhood.len(), neighborhood });
    }
    Ok(Some(result))
}

/// `a - 1` near-equal cliques on `s` vertices with all `a` lists equal to
/// the whole vertex set.
pub fn sharp_family(s: usize, a: usize) -> Result<(Graph, Vec<Vec<usize>>)> {
    if a < 2 || s + 1 < a {
        return Err(Error::Precondition(format!("need s >= a - 1 >= 1, got s = {s}, a = {a}")));
    }
    let g = disjoint_cliques(&balanced_parts(s, a - 1));
    Ok((g, vec![(0..s).collect(); a]))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitBounds {
    pub s: usize,
    pub lower: f64,
    pub upper: usize,
    pub upper_f: SizeFunction,
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Bounds on `χ_sc(G_{a,q})` with `s = ⌊3√((a-1)q)⌋` on A and 2 on Q.
pub fn split_bounds(a: usize, q: usize) -> Result<SplitBounds> {
    if !(q > a && a >= 2) {
        return Err(Error::Precondition(format!("split bounds need q > a >= 2, got a = {a}, q = {q}")));
    }
    let s = isqrt(9 * (a - 1) * q);
    if s < a || t_balanced(s, a - 1) <= q {
        return Err(Error::Precondition(format!("side conditions fail for s = {s}")));
    }
    let lower = 2.0 * q as f64 + 0.5 * a as f64 * (((a - 1) * q) as f64).sqrt();
    let mut f = vec![s; a];
    f.extend(std::iter::repeat_n(2, q));
    Ok(SplitBounds { s, lower, upper: 2 * q + a * s, upper_f: SizeFunction::new(f)? })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitCase {
    /// Nested A lists over `i - 1` disjoint cliques, Q lists the edges.
    NestedCliques { i: usize },
    /// Two A lists over a clique of order `s_2` with the edges of a
    /// clique of order `s_2 - s_1` deleted.
    CliqueMinusClique,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitWitness {
    pub case: SplitCase,
    pub assignment: ListAssignment,
}

/// Insufficient assignment for `G_{a,q}` with A sizes `s_vec` (ascending)
/// and 2 on every Q vertex, if one of the two constructions applies.
pub fn split_witness(s_vec: &[usize], q: usize) -> Result<Option<SplitWitness>> {
    if s_vec.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("sizes must be sorted ascending".into()));
    }
    if s_vec.contains(&0) {
        return Err(Error::InvalidParameter("sizes must be positive".into()));
    }
    let a = s_vec.len();
    let mut lists: Vec<Vec<Color>> = vec![Vec::new(); a];
    let mut q_lists: Vec<Vec<Color>> = Vec::new();

    let case = if let Some(i) = (2..=a).find(|&i| q >= t_balanced(s_vec[i - 1], i - 1)) {
        let top = s_vec[i - 1];
        let h = disjoint_cliques(&balanced_parts(top, i - 1));
        for (j, list) in lists.iter_mut().take(i).enumerate() {
            *list = (0..s_vec[j] as Color).collect();
        }
        q_lists = h.edges().iter().map(|&(x, y)| vec![x as Color, y as Color]).collect();
        SplitCase::NestedCliques { i }
    } else if a >= 2 && q >= choose2(s_vec[0]) + s_vec[0] * (s_vec[1] - s_vec[0]) {
        // colours 0..s1 are joined to everything, s1..s2 are pairwise free
        let (s1, s2) = (s_vec[0] as Color, s_vec[1] as Color);
        lists[0] = (0..s1).collect();
        lists[1] = (0..s2).collect();
        for x in 0..s1 {
            for y in x + 1..s2 {
                q_lists.push(vec![x, y]);
            }
        }
        SplitCase::CliqueMinusClique
    } else {
        return Ok(None);
    };

    let mut next = lists.iter().chain(&q_lists).flatten().map(|&c| c + 1).max().unwrap_or(0);
    let mut fresh = |k: usize| {
        let out: Vec<Color> = (next..next + k as Color).collect();
        next += k as Color;
        out
    };
    for (j, list) in lists.iter_mut().enumerate() {
        if list.is_empty() {
            *list = fresh(s_vec[j]);
        }
    }
    while q_lists.len() < q {
        q_lists.push(fresh(2));
    }
    lists.extend(q_lists);
    Ok(Some(SplitWitness { case, assignment: ListAssignment { lists } }))
}
