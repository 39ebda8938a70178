//! Exact sum choice numbers at desk scale and the general upper bounds.

use serde::Serialize;

use crate::choosability::{
    color_from_lists, decide, joined_sufficiency, Color, Joined, ListAssignment, SizeFunction, Verdict,
    DEFAULT_BUDGET,
};
use crate::error::{Error, Result};
use crate::graph::{complete_bipartite, degeneracy_order, Graph};
use crate::par;

/// `f(v) = d̂(v) + 1` along the degeneracy order; always sufficient
/// because colouring greedily along the order never runs out.
pub fn greedy_sufficient_f(g: &Graph) -> SizeFunction {
    let order = degeneracy_order(g);
    SizeFunction::new(order.back_degree.iter().map(|d| d + 1).collect()).unwrap()
}

/// `|V| + |E|`.
pub fn edge_bound(g: &Graph) -> usize {
    g.n() + g.edge_count()
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub budget: u64,
    /// Restrict `f(v)` to `deg(v) + 1`; never changes the optimum.
    pub cap_by_degree: bool,
    /// Keep a witness for every rejected `f`.
    pub audit: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_BUDGET, cap_by_degree: true, audit: false }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditEntry {
    pub f: SizeFunction,
    pub witness: ListAssignment,
}

#[derive(Debug, Clone, Serialize)]
pub struct SumChoiceResult {
    /// `None` when the budget ran out; then `lower..=upper` brackets it.
    pub value: Option<usize>,
    pub optimal_f: Option<SizeFunction>,
    pub lower: usize,
    pub upper: usize,
    pub budget_used: u64,
    pub undecided: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<AuditEntry>,
}

/// An insufficient assignment whose uncolourable part avoids `freed`, so
/// it stays insufficient for any `f` below `ceiling`.
struct Refutation {
    ceiling: Vec<usize>,
    lists: ListAssignment,
    freed: Vec<bool>,
}

impl Refutation {
    /// Grows `f` to `caps` on every vertex whose removal keeps the witness
    /// uncolourable.
    fn maximal(g: &Graph, f: &[usize], caps: &[usize], witness: ListAssignment) -> Self {
        let n = g.n();
        let mut freed = vec![false; n];
        for v in 0..n {
            if f[v] == caps[v] {
                continue;
            }
            freed[v] = true;
            let keep: Vec<usize> = (0..n).filter(|&w| !freed[w]).collect();
            let sub = g.induced(&keep);
            let lists = ListAssignment { lists: keep.iter().map(|&w| witness.lists[w].clone()).collect() };
            if color_from_lists(&sub, &lists).unwrap().is_some() {
                freed[v] = false;
            }
        }
        let ceiling = (0..n).map(|v| if freed[v] { caps[v] } else { f[v] }).collect();
        Refutation { ceiling, lists: witness, freed }
    }

    fn covers(&self, f: &[usize]) -> bool {
        f.iter().zip(&self.ceiling).all(|(a, b)| a <= b)
    }

    /// Shrinks (and on freed vertices pads) the stored lists down to `f`.
    fn witness_for(&self, f: &[usize]) -> ListAssignment {
        let mut next: Color = self.lists.lists.iter().flatten().map(|&c| c + 1).max().unwrap_or(0);
        let lists = f
            .iter()
            .enumerate()
            .map(|(v, &size)| {
                let own = &self.lists.lists[v];
                let mut l: Vec<Color> = own.iter().copied().take(size).collect();
                if self.freed[v] {
                    while l.len() < size {
                        l.push(next);
                        next += 1;
                    }
                }
                l
            })
            .collect();
        ListAssignment { lists }
    }
}

/// Lexicographic enumeration of vectors with entries in `1..=caps[v]`
/// summing to `k`.
fn vectors_with_sum(caps: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(caps: &[usize], v: usize, left: usize, suffix_max: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if v == caps.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest_min = caps.len() - v - 1;
        for x in 1..=caps[v] {
            if x + rest_min > left {
                break;
            }
            if left - x > suffix_max[v + 1] {
                continue;
            }
            cur.push(x);
            go(caps, v + 1, left - x, suffix_max, cur, out);
            cur.pop();
        }
    }
    let mut suffix_max = vec![0; caps.len() + 1];
    for v in (0..caps.len()).rev() {
        suffix_max[v] = suffix_max[v + 1] + caps[v];
    }
    let mut out = Vec::new();
    go(caps, 0, k, &suffix_max, &mut Vec::new(), &mut out);
    out
}

/// Vertex groups whose members are interchangeable, so `f` only needs to
/// be tried nondecreasing inside each group.
fn symmetric_groups(g: &Graph) -> Vec<Vec<usize>> {
    let Some(j) = Joined::detect(g) else {
        return Vec::new();
    };
    let mut groups = vec![j.q.clone()];
    let m = j.a.len();
    let inner_edges = j.inner.edge_count();
    if inner_edges == 0 || inner_edges == m * (m.saturating_sub(1)) / 2 {
        groups.push(j.a.clone());
    }
    groups
}

fn respects_groups(f: &[usize], groups: &[Vec<usize>]) -> bool {
    groups.iter().all(|grp| grp.windows(2).all(|w| f[w[0]] <= f[w[1]]))
}

/// Candidates checked between cache updates; fixed so results do not
/// depend on the worker count.
const BATCH: usize = 64;

/// Minimum of `Σf` over sufficient `f`, searching `k` upwards from `n` and
/// each level in lexicographic order. The first sufficient `f` found is
/// the reported optimum.
pub fn sum_choice_exact(g: &Graph, opts: &SearchOptions) -> Result<SumChoiceResult> {
    let n = g.n();
    let greedy = greedy_sufficient_f(g);
    let upper = greedy.total();
    let caps: Vec<usize> = (0..n)
        .map(|v| if opts.cap_by_degree { g.degree(v) + 1 } else { upper - (n - 1) })
        .collect();
    let groups = symmetric_groups(g);
    let mut refutations: Vec<Refutation> = Vec::new();
    let mut witnesses = Vec::new();
    let mut used = 0u64;

    for k in n..=upper {
        let candidates: Vec<Vec<usize>> = vectors_with_sum(&caps, k)
            .into_iter()
            .filter(|f| respects_groups(f, &groups))
            .collect();
        let mut undecided = false;
        for batch in candidates.chunks(BATCH) {
            let open: Vec<&Vec<usize>> = batch
                .iter()
                .filter(|f| match refutations.iter().find(|r| r.covers(f)) {
                    Some(r) => {
                        if opts.audit {
                            witnesses.push(AuditEntry {
                                f: SizeFunction::new(f.to_vec()).unwrap(),
                                witness: r.witness_for(f),
                            });
                        }
                        false
                    }
                    None => true,
                })
                .collect();
            let decisions = par::map(&open, |f| {
                let sf = SizeFunction::new(f.to_vec()).unwrap();
                decide(g, &sf, opts.budget)
            });
            for (f, d) in open.iter().zip(decisions) {
                let d = d?;
                used += d.visited;
                match d.verdict {
                    Verdict::Sufficient => {
                        return Ok(SumChoiceResult {
                            value: (!undecided).then_some(k),
                            optimal_f: Some(SizeFunction::new(f.to_vec()).unwrap()),
                            lower: k,
                            upper: k,
                            budget_used: used,
                            undecided,
                            witnesses,
                        });
                    }
                    Verdict::Insufficient { witness } => {
                        if opts.audit {
                            witnesses.push(AuditEntry {
                                f: SizeFunction::new(f.to_vec()).unwrap(),
                                witness: witness.clone(),
                            });
                        }
                        refutations.push(Refutation::maximal(g, f, &caps, witness));
                    }
                    Verdict::Undecided { .. } => undecided = true,
                }
            }
        }
        if undecided {
            return Ok(SumChoiceResult {
                value: None,
                optimal_f: None,
                lower: k,
                upper,
                budget_used: used,
                undecided: true,
                witnesses,
            });
        }
    }
    // the greedy function is sufficient, so the loop always returns; kept
    // for graphs with no vertices
    Ok(SumChoiceResult {
        value: Some(upper),
        optimal_f: Some(greedy),
        lower: upper,
        upper,
        budget_used: used,
        undecided: false,
        witnesses,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Type2Exact {
    pub value: Option<usize>,
    pub optimal_a: Option<Vec<usize>>,
    pub lower: usize,
    pub upper: usize,
}

/// Nondecreasing vectors of length `a` with entries in `1..=cap` and sum
/// `k`, lexicographic.
pub(crate) fn sorted_vectors(a: usize, cap: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(a: usize, cap: usize, min: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == a {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let slots = a - cur.len();
        for x in min..=cap {
            if x * slots > left {
                break;
            }
            if left - x > cap * (slots - 1) {
                continue;
            }
            cur.push(x);
            go(a, cap, x, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(a, cap, 1, k, &mut Vec::new(), &mut out);
    out
}

/// Minimum of `2q + Σ_A f` over sufficient `f` on `K_{a,q}` with `f = 2`
/// on every Q vertex, brute force over A-side sizes.
pub fn sum_choice_type2_exact(a: usize, q: usize, budget: u64) -> Result<Type2Exact> {
    if a == 0 || q == 0 {
        return Err(Error::InvalidParameter("a and q must be positive".into()));
    }
    let g = complete_bipartite(a, q);
    let j = Joined::detect(&g).unwrap();
    let cap = q + 1;
    for k in a..=a * cap {
        let mut undecided = false;
        for fa in sorted_vectors(a, cap, k) {
            let mut f = fa.clone();
            f.extend(std::iter::repeat_n(2, q));
            let d = joined_sufficiency(&j, &SizeFunction::new(f)?, a + q, budget)?;
            match d.verdict {
                Verdict::Sufficient if !undecided => {
                    return Ok(Type2Exact {
                        value: Some(2 * q + k),
                        optimal_a: Some(fa),
                        lower: 2 * q + k,
                        upper: 2 * q + k,
                    });
                }
                Verdict::Sufficient => {
                    return Ok(Type2Exact { value: None, optimal_a: None, lower: 2 * q + k, upper: 2 * q + k });
                }
                Verdict::Undecided { .. } => undecided = true,
                Verdict::Insufficient { .. } => {}
            }
        }
        if undecided {
            return Ok(Type2Exact { value: None, optimal_a: None, lower: 2 * q + k, upper: 2 * q + a * cap });
        }
    }
    unreachable!("f = q + 1 on A is always sufficient")
}
