//! List colouring and sufficiency of size functions.
//!
//! Sufficiency is decided by exhausting f-assignments up to colour
//! relabelling. An f-assignment is determined, up to relabelling, by how
//! many colours carry each vertex-membership pattern, so the enumerator
//! keeps the colours seen so far grouped by pattern and, at each vertex,
//! only chooses how many colours to take from every group (always the
//! lowest ones). That yields exactly one assignment per relabelling class.

use std::collections::HashSet;
use std::ops::Deref;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par;

pub type Color = u32;

/// Default cap on visited assignments before a search gives up.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Per-vertex list sizes, all at least one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SizeFunction(Vec<usize>);

impl SizeFunction {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if let Some(v) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidParameter(format!("f({v}) = 0 is trivially insufficient")));
        }
        Ok(SizeFunction(sizes))
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl Deref for SizeFunction {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

/// Concrete colour lists, one sorted list per vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ListAssignment {
    pub lists: Vec<Vec<Color>>,
}

impl ListAssignment {
    pub fn new(mut lists: Vec<Vec<Color>>) -> Self {
        for l in &mut lists {
            l.sort_unstable();
            l.dedup();
        }
        ListAssignment { lists }
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.lists.iter().map(Vec::len).collect()
    }

    pub fn color_count(&self) -> usize {
        let mut all: Vec<Color> = self.lists.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoringWitness {
    pub color: Vec<Color>,
}

impl ColoringWitness {
    pub fn is_proper_for(&self, g: &Graph, lists: &ListAssignment) -> bool {
        self.color.len() == g.n()
            && (0..g.n()).all(|v| lists.lists[v].binary_search(&self.color[v]).is_ok())
            && g.edges().iter().all(|&(u, v)| self.color[u] != self.color[v])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Sufficient,
    Insufficient { witness: ListAssignment },
    /// The budget ran out before a decision; never a guess.
    Undecided { visited: u64 },
}

impl Verdict {
    pub fn is_sufficient(&self) -> bool {
        matches!(self, Verdict::Sufficient)
    }

    pub fn is_insufficient(&self) -> bool {
        matches!(self, Verdict::Insufficient { .. })
    }

    pub fn witness(&self) -> Option<&ListAssignment> {
        match self {
            Verdict::Insufficient { witness } => Some(witness),
            _ => None,
        }
    }
}

/// A verdict together with the number of assignments it took.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub visited: u64,
}

struct Budget {
    cap: u64,
    used: AtomicU64,
    blown: AtomicBool,
}

impl Budget {
    fn new(cap: u64) -> Self {
        Budget { cap, used: AtomicU64::new(0), blown: AtomicBool::new(false) }
    }

    /// Charges one unit; false once the cap is passed.
    fn charge(&self) -> bool {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.cap {
            self.blown.store(true, Ordering::Relaxed);
            return false;
        }
        !self.blown.load(Ordering::Relaxed)
    }
}

fn check_lists(g: &Graph, lists: &ListAssignment) -> Result<()> {
    if lists.lists.len() != g.n() {
        return Err(Error::SizeMismatch { expected: g.n(), got: lists.lists.len() });
    }
    if let Some(v) = lists.lists.iter().position(Vec::is_empty) {
        return Err(Error::InvalidParameter(format!("list of vertex {v} is empty")));
    }
    Ok(())
}

/// Backtracking list colouring of the vertices `0..limit`, most-constrained
/// vertex first, colours ascending.
fn color_prefix(adj: &[Vec<usize>], lists: &[Vec<Color>], limit: usize) -> Option<Vec<Color>> {
    const NONE: Color = Color::MAX;
    fn go(adj: &[Vec<usize>], lists: &[Vec<Color>], limit: usize, color: &mut [Color], left: usize) -> bool {
        if left == 0 {
            return true;
        }
        let mut best: Option<(usize, usize)> = None;
        for v in 0..limit {
            if color[v] != NONE {
                continue;
            }
            let free = lists[v]
                .iter()
                .filter(|&&c| adj[v].iter().all(|&w| w >= limit || color[w] != c))
                .count();
            if best.is_none_or(|(b, _)| free < b) {
                best = Some((free, v));
                if free == 0 {
                    return false;
                }
            }
        }
        let (_, v) = best.unwrap();
        for &c in &lists[v] {
            if adj[v].iter().all(|&w| w >= limit || color[w] != c) {
                color[v] = c;
                if go(adj, lists, limit, color, left - 1) {
                    return true;
                }
            }
        }
        color[v] = NONE;
        false
    }
    let mut color = vec![NONE; limit];
    go(adj, lists, limit, &mut color, limit).then_some(color)
}

fn adjacency(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect()
}

/// A proper colouring from the lists, if one exists.
pub fn color_from_lists(g: &Graph, lists: &ListAssignment) -> Result<Option<ColoringWitness>> {
    check_lists(g, lists)?;
    let adj = adjacency(g);
    Ok(color_prefix(&adj, &lists.lists, g.n()).map(|color| ColoringWitness { color }))
}

/// Colours seen so far, grouped by which vertices' lists contain them.
#[derive(Clone, Debug, Default)]
struct ClassState {
    classes: Vec<Vec<Color>>,
    next: Color,
}

impl ClassState {
    /// Every way to pick a list of `size` colours, sorted by the list.
    fn branches(&self, size: usize) -> Vec<(Vec<Color>, ClassState)> {
        let mut counts = vec![0usize; self.classes.len()];
        let mut out = Vec::new();
        self.split(0, size, &mut counts, &mut out);
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    fn split(&self, j: usize, left: usize, counts: &mut Vec<usize>, out: &mut Vec<(Vec<Color>, ClassState)>) {
        if j == self.classes.len() {
            let mut list = Vec::new();
            let mut classes = Vec::new();
            for (class, &c) in self.classes.iter().zip(counts.iter()) {
                list.extend_from_slice(&class[..c]);
                if c > 0 {
                    classes.push(class[..c].to_vec());
                }
                if c < class.len() {
                    classes.push(class[c..].to_vec());
                }
            }
            let fresh: Vec<Color> = (self.next..self.next + left as Color).collect();
            list.extend_from_slice(&fresh);
            list.sort_unstable();
            if !fresh.is_empty() {
                classes.push(fresh);
            }
            out.push((list, ClassState { classes, next: self.next + left as Color }));
            return;
        }
        for c in 0..=left.min(self.classes[j].len()) {
            counts[j] = c;
            self.split(j + 1, left - c, counts, out);
        }
        counts[j] = 0;
    }
}

/// Iterator over one f-assignment per colour-relabelling class, in
/// lexicographic order of the list sequence. Colours come from `0..Σf`.
pub struct CanonicalAssignments {
    sizes: Vec<usize>,
    stack: Vec<std::vec::IntoIter<(Vec<Color>, ClassState)>>,
    lists: Vec<Vec<Color>>,
    started: bool,
}

impl CanonicalAssignments {
    pub fn new(f: &SizeFunction) -> Self {
        CanonicalAssignments { sizes: f.to_vec(), stack: Vec::new(), lists: Vec::new(), started: false }
    }
}

impl Iterator for CanonicalAssignments {
    type Item = ListAssignment;

    fn next(&mut self) -> Option<ListAssignment> {
        let n = self.sizes.len();
        if !self.started {
            self.started = true;
            if n == 0 {
                return Some(ListAssignment { lists: Vec::new() });
            }
            self.stack.push(ClassState::default().branches(self.sizes[0]).into_iter());
        }
        loop {
            let depth = self.stack.len();
            if depth == 0 {
                return None;
            }
            let Some((list, state)) = self.stack[depth - 1].next() else {
                self.stack.pop();
                self.lists.pop();
                continue;
            };
            self.lists.truncate(depth - 1);
            self.lists.push(list);
            if depth == n {
                return Some(ListAssignment { lists: self.lists.clone() });
            }
            self.stack.push(state.branches(self.sizes[depth]).into_iter());
        }
    }
}

pub fn enumerate_canonical_assignments(f: &SizeFunction) -> CanonicalAssignments {
    CanonicalAssignments::new(f)
}

fn check_sizes(g: &Graph, f: &SizeFunction) -> Result<()> {
    if f.len() != g.n() {
        return Err(Error::SizeMismatch { expected: g.n(), got: f.len() });
    }
    Ok(())
}

/// Vertices left after repeatedly deleting any vertex whose list is longer
/// than its remaining degree (such a vertex can always be coloured last).
pub fn core_vertices(g: &Graph, f: &[usize]) -> Vec<usize> {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    while let Some(v) = (0..n).find(|&v| alive[v] && f[v] > deg[v]) {
        alive[v] = false;
        for &w in g.neighbors(v) {
            deg[w] -= 1;
        }
    }
    (0..n).filter(|&v| alive[v]).collect()
}

/// Puts `core` lists back into the full vertex order; every other vertex
/// gets fresh colours nobody else uses.
fn lift(n: usize, f: &[usize], core: &[usize], core_lists: Vec<Vec<Color>>) -> ListAssignment {
    let mut next = core_lists.iter().flatten().map(|&c| c + 1).max().unwrap_or(0);
    let mut lists = vec![Vec::new(); n];
    for (&v, l) in core.iter().zip(core_lists) {
        lists[v] = l;
    }
    for v in 0..n {
        if lists[v].is_empty() {
            lists[v] = (next..next + f[v] as Color).collect();
            next += f[v] as Color;
        }
    }
    ListAssignment { lists }
}

enum Chunk {
    Witness(Vec<Vec<Color>>),
    OutOfBudget,
}

struct Search<'a> {
    adj: Vec<Vec<usize>>,
    sizes: &'a [usize],
    budget: &'a Budget,
}

impl Search<'_> {
    /// Depth-first walk below a prefix of `depth` fixed lists; `coloring`
    /// colours that prefix.
    fn walk(&self, depth: usize, state: &ClassState, lists: &mut Vec<Vec<Color>>, coloring: &mut Vec<Color>, leaves: &AtomicU64) -> Option<Chunk> {
        let n = self.sizes.len();
        for (list, next_state) in state.branches(self.sizes[depth]) {
            lists.push(list);
            let last = depth + 1 == n;
            if last {
                leaves.fetch_add(1, Ordering::Relaxed);
                if !self.budget.charge() {
                    return Some(Chunk::OutOfBudget);
                }
            }
            if !self.extend(depth, lists, coloring) {
                return Some(Chunk::Witness(first_extension(self.sizes, lists.clone(), next_state)));
            }
            if !last {
                if let Some(found) = self.walk(depth + 1, &next_state, lists, coloring, leaves) {
                    return Some(found);
                }
            }
            coloring.truncate(depth);
            lists.pop();
        }
        None
    }

    /// Tries to colour vertex `v` on top of the prefix colouring, falling
    /// back to a full search of `0..=v`.
    fn extend(&self, v: usize, lists: &[Vec<Color>], coloring: &mut Vec<Color>) -> bool {
        let pick = lists[v]
            .iter()
            .copied()
            .find(|&c| self.adj[v].iter().all(|&w| w >= v || coloring[w] != c));
        if let Some(c) = pick {
            coloring.push(c);
            return true;
        }
        match color_prefix(&self.adj, lists, v + 1) {
            Some(full) => {
                *coloring = full;
                true
            }
            None => false,
        }
    }
}

fn first_extension(sizes: &[usize], mut lists: Vec<Vec<Color>>, mut state: ClassState) -> Vec<Vec<Color>> {
    while lists.len() < sizes.len() {
        let (l, s) = state.branches(sizes[lists.len()]).swap_remove(0);
        lists.push(l);
        state = s;
    }
    lists
}

/// Number of leading vertices fixed per parallel chunk.
const CHUNK_TARGET: usize = 32;

/// Decides whether every f-assignment is colourable by exhausting the
/// canonical assignments. The witness is the lexicographically first
/// failing one (after removing vertices with `f(v) > deg(v)`, which get
/// fresh colours in the witness).
pub fn is_sufficient(g: &Graph, f: &SizeFunction, budget: u64) -> Result<Decision> {
    check_sizes(g, f)?;
    let core = core_vertices(g, f);
    if core.is_empty() {
        return Ok(Decision { verdict: Verdict::Sufficient, visited: 0 });
    }
    let h = g.induced(&core);
    let sizes: Vec<usize> = core.iter().map(|&v| f[v]).collect();
    let n = sizes.len();

    // fixed-depth prefixes so chunking does not depend on the thread count
    let mut prefixes: Vec<(Vec<Vec<Color>>, ClassState)> = vec![(Vec::new(), ClassState::default())];
    while prefixes.len() < CHUNK_TARGET && prefixes[0].0.len() + 1 < n {
        prefixes = prefixes
            .into_iter()
            .flat_map(|(lists, state)| {
                let d = lists.len();
                state.branches(sizes[d]).into_iter().map(move |(l, s)| {
                    let mut next = lists.clone();
                    next.push(l);
                    (next, s)
                })
            })
            .collect();
    }

    let pool = Budget::new(budget);
    let search = Search { adj: adjacency(&h), sizes: &sizes, budget: &pool };
    let counts: Vec<AtomicU64> = prefixes.iter().map(|_| AtomicU64::new(0)).collect();
    let indexed: Vec<usize> = (0..prefixes.len()).collect();
    let found = par::find_map_first(&indexed, |&i| {
        let (prefix, state) = &prefixes[i];
        let depth = prefix.len();
        let mut lists = prefix.clone();
        if depth > 0 {
            match color_prefix(&search.adj, &lists, depth) {
                Some(mut coloring) => search
                    .walk(depth, state, &mut lists, &mut coloring, &counts[i])
                    .map(|c| (i, c)),
                None => Some((i, Chunk::Witness(first_extension(&sizes, lists, state.clone())))),
            }
        } else {
            search.walk(0, state, &mut lists, &mut Vec::new(), &counts[i]).map(|c| (i, c))
        }
    });
    let upto = found.as_ref().map_or(counts.len(), |(i, _)| i + 1);
    let visited = counts[..upto].iter().map(|c| c.load(Ordering::Relaxed)).sum();
    let verdict = match found {
        None => Verdict::Sufficient,
        Some((_, Chunk::OutOfBudget)) => Verdict::Undecided { visited: pool.used.load(Ordering::Relaxed) },
        Some((_, Chunk::Witness(core_lists))) => Verdict::Insufficient { witness: lift(g.n(), f, &core, core_lists) },
    };
    Ok(Decision { verdict, visited })
}

/// A colour set hitting every A-list while containing no Q-list entirely;
/// on `K_{a,q}` its existence is exactly L-choosability.
pub fn transversal_check(a_lists: &[Vec<Color>], q_lists: &[Vec<Color>]) -> Option<Vec<Color>> {
    fn bad(t: &[Color], q_lists: &[Vec<Color>]) -> bool {
        q_lists.iter().any(|l| l.iter().all(|c| t.contains(c)))
    }
    fn go(i: usize, a_lists: &[Vec<Color>], q_lists: &[Vec<Color>], t: &mut Vec<Color>) -> bool {
        let Some(j) = (i..a_lists.len()).find(|&j| !a_lists[j].iter().any(|c| t.contains(c))) else {
            return true;
        };
        for &c in &a_lists[j] {
            t.push(c);
            if !bad(t, q_lists) && go(j + 1, a_lists, q_lists, t) {
                return true;
            }
            t.pop();
        }
        false
    }
    let mut t = Vec::new();
    if bad(&t, q_lists) {
        return None;
    }
    go(0, a_lists, q_lists, &mut t).then(|| {
        t.sort_unstable();
        t
    })
}

/// Structure of graphs where an independent side Q is joined to every
/// vertex of A (complete bipartite and complete split graphs).
#[derive(Debug, Clone)]
pub struct Joined {
    pub a: Vec<usize>,
    pub q: Vec<usize>,
    /// Graph induced on A, relabelled to `0..a.len()`.
    pub inner: Graph,
}

impl Joined {
    pub fn detect(g: &Graph) -> Option<Joined> {
        let p = g.parts()?;
        let q_independent = p.q.iter().all(|&v| g.neighbors(v).iter().all(|w| p.a.contains(w)));
        let joined = p.q.iter().all(|&v| g.degree(v) == p.a.len());
        if !(q_independent && joined) {
            return None;
        }
        let mut a = p.a.clone();
        a.sort_unstable();
        let mut q = p.q.clone();
        q.sort_unstable();
        let inner = g.induced(&a);
        Some(Joined { a, q, inner })
    }
}

/// Sufficiency on a joined graph. A-lists are enumerated canonically; for
/// each, the colour sets used by proper colourings of A are collected and
/// the search asks whether the Q-lists can be chosen so that every such set
/// contains a whole Q-list. Q vertices of equal size are interchangeable,
/// so they are consumed in index order.
pub fn joined_sufficiency(j: &Joined, f: &SizeFunction, n: usize, budget: u64) -> Result<Decision> {
    if f.len() != n || j.a.len() + j.q.len() != n {
        return Err(Error::SizeMismatch { expected: n, got: f.len() });
    }
    let mut alive_a: Vec<bool> = vec![true; j.a.len()];
    let mut alive_q: Vec<bool> = vec![true; j.q.len()];
    loop {
        let live_a = alive_a.iter().filter(|&&x| x).count();
        let live_q = alive_q.iter().filter(|&&x| x).count();
        let mut changed = false;
        for (i, &v) in j.q.iter().enumerate() {
            if alive_q[i] && f[v] > live_a {
                alive_q[i] = false;
                changed = true;
            }
        }
        for (i, &v) in j.a.iter().enumerate() {
            let inner_deg = j.inner.neighbors(i).iter().filter(|&&w| alive_a[w]).count();
            if alive_a[i] && f[v] > inner_deg + live_q {
                alive_a[i] = false;
                changed = true;
                break;
            }
        }
        if !changed {
            break;
        }
    }
    let core_a: Vec<usize> = (0..j.a.len()).filter(|&i| alive_a[i]).collect();
    let core_q: Vec<usize> = (0..j.q.len()).filter(|&i| alive_q[i]).collect();
    if core_a.is_empty() {
        return Ok(Decision { verdict: Verdict::Sufficient, visited: 0 });
    }
    let inner = j.inner.induced(&core_a);
    let fa = SizeFunction::new(core_a.iter().map(|&i| f[j.a[i]]).collect())?;
    if fa.total() > 64 {
        return Err(Error::Precondition("A-side list sizes must sum to at most 64".into()));
    }
    let fq: Vec<usize> = core_q.iter().map(|&i| f[j.q[i]]).collect();
    let max_size = fq.iter().copied().max().unwrap_or(0);
    let mut counts = vec![0usize; max_size + 1];
    for &s in &fq {
        counts[s] += 1;
    }

    let pool = Budget::new(budget);
    let a_assignments: Vec<ListAssignment> = CanonicalAssignments::new(&fa).collect();
    let found = par::find_map_first(&a_assignments, |la| {
        if !pool.charge() {
            return Some(Err(()));
        }
        let images = coloring_images(&inner, &la.lists);
        let mut failed = HashSet::new();
        let mut picks = Vec::new();
        let mut killed = vec![false; images.len()];
        match cover(&images, &mut killed, &mut counts.clone(), &mut picks, &mut failed, &pool) {
            Some(Ok(())) => Some(Ok((la.clone(), picks))),
            Some(Err(())) => Some(Err(())),
            None => None,
        }
    });
    let visited = pool.used.load(Ordering::Relaxed);
    let verdict = match found {
        None => Verdict::Sufficient,
        Some(Err(())) => Verdict::Undecided { visited },
        Some(Ok((la, picks))) => {
            let mut lists = vec![Vec::new(); n];
            for (k, &i) in core_a.iter().enumerate() {
                lists[j.a[i]] = la.lists[k].clone();
            }
            let mut used = vec![false; core_q.len()];
            for (size, set) in picks {
                let k = (0..core_q.len()).find(|&k| !used[k] && fq[k] == size).unwrap();
                used[k] = true;
                lists[j.q[core_q[k]]] = (0..64).filter(|b| set >> b & 1 == 1).collect();
            }
            let mut next = la.lists.iter().flatten().map(|&c| c + 1).max().unwrap_or(0);
            for v in 0..n {
                if lists[v].is_empty() {
                    lists[v] = (next..next + f[v] as Color).collect();
                    next += f[v] as Color;
                }
            }
            Verdict::Insufficient { witness: ListAssignment { lists } }
        }
    };
    Ok(Decision { verdict, visited })
}

/// Inclusion-minimal colour sets `{c(u)}` over proper list colourings `c`
/// of `inner`, as bitmasks.
fn coloring_images(inner: &Graph, lists: &[Vec<Color>]) -> Vec<u64> {
    fn go(u: usize, inner: &Graph, lists: &[Vec<Color>], color: &mut Vec<Color>, mask: u64, out: &mut HashSet<u64>) {
        if u == lists.len() {
            out.insert(mask);
            return;
        }
        for &c in &lists[u] {
            if inner.neighbors(u).iter().all(|&w| w >= u || color[w] != c) {
                color.push(c);
                go(u + 1, inner, lists, color, mask | 1 << c, out);
                color.pop();
            }
        }
    }
    let mut all = HashSet::new();
    go(0, inner, lists, &mut Vec::new(), 0, &mut all);
    let mut sets: Vec<u64> = all.into_iter().collect();
    sets.sort_unstable_by_key(|&m| (m.count_ones(), m));
    let mut minimal: Vec<u64> = Vec::new();
    for m in sets {
        if !minimal.iter().any(|&s| s & m == s) {
            minimal.push(m);
        }
    }
    minimal
}

/// Chooses Q-lists (as `(size, mask)`) until every image contains one.
/// `Some(Ok(()))` on success, `None` when impossible, `Some(Err(()))` when
/// the budget ran out.
fn cover(
    images: &[u64],
    killed: &mut Vec<bool>,
    counts: &mut Vec<usize>,
    picks: &mut Vec<(usize, u64)>,
    failed: &mut HashSet<(Vec<bool>, Vec<usize>)>,
    budget: &Budget,
) -> Option<std::result::Result<(), ()>> {
    let target = (0..images.len())
        .filter(|&i| !killed[i])
        .min_by_key(|&i| (images[i].count_ones(), i));
    let Some(t) = target else {
        return Some(Ok(()));
    };
    if !budget.charge() {
        return Some(Err(()));
    }
    let key = (killed.clone(), counts.clone());
    if failed.contains(&key) {
        return None;
    }
    let tau = images[t];
    let colors: Vec<u32> = (0..64).filter(|b| tau >> b & 1 == 1).collect();
    for size in 1..counts.len() {
        if counts[size] == 0 || size > colors.len() {
            continue;
        }
        for subset in subsets_of_size(&colors, size) {
            let newly: Vec<usize> = (0..images.len())
                .filter(|&i| !killed[i] && images[i] & subset == subset)
                .collect();
            for &i in &newly {
                killed[i] = true;
            }
            counts[size] -= 1;
            picks.push((size, subset));
            let r = cover(images, killed, counts, picks, failed, budget);
            if r.is_some() {
                return r;
            }
            picks.pop();
            counts[size] += 1;
            for &i in &newly {
                killed[i] = false;
            }
        }
    }
    failed.insert(key);
    None
}

fn subsets_of_size(colors: &[u32], size: usize) -> Vec<u64> {
    let mut out = Vec::new();
    fn go(colors: &[u32], start: usize, left: usize, mask: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(mask);
            return;
        }
        for i in start..colors.len() {
            go(colors, i + 1, left - 1, mask | 1 << colors[i], out);
        }
    }
    go(colors, 0, size, 0, &mut out);
    out
}

/// Picks the joined-graph route when the graph has that shape and the
/// exhaustive route otherwise.
pub fn decide(g: &Graph, f: &SizeFunction, budget: u64) -> Result<Decision> {
    check_sizes(g, f)?;
    match Joined::detect(g) {
        Some(j) => joined_sufficiency(&j, f, g.n(), budget),
        None => is_sufficient(g, f, budget),
    }
}
