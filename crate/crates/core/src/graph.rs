//! Simple undirected graphs, the named families used throughout the crate,
//! and degeneracy orderings.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bipartite-style part labels. A-side vertices always come first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parts {
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "Q")]
    pub q: Vec<usize>,
}

/// An undirected simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    // adjacency bitsets, only kept for n <= 64
    masks: Option<Vec<u64>>,
    parts: Option<Parts>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parts: Option<Parts>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(raw: GraphJson) -> Result<Self> {
        let g = Graph::new(raw.n, raw.edges.iter().map(|e| (e[0], e[1])))?;
        match raw.parts {
            Some(p) => g.with_parts(p),
            None => Ok(g),
        }
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
            parts: g.parts,
        }
    }
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicates and out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Malformed(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::Malformed(format!("self-loop at {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        let before = list.len();
        list.dedup();
        if list.len() != before {
            return Err(Error::Malformed("duplicate edge".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &list {
            adj[u].push(v);
            adj[v].push(u);
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        let masks = (n <= 64).then(|| {
            adj.iter()
                .map(|nb| nb.iter().fold(0u64, |m, &w| m | (1 << w)))
                .collect()
        });
        Ok(Graph { n, edges: list, adj, masks, parts: None })
    }

    pub fn empty(n: usize) -> Self {
        Graph::new(n, std::iter::empty()).expect("empty graph is valid")
    }

    /// Attaches part labels; they must partition the vertex set.
    pub fn with_parts(mut self, parts: Parts) -> Result<Self> {
        let mut seen = vec![false; self.n];
        for &v in parts.a.iter().chain(&parts.q) {
            if v >= self.n || seen[v] {
                return Err(Error::Malformed(format!("bad part label {v}")));
            }
            seen[v] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Malformed("parts do not cover all vertices".into()));
        }
        self.parts = Some(parts);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn parts(&self) -> Option<&Parts> {
        self.parts.as_ref()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match &self.masks {
            Some(m) => m[u] >> v & 1 == 1,
            None => self.adj[u].binary_search(&v).is_ok(),
        }
    }

    /// Adjacency bitset of `v`, when `n <= 64`.
    pub fn mask(&self, v: usize) -> Option<u64> {
        self.masks.as_ref().map(|m| m[v])
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }

    /// `Some((a, q))` when the graph is exactly `K_{a,q}` with A = `0..a`.
    pub fn as_complete_bipartite(&self) -> Option<(usize, usize)> {
        let p = self.parts.as_ref()?;
        let (a, q) = (p.a.len(), p.q.len());
        if !p.a.iter().copied().eq(0..a) || self.edges.len() != a * q {
            return None;
        }
        let all = self.edges.iter().all(|&(u, v)| u < a && v >= a);
        all.then_some((a, q))
    }

    /// Subgraph induced by `keep` (sorted), relabelled to `0..keep.len()`.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        Graph::new(keep.len(), edges).expect("induced subgraph is valid")
    }
}

/// The named graph families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    CompleteBipartite { a: usize, q: usize },
    CompleteSplit { a: usize, q: usize },
    Path(usize),
    Cycle(usize),
    Complete(usize),
    /// Star on `n` vertices: one centre and `n - 1` leaves.
    Star(usize),
    RandomTree { n: usize, seed: u64 },
    RandomGraph { n: usize, m: usize, seed: u64 },
    DisjointCliques(Vec<usize>),
    Bipyramid(usize),
    Icosahedron,
}

pub const FAMILY_NAMES: &[&str] = &[
    "complete_bipartite",
    "complete_split",
    "path",
    "cycle",
    "complete",
    "star",
    "random_tree",
    "random_graph",
    "disjoint_cliques",
    "bipyramid",
    "icosahedron",
];

fn positive(name: &str, v: u64) -> Result<usize> {
    if v == 0 {
        return Err(Error::InvalidParameter(format!("{name} must be positive")));
    }
    Ok(v as usize)
}

fn arity(kind: &str, params: &[u64], want: usize) -> Result<()> {
    if params.len() != want {
        return Err(Error::InvalidParameter(format!(
            "{kind} takes {want} parameter(s), got {}",
            params.len()
        )));
    }
    Ok(())
}

impl Family {
    /// Parses a family name plus its integer parameters.
    pub fn parse(kind: &str, params: &[u64]) -> Result<Self> {
        Ok(match kind {
            "complete_bipartite" | "complete_split" => {
                arity(kind, params, 2)?;
                let a = positive("a", params[0])?;
                let q = positive("q", params[1])?;
                if kind == "complete_split" {
                    Family::CompleteSplit { a, q }
                } else {
                    Family::CompleteBipartite { a, q }
                }
            }
            "path" | "cycle" | "complete" | "star" => {
                arity(kind, params, 1)?;
                let n = positive("n", params[0])?;
                match kind {
                    "path" => Family::Path(n),
                    "cycle" => {
                        if n < 3 {
                            return Err(Error::InvalidParameter("cycle needs n >= 3".into()));
                        }
                        Family::Cycle(n)
                    }
                    "complete" => Family::Complete(n),
                    _ => Family::Star(n),
                }
            }
            "random_tree" => {
                arity(kind, params, 2)?;
                Family::RandomTree { n: positive("n", params[0])?, seed: params[1] }
            }
            "random_graph" => {
                arity(kind, params, 3)?;
                let n = positive("n", params[0])?;
                let m = params[1] as usize;
                if m > n * (n - 1) / 2 {
                    return Err(Error::InvalidParameter(format!("m = {m} exceeds C({n},2)")));
                }
                Family::RandomGraph { n, m, seed: params[2] }
            }
            "disjoint_cliques" => {
                if params.is_empty() {
                    return Err(Error::InvalidParameter("disjoint_cliques needs sizes".into()));
                }
                let sizes = params
                    .iter()
                    .map(|&s| positive("clique size", s))
                    .collect::<Result<_>>()?;
                Family::DisjointCliques(sizes)
            }
            "bipyramid" => {
                arity(kind, params, 1)?;
                if params[0] < 3 {
                    return Err(Error::InvalidParameter("bipyramid needs a ring of at least 3".into()));
                }
                Family::Bipyramid(params[0] as usize)
            }
            "icosahedron" => {
                arity(kind, params, 0)?;
                Family::Icosahedron
            }
            other => return Err(Error::UnknownFamily(other.to_string())),
        })
    }

    pub fn build(&self) -> Graph {
        match *self {
            Family::CompleteBipartite { a, q } => complete_bipartite(a, q),
            Family::CompleteSplit { a, q } => complete_split(a, q),
            Family::Path(n) => Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap(),
            Family::Cycle(n) => Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap(),
            Family::Complete(n) => complete(n),
            Family::Star(n) => {
                let g = Graph::new(n, (1..n).map(|i| (0, i))).unwrap();
                g.with_parts(Parts { a: vec![0], q: (1..n).collect() }).unwrap()
            }
            Family::RandomTree { n, seed } => random_tree(n, seed),
            Family::RandomGraph { n, m, seed } => random_graph(n, m, seed),
            Family::DisjointCliques(ref sizes) => disjoint_cliques(sizes),
            Family::Bipyramid(k) => bipyramid(k),
            Family::Icosahedron => icosahedron(),
        }
    }
}

/// Parses and builds a named family in one step.
pub fn generate(kind: &str, params: &[u64]) -> Result<Graph> {
    Family::parse(kind, params).map(|f| f.build())
}

fn bipartite_parts(a: usize, q: usize) -> Parts {
    Parts { a: (0..a).collect(), q: (a..a + q).collect() }
}

pub fn complete_bipartite(a: usize, q: usize) -> Graph {
    let edges = (0..a).flat_map(|u| (a..a + q).map(move |v| (u, v)));
    Graph::new(a + q, edges).unwrap().with_parts(bipartite_parts(a, q)).unwrap()
}

/// `K_{a,q}` with A turned into a clique.
pub fn complete_split(a: usize, q: usize) -> Graph {
    let cross = (0..a).flat_map(|u| (a..a + q).map(move |v| (u, v)));
    let inner = (0..a).flat_map(|u| (u + 1..a).map(move |v| (u, v)));
    Graph::new(a + q, cross.chain(inner)).unwrap().with_parts(bipartite_parts(a, q)).unwrap()
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
}

pub fn disjoint_cliques(sizes: &[usize]) -> Graph {
    let mut edges = Vec::new();
    let mut base = 0;
    for &s in sizes {
        for u in 0..s {
            for v in u + 1..s {
                edges.push((base + u, base + v));
            }
        }
        base += s;
    }
    Graph::new(base, edges).unwrap()
}

/// Uniform labelled tree from a random Prüfer sequence.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let code: Vec<usize> = (0..n.saturating_sub(2)).map(|_| rng.gen_range(0..n)).collect();
    tree_from_prufer(n, &code)
}

/// Decodes a Prüfer sequence of length `n - 2` over `0..n`.
pub fn tree_from_prufer(n: usize, code: &[usize]) -> Graph {
    if n <= 2 {
        return Graph::new(n, (1..n).map(|i| (0, i))).unwrap();
    }
    assert_eq!(code.len(), n - 2, "Prüfer code length");
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::new(n, edges).unwrap()
}

/// Isomorphism-invariant string for a tree: the least rooted encoding
/// over its centres.
pub fn tree_code(g: &Graph) -> String {
    fn encode(g: &Graph, v: usize, parent: usize) -> String {
        let mut kids: Vec<String> = g.neighbors(v).iter().filter(|&&w| w != parent).map(|&w| encode(g, w, v)).collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    let n = g.n();
    if n == 0 {
        return String::new();
    }
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in g.neighbors(v) {
                deg[w] -= 1;
                if deg[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer.iter().map(|&c| encode(g, c, usize::MAX)).min().unwrap()
}

/// One tree per isomorphism class on `n` vertices, in order of first
/// appearance among Prüfer sequences.
pub fn nonisomorphic_trees(n: usize) -> Vec<Graph> {
    assert!(n <= 10, "too many Prüfer sequences for n = {n}");
    if n <= 2 {
        return vec![tree_from_prufer(n, &[])];
    }
    let total = n.pow(n as u32 - 2);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mut k in 0..total {
        let code: Vec<usize> = (0..n - 2)
            .map(|_| {
                let c = k % n;
                k /= n;
                c
            })
            .collect();
        let t = tree_from_prufer(n, &code);
        if seen.insert(tree_code(&t)) {
            out.push(t);
        }
    }
    out
}

/// Cycle `0..k` plus two apexes `k` and `k + 1` joined to all of it.
pub fn bipyramid(k: usize) -> Graph {
    let ring = (0..k).map(|i| (i, (i + 1) % k));
    let apex = (0..k).flat_map(|i| [(i, k), (i, k + 1)]);
    Graph::new(k + 2, ring.chain(apex)).unwrap()
}

/// Top `0`, upper ring `1..=5`, lower ring `6..=10`, bottom `11`.
pub fn icosahedron() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        let (u, u2) = (1 + i, 1 + (i + 1) % 5);
        let (l, l2) = (6 + i, 6 + (i + 1) % 5);
        edges.extend([(0, u), (u, u2), (u, l), (u, l2), (l, l2), (l, 11)]);
    }
    Graph::new(12, edges).unwrap()
}

/// `m` distinct edges drawn uniformly from all pairs.
pub fn random_graph(n: usize, m: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let picked = sample(&mut rng, pairs.len(), m);
    Graph::new(n, picked.into_iter().map(|i| pairs[i])).unwrap()
}

/// A vertex order with the number of earlier neighbours of every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexOrder {
    pub order: Vec<usize>,
    /// Indexed by vertex, not by position.
    pub back_degree: Vec<usize>,
}

impl VertexOrder {
    pub fn from_order(g: &Graph, order: Vec<usize>) -> Self {
        let mut pos = vec![0; g.n()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let back_degree = (0..g.n())
            .map(|v| g.neighbors(v).iter().filter(|&&w| pos[w] < pos[v]).count())
            .collect();
        VertexOrder { order, back_degree }
    }

    /// Back degrees listed along the order.
    pub fn back_degrees_in_order(&self) -> Vec<usize> {
        self.order.iter().map(|&v| self.back_degree[v]).collect()
    }

    pub fn max_back_degree(&self) -> usize {
        self.back_degree.iter().copied().max().unwrap_or(0)
    }
}

/// Peels a minimum-degree vertex (lowest index on ties) until empty, then
/// reverses the peeling sequence.
pub fn degeneracy_order(g: &Graph) -> VertexOrder {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut gone = vec![false; n];
    let mut peeled = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !gone[v]).min_by_key(|&v| (deg[v], v)).unwrap();
        gone[v] = true;
        peeled.push(v);
        for &w in g.neighbors(v) {
            if !gone[w] {
                deg[w] -= 1;
            }
        }
    }
    peeled.reverse();
    VertexOrder::from_order(g, peeled)
}
