//! Type-II assignments on `K_{a,q}` (every Q list has two colours) in
//! reduced form.
//!
//! An atom is a non-empty `I ⊆ [a]`, stored as a bitmask with bit `i - 1`
//! for index `i`; the atom `X_I` holds the colours lying in exactly the
//! A-lists indexed by `I`. A reduced graph `R` on atoms stands for the
//! complete bipartite conflict blocks `X_I × X_J`. It is blocking when
//! every set of atoms whose union is `[a]` spans an edge of `R`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use nalgebra::DMatrix;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::choosability::{transversal_check, Color, ListAssignment};
use crate::error::{Error, Result};
use crate::par;
use crate::sum::sorted_vectors;

pub type Atom = u32;

/// Largest `a` for which blocking graphs are enumerated.
pub const MAX_ARITY: usize = 3;

fn full(a: usize) -> Atom {
    (1 << a) - 1
}

/// Members of an atom written 1-based, e.g. `"13"` for `{1,3}`.
pub fn atom_label(atom: Atom) -> String {
    (0..Atom::BITS).filter(|i| atom >> i & 1 == 1).map(|i| (i + 1).to_string()).collect()
}

pub fn parse_atom(label: &str, a: usize) -> Result<Atom> {
    let mut atom = 0;
    for ch in label.chars() {
        let i = ch.to_digit(10).map(|d| d as usize).filter(|&d| d >= 1 && d <= a);
        let Some(i) = i else {
            return Err(Error::Malformed(format!("bad atom `{label}` for a = {a}")));
        };
        atom |= 1 << (i - 1);
    }
    if atom == 0 {
        return Err(Error::Malformed("empty atom".into()));
    }
    Ok(atom)
}

/// Atom sizes `x_I`; absent atoms count zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AtomVector {
    pub a: usize,
    pub x: BTreeMap<Atom, u64>,
}

impl AtomVector {
    pub fn new(a: usize) -> Self {
        AtomVector { a, x: BTreeMap::new() }
    }

    pub fn from_pairs(a: usize, pairs: impl IntoIterator<Item = (Atom, u64)>) -> Self {
        AtomVector { a, x: pairs.into_iter().collect() }
    }

    pub fn get(&self, atom: Atom) -> u64 {
        self.x.get(&atom).copied().unwrap_or(0)
    }

    pub fn support(&self) -> Vec<Atom> {
        self.x.iter().filter(|(_, &v)| v > 0).map(|(&k, _)| k).collect()
    }
}

impl Serialize for AtomVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.x.len()))?;
        for (&k, v) in &self.x {
            map.serialize_entry(&atom_label(k), v)?;
        }
        map.end()
    }
}

/// `f_i = Σ_{I ∋ i} x_I`.
pub fn phi(x: &AtomVector) -> Vec<u64> {
    (0..x.a).map(|i| x.x.iter().filter(|(&k, _)| k >> i & 1 == 1).map(|(_, &v)| v).sum()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ReducedGraph {
    pub vertices: Vec<Atom>,
    pub edges: Vec<(Atom, Atom)>,
}

impl ReducedGraph {
    /// Sorts and deduplicates; edges must join two distinct vertices.
    pub fn new(vertices: impl IntoIterator<Item = Atom>, edges: impl IntoIterator<Item = (Atom, Atom)>) -> Result<Self> {
        let vertices: BTreeSet<Atom> = vertices.into_iter().collect();
        if vertices.contains(&0) {
            return Err(Error::Malformed("atoms must be non-empty".into()));
        }
        let mut es = BTreeSet::new();
        for (u, v) in edges {
            if u == v || !vertices.contains(&u) || !vertices.contains(&v) {
                return Err(Error::Malformed(format!("bad edge {}-{}", atom_label(u), atom_label(v))));
            }
            es.insert((u.min(v), u.max(v)));
        }
        Ok(ReducedGraph { vertices: vertices.into_iter().collect(), edges: es.into_iter().collect() })
    }

    fn index(&self, atom: Atom) -> usize {
        self.vertices.binary_search(&atom).unwrap()
    }

    fn edge_indices(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(u, v)| (self.index(u), self.index(v))).collect()
    }

    /// Image under `i ↦ perm[i]` (0-based indices).
    pub fn permute(&self, perm: &[usize]) -> ReducedGraph {
        let map = |atom: Atom| (0..perm.len()).filter(|&i| atom >> i & 1 == 1).fold(0, |m, i| m | 1 << perm[i]);
        ReducedGraph::new(self.vertices.iter().map(|&v| map(v)), self.edges.iter().map(|&(u, v)| (map(u), map(v)))).unwrap()
    }

    /// Least image over all permutations of `[a]`.
    pub fn canonical(&self, a: usize) -> ReducedGraph {
        permutations(a).iter().map(|p| self.permute(p)).min().unwrap_or_default()
    }
}

impl Serialize for ReducedGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let vertices: Vec<String> = self.vertices.iter().map(|&v| atom_label(v)).collect();
        let edges: Vec<[String; 2]> = self.edges.iter().map(|&(u, v)| [atom_label(u), atom_label(v)]).collect();
        let mut st = s.serialize_struct("ReducedGraph", 2)?;
        st.serialize_field("vertices", &vertices)?;
        st.serialize_field("edges", &edges)?;
        st.end()
    }
}

fn permutations(a: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; a], &mut out);
    out
}

/// Inclusion-minimal sets of vertex indices whose atoms cover `[a]`.
fn minimal_covers(vertices: &[Atom], a: usize) -> Vec<u32> {
    let n = vertices.len();
    let union = |c: u32| (0..n).filter(|&i| c >> i & 1 == 1).fold(0, |m, i| m | vertices[i]);
    (1..1u32 << n)
        .filter(|&c| union(c) == full(a) && (0..n).all(|i| c >> i & 1 == 0 || union(c & !(1 << i)) != full(a)))
        .collect()
}

fn check_atoms(vertices: &[Atom], a: usize) -> Result<()> {
    if let Some(&v) = vertices.iter().find(|&&v| v == 0 || v > full(a)) {
        return Err(Error::Malformed(format!("atom {v:#b} is not a non-empty subset of [{a}]")));
    }
    if let Some(i) = (0..a).find(|&i| !vertices.iter().any(|&v| v >> i & 1 == 1)) {
        return Err(Error::Precondition(format!("index {} lies in no atom", i + 1)));
    }
    Ok(())
}

/// Whether every cover of `[a]` by vertices of `r` contains an edge.
pub fn is_blocking(r: &ReducedGraph, a: usize) -> Result<bool> {
    check_atoms(&r.vertices, a)?;
    let n = r.vertices.len();
    if n > 20 {
        return Err(Error::InvalidParameter(format!("{n} atoms is too many")));
    }
    let edges = r.edge_indices();
    let union = |c: u32| (0..n).filter(|&i| c >> i & 1 == 1).fold(0, |m, i| m | r.vertices[i]);
    Ok((1..1u32 << n).all(|c| union(c) != full(a) || edges.iter().any(|&(u, v)| c >> u & 1 == 1 && c >> v & 1 == 1)))
}

fn pair_list(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Pair-index mask of the pairs inside each minimal cover.
fn cover_pair_masks(covers: &[u32], pairs: &[(usize, usize)]) -> Vec<u128> {
    covers
        .iter()
        .map(|&c| {
            pairs.iter().enumerate().filter(|(_, &(u, v))| c >> u & 1 == 1 && c >> v & 1 == 1).fold(0u128, |m, (k, _)| m | 1 << k)
        })
        .collect()
}

fn vertex_sets(a: usize) -> Vec<Vec<Atom>> {
    let atoms: Vec<Atom> = (1..=full(a)).collect();
    (1u32..1 << atoms.len())
        .map(|s| (0..atoms.len()).filter(|&i| s >> i & 1 == 1).map(|i| atoms[i]).collect::<Vec<_>>())
        .filter(|vs| vs.iter().fold(0, |m, &v| m | v) == full(a))
        .collect()
}

fn check_arity(a: usize) -> Result<()> {
    if a == 0 {
        return Err(Error::InvalidParameter("a must be at least 1".into()));
    }
    if a > MAX_ARITY {
        return Err(Error::UnsupportedArity(a));
    }
    Ok(())
}

/// All blocking reduced graphs for `[a]` up to relabelling of `[a]`, each
/// given by its least relabelling, in increasing order.
pub fn enumerate_blocking(a: usize) -> Result<Vec<ReducedGraph>> {
    check_arity(a)?;
    let mut out = BTreeSet::new();
    for vs in vertex_sets(a) {
        let covers = minimal_covers(&vs, a);
        if covers.iter().any(|c| c.count_ones() == 1) {
            continue;
        }
        let pairs = pair_list(vs.len());
        let masks = cover_pair_masks(&covers, &pairs);
        for e in 0u128..1 << pairs.len() {
            if masks.iter().all(|m| m & e != 0) {
                let edges = (0..pairs.len()).filter(|k| e >> k & 1 == 1).map(|k| (vs[pairs[k].0], vs[pairs[k].1]));
                out.insert(ReducedGraph::new(vs.iter().copied(), edges).unwrap().canonical(a));
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn minimal_hitting_sets(family: &[u128]) -> BTreeSet<u128> {
    fn go(family: &[u128], chosen: u128, out: &mut BTreeSet<u128>) {
        match family.iter().find(|&&f| f & chosen == 0) {
            None => {
                let minimal = (0..128).filter(|b| chosen >> b & 1 == 1).all(|b| family.iter().any(|&f| f & chosen == 1 << b));
                if minimal {
                    out.insert(chosen);
                }
            }
            Some(&f) => {
                for b in (0..128).filter(|b| f >> b & 1 == 1) {
                    go(family, chosen | 1 << b, out);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    go(family, 0, &mut out);
    out
}

/// Edge-minimal blocking graphs on every vertex set, with labels.
pub fn minimal_blocking(a: usize) -> Result<&'static [ReducedGraph]> {
    static CACHE: [OnceLock<Vec<ReducedGraph>>; MAX_ARITY] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    check_arity(a)?;
    Ok(CACHE[a - 1].get_or_init(|| {
        let mut out = Vec::new();
        for vs in vertex_sets(a) {
            let covers = minimal_covers(&vs, a);
            if covers.iter().any(|c| c.count_ones() == 1) {
                continue;
            }
            let pairs = pair_list(vs.len());
            for e in minimal_hitting_sets(&cover_pair_masks(&covers, &pairs)) {
                let edges = (0..pairs.len()).filter(|k| e >> k & 1 == 1).map(|k| (vs[pairs[k].0], vs[pairs[k].1]));
                out.push(ReducedGraph::new(vs.iter().copied(), edges).unwrap());
            }
        }
        out
    }))
}

/// Blocking graph, atom sizes, and the number of Q-lists they use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedWitness {
    pub r: ReducedGraph,
    pub x: AtomVector,
    pub cost: u64,
}

impl Serialize for ReducedWitness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ReducedWitness", 3)?;
        st.serialize_field("R", &self.r)?;
        st.serialize_field("x", &self.x)?;
        st.serialize_field("cost", &self.cost)?;
        st.end()
    }
}

pub fn witness_cost(r: &ReducedGraph, x: &AtomVector) -> u64 {
    r.edges.iter().map(|&(u, v)| x.get(u) * x.get(v)).sum()
}

struct Search<'s> {
    f: &'s [usize],
    vars: Vec<Atom>,
    edges: Vec<(usize, usize)>,
    caps: Vec<u64>,
    x: Vec<u64>,
    bound: u64,
    visited: u64,
    budget: u64,
}

impl Search<'_> {
    fn lower_cost(&self, k: usize) -> u64 {
        let val = |i: usize| if i < k { self.x[i] } else { 1 };
        self.edges.iter().map(|&(u, v)| val(u) * val(v)).sum()
    }

    fn reachable(&self, k: usize) -> bool {
        self.f.iter().enumerate().all(|(i, &fi)| {
            let got: u64 = (0..self.vars.len())
                .filter(|&j| self.vars[j] >> i & 1 == 1)
                .map(|j| if j < k { self.x[j] } else { self.caps[j] })
                .sum();
            got >= fi as u64
        })
    }

    /// Cheapest completion of `x[..k]` with cost at most `bound`.
    fn run(&mut self, k: usize, best: &mut Option<(Vec<u64>, u64)>, first: bool) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        if k == self.vars.len() {
            let cost = self.lower_cost(k);
            if cost <= self.bound && self.reachable(k) {
                *best = Some((self.x.clone(), cost));
                self.bound = cost.saturating_sub(1);
            }
            return Ok(());
        }
        for v in 1..=self.caps[k] {
            self.x[k] = v;
            if self.lower_cost(k + 1) > self.bound {
                break;
            }
            if !self.reachable(k + 1) {
                continue;
            }
            self.run(k + 1, best, first)?;
            if first && best.is_some() {
                return Ok(());
            }
        }
        Ok(())
    }
}

fn search_witness(f_a: &[usize], q: u64, budget: u64, first: bool) -> Result<Option<ReducedWitness>> {
    let a = f_a.len();
    check_arity(a)?;
    if f_a.contains(&0) {
        return Err(Error::InvalidParameter("list sizes must be positive".into()));
    }
    let mut bound = q;
    let mut best: Option<ReducedWitness> = None;
    let mut visited = 0;
    for r in minimal_blocking(a)? {
        // x_I beyond the largest f_i it feeds can be cut without harm
        let caps = r.vertices.iter().map(|&v| (0..a).filter(|&i| v >> i & 1 == 1).map(|i| f_a[i] as u64).max().unwrap()).collect();
        let mut s = Search {
            f: f_a,
            vars: r.vertices.clone(),
            edges: r.edge_indices(),
            caps,
            x: vec![0; r.vertices.len()],
            bound,
            visited: 0,
            budget: budget.saturating_sub(visited),
        };
        let mut found = None;
        s.run(0, &mut found, first)?;
        visited += s.visited;
        if let Some((x, cost)) = found {
            bound = cost.saturating_sub(1);
            best = Some(ReducedWitness { r: r.clone(), x: AtomVector::from_pairs(a, r.vertices.iter().copied().zip(x)), cost });
            if first || cost == 0 {
                break;
            }
        }
    }
    Ok(best)
}

/// Cheapest reduced witness that `f_a` (with 2 on all `q` Q vertices) is
/// insufficient on `K_{a,q}`: a blocking `R` and integer `x >= 1` on its
/// atoms with `φ(x) >= f_a` and cost at most `q`. `None` means `f` is
/// sufficient.
pub fn type2_insufficient(f_a: &[usize], q: u64, budget: u64) -> Result<Option<ReducedWitness>> {
    search_witness(f_a, q, budget, false)
}

/// Like [`type2_insufficient`] but stops at the first witness found.
pub fn type2_insufficient_any(f_a: &[usize], q: u64, budget: u64) -> Result<Option<ReducedWitness>> {
    search_witness(f_a, q, budget, true)
}

/// Concrete type-II assignment on `K_{a,q}` (A first) with A sizes `f_a`
/// realising a witness. Each atom gets its own block of colours, the
/// A-lists are cut down to `f_a`, and unused Q-lists get fresh pairs.
pub fn expand_witness(w: &ReducedWitness, f_a: &[usize], q: usize) -> Result<ListAssignment> {
    if f_a.len() != w.x.a {
        return Err(Error::SizeMismatch { expected: w.x.a, got: f_a.len() });
    }
    if phi(&w.x).iter().zip(f_a).any(|(&p, &f)| p < f as u64) || w.cost > q as u64 {
        return Err(Error::InvalidParameter("witness does not cover these sizes".into()));
    }
    let mut next: Color = 0;
    let mut block = BTreeMap::new();
    for &v in &w.r.vertices {
        let k = w.x.get(v) as Color;
        block.insert(v, (next..next + k).collect::<Vec<_>>());
        next += k;
    }
    let mut lists: Vec<Vec<Color>> = (0..f_a.len())
        .map(|i| {
            let mut l: Vec<Color> = block.iter().filter(|(&v, _)| v >> i & 1 == 1).flat_map(|(_, b)| b.clone()).collect();
            l.sort_unstable();
            l.truncate(f_a[i]);
            l
        })
        .collect();
    for &(u, v) in &w.r.edges {
        for &c in &block[&u] {
            for &d in &block[&v] {
                lists.push(vec![c.min(d), c.max(d)]);
            }
        }
    }
    while lists.len() < f_a.len() + q {
        lists.push(vec![next, next + 1]);
        next += 2;
    }
    Ok(ListAssignment { lists })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chi2Reduced {
    pub value: usize,
    pub optimal_a: Vec<usize>,
}

/// `χ_sc2(K_{a,q})` from the reduced criterion, scanning non-decreasing
/// A sizes by total.
pub fn chi_sc2_reduced(a: usize, q: usize, budget: u64) -> Result<Chi2Reduced> {
    check_arity(a)?;
    if q == 0 {
        return Err(Error::InvalidParameter("q must be at least 1".into()));
    }
    for k in a..=a * (q + 1) {
        let cands = sorted_vectors(a, q + 1, k);
        let hit = par::find_map_first(&cands, |f| match type2_insufficient_any(f, q as u64, budget) {
            Ok(None) => Some(Ok(f.clone())),
            Ok(Some(_)) => None,
            Err(e) => Some(Err(e)),
        });
        if let Some(f) = hit {
            return Ok(Chi2Reduced { value: 2 * q + k, optimal_a: f? });
        }
    }
    unreachable!("f = q + 1 on A is always sufficient")
}

/// Reduced form of an insufficient type-II assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Symmetrized {
    pub x: AtomVector,
    pub r: ReducedGraph,
    /// Conflict edges after the transformation.
    pub edges: Vec<(Color, Color)>,
}

/// Turns an insufficient type-II assignment (A-lists plus the conflict
/// graph whose edges are the Q-lists) into one whose conflicts are full
/// blocks between atoms, without adding edges.
///
/// Edges inside an atom and edges at colours outside every A-list are
/// dropped; then in each atom every colour receives the neighbourhood of
/// a minimum-degree colour of that atom.
pub fn symmetrize(a_lists: &[Vec<Color>], edges: &[(Color, Color)]) -> Result<Symmetrized> {
    let a = a_lists.len();
    if a == 0 || a >= Atom::BITS as usize {
        return Err(Error::InvalidParameter(format!("cannot reduce {a} lists")));
    }
    let q_lists: Vec<Vec<Color>> = edges.iter().map(|&(u, v)| vec![u, v]).collect();
    if transversal_check(a_lists, &q_lists).is_some() {
        return Err(Error::NotInsufficient);
    }
    let mut member: BTreeMap<Color, Atom> = BTreeMap::new();
    for (i, l) in a_lists.iter().enumerate() {
        for &c in l {
            *member.entry(c).or_default() |= 1 << i;
        }
    }
    let mut adj: BTreeMap<Color, BTreeSet<Color>> = member.keys().map(|&c| (c, BTreeSet::new())).collect();
    for &(u, v) in edges {
        if let (Some(&mu), Some(&mv)) = (member.get(&u), member.get(&v)) {
            if mu != mv {
                adj.get_mut(&u).unwrap().insert(v);
                adj.get_mut(&v).unwrap().insert(u);
            }
        }
    }
    let mut atoms: BTreeMap<Atom, Vec<Color>> = BTreeMap::new();
    for (&c, &m) in &member {
        atoms.entry(m).or_default().push(c);
    }
    for colours in atoms.values() {
        let u = *colours.iter().min_by_key(|&&c| (adj[&c].len(), c)).unwrap();
        let target = adj[&u].clone();
        for &v in colours.iter().filter(|&&v| v != u) {
            for w in std::mem::take(adj.get_mut(&v).unwrap()) {
                adj.get_mut(&w).unwrap().remove(&v);
            }
            for &w in &target {
                adj.get_mut(&v).unwrap().insert(w);
                adj.get_mut(&w).unwrap().insert(v);
            }
        }
    }
    let new_edges: Vec<(Color, Color)> =
        adj.iter().flat_map(|(&u, ns)| ns.iter().filter(move |&&w| w > u).map(move |&w| (u, w))).collect();
    let x = AtomVector::from_pairs(a, atoms.iter().map(|(&m, cs)| (m, cs.len() as u64)));
    let r_edges = atoms
        .iter()
        .flat_map(|(&i, ci)| atoms.range(i + 1..).map(move |(&j, cj)| (i, ci, j, cj)))
        .filter(|&(_, ci, _, cj)| adj[&ci[0]].contains(&cj[0]))
        .map(|(i, _, j, _)| (i, j));
    let r = ReducedGraph::new(atoms.keys().copied(), r_edges)?;
    Ok(Symmetrized { x, r, edges: new_edges })
}

struct Face {
    free: Vec<usize>,
    x_map: DMatrix<f64>,
    residual: DMatrix<f64>,
}

struct QuadProgram {
    vars: Vec<Atom>,
    edges: Vec<(usize, usize)>,
    faces: Vec<Face>,
}

impl QuadProgram {
    /// KKT systems of `min Σ_E x_I x_J` s.t. `φ(x) >= d`, `x >= 0` on every
    /// face (a set of zero variables and a set of tight constraints),
    /// solved once as linear maps of `d`.
    fn new(r: &ReducedGraph, a: usize) -> Self {
        let vars = r.vertices.clone();
        let edges = r.edge_indices();
        let n = vars.len();
        let mut faces = Vec::new();
        for zero in 0u32..1 << n {
            let free: Vec<usize> = (0..n).filter(|&j| zero >> j & 1 == 0).collect();
            for tight in 1u32..1 << a {
                let rows: Vec<usize> = (0..a).filter(|&i| tight >> i & 1 == 1).collect();
                let (nf, ns) = (free.len(), rows.len());
                let m = nf + ns;
                let mut k = DMatrix::<f64>::zeros(m, m);
                for &(u, v) in &edges {
                    if let (Some(pu), Some(pv)) = (free.iter().position(|&j| j == u), free.iter().position(|&j| j == v)) {
                        k[(pu, pv)] = 1.0;
                        k[(pv, pu)] = 1.0;
                    }
                }
                for (si, &i) in rows.iter().enumerate() {
                    for (fj, &j) in free.iter().enumerate() {
                        if vars[j] >> i & 1 == 1 {
                            k[(nf + si, fj)] = 1.0;
                            k[(fj, nf + si)] = -1.0;
                        }
                    }
                }
                let mut b = DMatrix::<f64>::zeros(m, a);
                for (si, &i) in rows.iter().enumerate() {
                    b[(nf + si, i)] = 1.0;
                }
                let Ok(pinv) = k.clone().svd(true, true).pseudo_inverse(1e-10) else {
                    continue;
                };
                let sol = &pinv * &b;
                let residual = &k * &sol - &b;
                faces.push(Face { x_map: sol.rows(0, nf).into_owned(), residual, free: free.clone() });
            }
        }
        QuadProgram { vars, edges, faces }
    }

    fn min_cost(&self, d: &[f64]) -> f64 {
        let dv = DMatrix::from_column_slice(d.len(), 1, d);
        let scale = 1.0 + d.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let mut best = f64::INFINITY;
        let mut x = vec![0.0; self.vars.len()];
        for face in &self.faces {
            if (&face.residual * &dv).amax() > 1e-9 * scale {
                continue;
            }
            let xf = &face.x_map * &dv;
            if xf.iter().any(|&v| v < -1e-10 * scale) {
                continue;
            }
            x.iter_mut().for_each(|v| *v = 0.0);
            for (k, &j) in face.free.iter().enumerate() {
                x[j] = xf[k].max(0.0);
            }
            let feasible = d.iter().enumerate().all(|(i, &di)| {
                let got: f64 = (0..x.len()).filter(|&j| self.vars[j] >> i & 1 == 1).map(|j| x[j]).sum();
                got >= di - 1e-9 * scale
            });
            if feasible {
                let cost: f64 = self.edges.iter().map(|&(u, v)| x[u] * x[v]).sum();
                best = best.min(cost);
            }
        }
        best
    }
}

fn programs(a: usize) -> Result<&'static [QuadProgram]> {
    static CACHE: [OnceLock<Vec<QuadProgram>>; MAX_ARITY] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let graphs = minimal_blocking(a)?;
    Ok(CACHE[a - 1].get_or_init(|| par::map(graphs, |r| QuadProgram::new(r, a))))
}

/// `min_R min { Σ_{IJ ∈ E(R)} x_I x_J : φ(x) >= d, x >= 0 }` over
/// edge-minimal blocking `R`. The covered region is `{d : g(d) <= 1}`.
pub fn coverage_cost(a: usize, d: &[f64]) -> Result<f64> {
    if d.len() != a {
        return Err(Error::SizeMismatch { expected: a, got: d.len() });
    }
    Ok(programs(a)?.iter().map(|p| p.min_cost(d)).fold(f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaResult {
    pub a: usize,
    pub beta: f64,
    /// Direction on the unit simplex where coverage is tightest.
    pub worst: Vec<f64>,
    /// `(grid resolution, estimate)` after each stage.
    pub history: Vec<(usize, f64)>,
}

fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    (0..=n)
        .flat_map(|first| {
            compositions(n - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Largest `k` with `{f >= 0 : Σ f_i <= k}` inside the covered region.
///
/// As `g` is homogeneous of degree two and monotone, `k = 1/√max g` over
/// the unit simplex. The maximum is taken over a grid of resolution
/// `grid`, then repeatedly over a doubled grid around the current worst
/// point until the estimate moves by less than `tol`.
pub fn beta_numeric(a: usize, tol: f64, grid: usize) -> Result<BetaResult> {
    if !(tol > 0.0) || grid == 0 {
        return Err(Error::InvalidParameter("tolerance and grid must be positive".into()));
    }
    if !(2..=MAX_ARITY).contains(&a) {
        return Err(Error::UnsupportedArity(a));
    }
    let eval = |pts: &[Vec<usize>], n: usize| -> Result<(f64, Vec<usize>)> {
        let vals = par::map(pts, |p| coverage_cost(a, &p.iter().map(|&c| c as f64 / n as f64).collect::<Vec<_>>()));
        let mut best = (f64::NEG_INFINITY, pts[0].clone());
        for (p, v) in pts.iter().zip(vals) {
            let v = v?;
            if v > best.0 {
                best = (v, p.clone());
            }
        }
        Ok(best)
    };
    let mut n = grid;
    let (mut g, mut at) = eval(&compositions(n, a), n)?;
    let mut history = vec![(n, 1.0 / g.sqrt())];
    for _ in 0..24 {
        let n2 = 2 * n;
        let centre: Vec<i64> = at.iter().map(|&c| 2 * c as i64).collect();
        let window: Vec<Vec<usize>> = compositions(n2, a)
            .into_iter()
            .filter(|p| p.iter().zip(&centre).all(|(&c, &m)| (c as i64 - m).abs() <= 2))
            .collect();
        let (g2, at2) = eval(&window, n2)?;
        if g2 > g {
            g = g2;
            at = at2;
        } else {
            at = at.iter().map(|&c| 2 * c).collect();
        }
        n = n2;
        let previous = history.last().unwrap().1;
        let estimate = 1.0 / g.sqrt();
        history.push((n, estimate));
        if (previous - estimate).abs() < tol {
            break;
        }
    }
    Ok(BetaResult { a, beta: history.last().unwrap().1, worst: at.iter().map(|&c| c as f64 / n as f64).collect(), history })
}

/// `β(a)` for `a ∈ {2, 3}`; closed form `2` for `a = 2`.
pub fn beta(a: usize, tol: f64) -> Result<BetaResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    match a {
        // the only blocking graph is one edge, so g(d) = d_1 d_2
        2 => Ok(BetaResult { a, beta: 2.0, worst: vec![0.5, 0.5], history: vec![(0, 2.0)] }),
        3 => beta_numeric(a, tol, 32),
        _ => Err(Error::UnsupportedArity(a)),
    }
}
