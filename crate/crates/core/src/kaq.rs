//! Complete bipartite graphs `K_{a,q}`: closed forms for `a <= 3`, the
//! probabilistic upper bound and its two-step random process, the lower
//! bound, and explicit insufficient assignments.
//!
//! Vertex layout follows [`crate::graph::complete_bipartite`]: A is
//! `0..a`, Q is `a..a+q`.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::choosability::{transversal_check, Color, ListAssignment};
use crate::error::{Error, Result};
use crate::par;

/// Which logarithm the lower bound uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogBase {
    #[default]
    Natural,
    Binary,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Binary => x.log2(),
        }
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Exact `χ_sc(K_{a,q})` where a formula is known (`a <= 3`).
pub fn closed_form(a: u64, q: u64) -> Option<u64> {
    if q == 0 {
        return None;
    }
    match a {
        1 => Some(2 * q + 1),
        2 => Some(2 * q + 1 + isqrt(4 * q + 1)),
        3 => Some(2 * q + 1 + isqrt(12 * q + 4)),
        _ => None,
    }
}

pub const UB_CONSTANT: f64 = 5.656_854_249_492_381; // sqrt(32)
pub const UB_CONSTANT_REFINED: f64 = 3.67;
pub const LB_CONSTANT: f64 = 0.06;

/// List length `r` given to every A vertex by the upper-bound construction.
pub fn ub_list_size(a: u64, q: u64, constant: f64) -> Result<u64> {
    if !(q >= a && a >= 2) {
        return Err(Error::Precondition(format!("upper bound needs q >= a >= 2, got a = {a}, q = {q}")));
    }
    let x = if constant == UB_CONSTANT {
        // keep the default exact: sqrt(32 q (1 + ln a))
        (32.0 * q as f64 * (1.0 + (a as f64).ln())).sqrt()
    } else {
        constant * (q as f64 * (1.0 + (a as f64).ln())).sqrt()
    };
    Ok(x.ceil() as u64)
}

/// `2q + a·⌈√(32 q (1 + ln a))⌉`.
pub fn ub_bound(a: u64, q: u64) -> Result<u64> {
    ub_bound_with(a, q, UB_CONSTANT)
}

/// Upper bound with the leading constant replaced.
pub fn ub_bound_with(a: u64, q: u64, constant: f64) -> Result<u64> {
    Ok(2 * q + a * ub_list_size(a, q, constant)?)
}

/// `2q + 0.06 a √(q log a)`, valid for `a >= 2` and `q > 4 a² log a`.
pub fn lb_bound(a: u64, q: u64, base: LogBase) -> Result<f64> {
    let (af, qf) = (a as f64, q as f64);
    if a < 2 || qf <= 4.0 * af * af * base.log(af) {
        return Err(Error::Precondition(format!("lower bound needs a >= 2 and q > 4a^2 log a, got a = {a}, q = {q}")));
    }
    Ok(2.0 * qf + LB_CONSTANT * af * (qf * base.log(af)).sqrt())
}

/// The explicit insufficient assignment on `K_{2^t, t ℓ²}`.
///
/// Colours `0..2tℓ` are split into blocks `X_i`, `Y_i` of size ℓ; the
/// A vertex with sign vector `ε` gets `X_i` where `ε_i = 1` and `Y_i`
/// otherwise, and the Q-lists are the edges of `∪ X_i × Y_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstrAssignment {
    pub t: usize,
    pub l: usize,
    pub a_lists: Vec<Vec<Color>>,
    pub q_lists: Vec<Vec<Color>>,
}

impl ConstrAssignment {
    pub fn a(&self) -> usize {
        self.a_lists.len()
    }

    pub fn q(&self) -> usize {
        self.q_lists.len()
    }

    pub fn universe(&self) -> usize {
        2 * self.t * self.l
    }

    pub fn x_block(&self, i: usize) -> Vec<Color> {
        let start = (2 * i * self.l) as Color;
        (start..start + self.l as Color).collect()
    }

    pub fn y_block(&self, i: usize) -> Vec<Color> {
        let start = ((2 * i + 1) * self.l) as Color;
        (start..start + self.l as Color).collect()
    }

    /// Lists over `K_{a,q}` with A first.
    pub fn to_assignment(&self) -> ListAssignment {
        ListAssignment { lists: self.a_lists.iter().chain(&self.q_lists).cloned().collect() }
    }
}

pub fn constr_assignment(t: usize, l: usize) -> Result<ConstrAssignment> {
    if t < 1 || l < 1 {
        return Err(Error::Precondition(format!("construction needs t >= 1 and l >= 1, got t = {t}, l = {l}")));
    }
    if t >= 20 {
        return Err(Error::InvalidParameter(format!("2^{t} A vertices is too many")));
    }
    let block = |i: usize, x: bool| -> Vec<Color> {
        let start = ((2 * i + usize::from(!x)) * l) as Color;
        (start..start + l as Color).collect()
    };
    let a_lists = (0..1usize << t)
        .map(|v| {
            let mut list: Vec<Color> = (0..t)
                .flat_map(|i| {
                    let eps = (v >> (t - 1 - i)) & 1 == 0;
                    block(i, eps)
                })
                .collect();
            list.sort_unstable();
            list
        })
        .collect();
    let q_lists = (0..t)
        .flat_map(|i| {
            let (xs, ys) = (block(i, true), block(i, false));
            xs.into_iter().flat_map(move |x| ys.clone().into_iter().map(move |y| vec![x, y]))
        })
        .collect();
    Ok(ConstrAssignment { t, l, a_lists, q_lists })
}

/// One run of the two-step random process.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomProcessTrace {
    pub p: f64,
    /// Colours picked in the first step (`B`).
    pub picked: Vec<Color>,
    /// `|L(u) ∩ B|` for each A vertex.
    pub hits: Vec<usize>,
    /// Number of Q-lists contained in `B`.
    pub spanned: usize,
    /// `B` after deleting one colour of every Q-list it still contains.
    pub transversal: Vec<Color>,
    pub success: bool,
}

impl RandomProcessTrace {
    pub fn min_hits(&self) -> usize {
        self.hits.iter().copied().min().unwrap_or(usize::MAX)
    }

    /// The counting condition that guarantees success.
    pub fn counting_condition(&self) -> bool {
        self.spanned < self.min_hits()
    }
}

fn universe_of(a_lists: &[Vec<Color>], q_lists: &[Vec<Color>]) -> Vec<Color> {
    let mut all: Vec<Color> = a_lists.iter().chain(q_lists).flatten().copied().collect();
    all.sort_unstable();
    all.dedup();
    all
}

/// Runs one trial with the given generator.
pub fn random_trial<R: Rng>(a_lists: &[Vec<Color>], q_lists: &[Vec<Color>], p: f64, rng: &mut R) -> RandomProcessTrace {
    let universe = universe_of(a_lists, q_lists);
    let picked: Vec<Color> = universe.into_iter().filter(|_| rng.gen_bool(p)).collect();
    let inside = |set: &[Color], l: &[Color]| l.iter().all(|c| set.binary_search(c).is_ok());
    let hits = a_lists
        .iter()
        .map(|l| l.iter().filter(|c| picked.binary_search(c).is_ok()).count())
        .collect();
    let spanned = q_lists.iter().filter(|l| inside(&picked, l)).count();
    let mut t = picked.clone();
    loop {
        let mut removed = false;
        for l in q_lists {
            if inside(&t, l) {
                let lowest = *l.iter().min().unwrap();
                t.retain(|&c| c != lowest);
                removed = true;
            }
        }
        if !removed {
            break;
        }
    }
    let success = a_lists.iter().all(|l| l.iter().any(|c| t.binary_search(c).is_ok()));
    RandomProcessTrace { p, picked, hits, spanned, transversal: t, success }
}

/// Generator for trial `trial`: ChaCha8 keyed from `seed`, one stream per
/// trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// All traces for trials `0..trials`.
pub fn random_trials(a_lists: &[Vec<Color>], q_lists: &[Vec<Color>], p: f64, seed: u64, trials: usize) -> Result<Vec<RandomProcessTrace>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} is not a probability")));
    }
    Ok(par::map_range(trials, |i| random_trial(a_lists, q_lists, p, &mut trial_rng(seed, i as u64))))
}

/// First successful trial within `max_trials`, if any.
pub fn random_transversal(
    a_lists: &[Vec<Color>],
    q_lists: &[Vec<Color>],
    p: f64,
    seed: u64,
    max_trials: usize,
) -> Result<Option<(Vec<Color>, RandomProcessTrace)>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} is not a probability")));
    }
    let trials: Vec<u64> = (0..max_trials as u64).collect();
    Ok(par::find_map_first(&trials, |&i| {
        let trace = random_trial(a_lists, q_lists, p, &mut trial_rng(seed, i));
        trace.success.then(|| (trace.transversal.clone(), trace))
    }))
}

/// The pick probability `√(2(1 + ln a)/q)` of the upper-bound argument.
pub fn default_p(a: u64, q: u64) -> f64 {
    (2.0 * (1.0 + (a as f64).ln()) / q as f64).sqrt().min(1.0)
}

/// Random type-II instance: `a` lists of `r` colours from `0..universe`
/// and `q` pairs drawn from the union of the A-lists.
pub fn random_type2_assignment(a: usize, q: usize, r: usize, universe: usize, seed: u64) -> Result<(Vec<Vec<Color>>, Vec<Vec<Color>>)> {
    if r > universe || r == 0 {
        return Err(Error::InvalidParameter(format!("cannot draw {r} colours from {universe}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a_lists: Vec<Vec<Color>> = (0..a)
        .map(|_| {
            let mut l: Vec<Color> = sample(&mut rng, universe, r).into_iter().map(|c| c as Color).collect();
            l.sort_unstable();
            l
        })
        .collect();
    let pool = universe_of(&a_lists, &[]);
    if pool.len() < 2 {
        return Err(Error::InvalidParameter("need at least two colours for pairs".into()));
    }
    let q_lists = (0..q)
        .map(|_| {
            let idx = sample(&mut rng, pool.len(), 2);
            let mut l = vec![pool[idx.index(0)], pool[idx.index(1)]];
            l.sort_unstable();
            l
        })
        .collect();
    Ok((a_lists, q_lists))
}

/// Colouring of `K_{a,q}` read off a transversal: A vertices take their
/// lowest colour in `T`, Q vertices their lowest colour outside it.
pub fn coloring_from_transversal(a_lists: &[Vec<Color>], q_lists: &[Vec<Color>], t: &[Color]) -> Option<Vec<Color>> {
    let a = a_lists.iter().map(|l| l.iter().copied().find(|c| t.contains(c)));
    let q = q_lists.iter().map(|l| l.iter().copied().find(|c| !t.contains(c)));
    a.chain(q).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LbCase {
    /// Some A list is no longer than the number of singleton Q-lists.
    Singletons,
    /// A shrunken copy of the explicit construction fits.
    Construction { t: usize, l: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LbWitness {
    pub case: LbCase,
    pub assignment: ListAssignment,
}

/// Tries the two cases of the lower-bound argument on the size function
/// `(f_a, f_q)` and returns a concrete insufficient assignment.
///
/// Case one gives the singleton Q vertices distinct colours and fills an
/// A list from them. Case two embeds the construction with the largest
/// `t` such that `2^t` A vertices have `f(u) <= tℓ`, `ℓ = ⌊√(q₂/t)⌋`,
/// where `q₂` counts Q vertices with `f = 2`; lists are cut down to size.
/// Everything left over gets fresh colours.
pub fn lb_witness(f_a: &[usize], f_q: &[usize], q: usize) -> Result<Option<LbWitness>> {
    if f_q.len() != q {
        return Err(Error::SizeMismatch { expected: q, got: f_q.len() });
    }
    if f_a.iter().chain(f_q).any(|&s| s == 0) {
        return Err(Error::InvalidParameter("list sizes must be positive".into()));
    }
    let a = f_a.len();
    let singles: Vec<usize> = (0..q).filter(|&v| f_q[v] == 1).collect();
    let mut lists: Vec<Vec<Color>> = vec![Vec::new(); a + q];

    let case = if let Some(u) = (0..a).find(|&u| f_a[u] <= singles.len()) {
        for (c, &v) in singles.iter().enumerate() {
            lists[a + v] = vec![c as Color];
        }
        lists[u] = (0..f_a[u] as Color).collect();
        LbCase::Singletons
    } else {
        let pairs: Vec<usize> = (0..q).filter(|&v| f_q[v] == 2).collect();
        let mut chosen = None;
        let mut t = usize::BITS as usize - 1 - a.leading_zeros() as usize;
        while a > 0 && t >= 1 {
            let l = isqrt((pairs.len() / t) as u64) as usize;
            if l >= 1 {
                let small: Vec<usize> = (0..a).filter(|&u| f_a[u] <= t * l).take(1 << t).collect();
                if small.len() == 1 << t {
                    chosen = Some((t, l, small));
                    break;
                }
            }
            t -= 1;
        }
        let Some((t, l, small)) = chosen else {
            return Ok(None);
        };
        let c = constr_assignment(t, l)?;
        for (k, &u) in small.iter().enumerate() {
            lists[u] = c.a_lists[k][..f_a[u]].to_vec();
        }
        for (k, list) in c.q_lists.iter().enumerate() {
            lists[a + pairs[k]] = list.clone();
        }
        LbCase::Construction { t, l }
    };

    let mut next = lists.iter().flatten().map(|&c| c + 1).max().unwrap_or(0);
    let sizes: Vec<usize> = f_a.iter().chain(f_q).copied().collect();
    for (v, list) in lists.iter_mut().enumerate() {
        if list.is_empty() {
            *list = (next..next + sizes[v] as Color).collect();
            next += sizes[v] as Color;
        }
    }
    Ok(Some(LbWitness { case, assignment: ListAssignment { lists } }))
}

/// Checks a construction with the transversal test (no valid `T` means
/// insufficient).
pub fn constr_is_insufficient(c: &ConstrAssignment) -> bool {
    transversal_check(&c.a_lists, &c.q_lists).is_none()
}
