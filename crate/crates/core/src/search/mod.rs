//! Exhaustive enumeration of unanimous chromatic simplicial maps and the
//! Arrow verdict built on it.
//!
//! The search assigns one sign per canonical vertex. Vertices whose sign
//! vector is unanimous are pinned; the rest are decided by backtracking.
//! Every triple of pairs inside a facet is a constraint forbidding the two
//! cyclic sign patterns, and assignments are propagated through these
//! constraints as soon as two of the three signs are known.

pub mod audit;
pub mod probe;

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::nerve::Nerve;
use crate::preferences::{Domain, Sign};
use crate::swf::{bij_b_inv, triple_positions, ChromaticMap, SwfTable};

pub use audit::{audit_lemmas, AuditReport, CheckResult};
pub use probe::{super_arrovian_probe, ProbeMode, ProbeOptions, ProbeReport};

/// Decisions taken before the tree is split into independent subproblems.
/// Fixed so that the split, and hence the statistics, do not depend on the
/// number of workers.
const FRONTIER_DEPTH: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Pin unanimity vertices. Without it every simplicial map is listed.
    pub unanimity: bool,
    /// Stop each subproblem after this many maps; the merged list is then
    /// cut to the first `max_maps` in canonical order.
    pub max_maps: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            unanimity: true,
            max_maps: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub free_vertices: usize,
    pub constraints: usize,
    pub subproblems: usize,
    /// Sign decisions tried.
    pub nodes: u64,
    /// Decisions refuted by propagation.
    pub prunes: u64,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    /// Sorted by sign string, `+` before `-`.
    pub maps: Vec<ChromaticMap>,
    pub stats: SearchStats,
    /// False when `max_maps` cut the search short.
    pub complete: bool,
}

/// Distinct `(ab, bc, ac)` vertex triples, `a < b < c`, over all facets.
pub(crate) fn facet_triangles(nerve: &Nerve) -> Vec<[u32; 3]> {
    let positions = triple_positions(nerve);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for facet in nerve.facet_ids() {
        for &[ab, bc, ac] in &positions {
            let t = [facet[ab], facet[bc], facet[ac]];
            if seen.insert(t) {
                out.push(t);
            }
        }
    }
    out
}

struct Problem {
    constraints: Vec<[u32; 3]>,
    watches: Vec<Vec<u32>>,
    order: Vec<u32>,
}

impl Problem {
    /// Decides free vertices busiest first, or in vertex order when
    /// `canonical`, which makes each depth-first search emit its maps in
    /// sign-string order.
    fn new(nerve: &Nerve, pinned: &[i8], canonical: bool) -> Problem {
        let constraints = facet_triangles(nerve);
        let mut watches = vec![Vec::new(); nerve.vertex_count()];
        for (c, t) in constraints.iter().enumerate() {
            for &v in t {
                watches[v as usize].push(c as u32);
            }
        }
        let mut order: Vec<u32> = (0..nerve.vertex_count() as u32)
            .filter(|&v| pinned[v as usize] == 0)
            .collect();
        if !canonical {
            order.sort_by_key(|&v| std::cmp::Reverse(nerve.support(v as usize).len()));
        }
        Problem {
            constraints,
            watches,
            order,
        }
    }
}

/// What a constraint implies given the current values (0 = unset).
enum Implication {
    Nothing,
    Force(usize, i8),
    Conflict,
}

/// `(ab, bc, ac)` is cyclic exactly when `ab == bc != ac`.
fn implication(x: i8, y: i8, z: i8) -> Implication {
    match (x != 0, y != 0, z != 0) {
        (true, true, true) if x == y && z != x => Implication::Conflict,
        (true, true, false) if x == y => Implication::Force(2, x),
        (true, false, true) if x != z => Implication::Force(1, z),
        (false, true, true) if y != z => Implication::Force(0, z),
        _ => Implication::Nothing,
    }
}

#[derive(Clone)]
struct State {
    vals: Vec<i8>,
    trail: Vec<u32>,
}

impl State {
    fn set(&mut self, v: u32, s: i8) {
        self.vals[v as usize] = s;
        self.trail.push(v);
    }

    /// Propagates everything on the trail from `from` on.
    fn propagate(&mut self, p: &Problem, from: usize) -> bool {
        let mut head = from;
        while head < self.trail.len() {
            let v = self.trail[head] as usize;
            head += 1;
            for &c in &p.watches[v] {
                let t = p.constraints[c as usize];
                let [x, y, z] = t.map(|u| self.vals[u as usize]);
                match implication(x, y, z) {
                    Implication::Nothing => {}
                    Implication::Force(k, s) => self.set(t[k], s),
                    Implication::Conflict => return false,
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for v in self.trail.drain(mark..) {
            self.vals[v as usize] = 0;
        }
    }

    fn next_free(&self, p: &Problem, mut k: usize) -> usize {
        while k < p.order.len() && self.vals[p.order[k] as usize] != 0 {
            k += 1;
        }
        k
    }
}

struct Worker<'p> {
    problem: &'p Problem,
    limit: usize,
    found: Vec<Vec<i8>>,
    nodes: u64,
    prunes: u64,
}

impl Worker<'_> {
    /// Returns true when the limit was reached.
    fn dfs(&mut self, st: &mut State, k: usize) -> bool {
        let k = st.next_free(self.problem, k);
        if k == self.problem.order.len() {
            self.found.push(st.vals.clone());
            return self.found.len() >= self.limit;
        }
        let v = self.problem.order[k];
        for s in [1, -1] {
            self.nodes += 1;
            let mark = st.trail.len();
            st.set(v, s);
            if st.propagate(self.problem, mark) {
                if self.dfs(st, k + 1) {
                    st.undo(mark);
                    return true;
                }
            } else {
                self.prunes += 1;
            }
            st.undo(mark);
        }
        false
    }

    /// Like `dfs`, but collects the open states after `depth` decisions.
    fn split(&mut self, st: &mut State, k: usize, depth: usize, out: &mut Vec<(State, usize)>) {
        let k = st.next_free(self.problem, k);
        if depth == 0 || k == self.problem.order.len() {
            let mut snapshot = st.clone();
            snapshot.trail.clear();
            out.push((snapshot, k));
            return;
        }
        let v = self.problem.order[k];
        for s in [1, -1] {
            self.nodes += 1;
            let mark = st.trail.len();
            st.set(v, s);
            if st.propagate(self.problem, mark) {
                self.split(st, k + 1, depth - 1, out);
            } else {
                self.prunes += 1;
            }
            st.undo(mark);
        }
    }
}

fn to_signs(vals: &[i8]) -> Vec<Sign> {
    vals.iter().map(|&s| Sign::from_bool(s > 0)).collect()
}

/// All chromatic simplicial maps on the nerve, unanimous ones only unless
/// `options.unanimity` is off.
pub fn enumerate_maps(nerve: &Arc<Nerve>, options: SearchOptions) -> Enumeration {
    let mut pinned = vec![0i8; nerve.vertex_count()];
    if options.unanimity {
        for (v, l) in nerve.vertices().iter().enumerate() {
            if l.sigma().is_all_plus() {
                pinned[v] = 1;
            } else if l.sigma().is_all_minus() {
                pinned[v] = -1;
            }
        }
    }
    let problem = Problem::new(nerve, &pinned, options.max_maps.is_some());
    let limit = options.max_maps.unwrap_or(usize::MAX);
    let mut stats = SearchStats {
        free_vertices: problem.order.len(),
        constraints: problem.constraints.len(),
        ..SearchStats::default()
    };
    let empty = |stats| Enumeration {
        maps: Vec::new(),
        stats,
        complete: true,
    };
    if limit == 0 {
        return Enumeration {
            complete: false,
            ..empty(stats)
        };
    }

    let mut root = State {
        vals: vec![0; nerve.vertex_count()],
        trail: Vec::new(),
    };
    for (v, &s) in pinned.iter().enumerate() {
        if s != 0 {
            root.set(v as u32, s);
        }
    }
    if !root.propagate(&problem, 0) {
        stats.prunes = 1;
        return empty(stats);
    }

    let mut splitter = Worker {
        problem: &problem,
        limit,
        found: Vec::new(),
        nodes: 0,
        prunes: 0,
    };
    let mut frontier = Vec::new();
    splitter.split(&mut root, 0, FRONTIER_DEPTH, &mut frontier);
    stats.subproblems = frontier.len();
    stats.nodes = splitter.nodes;
    stats.prunes = splitter.prunes;

    let results: Vec<(Vec<Vec<i8>>, u64, u64, bool)> = frontier
        .into_par_iter()
        .map(|(mut st, k)| {
            let mut w = Worker {
                problem: &problem,
                limit,
                found: Vec::new(),
                nodes: 0,
                prunes: 0,
            };
            let hit = w.dfs(&mut st, k);
            (w.found, w.nodes, w.prunes, hit)
        })
        .collect();

    let mut complete = true;
    let mut signs: Vec<Vec<Sign>> = Vec::new();
    for (found, nodes, prunes, hit) in results {
        stats.nodes += nodes;
        stats.prunes += prunes;
        complete &= !hit;
        signs.extend(found.iter().map(|v| to_signs(v)));
    }
    signs.sort_unstable();
    if signs.len() > limit {
        signs.truncate(limit);
        complete = false;
    }
    let maps = signs
        .into_iter()
        .map(|s| ChromaticMap::new(Arc::clone(nerve), s).expect("one sign per vertex"))
        .collect();
    Enumeration {
        maps,
        stats,
        complete,
    }
}

/// Every unanimous chromatic simplicial map, canonically sorted.
pub fn enumerate_unanimous_maps(nerve: &Arc<Nerve>) -> Enumeration {
    enumerate_maps(nerve, SearchOptions::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Every unanimous IIA rule is a dictatorship.
    Inconsistent,
    /// Some unanimous IIA rule has no dictator.
    Consistent,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Inconsistent => "inconsistent",
            Status::Consistent => "consistent",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub status: Status,
    pub maps: Vec<ChromaticMap>,
    /// Dictators (0-based) of each map, aligned with `maps`.
    pub dictators: Vec<Vec<usize>>,
    /// Index into `maps` of the first map without a dictator.
    pub witness: Option<usize>,
    /// The table of each map, when requested.
    pub tables: Option<Vec<SwfTable>>,
    pub stats: SearchStats,
}

impl Verdict {
    pub fn witness_map(&self) -> Option<&ChromaticMap> {
        self.witness.map(|k| &self.maps[k])
    }
}

fn require_verdict_size(domain: &Domain) -> Result<()> {
    if domain.alternatives().len() < 3 || domain.voters() < 2 {
        return Err(Error::precondition(
            "an Arrow verdict needs at least 3 alternatives and 2 voters",
        ));
    }
    Ok(())
}

/// Decides whether every unanimous IIA rule on the nerve's domain is a
/// dictatorship.
pub fn arrow_verdict(nerve: &Arc<Nerve>, with_tables: bool) -> Result<Verdict> {
    require_verdict_size(nerve.domain())?;
    let enumeration = enumerate_unanimous_maps(nerve);
    let dictators: Vec<Vec<usize>> = enumeration.maps.iter().map(|f| f.dictators()).collect();
    let witness = dictators.iter().position(|d| d.is_empty());
    let tables = if with_tables {
        Some(
            enumeration
                .maps
                .iter()
                .map(bij_b_inv)
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    Ok(Verdict {
        status: if witness.is_some() {
            Status::Consistent
        } else {
            Status::Inconsistent
        },
        maps: enumeration.maps,
        dictators,
        witness,
        tables,
        stats: enumeration.stats,
    })
}

/// Builds the nerve and runs [`arrow_verdict`].
pub fn arrow_verdict_for(domain: &Domain) -> Result<Verdict> {
    require_verdict_size(domain)?;
    arrow_verdict(&Arc::new(Nerve::build(domain.clone())), false)
}
