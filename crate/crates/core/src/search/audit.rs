//! Instance-level checks of the lemmas behind the generalized Arrow
//! theorem, run against every enumerated map of a domain.
//!
//! Each check counts the hypothesis instances it met and records the
//! first few counterexamples. Checks whose domain-level hypothesis fails
//! (membership in a class) are reported as not applicable.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use super::facet_triangles;
use crate::classes::{
    diversity_pattern, has_bi_subcomplex, in_dt, in_gy_class, in_nx_class, in_pt,
    incomparable_pairs, Block,
};
use crate::decisive::{
    almost_decisive_family, check_ultrafilter, is_ultrafilter, principal_element,
    upward_closure_violation, CoalitionFamily,
};
use crate::error::{Error, Result};
use crate::nerve::Nerve;
use crate::preferences::{pairs_of, triples_of, Coalition, Sign};
use crate::swf::ChromaticMap;

/// Counterexamples kept per check.
pub const MAX_EXAMPLES: usize = 8;

/// Largest voter count the audit accepts; its tables are `2^n` wide.
pub const MAX_AUDIT_VOTERS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub id: &'static str,
    pub statement: &'static str,
    /// False when the domain does not meet the check's class hypothesis.
    pub applicable: bool,
    pub instances: u64,
    pub failures: u64,
    pub examples: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub in_pt: bool,
    pub in_dt: bool,
    pub in_nx: bool,
    pub maps: usize,
    pub checks: Vec<CheckResult>,
}

impl AuditReport {
    pub fn total_failures(&self) -> u64 {
        self.checks.iter().map(|c| c.failures).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_failures() == 0
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let state = if !c.applicable {
                "n/a "
            } else if c.passed() {
                "pass"
            } else {
                "FAIL"
            };
            writeln!(
                f,
                "{state} {:<40} {:>8} instances {:>4} failures",
                c.id, c.instances, c.failures
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum Hyp {
    Always,
    Pt,
    PtDt,
}

const CHECKS: &[(&str, &str, Hyp)] = &[
    (
        "map_validity",
        "every enumerated map is simplicial and unanimous, and no map repeats",
        Hyp::Always,
    ),
    (
        "complement_sign",
        "if G is almost-decisive over {a,b}, the vertex U_ab for the complement of G maps to minus",
        Hyp::Always,
    ),
    (
        "critical_triangle",
        "in a triangle with a unanimity vertex U_ab, the edge {U_bc, U_ca} is not sent to (+,+)",
        Hyp::Always,
    ),
    (
        "polarized_edge_exclusion",
        "when a polarized block is a subcomplex, its mixed edges avoid the sign pair the block forbids",
        Hyp::Always,
    ),
    (
        "polarized_edge_non_dbt",
        "when a polarized block is a subcomplex, edges {U_bc^G, U_ab^Gc} and {U_bc^Gc, U_ab^G} get mixed signs",
        Hyp::Always,
    ),
    (
        "coalition_or_complement_over_triple",
        "when a polarized block for (G, Y) is a subcomplex, G or its complement is almost-decisive over Y",
        Hyp::Always,
    ),
    (
        "coalition_or_complement_over_triple_trivial",
        "for G empty or N, G or its complement is almost-decisive over every triple",
        Hyp::Always,
    ),
    (
        "empty_not_decisive_iff_nx",
        "the empty coalition is not almost-decisive iff some vertex is unanimous",
        Hyp::Always,
    ),
    (
        "gy_vertex_iff",
        "a vertex U_ab^G with a,b in Y exists iff G and its complement are not both almost-decisive over Y",
        Hyp::Always,
    ),
    (
        "ultrafilter_dictator",
        "if the almost-decisive family is an ultrafilter, its principal voter is a dictator",
        Hyp::Always,
    ),
    (
        "contagion",
        "on a polarized domain, U_ab^G mapped to plus makes G almost-decisive",
        Hyp::Pt,
    ),
    (
        "coalition_or_complement",
        "on a polarized domain, G or its complement is almost-decisive",
        Hyp::Pt,
    ),
    (
        "intersection_closure",
        "on a polarized and diverse domain, almost-decisive coalitions are closed under intersection",
        Hyp::PtDt,
    ),
    (
        "ultrafilter",
        "on a polarized and diverse domain, the almost-decisive family is an ultrafilter",
        Hyp::PtDt,
    ),
    (
        "superset_closure",
        "on a polarized and diverse domain, supersets of almost-decisive coalitions are almost-decisive",
        Hyp::PtDt,
    ),
    (
        "dictatorial",
        "on a polarized and diverse domain, every map has a dictator",
        Hyp::PtDt,
    ),
    (
        "diversity_formulations_agree",
        "the simplex and profile-pattern descriptions of diversity agree for every incomparable pair",
        Hyp::Always,
    ),
];

fn check_index(id: &str) -> usize {
    CHECKS.iter().position(|c| c.0 == id).expect("known check")
}

#[derive(Clone, Default)]
struct Tally {
    instances: u64,
    failures: u64,
    examples: Vec<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(describe());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.instances += other.instances;
        self.failures += other.failures;
        let room = MAX_EXAMPLES - self.examples.len();
        self.examples.extend(other.examples.into_iter().take(room));
    }
}

struct Tallies(Vec<Tally>);

impl Tallies {
    fn new() -> Self {
        Tallies(vec![Tally::default(); CHECKS.len()])
    }

    fn at(&mut self, id: &str) -> &mut Tally {
        &mut self.0[check_index(id)]
    }
}

/// Sign of `f(U_{ab}^{σ^G})` in the `(a, b)` orientation, for every
/// coalition and ordered pair.
struct Oriented {
    m: usize,
    signs: Vec<Option<Sign>>,
}

impl Oriented {
    fn new(f: &ChromaticMap) -> Oriented {
        let nerve = f.nerve();
        let n = nerve.voters();
        let m = nerve.alternatives().len();
        let mut signs = vec![None; (1 << n) * m * m];
        for (v, l) in nerve.vertices().iter().enumerate() {
            let g = l.sigma().plus_coalition();
            let (a, b) = (l.first(), l.second());
            let s = f.sign(v);
            signs[(g.bits() as usize * m + a) * m + b] = Some(s);
            let gc = g.complement(n);
            signs[(gc.bits() as usize * m + b) * m + a] = Some(-s);
        }
        Oriented { m, signs }
    }

    fn get(&self, g: Coalition, a: usize, b: usize) -> Option<Sign> {
        self.signs[(g.bits() as usize * self.m + a) * self.m + b]
    }

    fn almost_decisive(&self, g: Coalition, ys: &[usize]) -> bool {
        ys.iter().all(|&a| {
            ys.iter()
                .all(|&b| a == b || self.get(g, a, b) != Some(Sign::Minus))
        })
    }
}

fn permutations(t: [usize; 3]) -> [[usize; 3]; 6] {
    let [a, b, c] = t;
    [
        [a, b, c],
        [a, c, b],
        [b, a, c],
        [b, c, a],
        [c, a, b],
        [c, b, a],
    ]
}

/// Domain-level facts shared by every map.
struct Context<'a> {
    nerve: &'a Nerve,
    n: usize,
    all: Vec<usize>,
    triples: Vec<[usize; 3]>,
    /// Blocks present per (proper coalition bits, triple index).
    blocks: Vec<[bool; 2]>,
    gy_scopes: Vec<Vec<usize>>,
    /// `in_gy_class` per (coalition bits, scope index).
    gy: Vec<bool>,
    triangles: Vec<[u32; 3]>,
    pt: bool,
    ptdt: bool,
    nx: bool,
}

impl Context<'_> {
    fn blocks(&self, g: Coalition, t: usize) -> [bool; 2] {
        self.blocks[g.bits() as usize * self.triples.len() + t]
    }
}

fn name(ctx: &Context<'_>, ys: &[usize]) -> String {
    let alts = ctx.nerve.alternatives();
    ys.iter().map(|&a| alts.name(a)).collect::<Vec<_>>().join("")
}

fn audit_map(ctx: &Context<'_>, k: usize, f: &ChromaticMap) -> Tallies {
    let mut t = Tallies::new();
    let n = ctx.n;
    let o = Oriented::new(f);
    let tag = || format!("map #{} [{}]", k + 1, f.sign_string());
    let show = |s: Option<Sign>| s.map_or('?', Sign::as_char);

    t.at("map_validity")
        .record(f.is_simplicial() && f.satisfies_unanimity(), || {
            format!("{}: not simplicial or not unanimous", tag())
        });

    // Complement sign over every pair.
    for g in Coalition::all(n) {
        for &(a, b) in &pairs_of(&ctx.all) {
            for (x, y) in [(a, b), (b, a)] {
                if !o.almost_decisive(g, &[x, y]) {
                    continue;
                }
                let s = o.get(g.complement(n), x, y);
                if s.is_some() {
                    t.at("complement_sign").record(s == Some(Sign::Minus), || {
                        format!("{}: G={g} pair {}", tag(), name(ctx, &[x, y]))
                    });
                }
            }
        }
    }

    // Triangles with a unanimity vertex.
    let vertices = ctx.nerve.vertices();
    for tri in &ctx.triangles {
        for (u, rest) in [(0, [1, 2]), (1, [0, 2]), (2, [0, 1])] {
            let l = vertices[tri[u] as usize];
            if !l.sigma().is_unanimous() {
                continue;
            }
            let (a, b) = if l.sigma().is_all_plus() {
                (l.first(), l.second())
            } else {
                (l.second(), l.first())
            };
            // Sign of vertex `v` read in the orientation starting at `x`.
            let oriented = |v: u32, x: usize| {
                let s = f.sign(v as usize);
                if vertices[v as usize].first() == x {
                    s
                } else {
                    -s
                }
            };
            let [p, q] = rest.map(|r| tri[r]);
            let on_b = |v: u32| {
                let lv = vertices[v as usize];
                lv.first() == b || lv.second() == b
            };
            let (bc, ca) = if on_b(p) { (p, q) } else { (q, p) };
            let lc = vertices[bc as usize];
            let c = if lc.first() == b { lc.second() } else { lc.first() };
            let s_bc = oriented(bc, b);
            let s_ca = oriented(ca, c);
            t.at("critical_triangle")
                .record(!(s_bc == Sign::Plus && s_ca == Sign::Plus), || {
                    format!("{}: triangle on {} unanimous on {}", tag(), name(ctx, &[a, b, c]), name(ctx, &[a, b]))
                });
        }
    }

    // Polarized blocks.
    for g in Coalition::proper(n) {
        let gc = g.complement(n);
        for (ti, &triple) in ctx.triples.iter().enumerate() {
            let present = ctx.blocks(g, ti);
            for (bi, block) in [Block::One, Block::Two].into_iter().enumerate() {
                if !present[bi] {
                    continue;
                }
                let (first_bad, second_bad) = match block {
                    Block::One => (Sign::Minus, Sign::Plus),
                    Block::Two => (Sign::Plus, Sign::Minus),
                };
                for [a, b, c] in permutations(triple) {
                    for (g1, g2, bad) in [(g, gc, first_bad), (gc, g, second_bad)] {
                        let (s1, s2) = (o.get(g1, a, c), o.get(g2, b, a));
                        if s1.is_none() || s2.is_none() {
                            continue;
                        }
                        t.at("polarized_edge_exclusion")
                            .record(!(s1 == Some(bad) && s2 == Some(bad)), || {
                                format!(
                                    "{}: block D{} G={g1} edge (U_{}, U_{}) sent to ({},{})",
                                    tag(),
                                    block.number(),
                                    name(ctx, &[a, c]),
                                    name(ctx, &[b, a]),
                                    show(s1),
                                    show(s2)
                                )
                            });
                    }
                }
            }
            if present[0] || present[1] {
                for [alpha, beta, gamma] in permutations(triple) {
                    for (g1, g2) in [(g, gc), (gc, g)] {
                        let (s1, s2) = (o.get(g1, beta, gamma), o.get(g2, alpha, beta));
                        if s1.is_none() || s2.is_none() {
                            continue;
                        }
                        t.at("polarized_edge_non_dbt").record(s1 != s2, || {
                            format!(
                                "{}: G={g1} edge (U_{}, U_{}) sent to ({},{})",
                                tag(),
                                name(ctx, &[beta, gamma]),
                                name(ctx, &[alpha, beta]),
                                show(s1),
                                show(s2)
                            )
                        });
                    }
                }
                t.at("coalition_or_complement_over_triple").record(
                    o.almost_decisive(g, &triple) || o.almost_decisive(gc, &triple),
                    || format!("{}: G={g} Y={}", tag(), name(ctx, &triple)),
                );
            }
        }
    }
    for g in [Coalition::EMPTY, Coalition::full(n)] {
        for triple in &ctx.triples {
            t.at("coalition_or_complement_over_triple_trivial").record(
                o.almost_decisive(g, triple) || o.almost_decisive(g.complement(n), triple),
                || format!("{}: G={g} Y={}", tag(), name(ctx, triple)),
            );
        }
    }

    let family = almost_decisive_family(f);
    t.at("empty_not_decisive_iff_nx")
        .record(!family.contains(Coalition::EMPTY) == ctx.nx, || {
            format!("{}: family {family}", tag())
        });

    for g in Coalition::all(n) {
        let gc = g.complement(n);
        for (si, ys) in ctx.gy_scopes.iter().enumerate() {
            let vertex = ctx.gy[g.bits() as usize * ctx.gy_scopes.len() + si];
            let both = o.almost_decisive(g, ys) && o.almost_decisive(gc, ys);
            t.at("gy_vertex_iff").record(vertex == !both, || {
                format!("{}: G={g} Y={}", tag(), name(ctx, ys))
            });
        }
    }

    let dictators = f.dictators();
    if is_ultrafilter(&family) {
        let d = principal_element(&family).expect("ultrafilter");
        t.at("ultrafilter_dictator").record(dictators.contains(&d), || {
            format!("{}: principal voter {} is not a dictator", tag(), d + 1)
        });
    }

    if ctx.pt {
        for g in Coalition::proper(n) {
            for &(a, b) in &pairs_of(&ctx.all) {
                for (x, y) in [(a, b), (b, a)] {
                    if o.get(g, x, y) == Some(Sign::Plus) {
                        t.at("contagion").record(o.almost_decisive(g, &ctx.all), || {
                            format!("{}: G={g} plus on {}", tag(), name(ctx, &[x, y]))
                        });
                    }
                }
            }
        }
        for g in Coalition::all(n) {
            t.at("coalition_or_complement").record(
                family.contains(g) || family.contains(g.complement(n)),
                || format!("{}: G={g}", tag()),
            );
        }
    }

    if ctx.ptdt {
        audit_ptdt(&mut t, &family, &dictators, &tag);
    }
    t
}

fn audit_ptdt(
    t: &mut Tallies,
    family: &CoalitionFamily,
    dictators: &[usize],
    tag: &dyn Fn() -> String,
) {
    let members: Vec<Coalition> = family.members().collect();
    for &g in &members {
        for &h in &members {
            t.at("intersection_closure")
                .record(family.contains(g.intersection(h)), || {
                    format!("{}: {g} and {h} but not their intersection", tag())
                });
        }
    }
    let ultra = check_ultrafilter(family);
    t.at("ultrafilter").record(ultra.is_ok(), || {
        format!("{}: family {family}: {}", tag(), ultra.unwrap_err())
    });
    if ultra.is_ok() {
        let d = principal_element(family).expect("ultrafilter");
        t.at("ultrafilter").record(dictators.contains(&d), || {
            format!("{}: principal voter {} is not a dictator", tag(), d + 1)
        });
    }
    let up = upward_closure_violation(family);
    t.at("superset_closure").record(up.is_none(), || {
        let (g, h) = up.unwrap();
        format!("{}: {g} is almost-decisive but {h} is not", tag())
    });
    t.at("dictatorial")
        .record(!dictators.is_empty(), || format!("{}: no dictator", tag()));
}

fn audit_diversity(ctx: &Context<'_>, dt_member: bool, t: &mut Tallies) {
    let nerve = ctx.nerve;
    let n = ctx.n;
    let domain = nerve.domain();
    let restricted: Vec<HashSet<_>> = ctx
        .triples
        .iter()
        .map(|tr| domain.restrict(tr).expect("triple").into_iter().collect())
        .collect();
    let pairs = incomparable_pairs(n);
    let mut all_simplex = true;
    for &(g, h) in &pairs {
        let rest = g.intersection(h).complement(n);
        let mut by_simplex = false;
        let mut by_pattern = false;
        for (ti, &triple) in ctx.triples.iter().enumerate() {
            for [a, b, c] in permutations(triple) {
                let ids = [
                    nerve.lookup(a, b, g.sign_vector(n)),
                    nerve.lookup(b, c, h.sign_vector(n)),
                    nerve.lookup(c, a, rest.sign_vector(n)),
                ];
                if let [Some(x), Some(y), Some(z)] = ids {
                    by_simplex |= nerve.is_simplex_ids(&[x, y, z]);
                }
                let pattern = diversity_pattern(n, g, h, [a, b, c]);
                by_pattern |= restricted[ti].contains(&pattern);
            }
        }
        all_simplex &= by_simplex;
        t.at("diversity_formulations_agree")
            .record(by_simplex == by_pattern, || {
                format!(
                    "G={g} G'={h}: simplex {} pattern {}",
                    by_simplex, by_pattern
                )
            });
    }
    t.at("diversity_formulations_agree")
        .record(all_simplex == dt_member, || {
            format!("class check says {dt_member}, simplex search says {all_simplex}")
        });
}

/// Runs every check against `maps`, which should be the complete list of
/// unanimous simplicial maps on `nerve`.
pub fn audit_lemmas(nerve: &Arc<Nerve>, maps: &[ChromaticMap]) -> Result<AuditReport> {
    let domain = nerve.domain();
    let n = domain.voters();
    let m = domain.alternatives().len();
    if m < 3 || n < 2 {
        return Err(Error::precondition(
            "the audit needs at least 3 alternatives and 2 voters",
        ));
    }
    if n > MAX_AUDIT_VOTERS {
        return Err(Error::precondition(format!(
            "the audit handles at most {MAX_AUDIT_VOTERS} voters"
        )));
    }
    if maps.iter().any(|f| !Arc::ptr_eq(f.nerve(), nerve) && f.nerve().vertices() != nerve.vertices()) {
        return Err(Error::domain("maps were built on a different nerve"));
    }
    let pt = in_pt(domain)?.member;
    let dt = in_dt(domain)?.member;
    let all: Vec<usize> = (0..m).collect();
    let triples = triples_of(&all);

    let mut blocks = vec![[false; 2]; (1 << n) * triples.len()];
    for g in Coalition::proper(n) {
        for (ti, tr) in triples.iter().enumerate() {
            blocks[g.bits() as usize * triples.len() + ti] = [
                has_bi_subcomplex(domain, g, tr, Block::One),
                has_bi_subcomplex(domain, g, tr, Block::Two),
            ];
        }
    }
    let mut gy_scopes: Vec<Vec<usize>> = pairs_of(&all).into_iter().map(|(a, b)| vec![a, b]).collect();
    gy_scopes.extend(triples.iter().map(|t| t.to_vec()));
    if m > 3 {
        gy_scopes.push(all.clone());
    }
    let mut gy = Vec::with_capacity((1 << n) * gy_scopes.len());
    for g in Coalition::all(n) {
        for ys in &gy_scopes {
            gy.push(in_gy_class(domain, g, ys));
        }
    }

    let ctx = Context {
        nerve,
        n,
        all,
        triples,
        blocks,
        gy_scopes,
        gy,
        triangles: facet_triangles(nerve),
        pt,
        ptdt: pt && dt,
        nx: in_nx_class(domain),
    };

    let per_map: Vec<Tallies> = maps
        .par_iter()
        .enumerate()
        .map(|(k, f)| audit_map(&ctx, k, f))
        .collect();
    let mut total = Tallies::new();
    let distinct: HashSet<&[Sign]> = maps.iter().map(|f| f.signs()).collect();
    total.at("map_validity").record(distinct.len() == maps.len(), || {
        "the map list contains duplicates".to_string()
    });
    for tallies in per_map {
        for (acc, part) in total.0.iter_mut().zip(tallies.0) {
            acc.merge(part);
        }
    }
    audit_diversity(&ctx, dt, &mut total);

    let checks = CHECKS
        .iter()
        .zip(total.0)
        .map(|(&(id, statement, hyp), tally)| CheckResult {
            id,
            statement,
            applicable: match hyp {
                Hyp::Always => true,
                Hyp::Pt => pt,
                Hyp::PtDt => pt && dt,
            },
            instances: tally.instances,
            failures: tally.failures,
            examples: tally.examples,
        })
        .collect();
    Ok(AuditReport {
        in_pt: pt,
        in_dt: dt,
        in_nx: ctx.nx,
        maps: maps.len(),
        checks,
    })
}
