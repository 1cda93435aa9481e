//! Polarized profiles and the domain classes built from them.
//!
//! A triple `Y = {α, β, γ}` is always read in index order, which fixes the
//! roles of `α`, `β` and `γ` in the two generator sets below.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::preferences::{
    full_mask, normalize_subset, AlternativeSet, Coalition, Domain, Profile, Ranking,
};

/// Which of the two polarized generator sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    One,
    Two,
}

impl Block {
    pub fn number(self) -> u8 {
        match self {
            Block::One => 1,
            Block::Two => 2,
        }
    }
}

/// `(G ranking, G^c ranking)` of the first block, as positions into
/// `[α, β, γ]`. The second block swaps the two sides.
const BLOCK_ONE: [([usize; 3], [usize; 3]); 6] = [
    ([1, 2, 0], [0, 1, 2]),
    ([1, 0, 2], [0, 2, 1]),
    ([0, 1, 2], [2, 0, 1]),
    ([0, 2, 1], [2, 1, 0]),
    ([2, 0, 1], [1, 2, 0]),
    ([2, 1, 0], [1, 0, 2]),
];

/// The six strongly polarized profiles of one block for `(G, Y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleProfileSet {
    pub coalition: Coalition,
    pub triple: [usize; 3],
    pub block: Block,
    pub profiles: Vec<Profile>,
}

fn check_proper(n: usize, g: Coalition) -> Result<()> {
    if n < 2 {
        return Err(Error::domain("polarized profiles need at least 2 voters"));
    }
    if g.is_empty() || g == Coalition::full(n) || !g.is_subset(Coalition::full(n)) {
        return Err(Error::domain(format!(
            "coalition {g} must be non-empty and distinct from N"
        )));
    }
    Ok(())
}

fn sorted_triple(triple: &[usize]) -> Result<[usize; 3]> {
    if triple.len() != 3 {
        return Err(Error::domain(format!(
            "expected 3 alternatives, got {}",
            triple.len()
        )));
    }
    let v = normalize_subset(triple, usize::MAX)?;
    Ok([v[0], v[1], v[2]])
}

fn ranking_of(triple: &[usize; 3], positions: [usize; 3]) -> Ranking {
    Ranking::new(positions.iter().map(|&k| triple[k]).collect()).unwrap()
}

/// One block of strongly polarized profiles over `n` voters.
pub fn gen_block(n: usize, g: Coalition, triple: &[usize], block: Block) -> Result<TripleProfileSet> {
    check_proper(n, g)?;
    let t = sorted_triple(triple)?;
    let profiles = BLOCK_ONE
        .iter()
        .map(|&(on_g, off_g)| {
            let (p, q) = match block {
                Block::One => (on_g, off_g),
                Block::Two => (off_g, on_g),
            };
            Profile::polarized(n, g, &ranking_of(&t, p), &ranking_of(&t, q))
        })
        .collect();
    Ok(TripleProfileSet {
        coalition: g,
        triple: t,
        block,
        profiles,
    })
}

pub fn gen_d1(n: usize, g: Coalition, triple: &[usize]) -> Result<TripleProfileSet> {
    gen_block(n, g, triple, Block::One)
}

pub fn gen_d2(n: usize, g: Coalition, triple: &[usize]) -> Result<TripleProfileSet> {
    gen_block(n, g, triple, Block::Two)
}

/// Two-block profile on a triple whose blocks disagree on exactly two of
/// the three pairs.
pub fn is_strongly_polarized(p: &Profile) -> Result<bool> {
    let alts = p.alternatives();
    if alts.len() != 3 {
        return Err(Error::domain(format!(
            "strong polarization is defined on triples, profile ranks {}",
            alts.len()
        )));
    }
    let mut distinct: Vec<&Ranking> = p.rankings().iter().collect();
    distinct.sort();
    distinct.dedup();
    let [first, second] = distinct[..] else {
        return Ok(false);
    };
    let disagreements = [(alts[0], alts[1]), (alts[0], alts[2]), (alts[1], alts[2])]
        .iter()
        .filter(|&&(a, b)| first.prefers(a, b) != second.prefers(a, b))
        .count();
    Ok(disagreements == 2)
}

/// Whether every profile of the block appears in `D|_Y`, i.e. the block's
/// nerve is a subcomplex of `N_D`.
pub fn has_bi_subcomplex(d: &Domain, g: Coalition, triple: &[usize], block: Block) -> bool {
    let Ok(set) = gen_block(d.voters(), g, triple, block) else {
        return false;
    };
    let Ok(restricted) = d.restrict(&set.triple) else {
        return false;
    };
    set.profiles.iter().all(|p| restricted.contains(p))
}

/// Some pair `α, β ∈ Y` has `U_{αβ}^{σ^G}` as a vertex of `N_D`.
pub fn in_gy_class(d: &Domain, g: Coalition, ys: &[usize]) -> bool {
    let n = d.voters();
    let target = g.sign_vector(n);
    let pairs = crate::preferences::pairs_of(ys);
    d.profiles().iter().any(|p| {
        pairs.iter().any(|&(a, b)| {
            let sv = p.sign_vector_unchecked(a, b);
            sv == target || sv == -target
        })
    })
}

/// Some pair has a vertex on which all voters agree.
pub fn in_nx_class(d: &Domain) -> bool {
    in_gy_class(d, Coalition::full(d.voters()), &d.alternatives().indices())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `D|_Y` contains the whole block for `G` (and the complementary block
    /// for `G^c`).
    Polarized {
        coalition: Coalition,
        triple: [usize; 3],
        block: Block,
    },
    /// Neither block is contained in `D|_Y`.
    MissingPolarized { coalition: Coalition, triple: [usize; 3] },
    /// `{U_{αβ}^{σ^G}, U_{βγ}^{σ^{G'}}, U_{γα}^{σ^{(G∩G')^c}}}` is realized
    /// by the given profile.
    Diverse {
        first: Coalition,
        second: Coalition,
        alphas: [usize; 3],
        profile: usize,
    },
    /// No ordered triple realizes the diversity simplex.
    MissingDiverse { first: Coalition, second: Coalition },
}

impl Witness {
    pub fn is_failure(&self) -> bool {
        matches!(
            self,
            Witness::MissingPolarized { .. } | Witness::MissingDiverse { .. }
        )
    }

    pub fn describe(&self, alts: &AlternativeSet) -> String {
        let t = |ys: &[usize]| ys.iter().map(|&a| alts.name(a)).collect::<Vec<_>>().join("");
        match self {
            Witness::Polarized {
                coalition,
                triple,
                block,
            } => format!("G={coalition} Y={} block D{}", t(triple), block.number()),
            Witness::MissingPolarized { coalition, triple } => {
                format!("G={coalition} Y={} has neither block", t(triple))
            }
            Witness::Diverse {
                first,
                second,
                alphas,
                profile,
            } => format!(
                "G={first} G'={second} (α,β,γ)=({}) profile #{}",
                alphas.map(|a| alts.name(a).to_string()).join(","),
                profile + 1
            ),
            Witness::MissingDiverse { first, second } => {
                format!("G={first} G'={second} has no diversity simplex")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCertificate {
    pub member: bool,
    pub witnesses: Vec<Witness>,
}

impl ClassCertificate {
    pub fn failures(&self) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(|w| w.is_failure())
    }

    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }
}

fn require_theorem_size(d: &Domain) -> Result<()> {
    if d.alternatives().len() < 3 || d.voters() < 2 {
        return Err(Error::precondition(
            "class membership needs at least 3 alternatives and 2 voters",
        ));
    }
    Ok(())
}

/// One representative per unordered pair `{G, G^c}` of proper coalitions:
/// the one containing voter 1.
pub fn coalition_pair_representatives(n: usize) -> impl Iterator<Item = Coalition> {
    Coalition::proper(n).filter(|g| g.contains(0))
}

/// Membership in the polarization-over-triples class. Since the first block
/// of `G^c` is the second block of `G`, each pair `{G, G^c}` is checked once.
pub fn in_pt(d: &Domain) -> Result<ClassCertificate> {
    require_theorem_size(d)?;
    let n = d.voters();
    let triples = d.alternatives().triples();
    let restricted: Vec<HashSet<Profile>> = triples
        .par_iter()
        .map(|t| d.profiles().iter().map(|p| p.restrict(t).unwrap()).collect())
        .collect();
    let cells: Vec<(Coalition, usize)> = coalition_pair_representatives(n)
        .flat_map(|g| (0..triples.len()).map(move |k| (g, k)))
        .collect();
    let witnesses: Vec<Witness> = cells
        .par_iter()
        .map(|&(g, k)| {
            let triple = triples[k];
            let found = [Block::One, Block::Two].into_iter().find(|&block| {
                gen_block(n, g, &triple, block)
                    .unwrap()
                    .profiles
                    .iter()
                    .all(|p| restricted[k].contains(p))
            });
            match found {
                Some(block) => Witness::Polarized {
                    coalition: g,
                    triple,
                    block,
                },
                None => Witness::MissingPolarized {
                    coalition: g,
                    triple,
                },
            }
        })
        .collect();
    let member = witnesses.iter().all(|w| !w.is_failure());
    let witnesses = if member {
        witnesses
    } else {
        witnesses.into_iter().filter(Witness::is_failure).collect()
    };
    Ok(ClassCertificate { member, witnesses })
}

/// Ordered pairs `(G, G')` with neither contained in the other, in bitmask
/// order.
pub fn incomparable_pairs(n: usize) -> Vec<(Coalition, Coalition)> {
    let mut out = Vec::new();
    for g in Coalition::proper(n) {
        for h in Coalition::proper(n) {
            if !g.is_subset(h) && !h.is_subset(g) {
                out.push((g, h));
            }
        }
    }
    out
}

/// Ordered triples of distinct alternatives.
fn ordered_triples(m: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                if a != b && b != c && a != c {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// Every `(G, G')` whose diversity simplex some profile realizes, mapped to
/// the first `(profile, (α, β, γ))` doing so.
fn realized_diversity(d: &Domain) -> BTreeMap<(u32, u32), (usize, [usize; 3])> {
    let n = d.voters();
    let mask = full_mask(n);
    let orders = ordered_triples(d.alternatives().len());
    let per_profile: Vec<Vec<(u32, u32, [usize; 3])>> = d
        .profiles()
        .par_iter()
        .map(|p| {
            orders
                .iter()
                .filter_map(|&[a, b, c]| {
                    let g = p.sign_vector_unchecked(a, b).plus_mask();
                    let h = p.sign_vector_unchecked(b, c).plus_mask();
                    let rest = p.sign_vector_unchecked(c, a).plus_mask();
                    (rest == !(g & h) & mask).then_some((g, h, [a, b, c]))
                })
                .collect()
        })
        .collect();
    let mut out = BTreeMap::new();
    for (k, hits) in per_profile.into_iter().enumerate() {
        for (g, h, abc) in hits {
            out.entry((g, h)).or_insert((k, abc));
        }
    }
    out
}

/// Membership in the diversity-over-triples class.
pub fn in_dt(d: &Domain) -> Result<ClassCertificate> {
    require_theorem_size(d)?;
    let realized = realized_diversity(d);
    let mut witnesses = Vec::new();
    for (g, h) in incomparable_pairs(d.voters()) {
        match realized.get(&(g.bits(), h.bits())) {
            Some(&(profile, alphas)) => witnesses.push(Witness::Diverse {
                first: g,
                second: h,
                alphas,
                profile,
            }),
            None => {
                return Ok(ClassCertificate {
                    member: false,
                    witnesses: vec![Witness::MissingDiverse {
                        first: g,
                        second: h,
                    }],
                })
            }
        }
    }
    Ok(ClassCertificate {
        member: true,
        witnesses,
    })
}

/// Membership in both classes.
pub fn in_pt_dt(d: &Domain) -> Result<bool> {
    Ok(in_pt(d)?.member && in_dt(d)?.member)
}

/// The profile on `(α, β, γ)` that realizes the diversity simplex of
/// `(G, G')`: `γαβ` on `G∖G'`, `αβγ` on `G∩G'`, `βγα` on `G'∖G`, `γβα`
/// elsewhere.
pub fn diversity_pattern(n: usize, g: Coalition, h: Coalition, abc: [usize; 3]) -> Profile {
    let [a, b, c] = abc;
    let rankings = (0..n)
        .map(|i| {
            let order = match (g.contains(i), h.contains(i)) {
                (true, false) => vec![c, a, b],
                (true, true) => vec![a, b, c],
                (false, true) => vec![b, c, a],
                (false, false) => vec![c, b, a],
            };
            Ranking::new(order).unwrap()
        })
        .collect();
    Profile::new(rankings).unwrap()
}

/// Extends a profile on a subset to all of `X`: the remaining alternatives
/// go below, in index order, identically for every voter.
pub fn lift(p: &Profile, alts: &AlternativeSet) -> Profile {
    let own = p.alternatives();
    let tail: Vec<usize> = (0..alts.len()).filter(|a| own.binary_search(a).is_err()).collect();
    Profile::new(
        p.rankings()
            .iter()
            .map(|r| {
                let mut order = r.order().to_vec();
                order.extend(&tail);
                Ranking::new(order).unwrap()
            })
            .collect(),
    )
    .unwrap()
}

fn take_bits(choices: &mut dyn Iterator<Item = bool>, width: u32) -> usize {
    (0..width).fold(0, |acc, _| acc << 1 | usize::from(choices.next().unwrap_or(false)))
}

fn bits_for(count: usize) -> u32 {
    usize::BITS - count.saturating_sub(1).leading_zeros()
}

/// Builds a domain in both classes from a stream of choice bits.
///
/// Bits are consumed in this order: for each representative coalition (in
/// bitmask order) and each triple, one bit selecting the first (`false`) or
/// second block; then for each incomparable ordered pair `(G, G')`,
/// `⌈log2 #triples⌉` bits choosing the triple (modulo the count) and 3 bits
/// choosing one of its 6 orderings (modulo 6). An exhausted stream reads as
/// `false`. The result is re-checked before it is returned.
pub fn gen_ptdt_domain(
    alts: &AlternativeSet,
    n: usize,
    choices: &mut dyn Iterator<Item = bool>,
) -> Result<Domain> {
    if alts.len() < 3 || n < 2 {
        return Err(Error::precondition(
            "witness domains need at least 3 alternatives and 2 voters",
        ));
    }
    let triples = alts.triples();
    let mut profiles = Vec::new();
    for g in coalition_pair_representatives(n).collect::<Vec<_>>() {
        for t in &triples {
            let block = if choices.next().unwrap_or(false) {
                Block::Two
            } else {
                Block::One
            };
            let set = gen_block(n, g, t, block)?;
            profiles.extend(set.profiles.iter().map(|p| lift(p, alts)));
        }
    }
    let triple_bits = bits_for(triples.len());
    for (g, h) in incomparable_pairs(n) {
        let t = triples[take_bits(choices, triple_bits) % triples.len()];
        let perm = PERMUTATIONS[take_bits(choices, 3) % 6];
        let abc = [t[perm[0]], t[perm[1]], t[perm[2]]];
        profiles.push(lift(&diversity_pattern(n, g, h, abc), alts));
    }
    let d = Domain::new(alts.clone(), n, profiles)?;
    if !in_pt_dt(&d)? {
        return Err(Error::precondition(
            "generated domain failed re-verification of class membership",
        ));
    }
    Ok(d)
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Re-checks both classes on a superdomain of a member domain.
pub fn check_upward_closure(d: &Domain, larger: &Domain) -> Result<bool> {
    if !d.is_subset_of(larger) {
        return Err(Error::domain("second domain does not contain the first"));
    }
    if !in_pt_dt(d)? {
        return Err(Error::precondition(
            "base domain is not in both polarization and diversity classes",
        ));
    }
    in_pt_dt(larger)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn xyz() -> AlternativeSet {
        AlternativeSet::standard(3).unwrap()
    }

    fn rank(s: &str, alts: &AlternativeSet) -> Ranking {
        Ranking::new(
            s.chars()
                .map(|c| alts.index_of(&c.to_string()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn prof(s: &str, alts: &AlternativeSet) -> Profile {
        Profile::new(s.split_whitespace().map(|w| rank(w, alts)).collect()).unwrap()
    }

    fn g(members: &[usize]) -> Coalition {
        Coalition::from_members(&members.iter().map(|v| v - 1).collect::<Vec<_>>())
    }

    #[test]
    fn strong_polarization_examples() {
        let alts = xyz();
        // α=x, β=y, γ=z
        assert!(is_strongly_polarized(&prof("yzx xyz", &alts)).unwrap());
        assert!(!is_strongly_polarized(&prof("xyz xyz", &alts)).unwrap());
        assert!(!is_strongly_polarized(&prof("xyz zyx", &alts)).unwrap());
        assert!(!is_strongly_polarized(&prof("xyz yzx zxy", &alts)).unwrap());
        let four = AlternativeSet::standard(4).unwrap();
        assert!(is_strongly_polarized(&prof("wxyz wxyz", &four)).is_err());
    }

    #[test]
    fn block_one_matches_listing() {
        let alts = xyz();
        let d1 = gen_d1(2, g(&[1]), &[0, 1, 2]).unwrap();
        let expected: Vec<Profile> = [
            "yzx xyz", "yxz xzy", "xyz zxy", "xzy zyx", "zxy yzx", "zyx yxz",
        ]
        .iter()
        .map(|s| prof(s, &alts))
        .collect();
        assert_eq!(d1.profiles, expected);
    }

    #[test]
    fn block_structure() {
        for n in 2..=3 {
            for coal in Coalition::proper(n) {
                let d1: BTreeSet<Profile> =
                    gen_d1(n, coal, &[0, 1, 2]).unwrap().profiles.into_iter().collect();
                let d2: BTreeSet<Profile> =
                    gen_d2(n, coal, &[0, 1, 2]).unwrap().profiles.into_iter().collect();
                assert_eq!(d1.len(), 6);
                assert_eq!(d2.len(), 6);
                assert!(d1.is_disjoint(&d2));
                let swapped: BTreeSet<Profile> = gen_d1(n, coal.complement(n), &[0, 1, 2])
                    .unwrap()
                    .profiles
                    .into_iter()
                    .collect();
                assert_eq!(swapped, d2);
                for p in d1.iter().chain(&d2) {
                    assert!(is_strongly_polarized(p).unwrap());
                }
                let lead = coal.members().next().unwrap();
                let g_side: BTreeSet<&Ranking> = d1.iter().map(|p| p.ranking(lead)).collect();
                assert_eq!(g_side.len(), 6);
            }
        }
        assert!(gen_d1(2, Coalition::EMPTY, &[0, 1, 2]).is_err());
        assert!(gen_d1(2, Coalition::full(2), &[0, 1, 2]).is_err());
    }

    #[test]
    fn bi_subcomplex_examples() {
        let alts = xyz();
        let full = Domain::unrestricted(alts.clone(), 2).unwrap();
        assert!(has_bi_subcomplex(&full, g(&[1]), &[0, 1, 2], Block::One));
        assert!(has_bi_subcomplex(&full, g(&[2]), &[0, 1, 2], Block::Two));

        let d1 = Domain::new(alts.clone(), 2, gen_d1(2, g(&[1]), &[0, 1, 2]).unwrap().profiles)
            .unwrap();
        assert!(has_bi_subcomplex(&d1, g(&[1]), &[0, 1, 2], Block::One));
        assert!(!has_bi_subcomplex(&d1, g(&[1]), &[0, 1, 2], Block::Two));

        let unanimous = Domain::new(alts.clone(), 2, vec![prof("xyz xyz", &alts)]).unwrap();
        assert!(!has_bi_subcomplex(&unanimous, g(&[1]), &[0, 1, 2], Block::One));
        assert!(!has_bi_subcomplex(&unanimous, g(&[1]), &[0, 1, 2], Block::Two));
    }

    #[test]
    fn gy_examples() {
        let alts = xyz();
        let full = Domain::unrestricted(alts.clone(), 2).unwrap();
        assert!(in_nx_class(&full));
        let split = Domain::new(alts.clone(), 2, vec![prof("xyz zyx", &alts)]).unwrap();
        assert!(!in_gy_class(&split, Coalition::full(2), &[0, 1, 2]));
        assert!(in_gy_class(&split, g(&[1]), &[0, 1, 2]));
    }

    #[test]
    fn pt_examples() {
        let alts = xyz();
        let full = Domain::unrestricted(alts.clone(), 2).unwrap();
        let cert = in_pt(&full).unwrap();
        assert!(cert.member);
        assert_eq!(cert.len(), 1);

        let unanimous = Domain::new(
            alts.clone(),
            3,
            vec![prof("xyz xyz xyz", &alts), prof("zyx zyx zyx", &alts)],
        )
        .unwrap();
        let cert = in_pt(&unanimous).unwrap();
        assert!(!cert.member);
        assert_eq!(cert.failures().count(), 3);
    }

    #[test]
    fn dt_examples() {
        let alts = xyz();
        let full = Domain::unrestricted(alts.clone(), 2).unwrap();
        let cert = in_dt(&full).unwrap();
        assert!(cert.member);
        assert_eq!(cert.len(), 2);
        assert_eq!(
            diversity_pattern(2, g(&[1]), g(&[2]), [0, 1, 2]),
            prof("zxy yzx", &alts)
        );

        let unanimous = Domain::new(alts.clone(), 2, vec![prof("xyz xyz", &alts)]).unwrap();
        assert!(!in_dt(&unanimous).unwrap().member);
    }

    #[test]
    fn witness_domain_m3_n2() {
        let alts = xyz();
        let d = gen_ptdt_domain(&alts, 2, &mut std::iter::repeat(false)).unwrap();
        assert_eq!(d.len(), 7);
        assert!(in_pt(&d).unwrap().member);
        assert!(in_dt(&d).unwrap().member);
    }

    #[test]
    fn witness_domains_are_members() {
        for m in 3..=4 {
            let alts = AlternativeSet::standard(m).unwrap();
            for n in 2..=3 {
                let d = gen_ptdt_domain(&alts, n, &mut std::iter::repeat(false)).unwrap();
                assert!(in_pt_dt(&d).unwrap());
                let mixed = gen_ptdt_domain(&alts, n, &mut [true, false, true].into_iter().cycle())
                    .unwrap();
                assert!(in_pt_dt(&mixed).unwrap());
            }
        }
        let four = AlternativeSet::standard(4).unwrap();
        let d = gen_ptdt_domain(&four, 2, &mut std::iter::repeat(false)).unwrap();
        assert!(d.len() <= 6 * 4 + 2);
    }

    #[test]
    fn upward_closure_examples() {
        let alts = xyz();
        let d = gen_ptdt_domain(&alts, 2, &mut std::iter::repeat(false)).unwrap();
        assert!(check_upward_closure(&d, &d).unwrap());
        let full = Domain::unrestricted(alts.clone(), 2).unwrap();
        assert!(check_upward_closure(&d, &full).unwrap());
        let other = Domain::new(alts.clone(), 2, vec![prof("xyz xyz", &alts)]).unwrap();
        assert!(matches!(check_upward_closure(&d, &other), Err(Error::Domain(_))));
    }
}
