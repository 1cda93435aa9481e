//! Almost-decisive coalitions and ultrafilters on the voter set.

use std::fmt;

use crate::error::{Error, Result};
use crate::preferences::{Coalition, Sign};
use crate::swf::ChromaticMap;

/// Which ordered pairs an almost-decisiveness check ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope<'a> {
    /// The single ordered pair `(a, b)`.
    Pair(usize, usize),
    /// Every ordered pair of distinct alternatives in the subset.
    Subset(&'a [usize]),
    /// Every ordered pair of the alternative set.
    All,
}

impl Scope<'_> {
    fn ordered_pairs(&self, m: usize) -> Vec<(usize, usize)> {
        let within = |ys: &[usize]| {
            let mut out = Vec::new();
            for &a in ys {
                for &b in ys {
                    if a != b {
                        out.push((a, b));
                    }
                }
            }
            out
        };
        match *self {
            Scope::Pair(a, b) => vec![(a, b)],
            Scope::Subset(ys) => within(ys),
            Scope::All => within(&(0..m).collect::<Vec<_>>()),
        }
    }
}

/// `G` is almost-decisive over the scope when every vertex `U_{ab}^{σ^G}`
/// present in the nerve is sent to `U_{ab}^+`. Vacuously true without such
/// vertices.
pub fn is_almost_decisive(f: &ChromaticMap, g: Coalition, scope: Scope<'_>) -> bool {
    let nerve = f.nerve();
    let sigma = g.sign_vector(nerve.voters());
    scope
        .ordered_pairs(nerve.alternatives().len())
        .into_iter()
        .all(|(a, b)| f.oriented_sign(a, b, sigma) != Some(Sign::Minus))
}

/// `G` is decisive when every vertex on which all of `G` ranks `a` over `b`
/// is sent to `U_{ab}^+`, whatever the rest of the voters do.
pub fn is_decisive(f: &ChromaticMap, g: Coalition) -> bool {
    let nerve = f.nerve();
    nerve.vertices().iter().enumerate().all(|(v, l)| {
        let plus = l.sigma().plus_coalition();
        let minus = (-l.sigma()).plus_coalition();
        let s = f.sign(v);
        (!g.is_subset(plus) || s == Sign::Plus) && (!g.is_subset(minus) || s == Sign::Minus)
    })
}

/// A set of coalitions over `n` voters, one bit per coalition bitmask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoalitionFamily {
    voters: usize,
    bits: Vec<u64>,
}

impl CoalitionFamily {
    pub fn empty(voters: usize) -> Self {
        let words = (1usize << voters).div_ceil(64);
        CoalitionFamily {
            voters,
            bits: vec![0; words],
        }
    }

    pub fn from_coalitions(voters: usize, members: impl IntoIterator<Item = Coalition>) -> Self {
        let mut fam = CoalitionFamily::empty(voters);
        for g in members {
            fam.insert(g);
        }
        fam
    }

    /// `{B ⊆ N : voter ∈ B}`.
    pub fn principal(voters: usize, voter: usize) -> Self {
        CoalitionFamily::from_coalitions(voters, Coalition::all(voters).filter(|g| g.contains(voter)))
    }

    pub fn voters(&self) -> usize {
        self.voters
    }

    pub fn insert(&mut self, g: Coalition) {
        let k = g.bits() as usize;
        self.bits[k / 64] |= 1 << (k % 64);
    }

    pub fn contains(&self, g: Coalition) -> bool {
        let k = g.bits() as usize;
        self.bits[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Members in bitmask order.
    pub fn members(&self) -> impl Iterator<Item = Coalition> + '_ {
        Coalition::all(self.voters).filter(|&g| self.contains(g))
    }
}

impl fmt::Display for CoalitionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, g) in self.members().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("}")
    }
}

/// All coalitions that are almost-decisive over every pair.
pub fn almost_decisive_family(f: &ChromaticMap) -> CoalitionFamily {
    let n = f.nerve().voters();
    CoalitionFamily::from_coalitions(
        n,
        Coalition::all(n).filter(|&g| is_almost_decisive(f, g, Scope::All)),
    )
}

/// The first ultrafilter property a family fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UltrafilterViolation {
    /// An ultrafilter is a non-empty family.
    EmptyFamily,
    /// Property 1: the empty coalition is a member.
    ContainsEmpty,
    /// Property 2: neither the coalition nor its complement is a member.
    MissingSetOrComplement(Coalition),
    /// Property 3: both are members, their intersection is not.
    NotClosedUnderIntersection(Coalition, Coalition),
}

impl fmt::Display for UltrafilterViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UltrafilterViolation::EmptyFamily => write!(f, "family is empty"),
            UltrafilterViolation::ContainsEmpty => write!(f, "property 1: contains the empty set"),
            UltrafilterViolation::MissingSetOrComplement(b) => {
                write!(f, "property 2: neither {b} nor its complement is a member")
            }
            UltrafilterViolation::NotClosedUnderIntersection(b, c) => write!(
                f,
                "property 3: {b} and {c} are members but {} is not",
                b.intersection(*c)
            ),
        }
    }
}

/// Checks non-emptiness and the three ultrafilter properties, in order.
pub fn check_ultrafilter(fam: &CoalitionFamily) -> std::result::Result<(), UltrafilterViolation> {
    let n = fam.voters();
    if fam.is_empty() {
        // an empty family also fails property 2 at B = ∅; report the
        // stronger defect
        return Err(UltrafilterViolation::EmptyFamily);
    }
    if fam.contains(Coalition::EMPTY) {
        return Err(UltrafilterViolation::ContainsEmpty);
    }
    if let Some(b) = Coalition::all(n).find(|&b| !fam.contains(b) && !fam.contains(b.complement(n)))
    {
        return Err(UltrafilterViolation::MissingSetOrComplement(b));
    }
    let members: Vec<Coalition> = fam.members().collect();
    for &b in &members {
        for &c in &members {
            if !fam.contains(b.intersection(c)) {
                return Err(UltrafilterViolation::NotClosedUnderIntersection(b, c));
            }
        }
    }
    Ok(())
}

pub fn is_ultrafilter(fam: &CoalitionFamily) -> bool {
    check_ultrafilter(fam).is_ok()
}

/// Derived property: supersets of members are members. Returns a member and
/// a superset that is missing.
pub fn upward_closure_violation(fam: &CoalitionFamily) -> Option<(Coalition, Coalition)> {
    let n = fam.voters();
    fam.members().find_map(|b| {
        Coalition::all(n)
            .find(|&c| b.is_subset(c) && !fam.contains(c))
            .map(|c| (b, c))
    })
}

/// The voter `d` (0-based) with `fam = {B : d ∈ B}`.
pub fn principal_element(fam: &CoalitionFamily) -> Result<usize> {
    if let Err(v) = check_ultrafilter(fam) {
        return Err(Error::precondition(format!("not an ultrafilter: {v}")));
    }
    let n = fam.voters();
    // the intersection of all members is a member, hence a singleton
    let core = fam
        .members()
        .fold(Coalition::full(n), |acc, g| acc.intersection(g));
    let d = core
        .members()
        .next()
        .ok_or_else(|| Error::precondition("ultrafilter members have empty intersection"))?;
    debug_assert_eq!(*fam, CoalitionFamily::principal(n, d));
    Ok(d)
}

/// Checks that `U_{αβ}^{σ^{G^c}}` is sent to `U_{αβ}^-` when `G` is
/// almost-decisive over `{α, β}`. `None` when `G` is not almost-decisive
/// there, so the check does not apply.
pub fn complement_sign_lemma_check(
    f: &ChromaticMap,
    g: Coalition,
    alpha: usize,
    beta: usize,
) -> Option<bool> {
    if !is_almost_decisive(f, g, Scope::Subset(&[alpha, beta])) {
        return None;
    }
    let n = f.nerve().voters();
    let sigma = g.complement(n).sign_vector(n);
    Some(f.oriented_sign(alpha, beta, sigma) != Some(Sign::Plus))
}

/// Largest voter count for [`enumerate_ultrafilters`]: `2^(2^4)` families.
pub const MAX_ULTRAFILTER_VOTERS: usize = 4;

/// Every ultrafilter on `n` voters, found by checking all `2^(2^n)` families.
pub fn enumerate_ultrafilters(n: usize) -> Result<Vec<CoalitionFamily>> {
    if n == 0 || n > MAX_ULTRAFILTER_VOTERS {
        return Err(Error::precondition(format!(
            "exhaustive family sweep supports 1..={MAX_ULTRAFILTER_VOTERS} voters, got {n}"
        )));
    }
    let coalitions = 1u32 << n;
    let families = 1u64 << coalitions;
    Ok((0..families)
        .filter_map(|mask| {
            let fam = CoalitionFamily::from_coalitions(
                n,
                (0..coalitions)
                    .filter(|&c| mask >> c & 1 == 1)
                    .map(Coalition::from_bits),
            );
            is_ultrafilter(&fam).then_some(fam)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::nerve::Nerve;
    use crate::preferences::{AlternativeSet, Domain};

    fn dictator_map(voter: usize) -> ChromaticMap {
        let d = Domain::unrestricted(AlternativeSet::standard(3).unwrap(), 2).unwrap();
        ChromaticMap::dictatorial(Arc::new(Nerve::build(d)), voter)
    }

    fn fam(n: usize, members: &[&[usize]]) -> CoalitionFamily {
        CoalitionFamily::from_coalitions(
            n,
            members
                .iter()
                .map(|m| Coalition::from_members(&m.iter().map(|v| v - 1).collect::<Vec<_>>())),
        )
    }

    #[test]
    fn almost_decisive_examples() {
        let f = dictator_map(0);
        assert!(is_almost_decisive(&f, Coalition::from_members(&[0]), Scope::All));
        assert!(!is_almost_decisive(&f, Coalition::from_members(&[1]), Scope::All));
        assert!(!is_almost_decisive(
            &f,
            Coalition::from_members(&[1]),
            Scope::Pair(0, 1)
        ));
    }

    #[test]
    fn vacuous_almost_decisiveness() {
        use crate::preferences::{Profile, Ranking};
        let alts = AlternativeSet::standard(3).unwrap();
        let p = Profile::new(vec![
            Ranking::new(vec![0, 1, 2]).unwrap(),
            Ranking::new(vec![0, 1, 2]).unwrap(),
        ])
        .unwrap();
        let d = Domain::new(alts, 2, vec![p]).unwrap();
        let nerve = Arc::new(Nerve::build(d));
        // only unanimity vertices: {1} has no σ^G vertex
        let f = ChromaticMap::from_fn(nerve, |_| Sign::Minus);
        assert!(is_almost_decisive(&f, Coalition::from_members(&[0]), Scope::All));
    }

    #[test]
    fn families_of_dictators() {
        assert_eq!(almost_decisive_family(&dictator_map(0)), fam(2, &[&[1], &[1, 2]]));
        assert_eq!(almost_decisive_family(&dictator_map(1)), fam(2, &[&[2], &[1, 2]]));
    }

    #[test]
    fn ultrafilter_checks() {
        assert!(is_ultrafilter(&fam(2, &[&[1], &[1, 2]])));
        assert_eq!(
            check_ultrafilter(&fam(2, &[&[1, 2]])),
            Err(UltrafilterViolation::MissingSetOrComplement(Coalition::from_members(&[0])))
        );
        assert_eq!(
            check_ultrafilter(&CoalitionFamily::empty(2)),
            Err(UltrafilterViolation::EmptyFamily)
        );
        assert_eq!(
            check_ultrafilter(&fam(2, &[&[], &[1], &[2], &[1, 2]])),
            Err(UltrafilterViolation::ContainsEmpty)
        );
        assert!(matches!(
            check_ultrafilter(&fam(2, &[&[1], &[2], &[1, 2]])),
            Err(UltrafilterViolation::NotClosedUnderIntersection(..))
        ));
    }

    #[test]
    fn principal_elements() {
        assert_eq!(principal_element(&fam(2, &[&[1], &[1, 2]])).unwrap(), 0);
        assert_eq!(
            principal_element(&fam(3, &[&[3], &[1, 3], &[2, 3], &[1, 2, 3]])).unwrap(),
            2
        );
        assert!(matches!(
            principal_element(&fam(2, &[&[1, 2]])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn complement_sign() {
        let f = dictator_map(0);
        assert_eq!(
            complement_sign_lemma_check(&f, Coalition::from_members(&[0]), 0, 1),
            Some(true)
        );
        let g = dictator_map(1);
        assert_eq!(complement_sign_lemma_check(&g, Coalition::from_members(&[0]), 0, 1), None);
    }

    #[test]
    fn ultrafilters_are_principal() {
        for n in 1..=4 {
            let all = enumerate_ultrafilters(n).unwrap();
            assert_eq!(all.len(), n);
            let mut principal: Vec<usize> =
                all.iter().map(|u| principal_element(u).unwrap()).collect();
            principal.sort_unstable();
            assert_eq!(principal, (0..n).collect::<Vec<_>>());
            assert!(all.iter().all(|u| upward_closure_violation(u).is_none()));
        }
        assert!(enumerate_ultrafilters(5).is_err());
    }

    #[test]
    fn decisive_hook() {
        let f = dictator_map(0);
        assert!(is_decisive(&f, Coalition::from_members(&[0])));
        assert!(!is_decisive(&f, Coalition::from_members(&[1])));
        assert!(is_decisive(&f, Coalition::full(2)));
    }
}
