//! Alternatives, strict rankings, profiles and domains.
//!
//! Alternatives are identified by their index into the declared name list and
//! every canonical ordering in the crate is index order. Voters are 0-based
//! internally; reports add one.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Neg;

use crate::error::{Error, Result};

/// Largest voter count supported. Coalitions are `u32` bitmasks and several
/// operations walk all `2^n` coalitions.
pub const MAX_VOTERS: usize = 16;

/// Largest alternative count supported by [`AlternativeSet`].
pub const MAX_ALTERNATIVES: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlternativeSet {
    names: Vec<String>,
}

impl AlternativeSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() < 2 {
            return Err(Error::domain(format!(
                "need at least 2 alternatives, got {}",
                names.len()
            )));
        }
        if names.len() > MAX_ALTERNATIVES {
            return Err(Error::domain(format!(
                "at most {MAX_ALTERNATIVES} alternatives are supported"
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '>' || c == '#')
            {
                return Err(Error::domain(format!("invalid alternative name `{name}`")));
            }
            if names[..i].contains(name) {
                return Err(Error::domain(format!("duplicate alternative `{name}`")));
            }
        }
        Ok(AlternativeSet { names })
    }

    /// `x, y, z` for three alternatives, `w, x, y, z` for four, and
    /// `a, b, c, ...` beyond that.
    pub fn standard(m: usize) -> Result<Self> {
        if m <= 4 {
            Self::new(["w", "x", "y", "z"][4 - m.min(4)..].iter().copied())
        } else if m <= 26 {
            Self::new((b'a'..b'a' + m as u8).map(|c| (c as char).to_string()))
        } else {
            Self::new((0..m).map(|i| format!("a{i}")))
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, alt: usize) -> &str {
        &self.names[alt]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    /// Unordered pairs `(a, b)` with `a < b`, lexicographic.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        pairs_of(&self.indices())
    }

    /// 3-subsets in lexicographic order.
    pub fn triples(&self) -> Vec<[usize; 3]> {
        triples_of(&self.indices())
    }

    /// Position of `(a, b)`, `a < b`, in [`AlternativeSet::pairs`].
    pub fn pair_index(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < b && b < self.len());
        let m = self.len();
        a * m - a * (a + 1) / 2 + (b - a - 1)
    }

    pub fn pair_count(&self) -> usize {
        binomial(self.len(), 2)
    }
}

pub(crate) fn pairs_of(ys: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(binomial(ys.len(), 2));
    for (i, &a) in ys.iter().enumerate() {
        for &b in &ys[i + 1..] {
            out.push((a.min(b), a.max(b)));
        }
    }
    out
}

pub(crate) fn triples_of(ys: &[usize]) -> Vec<[usize; 3]> {
    let mut ys = ys.to_vec();
    ys.sort_unstable();
    let mut out = Vec::new();
    for i in 0..ys.len() {
        for j in i + 1..ys.len() {
            for k in j + 1..ys.len() {
                out.push([ys[i], ys[j], ys[k]]);
            }
        }
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Sorts `ys`, rejecting duplicates and alternatives outside `0..m`.
pub(crate) fn normalize_subset(ys: &[usize], m: usize) -> Result<Vec<usize>> {
    let mut v = ys.to_vec();
    v.sort_unstable();
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::domain("subset lists an alternative twice"));
    }
    if let Some(&bad) = v.iter().find(|&&a| a >= m) {
        return Err(Error::domain(format!("alternative index {bad} out of range")));
    }
    Ok(v)
}

/// A strict total order, best first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ranking(Vec<usize>);

impl Ranking {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        if order.is_empty() {
            return Err(Error::domain("empty ranking"));
        }
        let mut seen = order.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("ranking lists an alternative twice"));
        }
        Ok(Ranking(order))
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The alternatives ranked, in index order.
    pub fn alternatives(&self) -> Vec<usize> {
        let mut v = self.0.clone();
        v.sort_unstable();
        v
    }

    pub fn position(&self, alt: usize) -> Option<usize> {
        self.0.iter().position(|&a| a == alt)
    }

    /// Whether `a` is ranked strictly above `b`. Both must be ranked.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        for &x in &self.0 {
            if x == a {
                return true;
            }
            if x == b {
                return false;
            }
        }
        panic!("alternatives {a} and {b} are not ranked");
    }

    pub fn restrict(&self, ys: &[usize]) -> Result<Ranking> {
        if ys.is_empty() {
            return Err(Error::domain("cannot restrict to an empty set"));
        }
        let own = self.alternatives();
        let ys = normalize_subset(ys, usize::MAX)?;
        if let Some(&bad) = ys.iter().find(|a| own.binary_search(a).is_err()) {
            return Err(Error::domain(format!(
                "alternative {bad} is not ranked, cannot restrict"
            )));
        }
        Ok(Ranking(
            self.0
                .iter()
                .copied()
                .filter(|a| ys.binary_search(a).is_ok())
                .collect(),
        ))
    }

    /// Rebuilds a ranking of `alts` from a pairwise relation. Returns `None`
    /// when the relation is not a strict total order.
    pub fn from_relation(alts: &[usize], beats: impl Fn(usize, usize) -> bool) -> Option<Ranking> {
        // In a transitive tournament on k alternatives the scores are exactly
        // 0..k, which pins the order.
        let k = alts.len();
        let mut slots = vec![None; k];
        for &a in alts {
            let wins = alts.iter().filter(|&&b| b != a && beats(a, b)).count();
            let slot = k - 1 - wins;
            if slots[slot].is_some() {
                return None;
            }
            slots[slot] = Some(a);
        }
        let order: Vec<usize> = slots.into_iter().collect::<Option<_>>()?;
        let r = Ranking(order);
        // Scores alone miss asymmetry violations.
        for (i, &a) in r.0.iter().enumerate() {
            for &b in &r.0[i + 1..] {
                if !beats(a, b) || beats(b, a) {
                    return None;
                }
            }
        }
        Some(r)
    }

    pub fn display<'a>(&'a self, alts: &'a AlternativeSet) -> impl fmt::Display + 'a {
        RankingDisplay { ranking: self, alts }
    }
}

struct RankingDisplay<'a> {
    ranking: &'a Ranking,
    alts: &'a AlternativeSet,
}

impl fmt::Display for RankingDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &a) in self.ranking.0.iter().enumerate() {
            if i > 0 {
                f.write_str(">")?;
            }
            f.write_str(self.alts.name(a))?;
        }
        Ok(())
    }
}

/// All strict total orders of `ys`, lexicographic in index order.
pub fn enumerate_rankings(ys: &[usize]) -> Vec<Ranking> {
    let mut perm = ys.to_vec();
    perm.sort_unstable();
    perm.dedup();
    let mut out = Vec::new();
    if perm.is_empty() {
        return out;
    }
    loop {
        out.push(Ranking(perm.clone()));
        if !next_permutation(&mut perm) {
            return out;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_bool(plus: bool) -> Sign {
        if plus {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A set of voters, stored as a bitmask (bit `i` is voter `i`, 0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn from_bits(bits: u32) -> Self {
        Coalition(bits)
    }

    pub fn full(n: usize) -> Self {
        Coalition(full_mask(n))
    }

    pub fn from_members(members: &[usize]) -> Self {
        Coalition(members.iter().fold(0, |acc, &i| acc | (1 << i)))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, voter: usize) -> bool {
        self.0 >> voter & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn complement(self, n: usize) -> Self {
        Coalition(!self.0 & full_mask(n))
    }

    pub fn intersection(self, other: Coalition) -> Self {
        Coalition(self.0 & other.0)
    }

    pub fn union(self, other: Coalition) -> Self {
        Coalition(self.0 | other.0)
    }

    pub fn is_subset(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    /// 0-based members, ascending.
    pub fn members(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// All `2^n` coalitions in bitmask order.
    pub fn all(n: usize) -> impl Iterator<Item = Coalition> {
        (0..1u32 << n).map(Coalition)
    }

    /// Non-empty coalitions other than `N`.
    pub fn proper(n: usize) -> impl Iterator<Item = Coalition> {
        (1..full_mask(n)).map(Coalition)
    }

    /// `σ^G`: `+` for members, `-` for everybody else.
    pub fn sign_vector(self, n: usize) -> SignVector {
        SignVector::from_plus_mask(n, self.0)
    }

    /// 1-based member list, as printed in reports.
    pub fn to_voters(self) -> Vec<usize> {
        self.members().map(|i| i + 1).collect()
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, v) in self.to_voters().into_iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// One sign per voter. Ordered like its rendering, `+` before `-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignVector {
    voters: u8,
    plus: u32,
}

impl SignVector {
    pub fn new(signs: &[Sign]) -> Self {
        let plus = signs
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_plus())
            .fold(0, |acc, (i, _)| acc | 1 << i);
        SignVector {
            voters: signs.len() as u8,
            plus,
        }
    }

    pub fn from_plus_mask(n: usize, plus: u32) -> Self {
        SignVector {
            voters: n as u8,
            plus: plus & full_mask(n),
        }
    }

    /// Parses a `+`/`-` string such as `"+-+"`.
    pub fn parse(s: &str) -> Result<Self> {
        let signs = s
            .chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                other => Err(Error::domain(format!("invalid sign `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SignVector::new(&signs))
    }

    pub fn voters(self) -> usize {
        self.voters as usize
    }

    pub fn get(self, voter: usize) -> Sign {
        Sign::from_bool(self.plus >> voter & 1 == 1)
    }

    pub fn plus_mask(self) -> u32 {
        self.plus
    }

    /// The coalition of voters carrying `+`.
    pub fn plus_coalition(self) -> Coalition {
        Coalition(self.plus)
    }

    pub fn is_all_plus(self) -> bool {
        self.plus == full_mask(self.voters())
    }

    pub fn is_all_minus(self) -> bool {
        self.plus == 0
    }

    pub fn is_unanimous(self) -> bool {
        self.is_all_plus() || self.is_all_minus()
    }

    pub fn signs(self) -> impl Iterator<Item = Sign> {
        (0..self.voters()).map(move |i| self.get(i))
    }
}

impl Neg for SignVector {
    type Output = SignVector;
    fn neg(self) -> SignVector {
        SignVector::from_plus_mask(self.voters(), !self.plus)
    }
}

impl Ord for SignVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.voters
            .cmp(&other.voters)
            .then_with(|| self.signs().cmp(other.signs()))
    }
}

impl PartialOrd for SignVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.signs() {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// One ranking per voter, all over the same alternatives.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile(Vec<Ranking>);

impl Profile {
    pub fn new(rankings: Vec<Ranking>) -> Result<Self> {
        if rankings.is_empty() {
            return Err(Error::domain("a profile needs at least one voter"));
        }
        if rankings.len() > MAX_VOTERS {
            return Err(Error::domain(format!(
                "at most {MAX_VOTERS} voters are supported"
            )));
        }
        let alts = rankings[0].alternatives();
        if rankings.iter().any(|r| r.alternatives() != alts) {
            return Err(Error::domain("rankings of a profile rank different alternatives"));
        }
        Ok(Profile(rankings))
    }

    pub fn voters(&self) -> usize {
        self.0.len()
    }

    pub fn rankings(&self) -> &[Ranking] {
        &self.0
    }

    pub fn ranking(&self, voter: usize) -> &Ranking {
        &self.0[voter]
    }

    pub fn alternatives(&self) -> Vec<usize> {
        self.0[0].alternatives()
    }

    pub fn restrict(&self, ys: &[usize]) -> Result<Profile> {
        Ok(Profile(
            self.0
                .iter()
                .map(|r| r.restrict(ys))
                .collect::<Result<_>>()?,
        ))
    }

    /// Entry `i` is `+` iff voter `i` ranks `a` above `b`.
    pub fn pair_sign_vector(&self, a: usize, b: usize) -> Result<SignVector> {
        if a == b {
            return Err(Error::domain("pair needs two distinct alternatives"));
        }
        let own = self.alternatives();
        if own.binary_search(&a).is_err() || own.binary_search(&b).is_err() {
            return Err(Error::domain("pair alternatives are not ranked by the profile"));
        }
        Ok(self.sign_vector_unchecked(a, b))
    }

    pub(crate) fn sign_vector_unchecked(&self, a: usize, b: usize) -> SignVector {
        let plus = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, r)| r.prefers(a, b))
            .fold(0, |acc, (i, _)| acc | 1 << i);
        SignVector::from_plus_mask(self.voters(), plus)
    }

    /// Sen's value restriction over `ys`: on every triple of `ys` some
    /// alternative never takes one of the three positions.
    pub fn is_value_restricted(&self, ys: &[usize]) -> Result<bool> {
        if ys.len() < 3 {
            return Err(Error::domain("value restriction needs at least 3 alternatives"));
        }
        let ys = normalize_subset(ys, usize::MAX)?;
        for triple in triples_of(&ys) {
            let restricted = self.restrict(&triple)?;
            // occupied[alt][pos]
            let mut occupied = [[false; 3]; 3];
            for r in restricted.rankings() {
                for (pos, &a) in r.order().iter().enumerate() {
                    let slot = triple.iter().position(|&t| t == a).unwrap();
                    occupied[slot][pos] = true;
                }
            }
            if occupied.iter().flatten().all(|&o| o) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `G: p, G^c: q` over `n` voters.
    pub fn polarized(n: usize, g: Coalition, p: &Ranking, q: &Ranking) -> Profile {
        Profile(
            (0..n)
                .map(|i| if g.contains(i) { p.clone() } else { q.clone() })
                .collect(),
        )
    }

    pub fn display<'a>(&'a self, alts: &'a AlternativeSet) -> impl fmt::Display + 'a {
        ProfileDisplay { profile: self, alts }
    }
}

struct ProfileDisplay<'a> {
    profile: &'a Profile,
    alts: &'a AlternativeSet,
}

impl fmt::Display for ProfileDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.profile.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", r.display(self.alts))?;
        }
        Ok(())
    }
}

/// A non-empty set of profiles over the full alternative set, kept sorted
/// and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    alts: AlternativeSet,
    voters: usize,
    profiles: Vec<Profile>,
}

impl Domain {
    pub fn new(alts: AlternativeSet, voters: usize, profiles: Vec<Profile>) -> Result<Self> {
        if voters == 0 || voters > MAX_VOTERS {
            return Err(Error::domain(format!(
                "voter count must be in 1..={MAX_VOTERS}, got {voters}"
            )));
        }
        if profiles.is_empty() {
            return Err(Error::domain("a domain needs at least one profile"));
        }
        let full = alts.indices();
        for p in &profiles {
            if p.voters() != voters {
                return Err(Error::domain(format!(
                    "profile has {} voters, domain has {voters}",
                    p.voters()
                )));
            }
            if p.alternatives() != full {
                return Err(Error::domain("profile does not rank every alternative"));
            }
        }
        let profiles: BTreeSet<Profile> = profiles.into_iter().collect();
        Ok(Domain {
            alts,
            voters,
            profiles: profiles.into_iter().collect(),
        })
    }

    /// `W(X)^n`.
    pub fn unrestricted(alts: AlternativeSet, voters: usize) -> Result<Self> {
        let rankings = enumerate_rankings(&alts.indices());
        let mut profiles = vec![Vec::new()];
        for _ in 0..voters {
            profiles = profiles
                .into_iter()
                .flat_map(|prefix: Vec<Ranking>| {
                    rankings.iter().map(move |r| {
                        let mut next = prefix.clone();
                        next.push(r.clone());
                        next
                    })
                })
                .collect();
        }
        let profiles = profiles
            .into_iter()
            .map(Profile::new)
            .collect::<Result<Vec<_>>>()?;
        Domain::new(alts, voters, profiles)
    }

    pub fn alternatives(&self) -> &AlternativeSet {
        &self.alts
    }

    pub fn voters(&self) -> usize {
        self.voters
    }

    pub fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn contains(&self, p: &Profile) -> bool {
        self.profiles.binary_search(p).is_ok()
    }

    pub fn index_of(&self, p: &Profile) -> Option<usize> {
        self.profiles.binary_search(p).ok()
    }

    pub fn is_subset_of(&self, other: &Domain) -> bool {
        self.alts == other.alts
            && self.voters == other.voters
            && self.profiles.iter().all(|p| other.contains(p))
    }

    /// `D|_Y` as a set.
    pub fn restrict(&self, ys: &[usize]) -> Result<BTreeSet<Profile>> {
        let ys = normalize_subset(ys, self.alts.len())?;
        self.profiles.iter().map(|p| p.restrict(&ys)).collect()
    }

    /// This domain plus `extra` (duplicates ignored).
    pub fn extended(&self, extra: impl IntoIterator<Item = Profile>) -> Result<Domain> {
        let mut all = self.profiles.clone();
        all.extend(extra);
        Domain::new(self.alts.clone(), self.voters, all)
    }
}
