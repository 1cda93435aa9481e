//! Pairwise-comparison labels and the two nerve complexes built from them.
//!
//! A label `U_{ab}^σ` says "voter `i` ranks `a` above `b` exactly when
//! `σ_i = +`". The spelling `U_{ba}^{-σ}` names the same vertex, so every
//! label is stored with `a < b`. The nerve of a domain has one facet per
//! profile; only facets are stored and every simplex query is a
//! subset-of-facet test.

use std::collections::{BTreeSet, HashSet};
use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::preferences::{
    binomial, enumerate_rankings, pairs_of, AlternativeSet, Domain, Profile, Ranking, Sign,
    SignVector,
};

/// Anything carrying an unordered pair of alternatives (its colour).
pub trait Chromatic {
    /// The pair, smaller index first.
    fn pair(&self) -> (usize, usize);
}

/// Vertex `U_{ab}^σ` of a domain nerve, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    a: usize,
    b: usize,
    sigma: SignVector,
}

impl Label {
    /// Canonical representative of `U_{αβ}^σ`.
    pub fn new(alpha: usize, beta: usize, sigma: SignVector) -> Result<Label> {
        match alpha.cmp(&beta) {
            std::cmp::Ordering::Less => Ok(Label {
                a: alpha,
                b: beta,
                sigma,
            }),
            std::cmp::Ordering::Greater => Ok(Label {
                a: beta,
                b: alpha,
                sigma: -sigma,
            }),
            std::cmp::Ordering::Equal => Err(Error::domain("label needs two distinct alternatives")),
        }
    }

    pub fn first(&self) -> usize {
        self.a
    }

    pub fn second(&self) -> usize {
        self.b
    }

    pub fn sigma(&self) -> SignVector {
        self.sigma
    }

    /// The sign vector read in the orientation `(alpha, other)`.
    pub fn oriented_from(&self, alpha: usize) -> SignVector {
        if alpha == self.a {
            self.sigma
        } else {
            -self.sigma
        }
    }

    /// Renders as `U[x,y][+-]`.
    pub fn render(&self, alts: &AlternativeSet) -> String {
        format!("U[{},{}][{}]", alts.name(self.a), alts.name(self.b), self.sigma)
    }
}

impl Chromatic for Label {
    fn pair(&self) -> (usize, usize) {
        (self.a, self.b)
    }
}

/// Canonical form of `U_{αβ}^σ`; `(β, α, -σ)` yields the same label.
pub fn canonical_label(alpha: usize, beta: usize, sigma: SignVector) -> Result<Label> {
    Label::new(alpha, beta, sigma)
}

/// Vertex `U_{ab}^s` of `N_{W(X)}`, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SocialLabel {
    a: usize,
    b: usize,
    sign: Sign,
}

impl SocialLabel {
    pub fn new(alpha: usize, beta: usize, sign: Sign) -> Result<SocialLabel> {
        match alpha.cmp(&beta) {
            std::cmp::Ordering::Less => Ok(SocialLabel {
                a: alpha,
                b: beta,
                sign,
            }),
            std::cmp::Ordering::Greater => Ok(SocialLabel {
                a: beta,
                b: alpha,
                sign: -sign,
            }),
            std::cmp::Ordering::Equal => Err(Error::domain("label needs two distinct alternatives")),
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// The alternative ranked higher.
    pub fn winner(&self) -> usize {
        if self.sign.is_plus() {
            self.a
        } else {
            self.b
        }
    }

    pub fn loser(&self) -> usize {
        if self.sign.is_plus() {
            self.b
        } else {
            self.a
        }
    }

    pub fn render(&self, alts: &AlternativeSet) -> String {
        format!("U[{},{}][{}]", alts.name(self.a), alts.name(self.b), self.sign)
    }
}

impl Chromatic for SocialLabel {
    fn pair(&self) -> (usize, usize) {
        (self.a, self.b)
    }
}

/// A non-empty chromatic vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex<V>(BTreeSet<V>);

impl<V: Chromatic + Ord> Simplex<V> {
    pub fn new(vertices: impl IntoIterator<Item = V>) -> Result<Self> {
        let set: BTreeSet<V> = vertices.into_iter().collect();
        if set.is_empty() {
            return Err(Error::domain("a simplex needs at least one vertex"));
        }
        let pairs: HashSet<(usize, usize)> = set.iter().map(Chromatic::pair).collect();
        if pairs.len() != set.len() {
            return Err(Error::domain("two vertices of a simplex share a pair"));
        }
        Ok(Simplex(set))
    }

    pub fn vertices(&self) -> impl Iterator<Item = &V> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: &V) -> bool {
        self.0.contains(v)
    }

    /// The alternatives touched by the simplex, ascending.
    pub fn alternatives(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .0
            .iter()
            .flat_map(|v| {
                let (a, b) = v.pair();
                [a, b]
            })
            .collect();
        set.into_iter().collect()
    }
}

/// `s_D(u)`: the profiles of `domain` realizing the label.
pub fn s_d<'d>(label: &Label, domain: &'d Domain) -> Vec<&'d Profile> {
    domain
        .profiles()
        .iter()
        .filter(|p| p.sign_vector_unchecked(label.a, label.b) == label.sigma)
        .collect()
}

/// `g_Y`: the simplex of a subprofile, one label per pair of its alternatives.
pub fn g_y(subprofile: &Profile) -> Result<Simplex<Label>> {
    let ys = subprofile.alternatives();
    if ys.len() < 2 {
        return Err(Error::domain("g_Y needs at least two alternatives"));
    }
    Simplex::new(
        pairs_of(&ys)
            .into_iter()
            .map(|(a, b)| Label::new(a, b, subprofile.sign_vector_unchecked(a, b)))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// `h_Y`: the subprofile of `restricted` (a `D|_Y`) whose simplex is given.
pub fn h_y(simplex: &Simplex<Label>, restricted: &BTreeSet<Profile>) -> Result<Profile> {
    let ys = simplex.alternatives();
    if simplex.len() != binomial(ys.len(), 2) {
        return Err(Error::domain(
            "label set does not carry exactly one label per pair of its alternatives",
        ));
    }
    let voters = simplex.vertices().next().unwrap().sigma.voters();
    let mut rankings = Vec::with_capacity(voters);
    for voter in 0..voters {
        let beats = |x: usize, y: usize| {
            simplex
                .vertices()
                .find(|l| (l.a == x && l.b == y) || (l.a == y && l.b == x))
                .is_some_and(|l| l.oriented_from(x).get(voter).is_plus())
        };
        let r = Ranking::from_relation(&ys, beats).ok_or_else(|| {
            Error::domain(format!("labels are intransitive for voter {}", voter + 1))
        })?;
        rankings.push(r);
    }
    let profile = Profile::new(rankings)?;
    if !restricted.contains(&profile) {
        return Err(Error::domain("label set is not realized by any profile of the domain"));
    }
    Ok(profile)
}

/// `ḡ`: the facet of `N_{W(X)}` of a ranking.
pub fn g_bar(ranking: &Ranking) -> Simplex<SocialLabel> {
    let ys = ranking.alternatives();
    Simplex::new(
        pairs_of(&ys)
            .into_iter()
            .map(|(a, b)| SocialLabel::new(a, b, Sign::from_bool(ranking.prefers(a, b))).unwrap()),
    )
    .expect("one label per pair is chromatic")
}

/// `h̄`: the ranking whose facet is given. Fails on an incomplete or
/// intransitive label set.
pub fn h_bar(simplex: &Simplex<SocialLabel>) -> Result<Ranking> {
    let ys = simplex.alternatives();
    if simplex.len() != binomial(ys.len(), 2) {
        return Err(Error::domain(
            "label set does not carry exactly one label per pair of its alternatives",
        ));
    }
    let beats = |x: usize, y: usize| simplex.vertices().any(|l| l.winner() == x && l.loser() == y);
    Ranking::from_relation(&ys, beats)
        .ok_or_else(|| Error::domain("labels describe an intransitive relation"))
}

/// Whether `{u, v}` can be written `{U_{αβ}^+, U_{βγ}^+}`, i.e. the loser of
/// one comparison wins the other.
pub fn is_dbt_edge(u: &SocialLabel, v: &SocialLabel) -> bool {
    if u.pair() == v.pair() {
        return false;
    }
    u.loser() == v.winner() && u.winner() != v.loser()
        || v.loser() == u.winner() && v.winner() != u.loser()
}

/// The nerve `N_D` of a domain.
#[derive(Debug, Clone)]
pub struct Nerve {
    domain: Domain,
    vertices: Vec<Label>,
    // facets[p][k]: vertex id of profile p on the k-th pair of `pairs`
    facets: Vec<Vec<u32>>,
    // supports[v]: facets containing vertex v, ascending
    supports: Vec<Vec<u32>>,
    pairs: Vec<(usize, usize)>,
}

impl Nerve {
    pub fn build(domain: Domain) -> Nerve {
        let pairs = domain.alternatives().pairs();
        let raw: Vec<Vec<SignVector>> = domain
            .profiles()
            .par_iter()
            .map(|p| {
                pairs
                    .iter()
                    .map(|&(a, b)| p.sign_vector_unchecked(a, b))
                    .collect()
            })
            .collect();
        let vertex_set: BTreeSet<Label> = raw
            .iter()
            .flat_map(|row| {
                row.iter()
                    .zip(&pairs)
                    .map(|(&sigma, &(a, b))| Label { a, b, sigma })
            })
            .collect();
        let vertices: Vec<Label> = vertex_set.into_iter().collect();
        let facets: Vec<Vec<u32>> = raw
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&pairs)
                    .map(|(&sigma, &(a, b))| {
                        vertices.binary_search(&Label { a, b, sigma }).unwrap() as u32
                    })
                    .collect()
            })
            .collect();
        let mut supports = vec![Vec::new(); vertices.len()];
        for (f, facet) in facets.iter().enumerate() {
            for &v in facet {
                supports[v as usize].push(f as u32);
            }
        }
        Nerve {
            domain,
            vertices,
            facets,
            supports,
            pairs,
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn alternatives(&self) -> &AlternativeSet {
        self.domain.alternatives()
    }

    pub fn voters(&self) -> usize {
        self.domain.voters()
    }

    /// Canonically sorted vertex labels; a vertex id is an index here.
    pub fn vertices(&self) -> &[Label] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// Facets as vertex-id rows, aligned with [`Nerve::pairs`]. Row `p`
    /// belongs to profile `p` of the domain.
    pub fn facet_ids(&self) -> &[Vec<u32>] {
        &self.facets
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair_index(&self, a: usize, b: usize) -> usize {
        self.alternatives().pair_index(a.min(b), a.max(b))
    }

    pub fn facet(&self, p: usize) -> Simplex<Label> {
        Simplex(self.facets[p].iter().map(|&v| self.vertices[v as usize]).collect())
    }

    pub fn dimension(&self) -> usize {
        self.pairs.len() - 1
    }

    pub fn vertex_id(&self, label: &Label) -> Option<usize> {
        self.vertices.binary_search(label).ok()
    }

    /// Vertex id of `U_{αβ}^σ` in any spelling.
    pub fn lookup(&self, alpha: usize, beta: usize, sigma: SignVector) -> Option<usize> {
        Label::new(alpha, beta, sigma)
            .ok()
            .and_then(|l| self.vertex_id(&l))
    }

    /// Facets (profile indices) containing the vertex.
    pub fn support(&self, vertex: usize) -> &[u32] {
        &self.supports[vertex]
    }

    /// Profile indices realizing every given vertex.
    pub fn common_support(&self, ids: &[usize]) -> Vec<u32> {
        let Some((&first, rest)) = ids.split_first() else {
            return (0..self.facets.len() as u32).collect();
        };
        let mut acc = self.supports[first].clone();
        for &v in rest {
            let k = self.pair_index(self.vertices[v].a, self.vertices[v].b);
            acc.retain(|&f| self.facets[f as usize][k] as usize == v);
        }
        acc
    }

    pub fn is_simplex_ids(&self, ids: &[usize]) -> bool {
        !ids.is_empty() && !self.common_support(ids).is_empty()
    }

    /// Whether the labels form a simplex of `N_D`.
    pub fn contains_simplex(&self, labels: &[Label]) -> bool {
        let ids: Option<Vec<usize>> = labels.iter().map(|l| self.vertex_id(l)).collect();
        ids.is_some_and(|ids| self.is_simplex_ids(&ids))
    }

    /// All simplices of dimension at most `l`, canonically sorted.
    pub fn skeleton(&self, l: usize) -> Vec<Simplex<Label>> {
        let mut out: Vec<Simplex<Label>> = if l <= 2 {
            let mut seen: HashSet<Vec<u32>> = HashSet::new();
            for facet in &self.facets {
                for size in 1..=(l + 1).min(facet.len()) {
                    for_each_subset(facet, size, |s| {
                        if !seen.contains(s) {
                            seen.insert(s.to_vec());
                        }
                    });
                }
            }
            seen.into_iter().map(|ids| self.simplex_of(&ids)).collect()
        } else {
            self.skeleton_iter(l).collect()
        };
        out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        out
    }

    /// Streams the simplices of dimension at most `l` without materializing
    /// them: a face is yielded from the first facet that contains it.
    pub fn skeleton_iter(&self, l: usize) -> impl Iterator<Item = Simplex<Label>> + '_ {
        let width = self.pairs.len();
        let max = (l + 1).min(width);
        (0..self.facets.len()).flat_map(move |f| {
            (1..=max).flat_map(move |size| {
                Combinations::new(width, size).filter_map(move |positions| {
                    let ids: Vec<usize> = positions
                        .iter()
                        .map(|&k| self.facets[f][k] as usize)
                        .collect();
                    let first = self.common_support(&ids)[0] as usize;
                    (first == f).then(|| {
                        self.simplex_of(&ids.iter().map(|&v| v as u32).collect::<Vec<_>>())
                    })
                })
            })
        })
    }

    fn simplex_of(&self, ids: &[u32]) -> Simplex<Label> {
        Simplex(ids.iter().map(|&v| self.vertices[v as usize]).collect())
    }

    /// Graphviz rendering of the 2-skeleton. Triangles go in comments since
    /// DOT has no 2-cells.
    pub fn to_dot(&self) -> String {
        let alts = self.alternatives();
        let skel = self.skeleton(2);
        let mut out = String::from("graph nerve {\n");
        for s in &skel {
            let names: Vec<String> = s
                .vertices()
                .map(|v| format!("\"{}\"", v.render(alts)))
                .collect();
            match s.len() {
                1 => writeln!(out, "  {};", names[0]),
                2 => writeln!(out, "  {} -- {};", names[0], names[1]),
                _ => writeln!(out, "  // triangle {}", names.join(" ")),
            }
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

fn for_each_subset(items: &[u32], size: usize, mut f: impl FnMut(&[u32])) {
    let mut buf = Vec::with_capacity(size);
    for positions in Combinations::new(items.len(), size) {
        buf.clear();
        buf.extend(positions.iter().map(|&k| items[k]));
        buf.sort_unstable();
        f(&buf);
    }
}

/// k-subsets of `0..n` as ascending index vectors, lexicographic.
pub(crate) struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// `N_{W(X)}`: one facet per ranking of `X`.
#[derive(Debug, Clone)]
pub struct SocialNerve {
    alts: AlternativeSet,
    vertices: Vec<SocialLabel>,
    facets: Vec<Simplex<SocialLabel>>,
}

impl SocialNerve {
    pub fn build(alts: &AlternativeSet) -> SocialNerve {
        let facets: Vec<Simplex<SocialLabel>> = enumerate_rankings(&alts.indices())
            .iter()
            .map(g_bar)
            .collect();
        let vertices: BTreeSet<SocialLabel> =
            facets.iter().flat_map(|f| f.vertices().copied()).collect();
        SocialNerve {
            alts: alts.clone(),
            vertices: vertices.into_iter().collect(),
            facets,
        }
    }

    pub fn alternatives(&self) -> &AlternativeSet {
        &self.alts
    }

    pub fn vertices(&self) -> &[SocialLabel] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Simplex<SocialLabel>] {
        &self.facets
    }

    pub fn dimension(&self) -> usize {
        self.facets.iter().map(Simplex::dim).max().unwrap_or(0)
    }

    /// Every facet has the top dimension.
    pub fn is_pure(&self) -> bool {
        let d = self.dimension();
        self.facets.iter().all(|f| f.dim() == d)
    }

    /// Labels form a simplex iff some ranking realizes all of them.
    pub fn contains_simplex(&self, labels: &[SocialLabel]) -> bool {
        !labels.is_empty() && self.facets.iter().any(|f| labels.iter().all(|l| f.contains(l)))
    }

    /// All edges of the complex, canonically sorted.
    pub fn edges(&self) -> Vec<(SocialLabel, SocialLabel)> {
        let mut set = BTreeSet::new();
        for f in &self.facets {
            let vs: Vec<_> = f.vertices().copied().collect();
            for i in 0..vs.len() {
                for j in i + 1..vs.len() {
                    set.insert((vs[i], vs[j]));
                }
            }
        }
        set.into_iter().collect()
    }
}

impl fmt::Display for SocialNerve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "N_W over {} alternatives: {} vertices, {} facets",
            self.alts.len(),
            self.vertices.len(),
            self.facets.len()
        )
    }
}
