//! Explicit social welfare tables, chromatic maps on a nerve, and the
//! bijection between IIA tables and chromatic simplicial maps.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::nerve::{h_bar, Label, Nerve, Simplex, SocialLabel};
use crate::preferences::{Domain, Profile, Ranking, Sign, SignVector};

/// A social welfare function given as a table on a finite domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwfTable {
    domain: Domain,
    outputs: Vec<Ranking>,
}

/// Two profiles agreeing on `pair` whose social rankings disagree on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IiaViolation {
    pub pair: (usize, usize),
    pub first: usize,
    pub second: usize,
}

impl SwfTable {
    /// `outputs[k]` is the social ranking of profile `k` of the domain.
    pub fn new(domain: Domain, outputs: Vec<Ranking>) -> Result<Self> {
        if outputs.len() != domain.len() {
            return Err(Error::domain(format!(
                "table has {} outputs for {} profiles",
                outputs.len(),
                domain.len()
            )));
        }
        let full = domain.alternatives().indices();
        if outputs.iter().any(|r| r.alternatives() != full) {
            return Err(Error::domain("every output must rank all alternatives"));
        }
        Ok(SwfTable { domain, outputs })
    }

    pub fn from_fn(domain: Domain, f: impl Fn(&Profile) -> Ranking) -> Result<Self> {
        let outputs = domain.profiles().iter().map(f).collect();
        SwfTable::new(domain, outputs)
    }

    /// `F(P) = P_voter`.
    pub fn projection(domain: Domain, voter: usize) -> Result<Self> {
        if voter >= domain.voters() {
            return Err(Error::domain(format!("no voter {}", voter + 1)));
        }
        SwfTable::from_fn(domain, |p| p.ranking(voter).clone())
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn outputs(&self) -> &[Ranking] {
        &self.outputs
    }

    pub fn output_for(&self, p: &Profile) -> Option<&Ranking> {
        self.domain.index_of(p).map(|k| &self.outputs[k])
    }

    pub fn iia_violation(&self) -> Option<IiaViolation> {
        for (a, b) in self.domain.alternatives().pairs() {
            let mut seen: HashMap<SignVector, (usize, bool)> = HashMap::new();
            for (k, p) in self.domain.profiles().iter().enumerate() {
                let key = p.sign_vector_unchecked(a, b);
                let social = self.outputs[k].prefers(a, b);
                match seen.get(&key) {
                    Some(&(first, s)) if s != social => {
                        return Some(IiaViolation {
                            pair: (a, b),
                            first,
                            second: k,
                        })
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(key, (k, social));
                    }
                }
            }
        }
        None
    }

    pub fn satisfies_iia(&self) -> bool {
        self.iia_violation().is_none()
    }

    pub fn satisfies_unanimity(&self) -> bool {
        let pairs = self.domain.alternatives().pairs();
        self.domain.profiles().iter().zip(&self.outputs).all(|(p, out)| {
            pairs.iter().all(|&(a, b)| {
                let sv = p.sign_vector_unchecked(a, b);
                !sv.is_unanimous() || sv.is_all_plus() == out.prefers(a, b)
            })
        })
    }

    /// Voters (0-based) whose ranking the table reproduces on every profile.
    pub fn dictators(&self) -> Vec<usize> {
        (0..self.domain.voters())
            .filter(|&i| {
                self.domain
                    .profiles()
                    .iter()
                    .zip(&self.outputs)
                    .all(|(p, out)| p.ranking(i) == out)
            })
            .collect()
    }
}

/// A vertex map `N_D -> N_{W(X)}` of the form `U_{ab}^σ ↦ U_{ab}^s`,
/// stored as one sign per canonical vertex of the nerve.
#[derive(Debug, Clone)]
pub struct ChromaticMap {
    nerve: Arc<Nerve>,
    signs: Vec<Sign>,
}

impl PartialEq for ChromaticMap {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.nerve, &other.nerve)
            || self.nerve.vertices() == other.nerve.vertices())
            && self.signs == other.signs
    }
}

impl Eq for ChromaticMap {}

impl ChromaticMap {
    pub fn new(nerve: Arc<Nerve>, signs: Vec<Sign>) -> Result<Self> {
        if signs.len() != nerve.vertex_count() {
            return Err(Error::domain(format!(
                "{} signs for {} vertices",
                signs.len(),
                nerve.vertex_count()
            )));
        }
        Ok(ChromaticMap { nerve, signs })
    }

    pub fn from_fn(nerve: Arc<Nerve>, f: impl Fn(&Label) -> Sign) -> Self {
        let signs = nerve.vertices().iter().map(f).collect();
        ChromaticMap { nerve, signs }
    }

    /// The map following voter `voter` on every vertex.
    pub fn dictatorial(nerve: Arc<Nerve>, voter: usize) -> Self {
        ChromaticMap::from_fn(nerve, |l| l.sigma().get(voter))
    }

    pub fn nerve(&self) -> &Arc<Nerve> {
        &self.nerve
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn sign(&self, vertex: usize) -> Sign {
        self.signs[vertex]
    }

    /// Image of a canonical vertex.
    pub fn image(&self, label: &Label) -> Option<SocialLabel> {
        let v = self.nerve.vertex_id(label)?;
        Some(SocialLabel::new(label.first(), label.second(), self.signs[v]).unwrap())
    }

    /// Sign `s` with `f(U_{αβ}^σ) = U_{αβ}^s`, in the `(α, β)` orientation.
    /// `None` when the label is not a vertex.
    pub fn oriented_sign(&self, alpha: usize, beta: usize, sigma: SignVector) -> Option<Sign> {
        let v = self.nerve.lookup(alpha, beta, sigma)?;
        let s = self.signs[v];
        Some(if alpha < beta { s } else { -s })
    }

    pub fn facet_image(&self, p: usize) -> Simplex<SocialLabel> {
        Simplex::new(self.nerve.facet_ids()[p].iter().map(|&v| {
            let l = self.nerve.vertices()[v as usize];
            SocialLabel::new(l.first(), l.second(), self.signs[v as usize]).unwrap()
        }))
        .expect("facets are chromatic")
    }

    /// First facet whose image is an intransitive label set.
    pub fn intransitive_facet(&self) -> Option<usize> {
        let triples = triple_positions(&self.nerve);
        let facets = self.nerve.facet_ids();
        (0..facets.len()).find(|&p| {
            triples.iter().any(|&[ab, bc, ac]| {
                let s = |k: usize| self.signs[facets[p][k] as usize];
                is_cyclic(s(ab), s(bc), s(ac))
            })
        })
    }

    /// Every facet is sent onto a simplex of `N_{W(X)}`.
    pub fn is_simplicial(&self) -> bool {
        self.intransitive_facet().is_none()
    }

    /// `U_{ab}^{σ^N} ↦ U_{ab}^+` on every unanimity vertex.
    pub fn satisfies_unanimity(&self) -> bool {
        self.nerve.vertices().iter().zip(&self.signs).all(|(l, &s)| {
            let sv = l.sigma();
            !(sv.is_all_plus() && s == Sign::Minus || sv.is_all_minus() && s == Sign::Plus)
        })
    }

    /// Voters (0-based) `i` with `f(U^σ) = U^{σ_i}` on every vertex.
    pub fn dictators(&self) -> Vec<usize> {
        (0..self.nerve.voters())
            .filter(|&i| {
                self.nerve
                    .vertices()
                    .iter()
                    .zip(&self.signs)
                    .all(|(l, &s)| l.sigma().get(i) == s)
            })
            .collect()
    }

    /// Signs over canonically sorted vertices, e.g. `"+-+"`.
    pub fn sign_string(&self) -> String {
        self.signs.iter().map(|s| s.as_char()).collect()
    }
}

/// `(ab, bc, ac)` pair positions of every triple `a < b < c`.
pub(crate) fn triple_positions(nerve: &Nerve) -> Vec<[usize; 3]> {
    nerve
        .alternatives()
        .triples()
        .into_iter()
        .map(|[a, b, c]| {
            [
                nerve.pair_index(a, b),
                nerve.pair_index(b, c),
                nerve.pair_index(a, c),
            ]
        })
        .collect()
}

/// Signs on `(ab, bc, ac)` describe `a>b>c>a` or its reverse.
pub(crate) fn is_cyclic(ab: Sign, bc: Sign, ac: Sign) -> bool {
    ab == bc && ac != ab
}

/// `𝓑`: the chromatic map of an IIA table. `nerve` must be the nerve of the
/// table's domain.
pub fn bij_b(table: &SwfTable, nerve: &Arc<Nerve>) -> Result<ChromaticMap> {
    if nerve.domain() != table.domain() {
        return Err(Error::domain("nerve was built from a different domain"));
    }
    if let Some(v) = table.iia_violation() {
        let alts = table.domain().alternatives();
        let profiles = table.domain().profiles();
        return Err(Error::precondition(format!(
            "table violates IIA on {{{},{}}}: profiles ({}) and ({}) agree on the pair but \
             their social rankings do not",
            alts.name(v.pair.0),
            alts.name(v.pair.1),
            profiles[v.first].display(alts),
            profiles[v.second].display(alts),
        )));
    }
    let signs = nerve
        .vertices()
        .par_iter()
        .enumerate()
        .map(|(v, l)| {
            let plus = nerve
                .support(v)
                .iter()
                .all(|&p| table.outputs()[p as usize].prefers(l.first(), l.second()));
            Sign::from_bool(plus)
        })
        .collect();
    ChromaticMap::new(Arc::clone(nerve), signs)
}

/// `𝓑⁻¹`: the table `P ↦ h̄(f(g_X(P)))`.
pub fn bij_b_inv(map: &ChromaticMap) -> Result<SwfTable> {
    let nerve = map.nerve();
    let alts = nerve.alternatives();
    let outputs = (0..nerve.facet_count())
        .map(|p| {
            h_bar(&map.facet_image(p)).map_err(|_| {
                Error::precondition(format!(
                    "map is not simplicial: the image of the facet of ({}) is intransitive",
                    nerve.domain().profiles()[p].display(alts)
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SwfTable::new(nerve.domain().clone(), outputs)
}
