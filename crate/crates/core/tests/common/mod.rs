//! Brute-force oracles shared by the integration tests. None of these call
//! into the search, the class checks or the bijections they are compared
//! against.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use arrovian::nerve::Nerve;
use arrovian::preferences::{enumerate_rankings, AlternativeSet, Domain, Profile, Ranking};
use arrovian::seed::SplitMix64;

pub fn alts(m: usize) -> AlternativeSet {
    AlternativeSet::standard(m).unwrap()
}

/// `"x>y>z"` or `"xyz"` over single-letter names.
pub fn ranking(s: &str, alts: &AlternativeSet) -> Ranking {
    let order = if s.contains('>') {
        s.split('>').map(|n| alts.index_of(n).unwrap()).collect()
    } else {
        s.chars()
            .map(|c| alts.index_of(&c.to_string()).unwrap())
            .collect()
    };
    Ranking::new(order).unwrap()
}

/// Space-separated rankings, one per voter.
pub fn profile(s: &str, alts: &AlternativeSet) -> Profile {
    Profile::new(s.split_whitespace().map(|r| ranking(r, alts)).collect()).unwrap()
}

pub fn domain(alts: &AlternativeSet, n: usize, lines: &[&str]) -> Domain {
    Domain::new(
        alts.clone(),
        n,
        lines.iter().map(|l| profile(l, alts)).collect(),
    )
    .unwrap()
}

pub fn random_profile(rng: &mut SplitMix64, alts: &AlternativeSet, n: usize) -> Profile {
    let all = enumerate_rankings(&alts.indices());
    Profile::new(
        (0..n)
            .map(|_| all[rng.next_below(all.len() as u64) as usize].clone())
            .collect(),
    )
    .unwrap()
}

/// Up to `size` random profiles (fewer when draws repeat).
pub fn random_domain(rng: &mut SplitMix64, alts: &AlternativeSet, n: usize, size: usize) -> Domain {
    let profiles = (0..size.max(1)).map(|_| random_profile(rng, alts, n)).collect();
    Domain::new(alts.clone(), n, profiles).unwrap()
}

fn plus_mask(p: &Profile, a: usize, b: usize) -> u32 {
    p.rankings()
        .iter()
        .enumerate()
        .filter(|(_, r)| r.prefers(a, b))
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

/// Every assignment of signs to the non-unanimity vertices, kept when no
/// profile is sent to a cyclic social relation. Sign strings in vertex
/// order, sorted with `+` first. `None` above `2^max_free` candidates.
pub fn naive_sign_strings(nerve: &Nerve, unanimity: bool, max_free: usize) -> Option<Vec<String>> {
    let n = nerve.voters();
    let full = (1u32 << n) - 1;
    let id: HashMap<(usize, usize, u32), usize> = nerve
        .vertices()
        .iter()
        .enumerate()
        .map(|(v, l)| ((l.first(), l.second(), l.sigma().plus_mask()), v))
        .collect();
    let mut fixed: Vec<Option<bool>> = vec![None; id.len()];
    if unanimity {
        for (&(_, _, mask), &v) in &id {
            if mask == full {
                fixed[v] = Some(true);
            } else if mask == 0 {
                fixed[v] = Some(false);
            }
        }
    }
    let free: Vec<usize> = (0..fixed.len()).filter(|&v| fixed[v].is_none()).collect();
    if free.len() > max_free {
        return None;
    }

    let m = nerve.alternatives().len();
    let mut triangles = BTreeSet::new();
    for p in nerve.domain().profiles() {
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    triangles.insert([
                        id[&(a, b, plus_mask(p, a, b))],
                        id[&(b, c, plus_mask(p, b, c))],
                        id[&(a, c, plus_mask(p, a, c))],
                    ]);
                }
            }
        }
    }

    let mut out = Vec::new();
    let mut signs: Vec<bool> = fixed.iter().map(|s| s.unwrap_or(false)).collect();
    for assignment in 0u64..1 << free.len() {
        for (k, &v) in free.iter().enumerate() {
            signs[v] = assignment >> k & 1 == 1;
        }
        let transitive = triangles.iter().all(|&[ab, bc, ac]| {
            let (ab, bc, ac) = (signs[ab], signs[bc], signs[ac]);
            !(ab && bc && !ac) && !(!ab && !bc && ac)
        });
        if transitive {
            out.push(signs.iter().map(|&s| if s { '+' } else { '-' }).collect());
        }
    }
    out.sort();
    Some(out)
}

/// First-block profiles written out by hand: `(G ranking, G^c ranking)`
/// over the letters `α β γ`.
pub const FIRST_BLOCK_LISTING: [(&str, &str); 6] = [
    ("βγα", "αβγ"),
    ("βαγ", "αγβ"),
    ("αβγ", "γαβ"),
    ("αγβ", "γβα"),
    ("γαβ", "βγα"),
    ("γβα", "βαγ"),
];

fn greek(word: &str, t: [usize; 3]) -> Ranking {
    Ranking::new(
        word.chars()
            .map(|c| match c {
                'α' => t[0],
                'β' => t[1],
                'γ' => t[2],
                _ => unreachable!(),
            })
            .collect(),
    )
    .unwrap()
}

/// The profiles of one block over `n` voters on the sorted triple `t`.
pub fn listed_block(n: usize, g: u32, t: [usize; 3], second: bool) -> Vec<Profile> {
    FIRST_BLOCK_LISTING
        .iter()
        .map(|&(on, off)| {
            let (on, off) = if second { (off, on) } else { (on, off) };
            Profile::new(
                (0..n)
                    .map(|i| greek(if g >> i & 1 == 1 { on } else { off }, t))
                    .collect(),
            )
            .unwrap()
        })
        .collect()
}

fn restricted(d: &Domain, t: [usize; 3]) -> BTreeSet<Vec<Vec<usize>>> {
    d.profiles()
        .iter()
        .map(|p| {
            p.rankings()
                .iter()
                .map(|r| r.order().iter().copied().filter(|a| t.contains(a)).collect())
                .collect()
        })
        .collect()
}

fn triples(m: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Every proper coalition and every triple has one full block in `D|_Y`.
pub fn oracle_in_pt(d: &Domain) -> bool {
    let n = d.voters();
    let m = d.alternatives().len();
    triples(m).into_iter().all(|t| {
        let seen = restricted(d, t);
        (1..(1u32 << n) - 1).all(|g| {
            [false, true].iter().any(|&second| {
                listed_block(n, g, t, second)
                    .iter()
                    .all(|p| seen.contains(&p.rankings().iter().map(|r| r.order().to_vec()).collect::<Vec<_>>()))
            })
        })
    })
}

/// Ordered pairs of proper coalitions neither containing the other.
pub fn oracle_incomparable(n: usize) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for g in 1..(1u32 << n) - 1 {
        for h in 1..(1u32 << n) - 1 {
            if g & h != g && g & h != h {
                out.push((g, h));
            }
        }
    }
    out
}

/// For every incomparable `(G, G')` some profile and ordered triple
/// `(a, b, c)` has `G` ranking `a` over `b`, `G'` ranking `b` over `c` and
/// exactly `G ∩ G'` ranking `a` over `c`, each as the full set of such
/// voters.
pub fn oracle_in_dt(d: &Domain) -> bool {
    let n = d.voters();
    let m = d.alternatives().len();
    oracle_incomparable(n).into_iter().all(|(g, h)| {
        d.profiles().iter().any(|p| {
            (0..m).any(|a| {
                (0..m).any(|b| {
                    (0..m).any(|c| {
                        a != b
                            && b != c
                            && a != c
                            && plus_mask(p, a, b) == g
                            && plus_mask(p, b, c) == h
                            && plus_mask(p, a, c) == g & h
                    })
                })
            })
        })
    })
}

/// Voters whose ranking is the table's output on every profile.
pub fn oracle_table_dictators(d: &Domain, outputs: &[Ranking]) -> Vec<usize> {
    (0..d.voters())
        .filter(|&i| d.profiles().iter().zip(outputs).all(|(p, r)| p.ranking(i) == r))
        .collect()
}

/// Pairwise independence checked directly on profile pairs.
pub fn oracle_iia(d: &Domain, outputs: &[Ranking]) -> bool {
    let m = d.alternatives().len();
    let ps = d.profiles();
    for a in 0..m {
        for b in a + 1..m {
            let mut seen: HashMap<u32, bool> = HashMap::new();
            for (p, r) in ps.iter().zip(outputs) {
                let social = r.prefers(a, b);
                if *seen.entry(plus_mask(p, a, b)).or_insert(social) != social {
                    return false;
                }
            }
        }
    }
    true
}

/// Unanimous profiles on a pair give the same social order.
pub fn oracle_unanimous(d: &Domain, outputs: &[Ranking]) -> bool {
    let m = d.alternatives().len();
    let full = (1u32 << d.voters()) - 1;
    d.profiles().iter().zip(outputs).all(|(p, r)| {
        (0..m).all(|a| {
            (0..m).all(|b| a == b || plus_mask(p, a, b) != full || r.prefers(a, b))
        })
    })
}

/// Sign of `U_{ab}^σ` under an IIA table: the social order on `(a, b)` at
/// any profile with that sign vector.
pub fn oracle_vertex_sign(d: &Domain, outputs: &[Ranking], a: usize, b: usize, mask: u32) -> Option<bool> {
    d.profiles()
        .iter()
        .zip(outputs)
        .find(|(p, _)| plus_mask(p, a, b) == mask)
        .map(|(_, r)| r.prefers(a, b))
}

/// Whether `fam` (bitmask per coalition) is `{G : i ∈ G}` for some voter.
pub fn is_principal_family(n: usize, fam: &BTreeSet<u32>) -> Option<usize> {
    (0..n).find(|&i| {
        let principal: BTreeSet<u32> = (0..1u32 << n).filter(|g| g >> i & 1 == 1).collect();
        &principal == fam
    })
}

/// Calls `visit` with every table `D → W(X)`, profiles in domain order.
pub fn for_each_table(d: &Domain, mut visit: impl FnMut(&[Ranking])) {
    let all = enumerate_rankings(&d.alternatives().indices());
    let mut digits = vec![0usize; d.len()];
    loop {
        let outputs: Vec<Ranking> = digits.iter().map(|&k| all[k].clone()).collect();
        visit(&outputs);
        let mut i = 0;
        loop {
            if i == digits.len() {
                return;
            }
            digits[i] += 1;
            if digits[i] < all.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// A table built pair by pair: each pair is settled by one voter, by a
/// constant, or by a weighted vote, chosen at random. Kept only when every
/// profile gets a transitive outcome, so the result is IIA by construction.
pub fn random_pairwise_table(rng: &mut SplitMix64, d: &Domain) -> Option<Vec<Ranking>> {
    let m = d.alternatives().len();
    let n = d.voters();
    let mut rules: HashMap<(usize, usize), (u64, Vec<u64>)> = HashMap::new();
    for a in 0..m {
        for b in a + 1..m {
            let kind = rng.next_below(4);
            let weights = (0..n).map(|_| rng.next_below(3)).collect();
            rules.insert((a, b), (kind * 100 + rng.next_below(n as u64), weights));
        }
    }
    let decide = |p: &Profile, a: usize, b: usize| -> bool {
        let (code, weights) = &rules[&(a.min(b), a.max(b))];
        let ab = match code / 100 {
            0 => p.ranking((code % 100) as usize).prefers(a.min(b), a.max(b)),
            1 => true,
            2 => false,
            _ => {
                let score: i64 = (0..n)
                    .map(|i| {
                        let w = weights[i] as i64;
                        if p.ranking(i).prefers(a.min(b), a.max(b)) { w } else { -w }
                    })
                    .sum();
                score > 0 || (score == 0 && p.ranking(0).prefers(a.min(b), a.max(b)))
            }
        };
        if a < b { ab } else { !ab }
    };
    d.profiles()
        .iter()
        .map(|p| Ranking::from_relation(&d.alternatives().indices(), |a, b| decide(p, a, b)))
        .collect()
}

/// Checks the table/map correspondence on one table against the direct
/// definitions. Returns whether the table is IIA.
pub fn check_table(nerve: &std::sync::Arc<Nerve>, outputs: &[Ranking]) -> Result<bool, String> {
    use arrovian::swf::{bij_b, bij_b_inv, SwfTable};
    let d = nerve.domain();
    let table = SwfTable::new(d.clone(), outputs.to_vec()).map_err(|e| e.to_string())?;
    let iia = oracle_iia(d, outputs);
    if table.satisfies_iia() != iia {
        return Err(format!("IIA disagreement, oracle says {iia}"));
    }
    if !iia {
        return match bij_b(&table, nerve) {
            Ok(_) => Err("map built from a non-IIA table".into()),
            Err(_) => Ok(false),
        };
    }
    let f = bij_b(&table, nerve).map_err(|e| e.to_string())?;
    for (v, l) in nerve.vertices().iter().enumerate() {
        let want = oracle_vertex_sign(d, outputs, l.first(), l.second(), l.sigma().plus_mask());
        if want != Some(f.sign(v).is_plus()) {
            return Err(format!("vertex {v} has the wrong sign"));
        }
    }
    let back = bij_b_inv(&f).map_err(|e| e.to_string())?;
    if back.outputs() != outputs {
        return Err("inverse does not return the table".into());
    }
    if f.satisfies_unanimity() != oracle_unanimous(d, outputs) {
        return Err("unanimity not preserved".into());
    }
    let dictators = oracle_table_dictators(d, outputs);
    if f.dictators() != dictators || table.dictators() != dictators {
        return Err(format!(
            "dictators differ: oracle {dictators:?}, map {:?}, table {:?}",
            f.dictators(),
            table.dictators()
        ));
    }
    Ok(true)
}

#[derive(Debug)]
pub struct RoundTrips {
    pub instances: u64,
    pub unanimous_complete: bool,
    /// Every simplicial map, unanimous or not, was within the cap.
    pub all_maps_complete: bool,
}

/// Round trips of the profile/simplex and ranking/facet correspondences,
/// and of the table/map correspondence on every unanimous simplicial map
/// plus up to `map_cap` simplicial maps of any kind.
pub fn check_round_trips(nerve: &std::sync::Arc<Nerve>, map_cap: usize) -> Result<RoundTrips, String> {
    use arrovian::nerve::{g_bar, g_y, h_bar, h_y, Simplex, SocialNerve};
    use arrovian::search::{enumerate_maps, SearchOptions};
    use arrovian::swf::{bij_b, bij_b_inv};

    let d = nerve.domain();
    let m = d.alternatives().len();
    let mut count = 0u64;
    for ymask in 0u32..1 << m {
        if ymask.count_ones() < 2 {
            continue;
        }
        let ys: Vec<usize> = (0..m).filter(|&a| ymask >> a & 1 == 1).collect();
        let restricted = d.restrict(&ys).map_err(|e| e.to_string())?;
        for q in &restricted {
            let s = g_y(q).map_err(|e| e.to_string())?;
            if h_y(&s, &restricted).map_err(|e| e.to_string())? != *q {
                return Err(format!("h_Y(g_Y(Q)) != Q on Y={ys:?}"));
            }
            count += 1;
        }
        let faces: BTreeSet<Simplex<_>> = (0..nerve.facet_count())
            .map(|p| {
                Simplex::new(
                    nerve
                        .facet(p)
                        .vertices()
                        .filter(|l| ys.contains(&l.first()) && ys.contains(&l.second()))
                        .cloned(),
                )
                .unwrap()
            })
            .collect();
        if faces.len() != restricted.len() {
            return Err(format!("Y={ys:?}: {} faces for {} subprofiles", faces.len(), restricted.len()));
        }
        for s in &faces {
            let q = h_y(s, &restricted).map_err(|e| e.to_string())?;
            if g_y(&q).map_err(|e| e.to_string())? != *s {
                return Err(format!("g_Y(h_Y(s)) != s on Y={ys:?}"));
            }
            count += 1;
        }
    }

    for r in enumerate_rankings(&d.alternatives().indices()) {
        if h_bar(&g_bar(&r)).map_err(|e| e.to_string())? != r {
            return Err("h̄(ḡ(r)) != r".into());
        }
        count += 1;
    }
    for facet in SocialNerve::build(d.alternatives()).facets() {
        if g_bar(&h_bar(facet).map_err(|e| e.to_string())?) != *facet {
            return Err("ḡ(h̄(F)) != F".into());
        }
        count += 1;
    }

    let unanimous = enumerate_maps(nerve, SearchOptions::default());
    let any = enumerate_maps(
        nerve,
        SearchOptions {
            unanimity: false,
            max_maps: Some(map_cap),
        },
    );
    use rayon::prelude::*;
    unanimous
        .maps
        .par_iter()
        .chain(any.maps.par_iter())
        .try_for_each(|f| {
            let t = bij_b_inv(f).map_err(|e| e.to_string())?;
            if bij_b(&t, nerve).map_err(|e| e.to_string())? != *f {
                return Err(format!("𝓑(𝓑⁻¹(f)) != f for {}", f.sign_string()));
            }
            if !check_table(nerve, t.outputs())? {
                return Err("table of a simplicial map is not IIA".into());
            }
            Ok(())
        })?;
    count += 2 * (unanimous.maps.len() + any.maps.len()) as u64;
    Ok(RoundTrips {
        instances: count,
        unanimous_complete: unanimous.complete,
        all_maps_complete: any.complete,
    })
}

/// The witness domain built from the first block everywhere and the first
/// triple in identity order for every diversity pair.
pub fn canonical_witness(m: usize, n: usize) -> Domain {
    arrovian::classes::gen_ptdt_domain(&alts(m), n, &mut std::iter::repeat(false)).unwrap()
}

pub fn witness_domain(m: usize, n: usize, seed: u64) -> Domain {
    arrovian::classes::gen_ptdt_domain(&alts(m), n, &mut arrovian::seed::BitStream::new(seed)).unwrap()
}

/// A generated member domain with a few profiles dropped and a few random
/// ones added, so that membership can go either way.
pub fn perturbed_domain(rng: &mut SplitMix64, m: usize, n: usize) -> Domain {
    let base = witness_domain(m, n, rng.next_u64());
    let drop = rng.next_below(3) as usize;
    let mut profiles = base.profiles().to_vec();
    for _ in 0..drop {
        let k = rng.next_below(profiles.len() as u64) as usize;
        profiles.swap_remove(k);
    }
    for _ in 0..rng.next_below(4) {
        profiles.push(random_profile(rng, base.alternatives(), n));
    }
    Domain::new(base.alternatives().clone(), n, profiles).unwrap()
}

/// Renames alternative `a` to `alt_perm[a]` and gives voter `j` the ranking
/// of voter `voter_perm[j]`.
pub fn permuted(d: &Domain, alt_perm: &[usize], voter_perm: &[usize]) -> Domain {
    let profiles = d
        .profiles()
        .iter()
        .map(|p| {
            Profile::new(
                voter_perm
                    .iter()
                    .map(|&j| {
                        Ranking::new(p.ranking(j).order().iter().map(|&a| alt_perm[a]).collect())
                            .unwrap()
                    })
                    .collect(),
            )
            .unwrap()
        })
        .collect();
    Domain::new(d.alternatives().clone(), d.voters(), profiles).unwrap()
}

pub fn shuffled(rng: &mut SplitMix64, k: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        v.swap(i, rng.next_below(i as u64 + 1) as usize);
    }
    v
}

/// Some profile is not value-restricted on some triple.
pub fn has_unrestricted_profile(d: &Domain) -> bool {
    let m = d.alternatives().len();
    d.profiles()
        .iter()
        .any(|p| triples(m).iter().any(|t| !p.is_value_restricted(t).unwrap()))
}
