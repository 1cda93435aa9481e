//! Superdomain probing: adds profiles to a member domain and re-checks
//! class membership and the Arrow verdict.

use std::sync::Arc;

use rayon::prelude::*;

use super::{arrow_verdict, Status};
use crate::classes::in_pt_dt;
use crate::error::{Error, Result};
use crate::nerve::{Combinations, Nerve};
use crate::preferences::{Domain, Profile};
use crate::seed::SplitMix64;

/// Largest `(m!)^n` the probe will materialize.
pub const MAX_UNIVERSE: usize = 1 << 17;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeOptions {
    /// Profiles added per superdomain.
    pub add: usize,
    /// Samples drawn when the exhaustive sweep is over budget.
    pub trials: usize,
    pub seed: u64,
    /// Largest number of superdomains swept exhaustively.
    pub budget: u64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            add: 1,
            trials: 100,
            seed: 0,
            budget: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeMode {
    Exhaustive,
    Sampled,
}

impl ProbeMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ProbeMode::Exhaustive => "exhaustive",
            ProbeMode::Sampled => "sampled",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeFailure {
    pub added: Vec<Profile>,
    pub member: bool,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub mode: ProbeMode,
    /// Profiles of `W(X)^n` outside the base domain.
    pub candidates: usize,
    pub superdomains: usize,
    pub all_members: bool,
    pub all_inconsistent: bool,
    /// The first superdomain, in sweep or sample order, that failed.
    pub failure: Option<ProbeFailure>,
}

/// `C(n, k)`, or `None` once it exceeds `cap`.
fn binomial_within(n: usize, k: usize, cap: u64) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u128::from(cap) {
            return None;
        }
    }
    Some(acc as u64)
}

/// `k` distinct indices below `n`, by a partial Fisher–Yates shuffle.
fn sample_indices(rng: &mut SplitMix64, n: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + rng.next_below((n - i) as u64) as usize;
        pool.swap(i, j);
    }
    let mut out = pool[..k].to_vec();
    out.sort_unstable();
    out
}

/// Checks that superdomains of a member domain stay members and stay
/// Arrow-inconsistent. Sweeps every way of adding `add` profiles when that
/// is at most `budget` superdomains, and otherwise draws `trials` of them.
pub fn super_arrovian_probe(d: &Domain, options: ProbeOptions) -> Result<ProbeReport> {
    if !in_pt_dt(d)? {
        return Err(Error::precondition(
            "probe base domain is not in both polarization and diversity classes",
        ));
    }
    let m = d.alternatives().len();
    let universe = (1..=m)
        .try_fold(1usize, |acc, k| acc.checked_mul(k))
        .and_then(|f| f.checked_pow(d.voters() as u32))
        .filter(|&u| u <= MAX_UNIVERSE)
        .ok_or_else(|| Error::precondition("profile space too large to probe"))?;
    let rest: Vec<Profile> = Domain::unrestricted(d.alternatives().clone(), d.voters())?
        .profiles()
        .iter()
        .filter(|p| !d.contains(p))
        .cloned()
        .collect();
    debug_assert_eq!(rest.len() + d.len(), universe);
    if options.add > rest.len() {
        return Err(Error::precondition(format!(
            "cannot add {} profiles, only {} lie outside the domain",
            options.add,
            rest.len()
        )));
    }

    let within_budget = binomial_within(rest.len(), options.add, options.budget).is_some();
    let (mode, picks): (ProbeMode, Vec<Vec<usize>>) = if within_budget {
        (
            ProbeMode::Exhaustive,
            Combinations::new(rest.len(), options.add).collect(),
        )
    } else {
        let mut rng = SplitMix64::new(options.seed);
        (
            ProbeMode::Sampled,
            (0..options.trials)
                .map(|_| sample_indices(&mut rng, rest.len(), options.add))
                .collect(),
        )
    };

    let outcomes: Vec<Result<(bool, Status)>> = picks
        .par_iter()
        .map(|pick| {
            let extra: Vec<Profile> = pick.iter().map(|&i| rest[i].clone()).collect();
            let larger = d.extended(extra)?;
            let member = in_pt_dt(&larger)?;
            let verdict = arrow_verdict(&Arc::new(Nerve::build(larger)), false)?;
            Ok((member, verdict.status))
        })
        .collect();

    let mut report = ProbeReport {
        mode,
        candidates: rest.len(),
        superdomains: picks.len(),
        all_members: true,
        all_inconsistent: true,
        failure: None,
    };
    for (pick, outcome) in picks.iter().zip(outcomes) {
        let (member, status) = outcome?;
        report.all_members &= member;
        report.all_inconsistent &= status == Status::Inconsistent;
        if (!member || status != Status::Inconsistent) && report.failure.is_none() {
            report.failure = Some(ProbeFailure {
                added: pick.iter().map(|&i| rest[i].clone()).collect(),
                member,
                status,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::gen_ptdt_domain;
    use crate::preferences::AlternativeSet;

    #[test]
    fn one_profile_extensions_are_swept() {
        let alts = AlternativeSet::standard(3).unwrap();
        let d = gen_ptdt_domain(&alts, 2, &mut std::iter::repeat(false)).unwrap();
        let r = super_arrovian_probe(&d, ProbeOptions::default()).unwrap();
        assert_eq!(r.mode, ProbeMode::Exhaustive);
        assert_eq!(r.candidates, 29);
        assert_eq!(r.superdomains, 29);
        assert!(r.all_members && r.all_inconsistent);
        assert!(r.failure.is_none());
    }

    #[test]
    fn zero_added_is_the_base_domain() {
        let alts = AlternativeSet::standard(3).unwrap();
        let d = gen_ptdt_domain(&alts, 2, &mut std::iter::repeat(false)).unwrap();
        let r = super_arrovian_probe(
            &d,
            ProbeOptions {
                add: 0,
                ..ProbeOptions::default()
            },
        )
        .unwrap();
        assert_eq!(r.superdomains, 1);
        assert!(r.all_inconsistent);
    }

    #[test]
    fn sampling_is_seeded() {
        let alts = AlternativeSet::standard(3).unwrap();
        let d = gen_ptdt_domain(&alts, 2, &mut std::iter::repeat(false)).unwrap();
        let opts = ProbeOptions {
            add: 3,
            trials: 5,
            seed: 9,
            budget: 10,
        };
        let a = super_arrovian_probe(&d, opts).unwrap();
        assert_eq!(a.mode, ProbeMode::Sampled);
        assert_eq!(a.superdomains, 5);
        assert_eq!(a, super_arrovian_probe(&d, opts).unwrap());
        let mut rng = SplitMix64::new(1);
        for _ in 0..20 {
            let s = sample_indices(&mut rng, 10, 4);
            assert_eq!(s.len(), 4);
            assert!(s.windows(2).all(|w| w[0] < w[1]) && s[3] < 10);
        }
    }

    #[test]
    fn non_member_base_is_rejected() {
        let alts = AlternativeSet::standard(3).unwrap();
        let d = Domain::unrestricted(alts.clone(), 2).unwrap();
        let small = Domain::new(alts, 2, vec![d.profiles()[0].clone()]).unwrap();
        assert!(matches!(
            super_arrovian_probe(&small, ProbeOptions::default()),
            Err(Error::Precondition(_))
        ));
    }
}
