//! Plain-text domain files.
//!
//! ```text
//! # comments run to the end of the line
//! alternatives: x y z
//! voters: 2
//! x>y>z z>y>x
//! y>x>z y>z>x
//! ```
//!
//! The two header lines come first, in either order. Each later non-empty
//! line is one profile: one ranking per voter, best first.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::preferences::{AlternativeSet, Domain, Profile, Ranking, MAX_VOTERS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedDomain {
    pub domain: Domain,
    /// Non-fatal findings, e.g. repeated profiles, with line numbers.
    pub warnings: Vec<String>,
}

fn header_value<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(key)?.trim_start();
    rest.strip_prefix(':').map(str::trim)
}

fn parse_ranking(word: &str, alts: &AlternativeSet, line: usize) -> Result<Ranking> {
    let mut order = Vec::with_capacity(alts.len());
    for name in word.split('>') {
        let a = alts
            .index_of(name)
            .ok_or_else(|| Error::parse(line, format!("unknown alternative `{name}` in `{word}`")))?;
        if order.contains(&a) {
            return Err(Error::parse(
                line,
                format!("alternative `{name}` appears twice in `{word}`"),
            ));
        }
        order.push(a);
    }
    if order.len() != alts.len() {
        return Err(Error::parse(
            line,
            format!(
                "ranking `{word}` lists {} alternatives, expected {}",
                order.len(),
                alts.len()
            ),
        ));
    }
    Ok(Ranking::new(order).expect("checked above"))
}

pub fn parse_domain(text: &str) -> Result<ParsedDomain> {
    let mut alts: Option<AlternativeSet> = None;
    let mut voters: Option<usize> = None;
    let mut seen = BTreeSet::new();
    let mut profiles = Vec::new();
    let mut warnings = Vec::new();
    let mut last_line = 0;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(v) = header_value(content, "alternatives") {
            if alts.is_some() || !profiles.is_empty() {
                return Err(Error::parse(line, "misplaced alternatives header"));
            }
            let names: Vec<String> = v.split_whitespace().map(str::to_string).collect();
            alts = Some(AlternativeSet::new(names).map_err(|e| Error::parse(line, e.to_string()))?);
            continue;
        }
        if let Some(v) = header_value(content, "voters") {
            if voters.is_some() || !profiles.is_empty() {
                return Err(Error::parse(line, "misplaced voters header"));
            }
            let n: usize = v
                .parse()
                .map_err(|_| Error::parse(line, format!("voter count `{v}` is not a number")))?;
            if n == 0 || n > MAX_VOTERS {
                return Err(Error::parse(
                    line,
                    format!("voter count must be between 1 and {MAX_VOTERS}"),
                ));
            }
            voters = Some(n);
            continue;
        }
        let (Some(alts), Some(n)) = (&alts, voters) else {
            return Err(Error::parse(
                line,
                "profile before the alternatives and voters headers",
            ));
        };
        let rankings = content
            .split_whitespace()
            .map(|w| parse_ranking(w, alts, line))
            .collect::<Result<Vec<_>>>()?;
        if rankings.len() != n {
            return Err(Error::parse(
                line,
                format!("profile has {} rankings, expected {n}", rankings.len()),
            ));
        }
        let p = Profile::new(rankings).map_err(|e| Error::parse(line, e.to_string()))?;
        if !seen.insert(p.clone()) {
            warnings.push(format!("line {line}: duplicate profile ignored"));
            continue;
        }
        profiles.push(p);
    }

    let end = last_line.max(1);
    let alts = alts.ok_or_else(|| Error::parse(end, "missing alternatives header"))?;
    let voters = voters.ok_or_else(|| Error::parse(end, "missing voters header"))?;
    if profiles.is_empty() {
        return Err(Error::parse(end, "domain has no profiles"));
    }
    let domain = Domain::new(alts, voters, profiles).map_err(|e| Error::parse(end, e.to_string()))?;
    Ok(ParsedDomain { domain, warnings })
}

/// Canonical text: headers, then profiles in sorted order.
pub fn serialize_domain(d: &Domain) -> String {
    let alts = d.alternatives();
    let mut out = format!(
        "alternatives: {}\nvoters: {}\n",
        alts.names().join(" "),
        d.voters()
    );
    for p in d.profiles() {
        out.push_str(&p.display(alts).to_string());
        out.push('\n');
    }
    out
}
