//! JSON report shapes. Field order here is the order in the output.

use serde::Serialize;

use arrovian::classes::{ClassCertificate, Witness};
use arrovian::decisive::CoalitionFamily;
use arrovian::preferences::{AlternativeSet, Coalition};
use arrovian::search::{AuditReport, ProbeReport, SearchStats, Verdict};
use arrovian::swf::{ChromaticMap, SwfTable};

pub const SCHEMA: u32 = 1;

#[derive(Serialize)]
pub struct Report<P: Serialize> {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub input: Option<Input>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub payload: P,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<Stats>,
}

#[derive(Serialize)]
pub struct Input {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct Stats {
    pub free_vertices: usize,
    pub constraints: usize,
    pub subproblems: usize,
    pub nodes: u64,
    pub prunes: u64,
}

impl From<SearchStats> for Stats {
    fn from(s: SearchStats) -> Self {
        Stats {
            free_vertices: s.free_vertices,
            constraints: s.constraints,
            subproblems: s.subproblems,
            nodes: s.nodes,
            prunes: s.prunes,
        }
    }
}

fn voters_of(g: Coalition) -> Vec<usize> {
    g.to_voters()
}

fn names(alts: &AlternativeSet, ys: &[usize]) -> Vec<String> {
    ys.iter().map(|&a| alts.name(a).to_string()).collect()
}

#[derive(Serialize)]
pub struct NervePayload {
    pub alternatives: Vec<String>,
    pub voters: usize,
    pub profiles: usize,
    pub dimension: usize,
    /// Faces of dimension 0, 1 and 2.
    pub f_vector: [usize; 3],
    pub vertices: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dot: Option<String>,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessJson {
    Polarized {
        coalition: Vec<usize>,
        triple: Vec<String>,
        block: u8,
    },
    MissingPolarized {
        coalition: Vec<usize>,
        triple: Vec<String>,
    },
    Diverse {
        first: Vec<usize>,
        second: Vec<usize>,
        alpha_beta_gamma: Vec<String>,
        profile: String,
    },
    MissingDiverse {
        first: Vec<usize>,
        second: Vec<usize>,
    },
}

impl WitnessJson {
    pub fn new(w: &Witness, domain: &arrovian::preferences::Domain) -> Self {
        let alts = domain.alternatives();
        match w {
            Witness::Polarized {
                coalition,
                triple,
                block,
            } => WitnessJson::Polarized {
                coalition: voters_of(*coalition),
                triple: names(alts, triple),
                block: block.number(),
            },
            Witness::MissingPolarized { coalition, triple } => WitnessJson::MissingPolarized {
                coalition: voters_of(*coalition),
                triple: names(alts, triple),
            },
            Witness::Diverse {
                first,
                second,
                alphas,
                profile,
            } => WitnessJson::Diverse {
                first: voters_of(*first),
                second: voters_of(*second),
                alpha_beta_gamma: names(alts, alphas),
                profile: domain.profiles()[*profile].display(alts).to_string(),
            },
            Witness::MissingDiverse { first, second } => WitnessJson::MissingDiverse {
                first: voters_of(*first),
                second: voters_of(*second),
            },
        }
    }
}

#[derive(Serialize)]
pub struct CertificateJson {
    pub member: bool,
    pub size: usize,
    pub witnesses: Vec<WitnessJson>,
}

impl CertificateJson {
    pub fn new(c: &ClassCertificate, domain: &arrovian::preferences::Domain) -> Self {
        CertificateJson {
            member: c.member,
            size: c.len(),
            witnesses: c.witnesses.iter().map(|w| WitnessJson::new(w, domain)).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct CheckPayload {
    pub class: String,
    pub member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pt: Option<CertificateJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<CertificateJson>,
}

#[derive(Serialize)]
pub struct GenPayload {
    pub alternatives: Vec<String>,
    pub voters: usize,
    pub seed: u64,
    pub profiles: usize,
    pub output: String,
    pub output_sha256: String,
}

#[derive(Serialize)]
pub struct MapJson {
    pub signs: String,
    pub dictators: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<TableRow>>,
}

#[derive(Serialize)]
pub struct TableRow {
    pub profile: String,
    pub social: String,
}

pub fn table_rows(t: &SwfTable) -> Vec<TableRow> {
    let alts = t.domain().alternatives();
    t.domain()
        .profiles()
        .iter()
        .zip(t.outputs())
        .map(|(p, r)| TableRow {
            profile: p.display(alts).to_string(),
            social: r.display(alts).to_string(),
        })
        .collect()
}

impl MapJson {
    pub fn new(f: &ChromaticMap, table: Option<&SwfTable>) -> Self {
        MapJson {
            signs: f.sign_string(),
            dictators: f.dictators().iter().map(|i| i + 1).collect(),
            table: table.map(table_rows),
        }
    }
}

#[derive(Serialize)]
pub struct EnumeratePayload {
    /// Canonical vertex order the sign strings refer to.
    pub vertices: Vec<String>,
    pub count: usize,
    pub complete: bool,
    pub maps: Vec<MapJson>,
}

#[derive(Serialize)]
pub struct VerdictPayload {
    pub status: &'static str,
    pub maps: usize,
    pub dictators: Vec<Vec<usize>>,
    pub witness: Option<MapJson>,
}

impl VerdictPayload {
    pub fn new(v: &Verdict) -> Self {
        VerdictPayload {
            status: v.status.as_str(),
            maps: v.maps.len(),
            dictators: v
                .dictators
                .iter()
                .map(|d| d.iter().map(|i| i + 1).collect())
                .collect(),
            witness: v.witness.map(|k| {
                MapJson::new(&v.maps[k], v.tables.as_ref().map(|t| &t[k]))
            }),
        }
    }
}

#[derive(Serialize)]
pub struct CheckJson {
    pub id: &'static str,
    pub statement: &'static str,
    pub applicable: bool,
    pub instances: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub examples: Vec<String>,
}

#[derive(Serialize)]
pub struct AuditPayload {
    pub passed: bool,
    pub in_pt: bool,
    pub in_dt: bool,
    pub in_nx: bool,
    pub maps: usize,
    pub checks: Vec<CheckJson>,
}

impl AuditPayload {
    pub fn new(r: &AuditReport) -> Self {
        AuditPayload {
            passed: r.passed(),
            in_pt: r.in_pt,
            in_dt: r.in_dt,
            in_nx: r.in_nx,
            maps: r.maps,
            checks: r
                .checks
                .iter()
                .map(|c| CheckJson {
                    id: c.id,
                    statement: c.statement,
                    applicable: c.applicable,
                    instances: c.instances,
                    failures: c.failures,
                    examples: c.examples.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct ProbePayload {
    pub mode: &'static str,
    pub added: usize,
    pub candidates: usize,
    pub superdomains: usize,
    pub all_members: bool,
    pub all_inconsistent: bool,
    pub failure: Option<ProbeFailureJson>,
}

#[derive(Serialize)]
pub struct ProbeFailureJson {
    pub added: Vec<String>,
    pub member: bool,
    pub status: &'static str,
}

impl ProbePayload {
    pub fn new(r: &ProbeReport, added: usize, alts: &AlternativeSet) -> Self {
        ProbePayload {
            mode: r.mode.as_str(),
            added,
            candidates: r.candidates,
            superdomains: r.superdomains,
            all_members: r.all_members,
            all_inconsistent: r.all_inconsistent,
            failure: r.failure.as_ref().map(|f| ProbeFailureJson {
                added: f.added.iter().map(|p| p.display(alts).to_string()).collect(),
                member: f.member,
                status: f.status.as_str(),
            }),
        }
    }
}

#[derive(Serialize)]
pub struct UltraPayload {
    pub voters: usize,
    pub families: u64,
    pub count: usize,
    pub ultrafilters: Vec<UltraJson>,
}

#[derive(Serialize)]
pub struct UltraJson {
    pub principal: usize,
    pub members: Vec<Vec<usize>>,
}

impl UltraJson {
    pub fn new(fam: &CoalitionFamily, principal: usize) -> Self {
        UltraJson {
            principal: principal + 1,
            members: fam.members().map(voters_of).collect(),
        }
    }
}
