mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use arrovian::classes::{gen_ptdt_domain, in_dt, in_nx_class, in_pt};
use arrovian::decisive::{enumerate_ultrafilters, principal_element};
use arrovian::format::{parse_domain, serialize_domain};
use arrovian::nerve::Nerve;
use arrovian::preferences::{AlternativeSet, Domain};
use arrovian::search::{
    arrow_verdict, audit_lemmas, enumerate_maps, super_arrovian_probe, ProbeOptions,
    SearchOptions,
};
use arrovian::seed::BitStream;
use arrovian::swf::bij_b_inv;
use arrovian::Error;

use report::*;

#[derive(Parser)]
#[command(name = "arrovian", version, about = "Nerves, IIA maps and Arrow verdicts for preference domains")]
struct Cli {
    /// Leave search statistics out of the report.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Nerve of a domain.
    Nerve {
        #[command(subcommand)]
        action: NerveAction,
    },
    /// Class membership and witness domains.
    Domain {
        #[command(subcommand)]
        action: DomainAction,
    },
    /// Unanimous IIA rules as chromatic simplicial maps.
    Swf {
        #[command(subcommand)]
        action: SwfAction,
    },
    /// Check the lemma suite against every unanimous map of a domain.
    Audit { file: PathBuf },
    /// Superdomain probes.
    Probe {
        #[command(subcommand)]
        action: ProbeAction,
    },
    /// Ultrafilters on a small voter set.
    Ultra {
        #[command(subcommand)]
        action: UltraAction,
    },
}

#[derive(Subcommand)]
enum NerveAction {
    Build {
        file: PathBuf,
        /// Also write the 2-skeleton as a DOT graph.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    Pt,
    Dt,
    Ptdt,
    Nx,
}

#[derive(Subcommand)]
enum DomainAction {
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        class: Class,
    },
    /// Generate a domain in both polarization and diversity classes.
    Gen {
        #[arg(long)]
        alternatives: usize,
        #[arg(long)]
        voters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum SwfAction {
    Enumerate {
        file: PathBuf,
        /// Attach the social ranking of every profile to each map.
        #[arg(long)]
        tables: bool,
        /// Stop after this many maps.
        #[arg(long)]
        limit: Option<usize>,
    },
    Verdict {
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum ProbeAction {
    Super {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        add: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sweep every superdomain when there are at most this many.
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
    },
}

#[derive(Subcommand)]
enum UltraAction {
    Enum {
        #[arg(long)]
        voters: usize,
    },
}

enum Failure {
    Parse(String),
    Precondition(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Parse(e.to_string()),
            other => Failure::Precondition(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Loaded {
    domain: Domain,
    input: Input,
    warnings: Vec<String>,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::Parse(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure::Parse(format!("{} is not UTF-8", path.display())))?;
    let parsed = parse_domain(&text)?;
    Ok(Loaded {
        domain: parsed.domain,
        input: Input {
            path: path.display().to_string(),
            sha256: digest(&bytes),
        },
        warnings: parsed.warnings,
    })
}

struct Emitter {
    command: Vec<String>,
    quiet: bool,
}

impl Emitter {
    fn emit<P: Serialize>(
        &self,
        input: Option<Input>,
        warnings: Vec<String>,
        payload: P,
        stats: Option<Stats>,
    ) -> Outcome {
        let report = Report {
            schema: SCHEMA,
            tool: "arrovian",
            version: env!("CARGO_PKG_VERSION"),
            command: self.command.clone(),
            input,
            warnings,
            payload,
            stats: if self.quiet { None } else { stats },
        };
        let text = serde_json::to_string_pretty(&report).expect("reports serialize");
        let mut stdout = std::io::stdout().lock();
        match writeln!(stdout, "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(Failure::Precondition(format!("cannot write report: {e}")))
            }
            _ => Ok(()),
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::Precondition(format!("cannot write {}: {e}", path.display())))
}

fn nerve_build(out: &Emitter, file: &Path, dot: Option<&Path>) -> Outcome {
    let l = load(file)?;
    let nerve = Nerve::build(l.domain);
    let alts = nerve.alternatives();
    if let Some(path) = dot {
        write_file(path, &nerve.to_dot())?;
    }
    let payload = NervePayload {
        alternatives: alts.names().to_vec(),
        voters: nerve.voters(),
        profiles: nerve.facet_count(),
        dimension: nerve.dimension(),
        f_vector: [
            nerve.vertex_count(),
            nerve.skeleton_iter(1).filter(|s| s.len() == 2).count(),
            nerve.skeleton_iter(2).filter(|s| s.len() == 3).count(),
        ],
        vertices: nerve.vertices().iter().map(|v| v.render(alts)).collect(),
        dot: dot.map(|p| p.display().to_string()),
    };
    out.emit(Some(l.input), l.warnings, payload, None)
}

fn domain_check(out: &Emitter, file: &Path, class: Class) -> Outcome {
    let l = load(file)?;
    let d = &l.domain;
    let (name, pt, dt) = match class {
        Class::Pt => ("pt", Some(in_pt(d)?), None),
        Class::Dt => ("dt", None, Some(in_dt(d)?)),
        Class::Ptdt => ("ptdt", Some(in_pt(d)?), Some(in_dt(d)?)),
        Class::Nx => ("nx", None, None),
    };
    let member = match class {
        Class::Nx => in_nx_class(d),
        _ => pt.iter().chain(dt.iter()).all(|c| c.member),
    };
    let payload = CheckPayload {
        class: name.to_string(),
        member,
        pt: pt.as_ref().map(|c| CertificateJson::new(c, d)),
        dt: dt.as_ref().map(|c| CertificateJson::new(c, d)),
    };
    out.emit(Some(l.input), l.warnings, payload, None)
}

fn domain_gen(out: &Emitter, m: usize, n: usize, seed: u64, output: &Path) -> Outcome {
    let alts = AlternativeSet::standard(m)?;
    let d = gen_ptdt_domain(&alts, n, &mut BitStream::new(seed))?;
    let text = serialize_domain(&d);
    write_file(output, &text)?;
    let payload = GenPayload {
        alternatives: alts.names().to_vec(),
        voters: n,
        seed,
        profiles: d.len(),
        output: output.display().to_string(),
        output_sha256: digest(text.as_bytes()),
    };
    out.emit(None, Vec::new(), payload, None)
}

fn swf_enumerate(out: &Emitter, file: &Path, tables: bool, limit: Option<usize>) -> Outcome {
    let l = load(file)?;
    let nerve = Arc::new(Nerve::build(l.domain));
    let e = enumerate_maps(
        &nerve,
        SearchOptions {
            unanimity: true,
            max_maps: limit,
        },
    );
    let maps = e
        .maps
        .iter()
        .map(|f| {
            let table = if tables { Some(bij_b_inv(f)?) } else { None };
            Ok(MapJson::new(f, table.as_ref()))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let payload = EnumeratePayload {
        vertices: nerve
            .vertices()
            .iter()
            .map(|v| v.render(nerve.alternatives()))
            .collect(),
        count: maps.len(),
        complete: e.complete,
        maps,
    };
    out.emit(Some(l.input), l.warnings, payload, Some(e.stats.into()))
}

fn swf_verdict(out: &Emitter, file: &Path) -> Outcome {
    let l = load(file)?;
    let nerve = Arc::new(Nerve::build(l.domain));
    let v = arrow_verdict(&nerve, true)?;
    out.emit(
        Some(l.input),
        l.warnings,
        VerdictPayload::new(&v),
        Some(v.stats.into()),
    )
}

fn audit(out: &Emitter, file: &Path) -> Outcome {
    let l = load(file)?;
    let nerve = Arc::new(Nerve::build(l.domain));
    let e = enumerate_maps(&nerve, SearchOptions::default());
    let r = audit_lemmas(&nerve, &e.maps)?;
    out.emit(
        Some(l.input),
        l.warnings,
        AuditPayload::new(&r),
        Some(e.stats.into()),
    )
}

fn probe_super(out: &Emitter, file: &Path, options: ProbeOptions) -> Outcome {
    let l = load(file)?;
    let r = super_arrovian_probe(&l.domain, options)?;
    let payload = ProbePayload::new(&r, options.add, l.domain.alternatives());
    out.emit(Some(l.input), l.warnings, payload, None)
}

fn ultra_enum(out: &Emitter, n: usize) -> Outcome {
    let found = enumerate_ultrafilters(n)?;
    let ultrafilters = found
        .iter()
        .map(|fam| Ok(UltraJson::new(fam, principal_element(fam)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let payload = UltraPayload {
        voters: n,
        families: 1u64 << (1u32 << n),
        count: ultrafilters.len(),
        ultrafilters,
    };
    out.emit(None, Vec::new(), payload, None)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("ARROVIAN_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Precondition(format!("ARROVIAN_THREADS=`{raw}` is not a count")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Precondition(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    let out = Emitter {
        command: std::env::args().skip(1).collect(),
        quiet: cli.quiet,
    };
    match cli.command {
        Command::Nerve {
            action: NerveAction::Build { file, dot },
        } => nerve_build(&out, &file, dot.as_deref()),
        Command::Domain { action } => match action {
            DomainAction::Check { file, class } => domain_check(&out, &file, class),
            DomainAction::Gen {
                alternatives,
                voters,
                seed,
                output,
            } => domain_gen(&out, alternatives, voters, seed, &output),
        },
        Command::Swf { action } => match action {
            SwfAction::Enumerate {
                file,
                tables,
                limit,
            } => swf_enumerate(&out, &file, tables, limit),
            SwfAction::Verdict { file } => swf_verdict(&out, &file),
        },
        Command::Audit { file } => audit(&out, &file),
        Command::Probe {
            action:
                ProbeAction::Super {
                    file,
                    add,
                    trials,
                    seed,
                    budget,
                },
        } => probe_super(
            &out,
            &file,
            ProbeOptions {
                add,
                trials,
                seed,
                budget,
            },
        ),
        Command::Ultra {
            action: UltraAction::Enum { voters },
        } => ultra_enum(&out, voters),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
