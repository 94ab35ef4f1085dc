//! Command-line front end: argument types, input parsing and the `run`
//! dispatcher that turns a command into a JSON report and an exit code.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gtorsion::certificate::{CertificateJson, MembershipCertificate, TorsionCertificate, VerificationReport};
use gtorsion::constructors::{
    alexander_genus1, certificate_for, classify, genus1_cert, positive_diagram_cert, singular_disk_cert,
    torus_commutator_cert, with_disk_axiom, ConstructorError, DiskConjugators, FamilySpec, Genus1Case,
};
use gtorsion::derivation::{ReplayOptions, Verdict};
use gtorsion::oracle::{
    abelianization, finite_quotient_search, permutation_eval, todd_coxeter, CosetStatus, QuotientSearch, SmithForm,
};
use gtorsion::presentation::{
    dehn_fill, lin_presentation, torus_presentation, wirtinger, Diagram, Presentation, Slope, SlopeError,
};
use gtorsion::word::Word;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_OVERFLOW: i32 = 3;

pub fn parse_slope(text: &str) -> Result<Slope, SlopeError> {
    text.parse()
}

fn slope_arg(text: &str) -> Result<Slope, String> {
    parse_slope(text).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "gtorsion", version, about = "Build and verify generalized-torsion certificates")]
pub struct Cli {
    /// Write the JSON report to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a certificate for a knot family.
    Build {
        #[command(subcommand)]
        family: BuildFamily,
    },
    /// Replay a certificate and cross-check it with the oracles.
    Verify(VerifyArgs),
    /// List the results that apply to a family at a slope.
    Classify {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_parser = slope_arg, allow_hyphen_values = true)]
        slope: Slope,
    },
    /// Smith normal form of the abelianization.
    Abelianize(GroupArgs),
    /// Todd–Coxeter enumeration over the trivial subgroup.
    Enumerate {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, env = "GTORSION_COSET_CAP", default_value_t = gtorsion::oracle::DEFAULT_COSET_CAP)]
        cap: usize,
    },
    /// Alexander polynomial of C[2p, 2q] and the shape of its roots.
    Alexander {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
    },
    /// Build and verify every (family, slope) entry of a manifest.
    Batch {
        manifest: PathBuf,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum BuildFamily {
    /// Torus knot T(p,q); without a slope the certificate lives in the knot group.
    Torus {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long, value_parser = slope_arg, allow_hyphen_values = true)]
        slope: Option<Slope>,
    },
    /// Genus-one two-bridge knot C[2p, 2q].
    Genus1 {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long, value_parser = slope_arg, allow_hyphen_values = true)]
        slope: Slope,
        /// Force case 1, 2 or 3 instead of the first applicable one.
        #[arg(long)]
        case: Option<u8>,
    },
    /// Knot diagram (JSON) whose negative crossings pass under the base overarc.
    Diagram {
        diagram: PathBuf,
        #[arg(long, value_parser = slope_arg, allow_hyphen_values = true)]
        slope: Slope,
    },
    /// Knot presentation (JSON) extended by a one-signed singular disk relator.
    Disk {
        presentation: PathBuf,
        #[arg(long, default_value_t = 0)]
        p_count: u32,
        #[arg(long, default_value_t = 0)]
        q_count: u32,
        #[arg(long, value_parser = slope_arg, allow_hyphen_values = true)]
        slope: Slope,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub certificate: PathBuf,
    /// Longest intermediate word allowed during replay.
    #[arg(long)]
    pub max_length: Option<u64>,
    #[arg(long, env = "GTORSION_COSET_CAP", default_value_t = gtorsion::oracle::DEFAULT_COSET_CAP)]
    pub cap: usize,
    /// Degree of the permutation quotients to check; 0 skips the search.
    #[arg(long, default_value_t = 4)]
    pub quotient_degree: usize,
    /// Seed for sampled quotient searches (degrees above 5).
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Torus,
    Genus1,
    Diagram,
    Whitehead,
    Montesinos,
    Cable,
    Composite,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<i64>,
    /// Montesinos tangles, e.g. "2,-2,2;2,1".
    #[arg(long, allow_hyphen_values = true)]
    pub tangles: Option<String>,
    /// Diagram JSON file.
    #[arg(long)]
    pub diagram: Option<PathBuf>,
}

/// A group given by a presentation file or a family, optionally filled.
#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Presentation JSON file.
    #[arg(long, conflicts_with = "family")]
    pub presentation: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<i64>,
    #[arg(long)]
    pub diagram: Option<PathBuf>,
    #[arg(long, value_parser = slope_arg, allow_hyphen_values = true)]
    pub slope: Option<Slope>,
}

/// One line of a batch manifest: a family spec plus `"slope"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BatchEntry {
    #[serde(flatten)]
    pub family: FamilySpec,
    pub slope: Slope,
}

#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or files.
    Input(anyhow::Error),
    /// No certificate, or the certificate does not verify.
    Rejected(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

/// A JSON report and the exit code that goes with it.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Option<Value>,
    pub message: Option<String>,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { code: EXIT_OK, report: Some(report), message: None }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_presentation(path: &Path) -> anyhow::Result<Presentation> {
    read_json(path)
}

fn read_diagram(path: &Path) -> anyhow::Result<Diagram> {
    read_json(path)
}

fn need(v: Option<i64>, flag: &str) -> anyhow::Result<i64> {
    v.ok_or_else(|| anyhow!("--{flag} is required for this family"))
}

fn parse_tangles(text: &str) -> anyhow::Result<Vec<Vec<i64>>> {
    text.split(';')
        .map(|t| {
            t.split(',')
                .map(|a| a.trim().parse::<i64>().with_context(|| format!("bad tangle entry {a:?}")))
                .collect()
        })
        .collect()
}

impl FamilyArgs {
    pub fn to_spec(&self) -> anyhow::Result<FamilySpec> {
        Ok(match self.family {
            FamilyKind::Torus => FamilySpec::Torus { p: need(self.p, "p")?, q: need(self.q, "q")? },
            FamilyKind::Genus1 => FamilySpec::Genus1 { p: need(self.p, "p")?, q: need(self.q, "q")? },
            FamilyKind::Cable => FamilySpec::Cable { p: need(self.p, "p")?, q: need(self.q, "q")? },
            FamilyKind::Whitehead => FamilySpec::Whitehead { omega: need(self.omega, "omega")?, tau: self.tau.unwrap_or(0) },
            FamilyKind::Montesinos => FamilySpec::Montesinos {
                tangles: parse_tangles(self.tangles.as_deref().ok_or_else(|| anyhow!("--tangles is required"))?)?,
            },
            FamilyKind::Diagram => FamilySpec::Diagram {
                diagram: read_diagram(self.diagram.as_deref().ok_or_else(|| anyhow!("--diagram is required"))?)?,
            },
            FamilyKind::Composite => FamilySpec::Composite,
        })
    }
}

impl GroupArgs {
    pub fn presentation(&self) -> anyhow::Result<Presentation> {
        let knot = match (&self.presentation, self.family) {
            (Some(path), _) => read_presentation(path)?,
            (None, Some(FamilyKind::Torus)) => torus_presentation(need(self.p, "p")?, need(self.q, "q")?)?,
            (None, Some(FamilyKind::Genus1)) => lin_presentation(need(self.p, "p")?, need(self.q, "q")?)?,
            (None, Some(FamilyKind::Diagram)) => {
                wirtinger(&read_diagram(self.diagram.as_deref().ok_or_else(|| anyhow!("--diagram is required"))?)?)?.0
            }
            (None, Some(kind)) => return Err(anyhow!("no presentation is available for the {kind:?} family")),
            (None, None) => return Err(anyhow!("give --presentation or --family")),
        };
        Ok(match self.slope {
            Some(s) => dehn_fill(&knot, s)?,
            None => knot,
        })
    }
}

/// Constructor errors that mean "no certificate here" rather than bad input.
fn constructor_failure(e: ConstructorError) -> Failure {
    match e {
        ConstructorError::SlopeCondition(_)
        | ConstructorError::CaseMismatch { .. }
        | ConstructorError::Precondition(_)
        | ConstructorError::NotConstructible(_) => Failure::Rejected(e.to_string()),
        other => Failure::Input(other.into()),
    }
}

fn build(family: &BuildFamily) -> Result<TorsionCertificate, Failure> {
    let cert = match family {
        BuildFamily::Torus { p, q, slope: None } => torus_commutator_cert(*p, *q),
        BuildFamily::Torus { p, q, slope: Some(s) } => certificate_for(&FamilySpec::Torus { p: *p, q: *q }, *s),
        BuildFamily::Genus1 { p, q, slope, case } => {
            let case = match case {
                Some(c) => Some(Genus1Case::from_number(*c).ok_or_else(|| anyhow!("--case must be 1, 2 or 3"))?),
                None => None,
            };
            genus1_cert(*p, *q, *slope, case)
        }
        BuildFamily::Diagram { diagram, slope } => positive_diagram_cert(&read_diagram(diagram)?, *slope),
        BuildFamily::Disk { presentation, p_count, q_count, slope } => {
            let knot = read_presentation(presentation)?;
            with_disk_axiom(&knot, *p_count, *q_count, DiskConjugators::Fresh).and_then(|a| singular_disk_cert(&a, *slope))
        }
    };
    cert.map_err(constructor_failure)
}

fn factor_value(d: &BigInt) -> Value {
    match d.to_i64() {
        Some(v) => json!(v),
        None => json!(d.to_string()),
    }
}

fn h1_json(h: &SmithForm) -> Value {
    json!({
        "factors": h.invariants().iter().map(factor_value).collect::<Vec<_>>(),
        "free_rank": h.free_rank(),
    })
}

/// Realize's image under the coset action and small permutation quotients.
/// Any non-trivial image contradicts an accepted replay.
fn oracle_checks(p: &Presentation, realize: &Word, args: &VerifyArgs) -> (Value, usize, Vec<String>) {
    let mut conflicts = Vec::new();
    let table = todd_coxeter(p, &[], args.cap);
    let coset = match table.status() {
        CosetStatus::Complete => {
            let perm = permutation_eval(&table, realize).expect("complete table");
            if perm.iter().enumerate().any(|(i, &j)| i != j) {
                conflicts.push("realize acts non-trivially on the cosets".to_string());
            }
            json!({"status": "complete", "index": table.index()})
        }
        CosetStatus::Overflow { cap } => json!({"status": "overflow", "cap": cap}),
    };
    let mut checks = 0;
    if args.quotient_degree > 0 {
        let opts = QuotientSearch { seed: args.seed, ..QuotientSearch::new(args.quotient_degree) };
        for h in finite_quotient_search(p, &opts).homomorphisms {
            checks += 1;
            if !h.kills(realize) {
                conflicts.push(format!("realize survives in the quotient {:?}", h.images));
            }
        }
    }
    (coset, checks, conflicts)
}

fn verify(args: &VerifyArgs) -> Result<Outcome, Failure> {
    let json: CertificateJson = read_json(&args.certificate)?;
    let mut opts = ReplayOptions::default();
    if let Some(max) = args.max_length {
        opts.max_length = max;
    }
    let (kind, presentation, realize, report): (_, Presentation, Word, VerificationReport) = if json.evidence.is_some() {
        let cert = TorsionCertificate::from_json(&json).map_err(|e| Failure::Input(e.into()))?;
        ("torsion", cert.presentation().clone(), cert.realize(), cert.verify_with(opts))
    } else {
        let cert = MembershipCertificate::from_json(&json).map_err(|e| Failure::Input(e.into()))?;
        let realize = cert.product.realize().mul(&cert.target.inverse());
        ("membership", cert.presentation.clone(), realize, cert.verify_with(opts))
    };
    let mut value = serde_json::to_value(&report).expect("report serializes");
    let obj = value.as_object_mut().expect("report is an object");
    obj.insert("kind".into(), json!(kind));
    obj.insert("h1".into(), h1_json(&abelianization(&presentation)));
    let mut code = match report.verdict {
        Verdict::Accepted => EXIT_OK,
        Verdict::Rejected => EXIT_REJECTED,
        Verdict::Overflow => EXIT_OVERFLOW,
    };
    if report.accepted() {
        let (coset, checks, conflicts) = oracle_checks(&presentation, &realize, args);
        obj.insert("coset".into(), coset);
        obj.insert("quotient_checks".into(), json!(checks));
        if !conflicts.is_empty() {
            code = EXIT_REJECTED;
            obj.insert("oracle_conflicts".into(), json!(conflicts));
        }
    }
    let message = (code != EXIT_OK).then(|| match report.failed_step {
        Some(step) => format!("certificate {:?} at step {step}", report.verdict),
        None => format!("certificate {:?}", report.verdict),
    });
    Ok(Outcome { code, report: Some(value), message })
}

fn enumerate(group: &GroupArgs, cap: usize) -> Result<Outcome, Failure> {
    let p = group.presentation()?;
    let table = todd_coxeter(&p, &[], cap);
    Ok(match table.status() {
        CosetStatus::Complete => Outcome::ok(json!({"status": "complete", "index": table.index()})),
        CosetStatus::Overflow { cap } => Outcome {
            code: EXIT_OVERFLOW,
            report: Some(json!({"status": "overflow", "cap": cap})),
            message: Some(format!("coset enumeration exceeded {cap} cosets")),
        },
    })
}

fn batch_entry(index: usize, entry: &BatchEntry) -> (i32, Value) {
    let mut row = json!({"index": index, "family": entry.family_label(), "slope": entry.slope});
    let cert = match certificate_for(&entry.family, entry.slope) {
        Ok(c) => c,
        Err(e) => {
            row["status"] = json!("not_constructible");
            row["error"] = json!(e.to_string());
            return (EXIT_REJECTED, row);
        }
    };
    // Verify what a reader of the serialized certificate would see.
    let report = TorsionCertificate::from_json(&cert.to_json()).map(|c| c.verify());
    let (code, status) = match &report {
        Ok(r) if r.accepted() => (EXIT_OK, "accepted"),
        Ok(r) if r.verdict == Verdict::Overflow => (EXIT_OVERFLOW, "overflow"),
        _ => (EXIT_REJECTED, "rejected"),
    };
    row["status"] = json!(status);
    match report {
        Ok(r) => {
            row["k"] = json!(r.k);
            row["steps"] = json!(r.steps);
            if !r.reasons.is_empty() {
                row["reasons"] = json!(r.reasons);
            }
        }
        Err(e) => row["error"] = json!(e.to_string()),
    }
    (code, row)
}

impl BatchEntry {
    fn family_label(&self) -> String {
        match &self.family {
            FamilySpec::Torus { p, q } => format!("torus({p},{q})"),
            FamilySpec::Genus1 { p, q } => format!("genus1({p},{q})"),
            FamilySpec::Diagram { diagram } => format!("diagram({} crossings)", diagram.crossings.len()),
            FamilySpec::AxiomaticDisk { p_count, q_count, .. } => format!("disk({p_count},{q_count})"),
            FamilySpec::Whitehead { omega, tau } => format!("whitehead({omega},{tau})"),
            FamilySpec::Montesinos { tangles } => format!("montesinos({tangles:?})"),
            FamilySpec::Cable { p, q } => format!("cable({p},{q})"),
            FamilySpec::Composite => "composite".into(),
        }
    }
}

fn batch(manifest: &Path, jobs: usize) -> Result<Outcome, Failure> {
    use rayon::prelude::*;
    let entries: Vec<BatchEntry> = read_json(manifest)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| Failure::Input(e.into()))?;
    let rows: Vec<(i32, Value)> =
        pool.install(|| entries.par_iter().enumerate().map(|(i, e)| batch_entry(i, e)).collect());
    let code = if rows.iter().any(|(c, _)| *c == EXIT_REJECTED) {
        EXIT_REJECTED
    } else if rows.iter().any(|(c, _)| *c == EXIT_OVERFLOW) {
        EXIT_OVERFLOW
    } else {
        EXIT_OK
    };
    let accepted = rows.iter().filter(|(c, _)| *c == EXIT_OK).count();
    let message = (code != EXIT_OK).then(|| format!("{accepted} of {} entries accepted", rows.len()));
    let rows: Vec<Value> = rows.into_iter().map(|(_, r)| r).collect();
    Ok(Outcome { code, report: Some(json!({"entries": rows, "accepted": accepted})), message })
}

fn dispatch(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Build { family } => {
            let cert = build(family)?;
            Ok(Outcome::ok(serde_json::to_value(cert.to_json()).expect("certificate serializes")))
        }
        Command::Verify(args) => verify(args),
        Command::Classify { family, slope } => {
            let report = classify(&family.to_spec()?, *slope);
            Ok(Outcome::ok(serde_json::to_value(report).expect("report serializes")))
        }
        Command::Abelianize(group) => Ok(Outcome::ok(h1_json(&abelianization(&group.presentation()?)))),
        Command::Enumerate { group, cap } => enumerate(group, *cap),
        Command::Alexander { p, q } => {
            let r = alexander_genus1(*p, *q).map_err(|e| Failure::Input(e.into()))?;
            Ok(Outcome::ok(serde_json::to_value(r).expect("report serializes")))
        }
        Command::Batch { manifest, jobs } => batch(manifest, *jobs),
    }
}

/// Runs a command. Exit codes: 0 success, 1 rejected, 2 input error, 3 overflow.
pub fn run(cli: &Cli) -> Outcome {
    match dispatch(&cli.command) {
        Ok(o) => o,
        Err(Failure::Input(e)) => Outcome { code: EXIT_INPUT, report: None, message: Some(format!("{e:#}")) },
        Err(Failure::Rejected(why)) => Outcome {
            code: EXIT_REJECTED,
            report: Some(json!({"status": "rejected", "reason": why})),
            message: Some(why),
        },
    }
}

/// Pretty JSON with a trailing newline.
pub fn render(report: &Value) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("JSON value serializes");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slopes() {
        let s = parse_slope("7/2").unwrap();
        assert_eq!((s.m(), s.n()), (7, 2));
        assert_eq!(parse_slope("5").unwrap(), Slope::integral(5));
        let s = parse_slope("-3/2").unwrap();
        assert_eq!((s.m(), s.n()), (-3, 2));
        assert!(matches!(parse_slope("4/2"), Err(SlopeError::NotCoprime { .. })));
        for inf in ["inf", "∞", "1/0"] {
            let e = parse_slope(inf).unwrap_err();
            assert!(e.to_string().contains("trivial"), "{inf}: {e}");
        }
    }

    #[test]
    fn tangles() {
        assert_eq!(parse_tangles("2,-2,2;2,1").unwrap(), vec![vec![2, -2, 2], vec![2, 1]]);
        assert!(parse_tangles("2,x").is_err());
    }

    #[test]
    fn manifest_entries() {
        let e: BatchEntry = serde_json::from_str(r#"{"family":"torus","p":2,"q":3,"slope":"7/2"}"#).unwrap();
        assert_eq!(e.family, FamilySpec::Torus { p: 2, q: 3 });
        assert_eq!(e.slope, parse_slope("7/2").unwrap());
        assert!(serde_json::from_str::<BatchEntry>(r#"{"family":"torus","p":2,"q":3,"slope":"2/4"}"#).is_err());
    }
}
