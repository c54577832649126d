//! The `ggp` command-line driver.

use crate::dl::{TorusCharacter, TorusShape};
use crate::error::{Error, Result};
use crate::fields::{FieldTower, MAX_TABLE_SIZE, POLYNOMIAL_RULE};
use crate::groups::{DeltaChoice, DEFAULT_GROUP_CAP};
use crate::mult::RankConvention;
use crate::oracle::{compare, report, resolve_rank_convention, sweep, Convention, OracleContext, CSV_HEADER};
use crate::verify::{run_suite, Suite, VerifyOptions};
use crate::weil::MAX_WEIL_DIM;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DISAGREEMENT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "ggp",
    version,
    about = "Multiplicities of Deligne-Lusztig characters in the Weil representation of U_n"
)]
pub struct Cli {
    /// Write the run manifest here instead of standard error.
    #[arg(long, global = true)]
    pub manifest_file: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sweep every character of a torus and compare closed forms with the oracle.
    Table(TableArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Evaluate a single character.
    Mult(MultArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ChoiceArgs {
    /// Residue `c` in `ψ(x) = exp(2πi·c·Tr(x)/p)`.
    #[arg(long, default_value_t = 1)]
    pub psi: u64,
    #[arg(long, value_enum, default_value_t = DeltaArg::Standard)]
    pub delta: DeltaArg,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n: u32,
    /// Torus shape as comma-separated `λ_1,λ_2,…` with `Σ j·λ_j = n`.
    #[arg(long)]
    pub lambda: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// One row per Weyl orbit of characters.
    #[arg(long)]
    pub dedup_orbits: bool,
    #[command(flatten)]
    pub choice: ChoiceArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, default_value_t = 3)]
    pub q: u64,
    #[arg(long, default_value_t = 5)]
    pub nmax: u32,
    #[arg(long, default_value_t = VerifyOptions::default().seed)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct MultArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub lambda: String,
    /// Exponents of the character, one per torus coordinate.
    #[arg(long)]
    pub chi: String,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    pub oracle: Switch,
    #[command(flatten)]
    pub choice: ChoiceArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DeltaArg {
    Standard,
    Alternate,
}

impl From<DeltaArg> for DeltaChoice {
    fn from(d: DeltaArg) -> Self {
        match d {
            DeltaArg::Standard => DeltaChoice::Standard,
            DeltaArg::Alternate => DeltaChoice::Alternate,
        }
    }
}

#[derive(Serialize, Debug)]
pub struct Caps {
    pub group_elements: u64,
    pub weil_dimension: u64,
    pub field_table: u64,
}

/// Everything needed to reproduce a run.
#[derive(Serialize, Debug)]
pub struct RunManifest {
    pub tool_version: &'static str,
    pub command: String,
    pub p: Option<u64>,
    pub e: Option<u32>,
    pub max_degree: Option<u32>,
    pub polynomial_rule: &'static str,
    pub defining_polynomial: Option<Vec<u64>>,
    pub psi: Option<u64>,
    pub delta: Option<DeltaChoice>,
    pub pair_sign: i8,
    pub caps: Caps,
    pub suite: Option<Suite>,
    pub timestamp: u64,
}

impl RunManifest {
    fn new(command: &str) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            p: None,
            e: None,
            max_degree: None,
            polynomial_rule: POLYNOMIAL_RULE,
            defining_polynomial: None,
            psi: None,
            delta: None,
            pair_sign: crate::mult::DEFAULT_PAIR_SIGN,
            caps: Caps {
                group_elements: DEFAULT_GROUP_CAP,
                weil_dimension: MAX_WEIL_DIM,
                field_table: MAX_TABLE_SIZE,
            },
            suite: None,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }

    fn with_tower(mut self, tower: &FieldTower) -> Self {
        self.p = Some(tower.p());
        self.e = Some(tower.e());
        self.max_degree = Some(tower.max_degree());
        self.defining_polynomial = Some(tower.defining_polynomial());
        self
    }
}

/// Parses and runs the command line, returning the exit status.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match run(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Internal(_) => EXIT_DISAGREEMENT,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn emit_manifest(cli: &Cli, manifest: &RunManifest, err: &mut dyn Write) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    match &cli.manifest_file {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Error::InvalidTower(format!("cannot write manifest {}: {e}", path.display()))),
        None => {
            let _ = writeln!(err, "{text}");
            Ok(())
        }
    }
}

fn parse_list(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidCharacter(format!("cannot parse {text:?}")))
        })
        .collect()
}

fn convention_for(ctx: &OracleContext, choice: &ChoiceArgs) -> Result<Convention> {
    if choice.psi.is_multiple_of(ctx.q()) {
        return Err(Error::InvalidCharacter("ψ residue must be nonzero mod p".into()));
    }
    Ok(Convention {
        psi: choice.psi % ctx.q(),
        delta: choice.delta.into(),
    })
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Table(a) => cmd_table(cli, a, out, err),
        Command::Verify(a) => cmd_verify(cli, a, out, err),
        Command::Mult(a) => cmd_mult(cli, a, out, err),
    }
}

pub fn cmd_table(cli: &Cli, a: &TableArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let shape = TorusShape::parse(a.n, &a.lambda)?;
    let ctx = OracleContext::new(a.q, a.n)?;
    let conv = convention_for(&ctx, &a.choice)?;
    let mut manifest = RunManifest::new("table").with_tower(ctx.tower());
    manifest.psi = Some(conv.psi);
    manifest.delta = Some(conv.delta);
    emit_manifest(cli, &manifest, err)?;
    let rank = resolve_rank_convention(&ctx, conv)?;
    let reports = sweep(
        &ctx,
        &shape,
        conv,
        rank.unwrap_or(RankConvention::KPrime),
        a.dedup_orbits,
    )?;
    if a.format == Format::Csv {
        let _ = writeln!(out, "{CSV_HEADER}");
    }
    for r in &reports {
        let line = match a.format {
            Format::Json => r.to_json(),
            Format::Csv => r.to_csv(),
        };
        let _ = writeln!(out, "{line}");
    }
    let summary = compare(&reports);
    let _ = writeln!(
        err,
        "{}",
        serde_json::to_string(&summary).expect("summary serializes")
    );
    Ok(if summary.disagreements() == 0 {
        EXIT_OK
    } else {
        EXIT_DISAGREEMENT
    })
}

pub fn cmd_verify(cli: &Cli, a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut manifest = RunManifest::new("verify");
    manifest.suite = Some(a.suite);
    emit_manifest(cli, &manifest, err)?;
    let opts = VerifyOptions {
        q: a.q,
        nmax: a.nmax,
        seed: a.seed,
    };
    let results = run_suite(a.suite, &opts)?;
    for r in &results {
        let _ = writeln!(out, "{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let _ = writeln!(
        out,
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    Ok(if failed == 0 { EXIT_OK } else { EXIT_DISAGREEMENT })
}

pub fn cmd_mult(cli: &Cli, a: &MultArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let shape = TorusShape::parse(a.n, &a.lambda)?;
    let chi = TorusCharacter::new(a.q, &shape, &parse_list(&a.chi)?)?;
    let ctx = match a.oracle {
        Switch::On => Some(OracleContext::new(a.q, a.n)?),
        Switch::Off => None,
    };
    let mut manifest = RunManifest::new("mult");
    let (conv, rank) = match &ctx {
        Some(c) => {
            let conv = convention_for(c, &a.choice)?;
            manifest = manifest.with_tower(c.tower());
            manifest.psi = Some(conv.psi);
            manifest.delta = Some(conv.delta);
            (Some(conv), resolve_rank_convention(c, conv)?)
        }
        None => (None, None),
    };
    emit_manifest(cli, &manifest, err)?;
    let r = report(
        a.q,
        &chi,
        ctx.as_ref(),
        conv,
        rank.unwrap_or(RankConvention::KPrime),
    )?;
    let show = |v: Option<i64>| v.map_or("n/a".to_string(), |x| x.to_string());
    let _ = writeln!(
        out,
        "q={} n={} lambda=({}) chi={:?} regular={} closed_form={} thm11={} oracle={} agree={}",
        r.q,
        r.n,
        shape.label(),
        r.chi,
        r.regular,
        show(r.closed_form),
        show(r.thm11),
        show(r.oracle),
        r.agree.map_or("n/a".to_string(), |b| b.to_string()),
    );
    if !r.regular && !chi.is_trivial() {
        let _ = writeln!(out, "non-regular character: oracle value only");
    }
    let _ = writeln!(out, "{}", r.to_json());
    Ok(if r.agree == Some(false) {
        EXIT_DISAGREEMENT
    } else {
        EXIT_OK
    })
}
