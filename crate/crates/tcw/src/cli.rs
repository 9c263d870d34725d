//! The `tcw` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use tcw_core::analysis::{
    arity_impossibility, family_mutual_generation, find_basis, no_basis_evidence, FamilyKind,
};
use tcw_core::sexpr::parse;
use tcw_core::synthesis::Refutation;
use tcw_core::{
    enumerate_s_minus_1, ExcludedLayerFunction, GeneratorSet, Semantics, SymmetricRFunction, Synthesizer, Verdict,
    Witness,
};

use crate::config::{Config, ReportFormat};
use crate::report::{Evaluation, Report, VerdictKind, VerdictRecord};
use crate::suite::{self, Suite};
use crate::textfmt::{format_function, parse_families, parse_functions, parse_tuple};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_REFUTED: u8 = 2;
pub const EXIT_UNKNOWN: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "tcw", version, about = "Closed classes of three-valued functions generated by excluded-layer functions")]
pub struct Cli {
    /// Output format; defaults to the config's report_format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<ReportFormat>,
    /// Seed for randomized suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Cap overrides, e.g. `bfs_node_budget=500000,table_arity_cap=6`.
    #[arg(long, global = true)]
    pub caps: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Via {
    /// R from S from excluded-layer functions.
    Sminus1,
    /// R from a single symmetric function.
    S,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print every excluded-layer function of arity n.
    Enumerate { n: usize },
    /// Look for a witness that each target lies in the closure of the generators.
    Synth {
        target_file: PathBuf,
        generators_file: Option<PathBuf>,
        #[arg(long, value_enum)]
        via: Option<Via>,
    },
    /// Reduce a finite set of excluded-layer functions to a basis.
    Basis { set_file: PathBuf },
    /// Mutual generation inside one family, or between two.
    Family {
        family_file: PathBuf,
        #[arg(long, default_value_t = 5)]
        prefix: usize,
    },
    /// Run the built-in checks.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
    /// Evaluate a formula on one tuple.
    Eval {
        formula_file: PathBuf,
        tuple: String,
        /// Extra generators; self-describing names such as `s4_1_3` or `i2` need none.
        #[arg(long)]
        generators: Option<PathBuf>,
    },
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok((report, code)) => {
            let format = cli.format.unwrap_or(report_format(&cli));
            let text = match format {
                ReportFormat::Json => report.to_json() + "\n",
                ReportFormat::Text => report.to_text(),
            };
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn report_format(cli: &Cli) -> ReportFormat {
    load_config(cli).map(|c| c.report_format).unwrap_or_default()
}

fn load_config(cli: &Cli) -> Result<Config> {
    let mut config = Config::from_env()?;
    if let Some(caps) = &cli.caps {
        config.apply_caps(caps).context("in --caps")?;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_functions(path: &Path, config: &Config) -> Result<Vec<Semantics>> {
    parse_functions(&read(path)?, config.table_arity_cap).with_context(|| format!("in {}", path.display()))
}

fn excluded_only(fs: &[Semantics], path: &Path) -> Result<Vec<ExcludedLayerFunction>> {
    fs.iter()
        .map(|f| match f {
            Semantics::Excluded(f) => Ok(*f),
            other => bail!("{}: `{}` is not an sminus1 line", path.display(), format_function(other)),
        })
        .collect()
}

fn execute(cli: &Cli) -> Result<(Report, u8)> {
    let config = load_config(cli)?;
    match &cli.command {
        Command::Enumerate { n } => enumerate(*n),
        Command::Synth { target_file, generators_file, via } => {
            synth(&config, target_file, generators_file.as_deref(), *via)
        }
        Command::Basis { set_file } => basis(&config, set_file),
        Command::Family { family_file, prefix } => family(&config, family_file, *prefix),
        Command::Verify { suite } => verify(&config, *suite),
        Command::Eval { formula_file, tuple, generators } => eval(&config, formula_file, tuple, generators.as_deref()),
    }
}

fn enumerate(n: usize) -> Result<(Report, u8)> {
    if n == 0 {
        bail!("arity must be at least 1");
    }
    let mut report = Report::new("enumerate");
    report.functions = enumerate_s_minus_1(n)?.into_iter().map(|f| format_function(&Semantics::Excluded(f))).collect();
    Ok((report.finish(), EXIT_OK))
}

const OUTSIDE_R: &str = "target is not in R, and every formula over generators in R realizes a function in R";

fn synth(config: &Config, target_file: &Path, generators_file: Option<&Path>, via: Option<Via>) -> Result<(Report, u8)> {
    let targets = read_functions(target_file, config)?;
    if targets.is_empty() {
        bail!("{} lists no target", target_file.display());
    }
    let generators = match generators_file {
        Some(p) => Some(read_functions(p, config)?),
        None if via.is_none() => bail!("a generators file is required unless --via is given"),
        None => None,
    };
    let synth = Synthesizer::new(config.synth());
    let mut report = Report::new("synth");
    let mut worst = VerdictKind::Proven;
    for target in &targets {
        let record = match via {
            None => synth_direct(&synth, config, target, generators.as_deref().unwrap_or_default())?,
            Some(via) => synth_via(&synth, config, target, generators.as_deref(), via)?,
        };
        if let Some(w) = &record.witness {
            report.bounds.extend(w.notes.iter().map(|n| format!("{}: {n}", record.target)));
        }
        worst = worst.max(record.verdict);
        report.verdicts.push(record);
    }
    Ok((report.finish(), worst.exit_code()))
}

fn outside_r(target: &Semantics, generators: &[Semantics], config: &Config) -> Result<bool> {
    let in_r = target.to_truth_table(config.table_arity_cap.max(config.witness_table_cap)).map(|t| t.in_r());
    Ok(matches!(in_r, Ok(false)) && generators.iter().all(Semantics::in_r))
}

fn synth_direct(synth: &Synthesizer, config: &Config, target: &Semantics, generators: &[Semantics]) -> Result<VerdictRecord> {
    let name = format_function(target);
    if outside_r(target, generators, config)? {
        return Ok(VerdictRecord { target: name, generator: None, verdict: VerdictKind::Refuted, reason: Some(OUTSIDE_R.into()), witness: None });
    }
    let Semantics::Excluded(f) = target else {
        bail!("target `{name}` is not an excluded-layer function; use --via sminus1 or --via s");
    };
    let mut gens = generators
        .iter()
        .map(|g| match g {
            Semantics::Excluded(g) => Ok(*g),
            other => bail!("generator `{}` is not an excluded-layer function", format_function(other)),
        })
        .collect::<Result<Vec<_>>>()?;
    if gens.is_empty() {
        bail!("the generators file lists no generator");
    }
    gens.sort();
    gens.dedup();
    let mut reasons = Vec::new();
    for g in &gens {
        let gname = format_function(&Semantics::Excluded(*g));
        match synth.from_generator(*f, *g) {
            v @ Verdict::Proven(_) => return Ok(VerdictRecord::from_verdict(name, Some(gname), &v)),
            Verdict::Refuted(r) => reasons.push(format!("{gname}: {r}")),
            Verdict::Unknown(why) => reasons.push(format!("{gname}: {why}")),
        }
    }
    if arity_impossibility(*f, &gens) {
        let r = Refutation::ArityBound { target_arity: f.arity(), generator_arities: gens.iter().map(|g| g.arity()).collect() };
        return Ok(VerdictRecord::from_verdict(name, None, &Verdict::Refuted(r)));
    }
    Ok(VerdictRecord::from_verdict(name, None, &Verdict::Unknown(reasons.join("; "))))
}

fn synth_via(
    synth: &Synthesizer,
    config: &Config,
    target: &Semantics,
    generators: Option<&[Semantics]>,
    via: Via,
) -> Result<VerdictRecord> {
    let name = format_function(target);
    if outside_r(target, generators.unwrap_or_default(), config)? {
        return Ok(VerdictRecord { target: name, generator: None, verdict: VerdictKind::Refuted, reason: Some(OUTSIDE_R.into()), witness: None });
    }
    let attempt: Result<Witness, _> = match (via, target) {
        (Via::Sminus1, Semantics::Excluded(f)) => {
            let n = f.arity();
            SymmetricRFunction::new(n, (0..=n).filter(|&e| e != f.e()))
                .map_err(Into::into)
                .and_then(|s| synth.s_from_sminus1(&s))
        }
        (Via::Sminus1, Semantics::Symmetric(s)) => synth.s_from_sminus1(s),
        (Via::Sminus1, other) => other.to_truth_table(config.witness_table_cap).map_err(Into::into).and_then(|t| synth.r_from_sminus1(&t)),
        (Via::S, other) => other.to_truth_table(config.witness_table_cap).map_err(Into::into).and_then(|t| synth.r_from_s(&t)),
    };
    let w = match attempt {
        Ok(w) => w,
        Err(e) => return Ok(VerdictRecord::from_verdict(name, None, &Verdict::Unknown(e.to_string()))),
    };
    if let Some(allowed) = generators {
        let missing: Vec<String> = w
            .generators
            .iter()
            .filter(|g| !allowed.contains(g.semantics()))
            .map(|g| format_function(g.semantics()))
            .collect();
        if !missing.is_empty() {
            let why = format!("the construction needs generators not in the file: {}", missing.join(", "));
            return Ok(VerdictRecord::from_verdict(name, None, &Verdict::Unknown(why)));
        }
    }
    Ok(VerdictRecord::from_verdict(name, None, &Verdict::Proven(w)))
}

fn basis(config: &Config, set_file: &Path) -> Result<(Report, u8)> {
    let set = excluded_only(&read_functions(set_file, config)?, set_file)?;
    if set.is_empty() {
        bail!("{} lists no function", set_file.display());
    }
    let (basis, gr) = find_basis(&Synthesizer::new(config.synth()), &set)?;
    let mut report = Report::new("basis");
    report.basis = Some(basis.iter().map(|f| format_function(&Semantics::Excluded(*f))).collect());
    report.absorb(&gr);
    Ok((report.finish(), EXIT_OK))
}

fn family(config: &Config, family_file: &Path, prefix: usize) -> Result<(Report, u8)> {
    let families = parse_families(&read(family_file)?).with_context(|| format!("in {}", family_file.display()))?;
    let synth = Synthesizer::new(config.synth());
    // A finite list is used whole when it is shorter than the prefix.
    let clamp = |f: &tcw_core::analysis::FamilySpec| match &f.kind {
        FamilyKind::Unbounded(layers) => prefix.min(layers.len()),
        _ => prefix,
    };
    let gr = match families.as_slice() {
        [one] => no_basis_evidence(&synth, one, clamp(one))?,
        [a, b] => family_mutual_generation(&synth, a, b, clamp(a).min(clamp(b)))?,
        _ => bail!("{} must contain one or two families, found {}", family_file.display(), families.len()),
    };
    let mut report = Report::new("family");
    report.absorb(&gr);
    let report = report.finish();
    let code = if report.flags.is_empty() && report.summary.unknown == 0 && report.summary.refuted == 0 {
        EXIT_OK
    } else {
        EXIT_UNKNOWN
    };
    Ok((report, code))
}

fn verify(config: &Config, which: Suite) -> Result<(Report, u8)> {
    let mut report = Report::new("verify");
    report.checks = suite::run(which, config);
    report.truncated = report.checks.iter().any(|c| c.detail.starts_with("truncated"));
    let report = report.finish();
    let code = if report.summary.checks_failed == 0 { EXIT_OK } else { EXIT_REFUTED };
    Ok((report, code))
}

fn eval(config: &Config, formula_file: &Path, tuple: &str, generators: Option<&Path>) -> Result<(Report, u8)> {
    let mut env = GeneratorSet::auto_resolving();
    if let Some(p) = generators {
        for g in read_functions(p, config)? {
            env.add_auto(g);
        }
    }
    let text = read(formula_file)?;
    let text: String = text.lines().map(|l| l.split('#').next().unwrap_or("")).collect::<Vec<_>>().join("\n");
    let phi = parse(text.trim(), &env).with_context(|| format!("in {}", formula_file.display()))?;
    let t = parse_tuple(tuple)?;
    let value = phi.eval(&env, &t)?;
    let mut report = Report::new("eval");
    report.evaluation = Some(Evaluation { formula: phi.to_string(), tuple: t, value });
    Ok((report.finish(), EXIT_OK))
}
