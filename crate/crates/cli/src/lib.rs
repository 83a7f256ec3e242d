//! Command-line front end for `detsum`.

pub mod error;
pub mod instance;
pub mod report;

use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use detsum::engine::verify_identity;
use detsum::onn::transversal_dets;
use detsum::parallel::DEFAULT_TERM_BUDGET;
use detsum::perms::factorial;
use detsum::svrtan::{as_engine_instance, edges, SearchOptions, SpinorBaseForm};
use detsum::{
    alon_tarsi_count, choice_det, colorful_form, format_rational, invariant_at_identity, nonzero_term_census,
    random, rota_search, svrtan_search, verify_onn, verify_svrtan, ColorfulInstance, ExecConfig, IdentityReport,
    MultilinearForm, Rational, SearchOutcome, Shape, SpinorInstance,
};
use num_traits::Zero;
use serde_json::{json, Value};

pub use error::CliError;
pub use instance::{parse_instance, Instance};
pub use report::Report;

pub const DEFAULT_NODE_CAP: u64 = detsum::onn::DEFAULT_NODE_CAP;

#[derive(Debug, Clone, Parser)]
#[command(name = "detsum", version, about = "Exact alternating determinant sums")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, env = "DETSUM_THREADS", value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    /// Maximum number of terms in any single sum.
    #[arg(long, global = true, default_value_t = DEFAULT_TERM_BUDGET)]
    pub term_budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormKind {
    Colorful,
    Svrtan,
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InstanceKind {
    MatrixTuple,
    Colorful,
    Spinor,
}

/// Where an instance comes from: a file, or a seeded random draw.
#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Instance file, or `-` for standard input.
    #[arg(long, conflicts_with = "n")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check the general identity for a random dense form on a matrix tuple.
    VerifyGeneral {
        /// Instance file, or `-` for standard input.
        #[arg(long, conflicts_with = "shape")]
        input: Option<PathBuf>,
        /// Comma-separated block sizes for a random tuple.
        #[arg(long, default_value = "2,2")]
        shape: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The invariant of a form, its alternating sum at identity matrices.
    Invariant {
        #[arg(long, value_enum)]
        form: FormKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "2,2")]
        shape: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Signed count of Latin squares of order n.
    AlonTarsi {
        #[arg(long)]
        n: usize,
    },
    /// Check the colorful determinant identity.
    VerifyOnn(Source),
    /// Find column orderings whose transversals are all bases.
    RotaSearch {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: u64,
    },
    /// Check the n! formula for spinor bases.
    VerifySvrtan(Source),
    /// Find a choice of spinors with nonzero determinant.
    SvrtanSearch {
        #[command(flatten)]
        source: Source,
        /// Update only the two polynomials changed by each step.
        #[arg(long)]
        incremental: bool,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: u64,
    },
    /// Count nonzero terms for the standard spinor bases.
    Census {
        #[arg(long)]
        n: usize,
    },
    /// Print a seeded random instance as JSON.
    Generate {
        #[arg(long, value_enum)]
        kind: InstanceKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "2,2")]
        shape: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyGeneral { .. } => "verify-general",
            Command::Invariant { .. } => "invariant",
            Command::AlonTarsi { .. } => "alon-tarsi",
            Command::VerifyOnn(_) => "verify-onn",
            Command::RotaSearch { .. } => "rota-search",
            Command::VerifySvrtan(_) => "verify-svrtan",
            Command::SvrtanSearch { .. } => "svrtan-search",
            Command::Census { .. } => "census",
            Command::Generate { .. } => "generate",
        }
    }
}

/// What a successful run prints.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Report(Box<Report>),
    Instance(Value),
}

impl Output {
    pub fn exit_code(&self) -> i32 {
        match self {
            Output::Report(r) => r.exit_code(),
            Output::Instance(_) => 0,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Output::Report(r), Format::Text) => r.to_text(),
            (Output::Report(r), Format::Json) => r.to_json() + "\n",
            (Output::Instance(v), _) => serde_json::to_string_pretty(v).expect("instance serializes") + "\n",
        }
    }
}

pub fn parse_shape(text: &str) -> Result<Shape, CliError> {
    let sizes = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Input(format!("shape {text:?}: {e}")))?;
    Ok(Shape::new(sizes)?)
}

pub fn read_input(path: &PathBuf) -> Result<Instance, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
    };
    parse_instance(&text)
}

fn need_n(n: Option<usize>) -> Result<usize, CliError> {
    n.ok_or_else(|| CliError::Input("either --n or --input is required".into()))
}

fn colorful_source(src: &Source) -> Result<ColorfulInstance, CliError> {
    match &src.input {
        Some(path) => match read_input(path)? {
            Instance::Colorful(c) => Ok(c),
            other => Err(CliError::Input(format!("expected a colorful instance, got {}", other.kind()))),
        },
        None => Ok(random::colorful_instance(need_n(src.n)?, src.seed)?),
    }
}

fn spinor_source(src: &Source) -> Result<SpinorInstance, CliError> {
    match &src.input {
        Some(path) => match read_input(path)? {
            Instance::Spinor(s) => Ok(s),
            other => Err(CliError::Input(format!("expected a spinor instance, got {}", other.kind()))),
        },
        None => Ok(random::spinor_instance(need_n(src.n)?, src.seed)?),
    }
}

fn rat(r: &Rational) -> Option<String> {
    Some(format_rational(r))
}

fn identity_report(command: &str, inputs: &Value, id: &IdentityReport) -> Report {
    let mut report = Report::new(command, inputs);
    report.lhs = rat(&id.lhs);
    report.rhs = rat(&id.rhs);
    report.invariant = rat(&id.invariant);
    report.det_product = rat(&id.det_product);
    report.verdict = report.lhs == report.rhs;
    report.term_count = u64::try_from(id.term_count).ok();
    report
}

fn form_for(inst: &Instance, seed: u64) -> Result<(Box<dyn MultilinearForm>, detsum::MatrixTuple, Value), CliError> {
    Ok(match inst {
        Instance::MatrixTuple(t) => {
            let form = random::dense_form(&mut random::rng(seed), t.shape())?;
            (Box::new(form), t.clone(), json!({"kind": "dense", "seed": seed}))
        }
        Instance::Colorful(c) => (Box::new(colorful_form(c.order())?), c.tuple().clone(), json!({"kind": "colorful"})),
        Instance::Spinor(s) => {
            let (form, tuple) = as_engine_instance(s)?;
            (Box::new(form), tuple, json!({"kind": "svrtan"}))
        }
    })
}

fn verify_general(input: &Option<PathBuf>, shape: &str, seed: u64, cfg: &ExecConfig) -> Result<Report, CliError> {
    let (form, tuple, form_desc, inst) = match input {
        Some(path) => {
            let inst = read_input(path)?;
            let (form, tuple, desc) = form_for(&inst, seed)?;
            (form, tuple, desc, inst.to_json())
        }
        None => {
            let shape = parse_shape(shape)?;
            let mut rng = random::rng(seed);
            let form = random::dense_form(&mut rng, &shape)?;
            let tuple = random::matrix_tuple(&mut rng, &shape);
            let inst = Instance::MatrixTuple(tuple.clone()).to_json();
            (Box::new(form) as Box<dyn MultilinearForm>, tuple, json!({"kind": "dense", "seed": seed}), inst)
        }
    };
    let inputs = json!({"command": "verify-general", "form": form_desc, "instance": inst});
    let id = verify_identity(form.as_ref(), &tuple, cfg)?;
    let mut report = identity_report("verify-general", &inputs, &id);
    report.notes.push(form.description());
    Ok(report)
}

fn invariant(form: FormKind, n: Option<usize>, shape: &str, seed: u64, cfg: &ExecConfig) -> Result<Report, CliError> {
    let (form, inputs): (Box<dyn MultilinearForm>, Value) = match form {
        FormKind::Colorful => {
            let n = need_n(n)?;
            (Box::new(colorful_form(n)?), json!({"form": "colorful", "n": n}))
        }
        FormKind::Svrtan => {
            let n = need_n(n)?;
            (Box::new(SpinorBaseForm::new(n)?), json!({"form": "svrtan", "n": n}))
        }
        FormKind::Dense => {
            let shape = parse_shape(shape)?;
            let form = random::dense_form(&mut random::rng(seed), &shape)?;
            (Box::new(form), json!({"form": "dense", "shape": shape.sizes(), "seed": seed}))
        }
    };
    let inputs = json!({"command": "invariant", "inputs": inputs});
    let value = invariant_at_identity(form.as_ref(), cfg)?;
    let mut report = Report::new("invariant", &inputs);
    report.invariant = rat(&value);
    report.term_count = form.shape().group_order().and_then(|t| u64::try_from(t).ok());
    report.verdict = true;
    report.notes.push(form.description());
    Ok(report)
}

fn alon_tarsi(n: usize, cfg: &ExecConfig) -> Result<Report, CliError> {
    let inputs = json!({"command": "alon-tarsi", "n": n});
    let l = alon_tarsi_count(n, cfg)?;
    let l = Rational::from_integer(l.into());
    let mut report = Report::new("alon-tarsi", &inputs);
    report.invariant = rat(&l);
    report.lhs = rat(&l);
    let form = colorful_form(n)?;
    let terms = form.shape().group_order();
    if cfg.check_budget(terms).is_ok() {
        let engine = invariant_at_identity(&form, cfg)?;
        report.rhs = rat(&engine);
        report.term_count = terms.and_then(|t| u64::try_from(t).ok());
        report.verdict = engine == l;
    } else {
        report.notes.push(format!(
            "cross-check against the colorful form skipped: {} terms exceed the budget of {}",
            terms.map_or_else(|| "too many".to_string(), |t| t.to_string()),
            cfg.term_budget
        ));
        report.verdict = true;
    }
    Ok(report)
}

fn verify_onn_cmd(src: &Source, cfg: &ExecConfig) -> Result<Report, CliError> {
    let inst = colorful_source(src)?;
    let inputs = json!({"command": "verify-onn", "instance": Instance::Colorful(inst.clone()).to_json()});
    Ok(identity_report("verify-onn", &inputs, &verify_onn(&inst, cfg)?))
}

fn rota_cmd(src: &Source, node_cap: u64, cfg: &ExecConfig) -> Result<Report, CliError> {
    let inst = colorful_source(src)?;
    let n = inst.order();
    let inputs = json!({
        "command": "rota-search",
        "instance": Instance::Colorful(inst.clone()).to_json(),
        "node_cap": node_cap,
    });
    let mut report = Report::new("rota-search", &inputs);
    if !inst.tuple().is_nonsingular()? {
        report.notes.push(
            "a matrix is singular, so the right-hand side of the colorful identity vanishes and a selection is not guaranteed"
                .into(),
        );
    } else if n <= 5 {
        let l = alon_tarsi_count(n, cfg)?;
        if l == 0 {
            report
                .notes
                .push(format!("l({n}) = 0, so the colorful identity does not guarantee a selection"));
        }
    } else {
        report
            .notes
            .push(format!("l({n}) is not computed here; a selection is guaranteed only if it is nonzero"));
    }
    match rota_search(&inst, node_cap)? {
        SearchOutcome::Found { witness, nodes } => {
            let dets = transversal_dets(&inst, &witness)?;
            let one_based = |v: &[usize]| v.iter().map(|c| c + 1).collect::<Vec<_>>();
            report.witness = Some(json!({
                "sigma": witness.sigma().parts().iter().map(|p| one_based(p.mapping())).collect::<Vec<_>>(),
                "transversals": witness.transversals().iter().map(|t| one_based(t)).collect::<Vec<_>>(),
                "dets": dets.iter().map(format_rational).collect::<Vec<_>>(),
            }));
            report.nodes = Some(nodes);
            report.verdict = dets.iter().all(|d| !d.is_zero());
        }
        SearchOutcome::Exhausted { nodes } => {
            report.nodes = Some(nodes);
            report.notes.push("search exhausted without a selection".into());
        }
    }
    Ok(report)
}

fn verify_svrtan_cmd(src: &Source, cfg: &ExecConfig) -> Result<Report, CliError> {
    let inst = spinor_source(src)?;
    let inputs = json!({"command": "verify-svrtan", "instance": Instance::Spinor(inst.clone()).to_json()});
    Ok(identity_report("verify-svrtan", &inputs, &verify_svrtan(&inst, cfg)?))
}

fn svrtan_search_cmd(src: &Source, incremental: bool, node_cap: u64) -> Result<Report, CliError> {
    let inst = spinor_source(src)?;
    let n = inst.vertices();
    let inputs = json!({
        "command": "svrtan-search",
        "instance": Instance::Spinor(inst.clone()).to_json(),
        "node_cap": node_cap,
    });
    let mut report = Report::new("svrtan-search", &inputs);
    if !inst.is_nonsingular() {
        report.notes.push(
            "an edge basis is singular, so both sides of the n! formula vanish and a choice is not guaranteed".into(),
        );
    }
    let opts = SearchOptions { incremental, node_cap };
    match svrtan_search(&inst, &opts)? {
        SearchOutcome::Found { witness, nodes } => {
            let d = choice_det(&inst, &witness)?;
            let assignment: Vec<Value> = edges(n)
                .enumerate()
                .map(|(e, (i, j))| {
                    let (fwd, back) = if witness.bit(e) { ("p2", "p1") } else { ("p1", "p2") };
                    json!({"i": i + 1, "j": j + 1, "ij": fwd, "ji": back})
                })
                .collect();
            report.witness = Some(json!({
                "bits": (0..witness.edges()).map(|e| if witness.bit(e) { '1' } else { '0' }).collect::<String>(),
                "sign": witness.sign().as_i64(),
                "det": format_rational(&d),
                "edges": assignment,
            }));
            report.nodes = Some(nodes);
            report.verdict = !d.is_zero();
        }
        SearchOutcome::Exhausted { nodes } => {
            report.nodes = Some(nodes);
            report.notes.push("search exhausted without a nonzero choice".into());
        }
    }
    Ok(report)
}

fn census(n: usize, cfg: &ExecConfig) -> Result<Report, CliError> {
    let inputs = json!({"command": "census", "n": n});
    let c = nonzero_term_census(n, cfg)?;
    let mut report = Report::new("census", &inputs);
    report.lhs = Some(c.nonzero.to_string());
    report.rhs = factorial(n).map(|f| f.to_string());
    report.term_count = Some(c.total);
    report.witness = Some(json!({
        "total": c.total,
        "nonzero": c.nonzero,
        "nonzero_transitive": c.nonzero_transitive,
        "transitive_zero": c.transitive_zero,
    }));
    report.verdict = c.holds();
    Ok(report)
}

fn generate(kind: InstanceKind, n: Option<usize>, shape: &str, seed: u64) -> Result<Value, CliError> {
    let inst = match kind {
        InstanceKind::MatrixTuple => {
            let shape = parse_shape(shape)?;
            Instance::MatrixTuple(random::nonsingular_tuple(&mut random::rng(seed), &shape)?)
        }
        InstanceKind::Colorful => Instance::Colorful(random::colorful_instance(need_n(n)?, seed)?),
        InstanceKind::Spinor => Instance::Spinor(random::spinor_instance(need_n(n)?, seed)?),
    };
    Ok(inst.to_json())
}

impl Cli {
    pub fn exec_config(&self) -> ExecConfig {
        let mut cfg = match self.threads {
            Some(t) => ExecConfig::with_threads(t as usize),
            None => ExecConfig::default(),
        };
        cfg.term_budget = self.term_budget;
        cfg
    }
}

/// Runs the selected subcommand.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let cfg = cli.exec_config();
    let started = Instant::now();
    let mut report = match &cli.command {
        Command::VerifyGeneral { input, shape, seed } => verify_general(input, shape, *seed, &cfg)?,
        Command::Invariant { form, n, shape, seed } => invariant(*form, *n, shape, *seed, &cfg)?,
        Command::AlonTarsi { n } => alon_tarsi(*n, &cfg)?,
        Command::VerifyOnn(src) => verify_onn_cmd(src, &cfg)?,
        Command::RotaSearch { source, node_cap } => rota_cmd(source, *node_cap, &cfg)?,
        Command::VerifySvrtan(src) => verify_svrtan_cmd(src, &cfg)?,
        Command::SvrtanSearch {
            source,
            incremental,
            node_cap,
        } => svrtan_search_cmd(source, *incremental, *node_cap)?,
        Command::Census { n } => census(*n, &cfg)?,
        Command::Generate { kind, n, shape, seed } => {
            return Ok(Output::Instance(generate(*kind, *n, shape, *seed)?));
        }
    };
    if cli.timing {
        report.elapsed_us = Some(started.elapsed().as_micros() as u64);
    }
    Ok(Output::Report(Box::new(report)))
}
