//! Command-line front end: loads domain documents, runs representation
//! audits, constructive counterexample builders and quantified property
//! verifiers, and generates seeded random instances.
//!
//! Exit codes: 0 success, 2 input error, 3 precondition violation, 4
//! enumeration bound exceeded, 5 property verification failed.

mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use fairaudit::audit::{
    accuracy_driven_unfairness, adversarial_unfairness, fairness_enabling, ZeroMassCells,
    DEFAULT_CELL_BOUND, DEFAULT_MINIMIZER_CAP,
};
use fairaudit::constructors::{
    dp_adversarial_marginal, eo_adversarial_marginal, prp_feasibility,
};
use fairaudit::context::{construct_context_featuresets, construct_generic_distribution};
use fairaudit::domain::{parse_domain, Document};
use fairaudit::error::Error;
use fairaudit::generator::{generate_document, GeneratorParams, WeightStyle};
use fairaudit::metrics::{prp_is_fair, Notion};
use fairaudit::partition::{induce_cells, CellPartition, FeatureSet};
use fairaudit::rational::parse_rational;
use fairaudit::verify::{
    verify_lemma_mutual_eo, verify_monotonicity_adv, verify_monotonicity_enabling,
    verify_oracle_equivalence, verify_prp_equivalence, verify_theorem_multitask, LabelingPairs,
    VerifyOutcome,
};
use fairaudit::Classifier;

use report::{
    classifier_value, id_set_value, rational_entry, rational_str, weights_value, Report,
};

const FIX_12: &str = include_str!("../../../fixtures/fix-12.json");
const FIX_8A: &str = include_str!("../../../fixtures/fix-8a.json");
const FIX_8B: &str = include_str!("../../../fixtures/fix-8b.json");

#[derive(Parser)]
#[command(name = "fairaudit", version, about = "Exact group-fairness audits of finite-domain representations")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Audit a representation of an input domain
    Audit(AuditArgs),
    /// Build an adversarial marginal, generic pair or context pair
    Construct(ConstructArgs),
    /// Check a quantified property exhaustively or over seeded trials
    Verify(VerifyArgs),
    /// Generate a deterministic random domain document
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Adversarial,
    Accuracy,
    Enabling,
}

#[derive(Clone, Copy, ValueEnum)]
enum NotionArg {
    Dp,
    Eo,
    Prp,
}

impl NotionArg {
    fn to_notion(self) -> Notion {
        match self {
            NotionArg::Dp => Notion::Dp,
            NotionArg::Eo => Notion::Eo,
            NotionArg::Prp => Notion::Prp,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Args)]
struct AuditArgs {
    /// Input document path, or one of the named fixtures fix-12, fix-8a, fix-8b
    #[arg(long)]
    input: String,
    /// Task name in the document
    #[arg(long)]
    task: String,
    /// Comma-separated feature names; an empty string means no features
    #[arg(long)]
    features: Option<String>,
    /// A named cell partition carried by the document, instead of --features
    #[arg(long)]
    partition: Option<String>,
    #[arg(long, value_enum, default_value = "adversarial")]
    objective: ObjectiveArg,
    #[arg(long, value_enum, default_value = "eo")]
    notion: NotionArg,
    /// Loss weight, a rational in (0,1)
    #[arg(long, default_value = "1/2")]
    alpha: String,
    /// Loss bound for the enabling objective
    #[arg(long)]
    epsilon: Option<String>,
    /// Unfairness bound for the enabling objective
    #[arg(long)]
    eta: Option<String>,
    /// Cell-count bound for exhaustive enumeration
    #[arg(long, default_value_t = DEFAULT_CELL_BOUND)]
    cell_bound: usize,
    /// Cap on the materialized minimizer set
    #[arg(long, default_value_t = DEFAULT_MINIMIZER_CAP)]
    minimizer_cap: usize,
    /// Pin zero-mass cells to label 0 in minimizer sets
    #[arg(long)]
    pin_zero_mass: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructKind {
    DpMarginal,
    EoMarginal,
    GenericPair,
    ContextPair,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    kind: ConstructKind,
    #[arg(long)]
    input: String,
    /// Ground-truth task (eo-marginal, generic-pair, context-pair)
    #[arg(long)]
    task: Option<String>,
    /// Task name used as the target classifier labeling (marginals)
    #[arg(long)]
    labeling: Option<String>,
    /// Feature name (generic-pair, context-pair)
    #[arg(long)]
    feature: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    All,
    AgreeingSomewhere,
}

impl ScopeArg {
    fn to_scope(self) -> LabelingPairs {
        match self {
            ScopeArg::All => LabelingPairs::All,
            ScopeArg::AgreeingSomewhere => LabelingPairs::AgreeingSomewhere,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyArg {
    LemmaMutualEo,
    TheoremMultitask,
    MonotonicityAdv,
    MonotonicityEnabling,
    OracleEquivalence,
    PrpEquivalence,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    property: PropertyArg,
    /// Trial count for the seeded properties
    #[arg(long)]
    trials: Option<u64>,
    /// Instance-count bound
    #[arg(long)]
    max_size: Option<usize>,
    /// Weight-grid denominator for the exhaustive lemma check
    #[arg(long, default_value_t = 6)]
    grid: u64,
    /// Labeling-pair scope for the structural checks: the full quantifier
    /// or only pairs that agree on some positive-mass instance
    #[arg(long, value_enum, default_value = "all")]
    scope: ScopeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instance count, a number or an inclusive range like 2..12
    #[arg(long, default_value = "8")]
    instances: String,
    /// Feature count, a number or an inclusive range
    #[arg(long, default_value = "2")]
    features: String,
    /// Feature value alphabet size
    #[arg(long, default_value_t = 2)]
    alphabet: usize,
    /// Weight style: uniform or random
    #[arg(long, default_value = "uniform")]
    weights: String,
    /// Numerator bound for random weights
    #[arg(long, default_value_t = 6)]
    max_numerator: usize,
    /// Number of random tasks
    #[arg(long, default_value_t = 1)]
    tasks: usize,
}

fn exit_code_of(err: &Error) -> u8 {
    match err {
        Error::Document(_)
        | Error::DuplicateId(_)
        | Error::MalformedRational(_)
        | Error::WeightSum { .. }
        | Error::NegativeWeight { .. }
        | Error::MissingLabel { .. }
        | Error::UnknownLabelId { .. }
        | Error::BadLabel { .. }
        | Error::MissingFeatureValue { .. }
        | Error::UnknownFeatureId { .. }
        | Error::UnknownTask(_)
        | Error::UnknownFeature(_)
        | Error::UnknownPartition(_)
        | Error::BadPartition { .. } => 2,
        Error::EmptyGroup(_)
        | Error::AlphaOutOfRange(_)
        | Error::Precondition(_)
        | Error::GeneratorParams(_) => 3,
        Error::CellBoundExceeded { .. }
        | Error::SizeBoundExceeded { .. }
        | Error::MinimizerCapExceeded { .. } => 4,
        Error::InternalInvariant(_) => 1,
    }
}

fn input_error(msg: String) -> Error {
    Error::Document(msg)
}

fn command_echo() -> Vec<String> {
    let mut argv: Vec<String> = std::env::args().collect();
    if !argv.is_empty() {
        argv[0] = "fairaudit".to_string();
    }
    argv
}

fn load_input(source: &str) -> Result<(String, Document), Error> {
    let text = match source {
        "fix-12" => FIX_12.to_string(),
        "fix-8a" => FIX_8A.to_string(),
        "fix-8b" => FIX_8B.to_string(),
        path => std::fs::read_to_string(path)
            .map_err(|e| input_error(format!("cannot read {path}: {e}")))?,
    };
    let doc = parse_domain(&text)?;
    Ok((text, doc))
}

fn resolve_cells(doc: &Document, args: &AuditArgs) -> Result<CellPartition, Error> {
    match (&args.features, &args.partition) {
        (Some(_), Some(_)) => {
            Err(input_error("pass --features or --partition, not both".into()))
        }
        (None, None) => Err(input_error("one of --features or --partition is required".into())),
        (None, Some(name)) => Ok(doc.partition(name)?.clone()),
        (Some(names), None) => {
            let mut features = Vec::new();
            for name in names.split(',').filter(|s| !s.is_empty()) {
                features.push(doc.feature(name)?.clone());
            }
            let fs = FeatureSet::new(features)?;
            induce_cells(&doc.domain, &fs)
        }
    }
}

fn emit(report: &Report, format: FormatArg) {
    match format {
        FormatArg::Json => print!("{}", report.to_json()),
        FormatArg::Text => print!("{}", report.to_text()),
    }
}

fn run_audit(args: &AuditArgs) -> Result<u8, Error> {
    let (text, doc) = load_input(&args.input)?;
    let alpha = parse_rational(&args.alpha)?;
    let mut report = Report::new(command_echo()).with_input(&args.input, &text).with_notes(&doc);

    if matches!(args.notion, NotionArg::Prp) {
        // PRP has no per-representation scalar: report feasibility of the
        // distribution and the all-one classifier's conditional rates.
        let feas = prp_feasibility(&doc.domain, &args.task)?;
        let single = CellPartition::single_cell(&doc.domain);
        let all_one = prp_is_fair(&doc.domain, &args.task, &single, &Classifier::constant(1, 1))?;
        report = report
            .result("notion", json!("prp"))
            .result("feasible", json!(feas.feasible))
            .result("success_rate_a", rational_entry(&feas.rates.rate_a))
            .result("success_rate_d", rational_entry(&feas.rates.rate_d))
            .result("all_one_fair", json!(all_one.fair));
        emit(&report, args.format);
        return Ok(0);
    }

    let cells = resolve_cells(&doc, args)?;
    let notion = args.notion.to_notion();
    let zero_mass =
        if args.pin_zero_mass { ZeroMassCells::PinZero } else { ZeroMassCells::BothLabels };
    report = report.result("cells", json!(cells.id_cells(&doc.domain)));

    match args.objective {
        ObjectiveArg::Adversarial => {
            let audit = adversarial_unfairness(&doc.domain, &args.task, &cells, notion)?;
            report = report
                .result("objective", json!("adversarial"))
                .result("notion", json!(notion.as_str()))
                .result("value", rational_entry(&audit.value))
                .witness("classifier", classifier_value(&doc.domain, &cells, &audit.witness));
        }
        ObjectiveArg::Accuracy => {
            let audit = accuracy_driven_unfairness(
                &doc.domain,
                &args.task,
                &cells,
                &alpha,
                notion,
                zero_mass,
                args.minimizer_cap,
            )?;
            report = report
                .result("objective", json!("accuracy"))
                .result("notion", json!(notion.as_str()))
                .result("alpha", rational_str(&alpha))
                .result("value", rational_entry(&audit.value))
                .result("min_loss", rational_entry(&audit.min_loss))
                .result("minimizer_count", json!(audit.minimizer_count))
                .witness("classifier", classifier_value(&doc.domain, &cells, &audit.witness));
        }
        ObjectiveArg::Enabling => {
            let epsilon = args
                .epsilon
                .as_deref()
                .ok_or_else(|| input_error("--epsilon is required for enabling audits".into()))?;
            let eta = args
                .eta
                .as_deref()
                .ok_or_else(|| input_error("--eta is required for enabling audits".into()))?;
            let epsilon = parse_rational(epsilon)?;
            let eta = parse_rational(eta)?;
            let audit = fairness_enabling(
                &doc.domain,
                &args.task,
                &cells,
                &epsilon,
                &eta,
                &alpha,
                notion,
                args.cell_bound,
            )?;
            report = report
                .result("objective", json!("enabling"))
                .result("notion", json!(notion.as_str()))
                .result("alpha", rational_str(&alpha))
                .result("epsilon", rational_str(&epsilon))
                .result("eta", rational_str(&eta))
                .result("enabled", json!(audit.enabled));
            if let Some(witness) = &audit.witness {
                report =
                    report.witness("classifier", classifier_value(&doc.domain, &cells, witness));
            }
        }
    }
    emit(&report, args.format);
    Ok(0)
}

fn run_construct(args: &ConstructArgs) -> Result<u8, Error> {
    let (text, doc) = load_input(&args.input)?;
    let mut report = Report::new(command_echo()).with_input(&args.input, &text).with_notes(&doc);
    let need = |flag: Option<&String>, name: &str| {
        flag.cloned().ok_or_else(|| input_error(format!("--{name} is required for this kind")))
    };
    match args.kind {
        ConstructKind::DpMarginal => {
            let labeling = need(args.labeling.as_ref(), "labeling")?;
            let h = doc.domain.task(&labeling)?.to_vec();
            let marginal = dp_adversarial_marginal(&doc.domain, &h)?;
            report = report
                .result("kind", json!("dp-marginal"))
                .result("labeling", json!(labeling))
                .result("case", json!(marginal.case.as_str()))
                .result("target_unfairness", rational_entry(&marginal.target_unfairness))
                .result("achieved_unfairness", rational_entry(&marginal.achieved_unfairness))
                .witness("marginal", weights_value(&doc.domain, &marginal.weights));
        }
        ConstructKind::EoMarginal => {
            let task = need(args.task.as_ref(), "task")?;
            let labeling = need(args.labeling.as_ref(), "labeling")?;
            let truth = doc.domain.task(&task)?.to_vec();
            let h = doc.domain.task(&labeling)?.to_vec();
            let marginal = eo_adversarial_marginal(&doc.domain, &truth, &h)?;
            report = report
                .result("kind", json!("eo-marginal"))
                .result("task", json!(task))
                .result("labeling", json!(labeling))
                .result("case", json!(marginal.case.as_str()))
                .result("target_unfairness", rational_entry(&marginal.target_unfairness))
                .result("achieved_unfairness", rational_entry(&marginal.achieved_unfairness))
                .witness("marginal", weights_value(&doc.domain, &marginal.weights));
        }
        ConstructKind::GenericPair => {
            let task = need(args.task.as_ref(), "task")?;
            let feature = need(args.feature.as_ref(), "feature")?;
            let f = doc.feature(&feature)?;
            let (weights, witness) = construct_generic_distribution(f, &doc.domain, &task)?;
            report = report
                .result("kind", json!("generic-pair"))
                .result("feature", json!(feature))
                .result("values", json!([witness.y1, witness.y2, witness.y3]))
                .result("label", json!(witness.l1))
                .result("group", json!(witness.g1.as_str()))
                .witness("c1", id_set_value(&doc.domain, &witness.c1))
                .witness("c2", id_set_value(&doc.domain, &witness.c2))
                .witness("c3", id_set_value(&doc.domain, &witness.c3))
                .witness("distribution", weights_value(&doc.domain, &weights));
        }
        ConstructKind::ContextPair => {
            let task = need(args.task.as_ref(), "task")?;
            let feature = need(args.feature.as_ref(), "feature")?;
            let f = doc.feature(&feature)?;
            let (weights, witness) = construct_generic_distribution(f, &doc.domain, &task)?;
            let pair =
                construct_context_featuresets(f, &doc.domain, &task, &weights, &witness)?;
            let feature_values = |fs: &FeatureSet| {
                let feature = &fs.features()[0];
                let mut map = serde_json::Map::new();
                for i in 0..doc.domain.len() {
                    map.insert(doc.domain.id(i).to_string(), json!(feature.value(i)));
                }
                serde_json::Value::Object(map)
            };
            report = report
                .result("kind", json!("context-pair"))
                .result("feature", json!(feature))
                .result("increasing_without", rational_entry(&pair.increasing_without))
                .result("increasing_with", rational_entry(&pair.increasing_with))
                .result("decreasing_without", rational_entry(&pair.decreasing_without))
                .result("decreasing_with", rational_entry(&pair.decreasing_with))
                .witness("fs_increasing", feature_values(&pair.fs_increasing))
                .witness("fs_decreasing", feature_values(&pair.fs_decreasing))
                .witness("distribution", weights_value(&doc.domain, &weights));
        }
    }
    emit(&report, args.format);
    Ok(0)
}

fn run_verify(args: &VerifyArgs) -> Result<u8, Error> {
    let trials = |default: u64| args.trials.unwrap_or(default);
    let size = |default: usize| args.max_size.unwrap_or(default);
    let outcome: VerifyOutcome = match args.property {
        PropertyArg::LemmaMutualEo => {
            verify_lemma_mutual_eo(size(5), args.grid, args.scope.to_scope())?
        }
        PropertyArg::TheoremMultitask => {
            verify_theorem_multitask(size(6), args.scope.to_scope())?
        }
        PropertyArg::MonotonicityAdv => {
            verify_monotonicity_adv(trials(1000), size(10), args.seed)?
        }
        PropertyArg::MonotonicityEnabling => {
            verify_monotonicity_enabling(trials(1000), size(10), args.seed)?
        }
        PropertyArg::OracleEquivalence => {
            verify_oracle_equivalence(trials(1000), size(12), args.seed)?
        }
        PropertyArg::PrpEquivalence => {
            verify_prp_equivalence(trials(500), size(10), args.seed)?
        }
    };
    let mut report = Report::new(command_echo())
        .result("property", json!(outcome.property))
        .result("pass", json!(outcome.pass))
        .result("checked", json!(outcome.checked));
    if let Some(counterexample) = &outcome.counterexample {
        report = report.result("counterexample", json!(counterexample));
    }
    emit(&report, args.format);
    Ok(if outcome.pass { 0 } else { 5 })
}

fn run_gen(args: &GenArgs) -> Result<u8, Error> {
    let parse_range = |text: &str, flag: &str| -> Result<(usize, usize), Error> {
        let parts: Vec<&str> = text.split("..").collect();
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| input_error(format!("--{flag}: cannot parse {s:?} as a count")))
        };
        match parts.as_slice() {
            [one] => {
                let v = parse(one)?;
                Ok((v, v))
            }
            [lo, hi] => Ok((parse(lo)?, parse(hi)?)),
            _ => Err(input_error(format!("--{flag}: expected N or LO..HI, got {text:?}"))),
        }
    };
    let weights = match args.weights.as_str() {
        "uniform" => WeightStyle::Uniform,
        "random" => WeightStyle::RandomRational { max_numerator: args.max_numerator },
        other => return Err(input_error(format!("--weights: unknown style {other:?}"))),
    };
    let params = GeneratorParams {
        seed: args.seed,
        instances: parse_range(&args.instances, "instances")?,
        features: parse_range(&args.features, "features")?,
        alphabet: args.alphabet,
        weights,
        tasks: args.tasks,
    };
    print!("{}", generate_document(&params)?);
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Audit(args) => run_audit(args),
        Cmd::Construct(args) => run_construct(args),
        Cmd::Verify(args) => run_verify(args),
        Cmd::Gen(args) => run_gen(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_of(&err))
        }
    }
}
