use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cadsel::error::HarnessError;
use cadsel::exec::ExecMode;
use cadsel::harness::case_b::{train_mode, SelectionMode};
use cadsel::harness::feature_table::{build_feature_table, CaseKind, FeatureTable};
use cadsel::harness::label::{results_csv_a, results_csv_b, QuarantineEntry};
use cadsel::harness::problem::{read_json, write_json, write_text, FORMAT_VERSION};
use cadsel::harness::{
    gen_dataset, label_case_a, label_case_b, load_model, run_case_a, run_case_b, save_model,
    CaseAConfig, CaseBConfig, Dataset, GenSpec, LabelFileA, LabelFileB, LimitsSpec,
};
use cadsel::modelsel::{cfs_filter_select, exponent_grid, stratified_folds, wrapper_pairs, wrapper_select};

#[derive(Parser)]
#[command(name = "cadsel", version, about = "CAD variable ordering and preconditioning selection")]
struct Cli {
    /// Run every stage on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random problem dataset.
    Gen(GenArgs),
    /// Label problems with cell counts under all six orderings.
    LabelA(LabelArgs),
    /// Label problems with cell counts before and after preconditioning.
    LabelB(LabelArgs),
    /// Extract feature vectors.
    Features(FeaturesArgs),
    /// Train a classifier with cross-validated grid search.
    Train(TrainArgs),
    /// Select a feature subset.
    SelectFeatures(SelectArgs),
    /// Classify feature rows with a saved model.
    Predict(PredictArgs),
    /// Heuristic selection experiment.
    ReportA(ReportAArgs),
    /// Preconditioning experiment.
    ReportB(ReportBArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    count: usize,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    degrees: Vec<u32>,
    #[arg(long, default_value_t = -20, allow_hyphen_values = true)]
    coeff_min: i64,
    #[arg(long, default_value_t = 20)]
    coeff_max: i64,
    #[arg(long, default_value_t = 2)]
    max_terms: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long, default_value_t = LimitsSpec::default().cell_cap)]
    cell_cap: u64,
    /// Seconds per CAD run.
    #[arg(long, default_value_t = 60.0)]
    time_cap: f64,
    #[arg(long)]
    no_time_cap: bool,
}

impl LimitArgs {
    fn spec(&self) -> LimitsSpec {
        LimitsSpec {
            cell_cap: self.cell_cap,
            time_cap_secs: (!self.no_time_cap).then_some(self.time_cap),
        }
    }
}

#[derive(Args)]
struct LabelArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Per-problem results table.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Manifest of problems with failed or invalid runs.
    #[arg(long)]
    quarantine: Option<PathBuf>,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    A,
    B,
}

#[derive(Args)]
struct FeaturesArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, value_enum)]
    case: CaseArg,
    /// Label file whose targets are attached to the rows.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GridArgs {
    /// Exponent range for C, as lo:hi.
    #[arg(long, default_value = "-5:15", allow_hyphen_values = true)]
    c_exp: String,
    /// Exponent range for gamma, as lo:hi.
    #[arg(long, default_value = "-15:3", allow_hyphen_values = true)]
    gamma_exp: String,
    #[arg(long, default_value_t = 1)]
    grid_step: usize,
}

impl GridArgs {
    fn grid(&self) -> Result<Vec<(f64, f64)>, String> {
        if self.grid_step == 0 {
            return Err("--grid-step must be positive".into());
        }
        Ok(exponent_grid(range(&self.c_exp)?, range(&self.gamma_exp)?, self.grid_step))
    }
}

fn range(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
    let lo = a.trim().parse().map_err(|_| format!("bad exponent `{a}`"))?;
    let hi = b.trim().parse().map_err(|_| format!("bad exponent `{b}`"))?;
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok((lo, hi))
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    features: PathBuf,
    /// Target column; defaults to `precondition` for Case B tables.
    #[arg(long)]
    target: Option<String>,
    /// all, before, after, filter or wrapper.
    #[arg(long, default_value = "all")]
    mode: String,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Filter,
    Wrapper,
}

#[derive(Args)]
struct SelectArgs {
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    target: Option<String>,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    features: PathBuf,
    /// CSV of id, decision value, class; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportAArgs {
    #[arg(long)]
    labels: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    train: f64,
    #[arg(long, default_value_t = 0.25)]
    validation: f64,
    #[arg(long, default_value_t = 0.25)]
    test: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    grid: GridArgs,
    /// Text report; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Full report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ReportBArgs {
    #[arg(long)]
    labels: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "all,before,after")]
    modes: Vec<String>,
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    #[arg(long, default_value_t = 0.2)]
    test_fraction: f64,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Harness(HarnessError),
    Usage(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        Failure::Harness(e)
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Usage(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Harness(e) => write!(f, "{e}"),
            Failure::Usage(e) => f.write_str(e),
        }
    }
}

/// Whether the command finished with quarantined problems.
type Outcome = Result<bool, Failure>;

fn emit(out: Option<&Path>, text: &str) -> Result<(), HarnessError> {
    match out {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_quarantine(path: Option<&Path>, q: &[QuarantineEntry]) -> Result<(), HarnessError> {
    #[derive(serde::Serialize)]
    struct Manifest<'a> {
        format_version: u64,
        quarantined: &'a [QuarantineEntry],
    }
    if let Some(p) = path {
        write_json(
            p,
            &Manifest {
                format_version: FORMAT_VERSION,
                quarantined: q,
            },
        )?;
    }
    Ok(())
}

fn gen(a: GenArgs) -> Outcome {
    let spec = GenSpec {
        count: a.count,
        degrees: a.degrees,
        coeff_range: (a.coeff_min, a.coeff_max),
        max_terms: a.max_terms,
        seed: a.seed,
    };
    let d = gen_dataset(&spec)?;
    write_json(&a.out, &d)?;
    eprintln!("wrote {} problems to {}", d.problems.len(), a.out.display());
    Ok(false)
}

fn label(a: LabelArgs, case: CaseKind, mode: ExecMode) -> Outcome {
    let d: Dataset = read_json(&a.dataset)?;
    let limits = a.limits.spec();
    let quarantined = match case {
        CaseKind::A => {
            let f = label_case_a(&d.problems, &limits, mode);
            write_json(&a.out, &f)?;
            if let Some(p) = &a.csv {
                write_text(p, &results_csv_a(&f)?)?;
            }
            f.quarantined
        }
        CaseKind::B => {
            let f = label_case_b(&d.problems, &limits, mode);
            write_json(&a.out, &f)?;
            if let Some(p) = &a.csv {
                write_text(p, &results_csv_b(&f)?)?;
            }
            f.quarantined
        }
    };
    write_quarantine(a.quarantine.as_deref(), &quarantined)?;
    eprintln!(
        "labeled {} problems, {} quarantined",
        d.problems.len(),
        quarantined.len()
    );
    Ok(!quarantined.is_empty())
}

fn features(a: FeaturesArgs) -> Outcome {
    let d: Dataset = read_json(&a.dataset)?;
    let case = match a.case {
        CaseArg::A => CaseKind::A,
        CaseArg::B => CaseKind::B,
    };
    let (la, lb): (Option<LabelFileA>, Option<LabelFileB>) = match (&a.labels, case) {
        (Some(p), CaseKind::A) => (Some(read_json(p)?), None),
        (Some(p), CaseKind::B) => (None, Some(read_json(p)?)),
        (None, _) => (None, None),
    };
    let (table, bad) = build_feature_table(&d.problems, case, la.as_ref(), lb.as_ref());
    write_json(&a.out, &table)?;
    for b in &bad {
        eprintln!("skipped {}: {}", b.id, b.reason);
    }
    Ok(!bad.is_empty())
}

fn target_of(table: &FeatureTable, t: Option<String>) -> Result<String, Failure> {
    t.or_else(|| table.default_target().map(String::from))
        .ok_or_else(|| Failure::Usage("--target is required for Case A tables (brown, sotd or ndrr)".into()))
}

fn train_cmd(a: TrainArgs, exec: ExecMode) -> Outcome {
    let table: FeatureTable = read_json(&a.features)?;
    let target = target_of(&table, a.target)?;
    let (_, rows, labels) = table.labelled(&target)?;
    let mode = SelectionMode::parse(&a.mode).ok_or_else(|| format!("unknown mode `{}`", a.mode))?;
    let mut cfg = CaseBConfig::new(a.grid.grid()?, vec![mode], 1, a.seed);
    cfg.folds = a.folds;
    let t = train_mode(&rows, &labels, mode, &cfg, a.seed, exec)?;
    save_model(&t.model, &a.out)?;
    eprintln!(
        "C={} gamma={} cv MCC={:.4} features={}",
        t.model.c,
        t.model.gamma,
        t.cv_mcc,
        t.columns.len()
    );
    Ok(false)
}

fn select(a: SelectArgs, exec: ExecMode) -> Outcome {
    #[derive(serde::Serialize)]
    struct Selection {
        format_version: u64,
        method: &'static str,
        target: String,
        features: Vec<usize>,
        c: Option<f64>,
        gamma: Option<f64>,
        cv_accuracy: Option<f64>,
    }
    let table: FeatureTable = read_json(&a.features)?;
    let target = target_of(&table, a.target)?;
    let (_, rows, labels) = table.labelled(&target)?;
    let sel = match a.method {
        Method::Filter => Selection {
            format_version: FORMAT_VERSION,
            method: "filter",
            target,
            features: cfs_filter_select(&rows, &labels).map_err(HarnessError::from)?,
            c: None,
            gamma: None,
            cv_accuracy: None,
        },
        Method::Wrapper => {
            let stats = cadsel::features::fit_standardization(&rows).map_err(HarnessError::from)?;
            let z: Vec<Vec<f64>> = rows
                .iter()
                .map(|r| stats.apply_row(r))
                .collect::<Result<_, _>>()
                .map_err(HarnessError::from)?;
            let folds = stratified_folds(&labels, a.folds, a.seed).map_err(HarnessError::from)?;
            let w = wrapper_select(&z, &labels, &wrapper_pairs(), &folds, exec).map_err(HarnessError::from)?;
            Selection {
                format_version: FORMAT_VERSION,
                method: "wrapper",
                target,
                features: w.subset,
                c: Some(w.best_c),
                gamma: Some(w.best_gamma),
                cv_accuracy: Some(w.cv_accuracy),
            }
        }
    };
    let one_based: Vec<String> = sel.features.iter().map(|c| (c + 1).to_string()).collect();
    println!("{}", one_based.join(","));
    if let Some(p) = &a.out {
        write_json(p, &sel)?;
    }
    Ok(false)
}

fn predict(a: PredictArgs) -> Outcome {
    let model = load_model(&a.model)?;
    let table: FeatureTable = read_json(&a.features)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Harness(HarnessError::from(e));
    w.write_record(["id", "decision", "class"]).map_err(io)?;
    for (id, row) in table.ids.iter().zip(&table.rows) {
        let d = model.decision_value_raw(row).map_err(HarnessError::from)?;
        let class = if d >= 0.0 { "1" } else { "-1" };
        w.write_record([id.as_str(), &format!("{d}"), class]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    emit(a.out.as_deref(), &String::from_utf8(bytes).expect("utf8"))?;
    Ok(false)
}

fn report_a(a: ReportAArgs, exec: ExecMode) -> Outcome {
    let file: LabelFileA = read_json(&a.labels)?;
    let mut cfg = CaseAConfig::new(a.grid.grid()?, a.seed);
    cfg.split = (a.train, a.validation, a.test);
    let (report, _) = run_case_a(&file, &cfg, exec)?;
    report.reconcile().map_err(|e| format!("report does not reconcile: {e}"))?;
    emit(a.out.as_deref(), &report.render())?;
    if let Some(p) = &a.json {
        write_json(p, &serde_json::json!({"format_version": FORMAT_VERSION, "report": report}))?;
    }
    Ok(!file.quarantined.is_empty())
}

fn report_b(a: ReportBArgs, exec: ExecMode) -> Outcome {
    let file: LabelFileB = read_json(&a.labels)?;
    let modes = a
        .modes
        .iter()
        .map(|m| SelectionMode::parse(m).ok_or_else(|| format!("unknown mode `{m}`")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut cfg = CaseBConfig::new(a.grid.grid()?, modes, a.repeats, a.seed);
    cfg.test_fraction = a.test_fraction;
    cfg.folds = a.folds;
    let report = run_case_b(&file, &cfg, exec)?;
    report.reconcile().map_err(|e| format!("report does not reconcile: {e}"))?;
    emit(a.out.as_deref(), &report.render())?;
    if let Some(p) = &a.json {
        write_json(p, &serde_json::json!({"format_version": FORMAT_VERSION, "report": report}))?;
    }
    Ok(!file.quarantined.is_empty())
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors; 2 is reserved for partial results
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let exec = if cli.sequential {
        ExecMode::Sequential
    } else {
        ExecMode::default()
    };
    let r = match cli.command {
        Command::Gen(a) => gen(a),
        Command::LabelA(a) => label(a, CaseKind::A, exec),
        Command::LabelB(a) => label(a, CaseKind::B, exec),
        Command::Features(a) => features(a),
        Command::Train(a) => train_cmd(a, exec),
        Command::SelectFeatures(a) => select(a, exec),
        Command::Predict(a) => predict(a),
        Command::ReportA(a) => report_a(a, exec),
        Command::ReportB(a) => report_b(a, exec),
    };
    match r {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
