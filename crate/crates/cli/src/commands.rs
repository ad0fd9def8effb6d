//! Subcommand implementations. Reports and tables go to stdout, rejected-row
//! warnings and errors to stderr; `--out` writes machine-readable CSV.

use std::fmt::Write as _;
use std::fs::{self, File};

use anyhow::{Context, Result, anyhow};

use flowsieve::classifier::{Algo, Hyperparams, LogisticParams, SvmParams, TreeParams, artifact};
use flowsieve::eval::{Scoreboard, report_csv};
use flowsieve::flow::io::{ColumnMap, parse_flow_csv, write_flow_csv};
use flowsieve::flow::{Dataset, FeatureId, Label, summarize};
use flowsieve::pipeline::{EvalSubset, bench_pipeline, evaluate_pipeline, train_pipeline};
use flowsieve::preprocess::SplitConfig;
use flowsieve::synth::{SynthConfig, SynthError, generate, separable_flows};
use flowsieve::{SummaryStatsF64, TrainedModelF64};

use crate::{
    BenchArgs, DataArgs, EvaluateArgs, FeatureArgs, HyperArgs, InspectArgs, SplitArgs, SynthArgs,
    TrainArgs,
};

fn load_dataset(args: &DataArgs) -> Result<Dataset> {
    let mut columns = ColumnMap::default();
    if let Some(path) = &args.columns {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read column map {}", path.display()))?;
        columns.apply_config(&text)?;
    }
    let file =
        File::open(&args.data).with_context(|| format!("cannot open {}", args.data.display()))?;
    let name = args.data.display().to_string();
    let report = parse_flow_csv(file, &name, &columns)?;
    if !report.rejected.is_empty() {
        eprintln!(
            "warning: rejected {} malformed row(s) in {name}",
            report.rejected.len()
        );
        for err in report.rejected.iter().take(5) {
            eprintln!("  {err}");
        }
        if report.rejected.len() > 5 {
            eprintln!("  … and {} more", report.rejected.len() - 5);
        }
    }
    Ok(report.dataset)
}

fn feature_list(args: &FeatureArgs) -> Vec<String> {
    args.features.clone().unwrap_or_else(|| {
        FeatureId::DEFAULT
            .iter()
            .map(|f| f.name().to_string())
            .collect()
    })
}

fn split_config(args: &SplitArgs) -> SplitConfig {
    SplitConfig {
        test_fraction: args.test_fraction,
        seed: args.seed,
        stratified: !args.no_stratify,
    }
}

fn hyperparams(args: &HyperArgs, seed: u64) -> Hyperparams<f64> {
    Hyperparams {
        logistic: LogisticParams {
            learning_rate: args.lr,
            iterations: args.iters,
            l2: args.l2,
        },
        svm: SvmParams {
            lambda: args.lambda,
            epochs: args.epochs,
            seed,
        },
        tree: TreeParams {
            max_depth: args.max_depth,
            min_samples_split: args.min_samples_split,
        },
    }
}

fn render_summary(stats: &SummaryStatsF64) -> String {
    let mut out = String::new();
    for class in &stats.classes {
        let _ = writeln!(out, "class {} ({} rows)", class.label, class.count);
        let _ = writeln!(
            out,
            "  {:<18} {:>16} {:>16} {:>16} {:>16}",
            "feature", "mean", "std", "min", "max"
        );
        for f in &class.features {
            let _ = writeln!(
                out,
                "  {:<18} {:>16.4} {:>16.4} {:>16.4} {:>16.4}",
                f.feature.name(),
                f.mean,
                f.std,
                f.min,
                f.max
            );
        }
    }
    out
}

// Per-feature var(benign)/var(DDoS); requires both classes.
fn render_variance_ratios(stats: &SummaryStatsF64) -> Option<String> {
    let benign = stats.class(Label::Benign)?;
    let ddos = stats.class(Label::Ddos)?;
    let mut out = String::from("variance ratio (benign/DDoS)\n");
    for id in FeatureId::ALL {
        let ratio = benign.feature(id).std.powi(2) / ddos.feature(id).std.powi(2);
        let _ = writeln!(out, "  {:<18} {:.4}", id.name(), ratio);
    }
    Some(out)
}

fn non_negative(n: i64, flag: &str) -> Result<usize> {
    if n < 0 {
        return Err(SynthError::InvalidConfig(format!("{flag} must be ≥ 0, got {n}")).into());
    }
    Ok(n as usize)
}

pub fn synth(args: SynthArgs) -> Result<()> {
    let ds = if args.separable {
        separable_flows(args.n_per_class, args.margin, args.seed.unwrap_or(42))?
    } else {
        let mut cfg = SynthConfig::default();
        if let Some(path) = &args.config {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read config {}", path.display()))?;
            cfg.apply_config(&text)?;
        }
        if let Some(n) = args.n_benign {
            cfg.n_benign = non_negative(n, "--n-benign")?;
        }
        if let Some(n) = args.n_ddos {
            cfg.n_ddos = non_negative(n, "--n-ddos")?;
        }
        if let Some(seed) = args.seed {
            cfg.seed = seed;
        }
        if let Some(overlap) = args.overlap {
            cfg.overlap = overlap;
        }
        generate(&cfg)?
    };

    let file =
        File::create(&args.out).with_context(|| format!("cannot create {}", args.out.display()))?;
    write_flow_csv(file, &ds)?;
    println!("wrote {} rows to {}", ds.len(), args.out.display());

    let stats = summarize::<f64>(&ds)?;
    print!("{}", render_summary(&stats));
    if let Some(ratios) = render_variance_ratios(&stats) {
        print!("{ratios}");
    }
    Ok(())
}

pub fn train(args: TrainArgs) -> Result<()> {
    let algo = Algo::parse(&args.algo).ok_or_else(|| {
        anyhow!(
            "unknown algorithm `{}` (expected logistic, svm or tree)",
            args.algo
        )
    })?;
    let ds = load_dataset(&args.data)?;
    let features = feature_list(&args.features);
    let split = split_config(&args.split);
    let hyper = hyperparams(&args.hyper, args.split.seed);

    let outcome = train_pipeline(&ds, algo, &features, &split, &hyper)?;
    artifact::save_to_path(&outcome.model, &args.model)
        .with_context(|| format!("cannot write model to {}", args.model.display()))?;

    println!("trained {} on {}", algo.display_name(), ds.source_name);
    println!(
        "  rows: {} parsed, {} removed by cleaning",
        ds.len(),
        outcome.removed
    );
    println!(
        "  split: {} train / {} test (test_fraction {}, seed {}, stratified {})",
        outcome.train_rows, outcome.test_rows, split.test_fraction, split.seed, split.stratified
    );
    println!("  features: {}", features.join(", "));
    println!("  training accuracy: {:.6}", outcome.training_accuracy);
    println!("model written to {}", args.model.display());
    Ok(())
}

pub fn evaluate(args: EvaluateArgs) -> Result<()> {
    let subset = EvalSubset::parse(&args.on)
        .ok_or_else(|| anyhow!("--on must be test, train or all, got `{}`", args.on))?;
    let model: TrainedModelF64 = artifact::load_from_path(&args.model)
        .with_context(|| format!("cannot load model {}", args.model.display()))?;
    let ds = load_dataset(&args.data)?;

    let outcome = evaluate_pipeline(&model, &ds, subset)?;
    println!(
        "evaluated {} model on {} ({} rows, subset {})",
        model.kind.algo().display_name(),
        ds.source_name,
        outcome.rows,
        args.on.trim().to_ascii_lowercase()
    );
    print!("{}", outcome.confusion.to_text());
    print!(
        "{}",
        Scoreboard::new(std::slice::from_ref(&outcome.report))?.to_text()
    );

    if let Some(out) = &args.out {
        fs::write(out, report_csv(&outcome.report))
            .with_context(|| format!("cannot write {}", out.display()))?;
        println!("report written to {}", out.display());
    }
    Ok(())
}

pub fn bench(args: BenchArgs) -> Result<()> {
    let ds = load_dataset(&args.data)?;
    let features = feature_list(&args.features);
    let split = split_config(&args.split);
    let hyper = hyperparams(&args.hyper, args.split.seed);

    let outcome = bench_pipeline(&ds, &features, &split, &hyper)?;
    println!(
        "benchmark on {} ({} train / {} test rows, {} removed by cleaning)",
        ds.source_name, outcome.train_rows, outcome.test_rows, outcome.removed
    );
    print!("{}", outcome.scoreboard.to_text());
    println!("training time:");
    for entry in &outcome.entries {
        println!(
            "  {:<20} {:>10.3} ms (training accuracy {:.6})",
            entry.algo.display_name(),
            entry.train_time.as_secs_f64() * 1e3,
            entry.training_accuracy
        );
    }

    if let Some(out) = &args.out {
        fs::write(out, outcome.scoreboard.to_csv())
            .with_context(|| format!("cannot write {}", out.display()))?;
        println!("scoreboard written to {}", out.display());
    }
    Ok(())
}

pub fn inspect(args: InspectArgs) -> Result<()> {
    let ds = load_dataset(&args.data)?;
    let counts = ds.class_counts();
    let n_classes = counts.iter().filter(|&&c| c > 0).count();
    println!(
        "{}: {} rows, 9 columns (8 numeric features + label), {} classes (BENIGN {}, DDoS {})",
        ds.source_name,
        ds.len(),
        n_classes,
        counts[0],
        counts[1]
    );
    let stats = summarize::<f64>(&ds)?;
    print!("{}", render_summary(&stats));
    match render_variance_ratios(&stats) {
        Some(ratios) => print!("{ratios}"),
        None => println!("variance ratio (benign/DDoS): unavailable (both classes required)"),
    }
    Ok(())
}
