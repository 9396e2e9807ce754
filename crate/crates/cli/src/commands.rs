//! Subcommand implementations.

use std::fs;
use std::path::{Path, PathBuf};

use banditbench::analysis::{top_reward_brute_force, top_reward_closed_form};
use banditbench::engine::ExperimentConfig;
use banditbench::stats::{one_way_anova, pairwise_vs_control, AnovaResult};

use crate::error::CliError;
use crate::histogram::{self, BinSpec, Metric};
use crate::manifest::RunManifest;
use crate::results::{write_session_csv, ResultsFile};

pub struct GlobalFlags {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub csv: bool,
    pub quiet: bool,
}

pub fn cmd_run(config_path: &Path, out_path: &Path, flags: &GlobalFlags) -> Result<(), CliError> {
    let bytes = fs::read(config_path).map_err(|e| CliError::io(config_path, e))?;
    let mut config: ExperimentConfig = serde_json::from_slice(&bytes).map_err(|e| {
        CliError::Usage(format!("{}: config parse error: {e}", config_path.display()))
    })?;
    if let Some(seed) = flags.seed {
        config.base_seed = seed;
    }
    let experiment = config.validate()?;
    let manifest = RunManifest::new(&bytes, experiment.base_seed);

    let result = match flags.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Usage(format!("threads: {e}")))?
            .install(|| experiment.run()),
        None => experiment.run(),
    };

    let results_file = ResultsFile { manifest, result };
    results_file.save(out_path)?;
    if flags.csv {
        let csv_path = out_path.with_extension("csv");
        write_session_csv(&csv_path, &results_file.manifest, &results_file.result)?;
        if !flags.quiet {
            println!("wrote per-session csv to {}", csv_path.display());
        }
    }

    if !flags.quiet {
        println!("wrote results to {}", out_path.display());
        for policy in &results_file.result.policies {
            let s = &policy.summary;
            match (s.success_rate, s.survival_median) {
                (Some(rate), _) => println!(
                    "  {:<24} sessions {:>7}  success_rate {:.4}",
                    policy.label, s.sessions, rate
                ),
                (_, Some(median)) => println!(
                    "  {:<24} sessions {:>7}  survival_median {:>9.1}  capped {}",
                    policy.label, s.sessions, median, s.capped_count
                ),
                _ => {}
            }
        }
    }
    Ok(())
}

fn anova_row(label: &str, r: &AnovaResult, csv: bool) -> String {
    if csv {
        format!(
            "{label},{},{},{},{},{}\n",
            r.f_statistic, r.df_between, r.df_within, r.p_value, r.degenerate
        )
    } else {
        format!(
            "{label:<32} {:>14.6} {:>8} {:>8} {:>12.4e} {:>10}\n",
            r.f_statistic, r.df_between, r.df_within, r.p_value, r.degenerate
        )
    }
}

pub fn cmd_anova(results_path: &Path, control: &str, flags: &GlobalFlags) -> Result<(), CliError> {
    let results = ResultsFile::load(results_path)?;
    results.require_sessions()?;
    let groups = results.metric_groups();

    let control_group = groups
        .iter()
        .find(|g| g.label == control)
        .cloned()
        .ok_or_else(|| {
            let known: Vec<&str> = groups.iter().map(|g| g.label.as_str()).collect();
            CliError::Usage(format!(
                "control label `{control}` not present in results (policies: {})",
                known.join(", ")
            ))
        })?;
    let treatments: Vec<_> = groups.iter().filter(|g| g.label != control).cloned().collect();
    if treatments.is_empty() {
        return Err(CliError::Usage(
            "results contain only the control policy; nothing to compare".to_string(),
        ));
    }

    let mut out = String::new();
    if flags.csv {
        out.push_str("label,f,df1,df2,p,degenerate\n");
    } else {
        out.push_str(&format!(
            "{:<32} {:>14} {:>8} {:>8} {:>12} {:>10}\n",
            "label", "f", "df1", "df2", "p", "degenerate"
        ));
    }
    for (label, row) in pairwise_vs_control(&control_group, &treatments)? {
        out.push_str(&anova_row(&format!("{label} vs {control}"), &row, flags.csv));
    }
    let omnibus = one_way_anova(&groups)?;
    out.push_str(&anova_row("omnibus", &omnibus, flags.csv));
    print!("{out}");
    Ok(())
}

pub fn cmd_topreward(thetas: &[f64], payouts: &[i64]) -> Result<(), CliError> {
    let closed =
        top_reward_closed_form(thetas, payouts).map_err(|e| CliError::Usage(e.to_string()))?;
    let brute =
        top_reward_brute_force(thetas, payouts).map_err(|e| CliError::Usage(e.to_string()))?;
    let fmt = |values: &[f64]| {
        values.iter().map(f64::to_string).collect::<Vec<_>>().join(" ")
    };
    println!("arms: {}", thetas.len());
    println!("closed_form: {}", fmt(&closed.probabilities));
    println!("brute_force: {}", fmt(&brute.probabilities));
    println!("max_abs_discrepancy: {:e}", closed.max_abs_diff(&brute));
    Ok(())
}

pub struct HistogramArgs {
    pub results: PathBuf,
    pub metric: Metric,
    pub bins: usize,
    pub edges: Option<Vec<f64>>,
    pub out: PathBuf,
}

pub fn cmd_histogram(args: &HistogramArgs, flags: &GlobalFlags) -> Result<(), CliError> {
    let results = ResultsFile::load(&args.results)?;
    let bins = match &args.edges {
        Some(edges) => BinSpec::Edges(edges.clone()),
        None => BinSpec::Count(args.bins),
    };
    let rendered = histogram::render(&results, args.metric, &bins)?;
    fs::write(&args.out, rendered).map_err(|e| CliError::io(&args.out, e))?;
    if !flags.quiet {
        println!("wrote histogram to {}", args.out.display());
    }
    Ok(())
}
