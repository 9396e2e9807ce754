//! Plot-ready histogram CSV emission (`group,bin_lo,bin_hi,count`); rendering
//! itself is left to external tools.

use banditbench::engine::SessionConfig;
use clap::ValueEnum;

use crate::error::CliError;
use crate::results::ResultsFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    /// One row per policy: `label,0,1,success_rate` (horizon-mode results).
    SuccessRate,
    /// Binned survival-round counts per policy (bankruptcy-mode results).
    Survival,
}

#[derive(Debug, Clone)]
pub enum BinSpec {
    /// Equal-width bins over the global value range.
    Count(usize),
    /// Explicit, strictly increasing bin edges.
    Edges(Vec<f64>),
}

impl BinSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        match self {
            BinSpec::Count(0) => Err(CliError::Usage("bins: must be >= 1".to_string())),
            BinSpec::Count(_) => Ok(()),
            BinSpec::Edges(edges) => {
                if edges.len() < 2 {
                    return Err(CliError::Usage("edges: need at least two edges".to_string()));
                }
                if edges.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(CliError::Usage(
                        "edges: must be strictly increasing".to_string(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Renders the histogram rows (header included, manifest comment first).
pub fn render(results: &ResultsFile, metric: Metric, bins: &BinSpec) -> Result<String, CliError> {
    results.require_sessions()?;
    bins.validate()?;

    match (metric, &results.result.session) {
        (Metric::SuccessRate, SessionConfig::Bankruptcy { .. }) => {
            return Err(CliError::Usage(
                "metric success-rate needs horizon-mode results, got bankruptcy mode".to_string(),
            ));
        }
        (Metric::Survival, SessionConfig::Horizon { .. }) => {
            return Err(CliError::Usage(
                "metric survival needs bankruptcy-mode results, got horizon mode".to_string(),
            ));
        }
        _ => {}
    }

    let manifest_json = serde_json::to_string(&results.manifest)
        .map_err(|e| CliError::Io(format!("serializing manifest: {e}")))?;
    let mut out = format!("# manifest {manifest_json}\ngroup,bin_lo,bin_hi,count\n");

    match metric {
        Metric::SuccessRate => {
            for policy in &results.result.policies {
                let successes =
                    policy.sessions.iter().filter(|s| s.final_balance >= 0).count() as f64;
                let rate = successes / policy.sessions.len() as f64;
                out.push_str(&format!("{},0,1,{rate}\n", policy.label));
            }
        }
        Metric::Survival => {
            let all: Vec<f64> = results
                .result
                .policies
                .iter()
                .flat_map(|p| p.sessions.iter().map(|s| s.rounds_played as f64))
                .collect();
            let lo = all.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let edges = match bins {
                BinSpec::Edges(edges) => edges.clone(),
                BinSpec::Count(n) => {
                    // degenerate all-equal range still gets one honest bin
                    let hi = if hi > lo { hi } else { lo + 1.0 };
                    let width = (hi - lo) / *n as f64;
                    (0..=*n).map(|i| lo + width * i as f64).collect()
                }
            };
            let last = edges.len() - 2;
            for policy in &results.result.policies {
                let mut counts = vec![0u64; edges.len() - 1];
                for s in &policy.sessions {
                    let v = s.rounds_played as f64;
                    for b in 0..counts.len() {
                        // half-open bins, except the last which is closed
                        let in_bin = v >= edges[b] && (v < edges[b + 1] || (b == last && v == edges[b + 1]));
                        if in_bin {
                            counts[b] += 1;
                            break;
                        }
                    }
                }
                for (b, count) in counts.iter().enumerate() {
                    out.push_str(&format!(
                        "{},{},{},{count}\n",
                        policy.label,
                        edges[b],
                        edges[b + 1]
                    ));
                }
            }
        }
    }
    Ok(out)
}
