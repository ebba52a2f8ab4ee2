//! Report emission: per-run CSV, per-radius summary CSV, the difference
//! plot, and a plain-text verdict. Only the verdict carries a timestamp, so
//! the data files are byte-reproducible from the same seed.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use super::{difference_plot, HarnessError, SweepSummary};
use crate::dialogue::csv_header;
use crate::stats::RadiusStats;

#[derive(Debug, Clone)]
pub struct ReportPaths {
    pub runs_csv: PathBuf,
    pub summary_csv: PathBuf,
    pub difference_svg: PathBuf,
    pub verdict_txt: PathBuf,
}

fn write(path: &Path, contents: &str) -> Result<(), HarnessError> {
    fs::write(path, contents).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn direction(stat: &RadiusStats) -> &'static str {
    if stat.mean_diff > 0.0 {
        "positive"
    } else if stat.mean_diff < 0.0 {
        "negative"
    } else {
        "zero"
    }
}

pub fn runs_csv_text(summary: &SweepSummary) -> String {
    let mut out = String::from(csv_header());
    out.push('\n');
    for run in &summary.runs {
        out.push_str(&run.csv);
        out.push('\n');
    }
    out
}

pub fn summary_csv_text(summary: &SweepSummary) -> String {
    let mut out = String::from(
        "radius,mean_a,mean_b,mean_diff,median_a,median_b,d_statistic,p_value,direction,significant\n",
    );
    for stat in &summary.classification.support {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            stat.radius,
            stat.mean_a,
            stat.mean_b,
            stat.mean_diff,
            stat.median_a,
            stat.median_b,
            stat.ks.d,
            stat.ks.p,
            direction(stat),
            stat.significant_at(summary.classification.alpha)
        ));
    }
    out
}

pub fn verdict_text(summary: &SweepSummary) -> String {
    let c = &summary.classification;
    let mut out = String::new();
    out.push_str(&format!("verdict: {}\n", c.verdict));
    out.push_str(&format!(
        "comparison: {} vs {}\n",
        summary.config.strategy_a, summary.config.strategy_b
    ));
    out.push_str(&format!(
        "task: {}, commcost {}, infcost {}, retcost {}\n",
        summary.config.task,
        summary.config.costs.commcost,
        summary.config.costs.infcost,
        summary.config.costs.retcost
    ));
    let significant: Vec<String> = c
        .support
        .iter()
        .filter(|s| s.significant_at(c.alpha))
        .map(|s| format!("{} ({})", s.radius, direction(s)))
        .collect();
    if significant.is_empty() {
        out.push_str(&format!("significant radii (p < {}): none\n", c.alpha));
    } else {
        out.push_str(&format!(
            "significant radii (p < {}): {}\n",
            c.alpha,
            significant.join(", ")
        ));
    }
    out.push_str(&format!(
        "dialogues: {} ({} radii x 2 strategies x {} runs)\n",
        summary.dialogue_count(),
        summary.cells.len(),
        summary.config.runs
    ));
    out.push_str(&format!(
        "provenance: config_hash={:016x} master_seed={} version={}\n",
        summary.provenance.config_hash, summary.provenance.master_seed, summary.provenance.version
    ));
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    out.push_str(&format!("generated_at: {timestamp}\n"));
    out
}

/// Writes `runs.csv`, `summary.csv`, `difference.svg`, and `verdict.txt`
/// into the output directory, creating it if needed.
pub fn emit_reports(summary: &SweepSummary, out_dir: &Path) -> Result<ReportPaths, HarnessError> {
    fs::create_dir_all(out_dir).map_err(|source| HarnessError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let paths = ReportPaths {
        runs_csv: out_dir.join("runs.csv"),
        summary_csv: out_dir.join("summary.csv"),
        difference_svg: out_dir.join("difference.svg"),
        verdict_txt: out_dir.join("verdict.txt"),
    };
    write(&paths.runs_csv, &runs_csv_text(summary))?;
    write(&paths.summary_csv, &summary_csv_text(summary))?;
    let series = crate::stats::difference_series(&summary.cells);
    let title = format!(
        "{} minus {} ({})",
        summary.config.strategy_a, summary.config.strategy_b, summary.config.task
    );
    write(&paths.difference_svg, &difference_plot(&series, &title))?;
    write(&paths.verdict_txt, &verdict_text(summary))?;
    Ok(paths)
}
