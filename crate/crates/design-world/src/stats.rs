//! Kolmogorov-Smirnov two-sample testing over performance distributions and
//! the beneficial/detrimental strategy classification built on it.

use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum StatsError {
    #[error("sample is empty")]
    EmptySample,
    #[error("samples must be finite numbers")]
    NonFiniteSample,
    #[error("samples must be the same size ({n} vs {m})")]
    SampleSizeMismatch { n: usize, m: usize },
    #[error("need at least {min} radii, got {got}")]
    TooFewRadii { min: usize, got: usize },
    #[error("duplicate radius {0} across cells")]
    DuplicateRadius(f64),
    #[error("exact test limited to n + m <= {max}, got {got}")]
    TooLargeForExact { max: usize, got: usize },
}

/// Two-sample test outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    /// Supremum distance between the two empirical CDFs, in [0, 1].
    pub d: f64,
    /// Probability of a distance at least this large under the null.
    pub p: f64,
    pub n: usize,
    pub m: usize,
}

fn sorted_copy(sample: &[f64]) -> Result<Vec<f64>, StatsError> {
    if sample.is_empty() {
        return Err(StatsError::EmptySample);
    }
    if sample.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFiniteSample);
    }
    let mut out = sample.to_vec();
    out.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite values compare"));
    Ok(out)
}

/// Exact D statistic: one merged pass over both sorted samples, stepping the
/// right-continuous empirical CDFs through tied values together.
fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let t = a[i].min(b[j]);
        while i < n && a[i] == t {
            i += 1;
        }
        while j < m && b[j] == t {
            j += 1;
        }
        let diff = (i as f64 / n as f64 - j as f64 / m as f64).abs();
        d = d.max(diff);
    }
    d
}

/// Q(lambda) = 2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2), the asymptotic
/// tail probability, truncated once terms drop below 1e-8.
fn q_ks(lambda: f64) -> f64 {
    if lambda < 1e-8 {
        return 1.0;
    }
    let a = -2.0 * lambda * lambda;
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=10_000u32 {
        let term = sign * 2.0 * (a * f64::from(k * k)).exp();
        sum += term;
        if term.abs() < 1e-8 {
            break;
        }
        sign = -sign;
    }
    sum.clamp(f64::MIN_POSITIVE, 1.0)
}

/// Asymptotic p-value for an observed distance with the given sample sizes.
pub fn asymptotic_p(d: f64, n: usize, m: usize) -> f64 {
    let lambda = d * ((n * m) as f64 / (n + m) as f64).sqrt();
    q_ks(lambda)
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult, StatsError> {
    let a = sorted_copy(a)?;
    let b = sorted_copy(b)?;
    let d = ks_statistic(&a, &b);
    Ok(KsResult {
        d,
        p: asymptotic_p(d, a.len(), b.len()),
        n: a.len(),
        m: b.len(),
    })
}

/// Smallest D rejected at level `alpha` for the given sample sizes, found by
/// bisecting the monotone p(D) curve.
pub fn critical_value(n: usize, m: usize, alpha: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if asymptotic_p(mid, n, m) <= alpha {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

const EXACT_LIMIT: usize = 50;

/// Two-sample test with the exact permutation p-value, feasible for small
/// samples (n + m <= 50). Conditions on the pooled values, so ties are
/// handled exactly; the asymptotic variant remains the default.
pub fn ks_two_sample_exact(a: &[f64], b: &[f64]) -> Result<KsResult, StatsError> {
    let a = sorted_copy(a)?;
    let b = sorted_copy(b)?;
    let (n, m) = (a.len(), b.len());
    if n + m > EXACT_LIMIT {
        return Err(StatsError::TooLargeForExact {
            max: EXACT_LIMIT,
            got: n + m,
        });
    }

    // Group the pooled sample by distinct value; the ECDFs only step there.
    let mut pooled: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    pooled.sort_unstable_by(|x, y| x.partial_cmp(y).expect("finite values compare"));
    pooled.dedup();
    let group_sizes: Vec<(usize, usize)> = pooled
        .iter()
        .map(|&v| {
            (
                a.iter().filter(|&&x| x == v).count(),
                b.iter().filter(|&&x| x == v).count(),
            )
        })
        .collect();

    // Observed deviation on the integer scale |a_cum * m - b_cum * n|.
    let mut d_int: i64 = 0;
    let (mut a_cum, mut b_cum) = (0i64, 0i64);
    for &(ga, gb) in &group_sizes {
        a_cum += ga as i64;
        b_cum += gb as i64;
        d_int = d_int.max((a_cum * m as i64 - b_cum * n as i64).abs());
    }
    let d = d_int as f64 / (n as f64 * m as f64);

    // Count label assignments whose running deviation stays strictly below
    // the observed one; everything else is at least as extreme.
    let binom = pascal(n + m);
    let mut dp = vec![0u64; n + 1];
    dp[0] = 1;
    let mut total_seen = 0usize;
    for &(ga, gb) in &group_sizes {
        let g = ga + gb;
        total_seen += g;
        let mut next = vec![0u64; n + 1];
        for a_used in 0..=n {
            if dp[a_used] == 0 {
                continue;
            }
            for k in 0..=g.min(n - a_used) {
                let a_new = (a_used + k) as i64;
                let b_new = total_seen as i64 - a_new;
                if b_new < 0 || b_new > m as i64 {
                    continue;
                }
                if (a_new * m as i64 - b_new * n as i64).abs() >= d_int {
                    continue;
                }
                next[a_used + k] += dp[a_used] * binom[g][k];
            }
        }
        dp = next;
    }
    let below = dp[n] as f64;
    let all = binom[n + m][n] as f64;
    Ok(KsResult {
        d,
        p: (1.0 - below / all).clamp(0.0, 1.0),
        n,
        m,
    })
}

fn pascal(rows: usize) -> Vec<Vec<u64>> {
    let mut c = vec![vec![0u64; rows + 1]; rows + 1];
    for i in 0..=rows {
        c[i][0] = 1;
        for j in 1..=i {
            c[i][j] = c[i - 1][j - 1] + c[i - 1].get(j).copied().unwrap_or(0);
        }
    }
    c
}

/// Performance samples for both strategies at one radius setting.
#[derive(Debug, Clone, PartialEq)]
pub struct PerfCell {
    pub radius: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// Per-radius comparison feeding the classification. Direction is judged by
/// the mean difference; medians ride along as a secondary report.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusStats {
    pub radius: f64,
    pub ks: KsResult,
    pub mean_a: f64,
    pub mean_b: f64,
    pub mean_diff: f64,
    pub median_a: f64,
    pub median_b: f64,
}

impl RadiusStats {
    pub fn significant_at(&self, alpha: f64) -> bool {
        self.ks.p < alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Beneficial,
    Detrimental,
    Neutral,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Beneficial => write!(f, "beneficial"),
            Verdict::Detrimental => write!(f, "detrimental"),
            Verdict::Neutral => write!(f, "neutral"),
        }
    }
}

/// A strategy-vs-strategy verdict with its supporting per-radius evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    pub alpha: f64,
    pub support: Vec<RadiusStats>,
}

/// Significance level and radius count the verdict definitions use.
pub const ALPHA: f64 = 0.05;
pub const MIN_SIGNIFICANT_RADII: usize = 2;

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn median(xs: &[f64]) -> f64 {
    let mut sorted = xs.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite values compare"));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Classifies strategy A against strategy B: beneficial if the performance
/// difference is significant (p < .05) and positive at two or more radii,
/// detrimental symmetrically, neutral otherwise (including the degenerate
/// case of significant differences pointing both ways).
pub fn classify(cells: &[PerfCell]) -> Result<Classification, StatsError> {
    if cells.len() < MIN_SIGNIFICANT_RADII {
        return Err(StatsError::TooFewRadii {
            min: MIN_SIGNIFICANT_RADII,
            got: cells.len(),
        });
    }
    for (i, cell) in cells.iter().enumerate() {
        if cell.a.len() != cell.b.len() {
            return Err(StatsError::SampleSizeMismatch {
                n: cell.a.len(),
                m: cell.b.len(),
            });
        }
        if cells[..i].iter().any(|c| c.radius == cell.radius) {
            return Err(StatsError::DuplicateRadius(cell.radius));
        }
    }
    let mut support = Vec::with_capacity(cells.len());
    for cell in cells {
        let ks = ks_two_sample(&cell.a, &cell.b)?;
        let mean_a = mean(&cell.a);
        let mean_b = mean(&cell.b);
        support.push(RadiusStats {
            radius: cell.radius,
            ks,
            mean_a,
            mean_b,
            mean_diff: mean_a - mean_b,
            median_a: median(&cell.a),
            median_b: median(&cell.b),
        });
    }
    let positive = support
        .iter()
        .filter(|s| s.significant_at(ALPHA) && s.mean_diff > 0.0)
        .count();
    let negative = support
        .iter()
        .filter(|s| s.significant_at(ALPHA) && s.mean_diff < 0.0)
        .count();
    let verdict = if positive >= MIN_SIGNIFICANT_RADII && negative < MIN_SIGNIFICANT_RADII {
        Verdict::Beneficial
    } else if negative >= MIN_SIGNIFICANT_RADII && positive < MIN_SIGNIFICANT_RADII {
        Verdict::Detrimental
    } else {
        Verdict::Neutral
    };
    Ok(Classification {
        verdict,
        alpha: ALPHA,
        support,
    })
}

/// The data behind a difference plot: mean(A) - mean(B) per radius.
pub fn difference_series(cells: &[PerfCell]) -> Vec<(f64, f64)> {
    cells
        .iter()
        .map(|c| (c.radius, mean(&c.a) - mean(&c.b)))
        .collect()
}
