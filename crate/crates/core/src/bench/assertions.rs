use serde::{Deserialize, Serialize};

use super::{compare_conditions, BenchmarkReport};
use crate::Result;

/// A trend a benchmark report is expected to show. Strategies are named by
/// their report label, e.g. `dynamic_T1` or `speaker_listener`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TrendAssertion {
    /// λ strictly decreases along `strategies` for each `n`, and every
    /// adjacent pair differs at paired sign-test level `alpha`.
    Ordering {
        strategies: Vec<String>,
        n: Vec<usize>,
        #[serde(default)]
        noise_cv: f64,
        alpha: f64,
    },
    MinLambda {
        strategy: String,
        n: usize,
        #[serde(default)]
        noise_cv: f64,
        min: f64,
    },
    /// λ never increases with the obstacle count.
    MonotoneInN {
        strategies: Vec<String>,
        #[serde(default)]
        noise_cv: f64,
    },
    NotWorse {
        better: String,
        worse: String,
        n: Vec<usize>,
        #[serde(default)]
        noise_cv: f64,
    },
    /// `|λ(a) − λ(b)| <= max_gap`.
    GapAtMost {
        a: String,
        b: String,
        n: Vec<usize>,
        #[serde(default)]
        noise_cv: f64,
        max_gap: f64,
    },
    /// λ does not significantly increase as noise grows along `noise_cv`.
    MonotoneInCv {
        strategies: Vec<String>,
        n: Vec<usize>,
        noise_cv: Vec<f64>,
        alpha: f64,
    },
    /// `strategy` has the longest mean failure length among `among`.
    LongestFailures {
        strategy: String,
        among: Vec<String>,
        n: Vec<usize>,
        #[serde(default)]
        noise_cv: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssertionResult {
    pub description: String,
    pub passed: bool,
    pub details: Vec<String>,
}

pub fn check_assertions(
    report: &BenchmarkReport,
    assertions: &[TrendAssertion],
) -> Result<Vec<AssertionResult>> {
    assertions.iter().map(|a| check_one(report, a)).collect()
}

fn check_one(report: &BenchmarkReport, assertion: &TrendAssertion) -> Result<AssertionResult> {
    let mut details = Vec::new();
    let mut passed = true;
    let description;
    match assertion {
        TrendAssertion::Ordering {
            strategies,
            n,
            noise_cv,
            alpha,
        } => {
            description = format!("ordering {} (alpha {alpha})", strategies.join(" > "));
            for &n in n {
                for pair in strategies.windows(2) {
                    let a = report.find(&pair[0], n, *noise_cv)?;
                    let b = report.find(&pair[1], n, *noise_cv)?;
                    let c = compare_conditions(a, b)?;
                    let ok = c.delta_lambda > 0.0 && c.p_value < *alpha;
                    passed &= ok;
                    details.push(format!(
                        "n={n} {}={:.3} > {}={:.3}: p={:.2e} {}",
                        pair[0],
                        a.lambda,
                        pair[1],
                        b.lambda,
                        c.p_value,
                        verdict(ok)
                    ));
                }
            }
        }
        TrendAssertion::MinLambda {
            strategy,
            n,
            noise_cv,
            min,
        } => {
            description = format!("lambda({strategy}, n={n}) >= {min}");
            let c = report.find(strategy, *n, *noise_cv)?;
            passed = c.lambda >= *min;
            details.push(format!("lambda={:.3} {}", c.lambda, verdict(passed)));
        }
        TrendAssertion::MonotoneInN {
            strategies,
            noise_cv,
        } => {
            description = format!("lambda non-increasing in n for {}", strategies.join(", "));
            for s in strategies {
                let mut rows: Vec<_> = report
                    .conditions
                    .iter()
                    .filter(|c| &c.label == s && c.condition.noise_cv == *noise_cv)
                    .map(|c| (c.condition.n, c.lambda))
                    .collect();
                rows.sort_by_key(|r| r.0);
                let ok = rows.windows(2).all(|w| w[1].1 <= w[0].1);
                passed &= ok;
                let series: Vec<String> =
                    rows.iter().map(|(n, l)| format!("n={n}:{l:.3}")).collect();
                details.push(format!("{s}: {} {}", series.join(" "), verdict(ok)));
            }
        }
        TrendAssertion::NotWorse {
            better,
            worse,
            n,
            noise_cv,
        } => {
            description = format!("lambda({better}) >= lambda({worse})");
            for &n in n {
                let a = report.find(better, n, *noise_cv)?;
                let b = report.find(worse, n, *noise_cv)?;
                let ok = a.lambda >= b.lambda;
                passed &= ok;
                details.push(format!(
                    "n={n}: {:.3} vs {:.3} {}",
                    a.lambda,
                    b.lambda,
                    verdict(ok)
                ));
            }
        }
        TrendAssertion::GapAtMost {
            a,
            b,
            n,
            noise_cv,
            max_gap,
        } => {
            description = format!("|lambda({a}) - lambda({b})| <= {max_gap}");
            for &n in n {
                let x = report.find(a, n, *noise_cv)?;
                let y = report.find(b, n, *noise_cv)?;
                let gap = (x.lambda - y.lambda).abs();
                let ok = gap <= *max_gap;
                passed &= ok;
                details.push(format!("n={n}: gap {gap:.3} {}", verdict(ok)));
            }
        }
        TrendAssertion::MonotoneInCv {
            strategies,
            n,
            noise_cv,
            alpha,
        } => {
            description = format!("lambda non-increasing in cv (alpha {alpha})");
            for s in strategies {
                for &n in n {
                    for (i, &lo) in noise_cv.iter().enumerate() {
                        for &hi in &noise_cv[i + 1..] {
                            let quiet = report.find(s, n, lo)?;
                            let noisy = report.find(s, n, hi)?;
                            let c = compare_conditions(noisy, quiet)?;
                            let ok = !(c.delta_lambda > 0.0 && c.p_value < *alpha);
                            passed &= ok;
                            details.push(format!(
                                "{s} n={n} cv {lo}->{hi}: {:.3}->{:.3} p={:.2e} {}",
                                quiet.lambda,
                                noisy.lambda,
                                c.p_value,
                                verdict(ok)
                            ));
                        }
                    }
                }
            }
        }
        TrendAssertion::LongestFailures {
            strategy,
            among,
            n,
            noise_cv,
        } => {
            description = format!("longest failures for {strategy}");
            for &n in n {
                let target = report.find(strategy, n, *noise_cv)?.failure_mean_steps;
                let mut ok = target.is_some();
                let mut row = Vec::new();
                for s in among {
                    let l = report.find(s, n, *noise_cv)?.failure_mean_steps;
                    if let (Some(t), Some(x)) = (target, l) {
                        ok &= t >= x;
                    }
                    row.push(format!(
                        "{s}={}",
                        l.map_or("-".into(), |x| format!("{x:.1}"))
                    ));
                }
                passed &= ok;
                details.push(format!("n={n}: {} {}", row.join(" "), verdict(ok)));
            }
        }
    }
    Ok(AssertionResult {
        description,
        passed,
        details,
    })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}
