//! Acceptance suite. Each criterion is one test and writes one `[PASS]` or
//! `[FAIL]` line to stderr, bypassing the harness capture so the lines show
//! up in every run.
//!
//! Criteria listed in `KNOWN_FAILING` are expected to fail with the committed
//! configuration. Their tests print `[FAIL]` and assert that they still fail,
//! so a change that fixes one is noticed and the list gets updated.

#![allow(clippy::needless_range_loop)]

use std::io::Write;
use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rolecomms::bench::{
    compare_conditions, run_benchmark, write_report_csv, BenchmarkReport, RunConfig,
};
use rolecomms::discrete_roles::{
    listener_policy_exact, listener_posterior, speaker_policy_exact, Belief, FinitePolicy,
};
use rolecomms::linear_roles::{
    alternating_noisy_action, centralized_action, expected_kl, noisy_listener_action,
    optimal_variances, rotation_action, rotation_converges, stability_report, NaiveMap,
    RoleAllocation, StateTrajectory, TeamLinearSystem, VariancePair,
};
use rolecomms::numerics::{Rng, SmallMatrix, Vec2};
use rolecomms::potential_field::{agent_velocity, Attractor, FieldParams, Obstacle};
use rolecomms::table_sim::{infer_obstacle, InferenceConfig};

const KNOWN_FAILING: &[u32] = &[8];

fn conclude(id: u32, passed: bool, summary: &str) {
    let status = if passed { "PASS" } else { "FAIL" };
    let known = KNOWN_FAILING.contains(&id);
    let note = if known && !passed {
        " (known failure)"
    } else {
        ""
    };
    let line = format!("[{status}] criterion {id:>2}: {summary}{note}\n");
    let _ = std::io::stderr().write_all(line.as_bytes());
    if known {
        assert!(
            !passed,
            "criterion {id} now passes; remove it from KNOWN_FAILING"
        );
    } else {
        assert!(passed, "criterion {id} failed: {summary}");
    }
}

fn random_matrix(rng: &mut Rng, n: usize, lo: f64, hi: f64) -> SmallMatrix {
    let data = (0..n * n).map(|_| rng.uniform_range(lo, hi)).collect();
    SmallMatrix::new(n, n, data).unwrap()
}

fn random_vec(rng: &mut Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.uniform_range(lo, hi)).collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn criterion_01_speaker_listener_is_unstable() {
    let start = Instant::now();
    let mut rng = Rng::new(101);
    let mut worst = f64::INFINITY;
    let mut oracle_gap = 0.0_f64;
    for _ in 0..1000 {
        let k = random_matrix(&mut rng, 2, -10.0, 10.0);
        let k11 = k[(0, 0)];
        let sys = TeamLinearSystem::speaker_listener_counterexample(k).unwrap();
        let r = stability_report(&sys, RoleAllocation::SpeakerListener { speaker: 0 }).unwrap();
        worst = worst.min(r.max_real_part);
        // Closed loop [[1, 1], [-K11, 1]] has eigenvalues 1 +- sqrt(-K11).
        let expected = 1.0 + (-k11).max(0.0).sqrt();
        oracle_gap = oracle_gap.max((r.max_real_part - expected).abs() / expected);
    }
    let elapsed = start.elapsed();
    let passed = worst >= 1.0 - 1e-9 && oracle_gap < 1e-9 && elapsed < Duration::from_secs(1);
    conclude(
        1,
        passed,
        &format!(
            "min max-real-part {worst:.12} over 1000 gains, oracle gap {oracle_gap:.1e}, {elapsed:.2?}"
        ),
    );
}

#[test]
fn criterion_02_rotation_recovers_centralized_action() {
    let start = Instant::now();
    let mut rng = Rng::new(202);
    let mut constant_err = 0.0_f64;
    for n in 2..=4 {
        for _ in 0..200 {
            let k = random_matrix(&mut rng, n, -2.0, 2.0);
            let s = random_vec(&mut rng, n, -2.0, 2.0);
            let naive = random_vec(&mut rng, n, -2.0, 2.0);
            let mut mean = vec![0.0; n];
            for p in 0..n {
                let a = rotation_action(&k, &s, p, &naive).unwrap();
                mean.iter_mut().zip(a).for_each(|(m, v)| *m += v / n as f64);
            }
            let a_star = centralized_action(&k, &s).unwrap();
            constant_err = constant_err.max(max_abs_diff(&mean, &a_star));
        }
    }

    let dts: Vec<f64> = (0..6).map(|i| 0.1 / f64::from(1u32 << i)).collect();
    let mut ratios = Vec::new();
    for n in 2..=4 {
        let k = random_matrix(&mut rng, n, -2.0, 2.0);
        let drifts = [
            StateTrajectory::Linear {
                s0: random_vec(&mut rng, n, -1.0, 1.0),
                rate: random_vec(&mut rng, n, -1.0, 1.0),
            },
            StateTrajectory::Sinusoid {
                offset: random_vec(&mut rng, n, -1.0, 1.0),
                amplitude: random_vec(&mut rng, n, 0.2, 1.0),
                frequency: random_vec(&mut rng, n, 0.1, 0.5),
            },
        ];
        for traj in &drifts {
            let rows =
                rotation_converges(&k, &NaiveMap::identity(n), &|t| traj.at(t), 5.0, &dts).unwrap();
            ratios.extend(
                rows.windows(2)
                    .map(|w| w[1].max_deviation / w[0].max_deviation),
            );
        }
    }
    let elapsed = start.elapsed();
    let ratio_ok = ratios.iter().all(|r| (0.4..=0.6).contains(r));
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), r| {
        (lo.min(*r), hi.max(*r))
    });
    let passed = constant_err < 1e-12 && ratio_ok && elapsed < Duration::from_secs(5);
    conclude(
        2,
        passed,
        &format!(
            "constant-state cycle error {constant_err:.1e}, halving ratios in [{lo:.4}, {hi:.4}], {elapsed:.2?}"
        ),
    );
}

#[test]
fn criterion_03_noisy_alternation_is_unbiased() {
    let start = Instant::now();
    let mut rng = Rng::new(303);

    // Direct substitution: the listener decodes s_j = -(emitted + n_j) / K_jj
    // and the cycle mean of its overshoot equals its centralized target.
    let mut structure_err = 0.0_f64;
    for _ in 0..1000 {
        let k = random_matrix(&mut rng, 2, -3.0, 3.0);
        if k[(0, 0)].abs() < 0.1 || k[(1, 1)].abs() < 0.1 {
            continue;
        }
        let s = random_vec(&mut rng, 2, -2.0, 2.0);
        let noise = random_vec(&mut rng, 2, -1.0, 1.0);
        let s1_hat = s[0] - noise[0] / k[(0, 0)];
        let s2_hat = s[1] - noise[1] / k[(1, 1)];
        let direct = [
            -k[(0, 0)] * s[0] - k[(0, 1)] * s2_hat,
            -k[(1, 0)] * s1_hat - k[(1, 1)] * s[1],
        ];
        let scale = 1.0 + direct.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let alt = alternating_noisy_action(&k, &s, &noise).unwrap();
        let closed = noisy_listener_action(&k, &s, &noise).unwrap();
        structure_err = structure_err
            .max(max_abs_diff(&alt, &direct) / scale)
            .max(max_abs_diff(&closed, &direct) / scale);
    }

    const SAMPLES: usize = 100_000;
    let mut worst_z = 0.0_f64;
    for _ in 0..5 {
        let k = SmallMatrix::from_rows(&[
            [rng.uniform_range(0.5, 3.0), rng.uniform_range(-2.0, 2.0)],
            [rng.uniform_range(-2.0, 2.0), rng.uniform_range(0.5, 3.0)],
        ])
        .unwrap();
        let s = random_vec(&mut rng, 2, -2.0, 2.0);
        let sd = random_vec(&mut rng, 2, 0.1, 1.0);
        let mut sum = [0.0; 2];
        let mut sum_sq = [0.0; 2];
        for _ in 0..SAMPLES {
            let noise = [sd[0] * rng.standard_normal(), sd[1] * rng.standard_normal()];
            let a = alternating_noisy_action(&k, &s, &noise).unwrap();
            for i in 0..2 {
                sum[i] += a[i];
                sum_sq[i] += a[i] * a[i];
            }
        }
        let target = centralized_action(&k, &s).unwrap();
        for i in 0..2 {
            let mean = sum[i] / SAMPLES as f64;
            let var = (sum_sq[i] - SAMPLES as f64 * mean * mean) / (SAMPLES as f64 - 1.0);
            let se = var.sqrt() / (SAMPLES as f64).sqrt();
            worst_z = worst_z.max((mean - target[i]).abs() / se);
        }
    }
    let elapsed = start.elapsed();
    let passed = structure_err < 1e-12 && worst_z < 4.0 && elapsed < Duration::from_secs(5);
    conclude(
        3,
        passed,
        &format!(
            "structure error {structure_err:.1e}, worst |mean - a*| = {worst_z:.2} standard errors, {elapsed:.2?}"
        ),
    );
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

#[test]
fn criterion_04_optimal_variances_minimize_kl() {
    let start = Instant::now();
    let mut rng = Rng::new(404);
    let mut all_ok = true;
    let mut worst_cells = 0.0_f64;
    let mut worst_grad = 0.0_f64;
    for draw in 0..20 {
        let speaker = draw % 2;
        let listener = 1 - speaker;
        let mut k = random_matrix(&mut rng, 2, -3.0, 3.0);
        while k[(speaker, speaker)].abs() < 0.2 {
            k = random_matrix(&mut rng, 2, -3.0, 3.0);
        }
        let w = [rng.uniform_range(0.2, 3.0), rng.uniform_range(0.2, 3.0)];
        let prior = rng.uniform_range(0.1, 2.0);
        let kl = |v: [f64; 2]| {
            let vars = VariancePair {
                sigma1_sq: v[0],
                sigma2_sq: v[1],
            };
            expected_kl(&k, vars, w[0], w[1], prior, speaker).unwrap()
        };

        let grids = [
            linspace(0.005 * w[0], 2.0 * w[0], 200),
            linspace(0.005 * w[1], 2.0 * w[1], 200),
        ];
        let cells = [grids[0][1] - grids[0][0], grids[1][1] - grids[1][0]];
        let mut best = (f64::INFINITY, [0.0; 2]);
        for &x in &grids[0] {
            for &y in &grids[1] {
                let f = kl([x, y]);
                if f < best.0 {
                    best = (f, [x, y]);
                }
            }
        }

        let opt = optimal_variances(&k, w[0], w[1], speaker).unwrap();
        let o = [opt.sigma1_sq, opt.sigma2_sq];
        for i in 0..2 {
            let cells_off = (o[i] - best.1[i]).abs() / cells[i];
            worst_cells = worst_cells.max(cells_off);
            all_ok &= cells_off <= 1.0;
        }
        all_ok &= o[speaker] <= w[speaker] && o[listener] == w[listener];

        for i in 0..2 {
            let h = 1e-5 * o[i];
            let (mut up, mut down) = (o, o);
            up[i] += h;
            down[i] -= h;
            let g = (kl(up) - kl(down)) / (2.0 * h);
            worst_grad = worst_grad.max(g.abs());
        }
    }
    let elapsed = start.elapsed();
    let passed = all_ok && worst_grad < 1e-4 && elapsed < Duration::from_secs(10);
    conclude(
        4,
        passed,
        &format!(
            "20 draws, worst offset {worst_cells:.2} grid cells, worst |grad| {worst_grad:.1e}, {elapsed:.2?}"
        ),
    );
}

fn random_dist(rng: &mut Rng, n: usize, allow_zeros: bool) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..n)
            .map(|_| {
                if allow_zeros && rng.uniform() < 0.2 {
                    0.0
                } else {
                    rng.uniform()
                }
            })
            .collect();
        let total: f64 = w.iter().sum();
        if total > 0.0 {
            return w.into_iter().map(|x| x / total).collect();
        }
    }
}

fn tv(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let total: f64 = v.iter().sum();
    v.iter().map(|x| x / total).collect()
}

#[test]
fn criterion_05_role_policies_match_enumeration() {
    let mut rng = Rng::new(505);
    let mut worst = 0.0_f64;
    let mut checked = 0usize;
    let pick = |rng: &mut Rng, hi: u64| 1 + (rng.next_u64() % hi) as usize;
    for _ in 0..100 {
        let (n1, n2) = (pick(&mut rng, 6), pick(&mut rng, 6));
        let (m1, m2) = (pick(&mut rng, 4), pick(&mut rng, 4));
        let joint = random_dist(&mut rng, n1 * n2, true);
        let p = |s1: usize, s2: usize| joint[s1 * n2 + s2];
        // pi1*(a1 | s1, s2) and pi2*(a2 | s2, s1).
        let pi1: Vec<Vec<f64>> = (0..n1 * n2)
            .map(|_| random_dist(&mut rng, m1, true))
            .collect();
        let pi2: Vec<Vec<f64>> = (0..n2 * n1)
            .map(|_| random_dist(&mut rng, m2, true))
            .collect();
        let c1 = FinitePolicy::new(vec![n1, n2], m1, pi1.concat()).unwrap();
        let c2 = FinitePolicy::new(vec![n2, n1], m2, pi2.concat()).unwrap();

        // Speaker: condition the joint table of (s1, s2, a1) on s1.
        let mut brute_speaker = vec![vec![0.0; m1]; n1];
        let mut impl_speaker = Vec::new();
        for s1 in 0..n1 {
            let marginal: f64 = (0..n2).map(|s2| p(s1, s2)).sum();
            if marginal == 0.0 {
                // Unreachable own state: any policy row is consistent.
                let row = vec![1.0 / m1 as f64; m1];
                brute_speaker[s1] = row.clone();
                impl_speaker.extend(row);
                continue;
            }
            for s2 in 0..n2 {
                for a1 in 0..m1 {
                    brute_speaker[s1][a1] += p(s1, s2) * pi1[s1 * n2 + s2][a1] / marginal;
                }
            }
            let belief = Belief::new((0..n2).map(|s2| p(s1, s2) / marginal).collect()).unwrap();
            let got = speaker_policy_exact(&c1, &belief, s1).unwrap();
            worst = worst.max(tv(&got, &brute_speaker[s1]));
            checked += 1;
            impl_speaker.extend(got);
        }
        let speaker_table = FinitePolicy::new(vec![n1], m1, impl_speaker).unwrap();

        // Listener: condition the joint table of (s1, s2, a1, a2) on (s2, a1).
        for s2 in 0..n2 {
            let marginal: f64 = (0..n1).map(|s1| p(s1, s2)).sum();
            if marginal == 0.0 {
                continue;
            }
            let prior = Belief::new((0..n1).map(|s1| p(s1, s2) / marginal).collect()).unwrap();
            for a1 in 0..m1 {
                let mut brute = vec![0.0; m2];
                for s1 in 0..n1 {
                    for (a2, b) in brute.iter_mut().enumerate() {
                        *b += p(s1, s2) * brute_speaker[s1][a1] * pi2[s2 * n1 + s1][a2];
                    }
                }
                let evidence: f64 = (0..n1).map(|s1| p(s1, s2) * brute_speaker[s1][a1]).sum();
                if evidence == 0.0 {
                    continue;
                }
                let brute = normalized(&brute);
                let posterior = listener_posterior(&prior, a1, &speaker_table).unwrap();
                let got = listener_policy_exact(&c2, &posterior, s2).unwrap();
                worst = worst.max(tv(&got, &brute));
                checked += 1;
            }
        }
    }
    conclude(
        5,
        worst < 1e-10,
        &format!("100 instances, {checked} policy rows, max TV {worst:.1e}"),
    );
}

#[test]
fn criterion_06_inference_round_trip() {
    // Unclamped speed so the observed velocity carries the full field.
    let params = FieldParams {
        w_att: 1.0,
        w_rep: 4.0,
        w_v: 0.35,
        rho0: 3.0,
        v_max: f64::INFINITY,
    };
    let config = InferenceConfig::default();
    let goal = [Attractor::new(Vec2::new(50.0, 0.0))];
    let radius = 1.0;
    let mut rng = Rng::new(606);
    let mut worst = 0.0_f64;
    let mut recovered = 0;
    for _ in 0..100 {
        let q = Vec2::new(rng.uniform_range(0.0, 40.0), rng.uniform_range(-6.0, 6.0));
        let rho = rng.uniform_range(0.05, 0.99 * params.rho0);
        let dir = Vec2::from_angle(rng.uniform_range(0.0, std::f64::consts::TAU));
        let obstacle = Obstacle::new(q - dir * (rho + radius), radius).unwrap();
        let v = agent_velocity(q, &goal, [&obstacle], &params);
        if let Some(inferred) = infer_obstacle(v, q, &goal, &params, radius, &config).unwrap() {
            recovered += 1;
            worst = worst.max(inferred.obstacle.center.distance(obstacle.center));
        } else {
            worst = f64::INFINITY;
        }
    }
    conclude(
        6,
        recovered == 100 && worst < 10.0 * config.tol,
        &format!("{recovered}/100 placements recovered, max center error {worst:.1e}"),
    );
}

fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn load_config(name: &str) -> RunConfig {
    let text = std::fs::read_to_string(config_path(name)).unwrap();
    RunConfig::from_json(&text).unwrap()
}

struct Run {
    report: BenchmarkReport,
    elapsed: Duration,
}

fn run(name: &str, threads: Option<usize>) -> Run {
    let config = load_config(name).benchmark().unwrap();
    let start = Instant::now();
    let report = run_benchmark(&config, threads).unwrap();
    Run {
        report,
        elapsed: start.elapsed(),
    }
}

fn role_ordering() -> &'static Run {
    static CELL: OnceLock<Run> = OnceLock::new();
    CELL.get_or_init(|| run("role_ordering.json", None))
}

fn explicit_vs_roles() -> &'static Run {
    static CELL: OnceLock<Run> = OnceLock::new();
    CELL.get_or_init(|| run("explicit_vs_roles.json", None))
}

fn noise_sweep() -> &'static Run {
    static CELL: OnceLock<Run> = OnceLock::new();
    CELL.get_or_init(|| run("noise_sweep.json", None))
}

const ROLE_ORDER: [&str; 5] = [
    "dynamic_T1",
    "dynamic_T4",
    "speaker_listener",
    "dynamic_T16",
    "speaker_speaker",
];
const NS: [usize; 3] = [2, 4, 8];

#[test]
fn criterion_07_role_ordering() {
    let run = role_ordering();
    let r = &run.report;
    let mut problems = Vec::new();
    let mut worst_p = 0.0_f64;
    for n in NS {
        for pair in ROLE_ORDER.windows(2) {
            let a = r.find(pair[0], n, 0.0).unwrap();
            let b = r.find(pair[1], n, 0.0).unwrap();
            let c = compare_conditions(a, b).unwrap();
            worst_p = worst_p.max(c.p_value);
            if !(c.delta_lambda > 0.0 && c.p_value < 0.05) {
                problems.push(format!(
                    "n={n} {} {:.3} vs {} {:.3} p={:.2e}",
                    pair[0], a.lambda, pair[1], b.lambda, c.p_value
                ));
            }
        }
    }
    let top = r.find("dynamic_T1", 2, 0.0).unwrap().lambda;
    if top < 0.9 {
        problems.push(format!("dynamic_T1 n=2 lambda {top:.3} < 0.9"));
    }
    for label in ROLE_ORDER {
        let lambdas: Vec<f64> = NS
            .iter()
            .map(|&n| r.find(label, n, 0.0).unwrap().lambda)
            .collect();
        if lambdas.windows(2).any(|w| w[1] > w[0]) {
            problems.push(format!("{label} not monotone in n: {lambdas:?}"));
        }
    }
    if run.elapsed > Duration::from_secs(600) {
        problems.push(format!("runtime {:.1?}", run.elapsed));
    }
    let summary = if problems.is_empty() {
        format!(
            "ordering holds at n=2,4,8 (worst p {worst_p:.1e}), T1 n=2 lambda {top:.3}, {:.1?}",
            run.elapsed
        )
    } else {
        problems.join("; ")
    };
    conclude(7, problems.is_empty(), &summary);
}

#[test]
fn criterion_08_explicit_vs_dynamic_spectrum() {
    let r = &explicit_vs_roles().report;
    let mut problems = Vec::new();
    let mut worst_gap = f64::NEG_INFINITY;
    for t in [1, 4, 16] {
        for n in NS {
            let e = r.find(&format!("explicit_T{t}"), n, 0.0).unwrap().lambda;
            let d = r.find(&format!("dynamic_T{t}"), n, 0.0).unwrap().lambda;
            worst_gap = worst_gap.max(e - d);
            if e < d {
                problems.push(format!("T={t} n={n} explicit {e:.3} < dynamic {d:.3}"));
            }
            if e - d > 0.15 {
                problems.push(format!("T={t} n={n} gap {:.3}", e - d));
            }
        }
    }
    let summary = if problems.is_empty() {
        format!("explicit >= dynamic everywhere, largest gap {worst_gap:.3}")
    } else {
        format!("largest gap {worst_gap:.3}; {}", problems.join("; "))
    };
    conclude(8, problems.is_empty(), &summary);
}

#[test]
fn criterion_09_noise_robustness() {
    let r = &noise_sweep().report;
    let cvs = [0.001, 0.01, 0.1];
    let labels = [
        "explicit_T0",
        "dynamic_T1",
        "dynamic_T4",
        "dynamic_T16",
        "speaker_listener",
        "speaker_speaker",
    ];
    let mut problems = Vec::new();
    let mut gaps = Vec::new();
    for n in NS {
        let e = r.find("explicit_T0", n, 0.1).unwrap().lambda;
        let d = r.find("dynamic_T1", n, 0.1).unwrap().lambda;
        gaps.push(format!("{:.3}", e - d));
        if (e - d).abs() > 0.15 {
            problems.push(format!("n={n} explicit_T0 {e:.3} vs dynamic_T1 {d:.3}"));
        }
        for label in labels {
            for (i, &lo) in cvs.iter().enumerate() {
                for &hi in &cvs[i + 1..] {
                    let a = r.find(label, n, hi).unwrap();
                    let b = r.find(label, n, lo).unwrap();
                    let c = compare_conditions(a, b).unwrap();
                    if c.delta_lambda > 0.0 && c.p_value < 0.05 {
                        problems.push(format!(
                            "{label} n={n} rises from cv {lo} to {hi} (p={:.2e})",
                            c.p_value
                        ));
                    }
                }
            }
        }
    }
    let summary = if problems.is_empty() {
        format!(
            "cv=0.1 explicit_T0 - dynamic_T1 gaps {} at n=2,4,8; no significant rise with cv",
            gaps.join("/")
        )
    } else {
        problems.join("; ")
    };
    conclude(9, problems.is_empty(), &summary);
}

#[test]
fn criterion_10_dynamic_t1_failures_are_longest() {
    let r = &role_ordering().report;
    let mut problems = Vec::new();
    let mut lengths = Vec::new();
    for n in NS {
        let mean = |label: &str| r.find(label, n, 0.0).unwrap().failure_mean_steps;
        let Some(t1) = mean("dynamic_T1") else {
            problems.push(format!("n={n}: dynamic_T1 never failed"));
            continue;
        };
        lengths.push(format!("{t1:.1}"));
        for label in &ROLE_ORDER[1..] {
            if let Some(other) = mean(label) {
                if other > t1 {
                    problems.push(format!("n={n}: {label} failures last {other:.1} > {t1:.1}"));
                }
            }
        }
    }
    let summary = if problems.is_empty() {
        format!(
            "dynamic_T1 mean failure length {} at n=2,4,8 is the maximum",
            lengths.join("/")
        )
    } else {
        problems.join("; ")
    };
    conclude(10, problems.is_empty(), &summary);
}

fn report_bytes(r: &BenchmarkReport) -> (Vec<u8>, Vec<u8>) {
    let json = serde_json::to_vec_pretty(r).unwrap();
    let mut csv = Vec::new();
    write_report_csv(r, &mut csv).unwrap();
    (json, csv)
}

#[test]
fn criterion_11_reports_independent_of_worker_count() {
    let mut mismatches = Vec::new();
    let cases: [(&str, &Run); 3] = [
        ("role_ordering.json", role_ordering()),
        ("explicit_vs_roles.json", explicit_vs_roles()),
        ("noise_sweep.json", noise_sweep()),
    ];
    for (name, reference) in cases {
        let expected = report_bytes(&reference.report);
        for threads in [1, 4] {
            if report_bytes(&run(name, Some(threads)).report) != expected {
                mismatches.push(format!("{name} with {threads} threads"));
            }
        }
    }
    let summary = if mismatches.is_empty() {
        "role_ordering, explicit_vs_roles and noise_sweep reports byte-identical with 1, 4 and default workers".to_string()
    } else {
        format!("reports differ: {}", mismatches.join(", "))
    };
    conclude(11, mismatches.is_empty(), &summary);
}
