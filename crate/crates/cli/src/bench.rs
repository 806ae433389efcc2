use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};

use rolecomms::bench::{
    check_assertions, run_benchmark, write_report_csv, write_table_csv, Condition,
};

use crate::config;
use crate::{BenchArgs, EXIT_ASSERT};

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

pub fn run(args: &BenchArgs, sweep_cv: Option<&[f64]>) -> Result<ExitCode> {
    let mut cfg = config::load(&args.config)?;
    if let Some(g) = args.games_per_condition {
        cfg.games_per_condition = g;
    }
    if let Some(s) = args.base_seed {
        cfg.base_seed = s;
    }
    if let Some(cvs) = sweep_cv {
        let base = cfg.all_conditions();
        cfg.grid.clear();
        cfg.conditions.clear();
        for &cv in cvs {
            for c in &base {
                let c = Condition { noise_cv: cv, ..*c };
                if !cfg.conditions.contains(&c) {
                    cfg.conditions.push(c);
                }
            }
        }
    }
    let bench = cfg.benchmark()?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;

    log::info!(
        "running {} conditions x {} games",
        bench.conditions.len(),
        bench.games_per_condition
    );
    let report = run_benchmark(&bench, args.threads)?;

    let mut json = create(&args.out, "report.json")?;
    serde_json::to_writer_pretty(&mut json, &report)?;
    write_report_csv(&report, create(&args.out, "report.csv")?)?;
    write_table_csv(
        &report,
        |c| Some(c.lambda),
        create(&args.out, "lambda_table.csv")?,
    )?;
    write_table_csv(
        &report,
        |c| c.failure_mean_steps,
        create(&args.out, "failure_steps_table.csv")?,
    )?;

    for c in &report.conditions {
        println!(
            "{:<18} n={:<2} cv={:<6} lambda={:.3} failure_mean_steps={}",
            c.label,
            c.condition.n,
            c.condition.noise_cv,
            c.lambda,
            c.failure_mean_steps
                .map_or("-".into(), |m| format!("{m:.1}"))
        );
    }
    let results = check_assertions(&report, &cfg.assertions)?;
    serde_json::to_writer_pretty(create(&args.out, "assertions.json")?, &results)?;
    let mut failed = false;
    for r in &results {
        println!(
            "[{}] {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.description
        );
        for d in &r.details {
            println!("    {d}");
        }
        failed |= !r.passed;
    }
    println!(
        "seed={} fingerprint={}",
        report.config.base_seed, report.fingerprint
    );
    Ok(if failed {
        ExitCode::from(EXIT_ASSERT)
    } else {
        ExitCode::SUCCESS
    })
}
