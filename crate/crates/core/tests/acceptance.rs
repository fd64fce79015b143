//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use complab::oracle::Oracle;
use complab::theorems::checks::*;

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Duration,
    pass: bool,
    elapsed: Duration,
    summary: String,
}

/// Runs criteria 1-8 against a fresh oracle, returning their JSON payloads.
fn run_all(verbose: bool) -> (Vec<Criterion>, Vec<String>) {
    let oracle = Arc::new(Oracle::default());
    let mut out = Vec::new();
    let mut payloads = Vec::new();
    let mut record = |id, name, limit_s: u64, f: &dyn Fn() -> (bool, String, String)| {
        let start = Instant::now();
        let (pass, summary, json) = f();
        let c = Criterion {
            id,
            name,
            limit: Duration::from_secs(limit_s),
            pass,
            elapsed: start.elapsed(),
            summary,
        };
        if verbose {
            report(&c);
        }
        out.push(c);
        payloads.push(json);
    };

    record(1, "machine totality and Print bound", 60, &|| {
        let r = check_machine(14, 6, 10);
        let s = format!("{} executions, max {} steps", r.executions, r.max_steps);
        (r.pass, s, json(&r))
    });
    record(2, "oracle soundness", 60, &|| {
        let r = check_oracle(&oracle, 10).unwrap();
        let s = format!(
            "{} strings, C(x)-|x| histogram {:?}",
            r.strings, r.excess_histogram
        );
        (r.pass, s, json(&r))
    });
    record(3, "A-set equals random strings", 60, &|| {
        let r = check_a_set_identity(&oracle, 8).unwrap();
        let sizes: Vec<_> = r.rows.iter().map(|row| row.a_set_size).collect();
        (r.pass, format!("sizes {sizes:?}"), json(&r))
    });
    record(4, "search compressor for m <= 6, n_max = 8", 120, &|| {
        let r = check_theorem1(&oracle, 6, 8, 2).unwrap();
        let slack: Vec<_> = r
            .rows
            .iter()
            .map(|row| row.corollary_slack.unwrap_or(0))
            .collect();
        (r.pass, format!("corollary slack per m {slack:?}"), json(&r))
    });
    record(
        5,
        "lower-bound mechanism, m <= 4, n <= 5, |q| <= 10",
        300,
        &|| {
            let r = check_theorem2(&oracle, 4, 5, 10).unwrap();
            let v: usize = r.rows.iter().map(|row| row.violations).sum();
            let s = format!(
                "{} instances, {v} short outputs, {} counterexamples",
                r.rows.len(),
                r.counterexamples
            );
            (r.pass, s, json(&r))
        },
    );
    record(6, "extraction of the first random string", 60, &|| {
        let r = check_extraction(&oracle, 6, 6).unwrap();
        let s = format!(
            "{} instances, {} with t' >= BB(m), {} failures",
            r.instances,
            r.conditioned,
            r.failures.len()
        );
        (r.pass, s, json(&r))
    });
    record(7, "best codec round trip and expansion", 60, &|| {
        let r = check_codecs(12, 10_000, 256, 1);
        let s = format!("{} strings, max expansion {}", r.checked, r.max_expansion);
        (r.pass, s, json(&r))
    });
    record(8, "distinguisher at l = 16, L = 64", 60, &|| {
        let r = check_distinguisher(16, 64, 1000, 1, 0.3).unwrap();
        let s = format!(
            "uniform {:.3}, prg {:.3}, advantage {:.3}",
            r.report.accept_rate_uniform, r.report.accept_rate_prg, r.report.advantage
        );
        (r.pass, s, json(&r))
    });
    (out, payloads)
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("reports serialise")
}

fn report(c: &Criterion) {
    let ok = c.pass && c.elapsed <= c.limit;
    println!(
        "criterion {} {}: {} ({:.2}s, limit {}s) {}",
        c.id,
        if ok { "PASS" } else { "FAIL" },
        c.name,
        c.elapsed.as_secs_f64(),
        c.limit.as_secs(),
        c.summary
    );
}

fn main() -> ExitCode {
    let (first, payloads) = run_all(true);
    let (_, again) = run_all(false);
    let mismatched: Vec<usize> = (0..payloads.len())
        .filter(|&i| payloads[i] != again[i])
        .map(|i| i + 1)
        .collect();
    let deterministic = mismatched.is_empty();
    if deterministic {
        println!("criterion 9 PASS: reruns give byte-identical payloads");
    } else {
        println!("criterion 9 FAIL: reruns differ for criteria {mismatched:?}");
    }
    let all = deterministic && first.iter().all(|c| c.pass && c.elapsed <= c.limit);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
