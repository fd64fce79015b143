//! Whole-system checks, one per acceptance criterion. Each returns a
//! serialisable report with a `pass` flag; reports are deterministic.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{extract_random, verify_theorem1, verify_theorem2, ExtractReport};
use crate::bits::BitString;
use crate::compressors::{best_compress, q_lit, Codec, Compressor};
use crate::error::Result;
use crate::oracle::{enumerate_programs, Oracle};
use crate::timebounded::{run_distinguisher, DistinguisherReport};
use crate::toyvm::{exec, print_program, u_eval, HaltReason};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineCheck {
    pub program_len_max: usize,
    pub input_len_max: usize,
    pub print_len_max: usize,
    pub executions: u64,
    pub non_halting: u64,
    pub max_steps: u64,
    pub print_failures: Vec<BitString>,
    pub pass: bool,
}

/// Every program up to `program_len_max` on every input up to `input_len_max`
/// halts, and `"00"·z` prints `z` in `1 + |z|` steps for `|z| ≤ print_len_max`.
pub fn check_machine(
    program_len_max: usize,
    input_len_max: usize,
    print_len_max: usize,
) -> MachineCheck {
    let inputs: Vec<BitString> = enumerate_programs(input_len_max).collect();
    let programs: Vec<BitString> = enumerate_programs(program_len_max).collect();
    let (executions, non_halting, max_steps) = programs
        .par_iter()
        .map(|p| {
            inputs.iter().fold((0u64, 0u64, 0u64), |(n, bad, max), x| {
                let r = exec(p, x, None);
                let stuck = u64::from(r.halt_reason == HaltReason::CapExceeded);
                (n + 1, bad + stuck, max.max(r.steps))
            })
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2.max(b.2)));
    let print_failures: Vec<BitString> = enumerate_programs(print_len_max)
        .filter(|z| {
            let r = u_eval(&print_program(z), None);
            r.output != *z || r.steps != 1 + z.len() as u64
        })
        .collect();
    MachineCheck {
        program_len_max,
        input_len_max,
        print_len_max,
        executions,
        non_halting,
        max_steps,
        pass: non_halting == 0 && print_failures.is_empty(),
        print_failures,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub len_max: usize,
    pub strings: usize,
    /// Count of strings per `C(x) - |x|`, for offsets -|x|..=2.
    pub excess_histogram: Vec<(i64, usize)>,
    pub bound_failures: Vec<BitString>,
    pub witness_failures: Vec<BitString>,
    pub ct_failures: Vec<BitString>,
    pub pass: bool,
}

/// For `|x| ≤ len_max`: `C(x) ≤ |x| + 2`, the witness reproduces `x`, and
/// `C^t(x)` is non-increasing in `t` for `t = 0..=steps(witness)`, reaching `C(x)` there.
pub fn check_oracle(oracle: &Oracle, len_max: usize) -> Result<OracleCheck> {
    let xs: Vec<BitString> = enumerate_programs(len_max).collect();
    let rows: Vec<(BitString, i64, bool, bool, bool)> = xs
        .par_iter()
        .map(|x| {
            let rec = oracle.complexity(x)?;
            let bound = rec.value <= x.len() + 2;
            let run = u_eval(&rec.witness, None);
            let witness = run.output == *x
                && run.steps == rec.witness_steps
                && rec.witness.len() == rec.value;
            let mut prev = usize::MAX;
            let mut ct_ok = true;
            for t in 0..=rec.witness_steps {
                let ct = oracle.complexity_time_bounded(x, t)?;
                ct_ok &= ct.value <= prev && ct.value >= rec.value;
                prev = ct.value;
            }
            ct_ok &= prev == rec.value;
            Ok((
                x.clone(),
                rec.value as i64 - x.len() as i64,
                bound,
                witness,
                ct_ok,
            ))
        })
        .collect::<Result<_>>()?;
    let mut histogram = std::collections::BTreeMap::new();
    for r in &rows {
        *histogram.entry(r.1).or_insert(0usize) += 1;
    }
    let pick = |f: fn(&(BitString, i64, bool, bool, bool)) -> bool| -> Vec<BitString> {
        rows.iter().filter(|r| !f(r)).map(|r| r.0.clone()).collect()
    };
    let bound_failures = pick(|r| r.2);
    let witness_failures = pick(|r| r.3);
    let ct_failures = pick(|r| r.4);
    Ok(OracleCheck {
        len_max,
        strings: rows.len(),
        excess_histogram: histogram.into_iter().collect(),
        pass: bound_failures.is_empty() && witness_failures.is_empty() && ct_failures.is_empty(),
        bound_failures,
        witness_failures,
        ct_failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ASetRow {
    pub len: usize,
    pub bb: u64,
    pub a_set_size: usize,
    pub random_count: usize,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ASetCheck {
    pub rows: Vec<ASetRow>,
    pub pass: bool,
}

/// `A^ℓ_{BB(ℓ)}` equals the set of random strings of length `ℓ`.
pub fn check_a_set_identity(oracle: &Oracle, len_max: usize) -> Result<ASetCheck> {
    let rows = (0..=len_max)
        .map(|len| {
            let bb = oracle.busy_beaver(len)?.bb;
            let a = oracle.a_set(bb, len)?;
            let random = oracle.random_strings(len)?;
            Ok(ASetRow {
                len,
                bb,
                a_set_size: a.members.len(),
                random_count: random.len(),
                equal: a.members == random,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ASetCheck {
        pass: rows.iter().all(|r| r.equal),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm1Row {
    pub m: usize,
    pub pass: bool,
    pub corollary_slack: Option<i64>,
    pub k_min: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm1Check {
    pub n_max: usize,
    pub slack_limit: i64,
    pub rows: Vec<Thm1Row>,
    pub pass: bool,
}

pub fn check_theorem1(
    oracle: &Arc<Oracle>,
    m_max: usize,
    n_max: usize,
    slack_limit: i64,
) -> Result<Thm1Check> {
    let rows = (0..=m_max)
        .map(|m| {
            let r = verify_theorem1(oracle, m, n_max)?;
            Ok(Thm1Row {
                m,
                pass: r.pass,
                corollary_slack: r.corollary_slack,
                k_min: r.k_min,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Thm1Check {
        n_max,
        slack_limit,
        pass: rows
            .iter()
            .all(|r| r.pass && r.corollary_slack.is_none_or(|s| s <= slack_limit)),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm2Row {
    pub m: usize,
    pub n: usize,
    pub x_adv: BitString,
    pub compression_functions: usize,
    pub violations: usize,
    pub counterexamples: Vec<BitString>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm2Check {
    pub q_len_max: usize,
    pub rows: Vec<Thm2Row>,
    pub counterexamples: usize,
    pub pass: bool,
}

/// Every `(m, n)` with `m ≤ m_max`, `m ≤ n ≤ n_max`: short outputs on the
/// adversarial string only come from decompressions slower than `BB(m)`.
pub fn check_theorem2(
    oracle: &Oracle,
    m_max: usize,
    n_max: usize,
    q_len_max: usize,
) -> Result<Thm2Check> {
    let mut rows = Vec::new();
    for m in 0..=m_max {
        for n in m..=n_max {
            let r = verify_theorem2(oracle, m, n, q_len_max)?;
            rows.push(Thm2Row {
                m,
                n,
                compression_functions: r.compression_functions,
                violations: r.violations.len(),
                counterexamples: r
                    .violations
                    .iter()
                    .filter(|v| !v.exceeds_bb)
                    .map(|v| v.q.clone())
                    .collect(),
                x_adv: r.x_adv,
            });
        }
    }
    let counterexamples = rows.iter().map(|r| r.counterexamples.len()).sum();
    Ok(Thm2Check {
        q_len_max,
        counterexamples,
        pass: counterexamples == 0 && rows.iter().all(|r| r.x_adv.len() == r.n),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionCheck {
    pub instances: usize,
    pub conditioned: usize,
    pub failures: Vec<ExtractReport>,
    pub pass: bool,
}

/// Compressors used by the extraction battery.
pub fn extraction_battery(oracle: &Arc<Oracle>) -> Result<Vec<Compressor>> {
    let mut cs = vec![
        Compressor::program(q_lit()),
        Compressor::codec(Codec::Literal),
        Compressor::codec(Codec::Rle),
        Compressor::codec(Codec::Lz),
        Compressor::codec(Codec::Best),
    ];
    for m in 0..=3 {
        cs.push(Compressor::theorem1(oracle.clone(), m)?);
    }
    Ok(cs)
}

/// Runs the extraction for every battery compressor, `n ≤ n_max`, `m ≤ m_max`.
pub fn check_extraction(
    oracle: &Arc<Oracle>,
    n_max: usize,
    m_max: usize,
) -> Result<ExtractionCheck> {
    let mut instances = 0;
    let mut conditioned = 0;
    let mut failures = Vec::new();
    for c in extraction_battery(oracle)? {
        for n in 0..=n_max {
            for m in 0..=m_max {
                let r = extract_random(oracle, &c, n, m)?;
                instances += 1;
                conditioned += usize::from(r.condition_met);
                if !r.contract_holds {
                    failures.push(r);
                }
            }
        }
    }
    Ok(ExtractionCheck {
        instances,
        conditioned,
        pass: failures.is_empty() && conditioned > 0,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodecCheck {
    pub exhaustive_len_max: usize,
    pub random_samples: usize,
    pub random_len_max: usize,
    pub rng_seed: u64,
    pub checked: usize,
    pub max_expansion: i64,
    pub failures: Vec<BitString>,
    pub pass: bool,
}

/// `best_compress` round-trips and never expands by more than two bits:
/// all strings up to `exhaustive_len_max`, then `random_samples` strings of
/// uniform length in `0..=random_len_max`.
pub fn check_codecs(
    exhaustive_len_max: usize,
    random_samples: usize,
    random_len_max: usize,
    rng_seed: u64,
) -> CodecCheck {
    let mut rng = ChaCha20Rng::seed_from_u64(rng_seed);
    let mut xs: Vec<BitString> = enumerate_programs(exhaustive_len_max).collect();
    for _ in 0..random_samples {
        let len = rng.gen_range(0..=random_len_max);
        xs.push(BitString::from_bits(
            (0..len).map(|_| rng.gen::<bool>()).collect(),
        ));
    }
    let results: Vec<(bool, i64)> = xs
        .par_iter()
        .map(|x| {
            let q = best_compress(x);
            let expansion = q.len() as i64 - x.len() as i64;
            (u_eval(&q, None).output == *x && expansion <= 2, expansion)
        })
        .collect();
    let failures: Vec<BitString> = xs
        .iter()
        .zip(&results)
        .filter(|(_, r)| !r.0)
        .map(|(x, _)| x.clone())
        .collect();
    CodecCheck {
        exhaustive_len_max,
        random_samples,
        random_len_max,
        rng_seed,
        checked: xs.len(),
        max_expansion: results.iter().map(|r| r.1).max().unwrap_or(0),
        pass: failures.is_empty(),
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinguisherCheck {
    pub report: DistinguisherReport,
    pub min_uniform_rate: f64,
    pub pass: bool,
}

/// `T` with the best codec never accepts a PRG output and accepts at least
/// `min_uniform_rate` of uniform strings.
pub fn check_distinguisher(
    seed_len: usize,
    out_len: usize,
    trials: usize,
    rng_seed: u64,
    min_uniform_rate: f64,
) -> Result<DistinguisherCheck> {
    let report = run_distinguisher(
        &Compressor::codec(Codec::Best),
        seed_len,
        out_len,
        trials,
        rng_seed,
    )?;
    Ok(DistinguisherCheck {
        pass: report.accept_rate_prg == 0.0 && report.accept_rate_uniform >= min_uniform_rate,
        min_uniform_rate,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_checks_pass() {
        let o = Arc::new(Oracle::default());
        assert!(check_machine(8, 3, 6).pass);
        assert!(check_oracle(&o, 6).unwrap().pass);
        assert!(check_a_set_identity(&o, 5).unwrap().pass);
        assert!(check_theorem1(&o, 3, 6, 2).unwrap().pass);
        assert!(check_theorem2(&o, 2, 3, 8).unwrap().pass);
        assert!(check_extraction(&o, 3, 3).unwrap().pass);
        assert!(check_codecs(8, 200, 64, 7).pass);
        assert!(check_distinguisher(8, 64, 100, 1, 0.3).unwrap().pass);
    }

    #[test]
    fn oracle_histogram_sums() {
        let o = Oracle::default();
        let r = check_oracle(&o, 7).unwrap();
        assert_eq!(
            r.excess_histogram.iter().map(|h| h.1).sum::<usize>(),
            r.strings
        );
        // 0^7 and 1^7 are the only strings up to length 7 with C(x) = |x| + 1
        assert!(r.excess_histogram.contains(&(1, 2)));
    }
}
