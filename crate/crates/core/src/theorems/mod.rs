//! Exact checks of the compression-complexity trade-off on small instances.
//!
//! * [`verify_theorem1`]: the `BB(m)`-bounded search compressor compresses
//!   every `x` with `C(x) ≤ m` to exactly `C(x)` bits and never expands
//!   anything else by more than the Print overhead.
//! * [`verify_theorem2`]: the adversarial string `x`, first in `A^n_{BB(m)}`,
//!   is not compressed below `n` by any short genuine compression function,
//!   unless decompressing it takes more than `BB(m)` steps.
//! * [`extract_random`]: the reduction that recovers the first random string
//!   of length `m` from a compression function's worst decompression time.
//! * [`estimate_constants`]: smallest constants under which the statements
//!   hold across a grid.

pub mod checks;

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::compressors::{
    compression_function_unchecked, is_compression_function, Compressor, MeasuredConstants,
    K_DRIVER,
};
use crate::error::{ensure_ceiling, LabError, Result};
use crate::oracle::{enumerate_programs, Oracle};
use crate::toyvm::{exec, u_eval, PRINT_OVERHEAD};

/// Upper end of the integer search for the lower-bound constant.
const K_SEARCH_LIMIT: u32 = 64;

/// First string of `A^n_{BB(m)}`.
pub fn adversarial_string(oracle: &Oracle, m: usize, n: usize) -> Result<BitString> {
    if m > n {
        return Err(LabError::Precondition(format!(
            "need m <= n, got m = {m}, n = {n}"
        )));
    }
    let t = oracle.busy_beaver(m)?.bb;
    Ok(oracle.a_set(t, n)?.first().clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Thm1Case {
    /// `C(x) ≤ m`: must compress to exactly `C(x)`.
    Optimal,
    /// `C(x) > m`: must stay within `|x| + k_print`.
    Bounded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm1Outcome {
    pub x: BitString,
    pub c: usize,
    pub q_len: usize,
    pub case: Thm1Case,
    pub roundtrip: bool,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm1Report {
    pub m: usize,
    pub n_max: usize,
    /// `BB(m)`.
    pub t: u64,
    pub p_m: BitString,
    /// `|q|` under the host accounting convention `|p_m| + k_driver`.
    pub declared_length: usize,
    pub k_print: usize,
    pub k_driver: usize,
    pub optimal_cases: usize,
    pub bounded_cases: usize,
    /// Largest `|q(x)| - |x|` among bounded cases.
    pub max_bounded_excess: Option<usize>,
    /// Max over `|x| ≥ m` of `(|q(x)| - C(x)) - (|x| - m)`.
    pub corollary_slack: Option<i64>,
    pub corollary_tight: Option<BitString>,
    /// Smallest `k` with `declared_length ≤ m + k` and every bounded case within `|x| + k`.
    pub k_min: usize,
    pub pass: bool,
    pub outcomes: Vec<Thm1Outcome>,
}

pub fn verify_theorem1(oracle: &Arc<Oracle>, m: usize, n_max: usize) -> Result<Thm1Report> {
    ensure_ceiling("n_max", n_max, oracle.ceilings().complexity_len)?;
    let q = Compressor::theorem1(oracle.clone(), m)?;
    let crate::compressors::Backing::Theorem1(inner) = &q.backing else {
        unreachable!("theorem1 constructor");
    };
    let (t, p_m) = (inner.t, inner.p_m.clone());

    let xs: Vec<BitString> = (0..=n_max).flat_map(BitString::all_of_length).collect();
    let outcomes: Vec<Thm1Outcome> = xs
        .par_iter()
        .map(|x| {
            let c = oracle.complexity(x)?.value;
            let qx = q.compress(x);
            let roundtrip = u_eval(&qx, None).output == *x;
            let case = if c <= m {
                Thm1Case::Optimal
            } else {
                Thm1Case::Bounded
            };
            let ok = roundtrip
                && match case {
                    Thm1Case::Optimal => qx.len() == c,
                    Thm1Case::Bounded => qx.len() <= x.len() + PRINT_OVERHEAD,
                };
            Ok(Thm1Outcome {
                x: x.clone(),
                c,
                q_len: qx.len(),
                case,
                roundtrip,
                ok,
            })
        })
        .collect::<Result<_>>()?;

    let bounded: Vec<&Thm1Outcome> = outcomes
        .iter()
        .filter(|o| o.case == Thm1Case::Bounded)
        .collect();
    let max_bounded_excess = bounded
        .iter()
        .map(|o| o.q_len.saturating_sub(o.x.len()))
        .max();
    let mut corollary_slack: Option<i64> = None;
    let mut corollary_tight = None;
    for o in outcomes.iter().filter(|o| o.x.len() >= m) {
        let slack = (o.q_len as i64 - o.c as i64) - (o.x.len() as i64 - m as i64);
        if corollary_slack.is_none_or(|s| slack > s) {
            corollary_slack = Some(slack);
            corollary_tight = Some(o.x.clone());
        }
    }
    let declared_length = q.declared_length;
    let k_min = declared_length
        .saturating_sub(m)
        .max(max_bounded_excess.unwrap_or(0));
    Ok(Thm1Report {
        m,
        n_max,
        t,
        p_m,
        declared_length,
        k_print: PRINT_OVERHEAD,
        k_driver: K_DRIVER,
        optimal_cases: outcomes.len() - bounded.len(),
        bounded_cases: bounded.len(),
        max_bounded_excess,
        corollary_slack,
        corollary_tight,
        k_min,
        pass: outcomes.iter().all(|o| o.ok),
        outcomes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub q: BitString,
    pub compressed_len: usize,
    pub decompression_steps: u64,
    /// Whether `decompression_steps > BB(m)`, as the lower-bound argument requires.
    pub exceeds_bb: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thm2Report {
    pub m: usize,
    pub n: usize,
    /// `BB(m)`.
    pub t: u64,
    pub x_adv: BitString,
    pub c_adv: usize,
    pub q_len_max: usize,
    pub programs_enumerated: usize,
    pub compression_functions: usize,
    /// Shortlex-first genuine compression function for length `n`, if any.
    pub shortest_compression_function: Option<BitString>,
    /// Genuine compression functions with `|q(x_adv)| < n`, shortlex by `q`.
    pub violations: Vec<Violation>,
    /// Every violation decompresses in more than `BB(m)` steps.
    pub mechanism_holds: bool,
    /// `log2 n`, taken as 0 when `n ≤ 1`.
    pub log_n: f64,
    /// `n ≤ 1`: the `k log n` terms vanish and `k` cannot help.
    pub degenerate: bool,
    /// Smallest `k` for `C(x_adv) ≤ m + k log n`.
    pub k_item2: Option<u32>,
    /// Smallest `k` such that every enumerated compression function with
    /// `|q| ≤ m - k log n` has `|q(x_adv)| ≥ n` and `|q(x_adv)| - C(x_adv) ≥ n - m - k log n`.
    pub k_items34: Option<u32>,
    /// Smallest `k` satisfying both of the above.
    pub k_min_items: Option<u32>,
    /// At `k_min_items`, no enumerated compression function is short enough
    /// for the `|q(x_adv)|` bounds to say anything.
    pub vacuous: bool,
}

impl Thm2Report {
    pub fn pass(&self) -> bool {
        self.x_adv.len() == self.n && self.mechanism_holds
    }
}

struct ItemCheck<'a> {
    m: f64,
    n: f64,
    c_adv: f64,
    log_n: f64,
    /// `(|q|, |q(x_adv)|)` of every genuine compression function.
    cfs: &'a [(usize, usize)],
}

impl ItemCheck<'_> {
    fn bound(&self, k: u32) -> f64 {
        self.m - k as f64 * self.log_n
    }

    fn item2(&self, k: u32) -> bool {
        self.c_adv <= self.m + k as f64 * self.log_n
    }

    fn qualifying(&self, k: u32) -> impl Iterator<Item = &(usize, usize)> {
        let bound = self.bound(k);
        self.cfs.iter().filter(move |(q, _)| (*q as f64) <= bound)
    }

    fn items34(&self, k: u32) -> bool {
        let rhs = self.n - self.m - k as f64 * self.log_n;
        self.qualifying(k)
            .all(|&(_, w)| w as f64 >= self.n && w as f64 - self.c_adv >= rhs)
    }

    fn first(&self, pred: impl Fn(u32) -> bool) -> Option<u32> {
        (0..=K_SEARCH_LIMIT).find(|&k| pred(k))
    }
}

pub fn verify_theorem2(
    oracle: &Oracle,
    m: usize,
    n: usize,
    q_len_max: usize,
) -> Result<Thm2Report> {
    ensure_ceiling("n", n, oracle.ceilings().thm2_n)?;
    ensure_ceiling("q_len_max", q_len_max, oracle.ceilings().thm2_q_len)?;
    let x_adv = adversarial_string(oracle, m, n)?;
    let t = oracle.busy_beaver(m)?.bb;
    let c_adv = oracle.complexity(&x_adv)?.value;

    let programs: Vec<BitString> = enumerate_programs(q_len_max).collect();
    // (q, |q(x_adv)|) for genuine compression functions, in enumeration order.
    let cfs: Vec<(BitString, BitString)> = programs
        .par_iter()
        .filter_map(|q| {
            let c = Compressor::program(q.clone());
            compression_function_unchecked(&c, n).then(|| (q.clone(), exec(q, &x_adv, None).output))
        })
        .collect();
    let violations: Vec<Violation> = cfs
        .iter()
        .filter(|(_, w)| w.len() < n)
        .map(|(q, w)| {
            let steps = u_eval(w, None).steps;
            Violation {
                q: q.clone(),
                compressed_len: w.len(),
                decompression_steps: steps,
                exceeds_bb: steps > t,
            }
        })
        .collect();

    let lengths: Vec<(usize, usize)> = cfs.iter().map(|(q, w)| (q.len(), w.len())).collect();
    let degenerate = n <= 1;
    let log_n = if degenerate { 0.0 } else { (n as f64).log2() };
    let check = ItemCheck {
        m: m as f64,
        n: n as f64,
        c_adv: c_adv as f64,
        log_n,
        cfs: &lengths,
    };
    let k_item2 = check.first(|k| check.item2(k));
    let k_items34 = check.first(|k| check.items34(k));
    let k_min_items = check.first(|k| check.item2(k) && check.items34(k));
    let vacuous = k_min_items.is_some_and(|k| check.qualifying(k).next().is_none());

    Ok(Thm2Report {
        m,
        n,
        t,
        c_adv,
        q_len_max,
        programs_enumerated: programs.len(),
        compression_functions: cfs.len(),
        shortest_compression_function: cfs.first().map(|(q, _)| q.clone()),
        mechanism_holds: violations.iter().all(|v| v.exceeds_bb),
        violations,
        log_n,
        degenerate,
        k_item2,
        k_items34,
        k_min_items,
        vacuous,
        x_adv,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractReport {
    pub compressor: String,
    pub n: usize,
    pub m: usize,
    /// Worst decompression time over all `q(y)`, `|y| = n`.
    pub t_prime: u64,
    pub bb_m: u64,
    /// First element of `A^m_{t'}`.
    pub z: BitString,
    /// `t' ≥ BB(m)`: the case in which `z` must be the first random string.
    pub condition_met: bool,
    /// First random string of length `m`, computed independently when the condition holds.
    pub first_random: Option<BitString>,
    pub contract_holds: bool,
}

/// Recovers a string from `q`, `n`, and `m` alone; if `q`'s worst
/// decompression time reaches `BB(m)`, it is the first random string of length `m`.
pub fn extract_random(
    oracle: &Oracle,
    c: &Compressor,
    n: usize,
    m: usize,
) -> Result<ExtractReport> {
    if !is_compression_function(c, n, oracle)? {
        return Err(LabError::Precondition(format!(
            "{} is not a compression function for length {n}",
            c.name
        )));
    }
    let t_prime = BitString::all_of_length(n)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|y| u_eval(&c.compress(y), None).steps)
        .max()
        .unwrap_or(0);
    let z = oracle.a_set(t_prime, m)?.first().clone();
    let bb_m = oracle.busy_beaver(m)?.bb;
    let condition_met = t_prime >= bb_m;
    let first_random = if condition_met {
        Some(oracle.random_strings(m)?[0].clone())
    } else {
        None
    };
    let contract_holds = first_random.as_ref().is_none_or(|r| *r == z);
    Ok(ExtractReport {
        compressor: c.name.clone(),
        n,
        m,
        t_prime,
        bb_m,
        z,
        condition_met,
        first_random,
        contract_holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightInstance {
    pub constant: String,
    pub m: usize,
    pub n: usize,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub grid: Vec<(usize, usize)>,
    pub q_len_max: usize,
    pub constants: MeasuredConstants,
    /// Smallest `k` for the corollary's `|q(x)| - C(x) ≤ |x| - m + k`.
    pub k_min_cor2: usize,
    pub tight: Vec<TightInstance>,
    /// Instances with `n ≤ 1`, excluded from `k_min_thm2`.
    pub degenerate: Vec<(usize, usize)>,
    /// Non-degenerate instances for which no `k` up to the search limit works.
    pub unsatisfiable: Vec<(usize, usize)>,
}

/// Parses `M1-M2:N1-N2` (or single values) into all `(m, n)` with `m ≤ n`.
pub fn parse_grid(text: &str) -> Result<Vec<(usize, usize)>> {
    let bad = || LabError::Parse(format!("grid {text:?}: expected M1-M2:N1-N2"));
    let range = |s: &str| -> Result<(usize, usize)> {
        let (a, b) = s.split_once('-').unwrap_or((s, s));
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        Ok((a, b))
    };
    let (ms, ns) = text.split_once(':').ok_or_else(bad)?;
    let ((m0, m1), (n0, n1)) = (range(ms)?, range(ns)?);
    let grid: Vec<_> = (m0..=m1)
        .flat_map(|m| (n0.max(m)..=n1).map(move |n| (m, n)))
        .collect();
    if grid.is_empty() {
        return Err(bad());
    }
    Ok(grid)
}

fn update_tight(tight: &mut Option<TightInstance>, name: &str, m: usize, n: usize, value: i64) {
    if tight.as_ref().is_none_or(|t| value > t.value) {
        *tight = Some(TightInstance {
            constant: name.to_string(),
            m,
            n,
            value,
        });
    }
}

/// Smallest constants making the search-compressor bounds, the corollary slack
/// and the lower-bound inequalities hold on every grid point, with the
/// instances that force them.
pub fn estimate_constants(
    oracle: &Arc<Oracle>,
    grid: &[(usize, usize)],
    q_len_max: usize,
) -> Result<ConstantsReport> {
    let mut k_print = 0usize;
    let mut k_thm1 = 0usize;
    let mut k_cor2 = 0i64;
    let mut k_thm2 = Some(0u32);
    let (mut t_print, mut t_thm1, mut t_cor2, mut t_thm2) = (None, None, None, None);
    let mut degenerate = Vec::new();
    let mut unsatisfiable = Vec::new();

    for &(m, n) in grid {
        let r1 = verify_theorem1(oracle, m, n)?;
        let print = r1
            .outcomes
            .iter()
            .map(|o| crate::compressors::literal_compress(&o.x).len() - o.x.len())
            .max()
            .unwrap_or(PRINT_OVERHEAD);
        k_print = k_print.max(print);
        update_tight(&mut t_print, "k_print", m, n, print as i64);
        k_thm1 = k_thm1.max(r1.k_min);
        update_tight(&mut t_thm1, "k_min_thm1", m, n, r1.k_min as i64);
        if let Some(s) = r1.corollary_slack {
            k_cor2 = k_cor2.max(s);
            update_tight(&mut t_cor2, "k_min_cor2", m, n, s);
        }

        let r2 = verify_theorem2(oracle, m, n, q_len_max)?;
        if r2.degenerate {
            degenerate.push((m, n));
            continue;
        }
        match r2.k_min_items {
            Some(k) => {
                k_thm2 = k_thm2.map(|cur| cur.max(k));
                update_tight(&mut t_thm2, "k_min_thm2", m, n, k as i64);
            }
            None => {
                k_thm2 = None;
                unsatisfiable.push((m, n));
            }
        }
    }
    let any_thm2 = grid.len() > degenerate.len();
    Ok(ConstantsReport {
        grid: grid.to_vec(),
        q_len_max,
        constants: MeasuredConstants {
            k_print,
            k_driver: K_DRIVER,
            k_min_thm1: Some(k_thm1),
            k_min_thm2: if any_thm2 {
                k_thm2.map(|k| k as usize)
            } else {
                None
            },
        },
        k_min_cor2: k_cor2.max(0) as usize,
        tight: [t_print, t_thm1, t_cor2, t_thm2]
            .into_iter()
            .flatten()
            .collect(),
        degenerate,
        unsatisfiable,
    })
}
