//! Exact oracles by exhaustive enumeration: `C(x)`, `C^t(x)`, `BB(m)`, `p_m`,
//! the sets `A_s^ℓ`, and the random strings.
//!
//! All quantities are relative to the machine in [`crate::toyvm`]. Because
//! that machine is total, "halting programs" is simply "all programs", and
//! each program's behaviour (output and step count on empty input, under the
//! pairing convention of `u_eval`) is computed once and kept in a run table
//! organised by program length. Lengths beyond the table are scanned on the
//! fly with early abort as soon as the output stops matching.
//!
//! Ties are broken shortlex-first everywhere.

mod cache;

use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{ensure_ceiling, Result};
use crate::toyvm::{print_program, u_eval, u_eval_produces, PRINT_OVERHEAD};

pub use cache::CACHE_HEADER;

/// Enumeration limits. Requests beyond them are refused rather than left to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ceilings {
    /// Longest `x` accepted by [`Oracle::complexity`] and friends.
    pub complexity_len: usize,
    /// Largest `m` for [`Oracle::busy_beaver`].
    pub bb_m: usize,
    /// Largest `ℓ` for [`Oracle::a_set`] and [`Oracle::random_strings`].
    pub aset_len: usize,
    /// Longest program length kept in the run table.
    pub table_len: usize,
    /// Largest `n` for the exhaustive compression-function check of host codecs.
    pub cf_codec_n: usize,
    /// Largest `n` for the same check on machine programs.
    pub cf_program_n: usize,
    /// Largest `n` for the lower-bound harness.
    pub thm2_n: usize,
    /// Largest compressor length enumerated by the lower-bound harness.
    pub thm2_q_len: usize,
}

impl Default for Ceilings {
    fn default() -> Self {
        Self {
            complexity_len: 18,
            bb_m: 14,
            aset_len: 14,
            table_len: 16,
            cf_codec_n: 16,
            cf_program_n: 8,
            thm2_n: 6,
            thm2_q_len: 12,
        }
    }
}

/// `C(x)` or `C^t(x)` together with its shortlex-first witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityRecord {
    pub x: BitString,
    pub value: usize,
    pub witness: BitString,
    /// Steps `u_eval(witness)` takes.
    pub witness_steps: u64,
    /// Per-program cap of the scan; `None` for plain `C(x)`.
    pub step_budget: Option<u64>,
    /// False when no program produces `x` within the budget; the record then
    /// holds the Print program as a fallback and `witness_steps` exceeds the budget.
    pub within_budget: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BBRecord {
    pub m: usize,
    pub bb: u64,
    pub p_m: BitString,
}

/// `A_s^ℓ`: strings of length `ℓ` no program shorter than `ℓ` outputs within `s` steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ASet {
    pub s: u64,
    pub len: usize,
    /// Sorted (shortlex, i.e. lexicographic within the fixed length).
    pub members: Vec<BitString>,
}

impl ASet {
    /// Newline-separated sorted members, `_` standing for ε.
    pub fn canonical_serialization(&self) -> String {
        let mut s = String::new();
        for m in &self.members {
            s.push_str(&m.to_token());
            s.push('\n');
        }
        s
    }

    pub fn contains(&self, y: &BitString) -> bool {
        self.members.binary_search(y).is_ok()
    }

    pub fn first(&self) -> &BitString {
        &self.members[0]
    }
}

/// An exact fraction `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Behaviour of one program under `u_eval` with no cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub output: BitString,
    pub steps: u64,
}

struct Layer {
    runs: Vec<Run>,
    /// output -> (program value, steps), ascending by program value.
    producers: HashMap<BitString, Vec<(u64, u64)>>,
    max_steps: u64,
    argmax: u64,
}

impl Layer {
    fn from_runs(runs: Vec<Run>) -> Self {
        let mut producers: HashMap<BitString, Vec<(u64, u64)>> = HashMap::new();
        let mut max_steps = 0;
        let mut argmax = 0;
        for (v, run) in runs.iter().enumerate() {
            producers
                .entry(run.output.clone())
                .or_default()
                .push((v as u64, run.steps));
            if run.steps > max_steps {
                max_steps = run.steps;
                argmax = v as u64;
            }
        }
        Self {
            runs,
            producers,
            max_steps,
            argmax,
        }
    }

    fn build(len: usize) -> Self {
        let runs: Vec<Run> = (0..1u64 << len)
            .into_par_iter()
            .map(|v| {
                let r = u_eval(&BitString::from_value(v, len), None);
                Run {
                    output: r.output,
                    steps: r.steps,
                }
            })
            .collect();
        Self::from_runs(runs)
    }
}

/// All strings of length `0..=max_len` in shortlex order.
pub fn enumerate_programs(max_len: usize) -> impl Iterator<Item = BitString> {
    assert!(max_len < 63);
    (0..(1u64 << (max_len + 1)) - 1).map(BitString::from_shortlex_index)
}

/// Exhaustive oracle with a shared, lazily built run table.
///
/// Safe to share across threads; each table layer is computed at most once.
pub struct Oracle {
    ceilings: Ceilings,
    layers: Vec<OnceLock<Layer>>,
}

impl Default for Oracle {
    fn default() -> Self {
        Self::new(Ceilings::default())
    }
}

impl Oracle {
    pub fn new(ceilings: Ceilings) -> Self {
        assert!(ceilings.table_len < 32, "run table would not fit in memory");
        Self {
            ceilings,
            layers: (0..=ceilings.table_len).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn ceilings(&self) -> &Ceilings {
        &self.ceilings
    }

    fn layer(&self, len: usize) -> &Layer {
        self.layers[len].get_or_init(|| Layer::build(len))
    }

    /// Uncapped behaviour of `program`, memoised when it fits in the table.
    pub fn run(&self, program: &BitString) -> Run {
        if program.len() <= self.ceilings.table_len {
            self.layer(program.len()).runs[program.value() as usize].clone()
        } else {
            let r = u_eval(program, None);
            Run {
                output: r.output,
                steps: r.steps,
            }
        }
    }

    /// Shortlex-first program of length at most `max_len` whose `u_eval`
    /// halts with output `x` within `budget` steps (any number if `None`).
    pub fn first_producer(
        &self,
        x: &BitString,
        max_len: usize,
        budget: Option<u64>,
    ) -> Option<(BitString, u64)> {
        let fits = |steps: u64| budget.is_none_or(|b| steps <= b);
        for len in 0..=max_len {
            if len <= self.ceilings.table_len {
                let hit = self
                    .layer(len)
                    .producers
                    .get(x)
                    .and_then(|ps| ps.iter().find(|&&(_, steps)| fits(steps)));
                if let Some(&(v, steps)) = hit {
                    return Some((BitString::from_value(v, len), steps));
                }
            } else {
                assert!(len < 63);
                let hit = (0..1u64 << len).into_par_iter().find_map_first(|v| {
                    let p = BitString::from_value(v, len);
                    u_eval_produces(&p, x, budget).map(|steps| (p, steps))
                });
                if hit.is_some() {
                    return hit;
                }
            }
        }
        None
    }

    /// `C(x)`: the scan stops at `|x| + 2`, where the Print program always succeeds.
    pub fn complexity(&self, x: &BitString) -> Result<ComplexityRecord> {
        ensure_ceiling("|x|", x.len(), self.ceilings.complexity_len)?;
        let (witness, witness_steps) = self
            .first_producer(x, x.len() + PRINT_OVERHEAD, None)
            .expect("Print program bounds the search");
        Ok(ComplexityRecord {
            x: x.clone(),
            value: witness.len(),
            witness,
            witness_steps,
            step_budget: None,
            within_budget: true,
        })
    }

    /// `C^t(x)` with a flat per-program cap. If nothing produces `x` within
    /// `budget` (only possible when `budget < |x| + 1`), returns the Print
    /// program flagged with `within_budget = false`.
    pub fn complexity_time_bounded(&self, x: &BitString, budget: u64) -> Result<ComplexityRecord> {
        ensure_ceiling("|x|", x.len(), self.ceilings.complexity_len)?;
        let found = self.first_producer(x, x.len() + PRINT_OVERHEAD, Some(budget));
        let (witness, witness_steps, within_budget) = match found {
            Some((w, steps)) => (w, steps, true),
            None => {
                let w = print_program(x);
                let steps = u_eval(&w, None).steps;
                (w, steps, false)
            }
        };
        Ok(ComplexityRecord {
            x: x.clone(),
            value: witness.len(),
            witness,
            witness_steps,
            step_budget: Some(budget),
            within_budget,
        })
    }

    /// `BB(m)` and `p_m`, the shortlex-least program of length at most `m` attaining it.
    pub fn busy_beaver(&self, m: usize) -> Result<BBRecord> {
        ensure_ceiling("m", m, self.ceilings.bb_m)?;
        let mut best = BBRecord {
            m,
            bb: 0,
            p_m: BitString::new(),
        };
        for len in 0..=m {
            let layer = self.layer(len);
            // Strictly greater keeps the earliest (shortlex-least) maximiser.
            if layer.max_steps > best.bb {
                best.bb = layer.max_steps;
                best.p_m = BitString::from_value(layer.argmax, len);
            }
        }
        Ok(best)
    }

    /// `A_s^ℓ`, computed from the run table.
    pub fn a_set(&self, s: u64, len: usize) -> Result<ASet> {
        ensure_ceiling("ℓ", len, self.ceilings.aset_len)?;
        let mut produced = vec![false; 1usize << len];
        for plen in 0..len {
            for run in &self.layer(plen).runs {
                if run.output.len() == len && run.steps <= s {
                    produced[run.output.value() as usize] = true;
                }
            }
        }
        let members = produced
            .iter()
            .enumerate()
            .filter(|(_, &hit)| !hit)
            .map(|(v, _)| BitString::from_value(v as u64, len))
            .collect();
        Ok(ASet { s, len, members })
    }

    /// `{y ∈ Σ^ℓ : C(y) ≥ ℓ}`, sorted. Computed string by string through
    /// [`Oracle::complexity`], independently of [`Oracle::a_set`].
    pub fn random_strings(&self, len: usize) -> Result<Vec<BitString>> {
        ensure_ceiling("ℓ", len, self.ceilings.aset_len)?;
        let records: Vec<ComplexityRecord> = BitString::all_of_length(len)
            .collect::<Vec<_>>()
            .par_iter()
            .map(|y| self.complexity(y))
            .collect::<Result<_>>()?;
        Ok(records
            .into_iter()
            .filter(|r| r.value >= len)
            .map(|r| r.x)
            .collect())
    }

    /// Exact fraction of length-`n` strings that are random.
    pub fn incompressible_fraction(&self, n: usize) -> Result<Fraction> {
        let count = self.random_strings(n)?.len() as u64;
        Ok(Fraction {
            num: count,
            den: 1u64 << n,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    #[test]
    fn enumeration_order_and_count() {
        let v: Vec<_> = enumerate_programs(2).map(|b| b.to_token()).collect();
        assert_eq!(v, ["_", "0", "1", "00", "01", "10", "11"]);
        assert_eq!(enumerate_programs(1).count(), 3);
        assert_eq!(enumerate_programs(10).count(), (1 << 11) - 1);
        let all: Vec<_> = enumerate_programs(10).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn complexity_examples() {
        let o = Oracle::default();
        let r = o.complexity(&bits("_")).unwrap();
        assert_eq!((r.value, r.witness), (0, bits("_")));
        let r = o.complexity(&bits("0")).unwrap();
        assert_eq!((r.value, r.witness, r.witness_steps), (3, bits("000"), 2));
        let zeros = BitString::repeat_bit(false, 16);
        let r = o.complexity(&zeros).unwrap();
        assert!(r.value <= 12);
        assert_eq!(u_eval(&r.witness, None).output, zeros);
    }

    #[test]
    fn complexity_beyond_table_uses_streaming_scan() {
        let small = Oracle::new(Ceilings {
            table_len: 4,
            ..Ceilings::default()
        });
        let full = Oracle::default();
        for x in ["00", "0000", "0101", "111", "00000000"] {
            let x = bits(x);
            assert_eq!(
                small.complexity(&x).unwrap(),
                full.complexity(&x).unwrap(),
                "{x:?}"
            );
        }
    }

    #[test]
    fn time_bounded_examples() {
        let o = Oracle::default();
        assert_eq!(o.complexity_time_bounded(&bits("_"), 0).unwrap().value, 0);
        let r = o.complexity_time_bounded(&bits("0"), 2).unwrap();
        assert_eq!((r.value, r.within_budget), (3, true));
        let r = o.complexity_time_bounded(&bits("0"), 1).unwrap();
        assert_eq!(
            (r.value, r.witness.clone(), r.within_budget),
            (3, bits("000"), false)
        );
        let v10 = o.complexity_time_bounded(&bits("0101"), 10).unwrap().value;
        let v100 = o.complexity_time_bounded(&bits("0101"), 100).unwrap().value;
        assert!(v10 >= v100);
    }

    #[test]
    fn busy_beaver_small() {
        let o = Oracle::default();
        assert_eq!(
            o.busy_beaver(0).unwrap(),
            BBRecord {
                m: 0,
                bb: 0,
                p_m: bits("_")
            }
        );
        assert_eq!(
            o.busy_beaver(2).unwrap(),
            BBRecord {
                m: 2,
                bb: 1,
                p_m: bits("00")
            }
        );
        assert!(o.busy_beaver(4).unwrap().bb >= o.busy_beaver(2).unwrap().bb);
        assert!(o.busy_beaver(15).is_err());
    }

    #[test]
    fn a_set_examples() {
        let o = Oracle::default();
        assert_eq!(o.a_set(0, 1).unwrap().members, vec![bits("0"), bits("1")]);
        assert_eq!(o.a_set(0, 1).unwrap().canonical_serialization(), "0\n1\n");
        let bb4 = o.busy_beaver(4).unwrap().bb;
        let a = o.a_set(bb4, 4).unwrap();
        assert_eq!(a.members.len(), 16);
        assert_eq!(a.members, o.random_strings(4).unwrap());
        assert!(o.a_set(0, 15).is_err());
    }

    #[test]
    fn random_strings_small() {
        let o = Oracle::default();
        assert_eq!(o.random_strings(0).unwrap(), vec![bits("_")]);
        assert_eq!(o.random_strings(4).unwrap().len(), 16);
        for n in 0..=8 {
            let f = o.incompressible_fraction(n).unwrap();
            assert!(f.num >= 1 && f.den == 1 << n);
        }
    }

    #[test]
    fn ceilings_refuse() {
        let o = Oracle::default();
        assert!(o.complexity(&BitString::repeat_bit(true, 19)).is_err());
        assert!(o.random_strings(15).is_err());
    }
}
