//! Time-bounded compression: `C^t`, `(f, g)`-bounded compressors, a toy
//! pseudorandom generator and the compression-based distinguisher `T`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::compressors::{compression_function_unchecked, Compressor};
use crate::error::{ensure_ceiling, LabError, Result};
use crate::oracle::{ComplexityRecord, Oracle};
use crate::toyvm::u_eval;

/// `t(n) = a · n^b + c` machine steps (saturating).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TimeBound {
    pub a: u64,
    pub b: u32,
    pub c: u64,
}

impl TimeBound {
    pub const fn new(a: u64, b: u32, c: u64) -> Self {
        Self { a, b, c }
    }

    pub fn eval(&self, n: usize) -> u64 {
        self.a
            .saturating_mul((n as u64).saturating_pow(self.b))
            .saturating_add(self.c)
    }
}

impl fmt::Display for TimeBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·n^{}+{}", self.a, self.b, self.c)
    }
}

impl std::str::FromStr for TimeBound {
    type Err = LabError;

    /// Parses `a,b,c`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || LabError::Parse(format!("time bound {s:?}: expected a,b,c"));
        let [a, b, c] = parts.as_slice() else {
            return Err(bad());
        };
        Ok(Self {
            a: a.parse().map_err(|_| bad())?,
            b: b.parse().map_err(|_| bad())?,
            c: c.parse().map_err(|_| bad())?,
        })
    }
}

/// `C^t(x)` with budget `tb(|x|)`.
pub fn ct_complexity(oracle: &Oracle, x: &BitString, tb: TimeBound) -> Result<ComplexityRecord> {
    oracle.complexity_time_bounded(x, tb.eval(x.len()))
}

/// `|q(x)| ≥ C^g(x) ≥ C(x)` on one string, with `g` the decompression time `q(x)` actually needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainEntry {
    pub x: BitString,
    pub q_len: usize,
    pub decompression_steps: u64,
    pub ct_value: usize,
    pub c_value: usize,
    pub holds: bool,
}

pub fn chain_inequality(oracle: &Oracle, c: &Compressor, x: &BitString) -> Result<ChainEntry> {
    let q = c.compress(x);
    let run = u_eval(&q, None);
    let ct = oracle.complexity_time_bounded(x, run.steps)?;
    let cx = oracle.complexity(x)?;
    Ok(ChainEntry {
        x: x.clone(),
        q_len: q.len(),
        decompression_steps: run.steps,
        ct_value: ct.value,
        c_value: cx.value,
        holds: run.output == *x && q.len() >= ct.value && ct.value >= cx.value,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FgEntry {
    pub x: BitString,
    pub compressed_len: usize,
    pub roundtrip: bool,
    pub decompression_steps: u64,
    pub g_bound: u64,
    /// `None` when compression runs on the host rather than the machine.
    pub compression_steps: Option<u64>,
    pub f_bound: u64,
}

impl FgEntry {
    pub fn g_ok(&self) -> bool {
        self.roundtrip && self.decompression_steps <= self.g_bound
    }

    pub fn f_ok(&self) -> Option<bool> {
        self.compression_steps.map(|s| s <= self.f_bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FgReport {
    pub compressor: String,
    pub f: TimeBound,
    pub g: TimeBound,
    pub g_pass: bool,
    /// `None`: compression time is not modelled for host codecs.
    pub f_pass: Option<bool>,
    pub failures: Vec<FgEntry>,
    pub checked: usize,
}

impl FgReport {
    pub fn pass(&self) -> bool {
        self.g_pass && self.f_pass.unwrap_or(true)
    }
}

/// Checks the `(f, g)` contract on each sample string.
pub fn fg_check(c: &Compressor, f: TimeBound, g: TimeBound, samples: &[BitString]) -> FgReport {
    let entries: Vec<FgEntry> = samples
        .par_iter()
        .map(|x| {
            let q = c.compress(x);
            let run = u_eval(&q, None);
            FgEntry {
                x: x.clone(),
                compressed_len: q.len(),
                roundtrip: run.output == *x,
                decompression_steps: run.steps,
                g_bound: g.eval(x.len()),
                compression_steps: c.compression_steps(x),
                f_bound: f.eval(x.len()),
            }
        })
        .collect();
    let g_pass = entries.iter().all(FgEntry::g_ok);
    let f_pass = if c.is_program_backed() {
        Some(entries.iter().all(|e| e.f_ok() == Some(true)))
    } else {
        None
    };
    let failures = entries
        .iter()
        .filter(|e| !e.g_ok() || e.f_ok() == Some(false))
        .cloned()
        .collect();
    FgReport {
        compressor: c.name.clone(),
        f,
        g,
        g_pass,
        f_pass,
        failures,
        checked: entries.len(),
    }
}

/// Every string of each listed length.
pub fn exhaustive_samples(lengths: &[usize]) -> Vec<BitString> {
    lengths
        .iter()
        .flat_map(|&n| BitString::all_of_length(n))
        .collect()
}

/// A family `q_0, q_1, ...` of compressors, one per input length.
pub struct CompressorFamily {
    pub name: String,
    generator: Box<dyn Fn(usize) -> Compressor + Send + Sync>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCheck {
    pub n: usize,
    pub declared_length: usize,
    pub valid: bool,
}

impl CompressorFamily {
    pub fn new(
        name: impl Into<String>,
        generator: impl Fn(usize) -> Compressor + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            generator: Box::new(generator),
        }
    }

    /// The uniform family using the same compressor at every length.
    pub fn constant(c: Compressor) -> Self {
        Self::new(c.name.clone(), move |_| c.clone())
    }

    pub fn member(&self, n: usize) -> Compressor {
        (self.generator)(n)
    }

    /// Exhaustively checks `q_n` at each sampled `n`.
    pub fn check(&self, lengths: &[usize], oracle: &Oracle) -> Result<Vec<FamilyCheck>> {
        lengths
            .iter()
            .map(|&n| {
                let q = self.member(n);
                let ceiling = if q.is_program_backed() {
                    oracle.ceilings().cf_program_n
                } else {
                    oracle.ceilings().cf_codec_n
                };
                ensure_ceiling("n", n, ceiling)?;
                Ok(FamilyCheck {
                    n,
                    declared_length: q.declared_length,
                    valid: compression_function_unchecked(&q, n),
                })
            })
            .collect()
    }
}

/// Periodic expander: `seed` repeated and cut to `out_len` bits.
pub fn prg_expand(seed: &BitString, out_len: usize) -> Result<BitString> {
    if seed.is_empty() || seed.len() >= out_len {
        return Err(LabError::Precondition(format!(
            "prg_expand needs 1 <= |seed| < L, got |seed| = {}, L = {out_len}",
            seed.len()
        )));
    }
    Ok(BitString::from_bits(
        seed.bits().iter().cycle().take(out_len).copied().collect(),
    ))
}

/// The test `T`: 0 iff `c` compresses `x` below its own length.
pub fn distinguisher_t(c: &Compressor, x: &BitString) -> u8 {
    u8::from(c.compress(x).len() >= x.len())
}

pub const RNG_DESCRIPTION: &str =
    "ChaCha20Rng::seed_from_u64(rng_seed), stream 2*trial (uniform) / 2*trial+1 (seed)";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinguisherReport {
    pub compressor: String,
    pub seed_len: usize,
    pub out_len: usize,
    pub trials: usize,
    pub rng_seed: u64,
    pub generator: String,
    pub accepted_uniform: usize,
    pub accepted_prg: usize,
    pub accept_rate_uniform: f64,
    pub accept_rate_prg: f64,
    pub advantage: f64,
}

fn random_bits(rng_seed: u64, stream: u64, len: usize) -> BitString {
    let mut rng = ChaCha20Rng::seed_from_u64(rng_seed);
    rng.set_stream(stream);
    BitString::from_bits((0..len).map(|_| rng.gen::<bool>()).collect())
}

/// Runs `T` on `trials` uniform strings of length `out_len` and on `trials`
/// expansions of uniform `seed_len`-bit seeds. Each trial draws from its own
/// ChaCha stream, so the result does not depend on scheduling.
pub fn run_distinguisher(
    c: &Compressor,
    seed_len: usize,
    out_len: usize,
    trials: usize,
    rng_seed: u64,
) -> Result<DistinguisherReport> {
    if seed_len == 0 || seed_len >= out_len {
        return Err(LabError::Precondition(format!(
            "distinguisher needs 1 <= seed_len < out_len, got {seed_len}, {out_len}"
        )));
    }
    let (accepted_uniform, accepted_prg) = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let uniform = random_bits(rng_seed, 2 * trial, out_len);
            let seed = random_bits(rng_seed, 2 * trial + 1, seed_len);
            let prg = prg_expand(&seed, out_len).expect("lengths checked above");
            (
                distinguisher_t(c, &uniform) as usize,
                distinguisher_t(c, &prg) as usize,
            )
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let rate = |k: usize| {
        if trials == 0 {
            0.0
        } else {
            k as f64 / trials as f64
        }
    };
    Ok(DistinguisherReport {
        compressor: c.name.clone(),
        seed_len,
        out_len,
        trials,
        rng_seed,
        generator: RNG_DESCRIPTION.to_string(),
        accepted_uniform,
        accepted_prg,
        accept_rate_uniform: rate(accepted_uniform),
        accept_rate_prg: rate(accepted_prg),
        advantage: rate(accepted_uniform) - rate(accepted_prg),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::compressors::{q_lit, Codec};

    #[test]
    fn time_bound_eval_and_parse() {
        assert_eq!(TimeBound::new(1, 1, 2).eval(1), 3);
        assert_eq!(TimeBound::new(0, 0, 0).eval(10), 0);
        assert_eq!(TimeBound::new(2, 2, 1).eval(3), 19);
        assert_eq!(TimeBound::new(u64::MAX, 2, 5).eval(3), u64::MAX);
        assert_eq!(
            "1,1,4".parse::<TimeBound>().unwrap(),
            TimeBound::new(1, 1, 4)
        );
        assert!("1,1".parse::<TimeBound>().is_err());
    }

    #[test]
    fn ct_examples() {
        let o = Oracle::default();
        assert_eq!(
            ct_complexity(&o, &bits("0"), TimeBound::new(1, 1, 2))
                .unwrap()
                .value,
            3
        );
        assert_eq!(
            ct_complexity(&o, &bits("_"), TimeBound::new(0, 0, 0))
                .unwrap()
                .value,
            0
        );
    }

    #[test]
    fn fg_examples() {
        let lit = Compressor::codec(Codec::Literal);
        let samples = exhaustive_samples(&[0, 1, 2, 3, 4, 5, 6]);
        let r = fg_check(
            &lit,
            TimeBound::new(0, 0, 0),
            TimeBound::new(1, 1, 1),
            &samples,
        );
        assert!(r.g_pass && r.f_pass.is_none() && r.pass());

        let prog = Compressor::program(q_lit());
        let r = fg_check(
            &prog,
            TimeBound::new(1, 1, 4),
            TimeBound::new(1, 1, 1),
            &samples,
        );
        assert_eq!((r.g_pass, r.f_pass), (true, Some(true)));
        let r = fg_check(
            &prog,
            TimeBound::new(1, 1, 3),
            TimeBound::new(1, 1, 1),
            &samples,
        );
        assert_eq!(r.f_pass, Some(false));
        assert_eq!(r.failures.len(), samples.len());

        let lz = Compressor::codec(Codec::Lz);
        let zeros = BitString::repeat_bit(false, 16);
        let r = fg_check(
            &lz,
            TimeBound::new(0, 0, 0),
            TimeBound::new(0, 0, 1),
            &[zeros],
        );
        assert!(!r.g_pass);
    }

    #[test]
    fn prg_examples() {
        assert_eq!(prg_expand(&bits("01"), 7).unwrap(), bits("0101010"));
        assert_eq!(prg_expand(&bits("1"), 4).unwrap(), bits("1111"));
        assert!(prg_expand(&bits("_"), 4).is_err());
        assert!(prg_expand(&bits("0101"), 4).is_err());
    }

    #[test]
    fn distinguisher_examples() {
        let best = Compressor::codec(Codec::Best);
        let lit = Compressor::codec(Codec::Literal);
        assert_eq!(distinguisher_t(&best, &BitString::repeat_bit(false, 64)), 0);
        assert_eq!(distinguisher_t(&lit, &bits("0110")), 1);
        let seed = bits("1011001110001011");
        assert_eq!(distinguisher_t(&best, &prg_expand(&seed, 64).unwrap()), 0);

        let r = run_distinguisher(&lit, 8, 32, 50, 7).unwrap();
        assert_eq!((r.accept_rate_uniform, r.accept_rate_prg), (1.0, 1.0));
        assert!(run_distinguisher(&lit, 32, 32, 5, 7).is_err());
    }

    #[test]
    fn families() {
        let o = Oracle::default();
        let fam = CompressorFamily::constant(Compressor::program(q_lit()));
        let checks = fam.check(&[0, 3, 8], &o).unwrap();
        assert!(checks.iter().all(|c| c.valid && c.declared_length == 10));
        assert!(fam.check(&[9], &o).is_err());
        let halt_then_lit = CompressorFamily::new("zero-then-lit", |n| {
            if n == 0 {
                Compressor::program(bits("_"))
            } else {
                Compressor::codec(Codec::Lz)
            }
        });
        assert!(halt_then_lit
            .check(&[0, 4, 10], &o)
            .unwrap()
            .iter()
            .all(|c| c.valid));
    }
}
