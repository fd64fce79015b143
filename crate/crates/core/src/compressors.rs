//! Compression functions: maps `x -> q(x)` with `u_eval(q(x)) = x`.
//!
//! The host codecs here emit self-decompressing programs for the toy machine.
//! Every emitted program starts with a `0`-prefixed instruction (`LIT_REST` or
//! `EMIT_RUN`), so `u_eval` never mistakes it for a `<p, x>` pair.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{ensure_ceiling, Result};
use crate::oracle::Oracle;
use crate::toyvm::{exec, gamma_len, print_program, u_eval_produces, Instruction, PRINT_OVERHEAD};

/// Length of the nominal driver program `r` in `q = <r, p_m>`.
pub const NOMINAL_DRIVER_LEN: usize = 4;

/// Accounting constant for host-backed compressors: the pairing overhead of
/// `<r, data>` with `|r| = NOMINAL_DRIVER_LEN`.
pub const K_DRIVER: usize = 2 * NOMINAL_DRIVER_LEN + 1;

/// `EMIT_RUN 0 x2` then `INPUT_REST`: on input `z` it prints `"00" · z`.
pub const Q_LIT: &str = "0100101100";

pub fn q_lit() -> BitString {
    Q_LIT.parse().expect("constant is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasuredConstants {
    pub k_print: usize,
    pub k_driver: usize,
    pub k_min_thm1: Option<usize>,
    pub k_min_thm2: Option<usize>,
}

/// The Print program `"00" · x`.
pub fn literal_compress(x: &BitString) -> BitString {
    print_program(x)
}

/// Maximal runs of `bits` as `(bit, length)`.
fn runs(bits: &[bool]) -> Vec<(bool, u64)> {
    let mut out: Vec<(bool, u64)> = Vec::new();
    for &b in bits {
        match out.last_mut() {
            Some((bit, n)) if *bit == b => *n += 1,
            _ => out.push((b, 1)),
        }
    }
    out
}

fn emit_runs(bits: &[bool], out: &mut BitString) {
    for (bit, count) in runs(bits) {
        Instruction::EmitRun { bit, count }.encode_into(out);
    }
}

/// One `EMIT_RUN` per maximal run; falls back to [`literal_compress`] unless strictly shorter.
pub fn rle_compress(x: &BitString) -> BitString {
    let mut out = BitString::new();
    emit_runs(x.bits(), &mut out);
    if out.len() < x.len() + PRINT_OVERHEAD {
        out
    } else {
        literal_compress(x)
    }
}

fn copy_cost(distance: u64, length: u64) -> usize {
    2 + gamma_len(distance) + gamma_len(length)
}

/// Longest (possibly overlapping) match for `x[i..]` starting `d` bits back;
/// smallest `d` on ties. Returns `(d, l)` with `l = 0` when nothing matches.
fn longest_match(x: &[bool], i: usize) -> (usize, usize) {
    let mut best = (0, 0);
    for d in 1..=i {
        let mut l = 0;
        while i + l < x.len() && x[i + l] == x[i + l - d] {
            l += 1;
        }
        if l > best.1 {
            best = (d, l);
        }
    }
    best
}

/// Encodes literal bits that no accepted back-reference covered.
///
/// Candidates, shortest wins, ties in this order: one `EMIT_RUN` per run;
/// a `LIT_CHUNK` (when this is the program's first instruction, its first run
/// goes out as an `EMIT_RUN` so the program still starts with `0`); a
/// `LIT_REST` when nothing follows.
fn flush_literals(pending: &[bool], first: bool, last: bool, out: &mut BitString) {
    if pending.is_empty() {
        return;
    }
    let mut candidates = Vec::with_capacity(3);

    let mut as_runs = BitString::new();
    emit_runs(pending, &mut as_runs);
    candidates.push(as_runs);

    let mut chunk = BitString::new();
    let rest = if first {
        let (bit, count) = runs(pending)[0];
        Instruction::EmitRun { bit, count }.encode_into(&mut chunk);
        &pending[count as usize..]
    } else {
        pending
    };
    if !rest.is_empty() {
        Instruction::LitChunk {
            payload: BitString::from(rest),
        }
        .encode_into(&mut chunk);
    }
    candidates.push(chunk);

    if last {
        candidates.push(print_program(&BitString::from(pending)));
    }
    let best = candidates
        .into_iter()
        .min_by_key(|c| c.len())
        .expect("at least one candidate");
    out.extend_from(&best);
}

/// Greedy LZ77 over bits. At each position the longest back-reference is
/// taken (smallest distance on ties) if its `COPY_BACK` encoding is strictly
/// shorter than the number of bits it covers; other bits are buffered and
/// flushed by [`flush_literals`].
pub fn lz_compress(x: &BitString) -> BitString {
    let bits = x.bits();
    let mut out = BitString::new();
    let mut pending_start = 0;
    let mut i = 0;
    while i < bits.len() {
        let (d, l) = longest_match(bits, i);
        if l > 0 && copy_cost(d as u64, l as u64) < l {
            flush_literals(&bits[pending_start..i], out.is_empty(), false, &mut out);
            Instruction::CopyBack {
                distance: d as u64,
                length: l as u64,
            }
            .encode_into(&mut out);
            i += l;
            pending_start = i;
        } else {
            i += 1;
        }
    }
    flush_literals(&bits[pending_start..], out.is_empty(), true, &mut out);
    out
}

/// Shortest of literal, rle and lz; ties go to the earlier one in that order.
pub fn best_compress(x: &BitString) -> BitString {
    [literal_compress(x), rle_compress(x), lz_compress(x)]
        .into_iter()
        .min_by_key(|c| c.len())
        .expect("three candidates")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Codec {
    Literal,
    Rle,
    Lz,
    Best,
}

impl Codec {
    pub fn compress(self, x: &BitString) -> BitString {
        match self {
            Codec::Literal => literal_compress(x),
            Codec::Rle => rle_compress(x),
            Codec::Lz => lz_compress(x),
            Codec::Best => best_compress(x),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Codec::Literal => "literal",
            Codec::Rle => "rle",
            Codec::Lz => "lz",
            Codec::Best => "best",
        }
    }
}

/// The optimal compressor for strings of complexity at most `m`: search the
/// shortlex-first program producing `z` within `BB(m)` steps, else Print `z`.
#[derive(Clone)]
pub struct Theorem1Compressor {
    pub m: usize,
    /// `BB(m)`, the per-program step cap of the search.
    pub t: u64,
    pub p_m: BitString,
    oracle: Arc<Oracle>,
}

impl Theorem1Compressor {
    pub fn new(oracle: Arc<Oracle>, m: usize) -> Result<Self> {
        let bb = oracle.busy_beaver(m)?;
        Ok(Self {
            m,
            t: bb.bb,
            p_m: bb.p_m,
            oracle,
        })
    }

    /// Longest program the search considers for `z`: one bit short of Print,
    /// limited by the oracle's complexity ceiling (which is at least `m`).
    fn scan_len(&self, z: &BitString) -> usize {
        let limit = self.oracle.ceilings().complexity_len + PRINT_OVERHEAD;
        (z.len() + PRINT_OVERHEAD - 1).min(limit)
    }

    pub fn compress(&self, z: &BitString) -> BitString {
        match self
            .oracle
            .first_producer(z, self.scan_len(z), Some(self.t))
        {
            Some((p, _)) => p,
            None => print_program(z),
        }
    }
}

impl fmt::Debug for Theorem1Compressor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Theorem1Compressor")
            .field("m", &self.m)
            .field("t", &self.t)
            .field("p_m", &self.p_m)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum Backing {
    /// A genuine machine program `q`; `q(z) = exec(q, z)`.
    Program(BitString),
    Codec(Codec),
    Theorem1(Theorem1Compressor),
}

/// A named compression map with the size `|q|` used in theorem checks.
#[derive(Debug, Clone)]
pub struct Compressor {
    pub name: String,
    pub declared_length: usize,
    pub backing: Backing,
}

impl Compressor {
    /// Host codecs are charged [`K_DRIVER`] bits: a driver with no embedded data.
    pub fn codec(codec: Codec) -> Self {
        Self {
            name: codec.name().to_string(),
            declared_length: K_DRIVER,
            backing: Backing::Codec(codec),
        }
    }

    /// `q(z) = exec(q, z)`, with `|q|` its exact length.
    pub fn program(q: BitString) -> Self {
        Self {
            name: format!("program:{}", q.to_token()),
            declared_length: q.len(),
            backing: Backing::Program(q),
        }
    }

    /// Declared as `|p_m| + K_DRIVER`, the size of `<r, p_m>` with the nominal driver.
    pub fn theorem1(oracle: Arc<Oracle>, m: usize) -> Result<Self> {
        let inner = Theorem1Compressor::new(oracle, m)?;
        Ok(Self {
            name: format!("thm1(m={m})"),
            declared_length: inner.p_m.len() + K_DRIVER,
            backing: Backing::Theorem1(inner),
        })
    }

    pub fn compress(&self, x: &BitString) -> BitString {
        match &self.backing {
            Backing::Program(q) => exec(q, x, None).output,
            Backing::Codec(c) => c.compress(x),
            Backing::Theorem1(t) => t.compress(x),
        }
    }

    /// Machine steps of the compression itself; `None` for host-backed compressors.
    pub fn compression_steps(&self, x: &BitString) -> Option<u64> {
        match &self.backing {
            Backing::Program(q) => Some(exec(q, x, None).steps),
            _ => None,
        }
    }

    pub fn is_program_backed(&self) -> bool {
        matches!(self.backing, Backing::Program(_))
    }
}

/// Whether `u_eval(c.compress(z)) = z` for every `z` of length `n`.
pub fn is_compression_function(c: &Compressor, n: usize, oracle: &Oracle) -> Result<bool> {
    let ceiling = if c.is_program_backed() {
        oracle.ceilings().cf_program_n
    } else {
        oracle.ceilings().cf_codec_n
    };
    ensure_ceiling("n", n, ceiling)?;
    Ok(compression_function_unchecked(c, n))
}

/// Same check without the ceiling, for callers that bound `n` themselves.
pub(crate) fn compression_function_unchecked(c: &Compressor, n: usize) -> bool {
    (0..1u64 << n).into_par_iter().all(|v| {
        let z = BitString::from_value(v, n);
        u_eval_produces(&c.compress(&z), &z, None).is_some()
    })
}
