//! Execution semantics of the toy machine `U`.
//!
//! Steps: one per completed instruction dispatch (a `LOOP` header counts
//! once, not per iteration) plus one per output bit. Truncated code and
//! every other abnormal condition halt gracefully at no extra cost, so the
//! machine is total.

use serde::{Deserialize, Serialize};

use super::instr::{decode_at, Decoded, Instruction};
use super::pairing::pair_parse;
use crate::bits::BitString;

/// Maximum `LOOP` nesting depth; entering a deeper body halts gracefully.
pub const MAX_LOOP_DEPTH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HaltReason {
    /// `HALT`, `LIT_REST`, or the program ran out at an instruction boundary.
    Normal,
    /// Truncated code, a back-reference before the output start, loop
    /// nesting beyond [`MAX_LOOP_DEPTH`], or a body past the region end.
    Graceful,
    /// The supplied step cap was reached.
    CapExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExecResult {
    pub output: BitString,
    pub steps: u64,
    pub halt_reason: HaltReason,
}

impl ExecResult {
    pub fn halted(&self) -> bool {
        self.halt_reason != HaltReason::CapExceeded
    }
}

/// Output buffer seen by the machine.
pub(crate) trait Sink {
    fn len(&self) -> usize;
    fn bit_at(&self, i: usize) -> bool;
    /// Returns false to abort the run.
    fn push(&mut self, bit: bool) -> bool;
}

impl Sink for BitString {
    fn len(&self) -> usize {
        BitString::len(self)
    }
    fn bit_at(&self, i: usize) -> bool {
        self.bits()[i]
    }
    fn push(&mut self, bit: bool) -> bool {
        BitString::push(self, bit);
        true
    }
}

/// Accepts output only while it stays a prefix of `target`.
struct TargetSink<'a> {
    target: &'a [bool],
    len: usize,
}

impl Sink for TargetSink<'_> {
    fn len(&self) -> usize {
        self.len
    }
    fn bit_at(&self, i: usize) -> bool {
        self.target[i]
    }
    fn push(&mut self, bit: bool) -> bool {
        if self.target.get(self.len) == Some(&bit) {
            self.len += 1;
            true
        } else {
            false
        }
    }
}

enum Stop {
    Normal,
    Graceful,
    Cap,
    Rejected,
}

struct Machine<'a, S: Sink> {
    program: &'a [bool],
    input: &'a [bool],
    input_pos: usize,
    steps: u64,
    cap: Option<u64>,
    out: S,
}

impl<S: Sink> Machine<'_, S> {
    fn charge(&mut self) -> Result<(), Stop> {
        if let Some(cap) = self.cap {
            if self.steps >= cap {
                return Err(Stop::Cap);
            }
        }
        self.steps += 1;
        Ok(())
    }

    fn emit(&mut self, bit: bool) -> Result<(), Stop> {
        self.charge()?;
        if self.out.push(bit) {
            Ok(())
        } else {
            Err(Stop::Rejected)
        }
    }

    /// Runs the instructions in `[start, end)`; `Ok` means the region ran out.
    fn run_region(&mut self, start: usize, end: usize, depth: usize) -> Result<(), Stop> {
        let mut pos = start;
        loop {
            let (instr, next) = match decode_at(self.program, pos, end) {
                Decoded::End => return Ok(()),
                Decoded::Truncated(_) => return Err(Stop::Graceful),
                Decoded::Instr { instr, next } => (instr, next),
            };
            match instr {
                Instruction::LitRest { payload } => {
                    self.charge()?;
                    for &b in payload.bits() {
                        self.emit(b)?;
                    }
                    return Err(Stop::Normal);
                }
                Instruction::EmitRun { bit, count } => {
                    self.charge()?;
                    for _ in 0..count {
                        self.emit(bit)?;
                    }
                }
                Instruction::CopyBack { distance, length } => {
                    if distance > self.out.len() as u64 {
                        return Err(Stop::Graceful);
                    }
                    self.charge()?;
                    let d = distance as usize;
                    for _ in 0..length {
                        let b = self.out.bit_at(self.out.len() - d);
                        self.emit(b)?;
                    }
                }
                Instruction::InputRest => {
                    self.charge()?;
                    while self.input_pos < self.input.len() {
                        let b = self.input[self.input_pos];
                        self.input_pos += 1;
                        self.emit(b)?;
                    }
                }
                Instruction::LitChunk { payload } => {
                    self.charge()?;
                    for &b in payload.bits() {
                        self.emit(b)?;
                    }
                }
                Instruction::Loop { count, body_len } => {
                    if depth + 1 > MAX_LOOP_DEPTH {
                        return Err(Stop::Graceful);
                    }
                    self.charge()?;
                    let body_end = next + body_len as usize;
                    // body_len >= 1, so every iteration either costs a step or halts.
                    for _ in 0..count {
                        self.run_region(next, body_end, depth + 1)?;
                    }
                    pos = body_end;
                    continue;
                }
                Instruction::Halt => {
                    self.charge()?;
                    return Err(Stop::Normal);
                }
            }
            pos = next;
        }
    }

    fn run(&mut self) -> Stop {
        match self.run_region(0, self.program.len(), 0) {
            Ok(()) => Stop::Normal,
            Err(stop) => stop,
        }
    }
}

/// Runs `program` on `input`, optionally stopping after `cap` steps.
pub fn exec(program: &BitString, input: &BitString, cap: Option<u64>) -> ExecResult {
    let mut m = Machine {
        program: program.bits(),
        input: input.bits(),
        input_pos: 0,
        steps: 0,
        cap,
        out: BitString::new(),
    };
    let halt_reason = match m.run() {
        Stop::Normal => HaltReason::Normal,
        Stop::Graceful => HaltReason::Graceful,
        Stop::Cap => HaltReason::CapExceeded,
        Stop::Rejected => unreachable!("plain output buffer never rejects"),
    };
    ExecResult {
        output: m.out,
        steps: m.steps,
        halt_reason,
    }
}

/// The universal machine on a single string: `<p, x>` runs `p` on `x`,
/// anything that is not a pair runs as a program on empty input.
pub fn u_eval(s: &BitString, cap: Option<u64>) -> ExecResult {
    match pair_parse(s) {
        Some((p, x)) => exec(&p, &x, cap),
        None => exec(s, &BitString::new(), cap),
    }
}

/// Step count of `exec(program, input, cap)` if that run halts (not capped)
/// with output exactly `target`. Aborts early as soon as the output leaves
/// the prefixes of `target`.
pub fn exec_produces(
    program: &BitString,
    input: &BitString,
    target: &BitString,
    cap: Option<u64>,
) -> Option<u64> {
    let mut m = Machine {
        program: program.bits(),
        input: input.bits(),
        input_pos: 0,
        steps: 0,
        cap,
        out: TargetSink {
            target: target.bits(),
            len: 0,
        },
    };
    match m.run() {
        Stop::Normal | Stop::Graceful if m.out.len == target.len() => Some(m.steps),
        _ => None,
    }
}

/// [`exec_produces`] under the `u_eval` pairing convention.
pub fn u_eval_produces(s: &BitString, target: &BitString, cap: Option<u64>) -> Option<u64> {
    match pair_parse(s) {
        Some((p, x)) => exec_produces(&p, &x, target, cap),
        None => exec_produces(s, &BitString::new(), target, cap),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::toyvm::pairing::pair_encode;
    use proptest::prelude::*;

    fn run(p: &str, x: &str) -> ExecResult {
        exec(&bits(p), &bits(x), None)
    }

    #[test]
    fn hand_traced_examples() {
        let r = run("00101", "_");
        assert_eq!(
            (r.output, r.steps, r.halt_reason),
            (bits("101"), 4, HaltReason::Normal)
        );
        let r = run("010010", "_");
        assert_eq!((r.output, r.steps), (bits("00"), 3));
        let r = run("_", "111");
        assert_eq!(
            (r.output, r.steps, r.halt_reason),
            (bits("_"), 0, HaltReason::Normal)
        );
    }

    #[test]
    fn u_eval_examples() {
        assert_eq!(u_eval(&bits("00101"), None).output, bits("101"));
        let r = u_eval(&bits("110011"), None);
        assert_eq!(
            (r.output, r.steps, r.halt_reason),
            (bits("_"), 0, HaltReason::Graceful)
        );
        let q_lit = bits("0100101100");
        let r = u_eval(&pair_encode(&q_lit, &bits("1")), None);
        assert_eq!(r.output, bits("001"));
        // 2 dispatches + 3 output bits
        assert_eq!(r.steps, 5);
    }

    #[test]
    fn copy_back_overlaps_and_rejects_bad_distance() {
        // EMIT_RUN 0 x1, EMIT_RUN 1 x1, COPY_BACK d=2 l=4
        let r = run("0101", "_");
        assert_eq!(r.output, bits("0"));
        let r = run("010101111001000100", "_");
        assert_eq!((r.output, r.steps), (bits("010101"), 3 + 6));
        // COPY_BACK d=2 with only one output bit
        let r = run("0101100101", "_");
        assert_eq!(
            (r.output, r.steps, r.halt_reason),
            (bits("0"), 2, HaltReason::Graceful)
        );
    }

    #[test]
    fn input_rest_and_lit_chunk() {
        let r = run("1100", "1011");
        assert_eq!((r.output, r.steps), (bits("1011"), 5));
        let r = run("110101011", "_");
        assert_eq!(
            (r.output, r.steps, r.halt_reason),
            (bits("11"), 3, HaltReason::Normal)
        );
        let r = run("1101011", "_");
        assert_eq!(
            (r.output, r.steps, r.halt_reason),
            (bits("_"), 0, HaltReason::Graceful)
        );
    }

    #[test]
    fn loop_semantics() {
        // LOOP c=3 L=4 { EMIT_RUN 1 x1 } HALT -> "111", 1 + 3*(1+1) + 1 steps
        let p = {
            let mut p = bits("1110");
            p.extend_from(&bits("011")); // c = 3
            p.extend_from(&bits("00100")); // L = 4
            p.extend_from(&bits("0111")); // EMIT_RUN 1 x1
            p.extend_from(&bits("1111")); // HALT
            p
        };
        let r = exec(&p, &bits("_"), None);
        assert_eq!(
            (r.output, r.steps, r.halt_reason),
            (bits("111"), 1 + 6 + 1, HaltReason::Normal)
        );
    }

    #[test]
    fn lit_rest_inside_loop_halts_globally() {
        // LOOP c=2 L=2 { LIT_REST ... } then the payload is everything after "00".
        let p = bits("1110010010").concat(&bits("00")).concat(&bits("11"));
        let r = exec(&p, &bits("_"), None);
        assert_eq!(r.output, bits("11"));
        assert_eq!(r.steps, 1 + 1 + 2);
        assert_eq!(r.halt_reason, HaltReason::Normal);
    }

    #[test]
    fn nesting_limit() {
        // Nest LOOP c=1 around HALT; each level's body is everything after its header.
        let nest = |depth: usize| {
            let mut body = bits("1111");
            for _ in 0..depth {
                let mut p = bits("11101");
                crate::toyvm::gamma::gamma_encode_into(body.len() as u64, &mut p);
                p.extend_from(&body);
                body = p;
            }
            body
        };
        let ok = exec(&nest(MAX_LOOP_DEPTH), &bits("_"), None);
        assert_eq!(
            (ok.steps, ok.halt_reason),
            (MAX_LOOP_DEPTH as u64 + 1, HaltReason::Normal)
        );
        let deep = exec(&nest(MAX_LOOP_DEPTH + 1), &bits("_"), None);
        assert_eq!(
            (deep.steps, deep.halt_reason),
            (MAX_LOOP_DEPTH as u64, HaltReason::Graceful)
        );
    }

    #[test]
    fn cap_stops_run() {
        let r = exec(&bits("00101"), &bits("_"), Some(2));
        assert_eq!(
            (r.output, r.steps, r.halt_reason),
            (bits("1"), 2, HaltReason::CapExceeded)
        );
        let r = exec(&bits("00101"), &bits("_"), Some(4));
        assert_eq!(r.halt_reason, HaltReason::Normal);
        let r = exec(&bits("_"), &bits("_"), Some(0));
        assert_eq!(r.halt_reason, HaltReason::Normal);
    }

    #[test]
    fn produces_matches_exec() {
        assert_eq!(u_eval_produces(&bits("00101"), &bits("101"), None), Some(4));
        assert_eq!(u_eval_produces(&bits("00101"), &bits("10"), None), None);
        assert_eq!(u_eval_produces(&bits("00101"), &bits("1011"), None), None);
        assert_eq!(u_eval_produces(&bits("00101"), &bits("101"), Some(3)), None);
    }

    fn program() -> impl Strategy<Value = BitString> {
        proptest::collection::vec(any::<bool>(), 0..40).prop_map(BitString::from_bits)
    }

    proptest! {
        #[test]
        fn deterministic_and_steps_cover_output(p in program(), x in program()) {
            let a = exec(&p, &x, None);
            let b = exec(&p, &x, None);
            prop_assert!(a.steps >= a.output.len() as u64);
            prop_assert_ne!(a.halt_reason, HaltReason::CapExceeded);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn cap_consistency(p in program(), x in program(), cap in 0u64..64) {
            let full = exec(&p, &x, None);
            let capped = exec(&p, &x, Some(cap));
            if capped.halted() {
                prop_assert_eq!(&capped, &full);
            } else {
                prop_assert_eq!(capped.steps, cap);
                prop_assert!(full.output.starts_with(&capped.output));
            }
            if full.steps <= cap {
                prop_assert!(capped.halted());
            }
        }

        #[test]
        fn produces_agrees_with_exec(p in program(), x in program(), cap in proptest::option::of(0u64..64)) {
            let r = exec(&p, &x, cap);
            let expect = if r.halted() { Some(r.steps) } else { None };
            prop_assert_eq!(exec_produces(&p, &x, &r.output, cap), expect);
        }

        #[test]
        fn print_program(z in program()) {
            let r = u_eval(&bits("00").concat(&z), None);
            prop_assert_eq!(r.steps, 1 + z.len() as u64);
            prop_assert_eq!(r.output, z);
        }
    }
}
