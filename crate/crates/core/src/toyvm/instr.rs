//! Instruction set and bit-level decoding.
//!
//! Opcodes are prefix-free and matched first-come:
//!
//! | bits   | instruction  | operands                         |
//! |--------|--------------|----------------------------------|
//! | `00`   | `LIT_REST`   | every remaining program bit      |
//! | `01`   | `EMIT_RUN`   | bit `b`, gamma `c`               |
//! | `10`   | `COPY_BACK`  | gamma `d`, gamma `l`             |
//! | `1100` | `INPUT_REST` |                                  |
//! | `1101` | `LIT_CHUNK`  | gamma `l`, then `l` raw bits     |
//! | `1110` | `LOOP`       | gamma `c`, gamma `L`, `L`-bit body |
//! | `1111` | `HALT`       |                                  |

use std::fmt;

use serde::Serialize;

use super::gamma::{gamma_decode_in, gamma_encode_into, gamma_len, GammaError};
use crate::bits::BitString;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Opcode {
    LitRest,
    EmitRun,
    CopyBack,
    InputRest,
    LitChunk,
    Loop,
    Halt,
}

impl Opcode {
    pub fn mnemonic(self) -> &'static str {
        match self {
            Opcode::LitRest => "LIT_REST",
            Opcode::EmitRun => "EMIT_RUN",
            Opcode::CopyBack => "COPY_BACK",
            Opcode::InputRest => "INPUT_REST",
            Opcode::LitChunk => "LIT_CHUNK",
            Opcode::Loop => "LOOP",
            Opcode::Halt => "HALT",
        }
    }

    pub fn bits(self) -> &'static [bool] {
        match self {
            Opcode::LitRest => &[false, false],
            Opcode::EmitRun => &[false, true],
            Opcode::CopyBack => &[true, false],
            Opcode::InputRest => &[true, true, false, false],
            Opcode::LitChunk => &[true, true, false, true],
            Opcode::Loop => &[true, true, true, false],
            Opcode::Halt => &[true, true, true, true],
        }
    }
}

impl fmt::Display for Opcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// A fully decoded instruction. `Loop` carries only its header; the body is
/// the `body_len` bits that follow it in the program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instruction {
    LitRest { payload: BitString },
    EmitRun { bit: bool, count: u64 },
    CopyBack { distance: u64, length: u64 },
    InputRest,
    LitChunk { payload: BitString },
    Loop { count: u64, body_len: u64 },
    Halt,
}

impl Instruction {
    pub fn opcode(&self) -> Opcode {
        match self {
            Instruction::LitRest { .. } => Opcode::LitRest,
            Instruction::EmitRun { .. } => Opcode::EmitRun,
            Instruction::CopyBack { .. } => Opcode::CopyBack,
            Instruction::InputRest => Opcode::InputRest,
            Instruction::LitChunk { .. } => Opcode::LitChunk,
            Instruction::Loop { .. } => Opcode::Loop,
            Instruction::Halt => Opcode::Halt,
        }
    }

    pub fn encode_into(&self, out: &mut BitString) {
        out.extend_bits(self.opcode().bits());
        match self {
            Instruction::LitRest { payload } => out.extend_from(payload),
            Instruction::EmitRun { bit, count } => {
                out.push(*bit);
                gamma_encode_into(*count, out);
            }
            Instruction::CopyBack { distance, length } => {
                gamma_encode_into(*distance, out);
                gamma_encode_into(*length, out);
            }
            Instruction::LitChunk { payload } => {
                gamma_encode_into(payload.len() as u64, out);
                out.extend_from(payload);
            }
            Instruction::Loop { count, body_len } => {
                gamma_encode_into(*count, out);
                gamma_encode_into(*body_len, out);
            }
            Instruction::InputRest | Instruction::Halt => {}
        }
    }

    pub fn encode(&self) -> BitString {
        let mut out = BitString::new();
        self.encode_into(&mut out);
        out
    }

    /// Encoded size in bits (excluding a loop's body).
    pub fn bit_width(&self) -> usize {
        let op = self.opcode().bits().len();
        op + match self {
            Instruction::LitRest { payload } => payload.len(),
            Instruction::EmitRun { count, .. } => 1 + gamma_len(*count),
            Instruction::CopyBack { distance, length } => gamma_len(*distance) + gamma_len(*length),
            Instruction::LitChunk { payload } => gamma_len(payload.len() as u64) + payload.len(),
            Instruction::Loop { count, body_len } => gamma_len(*count) + gamma_len(*body_len),
            Instruction::InputRest | Instruction::Halt => 0,
        }
    }
}

/// Where decoding stopped short of a complete instruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Truncation {
    /// Fewer bits remain than the opcode needs.
    Opcode,
    /// An operand is cut off; `opcode` is known.
    Operand { opcode: Opcode, overflow: bool },
    /// `LIT_CHUNK` announces more payload than remains.
    Payload { need: u64, have: u64 },
    /// A `LOOP` body extends past the end of the enclosing region.
    Block { need: u64, have: u64 },
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Truncation::Opcode => write!(f, "opcode cut off"),
            Truncation::Operand {
                opcode,
                overflow: false,
            } => write!(f, "{opcode} operand cut off"),
            Truncation::Operand {
                opcode,
                overflow: true,
            } => write!(f, "{opcode} operand overflows 64 bits"),
            Truncation::Payload { need, have } => {
                write!(f, "LIT_CHUNK payload cut off (need {need}, have {have})")
            }
            Truncation::Block { need, have } => {
                write!(
                    f,
                    "LOOP body runs past region end (need {need}, have {have})"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    /// A complete instruction; `next` is the bit position right after it
    /// (for `Loop`, the start of the body).
    Instr {
        instr: Instruction,
        next: usize,
    },
    Truncated(Truncation),
    /// `pos == end`: the region is exhausted at an instruction boundary.
    End,
}

/// Decodes one instruction at `pos` without reading at or past `end`.
/// `LIT_REST` takes everything up to the end of the whole program, even when
/// `end` is the end of a loop body.
pub fn decode_at(program: &[bool], pos: usize, end: usize) -> Decoded {
    if pos >= end {
        return Decoded::End;
    }
    let avail = end - pos;
    if avail < 2 {
        return Decoded::Truncated(Truncation::Opcode);
    }
    let opcode = match (program[pos], program[pos + 1]) {
        (false, false) => Opcode::LitRest,
        (false, true) => Opcode::EmitRun,
        (true, false) => Opcode::CopyBack,
        (true, true) => {
            if avail < 4 {
                return Decoded::Truncated(Truncation::Opcode);
            }
            match (program[pos + 2], program[pos + 3]) {
                (false, false) => Opcode::InputRest,
                (false, true) => Opcode::LitChunk,
                (true, false) => Opcode::Loop,
                (true, true) => Opcode::Halt,
            }
        }
    };
    let p = pos + opcode.bits().len();
    let operand = |e: GammaError| {
        Decoded::Truncated(Truncation::Operand {
            opcode,
            overflow: e == GammaError::Overflow,
        })
    };
    macro_rules! gamma {
        ($at:expr) => {
            match gamma_decode_in(program, $at, end) {
                Ok(v) => v,
                Err(e) => return operand(e),
            }
        };
    }
    let (instr, next) = match opcode {
        Opcode::LitRest => (
            Instruction::LitRest {
                payload: BitString::from(&program[p..]),
            },
            program.len(),
        ),
        Opcode::EmitRun => {
            if p >= end {
                return operand(GammaError::Truncated);
            }
            let bit = program[p];
            let (count, next) = gamma!(p + 1);
            (Instruction::EmitRun { bit, count }, next)
        }
        Opcode::CopyBack => {
            let (distance, q) = gamma!(p);
            let (length, next) = gamma!(q);
            (Instruction::CopyBack { distance, length }, next)
        }
        Opcode::InputRest => (Instruction::InputRest, p),
        Opcode::Halt => (Instruction::Halt, p),
        Opcode::LitChunk => {
            let (len, q) = gamma!(p);
            let have = (end - q) as u64;
            if len > have {
                return Decoded::Truncated(Truncation::Payload { need: len, have });
            }
            let stop = q + len as usize;
            (
                Instruction::LitChunk {
                    payload: BitString::from(&program[q..stop]),
                },
                stop,
            )
        }
        Opcode::Loop => {
            let (count, q) = gamma!(p);
            let (body_len, body) = gamma!(q);
            let have = (end - body) as u64;
            if body_len > have {
                return Decoded::Truncated(Truncation::Block {
                    need: body_len,
                    have,
                });
            }
            (Instruction::Loop { count, body_len }, body)
        }
    };
    Decoded::Instr { instr, next }
}
