//! The concrete total machine `U` every other quantity is measured on.
//!
//! Programs are bit strings decoded into a small prefix-free instruction set
//! (see [`instr`]). Every bit string denotes a halting computation, which
//! makes busy-beaver values and exact complexities computable by enumeration.

pub mod disasm;
pub mod gamma;
pub mod instr;
pub mod machine;
pub mod pairing;

pub use disasm::{assemble, disassemble};
pub use gamma::{gamma_code, gamma_decode, gamma_len, GammaError};
pub use instr::{decode_at, Decoded, Instruction, Opcode, Truncation};
pub use machine::{
    exec, exec_produces, u_eval, u_eval_produces, ExecResult, HaltReason, MAX_LOOP_DEPTH,
};
pub use pairing::{pair_encode, pair_parse};

use crate::bits::BitString;

/// Overhead of the Print program `"00" · z`.
pub const PRINT_OVERHEAD: usize = 2;

/// The Print program for `z`: `LIT_REST z`.
pub fn print_program(z: &BitString) -> BitString {
    let mut p = BitString::with_capacity(z.len() + PRINT_OVERHEAD);
    p.push(false);
    p.push(false);
    p.extend_from(z);
    p
}
