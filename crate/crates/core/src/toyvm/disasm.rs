//! Text listings of programs, and the assembler that reads them back.
//!
//! One line per instruction: a zero-padded bit offset, indentation for loop
//! bodies, then the mnemonic and operands. Undecodable tails are listed as
//! `TRUNCATED "<raw bits>"` with a `;` comment saying why. Every program bit
//! appears in exactly one line, so `assemble(&disassemble(p)) == p`.

use std::fmt::Write as _;

use super::instr::{decode_at, Decoded, Instruction};
use super::machine::MAX_LOOP_DEPTH;
use crate::bits::BitString;
use crate::error::{LabError, Result};

pub fn disassemble(program: &BitString) -> String {
    let mut out = String::new();
    let bits = program.bits();
    let mut lister = Lister {
        bits,
        out: &mut out,
    };
    lister.region(0, bits.len(), 0);
    out
}

struct Lister<'a> {
    bits: &'a [bool],
    out: &'a mut String,
}

impl Lister<'_> {
    fn line(&mut self, offset: usize, depth: usize, text: &str) {
        let _ = writeln!(
            self.out,
            "{offset:04} {:indent$}{text}",
            "",
            indent = 2 * depth
        );
    }

    /// Lists `[start, end)`; returns false once a `LIT_REST` has consumed the rest of the program.
    fn region(&mut self, start: usize, end: usize, depth: usize) -> bool {
        let mut pos = start;
        loop {
            match decode_at(self.bits, pos, end) {
                Decoded::End => return true,
                Decoded::Truncated(why) => {
                    let raw = BitString::from(&self.bits[pos..end]);
                    self.line(pos, depth, &format!("TRUNCATED \"{raw}\" ; {why}"));
                    return true;
                }
                Decoded::Instr { instr, next } => {
                    let text = match &instr {
                        Instruction::LitRest { payload } => format!("LIT_REST \"{payload}\""),
                        Instruction::EmitRun { bit, count } => {
                            format!("EMIT_RUN b={} c={count}", *bit as u8)
                        }
                        Instruction::CopyBack { distance, length } => {
                            format!("COPY_BACK d={distance} l={length}")
                        }
                        Instruction::InputRest => "INPUT_REST".to_string(),
                        Instruction::LitChunk { payload } => format!("LIT_CHUNK \"{payload}\""),
                        Instruction::Halt => "HALT".to_string(),
                        Instruction::Loop { count, body_len } => {
                            let note = if depth + 1 > MAX_LOOP_DEPTH {
                                " ; nesting too deep: halts here"
                            } else {
                                ""
                            };
                            format!("LOOP c={count} len={body_len} {{{note}")
                        }
                    };
                    self.line(pos, depth, &text);
                    match instr {
                        Instruction::LitRest { .. } => return false,
                        Instruction::Loop { body_len, .. } => {
                            let body_end = next + body_len as usize;
                            let more = self.region(next, body_end, depth + 1);
                            self.line(body_end, depth, "}");
                            if !more {
                                return false;
                            }
                            pos = body_end;
                        }
                        _ => pos = next,
                    }
                }
            }
        }
    }
}

fn parse_err(line_no: usize, msg: impl Into<String>) -> LabError {
    LabError::Parse(format!("line {}: {}", line_no + 1, msg.into()))
}

fn quoted(arg: &str, line_no: usize) -> Result<BitString> {
    let inner = arg
        .strip_prefix('"')
        .and_then(|a| a.strip_suffix('"'))
        .ok_or_else(|| parse_err(line_no, format!("expected quoted bits, got {arg:?}")))?;
    inner
        .parse()
        .map_err(|e: LabError| parse_err(line_no, e.to_string()))
}

fn field(arg: Option<&str>, key: &str, line_no: usize) -> Result<u64> {
    let arg = arg.ok_or_else(|| parse_err(line_no, format!("missing {key}=")))?;
    let value = arg
        .strip_prefix(key)
        .and_then(|a| a.strip_prefix('='))
        .ok_or_else(|| parse_err(line_no, format!("expected {key}=N, got {arg:?}")))?;
    value
        .parse()
        .map_err(|_| parse_err(line_no, format!("bad number in {arg:?}")))
}

fn positive(v: u64, key: &str, line_no: usize) -> Result<u64> {
    if v == 0 {
        Err(parse_err(line_no, format!("{key} must be at least 1")))
    } else {
        Ok(v)
    }
}

/// Assembles a listing in the format produced by [`disassemble`]. Offsets
/// and comments are ignored; `}` lines only close blocks.
pub fn assemble(listing: &str) -> Result<BitString> {
    let mut out = BitString::new();
    for (line_no, raw) in listing.lines().enumerate() {
        let line = raw.split(';').next().unwrap_or("").trim();
        let line = match line.split_once(' ') {
            Some((head, rest)) if head.chars().all(|c| c.is_ascii_digit()) => rest.trim(),
            _ if line.chars().all(|c| c.is_ascii_digit()) => "",
            _ => line,
        };
        if line.is_empty() || line == "}" {
            continue;
        }
        let mut words = line.split_whitespace();
        let mnemonic = words.next().unwrap_or_default();
        let instr = match mnemonic {
            "LIT_REST" | "LIT_CHUNK" | "TRUNCATED" => {
                let arg = words
                    .next()
                    .ok_or_else(|| parse_err(line_no, "missing payload"))?;
                let payload = quoted(arg, line_no)?;
                match mnemonic {
                    "LIT_REST" => Instruction::LitRest { payload },
                    "LIT_CHUNK" if payload.is_empty() => {
                        return Err(parse_err(line_no, "LIT_CHUNK payload must be non-empty"))
                    }
                    "LIT_CHUNK" => Instruction::LitChunk { payload },
                    _ => {
                        out.extend_from(&payload);
                        continue;
                    }
                }
            }
            "EMIT_RUN" => {
                let bit = field(words.next(), "b", line_no)?;
                if bit > 1 {
                    return Err(parse_err(line_no, "b must be 0 or 1"));
                }
                let count = positive(field(words.next(), "c", line_no)?, "c", line_no)?;
                Instruction::EmitRun {
                    bit: bit == 1,
                    count,
                }
            }
            "COPY_BACK" => Instruction::CopyBack {
                distance: positive(field(words.next(), "d", line_no)?, "d", line_no)?,
                length: positive(field(words.next(), "l", line_no)?, "l", line_no)?,
            },
            "INPUT_REST" => Instruction::InputRest,
            "HALT" => Instruction::Halt,
            "LOOP" => Instruction::Loop {
                count: positive(field(words.next(), "c", line_no)?, "c", line_no)?,
                body_len: positive(field(words.next(), "len", line_no)?, "len", line_no)?,
            },
            other => return Err(parse_err(line_no, format!("unknown mnemonic {other:?}"))),
        };
        instr.encode_into(&mut out);
    }
    Ok(out)
}
