//! `complab`: command-line access to the toy machine, the exact oracles and
//! the compression checks.
//!
//! Bit strings are written as `0`/`1` characters; `_` is the empty string.
//! Exit status: 0 success, 1 a check ran and failed, 2 usage error or refusal.

mod render;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use complab::compressors::{is_compression_function, Codec, Compressor};
use complab::oracle::Oracle;
use complab::theorems::{self, checks};
use complab::timebounded::{run_distinguisher, TimeBound};
use complab::toyvm::{disassemble, exec};
use complab::{BitString, LabError};

#[derive(Parser, Debug)]
#[command(
    name = "complab",
    version,
    about = "Toy-machine Kolmogorov complexity lab"
)]
struct Cli {
    /// Print a JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
enum Command {
    /// Run or list machine programs.
    #[command(subcommand)]
    Vm(VmCommand),
    /// Exact complexity, busy beaver and A-set queries.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Compress one string with a codec or the BB-bounded search compressor.
    Compress(CompressArgs),
    /// Compression-function checks.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Exhaustive checks and the acceptance battery.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Recover the first random string of length m from a compression function.
    ExtractRandom(ExtractArgs),
    /// Run the compression distinguisher against the periodic PRG.
    Distinguish(DistinguishArgs),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
enum VmCommand {
    Run {
        #[arg(long)]
        program: BitString,
        #[arg(long, default_value = "_")]
        input: BitString,
        #[arg(long)]
        cap: Option<u64>,
    },
    Disasm {
        #[arg(long)]
        program: BitString,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
enum OracleCommand {
    /// C(x) with its shortlex-first witness.
    C {
        #[arg(long)]
        x: BitString,
    },
    /// C^t(x), with a fixed budget or t(|x|) = a*|x|^b + c.
    Ct {
        #[arg(long)]
        x: BitString,
        #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
        budget: Option<u64>,
        #[arg(long, value_name = "A,B,C")]
        poly: Option<TimeBound>,
    },
    /// BB(m) and p_m.
    Bb {
        #[arg(long)]
        m: usize,
    },
    /// A_s^len in shortlex order.
    Aset {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        len: usize,
    },
    /// Fraction of length-n strings with C(x) >= n.
    Fraction {
        #[arg(long)]
        n: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum CodecArg {
    Literal,
    Rle,
    Lz,
    Best,
    Thm1,
}

#[derive(Args, Debug, Serialize)]
struct CompressArgs {
    #[arg(long, value_enum)]
    codec: CodecArg,
    /// Parameter of the thm1 compressor.
    #[arg(long, required_if_eq("codec", "thm1"))]
    m: Option<usize>,
    #[arg(long)]
    x: BitString,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
enum CheckCommand {
    /// Whether q decompresses correctly on every string of length n.
    Cf {
        #[arg(long)]
        q: BitString,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
enum VerifyCommand {
    Thm1 {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        nmax: usize,
    },
    Thm2 {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        qmax: usize,
    },
    /// Smallest constants over a grid `M1-M2:N1-N2`.
    Constants {
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 8)]
        qmax: usize,
    },
    /// Every program halts on every input; the Print program is exact.
    Machine {
        #[arg(long, default_value_t = 14)]
        program_len: usize,
        #[arg(long, default_value_t = 6)]
        input_len: usize,
        #[arg(long, default_value_t = 10)]
        print_len: usize,
    },
    /// C(x) bounds, witnesses and C^t convergence for all short strings.
    Oracle {
        #[arg(long, default_value_t = 10)]
        len: usize,
    },
    /// A_{BB(l)}^l equals the random strings of length l.
    Aset {
        #[arg(long, default_value_t = 8)]
        len: usize,
    },
    /// verify thm1 for every m up to mmax.
    Thm1Grid {
        #[arg(long, default_value_t = 6)]
        mmax: usize,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[arg(long, default_value_t = 2)]
        slack: i64,
    },
    /// verify thm2 for every m <= mmax, m <= n <= nmax.
    Thm2Grid {
        #[arg(long, default_value_t = 4)]
        mmax: usize,
        #[arg(long, default_value_t = 5)]
        nmax: usize,
        #[arg(long, default_value_t = 10)]
        qmax: usize,
    },
    /// extract-random over the built-in compressor battery.
    Extraction {
        #[arg(long, default_value_t = 6)]
        nmax: usize,
        #[arg(long, default_value_t = 6)]
        mmax: usize,
    },
    /// Round trip and expansion of the best codec.
    Codecs {
        #[arg(long, default_value_t = 12)]
        exhaustive_len: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 256)]
        max_len: usize,
        #[arg(long, default_value_t = 1)]
        rng_seed: u64,
    },
    /// The distinguisher never accepts PRG outputs and often accepts uniform ones.
    Distinguisher {
        #[arg(long, default_value_t = 16)]
        seed_len: usize,
        #[arg(long, default_value_t = 64)]
        out_len: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        rng_seed: u64,
        #[arg(long, default_value_t = 0.3)]
        min_rate: f64,
    },
}

#[derive(Args, Debug, Serialize)]
struct ExtractArgs {
    /// Compressor program.
    #[arg(long, conflicts_with = "codec", required_unless_present = "codec")]
    q: Option<BitString>,
    /// Use a host codec instead of a program.
    #[arg(long, value_enum)]
    codec: Option<CodecArg>,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
}

#[derive(Args, Debug, Serialize)]
struct DistinguishArgs {
    #[arg(long)]
    seed_len: usize,
    #[arg(long)]
    out_len: usize,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    rng_seed: u64,
    #[arg(long, value_enum, default_value = "best")]
    codec: CodecArg,
}

/// Result of one command: payload, human text and whether the check passed.
struct Outcome {
    result: Value,
    text: String,
    ok: bool,
}

impl Outcome {
    fn new<T: Serialize>(result: &T, text: String, ok: bool) -> Self {
        Self {
            result: serde_json::to_value(result).expect("reports serialise"),
            text,
            ok,
        }
    }
}

fn compressor(
    codec: CodecArg,
    m: Option<usize>,
    oracle: &Arc<Oracle>,
) -> complab::Result<Compressor> {
    Ok(match codec {
        CodecArg::Literal => Compressor::codec(Codec::Literal),
        CodecArg::Rle => Compressor::codec(Codec::Rle),
        CodecArg::Lz => Compressor::codec(Codec::Lz),
        CodecArg::Best => Compressor::codec(Codec::Best),
        CodecArg::Thm1 => Compressor::theorem1(oracle.clone(), m.unwrap_or(0))?,
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Vm(VmCommand::Run { .. }) => "vm run",
        Command::Vm(VmCommand::Disasm { .. }) => "vm disasm",
        Command::Oracle(OracleCommand::C { .. }) => "oracle c",
        Command::Oracle(OracleCommand::Ct { .. }) => "oracle ct",
        Command::Oracle(OracleCommand::Bb { .. }) => "oracle bb",
        Command::Oracle(OracleCommand::Aset { .. }) => "oracle aset",
        Command::Oracle(OracleCommand::Fraction { .. }) => "oracle fraction",
        Command::Compress(_) => "compress",
        Command::Check(CheckCommand::Cf { .. }) => "check cf",
        Command::Verify(v) => match v {
            VerifyCommand::Thm1 { .. } => "verify thm1",
            VerifyCommand::Thm2 { .. } => "verify thm2",
            VerifyCommand::Constants { .. } => "verify constants",
            VerifyCommand::Machine { .. } => "verify machine",
            VerifyCommand::Oracle { .. } => "verify oracle",
            VerifyCommand::Aset { .. } => "verify aset",
            VerifyCommand::Thm1Grid { .. } => "verify thm1-grid",
            VerifyCommand::Thm2Grid { .. } => "verify thm2-grid",
            VerifyCommand::Extraction { .. } => "verify extraction",
            VerifyCommand::Codecs { .. } => "verify codecs",
            VerifyCommand::Distinguisher { .. } => "verify distinguisher",
        },
        Command::ExtractRandom(_) => "extract-random",
        Command::Distinguish(_) => "distinguish",
    }
}

fn run(command: &Command) -> complab::Result<Outcome> {
    let oracle = Arc::new(Oracle::default());
    Ok(match command {
        Command::Vm(VmCommand::Run {
            program,
            input,
            cap,
        }) => {
            let r = exec(program, input, *cap);
            Outcome::new(&r, render::exec(&r), true)
        }
        Command::Vm(VmCommand::Disasm { program }) => {
            let listing = disassemble(program);
            Outcome::new(
                &json!({ "program": program, "listing": listing }),
                listing,
                true,
            )
        }
        Command::Oracle(OracleCommand::C { x }) => {
            let r = oracle.complexity(x)?;
            Outcome::new(&r, render::complexity(&r), true)
        }
        Command::Oracle(OracleCommand::Ct { x, budget, poly }) => {
            let budget = match (budget, poly) {
                (Some(b), _) => *b,
                (None, Some(tb)) => tb.eval(x.len()),
                (None, None) => unreachable!("clap requires one of --budget, --poly"),
            };
            let r = oracle.complexity_time_bounded(x, budget)?;
            Outcome::new(&r, render::complexity(&r), true)
        }
        Command::Oracle(OracleCommand::Bb { m }) => {
            let r = oracle.busy_beaver(*m)?;
            let text = format!("BB({}) = {}\np_m   {}\n", r.m, r.bb, r.p_m.to_token());
            Outcome::new(&r, text, true)
        }
        Command::Oracle(OracleCommand::Aset { s, len }) => {
            let r = oracle.a_set(*s, *len)?;
            Outcome::new(&r, r.canonical_serialization(), true)
        }
        Command::Oracle(OracleCommand::Fraction { n }) => {
            let r = oracle.incompressible_fraction(*n)?;
            let text = format!("{}/{} = {:.6}\n", r.num, r.den, r.value());
            Outcome::new(&r, text, true)
        }
        Command::Compress(a) => {
            let c = compressor(a.codec, a.m, &oracle)?;
            let q = c.compress(&a.x);
            let run = complab::toyvm::u_eval(&q, None);
            let roundtrip = run.output == a.x;
            let r = json!({
                "codec": c.name,
                "x": a.x,
                "compressed": q,
                "x_len": a.x.len(),
                "compressed_len": q.len(),
                "decompression_steps": run.steps,
                "roundtrip": roundtrip,
            });
            let text = format!(
                "{}\n{} -> {} bits, decompresses in {} steps{}\n",
                q.to_token(),
                a.x.len(),
                q.len(),
                run.steps,
                if roundtrip {
                    ""
                } else {
                    " (ROUND TRIP FAILED)"
                }
            );
            Outcome::new(&r, text, roundtrip)
        }
        Command::Check(CheckCommand::Cf { q, n }) => {
            let c = Compressor::program(q.clone());
            let ok = is_compression_function(&c, *n, &oracle)?;
            let r = json!({ "q": q, "n": n, "is_compression_function": ok });
            Outcome::new(&r, format!("{ok}\n"), ok)
        }
        Command::Verify(v) => verify(v, &oracle)?,
        Command::ExtractRandom(a) => {
            let c = match (&a.q, a.codec) {
                (Some(q), _) => Compressor::program(q.clone()),
                (None, Some(codec)) => compressor(codec, None, &oracle)?,
                (None, None) => unreachable!("clap requires one of --q, --codec"),
            };
            let r = theorems::extract_random(&oracle, &c, a.n, a.m)?;
            Outcome::new(&r, render::extract(&r), r.contract_holds)
        }
        Command::Distinguish(a) => {
            let c = compressor(a.codec, None, &oracle)?;
            let r = run_distinguisher(&c, a.seed_len, a.out_len, a.trials, a.rng_seed)?;
            Outcome::new(&r, render::distinguisher(&r), true)
        }
    })
}

fn verify(v: &VerifyCommand, oracle: &Arc<Oracle>) -> complab::Result<Outcome> {
    Ok(match v {
        VerifyCommand::Thm1 { m, nmax } => {
            let r = theorems::verify_theorem1(oracle, *m, *nmax)?;
            Outcome::new(&r, render::thm1(&r), r.pass)
        }
        VerifyCommand::Thm2 { m, n, qmax } => {
            let r = theorems::verify_theorem2(oracle, *m, *n, *qmax)?;
            Outcome::new(&r, render::thm2(&r), r.pass())
        }
        VerifyCommand::Constants { grid, qmax } => {
            let grid = theorems::parse_grid(grid)?;
            let r = theorems::estimate_constants(oracle, &grid, *qmax)?;
            Outcome::new(&r, render::constants(&r), true)
        }
        VerifyCommand::Machine {
            program_len,
            input_len,
            print_len,
        } => {
            let r = checks::check_machine(*program_len, *input_len, *print_len);
            let text = format!(
                "{} executions, {} hit the cap, max {} steps; {} Print failures\n",
                r.executions,
                r.non_halting,
                r.max_steps,
                r.print_failures.len()
            );
            Outcome::new(&r, render::verdict(r.pass, text), r.pass)
        }
        VerifyCommand::Oracle { len } => {
            let r = checks::check_oracle(oracle, *len)?;
            let text = format!(
                "{} strings; C(x)-|x| histogram {:?}; failures: bound {}, witness {}, C^t {}\n",
                r.strings,
                r.excess_histogram,
                r.bound_failures.len(),
                r.witness_failures.len(),
                r.ct_failures.len()
            );
            Outcome::new(&r, render::verdict(r.pass, text), r.pass)
        }
        VerifyCommand::Aset { len } => {
            let r = checks::check_a_set_identity(oracle, *len)?;
            let mut text = String::from("len  BB  |A|  random  equal\n");
            for row in &r.rows {
                text += &format!(
                    "{:>3} {:>3} {:>4} {:>7}  {}\n",
                    row.len, row.bb, row.a_set_size, row.random_count, row.equal
                );
            }
            Outcome::new(&r, render::verdict(r.pass, text), r.pass)
        }
        VerifyCommand::Thm1Grid { mmax, nmax, slack } => {
            let r = checks::check_theorem1(oracle, *mmax, *nmax, *slack)?;
            let mut text = String::from(" m  pass  slack  k_min\n");
            for row in &r.rows {
                text += &format!(
                    "{:>2}  {:<5} {:>5} {:>6}\n",
                    row.m,
                    row.pass,
                    row.corollary_slack.map_or("-".into(), |s| s.to_string()),
                    row.k_min
                );
            }
            Outcome::new(&r, render::verdict(r.pass, text), r.pass)
        }
        VerifyCommand::Thm2Grid { mmax, nmax, qmax } => {
            let r = checks::check_theorem2(oracle, *mmax, *nmax, *qmax)?;
            let mut text = String::from(" m  n  x_adv   cfs  short  counterexamples\n");
            for row in &r.rows {
                text += &format!(
                    "{:>2} {:>2}  {:<7} {:>3} {:>6}  {}\n",
                    row.m,
                    row.n,
                    row.x_adv.to_token(),
                    row.compression_functions,
                    row.violations,
                    row.counterexamples.len()
                );
            }
            Outcome::new(&r, render::verdict(r.pass, text), r.pass)
        }
        VerifyCommand::Extraction { nmax, mmax } => {
            let r = checks::check_extraction(oracle, *nmax, *mmax)?;
            let text = format!(
                "{} instances, {} with t' >= BB(m), {} failures\n",
                r.instances,
                r.conditioned,
                r.failures.len()
            );
            Outcome::new(&r, render::verdict(r.pass, text), r.pass)
        }
        VerifyCommand::Codecs {
            exhaustive_len,
            samples,
            max_len,
            rng_seed,
        } => {
            let r = checks::check_codecs(*exhaustive_len, *samples, *max_len, *rng_seed);
            let text = format!(
                "{} strings, max expansion {}, {} failures\n",
                r.checked,
                r.max_expansion,
                r.failures.len()
            );
            Outcome::new(&r, render::verdict(r.pass, text), r.pass)
        }
        VerifyCommand::Distinguisher {
            seed_len,
            out_len,
            trials,
            rng_seed,
            min_rate,
        } => {
            let r =
                checks::check_distinguisher(*seed_len, *out_len, *trials, *rng_seed, *min_rate)?;
            Outcome::new(
                &r,
                render::verdict(r.pass, render::distinguisher(&r.report)),
                r.pass,
            )
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let name = command_name(&cli.command);
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            if cli.json {
                let envelope = json!({
                    "tool_version": env!("CARGO_PKG_VERSION"),
                    "command": name,
                    "parameters": cli.command,
                    "error": error_json(&e),
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&envelope).expect("serialisable")
                );
            }
            return ExitCode::from(2);
        }
    };
    if cli.json {
        let envelope = json!({
            "tool_version": env!("CARGO_PKG_VERSION"),
            "command": name,
            "parameters": cli.command,
            "result": outcome.result,
            "timing_ms": start.elapsed().as_millis() as u64,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&envelope).expect("serialisable")
        );
    } else {
        print!("{}", outcome.text);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn error_json(e: &LabError) -> Value {
    let kind = match e {
        LabError::CeilingExceeded { .. } => "ceiling_exceeded",
        LabError::Precondition(_) => "precondition",
        LabError::Parse(_) => "parse",
        LabError::Io(_) => "io",
    };
    json!({ "kind": kind, "message": e.to_string() })
}
