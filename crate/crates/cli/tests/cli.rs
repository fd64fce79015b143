use std::process::{Command, Output};

use serde_json::Value;

fn complab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_complab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = complab(&full);
    let v: Value = serde_json::from_slice(&o.stdout).expect("valid JSON");
    (v, o.status.code().unwrap())
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn vm_run_print_program() {
    let (v, code) = json(&["vm", "run", "--program", "00101", "--input", "_"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "vm run");
    assert_eq!(v["result"]["output"], "101");
    assert_eq!(v["result"]["steps"], 4);
    assert_eq!(v["result"]["halt_reason"], "NORMAL");
    assert_eq!(v["parameters"]["program"], "00101");
}

#[test]
fn vm_run_text() {
    let o = complab(&["vm", "run", "--program", "1100", "--input", "1011"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("output 1011\nsteps  5\n"));
}

#[test]
fn disasm_golden() {
    for (program, file) in [
        ("11100110010001111111", include_str!("golden/loop.disasm")),
        (
            "0100010111010111011001100110110011111",
            include_str!("golden/mixed.disasm"),
        ),
    ] {
        let o = complab(&["vm", "disasm", "--program", program]);
        assert!(o.status.success());
        assert_eq!(stdout(&o), file);
    }
}

#[test]
fn check_cf_exit_codes() {
    let (v, code) = json(&["check", "cf", "--q", "00", "--n", "1"]);
    assert_eq!(
        (v["result"]["is_compression_function"].as_bool(), code),
        (Some(false), 1)
    );
    let (v, code) = json(&["check", "cf", "--q", "0100101100", "--n", "4"]);
    assert_eq!(
        (v["result"]["is_compression_function"].as_bool(), code),
        (Some(true), 0)
    );
}

#[test]
fn refusals_exit_two() {
    let (v, code) = json(&["oracle", "c", "--x", "0000000000000000000000"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "ceiling_exceeded");
    assert_eq!(complab(&["oracle", "bb"]).status.code(), Some(2));
    assert_eq!(
        complab(&["vm", "run", "--program", "012"]).status.code(),
        Some(2)
    );
    assert_eq!(
        complab(&["verify", "thm2", "--m", "2", "--n", "4", "--qmax", "13"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        complab(&["extract-random", "--q", "00", "--n", "1", "--m", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn oracle_queries() {
    let (v, _) = json(&["oracle", "c", "--x", "0"]);
    assert_eq!(
        (
            v["result"]["value"].as_u64(),
            v["result"]["witness"].as_str()
        ),
        (Some(3), Some("000"))
    );
    let (v, _) = json(&["oracle", "ct", "--x", "_", "--budget", "0"]);
    assert_eq!(v["result"]["value"], 0);
    let (v, _) = json(&["oracle", "ct", "--x", "0", "--poly", "1,1,2"]);
    assert_eq!(v["result"]["step_budget"], 3);
    let (v, _) = json(&["oracle", "bb", "--m", "2"]);
    assert_eq!(
        (v["result"]["bb"].as_u64(), v["result"]["p_m"].as_str()),
        (Some(1), Some("00"))
    );
    let o = complab(&["oracle", "aset", "--s", "5", "--len", "2"]);
    assert_eq!(stdout(&o), "00\n01\n10\n11\n");
    let (v, _) = json(&["oracle", "fraction", "--n", "11"]);
    assert_eq!(
        (v["result"]["num"].as_u64(), v["result"]["den"].as_u64()),
        (Some(2046), Some(2048))
    );
}

#[test]
fn compress_codecs() {
    let zeros = "0".repeat(16);
    let (v, code) = json(&["compress", "--codec", "rle", "--x", &zeros]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["compressed"], "010000010000");
    let (v, _) = json(&["compress", "--codec", "thm1", "--m", "3", "--x", "0"]);
    assert_eq!(v["result"]["compressed"], "000");
    assert_eq!(
        complab(&["compress", "--codec", "thm1", "--x", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_commands() {
    let (v, code) = json(&["verify", "thm1", "--m", "6", "--nmax", "8"]);
    assert_eq!((v["result"]["pass"].as_bool(), code), (Some(true), 0));
    let (v, code) = json(&["verify", "thm2", "--m", "2", "--n", "4", "--qmax", "10"]);
    assert_eq!((v["result"]["x_adv"].as_str(), code), (Some("0000"), 0));
    let (v, code) = json(&["verify", "constants", "--grid", "2:4"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["constants"]["k_print"], 2);
    let (v, code) = json(&[
        "extract-random",
        "--q",
        "0100101100",
        "--n",
        "4",
        "--m",
        "0",
    ]);
    assert_eq!(
        (
            v["result"]["z"].as_str(),
            v["result"]["t_prime"].as_u64(),
            code
        ),
        (Some(""), Some(5), 0)
    );
}

#[test]
fn acceptance_commands_pass_and_are_deterministic() {
    let runs: [&[&str]; 8] = [
        &["verify", "machine"],
        &["verify", "oracle"],
        &["verify", "aset"],
        &["verify", "thm1-grid"],
        &["verify", "thm2-grid"],
        &["verify", "extraction"],
        &["verify", "codecs"],
        &["verify", "distinguisher"],
    ];
    for args in runs {
        let (a, code) = json(args);
        assert_eq!(code, 0, "{args:?}");
        assert_eq!(a["result"]["pass"], true);
        let (b, _) = json(args);
        assert_eq!(without_timing(a), without_timing(b), "{args:?}");
    }
}

#[test]
fn distinguish_reports_rates() {
    let args = [
        "distinguish",
        "--seed-len",
        "16",
        "--out-len",
        "64",
        "--trials",
        "200",
        "--rng-seed",
        "1",
    ];
    let (v, code) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["accept_rate_prg"], 0.0);
    assert_eq!(without_timing(v), without_timing(json(&args).0));
}
