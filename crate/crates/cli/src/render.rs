//! Plain-text forms of the reports.

use std::fmt::Write;

use complab::oracle::ComplexityRecord;
use complab::theorems::{ConstantsReport, ExtractReport, Thm1Report, Thm2Report};
use complab::timebounded::DistinguisherReport;
use complab::toyvm::ExecResult;

pub fn verdict(pass: bool, body: String) -> String {
    format!("{body}{}\n", if pass { "PASS" } else { "FAIL" })
}

pub fn exec(r: &ExecResult) -> String {
    format!(
        "output {}\nsteps  {}\nhalt   {:?}\n",
        r.output.to_token(),
        r.steps,
        r.halt_reason
    )
}

pub fn complexity(r: &ComplexityRecord) -> String {
    let mut s = format!(
        "C = {}\nwitness {} ({} steps)\n",
        r.value,
        r.witness.to_token(),
        r.witness_steps
    );
    if let Some(b) = r.step_budget {
        let _ = writeln!(
            s,
            "budget {b}{}",
            if r.within_budget {
                ""
            } else {
                " (nothing fits; Print program shown)"
            }
        );
    }
    s
}

pub fn thm1(r: &Thm1Report) -> String {
    let mut s = format!(
        "m = {}, BB(m) = {}, p_m = {}, |q| = {}\n",
        r.m,
        r.t,
        r.p_m.to_token(),
        r.declared_length
    );
    let _ = writeln!(
        s,
        "{} strings: {} with C(x) <= m compressed optimally, {} bounded (max excess {})",
        r.outcomes.len(),
        r.optimal_cases,
        r.bounded_cases,
        r.max_bounded_excess.map_or("-".into(), |e| e.to_string())
    );
    let _ = writeln!(
        s,
        "corollary slack {} at {}, k_min = {}",
        r.corollary_slack.map_or("-".into(), |v| v.to_string()),
        r.corollary_tight
            .as_ref()
            .map_or("-".into(), |x| x.to_token()),
        r.k_min
    );
    for o in r.outcomes.iter().filter(|o| !o.ok) {
        let _ = writeln!(
            s,
            "  failed: x = {} C = {} |q(x)| = {}",
            o.x.to_token(),
            o.c,
            o.q_len
        );
    }
    verdict(r.pass, s)
}

pub fn thm2(r: &Thm2Report) -> String {
    let mut s = format!(
        "m = {}, n = {}, BB(m) = {}, x_adv = {} (C = {})\n",
        r.m,
        r.n,
        r.t,
        r.x_adv.to_token(),
        r.c_adv
    );
    let _ = writeln!(
        s,
        "{} programs up to {} bits, {} compression functions, {} compress x_adv below n",
        r.programs_enumerated,
        r.q_len_max,
        r.compression_functions,
        r.violations.len()
    );
    for v in &r.violations {
        let _ = writeln!(
            s,
            "  q = {} |q(x)| = {} steps = {}{}",
            v.q.to_token(),
            v.compressed_len,
            v.decompression_steps,
            if v.exceeds_bb { "" } else { "  COUNTEREXAMPLE" }
        );
    }
    let k = |k: Option<u32>| k.map_or("none".to_string(), |k| k.to_string());
    let _ = writeln!(
        s,
        "k: C(x_adv) bound {}, |q(x_adv)| bounds {}, both {}{}{}",
        k(r.k_item2),
        k(r.k_items34),
        k(r.k_min_items),
        if r.degenerate {
            " (degenerate: log n = 0)"
        } else {
            ""
        },
        if r.vacuous { " (vacuous)" } else { "" }
    );
    verdict(r.pass(), s)
}

pub fn constants(r: &ConstantsReport) -> String {
    let c = &r.constants;
    let opt = |v: Option<usize>| v.map_or("none".to_string(), |v| v.to_string());
    let mut s = format!(
        "k_print {}\nk_driver {}\nk_min_thm1 {}\nk_min_cor2 {}\nk_min_thm2 {}\n",
        c.k_print,
        c.k_driver,
        opt(c.k_min_thm1),
        r.k_min_cor2,
        opt(c.k_min_thm2)
    );
    for t in &r.tight {
        let _ = writeln!(
            s,
            "  {} = {} at m = {}, n = {}",
            t.constant, t.value, t.m, t.n
        );
    }
    if !r.degenerate.is_empty() {
        let _ = writeln!(s, "degenerate (n <= 1): {:?}", r.degenerate);
    }
    if !r.unsatisfiable.is_empty() {
        let _ = writeln!(s, "no k up to the search limit: {:?}", r.unsatisfiable);
    }
    s
}

pub fn extract(r: &ExtractReport) -> String {
    let mut s = format!(
        "{} n = {} m = {}: t' = {}, BB(m) = {}\nz = {}\n",
        r.compressor,
        r.n,
        r.m,
        r.t_prime,
        r.bb_m,
        r.z.to_token()
    );
    match &r.first_random {
        Some(y) => {
            let _ = writeln!(s, "first random string {}", y.to_token());
        }
        None => s.push_str("t' < BB(m): no guarantee\n"),
    }
    verdict(r.contract_holds, s)
}

pub fn distinguisher(r: &DistinguisherReport) -> String {
    format!(
        "{} on l = {}, L = {}, {} trials, rng_seed {}\nuniform accepted {} ({:.3})\nprg accepted     {} ({:.3})\nadvantage {:.3}\n",
        r.compressor,
        r.seed_len,
        r.out_len,
        r.trials,
        r.rng_seed,
        r.accepted_uniform,
        r.accept_rate_uniform,
        r.accepted_prg,
        r.accept_rate_prg,
        r.advantage
    )
}
