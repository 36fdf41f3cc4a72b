//! Acceptance run: one line per criterion, then a nonzero exit if any failed.

use std::process::Command;
use std::time::{Duration, Instant};

use fpinj::harness::{run_controls, run_suite, suite, Config, TrialReport, CONTROL_TRIALS};
use serde_json::Value;

struct Check {
    ok: bool,
    detail: String,
}

fn suite_run(name: &str, cfg: &Config, trials: usize) -> Vec<TrialReport> {
    run_suite(suite(name).expect("registered suite"), cfg, trials)
}

fn failures(rs: &[TrialReport]) -> Vec<String> {
    rs.iter().filter(|r| !r.pass).map(|r| format!("{}#{}", r.suite, r.trial)).collect()
}

fn count(rs: &[TrialReport], key: &str, want: bool) -> usize {
    rs.iter().filter(|r| r.verdicts[key] == Value::Bool(want)).count()
}

fn both_ways(rs: &[TrialReport], key: &str) -> (usize, usize, bool) {
    let (t, f) = (count(rs, key, true), count(rs, key, false));
    (t, f, t > 0 && f > 0)
}

fn cfg(seed: u64) -> Config {
    Config { seed, ..Config::default() }
}

fn rootedness() -> Check {
    let c = Config { max_vertices: 8, ..cfg(42) };
    let rs = suite_run("rootedness", &c, 500);
    let fixture_unrooted = rs[0].verdicts["right_rooted"] == false && rs[0].verdicts["cycle"] == true;
    let (rooted, unrooted, mixed) = both_ways(&rs, "right_rooted");
    let bad = failures(&rs);
    Check {
        ok: rs.len() == 500 && bad.is_empty() && fixture_unrooted && mixed,
        detail: format!(
            "{}/500 agree, {rooted} rooted / {unrooted} not, loop quiver not rooted: {fixture_unrooted}",
            500 - bad.len()
        ),
    }
}

fn purity() -> Check {
    let c = Config { max_vertices: 4, moduli: vec![2, 3, 4, 8, 9], ..cfg(42) };
    let rs = suite_run("purity", &c, 300);
    let (pure, impure, mixed) = both_ways(&rs, "pure");
    let xi = suite_run("nonpure_fixture", &c, 3);
    let xi_ok = xi.len() == 3
        && xi.iter().all(|r| {
            let v = &r.verdicts;
            r.pass && v["exact"] == true && v["vertex_split"] == true && v["pure"] == false && v["dual_split"] == false
        });
    let bad = failures(&rs);
    Check {
        ok: rs.len() == 300 && bad.is_empty() && mixed && xi_ok,
        detail: format!(
            "{}/300 three-way agree, {pure} pure / {impure} not, xi exact+vertex-split+not pure: {xi_ok}",
            300 - bad.len()
        ),
    }
}

fn classification() -> Check {
    let rs = suite_run("classification", &cfg(42), 300);
    let agree = rs
        .iter()
        .filter(|r| {
            let v = &r.verdicts;
            v["injective"] == v["oracle"]
                && v["strongly_fp_injective"] == v["definitional"]
                && v["fp_injective"] == v["injective"]
                && v["strongly_fp_injective"] == v["injective"]
        })
        .count();
    let (inj, not, mixed) = both_ways(&rs, "injective");
    let bad = failures(&rs);
    Check {
        ok: rs.len() == 300 && bad.is_empty() && agree == 300 && mixed,
        detail: format!("{agree}/300 agree, {inj} injective / {not} not"),
    }
}

fn gorenstein() -> Check {
    let c = Config { moduli: vec![4, 9], ..cfg(42) };
    let rs = suite_run("gorenstein", &c, 200);
    let agree = rs
        .iter()
        .filter(|r| {
            let v = &r.verdicts;
            v["gorenstein"] == v["psi_class"]
                && v["gorenstein"] == v["totally_acyclic"]
                && v["gorenstein"] == v["psi_epi"]
        })
        .count();
    let f = &rs[0].verdicts;
    let fixture = f["gorenstein"] == true && f["injective"] == false;
    let (g, not, mixed) = both_ways(&rs, "gorenstein");
    let bad = failures(&rs);
    Check {
        ok: rs.len() == 200 && bad.is_empty() && agree == 200 && fixture && mixed,
        detail: format!(
            "{agree}/200 agree, {g} Gorenstein / {not} not, fixture Gorenstein and not injective: {fixture}"
        ),
    }
}

const CLOSURE_SUITES: [&str; 6] =
    ["closure", "stability", "products", "right_adjoint", "totally_acyclic_injectivity", "collapse"];

fn closure() -> Check {
    let c = cfg(42);
    let mut violations = Vec::new();
    let mut controls = Vec::new();
    for name in CLOSURE_SUITES {
        violations.extend(failures(&suite_run(name, &c, 200)));
        let ctl = run_controls(suite(name).expect("registered suite"), &c, CONTROL_TRIALS).expect("has controls");
        controls.push(format!("{name} {}", ctl.verdicts["detected"]));
        if !ctl.pass {
            violations.push(ctl.suite);
        }
    }
    Check {
        ok: violations.is_empty(),
        detail: format!(
            "{} suites x 200, violations {:?}, controls detected of {CONTROL_TRIALS}: {}",
            CLOSURE_SUITES.len(),
            violations,
            controls.join(", ")
        ),
    }
}

fn adjunctions() -> Check {
    let c = cfg(42);
    let adj = suite_run("adjunction", &c, 100);
    let ra = suite_run("right_adjoint", &c, 100);
    let all = |k: &str| adj.iter().all(|r| r.verdicts[k] == true);
    let parts =
        ["hom_cardinality", "round_trip", "natural", "tensor_cardinality", "tensor_injective", "tensor_natural"];
    let each: Vec<_> = parts.iter().map(|p| format!("{p} {}", all(p))).collect();
    let bad: Vec<_> = failures(&adj).into_iter().chain(failures(&ra)).collect();
    Check {
        ok: adj.len() == 100 && ra.len() == 100 && bad.is_empty() && parts.iter().all(|p| all(p)),
        detail: format!("200/200 expected, failures {:?}; {}", bad, each.join(", ")),
    }
}

fn ext_engine() -> Check {
    let rs = suite_run("ext", &cfg(42), 200);
    let stalks = rs[0].verdicts["ext1"] == serde_json::json!([2]) && rs[1].verdicts["ext1"] == serde_json::json!([]);
    let brute = rs.iter().filter(|r| !r.verdicts["brute_force"].is_null()).count();
    let ext0 = count(&rs, "ext0_is_hom", true);
    let shifts = rs.iter().filter(|r| r.verdicts["shift1"] == true && r.verdicts["shift2"] == true).count();
    let nonzero = rs.iter().filter(|r| r.verdicts["ext1"].as_array().is_some_and(|a| !a.is_empty())).count();
    let bad = failures(&rs);
    Check {
        ok: rs.len() == 200 && bad.is_empty() && stalks && brute == 200 && ext0 == 200 && shifts >= 100 && nonzero > 0,
        detail: format!(
            "brute force on {brute}/200, Ext^0 = Hom {ext0}/200, shifting {shifts}/200, nonzero Ext^1 {nonzero}, \
             A2 stalks [2] and []: {stalks}"
        ),
    }
}

fn determinism() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_fpinj"))
            .args(["verify", "all", "--seed", "42", "--json"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout;
    let lines = a.stdout.iter().filter(|&&c| c == b'\n').count();
    Check {
        ok: same && !a.stdout.is_empty() && a.status.success() && b.status.success(),
        detail: format!(
            "{lines} records, byte-identical: {same}, exit codes {:?} {:?}",
            a.status.code(),
            b.status.code()
        ),
    }
}

type Criterion = (&'static str, fn() -> Check, u64);

fn main() {
    let criteria: [Criterion; 8] = [
        ("rootedness", rootedness, 5),
        ("purity bridge", purity, 60),
        ("classification", classification, 60),
        ("gorenstein", gorenstein, 60),
        ("closure suites", closure, 60),
        ("adjunctions", adjunctions, 30),
        ("ext engine", ext_engine, 60),
        ("determinism", determinism, 300),
    ];
    let start = Instant::now();
    let mut all = true;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let c = f();
        let took = t.elapsed();
        let ok = c.ok && took < Duration::from_secs(*limit);
        all &= ok;
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("criterion {} {verdict} {name}: {} ({:.2}s, limit {limit}s)", i + 1, c.detail, took.as_secs_f64());
    }
    let total = start.elapsed();
    let in_budget = total < Duration::from_secs(300);
    all &= in_budget;
    println!("acceptance {}: total {:.2}s, limit 300s", if all { "PASS" } else { "FAIL" }, total.as_secs_f64());
    if !all {
        std::process::exit(1);
    }
}
