//! Acceptance run: one [PASS]/[FAIL] line per criterion, exit 1 on any failure.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use dualbent_core::constructions::{instantiate, Construction};
use dualbent_core::field::SpaceDesc;
use dualbent_core::partitions::{run_equivalence_harness, PartitionSpec};
use dualbent_core::report::RunReport;
use dualbent_core::reproduce::{reproduce, Options, Scope};
use dualbent_core::selftest::{
    bent_census, pds_code_sweep, oracle_spaces, partition_sweep, pds_sweep, property_sweep, random_pfunc,
    random_quadratic, walsh_sweep, Sweep,
};
use dualbent_core::vdb::{component, VFunc};
use dualbent_core::walsh::PFunc;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const SEED: u64 = 1;

struct Outcome {
    passed: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { passed: true, notes: Vec::new() }
    }
    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.passed = false;
            self.notes.push(what.into());
        }
    }
    fn within(&mut self, t: Duration, limit: u64) {
        self.require(t.as_secs() < limit, format!("took {:.1}s, target {limit}s", t.as_secs_f64()));
    }
}

fn run(scope: Scope) -> (RunReport, Duration) {
    let t = Instant::now();
    let rep = reproduce(scope, &Options { source: None, seed: SEED }).expect("built-in tables need no I/O");
    (rep, t.elapsed())
}

fn detail<'a>(rep: &'a RunReport, name: &str) -> Option<&'a Value> {
    rep.checks.iter().find(|c| c.name == name).map(|c| &c.detail)
}

fn passed(rep: &RunReport, name: &str) -> bool {
    rep.checks.iter().any(|c| c.name == name && c.passed)
}

fn strs(v: &Value) -> Vec<String> {
    v.as_array().map(|a| a.iter().filter_map(|x| x.as_str().map(String::from)).collect()).unwrap_or_default()
}

fn failing(rep: &RunReport) -> Vec<String> {
    rep.checks.iter().filter(|c| !c.passed).map(|c| format!("{} failed", c.name)).collect()
}

/// Latin square type parameters with ε = 1: (N², s(N−1), N + s² − 3s, s² − s).
fn latin(n: i64, s: i64) -> [String; 4] {
    [n * n, s * (n - 1), n + s * s - 3 * s, s * s - s].map(|x| x.to_string())
}

fn ac1(rep: &RunReport, t: Duration) -> Outcome {
    let mut o = Outcome::new();
    o.within(t, 60);
    for name in failing(rep) {
        o.require(!name.contains("harness"), name);
    }
    o.require(passed(rep, "example1/condition_a"), "condition A");
    let mut seen = BTreeSet::new();
    for i in 0..4 {
        let Some(d) = detail(rep, &format!("example1/pds[{i}]")) else {
            o.require(false, format!("pds[{i}] missing"));
            continue;
        };
        let s: i64 = d["s"].as_str().and_then(|s| s.parse().ok()).unwrap_or(0);
        seen.insert(s);
        let c = &d["certificate"];
        let got = ["v", "k", "lambda", "mu"].map(|k| c[k].as_str().unwrap_or("").to_string());
        o.require(c["regular"] == true, format!("pds[{i}] not regular"));
        o.require([16, 17].contains(&s) && got == latin(64, s), format!("pds[{i}] parameters {got:?} with s = {s}"));
    }
    o.require(seen.iter().all(|s| [16, 17].contains(s)), format!("s values {seen:?}"));
    match detail(rep, "example1/scheme") {
        Some(d) => {
            o.require(d["is_scheme"] == true, "scheme axioms");
            o.require(d["classes"].as_array().map(|c| c.len()) == Some(5), "class count is not 4");
            o.require(d["amorphic_evidence"]["typing"] == "latin", "typing is not uniformly Latin");
            o.require(d["predicted_tensor_matches"] == true, "intersection numbers differ from the prediction");
        }
        None => o.require(false, "scheme missing"),
    }
    for i in 0..4 {
        let want: [&str; 2] = if i == 0 { ["512", "544"] } else { ["480", "512"] };
        match detail(rep, &format!("example1/code[{i}]")) {
            Some(d) => {
                o.require(d["two_weight"] == true, format!("code[{i}] not two-weight"));
                o.require(strs(&d["weights"]) == want, format!("code[{i}] weights {:?}", strs(&d["weights"])));
            }
            None => o.require(false, format!("code[{i}] missing")),
        }
    }
    match detail(rep, "example1/hadamard_products") {
        Some(d) => {
            let pairs = d["pairs"].as_array().cloned().unwrap_or_default();
            o.require(d["factor"] == "64" && pairs.len() == 3, "three pairs with factor 64");
            o.require(pairs.iter().all(|p| p["holds"] == true && p["route"] == "walsh"), "product identity via the Walsh route");
        }
        None => o.require(false, "products missing"),
    }
    o
}

fn ac2(rep: &RunReport, t: Duration) -> Outcome {
    let mut o = Outcome::new();
    o.within(t, 600);
    o.require(passed(rep, "example2/condition_a"), "condition A with ε = +1");
    o.require(passed(rep, "example2/unit_condition"), "unit condition");
    match detail(rep, "example2/hadamard_products") {
        Some(d) => {
            let pairs = d["pairs"].as_array().cloned().unwrap_or_default();
            let ordered: BTreeSet<(String, String)> = pairs
                .iter()
                .map(|p| (p["c"].as_str().unwrap_or("").into(), p["d"].as_str().unwrap_or("").into()))
                .collect();
            o.require(d["factor"] == "729" && ordered.len() == 8 * 7, "all 56 ordered pairs with factor 729");
            o.require(pairs.iter().all(|p| p["holds"] == true), "product identity");
        }
        None => o.require(false, "products missing"),
    }
    o
}

fn ac3(rep: &RunReport, t: Duration) -> Outcome {
    let mut o = Outcome::new();
    o.within(t, 300);
    o.require(passed(rep, "example3/bent_partition"), "bent partition certificate");
    match detail(rep, "example3/bent_partition") {
        Some(d) => {
            let got: BTreeSet<String> = strs(&d["spectrum"]).into_iter().collect();
            let allowed: BTreeSet<String> = ["-256", "768"].map(String::from).into();
            o.require(!got.is_empty() && got.is_subset(&allowed), format!("spectrum {got:?}"));
        }
        None => o.require(false, "certificate missing"),
    }
    o
}

fn ac4(rep: &RunReport, t: Duration) -> Outcome {
    let mut o = Outcome::new();
    o.within(t, 10);
    for name in failing(rep) {
        o.require(false, name);
    }
    match detail(rep, "example4/scheme") {
        Some(d) => {
            o.require(d["fiber_condition"] == true && d["is_scheme"] == true, "fiber condition and scheme axioms");
            let classes = d["classes"].as_array().map(|c| c.len()).unwrap_or(0);
            let points: usize = d["classes"].as_array().map(|c| c.iter().map(|x| x.as_array().map_or(0, |a| a.len())).sum()).unwrap_or(0);
            o.require(classes == 10 && points == 729, format!("{classes} relations over {points} points"));
            o.require(d["tensor"].as_array().map(|t| t.len()) == Some(1000), "full intersection tensor");
        }
        None => o.require(false, "scheme missing"),
    }
    o
}

fn ac5(rep: &RunReport, t: Duration) -> Outcome {
    let mut o = Outcome::new();
    o.within(t, 120);
    for (name, relations, points) in [("cor6-small", 10, 729), ("cor6-wide", 10, 6561), ("cor5-odd", 28, 19683)] {
        match detail(rep, &format!("{name}/scheme")) {
            Some(d) => {
                o.require(passed(rep, &format!("{name}/scheme")), format!("{name} scheme"));
                o.require(d["fiber_condition"] == true, format!("{name} fiber condition"));
                let cl = d["classes"].as_array().cloned().unwrap_or_default();
                let total: usize = cl.iter().map(|c| c.as_array().map_or(0, |a| a.len())).sum();
                o.require(cl.len() == relations && total == points, format!("{name}: {} relations over {total} points", cl.len()));
            }
            None => o.require(false, format!("{name} missing")),
        }
    }
    for name in failing(rep) {
        o.require(false, name);
    }
    o
}

fn sweep_ok(o: &mut Outcome, what: &str, s: &Sweep) {
    o.require(s.ok(), format!("{what}: {} mismatches {:?}", s.mismatches, s.notes));
}

fn ac6(rng: &mut ChaCha8Rng) -> Outcome {
    let mut o = Outcome::new();
    let spaces = oracle_spaces().expect("spaces");
    o.require(spaces.iter().all(|s| s.size() <= 1 << 12), "space above 2^12");
    let w = walsh_sweep(&spaces, 50, rng).expect("walsh sweep");
    o.require(w.cases == 50 * spaces.len() as u64, "50 functions per space");
    sweep_ok(&mut o, "walsh", &w);
    for space in [SpaceDesc::dot(2, 12).unwrap(), SpaceDesc::dot(3, 4).unwrap(), SpaceDesc::with_defaults(5, &[2, 2]).unwrap()] {
        let p = pds_sweep(&space, 200, rng).expect("pds sweep");
        o.require(p.cases == 200, "200 sets");
        sweep_ok(&mut o, &format!("pds on {}", space.header()), &p);
    }
    let g = partition_sweep(24, rng).expect("partition sweep");
    sweep_ok(&mut o, "partitions", &g);
    o.require(g.positives > 0 && g.positives < g.cases, "partition sweep lacks positives or negatives");
    o
}

fn components(f: &VFunc) -> Vec<PFunc> {
    (1..f.codomain.size()).map(|c| component(f, c).expect("component")).collect()
}

fn ac7(rng: &mut ChaCha8Rng) -> Outcome {
    let mut o = Outcome::new();
    let mut functions = Vec::new();
    for c in [
        Construction::Example1,
        Construction::Example4,
        Construction::by_name("cor6-small").unwrap(),
        Construction::by_name("cor5-odd").unwrap(),
        Construction::Example5Reduced,
    ] {
        functions.extend(components(&instantiate(&c).expect("construction")));
    }
    let bent = functions.len() as u64;
    for space in [SpaceDesc::dot(2, 6).unwrap(), SpaceDesc::dot(3, 4).unwrap(), SpaceDesc::with_defaults(5, &[2]).unwrap()] {
        for i in 0..40 {
            functions.push(if i % 2 == 0 { random_pfunc(&space, rng) } else { random_quadratic(&space, rng) });
        }
    }
    let s = property_sweep(&functions).expect("property sweep");
    sweep_ok(&mut o, "spectral identities", &s);
    o.require(s.positives >= bent, format!("only {} weakly regular of {bent} bent components", s.positives));
    let l = pds_code_sweep(100, rng).expect("pds and code sweep");
    o.require(l.cases == 100, "100 sets");
    sweep_ok(&mut o, "pds vs two-weight", &l);
    o
}

fn ac8(reps: &[&RunReport], rng: &mut ChaCha8Rng) -> Outcome {
    let mut o = Outcome::new();
    for (rep, name) in reps.iter().zip(["example1/harness", "example2/harness", "example3/harness"]) {
        o.require(passed(rep, name), format!("{name} not all true"));
    }
    let f = instantiate(&Construction::Example1).expect("example1");
    let q = f.codomain.size();
    for _ in 0..3 {
        let mut g = f.clone();
        let x = rng.gen_range(1..g.values.len());
        g.values[x] = (g.values[x] + rng.gen_range(1..q)) % q;
        let h = run_equivalence_harness(&PartitionSpec::from_function(&g), SEED).expect("harness");
        o.require(!h.all_true(), format!("perturbation at {x} still all true"));
    }
    o
}

/// Independent count: integer butterflies on ±1 vectors, bent iff every
/// coefficient has absolute value 4.
fn census_oracle() -> u64 {
    let mut count = 0;
    for t in 0u32..1 << 16 {
        let mut w: Vec<i32> = (0..16).map(|x| if (t >> x) & 1 == 1 { -1 } else { 1 }).collect();
        let mut h = 1;
        while h < 16 {
            for i in (0..16).step_by(2 * h) {
                for j in i..i + h {
                    let (a, b) = (w[j], w[j + h]);
                    w[j] = a + b;
                    w[j + h] = a - b;
                }
            }
            h *= 2;
        }
        count += u64::from(w.iter().all(|v| v.abs() == 4));
    }
    count
}

fn ac9() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let got = bent_census().expect("census");
    o.within(t.elapsed(), 300);
    let oracle = census_oracle();
    o.require(got == 896 && oracle == 896, format!("library {got}, oracle {oracle}, recorded 896"));
    o
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut results: Vec<(&str, Outcome, Duration)> = Vec::new();
    let timed = |name: &'static str, f: &mut dyn FnMut() -> Outcome, results: &mut Vec<(&str, Outcome, Duration)>| {
        let t = Instant::now();
        let o = f();
        results.push((name, o, t.elapsed()));
    };

    let (r1, t1) = run(Scope::Example1);
    let (r2, t2) = run(Scope::Example2);
    let (r3, t3) = run(Scope::Example3);
    let (r4, t4) = run(Scope::Example4);
    let (r5, pattern) = run(Scope::Substitutes);
    results.push(("AC1 example 1", ac1(&r1, t1), t1));
    results.push(("AC2 example 2", ac2(&r2, t2), t2));
    results.push(("AC3 example 3", ac3(&r3, t3), t3));
    results.push(("AC4 example 4", ac4(&r4, t4), t4));
    results.push(("AC5 example 5 substitutes", ac5(&r5, pattern), pattern));
    timed("AC6 oracle equivalences", &mut || ac6(&mut rng), &mut results);
    let mut rng7 = ChaCha8Rng::seed_from_u64(SEED + 7);
    timed("AC7 property suites", &mut || ac7(&mut rng7), &mut results);
    let mut rng8 = ChaCha8Rng::seed_from_u64(SEED + 8);
    timed("AC8 equivalence harness", &mut || ac8(&[&r1, &r2, &r3], &mut rng8), &mut results);
    timed("AC9 bent census", &mut ac9, &mut results);

    let mut all = true;
    for (name, o, t) in &results {
        all &= o.passed;
        println!("[{}] {name} ({:.1}s)", if o.passed { "PASS" } else { "FAIL" }, t.as_secs_f64());
        for n in &o.notes {
            println!("       {n}");
        }
    }
    if !all {
        std::process::exit(1);
    }
}
