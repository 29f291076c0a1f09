//! The acceptance suite: ten criteria, each reported as one pass/fail line.
//! Shared by `dirac selftest` and the `acceptance` test target.

use crate::runner::{run_text, Bundle, Engine, RunOptions};
use crate::scenario::Task;
use dirac_core::cat_o::verma_window;
use dirac_core::dirac::{analyze_weight, assemble_block, block_weights, diag_action};
use dirac_core::liealg::{build_chevalley_basis, Gen};
use dirac_core::linalg::q;
use dirac_core::roots::{build_root_system, validate_pair, Weight};
use dirac_core::spinor::{build_spin_module, SpinModule};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

pub const SL3_WORKED_EXAMPLE: &str = include_str!("../scenarios/sl3-worked-example.json");
pub const JORDAN_FIXTURE: &str = include_str!("../scenarios/jordan-fixture.json");
pub const SU21_HODGE: &str = include_str!("../scenarios/su21-hodge.json");
pub const A1_CIRCLE: &str = include_str!("../scenarios/a1-circle.json");

pub const PINNED: &[(&str, &str)] = &[
    ("sl3-worked-example", SL3_WORKED_EXAMPLE),
    ("jordan-fixture", JORDAN_FIXTURE),
    ("su21-hodge", SU21_HODGE),
    ("a1-circle", A1_CIRCLE),
];

#[derive(Clone, Debug)]
pub struct Criterion {
    pub id: usize,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Criterion {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2} {}: {} ({:.2} s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.seconds
        )
    }
}

pub const TITLES: [&str; 10] = [
    "sl(3) worked example",
    "Kostant kernel formula",
    "square formula and eigenvalues",
    "Dirac cohomology of simple Verma modules",
    "nonvanishing of the top vector",
    "higher Dirac index",
    "exact circle",
    "Hodge comparison",
    "infinitesimal character audit",
    "structural properties",
];

fn scenario(name: &str, ty: &str, delta_h: Value, module: Value, depth: i64, tasks: &[&str]) -> String {
    json!({
        "name": name,
        "cartan_type": ty,
        "delta_h": delta_h,
        "module": module,
        "depth": depth,
        "tasks": tasks,
    })
    .to_string()
}

const ANALYSIS: &[&str] = &["dirac", "higher", "index", "vogan"];

fn with(extra: &[&'static str]) -> Vec<&'static str> {
    let mut v = ANALYSIS.to_vec();
    v.extend_from_slice(extra);
    v
}

/// Finite-dimensional modules for the kernel formula.
pub fn kostant_scenarios() -> Vec<String> {
    let t = with(&["kostant"]);
    let mut out = Vec::new();
    for k in 0..=4 {
        out.push(scenario(
            &format!("kostant-a1-{}", k),
            "A1",
            json!([]),
            json!({"kind": "finite", "lambda": [k]}),
            10,
            &t,
        ));
    }
    for (i, l) in [[0, 0], [1, 0], [1, 1]].iter().enumerate() {
        out.push(scenario(
            &format!("kostant-a2-pair-{}", i),
            "A2",
            json!([[1, 0]]),
            json!({"kind": "finite", "lambda": l}),
            10,
            &t,
        ));
    }
    out.push(scenario("kostant-a2-cartan", "A2", json!([]), json!({"kind": "finite", "lambda": [0, 0]}), 10, &t));
    out
}

/// Antidominant Verma modules: one integral weight on the edge and two non-integral ones per pair.
pub fn simple_verma_scenarios() -> Vec<String> {
    let t = with(&["simple_verma"]);
    let mut out = vec![SL3_WORKED_EXAMPLE.to_string()];
    for (i, l) in ["-1", "-1/2", "-7/3"].iter().enumerate() {
        out.push(scenario(&format!("verma-a1-{}", i), "A1", json!([]), json!({"kind": "verma", "lambda": [l]}), 8, &t));
    }
    for (i, l) in [["-1/2", "-1/3"], ["-3/2", "1/4"]].iter().enumerate() {
        out.push(scenario(
            &format!("verma-a2-pair-{}", i),
            "A2",
            json!([[1, 0]]),
            json!({"kind": "verma", "lambda": l}),
            8,
            &t,
        ));
    }
    for (i, l) in [["-1", "-1"], ["-1/2", "-1/3"], ["-3/2", "1/4"]].iter().enumerate() {
        out.push(scenario(
            &format!("verma-a2-cartan-{}", i),
            "A2",
            json!([]),
            json!({"kind": "verma", "lambda": l}),
            8,
            &t,
        ));
    }
    out
}

/// `0 -> M(s.lambda) -> M(lambda) -> L(lambda) -> 0` for A1 and one split sequence.
pub fn circle_scenarios() -> Vec<String> {
    let t = with(&["circle"]);
    let mut out = Vec::new();
    for k in 0..=2i64 {
        out.push(scenario(
            &format!("circle-a1-{}", k),
            "A1",
            json!([]),
            json!({"kind": "ses", "lambda": [k], "gamma": [k + 1]}),
            8,
            &t,
        ));
    }
    out.push(scenario(
        "circle-a1-split",
        "A1",
        json!([]),
        json!({"kind": "split_ses", "first": {"kind": "verma", "lambda": [0]}, "second": {"kind": "verma", "lambda": [-2]}}),
        8,
        &t,
    ));
    out
}

fn hodge_scenario(name: &str, ty: &str, delta_h: Value, module: Value, depth: i64, unitary: bool) -> String {
    let mut v: Value =
        serde_json::from_str(&scenario(name, ty, delta_h, module, depth, &["dirac", "hodge", "vogan"])).unwrap();
    if !unitary {
        v["expect_unitary"] = json!(false);
    }
    v.to_string()
}

/// Unitary modules for Hermitian pairs, then the deliberately non-unitary ones.
pub fn hodge_scenarios() -> (Vec<String>, Vec<String>) {
    let good = vec![
        hodge_scenario("hodge-a1", "A1", json!([]), json!({"kind": "verma", "lambda": [-1]}), 8, true),
        SU21_HODGE.to_string(),
    ];
    let bad = vec![
        hodge_scenario("hodge-a1-indefinite", "A1", json!([]), json!({"kind": "verma", "lambda": [1]}), 6, false),
        hodge_scenario(
            "hodge-su21-verma",
            "A2",
            json!([[1, 0]]),
            json!({"kind": "verma", "lambda": [-1, -1]}),
            6,
            false,
        ),
    ];
    (good, bad)
}

/// Candidates for the Jordan fixture, most singular first.
pub fn jordan_candidates() -> Vec<String> {
    let mut out = Vec::new();
    for l in [-1i64, 0, -2, 1, -3, 2] {
        for f in [1i64, 2] {
            out.push(scenario(
                "jordan-fixture",
                "A1",
                json!([]),
                json!({"kind": "tensor", "base": {"kind": "verma", "lambda": [l]}, "finite": [f]}),
                8,
                ANALYSIS,
            ));
        }
    }
    out
}

/// Runs scenarios once each and keeps the bundles.
pub struct Suite {
    pub jobs: usize,
    cache: BTreeMap<String, Result<Bundle, String>>,
}

impl Suite {
    pub fn new(jobs: usize) -> Suite {
        Suite { jobs, cache: BTreeMap::new() }
    }

    pub fn run(&mut self, text: &str) -> Result<&Bundle, String> {
        if !self.cache.contains_key(text) {
            let r = run_text(text, &RunOptions { depth: None, jobs: self.jobs }).map_err(|e| e.to_string());
            self.cache.insert(text.to_string(), r);
        }
        self.cache[text].as_ref().map_err(|e| e.clone())
    }

    pub fn bundles(&self) -> impl Iterator<Item = &Bundle> {
        self.cache.values().filter_map(|r| r.as_ref().ok())
    }

    fn run_many(&mut self, texts: &[String]) -> Vec<(String, Result<Bundle, String>)> {
        texts.iter().map(|t| (t.clone(), self.run(t).cloned())).collect()
    }
}

fn assertion_ok(b: &Bundle, task: Task, name: &str) -> bool {
    b.task(task).and_then(|t| t.assertion(name)).map_or(false, |a| a.pass)
}

/// All assertions of every task pass; otherwise the first failure.
fn all_pass(results: &[(String, Result<Bundle, String>)]) -> Result<usize, String> {
    for (_, r) in results {
        match r {
            Ok(b) => {
                if let Some(f) = b.failures().first() {
                    return Err(format!("{}: {}", b.scenario, f));
                }
            }
            Err(e) => return Err(e.clone()),
        }
    }
    Ok(results.len())
}

fn c1(s: &mut Suite) -> (bool, String) {
    let t0 = Instant::now();
    let b = match s.run(SL3_WORKED_EXAMPLE) {
        Ok(b) => b.clone(),
        Err(e) => return (false, e),
    };
    let secs = t0.elapsed().as_secs_f64();
    let sv = b.task(Task::SimpleVerma).unwrap();
    let blocks = sv.doc["blocks"].as_array().map_or(0, |a| a.len());
    let hd_total: u64 =
        sv.doc["blocks"].as_array().map_or(0, |a| a.iter().map(|x| x["hd"].as_u64().unwrap_or(0)).sum());
    let ok = b.failures().is_empty()
        && assertion_ok(&b, Task::SimpleVerma, "character")
        && assertion_ok(&b, Task::SimpleVerma, "top_line")
        && assertion_ok(&b, Task::Dirac, "nonvanishing")
        && secs < 10.0;
    let first = b.failures().first().cloned().unwrap_or_default();
    (
        ok,
        format!(
            "{} blocks to depth 8, H_D total {} matches M_h(-rho_h), top line 1-dimensional {}",
            blocks, hd_total, first
        )
        .trim_end()
        .to_string(),
    )
}

fn c2(s: &mut Suite) -> (bool, String) {
    let t0 = Instant::now();
    let r = s.run_many(&kostant_scenarios());
    let secs = t0.elapsed().as_secs_f64();
    let mut cubic = false;
    for (_, b) in &r {
        if let Ok(b) = b {
            if b.scenario == "kostant-a2-cartan" {
                let k = b.task(Task::Kostant).unwrap();
                cubic = k.doc["cubic_nonzero"].as_bool() == Some(true)
                    && assertion_ok(b, Task::Kostant, "cubic_kills_vacuum");
            }
        }
    }
    match all_pass(&r) {
        Ok(n) => {
            (cubic && secs < 30.0, format!("{} finite-dimensional modules, nonzero cubic term certified: {}", n, cubic))
        }
        Err(e) => (false, e),
    }
}

fn catalog() -> Vec<String> {
    let mut v = vec![SL3_WORKED_EXAMPLE.to_string(), JORDAN_FIXTURE.to_string()];
    v.extend(kostant_scenarios());
    v.extend(simple_verma_scenarios());
    v.extend(circle_scenarios());
    let (good, bad) = hodge_scenarios();
    v.extend(good);
    v.extend(bad);
    v
}

fn over_dirac(s: &mut Suite, names: &[&str]) -> (bool, String) {
    let r = s.run_many(&catalog());
    let mut n = 0;
    for (_, b) in &r {
        let b = match b {
            Ok(b) => b,
            Err(e) => return (false, e.clone()),
        };
        if b.task(Task::Dirac).is_none() {
            continue;
        }
        for name in names {
            if !assertion_ok(b, Task::Dirac, name) {
                let d =
                    b.task(Task::Dirac).and_then(|t| t.assertion(name)).map(|a| a.detail.clone()).unwrap_or_default();
                return (false, format!("{}: {} {}", b.scenario, name, d));
            }
        }
        n += 1;
    }
    (true, format!("{} scenarios", n))
}

fn c3(s: &mut Suite) -> (bool, String) {
    let (ok, d) = over_dirac(s, &["square_formula", "eigenvalues_predicted"]);
    let blocks: usize = s
        .bundles()
        .filter_map(|b| b.task(Task::Dirac))
        .map(|t| t.doc["blocks"].as_array().map_or(0, |a| a.len()))
        .sum();
    (ok, format!("{}, {} blocks with exact square identity and predicted spectrum", d, blocks))
}

fn c4(s: &mut Suite) -> (bool, String) {
    let r = s.run_many(&simple_verma_scenarios());
    match all_pass(&r) {
        Ok(n) => (true, format!("{} antidominant weights over three pairs, characters equal to depth 8", n)),
        Err(e) => (false, e),
    }
}

fn c5(s: &mut Suite) -> (bool, String) {
    let (ok, d) = over_dirac(s, &["nonvanishing"]);
    (ok, format!("top vector in ker D and outside im D in {}", d))
}

fn c6(s: &mut Suite) -> (bool, String) {
    let mut verma = simple_verma_scenarios();
    verma.extend(circle_scenarios());
    let r = s.run_many(&verma);
    for (_, b) in &r {
        let b = match b {
            Ok(b) => b,
            Err(e) => return (false, e.clone()),
        };
        if b.task(Task::Index).is_none() {
            continue;
        }
        if !assertion_ok(b, Task::Index, "index_identity") || !assertion_ok(b, Task::Higher, "direct_equals_jordan") {
            return (false, format!("{}: index or H_top mismatch", b.scenario));
        }
    }
    let mut found = None;
    for c in jordan_candidates() {
        match s.run(&c) {
            Ok(b) => {
                if b.task(Task::Higher).and_then(|t| t.doc["max_jordan"].as_u64()).unwrap_or(0) >= 2 {
                    found = Some(c);
                    break;
                }
            }
            Err(e) => return (false, e),
        }
    }
    let pinned: Value = serde_json::from_str(JORDAN_FIXTURE).unwrap();
    let found_module = found.as_ref().map(|c| serde_json::from_str::<Value>(c).unwrap()["module"].clone());
    if found_module.as_ref() != Some(&pinned["module"]) {
        return (false, "search did not reproduce the pinned fixture".into());
    }
    let b = match s.run(JORDAN_FIXTURE) {
        Ok(b) => b,
        Err(e) => return (false, e),
    };
    let mj = b.task(Task::Higher).and_then(|t| t.doc["max_jordan"].as_u64()).unwrap_or(0);
    let ok = mj >= 2 && b.failures().is_empty();
    (ok, format!("{} Verma and sequence scenarios; fixture M(-rho) x F(1) has a Jordan block of size {}", r.len(), mj))
}

fn c7(s: &mut Suite) -> (bool, String) {
    let r = s.run_many(&circle_scenarios());
    let weights: usize = r
        .iter()
        .filter_map(|(_, b)| b.as_ref().ok())
        .filter_map(|b| b.task(Task::Circle))
        .map(|t| t.doc["weights"].as_array().map_or(0, |a| a.len()))
        .sum();
    match all_pass(&r) {
        Ok(n) => (true, format!("{} sequences, {} weights exact at all six nodes", n, weights)),
        Err(e) => (false, e),
    }
}

fn c8(s: &mut Suite) -> (bool, String) {
    let (good, bad) = hodge_scenarios();
    let rg = s.run_many(&good);
    if let Err(e) = all_pass(&rg) {
        return (false, e);
    }
    let rb = s.run_many(&bad);
    if let Err(e) = all_pass(&rb) {
        return (false, e);
    }
    let negatives: Vec<String> = rb
        .iter()
        .filter_map(|(_, b)| b.as_ref().ok())
        .map(|b| {
            let first = b.task(Task::Hodge).and_then(|t| t.doc["first_indefinite_weight"].as_str().map(str::to_string));
            format!("{} indefinite at {}", b.scenario, first.unwrap_or_default())
        })
        .collect();
    (true, format!("{} unitary modules pass; {}", rg.len(), negatives.join("; ")))
}

fn c9(s: &mut Suite) -> (bool, String) {
    let r = s.run_many(&catalog());
    let mut n = 0;
    let mut constituents = 0;
    for (_, b) in &r {
        let b = match b {
            Ok(b) => b,
            Err(e) => return (false, e.clone()),
        };
        if let Some(t) = b.task(Task::Vogan) {
            if !t.pass() {
                return (false, format!("{}: conjugacy fails", b.scenario));
            }
            constituents += t.doc["constituents"].as_array().map_or(0, |a| a.len());
            n += 1;
        }
    }
    (true, format!("{} scenarios, {} h-constituents conjugate to lambda + rho", n, constituents))
}

/// Structural checks over every supported type.
pub fn structural_checks(jobs: usize) -> Result<String, String> {
    let mut done = Vec::new();
    for ty in ["A1", "A2", "A3", "A1xA1", "B2", "G2"] {
        let rs = build_root_system(ty).map_err(|e| e.to_string())?;
        let g = build_chevalley_basis(&rs);
        if let Some(t) = g.jacobi_violation() {
            return Err(format!("{}: Jacobi fails at {:?}", ty, t));
        }
        if let Some(p) = g.killing_trace_mismatch() {
            return Err(format!("{}: Killing form differs from the ad trace at {:?}", ty, p));
        }
        for i in 0..g.n_pos {
            let e = g.idx(Gen::E(i));
            for j in 0..g.n_pos {
                for (_, c) in g.bracket_chevalley(e, g.idx(Gen::E(j))) {
                    if !c.is_integer() {
                        return Err(format!("{}: non-integral structure constant", ty));
                    }
                }
            }
        }
    }
    done.push("Jacobi, Killing trace and integrality on six types");

    for (ty, h) in [
        ("A1", vec![]),
        ("A2", vec![vec![1i64, 0]]),
        ("A2", vec![]),
        ("B2", vec![]),
        ("B2", vec![vec![0, 1]]),
        ("G2", vec![vec![1, 0]]),
    ] {
        let rs = build_root_system(ty).map_err(|e| e.to_string())?;
        let e = Engine::new(rs, &h).map_err(|e| e.to_string())?;
        if let Some(v) = e.spin.clifford_violation() {
            return Err(format!("{} {:?}: Clifford relation fails at {}", ty, h, v));
        }
    }
    done.push("Clifford relations");

    // h-equivariance of D on the sl(3) example and the Cartan pair
    for h in [vec![vec![1i64, 0]], vec![]] {
        let rs = build_root_system("A2").map_err(|e| e.to_string())?;
        let e = Engine::new(rs.clone(), &h).map_err(|e| e.to_string())?;
        let lambda = rs.from_fundamental(&[q(-1), q(-1)]).map_err(|e| e.to_string())?;
        let v = verma_window(&e.g, &lambda, 6).map_err(|e| e.to_string())?;
        let m = &v.module;
        for mu in block_weights(m, &e.spin).into_iter().take(12) {
            let src = assemble_block(m, &e.spin, &mu).map_err(|e| e.to_string())?;
            let mut gens: Vec<(usize, Weight)> = (0..e.g.rank).map(|i| (i, mu.clone())).collect();
            for &r in &e.pair.h_pos {
                let beta = e.g.rs.pos_weight(r);
                gens.push((e.g.idx(Gen::E(r)), mu.add(&beta)));
                gens.push((e.g.idx(Gen::F(r)), mu.sub(&beta)));
            }
            for (a, tmu) in gens {
                let tgt = match assemble_block(m, &e.spin, &tmu) {
                    Ok(t) => t,
                    Err(_) => continue,
                };
                let x = diag_action(m, &e.spin, a, &src.block, &tgt.block).map_err(|e| e.to_string())?;
                if x.mul(&src.d) != tgt.d.mul(&x) {
                    return Err(format!("D is not h-equivariant at {}", mu));
                }
            }
        }
    }
    done.push("h-equivariance of D");

    // basis independence of the cubic term and of rank data under spin reordering
    let rs = build_root_system("A2").map_err(|e| e.to_string())?;
    let g = Arc::new(build_chevalley_basis(&rs));
    let pair = validate_pair(&rs, &[]).map_err(|e| e.to_string())?;
    let s = build_spin_module(&g, &pair).map_err(|e| e.to_string())?;
    let basis = s.default_q_basis();
    let mut mixed = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        let mut v = b.clone();
        for (j, c) in basis.iter().enumerate().skip(i + 1) {
            let coef = q(((i + 2 * j) % 5) as i64 - 2) / q(3);
            for (x, y) in v.iter_mut().zip(c) {
                *x += &coef * y;
            }
        }
        mixed.push(v);
    }
    let cubic2 = s.cubic_with_basis(&mixed).map_err(|e| e.to_string())?;
    if cubic2 != s.cubic {
        return Err("cubic term depends on the basis of q".into());
    }
    let mut order = pair.q_pos.clone();
    order.reverse();
    let s2 = SpinModule::with_order(&g, &pair, &order).map_err(|e| e.to_string())?;
    let lambda = rs.from_fundamental(&[q(0), q(0)]).map_err(|e| e.to_string())?;
    let v = verma_window(&g, &lambda, 5).map_err(|e| e.to_string())?;
    let m = &v.module;
    let mut w1 = block_weights(m, &s);
    let mut w2 = block_weights(m, &s2);
    w1.sort();
    w2.sort();
    if w1 != w2 {
        return Err("block weights depend on the spin order".into());
    }
    for mu in w1.iter().take(20) {
        let (_, a) = analyze_weight(m, &s, &pair, mu, false).map_err(|e| e.to_string())?;
        let (_, b) = analyze_weight(m, &s2, &pair, mu, false).map_err(|e| e.to_string())?;
        let key = |x: &dirac_core::dirac::BlockAnalysis| {
            let mut j = x.jordan_sizes.clone();
            j.sort();
            (x.ker, x.im, x.hd, x.hd_plus, x.hd_minus, x.htop_direct.clone(), j)
        };
        if key(&a) != key(&b) {
            return Err(format!("rank data depends on the spin order at {}", mu));
        }
    }
    done.push("basis independence of the cubic term and rank data");

    // d^2 = 0 and del^2 = 0 on the Hodge slices
    let (good, _) = hodge_scenarios();
    for text in &good {
        let b = run_text(text, &RunOptions { depth: Some(4), jobs }).map_err(|e| e.to_string())?;
        if !assertion_ok(&b, Task::Hodge, "complex") {
            return Err(format!("{}: d or del does not square to zero", b.scenario));
        }
    }
    done.push("d^2 = del^2 = 0");

    let b1 = run_text(SL3_WORKED_EXAMPLE, &RunOptions { depth: Some(5), jobs: 1 }).map_err(|e| e.to_string())?;
    let b4 = run_text(SL3_WORKED_EXAMPLE, &RunOptions { depth: Some(5), jobs: 4 }).map_err(|e| e.to_string())?;
    let b1b = run_text(SL3_WORKED_EXAMPLE, &RunOptions { depth: Some(5), jobs: 1 }).map_err(|e| e.to_string())?;
    if b1.files != b4.files || b1.files != b1b.files {
        return Err("bundles differ between runs or worker counts".into());
    }
    done.push("byte-identical bundles for --jobs 1 and 4");
    Ok(done.join(", "))
}

/// Runs every criterion in order, calling `each` after each one.
pub fn run_all(jobs: usize, mut each: impl FnMut(&Criterion)) -> Vec<Criterion> {
    let start = Instant::now();
    let mut suite = Suite::new(jobs);
    let fns: [fn(&mut Suite) -> (bool, String); 9] = [c1, c2, c3, c4, c5, c6, c7, c8, c9];
    let mut out = Vec::new();
    for (i, f) in fns.iter().enumerate() {
        let t0 = Instant::now();
        let (pass, detail) = f(&mut suite);
        let c = Criterion { id: i + 1, title: TITLES[i], pass, detail, seconds: t0.elapsed().as_secs_f64() };
        each(&c);
        out.push(c);
    }
    let t0 = Instant::now();
    let (mut pass, mut detail) = match structural_checks(jobs) {
        Ok(d) => (true, d),
        Err(e) => (false, e),
    };
    let total = start.elapsed().as_secs_f64();
    if total >= 180.0 {
        pass = false;
    }
    detail = format!("{}; full suite {:.1} s", detail, total);
    let c = Criterion { id: 10, title: TITLES[9], pass, detail, seconds: t0.elapsed().as_secs_f64() };
    each(&c);
    out.push(c);
    out
}
