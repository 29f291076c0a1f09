//! Executes the tasks of a scenario and assembles a result bundle.

use crate::json::{q_json, w_json, w_str};
use crate::scenario::{parse_scenario, resolve, Module, Scenario, ScenarioError, Task};
use dirac_core::cat_o::{
    compact_signs, finite_dim_simple, pair_signs, ses_from_singular, simple_quotient_window_signed, split_ses,
    tensor_with_finite, verma_window, ContravariantForm, ModuleWindow, Ses,
};
use dirac_core::dirac::circle::{exact_circle, SesBlocks};
use dirac_core::dirac::{
    analyze_weight, block_weights, h_verma_decomposition, kostant_prediction, nonvanishing_check, vogan_predicates,
    BlockAnalysis,
};
use dirac_core::hodge::{
    block_inner, ce_complex, cohomology_comparison, detect_hermitian, equivariance_check, hodge_decomposition_check,
    identification_check, unitarity_check,
};
use dirac_core::liealg::{build_chevalley_basis, LieAlgebra};
use dirac_core::linalg::{fmt_q, Q};
use dirac_core::roots::{validate_pair, Pair, PartitionCounter, RootSystem, Weight, WeylGroup};
use dirac_core::spinor::{build_spin_module, SpinModule};
use dirac_core::{dirac::assemble_block, Error};
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: impl Into<String>) -> Assertion {
    Assertion { name: name.to_string(), pass, detail: detail.into() }
}

#[derive(Clone, Debug)]
pub struct TaskResult {
    pub task: Task,
    pub doc: Value,
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
    pub assertions: Vec<Assertion>,
}

impl TaskResult {
    pub fn pass(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }
}

#[derive(Clone, Debug)]
pub struct Bundle {
    pub scenario: String,
    pub files: BTreeMap<String, Vec<u8>>,
    pub tasks: Vec<TaskResult>,
}

impl Bundle {
    /// `task.assertion` names of the failed assertions, in task order.
    pub fn failures(&self) -> Vec<String> {
        self.tasks
            .iter()
            .flat_map(|t| t.assertions.iter().filter(|a| !a.pass).map(move |a| format!("{}.{}", t.task.name(), a.name)))
            .collect()
    }

    pub fn task(&self, t: Task) -> Option<&TaskResult> {
        self.tasks.iter().find(|r| r.task == t)
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, bytes) in &self.files {
            std::fs::write(dir.join(name), bytes)?;
        }
        Ok(())
    }
}

#[derive(Debug)]
pub enum RunError {
    /// The scenario does not parse or names invalid data.
    Parse(ScenarioError),
    /// The engine could not build the requested module.
    Build(String),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Parse(e) => write!(f, "scenario error at {}", e),
            RunError::Build(e) => write!(f, "build failed: {}", e),
        }
    }
}

impl std::error::Error for RunError {}

/// Shared algebraic data for one scenario.
pub struct Engine {
    pub rs: RootSystem,
    pub g: Arc<LieAlgebra>,
    pub pair: Pair,
    pub spin: SpinModule,
}

impl Engine {
    pub fn new(rs: RootSystem, delta_h: &[Vec<i64>]) -> Result<Engine, Error> {
        let pair = validate_pair(&rs, delta_h)?;
        let g = Arc::new(build_chevalley_basis(&rs));
        let spin = build_spin_module(&g, &pair)?;
        Ok(Engine { rs, g, pair, spin })
    }
}

/// Module windows built for a scenario.
pub struct Built {
    pub main: ModuleWindow,
    pub ses: Option<Ses>,
    pub form: Option<ContravariantForm>,
    /// Highest weights of the indecomposable pieces; empty for finite-dimensional modules.
    pub tops: Vec<Weight>,
    /// Windows whose highest weight vector is tested for nonvanishing.
    pub highest: Vec<ModuleWindow>,
}

fn ht(w: &Weight) -> i64 {
    let h = w.height();
    h.ceil().to_integer().try_into().unwrap_or(i64::MAX)
}

fn build(e: &Engine, m: &Module, wdepth: i64, signs: &[i64], want_form: bool) -> Result<Built, Error> {
    let g = &e.g;
    Ok(match m {
        Module::Verma(l) => {
            let mut v = verma_window(g, l, wdepth)?;
            let form = want_form.then(|| v.shapovalov(signs));
            Built { main: v.module.clone(), ses: None, form, tops: vec![l.clone()], highest: vec![v.module] }
        }
        Module::Simple(l) => {
            let mut v = verma_window(g, l, wdepth)?;
            let (qd, f) = simple_quotient_window_signed(&mut v, signs)?;
            Built {
                main: qd.module.clone(),
                ses: None,
                form: want_form.then_some(f),
                tops: vec![l.clone()],
                highest: vec![qd.module],
            }
        }
        Module::Finite(l) => {
            let f = finite_dim_simple(g, l)?;
            Built { main: f.clone(), ses: None, form: None, tops: vec![], highest: vec![f] }
        }
        Module::Tensor(base, f) => {
            let fm = finite_dim_simple(g, f)?;
            let w = WeylGroup::new(&e.rs);
            let spread = ht(&f.sub(&w.longest().apply(f)));
            let b = build(e, base, wdepth + spread, signs, false)?;
            let t = tensor_with_finite(&b.main, &fm)?;
            let tops = b.tops.iter().map(|x| x.add(f)).collect();
            Built { main: t.clone(), ses: None, form: None, tops, highest: vec![t] }
        }
        Module::Ses(l, gamma) => {
            let s = ses_from_singular(g, l, wdepth, gamma)?;
            Built {
                main: s.m2.clone(),
                tops: vec![l.clone()],
                highest: vec![s.m2.clone(), s.m3.clone()],
                ses: Some(s),
                form: None,
            }
        }
        Module::SplitSes(a, b) => {
            // each summand has to reach as deep as the blocks selected below the other one
            let ba = build(e, a, wdepth, signs, false)?;
            let bb = build(e, b, wdepth, signs, false)?;
            let reach = |own: &[Weight], other: &[Weight]| {
                own.iter().flat_map(|t| other.iter().map(move |u| ht(&t.sub(u)).max(0))).max().unwrap_or(0)
            };
            let (xa, xb) = (reach(&ba.tops, &bb.tops), reach(&bb.tops, &ba.tops));
            let ba = if xa > 0 { build(e, a, wdepth + xa, signs, false)? } else { ba };
            let bb = if xb > 0 { build(e, b, wdepth + xb, signs, false)? } else { bb };
            let s = split_ses(&ba.main, &bb.main)?;
            let mut tops = ba.tops.clone();
            tops.extend(bb.tops.iter().cloned());
            let mut highest = ba.highest;
            highest.extend(bb.highest);
            Built { main: s.m2.clone(), ses: Some(s), form: None, tops, highest }
        }
    })
}

/// Blocks of `M (x) S` at most `depth` below the top block of some piece.
fn selected_blocks(e: &Engine, b: &Built, m: &ModuleWindow, depth: i64) -> Vec<Weight> {
    let rq = e.pair.rho_q();
    block_weights(m, &e.spin)
        .into_iter()
        .filter(|mu| {
            b.tops.is_empty()
                || b.tops.iter().any(|t| mu.sub(&rq).depth_below(t).map_or(false, |d| d.iter().sum::<i64>() <= depth))
        })
        .collect()
}

pub struct Context<'a> {
    pub scenario: &'a Scenario,
    pub module: &'a Module,
    pub engine: &'a Engine,
    pub built: &'a Built,
    pub depth: i64,
    pub blocks: Vec<Weight>,
    analyses: Option<Result<Vec<BlockAnalysis>, String>>,
}

impl<'a> Context<'a> {
    fn analyses(&mut self, check_sq: bool) -> Result<&Vec<BlockAnalysis>, String> {
        if self.analyses.is_none() {
            let e = self.engine;
            let m = &self.built.main;
            let r: Result<Vec<BlockAnalysis>, Error> = self
                .blocks
                .par_iter()
                .map(|mu| analyze_weight(m, &e.spin, &e.pair, mu, check_sq).map(|(_, a)| a))
                .collect();
            self.analyses = Some(r.map_err(|e| e.to_string()));
        }
        self.analyses.as_ref().unwrap().as_ref().map_err(|e| e.clone())
    }
}

fn block_row(a: &BlockAnalysis) -> Value {
    json!({
        "mu": w_json(&a.mu),
        "dim": a.dim,
        "plus": a.parity_dims.0,
        "minus": a.parity_dims.1,
        "ker": a.ker,
        "im": a.im,
        "hd": a.hd,
        "hd_plus": a.hd_plus,
        "hd_minus": a.hd_minus,
        "eigenvalues": a.eigenvalues.iter().map(|(c, m)| json!([q_json(c), m])).collect::<Vec<_>>(),
        "unexplained": a.unexplained,
        "square_ok": a.square_ok,
    })
}

fn failed(task: Task, what: &str, msg: String) -> TaskResult {
    TaskResult {
        task,
        doc: json!({ "task": task.name(), "error": msg.clone() }),
        table: None,
        assertions: vec![check(what, false, msg)],
    }
}

fn cubic_kills_vacuum(s: &SpinModule) -> bool {
    let v = s.vacuum();
    (0..s.dim()).all(|r| s.cubic.get(r, v).is_zero())
}

fn task_dirac(cx: &mut Context) -> TaskResult {
    let e = cx.engine;
    let an = match cx.analyses(true) {
        Ok(a) => a.clone(),
        Err(m) => return failed(Task::Dirac, "analysis", m),
    };
    let mut asr = Vec::new();
    let cliff = e.spin.clifford_violation();
    asr.push(check("clifford_relations", cliff.is_none(), cliff.unwrap_or_default()));
    asr.push(check("cubic_kills_vacuum", cubic_kills_vacuum(&e.spin), ""));
    let bad_sq: Vec<String> = an.iter().filter(|a| a.square_ok != Some(true)).map(|a| w_str(&a.mu)).collect();
    asr.push(check("square_formula", bad_sq.is_empty(), bad_sq.join(" ")));
    let unexpl: Vec<String> = an.iter().filter(|a| a.unexplained > 0).map(|a| w_str(&a.mu)).collect();
    asr.push(check("eigenvalues_predicted", unexpl.is_empty(), unexpl.join(" ")));
    let mut nv = Vec::new();
    let mut nv_ok = true;
    for m in &cx.built.highest {
        if m.total_dim() == 0 {
            continue;
        }
        match nonvanishing_check(m, &e.spin, &e.pair) {
            Ok(r) => {
                nv_ok &= !r.is_empty() && r.iter().all(|(k, i)| *k && *i);
                nv.push(json!({
                    "top": m.top.as_ref().map(w_json),
                    "in_ker": r.iter().all(|x| x.0),
                    "not_in_im": r.iter().all(|x| x.1),
                }));
            }
            Err(err) => {
                nv_ok = false;
                nv.push(json!({ "error": err.to_string() }));
            }
        }
    }
    asr.push(check("nonvanishing", nv_ok, ""));
    let header = [
        "mu",
        "dim",
        "plus",
        "minus",
        "ker",
        "im",
        "hd",
        "hd_plus",
        "hd_minus",
        "eigenvalues",
        "unexplained",
        "square_ok",
    ];
    let rows = an
        .iter()
        .map(|a| {
            vec![
                w_str(&a.mu),
                a.dim.to_string(),
                a.parity_dims.0.to_string(),
                a.parity_dims.1.to_string(),
                a.ker.to_string(),
                a.im.to_string(),
                a.hd.to_string(),
                a.hd_plus.to_string(),
                a.hd_minus.to_string(),
                a.eigenvalues.iter().map(|(c, m)| format!("{}^{}", fmt_q(c), m)).collect::<Vec<_>>().join(" "),
                a.unexplained.to_string(),
                a.square_ok.map_or("skipped".into(), |b| b.to_string()),
            ]
        })
        .collect();
    TaskResult {
        task: Task::Dirac,
        doc: json!({
            "task": "dirac",
            "cubic_nonzero": !e.spin.cubic.is_zero(),
            "nonvanishing": nv,
            "blocks": an.iter().map(block_row).collect::<Vec<_>>(),
        }),
        table: Some((header.iter().map(|s| s.to_string()).collect(), rows)),
        assertions: asr,
    }
}

fn task_kostant(cx: &mut Context) -> TaskResult {
    let e = cx.engine;
    let lambda = match cx.module {
        Module::Finite(l) => l.clone(),
        _ => return failed(Task::Kostant, "module_kind", "kostant needs a finite-dimensional module".into()),
    };
    let an = match cx.analyses(false) {
        Ok(a) => a.clone(),
        Err(m) => return failed(Task::Kostant, "analysis", m),
    };
    let (tops, chars) = kostant_prediction(&e.pair, &lambda);
    let w = WeylGroup::new(&e.rs);
    let w1 = e.pair.w_one(&w);
    let mut rows = Vec::new();
    let mut ok = true;
    let mut seen = 0;
    for a in &an {
        let p = chars.get(&a.mu).copied().unwrap_or(0);
        if p != 0 {
            seen += 1;
        }
        ok &= p == a.ker as i64;
        rows.push(vec![w_str(&a.mu), a.ker.to_string(), p.to_string()]);
    }
    let covered = seen == chars.values().filter(|&&c| c != 0).count();
    let mut asr = vec![
        check("kernel_character", ok && covered, if covered { "" } else { "predicted weight outside the blocks" }),
        check("cubic_kills_vacuum", cubic_kills_vacuum(&e.spin), ""),
        check("w1_size", w1.len() * e.pair.weyl_h().order() == w.order(), format!("|W1| = {}", w1.len())),
    ];
    if e.pair.h_pos.is_empty() && !e.pair.q_pos.is_empty() {
        let symmetric = e.spin.cubic.is_zero();
        let rank_one = e.rs.rank == 1;
        asr.push(check("cubic_nonzero_when_expected", rank_one || !symmetric, ""));
    }
    TaskResult {
        task: Task::Kostant,
        doc: json!({
            "task": "kostant",
            "lambda": w_json(&lambda),
            "cubic_nonzero": !e.spin.cubic.is_zero(),
            "constituents": w1.iter().zip(&tops).map(|(x, t)| json!({"length": x.length, "highest_weight": w_json(t)})).collect::<Vec<_>>(),
            "blocks": an.iter().map(|a| json!({"mu": w_json(&a.mu), "ker": a.ker, "predicted": chars.get(&a.mu).copied().unwrap_or(0)})).collect::<Vec<_>>(),
        }),
        table: Some((vec!["mu".into(), "ker".into(), "predicted".into()], rows)),
        assertions: asr,
    }
}

fn task_simple_verma(cx: &mut Context) -> TaskResult {
    let e = cx.engine;
    let lambda = match cx.module {
        Module::Verma(l) => l.clone(),
        _ => return failed(Task::SimpleVerma, "module_kind", "simple_verma needs a Verma module".into()),
    };
    let an = match cx.analyses(false) {
        Ok(a) => a.clone(),
        Err(m) => return failed(Task::SimpleVerma, "analysis", m),
    };
    let eta = lambda.add(&e.rs.rho).sub(&e.pair.rho_h);
    let mut pc = PartitionCounter::new(e.pair.h_roots());
    let mut rows = Vec::new();
    let mut ok = true;
    for a in &an {
        let expected = pc.count_weight(&eta.sub(&a.mu));
        ok &= expected == a.hd as u64;
        rows.push(vec![w_str(&a.mu), a.hd.to_string(), expected.to_string()]);
    }
    let at_top = an.iter().find(|a| a.mu == eta).map_or(0, |a| a.hd);
    TaskResult {
        task: Task::SimpleVerma,
        doc: json!({
            "task": "simple_verma",
            "lambda": w_json(&lambda),
            "h_highest_weight": w_json(&eta),
            "hd_at_top": at_top,
            "blocks": an.iter().map(|a| json!({"mu": w_json(&a.mu), "hd": a.hd})).collect::<Vec<_>>(),
        }),
        table: Some((vec!["mu".into(), "hd".into(), "h_verma".into()], rows)),
        assertions: vec![
            check("antidominant", e.rs.is_antidominant(&lambda), ""),
            check("h_antidominant", e.pair.is_h_antidominant(&eta), ""),
            check("character", ok, ""),
            check("top_line", at_top == 1, format!("dim {}", at_top)),
        ],
    }
}

fn signed_htop(a: &BlockAnalysis) -> i64 {
    a.htop_direct.iter().map(|(p, m)| *p as i64 - *m as i64).sum()
}

fn task_higher(cx: &mut Context) -> TaskResult {
    let an = match cx.analyses(false) {
        Ok(a) => a.clone(),
        Err(m) => return failed(Task::Higher, "analysis", m),
    };
    let bad: Vec<String> = an.iter().filter(|a| a.htop_direct != a.htop_jordan).map(|a| w_str(&a.mu)).collect();
    let pairs = |v: &[(usize, usize)]| v.iter().map(|(p, m)| format!("{}/{}", p, m)).collect::<Vec<_>>().join(" ");
    let rows = an
        .iter()
        .map(|a| {
            let mut sizes = a.jordan_sizes.clone();
            sizes.sort_unstable_by(|x, y| y.cmp(x));
            vec![
                w_str(&a.mu),
                a.gen0.to_string(),
                sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "),
                pairs(&a.htop_direct),
                pairs(&a.htop_jordan),
            ]
        })
        .collect();
    let max_jordan = an.iter().flat_map(|a| a.jordan_sizes.iter().copied()).max().unwrap_or(0);
    TaskResult {
        task: Task::Higher,
        doc: json!({
            "task": "higher",
            "max_jordan": max_jordan,
            "blocks": an.iter().map(|a| {
                let mut sizes = a.jordan_sizes.clone();
                sizes.sort_unstable_by(|x, y| y.cmp(x));
                json!({
                    "mu": w_json(&a.mu),
                    "gen0": a.gen0,
                    "jordan": sizes,
                    "htop_direct": a.htop_direct,
                    "htop_jordan": a.htop_jordan,
                })
            }).collect::<Vec<_>>(),
        }),
        table: Some((
            ["mu", "gen0", "jordan", "htop_direct", "htop_jordan"].iter().map(|s| s.to_string()).collect(),
            rows,
        )),
        assertions: vec![check("direct_equals_jordan", bad.is_empty(), bad.join(" "))],
    }
}

fn task_index(cx: &mut Context) -> TaskResult {
    let an = match cx.analyses(false) {
        Ok(a) => a.clone(),
        Err(m) => return failed(Task::Index, "analysis", m),
    };
    let mut bad = Vec::new();
    let mut rows = Vec::new();
    for a in &an {
        let lhs = signed_htop(a);
        let rhs = a.parity_dims.0 as i64 - a.parity_dims.1 as i64;
        if lhs != rhs {
            bad.push(w_str(&a.mu));
        }
        rows.push(vec![
            w_str(&a.mu),
            lhs.to_string(),
            rhs.to_string(),
            (a.hd_plus as i64 - a.hd_minus as i64).to_string(),
        ]);
    }
    TaskResult {
        task: Task::Index,
        doc: json!({
            "task": "index",
            "blocks": an.iter().map(|a| json!({
                "mu": w_json(&a.mu),
                "htop_signed": signed_htop(a),
                "s_character_difference": a.parity_dims.0 as i64 - a.parity_dims.1 as i64,
                "hd_index": a.hd_plus as i64 - a.hd_minus as i64,
            })).collect::<Vec<_>>(),
        }),
        table: Some((["mu", "htop_signed", "s_char_diff", "hd_index"].iter().map(|s| s.to_string()).collect(), rows)),
        assertions: vec![check("index_identity", bad.is_empty(), bad.join(" "))],
    }
}

fn task_vogan(cx: &mut Context) -> TaskResult {
    let e = cx.engine;
    let lambdas = cx.built.main.inf_chars.clone();
    let an = match cx.analyses(false) {
        Ok(a) => a.clone(),
        Err(m) => return failed(Task::Vogan, "analysis", m),
    };
    let w = WeylGroup::new(&e.rs);
    let hd: BTreeMap<Weight, i64> = an.iter().map(|a| (a.mu.clone(), a.hd as i64)).collect();
    let top: BTreeMap<Weight, i64> =
        an.iter().map(|a| (a.mu.clone(), a.htop_direct.iter().map(|(p, m)| (p + m) as i64).sum())).collect();
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    let mut ok = true;
    for (source, chars) in [("hd", &hd), ("htop", &top)] {
        for (eta, c) in h_verma_decomposition(&e.pair, chars) {
            let (shifted, literal) = vogan_predicates(&e.pair, &w, &lambdas, &eta);
            ok &= shifted;
            rows.push(vec![source.to_string(), w_str(&eta), c.to_string(), shifted.to_string(), literal.to_string()]);
            entries.push(json!({"source": source, "eta": w_json(&eta), "coefficient": c, "rho_shifted": shifted, "literal": literal}));
        }
    }
    TaskResult {
        task: Task::Vogan,
        doc: json!({
            "task": "vogan",
            "infinitesimal_characters": lambdas.iter().map(w_json).collect::<Vec<_>>(),
            "constituents": entries,
        }),
        table: Some((
            ["source", "eta", "coefficient", "rho_shifted", "literal"].iter().map(|s| s.to_string()).collect(),
            rows,
        )),
        assertions: vec![check("rho_shifted_conjugacy", ok, "")],
    }
}

fn task_circle(cx: &mut Context) -> TaskResult {
    let e = cx.engine;
    let ses = match &cx.built.ses {
        Some(s) => s,
        None => return failed(Task::Circle, "module_kind", "circle needs a short exact sequence".into()),
    };
    let weights = selected_blocks(e, cx.built, &ses.m2, cx.depth);
    let results: Vec<_> =
        weights.par_iter().map(|mu| SesBlocks::from_ses(ses, &e.spin, mu).and_then(|sb| exact_circle(&sb))).collect();
    let mut rows = Vec::new();
    let mut docs = Vec::new();
    let (mut exact, mut lift, mut other) = (true, true, true);
    let mut first_bad = String::new();
    for (mu, r) in weights.iter().zip(results) {
        match r {
            Ok(c) => {
                if !c.exact && first_bad.is_empty() {
                    first_bad = w_str(mu);
                }
                exact &= c.exact;
                let dims = c.dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
                let ranks = c.ranks.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
                rows.push(vec![w_str(mu), dims, ranks, c.exact.to_string()]);
                docs.push(
                    json!({"mu": w_json(mu), "dims": c.dims, "ranks": c.ranks, "exact": c.exact, "triples": c.triples}),
                );
            }
            Err(err) => {
                if matches!(err, Error::LiftFailure(_)) {
                    lift = false;
                } else {
                    other = false;
                }
                if first_bad.is_empty() {
                    first_bad = format!("{}: {}", w_str(mu), err);
                }
                rows.push(vec![w_str(mu), String::new(), String::new(), err.to_string()]);
                docs.push(json!({"mu": w_json(mu), "error": err.to_string()}));
            }
        }
    }
    TaskResult {
        task: Task::Circle,
        doc: json!({"task": "circle", "weights": docs}),
        table: Some((["mu", "dims", "ranks", "exact"].iter().map(|s| s.to_string()).collect(), rows)),
        assertions: vec![
            check("no_lift_failure", lift, first_bad.clone()),
            check("maps_defined", other, first_bad.clone()),
            check("exact_at_all_nodes", exact && lift && other, first_bad),
        ],
    }
}

fn task_hodge(cx: &mut Context) -> TaskResult {
    let e = cx.engine;
    let hp = match detect_hermitian(&e.pair) {
        Ok(h) => h,
        Err(err) => return failed(Task::Hodge, "hermitian", err.to_string()),
    };
    let form = match &cx.built.form {
        Some(f) => f,
        None => return failed(Task::Hodge, "module_kind", "hodge needs a Verma or simple module".into()),
    };
    let m = &cx.built.main;
    let unit = unitarity_check(form);
    let unitary = unit.iter().all(|x| x.1);
    // report the failing weight nearest the top
    let first_indefinite = unit.iter().filter(|x| !x.1).max_by_key(|x| x.0 .0.iter().sum::<Q>()).map(|x| w_str(&x.0));
    let rq = e.pair.rho_q();
    let per: Vec<Result<Value, String>> = cx
        .blocks
        .par_iter()
        .map(|mu| -> Result<Value, String> {
            let s = &e.spin;
            let id = identification_check(&hp, s, m, mu);
            let ce = ce_complex(&hp, m, &mu.sub(&rq)).map_err(|x| x.to_string())?;
            let complex = ce.d.mul(&ce.d).is_zero() && ce.del.mul(&ce.del).is_zero();
            let equiv = equivariance_check(&hp, m, s, mu).map_err(|x| x.to_string())?;
            let db = assemble_block(m, s, mu).map_err(|x| x.to_string())?;
            let inner = block_inner(form, s, &db.block).map_err(|x| x.to_string())?;
            let hb = hodge_decomposition_check(&db, &inner);
            let cmp = cohomology_comparison(&hp, m, s, mu).map_err(|x| x.to_string())?;
            Ok(json!({
                "mu": w_json(mu),
                "identification": id.is_ok(),
                "identification_error": id.err().map(|x| x.to_string()),
                "complex": complex,
                "equivariant": equiv,
                "adjoint": hb.adjoint,
                "decomposition": hb.ok(),
                "ker_d": hb.ker_d,
                "hd": cmp.hd,
                "cohomology": cmp.cohomology,
                "homology": cmp.homology,
                "comparison": cmp.ok(),
            }))
        })
        .collect();
    let mut docs = Vec::new();
    for r in per {
        match r {
            Ok(v) => docs.push(v),
            Err(m) => return failed(Task::Hodge, "blocks", m),
        }
    }
    let all = |k: &str| docs.iter().all(|d| d[k].as_bool() == Some(true));
    let first =
        |k: &str| docs.iter().find(|d| d[k].as_bool() != Some(true)).map(|d| w_str_json(&d["mu"])).unwrap_or_default();
    let mut asr = vec![
        check("identification", all("identification"), first("identification")),
        check("complex", all("complex"), first("complex")),
        check("k_equivariance", all("equivariant"), first("equivariant")),
        check("adjointness", all("adjoint"), first("adjoint")),
    ];
    if cx.scenario.expect_unitary == Some(false) {
        asr.push(check("positivity_fails", !unitary, first_indefinite.clone().unwrap_or_default()));
    } else {
        asr.push(check("unitary_on_window", unitary, first_indefinite.clone().unwrap_or_default()));
        asr.push(check("hodge_decomposition", all("decomposition"), first("decomposition")));
        asr.push(check("cohomology_comparison", all("comparison"), first("comparison")));
    }
    let rows = docs
        .iter()
        .map(|d| {
            let list = |k: &str| {
                d[k].as_array()
                    .map(|a| a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                    .unwrap_or_default()
            };
            vec![
                w_str_json(&d["mu"]),
                d["hd"].to_string(),
                list("cohomology"),
                list("homology"),
                d["decomposition"].to_string(),
                d["comparison"].to_string(),
            ]
        })
        .collect();
    TaskResult {
        task: Task::Hodge,
        doc: json!({
            "task": "hodge",
            "p_plus": hp.p_plus.iter().map(|&r| w_json(&e.rs.pos_weight(r))).collect::<Vec<_>>(),
            "unitary_on_window": unitary,
            "first_indefinite_weight": first_indefinite,
            "blocks": docs,
        }),
        table: Some((
            ["mu", "hd", "cohomology", "homology", "decomposition", "cohomology_comparison"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            rows,
        )),
        assertions: asr,
    }
}

fn w_str_json(v: &Value) -> String {
    let parts: Vec<String> =
        v.as_array().map(|a| a.iter().map(|x| x.as_str().unwrap_or("").to_string()).collect()).unwrap_or_default();
    format!("({})", parts.join(", "))
}

fn to_csv(header: &[String], rows: &[Vec<String>]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(r).expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

fn pretty(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
    s.push('\n');
    s.into_bytes()
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub depth: Option<i64>,
    pub jobs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { depth: None, jobs: 1 }
    }
}

/// Parses, builds and runs a scenario given as JSON text.
pub fn run_text(text: &str, opts: &RunOptions) -> Result<Bundle, RunError> {
    let sc = parse_scenario(text).map_err(RunError::Parse)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| RunError::Build(e.to_string()))?;
    pool.install(|| run_parsed(&sc, text.as_bytes(), opts))
}

fn run_parsed(sc: &Scenario, raw: &[u8], opts: &RunOptions) -> Result<Bundle, RunError> {
    let (rs, module, depth) = resolve(sc, opts.depth).map_err(RunError::Parse)?;
    let engine = Engine::new(rs, &sc.delta_h)
        .map_err(|e| RunError::Parse(ScenarioError { location: "delta_h".into(), message: e.to_string() }))?;
    let mut tasks = sc.tasks.clone();
    tasks.sort();
    tasks.dedup();
    let mut results = Vec::new();
    if !tasks.is_empty() {
        let theta = engine.rs.positive.iter().map(|r| r.iter().sum::<i64>()).max().unwrap_or(0);
        let want_form = tasks.contains(&Task::Hodge);
        let signs = if want_form { pair_signs(&engine.g, &engine.pair.h_pos) } else { compact_signs(&engine.g) };
        let built =
            build(&engine, &module, depth + theta, &signs, want_form).map_err(|e| RunError::Build(e.to_string()))?;
        let blocks = selected_blocks(&engine, &built, &built.main, depth);
        let mut cx =
            Context { scenario: sc, module: &module, engine: &engine, built: &built, depth, blocks, analyses: None };
        for t in &tasks {
            results.push(match t {
                Task::Dirac => task_dirac(&mut cx),
                Task::Kostant => task_kostant(&mut cx),
                Task::SimpleVerma => task_simple_verma(&mut cx),
                Task::Higher => task_higher(&mut cx),
                Task::Index => task_index(&mut cx),
                Task::Circle => task_circle(&mut cx),
                Task::Hodge => task_hodge(&mut cx),
                Task::Vogan => task_vogan(&mut cx),
            });
        }
    }
    let mut files = BTreeMap::new();
    for r in &results {
        let mut doc = r.doc.clone();
        doc["assertions"] = Value::Array(
            r.assertions.iter().map(|a| json!({"name": a.name, "pass": a.pass, "detail": a.detail})).collect(),
        );
        files.insert(format!("{}.json", r.task.name()), pretty(&doc));
        if let Some((h, rows)) = &r.table {
            files.insert(format!("{}.csv", r.task.name()), to_csv(h, rows));
        }
    }
    let mut bundle = Bundle { scenario: sc.name.clone(), files, tasks: results };
    let bundle_failures = bundle.failures();
    let results = &bundle.tasks;
    let manifest = json!({
        "scenario": sc.name,
        "scenario_sha256": hex::encode(Sha256::digest(raw)),
        "engine_version": ENGINE_VERSION,
        "exact_arithmetic": true,
        "floating_point_used": false,
        "cartan_type": engine.rs.label(),
        "delta_h": sc.delta_h,
        "module": module.label(&engine.rs),
        "depth": depth,
        "tasks": results.iter().map(|r| json!({"task": r.task.name(), "pass": r.pass()})).collect::<Vec<_>>(),
        "status": if bundle_failures.is_empty() { "pass" } else { "fail" },
        "first_failure": bundle_failures.first(),
    });
    bundle.files.insert("manifest.json".into(), pretty(&manifest));
    Ok(bundle)
}
