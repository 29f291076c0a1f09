//! Scenario files: parsing and validation.

use dirac_core::linalg::{parse_q, Q};
use dirac_core::roots::{build_root_system, RootSystem, Weight};
use serde::Deserialize;
use std::fmt;

pub const DEFAULT_MAX_DEPTH: i64 = 10;

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Dirac,
    Kostant,
    SimpleVerma,
    Higher,
    Index,
    Circle,
    Hodge,
    Vogan,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Dirac => "dirac",
            Task::Kostant => "kostant",
            Task::SimpleVerma => "simple_verma",
            Task::Higher => "higher",
            Task::Index => "index",
            Task::Circle => "circle",
            Task::Hodge => "hodge",
            Task::Vogan => "vogan",
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

#[derive(Clone, Copy, Debug, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    #[default]
    Fundamental,
    SimpleRoot,
    Epsilon,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Plain(Vec<Scalar>),
    Based {
        #[serde(default)]
        basis: Basis,
        coords: Vec<Scalar>,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleSpec {
    Verma {
        lambda: WeightSpec,
    },
    Simple {
        lambda: WeightSpec,
    },
    Finite {
        lambda: WeightSpec,
    },
    Tensor {
        base: Box<ModuleSpec>,
        finite: WeightSpec,
    },
    /// `0 -> M(lambda - gamma)-generated submodule -> M(lambda) -> quotient -> 0`.
    Ses {
        lambda: WeightSpec,
        gamma: Vec<i64>,
    },
    SplitSes {
        first: Box<ModuleSpec>,
        second: Box<ModuleSpec>,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub cartan_type: String,
    #[serde(default)]
    pub delta_h: Vec<Vec<i64>>,
    pub module: ModuleSpec,
    pub depth: i64,
    #[serde(default)]
    pub max_depth: Option<i64>,
    #[serde(default)]
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub output: Option<String>,
    /// For the hodge task: `false` marks a deliberately non-unitary module.
    #[serde(default)]
    pub expect_unitary: Option<bool>,
}

#[derive(Debug)]
pub struct ScenarioError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for ScenarioError {}

fn err(location: impl Into<String>, message: impl Into<String>) -> ScenarioError {
    ScenarioError { location: location.into(), message: message.into() }
}

/// Module description with weights resolved to simple-root coordinates.
#[derive(Clone, Debug)]
pub enum Module {
    Verma(Weight),
    Simple(Weight),
    Finite(Weight),
    Tensor(Box<Module>, Weight),
    Ses(Weight, Vec<i64>),
    SplitSes(Box<Module>, Box<Module>),
}

impl Module {
    pub fn label(&self, rs: &RootSystem) -> String {
        let fw = |w: &Weight| {
            let c: Vec<String> = rs.to_fundamental(w).iter().map(dirac_core::linalg::fmt_q).collect();
            format!("[{}]", c.join(", "))
        };
        match self {
            Module::Verma(l) => format!("M({})", fw(l)),
            Module::Simple(l) => format!("L({})", fw(l)),
            Module::Finite(l) => format!("F({})", fw(l)),
            Module::Tensor(b, f) => format!("{} x F({})", b.label(rs), fw(f)),
            Module::Ses(l, g) => format!("0 -> U v[{:?}] -> M({}) -> Q -> 0", g, fw(l)),
            Module::SplitSes(a, b) => format!("0 -> {} -> sum -> {} -> 0", a.label(rs), b.label(rs)),
        }
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    serde_json::from_str(text).map_err(|e| err(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}

fn scalar(s: &Scalar, loc: &str) -> Result<Q, ScenarioError> {
    match s {
        Scalar::Int(i) => Ok(Q::from_integer((*i).into())),
        Scalar::Text(t) => parse_q(t).ok_or_else(|| err(loc, format!("cannot parse '{}' as a rational", t))),
    }
}

pub fn resolve_weight(rs: &RootSystem, w: &WeightSpec, loc: &str) -> Result<Weight, ScenarioError> {
    let (basis, coords) = match w {
        WeightSpec::Plain(c) => (Basis::Fundamental, c),
        WeightSpec::Based { basis, coords } => (*basis, coords),
    };
    let vals: Vec<Q> =
        coords.iter().enumerate().map(|(i, s)| scalar(s, &format!("{}[{}]", loc, i))).collect::<Result<_, _>>()?;
    let r = match basis {
        Basis::Fundamental => rs.from_fundamental(&vals),
        Basis::SimpleRoot => rs.from_simple(&vals),
        Basis::Epsilon => rs.from_epsilon(&vals),
    };
    r.map_err(|e| err(loc, e.to_string()))
}

pub fn resolve_module(rs: &RootSystem, m: &ModuleSpec, loc: &str) -> Result<Module, ScenarioError> {
    Ok(match m {
        ModuleSpec::Verma { lambda } => Module::Verma(resolve_weight(rs, lambda, &format!("{}.lambda", loc))?),
        ModuleSpec::Simple { lambda } => Module::Simple(resolve_weight(rs, lambda, &format!("{}.lambda", loc))?),
        ModuleSpec::Finite { lambda } => {
            let l = resolve_weight(rs, lambda, &format!("{}.lambda", loc))?;
            if !rs.is_dominant_integral(&l) {
                return Err(err(format!("{}.lambda", loc), "finite module needs a dominant integral weight"));
            }
            Module::Finite(l)
        }
        ModuleSpec::Tensor { base, finite } => {
            let f = resolve_weight(rs, finite, &format!("{}.finite", loc))?;
            if !rs.is_dominant_integral(&f) {
                return Err(err(format!("{}.finite", loc), "finite factor needs a dominant integral weight"));
            }
            Module::Tensor(Box::new(resolve_module(rs, base, &format!("{}.base", loc))?), f)
        }
        ModuleSpec::Ses { lambda, gamma } => {
            if gamma.len() != rs.rank || gamma.iter().any(|&x| x < 0) || gamma.iter().all(|&x| x == 0) {
                return Err(err(format!("{}.gamma", loc), "expected a nonzero sum of positive roots"));
            }
            Module::Ses(resolve_weight(rs, lambda, &format!("{}.lambda", loc))?, gamma.clone())
        }
        ModuleSpec::SplitSes { first, second } => Module::SplitSes(
            Box::new(resolve_module(rs, first, &format!("{}.first", loc))?),
            Box::new(resolve_module(rs, second, &format!("{}.second", loc))?),
        ),
    })
}

/// Validates the scenario and resolves every weight.
pub fn resolve(sc: &Scenario, depth_override: Option<i64>) -> Result<(RootSystem, Module, i64), ScenarioError> {
    let rs = build_root_system(&sc.cartan_type).map_err(|e| err("cartan_type", e.to_string()))?;
    let depth = depth_override.unwrap_or(sc.depth);
    let max = sc.max_depth.unwrap_or(DEFAULT_MAX_DEPTH);
    if depth < 0 || depth > max {
        return Err(err("depth", format!("{} is outside 0..={}", depth, max)));
    }
    for (i, r) in sc.delta_h.iter().enumerate() {
        if r.len() != rs.rank {
            return Err(err(format!("delta_h[{}]", i), format!("expected {} coordinates", rs.rank)));
        }
    }
    let m = resolve_module(&rs, &sc.module, "module")?;
    Ok((rs, m, depth))
}
