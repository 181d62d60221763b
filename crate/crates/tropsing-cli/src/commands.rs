//! One function per subcommand: inputs in, JSON value and warnings out.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use tropsing::acceptance;
use tropsing::census::{census, newton_polygon_of_projection};
use tropsing::delta::{delta_oracle, delta_sparse, is_zero_nondegenerate, random_nondegenerate, Germ, Rescale};
use tropsing::geom::PolytopeJson;
use tropsing::io::load_support;
use tropsing::lattice::{Covector, SupportSet};
use tropsing::poly::Multiplicity;
use tropsing::strata::{strata_report, Degree};
use tropsing::ultratrop::{thsum_report, Block, TangencyMatrix};
use tropsing::vandermonde::{conjecture_search, with_jobs};
use tropsing::Rational;

use crate::failure::Failure;

/// A command's result and the reading choices worth flagging.
pub struct Output {
    pub value: Value,
    pub warnings: Vec<String>,
    /// Set when the result contradicts a claim it was checked against.
    pub inconsistency: Option<(&'static str, String)>,
}

impl Output {
    fn plain(value: Value) -> Self {
        Output { value, warnings: Vec::new(), inconsistency: None }
    }
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn multiplicity_json(m: Multiplicity) -> Value {
    match m {
        Multiplicity::Finite(v) => json!(v),
        Multiplicity::Infinite => json!("INFINITE"),
    }
}

/// `{"f1": {"2": [1, 1]}, "f2": {...}}`: exponent to exact `[num, den]`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoefficientFile {
    f1: BTreeMap<u64, [i64; 2]>,
    f2: BTreeMap<u64, [i64; 2]>,
}

fn germ(support: &SupportSet, coeffs: &BTreeMap<u64, [i64; 2]>) -> Result<Germ, Failure> {
    let mut exact = BTreeMap::new();
    for (&b, &[n, d]) in coeffs {
        if d == 0 {
            return Err(Failure::input("SchemaError", format!("zero denominator at exponent {b}")));
        }
        exact.insert(b, Rational::new(n.into(), d.into()));
    }
    Ok(Germ::new(support.clone(), exact)?)
}

fn load_coefficients(path: &str, b1: &SupportSet, b2: &SupportSet) -> Result<(Germ, Germ), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input("ReadError", format!("{path}: {e}")))?;
    let file: CoefficientFile =
        serde_json::from_str(&text).map_err(|e| Failure::input("SchemaError", format!("{path}: {e}")))?;
    Ok((germ(b1, &file.f1)?, germ(b2, &file.f2)?))
}

pub fn delta(b1: &str, b2: &str, coeffs: Option<&str>, oracle: bool, seed: u64) -> Result<Output, Failure> {
    let (b1, b2) = (load_support(b1)?, load_support(b2)?);
    let result = delta_sparse(&b1, &b2, Rescale::Forbid)?;
    let mut value = json!({ "delta": result.delta, "milnor": result.milnor, "j_sequence": result.j_sequence });
    let mut out = Output::plain(Value::Null);
    let germs = match coeffs {
        Some(path) => Some(load_coefficients(path, &b1, &b2)?),
        None if oracle => {
            out.warnings.push(format!("coefficients sampled with seed {seed}"));
            Some(random_nondegenerate(&b1, &b2, &mut ChaCha8Rng::seed_from_u64(seed))?)
        }
        None => None,
    };
    if let Some((f1, f2)) = germs {
        let nondegenerate = is_zero_nondegenerate(&f1, &f2)?.nondegenerate;
        value["nondegenerate"] = json!(nondegenerate);
        if oracle {
            let o = delta_oracle(&f1, &f2)?;
            value["oracle"] = multiplicity_json(o);
            let agrees = match o {
                Multiplicity::Finite(v) if nondegenerate => v == result.delta,
                Multiplicity::Finite(v) => v > result.delta,
                Multiplicity::Infinite => !nondegenerate,
            };
            if !agrees {
                out.inconsistency = Some(("OracleMismatch", format!("oracle {o} against closed form {}", result.delta)));
            }
        }
    }
    out.value = value;
    Ok(out)
}

pub fn strata(b1: &str, b2: &str, cross_check: bool) -> Result<Output, Failure> {
    let (b1, b2) = (load_support(b1)?, load_support(b2)?);
    let report = strata_report(&b1, &b2, cross_check)?;
    let mut out = Output::plain(to_value(&report));
    for s in &report {
        if s.degree == Degree::Unknown {
            out.warnings.push(format!("{}: no closed-form degree", s.name));
        }
    }
    let mismatches: Vec<String> = report
        .iter()
        .filter(|s| cross_check && s.degree.known().is_some() && s.census_degree.is_some() && s.degree.known() != s.census_degree)
        .map(|s| format!("{}: degree {:?}, census {:?}", s.name, s.degree.known(), s.census_degree))
        .collect();
    if !mismatches.is_empty() {
        out.inconsistency = Some(("InconsistencyDetected", mismatches.join("; ")));
    }
    Ok(out)
}

fn supports(a1: &str, a2: &str) -> Result<(SupportSet, SupportSet), Failure> {
    Ok((load_support(a1)?, load_support(a2)?))
}

pub fn project(a1: &str, a2: &str) -> Result<Output, Failure> {
    let (a1, a2) = supports(a1, a2)?;
    let c = census(&a1, &a2)?;
    let mut out = Output::plain(to_value(&c));
    out.warnings.clone_from(&c.flags);
    Ok(out)
}

pub fn newton(a1: &str, a2: &str) -> Result<Output, Failure> {
    let (a1, a2) = supports(a1, a2)?;
    let p = newton_polygon_of_projection(&a1, &a2)?;
    Ok(Output::plain(to_value(&PolytopeJson::from(&p))))
}

#[derive(Serialize)]
struct BlockSummary<'a> {
    delta: &'a Covector,
    gamma: &'a Covector,
    size: u64,
    iota: Value,
    g_direct: u64,
    g_closed: u64,
    g_calibrated: u64,
}

fn summarize<'a>(m: &'a TangencyMatrix, b: &'a Block) -> BlockSummary<'a> {
    BlockSummary {
        delta: &m.delta,
        gamma: &b.gamma,
        size: b.size,
        iota: to_value(&b.iota),
        g_direct: b.entry_sum(),
        g_closed: b.closed_form(),
        g_calibrated: b.calibrated(),
    }
}

fn parse_direction(dir: &str) -> Result<Covector, Failure> {
    let coords = dir
        .split(',')
        .map(|v| v.trim().parse::<i64>().map_err(|e| Failure::input("SchemaError", format!("--dir {dir:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != 2 {
        return Err(Failure::input("SchemaError", format!("--dir takes two coordinates, got {dir:?}")));
    }
    let c = Covector::new(coords).map_err(|e| Failure::input("SchemaError", e.to_string()))?;
    if !c.is_primitive() {
        return Err(Failure::input("SchemaError", format!("--dir {dir:?} is not primitive")));
    }
    Ok(c)
}

pub fn utrop(a1: &str, a2: &str, dir: Option<&str>) -> Result<Output, Failure> {
    let (a1, a2) = supports(a1, a2)?;
    let wanted = dir.map(parse_direction).transpose()?;
    let report = thsum_report(&a1, &a2)?;
    let matrices: Vec<&TangencyMatrix> =
        report.matrices.iter().filter(|m| wanted.as_ref().is_none_or(|d| &m.delta == d)).collect();
    let blocks: Vec<BlockSummary> = matrices.iter().flat_map(|m| m.blocks.iter().map(|b| summarize(m, b))).collect();
    let g_direct: u64 = blocks.iter().map(|b| b.g_direct).sum();
    let g_closed: u64 = blocks.iter().map(|b| b.g_closed).sum();
    let value = json!({
        "blocks": to_value(&blocks),
        "matrices": to_value(&matrices),
        "g_direct": g_direct,
        "g_closed": g_closed,
        "g_convention": to_value(&report.convention),
        "mixed_volume_doubled": report.mv_doubled,
        "mixed_volume_base": report.mv_base,
        "horizontal": report.horizontal,
        "thsum_total": report.total,
    });
    let mut out = Output::plain(value);
    out.warnings.push(format!("G convention wired into thsum_total: {:?}", report.convention));
    for f in &report.skipped_facets {
        out.warnings.push(format!("facet {:?} has an imprimitive vertical part and extends no direction", f.coords()));
    }
    Ok(out)
}

pub fn vdm_sweep(k: usize, max_order: u64, max_exp: i64, jobs: Option<usize>) -> Result<Output, Failure> {
    if k == 0 || max_order == 0 || max_exp < 1 {
        return Err(Failure::input("SchemaError", "k, --max-order and --max-exp must be positive"));
    }
    let report = with_jobs(jobs, || conjecture_search(k, max_order, max_exp));
    let mut out = Output::plain(to_value(&report));
    if !report.counterexamples.is_empty() {
        let what = if report.contradicts_proved_range { "ProvedCaseViolated" } else { "ConjectureCounterexample" };
        out.inconsistency = Some((what, format!("{} counterexamples for k = {k}", report.counterexamples.len())));
    }
    Ok(out)
}

pub fn selftest(only: &[u8], seed: u64) -> Result<Output, Failure> {
    let ids: Vec<u8> = if only.is_empty() { acceptance::criterion_ids().collect() } else { only.to_vec() };
    let mut outcomes = Vec::new();
    for id in ids {
        let o = acceptance::run(id, seed).ok_or_else(|| Failure::input("SchemaError", format!("no criterion {id}")))?;
        eprintln!("{o}");
        outcomes.push(o);
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    let mut out = Output::plain(json!({ "seed": seed, "criteria": to_value(&outcomes) }));
    if !failed.is_empty() {
        out.inconsistency = Some(("AcceptanceFailure", format!("failed criteria {failed:?}")));
    }
    Ok(out)
}
