//! JSON wire formats and the compact coefficient-string syntax.
//!
//! Coefficient vectors are constant-term-first throughout. An F_q element
//! serializes as a flat integer array of length k; an F_{q^n} element as n
//! such arrays. Towers serialize as {p, k, n, mod_q, mod_qn} and are
//! re-derived on load, so a tampered modulus is rejected.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::cyclo_factor::FactorSet;
use crate::error::{Error, Result};
use crate::field_tower::{Elem, FieldTower, Level};
use crate::oracle::SweepReport;
use crate::polyring::Poly;
use crate::pp_engine::{InverseCase, InverseSpec, PpSpec};

pub fn elem_to_json(tower: &FieldTower, e: &Elem) -> Value {
    match e.level() {
        Level::Fp | Level::Fq => Value::Array(
            e.coeffs()
                .iter()
                .map(|&c| Value::from(c))
                .collect::<Vec<_>>(),
        ),
        Level::Fqn => Value::Array(
            e.coeffs()
                .chunks(tower.k() as usize)
                .map(|b| Value::Array(b.iter().map(|&c| Value::from(c)).collect()))
                .collect(),
        ),
    }
}

fn ints_from(v: &Value) -> Result<Vec<u64>> {
    v.as_array()
        .ok_or_else(|| Error::InvalidInput("expected an integer array".into()))?
        .iter()
        .map(|x| {
            x.as_u64()
                .ok_or_else(|| Error::InvalidInput("expected a nonnegative integer".into()))
        })
        .collect()
}

pub fn elem_from_json(tower: &FieldTower, level: Level, v: &Value) -> Result<Elem> {
    let coeffs: Vec<u64> = match level {
        Level::Fp | Level::Fq => ints_from(v)?,
        Level::Fqn => {
            let blocks = v
                .as_array()
                .ok_or_else(|| Error::InvalidInput("expected nested arrays".into()))?;
            let mut flat = Vec::new();
            for b in blocks {
                flat.extend(ints_from(b)?);
            }
            flat
        }
    };
    tower.elem_from_coeffs(level, &coeffs)
}

pub fn poly_to_json(tower: &FieldTower, f: &Poly) -> Value {
    json!({
        "level": f.level().as_str(),
        "coeffs": f.coeffs().iter().map(|c| elem_to_json(tower, c)).collect::<Vec<_>>(),
    })
}

pub fn poly_from_json(tower: &FieldTower, v: &Value) -> Result<Poly> {
    let level = Level::from_str(
        v.get("level")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::InvalidInput("polynomial missing level".into()))?,
    )?;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput("polynomial missing coeffs".into()))?
        .iter()
        .map(|c| elem_from_json(tower, level, c))
        .collect::<Result<Vec<_>>>()?;
    Poly::new(level, coeffs)
}

pub fn tower_to_json(tower: &FieldTower) -> Value {
    json!({
        "p": tower.p(),
        "k": tower.k(),
        "n": tower.n(),
        "mod_q": tower.mod_q(),
        "mod_qn": tower.mod_qn(),
    })
}

/// Rebuilds the tower from (p, k, n) and checks the stored moduli against
/// the deterministic choice.
pub fn tower_from_json(v: &Value, enum_bound: u64) -> Result<Arc<FieldTower>> {
    let p = v
        .get("p")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::InvalidInput("tower missing p".into()))?;
    let k = v
        .get("k")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::InvalidInput("tower missing k".into()))? as u32;
    let n = v
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::InvalidInput("tower missing n".into()))? as u32;
    let tower = FieldTower::build_with_bound(p, k, n, enum_bound)?;
    if let Some(mq) = v.get("mod_q") {
        if ints_from(mq)? != tower.mod_q() {
            return Err(Error::InvalidInput(
                "stored mod_q differs from the canonical modulus".into(),
            ));
        }
    }
    if let Some(mqn) = v.get("mod_qn") {
        let blocks = mqn
            .as_array()
            .ok_or_else(|| Error::InvalidInput("mod_qn must be an array".into()))?;
        let stored: Vec<Vec<u64>> = blocks.iter().map(ints_from).collect::<Result<_>>()?;
        if stored != tower.mod_qn() {
            return Err(Error::InvalidInput(
                "stored mod_qn differs from the canonical modulus".into(),
            ));
        }
    }
    Ok(tower)
}

pub fn pp_spec_to_json(spec: &PpSpec) -> Value {
    let tw = spec.tower();
    json!({
        "kind": "pp_spec",
        "tower": tower_to_json(tw),
        "f": poly_to_json(tw, spec.f()),
        "g": poly_to_json(tw, spec.g()),
        "h": poly_to_json(tw, spec.h()),
        "k": poly_to_json(tw, spec.k()),
    })
}

pub fn pp_spec_from_json(v: &Value, enum_bound: u64) -> Result<PpSpec> {
    expect_kind(v, "pp_spec")?;
    let tower = tower_from_json(
        v.get("tower")
            .ok_or_else(|| Error::InvalidInput("spec missing tower".into()))?,
        enum_bound,
    )?;
    let get = |key: &str| -> Result<Poly> {
        poly_from_json(
            &tower,
            v.get(key)
                .ok_or_else(|| Error::InvalidInput(format!("spec missing {key}")))?,
        )
    };
    PpSpec::new(Arc::clone(&tower), get("f")?, get("g")?, get("h")?, get("k")?)
}

pub fn inverse_spec_to_json(inv: &InverseSpec) -> Value {
    let tw = inv.tower();
    json!({
        "kind": "inverse_spec",
        "tower": tower_to_json(tw),
        "case": inv.case().as_str(),
        "correction": poly_to_json(tw, inv.correction()),
        "h_inverse": poly_to_json(tw, inv.h_inverse()),
        "base_inverse": poly_to_json(tw, inv.base_inverse()),
        "k": poly_to_json(tw, inv.k()),
        "a": elem_to_json(tw, inv.a()),
        "delta": elem_to_json(tw, inv.delta()),
    })
}

pub fn inverse_spec_from_json(v: &Value, enum_bound: u64) -> Result<InverseSpec> {
    expect_kind(v, "inverse_spec")?;
    let tower = tower_from_json(
        v.get("tower")
            .ok_or_else(|| Error::InvalidInput("inverse missing tower".into()))?,
        enum_bound,
    )?;
    let get_poly = |key: &str| -> Result<Poly> {
        poly_from_json(
            &tower,
            v.get(key)
                .ok_or_else(|| Error::InvalidInput(format!("inverse missing {key}")))?,
        )
    };
    let case = InverseCase::from_str(
        v.get("case")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::InvalidInput("inverse missing case".into()))?,
    )?;
    let a = elem_from_json(
        &tower,
        Level::Fq,
        v.get("a")
            .ok_or_else(|| Error::InvalidInput("inverse missing a".into()))?,
    )?;
    let delta = elem_from_json(
        &tower,
        Level::Fqn,
        v.get("delta")
            .ok_or_else(|| Error::InvalidInput("inverse missing delta".into()))?,
    )?;
    InverseSpec::assemble(
        Arc::clone(&tower),
        get_poly("correction")?,
        get_poly("h_inverse")?,
        get_poly("base_inverse")?,
        get_poly("k")?,
        case,
        a,
        delta,
    )
}

pub fn factor_set_to_json(fs: &FactorSet) -> Value {
    let tw = fs.tower();
    json!({
        "kind": "factor_set",
        "tower": tower_to_json(tw),
        "n": fs.n(),
        "factors": fs
            .factors()
            .iter()
            .map(|(f, m)| json!({
                "coeffs": f.coeffs().iter().map(|c| elem_to_json(tw, c)).collect::<Vec<_>>(),
                "multiplicity": m,
            }))
            .collect::<Vec<_>>(),
    })
}

/// Sweep report artifact. Wall time is deliberately omitted so identical
/// seeds serialize byte-identically.
pub fn sweep_report_to_json(report: &SweepReport) -> Value {
    json!({
        "kind": "sweep_report",
        "mode": report.mode,
        "seed": report.seed,
        "trials": report.trials,
        "agreements": report.agreements,
        "disagreements": report.disagreements,
    })
}

fn expect_kind(v: &Value, kind: &str) -> Result<()> {
    match v.get("kind").and_then(Value::as_str) {
        Some(k) if k == kind => Ok(()),
        Some(other) => Err(Error::InvalidInput(format!(
            "expected a {kind} artifact, found {other}"
        ))),
        None => Err(Error::InvalidInput(format!(
            "expected a {kind} artifact with a kind field"
        ))),
    }
}

pub fn artifact_kind(v: &Value) -> Option<&str> {
    v.get("kind").and_then(Value::as_str)
}

/// Table output formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Json,
    Csv,
    Bin,
}

impl TableFormat {
    pub fn from_str(s: &str) -> Result<TableFormat> {
        match s {
            "json" => Ok(TableFormat::Json),
            "csv" => Ok(TableFormat::Csv),
            "bin" => Ok(TableFormat::Bin),
            other => Err(Error::InvalidInput(format!("unknown format {other:?}"))),
        }
    }
}

/// Renders a value table: a JSON array of output indices, CSV rows of
/// `index,output_index`, or little-endian u64 words.
pub fn render_table(table: &[u64], format: TableFormat) -> Vec<u8> {
    match format {
        TableFormat::Json => {
            let mut s = serde_json::to_string(&table).expect("integers serialize");
            s.push('\n');
            s.into_bytes()
        }
        TableFormat::Csv => {
            let mut s = String::from("index,output_index\n");
            for (i, v) in table.iter().enumerate() {
                s.push_str(&format!("{i},{v}\n"));
            }
            s.into_bytes()
        }
        TableFormat::Bin => table.iter().flat_map(|v| v.to_le_bytes()).collect(),
    }
}

/// Parses the compact polynomial syntax: comma-separated coefficients,
/// constant term first; slash-separated sub-coefficients for extension
/// elements (e.g. "0/1,1/0" over F_{q^n} with k·n = 2).
pub fn poly_from_compact(tower: &FieldTower, level: Level, s: &str) -> Result<Poly> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Poly::zero(level));
    }
    let want = tower.level_len(level);
    let coeffs = s
        .split(',')
        .map(|part| {
            let ints = part
                .trim()
                .split('/')
                .map(|x| {
                    x.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::InvalidInput(format!("bad coefficient {part:?}")))
                })
                .collect::<Result<Vec<u64>>>()?;
            if ints.len() != want {
                return Err(Error::InvalidInput(format!(
                    "coefficient {part:?} has {} entries, expected {want}",
                    ints.len()
                )));
            }
            tower.elem_from_coeffs(level, &ints)
        })
        .collect::<Result<Vec<_>>>()?;
    Poly::new(level, coeffs)
}

/// Parses a single element in compact form ("2" or "0/1").
pub fn elem_from_compact(tower: &FieldTower, level: Level, s: &str) -> Result<Elem> {
    let ints = s
        .trim()
        .split('/')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidInput(format!("bad element {s:?}")))
        })
        .collect::<Result<Vec<u64>>>()?;
    tower.elem_from_coeffs(level, &ints)
}

/// Detects whether a compact polynomial string is shaped for level Fq or
/// Fqn by its per-coefficient entry count.
pub fn detect_compact_level(tower: &FieldTower, s: &str) -> Result<Level> {
    let first = s
        .trim()
        .split(',')
        .next()
        .ok_or_else(|| Error::InvalidInput("empty polynomial".into()))?;
    let entries = first.split('/').count();
    if entries == tower.level_len(Level::Fq) {
        Ok(Level::Fq)
    } else if entries == tower.level_len(Level::Fqn) {
        Ok(Level::Fqn)
    } else {
        Err(Error::InvalidInput(format!(
            "coefficient {first:?} matches neither level ({} or {} entries expected)",
            tower.level_len(Level::Fq),
            tower.level_len(Level::Fqn)
        )))
    }
}

/// Error JSON emitted by the CLI and FFI layers.
pub fn error_to_json(err: &Error) -> Value {
    json!({
        "error": {
            "code": err.code(),
            "message": err.to_string(),
        }
    })
}

/// Pretty-printed artifact with a trailing newline (byte-stable given the
/// same value).
pub fn to_pretty_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("artifact values serialize");
    s.push('\n');
    s
}

/// Stable key order helper for hand-assembled objects.
pub fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in entries {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}
