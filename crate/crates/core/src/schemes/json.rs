//! Scheme documents.
//!
//! ```json
//! {"name": "hybrid4", "slots": ["A","B"], "order": 4, "symmetric": true,
//!  "constants": [{"name": "s2", "defining": ["1/1","-20/1", ...], "value": "0.41449077179437573"}],
//!  "stages": [{"slot": 0, "coeff": "1/6"},
//!             {"slot": 1, "coeff": "0.82898154358875146", "exact": {"monomials": [...]}},
//!             {"commutator": ["B",["A","B"]], "coeff": "1/432", "x_power": 3}]}
//! ```
//!
//! A coefficient string of the form `p/q` or an integer is exact; any other
//! decimal without an `"exact"` companion is a plain float.

use std::path::Path;

use serde_json::{json, Value};

use super::{AlgebraicConstant, Scheme, Stage, StageCoeff, StageKind};
use crate::error::{Error, Result};
use crate::fmt::f64_17;
use crate::ncalg::{coeff_from_json, coeff_to_json, format_rational, parse_rational, Bracket, Poly};

fn bracket_to_json(b: &Bracket, labels: &[String]) -> Value {
    match b {
        Bracket::Gen(g) => Value::String(labels[*g].clone()),
        Bracket::Comm(l, r) => json!([bracket_to_json(l, labels), bracket_to_json(r, labels)]),
    }
}

fn bracket_from_json(v: &Value, labels: &[String]) -> Result<Bracket> {
    match v {
        Value::String(s) => labels
            .iter()
            .position(|l| l == s)
            .map(Bracket::Gen)
            .ok_or_else(|| Error::Parse(format!("unknown slot {s:?} in commutator"))),
        Value::Array(items) if items.len() == 2 => Ok(Bracket::comm(
            bracket_from_json(&items[0], labels)?,
            bracket_from_json(&items[1], labels)?,
        )),
        _ => Err(Error::Parse(format!("bad commutator {v}"))),
    }
}

fn is_exact_literal(s: &str) -> bool {
    let s = s.trim();
    s.contains('/') || (!s.is_empty() && s.trim_start_matches(['-', '+']).chars().all(|c| c.is_ascii_digit()))
}

fn coeff_to_json_fields(c: &StageCoeff, obj: &mut serde_json::Map<String, Value>) {
    if let Some(r) = c.as_rational() {
        obj.insert("coeff".into(), Value::String(format_rational(&r)));
        return;
    }
    obj.insert("coeff".into(), Value::String(f64_17(c.value())));
    if let Some(p) = c.exact() {
        obj.insert("exact".into(), coeff_to_json(p));
    }
}

fn coeff_from_json_fields(v: &Value) -> Result<StageCoeff> {
    let text = v
        .get("coeff")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("stage needs a string \"coeff\"".into()))?;
    if let Some(exact) = v.get("exact") {
        let p: Poly = coeff_from_json(exact)?;
        let value: f64 = text
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal coefficient {text:?}")))?;
        return Ok(StageCoeff::with_value(Some(p), value));
    }
    if is_exact_literal(text) {
        return Ok(StageCoeff::rational(parse_rational(text)?));
    }
    text.parse()
        .map(StageCoeff::float)
        .map_err(|_| Error::Parse(format!("bad coefficient {text:?}")))
}

impl Scheme {
    pub fn to_json(&self) -> Value {
        let constants: Vec<Value> = self
            .constants()
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "defining": c.defining.iter().map(format_rational).collect::<Vec<_>>(),
                    "value": f64_17(c.value),
                })
            })
            .collect();
        let stages: Vec<Value> = self
            .stages()
            .iter()
            .map(|s| {
                let mut obj = serde_json::Map::new();
                match &s.kind {
                    StageKind::Slot(i) => {
                        obj.insert("slot".into(), json!(i));
                    }
                    StageKind::Commutator(c) => {
                        obj.insert("commutator".into(), bracket_to_json(&c.bracket, self.slots()));
                        obj.insert("x_power".into(), json!(c.x_power));
                    }
                }
                coeff_to_json_fields(&s.coeff, &mut obj);
                Value::Object(obj)
            })
            .collect();
        json!({
            "name": self.name(),
            "slots": self.slots(),
            "order": self.claimed_order(),
            "symmetric": self.symmetric(),
            "constants": constants,
            "stages": stages,
        })
    }

    pub fn from_json(v: &Value) -> Result<Scheme> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("scheme needs \"{k}\"")));
        let slots: Vec<String> = serde_json::from_value(field("slots")?.clone())?;
        let order = field("order")?
            .as_u64()
            .ok_or_else(|| Error::Parse("\"order\" must be a non-negative integer".into()))?;
        let symmetric = v.get("symmetric").and_then(Value::as_bool).unwrap_or(false);
        let name = v.get("name").and_then(Value::as_str).unwrap_or("custom");
        let mut constants = Vec::new();
        for c in v.get("constants").and_then(Value::as_array).into_iter().flatten() {
            let cname = c
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("constant needs \"name\"".into()))?;
            let defining = c
                .get("defining")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("constant {cname} needs \"defining\"")))?
                .iter()
                .map(|d| d.as_str().map(parse_rational).unwrap_or_else(|| Err(Error::Parse("defining coefficients are strings".into()))))
                .collect::<Result<Vec<_>>>()?;
            let value = c
                .get("value")
                .and_then(Value::as_str)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| Error::Parse(format!("constant {cname} needs a decimal \"value\"")))?;
            constants.push(AlgebraicConstant {
                name: cname.to_string(),
                defining,
                value,
            });
        }
        let mut stages = Vec::new();
        for s in field("stages")?
            .as_array()
            .ok_or_else(|| Error::Parse("\"stages\" must be an array".into()))?
        {
            let coeff = coeff_from_json_fields(s)?;
            if let Some(slot) = s.get("slot") {
                let slot = slot
                    .as_u64()
                    .ok_or_else(|| Error::Parse("\"slot\" must be an index".into()))?;
                stages.push(Stage::slot(slot as usize, coeff));
            } else if let Some(c) = s.get("commutator") {
                let bracket = bracket_from_json(c, &slots)?;
                let x_power = s
                    .get("x_power")
                    .and_then(Value::as_u64)
                    .unwrap_or(bracket.degree() as u64);
                stages.push(Stage::commutator(bracket, x_power as u32, coeff));
            } else {
                return Err(Error::Parse("stage needs \"slot\" or \"commutator\"".into()));
            }
        }
        Scheme::new(name, slots, stages, order as usize, symmetric, constants)
    }

    pub fn load(path: &Path) -> Result<Scheme> {
        let text = std::fs::read_to_string(path)?;
        Scheme::from_json(&serde_json::from_str(&text)?)
    }
}

/// The catalog document: every named construction.
pub fn catalog_json() -> Value {
    Value::Array(super::catalog().iter().map(Scheme::to_json).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{catalog, hybrid_fourth};

    #[test]
    fn catalog_round_trips() {
        for s in catalog() {
            let back = Scheme::from_json(&s.to_json()).unwrap();
            assert_eq!(back.stages(), s.stages(), "{}", s.name());
            assert_eq!(back.constants(), s.constants());
            assert_eq!(back.slots(), s.slots());
            assert_eq!(back.to_json(), s.to_json());
        }
    }

    #[test]
    fn commutator_stage_form() {
        let v = hybrid_fourth().to_json();
        let first = &v["stages"][0];
        assert_eq!(first["commutator"], json!(["B", ["A", "B"]]));
        assert_eq!(first["coeff"], "1/432");
        assert_eq!(first["x_power"], 3);
    }

    #[test]
    fn decimal_coefficients_are_floats() {
        let doc = json!({"slots": ["A","B"], "order": 1, "stages": [
            {"slot": 0, "coeff": "0.25"}, {"slot": 1, "coeff": "1"}, {"slot": 0, "coeff": "3/4"}]});
        let s = Scheme::from_json(&doc).unwrap();
        assert!(s.stages()[0].coeff.exact().is_none());
        assert!(s.stages()[1].coeff.as_rational().is_some());
        assert!(!s.is_exact());
    }
}
