//! JSON document forms for series, Lie combinations and coefficients.
//!
//! Rationals are written as decimal-free `"num/den"` strings; polynomial
//! coefficients as `{"monomials": [{"powers": {"p1": 1}, "coeff": "-2/3"}]}`.

use serde_json::{json, Map, Value};

use super::coeff::Coeff;
use super::lie::LieCombination;
use super::poly::{Monomial, Poly};
use super::rational::{format_rational, parse_rational, Rational};
use super::series::NcSeries;
use super::word::Word;
use crate::error::{Error, Result};

/// Coefficients that have a JSON form.
pub trait CoeffJson: Coeff {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl CoeffJson for Rational {
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            _ => Err(Error::Parse(format!("expected rational string, found {v}"))),
        }
    }
}

impl CoeffJson for Poly {
    fn to_json(&self) -> Value {
        let monomials: Vec<Value> = self
            .terms()
            .map(|(m, c)| {
                let powers: Map<String, Value> =
                    m.powers().iter().map(|(n, p)| (n.clone(), json!(p))).collect();
                json!({"powers": powers, "coeff": format_rational(c)})
            })
            .collect();
        json!({ "monomials": monomials })
    }

    fn from_json(v: &Value) -> Result<Self> {
        if let Value::String(_) = v {
            return Ok(Poly::constant(Rational::from_json(v)?));
        }
        let monomials = v
            .get("monomials")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("polynomial needs a \"monomials\" array".into()))?;
        let mut out = Poly::zero();
        for m in monomials {
            let powers = m
                .get("powers")
                .and_then(Value::as_object)
                .ok_or_else(|| Error::Parse("monomial needs a \"powers\" object".into()))?;
            let mut list = Vec::new();
            for (name, p) in powers {
                let p = p
                    .as_u64()
                    .ok_or_else(|| Error::Parse(format!("bad power for {name}")))?;
                list.push((name.as_str(), p as u32));
            }
            let coeff = Rational::from_json(
                m.get("coeff")
                    .ok_or_else(|| Error::Parse("monomial needs \"coeff\"".into()))?,
            )?;
            out.add_term(Monomial::from_powers(list), coeff);
        }
        Ok(out)
    }
}

impl CoeffJson for f64 {
    fn to_json(&self) -> Value {
        Value::String(crate::fmt::f64_17(*self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => s
                .parse::<f64>()
                .or_else(|_| parse_rational(s).map(|r| f64::from_rational(&r)))
                .map_err(|_| Error::Parse(format!("bad float {s:?}"))),
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("bad float {n}"))),
            _ => Err(Error::Parse(format!("expected float, found {v}"))),
        }
    }
}

pub fn coeff_to_json<C: CoeffJson>(c: &C) -> Value {
    c.to_json()
}

pub fn coeff_from_json<C: CoeffJson>(v: &Value) -> Result<C> {
    C::from_json(v)
}

fn terms_to_json<'a, C: CoeffJson + 'a>(terms: impl Iterator<Item = (&'a Word, &'a C)>) -> Value {
    Value::Array(
        terms
            .map(|(w, c)| json!({"word": w.letters(), "coeff": c.to_json()}))
            .collect(),
    )
}

fn terms_from_json<C: CoeffJson>(v: &Value, n_gens: usize) -> Result<Vec<(Word, C)>> {
    let arr = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("document needs a \"terms\" array".into()))?;
    arr.iter()
        .map(|t| {
            let word = t
                .get("word")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("term needs a \"word\" array".into()))?
                .iter()
                .map(|g| {
                    g.as_u64()
                        .filter(|&g| (g as usize) < n_gens)
                        .map(|g| g as u8)
                        .ok_or_else(|| Error::Parse(format!("bad generator id {g}")))
                })
                .collect::<Result<Vec<u8>>>()?;
            let coeff = C::from_json(
                t.get("coeff")
                    .ok_or_else(|| Error::Parse("term needs \"coeff\"".into()))?,
            )?;
            Ok((Word(word), coeff))
        })
        .collect()
}

fn header(v: &Value) -> Result<(usize, Vec<String>)> {
    let order = v
        .get("order")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("document needs an integer \"order\"".into()))?
        as usize;
    let generators = v
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("document needs a \"generators\" array".into()))?
        .iter()
        .map(|g| {
            g.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Parse("generator labels must be strings".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((order, generators))
}

impl<C: CoeffJson> NcSeries<C> {
    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order(),
            "generators": self.generators(),
            "terms": terms_to_json(self.terms()),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (order, generators) = header(v)?;
        let terms = terms_from_json::<C>(v, generators.len())?;
        if let Some((w, _)) = terms.iter().find(|(w, _)| w.degree() > order) {
            return Err(Error::Parse(format!(
                "word {} exceeds truncation order {order}",
                w.render(&generators)
            )));
        }
        Ok(NcSeries::from_terms(&generators, order, terms))
    }
}

impl<C: CoeffJson> LieCombination<C> {
    pub fn to_json(&self) -> Value {
        json!({
            "order": self.max_degree().unwrap_or(0),
            "generators": self.generators(),
            "terms": terms_to_json(self.terms()),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (_, generators) = header(v)?;
        LieCombination::from_terms(&generators, terms_from_json::<C>(v, generators.len())?)
    }
}
