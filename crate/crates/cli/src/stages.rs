//! Stage strings `SLOT:coeff[,...]`.
//!
//! A slot is a label (`A`, `B`, `T`) or a nested commutator such as
//! `[B,[A,B]]`. The coefficient may carry the expansion variable: `x`,
//! `x/2`, `-x/24`, `2x/3`, `0.5*x`, `x^3/432`, or be a bare number (`1/2`,
//! `0.25`). Items are separated by commas or whitespace outside brackets.

use expprod::ncalg::{parse_rational, rational_to_f64, Bracket, Rational};
use expprod::schemes::{Scheme, Stage, StageCoeff};
use expprod::verify_order;

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq)]
pub enum Label {
    Slot(String),
    Bracket(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawStage {
    pub label: Label,
    /// Multiplier with the `x` factor removed.
    pub coeff: String,
    /// Explicit power of `x`, if written.
    pub power: Option<u32>,
}

fn split_items(text: &str) -> CliResult<Vec<String>> {
    let mut items = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(CliError::config(format!("unbalanced ']' in stages {text:?}")));
        }
        if depth == 0 && (ch == ',' || ch.is_whitespace()) {
            if !cur.is_empty() {
                items.push(std::mem::take(&mut cur));
            }
        } else if !ch.is_whitespace() {
            cur.push(ch);
        }
    }
    if depth != 0 {
        return Err(CliError::config(format!("unbalanced '[' in stages {text:?}")));
    }
    if !cur.is_empty() {
        items.push(cur);
    }
    if items.is_empty() {
        return Err(CliError::config("empty stage list"));
    }
    Ok(items)
}

fn parse_item(item: &str) -> CliResult<RawStage> {
    let bad = |why: &str| CliError::config(format!("bad stage {item:?}: {why}"));
    let split = if item.starts_with('[') {
        let close = item.rfind(']').ok_or_else(|| bad("missing ']'"))?;
        item[close..].find(':').map(|k| close + k)
    } else {
        item.find(':')
    };
    let colon = split.ok_or_else(|| bad("expected SLOT:coeff"))?;
    let (name, coeff) = (&item[..colon], &item[colon + 1..]);
    if name.is_empty() {
        return Err(bad("missing slot"));
    }
    let label = if name.starts_with('[') {
        Label::Bracket(name.to_string())
    } else if name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        Label::Slot(name.to_string())
    } else {
        return Err(bad("slot labels are alphanumeric"));
    };
    let (coeff, power) = split_x(coeff).map_err(|why| bad(&why))?;
    Ok(RawStage { label, coeff, power })
}

/// Separates `c1 x^k / c2` into the multiplier text and `k`.
fn split_x(text: &str) -> Result<(String, Option<u32>), String> {
    let Some(at) = text.find('x') else {
        if text.is_empty() {
            return Err("empty coefficient".into());
        }
        return Ok((text.to_string(), None));
    };
    let prefix = text[..at].trim_end_matches('*');
    let mut rest = &text[at + 1..];
    let mut power = 1;
    if let Some(r) = rest.strip_prefix('^') {
        let digits: String = r.chars().take_while(char::is_ascii_digit).collect();
        power = digits.parse::<u32>().map_err(|_| "expected a power after '^'".to_string())?;
        rest = &r[digits.len()..];
    }
    let lead = match prefix {
        "" | "+" => "1".to_string(),
        "-" => "-1".to_string(),
        p => p.to_string(),
    };
    let coeff = match rest {
        "" => lead,
        r if r.starts_with('/') && !lead.contains('/') => format!("{lead}{r}"),
        r if r.starts_with('/') => format!("({lead}){r}"),
        r if r.starts_with('*') => format!("{lead}*{}", &r[1..]),
        r => return Err(format!("unexpected {r:?} after x")),
    };
    Ok((coeff, Some(power)))
}

pub fn parse_stages(text: &str) -> CliResult<Vec<RawStage>> {
    split_items(text)?.iter().map(|s| parse_item(s)).collect()
}

/// Exact value of a multiplier; decimals are read exactly.
pub fn exact_value(text: &str) -> CliResult<Rational> {
    let bad = || CliError::config(format!("bad coefficient {text:?}"));
    let mut value = Rational::from_integer(1.into());
    for factor in text.split('*') {
        let f = factor.trim();
        let f = match (f.strip_prefix('('), f.find(")/")) {
            (Some(_), Some(k)) => {
                let inner = parse_rational(&f[1..k]).map_err(|_| bad())?;
                let den = parse_rational(&f[k + 2..]).map_err(|_| bad())?;
                if den == Rational::from_integer(0.into()) {
                    return Err(bad());
                }
                inner / den
            }
            _ => parse_rational(f).map_err(|_| bad())?,
        };
        value *= f;
    }
    Ok(value)
}

fn is_exact_literal(text: &str) -> bool {
    text.split('*').all(|f| {
        let f = f.trim().trim_start_matches('(');
        f.contains('/') || f.trim_start_matches(['-', '+']).chars().all(|c| c.is_ascii_digit())
    })
}

fn stage_coeff(text: &str) -> CliResult<StageCoeff> {
    let r = exact_value(text)?;
    Ok(if is_exact_literal(text) {
        StageCoeff::rational(r)
    } else {
        StageCoeff::float(rational_to_f64(&r))
    })
}

/// Slot labels: plain labels and bracket letters, sorted.
pub fn slot_labels(stages: &[RawStage]) -> Vec<String> {
    let mut labels: Vec<String> = Vec::new();
    for s in stages {
        match &s.label {
            Label::Slot(l) => labels.push(l.clone()),
            Label::Bracket(b) => labels.extend(
                b.split(['[', ']', ','])
                    .filter(|t| !t.is_empty())
                    .map(str::to_string),
            ),
        }
    }
    labels.sort();
    labels.dedup();
    labels
}

/// Scheme stages over `slots`. Coefficients written as `p/q` or integers are
/// exact, other decimals are floats.
pub fn build_stages(raw: &[RawStage], slots: &[String]) -> CliResult<Vec<Stage>> {
    raw.iter()
        .map(|s| {
            let coeff = stage_coeff(&s.coeff)?;
            match &s.label {
                Label::Slot(l) => {
                    if s.power.is_some_and(|p| p != 1) {
                        return Err(CliError::config(format!("slot stage {l} must carry x^1")));
                    }
                    let i = slots.iter().position(|x| x == l).expect("label collected");
                    Ok(Stage::slot(i, coeff))
                }
                Label::Bracket(b) => {
                    let bracket = Bracket::parse(b, slots)?;
                    let power = s.power.unwrap_or(bracket.degree() as u32);
                    Ok(Stage::commutator(bracket, power, coeff))
                }
            }
        })
        .collect()
}

/// Highest order probed when a stage string has no claimed order.
const PROBE_ORDER: usize = 6;

/// A scheme from a stage string, with its verified order and symmetry.
pub fn scheme_from_stages(text: &str) -> CliResult<Scheme> {
    let raw = parse_stages(text)?;
    let slots = slot_labels(&raw);
    let stages = build_stages(&raw, &slots)?;
    let probe = Scheme::new("custom", slots.clone(), stages.clone(), 0, false, Vec::new())?;
    let order = verify_order(&probe, PROBE_ORDER)?;
    let symmetric = probe.is_palindrome();
    Ok(Scheme::new("custom", slots, stages, order, symmetric, Vec::new())?)
}

/// Catalog name, JSON file or stage string.
pub fn resolve_scheme(spec: &str) -> CliResult<Scheme> {
    if let Ok(s) = expprod::schemes::by_name(spec) {
        return Ok(s);
    }
    let path = std::path::Path::new(spec);
    if path.is_file() {
        return Ok(Scheme::load(path)?);
    }
    if spec.contains(':') {
        return scheme_from_stages(spec);
    }
    Err(CliError::config(format!(
        "{spec:?} is neither a catalog scheme ({}), a scheme file nor a stage list",
        expprod::schemes::CATALOG_NAMES.join(", ")
    )))
}
