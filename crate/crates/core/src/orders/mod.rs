//! Order conditions of splitting schemes.
//!
//! For a stage pattern `X_1 X_2 … X_M` with symbolic coefficients `p_i`, the
//! logarithm of `Π exp(p_i x X_i)` is a Lie series. Its coefficient on each
//! Lyndon basis element of degree `k` is a polynomial in the `p_i`; the scheme
//! has order `m` when the degree-1 coefficients are 1 and every coefficient
//! of degree `2..=m` vanishes.

mod family;
mod solve;

use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::ncalg::{
    lie_project, product_log, stage_product, Bracket, Coeff, CoeffJson, NcSeries, Poly, Rational,
    StageGenerator, Word,
};
use crate::schemes::{Scheme, StageCoeff};

pub use family::{family_csv, ruth_family, FamilyPoint, RUTH};
pub use solve::{solve, PolySystem, SolveReport, SOLVE_MAX_ITER, SOLVE_TOL};

/// Largest truncation order the symbolic generator accepts.
pub const MAX_ORDER: usize = 10;

/// One polynomial condition `poly = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderCondition {
    pub degree: usize,
    /// Lyndon word labelling the basis element.
    pub word: Word,
    /// The bracket of `word`, rendered over the slot labels.
    pub bracket: String,
    pub poly: Poly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderConditionSet {
    pub pattern: String,
    pub slots: Vec<String>,
    pub parameters: Vec<String>,
    pub target_order: usize,
    pub equations: Vec<OrderCondition>,
}

impl OrderConditionSet {
    pub fn of_degree(&self, k: usize) -> impl Iterator<Item = &OrderCondition> {
        self.equations.iter().filter(move |e| e.degree == k)
    }

    /// Conditions as a polynomial system over the parameters.
    pub fn system(&self) -> PolySystem {
        PolySystem::new(
            self.parameters.clone(),
            self.equations.iter().map(|e| e.poly.clone()).collect(),
        )
    }

    /// Conditions that are not identically zero.
    pub fn nontrivial(&self) -> impl Iterator<Item = &OrderCondition> {
        self.equations.iter().filter(|e| !e.poly.is_zero())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pattern": self.pattern,
            "slots": self.slots,
            "parameters": self.parameters,
            "order": self.target_order,
            "equations": self.equations.iter().map(|e| json!({
                "degree": e.degree,
                "word": e.word.letters(),
                "bracket": e.bracket,
                "poly": e.poly.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Slot labels of a pattern: its distinct letters in alphabetical order.
fn pattern_slots(pattern: &str) -> Result<(Vec<String>, Vec<usize>)> {
    let letters: Vec<char> = pattern.chars().filter(|c| !c.is_whitespace()).collect();
    if letters.is_empty() {
        return invalid("empty stage pattern");
    }
    if let Some(c) = letters.iter().find(|c| !c.is_ascii_uppercase()) {
        return invalid(format!("pattern letters must be upper-case slot labels, found {c:?}"));
    }
    let mut slots: Vec<char> = letters.clone();
    slots.sort_unstable();
    slots.dedup();
    let idx = letters
        .iter()
        .map(|c| slots.iter().position(|s| s == c).expect("letter is a slot"))
        .collect();
    Ok((slots.into_iter().map(String::from).collect(), idx))
}

/// Symbolic order conditions of degrees `1..=m` for a stage pattern such as
/// `"ABABAB"`, with parameters `p1..pM` in pattern order.
pub fn order_conditions(pattern: &str, m: usize) -> Result<OrderConditionSet> {
    if m < 1 {
        return invalid("target order must be at least 1");
    }
    if m > MAX_ORDER {
        return Err(Error::Resource(format!(
            "target order {m} exceeds the truncation cap {MAX_ORDER}"
        )));
    }
    let (slots, idx) = pattern_slots(pattern)?;
    let parameters: Vec<String> = (1..=idx.len()).map(|i| format!("p{i}")).collect();
    let stages: Vec<(StageGenerator, Poly)> = idx
        .iter()
        .zip(&parameters)
        .map(|(&g, p)| (StageGenerator::Letter(g), Poly::var(p)))
        .collect();
    let log = product_log(&slots, &stages, m)?;
    let lie = lie_project(&log)?;
    let mut equations = Vec::new();
    for w in crate::ncalg::lyndon_words(slots.len(), m) {
        let mut poly = lie.coeff(&w);
        if w.degree() == 1 {
            poly = poly.sub(&Poly::int(1));
        }
        equations.push(OrderCondition {
            degree: w.degree(),
            bracket: Bracket::from_lyndon(w.letters()).render(&slots),
            word: w,
            poly,
        });
    }
    Ok(OrderConditionSet {
        pattern: pattern.chars().filter(|c| !c.is_whitespace()).collect(),
        slots,
        parameters,
        target_order: m,
        equations,
    })
}

/// Relative tolerance of the floating-point order check.
pub const VERIFY_TOL: f64 = 1e-12;

/// Highest `k ≤ m` for which every condition of degree `≤ k` holds.
///
/// Rational schemes are checked exactly. Otherwise the correction series is
/// evaluated in `f64`, and a degree-`k` coefficient counts as zero when it is
/// at most [`VERIFY_TOL`] times the largest degree-`k` coefficient of the
/// product with all stage coefficients replaced by their magnitudes.
pub fn verify_order(scheme: &Scheme, m: usize) -> Result<usize> {
    if m > MAX_ORDER {
        return Err(Error::Resource(format!(
            "verification order {m} exceeds the truncation cap {MAX_ORDER}"
        )));
    }
    if m == 0 {
        return Ok(0);
    }
    let residual: Vec<Vec<f64>> = if scheme.is_rational() {
        let log = scheme.product_log_rational(m)?;
        degree_residuals(&subtract_sum(&log), m, |c: &Rational| {
            if num_traits::Zero::is_zero(c) {
                0.0
            } else {
                f64::INFINITY
            }
        })
    } else {
        let log = scheme.product_log_f64(m)?;
        let abs = scheme.series_stages(|c: &StageCoeff| Some(c.value().abs()))?;
        let scale = stage_product(scheme.slots(), &abs, m)?;
        let mut per_degree = vec![1.0f64; m + 1];
        for (w, c) in scale.terms() {
            per_degree[w.degree()] = per_degree[w.degree()].max(c.abs());
        }
        degree_residuals(&subtract_sum(&log), m, |c: &f64| c.abs())
            .into_iter()
            .enumerate()
            .map(|(k, v)| v.into_iter().map(|x| x / (VERIFY_TOL * per_degree[k])).collect())
            .collect()
    };
    let mut verified = 0;
    for (k, values) in residual.iter().enumerate().skip(1) {
        if values.iter().all(|v| *v <= 1.0 || (*v == 0.0)) {
            verified = k;
        } else {
            break;
        }
    }
    Ok(verified)
}

/// `log − x Σ X_i`: the correction series whose vanishing defines the order.
fn subtract_sum<C: Coeff>(log: &NcSeries<C>) -> NcSeries<C> {
    let mut out = log.clone();
    for g in 0..log.generators().len() {
        let w = Word::letter(g);
        let c = out.coeff(&w).minus(&C::one());
        let mut terms: Vec<(Word, C)> = out
            .terms()
            .filter(|(k, _)| **k != w)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        terms.push((w, c));
        out = NcSeries::from_terms(log.generators(), log.order(), terms);
    }
    out
}

/// Magnitudes of the correction coefficients grouped by degree; index 0 is
/// unused.
fn degree_residuals<C: Coeff>(s: &NcSeries<C>, m: usize, mag: impl Fn(&C) -> f64) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new(); m + 1];
    for (w, c) in s.terms() {
        if w.degree() >= 1 && w.degree() <= m {
            out[w.degree()].push(mag(c));
        }
    }
    out
}
