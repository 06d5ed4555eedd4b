//! Splitting schemes: ordered lists of stage exponentials.
//!
//! A [`Scheme`] stands for the product `Π_k exp(c_k x X_k)` read left to
//! right, where each `X_k` is one of the slot operators (`A`, `B`, optionally
//! the shift-time generator `T`) or a nested commutator of them. Operator
//! products act on states from the right, so propagators apply the stage
//! list in reverse.

mod coeff;
mod construct;
mod json;
mod timing;

use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::ncalg::{
    product_log, stage_product, Bracket, Coeff, LieCombination, NcSeries, Poly, Rational,
    StageGenerator,
};

pub use coeff::{AlgebraicConstant, StageCoeff};
pub use construct::{
    by_name, catalog, g1, g2, g4, hybrid_fourth, hybrid_second, quintuple, ruth, s6, s8, strang,
    strang_three, triple_jump, trotter, CATALOG_NAMES,
};
pub use json::catalog_json;
pub use timing::{evaluation_times, TimedStage};

/// A commutator stage `exp(c x^p [..])`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorSpec {
    pub bracket: Bracket,
    /// Power of the expansion variable carried by the stage.
    pub x_power: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StageKind {
    Slot(usize),
    Commutator(CommutatorSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stage {
    pub kind: StageKind,
    pub coeff: StageCoeff,
}

impl Stage {
    pub fn slot(slot: usize, coeff: StageCoeff) -> Self {
        Stage {
            kind: StageKind::Slot(slot),
            coeff,
        }
    }

    pub fn commutator(bracket: Bracket, x_power: u32, coeff: StageCoeff) -> Self {
        Stage {
            kind: StageKind::Commutator(CommutatorSpec { bracket, x_power }),
            coeff,
        }
    }

    pub fn slot_index(&self) -> Option<usize> {
        match self.kind {
            StageKind::Slot(i) => Some(i),
            StageKind::Commutator(_) => None,
        }
    }

    /// Power of the expansion variable: 1 for slot stages.
    pub fn x_power(&self) -> u32 {
        match &self.kind {
            StageKind::Slot(_) => 1,
            StageKind::Commutator(c) => c.x_power,
        }
    }

    /// The stage for the argument `scale · x`.
    pub fn scaled(&self, scale: &StageCoeff) -> Stage {
        Stage {
            kind: self.kind.clone(),
            coeff: self.coeff.mul(&scale.pow(self.x_power())),
        }
    }
}

/// An exponential product formula over named slots.
#[derive(Clone, Debug, PartialEq)]
pub struct Scheme {
    name: String,
    slots: Vec<String>,
    stages: Vec<Stage>,
    claimed_order: usize,
    symmetric: bool,
    constants: Vec<AlgebraicConstant>,
    /// Stage list before adjacent same-slot factors were merged.
    unmerged: Vec<Stage>,
}

impl Scheme {
    /// Validates and builds a scheme. Adjacent same-slot stages are merged.
    pub fn new(
        name: impl Into<String>,
        slots: Vec<String>,
        stages: Vec<Stage>,
        claimed_order: usize,
        symmetric: bool,
        constants: Vec<AlgebraicConstant>,
    ) -> Result<Self> {
        let stages: Vec<Stage> = stages
            .into_iter()
            .map(|s| Stage {
                coeff: s.coeff.revalued(&constants),
                kind: s.kind,
            })
            .collect();
        let unmerged = stages.clone();
        let scheme = Scheme {
            name: name.into(),
            slots,
            stages: merge_adjacent(stages)
                .into_iter()
                .map(|s| Stage {
                    coeff: s.coeff.revalued(&constants),
                    kind: s.kind,
                })
                .collect(),
            claimed_order,
            symmetric,
            constants,
            unmerged,
        };
        scheme.validate()?;
        Ok(scheme)
    }

    fn validate(&self) -> Result<()> {
        if self.slots.is_empty() {
            return invalid("scheme needs at least one slot");
        }
        if self.stages.is_empty() {
            return invalid("scheme needs at least one stage");
        }
        for stage in &self.stages {
            match &stage.kind {
                StageKind::Slot(i) if *i >= self.slots.len() => {
                    return invalid(format!("stage slot {i} outside {} slots", self.slots.len()));
                }
                StageKind::Slot(_) => {}
                StageKind::Commutator(c) => {
                    if c.bracket.depth() < 1 {
                        return invalid("commutator stage needs bracket depth ≥ 1");
                    }
                    if c.x_power < 2 {
                        return invalid("commutator stage needs x_power ≥ 2");
                    }
                    if c.x_power as usize != c.bracket.degree() {
                        return invalid(format!(
                            "commutator stage x_power {} differs from bracket degree {}",
                            c.x_power,
                            c.bracket.degree()
                        ));
                    }
                    if !bracket_in_range(&c.bracket, self.slots.len()) {
                        return invalid("commutator stage references an unknown slot");
                    }
                }
            }
            for var in stage.coeff.exact().map(Poly::variables).unwrap_or_default() {
                if !self.constants.iter().any(|c| c.name == var) {
                    return invalid(format!("stage coefficient uses undeclared constant {var}"));
                }
            }
        }
        for slot in 0..self.slots.len() {
            let sum = self.slot_sum(slot);
            let ok = match sum.exact() {
                Some(p) => p == &Poly::int(1) || self.reduces_to_one(p),
                None => (sum.value() - 1.0).abs() <= 1e-12,
            };
            if !ok {
                return invalid(format!(
                    "coefficients of slot {} sum to {} instead of 1",
                    self.slots[slot],
                    sum.value()
                ));
            }
        }
        if self.symmetric && !self.is_palindrome() {
            return invalid("scheme flagged symmetric but its stage list is not a palindrome");
        }
        Ok(())
    }

    fn reduces_to_one(&self, p: &Poly) -> bool {
        self.reduce(p) == Poly::int(1)
    }

    /// Reduces an exact coefficient modulo the defining polynomials of the
    /// scheme's algebraic constants.
    pub fn reduce(&self, p: &Poly) -> Poly {
        self.constants
            .iter()
            .fold(p.clone(), |acc, c| acc.reduce_mod(&c.name, &c.defining))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn slots(&self) -> &[String] {
        &self.slots
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn unmerged_stages(&self) -> &[Stage] {
        &self.unmerged
    }

    pub fn claimed_order(&self) -> usize {
        self.claimed_order
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn constants(&self) -> &[AlgebraicConstant] {
        &self.constants
    }

    pub fn slot_index(&self, label: &str) -> Option<usize> {
        self.slots.iter().position(|s| s == label)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Sum of the coefficients of one slot's stages.
    pub fn slot_sum(&self, slot: usize) -> StageCoeff {
        self.stages
            .iter()
            .filter(|s| s.slot_index() == Some(slot))
            .fold(StageCoeff::rational(Rational::from_integer(0.into())), |acc, s| {
                acc.add(&s.coeff)
            })
    }

    pub fn is_palindrome(&self) -> bool {
        let n = self.stages.len();
        (0..n / 2).all(|i| {
            let (a, b) = (&self.stages[i], &self.stages[n - 1 - i]);
            a.kind == b.kind && a.coeff.same_value(&b.coeff)
        })
    }

    pub fn has_commutators(&self) -> bool {
        self.stages
            .iter()
            .any(|s| matches!(s.kind, StageKind::Commutator(_)))
    }

    /// True when every stage coefficient is an exact rational.
    pub fn is_rational(&self) -> bool {
        self.stages.iter().all(|s| s.coeff.as_rational().is_some())
    }

    /// True when every stage coefficient has an exact form.
    pub fn is_exact(&self) -> bool {
        self.stages.iter().all(|s| s.coeff.exact().is_some())
    }

    /// Stage list in the form the series algebra consumes.
    pub fn series_stages<C: Coeff>(
        &self,
        coeff: impl Fn(&StageCoeff) -> Option<C>,
    ) -> Result<Vec<(StageGenerator, C)>> {
        self.stages
            .iter()
            .map(|s| {
                let g = match &s.kind {
                    StageKind::Slot(i) => StageGenerator::Letter(*i),
                    StageKind::Commutator(c) => {
                        StageGenerator::Lie(LieCombination::from_bracket(&self.slots, &c.bracket)?)
                    }
                };
                let c = coeff(&s.coeff).ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "stage coefficient {} has no form in the requested ring",
                        s.coeff
                    ))
                })?;
                Ok((g, c))
            })
            .collect()
    }

    /// Exact correction-term series when all coefficients are rational.
    pub fn product_log_rational(&self, order: usize) -> Result<NcSeries<Rational>> {
        let stages = self.series_stages(StageCoeff::as_rational)?;
        product_log(&self.slots, &stages, order)
    }

    /// Correction-term series with coefficients that are polynomials in the
    /// scheme's algebraic constants, treated as free symbols.
    pub fn product_log_symbolic(&self, order: usize) -> Result<NcSeries<Poly>> {
        let stages = self.series_stages(|c| c.exact().cloned())?;
        product_log(&self.slots, &stages, order)
    }

    /// Correction-term series evaluated in floating point.
    pub fn product_log_f64(&self, order: usize) -> Result<NcSeries<f64>> {
        let stages = self.series_stages(|c| Some(c.value()))?;
        product_log(&self.slots, &stages, order)
    }

    /// Product of stage exponentials without the logarithm, symbolic in the
    /// algebraic constants.
    pub fn product_series_symbolic(&self, order: usize) -> Result<NcSeries<Poly>> {
        let stages = self.series_stages(|c| c.exact().cloned())?;
        stage_product(&self.slots, &stages, order)
    }

    /// True iff some non-commutator stage has a negative coefficient, the
    /// situation that produces negative weights in Monte Carlo use.
    pub fn has_negative_coefficient(&self) -> bool {
        self.stages
            .iter()
            .any(|s| s.slot_index().is_some() && s.coeff.value() < 0.0)
    }

    /// Copy without the stages of one slot, re-merged. Used to compare a
    /// time-ordered scheme with its time-independent counterpart.
    pub fn without_slot(&self, label: &str) -> Result<Scheme> {
        let Some(drop) = self.slot_index(label) else {
            return invalid(format!("scheme has no slot {label}"));
        };
        let remap = |i: usize| if i > drop { i - 1 } else { i };
        let slots: Vec<String> = self
            .slots
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != drop)
            .map(|(_, s)| s.clone())
            .collect();
        let mut stages = Vec::new();
        for s in &self.stages {
            match &s.kind {
                StageKind::Slot(i) if *i == drop => {}
                StageKind::Slot(i) => stages.push(Stage::slot(remap(*i), s.coeff.clone())),
                StageKind::Commutator(c) => {
                    if bracket_uses(&c.bracket, drop) {
                        return invalid(format!("commutator stage uses slot {label}"));
                    }
                    stages.push(Stage::commutator(c.bracket.relabel(&remap), c.x_power, s.coeff.clone()));
                }
            }
        }
        Scheme::new(
            format!("{}-without-{label}", self.name),
            slots,
            stages,
            self.claimed_order,
            self.symmetric,
            self.constants.clone(),
        )
    }

    /// Compact rendering, e.g. `A:1/2 B:1 A:1/2`.
    pub fn render(&self) -> String {
        self.stages
            .iter()
            .map(|s| match &s.kind {
                StageKind::Slot(i) => format!("{}:{}", self.slots[*i], s.coeff),
                StageKind::Commutator(c) => format!(
                    "{}:{}*x^{}",
                    c.bracket.render(&self.slots),
                    s.coeff,
                    c.x_power
                ),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {}): {}", self.name, self.claimed_order, self.render())
    }
}

fn bracket_in_range(b: &Bracket, n: usize) -> bool {
    match b {
        Bracket::Gen(g) => *g < n,
        Bracket::Comm(a, c) => bracket_in_range(a, n) && bracket_in_range(c, n),
    }
}

fn bracket_uses(b: &Bracket, slot: usize) -> bool {
    match b {
        Bracket::Gen(g) => *g == slot,
        Bracket::Comm(a, c) => bracket_uses(a, slot) || bracket_uses(c, slot),
    }
}

/// Merges adjacent stages of the same slot, dropping stages whose merged
/// coefficient is exactly zero.
fn merge_adjacent(stages: Vec<Stage>) -> Vec<Stage> {
    let mut out: Vec<Stage> = Vec::with_capacity(stages.len());
    for stage in stages {
        if let (Some(top), Some(slot)) = (out.last_mut(), stage.slot_index()) {
            if top.slot_index() == Some(slot) {
                top.coeff = top.coeff.add(&stage.coeff);
                if top.coeff.is_exact_zero() {
                    out.pop();
                }
                continue;
            }
        }
        if !stage.coeff.is_exact_zero() {
            out.push(stage);
        }
    }
    out
}

/// Concatenates `base(scale_k x)` for each part, merging on flatten.
pub fn compose(
    name: impl Into<String>,
    parts: &[(&Scheme, StageCoeff)],
    claimed_order: usize,
    symmetric: bool,
    extra_constants: Vec<AlgebraicConstant>,
) -> Result<Scheme> {
    let Some((first, _)) = parts.first() else {
        return invalid("composition needs at least one part");
    };
    if parts.iter().any(|(s, _)| s.slots != first.slots) {
        return invalid("composed schemes must share their slots");
    }
    let mut constants: Vec<AlgebraicConstant> = Vec::new();
    for c in parts
        .iter()
        .flat_map(|(s, _)| s.constants.iter())
        .chain(extra_constants.iter())
    {
        match constants.iter().find(|k| k.name == c.name) {
            Some(existing) if existing.defining != c.defining => {
                return invalid(format!("conflicting definitions of constant {}", c.name));
            }
            Some(_) => {}
            None => constants.push(c.clone()),
        }
    }
    let stages: Vec<Stage> = parts
        .iter()
        .flat_map(|(s, scale)| s.stages.iter().map(move |st| st.scaled(scale)))
        .collect();
    Scheme::new(name, first.slots.clone(), stages, claimed_order, symmetric, constants)
}
