use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::coeff::Coeff;
use super::rational::{rat_int, Rational};
use super::series::NcSeries;
use super::word::{is_lyndon, standard_factorization, Word};
use crate::error::{invalid, Error, Result};

/// A nested commutator over generator ids, e.g. `[B,[A,B]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bracket {
    Gen(usize),
    Comm(Box<Bracket>, Box<Bracket>),
}

impl Bracket {
    pub fn comm(a: Bracket, b: Bracket) -> Bracket {
        Bracket::Comm(Box::new(a), Box::new(b))
    }

    pub fn degree(&self) -> usize {
        match self {
            Bracket::Gen(_) => 1,
            Bracket::Comm(a, b) => a.degree() + b.degree(),
        }
    }

    /// Nesting depth; a bare generator has depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Bracket::Gen(_) => 0,
            Bracket::Comm(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Standard right bracketing of a Lyndon word.
    pub fn from_lyndon(w: &[u8]) -> Bracket {
        if w.len() == 1 {
            return Bracket::Gen(w[0] as usize);
        }
        let (u, v) = standard_factorization(w);
        Bracket::comm(Bracket::from_lyndon(u), Bracket::from_lyndon(v))
    }

    /// Word expansion with integer coefficients.
    pub fn expand_words(&self) -> Vec<(Word, i64)> {
        match self {
            Bracket::Gen(g) => vec![(Word::letter(*g), 1)],
            Bracket::Comm(a, b) => {
                let ea = a.expand_words();
                let eb = b.expand_words();
                let mut acc: BTreeMap<Word, i64> = BTreeMap::new();
                for (wa, ca) in &ea {
                    for (wb, cb) in &eb {
                        *acc.entry(wa.concat(wb)).or_default() += ca * cb;
                        *acc.entry(wb.concat(wa)).or_default() -= ca * cb;
                    }
                }
                acc.into_iter().filter(|(_, c)| *c != 0).collect()
            }
        }
    }

    pub fn expand(&self, generators: &[String], order: usize) -> NcSeries<Rational> {
        NcSeries::from_terms(
            generators,
            order,
            self.expand_words().into_iter().map(|(w, c)| (w, rat_int(c))),
        )
    }

    pub fn render(&self, labels: &[String]) -> String {
        match self {
            Bracket::Gen(g) => labels[*g].clone(),
            Bracket::Comm(a, b) => format!("[{},{}]", a.render(labels), b.render(labels)),
        }
    }

    /// Parses `A`, `[A,B]`, `[B,[A,B]]` against the given labels.
    pub fn parse(text: &str, labels: &[String]) -> Result<Bracket> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let b = parse_bracket(&chars, &mut pos, labels)?;
        if pos != chars.len() {
            return Err(Error::Parse(format!("trailing characters in bracket {text:?}")));
        }
        Ok(b)
    }

    /// Maps generator ids through `f`.
    pub fn relabel(&self, f: &dyn Fn(usize) -> usize) -> Bracket {
        match self {
            Bracket::Gen(g) => Bracket::Gen(f(*g)),
            Bracket::Comm(a, b) => Bracket::comm(a.relabel(f), b.relabel(f)),
        }
    }
}

fn parse_bracket(chars: &[char], pos: &mut usize, labels: &[String]) -> Result<Bracket> {
    if chars.get(*pos) == Some(&'[') {
        *pos += 1;
        let a = parse_bracket(chars, pos, labels)?;
        if chars.get(*pos) != Some(&',') {
            return Err(Error::Parse("expected ',' in bracket".into()));
        }
        *pos += 1;
        let b = parse_bracket(chars, pos, labels)?;
        if chars.get(*pos) != Some(&']') {
            return Err(Error::Parse("expected ']' in bracket".into()));
        }
        *pos += 1;
        return Ok(Bracket::comm(a, b));
    }
    let start = *pos;
    while *pos < chars.len() && !matches!(chars[*pos], '[' | ']' | ',') {
        *pos += 1;
    }
    let name: String = chars[start..*pos].iter().collect();
    labels
        .iter()
        .position(|l| *l == name)
        .map(Bracket::Gen)
        .ok_or_else(|| Error::Parse(format!("unknown generator {name:?} in bracket")))
}

/// Element of the free Lie algebra written in the Lyndon basis: every key is
/// a Lyndon word standing for its standard bracketing.
#[derive(Clone, Debug, PartialEq)]
pub struct LieCombination<C> {
    generators: Vec<String>,
    terms: BTreeMap<Word, C>,
}

impl<C: Coeff> LieCombination<C> {
    pub fn zero(generators: &[String]) -> Self {
        LieCombination {
            generators: generators.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    /// Builds a combination from Lyndon words; non-Lyndon keys are rejected.
    pub fn from_terms(
        generators: &[String],
        terms: impl IntoIterator<Item = (Word, C)>,
    ) -> Result<Self> {
        let mut out = Self::zero(generators);
        for (w, c) in terms {
            if !is_lyndon(&w.0) {
                return invalid(format!("{} is not a Lyndon word", w.render(generators)));
            }
            if w.0.iter().any(|&g| g as usize >= generators.len()) {
                return invalid("word uses a generator outside the alphabet");
            }
            out.add_term(w, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, w: Word, c: C) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&w) {
            Some(old) => old.plus(&c),
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, sum);
        }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::degree).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::degree).max()
    }

    /// Terms of one degree.
    pub fn homogeneous(&self, k: usize) -> Self {
        LieCombination {
            generators: self.generators.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.degree() == k)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Re-expands into words, truncated at `order`.
    pub fn expand(&self, order: usize) -> NcSeries<C> {
        let mut out = NcSeries::zero(&self.generators, order);
        for (w, c) in &self.terms {
            if w.degree() > order {
                continue;
            }
            for (u, m) in Bracket::from_lyndon(&w.0).expand_words() {
                out.add_term(u, c.scaled(&rat_int(m)));
            }
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> LieCombination<D> {
        let mut out = LieCombination::zero(&self.generators);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// Renders e.g. `1/12 [A,[A,B]] + 1/12 [[A,B],B]`.
    pub fn render(&self) -> String
    where
        C: fmt::Display,
    {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let bracket = Bracket::from_lyndon(&w.0).render(&self.generators);
            let text = c.to_string();
            let (negative, mag) = match text.strip_prefix('-') {
                Some(rest) if !rest.contains([' ', '+']) => (true, rest.to_string()),
                _ => (false, text),
            };
            let mag = if mag.contains([' ', '+']) || mag.contains(" - ") {
                format!("({mag})")
            } else {
                mag
            };
            let body = if mag == "1" { bracket } else { format!("{mag} {bracket}") };
            match (i == 0, negative) {
                (true, true) => out.push_str(&format!("-{body}")),
                (true, false) => out.push_str(&body),
                (false, true) => out.push_str(&format!(" - {body}")),
                (false, false) => out.push_str(&format!(" + {body}")),
            }
        }
        out
    }
}

impl LieCombination<Rational> {
    /// Lie element represented by a single nested commutator.
    pub fn from_bracket(generators: &[String], b: &Bracket) -> Result<Self> {
        let degree = b.degree();
        lie_project(&b.expand(generators, degree))
    }
}

fn project_with<C: Coeff>(
    s: &NcSeries<C>,
    negligible: &dyn Fn(&C) -> bool,
) -> Result<LieCombination<C>> {
    let generators = s.generators().to_vec();
    let mut out = LieCombination::zero(&generators);
    let mut by_degree: BTreeMap<usize, BTreeMap<Word, C>> = BTreeMap::new();
    for (w, c) in s.terms() {
        by_degree.entry(w.degree()).or_default().insert(w.clone(), c.clone());
    }
    let mut expansions: HashMap<Word, Vec<(Word, i64)>> = HashMap::new();
    for (degree, mut comp) in by_degree {
        loop {
            let Some((w, c)) = comp
                .iter()
                .find(|(_, c)| !negligible(c))
                .map(|(w, c)| (w.clone(), c.clone()))
            else {
                break;
            };
            if degree == 0 || !is_lyndon(&w.0) {
                return Err(Error::NotLieElement {
                    degree,
                    word: w.render(&generators),
                });
            }
            // The smallest word of a Lyndon bracket's expansion is the word
            // itself with coefficient one, so elimination is triangular.
            let expansion = expansions
                .entry(w.clone())
                .or_insert_with(|| Bracket::from_lyndon(&w.0).expand_words());
            for (u, m) in expansion.iter() {
                let delta = c.scaled(&rat_int(*m));
                let updated = match comp.get(u) {
                    Some(old) => old.minus(&delta),
                    None => delta.negated(),
                };
                if updated.is_zero() || u == &w {
                    comp.remove(u);
                } else {
                    comp.insert(u.clone(), updated);
                }
            }
            out.add_term(w, c);
        }
    }
    Ok(out)
}

/// Rewrites a series in the Lyndon basis of the free Lie algebra.
///
/// Fails with [`Error::NotLieElement`] when any homogeneous component has a
/// non-Lie residual.
pub fn lie_project<C: Coeff>(s: &NcSeries<C>) -> Result<LieCombination<C>> {
    project_with(s, &|c: &C| c.is_zero())
}

/// Floating-point variant of [`lie_project`]: coefficients with magnitude at
/// most `tol` count as zero.
pub fn lie_project_approx(s: &NcSeries<f64>, tol: f64) -> Result<LieCombination<f64>> {
    project_with(s, &|c: &f64| c.abs() <= tol)
}
