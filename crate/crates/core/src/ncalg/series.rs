use std::collections::BTreeMap;
use std::fmt;

use super::coeff::Coeff;
use super::lie::LieCombination;
use super::rational::{rat, Rational};
use super::word::Word;
use crate::error::{invalid, Error, Result};

/// Truncated power series in noncommuting generators.
///
/// Every stored word has degree at most `order`, and zero coefficients are
/// never stored. The truncation order is fixed at construction: products and
/// logarithms never extend it.
#[derive(Clone, Debug, PartialEq)]
pub struct NcSeries<C> {
    order: usize,
    generators: Vec<String>,
    terms: BTreeMap<Word, C>,
}

impl<C: Coeff> NcSeries<C> {
    /// The zero series.
    pub fn zero(generators: &[String], order: usize) -> Self {
        NcSeries {
            order,
            generators: generators.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    /// The identity series `I`.
    pub fn identity(generators: &[String], order: usize) -> Self {
        let mut s = Self::zero(generators, order);
        s.add_term(Word::empty(), C::one());
        s
    }

    /// The single generator `g` (degree one).
    pub fn generator(generators: &[String], order: usize, g: usize) -> Result<Self> {
        if g >= generators.len() {
            return invalid(format!("generator id {g} outside alphabet of size {}", generators.len()));
        }
        let mut s = Self::zero(generators, order);
        s.add_term(Word::letter(g), C::one());
        Ok(s)
    }

    pub fn from_terms(
        generators: &[String],
        order: usize,
        terms: impl IntoIterator<Item = (Word, C)>,
    ) -> Self {
        let mut s = Self::zero(generators, order);
        for (w, c) in terms {
            s.add_term(w, c);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Word::empty())
    }

    /// Adds `c` to the coefficient of `w`. Words above the truncation order
    /// are dropped.
    pub fn add_term(&mut self, w: Word, c: C) {
        if w.degree() > self.order || c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().plus(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Homogeneous component of degree `k`.
    pub fn homogeneous(&self, k: usize) -> Self {
        Self::from_terms(
            &self.generators,
            self.order,
            self.terms
                .iter()
                .filter(|(w, _)| w.degree() == k)
                .map(|(w, c)| (w.clone(), c.clone())),
        )
    }

    /// Largest degree carrying a nonzero coefficient.
    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::degree).max()
    }

    /// Smallest degree carrying a nonzero coefficient.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::degree).min()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return invalid(format!(
                "mismatched truncation orders {} and {}",
                self.order, other.order
            ));
        }
        if self.generators != other.generators {
            return invalid(format!(
                "mismatched generator alphabets {:?} and {:?}",
                self.generators, other.generators
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.negated());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(
            &self.generators,
            self.order,
            self.terms.iter().map(|(w, v)| (w.clone(), c.times(v))),
        )
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        Self::from_terms(
            &self.generators,
            self.order,
            self.terms.iter().map(|(w, v)| (w.clone(), v.scaled(r))),
        )
    }

    /// Word-concatenation product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(&self.generators, self.order);
        // `other` iterates in increasing degree, so the inner loop can stop at
        // the first word that would exceed the truncation.
        for (w1, c1) in &self.terms {
            let budget = self.order - w1.degree();
            for (w2, c2) in &other.terms {
                if w2.degree() > budget {
                    break;
                }
                out.add_term(w1.concat(w2), c1.times(c2));
            }
        }
        Ok(out)
    }

    /// Converts every coefficient through `f`.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> NcSeries<D> {
        NcSeries::from_terms(
            &self.generators,
            self.order,
            self.terms.iter().map(|(w, c)| (w.clone(), f(c))),
        )
    }

    /// Returns the same series over a different truncation order, dropping
    /// words above the new order.
    pub fn truncated(&self, order: usize) -> Self {
        Self::from_terms(
            &self.generators,
            order,
            self.terms.iter().map(|(w, c)| (w.clone(), c.clone())),
        )
    }

    /// Human-readable rendering, one homogeneous component per line.
    pub fn render(&self) -> String
    where
        C: fmt::Display,
    {
        let mut lines = Vec::new();
        for k in 0..=self.order {
            let parts: Vec<String> = self
                .terms
                .iter()
                .filter(|(w, _)| w.degree() == k)
                .map(|(w, c)| format!("({c}) {}", w.render(&self.generators)))
                .collect();
            if !parts.is_empty() {
                lines.push(format!("degree {k}: {}", parts.join(" + ")));
            }
        }
        if lines.is_empty() {
            "0".to_string()
        } else {
            lines.join("\n")
        }
    }
}

/// Generator of a single stage exponential: either one letter of the
/// alphabet or a Lie polynomial (a commutator stage).
#[derive(Clone, Debug, PartialEq)]
pub enum StageGenerator {
    Letter(usize),
    Lie(LieCombination<Rational>),
}

impl StageGenerator {
    fn series<C: Coeff>(&self, generators: &[String], order: usize) -> Result<NcSeries<C>> {
        match self {
            StageGenerator::Letter(g) => NcSeries::generator(generators, order, *g),
            StageGenerator::Lie(l) => {
                if l.generators() != generators {
                    return invalid("Lie stage generator uses a different alphabet");
                }
                if l.min_degree().unwrap_or(1) < 1 {
                    return invalid("Lie stage generator must have no constant part");
                }
                Ok(l.expand(order).map_coeffs(C::from_rational))
            }
        }
    }
}

/// `exp(c g)` truncated at total degree `order`.
///
/// For a commutator stage the coefficient `c` carries the full power of the
/// expansion variable; degrees above the truncation are silently dropped.
pub fn stage_exp<C: Coeff>(
    generators: &[String],
    g: &StageGenerator,
    c: &C,
    order: usize,
) -> Result<NcSeries<C>> {
    if order < 1 {
        return invalid("truncation order must be at least 1");
    }
    let x = g.series::<C>(generators, order)?.scale(c);
    series_exp(&x)
}

/// Product `a · b` (word concatenation), truncated at the common order.
pub fn series_mul<C: Coeff>(a: &NcSeries<C>, b: &NcSeries<C>) -> Result<NcSeries<C>> {
    a.mul(b)
}

/// `Σ_{k≥0} x^k / k!` for a series without constant term.
pub fn series_exp<C: Coeff>(x: &NcSeries<C>) -> Result<NcSeries<C>> {
    if !x.constant_term().is_zero() {
        return Err(Error::Domain(
            "series exponential needs a zero constant term".into(),
        ));
    }
    let min_deg = x.min_degree().unwrap_or(usize::MAX);
    let mut out = NcSeries::identity(&x.generators, x.order);
    let mut power = NcSeries::identity(&x.generators, x.order);
    let mut k = 1usize;
    while k.saturating_mul(min_deg) <= x.order {
        power = power.mul(x)?.scale_rational(&rat(1, k as i64));
        if power.is_zero() {
            break;
        }
        out = out.add(&power)?;
        k += 1;
    }
    Ok(out)
}

/// `log s = Σ_{k≥1} (-1)^{k+1} (s - I)^k / k`, truncated.
pub fn series_log<C: Coeff>(s: &NcSeries<C>) -> Result<NcSeries<C>> {
    let constant = s.constant_term();
    if constant != C::one() {
        return Err(Error::Domain(format!(
            "series logarithm needs constant term 1, found {constant:?}"
        )));
    }
    let mut n = s.clone();
    n.add_term(Word::empty(), C::one().negated());
    let min_deg = n.min_degree().unwrap_or(usize::MAX);
    let mut out = NcSeries::zero(&s.generators, s.order);
    let mut power = NcSeries::identity(&s.generators, s.order);
    let mut k = 1usize;
    while k.saturating_mul(min_deg) <= s.order {
        power = power.mul(&n)?;
        if power.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out = out.add(&power.scale_rational(&rat(sign, k as i64)))?;
        k += 1;
    }
    Ok(out)
}

/// Logarithm of the left-to-right product of stage exponentials.
///
/// The degree-`k` homogeneous component of the result is the order-`k`
/// correction term of the product formula.
pub fn product_log<C: Coeff>(
    generators: &[String],
    stages: &[(StageGenerator, C)],
    order: usize,
) -> Result<NcSeries<C>> {
    series_log(&stage_product(generators, stages, order)?)
}

/// Left-to-right product of stage exponentials (no logarithm).
pub fn stage_product<C: Coeff>(
    generators: &[String],
    stages: &[(StageGenerator, C)],
    order: usize,
) -> Result<NcSeries<C>> {
    if stages.is_empty() {
        return invalid("stage list is empty");
    }
    if order < 1 {
        return invalid("truncation order must be at least 1");
    }
    let mut acc = NcSeries::identity(generators, order);
    for (g, c) in stages {
        acc = acc.mul(&stage_exp(generators, g, c, order)?)?;
    }
    Ok(acc)
}
