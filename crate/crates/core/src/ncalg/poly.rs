use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, rat_int, rational_to_f64, Rational};

/// Product of named variables raised to positive powers, kept sorted by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    /// Builds a monomial from `(name, power)` pairs; zero powers are dropped
    /// and repeated names accumulate.
    pub fn from_powers<'a>(powers: impl IntoIterator<Item = (&'a str, u32)>) -> Self {
        let mut map: BTreeMap<String, u32> = BTreeMap::new();
        for (name, p) in powers {
            if p > 0 {
                *map.entry(name.to_string()).or_default() += p;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn powers(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, p)| p).sum()
    }

    pub fn power_of(&self, name: &str) -> u32 {
        self.0.iter().find(|(n, _)| n == name).map_or(0, |(_, p)| *p)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    fn without(&self, name: &str) -> Monomial {
        Monomial(self.0.iter().filter(|(n, _)| n != name).cloned().collect())
    }

    fn with_power(&self, name: &str, power: u32) -> Monomial {
        let mut m = self.without(name);
        if power > 0 {
            m.0.push((name.to_string(), power));
            m.0.sort();
        }
        m
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(n, p)| if *p == 1 { n.clone() } else { format!("{n}^{p}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Exact multivariate polynomial over the rationals.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(rat_int(n))
    }

    pub fn var(name: &str) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::var(name), Rational::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Univariate polynomial `Σ coeffs[k] var^k`.
    pub fn univariate(var: &str, coeffs: &[Rational]) -> Self {
        Poly::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::from_powers([(var, k as u32)]), c.clone())),
        )
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
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

    /// The value when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        self.terms.keys().map(|m| m.power_of(var)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(n, _)| n.clone()))
            .collect()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Poly {
        if r.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::int(1);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to `var`.
    pub fn diff(&self, var: &str) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let p = m.power_of(var);
            if p > 0 {
                out.add_term(m.with_power(var, p - 1), c * rat_int(p as i64));
            }
        }
        out
    }

    /// Replaces `var` by the polynomial `value`.
    pub fn substitute(&self, var: &str, value: &Poly) -> Poly {
        let mut out = Poly::zero();
        let mut powers: Vec<Poly> = vec![Poly::int(1)];
        for (m, c) in &self.terms {
            let p = m.power_of(var) as usize;
            while powers.len() <= p {
                let next = powers.last().unwrap().mul(value);
                powers.push(next);
            }
            let rest = Poly::from_terms([(m.without(var), c.clone())]);
            out = out.add(&rest.mul(&powers[p]));
        }
        out
    }

    /// Renames variables through `map`; names not in the map are kept.
    pub fn rename(&self, map: &dyn Fn(&str) -> String) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            let renamed: Vec<(String, u32)> = m.0.iter().map(|(n, p)| (map(n), *p)).collect();
            (
                Monomial::from_powers(renamed.iter().map(|(n, p)| (n.as_str(), *p))),
                c.clone(),
            )
        }))
    }

    /// Remainder of division by a univariate polynomial in `var`, given by its
    /// coefficients from low to high degree. The result has degree in `var`
    /// strictly below that of the divisor.
    pub fn reduce_mod(&self, var: &str, divisor: &[Rational]) -> Poly {
        let deg = divisor.iter().rposition(|c| !c.is_zero()).expect("nonzero divisor");
        let lead = divisor[deg].clone();
        let mut out = self.clone();
        loop {
            let top = out.degree_in(var) as usize;
            if top < deg {
                return out;
            }
            // Every term carrying var^top: subtract (term / lead) * var^(top-deg) * divisor.
            let leading: Vec<(Monomial, Rational)> = out
                .terms
                .iter()
                .filter(|(m, _)| m.power_of(var) as usize == top)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect();
            for (m, c) in leading {
                let base = m.with_power(var, (top - deg) as u32);
                let factor = c / &lead;
                for (k, d) in divisor.iter().enumerate() {
                    if d.is_zero() {
                        continue;
                    }
                    let mono = base.mul(&Monomial::from_powers([(var, k as u32)]));
                    out.add_term(mono, -(&factor * d));
                }
            }
        }
    }

    pub fn eval_f64(&self, value_of: &dyn Fn(&str) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = rational_to_f64(c);
                for (n, p) in &m.0 {
                    v *= value_of(n).powi(*p as i32);
                }
                v
            })
            .sum()
    }

    /// Sum of |coefficient| times |monomial| at the given point; a scale for
    /// judging numerical cancellation in `eval_f64`.
    pub fn abs_eval_f64(&self, value_of: &dyn Fn(&str) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = rational_to_f64(&c.abs());
                for (n, p) in &m.0 {
                    v *= value_of(n).abs().powi(*p as i32);
                }
                v
            })
            .sum()
    }

    pub fn eval_rational(&self, value_of: &dyn Fn(&str) -> Rational) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (n, p) in &m.0 {
                v *= num_traits::pow(value_of(n), *p as usize);
            }
            total += v;
        }
        total
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            let coeff = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format_rational(&mag)
            };
            let body = match (m.0.is_empty(), mag.is_one()) {
                (true, _) => coeff,
                (false, true) => m.to_string(),
                (false, false) => format!("{coeff}*{m}"),
            };
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::rational::rat;
    use super::*;

    #[test]
    fn arithmetic_cancels_exactly() {
        let x = Poly::var("x");
        let y = Poly::var("y");
        let lhs = x.add(&y).mul(&x.sub(&y));
        let rhs = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(lhs, rhs);
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn derivative_and_substitution() {
        // p = 2 s^3 + (1 - 2 s)^3
        let s = Poly::var("s");
        let one_minus = Poly::int(1).sub(&s.scale(&rat(2, 1)));
        let p = s.pow(3).scale(&rat(2, 1)).add(&one_minus.pow(3));
        let dp = p.diff("s");
        // d/ds = 6 s^2 - 6 (1 - 2s)^2
        let expected = s.pow(2).scale(&rat(6, 1)).sub(&one_minus.pow(2).scale(&rat(6, 1)));
        assert_eq!(dp, expected);
        let at_half = p.substitute("s", &Poly::constant(rat(1, 2)));
        assert_eq!(at_half.as_constant().unwrap(), rat(1, 4));
    }

    #[test]
    fn reduction_modulo_defining_polynomial() {
        // s^3 mod (s^3 - 2) = 2
        let s = Poly::var("s");
        let r = s.pow(3).reduce_mod("s", &[rat(-2, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(r, Poly::int(2));
        let r = s.pow(4).add(&Poly::var("t")).reduce_mod("s", &[rat(-2, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(r, s.scale(&rat(2, 1)).add(&Poly::var("t")));
    }
}
