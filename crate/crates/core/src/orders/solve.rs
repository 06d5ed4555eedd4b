//! Damped Gauss-Newton for polynomial systems.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Result};
use crate::ncalg::{rational_to_f64, Poly};

/// Convergence threshold on the largest residual.
pub const SOLVE_TOL: f64 = 1e-13;
pub const SOLVE_MAX_ITER: usize = 200;
const MAX_HALVINGS: usize = 30;
const POLISH_STEPS: usize = 3;

/// Polynomial equations `f_j(v) = 0` over named variables.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem {
    pub variables: Vec<String>,
    pub equations: Vec<Poly>,
}

impl PolySystem {
    pub fn new(variables: Vec<String>, equations: Vec<Poly>) -> Self {
        PolySystem {
            variables,
            equations,
        }
    }

    /// One univariate equation given by its coefficients, low degree first.
    pub fn univariate(var: &str, coeffs: &[crate::ncalg::Rational]) -> Self {
        PolySystem::new(vec![var.to_string()], vec![Poly::univariate(var, coeffs)])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    /// Every variable, fixed ones included, in system order.
    pub solution: Vec<(String, f64)>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl SolveReport {
    pub fn value(&self, name: &str) -> Option<f64> {
        self.solution.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

fn norm2(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum()
}

/// Solves `system` for the variables not in `fixed`, starting from `guess`.
///
/// Each iteration takes the least-squares Newton step through an SVD
/// pseudo-inverse of the exact Jacobian and halves it (up to 30 times) while
/// the residual norm does not decrease. Non-convergence is reported, not
/// raised.
pub fn solve(
    system: &PolySystem,
    fixed: &BTreeMap<String, f64>,
    guess: &BTreeMap<String, f64>,
) -> Result<SolveReport> {
    for name in fixed.keys() {
        if !system.variables.contains(name) {
            return invalid(format!("fixed variable {name} is not in the system"));
        }
    }
    let free: Vec<String> = system
        .variables
        .iter()
        .filter(|v| !fixed.contains_key(*v))
        .cloned()
        .collect();
    let mut x = Vec::with_capacity(free.len());
    for v in &free {
        match guess.get(v) {
            Some(g) => x.push(*g),
            None => return invalid(format!("no initial guess for {v}")),
        }
    }
    // Substituting the fixed values keeps the Jacobian to the free columns.
    let equations: Vec<Poly> = system
        .equations
        .iter()
        .map(|e| {
            fixed.iter().fold(e.clone(), |acc, (n, v)| {
                acc.substitute(n, &Poly::constant(exact_float(*v)))
            })
        })
        .collect();
    let jac: Vec<Vec<Poly>> = equations
        .iter()
        .map(|e| free.iter().map(|v| e.diff(v)).collect())
        .collect();
    let eval = |p: &Poly, x: &[f64]| {
        p.eval_f64(&|n| free.iter().position(|f| f == n).map(|i| x[i]).unwrap_or(f64::NAN))
    };
    let residual = |x: &[f64]| -> Vec<f64> { equations.iter().map(|e| eval(e, x)).collect() };
    let newton_step = |x: &[f64], r: &[f64]| -> Option<Vec<f64>> {
        if free.is_empty() {
            return None;
        }
        let j = DMatrix::from_fn(equations.len(), free.len(), |i, k| eval(&jac[i][k], x));
        let rhs = DVector::from_column_slice(r);
        let svd = j.svd(true, true);
        let eps = 1e-14 * svd.singular_values.max().max(1e-300);
        svd.solve(&rhs, eps).ok().map(|d| d.iter().map(|v| -v).collect())
    };

    let mut r = residual(&x);
    let mut iterations = 0;
    let max_abs = |r: &[f64]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    while max_abs(&r) > SOLVE_TOL && iterations < SOLVE_MAX_ITER {
        iterations += 1;
        let Some(step) = newton_step(&x, &r) else { break };
        let base = norm2(&r);
        if step.iter().all(|d| *d == 0.0) {
            // Stationary point of the residual norm with nonzero residual
            // (for example a vanishing derivative at the guess): take the best
            // coordinate probe that lowers the norm, or give up.
            match probe(&x, base, &residual) {
                Some((xp, rp)) => {
                    x = xp;
                    r = rp;
                    continue;
                }
                None => break,
            }
        }
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(a, d)| a + t * d).collect();
            let rt = residual(&trial);
            if norm2(&rt) < base && rt.iter().all(|v| v.is_finite()) {
                x = trial;
                r = rt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let converged = max_abs(&r) <= SOLVE_TOL;
    if converged {
        // Newton steps against residuals evaluated exactly at the current
        // floats remove the rounding of the f64 polynomial evaluation, which
        // otherwise limits high-degree roots to ~1e-13.
        let exact_residual = |x: &[f64]| -> Vec<f64> {
            let exact: Vec<_> = x.iter().map(|v| exact_float(*v)).collect();
            equations
                .iter()
                .map(|e| {
                    rational_to_f64(&e.eval_rational(&|n| {
                        free.iter().position(|f| f == n).map(|i| exact[i].clone()).expect("free variable")
                    }))
                })
                .collect()
        };
        r = exact_residual(&x);
        for _ in 0..POLISH_STEPS {
            let Some(step) = newton_step(&x, &r) else { break };
            let trial: Vec<f64> = x.iter().zip(&step).map(|(a, d)| a + d).collect();
            if trial == x {
                break;
            }
            let rt = exact_residual(&trial);
            if norm2(&rt) <= norm2(&r) {
                x = trial;
                r = rt;
            } else {
                break;
            }
        }
    }
    let solution = system
        .variables
        .iter()
        .map(|v| {
            let value = fixed
                .get(v)
                .copied()
                .unwrap_or_else(|| x[free.iter().position(|f| f == v).expect("free variable")]);
            (v.clone(), value)
        })
        .collect();
    Ok(SolveReport {
        solution,
        residuals: r,
        iterations,
        converged,
    })
}

fn probe(
    x: &[f64],
    base: f64,
    residual: &dyn Fn(&[f64]) -> Vec<f64>,
) -> Option<(Vec<f64>, Vec<f64>)> {
    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    for k in 0..x.len() {
        let h = 1e-3 * x[k].abs().max(1.0);
        for sign in [1.0, -1.0] {
            let mut trial = x.to_vec();
            trial[k] += sign * h;
            let rt = residual(&trial);
            let n = norm2(&rt);
            if n < base && best.as_ref().is_none_or(|(b, _, _)| n < *b) {
                best = Some((n, trial, rt));
            }
        }
    }
    best.map(|(_, x, r)| (x, r))
}

// Exact binary value of a float as a rational.
fn exact_float(v: f64) -> crate::ncalg::Rational {
    num_rational::BigRational::from_float(v).unwrap_or_else(|| crate::ncalg::Rational::from_integer(0.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::parse_rational;

    fn coeffs(c: &[&str]) -> Vec<crate::ncalg::Rational> {
        c.iter().map(|s| parse_rational(s).unwrap()).collect()
    }

    fn one(name: &str, v: f64) -> BTreeMap<String, f64> {
        BTreeMap::from([(name.to_string(), v)])
    }

    #[test]
    fn triple_jump_root() {
        // 2s^3 + (1-2s)^3 = 1 - 6s + 12s^2 - 6s^3
        let sys = PolySystem::univariate("s", &coeffs(&["1", "-6", "12", "-6"]));
        let rep = solve(&sys, &BTreeMap::new(), &one("s", 1.0)).unwrap();
        assert!(rep.converged);
        let closed = 1.0 / (2.0 - 2f64.cbrt());
        assert!((rep.value("s").unwrap() - closed).abs() < 1e-15);
    }

    #[test]
    fn unsolvable_reports_failure() {
        // s^2 + 1 has no real root.
        let sys = PolySystem::univariate("s", &coeffs(&["1", "0", "1"]));
        let rep = solve(&sys, &BTreeMap::new(), &one("s", 0.3)).unwrap();
        assert!(!rep.converged);
        assert!(rep.max_residual() >= 1.0 - 1e-12);
    }

    #[test]
    fn missing_guess_is_an_error() {
        let sys = PolySystem::univariate("s", &coeffs(&["1", "1"]));
        assert!(solve(&sys, &BTreeMap::new(), &BTreeMap::new()).is_err());
    }
}
