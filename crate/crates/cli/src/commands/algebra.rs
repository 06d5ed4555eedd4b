//! bch, scheme, solve and family.

use std::collections::BTreeMap;

use expprod::fmt::f64_17;
use expprod::ncalg::{
    format_rational, lie_project, parse_rational, product_log, rational_from_f64, rational_to_f64, Bracket,
    LieCombination, Rational, StageGenerator,
};
use expprod::orders::{family_csv, ruth_family, MAX_ORDER};
use expprod::schemes::{catalog, Scheme, Stage, StageKind};
use expprod::{order_conditions, solve, verify_order};
use serde_json::{json, Value};

use crate::args::{BchArgs, CheckArgs, FamilyArgs, SchemeRef, SolveArgs};
use crate::error::{CliError, CliResult};
use crate::output::{Natural, Report};
use crate::stages::{exact_value, parse_stages, resolve_scheme, slot_labels, Label};

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn x_power_text(k: usize) -> String {
    if k == 1 {
        "x".into()
    } else {
        format!("x^{k}")
    }
}

pub fn bch(a: &BchArgs) -> CliResult<Report> {
    if a.order == 0 || a.order > MAX_ORDER {
        return Err(CliError::config(format!("--order must be in 1..={MAX_ORDER}")));
    }
    let raw = parse_stages(&a.stages)?;
    let slots = slot_labels(&raw);
    let mut stages: Vec<(StageGenerator, Rational)> = Vec::new();
    for s in &raw {
        let c = exact_value(&s.coeff)?;
        let g = match &s.label {
            Label::Slot(l) => {
                if s.power.is_some_and(|p| p != 1) {
                    return Err(CliError::config(format!("slot stage {l} must carry x^1")));
                }
                StageGenerator::Letter(slots.iter().position(|x| x == l).expect("label collected"))
            }
            Label::Bracket(b) => {
                let bracket = Bracket::parse(b, &slots)?;
                if s.power.is_some_and(|p| p as usize != bracket.degree()) {
                    return Err(CliError::config(format!("commutator {b} has degree {}", bracket.degree())));
                }
                StageGenerator::Lie(LieCombination::from_bracket(&slots, &bracket)?)
            }
        };
        stages.push((g, c));
    }
    let lie = lie_project(&product_log(&slots, &stages, a.order)?)?;
    let mut text = String::new();
    let mut csv = String::from("degree,bracket,coeff\n");
    let mut degrees = Vec::new();
    for k in 1..=a.order {
        let part = lie.homogeneous(k);
        let body = part.render();
        let line = if part.is_zero() {
            "0".to_string()
        } else if part.terms().count() == 1 && !body.contains(' ') {
            format!("{} {body}", x_power_text(k))
        } else {
            format!("{} ({body})", x_power_text(k))
        };
        text.push_str(&format!("degree {k}: {line}\n"));
        for (w, c) in part.terms() {
            let bracket = Bracket::from_lyndon(w.letters()).render(&slots);
            csv.push_str(&format!("{k},{},{}\n", csv_field(&bracket), format_rational(c)));
        }
        degrees.push(json!({ "degree": k, "terms": body, "zero": part.is_zero() }));
    }
    let json = json!({ "generators": slots, "order": a.order, "lie": lie.to_json(), "degrees": degrees });
    Ok(Report::new(Natural::Text, csv, json.clone()).text(text).summary(json!({ "degrees": degrees })))
}

fn stage_text(stage: &Stage, slots: &[String]) -> String {
    match &stage.kind {
        StageKind::Slot(i) => format!("{}:{}", slots[*i], stage.coeff),
        StageKind::Commutator(c) => format!("{}:{}*x^{}", c.bracket.render(slots), stage.coeff, c.x_power),
    }
}

fn stage_row(list: &str, index: usize, stage: &Stage, slots: &[String]) -> String {
    let (label, power) = match &stage.kind {
        StageKind::Slot(i) => (slots[*i].clone(), 1),
        StageKind::Commutator(c) => (c.bracket.render(slots), c.x_power),
    };
    let exact = stage
        .coeff
        .as_rational()
        .map(|r| format_rational(&r))
        .or_else(|| stage.coeff.exact().map(|p| p.to_string()))
        .unwrap_or_default();
    format!(
        "{list},{index},{},{power},{},{}\n",
        csv_field(&label),
        f64_17(stage.coeff.value()),
        csv_field(&exact)
    )
}

const STAGE_HEADER: &str = "list,index,slot,x_power,value,exact\n";

pub fn scheme_list() -> CliResult<Report> {
    let mut csv = String::from("name,order,symmetric,stages,negative_coefficients,exact\n");
    let mut text = String::new();
    let mut items = Vec::new();
    for s in catalog() {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s.name(),
            s.claimed_order(),
            s.symmetric(),
            s.stages().len(),
            s.has_negative_coefficient(),
            s.is_exact()
        ));
        text.push_str(&format!(
            "{:<11} order {:<2} stages {:<4}{}{}\n",
            s.name(),
            s.claimed_order(),
            s.stages().len(),
            if s.symmetric() { " symmetric" } else { "" },
            if s.has_negative_coefficient() { " negative" } else { "" }
        ));
        items.push(s.to_json());
    }
    Ok(Report::new(Natural::Text, csv, Value::Array(items)).text(text))
}

pub fn scheme_show(a: &SchemeRef) -> CliResult<Report> {
    let s = resolve_scheme(&a.scheme)?;
    let mut csv = String::from(STAGE_HEADER);
    for (i, st) in s.stages().iter().enumerate() {
        csv.push_str(&stage_row("merged", i, st, s.slots()));
    }
    let mut text = format!("{s}\n");
    text.push_str(&format!("slots: {}\nsymmetric: {}\n", s.slots().join(" "), s.symmetric()));
    for c in s.constants() {
        text.push_str(&format!("constant {} = {}\n", c.name, f64_17(c.value)));
    }
    Ok(Report::new(Natural::Text, csv, s.to_json()).text(text))
}

pub fn scheme_flatten(a: &SchemeRef) -> CliResult<Report> {
    let s = resolve_scheme(&a.scheme)?;
    let mut csv = String::from(STAGE_HEADER);
    let mut render = |name: &str, stages: &[Stage]| {
        for (i, st) in stages.iter().enumerate() {
            csv.push_str(&stage_row(name, i, st, s.slots()));
        }
        let parts: Vec<String> = stages.iter().map(|st| stage_text(st, s.slots())).collect();
        format!("{name} ({}): {}\n", stages.len(), parts.join(" "))
    };
    let text = render("unmerged", s.unmerged_stages()) + &render("merged", s.stages());
    let list = |stages: &[Stage]| stages.iter().map(|st| stage_text(st, s.slots())).collect::<Vec<_>>();
    let json = json!({
        "name": s.name(),
        "unmerged": list(s.unmerged_stages()),
        "merged": list(s.stages()),
        "scheme": s.to_json(),
    });
    Ok(Report::new(Natural::Text, csv, json).text(text))
}

fn slot_sums(s: &Scheme) -> Vec<(String, String, f64)> {
    (0..s.slots().len())
        .map(|i| {
            let sum = s.slot_sum(i);
            let exact = sum
                .exact()
                .map(|p| s.reduce(p).to_string())
                .unwrap_or_else(|| "inexact".into());
            (s.slots()[i].clone(), exact, sum.value())
        })
        .collect()
}

pub fn scheme_check(a: &CheckArgs) -> CliResult<Report> {
    let s = resolve_scheme(&a.scheme.scheme)?;
    let max_order = a.max_order.unwrap_or(s.claimed_order() + 1).min(MAX_ORDER);
    let verified = verify_order(&s, max_order)?;
    let sums = slot_sums(&s);
    let palindrome = s.is_palindrome();
    let ok = verified >= s.claimed_order() && (!s.symmetric() || palindrome);
    let mut text = format!("{s}\n");
    text.push_str(&format!("claimed order: {}\nverified order: {verified} (tested to {max_order})\n", s.claimed_order()));
    for (slot, exact, value) in &sums {
        text.push_str(&format!("sum {slot}: {exact} ({})\n", f64_17(*value)));
    }
    text.push_str(&format!(
        "symmetric flag: {}, palindrome: {palindrome}\nnegative coefficients: {}\nstatus: {}\n",
        s.symmetric(),
        s.has_negative_coefficient(),
        if ok { "ok" } else { "FAILED" }
    ));
    let mut csv = String::from("name,claimed_order,verified_order,tested_to,symmetric,palindrome,negative_coefficients,ok\n");
    csv.push_str(&format!(
        "{},{},{verified},{max_order},{},{palindrome},{},{ok}\n",
        csv_field(s.name()),
        s.claimed_order(),
        s.symmetric(),
        s.has_negative_coefficient()
    ));
    let json = json!({
        "name": s.name(),
        "claimed_order": s.claimed_order(),
        "verified_order": verified,
        "tested_to": max_order,
        "slot_sums": sums.iter().map(|(slot, exact, value)| json!({"slot": slot, "exact": exact, "value": value})).collect::<Vec<_>>(),
        "symmetric": s.symmetric(),
        "palindrome": palindrome,
        "negative_coefficients": s.has_negative_coefficient(),
        "ok": ok,
    });
    let report = Report::new(Natural::Text, csv, json.clone()).text(text).summary(json);
    Ok(if ok { report } else { report.failing() })
}

fn parse_assignments(items: &[String], what: &str) -> CliResult<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in items {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("{what} {item:?} is not name=value")))?;
        let value = parse_rational(value)
            .map(|r| rational_to_f64(&r))
            .map_err(|_| CliError::config(format!("{what} {item:?} has a bad value")))?;
        out.insert(name.trim().to_string(), value);
    }
    Ok(out)
}

fn recognise(x: f64, max_den: i64) -> Option<Rational> {
    rational_from_f64(x, max_den, 1e-12 * x.abs().max(1.0))
}

/// Starting values tried, in order, for pattern parameters without a
/// `--guess`: zero, then each slot's equal share, then the share with
/// alternating sign.
fn default_starts(pattern: &str) -> Vec<BTreeMap<String, f64>> {
    let letters: Vec<char> = pattern.chars().filter(|c| !c.is_whitespace()).collect();
    let share = |c: &char| 1.0 / letters.iter().filter(|d| *d == c).count() as f64;
    let start = |f: &dyn Fn(usize, &char) -> f64| -> BTreeMap<String, f64> {
        letters.iter().enumerate().map(|(i, c)| (format!("p{}", i + 1), f(i, c))).collect()
    };
    vec![
        start(&|_, _| 0.0),
        start(&|_, c| share(c)),
        start(&|i, c| if (i / 2) % 2 == 0 { share(c) } else { -share(c) }),
    ]
}

pub fn solve_cmd(a: &SolveArgs) -> CliResult<Report> {
    let fixed = parse_assignments(&a.fix, "--fix")?;
    let guess = parse_assignments(&a.guess, "--guess")?;
    let (system, starts) = match (&a.pattern, &a.poly) {
        (Some(pattern), None) => (order_conditions(pattern, a.order)?.system(), default_starts(pattern)),
        (None, Some(coeffs)) => {
            let coeffs: Vec<Rational> = coeffs
                .iter()
                .map(|c| parse_rational(c).map_err(|_| CliError::config(format!("bad polynomial coefficient {c:?}"))))
                .collect::<CliResult<_>>()?;
            let start = BTreeMap::from([("s".to_string(), 1.0)]);
            (expprod::orders::PolySystem::univariate("s", &coeffs), vec![start])
        }
        _ => return Err(CliError::config("give exactly one of --pattern or --poly")),
    };
    for k in guess.keys().chain(fixed.keys()) {
        if !system.variables.contains(k) {
            return Err(CliError::config(format!("unknown parameter {k:?}; parameters are {}", system.variables.join(", "))));
        }
    }
    let mut attempts = 0;
    let mut rep = None;
    for start in &starts {
        let mut g = start.clone();
        g.extend(guess.iter().map(|(k, v)| (k.clone(), *v)));
        attempts += 1;
        let r = solve(&system, &fixed, &g)?;
        let done = r.converged;
        rep = Some(r);
        if done || guess.len() + fixed.len() >= system.variables.len() {
            break;
        }
    }
    let rep = rep.expect("at least one start");
    let rationals: Vec<Option<Rational>> = rep.solution.iter().map(|(_, v)| recognise(*v, a.max_denominator)).collect();
    // Exact confirmation when every value has a rational form.
    let exact_zero = rationals.iter().all(Option::is_some).then(|| {
        let lookup: BTreeMap<&str, Rational> = rep
            .solution
            .iter()
            .zip(&rationals)
            .map(|((n, _), r)| (n.as_str(), r.clone().expect("checked")))
            .collect();
        system
            .equations
            .iter()
            .all(|e| e.eval_rational(&|n| lookup[n].clone()) == Rational::from_integer(0.into()))
    });
    let mut text = String::new();
    let mut csv = String::from("name,value,rational,fixed\n");
    let mut rows = Vec::new();
    for ((name, value), r) in rep.solution.iter().zip(&rationals) {
        let rtext = r.as_ref().map(format_rational);
        text.push_str(&format!("{name} = {}\n", r.as_ref().map(|r| r.to_string()).unwrap_or_else(|| f64_17(*value))));
        csv.push_str(&format!(
            "{name},{},{},{}\n",
            f64_17(*value),
            rtext.clone().unwrap_or_default(),
            fixed.contains_key(name)
        ));
        rows.push(json!({ "name": name, "value": value, "rational": rtext, "fixed": fixed.contains_key(name) }));
    }
    text.push_str(&format!("max residual: {}\niterations: {}\n", f64_17(rep.max_residual()), rep.iterations));
    if let Some(z) = exact_zero {
        text.push_str(&format!("exact check: {}\n", if z { "all conditions vanish" } else { "conditions do not vanish" }));
    }
    let json = json!({
        "variables": system.variables,
        "converged": rep.converged,
        "iterations": rep.iterations,
        "starts_tried": attempts,
        "max_residual": rep.max_residual(),
        "residuals": rep.residuals,
        "solution": rows,
        "exact_zero": exact_zero,
    });
    if !rep.converged {
        return Err(CliError::NonConvergence {
            message: format!("no convergence after {} iterations", rep.iterations),
            diagnostics: json,
        });
    }
    Ok(Report::new(Natural::Text, csv, json.clone()).text(text).summary(json))
}

/// `start:end:step` (inclusive) or a comma list.
pub fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::config(format!("bad grid {text:?}; use start:end:step or a comma list"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0) || !(b >= a) {
                return Err(bad());
            }
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            // Rounded to 12 decimals so 0.2 + 16·0.05 prints as 1.
            Ok((0..count).map(|k| ((a + k as f64 * step) * 1e12).round() / 1e12).collect())
        }
        [_] => text.split(',').map(num).collect(),
        _ => Err(bad()),
    }
}

pub fn family(a: &FamilyArgs) -> CliResult<Report> {
    let grid = parse_grid(&a.p6)?;
    if grid.is_empty() {
        return Err(CliError::config("empty p6 grid"));
    }
    let points = ruth_family(&grid)?;
    let converged = points.iter().filter(|p| p.converged).count();
    let rows: Vec<Value> = points
        .iter()
        .map(|p| json!({ "p6": p.p6, "params": p.params, "max_residual": p.max_residual, "converged": p.converged }))
        .collect();
    let summary = json!({ "points": points.len(), "converged": converged });
    if converged == 0 {
        return Err(CliError::NonConvergence {
            message: "no grid point converged".into(),
            diagnostics: json!({ "summary": summary, "points": rows }),
        });
    }
    Ok(Report::new(Natural::Csv, family_csv(&points), json!({ "points": rows })).summary(summary))
}
