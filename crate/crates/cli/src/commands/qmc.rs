//! qmc, anneal and extrapolate.

use expprod::fmt::f64_17;
use expprod::qmc::{
    anneal, classical_ground_energy, diagonalize, enumerate, geometric_schedule, metropolis_run, trotter_extrapolate,
    AnnealResult, ExactObservables, IsingModel, RunStats, TrotterNumber, MAX_ED_SITES, MAX_ENUM_SPINS,
};
use serde_json::{json, Value};

use crate::args::{AnnealArgs, ExtrapolateArgs, ModelArgs, QmcArgs};
use crate::error::{CliError, CliResult};
use crate::output::{Natural, Report};

pub fn build_model(a: &ModelArgs) -> CliResult<IsingModel> {
    let gamma = a.gamma.unwrap_or(1.0);
    let beta = a.beta.unwrap_or(1.0);
    let mut m = if let Some(path) = &a.model {
        IsingModel::load(path).map_err(|e| CliError::config(format!("model {}: {e}", path.display())))?
    } else if let Some(n) = a.chain {
        IsingModel::chain(n, a.coupling, gamma, beta)?
    } else if let Some(sites) = a.sites {
        let bonds: Vec<(usize, usize, f64)> = match &a.bonds {
            Some(text) => serde_json::from_str(text).map_err(|e| CliError::config(format!("--bonds: {e}")))?,
            None => Vec::new(),
        };
        IsingModel::new(sites, bonds, gamma, beta)?
    } else {
        return Err(CliError::config("give a model: --model FILE, --chain N or --sites N [--bonds JSON]"));
    };
    if let Some(g) = a.gamma {
        m.gamma = g;
    }
    if let Some(b) = a.beta {
        m.beta = b;
    }
    m.validate()?;
    Ok(m)
}

fn exact_reference(model: &IsingModel, n: usize, which: &str) -> CliResult<ExactObservables> {
    match which.parse::<TrotterNumber>()? {
        TrotterNumber::Infinite => Ok(diagonalize(model)?),
        TrotterNumber::Finite(k) => {
            if k != n {
                return Err(CliError::config(format!("--exact {k} differs from the run's --n {n}; use --exact n or inf")));
            }
            Ok(enumerate(model, n)?)
        }
    }
}

fn stats_csv(stats: &RunStats, exact: Option<&ExactObservables>) -> String {
    let mut csv = String::from(if exact.is_some() { "observable,mean,stderr,exact\n" } else { "observable,mean,stderr\n" });
    for (name, s) in &stats.observables {
        csv.push_str(&format!("{name},{},{}", f64_17(s.mean), f64_17(s.stderr)));
        if let Some(e) = exact {
            csv.push(',');
            csv.push_str(&e.get(name).map(f64_17).unwrap_or_default());
        }
        csv.push('\n');
    }
    csv
}

pub fn qmc(a: &QmcArgs, seed: u64) -> CliResult<Report> {
    let model = build_model(&a.model)?;
    let which = a.exact.as_deref().map(|w| if w == "n" { a.n.to_string() } else { w.to_string() });
    let exact = match &which {
        Some(w) => {
            if w != "inf" && model.sites * a.n > MAX_ENUM_SPINS {
                return Err(CliError::config(format!(
                    "enumeration needs sites·n ≤ {MAX_ENUM_SPINS}, got {}",
                    model.sites * a.n
                )));
            }
            Some(exact_reference(&model, a.n, w)?)
        }
        None => None,
    };
    let stats = metropolis_run(&model, a.n, a.sweeps, a.therm, seed)?;
    let mut json = serde_json::to_value(&stats).expect("run stats serialise");
    json["model"] = serde_json::to_value(&model).expect("model serialises");
    if let Some(e) = &exact {
        json["exact"] = serde_json::to_value(e).expect("exact values serialise");
    }
    let mut report = Report::new(Natural::Json, stats_csv(&stats, exact.as_ref()), json).summary(json!({
        "model": model,
        "n": stats.n,
        "bins": stats.bins,
        "acceptance": stats.acceptance,
        "observables": stats.observables,
    }));
    for (name, trace) in &stats.traces {
        let mut csv = String::from("sweep,value\n");
        for (k, v) in trace.iter().enumerate() {
            csv.push_str(&format!("{},{}\n", stats.therm + k, f64_17(*v)));
        }
        report = report.extra(format!("traces/{name}.csv"), csv);
    }
    Ok(report)
}

/// `start:end:stages`.
fn parse_geometric(text: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::config(format!("bad --geometric {text:?}; use start:end:stages"));
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, k] = parts.as_slice() else { return Err(bad()) };
    let (a, b): (f64, f64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    let k: usize = k.parse().map_err(|_| bad())?;
    if k == 0 || !(a > 0.0) || !(b > 0.0) {
        return Err(bad());
    }
    Ok(geometric_schedule(a, b, k))
}

fn spins_text(config: &[i8]) -> String {
    config.iter().map(|s| if *s > 0 { '+' } else { '-' }).collect()
}

pub fn anneal_cmd(a: &AnnealArgs, seed: u64) -> CliResult<Report> {
    let model = build_model(&a.model)?;
    let schedule = if a.schedule.is_empty() { parse_geometric(&a.geometric)? } else { a.schedule.clone() };
    if a.runs == 0 {
        return Err(CliError::config("--runs must be positive"));
    }
    let seeds: Vec<u64> = (0..a.runs as u64).map(|k| seed.wrapping_add(k)).collect();
    let results: Vec<expprod::Result<AnnealResult>> = std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .iter()
            .map(|s| {
                let (model, schedule) = (&model, &schedule);
                scope.spawn(move || anneal(model, a.n, schedule, a.sweeps_per_stage, *s))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("anneal worker")).collect()
    });
    let results: Vec<AnnealResult> = results.into_iter().collect::<expprod::Result<_>>()?;
    let ground = (model.sites <= MAX_ENUM_SPINS).then(|| classical_ground_energy(&model)).transpose()?;
    let mut csv = String::from("seed,energy,layer,spins\n");
    for (s, r) in seeds.iter().zip(&results) {
        csv.push_str(&format!("{s},{},{},{}\n", f64_17(r.energy), r.layer, spins_text(&r.config)));
    }
    let best = results.iter().map(|r| r.energy).fold(f64::INFINITY, f64::min);
    let hits = ground.map(|g| results.iter().filter(|r| r.energy <= g + 1e-9).count());
    let summary = json!({
        "runs": results.len(),
        "best_energy": best,
        "ground_energy": ground,
        "ground_hits": hits,
        "schedule": results[0].schedule,
        "warnings": results[0].warnings,
    });
    let json = json!({
        "summary": summary,
        "results": seeds.iter().zip(&results).map(|(s, r)| {
            let mut v = serde_json::to_value(r).expect("anneal result serialises");
            v["seed"] = json!(s);
            v
        }).collect::<Vec<_>>(),
    });
    Ok(Report::new(Natural::Csv, csv, json).summary(summary))
}

pub fn extrapolate(a: &ExtrapolateArgs, seed: u64) -> CliResult<Report> {
    let model = build_model(&a.model)?;
    let ex = trotter_extrapolate(&model, &a.n_list, a.sweeps, a.therm, seed)?;
    let exact = (model.sites <= MAX_ED_SITES).then(|| diagonalize(&model)).transpose()?;
    let mut csv = String::from("observable,c0,c0_stderr,c1,c2,dominant_power,singular,exact\n");
    for (name, f) in &ex.fits {
        csv.push_str(&format!(
            "{name},{},{},{},{},{},{},{}\n",
            f64_17(f.c0),
            f64_17(f.c0_stderr),
            f64_17(f.c1),
            f64_17(f.c2),
            f.dominant_power,
            f.singular,
            exact.as_ref().and_then(|e| e.get(name)).map(f64_17).unwrap_or_default()
        ));
    }
    let json = json!({
        "model": model,
        "n_list": a.n_list,
        "fits": ex.fits,
        "runs": ex.runs,
        "exact": exact,
    });
    let summary: Value = ex
        .fits
        .iter()
        .map(|(k, f)| (k.clone(), json!({ "c0": f.c0, "c0_stderr": f.c0_stderr, "dominant_power": f.dominant_power })))
        .collect::<serde_json::Map<_, _>>()
        .into();
    let singular: Vec<&String> = ex.fits.iter().filter(|(_, f)| f.singular).map(|(k, _)| k).collect();
    if !singular.is_empty() {
        return Err(CliError::NonConvergence {
            message: format!("singular extrapolation fit for {singular:?}"),
            diagnostics: json,
        });
    }
    Ok(Report::new(Natural::Csv, csv, json).summary(summary))
}
