//! converge, precession, umeno and timedep.

use expprod::fmt::f64_17;
use expprod::propagate::{
    convergence_sweep, dominant_period, error_floor, linear_slope, powers_of_two, precession_csv, run_precession,
    run_umeno, timeordered_step, umeno_csv, ClassicalMethod, ConvergenceReport, Method, QuantumState, SlotMap,
    SpinSystem, TestSystem, TimeDependentParts, REFERENCE_REFINEMENT,
};
use expprod::schemes::{evaluation_times, g2, Scheme};
use serde_json::{json, Value};

use crate::args::{ConvergeArgs, PrecessionArgs, TimedepArgs, UmenoArgs};
use crate::error::{CliError, CliResult};
use crate::output::{Natural, Report};
use crate::stages::resolve_scheme;

fn positive(name: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(format!("--{name} must be positive, got {v}")))
    }
}

fn report_json(scheme: &Scheme, r: &ConvergenceReport) -> Value {
    json!({
        "scheme": scheme.name(),
        "claimed_order": scheme.claimed_order(),
        "slope": r.slope,
        "fitted": r.fitted,
        "points": r.points.iter().map(|p| json!({"steps": p.steps, "dt": p.dt, "error": p.error})).collect::<Vec<_>>(),
    })
}

pub fn converge(a: &ConvergeArgs, seed: u64) -> CliResult<Report> {
    let system = if a.system == "random3" {
        TestSystem::parse(&format!("random3:{seed}"))?
    } else {
        TestSystem::parse(&a.system)?
    };
    let steps = if a.steps.is_empty() { powers_of_two(5, 10) } else { a.steps.clone() };
    let schemes: Vec<Scheme> = a.scheme.iter().map(|s| resolve_scheme(s)).collect::<CliResult<_>>()?;
    // One worker per scheme; results are collected in argument order.
    let results: Vec<expprod::Result<ConvergenceReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = schemes
            .iter()
            .map(|s| {
                let steps = &steps;
                scope.spawn(move || convergence_sweep(s, &system, steps))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker")).collect()
    });
    let mut csv = String::from("scheme,steps,dt,error,above_floor\n");
    let mut reports = Vec::new();
    for (s, r) in schemes.iter().zip(results) {
        let r = r?;
        for p in &r.points {
            let above = p.error > error_floor(p.steps, s.stages().len());
            csv.push_str(&format!("{},{},{},{},{above}\n", s.name(), p.steps, f64_17(p.dt), f64_17(p.error)));
        }
        reports.push((s, r));
    }
    let json = json!({
        "system": a.system,
        "runs": reports.iter().map(|(s, r)| report_json(s, r)).collect::<Vec<_>>(),
    });
    let slopes: Value = reports.iter().map(|(s, r)| (s.name().to_string(), json!(r.slope))).collect::<serde_json::Map<_, _>>().into();
    if let Some((s, _)) = reports.iter().find(|(_, r)| r.slope.is_none()) {
        return Err(CliError::NonConvergence {
            message: format!("{}: fewer than two errors above the roundoff floor, no order can be fitted", s.name()),
            diagnostics: json,
        });
    }
    Ok(Report::new(Natural::Csv, csv, json).summary(json!({ "slopes": slopes })))
}

pub fn precession(a: &PrecessionArgs) -> CliResult<Report> {
    positive("dt", a.dt)?;
    positive("periods", a.periods)?;
    if a.sample_every == 0 {
        return Err(CliError::config("--sample-every must be positive"));
    }
    let method = match a.scheme.as_str() {
        "perturbative" | "taylor" => Method::Perturbative,
        s => Method::Scheme(resolve_scheme(s)?),
    };
    let period = SpinSystem::new(a.gamma).period();
    let steps = (a.periods * period / a.dt).round() as usize;
    let samples = run_precession(&method, a.gamma, a.dt, steps, a.sample_every)?;
    let deviation: Vec<f64> = samples.iter().map(|s| s.energy - 1.0).collect();
    let max_dev = deviation.iter().fold(0f64, |m, d| m.max(d.abs()));
    let final_dev = deviation.last().copied().unwrap_or(0.0);
    let dominant = dominant_period(&deviation, a.dt * a.sample_every as f64);
    let summary = json!({
        "steps": steps,
        "precession_period": period,
        "max_energy_deviation": max_dev,
        "final_energy_deviation": final_dev,
        "deviation_period": dominant,
        "final_norm": samples.last().map(|s| s.norm),
    });
    let json = json!({
        "summary": summary,
        "samples": samples.iter().map(|s| json!([s.t, s.energy, s.norm])).collect::<Vec<_>>(),
    });
    Ok(Report::new(Natural::Csv, precession_csv(&samples), json).summary(summary))
}

pub fn umeno(a: &UmenoArgs) -> CliResult<Report> {
    positive("dt", a.dt)?;
    if a.sample_every == 0 {
        return Err(CliError::config("--sample-every must be positive"));
    }
    let method = match a.scheme.as_str() {
        "euler" => ClassicalMethod::Euler,
        s => ClassicalMethod::Scheme(resolve_scheme(s)?, SlotMap::parse(&a.slot_map)?),
    };
    let samples = run_umeno(&method, a.dt, a.steps, a.sample_every)?;
    let t: Vec<f64> = samples.iter().map(|s| s.t).collect();
    let e: Vec<f64> = samples.iter().map(|s| s.energy).collect();
    let e0 = e[0];
    let max_dev = e.iter().fold(0f64, |m, v| m.max((v - e0).abs()));
    let slope = (samples.len() >= 2).then(|| linear_slope(&t, &e));
    let finite = e.iter().all(|v| v.is_finite());
    let summary = json!({
        "initial_energy": e0,
        "max_energy_deviation": max_dev,
        "final_energy": e.last(),
        "energy_slope": slope,
        "finite": finite,
    });
    let json = json!({
        "summary": summary,
        "samples": samples.iter().map(|s| json!([s.t, s.energy, s.q1, s.q2])).collect::<Vec<_>>(),
    });
    if !finite {
        return Err(CliError::NonConvergence {
            message: "the trajectory diverged".into(),
            diagnostics: summary,
        });
    }
    Ok(Report::new(Natural::Csv, umeno_csv(&samples), json).summary(summary))
}

pub fn timedep(a: &TimedepArgs) -> CliResult<Report> {
    positive("dt", a.dt)?;
    let scheme = resolve_scheme(&a.scheme)?;
    if scheme.slot_index("T").is_none() {
        return Err(CliError::config(format!("scheme {} has no T slot", scheme.name())));
    }
    let parts = TimeDependentParts::driven_two_level(a.omega);
    let energy = |psi: &QuantumState, t: f64| psi.expectation(&(parts.at(0, t) + parts.at(1, t)));
    let mut psi = QuantumState::basis(2, 0);
    let mut csv = String::from("t,p_up,norm,energy\n");
    let row = |psi: &QuantumState, t: f64| {
        format!(
            "{},{},{},{}\n",
            f64_17(t),
            f64_17(psi.amp[0].norm_sqr()),
            f64_17(psi.norm()),
            f64_17(energy(psi, t))
        )
    };
    csv.push_str(&row(&psi, a.t0));
    for k in 0..a.steps {
        let t = a.t0 + k as f64 * a.dt;
        psi = timeordered_step(&scheme, &parts, t, a.dt, &psi)?;
        csv.push_str(&row(&psi, t + a.dt));
    }
    // Reference: midpoint rule at a much finer step.
    let fine = a.steps * REFERENCE_REFINEMENT;
    let fine_dt = a.dt / REFERENCE_REFINEMENT as f64;
    let mut reference = QuantumState::basis(2, 0);
    let midpoint = g2();
    for k in 0..fine {
        reference = timeordered_step(&midpoint, &parts, a.t0 + k as f64 * fine_dt, fine_dt, &reference)?;
    }
    let times: Vec<Value> = evaluation_times(&scheme, a.t0, a.dt)?
        .iter()
        .map(|s| {
            json!({
                "stage_index": s.stage_index,
                "slot": s.stage.slot_index().map(|i| scheme.slots()[i].clone()),
                "offset": s.offset.to_string(),
                "offset_exact": s.offset.exact().map(|p| scheme.reduce(p).to_string()),
                "time": s.time,
            })
        })
        .collect();
    let summary = json!({
        "scheme": scheme.name(),
        "final_time": a.t0 + a.steps as f64 * a.dt,
        "distance_to_reference": psi.distance(&reference),
        "reference_steps": fine,
    });
    let json = json!({ "summary": summary, "evaluation_times": times });
    Ok(Report::new(Natural::Csv, csv, json).summary(summary))
}
