//! The one-parameter family of third-order six-stage schemes.

use std::collections::BTreeMap;

use super::{order_conditions, solve, SolveReport};
use crate::error::Result;
use crate::fmt::f64_17;

/// Ruth's coefficients `p1..p6` for the pattern `ABABAB`.
pub const RUTH: [f64; 6] = [7.0 / 24.0, 2.0 / 3.0, 0.75, -2.0 / 3.0, -1.0 / 24.0, 1.0];

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyPoint {
    pub p6: f64,
    /// `p1..p5`.
    pub params: [f64; 5],
    pub max_residual: f64,
    pub converged: bool,
}

fn point(p6: f64, rep: &SolveReport) -> FamilyPoint {
    let mut params = [0.0; 5];
    for (i, p) in params.iter_mut().enumerate() {
        *p = rep.value(&format!("p{}", i + 1)).expect("parameter present");
    }
    FamilyPoint {
        p6,
        params,
        max_residual: rep.max_residual(),
        converged: rep.converged,
    }
}

/// Solves the third-order conditions of `ABABAB` for `p1..p5` at each fixed
/// `p6`.
///
/// Continuation starts at the grid point nearest `p6 = 1`, seeded with Ruth's
/// solution, and walks outward in both directions; each point is seeded with
/// the nearest converged neighbour on its side. Points where Newton fails are
/// returned with `converged = false`. The output follows the input order.
pub fn ruth_family(p6_values: &[f64]) -> Result<Vec<FamilyPoint>> {
    let system = order_conditions("ABABAB", 3)?.system();
    let mut out: Vec<Option<FamilyPoint>> = vec![None; p6_values.len()];
    if p6_values.is_empty() {
        return Ok(Vec::new());
    }
    let mut order: Vec<usize> = (0..p6_values.len()).collect();
    order.sort_by(|&a, &b| p6_values[a].total_cmp(&p6_values[b]));
    let start = (0..order.len())
        .min_by(|&a, &b| {
            (p6_values[order[a]] - 1.0)
                .abs()
                .total_cmp(&(p6_values[order[b]] - 1.0).abs())
        })
        .expect("nonempty grid");
    let ruth_seed: [f64; 5] = RUTH[..5].try_into().expect("five entries");
    let walk = |ks: &mut dyn Iterator<Item = usize>, seed: [f64; 5], out: &mut Vec<Option<FamilyPoint>>| -> Result<()> {
        let mut seed = seed;
        for k in ks {
            let i = order[k];
            let p6 = p6_values[i];
            let fixed = BTreeMap::from([("p6".to_string(), p6)]);
            let guess: BTreeMap<String, f64> = (0..5).map(|j| (format!("p{}", j + 1), seed[j])).collect();
            let pt = point(p6, &solve(&system, &fixed, &guess)?);
            if pt.converged {
                seed = pt.params;
            }
            out[i] = Some(pt);
        }
        Ok(())
    };
    walk(&mut (start..order.len()), ruth_seed, &mut out)?;
    let seed_down = out[order[start]]
        .as_ref()
        .filter(|p| p.converged)
        .map(|p| p.params)
        .unwrap_or(ruth_seed);
    walk(&mut (0..start).rev(), seed_down, &mut out)?;
    Ok(out.into_iter().map(|p| p.expect("every point visited")).collect())
}

/// CSV with header `p6,p1,p2,p3,p4,p5,max_residual,converged`.
pub fn family_csv(points: &[FamilyPoint]) -> String {
    let mut s = String::from("p6,p1,p2,p3,p4,p5,max_residual,converged\n");
    for p in points {
        let mut cols = vec![f64_17(p.p6)];
        cols.extend(p.params.iter().map(|v| f64_17(*v)));
        cols.push(f64_17(p.max_residual));
        cols.push(p.converged.to_string());
        s.push_str(&cols.join(","));
        s.push('\n');
    }
    s
}
