use serde_json::{json, Value};

use super::UniformizeError;
use crate::numerics::{approximant, poly_roots, Chart, PQForm, C64};
use crate::skeleton::{ball_embed_with, finite_completion, pi1_rank, skeleton_build};

/// One approximant `F_n` compared with `F`.
#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub n: u32,
    /// Critical points of `F_n` counted with multiplicity.
    pub critical_count: usize,
    /// `deg Q + n deg P`.
    pub expected_count: usize,
    /// Degree of the expanded `F_n'`, when it fits in floating point.
    pub expanded_degree: Option<usize>,
    /// Smallest `|z|` with `P(z) = -n`.
    pub min_escape_modulus: Option<f64>,
    /// `(critical value, local degree)` of each critical point.
    pub ramification: Vec<(C64, usize)>,
    pub completed_rank: usize,
    /// `ball_embed(Γ(F), Γ(F_n), r)` for `r = 1..=radius`.
    pub embeds: Vec<bool>,
}

#[derive(Clone, Debug)]
pub struct ConvergenceTable {
    pub z0: C64,
    pub radius: usize,
    pub foot_tol: f64,
    pub rows: Vec<ConvergenceRow>,
}

/// Census, topology and ball comparison of `F_n` against `F` for each `n`.
/// Feet are matched within `foot_tol`, since the ramification of `F_n` only
/// approaches that of `F`.
pub fn convergence_report(
    f: &PQForm,
    ns: &[u32],
    radius: usize,
    z0: C64,
    foot_tol: f64,
) -> Result<ConvergenceTable, UniformizeError> {
    let limit = skeleton_build(&Chart::new(f.clone())?, z0, radius)?;
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let chart = Chart::approximant(f.clone(), n)?;
        let critical_count = chart.critical_points().iter().map(|c| c.multiplicity).sum();
        let expanded_degree = approximant(f, n).ok().map(|p| p.derivative().degree());
        let min_escape_modulus = if f.d1() >= 1 {
            let shifted = &f.p + C64::new(n as f64, 0.0);
            Some(
                poly_roots(&shifted)?
                    .iter()
                    .map(|r| r.location.norm())
                    .fold(f64::INFINITY, f64::min),
            )
        } else {
            None
        };
        let g = skeleton_build(&chart, z0, radius)?;
        rows.push(ConvergenceRow {
            n,
            critical_count,
            expected_count: f.d2() + n as usize * f.d1(),
            expanded_degree,
            min_escape_modulus,
            ramification: chart
                .critical_points()
                .iter()
                .map(|c| (c.value, c.multiplicity + 1))
                .collect(),
            completed_rank: pi1_rank(&finite_completion(&g)?),
            embeds: (1..=radius).map(|r| ball_embed_with(&limit, &g, r, foot_tol)).collect(),
        });
    }
    Ok(ConvergenceTable {
        z0,
        radius,
        foot_tol,
        rows,
    })
}

impl ConvergenceTable {
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "critical_count": r.critical_count,
                    "expected_count": r.expected_count,
                    "expanded_degree": r.expanded_degree,
                    "min_escape_modulus": r.min_escape_modulus,
                    "ramification": r.ramification.iter().map(|(v, k)| json!({"pos": [v.re, v.im], "order": k})).collect::<Vec<_>>(),
                    "completed_rank": r.completed_rank,
                    "embeds": r.embeds,
                })
            })
            .collect();
        json!({"z0": [self.z0.re, self.z0.im], "radius": self.radius, "foot_tol": self.foot_tol, "rows": rows})
    }
}
