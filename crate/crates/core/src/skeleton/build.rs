use std::collections::BTreeMap;

use super::{Edge, Radius, Side, Skeleton, SkeletonError};
use crate::lifting::{genericity_clearance, monodromy, MonodromyTable};
use crate::numerics::{Chart, C64};

/// Smallest clearance from the singular-value lines a base value may have.
fn collinearity_tolerance(values: &[C64]) -> f64 {
    let scale = values.iter().map(|v| v.norm()).fold(1.0, f64::max);
    1e-6 * scale
}

/// Skeleton of the surface of `F` around the sheet reached from the base
/// point, materialized to `radius` loop steps.
pub fn skeleton_build(chart: &Chart, z0: C64, radius: usize) -> Result<Skeleton, SkeletonError> {
    let values = chart.singular_value_points();
    let clearance = genericity_clearance(&values, z0);
    if clearance < collinearity_tolerance(&values) {
        return Err(SkeletonError::GenericityViolation { z0, clearance });
    }
    let table = monodromy(chart, z0, radius.max(1))?;
    Ok(skeleton_from_table(&table, radius.max(1)))
}

/// One edge `(v, σ_k(v))` with `v` on the `+` side for each sheet moved by
/// the counterclockwise loop around `c_k`.
pub fn skeleton_from_table(table: &MonodromyTable, radius: usize) -> Skeleton {
    let mut edges = Vec::new();
    for (k, perm) in table.perms.iter().enumerate() {
        let foot = table.critical_values[k];
        for (&v, &t) in perm {
            if v != t {
                edges.push(Edge::new(v, t, foot, Side::Plus));
            }
        }
    }
    let vertices: Vec<usize> = (0..table.points.len()).collect();
    let locations: BTreeMap<usize, C64> = table.points.iter().copied().enumerate().collect();
    Skeleton {
        z0: table.base_value,
        base: 0,
        vertices,
        edges,
        radius: if table.incomplete {
            Radius::Finite(radius)
        } else {
            Radius::Infinite
        },
        locations,
    }
}
