use serde_json::{json, Value};

use super::mesh::{dijkstra, Mesh};
use super::{GeometryError, SurfacePoint, Window};
use crate::skeleton::{Order, RamPoint, Skeleton};

/// Nearest-ramification-point partition of the meshed surface.
#[derive(Clone, Debug)]
pub struct CellMap {
    pub mesh: Mesh,
    /// Surface distance of every node to its nearest ramification point.
    pub distance: Vec<f64>,
    /// Index into `mesh.ram` of that point (`u32::MAX` if unreachable).
    pub owner: Vec<u32>,
    /// Samples with a mesh neighbor in another cell, with both cell ids.
    pub boundary: Vec<(u32, u32, u32)>,
}

/// Assign every sample of the stitched mesh of `g` to its nearest
/// ramification point.
pub fn kn_cells(g: &Skeleton, window: Window, h: f64) -> Result<CellMap, GeometryError> {
    let mesh = Mesh::build(g, window, h)?;
    Ok(cells_on(mesh))
}

pub fn cells_on(mesh: Mesh) -> CellMap {
    let sources: Vec<(u32, f64, u32)> = (0..mesh.ram.len()).map(|r| (mesh.ram_node(r), 0.0, r as u32)).collect();
    let (distance, owner) = dijkstra(mesh.node_count(), &sources, |n, out| {
        out.extend_from_slice(mesh.neighbors(n))
    });
    let mut boundary = Vec::new();
    for a in 0..mesh.sample_count() as u32 {
        let oa = owner[a as usize];
        if let Some(&(b, _)) = mesh
            .neighbors(a)
            .iter()
            .find(|&&(b, _)| mesh.is_sample(b) && owner[b as usize] != oa)
        {
            let ob = owner[b as usize];
            boundary.push((a, oa.min(ob), oa.max(ob)));
        }
    }
    CellMap {
        mesh,
        distance,
        owner,
        boundary,
    }
}

/// Mesh surface distance from `w` to each listed ramification point.
pub fn kn_distance(cells: &CellMap, w: &SurfacePoint, targets: &[usize]) -> Result<Vec<f64>, GeometryError> {
    let mesh = &cells.mesh;
    let sources = mesh.point_sources(w)?;
    let (dist, _) = dijkstra(mesh.node_count(), &sources, |n, out| {
        out.extend_from_slice(mesh.neighbors(n))
    });
    Ok(targets.iter().map(|&r| dist[mesh.ram_node(r) as usize]).collect())
}

/// `ω`-length of a mesh edge: the change of `arg(z - c)` about each
/// endpoint's own cell center, taking the smaller.
fn omega(cells: &CellMap, a: u32, b: u32) -> f64 {
    let mesh = &cells.mesh;
    let (pa, pb) = (mesh.position(a), mesh.position(b));
    let turn = |r: u32| {
        if r == u32::MAX {
            return f64::INFINITY;
        }
        let c = mesh.ram[r as usize].projection;
        ((pb - c) / (pa - c)).arg().abs()
    };
    turn(cells.owner[a as usize]).min(turn(cells.owner[b as usize]))
}

/// `τ` on every sample, measured from `w0`. Ramification nodes are left out.
pub fn tau_field(cells: &CellMap, w0: &SurfacePoint) -> Result<Vec<f64>, GeometryError> {
    let mesh = &cells.mesh;
    let start = mesh.locate(w0)?;
    let (tau, _) = dijkstra(mesh.node_count(), &[(start, 0.0, 0)], |n, out| {
        for &(m, _) in mesh.neighbors(n) {
            if mesh.is_sample(m) {
                out.push((m, omega(cells, n, m)));
            }
        }
    });
    Ok(tau)
}

/// `(τ(w), σ(w))` with `τ` measured from `w0`.
pub fn tau_sigma(cells: &CellMap, w0: &SurfacePoint, w: &SurfacePoint) -> Result<(f64, f64), GeometryError> {
    let tau = tau_field(cells, w0)?;
    let node = cells.mesh.locate(w)?;
    let owner = cells.owner[node as usize];
    let sigma = if owner == u32::MAX {
        f64::INFINITY
    } else {
        (w.z - cells.mesh.ram[owner as usize].projection).norm().ln().abs()
    };
    Ok((tau[node as usize], sigma))
}

/// Number of connected pieces of the level set `{τ = θ}` on the mesh.
pub fn level_components(cells: &CellMap, tau: &[f64], theta: f64) -> usize {
    let mesh = &cells.mesh;
    let n = mesh.sample_count();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(p: &mut [u32], mut x: u32) -> u32 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    let mut touched = vec![false; n];
    for a in 0..n as u32 {
        let ta = tau[a as usize];
        if !ta.is_finite() {
            continue;
        }
        for &(b, _) in mesh.neighbors(a) {
            if !mesh.is_sample(b) || b < a {
                continue;
            }
            let tb = tau[b as usize];
            if !tb.is_finite() {
                continue;
            }
            if (ta <= theta) != (tb <= theta) {
                touched[a as usize] = true;
                touched[b as usize] = true;
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra as usize] = rb;
                }
            }
        }
    }
    let mut roots: Vec<u32> = (0..n as u32)
        .filter(|&a| touched[a as usize])
        .map(|a| find(&mut parent, a))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Parabolic,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct ParabolicityReport {
    /// `2 * #ramification points`.
    pub n_bound: usize,
    /// Sampled `(θ, n(θ))`.
    pub n_estimates: Vec<(f64, usize)>,
    pub max_estimate: Option<usize>,
    pub verdict: Verdict,
    /// `∫ dρ / ∫_0^ρ n(θ) dθ` dominates `∫ dρ / (n_bound ρ)`.
    pub integral_lower_bound_diverges: bool,
}

/// Parabolicity from a finite ramification set, with optional empirical
/// `n(θ)` from a `τ` field sampled at `samples` levels.
pub fn parabolicity(
    ram: &[RamPoint],
    exhaustive: bool,
    field: Option<(&CellMap, &[f64])>,
    samples: usize,
) -> Result<ParabolicityReport, GeometryError> {
    if !exhaustive {
        return Err(GeometryError::InfiniteRamificationSet);
    }
    let n_bound = 2 * ram.len();
    let mut n_estimates = Vec::new();
    if let Some((cells, tau)) = field {
        let top = tau.iter().copied().filter(|t| t.is_finite()).fold(0.0, f64::max);
        if top > 0.0 {
            for k in 0..samples {
                let theta = top * (k as f64 + 0.5) / samples as f64;
                n_estimates.push((theta, level_components(cells, tau, theta)));
            }
        }
    }
    Ok(ParabolicityReport {
        n_bound,
        max_estimate: n_estimates.iter().map(|&(_, n)| n).max(),
        n_estimates,
        verdict: Verdict::Parabolic,
        integral_lower_bound_diverges: true,
    })
}

/// Count of ramification points by order, for reports.
pub fn order_census(ram: &[RamPoint]) -> (usize, usize) {
    let finite = ram.iter().filter(|r| matches!(r.order, Order::Finite(_))).count();
    (finite, ram.len() - finite)
}

impl ParabolicityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n_bound": self.n_bound,
            "n_estimates": self.n_estimates.iter().map(|&(t, n)| json!([t, n])).collect::<Vec<_>>(),
            "max_estimate": self.max_estimate,
            "verdict": match self.verdict {
                Verdict::Parabolic => "Parabolic",
                Verdict::Inconclusive => "Inconclusive",
            },
            "integral_lower_bound_diverges": self.integral_lower_bound_diverges,
        })
    }
}

impl CellMap {
    /// Mesh layout plus per-sample owner (`-1` when unreachable) and
    /// distance, in mesh node order.
    pub fn to_json(&self) -> Value {
        let m = &self.mesh;
        let n = m.sample_count();
        json!({
            "z0": [m.z0.re, m.z0.im],
            "window": {"min": [m.window.min.re, m.window.min.im], "max": [m.window.max.re, m.window.max.im]},
            "h": m.h,
            "nx": m.nx,
            "ny": m.ny,
            "stars": m.stars,
            "ram": m.ram.iter().map(|r| json!({"projection": [r.projection.re, r.projection.im], "order": r.order.to_string()})).collect::<Vec<_>>(),
            "owner": self.owner[..n].iter().map(|&o| if o == u32::MAX { -1 } else { o as i64 }).collect::<Vec<_>>(),
            "distance": self.distance[..n].iter().map(|&d| if d.is_finite() { json!(d) } else { Value::Null }).collect::<Vec<_>>(),
        })
    }
}
