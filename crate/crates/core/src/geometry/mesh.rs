use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use super::{GeometryError, SurfacePoint, Window};
use crate::numerics::C64;
use crate::skeleton::{foot_key, ram_cycles, RamPoint, Side, Skeleton};

/// `Im(conj(a) b)`.
fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Does the segment `p q` meet the ray `c + t u`, `t >= 0`?
pub(crate) fn segment_hits_ray(p: C64, q: C64, c: C64, u: C64) -> bool {
    let d = q - p;
    let denom = cross(d, u);
    if denom.abs() <= 1e-300 {
        return false;
    }
    let s = cross(c - p, u) / denom;
    let t = cross(c - p, d) / denom;
    (0.0..=1.0).contains(&s) && t >= 0.0
}

/// A slit of one star: the ray beyond `foot` pointing away from `z0`, and
/// the stars reached by crossing it counterclockwise (`plus`) or clockwise.
#[derive(Clone, Copy, Debug)]
struct StarSlit {
    foot: C64,
    dir: C64,
    plus: Option<usize>,
    minus: Option<usize>,
}

/// Stitched per-star sample grids over a common base-plane window, plus one
/// node per ramification point.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub z0: C64,
    pub window: Window,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    /// Skeleton vertex id of each star, in mesh order.
    pub stars: Vec<usize>,
    pub ram: Vec<RamPoint>,
    slits: Vec<Vec<StarSlit>>,
    adj: Vec<Vec<(u32, f64)>>,
}

#[derive(Clone, Copy, PartialEq)]
struct Item {
    dist: f64,
    label: u32,
    node: u32,
}

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on (distance, label).
        other
            .dist
            .total_cmp(&self.dist)
            .then(other.label.cmp(&self.label))
            .then(other.node.cmp(&self.node))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multi-source Dijkstra; each node records the label of the source that
/// reached it first, ties going to the lower label.
pub(crate) fn dijkstra<W>(n: usize, sources: &[(u32, f64, u32)], mut neighbors: W) -> (Vec<f64>, Vec<u32>)
where
    W: FnMut(u32, &mut Vec<(u32, f64)>),
{
    let mut dist = vec![f64::INFINITY; n];
    let mut label = vec![u32::MAX; n];
    let mut heap = BinaryHeap::new();
    for &(node, d, l) in sources {
        let i = node as usize;
        if d < dist[i] || (d == dist[i] && l < label[i]) {
            dist[i] = d;
            label[i] = l;
            heap.push(Item {
                dist: d,
                label: l,
                node,
            });
        }
    }
    let mut buf = Vec::new();
    while let Some(Item {
        dist: d,
        label: l,
        node,
    }) = heap.pop()
    {
        let i = node as usize;
        if d > dist[i] || (d == dist[i] && l != label[i]) {
            continue;
        }
        buf.clear();
        neighbors(node, &mut buf);
        for &(m, w) in &buf {
            let j = m as usize;
            let nd = d + w;
            if nd < dist[j] || (nd == dist[j] && l < label[j]) {
                dist[j] = nd;
                label[j] = l;
                heap.push(Item {
                    dist: nd,
                    label: l,
                    node: m,
                });
            }
        }
    }
    (dist, label)
}

impl Mesh {
    /// Mesh every star of `g` over `window` with sample spacing about `h`.
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
    pub fn build(g: &Skeleton, window: Window, h: f64) -> Result<Mesh, GeometryError> {
        if !(h > 0.0) || window.width() <= 0.0 || window.height() <= 0.0 {
            return Err(GeometryError::EmptyMesh);
        }
        let nx = ((window.width() / h).round() as usize).max(2);
        let ny = ((window.height() / h).round() as usize).max(2);
        if g.vertices.len().saturating_mul(nx * ny) > u32::MAX as usize / 2 {
            return Err(GeometryError::EmptyMesh);
        }
        let h = window.width() / nx as f64;
        let ram = ram_cycles(g)?;
        let stars = g.vertices.clone();
        let index: BTreeMap<usize, usize> = stars.iter().enumerate().map(|(i, &v)| (v, i)).collect();

        let mut slits: Vec<Vec<StarSlit>> = vec![Vec::new(); stars.len()];
        let mut by_foot: Vec<BTreeMap<(u64, u64), usize>> = vec![BTreeMap::new(); stars.len()];
        for e in &g.edges {
            for (x, y, side) in [(e.u, e.v, e.u_side), (e.v, e.u, e.v_side)] {
                let s = index[&x];
                let slot = *by_foot[s].entry(foot_key(e.foot)).or_insert_with(|| {
                    let dir = (e.foot - g.z0) / (e.foot - g.z0).norm();
                    slits[s].push(StarSlit {
                        foot: e.foot,
                        dir,
                        plus: None,
                        minus: None,
                    });
                    slits[s].len() - 1
                });
                let target = index.get(&y).copied();
                match side {
                    Side::Plus => slits[s][slot].plus = target,
                    Side::Minus => slits[s][slot].minus = target,
                }
            }
        }

        let mut mesh = Mesh {
            z0: g.z0,
            window,
            h,
            nx,
            ny,
            stars,
            ram,
            slits,
            adj: Vec::new(),
        };
        mesh.adj = mesh.stitch(&index);
        Ok(mesh)
    }

    fn per_star(&self) -> usize {
        self.nx * self.ny
    }

    pub fn sample_count(&self) -> usize {
        self.stars.len() * self.per_star()
    }

    pub fn node_count(&self) -> usize {
        self.sample_count() + self.ram.len()
    }

    /// Node index of ramification point `r`.
    pub fn ram_node(&self, r: usize) -> u32 {
        (self.sample_count() + r) as u32
    }

    pub fn is_sample(&self, node: u32) -> bool {
        (node as usize) < self.sample_count()
    }

    /// Base-plane coordinate of a node.
    pub fn position(&self, node: u32) -> C64 {
        let n = node as usize;
        if n >= self.sample_count() {
            return self.ram[n - self.sample_count()].projection;
        }
        let k = n % self.per_star();
        self.grid_point(k % self.nx, k / self.nx)
    }

    /// Mesh index of the star holding a sample node.
    pub fn star_of(&self, node: u32) -> usize {
        node as usize / self.per_star()
    }

    fn grid_point(&self, i: usize, j: usize) -> C64 {
        C64::new(
            self.window.min.re + (i as f64 + 0.5) * self.h,
            self.window.min.im + (j as f64 + 0.5) * (self.window.height() / self.ny as f64),
        )
    }

    fn node(&self, star: usize, i: usize, j: usize) -> u32 {
        (star * self.per_star() + j * self.nx + i) as u32
    }

    /// Star reached from `star` by the segment `p q`, if it crosses at most
    /// one slit into a materialized star.
    fn cross_into(&self, star: usize, p: C64, q: C64) -> Option<usize> {
        let mut target = star;
        let mut hits = 0;
        for s in &self.slits[star] {
            if segment_hits_ray(p, q, s.foot, s.dir) {
                hits += 1;
                let ccw = cross(s.dir, q - p) > 0.0;
                target = if ccw { s.plus? } else { s.minus? };
            }
        }
        (hits <= 1).then_some(target)
    }

    /// Can `p` see the ramification point over `c` inside `star`?
    fn sees(&self, star: usize, p: C64, c: C64) -> bool {
        self.slits[star]
            .iter()
            .filter(|s| foot_key(s.foot) != foot_key(c))
            .all(|s| !segment_hits_ray(p, c, s.foot, s.dir))
    }

    fn stitch(&self, index: &BTreeMap<usize, usize>) -> Vec<Vec<(u32, f64)>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        let dy = self.window.height() / self.ny as f64;
        for s in 0..self.stars.len() {
            for j in 0..self.ny {
                for i in 0..self.nx {
                    let a = self.node(s, i, j);
                    let p = self.grid_point(i, j);
                    for (di, dj) in [
                        (-1i64, -1i64),
                        (0, -1),
                        (1, -1),
                        (-1, 0),
                        (1, 0),
                        (-1, 1),
                        (0, 1),
                        (1, 1),
                    ] {
                        let (ii, jj) = (i as i64 + di, j as i64 + dj);
                        if ii < 0 || jj < 0 || ii >= self.nx as i64 || jj >= self.ny as i64 {
                            continue;
                        }
                        let q = self.grid_point(ii as usize, jj as usize);
                        if let Some(t) = self.cross_into(s, p, q) {
                            let w = ((di as f64 * self.h).powi(2) + (dj as f64 * dy).powi(2)).sqrt();
                            adj[a as usize].push((self.node(t, ii as usize, jj as usize), w));
                        }
                    }
                }
            }
        }
        // A crossing found from one side is the same surface segment seen
        // from the other, where it may meet a second slit's ray and be
        // skipped; keep the graph undirected.
        let mut reverse = Vec::new();
        for (a, out) in adj.iter().enumerate() {
            for &(b, w) in out {
                if !adj[b as usize].iter().any(|&(x, _)| x as usize == a) {
                    reverse.push((b, a as u32, w));
                }
            }
        }
        for (b, a, w) in reverse {
            adj[b as usize].push((a, w));
        }
        for (r, rp) in self.ram.iter().enumerate() {
            let rn = self.ram_node(r);
            let mut stars: Vec<usize> = rp.vertices.iter().filter_map(|v| index.get(v).copied()).collect();
            stars.sort_unstable();
            stars.dedup();
            for s in stars {
                for j in 0..self.ny {
                    for i in 0..self.nx {
                        let p = self.grid_point(i, j);
                        if self.sees(s, p, rp.projection) {
                            let a = self.node(s, i, j);
                            let w = (p - rp.projection).norm();
                            adj[a as usize].push((rn, w));
                            adj[rn as usize].push((a, w));
                        }
                    }
                }
            }
        }
        adj
    }

    pub fn neighbors(&self, node: u32) -> &[(u32, f64)] {
        &self.adj[node as usize]
    }

    /// The sample nearest to a surface point, or `OutOfWindow`.
    pub fn locate(&self, w: &SurfacePoint) -> Result<u32, GeometryError> {
        let star = self
            .stars
            .iter()
            .position(|&v| v == w.star)
            .ok_or(GeometryError::UnknownStar { star: w.star })?;
        if !self.window.contains(w.z) {
            return Err(GeometryError::OutOfWindow { z: w.z });
        }
        let dy = self.window.height() / self.ny as f64;
        let i = (((w.z.re - self.window.min.re) / self.h) as usize).min(self.nx - 1);
        let j = (((w.z.im - self.window.min.im) / dy) as usize).min(self.ny - 1);
        Ok(self.node(star, i, j))
    }

    /// Sources for a search started at an arbitrary surface point: nearby
    /// samples reachable without crossing a slit, and any visible
    /// ramification point, at their exact chart distances.
    pub(crate) fn point_sources(&self, w: &SurfacePoint) -> Result<Vec<(u32, f64, u32)>, GeometryError> {
        let center = self.locate(w)?;
        let star = self.star_of(center);
        let mut out = vec![(center, (self.position(center) - w.z).norm(), 0)];
        for &(m, _) in self.neighbors(center) {
            let q = self.position(m);
            if self.is_sample(m) {
                if self.star_of(m) == star && self.cross_into(star, w.z, q) == Some(star) {
                    out.push((m, (q - w.z).norm(), 0));
                }
            } else if self.sees(star, w.z, q) {
                out.push((m, (q - w.z).norm(), 0));
            }
        }
        for (r, rp) in self.ram.iter().enumerate() {
            let node = self.ram_node(r);
            let touches = self.neighbors(node).iter().any(|&(a, _)| self.star_of(a) == star);
            if touches && self.sees(star, w.z, rp.projection) {
                out.push((node, (rp.projection - w.z).norm(), 0));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_ray_intersection() {
        let c = C64::new(0.0, 0.0);
        let u = C64::new(-1.0, 0.0);
        assert!(segment_hits_ray(C64::new(-1.0, -0.5), C64::new(-1.0, 0.5), c, u));
        assert!(!segment_hits_ray(C64::new(1.0, -0.5), C64::new(1.0, 0.5), c, u));
        assert!(!segment_hits_ray(C64::new(-1.0, 0.2), C64::new(-1.0, 0.5), c, u));
    }

    #[test]
    fn dijkstra_prefers_lower_label_on_ties() {
        // Path graph 0 - 1 - 2 with sources at both ends.
        let adj = [vec![(1u32, 1.0)], vec![(0, 1.0), (2, 1.0)], vec![(1, 1.0)]];
        let (d, l) = dijkstra(3, &[(0, 0.0, 5), (2, 0.0, 3)], |n, out| {
            out.extend_from_slice(&adj[n as usize])
        });
        assert_eq!(d, vec![0.0, 1.0, 0.0]);
        assert_eq!(l[1], 3);
    }
}
