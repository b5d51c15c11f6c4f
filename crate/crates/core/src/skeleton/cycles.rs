use std::collections::{BTreeMap, BTreeSet};

use super::{foot_key, Edge, Order, Radius, Side, Skeleton, SkeletonError};
use crate::numerics::C64;

/// A failed axiom with its witness.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub axiom: u8,
    pub vertex: Option<usize>,
    pub edge: Option<usize>,
    pub foot: Option<C64>,
    pub detail: String,
}

/// Check discreteness of feet, the two-sided edge pairing at every vertex,
/// and opposite side labels on every edge. Vertices on the materialization
/// boundary may miss edges but not carry extra ones.
pub fn validate_graph(g: &Skeleton) -> Vec<Violation> {
    let mut out = Vec::new();
    let known: BTreeSet<usize> = g.vertices.iter().copied().collect();

    // Axiom 1: feet are finite and distinct feet are not numerically equal.
    let feet = g.feet();
    for (i, a) in feet.iter().enumerate() {
        if !a.re.is_finite() || !a.im.is_finite() {
            out.push(Violation {
                axiom: 1,
                vertex: None,
                edge: None,
                foot: Some(*a),
                detail: "foot is not a finite point".into(),
            });
            continue;
        }
        for b in &feet[i + 1..] {
            if (a - b).norm() <= 1e-9 * (1.0 + a.norm()) {
                out.push(Violation {
                    axiom: 1,
                    vertex: None,
                    edge: None,
                    foot: Some(*a),
                    detail: format!("feet {a} and {b} accumulate"),
                });
            }
        }
    }

    // Axiom 3, edge by edge.
    for (i, e) in g.edges.iter().enumerate() {
        if !known.contains(&e.u) || !known.contains(&e.v) {
            out.push(Violation {
                axiom: 3,
                vertex: None,
                edge: Some(i),
                foot: Some(e.foot),
                detail: "edge endpoint is not a vertex".into(),
            });
        } else if e.u == e.v {
            out.push(Violation {
                axiom: 3,
                vertex: Some(e.u),
                edge: Some(i),
                foot: Some(e.foot),
                detail: "edge is a loop".into(),
            });
        } else if e.u_side == e.v_side {
            out.push(Violation {
                axiom: 3,
                vertex: None,
                edge: Some(i),
                foot: Some(e.foot),
                detail: format!("both ends on the {} side", e.u_side.symbol()),
            });
        }
    }

    // Axiom 2: per vertex and foot, exactly one + and one − edge.
    let boundary = g.boundary();
    type Key = (usize, (u64, u64));
    let mut count: BTreeMap<Key, (usize, usize, C64)> = BTreeMap::new();
    for e in &g.edges {
        for (x, side) in [(e.u, e.u_side), (e.v, e.v_side)] {
            let slot = count.entry((x, foot_key(e.foot))).or_insert((0, 0, e.foot));
            match side {
                Side::Plus => slot.0 += 1,
                Side::Minus => slot.1 += 1,
            }
        }
    }
    for (&(x, _), &(plus, minus, foot)) in &count {
        let exempt = boundary.contains(&x);
        let bad = plus > 1 || minus > 1 || (!exempt && (plus != 1 || minus != 1));
        if bad {
            out.push(Violation {
                axiom: 2,
                vertex: Some(x),
                edge: None,
                foot: Some(foot),
                detail: format!("{plus} edges on the + side and {minus} on the - side"),
            });
        }
    }
    out
}

/// A ramification point read off the graph: the chain of edges with one
/// foot linked through the side labels.
#[derive(Clone, Debug, PartialEq)]
pub struct RamPoint {
    pub projection: C64,
    pub order: Order,
    /// Edge indices in chain order.
    pub edge_cycle: Vec<usize>,
    /// Vertices in chain order.
    pub vertices: Vec<usize>,
    /// Open chain in a finite ball: the true order is only known to be at
    /// least the chain length.
    pub lower_bounded: bool,
}

/// Partition the edges into maximal chains of constant foot.
pub fn ram_cycles(g: &Skeleton) -> Result<Vec<RamPoint>, SkeletonError> {
    // (foot, vertex) -> edge leaving through the + side, and through the − side.
    let mut plus: BTreeMap<((u64, u64), usize), usize> = BTreeMap::new();
    let mut minus: BTreeMap<((u64, u64), usize), usize> = BTreeMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        if e.u_side == e.v_side {
            return Err(SkeletonError::InconsistentSides {
                foot: e.foot,
                vertex: e.u,
            });
        }
        let key = foot_key(e.foot);
        for (x, side) in [(e.u, e.u_side), (e.v, e.v_side)] {
            let map = if side == Side::Plus { &mut plus } else { &mut minus };
            if map.insert((key, x), i).is_some() {
                return Err(SkeletonError::InconsistentSides {
                    foot: e.foot,
                    vertex: x,
                });
            }
        }
    }
    let step = |map: &BTreeMap<((u64, u64), usize), usize>, key, x: usize| -> Option<(usize, usize)> {
        map.get(&(key, x))
            .map(|&i| (i, g.edges[i].at(x).expect("edge is incident").0))
    };

    let mut used = vec![false; g.edges.len()];
    let mut out = Vec::new();
    for start in 0..g.edges.len() {
        if used[start] {
            continue;
        }
        let e0: &Edge = &g.edges[start];
        let key = foot_key(e0.foot);
        // Orient so the chain runs from the + side endpoint.
        let (from, to) = if e0.u_side == Side::Plus {
            (e0.u, e0.v)
        } else {
            (e0.v, e0.u)
        };
        let mut edges = vec![start];
        let mut verts = vec![from, to];
        used[start] = true;
        let mut closed = false;
        let mut x = to;
        while let Some((i, y)) = step(&plus, key, x) {
            if i == start {
                closed = true;
                break;
            }
            if used[i] {
                return Err(SkeletonError::InconsistentSides {
                    foot: e0.foot,
                    vertex: x,
                });
            }
            used[i] = true;
            edges.push(i);
            verts.push(y);
            x = y;
        }
        if closed {
            verts.pop();
        } else {
            // Extend backward from the start.
            let mut x = from;
            while let Some((i, y)) = step(&minus, key, x) {
                if used[i] {
                    return Err(SkeletonError::InconsistentSides {
                        foot: e0.foot,
                        vertex: x,
                    });
                }
                used[i] = true;
                edges.insert(0, i);
                verts.insert(0, y);
                x = y;
            }
        }
        let order = if closed {
            Order::Finite(edges.len())
        } else {
            Order::Infinite
        };
        out.push(RamPoint {
            projection: e0.foot,
            order,
            edge_cycle: edges,
            vertices: verts,
            lower_bounded: !closed && matches!(g.radius, Radius::Finite(_)),
        });
    }
    Ok(out)
}

/// A vertex added for a finite-order ramification point.
#[derive(Clone, Debug, PartialEq)]
pub struct Hub {
    pub projection: C64,
    pub order: usize,
    pub spokes: Vec<usize>,
}

/// The skeleton with every finite-order cycle replaced by a hub and spokes.
#[derive(Clone, Debug, PartialEq)]
pub struct CompletedSkeleton {
    pub skeleton: Skeleton,
    pub hubs: Vec<Hub>,
}

pub fn finite_completion(g: &Skeleton) -> Result<CompletedSkeleton, SkeletonError> {
    let cycles = ram_cycles(g)?;
    let mut drop = vec![false; g.edges.len()];
    let mut hubs = Vec::new();
    for c in cycles {
        if let Order::Finite(n) = c.order {
            for &i in &c.edge_cycle {
                drop[i] = true;
            }
            hubs.push(Hub {
                projection: c.projection,
                order: n,
                spokes: c.vertices,
            });
        }
    }
    let mut skeleton = g.clone();
    skeleton.edges = g
        .edges
        .iter()
        .zip(&drop)
        .filter(|(_, &d)| !d)
        .map(|(e, _)| *e)
        .collect();
    Ok(CompletedSkeleton { skeleton, hubs })
}

/// Plain undirected multigraph view used for Betti numbers.
pub trait Graph {
    fn vertex_count(&self) -> usize;
    /// Edges as pairs of dense indices `< vertex_count`.
    fn edge_pairs(&self) -> Vec<(usize, usize)>;
}

fn dense_index(vertices: &[usize]) -> BTreeMap<usize, usize> {
    vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect()
}

impl Graph for Skeleton {
    fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    fn edge_pairs(&self) -> Vec<(usize, usize)> {
        let idx = dense_index(&self.vertices);
        self.edges.iter().map(|e| (idx[&e.u], idx[&e.v])).collect()
    }
}

impl Graph for CompletedSkeleton {
    fn vertex_count(&self) -> usize {
        self.skeleton.vertices.len() + self.hubs.len()
    }

    fn edge_pairs(&self) -> Vec<(usize, usize)> {
        let idx = dense_index(&self.skeleton.vertices);
        let n = self.skeleton.vertices.len();
        let mut pairs = self.skeleton.edge_pairs();
        for (h, hub) in self.hubs.iter().enumerate() {
            pairs.extend(hub.spokes.iter().map(|v| (n + h, idx[v])));
        }
        pairs
    }
}

/// First Betti number `|E| - |V| + #components`.
pub fn pi1_rank<G: Graph>(g: &G) -> usize {
    let n = g.vertex_count();
    let pairs = g.edge_pairs();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut components = n;
    for &(a, b) in &pairs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    pairs.len() + components - n
}
