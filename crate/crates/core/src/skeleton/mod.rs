//! Skeleton graphs of a log-Riemann surface: one vertex per star of a generic
//! fiber, one edge per shared slit, labeled by its foot and by the side of
//! the slit each endpoint sees.

mod build;
mod cycles;
mod embed;
mod json;
mod truncate;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::lifting::LiftError;
use crate::numerics::C64;

pub use crate::lifting::Order;
pub use build::{skeleton_build, skeleton_from_table};
pub use cycles::{
    finite_completion, pi1_rank, ram_cycles, validate_graph, CompletedSkeleton, Graph, Hub, RamPoint, Violation,
};
pub use embed::{ball_embed, ball_embed_with, isomorphic_with};
pub use json::{complex_from_json, complex_to_json, JsonError};
pub use truncate::{truncate, truncation_core};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Side::Plus => "+",
            Side::Minus => "-",
        }
    }
}

/// An edge joining two stars across the slit toward `foot`. `u` sees the
/// slit from `u_side`, `v` from `v_side`; a well-formed edge has opposite
/// sides.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub foot: C64,
    pub u_side: Side,
    pub v_side: Side,
}

impl Edge {
    pub fn new(u: usize, v: usize, foot: C64, u_side: Side) -> Edge {
        Edge {
            u,
            v,
            foot,
            u_side,
            v_side: u_side.opposite(),
        }
    }

    /// Endpoint opposite `x` and the side `x` sees, if `x` is an endpoint.
    pub fn at(&self, x: usize) -> Option<(usize, Side)> {
        if self.u == x {
            Some((self.v, self.u_side))
        } else if self.v == x {
            Some((self.u, self.v_side))
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Radius {
    Finite(usize),
    Infinite,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Skeleton {
    pub z0: C64,
    pub base: usize,
    pub vertices: Vec<usize>,
    pub edges: Vec<Edge>,
    /// How far from `base` the graph is materialized.
    pub radius: Radius,
    /// Fiber point of each vertex, when the graph came from a chart.
    pub locations: BTreeMap<usize, C64>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SkeletonError {
    #[error("base value {z0} is collinear with two singular values (clearance {clearance:e})")]
    GenericityViolation { z0: C64, clearance: f64 },
    #[error("ramification chain over {foot} has contradictory side labels at vertex {vertex}")]
    InconsistentSides { foot: C64, vertex: usize },
    #[error("materialized radius {have} is below the {need} required")]
    RadiusTooSmall { have: usize, need: usize },
    #[error(transparent)]
    Lift(#[from] LiftError),
}

/// Exact identity of a foot value (signed zeros identified).
pub fn foot_key(z: C64) -> (u64, u64) {
    let norm = |x: f64| if x == 0.0 { 0u64 } else { x.to_bits() };
    (norm(z.re), norm(z.im))
}

impl Skeleton {
    /// Graph distance of every vertex from the base.
    pub fn distances(&self) -> BTreeMap<usize, usize> {
        let adj = self.adjacency();
        let mut dist = BTreeMap::new();
        dist.insert(self.base, 0usize);
        let mut queue = VecDeque::from([self.base]);
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            for &(e, _) in adj.get(&x).map(|v| v.as_slice()).unwrap_or(&[]) {
                let (y, _) = self.edges[e].at(x).expect("adjacency lists incident edges");
                if let std::collections::btree_map::Entry::Vacant(slot) = dist.entry(y) {
                    slot.insert(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Incident edges of each vertex as `(edge index, side seen)`.
    pub fn adjacency(&self) -> BTreeMap<usize, Vec<(usize, Side)>> {
        let mut adj: BTreeMap<usize, Vec<(usize, Side)>> = self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for (i, e) in self.edges.iter().enumerate() {
            adj.entry(e.u).or_default().push((i, e.u_side));
            if e.v != e.u {
                adj.entry(e.v).or_default().push((i, e.v_side));
            }
        }
        adj
    }

    /// Vertices whose edges may be cut off by the materialization radius.
    pub fn boundary(&self) -> BTreeSet<usize> {
        match self.radius {
            Radius::Infinite => BTreeSet::new(),
            Radius::Finite(r) => self
                .distances()
                .into_iter()
                .filter(|&(_, d)| d >= r)
                .map(|(v, _)| v)
                .collect(),
        }
    }

    /// Distinct foot values in first-appearance order.
    pub fn feet(&self) -> Vec<C64> {
        let mut seen = BTreeSet::new();
        self.edges
            .iter()
            .filter(|e| seen.insert(foot_key(e.foot)))
            .map(|e| e.foot)
            .collect()
    }
}
