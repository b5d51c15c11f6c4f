use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{ram_cycles, Edge, Order, Radius, Side, Skeleton, SkeletonError};

/// Vertices and edge indices of `Γ_n`: everything reached from the base in
/// at most `n` steps through edges whose foot lies within `n` of `z0`.
pub fn truncation_core(g: &Skeleton, n: usize) -> Result<(Vec<usize>, Vec<usize>), SkeletonError> {
    if let Radius::Finite(r) = g.radius {
        if r < n + 1 {
            return Err(SkeletonError::RadiusTooSmall { have: r, need: n + 1 });
        }
    }
    let admissible = |e: &Edge| (e.foot - g.z0).norm() <= n as f64;
    let adj = g.adjacency();
    let mut dist = BTreeMap::from([(g.base, 0usize)]);
    let mut queue = VecDeque::from([g.base]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d >= n {
            continue;
        }
        for &(i, _) in &adj[&x] {
            let e = &g.edges[i];
            if !admissible(e) {
                continue;
            }
            let y = e.at(x).expect("incident").0;
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(y) {
                e.insert(d + 1);
                queue.push_back(y);
            }
        }
    }
    let edges = g
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| {
            admissible(e)
                && match (dist.get(&e.u), dist.get(&e.v)) {
                    (Some(&du), Some(&dv)) => du.min(dv) < n,
                    _ => false,
                }
        })
        .map(|(i, _)| i)
        .collect();
    Ok((dist.into_keys().collect(), edges))
}

/// Finite skeleton of the truncated surface: `Γ_n` with every surviving open
/// run of a ramification chain closed by one edge of the same foot.
pub fn truncate(g: &Skeleton, n: usize) -> Result<Skeleton, SkeletonError> {
    let (vertices, kept) = truncation_core(g, n)?;
    let keep: BTreeSet<usize> = vertices.iter().copied().collect();
    let mut core = Skeleton {
        z0: g.z0,
        base: g.base,
        vertices,
        edges: kept.iter().map(|&i| g.edges[i]).collect(),
        radius: Radius::Infinite,
        locations: g
            .locations
            .iter()
            .filter(|(v, _)| keep.contains(v))
            .map(|(v, w)| (*v, *w))
            .collect(),
    };
    let mut closing = Vec::new();
    for chain in ram_cycles(&core)? {
        if chain.order == Order::Infinite && chain.vertices.len() >= 2 {
            let first = chain.vertices[0];
            let last = *chain.vertices.last().expect("chain has vertices");
            closing.push(Edge::new(last, first, chain.projection, Side::Plus));
        }
    }
    core.edges.extend(closing);
    Ok(core)
}
