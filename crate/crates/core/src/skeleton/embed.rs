use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{Side, Skeleton};
use crate::numerics::C64;

/// Does the radius-`r` ball of `a` embed in `b`, base to base, preserving
/// feet exactly and side labels?
pub fn ball_embed(a: &Skeleton, b: &Skeleton, r: usize) -> bool {
    ball_embed_with(a, b, r, 0.0)
}

/// `ball_embed` with feet matched up to `foot_tol`, for comparing surfaces
/// whose ramification points are close but not identical.
pub fn ball_embed_with(a: &Skeleton, b: &Skeleton, r: usize, foot_tol: f64) -> bool {
    embed_map(a, b, r, foot_tol).is_some()
}

/// Same vertex and edge counts and an embedding of all of `a` into `b`.
pub fn isomorphic_with(a: &Skeleton, b: &Skeleton, foot_tol: f64) -> bool {
    a.vertices.len() == b.vertices.len()
        && a.edges.len() == b.edges.len()
        && embed_map(a, b, usize::MAX, foot_tol).is_some_and(|m| m.len() == a.vertices.len())
}

fn same_foot(x: C64, y: C64, tol: f64) -> bool {
    if tol == 0.0 {
        super::foot_key(x) == super::foot_key(y)
    } else {
        (x - y).norm() <= tol
    }
}

/// The forced base-to-base map; side labels make it unique when it exists.
fn embed_map(a: &Skeleton, b: &Skeleton, r: usize, foot_tol: f64) -> Option<BTreeMap<usize, usize>> {
    let adj_a = a.adjacency();
    let adj_b = b.adjacency();
    let dist = a.distances();
    let mut map = BTreeMap::from([(a.base, b.base)]);
    let mut image = BTreeSet::from([b.base]);
    let mut queue = VecDeque::from([a.base]);
    while let Some(x) = queue.pop_front() {
        if dist[&x] >= r {
            continue;
        }
        let fx = map[&x];
        let mut used_b: BTreeSet<usize> = BTreeSet::new();
        for &(ea, side) in &adj_a[&x] {
            let edge = &a.edges[ea];
            let (y, far_side) = edge.at(x).map(|(y, _)| (y, other_side(edge, x))).expect("incident");
            let found = adj_b.get(&fx)?.iter().find(|&&(eb, sb)| {
                let eb_edge = &b.edges[eb];
                sb == side
                    && !used_b.contains(&eb)
                    && same_foot(edge.foot, eb_edge.foot, foot_tol)
                    && other_side(eb_edge, fx) == far_side
            });
            let &(eb, _) = found?;
            used_b.insert(eb);
            let fy = b.edges[eb].at(fx).expect("incident").0;
            match map.get(&y) {
                Some(&m) if m != fy => return None,
                Some(_) => {}
                None => {
                    if !image.insert(fy) {
                        return None;
                    }
                    map.insert(y, fy);
                    queue.push_back(y);
                }
            }
        }
    }
    Some(map)
}

/// Side label at the endpoint opposite `x`.
fn other_side(e: &super::Edge, x: usize) -> Side {
    if e.u == x {
        e.v_side
    } else {
        e.u_side
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Edge, Radius};
    use super::*;

    fn cycle(n: usize) -> Skeleton {
        Skeleton {
            z0: C64::new(1.0, 1.0),
            base: 0,
            vertices: (0..n).collect(),
            edges: (0..n)
                .map(|i| Edge::new(i, (i + 1) % n, C64::new(0.0, 0.0), Side::Plus))
                .collect(),
            radius: Radius::Infinite,
            locations: BTreeMap::new(),
        }
    }

    #[test]
    fn identity_embeds() {
        assert!(ball_embed(&cycle(3), &cycle(3), 2));
        assert!(isomorphic_with(&cycle(3), &cycle(3), 0.0));
    }

    #[test]
    fn square_does_not_embed_in_cube() {
        assert!(!ball_embed(&cycle(2), &cycle(3), 1));
        assert!(!isomorphic_with(&cycle(3), &cycle(4), 0.0));
    }

    #[test]
    fn short_ball_of_a_long_cycle_embeds_in_a_longer_one() {
        assert!(ball_embed(&cycle(7), &cycle(9), 2));
        assert!(!ball_embed(&cycle(7), &cycle(9), 4));
    }

    #[test]
    fn feet_must_match() {
        let mut b = cycle(3);
        for e in &mut b.edges {
            e.foot = C64::new(0.01, 0.0);
        }
        assert!(!ball_embed(&cycle(3), &b, 1));
        assert!(ball_embed_with(&cycle(3), &b, 1, 0.1));
    }
}
