use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::TAU;

use super::path::{lift_polyline, LiftOptions, LiftPoint};
use super::{LiftError, LiftKind};
use crate::numerics::{Chart, C64};

/// Partial permutation of sheet tags.
pub type SheetMap = BTreeMap<usize, usize>;

const LOOP_POINTS: usize = 48;

/// Radius of the small circle used to go around `values[k]` from `z0`.
///
/// Half the smallest of: the distance to any other singular value, to `z0`,
/// and to any ray from `z0` through another singular value, so the circle
/// never crosses another slit.
pub fn loop_radius(values: &[C64], z0: C64, k: usize) -> f64 {
    let c = values[k];
    let mut d = (c - z0).norm();
    for (l, &v) in values.iter().enumerate() {
        if l == k {
            continue;
        }
        d = d.min((c - v).norm());
        let dir = v - z0;
        let len = dir.norm();
        if len > 0.0 {
            let u = dir / len;
            let t = ((c - z0) * u.conj()).re;
            if t > 0.0 {
                d = d.min(((c - z0) * u.conj()).im.abs());
            }
        }
    }
    0.5 * d
}

/// The standard loop based at `z0` around `c`: straight in, once around a
/// circle of radius `r`, straight back.
pub fn loop_path(z0: C64, c: C64, r: f64, ccw: bool) -> Vec<C64> {
    let u = (c - z0) / (c - z0).norm();
    let start_angle = (-u).arg();
    let sign = if ccw { 1.0 } else { -1.0 };
    let mut pts = Vec::with_capacity(LOOP_POINTS + 3);
    pts.push(z0);
    for j in 0..=LOOP_POINTS {
        let t = start_angle + sign * TAU * j as f64 / LOOP_POINTS as f64;
        pts.push(c + C64::from_polar(r, t));
    }
    // Close exactly on the entry point.
    let entry = pts[1];
    *pts.last_mut().expect("loop has points") = entry;
    pts.push(z0);
    pts
}

/// A point over `z0` reached from the base point of the form.
pub fn base_sheet(chart: &Chart, z0: C64) -> Result<C64, LiftError> {
    let form = chart.form();
    let opts = LiftOptions::default();
    let mut start = LiftPoint {
        w: form.base_point,
        value: form.base_value,
    };
    let values = chart.singular_value_points();
    let near_value = |v: C64| values.iter().any(|&s| (s - v).norm() <= 1e-6 * (1.0 + s.norm()));
    if chart.critical_distance(start.w) < 1e-8 || near_value(start.value) {
        // Move off a critical point or a singular value before lifting.
        let room = chart
            .critical_points()
            .iter()
            .map(|c| (c.location - start.w).norm())
            .filter(|&d| d > 1e-8)
            .fold(1.0f64, f64::min);
        let mut found = None;
        for j in 0..16 {
            let w = start.w + C64::from_polar(0.25 * room, 0.3 + TAU * j as f64 / 16.0);
            let v = chart.value(w)?;
            if !near_value(v) {
                found = Some(LiftPoint { w, value: v });
                break;
            }
        }
        start = found.ok_or(LiftError::StartOnSingularValue { value: start.value })?;
    }
    let a = start.value;
    if (a - z0).norm() == 0.0 {
        return Ok(start.w);
    }
    let normal = (z0 - a) * C64::new(0.0, 1.0);
    let mut paths = vec![vec![a, z0]];
    for k in [0.3, -0.3, 0.7, -0.7, 1.3, -1.3] {
        paths.push(vec![a, 0.5 * (a + z0) + normal * k, z0]);
    }
    let mut last_err = None;
    for path in paths {
        match lift_polyline(chart, start, &path, &opts) {
            Ok(res) if res.kind == LiftKind::Full => {
                return Ok(res.end.expect("full lift has an endpoint"));
            }
            Ok(_) => {}
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or(LiftError::StartOnSingularValue { value: a }))
}

/// Breadth-first enumeration of a fiber under the loop action.
pub struct SheetExplorer<'a> {
    chart: &'a Chart,
    z0: C64,
    values: Vec<C64>,
    loops: Vec<[Vec<C64>; 2]>,
    sheets: Vec<C64>,
    forward: Vec<SheetMap>,
    backward: Vec<SheetMap>,
    opts: LiftOptions,
}

impl<'a> SheetExplorer<'a> {
    pub fn new(chart: &'a Chart, z0: C64, base: C64) -> Self {
        let values = chart.singular_value_points();
        let loops = (0..values.len())
            .map(|k| {
                let r = loop_radius(&values, z0, k);
                [loop_path(z0, values[k], r, true), loop_path(z0, values[k], r, false)]
            })
            .collect();
        SheetExplorer {
            chart,
            z0,
            forward: vec![SheetMap::new(); values.len()],
            backward: vec![SheetMap::new(); values.len()],
            values,
            loops,
            sheets: vec![base],
            opts: LiftOptions::default(),
        }
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn sheets(&self) -> &[C64] {
        &self.sheets
    }

    pub fn z0(&self) -> C64 {
        self.z0
    }

    fn tag(&mut self, w: C64) -> usize {
        let tol = 1e-6 * (1.0 + w.norm());
        if let Some(i) = self.sheets.iter().position(|s| (s - w).norm() <= tol) {
            return i;
        }
        self.sheets.push(w);
        self.sheets.len() - 1
    }

    /// Image of sheet `v` under the loop around `values[k]`.
    pub fn apply(&mut self, k: usize, v: usize, ccw: bool) -> Result<usize, LiftError> {
        let cached = if ccw { &self.forward[k] } else { &self.backward[k] };
        if let Some(&t) = cached.get(&v) {
            return Ok(t);
        }
        let start = LiftPoint {
            w: self.sheets[v],
            value: self.z0,
        };
        let path = &self.loops[k][if ccw { 0 } else { 1 }];
        let res = lift_polyline(self.chart, start, path, &self.opts)?;
        let end = match (res.kind, res.end) {
            (LiftKind::Full, Some(end)) => end,
            _ => return Err(LiftError::LoopNotClosed { value: self.values[k] }),
        };
        let t = self.tag(end);
        if ccw {
            self.forward[k].insert(v, t);
            self.backward[k].insert(t, v);
        } else {
            self.backward[k].insert(v, t);
            self.forward[k].insert(t, v);
        }
        Ok(t)
    }

    /// Expand every sheet within `depth` loop applications of the base.
    /// Returns each known sheet's distance; sheets at `depth + 1` witness
    /// that the fiber continues past the window.
    pub fn explore(&mut self, depth: usize) -> Result<Vec<usize>, LiftError> {
        let mut dist = vec![usize::MAX; self.sheets.len()];
        dist[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            if dist[v] > depth {
                continue;
            }
            for k in 0..self.values.len() {
                for ccw in [true, false] {
                    let t = self.apply(k, v, ccw)?;
                    if t >= dist.len() {
                        dist.resize(t + 1, usize::MAX);
                    }
                    if dist[t] == usize::MAX {
                        dist[t] = dist[v] + 1;
                        queue.push_back(t);
                    }
                }
            }
        }
        Ok(dist)
    }

    pub fn forward(&self) -> &[SheetMap] {
        &self.forward
    }
}

/// The loop action on the part of the fiber within `depth` of the base sheet.
#[derive(Clone, Debug)]
pub struct MonodromyTable {
    pub base_value: C64,
    pub critical_values: Vec<C64>,
    /// Counterclockwise action, restricted to enumerated sheets.
    pub perms: Vec<SheetMap>,
    pub points: Vec<C64>,
    /// Loop distance of each sheet from the base sheet (tag 0).
    pub depth: Vec<usize>,
    /// New sheets appeared at the window boundary.
    pub incomplete: bool,
}

pub fn monodromy(chart: &Chart, z0: C64, depth: usize) -> Result<MonodromyTable, LiftError> {
    let base = base_sheet(chart, z0)?;
    let mut ex = SheetExplorer::new(chart, z0, base);
    let dist = ex.explore(depth)?;
    let keep = |v: usize| dist.get(v).is_some_and(|&d| d <= depth);
    let perms = ex
        .forward()
        .iter()
        .map(|m| {
            m.iter()
                .filter(|(a, b)| keep(**a) && keep(**b))
                .map(|(a, b)| (*a, *b))
                .collect()
        })
        .collect();
    let incomplete = dist.iter().any(|&d| d == depth + 1);
    let n = dist.iter().filter(|&&d| d <= depth).count();
    // Tags are assigned in discovery order, so kept sheets are a prefix
    // exactly when nothing beyond the window was found.
    let (points, depth_out): (Vec<C64>, Vec<usize>) = ex
        .sheets()
        .iter()
        .zip(&dist)
        .filter(|(_, &d)| d <= depth)
        .map(|(w, &d)| (*w, d))
        .unzip();
    debug_assert_eq!(points.len(), n);
    Ok(MonodromyTable {
        base_value: z0,
        critical_values: ex.values().to_vec(),
        perms: renumber(perms, &dist, depth),
        points,
        depth: depth_out,
        incomplete,
    })
}

/// Re-tag kept sheets consecutively in discovery order.
fn renumber(perms: Vec<SheetMap>, dist: &[usize], depth: usize) -> Vec<SheetMap> {
    let mut new_tag = vec![usize::MAX; dist.len()];
    let mut next = 0;
    for (v, &d) in dist.iter().enumerate() {
        if d <= depth {
            new_tag[v] = next;
            next += 1;
        }
    }
    perms
        .into_iter()
        .map(|m| m.into_iter().map(|(a, b)| (new_tag[a], new_tag[b])).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{CPoly, PQForm};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn poly_chart(coeffs: &[f64]) -> Chart {
        Chart::new(PQForm::from_polynomial(&CPoly::from_real(coeffs)).unwrap()).unwrap()
    }

    fn cycle_lengths(m: &SheetMap) -> Vec<usize> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for &s in m.keys() {
            if seen.contains(&s) {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while seen.insert(x) {
                len += 1;
                x = m[&x];
            }
            out.push(len);
        }
        out.sort();
        out
    }

    #[test]
    fn square_loop_is_a_transposition() {
        let t = monodromy(&poly_chart(&[0.0, 0.0, 1.0]), c(1.0, 0.5), 4).unwrap();
        assert_eq!(t.points.len(), 2);
        assert!(!t.incomplete);
        assert_eq!(cycle_lengths(&t.perms[0]), vec![2]);
    }

    #[test]
    fn cube_loop_is_a_three_cycle() {
        let t = monodromy(&poly_chart(&[0.0, 0.0, 0.0, 1.0]), c(1.0, 0.5), 4).unwrap();
        assert_eq!(t.points.len(), 3);
        assert_eq!(cycle_lengths(&t.perms[0]), vec![3]);
    }

    #[test]
    fn cubic_with_two_critical_values() {
        let t = monodromy(&poly_chart(&[0.0, -3.0, 0.0, 1.0]), c(0.3, 1.1), 4).unwrap();
        assert_eq!(t.points.len(), 3);
        for p in &t.perms {
            assert_eq!(cycle_lengths(p), vec![1, 2]);
        }
        // Every fiber point really lies over z0.
        let f = CPoly::from_real(&[0.0, -3.0, 0.0, 1.0]);
        for w in &t.points {
            assert!((f.eval(*w) - c(0.3, 1.1)).norm() < 1e-8);
        }
    }

    #[test]
    fn exponential_fiber_is_unbounded() {
        let chart =
            Chart::new(PQForm::new(CPoly::identity(), CPoly::from_real(&[1.0]), c(0.0, 0.0), c(1.0, 0.0)).unwrap())
                .unwrap();
        let t = monodromy(&chart, c(0.5, 0.5), 2).unwrap();
        assert!(t.incomplete);
        assert_eq!(t.points.len(), 5);
        // Sheets differ by multiples of 2πi.
        for w in &t.points {
            let k = (w - t.points[0]).im / TAU;
            assert!((k - k.round()).abs() < 1e-8);
        }
    }

    #[test]
    fn clockwise_loop_inverts() {
        let chart = poly_chart(&[0.0, 0.0, 0.0, 1.0]);
        let z0 = c(1.0, 0.5);
        let base = base_sheet(&chart, z0).unwrap();
        let mut ex = SheetExplorer::new(&chart, z0, base);
        let a = ex.apply(0, 0, true).unwrap();
        let b = ex.apply(0, a, false).unwrap();
        assert_eq!(b, 0);
    }
}
