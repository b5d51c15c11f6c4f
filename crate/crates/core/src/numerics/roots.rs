//! Simultaneous polynomial root finding (Aberth-Ehrlich) with multiplicity
//! clustering.

use std::f64::consts::PI;

use super::{CPoly, NumericsError, C64};

const MAX_ITER: usize = 2000;
/// Radius used to decide that Aberth iterates belong to the same multiple
/// root: `CLUSTER_LOOSE * (1 + |z|)`. A cluster is then only accepted when its
/// refined center passes the residual test.
const CLUSTER_LOOSE: f64 = 1e-3;
/// Clusters tighter than this are always merged.
const CLUSTER_TIGHT: f64 = 1e-6;

/// One distinct root with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub location: C64,
    pub multiplicity: usize,
}

/// All roots of a polynomial, grouped by multiplicity.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RootList {
    pub entries: Vec<Root>,
}

impl RootList {
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|r| r.multiplicity).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Root> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Re-expand `lead * prod (z - r)^m`.
    pub fn expand(&self, lead: C64) -> CPoly {
        let pairs: Vec<(C64, usize)> = self.entries.iter().map(|r| (r.location, r.multiplicity)).collect();
        CPoly::from_roots(&pairs).scale(lead)
    }
}

/// Residual bound a root location has to meet.
pub fn residual_bound(p: &CPoly, z: C64) -> f64 {
    1e-9 * (1.0 + p.max_abs_coeff()) * z.norm().max(1.0).powi(p.degree() as i32)
}

/// All roots of `p` with multiplicities.
pub fn poly_roots(p: &CPoly) -> Result<RootList, NumericsError> {
    if p.is_zero() || p.degree() == 0 {
        return Err(NumericsError::DegreeZero);
    }

    // Exact zeros at the origin.
    let zero_mult = p.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = CPoly::new(p.coeffs()[zero_mult..].to_vec());

    let mut entries = Vec::new();
    if zero_mult > 0 {
        entries.push(Root {
            location: C64::new(0.0, 0.0),
            multiplicity: zero_mult,
        });
    }
    if reduced.degree() >= 1 {
        let approx = aberth(&reduced)?;
        entries.extend(cluster(&reduced, approx));
    }

    for r in &entries {
        if !r.location.re.is_finite() || !r.location.im.is_finite() {
            return Err(NumericsError::IllConditioned {
                residual: f64::INFINITY,
            });
        }
        let res = p.eval(r.location).norm();
        if res > residual_bound(p, r.location) {
            return Err(NumericsError::IllConditioned { residual: res });
        }
    }
    entries.sort_by(|a, b| {
        (a.location.re, a.location.im)
            .partial_cmp(&(b.location.re, b.location.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(RootList { entries })
}

fn aberth(p: &CPoly) -> Result<Vec<C64>, NumericsError> {
    let n = p.degree();
    let lead = p.leading();
    let monic = p.scale(C64::new(1.0, 0.0) / lead);
    let dp = monic.derivative();
    let radius = 1.0 + monic.coeffs()[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);

    // Offset angle keeps the start off symmetry axes of real polynomials.
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();

    for _ in 0..MAX_ITER {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let pz = monic.eval(z[i]);
            if pz.norm() == 0.0 {
                continue;
            }
            let ratio = pz / dp.eval(z[i]);
            let mut repulsion = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        repulsion += 1.0 / d;
                    }
                }
            }
            let denom = C64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() == 0.0 || !ratio.re.is_finite() {
                ratio
            } else {
                ratio / denom
            };
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    Ok(z)
}

/// Group Aberth iterates that approximate one multiple root.
fn cluster(p: &CPoly, approx: Vec<C64>) -> Vec<Root> {
    let n = approx.len();
    // Single-linkage grouping with the loose radius.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = 1.0 + approx[i].norm().max(approx[j].norm());
            if (approx[i] - approx[j]).norm() <= CLUSTER_LOOSE * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if group_of[r] == usize::MAX {
            group_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[group_of[r]].push(i);
    }

    let mut out = Vec::new();
    for g in groups {
        let m = g.len();
        let members: Vec<C64> = g.iter().map(|&i| approx[i]).collect();
        if m == 1 {
            out.push(Root {
                location: polish(p, members[0], 1),
                multiplicity: 1,
            });
            continue;
        }
        let center = members.iter().sum::<C64>() / m as f64;
        let spread = members.iter().map(|z| (z - center).norm()).fold(0.0, f64::max);
        let refined = polish(p, center, m);
        let tight = spread <= CLUSTER_TIGHT * (1.0 + center.norm());
        let moved = (refined - center).norm();
        if tight || (moved <= 2.0 * spread.max(1e-12) && p.eval(refined).norm() <= residual_bound(p, refined)) {
            out.push(Root {
                location: refined,
                multiplicity: m,
            });
        } else {
            out.extend(members.into_iter().map(|z| Root {
                location: polish(p, z, 1),
                multiplicity: 1,
            }));
        }
    }
    out
}

/// Newton refinement of an `m`-fold root as a simple root of `p^{(m-1)}`.
fn polish(p: &CPoly, z0: C64, m: usize) -> C64 {
    let mut q = p.clone();
    for _ in 1..m {
        q = q.derivative();
    }
    let dq = q.derivative();
    let mut z = z0;
    let mut best = (q.eval(z).norm(), z);
    for _ in 0..8 {
        let d = dq.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = q.eval(z) / d;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        let r = q.eval(z).norm();
        if r < best.0 {
            best = (r, z);
        }
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    best.1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn assert_roots(p: &CPoly, expected: &[(C64, usize)]) {
        let roots = poly_roots(p).unwrap();
        assert_eq!(roots.len(), expected.len(), "{roots:?}");
        for &(z, m) in expected {
            let hit = roots
                .iter()
                .find(|r| (r.location - z).norm() < 1e-7)
                .unwrap_or_else(|| panic!("missing root {z} in {roots:?}"));
            assert_eq!(hit.multiplicity, m);
        }
        assert_eq!(roots.total_multiplicity(), p.degree());
    }

    #[test]
    fn roots_of_z2_plus_1() {
        assert_roots(
            &CPoly::from_real(&[1.0, 0.0, 1.0]),
            &[(c(0.0, 1.0), 1), (c(0.0, -1.0), 1)],
        );
    }

    #[test]
    fn triple_root() {
        // (z-1)^3
        assert_roots(&CPoly::from_real(&[-1.0, 3.0, -3.0, 1.0]), &[(c(1.0, 0.0), 3)]);
    }

    #[test]
    fn expanded_cubic() {
        // (z-1)(z-2)(z-3) expanded by hand
        assert_roots(
            &CPoly::from_real(&[-6.0, 11.0, -6.0, 1.0]),
            &[(c(1.0, 0.0), 1), (c(2.0, 0.0), 1), (c(3.0, 0.0), 1)],
        );
    }

    #[test]
    fn mixed_multiplicities() {
        let p = CPoly::from_roots(&[(c(1.0, 0.0), 2), (c(-2.0, 0.0), 1)]);
        assert_roots(&p, &[(c(1.0, 0.0), 2), (c(-2.0, 0.0), 1)]);
    }

    #[test]
    fn zero_root_power() {
        let p = CPoly::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(4.0, 0.0)]);
        assert_roots(&p, &[(c(0.0, 0.0), 3)]);
    }

    #[test]
    fn constant_is_rejected() {
        assert!(matches!(
            poly_roots(&CPoly::from_real(&[3.0])),
            Err(NumericsError::DegreeZero)
        ));
        assert!(matches!(poly_roots(&CPoly::zero()), Err(NumericsError::DegreeZero)));
    }

    #[test]
    fn close_but_distinct_roots_stay_separate() {
        let p = CPoly::from_roots(&[(c(0.0, 0.0), 1), (c(0.01, 0.0), 1), (c(1.0, 1.0), 1)]);
        assert_roots(&p, &[(c(0.0, 0.0), 1), (c(0.01, 0.0), 1), (c(1.0, 1.0), 1)]);
    }

    #[test]
    fn triple_root_among_neighbours() {
        let roots = [
            (c(-0.3234383046282582, -1.213392553704869), 1),
            (c(-1.2893461890435352, 1.303419642135365), 3),
            (c(-0.7988200113726082, 1.7142042185612145), 1),
        ];
        assert_roots(&CPoly::from_roots(&roots), &roots);
    }
}
