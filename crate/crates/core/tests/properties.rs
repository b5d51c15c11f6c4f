mod common;

use std::collections::BTreeMap;

use common::*;
use logrs::geometry::{kn_cells, level_components, tau_field, SurfacePoint, Window};
use logrs::lifting::{
    base_sheet, lift_segment, lift_segment_with, monodromy, ray_classify, FiberPoint, LiftKind, LiftOptions,
};
use logrs::numerics::{approximant, poly_roots, pq_derivatives, pq_eval, CPoly, Chart, PQForm, C64};
use logrs::skeleton::{
    ball_embed, finite_completion, pi1_rank, ram_cycles, skeleton_build, truncate, truncation_core, validate_graph,
    Order,
};
use logrs::uniformize::{nonlinearity, ram_data};
use proptest::prelude::*;

fn complex(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| C64::new(a, b))
}

fn poly(max_degree: usize, r: f64) -> impl Strategy<Value = CPoly> {
    prop::collection::vec(complex(r), 1..=max_degree + 1).prop_map(CPoly::new)
}

/// Polynomial `F` with separated simple critical points and critical values.
fn separated_polynomial() -> impl Strategy<Value = CPoly> {
    prop::collection::vec(complex(1.5), 1..=4)
        .prop_filter("critical points too close", |cs| min_separation(cs) >= 0.2)
        .prop_map(|cs| poly_with_critical_points(&cs))
        .prop_filter("critical values too close", |f| {
            let crits = poly_roots(&f.derivative()).unwrap();
            let values: Vec<C64> = crits.iter().map(|r| f.eval(r.location)).collect();
            min_separation(&values) >= 0.3
        })
}

fn cycle_lengths(perm: &BTreeMap<usize, usize>) -> Vec<usize> {
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    for &start in perm.keys() {
        if seen.contains_key(&start) {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while seen.insert(x, ()).is_none() {
            len += 1;
            x = perm[&x];
        }
        out.push(len);
    }
    out.sort_unstable();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn roots_reexpand_to_the_polynomial(
        roots in prop::collection::vec(complex(2.0), 1..=6),
        lead in complex(2.0).prop_filter("lead", |z| z.norm() > 0.2),
    ) {
        prop_assume!(min_separation(&roots) >= 0.25);
        let p = CPoly::from_roots(&roots.iter().map(|&z| (z, 1)).collect::<Vec<_>>()).scale(lead);
        let back = poly_roots(&p).unwrap().expand(p.leading());
        let scale = p.max_abs_coeff();
        prop_assert!(p.max_abs_diff(&back) <= 1e-8 * scale, "{:?} vs {:?}", p, back);
    }

    #[test]
    fn evaluation_is_path_independent(p in poly(3, 0.5), q in poly(2, 1.0), z in complex(3.5), bend in complex(2.0)) {
        let mid = z * 0.5 + bend;
        // Both paths stay in the disk of radius `reach`; bounding |P| there keeps
        // e^P from swamping F, where no f64 quadrature agrees to 1e-9.
        let reach = z.norm().max(mid.norm());
        let bound: f64 = p.coeffs().iter().enumerate().map(|(k, c)| c.norm() * reach.powi(k as i32)).sum();
        prop_assume!(z.norm() <= 5.0 && !q.is_zero() && bound <= 8.0);
        let f = PQForm::at_origin(p, q).unwrap();
        let straight = pq_eval(&f, z, None).unwrap();
        let detour = pq_eval(&f, z, Some(&[C64::new(0.0, 0.0), mid, z])).unwrap();
        prop_assert!(rel_close(straight, detour, 1e-9), "{straight} vs {detour}");
    }

    #[test]
    fn difference_quotient_matches_derivative(p in poly(3, 0.5), q in poly(2, 1.0), z in complex(2.0)) {
        prop_assume!(!q.is_zero());
        let f = PQForm::at_origin(p, q).unwrap();
        let h = 1e-5;
        let fd = (pq_eval(&f, z + h, None).unwrap() - pq_eval(&f, z - h, None).unwrap()) / (2.0 * h);
        let (d1, _) = pq_derivatives(&f, z);
        prop_assert!((fd - d1).norm() <= 1e-6 * d1.norm().max(1e-3), "{fd} vs {d1}");
    }

    #[test]
    fn approximant_derivative_is_the_power(p in poly(2, 1.0), q in poly(2, 1.0), z in complex(2.1), n in 1u32..=64) {
        prop_assume!(!q.is_zero() && z.norm() <= 3.0);
        let f = PQForm::at_origin(p.clone(), q.clone()).unwrap();
        let fn_ = approximant(&f, n).unwrap();
        let want = q.eval(z) * (C64::new(1.0, 0.0) + p.eval(z) / n as f64).powu(n);
        let got = fn_.derivative().eval(z);
        prop_assert!(rel_close(got, want, 1e-10), "n={n}: {got} vs {want}");
    }

    #[test]
    fn residues_are_integers(p in poly(3, 1.0), roots in prop::collection::vec((complex(2.0), 1usize..=3), 1..=3)) {
        let pts: Vec<C64> = roots.iter().map(|r| r.0).collect();
        prop_assume!(min_separation(&pts) >= 0.3);
        let q = CPoly::from_roots(&roots);
        let n = nonlinearity(&PQForm::at_origin(p.clone(), q).unwrap()).unwrap();
        for (z, m) in &n.poles {
            prop_assert!(m.round() >= 1.0 && (m - m.round()).abs() <= 1e-8, "residue {m} at {z}");
            let (_, want) = roots.iter().copied().min_by(|a, b| (a.0 - z).norm().total_cmp(&(b.0 - z).norm())).unwrap();
            prop_assert_eq!(m.round() as usize, want);
        }
        prop_assert!(n.poly_part.max_abs_diff(&p.derivative()) <= 1e-10);
    }

    #[test]
    fn approximant_census(p in poly(2, 1.0), q in poly(2, 1.0), n in prop::sample::select(vec![1u32, 2, 3, 4, 8])) {
        prop_assume!(!q.is_zero() && p.leading().norm() > 0.1 && q.leading().norm() > 0.1);
        let f = PQForm::at_origin(p, q).unwrap();
        let chart = Chart::approximant(f.clone(), n).unwrap();
        let count: usize = chart.critical_points().iter().map(|c| c.multiplicity).sum();
        prop_assert_eq!(count, f.d2() + n as usize * f.d1());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn monodromy_cycles_are_local_degrees(f in separated_polynomial(), seed in 0u64..1000) {
        let chart = Chart::new(PQForm::from_polynomial(&f).unwrap()).unwrap();
        let z0 = logrs::lifting::choose_generic_basevalue(&chart.singular_value_points(), seed).unwrap();
        let table = monodromy(&chart, z0, f.degree()).unwrap();
        prop_assert_eq!(table.points.len(), f.degree());
        for (k, &cv) in table.critical_values.iter().enumerate() {
            let shifted = &f - &CPoly::constant(cv);
            let mut degrees: Vec<usize> = poly_roots(&shifted).unwrap().iter().map(|r| r.multiplicity).collect();
            degrees.sort_unstable();
            prop_assert_eq!(cycle_lengths(&table.perms[k]), degrees);
        }
    }

    #[test]
    fn rays_stop_at_the_singular_value(f in separated_polynomial(), seed in 0u64..1000) {
        let chart = Chart::new(PQForm::from_polynomial(&f).unwrap()).unwrap();
        let z0 = logrs::lifting::choose_generic_basevalue(&chart.singular_value_points(), seed).unwrap();
        let w = base_sheet(&chart, z0).unwrap();
        let start = FiberPoint { location: w, sheet: 0 };
        for v in chart.singular_value_points() {
            let r = ray_classify(&chart, &start, (v - z0).arg()).unwrap();
            if r.kind == LiftKind::Terminated {
                let t = r.terminal.unwrap();
                prop_assert!((r.rho - (t.projection - z0).norm()).abs() <= 1e-7);
            }
        }
    }

    #[test]
    fn full_lifts_are_isometric_and_stable(f in separated_polynomial(), seed in 0u64..1000, theta in 0.0..std::f64::consts::TAU, len in 0.1..3.0) {
        let chart = Chart::new(PQForm::from_polynomial(&f).unwrap()).unwrap();
        let z0 = logrs::lifting::choose_generic_basevalue(&chart.singular_value_points(), seed).unwrap();
        let w = base_sheet(&chart, z0).unwrap();
        let start = FiberPoint { location: w, sheet: 0 };
        let b = z0 + C64::from_polar(len, theta);
        let r = lift_segment(&chart, &start, z0, b).unwrap();
        prop_assume!(r.kind == LiftKind::Full);
        let values: Vec<C64> = r.trace.iter().map(|&x| chart.value(x).unwrap()).collect();
        let length: f64 = values.windows(2).map(|p| (p[1] - p[0]).norm()).sum();
        prop_assert!((length - len).abs() <= 1e-8, "{length} vs {len}");
        let opts = LiftOptions { initial_step: LiftOptions::default().initial_step / 2.0, ..LiftOptions::default() };
        let finer = lift_segment_with(&chart, &start, z0, b, &opts).unwrap();
        prop_assert!((finer.end.unwrap() - r.end.unwrap()).norm() <= 1e-7);
    }

    #[test]
    fn polynomial_skeletons_are_valid_and_simply_connected(f in separated_polynomial(), seed in 0u64..1000) {
        let chart = Chart::new(PQForm::from_polynomial(&f).unwrap()).unwrap();
        let z0 = logrs::lifting::choose_generic_basevalue(&chart.singular_value_points(), seed).unwrap();
        let g = skeleton_build(&chart, z0, f.degree()).unwrap();
        prop_assert!(validate_graph(&g).is_empty(), "{:?}", validate_graph(&g));
        prop_assert_eq!(g.vertices.len(), f.degree());
        let ram = ram_cycles(&g).unwrap();
        let excess: usize = ram
            .iter()
            .map(|r| match r.order {
                Order::Finite(k) => k - 1,
                Order::Infinite => 0,
            })
            .sum();
        prop_assert_eq!(excess, f.degree() - 1);
        prop_assert_eq!(pi1_rank(&finite_completion(&g).unwrap()), 0);
    }

    #[test]
    fn counting_matches_degrees(p in poly(2, 1.0), roots in prop::collection::vec(complex(1.5), 0..=2)) {
        prop_assume!(p.degree() == 0 || p.leading().norm() > 0.3);
        prop_assume!(min_separation(&roots) >= 0.5);
        let q = CPoly::from_roots(&roots.iter().map(|&z| (z, 1)).collect::<Vec<_>>());
        let f = PQForm::at_origin(p.clone(), q.clone()).unwrap();
        let rd = ram_data(&f, None).unwrap();
        prop_assert_eq!(rd.d1, p.degree());
        prop_assert_eq!(rd.d2, q.degree());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn truncation_exhausts_and_stays_simply_connected(n in 1usize..=4, re in -0.9..0.9, im in 0.2..0.9) {
        let chart = Chart::new(exp_form()).unwrap();
        let g = skeleton_build(&chart, C64::new(re, im), 6).unwrap();
        let (v0, e0) = truncation_core(&g, n).unwrap();
        let (v1, e1) = truncation_core(&g, n + 1).unwrap();
        prop_assert!(v0.iter().all(|v| v1.contains(v)));
        prop_assert!(e0.iter().all(|e| e1.contains(e)));
        let t = truncate(&g, n).unwrap();
        prop_assert!(validate_graph(&t).is_empty());
        prop_assert_eq!(pi1_rank(&finite_completion(&t).unwrap()), 0);
        for r in 1..=n {
            prop_assert!(ball_embed(&t, &g, r), "n={n} r={r}");
        }
    }
}

/// Mesh-level invariants on one fixture with two order-2 points.
#[test]
fn mesh_invariants() {
    let chart = Chart::new(PQForm::at_origin(CPoly::zero(), CPoly::from_real(&[-1.0, 0.0, 1.0])).unwrap()).unwrap();
    let z0 = c(0.1, 0.9);
    let g = skeleton_build(&chart, z0, 3).unwrap();
    let cells = kn_cells(&g, Window::around(c(0.0, 0.0), 2.0), 0.05).unwrap();
    let mesh = &cells.mesh;
    let n = mesh.sample_count();

    // Every sample belongs to a cell.
    assert!(cells.owner[..n].iter().all(|&o| o != u32::MAX));

    // Distances satisfy the triangle inequality along every mesh edge.
    for a in 0..mesh.node_count() as u32 {
        for &(b, w) in mesh.neighbors(a) {
            assert!(cells.distance[b as usize] <= cells.distance[a as usize] + w + 1e-12);
        }
    }

    // τ is 1-Lipschitz for the angular weight of each mesh edge.
    let tau = tau_field(&cells, &SurfacePoint { star: g.base, z: z0 }).unwrap();
    let turn = |x: u32, y: u32, owner: u32| {
        let c = mesh.ram[owner as usize].projection;
        ((mesh.position(y) - c) / (mesh.position(x) - c)).arg().abs()
    };
    for a in 0..n as u32 {
        for &(b, _) in mesh.neighbors(a) {
            if !mesh.is_sample(b) {
                continue;
            }
            let omega = turn(a, b, cells.owner[a as usize]).min(turn(a, b, cells.owner[b as usize]));
            let (ta, tb) = (tau[a as usize], tau[b as usize]);
            assert!(
                tb <= ta + omega + 1e-12 && ta <= tb + omega + 1e-12,
                "edge {a}-{b}: {ta} vs {tb}, weight {omega}"
            );
        }
    }

    // n(θ) stays within 2·#ram plus one artifact per 10⁴ samples.
    let allowance = 2 * mesh.ram.len() + n.div_ceil(10_000);
    let top = tau[..n].iter().copied().filter(|t| t.is_finite()).fold(0.0, f64::max);
    for k in 1..20 {
        let theta = top * k as f64 / 20.0;
        assert!(level_components(&cells, &tau, theta) <= allowance);
    }
}
