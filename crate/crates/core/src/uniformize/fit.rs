use nalgebra::{DMatrix, DVector};
use serde_json::{json, Value};

use super::{pqform_to_json, RamData, UniformizeError};
use crate::numerics::{
    asymptotic_directions, asymptotic_radius, poly_roots, pq_eval_with, sector_limit, CPoly, PQForm, QuadOptions, C64,
};

#[derive(Clone, Copy, Debug)]
pub struct FitOptions {
    /// Converged when every residual row is at most this in modulus.
    pub tol: f64,
    pub max_iter: usize,
    /// Relative central-difference step.
    pub fd_step: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            tol: 1e-8,
            max_iter: 200,
            fd_step: 1e-6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FitResult {
    pub f: PQForm,
    /// Largest mismatch between achieved and target data.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl FitResult {
    pub fn to_json(&self) -> Value {
        json!({
            "pq": pqform_to_json(&self.f),
            "residual": self.residual,
            "iterations": self.iterations,
            "converged": self.converged,
        })
    }
}

const LAMBDA_MIN: f64 = 1e-8;
const LAMBDA_MAX: f64 = 1e2;

/// Quadrature for residuals fine enough that central differences at the
/// default step stay meaningful.
fn fit_quad() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-15,
        max_panels: 20_000,
    }
}

/// Unknowns: the zeros of a monic `Q` (multiplicities fixed) and all
/// coefficients of `P`, stacked as real and imaginary parts.
struct Model {
    mults: Vec<usize>,
    d1: usize,
    c0: C64,
}

impl Model {
    fn unpack(&self, x: &DVector<f64>) -> (Vec<C64>, Vec<C64>) {
        let c = |k: usize| C64::new(x[2 * k], x[2 * k + 1]);
        let roots = (0..self.mults.len()).map(c).collect();
        let p = (0..=self.d1).map(|k| c(self.mults.len() + k)).collect();
        (roots, p)
    }

    fn form(&self, x: &DVector<f64>) -> PQForm {
        let (roots, p) = self.unpack(x);
        let pairs: Vec<(C64, usize)> = roots.into_iter().zip(self.mults.iter().copied()).collect();
        let q = if pairs.is_empty() {
            CPoly::constant(C64::new(1.0, 0.0))
        } else {
            CPoly::from_roots(&pairs)
        };
        PQForm {
            p: CPoly::new(p),
            q,
            base_point: C64::new(0.0, 0.0),
            base_value: self.c0,
        }
    }
}

/// What the current parameters achieve.
struct Achieved {
    slope: C64,
    finite: Vec<C64>,
    infinite: Vec<C64>,
}

fn achieve(model: &Model, x: &DVector<f64>, radius: Option<f64>) -> Result<Achieved, UniformizeError> {
    let f = model.form(x);
    let (roots, _) = model.unpack(x);
    let opts = fit_quad();
    let finite = roots
        .iter()
        .map(|&z| pq_eval_with(&f, z, None, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut infinite = Vec::new();
    let dirs = asymptotic_directions(&f.p);
    if dirs.len() != model.d1 {
        // Leading coefficient of P vanished.
        return Err(UniformizeError::ShapeMismatch("degree of P dropped".into()));
    }
    if !dirs.is_empty() {
        let r = radius.unwrap_or_else(|| asymptotic_radius(&f, 1e-15));
        for theta in dirs {
            infinite.push(sector_limit(&f, theta, r, &opts)?.0);
        }
    }
    Ok(Achieved {
        slope: f.q.eval(C64::new(0.0, 0.0)) * f.p.coeff(0).exp(),
        finite,
        infinite,
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

/// Cheapest matching of `got` onto `want`, restricted to equal classes.
fn assign(got: &[C64], want: &[C64], class_got: &[usize], class_want: &[usize]) -> Vec<usize> {
    let n = got.len();
    let mut best = (f64::INFINITY, (0..n).collect::<Vec<_>>());
    if n > 8 {
        return best.1;
    }
    for perm in permutations(n) {
        // perm[k] = index in `got` matched to target k.
        if (0..n).any(|k| class_got[perm[k]] != class_want[k]) {
            continue;
        }
        let cost: f64 = (0..n).map(|k| (got[perm[k]] - want[k]).norm_sqr()).sum();
        if cost < best.0 {
            best = (cost, perm);
        }
    }
    best.1
}

struct Problem<'a> {
    model: Model,
    target: &'a RamData,
    slope: C64,
    target_classes: Vec<usize>,
}

impl Problem<'_> {
    fn assignment(&self, a: &Achieved) -> (Vec<usize>, Vec<usize>) {
        let want: Vec<C64> = self.target.finite.iter().map(|p| p.pos).collect();
        let fin = assign(&a.finite, &want, &self.model.mults, &self.target_classes);
        let zeros = vec![0; a.infinite.len()];
        let inf = assign(&a.infinite, &self.target.infinite, &zeros, &zeros);
        (fin, inf)
    }

    fn residual(&self, a: &Achieved, matching: &(Vec<usize>, Vec<usize>)) -> Vec<C64> {
        let mut r = vec![a.slope - self.slope];
        for (k, p) in self.target.finite.iter().enumerate() {
            r.push(a.finite[matching.0[k]] - p.pos);
        }
        for (k, &z) in self.target.infinite.iter().enumerate() {
            r.push(a.infinite[matching.1[k]] - z);
        }
        r
    }
}

fn realify(r: &[C64]) -> DVector<f64> {
    DVector::from_iterator(2 * r.len(), r.iter().flat_map(|z| [z.re, z.im]))
}

fn max_row(r: &[C64]) -> f64 {
    r.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Least-squares fit of `(P, Q)` to prescribed ramification data with
/// `F(0)` and `F'(0)` held at `normalization`.
pub fn fit_pq(target: &RamData, init: &PQForm, normalization: (C64, C64)) -> Result<FitResult, UniformizeError> {
    fit_pq_with(target, init, normalization, &FitOptions::default())
}

pub fn fit_pq_with(
    target: &RamData,
    init: &PQForm,
    normalization: (C64, C64),
    opts: &FitOptions,
) -> Result<FitResult, UniformizeError> {
    // Monic Q; its leading coefficient moves into the constant term of P.
    let (roots, mults): (Vec<C64>, Vec<usize>) = if init.q.degree() >= 1 {
        poly_roots(&init.q)?
            .iter()
            .map(|r| (r.location, r.multiplicity))
            .unzip()
    } else {
        (Vec::new(), Vec::new())
    };
    let mut have: Vec<usize> = mults.clone();
    let mut want: Vec<usize> = target.finite.iter().map(|p| p.order - 1).collect();
    have.sort_unstable();
    want.sort_unstable();
    if have != want {
        return Err(UniformizeError::ShapeMismatch(format!(
            "Q has zero multiplicities {have:?}, target needs {want:?}"
        )));
    }
    if init.d1() != target.infinite.len() {
        return Err(UniformizeError::ShapeMismatch(format!(
            "P has degree {}, target has {} asymptotic values",
            init.d1(),
            target.infinite.len()
        )));
    }
    let d1 = init.d1();
    let mut p: Vec<C64> = (0..=d1).map(|k| init.p.coeff(k)).collect();
    p[0] += init.q.leading().ln();

    let model = Model {
        mults,
        d1,
        c0: normalization.0,
    };
    let problem = Problem {
        target_classes: target.finite.iter().map(|p| p.order - 1).collect(),
        model,
        target,
        slope: normalization.1,
    };
    let mut x = DVector::from_iterator(
        2 * (roots.len() + d1 + 1),
        roots.iter().chain(p.iter()).flat_map(|z| [z.re, z.im]),
    );

    let a0 = achieve(&problem.model, &x, None)?;
    let mut r = problem.residual(&a0, &problem.assignment(&a0));
    let mut lambda = 1e-3;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        if max_row(&r) <= opts.tol {
            break;
        }
        iterations += 1;
        // Freeze the sector radius across the Jacobian so all columns see
        // the same truncation.
        let radius = if d1 > 0 {
            Some(1.2 * asymptotic_radius(&problem.model.form(&x), 1e-15))
        } else {
            None
        };
        let n = x.len();
        let m = 2 * r.len();
        let mut jac = DMatrix::<f64>::zeros(m, n);
        for j in 0..n {
            let h = opts.fd_step * x[j].abs().max(1.0);
            let mut xp = x.clone();
            xp[j] += h;
            let mut xm = x.clone();
            xm[j] -= h;
            // Re-match each side: the order of asymptotic directions can
            // jump across the branch cut of arg under a tiny perturbation.
            let ap = achieve(&problem.model, &xp, radius)?;
            let am = achieve(&problem.model, &xm, radius)?;
            let rp = realify(&problem.residual(&ap, &problem.assignment(&ap)));
            let rm = realify(&problem.residual(&am, &problem.assignment(&am)));
            jac.set_column(j, &((rp - rm) / (2.0 * h)));
        }
        let sv = jac.singular_values();
        let (smax, smin) = (sv.max(), sv.min());
        if smax == 0.0 || smin / smax < 1e-14 {
            return Err(UniformizeError::SingularJacobian {
                condition: if smin == 0.0 { f64::INFINITY } else { smax / smin },
            });
        }
        let rv = realify(&r);
        let jtj = jac.transpose() * &jac;
        let g = jac.transpose() * &rv;
        let cost = rv.norm_squared();
        let mut accepted = false;
        loop {
            let lhs = &jtj + DMatrix::<f64>::identity(n, n) * lambda;
            let Some(step) = lhs.lu().solve(&(-&g)) else {
                return Err(UniformizeError::SingularJacobian {
                    condition: f64::INFINITY,
                });
            };
            let xn = &x + step;
            if let Ok(an) = achieve(&problem.model, &xn, None) {
                let rn = problem.residual(&an, &problem.assignment(&an));
                if realify(&rn).norm_squared() < cost {
                    x = xn;
                    r = rn;
                    lambda = (lambda / 10.0).max(LAMBDA_MIN);
                    accepted = true;
                    break;
                }
            }
            if lambda >= LAMBDA_MAX {
                break;
            }
            lambda = (lambda * 10.0).min(LAMBDA_MAX);
        }
        if !accepted {
            break;
        }
    }
    let residual = max_row(&r);
    if residual > opts.tol {
        return Err(UniformizeError::NoConvergence { iterations, residual });
    }
    Ok(FitResult {
        f: problem.model.form(&x),
        residual,
        iterations,
        converged: true,
    })
}
