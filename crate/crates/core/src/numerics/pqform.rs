use std::f64::consts::PI;

use super::quad::{integrate_polyline, integrate_segment, QuadOptions};
use super::roots::poly_roots;
use super::{CPoly, NumericsError, C64};

/// An entire function `F(z) = c0 + ∫_{z_b}^z Q(t) e^{P(t)} dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct PQForm {
    pub p: CPoly,
    pub q: CPoly,
    pub base_point: C64,
    pub base_value: C64,
}

impl PQForm {
    pub fn new(p: CPoly, q: CPoly, base_point: C64, base_value: C64) -> Result<Self, NumericsError> {
        if q.is_zero() {
            return Err(NumericsError::ZeroIntegrand);
        }
        Ok(PQForm {
            p,
            q,
            base_point,
            base_value,
        })
    }

    /// `F` with `F(0) = 0`.
    pub fn at_origin(p: CPoly, q: CPoly) -> Result<Self, NumericsError> {
        Self::new(p, q, C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    }

    /// A polynomial `F` written as `P = 0`, `Q = F'`.
    pub fn from_polynomial(f: &CPoly) -> Result<Self, NumericsError> {
        Self::new(CPoly::zero(), f.derivative(), C64::new(0.0, 0.0), f.coeff(0))
    }

    /// Number of infinite-order ramification points, `deg P`.
    pub fn d1(&self) -> usize {
        if self.p.is_zero() {
            0
        } else {
            self.p.degree()
        }
    }

    /// Number of finite-order ramification points with multiplicity, `deg Q`.
    pub fn d2(&self) -> usize {
        self.q.degree()
    }

    /// `e^{P}` is constant, so `F` is a polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.d1() == 0
    }

    pub fn integrand(&self, z: C64) -> C64 {
        self.q.eval(z) * self.p.eval(z).exp()
    }
}

/// `F(z)`, integrating along `path` (which must run from the base point to
/// `z`) or along the straight segment.
pub fn pq_eval(f: &PQForm, z: C64, path: Option<&[C64]>) -> Result<C64, NumericsError> {
    pq_eval_with(f, z, path, &QuadOptions::default())
}

pub fn pq_eval_with(f: &PQForm, z: C64, path: Option<&[C64]>, opts: &QuadOptions) -> Result<C64, NumericsError> {
    if f.is_polynomial() {
        let anti = f.q.integral(C64::new(0.0, 0.0));
        let scale = f.p.coeff(0).exp();
        return Ok(f.base_value + scale * (anti.eval(z) - anti.eval(f.base_point)));
    }
    let integral = match path {
        Some(pts) => {
            if pts.len() < 2 || pts[0] != f.base_point || *pts.last().unwrap() != z {
                return Err(NumericsError::BadPath);
            }
            integrate_polyline(|t| f.integrand(t), pts, opts)?
        }
        None => integrate_segment(|t| f.integrand(t), f.base_point, z, opts)?,
    };
    Ok(f.base_value + integral)
}

/// `(F'(z), F''(z)) = (Q e^P, (Q' + Q P') e^P)`.
pub fn pq_derivatives(f: &PQForm, z: C64) -> (C64, C64) {
    let e = f.p.eval(z).exp();
    let q = f.q.eval(z);
    let first = q * e;
    let second = (f.q.derivative().eval(z) + q * f.p.derivative().eval(z)) * e;
    (first, second)
}

/// Largest `n · deg P` the exact expansion of `Q (1 + P/n)^n` accepts.
const APPROXIMANT_MAX_DEGREE: usize = 4096;

/// The polynomial `F_n` with `F_n' = Q (1 + P/n)^n` and `F_n(z_b) = c0`.
pub fn approximant(f: &PQForm, n: u32) -> Result<CPoly, NumericsError> {
    if n == 0 {
        return Err(NumericsError::OverflowGuard);
    }
    if f.d1() * n as usize > APPROXIMANT_MAX_DEGREE {
        return Err(NumericsError::OverflowGuard);
    }
    let base = &CPoly::constant(C64::new(1.0, 0.0)) + &f.p.scale(C64::new(1.0 / n as f64, 0.0));
    let deriv = &f.q * &base.pow(n);
    if deriv
        .coeffs()
        .iter()
        .any(|c| !c.re.is_finite() || !c.im.is_finite() || c.norm() > 1e300)
    {
        return Err(NumericsError::OverflowGuard);
    }
    let anti = deriv.integral(C64::new(0.0, 0.0));
    let shift = f.base_value - anti.eval(f.base_point);
    Ok(&anti + shift)
}

/// Directions of steepest decay of `Re P`: `arg(a) + d θ = π (mod 2π)` for
/// leading coefficient `a`. Sorted ascending in `[0, 2π)`.
pub fn asymptotic_directions(p: &CPoly) -> Vec<f64> {
    if p.is_zero() || p.degree() == 0 {
        return Vec::new();
    }
    let d = p.degree() as f64;
    let arg = p.leading().arg();
    let mut out: Vec<f64> = (0..p.degree())
        .map(|j| ((PI - arg + 2.0 * PI * j as f64) / d).rem_euclid(2.0 * PI))
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Upper estimate of `|∫_R^∞ Q e^P dt|` along the ray at angle `theta`.
pub fn tail_bound(f: &PQForm, theta: f64, radius: f64) -> f64 {
    let z = C64::from_polar(radius, theta);
    let dp = f.p.derivative().eval(z).norm();
    if dp == 0.0 {
        return f64::INFINITY;
    }
    let decay = f.p.eval(z).re;
    // Factor 2 absorbs the polynomial growth of Q against P' on the tail.
    2.0 * f.q.eval(z).norm() * decay.exp() / dp
}

/// Smallest radius (doubling search) at which `Re P < -40` and the tail is
/// below `target` along every asymptotic direction.
pub fn asymptotic_radius(f: &PQForm, target: f64) -> f64 {
    let dirs = asymptotic_directions(&f.p);
    if dirs.is_empty() {
        return 0.0;
    }
    let a = f.p.leading().norm();
    let mut r = (40.0 / a).powf(1.0 / f.d1() as f64).max(1.0);
    for _ in 0..60 {
        let ok = dirs
            .iter()
            .all(|&t| f.p.eval(C64::from_polar(r, t)).re < -40.0 && tail_bound(f, t, r) < target);
        if ok {
            return r;
        }
        r *= 1.25;
    }
    r
}

/// Limit of `F` along the ray at angle `theta`, truncated at `radius`, with
/// the tail estimate. The path runs `z_b → 0 → R e^{iθ}`.
pub fn sector_limit(f: &PQForm, theta: f64, radius: f64, opts: &QuadOptions) -> Result<(C64, f64), NumericsError> {
    let end = C64::from_polar(radius, theta);
    let origin = C64::new(0.0, 0.0);
    let path: Vec<C64> = if f.base_point == origin {
        vec![origin, end]
    } else {
        vec![f.base_point, origin, end]
    };
    let value = f.base_value + integrate_polyline(|t| f.integrand(t), &path, opts)?;
    Ok((value, tail_bound(f, theta, radius)))
}

/// How `F'` is assembled from `P` and `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    /// `F' = Q e^P`.
    Exp,
    /// `F' = Q (1 + P/n)^n`, the polynomial approximants.
    Power(u32),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoint {
    pub location: C64,
    /// Multiplicity as a zero of `F'`; the local degree is one more.
    pub multiplicity: usize,
    pub value: C64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticTract {
    pub direction: f64,
    pub value: C64,
}

/// A critical or asymptotic value together with what lies over it.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularValue {
    pub value: C64,
    pub critical: Vec<usize>,
    pub asymptotic: Vec<usize>,
}

/// A concrete chart map `π = F` prepared for lifting: derivatives, critical
/// points and singular values.
#[derive(Clone, Debug)]
pub struct Chart {
    form: PQForm,
    kernel: Kernel,
    dq: CPoly,
    dp: CPoly,
    quad: QuadOptions,
    critical: Vec<CriticalPoint>,
    asymptotic: Vec<AsymptoticTract>,
    singular: Vec<SingularValue>,
}

impl Chart {
    pub fn new(form: PQForm) -> Result<Self, NumericsError> {
        Self::with_options(form, QuadOptions::default())
    }

    pub fn with_options(form: PQForm, quad: QuadOptions) -> Result<Self, NumericsError> {
        let mut chart = Chart::bare(form, Kernel::Exp, quad)?;
        let zeros = if chart.form.q.degree() >= 1 {
            poly_roots(&chart.form.q)?
                .entries
                .into_iter()
                .map(|r| (r.location, r.multiplicity))
                .collect()
        } else {
            Vec::new()
        };
        chart.set_critical(zeros)?;
        if chart.form.d1() > 0 {
            let radius = asymptotic_radius(&chart.form, 1e-14);
            let mut tracts = Vec::new();
            for theta in asymptotic_directions(&chart.form.p) {
                let (value, _) = sector_limit(&chart.form, theta, radius, &chart.quad)?;
                tracts.push(AsymptoticTract {
                    direction: theta,
                    value,
                });
            }
            chart.asymptotic = tracts;
        }
        chart.group_singular_values();
        Ok(chart)
    }

    /// The chart of the polynomial approximant `F_n`, with its critical
    /// points taken from the factorization `Q (1 + P/n)^n`.
    pub fn approximant(form: PQForm, n: u32) -> Result<Self, NumericsError> {
        if n == 0 {
            return Err(NumericsError::OverflowGuard);
        }
        let quad = QuadOptions::default();
        let mut chart = Chart::bare(form, Kernel::Power(n), quad)?;
        let mut zeros: Vec<(C64, usize)> = Vec::new();
        if chart.form.q.degree() >= 1 {
            zeros.extend(
                poly_roots(&chart.form.q)?
                    .entries
                    .into_iter()
                    .map(|r| (r.location, r.multiplicity)),
            );
        }
        if chart.form.d1() >= 1 {
            let shifted = &chart.form.p + C64::new(n as f64, 0.0);
            for r in poly_roots(&shifted)?.entries {
                zeros.push((r.location, r.multiplicity * n as usize));
            }
        } else if (C64::new(1.0, 0.0) + chart.form.p.coeff(0) / n as f64).norm() == 0.0 {
            return Err(NumericsError::ZeroIntegrand);
        }
        // Roots of Q landing on roots of P + n merge.
        let mut merged: Vec<(C64, usize)> = Vec::new();
        for (z, m) in zeros {
            match merged
                .iter_mut()
                .find(|(w, _)| (*w - z).norm() <= 1e-9 * (1.0 + z.norm()))
            {
                Some(entry) => entry.1 += m,
                None => merged.push((z, m)),
            }
        }
        chart.set_critical(merged)?;
        chart.group_singular_values();
        Ok(chart)
    }

    fn bare(form: PQForm, kernel: Kernel, quad: QuadOptions) -> Result<Self, NumericsError> {
        if form.q.is_zero() {
            return Err(NumericsError::ZeroIntegrand);
        }
        Ok(Chart {
            dq: form.q.derivative(),
            dp: form.p.derivative(),
            form,
            kernel,
            quad,
            critical: Vec::new(),
            asymptotic: Vec::new(),
            singular: Vec::new(),
        })
    }

    fn set_critical(&mut self, zeros: Vec<(C64, usize)>) -> Result<(), NumericsError> {
        let mut crit = Vec::with_capacity(zeros.len());
        for (z, m) in zeros {
            crit.push(CriticalPoint {
                location: z,
                multiplicity: m,
                value: self.value(z)?,
            });
        }
        self.critical = crit;
        Ok(())
    }

    fn group_singular_values(&mut self) {
        let mut groups: Vec<SingularValue> = Vec::new();
        let close = |a: C64, b: C64| (a - b).norm() <= 1e-9 * (1.0 + a.norm());
        for (i, c) in self.critical.iter().enumerate() {
            match groups.iter_mut().find(|g| close(g.value, c.value)) {
                Some(g) => g.critical.push(i),
                None => groups.push(SingularValue {
                    value: c.value,
                    critical: vec![i],
                    asymptotic: Vec::new(),
                }),
            }
        }
        for (i, a) in self.asymptotic.iter().enumerate() {
            match groups.iter_mut().find(|g| close(g.value, a.value)) {
                Some(g) => g.asymptotic.push(i),
                None => groups.push(SingularValue {
                    value: a.value,
                    critical: Vec::new(),
                    asymptotic: vec![i],
                }),
            }
        }
        groups.sort_by(|a, b| {
            (a.value.re, a.value.im)
                .partial_cmp(&(b.value.re, b.value.im))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        self.singular = groups;
    }

    pub fn form(&self) -> &PQForm {
        &self.form
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn quad_options(&self) -> &QuadOptions {
        &self.quad
    }

    pub fn critical_points(&self) -> &[CriticalPoint] {
        &self.critical
    }

    pub fn asymptotic_tracts(&self) -> &[AsymptoticTract] {
        &self.asymptotic
    }

    pub fn singular_values(&self) -> &[SingularValue] {
        &self.singular
    }

    pub fn singular_value_points(&self) -> Vec<C64> {
        self.singular.iter().map(|s| s.value).collect()
    }

    fn kernel_at(&self, p: C64) -> C64 {
        match self.kernel {
            Kernel::Exp => p.exp(),
            Kernel::Power(n) => (C64::new(1.0, 0.0) + p / n as f64).powu(n),
        }
    }

    /// `F'(z)`.
    pub fn derivative(&self, z: C64) -> C64 {
        self.form.q.eval(z) * self.kernel_at(self.form.p.eval(z))
    }

    /// `(F'(z), F''(z))`.
    pub fn derivatives(&self, z: C64) -> (C64, C64) {
        let p = self.form.p.eval(z);
        let q = self.form.q.eval(z);
        let dq = self.dq.eval(z);
        let dp = self.dp.eval(z);
        match self.kernel {
            Kernel::Exp => {
                let e = p.exp();
                (q * e, (dq + q * dp) * e)
            }
            Kernel::Power(n) => {
                let base = C64::new(1.0, 0.0) + p / n as f64;
                let lower = base.powu(n - 1);
                (q * lower * base, (dq * base + q * dp) * lower)
            }
        }
    }

    /// `Re log|kernel|`, the quantity that tends to `-∞` along an
    /// infinite-order approach.
    pub fn log_kernel_modulus(&self, z: C64) -> f64 {
        let p = self.form.p.eval(z);
        match self.kernel {
            Kernel::Exp => p.re,
            Kernel::Power(n) => n as f64 * (C64::new(1.0, 0.0) + p / n as f64).norm().ln(),
        }
    }

    /// `∫_a^b F'(t) dt` along the straight segment.
    pub fn increment(&self, a: C64, b: C64) -> Result<C64, NumericsError> {
        if self.kernel == Kernel::Exp && self.form.is_polynomial() {
            let anti = self.form.q.integral(C64::new(0.0, 0.0));
            return Ok(self.form.p.coeff(0).exp() * (anti.eval(b) - anti.eval(a)));
        }
        integrate_segment(|t| self.derivative(t), a, b, &self.quad)
    }

    /// `F(z)` along the straight segment from the base point.
    pub fn value(&self, z: C64) -> Result<C64, NumericsError> {
        Ok(self.form.base_value + self.increment(self.form.base_point, z)?)
    }

    /// Distance from `w` to the nearest critical point.
    pub fn critical_distance(&self, w: C64) -> f64 {
        self.critical
            .iter()
            .map(|c| (c.location - w).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Coefficient `k` in `F(w) - F(c) ≈ k (w - c)^{m+1}` at a critical point.
    pub fn local_coefficient(&self, idx: usize) -> C64 {
        let c = &self.critical[idx];
        let m = c.multiplicity;
        // Taylor coefficient of F' of order m, divided by (m + 1).
        let h = 1e-3 * (1.0 + c.location.norm()).min(1.0);
        // Contour average: a_m = (1/N) Σ F'(c + h ω^j) / (h ω^j)^m.
        let n = 64;
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..n {
            let w = C64::from_polar(h, 2.0 * PI * j as f64 / n as f64);
            acc += self.derivative(c.location + w) / w.powu(m as u32);
        }
        acc / n as f64 / (m + 1) as f64
    }
}
