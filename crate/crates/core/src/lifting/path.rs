//! Predictor-corrector continuation of `F(γ(s)) = a + s u` through the chart.

use super::{FiberPoint, LiftError, LiftKind, LiftResult, Order, RamDatum};
use crate::numerics::{Chart, C64};

/// Tunables for path tracking.
#[derive(Clone, Copy, Debug)]
pub struct LiftOptions {
    /// Initial step as a fraction of the segment length.
    pub initial_step: f64,
    /// Steps below `min_step * (1 + L)` abort with `StepCollapse`.
    pub min_step: f64,
    /// Remaining distance at which an approach to a singular value is judged.
    pub stop_distance: f64,
    /// A singular value counts as lying on a segment within this distance
    /// (relative to `1 + L + |v|`).
    pub hit_tolerance: f64,
    /// Largest ray length `ray_classify` will explore.
    pub ray_budget: f64,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions {
            initial_step: 1e-2,
            min_step: 1e-13,
            stop_distance: 1e-12,
            hit_tolerance: 1e-9,
            ray_budget: 1e6,
        }
    }
}

/// Current lift point and the tracked value `F(w)`.
#[derive(Clone, Copy, Debug)]
struct State {
    w: C64,
    fw: C64,
}

struct Tracker<'a> {
    chart: &'a Chart,
    opts: LiftOptions,
    trace: Vec<C64>,
}

#[derive(Clone, Copy, Debug)]
struct Event {
    s: f64,
    group: usize,
}

impl<'a> Tracker<'a> {
    /// One predictor step to `target` followed by Newton correction. `None`
    /// asks the caller for a shorter step.
    fn try_step(&self, st: State, target: C64) -> Result<Option<State>, LiftError> {
        let (d1, d2) = self.chart.derivatives(st.w);
        if d1.norm() == 0.0 {
            return Ok(None);
        }
        let dw = (target - st.fw) / d1;
        let curvature_room = if d2.norm() == 0.0 {
            f64::INFINITY
        } else {
            (d1 / d2).norm()
        };
        let limit = 0.3 * curvature_room.min(self.chart.critical_distance(st.w));
        if dw.norm() > limit {
            return Ok(None);
        }
        let mut w = st.w + dw;
        let mut fw = st.fw + self.chart.increment(st.w, w)?;
        let mut prev = f64::INFINITY;
        let scale = 1.0 + target.norm();
        for _ in 0..10 {
            let d = self.chart.derivative(w);
            if d.norm() == 0.0 {
                return Ok(None);
            }
            let delta = (target - fw) / d;
            let size = delta.norm();
            if size > 0.5 * prev && size > 1e-15 * (1.0 + w.norm()) {
                return Ok(None);
            }
            prev = size;
            if size == 0.0 {
                break;
            }
            fw += self.chart.increment(w, w + delta)?;
            w += delta;
            if size <= 1e-15 * (1.0 + w.norm()) || (target - fw).norm() <= 1e-15 * scale {
                break;
            }
        }
        if (target - fw).norm() > 1e-11 * scale || !w.re.is_finite() || !w.im.is_finite() {
            return Ok(None);
        }
        Ok(Some(State { w, fw }))
    }

    /// Regular continuation from parameter `s` to `s_end` along `a + s u`.
    #[allow(clippy::too_many_arguments)]
    fn advance(
        &mut self,
        mut st: State,
        a: C64,
        u: C64,
        s: &mut f64,
        s_end: f64,
        h: &mut f64,
        scale: f64,
    ) -> Result<State, LiftError> {
        while *s < s_end {
            let s_next = (*s + *h).min(s_end);
            match self.try_step(st, a + u * s_next)? {
                Some(next) => {
                    st = next;
                    *s = s_next;
                    self.trace.push(st.w);
                    *h = (*h * 2.0).min(scale);
                }
                None => {
                    *h *= 0.5;
                    if *h < self.opts.min_step * (1.0 + scale) {
                        return Err(LiftError::StepCollapse { at: a + u * *s });
                    }
                }
            }
        }
        Ok(st)
    }

    /// Singular values lying on `a + s u`, `0 < s <= len`.
    fn events(&self, a: C64, u: C64, len: f64) -> Result<Vec<Event>, LiftError> {
        let mut out = Vec::new();
        for (k, sv) in self.chart.singular_values().iter().enumerate() {
            let rel = (sv.value - a) * u.conj();
            let tol = self.opts.hit_tolerance * (1.0 + len + sv.value.norm());
            if rel.im.abs() > tol {
                continue;
            }
            if rel.re.abs() <= tol {
                return Err(LiftError::StartOnSingularValue { value: sv.value });
            }
            if rel.re > 0.0 && rel.re <= len + tol {
                out.push(Event { s: rel.re, group: k });
            }
        }
        out.sort_by(|x, y| x.s.total_cmp(&y.s));
        Ok(out)
    }

    /// Decide whether the lift ends at the singular value the path is
    /// approaching. `history` holds `log|kernel|` along the halving sequence.
    fn classify(&self, st: State, remaining: f64, group: usize, history: &[f64]) -> Option<RamDatum> {
        let sv = &self.chart.singular_values()[group];
        for &idx in &sv.critical {
            let cp = &self.chart.critical_points()[idx];
            let k = self.chart.local_coefficient(idx).norm();
            let model = (remaining / k).powf(1.0 / (cp.multiplicity + 1) as f64);
            if (st.w - cp.location).norm() <= 10.0 * model + 1e-12 {
                return Some(RamDatum {
                    projection: sv.value,
                    order: Order::Finite(cp.multiplicity + 1),
                    preimage: Some(cp.location),
                });
            }
        }
        if !sv.asymptotic.is_empty() && history.len() > 10 {
            let tail = &history[history.len() - 11..];
            let mean_drop = (tail[0] - tail[10]) / 10.0;
            if mean_drop >= 0.3 && history[history.len() - 1] < history[0] - 10.0 {
                return Some(RamDatum {
                    projection: sv.value,
                    order: Order::Infinite,
                    preimage: None,
                });
            }
        }
        None
    }

    fn run(&mut self, start: State, a: C64, b: C64) -> Result<(LiftResult, State), LiftError> {
        let len = (b - a).norm();
        if len == 0.0 {
            return Ok((
                LiftResult {
                    kind: LiftKind::Full,
                    rho: 0.0,
                    terminal: None,
                    trace: vec![start.w],
                    end: Some(start.w),
                },
                start,
            ));
        }
        let u = (b - a) / len;
        let events = self.events(a, u, len)?;
        let mut st = start;
        let mut s = 0.0;
        let mut h = self.opts.initial_step * len;
        self.trace.push(st.w);

        for ev in &events {
            let stop = self.opts.stop_distance * (1.0 + len + ev.s);
            let approach = 0.5 * (ev.s - s).min(1.0);
            if ev.s - approach > s {
                st = self.advance(st, a, u, &mut s, ev.s - approach, &mut h, len)?;
            }
            let mut history = vec![self.chart.log_kernel_modulus(st.w)];
            let mut remaining = ev.s - s;
            while remaining > stop {
                remaining *= 0.5;
                let mut hh = remaining;
                st = self.advance(st, a, u, &mut s, ev.s - remaining, &mut hh, len)?;
                history.push(self.chart.log_kernel_modulus(st.w));
            }
            if let Some(datum) = self.classify(st, ev.s - s, ev.group, &history) {
                let result = LiftResult {
                    kind: LiftKind::Terminated,
                    rho: ev.s,
                    terminal: Some(datum),
                    trace: std::mem::take(&mut self.trace),
                    end: None,
                };
                return Ok((result, st));
            }
            // Regular sheet: step across.
            let mut hh = 2.0 * (ev.s - s);
            st = self.advance(st, a, u, &mut s, (ev.s + stop).min(len), &mut hh, len)?;
            h = h.max(hh);
        }
        if s < len {
            st = self.advance(st, a, u, &mut s, len, &mut h, len)?;
        }
        Ok((
            LiftResult {
                kind: LiftKind::Full,
                rho: len,
                terminal: None,
                trace: std::mem::take(&mut self.trace),
                end: Some(st.w),
            },
            st,
        ))
    }
}

/// A lift in progress: a point in the domain of `F` and its tracked value.
#[derive(Clone, Copy, Debug)]
pub struct LiftPoint {
    pub w: C64,
    pub value: C64,
}

/// Lift the polyline `pts` (in the base plane) starting at `start`, whose
/// value must equal `pts[0]`. Stops at the first termination; `rho` is the
/// base-plane length traversed.
pub fn lift_polyline(
    chart: &Chart,
    start: LiftPoint,
    pts: &[C64],
    opts: &LiftOptions,
) -> Result<LiftResult, LiftError> {
    let mut st = State {
        w: start.w,
        fw: start.value,
    };
    let mut total = 0.0;
    let mut trace = vec![st.w];
    for seg in pts.windows(2) {
        let mut tracker = Tracker {
            chart,
            opts: *opts,
            trace: Vec::new(),
        };
        let (res, next) = tracker.run(st, seg[0], seg[1])?;
        trace.extend(res.trace.into_iter().skip(1));
        total += res.rho;
        if res.kind == LiftKind::Terminated {
            return Ok(LiftResult {
                kind: LiftKind::Terminated,
                rho: total,
                terminal: res.terminal,
                trace,
                end: None,
            });
        }
        st = next;
        st.fw = seg[1];
    }
    Ok(LiftResult {
        kind: LiftKind::Full,
        rho: total,
        terminal: None,
        trace,
        end: Some(st.w),
    })
}

/// Check `F(start) = a` and return the tracked start.
fn anchored(chart: &Chart, start: &FiberPoint, a: C64) -> Result<LiftPoint, LiftError> {
    let value = chart.value(start.location)?;
    if (value - a).norm() > 1e-6 * (1.0 + a.norm()) {
        return Err(LiftError::StartMismatch { value, expected: a });
    }
    Ok(LiftPoint {
        w: start.location,
        value: a,
    })
}

/// Lift the straight segment `[a, b]` from `start` (which must lie over `a`).
pub fn lift_segment(chart: &Chart, start: &FiberPoint, a: C64, b: C64) -> Result<LiftResult, LiftError> {
    lift_segment_with(chart, start, a, b, &LiftOptions::default())
}

pub fn lift_segment_with(
    chart: &Chart,
    start: &FiberPoint,
    a: C64,
    b: C64,
    opts: &LiftOptions,
) -> Result<LiftResult, LiftError> {
    let p = anchored(chart, start, a)?;
    lift_polyline(chart, p, &[a, b], opts)
}

/// Classify the maximal unbroken geodesic leaving `start` in direction
/// `theta`: terminated at a ramification point at finite distance, or
/// unobstructed (`rho = ∞`).
pub fn ray_classify(chart: &Chart, start: &FiberPoint, theta: f64) -> Result<LiftResult, LiftError> {
    ray_classify_with(chart, start, theta, &LiftOptions::default())
}

pub fn ray_classify_with(
    chart: &Chart,
    start: &FiberPoint,
    theta: f64,
    opts: &LiftOptions,
) -> Result<LiftResult, LiftError> {
    let a = chart.value(start.location)?;
    let p = LiftPoint {
        w: start.location,
        value: a,
    };
    ray_from(chart, p, theta, opts)
}

/// `ray_classify` from an already tracked point.
pub fn ray_from(chart: &Chart, p: LiftPoint, theta: f64, opts: &LiftOptions) -> Result<LiftResult, LiftError> {
    let a = p.value;
    let u = C64::from_polar(1.0, theta);
    let mut farthest: f64 = 0.0;
    for sv in chart.singular_values() {
        let rel = (sv.value - a) * u.conj();
        let tol = opts.hit_tolerance * (1.0 + rel.re.abs() + sv.value.norm());
        if rel.im.abs() <= tol && rel.re > 0.0 {
            farthest = farthest.max(rel.re);
        }
    }
    if farthest > opts.ray_budget {
        return Err(LiftError::BudgetExceeded {
            budget: opts.ray_budget,
        });
    }
    if farthest == 0.0 {
        return Ok(LiftResult {
            kind: LiftKind::Full,
            rho: f64::INFINITY,
            terminal: None,
            trace: vec![p.w],
            end: None,
        });
    }
    let len = farthest + 0.5 * (1.0 + farthest);
    let mut res = lift_polyline(chart, p, &[a, a + u * len], opts)?;
    if res.kind == LiftKind::Full {
        res.rho = f64::INFINITY;
        res.end = None;
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{CPoly, PQForm};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn square() -> Chart {
        Chart::new(PQForm::at_origin(CPoly::zero(), CPoly::from_real(&[0.0, 2.0])).unwrap()).unwrap()
    }

    fn exp_chart() -> Chart {
        Chart::new(PQForm::new(CPoly::identity(), CPoly::from_real(&[1.0]), c(0.0, 0.0), c(1.0, 0.0)).unwrap()).unwrap()
    }

    fn fiber(w: C64) -> FiberPoint {
        FiberPoint { location: w, sheet: 0 }
    }

    #[test]
    fn square_toward_critical_value_terminates() {
        let r = lift_segment(&square(), &fiber(c(1.0, 0.0)), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(r.kind, LiftKind::Terminated);
        assert!((r.rho - 1.0).abs() < 1e-12);
        let t = r.terminal.unwrap();
        assert_eq!(t.order, Order::Finite(2));
        assert!(t.projection.norm() < 1e-14);
    }

    #[test]
    fn square_away_from_critical_value_is_full() {
        let r = lift_segment(&square(), &fiber(c(1.0, 0.0)), c(1.0, 0.0), c(4.0, 0.0)).unwrap();
        assert_eq!(r.kind, LiftKind::Full);
        assert!((r.end.unwrap() - c(2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn exp_toward_zero_escapes_to_infinite_order() {
        let r = lift_segment(&exp_chart(), &fiber(c(0.0, 0.0)), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(r.kind, LiftKind::Terminated);
        assert!((r.rho - 1.0).abs() < 1e-12);
        assert_eq!(r.terminal.unwrap().order, Order::Infinite);
        // Explicit lift log(1 - t): real part heads to -∞.
        assert!(r.trace.last().unwrap().re < -20.0);
    }

    #[test]
    fn rays_of_the_square() {
        let chart = square();
        let toward = ray_classify(&chart, &fiber(c(1.0, 0.0)), std::f64::consts::PI).unwrap();
        assert_eq!(toward.kind, LiftKind::Terminated);
        assert!((toward.rho - 1.0).abs() < 1e-12);
        let away = ray_classify(&chart, &fiber(c(1.0, 0.0)), 0.0).unwrap();
        assert_eq!(away.kind, LiftKind::Full);
        assert!(away.rho.is_infinite());
    }

    #[test]
    fn passing_a_critical_value_on_a_regular_sheet() {
        // z^3 - 3z: critical values ±2. The sheet through w = 2.1038 over
        // F = 3 passes over 2 without meeting a critical point.
        let f = CPoly::from_real(&[0.0, -3.0, 0.0, 1.0]);
        let chart = Chart::new(PQForm::from_polynomial(&f).unwrap()).unwrap();
        // Root of z^3 - 3z - 3 near 2.1038.
        let mut w = c(2.1, 0.0);
        for _ in 0..50 {
            w -= (f.eval(w) - 3.0) / f.derivative().eval(w);
        }
        let r = lift_segment(&chart, &fiber(w), c(3.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(r.kind, LiftKind::Full);
        let end = r.end.unwrap();
        assert!((f.eval(end) - c(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn gaussian_ray_reaches_its_asymptotic_value() {
        let form = PQForm::at_origin(CPoly::from_real(&[0.0, 0.0, -1.0]), CPoly::from_real(&[1.0])).unwrap();
        let chart = Chart::new(form).unwrap();
        let r = ray_classify(&chart, &fiber(c(0.0, 0.0)), 0.0).unwrap();
        assert_eq!(r.kind, LiftKind::Terminated);
        // ∫_0^∞ e^{-t²} dt
        assert!((r.rho - 0.886_226_925_452_758).abs() < 1e-7, "{}", r.rho);
        assert_eq!(r.terminal.unwrap().order, Order::Infinite);
    }

    #[test]
    fn start_mismatch_is_reported() {
        let r = lift_segment(&square(), &fiber(c(1.0, 0.0)), c(2.0, 0.0), c(3.0, 0.0));
        assert!(matches!(r, Err(LiftError::StartMismatch { .. })));
    }
}
