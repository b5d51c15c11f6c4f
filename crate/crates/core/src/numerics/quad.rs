//! Adaptive Gauss-Kronrod (7/15) quadrature of holomorphic integrands along
//! polylines in the complex plane.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{NumericsError, C64};

// Kronrod nodes on [-1, 1]; odd indices are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    /// Relative floor; needed when the integral itself is large.
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-10,
            rel_tol: 1e-14,
            max_panels: 10_000,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: C64,
    b: C64,
    value: C64,
    error: f64,
    magnitude: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One G7K15 panel of `∫_a^b f(z) dz` along the straight segment.
fn gk15<F: Fn(C64) -> C64>(f: &F, a: C64, b: C64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut magnitude = fc.norm() * WGK[7];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        kronrod += (f1 + f2) * WGK[j];
        magnitude += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    let magnitude = magnitude * half.norm();
    let error = if error.is_finite() { error } else { f64::INFINITY };
    Panel {
        a,
        b,
        value,
        error,
        magnitude,
    }
}

/// Neumaier-compensated complex sum.
fn compensated_sum<I: Iterator<Item = C64>>(it: I) -> C64 {
    let mut sum = C64::new(0.0, 0.0);
    let mut comp = C64::new(0.0, 0.0);
    for x in it {
        let t = sum + x;
        let fix = |s: f64, x: f64, t: f64| {
            if s.abs() >= x.abs() {
                (s - t) + x
            } else {
                (x - t) + s
            }
        };
        comp += C64::new(fix(sum.re, x.re, t.re), fix(sum.im, x.im, t.im));
        sum = t;
    }
    sum + comp
}

/// `∫ f(z) dz` along the polyline through `path`.
pub fn integrate_polyline<F: Fn(C64) -> C64>(f: F, path: &[C64], opts: &QuadOptions) -> Result<C64, NumericsError> {
    if path.len() < 2 {
        return Ok(C64::new(0.0, 0.0));
    }
    let mut heap = BinaryHeap::new();
    let (mut total_err, mut magnitude) = (0.0, 0.0);
    for w in path.windows(2) {
        if w[0] != w[1] {
            let p = gk15(&f, w[0], w[1]);
            total_err += p.error;
            magnitude += p.magnitude;
            heap.push(p);
        }
    }
    let mut steps = 0usize;
    loop {
        // Periodic exact recount keeps the running sums from drifting.
        if steps % 256 == 255 {
            total_err = heap.iter().map(|p: &Panel| p.error).sum();
            magnitude = heap.iter().map(|p: &Panel| p.magnitude).sum();
        }
        steps += 1;
        let tol = opts.abs_tol.max(opts.rel_tol * magnitude);
        if total_err <= tol {
            break;
        }
        if heap.len() >= opts.max_panels || !total_err.is_finite() {
            return Err(NumericsError::QuadratureFailure {
                panels: heap.len(),
                error: total_err,
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if (worst.b - worst.a).norm() <= 1e-15 * (1.0 + mid.norm()) {
            return Err(NumericsError::QuadratureFailure {
                panels: heap.len() + 1,
                error: total_err,
            });
        }
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        total_err += left.error + right.error - worst.error;
        magnitude += left.magnitude + right.magnitude - worst.magnitude;
        heap.push(left);
        heap.push(right);
    }
    let mut panels = heap.into_vec();
    // Deterministic summation order regardless of heap layout.
    panels.sort_by(|p, q| {
        (p.a.re, p.a.im)
            .partial_cmp(&(q.a.re, q.a.im))
            .unwrap_or(Ordering::Equal)
    });
    Ok(compensated_sum(panels.into_iter().map(|p| p.value)))
}

/// `∫_a^b f(z) dz` along the straight segment.
pub fn integrate_segment<F: Fn(C64) -> C64>(f: F, a: C64, b: C64, opts: &QuadOptions) -> Result<C64, NumericsError> {
    integrate_polyline(f, &[a, b], opts)
}
