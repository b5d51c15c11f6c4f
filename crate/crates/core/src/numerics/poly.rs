use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::C64;

/// Dense complex polynomial, coefficients in ascending degree.
///
/// Trailing zero coefficients are stripped on construction, so the zero
/// polynomial is represented by an empty coefficient list.
#[derive(Clone, PartialEq, Default)]
pub struct CPoly {
    coeffs: Vec<C64>,
}

impl CPoly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        CPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        CPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z`.
    pub fn identity() -> Self {
        Self::new(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
    }

    /// Monic polynomial with the given roots, each repeated by multiplicity.
    pub fn from_roots(roots: &[(C64, usize)]) -> Self {
        let mut p = Self::constant(C64::new(1.0, 0.0));
        for &(r, m) in roots {
            for _ in 0..m {
                p = &p * &Self::new(vec![-r, C64::new(1.0, 0.0)]);
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn leading(&self) -> C64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> CPoly {
        if self.coeffs.len() <= 1 {
            return CPoly::zero();
        }
        CPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Antiderivative with the given constant term.
    pub fn integral(&self, constant: C64) -> CPoly {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(constant);
        for (k, &c) in self.coeffs.iter().enumerate() {
            out.push(c / (k + 1) as f64);
        }
        CPoly::new(out)
    }

    pub fn scale(&self, s: C64) -> CPoly {
        CPoly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn pow(&self, n: u32) -> CPoly {
        let mut result = CPoly::constant(C64::new(1.0, 0.0));
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `self(z) * (z - r)^{-1}` by synthetic division, dropping the remainder.
    pub fn deflate(&self, r: C64) -> CPoly {
        let n = self.coeffs.len();
        if n <= 1 {
            return CPoly::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); n - 1];
        let mut acc = C64::new(0.0, 0.0);
        for k in (1..n).rev() {
            acc = acc * r + self.coeffs[k];
            out[k - 1] = acc;
        }
        CPoly::new(out)
    }

    pub fn max_abs_diff(&self, other: &CPoly) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Debug for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})z"),
                _ => format!("({c})z^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl<'a> Add<&'a CPoly> for &'a CPoly {
    type Output = CPoly;
    fn add(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a CPoly> for &'a CPoly {
    type Output = CPoly;
    fn sub(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a CPoly> for &'a CPoly {
    type Output = CPoly;
    fn mul(self, rhs: &CPoly) -> CPoly {
        if self.is_zero() || rhs.is_zero() {
            return CPoly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPoly::new(out)
    }
}

impl Neg for &CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Add<C64> for &CPoly {
    type Output = CPoly;
    fn add(self, rhs: C64) -> CPoly {
        self + &CPoly::constant(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn trailing_zeros_are_stripped() {
        let p = CPoly::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.degree(), 0);
        assert!(CPoly::new(vec![c(0.0, 0.0)]).is_zero());
    }

    #[test]
    fn horner_matches_monomial_sum() {
        let p = CPoly::new(vec![c(1.0, -2.0), c(0.5, 0.25), c(-3.0, 1.0), c(0.0, 2.0)]);
        for z in [c(0.3, 0.7), c(-9.0, 4.0), c(6.0, -7.5)] {
            let direct: C64 = p.coeffs().iter().enumerate().map(|(k, &a)| a * z.powu(k as u32)).sum();
            assert!((p.eval(z) - direct).norm() <= 1e-12 * direct.norm().max(1.0));
        }
    }

    #[test]
    fn expand_product_of_linear_factors() {
        let p = CPoly::from_roots(&[(c(1.0, 0.0), 1), (c(2.0, 0.0), 1), (c(3.0, 0.0), 1)]);
        assert!(p.max_abs_diff(&CPoly::from_real(&[-6.0, 11.0, -6.0, 1.0])) < 1e-15);
    }

    #[test]
    fn integral_then_derivative_is_identity() {
        let p = CPoly::from_real(&[1.0, 2.0, 3.0]);
        assert!(p.integral(c(5.0, 0.0)).derivative().max_abs_diff(&p) < 1e-15);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let p = CPoly::from_real(&[1.0, 0.5]);
        let mut q = CPoly::constant(c(1.0, 0.0));
        for _ in 0..5 {
            q = &q * &p;
        }
        assert!(p.pow(5).max_abs_diff(&q) < 1e-14);
    }

    #[test]
    fn deflate_removes_root() {
        let p = CPoly::from_roots(&[(c(1.0, 1.0), 1), (c(-2.0, 0.0), 2)]);
        let q = p.deflate(c(1.0, 1.0));
        assert!(q.max_abs_diff(&CPoly::from_roots(&[(c(-2.0, 0.0), 2)])) < 1e-14);
    }
}
