//! Real-coefficient polynomials and complex root finding.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Polynomial with real coefficients, lowest power first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Self { coeffs };
        p.strip();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `s`.
    pub fn s() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    /// `s² + ν²`.
    pub fn oscillator(freq: f64) -> Self {
        Self::new(vec![freq * freq, 0.0, 1.0])
    }

    /// `lead · Π (s − rᵢ)`; the roots must come in conjugate pairs for the
    /// product to be real, and any imaginary residue is discarded.
    pub fn from_roots(lead: f64, roots: &[Complex64]) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= ci * r;
            }
            c = next;
        }
        Self::new(c.into_iter().map(|z| z.re * lead).collect())
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    fn strip(&mut self) {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
    }

    /// Drops leading coefficients below `rel_tol · max|cᵢ|`.
    pub fn trimmed(mut self, rel_tol: f64) -> Self {
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        while let Some(&c) = self.coeffs.last() {
            if c.abs() <= rel_tol * scale || c == 0.0 {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        self
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Multiplies by `s`.
    pub fn shift(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(0.0);
        c.extend_from_slice(&self.coeffs);
        Self::new(c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect(),
        )
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Quotient of division by `(s − r)` for a real root, or by
    /// `(s − r)(s − r̄)` when `|Im r|` exceeds `tol·max(1, |r|)`. The
    /// remainder is discarded.
    pub fn deflate(&self, r: Complex64, tol: f64) -> Self {
        let divisor = if r.im.abs() > tol * r.norm().max(1.0) {
            vec![r.norm_sqr(), -2.0 * r.re, 1.0]
        } else {
            vec![-r.re, 1.0]
        };
        self.div_rem(&divisor).0
    }

    /// Long division by a monic divisor given as coefficients (lowest first).
    fn div_rem(&self, monic: &[f64]) -> (Self, Self) {
        let dd = monic.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0.0; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = rem[i + dd];
            quot[i] = q;
            for (j, m) in monic.iter().enumerate() {
                rem[i + j] -= q * m;
            }
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// All complex roots, each polished by Newton's method on `self`.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let Some(degree) = self.degree() else {
            return Err(Error::Precondition("roots of the zero polynomial".into()));
        };
        let mut roots = Vec::with_capacity(degree);
        // exact zero roots first
        let zeros = self.coeffs.iter().take_while(|&&c| c == 0.0).count();
        roots.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));
        let reduced = &self.coeffs[zeros..];
        if reduced.len() > 1 {
            let lead = *reduced.last().unwrap();
            let monic: Vec<f64> = reduced.iter().map(|c| c / lead).collect();
            let found = aberth(&monic)?;
            let dp = self.derivative();
            roots.extend(found.into_iter().map(|z| polish(self, &dp, z)));
        }
        Ok(roots)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&0.0) + rhs.coeffs.get(i).unwrap_or(&0.0))
                .collect(),
        )
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1.0)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }
}

const ABERTH_MAX_ITER: usize = 500;

/// Aberth–Ehrlich simultaneous iteration on a monic polynomial
/// (`monic.last() == 1`, nonzero constant term).
const STALL_ITER: usize = 40;

fn aberth(monic: &[f64]) -> Result<Vec<Complex64>> {
    let n = monic.len() - 1;
    let p = Poly {
        coeffs: monic.to_vec(),
    };
    let dp = p.derivative();
    if n == 1 {
        return Ok(vec![Complex64::new(-monic[0], 0.0)]);
    }

    // start on a circle whose radius is the geometric mean of the root moduli
    let radius = monic[0].abs().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();

    let mut converged = vec![false; n];
    let mut best_step = f64::INFINITY;
    let mut stalled = 0;
    for _ in 0..ABERTH_MAX_ITER {
        let mut max_step = 0.0f64;
        for k in 0..n {
            if converged[k] {
                continue;
            }
            let pk = p.eval_complex(z[k]);
            if pk.norm() == 0.0 {
                converged[k] = true;
                continue;
            }
            let ratio = pk / dp.eval_complex(z[k]);
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                let rel = step.norm() / z[k].norm().max(1e-300);
                converged[k] = rel < 1e-14;
                max_step = max_step.max(rel);
            }
        }
        if max_step < 1e-14 {
            return Ok(z);
        }
        // clustered roots stop improving well before the iteration cap
        if max_step < 0.5 * best_step {
            best_step = max_step;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= STALL_ITER {
                break;
            }
        }
    }
    // slow convergence only happens at clustered (multiple) roots, where the
    // iterates are as good as double precision allows; accept if residuals are small
    let scale: f64 = monic.iter().map(|c| c.abs()).sum();
    if z.iter()
        .all(|&zk| p.eval_complex(zk).norm() <= 1e-8 * scale * zk.norm().max(1.0).powi(n as i32))
    {
        Ok(z)
    } else {
        Err(Error::RootFinding { degree: n })
    }
}

fn polish(p: &Poly, dp: &Poly, mut z: Complex64) -> Complex64 {
    let mut best = z;
    let mut best_res = p.eval_complex(z).norm();
    for _ in 0..20 {
        let d = dp.eval_complex(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = p.eval_complex(z) / d;
        z -= step;
        let res = p.eval_complex(z).norm();
        if res < best_res {
            best = z;
            best_res = res;
        }
        if step.norm() <= 1e-16 * z.norm().max(1e-300) || res == 0.0 {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sorted(mut r: Vec<Complex64>) -> Vec<Complex64> {
        r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        r
    }

    #[test]
    fn arithmetic() {
        let a = Poly::new(vec![1.0, 2.0]);
        let b = Poly::new(vec![-1.0, 0.0, 3.0]);
        assert_eq!((&a * &b).coeffs(), &[-1.0, -2.0, 3.0, 6.0]);
        assert_eq!((&a - &a), Poly::zero());
        assert_eq!(a.shift().coeffs(), &[0.0, 1.0, 2.0]);
        assert_eq!(b.derivative().coeffs(), &[0.0, 6.0]);
        assert_eq!(
            Poly::new(vec![1.0, 1.0, 1e-17]).trimmed(1e-12).degree(),
            Some(1)
        );
        // (s² + 4)(s − 3) / (s² + 4)
        let p = &Poly::oscillator(2.0) * &Poly::new(vec![-3.0, 1.0]);
        assert_eq!(
            p.deflate(Complex64::new(0.0, 2.0), 1e-9).coeffs(),
            &[-3.0, 1.0]
        );
        assert_eq!(
            p.deflate(Complex64::new(3.0, 0.0), 1e-9).coeffs(),
            &[4.0, 0.0, 1.0]
        );
    }

    #[test]
    fn oscillator_roots() {
        let p = &Poly::oscillator(2f64.sqrt()) * &Poly::s();
        let r = sorted(p.roots().unwrap());
        assert_eq!(r.len(), 3);
        assert!(r.iter().any(|z| z.norm() < 1e-15));
        assert!(r
            .iter()
            .any(|z| (z - Complex64::new(0.0, 2f64.sqrt())).norm() < 1e-14));
        assert!(r
            .iter()
            .any(|z| (z + Complex64::new(0.0, 2f64.sqrt())).norm() < 1e-14));
    }

    #[test]
    fn wilkinson_like() {
        let roots: Vec<Complex64> = (1..=8).map(|k| Complex64::new(k as f64, 0.0)).collect();
        let p = Poly::from_roots(1.0, &roots);
        let got = sorted(p.roots().unwrap());
        for (g, w) in got.iter().zip(&roots) {
            assert!((g - w).norm() < 1e-9, "{g} vs {w}");
        }
    }

    proptest! {
        #[test]
        fn recovers_conjugate_pairs(freqs in proptest::collection::vec(0.1f64..5.0, 1..6)) {
            let mut roots = Vec::new();
            for f in &freqs {
                roots.push(Complex64::new(0.0, *f));
                roots.push(Complex64::new(0.0, -*f));
            }
            let mut sep = freqs.clone();
            sep.sort_by(f64::total_cmp);
            prop_assume!(sep.windows(2).all(|w| w[1] - w[0] > 1e-2));
            let p = Poly::from_roots(2.5, &roots);
            let got = p.roots().unwrap();
            for r in &roots {
                let best = got.iter().map(|g| (g - r).norm()).fold(f64::INFINITY, f64::min);
                prop_assert!(best < 1e-8, "root {} missed by {}", r, best);
            }
        }
    }
}
