use std::fmt;

/// Frequencies closer than this are merged into one term.
pub const FREQUENCY_MERGE_TOL: f64 = 1e-9;
/// Terms with smaller amplitude are dropped.
pub const AMPLITUDE_DROP_TOL: f64 = 1e-12;

/// One oscillating term `amplitude · cos(frequency t)` (or `sin`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub amplitude: f64,
    pub frequency: f64,
}

impl Term {
    pub fn new(amplitude: f64, frequency: f64) -> Self {
        Self {
            amplitude,
            frequency,
        }
    }
}

/// `c₀ + Σ cₖ cos(νₖ t) + Σ sₖ sin(νₖ t)`.
///
/// Construction normalizes the representation: frequencies are made
/// non-negative, sorted ascending and merged within [`FREQUENCY_MERGE_TOL`];
/// zero-frequency cosines fold into the constant and amplitudes below
/// [`AMPLITUDE_DROP_TOL`] are dropped.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigSum {
    constant: f64,
    cosines: Vec<Term>,
    sines: Vec<Term>,
}

impl TrigSum {
    pub fn new(constant: f64, cosines: Vec<Term>, sines: Vec<Term>) -> Self {
        let mut constant = constant;
        let mut cos = Vec::with_capacity(cosines.len());
        for t in cosines {
            // cos is even in ν
            let f = t.frequency.abs();
            if f <= FREQUENCY_MERGE_TOL {
                constant += t.amplitude;
            } else {
                cos.push(Term::new(t.amplitude, f));
            }
        }
        let sin = sines
            .into_iter()
            .filter(|t| t.frequency.abs() > FREQUENCY_MERGE_TOL)
            .map(|t| Term::new(t.amplitude * t.frequency.signum(), t.frequency.abs()))
            .collect();
        Self {
            constant,
            cosines: merge(cos),
            sines: merge(sin),
        }
    }

    pub fn constant_only(c: f64) -> Self {
        Self::new(c, vec![], vec![])
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn cosines(&self) -> &[Term] {
        &self.cosines
    }

    pub fn sines(&self) -> &[Term] {
        &self.sines
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.cosines.is_empty() && self.sines.is_empty()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.constant
            + self
                .cosines
                .iter()
                .map(|c| c.amplitude * (c.frequency * t).cos())
                .sum::<f64>()
            + self
                .sines
                .iter()
                .map(|s| s.amplitude * (s.frequency * t).sin())
                .sum::<f64>()
    }

    /// Exact derivative.
    pub fn derivative(&self) -> Self {
        let sines = self
            .cosines
            .iter()
            .map(|c| Term::new(-c.amplitude * c.frequency, c.frequency))
            .collect();
        let cosines = self
            .sines
            .iter()
            .map(|s| Term::new(s.amplitude * s.frequency, s.frequency))
            .collect();
        Self::new(0.0, cosines, sines)
    }

    pub fn eval_derivative(&self, t: f64) -> f64 {
        self.cosines
            .iter()
            .map(|c| -c.amplitude * c.frequency * (c.frequency * t).sin())
            .sum::<f64>()
            + self
                .sines
                .iter()
                .map(|s| s.amplitude * s.frequency * (s.frequency * t).cos())
                .sum::<f64>()
    }

    /// `∫ₐᵇ f(t) dt` from the exact antiderivative.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let anti = |t: f64| {
            self.constant * t
                + self
                    .cosines
                    .iter()
                    .map(|c| c.amplitude * (c.frequency * t).sin() / c.frequency)
                    .sum::<f64>()
                - self
                    .sines
                    .iter()
                    .map(|s| s.amplitude * (s.frequency * t).cos() / s.frequency)
                    .sum::<f64>()
        };
        anti(b) - anti(a)
    }

    /// `∫ₐᵇ t·f(t) dt` from the exact antiderivative.
    pub fn first_moment(&self, a: f64, b: f64) -> f64 {
        let anti = |t: f64| {
            let mut acc = self.constant * t * t / 2.0;
            for c in &self.cosines {
                let (s, co) = (c.frequency * t).sin_cos();
                acc += c.amplitude * (t * s / c.frequency + co / (c.frequency * c.frequency));
            }
            for sn in &self.sines {
                let (s, co) = (sn.frequency * t).sin_cos();
                acc += sn.amplitude * (-t * co / sn.frequency + s / (sn.frequency * sn.frequency));
            }
            acc
        };
        anti(b) - anti(a)
    }

    pub fn max_frequency(&self) -> Option<f64> {
        self.cosines
            .iter()
            .chain(&self.sines)
            .map(|t| t.frequency)
            .reduce(f64::max)
    }

    pub fn scaled(&self, k: f64) -> Self {
        let sc = |v: &[Term]| {
            v.iter()
                .map(|t| Term::new(t.amplitude * k, t.frequency))
                .collect()
        };
        Self::new(self.constant * k, sc(&self.cosines), sc(&self.sines))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.constant + other.constant,
            self.cosines.iter().chain(&other.cosines).copied().collect(),
            self.sines.iter().chain(&other.sines).copied().collect(),
        )
    }
}

fn merge(mut terms: Vec<Term>) -> Vec<Term> {
    terms.sort_by(|a, b| a.frequency.total_cmp(&b.frequency));
    let mut out: Vec<Term> = Vec::with_capacity(terms.len());
    let mut members = 0usize;
    for t in terms {
        match out.last_mut() {
            Some(last) if (t.frequency - last.frequency).abs() <= FREQUENCY_MERGE_TOL => {
                // running mean of the clustered frequencies
                members += 1;
                last.frequency += (t.frequency - last.frequency) / members as f64;
                last.amplitude += t.amplitude;
            }
            _ => {
                out.push(t);
                members = 1;
            }
        }
    }
    out.retain(|t| t.amplitude.abs() >= AMPLITUDE_DROP_TOL);
    out
}

impl fmt::Display for TrigSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut emit = |f: &mut fmt::Formatter<'_>, a: f64, body: String| -> fmt::Result {
            if first {
                write!(f, "{a:.6}{body}")?;
                first = false;
            } else if a < 0.0 {
                write!(f, " - {:.6}{body}", -a)?;
            } else {
                write!(f, " + {a:.6}{body}")?;
            }
            Ok(())
        };
        if self.constant != 0.0 {
            emit(f, self.constant, String::new())?;
        }
        for c in &self.cosines {
            emit(f, c.amplitude, format!(" cos({:.6} t)", c.frequency))?;
        }
        for s in &self.sines {
            emit(f, s.amplitude, format!(" sin({:.6} t)", s.frequency))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_terms() {
        let f = TrigSum::new(
            0.25,
            vec![
                Term::new(0.5, 2.0),
                Term::new(0.25, 0.0),
                Term::new(0.1, -2.0 + 1e-11),
                Term::new(1e-14, 3.0),
            ],
            vec![Term::new(1.0, -1.0), Term::new(7.0, 0.0)],
        );
        assert_eq!(f.constant(), 0.5);
        assert_eq!(f.cosines().len(), 1);
        assert!((f.cosines()[0].amplitude - 0.6).abs() < 1e-15);
        assert_eq!(f.sines(), &[Term::new(-1.0, 1.0)]);
    }

    #[test]
    fn calculus() {
        let f = TrigSum::new(0.3, vec![Term::new(1.2, 0.9)], vec![Term::new(-0.4, 2.5)]);
        let h = 1e-5;
        for &t in &[0.0, 0.4, 1.7] {
            let fd = (f.eval(t + h) - f.eval(t - h)) / (2.0 * h);
            assert!((fd - f.eval_derivative(t)).abs() < 1e-9);
            assert!((f.derivative().eval(t) - f.eval_derivative(t)).abs() < 1e-14);
        }
        // composite Simpson as an independent quadrature
        let simpson = |g: &dyn Fn(f64) -> f64, a: f64, b: f64| {
            let n = 2000;
            let h = (b - a) / n as f64;
            let mut s = g(a) + g(b);
            for i in 1..n {
                s += g(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            s * h / 3.0
        };
        assert!((f.integral(0.2, 2.3) - simpson(&|t| f.eval(t), 0.2, 2.3)).abs() < 1e-12);
        assert!((f.first_moment(0.2, 2.3) - simpson(&|t| t * f.eval(t), 0.2, 2.3)).abs() < 1e-12);
    }

    #[test]
    fn display() {
        let f = TrigSum::new(0.0, vec![Term::new(1.0, 2f64.sqrt())], vec![]);
        assert_eq!(f.to_string(), "1.000000 cos(1.414214 t)");
        assert_eq!(TrigSum::default().to_string(), "0");
    }
}
