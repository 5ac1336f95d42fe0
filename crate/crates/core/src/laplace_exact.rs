//! Exact pipeline: trig sums → rational Laplace transforms → renewal
//! algebra → partial fractions → trig sums.
//!
//! With `L_u = L[P_u(ω,t|ν,0)]` and `L_k = L[K]`, the renewal equation
//! `P_u(t) = P_r(t) + ∫₀ᵗ K(t−t′) P_fp(t′) dt′` with `P_fp = −P_r′` gives
//!
//! ```text
//! L[P_r]  = (L_u − L_k) / (1 − s L_k)
//! L[P_fp] = (1 − s L_u) / (1 − s L_k)
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{InitialState, Partition, TightBindingChain};
use crate::poly::Poly;
use crate::propagator::{return_kernel_trigsum, survival_trigsum};
use crate::trigsum::{Term, TrigSum, AMPLITUDE_DROP_TOL};

/// Tolerance for matching numerator and denominator roots during reduction.
pub const ROOT_MATCH_TOL: f64 = 1e-8;
/// Poles with a larger real part are rejected.
pub const POLE_REAL_TOL: f64 = 1e-7;
/// Poles closer than this (relative) count as repeated.
pub const REPEATED_POLE_TOL: f64 = 1e-6;
/// Leading coefficients below this fraction of the largest are cancellation noise.
const TRIM_TOL: f64 = 1e-12;

/// `numerator(s) / denominator(s)` with a monic denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalLaplace {
    numerator: Poly,
    denominator: Poly,
}

impl RationalLaplace {
    pub fn new(numerator: Poly, denominator: Poly) -> Result<Self> {
        let denominator = denominator.trimmed(TRIM_TOL);
        if denominator.is_zero() {
            return Err(Error::Degenerate);
        }
        let lead = denominator.leading();
        let numerator = numerator.trimmed(TRIM_TOL).scale(1.0 / lead);
        Ok(Self {
            numerator,
            denominator: denominator.scale(1.0 / lead),
        })
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.numerator.eval_complex(s) / self.denominator.eval_complex(s)
    }

    pub fn is_proper(&self) -> bool {
        match (self.numerator.degree(), self.denominator.degree()) {
            (None, _) => true,
            (Some(n), Some(d)) => n < d,
            (Some(_), None) => false,
        }
    }

    /// Cancels numerator/denominator root pairs closer than `tol` (relative
    /// to `max(1, |root|)`). Matched factors are divided out of both
    /// polynomials, so the surviving coefficients are not rebuilt from
    /// (possibly ill-conditioned) roots.
    pub fn reduced(&self, tol: f64) -> Result<Self> {
        if self.numerator.is_zero() {
            return Self::new(Poly::zero(), Poly::constant(1.0));
        }
        if self.numerator.degree() == Some(0) {
            return Ok(self.clone());
        }
        let num_roots = self.numerator.roots()?;
        let den_roots = self.denominator.roots()?;
        let mut num_used = vec![false; num_roots.len()];
        let mut common = Vec::new();
        for d in &den_roots {
            let hit = num_roots
                .iter()
                .enumerate()
                .filter(|(i, n)| !num_used[*i] && (*n - d).norm() <= tol * d.norm().max(1.0))
                .min_by(|a, b| (a.1 - d).norm().total_cmp(&(b.1 - d).norm()));
            if let Some((i, _)) = hit {
                num_used[i] = true;
                common.push(*d);
            }
        }
        let (mut num, mut den) = (self.numerator.clone(), self.denominator.clone());
        for r in &common {
            if r.im < -tol * r.norm().max(1.0) {
                continue; // removed together with its conjugate
            }
            num = num.deflate(*r, tol);
            den = den.deflate(*r, tol);
        }
        Self::new(num, den)
    }
}

/// `L[f]` over the common denominator `s^[c₀≠0] · Π (s² + νₖ²)`.
pub fn trigsum_laplace(f: &TrigSum) -> Result<RationalLaplace> {
    let (num, den) = trigsum_laplace_parts(f, &frequencies(&[f]));
    RationalLaplace::new(num, den)?.reduced(1e-9)
}

/// Distinct frequencies across several sums, merged at the trig-sum tolerance.
fn frequencies(fs: &[&TrigSum]) -> Vec<f64> {
    let all: Vec<Term> = fs
        .iter()
        .flat_map(|f| f.cosines().iter().chain(f.sines()))
        .map(|t| Term::new(1.0, t.frequency))
        .collect();
    TrigSum::new(0.0, all, vec![])
        .cosines()
        .iter()
        .map(|t| t.frequency)
        .collect()
}

/// Numerator and denominator of `L[f]` over `s · Π_{ν ∈ freqs} (s² + ν²)`,
/// with every frequency of `f` contained in `freqs`.
fn trigsum_laplace_parts(f: &TrigSum, freqs: &[f64]) -> (Poly, Poly) {
    let factors: Vec<Poly> = freqs.iter().map(|&w| Poly::oscillator(w)).collect();
    let product_except = |skip: Option<usize>| {
        factors
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != skip)
            .fold(Poly::constant(1.0), |acc, (_, p)| &acc * p)
    };
    let index_of = |w: f64| {
        freqs
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - w).abs().total_cmp(&(b.1 - w).abs()))
            .map(|(i, _)| i)
            .expect("frequency present in the common set")
    };
    let with_constant = f.constant() != 0.0;
    let den = if with_constant {
        product_except(None).shift()
    } else {
        product_except(None)
    };
    // D / (s² + ν²) carries the factor s when the constant term is present
    let cofactor = |i: usize| {
        let p = product_except(Some(i));
        if with_constant {
            p.shift()
        } else {
            p
        }
    };
    let mut num = product_except(None).scale(f.constant());
    for c in f.cosines() {
        num = &num + &cofactor(index_of(c.frequency)).shift().scale(c.amplitude);
    }
    for sn in f.sines() {
        num = &num + &cofactor(index_of(sn.frequency)).scale(sn.amplitude * sn.frequency);
    }
    (num, den)
}

/// `L[P_r]` and `L[P_fp]` from the survival transform and the return-kernel
/// transform.
pub fn solve_fpt_laplace(
    l_start: &RationalLaplace,
    l_kernel: &RationalLaplace,
) -> Result<(RationalLaplace, RationalLaplace)> {
    let (ns, nk, d) = common_denominator(l_start, l_kernel)?;
    let den = (&d - &nk.shift()).trimmed(TRIM_TOL);
    if den.is_zero() || den.max_abs_coeff() <= TRIM_TOL * d.max_abs_coeff() {
        return Err(Error::Degenerate);
    }
    let lr = RationalLaplace::new(&ns - &nk, den.clone())?.reduced(ROOT_MATCH_TOL)?;
    let lfp = RationalLaplace::new(&d - &ns.shift(), den)?.reduced(ROOT_MATCH_TOL)?;
    Ok((lr, lfp))
}

/// Rewrites `a = Na/D`, `b = Nb/D` over the least common denominator found
/// by root matching.
fn common_denominator(a: &RationalLaplace, b: &RationalLaplace) -> Result<(Poly, Poly, Poly)> {
    if a.denominator == b.denominator {
        return Ok((
            a.numerator.clone(),
            b.numerator.clone(),
            a.denominator.clone(),
        ));
    }
    let ra = roots_or_empty(&a.denominator)?;
    let rb = roots_or_empty(&b.denominator)?;
    // roots of b's denominator missing from a's, and vice versa
    let missing = |have: &[Complex64], want: &[Complex64]| {
        let mut used = vec![false; have.len()];
        let mut out = Vec::new();
        for w in want {
            let hit = have.iter().enumerate().position(|(i, h)| {
                !used[i] && (h - w).norm() <= ROOT_MATCH_TOL * w.norm().max(1.0)
            });
            match hit {
                Some(i) => used[i] = true,
                None => out.push(*w),
            }
        }
        out
    };
    let extra_a = Poly::from_roots(1.0, &missing(&ra, &rb));
    let extra_b = Poly::from_roots(1.0, &missing(&rb, &ra));
    Ok((
        &a.numerator * &extra_a,
        &b.numerator * &extra_b,
        &a.denominator * &extra_a,
    ))
}

fn roots_or_empty(p: &Poly) -> Result<Vec<Complex64>> {
    if p.degree().unwrap_or(0) == 0 {
        Ok(vec![])
    } else {
        p.roots()
    }
}

/// Partial-fraction inversion of a proper rational function with simple
/// poles on the imaginary axis.
pub fn invert_rational(f: &RationalLaplace) -> Result<TrigSum> {
    if !f.is_proper() {
        return Err(Error::ImproperRational);
    }
    if f.numerator.is_zero() {
        return Ok(TrigSum::default());
    }
    let poles = f.denominator.roots()?;
    for p in &poles {
        if p.re.abs() >= POLE_REAL_TOL {
            return Err(Error::UnstablePole { re: p.re, im: p.im });
        }
    }
    for (i, p) in poles.iter().enumerate() {
        for q in &poles[i + 1..] {
            if (p - q).norm() <= REPEATED_POLE_TOL * p.norm().max(1.0) {
                return Err(Error::RepeatedPole { re: p.re, im: p.im });
            }
        }
    }
    let dden = f.denominator.derivative();
    let mut constant = 0.0;
    let mut cosines = Vec::new();
    let mut sines = Vec::new();
    for p in &poles {
        let residue = f.numerator.eval_complex(*p) / dden.eval_complex(*p);
        if p.im.abs() <= POLE_REAL_TOL {
            constant += residue.re;
        } else if p.im > 0.0 {
            // r e^{iνt} + conj(r) e^{−iνt}
            cosines.push(Term::new(2.0 * residue.re, p.im));
            sines.push(Term::new(-2.0 * residue.im, p.im));
        }
    }
    if constant.abs() < AMPLITUDE_DROP_TOL {
        constant = 0.0;
    }
    Ok(TrigSum::new(constant, cosines, sines))
}

/// Closed-form restricted probability and first-passage density.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactFpt {
    pub restricted: TrigSum,
    pub density: TrigSum,
    pub laplace_restricted: RationalLaplace,
    pub laplace_density: RationalLaplace,
}

pub fn solve_exact(
    chain: &TightBindingChain,
    partition: &Partition,
    start: &InitialState,
) -> Result<ExactFpt> {
    let survival = survival_trigsum(chain, partition, start)?;
    let kernel = return_kernel_trigsum(chain, partition)?;
    // both transforms share one denominator so no spurious double poles appear
    let freqs = frequencies(&[&survival, &kernel]);
    let (ns, ds) = trigsum_laplace_parts(&survival, &freqs);
    let (nk, dk) = trigsum_laplace_parts(&kernel, &freqs);
    let (ns, nk) = align(ns, &ds, nk, &dk);
    let den = if ds.degree() >= dk.degree() { ds } else { dk };
    let l_start = RationalLaplace::new(ns, den.clone())?;
    let l_kernel = RationalLaplace::new(nk, den)?;
    let (lr, lfp) = solve_fpt_laplace(&l_start, &l_kernel)?;
    Ok(ExactFpt {
        restricted: invert_rational(&lr)?,
        density: invert_rational(&lfp)?,
        laplace_restricted: lr,
        laplace_density: lfp,
    })
}

/// The two denominators differ at most by a factor `s` (present only when the
/// corresponding sum has a constant term); lift the other numerator to match.
fn align(na: Poly, da: &Poly, nb: Poly, db: &Poly) -> (Poly, Poly) {
    match da.degree().cmp(&db.degree()) {
        std::cmp::Ordering::Equal => (na, nb),
        std::cmp::Ordering::Less => (na.shift(), nb),
        std::cmp::Ordering::Greater => (na, nb.shift()),
    }
}
