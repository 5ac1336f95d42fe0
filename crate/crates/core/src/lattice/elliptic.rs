//! Complete elliptic integral of the first kind in the parameter convention
//! `K(m) = ∫₀^{π/2} dθ / √(1 − m sin²θ)`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub fn elliptic_k(m: f64) -> Result<f64> {
    if m.is_nan() || m >= 1.0 {
        return Err(Error::Domain(format!("K(m) needs m < 1, got {m}")));
    }
    if m < 0.0 {
        // imaginary-modulus transformation K(−x) = K(x/(1+x)) / √(1+x)
        let x = -m;
        return Ok(elliptic_k(x / (1.0 + x))? / (1.0 + x).sqrt());
    }
    Ok(FRAC_PI_2 / agm(1.0, (1.0 - m).sqrt()))
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    a
}

/// `K(m)` for complex `m` off the cut `[1, ∞)`, continuous with the real
/// branch on `m < 1`.
pub fn elliptic_k_complex(m: Complex64) -> Result<Complex64> {
    if m.im == 0.0 && m.re >= 1.0 {
        return Err(Error::Domain(format!("K(m) has a branch cut at m = {m}")));
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(Complex64::new(FRAC_PI_2, 0.0) / agm_complex(one, (one - m).sqrt()))
}

/// Arithmetic-geometric mean with the "right" square-root choice at each
/// step, which keeps the iterates in the right half-plane.
fn agm_complex(mut a: Complex64, mut b: Complex64) -> Complex64 {
    for _ in 0..64 {
        if (a - b).norm() <= 1e-16 * a.norm() {
            break;
        }
        let next_a = 0.5 * (a + b);
        let mut next_b = (a * b).sqrt();
        if (next_a - next_b).norm() > (next_a + next_b).norm() {
            next_b = -next_b;
        }
        (a, b) = (next_a, next_b);
    }
    a
}
