/// Below this argument the power series is used directly.
const SERIES_CUTOFF: f64 = 2.0;
const RESCALE: f64 = 1e250;

/// Bessel function of the first kind `Jₙ(x)` for integer order `n ≥ 0`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x < 0.0 {
        let v = bessel_j(n, -x);
        return if n.is_multiple_of(2) { v } else { -v };
    }
    if x.abs() <= SERIES_CUTOFF {
        return series(n, x);
    }
    bessel_j_orders(n, x)[n as usize]
}

/// `J₀(x) … J_max(x)` in one backward sweep.
pub fn bessel_j_orders(max_order: u32, x: f64) -> Vec<f64> {
    let len = max_order as usize + 1;
    if x == 0.0 {
        let mut v = vec![0.0; len];
        v[0] = 1.0;
        return v;
    }
    if x.abs() <= SERIES_CUTOFF {
        return (0..=max_order).map(|n| series(n, x)).collect();
    }
    miller(max_order, x)
}

/// Ascending power series `Σ (−1)ᵏ (x/2)^{2k+n} / (k! (k+n)!)`.
fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = (1..=n).fold(1.0, |acc, k| acc * half / k as f64);
    let mut sum = term;
    let q = -half * half;
    for k in 1..200 {
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Miller's backward recurrence `J_{k−1} = (2k/x) J_k − J_{k+1}`, normalized
/// with `J₀ + 2 Σ J₂ₖ = 1`.
fn miller(max_order: u32, x: f64) -> Vec<f64> {
    let ax = x.abs();
    let top = (max_order as f64).max(ax);
    let start = (top + 30.0 + (40.0 * top).sqrt()) as usize;
    let start = start + start % 2;

    let mut out = vec![0.0; max_order as usize + 1];
    let (mut above, mut current) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        // current holds J_k, above holds J_{k+1}
        if k <= max_order as usize {
            out[k] = current;
        }
        if k % 2 == 0 {
            norm += 2.0 * current;
        }
        let below = 2.0 * k as f64 / ax * current - above;
        above = current;
        current = below;
        if current.abs() > RESCALE {
            current /= RESCALE;
            above /= RESCALE;
            norm /= RESCALE;
            for v in out.iter_mut() {
                *v /= RESCALE;
            }
        }
    }
    out[0] = current;
    norm += current;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}
