//! Unrestricted occupation probabilities of finite chains, expanded
//! exactly into [`TrigSum`]s through the spectral decomposition.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{
    build_hamiltonian, spectral_decompose, validate_doorway, InitialState, Partition,
    SpectralDecomposition, TightBindingChain,
};
use crate::trigsum::{Term, TrigSum};

/// `⟨to|e^{−iHt}|from⟩` with 1-based site numbers.
pub fn evolve_amplitude(
    decomp: &SpectralDecomposition,
    from_site: usize,
    to_site: usize,
    t: f64,
) -> Complex64 {
    let (nu, m) = (from_site - 1, to_site - 1);
    decomp
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(j, &e)| {
            let w = decomp.component(m, j) * decomp.component(nu, j);
            Complex64::from_polar(w, -e * t)
        })
        .sum()
}

/// `Σ_{m ∈ sites} |⟨m|e^{−iHt}|source⟩|²` as a cosine sum over the
/// eigenvalue differences `|Eⱼ − Eₖ|`.
pub fn occupation_trigsum(
    decomp: &SpectralDecomposition,
    sites: &[usize],
    source: usize,
) -> TrigSum {
    let n = decomp.dim();
    let src = source - 1;
    // overlap[j][k] = Σ_{m∈sites} U[m][j] U[m][k]
    let mut overlap = vec![0.0; n * n];
    for &m in sites {
        for j in 0..n {
            let umj = decomp.component(m - 1, j);
            for k in j..n {
                overlap[j * n + k] += umj * decomp.component(m - 1, k);
            }
        }
    }
    let mut constant = 0.0;
    let mut cosines = Vec::with_capacity(n * (n - 1) / 2);
    for j in 0..n {
        let uj = decomp.component(src, j);
        constant += overlap[j * n + j] * uj * uj;
        for k in (j + 1)..n {
            let w = overlap[j * n + k] * uj * decomp.component(src, k);
            let freq = (decomp.eigenvalues[k] - decomp.eigenvalues[j]).abs();
            cosines.push(Term::new(2.0 * w, freq));
        }
    }
    TrigSum::new(constant, cosines, vec![])
}

fn prepare(
    chain: &TightBindingChain,
    partition: &Partition,
) -> Result<(SpectralDecomposition, usize)> {
    if !chain.is_finite() {
        return Err(Error::UnsupportedFiniteOp);
    }
    validate_doorway(chain, partition)?;
    let n = chain.len()?;
    Ok((spectral_decompose(&build_hamiltonian(chain)?)?, n))
}

/// `P_u(ω, t | ν, 0)`: probability of finding the particle in ω at time t
/// after starting at ν, with free evolution.
pub fn survival_trigsum(
    chain: &TightBindingChain,
    partition: &Partition,
    start: &InitialState,
) -> Result<TrigSum> {
    let (decomp, n) = prepare(chain, partition)?;
    Ok(occupation_trigsum(
        &decomp,
        &partition.omega(n),
        start.site() as usize,
    ))
}

/// Return kernel `K(τ) = P_u(ω, τ | b+1, 0)`, sourced at the ω̄-side doorway site.
pub fn return_kernel_trigsum(chain: &TightBindingChain, partition: &Partition) -> Result<TrigSum> {
    let (decomp, n) = prepare(chain, partition)?;
    let (_, outer) = partition.doorway();
    Ok(occupation_trigsum(
        &decomp,
        &partition.omega(n),
        outer as usize,
    ))
}
