//! Tight-binding chains, the ω/ω̄ partition and the doorway condition.
//!
//! Finite chains index their sites `1..=n`. The infinite lattice uses all
//! integers with ω = {…, −1, 0} and ω̄ = {1, 2, …}, so its only admissible
//! boundary is `0`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Number of sites in a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sites {
    Finite(usize),
    Infinite,
}

/// Nearest-neighbour tight-binding Hamiltonian with real couplings (ħ = 1).
///
/// `H = Σ εₙ |n⟩⟨n| − Σ γₙ (|n+1⟩⟨n| + |n⟩⟨n+1|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TightBindingChain {
    sites: Sites,
    site_energies: Vec<f64>,
    couplings: Vec<f64>,
}

impl TightBindingChain {
    /// Chain with explicit site energies (length n) and couplings (length n − 1).
    ///
    /// Zero couplings are accepted here; [`validate_doorway`] rejects a zero
    /// coupling across the boundary.
    pub fn new(site_energies: Vec<f64>, couplings: Vec<f64>) -> Result<Self> {
        let n = site_energies.len();
        if n == 0 {
            return Err(Error::InvalidChain(
                "a chain needs at least one site".into(),
            ));
        }
        if couplings.len() != n - 1 {
            return Err(Error::InvalidChain(format!(
                "{n} sites need {} couplings, got {}",
                n - 1,
                couplings.len()
            )));
        }
        if site_energies
            .iter()
            .chain(&couplings)
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidChain(
                "energies and couplings must be finite".into(),
            ));
        }
        Ok(Self {
            sites: Sites::Finite(n),
            site_energies,
            couplings,
        })
    }

    /// `n` sites, zero site energies and unit couplings.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n], vec![1.0; n.saturating_sub(1)])
    }

    /// The infinite lattice with zero site energies and unit hopping.
    pub fn infinite() -> Self {
        Self {
            sites: Sites::Infinite,
            site_energies: vec![0.0],
            couplings: vec![1.0],
        }
    }

    pub fn sites(&self) -> Sites {
        self.sites
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.sites, Sites::Finite(_))
    }

    /// Number of sites of a finite chain.
    pub fn len(&self) -> Result<usize> {
        match self.sites {
            Sites::Finite(n) => Ok(n),
            Sites::Infinite => Err(Error::UnsupportedFiniteOp),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn site_energies(&self) -> &[f64] {
        &self.site_energies
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    /// Coupling between site `n` and `n + 1` (1-based site numbers for
    /// finite chains, any integer for the lattice).
    pub fn coupling_after(&self, n: i64) -> Option<f64> {
        match self.sites {
            Sites::Finite(len) => {
                if n >= 1 && (n as usize) < len {
                    Some(self.couplings[n as usize - 1])
                } else {
                    None
                }
            }
            Sites::Infinite => Some(self.couplings[0]),
        }
    }
}

/// Split of the sites into ω (index ≤ boundary) and ω̄ (index > boundary).
/// The doorway pair is `(boundary, boundary + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Partition {
    boundary: i64,
}

impl Partition {
    /// Partition of a finite chain; needs at least one site on each side.
    pub fn new(chain: &TightBindingChain, boundary: i64) -> Result<Self> {
        match chain.sites() {
            Sites::Finite(n) => {
                if boundary < 1 || boundary >= n as i64 {
                    return Err(Error::Precondition(format!(
                        "boundary {boundary} must lie in 1..{n} for a {n}-site chain"
                    )));
                }
            }
            Sites::Infinite => {
                if boundary != 0 {
                    return Err(Error::Precondition(format!(
                        "the infinite lattice is split after site 0, not {boundary}"
                    )));
                }
            }
        }
        Ok(Self { boundary })
    }

    /// ω = {…, −1, 0}, ω̄ = {1, 2, …}.
    pub fn lattice() -> Self {
        Self { boundary: 0 }
    }

    pub fn boundary(&self) -> i64 {
        self.boundary
    }

    /// The doorway sites `(inside ω, inside ω̄)`.
    pub fn doorway(&self) -> (i64, i64) {
        (self.boundary, self.boundary + 1)
    }

    pub fn contains_omega(&self, site: i64) -> bool {
        site <= self.boundary
    }

    /// Sites of ω for an `n`-site chain.
    pub fn omega(&self, n: usize) -> Vec<usize> {
        (1..=(self.boundary.max(0) as usize).min(n)).collect()
    }

    /// Sites of ω̄ for an `n`-site chain.
    pub fn omega_bar(&self, n: usize) -> Vec<usize> {
        ((self.boundary.max(0) as usize + 1)..=n).collect()
    }
}

/// Starting site ν, always inside ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InitialState {
    start_site: i64,
}

impl InitialState {
    pub fn new(chain: &TightBindingChain, partition: &Partition, start_site: i64) -> Result<Self> {
        if chain.is_finite() && start_site < 1 {
            return Err(Error::Precondition(format!(
                "site {start_site} does not exist"
            )));
        }
        if !partition.contains_omega(start_site) {
            return Err(Error::Precondition(format!(
                "start site {start_site} is not in ω (sites ≤ {})",
                partition.boundary()
            )));
        }
        Ok(Self { start_site })
    }

    pub fn site(&self) -> i64 {
        self.start_site
    }
}

/// Real symmetric tridiagonal Hamiltonian matrix; row/column `i` is site `i + 1`.
pub fn build_hamiltonian(chain: &TightBindingChain) -> Result<DMatrix<f64>> {
    let n = chain.len()?;
    let mut h = DMatrix::zeros(n, n);
    for (i, &e) in chain.site_energies().iter().enumerate() {
        h[(i, i)] = e;
    }
    for (i, &g) in chain.couplings().iter().enumerate() {
        h[(i, i + 1)] = -g;
        h[(i + 1, i)] = -g;
    }
    Ok(h)
}

/// Eigen-decomposition `H = U diag(E) Uᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the eigenvector of `eigenvalues[j]`; its first
    /// non-negligible component is positive.
    pub eigenvectors: DMatrix<f64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Component of eigenvector `j` on site row `m` (0-based).
    pub fn component(&self, m: usize, j: usize) -> f64 {
        self.eigenvectors[(m, j)]
    }
}

pub fn spectral_decompose(h: &DMatrix<f64>) -> Result<SpectralDecomposition> {
    if !h.is_square() {
        return Err(Error::Precondition("matrix is not square".into()));
    }
    let n = h.nrows();
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let eigenvalues = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (col, &j) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(j);
        let sign = v
            .iter()
            .find(|x| x.abs() > 1e-10)
            .map_or(1.0, |x| x.signum());
        eigenvectors.set_column(col, &(v * sign));
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Checks the doorway condition for a chain and partition.
pub fn validate_doorway(chain: &TightBindingChain, partition: &Partition) -> Result<()> {
    match chain.sites() {
        Sites::Finite(_) => {
            let h = build_hamiltonian(chain)?;
            validate_doorway_matrix(&h, partition.boundary())
        }
        Sites::Infinite => {
            if partition.boundary() != 0 {
                return Err(Error::Precondition("lattice boundary must be 0".into()));
            }
            if chain.coupling_after(0) == Some(0.0) {
                return Err(Error::Disconnected { boundary: 0 });
            }
            Ok(())
        }
    }
}

/// Doorway check for an arbitrary symmetric coupling matrix, with sites
/// `1..=boundary` in ω. Counts the nonzero matrix elements linking ω to ω̄.
pub fn validate_doorway_matrix(h: &DMatrix<f64>, boundary: i64) -> Result<()> {
    let n = h.nrows();
    if boundary < 1 || boundary as usize >= n {
        return Err(Error::Precondition(format!(
            "boundary {boundary} must lie in 1..{n}"
        )));
    }
    let b = boundary as usize;
    let count = (0..b)
        .flat_map(|i| (b..n).map(move |j| (i, j)))
        .filter(|&(i, j)| h[(i, j)] != 0.0 || h[(j, i)] != 0.0)
        .count();
    match count {
        0 => Err(Error::Disconnected { boundary: b }),
        1 => Ok(()),
        count => Err(Error::MultiDoorway { boundary: b, count }),
    }
}
