//! Bloch eigenvalue problem on the fundamental domain.
//!
//! The Hamiltonian H(k) = ½(−i∇_y + k)² + V_per(y) is discretized by Galerkin
//! truncation in the plane-wave basis φ_n(y) = e^{i g_n·y}/√|Y| with dual
//! lattice vectors g_n = 2π n / a. The basis is orthonormal in L²(Y), so a
//! unit coefficient vector is exactly the normalization ∫_Y |χ_m|² dy = 1.
//! Crystal momenta are reduced to the zone Y* = [−π/a, π/a) per axis.

mod derivatives;
mod potential;

pub use derivatives::{
    band_derivatives, dk_chi, effective_mass_tensor, group_velocity, reduced_resolvent_solve,
    BandDerivatives, MassMethod, ReducedResolvent,
};
pub use potential::PeriodicPotential;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default absolute energy gap below which a band is treated as degenerate.
pub const GAP_TOLERANCE: f64 = 1e-6;

/// Relative spectral residual every returned eigenpair must satisfy.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Real-space lattice: periods per axis and the derived dual-lattice data.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    periods: Vec<f64>,
}

impl Lattice {
    pub fn new(periods: Vec<f64>) -> Result<Self> {
        if periods.is_empty() || periods.len() > 2 {
            return Err(Error::Config(format!(
                "lattice dimension must be 1 or 2, got {}",
                periods.len()
            )));
        }
        if periods.iter().any(|&a| !(a > 0.0)) {
            return Err(Error::Config("lattice periods must be strictly positive".into()));
        }
        Ok(Self { periods })
    }

    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.periods.len()
    }

    pub fn periods(&self) -> &[f64] {
        &self.periods
    }

    /// |Y| = ∏ aᵢ.
    pub fn cell_volume(&self) -> f64 {
        self.periods.iter().product()
    }

    /// Dual-lattice spacing 2π/aᵢ per axis.
    pub fn dual_spacing(&self) -> Vec<f64> {
        self.periods
            .iter()
            .map(|a| 2.0 * std::f64::consts::PI / a)
            .collect()
    }

    /// Reduce k into the Brillouin zone Y* = [−π/a, π/a) per axis.
    pub fn reduce_k(&self, k: &[f64]) -> Result<Vec<f64>> {
        if k.len() != self.dim() {
            return Err(Error::Domain(format!(
                "crystal momentum has dimension {}, lattice has {}",
                k.len(),
                self.dim()
            )));
        }
        Ok(k.iter()
            .zip(self.dual_spacing())
            .map(|(&kj, lj)| kj - lj * (kj / lj + 0.5).floor())
            .collect())
    }

    /// Plane-wave vector g_n for an integer index vector.
    pub fn dual_vector(&self, n: &[i32]) -> Vec<f64> {
        n.iter()
            .zip(self.dual_spacing())
            .map(|(&ni, lj)| ni as f64 * lj)
            .collect()
    }
}

/// Gauge-fixing convention attached to an eigenvector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeTag {
    /// As returned by the eigensolver; no convention applied.
    Raw,
    /// Coefficient of largest modulus made real positive (ties broken by the
    /// lowest plane-wave index in lexicographic order).
    LargestCoeffRealPositive,
}

/// Truncated plane-wave discretization of the Bloch problem.
#[derive(Debug, Clone)]
pub struct BlochProblem {
    pub lattice: Lattice,
    pub potential: PeriodicPotential,
    truncation: usize,
    indices: Vec<Vec<i32>>,
}

impl BlochProblem {
    /// `truncation` is the per-axis index bound N; the matrix dimension is
    /// (2N+1)^d. Requires N ≥ G_max + 2 so every potential coupling fits with
    /// a buffer row.
    pub fn new(lattice: Lattice, potential: PeriodicPotential, truncation: usize) -> Result<Self> {
        potential.check_dim(lattice.dim())?;
        let g_max = potential.index_radius();
        if (truncation as i64) < g_max as i64 + 2 {
            return Err(Error::Config(format!(
                "plane-wave truncation N = {truncation} must be at least G_max + 2 = {}",
                g_max + 2
            )));
        }
        let indices = enumerate_indices(lattice.dim(), truncation as i32);
        Ok(Self {
            lattice,
            potential,
            truncation,
            indices,
        })
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// Plane-wave index vectors in lexicographic order.
    pub fn basis(&self) -> &[Vec<i32>] {
        &self.indices
    }

    pub fn matrix_dim(&self) -> usize {
        self.indices.len()
    }

    /// Assemble the Hermitian Bloch Hamiltonian at crystal momentum k
    /// (reduced modulo the dual lattice).
    pub fn build_hamiltonian(&self, k: &[f64]) -> Result<DMatrix<Complex64>> {
        let k = self.lattice.reduce_k(k)?;
        let dim = self.matrix_dim();
        let mut h = DMatrix::<Complex64>::zeros(dim, dim);
        for (i, ni) in self.indices.iter().enumerate() {
            let g = self.lattice.dual_vector(ni);
            let kin: f64 = g
                .iter()
                .zip(k.iter())
                .map(|(gj, kj)| (gj + kj) * (gj + kj))
                .sum();
            h[(i, i)] = Complex64::new(0.5 * kin, 0.0);
            for (j, nj) in self.indices.iter().enumerate() {
                let dg: Vec<i32> = ni.iter().zip(nj.iter()).map(|(a, b)| a - b).collect();
                if dg.iter().all(|&x| x == 0) {
                    continue;
                }
                if let Some(v) = self.potential.coefficient(&dg) {
                    h[(i, j)] += v;
                }
            }
        }
        Ok(h)
    }

    /// Evaluate χ = Σ c_n φ_n on a uniform y-grid over [0, a) (1D only).
    pub fn chi_on_grid(&self, coeffs: &DVector<Complex64>, n_y: usize) -> Result<Vec<Complex64>> {
        if self.dim() != 1 {
            return Err(Error::Unsupported(
                "cell-grid evaluation is implemented for d = 1".into(),
            ));
        }
        let a = self.lattice.periods()[0];
        let norm = 1.0 / a.sqrt();
        let dy = a / n_y as f64;
        let mut out = vec![Complex64::default(); n_y];
        for (c, n) in coeffs.iter().zip(self.indices.iter()) {
            let g = 2.0 * std::f64::consts::PI * n[0] as f64 / a;
            for (j, o) in out.iter_mut().enumerate() {
                *o += c * norm * Complex64::from_polar(1.0, g * (j as f64 * dy));
            }
        }
        Ok(out)
    }

    /// Project a cell function sampled on a uniform y-grid back onto the
    /// truncated plane-wave basis (1D only). Modes beyond the truncation are
    /// discarded.
    pub fn coeffs_from_grid(&self, values: &[Complex64]) -> Result<DVector<Complex64>> {
        if self.dim() != 1 {
            return Err(Error::Unsupported(
                "cell-grid projection is implemented for d = 1".into(),
            ));
        }
        let n_y = values.len();
        let a = self.lattice.periods()[0];
        let fft = crate::grid::Fft1d::new(n_y);
        let mut hat = values.to_vec();
        fft.forward(&mut hat);
        let dim = self.matrix_dim();
        let mut out = DVector::<Complex64>::zeros(dim);
        for (i, n) in self.indices.iter().enumerate() {
            let m = n[0];
            if m.unsigned_abs() as usize size_check() > n_y / 2 {
                continue;
            }
            let idx = if m >= 0 {
                m as usize
            } else {
                (n_y as i64 + m as i64) as usize
            };
            out[i] = hat[idx] * (a.sqrt() / n_y as f64);
        }
        Ok(out)
    }
}

fn enumerate_indices(dim: usize, n: i32) -> Vec<Vec<i32>> {
    match dim {
        1 => (-n..=n).map(|i| vec![i]).collect(),
        2 => {
            let mut out = Vec::with_capacity(((2 * n + 1) * (2 * n + 1)) as usize);
            for i in -n..=n {
                for j in -n..=n {
                    out.push(vec![i, j]);
                }
            }
            out
        }
        _ => unreachable!("lattice dimension validated on construction"),
    }
}

/// One solved Bloch band at a crystal momentum.
#[derive(Debug, Clone)]
pub struct BlochEigenpair {
    pub k: Vec<f64>,
    pub band: usize,
    pub energy: f64,
    pub coeffs: DVector<Complex64>,
    pub gauge: GaugeTag,
}

/// Solve the lowest `m_max` bands at crystal momentum k.
///
/// Eigenpairs come back sorted ascending in energy, unit-normalized, with the
/// gauge fixed by [`fix_gauge`], and are checked against the spectral residual
/// invariant ‖H c − E c‖ ≤ 1e−10 · max(1, |E|).
pub fn solve_bands(problem: &BlochProblem, k: &[f64], m_max: usize) -> Result<Vec<BlochEigenpair>> {
    let dim = problem.matrix_dim();
    if m_max > dim {
        return Err(Error::Domain(format!(
            "requested {m_max} bands from a dimension-{dim} discretization"
        )));
    }
    let k_red = problem.lattice.reduce_k(k)?;
    let h = problem.build_hamiltonian(&k_red)?;
    let max_iter = 50 * dim.max(8);
    let eig = h
        .clone()
        .try_symmetric_eigen(f64::EPSILON, max_iter)
        .ok_or(Error::EigenNonConvergence { dim, max_iter })?;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("eigenvalues are finite")
    });

    let mut pairs = Vec::with_capacity(m_max);
    for (band, &col) in order.iter().take(m_max).enumerate() {
        let energy = eig.eigenvalues[col];
        let mut c: DVector<Complex64> = eig.eigenvectors.column(col).into_owned();
        let norm = c.norm();
        if norm == 0.0 {
            return Err(Error::EigenNonConvergence { dim, max_iter });
        }
        c /= Complex64::new(norm, 0.0);
        let c = fix_gauge(&c)?;

        let residual = (&h * &c - &c * Complex64::new(energy, 0.0)).norm();
        let tol = RESIDUAL_TOLERANCE * energy.abs().max(1.0);
        if residual > tol {
            return Err(Error::EigenNonConvergence { dim, max_iter });
        }
        pairs.push(BlochEigenpair {
            k: k_red.clone(),
            band,
            energy,
            coeffs: c,
            gauge: GaugeTag::LargestCoeffRealPositive,
        });
    }
    Ok(pairs)
}

/// Distance from E_m to its nearest neighbours among the solved bands.
///
/// Returing +∞ when no neighbour exists (single-band list).
pub fn band_gap(pairs: &[BlochEigenpair], m: usize) -> f64 {
    let em = pairs
        .iter()
        .find(|p| p.band == m)
        .map(|p| p.energy)
        .expect("band m present in the solved list");
    pairs
        .iter()
        .filter(|p| p.band + 1 == m || p.band == m + 1)
        .map(|p| (p.energy - em).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Rotate a unit coefficient vector so its largest-modulus entry is real
/// positive; exact ties resolve to the lowest plane-wave index in
/// lexicographic order (the first entry in basis order).
pub fn fix_gauge(c: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for (i, z) in c.iter().enumerate() {
        let m = z.norm();
        if m > best_mag {
            best_mag = m;
            best = i;
        }
    }
    if best_mag == 0.0 {
        return Err(Error::Domain("cannot fix the gauge of a zero vector".into()));
    }
    let phase = c[best] / Complex64::new(best_mag, 0.0);
    Ok(c / phase)
}
