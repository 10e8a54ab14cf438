//! Operators and states on the tensor product of N spin-1/2 sites and a
//! Fock-truncated cavity mode.
//!
//! The basis ordering is fixed once for the whole crate: spin factors first,
//! site 1 slowest-varying, cavity factor last. A product-basis index is
//! `s * (n_max + 1) + n`, where `s` is the big-endian bit pattern of the spin
//! configuration (bit set = spin down) and `n` the Fock occupation. All
//! constructors are pure; the returned values are immutable and safe to share
//! across threads.

use ndarray::linalg::kron;
use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance on `max|M - M^dagger|` for Hermitian-flagged matrices.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Allowed deviation of a state-vector norm from 1.
pub const NORM_TOL: f64 = 1e-10;
/// Poisson tail mass a truncated coherent state may discard.
pub const COHERENT_TAIL_BOUND: f64 = 1e-8;

/// Shape of the product Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertSpec {
    /// Number of spin-1/2 sites (N >= 1).
    pub n_spins: usize,
    /// Largest retained Fock state; the cavity basis is |0>..|n_max>.
    /// A cutoff of 0 leaves a one-dimensional (inert) cavity factor.
    pub fock_cutoff: usize,
}

impl HilbertSpec {
    pub fn new(n_spins: usize, fock_cutoff: usize) -> Result<Self> {
        if n_spins == 0 {
            return Err(Error::InvalidParameter(
                "n_spins must be at least 1".into(),
            ));
        }
        if n_spins > 48 {
            return Err(Error::BudgetExceeded {
                what: "n_spins",
                size: n_spins,
                limit: 48,
            });
        }
        Ok(Self {
            n_spins,
            fock_cutoff,
        })
    }

    /// Guard for constructors that materialize dim x dim dense matrices.
    /// Shapes above the cap stay usable for closed-form work (momentum sums,
    /// regime formulas) that never touches the product space.
    pub(crate) fn require_dense(&self) -> Result<()> {
        const DENSE_DIM_LIMIT: usize = 8192;
        let dim = self.dim();
        if dim > DENSE_DIM_LIMIT {
            return Err(Error::BudgetExceeded {
                what: "hilbert dimension",
                size: dim,
                limit: DENSE_DIM_LIMIT,
            });
        }
        Ok(())
    }

    pub fn spin_dim(&self) -> usize {
        1 << self.n_spins
    }

    pub fn cavity_dim(&self) -> usize {
        self.fock_cutoff + 1
    }

    /// Total dimension 2^N * (n_max + 1).
    pub fn dim(&self) -> usize {
        self.spin_dim() * self.cavity_dim()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollectiveAxis {
    X,
    Y,
    Z,
    Plus,
    Minus,
}

/// Dense complex matrix with a Hermiticity claim.
///
/// The claim is checked at construction: a Hermitian-flagged matrix must
/// satisfy `max|M - M^dagger| <= HERMITICITY_TOL * max|M|`.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    entries: Array2<Complex64>,
    hermitian: bool,
}

impl OperatorMatrix {
    /// Wrap a matrix claimed Hermitian, verifying the claim.
    pub fn hermitian(entries: Array2<Complex64>) -> Result<Self> {
        let (dev, scale) = hermiticity_deviation(&entries);
        let limit = HERMITICITY_TOL * scale.max(f64::MIN_POSITIVE);
        if dev > limit {
            return Err(Error::NotHermitian { dev, limit });
        }
        Ok(Self {
            entries,
            hermitian: true,
        })
    }

    /// Wrap a matrix with no Hermiticity claim.
    pub fn general(entries: Array2<Complex64>) -> Self {
        Self {
            entries,
            hermitian: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<Complex64> {
        self.entries
    }

    pub fn dagger(&self) -> OperatorMatrix {
        OperatorMatrix {
            entries: self.entries.t().mapv(|z| z.conj()),
            hermitian: self.hermitian,
        }
    }

    /// Matrix product; the result carries no Hermiticity claim.
    pub fn mul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(OperatorMatrix::general(self.entries.dot(&other.entries)))
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(OperatorMatrix {
            entries: &self.entries + &other.entries,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(OperatorMatrix {
            entries: &self.entries - &other.entries,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    /// Scale by a complex number; Hermiticity survives only a real factor.
    pub fn scale(&self, c: Complex64) -> OperatorMatrix {
        OperatorMatrix {
            entries: self.entries.mapv(|z| c * z),
            hermitian: self.hermitian && c.im == 0.0,
        }
    }

    /// Apply to a raw amplitude vector.
    pub fn apply(&self, psi: &Array1<Complex64>) -> Result<Array1<Complex64>> {
        if self.dim() != psi.len() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: psi.len(),
            });
        }
        Ok(self.entries.dot(psi))
    }

    /// <psi| M |psi>.
    pub fn expectation(&self, psi: &StateVector) -> Result<Complex64> {
        let m_psi = self.apply(psi.amplitudes())?;
        Ok(psi
            .amplitudes()
            .iter()
            .zip(m_psi.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// max|M - M^dagger| over entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(&self.entries).0
    }

    /// Operator max-norm (largest entry modulus).
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn hermiticity_deviation(m: &Array2<Complex64>) -> (f64, f64) {
    let mut dev = 0.0f64;
    let mut scale = 0.0f64;
    let n = m.nrows();
    for i in 0..n {
        for j in i..n {
            let d = (m[[i, j]] - m[[j, i]].conj()).norm();
            dev = dev.max(d);
            scale = scale.max(m[[i, j]].norm()).max(m[[j, i]].norm());
        }
    }
    (dev, scale)
}

/// Normalized complex amplitude vector.
#[derive(Debug, Clone)]
pub struct StateVector {
    amplitudes: Array1<Complex64>,
}

impl StateVector {
    /// Wrap an already normalized vector (norm within `NORM_TOL` of 1).
    pub fn new(amplitudes: Array1<Complex64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        let dev = (norm - 1.0).abs();
        if dev > NORM_TOL {
            return Err(Error::NotNormalized { dev });
        }
        Ok(Self { amplitudes })
    }

    /// Normalize and wrap; rejects the zero vector.
    pub fn from_unnormalized(amplitudes: Array1<Complex64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { dev: f64::INFINITY });
        }
        Ok(Self {
            amplitudes: amplitudes.mapv(|z| z / norm),
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amplitudes)
    }

    /// <self|other>.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

fn vec_norm(v: &Array1<Complex64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn pauli_matrix(axis: PauliAxis) -> Array2<Complex64> {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match axis {
        PauliAxis::X => ndarray::array![[z, one], [one, z]],
        PauliAxis::Y => ndarray::array![[z, -i], [i, z]],
        PauliAxis::Z => ndarray::array![[one, z], [z, -one]],
    }
}

fn identity(dim: usize) -> Array2<Complex64> {
    Array2::eye(dim)
}

/// sigma^axis on one site (1-based), identity elsewhere, identity on the cavity.
pub fn pauli_site(spec: &HilbertSpec, site: usize, axis: PauliAxis) -> Result<OperatorMatrix> {
    if site == 0 || site > spec.n_spins {
        return Err(Error::SiteOutOfRange {
            site,
            n_spins: spec.n_spins,
        });
    }
    spec.require_dense()?;
    let op = pauli_site_factor(spec.n_spins, site, axis);
    OperatorMatrix::hermitian(kron(&op, &identity(spec.cavity_dim())))
}

/// Spin-factor matrix of sigma^axis at `site` (1-based, site 1 slowest-varying).
pub(crate) fn pauli_site_factor(n_spins: usize, site: usize, axis: PauliAxis) -> Array2<Complex64> {
    let sigma = pauli_matrix(axis);
    let eye2 = Array2::<Complex64>::eye(2);
    let mut op = Array2::eye(1);
    for s in 1..=n_spins {
        op = kron(&op, if s == site { &sigma } else { &eye2 });
    }
    op
}

/// Collective spin operator J_axis on the full space.
///
/// J_{x,y,z} = sum_i sigma_i^{x,y,z} / 2 and J_+- = J_x +- i J_y.
pub fn collective_spin(spec: &HilbertSpec, axis: CollectiveAxis) -> Result<OperatorMatrix> {
    spec.require_dense()?;
    let op = collective_spin_factor(spec.n_spins, axis);
    let full = kron(&op, &identity(spec.cavity_dim()));
    match axis {
        CollectiveAxis::X | CollectiveAxis::Y | CollectiveAxis::Z => OperatorMatrix::hermitian(full),
        CollectiveAxis::Plus | CollectiveAxis::Minus => Ok(OperatorMatrix::general(full)),
    }
}

/// Spin-factor matrix of a collective spin operator.
pub(crate) fn collective_spin_factor(n_spins: usize, axis: CollectiveAxis) -> Array2<Complex64> {
    let half = Complex64::new(0.5, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match axis {
        CollectiveAxis::X | CollectiveAxis::Y | CollectiveAxis::Z => {
            let pauli = match axis {
                CollectiveAxis::X => PauliAxis::X,
                CollectiveAxis::Y => PauliAxis::Y,
                _ => PauliAxis::Z,
            };
            let dim = 1 << n_spins;
            let mut sum = Array2::<Complex64>::zeros((dim, dim));
            for site in 1..=n_spins {
                sum = sum + pauli_site_factor(n_spins, site, pauli);
            }
            sum.mapv(|z| half * z)
        }
        CollectiveAxis::Plus => {
            let jx = collective_spin_factor(n_spins, CollectiveAxis::X);
            let jy = collective_spin_factor(n_spins, CollectiveAxis::Y);
            jx + jy.mapv(|z| i * z)
        }
        CollectiveAxis::Minus => {
            let jx = collective_spin_factor(n_spins, CollectiveAxis::X);
            let jy = collective_spin_factor(n_spins, CollectiveAxis::Y);
            jx - jy.mapv(|z| i * z)
        }
    }
}

/// Cavity annihilation and creation operators on the full space.
///
/// In the truncated basis a|n> = sqrt(n)|n-1>, so a^dagger a is diagonal with
/// entries 0..n_max and [a, a^dagger] = 1 except in the (n_max, n_max) corner.
pub fn boson_ops(spec: &HilbertSpec) -> Result<(OperatorMatrix, OperatorMatrix)> {
    if spec.fock_cutoff == 0 {
        return Err(Error::CavityRequired);
    }
    spec.require_dense()?;
    let a = annihilation_factor(spec.cavity_dim());
    let adag = a.t().mapv(|z| z.conj());
    let eye = identity(spec.spin_dim());
    Ok((
        OperatorMatrix::general(kron(&eye, &a)),
        OperatorMatrix::general(kron(&eye, &adag)),
    ))
}

/// Cavity-factor annihilation matrix.
pub(crate) fn annihilation_factor(cavity_dim: usize) -> Array2<Complex64> {
    let mut a = Array2::<Complex64>::zeros((cavity_dim, cavity_dim));
    for n in 1..cavity_dim {
        a[[n - 1, n]] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Cavity-factor photon-number matrix.
pub(crate) fn number_factor(cavity_dim: usize) -> Array2<Complex64> {
    let mut n_op = Array2::<Complex64>::zeros((cavity_dim, cavity_dim));
    for n in 0..cavity_dim {
        n_op[[n, n]] = Complex64::new(n as f64, 0.0);
    }
    n_op
}

/// Poisson tail mass P(X > n_max) for mean `n_bar`.
///
/// Summed upward from the first discarded term in log space, so it stays
/// accurate where the forward CDF would lose everything to cancellation.
pub fn poisson_tail(n_bar: f64, n_max: usize) -> f64 {
    if n_bar <= 0.0 {
        return 0.0;
    }
    let m = n_max + 1;
    // ln p(m) = -a + m ln a - ln m!
    let mut ln_fact = 0.0;
    for k in 1..=m {
        ln_fact += (k as f64).ln();
    }
    let ln_p = -n_bar + (m as f64) * n_bar.ln() - ln_fact;
    let mut term = ln_p.exp();
    let mut tail = 0.0;
    let mut n = m;
    while term > tail * 1e-18 + 1e-320 {
        tail += term;
        n += 1;
        term *= n_bar / n as f64;
    }
    tail
}

/// Smallest cutoff satisfying the 1e-8 tail bound for mean `n_bar`.
pub fn minimal_fock_cutoff(n_bar: f64) -> usize {
    let mut n_max = n_bar.ceil() as usize;
    while poisson_tail(n_bar, n_max) > COHERENT_TAIL_BOUND {
        n_max += 1;
    }
    n_max
}

/// Default truncation rule n_max = ceil(n_bar + 10 sqrt(n_bar) + 10).
///
/// Poisson concentration puts the 1e-8 tail boundary well below this, and the
/// result is then re-checked against the tail bound by `coherent_state`.
pub fn default_fock_cutoff(n_bar: f64) -> usize {
    (n_bar + 10.0 * n_bar.sqrt() + 10.0).ceil() as usize
}

/// Truncated coherent state |alpha> on the cavity factor, renormalized.
///
/// Requires the discarded Poisson tail to be at most `COHERENT_TAIL_BOUND`;
/// the error reports the smallest adequate cutoff.
pub fn coherent_state(spec: &HilbertSpec, alpha: Complex64) -> Result<StateVector> {
    let n_bar = alpha.norm_sqr();
    let tail = poisson_tail(n_bar, spec.fock_cutoff);
    if tail > COHERENT_TAIL_BOUND {
        return Err(Error::TruncationTooSmall {
            n_max: spec.fock_cutoff,
            n_bar,
            tail,
            bound: COHERENT_TAIL_BOUND,
            required: minimal_fock_cutoff(n_bar),
        });
    }
    let dim = spec.cavity_dim();
    let mut amps = Array1::<Complex64>::zeros(dim);
    amps[0] = Complex64::new(1.0, 0.0);
    for n in 1..dim {
        amps[n] = amps[n - 1] * alpha / Complex64::new((n as f64).sqrt(), 0.0);
    }
    StateVector::from_unnormalized(amps)
}

/// Spin-coherent product state on the spin factor:
/// tensor over sites of cos(theta/2)|up> + e^{i phi} sin(theta/2)|down>.
pub fn spin_coherent_state(spec: &HilbertSpec, theta: f64, phi: f64) -> StateVector {
    let up = Complex64::new((theta / 2.0).cos(), 0.0);
    let down = Complex64::from_polar((theta / 2.0).sin(), phi);
    let site = Array1::from_vec(vec![up, down]);
    let mut state = Array1::from_vec(vec![Complex64::new(1.0, 0.0)]);
    for _ in 0..spec.n_spins {
        state = kron_vec(&state, &site);
    }
    StateVector::from_unnormalized(state).expect("spin-coherent state has positive norm")
}

/// Kronecker product of two operators in the declared basis ordering
/// (left factor slowest-varying).
pub fn tensor_op(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    OperatorMatrix {
        entries: kron(a.entries(), b.entries()),
        hermitian: a.hermitian && b.hermitian,
    }
}

/// Kronecker product of two states (left factor slowest-varying).
pub fn tensor_state(a: &StateVector, b: &StateVector) -> StateVector {
    StateVector {
        amplitudes: kron_vec(a.amplitudes(), b.amplitudes()),
    }
}

fn kron_vec(a: &Array1<Complex64>, b: &Array1<Complex64>) -> Array1<Complex64> {
    let mut out = Array1::<Complex64>::zeros(a.len() * b.len());
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i * b.len() + j] = ai * bj;
        }
    }
    out
}
