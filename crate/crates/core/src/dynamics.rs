//! Time evolution by spectral decomposition and the full-vs-effective
//! dynamics comparison.
//!
//! A `Propagator` diagonalizes a Hermitian matrix once and then evaluates
//! exp(-iHt)|psi> at any t with two matrix-vector products, so there is no
//! step-size error anywhere in the crate's dynamics.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonians::{self, validity_report, SystemParams, ValidityReport};
use crate::hilbert::{
    coherent_state, collective_spin, spin_coherent_state, tensor_state, CollectiveAxis,
    OperatorMatrix, StateVector,
};
use crate::linalg;

/// Absolute imaginary residue tolerated in a Hermitian expectation value.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// Sampled real-valued observable trajectory.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub observable_label: String,
}

/// Which Hamiltonian drives the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Full,
    Eff,
    EffS,
}

/// Spectral form of a Hermitian operator, reusable across time points.
pub struct Propagator {
    eigenvalues: Array1<f64>,
    eigenvectors: Array2<Complex64>,
}

impl Propagator {
    pub fn new(h: &OperatorMatrix) -> Result<Self> {
        if !h.is_hermitian() {
            return Err(Error::NotHermitian {
                dev: h.hermiticity_deviation(),
                limit: 0.0,
            });
        }
        let (w, v) = linalg::eigh_complex(h.entries())?;
        Ok(Self {
            eigenvalues: w,
            eigenvectors: v,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// exp(-iHt)|psi>.
    pub fn evolve(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: psi.dim(),
            });
        }
        // c = V^dag psi, c_j *= e^{-i E_j t}, psi' = V c
        let vt = self.eigenvectors.t();
        let mut c = Array1::<Complex64>::zeros(self.dim());
        for (j, row) in vt.rows().into_iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(psi.amplitudes().iter()) {
                acc += a.conj() * b;
            }
            c[j] = acc * Complex64::from_polar(1.0, -self.eigenvalues[j] * t);
        }
        let out = self.eigenvectors.dot(&c);
        StateVector::new(out)
    }
}

/// One-shot evolution; diagonalizes and evolves once.
pub fn evolve(h: &OperatorMatrix, psi: &StateVector, t: f64) -> Result<StateVector> {
    Propagator::new(h)?.evolve(psi, t)
}

/// The product initial state |theta, phi> (x) |alpha> declared by the
/// parameter set.
pub fn initial_state(p: &SystemParams) -> Result<StateVector> {
    let spins = spin_coherent_state(&p.hilbert, p.theta, p.phi);
    let cavity = coherent_state(&p.hilbert, p.alpha())?;
    Ok(tensor_state(&spins, &cavity))
}

/// Build the Hamiltonian selected by `model`.
pub fn build_model(p: &SystemParams, model: Model) -> Result<OperatorMatrix> {
    match model {
        Model::Full => hamiltonians::build_full(p),
        Model::Eff => hamiltonians::build_eff(p),
        Model::EffS => hamiltonians::build_eff_s(p),
    }
}

/// J_phi = J_x cos(varphi) + J_y sin(varphi) on the full space.
pub fn j_phi_operator(p: &SystemParams) -> Result<OperatorMatrix> {
    let jx = collective_spin(&p.hilbert, CollectiveAxis::X)?;
    let jy = collective_spin(&p.hilbert, CollectiveAxis::Y)?;
    jx.scale(Complex64::new(p.varphi.cos(), 0.0))
        .add(&jy.scale(Complex64::new(p.varphi.sin(), 0.0)))
}

/// <J_phi(t)> under the chosen model, starting from |theta,phi> (x) |alpha>.
pub fn j_phi_series(p: &SystemParams, model: Model, times: &[f64]) -> Result<TimeSeries> {
    let h = build_model(p, model)?;
    let prop = Propagator::new(&h)?;
    let psi0 = initial_state(p)?;
    let j_phi = j_phi_operator(p)?;
    let imag_limit = IMAG_RESIDUE_TOL * (1.0 + p.xy.n_spins as f64 / 2.0);
    let mut values = Vec::with_capacity(times.len());
    for &t in times {
        let psi = prop.evolve(&psi0, t)?;
        let ex = j_phi.expectation(&psi)?;
        if ex.im.abs() > imag_limit {
            return Err(Error::InvalidParameter(format!(
                "J_phi expectation has imaginary residue {:.3e}",
                ex.im
            )));
        }
        values.push(ex.re);
    }
    Ok(TimeSeries {
        times: times.to_vec(),
        values,
        observable_label: format!("J_phi(varphi={})", p.varphi),
    })
}

/// Pointwise full-vs-effective comparison plus the validity diagnostics.
///
/// A failing validity report does not abort the run; it is recorded in the
/// returned struct for the caller to surface.
#[derive(Debug, Clone)]
pub struct DynamicsComparison {
    pub max_abs_dev: f64,
    pub mean_abs_dev: f64,
    pub series_full: TimeSeries,
    pub series_eff: TimeSeries,
    pub validity: ValidityReport,
}

pub fn compare_dynamics(p: &SystemParams, times: &[f64]) -> Result<DynamicsComparison> {
    let validity = validity_report(p, hamiltonians::DEFAULT_VALIDITY_THRESHOLD);
    let series_full = j_phi_series(p, Model::Full, times)?;
    let series_eff = j_phi_series(p, Model::Eff, times)?;
    let mut max_abs_dev = 0.0f64;
    let mut sum = 0.0f64;
    for (a, b) in series_full.values.iter().zip(series_eff.values.iter()) {
        let d = (a - b).abs();
        max_abs_dev = max_abs_dev.max(d);
        sum += d;
    }
    let mean_abs_dev = if times.is_empty() {
        0.0
    } else {
        sum / times.len() as f64
    };
    Ok(DynamicsComparison {
        max_abs_dev,
        mean_abs_dev,
        series_full,
        series_eff,
        validity,
    })
}
