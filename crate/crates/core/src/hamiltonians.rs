//! Builders for the full cavity-chain Hamiltonian, its two effective
//! reductions, the rotating-frame form, and the validity-condition report.
//!
//! All frequency-like parameters are angular frequencies (rad/s). Front ends
//! that accept plain frequencies divide by 2 pi on load, never here. The
//! detuning Delta = omega0 - h - omega_a is recomputed from the fields on
//! every call because h is the swept estimation parameter.

use ndarray::linalg::kron;
use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::freefermion::XYParams;
use crate::hilbert::{
    annihilation_factor, collective_spin_factor, number_factor, pauli_site_factor, CollectiveAxis,
    HilbertSpec, OperatorMatrix, PauliAxis,
};

/// Everything needed to build the system: frequencies, chain parameters,
/// initial-state angles, and the numerical Hilbert-space shape.
#[derive(Debug, Clone)]
pub struct SystemParams {
    /// Spin transition angular frequency omega_0.
    pub omega0: f64,
    /// Cavity angular frequency omega_a.
    pub omega_a: f64,
    /// Atom-light coupling g (half the single-photon Rabi frequency).
    pub g: f64,
    pub xy: XYParams,
    /// Mean photon number of the injected coherent state.
    pub n_bar: f64,
    /// Phase of alpha; observables depend on alpha only through n_bar.
    pub alpha_phase: f64,
    /// Spin-coherent initial-state polar angle.
    pub theta: f64,
    /// Spin-coherent initial-state azimuth.
    pub phi: f64,
    /// Measurement axis angle for J_phi = J_x cos phi + J_y sin phi.
    pub varphi: f64,
    pub hilbert: HilbertSpec,
}

impl SystemParams {
    /// Detuning Delta = omega0 - h - omega_a, recomputed on every call.
    pub fn detuning(&self) -> f64 {
        self.omega0 - self.xy.h - self.omega_a
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::from_polar(self.n_bar.sqrt(), self.alpha_phase)
    }

    /// Copy with the estimated field replaced (used by parameter sweeps and
    /// finite-difference derivatives).
    pub fn with_h(&self, h: f64) -> SystemParams {
        let mut p = self.clone();
        p.xy.h = h;
        p
    }

    pub(crate) fn require_detuning(&self) -> Result<f64> {
        let d = self.detuning();
        if d == 0.0 {
            return Err(Error::SingularDetuning);
        }
        Ok(d)
    }
}

/// Magnitude ratios behind the effective-Hamiltonian approximation.
#[derive(Debug, Clone, Copy)]
pub struct ValidityReport {
    /// Delta^2 / (g^2 N)
    pub r1: f64,
    /// Delta^2 n_bar / (g^2 N^2)
    pub r2: f64,
    /// |Delta| / lambda
    pub r3: f64,
    /// n_bar / N
    pub r4: f64,
    pub threshold: f64,
    pub pass: bool,
}

pub const DEFAULT_VALIDITY_THRESHOLD: f64 = 10.0;

/// Evaluate the validity ratios; `pass` iff all of them clear `threshold`.
/// Ratios with a vanishing denominator report as +infinity (the condition
/// is then vacuous, matching the g -> 0 and lambda -> 0 limits).
pub fn validity_report(p: &SystemParams, threshold: f64) -> ValidityReport {
    let d = p.detuning();
    let n = p.xy.n_spins as f64;
    let g2 = p.g * p.g;
    let ratio = |num: f64, den: f64| if den == 0.0 { f64::INFINITY } else { num / den };
    let r1 = ratio(d * d, g2 * n);
    let r2 = ratio(d * d * p.n_bar, g2 * n * n);
    let r3 = ratio(d.abs(), p.xy.lambda);
    let r4 = p.n_bar / n;
    let pass = r1.min(r2).min(r3).min(r4) >= threshold;
    ValidityReport {
        r1,
        r2,
        r3,
        r4,
        threshold,
        pass,
    }
}

/// XY-chain Hamiltonian on the spin factor with an explicit field value:
/// H_0(x) = -(lambda/2) sum_i [(1+gamma)/2 sx sx + (1-gamma)/2 sy sy] - (x/2) sum_i sz,
/// periodic boundary (site N+1 = site 1).
pub fn xy_spin_hamiltonian(
    spec: &HilbertSpec,
    xy: &XYParams,
    field: f64,
) -> Result<OperatorMatrix> {
    spec.require_dense()?;
    let n = spec.n_spins;
    if xy.lambda != 0.0 && n < 2 {
        return Err(Error::InvalidParameter(
            "nearest-neighbor coupling needs at least two sites".into(),
        ));
    }
    let dim = spec.spin_dim();
    let mut h = Array2::<Complex64>::zeros((dim, dim));
    if xy.lambda != 0.0 {
        let cx = Complex64::new(-xy.lambda / 2.0 * (1.0 + xy.gamma) / 2.0, 0.0);
        let cy = Complex64::new(-xy.lambda / 2.0 * (1.0 - xy.gamma) / 2.0, 0.0);
        for i in 1..=n {
            let j = i % n + 1;
            let sxi = pauli_site_factor(n, i, PauliAxis::X);
            let sxj = pauli_site_factor(n, j, PauliAxis::X);
            let syi = pauli_site_factor(n, i, PauliAxis::Y);
            let syj = pauli_site_factor(n, j, PauliAxis::Y);
            h = h + sxi.dot(&sxj).mapv(|z| cx * z) + syi.dot(&syj).mapv(|z| cy * z);
        }
    }
    let cz = Complex64::new(-field / 2.0, 0.0);
    for i in 1..=n {
        h = h + pauli_site_factor(n, i, PauliAxis::Z).mapv(|z| cz * z);
    }
    OperatorMatrix::hermitian(h)
}

fn spin_identity(spec: &HilbertSpec) -> Array2<Complex64> {
    Array2::eye(spec.spin_dim())
}

fn cavity_identity(spec: &HilbertSpec) -> Array2<Complex64> {
    Array2::eye(spec.cavity_dim())
}

/// Full Hamiltonian:
/// H = omega0 J_z + omega_a a^dag a + H_0(h) + g (a^dag J_- + a J_+).
pub fn build_full(p: &SystemParams) -> Result<OperatorMatrix> {
    let spec = &p.hilbert;
    if p.g != 0.0 && spec.fock_cutoff == 0 {
        return Err(Error::CavityRequired);
    }
    spec.require_dense()?;
    let jz = collective_spin_factor(spec.n_spins, CollectiveAxis::Z);
    let h0 = xy_spin_hamiltonian(spec, &p.xy, p.xy.h)?;
    let spin_part = h0.entries() + &jz.mapv(|z| Complex64::new(p.omega0, 0.0) * z);

    let ic = cavity_identity(spec);
    let is = spin_identity(spec);
    let n_op = number_factor(spec.cavity_dim());

    let mut h = kron(&spin_part, &ic);
    h = h + kron(&is, &n_op.mapv(|z| Complex64::new(p.omega_a, 0.0) * z));
    if p.g != 0.0 {
        let a = annihilation_factor(spec.cavity_dim());
        let adag = a.t().mapv(|z| z.conj());
        let jp = collective_spin_factor(spec.n_spins, CollectiveAxis::Plus);
        let jm = collective_spin_factor(spec.n_spins, CollectiveAxis::Minus);
        let g = Complex64::new(p.g, 0.0);
        h = h + kron(&jm, &adag).mapv(|z| g * z) + kron(&jp, &a).mapv(|z| g * z);
    }
    OperatorMatrix::hermitian(h)
}

/// Schroedinger-picture effective Hamiltonian:
/// H = H_0(h - omega0) + (2 g^2 / Delta) J_z a^dag a + (g^2 / Delta) J_+ J_-.
pub fn build_eff_s(p: &SystemParams) -> Result<OperatorMatrix> {
    let d = p.require_detuning()?;
    let base = build_eff(p)?;
    let spec = &p.hilbert;
    let jp = collective_spin_factor(spec.n_spins, CollectiveAxis::Plus);
    let jm = collective_spin_factor(spec.n_spins, CollectiveAxis::Minus);
    let c = Complex64::new(p.g * p.g / d, 0.0);
    let extra = kron(&jp.dot(&jm).mapv(|z| c * z), &cavity_identity(spec));
    OperatorMatrix::hermitian(base.into_entries() + extra)
}

/// Reduced effective Hamiltonian (photon number conserved):
/// H = H_0(h - omega0) + (2 g^2 / Delta) J_z a^dag a.
pub fn build_eff(p: &SystemParams) -> Result<OperatorMatrix> {
    let d = p.require_detuning()?;
    let spec = &p.hilbert;
    let h0 = xy_spin_hamiltonian(spec, &p.xy, p.xy.h - p.omega0)?;
    let jz = collective_spin_factor(spec.n_spins, CollectiveAxis::Z);
    let n_op = number_factor(spec.cavity_dim());
    let c = Complex64::new(2.0 * p.g * p.g / d, 0.0);
    let h = kron(h0.entries(), &cavity_identity(spec)) + kron(&jz.mapv(|z| c * z), &n_op);
    OperatorMatrix::hermitian(h)
}

/// Rotating-frame effective Hamiltonian:
/// H = -Delta a^dag a + (2 g^2 / Delta) J_z a^dag a + (g^2 / Delta) J_+ J_-.
pub fn build_eff_rotating(p: &SystemParams) -> Result<OperatorMatrix> {
    let d = p.require_detuning()?;
    let spec = &p.hilbert;
    let n_op = number_factor(spec.cavity_dim());
    let jz = collective_spin_factor(spec.n_spins, CollectiveAxis::Z);
    let jp = collective_spin_factor(spec.n_spins, CollectiveAxis::Plus);
    let jm = collective_spin_factor(spec.n_spins, CollectiveAxis::Minus);
    let c_num = Complex64::new(-d, 0.0);
    let c_disp = Complex64::new(2.0 * p.g * p.g / d, 0.0);
    let c_exch = Complex64::new(p.g * p.g / d, 0.0);
    let h = kron(&spin_identity(spec), &n_op.mapv(|z| c_num * z))
        + kron(&jz.mapv(|z| c_disp * z), &n_op)
        + kron(&jp.dot(&jm).mapv(|z| c_exch * z), &cavity_identity(spec));
    OperatorMatrix::hermitian(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{boson_ops, collective_spin};
    use crate::linalg;
    use crate::testutil::{caption_params, toy_params, TWO_PI};
    use std::f64::consts::PI;

    fn op_norm(m: &OperatorMatrix) -> f64 {
        m.max_abs()
    }

    fn commutator_norm(a: &OperatorMatrix, b: &OperatorMatrix) -> f64 {
        let ab = a.mul(b).unwrap();
        let ba = b.mul(a).unwrap();
        ab.sub(&ba).unwrap().max_abs()
    }

    #[test]
    fn decoupled_spectrum() {
        // g = 0, lambda = 0, h = 0: spectrum is omega0 m_z + omega_a n
        let mut p = toy_params();
        p.g = 0.0;
        p.xy = XYParams::new(0.0, 1.0, 0.0, 2).unwrap();
        let h = build_full(&p).unwrap();
        let (w, _) = linalg::eigh_complex(h.entries()).unwrap();
        let mut expect: Vec<f64> = Vec::new();
        for mz in [-1.0f64, 0.0, 0.0, 1.0] {
            for n in 0..=p.hilbert.fock_cutoff {
                expect.push(p.omega0 * mz + p.omega_a * n as f64);
            }
        }
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in w.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn jaynes_cummings_ladder() {
        // N = 1, lambda = 0: each excitation block splits by the Rabi formula
        let p = SystemParams {
            omega0: 6.0,
            omega_a: 5.0,
            g: 0.3,
            xy: XYParams::new(0.0, 1.0, 0.0, 1).unwrap(),
            n_bar: 0.0,
            alpha_phase: 0.0,
            theta: 0.0,
            phi: 0.0,
            varphi: 0.0,
            hilbert: HilbertSpec::new(1, 6).unwrap(),
        };
        let h = build_full(&p).unwrap();
        let (w, _) = linalg::eigh_complex(h.entries()).unwrap();
        // block with total excitation n: |up, n-1> and |down, n>
        // (sigma_z eigenvalues are +-1, so the bare splitting is omega0 - omega_a)
        let delta = p.omega0 - p.omega_a;
        let mut expect: Vec<f64> = vec![-p.omega0 / 2.0]; // |down, 0>... ground: J_z = -1/2
        for n in 1..=6usize {
            let nf = n as f64;
            let mid = p.omega0 / 2.0 + p.omega_a * (nf - 1.0) - delta / 2.0;
            let rabi = 0.5 * (delta * delta + 4.0 * p.g * p.g * nf).sqrt();
            expect.push(mid - rabi);
            expect.push(mid + rabi);
        }
        // the truncated top block |up, n_max> is unpaired
        expect.push(p.omega0 / 2.0 + p.omega_a * 6.0);
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(w.len(), expect.len());
        for (a, b) in w.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn tc_conservation_law() {
        // lambda = 0: [H, J_z + a^dag a] = 0
        let mut p = toy_params();
        p.xy = XYParams::new(0.0, 1.0, 0.3, 2).unwrap();
        let h = build_full(&p).unwrap();
        let jz = collective_spin(&p.hilbert, CollectiveAxis::Z).unwrap();
        let (a, adag) = boson_ops(&p.hilbert).unwrap();
        let total = jz.add(&adag.mul(&a).unwrap()).unwrap();
        let c = commutator_norm(&h, &total);
        assert!(c < 1e-12 * op_norm(&h), "commutator {c}");
    }

    #[test]
    fn builders_hermitian_at_caption_parameters() {
        let p = caption_params(2, 4.0, 16);
        for h in [
            build_full(&p).unwrap(),
            build_eff(&p).unwrap(),
            build_eff_s(&p).unwrap(),
            build_eff_rotating(&p).unwrap(),
        ] {
            assert!(h.is_hermitian());
            assert!(h.hermiticity_deviation() <= 1e-12 * op_norm(&h).max(1.0));
        }
    }

    #[test]
    fn eff_s_minus_eff_is_exchange_term() {
        let p = toy_params();
        let diff = build_eff_s(&p)
            .unwrap()
            .sub(&build_eff(&p).unwrap())
            .unwrap();
        let d = p.detuning();
        let jp = collective_spin(&p.hilbert, CollectiveAxis::Plus).unwrap();
        let jm = collective_spin(&p.hilbert, CollectiveAxis::Minus).unwrap();
        let expect = jp
            .mul(&jm)
            .unwrap()
            .scale(Complex64::new(p.g * p.g / d, 0.0));
        let dev = diff.sub(&expect).unwrap().max_abs();
        assert!(dev < 1e-12 * op_norm(&expect).max(1.0));
    }

    #[test]
    fn eff_commutes_with_photon_number() {
        let p = toy_params();
        let heff = build_eff(&p).unwrap();
        let (a, adag) = boson_ops(&p.hilbert).unwrap();
        let n_op = adag.mul(&a).unwrap();
        let c = commutator_norm(&heff, &n_op);
        assert!(c <= 1e-12 * op_norm(&heff).max(1.0));
    }

    #[test]
    fn eff_diagonal_when_interaction_free() {
        // lambda = 0: H_eff is diagonal in the product basis
        let mut p = toy_params();
        p.xy = XYParams::new(0.0, 1.0, 0.3, 2).unwrap();
        let heff = build_eff(&p).unwrap();
        let e = heff.entries();
        let d = p.detuning();
        let nc = p.hilbert.cavity_dim();
        for i in 0..p.hilbert.dim() {
            for j in 0..p.hilbert.dim() {
                if i != j {
                    assert!(e[[i, j]].norm() < 1e-14);
                }
            }
            // diagonal: -(h - omega0) m_z + (2g^2/Delta) m_z n
            let s = i / nc;
            let n = (i % nc) as f64;
            let mz = 1.0 - (s as u64).count_ones() as f64; // N=2: m_z in {1,0,0,-1}
            let expect = -(p.xy.h - p.omega0) * mz + 2.0 * p.g * p.g / d * mz * n;
            assert!((e[[i, i]].re - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn g_zero_reductions() {
        let mut p = toy_params();
        p.g = 0.0;
        // eff_s reduces to H_0(h - omega0) exactly
        let heff_s = build_eff_s(&p).unwrap();
        let h0 = xy_spin_hamiltonian(&p.hilbert, &p.xy, p.xy.h - p.omega0).unwrap();
        let embedded = kron(h0.entries(), &Array2::eye(p.hilbert.cavity_dim()));
        let dev = (&embedded - heff_s.entries())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-13);
        // rotating frame reduces to -Delta a^dag a
        let hr = build_eff_rotating(&p).unwrap();
        let nc = p.hilbert.cavity_dim();
        for i in 0..p.hilbert.dim() {
            let n = (i % nc) as f64;
            assert!((hr.entries()[[i, i]].re + p.detuning() * n).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_detuning_rejected() {
        let mut p = toy_params();
        p.omega0 = 4.0;
        p.omega_a = 4.0 - p.xy.h;
        assert!(matches!(build_eff(&p), Err(Error::SingularDetuning)));
        assert!(matches!(build_eff_s(&p), Err(Error::SingularDetuning)));
        assert!(matches!(
            build_eff_rotating(&p),
            Err(Error::SingularDetuning)
        ));
    }

    #[test]
    fn validity_report_caption_values() {
        // r1 = (10 / 1.05)^2 / 4, r2 = r1 * n_bar / N with the caption numbers
        let p = caption_params(4, 40.0, 114);
        let d = p.detuning();
        assert!((d / TWO_PI - 1e7).abs() < 1.0, "Delta/2pi = {}", d / TWO_PI);
        let rep = validity_report(&p, DEFAULT_VALIDITY_THRESHOLD);
        assert!((rep.r1 - 22.675736961405892).abs() < 1e-6);
        assert!((rep.r2 - 226.75736961405892).abs() < 1e-5);
        assert!((rep.r4 - 10.0).abs() < 1e-12);
        assert!(rep.pass);
    }

    #[test]
    fn validity_report_g_zero_limits() {
        let mut p = toy_params();
        p.g = 0.0;
        let rep = validity_report(&p, 10.0);
        assert!(rep.r1.is_infinite() && rep.r2.is_infinite());
        // pass now depends only on r3 and r4
        assert_eq!(rep.pass, rep.r3 >= 10.0 && rep.r4 >= 10.0);
    }

    #[test]
    fn rotating_frame_term_ordering_at_caption_parameters() {
        // |Delta| n_bar dominates both correction scales by > 10x
        let p = caption_params(4, 40.0, 114);
        let d = p.detuning().abs();
        let n = p.xy.n_spins as f64;
        let first = d * p.n_bar;
        let second = p.g * p.g * n * p.n_bar / d;
        let third = p.g * p.g * n * n / d;
        assert!(first > 10.0 * second);
        assert!(first > 10.0 * third);
    }

    #[test]
    fn detuning_tracks_h() {
        let p = toy_params();
        let p2 = p.with_h(0.9);
        assert!((p2.detuning() - (p.omega0 - 0.9 - p.omega_a)).abs() < 1e-15);
    }
}
