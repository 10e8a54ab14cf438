//! Free-fermion solution of the periodic XY chain.
//!
//! The chain maps to free fermions whose excitation energies and Bogoliubov
//! angles are closed-form functions of momentum. Every observable computed
//! here is a function of those angles on a finite momentum grid (or of their
//! integrals in the thermodynamic limit); the fermion operators themselves
//! are never materialized.
//!
//! Two momentum grids are supported. The integer grid `k = 2 pi m / N`
//! reproduces the printed formulas and is the default for figure
//! reproduction. The half-integer (antiperiodic) grid `k = +-(2m-1) pi / N`
//! is the one whose Bogoliubov vacuum coincides with the even-fermion-parity
//! ground state of the spin chain, so it is the grid used for
//! exact-diagonalization cross-checks (see `edoracle`).

use crate::error::{Error, Result};

/// XY-chain parameters. `lambda` and `h` share units (angular frequency);
/// `gamma` is dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XYParams {
    pub lambda: f64,
    pub gamma: f64,
    pub h: f64,
    pub n_spins: usize,
}

impl XYParams {
    pub fn new(lambda: f64, gamma: f64, h: f64, n_spins: usize) -> Result<Self> {
        if lambda < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda must be nonnegative, got {lambda}"
            )));
        }
        if n_spins == 0 {
            return Err(Error::InvalidParameter("n_spins must be positive".into()));
        }
        Ok(Self {
            lambda,
            gamma,
            h,
            n_spins,
        })
    }

    /// Momentum-grid operations need an even chain length.
    pub(crate) fn require_even(&self) -> Result<()> {
        if self.n_spins < 2 || self.n_spins % 2 != 0 {
            return Err(Error::OddSpinCount { n: self.n_spins });
        }
        Ok(())
    }
}

/// Which fermion boundary condition the momentum grid encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// Integer grid k = 2 pi m / N, m = -N/2+1 .. N/2 (includes k = 0 and pi).
    Paper,
    /// Half-integer grid k = +-(2m-1) pi / N, m = 1 .. N/2.
    Antiperiodic,
}

#[derive(Debug, Clone)]
pub struct MomentumGrid {
    pub sector: Sector,
    pub momenta: Vec<f64>,
}

/// Momentum grid for an even chain of length N, ascending, N values in (-pi, pi].
pub fn momentum_grid(n_spins: usize, sector: Sector) -> Result<MomentumGrid> {
    if n_spins < 2 || n_spins % 2 != 0 {
        return Err(Error::OddSpinCount { n: n_spins });
    }
    let n = n_spins as i64;
    let momenta: Vec<f64> = match sector {
        Sector::Paper => (-n / 2 + 1..=n / 2)
            .map(|m| 2.0 * std::f64::consts::PI * m as f64 / n as f64)
            .collect(),
        Sector::Antiperiodic => {
            let mut ks: Vec<f64> = (1..=n / 2)
                .flat_map(|m| {
                    let k = (2 * m - 1) as f64 * std::f64::consts::PI / n as f64;
                    [-k, k]
                })
                .collect();
            ks.sort_by(|a, b| a.partial_cmp(b).unwrap());
            ks
        }
    };
    Ok(MomentumGrid { sector, momenta })
}

/// Excitation energy Lambda_k = sqrt((h - lambda cos k)^2 + lambda^2 gamma^2 sin^2 k).
pub fn excitation_energy(k: f64, p: &XYParams) -> f64 {
    let a = p.h - p.lambda * k.cos();
    let b = p.lambda * p.gamma * k.sin();
    a.hypot(b)
}

/// Bogoliubov angle pair at one momentum.
#[derive(Debug, Clone, Copy)]
pub struct BogoliubovAngles {
    pub sin_nu: f64,
    pub cos_nu: f64,
    /// Set when Lambda_k fell below the gap tolerance and the sign
    /// convention was applied instead of the quotient formulas.
    pub gapless: bool,
}

/// Default gap tolerance for the angle quotients.
pub fn default_gap_epsilon(p: &XYParams) -> f64 {
    1e-12 * p.lambda.max(p.h.abs()).max(1.0)
}

/// Bogoliubov angles at momentum k.
///
/// For Lambda_k > epsilon: sin nu = lambda gamma sin k / Lambda,
/// cos nu = (lambda cos k - h) / Lambda. At a closed gap the convention is
/// sin nu = 0, cos nu = sgn(lambda cos k - h) with sgn(0) = -1, which
/// reproduces the isotropic-chain and strong-field limits continuously.
pub fn bogoliubov_angles(k: f64, p: &XYParams, epsilon: f64) -> BogoliubovAngles {
    let lam = excitation_energy(k, p);
    let x = p.lambda * k.cos() - p.h;
    if lam <= epsilon {
        BogoliubovAngles {
            sin_nu: 0.0,
            cos_nu: if x > 0.0 { 1.0 } else { -1.0 },
            gapless: true,
        }
    } else {
        BogoliubovAngles {
            sin_nu: p.lambda * p.gamma * k.sin() / lam,
            cos_nu: x / lam,
            gapless: false,
        }
    }
}

/// Energies and angles over a whole momentum grid.
#[derive(Debug, Clone)]
pub struct BogoliubovSpectrum {
    pub grid: MomentumGrid,
    pub energies: Vec<f64>,
    pub angles: Vec<BogoliubovAngles>,
}

pub fn bogoliubov_spectrum(p: &XYParams, sector: Sector) -> Result<BogoliubovSpectrum> {
    let grid = momentum_grid(p.n_spins, sector)?;
    let eps = default_gap_epsilon(p);
    let energies = grid
        .momenta
        .iter()
        .map(|&k| excitation_energy(k, p))
        .collect();
    let angles = grid
        .momenta
        .iter()
        .map(|&k| bogoliubov_angles(k, p, eps))
        .collect();
    Ok(BogoliubovSpectrum {
        grid,
        energies,
        angles,
    })
}

/// First and second moments of J_z over the Bogoliubov vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JzMoments {
    pub mean: f64,
    pub second: f64,
    pub variance: f64,
}

/// Vacuum moments of J_z on the chosen grid:
/// <J_z^2> = 1/2 sum sin^2 nu_k + 1/4 (sum cos nu_k)^2,
/// Var(J_z) = 1/2 sum sin^2 nu_k, <J_z> = -1/2 sum cos nu_k.
///
/// Sums run in ascending grid order so results are bit-reproducible.
pub fn jz_moments(p: &XYParams, sector: Sector) -> Result<JzMoments> {
    let spectrum = bogoliubov_spectrum(p, sector)?;
    let mut sin2 = 0.0;
    let mut cos_sum = 0.0;
    for a in &spectrum.angles {
        sin2 += a.sin_nu * a.sin_nu;
        cos_sum += a.cos_nu;
    }
    let variance = 0.5 * sin2;
    let mean = -0.5 * cos_sum;
    Ok(JzMoments {
        mean,
        second: variance + mean * mean,
        variance,
    })
}

/// Thermodynamic-limit densities: <J_z>/N, <J_z^2>/N^2, Var(J_z)/N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JzMomentDensities {
    pub mean_per_spin: f64,
    pub second_per_spin_sq: f64,
    pub var_per_spin: f64,
}

impl JzMomentDensities {
    /// Extensive moments these densities imply at chain length N.
    pub fn at_size(&self, n_spins: usize) -> JzMoments {
        let n = n_spins as f64;
        let mean = n * self.mean_per_spin;
        let variance = n * self.var_per_spin;
        JzMoments {
            mean,
            second: variance + mean * mean,
            variance,
        }
    }
}

/// Thermodynamic-limit moment densities by adaptive quadrature:
/// Var/N = (1/4pi) integral of sin^2 nu, <J_z>/N = -(1/4pi) integral of cos nu,
/// both over (-pi, pi]. Integrands are even in k, so the integration runs on
/// [0, pi] with an explicit split at the gap closing / sign jump
/// k = arccos(h/lambda) when it exists.
pub fn jz_moments_thermo(p: &XYParams) -> Result<JzMomentDensities> {
    if p.lambda <= 0.0 {
        return Err(Error::InvalidParameter(
            "thermodynamic-limit moments need lambda > 0".into(),
        ));
    }
    let eps = default_gap_epsilon(p);
    let ratio = p.h / p.lambda;
    let mut points = vec![0.0, std::f64::consts::PI];
    if ratio.abs() <= 1.0 {
        points.push(ratio.acos());
        points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    }
    let tol = 1e-10;
    let sin2 = quad::integrate_split(
        |k| {
            let a = bogoliubov_angles(k, p, eps);
            a.sin_nu * a.sin_nu
        },
        &points,
        tol,
    );
    let cosv = quad::integrate_split(
        |k| bogoliubov_angles(k, p, eps).cos_nu,
        &points,
        tol,
    );
    let var_per_spin = sin2 / (2.0 * std::f64::consts::PI);
    let mean_per_spin = -cosv / (2.0 * std::f64::consts::PI);
    Ok(JzMomentDensities {
        mean_per_spin,
        second_per_spin_sq: mean_per_spin * mean_per_spin,
        var_per_spin,
    })
}

/// Where a parameter point sits in the XY phase diagram (fields normalized
/// by lambda, which must be positive).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Ferromagnetic,
    Paramagnetic,
    Critical,
    FactorizationPoint,
}

/// Classify against the critical field h = lambda and the factorization
/// circle gamma^2 + (h/lambda)^2 = 1, both within 1e-12.
pub fn phase_classify(p: &XYParams) -> Result<Phase> {
    if p.lambda <= 0.0 {
        return Err(Error::InvalidParameter(
            "phase classification needs lambda > 0".into(),
        ));
    }
    let hn = p.h / p.lambda;
    let tol = 1e-12;
    if (hn - 1.0).abs() <= tol {
        return Ok(Phase::Critical);
    }
    if (p.gamma * p.gamma + hn * hn - 1.0).abs() <= tol {
        return Ok(Phase::FactorizationPoint);
    }
    Ok(if hn < 1.0 {
        Phase::Ferromagnetic
    } else {
        Phase::Paramagnetic
    })
}

/// Adaptive Simpson quadrature with explicit split points.
mod quad {
    pub fn integrate_split<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: f64) -> f64 {
        let mut total = 0.0;
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b - a <= 0.0 {
                continue;
            }
            total += adaptive(&f, a, b, f(a), f((a + b) / 2.0), f(b), tol, 48);
        }
        total
    }

    #[allow(clippy::too_many_arguments)]
    fn adaptive<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = (a + b) / 2.0;
        let lm = (a + m) / 2.0;
        let rm = (m + b) / 2.0;
        let flm = f(lm);
        let frm = f(rm);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let err = left + right - whole;
        if depth == 0 || err.abs() <= 15.0 * tol {
            left + right + err / 15.0
        } else {
            adaptive(f, a, m, fa, flm, fm, tol / 2.0, depth - 1)
                + adaptive(f, m, b, fm, frm, fb, tol / 2.0, depth - 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn xy(lambda: f64, gamma: f64, h: f64, n: usize) -> XYParams {
        XYParams::new(lambda, gamma, h, n).unwrap()
    }

    #[test]
    fn paper_grid_n4() {
        let g = momentum_grid(4, Sector::Paper).unwrap();
        let expect = [-PI / 2.0, 0.0, PI / 2.0, PI];
        assert_eq!(g.momenta.len(), 4);
        for (k, e) in g.momenta.iter().zip(expect.iter()) {
            assert!((k - e).abs() < 1e-15);
        }
    }

    #[test]
    fn paper_grid_n2() {
        let g = momentum_grid(2, Sector::Paper).unwrap();
        assert_eq!(g.momenta.len(), 2);
        assert!((g.momenta[0] - 0.0).abs() < 1e-15);
        assert!((g.momenta[1] - PI).abs() < 1e-15);
    }

    #[test]
    fn antiperiodic_grid_n4() {
        let g = momentum_grid(4, Sector::Antiperiodic).unwrap();
        let expect = [-3.0 * PI / 4.0, -PI / 4.0, PI / 4.0, 3.0 * PI / 4.0];
        for (k, e) in g.momenta.iter().zip(expect.iter()) {
            assert!((k - e).abs() < 1e-15);
        }
    }

    #[test]
    fn odd_n_rejected() {
        assert!(matches!(
            momentum_grid(5, Sector::Paper),
            Err(Error::OddSpinCount { n: 5 })
        ));
        assert!(momentum_grid(0, Sector::Antiperiodic).is_err());
    }

    #[test]
    fn grid_closed_under_negation() {
        for n in [4usize, 6, 10] {
            for sector in [Sector::Paper, Sector::Antiperiodic] {
                let g = momentum_grid(n, sector).unwrap();
                for &k in &g.momenta {
                    if k.abs() < 1e-15 || (k - PI).abs() < 1e-15 {
                        continue;
                    }
                    assert!(
                        g.momenta.iter().any(|&q| (q + k).abs() < 1e-12),
                        "missing -k partner for k={k} (N={n})"
                    );
                }
            }
        }
    }

    #[test]
    fn excitation_energy_values() {
        // Ising chain at zero field: flat band
        let p = xy(1.0, 1.0, 0.0, 4);
        for k in [0.1, 0.8, 2.0] {
            assert!((excitation_energy(k, &p) - 1.0).abs() < 1e-14);
        }
        // gap closes at criticality
        let pc = xy(1.0, 0.7, 1.0, 4);
        assert!(excitation_energy(0.0, &pc).abs() < 1e-14);
        // direct substitution: (0.5 - 0)^2 + (1 * 0.5 * 1)^2 = 0.5
        let ps = xy(1.0, 0.5, 0.5, 4);
        assert!((excitation_energy(PI / 2.0, &ps) - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn angles_polarized_limit() {
        // lambda = 0, h > 0: fully polarized, angles (0, -1) at every k
        let p = xy(0.0, 1.0, 0.7, 4);
        let eps = default_gap_epsilon(&p);
        for k in [-2.0, 0.0, 1.3] {
            let a = bogoliubov_angles(k, &p, eps);
            assert_eq!(a.sin_nu, 0.0);
            assert_eq!(a.cos_nu, -1.0);
        }
    }

    #[test]
    fn angles_isotropic_sign_convention() {
        // gamma = 0: sin = 0, cos = sgn(cos k - h)
        let p = xy(1.0, 0.0, 0.5, 8);
        let eps = default_gap_epsilon(&p);
        let inside = bogoliubov_angles(0.2, &p, eps);
        assert_eq!((inside.sin_nu, inside.cos_nu), (0.0, 1.0));
        let outside = bogoliubov_angles(2.5, &p, eps);
        assert_eq!((outside.sin_nu, outside.cos_nu), (0.0, -1.0));
        // exactly on the Fermi point the convention picks -1
        let p0 = xy(1.0, 0.0, 1.0, 8);
        let at = bogoliubov_angles(0.0, &p0, default_gap_epsilon(&p0));
        assert!(at.gapless);
        assert_eq!(at.cos_nu, -1.0);
    }

    #[test]
    fn angles_ising_zero_field() {
        // gamma = 1, h = 0: (sin k, cos k)
        let p = xy(1.0, 1.0, 0.0, 8);
        let eps = default_gap_epsilon(&p);
        for k in [0.3, 1.2, 2.9] {
            let a = bogoliubov_angles(k, &p, eps);
            assert!((a.sin_nu - k.sin()).abs() < 1e-14);
            assert!((a.cos_nu - k.cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn moments_polarized() {
        for n in [4usize, 10] {
            let m = jz_moments(&xy(0.0, 1.0, 0.4, n), Sector::Paper).unwrap();
            let nf = n as f64;
            assert!((m.mean - nf / 2.0).abs() < 1e-13);
            assert!((m.second - nf * nf / 4.0).abs() < 1e-12);
            assert!(m.variance.abs() < 1e-13);
        }
    }

    #[test]
    fn moments_ising_zero_field_exact_quarter() {
        // uniform-grid identity: sum sin^2 k = N/2, so Var = N/4 exactly
        let m = jz_moments(&xy(1.0, 1.0, 0.0, 40), Sector::Paper).unwrap();
        assert!((m.variance - 10.0).abs() < 1e-12);
    }

    #[test]
    fn thermo_ising_weak_field_quarter() {
        let d = jz_moments_thermo(&xy(1.0, 1.0, 1e-12, 16)).unwrap();
        assert!((d.var_per_spin - 0.25).abs() < 1e-9, "{}", d.var_per_spin);
    }

    #[test]
    fn thermo_large_anisotropy_half() {
        let d = jz_moments_thermo(&xy(1.0, 1e4, 0.1, 16)).unwrap();
        assert!((d.var_per_spin - 0.5).abs() < 1e-4, "{}", d.var_per_spin);
    }

    #[test]
    fn thermo_isotropic_second_moment_closed_form() {
        // gamma = 0, h = 0.5: <Jz^2>/N^2 = (2 arccos(h) - pi)^2 / (4 pi^2) = 1/36
        let d = jz_moments_thermo(&xy(1.0, 0.0, 0.5, 16)).unwrap();
        assert!(
            (d.second_per_spin_sq - 1.0 / 36.0).abs() < 1e-10,
            "{}",
            d.second_per_spin_sq
        );
        assert!(d.var_per_spin.abs() < 1e-12);
    }

    #[test]
    fn thermo_strong_field_vanishing_variance() {
        // angles approach (0, -1) for h >> lambda at any gamma
        for gamma in [0.3, 1.0, 4.0] {
            let d = jz_moments_thermo(&xy(1.0, gamma, 50.0, 16)).unwrap();
            assert!(d.var_per_spin < 1e-2);
            assert!((d.mean_per_spin - 0.5).abs() < 1e-3);
        }
    }

    #[test]
    fn finite_n_approaches_thermo() {
        // antiperiodic sums converge to the integrals at O(1/N)
        let thermo = jz_moments_thermo(&xy(1.0, 0.7, 0.6, 16)).unwrap();
        let mut prev_err = f64::INFINITY;
        for n in [8usize, 16, 32, 64, 128] {
            let m = jz_moments(&xy(1.0, 0.7, 0.6, n), Sector::Antiperiodic).unwrap();
            let err = (m.variance / n as f64 - thermo.var_per_spin).abs();
            assert!(err <= prev_err * 1.05 + 1e-13, "err {err} at N={n}");
            assert!(err < 2.0 / n as f64, "rate violation at N={n}: {err}");
            prev_err = err;
        }
    }

    #[test]
    fn sector_difference_bounded() {
        // |Var_paper - Var_antiperiodic| stays bounded as N grows
        for n in [8usize, 16, 32, 64, 128] {
            let vp = jz_moments(&xy(1.0, 1.0, 0.5, n), Sector::Paper)
                .unwrap()
                .variance;
            let va = jz_moments(&xy(1.0, 1.0, 0.5, n), Sector::Antiperiodic)
                .unwrap()
                .variance;
            assert!((vp - va).abs() < 0.1, "N={n}: {}", (vp - va).abs());
        }
    }

    #[test]
    fn gamma_scan_monotone_variance() {
        // matches the anisotropy sweep of the rescaled variance
        let mut prev = -1.0;
        for gamma in [0.0, 0.01, 0.1, 1.0, 10.0, 100.0] {
            let m = jz_moments(&xy(1.0, gamma, 0.1, 40), Sector::Antiperiodic).unwrap();
            let v = m.variance / 40.0;
            assert!(v >= prev - 1e-15, "gamma={gamma}");
            prev = v;
        }
        assert!(prev >= 0.49);
    }

    #[test]
    fn phase_classification_points() {
        assert_eq!(
            phase_classify(&xy(1.0, 1.0, 0.5, 4)).unwrap(),
            Phase::Ferromagnetic
        );
        assert_eq!(
            phase_classify(&xy(1.0, 0.6, 0.8, 4)).unwrap(),
            Phase::FactorizationPoint
        );
        assert_eq!(
            phase_classify(&xy(1.0, 0.3, 1.0, 4)).unwrap(),
            Phase::Critical
        );
        assert_eq!(
            phase_classify(&xy(1.0, 1.0, 1.7, 4)).unwrap(),
            Phase::Paramagnetic
        );
        // normalization by lambda
        assert_eq!(
            phase_classify(&xy(2.0, 0.6, 1.6, 4)).unwrap(),
            Phase::FactorizationPoint
        );
    }

    proptest! {
        #[test]
        fn angle_normalization(
            gamma in 0.0f64..5.0,
            h in 0.0f64..3.0,
            k in -3.14f64..3.14,
        ) {
            let p = xy(1.0, gamma, h, 8);
            let eps = default_gap_epsilon(&p);
            let a = bogoliubov_angles(k, &p, eps);
            if excitation_energy(k, &p) > eps {
                let s = a.sin_nu * a.sin_nu + a.cos_nu * a.cos_nu;
                prop_assert!((s - 1.0).abs() < 1e-12);
            } else {
                prop_assert_eq!(a.sin_nu, 0.0);
            }
        }

        #[test]
        fn angle_parity_in_k(
            gamma in 0.01f64..4.0,
            h in 0.0f64..2.5,
            k in 0.01f64..3.1,
        ) {
            let p = xy(1.0, gamma, h, 8);
            let eps = default_gap_epsilon(&p);
            let plus = bogoliubov_angles(k, &p, eps);
            let minus = bogoliubov_angles(-k, &p, eps);
            prop_assert!((plus.sin_nu + minus.sin_nu).abs() < 1e-12);
            prop_assert!((plus.cos_nu - minus.cos_nu).abs() < 1e-12);
            prop_assert!(
                (excitation_energy(k, &p) - excitation_energy(-k, &p)).abs() < 1e-12
            );
        }

        #[test]
        fn variance_bounds(
            gamma in 0.0f64..50.0,
            h in 0.0f64..5.0,
            idx in 0usize..4,
        ) {
            let n = [4usize, 8, 12, 40][idx];
            for sector in [Sector::Paper, Sector::Antiperiodic] {
                let m = jz_moments(&xy(1.0, gamma, h, n), sector).unwrap();
                prop_assert!(m.variance >= -1e-12);
                prop_assert!(m.variance <= n as f64 / 2.0 + 1e-12);
                prop_assert!(m.mean.abs() <= n as f64 / 2.0 + 1e-12);
                prop_assert!(m.second >= -1e-12 && m.second <= (n * n) as f64 / 4.0 + 1e-9);
            }
        }
    }
}
