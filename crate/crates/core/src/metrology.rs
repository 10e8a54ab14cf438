//! Quantum Fisher information: the dispersive generator, the closed-form QFI
//! from the chain's J_z moments, per-regime scaling formulas, a
//! fidelity-susceptibility estimator, and log-log scaling fits.
//!
//! Conventions: the QFI carries the t^2 factor of the linear-in-time
//! generator, so "QFI in units of t^2" means the value at t = 1. The
//! dispersive coefficient is written c = 2 g^2 / Delta^2 throughout.

use crate::dynamics::{Model, Propagator};
use crate::error::{Error, Result};
use crate::freefermion::{jz_moments, JzMoments, Sector};
use crate::hamiltonians::SystemParams;
use crate::hilbert::{OperatorMatrix, StateVector};

/// QFI value with the two addends of the closed form kept separate.
#[derive(Debug, Clone, Copy)]
pub struct QfiResult {
    pub value: f64,
    pub t: f64,
    /// (1 - c n_bar)^2 Var(J_z) — the spin-fluctuation addend.
    pub var_term: f64,
    /// c^2 n_bar <J_z^2> — the photon-shot addend.
    pub jz2_term: f64,
    pub regime_label: Option<&'static str>,
}

impl QfiResult {
    fn from_terms(t: f64, var_term: f64, jz2_term: f64, label: Option<&'static str>) -> Self {
        QfiResult {
            value: 4.0 * t * t * (var_term + jz2_term),
            t,
            var_term,
            jz2_term,
            regime_label: label,
        }
    }

    /// Sensitivity 1/sqrt(F); infinite when the state carries no information.
    pub fn sensitivity(&self) -> f64 {
        if self.value > 0.0 {
            1.0 / self.value.sqrt()
        } else {
            f64::INFINITY
        }
    }
}

/// Scalar description of the dispersive generator
/// (unit + photon * a^dag a) J_z t, stored in the printed sign convention.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorCoefficients {
    pub unit: f64,
    /// -2 g^2 / Delta^2.
    pub photon: f64,
    pub t: f64,
}

pub fn generator_coefficients(p: &SystemParams, t: f64) -> Result<GeneratorCoefficients> {
    let d = p.require_detuning()?;
    Ok(GeneratorCoefficients {
        unit: 1.0,
        photon: -2.0 * p.g * p.g / (d * d),
        t,
    })
}

/// Closed-form QFI from a given set of J_z moments:
/// F = 4 t^2 [ (1 - c n_bar)^2 Var(J_z) + c^2 n_bar <J_z^2> ].
pub fn qfi_from_moments(p: &SystemParams, t: f64, m: &JzMoments) -> Result<QfiResult> {
    let d = p.require_detuning()?;
    let c = 2.0 * p.g * p.g / (d * d);
    let var_term = (1.0 - c * p.n_bar).powi(2) * m.variance;
    let jz2_term = c * c * p.n_bar * m.second;
    Ok(QfiResult::from_terms(t, var_term, jz2_term, None))
}

/// Closed-form QFI with moments taken from the finite-N momentum sums.
pub fn qfi_analytic(p: &SystemParams, t: f64, sector: Sector) -> Result<QfiResult> {
    let m = jz_moments(&p.xy, sector)?;
    qfi_from_moments(p, t, &m)
}

/// Asymptotic regimes with printed closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// lambda = 0: F = 4 g^4 Delta^-4 t^2 N^2 n_bar.
    TcNoInteraction,
    /// gamma = 1, h << lambda: F = 4 g^4 Delta^-4 t^2 N n_bar^2.
    IsingWeak,
    /// h >> lambda (any gamma): F = 4 g^4 Delta^-4 t^2 N^2 n_bar.
    StrongField,
    /// gamma = 0, h > lambda: F = 4 g^4 Delta^-4 t^2 N^2 n_bar.
    XxPara,
    /// gamma = 0, h < lambda: the same with prefactor [2 arccos(h) - pi]^2 / pi^2.
    XxFerro,
    /// gamma >> 1, h << lambda: F = 8 g^4 Delta^-4 t^2 N n_bar^2.
    LargeGamma,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::TcNoInteraction => "tc_no_interaction",
            Regime::IsingWeak => "ising_weak",
            Regime::StrongField => "strong_field",
            Regime::XxPara => "xx_para",
            Regime::XxFerro => "xx_ferro",
            Regime::LargeGamma => "large_gamma",
        }
    }
}

/// Weak field means h at most this fraction of lambda.
pub const WEAK_FIELD_MAX_RATIO: f64 = 0.1;
/// Strong field means h at least this multiple of lambda.
pub const STRONG_FIELD_MIN_RATIO: f64 = 10.0;
/// "gamma >> 1" admitted from this value on.
pub const LARGE_GAMMA_MIN: f64 = 10.0;
const GAMMA_EXACT_TOL: f64 = 1e-9;

/// Evaluate a regime's closed form after checking its preconditions.
pub fn qfi_regime(p: &SystemParams, t: f64, regime: Regime) -> Result<QfiResult> {
    let d = p.require_detuning()?;
    let c = 2.0 * p.g * p.g / (d * d);
    let n = p.xy.n_spins as f64;
    let nb = p.n_bar;
    let lam = p.xy.lambda;
    let gamma = p.xy.gamma;
    let h = p.xy.h;
    let reject = |condition: String| Error::RegimePrecondition {
        regime: regime.label(),
        condition,
    };

    let (var_term, jz2_term) = match regime {
        Regime::TcNoInteraction => {
            if lam != 0.0 {
                return Err(reject(format!("requires lambda = 0 (got {lam})")));
            }
            (0.0, c * c * nb * n * n / 4.0)
        }
        Regime::IsingWeak => {
            if (gamma - 1.0).abs() > GAMMA_EXACT_TOL {
                return Err(reject(format!("requires gamma = 1 (got {gamma})")));
            }
            if !(lam > 0.0) || h > WEAK_FIELD_MAX_RATIO * lam {
                return Err(reject(format!(
                    "requires h <= {WEAK_FIELD_MAX_RATIO} * lambda (got h/lambda = {})",
                    h / lam
                )));
            }
            (c * c * nb * nb * n / 4.0, 0.0)
        }
        Regime::StrongField => {
            if h < STRONG_FIELD_MIN_RATIO * lam || h <= 0.0 {
                return Err(reject(format!(
                    "requires h >= {STRONG_FIELD_MIN_RATIO} * lambda and h > 0 (got h = {h}, lambda = {lam})"
                )));
            }
            (0.0, c * c * nb * n * n / 4.0)
        }
        Regime::XxPara => {
            if gamma.abs() > GAMMA_EXACT_TOL {
                return Err(reject(format!("requires gamma = 0 (got {gamma})")));
            }
            if !(lam > 0.0) || h <= lam {
                return Err(reject(format!(
                    "requires h > lambda (got h/lambda = {})",
                    h / lam
                )));
            }
            (0.0, c * c * nb * n * n / 4.0)
        }
        Regime::XxFerro => {
            if gamma.abs() > GAMMA_EXACT_TOL {
                return Err(reject(format!("requires gamma = 0 (got {gamma})")));
            }
            if !(lam > 0.0) || h >= lam {
                return Err(reject(format!(
                    "requires h < lambda (got h/lambda = {})",
                    h / lam
                )));
            }
            let pre = {
                let x = 2.0 * (h / lam).acos() - std::f64::consts::PI;
                x * x / (std::f64::consts::PI * std::f64::consts::PI)
            };
            (0.0, pre * c * c * nb * n * n / 4.0)
        }
        Regime::LargeGamma => {
            if gamma < LARGE_GAMMA_MIN {
                return Err(reject(format!(
                    "requires gamma >= {LARGE_GAMMA_MIN} (got {gamma})"
                )));
            }
            if !(lam > 0.0) || h > WEAK_FIELD_MAX_RATIO * lam {
                return Err(reject(format!(
                    "requires h <= {WEAK_FIELD_MAX_RATIO} * lambda (got h/lambda = {})",
                    h / lam
                )));
            }
            (c * c * nb * nb * n / 2.0, 0.0)
        }
    };
    Ok(QfiResult::from_terms(
        t,
        var_term,
        jz2_term,
        Some(regime.label()),
    ))
}

/// Overlap-deficit window targeted by the adaptive step search.
const DEFICIT_TARGET_LO: f64 = 1e-8;
const DEFICIT_TARGET_HI: f64 = 1e-4;
/// Hard floors for any accepted step.
const DEFICIT_FLOOR: f64 = 1e-12;
const DEFICIT_CEILING: f64 = 1e-2;
/// Largest product dimension the estimator diagonalizes.
pub const NUMERIC_MAX_DIM: usize = 4096;

/// A starting step for the adaptive search, from the closed-form value when
/// it is available and finite.
pub fn qfi_step_hint(p: &SystemParams, t: f64) -> f64 {
    let f = qfi_analytic(p, t, Sector::Paper)
        .map(|r| r.value)
        .unwrap_or(0.0);
    if f > 0.0 {
        (8.0 * 1e-6 / f).sqrt()
    } else {
        1e-3 * (1.0 + p.xy.h.abs())
    }
}

/// Fidelity-susceptibility QFI of the evolved state:
/// F ~= 8 (1 - |<psi_h(t)|psi_{h+dh}(t)>|) / dh^2, Richardson-refined over
/// two step sizes. `builder` must produce the Hamiltonian at an arbitrary
/// field; the initial state is shared between both branches.
///
/// With an explicit `dh` the overlap deficit must land inside
/// [1e-12, 1e-2] or the step is rejected. With `dh = None` the step adapts
/// until the deficit falls in [1e-8, 1e-4]; a state that stays insensitive
/// at the largest admissible step yields 0.
pub fn qfi_fidelity(
    builder: &dyn Fn(f64) -> Result<OperatorMatrix>,
    psi0: &StateVector,
    h: f64,
    t: f64,
    dh: Option<f64>,
    step_hint: f64,
) -> Result<f64> {
    let base = Propagator::new(&builder(h)?)?;
    if base.dim() > NUMERIC_MAX_DIM {
        return Err(Error::BudgetExceeded {
            what: "hilbert dimension",
            size: base.dim(),
            limit: NUMERIC_MAX_DIM,
        });
    }
    let psi_t = base.evolve(psi0, t)?;
    let deficit_at = |dh: f64| -> Result<f64> {
        let shifted = Propagator::new(&builder(h + dh)?)?;
        let psi_shift = shifted.evolve(psi0, t)?;
        Ok(1.0 - psi_t.inner(&psi_shift)?.norm())
    };

    let step = match dh {
        Some(step) => {
            if !(step > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "finite-difference step must be positive, got {step}"
                )));
            }
            let d = deficit_at(step)?;
            if d < DEFICIT_FLOOR {
                return Err(Error::StepTooSmall {
                    deficit: d,
                    floor: DEFICIT_FLOOR,
                });
            }
            if d > DEFICIT_CEILING {
                return Err(Error::StepTooLarge {
                    deficit: d,
                    ceiling: DEFICIT_CEILING,
                });
            }
            step
        }
        None => {
            let mut step = step_hint.max(1e-300);
            let mut accepted = None;
            for _ in 0..60 {
                let d = deficit_at(step)?;
                if (DEFICIT_TARGET_LO..=DEFICIT_TARGET_HI).contains(&d) {
                    accepted = Some(step);
                    break;
                }
                let target = 1e-6;
                let factor = if d > 0.0 {
                    (target / d).sqrt().clamp(1e-2, 1e2)
                } else {
                    1e2
                };
                step *= factor;
                if !step.is_finite() || step > 1e18 {
                    break;
                }
            }
            match accepted {
                Some(s) => s,
                None => {
                    // Never reached measurable sensitivity: treat as zero QFI.
                    let d = deficit_at(step)?;
                    if d < DEFICIT_FLOOR {
                        return Ok(0.0);
                    }
                    return Err(Error::StepTooLarge {
                        deficit: d,
                        ceiling: DEFICIT_CEILING,
                    });
                }
            }
        }
    };

    let d1 = deficit_at(step)?;
    let d2 = deficit_at(step / 2.0)?;
    if d2 < DEFICIT_FLOOR {
        return Err(Error::StepTooSmall {
            deficit: d2,
            floor: DEFICIT_FLOOR,
        });
    }
    let f1 = 8.0 * d1 / (step * step);
    let f2 = 8.0 * d2 / (step * step / 4.0);
    Ok((4.0 * f2 - f1) / 3.0)
}

/// Fidelity-based QFI of the parameter-set's product initial state
/// |theta, phi> (x) |alpha> under the full or reduced-effective model.
pub fn qfi_numeric(p: &SystemParams, t: f64, model: Model, dh: Option<f64>) -> Result<f64> {
    let psi0 = crate::dynamics::initial_state(p)?;
    let builder = |h: f64| crate::dynamics::build_model(&p.with_h(h), model);
    qfi_fidelity(&builder, &psi0, p.xy.h, t, dh, qfi_step_hint(p, t))
}

/// Least-squares power-law fit in log-log coordinates.
#[derive(Debug, Clone, Copy)]
pub struct ScalingFit {
    /// Slope of ln F against ln n_bar.
    pub exponent: f64,
    /// Intercept of the same line (natural logs).
    pub intercept: f64,
    pub r_squared: f64,
    pub n_bar_range: (f64, f64),
}

/// Fit F = A n_bar^p from (n_bar, F) samples. Requires at least four
/// strictly positive points spanning >= 1.5 decades in n_bar.
pub fn scaling_fit(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 4 {
        return Err(Error::FitDomain(format!(
            "need at least 4 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::FitDomain(
            "all n_bar and QFI values must be positive".into(),
        ));
    }
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(0.0, f64::max);
    let decades = (hi / lo).log10();
    if decades < 1.5 - 1e-12 {
        return Err(Error::FitDomain(format!(
            "n_bar must span at least 1.5 decades, got {decades:.3}"
        )));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(ys.iter())
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let exponent = sxy / sxx;
    let intercept = ybar - exponent * xbar;
    let ss_res: f64 = xs
        .iter()
        .zip(ys.iter())
        .map(|(x, y)| {
            let e = y - (exponent * x + intercept);
            e * e
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - ybar) * (y - ybar)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(ScalingFit {
        exponent,
        intercept,
        r_squared,
        n_bar_range: (lo, hi),
    })
}
