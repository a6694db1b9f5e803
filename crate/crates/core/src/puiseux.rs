//! Fractional-power expansion of the eigenvalues around the exceptional
//! point in the Kerr shift `ξ = Δ_K/γ₂`.
//!
//! Two terms are kept, `Ω = Ω_EP3 + λ₁ξ^{1/3} + λ₂ξ^{2/3}` (in units of γ₂).
//! The three branches differ only in the phase of `λ₁`, so each cube root is
//! built from a real modulus and an explicit phase rather than a complex
//! power.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::exec::Execution;
use crate::params::{ep3_operating_point, omega_ep3};
use crate::spectral::{
    build_heff, eigenvalues, Labeling, SpectralClass, SpectrumTriple, DEFAULT_COALESCENCE_TOL,
};

type C = Complex64;

/// Above this shift the two-term series visibly departs from the exact
/// spectrum.
pub const TRUNCATION_WARNING_XI: f64 = 0.3;

/// Minimum number of samples for an exponent fit.
pub const MIN_FIT_SAMPLES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Zero,
    Minus,
}

impl Branch {
    pub const ALL: [Branch; 3] = [Branch::Plus, Branch::Zero, Branch::Minus];

    /// Phase of `λ₁` on this branch.
    pub fn theta(self) -> f64 {
        match self {
            Branch::Plus => 17.0 * PI / 9.0,
            Branch::Zero => 5.0 * PI / 9.0,
            Branch::Minus => 11.0 * PI / 9.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Branch::Plus => "+",
            Branch::Zero => "0",
            Branch::Minus => "-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchCoefficients {
    pub branch: Branch,
    pub theta: f64,
    pub lambda1: C,
    pub lambda2: C,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuiseuxSolution {
    pub eta: f64,
    /// Ordered as (`+`, `0`, `−`).
    pub branches: [BranchCoefficients; 3],
}

impl PuiseuxSolution {
    pub fn branch(&self, branch: Branch) -> &BranchCoefficients {
        match branch {
            Branch::Plus => &self.branches[0],
            Branch::Zero => &self.branches[1],
            Branch::Minus => &self.branches[2],
        }
    }

    /// Series eigenvalue on one branch.
    pub fn eigenvalue(&self, branch: Branch, delta_cp: f64, xi: f64) -> C {
        let b = self.branch(branch);
        let s = xi.cbrt();
        omega_ep3(self.eta, delta_cp) + b.lambda1 * s + b.lambda2 * s * s
    }
}

/// Coefficients of the characteristic equation after substituting the
/// two-term series, ordered by power of `ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResiduals {
    pub f1: C,
    pub f4_3: C,
    pub f5_3: C,
    pub f2: C,
    pub f7_3: C,
}

/// `2η[√3 − i(1+2η)]/(1+2η)`, the constant shared by the `ξ^{4/3}` and
/// `ξ^{5/3}` coefficients.
fn coupling_constant(eta: f64) -> C {
    2.0 * eta * C::new(3f64.sqrt(), -(1.0 + 2.0 * eta)) / (1.0 + 2.0 * eta)
}

/// `4η²(1 − √3 i)/(1+2η)`, the value of `λ₁³` on every branch.
pub fn lambda1_cubed(eta: f64) -> C {
    4.0 * eta * eta * C::new(1.0, -3f64.sqrt()) / (1.0 + 2.0 * eta)
}

/// `|λ₁| = [8η²/(1+2η)]^{1/3}`.
pub fn lambda1_modulus(eta: f64) -> f64 {
    (8.0 * eta * eta / (1.0 + 2.0 * eta)).cbrt()
}

pub fn series_residuals(eta: f64, lambda1: C, lambda2: C) -> SeriesResiduals {
    let c = coupling_constant(eta);
    SeriesResiduals {
        f1: lambda1 * lambda1 * lambda1 - lambda1_cubed(eta),
        f4_3: 3.0 * lambda1 * lambda1 * lambda2 - c * lambda1,
        f5_3: 3.0 * lambda1 * lambda2 * lambda2 - 2.0 * lambda1 * lambda1 - c * lambda2,
        f2: lambda2 * lambda2 * lambda2 - 4.0 * lambda1 * lambda2,
        f7_3: -2.0 * lambda2 * lambda2,
    }
}

pub fn puiseux_coefficients(eta: f64) -> Result<PuiseuxSolution> {
    ensure_positive("eta", eta)?;
    let modulus = lambda1_modulus(eta);
    let c = coupling_constant(eta);
    let make = |branch: Branch| {
        let theta = branch.theta();
        let lambda1 = C::from_polar(modulus, theta);
        BranchCoefficients {
            branch,
            theta,
            lambda1,
            lambda2: c / (3.0 * lambda1),
        }
    };
    Ok(PuiseuxSolution {
        eta,
        branches: Branch::ALL.map(make),
    })
}

/// Two-term series eigenvalues at Kerr shift `xi`.
///
/// Logs a warning beyond [`TRUNCATION_WARNING_XI`], where the truncation is
/// no longer accurate.
pub fn eigenvalues_near_ep3(eta: f64, delta_cp: f64, xi: f64) -> Result<SpectrumTriple> {
    ensure_finite("delta_cp", delta_cp)?;
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::invalid("xi", "positive and finite", xi));
    }
    if xi > TRUNCATION_WARNING_XI {
        log::warn!("xi = {xi} exceeds {TRUNCATION_WARNING_XI}; two-term series is inaccurate");
    }
    let sol = puiseux_coefficients(eta)?;
    Ok(SpectrumTriple {
        minus: sol.eigenvalue(Branch::Minus, delta_cp, xi),
        zero: sol.eigenvalue(Branch::Zero, delta_cp, xi),
        plus: sol.eigenvalue(Branch::Plus, delta_cp, xi),
        class: SpectralClass::Indeterminate,
        labeling: Labeling::SeriesBranch,
    })
}

/// Exact eigenvalues at the exceptional-point operating point with Kerr
/// shift `xi`, labelled by the default rules.
pub fn exact_eigenvalues_at(eta: f64, delta_cp: f64, xi: f64) -> Result<SpectrumTriple> {
    let params = ep3_operating_point(eta)?.with_delta_k(xi);
    Ok(eigenvalues(&build_heff(&params, delta_cp)?))
}

/// Matches the three exact roots to the series branches by minimal total
/// distance, returning them in (`−`, `0`, `+`) order.
pub fn match_to_series(series: &SpectrumTriple, exact: &SpectrumTriple) -> SpectrumTriple {
    let mut tracked = crate::spectral::track(series, exact.roots(), DEFAULT_COALESCENCE_TOL);
    tracked.labeling = Labeling::SeriesBranch;
    tracked
}

/// Least-squares fit of `log y = slope·log ξ + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub samples: usize,
}

/// Ordinary least squares on `(ln x, ln y)` pairs.
pub fn log_log_fit(xs: &[f64], ys: &[f64]) -> Result<ExponentFit> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidSamples(format!(
            "{} abscissae but {} ordinates",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::InsufficientSamples {
            got: n,
            required: 3,
        });
    }
    if xs.iter().chain(ys.iter()).any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidSamples(
            "log-log fit needs positive values".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let nf = n as f64;
    let mx = lx.iter().sum::<f64>() / nf;
    let my = ly.iter().sum::<f64>() / nf;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let slope_stderr = (rss / (nf - 2.0) / sxx).sqrt();
    Ok(ExponentFit {
        slope,
        intercept,
        slope_stderr,
        samples: n,
    })
}

/// Fits the power law of the real splitting `Re Ω₊ − Ω_EP3` against `ξ`
/// using exact eigenvalues.
///
/// Needs at least five samples in `(0, 1e-2]` spanning two decades.
pub fn splitting_exponent_fit(eta: f64, xi_samples: &[f64]) -> Result<ExponentFit> {
    splitting_exponent_fit_with(eta, xi_samples, Execution::default())
}

pub fn splitting_exponent_fit_with(
    eta: f64,
    xi_samples: &[f64],
    exec: Execution,
) -> Result<ExponentFit> {
    ensure_positive("eta", eta)?;
    if xi_samples.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples {
            got: xi_samples.len(),
            required: MIN_FIT_SAMPLES,
        });
    }
    if xi_samples.iter().any(|x| !(*x > 0.0 && *x <= 1e-2)) {
        return Err(Error::InvalidSamples(
            "every xi must lie in (0, 1e-2]".into(),
        ));
    }
    let lo = xi_samples.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xi_samples.iter().copied().fold(0.0, f64::max);
    if hi / lo < 100.0 * (1.0 - 1e-12) {
        return Err(Error::InvalidSamples(format!(
            "samples span {:.3} decades, need 2",
            (hi / lo).log10()
        )));
    }
    let centre = omega_ep3(eta, 0.0);
    let splits: Vec<Result<f64>> = exec.map_slice(xi_samples, |&xi| {
        Ok(exact_eigenvalues_at(eta, 0.0, xi)?.plus.re - centre)
    });
    let splits = splits.into_iter().collect::<Result<Vec<f64>>>()?;
    log_log_fit(xi_samples, &splits)
}
