//! Physical parameters of the two-magnon cavity and the pseudo-Hermitian
//! constraint manifold that hosts the third-order exceptional point.
//!
//! All rates, detunings and couplings are dimensionless multiples of the
//! decay rate of magnon mode 2, so `gamma2 = 1` for every parameter set built
//! by this module.

use num_complex::Complex64;

use crate::error::{ensure_finite, ensure_non_negative, ensure_positive, Error, Result};

/// Magnon-1 detuning per unit Kerr shift at which the perturbation-series
/// coefficients and the reference dip splittings are self-consistent.
pub const CALIBRATED_KERR_SCALE: f64 = 2.0;

/// Magnon-1 detuning per unit Kerr shift in the plain mean-field picture.
pub const MEAN_FIELD_KERR_SCALE: f64 = 1.0;

/// Relative tolerance used when checking membership of the pseudo-Hermitian
/// manifold.
pub const MANIFOLD_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub kappa_int: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub g1: f64,
    pub g2: f64,
    /// Detuning of magnon 1 from the cavity, `ω₁ − ω_c`.
    pub delta1: f64,
    /// Detuning of magnon 2 from the cavity, `ω₂ − ω_c`.
    pub delta2: f64,
    /// Kerr-induced frequency shift of magnon 1.
    pub delta_k: f64,
    /// Detuning added to magnon 1 in the probe response per unit `delta_k`.
    pub kerr_scale: f64,
}

impl PhysicalParams {
    /// Total cavity damping `κ_int + κ₁ + κ₂`.
    pub fn kappa_c(&self) -> f64 {
        self.kappa_int + self.kappa1 + self.kappa2
    }

    /// Effective gain `κ₁ + κ₂ − κ_int` seen by the probe under coherent
    /// perfect absorption.
    pub fn kappa_g(&self) -> f64 {
        self.kappa1 + self.kappa2 - self.kappa_int
    }

    pub fn eta(&self) -> f64 {
        self.gamma1 / self.gamma2
    }

    pub fn coupling_ratio(&self) -> f64 {
        self.g2 / self.g1
    }

    /// Detuning of magnon 1 caused by the Kerr shift in the probe response.
    pub fn kerr_detuning(&self, delta_k: f64) -> f64 {
        self.kerr_scale * delta_k
    }

    pub fn with_delta_k(mut self, delta_k: f64) -> Self {
        self.delta_k = delta_k;
        self
    }

    pub fn with_kerr_scale(mut self, kerr_scale: f64) -> Self {
        self.kerr_scale = kerr_scale;
        self
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("gamma1", self.gamma1)?;
        ensure_positive("gamma2", self.gamma2)?;
        ensure_positive("kappa_int", self.kappa_int)?;
        ensure_positive("kappa1", self.kappa1)?;
        ensure_positive("kappa2", self.kappa2)?;
        ensure_non_negative("g1", self.g1)?;
        ensure_non_negative("g2", self.g2)?;
        ensure_finite("delta1", self.delta1)?;
        ensure_finite("delta2", self.delta2)?;
        ensure_finite("delta_k", self.delta_k)?;
        ensure_positive("kerr_scale", self.kerr_scale)?;
        Ok(())
    }

    /// Residuals of the four pseudo-Hermitian conditions, each relative to
    /// the magnitude of its own terms.
    pub fn manifold_residuals(&self) -> [f64; 4] {
        let eta = self.eta();
        let rel = |lhs: f64, rhs: f64| (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1e-300);
        let k = self.coupling_ratio();
        let gain = rel(self.kappa_g(), (1.0 + eta) * self.gamma2);
        let detunings = if self.delta1 == 0.0 && self.delta2 == 0.0 {
            0.0
        } else {
            rel(self.delta2, -eta * self.delta1)
        };
        let d1_sq = (1.0 + eta * k * k) / ((1.0 + eta) * eta) * self.g1 * self.g1
            - self.gamma2 * self.gamma2;
        let square = (self.delta1 * self.delta1 - d1_sq).abs()
            / (self.g1 * self.g1 + self.gamma2 * self.gamma2);
        let ratio = rel(k, coupling_ratio(eta));
        [gain, detunings, square, ratio]
    }

    pub fn on_manifold(&self, tol: f64) -> bool {
        self.manifold_residuals().iter().all(|r| *r <= tol)
    }
}

/// Branch selector for `Δ₁ = ±√(Δ₁²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaSign {
    #[default]
    Plus,
    Minus,
}

impl DeltaSign {
    pub fn value(self) -> f64 {
        match self {
            DeltaSign::Plus => 1.0,
            DeltaSign::Minus => -1.0,
        }
    }

    pub fn from_value(v: f64) -> Option<Self> {
        if v == 1.0 {
            Some(DeltaSign::Plus)
        } else if v == -1.0 {
            Some(DeltaSign::Minus)
        } else {
            None
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            DeltaSign::Plus => DeltaSign::Minus,
            DeltaSign::Minus => DeltaSign::Plus,
        }
    }
}

/// A point on the pseudo-Hermitian manifold, parameterised by the decay
/// ratio and the coupling of magnon 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoHermitianConfig {
    pub eta: f64,
    pub k_ratio: f64,
    pub g1: f64,
    pub delta1_sign: DeltaSign,
}

impl PseudoHermitianConfig {
    /// Builds a config with the coupling ratio fixed by `eta`.
    pub fn new(eta: f64, g1: f64, delta1_sign: DeltaSign) -> Result<Self> {
        ensure_positive("eta", eta)?;
        let config = Self {
            eta,
            k_ratio: coupling_ratio(eta),
            g1,
            delta1_sign,
        };
        config.validate()?;
        Ok(config)
    }

    /// Config sitting exactly at the exceptional point.
    pub fn at_ep3(eta: f64) -> Result<Self> {
        ensure_positive("eta", eta)?;
        Self::new(eta, g_ep3(eta), DeltaSign::Plus)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("eta", self.eta)?;
        ensure_positive("k_ratio", self.k_ratio)?;
        ensure_non_negative("g1", self.g1)?;
        let expected = coupling_ratio(self.eta);
        if (self.k_ratio - expected).abs() > MANIFOLD_TOLERANCE * expected {
            return Err(Error::invalid(
                "k_ratio",
                "equal to [(1+2eta)/(2eta+eta^2)]^(3/2)",
                self.k_ratio,
            ));
        }
        let g_min = g_min(self.eta);
        if self.g1 < g_min * (1.0 - 1e-12) {
            return Err(Error::BelowMinimalCoupling { g1: self.g1, g_min });
        }
        Ok(())
    }

    /// `Δ₁²` as fixed by the manifold, clamped at zero within rounding of
    /// `g_min`.
    fn delta1_squared(&self) -> f64 {
        let k2 = self.k_ratio * self.k_ratio;
        let raw = (1.0 + self.eta * k2) / ((1.0 + self.eta) * self.eta) * self.g1 * self.g1 - 1.0;
        if raw < 0.0 && raw > -1e-12 {
            0.0
        } else {
            raw
        }
    }
}

/// Coupling ratio `k = g₂/g₁ = [(1+2η)/(2η+η²)]^{3/2}`.
pub fn coupling_ratio(eta: f64) -> f64 {
    ((1.0 + 2.0 * eta) / (2.0 * eta + eta * eta)).powf(1.5)
}

/// Smallest coupling `g₁` for which the manifold has a real `Δ₁`.
pub fn g_min(eta: f64) -> f64 {
    let k = coupling_ratio(eta);
    ((1.0 + eta) * eta / (1.0 + eta * k * k)).sqrt()
}

/// Coupling of magnon 1 at the exceptional point.
pub fn g_ep3(eta: f64) -> f64 {
    2.0 * eta * (eta * eta + 2.0 * eta).sqrt() / (1.0 + 2.0 * eta)
}

/// Coalesced eigenvalue at the exceptional point (on the `Δ₁ > 0` branch).
pub fn omega_ep3(eta: f64, delta_cp: f64) -> f64 {
    delta_cp - 3f64.sqrt() * (eta - 1.0) * eta / (2.0 * eta * eta + 5.0 * eta + 2.0)
}

/// Normalised coalesced eigenvector at the exceptional point, ordered as
/// (cavity, magnon 1, magnon 2).
pub fn ep3_eigenvector(eta: f64) -> [Complex64; 3] {
    let sqrt3 = 3f64.sqrt();
    let norm = (2.0 * eta * eta + 5.0 * eta + 2.0) / (eta * eta + eta + 1.0);
    let scale = 1.0 / norm.sqrt();
    let magnon1 = -2.0 * (eta * eta + 2.0 * eta).sqrt() / Complex64::new(sqrt3, -(1.0 + 2.0 * eta));
    let magnon2 = 2.0 * (2.0 * eta + 1.0).sqrt() / Complex64::new(sqrt3 * eta, 2.0 + eta);
    [Complex64::new(scale, 0.0), magnon1 * scale, magnon2 * scale]
}

/// Maps a manifold config to a full parameter set.
///
/// `port_split` is the fraction of `κ₁ + κ₂` carried by port 1. The Kerr
/// shift starts at zero with the calibrated Kerr scale.
pub fn derive_pseudo_hermitian(
    config: &PseudoHermitianConfig,
    kappa_int: f64,
    port_split: f64,
) -> Result<PhysicalParams> {
    config.validate()?;
    ensure_positive("kappa_int", kappa_int)?;
    if !(port_split > 0.0 && port_split < 1.0) {
        return Err(Error::invalid("port_split", "in (0, 1)", port_split));
    }
    let eta = config.eta;
    let ports = (1.0 + eta) + kappa_int;
    let delta1 = config.delta1_sign.value() * config.delta1_squared().sqrt();
    let params = PhysicalParams {
        gamma1: eta,
        gamma2: 1.0,
        kappa_int,
        kappa1: port_split * ports,
        kappa2: (1.0 - port_split) * ports,
        g1: config.g1,
        g2: config.k_ratio * config.g1,
        delta1,
        delta2: -eta * delta1,
        delta_k: 0.0,
        kerr_scale: CALIBRATED_KERR_SCALE,
    };
    params.validate()?;
    Ok(params)
}

/// Parameters at the exceptional point with equal port decays and
/// `κ_int = γ₂`, the operating point used for all reference spectra.
pub fn ep3_operating_point(eta: f64) -> Result<PhysicalParams> {
    derive_pseudo_hermitian(&PseudoHermitianConfig::at_ep3(eta)?, 1.0, 0.5)
}
