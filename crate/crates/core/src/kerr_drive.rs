//! Self-consistent steady state of the strongly driven modes.
//!
//! The drive populates magnon 1, whose Kerr nonlinearity shifts its frequency
//! by `Δ_K = 2K₁m` with `m = |𝓑₁|²`. Eliminating the cavity and magnon-2
//! amplitudes leaves a real cubic in `m`; every non-negative root is a
//! stationary branch. The drive sees the full cavity damping `κ_c`.

use num_complex::Complex64;

use crate::cubic::real_cubic_roots;
use crate::error::{ensure_finite, ensure_non_negative, Error, Result};
use crate::exec::Execution;
use crate::params::PhysicalParams;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveConfig {
    pub delta_cd: f64,
    pub delta_1d: f64,
    pub delta_2d: f64,
    /// Drive Rabi frequency `Ω_d`.
    pub omega_d_rabi: f64,
    /// Kerr coefficient `K₁` per excitation.
    pub kerr_k1: f64,
}

impl DriveConfig {
    pub fn validate(&self) -> Result<()> {
        ensure_finite("delta_cd", self.delta_cd)?;
        ensure_finite("delta_1d", self.delta_1d)?;
        ensure_finite("delta_2d", self.delta_2d)?;
        ensure_non_negative("omega_d", self.omega_d_rabi)?;
        ensure_non_negative("kerr_k1", self.kerr_k1)?;
        Ok(())
    }

    pub fn with_omega_d(mut self, omega_d: f64) -> Self {
        self.omega_d_rabi = omega_d;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStateBranch {
    pub cavity: C,
    pub magnon1: C,
    pub magnon2: C,
    /// `|𝓑₁|²`.
    pub occupation: f64,
    pub delta_k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchSelection {
    /// Smallest occupation, the branch reached by ramping the drive up from
    /// zero.
    #[default]
    Lowest,
    Highest,
    Index(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    /// Sorted by ascending occupation.
    pub branches: Vec<SteadyStateBranch>,
    pub multistable: bool,
    /// Discriminant of the cubic in `m`; positive where three branches exist.
    pub discriminant: f64,
}

impl SteadyState {
    pub fn select(&self, selection: BranchSelection) -> Option<&SteadyStateBranch> {
        match selection {
            BranchSelection::Lowest => self.branches.first(),
            BranchSelection::Highest => self.branches.last(),
            BranchSelection::Index(i) => self.branches.get(i),
        }
    }
}

/// Cavity-side denominator `D = δ_cd − iκ_c − g₂²/(δ_2d − iγ₂)`.
fn cavity_denominator(params: &PhysicalParams, drive: &DriveConfig) -> C {
    let magnon2 = C::new(drive.delta_2d, -params.gamma2);
    C::new(drive.delta_cd, -params.kappa_c()) - params.g2 * params.g2 / magnon2
}

/// Dressed magnon-1 response `χ(m) = δ_1d + 2K₁m − iγ₁ − g₁²/D`.
pub fn dressed_response(params: &PhysicalParams, drive: &DriveConfig, occupation: f64) -> C {
    let d = cavity_denominator(params, drive);
    C::new(
        drive.delta_1d + 2.0 * drive.kerr_k1 * occupation,
        -params.gamma1,
    ) - params.g1 * params.g1 / d
}

fn branch_at(params: &PhysicalParams, drive: &DriveConfig, occupation: f64) -> SteadyStateBranch {
    let chi = dressed_response(params, drive, occupation);
    let magnon1 = -drive.omega_d_rabi / chi;
    let cavity = -params.g1 * magnon1 / cavity_denominator(params, drive);
    let magnon2 = -params.g2 * cavity / C::new(drive.delta_2d, -params.gamma2);
    SteadyStateBranch {
        cavity,
        magnon1,
        magnon2,
        occupation,
        delta_k: 2.0 * drive.kerr_k1 * occupation,
    }
}

/// All stationary branches for the given drive.
pub fn steady_state(params: &PhysicalParams, drive: &DriveConfig) -> Result<SteadyState> {
    params.validate()?;
    drive.validate()?;
    if drive.omega_d_rabi == 0.0 {
        let zero = C::new(0.0, 0.0);
        return Ok(SteadyState {
            branches: vec![SteadyStateBranch {
                cavity: zero,
                magnon1: zero,
                magnon2: zero,
                occupation: 0.0,
                delta_k: 0.0,
            }],
            multistable: false,
            discriminant: 0.0,
        });
    }
    // m |χ(m)|² = Ω_d² with χ(m) = c₀ + 2K₁m
    let c0 = dressed_response(params, drive, 0.0);
    let k = drive.kerr_k1;
    let a = 4.0 * k * k;
    let b = 4.0 * k * c0.re;
    let c = c0.norm_sqr();
    let d = -drive.omega_d_rabi * drive.omega_d_rabi;
    let solved = real_cubic_roots(a, b, c, d);
    // m|χ|² − Ω_d² is negative for every m < 0, so all real roots are physical
    let branches: Vec<SteadyStateBranch> = solved
        .roots
        .iter()
        .filter(|m| **m >= 0.0)
        .map(|&m| branch_at(params, drive, m))
        .collect();
    Ok(SteadyState {
        multistable: branches.len() > 1,
        branches,
        discriminant: solved.discriminant,
    })
}

/// Steady states along a sweep of drive strengths.
pub fn drive_sweep(
    params: &PhysicalParams,
    drive: &DriveConfig,
    omega_d: &[f64],
    exec: Execution,
) -> Result<Vec<SteadyState>> {
    exec.map_slice(omega_d, |&w| steady_state(params, &drive.with_omega_d(w)))
        .into_iter()
        .collect()
}

/// Largest residual of the three stationary equations, each relative to the
/// magnitude of its largest term.
pub fn stationary_residual(
    params: &PhysicalParams,
    drive: &DriveConfig,
    branch: &SteadyStateBranch,
) -> f64 {
    let (a, b1, b2) = (branch.cavity, branch.magnon1, branch.magnon2);
    let rel = |terms: &[C]| {
        let sum: C = terms.iter().sum();
        let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            0.0
        } else {
            sum.norm() / scale
        }
    };
    let cavity = rel(&[
        C::new(drive.delta_cd, -params.kappa_c()) * a,
        params.g1 * b1,
        params.g2 * b2,
    ]);
    let magnon1 = rel(&[
        C::new(drive.delta_1d + branch.delta_k, -params.gamma1) * b1,
        params.g1 * a,
        C::new(drive.omega_d_rabi, 0.0),
    ]);
    let magnon2 = rel(&[C::new(drive.delta_2d, -params.gamma2) * b2, params.g2 * a]);
    cavity.max(magnon1).max(magnon2)
}

/// Drive strength whose branch at `m = Δ_K/(2K₁)` produces the target
/// Kerr shift.
pub fn drive_for_target_shift(
    params: &PhysicalParams,
    template: &DriveConfig,
    target_delta_k: f64,
) -> Result<f64> {
    params.validate()?;
    ensure_non_negative("target_delta_k", target_delta_k)?;
    if !(template.kerr_k1 > 0.0 && template.kerr_k1.is_finite()) {
        return Err(Error::invalid(
            "kerr_k1",
            "positive to reach a Kerr shift",
            template.kerr_k1,
        ));
    }
    if target_delta_k == 0.0 {
        return Ok(0.0);
    }
    let m = target_delta_k / (2.0 * template.kerr_k1);
    Ok((m * dressed_response(params, template, m).norm_sqr()).sqrt())
}
