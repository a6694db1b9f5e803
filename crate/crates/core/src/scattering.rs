//! Probe response of the cavity: self-energy, output spectrum `S`, dip
//! extraction and the Kerr-shift enhancement factor.
//!
//! Traces are sampled in `δ_cp = ω_c − ω_p`. Dips are reported both in
//! `δ_cp` and in the probe offset `ω_p − ω_c = −δ_cp`; the latter is the
//! frame in which coherent perfect absorption sits at the eigenvalues of the
//! effective Hamiltonian, so dips are ordered by probe offset.

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};
use crate::exec::Execution;
use crate::params::{
    derive_pseudo_hermitian, omega_ep3, PhysicalParams, PseudoHermitianConfig,
    CALIBRATED_KERR_SCALE,
};

type C = Complex64;

pub const DEFAULT_HALF_WIDTH: f64 = 3.0;
pub const DEFAULT_POINTS: usize = 20001;
/// A local minimum counts as a dip when it lies below this fraction of the
/// lower of the highest values on either side of it.
pub const PROMINENCE_RATIO: f64 = 0.5;
/// Target bracket width of the golden-section refinement.
pub const DIP_REFINE_TOL: f64 = 1e-8;

/// `Σ = g₁²/[γ₁ + i(δ_1p + s·Δ_K)] + g₂²/[γ₂ + iδ_2p]` with `s` the Kerr
/// scale of `params`.
pub fn self_energy(params: &PhysicalParams, delta_1p: f64, delta_2p: f64, delta_k: f64) -> C {
    let m1 = C::new(params.gamma1, delta_1p + params.kerr_detuning(delta_k));
    let m2 = C::new(params.gamma2, delta_2p);
    params.g1 * params.g1 / m1 + params.g2 * params.g2 / m2
}

/// `κ_c + iδ_cp + Σ`, the denominator shared by every output field.
fn response_denominator(params: &PhysicalParams, delta_cp: f64, delta_k: f64) -> C {
    let sigma = self_energy(
        params,
        delta_cp + params.delta1,
        delta_cp + params.delta2,
        delta_k,
    );
    C::new(params.kappa_c(), delta_cp) + sigma
}

/// Output amplitude ratio `S` for inputs in the absorbing ratio.
pub fn s_parameter(params: &PhysicalParams, delta_cp: f64, delta_k: f64) -> C {
    2.0 * (params.kappa1 + params.kappa2) / response_denominator(params, delta_cp, delta_k) - 1.0
}

pub fn s_abs2(params: &PhysicalParams, delta_cp: f64, delta_k: f64) -> f64 {
    s_parameter(params, delta_cp, delta_k).norm_sqr()
}

/// Probe offset `ω_p − ω_c` corresponding to a cavity-probe detuning.
pub fn probe_offset(delta_cp: f64) -> f64 {
    -delta_cp
}

/// Input ratio `a₂/a₁ = √(κ₂/κ₁)` under which both ports respond with the
/// same `S`.
pub fn cpa_input_ratio(params: &PhysicalParams) -> f64 {
    (params.kappa2 / params.kappa1).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortOutputs {
    pub port1: C,
    pub port2: C,
}

/// Output fields of both ports for arbitrary input amplitudes.
pub fn port_outputs(
    params: &PhysicalParams,
    delta_cp: f64,
    delta_k: f64,
    input1: C,
    input2: C,
) -> PortOutputs {
    let den = response_denominator(params, delta_cp, delta_k);
    let cross = 2.0 * (params.kappa1 * params.kappa2).sqrt();
    PortOutputs {
        port1: (2.0 * params.kappa1 * input1 + cross * input2) / den - input1,
        port2: (cross * input1 + 2.0 * params.kappa2 * input2) / den - input2,
    }
}

/// Uniform grid in `δ_cp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeWindow {
    pub center: f64,
    pub half_width: f64,
    pub points: usize,
}

impl ProbeWindow {
    pub fn new(center: f64, half_width: f64, points: usize) -> Result<Self> {
        let w = Self {
            center,
            half_width,
            points,
        };
        w.validate()?;
        Ok(w)
    }

    /// Default window around the coalesced eigenvalue, which absorbs at
    /// `δ_cp = −Ω_EP3`.
    pub fn around_ep3(eta: f64) -> Self {
        Self {
            center: -omega_ep3(eta, 0.0),
            half_width: DEFAULT_HALF_WIDTH,
            points: DEFAULT_POINTS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.center.is_finite() {
            return Err(Error::InvalidWindow(format!(
                "center must be finite, got {}",
                self.center
            )));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::InvalidWindow(format!(
                "half width must be positive, got {}",
                self.half_width
            )));
        }
        if self.points < 2 {
            return Err(Error::InvalidWindow(format!(
                "need at least 2 points, got {}",
                self.points
            )));
        }
        let step = 2.0 * self.half_width / (self.points - 1) as f64;
        if self.center + step == self.center {
            return Err(Error::InvalidWindow(
                "grid spacing is below floating-point resolution".into(),
            ));
        }
        Ok(())
    }

    pub fn lo(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn hi(&self) -> f64 {
        self.center + self.half_width
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    pub fn sample(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            self.hi()
        } else {
            self.lo() + self.step() * i as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTrace {
    /// Strictly increasing.
    pub delta_cp: Vec<f64>,
    pub s_abs2: Vec<f64>,
    pub params: PhysicalParams,
    pub delta_k: f64,
    pub window: ProbeWindow,
}

impl SpectrumTrace {
    pub fn len(&self) -> usize {
        self.delta_cp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta_cp.is_empty()
    }

    /// Index of the global minimum of `|S|²`.
    pub fn argmin(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.s_abs2.iter().enumerate() {
            if *v < self.s_abs2[best] {
                best = i;
            }
        }
        best
    }
}

pub fn scan(params: &PhysicalParams, delta_k: f64, window: &ProbeWindow) -> Result<SpectrumTrace> {
    scan_with(params, delta_k, window, Execution::default())
}

pub fn scan_with(
    params: &PhysicalParams,
    delta_k: f64,
    window: &ProbeWindow,
    exec: Execution,
) -> Result<SpectrumTrace> {
    params.validate()?;
    ensure_finite("delta_k", delta_k)?;
    window.validate()?;
    let delta_cp: Vec<f64> = (0..window.points).map(|i| window.sample(i)).collect();
    let s_abs2 = exec.map_slice(&delta_cp, |&d| s_abs2(params, d, delta_k));
    Ok(SpectrumTrace {
        delta_cp,
        s_abs2,
        params: *params,
        delta_k,
        window: *window,
    })
}

/// Golden-section minimisation of a unimodal `f` on `[a, b]`, returning the
/// abscissa and value of the minimum.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        if x1 == x2 {
            break;
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dip {
    pub delta_cp: f64,
    /// `ω_p − ω_c`.
    pub probe_offset: f64,
    pub depth: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipReport {
    /// Ordered by probe offset.
    pub dips: [Dip; 2],
    pub delta_omega_p: f64,
    /// `δω_p/Δ_K`, present only for a positive Kerr shift.
    pub enhancement: Option<f64>,
    pub delta_k: f64,
    pub qualifying: usize,
}

/// Grid indices of strict local minima passing the prominence rule. The
/// flanking maximum on each side is the highest sample between the minimum
/// and that end of the trace.
fn qualifying_minima(s: &[f64]) -> Vec<usize> {
    let n = s.len();
    if n < 3 {
        return Vec::new();
    }
    let mut left_max = vec![f64::NEG_INFINITY; n];
    for i in 1..n {
        left_max[i] = left_max[i - 1].max(s[i - 1]);
    }
    let mut right_max = vec![f64::NEG_INFINITY; n];
    for i in (0..n - 1).rev() {
        right_max[i] = right_max[i + 1].max(s[i + 1]);
    }
    (1..n - 1)
        .filter(|&i| s[i] < s[i - 1] && s[i] < s[i + 1])
        .filter(|&i| s[i] < PROMINENCE_RATIO * left_max[i].min(right_max[i]))
        .collect()
}

/// Locates the two dips of a trace and refines them on the continuous
/// spectrum.
pub fn find_dips(trace: &SpectrumTrace) -> Result<DipReport> {
    let minima = qualifying_minima(&trace.s_abs2);
    if minima.len() != 2 {
        return Err(Error::DipCountMismatch {
            count: minima.len(),
        });
    }
    let f = |d: f64| s_abs2(&trace.params, d, trace.delta_k);
    let refine = |i: usize| {
        let (x, depth) = golden_section_min(
            f,
            trace.delta_cp[i - 1],
            trace.delta_cp[i + 1],
            DIP_REFINE_TOL,
        );
        Dip {
            delta_cp: x,
            probe_offset: probe_offset(x),
            depth,
        }
    };
    let mut dips = [refine(minima[0]), refine(minima[1])];
    dips.sort_by(|a, b| a.probe_offset.total_cmp(&b.probe_offset));
    let delta_omega_p = dips[1].probe_offset - dips[0].probe_offset;
    let enhancement = (trace.delta_k > 0.0).then(|| delta_omega_p / trace.delta_k);
    Ok(DipReport {
        dips,
        delta_omega_p,
        enhancement,
        delta_k: trace.delta_k,
        qualifying: minima.len(),
    })
}

/// Shared settings of an enhancement table. Each row sits at the
/// exceptional point of its own `η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnhancementBase {
    pub kappa_int: f64,
    pub port_split: f64,
    pub kerr_scale: f64,
    pub half_width: f64,
    pub points: usize,
}

impl Default for EnhancementBase {
    fn default() -> Self {
        Self {
            kappa_int: 1.0,
            port_split: 0.5,
            kerr_scale: CALIBRATED_KERR_SCALE,
            half_width: DEFAULT_HALF_WIDTH,
            points: DEFAULT_POINTS,
        }
    }
}

impl EnhancementBase {
    pub fn params(&self, eta: f64) -> Result<PhysicalParams> {
        let config = PseudoHermitianConfig::at_ep3(eta)?;
        let params = derive_pseudo_hermitian(&config, self.kappa_int, self.port_split)?
            .with_kerr_scale(self.kerr_scale);
        params.validate()?;
        Ok(params)
    }

    pub fn window(&self, eta: f64) -> Result<ProbeWindow> {
        ProbeWindow::new(-omega_ep3(eta, 0.0), self.half_width, self.points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnhancementRow {
    pub eta: f64,
    pub xi: f64,
    pub delta_omega_p: f64,
    pub enhancement: f64,
}

/// Dip distance and enhancement for every `(η, ξ)` pair, `η`-major.
pub fn enhancement_curve(
    etas: &[f64],
    xis: &[f64],
    base: &EnhancementBase,
) -> Result<Vec<EnhancementRow>> {
    enhancement_curve_with(etas, xis, base, Execution::default())
}

pub fn enhancement_curve_with(
    etas: &[f64],
    xis: &[f64],
    base: &EnhancementBase,
    exec: Execution,
) -> Result<Vec<EnhancementRow>> {
    let cells: Vec<(f64, f64)> = etas
        .iter()
        .flat_map(|&eta| xis.iter().map(move |&xi| (eta, xi)))
        .collect();
    let cell = |&(eta, xi): &(f64, f64)| -> Result<EnhancementRow> {
        let wrap = |e: Error| Error::EnhancementCell {
            eta,
            xi,
            source: Box::new(e),
        };
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(wrap(Error::invalid("xi", "positive and finite", xi)));
        }
        let params = base.params(eta).map_err(wrap)?;
        let window = base.window(eta).map_err(wrap)?;
        let trace = scan_with(&params, xi, &window, exec).map_err(wrap)?;
        let report = find_dips(&trace).map_err(wrap)?;
        Ok(EnhancementRow {
            eta,
            xi,
            delta_omega_p: report.delta_omega_p,
            enhancement: report.delta_omega_p / xi,
        })
    };
    exec.map_slice(&cells, cell).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{ep3_operating_point, DeltaSign, MEAN_FIELD_KERR_SCALE};
    use crate::spectral::{build_heff, eigenvalues};

    fn bare_cavity() -> PhysicalParams {
        PhysicalParams {
            gamma1: 1.0,
            gamma2: 1.0,
            kappa_int: 1.0,
            kappa1: 1.0,
            kappa2: 1.0,
            g1: 0.0,
            g2: 0.0,
            delta1: 0.3,
            delta2: -0.3,
            delta_k: 0.0,
            kerr_scale: MEAN_FIELD_KERR_SCALE,
        }
    }

    #[test]
    fn self_energy_limits() {
        let p = ep3_operating_point(2.0)
            .unwrap()
            .with_kerr_scale(MEAN_FIELD_KERR_SCALE);
        assert_eq!(self_energy(&bare_cavity(), 0.1, 0.2, 0.3), C::new(0.0, 0.0));
        let resonant = self_energy(&p, -0.05, 0.0, 0.05);
        let expected = p.g1 * p.g1 / p.gamma1 + p.g2 * p.g2 / p.gamma2;
        assert!((resonant - C::new(expected, 0.0)).norm() < 1e-14 * expected);
        assert!(self_energy(&p, 1e12, -1e12, 0.0).norm() < 1e-10);
    }

    #[test]
    fn bare_cavity_reflects_one_third() {
        for scale in [MEAN_FIELD_KERR_SCALE, CALIBRATED_KERR_SCALE] {
            let s = s_parameter(&bare_cavity().with_kerr_scale(scale), 0.0, 0.4);
            assert!((s - C::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn absorbs_at_ep3() {
        for eta in [0.5, 1.0, 2.0, 3.0] {
            let p = ep3_operating_point(eta).unwrap();
            let s2 = s_abs2(&p, -omega_ep3(eta, 0.0), 0.0);
            assert!(s2 < 1e-20, "eta {eta}: {s2}");
        }
    }

    #[test]
    fn absorbs_at_three_real_eigenvalues() {
        let cfg = PseudoHermitianConfig::new(1.0, 2.0, DeltaSign::Plus).unwrap();
        let p = derive_pseudo_hermitian(&cfg, 1.0, 0.5).unwrap();
        let r = 2.0 * 2f64.sqrt();
        for omega in [-r, 0.0, r] {
            assert!(s_abs2(&p, -omega, 0.0) < 1e-20, "{omega}");
        }
        assert!(s_abs2(&p, 1.0, 0.0) > 1e-3);
    }

    #[test]
    fn port_outputs_reduce_to_s_in_absorbing_ratio() {
        let p = ep3_operating_point(2.0).unwrap();
        let a1 = C::new(0.7, -0.2);
        let a2 = a1 * cpa_input_ratio(&p);
        let out = port_outputs(&p, 0.3, 0.01, a1, a2);
        let s = s_parameter(&p, 0.3, 0.01);
        assert!((out.port1 - s * a1).norm() < 1e-14);
        assert!((out.port2 - s * a2).norm() < 1e-14);
        let zero = port_outputs(&p, -omega_ep3(2.0, 0.0), 0.0, a1, a2);
        assert!(zero.port1.norm() < 1e-9 && zero.port2.norm() < 1e-9);
        // an unbalanced input is not absorbed
        let off = port_outputs(&p, -omega_ep3(2.0, 0.0), 0.0, a1, -a2);
        assert!(off.port1.norm() > 1e-3);
    }

    #[test]
    fn rejects_degenerate_windows() {
        let p = ep3_operating_point(1.0).unwrap();
        for w in [
            ProbeWindow {
                center: 0.0,
                half_width: 0.0,
                points: 100,
            },
            ProbeWindow {
                center: 0.0,
                half_width: 1.0,
                points: 1,
            },
            ProbeWindow {
                center: f64::NAN,
                half_width: 1.0,
                points: 10,
            },
            ProbeWindow {
                center: 1e20,
                half_width: 1.0,
                points: 10,
            },
        ] {
            assert!(
                matches!(scan(&p, 0.0, &w), Err(Error::InvalidWindow(_))),
                "{w:?}"
            );
        }
    }

    #[test]
    fn ep3_trace_has_single_absorption_point() {
        let p = ep3_operating_point(1.0).unwrap();
        let window = ProbeWindow::around_ep3(1.0);
        let trace = scan(&p, 0.0, &window).unwrap();
        assert_eq!(trace.len(), DEFAULT_POINTS);
        assert!(trace.delta_cp.windows(2).all(|w| w[0] < w[1]));
        assert!(trace.s_abs2.iter().all(|v| *v >= 0.0));
        let i = trace.argmin();
        assert!(trace.delta_cp[i].abs() <= window.step() / 2.0);
        assert!(matches!(
            find_dips(&trace),
            Err(Error::DipCountMismatch { count: 1 })
        ));
    }

    #[test]
    fn symmetric_trace_is_mirror_symmetric() {
        let p = ep3_operating_point(1.0).unwrap();
        let trace = scan(&p, 0.0, &ProbeWindow::around_ep3(1.0)).unwrap();
        let n = trace.len();
        for i in 0..n {
            let (a, b) = (trace.s_abs2[i], trace.s_abs2[n - 1 - i]);
            assert!((a - b).abs() <= 1e-10 * a.max(b) + 1e-15, "{i}: {a} {b}");
        }
    }

    #[test]
    fn sequential_and_parallel_scans_match() {
        let p = ep3_operating_point(2.0).unwrap();
        let w = ProbeWindow::around_ep3(2.0);
        let a = scan_with(&p, 0.01, &w, Execution::Sequential).unwrap();
        let b = scan_with(&p, 0.01, &w, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn reference_dips() {
        // independent evaluation with 20001 samples on ±3 and bounded scalar
        // minimisation of |S|²
        let p = ep3_operating_point(1.0).unwrap();
        let w = ProbeWindow::around_ep3(1.0);
        let r = find_dips(&scan(&p, 1e-3, &w).unwrap()).unwrap();
        assert!((r.dips[0].probe_offset + 0.038_553_4).abs() < 1e-6, "{r:?}");
        assert!((r.dips[1].probe_offset - 0.110_703_4).abs() < 1e-6, "{r:?}");
        assert!((r.delta_omega_p - 0.149_256_8).abs() < 1e-6);
        assert!((r.enhancement.unwrap() - 149.256_8).abs() < 1e-3);
        assert_eq!(r.dips[0].delta_cp, -r.dips[0].probe_offset);

        let r = find_dips(&scan(&p, 1e-2, &w).unwrap()).unwrap();
        assert!((r.dips[0].probe_offset + 0.116_931_3).abs() < 1e-6, "{r:?}");
        assert!((r.dips[1].probe_offset - 0.244_857_9).abs() < 1e-6, "{r:?}");
        assert!((r.delta_omega_p - 0.361_789_2).abs() < 1e-6);
    }

    #[test]
    fn dips_lie_between_split_eigenvalues() {
        let p = ep3_operating_point(1.0).unwrap();
        let w = ProbeWindow::around_ep3(1.0);
        for xi in [1e-3, 1e-2, 1e-1] {
            let r = find_dips(&scan(&p, xi, &w).unwrap()).unwrap();
            let e = eigenvalues(&build_heff(&p.with_delta_k(xi), 0.0).unwrap());
            assert!(r.dips[0].probe_offset > e.minus.re, "xi {xi}");
            assert!(r.dips[1].probe_offset < e.plus.re, "xi {xi}");
            assert!(r.dips[0].probe_offset < r.dips[1].probe_offset);
        }
    }

    #[test]
    fn enhancement_is_monotone() {
        let xis = [1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3];
        let rows = enhancement_curve(&[1.0, 2.0, 3.0], &xis, &EnhancementBase::default()).unwrap();
        assert_eq!(rows.len(), 18);
        for eta_rows in rows.chunks(xis.len()) {
            for w in eta_rows.windows(2) {
                assert!(w[1].enhancement < w[0].enhancement);
                assert!(w[1].delta_omega_p > w[0].delta_omega_p);
            }
        }
        for j in 0..xis.len() {
            assert!(rows[j].enhancement < rows[6 + j].enhancement);
            assert!(rows[6 + j].enhancement < rows[12 + j].enhancement);
        }
        let r = |eta_idx: usize, xi_idx: usize| rows[eta_idx * 6 + xi_idx].enhancement;
        assert!((r(0, 0) - 149.256_8).abs() < 1e-3);
        assert!((r(0, 5) - 5.375_839).abs() < 1e-5);
        assert!((r(1, 0) - 184.842).abs() < 1e-2);
        assert!((r(1, 5) - 6.397_69).abs() < 1e-4);
        assert!((r(2, 0) - 206.599_5).abs() < 1e-3);
        assert!((r(2, 2) - 48.700).abs() < 1e-2);
        assert!((r(2, 5) - 6.883_172).abs() < 1e-5);
    }

    #[test]
    fn dip_distance_slope_near_one_third() {
        let p = ep3_operating_point(1.0).unwrap();
        let w = ProbeWindow::around_ep3(1.0);
        let xis = [1e-5, 1e-4, 1e-3, 1e-2];
        let d: Vec<f64> = xis
            .iter()
            .map(|&xi| find_dips(&scan(&p, xi, &w).unwrap()).unwrap().delta_omega_p)
            .collect();
        for (got, want) in d
            .iter()
            .zip([0.027_635_1, 0.063_487_3, 0.149_256_8, 0.361_789_2])
        {
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
        let fit = crate::puiseux::log_log_fit(&xis, &d).unwrap();
        assert!((fit.slope - 1.0 / 3.0).abs() < 0.05, "{fit:?}");
    }

    #[test]
    fn failing_cell_is_named() {
        let err = enhancement_curve(&[1.0], &[0.0], &EnhancementBase::default()).unwrap_err();
        assert!(matches!(err, Error::EnhancementCell { eta, xi, .. } if eta == 1.0 && xi == 0.0));
        let err = enhancement_curve(
            &[1.0],
            &[1e-3],
            &EnhancementBase {
                points: 3,
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(err.is_numerical());
    }

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let (x, fx) = golden_section_min(|x| (x - 0.3).powi(2), -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx < 1e-18);
    }
}
