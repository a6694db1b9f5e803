//! Effective non-Hermitian Hamiltonian of the probe dynamics and its exact
//! spectrum.
//!
//! The spectrum is obtained from the characteristic cubic in closed form.
//! The cubic is shifted by a third of the trace so that the coalesced root of
//! an exceptional point sits at the origin of the depressed variable, where
//! its cube-root sensitivity can be controlled.

use num_complex::Complex64;

use crate::cubic::{depressed_roots, newton_polish_depressed};
use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::params::{
    derive_pseudo_hermitian, g_min, DeltaSign, PhysicalParams, PseudoHermitianConfig,
};

/// Default distance below which eigenvalues count as coalesced, and below
/// which imaginary parts count as zero.
pub const DEFAULT_COALESCENCE_TOL: f64 = 1e-7;

/// Depressed coefficients smaller than this many rounding units of their
/// natural scale are indistinguishable from zero.
const NOISE_ULPS: f64 = 8.0;

/// Bracket width on the coupling below which `find_ep3` stops.
pub const EP3_SEARCH_TOL: f64 = 1e-10;

type C = Complex64;

/// Dense 3×3 effective Hamiltonian in the basis (cavity, magnon 1, magnon 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveHamiltonian {
    entries: [[C; 3]; 3],
    params: PhysicalParams,
    delta_cp: f64,
}

/// Characteristic cubic written as `t³ + p·t + q` with `Ω = shift + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepressedCubic {
    pub shift: C,
    pub p: C,
    pub q: C,
    /// Rounding-noise floor of `p`.
    pub p_noise: f64,
    /// Rounding-noise floor of `q`.
    pub q_noise: f64,
}

impl DepressedCubic {
    /// Discriminant `−4p³ − 27q²`; zero exactly when two roots coincide.
    pub fn discriminant(&self) -> C {
        -4.0 * self.p * self.p * self.p - 27.0 * self.q * self.q
    }
}

/// Builds the effective Hamiltonian at probe detuning `delta_cp` with the
/// Kerr shift stored in `params`.
pub fn build_heff(params: &PhysicalParams, delta_cp: f64) -> Result<EffectiveHamiltonian> {
    params.validate()?;
    ensure_finite("delta_cp", delta_cp)?;
    let kappa_g = params.kappa_g();
    if kappa_g <= 0.0 {
        return Err(Error::NonPositiveGain { kappa_g });
    }
    let zero = C::new(0.0, 0.0);
    let g1 = C::new(params.g1, 0.0);
    let g2 = C::new(params.g2, 0.0);
    let d1p = delta_cp + params.delta1;
    let d2p = delta_cp + params.delta2;
    let entries = [
        [C::new(delta_cp, kappa_g), g1, g2],
        [
            g1,
            C::new(d1p + params.kerr_detuning(params.delta_k), -params.gamma1),
            zero,
        ],
        [g2, zero, C::new(d2p, -params.gamma2)],
    ];
    Ok(EffectiveHamiltonian {
        entries,
        params: *params,
        delta_cp,
    })
}

impl EffectiveHamiltonian {
    pub fn entry(&self, row: usize, col: usize) -> C {
        self.entries[row][col]
    }

    pub fn entries(&self) -> &[[C; 3]; 3] {
        &self.entries
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn delta_cp(&self) -> f64 {
        self.delta_cp
    }

    pub fn trace(&self) -> C {
        self.entries[0][0] + self.entries[1][1] + self.entries[2][2]
    }

    pub fn determinant(&self) -> C {
        det3(&self.entries)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C; 3]) -> [C; 3] {
        let mut out = [C::new(0.0, 0.0); 3];
        for (row, o) in self.entries.iter().zip(out.iter_mut()) {
            *o = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// `det(H − Ω·I)`.
    pub fn characteristic(&self, omega: C) -> C {
        let mut m = self.entries;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] -= omega;
        }
        det3(&m)
    }

    pub fn depressed(&self) -> DepressedCubic {
        let shift = self.trace() / 3.0;
        let mut m = self.entries;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] -= shift;
        }
        // sum of principal 2x2 minors of the traceless matrix
        let p = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0]
            + m[1][1] * m[2][2]
            - m[1][2] * m[2][1];
        let q = -det3(&m);
        let scale = self
            .entries
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(shift.norm(), f64::max);
        DepressedCubic {
            shift,
            p,
            q,
            p_noise: NOISE_ULPS * f64::EPSILON * scale * scale,
            q_noise: NOISE_ULPS * f64::EPSILON * scale * scale * scale,
        }
    }

    /// Discriminant of the characteristic cubic.
    pub fn discriminant(&self) -> C {
        self.depressed().discriminant()
    }
}

fn det3(m: &[[C; 3]; 3]) -> C {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectralClass {
    ThreeReal,
    RealPlusConjugatePair,
    Coalesced2,
    Coalesced3,
    /// Matches none of the patterns a pseudo-Hermitian spectrum can take.
    Indeterminate,
}

impl SpectralClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectralClass::ThreeReal => "three_real",
            SpectralClass::RealPlusConjugatePair => "real_plus_conjugate_pair",
            SpectralClass::Coalesced2 => "coalesced2",
            SpectralClass::Coalesced3 => "coalesced3",
            SpectralClass::Indeterminate => "indeterminate",
        }
    }
}

/// How the three roots were assigned to the labels `−`, `0`, `+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Labeling {
    /// Ascending real part.
    SortedByReal,
    /// Real root is `0`; the conjugate pair is ordered by imaginary part.
    RealWithConjugatePair,
    /// Root with the largest imaginary part is `0`; the other two ascend in
    /// real part.
    LargestImaginaryAsZero,
    /// Matched to a previous spectrum by minimal total distance.
    Tracked,
    /// Assigned by perturbation-series branch.
    SeriesBranch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumTriple {
    pub minus: C,
    pub zero: C,
    pub plus: C,
    pub class: SpectralClass,
    pub labeling: Labeling,
}

impl SpectrumTriple {
    /// Roots in the order (`−`, `0`, `+`).
    pub fn roots(&self) -> [C; 3] {
        [self.minus, self.zero, self.plus]
    }

    pub fn sum(&self) -> C {
        self.minus + self.zero + self.plus
    }

    pub fn product(&self) -> C {
        self.minus * self.zero * self.plus
    }

    /// Largest pairwise distance between roots.
    pub fn spread(&self) -> f64 {
        let r = self.roots();
        (r[0] - r[1])
            .norm()
            .max((r[0] - r[2]).norm())
            .max((r[1] - r[2]).norm())
    }
}

/// Exact eigenvalues with the default coalescence tolerance.
pub fn eigenvalues(h: &EffectiveHamiltonian) -> SpectrumTriple {
    eigenvalues_with_tol(h, DEFAULT_COALESCENCE_TOL)
}

/// Exact eigenvalues of `h` from the closed-form cubic, each polished by one
/// Newton step, then classified and labelled.
pub fn eigenvalues_with_tol(h: &EffectiveHamiltonian, tol: f64) -> SpectrumTriple {
    label_roots(raw_eigenvalues(h), tol)
}

/// Unlabelled roots of the characteristic cubic.
pub fn raw_eigenvalues(h: &EffectiveHamiltonian) -> [C; 3] {
    let cubic = h.depressed();
    let zero = C::new(0.0, 0.0);
    let p = if cubic.p.norm() <= cubic.p_noise {
        zero
    } else {
        cubic.p
    };
    let q = if cubic.q.norm() <= cubic.q_noise {
        zero
    } else {
        cubic.q
    };
    depressed_roots(p, q).map(|t| newton_polish_depressed(t, p, q) + cubic.shift)
}

/// Classifies three roots.
///
/// Coalescence is checked first, then reality; anything else must be one
/// real root plus a conjugate pair or it is reported as indeterminate.
pub fn classify_spectrum(roots: &[C; 3], tol: f64) -> SpectralClass {
    let close = |a: C, b: C| (a - b).norm() < tol;
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let coalesced = pairs
        .iter()
        .filter(|(i, j)| close(roots[*i], roots[*j]))
        .count();
    if coalesced == 3 {
        return SpectralClass::Coalesced3;
    }
    if coalesced > 0 {
        return SpectralClass::Coalesced2;
    }
    let real: Vec<usize> = (0..3).filter(|&i| roots[i].im.abs() < tol).collect();
    match real.len() {
        3 => SpectralClass::ThreeReal,
        1 => {
            let others: Vec<C> = (0..3).filter(|&i| i != real[0]).map(|i| roots[i]).collect();
            if close(others[0], others[1].conj()) {
                SpectralClass::RealPlusConjugatePair
            } else {
                SpectralClass::Indeterminate
            }
        }
        _ => SpectralClass::Indeterminate,
    }
}

/// Classifies and labels a set of roots.
pub fn label_roots(roots: [C; 3], tol: f64) -> SpectrumTriple {
    let class = classify_spectrum(&roots, tol);
    let mut sorted = roots;
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    match class {
        SpectralClass::RealPlusConjugatePair => {
            let zero_idx = (0..3)
                .min_by(|&a, &b| roots[a].im.abs().total_cmp(&roots[b].im.abs()))
                .unwrap_or(0);
            let mut pair: Vec<C> = (0..3)
                .filter(|&i| i != zero_idx)
                .map(|i| roots[i])
                .collect();
            pair.sort_by(|a, b| a.im.total_cmp(&b.im));
            SpectrumTriple {
                minus: pair[0],
                zero: roots[zero_idx],
                plus: pair[1],
                class,
                labeling: Labeling::RealWithConjugatePair,
            }
        }
        SpectralClass::Indeterminate => {
            let zero_idx = (0..3)
                .max_by(|&a, &b| roots[a].im.total_cmp(&roots[b].im))
                .unwrap_or(0);
            let mut rest: Vec<C> = (0..3)
                .filter(|&i| i != zero_idx)
                .map(|i| roots[i])
                .collect();
            rest.sort_by(|a, b| a.re.total_cmp(&b.re));
            SpectrumTriple {
                minus: rest[0],
                zero: roots[zero_idx],
                plus: rest[1],
                class,
                labeling: Labeling::LargestImaginaryAsZero,
            }
        }
        _ => SpectrumTriple {
            minus: sorted[0],
            zero: sorted[1],
            plus: sorted[2],
            class,
            labeling: Labeling::SortedByReal,
        },
    }
}

/// Assigns `roots` to the labels of `previous` by the permutation with the
/// smallest total displacement.
pub fn track(previous: &SpectrumTriple, roots: [C; 3], tol: f64) -> SpectrumTriple {
    const PERMUTATIONS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let prev = previous.roots();
    let cost = |perm: &[usize; 3]| -> f64 {
        perm.iter()
            .zip(prev.iter())
            .map(|(&i, p)| (roots[i] - p).norm())
            .sum()
    };
    let best = PERMUTATIONS
        .iter()
        .min_by(|a, b| cost(a).total_cmp(&cost(b)))
        .expect("non-empty permutation table");
    SpectrumTriple {
        minus: roots[best[0]],
        zero: roots[best[1]],
        plus: roots[best[2]],
        class: classify_spectrum(&roots, tol),
        labeling: Labeling::Tracked,
    }
}

/// Labels a sweep of spectra with continuity tracking.
///
/// The first spectrum is labelled by the static rules; each later one is
/// matched to its predecessor.
#[derive(Debug, Clone)]
pub struct SpectrumTracker {
    tol: f64,
    last: Option<SpectrumTriple>,
}

impl SpectrumTracker {
    pub fn new(tol: f64) -> Self {
        Self { tol, last: None }
    }

    /// Starts tracking from an already labelled spectrum.
    pub fn seeded(seed: SpectrumTriple, tol: f64) -> Self {
        Self {
            tol,
            last: Some(seed),
        }
    }

    pub fn next(&mut self, roots: [C; 3]) -> SpectrumTriple {
        let labelled = match &self.last {
            None => label_roots(roots, self.tol),
            Some(prev) => track(prev, roots, self.tol),
        };
        self.last = Some(labelled);
        labelled
    }
}

/// Effective Hamiltonian on the pseudo-Hermitian manifold at coupling `g1`.
///
/// `κ_int` and the port split do not enter `H_eff`, so unit values are used.
pub fn manifold_hamiltonian(
    eta: f64,
    g1: f64,
    sign: DeltaSign,
    delta_cp: f64,
    delta_k: f64,
) -> Result<EffectiveHamiltonian> {
    let cfg = PseudoHermitianConfig::new(eta, g1, sign)?;
    let params = derive_pseudo_hermitian(&cfg, 1.0, 0.5)?.with_delta_k(delta_k);
    build_heff(&params, delta_cp)
}

/// A function with the sign of the cubic discriminant for real-coefficient
/// spectra, `−Re p/3 − |Re q/2|^{2/3}`.
///
/// Unlike the discriminant, which vanishes to third order at a triple root,
/// it vanishes linearly, so its sign survives rounding close to the
/// exceptional point.
pub fn discriminant_gap(h: &EffectiveHamiltonian) -> f64 {
    let cubic = h.depressed();
    -cubic.p.re / 3.0 - (0.5 * cubic.q.re).abs().powf(2.0 / 3.0)
}

/// Locates the coupling at which the spectrum along the manifold coalesces
/// into a triple root.
///
/// A triple root needs both depressed coefficients to vanish. The linear
/// coefficient `p` changes sign through the exceptional point, so it is
/// bracketed (bisection, then safeguarded secant steps) and the constant
/// coefficient `q` is required to vanish at the result, which makes the
/// discriminant vanish there as well. A lower bracket end below
/// `g_min(eta)` is clamped to `g_min(eta)`.
pub fn find_ep3(eta: f64, lo: f64, hi: f64) -> Result<f64> {
    ensure_positive("eta", eta)?;
    ensure_finite("bracket lower end", lo)?;
    ensure_finite("bracket upper end", hi)?;
    let a = lo.max(g_min(eta));
    if !(hi > a) {
        return Err(Error::NoRootInBracket { lo, hi });
    }
    let cubic_at = |g: f64| -> Result<DepressedCubic> {
        Ok(manifold_hamiltonian(eta, g, DeltaSign::Plus, 0.0, 0.0)?.depressed())
    };
    let root = bracketed_root(|g| Ok(cubic_at(g)?.p.re), a, hi, EP3_SEARCH_TOL)?
        .ok_or(Error::NoRootInBracket { lo, hi })?;
    let cubic = cubic_at(root)?;
    // p has a simple zero; q must vanish with it, to within the accuracy the
    // bracket width allows
    let q_tol = 1e-6 * (1.0 + cubic.shift.norm()).powi(3);
    if cubic.q.norm() > q_tol {
        return Err(Error::NoRootInBracket { lo, hi });
    }
    Ok(root)
}

/// Root of `f` on `[a, b]` by bisection down to a relative width of 1e-6,
/// then secant steps kept inside the bracket. `None` when `f` has the same
/// sign at both ends.
fn bracketed_root<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<Option<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(Some(a));
    }
    if fb == 0.0 {
        return Ok(Some(b));
    }
    if fa.signum() == fb.signum() {
        return Ok(None);
    }
    let mut use_secant = false;
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if !use_secant && b - a <= 1e-6 * (1.0 + a.abs()) {
            use_secant = true;
        }
        let width = b - a;
        let mut x = if use_secant {
            b - fb * (b - a) / (fb - fa)
        } else {
            0.5 * (a + b)
        };
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(Some(x));
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        // a one-sided secant run shrinks slowly; interleave a bisection
        if use_secant && b - a > 0.5 * width {
            let m = 0.5 * (a + b);
            let fm = f(m)?;
            if fm == 0.0 {
                return Ok(Some(m));
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
        }
    }
    Ok(Some(if fa.abs() < fb.abs() { a } else { b }))
}
