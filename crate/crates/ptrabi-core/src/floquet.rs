//! The independent verification arm: direct numerical integration of the
//! non-Hermitian two-level system in scaled time, the one-period monodromy
//! with PT-phase classification, analytic reconstruction of the quasi-exact
//! Floquet solutions from null-space coefficients, and the end-to-end
//! residual checks tying the two together.
//!
//! Everything runs in the scaled time `tau = omega t`, where the drive
//! period is always `2 pi` and the system reads
//!
//! ```text
//! da1/dtau = -i (nu(tau)/2omega) a2 + (gamma/2omega) a1
//! da2/dtau = -i (nu(tau)/2omega) a1 - (gamma/2omega) a2
//! ```
//!
//! with `nu(tau) = nu0 + nu1 cos(tau)`. The generator is traceless, so the
//! monodromy has determinant exactly 1 and its two multipliers are
//! reciprocal: either a unimodular conjugate pair (PT-symmetric phase), a
//! real reciprocal pair (PT-broken), or a coalescing pair with trace +/-2
//! (exceptional boundary).

use alloc::vec::Vec;

use core::f64::consts::PI;
use core::fmt;


// Test builds are std, where the inherent float methods win; the minimal
// no_std library build takes cos/sin/exp/sqrt/powf from the libm-backed
// trait. When a std-using crate sits anywhere in the dependency graph the
// inherent methods become visible here too and this import goes redundant,
// hence the allow.
#[cfg(not(test))]
#[allow(unused_imports)]
use num_traits::Float;

use crate::constraint::{self, DimensionlessPoint, RabiParams};
use crate::error::{Error, Result};
use crate::spectrum::QuasiExactSolution;
use crate::Complex;

/// Two-level amplitudes; the dynamics is non-unitary, so no normalization
/// invariant exists.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector {
    pub a1: Complex,
    pub a2: Complex,
}

impl StateVector {
    pub fn new(a1: Complex, a2: Complex) -> Self {
        StateVector { a1, a2 }
    }

    /// Componentwise maximum modulus.
    pub fn sup_norm(&self) -> f64 {
        self.a1.norm().max(self.a2.norm())
    }
}

/// Right-hand side of the scaled-time system.
pub fn rhs(p: &RabiParams, tau: f64, s: &StateVector) -> StateVector {
    let nu_half = (p.nu0 + p.nu1 * tau.cos()) / (2.0 * p.omega);
    let g_half = p.gamma / (2.0 * p.omega);
    StateVector {
        a1: -Complex::i() * nu_half * s.a2 + g_half * s.a1,
        a2: -Complex::i() * nu_half * s.a1 - g_half * s.a2,
    }
}

/// Inclusive bounds accepted for the integrator tolerance.
pub const TOL_RANGE: (f64, f64) = (1e-14, 1e-6);

const MAX_STEPS: u64 = 1_000_000;

type State = [Complex; 2];

fn f(p: &RabiParams, tau: f64, y: &State) -> State {
    let s = rhs(p, tau, &StateVector { a1: y[0], a2: y[1] });
    [s.a1, s.a2]
}

/// Propagates the state from `tau0` to `tau1` with an adaptive embedded
/// Runge-Kutta 5(4) pair (Dormand-Prince coefficients, first-same-as-last),
/// mixed absolute/relative error control at `tol` per step.
pub fn integrate(
    p: &RabiParams,
    s0: &StateVector,
    tau0: f64,
    tau1: f64,
    tol: f64,
) -> Result<StateVector> {
    if !(tol >= TOL_RANGE.0 && tol <= TOL_RANGE.1) {
        return Err(Error::TolOutOfRange(tol));
    }
    if !(tau0.is_finite() && tau1.is_finite()) {
        return Err(Error::InvalidParams("integration bounds must be finite".into()));
    }
    let mut y: State = [s0.a1, s0.a2];
    if tau0 == tau1 {
        return Ok(*s0);
    }
    let span = tau1 - tau0;
    let dir = if span > 0.0 { 1.0 } else { -1.0 };
    let mut tau = tau0;
    let mut h = span / 100.0;
    let mut k1 = f(p, tau, &y);
    let mut steps: u64 = 0;

    // Dormand-Prince 5(4) tableau. The seventh stage is the fifth-order
    // solution itself, so an accepted step reuses it as the next k1.
    const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A2: [f64; 1] = [1.0 / 5.0];
    const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
    const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
    const A5: [f64; 4] =
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
    const A6: [f64; 5] = [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
    ];
    const A7: [f64; 6] =
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
    // Difference between the fifth- and fourth-order weights.
    const E: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];

    fn stage(y: &State, h: f64, ks: &[&State], ws: &[f64]) -> State {
        let mut out = *y;
        for (k, w) in ks.iter().zip(ws) {
            out[0] += h * *w * k[0];
            out[1] += h * *w * k[1];
        }
        out
    }

    loop {
        if (tau1 - tau) * dir <= 0.0 {
            return Ok(StateVector { a1: y[0], a2: y[1] });
        }
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::StepBudgetExhausted { tau });
        }
        if (tau + h - tau1) * dir > 0.0 {
            h = tau1 - tau;
        }
        if h.abs() < 1e-14 * tau.abs().max(1.0) {
            return Err(Error::StepUnderflow { tau });
        }

        let k2 = f(p, tau + C[0] * h, &stage(&y, h, &[&k1], &A2));
        let k3 = f(p, tau + C[1] * h, &stage(&y, h, &[&k1, &k2], &A3));
        let k4 = f(p, tau + C[2] * h, &stage(&y, h, &[&k1, &k2, &k3], &A4));
        let k5 = f(p, tau + C[3] * h, &stage(&y, h, &[&k1, &k2, &k3, &k4], &A5));
        let k6 = f(p, tau + C[4] * h, &stage(&y, h, &[&k1, &k2, &k3, &k4, &k5], &A6));
        let y5 = stage(&y, h, &[&k1, &k2, &k3, &k4, &k5, &k6], &A7);
        let k7 = f(p, tau + h, &y5);

        let mut err_sq = 0.0f64;
        for i in 0..2 {
            let e = h
                * (E[0] * k1[i]
                    + E[2] * k3[i]
                    + E[3] * k4[i]
                    + E[4] * k5[i]
                    + E[5] * k6[i]
                    + E[6] * k7[i]);
            let scale = tol * (1.0 + y[i].norm().max(y5[i].norm()));
            let r = e.norm() / scale;
            err_sq += r * r;
        }
        let err = (err_sq / 2.0).sqrt();

        if err <= 1.0 {
            tau += h;
            y = y5;
            k1 = k7;
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            h *= fac;
        }
    }
}

/// PT-phase classification of a monodromy matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseTag {
    /// Both multipliers unimodular and distinct: bounded quasi-periodic
    /// dynamics.
    PtSymmetric,
    /// Multiplier moduli split off the unit circle: exponential growth and
    /// decay.
    PtBroken,
    /// Trace modulus within tolerance of 2: multipliers coalescing at the
    /// phase boundary.
    Exceptional,
}

impl fmt::Display for PhaseTag {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(match self {
            PhaseTag::PtSymmetric => "PT-symmetric",
            PhaseTag::PtBroken => "PT-broken",
            PhaseTag::Exceptional => "exceptional",
        })
    }
}

/// One-period propagator and derived data.
#[derive(Clone, Copy, Debug)]
pub struct MonodromyResult {
    /// Row-major 2x2 propagator over `tau` in `[0, 2 pi]`.
    pub matrix: [[Complex; 2]; 2],
    pub multipliers: (Complex, Complex),
    /// `|det - 1|`; the generator is traceless so this is pure integration
    /// error.
    pub det_deviation: f64,
    pub phase: PhaseTag,
}

impl MonodromyResult {
    pub fn trace(&self) -> Complex {
        self.matrix[0][0] + self.matrix[1][1]
    }
}

/// Tolerance on `||trace| - 2|` below which a monodromy is classified as
/// exceptional, and on the multiplier-moduli split separating the broken
/// from the symmetric phase.
pub const PHASE_TOL: f64 = 1e-6;

/// Integrates the two basis states over one period and classifies the
/// phase. Exceptional wins over the other two tags because the trace is the
/// well-conditioned observable where eigenvectors coalesce.
pub fn monodromy(p: &RabiParams, tol: f64) -> Result<MonodromyResult> {
    let one = Complex::new(1.0, 0.0);
    let zero = Complex::new(0.0, 0.0);
    let col1 = integrate(p, &StateVector { a1: one, a2: zero }, 0.0, 2.0 * PI, tol)?;
    let col2 = integrate(p, &StateVector { a1: zero, a2: one }, 0.0, 2.0 * PI, tol)?;
    let matrix = [[col1.a1, col2.a1], [col1.a2, col2.a2]];
    let tr = matrix[0][0] + matrix[1][1];
    let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
    let sq = (tr * tr - 4.0 * det).sqrt();
    let multipliers = ((tr + sq) / 2.0, (tr - sq) / 2.0);
    let det_deviation = (det - one).norm();
    let phase = if (tr.norm() - 2.0).abs() <= PHASE_TOL {
        PhaseTag::Exceptional
    } else if (multipliers.0.norm() - multipliers.1.norm()).abs() > PHASE_TOL {
        PhaseTag::PtBroken
    } else {
        PhaseTag::PtSymmetric
    };
    Ok(MonodromyResult { matrix, multipliers, det_deviation, phase })
}

/// A quasi-exact Floquet solution in closed form. With the resonance index
/// `n` and polynomial coefficients `c_0..c_n`, the first combination is
///
/// ```text
/// c1(tau) = exp((nu1/2omega) cos tau) * exp(-i (n+1) tau / 2) * phi(e^{i tau})
/// ```
///
/// with `phi(z) = sum c_m z^m`, and the second follows from the first-order
/// system as `c2 = (2omega/gamma) c1' + i (nu/gamma) c1`. The amplitudes are
/// `a1 = c1 + c2`, `a2 = c1 - c2`. Advancing `tau` by one period multiplies
/// the whole state by `(-1)^(n+1)`.
#[derive(Clone, Debug)]
pub struct AnalyticSolution {
    pub n: u32,
    pub params: RabiParams,
    pub coeffs: Vec<Complex>,
}

impl AnalyticSolution {
    /// `phi`, `phi'`, `phi''` at `z` by Horner's rule.
    fn phi_derivs(&self, z: Complex) -> (Complex, Complex, Complex) {
        let mut phi = Complex::new(0.0, 0.0);
        let mut dphi = Complex::new(0.0, 0.0);
        let mut ddphi = Complex::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            ddphi = ddphi * z + 2.0 * dphi;
            dphi = dphi * z + phi;
            phi = phi * z + c;
        }
        (phi, dphi, ddphi)
    }

    /// `c1`, `c1'`, `c1''` at `tau`, by the product rule on the three
    /// explicit factors (never through the equation of motion, which would
    /// make the residual check circular).
    fn c1_chain(&self, tau: f64) -> (Complex, Complex, Complex) {
        let p = &self.params;
        let half_drive = p.nu1 / (2.0 * p.omega);
        let np1_half = (self.n as f64 + 1.0) / 2.0;
        let z = Complex::from_polar(1.0, tau);
        let w = Complex::from_polar((half_drive * tau.cos()).exp(), -np1_half * tau);
        // Logarithmic derivative of the prefactor and its own derivative.
        let ell = Complex::new(-half_drive * tau.sin(), -np1_half);
        let ell_prime = Complex::new(-half_drive * tau.cos(), 0.0);
        let (phi, dphi, ddphi) = self.phi_derivs(z);
        let iz = Complex::i() * z;
        let c1 = w * phi;
        let c1p = w * (ell * phi + iz * dphi);
        let c1pp = w
            * ((ell * ell + ell_prime) * phi + (2.0 * ell * iz - z) * dphi
                - z * z * ddphi);
        (c1, c1p, c1pp)
    }

    fn c2_of(&self, tau: f64, c1: Complex, c1p: Complex) -> Complex {
        let p = &self.params;
        let nu = p.nu0 + p.nu1 * tau.cos();
        (2.0 * p.omega / p.gamma) * c1p + Complex::i() * (nu / p.gamma) * c1
    }

    /// State at scaled time `tau`.
    pub fn at(&self, tau: f64) -> StateVector {
        let (c1, c1p, _) = self.c1_chain(tau);
        let c2 = self.c2_of(tau, c1, c1p);
        StateVector { a1: c1 + c2, a2: c1 - c2 }
    }

    /// Time derivative of [`Self::at`], again by the product rule only.
    pub fn derivative_at(&self, tau: f64) -> StateVector {
        let p = &self.params;
        let (c1, c1p, c1pp) = self.c1_chain(tau);
        let nu = p.nu0 + p.nu1 * tau.cos();
        let nu_prime = -p.nu1 * tau.sin();
        let c2p = (2.0 * p.omega / p.gamma) * c1pp
            + (Complex::i() / p.gamma) * (nu_prime * c1 + nu * c1p);
        StateVector { a1: c1p + c2p, a2: c1p - c2p }
    }

    /// The exact Floquet multiplier of this solution, `(-1)^(n+1)`.
    pub fn multiplier(&self) -> f64 {
        if self.n % 2 == 0 {
            -1.0
        } else {
            1.0
        }
    }
}

/// Builds the closed-form evaluator from null-space coefficients. Requires
/// `gamma > 0` (the second component is recovered through a division by
/// `gamma`) and parameters consistent with the solved point.
pub fn analytic_solution(sol: &QuasiExactSolution, p: &RabiParams) -> Result<AnalyticSolution> {
    if p.gamma == 0.0 {
        return Err(Error::GammaZero);
    }
    p.check_resonance(sol.n)?;
    let point = p.point_of();
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0);
    if !close(point.x, sol.point.x) || !close(point.g, sol.point.g) {
        return Err(Error::InvalidParams(alloc::format!(
            "parameters map to (x, g) = ({}, {}) but the solution was solved at ({}, {})",
            point.x,
            point.g,
            sol.point.x,
            sol.point.g
        )));
    }
    Ok(AnalyticSolution { n: sol.n, params: *p, coeffs: sol.coeffs.clone() })
}

/// Outcome of the end-to-end verification of one quasi-exact solution.
#[derive(Clone, Copy, Debug)]
pub struct VerificationReport {
    /// Max over a 1000-point period grid of the componentwise magnitude of
    /// `d/dtau at(tau) - rhs(tau, at(tau))`, divided by the peak amplitude
    /// over the same grid.
    pub max_residual: f64,
    /// Sup-norm distance between the numerically propagated state after one
    /// period and `(-1)^(n+1)` times the initial state, relative to the
    /// initial sup-norm.
    pub multiplier_error: f64,
    pub monodromy_trace: Complex,
    pub phase: PhaseTag,
}

/// Number of grid points used for residual scans.
const RESIDUAL_GRID: usize = 1000;

/// Checks a quasi-exact solution against the actual dynamics three ways:
/// pointwise ODE residual of the closed form, numerical propagation against
/// the exact multiplier `(-1)^(n+1)`, and the monodromy trace.
pub fn verify_quasi_exact(
    sol: &QuasiExactSolution,
    p: &RabiParams,
    tol: f64,
) -> Result<VerificationReport> {
    let analytic = analytic_solution(sol, p)?;
    let mut worst = 0.0f64;
    let mut peak = 0.0f64;
    for k in 0..RESIDUAL_GRID {
        let tau = 2.0 * PI * k as f64 / (RESIDUAL_GRID as f64 - 1.0);
        let s = analytic.at(tau);
        let ds = analytic.derivative_at(tau);
        let want = rhs(p, tau, &s);
        worst = worst.max((ds.a1 - want.a1).norm()).max((ds.a2 - want.a2).norm());
        peak = peak.max(s.sup_norm());
    }
    if peak == 0.0 {
        return Err(Error::Precondition("analytic solution vanishes identically".into()));
    }
    let s0 = analytic.at(0.0);
    let propagated = integrate(p, &s0, 0.0, 2.0 * PI, tol)?;
    let mu = analytic.multiplier();
    let diff = StateVector {
        a1: propagated.a1 - mu * s0.a1,
        a2: propagated.a2 - mu * s0.a2,
    };
    let mono = monodromy(p, tol)?;
    Ok(VerificationReport {
        max_residual: worst / peak,
        multiplier_error: diff.sup_norm() / s0.sup_norm(),
        monodromy_trace: mono.trace(),
        phase: mono.phase,
    })
}

/// Phase tags at an on-variety point and at relatively shifted gain/loss
/// values `g (1 -/+ epsilon)` with the drive coordinate held fixed.
#[derive(Clone, Copy, Debug)]
pub struct ExceptionalProbe {
    pub phase_at: PhaseTag,
    pub phase_below: PhaseTag,
    pub phase_above: PhaseTag,
}

/// Classifies the phase at a constraint-variety point and just off it on
/// both sides. The tags on the two sides are empirical: the pattern
/// (one symmetric, one broken) holds at generic points but is recorded, not
/// asserted.
pub fn exceptional_point_probe(
    n: u32,
    point: &DimensionlessPoint,
    omega: f64,
    epsilon: f64,
) -> Result<ExceptionalProbe> {
    let point = DimensionlessPoint::new(point.x, point.g)?;
    let value = constraint::constraint_polynomial(n).eval(point.x, point.g);
    if value.abs() > 1e-6 {
        return Err(Error::OffVariety { residual: value });
    }
    if !(epsilon > 0.0 && epsilon <= 1e-2 * point.g.max(1.0)) {
        return Err(Error::Precondition(alloc::format!(
            "epsilon must lie in (0, 0.01 * max(1, g)], got {epsilon}"
        )));
    }
    let tol = 1e-12;
    let classify = |g: f64| -> Result<PhaseTag> {
        let shifted = DimensionlessPoint::new(point.x, g)?;
        let params = constraint::params_from_point(n, &shifted, omega)?;
        Ok(monodromy(&params, tol)?.phase)
    };
    Ok(ExceptionalProbe {
        phase_at: classify(point.g)?,
        phase_below: classify(point.g * (1.0 - epsilon))?,
        phase_above: classify(point.g * (1.0 + epsilon))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn rhs_limiting_cases() {
        // Constant Hermitian coupling.
        let p = RabiParams::new(2.0, 0.0, 0.0, 1.0).unwrap();
        let d = rhs(&p, 0.3, &StateVector { a1: c(1.0, 0.0), a2: c(0.0, 0.0) });
        assert_eq!(d.a1, c(0.0, 0.0));
        assert_eq!(d.a2, c(0.0, -1.0));

        // Pure gain/loss.
        let p = RabiParams::new(0.0, 0.0, 3.0, 1.0).unwrap();
        let d = rhs(&p, 1.0, &StateVector { a1: c(1.0, 0.0), a2: c(1.0, 0.0) });
        assert_eq!(d.a1, c(1.5, 0.0));
        assert_eq!(d.a2, c(-1.5, 0.0));
    }

    #[test]
    fn generator_is_traceless() {
        // The a1 coefficient of da1 and the a2 coefficient of da2 cancel.
        let p = RabiParams::new(2.7, 1.3, 0.9, 1.1).unwrap();
        for tau in [0.0, 0.4, 2.0, 5.9] {
            let e1 = rhs(&p, tau, &StateVector { a1: c(1.0, 0.0), a2: c(0.0, 0.0) });
            let e2 = rhs(&p, tau, &StateVector { a1: c(0.0, 0.0), a2: c(1.0, 0.0) });
            assert!((e1.a1 + e2.a2).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_field_integration_is_exact() {
        let p = RabiParams::new(0.0, 0.0, 0.0, 1.0).unwrap();
        let s0 = StateVector { a1: c(0.3, -0.2), a2: c(0.7, 0.1) };
        let s1 = integrate(&p, &s0, 0.0, 2.0 * PI, 1e-12).unwrap();
        assert_eq!(s0, s1);
    }

    #[test]
    fn constant_coupling_rotates_by_pi_over_one_period() {
        // nu0 = omega, gamma = nu1 = 0: exact solution is a Rabi rotation
        // with angle nu0 tau / (2 omega) = pi after one period.
        let p = RabiParams::new(1.0, 0.0, 0.0, 1.0).unwrap();
        let s0 = StateVector { a1: c(1.0, 0.0), a2: c(0.0, 0.0) };
        let s1 = integrate(&p, &s0, 0.0, 2.0 * PI, 1e-12).unwrap();
        assert!((s1.a1 - c(-1.0, 0.0)).norm() < 1e-9, "{s1:?}");
        assert!(s1.a2.norm() < 1e-9, "{s1:?}");
    }

    #[test]
    fn tolerance_bounds_are_enforced() {
        let p = RabiParams::new(1.0, 0.0, 0.0, 1.0).unwrap();
        let s0 = StateVector { a1: c(1.0, 0.0), a2: c(0.0, 0.0) };
        assert!(matches!(
            integrate(&p, &s0, 0.0, 1.0, 1e-15),
            Err(Error::TolOutOfRange(_))
        ));
        assert!(matches!(
            integrate(&p, &s0, 0.0, 1.0, 1e-5),
            Err(Error::TolOutOfRange(_))
        ));
    }

    #[test]
    fn integration_backwards_inverts_forwards() {
        let p = RabiParams::new(2.0, 1.0, 0.5, 1.0).unwrap();
        let s0 = StateVector { a1: c(0.8, 0.1), a2: c(-0.3, 0.4) };
        let fwd = integrate(&p, &s0, 0.0, 3.0, 1e-12).unwrap();
        let back = integrate(&p, &fwd, 3.0, 0.0, 1e-12).unwrap();
        assert!((back.a1 - s0.a1).norm() < 1e-9);
        assert!((back.a2 - s0.a2).norm() < 1e-9);
    }

    #[test]
    fn trivial_monodromy_is_exceptional_identity() {
        let p = RabiParams::new(0.0, 0.0, 0.0, 1.0).unwrap();
        let m = monodromy(&p, 1e-12).unwrap();
        assert!((m.matrix[0][0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((m.matrix[1][1] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(m.matrix[0][1].norm() < 1e-12);
        assert!(m.matrix[1][0].norm() < 1e-12);
        assert_eq!(m.phase, PhaseTag::Exceptional);
        assert!(m.det_deviation < 1e-12);
    }

    #[test]
    fn hermitian_limit_has_unimodular_multipliers() {
        let p = RabiParams::new(1.3, 0.8, 0.0, 1.0).unwrap();
        let m = monodromy(&p, 1e-12).unwrap();
        assert!((m.multipliers.0.norm() - 1.0).abs() < 1e-8);
        assert!((m.multipliers.1.norm() - 1.0).abs() < 1e-8);
        assert!(m.phase != PhaseTag::PtBroken);
    }

    #[test]
    fn monodromy_determinant_is_one_off_resonance() {
        let p = RabiParams::new(0.923, 2.17, 1.31, 0.77).unwrap();
        let m = monodromy(&p, 1e-12).unwrap();
        assert!(m.det_deviation < 1e-8, "{}", m.det_deviation);
        let prod = m.multipliers.0 * m.multipliers.1;
        assert!((prod - c(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn analytic_solution_requires_gain_loss() {
        let point = DimensionlessPoint::new(0.0, 0.0).unwrap();
        let sol = spectrum::null_space_coefficients(0, &point, 1.0).unwrap();
        let p = RabiParams::new(1.0, 0.0, 0.0, 1.0).unwrap();
        assert!(matches!(analytic_solution(&sol, &p), Err(Error::GammaZero)));
    }

    #[test]
    fn analytic_solution_rejects_mismatched_parameters() {
        let point = DimensionlessPoint::new(4.0, 4.0).unwrap();
        let sol = spectrum::null_space_coefficients(0, &point, 1.0).unwrap();
        let p = RabiParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(analytic_solution(&sol, &p).is_err());
    }

    #[test]
    fn smallest_block_solution_matches_hand_formula() {
        // n=0 at x = g = 1, omega = 1: c1 = e^{cos(tau)/2} e^{-i tau/2} and
        // c2 = i e^{i tau} c1, so a1 = c1 (1 + i z), a2 = c1 (1 - i z).
        let point = DimensionlessPoint::new(1.0, 1.0).unwrap();
        let sol = spectrum::null_space_coefficients(0, &point, 1.0).unwrap();
        let p = constraint::params_from_point(0, &point, 1.0).unwrap();
        let a = analytic_solution(&sol, &p).unwrap();
        for tau in [0.0f64, 0.7, 2.1, 4.4, 6.2] {
            let c1 = Complex::from_polar((0.5 * tau.cos()).exp(), -tau / 2.0);
            let iz = Complex::i() * Complex::from_polar(1.0, tau);
            let s = a.at(tau);
            assert!((s.a1 - c1 * (Complex::new(1.0, 0.0) + iz)).norm() < 1e-12, "tau = {tau}");
            assert!((s.a2 - c1 * (Complex::new(1.0, 0.0) - iz)).norm() < 1e-12, "tau = {tau}");
        }
    }

    #[test]
    fn periodicity_carries_the_alternating_multiplier() {
        for (n, x, g) in [(0u32, 2.0, 2.0), (1u32, 8.0, 4.0)] {
            let point = DimensionlessPoint::new(x, g).unwrap();
            let sol = spectrum::null_space_coefficients(n, &point, 1.0).unwrap();
            let p = constraint::params_from_point(n, &point, 1.0).unwrap();
            let a = analytic_solution(&sol, &p).unwrap();
            let mu = a.multiplier();
            for tau in [0.0, 1.0, 3.5] {
                let s = a.at(tau);
                let shifted = a.at(tau + 2.0 * PI);
                let scale = s.sup_norm();
                assert!((shifted.a1 - mu * s.a1).norm() < 1e-10 * scale);
                assert!((shifted.a2 - mu * s.a2).norm() < 1e-10 * scale);
            }
        }
    }

    #[test]
    fn product_rule_derivative_matches_finite_differences() {
        let point = DimensionlessPoint::new(8.0, 4.0).unwrap();
        let sol = spectrum::null_space_coefficients(1, &point, 1.0).unwrap();
        let p = constraint::params_from_point(1, &point, 1.0).unwrap();
        let a = analytic_solution(&sol, &p).unwrap();
        let h = 1e-6;
        for tau in [0.2, 1.9, 4.8] {
            let d = a.derivative_at(tau);
            let plus = a.at(tau + h);
            let minus = a.at(tau - h);
            let fd1 = (plus.a1 - minus.a1) / (2.0 * h);
            let fd2 = (plus.a2 - minus.a2) / (2.0 * h);
            let scale = d.sup_norm().max(1.0);
            assert!((d.a1 - fd1).norm() < 1e-6 * scale, "tau = {tau}");
            assert!((d.a2 - fd2).norm() < 1e-6 * scale, "tau = {tau}");
        }
    }

    #[test]
    fn golden_point_verifies_end_to_end() {
        // n=1 branch point x = 8 at g = 4.
        let point = DimensionlessPoint::new(8.0, 4.0).unwrap();
        let sol = spectrum::null_space_coefficients(1, &point, 1.0).unwrap();
        let p = constraint::params_from_point(1, &point, 1.0).unwrap();
        let report = verify_quasi_exact(&sol, &p, 1e-12).unwrap();
        assert!(report.max_residual < 1e-9, "residual {}", report.max_residual);
        assert!(report.multiplier_error < 1e-7, "multiplier {}", report.multiplier_error);
        // n odd: multiplier +1, trace near +2.
        assert!((report.monodromy_trace - c(2.0, 0.0)).norm() < 1e-6);
        assert_eq!(report.phase, PhaseTag::Exceptional);
    }

    #[test]
    fn probe_tags_the_variety_point_exceptional() {
        let point = DimensionlessPoint::new(8.0, 4.0).unwrap();
        let probe = exceptional_point_probe(1, &point, 1.0, 1e-3).unwrap();
        assert_eq!(probe.phase_at, PhaseTag::Exceptional);
        // The side tags are regression observations, not theorems; they
        // must at least be definite classifications.
        let _ = (probe.phase_below, probe.phase_above);
    }

    #[test]
    fn probe_rejects_off_variety_points() {
        let point = DimensionlessPoint::new(5.0, 4.0).unwrap();
        assert!(matches!(
            exceptional_point_probe(1, &point, 1.0, 1e-3),
            Err(Error::OffVariety { .. })
        ));
        let on = DimensionlessPoint::new(8.0, 4.0).unwrap();
        assert!(exceptional_point_probe(1, &on, 1.0, 0.5).is_err());
    }
}
