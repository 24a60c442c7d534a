//! The finite block of the driven two-level problem and its determinant
//! constraint.
//!
//! When the static part of the drive satisfies the resonance condition
//! `nu0 = (n+1)*omega`, the operator restricted to polynomials of degree at
//! most `n` is the tridiagonal matrix
//!
//! ```text
//! M(i,j) = ((j-n-1)j + (gamma^2 - nu1^2)/(4 omega^2)) delta_{i,j}
//!          - (nu1/2omega) ((n-j) delta_{i,j+1} + j delta_{i,j-1})
//! ```
//!
//! A nontrivial null vector exists exactly when `det M = 0`, and because the
//! paired off-diagonal entries enter the determinant only through their
//! product, the condition is a polynomial in the dimensionless combinations
//! `X = nu1^2/omega^2` and `G = gamma^2/omega^2`. This module builds the
//! matrix (numerically and in exact rational form) and the constraint
//! polynomial, with an independent brute-force determinant as an oracle.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, ToPrimitive};

// Test builds are std, where the inherent float methods win; the minimal
// no_std library build takes sqrt/round from the libm-backed trait. When a
// std-using crate sits anywhere in the dependency graph the inherent
// methods become visible here too and this import goes redundant, hence
// the allow.
#[cfg(not(test))]
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{rational, BivariatePolynomial, Rational};
use crate::sl2::{QesCoefficients, RationalMatrix};

/// Absolute tolerance on `nu0/omega - (n+1)` when the quasi-exact machinery
/// is invoked.
pub const RESONANCE_TOL: f64 = 1e-9;

/// Physical parameter set of the driven two-level system: level splitting
/// `nu0`, drive amplitude `nu1 >= 0`, gain/loss rate `gamma >= 0`, and drive
/// frequency `omega > 0`. The drive is `nu(t) = nu0 + nu1 cos(omega t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiParams {
    pub nu0: f64,
    pub nu1: f64,
    pub gamma: f64,
    pub omega: f64,
}

impl RabiParams {
    pub fn new(nu0: f64, nu1: f64, gamma: f64, omega: f64) -> Result<Self> {
        if !(nu0.is_finite() && nu1.is_finite() && gamma.is_finite() && omega.is_finite()) {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if omega <= 0.0 {
            return Err(Error::InvalidParams("omega must be positive".into()));
        }
        if nu1 < 0.0 {
            return Err(Error::InvalidParams(
                "nu1 must be nonnegative (its sign can be absorbed by a basis change)".into(),
            ));
        }
        if gamma < 0.0 {
            return Err(Error::InvalidParams(
                "gamma must be nonnegative (its sign can be absorbed by a basis change)".into(),
            ));
        }
        Ok(RabiParams { nu0, nu1, gamma, omega })
    }

    /// The integer `n >= 0` with `nu0 = (n+1)*omega`, if the resonance
    /// condition holds within [`RESONANCE_TOL`].
    pub fn resonance_index(&self) -> Result<u32> {
        let ratio = self.nu0 / self.omega;
        let rounded = ratio.round();
        if rounded < 1.0 || (ratio - rounded).abs() > RESONANCE_TOL {
            return Err(Error::ResonanceViolated {
                nu0_over_omega: ratio,
                expected: if rounded < 1.0 { 1 } else { rounded as u32 },
            });
        }
        Ok(rounded as u32 - 1)
    }

    /// Checks `nu0 = (n+1)*omega` for a specific `n`.
    pub fn check_resonance(&self, n: u32) -> Result<()> {
        let ratio = self.nu0 / self.omega;
        if (ratio - (n as f64 + 1.0)).abs() > RESONANCE_TOL {
            return Err(Error::ResonanceViolated { nu0_over_omega: ratio, expected: n + 1 });
        }
        Ok(())
    }

    /// The dimensionless coordinates `X = (nu1/omega)^2`, `G = (gamma/omega)^2`.
    pub fn point_of(&self) -> DimensionlessPoint {
        let rx = self.nu1 / self.omega;
        let rg = self.gamma / self.omega;
        DimensionlessPoint { x: rx * rx, g: rg * rg }
    }
}

/// A point in the dimensionless parameter plane: `x = nu1^2/omega^2`,
/// `g = gamma^2/omega^2`. Both are squares of reals, hence nonnegative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimensionlessPoint {
    pub x: f64,
    pub g: f64,
}

impl DimensionlessPoint {
    pub fn new(x: f64, g: f64) -> Result<Self> {
        if !(x.is_finite() && g.is_finite()) {
            return Err(Error::InvalidParams("point coordinates must be finite".into()));
        }
        if x < 0.0 || g < 0.0 {
            return Err(Error::NegativePoint { x, g });
        }
        Ok(DimensionlessPoint { x, g })
    }
}

/// Physical parameters at a dimensionless point, on resonance for the given
/// `n`: `nu0 = (n+1)omega`, `nu1 = omega sqrt(x)`, `gamma = omega sqrt(g)`.
pub fn params_from_point(n: u32, point: &DimensionlessPoint, omega: f64) -> Result<RabiParams> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidParams("omega must be positive and finite".into()));
    }
    let point = DimensionlessPoint::new(point.x, point.g)?;
    RabiParams::new(
        (n as f64 + 1.0) * omega,
        omega * point.x.sqrt(),
        omega * point.g.sqrt(),
        omega,
    )
}

/// The `(n+1) x (n+1)` real tridiagonal block, row-major. Rejects parameter
/// sets that violate the resonance condition `nu0 = (n+1)*omega`, since the
/// finite block exists only on resonance.
pub fn htilde_matrix(n: u32, p: &RabiParams) -> Result<Vec<f64>> {
    p.check_resonance(n)?;
    let rx = p.nu1 / p.omega;
    let rg = p.gamma / p.omega;
    let shift = (rg * rg - rx * rx) / 4.0;
    let t = p.nu1 / (2.0 * p.omega);
    Ok(htilde_raw(n, t, shift))
}

/// The same block parameterized directly by the dimensionless point, where
/// the resonance condition holds by construction.
pub fn htilde_from_point(n: u32, point: &DimensionlessPoint) -> Vec<f64> {
    htilde_raw(n, point.x.sqrt() / 2.0, (point.g - point.x) / 4.0)
}

fn htilde_raw(n: u32, t: f64, shift: f64) -> Vec<f64> {
    let dim = n as usize + 1;
    let mut m = alloc::vec![0.0f64; dim * dim];
    for j in 0..dim {
        let ji = j as i64;
        m[j * dim + j] = ((ji - n as i64 - 1) * ji) as f64 + shift;
        if j + 1 < dim {
            m[(j + 1) * dim + j] = -t * (n as i64 - ji) as f64;
        }
        if j >= 1 {
            m[(j - 1) * dim + j] = -t * ji as f64;
        }
    }
    m
}

/// Exact-rational form of the block, for cross-validation against the
/// operator-algebra assembly: `t = nu1/(2 omega)` and
/// `shift = (gamma^2 - nu1^2)/(4 omega^2)` supplied as rationals.
pub fn htilde_rational(n: u32, t: &Rational, shift: &Rational) -> RationalMatrix {
    let dim = n as usize + 1;
    let mut m = RationalMatrix::zeros(dim);
    for j in 0..dim {
        let ji = j as i64;
        *m.get_mut(j, j) = rational((ji - n as i64 - 1) * ji, 1) + shift.clone();
        if j + 1 < dim {
            *m.get_mut(j + 1, j) = -t.clone() * rational(n as i64 - ji, 1);
        }
        if j >= 1 {
            *m.get_mut(j - 1, j) = -t.clone() * rational(ji, 1);
        }
    }
    m
}

/// The coefficient set whose quadratic-element assembly reproduces the
/// tridiagonal block: the `J+J-` product with weight one, linear terms
/// `t (J+ - J-)`, and the constant diagonal shift.
pub fn drive_qes_coefficients(t: &Rational, shift: &Rational) -> QesCoefficients {
    QesCoefficients {
        c_plus_minus: Rational::one(),
        c_plus: t.clone(),
        c_minus: -t.clone(),
        c_const: shift.clone(),
        ..Default::default()
    }
}

/// `det` of the dimensionless block at a point, by LU with partial pivoting
/// on the dense f64 matrix. Used as a floating-point consistency oracle for
/// the exact constraint polynomial; note this path goes through `sqrt(x)`
/// off-diagonal entries rather than the `X`-product shortcut.
pub fn htilde_determinant(n: u32, point: &DimensionlessPoint) -> f64 {
    linalg::lu_determinant(n as usize + 1, htilde_from_point(n, point))
}

/// The exact constraint polynomial in `(X, G)`: the primitive-normalized
/// determinant of the tridiagonal block. Integer coefficients with overall
/// gcd 1, and the coefficient of the highest pure-`X` power is +1.
pub fn constraint_polynomial(n: u32) -> BivariatePolynomial {
    constraint_polynomial_with_scale(n).0
}

/// As [`constraint_polynomial`], also returning the rational factor `s` such
/// that `normalized = s * det`. The raw determinant carries a denominator
/// `4^(n+1)` and a sign that depends on `n`; `s` records both.
pub fn constraint_polynomial_with_scale(n: u32) -> (BivariatePolynomial, Rational) {
    // Leading principal minors of a tridiagonal matrix satisfy the
    // three-term recurrence D_k = d_k D_{k-1} - s_k D_{k-2}, where d_k is the
    // k-th diagonal entry and s_k the product of the adjacent off-diagonal
    // pair. Here d_k = ((k-1)-n-1)(k-1) + (G-X)/4 and
    // s_k = (X/4)(k-1)(n-k+2).
    let x = BivariatePolynomial::var_x();
    let g = BivariatePolynomial::var_g();
    let quarter = rational(1, 4);
    let gx_over_4 = (&g - &x).scale(&quarter);

    let mut d_prev_prev = BivariatePolynomial::zero(); // D_{-1}
    let mut d_prev = BivariatePolynomial::constant(Rational::one()); // D_0
    for k in 1..=(n as i64 + 1) {
        let km1 = k - 1;
        let diag_const = (km1 - n as i64 - 1) * km1;
        let d_k = &BivariatePolynomial::constant(rational(diag_const, 1)) + &gx_over_4;
        let s_k = BivariatePolynomial::monomial(1, 0, rational(km1 * (n as i64 - k + 2), 4));
        let next = &(&d_k * &d_prev) - &(&s_k * &d_prev_prev);
        d_prev_prev = d_prev;
        d_prev = next;
    }
    d_prev
        .primitive_normalize()
        .expect("tridiagonal determinant has a nonzero leading term")
}

/// Maximum block size accepted by [`brute_force_determinant`]; Laplace
/// expansion is exponential and exists only as an oracle.
pub const BRUTE_FORCE_MAX_N: u32 = 8;

/// Independent oracle for [`constraint_polynomial`]: expand the symbolic
/// determinant by Laplace cofactors over exact polynomials in `(T, G)` with
/// `T = nu1/(2 omega)` kept as a formal variable (no pairing shortcut), then
/// substitute `T^2 = X/4` and primitive-normalize. Must agree with the
/// recurrence exactly.
pub fn brute_force_determinant(n: u32) -> Result<BivariatePolynomial> {
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::BruteForceTooLarge { n, max: BRUTE_FORCE_MAX_N });
    }
    let dim = n as usize + 1;
    // Symbolic matrix over (T, G): diagonal (j-n-1)j + G/4 - T^2,
    // subdiagonal -(n-j) T, superdiagonal -j T.
    let mut m: Vec<Vec<BivariatePolynomial>> =
        alloc::vec![alloc::vec![BivariatePolynomial::zero(); dim]; dim];
    for j in 0..dim {
        let ji = j as i64;
        let mut diag = BivariatePolynomial::constant(rational((ji - n as i64 - 1) * ji, 1));
        diag = &diag + &BivariatePolynomial::monomial(0, 1, rational(1, 4));
        diag = &diag + &BivariatePolynomial::monomial(2, 0, rational(-1, 1));
        m[j][j] = diag;
        if j + 1 < dim {
            m[j + 1][j] = BivariatePolynomial::monomial(1, 0, rational(-(n as i64 - ji), 1));
        }
        if j >= 1 {
            m[j - 1][j] = BivariatePolynomial::monomial(1, 0, rational(-ji, 1));
        }
    }
    let full_mask: u16 = ((1u32 << dim) - 1) as u16;
    let mut memo: BTreeMap<(usize, u16), BivariatePolynomial> = BTreeMap::new();
    let det_tg = laplace(&m, 0, full_mask, &mut memo);

    // Substitute T^2 = X/4. Only even powers of T can survive in a
    // determinant of this tridiagonal structure; anything else would be a
    // bug in the expansion.
    let det = BivariatePolynomial::from_terms(det_tg.canonical_terms().into_iter().map(
        |(i, j, c)| {
            assert!(i % 2 == 0, "odd power of the off-diagonal variable survived");
            (i / 2, j, c.clone() * rational(1, 4).pow((i / 2) as i32))
        },
    ));
    Ok(det.primitive_normalize()?.0)
}

fn laplace(
    m: &[Vec<BivariatePolynomial>],
    row: usize,
    mask: u16,
    memo: &mut BTreeMap<(usize, u16), BivariatePolynomial>,
) -> BivariatePolynomial {
    if mask == 0 {
        return BivariatePolynomial::constant(Rational::one());
    }
    if let Some(hit) = memo.get(&(row, mask)) {
        return hit.clone();
    }
    let dim = m.len();
    let mut det = BivariatePolynomial::zero();
    let mut sign = Rational::one();
    for col in 0..dim {
        if mask & (1 << col) == 0 {
            continue;
        }
        let entry = &m[row][col];
        if !entry.is_zero() {
            let minor = laplace(m, row + 1, mask & !(1 << col), memo);
            det = &det + &(entry * &minor).scale(&sign);
        }
        sign = -sign;
    }
    memo.insert((row, mask), det.clone());
    det
}

/// Numeric consistency helper: `|normalized(x, g) - s * det_lu(x, g)|`
/// scaled by the magnitude of the larger side, where `s` is the recorded
/// normalization factor. Small for every `(x, g)`.
pub fn normalized_vs_numeric_gap(n: u32, point: &DimensionlessPoint) -> f64 {
    let (poly, scale) = constraint_polynomial_with_scale(n);
    let lhs = poly.eval(point.x, point.g);
    let rhs = scale.to_f64().unwrap_or(f64::NAN) * htilde_determinant(n, point);
    let denom = lhs.abs().max(rhs.abs()).max(1.0);
    (lhs - rhs).abs() / denom
}
