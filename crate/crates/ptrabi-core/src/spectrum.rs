//! Solving on the constraint variety: real roots along coordinate slices,
//! the degeneracy structure at zero drive amplitude, null-space coefficient
//! extraction, branch-tagged curve tracing for plot data, and the doublet
//! splitting measure.
//!
//! Root finding has two deliberately independent paths. The reference path
//! isolates roots with exact Sturm-sequence bisection on rational slices, so
//! it resolves doublets far closer than f64 spacing (splittings below 1e-20
//! occur already at n = 20). The fast path takes balanced companion-matrix
//! eigenvalues and polishes them with exact-arithmetic Newton steps; tests
//! hold the two paths to 1e-9 agreement on generic slices.

use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::constraint::{self, DimensionlessPoint};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{rational, BivariatePolynomial, Rational};
use crate::univariate::{self, IntPoly, IsolatedRoot};
use crate::Complex;

/// Root-isolation strategy for slice solving.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RootMethod {
    /// Exact Sturm bisection on the rational slice; the reference path.
    #[default]
    SturmExact,
    /// Balanced companion-matrix eigenvalues with exact Newton polish; the
    /// fast floating-point path.
    CompanionEigen,
}

/// A nontrivial null vector of the finite block, together with the point it
/// was solved at and the achieved residual.
#[derive(Clone, Debug)]
pub struct QuasiExactSolution {
    pub n: u32,
    pub point: DimensionlessPoint,
    pub omega: f64,
    /// Polynomial coefficients `c_0..c_n`; the first coefficient of modulus
    /// above 1e-10 is normalized to exactly 1.
    pub coeffs: Vec<Complex>,
    /// `||M c||_2 / ||c||_2`, recomputed after normalization; at most 1e-8.
    pub residual_norm: f64,
}

/// One degenerate level pairing at zero drive amplitude.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyEntry {
    pub j: u32,
    pub j_prime: u32,
    /// Exact `G = 4 j (n+1-j)`.
    pub g_value: Rational,
    /// 2 when `j != j_prime` (a true doublet), 1 for the self-paired level.
    pub multiplicity: u8,
}

/// All nontrivial degenerate gain/loss values for a given `n`, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyReport {
    pub n: u32,
    pub entries: Vec<DegeneracyEntry>,
}

/// One traced point of a constraint curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub g: f64,
    pub x: f64,
    pub branch: u32,
}

fn slice_coordinate(name: &str, value: f64) -> Result<Rational> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::Precondition(alloc::format!(
            "slice coordinate {name} must be finite and nonnegative, got {value}"
        )));
    }
    Ok(Rational::from_float(value).expect("finite f64 converts to a rational"))
}

/// All real roots `x >= 0` of the constraint polynomial at fixed `g`,
/// ascending. Roots below -1e-12 are nonphysical and discarded; tiny
/// negative roundoff is clamped to 0.
pub fn roots_in_x(n: u32, g: f64) -> Result<Vec<f64>> {
    roots_in_x_with(n, g, RootMethod::default())
}

pub fn roots_in_x_with(n: u32, g: f64, method: RootMethod) -> Result<Vec<f64>> {
    slice_roots_in_x(&constraint::constraint_polynomial(n), g, method)
}

/// All real roots `g >= 0` of the constraint polynomial at fixed `x`,
/// ascending, with the same filtering as [`roots_in_x`].
pub fn roots_in_g(n: u32, x: f64) -> Result<Vec<f64>> {
    roots_in_g_with(n, x, RootMethod::default())
}

pub fn roots_in_g_with(n: u32, x: f64, method: RootMethod) -> Result<Vec<f64>> {
    slice_roots_in_g(&constraint::constraint_polynomial(n), x, method)
}

/// Slice-level building block behind [`roots_in_x`], taking a prebuilt
/// constraint polynomial so that callers tracing many slices (possibly from
/// several threads) construct it once.
pub fn slice_roots_in_x(
    poly: &BivariatePolynomial,
    g: f64,
    method: RootMethod,
) -> Result<Vec<f64>> {
    let slice = poly.slice_in_x(&slice_coordinate("g", g)?)?;
    Ok(real_nonneg_roots(&slice, method))
}

/// Counterpart of [`slice_roots_in_x`] with the roles of the variables
/// swapped.
pub fn slice_roots_in_g(
    poly: &BivariatePolynomial,
    x: f64,
    method: RootMethod,
) -> Result<Vec<f64>> {
    let slice = poly.slice_in_g(&slice_coordinate("x", x)?)?;
    Ok(real_nonneg_roots(&slice, method))
}

fn real_nonneg_roots(slice: &[Rational], method: RootMethod) -> Vec<f64> {
    let raw: Vec<f64> = match method {
        RootMethod::SturmExact => {
            let iso = univariate::isolate_real_roots(slice);
            let sf = iso.square_free;
            iso.roots
                .into_iter()
                .map(|mut r| {
                    univariate::refine_to_f64_precision(&mut r, &sf);
                    r.to_f64()
                })
                .collect()
        }
        RootMethod::CompanionEigen => {
            // Repeated roots (doublet touching points) would surface from
            // the QR iteration as spurious complex pairs, so take the exact
            // square-free part first; its roots are all simple.
            let p = IntPoly::from_rationals(slice);
            let (sf, _) = univariate::square_free_with_chain(p);
            let coeffs = sf.to_f64_coeffs();
            if coeffs.iter().any(|c| !c.is_finite()) {
                // Integer coefficients past f64 range; only the exact path
                // can handle such a slice.
                return real_nonneg_roots(slice, RootMethod::SturmExact);
            }
            let dsf = sf.derivative();
            linalg::companion_real_roots(&coeffs)
                .into_iter()
                .map(|r| univariate::newton_polish(&sf, &dsf, r))
                .collect()
        }
    };
    let mut out: Vec<f64> = raw
        .into_iter()
        .filter(|&r| r >= -1e-12)
        .map(|r| if r < 0.0 { 0.0 } else { r })
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).expect("roots are finite"));
    out.dedup();
    out
}

/// The exact degenerate gain/loss values at zero drive amplitude: for each
/// pair `(j, j' = n+1-j)` with `1 <= j <= j'`, the block becomes singular at
/// `G = 4 j (n+1-j)`, doubly so when the pair members differ. Entries come
/// out ascending in `G`. The `j = 0` solution `G = 0` is trivial and not
/// reported.
pub fn degenerate_gamma_values(n: u32) -> Result<DegeneracyReport> {
    if n < 1 {
        return Err(Error::Precondition(
            "degeneracy report needs n >= 1; at n = 0 only the trivial G = 0 root exists".into(),
        ));
    }
    let mut entries = Vec::new();
    let mut j = 1u32;
    while 2 * j <= n + 1 {
        let j_prime = n + 1 - j;
        entries.push(DegeneracyEntry {
            j,
            j_prime,
            g_value: rational(4 * j as i64 * j_prime as i64, 1),
            multiplicity: if j == j_prime { 1 } else { 2 },
        });
        j += 1;
    }
    Ok(DegeneracyReport { n, entries })
}

/// Null vector of the finite block at an on-variety point, by smallest
/// singular pair. Rejects points where the constraint polynomial is not
/// (numerically) zero, and any solve whose achieved residual exceeds 1e-8.
pub fn null_space_coefficients(
    n: u32,
    point: &DimensionlessPoint,
    omega: f64,
) -> Result<QuasiExactSolution> {
    let point = DimensionlessPoint::new(point.x, point.g)?;
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidParams("omega must be positive and finite".into()));
    }
    let value = constraint::constraint_polynomial(n).eval(point.x, point.g);
    if value.abs() > 1e-6 {
        return Err(Error::OffVariety { residual: value });
    }
    let dim = n as usize + 1;
    let m = constraint::htilde_from_point(n, &point);
    let (sigma_min, v) = linalg::smallest_singular_pair(dim, &m);
    if sigma_min > 1e-8 {
        return Err(Error::NullSpaceResidual { sigma_min });
    }
    let first = v
        .iter()
        .position(|c| c.abs() > 1e-10)
        .ok_or(Error::NullSpaceResidual { sigma_min })?;
    let inv = 1.0 / v[first];
    let scaled: Vec<f64> = v.iter().map(|c| c * inv).collect();
    let residual_norm = linalg::norm2(&linalg::mat_vec(dim, &m, &scaled)) / linalg::norm2(&scaled);
    if !(residual_norm <= 1e-8) {
        return Err(Error::NullSpaceResidual { sigma_min: residual_norm });
    }
    Ok(QuasiExactSolution {
        n,
        point,
        omega,
        coeffs: scaled.into_iter().map(|c| Complex::new(c, 0.0)).collect(),
        residual_norm,
    })
}

/// Roots-in-`x` columns over a uniform `g` grid; the parallelizable half of
/// [`trace_curves`].
pub fn curve_columns(n: u32, g_max: f64, samples: u32) -> Result<Vec<(f64, Vec<f64>)>> {
    if !(g_max.is_finite() && g_max > 0.0) {
        return Err(Error::Precondition(alloc::format!(
            "gMax must be finite and positive, got {g_max}"
        )));
    }
    if samples < 2 {
        return Err(Error::Precondition(alloc::format!(
            "samples must be at least 2, got {samples}"
        )));
    }
    let poly = constraint::constraint_polynomial(n);
    (0..samples)
        .map(|i| {
            let g = g_max * i as f64 / (samples - 1) as f64;
            Ok((g, slice_roots_in_x(&poly, g, RootMethod::default())?))
        })
        .collect()
}

/// Sequential branch assignment over grid columns: roots are matched to the
/// previous column's branches greedily by nearest neighbor in `x`, closest
/// pairs first; unmatched roots open fresh branches (numbered in ascending
/// `x` order), unmatched branches end. No curvature model is attempted.
pub fn assign_branches(columns: &[(f64, Vec<f64>)]) -> Vec<CurvePoint> {
    let mut out = Vec::new();
    let mut next_branch = 0u32;
    let mut prev: Vec<(u32, f64)> = Vec::new();
    for &(g, ref roots) in columns {
        let mut assigned: Vec<Option<u32>> = alloc::vec![None; roots.len()];
        let mut used = alloc::vec![false; prev.len()];
        loop {
            let mut best: Option<(f64, usize, usize)> = None;
            for (ri, &x) in roots.iter().enumerate() {
                if assigned[ri].is_some() {
                    continue;
                }
                for (pi, &(_, px)) in prev.iter().enumerate() {
                    if used[pi] {
                        continue;
                    }
                    let d = (x - px).abs();
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, ri, pi));
                    }
                }
            }
            let Some((_, ri, pi)) = best else { break };
            assigned[ri] = Some(prev[pi].0);
            used[pi] = true;
        }
        let mut current: Vec<(u32, f64)> = Vec::with_capacity(roots.len());
        for (ri, &x) in roots.iter().enumerate() {
            let branch = assigned[ri].unwrap_or_else(|| {
                let b = next_branch;
                next_branch += 1;
                b
            });
            out.push(CurvePoint { g, x, branch });
            current.push((branch, x));
        }
        prev = current;
    }
    out
}

/// Branch-tagged plot data for the constraint curves of a given `n` over
/// `samples` uniform grid points in `[0, gMax]`.
pub fn trace_curves(n: u32, g_max: f64, samples: u32) -> Result<Vec<CurvePoint>> {
    Ok(assign_branches(&curve_columns(n, g_max, samples)?))
}

/// Splitting of the doublet that emanates from the degenerate value
/// `G = 4 j (n+1-j)`: the distance between the two slice roots in `G`
/// nearest that value at `x = xProbe`. Requires `1 <= j <= n/2` and
/// `0 <= xProbe <= 1`; at `xProbe = 0` the degeneracy is exact and the gap
/// is 0. Computed entirely in exact arithmetic because the interesting gaps
/// (for example `j = 1` at large `n`) are far below f64 spacing at the scale
/// of `G`; the two isolating intervals are co-refined until their combined
/// width is at most 1e-6 of their distance.
pub fn near_degeneracy_gap(n: u32, j: u32, x_probe: f64) -> Result<f64> {
    if j < 1 || 2 * j > n {
        return Err(Error::Precondition(alloc::format!(
            "doublet index must satisfy 1 <= j <= n/2, got j = {j}, n = {n}"
        )));
    }
    if !x_probe.is_finite() || !(0.0..=1.0).contains(&x_probe) {
        return Err(Error::Precondition(alloc::format!(
            "xProbe must lie in [0, 1], got {x_probe}"
        )));
    }
    if x_probe == 0.0 {
        return Ok(0.0);
    }
    let target = rational(4 * j as i64 * (n + 1 - j) as i64, 1);
    let slice = constraint::constraint_polynomial(n)
        .slice_in_g(&Rational::from_float(x_probe).expect("finite probe"))?;
    let iso = univariate::isolate_real_roots(&slice);
    let sf = iso.square_free;
    let mut roots = iso.roots;
    if roots.len() < 2 {
        return Err(Error::MissingDoublet { n, j });
    }
    // Tighten every bracket enough that midpoints identify which true roots
    // they stand for (doublet centers are separated by at least 8 units of
    // G from their neighbors' centers while brackets shrink to 2^-10).
    let coarse = rational(1, 1024);
    for r in roots.iter_mut() {
        univariate::refine_root(r, &sf, &coarse);
    }
    roots.sort_by(|a, b| {
        let da = (a.midpoint() - target.clone()).abs();
        let db = (b.midpoint() - target.clone()).abs();
        da.cmp(&db)
    });
    let (mut lower, mut upper) = (roots.remove(0), roots.remove(0));
    co_refine_gap(&mut lower, &mut upper, &sf)
        .ok_or(Error::MissingDoublet { n, j })
}

/// Shrinks two disjoint brackets until their combined width is at most
/// 1e-6 of the distance between their midpoints, then returns that distance.
/// Isolating intervals are disjoint, so the distance is always positive and
/// the loop contracts geometrically.
fn co_refine_gap(a: &mut IsolatedRoot, b: &mut IsolatedRoot, sf: &IntPoly) -> Option<f64> {
    let million = Rational::from_integer(1_000_000.into());
    let four_million = Rational::from_integer(4_000_000.into());
    for _ in 0..64 {
        let d = (a.midpoint() - b.midpoint()).abs();
        if d.is_zero() {
            return None;
        }
        if (a.width() + b.width()) * million.clone() <= d {
            return d.to_f64();
        }
        // The midpoint distance is only trustworthy down to the bracket
        // widths, so aim each round a safe factor past the target and let
        // the recomputed distance converge geometrically.
        let eps = d / four_million.clone();
        univariate::refine_root(a, sf, &eps);
        univariate::refine_root(b, sf, &eps);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn quadratic_slice_roots_match_closed_form() {
        // Degree-2 constraint: roots x = g -/+ 2 sqrt(g), negatives dropped.
        assert_close(&roots_in_x(1, 4.0).unwrap(), &[0.0, 8.0], 1e-12);
        assert_close(&roots_in_x(1, 1.0).unwrap(), &[3.0], 1e-12);
        assert_close(&roots_in_x(1, 9.0).unwrap(), &[3.0, 15.0], 1e-10);
    }

    #[test]
    fn diagonal_constraint_has_identity_slices() {
        assert_close(&roots_in_x(0, 7.3).unwrap(), &[7.3], 1e-12);
        assert_close(&roots_in_g(0, 2.0).unwrap(), &[2.0], 1e-12);
    }

    #[test]
    fn g_roots_at_zero_drive_are_degeneracy_values() {
        assert_close(&roots_in_g(1, 0.0).unwrap(), &[0.0, 4.0], 1e-12);
        // n=4: {0} plus 4j(5-j) for j=1,2 -> 16, 24.
        assert_close(&roots_in_g(4, 0.0).unwrap(), &[0.0, 16.0, 24.0], 1e-9);
    }

    #[test]
    fn slice_roots_satisfy_the_constraint() {
        let poly = constraint::constraint_polynomial(2);
        for g in [0.5, 1.0, 4.0, 9.0, 17.25] {
            for x in slice_roots_in_x(&poly, g, RootMethod::SturmExact).unwrap() {
                let v = poly.eval(x, g);
                assert!(v.abs() < 1e-8, "g = {g}, x = {x}, value = {v}");
            }
        }
    }

    #[test]
    fn companion_path_agrees_with_exact_path() {
        for n in [1u32, 2, 3, 4] {
            let poly = constraint::constraint_polynomial(n);
            for g in [0.7, 2.0, 5.5, 12.0, 33.0] {
                let exact = slice_roots_in_x(&poly, g, RootMethod::SturmExact).unwrap();
                let fast = slice_roots_in_x(&poly, g, RootMethod::CompanionEigen).unwrap();
                assert_close(&fast, &exact, 1e-9);
            }
        }
    }

    #[test]
    fn negative_slice_coordinate_is_rejected() {
        assert!(roots_in_x(1, -0.5).is_err());
        assert!(roots_in_g(1, f64::NAN).is_err());
    }

    #[test]
    fn degeneracy_reports_for_small_n() {
        let r = degenerate_gamma_values(2).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].j, 1);
        assert_eq!(r.entries[0].j_prime, 2);
        assert_eq!(r.entries[0].g_value, rational(8, 1));
        assert_eq!(r.entries[0].multiplicity, 2);

        // Odd n has a self-paired middle level with multiplicity 1.
        let r = degenerate_gamma_values(1).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].j, 1);
        assert_eq!(r.entries[0].j_prime, 1);
        assert_eq!(r.entries[0].g_value, rational(4, 1));
        assert_eq!(r.entries[0].multiplicity, 1);

        assert!(degenerate_gamma_values(0).is_err());
    }

    #[test]
    fn degeneracy_values_are_ascending_and_match_zero_slice() {
        for n in 1..=8u32 {
            let report = degenerate_gamma_values(n).unwrap();
            let mut prev = rational(0, 1);
            for e in &report.entries {
                assert!(e.g_value > prev);
                prev = e.g_value.clone();
            }
            let slice_roots = roots_in_g(n, 0.0).unwrap();
            let mut expected: Vec<f64> = [0.0]
                .into_iter()
                .chain(report.entries.iter().map(|e| e.g_value.to_f64().unwrap()))
                .collect();
            expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_close(&slice_roots, &expected, 1e-9);
        }
    }

    #[test]
    fn null_space_for_trivial_block() {
        let point = DimensionlessPoint::new(3.0, 3.0).unwrap();
        let sol = null_space_coefficients(0, &point, 1.0).unwrap();
        assert_eq!(sol.coeffs.len(), 1);
        assert_eq!(sol.coeffs[0], Complex::new(1.0, 0.0));
        assert!(sol.residual_norm <= 1e-8);
    }

    #[test]
    fn null_space_ratio_matches_two_level_closed_form() {
        // At x = 8, g = 4 the ratio c1/c0 is (g - x) / (2 sqrt(x)).
        let point = DimensionlessPoint::new(8.0, 4.0).unwrap();
        let sol = null_space_coefficients(1, &point, 1.0).unwrap();
        let want = (4.0 - 8.0) / (2.0 * 8.0f64.sqrt());
        assert_eq!(sol.coeffs[0], Complex::new(1.0, 0.0));
        assert!((sol.coeffs[1].re - want).abs() < 1e-8, "{} vs {want}", sol.coeffs[1].re);
        assert!(sol.coeffs[1].im == 0.0);
    }

    #[test]
    fn off_variety_point_is_rejected() {
        let point = DimensionlessPoint::new(5.0, 4.0).unwrap();
        let err = null_space_coefficients(1, &point, 1.0).unwrap_err();
        assert!(matches!(err, Error::OffVariety { .. }));
    }

    #[test]
    fn diagonal_curve_is_a_single_branch() {
        let pts = trace_curves(0, 10.0, 11).unwrap();
        assert_eq!(pts.len(), 11);
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(p.branch, 0);
            assert!((p.g - i as f64).abs() < 1e-12);
            assert!((p.x - p.g).abs() < 1e-12);
        }
    }

    #[test]
    fn branch_continuity_across_columns() {
        // n=1: two branches above g where the lower one hits x=0; branch ids
        // must stay stable column to column.
        let pts = trace_curves(1, 9.0, 10).unwrap();
        let branches: alloc::collections::BTreeSet<u32> =
            pts.iter().map(|p| p.branch).collect();
        assert!(branches.len() <= 3, "{branches:?}");
        // The top branch is monotone increasing in g; check it never jumps
        // to another branch id.
        let top: Vec<&CurvePoint> =
            pts.iter().filter(|p| p.branch == *branches.iter().next_back().unwrap()).collect();
        for w in top.windows(2) {
            assert!(w[1].x >= w[0].x);
        }
    }

    #[test]
    fn trace_rejects_bad_grid() {
        assert!(trace_curves(1, 0.0, 5).is_err());
        assert!(trace_curves(1, 4.0, 1).is_err());
    }

    #[test]
    fn doublet_gap_trivial_and_small_cases() {
        assert_eq!(near_degeneracy_gap(2, 1, 0.0).unwrap(), 0.0);
        // Frozen reference value for the n=2 doublet at xProbe = 1/2,
        // computed independently with 60-digit arithmetic.
        let gap = near_degeneracy_gap(2, 1, 0.5).unwrap();
        assert!((gap - 3.91281912).abs() < 1e-5 * 3.9, "gap = {gap}");
    }

    #[test]
    fn doublet_gap_preconditions() {
        assert!(near_degeneracy_gap(2, 0, 0.5).is_err());
        assert!(near_degeneracy_gap(2, 2, 0.5).is_err());
        assert!(near_degeneracy_gap(20, 1, 1.5).is_err());
        assert!(near_degeneracy_gap(20, 1, -0.1).is_err());
    }
}
