//! Output shaping: serializable report types, the exact polynomial term
//! schema, and the pretty printers. All floats go through the standard
//! shortest round-trip formatting, so identical inputs give byte-identical
//! output and every printed value parses back to the same bits.

use std::fmt::Write as _;

use serde::Serialize;

use ptrabi_core::floquet::MonodromyResult;
use ptrabi_core::spectrum::{CurvePoint, DegeneracyReport, QuasiExactSolution};
use ptrabi_core::{BivariatePolynomial, Complex, Rational};

/// One polynomial term: exponents of X and G and the exact coefficient as a
/// "numerator/denominator" decimal string.
#[derive(Serialize, Debug)]
pub struct TermJson {
    pub i: u32,
    pub j: u32,
    pub c: String,
}

pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Canonically ordered term list (total degree, then X exponent).
pub fn polynomial_terms(p: &BivariatePolynomial) -> Vec<TermJson> {
    p.canonical_terms()
        .into_iter()
        .map(|(i, j, c)| TermJson { i, j, c: rational_string(c) })
        .collect()
}

fn pair(z: Complex) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Serialize, Debug)]
pub struct RootsReport {
    pub n: u32,
    /// The fixed coordinate: ("g", value) or ("x", value).
    pub fixed: FixedCoordinate,
    pub roots: Vec<f64>,
}

#[derive(Serialize, Debug)]
#[serde(rename_all = "lowercase")]
pub enum FixedCoordinate {
    G(f64),
    X(f64),
}

#[derive(Serialize, Debug)]
pub struct DegeneracyRow {
    pub j: u32,
    #[serde(rename = "jPrime")]
    pub j_prime: u32,
    #[serde(rename = "G")]
    pub g: String,
    pub multiplicity: u8,
}

pub fn degeneracy_rows(report: &DegeneracyReport) -> Vec<DegeneracyRow> {
    report
        .entries
        .iter()
        .map(|e| DegeneracyRow {
            j: e.j,
            j_prime: e.j_prime,
            g: rational_string(&e.g_value),
            multiplicity: e.multiplicity,
        })
        .collect()
}

#[derive(Serialize, Debug)]
pub struct SolveReport {
    pub n: u32,
    pub x: f64,
    pub g: f64,
    pub omega: f64,
    /// Null-space coefficients c_0..c_n as [re, im] pairs.
    pub coeffs: Vec<[f64; 2]>,
    #[serde(rename = "residualNorm")]
    pub residual_norm: f64,
}

impl SolveReport {
    pub fn from_solution(sol: &QuasiExactSolution) -> Self {
        SolveReport {
            n: sol.n,
            x: sol.point.x,
            g: sol.point.g,
            omega: sol.omega,
            coeffs: sol.coeffs.iter().map(|&c| pair(c)).collect(),
            residual_norm: sol.residual_norm,
        }
    }
}

#[derive(Serialize, Debug)]
pub struct VerifyReport {
    pub x: f64,
    pub g: f64,
    #[serde(rename = "maxResidual")]
    pub max_residual: f64,
    #[serde(rename = "multiplierError")]
    pub multiplier_error: f64,
    pub trace: [f64; 2],
    pub phase: String,
}

#[derive(Serialize, Debug)]
pub struct MonodromyJson {
    /// Row-major 2x2 matrix of [re, im] pairs.
    pub matrix: [[[f64; 2]; 2]; 2],
    pub multipliers: [[f64; 2]; 2],
    pub trace: [f64; 2],
    #[serde(rename = "detDeviation")]
    pub det_deviation: f64,
    pub phase: String,
}

impl MonodromyJson {
    pub fn from_result(m: &MonodromyResult) -> Self {
        MonodromyJson {
            matrix: [
                [pair(m.matrix[0][0]), pair(m.matrix[0][1])],
                [pair(m.matrix[1][0]), pair(m.matrix[1][1])],
            ],
            multipliers: [pair(m.multipliers.0), pair(m.multipliers.1)],
            trace: pair(m.trace()),
            det_deviation: m.det_deviation,
            phase: m.phase.to_string(),
        }
    }
}

#[derive(Serialize, Debug)]
pub struct Sl2Report {
    #[serde(rename = "nMax")]
    pub n_max: u32,
    #[serde(rename = "allExact")]
    pub all_exact: bool,
}

#[derive(Serialize, Debug)]
pub struct CurveRow {
    pub g: f64,
    pub x: f64,
    pub branch: u32,
}

pub fn curve_rows_json(points: &[CurvePoint]) -> Vec<CurveRow> {
    points.iter().map(|p| CurveRow { g: p.g, x: p.x, branch: p.branch }).collect()
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize infallibly");
    s.push('\n');
    s
}

/// CSV table of traced curve points: header `g,x,branch`, one row per
/// point, LF line endings. Marker rows use branch -1.
pub fn curve_csv(points: &[CurvePoint], markers: &[(f64, f64)]) -> String {
    let mut s = String::from("g,x,branch\n");
    for p in points {
        let _ = writeln!(s, "{},{},{}", p.g, p.x, p.branch);
    }
    for &(g, x) in markers {
        let _ = writeln!(s, "{},{},-1", g, x);
    }
    s
}

pub fn roots_pretty(report: &RootsReport) -> String {
    let (axis, fixed_name, fixed) = match report.fixed {
        FixedCoordinate::G(v) => ("x", "g", v),
        FixedCoordinate::X(v) => ("g", "x", v),
    };
    let mut s = format!(
        "{} real nonnegative root(s) in {} at n = {}, {} = {}\n",
        report.roots.len(),
        axis,
        report.n,
        fixed_name,
        fixed
    );
    for r in &report.roots {
        let _ = writeln!(s, "  {axis} = {r}");
    }
    s
}

pub fn degeneracies_pretty(n: u32, rows: &[DegeneracyRow]) -> String {
    let mut s = format!("{} degenerate zero-drive level(s) at n = {}\n", rows.len(), n);
    for row in rows {
        let _ = writeln!(
            s,
            "  G = {} from (j, j') = ({}, {}), multiplicity {}",
            row.g, row.j, row.j_prime, row.multiplicity
        );
    }
    s
}

pub fn solve_pretty(report: &SolveReport) -> String {
    let mut s = format!(
        "null space at n = {}, (x, g) = ({}, {}), omega = {}\n",
        report.n, report.x, report.g, report.omega
    );
    for (m, c) in report.coeffs.iter().enumerate() {
        let _ = writeln!(s, "  c_{m} = {} + {}i", c[0], c[1]);
    }
    let _ = writeln!(s, "residual norm {}", report.residual_norm);
    s
}

pub fn verify_pretty(reports: &[VerifyReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let _ = writeln!(
            s,
            "x = {}, g = {}: residual {}, multiplier error {}, trace {} + {}i, {}",
            r.x, r.g, r.max_residual, r.multiplier_error, r.trace[0], r.trace[1], r.phase
        );
    }
    s
}

pub fn curve_pretty(points: &[CurvePoint]) -> String {
    let mut s = String::new();
    for p in points {
        let _ = writeln!(s, "g = {}, x = {}, branch {}", p.g, p.x, p.branch);
    }
    s
}

pub fn monodromy_pretty(m: &MonodromyJson) -> String {
    let mut s = String::from("monodromy over one period\n");
    for row in &m.matrix {
        let _ = writeln!(
            s,
            "  [{} + {}i, {} + {}i]",
            row[0][0], row[0][1], row[1][0], row[1][1]
        );
    }
    let _ = writeln!(
        s,
        "multipliers {} + {}i, {} + {}i",
        m.multipliers[0][0], m.multipliers[0][1], m.multipliers[1][0], m.multipliers[1][1]
    );
    let _ = writeln!(s, "trace {} + {}i", m.trace[0], m.trace[1]);
    let _ = writeln!(s, "det deviation {}", m.det_deviation);
    let _ = writeln!(s, "phase {}", m.phase);
    s
}
