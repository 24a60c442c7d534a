//! The spin-`n/2` representation of sl(2) by first-order differential
//! operators on polynomials of degree at most `n`, and the quadratic operator
//! combinations built from it.
//!
//! In the monomial basis `v_m = z^m`, `m = 0..=n`, the generators are
//!
//! ```text
//! J+ = z^2 d/dz - n z      J+ v_j = -(n - j) v_{j+1}
//! J0 = z d/dz - n/2        J0 v_j = (j - n/2) v_j
//! J- = d/dz                J- v_j = j v_{j-1}
//! ```
//!
//! so `J+` annihilates `v_n` and `J-` annihilates `v_0`: the space is
//! invariant, which is what makes a finite block of the spectral problem
//! exactly solvable. All matrix algebra here is exact.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::poly::{rational, Rational};

/// Dense square matrix with exact rational entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    dim: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(dim: usize) -> Self {
        RationalMatrix { dim, data: alloc::vec![Rational::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            *m.get_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.dim + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.dim + j]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    *out.get_mut(i, j) += a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        RationalMatrix { dim: self.dim, data }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        RationalMatrix { dim: self.dim, data }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let data = self.data.iter().map(|a| a.clone() * c.clone()).collect();
        RationalMatrix { dim: self.dim, data }
    }

    /// `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// Column `j` as a coefficient vector.
    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    /// Row-major f64 image of the matrix.
    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.data.iter().map(|a| a.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// The three sl(2) generators in the `(n+1)`-dimensional representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    pub n: u32,
    pub j_plus: RationalMatrix,
    pub j_zero: RationalMatrix,
    pub j_minus: RationalMatrix,
}

/// Builds the generators for the representation on polynomials of degree `<= n`.
pub fn generators(n: u32) -> GeneratorSet {
    let dim = n as usize + 1;
    let mut j_plus = RationalMatrix::zeros(dim);
    let mut j_zero = RationalMatrix::zeros(dim);
    let mut j_minus = RationalMatrix::zeros(dim);
    for j in 0..dim {
        let ji = j as i64;
        if j + 1 < dim {
            *j_plus.get_mut(j + 1, j) = rational(-(n as i64 - ji), 1);
        }
        if j >= 1 {
            *j_minus.get_mut(j - 1, j) = rational(ji, 1);
        }
        *j_zero.get_mut(j, j) = rational(2 * ji - n as i64, 2);
    }
    GeneratorSet { n, j_plus, j_zero, j_minus }
}

/// Verifies the algebra exactly: `[J+, J-] = -2 J0` and `[J±, J0] = ∓ J±`.
pub fn commutator_check(gs: &GeneratorSet) -> bool {
    let two = rational(2, 1);
    let c1 = gs.j_plus.commutator(&gs.j_minus);
    if c1 != gs.j_zero.scale(&-two) {
        return false;
    }
    let c2 = gs.j_plus.commutator(&gs.j_zero);
    if c2 != gs.j_plus.scale(&rational(-1, 1)) {
        return false;
    }
    let c3 = gs.j_minus.commutator(&gs.j_zero);
    c3 == gs.j_minus
}

/// Coefficients of the general quadratic element
///
/// ```text
/// H = C++ J+J+ + C+0 J+J0 + C+- J+J- + C0- J0J- + C-- J-J-
///   + C+ J+ + C0 J0 + C- J- + C
/// ```
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QesCoefficients {
    pub c_plus_plus: Rational,
    pub c_plus_zero: Rational,
    pub c_plus_minus: Rational,
    pub c_zero_minus: Rational,
    pub c_minus_minus: Rational,
    pub c_plus: Rational,
    pub c_zero: Rational,
    pub c_minus: Rational,
    pub c_const: Rational,
}

/// Assembles the quadratic element as an exact `(n+1) x (n+1)` matrix.
pub fn hqes_matrix(n: u32, c: &QesCoefficients) -> RationalMatrix {
    let gs = generators(n);
    let dim = n as usize + 1;
    let mut h = RationalMatrix::zeros(dim);
    let quad: [(&Rational, &RationalMatrix, &RationalMatrix); 5] = [
        (&c.c_plus_plus, &gs.j_plus, &gs.j_plus),
        (&c.c_plus_zero, &gs.j_plus, &gs.j_zero),
        (&c.c_plus_minus, &gs.j_plus, &gs.j_minus),
        (&c.c_zero_minus, &gs.j_zero, &gs.j_minus),
        (&c.c_minus_minus, &gs.j_minus, &gs.j_minus),
    ];
    for (coeff, a, b) in quad {
        if !coeff.is_zero() {
            h = h.add(&a.mul(b).scale(coeff));
        }
    }
    let linear: [(&Rational, &RationalMatrix); 3] = [
        (&c.c_plus, &gs.j_plus),
        (&c.c_zero, &gs.j_zero),
        (&c.c_minus, &gs.j_minus),
    ];
    for (coeff, a) in linear {
        if !coeff.is_zero() {
            h = h.add(&a.scale(coeff));
        }
    }
    if !c.c_const.is_zero() {
        h = h.add(&RationalMatrix::identity(dim).scale(&c.c_const));
    }
    h
}

/// The same quadratic element written as a differential operator
/// `P4(z) d^2/dz^2 + P3(z) d/dz + P2(z)`; returns `(P4, P3, P2)` with
/// ascending coefficients and trailing zeros trimmed.
pub fn hqes_differential_coefficients(
    n: u32,
    c: &QesCoefficients,
) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let ni = n as i64;
    let nr = rational(ni, 1);
    let half_n = rational(ni, 2);
    let p4 = trim(alloc::vec![
        c.c_minus_minus.clone(),
        c.c_zero_minus.clone(),
        c.c_plus_minus.clone(),
        c.c_plus_zero.clone(),
        c.c_plus_plus.clone(),
    ]);
    let p3 = trim(alloc::vec![
        c.c_minus.clone() - half_n.clone() * c.c_zero_minus.clone(),
        c.c_zero.clone() - nr.clone() * c.c_plus_minus.clone(),
        c.c_plus.clone() + c.c_plus_zero.clone() * (Rational::one() - rational(3 * ni, 2)),
        c.c_plus_plus.clone() * rational(2 - 2 * ni, 1),
    ]);
    let p2 = trim(alloc::vec![
        c.c_const.clone() - half_n * c.c_zero.clone(),
        rational(ni * ni, 2) * c.c_plus_zero.clone() - nr * c.c_plus.clone(),
        c.c_plus_plus.clone() * rational(ni * (ni - 1), 1),
    ]);
    (p4, p3, p2)
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// Applies `P4 phi'' + P3 phi' + P2 phi` to a coefficient vector, exactly.
/// Used to cross-validate the matrix and differential forms against each
/// other: applied to `z^m` with `m <= n` the result must be column `m` of
/// [`hqes_matrix`], with no overflow past degree `n`.
pub fn apply_operator(
    p4: &[Rational],
    p3: &[Rational],
    p2: &[Rational],
    phi: &[Rational],
) -> Vec<Rational> {
    let d1 = poly_derivative(phi);
    let d2 = poly_derivative(&d1);
    let mut out = poly_mul(p4, &d2);
    out = poly_add(&out, &poly_mul(p3, &d1));
    out = poly_add(&out, &poly_mul(p2, phi));
    trim(out)
}

fn poly_derivative(p: &[Rational]) -> Vec<Rational> {
    if p.len() <= 1 {
        return Vec::new();
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| rational(k as i64, 1) * a.clone())
        .collect()
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = alloc::vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai.clone() * bj.clone();
        }
    }
    out
}

fn poly_add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = alloc::vec![Rational::zero(); n];
    for (k, v) in a.iter().enumerate() {
        out[k] += v.clone();
    }
    for (k, v) in b.iter().enumerate() {
        out[k] += v.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_for_n_equal_one() {
        let gs = generators(1);
        assert_eq!(*gs.j_plus.get(1, 0), rational(-1, 1));
        assert_eq!(*gs.j_plus.get(0, 1), rational(0, 1));
        assert_eq!(*gs.j_minus.get(0, 1), rational(1, 1));
        assert_eq!(*gs.j_zero.get(0, 0), rational(-1, 2));
        assert_eq!(*gs.j_zero.get(1, 1), rational(1, 2));
    }

    #[test]
    fn generators_for_n_zero_are_all_zero() {
        let gs = generators(0);
        let z = RationalMatrix::zeros(1);
        assert_eq!(gs.j_plus, z);
        assert_eq!(gs.j_minus, z);
        assert_eq!(gs.j_zero, z);
    }

    #[test]
    fn weight_vectors_are_annihilated() {
        for n in 0..=50u32 {
            let gs = generators(n);
            let dim = n as usize + 1;
            // J+ kills v_n (last column), J- kills v_0 (first column).
            for i in 0..dim {
                assert!(gs.j_plus.get(i, dim - 1).is_zero());
                assert!(gs.j_minus.get(i, 0).is_zero());
            }
        }
    }

    #[test]
    fn commutators_close_exactly() {
        for n in [0u32, 1, 2, 5, 17, 50] {
            assert!(commutator_check(&generators(n)), "n = {n}");
        }
    }

    #[test]
    fn corrupted_generator_fails_commutator_check() {
        let mut gs = generators(1);
        *gs.j_plus.get_mut(1, 0) = rational(-2, 1);
        assert!(!commutator_check(&gs));
    }

    #[test]
    fn plus_minus_product_diagonal() {
        let gs = generators(2);
        let pm = gs.j_plus.mul(&gs.j_minus);
        let diag: alloc::vec::Vec<Rational> = (0..3).map(|i| pm.get(i, i).clone()).collect();
        assert_eq!(diag, alloc::vec![rational(0, 1), rational(-2, 1), rational(-2, 1)]);
        // (j - n - 1) * j on the diagonal in general.
        for (j, d) in diag.iter().enumerate() {
            let j = j as i64;
            assert_eq!(*d, rational((j - 3) * j, 1));
        }
    }

    #[test]
    fn constant_coefficient_gives_identity_multiple() {
        let c = QesCoefficients { c_const: rational(5, 1), ..Default::default() };
        let h = hqes_matrix(3, &c);
        assert_eq!(h, RationalMatrix::identity(4).scale(&rational(5, 1)));
    }

    #[test]
    fn pure_plus_minus_matches_diagonal_formula() {
        let c = QesCoefficients { c_plus_minus: rational(1, 1), ..Default::default() };
        let h = hqes_matrix(2, &c);
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    let ji = j as i64;
                    assert_eq!(*h.get(i, j), rational((ji - 3) * ji, 1));
                } else {
                    assert!(h.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn differential_coefficients_of_zero_are_zero() {
        let (p4, p3, p2) = hqes_differential_coefficients(4, &QesCoefficients::default());
        assert!(p4.is_empty() && p3.is_empty() && p2.is_empty());
    }

    #[test]
    fn differential_coefficients_pure_plus_plus() {
        let c = QesCoefficients { c_plus_plus: rational(1, 1), ..Default::default() };
        let (p4, p3, p2) = hqes_differential_coefficients(3, &c);
        // z^4, (2 - 2n) z^3 = -4 z^3, n(n-1) z^2 = 6 z^2.
        let mut z4 = alloc::vec![rational(0, 1); 5];
        z4[4] = rational(1, 1);
        assert_eq!(p4, z4);
        assert_eq!(p3, alloc::vec![rational(0, 1), rational(0, 1), rational(0, 1), rational(-4, 1)]);
        assert_eq!(p2, alloc::vec![rational(0, 1), rational(0, 1), rational(6, 1)]);
    }

    #[test]
    fn differential_form_reproduces_matrix_columns() {
        // Mixed draw exercising every coefficient, several n.
        let c = QesCoefficients {
            c_plus_plus: rational(3, 2),
            c_plus_zero: rational(-1, 3),
            c_plus_minus: rational(7, 5),
            c_zero_minus: rational(2, 7),
            c_minus_minus: rational(-5, 4),
            c_plus: rational(1, 6),
            c_zero: rational(-9, 2),
            c_minus: rational(4, 9),
            c_const: rational(11, 13),
        };
        for n in [0u32, 1, 2, 3, 6] {
            let h = hqes_matrix(n, &c);
            let (p4, p3, p2) = hqes_differential_coefficients(n, &c);
            for m in 0..=n as usize {
                let mut zm = alloc::vec![Rational::zero(); m + 1];
                zm[m] = Rational::one();
                let image = apply_operator(&p4, &p3, &p2, &zm);
                // Invariance: nothing may leak past degree n.
                assert!(image.len() <= n as usize + 1, "n = {n}, m = {m}");
                let col = h.column(m);
                for i in 0..=n as usize {
                    let got = image.get(i).cloned().unwrap_or_else(Rational::zero);
                    assert_eq!(got, col[i], "n = {n}, m = {m}, row {i}");
                }
            }
        }
    }
}
