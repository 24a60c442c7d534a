//! Exact sparse bivariate polynomials in the dimensionless couplings
//! `X = nu1^2/omega^2` and `G = gamma^2/omega^2`.
//!
//! Coefficients are arbitrary-precision rationals and every algebraic
//! operation is exact; floating point enters only through [`BivariatePolynomial::eval`].
//! The canonical term order is graded lexicographic with `X` before `G`,
//! leading term first.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar: always reduced, denominator positive,
/// zero represented as `0/1`.
pub type Rational = num_rational::BigRational;

/// Convenience constructor for small rational constants.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Monomial exponents `(i, j)` for `X^i * G^j`.
pub type Exponents = (u32, u32);

/// Sparse bivariate polynomial with exact rational coefficients.
///
/// Stored coefficients are never zero; the zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BivariatePolynomial {
    terms: BTreeMap<Exponents, Rational>,
}

impl BivariatePolynomial {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Constant polynomial `c`.
    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, 0, c)
    }

    /// Single term `c * X^i * G^j`. A zero coefficient yields the zero polynomial.
    pub fn monomial(i: u32, j: u32, c: Rational) -> Self {
        let mut p = Self::default();
        p.add_term(i, j, c);
        p
    }

    /// The variable `X`.
    pub fn var_x() -> Self {
        Self::monomial(1, 0, Rational::one())
    }

    /// The variable `G`.
    pub fn var_g() -> Self {
        Self::monomial(0, 1, Rational::one())
    }

    /// Builds a polynomial from `(i, j, coefficient)` triples, summing duplicates.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, Rational)>,
    {
        let mut p = Self::default();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `X^i * G^j` (zero when the term is absent).
    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// Degree in `X`, or `None` for the zero polynomial.
    pub fn degree_in_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    /// Degree in `G`, or `None` for the zero polynomial.
    pub fn degree_in_g(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry((i, j)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(&k, v)| (k, v.clone() * c.clone()))
            .collect();
        Self { terms }
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(Rational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Terms in canonical order: graded lexicographic, `X` before `G`,
    /// leading term first.
    pub fn canonical_terms(&self) -> Vec<(u32, u32, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(&(i, j), c)| (i, j, c)).collect();
        v.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        v
    }

    /// Floating-point evaluation by nested Horner passes (inner in `G`,
    /// outer in `X`); exact up to rounding of the final combination.
    pub fn eval(&self, x: f64, g: f64) -> f64 {
        let (Some(dx), Some(dg)) = (self.degree_in_x(), self.degree_in_g()) else {
            return 0.0;
        };
        let cols = dg as usize + 1;
        let mut dense = alloc::vec![0.0f64; (dx as usize + 1) * cols];
        for (&(i, j), c) in &self.terms {
            dense[i as usize * cols + j as usize] = c.to_f64().unwrap_or(f64::NAN);
        }
        let mut acc = 0.0;
        for i in (0..=dx as usize).rev() {
            let row = &dense[i * cols..(i + 1) * cols];
            let mut inner = 0.0;
            for &c in row.iter().rev() {
                inner = inner * g + c;
            }
            acc = acc * x + inner;
        }
        acc
    }

    /// Exact rational evaluation.
    pub fn eval_rational(&self, x: &Rational, g: &Rational) -> Rational {
        // Horner over the sparse X-grouped slices.
        let mut by_x: BTreeMap<u32, Vec<(u32, &Rational)>> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            by_x.entry(i).or_default().push((j, c));
        }
        let mut acc = Rational::zero();
        let mut prev_i: Option<u32> = None;
        for (&i, row) in by_x.iter().rev() {
            if let Some(pi) = prev_i {
                for _ in 0..(pi - i) {
                    acc = acc * x.clone();
                }
            }
            let mut inner = Rational::zero();
            let mut prev_j: Option<u32> = None;
            for &(j, c) in row.iter().rev() {
                if let Some(pj) = prev_j {
                    for _ in 0..(pj - j) {
                        inner = inner * g.clone();
                    }
                }
                inner += c.clone();
                prev_j = Some(j);
            }
            if let Some(pj) = prev_j {
                for _ in 0..pj {
                    inner = inner * g.clone();
                }
            }
            acc += inner;
            prev_i = Some(i);
        }
        if let Some(pi) = prev_i {
            for _ in 0..pi {
                acc = acc * x.clone();
            }
        }
        acc
    }

    /// Exact substitution of `G = g`: coefficients of the univariate
    /// polynomial in `X`, ascending, trailing zeros trimmed.
    ///
    /// Rejects the zero polynomial, and slices that collapse to zero.
    pub fn slice_in_x(&self, g: &Rational) -> Result<Vec<Rational>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let dx = self.degree_in_x().expect("nonzero") as usize;
        let mut out = alloc::vec![Rational::zero(); dx + 1];
        for (&(i, j), c) in &self.terms {
            let mut gp = Rational::one();
            for _ in 0..j {
                gp = gp * g.clone();
            }
            out[i as usize] += c.clone() * gp;
        }
        while out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        if out.is_empty() {
            return Err(Error::ZeroSlice);
        }
        Ok(out)
    }

    /// Exact substitution of `X = x`: coefficients in `G`, ascending.
    pub fn slice_in_g(&self, x: &Rational) -> Result<Vec<Rational>> {
        self.swap_vars().slice_in_x(x)
    }

    /// The polynomial with `X` and `G` exchanged.
    pub fn swap_vars(&self) -> Self {
        let terms = self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect();
        Self { terms }
    }

    /// Rewrites the polynomial over integer coefficients with content 1 and a
    /// canonical sign, returning `(normalized, scale)` with
    /// `normalized = scale * self`.
    ///
    /// The sign rule makes the coefficient of the highest pure-`X` power
    /// positive; when no pure-`X` term exists the canonical leading term is
    /// made positive instead. Rejects the zero polynomial.
    pub fn primitive_normalize(&self) -> Result<(Self, Rational)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&scaled);
        }
        let mut scale = Rational::new(den_lcm, num_gcd);
        let sign_ref = self
            .terms
            .iter()
            .filter(|(&(_, j), _)| j == 0)
            .max_by_key(|(&(i, _), _)| i)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| {
                let lead = self.canonical_terms()[0];
                lead.2.clone()
            });
        if (sign_ref * scale.clone()).is_negative() {
            scale = -scale;
        }
        Ok((self.scale(&scale), scale))
    }

    /// Expanded rendering in canonical term order, e.g. `X^2 - 2*X*G + G^2 - 4*G`.
    fn write_expanded(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (i, j, c)) in self.canonical_terms().into_iter().enumerate() {
            write_term_str(f, idx == 0, i, j, c, "X")?;
        }
        Ok(())
    }

    /// Rendering grouped in powers of `(X - G)`, matching the usual way the
    /// constraint conditions are written. Grouping is cosmetic: the value is
    /// obtained by the exact change of basis `X = (X - G) + G`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        // Coefficients over the basis U^k * G^j with U = X - G.
        let mut grouped: BTreeMap<Exponents, Rational> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            // X^i = (U + G)^i expanded by exact binomials.
            let mut binom = BigInt::one();
            for k in 0..=i {
                // binom = C(i, k) at this point.
                let coeff = c.clone() * Rational::from_integer(binom.clone());
                let key = (k, j + (i - k));
                let e = grouped.entry(key).or_insert_with(Rational::zero);
                *e += coeff;
                if e.is_zero() {
                    grouped.remove(&key);
                }
                if k < i {
                    binom = binom * BigInt::from(i - k) / BigInt::from(k + 1);
                }
            }
        }
        let mut order: Vec<_> = grouped.iter().map(|(&(k, j), c)| (k, j, c)).collect();
        order.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        let mut s = String::new();
        let mut first = true;
        for (k, j, c) in order {
            let _ = write_term_str(&mut s, first, k, j, c, "(X-G)");
            first = false;
        }
        s
    }
}

fn write_term_str<W: fmt::Write>(
    f: &mut W,
    first: bool,
    i: u32,
    j: u32,
    c: &Rational,
    x_name: &str,
) -> fmt::Result {
    let neg = c.is_negative();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    let mag = c.abs();
    let mut factors: Vec<String> = Vec::new();
    if !mag.is_one() || (i == 0 && j == 0) {
        if mag.denom().is_one() {
            factors.push(alloc::format!("{}", mag.numer()));
        } else {
            factors.push(alloc::format!("{}/{}", mag.numer(), mag.denom()));
        }
    }
    if i > 0 {
        factors.push(if i == 1 {
            String::from(x_name)
        } else {
            alloc::format!("{x_name}^{i}")
        });
    }
    if j > 0 {
        factors.push(if j == 1 {
            String::from("G")
        } else {
            alloc::format!("G^{j}")
        });
    }
    write!(f, "{}", factors.join("*"))
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_expanded(f)
    }
}

impl fmt::Debug for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_expanded(f)
    }
}

impl Add for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn add(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl Sub for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn sub(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c.clone());
        }
        out
    }
}

impl Mul for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn mul(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::default();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl Neg for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn neg(self) -> BivariatePolynomial {
        let terms = self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect();
        BivariatePolynomial { terms }
    }
}

impl Add for BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn add(self, rhs: BivariatePolynomial) -> BivariatePolynomial {
        &self + &rhs
    }
}

impl Sub for BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn sub(self, rhs: BivariatePolynomial) -> BivariatePolynomial {
        &self - &rhs
    }
}

impl Mul for BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn mul(self, rhs: BivariatePolynomial) -> BivariatePolynomial {
        &self * &rhs
    }
}
