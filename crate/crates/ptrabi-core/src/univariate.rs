//! Exact real root isolation for univariate polynomials with rational
//! coefficients.
//!
//! The pipeline is: clear denominators to a primitive integer polynomial,
//! extract the square-free part through a signed pseudo-remainder sequence,
//! isolate roots with Sturm variation counts on dyadic intervals, and refine
//! by exact-sign bisection. All decisions are made in integer arithmetic, so
//! roots separated by far less than one f64 ulp are still resolved; floating
//! point appears only when a caller projects an interval to `f64`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::Rational;

/// Dense integer polynomial, coefficients ascending, trailing zeros trimmed.
/// The empty vector is the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntPoly {
    pub c: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { c: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn trim(mut self) -> Self {
        while self.c.last().is_some_and(Zero::is_zero) {
            self.c.pop();
        }
        self
    }

    /// Clears denominators and divides out the content. The positive overall
    /// scaling preserves the sign of every evaluation.
    pub fn from_rationals(coeffs: &[Rational]) -> Self {
        let mut den_lcm = BigInt::one();
        for c in coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        IntPoly { c: ints }.trim().into_primitive()
    }

    /// Divides out the (positive) integer content. Zero stays zero.
    pub fn into_primitive(mut self) -> Self {
        let mut g = BigInt::zero();
        for a in &self.c {
            g = g.gcd(a);
            if g.is_one() {
                return self;
            }
        }
        if g.is_zero() || g.is_one() {
            return self;
        }
        for a in &mut self.c {
            *a = &*a / &g;
        }
        self
    }

    pub fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return Self::zero();
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a * BigInt::from(k))
            .collect();
        IntPoly { c }.trim()
    }

    fn neg(mut self) -> Self {
        for a in &mut self.c {
            *a = -core::mem::take(a);
        }
        self
    }

    /// Sign of `p(x)` at a rational point, computed without rounding:
    /// the sign of `sum_k a_k u^k v^(d-k)` for `x = u/v`.
    pub fn sign_at(&self, x: &Rational) -> i32 {
        let u = x.numer();
        let v = x.denom();
        let mut it = self.c.iter().rev();
        let Some(lead) = it.next() else {
            return 0;
        };
        let mut acc = lead.clone();
        let mut vp = BigInt::one();
        for a in it {
            vp = &vp * v;
            acc = acc * u + a * &vp;
        }
        bigint_sign(&acc)
    }

    /// Exact rational value of `p(x)`.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x.clone() + Rational::from_integer(a.clone());
        }
        acc
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.c.iter().map(|a| a.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// All roots `r` satisfy `|r| < 1 + max|a_k| / |a_d|`.
    fn cauchy_bound(&self) -> Rational {
        let lead = self.c.last().expect("nonzero poly").abs();
        let mut m = BigInt::zero();
        for a in &self.c[..self.c.len() - 1] {
            let ab = a.abs();
            if ab > m {
                m = ab;
            }
        }
        Rational::one() + Rational::new(m, lead)
    }
}

fn bigint_sign(a: &BigInt) -> i32 {
    if a.is_zero() {
        0
    } else if a.is_negative() {
        -1
    } else {
        1
    }
}

/// Remainder of `f` by `g` scaled by a positive constant, so that sign
/// evaluations of the true remainder are preserved.
fn positive_pseudo_rem(f: &IntPoly, g: &IntPoly) -> IntPoly {
    debug_assert!(!g.is_zero());
    let dg = g.degree();
    if dg == 0 {
        return IntPoly::zero();
    }
    let lc = g.c.last().unwrap().clone();
    let mut r = f.clone();
    let mut steps = 0usize;
    while !r.is_zero() && r.degree() >= dg {
        let dr = r.degree();
        let top = r.c.last().unwrap().clone();
        // r := lc*r - top * x^(dr-dg) * g ; kills the leading term.
        let mut next = alloc::vec![BigInt::zero(); dr];
        for (k, a) in r.c.iter().enumerate().take(dr) {
            next[k] = a * &lc;
        }
        for (k, b) in g.c.iter().enumerate().take(dg) {
            next[k + dr - dg] -= b * &top;
        }
        r = IntPoly { c: next }.trim();
        steps += 1;
    }
    // Each elimination step multiplied the remainder by lc; compensate an
    // overall negative factor when lc < 0 and the step count is odd.
    if lc.is_negative() && steps % 2 == 1 {
        r = r.neg();
    }
    r.into_primitive()
}

/// Sturm chain of a square-free candidate: `s0 = p`, `s1 = p'`,
/// `s_{k+1} = -rem(s_{k-1}, s_k)`, every element reduced to its primitive
/// part (a positive scaling, harmless for variation counts).
fn sturm_chain(p: &IntPoly) -> Vec<IntPoly> {
    let mut chain = alloc::vec![p.clone().into_primitive()];
    let d = p.derivative().into_primitive();
    if d.is_zero() {
        return chain;
    }
    chain.push(d);
    loop {
        let k = chain.len();
        let r = positive_pseudo_rem(&chain[k - 2], &chain[k - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.neg());
    }
    chain
}

fn variations(chain: &[IntPoly], x: &Rational) -> u32 {
    let mut count = 0;
    let mut prev = 0i32;
    for s in chain {
        let sg = s.sign_at(x);
        if sg == 0 {
            continue;
        }
        if prev != 0 && sg != prev {
            count += 1;
        }
        prev = sg;
    }
    count
}

/// Exact division of rational-coefficient polynomials; the caller guarantees
/// `g` divides `f`.
fn rat_div_exact(f: &[Rational], g: &[Rational]) -> Vec<Rational> {
    let df = f.len() - 1;
    let dg = g.len() - 1;
    debug_assert!(df >= dg);
    let mut rem: Vec<Rational> = f.to_vec();
    let mut q = alloc::vec![Rational::zero(); df - dg + 1];
    let lg = g.last().unwrap();
    for k in (0..=df - dg).rev() {
        let t = rem[k + dg].clone() / lg.clone();
        if !t.is_zero() {
            for (m, gm) in g.iter().enumerate() {
                let val = rem[k + m].clone() - t.clone() * gm.clone();
                rem[k + m] = val;
            }
        }
        q[k] = t;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    q
}

/// A real root bracketed in `(lo, hi]`; `lo == hi` marks an exact rational root.
#[derive(Clone, Debug)]
pub(crate) struct IsolatedRoot {
    pub lo: Rational,
    pub hi: Rational,
}

impl IsolatedRoot {
    pub fn midpoint(&self) -> Rational {
        (self.lo.clone() + self.hi.clone()) / Rational::from_integer(BigInt::from(2))
    }

    pub fn width(&self) -> Rational {
        self.hi.clone() - self.lo.clone()
    }

    pub fn to_f64(&self) -> f64 {
        if self.lo == self.hi {
            self.lo.to_f64().unwrap_or(f64::NAN)
        } else {
            self.midpoint().to_f64().unwrap_or(f64::NAN)
        }
    }
}

/// Square-free part, Sturm chain, and isolated real roots of a polynomial.
pub(crate) struct RealRootIsolation {
    /// Primitive square-free part; its simple roots are the distinct roots
    /// of the input.
    pub square_free: IntPoly,
    pub roots: Vec<IsolatedRoot>,
}

/// Primitive square-free part of a nonconstant polynomial, along with the
/// Sturm chain of that part. When the input already has no repeated roots
/// its own chain is returned unchanged.
pub(crate) fn square_free_with_chain(p: IntPoly) -> (IntPoly, Vec<IntPoly>) {
    // The last nonzero element of the remainder sequence is gcd(p, p') up to
    // a constant; a nonconstant gcd means repeated roots.
    let chain0 = sturm_chain(&p);
    let last = chain0.last().expect("nonzero polynomial");
    if last.degree() > 0 && chain0.len() > 1 {
        let fr: Vec<Rational> = p.c.iter().map(|a| Rational::from_integer(a.clone())).collect();
        let gr: Vec<Rational> = last.c.iter().map(|a| Rational::from_integer(a.clone())).collect();
        let q = rat_div_exact(&fr, &gr);
        let sf = IntPoly::from_rationals(&q);
        let chain = sturm_chain(&sf);
        (sf, chain)
    } else {
        (p, chain0)
    }
}

/// Isolates all distinct real roots of the polynomial with the given rational
/// coefficients (ascending). The input must not be the zero polynomial.
pub(crate) fn isolate_real_roots(coeffs: &[Rational]) -> RealRootIsolation {
    let p = IntPoly::from_rationals(coeffs);
    assert!(!p.is_zero(), "zero polynomial has no isolated roots");
    if p.degree() == 0 {
        return RealRootIsolation { square_free: p, roots: Vec::new() };
    }
    let (square_free, chain) = square_free_with_chain(p);
    if square_free.degree() == 0 {
        return RealRootIsolation { square_free, roots: Vec::new() };
    }

    // Power-of-two enclosure keeps every bisection midpoint dyadic.
    let bound = square_free.cauchy_bound();
    let mut b = Rational::one();
    let two = Rational::from_integer(BigInt::from(2));
    while b < bound {
        b = b * two.clone();
    }

    let mut roots: Vec<IsolatedRoot> = Vec::new();
    // Work stack of (lo, hi, V(lo), V(hi)); V(lo) - V(hi) counts distinct
    // roots in (lo, hi], with roots at either endpoint attributed correctly
    // because the variation count is right-continuous.
    let lo = -b.clone();
    let hi = b;
    let vlo = variations(&chain, &lo);
    let vhi = variations(&chain, &hi);
    let mut stack = alloc::vec![(lo, hi, vlo, vhi)];
    let mut splits = 0usize;
    while let Some((lo, hi, vlo, vhi)) = stack.pop() {
        let count = vlo - vhi;
        if count == 0 {
            continue;
        }
        if count == 1 {
            roots.push(IsolatedRoot { lo, hi });
            continue;
        }
        splits += 1;
        assert!(splits < 1_000_000, "root isolation did not converge");
        let mid = (lo.clone() + hi.clone()) / two.clone();
        let vmid = variations(&chain, &mid);
        stack.push((lo, mid.clone(), vlo, vmid));
        stack.push((mid, hi, vmid, vhi));
    }
    roots.sort_by(|a, b| a.lo.cmp(&b.lo));
    RealRootIsolation { square_free, roots }
}

/// Shrinks the bracket until `width <= eps` by bisection on exact signs.
/// A simple root in `(lo, hi]` flips the sign exactly once, so only the sign
/// at the moving upper end is needed; landing on the root ends refinement
/// with an exact bracket of zero width.
pub(crate) fn refine_root(root: &mut IsolatedRoot, p: &IntPoly, eps: &Rational) {
    if root.lo == root.hi {
        return;
    }
    let s_hi = p.sign_at(&root.hi);
    if s_hi == 0 {
        root.lo = root.hi.clone();
        return;
    }
    while root.width() > *eps {
        let mid = root.midpoint();
        let s = p.sign_at(&mid);
        if s == 0 {
            root.lo = mid.clone();
            root.hi = mid;
            return;
        }
        if s == s_hi {
            root.hi = mid;
        } else {
            root.lo = mid;
        }
    }
}

/// Refines until the bracket is tighter than one part in 2^54 of the root's
/// magnitude (or absolute 2^-54 near zero), enough to read off the nearest f64.
pub(crate) fn refine_to_f64_precision(root: &mut IsolatedRoot, p: &IntPoly) {
    let one = Rational::one();
    let scale = {
        let m = root.hi.clone().abs().max(root.lo.clone().abs());
        if m > one { m } else { one }
    };
    let eps = scale / Rational::from_integer(BigInt::one() << 54);
    refine_root(root, p, &eps);
}

/// One exact-arithmetic Newton step from an f64 seed: the correction is
/// computed from exact values of `p` and `p'`, so an ill-conditioned float
/// Horner evaluation cannot drag a converged root away.
pub(crate) fn newton_polish(p: &IntPoly, dp: &IntPoly, x0: f64) -> f64 {
    let mut x = x0;
    for _ in 0..2 {
        let Some(xr) = Rational::from_float(x) else {
            return x;
        };
        let num = p.eval(&xr);
        if num.is_zero() {
            return x;
        }
        let den = dp.eval(&xr);
        if den.is_zero() {
            return x;
        }
        let step = (num / den).to_f64().unwrap_or(0.0);
        if !step.is_finite() {
            return x;
        }
        x -= step;
        if step.abs() <= x.abs() * 1e-17 {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;

    fn poly_from_roots(roots: &[Rational]) -> Vec<Rational> {
        // prod (x - r) expanded over rationals, ascending coefficients.
        let mut c = alloc::vec![Rational::one()];
        for r in roots {
            let mut next = alloc::vec![Rational::zero(); c.len() + 1];
            for (k, a) in c.iter().enumerate() {
                next[k + 1] += a.clone();
                next[k] -= r.clone() * a.clone();
            }
            c = next;
        }
        c
    }

    fn isolated_values(coeffs: &[Rational]) -> Vec<f64> {
        let iso = isolate_real_roots(coeffs);
        let dp = iso.square_free.derivative();
        iso.roots
            .iter()
            .map(|r| {
                let mut r = r.clone();
                refine_to_f64_precision(&mut r, &iso.square_free);
                newton_polish(&iso.square_free, &dp, r.to_f64())
            })
            .collect()
    }

    #[test]
    fn isolates_distinct_integer_roots() {
        let p = poly_from_roots(&[rational(1, 1), rational(2, 1), rational(3, 1)]);
        let vals = isolated_values(&p);
        assert_eq!(vals.len(), 3);
        for (v, want) in vals.iter().zip([1.0, 2.0, 3.0]) {
            assert!((v - want).abs() < 1e-14, "{v} vs {want}");
        }
    }

    #[test]
    fn repeated_roots_are_reported_once() {
        // x * (x - 4)^2
        let p = poly_from_roots(&[rational(0, 1), rational(4, 1), rational(4, 1)]);
        let vals = isolated_values(&p);
        assert_eq!(vals, alloc::vec![0.0, 4.0]);
    }

    #[test]
    fn rational_roots_are_found_exactly() {
        // (2x - 1)(3x + 5) = 6x^2 + 7x - 5
        let p = alloc::vec![rational(-5, 1), rational(7, 1), rational(6, 1)];
        let iso = isolate_real_roots(&p);
        assert_eq!(iso.roots.len(), 2);
        let mut refined = iso.roots.clone();
        for r in &mut refined {
            refine_root(r, &iso.square_free, &rational(1, 1_000_000_000));
        }
        // Bisection lands on the exact rational values or tight brackets of them.
        let lo = refined[0].midpoint();
        let hi = refined[1].midpoint();
        assert!((lo - rational(-5, 3)).abs() < rational(1, 1_000_000_000));
        assert!((hi - rational(1, 2)).abs() < rational(1, 1_000_000_000));
    }

    #[test]
    fn no_real_roots() {
        // x^2 + 1
        let p = alloc::vec![rational(1, 1), rational(0, 1), rational(1, 1)];
        assert!(isolate_real_roots(&p).roots.is_empty());
    }

    #[test]
    fn resolves_roots_closer_than_f64_spacing() {
        // (x - 1) * (x - 1 - 2^-80): the pair is 2^-80 apart, far below one
        // ulp at 1.0, yet exact isolation must yield two brackets whose
        // separation reproduces the gap.
        let tiny = Rational::new(BigInt::one(), BigInt::one() << 80);
        let r2 = Rational::one() + tiny.clone();
        let p = poly_from_roots(&[Rational::one(), r2]);
        let iso = isolate_real_roots(&p);
        assert_eq!(iso.roots.len(), 2);
        let mut a = iso.roots[0].clone();
        let mut b = iso.roots[1].clone();
        let eps = tiny.clone() / rational(1000, 1);
        refine_root(&mut a, &iso.square_free, &eps);
        refine_root(&mut b, &iso.square_free, &eps);
        let gap = b.midpoint() - a.midpoint();
        let rel = (gap.clone() - tiny.clone()).abs() / tiny;
        assert!(rel < rational(1, 100), "gap error too large");
    }

    #[test]
    fn exact_dyadic_roots_terminate_early() {
        // x(x - 4): isolation bisects exactly onto 0 and refinement onto 4.
        let p = poly_from_roots(&[rational(0, 1), rational(4, 1)]);
        let iso = isolate_real_roots(&p);
        let mut vals: Vec<f64> = iso
            .roots
            .iter()
            .map(|r| {
                let mut r = r.clone();
                refine_to_f64_precision(&mut r, &iso.square_free);
                r.to_f64()
            })
            .collect();
        vals.sort_by(f64::total_cmp);
        assert_eq!(vals, alloc::vec![0.0, 4.0]);
    }

    #[test]
    fn sturm_chain_counts_depend_only_on_sign_structure() {
        // Wilkinson-style stress: roots 1..=10 with huge coefficients.
        let roots: Vec<Rational> = (1..=10).map(|k| rational(k, 1)).collect();
        let p = poly_from_roots(&roots);
        let vals = isolated_values(&p);
        assert_eq!(vals.len(), 10);
        for (v, want) in vals.iter().zip((1..=10).map(|k| k as f64)) {
            assert!((v - want).abs() < 1e-9, "{v} vs {want}");
        }
    }
}
