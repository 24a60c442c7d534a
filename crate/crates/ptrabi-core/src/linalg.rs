//! Small dense linear-algebra kernels used by the spectral routines: an LU
//! determinant, a one-sided Jacobi SVD (we only ever need the smallest
//! singular pair, on matrices of dimension n+1 <= ~30), and a balanced
//! Hessenberg QR eigenvalue solver driving the companion-matrix root path.
//!
//! Everything here is f64; the exact arithmetic lives in `univariate` and
//! `poly`. Matrices are row-major `Vec<f64>` with explicit dimension.

use alloc::vec::Vec;

// Test builds are std, where the inherent float methods win; the minimal
// no_std library build takes sqrt/abs/hypot from the libm-backed trait.
// When a std-using crate sits anywhere in the dependency graph the inherent
// methods become visible here too and this import goes redundant, hence
// the allow.
#[cfg(not(test))]
#[allow(unused_imports)]
use num_traits::Float;

// Test builds are std (inherent float methods); the library build is no_std

#[inline]
fn at(a: &[f64], dim: usize, i: usize, j: usize) -> f64 {
    a[i * dim + j]
}

#[inline]
fn at_mut(a: &mut [f64], dim: usize, i: usize, j: usize) -> &mut f64 {
    &mut a[i * dim + j]
}

/// Determinant by LU factorization with partial pivoting. Consumes its copy
/// of the matrix.
pub(crate) fn lu_determinant(dim: usize, mut a: Vec<f64>) -> f64 {
    debug_assert_eq!(a.len(), dim * dim);
    let mut det = 1.0f64;
    for k in 0..dim {
        let mut p = k;
        let mut best = at(&a, dim, k, k).abs();
        for i in (k + 1)..dim {
            let v = at(&a, dim, i, k).abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if p != k {
            for j in 0..dim {
                a.swap(k * dim + j, p * dim + j);
            }
            det = -det;
        }
        let pivot = at(&a, dim, k, k);
        det *= pivot;
        for i in (k + 1)..dim {
            let f = at(&a, dim, i, k) / pivot;
            if f == 0.0 {
                continue;
            }
            for j in k..dim {
                let upper = at(&a, dim, k, j);
                *at_mut(&mut a, dim, i, j) -= f * upper;
            }
        }
    }
    det
}

/// `y = A x` for a square row-major matrix.
pub(crate) fn mat_vec(dim: usize, a: &[f64], x: &[f64]) -> Vec<f64> {
    let mut y = alloc::vec![0.0; dim];
    for i in 0..dim {
        let mut acc = 0.0;
        for j in 0..dim {
            acc += at(a, dim, i, j) * x[j];
        }
        y[i] = acc;
    }
    y
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Smallest singular value of a square matrix together with its right
/// singular vector, via one-sided Jacobi: rotate column pairs of a working
/// copy until all columns are mutually orthogonal, accumulating the
/// rotations into V. Column norms of the result are the singular values and
/// the columns of V the right singular vectors, so a null vector survives
/// even when the corresponding column collapses to zero.
pub(crate) fn smallest_singular_pair(dim: usize, a: &[f64]) -> (f64, Vec<f64>) {
    debug_assert_eq!(a.len(), dim * dim);
    if dim == 0 {
        return (0.0, Vec::new());
    }
    let mut u = a.to_vec();
    let mut v = alloc::vec![0.0; dim * dim];
    for i in 0..dim {
        v[i * dim + i] = 1.0;
    }
    let eps = 1e-15_f64;
    for _sweep in 0..60 {
        let mut off = false;
        for p in 0..dim.saturating_sub(1) {
            for q in (p + 1)..dim {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..dim {
                    let up = at(&u, dim, i, p);
                    let uq = at(&u, dim, i, q);
                    app += up * up;
                    aqq += uq * uq;
                    apq += up * uq;
                }
                if apq == 0.0 || apq.abs() <= eps * (app * aqq).sqrt() {
                    continue;
                }
                off = true;
                let zeta = (aqq - app) / (2.0 * apq);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..dim {
                    let up = at(&u, dim, i, p);
                    let uq = at(&u, dim, i, q);
                    *at_mut(&mut u, dim, i, p) = c * up - s * uq;
                    *at_mut(&mut u, dim, i, q) = s * up + c * uq;
                    let vp = at(&v, dim, i, p);
                    let vq = at(&v, dim, i, q);
                    *at_mut(&mut v, dim, i, p) = c * vp - s * vq;
                    *at_mut(&mut v, dim, i, q) = s * vp + c * vq;
                }
            }
        }
        if !off {
            break;
        }
    }
    let mut min_sigma = f64::INFINITY;
    let mut min_col = 0;
    for j in 0..dim {
        let mut norm = 0.0;
        for i in 0..dim {
            let e = at(&u, dim, i, j);
            norm += e * e;
        }
        let sigma = norm.sqrt();
        if sigma < min_sigma {
            min_sigma = sigma;
            min_col = j;
        }
    }
    let vec = (0..dim).map(|i| at(&v, dim, i, min_col)).collect();
    (min_sigma, vec)
}

/// Real eigenvalues of the monic polynomial with the given ascending
/// coefficients (leading coefficient need not be 1; it must be nonzero),
/// computed as eigenvalues of the balanced companion matrix by Francis
/// double-shift QR on the Hessenberg form. Returns only the eigenvalues the
/// QR iteration resolves as exactly real (1x1 blocks and nonnegative 2x2
/// discriminants), sorted ascending.
pub(crate) fn companion_real_roots(coeffs: &[f64]) -> Vec<f64> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    debug_assert!(lead != 0.0);
    if deg == 1 {
        return alloc::vec![-coeffs[0] / lead];
    }
    let n = deg;
    let mut a = alloc::vec![0.0f64; n * n];
    for i in 0..(n - 1) {
        a[(i + 1) * n + i] = 1.0;
    }
    for i in 0..n {
        a[i * n + (n - 1)] = -coeffs[i] / lead;
    }
    balance(n, &mut a);
    let eig = hqr(n, &mut a);
    let mut real: Vec<f64> = eig
        .into_iter()
        .filter_map(|(re, im)| (im == 0.0).then_some(re))
        .collect();
    real.sort_by(|x, y| x.partial_cmp(y).unwrap());
    real
}

/// Diagonal similarity balancing (radix-2) to equalize row and column norms;
/// leaves eigenvalues unchanged and greatly improves companion-matrix
/// conditioning.
fn balance(n: usize, a: &mut [f64]) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += at(a, n, j, i).abs();
                    r += at(a, n, i, j).abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                let mut c2 = c;
                while c2 < g {
                    f *= RADIX;
                    c2 *= sqrdx;
                }
                g = r * RADIX;
                while c2 > g {
                    f /= RADIX;
                    c2 /= sqrdx;
                }
                if (c2 + r) / f < 0.95 * s {
                    done = false;
                    let ginv = 1.0 / f;
                    for j in 0..n {
                        *at_mut(a, n, i, j) *= ginv;
                    }
                    for j in 0..n {
                        *at_mut(a, n, j, i) *= f;
                    }
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Francis double-shift QR iteration on an upper Hessenberg matrix; returns
/// all eigenvalues as (re, im) pairs. Destroys the matrix.
fn hqr(n: usize, a: &mut [f64]) -> Vec<(f64, f64)> {
    let mut wri: Vec<(f64, f64)> = alloc::vec![(0.0, 0.0); n];
    let mut anorm = 0.0f64;
    for i in 0..n {
        let lo = i.saturating_sub(1);
        for j in lo..n {
            anorm += at(a, n, i, j).abs();
        }
    }
    if anorm == 0.0 {
        return wri;
    }
    let mut nn: isize = n as isize - 1;
    let mut t = 0.0f64;
    'outer: while nn >= 0 {
        let mut its = 0;
        loop {
            // Find l: smallest index such that the subdiagonal entry below it
            // is negligible; rows l..=nn form the active block.
            let mut l = nn;
            while l >= 1 {
                let s0 = at(a, n, (l - 1) as usize, (l - 1) as usize).abs()
                    + at(a, n, l as usize, l as usize).abs();
                let s = if s0 == 0.0 { anorm } else { s0 };
                if at(a, n, l as usize, (l - 1) as usize).abs() + s == s {
                    *at_mut(a, n, l as usize, (l - 1) as usize) = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = at(a, n, nn as usize, nn as usize);
            if l == nn {
                // One real eigenvalue isolated.
                wri[nn as usize] = (x + t, 0.0);
                nn -= 1;
                continue 'outer;
            }
            let mut y = at(a, n, (nn - 1) as usize, (nn - 1) as usize);
            let mut w =
                at(a, n, nn as usize, (nn - 1) as usize) * at(a, n, (nn - 1) as usize, nn as usize);
            if l == nn - 1 {
                // 2x2 block: solve its quadratic directly.
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let z = p + if p >= 0.0 { z } else { -z };
                    wri[(nn - 1) as usize] = (x + z, 0.0);
                    wri[nn as usize] = if z != 0.0 { (x - w / z, 0.0) } else { (x + z, 0.0) };
                } else {
                    wri[nn as usize] = (x + p, -z);
                    wri[(nn - 1) as usize] = (x + p, z);
                }
                nn -= 2;
                continue 'outer;
            }
            assert!(its < 60, "eigenvalue iteration failed to converge");
            if its % 10 == 0 && its > 0 {
                // Exceptional shift to break cycling.
                t += x;
                for i in 0..=nn as usize {
                    *at_mut(a, n, i, i) -= x;
                }
                let s = at(a, n, nn as usize, (nn - 1) as usize).abs()
                    + at(a, n, (nn - 1) as usize, (nn - 2) as usize).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            // Look for two consecutive small subdiagonal elements to start
            // the implicit double shift as high in the block as possible.
            let mut m = nn - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = at(a, n, m as usize, m as usize);
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / at(a, n, (m + 1) as usize, m as usize)
                    + at(a, n, m as usize, (m + 1) as usize);
                q = at(a, n, (m + 1) as usize, (m + 1) as usize) - z - rr - ss;
                r = at(a, n, (m + 2) as usize, (m + 1) as usize);
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = at(a, n, m as usize, (m - 1) as usize).abs() * (q.abs() + r.abs());
                let v = p.abs()
                    * (at(a, n, (m - 1) as usize, (m - 1) as usize).abs()
                        + z.abs()
                        + at(a, n, (m + 1) as usize, (m + 1) as usize).abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                *at_mut(a, n, i as usize, (i - 2) as usize) = 0.0;
                if i != m + 2 {
                    *at_mut(a, n, i as usize, (i - 3) as usize) = 0.0;
                }
            }
            // Double QR sweep over rows m..=nn.
            for k in m..nn {
                if k != m {
                    p = at(a, n, k as usize, (k - 1) as usize);
                    q = at(a, n, (k + 1) as usize, (k - 1) as usize);
                    r = if k + 1 != nn { at(a, n, (k + 2) as usize, (k - 1) as usize) } else { 0.0 };
                    let x2 = p.abs() + q.abs() + r.abs();
                    if x2 != 0.0 {
                        p /= x2;
                        q /= x2;
                        r /= x2;
                    }
                    x = x2;
                }
                let mut s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            let e = at_mut(a, n, k as usize, (k - 1) as usize);
                            *e = -*e;
                        }
                    } else {
                        *at_mut(a, n, k as usize, (k - 1) as usize) = -s * x;
                    }
                    p += s;
                    let x3 = p / s;
                    let y3 = q / s;
                    let z3 = r / s;
                    q /= p;
                    r /= p;
                    for j in (k as usize)..=(nn as usize) {
                        let mut pp = at(a, n, k as usize, j) + q * at(a, n, (k + 1) as usize, j);
                        if k + 1 != nn {
                            pp += r * at(a, n, (k + 2) as usize, j);
                            *at_mut(a, n, (k + 2) as usize, j) -= pp * z3;
                        }
                        *at_mut(a, n, (k + 1) as usize, j) -= pp * y3;
                        *at_mut(a, n, k as usize, j) -= pp * x3;
                    }
                    let mmin = if nn < k + 3 { nn } else { k + 3 };
                    for i in (l as usize)..=(mmin as usize) {
                        let mut pp =
                            x3 * at(a, n, i, k as usize) + y3 * at(a, n, i, (k + 1) as usize);
                        if k + 1 != nn {
                            pp += z3 * at(a, n, i, (k + 2) as usize);
                            *at_mut(a, n, i, (k + 2) as usize) -= pp * r;
                        }
                        *at_mut(a, n, i, (k + 1) as usize) -= pp * q;
                        *at_mut(a, n, i, k as usize) -= pp;
                    }
                }
            }
        }
    }
    wri
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_determinant_matches_cofactor_expansion() {
        // det [[2,0,1],[1,3,2],[1,1,1]] = 2(3-2) - 0 + 1(1-3) = 0.
        let a = alloc::vec![2.0, 0.0, 1.0, 1.0, 3.0, 2.0, 1.0, 1.0, 1.0];
        assert!(lu_determinant(3, a).abs() < 1e-14);
        let b = alloc::vec![2.0, 1.0, 1.0, 3.0];
        assert!((lu_determinant(2, b) - 5.0).abs() < 1e-14);
    }

    #[test]
    fn lu_determinant_needs_pivoting() {
        // Leading zero pivot forces a row swap.
        let a = alloc::vec![0.0, 1.0, 1.0, 0.0];
        assert!((lu_determinant(2, a) - (-1.0)).abs() < 1e-14);
    }

    #[test]
    fn jacobi_finds_null_vector_of_singular_matrix() {
        let a = alloc::vec![1.0, 1.0, 1.0, 1.0];
        let (sigma, v) = smallest_singular_pair(2, &a);
        assert!(sigma < 1e-12);
        // Null vector proportional to (1, -1)/sqrt2.
        assert!((v[0] + v[1]).abs() < 1e-12);
        assert!((norm2(&v) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_smallest_singular_value_of_diagonal() {
        let a = alloc::vec![3.0, 0.0, 0.0, 0.0, 1e-12, 0.0, 0.0, 0.0, 2.0];
        let (sigma, v) = smallest_singular_pair(3, &a);
        assert!((sigma - 1e-12).abs() < 1e-24);
        assert!(v[1].abs() > 0.999_999);
    }

    #[test]
    fn jacobi_on_nonsymmetric_matrix() {
        // sigma_min(A) = sqrt of smallest eigenvalue of A^T A; check the
        // residual definition instead of a closed form: ||A v|| = sigma.
        let a = alloc::vec![1.0, 2.0, 0.0, 3.0, -1.0, 4.0, 2.0, 2.0, 2.0];
        let (sigma, v) = smallest_singular_pair(3, &a);
        let av = mat_vec(3, &a, &v);
        assert!((norm2(&av) - sigma).abs() < 1e-10 * (1.0 + sigma));
    }

    #[test]
    fn companion_roots_of_cubic() {
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6.
        let roots = companion_real_roots(&[-6.0, 11.0, -6.0, 1.0]);
        assert_eq!(roots.len(), 3);
        for (got, want) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn companion_skips_complex_pairs() {
        // x^2 + 1 and (x^2+4)(x-5).
        assert!(companion_real_roots(&[1.0, 0.0, 1.0]).is_empty());
        let roots = companion_real_roots(&[-20.0, 4.0, -5.0, 1.0]);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 5.0).abs() < 1e-9);
    }

    #[test]
    fn companion_handles_wide_coefficient_range() {
        // Roots 1..=10; balancing keeps these accurate despite coefficients
        // spanning seven orders of magnitude.
        let mut c = alloc::vec![1.0f64];
        for r in 1..=10 {
            let mut next = alloc::vec![0.0f64; c.len() + 1];
            for (k, v) in c.iter().enumerate() {
                next[k] -= (r as f64) * v;
                next[k + 1] += v;
            }
            c = next;
        }
        let roots = companion_real_roots(&c);
        assert_eq!(roots.len(), 10);
        for (got, want) in roots.iter().zip((1..=10).map(|r| r as f64)) {
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
    }

    #[test]
    fn companion_linear_and_constant_edge_cases() {
        assert!(companion_real_roots(&[7.0]).is_empty());
        let r = companion_real_roots(&[-15.0, 3.0]);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 5.0).abs() < 1e-14);
    }
}
