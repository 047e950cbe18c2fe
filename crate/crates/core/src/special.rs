//! Bessel, spherical Bessel and Legendre functions, and complex spherical harmonics.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::geometry::Direction;

/// `J_0(x) .. J_nmax(x)` by Miller's downward recurrence normalized with
/// `J_0 + 2 Σ J_2k = 1`.
pub fn bessel_j_sequence(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let top = nmax.max(ax.ceil() as usize);
    let mut start = top + 20 + (12.0 * ax.cbrt()) as usize;
    start += start % 2;
    let mut above = 0.0f64; // J_{k+1}
    let mut cur = 1e-300f64; // J_k
    let mut sum = 0.0;
    for k in (1..=start).rev() {
        let below = 2.0 * k as f64 / ax * cur - above;
        above = cur;
        cur = below;
        if cur.abs() > 1e250 {
            let s = 1e-250;
            cur *= s;
            above *= s;
            sum *= s;
            out.iter_mut().for_each(|v| *v *= s);
        }
        let idx = k - 1;
        if idx <= nmax {
            out[idx] = cur;
        }
        if idx == 0 {
            sum += cur;
        } else if idx % 2 == 0 {
            sum += 2.0 * cur;
        }
    }
    let inv = 1.0 / sum;
    for (n, v) in out.iter_mut().enumerate() {
        *v *= inv;
        if x < 0.0 && n % 2 == 1 {
            *v = -*v;
        }
    }
    out
}

/// Integer-order Bessel function of the first kind.
pub fn bessel_j(n: i64, x: f64) -> f64 {
    let m = n.unsigned_abs() as usize;
    let v = bessel_j_sequence(m, x)[m];
    if n < 0 && m % 2 == 1 {
        -v
    } else {
        v
    }
}

/// `J_n'(x) = (J_{n-1} - J_{n+1}) / 2`.
pub fn bessel_j_prime(n: i64, x: f64) -> f64 {
    0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x))
}

/// `J_n(x) / x` for `n != 0`, via `(J_{n-1} + J_{n+1}) / 2n`; regular at the origin.
pub fn bessel_j_over_x(n: i64, x: f64) -> f64 {
    assert!(n != 0, "J_0(x)/x is singular");
    (bessel_j(n - 1, x) + bessel_j(n + 1, x)) / (2.0 * n as f64)
}

/// Spherical Bessel `j_1`.
pub fn spherical_j1(x: f64) -> f64 {
    if x.abs() < 0.5 {
        x * j1_over_x_series(x)
    } else {
        let (s, c) = x.sin_cos();
        (s / x - c) / x
    }
}

/// `j_1(x) / x`, by series below 0.5.
pub fn spherical_j1_over_x(x: f64) -> f64 {
    if x.abs() < 0.5 {
        j1_over_x_series(x)
    } else {
        spherical_j1(x) / x
    }
}

fn j1_over_x_series(x: f64) -> f64 {
    // Σ (-x²/2)^k / (k! (2k+3)!!)
    let t = -0.5 * x * x;
    let mut term = 1.0 / 3.0;
    let mut sum = term;
    for k in 1..40 {
        term *= t / (k as f64 * (2 * k + 3) as f64);
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// Legendre polynomial `P_l(x)`.
pub fn legendre_p(l: usize, x: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..l {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `P_l(0)`: `(-1)^{l/2} (l-1)!!/l!!` for even `l`, zero for odd `l`.
pub fn legendre_p_at_zero(l: usize) -> f64 {
    if l % 2 == 1 {
        return 0.0;
    }
    (2..=l).step_by(2).fold(1.0, |v, k| -v * (k - 1) as f64 / k as f64)
}

/// Flat index of `(l, m)`, degree-major: `l² + l + m`.
pub fn lm_index(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m) as usize
}

/// Number of coefficients up to degree `lmax`.
pub fn lm_count(lmax: usize) -> usize {
    (lmax + 1) * (lmax + 1)
}

/// Orthonormal complex spherical harmonics `Y_lm(d)` for all `l ≤ lmax`, with the
/// Condon–Shortley phase, in `lm_index` order.
///
/// The `sin^m(polar) e^{imφ}` factor is formed as `(x + iy)^m`, so the poles need no care.
pub fn spherical_harmonics(lmax: usize, d: Direction) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); lm_count(lmax)];
    let z = d.z();
    let w = Complex64::new(d.x(), d.y());
    // pmm holds the normalized P_m^m / sin^m, including (-1)^m
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    let mut wm = Complex64::new(1.0, 0.0);
    for m in 0..=lmax {
        if m > 0 {
            pmm *= -((2 * m + 1) as f64 / (2 * m) as f64).sqrt();
            wm *= w;
        }
        let mf = m as f64;
        let mut p_lm2 = 0.0;
        let mut p_lm1 = pmm;
        for l in m..=lmax {
            let p = if l == m {
                pmm
            } else if l == m + 1 {
                z * (2.0 * mf + 3.0).sqrt() * pmm
            } else {
                let lf = l as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
                a * (z * p_lm1 - b * p_lm2)
            };
            if l > m {
                p_lm2 = p_lm1;
                p_lm1 = p;
            }
            let y = wm * p;
            out[lm_index(l, m as i64)] = y;
            if m > 0 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                out[lm_index(l, -(m as i64))] = y.conj() * sign;
            }
        }
    }
    out
}
