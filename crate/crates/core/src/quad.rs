//! Quadrature rules shared by the majorant integrals and the sphere averages.

use nalgebra::{DMatrix, SymmetricEigen};

/// Adaptive Simpson integration of `f` over `[a, b]`.
///
/// Subdivides until the Richardson-corrected local error drops below `tol`
/// (split between halves) or `max_depth` is reached.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Gauss–Jacobi rule on `[-1, 1]` for the symmetric weight `(1 - t²)^alpha`.
///
/// Nodes and weights come from the Golub–Welsch eigenproblem of the Jacobi
/// matrix. The rule with `order` nodes is exact for polynomials of degree
/// `2·order − 1` against the weight.
pub fn gauss_gegenbauer(order: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(order > 0, "quadrature order must be positive");
    assert!(alpha > -1.0);
    let a = alpha;
    // mu0 = ∫ (1 - t²)^a dt = B(1/2, a + 1)
    let mu0 = (ln_gamma(0.5) + ln_gamma(a + 1.0) - ln_gamma(a + 1.5)).exp();
    if order == 1 {
        return (vec![0.0], vec![mu0]);
    }
    let mut jac = DMatrix::<f64>::zeros(order, order);
    for k in 1..order {
        // monic Jacobi(a, a) recurrence: b_k² = 4k(k+2a)(k+a)² / ((2k+2a)²(2k+2a+1)(2k+2a-1))
        let kf = k as f64;
        let s = 2.0 * kf + 2.0 * a;
        let num = 4.0 * kf * (kf + 2.0 * a) * (kf + a) * (kf + a);
        let den = s * s * (s + 1.0) * (s - 1.0);
        let off = (num / den).sqrt();
        jac[(k, k - 1)] = off;
        jac[(k - 1, k)] = off;
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.into_iter().unzip()
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    gauss_gegenbauer(order, 0.0)
}

/// Lanczos approximation of `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}
