//! Minimal dense complex linear algebra for the tiny matrices this crate
//! needs (2x2, 3x3, 4x4). Nothing here is tuned for size beyond that.

#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

pub type CMat<const N: usize> = [[Complex64; N]; N];

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn zeros<const N: usize>() -> CMat<N> {
    [[C_ZERO; N]; N]
}

pub fn identity<const N: usize>() -> CMat<N> {
    let mut m = zeros();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C_ONE;
    }
    m
}

pub fn matmul<const N: usize>(a: &CMat<N>, b: &CMat<N>) -> CMat<N> {
    let mut out = zeros();
    for i in 0..N {
        for k in 0..N {
            let aik = a[i][k];
            if aik == C_ZERO {
                continue;
            }
            for j in 0..N {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn adjoint<const N: usize>(a: &CMat<N>) -> CMat<N> {
    let mut out = zeros();
    for i in 0..N {
        for j in 0..N {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

pub fn trace<const N: usize>(a: &CMat<N>) -> Complex64 {
    (0..N).map(|i| a[i][i]).sum()
}

/// Kronecker product of two 2x2 matrices in the basis order
/// {|00>, |01>, |10>, |11>} (first factor is the slow index).
pub fn kron2(a: &CMat<2>, b: &CMat<2>) -> CMat<4> {
    let mut out = zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// <u| a |v> for column vectors u, v.
pub fn sandwich<const N: usize>(u: &[Complex64; N], a: &CMat<N>, v: &[Complex64; N]) -> Complex64 {
    let mut acc = C_ZERO;
    for i in 0..N {
        let mut row = C_ZERO;
        for j in 0..N {
            row += a[i][j] * v[j];
        }
        acc += u[i].conj() * row;
    }
    acc
}

/// Outer product |u><v|.
pub fn outer<const N: usize>(u: &[Complex64; N], v: &[Complex64; N]) -> CMat<N> {
    let mut out = zeros();
    for i in 0..N {
        for j in 0..N {
            out[i][j] = u[i] * v[j].conj();
        }
    }
    out
}

fn frobenius_norm<const N: usize>(a: &CMat<N>) -> f64 {
    a.iter()
        .flatten()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn max_off_diagonal<const N: usize>(a: &CMat<N>) -> (usize, usize, f64) {
    let mut best = (0, 1, 0.0);
    for i in 0..N {
        for j in (i + 1)..N {
            let mag = a[i][j].norm();
            if mag > best.2 {
                best = (i, j, mag);
            }
        }
    }
    best
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations,
/// returned in descending order.
///
/// Each rotation diagonalises the (p,q) block exactly: the off-diagonal
/// entry a_pq = |a_pq| e^{i phi} is first made real by the phase
/// diag(1, e^{-i phi}), then annihilated by the standard real rotation.
/// Convergence is quadratic; a handful of sweeps suffices at these sizes.
pub fn hermitian_eigenvalues<const N: usize>(m: &CMat<N>) -> [f64; N] {
    let mut a = *m;
    let scale = frobenius_norm(&a).max(f64::MIN_POSITIVE);
    let tol = 1e-15 * scale;

    for _sweep in 0..100 {
        let (p, q, mag) = max_off_diagonal(&a);
        if mag <= tol {
            break;
        }
        let beta = a[p][q];
        let phase = beta / beta.norm();
        let tau = (a[q][q].re - a[p][p].re) / (2.0 * mag);
        let t = if tau >= 0.0 {
            1.0 / (tau + (1.0 + tau * tau).sqrt())
        } else {
            -1.0 / (-tau + (1.0 + tau * tau).sqrt())
        };
        let c = 1.0 / (1.0 + t * t).sqrt();
        let s = t * c;

        // U is the identity outside the (p,q) plane.
        let mut u = identity::<N>();
        u[p][p] = Complex64::new(c, 0.0);
        u[p][q] = Complex64::new(s, 0.0);
        u[q][p] = -phase.conj() * s;
        u[q][q] = phase.conj() * c;

        a = matmul(&adjoint(&u), &matmul(&a, &u));
    }

    let mut eig = [0.0; N];
    for (i, e) in eig.iter_mut().enumerate() {
        *e = a[i][i].re;
    }
    eig.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eig
}
