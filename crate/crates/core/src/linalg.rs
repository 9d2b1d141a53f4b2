//! Small dense helpers on top of `faer`.
//!
//! The superoperators built in this crate are stored densely but are
//! almost always very sparse (Kronecker products of ladder operators with
//! the identity). [`mul`] exploits that by skipping zero entries of the
//! right factor, which turns most compositions from O(N^3) into
//! O(nnz * N).

use faer::{Mat, MatRef};
use num_complex::Complex64 as C64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Fraction of nonzeros in the right factor below which [`mul`] takes the
/// column-scatter path instead of a dense GEMM.
const SPARSE_DENSITY: f64 = 0.1;

pub fn identity(n: usize) -> Mat<C64> {
    Mat::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
}

pub fn kron(a: MatRef<'_, C64>, b: MatRef<'_, C64>) -> Mat<C64> {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    let mut out = Mat::zeros(ar * br, ac * bc);
    for j1 in 0..ac {
        for i1 in 0..ar {
            let s = a[(i1, j1)];
            if s == ZERO {
                continue;
            }
            for j2 in 0..bc {
                for i2 in 0..br {
                    let t = b[(i2, j2)];
                    if t != ZERO {
                        out[(i1 * br + i2, j1 * bc + j2)] = s * t;
                    }
                }
            }
        }
    }
    out
}

fn nnz(m: MatRef<'_, C64>) -> usize {
    let mut count = 0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if m[(i, j)] != ZERO {
                count += 1;
            }
        }
    }
    count
}

/// Matrix product `a * b`, sparse-aware in `b`.
pub fn mul(a: MatRef<'_, C64>, b: MatRef<'_, C64>) -> Mat<C64> {
    assert_eq!(a.ncols(), b.nrows(), "inner dimensions must agree");
    let total = (b.nrows() * b.ncols()).max(1);
    if (nnz(b) as f64) > SPARSE_DENSITY * total as f64 {
        return a * b;
    }
    let rows = a.nrows();
    let mut out = Mat::<C64>::zeros(rows, b.ncols());
    let mut acc = vec![ZERO; rows];
    for j in 0..b.ncols() {
        let mut touched = false;
        for k in 0..b.nrows() {
            let s = b[(k, j)];
            if s == ZERO {
                continue;
            }
            touched = true;
            let col = a.col(k);
            for (i, x) in col.iter().enumerate() {
                acc[i] += x * s;
            }
        }
        if touched {
            for (i, x) in acc.iter_mut().enumerate() {
                out[(i, j)] = *x;
                *x = ZERO;
            }
        }
    }
    out
}

pub fn scaled(a: MatRef<'_, C64>, s: C64) -> Mat<C64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s)
}

/// `acc += s * a`, skipping zero entries.
pub fn axpy(acc: &mut Mat<C64>, s: C64, a: MatRef<'_, C64>) {
    if s == ZERO {
        return;
    }
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let x = a[(i, j)];
            if x != ZERO {
                acc[(i, j)] += s * x;
            }
        }
    }
}

pub fn max_abs(a: MatRef<'_, C64>) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

/// Max-norm of `a` over the selected columns only.
pub fn max_abs_columns(a: MatRef<'_, C64>, cols: &[usize]) -> f64 {
    let mut m = 0.0f64;
    for &j in cols {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

pub fn max_abs_diff(a: MatRef<'_, C64>, b: MatRef<'_, C64>) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

pub fn matvec(a: MatRef<'_, C64>, x: &[C64]) -> Vec<C64> {
    assert_eq!(a.ncols(), x.len());
    let mut y = vec![ZERO; a.nrows()];
    for (k, &s) in x.iter().enumerate() {
        if s == ZERO {
            continue;
        }
        for (i, v) in a.col(k).iter().enumerate() {
            y[i] += v * s;
        }
    }
    y
}

/// Row vector times matrix.
pub fn vecmat(x: &[C64], a: MatRef<'_, C64>) -> Vec<C64> {
    assert_eq!(a.nrows(), x.len());
    (0..a.ncols())
        .map(|j| a.col(j).iter().zip(x).fold(ZERO, |acc, (v, s)| acc + v * s))
        .collect()
}

pub fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).fold(ZERO, |acc, (a, b)| acc + a * b)
}

pub fn max_abs_vec(x: &[C64]) -> f64 {
    x.iter().fold(0.0f64, |m, v| m.max(v.norm()))
}

pub fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(rows: usize, cols: usize, seed: usize, sparse: bool) -> Mat<C64> {
        Mat::from_fn(rows, cols, |i, j| {
            let h = (i * 31 + j * 17 + seed * 7) % 13;
            if sparse && h > 2 {
                ZERO
            } else {
                C64::new(h as f64 - 6.0, ((i + 2 * j + seed) % 5) as f64 - 2.0)
            }
        })
    }

    #[test]
    fn sparse_path_matches_dense_gemm() {
        let a = sample(12, 9, 1, false);
        let b = sample(9, 11, 2, true);
        let fast = mul(a.as_ref(), b.as_ref());
        let dense = &a * &b;
        assert!(max_abs_diff(fast.as_ref(), dense.as_ref()) < 1e-12);
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let k = kron(identity(3).as_ref(), identity(4).as_ref());
        assert_eq!(max_abs_diff(k.as_ref(), identity(12).as_ref()), 0.0);
    }

    #[test]
    fn kron_mixed_product_rule() {
        let (a, b) = (sample(3, 3, 3, false), sample(2, 2, 4, false));
        let (c, d) = (sample(3, 3, 5, false), sample(2, 2, 6, false));
        let lhs = &kron(a.as_ref(), b.as_ref()) * &kron(c.as_ref(), d.as_ref());
        let ac = &a * &c;
        let bd = &b * &d;
        let rhs = kron(ac.as_ref(), bd.as_ref());
        assert!(max_abs_diff(lhs.as_ref(), rhs.as_ref()) < 1e-10);
    }

    #[test]
    fn matvec_and_vecmat_agree_with_gemm() {
        let a = sample(5, 4, 9, false);
        let x: Vec<C64> = (0..4).map(|k| C64::new(k as f64, 1.0)).collect();
        let y = matvec(a.as_ref(), &x);
        let xm = Mat::from_fn(4, 1, |i, _| x[i]);
        let ym = &a * &xm;
        for i in 0..5 {
            assert!((y[i] - ym[(i, 0)]).norm() < 1e-12);
        }
        let z: Vec<C64> = (0..5).map(|k| C64::new(1.0, k as f64)).collect();
        let w = vecmat(&z, a.as_ref());
        let zm = Mat::from_fn(1, 5, |_, j| z[j]);
        let wm = &zm * &a;
        for j in 0..4 {
            assert!((w[j] - wm[(0, j)]).norm() < 1e-12);
        }
    }
}
