//! Dense symmetric eigensolver: Householder tridiagonalization followed by
//! implicit QL with Wilkinson shifts. Classic EISPACK-style routines, ported
//! generically; eigenvector accumulation is optional since the large chains
//! only need eigenvalues.

use rayon::prelude::*;

use super::{hypot, Matrix};
use crate::scalar::Real;

/// Result of a symmetric eigensolve. Eigenvalues are sorted descending;
/// `vectors`, when requested, holds the matching eigenvector in each column.
#[derive(Clone, Debug)]
pub struct SymmetricEigen<F> {
    pub eigenvalues: Vec<F>,
    pub vectors: Option<Matrix<F>>,
}

/// Eigen-decomposition of a real symmetric matrix. The input is read as
/// symmetric (only its lower triangle is trusted).
pub fn symmetric_eigen<F: Real>(a: &Matrix<F>, want_vectors: bool) -> SymmetricEigen<F> {
    assert!(a.is_square(), "symmetric eigensolve needs a square matrix");
    let n = a.nrows();
    if n == 0 {
        return SymmetricEigen { eigenvalues: vec![], vectors: want_vectors.then(|| Matrix::zeros(0, 0)) };
    }
    let mut work = a.clone();
    let mut d = vec![F::zero(); n];
    let mut e = vec![F::zero(); n];
    tridiagonalize(&mut work, &mut d, &mut e, want_vectors);
    ql_implicit(&mut d, &mut e, want_vectors.then_some(&mut work));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).expect("non-NaN eigenvalues"));
    let eigenvalues: Vec<F> = order.iter().map(|&i| d[i]).collect();
    let vectors = want_vectors
        .then(|| Matrix::from_fn(n, n, |row, col| work[(row, order[col])]));
    SymmetricEigen { eigenvalues, vectors }
}

/// Householder reduction to tridiagonal form. On exit `d` holds the diagonal
/// and `e[0..n-1]` the subdiagonal (`e[i]` couples rows `i` and `i+1` after
/// the shift applied in [`ql_implicit`]); with `accumulate` the matrix is
/// overwritten by the orthogonal transform.
fn tridiagonalize<F: Real>(a: &mut Matrix<F>, d: &mut [F], e: &mut [F], accumulate: bool) {
    let n = a.nrows();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = F::zero();
        if l > 0 {
            let scale: F = a.row(i)[..=l].iter().map(|x| x.abs()).sum();
            if scale == F::zero() {
                e[i] = a[(i, l)];
            } else {
                for k in 0..=l {
                    let v = a[(i, k)] / scale;
                    a[(i, k)] = v;
                    h += v * v;
                }
                let f = a[(i, l)];
                let g = if f >= F::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[(i, l)] = f - g;

                // e[0..=l] <- A[0..=l] * v / h, exploiting stored symmetry.
                if l >= 64 {
                    let (head, tail) = split_row(a, i);
                    let hrow = &tail[..=l];
                    e[..=l]
                        .par_iter_mut()
                        .enumerate()
                        .for_each(|(j, ej)| {
                            let mut g = F::zero();
                            for k in 0..=j {
                                g += head[j * n + k] * hrow[k];
                            }
                            for k in (j + 1)..=l {
                                g += head[k * n + j] * hrow[k];
                            }
                            *ej = g / h;
                        });
                } else {
                    for j in 0..=l {
                        let mut g = F::zero();
                        for k in 0..=j {
                            g += a[(j, k)] * a[(i, k)];
                        }
                        for k in (j + 1)..=l {
                            g += a[(k, j)] * a[(i, k)];
                        }
                        e[j] = g / h;
                    }
                }
                if accumulate {
                    for j in 0..=l {
                        a[(j, i)] = a[(i, j)] / h;
                    }
                }
                let f: F = (0..=l).map(|j| e[j] * a[(i, j)]).sum();
                let hh = f / (h + h);
                for j in 0..=l {
                    e[j] -= hh * a[(i, j)];
                }
                // Rank-two update of the leading block, lower triangle only.
                if l >= 64 {
                    let (head, tail) = split_row(a, i);
                    let hrow = &tail[..=l];
                    let ee = &e[..=l];
                    head.par_chunks_mut(n)
                        .take(l + 1)
                        .enumerate()
                        .for_each(|(j, row)| {
                            let f = hrow[j];
                            let g = ee[j];
                            for k in 0..=j {
                                row[k] -= f * ee[k] + g * hrow[k];
                            }
                        });
                } else {
                    for j in 0..=l {
                        let f = a[(i, j)];
                        let g = e[j];
                        for k in 0..=j {
                            a[(j, k)] = a[(j, k)] - (f * e[k] + g * a[(i, k)]);
                        }
                    }
                }
            }
        } else {
            e[i] = a[(i, l)];
        }
        d[i] = h;
    }
    e[0] = F::zero();

    if accumulate {
        d[0] = F::zero();
        for i in 0..n {
            if i > 0 && d[i] != F::zero() {
                for j in 0..i {
                    let mut g = F::zero();
                    for k in 0..i {
                        g += a[(i, k)] * a[(k, j)];
                    }
                    for k in 0..i {
                        a[(k, j)] = a[(k, j)] - g * a[(k, i)];
                    }
                }
            }
            d[i] = a[(i, i)];
            a[(i, i)] = F::one();
            for j in 0..i {
                a[(j, i)] = F::zero();
                a[(i, j)] = F::zero();
            }
        }
    } else {
        for i in 0..n {
            d[i] = a[(i, i)];
        }
    }
    // Shift the subdiagonal down for the QL sweep's e[i] = offdiag(i, i+1).
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = F::zero();
}

/// Split the matrix buffer at the start of row `i`: rows `0..i` and row `i`.
fn split_row<F: Real>(a: &mut Matrix<F>, i: usize) -> (&mut [F], &[F]) {
    let n = a.ncols();
    let (head, tail) = a.data.split_at_mut(i * n);
    (head, &tail[..n])
}

/// Implicit-shift QL on a tridiagonal matrix, accumulating rotations into the
/// optional transform so its columns become eigenvectors.
fn ql_implicit<F: Real>(d: &mut [F], e: &mut [F], mut z: Option<&mut Matrix<F>>) {
    let n = d.len();
    let anorm: F = d
        .iter()
        .map(|x| x.abs())
        .chain(e.iter().map(|x| x.abs()))
        .fold(F::zero(), F::max);
    let tiny = F::eps() * anorm;
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                let thresh = (F::eps() * dd).max(tiny);
                if e[m].abs() <= thresh {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 60, "QL sweep failed to converge");
            let mut g = (d[l + 1] - d[l]) / (e[l] + e[l]);
            let mut r = hypot(g, F::one());
            let sign_r = if g >= F::zero() { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let mut s = F::one();
            let mut c = F::one();
            let mut p = F::zero();
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == F::zero() {
                    d[i + 1] -= p;
                    e[m] = F::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + (c + c) * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        f = z[(k, i + 1)];
                        z[(k, i + 1)] = s * z[(k, i)] + c * f;
                        z[(k, i)] = c * z[(k, i)] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = F::zero();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn two_by_two() {
        let a: Matrix<f64> = Matrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let eig = symmetric_eigen(&a, false);
        assert!(close(eig.eigenvalues[0], 1.0, 1e-14));
        assert!(close(eig.eigenvalues[1], -1.0, 1e-14));
    }

    #[test]
    fn clique_spectrum() {
        // Normalized adjacency of K_m: eigenvalues 1 and -1/(m-1) (m-1 times).
        for m in 3..=8 {
            let a: Matrix<f64> = Matrix::from_fn(m, m, |i, j| {
                if i == j {
                    0.0
                } else {
                    1.0 / (m as f64 - 1.0)
                }
            });
            let eig = symmetric_eigen(&a, true);
            assert!(close(eig.eigenvalues[0], 1.0, 1e-12));
            for k in 1..m {
                assert!(close(eig.eigenvalues[k], -1.0 / (m as f64 - 1.0), 1e-12));
            }
            // Residual check: A v = lambda v for every column.
            let v = eig.vectors.unwrap();
            for col in 0..m {
                let x: Vec<f64> = (0..m).map(|r| v[(r, col)]).collect();
                let ax = a.mul_vec(&x);
                for r in 0..m {
                    assert!(close(ax[r], eig.eigenvalues[col] * x[r], 1e-10));
                }
            }
        }
    }

    #[test]
    fn cycle_spectrum_matches_cosines() {
        // C_n normalized adjacency eigenvalues are cos(2*pi*j/n).
        let n = 5;
        let a: Matrix<f64> = Matrix::from_fn(n, n, |i, j| {
            if (i + 1) % n == j || (j + 1) % n == i {
                0.5
            } else {
                0.0
            }
        });
        let eig = symmetric_eigen(&a, false);
        let mut expect: Vec<f64> = (0..n)
            .map(|j| (2.0 * std::f64::consts::PI * j as f64 / n as f64).cos())
            .collect();
        expect.sort_by(|x, y| y.partial_cmp(x).unwrap());
        for (got, want) in eig.eigenvalues.iter().zip(expect) {
            assert!(close(*got, want, 1e-12), "{got} vs {want}");
        }
    }

    #[test]
    fn diagonal_and_repeated() {
        let a: Matrix<f64> = Matrix::from_rows(vec![
            vec![2.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, -3.0],
        ]);
        let eig = symmetric_eigen(&a, false);
        assert_eq!(eig.eigenvalues.len(), 3);
        assert!(close(eig.eigenvalues[0], 2.0, 1e-14));
        assert!(close(eig.eigenvalues[1], 2.0, 1e-14));
        assert!(close(eig.eigenvalues[2], -3.0, 1e-14));
    }

    #[test]
    fn random_symmetric_reconstruction() {
        // Deterministic pseudo-random symmetric matrix; trace and Frobenius
        // norm must match eigenvalue sums.
        let n = 40;
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut a: Matrix<f64> = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = next();
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        let eig = symmetric_eigen(&a, false);
        let trace: f64 = (0..n).map(|i| a[(i, i)]).sum();
        let sum: f64 = eig.eigenvalues.iter().sum();
        assert!(close(trace, sum, 1e-10));
        let frob: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        let sq: f64 = eig.eigenvalues.iter().map(|l| l * l).sum();
        assert!(close(frob, sq, 1e-9));
    }
}
