//! Dense LU solve with partial pivoting.

use super::Matrix;
use crate::scalar::Real;

/// Solve `A x = b`. Returns `None` when a pivot degenerates (singular to
/// working precision).
pub fn lu_solve<F: Real>(a: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    assert!(a.is_square());
    let n = a.nrows();
    assert_eq!(b.len(), n);
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for col in 0..n {
        let mut pivot = col;
        let mut best = lu[(col, col)].abs();
        for row in (col + 1)..n {
            let v = lu[(row, col)].abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best == F::zero() {
            return None;
        }
        if pivot != col {
            perm.swap(pivot, col);
            for j in 0..n {
                let t = lu[(col, j)];
                lu[(col, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = t;
            }
        }
        let inv = F::one() / lu[(col, col)];
        for row in (col + 1)..n {
            let factor = lu[(row, col)] * inv;
            lu[(row, col)] = factor;
            if factor == F::zero() {
                continue;
            }
            for j in (col + 1)..n {
                let upper = lu[(col, j)];
                lu[(row, j)] -= factor * upper;
            }
        }
    }

    // Forward then back substitution on the permuted right-hand side.
    let mut x: Vec<F> = perm.iter().map(|&p| b[p]).collect();
    for i in 1..n {
        let mut s = x[i];
        for j in 0..i {
            s -= lu[(i, j)] * x[j];
        }
        x[i] = s;
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in (i + 1)..n {
            s -= lu[(i, j)] * x[j];
        }
        x[i] = s / lu[(i, i)];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let a: Matrix<f64> = Matrix::from_rows(vec![
            vec![2.0, 1.0, -1.0],
            vec![-3.0, -1.0, 2.0],
            vec![-2.0, 1.0, 2.0],
        ]);
        let x = lu_solve(&a, &[8.0, -11.0, -3.0]).unwrap();
        let expect = [2.0, 3.0, -1.0];
        for (got, want) in x.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn reports_singularity() {
        let a: Matrix<f64> = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(lu_solve(&a, &[1.0, 2.0]).is_none());
    }
}
