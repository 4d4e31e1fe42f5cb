//! Eigenvalues of a general real matrix: Hessenberg reduction by elimination
//! with pivoting, then Francis double-shift QR. Only eigenvalues are
//! produced, as complex pairs `(re, im)`.

use super::Matrix;
use crate::scalar::Real;

/// Complex eigenvalues of a general square real matrix, sorted by descending
/// real part (ties by descending imaginary part).
pub fn general_eigenvalues<F: Real>(a: &Matrix<F>) -> Vec<(F, F)> {
    assert!(a.is_square());
    let n = a.nrows();
    if n == 0 {
        return vec![];
    }
    let mut h = a.clone();
    hessenberg(&mut h);
    let mut out = francis_qr(&mut h);
    out.sort_by(|x, y| {
        y.0.partial_cmp(&x.0)
            .unwrap()
            .then(y.1.partial_cmp(&x.1).unwrap())
    });
    out
}

/// Reduce to upper Hessenberg form by stabilized elementary eliminations.
fn hessenberg<F: Real>(a: &mut Matrix<F>) {
    let n = a.nrows();
    if n < 3 {
        return;
    }
    for m in 1..(n - 1) {
        let mut x = F::zero();
        let mut pivot = m;
        for j in m..n {
            if a[(j, m - 1)].abs() > x.abs() {
                x = a[(j, m - 1)];
                pivot = j;
            }
        }
        if pivot != m {
            for j in (m - 1)..n {
                let t = a[(pivot, j)];
                a[(pivot, j)] = a[(m, j)];
                a[(m, j)] = t;
            }
            for j in 0..n {
                let t = a[(j, pivot)];
                a[(j, pivot)] = a[(j, m)];
                a[(j, m)] = t;
            }
        }
        if x != F::zero() {
            for i in (m + 1)..n {
                let mut y = a[(i, m - 1)];
                if y != F::zero() {
                    y /= x;
                    a[(i, m - 1)] = y;
                    for j in m..n {
                        let v = a[(m, j)];
                        a[(i, j)] -= y * v;
                    }
                    for j in 0..n {
                        let v = a[(j, i)];
                        a[(j, m)] += y * v;
                    }
                }
            }
        }
    }
    // The multipliers parked below the subdiagonal are not part of the
    // Hessenberg matrix.
    for i in 2..n {
        for j in 0..(i - 1) {
            a[(i, j)] = F::zero();
        }
    }
}

fn sign_of<F: Real>(magnitude: F, sign: F) -> F {
    if sign >= F::zero() {
        magnitude.abs()
    } else {
        -magnitude.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (destroyed).
fn francis_qr<F: Real>(a: &mut Matrix<F>) -> Vec<(F, F)> {
    let n = a.nrows();
    let mut eig: Vec<(F, F)> = Vec::with_capacity(n);
    let mut anorm = F::zero();
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }
    if anorm == F::zero() {
        return vec![(F::zero(), F::zero()); n];
    }

    let mut nn = n as isize - 1;
    let mut t = F::zero();
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            // Look for a negligible subdiagonal element.
            let mut l = nn;
            while l >= 1 {
                let s = a[(l as usize - 1, l as usize - 1)].abs() + a[(l as usize, l as usize)].abs();
                let s = if s == F::zero() { anorm } else { s };
                if a[(l as usize, l as usize - 1)].abs() <= F::eps() * s {
                    a[(l as usize, l as usize - 1)] = F::zero();
                    break;
                }
                l -= 1;
            }
            let x = a[(nn as usize, nn as usize)];
            if l == nn {
                eig.push((x + t, F::zero()));
                nn -= 1;
                break;
            }
            let y = a[(nn as usize - 1, nn as usize - 1)];
            let w = a[(nn as usize, nn as usize - 1)] * a[(nn as usize - 1, nn as usize)];
            if l == nn - 1 {
                let p = (y - x) * F::from_f64_exact(0.5);
                let q = p * p + w;
                let z = q.abs().sqrt();
                let x = x + t;
                if q >= F::zero() {
                    let z = p + sign_of(z, p);
                    let first = x + z;
                    let second = if z == F::zero() { first } else { x - w / z };
                    eig.push((first, F::zero()));
                    eig.push((second, F::zero()));
                } else {
                    eig.push((x + p, z));
                    eig.push((x + p, -z));
                }
                nn -= 2;
                break;
            }
            // No root isolated yet: one double QR step.
            assert!(its < 60, "QR iteration failed to converge");
            let (mut x, mut y, mut w) = (x, y, w);
            if its == 10 || its == 20 || its == 30 || its == 40 || its == 50 {
                // Exceptional shift.
                t += x;
                for i in 0..=(nn as usize) {
                    let d = a[(i, i)];
                    a[(i, i)] = d - x;
                }
                let s = a[(nn as usize, nn as usize - 1)].abs()
                    + a[(nn as usize - 1, nn as usize - 2)].abs();
                x = F::from_f64_exact(0.75) * s;
                y = x;
                w = F::from_f64_exact(-0.4375) * s * s;
            }
            its += 1;

            let mut m = nn - 2;
            let (mut p, mut q, mut r) = (F::zero(), F::zero(), F::zero());
            while m >= l {
                let mu = m as usize;
                let z = a[(mu, mu)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[(mu + 1, mu)] + a[(mu, mu + 1)];
                q = a[(mu + 1, mu + 1)] - z - rr - ss;
                r = a[(mu + 2, mu + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[(mu, mu - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[(mu - 1, mu - 1)].abs() + z.abs() + a[(mu + 1, mu + 1)].abs());
                if u <= F::eps() * v {
                    break;
                }
                m -= 1;
            }
            for i in (m as usize + 2)..=(nn as usize) {
                a[(i, i - 2)] = F::zero();
                if i > m as usize + 2 {
                    a[(i, i - 3)] = F::zero();
                }
            }
            for k in (m as usize)..(nn as usize) {
                if k != m as usize {
                    p = a[(k, k - 1)];
                    q = a[(k + 1, k - 1)];
                    r = if k != nn as usize - 1 {
                        a[(k + 2, k - 1)]
                    } else {
                        F::zero()
                    };
                    x = p.abs() + q.abs() + r.abs();
                    if x != F::zero() {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign_of((p * p + q * q + r * r).sqrt(), p);
                if s == F::zero() {
                    continue;
                }
                if k == m as usize {
                    if l != m {
                        a[(k, k - 1)] = -a[(k, k - 1)];
                    }
                } else {
                    a[(k, k - 1)] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in k..=(nn as usize) {
                    let mut pp = a[(k, j)] + q * a[(k + 1, j)];
                    if k != nn as usize - 1 {
                        pp += r * a[(k + 2, j)];
                        let v = a[(k + 2, j)];
                        a[(k + 2, j)] = v - pp * z;
                    }
                    let v1 = a[(k + 1, j)];
                    a[(k + 1, j)] = v1 - pp * y;
                    let v0 = a[(k, j)];
                    a[(k, j)] = v0 - pp * x;
                }
                let mmin = (nn as usize).min(k + 3);
                for i in (l as usize)..=mmin {
                    let mut pp = x * a[(i, k)] + y * a[(i, k + 1)];
                    if k != nn as usize - 1 {
                        pp += z * a[(i, k + 2)];
                        let v = a[(i, k + 2)];
                        a[(i, k + 2)] = v - pp * r;
                    }
                    let v1 = a[(i, k + 1)];
                    a[(i, k + 1)] = v1 - pp * q;
                    let v0 = a[(i, k)];
                    a[(i, k)] = v0 - pp;
                }
            }
        }
    }
    eig
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::symmetric_eigen;

    #[test]
    fn triangular_eigenvalues_are_diagonal() {
        let a: Matrix<f64> = Matrix::from_rows(vec![
            vec![1.0, 5.0, -2.0],
            vec![0.0, 0.7, 3.0],
            vec![0.0, 0.0, -0.4],
        ]);
        let eig = general_eigenvalues(&a);
        let expect = [1.0, 0.7, -0.4];
        for ((re, im), want) in eig.iter().zip(expect) {
            assert!((re - want).abs() < 1e-10);
            assert!(im.abs() < 1e-12);
        }
    }

    #[test]
    fn cyclic_permutation_has_unit_roots() {
        // Directed 3-cycle: eigenvalues are the cube roots of unity.
        let a: Matrix<f64> = Matrix::from_rows(vec![
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
        ]);
        let eig = general_eigenvalues(&a);
        assert!((eig[0].0 - 1.0).abs() < 1e-10 && eig[0].1.abs() < 1e-10);
        let im: f64 = 3f64.sqrt() / 2.0;
        assert!((eig[1].0 + 0.5).abs() < 1e-10 && (eig[1].1 - im).abs() < 1e-10);
        assert!((eig[2].0 + 0.5).abs() < 1e-10 && (eig[2].1 + im).abs() < 1e-10);
    }

    #[test]
    fn agrees_with_symmetric_solver() {
        let n = 12;
        let mut seed = 42u64;
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
        let sym = symmetric_eigen(&a, false);
        let gen = general_eigenvalues(&a);
        for ((re, im), want) in gen.iter().zip(sym.eigenvalues) {
            assert!(im.abs() < 1e-8);
            assert!((re - want).abs() < 1e-8, "{re} vs {want}");
        }
    }
}
