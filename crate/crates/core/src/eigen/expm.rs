//! Dense real matrix exponential (scaling and squaring, degree-13 Padé).
//!
//! Matrices are row-major `n*n` slices; sizes here are at most 12.

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

fn norm1(a: &[f64], n: usize) -> f64 {
    (0..n).map(|j| (0..n).map(|i| a[i * n + j].abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Solves `A X = B` in place (`B` overwritten by `X`) with partial pivoting.
fn solve(mut a: Vec<f64>, b: &mut [f64], n: usize) {
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .unwrap();
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
                b.swap(col * n + j, piv * n + j);
            }
        }
        let d = a[col * n + col];
        for i in col + 1..n {
            let f = a[i * n + col] / d;
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                a[i * n + j] -= f * a[col * n + j];
            }
            for j in 0..n {
                b[i * n + j] -= f * b[col * n + j];
            }
        }
    }
    for col in (0..n).rev() {
        let d = a[col * n + col];
        for j in 0..n {
            let mut s = b[col * n + j];
            for k in col + 1..n {
                s -= a[col * n + k] * b[k * n + j];
            }
            b[col * n + j] = s / d;
        }
    }
}

/// `exp(A)` for a real `n x n` matrix.
pub fn expm(a: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    let nrm = norm1(a, n);
    let s = if nrm > THETA13 { (nrm / THETA13).log2().ceil() as i32 } else { 0 };
    let scale = 2f64.powi(-s);
    let a: Vec<f64> = a.iter().map(|x| x * scale).collect();

    let a2 = matmul(&a, &a, n);
    let a4 = matmul(&a2, &a2, n);
    let a6 = matmul(&a4, &a2, n);
    let b = &PADE13;
    let mut u_inner = vec![0.0; n * n];
    let mut v = vec![0.0; n * n];
    let mut w1 = vec![0.0; n * n];
    let mut z1 = vec![0.0; n * n];
    for i in 0..n * n {
        w1[i] = b[13] * a6[i] + b[11] * a4[i] + b[9] * a2[i];
        z1[i] = b[12] * a6[i] + b[10] * a4[i] + b[8] * a2[i];
    }
    let w1 = matmul(&a6, &w1, n);
    let z1 = matmul(&a6, &z1, n);
    for i in 0..n * n {
        u_inner[i] = w1[i] + b[7] * a6[i] + b[5] * a4[i] + b[3] * a2[i];
        v[i] = z1[i] + b[6] * a6[i] + b[4] * a4[i] + b[2] * a2[i];
    }
    for i in 0..n {
        u_inner[i * n + i] += b[1];
        v[i * n + i] += b[0];
    }
    let u = matmul(&a, &u_inner, n);
    let p: Vec<f64> = (0..n * n).map(|i| v[i] - u[i]).collect();
    let mut r: Vec<f64> = (0..n * n).map(|i| v[i] + u[i]).collect();
    solve(p, &mut r, n);
    for _ in 0..s {
        r = matmul(&r, &r, n);
    }
    r
}

/// `exp(A)`, `φ1(A)` and `φ2(A)` from one exponential of the block matrix
/// `[[A, I, 0], [0, 0, I], [0, 0, 0]]`, so that `φ1(z) = (e^z - 1)/z` and
/// `φ2(z) = (e^z - 1 - z)/z²`.
pub fn expm_phi(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let m = 3 * n;
    let mut big = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            big[i * m + j] = a[i * n + j];
        }
        big[i * m + n + i] = 1.0;
        big[(n + i) * m + 2 * n + i] = 1.0;
    }
    let e = expm(&big, m);
    let block = |c0: usize| -> Vec<f64> {
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = e[i * m + c0 + j];
            }
        }
        out
    };
    (block(0), block(n), block(2 * n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_diagonal() {
        let z = expm(&[0.0; 9], 3);
        assert_eq!(z, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let d = expm(&[-2.0, 0.0, 0.0, 30.0], 2);
        assert!((d[0] - (-2f64).exp()).abs() < 1e-15);
        assert!((d[3] - 30f64.exp()).abs() < 1e-12 * 30f64.exp());
    }

    #[test]
    fn rotation_generator() {
        for t in [0.1, 1.0, 17.0, 250.0] {
            let r = expm(&[0.0, -t, t, 0.0], 2);
            assert!((r[0] - t.cos()).abs() < 1e-13 * t.max(1.0));
            assert!((r[2] - t.sin()).abs() < 1e-13 * t.max(1.0));
        }
    }

    #[test]
    fn nilpotent_block() {
        let r = expm(&[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0], 3);
        assert_eq!(r[2], 0.5);
        assert_eq!(r[1], 1.0);
    }

    #[test]
    fn phi_functions_scalar() {
        for z in [-3.0, -1e-3, 0.5, 2.0] {
            let (e, p1, p2) = expm_phi(&[z], 1);
            let ez: f64 = f64::exp(z);
            assert!((e[0] - ez).abs() < 1e-14 * ez.max(1.0));
            assert!((p1[0] - (ez - 1.0) / z).abs() < 1e-12);
            assert!((p2[0] - (ez - 1.0 - z) / (z * z)).abs() < 1e-7);
        }
        let (_, p1, p2) = expm_phi(&[0.0], 1);
        assert!((p1[0] - 1.0).abs() < 1e-15 && (p2[0] - 0.5).abs() < 1e-15);
    }
}
