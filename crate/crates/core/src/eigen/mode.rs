use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multipliers::{gamma_symbol, norm_f2, PhysParams};
use crate::spectral::norm2;

pub type Mat4 = [[f64; 4]; 4];
pub type CMat4 = [[Complex64; 4]; 4];
type CMat3 = [[Complex64; 3]; 3];
type Mat3 = [[f64; 3]; 3];

const CZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Eigenvector-matrix condition above which a mode is flagged.
pub const CONDITION_LIMIT: f64 = 1e8;

/// The per-mode operator `B(ξ, ε) = L̂ - (1/ε) P̂ Â` together with `ξ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeMatrix {
    pub xi: [f64; 3],
    pub b: Mat4,
}

/// Right-hand rule matrix of `U ↦ 𝒜U`.
fn a_hat(froude: f64) -> Mat4 {
    let f = 1.0 / froude;
    [[0.0, -1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, f], [0.0, 0.0, -f, 0.0]]
}

pub fn build_b(xi: [f64; 3], p: &PhysParams) -> Result<ModeMatrix> {
    let k2 = norm2(xi);
    if k2 == 0.0 {
        return Err(Error::InvalidParameter("B(ξ, ε) is undefined at ξ = 0".into()));
    }
    let mut proj = [[0.0; 4]; 4];
    for i in 0..3 {
        for j in 0..3 {
            proj[i][j] = if i == j { 1.0 } else { 0.0 } - xi[i] * xi[j] / k2;
        }
    }
    proj[3][3] = 1.0;
    let a = a_hat(p.froude());
    let mut b = [[0.0; 4]; 4];
    let inv_eps = 1.0 / p.epsilon();
    for i in 0..4 {
        for j in 0..4 {
            let pa: f64 = (0..4).map(|k| proj[i][k] * a[k][j]).sum();
            b[i][j] = -inv_eps * pa;
        }
    }
    for i in 0..3 {
        b[i][i] -= p.nu() * k2;
    }
    b[3][3] -= p.nu_prime() * k2;
    Ok(ModeMatrix { xi, b })
}

/// `τ(ξ)`, the damping rate of the oscillating pair in units of `|ξ|²`.
pub fn tau(xi: [f64; 3], p: &PhysParams) -> f64 {
    let f2 = norm_f2(xi, p.froude());
    let v = p.froude().powi(2) * xi[2] * xi[2] / f2;
    0.5 * p.nu() * (1.0 + v) + 0.5 * p.nu_prime() * (1.0 - v)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticEigen {
    pub mu0: f64,
    pub mu: f64,
    pub lambda: Complex64,
    pub lambda_bar: Complex64,
}

/// Leading-order eigenvalue expansions in `ε`.
pub fn asymptotic_eigenvalues(xi: [f64; 3], p: &PhysParams) -> Result<AsymptoticEigen> {
    let k2 = norm2(xi);
    if k2 == 0.0 {
        return Err(Error::InvalidParameter("eigenvalues are undefined at ξ = 0".into()));
    }
    let freq = norm_f2(xi, p.froude()).sqrt() / (p.epsilon() * p.froude() * k2.sqrt());
    let re = -tau(xi, p) * k2;
    Ok(AsymptoticEigen {
        mu0: -p.nu() * k2,
        mu: gamma_symbol(xi, p),
        lambda: Complex64::new(re, freq),
        lambda_bar: Complex64::new(re, -freq),
    })
}

/// Exact eigen-structure of one mode.
///
/// Eigenvalues are `[μ0, μ, λ, λ̄]` with `Im λ > 0`. `μ0 = -ν|ξ|²` belongs to
/// the gradient direction and is read off the left eigenvector `(ξ, 0)`. The
/// other three live on the invariant divergence-free subspace, where `B`
/// restricts to `M = D + [a]×` with `D` symmetric; `μ` is the real root of
/// `|a|²(z - aᵀDa/|a|²) = det(D - z)`, found by Newton from `aᵀDa/|a|²`, and
/// `λ, λ̄` follow by deflation.
///
/// Projectors `𝒫2, 𝒫3, 𝒫4` are the spectral projectors of `M` lifted to
/// `ℂ⁴` as `Q P Qᵀ`. They are defined whenever `M` is diagonalizable, which
/// includes `ν = ν'` where `μ0 = μ` makes the full 4×4 matrix defective.
#[derive(Clone, Debug)]
pub struct ModeEigen {
    pub xi: [f64; 3],
    pub mu0: f64,
    pub mu: f64,
    pub lambda: Complex64,
    pub lambda_bar: Complex64,
    /// `μ - aᵀDa/|a|²`, computed without cancellation.
    pub mu_correction: f64,
    /// `λ - λ_lead` from the exact structure, computed without cancellation.
    pub lambda_correction: Complex64,
    /// Unit right eigenvectors for `[μ0, μ, λ, λ̄]`; `μ0` is `None` when it
    /// coincides with `μ` to working precision.
    pub vectors: [Option<[Complex64; 4]>; 4],
    /// `[𝒫2, 𝒫3, 𝒫4]`, absent when the mode is not well separated.
    pub projectors: Option<[CMat4; 3]>,
    /// Frobenius condition number of the div-free eigenvector matrix.
    pub condition: f64,
    /// Condition of the full 4×4 eigenvector matrix (`∞` if defective).
    pub condition_full: f64,
    pub well_separated: bool,
}

impl ModeEigen {
    pub fn eigenvalues(&self) -> [Complex64; 4] {
        [Complex64::new(self.mu0, 0.0), Complex64::new(self.mu, 0.0), self.lambda, self.lambda_bar]
    }

    pub fn diagonalizable(&self) -> bool {
        self.condition_full < CONDITION_LIMIT
    }
}

/// Orthonormal basis of `{(v, θ) : ξ·v = 0}` as columns of a 4×3 matrix.
fn div_free_basis(xi: [f64; 3]) -> [[f64; 4]; 3] {
    let k = norm2(xi).sqrt();
    let h = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
    let q1 = if h > 1e-14 * k { [-xi[1] / h, xi[0] / h, 0.0] } else { [1.0, 0.0, 0.0] };
    let n = [xi[0] / k, xi[1] / k, xi[2] / k];
    let q2 = [n[1] * q1[2] - n[2] * q1[1], n[2] * q1[0] - n[0] * q1[2], n[0] * q1[1] - n[1] * q1[0]];
    [[q1[0], q1[1], q1[2], 0.0], [q2[0], q2[1], q2[2], 0.0], [0.0, 0.0, 0.0, 1.0]]
}

fn det3(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn cdet3(m: &CMat3) -> Complex64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn cinv3(m: &CMat3) -> Option<CMat3> {
    let d = cdet3(m);
    if d.norm() == 0.0 || !d.re.is_finite() {
        return None;
    }
    let mut inv = [[CZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (i1, i2) = ((j + 1) % 3, (j + 2) % 3);
            let (j1, j2) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (m[i1][j1] * m[i2][j2] - m[i1][j2] * m[i2][j1]) / d;
        }
    }
    Some(inv)
}

fn cfrob3(m: &CMat3) -> f64 {
    m.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Null vector of a (numerically) singular 3×3 complex matrix.
fn null_vector(m: &CMat3) -> [Complex64; 3] {
    let cross = |a: &[Complex64; 3], b: &[Complex64; 3]| {
        [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    };
    let cands = [cross(&m[0], &m[1]), cross(&m[0], &m[2]), cross(&m[1], &m[2])];
    let norm = |v: &[Complex64; 3]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let best = cands.iter().max_by(|a, b| norm(a).total_cmp(&norm(b))).unwrap();
    let n = norm(best);
    best.map(|c| c / n)
}

fn lift(q: &[[f64; 4]; 3], w: &[Complex64; 3]) -> [Complex64; 4] {
    std::array::from_fn(|r| (0..3).map(|c| w[c] * q[c][r]).sum())
}

/// Exact eigen-structure of `B(ξ, ε)`; see [`ModeEigen`].
pub fn exact_eigen(mode: &ModeMatrix) -> ModeEigen {
    let xi = mode.xi;
    let b = &mode.b;
    let k2 = norm2(xi);
    let q = div_free_basis(xi);

    // μ0 from the left eigenvector (ξ, 0)
    let e0 = [xi[0] / k2.sqrt(), xi[1] / k2.sqrt(), xi[2] / k2.sqrt(), 0.0];
    let be0: [f64; 4] = std::array::from_fn(|i| (0..4).map(|j| b[i][j] * e0[j]).sum());
    let mu0: f64 = (0..4).map(|i| e0[i] * be0[i]).sum();

    // restriction M = Qᵀ B Q
    let mut m: Mat3 = [[0.0; 3]; 3];
    for (r, qr) in q.iter().enumerate() {
        for (c, qc) in q.iter().enumerate() {
            let bq: [f64; 4] = std::array::from_fn(|i| (0..4).map(|j| b[i][j] * qc[j]).sum());
            m[r][c] = (0..4).map(|i| qr[i] * bq[i]).sum();
        }
    }
    let d: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| 0.5 * (m[i][j] + m[j][i])));
    let s: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| 0.5 * (m[i][j] - m[j][i])));
    let a = [s[2][1], s[0][2], s[1][0]];
    let a2 = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
    let da: [f64; 3] = std::array::from_fn(|i| (0..3).map(|j| d[i][j] * a[j]).sum());
    let mu_lead = if a2 > 0.0 { (a[0] * da[0] + a[1] * da[1] + a[2] * da[2]) / a2 } else { d[0][0] };
    let trace = d[0][0] + d[1][1] + d[2][2];
    let c1 = d[0][0] * d[1][1] - d[0][1] * d[1][0] + d[0][0] * d[2][2] - d[0][2] * d[2][0] + d[1][1] * d[2][2]
        - d[1][2] * d[2][1];

    // secular equation g(δ) = |a|² δ - det(D - (μ_lead + δ)) = 0
    let shifted_det = |z: f64| {
        let mut e = d;
        for (i, row) in e.iter_mut().enumerate() {
            row[i] -= z;
        }
        det3(&e)
    };
    let mut delta = 0.0f64;
    for _ in 0..60 {
        let z = mu_lead + delta;
        let g = a2 * delta - shifted_det(z);
        // d/dz det(D - z) = -(c1 - 2 tr z + 3 z²)
        let dg = a2 + (c1 - 2.0 * trace * z + 3.0 * z * z);
        if dg == 0.0 {
            break;
        }
        let step = g / dg;
        delta -= step;
        if step.abs() <= 1e-17 * (mu_lead.abs() + delta.abs()) {
            break;
        }
    }
    let mu = mu_lead + delta;

    // deflation: remaining pair solves z² - s z + p = 0 with p = c1 + |a|² - μ s
    let sum = trace - mu;
    let disc = (c1 - mu * sum - 0.25 * sum * sum) + a2; // p - s²/4
    let (lambda, lambda_bar, oscillatory) = if disc > 0.0 {
        let im = disc.sqrt();
        (Complex64::new(0.5 * sum, im), Complex64::new(0.5 * sum, -im), true)
    } else {
        let r = (-disc).sqrt();
        (Complex64::new(0.5 * sum + r, 0.0), Complex64::new(0.5 * sum - r, 0.0), false)
    };
    // λ - λ_lead with λ_lead = (tr - μ_lead)/2 + i|a|
    let lambda_correction = if oscillatory {
        let extra = c1 - mu * sum - 0.25 * sum * sum;
        Complex64::new(-0.5 * delta, extra / (disc.sqrt() + a2.sqrt()))
    } else {
        lambda - Complex64::new(0.5 * (trace - mu_lead), a2.sqrt())
    };

    let mc: CMat3 = std::array::from_fn(|i| std::array::from_fn(|j| Complex64::new(m[i][j], 0.0)));
    let shifted = |z: Complex64| -> CMat3 {
        let mut e = mc;
        for (i, row) in e.iter_mut().enumerate() {
            row[i] -= z;
        }
        e
    };
    let vals = [Complex64::new(mu, 0.0), lambda, lambda_bar];
    let ws = vals.map(|z| null_vector(&shifted(z)));
    let vmat: CMat3 = std::array::from_fn(|r| std::array::from_fn(|c| ws[c][r]));
    let condition = match cinv3(&vmat) {
        Some(inv) => cfrob3(&vmat) * cfrob3(&inv),
        None => f64::INFINITY,
    };

    let scale = m.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let gap = (lambda - lambda_bar).norm().min((lambda - mu).norm());
    let well_separated = oscillatory && condition < CONDITION_LIMIT && gap > 1e-8 * scale;

    let projectors = well_separated.then(|| {
        // Sylvester: P_z = Π_{w≠z} (M - w) / (z - w)
        let mul = |x: &CMat3, y: &CMat3| -> CMat3 {
            std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| x[i][k] * y[k][j]).sum()))
        };
        let proj3 = |z: Complex64, w1: Complex64, w2: Complex64| -> CMat3 {
            let p = mul(&shifted(w1), &shifted(w2));
            let den = (z - w1) * (z - w2);
            p.map(|row| row.map(|c| c / den))
        };
        let pm = [proj3(vals[0], vals[1], vals[2]), proj3(vals[1], vals[0], vals[2]), proj3(vals[2], vals[0], vals[1])];
        pm.map(|p3| {
            let mut p4 = [[CZERO; 4]; 4];
            for (i, row) in p4.iter_mut().enumerate() {
                for (j, out) in row.iter_mut().enumerate() {
                    let mut acc = CZERO;
                    for r in 0..3 {
                        for c in 0..3 {
                            acc += p3[r][c] * (q[r][i] * q[c][j]);
                        }
                    }
                    *out = acc;
                }
            }
            p4
        })
    });

    // μ0 eigenvector: e0 + Q w with (M - μ0) w = -Qᵀ(B e0 - μ0 e0)
    let resid: [f64; 4] = std::array::from_fn(|i| be0[i] - mu0 * e0[i]);
    let rq: [Complex64; 3] =
        std::array::from_fn(|r| Complex64::new(-(0..4).map(|i| q[r][i] * resid[i]).sum::<f64>(), 0.0));
    let shifted0 = shifted(Complex64::new(mu0, 0.0));
    let v0 = if (mu - mu0).abs() > 1e-10 * scale.max(k2) {
        cinv3(&shifted0).map(|inv| {
            let w: [Complex64; 3] = std::array::from_fn(|i| (0..3).map(|j| inv[i][j] * rq[j]).sum());
            let mut v = lift(&q, &w);
            for i in 0..4 {
                v[i] += e0[i];
            }
            let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            v.map(|c| c / n)
        })
    } else {
        None
    };
    let v_rest = ws.map(|w| lift(&q, &w));
    let condition_full = match v0 {
        Some(v0) => {
            let cols = [v0, v_rest[0], v_rest[1], v_rest[2]];
            condition4(&cols)
        }
        None => f64::INFINITY,
    };

    ModeEigen {
        xi,
        mu0,
        mu,
        lambda,
        lambda_bar,
        mu_correction: delta,
        lambda_correction,
        vectors: [v0, Some(v_rest[0]), Some(v_rest[1]), Some(v_rest[2])],
        projectors,
        condition,
        condition_full,
        well_separated,
    }
}

/// Frobenius condition number of a 4×4 complex matrix given by its columns.
fn condition4(cols: &[[Complex64; 4]; 4]) -> f64 {
    let mut a: CMat4 = std::array::from_fn(|r| std::array::from_fn(|c| cols[c][r]));
    let frob = |m: &CMat4| m.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let na = frob(&a);
    let mut inv: CMat4 = std::array::from_fn(|r| {
        std::array::from_fn(|c| if r == c { Complex64::new(1.0, 0.0) } else { CZERO })
    });
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm())).unwrap();
        if a[piv][col].norm() == 0.0 {
            return f64::INFINITY;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col];
        for j in 0..4 {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for i in 0..4 {
            if i != col {
                let f = a[i][col];
                for j in 0..4 {
                    let (ac, ic) = (a[col][j], inv[col][j]);
                    a[i][j] -= f * ac;
                    inv[i][j] -= f * ic;
                }
            }
        }
    }
    na * frob(&inv)
}

/// `B v` for a complex 4-vector.
pub fn apply_mat4(b: &Mat4, v: &[Complex64; 4]) -> [Complex64; 4] {
    std::array::from_fn(|i| (0..4).map(|j| v[j] * b[i][j]).sum())
}

pub fn apply_cmat4(p: &CMat4, v: &[Complex64; 4]) -> [Complex64; 4] {
    std::array::from_fn(|i| (0..4).map(|j| p[i][j] * v[j]).sum())
}
