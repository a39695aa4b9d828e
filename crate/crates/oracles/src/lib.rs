//! Reference computations for tests.
//!
//! Everything here is deliberately naive and works on plain row-major
//! `Vec<Vec<f64>>` so that it shares no code path with the library under test.

pub type Matrix = Vec<Vec<f64>>;

pub fn transpose(a: &Matrix) -> Matrix {
    let (n, m) = (a.len(), a.first().map_or(0, Vec::len));
    (0..m).map(|j| (0..n).map(|i| a[i][j]).collect()).collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let m = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum())
                .collect()
        })
        .collect()
}

pub fn matvec(a: &Matrix, v: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn gram(x: &Matrix) -> Matrix {
    matmul(&transpose(x), x)
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn gauss_solve(a: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut m: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, piv);
        let d = m[col][col];
        assert!(d.abs() > 1e-300, "singular system in oracle");
        for i in col + 1..n {
            let f = m[i][col] / d;
            if f != 0.0 {
                for k in col..=n {
                    m[i][k] -= f * m[col][k];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| m[i][k] * x[k]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    x
}

/// Cyclic Jacobi rotations for a symmetric matrix. Returns eigenvalues in
/// descending order and the matching eigenvectors as columns.
pub fn jacobi_eigen(a: &Matrix) -> (Vec<f64>, Matrix) {
    let n = a.len();
    let mut m = a.clone();
    let mut v: Matrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| m[i][i] * m[i][i]).sum::<f64>().max(1e-300);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j][j].total_cmp(&m[i][i]));
    let values = order.iter().map(|&i| m[i][i]).collect();
    let vectors = (0..n)
        .map(|r| order.iter().map(|&c| v[r][c]).collect())
        .collect();
    (values, vectors)
}

/// Solves the symmetric system `a x = b` through a full Jacobi
/// eigen-decomposition (pseudo-inverse with a relative floor).
pub fn eigen_solve(a: &Matrix, b: &[f64]) -> Vec<f64> {
    let (vals, vecs) = jacobi_eigen(a);
    let top = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let n = a.len();
    let mut x = vec![0.0; n];
    for (k, &lam) in vals.iter().enumerate() {
        if lam.abs() <= 1e-14 * top {
            continue;
        }
        let proj: f64 = (0..n).map(|i| vecs[i][k] * b[i]).sum();
        for i in 0..n {
            x[i] += vecs[i][k] * proj / lam;
        }
    }
    x
}

/// Dominant eigenpair by power iteration.
pub fn power_iteration(a: &Matrix, iters: usize) -> (f64, Vec<f64>) {
    let n = a.len();
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + i as f64 * 1e-3).collect();
    let mut lam = 0.0;
    for _ in 0..iters {
        let w = matvec(a, &v);
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        v = w.iter().map(|x| x / norm).collect();
        lam = norm;
    }
    (lam, v)
}

pub fn soft_threshold(z: f64, gamma: f64) -> f64 {
    if z > gamma {
        z - gamma
    } else if z < -gamma {
        z + gamma
    } else {
        0.0
    }
}

/// Coordinate descent for `0.5 ||y - X b||^2 + lambda ||b||_1`; `x` is n x p
/// row-major.
pub fn lasso_cd(x: &Matrix, y: &[f64], lambda: f64) -> Vec<f64> {
    let n = x.len();
    let p = x[0].len();
    let col_sq: Vec<f64> = (0..p).map(|j| (0..n).map(|i| x[i][j] * x[i][j]).sum()).collect();
    let mut b = vec![0.0; p];
    let mut r = y.to_vec();
    for _ in 0..200_000 {
        let mut max_delta = 0.0f64;
        for j in 0..p {
            let rho: f64 = (0..n).map(|i| x[i][j] * r[i]).sum::<f64>() + col_sq[j] * b[j];
            let nb = soft_threshold(rho, lambda) / col_sq[j];
            let delta = nb - b[j];
            if delta != 0.0 {
                for i in 0..n {
                    r[i] -= x[i][j] * delta;
                }
                b[j] = nb;
                max_delta = max_delta.max(delta.abs());
            }
        }
        if max_delta < 1e-15 {
            break;
        }
    }
    b
}

/// Lasso solution whose L1 norm equals `t`, found by bisection on lambda
/// over coordinate-descent solves.
pub fn lasso_at_l1_norm(x: &Matrix, y: &[f64], t: f64) -> Vec<f64> {
    let p = x[0].len();
    let lam_max = (0..p)
        .map(|j| x.iter().zip(y).map(|(row, yi)| row[j] * yi).sum::<f64>().abs())
        .fold(0.0, f64::max);
    let l1 = |b: &[f64]| b.iter().map(|v| v.abs()).sum::<f64>();
    let (mut lo, mut hi) = (0.0, lam_max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if l1(&lasso_cd(x, y, mid)) > t {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * lam_max.max(1.0) {
            break;
        }
    }
    lasso_cd(x, y, 0.5 * (lo + hi))
}

/// Pearson correlation with divisor-free sums.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma) * (x - ma)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb) * (y - mb)).sum();
    cov / (va * vb).sqrt()
}

/// Small deterministic generator (SplitMix64 + Box-Muller) so oracle-side
/// random instances do not depend on the library's RNG stack.
pub struct SplitMix(u64);

impl SplitMix {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }

    pub fn normal(&mut self) -> f64 {
        let (u1, u2) = (self.uniform(), self.uniform());
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn matrix(&mut self, n: usize, p: usize) -> Matrix {
        (0..n).map(|_| (0..p).map(|_| self.normal()).collect()).collect()
    }

    pub fn vector(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.normal()).collect()
    }
}
