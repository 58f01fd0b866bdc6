//! Small dense vector/matrix helpers for curves in `R^n` (n is a handful).

/// Dot product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Euclidean distance.
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// a + s*b, elementwise.
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

/// In-place normalisation; returns the original norm.
pub fn normalize(a: &mut [f64]) -> f64 {
    let n = norm(a);
    if n > 0.0 {
        for x in a.iter_mut() {
            *x /= n;
        }
    }
    n
}

/// Cross product in R^3.
pub fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Dense row-major square matrix acting on `Vec<f64>` points.
#[derive(Debug, Clone, PartialEq)]
pub struct MatN {
    pub n: usize,
    pub data: Vec<f64>,
}

impl MatN {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        MatN { n, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "square matrix required");
            data.extend_from_slice(r);
        }
        MatN { n, data }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| dot(&self.data[i * self.n..(i + 1) * self.n], x))
            .collect()
    }

    /// Max deviation of R^T R from the identity.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += self.get(k, i) * self.get(k, j);
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }
}

/// Extend the given orthonormal vectors to a full orthonormal basis of R^n
/// by Gram–Schmidt over the coordinate directions.
pub fn complete_basis(seed: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = seed.to_vec();
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        for b in &basis {
            let c = dot(&v, b);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
        if normalize(&mut v) > 1e-8 {
            // Second re-orthogonalisation pass for numerical hygiene.
            for b in &basis {
                let c = dot(&v, b);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
            normalize(&mut v);
            basis.push(v);
        }
    }
    assert_eq!(basis.len(), n, "could not complete basis");
    basis
}

/// Eigenvalues of a small symmetric matrix by the cyclic Jacobi method,
/// returned in descending order.
pub fn sym_eigenvalues(m: &MatN) -> Vec<f64> {
    let n = m.n;
    let mut a = m.data.clone();
    let at = |a: &Vec<f64>, i: usize, j: usize| a[i * n + j];

    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += at(&a, i, j).abs();
            }
        }
        if off < 1e-15 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = at(&a, p, q);
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * (at(&a, q, q) - at(&a, p, p)) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = at(&a, k, p);
                    let akq = at(&a, k, q);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = at(&a, p, k);
                    let aqk = at(&a, q, k);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| at(&a, i, i)).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    eig
}
