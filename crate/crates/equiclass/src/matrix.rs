//! Small dense complex matrices and the handful of numerical kernels the
//! representation code needs: Hermitian eigendecomposition by cyclic Jacobi
//! rotations, operator norms, Haar-ish random unitaries, and a series
//! matrix exponential. Dimensions stay tiny (≤ 32), so simplicity beats
//! asymptotics throughout.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::config::Config;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>, // row-major
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<ComplexMatrix> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{}×{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(ComplexMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix {
            rows,
            cols,
            entries: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> ComplexMatrix {
        let entries = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        ComplexMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute entry; cheap bound used by the exponential scaling.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations:
/// returns eigenvalues ascending and a unitary whose columns are the
/// matching eigenvectors.
pub fn hermitian_eigen(m: &ComplexMatrix, config: &Config) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = m.rows;
    if m.rows != m.cols {
        return Err(Error::InvalidMatrix("eigendecomposition of a non-square matrix".into()));
    }
    if n > config.eigen_dim_cap {
        return Err(Error::OrderOverflow {
            what: "eigen dimension".into(),
            limit: config.eigen_dim_cap,
            actual: n,
        });
    }
    let hermiticity = m.sub(&m.adjoint()).max_abs();
    if hermiticity > 1e-10 * (1.0 + m.max_abs()) {
        return Err(Error::InvalidMatrix(format!(
            "matrix is not Hermitian (defect {hermiticity:.3e})"
        )));
    }
    let mut a = m.clone();
    // Symmetrize exactly so rounding noise cannot accumulate.
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in i + 1..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.max_abs().max(1e-300);
    let off = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    let mut converged = false;
    for _sweep in 0..64 {
        if off(&a) <= 1e-14 * scale * n as f64 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                // Absorb the phase so the 2×2 block becomes real symmetric,
                // then rotate it away.
                let phase = apq / r;
                for i in 0..n {
                    a[(i, q)] *= phase.conj();
                }
                for j in 0..n {
                    a[(q, j)] *= phase;
                }
                for i in 0..n {
                    v[(i, q)] *= phase.conj();
                }
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                // Smaller root of t² + 2τt − 1 = 0, branch chosen to avoid
                // cancellation when τ is large and negative.
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c - aiq * s;
                    a[(i, q)] = aip * s + aiq * c;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c - aqj * s;
                    a[(q, j)] = apj * s + aqj * c;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * s;
                    v[(i, q)] = vip * s + viq * c;
                }
                a[(p, q)] = Complex64::ZERO;
                a[(q, p)] = Complex64::ZERO;
            }
        }
    }
    if !converged && off(&a) > 1e-12 * scale * n as f64 {
        return Err(Error::ConvergenceFailure(format!(
            "Jacobi sweeps stalled at off-diagonal {:.3e}",
            off(&a)
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let vals: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    let sorted_vals = order.iter().map(|&i| vals[i]).collect();
    let sorted_vecs = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((sorted_vals, sorted_vecs))
}

/// Largest singular value, as the square root of the top eigenvalue of M*M.
pub fn operator_norm(m: &ComplexMatrix, config: &Config) -> Result<f64> {
    let gram = m.adjoint().mul(m);
    let (vals, _) = hermitian_eigen(&gram, config)?;
    Ok(vals.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// exp(M) by scaling-and-squaring with a plain Taylor series on the scaled
/// matrix.
pub fn matrix_exp(m: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(m.rows, m.cols, "exponential of a non-square matrix");
    let n = m.rows;
    let bound = m.max_abs() * n as f64;
    let squarings = if bound > 0.5 {
        (bound / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=40 {
        term = term.mul(&scaled).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
        if term.max_abs() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    sum
}

/// Orthonormalize the columns in place (modified Gram–Schmidt). Fails when
/// a column collapses below the cutoff.
pub fn gram_schmidt_unitary(m: &ComplexMatrix, config: &Config) -> Result<ComplexMatrix> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut q = m.clone();
    for j in 0..n {
        for i in 0..j {
            let mut dot = Complex64::ZERO;
            for k in 0..n {
                dot += q[(k, i)].conj() * q[(k, j)];
            }
            for k in 0..n {
                let qki = q[(k, i)];
                q[(k, j)] -= qki * dot;
            }
        }
        let norm: f64 = (0..n).map(|k| q[(k, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm < config.singular_cutoff {
            return Err(Error::Singular { sigma_min: norm });
        }
        for k in 0..n {
            q[(k, j)] /= norm;
        }
    }
    Ok(q)
}

/// A random unitary, as the Gram–Schmidt factor of a complex Gaussian
/// matrix (the positive-diagonal QR convention, so the law is Haar).
pub fn haar_unitary<R: Rng>(n: usize, rng: &mut R, config: &Config) -> ComplexMatrix {
    loop {
        let g = ComplexMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        if let Ok(q) = gram_schmidt_unitary(&g, config) {
            return q;
        }
    }
}

/// Deviation from unitarity: ‖U*U − I‖ in the largest-entry norm.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    u.adjoint()
        .mul(u)
        .sub(&ComplexMatrix::identity(u.rows))
        .max_abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> Config {
        Config::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn norms_of_simple_matrices() {
        let id = ComplexMatrix::identity(3);
        assert!((operator_norm(&id, &cfg()).unwrap() - 1.0).abs() < 1e-12);
        let diag = ComplexMatrix::new(2, 2, vec![c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)])
            .unwrap();
        assert!((operator_norm(&diag, &cfg()).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn operator_norm_matches_power_iteration() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..5 {
            let m = ComplexMatrix::from_fn(3, 3, |_, _| {
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let fast = operator_norm(&m, &cfg()).unwrap();
            // Independent oracle: power iteration on M*M.
            let gram = m.adjoint().mul(&m);
            let mut x = vec![Complex64::ONE; 3];
            let mut lambda = 0.0;
            for _ in 0..10_000 {
                let y: Vec<Complex64> = (0..3)
                    .map(|i| (0..3).map(|j| gram[(i, j)] * x[j]).sum())
                    .collect();
                let norm = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                lambda = norm;
                x = y.iter().map(|z| z / norm).collect();
            }
            assert!(
                (fast - lambda.sqrt()).abs() <= 1e-8 * (1.0 + fast),
                "jacobi {fast} vs power iteration {}",
                lambda.sqrt()
            );
        }
    }

    #[test]
    fn eigen_reconstructs_hermitian_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2usize, 3, 6, 10] {
            let raw = ComplexMatrix::from_fn(n, n, |_, _| {
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let herm = raw.add(&raw.adjoint()).scale(c(0.5, 0.0));
            let (vals, v) = hermitian_eigen(&herm, &cfg()).unwrap();
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
            assert!(unitarity_defect(&v) < 1e-10);
            let diag = ComplexMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    c(vals[i], 0.0)
                } else {
                    Complex64::ZERO
                }
            });
            let rebuilt = v.mul(&diag).mul(&v.adjoint());
            assert!(rebuilt.sub(&herm).max_abs() < 1e-10);
        }
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!(matches!(
            hermitian_eigen(&m, &cfg()),
            Err(Error::InvalidMatrix(_))
        ));
    }

    #[test]
    fn exponential_basics() {
        let zero = ComplexMatrix::zeros(3, 3);
        assert!(matrix_exp(&zero).sub(&ComplexMatrix::identity(3)).max_abs() < 1e-15);
        let ln2 = ComplexMatrix::new(1, 1, vec![c(std::f64::consts::LN_2, 0.0)]).unwrap();
        assert!((matrix_exp(&ln2)[(0, 0)].re - 2.0).abs() < 1e-12);
        // exp of skew-Hermitian is unitary.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let raw = ComplexMatrix::from_fn(4, 4, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let skew = raw.sub(&raw.adjoint()).scale(c(0.5, 0.0));
        assert!(unitarity_defect(&matrix_exp(&skew)) < 1e-12);
    }

    #[test]
    fn haar_unitaries_are_unitary_and_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = haar_unitary(5, &mut rng, &cfg());
        assert!(unitarity_defect(&u) < 1e-12);
        let mut rng2 = ChaCha8Rng::seed_from_u64(1);
        let u2 = haar_unitary(5, &mut rng2, &cfg());
        assert!(u.sub(&u2).max_abs() == 0.0);
    }
}
