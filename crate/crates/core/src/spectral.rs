//! Dense Hermitian eigensolver, commutators, operator norms and the four
//! tridiagonal norm bounds.
//!
//! Everything here works on small dense matrices (the graphs this crate
//! targets have at most a few dozen vertices), so the eigensolver is a
//! cyclic complex Jacobi iteration: simple, reentrant and accurate to a
//! few ulps, which the reconstruction contract below requires.

use num_complex::Complex64;

use crate::error::NcdError;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..n {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from self-adjointness.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.n {
            for c in r..self.n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise deviation from skew-adjointness (M† = -M).
    pub fn skew_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.n {
            for c in r..self.n {
                worst = worst.max((self[(r, c)] + self[(c, r)].conj()).norm());
            }
        }
        worst
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.n + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.n + c]
    }
}

/// Eigenvalues ascending, eigenvectors as orthonormal columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl SpectralDecomposition {
    /// Reconstruction residual ‖H − U diag(λ) U†‖_F.
    pub fn residual(&self, h: &ComplexMatrix) -> f64 {
        let n = h.dim();
        let mut rec = ComplexMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    s += self.vectors[(r, k)] * self.eigenvalues[k] * self.vectors[(c, k)].conj();
                }
                rec[(r, c)] = h[(r, c)] - s;
            }
        }
        rec.frobenius_norm()
    }

    /// Orthonormality defect ‖U†U − I‖_F.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.vectors.dim();
        let mut prod = self.vectors.adjoint().mul(&self.vectors);
        for i in 0..n {
            prod[(i, i)] -= Complex64::new(1.0, 0.0);
        }
        prod.frobenius_norm()
    }
}

const MAX_SWEEPS: usize = 64;

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
pub fn eigh(h: &ComplexMatrix) -> Result<SpectralDecomposition, NcdError> {
    let n = h.dim();
    let scale = h.max_abs().max(1.0);
    let defect = h.hermitian_defect();
    if defect > 1e-8 * scale {
        return Err(NcdError::NotHermitian(defect));
    }
    // symmetrize so tiny input asymmetries cannot leak into the iteration
    let mut a = ComplexMatrix::from_fn(n, |r, c| 0.5 * (h[(r, c)] + h[(c, r)].conj()));
    let mut u = ComplexMatrix::identity(n);
    if n <= 1 {
        return Ok(SpectralDecomposition {
            eigenvalues: (0..n).map(|i| a[(i, i)].re).collect(),
            vectors: u,
        });
    }
    let fro = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let tol = 1e-15 * fro;
    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= tol / (n as f64) {
                    continue;
                }
                let phase = apq / r; // apq = r * phase, |phase| = 1
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                let tau = (beta - alpha) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let pc = phase.conj();
                // columns p, q of A: right-multiply by the rotation
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let new_p = c * akp - s * pc * akq;
                    let new_q = s * akp + c * pc * akq;
                    a[(k, p)] = new_p;
                    a[(k, q)] = new_q;
                    a[(p, k)] = new_p.conj();
                    a[(q, k)] = new_q.conj();
                }
                a[(p, p)] = Complex64::new(alpha - t * r, 0.0);
                a[(q, q)] = Complex64::new(beta + t * r, 0.0);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let ukp = u[(k, p)];
                    let ukq = u[(k, q)];
                    u[(k, p)] = c * ukp - s * pc * ukq;
                    u[(k, q)] = s * ukp + c * pc * ukq;
                }
            }
        }
    }
    if !converged {
        // one last check: the sweep loop may have hit the limit exactly
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() > tol * 10.0 {
            return Err(NcdError::EigNoConvergence(MAX_SWEEPS));
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| u[(r, order[c])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        vectors,
    })
}

/// Commutator `[D, diag(a)]`, entrywise `D_rs (a_s - a_r)`.
///
/// Skew-Hermitian whenever `D` is Hermitian and `a` real.
pub fn commutator(d: &ComplexMatrix, a: &[f64]) -> Result<ComplexMatrix, NcdError> {
    if d.dim() != a.len() {
        return Err(NcdError::DimensionMismatch(d.dim(), a.len()));
    }
    Ok(ComplexMatrix::from_fn(d.dim(), |r, c| {
        d[(r, c)] * (a[c] - a[r])
    }))
}

/// Operator (spectral) norm of a Hermitian or skew-Hermitian matrix.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64, NcdError> {
    let scale = m.max_abs().max(1.0);
    let h = if m.hermitian_defect() <= 1e-8 * scale {
        m.clone()
    } else if m.skew_defect() <= 1e-8 * scale {
        m.scale(Complex64::new(0.0, 1.0))
    } else {
        return Err(NcdError::NotNormalForm);
    };
    let dec = eigh(&h)?;
    Ok(dec
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .fold(0.0, f64::max))
}

/// Skew tridiagonal matrix with superdiagonal `b`, `B_{i,i+1} = b_i`,
/// `B_{i+1,i} = -conj(b_i)`, dimension `b.len() + 1`.
pub fn skew_tridiagonal(b: &[Complex64]) -> ComplexMatrix {
    let n = b.len() + 1;
    let mut m = ComplexMatrix::zeros(n);
    for (i, &bi) in b.iter().enumerate() {
        m[(i, i + 1)] = bi;
        m[(i + 1, i)] = -bi.conj();
    }
    m
}

/// The two lower and two upper bounds on the norm of the skew tridiagonal
/// matrix built from `b` (dimension `b.len() + 1`).
#[derive(Debug, Clone, Copy)]
pub struct ChainNormBounds {
    /// max_i sqrt(b_i² + b_{i+1}²); degrades to max |b_i| for a single entry.
    pub lower_pair: f64,
    /// (2/n) Σ |b_i|.
    pub lower_mean: f64,
    /// max_i |b_i| + |b_{i+1}|; degrades to max |b_i| for a single entry.
    pub upper_pair: f64,
    /// 2 cos(π/(n+1)) max_i |b_i|.
    pub upper_toeplitz: f64,
}

/// Norm bounds for the skew tridiagonal matrix of a weight sequence.
pub fn chain_norm_bounds(b: &[f64]) -> Result<ChainNormBounds, NcdError> {
    if b.is_empty() {
        return Err(NcdError::EmptySequence);
    }
    let abs: Vec<f64> = b.iter().map(|x| x.abs()).collect();
    let n = abs.len() + 1;
    let max = abs.iter().copied().fold(0.0, f64::max);
    let (lower_pair, upper_pair) = if abs.len() == 1 {
        (abs[0], abs[0])
    } else {
        let lp = abs
            .windows(2)
            .map(|w| (w[0] * w[0] + w[1] * w[1]).sqrt())
            .fold(0.0, f64::max);
        let up = abs.windows(2).map(|w| w[0] + w[1]).fold(0.0, f64::max);
        (lp, up)
    };
    Ok(ChainNormBounds {
        lower_pair,
        lower_mean: 2.0 / (n as f64) * abs.iter().sum::<f64>(),
        upper_pair,
        upper_toeplitz: 2.0 * (std::f64::consts::PI / (n as f64 + 1.0)).cos() * max,
    })
}
