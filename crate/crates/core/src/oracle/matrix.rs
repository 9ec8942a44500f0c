//! Dense complex square matrices, Hermitian eigendecomposition and the
//! matrix exponential.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::Rng;

use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> CMatrix<T> {
        CMatrix { n, data: vec![Complex::zero(); n * n] }
    }

    pub fn identity(n: usize) -> CMatrix<T> {
        CMatrix::from_fn(n, |i, j| if i == j { Complex::one() } else { Complex::zero() })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> CMatrix<T> {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    pub fn diagonal(d: &[T]) -> CMatrix<T> {
        CMatrix::from_fn(d.len(), |i, j| if i == j { Complex::new(d[i], T::zero()) } else { Complex::zero() })
    }

    /// Random matrix with entries uniform in the unit square.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> CMatrix<T> {
        CMatrix::from_fn(n, |_, _| {
            Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0)))
        })
    }

    /// Random Hermitian matrix `(A + A†)/4` with `A` as in [`CMatrix::random`].
    pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> CMatrix<T> {
        let a = CMatrix::random(n, rng);
        (&a + &a.adjoint()).scale(T::lit(0.25))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn adjoint(&self) -> CMatrix<T> {
        CMatrix::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: T) -> CMatrix<T> {
        CMatrix { n: self.n, data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn scale_c(&self, c: Complex<T>) -> CMatrix<T> {
        CMatrix { n: self.n, data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n).map(|i| self[(i, i)]).fold(Complex::zero(), |a, b| a + b)
    }

    /// `AB − BA`.
    pub fn commutator(&self, b: &CMatrix<T>) -> CMatrix<T> {
        &(self * b) - &(b * self)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> T {
        (0..self.n).map(|j| (0..self.n).map(|i| self[(i, j)].norm()).sum::<T>()).fold(T::zero(), T::max)
    }

    /// `(A + A†)/2`.
    pub fn symmetrized(&self) -> CMatrix<T> {
        (self + &self.adjoint()).scale(T::lit(0.5))
    }

    /// Block-upper-triangular matrix from an `r × r` grid of `n × n` blocks;
    /// `None` blocks are zero.
    pub fn from_blocks(blocks: &[Vec<Option<&CMatrix<T>>>]) -> CMatrix<T> {
        let r = blocks.len();
        let n = blocks.iter().flatten().flatten().next().expect("at least one block").n;
        let mut out = CMatrix::zeros(r * n);
        for (bi, row) in blocks.iter().enumerate() {
            for (bj, b) in row.iter().enumerate() {
                if let Some(b) = b {
                    for i in 0..n {
                        for j in 0..n {
                            out[(bi * n + i, bj * n + j)] = b[(i, j)];
                        }
                    }
                }
            }
        }
        out
    }

    /// Block `(bi, bj)` of size `n`.
    pub fn block(&self, n: usize, bi: usize, bj: usize) -> CMatrix<T> {
        CMatrix::from_fn(n, |i, j| self[(bi * n + i, bj * n + j)])
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, o: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * o.data[k * n + j];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn add(self, o: &CMatrix<T>) -> CMatrix<T> {
        CMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }
}

impl<T: Real> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn sub(self, o: &CMatrix<T>) -> CMatrix<T> {
        CMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }
}

impl<T: Real> Neg for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn neg(self) -> CMatrix<T> {
        CMatrix { n: self.n, data: self.data.iter().map(|a| -a).collect() }
    }
}

/// Eigenvalues (ascending) and unitary eigenvectors, `A = V Λ V†`.
#[derive(Clone, Debug)]
pub struct Eigen<T> {
    pub values: Vec<T>,
    pub vectors: CMatrix<T>,
    pub sweeps: usize,
}

/// Cyclic complex Jacobi rotations on the symmetrized input until the
/// off-diagonal Frobenius norm drops below `eps·‖A‖`.
pub fn hermitian_eigen<T: Real>(a: &CMatrix<T>) -> Eigen<T> {
    let n = a.size();
    let mut a = a.symmetrized();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius().max(T::min_positive_value());
    let off = |a: &CMatrix<T>| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s = s + a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&a) > T::epsilon() * scale && sweeps < 60 {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= T::min_positive_value() {
                    continue;
                }
                // phase-reduce to a real symmetric 2×2 problem, then rotate
                let phase = apq / r;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (T::lit(2.0) * r);
                let t = tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt());
                let t = if tau == T::zero() { T::one() } else { t };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                // J = diag(1, phasē)·[[c, s], [−s, c]] acting on columns p, q
                let jpp = Complex::new(c, T::zero());
                let jpq = Complex::new(s, T::zero());
                let jqp = phase.conj() * (-s);
                let jqq = phase.conj() * c;
                for k in 0..n {
                    let (xp, xq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = xp * jpp + xq * jqp;
                    a[(k, q)] = xp * jpq + xq * jqq;
                    let (vp, vq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vp * jpp + vq * jqp;
                    v[(k, q)] = vp * jpq + vq * jqq;
                }
                for k in 0..n {
                    let (xp, xq) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = jpp.conj() * xp + jqp.conj() * xq;
                    a[(q, k)] = jpq.conj() * xp + jqq.conj() * xq;
                }
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Eigen { values, vectors, sweeps }
}

/// Scaling and squaring with a Taylor polynomial: the argument is scaled to
/// `‖A/2ˢ‖₁ ≤ 1/2` and the series is summed until the next term is below
/// `eps` relative to the partial sum.
pub fn expm<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    let n = a.size();
    let norm = a.norm_one();
    let mut squarings = 0;
    let mut scaled = norm;
    while scaled > T::lit(0.5) {
        scaled = scaled / T::lit(2.0);
        squarings += 1;
    }
    let b = a.scale(T::lit(0.5).powi(squarings));
    let mut sum = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..40 {
        term = (&term * &b).scale(T::one() / T::lit(k as f64));
        sum = &sum + &term;
        if term.norm_one() <= T::epsilon() * sum.norm_one() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}
