//! Finite-dimensional matrix model of the modular calculus.
//!
//! The log-Weyl factor `h` is a Hermitian matrix, `φ₀` is the trace, the
//! modular derivation is `▽ = −2 ad_h` and the geometric derivation `∇` is
//! `ad_{iD}` for a random Hermitian `D`. In the eigenbasis of `h`, `▽` acts
//! on the matrix unit `E_ij` by `μ_ij = −2(λ_i − λ_j)`.

mod lemmas;
mod matrix;
mod words;

use std::sync::Arc;

use num_complex::Complex;
use num_traits::Zero;

pub use lemmas::{
    verify_frechet, verify_nabla_exchange, verify_oracle, verify_trace_property, verify_variation_lemmas,
    OracleConfig,
};
pub use matrix::{expm, hermitian_eigen, CMatrix, Eigen};
pub use words::{evaluate_canonical, evaluate_word, verify_normal_order, WordModel};

use crate::curvature::{f1, g2};
use crate::scalar::Real;

/// A Hermitian matrix together with its eigendecomposition.
#[derive(Clone, Debug)]
pub struct HermitianOperator<T> {
    pub matrix: CMatrix<T>,
    pub eigen: Eigen<T>,
}

impl<T: Real> HermitianOperator<T> {
    pub fn new(a: &CMatrix<T>) -> HermitianOperator<T> {
        let matrix = a.symmetrized();
        let eigen = hermitian_eigen(&matrix);
        HermitianOperator { matrix, eigen }
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    /// `‖AV − VΛ‖_max`.
    pub fn residual(&self) -> T {
        let v = &self.eigen.vectors;
        let av = &self.matrix * v;
        let vl = v * &CMatrix::diagonal(&self.eigen.values);
        (&av - &vl).max_abs()
    }

    /// `f(A)` by the spectral theorem.
    pub fn function(&self, f: impl Fn(T) -> T) -> CMatrix<T> {
        let d: Vec<T> = self.eigen.values.iter().map(|&l| f(l)).collect();
        let v = &self.eigen.vectors;
        &(v * &CMatrix::diagonal(&d)) * &v.adjoint()
    }
}

/// Spectral data of `h` for the modular functional calculus.
#[derive(Clone, Debug)]
pub struct ModularData<T> {
    pub eigvals: Vec<T>,
    pub eigvecs: CMatrix<T>,
    /// `k = e^h`.
    pub weyl: CMatrix<T>,
}

impl<T: Real> ModularData<T> {
    pub fn new(h: &HermitianOperator<T>) -> ModularData<T> {
        ModularData {
            eigvals: h.eigen.values.clone(),
            eigvecs: h.eigen.vectors.clone(),
            weyl: h.function(T::exp),
        }
    }

    pub fn size(&self) -> usize {
        self.eigvals.len()
    }

    /// Eigenvalue of `▽` on `E_ij`.
    pub fn mu(&self, i: usize, j: usize) -> T {
        T::lit(-2.0) * (self.eigvals[i] - self.eigvals[j])
    }

    fn to_eigenbasis(&self, x: &CMatrix<T>) -> CMatrix<T> {
        &(&self.eigvecs.adjoint() * x) * &self.eigvecs
    }

    fn from_eigenbasis(&self, x: &CMatrix<T>) -> CMatrix<T> {
        &(&self.eigvecs * x) * &self.eigvecs.adjoint()
    }

    /// `f(▽)(x)`.
    pub fn apply(&self, f: impl Fn(T) -> T, x: &CMatrix<T>) -> CMatrix<T> {
        let mut xt = self.to_eigenbasis(x);
        for i in 0..self.size() {
            for j in 0..self.size() {
                xt[(i, j)] = xt[(i, j)] * f(self.mu(i, j));
            }
        }
        self.from_eigenbasis(&xt)
    }

    /// `g(▽₍₁₎, ▽₍₂₎)(x·y)`: the chain `x_ij y_jk` is scaled by `g(μ_ij, μ_jk)`.
    pub fn apply2(&self, g: impl Fn(T, T) -> T, x: &CMatrix<T>, y: &CMatrix<T>) -> CMatrix<T> {
        let n = self.size();
        let (xt, yt) = (self.to_eigenbasis(x), self.to_eigenbasis(y));
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let mut acc = Complex::zero();
                for j in 0..n {
                    acc = acc + xt[(i, j)] * yt[(j, k)] * g(self.mu(i, j), self.mu(j, k));
                }
                out[(i, k)] = acc;
            }
        }
        self.from_eigenbasis(&out)
    }

    /// `Δ^{w/2}(x) = k^{−w} x k^{w}`.
    pub fn modular_power(&self, w: T, x: &CMatrix<T>) -> CMatrix<T> {
        self.apply(|mu| (w * mu / T::lit(2.0)).exp(), x)
    }
}

/// `f(▽)(x)` for the modular derivation of `h`.
pub fn apply_modular_fn<T: Real>(f: impl Fn(T) -> T, h: &HermitianOperator<T>, x: &CMatrix<T>) -> CMatrix<T> {
    ModularData::new(h).apply(f, x)
}

/// `g(▽₍₁₎, ▽₍₂₎)(x·y)` for the modular derivation of `h`.
pub fn apply_modular_fn2<T: Real>(
    g: impl Fn(T, T) -> T,
    h: &HermitianOperator<T>,
    x: &CMatrix<T>,
    y: &CMatrix<T>,
) -> CMatrix<T> {
    ModularData::new(h).apply2(g, x, y)
}

/// Derivatives of `e^h` along a derivation `δ` with `δh = X`, `δX = Z`,
/// from the exponential of a block-Toeplitz matrix.
///
/// Order 1 is the upper-right block of `exp([[h, X], [0, h]])`; order 2 is
/// twice the corner block of `exp([[h, X, Z/2], [0, h, X], [0, 0, h]])`,
/// i.e. the second Taylor coefficient of `e^{h + εX + ε²Z/2}`.
pub fn frechet_exp<T: Real>(h: &CMatrix<T>, x: &CMatrix<T>, z: Option<&CMatrix<T>>, order: u32) -> CMatrix<T> {
    let n = h.size();
    match order {
        1 => expm(&CMatrix::from_blocks(&[vec![Some(h), Some(x)], vec![None, Some(h)]])).block(n, 0, 1),
        2 => {
            let zero = CMatrix::zeros(n);
            let half_z = z.unwrap_or(&zero).scale(T::lit(0.5));
            let big = CMatrix::from_blocks(&[
                vec![Some(h), Some(x), Some(&half_z)],
                vec![None, Some(h), Some(x)],
                vec![None, None, Some(h)],
            ]);
            expm(&big).block(n, 0, 2).scale(T::lit(2.0))
        }
        _ => panic!("frechet_exp supports orders 1 and 2, got {order}"),
    }
}

/// `e^h f₁(▽/2)(X)`, the closed form of `δ(e^h)`.
pub fn dexp_closed_form<T: Real>(md: &ModularData<T>, x: &CMatrix<T>) -> CMatrix<T> {
    &md.weyl * &md.apply(|s| f1(s / T::lit(2.0)), x)
}

/// `e^h [f₁(▽/2)(Z) + 2g₂(▽/2, ▽/2)(X·X)]`, the closed form of `δ²(e^h)`.
pub fn d2exp_closed_form<T: Real>(md: &ModularData<T>, x: &CMatrix<T>, z: &CMatrix<T>) -> CMatrix<T> {
    let half = T::lit(0.5);
    let inner = &md.apply(|s| f1(s * half), z) + &md.apply2(|s, t| g2(s * half, t * half), x, x).scale(T::lit(2.0));
    &md.weyl * &inner
}

type Fn1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A smooth real function with its derivative, for divided differences at
/// coincident arguments.
#[derive(Clone)]
pub struct Smooth {
    pub name: String,
    value: Fn1,
    derivative: Fn1,
}

/// Nodes and weights of 6-point Gauss–Legendre on `[0, 1]`.
const GL6: [(f64, f64); 6] = [
    (0.033765242898423975, 0.08566224618958517),
    (0.16939530676686776, 0.18038078652406930),
    (0.38069040695840156, 0.23395696728634552),
    (0.61930959304159844, 0.23395696728634552),
    (0.83060469323313224, 0.18038078652406930),
    (0.96623475710157603, 0.08566224618958517),
];

impl Smooth {
    pub fn new(
        name: impl Into<String>,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Smooth {
        Smooth { name: name.into(), value: Arc::new(value), derivative: Arc::new(derivative) }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        (self.derivative)(x)
    }

    /// `(f(a) − f(b))/(a − b)`; for `|a − b| < 10⁻²` the mean of `f′` over
    /// `[b, a]` by Gauss–Legendre, exact to far below rounding there.
    pub fn divided(&self, a: f64, b: f64) -> f64 {
        let d = a - b;
        if d.abs() < 1e-2 {
            GL6.iter().map(|&(x, w)| w * self.deriv(b + x * d)).sum()
        } else {
            (self.eval(a) - self.eval(b)) / d
        }
    }

    /// `e^{−s²/4} + 0.3s`.
    pub fn gaussian() -> Smooth {
        Smooth::new("gaussian", |s| (-s * s / 4.0).exp() + 0.3 * s, |s| -0.5 * s * (-s * s / 4.0).exp() + 0.3)
    }

    /// `(s + 3)/(s² + 4)`.
    pub fn rational() -> Smooth {
        Smooth::new(
            "rational",
            |s| (s + 3.0) / (s * s + 4.0),
            |s| {
                let d = s * s + 4.0;
                (d - 2.0 * s * (s + 3.0)) / (d * d)
            },
        )
    }

    pub fn constant(c: f64) -> Smooth {
        Smooth::new(format!("const {c}"), move |_| c, |_| 0.0)
    }

    /// `f₁(a·s)`.
    pub fn f1_scaled(a: f64) -> Smooth {
        Smooth::new(format!("f1({a}s)"), move |s| f1(a * s), move |s| a * g2(a * s, 0.0))
    }

    /// `T(−s)e^{cs/2}`.
    pub fn tilde(&self, c: f64) -> Smooth {
        let (t, dt) = (self.value.clone(), self.derivative.clone());
        let (t2, dt2) = (t.clone(), dt);
        Smooth::new(
            format!("{}~", self.name),
            move |s| t(-s) * (c * s / 2.0).exp(),
            move |s| (-dt2(-s) + 0.5 * c * t2(-s)) * (c * s / 2.0).exp(),
        )
    }
}

impl std::fmt::Debug for Smooth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Smooth({})", self.name)
    }
}

/// Derivative at 0 of `ε ↦ F(ε)` by a 5-level Richardson table of central
/// differences starting at step `h0`.
pub fn richardson_derivative<T: Real>(f: impl Fn(T) -> CMatrix<T>, h0: T) -> CMatrix<T> {
    let mut prev: Vec<CMatrix<T>> = Vec::new();
    for k in 0..5 {
        let e = h0 / T::lit(2f64.powi(k));
        let mut row = vec![(&f(e) - &f(-e)).scale(T::one() / (T::lit(2.0) * e))];
        for j in 1..=k as usize {
            let factor = T::one() / (T::lit(4f64.powi(j as i32)) - T::one());
            let next = &row[j - 1] + &(&row[j - 1] - &prev[j - 1]).scale(factor);
            row.push(next);
        }
        prev = row;
    }
    prev.pop().expect("non-empty table")
}
