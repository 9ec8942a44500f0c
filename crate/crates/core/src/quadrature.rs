//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals and on
//! `[a, ∞)` via `x ↦ a + x/(1 − x)`.

use std::collections::BinaryHeap;

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("quadrature did not converge: estimate {estimate}, error {error} after {intervals} intervals")]
pub struct QuadratureNotConverged {
    pub estimate: f64,
    pub error: f64,
    pub intervals: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod estimate and `|Kronrod − Gauss|` on one interval.
fn gk15<T: Real>(f: &mut impl FnMut(T) -> T, a: T, b: T) -> (T, T) {
    let half = (b - a) * T::lit(0.5);
    let mid = (a + b) * T::lit(0.5);
    let fc = f(mid);
    let mut kron = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for k in 0..7 {
        let dx = half * T::lit(XGK[k]);
        let pair = f(mid - dx) + f(mid + dx);
        kron = kron + pair * T::lit(WGK[k]);
        if k % 2 == 1 {
            gauss = gauss + pair * T::lit(WG[k / 2]);
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

struct Piece<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Piece<T> {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl<T: Real> Eq for Piece<T> {}
impl<T: Real> PartialOrd for Piece<T> {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl<T: Real> Ord for Piece<T> {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.error.partial_cmp(&o.error).unwrap_or(std::cmp::Ordering::Equal)
    }
}

/// Integrates `f` over `[a, b]`, bisecting the worst interval until the
/// summed error estimate is below `abs_tol`.
pub fn integrate<T: Real>(
    mut f: impl FnMut(T) -> T,
    a: T,
    b: T,
    abs_tol: T,
    max_intervals: usize,
) -> Result<T, QuadratureNotConverged> {
    let (value, error) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value, error });
    let (mut total, mut err) = (value, error);
    while err > abs_tol {
        if heap.len() >= max_intervals || !err.is_finite() {
            return Err(QuadratureNotConverged {
                estimate: total.to_f64().unwrap_or(f64::NAN),
                error: err.to_f64().unwrap_or(f64::NAN),
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("nonempty");
        let mid = (worst.a + worst.b) * T::lit(0.5);
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        total = total - worst.value + v1 + v2;
        err = err - worst.error + e1 + e2;
        heap.push(Piece { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Piece { a: mid, b: worst.b, value: v2, error: e2 });
    }
    Ok(total)
}

/// `∫_a^∞ f`, for integrands decaying at least like `u^{-2}`.
pub fn integrate_to_infinity<T: Real>(
    mut f: impl FnMut(T) -> T,
    a: T,
    abs_tol: T,
    max_intervals: usize,
) -> Result<T, QuadratureNotConverged> {
    let one = T::one();
    integrate(
        |x: T| {
            if x >= one {
                return T::zero();
            }
            let w = one - x;
            f(a + x / w) / (w * w)
        },
        T::zero(),
        one,
        abs_tol,
        max_intervals,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x: f64| x.powi(5) - 3.0 * x, 0.0, 2.0, 1e-13, 10).unwrap();
        assert!((v - (64.0 / 6.0 - 6.0)).abs() < 1e-12);
    }

    #[test]
    fn half_line() {
        let v = integrate_to_infinity(|u: f64| 1.0 / (1.0 + u).powi(2), 0.0, 1e-12, 200).unwrap();
        assert!((v - 1.0).abs() < 1e-11);
        let g = integrate_to_infinity(|u: f64| (-u * u).exp(), 0.0, 1e-12, 200).unwrap();
        assert!((g - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-11);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = integrate(|x: f64| 1.0 / x.abs().sqrt().max(1e-300), -1.0, 1.0, 1e-14, 4);
        assert!(r.is_err());
    }
}
