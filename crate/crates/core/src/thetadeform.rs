//! Truncated Fourier model of the deformed product on a torus: elements are
//! finitely supported functions on `ℤⁿ`, multiplied by convolution twisted
//! with the bicharacter `χ_θ(r, l) = exp(iπ⟨θr, l⟩)`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::report::{Check, VerificationReport};
use crate::scalar::Real;

/// Lattice point of `ℤⁿ`.
pub type Lattice = Vec<i32>;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ThetaError {
    #[error("product radius {radius} exceeds the truncation cap {cap}")]
    TruncationOverflow { radius: u32, cap: u32 },
    #[error("theta is not skew-symmetric (defect {0:e})")]
    NotSkew(f64),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("exponential series degree {0} above 12")]
    DegreeTooLarge(u32),
}

/// Real skew-symmetric `n × n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaMatrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Real> ThetaMatrix<T> {
    /// Rejects matrices with `|θ + θᵀ| > 10⁻¹⁴`.
    pub fn new(n: usize, entries: Vec<T>) -> Result<ThetaMatrix<T>, ThetaError> {
        assert_eq!(entries.len(), n * n);
        let mut defect = T::zero();
        for i in 0..n {
            for j in 0..n {
                defect = defect.max((entries[i * n + j] + entries[j * n + i]).abs());
            }
        }
        if defect > T::lit(1e-14) {
            return Err(ThetaError::NotSkew(defect.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(ThetaMatrix { n, entries })
    }

    pub fn zero(n: usize) -> ThetaMatrix<T> {
        ThetaMatrix { n, entries: vec![T::zero(); n * n] }
    }

    /// Random skew matrix with upper entries uniform in `[−1, 1]`.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> ThetaMatrix<T> {
        let mut e = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i + 1..n {
                let x = T::lit(rng.gen_range(-1.0..1.0));
                e[i * n + j] = x;
                e[j * n + i] = -x;
            }
        }
        ThetaMatrix { n, entries: e }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.n + j]
    }

    pub fn scale(&self, c: T) -> ThetaMatrix<T> {
        ThetaMatrix { n: self.n, entries: self.entries.iter().map(|&x| x * c).collect() }
    }

    /// `⟨θr, l⟩`.
    pub fn pairing(&self, r: &[i32], l: &[i32]) -> T {
        let mut s = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                s = s + self.get(i, j) * T::lit(r[j] as f64) * T::lit(l[i] as f64);
            }
        }
        s
    }
}

/// `χ_θ(r, l) = exp(iπ⟨θr, l⟩)`.
pub fn bicharacter<T: Real>(theta: &ThetaMatrix<T>, r: &[i32], l: &[i32]) -> Complex<T> {
    Complex::from_polar(T::one(), T::PI() * theta.pairing(r, l))
}

/// Finitely supported Fourier series with `|r|_∞ ≤ radius`.
#[derive(Clone, PartialEq)]
pub struct FourierElement<T> {
    rank: usize,
    radius: u32,
    coeffs: BTreeMap<Lattice, Complex<T>>,
}

fn sup_norm(r: &[i32]) -> u32 {
    r.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
}

fn lattice_box(rank: usize, radius: u32) -> Vec<Lattice> {
    let r = radius as i32;
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|p: Lattice| {
                (-r..=r).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

impl<T: Real> FourierElement<T> {
    pub fn zero(rank: usize) -> FourierElement<T> {
        FourierElement { rank, radius: 0, coeffs: BTreeMap::new() }
    }

    /// The unit, supported at the origin.
    pub fn one(rank: usize) -> FourierElement<T> {
        FourierElement::monomial(vec![0; rank], Complex::one())
    }

    pub fn monomial(r: Lattice, c: Complex<T>) -> FourierElement<T> {
        let mut e = FourierElement { rank: r.len(), radius: sup_norm(&r), coeffs: BTreeMap::new() };
        e.coeffs.insert(r, c);
        e
    }

    /// Coefficients uniform in the unit square on the full box of the radius.
    pub fn random<R: Rng>(rank: usize, radius: u32, rng: &mut R) -> FourierElement<T> {
        let coeffs = lattice_box(rank, radius)
            .into_iter()
            .map(|r| (r, Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0)))))
            .collect();
        FourierElement { rank, radius, coeffs }
    }

    /// `(f + f*)/2` of a random element.
    pub fn random_self_adjoint<R: Rng>(rank: usize, radius: u32, rng: &mut R) -> FourierElement<T> {
        let f = FourierElement::random(rank, radius, rng);
        f.add(&f.star()).scale(Complex::new(T::lit(0.5), T::zero()))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn coeff(&self, r: &[i32]) -> Complex<T> {
        self.coeffs.get(r).copied().unwrap_or_else(Complex::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&Lattice, &Complex<T>)> {
        self.coeffs.iter()
    }

    /// `φ₀(f)`, the coefficient at the origin.
    pub fn phi0(&self) -> Complex<T> {
        self.coeff(&vec![0; self.rank])
    }

    /// `f*` with `f*_r = conj(f_{−r})`.
    pub fn star(&self) -> FourierElement<T> {
        let coeffs = self.coeffs.iter().map(|(r, c)| (r.iter().map(|x| -x).collect(), c.conj())).collect();
        FourierElement { rank: self.rank, radius: self.radius, coeffs }
    }

    /// Maximum of `|f_r − f*_r|`.
    pub fn self_adjoint_defect(&self) -> T {
        self.sub(&self.star()).sup()
    }

    /// The part supported where `keep` holds.
    pub fn restrict(&self, keep: impl Fn(&[i32]) -> bool) -> FourierElement<T> {
        let coeffs: BTreeMap<Lattice, Complex<T>> =
            self.coeffs.iter().filter(|(r, _)| keep(r)).map(|(r, c)| (r.clone(), *c)).collect();
        let radius = coeffs.keys().map(|r| sup_norm(r)).max().unwrap_or(0);
        FourierElement { rank: self.rank, radius, coeffs }
    }

    /// Isotypic component at `r`.
    pub fn component(&self, r: &[i32]) -> FourierElement<T> {
        FourierElement::monomial(r.to_vec(), self.coeff(r))
    }

    /// True iff only the trivial isotypic component is present.
    pub fn is_invariant(&self) -> bool {
        self.coeffs.iter().all(|(r, c)| c.is_zero() || r.iter().all(|&x| x == 0))
    }

    pub fn add(&self, o: &FourierElement<T>) -> FourierElement<T> {
        let mut coeffs = self.coeffs.clone();
        for (r, c) in &o.coeffs {
            let e = coeffs.entry(r.clone()).or_insert_with(Complex::zero);
            *e = *e + c;
        }
        FourierElement { rank: self.rank, radius: self.radius.max(o.radius), coeffs }
    }

    pub fn sub(&self, o: &FourierElement<T>) -> FourierElement<T> {
        self.add(&o.scale(-Complex::<T>::one()))
    }

    pub fn scale(&self, c: Complex<T>) -> FourierElement<T> {
        let coeffs = self.coeffs.iter().map(|(r, x)| (r.clone(), x * c)).collect();
        FourierElement { rank: self.rank, radius: self.radius, coeffs }
    }

    /// `max_r |f_r|`.
    pub fn sup(&self) -> T {
        self.coeffs.values().map(|c| c.norm()).fold(T::zero(), T::max)
    }

    /// `Σ_r |f_r|`, submultiplicative under every twisted product.
    pub fn l1(&self) -> T {
        self.coeffs.values().map(|c| c.norm()).sum()
    }
}

impl<T: Real> fmt::Debug for FourierElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FourierElement(rank {}, radius {}, {} terms)", self.rank, self.radius, self.coeffs.len())
    }
}

/// `f ×_θ g = Σ_{r,l} χ_θ(r, l) f_r g_l e_{r+l}`; the radius of the result
/// is the sum of the radii and may not exceed `cap`.
pub fn deformed_mul<T: Real>(
    f: &FourierElement<T>,
    g: &FourierElement<T>,
    theta: &ThetaMatrix<T>,
    cap: u32,
) -> Result<FourierElement<T>, ThetaError> {
    if f.rank != g.rank || f.rank != theta.rank() {
        return Err(ThetaError::RankMismatch(f.rank, g.rank.max(theta.rank())));
    }
    let radius = f.radius + g.radius;
    if radius > cap {
        return Err(ThetaError::TruncationOverflow { radius, cap });
    }
    let mut coeffs: BTreeMap<Lattice, Complex<T>> = BTreeMap::new();
    for (r, a) in &f.coeffs {
        for (l, b) in &g.coeffs {
            let p: Lattice = r.iter().zip(l).map(|(x, y)| x + y).collect();
            let e = coeffs.entry(p).or_insert_with(Complex::zero);
            *e = *e + bicharacter(theta, r, l) * a * b;
        }
    }
    Ok(FourierElement { rank: f.rank, radius, coeffs })
}

/// `Σ_{j ≤ degree} h^{×j}/j!` together with the bound
/// `Σ_{j > degree} ‖h‖₁ʲ/j!` on the ℓ¹ norm of the omitted tail.
pub fn weyl_exp<T: Real>(
    h: &FourierElement<T>,
    theta: &ThetaMatrix<T>,
    degree: u32,
    cap: u32,
) -> Result<(FourierElement<T>, T), ThetaError> {
    if degree > 12 {
        return Err(ThetaError::DegreeTooLarge(degree));
    }
    let mut sum = FourierElement::one(h.rank);
    let mut term = FourierElement::one(h.rank);
    for j in 1..=degree {
        term = deformed_mul(&term, h, theta, cap)?.scale(Complex::new(T::one() / T::lit(j as f64), T::zero()));
        sum = sum.add(&term);
    }
    let norm = h.l1();
    let mut tail = T::zero();
    let mut t = T::one();
    for j in 1..=degree + 40 {
        t = t * norm / T::lit(j as f64);
        if j > degree {
            tail = tail + t;
        }
    }
    Ok((sum, tail))
}

/// Axiom checks on random rank-`rank` elements of the given radius.
pub fn verify_theta(rank: usize, radius: u32, seed: u64, tol: f64) -> VerificationReport {
    let mut rep = VerificationReport::new("theta");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta = ThetaMatrix::<f64>::random(rank, &mut rng);
    let cap = 4 * radius + 12;
    let f = FourierElement::random(rank, radius, &mut rng);
    let g = FourierElement::random(rank, radius, &mut rng);
    let h = FourierElement::random(rank, radius, &mut rng);
    let mul = |a: &FourierElement<f64>, b: &FourierElement<f64>| deformed_mul(a, b, &theta, cap).expect("within cap");
    let detail = format!("rank {rank}, radius {radius}");

    let pts = lattice_box(rank, 2);
    let mut e = 0.0f64;
    for r in &pts {
        e = e.max((bicharacter(&theta, r, r) - 1.0).norm());
        for l in &pts {
            e = e.max((bicharacter(&theta, r, l) * bicharacter(&theta, l, r) - 1.0).norm());
            e = e.max((bicharacter(&ThetaMatrix::zero(rank), r, l) - 1.0).norm());
        }
    }
    rep.push(Check::numeric("bicharacter: chi(r,r) = 1, chi(r,l)chi(l,r) = 1, chi_0 = 1", e, tol, ""));

    let left = mul(&mul(&f, &g), &h);
    let right = mul(&f, &mul(&g, &h));
    let mut direct: BTreeMap<Lattice, Complex<f64>> = BTreeMap::new();
    for (r, a) in f.support() {
        for (l, b) in g.support() {
            for (p, c) in h.support() {
                let q: Lattice = (0..rank).map(|i| r[i] + l[i] + p[i]).collect();
                let chi = bicharacter(&theta, r, l) * bicharacter(&theta, r, p) * bicharacter(&theta, l, p);
                *direct.entry(q).or_insert_with(Complex::zero) += chi * a * b * c;
            }
        }
    }
    let e_direct = direct.iter().map(|(q, c)| (left.coeff(q) - c).norm()).fold(0.0, f64::max);
    let scale = left.sup().max(1.0);
    rep.push(Check::numeric(
        "associativity (fg)h = f(gh)",
        left.sub(&right).sup() / scale,
        tol,
        format!("{detail}, relative to max coefficient {scale:.2e}"),
    ));
    rep.push(Check::numeric("(fg)h = direct triple sum", e_direct / scale, tol, detail.clone()));

    let e = mul(&f, &g).star().sub(&mul(&g.star(), &f.star())).sup();
    rep.push(Check::numeric("star: (fg)* = g* f*", e, tol, detail.clone()));
    let e = (mul(&f, &g).phi0() - mul(&g, &f).phi0()).norm();
    rep.push(Check::numeric("trace: phi0(fg) = phi0(gf)", e, tol, detail.clone()));

    let c = FourierElement::monomial(vec![0; rank], Complex::new(0.7, -0.2));
    let plain = f.scale(c.phi0());
    let e = mul(&c, &f).sub(&plain).sup().max(mul(&f, &c).sub(&plain).sup());
    rep.push(Check::numeric("invariant elements are central", e, tol, detail.clone()));

    let comp = f.component(&vec![1; rank]);
    rep.push(Check::exact("isotypic projection is idempotent", comp.component(&vec![1; rank]) == comp, ""));

    let undeformed = deformed_mul(&f, &g, &ThetaMatrix::zero(rank), cap).expect("within cap");
    let mut conv: BTreeMap<Lattice, Complex<f64>> = BTreeMap::new();
    for (r, a) in f.support() {
        for (l, b) in g.support() {
            let q: Lattice = (0..rank).map(|i| r[i] + l[i]).collect();
            *conv.entry(q).or_insert_with(Complex::zero) += a * b;
        }
    }
    let e = conv.iter().map(|(q, c)| (undeformed.coeff(q) - c).norm()).fold(0.0, f64::max);
    rep.push(Check::numeric("theta = 0 gives the convolution product", e, tol, detail.clone()));

    // θ = εθ₀ with θ₀ small enough that the linear term dominates
    let theta0 = theta.scale(1e-5);
    let dev: Vec<f64> = [1.0, 0.5, 0.25]
        .iter()
        .map(|&eps| deformed_mul(&f, &g, &theta0.scale(eps), cap).expect("within cap").sub(&undeformed).sup())
        .collect();
    let ratio = (dev[0] / dev[1] - 2.0).abs().max((dev[1] / dev[2] - 2.0).abs());
    rep.push(Check::numeric(
        "theta -> 0: deviation halves with theta",
        ratio,
        1e-2,
        format!("deviations {:.3e}, {:.3e}, {:.3e}", dev[0], dev[1], dev[2]),
    ));

    // supported on 0 and ±e_i, so powers stay in an ℓ¹ ball
    let small = FourierElement::random_self_adjoint(rank, 1, &mut rng)
        .restrict(|r| r.iter().map(|x| x.abs()).sum::<i32>() <= 1)
        .scale(Complex::new(0.2, 0.0));
    let (ep, tail) = weyl_exp(&small, &theta, 12, cap).expect("within cap");
    let (em, _) = weyl_exp(&small.scale(Complex::new(-1.0, 0.0)), &theta, 12, cap).expect("within cap");
    let prod = deformed_mul(&ep, &em, &theta, 2 * cap).expect("within cap");
    let bound = 2.0 * tail * small.l1().exp() + 1e-13;
    rep.push(Check::numeric(
        "e^h e^-h = 1 within the series tail",
        prod.sub(&FourierElement::one(rank)).sup(),
        bound,
        format!("degree 12, ||h||_1 = {:.3}", small.l1()),
    ));
    rep.push(Check::numeric("e^h is self-adjoint", ep.self_adjoint_defect(), tol, ""));
    rep
}
