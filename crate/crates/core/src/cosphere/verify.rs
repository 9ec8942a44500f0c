//! Independent derivation of every sphere rule from explicit gamma
//! matrices, exact sphere moments `∫ ξ_p ξ_l = δ_pl / m` (unit volume) and a
//! random algebraic curvature tensor.
//!
//! Conventions: `σ = i c(ξ)`, `Dσ_a = i γ_a`, `D_a|ξ|² = 2ξ_a`,
//! `D²_ab|ξ|² = 2δ_ab`, `∇²τ_ab = −⅛ R_abcd γ_c γ_d`,
//! `∇²_ab|ξ|² = −⅓ (R_pabl + R_pbal) ξ_p ξ_l`, `S = R_abab`.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::clifford::{clifford_gammas, GammaMatrix};
use super::{sphere_rule, SpherePattern};
use crate::exact::{Coeff, GaussRational, Var};
use crate::report::{Check, VerificationReport};
use crate::RationalFunction;

type Dense = Vec<Complex<i64>>;

/// Algebraic curvature tensor with integer entries.
#[derive(Clone, Debug)]
pub struct Curvature {
    m: usize,
    r: Vec<i64>,
}

impl Curvature {
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn at(&self, a: usize, b: usize, c: usize, d: usize) -> i64 {
        let m = self.m;
        self.r[((a * m + b) * m + c) * m + d]
    }

    pub fn scalar(&self) -> i64 {
        (0..self.m).flat_map(|a| (0..self.m).map(move |b| (a, b))).map(|(a, b)| self.at(a, b, a, b)).sum()
    }
}

/// Sum of two Kulkarni–Nomizu products of random symmetric integer
/// matrices, redrawn until the scalar curvature is nonzero.
pub fn random_curvature(m: usize, seed: u64) -> Curvature {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut sym = || {
            let mut a = vec![0i64; m * m];
            for i in 0..m {
                for j in i..m {
                    let v = rng.gen_range(-3..=3);
                    a[i * m + j] = v;
                    a[j * m + i] = v;
                }
            }
            a
        };
        let mats = [sym(), sym(), sym(), sym()];
        let mut r = vec![0i64; m * m * m * m];
        for pair in mats.chunks(2) {
            let (x, y) = (&pair[0], &pair[1]);
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        for d in 0..m {
                            r[((a * m + b) * m + c) * m + d] += x[a * m + c] * y[b * m + d]
                                + x[b * m + d] * y[a * m + c]
                                - x[a * m + d] * y[b * m + c]
                                - x[b * m + c] * y[a * m + d];
                        }
                    }
                }
            }
        }
        let curv = Curvature { m, r };
        if curv.scalar() != 0 {
            return curv;
        }
    }
}

fn zero(n: usize) -> Dense {
    vec![Complex::new(0, 0); n * n]
}

fn add(x: &Dense, y: &Dense) -> Dense {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn sub(x: &Dense, y: &Dense) -> Dense {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn is_zero(x: &Dense) -> bool {
    x.iter().all(|c| c.re == 0 && c.im == 0)
}

/// `c` if `x = c·I`.
fn scalar_of(x: &Dense, n: usize) -> Option<Complex<i64>> {
    let c = x[0];
    (0..n)
        .all(|r| (0..n).all(|s| x[r * n + s] == if r == s { c } else { Complex::new(0, 0) }))
        .then_some(c)
}

fn gamma_term(g: GammaMatrix, c: i64) -> Dense {
    let mut d = zero(g.size());
    g.add_to(&mut d, Complex::new(c, 0));
    d
}

/// `∫_{S^{m−1}} Σ_pl Q_pl ξ_p ξ_l`, returned as a numerator over `m`.
fn moment(m: usize, n: usize, q: impl Fn(usize, usize) -> Dense) -> Dense {
    (0..m).fold(zero(n), |acc, p| add(&acc, &q(p, p)))
}

struct Derived {
    factor: BigRational,
    antisymmetric: bool,
}

/// Symmetric part of a two-label tensor `t(a, b) / den`; must be `c·δ_ab·I`.
fn symmetric_factor(
    m: usize,
    n: usize,
    den: i64,
    t: impl Fn(usize, usize) -> Dense,
) -> Result<Derived, String> {
    let mut c0: Option<Complex<i64>> = None;
    let mut antisymmetric = false;
    for a in 0..m {
        for b in 0..m {
            let (tab, tba) = (t(a, b), t(b, a));
            antisymmetric |= !is_zero(&sub(&tab, &tba));
            let sym = add(&tab, &tba);
            if a != b {
                if !is_zero(&sym) {
                    return Err(format!("symmetric part not diagonal at ({a},{b})"));
                }
                continue;
            }
            let c = scalar_of(&sym, n).ok_or_else(|| format!("not scalar at ({a},{a})"))?;
            if c0.is_some_and(|c0| c0 != c) {
                return Err("diagonal entries differ".into());
            }
            c0 = Some(c);
        }
    }
    let c = c0.expect("m > 0");
    if c.im != 0 {
        return Err(format!("imaginary factor {c}"));
    }
    Ok(Derived { factor: BigRational::new(c.re.into(), (2 * den).into()), antisymmetric })
}

/// `total / den = f · S · I`.
fn curvature_factor(total: &Dense, n: usize, den: i64, s: i64) -> Result<BigRational, String> {
    let c = scalar_of(total, n).ok_or("not a multiple of the identity")?;
    if c.im != 0 {
        return Err(format!("imaginary value {c}"));
    }
    Ok(BigRational::new(c.re.into(), BigInt::from(den) * BigInt::from(s)))
}

fn table_factor(p: SpherePattern, m: usize) -> BigRational {
    let f = sphere_rule(p)
        .factor
        .substitute(Var::M, &RationalFunction::integer(m as i64))
        .expect("m is not a pole");
    let c: GaussRational = f.as_constant().expect("factor depends only on m");
    assert!(c.is_real());
    c.re
}

/// Re-derives each sphere rule in dimension `m` and compares with the
/// table; antisymmetric parts are reported, not compared.
pub fn verify_sphere_rules(m: usize, seed: u64) -> VerificationReport {
    use SpherePattern::*;
    let mut rep = VerificationReport::new(format!("clifford m={m}"));
    let g = clifford_gammas(m);
    let n = g[0].size();
    let gg = |a: usize, b: usize| &g[a] * &g[b];
    let curv = random_curvature(m, seed);
    let s = curv.scalar();
    let mi = m as i64;

    // Clifford relation and the contraction identity.
    let mut anticommute = true;
    for a in 0..m {
        for b in 0..m {
            let x = add(&gamma_term(gg(a, b), 1), &gamma_term(gg(b, a), 1));
            let want = if a == b { Complex::new(-2, 0) } else { Complex::new(0, 0) };
            anticommute &= scalar_of(&x, n) == Some(want);
        }
    }
    rep.push(Check::exact(format!("m={m} gamma anticommutation"), anticommute, format!("size {n}")));
    let mut contraction = true;
    for j in 0..m {
        let x = (0..m).fold(zero(n), |acc, p| add(&acc, &gamma_term(&(&gg(j, p) * &g[j]) * &g[p], 1)));
        contraction &= scalar_of(&x, n) == Some(Complex::new(-(mi - 2), 0));
    }
    rep.push(Check::exact(
        format!("m={m} sum_p g_j g_p g_j g_p = -(m-2)"),
        contraction,
        format!("-(m-2) = {}", -(mi - 2)),
    ));
    let off_moment = moment(m, 1, |p, l| vec![Complex::new(((p, l) == (0, 1)) as i64, 0)]);
    rep.push(Check::exact(format!("m={m} moment xi_1 xi_2"), is_zero(&off_moment), "0"));

    let id = GammaMatrix::identity(n);
    let unit = |c: i64| gamma_term(id.clone(), c);
    let two_label: Vec<(SpherePattern, Result<Derived, String>)> = vec![
        (
            DXi2PairOnInsertions,
            symmetric_factor(m, n, mi, |a, b| moment(m, n, |p, l| unit(4 * ((a, b) == (p, l)) as i64))),
        ),
        (D2Xi2OnInsertions, symmetric_factor(m, n, 1, |a, b| unit(2 * (a == b) as i64))),
        (DSigmaDPair, symmetric_factor(m, n, 1, |a, b| gamma_term(gg(a, b).times_i_pow(2), 1))),
        (
            DXi2DSigmaDSigmaD,
            symmetric_factor(m, n, mi, |a, b| {
                moment(m, n, |p, l| gamma_term(gg(b, l).times_i_pow(2), 2 * (a == p) as i64))
            }),
        ),
        (
            DSigmaDSigmaDSquared,
            symmetric_factor(m, n, mi, |a, b| {
                moment(m, n, |p, l| gamma_term(&(&gg(a, p) * &g[b]) * &g[l], 1))
            }),
        ),
    ];
    for (p, d) in two_label {
        let table = table_factor(p, m);
        let check = match d {
            Ok(d) => Check::exact(
                format!("m={m} {p}"),
                d.factor == table,
                format!(
                    "table {table}, derived {}{}",
                    d.factor,
                    if d.antisymmetric { ", antisymmetric part dropped" } else { "" }
                ),
            ),
            Err(e) => Check::failed(format!("m={m} {p}"), e),
        };
        rep.push(check);
    }
    // The opposite Clifford order of the mixed pattern.
    let reversed = symmetric_factor(m, n, mi, |a, b| {
        moment(m, n, |p, l| gamma_term(gg(l, b).times_i_pow(2), 2 * (a == p) as i64))
    });
    rep.push(match reversed {
        Ok(d) => Check::exact(
            format!("m={m} {DXi2DSigmaDSigmaD} reversed"),
            d.factor == table_factor(DXi2DSigmaDSigmaD, m),
            format!("derived {}", d.factor),
        ),
        Err(e) => Check::failed(format!("m={m} {DXi2DSigmaDSigmaD} reversed"), e),
    });

    // ∇²τ_ab · 8 as a dense matrix.
    let tau8 = |a: usize, b: usize| {
        let mut d = zero(n);
        for c in 0..m {
            for e in 0..m {
                let r = curv.at(a, b, c, e);
                if r != 0 {
                    gg(c, e).add_to(&mut d, Complex::new(-r, 0));
                }
            }
        }
        d
    };
    let mul_dense = |x: &GammaMatrix, y: &Dense| {
        let dx = x.dense();
        let mut out = zero(n);
        for r in 0..n {
            for k in 0..n {
                if dx[r][k] != Complex::new(0, 0) {
                    for c in 0..n {
                        out[r * n + c] += dx[r][k] * y[k * n + c];
                    }
                }
            }
        }
        out
    };
    // DXi2_a DXi2_b ∇²τ_ab, times 8.
    let xxt = (0..m).fold(zero(n), |acc, a| {
        (0..m).fold(acc, |acc, b| add(&acc, &moment(m, n, |p, l| {
            if (p, l) == (a, b) { tau8(a, b).iter().map(|c| c * 4).collect() } else { zero(n) }
        })))
    });
    rep.push(Check::exact(
        format!("m={m} {DXi2DXi2Grad2Tau}"),
        is_zero(&xxt) && table_factor(DXi2DXi2Grad2Tau, m) == BigRational::from_integer(0.into()),
        "integral vanishes",
    ));
    // Dσ_a Dσ_b ∇²τ_ab, times 8.
    let cct = (0..m).fold(zero(n), |acc, a| {
        (0..m).fold(acc, |acc, b| add(&acc, &mul_dense(&gg(a, b).times_i_pow(2), &tau8(a, b))))
    });
    push_curvature(&mut rep, m, DSigmaDDSigmaDGrad2Tau, curvature_factor(&cct, n, 8, s));

    // Curvature rows built from R; scalar-valued, numerators over 3m.
    let z3 = |a: usize, b: usize, p: usize, l: usize| -(curv.at(p, a, b, l) + curv.at(p, b, a, l));
    let yz: i64 = (0..m).map(|a| (0..m).map(|p| 2 * z3(a, a, p, p)).sum::<i64>()).sum();
    push_curvature(&mut rep, m, D2Xi2Grad2Xi2, curvature_factor(&vec![Complex::new(yz, 0)], 1, 3 * mi, s));
    let yz_stated: i64 = (0..m).flat_map(|p| (0..m).map(move |k| (p, k))).map(|(p, k)| -4 * curv.at(p, k, k, p)).sum();
    rep.push(Check::exact(
        format!("m={m} {D2Xi2Grad2Xi2} two routes"),
        yz == yz_stated,
        "from the metric contraction and from the stated R-expression",
    ));
    let xyl: i64 = (0..m).flat_map(|p| (0..m).map(move |l| (p, l))).map(|(p, l)| -8 * curv.at(p, l, p, l)).sum();
    push_curvature(&mut rep, m, DXi2D2Xi2Grad3Ell, curvature_factor(&vec![Complex::new(xyl, 0)], 1, 3 * mi, s));

    // DXi2_a DXi2_b ∇²_ab|ξ|² is quartic in ξ; it vanishes identically.
    let mut quartic_zero = true;
    let idx = |k: usize| [(k / (m * m * m)) % m, (k / (m * m)) % m, (k / m) % m, k % m];
    for k in 0..m.pow(4) {
        let [i, j, x, y] = idx(k);
        let perms = permutations4([i, j, x, y]);
        let total: i64 = perms.iter().map(|[a, b, p, l]| z3(*a, *b, *p, *l)).sum();
        quartic_zero &= total == 0;
    }
    rep.push(Check::exact(
        format!("m={m} {DXi2DXi2Grad2Xi2}"),
        quartic_zero && table_factor(DXi2DXi2Grad2Xi2, m) == BigRational::from_integer(0.into()),
        "symmetrised quartic coefficient vanishes",
    ));
    rep
}

fn push_curvature(rep: &mut VerificationReport, m: usize, p: SpherePattern, d: Result<BigRational, String>) {
    let name = format!("m={m} {p}");
    let table = table_factor(p, m);
    rep.push(match d {
        Ok(f) => Check::exact(name, f == table, format!("table {table}, derived {f} (times S)")),
        Err(e) => Check::failed(name, e),
    });
}

fn permutations4(x: [usize; 4]) -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out.push([x[a], x[b], x[c], x[d]]);
                    }
                }
            }
        }
    }
    out
}
