//! Exact complex gamma matrices with `γ_j γ_k + γ_k γ_j = −2δ_jk`.
//!
//! Every product of gammas has one nonzero entry per row, a power of `i`,
//! so matrices are stored as a column permutation plus phases.

use std::ops::Mul;

use num_complex::Complex;

/// Matrix with entry `i^phase[r]` at `(r, perm[r])` and zeros elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaMatrix {
    perm: Vec<usize>,
    phase: Vec<u8>,
}

fn i_pow(k: u8) -> Complex<i64> {
    match k % 4 {
        0 => Complex::new(1, 0),
        1 => Complex::new(0, 1),
        2 => Complex::new(-1, 0),
        _ => Complex::new(0, -1),
    }
}

impl GammaMatrix {
    pub fn identity(n: usize) -> GammaMatrix {
        GammaMatrix { perm: (0..n).collect(), phase: vec![0; n] }
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    fn from_parts(perm: &[usize], phase: &[u8]) -> GammaMatrix {
        GammaMatrix { perm: perm.to_vec(), phase: phase.to_vec() }
    }

    /// Multiplies by `i^k`.
    pub fn times_i_pow(mut self, k: u8) -> GammaMatrix {
        self.phase.iter_mut().for_each(|p| *p = (*p + k) % 4);
        self
    }

    pub fn kron(&self, o: &GammaMatrix) -> GammaMatrix {
        let (n, m) = (self.size(), o.size());
        let mut perm = Vec::with_capacity(n * m);
        let mut phase = Vec::with_capacity(n * m);
        for r in 0..n {
            for s in 0..m {
                perm.push(self.perm[r] * m + o.perm[s]);
                phase.push((self.phase[r] + o.phase[s]) % 4);
            }
        }
        GammaMatrix { perm, phase }
    }

    pub fn dense(&self) -> Vec<Vec<Complex<i64>>> {
        let n = self.size();
        let mut out = vec![vec![Complex::new(0, 0); n]; n];
        for r in 0..n {
            out[r][self.perm[r]] = i_pow(self.phase[r]);
        }
        out
    }

    /// `acc += c · self` on a dense row-major accumulator.
    pub fn add_to(&self, acc: &mut [Complex<i64>], c: Complex<i64>) {
        let n = self.size();
        for r in 0..n {
            acc[r * n + self.perm[r]] += c * i_pow(self.phase[r]);
        }
    }

    /// Returns `c` if the matrix is `c·I`.
    pub fn as_scalar(&self) -> Option<Complex<i64>> {
        let c = self.phase.first().copied()?;
        let diag = self.perm.iter().enumerate().all(|(r, &p)| r == p);
        (diag && self.phase.iter().all(|&p| p == c)).then(|| i_pow(c))
    }
}

impl Mul for &GammaMatrix {
    type Output = GammaMatrix;

    fn mul(self, o: &GammaMatrix) -> GammaMatrix {
        let perm = self.perm.iter().map(|&p| o.perm[p]).collect();
        let phase = self.perm.iter().zip(&self.phase).map(|(&p, &a)| (a + o.phase[p]) % 4).collect();
        GammaMatrix { perm, phase }
    }
}

/// `m` gamma matrices of size `2^{m/2}`:
/// `γ_{2k−1} = i σ_z^{⊗(k−1)} ⊗ σ_x ⊗ 1`, `γ_{2k} = i σ_z^{⊗(k−1)} ⊗ σ_y ⊗ 1`.
pub fn clifford_gammas(m: usize) -> Vec<GammaMatrix> {
    assert!(m >= 2 && m % 2 == 0, "even dimension required");
    let half = m / 2;
    let id = GammaMatrix::identity(2);
    let sx = GammaMatrix::from_parts(&[1, 0], &[0, 0]);
    let sy = GammaMatrix::from_parts(&[1, 0], &[3, 1]);
    let sz = GammaMatrix::from_parts(&[0, 1], &[0, 2]);
    let mut out = Vec::with_capacity(m);
    for k in 0..half {
        for s in [&sx, &sy] {
            let mut g = GammaMatrix::identity(1);
            for slot in 0..half {
                let f = match slot.cmp(&k) {
                    std::cmp::Ordering::Less => &sz,
                    std::cmp::Ordering::Equal => s,
                    std::cmp::Ordering::Greater => &id,
                };
                g = g.kron(f);
            }
            out.push(g.times_i_pow(1));
        }
    }
    out
}
