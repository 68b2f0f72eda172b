//! Exact pairing of constant (1,1)-forms against lattice 2-cycles.
//!
//! The form ω = d·i·Σ dz_j∧dz̄_j + i·Σ_{j≠k} dz_j∧dz̄_k is evaluated on
//! pairs of Gaussian-lattice vectors entirely in integer arithmetic: the
//! alternating value i·Σ h_{jk}[dz_j(u)dz̄_k(v) − dz_j(v)dz̄_k(u)] is a
//! Gaussian integer whose imaginary part cancels identically, leaving an
//! exact integer. No floating point enters anywhere in this module, so
//! nonvanishing statements need no tolerance policy.
//!
//! A sublattice declaration models which 2-cycles survive pullback along a
//! covering map: only pairs of vectors inside the integer span of the
//! declared generators do.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An integer combination Σ aⱼ·eⱼ + Σ bⱼ·(i·eⱼ) of the standard real basis
/// of Cⁿ, i.e. a vector with Gaussian-integer coordinates aⱼ + i·bⱼ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianLatticeVector {
    a: Vec<i64>,
    b: Vec<i64>,
}

impl GaussianLatticeVector {
    pub fn new(a: Vec<i64>, b: Vec<i64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        if a.is_empty() {
            return Err(Error::InvalidLattice {
                reason: "lattice vector must have positive dimension".into(),
            });
        }
        Ok(GaussianLatticeVector { a, b })
    }

    /// The basis vector e_j (1-based) in dimension n.
    pub fn basis_e(n: usize, j: usize) -> Result<Self> {
        if j < 1 || j > n {
            return Err(Error::InvalidLattice {
                reason: format!("basis index {j} out of range 1..={n}"),
            });
        }
        let mut a = vec![0; n];
        a[j - 1] = 1;
        Self::new(a, vec![0; n])
    }

    /// The basis vector i·e_j (1-based) in dimension n.
    pub fn basis_ie(n: usize, j: usize) -> Result<Self> {
        if j < 1 || j > n {
            return Err(Error::InvalidLattice {
                reason: format!("basis index {j} out of range 1..={n}"),
            });
        }
        let mut b = vec![0; n];
        b[j - 1] = 1;
        Self::new(vec![0; n], b)
    }

    pub fn dimension(&self) -> usize {
        self.a.len()
    }

    pub fn e_coeffs(&self) -> &[i64] {
        &self.a
    }

    pub fn ie_coeffs(&self) -> &[i64] {
        &self.b
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dimension() != other.dimension() {
            return Err(Error::DimensionMismatch {
                left: self.dimension(),
                right: other.dimension(),
            });
        }
        Self::new(
            self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
            self.b.iter().zip(&other.b).map(|(x, y)| x + y).collect(),
        )
    }

    /// Integer scaling.
    pub fn scaled(&self, c: i64) -> Self {
        GaussianLatticeVector {
            a: self.a.iter().map(|x| x * c).collect(),
            b: self.b.iter().map(|x| x * c).collect(),
        }
    }

    /// The 2n real coordinates (a₁..a_n, b₁..b_n).
    fn real_coords(&self) -> Vec<i64> {
        let mut v = self.a.clone();
        v.extend_from_slice(&self.b);
        v
    }
}

/// ω = d·i·Σ dz_j∧dz̄_j (+ i·Σ_{j≠k} dz_j∧dz̄_k when `offdiag`).
#[derive(Debug, Clone, Copy)]
pub struct HermitianFormSpec {
    pub n: usize,
    pub d: i64,
    pub offdiag: bool,
}

impl HermitianFormSpec {
    pub fn new(n: usize, d: i64, offdiag: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLattice {
                reason: "form dimension must be positive".into(),
            });
        }
        Ok(HermitianFormSpec { n, d, offdiag })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct GInt {
    re: i128,
    im: i128,
}

impl GInt {
    const ZERO: GInt = GInt { re: 0, im: 0 };

    fn conj(self) -> GInt {
        GInt {
            re: self.re,
            im: -self.im,
        }
    }

    fn mul(self, o: GInt) -> GInt {
        GInt {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn sub(self, o: GInt) -> GInt {
        GInt {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }

    fn add(self, o: GInt) -> GInt {
        GInt {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }

    fn scale(self, c: i128) -> GInt {
        GInt {
            re: self.re * c,
            im: self.im * c,
        }
    }
}

/// The raw Gaussian-integer evaluation i·Σ h_{jk}[u_j·v̄_k − v_j·ū_k] as a
/// (re, im) pair. The imaginary part is identically zero for every input;
/// it is exposed so the realness invariant can be asserted directly.
pub fn pair_form_parts(
    omega: &HermitianFormSpec,
    u: &GaussianLatticeVector,
    v: &GaussianLatticeVector,
) -> Result<(i64, i64)> {
    if u.dimension() != omega.n {
        return Err(Error::DimensionMismatch {
            left: u.dimension(),
            right: omega.n,
        });
    }
    if v.dimension() != omega.n {
        return Err(Error::DimensionMismatch {
            left: v.dimension(),
            right: omega.n,
        });
    }
    let coord = |x: &GaussianLatticeVector, j: usize| GInt {
        re: x.a[j] as i128,
        im: x.b[j] as i128,
    };
    let mut acc = GInt::ZERO;
    for j in 0..omega.n {
        for k in 0..omega.n {
            let h: i128 = if j == k {
                omega.d as i128
            } else if omega.offdiag {
                1
            } else {
                0
            };
            if h == 0 {
                continue;
            }
            let term = coord(u, j)
                .mul(coord(v, k).conj())
                .sub(coord(v, j).mul(coord(u, k).conj()));
            acc = acc.add(term.scale(h));
        }
    }
    // Multiply by i: (re, im) -> (-im, re).
    let re = -acc.im;
    let im = acc.re;
    let re64 = i64::try_from(re).map_err(|_| Error::LatticeOverflow)?;
    let im64 = i64::try_from(im).map_err(|_| Error::LatticeOverflow)?;
    Ok((re64, im64))
}

/// Exact pairing of ω against the 2-cycle u ∧ v. Always an integer.
pub fn pair_form(
    omega: &HermitianFormSpec,
    u: &GaussianLatticeVector,
    v: &GaussianLatticeVector,
) -> Result<i64> {
    let (re, im) = pair_form_parts(omega, u, v)?;
    debug_assert_eq!(im, 0, "hermitian pairing must be real");
    Ok(re)
}

/// Generators of a sublattice (e.g. the covering lattice of a quotient map),
/// linearly independent over the rationals.
#[derive(Debug, Clone)]
pub struct SublatticeDecl {
    generators: Vec<GaussianLatticeVector>,
}

impl SublatticeDecl {
    pub fn new(generators: Vec<GaussianLatticeVector>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidLattice {
                reason: "sublattice needs at least one generator".into(),
            });
        }
        let dim = generators[0].dimension();
        for g in &generators {
            if g.dimension() != dim {
                return Err(Error::DimensionMismatch {
                    left: g.dimension(),
                    right: dim,
                });
            }
        }
        let decl = SublatticeDecl { generators };
        if decl.rational_rank() != decl.generators.len() {
            return Err(Error::InvalidLattice {
                reason: "sublattice generators must be linearly independent over Q".into(),
            });
        }
        Ok(decl)
    }

    pub fn generators(&self) -> &[GaussianLatticeVector] {
        &self.generators
    }

    pub fn dimension(&self) -> usize {
        self.generators[0].dimension()
    }

    fn rational_rank(&self) -> usize {
        let rows = 2 * self.dimension();
        let cols = self.generators.len();
        let mut m = vec![vec![BigRational::zero(); cols]; rows];
        for (c, g) in self.generators.iter().enumerate() {
            for (r, x) in g.real_coords().into_iter().enumerate() {
                m[r][c] = BigRational::from(BigInt::from(x));
            }
        }
        rank(&mut m)
    }

    /// Does `v` lie in the integer span of the generators? The rational
    /// solution is unique by independence; membership holds iff it exists
    /// and is integral.
    #[allow(clippy::needless_range_loop)] // elimination touches two rows at once
    pub fn contains(&self, v: &GaussianLatticeVector) -> Result<bool> {
        if v.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                left: v.dimension(),
                right: self.dimension(),
            });
        }
        let rows = 2 * self.dimension();
        let cols = self.generators.len();
        let mut m = vec![vec![BigRational::zero(); cols + 1]; rows];
        for (c, g) in self.generators.iter().enumerate() {
            for (r, x) in g.real_coords().into_iter().enumerate() {
                m[r][c] = BigRational::from(BigInt::from(x));
            }
        }
        for (r, x) in v.real_coords().into_iter().enumerate() {
            m[r][cols] = BigRational::from(BigInt::from(x));
        }
        // Forward elimination with partial (first nonzero) pivoting.
        let mut pivot_rows = Vec::new();
        let mut row = 0usize;
        for col in 0..cols {
            let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            for r in 0..rows {
                if r != row && !m[r][col].is_zero() {
                    let factor = &m[r][col] / &m[row][col];
                    for cc in col..=cols {
                        let sub = &factor * &m[row][cc];
                        m[r][cc] = &m[r][cc] - sub;
                    }
                }
            }
            pivot_rows.push((row, col));
            row += 1;
        }
        // Inconsistent rows mean v is outside even the rational span.
        for r in row..rows {
            if !m[r][cols].is_zero() {
                return Ok(false);
            }
        }
        for (r, c) in pivot_rows {
            let x = &m[r][cols] / &m[r][c];
            if !x.denom().abs().is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[allow(clippy::needless_range_loop)] // elimination touches two rows at once
fn rank(m: &mut [Vec<BigRational>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in (rank + 1)..rows {
            if !m[r][col].is_zero() {
                let factor = &m[r][col] / &m[rank][col];
                for cc in col..cols {
                    let sub = &factor * &m[rank][cc];
                    m[r][cc] = &m[r][cc] - sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// True iff both legs of the 2-cycle u ∧ v lie in the declared sublattice,
/// i.e. the cycle survives pullback along the corresponding covering map.
pub fn cycle_survives(
    u: &GaussianLatticeVector,
    v: &GaussianLatticeVector,
    sub: &SublatticeDecl,
) -> Result<bool> {
    Ok(sub.contains(u)? && sub.contains(v)?)
}

/// A surviving 2-cycle on which ω pairs nonzero.
#[derive(Debug, Clone)]
pub struct ObstructionWitness {
    pub u: GaussianLatticeVector,
    pub v: GaussianLatticeVector,
    pub pairing: i64,
}

/// Outcome of the basis-cycle search: an obstruction witness means no
/// divisor with first Chern class ω (pulled back along the covering) admits
/// an extra-zero.
#[derive(Debug, Clone)]
pub struct LatticeVerdict {
    pub obstructed: bool,
    pub witness: Option<ObstructionWitness>,
    pub searched_pairs: usize,
    pub hypothesis_warning: Option<String>,
}

/// Search the basis 2-cycles of the declared sublattice for one on which ω
/// pairs nonzero. Bilinearity makes a single nonzero basis pairing
/// conclusive; the search is exhaustive over generator pairs.
pub fn takayama_verdict(omega: &HermitianFormSpec, sub: &SublatticeDecl) -> Result<LatticeVerdict> {
    if sub.dimension() != omega.n {
        return Err(Error::DimensionMismatch {
            left: sub.dimension(),
            right: omega.n,
        });
    }
    let hypothesis_warning = if omega.n < 3 || omega.d < 4 {
        Some(format!(
            "hypothesis n >= 3 and d >= 4 not met (n = {}, d = {}); the pairing \
             computation is unchanged but very-ampleness is not guaranteed",
            omega.n, omega.d
        ))
    } else {
        None
    };
    let gens = sub.generators();
    let mut searched_pairs = 0usize;
    let mut witness = None;
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            searched_pairs += 1;
            let p = pair_form(omega, &gens[i], &gens[j])?;
            if p != 0 && witness.is_none() {
                witness = Some(ObstructionWitness {
                    u: gens[i].clone(),
                    v: gens[j].clone(),
                    pairing: p,
                });
            }
        }
    }
    Ok(LatticeVerdict {
        obstructed: witness.is_some(),
        witness,
        searched_pairs,
        hypothesis_warning,
    })
}
