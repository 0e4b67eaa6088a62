//! Kernels of large sparse rational systems.
//!
//! The kernel is computed modulo a sequence of word-sized primes, lifted by
//! Chinese remaindering and rational reconstruction, and then checked
//! against every original equation in exact arithmetic. The check is what
//! makes the result exact: verified candidates lie in the rational kernel,
//! and the rational kernel can be no larger than any modular kernel.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::scalar::{rational_reconstruction, Field, Fp, Rational};

/// Primes below 2^31, so that products of residues fit in a `u64`.
fn solver_primes() -> impl Iterator<Item = u64> {
    let mut candidate: u64 = (1 << 31) - 1;
    std::iter::from_fn(move || {
        while !super::scalar::is_prime_u64(candidate) {
            candidate -= 2;
        }
        let p = candidate;
        candidate -= 2;
        Some(p)
    })
}

/// Past this many primes without a verified lift, fall back to exact
/// elimination over the rationals.
const MAX_PRIMES: usize = 64;

/// Homogeneous linear system `A x = 0` with sparse rational rows.
#[derive(Clone, Debug, Default)]
pub struct SparseSystem {
    ncols: usize,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl SparseSystem {
    pub fn new(ncols: usize) -> Self {
        SparseSystem { ncols, rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Adds an equation; zero coefficients are dropped, empty rows ignored.
    pub fn push_row(&mut self, row: impl IntoIterator<Item = (usize, Rational)>) {
        let row: Vec<(usize, Rational)> = row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        debug_assert!(row.iter().all(|(j, _)| *j < self.ncols));
        if !row.is_empty() {
            self.rows.push(row);
        }
    }

    pub fn is_solution(&self, v: &[Rational]) -> bool {
        self.rows.iter().all(|row| {
            let mut acc = Rational::zero();
            for (j, c) in row {
                if !v[*j].is_zero() {
                    acc += c * &v[*j];
                }
            }
            acc.is_zero()
        })
    }

    /// Canonical kernel basis (same normalization as
    /// [`Matrix::kernel_basis`]).
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        if self.rows.is_empty() {
            return identity_basis(self.ncols);
        }
        let mut best: Option<ModularKernel> = None;
        let mut residues: Vec<Vec<BigInt>> = Vec::new();
        let mut modulus = BigInt::one();
        let mut previous: Option<Vec<Vec<Rational>>> = None;

        for p in solver_primes().take(MAX_PRIMES) {
            let Some(mk) = self.modular_kernel(p) else { continue };
            let replace = match &best {
                None => true,
                Some(b) => match mk.pivots.len().cmp(&b.pivots.len()) {
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Equal => mk.pivots < b.pivots,
                },
            };
            if replace {
                residues = mk.entries.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
                modulus = BigInt::from(p);
                best = Some(mk);
                previous = None;
            } else if best.as_ref().is_some_and(|b| b.pivots == mk.pivots) {
                let pb = BigInt::from(p);
                for (acc_row, new_row) in residues.iter_mut().zip(&mk.entries) {
                    for (acc, &r) in acc_row.iter_mut().zip(new_row) {
                        *acc = crt(acc, &modulus, r, &pb);
                    }
                }
                modulus *= &pb;
            } else {
                continue;
            }

            let basis = best.as_ref().expect("set above");
            if basis.free.is_empty() {
                return Vec::new();
            }
            let Some(candidate) = reconstruct(basis, &residues, &modulus, self.ncols) else {
                continue;
            };
            if previous.as_ref() == Some(&candidate) && candidate.iter().all(|v| self.is_solution(v)) {
                return candidate;
            }
            previous = Some(candidate);
        }
        self.kernel_exact()
    }

    /// Kernel by exact Bareiss elimination on the dense matrix.
    pub fn kernel_exact(&self) -> Vec<Vec<Rational>> {
        if self.rows.is_empty() {
            return identity_basis(self.ncols);
        }
        let mut m = Matrix::<Rational>::zeros(self.rows.len(), self.ncols);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row {
                m[(i, *j)] = c.clone();
            }
        }
        m.kernel_basis()
    }

    fn modular_kernel(&self, p: u64) -> Option<ModularKernel> {
        let mut rows: Vec<Vec<(usize, Fp)>> = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut r = Vec::with_capacity(row.len());
            for (j, c) in row {
                r.push((*j, Fp::from_rational(c, p)?));
            }
            rows.push(r);
        }
        // Random compression keeps the row space with high probability; a
        // rank drop only costs a retry with the next prime.
        let target = self.ncols + 8;
        let dense = if rows.len() > target {
            let mut state = p ^ 0x9E37_79B9_7F4A_7C15;
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state
            };
            let mut m = vec![vec![0u64; self.ncols]; target];
            for row in &rows {
                for out in m.iter_mut() {
                    let w = next() % p;
                    if w == 0 {
                        continue;
                    }
                    for (j, c) in row {
                        out[*j] = (out[*j] + w * c.value()) % p;
                    }
                }
            }
            m
        } else {
            let mut m = vec![vec![0u64; self.ncols]; rows.len()];
            for (i, row) in rows.iter().enumerate() {
                for (j, c) in row {
                    m[i][*j] = c.value();
                }
            }
            m
        };
        let matrix =
            Matrix::from_rows(dense.into_iter().map(|r| r.into_iter().map(|x| Fp::new(x, p)).collect()).collect())
                .expect("rectangular");
        let (rref, pivots) = matrix.gauss_jordan();
        let mut is_pivot = vec![false; self.ncols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.ncols).filter(|&c| !is_pivot[c]).collect();
        // entries[f][k] = −rref[k][free[f]]
        let entries = free.iter().map(|&f| rref.iter().map(|row| (-row[f]).value()).collect()).collect();
        Some(ModularKernel { pivots, free, entries })
    }
}

struct ModularKernel {
    pivots: Vec<usize>,
    free: Vec<usize>,
    entries: Vec<Vec<u64>>,
}

fn identity_basis(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::one();
            v
        })
        .collect()
}

fn crt(a: &BigInt, m: &BigInt, b: u64, p: &BigInt) -> BigInt {
    // x ≡ a (mod m), x ≡ b (mod p)
    let a_mod_p = a % p;
    let m_mod_p = m % p;
    let pu: u64 = p.try_into().expect("word prime");
    let diff = Fp::new(((BigInt::from(b) - a_mod_p) % p + p).try_into().expect("residue"), pu);
    let inv = Fp::new(m_mod_p.try_into().expect("residue"), pu).inv();
    a + m * BigInt::from((diff * inv).value())
}

fn reconstruct(
    mk: &ModularKernel,
    residues: &[Vec<BigInt>],
    modulus: &BigInt,
    ncols: usize,
) -> Option<Vec<Vec<Rational>>> {
    let mut out = Vec::with_capacity(mk.free.len());
    for (f, row) in mk.free.iter().zip(residues) {
        let mut v = vec![Rational::zero(); ncols];
        v[*f] = Rational::one();
        for (k, &pc) in mk.pivots.iter().enumerate() {
            v[pc] = rational_reconstruction(&row[k], modulus)?;
        }
        out.push(v);
    }
    Some(out)
}
