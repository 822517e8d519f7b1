//! Matrices of polynomials: the formal coordinate matrix, its square, and
//! exact symbolic determinants by memoized cofactor expansion.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::roots::{Root, RootSets};

/// Default cap on symbolic determinant size.
pub const DET_SIZE_CAP: usize = 8;

#[derive(Clone, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix {
            rows,
            cols,
            data: vec![Polynomial::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Polynomial) -> PolyMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, data }
    }

    /// The n x n matrix with entry x_{i,j} on the nilradical cells and zero
    /// elsewhere; 1-based indexing at the call sites below.
    pub fn formal(n: u32, sets: &RootSets) -> PolyMatrix {
        PolyMatrix::from_fn(n as usize, n as usize, |i, j| {
            let (i, j) = (i as u32 + 1, j as u32 + 1);
            if i < j && sets.in_m(Root::new(i, j)) {
                Polynomial::var(Root::new(i, j))
            } else {
                Polynomial::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Polynomial {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.data[i * self.cols + j] = p;
    }

    pub fn matmul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows);
        PolyMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Polynomial::zero();
            for k in 0..self.cols {
                if self.at(i, k).is_zero() || other.at(k, j).is_zero() {
                    continue;
                }
                acc = &acc + &(self.at(i, k) * other.at(k, j));
            }
            acc
        })
    }

    /// Submatrix on 1-based row and column index lists.
    pub fn submatrix(&self, rows: &[u32], cols: &[u32]) -> PolyMatrix {
        PolyMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.at((rows[i] - 1) as usize, (cols[j] - 1) as usize).clone()
        })
    }
}

/// Exact determinant with the default size cap.
pub fn poly_det(m: &PolyMatrix) -> Result<Polynomial> {
    poly_det_capped(m, DET_SIZE_CAP)
}

/// Cofactor expansion along rows, memoized on the set of surviving columns.
pub fn poly_det_capped(m: &PolyMatrix, cap: usize) -> Result<Polynomial> {
    if m.rows() != m.cols() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let k = m.rows();
    if k > cap {
        return Err(Error::SizeCap(k, cap));
    }
    if k == 0 {
        return Ok(Polynomial::one());
    }
    let mut memo: Vec<Option<Polynomial>> = vec![None; 1usize << k];
    Ok(det_rec(m, ((1usize << k) - 1) as u32, &mut memo))
}

fn det_rec(m: &PolyMatrix, mask: u32, memo: &mut [Option<Polynomial>]) -> Polynomial {
    if mask == 0 {
        return Polynomial::one();
    }
    if let Some(p) = &memo[mask as usize] {
        return p.clone();
    }
    let k = m.rows();
    let row = k - mask.count_ones() as usize;
    let mut acc = Polynomial::zero();
    let mut sign_positive = true;
    for j in 0..k {
        if mask & (1 << j) == 0 {
            continue;
        }
        let entry = m.at(row, j);
        if !entry.is_zero() {
            let minor = det_rec(m, mask & !(1 << j), memo);
            let contribution = entry * &minor;
            acc = if sign_positive {
                &acc + &contribution
            } else {
                &acc - &contribution
            };
        }
        sign_positive = !sign_positive;
    }
    memo[mask as usize] = Some(acc.clone());
    acc
}
