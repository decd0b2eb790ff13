use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{Matrix, Rational};
use crate::error::{Error, Result};

/// Solution set of `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    pub rank: usize,
    /// `None` when the system is inconsistent.
    pub particular: Option<Vec<Rational>>,
    /// Basis of `ker A`, `cols - rank` vectors, each scaled so that its first
    /// nonzero entry is 1.
    pub kernel_basis: Vec<Vec<Rational>>,
}

impl LinearSolution {
    pub fn is_consistent(&self) -> bool {
        self.particular.is_some()
    }

    /// `particular + sum c_i kernel_i`. Panics on an inconsistent system or
    /// a coefficient count different from the kernel dimension.
    pub fn point(&self, coeffs: &[Rational]) -> Vec<Rational> {
        let mut x = self.particular.clone().expect("system is inconsistent");
        assert_eq!(coeffs.len(), self.kernel_basis.len());
        for (c, k) in coeffs.iter().zip(&self.kernel_basis) {
            for (xi, ki) in x.iter_mut().zip(k) {
                *xi += c * ki;
            }
        }
        x
    }
}

/// Exact Gauss-Jordan elimination on `[A | b]`.
pub fn linsolve(a: &Matrix<Rational>, b: &[Rational]) -> Result<LinearSolution> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let (rows, cols) = (a.rows(), a.cols());
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..=cols {
                let t = &factor * &m[r][j];
                m[i][j] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();

    let consistent = m[rank..].iter().all(|row| row[cols].is_zero());
    let particular = consistent.then(|| {
        let mut x = vec![Rational::zero(); cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = m[i][cols].clone();
        }
        x
    });

    let mut kernel_basis = Vec::with_capacity(cols - rank);
    let mut pivot_iter = pivots.iter().peekable();
    for free in 0..cols {
        if pivot_iter.peek() == Some(&&free) {
            pivot_iter.next();
            continue;
        }
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[i][free].clone();
        }
        if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
            if !lead.is_one() {
                let inv = lead.recip();
                v.iter_mut().for_each(|x| *x *= &inv);
            }
        }
        kernel_basis.push(v);
    }

    Ok(LinearSolution { rank, particular, kernel_basis })
}
