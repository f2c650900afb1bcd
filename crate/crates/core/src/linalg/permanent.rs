use super::{check_finite, Complex};
use crate::{Error, Result};

/// Largest matrix accepted by [`permanent`]; Ryser's formula costs O(2ⁿ·n).
pub const MAX_PERMANENT_SIZE: usize = 20;

/// Dense row-major n×n complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<Complex>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![Complex::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SquareMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major data; `data.len()` must be a perfect
    /// square.
    pub fn from_row_major(data: Vec<Complex>) -> Result<Self> {
        let n = (data.len() as f64).sqrt().round() as usize;
        if n * n != data.len() {
            return Err(Error::domain(format!(
                "{} entries do not form a square matrix",
                data.len()
            )));
        }
        for &z in &data {
            check_finite(z, "matrix entry")?;
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::domain("rows have inconsistent length"));
        }
        SquareMatrix::from_row_major(rows.concat())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = SquareMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &SquareMatrix) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for SquareMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.n + j]
    }
}

impl From<super::Mat2> for SquareMatrix {
    fn from(m: super::Mat2) -> Self {
        SquareMatrix {
            n: 2,
            data: m.entries().to_vec(),
        }
    }
}

/// Matrix permanent by Ryser's inclusion-exclusion formula,
///
/// ```text
/// perm(A) = (-1)ⁿ Σ_{S ⊆ cols} (-1)^|S| Π_i Σ_{j ∈ S} a_ij
/// ```
///
/// walking the column subsets in Gray-code order so each step updates the
/// row sums by a single column.
pub fn permanent(m: &SquareMatrix) -> Result<Complex> {
    let n = m.dim();
    if n == 0 || n > MAX_PERMANENT_SIZE {
        return Err(Error::domain(format!(
            "permanent size {n} outside 1..={MAX_PERMANENT_SIZE}"
        )));
    }
    let mut row_sums = vec![Complex::new(0.0, 0.0); n];
    let mut in_subset = vec![false; n];
    let mut total = Complex::new(0.0, 0.0);
    let mut subset_size = 0usize;
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        if in_subset[j] {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= m[(i, j)];
            }
            subset_size -= 1;
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += m[(i, j)];
            }
            subset_size += 1;
        }
        in_subset[j] = !in_subset[j];
        let prod = row_sums
            .iter()
            .fold(Complex::new(1.0, 0.0), |acc, &s| acc * s);
        if subset_size.is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(if n.is_multiple_of(2) { total } else { -total })
}

/// `true` when every singular value of `m` is at most `1 + tol`.
///
/// Checked by a Cholesky factorisation of `(1 + tol)²·I - M†M`, which is
/// positive definite exactly when `σ_max < 1 + tol`.
pub fn is_subunitary(m: &SquareMatrix, tol: f64) -> bool {
    let n = m.dim();
    let bound = (1.0 + tol) * (1.0 + tol);
    let gram = m.adjoint().matmul(m);
    let mut l = SquareMatrix::zeros(n);
    for j in 0..n {
        let mut d = bound - gram[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d.is_nan() || d <= 0.0 {
            return false;
        }
        let d = d.sqrt();
        l[(j, j)] = Complex::new(d, 0.0);
        for i in j + 1..n {
            let mut v = -gram[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = v / d;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: &[&[f64]]) -> SquareMatrix {
        let rows: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex::new(x, 0.0)).collect())
            .collect();
        SquareMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn two_by_two() {
        let p = permanent(&real(&[&[1.0, 2.0], &[3.0, 4.0]])).unwrap();
        assert_eq!(p, Complex::new(10.0, 0.0));
    }

    #[test]
    fn all_ones_counts_permutations() {
        let p = permanent(&real(&[&[1.0; 3], &[1.0; 3], &[1.0; 3]])).unwrap();
        assert_eq!(p, Complex::new(6.0, 0.0));
        let ones = SquareMatrix::from_row_major(vec![Complex::new(1.0, 0.0); 36]).unwrap();
        assert_eq!(permanent(&ones).unwrap(), Complex::new(720.0, 0.0));
    }

    #[test]
    fn one_by_one() {
        let p = permanent(&real(&[&[-2.5]])).unwrap();
        assert_eq!(p, Complex::new(-2.5, 0.0));
    }

    #[test]
    fn size_guard() {
        assert!(matches!(
            permanent(&SquareMatrix::zeros(0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            permanent(&SquareMatrix::zeros(21)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn rejects_non_square_data() {
        assert!(SquareMatrix::from_row_major(vec![Complex::new(1.0, 0.0); 3]).is_err());
        assert!(SquareMatrix::from_rows(&[vec![Complex::new(1.0, 0.0)], vec![]]).is_err());
    }

    #[test]
    fn subunitary_check() {
        assert!(is_subunitary(&SquareMatrix::identity(4), 1e-9));
        assert!(is_subunitary(&real(&[&[0.5, 0.0], &[0.0, 0.1]]), 1e-9));
        assert!(!is_subunitary(&real(&[&[1.0, 0.0], &[0.0, 1.01]]), 1e-9));
        assert!(!is_subunitary(&real(&[&[1.0, 1.0], &[0.0, 0.0]]), 1e-9));
    }
}
