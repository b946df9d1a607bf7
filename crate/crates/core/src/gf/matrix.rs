use std::fmt;

use super::{FFElem, FiniteField};

/// Dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FiniteField,
    rows: usize,
    cols: usize,
    data: Vec<FFElem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &FiniteField, rows: usize, cols: usize) -> Self {
        Self { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &FiniteField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows of equal length. Panics on ragged input or
    /// foreign elements.
    pub fn from_rows(field: &FiniteField, rows: Vec<Vec<FFElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            for e in row {
                assert!(field.contains(&e), "mixed-field matrix entry");
                data.push(e);
            }
        }
        Self { field: field.clone(), rows: r, cols: c, data }
    }

    pub fn from_ints(field: &FiniteField, rows: &[&[i64]]) -> Self {
        Self::from_rows(field, rows.iter().map(|r| r.iter().map(|&v| field.from_int(v)).collect()).collect())
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &FFElem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FFElem) {
        assert!(self.field.contains(&v), "mixed-field matrix entry");
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FFElem::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        assert_eq!(self.field, rhs.field, "mixed-field matrix product");
        let mut out = Self::zeros(&self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, k: &FFElem) -> Matrix {
        Self { field: self.field.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    fn zip_with(&self, rhs: &Matrix, f: impl Fn(&FFElem, &FFElem) -> FFElem) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Self { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn pow(&self, mut exp: u64) -> Matrix {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut acc = Self::identity(&self.field, self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// Copies `block` into this matrix with its top-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn rank(&self) -> usize {
        matrix_rank(self)
    }
}

/// Rank by Gaussian elimination with first-nonzero pivoting.
pub fn matrix_rank(m: &Matrix) -> usize {
    let mut a = m.data.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r * cols + col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            for c in 0..cols {
                a.swap(pivot * cols + c, rank * cols + c);
            }
        }
        let inv = a[rank * cols + col].inv().expect("pivot is nonzero");
        for r in rank + 1..rows {
            let factor = &a[r * cols + col] * &inv;
            if factor.is_zero() {
                continue;
            }
            for c in col..cols {
                let v = &a[r * cols + c] - &(&factor * &a[rank * cols + c]);
                a[r * cols + c] = v;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_examples() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(matrix_rank(&Matrix::identity(&f5, 3)), 3);
        assert_eq!(matrix_rank(&Matrix::zeros(&f5, 2, 4)), 0);
        assert_eq!(matrix_rank(&Matrix::from_ints(&f5, &[&[1, 2], &[2, 4]])), 1);
        assert_eq!(matrix_rank(&Matrix::zeros(&f5, 0, 0)), 0);
        assert_eq!(matrix_rank(&Matrix::zeros(&f5, 0, 3)), 0);
    }

    #[test]
    fn rank_depends_on_characteristic() {
        // det = 4 - 6 = -2: singular only over F_2
        let rows: &[&[i64]] = &[&[1, 2], &[3, 4]];
        assert_eq!(matrix_rank(&Matrix::from_ints(&make_field(2, 1).unwrap(), rows)), 1);
        assert_eq!(matrix_rank(&Matrix::from_ints(&make_field(3, 1).unwrap(), rows)), 2);
    }

    proptest! {
        #[test]
        fn rank_invariants(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6, sparse in any::<bool>()) {
            let f = make_field(3, 2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let data: Vec<Vec<FFElem>> = (0..rows)
                .map(|_| (0..cols).map(|_| {
                    let e = f.random(&mut rng);
                    if sparse && rand::Rng::random_bool(&mut rng, 0.6) { f.zero() } else { e }
                }).collect())
                .collect();
            let m = Matrix::from_rows(&f, data.clone());
            let r = matrix_rank(&m);
            prop_assert!(r <= rows.min(cols));
            prop_assert_eq!(r, matrix_rank(&m.transpose()));
            let mut shuffled = data;
            shuffled.shuffle(&mut rng);
            prop_assert_eq!(r, matrix_rank(&Matrix::from_rows(&f, shuffled)));
        }
    }
}
