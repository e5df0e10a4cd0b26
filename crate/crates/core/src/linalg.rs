//! Dense matrices over a [`FieldSpec`] and their ranks.
//!
//! Two independent routes compute rank:
//!
//! * [`rank_modp`]: Gaussian elimination over F_p with first-nonzero
//!   pivoting on `u64` residues. This is the kernel behind every Hilbert
//!   function value.
//! * [`rank_exact`]: fraction-free (Bareiss) elimination over the integers
//!   after clearing each row's denominators. Slower, used as the
//!   characteristic-zero oracle.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, PrimeField, Scalar};

/// Row-major dense matrix whose entries all live in `field`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
    field: FieldSpec,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>, field: FieldSpec) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.field() != field) {
            return Err(Error::InvalidInput(format!(
                "entry in {} inside a matrix over {field}",
                bad.field()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
            field,
        })
    }

    /// Integer rows interpreted in `field`.
    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|&v| Scalar::from_i64(field, v))
            .collect();
        Self::new(rows.len(), cols, entries, field)
    }

    pub(crate) fn from_residues(
        field: PrimeField,
        rows: usize,
        cols: usize,
        data: Vec<u64>,
    ) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self {
            rows,
            cols,
            entries: data
                .into_iter()
                .map(|value| Scalar::Mod { value, field })
                .collect(),
            field: FieldSpec::Prime(field),
        }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let mut entries = vec![Scalar::zero(field); n * n];
        for i in 0..n {
            entries[i * n + i] = Scalar::one(field);
        }
        Self {
            rows: n,
            cols: n,
            entries,
            field,
        }
    }

    pub fn zeros(rows: usize, cols: usize, field: FieldSpec) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Scalar::zero(field); rows * cols],
            field,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Scalar] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    /// Stacks the rows of `other` under `self`.
    pub fn vstack(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.cols || self.field != other.field {
            return Err(Error::InvalidInput("vstack shape or field mismatch".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
            field: self.field,
        })
    }

    /// Rank in whichever field the matrix lives in.
    pub fn rank(&self) -> Result<usize> {
        match self.field {
            FieldSpec::Prime(_) => rank_modp(self),
            FieldSpec::Rational => rank_exact(self),
        }
    }
}

/// Rank over F_p. The matrix is copied; the input is untouched.
pub fn rank_modp(m: &DenseMatrix) -> Result<usize> {
    let field = m
        .field
        .as_prime()
        .ok_or_else(|| Error::InvalidInput("rank_modp needs a prime-field matrix".into()))?;
    let mut data = Vec::with_capacity(m.entries.len());
    for e in &m.entries {
        match e {
            Scalar::Mod { value, field: f } if *f == field => data.push(*value),
            other => {
                return Err(Error::InvalidInput(format!(
                    "entry in {} inside a matrix over {field}",
                    other.field()
                )))
            }
        }
    }
    Ok(rank_residues(field, m.rows, m.cols, &mut data))
}

/// In-place Gaussian elimination on row-major residues; returns the rank.
/// `data` is left in row-echelon form.
pub fn rank_residues(field: PrimeField, rows: usize, cols: usize, data: &mut [u64]) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| data[r * cols + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for j in col..cols {
                data.swap(pivot * cols + j, rank * cols + j);
            }
        }
        let inv = field
            .inv(data[rank * cols + col])
            .expect("pivot is nonzero");
        for j in col..cols {
            data[rank * cols + j] = field.mul(data[rank * cols + j], inv);
        }
        let (head, tail) = data.split_at_mut((rank + 1) * cols);
        let pivot_row = &head[rank * cols..];
        for row in tail.chunks_exact_mut(cols) {
            let factor = row[col];
            if factor == 0 {
                continue;
            }
            for j in col..cols {
                row[j] = field.sub(row[j], field.mul(factor, pivot_row[j]));
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over the rationals by Bareiss elimination on integer-cleared rows.
pub fn rank_exact(m: &DenseMatrix) -> Result<usize> {
    if !m.field.is_rational() {
        return Err(Error::InvalidInput(
            "rank_exact needs an exact-rational matrix".into(),
        ));
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(m.rows);
    for r in 0..m.rows {
        let mut q_row: Vec<&BigRational> = Vec::with_capacity(m.cols);
        for e in m.row(r) {
            match e {
                Scalar::Rational(q) => q_row.push(q),
                other => {
                    return Err(Error::InvalidInput(format!(
                        "entry in {} inside a rational matrix",
                        other.field()
                    )))
                }
            }
        }
        let lcm = q_row
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        rows.push(
            q_row
                .into_iter()
                .map(|q| q.numer() * (&lcm / q.denom()))
                .collect(),
        );
    }
    Ok(bareiss_rank(rows, m.cols))
}

/// Fraction-free elimination. After each pivot step every active entry is a
/// minor of the original matrix, so the division by the previous pivot is
/// exact.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pivot, rank);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            for j in col + 1..cols {
                let v = &pivot_row[col] * &row[j] - &row[col] * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Determinant of a square integer matrix, by fraction-free elimination.
pub fn determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..n {
        let Some(pivot) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if pivot != k {
            a.swap(pivot, k);
            negate = !negate;
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            for j in k + 1..n {
                row[j] = (&pivot_row[k] * &row[j] - &row[k] * &pivot_row[j]) / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    if negate {
        -prev
    } else {
        prev
    }
}

/// Basis of the right kernel `{v : m v = 0}` over the matrix's own field,
/// by reduction to reduced row-echelon form.
pub fn kernel_basis(m: &DenseMatrix) -> Vec<Vec<Scalar>> {
    let (rows, cols, field) = (m.rows, m.cols, m.field);
    let mut a: Vec<Vec<Scalar>> = (0..rows).map(|r| m.row(r).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        let inv = a[rank][col].inv().expect("pivot is nonzero");
        for x in &mut a[rank][col..] {
            *x = &*x * &inv;
        }
        let pivot_row = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = &*x - &(&factor * y);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Scalar::zero(field); cols];
            v[free] = Scalar::one(field);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[r][free];
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn identity_rank_modp() {
        assert_eq!(rank_modp(&DenseMatrix::identity(3, fp(101))).unwrap(), 3);
    }

    #[test]
    fn dependent_rows_mod_7() {
        let m = DenseMatrix::from_i64_rows(fp(7), &[vec![1, 2, 3], vec![2, 4, 6]]).unwrap();
        assert_eq!(rank_modp(&m).unwrap(), 1);
    }

    #[test]
    fn small_determinants() {
        let m = |rows: &[&[i64]]| -> Vec<Vec<BigInt>> {
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect()
        };
        assert_eq!(determinant(m(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        // the first pivot needs a row swap
        assert_eq!(
            determinant(m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 4]])),
            BigInt::from(-4)
        );
        assert_eq!(
            determinant(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])),
            BigInt::zero()
        );
        assert_eq!(
            determinant(m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]])),
            BigInt::from(6)
        );
        assert_eq!(determinant(Vec::new()), BigInt::one());
    }

    #[test]
    fn zero_matrix_rank() {
        assert_eq!(rank_modp(&DenseMatrix::zeros(4, 4, fp(101))).unwrap(), 0);
        assert_eq!(
            rank_exact(&DenseMatrix::zeros(4, 4, FieldSpec::Rational)).unwrap(),
            0
        );
    }

    #[test]
    fn rank_exact_proportional_rational_rows() {
        let q = FieldSpec::Rational;
        let entries = vec![
            Scalar::from_ratio(q, 1, 2).unwrap(),
            Scalar::from_i64(q, 1),
            Scalar::from_i64(q, 1),
            Scalar::from_i64(q, 2),
        ];
        let m = DenseMatrix::new(2, 2, entries, q).unwrap();
        assert_eq!(rank_exact(&m).unwrap(), 1);
        assert_eq!(rank_exact(&DenseMatrix::identity(5, q)).unwrap(), 5);
    }

    #[test]
    fn wrong_field_is_rejected() {
        let m = DenseMatrix::identity(2, FieldSpec::Rational);
        assert!(matches!(rank_modp(&m), Err(Error::InvalidInput(_))));
        let m = DenseMatrix::identity(2, fp(7));
        assert!(matches!(rank_exact(&m), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn mixed_entries_are_rejected_at_construction() {
        let entries = vec![Scalar::one(fp(7)), Scalar::one(fp(11))];
        assert!(matches!(
            DenseMatrix::new(1, 2, entries, fp(7)),
            Err(Error::InvalidInput(_))
        ));
        assert!(DenseMatrix::new(2, 2, vec![Scalar::one(fp(7))], fp(7)).is_err());
    }

    #[test]
    fn rank_modp_does_not_mutate_input() {
        let m = DenseMatrix::from_i64_rows(fp(7), &[vec![0, 2], vec![3, 1]]).unwrap();
        let before = m.clone();
        assert_eq!(rank_modp(&m).unwrap(), 2);
        assert_eq!(m, before);
    }

    #[test]
    fn characteristic_can_drop_rank() {
        // det = 7
        let rows = [vec![1, 2], vec![3, 13]];
        let q = DenseMatrix::from_i64_rows(FieldSpec::Rational, &rows).unwrap();
        let m7 = DenseMatrix::from_i64_rows(fp(7), &rows).unwrap();
        assert_eq!(rank_exact(&q).unwrap(), 2);
        assert_eq!(rank_modp(&m7).unwrap(), 1);
    }

    #[test]
    fn kernel_of_rank_one_matrix() {
        let m = DenseMatrix::from_i64_rows(FieldSpec::Rational, &[vec![1, 2, 3]]).unwrap();
        let ker = kernel_basis(&m);
        assert_eq!(ker.len(), 2);
        for v in ker {
            let dot = (0..3).fold(Scalar::zero(FieldSpec::Rational), |acc, j| {
                &acc + &(m.get(0, j) * &v[j])
            });
            assert!(dot.is_zero());
        }
    }
}
