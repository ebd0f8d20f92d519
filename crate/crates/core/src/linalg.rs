//! Exact rank by fraction-free (Bareiss) elimination over the integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Rank of an integer matrix given as rows. Consumes its input.
pub fn integer_rank(mut rows: Vec<Vec<BigInt>>) -> Result<usize> {
    let Some(width) = rows.first().map(Vec::len) else {
        return Ok(0);
    };
    if let Some(bad) = rows.iter().find(|r| r.len() != width) {
        return Err(Error::DimensionMismatch {
            expected: width,
            found: bad.len(),
        });
    }
    let height = rows.len();
    let mut rank = 0;
    let mut prev_pivot = BigInt::one();
    for col in 0..width {
        if rank == height {
            break;
        }
        let Some(pivot_row) = (rank..height).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let pivot = rows[rank][col].clone();
        for r in rank + 1..height {
            let factor = rows[r][col].clone();
            for c in col..width {
                // Bareiss update; the division is exact.
                let v = &pivot * &rows[r][c] - &factor * &rows[rank][c];
                rows[r][c] = v / &prev_pivot;
            }
        }
        prev_pivot = pivot;
        rank += 1;
    }
    Ok(rank)
}

/// Rank of a rational matrix: each row is scaled to integers first.
pub fn rational_rank(rows: &[Vec<Rational>]) -> Result<usize> {
    let int_rows = rows
        .iter()
        .map(|row| {
            let den = Rational::from_integer(rational::common_denominator(row));
            row.iter().map(|x| (x * &den).to_integer()).collect()
        })
        .collect();
    integer_rank(int_rows)
}

/// Rank of small-integer rows such as ±1 vertex coordinates.
pub fn small_rank(rows: &[Vec<i8>]) -> Result<usize> {
    integer_rank(
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn identity_and_dependent_rows() {
        let rows = vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]];
        assert_eq!(small_rank(&rows).unwrap(), 2);
        assert_eq!(small_rank(&[vec![0, 0], vec![0, 0]]).unwrap(), 0);
        assert_eq!(small_rank(&[]).unwrap(), 0);
    }

    #[test]
    fn rational_rows() {
        let rows = vec![
            vec![frac(1, 2), frac(1, 3)],
            vec![int(3), int(2)],
            vec![int(1), int(0)],
        ];
        assert_eq!(rational_rank(&rows).unwrap(), 2);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(small_rank(&[vec![1, 0], vec![1]]).is_err());
    }

    #[test]
    fn needs_row_swap() {
        let rows = vec![vec![0, 1, 1], vec![0, 2, 2], vec![1, 0, 0]];
        assert_eq!(small_rank(&rows).unwrap(), 2);
    }

    #[test]
    fn sylvester_hadamard_full_rank() {
        let mut h = vec![vec![1i8]];
        for _ in 0..4 {
            let n = h.len();
            let mut next = vec![vec![0i8; 2 * n]; 2 * n];
            for i in 0..n {
                for j in 0..n {
                    next[i][j] = h[i][j];
                    next[i][j + n] = h[i][j];
                    next[i + n][j] = h[i][j];
                    next[i + n][j + n] = -h[i][j];
                }
            }
            h = next;
        }
        assert_eq!(small_rank(&h).unwrap(), 16);
    }
}
