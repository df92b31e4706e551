use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Solves the overdetermined but consistent system `rows * x = rhs` exactly.
/// Fails unless the solution exists and is unique.
pub(crate) fn solve_unique(rows: &[Vec<BigInt>], rhs: &[BigInt]) -> Result<Vec<BigRational>> {
    let unknowns = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            row.iter()
                .chain(std::iter::once(b))
                .map(|c| BigRational::from_integer(c.clone()))
                .collect()
        })
        .collect();

    let mut pivot_row = 0;
    for col in 0..unknowns {
        let Some(p) = (pivot_row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            return Err(Error::Domain(format!("system is underdetermined in unknown {col}")));
        };
        m.swap(pivot_row, p);
        let inv = BigRational::one() / m[pivot_row][col].clone();
        for v in m[pivot_row].iter_mut() {
            *v *= &inv;
        }
        let pivot = m[pivot_row].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == pivot_row || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot) {
                *v -= &f * pv;
            }
        }
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[unknowns].is_zero()) {
        return Err(Error::Domain("system is inconsistent".into()));
    }
    Ok(m[..unknowns].iter().map(|row| row[unknowns].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn solves_overdetermined_system() {
        // x + y = 3, x - y = 1, 2x + y = 5
        let rows = vec![ints(&[1, 1]), ints(&[1, -1]), ints(&[2, 1])];
        let sol = solve_unique(&rows, &ints(&[3, 1, 5])).unwrap();
        assert_eq!(sol, vec![BigRational::from_integer(2.into()), BigRational::from_integer(1.into())]);
    }

    #[test]
    fn rejects_inconsistent_and_singular() {
        let rows = vec![ints(&[1, 1]), ints(&[1, -1]), ints(&[2, 1])];
        assert!(solve_unique(&rows, &ints(&[3, 1, 6])).is_err());
        let rows = vec![ints(&[1, 2]), ints(&[2, 4])];
        assert!(solve_unique(&rows, &ints(&[1, 2])).is_err());
    }
}
