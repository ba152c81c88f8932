use std::collections::HashMap;

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rat::Rat;
use crate::error::{Error, Result};

/// Largest polynomial matrix handled by cofactor expansion.
pub const COFACTOR_CAP: usize = 12;

fn check_square(a: &[Vec<Rat>]) -> Result<usize> {
    let n = a.len();
    for row in a {
        if row.len() != n {
            return Err(Error::NonSquare {
                rows: n,
                cols: row.len(),
            });
        }
    }
    Ok(n)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_rat(a: &[Vec<Rat>]) -> Result<Rat> {
    let n = check_square(a)?;
    if n == 0 {
        return Ok(Rat::one());
    }
    let mut m: Vec<Vec<Rat>> = a.to_vec();
    let mut sign = Rat::one();
    let mut prev = Rat::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Ok(Rat::zero());
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = Rat::zero();
        }
        prev = m[k][k].clone();
    }
    Ok(sign * &m[n - 1][n - 1])
}

/// Solves `A r = b` exactly by Gaussian elimination over the rationals.
pub fn solve_linear_exact(a: &[Vec<Rat>], b: &[Rat]) -> Result<Vec<Rat>> {
    let n = check_square(a)?;
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for k in 0..n {
        let pivot = (k..n)
            .find(|&i| !m[i][k].is_zero())
            .ok_or(Error::SingularSystem)?;
        m.swap(k, pivot);
        let inv = m[k][k].recip();
        for j in k..=n {
            m[k][j] = &m[k][j] * &inv;
        }
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone();
            for j in k..=n {
                let v = &f * &m[k][j];
                m[i][j] -= v;
            }
        }
    }
    Ok(m.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// `A x` for a rational matrix.
pub fn mat_vec(a: &[Vec<Rat>], x: &[Rat]) -> Vec<Rat> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(aij, xj)| aij * xj).sum())
        .collect()
}

/// Matrix with polynomial entries, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Poly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(PolyMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    /// Evaluates every entry at `x`.
    pub fn eval(&self, x: &Rat) -> Vec<Vec<Rat>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).eval(x)).collect())
            .collect()
    }
}

/// Exact determinant of a square polynomial matrix.
///
/// Degree-0 matrices go through Bareiss elimination. Otherwise the cofactor
/// expansion is memoised over column subsets (`2^n * n` products), capped at
/// [`COFACTOR_CAP`].
pub fn polymat_det(m: &PolyMatrix) -> Result<Poly> {
    if m.rows != m.cols {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Poly::one());
    }
    if m.entries.iter().all(|e| e.degree().unwrap_or(0) == 0) {
        let numeric: Vec<Vec<Rat>> = (0..n)
            .map(|i| (0..n).map(|j| m.get(i, j).coeff(0)).collect())
            .collect();
        return Ok(Poly::constant(det_rat(&numeric)?));
    }
    if n > COFACTOR_CAP {
        return Err(Error::SizeCapExceeded {
            size: n,
            cap: COFACTOR_CAP,
        });
    }
    let mut memo: HashMap<u32, Poly> = HashMap::new();
    Ok(minor_det(m, (1u32 << n) - 1, &mut memo))
}

// Determinant of rows 0..popcount(cols) restricted to the column set `cols`,
// expanded along its last row.
fn minor_det(m: &PolyMatrix, cols: u32, memo: &mut HashMap<u32, Poly>) -> Poly {
    let k = cols.count_ones() as usize;
    if k == 0 {
        return Poly::one();
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let row = k - 1;
    let mut acc = Poly::zero();
    for j in 0..m.cols {
        if cols & (1 << j) == 0 {
            continue;
        }
        let entry = m.get(row, j);
        if entry.is_zero() {
            continue;
        }
        // sign of column j's position (from the right) inside `cols`
        let after = (cols >> (j + 1)).count_ones();
        let sub = minor_det(m, cols & !(1 << j), memo);
        let term = entry * &sub;
        acc = if after % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    memo.insert(cols, acc.clone());
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::rat::{int, rat};

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn solve_examples() {
        let id = ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(
            solve_linear_exact(&id, &[int(1), int(2), int(3)]).unwrap(),
            vec![int(1), int(2), int(3)]
        );
        let diag = ints(&[&[2, 0], &[0, 4]]);
        assert_eq!(
            solve_linear_exact(&diag, &[int(1), int(1)]).unwrap(),
            vec![rat(1, 2), rat(1, 4)]
        );
        let sing = ints(&[&[1, 1], &[2, 2]]);
        assert_eq!(
            solve_linear_exact(&sing, &[int(1), int(0)]),
            Err(Error::SingularSystem)
        );
    }

    #[test]
    fn solve_rejects_bad_shapes() {
        let rect = vec![vec![int(1), int(2)]];
        assert!(matches!(
            solve_linear_exact(&rect, &[int(1)]),
            Err(Error::NonSquare { .. })
        ));
        let sq = ints(&[&[1, 0], &[0, 1]]);
        assert!(matches!(
            solve_linear_exact(&sq, &[int(1)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bareiss_matches_hand_values() {
        assert_eq!(det_rat(&ints(&[&[2, 1], &[1, 3]])).unwrap(), int(5));
        assert_eq!(det_rat(&ints(&[&[0, 1], &[1, 0]])).unwrap(), int(-1));
        assert_eq!(
            det_rat(&ints(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])).unwrap(),
            int(-3)
        );
        assert_eq!(det_rat(&ints(&[&[1, 2], &[2, 4]])).unwrap(), int(0));
        assert_eq!(det_rat(&[]).unwrap(), int(1));
    }

    #[test]
    fn polymat_det_examples() {
        let one = PolyMatrix::new(1, 1, vec![Poly::x()]).unwrap();
        assert_eq!(polymat_det(&one).unwrap(), Poly::x());

        let two = PolyMatrix::new(
            2,
            2,
            vec![Poly::x(), Poly::one(), Poly::one(), Poly::x()],
        )
        .unwrap();
        assert_eq!(polymat_det(&two).unwrap(), Poly::from_ints(&[-1, 0, 1]));

        // alpha_0 - x b_0 with a_0 = b_0 = 1 and J5 = J3^2
        let pencil = PolyMatrix::new(1, 1, vec![Poly::from_ints(&[2, -1])]).unwrap();
        assert_eq!(polymat_det(&pencil).unwrap(), Poly::from_ints(&[2, -1]));
    }

    #[test]
    fn polymat_det_rejects_rectangular() {
        let m = PolyMatrix::new(1, 2, vec![Poly::one(), Poly::x()]).unwrap();
        assert!(matches!(polymat_det(&m), Err(Error::NonSquare { .. })));
        assert!(PolyMatrix::new(2, 2, vec![Poly::one()]).is_err());
    }

    #[test]
    fn cofactor_cap() {
        let n = COFACTOR_CAP + 1;
        let m = PolyMatrix::from_fn(n, n, |i, j| if i == j { Poly::x() } else { Poly::zero() });
        assert!(matches!(
            polymat_det(&m),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn diagonal_polynomial_matrix() {
        // det diag(x - k) = prod (x - k)
        let m = PolyMatrix::from_fn(5, 5, |i, j| {
            if i == j {
                Poly::from_ints(&[-(i as i64), 1])
            } else {
                Poly::zero()
            }
        });
        let expected = (0..5).fold(Poly::one(), |acc, k| &acc * &Poly::from_ints(&[-k, 1]));
        assert_eq!(polymat_det(&m).unwrap(), expected);
    }
}
