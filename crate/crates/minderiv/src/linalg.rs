//! Exact linear algebra over arbitrary-precision integers and rationals.
//!
//! Kernel extraction scales rational rows to integers and runs fraction-free
//! (Bareiss) elimination, so intermediate entries stay minors of the input
//! instead of exploding as free-form fractions. Pivoting always takes the
//! first nonzero entry in column order, so identical inputs give identical
//! eliminations. Basis normalization happens afterwards in rational
//! arithmetic via reduced row echelon form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::poly::Rational;

pub(crate) struct Echelon {
    pub rank: usize,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
    pub rows: Vec<Vec<BigInt>>,
}

/// Clears denominators row by row (then divides by the row content), drops
/// zero rows, and eliminates. Row scaling never changes the nullspace.
pub(crate) fn integer_echelon(rows: &[Vec<Rational>], ncols: usize) -> Echelon {
    let mut work: Vec<Vec<BigInt>> = Vec::new();
    for row in rows {
        assert_eq!(row.len(), ncols, "row length mismatch");
        if row.iter().all(Zero::is_zero) {
            continue;
        }
        work.push(scale_row(row));
    }
    bareiss(work, ncols)
}

fn scale_row(row: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for value in row {
        if !value.is_zero() {
            lcm = lcm.lcm(value.denom());
        }
    }
    let mut scaled: Vec<BigInt> = row
        .iter()
        .map(|value| value.numer() * (&lcm / value.denom()))
        .collect();
    let mut content = BigInt::zero();
    for value in &scaled {
        content = content.gcd(value);
    }
    if !content.is_zero() && !content.is_one() {
        for value in &mut scaled {
            *value = &*value / &content;
        }
    }
    scaled
}

fn bareiss(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> Echelon {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pivot_row) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot_row);
        let (upper, lower) = rows.split_at_mut(r + 1);
        let pivot_entries = &upper[r];
        let pivot = pivot_entries[c].clone();
        for row in lower {
            if row.iter().skip(c).all(Zero::is_zero) {
                continue;
            }
            let factor = std::mem::replace(&mut row[c], BigInt::zero());
            for j in (c + 1)..ncols {
                let numer = &pivot * &row[j] - &factor * &pivot_entries[j];
                let (q, rem) = numer.div_rem(&prev);
                debug_assert!(rem.is_zero(), "fraction-free division must be exact");
                row[j] = q;
            }
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    Echelon {
        rank: pivots.len(),
        pivots,
        rows,
    }
}

/// Canonical rational nullspace basis: one vector per free column, reduced
/// to row echelon form with each leading entry 1 and rows ordered by
/// leading column. Returns (rank, basis vectors).
pub(crate) fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> (usize, Vec<Vec<Rational>>) {
    let echelon = integer_echelon(rows, ncols);
    let pivot_set: Vec<bool> = {
        let mut set = vec![false; ncols];
        for &c in &echelon.pivots {
            set[c] = true;
        }
        set
    };
    let mut basis = Vec::new();
    for f in 0..ncols {
        if pivot_set[f] {
            continue;
        }
        let mut x = vec![Rational::zero(); ncols];
        x[f] = Rational::one();
        for p in (0..echelon.rank).rev() {
            let c = echelon.pivots[p];
            let row = &echelon.rows[p];
            let mut s = Rational::zero();
            for j in (c + 1)..ncols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    s += Rational::from_integer(row[j].clone()) * &x[j];
                }
            }
            if !s.is_zero() {
                x[c] = -s / Rational::from_integer(row[c].clone());
            }
        }
        basis.push(x);
    }
    rref(&mut basis);
    (echelon.rank, basis)
}

/// In-place reduced row echelon form over the rationals. Zero rows are
/// removed; remaining rows have leading entry 1 and are sorted by leading
/// column. Returns the pivot columns.
pub(crate) fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pivot_row) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot_row);
        let lead = rows[r][c].clone();
        for value in &mut rows[r] {
            *value /= &lead;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c].clone();
            for j in 0..ncols {
                let delta = &factor * &rows[r][j];
                rows[i][j] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Rank over the rationals.
pub(crate) fn rank(rows: &[Vec<Rational>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    if ncols == 0 {
        return 0;
    }
    integer_echelon(rows, ncols).rank
}

/// Inverse of a square rational matrix, or `None` when singular.
pub(crate) fn invert(matrix: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = matrix.len();
    let mut augmented: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for (i, row) in matrix.iter().enumerate() {
        assert_eq!(row.len(), n, "matrix must be square");
        let mut wide = row.clone();
        wide.extend((0..n).map(|j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
        augmented.push(wide);
    }
    let pivots = rref(&mut augmented);
    if pivots != (0..n).collect::<Vec<_>>() {
        return None;
    }
    Some(
        augmented
            .into_iter()
            .map(|row| row[n..].to_vec())
            .collect(),
    )
}
