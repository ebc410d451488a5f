//! Exact Gaussian elimination over `Q`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Reduced row echelon form of `m` in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&k| !m[k][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        if !inv.is_one() {
            for v in m[r][c..].iter_mut() {
                *v *= &inv;
            }
        }
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solution set of `a x = b`: a particular solution and a basis of the kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<Rat>,
    pub kernel: Vec<Vec<Rat>>,
}

/// Solves `a x = b` exactly; fails with [`Error::Inconsistent`] if there is no solution.
pub fn solve_general(a: &[Vec<Rat>], b: &[Rat]) -> Result<Solution> {
    if a.len() != b.len() {
        return Err(Error::Precondition(format!("{} rows but {} right-hand sides", a.len(), b.len())));
    }
    let n = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, v)| {
            let mut r = row.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.last() == Some(&n) {
        let row = pivots.len() - 1;
        return Err(Error::Inconsistent(format!("linear system inconsistent (row {row})")));
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][n].clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -m[r][f].clone();
            }
            v
        })
        .collect();
    Ok(Solution { particular: x, kernel })
}

/// Solves `a x = b`, requiring a unique solution.
pub fn solve_unique(a: &[Vec<Rat>], b: &[Rat]) -> Result<Vec<Rat>> {
    let s = solve_general(a, b)?;
    if !s.kernel.is_empty() {
        return Err(Error::Underdetermined(format!("{} free parameters remain", s.kernel.len())));
    }
    Ok(s.particular)
}

pub fn rank(a: &[Vec<Rat>]) -> usize {
    let mut m = a.to_vec();
    rref(&mut m).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{ri, rq};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&x| ri(x)).collect()).collect()
    }

    #[test]
    fn unique_solution() {
        let a = m(&[&[2, 1], &[1, 3], &[3, 4]]);
        let x = solve_unique(&a, &[ri(3), ri(4), ri(7)]).unwrap();
        assert_eq!(x, vec![ri(1), ri(1)]);
    }

    #[test]
    fn inconsistent_and_underdetermined() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert!(matches!(solve_unique(&a, &[ri(1), ri(3)]), Err(Error::Inconsistent(_))));
        assert!(matches!(solve_unique(&a, &[ri(1), ri(2)]), Err(Error::Underdetermined(_))));
        let s = solve_general(&a, &[ri(1), ri(2)]).unwrap();
        assert_eq!(s.kernel, vec![vec![ri(-1), ri(1)]]);
    }

    #[test]
    fn rank_of_rational_matrix() {
        let a = vec![vec![rq(1, 2), rq(1, 3)], vec![ri(3), ri(2)]];
        assert_eq!(rank(&a), 1);
    }
}
