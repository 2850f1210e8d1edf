//! Smith normal form over `Z` and its field degeneration, with unimodular
//! transforms tracked, plus the linear solvers built on it (exact solve,
//! kernels, membership in column spans).
//!
//! Over `Z` pivots are chosen by minimal absolute value, over fields by fewest
//! nonzero entries in the pivot row and column; ties break to the lowest
//! `(row, col)` index, so the computation is deterministic.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::ring::{CoeffRing, Scalar};
use crate::{Error, Result};

/// Result of `U * A * V = D` with `U`, `V` unimodular (invertible over the
/// ring) and `D` diagonal with `d_1 | d_2 | ... | d_rank` (over `Z`; over a
/// field the diagonal is `1, ..., 1, 0, ..., 0`).
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: Matrix,
    pub v: Matrix,
    pub d: Matrix,
    pub rank: usize,
    /// The nonzero diagonal entries (positive over `Z`).
    pub invariant_factors: Vec<Scalar>,
}

fn int(s: &Scalar) -> &BigInt {
    match s {
        Scalar::Int(x) => x,
        _ => unreachable!("integer scalar expected"),
    }
}

/// Smith normal form over `Z`, `Q` or a prime field.
pub fn smith_normal_form(a: &Matrix) -> Result<SnfResult> {
    match &a.ring {
        CoeffRing::Integers => Ok(snf_integers(a)),
        r if r.is_field() => Ok(snf_field(a)),
        r => Err(Error::UnsupportedRing(format!(
            "Smith normal form over {r}; reduce graded matrices slice-wise first"
        ))),
    }
}

fn snf_integers(a: &Matrix) -> SnfResult {
    let ring = CoeffRing::Integers;
    let (rows, cols) = (a.rows, a.cols);
    let mut d = a.clone();
    d.row_degrees = None;
    d.col_degrees = None;
    let mut u = Matrix::identity(ring.clone(), rows);
    let mut v = Matrix::identity(ring.clone(), cols);

    let swap_rows = |m: &mut Matrix, i: usize, j: usize| {
        if i == j {
            return;
        }
        for c in 0..m.cols {
            let x = m.at(i, c).clone();
            let y = m.at(j, c).clone();
            m.set(i, c, y);
            m.set(j, c, x);
        }
    };
    let swap_cols = |m: &mut Matrix, i: usize, j: usize| {
        if i == j {
            return;
        }
        for r in 0..m.rows {
            let x = m.at(r, i).clone();
            let y = m.at(r, j).clone();
            m.set(r, i, y);
            m.set(r, j, x);
        }
    };
    // row_i -= q * row_j, col_i -= q * col_j
    let row_sub = |m: &mut Matrix, i: usize, j: usize, q: &BigInt| {
        for c in 0..m.cols {
            let val = int(m.at(i, c)) - q * int(m.at(j, c));
            m.set(i, c, Scalar::Int(val));
        }
    };
    let col_sub = |m: &mut Matrix, i: usize, j: usize, q: &BigInt| {
        for r in 0..m.rows {
            let val = int(m.at(r, i)) - q * int(m.at(r, j));
            m.set(r, i, Scalar::Int(val));
        }
    };
    let negate_row = |m: &mut Matrix, i: usize| {
        for c in 0..m.cols {
            let val = -int(m.at(i, c));
            m.set(i, c, Scalar::Int(val));
        }
    };

    let mut t = 0usize;
    let bound = rows.min(cols);
    while t < bound {
        // Minimal absolute value pivot in the trailing submatrix, lowest (r, c) on ties.
        let mut pivot: Option<(usize, usize, BigInt)> = None;
        for r in t..rows {
            for c in t..cols {
                let val = int(d.at(r, c));
                if val.is_zero() {
                    continue;
                }
                let abs = val.abs();
                match &pivot {
                    Some((_, _, best)) if *best <= abs => {}
                    _ => pivot = Some((r, c, abs)),
                }
            }
        }
        let Some((pr, pc, _)) = pivot else { break };
        swap_rows(&mut d, t, pr);
        swap_rows(&mut u, t, pr);
        swap_cols(&mut d, t, pc);
        swap_cols(&mut v, t, pc);
        if int(d.at(t, t)).is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }

        // Balanced reduction of the pivot cross; repeats until clean because a
        // nonzero remainder becomes a strictly smaller pivot candidate.
        let mut dirty = false;
        let p = int(d.at(t, t)).clone();
        for r in t + 1..rows {
            let x = int(d.at(r, t));
            if x.is_zero() {
                continue;
            }
            let mut q = x / &p;
            let rem = x - &q * &p;
            if &rem * 2 > p {
                q += 1;
            } else if &rem * 2 <= -p.clone() {
                q -= 1;
            }
            if !q.is_zero() {
                row_sub(&mut d, r, t, &q);
                row_sub(&mut u, r, t, &q);
            }
            if !int(d.at(r, t)).is_zero() {
                dirty = true;
            }
        }
        for c in t + 1..cols {
            let x = int(d.at(t, c));
            if x.is_zero() {
                continue;
            }
            let mut q = x / &p;
            let rem = x - &q * &p;
            if &rem * 2 > p {
                q += 1;
            } else if &rem * 2 <= -p.clone() {
                q -= 1;
            }
            if !q.is_zero() {
                col_sub(&mut d, c, t, &q);
                col_sub(&mut v, c, t, &q);
            }
            if !int(d.at(t, c)).is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        // Divisibility repair: pivot must divide every later entry.
        let p = int(d.at(t, t)).clone();
        let offender = (t + 1..rows)
            .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
            .find(|&(r, c)| !(int(d.at(r, c)) % &p).is_zero());
        if let Some((r, _)) = offender {
            // Add the offending row; the next pass shrinks the pivot.
            let minus_one = -BigInt::one();
            row_sub(&mut d, t, r, &minus_one);
            row_sub(&mut u, t, r, &minus_one);
            continue;
        }
        t += 1;
    }

    let rank = t;
    let invariant_factors: Vec<Scalar> = (0..rank).map(|i| d.at(i, i).clone()).collect();
    SnfResult { u, v, d, rank, invariant_factors }
}

fn snf_field(a: &Matrix) -> SnfResult {
    let ring = a.ring.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut d = a.clone();
    d.row_degrees = None;
    d.col_degrees = None;
    let mut u = Matrix::identity(ring.clone(), rows);
    let mut v = Matrix::identity(ring.clone(), cols);

    let mut t = 0usize;
    let bound = rows.min(cols);
    while t < bound {
        // Sparsity-guided pivot: fewest nonzeros in (row + column), lowest index ties.
        let mut nz_row = vec![0usize; rows];
        let mut nz_col = vec![0usize; cols];
        for r in t..rows {
            for c in t..cols {
                if !ring.is_zero(d.at(r, c)) {
                    nz_row[r] += 1;
                    nz_col[c] += 1;
                }
            }
        }
        let mut pivot: Option<(usize, usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if ring.is_zero(d.at(r, c)) {
                    continue;
                }
                let weight = nz_row[r] + nz_col[c];
                match &pivot {
                    Some((_, _, best)) if *best <= weight => {}
                    _ => pivot = Some((r, c, weight)),
                }
            }
        }
        let Some((pr, pc, _)) = pivot else { break };
        // Swap into place.
        if pr != t {
            for c in 0..cols {
                let x = d.at(t, c).clone();
                let y = d.at(pr, c).clone();
                d.set(t, c, y);
                d.set(pr, c, x);
            }
            for c in 0..rows {
                let x = u.at(t, c).clone();
                let y = u.at(pr, c).clone();
                u.set(t, c, y);
                u.set(pr, c, x);
            }
        }
        if pc != t {
            for r in 0..rows {
                let x = d.at(r, t).clone();
                let y = d.at(r, pc).clone();
                d.set(r, t, y);
                d.set(r, pc, x);
            }
            for r in 0..cols {
                let x = v.at(r, t).clone();
                let y = v.at(r, pc).clone();
                v.set(r, t, y);
                v.set(r, pc, x);
            }
        }
        // Scale pivot to 1.
        let pinv = ring.inv(d.at(t, t)).expect("nonzero pivot");
        for c in 0..cols {
            let val = ring.mul(d.at(t, c), &pinv);
            d.set(t, c, val);
        }
        for c in 0..rows {
            let val = ring.mul(u.at(t, c), &pinv);
            u.set(t, c, val);
        }
        // Clear the cross.
        for r in 0..rows {
            if r == t {
                continue;
            }
            let f = d.at(r, t).clone();
            if ring.is_zero(&f) {
                continue;
            }
            for c in 0..cols {
                let val = ring.sub(d.at(r, c), &ring.mul(&f, d.at(t, c)));
                d.set(r, c, val);
            }
            for c in 0..rows {
                let val = ring.sub(u.at(r, c), &ring.mul(&f, u.at(t, c)));
                u.set(r, c, val);
            }
        }
        for c in t + 1..cols {
            let f = d.at(t, c).clone();
            if ring.is_zero(&f) {
                continue;
            }
            for r in 0..rows {
                let val = ring.sub(d.at(r, c), &ring.mul(&f, d.at(r, t)));
                d.set(r, c, val);
            }
            for r in 0..cols {
                let val = ring.sub(v.at(r, c), &ring.mul(&f, v.at(r, t)));
                v.set(r, c, val);
            }
        }
        t += 1;
    }

    let rank = t;
    let invariant_factors: Vec<Scalar> = (0..rank).map(|i| d.at(i, i).clone()).collect();
    SnfResult { u, v, d, rank, invariant_factors }
}

/// A basis of `ker(A)` as matrix columns. Over `Z` the basis spans a direct
/// summand (the kernel of a map of free modules is saturated), so integer
/// coordinates of kernel elements with respect to it always exist.
pub fn kernel(a: &Matrix) -> Result<Matrix> {
    let snf = smith_normal_form(a)?;
    let free: Vec<usize> = (snf.rank..a.cols).collect();
    Ok(snf.v.submatrix(&(0..a.cols).collect::<Vec<_>>(), &free))
}

/// One solution `x` of `A x = b`, if any.
pub fn solve(a: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    let sols = solve_matrix(a, &columns_to_matrix(a.ring.clone(), b))?;
    Ok(sols.map(|m| m.column(0)))
}

fn columns_to_matrix(ring: CoeffRing, col: &[Scalar]) -> Matrix {
    let mut m = Matrix::zero(ring, col.len(), 1);
    for (i, v) in col.iter().enumerate() {
        m.set(i, 0, v.clone());
    }
    m
}

/// Solve `A X = B` for all columns simultaneously; `None` if any column has no solution.
pub fn solve_matrix(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    if a.rows != b.rows {
        return Err(Error::ShapeMismatch(format!(
            "solve: {}x{} vs rhs {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let ring = a.ring.clone();
    let snf = smith_normal_form(a)?;
    let ub = snf.u.mul(b);
    let mut y = Matrix::zero(ring.clone(), a.cols, b.cols);
    for j in 0..b.cols {
        for i in 0..a.rows {
            let rhs = ub.at(i, j);
            if i < snf.rank {
                let di = snf.d.at(i, i);
                if !ring.divides(di, rhs) {
                    return Ok(None);
                }
                y.set(i, j, ring.div_exact(rhs, di));
            } else if !ring.is_zero(rhs) {
                return Ok(None);
            }
        }
    }
    Ok(Some(snf.v.mul(&y)))
}

/// Is `b` in the column span of `A`?
pub fn in_colspan(a: &Matrix, b: &[Scalar]) -> Result<bool> {
    Ok(solve(a, b)?.is_some())
}

/// Generators (columns) of `{ x : A x lies in colspan(R) }`. The result
/// generates the preimage but need not be a basis.
pub fn kernel_mod(a: &Matrix, r: &Matrix) -> Result<Matrix> {
    if r.cols == 0 {
        return kernel(a);
    }
    if a.rows != r.rows {
        return Err(Error::ShapeMismatch("kernel_mod: row mismatch".into()));
    }
    let stacked = Matrix::hstack(&[a, r]);
    let k = kernel(&stacked)?;
    Ok(k.submatrix(&(0..a.cols).collect::<Vec<_>>(), &(0..k.cols).collect::<Vec<_>>()))
}

/// One solution of `A x = b mod colspan(R)`.
pub fn solve_mod(a: &Matrix, r: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if r.cols == 0 {
        return solve(a, b);
    }
    let stacked = Matrix::hstack(&[a, r]);
    let sol = solve(&stacked, b)?;
    Ok(sol.map(|x| x[..a.cols].to_vec()))
}

/// Solve `A X = B mod colspan(R)` columnwise.
pub fn solve_matrix_mod(a: &Matrix, r: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    if r.cols == 0 {
        return solve_matrix(a, b);
    }
    let stacked = Matrix::hstack(&[a, r]);
    let sol = solve_matrix(&stacked, b)?;
    Ok(sol.map(|x| x.submatrix(&(0..a.cols).collect::<Vec<_>>(), &(0..b.cols).collect::<Vec<_>>())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CoeffRing {
        CoeffRing::Integers
    }

    #[test]
    fn snf_diag_2_3() {
        let a = Matrix::from_i64(&z(), &[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&a).unwrap();
        assert_eq!(snf.rank, 2);
        assert_eq!(snf.invariant_factors, vec![z().from_i64(1), z().from_i64(6)]);
        assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d);
        let du = snf.u.det();
        let dv = snf.v.det();
        assert!(du == z().from_i64(1) || du == z().from_i64(-1));
        assert!(dv == z().from_i64(1) || dv == z().from_i64(-1));
    }

    #[test]
    fn snf_divisibility_chain() {
        let a = Matrix::from_i64(&z(), &[&[4, 6, 2], &[6, 12, 4], &[2, 4, 8]]);
        let snf = smith_normal_form(&a).unwrap();
        assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d);
        for i in 1..snf.rank {
            let prev = &snf.invariant_factors[i - 1];
            let cur = &snf.invariant_factors[i];
            assert!(z().divides(prev, cur), "divisibility {prev} | {cur}");
        }
        let du = snf.u.det();
        let dv = snf.v.det();
        assert!(du == z().from_i64(1) || du == z().from_i64(-1));
        assert!(dv == z().from_i64(1) || dv == z().from_i64(-1));
    }

    #[test]
    fn snf_field() {
        let f2 = CoeffRing::prime_field(2).unwrap();
        let a = Matrix::from_i64(&f2, &[&[1, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        let snf = smith_normal_form(&a).unwrap();
        assert_eq!(snf.rank, 2);
        assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d);
    }

    #[test]
    fn kernel_and_solve() {
        // x + y + z = 0 over Z: kernel rank 2, saturated.
        let a = Matrix::from_i64(&z(), &[&[1, 1, 1]]);
        let k = kernel(&a).unwrap();
        assert_eq!(k.cols, 2);
        assert!(a.mul(&k).is_zero());

        let a = Matrix::from_i64(&z(), &[&[2, 0], &[0, 3]]);
        let b = vec![z().from_i64(4), z().from_i64(9)];
        let x = solve(&a, &b).unwrap().unwrap();
        assert_eq!(a.apply(&x), b);
        let b_bad = vec![z().from_i64(1), z().from_i64(0)];
        assert!(solve(&a, &b_bad).unwrap().is_none());
    }

    #[test]
    fn kernel_mod_picks_up_relations() {
        // {x : 2x = 0 mod 6} = 3Z inside Z.
        let a = Matrix::from_i64(&z(), &[&[2]]);
        let r = Matrix::from_i64(&z(), &[&[6]]);
        let k = kernel_mod(&a, &r).unwrap();
        // The generators must span 3Z: gcd of entries is 3.
        let snf = smith_normal_form(&k).unwrap();
        assert_eq!(snf.invariant_factors, vec![z().from_i64(3)]);
    }

    #[test]
    fn solve_mod_works() {
        // 2x = 4 mod 6 has solution x = 2 (among others).
        let a = Matrix::from_i64(&z(), &[&[2]]);
        let r = Matrix::from_i64(&z(), &[&[6]]);
        let b = vec![z().from_i64(4)];
        let x = solve_mod(&a, &r, &b).unwrap().unwrap();
        // verify 2x - 4 divisible by 6
        let two_x = z().mul(&z().from_i64(2), &x[0]);
        let diff = z().sub(&two_x, &b[0]);
        assert!(z().divides(&z().from_i64(6), &diff));
    }
}
