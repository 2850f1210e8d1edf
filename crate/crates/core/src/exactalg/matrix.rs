//! Dense matrices over the supported rings, with the structural operations the
//! rest of the engine is built from. The convention throughout is column-vector
//! action: a `rows x cols` matrix is a map from a rank-`cols` free module to a
//! rank-`rows` free module.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::ring::{CoeffRing, Scalar};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub ring: CoeffRing,
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
    /// Generator degrees of the target (rows) and source (cols) over a graded
    /// ring; `None` over ungraded rings.
    pub row_degrees: Option<Vec<i64>>,
    pub col_degrees: Option<Vec<i64>>,
}

impl Matrix {
    pub fn zero(ring: CoeffRing, rows: usize, cols: usize) -> Self {
        let z = ring.zero();
        Matrix { data: vec![z; rows * cols], ring, rows, cols, row_degrees: None, col_degrees: None }
    }

    pub fn identity(ring: CoeffRing, n: usize) -> Self {
        let mut m = Matrix::zero(ring.clone(), n, n);
        let one = ring.one();
        for i in 0..n {
            m.set(i, i, one.clone());
        }
        m
    }

    pub fn from_rows(ring: CoeffRing, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend(row);
        }
        Ok(Matrix { ring, rows: r, cols: c, data, row_degrees: None, col_degrees: None })
    }

    /// Test convenience: build from integer literals.
    pub fn from_i64(ring: &CoeffRing, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Matrix::zero(ring.clone(), r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, ring.from_i64(v));
            }
        }
        m
    }

    pub fn with_degrees(mut self, row_degrees: Vec<i64>, col_degrees: Vec<i64>) -> Self {
        assert_eq!(row_degrees.len(), self.rows);
        assert_eq!(col_degrees.len(), self.cols);
        self.row_degrees = Some(row_degrees);
        self.col_degrees = Some(col_degrees);
        self
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    /// Iterate nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        let ring = self.ring.clone();
        (0..self.rows).flat_map(move |r| {
            let ring = ring.clone();
            (0..self.cols).filter_map(move |c| {
                let v = self.at(r, c);
                if ring.is_zero(v) {
                    None
                } else {
                    Some((r, c, v))
                }
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.ring.is_zero(v))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(self.ring.clone(), self.rows)
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(self.ring.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.at(r, c).clone());
            }
        }
        m.row_degrees = self.col_degrees.clone();
        m.col_degrees = self.row_degrees.clone();
        m
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add shape");
        let mut m = self.clone();
        for i in 0..self.data.len() {
            m.data[i] = self.ring.add(&self.data[i], &other.data[i]);
        }
        m
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Matrix {
        let mut m = self.clone();
        for v in m.data.iter_mut() {
            *v = self.ring.neg(v);
        }
        m
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let mut m = self.clone();
        for v in m.data.iter_mut() {
            *v = self.ring.mul(v, s);
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "mul shape {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let ring = &self.ring;
        let mut m = Matrix::zero(ring.clone(), self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if ring.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let prod = ring.mul(a, b);
                    let cur = m.at(r, c).clone();
                    m.set(r, c, ring.add(&cur, &prod));
                }
            }
        }
        m.row_degrees = self.row_degrees.clone();
        m.col_degrees = other.col_degrees.clone();
        m
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "apply shape");
        let ring = &self.ring;
        (0..self.rows)
            .map(|r| {
                let mut acc = ring.zero();
                for c in 0..self.cols {
                    if !ring.is_zero(self.at(r, c)) && !ring.is_zero(&v[c]) {
                        acc = ring.add(&acc, &ring.mul(self.at(r, c), &v[c]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        assert!(!parts.is_empty());
        let rows = parts[0].rows;
        let ring = parts[0].ring.clone();
        assert!(parts.iter().all(|p| p.rows == rows && p.ring == ring), "hstack shape");
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zero(ring, rows, cols);
        let mut off = 0;
        for p in parts {
            for r in 0..rows {
                for c in 0..p.cols {
                    m.set(r, off + c, p.at(r, c).clone());
                }
            }
            off += p.cols;
        }
        m
    }

    pub fn vstack(parts: &[&Matrix]) -> Matrix {
        assert!(!parts.is_empty());
        let cols = parts[0].cols;
        let ring = parts[0].ring.clone();
        assert!(parts.iter().all(|p| p.cols == cols && p.ring == ring), "vstack shape");
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut m = Matrix::zero(ring, rows, cols);
        let mut off = 0;
        for p in parts {
            for r in 0..p.rows {
                for c in 0..cols {
                    m.set(off + r, c, p.at(r, c).clone());
                }
            }
            off += p.rows;
        }
        m
    }

    pub fn block_diag(parts: &[&Matrix]) -> Matrix {
        assert!(!parts.is_empty());
        let ring = parts[0].ring.clone();
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zero(ring, rows, cols);
        let (mut ro, mut co) = (0, 0);
        for p in parts {
            for r in 0..p.rows {
                for c in 0..p.cols {
                    m.set(ro + r, co + c, p.at(r, c).clone());
                }
            }
            ro += p.rows;
            co += p.cols;
        }
        m
    }

    /// Copy `sub` into position with upper-left corner `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, sub: &Matrix) {
        assert!(r0 + sub.rows <= self.rows && c0 + sub.cols <= self.cols, "block bounds");
        for r in 0..sub.rows {
            for c in 0..sub.cols {
                self.set(r0 + r, c0 + c, sub.at(r, c).clone());
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zero(self.ring.clone(), rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.at(r, c).clone());
            }
        }
        m
    }

    /// Kronecker product: `(a (x) b)[(i1,i2),(j1,j2)] = a[i1,j1] * b[i2,j2]`,
    /// row index `i1 * b.rows + i2`.
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        let ring = &self.ring;
        let mut m = Matrix::zero(ring.clone(), self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.at(r1, c1);
                if ring.is_zero(a) {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = other.at(r2, c2);
                        if ring.is_zero(b) {
                            continue;
                        }
                        m.set(r1 * other.rows + r2, c1 * other.cols + c2, ring.mul(a, b));
                    }
                }
            }
        }
        m
    }

    pub fn map_entries(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        let mut m = self.clone();
        for v in m.data.iter_mut() {
            *v = f(v);
        }
        m
    }

    /// Entry-wise base change (`Z -> Q`, `Z -> F_p`, identity).
    pub fn base_change(&self, target: &CoeffRing) -> Result<Matrix> {
        let mut m = Matrix::zero(target.clone(), self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.ring.convert(self.at(r, c), target)?);
            }
        }
        m.row_degrees = self.row_degrees.clone();
        m.col_degrees = self.col_degrees.clone();
        Ok(m)
    }

    /// Determinant. Fraction-free elimination over `Z`, Gaussian elimination
    /// over fields, Laplace expansion over polynomial rings (small sizes only).
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "det of non-square");
        let n = self.rows;
        if n == 0 {
            return self.ring.one();
        }
        match &self.ring {
            CoeffRing::Integers => Scalar::Int(self.det_bareiss()),
            r if r.is_field() => self.det_gauss(),
            _ => self.det_laplace(),
        }
    }

    fn det_bareiss(&self) -> BigInt {
        let n = self.rows;
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| match self.at(r, c) {
                        Scalar::Int(x) => x.clone(),
                        _ => unreachable!(),
                    })
                    .collect()
            })
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        sign * m[n - 1][n - 1].clone()
    }

    fn det_gauss(&self) -> Scalar {
        let ring = &self.ring;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = ring.one();
        for k in 0..n {
            let pivot = (k..n).find(|&i| !ring.is_zero(m.at(i, k)));
            let Some(pi) = pivot else { return ring.zero() };
            if pi != k {
                for c in 0..n {
                    let a = m.at(k, c).clone();
                    let b = m.at(pi, c).clone();
                    m.set(k, c, b);
                    m.set(pi, c, a);
                }
                det = ring.neg(&det);
            }
            let p = m.at(k, k).clone();
            det = ring.mul(&det, &p);
            let pinv = ring.inv(&p).expect("field pivot invertible");
            for i in k + 1..n {
                let factor = ring.mul(m.at(i, k), &pinv);
                if ring.is_zero(&factor) {
                    continue;
                }
                for c in k..n {
                    let v = ring.sub(m.at(i, c), &ring.mul(&factor, m.at(k, c)));
                    m.set(i, c, v);
                }
            }
        }
        det
    }

    fn det_laplace(&self) -> Scalar {
        let ring = &self.ring;
        let n = self.rows;
        if n == 0 {
            return ring.one();
        }
        if n == 1 {
            return self.at(0, 0).clone();
        }
        let mut acc = ring.zero();
        let cols: Vec<usize> = (0..n).collect();
        for (j, &c) in cols.iter().enumerate() {
            let a = self.at(0, c);
            if ring.is_zero(a) {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = self.submatrix(&(1..n).collect::<Vec<_>>(), &rest).det_laplace();
            let term = ring.mul(a, &minor);
            acc = if j % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries()
            .map(|(r, c, v)| json!([r, c, v.to_string()]))
            .collect();
        let mut obj = serde_json::Map::new();
        obj.insert("ring".into(), json!(self.ring.to_string()));
        obj.insert("rows".into(), json!(self.rows));
        obj.insert("cols".into(), json!(self.cols));
        obj.insert("entries".into(), json!(entries));
        if let Some(d) = &self.row_degrees {
            obj.insert("row_degrees".into(), json!(d));
        }
        if let Some(d) = &self.col_degrees {
            obj.insert("col_degrees".into(), json!(d));
        }
        Value::Object(obj)
    }

    pub fn from_json(ring: &CoeffRing, v: &Value) -> Result<Matrix> {
        let rows = v["rows"].as_u64().ok_or_else(|| Error::Parse("matrix.rows".into()))? as usize;
        let cols = v["cols"].as_u64().ok_or_else(|| Error::Parse("matrix.cols".into()))? as usize;
        let mut m = Matrix::zero(ring.clone(), rows, cols);
        let entries = v["entries"].as_array().ok_or_else(|| Error::Parse("matrix.entries".into()))?;
        for e in entries {
            let arr = e.as_array().filter(|a| a.len() == 3).ok_or_else(|| Error::Parse("matrix entry".into()))?;
            let r = arr[0].as_u64().ok_or_else(|| Error::Parse("entry row".into()))? as usize;
            let c = arr[1].as_u64().ok_or_else(|| Error::Parse("entry col".into()))? as usize;
            let s = arr[2].as_str().ok_or_else(|| Error::Parse("entry value".into()))?;
            if r >= rows || c >= cols {
                return Err(Error::ShapeMismatch(format!("entry ({r},{c}) outside {rows}x{cols}")));
            }
            m.set(r, c, ring.parse_scalar(s)?);
        }
        if let Some(d) = v.get("row_degrees").and_then(|d| d.as_array()) {
            m.row_degrees = Some(d.iter().filter_map(|x| x.as_i64()).collect());
        }
        if let Some(d) = v.get("col_degrees").and_then(|d| d.as_array()) {
            m.col_degrees = Some(d.iter().filter_map(|x| x.as_i64()).collect());
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_and_stack() {
        let z = CoeffRing::Integers;
        let a = Matrix::from_i64(&z, &[&[1, 2], &[3, 4]]);
        let b = Matrix::from_i64(&z, &[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), Matrix::from_i64(&z, &[&[2, 1], &[4, 3]]));
        let h = Matrix::hstack(&[&a, &b]);
        assert_eq!(h.cols, 4);
        assert_eq!(h.at(1, 2), &z.from_i64(1));
        let d = Matrix::block_diag(&[&a, &b]);
        assert_eq!(d.rows, 4);
        assert!(d.ring.is_zero(d.at(0, 2)));
    }

    #[test]
    fn determinants() {
        let z = CoeffRing::Integers;
        let a = Matrix::from_i64(&z, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det(), z.from_i64(18));
        let q = CoeffRing::Rationals;
        let b = Matrix::from_i64(&q, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(b.det(), q.from_i64(18));
        let f5 = CoeffRing::prime_field(5).unwrap();
        let c = Matrix::from_i64(&f5, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(c.det(), f5.from_i64(3));
        // Laplace path over a polynomial ring
        let r = CoeffRing::graded_poly(CoeffRing::Rationals, 2).unwrap();
        let x = r.monomial(CoeffRing::Rationals.one(), 0, 1);
        let y = r.monomial(CoeffRing::Rationals.one(), 1, 1);
        let m = Matrix::from_rows(r.clone(), vec![vec![x.clone(), y.clone()], vec![y.clone(), x.clone()]]).unwrap();
        let expect = r.sub(&r.mul(&x, &x), &r.mul(&y, &y));
        assert_eq!(m.det(), expect);
    }

    #[test]
    fn kronecker_shape() {
        let z = CoeffRing::Integers;
        let a = Matrix::from_i64(&z, &[&[1, 2]]);
        let b = Matrix::from_i64(&z, &[&[3], &[4]]);
        let k = a.kronecker(&b);
        assert_eq!((k.rows, k.cols), (2, 2));
        assert_eq!(k.at(0, 0), &z.from_i64(3));
        assert_eq!(k.at(1, 1), &z.from_i64(8));
    }

    #[test]
    fn json_round_trip() {
        let q = CoeffRing::Rationals;
        let mut a = Matrix::zero(q.clone(), 2, 3);
        a.set(0, 1, q.parse_scalar("3/4").unwrap());
        a.set(1, 2, q.from_i64(-2));
        let v = a.to_json();
        let back = Matrix::from_json(&q, &v).unwrap();
        assert_eq!(a, back);
    }
}
