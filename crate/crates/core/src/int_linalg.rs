//! Exact linear algebra over the integers.
//!
//! Everything here works on [`IntMatrix`], a dense row-major matrix of
//! arbitrary-precision integers. The central routine is
//! [`smith_normal_form`], which produces unimodular `U`, `V` with
//! `U * A * V = S`, `S` diagonal and each nonzero diagonal entry dividing the
//! next. Kernels, cokernels and invariant factors are read off from it.
//!
//! [`rank`] uses fraction-free (Bareiss) elimination instead, so callers that
//! want a second, independent route to the rank have one.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix of shape {rows}x{cols} needs {expected} entries, got {found}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        found: usize,
    },
    #[error("ragged rows: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("cannot multiply {0}x{1} by {2}x{3}")]
    Shape(usize, usize, usize, usize),
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from a list of rows. `cols` is only consulted when the
    /// row list is empty.
    pub fn from_rows<T, R>(rows: R, cols: usize) -> Result<Self, MatrixError>
    where
        T: Into<BigInt>,
        R: IntoIterator,
        R::Item: IntoIterator<Item = T>,
    {
        let mut data = Vec::new();
        let mut nrows = 0;
        let mut width = None;
        for (i, row) in rows.into_iter().enumerate() {
            let before = data.len();
            data.extend(row.into_iter().map(Into::into));
            let len = data.len() - before;
            match width {
                None => width = Some(len),
                Some(w) if w != len => {
                    return Err(MatrixError::Ragged {
                        row: i,
                        expected: w,
                        found: len,
                    })
                }
                _ => {}
            }
            nrows += 1;
        }
        let cols = if nrows == 0 { cols } else { width.unwrap_or(0) };
        Ok(Self {
            rows: nrows,
            cols,
            data,
        })
    }

    /// Diagonal `rows x cols` matrix with the given leading diagonal entries.
    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Shape(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x = -std::mem::take(x);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let x = &mut self.data[i * self.cols + j];
            *x = -std::mem::take(x);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let delta = s * q;
                self.data[dst * self.cols + j] += delta;
            }
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let delta = s * q;
                self.data[i * self.cols + dst] += delta;
            }
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}", self.rows, self.cols)?;
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Result of [`smith_normal_form`]: `u * a * v == s`.
///
/// The inverses of `u` and `v` are carried along so that `a` can be
/// reconstructed exactly as `u_inv * s * v_inv`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries of `s`, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }
}

/// Smith normal form with smallest-absolute-value pivoting.
///
/// Total on all inputs, including matrices with zero rows or columns.
/// Deterministic: ties between equally small pivots go to the first one in
/// row-major order.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (r, c) = a.shape();
    let mut s = a.clone();
    let mut u = IntMatrix::identity(r);
    let mut u_inv = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);
    let mut rank = 0;

    for t in 0..r.min(c) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&s, t) else {
                break;
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let pivot = s.get(t, t).clone();
            let mut dirty = false;

            for i in t + 1..r {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let (q, rem) = s.get(i, t).div_rem(&pivot);
                let neg_q = -q.clone();
                s.add_row_multiple(i, t, &neg_q);
                u.add_row_multiple(i, t, &neg_q);
                u_inv.add_col_multiple(t, i, &q);
                dirty |= !rem.is_zero();
            }
            for j in t + 1..c {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let (q, rem) = s.get(t, j).div_rem(&pivot);
                let neg_q = -q.clone();
                s.add_col_multiple(j, t, &neg_q);
                v.add_col_multiple(j, t, &neg_q);
                v_inv.add_row_multiple(t, j, &q);
                dirty |= !rem.is_zero();
            }
            if dirty {
                continue;
            }

            // Row and column of the pivot are clear; enforce divisibility of
            // the remaining block by folding an offending row into row t.
            let offending = (t + 1..r).find(|&i| {
                (t + 1..c).any(|j| !s.get(i, j).is_multiple_of(&pivot))
            });
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                    u_inv.add_col_multiple(i, t, &-one);
                }
                None => break,
            }
        }

        if s.get(t, t).is_zero() {
            break;
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        rank += 1;
    }

    SmithDecomposition {
        u,
        s,
        v,
        u_inv,
        v_inv,
        rank,
    }
}

fn smallest_nonzero(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..m.rows {
        for j in t..m.cols {
            let x = m.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                let done = ax.is_one();
                best = Some((i, j, ax));
                if done {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Finitely generated abelian group `Z^free_rank + Z/d1 + ... + Z/dk`
/// with `2 <= d1 | d2 | ... | dk`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroupInvariants {
    pub free_rank: usize,
    torsion: Vec<BigInt>,
}

impl AbelianGroupInvariants {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(order: impl Into<BigInt>) -> Self {
        Self::from_cyclic_orders(0, &[order.into()])
    }

    /// Normal form of `Z^free_rank + sum Z/orders[i]`. Orders equal to 1 are
    /// dropped; an order of 0 contributes a free summand. Negative orders are
    /// taken up to sign.
    pub fn from_cyclic_orders(free_rank: usize, orders: &[BigInt]) -> Self {
        let diag: Vec<BigInt> = orders.iter().map(|o| o.abs()).collect();
        let n = diag.len();
        let snf = smith_normal_form(&IntMatrix::diagonal(n, n, &diag));
        let factors = snf.invariant_factors();
        let torsion: Vec<BigInt> = factors.into_iter().filter(|d| !d.is_one()).collect();
        Self {
            free_rank: free_rank + (n - snf.rank),
            torsion,
        }
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn has_torsion(&self) -> bool {
        !self.torsion.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// `true` for the infinite cyclic group.
    pub fn is_z(&self) -> bool {
        self.free_rank == 1 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let orders: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        Self::from_cyclic_orders(self.free_rank + other.free_rank, &orders)
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }
}

impl fmt::Display for AbelianGroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for AbelianGroupInvariants {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("AbelianGroupInvariants", 2)?;
        st.serialize_field("rank", &self.free_rank)?;
        st.serialize_field("torsion", &BigIntList(&self.torsion))?;
        st.end()
    }
}

/// Serializes integers as JSON numbers when they fit in 64 bits and as
/// decimal strings otherwise.
pub(crate) struct BigIntList<'a>(pub &'a [BigInt]);

impl Serialize for BigIntList<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for x in self.0 {
            seq.serialize_element(&BigIntValue(x))?;
        }
        seq.end()
    }
}

pub(crate) fn serialize_bigints<S: Serializer>(xs: &[BigInt], serializer: S) -> Result<S::Ok, S::Error> {
    BigIntList(xs).serialize(serializer)
}

pub(crate) struct BigIntValue<'a>(pub &'a BigInt);

impl Serialize for BigIntValue<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use num_traits::ToPrimitive;
        match self.0.to_i64() {
            Some(v) => serializer.serialize_i64(v),
            None => serializer.serialize_str(&self.0.to_string()),
        }
    }
}

/// Invariants of `Z^rows / image(a)`.
pub fn cokernel(a: &IntMatrix) -> AbelianGroupInvariants {
    let snf = smith_normal_form(a);
    let torsion: Vec<BigInt> = snf
        .invariant_factors()
        .into_iter()
        .filter(|d| !d.is_one())
        .collect();
    AbelianGroupInvariants {
        free_rank: a.rows() - snf.rank,
        torsion,
    }
}

/// Kernel of `a` as a map `Z^cols -> Z^rows`.
///
/// The returned basis matrix is `cols x rank`; its columns span the kernel
/// and extend to a basis of `Z^cols`.
pub fn kernel(a: &IntMatrix) -> (usize, IntMatrix) {
    let snf = smith_normal_form(a);
    let c = a.cols();
    let k = c - snf.rank;
    let mut basis = IntMatrix::zeros(c, k);
    for (out, j) in (snf.rank..c).enumerate() {
        for i in 0..c {
            basis.set(i, out, snf.v.get(i, j).clone());
        }
    }
    (k, basis)
}

/// Rank over the rationals by fraction-free Gaussian elimination.
pub fn rank(a: &IntMatrix) -> usize {
    let (r, c) = a.shape();
    let mut m = a.to_rows();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..c {
        if rank == r {
            break;
        }
        let Some(p) = (rank..r).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..r {
            for j in col + 1..c {
                let v = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                m[i][j] = v / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Greatest common divisor of a list (0 for an empty or all-zero list).
pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]], cols: usize) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.iter().copied()), cols).unwrap()
    }

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_decomposition(a: &IntMatrix, d: &SmithDecomposition) {
        let uav = d.u.mul(a).unwrap().mul(&d.v).unwrap();
        assert_eq!(uav, d.s);
        let back = d.u_inv.mul(&d.s).unwrap().mul(&d.v_inv).unwrap();
        assert_eq!(&back, a);
        assert_eq!(d.u.mul(&d.u_inv).unwrap(), IntMatrix::identity(a.rows()));
        assert_eq!(d.v.mul(&d.v_inv).unwrap(), IntMatrix::identity(a.cols()));
    }

    #[test]
    fn identity_is_its_own_normal_form() {
        let a = IntMatrix::identity(2);
        let d = smith_normal_form(&a);
        assert_eq!(d.s, a);
        assert_eq!(d.u, a);
        assert_eq!(d.v, a);
    }

    #[test]
    fn two_by_two_invariant_factors() {
        let a = m(&[&[2, 4], &[6, 8]], 2);
        let d = smith_normal_form(&a);
        check_decomposition(&a, &d);
        assert_eq!(d.invariant_factors(), big(&[2, 4]));
        assert_eq!(d.s, IntMatrix::diagonal(2, 2, &big(&[2, 4])));
    }

    #[test]
    fn empty_map() {
        let a = IntMatrix::zeros(0, 3);
        let d = smith_normal_form(&a);
        assert_eq!(d.s.shape(), (0, 3));
        assert_eq!(d.u.shape(), (0, 0));
        assert_eq!(d.v, IntMatrix::identity(3));
        assert_eq!(kernel(&a).0, 3);
        assert!(cokernel(&a).is_zero());
        assert!(cokernel(&IntMatrix::zeros(2, 0)) == AbelianGroupInvariants::free(2));
    }

    #[test]
    fn divisibility_needs_row_folding() {
        // diag(2, 3) is not in normal form; the answer is diag(1, 6).
        let a = m(&[&[2, 0], &[0, 3]], 2);
        let d = smith_normal_form(&a);
        check_decomposition(&a, &d);
        assert_eq!(d.invariant_factors(), big(&[1, 6]));
    }

    #[test]
    fn negative_pivots_are_normalized() {
        let a = m(&[&[-3, 0, 0], &[0, -6, 0]], 3);
        let d = smith_normal_form(&a);
        check_decomposition(&a, &d);
        assert_eq!(d.invariant_factors(), big(&[3, 6]));
    }

    #[test]
    fn cokernels_of_one_by_one() {
        assert!(cokernel(&m(&[&[1]], 1)).is_zero());
        assert_eq!(cokernel(&m(&[&[2]], 1)), AbelianGroupInvariants::cyclic(2));
        assert_eq!(cokernel(&m(&[&[3]], 1)), AbelianGroupInvariants::cyclic(3));
        assert_eq!(cokernel(&m(&[&[-22]], 1)), AbelianGroupInvariants::cyclic(22));
        assert_eq!(cokernel(&m(&[&[0]], 1)), AbelianGroupInvariants::free(1));
    }

    #[test]
    fn kernels() {
        let (k, b) = kernel(&m(&[&[0]], 1));
        assert_eq!(k, 1);
        assert_eq!(b, m(&[&[1]], 1));
        assert_eq!(kernel(&m(&[&[1]], 1)).0, 0);

        let a = m(&[&[2, -1]], 2);
        let (k, b) = kernel(&a);
        assert_eq!(k, 1);
        let col = b.column(0);
        // spans {(t, 2t)}: primitive, so it is +-(1, 2)
        assert!(col == big(&[1, 2]) || col == big(&[-1, -2]));
        assert!(a.mul(&b).unwrap().is_zero());
    }

    #[test]
    fn group_normal_form() {
        let g = AbelianGroupInvariants::from_cyclic_orders(1, &big(&[2, 3, 4]));
        assert_eq!(g.torsion(), &big(&[2, 12])[..]);
        assert_eq!(g.free_rank, 1);
        assert_eq!(g.to_string(), "Z + Z/2 + Z/12");
        assert_eq!(AbelianGroupInvariants::zero().to_string(), "0");
        let s = AbelianGroupInvariants::cyclic(2).direct_sum(&AbelianGroupInvariants::cyclic(3));
        assert_eq!(s, AbelianGroupInvariants::cyclic(6));
        assert_eq!(
            serde_json::to_string(&g).unwrap(),
            r#"{"rank":1,"torsion":[2,12]}"#
        );
    }

    #[test]
    fn bareiss_rank() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]], 2)), 1);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]], 2)), 0);
        assert_eq!(rank(&m(&[&[0, 1, 2], &[1, 0, 3], &[1, 1, 5]], 3)), 2);
        assert_eq!(rank(&IntMatrix::zeros(0, 4)), 0);
    }

    #[test]
    fn large_entries_stay_exact() {
        let huge = BigInt::from(10).pow(40u32);
        let a = IntMatrix::new(
            2,
            2,
            vec![huge.clone(), huge.clone() + 1, huge.clone() * 3, huge.clone() * 3 + 7],
        )
        .unwrap();
        let d = smith_normal_form(&a);
        check_decomposition(&a, &d);
        let det: BigInt = &huge * (&huge * 3 + 7) - (&huge + 1) * (&huge * 3);
        assert_eq!(&d.invariant_factors()[0] * &d.invariant_factors()[1], det.abs());
    }
}
