//! Exact linear algebra over the rationals.
//!
//! Ranks use fraction-free (Bareiss) elimination on integer-scaled rows.
//! Kernels and cohomology representatives come from reduced row-echelon
//! forms, so every output is canonical for the subspaces involved and can be
//! compared with `==`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = BigRational;

/// Dense rational vector.
pub type QVector = Vec<Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// `p/q` rendering used by every textual output.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let parse = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::InvalidArgument(format!("not a rational: `{s}`")))
    };
    match s.split_once('/') {
        Some((a, b)) => {
            let den = parse(b)?;
            if den.is_zero() {
                return Err(Error::InvalidArgument(format!("zero denominator: `{s}`")));
            }
            Ok(Q::new(parse(a)?, den))
        }
        None => Ok(Q::from_integer(parse(s)?)),
    }
}

/// Storage switches to sparse below this density.
const SPARSE_DENSITY: f64 = 0.25;

#[derive(Clone, Debug, PartialEq)]
enum Storage {
    Dense(Vec<Q>),
    Sparse(BTreeMap<(usize, usize), Q>),
}

/// A `rows x cols` matrix of exact rationals.
#[derive(Clone, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    storage: Storage,
}

impl PartialEq for RationalMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.nonzero_entries().eq(other.nonzero_entries())
    }
}

impl Eq for RationalMatrix {}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, storage: Storage::Sparse(BTreeMap::new()) }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_entries(n, n, (0..n).map(|i| (i, i, Q::one())))
    }

    /// Builds a matrix from `(row, col, value)` triples. Repeated positions
    /// are summed. Storage is chosen from the resulting density.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Q)>,
    ) -> Self {
        let mut map: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r}, {c}) out of bounds for {rows}x{cols}");
            let slot = map.entry((r, c)).or_insert_with(Q::zero);
            *slot += v;
        }
        map.retain(|_, v| !v.is_zero());
        let mut m = RationalMatrix { rows, cols, storage: Storage::Sparse(map) };
        m.normalize_storage();
        m
    }

    pub fn from_rows(rows: Vec<QVector>) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, ncols)
    }

    /// Like [`from_rows`](Self::from_rows) but keeps the column count when
    /// there are no rows.
    pub fn from_rows_with_cols(rows: Vec<QVector>, cols: usize) -> Self {
        let nrows = rows.len();
        let entries = rows.into_iter().enumerate().flat_map(|(r, row)| {
            assert_eq!(row.len(), cols, "ragged rows");
            row.into_iter().enumerate().map(move |(c, v)| (r, c, v))
        });
        Self::from_entries(nrows, cols, entries)
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(columns: &[QVector], rows: usize) -> Self {
        let entries = columns.iter().enumerate().flat_map(|(c, col)| {
            assert_eq!(col.len(), rows, "column length mismatch");
            col.iter().enumerate().map(move |(r, v)| (r, c, v.clone()))
        });
        Self::from_entries(rows, columns.len(), entries)
    }

    fn normalize_storage(&mut self) {
        let total = self.rows * self.cols;
        let nnz = self.nnz();
        let want_sparse = total == 0 || (nnz as f64) < SPARSE_DENSITY * total as f64;
        match (&self.storage, want_sparse) {
            (Storage::Dense(_), true) => {
                let map = self.nonzero_entries().map(|(r, c, v)| ((r, c), v.clone())).collect();
                self.storage = Storage::Sparse(map);
            }
            (Storage::Sparse(map), false) => {
                let mut data = vec![Q::zero(); total];
                for (&(r, c), v) in map {
                    data[r * self.cols + c] = v.clone();
                }
                self.storage = Storage::Dense(data);
            }
            _ => {}
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(d) => d.iter().filter(|v| !v.is_zero()).count(),
            Storage::Sparse(m) => m.len(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        assert!(r < self.rows && c < self.cols);
        match &self.storage {
            Storage::Dense(d) => d[r * self.cols + c].clone(),
            Storage::Sparse(m) => m.get(&(r, c)).cloned().unwrap_or_else(Q::zero),
        }
    }

    /// Nonzero entries in row-major order.
    pub fn nonzero_entries(&self) -> Box<dyn Iterator<Item = (usize, usize, &Q)> + '_> {
        match &self.storage {
            Storage::Dense(d) => {
                let cols = self.cols;
                Box::new(
                    d.iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .map(move |(k, v)| (k / cols, k % cols, v)),
                )
            }
            Storage::Sparse(m) => Box::new(m.iter().map(|(&(r, c), v)| (r, c, v))),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn to_dense_rows(&self) -> Vec<QVector> {
        let mut out = vec![vec![Q::zero(); self.cols]; self.rows];
        for (r, c, v) in self.nonzero_entries() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn column(&self, c: usize) -> QVector {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<QVector> {
        let mut out = vec![vec![Q::zero(); self.rows]; self.cols];
        for (r, c, v) in self.nonzero_entries() {
            out[c][r] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_entries(self.cols, self.rows, self.nonzero_entries().map(|(r, c, v)| (c, r, v.clone())))
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut by_row: Vec<Vec<(usize, &Q)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in other.nonzero_entries() {
            by_row[r].push((c, v));
        }
        let mut acc: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (r, k, a) in self.nonzero_entries() {
            for &(c, b) in &by_row[k] {
                *acc.entry((r, c)).or_insert_with(Q::zero) += a * b;
            }
        }
        Ok(Self::from_entries(self.rows, other.cols, acc.into_iter().map(|((r, c), v)| (r, c, v))))
    }

    pub fn mul_vec(&self, v: &[Q]) -> Result<QVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![Q::zero(); self.rows];
        for (r, c, a) in self.nonzero_entries() {
            if !v[c].is_zero() {
                out[r] += a * &v[c];
            }
        }
        Ok(out)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_dense_rows() {
            let cells: Vec<String> = row.iter().map(fmt_q).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Scales a rational row to a primitive-free integer row (common
/// denominator cleared).
fn integer_row(row: &[Q]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// Rank over the rationals by fraction-free Bareiss elimination.
pub fn rank(m: &RationalMatrix) -> usize {
    if m.is_zero() {
        return 0;
    }
    let mut a: Vec<Vec<BigInt>> = m.to_dense_rows().iter().map(|r| integer_row(r)).collect();
    let rows = a.len();
    let cols = m.cols();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row-echelon form of the span of `rows`. Returns the nonzero rows
/// and their pivot columns. The result depends only on the row space.
pub fn rref(rows: &[QVector], cols: usize) -> (Vec<QVector>, Vec<usize>) {
    let mut a: Vec<QVector> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Basis of the null space. One vector per free column, in increasing
/// column order, with a 1 in that column.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<QVector> {
    let cols = m.cols();
    let (red, pivots) = rref(&m.to_dense_rows(), cols);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Solves `a x = b`; returns one solution (free variables set to zero) or
/// `None` when the system is inconsistent.
pub fn solve(a: &RationalMatrix, b: &[Q]) -> Option<QVector> {
    let cols = a.cols();
    let aug: Vec<QVector> = a
        .to_dense_rows()
        .into_iter()
        .zip(b)
        .map(|(mut row, bi)| {
            row.push(bi.clone());
            row
        })
        .collect();
    let (red, pivots) = rref(&aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (row, &p) in red.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

fn reduce_against(v: &mut [Q], basis: &[QVector], pivots: &[usize]) {
    for (row, &p) in basis.iter().zip(pivots) {
        if !v[p].is_zero() {
            let f = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
}

/// Canonical basis of `ker(d_out) / im(d_in)` in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubquotientBasis {
    pub ambient_dim: usize,
    pub degree: i32,
    #[serde(with = "qvec_list")]
    pub representatives: Vec<QVector>,
    #[serde(skip)]
    rep_pivots: Vec<usize>,
    #[serde(skip)]
    image: Vec<QVector>,
    #[serde(skip)]
    image_pivots: Vec<usize>,
}

impl SubquotientBasis {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Normal form of `v` modulo the image.
    pub fn normal_form(&self, v: &[Q]) -> QVector {
        let mut w = v.to_vec();
        reduce_against(&mut w, &self.image, &self.image_pivots);
        w
    }

    pub fn is_exact(&self, v: &[Q]) -> bool {
        self.normal_form(v).iter().all(Zero::is_zero)
    }

    /// Coordinates of the class of the cocycle `v` in the canonical
    /// representatives. Fails when `v` is not a cocycle.
    pub fn class_coordinates(&self, v: &[Q]) -> Result<QVector> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in space of dimension {}",
                v.len(),
                self.ambient_dim
            )));
        }
        let mut w = self.normal_form(v);
        let coords: QVector = self.rep_pivots.iter().map(|&p| w[p].clone()).collect();
        reduce_against(&mut w, &self.representatives, &self.rep_pivots);
        if w.iter().any(|x| !x.is_zero()) {
            return Err(Error::NotACocycle);
        }
        Ok(coords)
    }

    /// Coordinates of the class of `v` with respect to an arbitrary family of
    /// cocycles whose classes form a basis.
    pub fn coordinates_in(&self, basis: &[QVector], v: &[Q]) -> Result<QVector> {
        let cols: Vec<QVector> =
            basis.iter().map(|b| self.class_coordinates(b)).collect::<Result<_>>()?;
        if cols.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} classes supplied for a space of dimension {}",
                cols.len(),
                self.dim()
            )));
        }
        let m = RationalMatrix::from_columns(&cols, self.dim());
        if rank(&m) != self.dim() {
            return Err(Error::InvalidArgument("supplied classes are linearly dependent".into()));
        }
        let target = self.class_coordinates(v)?;
        solve(&m, &target).ok_or(Error::NotACocycle)
    }
}

/// Cohomology at the middle of `C^{k-1} --d_in--> C^k --d_out--> C^{k+1}`.
pub fn cohomology(d_in: &RationalMatrix, d_out: &RationalMatrix) -> Result<SubquotientBasis> {
    cohomology_in_degree(d_in, d_out, 0)
}

pub fn cohomology_in_degree(
    d_in: &RationalMatrix,
    d_out: &RationalMatrix,
    degree: i32,
) -> Result<SubquotientBasis> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::DimensionMismatch(format!(
            "d_in is {}x{} but d_out is {}x{}",
            d_in.rows(),
            d_in.cols(),
            d_out.rows(),
            d_out.cols()
        )));
    }
    let comp = d_out.mul(d_in)?;
    if !comp.is_zero() {
        return Err(Error::CompositionNotZero { nonzero: comp.nnz() });
    }
    let ambient = d_out.cols();
    let (image, image_pivots) = rref(&d_in.columns(), ambient);
    let kernel = kernel_basis(d_out);
    let reduced: Vec<QVector> = kernel
        .into_iter()
        .map(|mut v| {
            reduce_against(&mut v, &image, &image_pivots);
            v
        })
        .collect();
    let (representatives, rep_pivots) = rref(&reduced, ambient);
    Ok(SubquotientBasis { ambient_dim: ambient, degree, representatives, rep_pivots, image, image_pivots })
}

pub(crate) mod qvec_list {
    use super::{fmt_q, parse_q, QVector};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[QVector], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(fmt_q).collect()).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<QVector>, D::Error> {
        let strs: Vec<Vec<String>> = Vec::deserialize(d)?;
        strs.iter()
            .map(|r| r.iter().map(|x| parse_q(x).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    /// Left wedge multiplication by `e_fixed` from degree-1 to degree-2
    /// monomials of an exterior algebra on `dim` generators, enumerated by
    /// hand: e_fixed ^ e_j = sign * e_{min} ^ e_{max}.
    fn left_wedge_by(fixed: usize, dim: usize) -> RationalMatrix {
        let pairs: Vec<(usize, usize)> =
            (0..dim).flat_map(|a| (a + 1..dim).map(move |b| (a, b))).collect();
        let mut entries = Vec::new();
        for j in 0..dim {
            if j == fixed {
                continue;
            }
            let (lo, hi, sign) = if fixed < j { (fixed, j, 1) } else { (j, fixed, -1) };
            let row = pairs.iter().position(|&p| p == (lo, hi)).unwrap();
            entries.push((row, j, q(sign)));
        }
        RationalMatrix::from_entries(pairs.len(), dim, entries)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&RationalMatrix::identity(2)), 2);
        assert_eq!(rank(&RationalMatrix::zeros(3, 2)), 0);
        // 6x4 in (rows = wedge^2, cols = wedge^1); three nonzero images.
        let m = left_wedge_by(0, 4);
        assert_eq!((m.rows(), m.cols()), (6, 4));
        assert_eq!(rank(&m), 3);
        assert_eq!(rank(&m.transpose()), 3);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&RationalMatrix::zeros(2, 3)).len(), 3);
        assert!(kernel_basis(&RationalMatrix::identity(2)).is_empty());
        let k = kernel_basis(&left_wedge_by(0, 3));
        assert_eq!(k, vec![vec![q(1), q(0), q(0)]]);
    }

    #[test]
    fn cohomology_examples() {
        let h = cohomology(&RationalMatrix::zeros(3, 0), &RationalMatrix::zeros(0, 3)).unwrap();
        assert_eq!(h.dim(), 3);
        let h = cohomology(&RationalMatrix::identity(2), &RationalMatrix::zeros(0, 2)).unwrap();
        assert_eq!(h.dim(), 0);
        let bad = cohomology(&RationalMatrix::identity(2), &RationalMatrix::identity(2));
        assert_eq!(bad, Err(Error::CompositionNotZero { nonzero: 2 }));
    }

    #[test]
    fn bareiss_handles_fractions() {
        let m = RationalMatrix::from_rows(vec![
            vec![q_frac(1, 2), q_frac(1, 3)],
            vec![q_frac(3, 2), q(1)],
        ]);
        assert_eq!(rank(&m), 1);
        let m = mat(&[&[2, 4, 1], &[1, 3, 7], &[0, 5, 2]]);
        assert_eq!(rank(&m), 3);
    }

    #[test]
    fn storage_switches_with_density() {
        assert!(RationalMatrix::identity(8).is_sparse());
        assert!(!mat(&[&[1, 2], &[3, 4]]).is_sparse());
        assert_eq!(RationalMatrix::identity(8).get(3, 3), q(1));
    }

    #[test]
    fn class_coordinates_roundtrip() {
        // C^0 = Q, C^1 = Q^2, d_in = (1, 1)^T, d_out = 0. Cohomology is Q.
        let d_in = mat(&[&[1], &[1]]);
        let d_out = RationalMatrix::zeros(0, 2);
        let h = cohomology(&d_in, &d_out).unwrap();
        assert_eq!(h.dim(), 1);
        assert!(h.is_exact(&[q(3), q(3)]));
        let c = h.class_coordinates(&[q(1), q(0)]).unwrap();
        let c2 = h.class_coordinates(&[q(0), q(-1)]).unwrap();
        assert_eq!(c, c2);
        let c3 = h.coordinates_in(&[vec![q(2), q(0)]], &[q(1), q(0)]).unwrap();
        assert_eq!(c3, vec![q_frac(1, 2)]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = mat(&[&[1, 1], &[2, 2]]);
        assert!(solve(&a, &[q(1), q(3)]).is_none());
        assert_eq!(solve(&a, &[q(1), q(2)]), Some(vec![q(1), q(0)]));
    }

    #[test]
    fn rational_text_roundtrip() {
        for s in ["0", "-3", "7/2", "-1/9"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
        assert!(parse_q("1/0").is_err());
    }
}
