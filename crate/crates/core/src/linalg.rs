//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers. Two independent
//! routes compute invariant factors: [`smith_normal_form`] (dense, with the
//! unimodular transforms) and [`invariant_factors`] (sparse unit-pivot
//! elimination followed by a dense pass on whatever is left). Homology uses the
//! second; presentations need the transforms and use the first.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<BigInt>>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i][i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. A matrix with zero rows needs [`IntegerMatrix::zeros`]
    /// to fix its column count.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(MatrixError::Ragged {
                    row: i,
                    found: r.len(),
                    expected: cols,
                });
            }
        }
        Ok(IntegerMatrix {
            rows: rows.len(),
            cols,
            entries: rows,
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Builds a `rows x cols` matrix from columns.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Result<Self, MatrixError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(MatrixError::Dimension(format!(
                    "column {j} has {} entries, expected {rows}",
                    c.len()
                )));
            }
            for (i, x) in c.iter().enumerate() {
                m.entries[i][j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i][j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        self.entries.iter().map(|r| r[j].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.clone()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j][i] = self.entries[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for (k, a) in self.entries[i].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.entries[k][j];
                    if !b.is_zero() {
                        out.entries[i][j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        self.entries
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::Dimension("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{} [", self.rows, self.cols)?;
        for r in &self.entries {
            let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `left * input * right = diag(diagonal)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Length `min(rows, cols)`; non-negative, each entry divides the next,
    /// zeros only at the tail.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
}

impl SnfResult {
    pub fn diagonal_matrix(&self) -> IntegerMatrix {
        let mut d = IntegerMatrix::zeros(self.left.rows(), self.right.cols());
        for (i, x) in self.diagonal.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        torsion_of(&self.diagonal)
    }
}

pub(crate) fn torsion_of(diagonal: &[BigInt]) -> Vec<BigInt> {
    diagonal
        .iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .cloned()
        .collect()
}

/// Checks the divisibility chain and the zeros-at-the-tail shape of a diagonal.
pub fn is_divisibility_chain(diagonal: &[BigInt]) -> bool {
    diagonal.iter().all(|d| !d.is_negative())
        && diagonal.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            }
        })
}

struct Reducer {
    a: Vec<Vec<BigInt>>,
    left: Option<Vec<Vec<BigInt>>>,
    right: Option<Vec<Vec<BigInt>>>,
    m: usize,
    n: usize,
}

fn sub_scaled_row(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    let src_row: Vec<(usize, BigInt)> = rows[src]
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(j, x)| (j, x * q))
        .collect();
    let d = &mut rows[dst];
    for (j, x) in src_row {
        d[j] -= x;
    }
}

fn sub_scaled_col(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for r in rows.iter_mut() {
        if !r[src].is_zero() {
            let x = &r[src] * q;
            r[dst] -= x;
        }
    }
}

impl Reducer {
    fn new(m: &IntegerMatrix, track: bool) -> Self {
        Reducer {
            a: m.entries.clone(),
            left: track.then(|| IntegerMatrix::identity(m.rows).entries),
            right: track.then(|| IntegerMatrix::identity(m.cols).entries),
            m: m.rows,
            n: m.cols,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            if let Some(l) = &mut self.left {
                l.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in &mut self.a {
                r.swap(i, j);
            }
            if let Some(rt) = &mut self.right {
                for r in rt.iter_mut() {
                    r.swap(i, j);
                }
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        sub_scaled_row(&mut self.a, dst, src, q);
        if let Some(l) = &mut self.left {
            sub_scaled_row(l, dst, src, q);
        }
    }

    /// col[dst] -= q * col[src]
    fn col_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        sub_scaled_col(&mut self.a, dst, src, q);
        if let Some(rt) = &mut self.right {
            sub_scaled_col(rt, dst, src, q);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -std::mem::take(x);
        }
        if let Some(l) = &mut self.left {
            for x in &mut l[i] {
                *x = -std::mem::take(x);
            }
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if x.magnitude().is_one() {
                    return Some((i, j));
                }
                match best {
                    Some((bi, bj)) if self.a[bi][bj].magnitude() <= x.magnitude() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn run(mut self) -> (Vec<BigInt>, Option<Vec<Vec<BigInt>>>, Option<Vec<Vec<BigInt>>>) {
        let k = self.m.min(self.n);
        let mut t = 0;
        while t < k {
            let Some((pi, pj)) = self.min_entry(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..self.m {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].div_floor(&self.a[t][t]);
                        self.row_op(i, t, &q);
                        clean &= self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..self.n {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].div_floor(&self.a[t][t]);
                        self.col_op(j, t, &q);
                        clean &= self.a[t][j].is_zero();
                    }
                }
                if !clean {
                    // a remainder smaller than the pivot survived; make it the pivot
                    let mut best = (t, t);
                    for i in t + 1..self.m {
                        let x = &self.a[i][t];
                        if !x.is_zero() && x.magnitude() < self.a[best.0][best.1].magnitude() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..self.n {
                        let x = &self.a[t][j];
                        if !x.is_zero() && x.magnitude() < self.a[best.0][best.1].magnitude() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                if !self.a[t][t].magnitude().is_one() {
                    let p = self.a[t][t].clone();
                    let offender = (t + 1..self.m).find(|&i| self.a[i][t + 1..].iter().any(|x| !x.is_multiple_of(&p)));
                    if let Some(i) = offender {
                        self.row_op(t, i, &BigInt::from(-1));
                        continue;
                    }
                }
                break;
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        let diagonal = (0..k).map(|i| self.a[i][i].clone()).collect();
        (diagonal, self.left, self.right)
    }
}

/// Smith normal form with unimodular transforms, pivoting on the entry of least
/// absolute value.
pub fn smith_normal_form(m: &IntegerMatrix) -> SnfResult {
    let (diagonal, left, right) = Reducer::new(m, true).run();
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
    SnfResult {
        diagonal,
        rank,
        left: IntegerMatrix {
            rows: m.rows,
            cols: m.rows,
            entries: left.expect("tracked"),
        },
        right: IntegerMatrix {
            rows: m.cols,
            cols: m.cols,
            entries: right.expect("tracked"),
        },
    }
}

/// Sparse integer matrix used for boundary and relation matrices.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_entries: Vec<BTreeMap<usize, BigInt>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            row_entries: vec![BTreeMap::new(); rows],
        }
    }

    pub fn add(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols, "entry out of bounds");
        let e = self.row_entries[i].entry(j).or_insert_with(BigInt::zero);
        *e += v;
        if e.is_zero() {
            self.row_entries[i].remove(&j);
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_dense(&self) -> IntegerMatrix {
        let mut d = IntegerMatrix::zeros(self.rows, self.cols);
        for (i, r) in self.row_entries.iter().enumerate() {
            for (&j, v) in r {
                d.set(i, j, v.clone());
            }
        }
        d
    }

    pub fn from_dense(m: &IntegerMatrix) -> Self {
        let mut s = SparseMatrix::new(m.rows, m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                if !m.get(i, j).is_zero() {
                    s.row_entries[i].insert(j, m.get(i, j).clone());
                }
            }
        }
        s
    }

    /// Invariant factors (the Smith diagonal, length `min(rows, cols)`).
    ///
    /// Unit entries are eliminated first: a row operation clears the pivot's
    /// column, after which the pivot row can be dropped by column operations that
    /// touch nothing else. The unit-free remainder goes through the dense
    /// reduction.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let mut rows = self.row_entries.clone();
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.cols];
        for (i, r) in rows.iter().enumerate() {
            for &j in r.keys() {
                col_rows[j].insert(i);
            }
        }
        let mut units = 0usize;
        let mut dead_rows = vec![false; self.rows];
        let mut dead_cols = vec![false; self.cols];
        loop {
            let mut progressed = false;
            for p in 0..self.rows {
                if dead_rows[p] {
                    continue;
                }
                let Some((c, s)) = rows[p]
                    .iter()
                    .find(|(_, v)| v.magnitude().is_one())
                    .map(|(&c, v)| (c, v.clone()))
                else {
                    continue;
                };
                let pivot_row: Vec<(usize, BigInt)> = rows[p].iter().map(|(&j, v)| (j, v.clone())).collect();
                let others: Vec<usize> = col_rows[c].iter().copied().filter(|&r| r != p).collect();
                for r in others {
                    // s is a unit, so s^-1 = s
                    let f = &rows[r][&c] * &s;
                    for (j, v) in &pivot_row {
                        let e = rows[r].entry(*j).or_insert_with(BigInt::zero);
                        *e -= &f * v;
                        if e.is_zero() {
                            rows[r].remove(j);
                            col_rows[*j].remove(&r);
                        } else {
                            col_rows[*j].insert(r);
                        }
                    }
                }
                for (j, _) in &pivot_row {
                    col_rows[*j].remove(&p);
                }
                rows[p].clear();
                dead_rows[p] = true;
                dead_cols[c] = true;
                units += 1;
                progressed = true;
            }
            if !progressed {
                break;
            }
        }
        let live_rows: Vec<usize> = (0..self.rows)
            .filter(|&i| !dead_rows[i] && !rows[i].is_empty())
            .collect();
        let live_cols: Vec<usize> = (0..self.cols)
            .filter(|&j| !dead_cols[j] && !col_rows[j].is_empty())
            .collect();
        let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let mut rest = IntegerMatrix::zeros(live_rows.len(), live_cols.len());
        for (ri, &i) in live_rows.iter().enumerate() {
            for (j, v) in &rows[i] {
                rest.set(ri, col_pos[j], v.clone());
            }
        }
        let (tail, _, _) = Reducer::new(&rest, false).run();
        let mut diagonal = vec![BigInt::one(); units];
        diagonal.extend(tail);
        diagonal.resize(self.rows.min(self.cols), BigInt::zero());
        let nonzero = diagonal.iter().filter(|d| !d.is_zero()).count();
        diagonal[..nonzero].sort();
        diagonal
    }
}

/// Invariant factors of `m` by the sparse route. Agrees with
/// `smith_normal_form(m).diagonal`.
pub fn invariant_factors(m: &IntegerMatrix) -> Vec<BigInt> {
    SparseMatrix::from_dense(m).invariant_factors()
}

/// Rank by fraction-free elimination.
pub fn rank(m: &IntegerMatrix) -> usize {
    rank_of_rows(m.entries.clone(), m.cols)
}

pub(crate) fn rank_of_rows(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            for j in c + 1..cols {
                let v = &a[i][j] * &a[r][c] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Rank of a set of integer vectors (all of the same length).
pub fn vector_rank(vectors: &[&[BigInt]]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    rank_of_rows(vectors.iter().map(|v| v.to_vec()).collect(), first.len())
}

/// Rank of rational vectors; rows are scaled to integers first.
pub fn rational_rank(vectors: &[Vec<BigRational>]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    rank_of_rows(vectors.iter().map(|v| clear_denominators(v)).collect(), first.len())
}

/// Multiplies a rational vector by the least common multiple of its denominators.
pub fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Inverse of a unimodular matrix, or `None` when the determinant is not ±1.
pub fn unimodular_inverse(m: &IntegerMatrix) -> Option<IntegerMatrix> {
    if m.rows != m.cols {
        return None;
    }
    let n = m.rows;
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = m.entries[i]
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let v = &f * &a[c][j];
                    a[i][j] -= v;
                }
            }
        }
    }
    let mut out = IntegerMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let x = &a[i][n + j];
            if !x.is_integer() {
                return None;
            }
            out.set(i, j, x.to_integer());
        }
    }
    let det = m.determinant().ok()?;
    det.magnitude().is_one().then_some(out)
}

/// Integer solution of `a * x = b`, if one exists.
pub fn solve_integer(a: &IntegerMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    if b.len() != a.rows {
        return None;
    }
    let snf = smith_normal_form(a);
    let lb = snf.left.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols];
    for (i, v) in lb.iter().enumerate() {
        let d = snf.diagonal.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !v.is_zero() {
                return None;
            }
        } else {
            let (q, r) = v.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.right.mul_vec(&y))
}

/// Primitive, sign-normalized representative of the line through `v`.
/// `None` for the zero vector.
pub fn direction_key(v: &[BigInt]) -> Option<Vec<BigInt>> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    let first_negative = v.iter().find(|x| !x.is_zero())?.is_negative();
    Some(
        v.iter()
            .map(|x| {
                let q = x / &g;
                if first_negative {
                    -q
                } else {
                    q
                }
            })
            .collect(),
    )
}

/// Normalized Plücker coordinates of `span{u, v}`; `None` if `u, v` are dependent.
pub fn plane_key(u: &[BigInt], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = u.len();
    let mut minors = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            minors.push(&u[i] * &v[j] - &u[j] * &v[i]);
        }
    }
    direction_key(&minors)
}

pub fn dot(u: &[BigInt], v: &[BigInt]) -> BigInt {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_i64_rows(rows).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_certificate(a: &IntegerMatrix, snf: &SnfResult) {
        let prod = snf.left.mul(a).unwrap().mul(&snf.right).unwrap();
        assert_eq!(prod, snf.diagonal_matrix(), "L*A*R is not the diagonal");
        assert!(is_divisibility_chain(&snf.diagonal), "{:?}", snf.diagonal);
        assert!(snf.left.determinant().unwrap().magnitude().is_one());
        assert!(snf.right.determinant().unwrap().magnitude().is_one());
    }

    /// gcd of all k x k minors, by enumeration; the product d_1..d_k equals it.
    fn determinantal_divisor(a: &IntegerMatrix, k: usize) -> BigInt {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let mut g = BigInt::zero();
        for rs in subsets(a.rows(), k) {
            for cs in subsets(a.cols(), k) {
                let sub = IntegerMatrix::from_rows(
                    rs.iter()
                        .map(|&i| cs.iter().map(|&j| a.get(i, j).clone()).collect())
                        .collect(),
                )
                .unwrap();
                g = g.gcd(&sub.determinant().unwrap());
            }
        }
        g
    }

    fn divisor_oracle(a: &IntegerMatrix) -> Vec<BigInt> {
        let k = a.rows().min(a.cols());
        let mut out = Vec::new();
        let mut prev = BigInt::one();
        for i in 1..=k {
            let d = determinantal_divisor(a, i);
            if d.is_zero() {
                out.push(BigInt::zero());
            } else {
                out.push(&d / &prev);
                prev = d;
            }
        }
        out
    }

    #[test]
    fn snf_small_cases() {
        assert_eq!(smith_normal_form(&m(&[vec![0]])).diagonal, ints(&[0]));
        assert_eq!(
            smith_normal_form(&IntegerMatrix::identity(3)).diagonal,
            ints(&[1, 1, 1])
        );
        let a = m(&[vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal, ints(&[1, 6]));
        check_certificate(&a, &snf);
    }

    #[test]
    fn two_by_two_matches_minor_oracle() {
        // 2x2 diagonal is (gcd of entries, |det| / gcd); exhaust small entries
        for a in -3..=3i64 {
            for b in -3..=3i64 {
                for c in -3..=3i64 {
                    for d in -3..=3i64 {
                        let mat = m(&[vec![a, b], vec![c, d]]);
                        let snf = smith_normal_form(&mat);
                        check_certificate(&mat, &snf);
                        assert_eq!(snf.diagonal, divisor_oracle(&mat), "{mat:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn empty_shapes() {
        let a = IntegerMatrix::zeros(0, 3);
        let snf = smith_normal_form(&a);
        assert!(snf.diagonal.is_empty());
        assert_eq!(snf.right.rows(), 3);
        assert!(invariant_factors(&IntegerMatrix::zeros(4, 0)).is_empty());
    }

    #[test]
    fn torsion_example() {
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal, ints(&[2, 6, 12]));
        assert_eq!(invariant_factors(&a), ints(&[2, 6, 12]));
        check_certificate(&a, &snf);
    }

    #[test]
    fn unimodular_inverse_round_trip() {
        let a = m(&[vec![2, 1], vec![5, 3]]);
        let inv = unimodular_inverse(&a).unwrap();
        assert_eq!(a.mul(&inv).unwrap(), IntegerMatrix::identity(2));
        assert!(unimodular_inverse(&m(&[vec![2, 0], vec![0, 1]])).is_none());
    }

    #[test]
    fn solve_integer_cases() {
        let a = m(&[vec![2, 3]]);
        let x = solve_integer(&a, &ints(&[1])).unwrap();
        assert_eq!(a.mul_vec(&x), ints(&[1]));
        assert!(solve_integer(&m(&[vec![2, 4]]), &ints(&[1])).is_none());
    }

    #[test]
    fn keys() {
        assert_eq!(direction_key(&ints(&[0, -2, 4])), Some(ints(&[0, 1, -2])));
        assert_eq!(direction_key(&ints(&[0, 0])), None);
        let p1 = plane_key(&ints(&[1, 0, 0]), &ints(&[0, 1, 0])).unwrap();
        let p2 = plane_key(&ints(&[1, 1, 0]), &ints(&[2, -3, 0])).unwrap();
        assert_eq!(p1, p2);
        assert!(plane_key(&ints(&[1, 2]), &ints(&[2, 4])).is_none());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(100, 2), BigInt::from(4950));
    }

    proptest! {
        #[test]
        fn snf_certificate_and_routes_agree(
            rows in 1usize..6, cols in 1usize..6,
            seed in proptest::collection::vec(-6i64..=6, 36)
        ) {
            let data: Vec<Vec<i64>> = (0..rows)
                .map(|i| (0..cols).map(|j| seed[i * 6 + j]).collect())
                .collect();
            let a = m(&data);
            let snf = smith_normal_form(&a);
            check_certificate(&a, &snf);
            prop_assert_eq!(&snf.diagonal, &invariant_factors(&a));
            prop_assert_eq!(snf.rank, rank(&a));
        }

        #[test]
        fn snf_matches_minor_oracle(
            seed in proptest::collection::vec(-4i64..=4, 9)
        ) {
            let a = m(&[seed[0..3].to_vec(), seed[3..6].to_vec(), seed[6..9].to_vec()]);
            prop_assert_eq!(smith_normal_form(&a).diagonal, divisor_oracle(&a));
        }
    }
}
