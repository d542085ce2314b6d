//! Exact sparse linear algebra over ℚ.
//!
//! Rows are converted to primitive integer vectors (denominators cleared)
//! and eliminated fraction-free: each update is `b·row − a·pivot` divided by
//! the row content, so entries never leave ℤ and stay small in practice.
//! Pivots follow a Markowitz-style rule: sparsest column first, then the
//! sparsest row in it, lowest index on ties.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::Q;
use crate::error::LinalgError;

type IntRow = Vec<(usize, BigInt)>;

/// Sparse rational matrix, stored by columns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<BTreeMap<usize, Q>>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            columns: vec![BTreeMap::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = QMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_columns(rows: usize, columns: Vec<BTreeMap<usize, Q>>) -> Self {
        assert!(columns
            .iter()
            .all(|c| c.keys().all(|&r| r < rows) && c.values().all(|v| !v.is_zero())));
        QMatrix {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(BTreeMap::len).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> Q {
        self.columns[col].get(&row).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, row: usize, col: usize, value: Q) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        if value.is_zero() {
            self.columns[col].remove(&row);
        } else {
            self.columns[col].insert(row, value);
        }
    }

    pub fn column(&self, col: usize) -> &BTreeMap<usize, Q> {
        &self.columns[col]
    }

    pub fn push_column(&mut self, column: BTreeMap<usize, Q>) {
        assert!(column.keys().all(|&r| r < self.rows));
        self.columns
            .push(column.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        self.cols += 1;
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for (j, col) in self.columns.iter().enumerate() {
            for (&i, v) in col {
                t.columns[i].insert(j, v.clone());
            }
        }
        t
    }

    /// Permutes rows and columns: entry `(i, j)` moves to `(rp[i], cp[j])`.
    pub fn permuted(&self, rp: &[usize], cp: &[usize]) -> QMatrix {
        let mut out = QMatrix::zeros(self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for (&i, v) in col {
                out.set(rp[i], cp[j], v.clone());
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Q::zero(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            if v[j].is_zero() {
                continue;
            }
            for (&i, a) in col {
                out[i] += a * &v[j];
            }
        }
        out
    }

    fn int_rows(&self) -> Vec<IntRow> {
        let mut rows: Vec<Vec<(usize, Q)>> = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (&i, v) in col {
                rows[i].push((j, v.clone()));
            }
        }
        rows.into_iter().map(|r| to_int_row(&r)).collect()
    }
}

/// Clears denominators and divides out the content.
fn to_int_row(entries: &[(usize, Q)]) -> IntRow {
    let lcm = entries
        .iter()
        .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    let mut row: IntRow = entries
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(j, v)| (*j, v.numer() * (&lcm / v.denom())))
        .collect();
    row.sort_by_key(|&(j, _)| j);
    make_primitive(&mut row);
    row
}

fn make_primitive(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
}

fn entry(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |&(j, _)| j)
        .ok()
        .map(|k| &row[k].1)
}

/// Eliminates `col` from `row` using `pivot` (which has a nonzero entry in
/// `col`): returns the primitive part of `b·row − a·pivot`.
fn eliminate(row: &IntRow, pivot: &IntRow, col: usize) -> IntRow {
    let a = entry(row, col).expect("row has entry in pivot column");
    let b = entry(pivot, col).expect("pivot has entry in pivot column");
    let g = a.gcd(b);
    let fa = a / &g;
    let fb = b / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut k) = (0, 0);
    while i < row.len() || k < pivot.len() {
        let (j, v) = if k == pivot.len() || (i < row.len() && row[i].0 < pivot[k].0) {
            let r = (row[i].0, &fb * &row[i].1);
            i += 1;
            r
        } else if i == row.len() || pivot[k].0 < row[i].0 {
            let r = (pivot[k].0, -(&fa * &pivot[k].1));
            k += 1;
            r
        } else {
            let r = (row[i].0, &fb * &row[i].1 - &fa * &pivot[k].1);
            i += 1;
            k += 1;
            r
        };
        if !v.is_zero() {
            out.push((j, v));
        }
    }
    make_primitive(&mut out);
    out
}

/// Row echelon form: `(pivot column, row)` in elimination order. A row
/// pivoted at step `s` has no entries in the pivot columns of steps `< s`.
fn echelonize(rows: Vec<IntRow>) -> Vec<(usize, IntRow)> {
    echelonize_deferring(rows, None)
}

/// Like [`echelonize`], but `deferred` is only chosen as a pivot column
/// once no other column has entries left (used for augmented systems).
fn echelonize_deferring(rows: Vec<IntRow>, deferred: Option<usize>) -> Vec<(usize, IntRow)> {
    let mut rows: Vec<IntRow> = rows;
    let mut active: BTreeSet<usize> = BTreeSet::new();
    let mut col_rows: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (r, row) in rows.iter().enumerate() {
        if row.is_empty() {
            continue;
        }
        active.insert(r);
        for &(j, _) in row {
            col_rows.entry(j).or_default().insert(r);
        }
    }
    let mut out = Vec::new();
    while !active.is_empty() {
        let (&col, _) = col_rows
            .iter()
            .filter(|(_, rs)| !rs.is_empty())
            .min_by_key(|(&j, rs)| (Some(j) == deferred, rs.len(), j))
            .expect("active rows have entries");
        let candidates = col_rows[&col].clone();
        let p = *candidates
            .iter()
            .min_by_key(|&&r| (rows[r].len(), r))
            .expect("nonempty column");
        active.remove(&p);
        let pivot = std::mem::take(&mut rows[p]);
        for &(j, _) in &pivot {
            col_rows.get_mut(&j).map(|s| s.remove(&p));
        }
        for &r in candidates.iter().filter(|&&r| r != p) {
            let old = std::mem::take(&mut rows[r]);
            for &(j, _) in &old {
                col_rows.get_mut(&j).map(|s| s.remove(&r));
            }
            let new = eliminate(&old, &pivot, col);
            if new.is_empty() {
                active.remove(&r);
            } else {
                for &(j, _) in &new {
                    col_rows.entry(j).or_default().insert(r);
                }
            }
            rows[r] = new;
        }
        col_rows.retain(|_, s| !s.is_empty());
        out.push((col, pivot));
    }
    out
}

/// Clears every pivot column from every other pivot row.
fn reduce(ech: &mut [(usize, IntRow)]) {
    for i in (0..ech.len()).rev() {
        for k in i + 1..ech.len() {
            let col = ech[k].0;
            if entry(&ech[i].1, col).is_some() {
                let reduced = eliminate(&ech[i].1, &ech[k].1, col);
                ech[i].1 = reduced;
            }
        }
    }
}

pub fn rank(m: &QMatrix) -> usize {
    // eliminate along the shorter side
    if m.cols < m.rows {
        echelonize(m.transpose().int_rows()).len()
    } else {
        echelonize(m.int_rows()).len()
    }
}

/// Basis of the right null space `{v : m·v = 0}`, one vector per free column
/// in increasing column order.
pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<Q>> {
    let mut ech = echelonize(m.int_rows());
    reduce(&mut ech);
    let pivots: BTreeSet<usize> = ech.iter().map(|(c, _)| *c).collect();
    (0..m.cols)
        .filter(|j| !pivots.contains(j))
        .map(|free| {
            let mut v = vec![Q::zero(); m.cols];
            v[free] = Q::one();
            for (c, row) in &ech {
                if let Some(e) = entry(row, free) {
                    let p = entry(row, *c).expect("pivot entry");
                    v[*c] = -Q::new(e.clone(), p.clone());
                }
            }
            v
        })
        .collect()
}

/// A solution `x` of `m·x = v` (free variables set to zero), if any.
pub fn solve(m: &QMatrix, v: &[Q]) -> Result<Option<Vec<Q>>, LinalgError> {
    if v.len() != m.rows {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows,
            found: v.len(),
        });
    }
    let rhs_col = m.cols;
    let mut rows: Vec<Vec<(usize, Q)>> = vec![Vec::new(); m.rows];
    for (j, col) in m.columns.iter().enumerate() {
        for (&i, a) in col {
            rows[i].push((j, a.clone()));
        }
    }
    for (i, b) in v.iter().enumerate() {
        if !b.is_zero() {
            rows[i].push((rhs_col, b.clone()));
        }
    }
    let mut ech = echelonize_deferring(rows.iter().map(|r| to_int_row(r)).collect(), Some(rhs_col));
    if ech.iter().any(|(c, _)| *c == rhs_col) {
        return Ok(None);
    }
    reduce(&mut ech);
    let mut x = vec![Q::zero(); m.cols];
    for (c, row) in &ech {
        if let Some(b) = entry(row, rhs_col) {
            let p = entry(row, *c).expect("pivot entry");
            x[*c] = Q::new(b.clone(), p.clone());
        }
    }
    Ok(Some(x))
}

/// Whether `v` is a rational combination of the columns of `m`.
pub fn in_span(v: &[Q], m: &QMatrix) -> Result<bool, LinalgError> {
    Ok(solve(m, v)?.is_some())
}

/// A growing subspace of ℚⁿ kept in (leading-entry) echelon form, used to
/// test vectors one at a time against a span.
#[derive(Clone, Debug, Default)]
pub struct IncrementalSpan {
    rows: BTreeMap<usize, IntRow>,
}

impl IncrementalSpan {
    pub fn new() -> Self {
        IncrementalSpan::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn residue(&self, v: &[(usize, Q)]) -> IntRow {
        let mut row = to_int_row(v);
        while let Some(&(lead, _)) = row.first() {
            match self.rows.get(&lead) {
                Some(pivot) => row = eliminate(&row, pivot, lead),
                None => break,
            }
        }
        row
    }

    pub fn contains(&self, v: &[(usize, Q)]) -> bool {
        self.residue(v).is_empty()
    }

    /// Adds `v`; returns whether it was independent of the current span.
    pub fn insert(&mut self, v: &[(usize, Q)]) -> bool {
        let row = self.residue(v);
        match row.first() {
            Some(&(lead, _)) => {
                self.rows.insert(lead, row);
                true
            }
            None => false,
        }
    }
}

pub fn dense_to_sparse(v: &[Q]) -> Vec<(usize, Q)> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// True when all entries are zero.
pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}
