//! Boxed plane partitions and the per-diagonal views of them.
//!
//! Rows and columns are 1-based in the public API. Cell `(r, j)` lies on
//! diagonal `i = j - r`, so diagonal `-a + 1` is the single bottom-left cell
//! and diagonal `b - 1` the single top-right cell. Vectors indexed by diagonal
//! cover the closed range `[-a, b]`; the two end slots are always zero.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::formulas;

/// Box parameters: `a` rows, `b` columns, entries in `[0, c]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoxDims {
    pub a: usize,
    pub b: usize,
    pub c: u32,
}

impl BoxDims {
    pub fn new(a: usize, b: usize, c: u32) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidDims(format!(
                "a and b must be positive (got a={a}, b={b})"
            )));
        }
        Ok(BoxDims { a, b, c })
    }

    pub fn cells(&self) -> usize {
        self.a * self.b
    }

    /// Lowest diagonal index, `-a`.
    pub fn min_index(&self) -> i64 {
        -(self.a as i64)
    }

    /// Highest diagonal index, `b`.
    pub fn max_index(&self) -> i64 {
        self.b as i64
    }

    /// Number of slots in a diagonal-indexed vector (`a + b + 1`).
    pub fn diag_slots(&self) -> usize {
        self.a + self.b + 1
    }

    /// Every diagonal index including the two empty boundary diagonals.
    pub fn diagonals(&self) -> std::ops::RangeInclusive<i64> {
        self.min_index()..=self.max_index()
    }

    /// Nonempty diagonals `-a + 1 ..= b - 1`.
    pub fn interior(&self) -> std::ops::RangeInclusive<i64> {
        (self.min_index() + 1)..=(self.max_index() - 1)
    }

    pub fn contains_index(&self, i: i64) -> bool {
        self.diagonals().contains(&i)
    }

    pub fn check_index(&self, i: i64) -> Result<()> {
        if self.contains_index(i) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                lo: self.min_index(),
                hi: self.max_index(),
            })
        }
    }

    /// Slot of diagonal `i` in a diagonal-indexed vector.
    pub fn slot(&self, i: i64) -> usize {
        debug_assert!(self.contains_index(i));
        (i + self.a as i64) as usize
    }

    /// Diagonal length `min(a, b, a + i, b - i)`, zero outside `(-a, b)`.
    pub fn diag_len(&self, i: i64) -> usize {
        let (a, b) = (self.a as i64, self.b as i64);
        a.min(b).min(a + i).min(b - i).max(0) as usize
    }

    /// 1-based cells `(r, j)` on diagonal `i`, top row first.
    pub fn diagonal_cells(&self, i: i64) -> impl Iterator<Item = (usize, usize)> {
        let r_lo = 1.max(1 - i);
        let r_hi = (self.a as i64).min(self.b as i64 - i);
        (r_lo..=r_hi).map(move |r| (r as usize, (r + i) as usize))
    }

    pub fn transposed(&self) -> BoxDims {
        BoxDims {
            a: self.b,
            b: self.a,
            c: self.c,
        }
    }
}

impl fmt::Display for BoxDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.a, self.b, self.c)
    }
}

/// An `a x b` matrix with entries in `[0, c]`, weakly decreasing along rows
/// and columns. Stored dense, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlanePartition {
    dims: BoxDims,
    z: Vec<u32>,
}

impl PlanePartition {
    /// Checks every constraint and reports all of the violations at once.
    pub fn validate(rows: &[Vec<i64>], dims: BoxDims) -> Result<Self> {
        if rows.len() != dims.a || rows.iter().any(|row| row.len() != dims.b) {
            let widths: Vec<String> = rows.iter().map(|r| r.len().to_string()).collect();
            return Err(Error::ShapeMismatch {
                expected_rows: dims.a,
                expected_cols: dims.b,
                found: format!("{} rows with widths [{}]", rows.len(), widths.join(",")),
            });
        }
        let mut violations = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v < 0 || v > i64::from(dims.c) {
                    violations.push(Violation::OutOfRange {
                        row: r + 1,
                        col: j + 1,
                        value: v,
                    });
                }
                if j + 1 < dims.b && v < row[j + 1] {
                    violations.push(Violation::RowIncrease {
                        row: r + 1,
                        col: j + 1,
                    });
                }
                if r + 1 < dims.a && v < rows[r + 1][j] {
                    violations.push(Violation::ColumnIncrease {
                        row: r + 1,
                        col: j + 1,
                    });
                }
            }
        }
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        let z = rows.iter().flatten().map(|&v| v as u32).collect();
        Ok(PlanePartition { dims, z })
    }

    /// Builds from row-major storage without checking. Callers must uphold
    /// the invariants; debug builds assert them.
    pub(crate) fn from_raw(dims: BoxDims, z: Vec<u32>) -> Self {
        let p = PlanePartition { dims, z };
        debug_assert!(p.is_valid());
        p
    }

    /// The all-zero partition, bottom of the lattice.
    pub fn bottom(dims: BoxDims) -> Self {
        PlanePartition {
            dims,
            z: vec![0; dims.cells()],
        }
    }

    /// The all-`c` partition, top of the lattice.
    pub fn top(dims: BoxDims) -> Self {
        PlanePartition {
            dims,
            z: vec![dims.c; dims.cells()],
        }
    }

    pub fn dims(&self) -> BoxDims {
        self.dims
    }

    /// Entry at 1-based `(r, j)`.
    pub fn get(&self, r: usize, j: usize) -> u32 {
        self.z[(r - 1) * self.dims.b + (j - 1)]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[u32] {
        &self.z
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [u32] {
        &mut self.z
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.z.chunks(self.dims.b)
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.rows()
            .map(|r| r.iter().map(|&v| i64::from(v)).collect())
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.z.iter().map(|&v| u64::from(v)).sum()
    }

    pub fn is_valid(&self) -> bool {
        let BoxDims { a, b, c } = self.dims;
        if self.z.len() != a * b {
            return false;
        }
        for r in 0..a {
            for j in 0..b {
                let v = self.z[r * b + j];
                if v > c
                    || (j + 1 < b && v < self.z[r * b + j + 1])
                    || (r + 1 < a && v < self.z[(r + 1) * b + j])
                {
                    return false;
                }
            }
        }
        true
    }

    /// Entries on diagonal `i`, top row first.
    pub fn diagonal(&self, i: i64) -> Vec<u32> {
        self.dims
            .diagonal_cells(i)
            .map(|(r, j)| self.get(r, j))
            .collect()
    }

    pub fn diagonal_sums(&self) -> DiagonalSums {
        let BoxDims { a, b, .. } = self.dims;
        let mut s = vec![0u64; self.dims.diag_slots()];
        for r in 0..a {
            for j in 0..b {
                // slot of i = j - r is (j - r) + a, with 0-based r and j the same offset.
                s[j + a - r] += u64::from(self.z[r * b + j]);
            }
        }
        DiagonalSums { dims: self.dims, s }
    }

    pub fn contour_heights(&self) -> ContourSet {
        let dims = self.dims;
        let slots = dims.diag_slots();
        let mut h = vec![vec![0usize; slots]; dims.c as usize];
        for i in dims.interior() {
            let slot = dims.slot(i);
            for (r, j) in dims.diagonal_cells(i) {
                let v = self.get(r, j) as usize;
                for level in h.iter_mut().take(v) {
                    level[slot] += 1;
                }
            }
        }
        ContourSet { dims, h }
    }

    /// Mirror across the main diagonal; dims become `(b, a, c)`.
    pub fn transpose(&self) -> PlanePartition {
        let BoxDims { a, b, .. } = self.dims;
        let mut z = vec![0; a * b];
        for r in 0..a {
            for j in 0..b {
                z[j * a + r] = self.z[r * b + j];
            }
        }
        PlanePartition {
            dims: self.dims.transposed(),
            z,
        }
    }

    /// `z'[r][j] = c - z[a+1-r][b+1-j]`.
    pub fn complement(&self) -> PlanePartition {
        let c = self.dims.c;
        let z = self.z.iter().rev().map(|&v| c - v).collect();
        PlanePartition { dims: self.dims, z }
    }

    /// Componentwise `self <= other`.
    pub fn dominated_by(&self, other: &PlanePartition) -> Result<bool> {
        if self.dims.a != other.dims.a || self.dims.b != other.dims.b {
            return Err(Error::ShapeMismatch {
                expected_rows: self.dims.a,
                expected_cols: self.dims.b,
                found: format!("{}x{}", other.dims.a, other.dims.b),
            });
        }
        Ok(self.z.iter().zip(&other.z).all(|(x, y)| x <= y))
    }
}

impl fmt::Display for PlanePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::to_text(self))
    }
}

/// `S_i` for every `i` in `[-a, b]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagonalSums {
    dims: BoxDims,
    s: Vec<u64>,
}

impl DiagonalSums {
    pub fn dims(&self) -> BoxDims {
        self.dims
    }

    pub fn get(&self, i: i64) -> u64 {
        self.s[self.dims.slot(i)]
    }

    /// Slot-indexed values, slot 0 being diagonal `-a`.
    pub fn as_slice(&self) -> &[u64] {
        &self.s
    }

    /// `S_{-a+1}, ..., S_{b-1}`.
    pub fn interior(&self) -> &[u64] {
        &self.s[1..self.s.len() - 1]
    }

    pub fn total(&self) -> u64 {
        self.s.iter().sum()
    }

    pub fn centered(&self) -> CenteredSums {
        CenteredSums::from_sums(self)
    }
}

/// `Y_i = E[S_i] - S_i`, exact. Zero at both boundary diagonals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenteredSums {
    dims: BoxDims,
    y: Vec<BigRational>,
}

impl CenteredSums {
    pub fn from_sums(sums: &DiagonalSums) -> Self {
        let dims = sums.dims;
        let y = dims
            .diagonals()
            .map(|i| {
                let mu = formulas::mean_diagonal_sum(dims, i).expect("index in range");
                mu - BigRational::from_integer(sums.get(i).into())
            })
            .collect();
        CenteredSums { dims, y }
    }

    pub fn dims(&self) -> BoxDims {
        self.dims
    }

    pub fn get(&self, i: i64) -> &BigRational {
        &self.y[self.dims.slot(i)]
    }

    pub fn as_slice(&self) -> &[BigRational] {
        &self.y
    }
}

/// Level-set crossing counts: `h[k][i]` is the number of cells on diagonal
/// `i` holding a value `>= k`, for `k` in `1..=c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContourSet {
    dims: BoxDims,
    h: Vec<Vec<usize>>,
}

impl ContourSet {
    pub fn dims(&self) -> BoxDims {
        self.dims
    }

    /// Number of contours, which is `c`.
    pub fn levels(&self) -> usize {
        self.h.len()
    }

    /// `h[k][i]` with 1-based level `k`.
    pub fn get(&self, k: usize, i: i64) -> usize {
        self.h[k - 1][self.dims.slot(i)]
    }

    /// Slot-indexed heights for level `k`.
    pub fn level(&self, k: usize) -> &[usize] {
        &self.h[k - 1]
    }

    /// `h[k][i] >= h[k+1][i]` everywhere.
    pub fn is_noncrossing(&self) -> bool {
        self.h
            .windows(2)
            .all(|w| w[0].iter().zip(&w[1]).all(|(hi, lo)| hi >= lo))
    }
}
