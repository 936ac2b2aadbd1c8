//! Dense matrices over a finite field.
//!
//! Elimination always pivots on the first nonzero entry in column order, so
//! echelon forms, inverses and `solve_right` witnesses are reproducible.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::galois::{FieldElement, FieldSpec, GaloisError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch in {op}: {detail}")]
    Shape { op: &'static str, detail: String },
    #[error("matrices live over different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("matrix is singular (rank {rank} of {size})")]
    Singular { rank: usize, size: usize },
    #[error("index {index} out of range for {len} matrices")]
    IndexOutOfRange { index: usize, len: usize },
    #[error(transparent)]
    Galois(#[from] GaloisError),
}

fn shape_err(op: &'static str, detail: String) -> MatrixError {
    MatrixError::Shape { op, detail }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FeMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

impl fmt::Debug for FeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: FeMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl FeMatrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> FeMatrix {
        FeMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> FeMatrix {
        let mut m = FeMatrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major raw encodings, checking every entry.
    pub fn from_entries(
        field: &FieldSpec,
        rows: usize,
        cols: usize,
        entries: Vec<u16>,
    ) -> Result<FeMatrix, MatrixError> {
        if entries.len() != rows * cols {
            return Err(shape_err(
                "from_entries",
                format!("{} entries for a {rows}x{cols} matrix", entries.len()),
            ));
        }
        for &v in &entries {
            field.elem(v as u32)?;
        }
        Ok(FeMatrix {
            field: field.clone(),
            rows,
            cols,
            data: entries,
        })
    }

    /// Builds a matrix from a list of rows of equal length. An empty list
    /// gives a 0×0 matrix.
    pub fn from_rows<R: AsRef<[u16]>>(field: &FieldSpec, rows: &[R]) -> Result<FeMatrix, MatrixError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(shape_err("from_rows", "ragged rows".into()));
        }
        let entries = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        FeMatrix::from_entries(field, rows.len(), cols, entries)
    }

    /// A column vector.
    pub fn column(field: &FieldSpec, entries: &[u16]) -> Result<FeMatrix, MatrixError> {
        FeMatrix::from_entries(field, entries.len(), 1, entries.to_vec())
    }

    pub fn random<R: Rng + ?Sized>(field: &FieldSpec, rows: usize, cols: usize, rng: &mut R) -> FeMatrix {
        let q = field.q() as u16;
        FeMatrix {
            field: field.clone(),
            rows,
            cols,
            data: (0..rows * cols).map(|_| rng.gen_range(0..q)).collect(),
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
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

    /// Row-major raw encodings.
    pub fn entries(&self) -> &[u16] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u16 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        self.data[r * self.cols + c]
    }

    pub fn element(&self, r: usize, c: usize) -> FieldElement {
        FieldElement(self.get(r, c))
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u16) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        debug_assert!((v as u32) < self.field.q());
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u16> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u16>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn same_field(&self, other: &FeMatrix) -> Result<(), MatrixError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(MatrixError::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ))
        }
    }

    pub fn transpose(&self) -> FeMatrix {
        let mut t = FeMatrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, other: &FeMatrix) -> Result<FeMatrix, MatrixError> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(shape_err(
                "mul",
                format!("{:?} times {:?}", self.shape(), other.shape()),
            ));
        }
        let f = &self.field;
        let mut out = FeMatrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a != 0 {
                    let src = other.row(k);
                    let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                    axpy(f, dst, src, a);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &FeMatrix) -> Result<FeMatrix, MatrixError> {
        self.same_field(other)?;
        if self.shape() != other.shape() {
            return Err(shape_err(
                "add",
                format!("{:?} plus {:?}", self.shape(), other.shape()),
            ));
        }
        let mut out = self.clone();
        axpy(&self.field, &mut out.data, &other.data, 1);
        Ok(out)
    }

    pub fn neg(&self) -> FeMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = self.field.neg_raw(*v);
        }
        out
    }

    pub fn sub(&self, other: &FeMatrix) -> Result<FeMatrix, MatrixError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: u16) -> FeMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = self.field.mul_raw(*v, s);
        }
        out
    }

    /// Row vector times matrix: `v · self`.
    pub fn vec_mul(&self, v: &[u16]) -> Result<Vec<u16>, MatrixError> {
        if v.len() != self.rows {
            return Err(shape_err(
                "vec_mul",
                format!("vector of length {} times {:?}", v.len(), self.shape()),
            ));
        }
        let mut out = vec![0u16; self.cols];
        for (r, &a) in v.iter().enumerate() {
            if a != 0 {
                axpy(&self.field, &mut out, self.row(r), a);
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation. Needs at least one block to know the field.
    pub fn hstack(blocks: &[&FeMatrix]) -> Result<FeMatrix, MatrixError> {
        let first = blocks
            .first()
            .ok_or_else(|| shape_err("hstack", "no blocks".into()))?;
        let rows = first.rows;
        for b in blocks {
            first.same_field(b)?;
            if b.rows != rows {
                return Err(shape_err(
                    "hstack",
                    format!("row counts {rows} and {}", b.rows),
                ));
            }
        }
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = FeMatrix::zeros(&first.field, rows, cols);
        for r in 0..rows {
            let mut offset = r * cols;
            for b in blocks {
                out.data[offset..offset + b.cols].copy_from_slice(b.row(r));
                offset += b.cols;
            }
        }
        Ok(out)
    }

    /// Vertical concatenation. Needs at least one block to know the field.
    pub fn vstack(blocks: &[&FeMatrix]) -> Result<FeMatrix, MatrixError> {
        let first = blocks
            .first()
            .ok_or_else(|| shape_err("vstack", "no blocks".into()))?;
        let cols = first.cols;
        let mut data = Vec::new();
        for b in blocks {
            first.same_field(b)?;
            if b.cols != cols {
                return Err(shape_err(
                    "vstack",
                    format!("column counts {cols} and {}", b.cols),
                ));
            }
            data.extend_from_slice(&b.data);
        }
        let rows = data.len() / cols.max(1);
        let rows = if cols == 0 {
            blocks.iter().map(|b| b.rows).sum()
        } else {
            rows
        };
        Ok(FeMatrix {
            field: first.field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn select_cols(&self, cols: &[usize]) -> FeMatrix {
        let mut out = FeMatrix::zeros(&self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.data[r * cols.len() + j] = self.get(r, c);
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> FeMatrix {
        let mut out = FeMatrix::zeros(&self.field, rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            out.data[i * self.cols..(i + 1) * self.cols].copy_from_slice(self.row(r));
        }
        out
    }

    /// The `h × w` submatrix with top-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> FeMatrix {
        assert!(r0 + h <= self.rows && c0 + w <= self.cols, "block out of bounds");
        let mut out = FeMatrix::zeros(&self.field, h, w);
        for r in 0..h {
            out.data[r * w..(r + 1) * w]
                .copy_from_slice(&self.data[(r0 + r) * self.cols + c0..(r0 + r) * self.cols + c0 + w]);
        }
        out
    }

    /// Overwrites the block at `(r0, c0)` with `src`.
    pub fn set_block(&mut self, r0: usize, c0: usize, src: &FeMatrix) {
        assert!(
            r0 + src.rows <= self.rows && c0 + src.cols <= self.cols,
            "block out of bounds"
        );
        for r in 0..src.rows {
            let start = (r0 + r) * self.cols + c0;
            self.data[start..start + src.cols].copy_from_slice(src.row(r));
        }
    }

    /// Reduced row echelon form with pivots chosen as the first nonzero entry
    /// scanning columns left to right, rows top to bottom.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = eliminate(&self.field, &mut m.data, self.rows, self.cols, true);
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        let mut data = self.data.clone();
        eliminate(&self.field, &mut data, self.rows, self.cols, false).len()
    }

    pub fn invert(&self) -> Result<FeMatrix, MatrixError> {
        if self.rows != self.cols {
            return Err(shape_err("invert", format!("{:?} is not square", self.shape())));
        }
        let n = self.rows;
        let aug = FeMatrix::hstack(&[self, &FeMatrix::identity(&self.field, n)])?;
        let red = aug.rref();
        let rank = red.pivots.iter().filter(|&&p| p < n).count();
        if rank < n {
            return Err(MatrixError::Singular { rank, size: n });
        }
        Ok(red.matrix.block(0, n, n, n))
    }

    /// Some `T` with `self · T = b`, or `None` when the columns of `b` are not
    /// all in the column space of `self`. Free variables are set to zero.
    pub fn solve_right(&self, b: &FeMatrix) -> Result<Option<FeMatrix>, MatrixError> {
        self.same_field(b)?;
        if self.rows != b.rows {
            return Err(shape_err(
                "solve_right",
                format!("{:?} against {:?}", self.shape(), b.shape()),
            ));
        }
        let n = self.cols;
        if self.rows == 0 {
            return Ok(Some(FeMatrix::zeros(&self.field, n, b.cols)));
        }
        let red = FeMatrix::hstack(&[self, b])?.rref();
        if red.pivots.iter().any(|&p| p >= n) {
            return Ok(None);
        }
        let mut t = FeMatrix::zeros(&self.field, n, b.cols);
        for (i, &p) in red.pivots.iter().enumerate() {
            for j in 0..b.cols {
                t.data[p * b.cols + j] = red.matrix.get(i, n + j);
            }
        }
        Ok(Some(t))
    }

    /// Concatenates `mats[i]` for the given indices, left to right in
    /// increasing index order. Indices are 0-based; duplicates are ignored.
    pub fn concat_indexed(
        field: &FieldSpec,
        mats: &[FeMatrix],
        indices: &[usize],
    ) -> Result<FeMatrix, MatrixError> {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if let Some(&bad) = idx.iter().find(|&&i| i >= mats.len()) {
            return Err(MatrixError::IndexOutOfRange {
                index: bad,
                len: mats.len(),
            });
        }
        let rows = mats.first().map_or(0, |m| m.rows);
        for m in mats {
            if m.field != *field {
                return Err(MatrixError::FieldMismatch(field.to_string(), m.field.to_string()));
            }
            if m.rows != rows {
                return Err(shape_err(
                    "concat_indexed",
                    format!("row counts {rows} and {}", m.rows),
                ));
            }
        }
        if idx.is_empty() {
            return Ok(FeMatrix::zeros(field, rows, 0));
        }
        let blocks: Vec<&FeMatrix> = idx.iter().map(|&i| &mats[i]).collect();
        FeMatrix::hstack(&blocks)
    }
}

/// `dst += a · src`, elementwise.
#[inline]
pub(crate) fn axpy(field: &FieldSpec, dst: &mut [u16], src: &[u16], a: u16) {
    if a == 0 {
        return;
    }
    if field.p() == 2 && a == 1 {
        for (d, &s) in dst.iter_mut().zip(src) {
            *d ^= s;
        }
    } else {
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d = field.add_raw(*d, field.mul_raw(a, s));
            }
        }
    }
}

/// Gauss-Jordan elimination in place on a row-major buffer. Returns pivot
/// columns. With `reduce` false only rows below each pivot are cleared,
/// which is enough for the rank.
pub(crate) fn eliminate(
    field: &FieldSpec,
    data: &mut [u16],
    rows: usize,
    cols: usize,
    reduce: bool,
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = field.inv_raw(data[r * cols + c]);
        if inv != 1 {
            for v in &mut data[r * cols..(r + 1) * cols] {
                *v = field.mul_raw(*v, inv);
            }
        }
        let (before, rest) = data.split_at_mut(r * cols);
        let (pivot_row, after) = rest.split_at_mut(cols);
        for i in 0..rows - r - 1 {
            let row = &mut after[i * cols..(i + 1) * cols];
            let f = row[c];
            if f != 0 {
                axpy(field, row, pivot_row, field.neg_raw(f));
            }
        }
        if reduce {
            for i in 0..r {
                let row = &mut before[i * cols..(i + 1) * cols];
                let f = row[c];
                if f != 0 {
                    axpy(field, row, pivot_row, field.neg_raw(f));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u32) -> FieldSpec {
        FieldSpec::with_order(q).unwrap()
    }

    fn mat(q: u32, rows: &[&[u16]]) -> FeMatrix {
        FeMatrix::from_rows(&gf(q), rows).unwrap()
    }

    #[test]
    fn rank_basics() {
        let f = gf(3);
        assert_eq!(FeMatrix::identity(&f, 4).rank(), 4);
        assert_eq!(FeMatrix::zeros(&f, 3, 5).rank(), 0);
        assert_eq!(mat(3, &[&[1, 2], &[2, 1]]).rank(), 1);
        assert_eq!(FeMatrix::zeros(&f, 0, 3).rank(), 0);
    }

    #[test]
    fn invert_examples() {
        let a = mat(2, &[&[1, 1], &[0, 1]]);
        let inv = a.invert().unwrap();
        assert_eq!(inv, a);
        assert_eq!(a.mul(&inv).unwrap(), FeMatrix::identity(&gf(2), 2));
        assert_eq!(
            mat(2, &[&[1, 1], &[1, 1]]).invert(),
            Err(MatrixError::Singular { rank: 1, size: 2 })
        );
        let id = FeMatrix::identity(&gf(5), 3);
        assert_eq!(id.invert().unwrap(), id);
    }

    #[test]
    fn solve_right_examples() {
        let f = gf(2);
        let b = mat(2, &[&[1, 0, 1], &[1, 1, 0]]);
        assert_eq!(FeMatrix::identity(&f, 2).solve_right(&b).unwrap(), Some(b.clone()));

        // [M1 | M2] = I and M3 = (1,1)^T.
        let a = FeMatrix::identity(&f, 2);
        let m3 = FeMatrix::column(&f, &[1, 1]).unwrap();
        let t = a.solve_right(&m3).unwrap().unwrap();
        assert_eq!(t, m3);
        assert_eq!(a.mul(&t).unwrap(), m3);

        let z = FeMatrix::zeros(&f, 2, 2);
        assert_eq!(z.solve_right(&m3).unwrap(), None);
        assert!(matches!(
            z.solve_right(&FeMatrix::zeros(&f, 3, 1)),
            Err(MatrixError::Shape { .. })
        ));
    }

    #[test]
    fn solve_right_sets_free_variables_to_zero() {
        let a = mat(3, &[&[1, 1, 0], &[0, 0, 1]]);
        let b = mat(3, &[&[2], &[1]]);
        let t = a.solve_right(&b).unwrap().unwrap();
        assert_eq!(t, mat(3, &[&[2], &[0], &[1]]));
    }

    #[test]
    fn concat_indexed_examples() {
        let f = gf(3);
        let mats: Vec<FeMatrix> = (0..3)
            .map(|i| FeMatrix::column(&f, &[i as u16, 1]).unwrap())
            .collect();
        let empty = FeMatrix::concat_indexed(&f, &mats, &[]).unwrap();
        assert_eq!(empty.shape(), (2, 0));
        assert_eq!(empty.rank(), 0);
        assert_eq!(FeMatrix::concat_indexed(&f, &mats, &[2]).unwrap(), mats[2]);
        let both = FeMatrix::concat_indexed(&f, &mats, &[2, 0]).unwrap();
        assert_eq!(both, mat(3, &[&[0, 2], &[1, 1]]));
        assert_eq!(
            FeMatrix::concat_indexed(&f, &mats, &[3]),
            Err(MatrixError::IndexOutOfRange { index: 3, len: 3 })
        );
    }

    #[test]
    fn rref_pivots_first_nonzero_in_column_order() {
        let m = mat(5, &[&[0, 2, 4], &[0, 1, 2], &[3, 0, 1]]);
        let red = m.rref();
        assert_eq!(red.pivots, vec![0, 1]);
        assert_eq!(red.matrix.row(0), &[1, 0, 2]);
        assert_eq!(red.matrix.row(1), &[0, 1, 2]);
        assert_eq!(red.matrix.row(2), &[0, 0, 0]);
    }

    #[test]
    fn stacking_and_blocks() {
        let a = mat(2, &[&[1, 0], &[0, 1]]);
        let b = mat(2, &[&[1], &[1]]);
        let h = FeMatrix::hstack(&[&a, &b]).unwrap();
        assert_eq!(h.block(0, 2, 2, 1), b);
        let v = FeMatrix::vstack(&[&a, &a]).unwrap();
        assert_eq!(v.shape(), (4, 2));
        assert_eq!(v.select_rows(&[2, 3]), a);
        assert_eq!(h.transpose().transpose(), h);
        assert_eq!(a.vec_mul(&[1, 1]).unwrap(), vec![1, 1]);
    }

    #[test]
    fn random_inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2, 3, 4, 7] {
            let f = gf(q);
            for n in 1..6 {
                let m = FeMatrix::random(&f, n, n, &mut rng);
                if let Ok(inv) = m.invert() {
                    assert_eq!(m.mul(&inv).unwrap(), FeMatrix::identity(&f, n));
                    assert_eq!(inv.mul(&m).unwrap(), FeMatrix::identity(&f, n));
                } else {
                    assert!(m.rank() < n);
                }
            }
        }
    }
}
