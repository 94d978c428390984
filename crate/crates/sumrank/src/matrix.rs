//! Dense matrices over a field level of a tower.
//!
//! One matrix type serves every layer: entries are always elements of the
//! top field F, and a [`FieldLevel`] tag records which subfield the entries
//! are promised to lie in. Arithmetic is performed in F, which restricts
//! correctly because each K_i is closed under the field operations; mixing
//! levels promotes to the smallest common level. Row reduction always picks
//! the leftmost pivot and fully reduces, so the reduced form of a row space
//! is canonical: two matrices have equal row spaces iff their reduced forms
//! agree row for row.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::tower::{FieldElem, FieldTower};

/// Which subfield a matrix's entries are promised to lie in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldLevel {
    /// GF(p).
    Prime,
    /// K_i, the subfield designated by block i.
    Sub(usize),
    /// F itself.
    Top,
}

impl FieldLevel {
    pub fn contains(self, tower: &FieldTower, x: FieldElem) -> bool {
        match self {
            FieldLevel::Prime => (x.index() as u64) < tower.p(),
            FieldLevel::Sub(i) => tower.is_in_subfield(x, i),
            FieldLevel::Top => true,
        }
    }

    /// Smallest level containing both operands' entries.
    fn join(self, other: FieldLevel) -> FieldLevel {
        match (self, other) {
            (a, b) if a == b => a,
            (FieldLevel::Prime, b) => b,
            (a, FieldLevel::Prime) => a,
            _ => FieldLevel::Top,
        }
    }
}

/// Row-major matrix over one field level. Equality compares shape and
/// entries; the level tag is validated at construction and carried along.
#[derive(Clone)]
pub struct Matrix {
    tower: Arc<FieldTower>,
    level: FieldLevel,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElem>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl Eq for Matrix {}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Matrix({}x{} @ {:?}) [", self.rows, self.cols, self.level)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(r, c).index())?;
            }
        }
        write!(f, "]")
    }
}

/// Fully reduced row echelon form with its rank and pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduced {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub(crate) fn new_unchecked(
        tower: Arc<FieldTower>,
        level: FieldLevel,
        rows: usize,
        cols: usize,
        entries: Vec<FieldElem>,
    ) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        debug_assert!(entries.iter().all(|&x| level.contains(&tower, x)));
        Matrix { tower, level, rows, cols, entries }
    }

    /// Builds a matrix from rows, checking that every entry lies in the
    /// declared level. `cols` is explicit so zero-row matrices keep a shape.
    pub fn from_rows(
        tower: &Arc<FieldTower>,
        level: FieldLevel,
        cols: usize,
        rows: Vec<Vec<FieldElem>>,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::VectorLength { expected: cols, got: row.len() });
            }
            for &x in row {
                if !level.contains(tower, x) {
                    return Err(Error::EntryOutsideLevel);
                }
                entries.push(x);
            }
        }
        Ok(Matrix { tower: tower.clone(), level, rows: rows.len(), cols, entries })
    }

    pub fn from_fn(
        tower: &Arc<FieldTower>,
        level: FieldLevel,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElem,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let x = f(r, c);
                assert!(level.contains(tower, x), "entry outside declared level");
                entries.push(x);
            }
        }
        Matrix { tower: tower.clone(), level, rows, cols, entries }
    }

    pub fn zeros(tower: &Arc<FieldTower>, level: FieldLevel, rows: usize, cols: usize) -> Self {
        Matrix {
            tower: tower.clone(),
            level,
            rows,
            cols,
            entries: vec![tower.zero(); rows * cols],
        }
    }

    pub fn identity(tower: &Arc<FieldTower>, level: FieldLevel, n: usize) -> Self {
        let mut m = Self::zeros(tower, level, n, n);
        for i in 0..n {
            m.set(i, i, tower.one());
        }
        m
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn level(&self) -> FieldLevel {
        self.level
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> FieldElem {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        self.entries[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, x: FieldElem) {
        self.entries[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<FieldElem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.tower, self.level, self.cols, self.rows, |r, c| self.at(c, r))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        debug_assert_eq!(*self.tower, *other.tower, "towers differ");
        let t = &self.tower;
        let mut out = Matrix::zeros(t, self.level.join(other.level), self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let cur = out.at(r, c);
                    out.set(r, c, t.add(cur, t.mul(a, other.at(k, c))));
                }
            }
        }
        out
    }

    /// A · xᵀ as a plain vector.
    pub fn mul_vec(&self, x: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(self.cols, x.len(), "shape mismatch in matrix-vector product");
        let t = &self.tower;
        (0..self.rows).map(|r| dot(t, self.row(r), x)).collect()
    }

    /// x · A as a plain vector.
    pub fn vec_mul(&self, x: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(self.rows, x.len(), "shape mismatch in vector-matrix product");
        let t = &self.tower;
        let mut out = vec![t.zero(); self.cols];
        for (r, &xr) in x.iter().enumerate() {
            if xr.is_zero() {
                continue;
            }
            for c in 0..self.cols {
                out[c] = t.add(out[c], t.mul(xr, self.at(r, c)));
            }
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "shape mismatch in vertical stack");
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Matrix {
            tower: self.tower.clone(),
            level: self.level.join(other.level),
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Block-diagonal assembly; off-diagonal blocks are zero.
    pub fn block_diag(parts: &[Matrix]) -> Matrix {
        assert!(!parts.is_empty(), "block_diag needs at least one block");
        let tower = parts[0].tower.clone();
        let level = parts.iter().fold(FieldLevel::Prime, |l, m| l.join(m.level));
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(&tower, level, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for part in parts {
            for r in 0..part.rows {
                for c in 0..part.cols {
                    out.set(r0 + r, c0 + c, part.at(r, c));
                }
            }
            r0 += part.rows;
            c0 += part.cols;
        }
        out
    }

    /// Fully reduced row echelon form: leftmost pivots, pivots scaled to 1,
    /// zeros above and below each pivot. Zero rows sink to the bottom.
    pub fn rref(&self) -> Reduced {
        let t = self.tower.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            for c in 0..m.cols {
                let (a, b) = (m.at(row, c), m.at(pr, c));
                m.set(row, c, b);
                m.set(pr, c, a);
            }
            let scale = t.inv(m.at(row, col)).expect("pivot is nonzero");
            for c in col..m.cols {
                m.set(row, c, t.mul(scale, m.at(row, c)));
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col);
                    for c in col..m.cols {
                        let val = t.sub(m.at(r, c), t.mul(factor, m.at(row, c)));
                        m.set(r, c, val);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Reduced { matrix: m, rank: row, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Square with full rank. Invertibility is always decided by rank.
    pub fn invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Canonical basis (reduced, no zero rows) of {x : A xᵀ = 0}, one basis
    /// vector per row. Has cols − rank rows. Entries stay at the matrix's
    /// level because reduction never leaves the subfield.
    pub fn kernel_basis(&self) -> Matrix {
        let t = &self.tower;
        let red = self.rref();
        let mut free: Vec<usize> = Vec::new();
        let mut pivot_at = vec![None; self.cols];
        for (r, &c) in red.pivots.iter().enumerate() {
            pivot_at[c] = Some(r);
        }
        for c in 0..self.cols {
            if pivot_at[c].is_none() {
                free.push(c);
            }
        }
        let mut rows = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![t.zero(); self.cols];
            v[f] = t.one();
            for (r, &c) in red.pivots.iter().enumerate() {
                v[c] = t.neg(red.matrix.at(r, f));
            }
            rows.push(v);
        }
        let raw = Matrix::from_rows(t, self.level, self.cols, rows).expect("kernel rows are valid");
        let red = raw.rref();
        assert_eq!(red.rank, raw.rows, "kernel construction yields independent rows");
        red.matrix
    }

    /// Same row space, decided on canonical forms.
    /// Canonical basis of the row space: the reduced rows with zero rows
    /// dropped. Two matrices span the same row space iff their `row_basis`
    /// results are equal.
    pub fn row_basis(&self) -> Matrix {
        let red = self.rref();
        let rows = (0..red.rank).map(|r| red.matrix.row(r).to_vec()).collect();
        Matrix::from_rows(&self.tower, self.level, self.cols, rows)
            .expect("reduced rows are valid")
    }

    pub fn row_space_eq(&self, other: &Matrix) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let a = self.rref();
        let b = other.rref();
        a.rank == b.rank
            && (0..a.rank).all(|r| a.matrix.row(r) == b.matrix.row(r))
    }
}

/// Canonical basis of the intersection of two row spaces, as the orthogonal
/// of the sum of orthogonals. The standard form is non-degenerate, so this
/// is exact over any finite field.
pub fn row_space_intersection(a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.cols(), b.cols(), "ambient dimensions differ");
    a.kernel_basis().vstack(&b.kernel_basis()).kernel_basis()
}

pub fn dot(tower: &FieldTower, a: &[FieldElem], b: &[FieldElem]) -> FieldElem {
    assert_eq!(a.len(), b.len(), "dot product of unequal lengths");
    let mut acc = tower.zero();
    for (&x, &y) in a.iter().zip(b) {
        acc = tower.add(acc, tower.mul(x, y));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf4() -> Arc<FieldTower> {
        FieldTower::new(2, 2, &[1, 1, 1], &[1, 2]).unwrap()
    }

    fn gf2() -> Arc<FieldTower> {
        FieldTower::new(2, 1, &[0, 1], &[1]).unwrap()
    }

    fn m(t: &Arc<FieldTower>, level: FieldLevel, cols: usize, rows: &[&[u64]]) -> Matrix {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| t.element(v)).collect())
            .collect();
        Matrix::from_rows(t, level, cols, rows).unwrap()
    }

    #[test]
    fn rref_of_dependent_rows_has_rank_two() {
        let t = gf2();
        let a = m(&t, FieldLevel::Top, 3, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let red = a.rref();
        assert_eq!(red.rank, 2);
        assert_eq!(red.pivots, vec![0, 1]);
        let expect = m(&t, FieldLevel::Top, 3, &[&[1, 0, 1], &[0, 1, 1], &[0, 0, 0]]);
        assert_eq!(red.matrix, expect);
    }

    #[test]
    fn rref_scales_pivots_over_gf4() {
        let t = gf4();
        // ω · (1, ω) reduces to (1, ω) after scaling by ω⁻¹.
        let a = m(&t, FieldLevel::Top, 2, &[&[2, 3]]);
        let red = a.rref();
        assert_eq!(red.rank, 1);
        assert_eq!(red.matrix.at(0, 0), t.one());
        assert_eq!(red.matrix.at(0, 1), t.mul(t.inv(t.element(2)).unwrap(), t.element(3)));
    }

    #[test]
    fn kernel_of_all_ones_row() {
        let t = gf2();
        let a = m(&t, FieldLevel::Top, 3, &[&[1, 1, 1]]);
        let k = a.kernel_basis();
        assert_eq!(k.rows(), 2);
        let expect = m(&t, FieldLevel::Top, 3, &[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(k, expect);
        // Every kernel row is annihilated.
        for r in 0..k.rows() {
            assert!(a.mul_vec(k.row(r)).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn kernel_edge_shapes() {
        let t = gf4();
        let id = Matrix::identity(&t, FieldLevel::Top, 3);
        assert_eq!(id.kernel_basis().rows(), 0);
        let empty = Matrix::zeros(&t, FieldLevel::Top, 0, 3);
        let k = empty.kernel_basis();
        assert_eq!(k, Matrix::identity(&t, FieldLevel::Top, 3));
        assert_eq!(Matrix::zeros(&t, FieldLevel::Top, 2, 0).kernel_basis().rows(), 0);
    }

    #[test]
    fn intersection_of_coordinate_planes_is_the_shared_axis() {
        let t = gf4();
        let one = t.one();
        let zero = t.zero();
        let a = Matrix::from_rows(
            &t,
            FieldLevel::Top,
            3,
            vec![vec![one, zero, zero], vec![zero, one, zero]],
        )
        .unwrap();
        let b = Matrix::from_rows(
            &t,
            FieldLevel::Top,
            3,
            vec![vec![zero, one, zero], vec![zero, zero, one]],
        )
        .unwrap();
        let meet = row_space_intersection(&a, &b);
        let axis =
            Matrix::from_rows(&t, FieldLevel::Top, 3, vec![vec![zero, one, zero]]).unwrap();
        assert_eq!(meet, axis);
        assert_eq!(row_space_intersection(&a, &a), a.rref().matrix);
    }

    #[test]
    fn block_diag_and_identity() {
        let t = gf4();
        let a = Matrix::identity(&t, FieldLevel::Sub(0), 2);
        let b = Matrix::identity(&t, FieldLevel::Sub(1), 1);
        let d = Matrix::block_diag(&[a, b]);
        assert_eq!(d, Matrix::identity(&t, FieldLevel::Top, 3));
        assert_eq!(d.level(), FieldLevel::Top);
    }

    #[test]
    fn level_membership_is_enforced() {
        let t = gf4();
        let omega = t.element(2);
        let err = Matrix::from_rows(&t, FieldLevel::Sub(0), 1, vec![vec![omega]]).unwrap_err();
        assert_eq!(err, Error::EntryOutsideLevel);
        assert!(Matrix::from_rows(&t, FieldLevel::Sub(1), 1, vec![vec![omega]]).is_ok());
        assert!(Matrix::from_rows(&t, FieldLevel::Prime, 1, vec![vec![omega]]).is_err());
    }

    #[test]
    fn mixed_level_product_promotes() {
        let t = gf4();
        let a = m(&t, FieldLevel::Sub(0), 2, &[&[1, 1]]);
        let b = m(&t, FieldLevel::Top, 1, &[&[2], &[3]]);
        let prod = a.mul(&b);
        assert_eq!(prod.level(), FieldLevel::Top);
        assert_eq!(prod.at(0, 0), t.add(t.element(2), t.element(3)));
    }

    #[test]
    fn invertibility_by_rank() {
        let t = gf2();
        assert!(m(&t, FieldLevel::Top, 2, &[&[1, 1], &[0, 1]]).invertible());
        assert!(!m(&t, FieldLevel::Top, 2, &[&[1, 1], &[1, 1]]).invertible());
        assert!(!m(&t, FieldLevel::Top, 2, &[&[1, 1]]).invertible());
        // 0×0 is vacuously invertible.
        assert!(Matrix::zeros(&t, FieldLevel::Top, 0, 0).invertible());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rref_is_idempotent(seed in proptest::collection::vec(0u64..4, 12)) {
            let t = gf4();
            let a = Matrix::from_fn(&t, FieldLevel::Top, 3, 4, |r, c| t.element(seed[r * 4 + c]));
            let red = a.rref();
            let again = red.matrix.rref();
            prop_assert_eq!(&red.matrix, &again.matrix);
            prop_assert_eq!(red.rank, again.rank);
        }

        #[test]
        fn rank_plus_nullity_is_cols(seed in proptest::collection::vec(0u64..4, 12)) {
            let t = gf4();
            let a = Matrix::from_fn(&t, FieldLevel::Top, 4, 3, |r, c| t.element(seed[r * 3 + c]));
            prop_assert_eq!(a.rank() + a.kernel_basis().rows(), a.cols());
        }

        #[test]
        fn row_operations_preserve_row_space(
            seed in proptest::collection::vec(0u64..4, 9),
            scalar in 1u64..4,
        ) {
            let t = gf4();
            let a = Matrix::from_fn(&t, FieldLevel::Top, 3, 3, |r, c| t.element(seed[r * 3 + c]));
            // Add scalar · row 0 to row 1 and swap rows 1 and 2.
            let s = t.element(scalar);
            let mut rows = a.row_vecs();
            for c in 0..3 {
                rows[1][c] = t.add(rows[1][c], t.mul(s, rows[0][c]));
            }
            rows.swap(1, 2);
            let b = Matrix::from_rows(&t, FieldLevel::Top, 3, rows).unwrap();
            prop_assert!(a.row_space_eq(&b));
            prop_assert_eq!(a.rref().matrix, b.rref().matrix);
        }

        #[test]
        fn product_rank_bounded(
            sa in proptest::collection::vec(0u64..4, 6),
            sb in proptest::collection::vec(0u64..4, 6),
        ) {
            let t = gf4();
            let a = Matrix::from_fn(&t, FieldLevel::Top, 2, 3, |r, c| t.element(sa[r * 3 + c]));
            let b = Matrix::from_fn(&t, FieldLevel::Top, 3, 2, |r, c| t.element(sb[r * 2 + c]));
            let ab = a.mul(&b);
            prop_assert!(ab.rank() <= a.rank().min(b.rank()));
        }

        #[test]
        fn kernel_rows_annihilate(seed in proptest::collection::vec(0u64..4, 12)) {
            let t = gf4();
            let a = Matrix::from_fn(&t, FieldLevel::Top, 3, 4, |r, c| t.element(seed[r * 4 + c]));
            let k = a.kernel_basis();
            for r in 0..k.rows() {
                prop_assert!(a.mul_vec(k.row(r)).iter().all(|x| x.is_zero()));
            }
        }
    }
}
