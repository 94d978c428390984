//! Linear codes measured in the blockwise rank metric.
//!
//! A codeword lives in F^n with the coordinates split into blocks; block i
//! is weighed by expanding its entries over the relative basis of the i-th
//! subfield and taking the rank of the resulting coordinate matrix. The
//! weight of a word is the sum of those ranks, and the support is the tuple
//! of row spaces, one subspace per block.
//!
//! Besides weight and support, this module builds the space of vectors
//! supported under a lattice element, the projection onto a lattice
//! element, and the pair of dual-code quantities `mu` and `rho` that
//! together always account for the full redundancy. Quantities that admit
//! two derivations are implemented both ways on purpose; the test suites
//! pin the routes against each other.

use std::sync::Arc;

use crate::error::{Error, Result, ScaleGuard};
use crate::lattice::{Ground, ProductElement, Subspace};
use crate::matrix::{dot, row_space_intersection, FieldLevel, Matrix};
use crate::tower::{FieldElem, FieldTower};

/// Blockwise rank weight: the sum over blocks of the rank of the block's
/// coordinate matrix. Specializes to Hamming weight when every block has
/// length one over the full field, and to the rank weight when there is a
/// single block over the prime subfield.
pub fn srank(ground: &Ground, v: &[FieldElem]) -> usize {
    assert_eq!(v.len(), ground.n(), "vector length does not match the ground");
    let t = ground.tower();
    (0..ground.block_count())
        .map(|i| t.coordinate_matrix(i, ground.block_slice(v, i)).rank())
        .sum()
}

/// Distance induced by the blockwise rank weight.
pub fn dist(ground: &Ground, x: &[FieldElem], y: &[FieldElem]) -> usize {
    assert_eq!(x.len(), y.len(), "vectors of unequal length");
    let t = ground.tower();
    let diff: Vec<FieldElem> = x.iter().zip(y).map(|(&a, &b)| t.sub(a, b)).collect();
    srank(ground, &diff)
}

/// Support of a vector: per block, the row space of its coordinate matrix
/// over the block subfield. The total rank of the support equals the
/// weight of the vector.
pub fn support(ground: &Ground, v: &[FieldElem]) -> ProductElement {
    assert_eq!(v.len(), ground.n(), "vector length does not match the ground");
    let t = ground.tower();
    let components = (0..ground.block_count())
        .map(|i| {
            let rows = t.coordinate_matrix(i, ground.block_slice(v, i)).row_vecs();
            Subspace::span(t, i, ground.block_len(i), &rows)
                .expect("coordinate rows lie in the block subfield")
        })
        .collect();
    ProductElement::new(components).expect("one component per block")
}

/// Support of an F-linear space of vectors, as the join of the supports of
/// every scalar multiple of every basis row. Scaling by the big field can
/// move a row's support, so the basis rows alone are not enough; their
/// scalar multiples are, because the coordinate rows of any combination of
/// basis vectors are subfield combinations of the coordinate rows of the
/// scaled basis vectors.
pub fn support_of_subcode(ground: &Ground, basis: &Matrix) -> ProductElement {
    assert_eq!(basis.cols(), ground.n(), "basis width does not match the ground");
    let t = ground.tower().clone();
    let mut acc = ProductElement::zero(ground);
    for row in basis.row_vecs() {
        for a in t.elements() {
            if a.is_zero() {
                continue;
            }
            let scaled: Vec<FieldElem> = row.iter().map(|&x| t.mul(a, x)).collect();
            acc = acc.join(&support(ground, &scaled));
        }
    }
    acc
}

/// Ground-truth support of an F-linear space: joins the supports of every
/// vector in the space. State count is q^rank.
pub fn support_of_subcode_exhaustive(
    ground: &Ground,
    basis: &Matrix,
    guard: &ScaleGuard,
) -> Result<ProductElement> {
    assert_eq!(basis.cols(), ground.n(), "basis width does not match the ground");
    let t = ground.tower().clone();
    let reduced = basis.row_basis();
    guard.admit(states(t.order(), reduced.rows()))?;
    let mut acc = ProductElement::zero(ground);
    for msg in all_vectors(&t, reduced.rows()) {
        let v = reduced.vec_mul(&msg);
        acc = acc.join(&support(ground, &v));
    }
    Ok(acc)
}

/// Basis of the space of all vectors whose support lies under `lam`: the
/// canonical basis rows of each component, read as big-field entries and
/// padded out to length n. The rows are reduced as they stand, and their
/// count always equals the rank of `lam`; both facts are asserted.
pub fn support_space(ground: &Ground, lam: &ProductElement) -> Matrix {
    assert_eq!(lam.block_count(), ground.block_count(), "block count mismatch");
    let t = ground.tower();
    let n = ground.n();
    let mut rows = Vec::with_capacity(lam.rk());
    for i in 0..ground.block_count() {
        let start = ground.block_start(i);
        for g in lam.component(i).basis().row_vecs() {
            let mut v = vec![t.zero(); n];
            v[start..start + g.len()].copy_from_slice(&g);
            rows.push(v);
        }
    }
    let m = Matrix::from_rows(t, FieldLevel::Top, n, rows)
        .expect("lifted generators are field elements");
    assert_eq!(m.rank(), lam.rk(), "lifted generators must stay independent");
    debug_assert_eq!(m.rref().matrix, m, "blockwise reduced rows are globally reduced");
    m
}

/// Ground-truth construction of the same space: walk all of F^n, keep the
/// vectors whose support lies under `lam`, and reduce the survivors.
/// State count is q^n.
pub fn support_space_by_filter(
    ground: &Ground,
    lam: &ProductElement,
    guard: &ScaleGuard,
) -> Result<Matrix> {
    assert_eq!(lam.block_count(), ground.block_count(), "block count mismatch");
    let t = ground.tower().clone();
    let n = ground.n();
    guard.admit(states(t.order(), n))?;
    let mut keep = Vec::new();
    for v in all_vectors(&t, n) {
        if support(ground, &v).leq(lam) {
            keep.push(v);
        }
    }
    let m = Matrix::from_rows(&t, FieldLevel::Top, n, keep).expect("vectors have length n");
    Ok(m.row_basis())
}

/// Block-diagonal stack of the canonical component bases of `lam`, with
/// shape rk(lam) x n. Multiplying a vector by its transpose projects the
/// vector onto the coordinates of `lam`.
pub fn projection_matrix(ground: &Ground, lam: &ProductElement) -> Matrix {
    assert_eq!(lam.block_count(), ground.block_count(), "block count mismatch");
    let parts: Vec<Matrix> =
        (0..ground.block_count()).map(|i| lam.component(i).basis().clone()).collect();
    Matrix::block_diag(&parts)
}

/// Image of `x` under the projection onto `lam`: the products of `x` with
/// each lifted generator of `lam`, as a vector of length rk(lam). It
/// vanishes exactly when the support of `x` lies under the complement.
pub fn project(ground: &Ground, lam: &ProductElement, x: &[FieldElem]) -> Vec<FieldElem> {
    projection_matrix(ground, lam).mul_vec(x)
}

/// An F-linear code over a ground: a generator matrix of full row rank
/// together with the canonical parity check, computed once and reused by
/// every dual quantity.
#[derive(Debug, Clone)]
pub struct SumRankCode {
    ground: Ground,
    generator: Matrix,
    parity: Matrix,
}

impl SumRankCode {
    /// Wraps a generator. The width must match the ground and the rows
    /// must be independent; the parity check is the canonical kernel basis
    /// of the generator.
    pub fn new(ground: Ground, generator: Matrix) -> Result<Self> {
        if generator.cols() != ground.n() {
            return Err(Error::GeneratorWidth { expected: ground.n(), got: generator.cols() });
        }
        debug_assert_eq!(**generator.tower(), **ground.tower(), "towers differ");
        if generator.rank() != generator.rows() {
            return Err(Error::RankDeficientGenerator);
        }
        let parity = generator.kernel_basis();
        Ok(SumRankCode { ground, generator, parity })
    }

    pub fn from_rows(ground: Ground, rows: Vec<Vec<FieldElem>>) -> Result<Self> {
        let tower = ground.tower().clone();
        let g = Matrix::from_rows(&tower, FieldLevel::Top, ground.n(), rows)?;
        Self::new(ground, g)
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// Canonical basis of the dual code; every row annihilates every
    /// codeword under the standard product.
    pub fn parity(&self) -> &Matrix {
        &self.parity
    }

    pub fn length(&self) -> usize {
        self.ground.n()
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn redundancy(&self) -> usize {
        self.parity.rows()
    }

    /// Membership by rank: appending a member must not grow the row space.
    pub fn contains(&self, v: &[FieldElem]) -> bool {
        assert_eq!(v.len(), self.length(), "vector length does not match the code");
        let tower = self.ground.tower();
        let m = Matrix::from_rows(tower, FieldLevel::Top, self.length(), vec![v.to_vec()])
            .expect("vector has length n");
        self.generator.vstack(&m).rank() == self.dimension()
    }

    /// The code checked by this code's generator: generator and parity
    /// check swap roles. Applying this twice returns the same code with a
    /// canonical generator.
    pub fn dual(&self) -> SumRankCode {
        Self::new(self.ground.clone(), self.parity.clone())
            .expect("kernel basis rows are independent")
    }

    /// All codewords, message-major. State count is q^k.
    pub fn codewords(
        &self,
        guard: &ScaleGuard,
    ) -> Result<impl Iterator<Item = Vec<FieldElem>> + '_> {
        let t = self.ground.tower().clone();
        guard.admit(states(t.order(), self.dimension()))?;
        Ok(all_vectors(&t, self.dimension()).map(move |msg| self.generator.vec_mul(&msg)))
    }

    /// Least weight over the nonzero codewords, by full enumeration.
    pub fn min_distance_bruteforce(&self, guard: &ScaleGuard) -> Result<usize> {
        if self.dimension() == 0 {
            return Err(Error::ZeroCode);
        }
        let mut best = usize::MAX;
        for c in self.codewords(guard)? {
            if c.iter().all(|x| x.is_zero()) {
                continue;
            }
            best = best.min(srank(&self.ground, &c));
        }
        Ok(best)
    }

    /// Rank of the projection of the dual code onto `lam`, computed by
    /// projecting the parity rows and taking the rank of the stack.
    pub fn rho(&self, lam: &ProductElement) -> usize {
        let a = projection_matrix(&self.ground, lam);
        self.parity.mul(&a.transpose()).rank()
    }

    /// The same rank built the other way around: one row per lattice
    /// generator, holding that generator's products with every parity row.
    /// Kept separate from `rho` so the two derivations check each other.
    pub fn rho_alt(&self, lam: &ProductElement) -> usize {
        self.constraint_matrix(lam).rank()
    }

    /// Basis of the subspace of the dual code supported under the
    /// complement of `lam`, found in message space: y picks the dual word
    /// y * H, which lies in the subspace iff y annihilates the products of
    /// the parity rows with every generator of `lam`.
    pub fn c_of(&self, lam: &ProductElement) -> Matrix {
        let y = self.constraint_matrix(lam).kernel_basis();
        y.mul(&self.parity).row_basis()
    }

    /// The same subspace built from the other side: intersect the dual
    /// code with the space of vectors supported under the complement.
    pub fn c_of_by_intersection(&self, lam: &ProductElement) -> Matrix {
        let v = support_space(&self.ground, &lam.complement());
        row_space_intersection(&self.parity, &v)
    }

    /// Dimension of the subspace of the dual code supported under the
    /// complement of `lam`. Together with `rho` it accounts for the full
    /// redundancy: mu + rho = n - k.
    pub fn mu(&self, lam: &ProductElement) -> usize {
        self.c_of(lam).rows()
    }

    /// Dimension of the intersection of the code with the space of vectors
    /// supported under `lam`, by the dimension formula
    /// dim U + dim V - dim(U + V).
    pub fn intersection_dim(&self, lam: &ProductElement) -> usize {
        let v = support_space(&self.ground, lam);
        self.dimension() + v.rows() - self.generator.vstack(&v).rank()
    }

    /// Canonical basis of that intersection, for extracting witness
    /// codewords of a given support.
    pub fn intersection_basis(&self, lam: &ProductElement) -> Matrix {
        let v = support_space(&self.ground, lam);
        row_space_intersection(&self.generator, &v)
    }

    /// One row per generator of `lam`, one column per parity row; the
    /// (g, t) entry is the product of parity row t, restricted to the
    /// generator's block, with the generator itself.
    fn constraint_matrix(&self, lam: &ProductElement) -> Matrix {
        let ground = &self.ground;
        let t = ground.tower();
        let h = &self.parity;
        let mut rows = Vec::with_capacity(lam.rk());
        for i in 0..ground.block_count() {
            for g in lam.component(i).basis().row_vecs() {
                let row: Vec<FieldElem> = (0..h.rows())
                    .map(|r| dot(t, ground.block_slice(h.row(r), i), &g))
                    .collect();
                rows.push(row);
            }
        }
        Matrix::from_rows(t, FieldLevel::Top, h.rows(), rows)
            .expect("products are field elements")
    }
}

/// Every vector of F^len, in counting order with the last coordinate
/// moving fastest. Callers are responsible for guarding q^len.
pub(crate) fn all_vectors(
    tower: &Arc<FieldTower>,
    len: usize,
) -> impl Iterator<Item = Vec<FieldElem>> {
    VectorIter { tower: tower.clone(), idx: vec![0; len], done: false }
}

struct VectorIter {
    tower: Arc<FieldTower>,
    idx: Vec<u64>,
    done: bool,
}

impl Iterator for VectorIter {
    type Item = Vec<FieldElem>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = self.idx.iter().map(|&i| self.tower.element(i)).collect();
        let q = self.tower.order();
        let mut wrapped = true;
        for slot in self.idx.iter_mut().rev() {
            *slot += 1;
            if *slot < q {
                wrapped = false;
                break;
            }
            *slot = 0;
        }
        self.done = wrapped;
        Some(item)
    }
}

/// q^exp without overflow; saturates, which is always past any guard.
pub(crate) fn states(q: u64, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(q as u128);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> Arc<FieldTower> {
        FieldTower::new(2, 2, &[1, 1, 1], &[1]).unwrap()
    }

    fn gf4_two_blocks() -> Arc<FieldTower> {
        FieldTower::new(2, 2, &[1, 1, 1], &[1, 1]).unwrap()
    }

    fn gf4_hamming() -> Arc<FieldTower> {
        FieldTower::new(2, 2, &[1, 1, 1], &[2, 2, 2]).unwrap()
    }

    fn gf2_three_ones() -> Arc<FieldTower> {
        FieldTower::new(2, 1, &[0, 1], &[1, 1, 1]).unwrap()
    }

    fn vec_of(t: &Arc<FieldTower>, idx: &[u64]) -> Vec<FieldElem> {
        idx.iter().map(|&i| t.element(i)).collect()
    }

    #[test]
    fn single_block_weight_is_coordinate_matrix_rank() {
        let t = gf4();
        let ground = Ground::new(t.clone(), vec![2]).unwrap();
        let omega = t.element(2);
        // (1, w) expands to the identity, so its weight is 2.
        assert_eq!(srank(&ground, &[t.one(), omega]), 2);
        // (1, 1) has two equal columns.
        assert_eq!(srank(&ground, &[t.one(), t.one()]), 1);
        assert_eq!(srank(&ground, &[t.zero(), t.zero()]), 0);
        // (w, w+1) has independent expansions.
        assert_eq!(srank(&ground, &[omega, t.element(3)]), 2);
    }

    #[test]
    fn hamming_profile_weight_counts_nonzero_coordinates() {
        let t = gf4_hamming();
        let ground = Ground::new(t.clone(), vec![1, 1, 1]).unwrap();
        for v in all_vectors(&t, 3) {
            let hamming = v.iter().filter(|x| !x.is_zero()).count();
            assert_eq!(srank(&ground, &v), hamming);
        }
    }

    #[test]
    fn weight_is_a_metric_by_exhaustion() {
        let t = gf4();
        let ground = Ground::new(t.clone(), vec![2]).unwrap();
        let all: Vec<Vec<FieldElem>> = all_vectors(&t, 2).collect();
        for x in &all {
            for y in &all {
                let d = dist(&ground, x, y);
                assert_eq!(d == 0, x == y);
                assert_eq!(d, dist(&ground, y, x));
                for z in &all {
                    assert!(dist(&ground, x, z) <= d + dist(&ground, y, z));
                }
            }
        }
    }

    #[test]
    fn support_of_mixed_vector_is_full_then_zero() {
        let t = gf4_two_blocks();
        let ground = Ground::new(t.clone(), vec![2, 1]).unwrap();
        let v = vec![t.one(), t.element(2), t.zero()];
        let supp = support(&ground, &v);
        assert!(supp.component(0).is_full());
        assert!(supp.component(1).is_zero());
        assert_eq!(supp.rk(), srank(&ground, &v));
    }

    #[test]
    fn support_rank_equals_weight_everywhere() {
        let t = gf4_two_blocks();
        let ground = Ground::new(t.clone(), vec![2, 1]).unwrap();
        for v in all_vectors(&t, 3) {
            let supp = support(&ground, &v);
            assert_eq!(supp.rk(), srank(&ground, &v));
            // The support is the least lattice element carrying the vector.
            assert!(support_space(&ground, &supp).vstack(
                &Matrix::from_rows(&t, FieldLevel::Top, 3, vec![v.clone()]).unwrap()
            ).rank() == supp.rk());
        }
    }

    #[test]
    fn subcode_support_routes_agree() {
        let t = gf4_two_blocks();
        let ground = Ground::new(t.clone(), vec![2, 1]).unwrap();
        let guard = ScaleGuard::default();
        let bases = [
            vec![vec_of(&t, &[1, 2, 0])],
            vec![vec_of(&t, &[1, 0, 1]), vec_of(&t, &[0, 1, 2])],
            vec![vec_of(&t, &[1, 1, 1]), vec_of(&t, &[2, 2, 2])],
            vec![vec_of(&t, &[0, 0, 0])],
        ];
        for rows in bases {
            let m = Matrix::from_rows(&t, FieldLevel::Top, 3, rows).unwrap();
            let fast = support_of_subcode(&ground, &m);
            let slow = support_of_subcode_exhaustive(&ground, &m, &guard).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn support_is_invariant_under_nonzero_scaling() {
        // Scaling by a nonzero element acts on the coordinate rows by an
        // invertible subfield matrix, so the row space cannot move.
        let t = gf4_two_blocks();
        let ground = Ground::new(t.clone(), vec![2, 1]).unwrap();
        for v in all_vectors(&t, 3) {
            let s = support(&ground, &v);
            for a in t.elements() {
                if a.is_zero() {
                    continue;
                }
                let scaled: Vec<FieldElem> = v.iter().map(|&x| t.mul(a, x)).collect();
                assert_eq!(support(&ground, &scaled), s);
            }
        }
    }

    #[test]
    fn support_space_dimensions_and_filter_oracle_agree() {
        let t = gf4_two_blocks();
        let ground = Ground::new(t.clone(), vec![2, 1]).unwrap();
        let guard = ScaleGuard::default();
        for lam in ground.lattice_iter() {
            let fast = support_space(&ground, &lam);
            assert_eq!(fast.rows(), lam.rk());
            let slow = support_space_by_filter(&ground, &lam, &guard).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn support_space_of_diagonal_line() {
        let t = gf4();
        let ground = Ground::new(t.clone(), vec![2]).unwrap();
        let line = ProductElement::new(vec![Subspace::span(
            &t,
            0,
            2,
            &[vec![t.one(), t.one()]],
        )
        .unwrap()])
        .unwrap();
        let v = support_space(&ground, &line);
        assert_eq!(v.rows(), 1);
        assert_eq!(v.row(0), &[t.one(), t.one()]);
        // Every multiple of (1, 1) is supported on the line, including the
        // multiples by elements outside the subfield.
        for a in t.elements() {
            let w = vec![a, a];
            assert!(support(&ground, &w).leq(&line));
        }
    }

    #[test]
    fn projection_vanishes_exactly_under_the_complement() {
        let t = gf4();
        let ground = Ground::new(t.clone(), vec![2]).unwrap();
        for lam in ground.lattice_iter() {
            for x in all_vectors(&t, 2) {
                let image = project(&ground, &lam, &x);
                assert_eq!(image.len(), lam.rk());
                let vanishes = image.iter().all(|e| e.is_zero());
                assert_eq!(vanishes, support(&ground, &x).leq(&lam.complement()));
            }
        }
    }

    #[test]
    fn projection_onto_full_is_identity() {
        let t = gf4_two_blocks();
        let ground = Ground::new(t.clone(), vec![2, 1]).unwrap();
        let full = ProductElement::full(&ground);
        for x in all_vectors(&t, 3) {
            assert_eq!(project(&ground, &full, &x), x);
        }
    }

    #[test]
    fn code_construction_validates_shape_and_rank() {
        let t = gf4();
        let ground = Ground::new(t.clone(), vec![2]).unwrap();
        let wide = Matrix::from_rows(&t, FieldLevel::Top, 3, vec![vec_of(&t, &[1, 0, 0])]).unwrap();
        assert_eq!(
            SumRankCode::new(ground.clone(), wide).unwrap_err(),
            Error::GeneratorWidth { expected: 2, got: 3 }
        );
        let dependent = Matrix::from_rows(
            &t,
            FieldLevel::Top,
            2,
            vec![vec_of(&t, &[1, 2]), vec_of(&t, &[2, 3])],
        )
        .unwrap();
        assert_eq!(
            SumRankCode::new(ground.clone(), dependent).unwrap_err(),
            Error::RankDeficientGenerator
        );
        let code = SumRankCode::from_rows(ground, vec![vec_of(&t, &[1, 2])]).unwrap();
        assert_eq!(code.dimension(), 1);
        assert_eq!(code.redundancy(), 1);
        assert!(code.contains(&vec_of(&t, &[2, 3])));
        assert!(!code.contains(&vec_of(&t, &[1, 0])));
    }

    #[test]
    fn parity_annihilates_codewords_and_dual_is_involutive() {
        let t = gf4_two_blocks();
        let ground = Ground::new(t.clone(), vec![2, 1]).unwrap();
        let code = SumRankCode::from_rows(
            ground,
            vec![vec_of(&t, &[1, 0, 1]), vec_of(&t, &[0, 1, 2])],
        )
        .unwrap();
        let guard = ScaleGuard::default();
        for c in code.codewords(&guard).unwrap() {
            for r in 0..code.parity().rows() {
                assert!(dot(&t, code.parity().row(r), &c).is_zero());
            }
        }
        let double = code.dual().dual();
        assert!(double.generator().row_space_eq(code.generator()));
        assert_eq!(code.dual().dimension(), 1);
    }

    #[test]
    fn codeword_enumeration_counts_q_to_the_k() {
        let t = gf4();
        let ground = Ground::new(t.clone(), vec![2]).unwrap();
        let code = SumRankCode::from_rows(ground, vec![vec_of(&t, &[1, 2])]).unwrap();
        let words: Vec<_> = code.codewords(&ScaleGuard::default()).unwrap().collect();
        assert_eq!(words.len(), 4);
        let tight = ScaleGuard::new(3);
        assert_eq!(
            code.codewords(&tight).map(|_| ()).unwrap_err(),
            Error::ScaleExceeded { needed: 4, ceiling: 3 }
        );
    }

    #[test]
    fn minimum_distance_of_small_fixtures() {
        let guard = ScaleGuard::default();
        // Repetition code in the Hamming profile.
        let t2 = gf2_three_ones();
        let g2 = Ground::new(t2.clone(), vec![1, 1, 1]).unwrap();
        let rep = SumRankCode::from_rows(g2, vec![vec![t2.one(), t2.one(), t2.one()]]).unwrap();
        assert_eq!(rep.min_distance_bruteforce(&guard).unwrap(), 3);
        // A one-dimensional code of full weight in a single block.
        let t4 = gf4();
        let g4 = Ground::new(t4.clone(), vec![2]).unwrap();
        let mrd = SumRankCode::from_rows(g4.clone(), vec![vec_of(&t4, &[1, 2])]).unwrap();
        assert_eq!(mrd.min_distance_bruteforce(&guard).unwrap(), 2);
        // The zero code has no distance.
        let zero = SumRankCode::new(g4, Matrix::zeros(&t4, FieldLevel::Top, 0, 2)).unwrap();
        assert_eq!(zero.min_distance_bruteforce(&guard).unwrap_err(), Error::ZeroCode);
    }

    #[test]
    fn mu_plus_rho_accounts_for_the_redundancy() {
        let t = gf4_two_blocks();
        let ground = Ground::new(t.clone(), vec![2, 1]).unwrap();
        let codes = [
            SumRankCode::from_rows(ground.clone(), vec![vec_of(&t, &[1, 2, 1])]).unwrap(),
            SumRankCode::from_rows(
                ground.clone(),
                vec![vec_of(&t, &[1, 0, 1]), vec_of(&t, &[0, 1, 2])],
            )
            .unwrap(),
            SumRankCode::new(ground.clone(), Matrix::zeros(&t, FieldLevel::Top, 0, 3)).unwrap(),
            SumRankCode::new(ground.clone(), Matrix::identity(&t, FieldLevel::Top, 3)).unwrap(),
        ];
        for code in &codes {
            for lam in ground.lattice_iter() {
                let rho = code.rho(&lam);
                assert_eq!(rho, code.rho_alt(&lam));
                assert_eq!(code.mu(&lam) + rho, code.redundancy());
            }
            assert_eq!(code.rho(&ProductElement::zero(&ground)), 0);
            assert_eq!(code.rho(&ProductElement::full(&ground)), code.redundancy());
        }
    }

    #[test]
    fn dual_support_subspace_routes_agree() {
        let t = gf4_two_blocks();
        let ground = Ground::new(t.clone(), vec![2, 1]).unwrap();
        let code = SumRankCode::from_rows(
            ground.clone(),
            vec![vec_of(&t, &[1, 2, 2])],
        )
        .unwrap();
        for lam in ground.lattice_iter() {
            let by_constraints = code.c_of(&lam);
            let by_intersection = code.c_of_by_intersection(&lam);
            assert_eq!(by_constraints, by_intersection);
            // Every basis row is a dual word supported under the complement.
            for r in 0..by_constraints.rows() {
                let row = by_constraints.row(r).to_vec();
                assert!(code.dual().contains(&row));
                assert!(support(&ground, &row).leq(&lam.complement()));
            }
        }
        // At the bottom the subspace is the whole dual code; at the top it
        // is zero.
        let bottom = ProductElement::zero(&ground);
        assert!(code.c_of(&bottom).row_space_eq(code.parity()));
        assert_eq!(code.c_of(&ProductElement::full(&ground)).rows(), 0);
    }

    #[test]
    fn intersection_dimension_matches_codeword_filter() {
        let t = gf4_two_blocks();
        let ground = Ground::new(t.clone(), vec![2, 1]).unwrap();
        let code = SumRankCode::from_rows(
            ground.clone(),
            vec![vec_of(&t, &[1, 0, 1]), vec_of(&t, &[0, 1, 2])],
        )
        .unwrap();
        let guard = ScaleGuard::default();
        for lam in ground.lattice_iter() {
            let by_formula = code.intersection_dim(&lam);
            let basis = code.intersection_basis(&lam);
            assert_eq!(by_formula, basis.rows());
            let count = code
                .codewords(&guard)
                .unwrap()
                .filter(|c| support(&ground, c).leq(&lam))
                .count();
            assert_eq!(count as u128, states(t.order(), by_formula));
        }
    }

    #[test]
    fn weights_and_supports_ignore_the_expansion_basis_choice() {
        use crate::tower::BasisOrder;
        let up = FieldTower::new(2, 2, &[1, 1, 1], &[1, 1]).unwrap();
        let down =
            FieldTower::with_basis_order(2, 2, &[1, 1, 1], &[1, 1], BasisOrder::Descending)
                .unwrap();
        let ground_up = Ground::new(up.clone(), vec![2, 1]).unwrap();
        let ground_down = Ground::new(down.clone(), vec![2, 1]).unwrap();
        for v in all_vectors(&up, 3) {
            assert_eq!(srank(&ground_up, &v), srank(&ground_down, &v));
            assert_eq!(support(&ground_up, &v), support(&ground_down, &v));
        }
    }
}
