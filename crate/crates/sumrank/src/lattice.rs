//! The product lattice of per-block subspaces.
//!
//! For a ground space K^n = K_1^{n_1} × ⋯ × K_ℓ^{n_ℓ}, a lattice element is
//! a tuple Λ = (Λ_1, …, Λ_ℓ) with Λ_i a K_i-subspace of K_i^{n_i}. Meet,
//! join, and complement act componentwise (intersection, sum, and the
//! orthogonal space under the standard dot product), and the rank
//! Rk(Λ) = Σ dim Λ_i. Subspaces are stored as reduced row echelon bases, so
//! structural equality is equality of subspaces.
//!
//! Enumeration is deterministic everywhere: subspaces of fixed dimension
//! stream in pivot-pattern order then free-entry order, whole lattices as
//! the blockwise product with the last block varying fastest, and rank
//! levels by lexicographic compositions of the level.

use std::sync::Arc;

use crate::error::{Error, Result, ScaleGuard};
use crate::matrix::{FieldLevel, Matrix};
use crate::tower::{FieldElem, FieldTower};

/// A tower together with a block profile (n_1, …, n_ℓ): the ambient ground
/// space that codes, lattices, and matroids share.
#[derive(Debug, Clone)]
pub struct Ground {
    tower: Arc<FieldTower>,
    profile: Vec<usize>,
}

impl PartialEq for Ground {
    fn eq(&self, other: &Self) -> bool {
        *self.tower == *other.tower && self.profile == other.profile
    }
}

impl Eq for Ground {}

impl Ground {
    pub fn new(tower: Arc<FieldTower>, profile: Vec<usize>) -> Result<Self> {
        if profile.len() != tower.block_count() {
            return Err(Error::ProfileMismatch {
                profile: profile.len(),
                blocks: tower.block_count(),
            });
        }
        if profile.iter().any(|&n| n == 0) {
            return Err(Error::EmptyBlock);
        }
        Ok(Ground { tower, profile })
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn profile(&self) -> &[usize] {
        &self.profile
    }

    /// ℓ.
    pub fn block_count(&self) -> usize {
        self.profile.len()
    }

    /// n_i.
    pub fn block_len(&self, block: usize) -> usize {
        self.profile[block]
    }

    /// n = Σ n_i.
    pub fn n(&self) -> usize {
        self.profile.iter().sum()
    }

    /// Offset of block i inside a length-n vector.
    pub fn block_start(&self, block: usize) -> usize {
        self.profile[..block].iter().sum()
    }

    pub fn block_slice<'a>(&self, v: &'a [FieldElem], block: usize) -> &'a [FieldElem] {
        let s = self.block_start(block);
        &v[s..s + self.profile[block]]
    }

    pub fn span(&self, block: usize, vectors: &[Vec<FieldElem>]) -> Result<Subspace> {
        Subspace::span(&self.tower, block, self.block_len(block), vectors)
    }

    /// Number of elements of the whole lattice, saturating on overflow.
    pub fn lattice_size(&self) -> u128 {
        let mut total: u128 = 1;
        for (i, &n) in self.profile.iter().enumerate() {
            let q = self.tower.subfield_order(i);
            let mut block_total: u128 = 0;
            for d in 0..=n {
                block_total = block_total
                    .saturating_add(gaussian_binomial(n, d, q).unwrap_or(u128::MAX));
            }
            total = total.saturating_mul(block_total);
        }
        total
    }

    /// All d-dimensional subspaces of block i, streamed in pivot-pattern
    /// then free-entry order.
    pub fn subspaces(
        &self,
        block: usize,
        dim: usize,
    ) -> Result<impl Iterator<Item = Subspace>> {
        let n = self.block_len(block);
        if dim > n {
            return Err(Error::DimensionOutOfRange { dim, ambient: n });
        }
        Ok(enumerate_subspaces(self.tower.clone(), block, n, dim))
    }

    /// All subspaces of block i, dimensions ascending.
    pub fn block_lattice(&self, block: usize) -> impl Iterator<Item = Subspace> {
        let tower = self.tower.clone();
        let n = self.block_len(block);
        (0..=n).flat_map(move |d| enumerate_subspaces(tower.clone(), block, n, d))
    }

    /// The whole product lattice, lazily, last block varying fastest.
    pub fn lattice_iter(&self) -> impl Iterator<Item = ProductElement> {
        let lists: Vec<Vec<Subspace>> =
            (0..self.block_count()).map(|i| self.block_lattice(i).collect()).collect();
        ProductIter::new(lists)
    }

    /// Materializes the lattice after checking it against the guard.
    pub fn lattice_elements(&self, guard: ScaleGuard) -> Result<Vec<ProductElement>> {
        guard.admit(self.lattice_size())?;
        Ok(self.lattice_iter().collect())
    }

    /// Lattice elements of rank exactly `level`: compositions of the level
    /// across blocks in lexicographic order, then the blockwise product.
    pub fn rank_level_iter(&self, level: usize) -> impl Iterator<Item = ProductElement> {
        let ground = self.clone();
        bounded_compositions(level, &self.profile).into_iter().flat_map(move |comp| {
            let lists: Vec<Vec<Subspace>> = comp
                .iter()
                .enumerate()
                .map(|(i, &d)| ground.subspaces(i, d).expect("composition respects bounds").collect())
                .collect();
            ProductIter::new(lists)
        })
    }
}

/// A K_i-subspace of K_i^{n_i}, held as its unique reduced-echelon basis
/// with no zero rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    block: usize,
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    /// Spans the given vectors; entries must lie in K_i.
    pub fn span(
        tower: &Arc<FieldTower>,
        block: usize,
        ambient: usize,
        vectors: &[Vec<FieldElem>],
    ) -> Result<Self> {
        if block >= tower.block_count() {
            return Err(Error::BlockOutOfRange(block, tower.block_count()));
        }
        let m = Matrix::from_rows(tower, FieldLevel::Sub(block), ambient, vectors.to_vec())?;
        let red = m.rref();
        Ok(Self::from_reduced(block, ambient, red.matrix, red.rank))
    }

    /// Wraps an already-reduced basis, dropping trailing zero rows.
    fn from_reduced(block: usize, ambient: usize, reduced: Matrix, rank: usize) -> Self {
        let rows = (0..rank).map(|r| reduced.row(r).to_vec()).collect();
        let basis = Matrix::from_rows(reduced.tower(), FieldLevel::Sub(block), ambient, rows)
            .expect("reduced rows are valid");
        Subspace { block, ambient, basis }
    }

    /// Wraps a matrix that is already a canonical reduced basis.
    pub(crate) fn from_canonical(block: usize, ambient: usize, basis: Matrix) -> Self {
        debug_assert_eq!(basis.rref().matrix, basis);
        Subspace { block, ambient, basis }
    }

    pub fn zero(tower: &Arc<FieldTower>, block: usize, ambient: usize) -> Self {
        let basis = Matrix::zeros(tower, FieldLevel::Sub(block), 0, ambient);
        Subspace { block, ambient, basis }
    }

    pub fn full(tower: &Arc<FieldTower>, block: usize, ambient: usize) -> Self {
        let basis = Matrix::identity(tower, FieldLevel::Sub(block), ambient);
        Subspace { block, ambient, basis }
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical generator matrix, one basis vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn contains_vector(&self, v: &[FieldElem]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let m = Matrix::from_rows(self.basis.tower(), FieldLevel::Sub(self.block), self.ambient, vec![v.to_vec()])
            .expect("vector entries must lie in the block subfield");
        self.basis.vstack(&m).rank() == self.dim()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.check_compatible(other);
        self.basis.vstack(&other.basis).rank() == self.dim()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        self.check_compatible(other);
        let stacked = self.basis.vstack(&other.basis);
        let red = stacked.rref();
        Self::from_reduced(self.block, self.ambient, red.matrix, red.rank)
    }

    /// Orthogonal space under the standard dot product. The form is
    /// non-degenerate, so dimensions are complementary and the double
    /// orthogonal returns the original space.
    pub fn orth(&self) -> Subspace {
        let kernel = self.basis.kernel_basis();
        let rank = kernel.rows();
        Self::from_reduced(self.block, self.ambient, kernel, rank)
    }

    /// Computed as the orthogonal of the sum of orthogonals, which reduces
    /// intersection to the two primitives above.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        self.check_compatible(other);
        self.orth().sum(&other.orth()).orth()
    }

    /// All member vectors, zero included. |K_i|^dim of them.
    pub fn members(&self) -> Vec<Vec<FieldElem>> {
        let tower = self.basis.tower();
        let scalars = tower.subfield_elements(self.block).to_vec();
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.dim()];
        loop {
            let mut v = vec![tower.zero(); self.ambient];
            for (r, &i) in idx.iter().enumerate() {
                let s = scalars[i];
                for c in 0..self.ambient {
                    v[c] = tower.add(v[c], tower.mul(s, self.basis.at(r, c)));
                }
            }
            out.push(v);
            if !advance(&mut idx, scalars.len()) {
                break;
            }
        }
        out
    }

    fn check_compatible(&self, other: &Subspace) {
        assert_eq!(self.block, other.block, "subspaces from different blocks");
        assert_eq!(self.ambient, other.ambient, "ambient dimensions differ");
    }
}

/// An element of the product lattice: one subspace per block, in block
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductElement {
    components: Vec<Subspace>,
}

impl ProductElement {
    pub fn new(components: Vec<Subspace>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::NoBlocks);
        }
        for (i, c) in components.iter().enumerate() {
            if c.block() != i {
                return Err(Error::BlockOutOfRange(c.block(), components.len()));
            }
        }
        Ok(ProductElement { components })
    }

    pub fn zero(ground: &Ground) -> Self {
        let components = (0..ground.block_count())
            .map(|i| Subspace::zero(ground.tower(), i, ground.block_len(i)))
            .collect();
        ProductElement { components }
    }

    pub fn full(ground: &Ground) -> Self {
        let components = (0..ground.block_count())
            .map(|i| Subspace::full(ground.tower(), i, ground.block_len(i)))
            .collect();
        ProductElement { components }
    }

    pub fn block_count(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &Subspace {
        &self.components[i]
    }

    pub fn components(&self) -> &[Subspace] {
        &self.components
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.dim()).collect()
    }

    /// Rk(Λ) = Σ dim Λ_i.
    pub fn rk(&self) -> usize {
        self.components.iter().map(|c| c.dim()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn is_full(&self) -> bool {
        self.components.iter().all(|c| c.is_full())
    }

    /// Componentwise sum; the least upper bound.
    pub fn join(&self, other: &ProductElement) -> ProductElement {
        self.zip(other, Subspace::sum)
    }

    /// Componentwise intersection; the greatest lower bound.
    pub fn meet(&self, other: &ProductElement) -> ProductElement {
        self.zip(other, Subspace::intersect)
    }

    /// Componentwise orthogonal complement.
    pub fn complement(&self) -> ProductElement {
        ProductElement { components: self.components.iter().map(Subspace::orth).collect() }
    }

    /// Componentwise inclusion; the lattice order.
    pub fn leq(&self, other: &ProductElement) -> bool {
        assert_eq!(self.components.len(), other.components.len(), "block counts differ");
        self.components.iter().zip(&other.components).all(|(a, b)| b.contains(a))
    }

    /// True when the componentwise intersections are all zero.
    pub fn direct_sum_ok(&self, other: &ProductElement) -> bool {
        assert_eq!(self.components.len(), other.components.len(), "block counts differ");
        self.components.iter().zip(&other.components).all(|(a, b)| a.intersect(b).is_zero())
    }

    /// Stable text encoding: basis entries by enumeration index, rows
    /// separated by '|', blocks by ';'. Suitable as a map key and for
    /// pinning in golden files.
    pub fn canonical_key(&self) -> String {
        let mut out = String::new();
        for (i, comp) in self.components.iter().enumerate() {
            if i > 0 {
                out.push(';');
            }
            for r in 0..comp.dim() {
                if r > 0 {
                    out.push('|');
                }
                for c in 0..comp.ambient_dim() {
                    if c > 0 {
                        out.push(',');
                    }
                    out.push_str(&comp.basis().at(r, c).index().to_string());
                }
            }
        }
        out
    }

    fn zip(&self, other: &ProductElement, f: impl Fn(&Subspace, &Subspace) -> Subspace) -> Self {
        assert_eq!(self.components.len(), other.components.len(), "block counts differ");
        ProductElement {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

/// Gaussian binomial coefficient: the number of k-dimensional subspaces of
/// an n-dimensional space over GF(q), via the telescoping product
/// [n k]_q = Π_{j=1..k} (q^{n-j+1} - 1) / (q^j - 1), which stays integral
/// at every step.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> Result<u128> {
    if k > n {
        return Err(Error::OutOfRange(format!("subspace dimension {k} exceeds ambient {n}")));
    }
    if !is_prime_power(q) {
        return Err(Error::OutOfRange(format!("{q} is not a prime power")));
    }
    let q = q as u128;
    let mut r: u128 = 1;
    let overflow = || Error::OutOfRange("gaussian binomial overflows".into());
    for j in 1..=k {
        let num = q.checked_pow((n - j + 1) as u32).ok_or_else(overflow)? - 1;
        let den = q.checked_pow(j as u32).ok_or_else(overflow)? - 1;
        r = r.checked_mul(num).ok_or_else(overflow)?;
        debug_assert_eq!(r % den, 0);
        r /= den;
    }
    Ok(r)
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            while rest % p == 0 {
                rest /= p;
            }
            return rest == 1;
        }
        p += 1;
    }
    true // q itself is prime
}

/// All (c_1, …, c_ℓ) with 0 ≤ c_i ≤ bounds[i] and Σ c_i = total, in
/// lexicographic order.
pub(crate) fn bounded_compositions(total: usize, bounds: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(bounds.len());
    fn rec(total: usize, bounds: &[usize], prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if bounds.is_empty() {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let tail: usize = bounds[1..].iter().sum();
        let lo = total.saturating_sub(tail);
        let hi = bounds[0].min(total);
        for v in lo..=hi {
            prefix.push(v);
            rec(total - v, &bounds[1..], prefix, out);
            prefix.pop();
        }
    }
    rec(total, bounds, &mut prefix, &mut out);
    out
}

/// Streams the canonical reduced bases of all d-dimensional subspaces of
/// K_i^{n}: pivot patterns in lexicographic order, free entries as an
/// odometer over K_i in enumeration order.
fn enumerate_subspaces(
    tower: Arc<FieldTower>,
    block: usize,
    n: usize,
    d: usize,
) -> impl Iterator<Item = Subspace> {
    let scalars = tower.subfield_elements(block).to_vec();
    combinations(n, d).into_iter().flat_map(move |pattern| {
        FreeEntryIter::new(tower.clone(), block, n, pattern, scalars.clone())
    })
}

/// All size-k subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let remaining = k - cur.len();
        for v in start..=n.saturating_sub(remaining) {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut cur, &mut out);
    }
    out
}

struct FreeEntryIter {
    tower: Arc<FieldTower>,
    block: usize,
    n: usize,
    pattern: Vec<usize>,
    /// Row-major free positions: entries right of the row's pivot that are
    /// not pivot columns of other rows.
    free: Vec<(usize, usize)>,
    scalars: Vec<FieldElem>,
    digits: Vec<usize>,
    done: bool,
}

impl FreeEntryIter {
    fn new(
        tower: Arc<FieldTower>,
        block: usize,
        n: usize,
        pattern: Vec<usize>,
        scalars: Vec<FieldElem>,
    ) -> Self {
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; n];
            for &c in &pattern {
                v[c] = true;
            }
            v
        };
        let mut free = Vec::new();
        for (r, &p) in pattern.iter().enumerate() {
            for c in p + 1..n {
                if !is_pivot[c] {
                    free.push((r, c));
                }
            }
        }
        let digits = vec![0usize; free.len()];
        FreeEntryIter { tower, block, n, pattern, free, scalars, digits, done: false }
    }
}

impl Iterator for FreeEntryIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let d = self.pattern.len();
        let mut rows: Vec<Vec<FieldElem>> = vec![vec![self.tower.zero(); self.n]; d];
        for (r, &p) in self.pattern.iter().enumerate() {
            rows[r][p] = self.tower.one();
        }
        for (slot, &(r, c)) in self.free.iter().enumerate() {
            rows[r][c] = self.scalars[self.digits[slot]];
        }
        let basis = Matrix::from_rows(&self.tower, FieldLevel::Sub(self.block), self.n, rows)
            .expect("pattern rows are valid");
        self.done = !advance(&mut self.digits, self.scalars.len());
        Some(Subspace::from_canonical(self.block, self.n, basis))
    }
}

/// Odometer increment, last digit fastest; false when the odometer wraps.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Cartesian product of per-block subspace lists, last block fastest.
struct ProductIter {
    lists: Vec<Vec<Subspace>>,
    idx: Vec<usize>,
    done: bool,
}

impl ProductIter {
    fn new(lists: Vec<Vec<Subspace>>) -> Self {
        let done = lists.iter().any(|l| l.is_empty());
        let idx = vec![0; lists.len()];
        ProductIter { lists, idx, done }
    }
}

impl Iterator for ProductIter {
    type Item = ProductElement;

    fn next(&mut self) -> Option<ProductElement> {
        if self.done {
            return None;
        }
        let components: Vec<Subspace> = self
            .lists
            .iter()
            .zip(&self.idx)
            .map(|(list, &i)| list[i].clone())
            .collect();
        let mut wrapped = true;
        for i in (0..self.lists.len()).rev() {
            self.idx[i] += 1;
            if self.idx[i] < self.lists[i].len() {
                wrapped = false;
                break;
            }
            self.idx[i] = 0;
        }
        self.done = wrapped;
        Some(ProductElement { components })
    }
}
