//! Finite field towers GF(p) ⊆ K_i ⊆ F with per-block coordinate expansion.
//!
//! The top field F = GF(p^M) is realized as GF(p)[x] modulo a caller-supplied
//! monic irreducible polynomial of degree M, validated exhaustively by trial
//! division. Each block i designates a subfield K_i = GF(p^{d_i}) with
//! d_i | M, realized inside F as the fixed points of the Frobenius power
//! x ↦ x^(p^{d_i}). A relative basis Γ_i of F over K_i (m_i = M/d_i
//! elements) is chosen by a deterministic greedy scan of F in enumeration
//! order, and `expand` writes any element of F as its K_i-coordinate vector
//! with respect to Γ_i. The ascending scan always picks 1 first.
//!
//! Elements are handles into tables owned by the tower, so all arithmetic
//! goes through [`FieldTower`] methods. The tables cap the field size; the
//! cap is generous for the exhaustive computations this crate targets.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matrix::{FieldLevel, Matrix};

/// Largest supported |F| = p^M.
pub const MAX_FIELD_SIZE: u64 = 1024;

/// Element of the top field F, encoded as the integer whose base-p digits
/// (constant term least significant) are the power-basis coefficients. The
/// encoding doubles as the canonical enumeration order on F, which makes
/// GF(p) the initial segment 0..p and puts 1 right after 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(u16);

impl FieldElem {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Direction of the greedy scan that picks each relative basis Γ_i. Both
/// choices are deterministic; `Descending` exists so results can be checked
/// for independence from the basis choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisOrder {
    #[default]
    Ascending,
    Descending,
}

#[derive(Debug, Clone)]
struct Block {
    /// d_i, the degree of K_i over GF(p).
    degree: usize,
    /// m_i = M / d_i, the degree of F over K_i.
    rel_degree: usize,
    /// All elements of K_i in enumeration order.
    elements: Vec<FieldElem>,
    /// Membership mask indexed by element encoding.
    mask: Vec<bool>,
    /// Relative basis Γ_i, K_i-linearly independent.
    basis: Vec<FieldElem>,
    /// Flat q × m_i table: expansion of every element of F over Γ_i.
    expand: Vec<FieldElem>,
}

/// The tower F = GF(p^M) together with its designated subfields, one per
/// block. All per-element data is tabulated at construction.
#[derive(Debug)]
pub struct FieldTower {
    p: u64,
    degree: usize,
    modulus: Vec<u64>,
    basis_order: BasisOrder,
    q: usize,
    add_table: Vec<u16>,
    mul_table: Vec<u16>,
    neg_table: Vec<u16>,
    inv_table: Vec<u16>,
    blocks: Vec<Block>,
}

/// Towers agree when they present the same field with the same block
/// degrees; the basis order is deliberately ignored because every quantity
/// exposed downstream is invariant under the choice of Γ_i.
impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.modulus == other.modulus
            && self.subfield_degrees() == other.subfield_degrees()
    }
}

impl Eq for FieldTower {}

impl FieldTower {
    /// Builds the tower for GF(p)[x]/(modulus) with one subfield per entry
    /// of `degrees`. The modulus is given low degree first and must be monic
    /// of degree `m`; irreducibility is checked by exhaustive trial division.
    pub fn new(p: u64, m: usize, modulus: &[u64], degrees: &[usize]) -> Result<Arc<Self>> {
        Self::with_basis_order(p, m, modulus, degrees, BasisOrder::Ascending)
    }

    pub fn with_basis_order(
        p: u64,
        m: usize,
        modulus: &[u64],
        degrees: &[usize],
        basis_order: BasisOrder,
    ) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 || modulus.len() != m + 1 || modulus[m] != 1 {
            return Err(Error::InvalidModulus { expected: m, got: modulus.to_vec() });
        }
        for &c in modulus {
            if c >= p {
                return Err(Error::CoefficientOutOfRange(c, p));
            }
        }
        let q128 = (p as u128).pow(m as u32);
        if q128 > MAX_FIELD_SIZE as u128 {
            return Err(Error::FieldTooLarge(q128, MAX_FIELD_SIZE));
        }
        if let Some(d) = irreducible_factor_degree(p, modulus) {
            return Err(Error::ReducibleModulus(d));
        }
        if degrees.is_empty() {
            return Err(Error::NoBlocks);
        }
        for &d in degrees {
            if d == 0 || m % d != 0 {
                return Err(Error::DegreeDoesNotDivide { degree: d, extension: m });
            }
        }

        let q = q128 as usize;
        let mut tower = FieldTower {
            p,
            degree: m,
            modulus: modulus.to_vec(),
            basis_order,
            q,
            add_table: Vec::new(),
            mul_table: Vec::new(),
            neg_table: Vec::new(),
            inv_table: Vec::new(),
            blocks: Vec::new(),
        };
        tower.build_tables();
        for &d in degrees {
            let block = tower.build_block(d);
            tower.blocks.push(block);
        }
        Ok(Arc::new(tower))
    }

    fn build_tables(&mut self) {
        let (p, q, m) = (self.p, self.q, self.degree);
        self.add_table = vec![0; q * q];
        self.mul_table = vec![0; q * q];
        self.neg_table = vec![0; q];
        self.inv_table = vec![0; q];
        for a in 0..q {
            let da = digits(a, p, m);
            let mut neg = vec![0u64; m];
            for j in 0..m {
                neg[j] = (p - da[j]) % p;
            }
            self.neg_table[a] = undigits(&neg, p) as u16;
            for b in a..q {
                let db = digits(b, p, m);
                let mut sum = vec![0u64; m];
                for j in 0..m {
                    sum[j] = (da[j] + db[j]) % p;
                }
                let s = undigits(&sum, p) as u16;
                self.add_table[a * q + b] = s;
                self.add_table[b * q + a] = s;

                let prod = poly_mul_reduce(&da, &db, &self.modulus, p);
                let pr = undigits(&prod, p) as u16;
                self.mul_table[a * q + b] = pr;
                self.mul_table[b * q + a] = pr;
            }
        }
        for a in 1..q {
            let row = &self.mul_table[a * q..(a + 1) * q];
            let b = row.iter().position(|&v| v == 1).expect("unit has no inverse");
            self.inv_table[a] = b as u16;
        }
    }

    fn build_block(&self, d: usize) -> Block {
        let q = self.q;
        let m = self.degree;
        let rel_degree = m / d;

        // K_i is exactly the fixed field of x ↦ x^(p^d).
        let frob_exp = (self.p as u128).pow(d as u32);
        let mut elements = Vec::new();
        let mut mask = vec![false; q];
        for a in 0..q {
            let x = FieldElem(a as u16);
            if self.pow(x, frob_exp) == x {
                elements.push(x);
                mask[a] = true;
            }
        }
        assert_eq!(
            elements.len() as u128,
            (self.p as u128).pow(d as u32),
            "fixed field of the Frobenius power has the wrong size"
        );

        // A GF(p)-basis of K_i, needed to turn K_i-independence questions
        // into GF(p) linear algebra.
        let mut prime_basis = Vec::new();
        let mut echelon = Echelon::new(self.p);
        for &x in &elements {
            if echelon.insert(digits(x.index(), self.p, m)) {
                prime_basis.push(x);
                if prime_basis.len() == d {
                    break;
                }
            }
        }
        assert_eq!(prime_basis.len(), d);

        // Greedy scan of F keeping elements that enlarge the K_i-span. The
        // span's GF(p)-dimension grows by exactly d per kept element, so
        // tracking it in one echelon form decides K_i-independence.
        let mut basis = Vec::new();
        let mut span = Echelon::new(self.p);
        let order: Vec<usize> = match self.basis_order {
            BasisOrder::Ascending => (0..q).collect(),
            BasisOrder::Descending => (0..q).rev().collect(),
        };
        for a in order {
            if basis.len() == rel_degree {
                break;
            }
            let x = FieldElem(a as u16);
            let mut trial = span.clone();
            let mut grew = 0;
            for &b in &prime_basis {
                if trial.insert(digits(self.mul(b, x).index(), self.p, m)) {
                    grew += 1;
                }
            }
            if grew == d {
                span = trial;
                basis.push(x);
            } else {
                assert_eq!(grew, 0, "K-span must grow by 0 or d");
            }
        }
        assert_eq!(basis.len(), rel_degree, "relative basis scan fell short");

        // Expansion solver: the products b_s γ_j form a GF(p)-basis of F, so
        // one matrix inverse turns power-basis coefficients into Γ_i
        // coordinates.
        let mut cols = Vec::with_capacity(m);
        for &g in &basis {
            for &b in &prime_basis {
                cols.push(digits(self.mul(b, g).index(), self.p, m));
            }
        }
        let inv = invert_gfp(&cols, self.p, m).expect("basis products must span F");

        let mut expand = Vec::with_capacity(q * rel_degree);
        for a in 0..q {
            let x = FieldElem(a as u16);
            let coeffs = digits(a, self.p, m);
            let mut check = self.zero();
            for j in 0..rel_degree {
                let mut lambda = self.zero();
                for s in 0..d {
                    let mut mu = 0u64;
                    for r in 0..m {
                        mu = (mu + inv[j * d + s][r] * coeffs[r]) % self.p;
                    }
                    lambda = self.add(lambda, self.mul(FieldElem(mu as u16), prime_basis[s]));
                }
                assert!(mask[lambda.index()], "expansion coordinate left the subfield");
                check = self.add(check, self.mul(lambda, basis[j]));
                expand.push(lambda);
            }
            assert_eq!(check, x, "expansion must recompose to the element");
        }

        Block { degree: d, rel_degree, elements, mask, basis, expand }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// M, the degree of F over GF(p).
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// |F| = p^M.
    pub fn order(&self) -> u64 {
        self.q as u64
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn basis_order(&self) -> BasisOrder {
        self.basis_order
    }

    /// ℓ, the number of blocks.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn subfield_degrees(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.degree).collect()
    }

    /// d_i, the degree of K_i over GF(p).
    pub fn subfield_degree(&self, block: usize) -> usize {
        self.blocks[block].degree
    }

    /// |K_i| = p^{d_i}.
    pub fn subfield_order(&self, block: usize) -> u64 {
        self.blocks[block].elements.len() as u64
    }

    /// m_i = M / d_i, the degree of F over K_i.
    pub fn relative_degree(&self, block: usize) -> usize {
        self.blocks[block].rel_degree
    }

    /// Γ_i in its construction order; Γ_i[0] = 1.
    pub fn relative_basis(&self, block: usize) -> &[FieldElem] {
        &self.blocks[block].basis
    }

    /// All of K_i in enumeration order.
    pub fn subfield_elements(&self, block: usize) -> &[FieldElem] {
        &self.blocks[block].elements
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// The element with the given enumeration index.
    pub fn element(&self, index: u64) -> FieldElem {
        assert!((index as usize) < self.q, "element index out of range");
        FieldElem(index as u16)
    }

    /// All of F in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q as u16).map(FieldElem)
    }

    /// Reads a power-basis coefficient vector, low degree first.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() != self.degree {
            return Err(Error::VectorLength { expected: self.degree, got: coeffs.len() });
        }
        for &c in coeffs {
            if c >= self.p {
                return Err(Error::CoefficientOutOfRange(c, self.p));
            }
        }
        Ok(FieldElem(undigits(coeffs, self.p) as u16))
    }

    /// Power-basis coefficients, low degree first.
    pub fn coeffs(&self, x: FieldElem) -> Vec<u64> {
        digits(x.index(), self.p, self.degree)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.add_table[a.index() * self.q + b.index()])
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg_table[a.index()])
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.mul_table[a.index() * self.q + b.index()])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::ZeroInversion);
        }
        Ok(FieldElem(self.inv_table[a.index()]))
    }

    pub fn pow(&self, a: FieldElem, mut e: u128) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// x ↦ x^(p^d), the d-fold Frobenius.
    pub fn frobenius_power(&self, a: FieldElem, d: usize) -> FieldElem {
        self.pow(a, (self.p as u128).pow(d as u32))
    }

    pub fn is_in_subfield(&self, x: FieldElem, block: usize) -> bool {
        self.blocks[block].mask[x.index()]
    }

    /// K_i-coordinates of x with respect to Γ_i; entries lie in K_i.
    pub fn expand(&self, x: FieldElem, block: usize) -> &[FieldElem] {
        let m = self.blocks[block].rel_degree;
        &self.blocks[block].expand[x.index() * m..(x.index() + 1) * m]
    }

    /// The m_i × n coordinate matrix of a block vector: column j is the
    /// expansion of v[j] over Γ_i.
    pub fn coordinate_matrix(self: &Arc<Self>, block: usize, v: &[FieldElem]) -> Matrix {
        let m = self.relative_degree(block);
        let mut entries = Vec::with_capacity(m * v.len());
        for r in 0..m {
            for &x in v {
                entries.push(self.expand(x, block)[r]);
            }
        }
        Matrix::new_unchecked(self.clone(), FieldLevel::Sub(block), m, v.len(), entries)
    }
}

/// The enumeration-least monic irreducible of degree m over GF(p), low
/// degree first. Deterministic, so it doubles as a canonical modulus for
/// callers that do not care which realization of GF(p^m) they get.
pub fn default_modulus(p: u64, m: usize) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 || (p as u128).pow(m as u32) > MAX_FIELD_SIZE as u128 {
        return Err(Error::OutOfRange(format!("no supported modulus of degree {m} over GF({p})")));
    }
    let count = (p as u128).pow(m as u32) as usize;
    for idx in 0..count {
        let mut cand = digits(idx, p, m);
        cand.push(1);
        if irreducible_factor_degree(p, &cand).is_none() {
            return Ok(cand);
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Degree of some monic factor with 1 ≤ deg ≤ deg(f)/2, or None when f is
/// irreducible. Trial division over all candidate divisors.
fn irreducible_factor_degree(p: u64, f: &[u64]) -> Option<usize> {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u128).pow(d as u32) as usize;
        for idx in 0..count {
            let mut g = digits(idx, p, d);
            g.push(1);
            if poly_rem_is_zero(f, &g, p) {
                return Some(d);
            }
        }
    }
    None
}

fn poly_rem_is_zero(f: &[u64], g: &[u64], p: u64) -> bool {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = r[r.len() - 1];
        if lead != 0 {
            let shift = r.len() - 1 - dg;
            for j in 0..=dg {
                r[shift + j] = (r[shift + j] + p - lead * g[j] % p) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

fn poly_mul_reduce(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // Reduce x^t ≡ -(lower part of modulus) · x^(t-m) from the top down.
    for t in (m..prod.len()).rev() {
        let c = prod[t];
        if c == 0 {
            continue;
        }
        prod[t] = 0;
        for j in 0..m {
            let idx = t - m + j;
            prod[idx] = (prod[idx] + c * ((p - modulus[j]) % p)) % p;
        }
    }
    prod.truncate(m);
    prod
}

fn digits(mut idx: usize, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for slot in out.iter_mut() {
        *slot = (idx as u64) % p;
        idx /= p as usize;
    }
    out
}

fn undigits(coeffs: &[u64], p: u64) -> usize {
    let mut idx = 0u64;
    for &c in coeffs.iter().rev() {
        idx = idx * p + c;
    }
    idx as usize
}

/// Row echelon accumulator over GF(p) for independence tests during
/// construction.
#[derive(Clone)]
struct Echelon {
    p: u64,
    rows: Vec<Vec<u64>>,
}

impl Echelon {
    fn new(p: u64) -> Self {
        Echelon { p, rows: Vec::new() }
    }

    /// Inserts v if independent of the rows held so far; reports whether the
    /// span grew.
    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        for row in &self.rows {
            let pos = row.iter().position(|&c| c != 0).unwrap();
            if v[pos] != 0 {
                let factor = (v[pos] * inv_mod(row[pos], self.p)) % self.p;
                for j in 0..v.len() {
                    v[j] = (v[j] + self.p - (factor * row[j]) % self.p) % self.p;
                }
            }
        }
        if v.iter().all(|&c| c == 0) {
            false
        } else {
            self.rows.push(v);
            self.rows.sort_by_key(|r| r.iter().position(|&c| c != 0));
            true
        }
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a ≠ 0 mod p.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Solves for the inverse of the M×M matrix whose columns are `cols`, over
/// GF(p). Returns rows of the inverse, or None when singular.
fn invert_gfp(cols: &[Vec<u64>], p: u64, m: usize) -> Option<Vec<Vec<u64>>> {
    // Augmented [A | I] with A[r][c] = cols[c][r].
    let mut a: Vec<Vec<u64>> = (0..m)
        .map(|r| {
            let mut row: Vec<u64> = cols.iter().map(|col| col[r]).collect();
            row.extend((0..m).map(|j| u64::from(j == r)));
            row
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        let scale = inv_mod(a[col][col], p);
        for j in 0..2 * m {
            a[col][j] = a[col][j] * scale % p;
        }
        for r in 0..m {
            if r != col && a[r][col] != 0 {
                let factor = a[r][col];
                for j in 0..2 * m {
                    a[r][j] = (a[r][j] + p - factor * a[col][j] % p) % p;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[m..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> Arc<FieldTower> {
        // x^2 + x + 1 over GF(2); blocks: GF(2) and GF(4) itself.
        FieldTower::new(2, 2, &[1, 1, 1], &[1, 2]).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FieldTower::new(4, 1, &[0, 1], &[1]).unwrap_err(), Error::NotPrime(4));
        assert_eq!(
            FieldTower::new(2, 2, &[0, 1, 1], &[1]).unwrap_err(),
            Error::ReducibleModulus(1)
        );
        assert!(matches!(
            FieldTower::new(2, 2, &[1, 1], &[1]).unwrap_err(),
            Error::InvalidModulus { .. }
        ));
        assert_eq!(
            FieldTower::new(2, 3, &[1, 1, 0, 1], &[2]).unwrap_err(),
            Error::DegreeDoesNotDivide { degree: 2, extension: 3 }
        );
        assert_eq!(FieldTower::new(2, 2, &[1, 1, 1], &[]).unwrap_err(), Error::NoBlocks);
    }

    #[test]
    fn gf4_multiplication_and_inverse() {
        let t = gf4();
        let w = t.element(2); // ω, coefficient vector (0, 1)
        let w1 = t.element(3); // ω + 1
        assert_eq!(t.mul(w, w), w1);
        assert_eq!(t.add(w, w), t.zero());
        // Exhaust the three nonzero elements to find the inverse of ω.
        let mut found = None;
        for y in t.elements().filter(|y| !y.is_zero()) {
            if t.mul(w, y) == t.one() {
                found = Some(y);
            }
        }
        assert_eq!(found, Some(w1));
        assert_eq!(t.inv(w).unwrap(), w1);
        assert_eq!(t.inv(t.zero()).unwrap_err(), Error::ZeroInversion);
    }

    #[test]
    fn field_axioms_exhaustive_gf8() {
        let t = FieldTower::new(2, 3, &[1, 1, 0, 1], &[1]).unwrap();
        for a in t.elements() {
            assert_eq!(t.add(a, t.neg(a)), t.zero());
            if !a.is_zero() {
                assert_eq!(t.mul(a, t.inv(a).unwrap()), t.one());
            }
            for b in t.elements() {
                assert_eq!(t.add(a, b), t.add(b, a));
                assert_eq!(t.mul(a, b), t.mul(b, a));
                // Frobenius is additive.
                assert_eq!(
                    t.frobenius_power(t.add(a, b), 1),
                    t.add(t.frobenius_power(a, 1), t.frobenius_power(b, 1))
                );
                for c in t.elements() {
                    assert_eq!(t.mul(a, t.add(b, c)), t.add(t.mul(a, b), t.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn subfields_are_frobenius_fixed_and_closed() {
        let t = gf4();
        assert_eq!(t.subfield_elements(0).len(), 2);
        assert_eq!(t.subfield_elements(1).len(), 4);
        assert!(t.is_in_subfield(t.one(), 0));
        assert!(!t.is_in_subfield(t.element(2), 0));
        for &x in t.subfield_elements(0) {
            assert_eq!(t.frobenius_power(x, 1), x);
            for &y in t.subfield_elements(0) {
                assert!(t.is_in_subfield(t.add(x, y), 0));
                assert!(t.is_in_subfield(t.mul(x, y), 0));
            }
            if !x.is_zero() {
                assert!(t.is_in_subfield(t.inv(x).unwrap(), 0));
            }
        }
    }

    #[test]
    fn relative_basis_starts_at_one() {
        let t = gf4();
        assert_eq!(t.relative_basis(0), &[t.one(), t.element(2)]);
        assert_eq!(t.relative_basis(1), &[t.one()]);
        let t8 = FieldTower::new(2, 3, &[1, 1, 0, 1], &[1, 3]).unwrap();
        assert_eq!(t8.relative_degree(0), 3);
        assert_eq!(t8.relative_basis(0)[0], t8.one());
    }

    #[test]
    fn expansion_recomposes_everywhere() {
        // GF(16) over GF(2), GF(4), GF(16): every element, every block.
        let t = FieldTower::new(2, 4, &[1, 1, 0, 0, 1], &[1, 2, 4]).unwrap();
        for block in 0..t.block_count() {
            let basis = t.relative_basis(block).to_vec();
            for x in t.elements() {
                let coords = t.expand(x, block).to_vec();
                assert_eq!(coords.len(), t.relative_degree(block));
                let mut acc = t.zero();
                for (c, g) in coords.iter().zip(&basis) {
                    assert!(t.is_in_subfield(*c, block));
                    acc = t.add(acc, t.mul(*c, *g));
                }
                assert_eq!(acc, x);
            }
        }
    }

    #[test]
    fn expansion_is_subfield_linear() {
        let t = gf4();
        for &lambda in t.subfield_elements(0) {
            for x in t.elements() {
                for y in t.elements() {
                    let lhs = t.expand(t.add(t.mul(lambda, x), y), 0).to_vec();
                    let ex = t.expand(x, 0);
                    let ey = t.expand(y, 0);
                    let rhs: Vec<_> = ex
                        .iter()
                        .zip(ey)
                        .map(|(&a, &b)| t.add(t.mul(lambda, a), b))
                        .collect();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn expand_of_omega_plus_one_is_ones() {
        let t = gf4();
        // Γ_0 = {1, ω}, so ω + 1 expands to (1, 1) over GF(2).
        assert_eq!(t.expand(t.element(3), 0), &[t.one(), t.one()]);
        assert_eq!(t.expand(t.zero(), 0), &[t.zero(), t.zero()]);
    }

    #[test]
    fn coordinate_matrix_of_basis_vector_is_identity() {
        let t = gf4();
        let v = [t.one(), t.element(2)];
        let m = t.coordinate_matrix(0, &v);
        assert_eq!((m.rows(), m.cols()), (2, 2));
        for r in 0..2 {
            for c in 0..2 {
                let expected = if r == c { t.one() } else { t.zero() };
                assert_eq!(m.at(r, c), expected);
            }
        }
        // Degenerate tower GF(2) itself: 1 × n matrix equal to the vector.
        let t2 = FieldTower::new(2, 1, &[0, 1], &[1]).unwrap();
        let row = [t2.one(), t2.zero(), t2.one()];
        let m2 = t2.coordinate_matrix(0, &row);
        assert_eq!((m2.rows(), m2.cols()), (1, 3));
        assert_eq!(m2.row(0), &row);
    }

    #[test]
    fn default_moduli_are_least_irreducibles() {
        assert_eq!(default_modulus(2, 1).unwrap(), vec![0, 1]);
        assert_eq!(default_modulus(2, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(default_modulus(2, 3).unwrap(), vec![1, 1, 0, 1]);
        assert_eq!(default_modulus(3, 2).unwrap(), vec![1, 0, 1]);
        for m in 1..=8 {
            let f = default_modulus(2, m).unwrap();
            assert!(FieldTower::new(2, m, &f, &[1]).is_ok());
        }
    }

    #[test]
    fn descending_scan_yields_a_different_valid_basis() {
        let t = FieldTower::with_basis_order(2, 2, &[1, 1, 1], &[1], BasisOrder::Descending)
            .unwrap();
        assert_ne!(t.relative_basis(0), gf4().relative_basis(0));
        for x in t.elements() {
            let coords = t.expand(x, 0).to_vec();
            let mut acc = t.zero();
            for (c, g) in coords.iter().zip(t.relative_basis(0)) {
                acc = t.add(acc, t.mul(*c, *g));
            }
            assert_eq!(acc, x);
        }
    }
}
