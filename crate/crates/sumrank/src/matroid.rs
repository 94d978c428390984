//! Rank functions on the product subspace lattice.
//!
//! A sum-matroid is a function on the lattice that is bounded by the
//! lattice rank, monotone, and submodular. The main source of examples is
//! a linear code: the rank of a lattice element is the rank of the
//! projection of the dual code onto it, which works out to the lattice
//! rank minus the dimension of the code's intersection with the element's
//! support space. Duality flips a rank function through complements, and
//! on code matroids it commutes with code duality; the test suites check
//! both facts by exhaustion.

use std::collections::BTreeMap;

use crate::code::SumRankCode;
use crate::error::{Error, Result, ScaleGuard};
use crate::lattice::{Ground, ProductElement};

/// Explicit rank table keyed by the canonical form of lattice elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RankTable {
    entries: BTreeMap<String, usize>,
}

impl RankTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, lam: &ProductElement, rank: usize) {
        self.entries.insert(lam.canonical_key(), rank);
    }

    pub fn get(&self, lam: &ProductElement) -> Option<usize> {
        self.entries.get(&lam.canonical_key()).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in key order, for serialization.
    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.entries.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

/// Where a matroid's rank values come from.
#[derive(Debug, Clone)]
pub enum RankOracle {
    /// Every value listed explicitly. Evaluation panics on a missing
    /// entry; tables are expected to be total.
    Table(RankTable),
    /// Rank of the projection of the code's dual onto the element.
    Code(Box<SumRankCode>),
    /// The uniform rank function: lattice rank capped at a constant.
    Uniform(usize),
    /// Dual of the inner oracle, evaluated through complements.
    Dual { inner: Box<RankOracle>, inner_rank: usize },
}

/// A rank function together with its ground. Construction does not verify
/// the axioms; `check_axioms` does, by exhaustion, and reports every
/// violation it finds.
#[derive(Debug, Clone)]
pub struct SumMatroid {
    ground: Ground,
    oracle: RankOracle,
}

/// A concrete witness that one of the three rank axioms fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    /// The rank exceeds the lattice rank.
    RankBound { lam: ProductElement, rank: usize },
    /// A smaller element got a larger rank.
    Monotonicity {
        lower: ProductElement,
        upper: ProductElement,
        lower_rank: usize,
        upper_rank: usize,
    },
    /// Rank of join plus rank of meet exceeds the sum of the ranks.
    Submodularity { a: ProductElement, b: ProductElement, lhs: usize, rhs: usize },
}

impl SumMatroid {
    /// The rank function induced by a code on its own ground.
    pub fn from_code(code: SumRankCode) -> SumMatroid {
        let ground = code.ground().clone();
        SumMatroid { ground, oracle: RankOracle::Code(Box::new(code)) }
    }

    /// The uniform rank function of value `k`, which is the largest rank
    /// function of matroid rank `k` on the ground.
    pub fn uniform(ground: Ground, k: usize) -> Result<SumMatroid> {
        let n = ground.n();
        if k > n {
            return Err(Error::DimensionOutOfRange { dim: k, ambient: n });
        }
        Ok(SumMatroid { ground, oracle: RankOracle::Uniform(k) })
    }

    pub fn from_table(ground: Ground, table: RankTable) -> SumMatroid {
        SumMatroid { ground, oracle: RankOracle::Table(table) }
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn rank(&self, lam: &ProductElement) -> usize {
        eval(&self.oracle, lam)
    }

    /// Rank of the top element.
    pub fn matroid_rank(&self) -> usize {
        self.rank(&ProductElement::full(&self.ground))
    }

    /// Lattice rank minus rank. For a code matroid this is the dimension
    /// of the code's intersection with the element's support space.
    pub fn nullity(&self, lam: &ProductElement) -> usize {
        lam.rk() - self.rank(lam)
    }

    /// The dual rank function: complement, evaluate, and shift so the
    /// bottom lands at zero. Dualizing twice gives back the original
    /// values.
    pub fn dual(&self) -> SumMatroid {
        let inner_rank = self.matroid_rank();
        SumMatroid {
            ground: self.ground.clone(),
            oracle: RankOracle::Dual { inner: Box::new(self.oracle.clone()), inner_rank },
        }
    }

    /// Evaluates the whole lattice into an explicit table.
    pub fn materialize(&self, guard: &ScaleGuard) -> Result<RankTable> {
        let mut table = RankTable::new();
        for lam in self.ground.lattice_elements(*guard)? {
            table.set(&lam, self.rank(&lam));
        }
        Ok(table)
    }

    /// Same matroid, backed by an explicit table.
    pub fn to_table(&self, guard: &ScaleGuard) -> Result<SumMatroid> {
        Ok(SumMatroid::from_table(self.ground.clone(), self.materialize(guard)?))
    }

    /// Checks the three rank axioms over the whole lattice: the rank is
    /// bounded by the lattice rank, monotone along containment, and
    /// submodular across joins and meets. Every violation is returned with
    /// the elements that exhibit it. The pair loop is quadratic in the
    /// lattice size and guarded as such.
    pub fn check_axioms(&self, guard: &ScaleGuard) -> Result<Vec<AxiomViolation>> {
        let elements = self.ground.lattice_elements(*guard)?;
        let count = elements.len() as u128;
        guard.admit(count * count)?;
        let table = self.materialize(guard)?;
        let rank_of = |lam: &ProductElement| -> usize {
            table.get(lam).expect("materialized table covers the lattice")
        };
        let mut violations = Vec::new();
        for lam in &elements {
            let r = rank_of(lam);
            if r > lam.rk() {
                violations.push(AxiomViolation::RankBound { lam: lam.clone(), rank: r });
            }
        }
        for a in &elements {
            for b in &elements {
                let ra = rank_of(a);
                let rb = rank_of(b);
                if a.leq(b) && ra > rb {
                    violations.push(AxiomViolation::Monotonicity {
                        lower: a.clone(),
                        upper: b.clone(),
                        lower_rank: ra,
                        upper_rank: rb,
                    });
                }
                let lhs = rank_of(&a.join(b)) + rank_of(&a.meet(b));
                let rhs = ra + rb;
                if lhs > rhs {
                    violations.push(AxiomViolation::Submodularity {
                        a: a.clone(),
                        b: b.clone(),
                        lhs,
                        rhs,
                    });
                }
            }
        }
        Ok(violations)
    }

    /// True when the two rank functions agree on every lattice element.
    /// The grounds must match for the comparison to make sense.
    pub fn pointwise_equals(&self, other: &SumMatroid, guard: &ScaleGuard) -> Result<bool> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch);
        }
        for lam in self.ground.lattice_elements(*guard)? {
            if self.rank(&lam) != other.rank(&lam) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn eval(oracle: &RankOracle, lam: &ProductElement) -> usize {
    match oracle {
        RankOracle::Table(table) => {
            table.get(lam).expect("rank table has no entry for this lattice element")
        }
        RankOracle::Code(code) => code.rho(lam),
        RankOracle::Uniform(k) => lam.rk().min(*k),
        RankOracle::Dual { inner, inner_rank } => {
            eval(inner, &lam.complement()) + lam.rk() - inner_rank
        }
    }
}

/// Matroid duality against code duality: the dual of the matroid of a code
/// has the same rank function as the matroid of the dual code.
pub fn duality_commutes(code: &SumRankCode, guard: &ScaleGuard) -> Result<bool> {
    let of_code = SumMatroid::from_code(code.clone());
    let of_dual = SumMatroid::from_code(code.dual());
    of_code.dual().pointwise_equals(&of_dual, guard)
}
