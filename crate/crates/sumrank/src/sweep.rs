//! Exhaustive verification sweeps over families of small codes.
//!
//! A sweep enumerates every generator matrix of a given shape, builds the
//! code each full-rank one spans, and runs the whole identity battery
//! against it: both weight routes, rank-function axioms on the code side
//! and the dual side, pointwise duality, the nullity complement identity,
//! Wei partitions, the extremal-criterion agreement, and the uniform
//! correspondence. Any failure is collected with the offending generator;
//! a failure falsifies this implementation, not the underlying theory.

use crate::code::{all_vectors, states, support_space, support_space_by_filter, SumRankCode};
use crate::error::{Error, Result, ScaleGuard};
use crate::lattice::Ground;
use crate::matrix::{FieldLevel, Matrix};
use crate::matroid::{duality_commutes, SumMatroid};
use crate::tower::{BasisOrder, FieldTower};
use crate::weights::{
    code_wei_duality_check, msrd_matrix_criterion, msrd_rank,
    r_msrd_crosscheck, route_equality_check, singleton_check, uniform_correspondence,
    wei_duality_check, MsrdWitness, WeightHierarchy,
};

/// Which part of the battery a failure came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    RouteEquality,
    RankAxioms,
    DualityPointwise,
    NullityComplement,
    WeiPartition,
    SingletonMonotone,
    CriterionAgreement,
    UniformCorrespondence,
    HammingCrosscheck,
}

/// One falsified identity, with the generator that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepFailure {
    pub generator: Matrix,
    pub check: CheckKind,
    pub detail: String,
}

/// Battery switches. The Hamming cross-check enumerates entire general
/// linear groups per code, so it is opt-in.
#[derive(Debug, Clone, Copy, Default)]
pub struct CheckOptions {
    pub crosscheck_hamming: bool,
}

/// Aggregate result of a sweep.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub codes_run: usize,
    pub rank_deficient_skipped: usize,
    pub failures: Vec<SweepFailure>,
}

impl SweepOutcome {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs the identity battery against one code and reports every check
/// that fails. An empty result means the code witnesses all of them.
pub fn check_code(
    code: &SumRankCode,
    guard: &ScaleGuard,
    options: &CheckOptions,
) -> Result<Vec<SweepFailure>> {
    let ground = code.ground();
    let n = code.length();
    let k = code.dimension();
    let g = code.generator().clone();
    let mut failures = Vec::new();
    let fail = |check: CheckKind, detail: String, failures: &mut Vec<SweepFailure>| {
        failures.push(SweepFailure { generator: g.clone(), check, detail });
    };

    let routes = route_equality_check(code, guard)?;
    if !routes.holds() {
        fail(
            CheckKind::RouteEquality,
            format!(
                "matroid route {:?} vs code route {:?}",
                routes.matroid_route.weights(),
                routes.code_route.weights()
            ),
            &mut failures,
        );
    }

    let m = SumMatroid::from_code(code.clone());
    let violations = m.check_axioms(guard)?;
    if !violations.is_empty() {
        fail(
            CheckKind::RankAxioms,
            format!("{} axiom violations, first {:?}", violations.len(), violations[0]),
            &mut failures,
        );
    }
    let md = m.dual();
    let violations = md.check_axioms(guard)?;
    if !violations.is_empty() {
        fail(
            CheckKind::RankAxioms,
            format!("dual side: {} axiom violations", violations.len()),
            &mut failures,
        );
    }

    if !duality_commutes(code, guard)? {
        fail(
            CheckKind::DualityPointwise,
            "dual rank function differs from the dual code's".into(),
            &mut failures,
        );
    }
    if !md.dual().pointwise_equals(&m, guard)? {
        fail(CheckKind::DualityPointwise, "double dual moved a value".into(), &mut failures);
    }

    for lam in ground.lattice_elements(*guard)? {
        let mu = code.mu(&lam);
        let rho = code.rho(&lam);
        if mu + rho != n - k {
            fail(
                CheckKind::NullityComplement,
                format!("mu {mu} + rho {rho} != {} at {}", n - k, lam.canonical_key()),
                &mut failures,
            );
            break;
        }
    }

    let wei_m = wei_duality_check(&m, guard)?;
    let wei_c = code_wei_duality_check(code, guard)?;
    if !wei_m.is_partition {
        fail(
            CheckKind::WeiPartition,
            format!("matroid union {:?}", wei_m.union_sorted),
            &mut failures,
        );
    }
    if !wei_c.is_partition {
        fail(CheckKind::WeiPartition, format!("code union {:?}", wei_c.union_sorted), &mut failures);
    }

    let shape = |h: &WeightHierarchy, n: usize, k: usize, side: &str,
                     failures: &mut Vec<SweepFailure>| {
        if !h.is_strictly_increasing() || !h.is_within_bounds(n) {
            fail(
                CheckKind::SingletonMonotone,
                format!("{side} hierarchy {:?} is not strictly increasing in 1..={n}", h.weights()),
                failures,
            );
        }
        let singleton = singleton_check(h, n, k);
        if !singleton.holds() {
            fail(
                CheckKind::SingletonMonotone,
                format!("{side} Singleton violations {:?}", singleton.violations),
                failures,
            );
        }
    };
    shape(&wei_c.primal, n, k, "primal", &mut failures);
    shape(&wei_c.dual, n, n - k, "dual", &mut failures);

    let by_weights = msrd_rank(code, guard)?;
    let by_criterion = msrd_matrix_criterion(code, guard)?;
    if by_weights.is_msrd != by_criterion.is_msrd {
        fail(
            CheckKind::CriterionAgreement,
            format!(
                "weights route says {}, matrix criterion says {}",
                by_weights.is_msrd, by_criterion.is_msrd
            ),
            &mut failures,
        );
    }
    match &by_weights.witness {
        Some(MsrdWitness::ShortCodeword(w)) => {
            let ok = code.contains(w)
                && !w.iter().all(|x| x.is_zero())
                && crate::code::srank(ground, w) <= n - k;
            if !ok {
                fail(
                    CheckKind::CriterionAgreement,
                    "short-codeword witness does not re-validate".into(),
                    &mut failures,
                );
            }
        }
        Some(MsrdWitness::SingularTransform { .. }) | None => {}
    }
    if let Some(MsrdWitness::SingularTransform { blocks, .. }) = &by_criterion.witness {
        let a = Matrix::block_diag(blocks);
        if code.generator().mul(&a).invertible() {
            fail(
                CheckKind::CriterionAgreement,
                "singular-transform witness does not re-validate".into(),
                &mut failures,
            );
        }
    }

    if k >= 1 {
        let uniform = uniform_correspondence(code, guard)?;
        if !uniform.equivalent {
            fail(
                CheckKind::UniformCorrespondence,
                format!(
                    "extremal {} but primal uniform {} and dual uniform {}",
                    uniform.is_msrd, uniform.primal_uniform, uniform.dual_uniform
                ),
                &mut failures,
            );
        }
        if !uniform.is_msrd && uniform.witness.is_none() {
            fail(
                CheckKind::UniformCorrespondence,
                "non-extremal code without a mismatch witness".into(),
                &mut failures,
            );
        }
    }

    if options.crosscheck_hamming {
        for r in 1..=k {
            let report = r_msrd_crosscheck(code, r, guard)?;
            if !report.equivalent {
                fail(
                    CheckKind::HammingCrosscheck,
                    format!(
                        "index {r}: rank-metric side {} vs Hamming side {} over {} transforms",
                        report.primal_holds, report.transforms_hold, report.transform_count
                    ),
                    &mut failures,
                );
            }
        }
    }

    Ok(failures)
}

/// Enumerates every k x n generator over the top field, skips the
/// rank-deficient ones, and runs the battery on each spanned code.
pub fn run_sweep(
    ground: &Ground,
    k: usize,
    guard: &ScaleGuard,
    options: &CheckOptions,
) -> Result<SweepOutcome> {
    let tower = ground.tower().clone();
    let n = ground.n();
    if k > n {
        return Err(Error::DimensionOutOfRange { dim: k, ambient: n });
    }
    guard.admit(states(tower.order(), k * n))?;
    let mut outcome =
        SweepOutcome { codes_run: 0, rank_deficient_skipped: 0, failures: Vec::new() };
    for entries in all_vectors(&tower, k * n) {
        let g = Matrix::from_fn(&tower, FieldLevel::Top, k, n, |r, c| entries[r * n + c]);
        if g.rank() < k {
            outcome.rank_deficient_skipped += 1;
            continue;
        }
        let code = SumRankCode::new(ground.clone(), g)?;
        outcome.failures.extend(check_code(&code, guard, options)?);
        outcome.codes_run += 1;
    }
    Ok(outcome)
}

/// Support spaces have the predicted dimension on every lattice element,
/// and agree with the filter construction whenever the ambient space is
/// small enough to enumerate. This depends only on the ground, not on any
/// code.
pub fn check_ground(ground: &Ground, guard: &ScaleGuard) -> Result<Vec<String>> {
    let tower = ground.tower();
    let mut problems = Vec::new();
    let filterable = states(tower.order(), ground.n()) <= 1 << 16;
    for lam in ground.lattice_elements(*guard)? {
        let direct = support_space(ground, &lam);
        if direct.rows() != lam.rk() {
            problems.push(format!(
                "support space of {} has dimension {}, expected {}",
                lam.canonical_key(),
                direct.rows(),
                lam.rk()
            ));
        }
        if filterable {
            let filtered = support_space_by_filter(ground, &lam, guard)?;
            if direct != filtered {
                problems.push(format!(
                    "support space of {} differs from the filter construction",
                    lam.canonical_key()
                ));
            }
        }
    }
    Ok(problems)
}

/// The same code over a tower whose relative bases were chosen by the
/// opposite deterministic scan. Element indices carry over unchanged;
/// only basis-dependent constructions could possibly notice, and none
/// may.
pub fn with_alternative_basis(code: &SumRankCode) -> Result<SumRankCode> {
    let tower = code.ground().tower();
    let flipped = match tower.basis_order() {
        BasisOrder::Ascending => BasisOrder::Descending,
        BasisOrder::Descending => BasisOrder::Ascending,
    };
    let rebuilt = FieldTower::with_basis_order(
        tower.p(),
        tower.degree(),
        tower.modulus(),
        &tower.subfield_degrees(),
        flipped,
    )?;
    let ground = Ground::new(rebuilt.clone(), code.ground().profile().to_vec())?;
    let g = code.generator();
    let transplanted = Matrix::from_fn(&rebuilt, FieldLevel::Top, g.rows(), g.cols(), |r, c| {
        rebuilt.element(g.at(r, c).index() as u64)
    });
    SumRankCode::new(ground, transplanted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::FieldTower;

    #[test]
    fn hamming_profile_sweep_passes_everything() {
        let t = FieldTower::new(2, 1, &[0, 1], &[1, 1, 1]).unwrap();
        let ground = Ground::new(t, vec![1, 1, 1]).unwrap();
        let outcome = run_sweep(
            &ground,
            1,
            &ScaleGuard::default(),
            &CheckOptions { crosscheck_hamming: true },
        )
        .unwrap();
        assert!(outcome.all_passed(), "failures: {:?}", outcome.failures);
        assert_eq!(outcome.codes_run, 7);
        assert_eq!(outcome.rank_deficient_skipped, 1);
    }

    #[test]
    fn single_block_line_sweep_passes_everything() {
        let t = FieldTower::new(2, 2, &[1, 1, 1], &[1]).unwrap();
        let ground = Ground::new(t, vec![2]).unwrap();
        let outcome = run_sweep(
            &ground,
            1,
            &ScaleGuard::default(),
            &CheckOptions { crosscheck_hamming: true },
        )
        .unwrap();
        assert!(outcome.all_passed(), "failures: {:?}", outcome.failures);
        assert_eq!(outcome.codes_run, 15);
        assert_eq!(outcome.rank_deficient_skipped, 1);
    }

    #[test]
    fn mixed_subfield_sweep_passes_everything() {
        let t = FieldTower::new(2, 2, &[1, 1, 1], &[1, 2]).unwrap();
        let ground = Ground::new(t, vec![1, 1]).unwrap();
        let outcome =
            run_sweep(&ground, 1, &ScaleGuard::default(), &CheckOptions::default()).unwrap();
        assert!(outcome.all_passed(), "failures: {:?}", outcome.failures);
        assert_eq!(outcome.codes_run, 15);
    }

    #[test]
    fn full_dimension_sweep_catches_nothing_at_k_two() {
        let t = FieldTower::new(2, 2, &[1, 1, 1], &[1]).unwrap();
        let ground = Ground::new(t, vec![2]).unwrap();
        let outcome =
            run_sweep(&ground, 2, &ScaleGuard::default(), &CheckOptions::default()).unwrap();
        assert!(outcome.all_passed(), "failures: {:?}", outcome.failures);
        // 16^2 matrices, of which GL_2(GF(4)) has 180 elements.
        assert_eq!(outcome.codes_run, 180);
        assert_eq!(outcome.rank_deficient_skipped, 76);
    }

    #[test]
    fn tiny_ceiling_stops_the_sweep_before_it_starts() {
        let t = FieldTower::new(2, 1, &[0, 1], &[1, 1]).unwrap();
        let ground = Ground::new(t, vec![1, 1]).unwrap();
        let guard = ScaleGuard::new(1);
        assert!(matches!(
            run_sweep(&ground, 1, &guard, &CheckOptions::default()),
            Err(Error::ScaleExceeded { .. })
        ));
    }

    #[test]
    fn ground_support_spaces_survive_the_filter_comparison() {
        let t = FieldTower::new(2, 2, &[1, 1, 1], &[1, 1]).unwrap();
        let ground = Ground::new(t, vec![2, 1]).unwrap();
        let problems = check_ground(&ground, &ScaleGuard::default()).unwrap();
        assert!(problems.is_empty(), "{problems:?}");
    }

    #[test]
    fn alternative_basis_leaves_every_verdict_alone() {
        let t = FieldTower::new(2, 2, &[1, 1, 1], &[1, 2]).unwrap();
        let ground = Ground::new(t.clone(), vec![2, 1]).unwrap();
        let code = SumRankCode::from_rows(
            ground,
            vec![
                vec![t.element(1), t.element(0), t.element(2)],
                vec![t.element(0), t.element(1), t.element(3)],
            ],
        )
        .unwrap();
        let flipped = with_alternative_basis(&code).unwrap();
        let guard = ScaleGuard::default();
        for word in code.codewords(&guard).unwrap() {
            let moved: Vec<_> = word
                .iter()
                .map(|x| flipped.ground().tower().element(x.index() as u64))
                .collect();
            assert_eq!(
                crate::code::srank(code.ground(), &word),
                crate::code::srank(flipped.ground(), &moved)
            );
        }
        let h = crate::weights::code_weights(&code, &guard).unwrap();
        let h2 = crate::weights::code_weights(&flipped, &guard).unwrap();
        assert_eq!(h.weights(), h2.weights());
        assert_eq!(
            msrd_rank(&code, &guard).unwrap().is_msrd,
            msrd_rank(&flipped, &guard).unwrap().is_msrd
        );
    }
}
