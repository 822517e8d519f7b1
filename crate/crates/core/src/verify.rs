//! Randomized exact verification: conjugation trials for the polynomial and
//! rational families, plus the independence ranks. Shared by the CLI and
//! the acceptance tests.

use num::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::action::{adjoint, random_borel, random_point, random_unipotent};
use crate::base::ExtendedBase;
use crate::error::{Error, Result};
use crate::invariants::InvariantFamily;
use crate::jacobian::{borel_family_rank, unipotent_family_rank};
use crate::psi::{compute_psi, PsiCertificates};
use crate::roots::{build_block_structure, BlockStructure, RootSets};

/// Everything derived from one block-size list.
pub struct Structure {
    pub bs: BlockStructure,
    pub sets: RootSets,
    pub ext: ExtendedBase,
    pub psi: PsiCertificates,
    pub family: InvariantFamily,
}

impl Structure {
    pub fn new(sizes: &[u32]) -> Result<Structure> {
        let (bs, sets) = build_block_structure(sizes)?;
        let ext = ExtendedBase::compute(&bs, &sets)?;
        let psi = compute_psi(&bs, &ext)?;
        let family = InvariantFamily::build(&bs, &sets, &ext, &psi)?;
        Ok(Structure {
            bs,
            sets,
            ext,
            psi,
            family,
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub m_count: usize,
    pub l_count: usize,
    pub a_count: usize,
    pub b_count: usize,
    pub trials: usize,
    pub borel_evaluations: usize,
    pub borel_skipped: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn skip_rate(&self) -> f64 {
        if self.borel_evaluations == 0 {
            0.0
        } else {
            self.borel_skipped as f64 / self.borel_evaluations as f64
        }
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            format!(
                "all invariance checks passed: {} M, {} L, {} A, {} B ({} trials, {:.1}% denominator skips)",
                self.m_count,
                self.l_count,
                self.a_count,
                self.b_count,
                self.trials,
                100.0 * self.skip_rate()
            )
        } else {
            format!(
                "{} failure(s); first: {}",
                self.failures.len(),
                self.failures[0]
            )
        }
    }
}

/// Unipotent conjugation trials on the polynomial family; failures are
/// appended to the report.
pub fn run_unipotent_trials(
    st: &Structure,
    trials: usize,
    rng: &mut ChaCha8Rng,
    report: &mut CheckReport,
) -> Result<()> {
    let n = st.bs.n();
    for trial in 0..trials {
        let g = random_unipotent(rng, n, 12);
        let x = random_point(rng, n, &st.sets, false);
        let gx = adjoint(&g, &x, &st.sets)?;
        for (root, p) in st.family.minors().iter().chain(st.family.lpolys()) {
            let before = p.evaluate(x.values())?;
            let after = p.evaluate(gx.values())?;
            if before != after {
                report.failures.push(format!(
                    "trial {trial}: unipotent action moved the invariant at {root}"
                ));
            }
        }
    }
    Ok(())
}

/// Mixed torus/unipotent trials on the quotient family. Evaluations with a
/// vanishing denominator are skipped and counted; a skip rate of 5% or more
/// is itself a failure.
pub fn run_borel_trials(
    st: &Structure,
    trials: usize,
    rng: &mut ChaCha8Rng,
    report: &mut CheckReport,
) -> Result<()> {
    let n = st.bs.n();
    for trial in 0..trials {
        let g = random_borel(rng, n, 12);
        let x = random_point(rng, n, &st.sets, true);
        let gx = adjoint(&g, &x, &st.sets)?;
        for (root, expr) in st
            .family
            .a_invariants()
            .iter()
            .chain(st.family.b_invariants())
        {
            report.borel_evaluations += 1;
            let d1 = expr.den().evaluate(x.values())?;
            let d2 = expr.den().evaluate(gx.values())?;
            if d1.is_zero() || d2.is_zero() {
                report.borel_skipped += 1;
                continue;
            }
            let n1 = expr.num().evaluate(x.values())?;
            let n2 = expr.num().evaluate(gx.values())?;
            if n1 * d2 != n2 * d1 {
                report.failures.push(format!(
                    "trial {trial}: Borel action moved the invariant at {root}"
                ));
            }
        }
    }
    if report.borel_evaluations > 0 && report.skip_rate() >= 0.05 {
        report.failures.push(format!(
            "denominator skip rate {:.2}% is at or above 5%",
            100.0 * report.skip_rate()
        ));
    }
    Ok(())
}

/// Unipotent trials on the polynomial family and mixed Borel trials on the
/// quotient family, all exact.
pub fn run_invariance_checks(st: &Structure, trials: usize, seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport {
        m_count: st.family.minors().len(),
        l_count: st.family.lpolys().len(),
        a_count: st.family.a_invariants().len(),
        b_count: st.family.b_invariants().len(),
        trials,
        ..CheckReport::default()
    };
    run_unipotent_trials(st, trials, &mut rng, &mut report)?;
    run_borel_trials(st, trials, &mut rng, &mut report)?;
    Ok(report)
}

/// Both exact Jacobian ranks, with up to five resamples.
pub fn run_independence_checks(st: &Structure, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target_ml = st.family.minors().len() + st.family.lpolys().len();
    let rank_ml = unipotent_family_rank(&st.family, &st.sets, st.bs.n(), &mut rng, 5)?;
    if rank_ml != target_ml {
        return Err(Error::VerificationFailed(format!(
            "polynomial family rank {rank_ml}, expected {target_ml}"
        )));
    }
    let target_ab = st.psi.len();
    let rank_ab = borel_family_rank(&st.family, &st.sets, st.bs.n(), &mut rng, 5)?;
    if rank_ab != target_ab {
        return Err(Error::VerificationFailed(format!(
            "quotient family rank {rank_ab}, expected {target_ab}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_structure_passes() {
        let st = Structure::new(&[1, 2, 2, 1]).unwrap();
        let report = run_invariance_checks(&st, 10, 42).unwrap();
        assert!(report.passed(), "{}", report.summary());
        assert_eq!(report.m_count, 4);
        assert_eq!(report.l_count, 2);
        assert_eq!(report.b_count, 1);
        run_independence_checks(&st, 42).unwrap();
    }
}
