//! Canonical slices and torus reduction.
//!
//! Y is the set of points supported on the extended base with nonzero
//! coefficients; X pins every non-Psi coefficient to 1 and leaves the Psi
//! coefficients free. The cells of (S u Phi) \ Psi, read as edges between
//! their row and column indices, always form a forest, so a diagonal
//! conjugation making them all 1 exists and is unique up to one scale per
//! tree; the Psi coordinates of the result do not depend on that scale.
//! Solving the forest gives the reduction; the transcript lists the h_i(b)
//! factors grouped into the five phases of the reduction schedule.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};

use crate::action::{adjoint, GroupElement};
use crate::base::ExtendedBase;
use crate::error::{Error, Result};
use crate::invariants::{restrict_pi, InvariantFamily};
use crate::point::PointM;
use crate::psi::{psi_numbering, PsiCertificates};
use crate::rat::Rat;
use crate::ratexpr::RationalExpr;
use crate::roots::{BlockStructure, Root, RootSets};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceKind {
    Y,
    X,
}

/// A point of one of the two slices together with its defining coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlicePoint {
    pub point: PointM,
    pub kind: SliceKind,
    pub coefficients: BTreeMap<Root, Rat>,
}

/// Point supported exactly on the extended base, all coefficients nonzero.
pub fn make_y_point(
    bs: &BlockStructure,
    sets: &RootSets,
    ext: &ExtendedBase,
    coeffs: &BTreeMap<Root, Rat>,
) -> Result<SlicePoint> {
    let support = ext.support();
    for root in coeffs.keys() {
        if !support.contains(root) {
            return Err(Error::WrongSupport(format!(
                "{root} is outside the extended base"
            )));
        }
    }
    for &root in &support {
        match coeffs.get(&root) {
            None => {
                return Err(Error::WrongSupport(format!(
                    "coefficient for {root} missing"
                )))
            }
            Some(v) if v.is_zero() => return Err(Error::ZeroCoefficient(root)),
            Some(_) => {}
        }
    }
    let point = PointM::from_support(bs.n(), sets, coeffs.clone())?;
    Ok(SlicePoint {
        point,
        kind: SliceKind::Y,
        coefficients: coeffs.clone(),
    })
}

/// Point with coefficient 1 on the non-Psi extended base and the given
/// nonzero coefficients on Psi.
pub fn make_x_point(
    bs: &BlockStructure,
    sets: &RootSets,
    ext: &ExtendedBase,
    psi: &BTreeSet<Root>,
    coeffs: &BTreeMap<Root, Rat>,
) -> Result<SlicePoint> {
    for root in coeffs.keys() {
        if !psi.contains(root) {
            return Err(Error::WrongSupport(format!("{root} is not a Psi root")));
        }
    }
    let mut full = BTreeMap::new();
    for &root in &ext.support() {
        if psi.contains(&root) {
            let v = coeffs
                .get(&root)
                .ok_or_else(|| Error::WrongSupport(format!("coefficient for {root} missing")))?;
            if v.is_zero() {
                return Err(Error::ZeroCoefficient(root));
            }
            full.insert(root, v.clone());
        } else {
            full.insert(root, Rat::one());
        }
    }
    let point = PointM::from_support(bs.n(), sets, full)?;
    Ok(SlicePoint {
        point,
        kind: SliceKind::X,
        coefficients: coeffs.clone(),
    })
}

/// Checks X membership of an arbitrary point and extracts the Psi
/// coefficients.
pub fn as_x_point(
    point: &PointM,
    ext: &ExtendedBase,
    psi: &BTreeSet<Root>,
) -> Result<SlicePoint> {
    let mut coeffs = BTreeMap::new();
    for (&root, v) in point.values() {
        if psi.contains(&root) {
            if v.is_zero() {
                return Err(Error::ZeroCoefficient(root));
            }
            coeffs.insert(root, v.clone());
        } else if ext.in_extended_base(root) {
            if !v.is_one() {
                return Err(Error::WrongSupport(format!(
                    "coordinate {root} is {v}, expected 1"
                )));
            }
        } else if !v.is_zero() {
            return Err(Error::WrongSupport(format!(
                "coordinate {root} is {v}, expected 0"
            )));
        }
    }
    Ok(SlicePoint {
        point: point.clone(),
        kind: SliceKind::X,
        coefficients: coeffs,
    })
}

/// One diagonal factor h_i(b) of the reduction, tagged with its phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusOp {
    pub index: u32,
    pub value: Rat,
    pub step: u8,
}

/// Ordered torus factors whose product conjugates the input to the output.
#[derive(Clone, Debug, Default)]
pub struct ReductionTranscript {
    pub ops: Vec<TorusOp>,
}

impl ReductionTranscript {
    /// The product of the recorded factors as one group element.
    pub fn product(&self, n: u32) -> Result<GroupElement> {
        let mut entries = vec![Rat::one(); n as usize];
        for op in &self.ops {
            entries[(op.index - 1) as usize] *= &op.value;
        }
        GroupElement::diagonal_torus(&entries)
    }
}

/// Record rows/blocks with strictly increasing sizes: block 1, then the
/// first later block of size above 1, then the first of larger size, and so
/// on. Drives the phase labels of the reduction schedule.
pub fn record_blocks(bs: &BlockStructure) -> Vec<u32> {
    let mut a = vec![1u32];
    for k in 2..=bs.num_blocks() {
        let threshold = if a.len() == 1 {
            1
        } else {
            bs.size(*a.last().unwrap())
        };
        if bs.size(k) > threshold {
            a.push(k);
        }
    }
    a
}

/// Phase labels for the torus indices.
fn step_of_index(bs: &BlockStructure, a: &[u32]) -> Vec<u8> {
    let n = bs.n();
    let mut step = vec![5u8; (n + 1) as usize];
    if a.len() < 2 {
        return step;
    }
    let a2 = a[1];
    for i in 1..=bs.prefix(a2 - 1) {
        step[i as usize] = 2;
    }
    for i in bs.block_range(a2) {
        step[i as usize] = 1;
    }
    if bs.prefix(a2) + 1 <= n {
        step[(bs.prefix(a2) + 1) as usize] = 1;
    }
    for k in 2..a.len() {
        let (prev, cur) = (a[k - 1], a[k]);
        for i in (bs.prefix(prev) + 2)..=bs.prefix(cur) {
            step[i as usize] = 3;
        }
        if bs.prefix(cur) + 1 <= n {
            step[(bs.prefix(cur) + 1) as usize] = 4;
        }
    }
    step
}

/// Bring a Y-point to the X slice by an exact diagonal conjugation.
pub fn t_reduce(
    y: &SlicePoint,
    bs: &BlockStructure,
    sets: &RootSets,
    ext: &ExtendedBase,
    psi: &PsiCertificates,
) -> Result<(SlicePoint, ReductionTranscript)> {
    if y.kind != SliceKind::Y {
        return Err(Error::NotYPoint("expected a Y slice point".into()));
    }
    let support = ext.support();
    for (&root, v) in y.point.values() {
        let inside = support.contains(&root);
        if inside && v.is_zero() {
            return Err(Error::DegenerateInput(format!(
                "coordinate {root} must be nonzero on the Y slice"
            )));
        }
        if !inside && !v.is_zero() {
            return Err(Error::NotYPoint(format!("{root} outside the extended base")));
        }
    }

    let psi_set = psi.all();
    let free: Vec<Root> = support
        .iter()
        .copied()
        .filter(|root| !psi_set.contains(root))
        .collect();

    // Solve t_i * x_{ij} / t_j = 1 on the forest of non-Psi cells.
    let n = bs.n();
    let mut t: Vec<Option<Rat>> = vec![None; (n + 1) as usize];
    let mut adj: Vec<Vec<(u32, Root)>> = vec![Vec::new(); (n + 1) as usize];
    for &cell in &free {
        adj[cell.row as usize].push((cell.col, cell));
        adj[cell.col as usize].push((cell.row, cell));
    }
    for start in 1..=n {
        if t[start as usize].is_some() || adj[start as usize].is_empty() {
            continue;
        }
        t[start as usize] = Some(Rat::one());
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let tv = t[v as usize].clone().unwrap();
            for &(w, cell) in &adj[v as usize] {
                let x = y
                    .point
                    .get(cell)
                    .expect("extended-base cell present")
                    .clone();
                // t_row * x = t_col
                let tw = if cell.row == v {
                    &tv * &x
                } else {
                    &tv / &x
                };
                match &t[w as usize] {
                    None => {
                        t[w as usize] = Some(tw);
                        queue.push_back(w);
                    }
                    Some(existing) => {
                        if *existing != tw {
                            return Err(Error::InternalContradiction(format!(
                                "cycle through index {w}: the non-Psi cells are not a forest"
                            )));
                        }
                    }
                }
            }
        }
    }

    let a = record_blocks(bs);
    let steps = step_of_index(bs, &a);
    let mut ops = Vec::new();
    for i in 1..=n {
        if let Some(v) = &t[i as usize] {
            if !v.is_one() {
                ops.push(TorusOp {
                    index: i,
                    value: v.clone(),
                    step: steps[i as usize],
                });
            }
        }
    }
    ops.sort_by_key(|op| (op.step, op.index));
    let transcript = ReductionTranscript { ops };

    let g = transcript.product(n)?;
    let reduced = adjoint(&g, &y.point, sets)?;
    let out = as_x_point(&reduced, ext, &psi_set).map_err(|e| {
        Error::InternalContradiction(format!("reduction left the X slice: {e}"))
    })?;
    Ok((out, transcript))
}

/// Solve for the Psi coefficients of the canonical representative from the
/// values of the Borel invariants, walking the solving order. Each slice
/// image is linear in its own coefficient once the earlier ones are known.
pub fn invariants_to_canonical(
    values: &BTreeMap<Root, Rat>,
    family: &InvariantFamily,
    ext: &ExtendedBase,
    psi: &PsiCertificates,
) -> Result<BTreeMap<Root, Rat>> {
    let psi_set = psi.all();
    let order = psi_numbering(&psi_set);
    let mut solved: BTreeMap<Root, Rat> = BTreeMap::new();
    for root in order {
        let value = values.get(&root).ok_or(Error::MissingValue(root))?;
        let expr: &RationalExpr = family
            .a_invariants()
            .get(&root)
            .or_else(|| family.b_invariants().get(&root))
            .ok_or(Error::MissingValue(root))?;
        let image = restrict_pi(expr, ext, &psi_set)?;

        let num = image.num().partial_eval(&solved);
        let den = image.den().partial_eval(&solved);
        if num.degree_in(root) > 1 || den.degree_in(root) > 1 {
            return Err(Error::InternalContradiction(format!(
                "slice image of {root} is not linear in its coefficient"
            )));
        }
        let extract = |p: &crate::poly::Polynomial| -> (Rat, Rat) {
            let c1 = p.derivative(root).constant_term();
            let c0 = p
                .partial_eval(&[(root, Rat::zero())].into_iter().collect())
                .constant_term();
            (c1, c0)
        };
        let (a1, a0) = extract(&num);
        let (b1, b0) = extract(&den);
        // a1 c + a0 = value (b1 c + b0)
        let lead = a1 - value * b1;
        let rhs = value * b0 - a0;
        if lead.is_zero() {
            return Err(Error::DivisionByZero(root));
        }
        let c = rhs / lead;
        if c.is_zero() {
            return Err(Error::DegenerateInput(format!(
                "solved coefficient at {root} is zero"
            )));
        }
        solved.insert(root, c);
    }
    Ok(solved)
}

/// Dimension of an orbit in general position: dim M minus the number of
/// Psi roots.
pub fn orbit_dimension(sets: &RootSets, psi: &PsiCertificates) -> usize {
    sets.dim_m() - psi.len()
}
