//! The base of the nilradical and its extension by bridge roots.
//!
//! The comparability relation puts gamma' above gamma when their difference
//! is again a positive root. Peeling off minimal elements layer by layer
//! yields the unique base S: an antichain that sits below every other root
//! of M. Pairs of base roots chained through a reductive root produce the
//! extra roots Phi; S and Phi together index the independent invariants of
//! the unipotent action.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::roots::{BlockStructure, Root, RootSets};

/// gamma > delta in the comparability relation, i.e. gamma - delta is a
/// positive root. In coordinates: same row with a longer reach, or same
/// column with a smaller row. Not an order relation.
pub fn root_gt(gamma: Root, delta: Root) -> bool {
    (gamma.row == delta.row && gamma.col > delta.col)
        || (gamma.col == delta.col && gamma.row < delta.row)
}

/// Either direction of the comparability relation.
pub fn comparable(a: Root, b: Root) -> bool {
    root_gt(a, b) || root_gt(b, a)
}

/// Layered base computation: repeatedly take the minimal elements of what
/// survives, then drop them together with everything above them.
pub fn compute_base(sets: &RootSets) -> Vec<BTreeSet<Root>> {
    let mut layers = Vec::new();
    let mut remaining: BTreeSet<Root> = sets.m().clone();
    while !remaining.is_empty() {
        let minimal: BTreeSet<Root> = remaining
            .iter()
            .copied()
            .filter(|&gamma| !remaining.iter().any(|&xi| xi != gamma && root_gt(gamma, xi)))
            .collect();
        remaining.retain(|&gamma| {
            !minimal.contains(&gamma) && !minimal.iter().any(|&xi| root_gt(gamma, xi))
        });
        layers.push(minimal);
    }
    layers
}

/// A pair of base roots (xi, xi') chained through the bridge root
/// (col(xi), row(xi')) of the reductive part; contributes
/// phi = (col(xi), col(xi')).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdmissiblePair {
    pub xi: Root,
    pub xi_prime: Root,
    pub bridge: Root,
    pub phi: Root,
}

/// The base S with its layers, the admissible pairs, and Phi.
#[derive(Clone, Debug)]
pub struct ExtendedBase {
    layers: Vec<BTreeSet<Root>>,
    s: BTreeSet<Root>,
    pairs: Vec<AdmissiblePair>,
    phi: BTreeSet<Root>,
    pair_by_phi: BTreeMap<Root, usize>,
    s_in_row: BTreeMap<u32, Root>,
    s_in_col: BTreeMap<u32, Root>,
}

impl ExtendedBase {
    pub fn compute(bs: &BlockStructure, sets: &RootSets) -> Result<ExtendedBase> {
        let layers = compute_base(sets);
        let s: BTreeSet<Root> = layers.iter().flatten().copied().collect();

        let mut s_in_row = BTreeMap::new();
        let mut s_in_col = BTreeMap::new();
        for &xi in &s {
            if s_in_row.insert(xi.row, xi).is_some() {
                return Err(Error::InternalContradiction(format!(
                    "two base roots in row {}",
                    xi.row
                )));
            }
            if s_in_col.insert(xi.col, xi).is_some() {
                return Err(Error::InternalContradiction(format!(
                    "two base roots in column {}",
                    xi.col
                )));
            }
        }

        let mut pairs = Vec::new();
        let mut phi = BTreeSet::new();
        let mut pair_by_phi = BTreeMap::new();
        for &xi in &s {
            for &xi_prime in &s {
                if xi.col < xi_prime.row && bs.block_of(xi.col) == bs.block_of(xi_prime.row) {
                    let bridge = Root::new(xi.col, xi_prime.row);
                    debug_assert!(sets.in_delta_r(bridge));
                    let phi_root = Root::new(xi.col, xi_prime.col);
                    if !sets.in_m(phi_root) || s.contains(&phi_root) {
                        return Err(Error::InternalContradiction(format!(
                            "bridge image {phi_root} collides with the base or leaves M"
                        )));
                    }
                    if pair_by_phi.insert(phi_root, pairs.len()).is_some() {
                        return Err(Error::InternalContradiction(format!(
                            "two admissible pairs map to {phi_root}"
                        )));
                    }
                    pairs.push(AdmissiblePair {
                        xi,
                        xi_prime,
                        bridge,
                        phi: phi_root,
                    });
                    phi.insert(phi_root);
                }
            }
        }

        Ok(ExtendedBase {
            layers,
            s,
            pairs,
            phi,
            pair_by_phi,
            s_in_row,
            s_in_col,
        })
    }

    pub fn layers(&self) -> &[BTreeSet<Root>] {
        &self.layers
    }

    pub fn s(&self) -> &BTreeSet<Root> {
        &self.s
    }

    pub fn phi(&self) -> &BTreeSet<Root> {
        &self.phi
    }

    pub fn pairs(&self) -> &[AdmissiblePair] {
        &self.pairs
    }

    /// The unique admissible pair with this image.
    pub fn pair_of(&self, phi: Root) -> Option<&AdmissiblePair> {
        self.pair_by_phi.get(&phi).map(|&i| &self.pairs[i])
    }

    pub fn s_root_in_row(&self, row: u32) -> Option<Root> {
        self.s_in_row.get(&row).copied()
    }

    pub fn s_root_in_col(&self, col: u32) -> Option<Root> {
        self.s_in_col.get(&col).copied()
    }

    /// S together with Phi.
    pub fn support(&self) -> BTreeSet<Root> {
        self.s.union(&self.phi).copied().collect()
    }

    pub fn in_extended_base(&self, root: Root) -> bool {
        self.s.contains(&root) || self.phi.contains(&root)
    }

    /// Phi roots sitting in the given row, ordered by column.
    pub fn phi_in_row(&self, row: u32) -> Vec<Root> {
        self.phi.iter().copied().filter(|p| p.row == row).collect()
    }
}
