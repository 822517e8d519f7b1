//! Positive roots of gl(n) and the block data of a parabolic subalgebra.
//!
//! A positive root is identified with the pair (i, j), 1 <= i < j <= n. The
//! diagonal block sizes (r_1, ..., r_u) split the positive roots into the
//! nilradical part M (endpoints in different blocks) and the reductive part
//! (endpoints in one block).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A positive root (i, j) with 1-based indices and row < col.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Root {
    pub row: u32,
    pub col: u32,
}

impl Root {
    pub fn new(row: u32, col: u32) -> Root {
        assert!(row >= 1 && row < col, "bad root ({row}, {col})");
        Root { row, col }
    }

    /// Strict nesting: `self` sits strictly inside `outer`.
    pub fn nested_in(&self, outer: Root) -> bool {
        outer.row < self.row && self.col < outer.col
    }
}

/// Shorthand used pervasively in tests.
pub fn r(row: u32, col: u32) -> Root {
    Root::new(row, col)
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

/// Diagonal block sizes with prefix sums and the index-to-block map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockStructure {
    sizes: Vec<u32>,
    prefix: Vec<u32>,
    n: u32,
    block_of: Vec<u32>,
}

impl BlockStructure {
    pub fn new(sizes: &[u32]) -> Result<BlockStructure> {
        if sizes.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(&bad) = sizes.iter().find(|&&s| s == 0) {
            return Err(Error::NonPositive(bad as i64));
        }
        let mut prefix = Vec::with_capacity(sizes.len());
        let mut acc = 0u32;
        for &s in sizes {
            acc += s;
            prefix.push(acc);
        }
        let n = acc;
        let mut block_of = vec![0u32; (n + 1) as usize];
        let mut k = 0usize;
        for i in 1..=n {
            while i > prefix[k] {
                k += 1;
            }
            block_of[i as usize] = (k + 1) as u32;
        }
        Ok(BlockStructure {
            sizes: sizes.to_vec(),
            prefix,
            n,
            block_of,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn num_blocks(&self) -> u32 {
        self.sizes.len() as u32
    }

    /// Size r_k of the 1-based block k.
    pub fn size(&self, k: u32) -> u32 {
        self.sizes[(k - 1) as usize]
    }

    /// Prefix sum R_k = r_1 + ... + r_k; R_0 = 0.
    pub fn prefix(&self, k: u32) -> u32 {
        if k == 0 {
            0
        } else {
            self.prefix[(k - 1) as usize]
        }
    }

    /// 1-based block number of the 1-based index i.
    pub fn block_of(&self, i: u32) -> u32 {
        assert!(i >= 1 && i <= self.n, "index {i} out of 1..={}", self.n);
        self.block_of[i as usize]
    }

    /// Rows (equivalently columns) of block k: R_{k-1}+1 ..= R_k.
    pub fn block_range(&self, k: u32) -> std::ops::RangeInclusive<u32> {
        self.prefix(k - 1) + 1..=self.prefix(k)
    }
}

/// The nilradical roots M and the reductive roots within blocks.
#[derive(Clone, Debug)]
pub struct RootSets {
    nilradical: BTreeSet<Root>,
    reductive: BTreeSet<Root>,
}

impl RootSets {
    pub fn of(bs: &BlockStructure) -> RootSets {
        let mut nilradical = BTreeSet::new();
        let mut reductive = BTreeSet::new();
        for i in 1..=bs.n() {
            for j in (i + 1)..=bs.n() {
                let root = Root::new(i, j);
                if bs.block_of(i) < bs.block_of(j) {
                    nilradical.insert(root);
                } else {
                    reductive.insert(root);
                }
            }
        }
        RootSets {
            nilradical,
            reductive,
        }
    }

    /// Roots of the nilradical.
    pub fn m(&self) -> &BTreeSet<Root> {
        &self.nilradical
    }

    /// Roots inside a single diagonal block.
    pub fn delta_r(&self) -> &BTreeSet<Root> {
        &self.reductive
    }

    pub fn in_m(&self, root: Root) -> bool {
        self.nilradical.contains(&root)
    }

    pub fn in_delta_r(&self, root: Root) -> bool {
        self.reductive.contains(&root)
    }

    pub fn dim_m(&self) -> usize {
        self.nilradical.len()
    }
}

/// Block structure plus derived root sets, as one call.
pub fn build_block_structure(sizes: &[u32]) -> Result<(BlockStructure, RootSets)> {
    let bs = BlockStructure::new(sizes)?;
    let sets = RootSets::of(&bs);
    Ok((bs, sets))
}
