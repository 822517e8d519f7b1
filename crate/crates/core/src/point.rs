//! Exact points of the nilradical.
//!
//! A point assigns a rational to every coordinate of M; sparse input is
//! completed with explicit zeros so that evaluation never guesses.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::roots::{Root, RootSets};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointM {
    n: u32,
    values: BTreeMap<Root, Rat>,
}

impl PointM {
    /// Total assignment; the domain must be exactly M.
    pub fn new(n: u32, sets: &RootSets, values: BTreeMap<Root, Rat>) -> Result<PointM> {
        for root in values.keys() {
            if !sets.in_m(*root) {
                return Err(Error::WrongSupport(format!("{root} is not in M")));
            }
        }
        if let Some(missing) = sets.m().iter().find(|root| !values.contains_key(root)) {
            return Err(Error::WrongSupport(format!(
                "coordinate {missing} absent (explicit zeros required)"
            )));
        }
        Ok(PointM { n, values })
    }

    /// Sparse assignment completed with zeros on the rest of M.
    pub fn from_support(n: u32, sets: &RootSets, sparse: BTreeMap<Root, Rat>) -> Result<PointM> {
        let mut values = BTreeMap::new();
        for root in sets.m() {
            values.insert(*root, Rat::from_integer(0.into()));
        }
        for (root, value) in sparse {
            if !sets.in_m(root) {
                return Err(Error::WrongSupport(format!("{root} is not in M")));
            }
            values.insert(root, value);
        }
        Ok(PointM { n, values })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &BTreeMap<Root, Rat> {
        &self.values
    }

    pub fn get(&self, root: Root) -> Option<&Rat> {
        self.values.get(&root)
    }

    /// Coordinate read; errors when the cell is outside M.
    pub fn coordinate(&self, row: u32, col: u32) -> Result<&Rat> {
        self.values
            .get(&Root::new(row, col))
            .ok_or(Error::MissingVariable(Root::new(row, col)))
    }

    /// Nonzero coordinates.
    pub fn support(&self) -> impl Iterator<Item = (Root, &Rat)> {
        self.values
            .iter()
            .filter(|(_, v)| !num::Zero::is_zero(*v))
            .map(|(r, v)| (*r, v))
    }
}
