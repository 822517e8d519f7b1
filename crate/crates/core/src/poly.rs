//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! Variables are indexed by roots of the nilradical, so a polynomial in the
//! coordinate functions x_{i,j} and a polynomial in the slice variables c_psi
//! share one representation. Terms live in a BTreeMap keyed by monomial,
//! which makes iteration order (and hence serialization) canonical.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::roots::Root;

/// Product of variables with positive exponents, kept sorted by root.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Root, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(root: Root) -> Monomial {
        Monomial(vec![(root, 1)])
    }

    pub fn from_pairs(pairs: &[(Root, u32)]) -> Monomial {
        let mut map: BTreeMap<Root, u32> = BTreeMap::new();
        for &(root, exp) in pairs {
            if exp > 0 {
                *map.entry(root).or_insert(0) += exp;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = (Root, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree_in(&self, root: Root) -> u32 {
        self.0
            .iter()
            .find(|&&(r, _)| r == root)
            .map_or(0, |&(_, e)| e)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<Root, u32> = self.0.iter().copied().collect();
        for &(root, exp) in &other.0 {
            *map.entry(root).or_insert(0) += exp;
        }
        Monomial(map.into_iter().collect())
    }

    /// Remove one factor of `root`; None when absent.
    fn without_one(&self, root: Root) -> Option<(Monomial, u32)> {
        let exp = self.degree_in(root);
        if exp == 0 {
            return None;
        }
        let rest: Vec<(Root, u32)> = self
            .0
            .iter()
            .copied()
            .filter_map(|(r, e)| {
                if r == root {
                    (e > 1).then_some((r, e - 1))
                } else {
                    Some((r, e))
                }
            })
            .collect();
        Some((Monomial(rest), exp))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (idx, (root, exp)) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, "*")?;
            }
            write!(f, "x[{},{}]", root.row, root.col)?;
            if *exp > 1 {
                write!(f, "^{exp}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Polynomial {
        let mut p = Polynomial::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(root: Root) -> Polynomial {
        let mut p = Polynomial::zero();
        p.terms.insert(Monomial::var(root), Rat::one());
        p
    }

    /// Variable constructor that enforces the fixed universe; use at the
    /// boundaries where roots come from input data.
    pub fn var_in(root: Root, universe: &BTreeSet<Root>) -> Result<Polynomial> {
        if !universe.contains(&root) {
            return Err(Error::MissingVariable(root));
        }
        Ok(Polynomial::var(root))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, mono: Monomial, coef: Rat) {
        if coef.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(coef);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &coef;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn variables(&self) -> BTreeSet<Root> {
        self.terms
            .keys()
            .flat_map(|m| m.vars().map(|(r, _)| r))
            .collect()
    }

    pub fn degree_in(&self, root: Root) -> u32 {
        self.terms
            .keys()
            .map(|m| m.degree_in(root))
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Exact value at a full assignment; every variable must be present.
    pub fn evaluate(&self, values: &BTreeMap<Root, Rat>) -> Result<Rat> {
        let mut acc = Rat::zero();
        for (mono, coef) in &self.terms {
            let mut term = coef.clone();
            for (root, exp) in mono.vars() {
                let v = values.get(&root).ok_or(Error::MissingVariable(root))?;
                for _ in 0..exp {
                    term *= v;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Substitute values for a subset of the variables.
    pub fn partial_eval(&self, values: &BTreeMap<Root, Rat>) -> Polynomial {
        let mut out = Polynomial::zero();
        for (mono, coef) in &self.terms {
            let mut c = coef.clone();
            let mut rest = Vec::new();
            for (root, exp) in mono.vars() {
                match values.get(&root) {
                    Some(v) => {
                        for _ in 0..exp {
                            c *= v;
                        }
                    }
                    None => rest.push((root, exp)),
                }
            }
            out.add_term(Monomial(rest), c);
        }
        out
    }

    /// Map each variable to itself, to 1, or to 0.
    pub fn substitute_pattern(&self, fate: impl Fn(Root) -> VarFate) -> Polynomial {
        let mut out = Polynomial::zero();
        'terms: for (mono, coef) in &self.terms {
            let mut rest = Vec::new();
            for (root, exp) in mono.vars() {
                match fate(root) {
                    VarFate::Zero => continue 'terms,
                    VarFate::One => {}
                    VarFate::Keep => rest.push((root, exp)),
                }
            }
            out.add_term(Monomial(rest), coef.clone());
        }
        out
    }

    /// Formal partial derivative.
    pub fn derivative(&self, root: Root) -> Polynomial {
        let mut out = Polynomial::zero();
        for (mono, coef) in &self.terms {
            if let Some((rest, exp)) = mono.without_one(root) {
                out.add_term(rest, coef * Rat::from_integer(exp.into()));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

/// Fate of one variable under a slice substitution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarFate {
    Keep,
    One,
    Zero,
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (mono, coef)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if mono.is_one() {
                write!(f, "{coef}")?;
            } else if coef.is_one() {
                write!(f, "{mono}")?;
            } else if *coef == -Rat::one() {
                write!(f, "-{mono}")?;
            } else {
                write!(f, "{coef}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
