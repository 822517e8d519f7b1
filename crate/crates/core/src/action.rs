//! Exact adjoint action of the Borel group on the nilradical.
//!
//! Group elements are upper-triangular rational matrices with nonzero
//! diagonal, generated by one-parameter unipotents g_{i,j}(t) = I + t E_{i,j}
//! and by diagonal matrices. Conjugation is carried out exactly and the
//! result is read back on the nilradical cells; anything leaking outside
//! signals a malformed element.

use num::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::point::PointM;
use crate::rat::{rat, Rat};
use crate::roots::{Root, RootSets};

/// How an element was assembled, for diagnostics and transcripts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// I + t E_{i,j}
    Unipotent { i: u32, j: u32, t: Rat },
    /// diag(1, ..., b at position i, ..., 1)
    Torus { i: u32, b: Rat },
}

#[derive(Clone, Debug)]
pub struct GroupElement {
    n: u32,
    mat: Vec<Rat>,
    provenance: Vec<Generator>,
}

/// Matrix equality; how the element was assembled does not matter.
impl PartialEq for GroupElement {
    fn eq(&self, other: &GroupElement) -> bool {
        self.n == other.n && self.mat == other.mat
    }
}

impl Eq for GroupElement {}

impl GroupElement {
    pub fn identity(n: u32) -> GroupElement {
        let mut g = GroupElement {
            n,
            mat: vec![Rat::zero(); (n * n) as usize],
            provenance: Vec::new(),
        };
        for i in 0..n {
            g.set(i + 1, i + 1, Rat::one());
        }
        g
    }

    pub fn elementary_unipotent(n: u32, i: u32, j: u32, t: Rat) -> Result<GroupElement> {
        if !(1 <= i && i < j && j <= n) {
            return Err(Error::BadIndices(i, j));
        }
        let mut g = GroupElement::identity(n);
        g.set(i, j, t.clone());
        g.provenance = vec![Generator::Unipotent { i, j, t }];
        Ok(g)
    }

    pub fn diagonal_torus(entries: &[Rat]) -> Result<GroupElement> {
        let n = entries.len() as u32;
        let mut g = GroupElement::identity(n);
        for (idx, e) in entries.iter().enumerate() {
            if e.is_zero() {
                return Err(Error::ZeroDiagonal(idx + 1));
            }
            g.set(idx as u32 + 1, idx as u32 + 1, e.clone());
        }
        g.provenance = entries
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_one())
            .map(|(idx, e)| Generator::Torus {
                i: idx as u32 + 1,
                b: e.clone(),
            })
            .collect();
        Ok(g)
    }

    /// Build from explicit upper-triangular entries; unlisted diagonal
    /// entries default to 1, unlisted off-diagonal entries to 0.
    pub fn from_sparse(n: u32, entries: &[(u32, u32, Rat)]) -> Result<GroupElement> {
        let mut g = GroupElement::identity(n);
        for (i, j, v) in entries {
            if *i == 0 || i > j || *j > n {
                return Err(Error::BadIndices(*i, *j));
            }
            if i == j && v.is_zero() {
                return Err(Error::ZeroDiagonal(*i as usize));
            }
            g.set(*i, *j, v.clone());
        }
        Ok(g)
    }

    /// diag with b at one position.
    pub fn h(n: u32, i: u32, b: Rat) -> Result<GroupElement> {
        if b.is_zero() {
            return Err(Error::ZeroDiagonal(i as usize));
        }
        let mut entries = vec![Rat::one(); n as usize];
        entries[(i - 1) as usize] = b;
        GroupElement::diagonal_torus(&entries)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn get(&self, i: u32, j: u32) -> &Rat {
        &self.mat[((i - 1) * self.n + (j - 1)) as usize]
    }

    fn set(&mut self, i: u32, j: u32, v: Rat) {
        self.mat[((i - 1) * self.n + (j - 1)) as usize] = v;
    }

    pub fn provenance(&self) -> &[Generator] {
        &self.provenance
    }

    pub fn is_unipotent(&self) -> bool {
        (1..=self.n).all(|i| self.get(i, i).is_one())
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = GroupElement {
            n,
            mat: vec![Rat::zero(); (n * n) as usize],
            provenance: [self.provenance.clone(), other.provenance.clone()].concat(),
        };
        for i in 1..=n {
            for j in i..=n {
                let mut acc = Rat::zero();
                for k in i..=j {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Inverse by back substitution on the upper-triangular matrix.
    pub fn inverse(&self) -> GroupElement {
        let n = self.n;
        let mut inv = GroupElement {
            n,
            mat: vec![Rat::zero(); (n * n) as usize],
            provenance: Vec::new(),
        };
        for j in (1..=n).rev() {
            inv.set(j, j, Rat::one() / self.get(j, j));
            for i in (1..j).rev() {
                let mut acc = Rat::zero();
                for k in (i + 1)..=j {
                    acc += self.get(i, k) * inv.get(k, j);
                }
                let v = -acc / self.get(i, i);
                inv.set(i, j, v);
            }
        }
        inv
    }
}

/// Conjugate a point: embed on the nilradical cells, form g x g^{-1}, read
/// the result back. Coordinates outside M must come back exactly zero.
pub fn adjoint(g: &GroupElement, x: &PointM, sets: &RootSets) -> Result<PointM> {
    let n = g.n();
    assert_eq!(n, x.n());
    let idx = |i: u32, j: u32| ((i - 1) * n + (j - 1)) as usize;

    let mut xm = vec![Rat::zero(); (n * n) as usize];
    for (root, v) in x.values() {
        xm[idx(root.row, root.col)] = v.clone();
    }

    let ginv = g.inverse();
    // g * x
    let mut gx = vec![Rat::zero(); (n * n) as usize];
    for i in 1..=n {
        for j in 1..=n {
            let mut acc = Rat::zero();
            for k in i..=n {
                let a = g.get(i, k);
                let b = &xm[idx(k, j)];
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
            gx[idx(i, j)] = acc;
        }
    }
    // (g * x) * g^{-1}
    let mut out = vec![Rat::zero(); (n * n) as usize];
    for i in 1..=n {
        for j in 1..=n {
            let mut acc = Rat::zero();
            for k in 1..=j {
                let a = &gx[idx(i, k)];
                let b = ginv.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
            out[idx(i, j)] = acc;
        }
    }

    let mut values = std::collections::BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            let v = &out[idx(i, j)];
            if i < j && sets.in_m(Root::new(i, j)) {
                values.insert(Root::new(i, j), v.clone());
            } else if !v.is_zero() && i != j {
                return Err(Error::SupportLeak(i, j));
            }
        }
    }
    PointM::new(n, sets, values)
}

/// Symbolic form of conjugation by I + t E_{i,j} on coordinate functions:
/// x_{a,b} picks up t x_{j,b} when a = i and loses t x_{a,i} when b = j
/// (terms whose cell leaves M vanish). Intended for small-degree sanity
/// checks; point-level conjugation is the workhorse.
pub fn substitute_elementary(
    p: &crate::poly::Polynomial,
    i: u32,
    j: u32,
    t: &Rat,
    sets: &RootSets,
) -> crate::poly::Polynomial {
    use crate::poly::Polynomial;
    let image = |root: Root| -> Polynomial {
        let mut out = Polynomial::var(root);
        if root.row == i && j < root.col && sets.in_m(Root::new(j, root.col)) {
            out = &out + &Polynomial::var(Root::new(j, root.col)).scale(t);
        }
        if root.col == j && root.row < i && sets.in_m(Root::new(root.row, i)) {
            out = &out - &Polynomial::var(Root::new(root.row, i)).scale(t);
        }
        out
    };
    let mut acc = Polynomial::zero();
    for (mono, coef) in p.terms() {
        let mut term = Polynomial::constant(coef.clone());
        for (root, exp) in mono.vars() {
            for _ in 0..exp {
                term = &term * &image(root);
            }
        }
        acc = &acc + &term;
    }
    acc
}

/// Random product of elementary unipotents with small integer parameters.
pub fn random_unipotent(rng: &mut impl Rng, n: u32, max_gens: usize) -> GroupElement {
    let mut g = GroupElement::identity(n);
    let count = rng.random_range(1..=max_gens);
    for _ in 0..count {
        let i = rng.random_range(1..n);
        let j = rng.random_range(i + 1..=n);
        let t = rat(rng.random_range(-9..=9));
        g = g.mul(&GroupElement::elementary_unipotent(n, i, j, t).unwrap());
    }
    g
}

/// Random product of unipotent and torus generators.
pub fn random_borel(rng: &mut impl Rng, n: u32, max_gens: usize) -> GroupElement {
    let mut g = random_unipotent(rng, n, max_gens);
    let torus: Vec<Rat> = (0..n)
        .map(|_| {
            let mut v = 0;
            while v == 0 {
                v = rng.random_range(-9..=9);
            }
            rat(v)
        })
        .collect();
    g = g.mul(&GroupElement::diagonal_torus(&torus).unwrap());
    if rng.random_bool(0.5) {
        g = random_unipotent(rng, n, max_gens / 2 + 1).mul(&g);
    }
    g
}

/// Random rational point with small entries. With `nonzero` set, every
/// coordinate avoids zero and the range widens, which keeps denominator
/// collisions rare in the quotient-family trials.
pub fn random_point(
    rng: &mut impl Rng,
    n: u32,
    sets: &RootSets,
    nonzero: bool,
) -> PointM {
    let bound = if nonzero { 30 } else { 9 };
    let mut values = std::collections::BTreeMap::new();
    for &root in sets.m() {
        let mut p = rng.random_range(-bound..=bound);
        while nonzero && p == 0 {
            p = rng.random_range(-bound..=bound);
        }
        let q = rng.random_range(1..=4);
        values.insert(root, Rat::new(p.into(), q.into()));
    }
    PointM::new(n, sets, values).expect("full domain by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratq;
    use crate::roots::{build_block_structure, r};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    #[test]
    fn unipotent_basics() {
        let id = GroupElement::identity(4);
        assert_eq!(
            GroupElement::elementary_unipotent(4, 1, 2, rat(0)).unwrap().mat,
            id.mat
        );
        let g = GroupElement::elementary_unipotent(4, 1, 3, rat(5)).unwrap();
        let ginv = GroupElement::elementary_unipotent(4, 1, 3, rat(-5)).unwrap();
        assert_eq!(g.mul(&ginv).mat, id.mat);
        assert!(GroupElement::elementary_unipotent(4, 3, 3, rat(1)).is_err());
        assert!(GroupElement::elementary_unipotent(4, 0, 2, rat(1)).is_err());
    }

    #[test]
    fn noncommuting_product() {
        let a = GroupElement::elementary_unipotent(3, 1, 2, rat(2)).unwrap();
        let b = GroupElement::elementary_unipotent(3, 2, 3, rat(3)).unwrap();
        let ab = a.mul(&b);
        let ba = b.mul(&a);
        assert_eq!(ab.get(1, 3), &rat(6));
        assert_eq!(ba.get(1, 3), &rat(0));
    }

    #[test]
    fn torus_basics() {
        let n4 = GroupElement::h(4, 2, rat(1)).unwrap();
        assert_eq!(n4.mat, GroupElement::identity(4).mat);
        let d = GroupElement::diagonal_torus(&[rat(2), rat(1), rat(1)]).unwrap();
        let dinv = GroupElement::diagonal_torus(&[ratq(1, 2), rat(1), rat(1)]).unwrap();
        assert_eq!(d.mul(&dinv).mat, GroupElement::identity(3).mat);
        assert!(GroupElement::diagonal_torus(&[rat(0)]).is_err());
    }

    #[test]
    fn inverse_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let g = random_borel(&mut rng, 6, 8);
            let prod = g.mul(&g.inverse());
            assert_eq!(prod.mat, GroupElement::identity(6).mat);
        }
    }

    #[test]
    fn adjoint_examples() {
        let (bs, sets) = build_block_structure(&[1, 1]).unwrap();
        let x = PointM::from_support(
            bs.n(),
            &sets,
            [(r(1, 2), rat(7))].into_iter().collect(),
        )
        .unwrap();

        let id = GroupElement::identity(2);
        assert_eq!(adjoint(&id, &x, &sets).unwrap(), x);

        // Conjugating the single upper cell by a 2x2 unipotent fixes it.
        let g = GroupElement::elementary_unipotent(2, 1, 2, rat(3)).unwrap();
        assert_eq!(adjoint(&g, &x, &sets).unwrap(), x);

        // diag(a, d) scales it by a/d.
        let d = GroupElement::diagonal_torus(&[rat(3), rat(4)]).unwrap();
        let y = adjoint(&d, &x, &sets).unwrap();
        assert_eq!(y.coordinate(1, 2).unwrap(), &ratq(21, 4));
    }

    #[test]
    fn torus_row_column_rule() {
        // Scaling row 2 by 3 multiplies x23 by 3 and divides x12 by 3.
        let (bs, sets) = build_block_structure(&[1, 1, 1]).unwrap();
        let x = PointM::from_support(
            bs.n(),
            &sets,
            [(r(2, 3), rat(5)), (r(1, 2), rat(6))].into_iter().collect(),
        )
        .unwrap();
        let h = GroupElement::h(3, 2, rat(3)).unwrap();
        let y = adjoint(&h, &x, &sets).unwrap();
        assert_eq!(y.coordinate(2, 3).unwrap(), &rat(15));
        assert_eq!(y.coordinate(1, 2).unwrap(), &rat(2));
    }

    #[test]
    fn adjoint_is_homomorphism() {
        let (bs, sets) = build_block_structure(&[2, 1, 3, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let g = random_borel(&mut rng, bs.n(), 6);
            let h = random_borel(&mut rng, bs.n(), 6);
            let x = random_point(&mut rng, bs.n(), &sets, false);
            let lhs = adjoint(&g.mul(&h), &x, &sets).unwrap();
            let rhs = adjoint(&g, &adjoint(&h, &x, &sets).unwrap(), &sets).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn symbolic_substitution_matches_conjugation() {
        let (bs, sets) = build_block_structure(&[1, 2, 2, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = {
            use crate::poly::Polynomial;
            let a = &Polynomial::var(r(1, 2)) * &Polynomial::var(r(2, 4));
            let b = &Polynomial::var(r(1, 3)) * &Polynomial::var(r(3, 4));
            &a + &b
        };
        for _ in 0..10 {
            let i = rng.random_range(1..bs.n());
            let j = rng.random_range(i + 1..=bs.n());
            let t = rat(rng.random_range(-5..=5));
            let q = substitute_elementary(&p, i, j, &t, &sets);
            let g = GroupElement::elementary_unipotent(bs.n(), i, j, t).unwrap();
            let x = random_point(&mut rng, bs.n(), &sets, false);
            let gx = adjoint(&g, &x, &sets).unwrap();
            // f(Ad_g x) computed two ways.
            assert_eq!(
                q.evaluate(x.values()).unwrap(),
                p.evaluate(gx.values()).unwrap()
            );
        }
    }

    #[test]
    fn unipotent_matches_substitution_rule() {
        // Conjugation by g_{i,j}(t) adds t times row j to row i and
        // subtracts t times column i from column j.
        let (bs, sets) = build_block_structure(&[2, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let x = random_point(&mut rng, bs.n(), &sets, false);
            let i = rng.random_range(1..bs.n());
            let j = rng.random_range(i + 1..=bs.n());
            let t = rat(rng.random_range(-9..=9));
            let g = GroupElement::elementary_unipotent(bs.n(), i, j, t.clone()).unwrap();
            let y = adjoint(&g, &x, &sets).unwrap();
            let mut expected: BTreeMap<Root, Rat> = BTreeMap::new();
            for (&root, v) in x.values() {
                let mut v = v.clone();
                if root.row == i && j < root.col {
                    if let Some(w) = x.get(r(j, root.col)) {
                        v += &t * w;
                    }
                }
                if root.col == j && root.row < i {
                    if let Some(w) = x.get(r(root.row, i)) {
                        v -= &t * w;
                    }
                }
                expected.insert(root, v);
            }
            for (&root, v) in y.values() {
                assert_eq!(v, &expected[&root], "cell {root}");
            }
        }
    }
}
