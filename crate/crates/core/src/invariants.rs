//! The invariant families.
//!
//! For each base root xi the minor M_xi of the formal matrix is invariant
//! under the unipotent action; for each phi in Phi the chain sum L_phi (and
//! its equal combined-minor form mixing first and second powers of the
//! formal matrix) extends the family. On the roots of the two Psi series
//! these combine into rational functions A_psi and B_psi invariant under
//! the full Borel action. The restriction map evaluates any of them on the
//! canonical slice, yielding rational expressions in the slice coefficients.

use std::collections::{BTreeMap, BTreeSet};

use crate::base::{AdmissiblePair, ExtendedBase};
use crate::error::{Error, Result};
use crate::matrix::{poly_det_capped, PolyMatrix};
use crate::poly::{Polynomial, VarFate};
use crate::psi::{CaseTag, Psi1Witness, Psi2Certificate, PsiCertificates};
use crate::psi::nested_layers;
use crate::ratexpr::RationalExpr;
use crate::roots::{BlockStructure, Root, RootSets};

/// Rows I and columns J of the minor attached to gamma: gamma's own row and
/// column joined with the base roots strictly inside gamma.
pub fn s_gamma(gamma: Root, s: &BTreeSet<Root>) -> (Vec<u32>, Vec<u32>) {
    let mut rows = vec![gamma.row];
    let mut cols = vec![gamma.col];
    for xi in s {
        if xi.row > gamma.row && xi.col < gamma.col {
            rows.push(xi.row);
            cols.push(xi.col);
        }
    }
    rows.sort_unstable();
    cols.sort_unstable();
    (rows, cols)
}

/// Cap for the structured determinants of the invariant families. The
/// nesting depth of the base bounds these well below the raw-determinant
/// default, but wide blocks can push past it.
const FAMILY_DET_CAP: usize = 16;

/// Minor of the formal matrix on the index sets from `s_gamma`.
pub fn minor_m(gamma: Root, s: &BTreeSet<Root>, formal: &PolyMatrix) -> Result<Polynomial> {
    let (rows, cols) = s_gamma(gamma, s);
    poly_det_capped(&formal.submatrix(&rows, &cols), FAMILY_DET_CAP)
}

/// Chain-sum form: sum over the splitting index m of the bridge of
/// M_{(row(xi), m)} * M_{(m, col(xi'))}.
pub fn l_invariant(
    pair: &AdmissiblePair,
    s: &BTreeSet<Root>,
    sets: &RootSets,
    formal: &PolyMatrix,
) -> Result<Polynomial> {
    if !sets.in_delta_r(pair.bridge) {
        return Err(Error::NotAdmissible(pair.xi, pair.xi_prime));
    }
    let mut acc = Polynomial::zero();
    for m in pair.bridge.row..=pair.bridge.col {
        let left = minor_m(Root::new(pair.xi.row, m), s, formal)?;
        let right = minor_m(Root::new(m, pair.xi_prime.col), s, formal)?;
        acc = &acc + &(&left * &right);
    }
    Ok(acc)
}

/// Combined-minor form: block determinant with the first power of the
/// formal matrix on columns J' and its square on columns J,
///
/// ```text
/// | X_I^J'   (X^2)_I^J |
/// | 0        X_I'^J    |
/// ```
///
/// where I, J1 index the minor of xi, I2, J the minor of xi', and
/// I' = I2 minus the row of xi', J' = J1 minus the column of xi.
pub fn combined_minor(
    pair: &AdmissiblePair,
    s: &BTreeSet<Root>,
    sets: &RootSets,
    formal: &PolyMatrix,
    squared: &PolyMatrix,
) -> Result<Polynomial> {
    if !sets.in_delta_r(pair.bridge) {
        return Err(Error::NotAdmissible(pair.xi, pair.xi_prime));
    }
    let (rows_i, cols_j1) = s_gamma(pair.xi, s);
    let (rows_i2, cols_j) = s_gamma(pair.xi_prime, s);
    let rows_i_prime: Vec<u32> = rows_i2
        .iter()
        .copied()
        .filter(|&row| row != pair.xi_prime.row)
        .collect();
    let cols_j_prime: Vec<u32> = cols_j1
        .iter()
        .copied()
        .filter(|&col| col != pair.xi.col)
        .collect();

    let top = rows_i.len();
    let left = cols_j_prime.len();
    let size = top + rows_i_prime.len();
    debug_assert_eq!(size, left + cols_j.len());

    let block = PolyMatrix::from_fn(size, size, |i, j| {
        match (i < top, j < left) {
            (true, true) => formal
                .at((rows_i[i] - 1) as usize, (cols_j_prime[j] - 1) as usize)
                .clone(),
            (true, false) => squared
                .at((rows_i[i] - 1) as usize, (cols_j[j - left] - 1) as usize)
                .clone(),
            (false, true) => Polynomial::zero(),
            (false, false) => formal
                .at(
                    (rows_i_prime[i - top] - 1) as usize,
                    (cols_j[j - left] - 1) as usize,
                )
                .clone(),
        }
    });
    poly_det_capped(&block, FAMILY_DET_CAP)
}

/// First-series quotient built from a witness square.
pub fn a_invariant(
    psi: Root,
    witness: &Psi1Witness,
    family: &InvariantFamily,
) -> Result<RationalExpr> {
    let l_psi = family.l_or_err(psi)?;
    let l_xi2 = family.l_or_err(witness.xi2)?;
    let l_xi1 = family.l_or_err(witness.xi1)?;
    let num = l_psi * l_xi2;
    let den = if witness.xi3_in_base {
        let gamma = witness.gamma.ok_or(Error::MissingWitness {
            root: psi,
            reason: "xi3 in the base but no opening root recorded".into(),
        })?;
        let m_gamma = family.minor(gamma)?;
        let m_xi3 = family.minor(witness.xi3)?;
        &(l_xi1 * &m_gamma) * &m_xi3
    } else {
        l_xi1 * family.l_or_err(witness.xi3)?
    };
    RationalExpr::new(num, den)
}

/// Second-series quotient built from a certificate.
pub fn b_invariant(
    psi: Root,
    cert: &Psi2Certificate,
    family: &InvariantFamily,
    s: &BTreeSet<Root>,
) -> Result<RationalExpr> {
    let l_psi = family.l_or_err(psi)?;
    let l_xi1 = family.l_or_err(cert.xi1)?;

    let d = match cert.case {
        CaseTag::Equal => {
            &(&family.minor(cert.gamma1)? * &family.minor(cert.gamma3)?)
                * &family.minor(cert.gamma5)?
        }
        CaseTag::SLess => {
            let xi2 = cert.xi2.ok_or(Error::CaseMismatch(psi))?;
            &family.minor(cert.gamma1)? * family.l_or_err(xi2)?
        }
        CaseTag::SGreater => {
            let xi3 = cert.xi3.ok_or(Error::CaseMismatch(psi))?;
            &family.minor(cert.gamma3)? * family.l_or_err(xi3)?
        }
    };

    if cert.simple {
        return RationalExpr::new(l_psi * l_xi1, d);
    }

    let (layer1_g5, _) = nested_layers(cert.gamma5, s);
    let (layer1_g4, layer2_g4) = nested_layers(cert.gamma4, s);

    let mut num = l_xi1 * l_psi;
    for mu in layer1_g5 {
        num = &num * &family.minor(mu)?;
    }
    let mut den = d;
    for mu in layer1_g4 {
        den = &den * &family.minor(mu)?;
    }
    for mu in layer2_g4 {
        den = &den * &family.minor(mu)?;
    }
    RationalExpr::new(num, den)
}

/// All invariants of one block structure, built eagerly.
#[derive(Clone, Debug)]
pub struct InvariantFamily {
    minors: BTreeMap<Root, Polynomial>,
    lpolys: BTreeMap<Root, Polynomial>,
    a_inv: BTreeMap<Root, RationalExpr>,
    b_inv: BTreeMap<Root, RationalExpr>,
    s: BTreeSet<Root>,
    formal: PolyMatrix,
}

impl InvariantFamily {
    /// Minors for the base, chain sums for Phi, quotients for both series.
    pub fn build(
        bs: &BlockStructure,
        sets: &RootSets,
        ext: &ExtendedBase,
        psi: &PsiCertificates,
    ) -> Result<InvariantFamily> {
        let formal = PolyMatrix::formal(bs.n(), sets);
        let mut family = InvariantFamily {
            minors: BTreeMap::new(),
            lpolys: BTreeMap::new(),
            a_inv: BTreeMap::new(),
            b_inv: BTreeMap::new(),
            s: ext.s().clone(),
            formal,
        };
        for &xi in ext.s() {
            let p = minor_m(xi, ext.s(), &family.formal)?;
            family.minors.insert(xi, p);
        }
        for pair in ext.pairs() {
            let p = l_invariant(pair, ext.s(), sets, &family.formal)?;
            family.lpolys.insert(pair.phi, p);
        }
        for (&root, witness) in psi.psi1() {
            let a = a_invariant(root, witness, &family)?;
            family.a_inv.insert(root, a);
        }
        for (&root, cert) in psi.psi2() {
            let b = b_invariant(root, cert, &family, ext.s())?;
            family.b_inv.insert(root, b);
        }
        Ok(family)
    }

    /// Minor of an arbitrary nilradical root (memoized for the base only;
    /// the rest are cheap and recomputed).
    pub fn minor(&self, gamma: Root) -> Result<Polynomial> {
        if let Some(p) = self.minors.get(&gamma) {
            return Ok(p.clone());
        }
        minor_m(gamma, &self.s, &self.formal)
    }

    pub fn minors(&self) -> &BTreeMap<Root, Polynomial> {
        &self.minors
    }

    pub fn lpolys(&self) -> &BTreeMap<Root, Polynomial> {
        &self.lpolys
    }

    pub fn a_invariants(&self) -> &BTreeMap<Root, RationalExpr> {
        &self.a_inv
    }

    pub fn b_invariants(&self) -> &BTreeMap<Root, RationalExpr> {
        &self.b_inv
    }

    fn l_or_err(&self, phi: Root) -> Result<&Polynomial> {
        self.lpolys.get(&phi).ok_or(Error::MissingWitness {
            root: phi,
            reason: "no chain sum for this root".into(),
        })
    }
}

/// Restriction of a polynomial to the canonical slice: Psi coordinates stay
/// as variables, the rest of the extended base becomes 1, everything else 0.
pub fn restrict_poly(p: &Polynomial, ext: &ExtendedBase, psi: &BTreeSet<Root>) -> Polynomial {
    p.substitute_pattern(|root| {
        if psi.contains(&root) {
            VarFate::Keep
        } else if ext.in_extended_base(root) {
            VarFate::One
        } else {
            VarFate::Zero
        }
    })
}

/// Restriction of a quotient; errors when the denominator dies on the slice.
pub fn restrict_pi(
    f: &RationalExpr,
    ext: &ExtendedBase,
    psi: &BTreeSet<Root>,
) -> Result<RationalExpr> {
    let num = restrict_poly(f.num(), ext, psi);
    let den = restrict_poly(f.den(), ext, psi);
    if den.is_zero() {
        return Err(Error::VanishingDenominator);
    }
    RationalExpr::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::poly_det;
    use crate::psi::compute_psi;
    use crate::rat::Rat;
    use crate::roots::{build_block_structure, r};
    use num::One;

    struct Ctx {
        bs: BlockStructure,
        sets: RootSets,
        ext: ExtendedBase,
        psi: PsiCertificates,
        family: InvariantFamily,
        formal: PolyMatrix,
        squared: PolyMatrix,
    }

    fn ctx(sizes: &[u32]) -> Ctx {
        let (bs, sets) = build_block_structure(sizes).unwrap();
        let ext = ExtendedBase::compute(&bs, &sets).unwrap();
        let psi = compute_psi(&bs, &ext).unwrap();
        let family = InvariantFamily::build(&bs, &sets, &ext, &psi).unwrap();
        let formal = PolyMatrix::formal(bs.n(), &sets);
        let squared = formal.matmul(&formal);
        Ctx {
            bs,
            sets,
            ext,
            psi,
            family,
            formal,
            squared,
        }
    }

    fn x(i: u32, j: u32) -> Polynomial {
        Polynomial::var(r(i, j))
    }

    fn det2(a: Polynomial, b: Polynomial, c: Polynomial, d: Polynomial) -> Polynomial {
        &(&a * &d) - &(&b * &c)
    }

    #[test]
    fn s_gamma_2132() {
        let c = ctx(&[2, 1, 3, 2]);
        assert_eq!(
            s_gamma(r(1, 6), c.ext.s()),
            (vec![1, 2, 3], vec![3, 4, 6])
        );
        assert_eq!(s_gamma(r(2, 3), c.ext.s()), (vec![2], vec![3]));
        assert_eq!(s_gamma(r(4, 8), c.ext.s()), (vec![4, 6], vec![7, 8]));
    }

    #[test]
    fn minors_2132() {
        let c = ctx(&[2, 1, 3, 2]);
        assert_eq!(c.family.minor(r(2, 3)).unwrap(), x(2, 3));
        assert_eq!(
            c.family.minor(r(5, 8)).unwrap(),
            det2(x(5, 7), x(5, 8), x(6, 7), x(6, 8))
        );
        // 3x3 with a zero in a corner: four monomials.
        let m16 = c.family.minor(r(1, 6)).unwrap();
        assert_eq!(m16.num_terms(), 4);
    }

    #[test]
    fn l_expansions_2132() {
        let c = ctx(&[2, 1, 3, 2]);
        let l47 = &c.family.lpolys()[&r(4, 7)];
        let expected = &(&(&x(3, 4) * &x(4, 7)) + &(&x(3, 5) * &x(5, 7))) + &(&x(3, 6) * &x(6, 7));
        assert_eq!(l47, &expected);

        let l48 = &c.family.lpolys()[&r(4, 8)];
        let expected = &(&x(3, 4) * &det2(x(4, 7), x(4, 8), x(6, 7), x(6, 8)))
            + &(&x(3, 5) * &det2(x(5, 7), x(5, 8), x(6, 7), x(6, 8)));
        assert_eq!(l48, &expected);

        let l57 = &c.family.lpolys()[&r(5, 7)];
        let m15 = c.family.minor(r(1, 5)).unwrap();
        let m16 = c.family.minor(r(1, 6)).unwrap();
        let expected = &(&m15 * &x(5, 7)) + &(&m16 * &x(6, 7));
        assert_eq!(l57, &expected);
    }

    #[test]
    fn l_expansion_1221() {
        let c = ctx(&[1, 2, 2, 1]);
        let l24 = &c.family.lpolys()[&r(2, 4)];
        let expected = &(&x(1, 2) * &x(2, 4)) + &(&x(1, 3) * &x(3, 4));
        assert_eq!(l24, &expected);
    }

    #[test]
    fn combined_minor_equals_chain_sum_232() {
        let c = ctx(&[2, 3, 2]);
        for pair in c.ext.pairs() {
            let via_chain = l_invariant(pair, c.ext.s(), &c.sets, &c.formal).unwrap();
            let via_block =
                combined_minor(pair, c.ext.s(), &c.sets, &c.formal, &c.squared).unwrap();
            assert_eq!(via_chain, via_block, "phi = {}", pair.phi);
        }
        // The smallest instance is a single entry of the squared matrix.
        let pair = c.ext.pair_of(r(3, 6)).unwrap();
        let d = combined_minor(pair, c.ext.s(), &c.sets, &c.formal, &c.squared).unwrap();
        assert_eq!(&d, c.squared.at(1, 5));
    }

    #[test]
    fn mixed_block_determinant_factors_232() {
        // Crossing the index families of the (4,6) and (3,7) pairs yields a
        // block determinant that factors into complementary minors: the
        // denominator product of the first-series quotient at (3,7).
        let c = ctx(&[2, 3, 2]);
        let block = PolyMatrix::from_fn(3, 3, |i, j| match (i, j) {
            (0, 0) => x(1, 3),
            (1, 0) => x(2, 3),
            (2, 0) => Polynomial::zero(),
            (i, j) if i < 2 => c.squared.at(i, j + 4).clone(),
            (_, j) => x(5, (j + 5) as u32),
        });
        let d = poly_det(&block).unwrap();
        let product = &c.family.minor(r(1, 4)).unwrap() * &c.family.minor(r(4, 7)).unwrap();
        assert_eq!(d, product);
    }

    #[test]
    fn a_invariant_232() {
        let c = ctx(&[2, 3, 2]);
        let a = &c.family.a_invariants()[&r(3, 7)];
        let expected_num = &c.family.lpolys()[&r(3, 7)] * &c.family.lpolys()[&r(4, 6)];
        let expected_den = &(&c.family.lpolys()[&r(3, 6)] * &c.family.minor(r(1, 4)).unwrap())
            * &c.family.minor(r(4, 7)).unwrap();
        assert_eq!(a.num(), &expected_num);
        assert_eq!(a.den(), &expected_den);
    }

    #[test]
    fn a_invariants_22332() {
        let c = ctx(&[2, 2, 3, 3, 2]);
        let a = &c.family.a_invariants()[&r(5, 9)];
        let num = &c.family.lpolys()[&r(5, 9)] * &c.family.lpolys()[&r(6, 8)];
        let den = &(&c.family.lpolys()[&r(5, 8)] * &c.family.minor(r(3, 6)).unwrap())
            * &c.family.minor(r(6, 9)).unwrap();
        assert_eq!(a.num(), &num);
        assert_eq!(a.den(), &den);

        // The opening root of (9,11)'s pair is (6,9); torus weights cancel
        // with that choice (and only that choice).
        let a = &c.family.a_invariants()[&r(8, 12)];
        let num = &c.family.lpolys()[&r(8, 12)] * &c.family.lpolys()[&r(9, 11)];
        let den = &(&c.family.lpolys()[&r(8, 11)] * &c.family.minor(r(6, 9)).unwrap())
            * &c.family.minor(r(9, 12)).unwrap();
        assert_eq!(a.num(), &num);
        assert_eq!(a.den(), &den);
    }

    #[test]
    fn b_invariants_1221_and_22332() {
        let c = ctx(&[1, 2, 2, 1]);
        let b = &c.family.b_invariants()[&r(4, 6)];
        let num = &c.family.lpolys()[&r(4, 6)] * &c.family.lpolys()[&r(2, 4)];
        let den = &(&c.family.minor(r(1, 2)).unwrap() * &c.family.minor(r(5, 6)).unwrap())
            * &c.family.minor(r(2, 5)).unwrap();
        assert!(b.expr_eq(&RationalExpr::new(num, den).unwrap()));

        let c = ctx(&[2, 2, 3, 3, 2]);
        let b = &c.family.b_invariants()[&r(8, 11)];
        let num = &(&c.family.lpolys()[&r(8, 11)] * &c.family.lpolys()[&r(5, 8)])
            * &c.family.minor(r(6, 9)).unwrap();
        let den = &(&(&c.family.minor(r(4, 5)).unwrap() * &c.family.minor(r(5, 10)).unwrap())
            * &c.family.minor(r(10, 11)).unwrap())
            * &c.family.minor(r(7, 8)).unwrap();
        assert!(b.expr_eq(&RationalExpr::new(num, den).unwrap()));

        // The displayed reduced form: common nested-minor factor cancels.
        let b = &c.family.b_invariants()[&r(9, 11)];
        let num = &c.family.lpolys()[&r(9, 11)] * &c.family.lpolys()[&r(5, 9)];
        let den = &(&(&c.family.minor(r(4, 5)).unwrap() * &c.family.minor(r(5, 10)).unwrap())
            * &c.family.minor(r(10, 11)).unwrap())
            * &c.family.minor(r(7, 8)).unwrap();
        assert!(b.expr_eq(&RationalExpr::new(num, den).unwrap()));

        let b = &c.family.b_invariants()[&r(5, 8)];
        let num = &c.family.lpolys()[&r(5, 8)] * &c.family.lpolys()[&r(3, 5)];
        let den = &c.family.lpolys()[&r(6, 8)] * &c.family.minor(r(2, 3)).unwrap();
        assert!(b.expr_eq(&RationalExpr::new(num, den).unwrap()));
    }

    #[test]
    fn restriction_of_base_minors_is_unit() {
        for sizes in [
            vec![2, 1, 3, 2],
            vec![2, 3, 2],
            vec![1, 2, 2, 1],
            vec![2, 2, 3, 3, 2],
        ] {
            let c = ctx(&sizes);
            let psi_set = c.psi.all();
            for (&xi, minor) in c.family.minors() {
                let image = restrict_poly(minor, &c.ext, &psi_set);
                let value = image.constant_term();
                assert!(image.variables().is_empty(), "{xi} image not constant");
                assert!(
                    value.clone() * value.clone() == Rat::one(),
                    "{xi} restricts to {value}, want a unit"
                );
            }
        }
    }

    #[test]
    fn restriction_of_a_232_is_plain_coefficient() {
        let c = ctx(&[2, 3, 2]);
        let psi_set = c.psi.all();
        let a = &c.family.a_invariants()[&r(3, 7)];
        let image = restrict_pi(a, &c.ext, &psi_set).unwrap();
        let expected = RationalExpr::from_poly(Polynomial::var(r(3, 7)));
        assert!(image.expr_eq(&expected), "got {image}");
    }

    #[test]
    fn restriction_of_b_1221_is_negated_coefficient() {
        // The 2x2 minor at (2,5) restricts to -1, so the slice image of the
        // second-series quotient carries a sign.
        let c = ctx(&[1, 2, 2, 1]);
        let psi_set = c.psi.all();
        let b = &c.family.b_invariants()[&r(4, 6)];
        let image = restrict_pi(b, &c.ext, &psi_set).unwrap();
        let expected = RationalExpr::from_poly(-&Polynomial::var(r(4, 6)));
        assert!(image.expr_eq(&expected), "got {image}");
    }
}
