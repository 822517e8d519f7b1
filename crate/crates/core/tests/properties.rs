//! Structural properties over random block structures and random
//! polynomials: base postconditions, certificate soundness, the forest
//! structure behind torus reduction, ring axioms, and exact scaling laws.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pinv::action::{adjoint, random_point, substitute_elementary, GroupElement};
use pinv::base::{comparable, root_gt};
use pinv::canonical::{make_y_point, t_reduce};
use pinv::invariants::{restrict_pi, a_invariant};
use pinv::jsonio::{poly_from_json, poly_to_json};
use pinv::poly::{Monomial, Polynomial};
use pinv::psi::{psi_numbering, Psi1Witness};
use pinv::rat::{rat, Rat};
use pinv::ratexpr::RationalExpr;
use pinv::roots::{r, Root};
use pinv::verify::Structure;

fn block_sizes() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..=4, 1..=5)
}

/// Union-find cycle count: edges that join already-connected indices.
fn cycle_rank(n: u32, edges: &BTreeSet<Root>) -> usize {
    let mut parent: Vec<usize> = (0..=(n as usize)).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    let mut cycles = 0;
    for e in edges {
        let (a, b) = (find(&mut parent, e.row as usize), find(&mut parent, e.col as usize));
        if a == b {
            cycles += 1;
        } else {
            parent[a] = b;
        }
    }
    cycles
}

fn connected(n: u32, edges: &BTreeSet<Root>, a: u32, b: u32) -> bool {
    let mut parent: Vec<usize> = (0..=(n as usize)).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for e in edges {
        let (x, y) = (find(&mut parent, e.row as usize), find(&mut parent, e.col as usize));
        if x != y {
            parent[x] = y;
        }
    }
    find(&mut parent, a as usize) == find(&mut parent, b as usize)
}

/// Layer-peeling reimplementation that walks the roots in a shuffled order.
fn base_layers_shuffled(m: &BTreeSet<Root>, seed: u64) -> Vec<BTreeSet<Root>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut remaining: Vec<Root> = m.iter().copied().collect();
    remaining.shuffle(&mut rng);
    let mut layers = Vec::new();
    while !remaining.is_empty() {
        let minimal: Vec<Root> = remaining
            .iter()
            .copied()
            .filter(|&g| !remaining.iter().any(|&x| root_gt(g, x)))
            .collect();
        remaining.retain(|&g| !minimal.contains(&g) && !minimal.iter().any(|&x| root_gt(g, x)));
        remaining.shuffle(&mut rng);
        layers.push(minimal.into_iter().collect());
    }
    layers
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn base_is_stable_and_well_formed(sizes in block_sizes(), seed in any::<u64>()) {
        let st = Structure::new(&sizes).unwrap();
        let s = st.ext.s();

        // Identical layers under any iteration order.
        let shuffled = base_layers_shuffled(st.sets.m(), seed);
        prop_assert_eq!(st.ext.layers(), &shuffled[..]);

        // Antichain, covering, one root per row and column.
        for &a in s {
            for &b in s {
                prop_assert!(a == b || !comparable(a, b));
            }
        }
        for &gamma in st.sets.m() {
            if !s.contains(&gamma) {
                prop_assert!(s.iter().any(|&xi| root_gt(gamma, xi)));
            }
        }
        let rows: BTreeSet<u32> = s.iter().map(|x| x.row).collect();
        let cols: BTreeSet<u32> = s.iter().map(|x| x.col).collect();
        prop_assert_eq!(rows.len(), s.len());
        prop_assert_eq!(cols.len(), s.len());

        // Count formula for the nilradical.
        let sq: u32 = sizes.iter().map(|&x| x * x).sum();
        let n = st.bs.n();
        prop_assert_eq!(st.sets.dim_m(), ((n * n - sq) / 2) as usize);
    }

    #[test]
    fn psi_certificates_are_sound(sizes in block_sizes()) {
        let st = Structure::new(&sizes).unwrap();
        let psi_set = st.psi.all();
        let order = psi_numbering(&psi_set);
        let number: BTreeMap<Root, usize> =
            order.iter().enumerate().map(|(k, &root)| (root, k)).collect();

        for (&psi, w) in st.psi.psi1() {
            prop_assert_eq!(w.xi1.row, psi.row);
            prop_assert_eq!(w.xi2.row, w.xi3.row);
            prop_assert_eq!(w.xi1.col, w.xi2.col);
            prop_assert_eq!(w.xi3.col, psi.col);
            prop_assert!(psi.row < w.xi2.row && w.xi1.col < psi.col);
            prop_assert!(st.ext.phi().contains(&w.xi1));
            prop_assert!(st.ext.phi().contains(&w.xi2));
            prop_assert!(st.ext.in_extended_base(w.xi3));
            prop_assert_eq!(w.xi3_in_base, st.ext.s().contains(&w.xi3));
            // Solving order: witnesses come strictly earlier.
            for root in [w.xi1, w.xi2, w.xi3] {
                if let Some(k) = number.get(&root) {
                    prop_assert!(k < &number[&psi]);
                }
            }
        }

        for (&psi, c) in st.psi.psi2() {
            // Blocks strictly between the anchor blocks stay within k.
            for b in (c.s + 1)..c.t {
                prop_assert!(st.bs.size(b) <= c.k);
            }
            prop_assert!(c.k < st.bs.size(c.t));
            prop_assert!(st.ext.phi().contains(&c.xi1));
            prop_assert_eq!(c.xi1.row, st.bs.prefix(c.s - 1) + 1);
            prop_assert!(st.ext.s().contains(&c.gamma1));
            prop_assert!(st.ext.s().contains(&c.gamma3));
            prop_assert!(st.ext.s().contains(&c.gamma4));
            prop_assert!(st.ext.s().contains(&c.gamma5));
            for root in [Some(c.xi1), c.xi2, c.xi3].into_iter().flatten() {
                if let Some(k) = number.get(&root) {
                    prop_assert!(k < &number[&psi]);
                }
            }
        }

        // The non-Psi cells form a forest and every Psi cell closes a
        // cycle inside its own tree; this is exactly what torus reduction
        // and the triangular solve rely on.
        let n = st.bs.n();
        let support = st.ext.support();
        let free: BTreeSet<Root> = support.difference(&psi_set).copied().collect();
        prop_assert_eq!(cycle_rank(n, &free), 0);
        prop_assert_eq!(cycle_rank(n, &support), psi_set.len());
        for &psi in &psi_set {
            prop_assert!(connected(n, &free, psi.row, psi.col));
        }
    }

    #[test]
    fn torus_reduction_round_trip(sizes in block_sizes(), seed in any::<u64>()) {
        let st = Structure::new(&sizes).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: BTreeMap<Root, Rat> = st
            .ext
            .support()
            .into_iter()
            .map(|root| {
                let mut p = 0i64;
                while p == 0 {
                    p = rng.random_range(-12..=12);
                }
                (root, Rat::new(p.into(), rng.random_range(1..=3).into()))
            })
            .collect();
        if coeffs.is_empty() {
            return Ok(());
        }
        let y = make_y_point(&st.bs, &st.sets, &st.ext, &coeffs).unwrap();
        let (x, transcript) = t_reduce(&y, &st.bs, &st.sets, &st.ext, &st.psi).unwrap();
        let g = transcript.product(st.bs.n()).unwrap();
        prop_assert_eq!(&adjoint(&g, &y.point, &st.sets).unwrap(), &x.point);
        for op in &transcript.ops {
            prop_assert!((1..=5).contains(&op.step));
        }
        // Reducing the canonical representative is a no-op.
        let y2 = pinv::canonical::SlicePoint {
            point: x.point.clone(),
            kind: pinv::canonical::SliceKind::Y,
            coefficients: BTreeMap::new(),
        };
        let (x2, t2) = t_reduce(&y2, &st.bs, &st.sets, &st.ext, &st.psi).unwrap();
        prop_assert_eq!(&x2.point, &x.point);
        prop_assert!(t2.ops.is_empty());
    }
}

fn arb_poly() -> impl Strategy<Value = Polynomial> {
    let vars = [r(1, 2), r(1, 3), r(2, 3), r(2, 4), r(3, 4), r(1, 4)];
    prop::collection::vec(
        (
            prop::collection::vec((0usize..vars.len(), 1u32..=2), 0..=3),
            -5i64..=5,
        ),
        0..=4,
    )
    .prop_map(move |terms| {
        let mut p = Polynomial::zero();
        for (mono, coef) in terms {
            let pairs: Vec<(Root, u32)> = mono.into_iter().map(|(v, e)| (vars[v], e)).collect();
            p.add_term(Monomial::from_pairs(&pairs), rat(coef));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms(p in arb_poly(), q in arb_poly(), s in arb_poly()) {
        prop_assert_eq!(&(&p + &q) * &s, &(&p * &s) + &(&q * &s));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &s, &p * &(&q * &s));
        prop_assert_eq!(&p - &p, Polynomial::zero());
    }

    #[test]
    fn evaluation_is_a_ring_map(p in arb_poly(), q in arb_poly(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let assignment: BTreeMap<Root, Rat> = [r(1, 2), r(1, 3), r(2, 3), r(2, 4), r(3, 4), r(1, 4)]
            .into_iter()
            .map(|root| (root, Rat::new(rng.random_range(-6i64..=6).into(), rng.random_range(1i64..=3).into())))
            .collect();
        let pv = p.evaluate(&assignment).unwrap();
        let qv = q.evaluate(&assignment).unwrap();
        prop_assert_eq!((&p * &q).evaluate(&assignment).unwrap(), pv.clone() * qv.clone());
        prop_assert_eq!((&p + &q).evaluate(&assignment).unwrap(), pv + qv);
    }

    #[test]
    fn serialization_round_trip(p in arb_poly()) {
        let json = poly_to_json(&p);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: pinv::jsonio::PolyJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(poly_from_json(&parsed).unwrap(), p);
    }
}

#[test]
fn minor_values_scale_by_torus_weight() {
    for sizes in [vec![2, 1, 3, 2], vec![2, 2, 3, 3, 2]] {
        let st = Structure::new(&sizes).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = st.bs.n();
        for _ in 0..20 {
            let entries: Vec<Rat> = (0..n)
                .map(|_| {
                    let mut v = 0;
                    while v == 0 {
                        v = rng.random_range(-9i64..=9);
                    }
                    rat(v)
                })
                .collect();
            let t = GroupElement::diagonal_torus(&entries).unwrap();
            let x = random_point(&mut rng, n, &st.sets, false);
            let tx = adjoint(&t, &x, &st.sets).unwrap();
            for &xi in st.ext.s() {
                let (rows, cols) = pinv::invariants::s_gamma(xi, st.ext.s());
                let weight = rows
                    .iter()
                    .map(|&i| entries[(i - 1) as usize].clone())
                    .fold(Rat::one(), |a, b| a * b)
                    / cols
                        .iter()
                        .map(|&j| entries[(j - 1) as usize].clone())
                        .fold(Rat::one(), |a, b| a * b);
                let minor = &st.family.minors()[&xi];
                let before = minor.evaluate(x.values()).unwrap();
                let after = minor.evaluate(tx.values()).unwrap();
                assert_eq!(after, weight * before, "minor at {xi} in {sizes:?}");
            }
        }
    }
}

#[test]
fn polynomial_families_are_symbolically_invariant() {
    // Conjugation as a substitution on coordinate functions fixes every
    // minor and chain sum, identically in the matrix entries.
    let st = Structure::new(&[2, 1, 3, 2]).unwrap();
    let n = st.bs.n();
    for i in 1..n {
        for j in (i + 1)..=n {
            for t in [rat(1), rat(-3), Rat::new(2.into(), 5.into())] {
                for (root, p) in st.family.minors().iter().chain(st.family.lpolys()) {
                    let image = substitute_elementary(p, i, j, &t, &st.sets);
                    assert_eq!(&image, p, "family member at {root} moved under ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn first_series_witness_choice_matters_but_both_are_invariant() {
    // (3,4,3,2) admits two witness squares for the root (4,10); they give
    // genuinely different invariant functions (their slice images differ),
    // and both are exactly invariant under conjugation.
    let st = Structure::new(&[3, 4, 3, 2]).unwrap();
    let psi_set = st.psi.all();
    let deterministic = st.psi.psi1()[&r(4, 10)];
    assert_eq!(
        (deterministic.xi1, deterministic.xi2, deterministic.xi3),
        (r(4, 9), r(5, 9), r(5, 10))
    );
    let alternative = Psi1Witness {
        xi1: r(4, 8),
        xi2: r(5, 8),
        xi3: r(5, 10),
        xi3_in_base: true,
        gamma: Some(st.ext.pair_of(r(5, 8)).unwrap().xi),
    };
    let a_det = a_invariant(r(4, 10), &deterministic, &st.family).unwrap();
    let a_alt = a_invariant(r(4, 10), &alternative, &st.family).unwrap();

    let img_det = restrict_pi(&a_det, &st.ext, &psi_set).unwrap();
    let img_alt = restrict_pi(&a_alt, &st.ext, &psi_set).unwrap();
    assert!(
        !img_det.expr_eq(&img_alt),
        "images unexpectedly agree: {img_det} vs {img_alt}"
    );
    assert!(!a_det.expr_eq(&a_alt));

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    while checked < 20 {
        let g = pinv::action::random_borel(&mut rng, st.bs.n(), 10);
        let x = random_point(&mut rng, st.bs.n(), &st.sets, true);
        let gx = adjoint(&g, &x, &st.sets).unwrap();
        for expr in [&a_det, &a_alt] {
            let before = expr.evaluate(x.values()).unwrap();
            let after = expr.evaluate(gx.values()).unwrap();
            if let (Some(b), Some(a)) = (before, after) {
                assert_eq!(a, b);
                checked += 1;
            }
        }
    }
}

#[test]
fn restriction_images_match_the_closed_forms_up_to_sign() {
    // First series: c_psi c~(xi2) / (c~(xi1) c~(xi3)) with c~ = 1 outside
    // Psi and the xi3-in-base case dropping the xi3 factor; second series:
    // c_psi c~(xi1) divided by c~(xi2) or c~(xi3) depending on the case.
    // Signs of the restricted minors may flip the whole image.
    for sizes in [
        vec![2, 1, 3, 2],
        vec![2, 3, 2],
        vec![1, 2, 2, 1],
        vec![2, 2, 3, 3, 2],
        vec![3, 4, 3, 2],
        vec![2, 1, 3, 1, 4, 2],
    ] {
        let st = Structure::new(&sizes).unwrap();
        let psi_set = st.psi.all();
        let tilde = |root: Root| -> Polynomial {
            if psi_set.contains(&root) {
                Polynomial::var(root)
            } else {
                Polynomial::one()
            }
        };
        for (&psi, w) in st.psi.psi1() {
            let image = restrict_pi(&st.family.a_invariants()[&psi], &st.ext, &psi_set).unwrap();
            let num = &Polynomial::var(psi) * &tilde(w.xi2);
            let den = if w.xi3_in_base {
                tilde(w.xi1)
            } else {
                &tilde(w.xi1) * &tilde(w.xi3)
            };
            let expected = RationalExpr::new(num, den).unwrap();
            let negated =
                RationalExpr::new(-expected.num(), expected.den().clone()).unwrap();
            assert!(
                image.expr_eq(&expected) || image.expr_eq(&negated),
                "first series at {psi} in {sizes:?}: {image}"
            );
        }
        for (&psi, c) in st.psi.psi2() {
            let image = restrict_pi(&st.family.b_invariants()[&psi], &st.ext, &psi_set).unwrap();
            let num = &Polynomial::var(psi) * &tilde(c.xi1);
            let den = match c.case {
                pinv::psi::CaseTag::Equal => Polynomial::one(),
                pinv::psi::CaseTag::SLess => tilde(c.xi2.unwrap()),
                pinv::psi::CaseTag::SGreater => tilde(c.xi3.unwrap()),
            };
            let expected = RationalExpr::new(num, den).unwrap();
            let negated =
                RationalExpr::new(-expected.num(), expected.den().clone()).unwrap();
            assert!(
                image.expr_eq(&expected) || image.expr_eq(&negated),
                "second series at {psi} in {sizes:?}: {image}"
            );
        }
        // Base minors restrict to a unit.
        for minor in st.family.minors().values() {
            let image = pinv::invariants::restrict_poly(minor, &st.ext, &psi_set);
            let v = image.constant_term();
            assert!(image.variables().is_empty());
            assert!(v.clone() * v == Rat::one());
        }
    }
}

#[test]
fn zero_coefficient_and_support_violations_are_rejected() {
    let st = Structure::new(&[1, 2, 2, 1]).unwrap();
    let mut coeffs: BTreeMap<Root, Rat> = st
        .ext
        .support()
        .into_iter()
        .map(|root| (root, rat(1)))
        .collect();
    assert!(make_y_point(&st.bs, &st.sets, &st.ext, &coeffs).is_ok());
    coeffs.insert(r(1, 3), rat(2));
    assert!(make_y_point(&st.bs, &st.sets, &st.ext, &coeffs).is_err());
    coeffs.remove(&r(1, 3));
    coeffs.insert(r(2, 4), Rat::zero());
    assert!(make_y_point(&st.bs, &st.sets, &st.ext, &coeffs).is_err());
}
