//! Exact Jacobian ranks for the independence checks.

use std::collections::BTreeMap;

use num::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::invariants::InvariantFamily;
use crate::point::PointM;
use crate::poly::Polynomial;
use crate::rat::{rat, Rat};
use crate::ratexpr::RationalExpr;
use crate::roots::{Root, RootSets};

/// Row-reduction rank over the rationals, exact.
pub fn rank_exact(mut m: Vec<Vec<Rat>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < rows && col < cols {
        let pivot = (rank..rows).find(|&i| !m[i][col].is_zero());
        let Some(pivot) = pivot else {
            col += 1;
            continue;
        };
        m.swap(rank, pivot);
        let inv = Rat::from_integer(1.into()) / m[rank][col].clone();
        for j in col..cols {
            let v = m[rank][j].clone() * inv.clone();
            m[rank][j] = v;
        }
        for i in 0..rows {
            if i != rank && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in col..cols {
                    let delta = factor.clone() * m[rank][j].clone();
                    m[i][j] = m[i][j].clone() - delta;
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

fn gradient_of_poly(p: &Polynomial, at: &BTreeMap<Root, Rat>, vars: &[Root]) -> Result<Vec<Rat>> {
    vars.iter()
        .map(|&v| p.derivative(v).evaluate(at))
        .collect()
}

/// Gradient of num/den by the quotient rule, evaluated exactly; None when
/// the denominator vanishes at the point.
fn gradient_of_expr(
    f: &RationalExpr,
    at: &BTreeMap<Root, Rat>,
    vars: &[Root],
) -> Result<Option<Vec<Rat>>> {
    let den = f.den().evaluate(at)?;
    if den.is_zero() {
        return Ok(None);
    }
    let num = f.num().evaluate(at)?;
    let den_sq = den.clone() * den.clone();
    let mut grad = Vec::with_capacity(vars.len());
    for &v in vars {
        let dn = f.num().derivative(v).evaluate(at)?;
        let dd = f.den().derivative(v).evaluate(at)?;
        grad.push((dn * den.clone() - num.clone() * dd) / den_sq.clone());
    }
    Ok(Some(grad))
}

fn random_integer_point(rng: &mut impl Rng, n: u32, sets: &RootSets) -> PointM {
    let values: BTreeMap<Root, Rat> = sets
        .m()
        .iter()
        .map(|&root| {
            let mut v = 0i64;
            while v == 0 {
                v = rng.random_range(-20..=20);
            }
            (root, rat(v))
        })
        .collect();
    PointM::new(n, sets, values).expect("full domain")
}

/// Exact rank of the Jacobian of the polynomial family {M_xi, L_phi} at a
/// random integer point, retried on degeneracy.
pub fn unipotent_family_rank(
    family: &InvariantFamily,
    sets: &RootSets,
    n: u32,
    rng: &mut impl Rng,
    resamples: usize,
) -> Result<usize> {
    let vars: Vec<Root> = sets.m().iter().copied().collect();
    let target = family.minors().len() + family.lpolys().len();
    let mut best = 0;
    for _ in 0..=resamples {
        let at = random_integer_point(rng, n, sets).values().clone();
        let mut rows = Vec::new();
        for p in family.minors().values().chain(family.lpolys().values()) {
            rows.push(gradient_of_poly(p, &at, &vars)?);
        }
        let rank = rank_exact(rows);
        best = best.max(rank);
        if best == target {
            return Ok(best);
        }
    }
    Ok(best)
}

/// Exact rank of the Jacobian of the rational family {A_psi, B_psi} at a
/// random integer point where every denominator is nonzero.
pub fn borel_family_rank(
    family: &InvariantFamily,
    sets: &RootSets,
    n: u32,
    rng: &mut impl Rng,
    resamples: usize,
) -> Result<usize> {
    let vars: Vec<Root> = sets.m().iter().copied().collect();
    let target = family.a_invariants().len() + family.b_invariants().len();
    if target == 0 {
        return Ok(0);
    }
    let mut best = 0;
    'outer: for _ in 0..=resamples {
        let at = random_integer_point(rng, n, sets).values().clone();
        let mut rows = Vec::new();
        for f in family
            .a_invariants()
            .values()
            .chain(family.b_invariants().values())
        {
            match gradient_of_expr(f, &at, &vars)? {
                Some(row) => rows.push(row),
                None => continue 'outer,
            }
        }
        let rank = rank_exact(rows);
        best = best.max(rank);
        if best == target {
            return Ok(best);
        }
    }
    if best == 0 {
        return Err(Error::DegenerateInput(
            "all sampled points degenerate for the Borel family".into(),
        ));
    }
    Ok(best)
}
