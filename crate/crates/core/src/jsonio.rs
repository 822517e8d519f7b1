//! JSON forms of the public data: diagrams, polynomials, invariants,
//! points, group elements and reduction transcripts. Rationals travel as
//! reduced "p/q" strings with positive denominator (the "/1" is omitted).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::action::GroupElement;
use crate::base::ExtendedBase;
use crate::canonical::{ReductionTranscript, TorusOp};
use crate::diagram::marked_cells;
use crate::error::{Error, Result};
use crate::invariants::InvariantFamily;
use crate::point::PointM;
use crate::poly::{Monomial, Polynomial};
use crate::psi::PsiCertificates;
use crate::rat::{format_rat, parse_rat, Rat};
use crate::ratexpr::RationalExpr;
use crate::roots::{BlockStructure, Root, RootSets};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellJson {
    pub row: u32,
    pub col: u32,
    pub mark: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramJson {
    pub n: u32,
    pub blocks: Vec<u32>,
    pub cells: Vec<CellJson>,
}

pub fn diagram_json(
    bs: &BlockStructure,
    ext: &ExtendedBase,
    psi: &PsiCertificates,
) -> DiagramJson {
    DiagramJson {
        n: bs.n(),
        blocks: bs.sizes().to_vec(),
        cells: marked_cells(ext, psi)
            .into_iter()
            .map(|(root, mark)| CellJson {
                row: root.row,
                col: root.col,
                mark: mark.label().to_string(),
            })
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VarJson {
    pub row: u32,
    pub col: u32,
    pub exp: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub coef: String,
    pub vars: Vec<VarJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

pub fn poly_to_json(p: &Polynomial) -> PolyJson {
    PolyJson {
        terms: p
            .terms()
            .map(|(mono, coef)| TermJson {
                coef: format_rat(coef),
                vars: mono
                    .vars()
                    .map(|(root, exp)| VarJson {
                        row: root.row,
                        col: root.col,
                        exp,
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn poly_from_json(j: &PolyJson) -> Result<Polynomial> {
    let mut p = Polynomial::zero();
    for term in &j.terms {
        let coef = parse_rat(&term.coef)?;
        let pairs: Vec<(Root, u32)> = term
            .vars
            .iter()
            .map(|v| {
                if v.row >= v.col || v.row == 0 {
                    Err(Error::InvalidInput(format!(
                        "bad variable ({}, {})",
                        v.row, v.col
                    )))
                } else {
                    Ok((Root::new(v.row, v.col), v.exp))
                }
            })
            .collect::<Result<_>>()?;
        p.add_term(Monomial::from_pairs(&pairs), coef);
    }
    Ok(p)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootJson {
    pub row: u32,
    pub col: u32,
}

impl From<Root> for RootJson {
    fn from(root: Root) -> RootJson {
        RootJson {
            row: root.row,
            col: root.col,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvariantJson {
    pub kind: String,
    pub root: RootJson,
    #[serde(skip_serializing_if = "serde_json::Value::is_null", default)]
    pub witnesses: serde_json::Value,
    pub num: PolyJson,
    pub den: PolyJson,
}

fn expr_invariant_json(
    kind: &str,
    root: Root,
    expr: &RationalExpr,
    witnesses: serde_json::Value,
) -> InvariantJson {
    InvariantJson {
        kind: kind.to_string(),
        root: root.into(),
        witnesses,
        num: poly_to_json(expr.num()),
        den: poly_to_json(expr.den()),
    }
}

/// Serialize the whole family, with witness data on the quotient series.
pub fn invariants_json(
    family: &InvariantFamily,
    ext: &ExtendedBase,
    psi: &PsiCertificates,
    which: &str,
) -> Result<Vec<InvariantJson>> {
    let mut out = Vec::new();
    let emit_m = matches!(which, "base" | "extended" | "all");
    let emit_l = matches!(which, "extended" | "all");
    let emit_a = matches!(which, "A" | "all");
    let emit_b = matches!(which, "B" | "all");
    if !(emit_m || emit_l || emit_a || emit_b) {
        return Err(Error::UnsupportedFormat(which.to_string()));
    }
    if emit_m {
        for (&root, p) in family.minors() {
            out.push(InvariantJson {
                kind: "M".into(),
                root: root.into(),
                witnesses: serde_json::Value::Null,
                num: poly_to_json(p),
                den: poly_to_json(&Polynomial::one()),
            });
        }
    }
    if emit_l {
        for (&root, p) in family.lpolys() {
            let pair = ext.pair_of(root).expect("every L root has a pair");
            out.push(InvariantJson {
                kind: "L".into(),
                root: root.into(),
                witnesses: serde_json::json!({
                    "pair": [RootJson::from(pair.xi), RootJson::from(pair.xi_prime)],
                    "bridge": RootJson::from(pair.bridge),
                }),
                num: poly_to_json(p),
                den: poly_to_json(&Polynomial::one()),
            });
        }
    }
    if emit_a {
        for (&root, expr) in family.a_invariants() {
            let w = &psi.psi1()[&root];
            let witnesses = serde_json::json!({
                "xi1": RootJson::from(w.xi1),
                "xi2": RootJson::from(w.xi2),
                "xi3": RootJson::from(w.xi3),
                "xi3_in_base": w.xi3_in_base,
                "gamma": w.gamma.map(RootJson::from),
            });
            out.push(expr_invariant_json("A", root, expr, witnesses));
        }
    }
    if emit_b {
        for (&root, expr) in family.b_invariants() {
            let c = &psi.psi2()[&root];
            let witnesses = serde_json::json!({
                "s": c.s, "t": c.t, "k": c.k,
                "xi1": RootJson::from(c.xi1),
                "gamma1": RootJson::from(c.gamma1),
                "gamma2": RootJson::from(c.gamma2),
                "gamma3": RootJson::from(c.gamma3),
                "gamma4": RootJson::from(c.gamma4),
                "gamma5": RootJson::from(c.gamma5),
                "xi2": c.xi2.map(RootJson::from),
                "xi3": c.xi3.map(RootJson::from),
                "case": match c.case {
                    crate::psi::CaseTag::Equal => "equal",
                    crate::psi::CaseTag::SLess => "sLess",
                    crate::psi::CaseTag::SGreater => "sGreater",
                },
                "simple": c.simple,
            });
            out.push(expr_invariant_json("B", root, expr, witnesses));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryJson {
    pub row: u32,
    pub col: u32,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointJson {
    pub n: u32,
    pub entries: Vec<EntryJson>,
}

/// Nonzero coordinates only.
pub fn point_to_json(p: &PointM) -> PointJson {
    PointJson {
        n: p.n(),
        entries: p
            .support()
            .map(|(root, v)| EntryJson {
                row: root.row,
                col: root.col,
                value: format_rat(v),
            })
            .collect(),
    }
}

pub fn point_from_json(j: &PointJson, sets: &RootSets) -> Result<PointM> {
    let mut sparse = BTreeMap::new();
    for e in &j.entries {
        if e.row == 0 || e.row >= e.col {
            return Err(Error::InvalidInput(format!(
                "bad cell ({}, {})",
                e.row, e.col
            )));
        }
        sparse.insert(Root::new(e.row, e.col), parse_rat(&e.value)?);
    }
    PointM::from_support(j.n, sets, sparse)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupElementJson {
    pub n: u32,
    #[serde(default)]
    pub unipotent: bool,
    pub entries: Vec<EntryJson>,
}

/// Sparse form: off-diagonal nonzeros always listed; with the unipotent
/// flag set, diagonal entries are implied 1 and omitted.
pub fn group_element_to_json(g: &GroupElement) -> GroupElementJson {
    let unipotent = g.is_unipotent();
    let mut entries = Vec::new();
    for i in 1..=g.n() {
        for j in i..=g.n() {
            let v = g.get(i, j);
            let keep = if i == j {
                !unipotent
            } else {
                !num::Zero::is_zero(v)
            };
            if keep {
                entries.push(EntryJson {
                    row: i,
                    col: j,
                    value: format_rat(v),
                });
            }
        }
    }
    GroupElementJson {
        n: g.n(),
        unipotent,
        entries,
    }
}

pub fn group_element_from_json(j: &GroupElementJson) -> Result<GroupElement> {
    let entries: Vec<(u32, u32, Rat)> = j
        .entries
        .iter()
        .map(|e| Ok((e.row, e.col, parse_rat(&e.value)?)))
        .collect::<Result<_>>()?;
    GroupElement::from_sparse(j.n, &entries)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorusOpJson {
    pub op: String,
    pub i: u32,
    pub b: String,
    pub step: u8,
}

pub fn transcript_to_json(t: &ReductionTranscript) -> Vec<TorusOpJson> {
    t.ops
        .iter()
        .map(|op| TorusOpJson {
            op: "h".into(),
            i: op.index,
            b: format_rat(&op.value),
            step: op.step,
        })
        .collect()
}

pub fn transcript_from_json(ops: &[TorusOpJson]) -> Result<ReductionTranscript> {
    let mut out = Vec::new();
    for op in ops {
        if op.op != "h" {
            return Err(Error::InvalidInput(format!("unknown op {:?}", op.op)));
        }
        out.push(TorusOp {
            index: op.i,
            value: parse_rat(&op.b)?,
            step: op.step,
        });
    }
    Ok(ReductionTranscript { ops: out })
}
