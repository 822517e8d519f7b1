//! Classification of Phi into the two series that index Borel invariants.
//!
//! A root psi = (i, b) of Phi joins the first series when a square of
//! extended-base roots completes it: xi1 = (i, a), xi2 = (j, a) in Phi and
//! xi3 = (j, b) in S or Phi, with i < j and a < b.
//!
//! It joins the second series when it sits in the first column of the block
//! to the right of block t, in row k of block t with k < r_t, and some
//! earlier block s carries at least k Phi-roots in its first row. The
//! certificate collects the anchor roots gamma_1..gamma_5 and, depending on
//! the sign of r_s - r_t, the extra bridge image xi2 or xi3.

use std::collections::BTreeSet;

use crate::base::ExtendedBase;
use crate::error::{Error, Result};
use crate::roots::{BlockStructure, Root};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    Equal,
    SLess,
    SGreater,
}

/// Witness square for a first-series root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Psi1Witness {
    pub xi1: Root,
    pub xi2: Root,
    pub xi3: Root,
    /// Whether xi3 lies in S (then `gamma` is the base root opening xi2's
    /// admissible pair) or in Phi.
    pub xi3_in_base: bool,
    pub gamma: Option<Root>,
}

/// Anchor data for a second-series root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Psi2Certificate {
    /// Earlier block whose first row carries the k Phi-roots (maximal such).
    pub s: u32,
    /// Block containing the row of psi.
    pub t: u32,
    /// Row offset of psi inside block t; 1 <= k < r_t.
    pub k: u32,
    /// k-th leftmost Phi-root in row R_{s-1}+1.
    pub xi1: Root,
    pub gamma1: Root,
    pub gamma2: Root,
    pub gamma3: Root,
    pub gamma4: Root,
    pub gamma5: Root,
    pub xi2: Option<Root>,
    pub xi3: Option<Root>,
    pub case: CaseTag,
    pub simple: bool,
    /// Total number of Phi-roots in row R_{s-1}+1; larger than k signals
    /// that the exactly-k and at-least-k readings of the membership rule
    /// could diverge on this structure.
    pub row_phi_count: usize,
}

#[derive(Clone, Debug, Default)]
pub struct PsiCertificates {
    psi1: std::collections::BTreeMap<Root, Psi1Witness>,
    psi2: std::collections::BTreeMap<Root, Psi2Certificate>,
}

impl PsiCertificates {
    pub fn psi1(&self) -> &std::collections::BTreeMap<Root, Psi1Witness> {
        &self.psi1
    }

    pub fn psi2(&self) -> &std::collections::BTreeMap<Root, Psi2Certificate> {
        &self.psi2
    }

    /// The union of both series.
    pub fn all(&self) -> BTreeSet<Root> {
        self.psi1.keys().chain(self.psi2.keys()).copied().collect()
    }

    pub fn contains(&self, root: Root) -> bool {
        self.psi1.contains_key(&root) || self.psi2.contains_key(&root)
    }

    pub fn len(&self) -> usize {
        self.psi1.len() + self.psi2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi1.is_empty() && self.psi2.is_empty()
    }
}

/// Deterministic witness square for a candidate first-series root:
/// smallest j above the row of psi, then largest a below its column.
pub fn psi1_witness(ext: &ExtendedBase, psi: Root) -> Option<Psi1Witness> {
    let (i, b) = (psi.row, psi.col);
    for j in (i + 1)..b {
        let xi3 = Root::new(j, b);
        if !ext.in_extended_base(xi3) {
            continue;
        }
        for a in (1..b).rev() {
            if a <= j {
                break;
            }
            let xi1 = Root::new(i, a);
            let xi2 = Root::new(j, a);
            if ext.phi().contains(&xi1) && ext.phi().contains(&xi2) {
                let xi3_in_base = ext.s().contains(&xi3);
                let gamma = if xi3_in_base {
                    Some(ext.pair_of(xi2).expect("xi2 is in Phi").xi)
                } else {
                    None
                };
                return Some(Psi1Witness {
                    xi1,
                    xi2,
                    xi3,
                    xi3_in_base,
                    gamma,
                });
            }
        }
    }
    None
}

fn psi2_certificate(
    bs: &BlockStructure,
    ext: &ExtendedBase,
    psi: Root,
) -> Result<Option<Psi2Certificate>> {
    // psi must be (R_{t-1}+k, R_t+1) with 1 <= k < r_t.
    let t = bs.block_of(psi.row);
    if t + 1 > bs.num_blocks() || psi.col != bs.prefix(t) + 1 {
        return Ok(None);
    }
    let k = psi.row - bs.prefix(t - 1);
    if k >= bs.size(t) {
        return Ok(None);
    }

    // Maximal earlier block whose first row holds at least k Phi-roots.
    let mut found: Option<(u32, Vec<Root>)> = None;
    for s in (1..t).rev() {
        let row = bs.prefix(s - 1) + 1;
        let phis = ext.phi_in_row(row);
        if phis.len() >= k as usize {
            found = Some((s, phis));
            break;
        }
    }
    let Some((s, phis)) = found else {
        return Ok(None);
    };
    let row_phi_count = phis.len();
    let xi1 = phis[(k - 1) as usize];

    let fail = |reason: &str| Error::CertificateFailure {
        root: psi,
        reason: reason.to_string(),
    };

    let gamma1 = Root::new(bs.prefix(s - 1), bs.prefix(s - 1) + 1);
    if !ext.s().contains(&gamma1) {
        return Err(fail("gamma1 not in the base"));
    }
    let pair = ext.pair_of(psi).ok_or_else(|| fail("psi has no admissible pair"))?;
    let gamma2 = pair.xi;
    let gamma3 = pair.xi_prime;
    if gamma3 != Root::new(bs.prefix(t), bs.prefix(t) + 1) {
        return Err(fail("pair of psi does not close at the block corner"));
    }
    let gamma4 = ext
        .s_root_in_col(psi.row + 1)
        .ok_or_else(|| fail("no base root in the column right of psi's row"))?;

    let (r_s, r_t) = (bs.size(s), bs.size(t));
    let (case, gamma5, xi2, xi3) = if r_s == r_t {
        let gamma5 = Root::new(bs.prefix(s - 1) + 1, bs.prefix(t));
        if !ext.s().contains(&gamma5) {
            return Err(fail("expected base root at (R_{s-1}+1, R_t)"));
        }
        (CaseTag::Equal, gamma5, None, None)
    } else if r_s < r_t {
        let gamma5 = ext
            .s_root_in_row(bs.prefix(s - 1) + 1)
            .ok_or_else(|| fail("no base root in row R_{s-1}+1"))?;
        let xi2 = Root::new(gamma5.col, gamma3.col);
        if !ext.phi().contains(&xi2) {
            return Err(fail("bridge image xi2 missing from Phi"));
        }
        (CaseTag::SLess, gamma5, Some(xi2), None)
    } else {
        let gamma5 = ext
            .s_root_in_col(bs.prefix(t))
            .ok_or_else(|| fail("no base root in column R_t"))?;
        let xi3 = Root::new(gamma1.col, gamma5.col);
        if !ext.phi().contains(&xi3) {
            return Err(fail("bridge image xi3 missing from Phi"));
        }
        (CaseTag::SGreater, gamma5, None, Some(xi3))
    };

    let simple = t == s + 1 && (r_s == 2 || r_t == 2);

    Ok(Some(Psi2Certificate {
        s,
        t,
        k,
        xi1,
        gamma1,
        gamma2,
        gamma3,
        gamma4,
        gamma5,
        xi2,
        xi3,
        case,
        simple,
        row_phi_count,
    }))
}

/// Classify every Phi-root into the first series, the second series, or
/// neither, with full certificates.
pub fn compute_psi(bs: &BlockStructure, ext: &ExtendedBase) -> Result<PsiCertificates> {
    let mut certs = PsiCertificates::default();
    for &phi in ext.phi() {
        let w1 = psi1_witness(ext, phi);
        let w2 = psi2_certificate(bs, ext, phi)?;
        match (w1, w2) {
            (Some(_), Some(_)) => {
                return Err(Error::InternalContradiction(format!(
                    "{phi} certified for both series"
                )));
            }
            (Some(w), None) => {
                certs.psi1.insert(phi, w);
            }
            (None, Some(c)) => {
                certs.psi2.insert(phi, c);
            }
            (None, None) => {}
        }
    }
    Ok(certs)
}

/// Solving order: columns left to right, rows bottom to top inside a column.
pub fn psi_numbering(psi: &BTreeSet<Root>) -> Vec<Root> {
    let mut order: Vec<Root> = psi.iter().copied().collect();
    order.sort_by(|a, b| a.col.cmp(&b.col).then(b.row.cmp(&a.row)));
    order
}

/// Outermost base roots strictly nested inside `gamma`, and the outermost
/// base roots strictly nested inside those.
pub fn nested_layers(gamma: Root, s: &BTreeSet<Root>) -> (BTreeSet<Root>, BTreeSet<Root>) {
    let layer1 = outermost_inside(gamma, s);
    let mut layer2 = BTreeSet::new();
    for &mu in &layer1 {
        layer2.extend(outermost_inside(mu, s));
    }
    (layer1, layer2)
}

fn outermost_inside(outer: Root, s: &BTreeSet<Root>) -> BTreeSet<Root> {
    let inside: Vec<Root> = s.iter().copied().filter(|mu| mu.nested_in(outer)).collect();
    inside
        .iter()
        .copied()
        .filter(|&mu| !inside.iter().any(|&nu| mu.nested_in(nu)))
        .collect()
}
