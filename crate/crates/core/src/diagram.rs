//! Text diagrams of a block structure with its marked cells.
//!
//! Base cells, the remaining bridge images, and the two Psi series each get
//! their own marker; diagonal blocks are outlined and carry 1 on the
//! diagonal. Output is deterministic.

use crate::base::ExtendedBase;
use crate::error::{Error, Result};
use crate::psi::PsiCertificates;
use crate::roots::{BlockStructure, Root};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mark {
    S,
    Phi,
    Psi1,
    Psi2,
}

impl Mark {
    pub fn label(self) -> &'static str {
        match self {
            Mark::S => "S",
            Mark::Phi => "Phi",
            Mark::Psi1 => "Psi1",
            Mark::Psi2 => "Psi2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagramFormat {
    Ascii,
    Unicode,
}

impl std::str::FromStr for DiagramFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<DiagramFormat> {
        match s {
            "ascii" => Ok(DiagramFormat::Ascii),
            "unicode" => Ok(DiagramFormat::Unicode),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

/// All marked cells in row-major order.
pub fn marked_cells(ext: &ExtendedBase, psi: &PsiCertificates) -> Vec<(Root, Mark)> {
    let mut cells: Vec<(Root, Mark)> = Vec::new();
    for &xi in ext.s() {
        cells.push((xi, Mark::S));
    }
    for &phi in ext.phi() {
        let mark = if psi.psi1().contains_key(&phi) {
            Mark::Psi1
        } else if psi.psi2().contains_key(&phi) {
            Mark::Psi2
        } else {
            Mark::Phi
        };
        cells.push((phi, mark));
    }
    cells.sort_by_key(|(root, _)| (root.row, root.col));
    cells
}

fn glyph(mark: Mark, format: DiagramFormat) -> &'static str {
    match (format, mark) {
        (DiagramFormat::Ascii, Mark::S) => "O",
        (DiagramFormat::Ascii, Mark::Phi) => "x",
        (DiagramFormat::Ascii, Mark::Psi1 | Mark::Psi2) => "#",
        (DiagramFormat::Unicode, Mark::S) => "⊗",
        (DiagramFormat::Unicode, Mark::Phi) => "×",
        (DiagramFormat::Unicode, Mark::Psi1 | Mark::Psi2) => "⊠",
    }
}

/// Render the square array with block outlines.
pub fn render_diagram(
    bs: &BlockStructure,
    ext: &ExtendedBase,
    psi: &PsiCertificates,
    format: DiagramFormat,
) -> String {
    let n = bs.n() as usize;
    let mut grid = vec![vec![" "; n]; n];
    for i in 1..=bs.n() {
        grid[(i - 1) as usize][(i - 1) as usize] = "1";
    }
    for (root, mark) in marked_cells(ext, psi) {
        grid[(root.row - 1) as usize][(root.col - 1) as usize] = glyph(mark, format);
    }

    let boundary_after: Vec<bool> = (1..=bs.n())
        .map(|i| (1..bs.num_blocks()).any(|k| bs.prefix(k) == i))
        .collect();

    let mut out = String::new();
    let hline = |out: &mut String| {
        out.push('+');
        for j in 0..n {
            out.push_str("---");
            if boundary_after[j] || j == n - 1 {
                out.push('+');
            }
        }
        out.push('\n');
    };

    hline(&mut out);
    for i in 0..n {
        out.push('|');
        for j in 0..n {
            out.push(' ');
            out.push_str(grid[i][j]);
            out.push(' ');
            if boundary_after[j] || j == n - 1 {
                out.push('|');
            }
        }
        out.push_str(&format!(" {}\n", i + 1));
        if boundary_after[i] || i == n - 1 {
            hline(&mut out);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::compute_psi;
    use crate::roots::{build_block_structure, r};

    fn render(sizes: &[u32], format: DiagramFormat) -> (String, Vec<(Root, Mark)>) {
        let (bs, sets) = build_block_structure(sizes).unwrap();
        let ext = ExtendedBase::compute(&bs, &sets).unwrap();
        let psi = compute_psi(&bs, &ext).unwrap();
        let text = render_diagram(&bs, &ext, &psi, format);
        let cells = marked_cells(&ext, &psi);
        (text, cells)
    }

    #[test]
    fn markers_2132() {
        let (text, cells) = render(&[2, 1, 3, 2], DiagramFormat::Ascii);
        for root in [r(2, 3), r(3, 4), r(6, 7), r(1, 5), r(5, 8)] {
            assert!(cells.contains(&(root, Mark::S)));
        }
        assert!(cells.contains(&(r(4, 7), Mark::Phi)));
        assert!(cells.contains(&(r(5, 7), Mark::Phi)));
        // Derived: the square (4,7),(5,7),(5,8) promotes (4,8).
        assert!(cells.contains(&(r(4, 8), Mark::Psi1)));
        assert!(text.contains('O') && text.contains('x') && text.contains('#'));
    }

    #[test]
    fn markers_232_and_empty() {
        let (text, cells) = render(&[2, 3, 2], DiagramFormat::Unicode);
        assert!(cells.contains(&(r(3, 7), Mark::Psi1)));
        assert!(text.contains('⊠') && text.contains('⊗'));

        let (text, cells) = render(&[5], DiagramFormat::Ascii);
        assert!(cells.is_empty());
        assert!(!text.contains('O'));
    }

    #[test]
    fn deterministic() {
        let (a, _) = render(&[2, 2, 3, 3, 2], DiagramFormat::Ascii);
        let (b, _) = render(&[2, 2, 3, 3, 2], DiagramFormat::Ascii);
        assert_eq!(a, b);
    }
}
