//! Canonical cut-and-paste decomposition of an input into a base word and
//! primitive parts, driven only by the crossing sequences at its boundaries.

use super::tables::SeqId;

/// Cells are indices into the decomposed word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Cells of the base word, in order. Its boundary sequences are pairwise
    /// distinct.
    pub base: Vec<usize>,
    /// `(s, cells)`: a part primitive compatible with `s`.
    pub parts: Vec<(SeqId, Vec<usize>)>,
}

/// Decompose a word of length `n = seqs.len()` whose boundary `b` (for
/// `1 <= b <= n`) carries `seqs[b - 1]`.
///
/// Scanning left to right, each boundary jumps to the last later boundary
/// with the same sequence; the skipped stretch is compatible with that
/// sequence and is decomposed further. Inside such a stretch, the
/// occurrences of its sequence split it into sections, and each section is
/// reduced the same way to a primitive skeleton.
pub fn decompose(seqs: &[SeqId]) -> Decomposition {
    let n = seqs.len();
    let at = |b: usize| seqs[b - 1];
    let mut out = Decomposition { base: Vec::new(), parts: Vec::new() };
    if n == 0 {
        return out;
    }
    out.base.push(0);
    let mut b = 1;
    while b <= n {
        let s = at(b);
        let last = (b..=n).rev().find(|&j| at(j) == s).unwrap();
        if last > b {
            compatible_stretch(seqs, b, last, &mut out.parts);
        }
        if last < n {
            out.base.push(last);
        }
        b = last + 1;
    }
    out
}

/// Decompose cells `lo..hi`, where boundaries `lo` and `hi` both carry the
/// same sequence.
fn compatible_stretch(seqs: &[SeqId], lo: usize, hi: usize, parts: &mut Vec<(SeqId, Vec<usize>)>) {
    let at = |b: usize| seqs[b - 1];
    let s = at(lo);
    let mut cuts: Vec<usize> = (lo..=hi).filter(|&b| at(b) == s).collect();
    cuts.dedup();
    for w in cuts.windows(2) {
        let (from, to) = (w[0], w[1]);
        // Internal boundaries of this section avoid s.
        let mut cells = vec![from];
        let mut b = from + 1;
        while b < to {
            let t = at(b);
            let last = (b..to).rev().find(|&j| at(j) == t).unwrap();
            if last > b {
                compatible_stretch(seqs, b, last, parts);
            }
            cells.push(last);
            b = last + 1;
        }
        parts.push((s, cells));
    }
}
