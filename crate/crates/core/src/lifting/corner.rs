//! Outline arrays for the corner frequency pattern: a band of ones over the
//! first m rows and columns, d symbols in each of the two corner cells
//! (m+1, m+2) and (m+2, m+1), and zeros elsewhere, with symbol i never in
//! row or column i. Two constructions cover m+2 <= k <= 2m-1 and k = 2m;
//! the amalgamated order-5 arrays for the m = 3 corner case are fixtures.

use crate::lifting::coloring::{equitable_coloring, BipartiteMultigraph};
use crate::lifting::freq::{verify_outline_array, FrequencyArray, OutlineArray};
use crate::lifting::transversal::{transversal_square_with, TransversalError};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CornerError {
    OutOfRange { m: usize, d: u64, k: usize },
    Transversal(TransversalError),
}

impl fmt::Display for CornerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CornerError::OutOfRange { m, d, k } => write!(
                f,
                "no corner construction for m={m}, d={d}, k={k}: need m >= 3, d <= m and \
                 m+2 <= k <= 2m-1, or k = 2m with m >= 4 and 2d >= m"
            ),
            CornerError::Transversal(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CornerError {}

impl From<TransversalError> for CornerError {
    fn from(e: TransversalError) -> Self {
        CornerError::Transversal(e)
    }
}

/// The governing frequency array of the corner pattern.
pub fn corner_frequency(m: usize, d: u64, k: usize) -> FrequencyArray {
    FrequencyArray::from_fn(k, |i, j| {
        if i == j {
            0
        } else if i < m || j < m {
            1
        } else if (i, j) == (m, m + 1) || (i, j) == (m + 1, m) {
            d
        } else {
            0
        }
    })
}

/// Builds an outline array for [`corner_frequency`]. The `seed` feeds the
/// transversal-square search when m itself needs one.
pub fn corner_outline(m: usize, d: u64, k: usize, seed: u64) -> Result<OutlineArray, CornerError> {
    let in_band_branch = m >= 3 && d <= m as u64 && m + 2 <= k && k <= 2 * m - 1;
    let in_double_branch = k == 2 * m && m >= 4 && 2 * d >= m as u64;
    if !in_band_branch && !in_double_branch {
        return Err(CornerError::OutOfRange { m, d, k });
    }
    let out = if in_band_branch {
        band_branch(m, d as usize, k, seed)?
    } else {
        double_branch(m, d as usize, k)
    };
    let report = verify_outline_array(&out, &corner_frequency(m, d, k));
    assert!(report.passed(), "corner construction invalid: {report}");
    Ok(out)
}

/// Partially filled band region together with the two marked transversals.
struct BandState {
    a: Vec<Option<usize>>, // m x m
    e1: usize,
    e2: usize,
    k: usize,
    m: usize,
}

impl BandState {
    fn get(&self, r: usize, c: usize) -> Option<usize> {
        self.a[r * self.m + c]
    }

    fn set(&mut self, r: usize, c: usize, s: usize) {
        debug_assert!(self.a[r * self.m + c].is_none());
        self.a[r * self.m + c] = Some(s);
    }
}

/// m+2 <= k <= 2m-1: prune a transversal square to 2m+1-k symbols per row
/// and column, swap the two marked transversals against the extra columns,
/// and fill the remainder with equitable colorings.
fn band_branch(m: usize, d: usize, k: usize, seed: u64) -> Result<OutlineArray, CornerError> {
    let keep = 2 * m + 1 - k; // band symbols per row/column
    let ts = transversal_square_with(m, seed)?.diagonalized(0);
    // order the non-diagonal transversals by the column of their row-0 cell
    let mut order: Vec<usize> = (1..ts.transversals.len()).collect();
    order.sort_by_key(|&t| ts.transversals[t][0].1);
    let t1 = &ts.transversals[order[0]];
    let t2 = &ts.transversals[order[1]];

    let mut st = BandState {
        a: vec![None; m * m],
        e1: m,
        e2: m + 1,
        k,
        m,
    };
    if m != 6 {
        // the m disjoint transversals partition the cells; keep T1, T2 and
        // the next keep-2 in order
        for &t in order.iter().take(keep) {
            for &(r, c) in &ts.transversals[t] {
                st.set(r, c, ts.square.get(r, c));
            }
        }
    } else {
        // only four transversals exist; prune per the required count
        match keep {
            5 => {
                for r in 0..m {
                    for c in 0..m {
                        if r != c {
                            st.set(r, c, ts.square.get(r, c));
                        }
                    }
                }
            }
            4 => {
                let t3 = &ts.transversals[order[2]];
                for r in 0..m {
                    for c in 0..m {
                        if r != c && !t3.contains(&(r, c)) {
                            st.set(r, c, ts.square.get(r, c));
                        }
                    }
                }
            }
            3 => {
                for &t in order.iter().take(3) {
                    for &(r, c) in &ts.transversals[t] {
                        st.set(r, c, ts.square.get(r, c));
                    }
                }
            }
            2 => {
                for &t in order.iter().take(2) {
                    for &(r, c) in &ts.transversals[t] {
                        st.set(r, c, ts.square.get(r, c));
                    }
                }
            }
            _ => unreachable!("k bounds give 2 <= keep <= 5 at m = 6"),
        }
    }

    let mut out = OutlineArray::empty(k);
    let (e1, e2) = (st.e1, st.e2);

    // swap the marked transversals against the extra columns: wherever the
    // transversal symbol is d or larger (0-based) the band keeps it and the
    // extra column takes it; otherwise the extra symbol sits in the band
    let t1_sym_in_row: Vec<usize> = (0..m)
        .map(|r| {
            let &(_, c) = t1.iter().find(|&&(tr, _)| tr == r).expect("one cell per row");
            ts.square.get(r, c)
        })
        .collect();
    let t2_sym_in_row: Vec<usize> = (0..m)
        .map(|r| {
            let &(_, c) = t2.iter().find(|&&(tr, _)| tr == r).expect("one cell per row");
            ts.square.get(r, c)
        })
        .collect();
    for &(r, c) in t1 {
        if ts.square.get(r, c) >= d {
            st.a[r * m + c] = Some(e2);
        }
    }
    for &(r, c) in t2 {
        if ts.square.get(r, c) >= d {
            st.a[r * m + c] = Some(e1);
        }
    }
    for r in 0..m {
        out.add(r, e1, if t1_sym_in_row[r] < d { e2 } else { t1_sym_in_row[r] }, 1);
        out.add(r, e2, if t2_sym_in_row[r] < d { e1 } else { t2_sym_in_row[r] }, 1);
    }
    // columns of the marked transversals feed the two extra rows
    for c in 0..m {
        let s1 = {
            let &(r, _) = t1.iter().find(|&&(_, tc)| tc == c).expect("one cell per column");
            ts.square.get(r, c)
        };
        let s2 = {
            let &(r, _) = t2.iter().find(|&&(_, tc)| tc == c).expect("one cell per column");
            ts.square.get(r, c)
        };
        out.add(e1, c, if s1 < d { e2 } else { s1 }, 1);
        out.add(e2, c, if s2 < d { e1 } else { s2 }, 1);
    }
    // corner cells hold the first d symbols
    for s in 0..d {
        out.add(e1, e2, s, 1);
        out.add(e2, e1, s, 1);
    }

    finish_band(&mut out, &st);
    Ok(out)
}

/// k = 2m, m >= 4, 2d >= m: a single placed transversal built from two
/// index sequences replaces the pruned square.
fn double_branch(m: usize, d: usize, k: usize) -> OutlineArray {
    // 1-based sequences from the construction, stored 1-based
    let r_seq: Vec<usize>;
    let s_seq: Vec<usize>;
    if m % 2 == 0 {
        r_seq = (1..=m).map(|i| m + 1 - i).collect();
        s_seq = (1..=m)
            .map(|i| {
                if i == m / 2 || i == m {
                    i + 1 - m / 2
                } else {
                    i + 1
                }
            })
            .collect();
    } else {
        r_seq = (1..=m)
            .map(|i| {
                if i <= (m - 1) / 2 {
                    m + 1 - i
                } else if i == (m + 1) / 2 {
                    1
                } else {
                    m + 2 - i
                }
            })
            .collect();
        s_seq = (1..=m)
            .map(|i| {
                if i == m {
                    (m + 1) / 2
                } else if i == (m - 1) / 2 {
                    1
                } else {
                    i + 1
                }
            })
            .collect();
    }
    let r0 = |i: usize| r_seq[i - 1] - 1; // 0-based row
    let s0 = |i: usize| s_seq[i - 1] - 1; // 0-based symbol

    let mut st = BandState {
        a: vec![None; m * m],
        e1: m,
        e2: m + 1,
        k,
        m,
    };
    let (e1, e2) = (st.e1, st.e2);
    let mut out = OutlineArray::empty(k);

    for i in 1..=m {
        // band placement at (r_i, i)
        let sym = if i <= m - d {
            e1
        } else if i > d {
            e2
        } else {
            s0(i)
        };
        st.set(r0(i), i - 1, sym);
        // the two extra columns in row r_i
        out.add(r0(i), e1, if i <= d { e2 } else { s0(i) }, 1);
        out.add(r0(i), e2, if i > m - d { e1 } else { s0(i) }, 1);
    }
    for j in 1..=m {
        // the two extra rows in column j
        out.add(e1, j - 1, if j <= d { e2 } else { s0(m + 1 - j) }, 1);
        out.add(e2, j - 1, if j > m - d { e1 } else { s0(m + 1 - j) }, 1);
    }
    for i in m - d + 1..=m {
        out.add(e1, e2, s0(i), 1);
    }
    for i in 1..=d {
        out.add(e2, e1, s0(i), 1);
    }

    finish_band(&mut out, &st);
    out
}

/// Copies the band region into the array, then fills the empty band cells
/// with the tail symbols and the tail columns/rows with the missing band
/// symbols, each by one equitable coloring of a regular bipartite graph.
fn finish_band(out: &mut OutlineArray, st: &BandState) {
    let (m, k) = (st.m, st.k);
    let tail = k - m - 2;
    for r in 0..m {
        for c in 0..m {
            if let Some(s) = st.get(r, c) {
                out.add(r, c, s, 1);
            }
        }
    }

    if tail > 0 {
        // tail symbols into the empty band cells, one per row and column
        let mut g = BipartiteMultigraph::new(m, m);
        let mut edges = Vec::new();
        for r in 0..m {
            for c in 0..m {
                if r != c && st.get(r, c).is_none() {
                    g.add_edge(r, c);
                    edges.push((r, c));
                }
            }
        }
        let colors = equitable_coloring(&g, tail);
        for (&(r, c), &color) in edges.iter().zip(&colors) {
            out.add(r, c, m + 2 + color, 1);
        }

        // missing band symbols into the tail columns and rows
        let mut row_need = Vec::new();
        let mut col_need = Vec::new();
        for i in 0..m {
            let mut in_row = vec![false; m];
            let mut in_col = vec![false; m];
            for j in 0..m + 2 {
                for (&s, _) in out.cell(i, j) {
                    if s < m {
                        in_row[s] = true;
                    }
                }
                for (&s, _) in out.cell(j, i) {
                    if s < m {
                        in_col[s] = true;
                    }
                }
            }
            for v in 0..m {
                if v != i && !in_row[v] {
                    row_need.push((i, v));
                }
                if v != i && !in_col[v] {
                    col_need.push((i, v));
                }
            }
        }
        for (need, is_row) in [(&row_need, true), (&col_need, false)] {
            let mut g = BipartiteMultigraph::new(m, m);
            for &(u, v) in need.iter() {
                g.add_edge(u, v);
            }
            let colors = equitable_coloring(&g, tail);
            for (&(u, v), &color) in need.iter().zip(&colors) {
                if is_row {
                    out.add(u, m + 2 + color, v, 1);
                } else {
                    out.add(m + 2 + color, u, v, 1);
                }
            }
        }
    }
}

/// Which of the two amalgamated order-5 corner arrays to use, by the counts
/// of the two extra symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CornerSplit {
    /// Two copies of the first extra symbol, one of the second.
    TwoOne,
    /// One copy of the first extra symbol, two of the second.
    OneTwo,
}

/// The hardcoded order-5 arrays for the m = 3, d = 2 corner case where the
/// one part of the residual multiset has all three extra entries; their
/// frequency array carries the doubled extra column directly.
pub fn order5_corner_array(split: CornerSplit) -> OutlineArray {
    // 1-based cell contents, row-major, empty diagonal
    let data: [&[(usize, usize, &[usize])]; 2] = [
        &[
            (1, 2, &[5]),
            (1, 3, &[4]),
            (1, 4, &[2, 3]),
            (1, 5, &[4]),
            (2, 1, &[3]),
            (2, 3, &[4]),
            (2, 4, &[1, 5]),
            (2, 5, &[4]),
            (3, 1, &[4]),
            (3, 2, &[4]),
            (3, 4, &[2, 5]),
            (3, 5, &[1]),
            (4, 1, &[2, 5]),
            (4, 2, &[1, 3]),
            (4, 3, &[1, 5]),
            (4, 5, &[2, 3]),
            (5, 1, &[4]),
            (5, 2, &[4]),
            (5, 3, &[2]),
            (5, 4, &[1, 3]),
        ],
        &[
            (1, 2, &[4]),
            (1, 3, &[5]),
            (1, 4, &[5]),
            (1, 5, &[2, 3]),
            (2, 1, &[3]),
            (2, 3, &[5]),
            (2, 4, &[5]),
            (2, 5, &[1, 4]),
            (3, 1, &[5]),
            (3, 2, &[5]),
            (3, 4, &[1]),
            (3, 5, &[2, 4]),
            (4, 1, &[5]),
            (4, 2, &[5]),
            (4, 3, &[2]),
            (4, 5, &[1, 3]),
            (5, 1, &[2, 4]),
            (5, 2, &[1, 3]),
            (5, 3, &[1, 4]),
            (5, 4, &[2, 3]),
        ],
    ];
    let idx = match split {
        CornerSplit::TwoOne => 0,
        CornerSplit::OneTwo => 1,
    };
    let mut out = OutlineArray::empty(5);
    for &(r, c, syms) in data[idx] {
        for &s in syms {
            out.add(r - 1, c - 1, s - 1, 1);
        }
    }
    out
}

/// The frequency array the order-5 corner arrays realize.
pub fn order5_corner_frequency(split: CornerSplit) -> FrequencyArray {
    let (b, c) = match split {
        CornerSplit::TwoOne => (2u64, 1u64),
        CornerSplit::OneTwo => (1, 2),
    };
    let m = 3;
    FrequencyArray::from_fn(5, |i, j| {
        if i == j {
            0
        } else if i < m && j < m {
            1
        } else if (i < m && j == 3) || (i == 3 && j < m) {
            b
        } else if (i < m && j == 4) || (i == 4 && j < m) {
            c
        } else {
            2 // the corner, d = 2
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order5_fixtures_match_their_frequencies() {
        for split in [CornerSplit::TwoOne, CornerSplit::OneTwo] {
            let o = order5_corner_array(split);
            let f = order5_corner_frequency(split);
            assert!(verify_outline_array(&o, &f).passed(), "{split:?}");
        }
    }

    #[test]
    fn band_branch_small_cases() {
        // m=3, k=5 covers d = 0..=3 within the band branch
        for d in 0..=3u64 {
            let o = corner_outline(3, d, 5, 0).unwrap();
            assert!(verify_outline_array(&o, &corner_frequency(3, d, 5)).passed(), "d={d}");
        }
    }

    #[test]
    fn band_branch_with_tail_columns() {
        for (m, d, k) in [(4, 0, 6), (4, 2, 7), (5, 3, 7), (5, 5, 8), (6, 2, 8), (6, 4, 11)] {
            let o = corner_outline(m, d, k, 0).unwrap();
            assert!(
                verify_outline_array(&o, &corner_frequency(m, d as usize as u64, k)).passed(),
                "m={m} d={d} k={k}"
            );
        }
    }

    #[test]
    fn double_branch_cases() {
        for (m, d) in [(4, 2), (4, 3), (4, 4), (5, 3), (5, 4), (6, 3), (6, 5), (7, 4)] {
            let o = corner_outline(m, d, 2 * m, 0).unwrap();
            assert!(
                verify_outline_array(&o, &corner_frequency(m, d, 2 * m)).passed(),
                "m={m} d={d}"
            );
        }
    }

    #[test]
    fn out_of_range_parameters_error() {
        assert!(corner_outline(3, 2, 6, 0).is_err()); // k = 2m needs m >= 4
        assert!(corner_outline(4, 1, 8, 0).is_err()); // k = 2m needs 2d >= m
        assert!(corner_outline(4, 5, 7, 0).is_err()); // d > m
        assert!(corner_outline(2, 0, 4, 0).is_err()); // m < 3
        assert!(corner_outline(5, 0, 6, 0).is_err()); // k < m + 2
    }
}
