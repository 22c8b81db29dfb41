//! Latin squares and realizations (latin squares with pairwise disjoint
//! subsquares in normal form along the main diagonal).

use crate::partition::{Partition, Permutation};
use crate::report::{Axis, Report, Violation};
use rand::Rng;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GridError {
    Empty,
    NotSquare { rows: usize, row: usize, len: usize },
    SymbolOutOfRange { row: usize, col: usize, value: usize },
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::Empty => write!(f, "empty grid"),
            GridError::NotSquare { rows, row, len } => write!(
                f,
                "grid has {rows} rows but row {} has {len} entries",
                row + 1
            ),
            GridError::SymbolOutOfRange { row, col, value } => write!(
                f,
                "entry at ({},{}) is {value}, outside 1..=n",
                row + 1,
                col + 1
            ),
        }
    }
}

impl std::error::Error for GridError {}

/// An n x n array over symbols `0..n` (printed 1-based) in which, when valid,
/// every symbol occurs exactly once per row and column. Construction only
/// checks shape and symbol range; the latin property itself is checked by
/// [`verify_latin`], so invalid squares can be represented and reported on.
#[derive(Clone, PartialEq, Eq)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<usize>,
}

impl LatinSquare {
    /// From 0-based symbols in row-major order.
    pub fn new(n: usize, cells: Vec<usize>) -> Result<Self, GridError> {
        if n == 0 {
            return Err(GridError::Empty);
        }
        if cells.len() != n * n {
            return Err(GridError::NotSquare {
                rows: n,
                row: cells.len() / n,
                len: cells.len() % n,
            });
        }
        for (idx, &v) in cells.iter().enumerate() {
            if v >= n {
                return Err(GridError::SymbolOutOfRange {
                    row: idx / n,
                    col: idx % n,
                    value: v + 1,
                });
            }
        }
        Ok(LatinSquare { n, cells })
    }

    /// From rows of 1-based symbols, the convention used by the file format
    /// and the worked examples.
    pub fn from_rows_one_based(rows: &[Vec<usize>]) -> Result<Self, GridError> {
        if rows.is_empty() {
            return Err(GridError::Empty);
        }
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GridError::NotSquare {
                    rows: n,
                    row: r,
                    len: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if v == 0 || v > n {
                    return Err(GridError::SymbolOutOfRange {
                        row: r,
                        col: c,
                        value: v,
                    });
                }
                cells.push(v - 1);
            }
        }
        Ok(LatinSquare { n, cells })
    }

    /// The cyclic square `L(i,j) = (i + j) mod n`.
    pub fn cyclic(n: usize) -> Self {
        let cells = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i + j) % n))
            .collect();
        LatinSquare { n, cells }
    }

    /// A random latin square, built row by row; each row is a random system
    /// of distinct representatives for the still-allowed symbols, found with
    /// augmenting paths so no restarts are needed.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        assert!(n > 0);
        let mut cells = Vec::with_capacity(n * n);
        let mut col_used = vec![vec![false; n]; n]; // col_used[c][s]
        for _ in 0..n {
            // match columns to symbols: allowed (c, s) iff !col_used[c][s]
            let mut sym_of_col = vec![usize::MAX; n];
            let mut col_of_sym = vec![usize::MAX; n];
            for c in 0..n {
                // randomized augmenting path from column c
                let mut seen = vec![false; n];
                let mut order: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    order.swap(i, rng.gen_range(0..=i));
                }
                fn augment(
                    c: usize,
                    order: &[usize],
                    col_used: &[Vec<bool>],
                    seen: &mut [bool],
                    sym_of_col: &mut [usize],
                    col_of_sym: &mut [usize],
                ) -> bool {
                    for &s in order {
                        if !col_used[c][s] && !seen[s] {
                            seen[s] = true;
                            if col_of_sym[s] == usize::MAX
                                || augment(
                                    col_of_sym[s],
                                    order,
                                    col_used,
                                    seen,
                                    sym_of_col,
                                    col_of_sym,
                                )
                            {
                                sym_of_col[c] = s;
                                col_of_sym[s] = c;
                                return true;
                            }
                        }
                    }
                    false
                }
                let ok = augment(c, &order, &col_used, &mut seen, &mut sym_of_col, &mut col_of_sym);
                assert!(ok, "partial latin rectangle always extends");
            }
            for c in 0..n {
                cells.push(sym_of_col[c]);
                col_used[c][sym_of_col[c]] = true;
            }
        }
        LatinSquare { n, cells }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> usize {
        self.cells[r * self.n + c]
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }
}

impl fmt::Debug for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LatinSquare(order {})", self.n)?;
        for r in 0..self.n {
            let row: Vec<String> =
                (0..self.n).map(|c| (self.get(r, c) + 1).to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Checks the latin property, recording every violated (axis, index, symbol)
/// count into `report`.
pub fn check_latin(sq: &LatinSquare, report: &mut Report) {
    let n = sq.order();
    for r in 0..n {
        let mut count = vec![0u64; n];
        for c in 0..n {
            count[sq.get(r, c)] += 1;
        }
        for (s, &k) in count.iter().enumerate() {
            if k != 1 {
                report.record(Violation::SymbolCount {
                    axis: Axis::Row,
                    index: r,
                    symbol: s,
                    expected: 1,
                    actual: k,
                });
            }
        }
    }
    for c in 0..n {
        let mut count = vec![0u64; n];
        for r in 0..n {
            count[sq.get(r, c)] += 1;
        }
        for (s, &k) in count.iter().enumerate() {
            if k != 1 {
                report.record(Violation::SymbolCount {
                    axis: Axis::Column,
                    index: c,
                    symbol: s,
                    expected: 1,
                    actual: k,
                });
            }
        }
    }
}

pub fn verify_latin(sq: &LatinSquare) -> Report {
    let mut report = Report::new();
    check_latin(sq, &mut report);
    report
}

/// Checks that `sq` is latin and that each diagonal block of `p` is a latin
/// square on its own symbol interval.
pub fn verify_realization(sq: &LatinSquare, p: &Partition) -> Report {
    let mut report = Report::new();
    if sq.order() as u64 != p.n() {
        report.record(Violation::OrderMismatch {
            expected: p.n(),
            actual: sq.order() as u64,
        });
        return report;
    }
    check_latin(sq, &mut report);
    for b in 0..p.k() {
        let range = p.block_range(b);
        let h = range.len();
        // every symbol of the interval once per block row and block column
        for r in range.clone() {
            let mut count = vec![0u64; h];
            for c in range.clone() {
                let s = sq.get(r, c);
                if range.contains(&s) {
                    count[s - range.start] += 1;
                } else {
                    report.record(Violation::BlockForeignSymbol {
                        block: b,
                        row: r,
                        col: c,
                        symbol: s,
                    });
                }
            }
            for (off, &k) in count.iter().enumerate() {
                if k != 1 {
                    report.record(Violation::BlockNotLatin {
                        block: b,
                        detail: format!(
                            "row {}: symbol {} occurs {} times within the block",
                            r + 1,
                            range.start + off + 1,
                            k
                        ),
                    });
                }
            }
        }
        for c in range.clone() {
            let mut count = vec![0u64; h];
            for r in range.clone() {
                let s = sq.get(r, c);
                if range.contains(&s) {
                    count[s - range.start] += 1;
                }
            }
            for (off, &k) in count.iter().enumerate() {
                if k != 1 {
                    report.record(Violation::BlockNotLatin {
                        block: b,
                        detail: format!(
                            "column {}: symbol {} occurs {} times within the block",
                            c + 1,
                            range.start + off + 1,
                            k
                        ),
                    });
                }
            }
        }
    }
    report
}

/// A verified realization: a latin square whose diagonal blocks realize the
/// partition in normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct Realization {
    square: LatinSquare,
    partition: Partition,
}

impl Realization {
    pub fn new(square: LatinSquare, partition: Partition) -> Result<Self, Report> {
        let report = verify_realization(&square, &partition);
        if report.passed() {
            Ok(Realization { square, partition })
        } else {
            Err(report)
        }
    }

    pub fn square(&self) -> &LatinSquare {
        &self.square
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Reorders the diagonal blocks (rows, columns and symbols together) so
    /// that new block `i` is old block `perm.image(i)`.
    pub fn permute_blocks(&self, perm: &Permutation) -> Realization {
        let p = &self.partition;
        let k = p.k();
        assert_eq!(perm.len(), k);
        let new_p = p.permuted(perm);
        let n = self.square.order();
        // position map: old element index -> new element index
        let mut new_pos = vec![0usize; n];
        for new_block in 0..k {
            let old_block = perm.image(new_block);
            let old = p.block_range(old_block);
            let new = new_p.block_range(new_block);
            for (o, nw) in old.zip(new) {
                new_pos[o] = nw;
            }
        }
        let mut cells = vec![0usize; n * n];
        for r in 0..n {
            for c in 0..n {
                cells[new_pos[r] * n + new_pos[c]] = new_pos[self.square.get(r, c)];
            }
        }
        let square = LatinSquare::new(n, cells).expect("permuted square is well formed");
        Realization::new(square, new_p).expect("block permutation preserves realization")
    }
}

impl fmt::Debug for Realization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Realization of {:?}: {:?}", self.partition, self.square)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;

    #[test]
    fn cyclic_square_is_latin() {
        for n in [1, 2, 5, 9] {
            assert!(verify_latin(&LatinSquare::cyclic(n)).passed());
        }
    }

    #[test]
    fn constant_grid_fails_at_row_one() {
        let sq = LatinSquare::new(2, vec![0, 0, 0, 0]).unwrap();
        let report = verify_latin(&sq);
        assert!(!report.passed());
        match &report.violations()[0] {
            Violation::SymbolCount { axis: Axis::Row, index: 0, .. } => {}
            v => panic!("unexpected first violation {v:?}"),
        }
    }

    #[test]
    fn worked_order8_square_is_latin() {
        assert!(verify_latin(&fixtures::order8_two_subsquares()).passed());
    }

    #[test]
    fn worked_order9_square_realizes_3222() {
        let (sq, p) = fixtures::order9_realization();
        assert!(verify_realization(&sq, &p).passed());
    }

    #[test]
    fn wrong_block_bounds_fail() {
        let (sq, _) = fixtures::order9_realization();
        let bad = Partition::new(vec![2, 3, 2, 2]).unwrap();
        assert!(!verify_realization(&sq, &bad).passed());
    }

    #[test]
    fn cyclic_four_is_not_a_2_2_realization() {
        // top-left 2x2 block of the cyclic square is not closed on {1,2}
        let sq = LatinSquare::cyclic(4);
        let p = Partition::new(vec![2, 2]).unwrap();
        assert!(!verify_realization(&sq, &p).passed());
    }

    #[test]
    fn random_squares_are_latin() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in [1, 2, 4, 7, 12] {
            for _ in 0..5 {
                assert!(verify_latin(&LatinSquare::random(n, &mut rng)).passed());
            }
        }
    }

    #[test]
    fn block_permutation_round_trips() {
        let (sq, p) = fixtures::order9_realization();
        let r = Realization::new(sq, p).unwrap();
        let perm = Permutation::new(vec![1, 2, 3, 0]).unwrap();
        let moved = r.permute_blocks(&perm);
        assert_eq!(moved.partition().parts(), &[2, 2, 2, 3]);
        let back = moved.permute_blocks(&perm.inverse());
        assert_eq!(&back, &r);
    }
}
