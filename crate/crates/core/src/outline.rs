//! Outline squares: k x k arrays of multisets obtained by amalgamating the
//! rows, columns and symbols of a latin square by the intervals of a
//! partition, and the rational generalization where per-cell symbol counts
//! may be non-negative rationals.

use crate::latin::LatinSquare;
use crate::partition::Partition;
use crate::rat::{lcm_denominators, Rat};
use crate::report::{Axis, Report, Violation};
use num::ToPrimitive;
use std::collections::BTreeMap;
use std::fmt;

/// A multiset over symbols `0..k`, stored as symbol -> count with zero
/// counts absent, so equality of cells is map equality.
pub type Multiset = BTreeMap<usize, u64>;

pub fn multiset_size(ms: &Multiset) -> u64 {
    ms.values().sum()
}

pub fn multiset_from_counts(counts: &[(usize, u64)]) -> Multiset {
    let mut ms = Multiset::new();
    for &(sym, count) in counts {
        if count > 0 {
            *ms.entry(sym).or_insert(0) += count;
        }
    }
    ms
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderMismatch {
    pub expected: u64,
    pub actual: u64,
}

impl fmt::Display for OrderMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "square order {} does not match partition sum {}",
            self.actual, self.expected
        )
    }
}

impl std::error::Error for OrderMismatch {}

/// A k x k array of multisets over `0..k`, associated to a partition. The
/// outline conditions themselves are checked by [`verify_outline_square`].
#[derive(Clone, PartialEq, Eq)]
pub struct OutlineSquare {
    partition: Partition,
    cells: Vec<Multiset>,
}

impl OutlineSquare {
    pub fn new(partition: Partition, cells: Vec<Multiset>) -> Self {
        assert_eq!(cells.len(), partition.k() * partition.k());
        OutlineSquare { partition, cells }
    }

    pub fn empty(partition: Partition) -> Self {
        let k = partition.k();
        OutlineSquare {
            partition,
            cells: vec![Multiset::new(); k * k],
        }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn k(&self) -> usize {
        self.partition.k()
    }

    pub fn cell(&self, i: usize, j: usize) -> &Multiset {
        &self.cells[i * self.k() + j]
    }

    pub fn cell_mut(&mut self, i: usize, j: usize) -> &mut Multiset {
        let k = self.k();
        &mut self.cells[i * k + j]
    }

    pub fn count(&self, i: usize, j: usize, sym: usize) -> u64 {
        self.cell(i, j).get(&sym).copied().unwrap_or(0)
    }

    pub fn add(&mut self, i: usize, j: usize, sym: usize, count: u64) {
        if count > 0 {
            *self.cell_mut(i, j).entry(sym).or_insert(0) += count;
        }
    }

    pub fn row_count(&self, i: usize, sym: usize) -> u64 {
        (0..self.k()).map(|j| self.count(i, j, sym)).sum()
    }

    pub fn col_count(&self, j: usize, sym: usize) -> u64 {
        (0..self.k()).map(|i| self.count(i, j, sym)).sum()
    }
}

impl fmt::Debug for OutlineSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OutlineSquare on {:?}", self.partition)?;
        for i in 0..self.k() {
            for j in 0..self.k() {
                let parts: Vec<String> = self
                    .cell(i, j)
                    .iter()
                    .map(|(s, c)| format!("{}:{}", s + 1, c))
                    .collect();
                writeln!(f, "  ({},{}) {{{}}}", i + 1, j + 1, parts.join(" "))?;
            }
        }
        Ok(())
    }
}

/// Amalgamates rows, columns and symbols of `sq` by the intervals of `p`.
pub fn reduce_modulo(sq: &LatinSquare, p: &Partition) -> Result<OutlineSquare, OrderMismatch> {
    if sq.order() as u64 != p.n() {
        return Err(OrderMismatch {
            expected: p.n(),
            actual: sq.order() as u64,
        });
    }
    let block = p.block_of_elements();
    let mut out = OutlineSquare::empty(p.clone());
    for r in 0..sq.order() {
        for c in 0..sq.order() {
            out.add(block[r], block[c], block[sq.get(r, c)], 1);
        }
    }
    Ok(out)
}

/// Checks the three outline-square counting conditions, and when
/// `require_respect` is set also that diagonal cell `i` holds exactly
/// `p_i^2` copies of symbol `i` and nothing else.
pub fn check_outline_square(o: &OutlineSquare, require_respect: bool, report: &mut Report) {
    let p = o.partition();
    let k = p.k();
    for i in 0..k {
        for j in 0..k {
            let expected = p.part(i) * p.part(j);
            let actual = multiset_size(o.cell(i, j));
            if actual != expected {
                report.record(Violation::CellSize {
                    row: i,
                    col: j,
                    expected,
                    actual,
                });
            }
        }
    }
    for i in 0..k {
        for sym in 0..k {
            let expected = p.part(i) * p.part(sym);
            let actual = o.row_count(i, sym);
            if actual != expected {
                report.record(Violation::SymbolCount {
                    axis: Axis::Row,
                    index: i,
                    symbol: sym,
                    expected,
                    actual,
                });
            }
        }
    }
    for j in 0..k {
        for sym in 0..k {
            let expected = p.part(j) * p.part(sym);
            let actual = o.col_count(j, sym);
            if actual != expected {
                report.record(Violation::SymbolCount {
                    axis: Axis::Column,
                    index: j,
                    symbol: sym,
                    expected,
                    actual,
                });
            }
        }
    }
    if require_respect {
        for i in 0..k {
            let want = p.part(i) * p.part(i);
            if o.count(i, i, i) != want {
                report.record(Violation::RespectDiagonal {
                    index: i,
                    expected: want,
                    actual: format!("{} copies", o.count(i, i, i)),
                });
            }
        }
    }
}

pub fn verify_outline_square(o: &OutlineSquare, require_respect: bool) -> Report {
    let mut report = Report::new();
    check_outline_square(o, require_respect, &mut report);
    report
}

/// A rational outline square: per-cell symbol counts are non-negative
/// rationals subject to the same three conditions as an outline square.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalOutlineSquare {
    partition: Partition,
    cells: Vec<BTreeMap<usize, Rat>>,
}

impl RationalOutlineSquare {
    pub fn empty(partition: Partition) -> Self {
        let k = partition.k();
        RationalOutlineSquare {
            partition,
            cells: vec![BTreeMap::new(); k * k],
        }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn k(&self) -> usize {
        self.partition.k()
    }

    pub fn get(&self, i: usize, j: usize, sym: usize) -> Rat {
        self.cells[i * self.k() + j]
            .get(&sym)
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, sym: usize, value: Rat) {
        let k = self.k();
        if value.is_zero() {
            self.cells[i * k + j].remove(&sym);
        } else {
            self.cells[i * k + j].insert(sym, value);
        }
    }

    pub fn cell(&self, i: usize, j: usize) -> &BTreeMap<usize, Rat> {
        &self.cells[i * self.k() + j]
    }

    pub fn values(&self) -> impl Iterator<Item = &Rat> {
        self.cells.iter().flat_map(|c| c.values())
    }
}

impl fmt::Debug for RationalOutlineSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalOutlineSquare on {:?}", self.partition)?;
        for i in 0..self.k() {
            for j in 0..self.k() {
                let parts: Vec<String> = self
                    .cell(i, j)
                    .iter()
                    .map(|(s, v)| format!("{}:{}", s + 1, v))
                    .collect();
                writeln!(f, "  ({},{}) {{{}}}", i + 1, j + 1, parts.join(" "))?;
            }
        }
        Ok(())
    }
}

/// Checks the rational outline conditions: cell sums, per-symbol row sums
/// and column sums, non-negativity, and optionally respect.
pub fn check_rational_outline(
    o: &RationalOutlineSquare,
    require_respect: bool,
    report: &mut Report,
) {
    let p = o.partition();
    let k = p.k();
    for i in 0..k {
        for j in 0..k {
            for (sym, v) in o.cell(i, j) {
                if v.is_negative() {
                    report.record(Violation::NegativeValue {
                        key: format!("cell ({},{}) symbol {}", i + 1, j + 1, sym + 1),
                        value: v.clone(),
                    });
                }
            }
            let expected = Rat::from_u64(p.part(i) * p.part(j));
            let actual: Rat = o.cell(i, j).values().cloned().sum();
            if actual != expected {
                report.record(Violation::PairSum {
                    i,
                    j,
                    expected,
                    actual,
                });
            }
        }
    }
    for i in 0..k {
        for sym in 0..k {
            let expected = Rat::from_u64(p.part(i) * p.part(sym));
            let row: Rat = (0..k).map(|j| o.get(i, j, sym)).sum();
            if row != expected {
                report.record(Violation::Structural {
                    detail: format!(
                        "row {}: symbol {} counts sum to {}, expected {}",
                        i + 1,
                        sym + 1,
                        row,
                        expected
                    ),
                });
            }
            let col: Rat = (0..k).map(|j| o.get(j, i, sym)).sum();
            if col != expected {
                report.record(Violation::Structural {
                    detail: format!(
                        "column {}: symbol {} counts sum to {}, expected {}",
                        i + 1,
                        sym + 1,
                        col,
                        expected
                    ),
                });
            }
        }
    }
    if require_respect {
        for i in 0..k {
            let want = Rat::from_u64(p.part(i) * p.part(i));
            if o.get(i, i, i) != want {
                report.record(Violation::RespectDiagonal {
                    index: i,
                    expected: p.part(i) * p.part(i),
                    actual: o.get(i, i, i).to_string(),
                });
            }
        }
    }
}

pub fn verify_rational_outline(o: &RationalOutlineSquare, require_respect: bool) -> Report {
    let mut report = Report::new();
    check_rational_outline(o, require_respect, &mut report);
    report
}

/// Scales a rational outline square by the least q clearing all
/// denominators, returning q and the integer outline square on the scaled
/// partition with counts `q^2 * value`.
pub fn scale_rational_outline(o: &RationalOutlineSquare) -> (u64, OutlineSquare) {
    let q_big = lcm_denominators(o.values());
    let q = q_big.to_u64().expect("scale factor fits in u64");
    let p = o.partition().scaled(q);
    let mut out = OutlineSquare::empty(p);
    let q_rat = Rat::from_u64(q);
    let q_sq = &q_rat * &q_rat;
    for i in 0..o.k() {
        for j in 0..o.k() {
            for (&sym, v) in o.cell(i, j) {
                let count = (v * &q_sq)
                    .to_u64()
                    .expect("scaled count is a non-negative integer");
                out.add(i, j, sym, count);
            }
        }
    }
    (q, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn reduction_of_worked_square_matches_fixture() {
        let (sq, p) = fixtures::order9_realization();
        let reduced = reduce_modulo(&sq, &p).unwrap();
        let fixture = fixtures::outline_3222();
        assert_eq!(reduced, fixture);
        // spot value from the worked example
        assert_eq!(
            reduced.cell(0, 1),
            &multiset_from_counts(&[(2, 3), (3, 3)])
        );
    }

    #[test]
    fn identity_amalgamation() {
        let sq = LatinSquare::cyclic(5);
        let p = Partition::uniform(1, 5);
        let o = reduce_modulo(&sq, &p).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(o.cell(i, j), &multiset_from_counts(&[(sq.get(i, j), 1)]));
            }
        }
    }

    #[test]
    fn full_amalgamation() {
        let sq = LatinSquare::cyclic(4);
        let p = Partition::new(vec![4]).unwrap();
        let o = reduce_modulo(&sq, &p).unwrap();
        assert_eq!(o.cell(0, 0), &multiset_from_counts(&[(0, 16)]));
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let sq = LatinSquare::cyclic(5);
        let p = Partition::new(vec![3, 3]).unwrap();
        assert!(reduce_modulo(&sq, &p).is_err());
    }

    #[test]
    fn fixture_outline_respects_partition() {
        let o = fixtures::outline_3222();
        assert!(verify_outline_square(&o, true).passed());
    }

    #[test]
    fn moving_one_symbol_breaks_condition_one() {
        let mut o = fixtures::outline_3222();
        // move one symbol between cells (1,2) and (1,3)
        let sym = *o.cell(0, 1).keys().next().unwrap();
        let c = o.count(0, 1, sym);
        if c == 1 {
            o.cell_mut(0, 1).remove(&sym);
        } else {
            o.cell_mut(0, 1).insert(sym, c - 1);
        }
        o.add(0, 2, sym, 1);
        let report = verify_outline_square(&o, false);
        assert!(!report.passed());
        assert!(report
            .violations()
            .iter()
            .any(|v| matches!(v, Violation::CellSize { .. })));
    }

    #[test]
    fn nonconsecutive_subsquares_fail_respect() {
        let sq = fixtures::order8_two_subsquares();
        let p = Partition::uniform(2, 4);
        let o = reduce_modulo(&sq, &p).unwrap();
        assert!(verify_outline_square(&o, false).passed());
        assert!(!verify_outline_square(&o, true).passed());
        assert_ne!(o.count(0, 0, 0), 4);
    }

    #[test]
    fn round_trip_reduction_always_verifies() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for parts in [vec![3, 2, 2], vec![4, 1, 1, 1], vec![2, 2, 2, 1]] {
            let p = Partition::new(parts).unwrap();
            let sq = LatinSquare::random(p.n() as usize, &mut rng);
            let o = reduce_modulo(&sq, &p).unwrap();
            assert!(verify_outline_square(&o, false).passed());
        }
    }

    #[test]
    fn rational_fixture_verifies_and_scales_by_two() {
        let r = fixtures::rational_outline_3222();
        assert!(verify_rational_outline(&r, true).passed());
        let (q, scaled) = scale_rational_outline(&r);
        assert_eq!(q, 2);
        assert_eq!(scaled.partition().parts(), &[6, 4, 4, 4]);
        assert!(verify_outline_square(&scaled, true).passed());
    }

    #[test]
    fn perturbing_rational_fixture_fails_pair_sum() {
        let mut r = fixtures::rational_outline_3222();
        r.set(0, 1, 2, Rat::from_int(3)); // 7/2 -> 3
        let report = verify_rational_outline(&r, true);
        assert!(!report.passed());
        assert!(report
            .violations()
            .iter()
            .any(|v| matches!(v, Violation::PairSum { i: 0, j: 1, .. })));
    }
}
