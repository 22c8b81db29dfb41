//! Frequency arrays and outline arrays. A frequency array F prescribes,
//! simultaneously, the size of every cell and the per-symbol row and column
//! counts of an outline array: `|O(i,j)| = F(i,j)`, symbol l occurs
//! `F(i,l)` times in row i and `F(l,j)` times in column j.

use crate::outline::{multiset_size, Multiset};
use crate::report::{Axis, Report, Violation};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyArray {
    order: usize,
    entries: Vec<u64>,
}

impl FrequencyArray {
    pub fn zero(order: usize) -> Self {
        FrequencyArray {
            order,
            entries: vec![0; order * order],
        }
    }

    pub fn from_fn(order: usize, f: impl Fn(usize, usize) -> u64) -> Self {
        let entries = (0..order)
            .flat_map(|i| (0..order).map(move |j| f(i, j)))
            .collect();
        FrequencyArray { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.order + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.entries[i * self.order + j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn plus(&self, other: &FrequencyArray) -> FrequencyArray {
        assert_eq!(self.order, other.order);
        FrequencyArray {
            order: self.order,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Group-summed frequency array over a partition of the index set.
    pub fn grouped(&self, groups: &[Vec<usize>]) -> FrequencyArray {
        let k = groups.len();
        FrequencyArray::from_fn(k, |i, j| {
            groups[i]
                .iter()
                .map(|&x| groups[j].iter().map(|&y| self.get(x, y)).sum::<u64>())
                .sum()
        })
    }
}

impl fmt::Display for FrequencyArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// A k x k array of multisets over `0..k`, to be checked against a
/// governing frequency array.
#[derive(Clone, PartialEq, Eq)]
pub struct OutlineArray {
    order: usize,
    cells: Vec<Multiset>,
}

impl OutlineArray {
    pub fn empty(order: usize) -> Self {
        OutlineArray {
            order,
            cells: vec![Multiset::new(); order * order],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cell(&self, i: usize, j: usize) -> &Multiset {
        &self.cells[i * self.order + j]
    }

    pub fn add(&mut self, i: usize, j: usize, sym: usize, count: u64) {
        assert!(sym < self.order, "symbol out of range");
        if count > 0 {
            *self.cells[i * self.order + j].entry(sym).or_insert(0) += count;
        }
    }

    pub fn count(&self, i: usize, j: usize, sym: usize) -> u64 {
        self.cell(i, j).get(&sym).copied().unwrap_or(0)
    }

    pub fn row_count(&self, i: usize, sym: usize) -> u64 {
        (0..self.order).map(|j| self.count(i, j, sym)).sum()
    }

    pub fn col_count(&self, j: usize, sym: usize) -> u64 {
        (0..self.order).map(|i| self.count(i, j, sym)).sum()
    }

    /// The frequency array implied by cell sizes alone.
    pub fn implied_frequency(&self) -> FrequencyArray {
        FrequencyArray::from_fn(self.order, |i, j| multiset_size(self.cell(i, j)))
    }
}

impl fmt::Debug for OutlineArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OutlineArray(order {})", self.order)?;
        for i in 0..self.order {
            for j in 0..self.order {
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

/// Checks the three outline-array conditions against `freq`.
pub fn check_outline_array(o: &OutlineArray, freq: &FrequencyArray, report: &mut Report) {
    if o.order() != freq.order() {
        report.record(Violation::OrderMismatch {
            expected: freq.order() as u64,
            actual: o.order() as u64,
        });
        return;
    }
    let k = o.order();
    for i in 0..k {
        for j in 0..k {
            let actual = multiset_size(o.cell(i, j));
            if actual != freq.get(i, j) {
                report.record(Violation::CellSize {
                    row: i,
                    col: j,
                    expected: freq.get(i, j),
                    actual,
                });
            }
        }
    }
    for i in 0..k {
        for sym in 0..k {
            let actual = o.row_count(i, sym);
            if actual != freq.get(i, sym) {
                report.record(Violation::SymbolCount {
                    axis: Axis::Row,
                    index: i,
                    symbol: sym,
                    expected: freq.get(i, sym),
                    actual,
                });
            }
            let actual = o.col_count(i, sym);
            if actual != freq.get(sym, i) {
                report.record(Violation::SymbolCount {
                    axis: Axis::Column,
                    index: i,
                    symbol: sym,
                    expected: freq.get(sym, i),
                    actual,
                });
            }
        }
    }
}

pub fn verify_outline_array(o: &OutlineArray, freq: &FrequencyArray) -> Report {
    let mut report = Report::new();
    check_outline_array(o, freq, &mut report);
    report
}

/// Cell-wise union; the governing frequency arrays add.
pub fn sum_outline_arrays(a: &OutlineArray, b: &OutlineArray) -> Result<OutlineArray, String> {
    if a.order() != b.order() {
        return Err(format!(
            "cannot sum outline arrays of orders {} and {}",
            a.order(),
            b.order()
        ));
    }
    let mut out = a.clone();
    for i in 0..b.order() {
        for j in 0..b.order() {
            for (&sym, &count) in b.cell(i, j) {
                out.add(i, j, sym, count);
            }
        }
    }
    Ok(out)
}

/// Amalgamates rows, columns and symbols by a partition of the index set
/// into groups; group g becomes index g of the result.
pub fn amalgamate_outline_array(
    o: &OutlineArray,
    groups: &[Vec<usize>],
) -> Result<OutlineArray, String> {
    let k = o.order();
    let mut group_of = vec![usize::MAX; k];
    for (g, group) in groups.iter().enumerate() {
        if group.is_empty() {
            return Err(format!("group {} is empty", g + 1));
        }
        for &i in group {
            if i >= k {
                return Err(format!("index {} out of range", i + 1));
            }
            if group_of[i] != usize::MAX {
                return Err(format!("index {} appears in two groups", i + 1));
            }
            group_of[i] = g;
        }
    }
    if group_of.contains(&usize::MAX) {
        return Err("groups do not cover all indices".into());
    }
    let mut out = OutlineArray::empty(groups.len());
    for i in 0..k {
        for j in 0..k {
            for (&sym, &count) in o.cell(i, j) {
                out.add(group_of[i], group_of[j], group_of[sym], count);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// An idempotent square of order n with the diagonal removed is an
    /// outline array for J - I.
    fn deleted_diagonal(n: usize) -> (OutlineArray, FrequencyArray) {
        let sq = crate::lifting::transversal::idempotent_square(n).unwrap();
        let mut o = OutlineArray::empty(n);
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    o.add(r, c, sq.get(r, c), 1);
                }
            }
        }
        let f = FrequencyArray::from_fn(n, |i, j| u64::from(i != j));
        (o, f)
    }

    #[test]
    fn deleted_diagonal_idempotent_is_an_outline_array() {
        for n in [3, 4, 5] {
            let (o, f) = deleted_diagonal(n);
            assert!(verify_outline_array(&o, &f).passed(), "order {n}");
        }
    }

    #[test]
    fn summing_adds_frequencies() {
        let (o1, f1) = deleted_diagonal(4);
        let (o2, f2) = deleted_diagonal(4);
        let sum = sum_outline_arrays(&o1, &o2).unwrap();
        assert!(verify_outline_array(&sum, &f1.plus(&f2)).passed());
        // summing with an empty array is the identity
        let empty = OutlineArray::empty(4);
        assert_eq!(sum_outline_arrays(&o1, &empty).unwrap(), o1);
    }

    #[test]
    fn amalgamation_by_singletons_is_identity() {
        let (o, _) = deleted_diagonal(4);
        let groups: Vec<Vec<usize>> = (0..4).map(|i| vec![i]).collect();
        assert_eq!(amalgamate_outline_array(&o, &groups).unwrap(), o);
    }

    #[test]
    fn amalgamation_to_one_group() {
        let (o, f) = deleted_diagonal(4);
        let got = amalgamate_outline_array(&o, &[vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(got.order(), 1);
        assert_eq!(got.count(0, 0, 0), 12);
        assert!(verify_outline_array(&got, &f.grouped(&[vec![0, 1, 2, 3]])).passed());
    }

    #[test]
    fn amalgamation_respects_grouped_frequency() {
        let (o, f) = deleted_diagonal(5);
        let groups = vec![vec![0], vec![1], vec![2], vec![3, 4]];
        let got = amalgamate_outline_array(&o, &groups).unwrap();
        assert!(verify_outline_array(&got, &f.grouped(&groups)).passed());
    }

    #[test]
    fn size_violation_is_reported() {
        let (mut o, f) = deleted_diagonal(3);
        o.add(0, 1, 2, 1);
        assert!(!verify_outline_array(&o, &f).passed());
    }
}
