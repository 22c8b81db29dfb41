//! Symmetric rational outline squares: one non-negative rational per
//! unordered index triple, constrained by the pair-sum identity
//! `sum_l X(i,j,l) = p_i p_j`.

use crate::outline::RationalOutlineSquare;
use crate::partition::{Partition, Permutation};
use crate::rat::Rat;
use crate::report::{Report, Violation};
use std::collections::BTreeMap;
use std::fmt;

/// Sorted form of an index triple; the key type for [`SymRos`] values.
pub fn triple(i: usize, j: usize, l: usize) -> [usize; 3] {
    let mut t = [i, j, l];
    t.sort_unstable();
    t
}

/// A symmetric rational outline square. Zero values are not stored, so map
/// equality is value equality.
#[derive(Clone, PartialEq, Eq)]
pub struct SymRos {
    partition: Partition,
    values: BTreeMap<[usize; 3], Rat>,
}

impl SymRos {
    pub fn new(partition: Partition) -> Self {
        SymRos {
            partition,
            values: BTreeMap::new(),
        }
    }

    /// Empty square with the respect diagonal `X(i,i,i) = p_i^2` filled in.
    pub fn with_respect_diagonal(partition: Partition) -> Self {
        let mut s = SymRos::new(partition);
        for i in 0..s.partition.k() {
            let p = s.partition.part(i);
            s.set(i, i, i, Rat::from_u64(p * p));
        }
        s
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn k(&self) -> usize {
        self.partition.k()
    }

    pub fn get(&self, i: usize, j: usize, l: usize) -> Rat {
        self.values
            .get(&triple(i, j, l))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, l: usize, value: Rat) {
        let k = self.k();
        assert!(i < k && j < k && l < k, "triple index out of range");
        let key = triple(i, j, l);
        if value.is_zero() {
            self.values.remove(&key);
        } else {
            self.values.insert(key, value);
        }
    }

    pub fn pair_sum(&self, i: usize, j: usize) -> Rat {
        (0..self.k()).map(|l| self.get(i, j, l)).sum()
    }

    /// Stored (nonzero) values keyed by sorted triple.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize; 3], &Rat)> {
        self.values.iter()
    }

    pub fn values(&self) -> impl Iterator<Item = &Rat> {
        self.values.values()
    }

    /// Relabels indices: new index `i` refers to old index `perm.image(i)`,
    /// and the partition is rearranged to match.
    pub fn permute(&self, perm: &Permutation) -> SymRos {
        assert_eq!(perm.len(), self.k());
        let inv = perm.inverse();
        let mut out = SymRos::new(self.partition.permuted(perm));
        for (key, v) in &self.values {
            out.set(inv.image(key[0]), inv.image(key[1]), inv.image(key[2]), v.clone());
        }
        out
    }

    /// Oriented view: cell (i,j) holds `X(i,j,l)` copies of each symbol l.
    pub fn to_rational_outline(&self) -> RationalOutlineSquare {
        let k = self.k();
        let mut out = RationalOutlineSquare::empty(self.partition.clone());
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    let v = self.get(i, j, l);
                    if !v.is_zero() {
                        out.set(i, j, l, v);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for SymRos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymRos on {:?}", self.partition)?;
        for (key, v) in &self.values {
            writeln!(f, "  ({},{},{}) = {}", key[0] + 1, key[1] + 1, key[2] + 1, v)?;
        }
        Ok(())
    }
}

/// Checks non-negativity and the pair-sum identity for every pair; with
/// `require_respect`, also `X(i,i,i) = p_i^2` and `X(i,i,j) = 0`.
pub fn check_sym_ros(x: &SymRos, require_respect: bool, report: &mut Report) {
    let p = x.partition();
    let k = p.k();
    for (key, v) in x.entries() {
        if v.is_negative() {
            report.record(Violation::NegativeValue {
                key: format!("({},{},{})", key[0] + 1, key[1] + 1, key[2] + 1),
                value: v.clone(),
            });
        }
    }
    for i in 0..k {
        for j in i..k {
            let expected = Rat::from_u64(p.part(i) * p.part(j));
            let actual = x.pair_sum(i, j);
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
    if require_respect {
        for i in 0..k {
            let want = p.part(i) * p.part(i);
            if x.get(i, i, i) != Rat::from_u64(want) {
                report.record(Violation::RespectDiagonal {
                    index: i,
                    expected: want,
                    actual: x.get(i, i, i).to_string(),
                });
            }
            for j in 0..k {
                if j != i && !x.get(i, i, j).is_zero() {
                    report.record(Violation::Structural {
                        detail: format!(
                            "respect violated: X({0},{0},{1}) = {2}, expected 0",
                            i + 1,
                            j + 1,
                            x.get(i, i, j)
                        ),
                    });
                }
            }
        }
    }
}

pub fn verify_sym_ros(x: &SymRos, require_respect: bool) -> Report {
    let mut report = Report::new();
    check_sym_ros(x, require_respect, &mut report);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The only symmetric square respecting (3,2,2,2): the pair sums
    /// determine every distinct-triple value.
    pub fn sym_3222() -> SymRos {
        let p = Partition::new(vec![3, 2, 2, 2]).unwrap();
        let mut x = SymRos::with_respect_diagonal(p);
        x.set(0, 1, 2, Rat::from_int(3));
        x.set(0, 1, 3, Rat::from_int(3));
        x.set(0, 2, 3, Rat::from_int(3));
        x.set(1, 2, 3, Rat::from_int(1));
        x
    }

    #[test]
    fn determined_square_verifies_with_respect() {
        assert!(verify_sym_ros(&sym_3222(), true).passed());
    }

    #[test]
    fn single_part_square_is_trivial() {
        let p = Partition::new(vec![7]).unwrap();
        let x = SymRos::with_respect_diagonal(p);
        assert!(verify_sym_ros(&x, true).passed());
    }

    #[test]
    fn perturbation_fails_its_pair() {
        let mut x = sym_3222();
        x.set(0, 1, 2, Rat::from_int(2));
        let report = verify_sym_ros(&x, true);
        assert!(!report.passed());
        assert!(report
            .violations()
            .iter()
            .any(|v| matches!(v, Violation::PairSum { i: 0, j: 1, .. })));
    }

    #[test]
    fn permutation_relabels_consistently() {
        let x = sym_3222();
        let perm = Permutation::new(vec![1, 2, 3, 0]).unwrap();
        let y = x.permute(&perm);
        assert_eq!(y.partition().parts(), &[2, 2, 2, 3]);
        assert!(verify_sym_ros(&y, true).passed());
        // value carried along: old (0,1,2) appears at new labels (3,0,1)
        assert_eq!(y.get(3, 0, 1), Rat::from_int(3));
        let back = y.permute(&perm.inverse());
        assert_eq!(back, x);
    }

    #[test]
    fn oriented_view_verifies() {
        let r = sym_3222().to_rational_outline();
        assert!(crate::outline::verify_rational_outline(&r, true).passed());
    }
}
