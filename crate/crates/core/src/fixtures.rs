//! Worked example objects used across the test suites and documentation:
//! small squares with disjoint subsquares and their amalgamations.

use crate::latin::LatinSquare;
use crate::outline::{multiset_from_counts, OutlineSquare, RationalOutlineSquare};
use crate::partition::Partition;
use crate::rat::Rat;

/// Order-8 latin square with disjoint subsquares of orders 3 and 2 that do
/// not sit on the main diagonal.
pub fn order8_two_subsquares() -> LatinSquare {
    LatinSquare::from_rows_one_based(&[
        vec![1, 6, 2, 3, 4, 5, 8, 7],
        vec![4, 5, 1, 6, 7, 2, 3, 8],
        vec![6, 7, 3, 8, 2, 4, 5, 1],
        vec![3, 4, 6, 7, 8, 1, 2, 5],
        vec![7, 1, 8, 2, 5, 3, 4, 6],
        vec![5, 2, 7, 1, 3, 8, 6, 4],
        vec![2, 8, 4, 5, 1, 6, 7, 3],
        vec![8, 3, 5, 4, 6, 7, 1, 2],
    ])
    .expect("well-formed fixture")
}

/// Order-9 realization of (3,2,2,2) in normal form.
pub fn order9_realization() -> (LatinSquare, Partition) {
    let sq = LatinSquare::from_rows_one_based(&[
        vec![1, 2, 3, 6, 9, 8, 5, 7, 4],
        vec![3, 1, 2, 7, 8, 9, 4, 6, 5],
        vec![2, 3, 1, 9, 6, 4, 8, 5, 7],
        vec![7, 8, 6, 4, 5, 3, 9, 1, 2],
        vec![8, 9, 7, 5, 4, 1, 3, 2, 6],
        vec![9, 5, 8, 2, 1, 6, 7, 4, 3],
        vec![5, 4, 9, 8, 2, 7, 6, 3, 1],
        vec![4, 6, 5, 3, 7, 2, 1, 8, 9],
        vec![6, 7, 4, 1, 3, 5, 2, 9, 8],
    ])
    .expect("well-formed fixture");
    (sq, Partition::new(vec![3, 2, 2, 2]).unwrap())
}

/// The reduction of [`order9_realization`] modulo (3,2,2,2): a symmetric
/// integer outline square respecting the partition. Symbols are 1-based in
/// the literals below and shifted down on construction.
pub fn outline_3222() -> OutlineSquare {
    let p = Partition::new(vec![3, 2, 2, 2]).unwrap();
    let cells_1b: [&[(usize, u64)]; 16] = [
        &[(1, 9)],
        &[(3, 3), (4, 3)],
        &[(2, 3), (4, 3)],
        &[(2, 3), (3, 3)],
        &[(3, 3), (4, 3)],
        &[(2, 4)],
        &[(1, 3), (4, 1)],
        &[(1, 3), (3, 1)],
        &[(2, 3), (4, 3)],
        &[(1, 3), (4, 1)],
        &[(3, 4)],
        &[(1, 3), (2, 1)],
        &[(2, 3), (3, 3)],
        &[(1, 3), (3, 1)],
        &[(1, 3), (2, 1)],
        &[(4, 4)],
    ];
    let cells = cells_1b
        .iter()
        .map(|counts| {
            let shifted: Vec<(usize, u64)> =
                counts.iter().map(|&(s, c)| (s - 1, c)).collect();
            multiset_from_counts(&shifted)
        })
        .collect();
    OutlineSquare::new(p, cells)
}

/// A rational outline square respecting (3,2,2,2) with denominators 2. Its
/// oriented counts are not symmetric; it is the standard example of a
/// rational square that only becomes an integer outline square after
/// scaling the partition by q = 2.
pub fn rational_outline_3222() -> RationalOutlineSquare {
    let p = Partition::new(vec![3, 2, 2, 2]).unwrap();
    let mut o = RationalOutlineSquare::empty(p);
    // (cell row, cell col, symbol, value) with 1-based row/col/symbol
    let entries: [(usize, usize, usize, i64, i64); 28] = [
        (1, 1, 1, 9, 1),
        (1, 2, 3, 7, 2),
        (1, 2, 4, 5, 2),
        (1, 3, 2, 5, 2),
        (1, 3, 4, 7, 2),
        (1, 4, 2, 7, 2),
        (1, 4, 3, 5, 2),
        (2, 1, 3, 5, 2),
        (2, 1, 4, 7, 2),
        (2, 2, 2, 4, 1),
        (2, 3, 1, 7, 2),
        (2, 3, 4, 1, 2),
        (2, 4, 1, 5, 2),
        (2, 4, 3, 3, 2),
        (3, 1, 2, 7, 2),
        (3, 1, 4, 5, 2),
        (3, 2, 1, 5, 2),
        (3, 2, 4, 3, 2),
        (3, 3, 3, 4, 1),
        (3, 4, 1, 7, 2),
        (3, 4, 2, 1, 2),
        (4, 1, 2, 5, 2),
        (4, 1, 3, 7, 2),
        (4, 2, 1, 7, 2),
        (4, 2, 3, 1, 2),
        (4, 3, 1, 5, 2),
        (4, 3, 2, 3, 2),
        (4, 4, 4, 4, 1),
    ];
    for (i, j, sym, num, den) in entries {
        o.set(i - 1, j - 1, sym - 1, Rat::new(num, den));
    }
    o
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latin::verify_latin;
    use crate::outline::{verify_outline_square, verify_rational_outline};

    #[test]
    fn fixtures_are_internally_valid() {
        assert!(verify_latin(&order8_two_subsquares()).passed());
        let (sq, _) = order9_realization();
        assert!(verify_latin(&sq).passed());
        assert!(verify_outline_square(&outline_3222(), true).passed());
        assert!(verify_rational_outline(&rational_outline_3222(), true).passed());
    }
}
