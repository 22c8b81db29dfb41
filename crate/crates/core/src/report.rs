//! Verifier reports. Every verifier in the crate collects all violations it
//! finds (up to a configurable cap) instead of stopping at the first one.

use crate::rat::Rat;
use std::fmt;

pub const DEFAULT_VIOLATION_CAP: usize = 32;

/// One structural violation found by a verifier. Indices are 0-based in
/// memory and printed 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    OrderMismatch {
        expected: u64,
        actual: u64,
    },
    SymbolCount {
        axis: Axis,
        index: usize,
        symbol: usize,
        expected: u64,
        actual: u64,
    },
    BlockNotLatin {
        block: usize,
        detail: String,
    },
    BlockForeignSymbol {
        block: usize,
        row: usize,
        col: usize,
        symbol: usize,
    },
    CellSize {
        row: usize,
        col: usize,
        expected: u64,
        actual: u64,
    },
    RespectDiagonal {
        index: usize,
        expected: u64,
        actual: String,
    },
    PairSum {
        i: usize,
        j: usize,
        expected: Rat,
        actual: Rat,
    },
    NegativeValue {
        key: String,
        value: Rat,
    },
    Structural {
        detail: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Row,
    Column,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Row => write!(f, "row"),
            Axis::Column => write!(f, "column"),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OrderMismatch { expected, actual } => {
                write!(f, "order mismatch: expected {expected}, got {actual}")
            }
            Violation::SymbolCount {
                axis,
                index,
                symbol,
                expected,
                actual,
            } => write!(
                f,
                "{axis} {}: symbol {} occurs {actual} times, expected {expected}",
                index + 1,
                symbol + 1
            ),
            Violation::BlockNotLatin { block, detail } => {
                write!(f, "block {}: {detail}", block + 1)
            }
            Violation::BlockForeignSymbol {
                block,
                row,
                col,
                symbol,
            } => write!(
                f,
                "block {}: cell ({},{}) holds symbol {} outside the block interval",
                block + 1,
                row + 1,
                col + 1,
                symbol + 1
            ),
            Violation::CellSize {
                row,
                col,
                expected,
                actual,
            } => write!(
                f,
                "cell ({},{}): holds {actual} symbols, expected {expected}",
                row + 1,
                col + 1
            ),
            Violation::RespectDiagonal {
                index,
                expected,
                actual,
            } => write!(
                f,
                "diagonal cell ({0},{0}): expected {expected} copies of symbol {0} and nothing else, got {actual}",
                index + 1
            ),
            Violation::PairSum {
                i,
                j,
                expected,
                actual,
            } => write!(
                f,
                "pair ({},{}): values sum to {actual}, expected {expected}",
                i + 1,
                j + 1
            ),
            Violation::NegativeValue { key, value } => {
                write!(f, "negative value {value} at {key}")
            }
            Violation::Structural { detail } => write!(f, "{detail}"),
        }
    }
}

/// Outcome of a verification: pass iff no violations were found. Only the
/// first `cap` violations are stored; `found` counts all of them.
#[derive(Debug, Clone)]
pub struct Report {
    cap: usize,
    violations: Vec<Violation>,
    found: usize,
}

impl Report {
    pub fn new() -> Self {
        Report::with_cap(DEFAULT_VIOLATION_CAP)
    }

    pub fn with_cap(cap: usize) -> Self {
        Report {
            cap,
            violations: Vec::new(),
            found: 0,
        }
    }

    pub fn record(&mut self, v: Violation) {
        self.found += 1;
        if self.violations.len() < self.cap {
            self.violations.push(v);
        }
    }

    pub fn passed(&self) -> bool {
        self.found == 0
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn found(&self) -> usize {
        self.found
    }

    pub fn is_truncated(&self) -> bool {
        self.found > self.violations.len()
    }
}

impl Default for Report {
    fn default() -> Self {
        Report::new()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "pass");
        }
        writeln!(f, "fail ({} violations)", self.found)?;
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        if self.is_truncated() {
            writeln!(f, "  ... {} more", self.found - self.violations.len())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps_but_counts_all() {
        let mut r = Report::with_cap(2);
        for i in 0..5 {
            r.record(Violation::Structural {
                detail: format!("v{i}"),
            });
        }
        assert!(!r.passed());
        assert_eq!(r.found(), 5);
        assert_eq!(r.violations().len(), 2);
        assert!(r.is_truncated());
    }
}
