//! Latin squares with many pairwise disjoint transversals, and idempotent
//! latin squares. Odd orders and orders divisible by four are constructed
//! directly (cyclic squares, binary field squares, Kronecker products);
//! order 6 is a fixture with four transversals; orders 10 and 14 are found
//! by a seeded search for an orthogonal mate, cached on disk.

use crate::latin::LatinSquare;
use crate::report::{Report, Violation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::fmt;
use std::io::Write as _;
use std::path::PathBuf;
use std::sync::{Mutex, OnceLock};

/// Largest order attempted by the orthogonal-mate search for orders
/// congruent to 2 mod 4.
pub const MATE_SEARCH_BOUND: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransversalError {
    OrderTwo,
    NoIdempotentOrderTwo,
    AboveSearchBound { order: usize, bound: usize },
    SearchFailed { order: usize },
}

impl fmt::Display for TransversalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransversalError::OrderTwo => {
                write!(f, "no order-2 latin square has a transversal")
            }
            TransversalError::NoIdempotentOrderTwo => {
                write!(f, "no idempotent latin square of order 2 exists")
            }
            TransversalError::AboveSearchBound { order, bound } => write!(
                f,
                "order {order} is 2 mod 4 and above the mate search bound {bound}"
            ),
            TransversalError::SearchFailed { order } => {
                write!(f, "mate search gave up for order {order}")
            }
        }
    }
}

impl std::error::Error for TransversalError {}

/// A latin square together with pairwise disjoint transversals, each a set
/// of cells (row, col) meeting every row, column and symbol once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalSquare {
    pub square: LatinSquare,
    pub transversals: Vec<Vec<(usize, usize)>>,
}

impl TransversalSquare {
    /// Structural check of every claimed transversal and their disjointness.
    pub fn verify(&self) -> Report {
        let mut report = Report::new();
        crate::latin::check_latin(&self.square, &mut report);
        let n = self.square.order();
        let mut cell_used = vec![false; n * n];
        for (t, cells) in self.transversals.iter().enumerate() {
            let mut rows = vec![false; n];
            let mut cols = vec![false; n];
            let mut syms = vec![false; n];
            if cells.len() != n {
                report.record(Violation::Structural {
                    detail: format!("transversal {} has {} cells, expected {n}", t + 1, cells.len()),
                });
                continue;
            }
            for &(r, c) in cells {
                let s = self.square.get(r, c);
                if rows[r] || cols[c] || syms[s] {
                    report.record(Violation::Structural {
                        detail: format!(
                            "transversal {} repeats a row, column or symbol at ({},{})",
                            t + 1,
                            r + 1,
                            c + 1
                        ),
                    });
                }
                rows[r] = true;
                cols[c] = true;
                syms[s] = true;
                if cell_used[r * n + c] {
                    report.record(Violation::Structural {
                        detail: format!(
                            "cell ({},{}) lies on two transversals",
                            r + 1,
                            c + 1
                        ),
                    });
                }
                cell_used[r * n + c] = true;
            }
        }
        report
    }

    /// Permutes columns and relabels symbols so that the chosen transversal
    /// becomes the main diagonal with symbol i at (i,i).
    pub fn diagonalized(&self, which: usize) -> TransversalSquare {
        let n = self.square.order();
        let t = &self.transversals[which];
        // column permutation: the transversal cell in row r moves to (r, r)
        let mut col_to = vec![0usize; n]; // old col -> new col
        for &(r, c) in t {
            col_to[c] = r;
        }
        // symbol relabel: the transversal symbol in row r becomes r
        let mut sym_to = vec![0usize; n];
        for &(r, c) in t {
            sym_to[self.square.get(r, c)] = r;
        }
        let mut cells = vec![0usize; n * n];
        for r in 0..n {
            for c in 0..n {
                cells[r * n + col_to[c]] = sym_to[self.square.get(r, c)];
            }
        }
        let square = LatinSquare::new(n, cells).expect("well formed");
        let transversals = self
            .transversals
            .iter()
            .map(|cells| {
                let mut mapped: Vec<(usize, usize)> =
                    cells.iter().map(|&(r, c)| (r, col_to[c])).collect();
                mapped.sort_unstable();
                mapped
            })
            .collect();
        TransversalSquare {
            square,
            transversals,
        }
    }
}

/// Odd order: the square `L(i,j) = (i+j)/2 mod m` is idempotent and its
/// broken diagonals are disjoint transversals (the main diagonal included).
fn odd_transversal_square(m: usize) -> TransversalSquare {
    debug_assert!(m % 2 == 1);
    let half = (m + 1) / 2; // inverse of 2 mod m
    let cells = (0..m)
        .flat_map(|i| (0..m).map(move |j| ((i + j) * half) % m))
        .collect();
    let square = LatinSquare::new(m, cells).expect("well formed");
    let transversals = (0..m)
        .map(|c| (0..m).map(|i| (i, (i + c) % m)).collect())
        .collect();
    TransversalSquare {
        square,
        transversals,
    }
}

/// Multiplication in GF(2^e) for e in 2..=4.
fn gf2e_mul(mut a: usize, mut b: usize, e: u32) -> usize {
    let modulus = match e {
        2 => 0b111,
        3 => 0b1011,
        4 => 0b10011,
        _ => unreachable!("only e in 2..=4 needed"),
    };
    let mut acc = 0usize;
    while b > 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        if a & (1 << e) != 0 {
            a ^= modulus;
        }
        b >>= 1;
    }
    acc
}

/// Order 2^e: the xor square; the constant classes of the orthogonal mate
/// `g*x + y` (g any element other than 0 and 1) are its transversals.
fn binary_field_transversal_square(m: usize) -> TransversalSquare {
    let e = m.trailing_zeros();
    debug_assert!(m.is_power_of_two() && (2..=4).contains(&e));
    let cells = (0..m).flat_map(|x| (0..m).map(move |y| x ^ y)).collect();
    let square = LatinSquare::new(m, cells).expect("well formed");
    let g = 2usize;
    let transversals = (0..m)
        .map(|c| (0..m).map(|x| (x, c ^ gf2e_mul(g, x, e))).collect())
        .collect();
    TransversalSquare {
        square,
        transversals,
    }
}

/// Kronecker product: transversal pairs multiply.
fn product_transversal_square(a: &TransversalSquare, b: &TransversalSquare) -> TransversalSquare {
    let (ma, mb) = (a.square.order(), b.square.order());
    let m = ma * mb;
    let mut cells = vec![0usize; m * m];
    for r1 in 0..ma {
        for r2 in 0..mb {
            for c1 in 0..ma {
                for c2 in 0..mb {
                    let r = r1 * mb + r2;
                    let c = c1 * mb + c2;
                    cells[r * m + c] = a.square.get(r1, c1) * mb + b.square.get(r2, c2);
                }
            }
        }
    }
    let square = LatinSquare::new(m, cells).expect("well formed");
    let mut transversals = Vec::new();
    for ta in &a.transversals {
        for tb in &b.transversals {
            let mut cells = Vec::with_capacity(m);
            for &(r1, c1) in ta {
                for &(r2, c2) in tb {
                    cells.push((r1 * mb + r2, c1 * mb + c2));
                }
            }
            cells.sort_unstable();
            transversals.push(cells);
        }
    }
    TransversalSquare {
        square,
        transversals,
    }
}

/// Order-6 square with four pairwise disjoint transversals, the first of
/// which is the idempotent main diagonal (six disjoint transversals do not
/// exist at order 6).
fn order6_transversal_square() -> TransversalSquare {
    let square = LatinSquare::from_rows_one_based(&[
        vec![1, 4, 5, 6, 2, 3],
        vec![3, 2, 6, 1, 4, 5],
        vec![5, 1, 3, 2, 6, 4],
        vec![6, 5, 1, 4, 3, 2],
        vec![4, 6, 2, 3, 5, 1],
        vec![2, 3, 4, 5, 1, 6],
    ])
    .expect("well-formed fixture");
    let transversals = vec![
        vec![(0, 0), (1, 1), (2, 2), (3, 3), (4, 4), (5, 5)],
        vec![(0, 3), (1, 0), (2, 5), (3, 1), (4, 2), (5, 4)],
        vec![(0, 4), (1, 5), (2, 1), (3, 0), (4, 3), (5, 2)],
        vec![(0, 2), (1, 3), (2, 4), (3, 5), (4, 0), (5, 1)],
    ];
    TransversalSquare {
        square,
        transversals,
    }
}

/// Derives the transversal decomposition of `base` from an orthogonal mate:
/// the cells where the mate shows symbol t form transversal t.
fn transversals_from_mate(base: &LatinSquare, mate: &LatinSquare) -> Vec<Vec<(usize, usize)>> {
    let n = base.order();
    let mut transversals = vec![Vec::with_capacity(n); n];
    for r in 0..n {
        for c in 0..n {
            transversals[mate.get(r, c)].push((r, c));
        }
    }
    transversals
}

/// Enumerates every transversal of `sq` as a column-per-row assignment.
fn enumerate_transversals(sq: &LatinSquare) -> Vec<Vec<usize>> {
    let n = sq.order();
    debug_assert!(n <= 32);
    let mut out = Vec::new();
    let mut cols = Vec::with_capacity(n);
    fn dfs(
        sq: &LatinSquare,
        row: usize,
        used_cols: u32,
        used_syms: u32,
        cols: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = sq.order();
        if row == n {
            out.push(cols.clone());
            return;
        }
        for c in 0..n {
            if used_cols & (1 << c) != 0 {
                continue;
            }
            let s = sq.get(row, c);
            if used_syms & (1 << s) != 0 {
                continue;
            }
            cols.push(c);
            dfs(sq, row + 1, used_cols | (1 << c), used_syms | (1 << s), cols, out);
            cols.pop();
        }
    }
    dfs(sq, 0, 0, 0, &mut cols, &mut out);
    out
}

/// Exact cover: pick n pairwise cell-disjoint transversals covering every
/// cell, i.e. an orthogonal mate. Chooses the most constrained uncovered
/// cell first; gives up after `node_budget` nodes.
fn exact_cover_mate(
    n: usize,
    transversals: &[Vec<usize>],
    node_budget: &mut u64,
) -> Option<Vec<usize>> {
    // cell (r, c) -> indices of transversals through it
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    for (t, cols) in transversals.iter().enumerate() {
        for (r, &c) in cols.iter().enumerate() {
            through[r * n + c].push(t);
        }
    }
    let mut cell_covered = vec![false; n * n];
    let mut alive = vec![true; transversals.len()];
    let mut chosen = Vec::new();

    fn recurse(
        n: usize,
        transversals: &[Vec<usize>],
        through: &[Vec<usize>],
        cell_covered: &mut [bool],
        alive: &mut [bool],
        chosen: &mut Vec<usize>,
        node_budget: &mut u64,
    ) -> bool {
        if *node_budget == 0 {
            return false;
        }
        *node_budget -= 1;
        if chosen.len() == n {
            return true;
        }
        // most constrained uncovered cell
        let mut best: Option<(usize, usize)> = None;
        for cell in 0..n * n {
            if cell_covered[cell] {
                continue;
            }
            let count = through[cell].iter().filter(|&&t| alive[t]).count();
            if count == 0 {
                return false;
            }
            if best.is_none_or(|(_, c)| count < c) {
                best = Some((cell, count));
                if count == 1 {
                    break;
                }
            }
        }
        let (cell, _) = best.expect("uncovered cell exists");
        let candidates: Vec<usize> = through[cell].iter().copied().filter(|&t| alive[t]).collect();
        for t in candidates {
            // place transversal t: cover its cells, kill overlapping ones
            let mut killed = Vec::new();
            for (r, &c) in transversals[t].iter().enumerate() {
                cell_covered[r * n + c] = true;
                for &other in &through[r * n + c] {
                    if alive[other] {
                        alive[other] = false;
                        killed.push(other);
                    }
                }
            }
            chosen.push(t);
            if recurse(n, transversals, through, cell_covered, alive, chosen, node_budget) {
                return true;
            }
            chosen.pop();
            for (r, &c) in transversals[t].iter().enumerate() {
                cell_covered[r * n + c] = false;
            }
            for other in killed {
                alive[other] = true;
            }
        }
        false
    }

    if recurse(
        n,
        transversals,
        &through,
        &mut cell_covered,
        &mut alive,
        &mut chosen,
        node_budget,
    ) {
        Some(chosen)
    } else {
        None
    }
}

/// Searches random squares until one decomposes into n disjoint
/// transversals; returns base and mate.
fn search_mate(m: usize, seed: u64) -> Result<(LatinSquare, LatinSquare), TransversalError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7261_6e64_6f6d_u64);
    for _attempt in 0..2000 {
        let sq = LatinSquare::random(m, &mut rng);
        let transversals = enumerate_transversals(&sq);
        if transversals.len() < m {
            continue;
        }
        let mut budget = 2_000_000u64;
        if let Some(chosen) = exact_cover_mate(m, &transversals, &mut budget) {
            let mut mate_cells = vec![0usize; m * m];
            for (t, &idx) in chosen.iter().enumerate() {
                for (r, &c) in transversals[idx].iter().enumerate() {
                    mate_cells[r * m + c] = t;
                }
            }
            let mate = LatinSquare::new(m, mate_cells).expect("well formed");
            return Ok((sq, mate));
        }
    }
    Err(TransversalError::SearchFailed { order: m })
}

// ---- cache ---------------------------------------------------------------

#[derive(PartialEq, Eq, Hash, Clone)]
enum CacheKey {
    MatePair { order: usize, seed: u64 },
    Idempotent { order: usize },
}

fn cache_path() -> PathBuf {
    match std::env::var_os("PILS_SQUARE_CACHE") {
        Some(p) => PathBuf::from(p),
        None => std::env::temp_dir().join("pils-squares.txt"),
    }
}

type CacheMap = HashMap<CacheKey, Vec<LatinSquare>>;

fn cache() -> &'static Mutex<CacheMap> {
    static CACHE: OnceLock<Mutex<CacheMap>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(load_cache_file().unwrap_or_default()))
}

/// Record format: a header `kind order seed count`, then `count` squares,
/// each as `order` rows of `order` 1-based integers.
fn load_cache_file() -> Option<CacheMap> {
    let text = std::fs::read_to_string(cache_path()).ok()?;
    let mut map = CacheMap::new();
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    while let Some(header) = lines.next() {
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return None;
        }
        let order: usize = fields[1].parse().ok()?;
        let seed: u64 = fields[2].parse().ok()?;
        let count: usize = fields[3].parse().ok()?;
        let mut squares = Vec::with_capacity(count);
        for _ in 0..count {
            let mut rows = Vec::with_capacity(order);
            for _ in 0..order {
                let row: Vec<usize> = lines
                    .next()?
                    .split_whitespace()
                    .map(|t| t.parse().ok())
                    .collect::<Option<_>>()?;
                rows.push(row);
            }
            squares.push(LatinSquare::from_rows_one_based(&rows).ok()?);
        }
        let key = match fields[0] {
            "mate-pair" => CacheKey::MatePair { order, seed },
            "idempotent" => CacheKey::Idempotent { order },
            _ => return None,
        };
        map.insert(key, squares);
    }
    Some(map)
}

fn save_cache_file(map: &CacheMap) {
    let mut records: Vec<String> = Vec::new();
    let mut entries: Vec<(&CacheKey, &Vec<LatinSquare>)> = map.iter().collect();
    entries.sort_by_key(|(k, _)| match k {
        CacheKey::MatePair { order, seed } => (0, *order, *seed),
        CacheKey::Idempotent { order } => (1, *order, 0),
    });
    for (key, squares) in entries {
        let header = match key {
            CacheKey::MatePair { order, seed } => {
                format!("mate-pair {order} {seed} {}", squares.len())
            }
            CacheKey::Idempotent { order } => format!("idempotent {order} 0 {}", squares.len()),
        };
        records.push(header);
        for sq in squares {
            let n = sq.order();
            for r in 0..n {
                let row: Vec<String> =
                    (0..n).map(|c| (sq.get(r, c) + 1).to_string()).collect();
                records.push(row.join(" "));
            }
        }
    }
    // best effort: the cache is an optimization, not state
    let _ = std::fs::File::create(cache_path())
        .and_then(|mut f| writeln!(f, "{}", records.join("\n")));
}

fn with_cache(
    key: CacheKey,
    build: impl FnOnce() -> Result<Vec<LatinSquare>, TransversalError>,
) -> Result<Vec<LatinSquare>, TransversalError> {
    let mut guard = cache().lock().expect("cache lock");
    if let Some(squares) = guard.get(&key) {
        return Ok(squares.clone());
    }
    let squares = build()?;
    guard.insert(key, squares.clone());
    save_cache_file(&guard);
    Ok(squares)
}

// ---- public constructors ---------------------------------------------------

/// A latin square of order m with m pairwise disjoint transversals (4 for
/// m = 6; an error for m = 2). Deterministic; searched orders use seed 0.
pub fn transversal_square(m: usize) -> Result<TransversalSquare, TransversalError> {
    transversal_square_with(m, 0)
}

pub fn transversal_square_with(m: usize, seed: u64) -> Result<TransversalSquare, TransversalError> {
    let ts = match m {
        0 => panic!("order must be positive"),
        2 => return Err(TransversalError::OrderTwo),
        1 => TransversalSquare {
            square: LatinSquare::cyclic(1),
            transversals: vec![vec![(0, 0)]],
        },
        6 => order6_transversal_square(),
        m if m % 2 == 1 => odd_transversal_square(m),
        m if m % 4 == 0 => {
            let twos = 1usize << m.trailing_zeros();
            let odd = m / twos;
            let base = binary_field_transversal_square(twos);
            if odd == 1 {
                base
            } else {
                product_transversal_square(&base, &odd_transversal_square(odd))
            }
        }
        m => {
            // m = 2 mod 4, m >= 10
            if m > MATE_SEARCH_BOUND {
                return Err(TransversalError::AboveSearchBound {
                    order: m,
                    bound: MATE_SEARCH_BOUND,
                });
            }
            let squares = with_cache(CacheKey::MatePair { order: m, seed }, || {
                let (base, mate) = search_mate(m, seed)?;
                Ok(vec![base, mate])
            })?;
            let (base, mate) = (&squares[0], &squares[1]);
            TransversalSquare {
                square: base.clone(),
                transversals: transversals_from_mate(base, mate),
            }
        }
    };
    let report = ts.verify();
    assert!(report.passed(), "transversal construction invalid: {report}");
    Ok(ts)
}

/// An idempotent latin square (`L(i,i) = i`) of order n != 2. Odd orders
/// use `(i+j)/2`; even orders are found by backtracking with the diagonal
/// pinned, cached on disk.
pub fn idempotent_square(n: usize) -> Result<LatinSquare, TransversalError> {
    assert!(n > 0, "order must be positive");
    if n == 2 {
        return Err(TransversalError::NoIdempotentOrderTwo);
    }
    if n % 2 == 1 {
        return Ok(odd_transversal_square(n).square);
    }
    let squares = with_cache(CacheKey::Idempotent { order: n }, || {
        Ok(vec![search_idempotent(n)])
    })?;
    let sq = squares[0].clone();
    debug_assert!(crate::latin::verify_latin(&sq).passed());
    debug_assert!((0..n).all(|i| sq.get(i, i) == i));
    Ok(sq)
}

/// Backtracking with most-constrained-cell ordering; the diagonal is fixed
/// to the identity. Every order other than 2 admits a completion.
fn search_idempotent(n: usize) -> LatinSquare {
    debug_assert!(n != 2);
    let mut grid = vec![usize::MAX; n * n];
    let mut row_used = vec![0u32; n];
    let mut col_used = vec![0u32; n];
    for i in 0..n {
        grid[i * n + i] = i;
        row_used[i] |= 1 << i;
        col_used[i] |= 1 << i;
    }
    fn solve(
        n: usize,
        grid: &mut [usize],
        row_used: &mut [u32],
        col_used: &mut [u32],
    ) -> bool {
        // most constrained empty cell
        let mut best: Option<(usize, u32, u32)> = None;
        for cell in 0..n * n {
            if grid[cell] != usize::MAX {
                continue;
            }
            let (r, c) = (cell / n, cell % n);
            let avail = !(row_used[r] | col_used[c]) & ((1u32 << n) - 1);
            let count = avail.count_ones();
            if count == 0 {
                return false;
            }
            if best.is_none_or(|(_, _, bc)| count < bc) {
                best = Some((cell, avail, count));
                if count == 1 {
                    break;
                }
            }
        }
        let Some((cell, avail, _)) = best else {
            return true; // no empty cells left
        };
        let (r, c) = (cell / n, cell % n);
        let mut bits = avail;
        while bits != 0 {
            let s = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            grid[cell] = s;
            row_used[r] |= 1 << s;
            col_used[c] |= 1 << s;
            if solve(n, grid, row_used, col_used) {
                return true;
            }
            grid[cell] = usize::MAX;
            row_used[r] &= !(1 << s);
            col_used[c] &= !(1 << s);
        }
        false
    }
    let ok = solve(n, &mut grid, &mut row_used, &mut col_used);
    assert!(ok, "idempotent square exists for every order != 2");
    LatinSquare::new(n, grid).expect("well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructive_orders_have_full_transversal_sets() {
        for m in [1, 3, 4, 5, 7, 8, 9, 12] {
            let ts = transversal_square(m).unwrap();
            assert_eq!(ts.transversals.len(), m, "order {m}");
            assert!(ts.verify().passed());
        }
    }

    #[test]
    fn order_six_has_exactly_four() {
        let ts = transversal_square(6).unwrap();
        assert_eq!(ts.transversals.len(), 4);
        assert!(ts.verify().passed());
        // fixture diagonal is already the identity transversal
        for i in 0..6 {
            assert_eq!(ts.square.get(i, i), i);
        }
    }

    #[test]
    fn order_two_errors() {
        assert_eq!(transversal_square(2), Err(TransversalError::OrderTwo));
    }

    #[test]
    fn diagonalization_normalizes_any_transversal() {
        let ts = transversal_square(8).unwrap();
        for which in [0, 3] {
            let d = ts.diagonalized(which);
            assert!(d.verify().passed());
            for i in 0..8 {
                assert_eq!(d.square.get(i, i), i);
            }
            assert!(d.transversals[which].iter().enumerate().all(|(i, &(r, c))| r == i && c == i));
        }
    }

    #[test]
    fn searched_order_ten_decomposes() {
        let ts = transversal_square(10).unwrap();
        assert_eq!(ts.transversals.len(), 10);
        assert!(ts.verify().passed());
    }

    #[test]
    #[ignore = "order 14 search can take minutes on a cold cache"]
    fn searched_order_fourteen_decomposes() {
        let ts = transversal_square(14).unwrap();
        assert_eq!(ts.transversals.len(), 14);
        assert!(ts.verify().passed());
    }

    #[test]
    fn idempotent_squares_small_orders() {
        for n in [1, 3, 4, 5, 6, 7, 8] {
            let sq = idempotent_square(n).unwrap();
            assert!(crate::latin::verify_latin(&sq).passed(), "order {n}");
            for i in 0..n {
                assert_eq!(sq.get(i, i), i);
            }
        }
        assert!(idempotent_square(2).is_err());
    }
}
