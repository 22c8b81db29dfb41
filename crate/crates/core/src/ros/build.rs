//! Constructions on symmetric rational outline squares: symmetrization of
//! an integer outline square, clearing denominators, convex interpolation
//! between squares differing in one part, and the chained interpolation
//! used for the bounded families.

use crate::outline::OutlineSquare;
use crate::partition::{Partition, Permutation};
use crate::rat::Rat;
use crate::report::Report;
use crate::ros::oracle::{feasibility_oracle, OracleError, OracleOutcome};
use crate::symros::SymRos;
use std::collections::HashMap;
use std::fmt;

#[derive(Debug)]
pub enum BuildError {
    /// Input square failed verification; the report says where.
    InvalidInput(Report),
    PartitionRelation { detail: String },
    PreconditionUnmet { detail: String },
    BaseInfeasible { parts: Vec<u64> },
    Oracle(OracleError),
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::InvalidInput(report) => write!(f, "input failed verification: {report}"),
            BuildError::PartitionRelation { detail } => write!(f, "{detail}"),
            BuildError::PreconditionUnmet { detail } => write!(f, "{detail}"),
            BuildError::BaseInfeasible { parts } => {
                write!(f, "no symmetric square exists for base partition {parts:?}")
            }
            BuildError::Oracle(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for BuildError {}

impl From<OracleError> for BuildError {
    fn from(e: OracleError) -> Self {
        BuildError::Oracle(e)
    }
}

/// Symmetrizes a respecting outline square: the diagonal keeps `p_i^2`, a
/// distinct triple takes the mean of its six oriented counts, and mixed
/// triples are zero. The result always respects the same partition.
pub fn symmetrize(o: &OutlineSquare) -> Result<SymRos, BuildError> {
    let report = crate::outline::verify_outline_square(o, true);
    if !report.passed() {
        return Err(BuildError::InvalidInput(report));
    }
    let k = o.k();
    let mut x = SymRos::with_respect_diagonal(o.partition().clone());
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                let six = o.count(i, j, l)
                    + o.count(j, i, l)
                    + o.count(j, l, i)
                    + o.count(l, j, i)
                    + o.count(i, l, j)
                    + o.count(l, i, j);
                x.set(i, j, l, Rat::from_u64(six) / Rat::from_int(6));
            }
        }
    }
    Ok(x)
}

/// Clears denominators: returns the least `q` making all values integral
/// and the integer outline square on the scaled partition with counts
/// `q^2 * X(i,j,l)` placed symmetrically.
pub fn scale_to_integer(x: &SymRos) -> (u64, OutlineSquare) {
    crate::outline::scale_rational_outline(&x.to_rational_outline())
}

/// Convex interpolation between squares on partitions differing from the
/// target only at position `m`, by `-a` and `+b`. With weights b/(a+b) and
/// a/(a+b) the pair sums interpolate exactly, and the target diagonal value
/// `h_m^2` is pinned directly.
pub fn interpolate(
    x_a: &SymRos,
    x_b: &SymRos,
    m: usize,
    a: u64,
    b: u64,
) -> Result<SymRos, BuildError> {
    let pa = x_a.partition();
    let pb = x_b.partition();
    if pa.k() != pb.k() || m >= pa.k() {
        return Err(BuildError::PartitionRelation {
            detail: format!(
                "partitions must share k and m must index a part (k={}, {}; m={})",
                pa.k(),
                pb.k(),
                m + 1
            ),
        });
    }
    for i in 0..pa.k() {
        if i != m && pa.part(i) != pb.part(i) {
            return Err(BuildError::PartitionRelation {
                detail: format!(
                    "partitions differ at position {} away from m={}",
                    i + 1,
                    m + 1
                ),
            });
        }
    }
    if pa.part(m) + a != pb.part(m) - b {
        return Err(BuildError::PartitionRelation {
            detail: format!(
                "parts at m must bracket the target: {} + {a} != {} - {b}",
                pa.part(m),
                pb.part(m)
            ),
        });
    }
    for (name, x) in [("first", x_a), ("second", x_b)] {
        let report = crate::symros::verify_sym_ros(x, true);
        if !report.passed() {
            return Err(BuildError::PreconditionUnmet {
                detail: format!("{name} square does not respect its partition: {report}"),
            });
        }
    }
    if a == 0 {
        return Ok(x_a.clone());
    }
    if b == 0 {
        return Ok(x_b.clone());
    }

    let h_m = pa.part(m) + a;
    let mut parts = pa.parts().to_vec();
    parts[m] = h_m;
    let target = Partition::new(parts).expect("positive parts");

    let denom = Rat::from_u64(a + b);
    let w_a = Rat::from_u64(b) / denom.clone();
    let w_b = Rat::from_u64(a) / denom;

    let mut out = SymRos::new(target);
    let mut keys: Vec<[usize; 3]> = x_a.entries().map(|(k, _)| *k).collect();
    keys.extend(x_b.entries().map(|(k, _)| *k));
    keys.sort_unstable();
    keys.dedup();
    for key in keys {
        let [i, j, l] = key;
        let v = if i == m && j == m && l == m {
            Rat::from_u64(h_m * h_m)
        } else {
            &w_a * &x_a.get(i, j, l) + &w_b * &x_b.get(i, j, l)
        };
        out.set(i, j, l, v);
    }
    out.set(m, m, m, Rat::from_u64(h_m * h_m));
    Ok(out)
}

/// Repeated interpolation: from base squares on `(h1^i, hk^(k-i))` for
/// `u <= i <= k-1` (taken from the feasibility oracle) to a square on
/// `(h1^u, g_1, ..., g_(k-u-1), hk)` for any non-increasing `g` between
/// `hk` and `h1`.
pub fn chain_interpolate(
    h1: u64,
    hk: u64,
    u: usize,
    k: usize,
    g: &[u64],
) -> Result<SymRos, BuildError> {
    if u == 0 || k < u + 1 || g.len() != k - u - 1 {
        return Err(BuildError::PreconditionUnmet {
            detail: format!(
                "need 1 <= u < k and {} middle parts, got u={u}, k={k}, {} parts",
                k.saturating_sub(u + 1),
                g.len()
            ),
        });
    }
    if h1 < hk || hk == 0 {
        return Err(BuildError::PreconditionUnmet {
            detail: format!("need h1 >= hk > 0, got h1={h1}, hk={hk}"),
        });
    }
    let mut prev = h1;
    for &gi in g {
        if gi > prev || gi < hk {
            return Err(BuildError::PreconditionUnmet {
                detail: format!("middle parts must be non-increasing within [{hk}, {h1}]"),
            });
        }
        prev = gi;
    }

    let mut base_cache: HashMap<usize, SymRos> = HashMap::new();
    let mut base = |i: usize| -> Result<SymRos, BuildError> {
        if let Some(x) = base_cache.get(&i) {
            return Ok(x.clone());
        }
        let mut parts = vec![h1; i];
        parts.extend(vec![hk; k - i]);
        let p = Partition::new(parts.clone()).expect("positive parts");
        let x = match feasibility_oracle(&p)? {
            OracleOutcome::Feasible(x) => x,
            OracleOutcome::Infeasible(_) => return Err(BuildError::BaseInfeasible { parts }),
        };
        base_cache.insert(i, x.clone());
        Ok(x)
    };

    // squares[i - u] holds the square on (h1^i, g_1..g_t, hk^(k-i-t))
    let mut squares: Vec<SymRos> = (u..=k - 1).map(&mut base).collect::<Result<_, _>>()?;
    for (t, &g_cur) in g.iter().enumerate() {
        let mut next: Vec<SymRos> = Vec::with_capacity(squares.len() - 1);
        for j in u..=k - 2 - t {
            let low = &squares[j - u]; // hk at position j + t
            let high = &squares[j + 1 - u]; // (h1^(j+1), g.., hk..): move one h1 inward
            let m = j + t;
            let mut image: Vec<usize> = (0..j).collect();
            image.extend(j + 1..j + 1 + t);
            image.push(j);
            image.extend(j + 1 + t..k);
            let perm = Permutation::new(image).expect("valid permutation");
            let high_view = high.permute(&perm);
            next.push(interpolate(low, &high_view, m, g_cur - hk, h1 - g_cur)?);
        }
        squares = next;
    }
    debug_assert_eq!(squares.len(), 1);
    Ok(squares.pop().expect("one square remains"))
}

/// Builds a respecting square for either bounded family: the largest three
/// parts equal (any k >= 3), or k >= 5 with `h1 <= (k-2) hk`. The input
/// must be in non-increasing order.
pub fn ros_bounded_family(p: &Partition) -> Result<SymRos, BuildError> {
    if !p.is_canonical() {
        return Err(BuildError::PreconditionUnmet {
            detail: "partition must be non-increasing".into(),
        });
    }
    let k = p.k();
    let h = p.parts();
    if k >= 3 && h[0] == h[1] && h[1] == h[2] {
        if k == 3 {
            // the single respecting square on (h,h,h)
            let mut x = SymRos::with_respect_diagonal(p.clone());
            x.set(0, 1, 2, Rat::from_u64(h[0] * h[0]));
            return Ok(x);
        }
        return chain_interpolate(h[0], h[k - 1], 3, k, &h[3..k - 1]);
    }
    if k >= 5 && h[0] <= (k as u64 - 2) * h[k - 1] {
        return chain_interpolate(h[0], h[k - 1], 1, k, &h[1..k - 1]);
    }
    Err(BuildError::PreconditionUnmet {
        detail: format!(
            "neither family applies to {p}: need h1=h2=h3 (k>=3) or h1 <= (k-2)hk (k>=5)"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::latin::LatinSquare;
    use crate::outline::{reduce_modulo, verify_outline_square};
    use crate::symros::verify_sym_ros;

    #[test]
    fn symmetrize_worked_outline() {
        let x = symmetrize(&fixtures::outline_3222()).unwrap();
        assert!(verify_sym_ros(&x, true).passed());
        assert_eq!(x.get(0, 1, 2), Rat::from_int(3));
        assert_eq!(x.get(1, 2, 3), Rat::from_int(1));
    }

    #[test]
    fn symmetrize_rejects_non_respecting_input() {
        let sq = fixtures::order8_two_subsquares();
        let p = Partition::uniform(2, 4);
        let o = reduce_modulo(&sq, &p).unwrap();
        assert!(matches!(symmetrize(&o), Err(BuildError::InvalidInput(_))));
    }

    #[test]
    fn symmetrize_singleton_partition_gives_sixths() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let sq = LatinSquare::random(6, &mut rng);
        let p = Partition::uniform(1, 6);
        let o = reduce_modulo(&sq, &p).unwrap();
        let x = symmetrize(&o).unwrap();
        assert!(verify_sym_ros(&x, true).passed());
        let six = Rat::from_int(6);
        for (_, v) in x.entries() {
            let scaled = v * &six;
            assert!(scaled.is_integer());
        }
    }

    #[test]
    fn scaling_integral_square_is_identity() {
        let x = symmetrize(&fixtures::outline_3222()).unwrap();
        let (q, o) = scale_to_integer(&x);
        assert_eq!(q, 1);
        assert!(verify_outline_square(&o, true).passed());
        assert_eq!(o.partition().parts(), &[3, 2, 2, 2]);
    }

    #[test]
    fn interpolation_identity_and_interior_cases() {
        let oracle = |parts: &[u64]| {
            feasibility_oracle(&Partition::new(parts.to_vec()).unwrap())
                .unwrap()
                .into_feasible()
                .unwrap()
        };
        let x = oracle(&[2, 2, 2, 1, 1]);
        let y = oracle(&[2, 2, 2, 3, 1]);
        let c = interpolate(&x, &y, 3, 0, 2).unwrap();
        assert_eq!(c, x);
        let c = interpolate(&x, &y, 3, 1, 1).unwrap();
        assert_eq!(c.partition().parts(), &[2, 2, 2, 2, 1]);
        assert!(verify_sym_ros(&c, true).passed());
    }

    #[test]
    fn interpolation_rejects_unrelated_partitions() {
        let x = SymRos::with_respect_diagonal(Partition::new(vec![2, 2, 2]).unwrap());
        let y = SymRos::with_respect_diagonal(Partition::new(vec![2, 3, 3]).unwrap());
        assert!(matches!(
            interpolate(&x, &y, 1, 1, 1),
            Err(BuildError::PartitionRelation { .. })
        ));
    }

    #[test]
    fn chain_interpolation_examples() {
        // degenerate choices return base squares
        let x = chain_interpolate(3, 1, 3, 5, &[1]).unwrap();
        assert_eq!(x.partition().parts(), &[3, 3, 3, 1, 1]);
        assert!(verify_sym_ros(&x, true).passed());
        let x = chain_interpolate(3, 1, 3, 5, &[3]).unwrap();
        assert_eq!(x.partition().parts(), &[3, 3, 3, 3, 1]);
        assert!(verify_sym_ros(&x, true).passed());
        // a proper interior choice
        let x = chain_interpolate(4, 1, 3, 6, &[3, 2]).unwrap();
        assert_eq!(x.partition().parts(), &[4, 4, 4, 3, 2, 1]);
        assert!(verify_sym_ros(&x, true).passed());
    }

    #[test]
    fn bounded_family_examples() {
        let p = Partition::new(vec![2, 2, 2, 1, 1]).unwrap();
        let x = ros_bounded_family(&p).unwrap();
        assert!(verify_sym_ros(&x, true).passed());
        assert_eq!(x.partition(), &p);

        let p = Partition::uniform(4, 3);
        let x = ros_bounded_family(&p).unwrap();
        assert_eq!(x.get(0, 1, 2), Rat::from_int(16));

        let p = Partition::new(vec![5, 5, 5, 1]).unwrap();
        let x = ros_bounded_family(&p).unwrap();
        assert!(verify_sym_ros(&x, true).passed());

        // 7 > (5-2)*2: neither family applies
        let p = Partition::new(vec![7, 2, 2, 2, 2]).unwrap();
        assert!(matches!(
            ros_bounded_family(&p),
            Err(BuildError::PreconditionUnmet { .. })
        ));
    }
}
