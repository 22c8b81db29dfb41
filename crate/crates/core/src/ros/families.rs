//! Closed-form symmetric squares for partitions with many equal parts:
//! `(h1, h2, h3^m)`, `(h1, h2, h3, h4^m)` and `(h1, h2^a, h3^b)`. Each
//! family has an exact feasibility characterization; on success the square
//! is produced by completing a similar solution.

use crate::partition::Partition;
use crate::rat::Rat;
use crate::ros::similar::{complete_similar, expand_similar, ClassSolution, ClassStructure};
use crate::symros::SymRos;
use std::collections::BTreeMap;
use std::fmt;

/// A family's exact feasibility test failed; `condition` is the 1-based
/// index of the first violated inequality in that family's list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Infeasible {
    pub family: &'static str,
    pub condition: usize,
}

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "no square exists for family {}: condition ({}) is violated",
            self.family, self.condition
        )
    }
}

impl std::error::Error for Infeasible {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyError {
    Infeasible(Infeasible),
    BadInput { detail: String },
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::Infeasible(i) => write!(f, "{i}"),
            FamilyError::BadInput { detail } => write!(f, "{detail}"),
        }
    }
}

impl std::error::Error for FamilyError {}

fn infeasible(family: &'static str, condition: usize) -> FamilyError {
    FamilyError::Infeasible(Infeasible { family, condition })
}

fn bad_input(detail: String) -> FamilyError {
    FamilyError::BadInput { detail }
}

/// Square on `(h1, h2, h3^m)`, in that index order. Feasible iff
/// (1) `h1 <= m h3`, (2) `h2 <= m h3`, and
/// (3) `h3^2 - h3(h1+h2)/(m-1) + 2 h1 h2 / (m(m-1)) >= 0`;
/// the solution is then fully determined by the completion formulas.
pub fn family_h1h2h3m(h1: u64, h2: u64, h3: u64, m: usize) -> Result<SymRos, FamilyError> {
    if h1 == 0 || h2 == 0 || h3 == 0 || m < 3 {
        return Err(bad_input(format!(
            "need positive parts and m >= 3, got ({h1},{h2},{h3}) m={m}"
        )));
    }
    let mm = m as u64;
    if h1 > mm * h3 {
        return Err(infeasible("h1h2h3m", 1));
    }
    if h2 > mm * h3 {
        return Err(infeasible("h1h2h3m", 2));
    }
    // h3^2 - h3(h1+h2)/(m-1) + 2 h1 h2/(m(m-1)), scaled by m(m-1) > 0
    let q = (mm * (mm - 1) * h3 * h3) as i128 - (mm * h3 * (h1 + h2)) as i128
        + 2 * (h1 * h2) as i128;
    if q < 0 {
        return Err(infeasible("h1h2h3m", 3));
    }
    let mut parts = vec![h1, h2];
    parts.extend(vec![h3; m]);
    let p = Partition::new(parts).expect("positive parts");
    let class: Vec<usize> = (2..2 + m).collect();
    let solution = complete_similar(&p, &class, &BTreeMap::new())
        .expect("feasibility conditions imply non-negative completion");
    Ok(expand_similar(&solution))
}

/// Square on `(h1, h2, h3, h4^m)` with `h1 >= h2 >= h3`. Feasible iff the
/// four conditions hold; then `X(1,2,3)` is pinned to
/// `min(h2 h3, (n^2 - sum h^2 - 3 m h4 (h1+h2+h3)) / 6)` and the rest is
/// completed.
pub fn family_h1h2h3h4m(
    h1: u64,
    h2: u64,
    h3: u64,
    h4: u64,
    m: usize,
) -> Result<SymRos, FamilyError> {
    if h1 == 0 || h2 == 0 || h3 == 0 || h4 == 0 || m < 3 {
        return Err(bad_input(format!(
            "need positive parts and m >= 3, got ({h1},{h2},{h3},{h4}) m={m}"
        )));
    }
    if !(h1 >= h2 && h2 >= h3) {
        return Err(bad_input(format!(
            "need h1 >= h2 >= h3, got ({h1},{h2},{h3})"
        )));
    }
    let mm = m as u64;
    let n = (h1 + h2 + h3 + mm * h4) as i128;
    let sum_sq = (h1 * h1 + h2 * h2 + h3 * h3) as i128 + (mm * h4 * h4) as i128;
    let excess = n * n - sum_sq;
    let head = (h1 + h2 + h3) as i128;
    let mh4 = (mm * h4) as i128;
    if excess < 3 * mh4 * head {
        return Err(infeasible("h1h2h3h4m", 1));
    }
    for hj in [h1, h2, h3] {
        let s = mh4 + hj as i128;
        if excess < 3 * s * (n - s) {
            return Err(infeasible("h1h2h3h4m", 2));
        }
    }
    if (h1 * (h2 + h3)) as i128 > (mm * h1 * h4) as i128 + 2 * (h2 * h3) as i128 {
        return Err(infeasible("h1h2h3h4m", 3));
    }
    if (mm * h4) as i128 + h3 as i128 < h1 as i128 {
        return Err(infeasible("h1h2h3h4m", 4));
    }

    let cap = Rat::from_u64(h2 * h3);
    let slack = Rat::from_int((excess - 3 * mh4 * head) as i64) / Rat::from_int(6);
    let x123 = cap.min(slack);

    let mut parts = vec![h1, h2, h3];
    parts.extend(vec![h4; m]);
    let p = Partition::new(parts).expect("positive parts");
    let class: Vec<usize> = (3..3 + m).collect();
    let mut distinct = BTreeMap::new();
    distinct.insert([0usize, 1, 2], x123);
    let solution = complete_similar(&p, &class, &distinct)
        .expect("feasibility conditions imply non-negative completion");
    Ok(expand_similar(&solution))
}

/// The linear system `2x + y <= alpha`, `x + 2y <= beta`,
/// `gamma <= x + y <= delta` over non-negative rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoVarSystem {
    pub alpha: Rat,
    pub beta: Rat,
    pub gamma: Rat,
    pub delta: Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoVarInfeasible {
    AlphaNegative,
    BetaNegative,
    DeltaNegative,
    GammaAboveAlpha,
    GammaAboveBeta,
    GammaAboveDelta,
    SumBelowTripleGamma,
}

impl fmt::Display for TwoVarInfeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TwoVarInfeasible::AlphaNegative => "alpha < 0",
            TwoVarInfeasible::BetaNegative => "beta < 0",
            TwoVarInfeasible::DeltaNegative => "delta < 0",
            TwoVarInfeasible::GammaAboveAlpha => "gamma > alpha",
            TwoVarInfeasible::GammaAboveBeta => "gamma > beta",
            TwoVarInfeasible::GammaAboveDelta => "gamma > delta",
            TwoVarInfeasible::SumBelowTripleGamma => "alpha + beta < 3 gamma",
        };
        write!(f, "two-variable system infeasible: {s}")
    }
}

impl std::error::Error for TwoVarInfeasible {}

/// Solves the system when feasible: (0,0) if gamma <= 0, (0, gamma) if
/// beta >= 2 gamma, else (2 gamma - beta, beta - gamma).
pub fn solve_two_var(sys: &TwoVarSystem) -> Result<(Rat, Rat), TwoVarInfeasible> {
    let TwoVarSystem {
        alpha,
        beta,
        gamma,
        delta,
    } = sys;
    if alpha.is_negative() {
        return Err(TwoVarInfeasible::AlphaNegative);
    }
    if beta.is_negative() {
        return Err(TwoVarInfeasible::BetaNegative);
    }
    if delta.is_negative() {
        return Err(TwoVarInfeasible::DeltaNegative);
    }
    if gamma > alpha {
        return Err(TwoVarInfeasible::GammaAboveAlpha);
    }
    if gamma > beta {
        return Err(TwoVarInfeasible::GammaAboveBeta);
    }
    if gamma > delta {
        return Err(TwoVarInfeasible::GammaAboveDelta);
    }
    if &(alpha + beta) < &(Rat::from_int(3) * gamma.clone()) {
        return Err(TwoVarInfeasible::SumBelowTripleGamma);
    }
    let solution = if !gamma.is_positive() {
        (Rat::zero(), Rat::zero())
    } else if beta >= &(Rat::from_int(2) * gamma.clone()) {
        (Rat::zero(), gamma.clone())
    } else {
        (
            Rat::from_int(2) * gamma.clone() - beta.clone(),
            beta - gamma,
        )
    };
    debug_assert!(two_var_satisfied(sys, &solution));
    Ok(solution)
}

fn two_var_satisfied(sys: &TwoVarSystem, (x, y): &(Rat, Rat)) -> bool {
    let sum = x + y;
    !x.is_negative()
        && !y.is_negative()
        && Rat::from_int(2) * x.clone() + y.clone() <= sys.alpha
        && x.clone() + Rat::from_int(2) * y.clone() <= sys.beta
        && sum >= sys.gamma
        && sum <= sys.delta
}

/// Square on `(h1, h2^a, h3^b)` with `a, b >= 3`, similar with respect to
/// both repeated classes. Feasible iff six exact inequalities hold; the
/// seven class values are then recovered from a two-variable system.
pub fn family_h1h2a_h3b(
    h1: u64,
    h2: u64,
    a: usize,
    h3: u64,
    b: usize,
) -> Result<SymRos, FamilyError> {
    if h1 == 0 || h2 == 0 || h3 == 0 || a < 3 || b < 3 {
        return Err(bad_input(format!(
            "need positive parts and a, b >= 3, got h=({h1},{h2},{h3}) a={a} b={b}"
        )));
    }
    let (aa, bb) = (a as i128, b as i128);
    let (g1, g2, g3) = (h1 as i128, h2 as i128, h3 as i128);
    // the six inequalities of the exact characterization
    if (aa - 1) * g2 + bb * g3 < g1 {
        return Err(infeasible("h1h2a_h3b", 1));
    }
    if (bb - 1) * g3 + aa * g2 < g1 {
        return Err(infeasible("h1h2a_h3b", 2));
    }
    if aa * (aa - 1) * g2 * g2 < aa * g1 * g2 - bb * g1 * g3 {
        return Err(infeasible("h1h2a_h3b", 3));
    }
    if bb * (bb - 1) * g3 * g3 < bb * g1 * g3 - aa * g1 * g2 {
        return Err(infeasible("h1h2a_h3b", 4));
    }
    let lhs56 = aa * (aa - 1) * g2 * g2 + bb * (bb - 1) * g3 * g3;
    if lhs56 < aa * bb * g2 * g3 - 2 * aa * g1 * g2 + bb * g1 * g3 {
        return Err(infeasible("h1h2a_h3b", 5));
    }
    if lhs56 < aa * bb * g2 * g3 - 2 * bb * g1 * g3 + aa * g1 * g2 {
        return Err(infeasible("h1h2a_h3b", 6));
    }

    // x = ab(a-1) X'(2,2,3), y = ab(b-1) X'(2,3,3)
    let sys = TwoVarSystem {
        alpha: Rat::from_int((aa * (aa - 1) * g2 * g2 - aa * g1 * g2 + aa * bb * g2 * g3) as i64),
        beta: Rat::from_int((bb * (bb - 1) * g3 * g3 - bb * g1 * g3 + aa * bb * g2 * g3) as i64),
        gamma: Rat::from_int(
            (aa * bb * g2 * g3 - aa * g1 * g2).max(aa * bb * g2 * g3 - bb * g1 * g3) as i64,
        ),
        delta: Rat::from_int((aa * bb * g2 * g3) as i64),
    };
    let (x, y) = solve_two_var(&sys)
        .expect("the six family conditions imply two-variable feasibility");

    let r = |v: i128| Rat::from_int(v as i64);
    let x223 = &x / &r(aa * bb * (aa - 1));
    let x233 = &y / &r(aa * bb * (bb - 1));
    let x123 = (r(aa * bb * g2 * g3) - &x - &y) / r(aa * bb);
    let x122 = (r(aa * g1 * g2 - aa * bb * g2 * g3) + &x + &y) / r(aa * (aa - 1));
    let x133 = (r(bb * g1 * g3 - aa * bb * g2 * g3) + &x + &y) / r(bb * (bb - 1));
    let x222 = (r(aa * (aa - 1) * g2 * g2 - aa * g1 * g2 + aa * bb * g2 * g3)
        - Rat::from_int(2) * &x
        - &y)
        / r(aa * (aa - 1) * (aa - 2));
    let x333 = (r(bb * (bb - 1) * g3 * g3 - bb * g1 * g3 + aa * bb * g2 * g3)
        - &x
        - Rat::from_int(2) * &y)
        / r(bb * (bb - 1) * (bb - 2));

    let mut parts = vec![h1];
    parts.extend(vec![h2; a]);
    parts.extend(vec![h3; b]);
    let p = Partition::new(parts).expect("positive parts");
    let groups = vec![
        vec![0],
        (1..1 + a).collect::<Vec<_>>(),
        (1 + a..1 + a + b).collect::<Vec<_>>(),
    ];
    let structure =
        ClassStructure::from_groups(&p, &groups).expect("groups partition the indices");
    let mut s = ClassSolution::new(p, structure);
    for (key, v) in [
        ([0usize, 1, 2], x123),
        ([0, 1, 1], x122),
        ([0, 2, 2], x133),
        ([1, 1, 1], x222),
        ([1, 1, 2], x223),
        ([1, 2, 2], x233),
        ([2, 2, 2], x333),
    ] {
        debug_assert!(!v.is_negative(), "family conditions keep {key:?} non-negative");
        s.set(key[0], key[1], key[2], v);
    }
    Ok(expand_similar(&s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symros::verify_sym_ros;

    #[test]
    fn h1h2h3m_worked_values() {
        let x = family_h1h2h3m(3, 3, 2, 3).unwrap();
        assert!(verify_sym_ros(&x, true).passed());
        assert_eq!(x.partition().parts(), &[3, 3, 2, 2, 2]);
        // X'(1,2,3), X'(1,3,3), X'(2,3,3), X'(3,3,3)
        assert_eq!(x.get(0, 1, 2), Rat::from_int(3));
        assert_eq!(x.get(0, 2, 3), Rat::new(3, 2));
        assert_eq!(x.get(1, 2, 3), Rat::new(3, 2));
        assert_eq!(x.get(2, 3, 4), Rat::from_int(1));
    }

    #[test]
    fn h1h2h3m_infeasible_when_h1_large() {
        match family_h1h2h3m(7, 1, 2, 3) {
            Err(FamilyError::Infeasible(i)) => assert_eq!(i.condition, 1),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn h1h2h3m_uniform_parts_always_feasible() {
        for h in 1..=4u64 {
            for m in 3..=6usize {
                let x = family_h1h2h3m(h, h, h, m).unwrap();
                assert!(verify_sym_ros(&x, true).passed(), "h={h} m={m}");
            }
        }
    }

    #[test]
    fn h1h2h3h4m_worked_values() {
        let x = family_h1h2h3h4m(2, 2, 2, 1, 3).unwrap();
        assert!(verify_sym_ros(&x, true).passed());
        // X(1,2,3) = min(4, (81 - 15 - 54)/6) = 2
        assert_eq!(x.get(0, 1, 2), Rat::from_int(2));

        let x = family_h1h2h3h4m(3, 3, 3, 1, 3).unwrap();
        assert!(verify_sym_ros(&x, true).passed());
    }

    #[test]
    fn h1h2h3h4m_condition_four() {
        // h1 > h3 + m h4
        match family_h1h2h3h4m(8, 2, 2, 1, 3) {
            Err(FamilyError::Infeasible(i)) => assert!(i.condition <= 4),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn two_var_worked_solutions() {
        let r = Rat::from_int;
        let sys = TwoVarSystem {
            alpha: r(5),
            beta: r(4),
            gamma: r(2),
            delta: r(3),
        };
        assert_eq!(solve_two_var(&sys).unwrap(), (r(0), r(2)));
        let sys = TwoVarSystem {
            alpha: r(4),
            beta: r(3),
            gamma: r(2),
            delta: r(5),
        };
        assert_eq!(solve_two_var(&sys).unwrap(), (r(1), r(1)));
        let sys = TwoVarSystem {
            alpha: r(4),
            beta: r(3),
            gamma: r(-1),
            delta: r(5),
        };
        assert_eq!(solve_two_var(&sys).unwrap(), (r(0), r(0)));
        let sys = TwoVarSystem {
            alpha: r(1),
            beta: r(1),
            gamma: r(1),
            delta: r(1),
        };
        assert_eq!(
            solve_two_var(&sys),
            Err(TwoVarInfeasible::SumBelowTripleGamma)
        );
    }

    #[test]
    fn h1h2a_h3b_worked_values() {
        // (2, 1^3, 1^3): alpha = beta = 9, gamma = 3, delta = 9 -> (x,y) = (0,3)
        let x = family_h1h2a_h3b(2, 1, 3, 1, 3).unwrap();
        assert!(verify_sym_ros(&x, true).passed());
        assert_eq!(x.partition().parts(), &[2, 1, 1, 1, 1, 1, 1]);
        // X'(2,2,3) = 0, X'(2,3,3) = 3/18 = 1/6
        assert_eq!(x.get(1, 2, 4), Rat::zero());
        assert_eq!(x.get(1, 4, 5), Rat::new(1, 6));
    }

    #[test]
    fn h1h2a_h3b_uniform_is_feasible() {
        let x = family_h1h2a_h3b(1, 1, 3, 1, 3).unwrap();
        assert!(verify_sym_ros(&x, true).passed());
        // pair sums are all 1 on (1^7)
        assert_eq!(x.pair_sum(0, 1), Rat::one());
        assert_eq!(x.pair_sum(3, 5), Rat::one());
    }

    #[test]
    fn h1h2a_h3b_condition_one() {
        // h1 > (a-1) h2 + b h3
        match family_h1h2a_h3b(9, 1, 3, 1, 3) {
            Err(FamilyError::Infeasible(i)) => assert_eq!(i.condition, 1),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }
}
