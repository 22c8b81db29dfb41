//! Exact feasibility oracle for symmetric rational outline squares.
//!
//! Respect forces every value on a triple with a repeated index, so a
//! respecting square exists iff the class-reduced linear system is
//! feasible: one variable per realizable class-label triple, one equation
//! per class pair
//!
//! ```text
//! sum_w (mult(w) - [w=u] - [w=v]) * X'({u,v,w}) = size(u) * size(v)
//! ```
//!
//! (with the bracket counted twice when u = v), all variables >= 0. The
//! system is solved by phase-1 simplex with exact rational pivoting and
//! Bland's rule; infeasibility comes with a Farkas certificate.

use crate::partition::Partition;
use crate::rat::Rat;
use crate::ros::similar::{expand_similar, ClassSolution, ClassStructure};
use crate::symros::SymRos;
use std::fmt;

/// Default cap on the number of distinct part sizes.
pub const ORACLE_CLASS_BOUND: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    TooManyClasses { classes: usize, bound: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooManyClasses { classes, bound } => write!(
                f,
                "{classes} distinct part sizes exceed the oracle bound {bound}"
            ),
        }
    }
}

impl std::error::Error for OracleError {}

/// Farkas-style proof that the class system has no non-negative solution:
/// multipliers y with y^T A <= 0 componentwise and y^T b > 0.
#[derive(Debug, Clone)]
pub struct InfeasibilityCertificate {
    /// One multiplier per class pair, aligned with [`ClassSystem::pairs`].
    pub multipliers: Vec<Rat>,
}

#[derive(Debug, Clone)]
pub enum OracleOutcome {
    Feasible(SymRos),
    Infeasible(InfeasibilityCertificate),
}

impl OracleOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, OracleOutcome::Feasible(_))
    }

    pub fn into_feasible(self) -> Option<SymRos> {
        match self {
            OracleOutcome::Feasible(x) => Some(x),
            OracleOutcome::Infeasible(_) => None,
        }
    }
}

/// The class-reduced pair-sum system of a partition.
pub struct ClassSystem {
    structure: ClassStructure,
    variables: Vec<[usize; 3]>,
    pairs: Vec<(usize, usize)>,
    /// Row-major coefficient matrix, one row per pair.
    coeffs: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
}

impl ClassSystem {
    pub fn build(p: &Partition) -> ClassSystem {
        let structure = ClassStructure::by_size(p);
        let t = structure.class_count();
        let variables = structure.realizable_triples();
        let var_index = |key: &[usize; 3]| variables.binary_search(key).ok();

        let mut pairs = Vec::new();
        for u in 0..t {
            for v in u..t {
                if u == v && structure.multiplicity(u) < 2 {
                    continue;
                }
                pairs.push((u, v));
            }
        }

        let mut coeffs = Vec::with_capacity(pairs.len());
        let mut rhs = Vec::with_capacity(pairs.len());
        for &(u, v) in &pairs {
            let mut row = vec![Rat::zero(); variables.len()];
            for w in 0..t {
                let occupied = [u, v].iter().filter(|&&x| x == w).count();
                let coeff = structure.multiplicity(w) as i64 - occupied as i64;
                if coeff <= 0 {
                    continue;
                }
                let key = crate::symros::triple(u, v, w);
                if let Some(idx) = var_index(&key) {
                    row[idx] = &row[idx] + &Rat::from_int(coeff);
                }
            }
            coeffs.push(row);
            rhs.push(Rat::from_u64(structure.size(u) * structure.size(v)));
        }
        ClassSystem {
            structure,
            variables,
            pairs,
            coeffs,
            rhs,
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Validates a Farkas certificate against this system.
    pub fn certifies_infeasible(&self, cert: &InfeasibilityCertificate) -> bool {
        if cert.multipliers.len() != self.pairs.len() {
            return false;
        }
        for j in 0..self.variables.len() {
            let dot: Rat = self
                .coeffs
                .iter()
                .zip(&cert.multipliers)
                .map(|(row, y)| &row[j] * y)
                .sum();
            if dot.is_positive() {
                return false;
            }
        }
        let value: Rat = self
            .rhs
            .iter()
            .zip(&cert.multipliers)
            .map(|(b, y)| b * y)
            .sum();
        value.is_positive()
    }
}

/// Decides whether a respecting symmetric rational outline square exists
/// for `p`, returning either one (already expanded and verified) or a
/// checked infeasibility certificate.
pub fn feasibility_oracle(p: &Partition) -> Result<OracleOutcome, OracleError> {
    feasibility_oracle_bounded(p, ORACLE_CLASS_BOUND)
}

pub fn feasibility_oracle_bounded(
    p: &Partition,
    class_bound: usize,
) -> Result<OracleOutcome, OracleError> {
    let system = ClassSystem::build(p);
    let t = system.structure.class_count();
    if t > class_bound {
        return Err(OracleError::TooManyClasses {
            classes: t,
            bound: class_bound,
        });
    }
    match phase_one(&system.coeffs, &system.rhs) {
        PhaseOne::Feasible(solution) => {
            let mut cls = ClassSolution::new(p.clone(), system.structure.clone());
            for (key, value) in system.variables.iter().zip(solution) {
                cls.set(key[0], key[1], key[2], value);
            }
            let x = expand_similar(&cls);
            debug_assert!(
                crate::symros::verify_sym_ros(&x, true).passed(),
                "oracle solution must verify"
            );
            Ok(OracleOutcome::Feasible(x))
        }
        PhaseOne::Infeasible(multipliers) => {
            let cert = InfeasibilityCertificate { multipliers };
            assert!(
                system.certifies_infeasible(&cert),
                "infeasibility certificate must validate"
            );
            Ok(OracleOutcome::Infeasible(cert))
        }
    }
}

enum PhaseOne {
    Feasible(Vec<Rat>),
    /// Farkas multipliers, one per constraint.
    Infeasible(Vec<Rat>),
}

/// Phase-1 simplex for `A x = b, x >= 0` with `b >= 0`: minimizes the sum
/// of artificial variables with Bland's rule (lowest eligible index enters;
/// among minimum ratios the row with the lowest basic index leaves).
fn phase_one(a: &[Vec<Rat>], b: &[Rat]) -> PhaseOne {
    let m = a.len();
    let nv = if m == 0 { 0 } else { a[0].len() };
    if m == 0 {
        return PhaseOne::Feasible(vec![Rat::zero(); nv]);
    }
    let total = nv + m; // structural then artificial
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for i in 0..m {
        debug_assert!(!b[i].is_negative(), "phase one needs b >= 0");
        let mut row = Vec::with_capacity(total + 1);
        row.extend(a[i].iter().cloned());
        for j in 0..m {
            row.push(if i == j { Rat::one() } else { Rat::zero() });
        }
        row.push(b[i].clone());
        rows.push(row);
    }
    let mut basis: Vec<usize> = (nv..nv + m).collect();

    loop {
        // reduced costs: c_j - sum over artificial basic rows of row[j]
        let mut entering = None;
        for j in 0..total {
            if basis.contains(&j) {
                continue;
            }
            let c_j = if j >= nv { Rat::one() } else { Rat::zero() };
            let mut reduced = c_j;
            for (i, &bi) in basis.iter().enumerate() {
                if bi >= nv {
                    reduced = reduced - rows[i][j].clone();
                }
            }
            if reduced.is_negative() {
                entering = Some(j);
                break; // Bland: lowest index
            }
        }
        let Some(e) = entering else {
            break;
        };
        // ratio test
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if rows[i][e].is_positive() {
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let cur = &rows[i][total] / &rows[i][e];
                        let best = &rows[l][total] / &rows[l][e];
                        cur < best || (cur == best && basis[i] < basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
        }
        let l = leave.expect("phase-1 objective is bounded below");
        // pivot on (l, e)
        let piv = rows[l][e].clone();
        for x in rows[l].iter_mut() {
            *x = &*x / &piv;
        }
        for i in 0..m {
            if i != l && !rows[i][e].is_zero() {
                let factor = rows[i][e].clone();
                for j in 0..=total {
                    let delta = &factor * &rows[l][j];
                    rows[i][j] = &rows[i][j] - &delta;
                }
            }
        }
        basis[l] = e;
    }

    let objective: Rat = basis
        .iter()
        .enumerate()
        .filter(|(_, &bi)| bi >= nv)
        .map(|(i, _)| rows[i][total].clone())
        .sum();
    if objective.is_zero() {
        let mut x = vec![Rat::zero(); nv];
        for (i, &bi) in basis.iter().enumerate() {
            if bi < nv {
                x[bi] = rows[i][total].clone();
            }
        }
        PhaseOne::Feasible(x)
    } else {
        // y_i = 1 - reduced cost of artificial column i; at optimality
        // y^T A_j <= 0 for all structural j and y^T b = objective > 0
        let mut y = Vec::with_capacity(m);
        for art in 0..m {
            let j = nv + art;
            let mut reduced = Rat::one();
            for (i, &bi) in basis.iter().enumerate() {
                if bi >= nv {
                    reduced = reduced - rows[i][j].clone();
                }
            }
            y.push(Rat::one() - reduced);
        }
        PhaseOne::Infeasible(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symros::verify_sym_ros;

    fn part(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn two_equal_parts_are_infeasible() {
        match feasibility_oracle(&part(&[2, 2])).unwrap() {
            OracleOutcome::Infeasible(cert) => {
                let system = ClassSystem::build(&part(&[2, 2]));
                assert!(system.certifies_infeasible(&cert));
            }
            OracleOutcome::Feasible(_) => panic!("(2,2) must be infeasible"),
        }
    }

    #[test]
    fn forced_contradiction_is_infeasible() {
        // the two pair constraints force the lone variable to 2 and to 1
        assert!(!feasibility_oracle(&part(&[2, 1, 1])).unwrap().is_feasible());
    }

    #[test]
    fn worked_partition_is_feasible() {
        match feasibility_oracle(&part(&[3, 2, 2, 2])).unwrap() {
            OracleOutcome::Feasible(x) => {
                assert!(verify_sym_ros(&x, true).passed());
                // the respecting square on (3,2,2,2) is unique
                assert_eq!(x.get(0, 1, 2), Rat::from_int(3));
                assert_eq!(x.get(1, 2, 3), Rat::from_int(1));
            }
            OracleOutcome::Infeasible(_) => panic!("(3,2,2,2) must be feasible"),
        }
    }

    #[test]
    fn single_part_is_feasible() {
        assert!(feasibility_oracle(&part(&[5])).unwrap().is_feasible());
    }

    #[test]
    fn class_bound_is_enforced() {
        let p = part(&[7, 6, 5, 4, 3, 2, 1]);
        assert!(matches!(
            feasibility_oracle(&p),
            Err(OracleError::TooManyClasses { classes: 7, .. })
        ));
        assert!(feasibility_oracle_bounded(&p, 7).is_ok());
    }

    #[test]
    fn feasibility_matches_small_k_existence_on_uniform_families() {
        // LS(a^k) exists iff k != 2; feasibility must agree for small cases
        for a in 1..=3u64 {
            for k in 1..=5usize {
                let outcome = feasibility_oracle(&Partition::uniform(a, k)).unwrap();
                assert_eq!(outcome.is_feasible(), k != 2, "a={a} k={k}");
            }
        }
    }
}
