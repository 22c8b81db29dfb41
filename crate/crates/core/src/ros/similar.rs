//! Class-reduced symmetric squares. A square is "similar" with respect to a
//! grouping of equal-size parts when its value on a triple depends only on
//! the classes of the three indices; such squares are described by one value
//! per class-label triple.

use crate::partition::Partition;
use crate::rat::Rat;
use crate::symros::{triple, SymRos};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimilarError {
    BadGrouping { detail: String },
    NotSimilar { detail: String },
    NegativeValue { formula: u8, key: String, value: Rat },
}

impl fmt::Display for SimilarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimilarError::BadGrouping { detail } => write!(f, "bad class grouping: {detail}"),
            SimilarError::NotSimilar { detail } => write!(f, "square is not similar: {detail}"),
            SimilarError::NegativeValue { formula, key, value } => write!(
                f,
                "formula ({formula}) produced a negative value {value} at {key}"
            ),
        }
    }
}

impl std::error::Error for SimilarError {}

/// A grouping of the indices of a partition into classes of equal part size.
#[derive(Clone, PartialEq, Eq)]
pub struct ClassStructure {
    sizes: Vec<u64>,          // part size per class
    members: Vec<Vec<usize>>, // index sets per class
    class_of: Vec<usize>,     // index -> class label
}

impl ClassStructure {
    /// One class per distinct part size (the finest similarity-compatible
    /// grouping the feasibility oracle uses).
    pub fn by_size(p: &Partition) -> ClassStructure {
        let classes = p.size_classes();
        let mut class_of = vec![0; p.k()];
        for (label, class) in classes.iter().enumerate() {
            for &i in &class.members {
                class_of[i] = label;
            }
        }
        ClassStructure {
            sizes: classes.iter().map(|c| c.size).collect(),
            members: classes.into_iter().map(|c| c.members).collect(),
            class_of,
        }
    }

    /// Explicit grouping; every group must be non-empty, the groups must
    /// partition `0..k`, and all parts within a group must be equal.
    pub fn from_groups(p: &Partition, groups: &[Vec<usize>]) -> Result<ClassStructure, SimilarError> {
        let k = p.k();
        let mut class_of = vec![usize::MAX; k];
        let mut sizes = Vec::with_capacity(groups.len());
        for (label, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(SimilarError::BadGrouping {
                    detail: format!("group {} is empty", label + 1),
                });
            }
            let size = p.part(group[0]);
            for &i in group {
                if i >= k {
                    return Err(SimilarError::BadGrouping {
                        detail: format!("index {} out of range", i + 1),
                    });
                }
                if class_of[i] != usize::MAX {
                    return Err(SimilarError::BadGrouping {
                        detail: format!("index {} in two groups", i + 1),
                    });
                }
                if p.part(i) != size {
                    return Err(SimilarError::BadGrouping {
                        detail: format!(
                            "group {} mixes part sizes {} and {}",
                            label + 1,
                            size,
                            p.part(i)
                        ),
                    });
                }
                class_of[i] = label;
            }
            sizes.push(size);
        }
        if class_of.contains(&usize::MAX) {
            return Err(SimilarError::BadGrouping {
                detail: "groups do not cover all indices".into(),
            });
        }
        Ok(ClassStructure {
            sizes,
            members: groups.to_vec(),
            class_of,
        })
    }

    pub fn class_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn size(&self, label: usize) -> u64 {
        self.sizes[label]
    }

    pub fn multiplicity(&self, label: usize) -> usize {
        self.members[label].len()
    }

    pub fn members(&self, label: usize) -> &[usize] {
        &self.members[label]
    }

    pub fn class_of(&self, index: usize) -> usize {
        self.class_of[index]
    }

    /// A class-label triple is realizable when it can be met by a triple of
    /// pairwise distinct indices.
    pub fn realizable(&self, key: &[usize; 3]) -> bool {
        let mut need = BTreeMap::new();
        for &label in key {
            *need.entry(label).or_insert(0usize) += 1;
        }
        need.iter().all(|(&label, &c)| c <= self.multiplicity(label))
    }

    /// All realizable sorted class-label triples, lexicographically.
    pub fn realizable_triples(&self) -> Vec<[usize; 3]> {
        let t = self.class_count();
        let mut out = Vec::new();
        for u in 0..t {
            for v in u..t {
                for w in v..t {
                    let key = [u, v, w];
                    if self.realizable(&key) {
                        out.push(key);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for ClassStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClassStructure[")?;
        for (label, m) in self.members.iter().enumerate() {
            if label > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}^{}", self.sizes[label], m.len())?;
        }
        write!(f, "]")
    }
}

/// A symmetric square given by one value per realizable class-label triple;
/// triples that would need a repeated index are forced by respect and are
/// not stored.
#[derive(Clone, PartialEq, Eq)]
pub struct ClassSolution {
    partition: Partition,
    structure: ClassStructure,
    values: BTreeMap<[usize; 3], Rat>,
}

impl ClassSolution {
    pub fn new(partition: Partition, structure: ClassStructure) -> ClassSolution {
        ClassSolution {
            partition,
            structure,
            values: BTreeMap::new(),
        }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn structure(&self) -> &ClassStructure {
        &self.structure
    }

    pub fn get(&self, u: usize, v: usize, w: usize) -> Rat {
        self.values
            .get(&triple(u, v, w))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, u: usize, v: usize, w: usize, value: Rat) {
        let key = triple(u, v, w);
        debug_assert!(self.structure.realizable(&key));
        if value.is_zero() {
            self.values.remove(&key);
        } else {
            self.values.insert(key, value);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[usize; 3], &Rat)> {
        self.values.iter()
    }
}

impl fmt::Debug for ClassSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ClassSolution {:?} on {:?}", self.structure, self.partition)?;
        for (key, v) in &self.values {
            writeln!(f, "  [{},{},{}] = {}", key[0] + 1, key[1] + 1, key[2] + 1, v)?;
        }
        Ok(())
    }
}

/// Averages a respecting symmetric square over each class: the value of a
/// class triple is the mean of X over all representative triples of
/// pairwise distinct indices.
pub fn collapse_similar(x: &SymRos, groups: &[Vec<usize>]) -> Result<ClassSolution, SimilarError> {
    let structure = ClassStructure::from_groups(x.partition(), groups)?;
    let mut out = ClassSolution::new(x.partition().clone(), structure);
    for key in out.structure.realizable_triples() {
        let mut sum = Rat::zero();
        let mut count = 0u64;
        for_representatives(&out.structure, &key, &mut |i, j, l| {
            sum = &sum + &x.get(i, j, l);
            count += 1;
        });
        debug_assert!(count > 0);
        out.set(key[0], key[1], key[2], sum / Rat::from_u64(count));
    }
    Ok(out)
}

/// Calls `f` on every unordered representative (i, j, l) of pairwise
/// distinct indices whose classes form `key`.
fn for_representatives(
    st: &ClassStructure,
    key: &[usize; 3],
    f: &mut impl FnMut(usize, usize, usize),
) {
    let [u, v, w] = *key;
    if u == v && v == w {
        let m = st.members(u);
        for a in 0..m.len() {
            for b in a + 1..m.len() {
                for c in b + 1..m.len() {
                    f(m[a], m[b], m[c]);
                }
            }
        }
    } else if u == v {
        let m = st.members(u);
        for a in 0..m.len() {
            for b in a + 1..m.len() {
                for &l in st.members(w) {
                    f(m[a], m[b], l);
                }
            }
        }
    } else if v == w {
        let m = st.members(v);
        for a in 0..m.len() {
            for b in a + 1..m.len() {
                for &i in st.members(u) {
                    f(i, m[a], m[b]);
                }
            }
        }
    } else {
        for &i in st.members(u) {
            for &j in st.members(v) {
                for &l in st.members(w) {
                    f(i, j, l);
                }
            }
        }
    }
}

/// Expands a class solution to a full symmetric square: distinct index
/// triples take their class value, the diagonal takes `p_i^2`, and triples
/// with a repeated index take 0. No validity check is performed here.
pub fn expand_similar(s: &ClassSolution) -> SymRos {
    let p = s.partition().clone();
    let k = p.k();
    let mut x = SymRos::with_respect_diagonal(p);
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                let v = s.get(
                    s.structure.class_of(i),
                    s.structure.class_of(j),
                    s.structure.class_of(l),
                );
                x.set(i, j, l, v);
            }
        }
    }
    x
}

/// Checks that `x` is constant on every class-triple orbit of `structure`.
pub fn is_similar(x: &SymRos, structure: &ClassStructure) -> bool {
    for key in structure.realizable_triples() {
        let mut first: Option<Rat> = None;
        let mut ok = true;
        for_representatives(structure, &key, &mut |i, j, l| {
            let v = x.get(i, j, l);
            match &first {
                None => first = Some(v),
                Some(f) => {
                    if *f != v {
                        ok = false;
                    }
                }
            }
        });
        if !ok {
            return false;
        }
    }
    true
}

/// Completes a similar square over one repeated class from the values on
/// distinct triples outside the class. With `M` the class index set
/// (multiplicity m >= 3) and `a` the class label, the three completion
/// formulas are, for distinct i, j outside M:
///
/// 1. `X'(i,j,a) = (h_i h_j - sum_{l∉M} X(i,j,l)) / m`
/// 2. `X'(i,a,a) = (h_i h_a - (1/m) sum_{l∉M∪{i}} h_i h_l
///                  + (2/m) sum_{j<l∉M∪{i}} X(i,j,l)) / (m-1)`
/// 3. `X'(a,a,a) = (m(m-1) h_a^2 - m h_a sum_{i∉M} h_i
///                  + 2 sum_{i<j∉M} h_i h_j - 6 sum_{i<j<l∉M} X(i,j,l))
///                 / (m(m-1)(m-2))`
///
/// Outside indices each form their own singleton class in the result.
pub fn complete_similar(
    p: &Partition,
    class_members: &[usize],
    distinct_values: &BTreeMap<[usize; 3], Rat>,
) -> Result<ClassSolution, SimilarError> {
    let k = p.k();
    let m = class_members.len();
    if m < 3 {
        return Err(SimilarError::BadGrouping {
            detail: format!("repeated class must have multiplicity >= 3, got {m}"),
        });
    }
    let in_class = {
        let mut v = vec![false; k];
        for &i in class_members {
            if i >= k {
                return Err(SimilarError::BadGrouping {
                    detail: format!("class index {} out of range", i + 1),
                });
            }
            v[i] = true;
        }
        v
    };
    let h_a = p.part(class_members[0]);
    if class_members.iter().any(|&i| p.part(i) != h_a) {
        return Err(SimilarError::BadGrouping {
            detail: "class members have unequal part sizes".into(),
        });
    }
    let outside: Vec<usize> = (0..k).filter(|&i| !in_class[i]).collect();
    for key in distinct_values.keys() {
        let distinct = key[0] < key[1] && key[1] < key[2];
        if !distinct || key.iter().any(|&i| i >= k || in_class[i]) {
            return Err(SimilarError::BadGrouping {
                detail: format!("value key {key:?} is not a distinct triple outside the class"),
            });
        }
    }
    let val = |i: usize, j: usize, l: usize| -> Rat {
        distinct_values
            .get(&triple(i, j, l))
            .cloned()
            .unwrap_or_else(Rat::zero)
    };

    // groups: each outside index singleton, the class last
    let mut groups: Vec<Vec<usize>> = outside.iter().map(|&i| vec![i]).collect();
    groups.push(class_members.to_vec());
    let structure = ClassStructure::from_groups(p, &groups)?;
    let a_label = structure.class_count() - 1;
    let label_of = |idx: usize| outside.iter().position(|&o| o == idx).expect("outside index");

    let mut out = ClassSolution::new(p.clone(), structure);
    let m_rat = Rat::from_u64(m as u64);

    // distinct outside triples pass through
    for (key, v) in distinct_values {
        if v.is_negative() {
            return Err(SimilarError::NegativeValue {
                formula: 0,
                key: format!("{key:?}"),
                value: v.clone(),
            });
        }
        out.set(label_of(key[0]), label_of(key[1]), label_of(key[2]), v.clone());
    }

    // formula (1)
    for (ai, &i) in outside.iter().enumerate() {
        for &j in &outside[ai + 1..] {
            let mut sum = Rat::zero();
            for &l in &outside {
                if l != i && l != j {
                    sum = sum + val(i, j, l);
                }
            }
            let v = (Rat::from_u64(p.part(i) * p.part(j)) - sum) / m_rat.clone();
            if v.is_negative() {
                return Err(SimilarError::NegativeValue {
                    formula: 1,
                    key: format!("X'({},{},class)", i + 1, j + 1),
                    value: v,
                });
            }
            out.set(label_of(i), label_of(j), a_label, v);
        }
    }

    // formula (2)
    for &i in &outside {
        let mut lin = Rat::zero();
        let mut cross = Rat::zero();
        for (aj, &j) in outside.iter().enumerate() {
            if j == i {
                continue;
            }
            lin = lin + Rat::from_u64(p.part(i) * p.part(j));
            for &l in &outside[aj + 1..] {
                if l != i {
                    cross = cross + val(i, j, l);
                }
            }
        }
        let v = (Rat::from_u64(p.part(i) * h_a) - lin / m_rat.clone()
            + Rat::from_int(2) * cross / m_rat.clone())
            / Rat::from_u64(m as u64 - 1);
        if v.is_negative() {
            return Err(SimilarError::NegativeValue {
                formula: 2,
                key: format!("X'({},class,class)", i + 1),
                value: v,
            });
        }
        out.set(label_of(i), a_label, a_label, v);
    }

    // formula (3), only meaningful storage when m >= 3 (guaranteed above)
    {
        let mut lin = Rat::zero();
        let mut pair = Rat::zero();
        let mut tri = Rat::zero();
        for (ai, &i) in outside.iter().enumerate() {
            lin = lin + Rat::from_u64(p.part(i));
            for (aj, &j) in outside.iter().enumerate().skip(ai + 1) {
                pair = pair + Rat::from_u64(p.part(i) * p.part(j));
                for &l in &outside[aj + 1..] {
                    tri = tri + val(i, j, l);
                }
            }
        }
        let mm = m as u64;
        let numer = Rat::from_u64(mm * (mm - 1) * h_a * h_a)
            - Rat::from_u64(mm * h_a) * lin
            + Rat::from_int(2) * pair
            - Rat::from_int(6) * tri;
        let v = numer / Rat::from_u64(mm * (mm - 1) * (mm - 2));
        if v.is_negative() {
            return Err(SimilarError::NegativeValue {
                formula: 3,
                key: "X'(class,class,class)".into(),
                value: v,
            });
        }
        out.set(a_label, a_label, a_label, v);
    }

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symros::verify_sym_ros;

    fn sym_3222() -> SymRos {
        let p = Partition::new(vec![3, 2, 2, 2]).unwrap();
        let mut x = SymRos::with_respect_diagonal(p);
        x.set(0, 1, 2, Rat::from_int(3));
        x.set(0, 1, 3, Rat::from_int(3));
        x.set(0, 2, 3, Rat::from_int(3));
        x.set(1, 2, 3, Rat::from_int(1));
        x
    }

    #[test]
    fn collapse_of_worked_symmetric_square() {
        // the integer symmetric square on (3,2,2,2) is similar with respect
        // to the three parts of size 2, with values 3 and 1
        let x = sym_3222();
        let s = collapse_similar(&x, &[vec![0], vec![1, 2, 3]]).unwrap();
        assert_eq!(s.get(0, 1, 1), Rat::from_int(3));
        assert_eq!(s.get(1, 1, 1), Rat::from_int(1));
        let expanded = expand_similar(&s);
        assert_eq!(expanded, x);
    }

    #[test]
    fn collapse_then_expand_is_identity_on_similar_squares() {
        let x = sym_3222();
        let st = ClassStructure::from_groups(x.partition(), &[vec![0], vec![1, 2, 3]]).unwrap();
        assert!(is_similar(&x, &st));
        let s = collapse_similar(&x, &[vec![0], vec![1, 2, 3]]).unwrap();
        assert_eq!(expand_similar(&s), x);
    }

    #[test]
    fn expand_then_collapse_is_identity() {
        let p = Partition::new(vec![2, 2, 2, 1, 1]).unwrap();
        let groups = vec![vec![0, 1, 2], vec![3, 4]];
        let st = ClassStructure::from_groups(&p, &groups).unwrap();
        let mut s = ClassSolution::new(p, st);
        s.set(0, 0, 0, Rat::new(1, 3));
        s.set(0, 0, 1, Rat::new(5, 2));
        s.set(0, 1, 1, Rat::new(7, 4));
        let x = expand_similar(&s);
        let back = collapse_similar(&x, &groups).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn uniform_class_solution_from_formulas() {
        // all parts equal: no outside indices, X'(a,a,a) = h^2 / (m-2)
        let p = Partition::uniform(1, 4);
        let s = complete_similar(&p, &[0, 1, 2, 3], &BTreeMap::new()).unwrap();
        assert_eq!(s.get(0, 0, 0), Rat::new(1, 2));
        let x = expand_similar(&s);
        assert!(verify_sym_ros(&x, true).passed());
    }

    #[test]
    fn completion_rejects_negative_outcomes() {
        // (7,1,2,2,2): 7 > 3*2 makes a completion value negative
        let p = Partition::new(vec![7, 1, 2, 2, 2]).unwrap();
        let err = complete_similar(&p, &[2, 3, 4], &BTreeMap::new()).unwrap_err();
        match err {
            SimilarError::NegativeValue { formula, .. } => assert_eq!(formula, 2),
            e => panic!("unexpected error {e:?}"),
        }
    }

    #[test]
    fn bad_groupings_are_rejected() {
        let p = Partition::new(vec![3, 2, 2]).unwrap();
        assert!(ClassStructure::from_groups(&p, &[vec![0, 1], vec![2]]).is_err());
        assert!(ClassStructure::from_groups(&p, &[vec![0], vec![1]]).is_err());
        assert!(ClassStructure::from_groups(&p, &[vec![0], vec![1, 2], vec![1]]).is_err());
    }
}
