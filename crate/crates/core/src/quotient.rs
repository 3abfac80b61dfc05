//! Admissible quotients of `N × H`.
//!
//! A quotient is stored fiber by fiber: for each `h` a partition of `N`, so pairs
//! in different fibers are never related. Classes inside a fiber are numbered by
//! first occurrence. Globally, classes are numbered by first occurrence when the
//! pairs `(n, h)` are scanned in lexicographic order, so `[1, 1]` is class `0` and
//! every class is represented by its least pair.

use std::collections::BTreeSet;
use std::collections::VecDeque;

use thiserror::Error;

use crate::bounds::Bounds;
use crate::monoid::FiniteMonoid;
use crate::par;
use crate::union_find::{canonical_labels, UnionFind};

/// The first admissibility condition found to fail, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AdmissibilityViolation {
    #[error("ShapeMismatch: expected {expected_fibers} fibers of {expected_len} labels")]
    ShapeMismatch { expected_fibers: usize, expected_len: usize },
    #[error("IdentityFiberNotDiscrete: ({n1},1) ~ ({n2},1)")]
    IdentityFiberNotDiscrete { n1: usize, n2: usize },
    #[error("LeftInstability: ({n1},{h}) ~ ({n2},{h}) but not ({n}*{n1},{h}) ~ ({n}*{n2},{h})")]
    LeftInstability { h: usize, n1: usize, n2: usize, n: usize },
    #[error("RightInstability: ({n1},{h}) ~ ({n2},{h}) but not ({n1},{h}*{h2}) ~ ({n2},{h}*{h2})")]
    RightInstability { h: usize, n1: usize, n2: usize, h2: usize },
}

impl AdmissibilityViolation {
    /// Which of the four admissibility conditions failed (0 for a shape error).
    pub fn condition(&self) -> u8 {
        match self {
            Self::ShapeMismatch { .. } => 0,
            Self::IdentityFiberNotDiscrete { .. } => 1,
            Self::LeftInstability { .. } => 3,
            Self::RightInstability { .. } => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("NotAdmissible: {0}")]
    NotAdmissible(#[from] AdmissibilityViolation),
    #[error("BoundExceeded: |N|*|H| = {cells} exceeds the limit {max}")]
    BoundExceeded { cells: usize, max: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleQuotient {
    n: FiniteMonoid,
    h: FiniteMonoid,
    fibers: Vec<Vec<usize>>,
    class_counts: Vec<usize>,
    reps: Vec<Vec<usize>>,
    global: Vec<usize>,
    global_reps: Vec<(usize, usize)>,
}

/// Checks the four admissibility conditions on a fiber-wise labelling.
pub fn is_admissible(
    n: &FiniteMonoid,
    h: &FiniteMonoid,
    fibers: &[Vec<usize>],
) -> Result<(), AdmissibilityViolation> {
    if fibers.len() != h.order() || fibers.iter().any(|f| f.len() != n.order()) {
        return Err(AdmissibilityViolation::ShapeMismatch { expected_fibers: h.order(), expected_len: n.order() });
    }
    let same = |hh: usize, a: usize, b: usize| fibers[hh][a] == fibers[hh][b];
    for n1 in n.elements() {
        for n2 in n1 + 1..n.order() {
            if same(0, n1, n2) {
                return Err(AdmissibilityViolation::IdentityFiberNotDiscrete { n1, n2 });
            }
        }
    }
    for hh in h.elements() {
        for n1 in n.elements() {
            for n2 in n1 + 1..n.order() {
                if !same(hh, n1, n2) {
                    continue;
                }
                if let Some(m) = n.elements().find(|&m| !same(hh, n.mul(m, n1), n.mul(m, n2))) {
                    return Err(AdmissibilityViolation::LeftInstability { h: hh, n1, n2, n: m });
                }
                if let Some(h2) = h.elements().find(|&h2| !same(h.mul(hh, h2), n1, n2)) {
                    return Err(AdmissibilityViolation::RightInstability { h: hh, n1, n2, h2 });
                }
            }
        }
    }
    Ok(())
}

impl AdmissibleQuotient {
    /// Validates the labelling; labels are renumbered by first occurrence per fiber.
    pub fn new(n: &FiniteMonoid, h: &FiniteMonoid, fibers: Vec<Vec<usize>>) -> Result<Self, QuotientError> {
        is_admissible(n, h, &fibers)?;
        Ok(Self::from_fibers_unchecked(n, h, fibers))
    }

    pub(crate) fn from_fibers_unchecked(n: &FiniteMonoid, h: &FiniteMonoid, fibers: Vec<Vec<usize>>) -> Self {
        let fibers: Vec<Vec<usize>> = fibers.iter().map(|f| canonical_labels(f)).collect();
        let class_counts: Vec<usize> = fibers.iter().map(|f| f.iter().max().map_or(0, |m| m + 1)).collect();
        let reps: Vec<Vec<usize>> = fibers
            .iter()
            .zip(&class_counts)
            .map(|(f, &c)| {
                let mut r = vec![usize::MAX; c];
                for (x, &cl) in f.iter().enumerate() {
                    if r[cl] == usize::MAX {
                        r[cl] = x;
                    }
                }
                r
            })
            .collect();
        let hn = h.order();
        let mut global = vec![usize::MAX; n.order() * hn];
        let mut global_reps = Vec::new();
        for nn in n.elements() {
            for hh in h.elements() {
                let rep = reps[hh][fibers[hh][nn]];
                global[nn * hn + hh] = if rep == nn {
                    global_reps.push((nn, hh));
                    global_reps.len() - 1
                } else {
                    global[rep * hn + hh]
                };
            }
        }
        AdmissibleQuotient { n: n.clone(), h: h.clone(), fibers, class_counts, reps, global, global_reps }
    }

    pub fn discrete(n: &FiniteMonoid, h: &FiniteMonoid) -> Self {
        Self::from_fibers_unchecked(n, h, vec![n.elements().collect(); h.order()])
    }

    pub fn n(&self) -> &FiniteMonoid {
        &self.n
    }

    pub fn h(&self) -> &FiniteMonoid {
        &self.h
    }

    pub fn fibers(&self) -> &[Vec<usize>] {
        &self.fibers
    }

    /// Class of `x` inside the fiber over `h`.
    #[inline]
    pub fn class_in_fiber(&self, h: usize, x: usize) -> usize {
        self.fibers[h][x]
    }

    #[inline]
    pub fn same(&self, h: usize, a: usize, b: usize) -> bool {
        self.fibers[h][a] == self.fibers[h][b]
    }

    pub fn class_count(&self, h: usize) -> usize {
        self.class_counts[h]
    }

    /// Least member of class `c` in the fiber over `h`.
    #[inline]
    pub fn rep(&self, h: usize, c: usize) -> usize {
        self.reps[h][c]
    }

    pub fn members(&self, h: usize, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.fibers[h].iter().enumerate().filter(move |(_, &cl)| cl == c).map(|(x, _)| x)
    }

    pub fn num_classes(&self) -> usize {
        self.global_reps.len()
    }

    /// Global index of `[n, h]`.
    #[inline]
    pub fn global_class(&self, n: usize, h: usize) -> usize {
        self.global[n * self.h.order() + h]
    }

    /// Least pair of a global class.
    #[inline]
    pub fn global_rep(&self, c: usize) -> (usize, usize) {
        self.global_reps[c]
    }

    /// `m ∗ c` for a class `c` in the fiber over `h`; the result stays in that fiber.
    #[inline]
    pub fn star_left(&self, m: usize, h: usize, c: usize) -> usize {
        self.fibers[h][self.n.mul(m, self.reps[h][c])]
    }

    /// `c ∗ h2` for a class `c` in the fiber over `h`; the result lies in the fiber over `h·h2`.
    #[inline]
    pub fn star_right(&self, h: usize, c: usize, h2: usize) -> usize {
        self.fibers[self.h.mul(h, h2)][self.reps[h][c]]
    }

    pub fn is_discrete(&self) -> bool {
        self.class_counts.iter().all(|&c| c == self.n.order())
    }

    /// Number of unordered pairs `{(n1,h), (n2,h)}` with `n1 ≠ n2` that are related.
    pub fn lumped_pairs(&self) -> usize {
        let mut total = 0;
        for (hh, f) in self.fibers.iter().enumerate() {
            for c in 0..self.class_counts[hh] {
                let size = f.iter().filter(|&&x| x == c).count();
                total += size * (size - 1) / 2;
            }
        }
        total
    }

    /// Every pair related here is related in `other` (fiber-wise inclusion).
    pub fn refines(&self, other: &AdmissibleQuotient) -> bool {
        self.fibers.len() == other.fibers.len()
            && self.fibers.iter().zip(&other.fibers).all(|(a, b)| partition_refines(a, b))
    }

    fn sort_key(&self) -> (usize, &[Vec<usize>]) {
        (self.lumped_pairs(), &self.fibers)
    }
}

/// `a ⊆ b` as equivalence relations, both given by labels.
pub(crate) fn partition_refines(a: &[usize], b: &[usize]) -> bool {
    let mut image = vec![usize::MAX; a.len()];
    a.iter().zip(b).all(|(&ca, &cb)| {
        if image[ca] == usize::MAX {
            image[ca] = cb;
        }
        image[ca] == cb
    })
}

/// All admissible quotients of `N × H` under the default bounds.
pub fn enumerate_admissible_quotients(
    n: &FiniteMonoid,
    h: &FiniteMonoid,
) -> Result<Vec<AdmissibleQuotient>, QuotientError> {
    enumerate_admissible_quotients_with(n, h, &Bounds::default())
}

/// All admissible quotients, finest first (fewest related pairs, then by labels).
///
/// Each fiber ranges over the partitions of `N` stable under left multiplication;
/// fibers over right-invertible elements are forced discrete. A backtracking
/// search then enforces right stability, which says the partition over `h` is
/// contained in the partition over every `h·h'`.
pub fn enumerate_admissible_quotients_with(
    n: &FiniteMonoid,
    h: &FiniteMonoid,
    bounds: &Bounds,
) -> Result<Vec<AdmissibleQuotient>, QuotientError> {
    let cells = n.order() * h.order();
    if cells > bounds.max_quotient_cells {
        return Err(QuotientError::BoundExceeded { cells, max: bounds.max_quotient_cells });
    }
    if n.is_trivial() || h.is_trivial() {
        return Ok(vec![AdmissibleQuotient::discrete(n, h)]);
    }
    let discrete: Vec<usize> = n.elements().collect();
    let left_stable = left_stable_partitions(n);
    let candidates: Vec<Vec<Vec<usize>>> = h
        .elements()
        .map(|x| if h.right_inverse(x).is_some() { vec![discrete.clone()] } else { left_stable.clone() })
        .collect();
    let search = FiberSearch { h, candidates: &candidates };

    let Some(split) = candidates.iter().position(|c| c.len() > 1) else {
        return Ok(vec![AdmissibleQuotient::discrete(n, h)]);
    };
    let prefix: Vec<usize> = vec![0; split];
    let branches: Vec<usize> = (0..candidates[split].len()).collect();
    let found = par::flat_map(&branches, |&choice| {
        let mut chosen = prefix.clone();
        chosen.push(choice);
        let mut out = Vec::new();
        if search.consistent(&chosen) {
            search.extend(&mut chosen, &mut out);
        }
        out
    });

    let mut quotients: Vec<AdmissibleQuotient> = found
        .into_iter()
        .map(|fibers| AdmissibleQuotient::from_fibers_unchecked(n, h, fibers))
        .collect();
    quotients.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(quotients)
}

struct FiberSearch<'a> {
    h: &'a FiniteMonoid,
    candidates: &'a [Vec<Vec<usize>>],
}

impl FiberSearch<'_> {
    fn partition(&self, fiber: usize, choice: usize) -> &[usize] {
        &self.candidates[fiber][choice]
    }

    /// Right stability between the newest fiber and all earlier ones.
    fn consistent(&self, chosen: &[usize]) -> bool {
        let last = chosen.len() - 1;
        let p_last = self.partition(last, chosen[last]);
        (0..last).all(|x| {
            let p_x = self.partition(x, chosen[x]);
            let last_below_x = self.h.elements().any(|y| self.h.mul(last, y) == x);
            let x_below_last = self.h.elements().any(|y| self.h.mul(x, y) == last);
            (!last_below_x || partition_refines(p_last, p_x)) && (!x_below_last || partition_refines(p_x, p_last))
        })
    }

    fn extend(&self, chosen: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        let next = chosen.len();
        if next == self.h.order() {
            out.push(chosen.iter().enumerate().map(|(x, &c)| self.partition(x, c).to_vec()).collect());
            return;
        }
        for c in 0..self.candidates[next].len() {
            chosen.push(c);
            if self.consistent(chosen) {
                self.extend(chosen, out);
            }
            chosen.pop();
        }
    }
}

/// Every partition of `N` closed under left multiplication (`a ~ b ⇒ m·a ~ m·b`),
/// generated by joining principal closures starting from the discrete partition.
pub fn left_stable_partitions(n: &FiniteMonoid) -> Vec<Vec<usize>> {
    let discrete: Vec<usize> = n.elements().collect();
    let mut seen = BTreeSet::from([discrete.clone()]);
    let mut stack = vec![discrete];
    while let Some(p) = stack.pop() {
        for a in n.elements() {
            for b in a + 1..n.order() {
                if p[a] == p[b] {
                    continue;
                }
                let joined = left_closure(n, &p, a, b);
                if seen.insert(joined.clone()) {
                    stack.push(joined);
                }
            }
        }
    }
    seen.into_iter().collect()
}

fn left_closure(n: &FiniteMonoid, base: &[usize], a: usize, b: usize) -> Vec<usize> {
    let mut uf = UnionFind::new(n.order());
    let mut first = vec![usize::MAX; n.order()];
    for (x, &c) in base.iter().enumerate() {
        if first[c] == usize::MAX {
            first[c] = x;
        } else {
            uf.union(first[c], x);
        }
    }
    let mut queue = VecDeque::from([(a, b)]);
    while let Some((x, y)) = queue.pop_front() {
        if uf.union(x, y) {
            queue.extend(n.elements().map(|m| (n.mul(m, x), n.mul(m, y))));
        }
    }
    uf.labels()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_is_admissible() {
        for (n, h) in [
            (FiniteMonoid::cyclic(2), FiniteMonoid::chain(3)),
            (FiniteMonoid::chain(2), FiniteMonoid::cyclic(3)),
        ] {
            let q = AdmissibleQuotient::discrete(&n, &h);
            assert!(is_admissible(&n, &h, q.fibers()).is_ok());
            assert_eq!(q.num_classes(), n.order() * h.order());
            assert_eq!(q.global_class(0, 0), 0);
        }
    }

    #[test]
    fn lumping_over_a_group_element_breaks_right_stability() {
        let c2 = FiniteMonoid::cyclic(2);
        let err = is_admissible(&c2, &c2, &[vec![0, 1], vec![0, 0]]).unwrap_err();
        assert_eq!(err, AdmissibilityViolation::RightInstability { h: 1, n1: 0, n2: 1, h2: 1 });
        assert_eq!(err.condition(), 4);
    }

    #[test]
    fn lumping_over_bottom_of_s2_is_admissible() {
        let s2 = FiniteMonoid::chain(2);
        assert!(is_admissible(&s2, &s2, &[vec![0, 1], vec![0, 0]]).is_ok());
        let err = is_admissible(&s2, &s2, &[vec![0, 0], vec![0, 1]]).unwrap_err();
        assert_eq!(err.condition(), 1);
    }

    #[test]
    fn left_instability_witness() {
        // In the 3-chain, lumping {0, 1} but not 2 is fine; lumping {0, 2} apart from 1 is not,
        // since 1·0 = 1 and 1·2 = 2 must then be related.
        let n = FiniteMonoid::chain(3);
        let h = FiniteMonoid::chain(2);
        assert!(is_admissible(&n, &h, &[vec![0, 1, 2], vec![0, 0, 1]]).is_ok());
        let err = is_admissible(&n, &h, &[vec![0, 1, 2], vec![0, 1, 0]]).unwrap_err();
        assert_eq!(err.condition(), 3);
    }

    #[test]
    fn enumeration_small_cases() {
        let c2 = FiniteMonoid::cyclic(2);
        let s2 = FiniteMonoid::chain(2);
        assert_eq!(enumerate_admissible_quotients(&c2, &c2).unwrap().len(), 1);
        let qs = enumerate_admissible_quotients(&s2, &s2).unwrap();
        assert_eq!(qs.len(), 2);
        assert!(qs[0].is_discrete());
        assert_eq!(qs[1].fibers(), &[vec![0, 1], vec![0, 0]]);
        assert_eq!(qs[1].num_classes(), 3);
        for h in [c2.clone(), s2.clone(), FiniteMonoid::chain(3)] {
            assert_eq!(enumerate_admissible_quotients(&FiniteMonoid::trivial(), &h).unwrap().len(), 1);
        }
    }

    #[test]
    fn enumeration_respects_bounds() {
        let big = FiniteMonoid::chain(7);
        let err = enumerate_admissible_quotients(&big, &big).unwrap_err();
        assert_eq!(err, QuotientError::BoundExceeded { cells: 49, max: 36 });
    }

    #[test]
    fn enumeration_matches_filtered_brute_force() {
        // Every labelling of every fiber, filtered by is_admissible.
        let cases = [
            (FiniteMonoid::chain(2), FiniteMonoid::chain(3)),
            (FiniteMonoid::chain(3), FiniteMonoid::chain(2)),
            (FiniteMonoid::cyclic(2), FiniteMonoid::chain(2)),
            (FiniteMonoid::chain(2), FiniteMonoid::cyclic(2).product(&FiniteMonoid::chain(2))),
        ];
        for (n, h) in cases {
            let all = all_labellings(n.order());
            let mut expected = BTreeSet::new();
            let mut idx = vec![0usize; h.order()];
            loop {
                let fibers: Vec<Vec<usize>> = idx.iter().map(|&i| all[i].clone()).collect();
                if is_admissible(&n, &h, &fibers).is_ok() {
                    expected.insert(fibers);
                }
                let mut pos = 0;
                while pos < idx.len() {
                    idx[pos] += 1;
                    if idx[pos] < all.len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == idx.len() {
                    break;
                }
            }
            let got: BTreeSet<Vec<Vec<usize>>> =
                enumerate_admissible_quotients(&n, &h).unwrap().into_iter().map(|q| q.fibers().to_vec()).collect();
            assert_eq!(got, expected, "N={n:?} H={h:?}");
        }
    }

    fn all_labellings(len: usize) -> Vec<Vec<usize>> {
        // Restricted growth strings: every set partition exactly once.
        let mut out = Vec::new();
        let mut cur = vec![0usize; len];
        fn rec(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if i == cur.len() {
                out.push(cur.clone());
                return;
            }
            for v in 0..=max + 1 {
                cur[i] = v;
                rec(i + 1, max.max(v), cur, out);
            }
        }
        if len > 0 {
            rec(1, 0, &mut cur, &mut out);
        }
        out
    }

    #[test]
    fn star_actions_follow_the_laws() {
        let n = FiniteMonoid::chain(3);
        let h = FiniteMonoid::chain(3);
        for q in enumerate_admissible_quotients(&n, &h).unwrap() {
            for hh in h.elements() {
                for c in 0..q.class_count(hh) {
                    assert_eq!(q.star_left(0, hh, c), c);
                    assert_eq!(q.star_right(hh, c, 0), c);
                    for m in n.elements() {
                        for m2 in n.elements() {
                            let lhs = q.star_left(m, hh, q.star_left(m2, hh, c));
                            assert_eq!(lhs, q.star_left(n.mul(m, m2), hh, c));
                        }
                    }
                    for h1 in h.elements() {
                        for h2 in h.elements() {
                            let step = q.star_right(hh, c, h1);
                            let lhs = q.star_right(h.mul(hh, h1), step, h2);
                            assert_eq!(lhs, q.star_right(hh, c, h.mul(h1, h2)));
                        }
                    }
                }
            }
        }
    }
}
