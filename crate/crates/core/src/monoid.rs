//! Finite monoids given by Cayley tables, their homomorphisms, congruences and
//! quotients, and the kernel/cokernel notions of the pointed category of monoids.
//!
//! Elements are the indices `0..order`; index `0` is always the identity.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::union_find::{canonical_labels, UnionFind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("EmptyMonoid: a monoid needs at least one element")]
    EmptyMonoid,
    #[error("ShapeMismatch: expected {expected} entries in row {row}, found {found}")]
    ShapeMismatch { row: usize, expected: usize, found: usize },
    #[error("EntryOutOfRange: entry {value} at ({a},{b}) is not below the order {order}")]
    EntryOutOfRange { a: usize, b: usize, value: usize, order: usize },
    #[error("IdentityViolation: element 0 does not act as identity on {0}")]
    IdentityViolation(usize),
    #[error("AssociativityViolation: ({a}*{b})*{c} != {a}*({b}*{c})")]
    AssociativityViolation { a: usize, b: usize, c: usize },
    #[error("MapLengthMismatch: map has {found} entries but the domain has order {expected}")]
    MapLengthMismatch { expected: usize, found: usize },
    #[error("MapOutOfRange: element {element} is sent to {value}, outside the codomain")]
    MapOutOfRange { element: usize, value: usize },
    #[error("IdentityNotPreserved: the identity is sent to {0}")]
    IdentityNotPreserved(usize),
    #[error("MultiplicationNotPreserved: f({a}*{b}) != f({a})*f({b})")]
    MultiplicationNotPreserved { a: usize, b: usize },
    #[error("DomainMismatch: {0}")]
    DomainMismatch(&'static str),
}

/// A finite monoid stored as a row-major Cayley table (`table[a * order + b] = a·b`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteMonoid {
    order: usize,
    table: Vec<usize>,
}

impl fmt::Debug for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// Checks the identity and associativity laws of a Cayley table.
pub fn validate_monoid(order: usize, rows: &[Vec<usize>]) -> Result<FiniteMonoid, MonoidError> {
    if order == 0 {
        return Err(MonoidError::EmptyMonoid);
    }
    if rows.len() != order {
        return Err(MonoidError::ShapeMismatch { row: rows.len().min(order), expected: order, found: rows.len() });
    }
    let mut table = Vec::with_capacity(order * order);
    for (a, row) in rows.iter().enumerate() {
        if row.len() != order {
            return Err(MonoidError::ShapeMismatch { row: a, expected: order, found: row.len() });
        }
        table.extend_from_slice(row);
    }
    FiniteMonoid::from_flat(order, table)
}

impl FiniteMonoid {
    /// Validates a flat row-major table.
    pub fn from_flat(order: usize, table: Vec<usize>) -> Result<Self, MonoidError> {
        if order == 0 {
            return Err(MonoidError::EmptyMonoid);
        }
        if table.len() != order * order {
            return Err(MonoidError::ShapeMismatch { row: 0, expected: order * order, found: table.len() });
        }
        if let Some(i) = table.iter().position(|&v| v >= order) {
            return Err(MonoidError::EntryOutOfRange { a: i / order, b: i % order, value: table[i], order });
        }
        let m = FiniteMonoid { order, table };
        for a in 0..order {
            if m.mul(0, a) != a || m.mul(a, 0) != a {
                return Err(MonoidError::IdentityViolation(a));
            }
        }
        if let Some((a, b, c)) = m.associativity_witness() {
            return Err(MonoidError::AssociativityViolation { a, b, c });
        }
        Ok(m)
    }

    /// Builds a monoid from a multiplication closure without validation.
    /// Callers are responsible for the monoid laws; tests re-validate.
    pub(crate) fn from_fn_unchecked(order: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(mul(a, b));
            }
        }
        FiniteMonoid { order, table }
    }

    /// Builds and validates a monoid from a multiplication closure.
    pub fn from_fn(order: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self, MonoidError> {
        let m = Self::from_fn_unchecked(order, mul);
        Self::from_flat(m.order, m.table)
    }

    fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for a in 1..n {
            for b in 1..n {
                let ab = self.mul(a, b);
                for c in 1..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.table.chunks(self.order)
    }

    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        self.rows().map(<[usize]>::to_vec).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.order).all(|a| self.mul(a, a) == a)
    }

    /// Commutative and idempotent: a meet-semilattice with the identity as top.
    pub fn is_semilattice(&self) -> bool {
        self.is_commutative() && self.is_idempotent()
    }

    /// Some `y` with `x·y = 1`, the least one if several exist.
    pub fn right_inverse(&self, x: usize) -> Option<usize> {
        (0..self.order).find(|&y| self.mul(x, y) == 0)
    }

    pub fn is_group(&self) -> bool {
        (0..self.order).all(|x| self.right_inverse(x).is_some())
    }

    /// `n ≤ m` in the semilattice order (`n·m = n`).
    pub fn leq(&self, n: usize, m: usize) -> bool {
        self.mul(n, m) == n
    }

    /// Relabels elements through a bijection `perm` (old index -> new index) fixing 0.
    pub fn relabel(&self, perm: &[usize]) -> FiniteMonoid {
        let n = self.order;
        let mut inv = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            inv[new] = old;
        }
        FiniteMonoid::from_fn_unchecked(n, |a, b| perm[self.mul(inv[a], inv[b])])
    }

    pub fn trivial() -> Self {
        FiniteMonoid { order: 1, table: vec![0] }
    }

    /// The cyclic group of order `n` (addition mod `n`).
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        Self::from_fn_unchecked(n, |a, b| (a + b) % n)
    }

    /// The `n`-element chain as a meet-semilattice: element `i` is the `i`-th from the top,
    /// so the identity `0` is the top and `n - 1` the bottom.
    pub fn chain(n: usize) -> Self {
        assert!(n > 0, "chain of length 0");
        Self::from_fn_unchecked(n, |a, b| a.max(b))
    }

    /// The direct product; `(a, b)` is numbered `a * other.order() + b`.
    pub fn product(&self, other: &FiniteMonoid) -> FiniteMonoid {
        let m = other.order;
        Self::from_fn_unchecked(self.order * m, |x, y| {
            self.mul(x / m, y / m) * m + other.mul(x % m, y % m)
        })
    }

    /// The opposite monoid (`a ·op b = b · a`).
    pub fn opposite(&self) -> FiniteMonoid {
        Self::from_fn_unchecked(self.order, |a, b| self.mul(b, a))
    }
}

/// A monoid homomorphism between finite monoids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonoidHom {
    dom: FiniteMonoid,
    cod: FiniteMonoid,
    map: Vec<usize>,
}

/// Checks that `map` is total, preserves the identity and preserves multiplication.
pub fn validate_hom(dom: &FiniteMonoid, cod: &FiniteMonoid, map: Vec<usize>) -> Result<MonoidHom, MonoidError> {
    if map.len() != dom.order() {
        return Err(MonoidError::MapLengthMismatch { expected: dom.order(), found: map.len() });
    }
    if let Some((element, &value)) = map.iter().enumerate().find(|(_, &v)| v >= cod.order()) {
        return Err(MonoidError::MapOutOfRange { element, value });
    }
    if map[0] != 0 {
        return Err(MonoidError::IdentityNotPreserved(map[0]));
    }
    for a in dom.elements() {
        for b in dom.elements() {
            if map[dom.mul(a, b)] != cod.mul(map[a], map[b]) {
                return Err(MonoidError::MultiplicationNotPreserved { a, b });
            }
        }
    }
    Ok(MonoidHom { dom: dom.clone(), cod: cod.clone(), map })
}

impl MonoidHom {
    pub(crate) fn new_unchecked(dom: &FiniteMonoid, cod: &FiniteMonoid, map: Vec<usize>) -> Self {
        MonoidHom { dom: dom.clone(), cod: cod.clone(), map }
    }

    pub fn identity(m: &FiniteMonoid) -> Self {
        Self::new_unchecked(m, m, m.elements().collect())
    }

    /// The zero morphism: everything goes to the identity.
    pub fn zero(dom: &FiniteMonoid, cod: &FiniteMonoid) -> Self {
        Self::new_unchecked(dom, cod, vec![0; dom.order()])
    }

    pub fn dom(&self) -> &FiniteMonoid {
        &self.dom
    }

    pub fn cod(&self) -> &FiniteMonoid {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &MonoidHom) -> Result<MonoidHom, MonoidError> {
        if self.cod != other.dom {
            return Err(MonoidError::DomainMismatch("composite of homs with incompatible (co)domains"));
        }
        Ok(MonoidHom {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            map: self.map.iter().map(|&x| other.map[x]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.order()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.order()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.order() == self.cod.order() && self.is_injective()
    }

    pub fn is_zero(&self) -> bool {
        self.map.iter().all(|&y| y == 0)
    }

    /// The inverse of a bijective hom.
    pub fn inverse(&self) -> Option<MonoidHom> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(MonoidHom { dom: self.cod.clone(), cod: self.dom.clone(), map: inv })
    }
}

/// All homomorphisms `dom -> cod`, in lexicographic order of their maps.
pub fn all_homs(dom: &FiniteMonoid, cod: &FiniteMonoid) -> Vec<MonoidHom> {
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; dom.order()];
    map[0] = 0;
    hom_search(dom, cod, &mut map, 1, &mut |m| out.push(MonoidHom::new_unchecked(dom, cod, m.to_vec())));
    out
}

/// Depth-first search over partial maps; `map[..next]` is assigned.
pub(crate) fn hom_search(
    dom: &FiniteMonoid,
    cod: &FiniteMonoid,
    map: &mut Vec<usize>,
    next: usize,
    emit: &mut dyn FnMut(&[usize]),
) {
    if next == dom.order() {
        emit(map);
        return;
    }
    for v in cod.elements() {
        map[next] = v;
        if partial_hom_consistent(dom, cod, map, next) {
            hom_search(dom, cod, map, next + 1, emit);
        }
    }
    map[next] = usize::MAX;
}

/// Checks every instance of `f(ab) = f(a)f(b)` with `a`, `b`, `ab` all assigned
/// and `last` among them; earlier instances were checked at earlier steps.
fn partial_hom_consistent(dom: &FiniteMonoid, cod: &FiniteMonoid, map: &[usize], last: usize) -> bool {
    for a in 0..=last {
        for b in 0..=last {
            let p = dom.mul(a, b);
            if p > last || (a != last && b != last && p != last) {
                continue;
            }
            if map[p] != cod.mul(map[a], map[b]) {
                return false;
            }
        }
    }
    true
}

/// A two-sided congruence, given by class labels numbered by first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Congruence {
    class_of: Vec<usize>,
    num_classes: usize,
}

impl Congruence {
    pub fn discrete(order: usize) -> Self {
        Congruence { class_of: (0..order).collect(), num_classes: order }
    }

    /// Accepts any labelling compatible with multiplication; renumbers it canonically.
    pub fn from_labels(m: &FiniteMonoid, labels: &[usize]) -> Option<Self> {
        if labels.len() != m.order() {
            return None;
        }
        let class_of = canonical_labels(labels);
        let c = Congruence { num_classes: class_of.iter().max().map_or(0, |x| x + 1), class_of };
        c.is_compatible(m).then_some(c)
    }

    /// Kernel pair of a hom: `g ~ g'` iff `f(g) = f(g')`.
    pub fn kernel_pair(f: &MonoidHom) -> Self {
        let class_of = canonical_labels(f.map());
        Congruence { num_classes: class_of.iter().max().map_or(0, |x| x + 1), class_of }
    }

    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn is_discrete(&self) -> bool {
        self.num_classes == self.class_of.len()
    }

    pub fn is_compatible(&self, m: &FiniteMonoid) -> bool {
        // Checking one side at a time suffices: a~a', b~b' gives ab ~ a'b ~ a'b'.
        m.elements().all(|a| {
            m.elements().all(|b| {
                !self.related(a, b)
                    || m.elements().all(|x| {
                        self.related(m.mul(x, a), m.mul(x, b)) && self.related(m.mul(a, x), m.mul(b, x))
                    })
            })
        })
    }
}

/// Smallest congruence containing `seed_pairs` (union-find with worklist propagation).
pub fn congruence_closure(m: &FiniteMonoid, seed_pairs: &[(usize, usize)]) -> Congruence {
    let mut uf = UnionFind::new(m.order());
    let mut queue: VecDeque<(usize, usize)> = seed_pairs.iter().copied().collect();
    while let Some((a, b)) = queue.pop_front() {
        if uf.union(a, b) {
            for x in m.elements() {
                queue.push_back((m.mul(x, a), m.mul(x, b)));
                queue.push_back((m.mul(a, x), m.mul(b, x)));
            }
        }
    }
    // Pairs found already related need no propagation: their translates follow
    // from the translates of the merged pairs that related them.
    let class_of = uf.labels();
    Congruence { num_classes: class_of.iter().max().map_or(0, |x| x + 1), class_of }
}

/// The quotient monoid on class indices, with the projection.
pub fn quotient_monoid(m: &FiniteMonoid, c: &Congruence) -> (FiniteMonoid, MonoidHom) {
    let k = c.num_classes();
    let mut rep = vec![usize::MAX; k];
    for (x, &cl) in c.class_of().iter().enumerate() {
        if rep[cl] == usize::MAX {
            rep[cl] = x;
        }
    }
    let q = FiniteMonoid::from_fn_unchecked(k, |a, b| c.class_of()[m.mul(rep[a], rep[b])]);
    let proj = MonoidHom::new_unchecked(m, &q, c.class_of().to_vec());
    (q, proj)
}

/// A submonoid: sorted members containing 0 and closed under multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submonoid {
    parent: FiniteMonoid,
    members: Vec<usize>,
}

impl Submonoid {
    pub fn new(parent: &FiniteMonoid, mut members: Vec<usize>) -> Option<Self> {
        members.sort_unstable();
        members.dedup();
        let mut inside = vec![false; parent.order()];
        for &x in &members {
            if x >= parent.order() {
                return None;
            }
            inside[x] = true;
        }
        let closed = inside[0]
            && members.iter().all(|&a| members.iter().all(|&b| inside[parent.mul(a, b)]));
        closed.then(|| Submonoid { parent: parent.clone(), members })
    }

    pub fn parent(&self) -> &FiniteMonoid {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The submonoid as a monoid in its own right (members renumbered by rank) and its inclusion.
    pub fn to_monoid(&self) -> (FiniteMonoid, MonoidHom) {
        let pos = |x: usize| self.members.binary_search(&x).expect("closed submonoid");
        let sub = FiniteMonoid::from_fn_unchecked(self.members.len(), |a, b| {
            pos(self.parent.mul(self.members[a], self.members[b]))
        });
        let incl = MonoidHom::new_unchecked(&sub, &self.parent, self.members.clone());
        (sub, incl)
    }
}

/// The kernel `{g : e(g) = 1}` with its inclusion.
pub fn kernel(e: &MonoidHom) -> (Submonoid, MonoidHom) {
    let members: Vec<usize> = e.dom().elements().filter(|&g| e.apply(g) == 0).collect();
    let sub = Submonoid { parent: e.dom().clone(), members };
    let (_, incl) = sub.to_monoid();
    (sub, incl)
}

/// Whether `e` is the cokernel of `k`: `e` is surjective and its kernel pair is the
/// congruence generated by `k(n) ~ 1`.
pub fn is_cokernel(k: &MonoidHom, e: &MonoidHom) -> Result<bool, MonoidError> {
    if k.cod() != e.dom() {
        return Err(MonoidError::DomainMismatch("codomain of k differs from domain of e"));
    }
    Ok(cokernel_witness(k, e).is_none())
}

/// Why `e` fails to be the cokernel of `k`, if it does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CokernelFailure {
    /// `h` is not in the image of `e`.
    NotSurjective(usize),
    /// `g1`, `g2` are related by exactly one of the two congruences.
    CongruenceMismatch(usize, usize),
}

pub(crate) fn cokernel_witness(k: &MonoidHom, e: &MonoidHom) -> Option<CokernelFailure> {
    if !e.is_surjective() {
        let mut hit = vec![false; e.cod().order()];
        for &y in e.map() {
            hit[y] = true;
        }
        return hit.iter().position(|&b| !b).map(CokernelFailure::NotSurjective);
    }
    let seeds: Vec<(usize, usize)> = k.map().iter().map(|&g| (g, 0)).collect();
    let generated = congruence_closure(e.dom(), &seeds);
    let pair = Congruence::kernel_pair(e);
    if generated == pair {
        return None;
    }
    let g = e.dom();
    for a in g.elements() {
        for b in a + 1..g.order() {
            if generated.related(a, b) != pair.related(a, b) {
                return Some(CokernelFailure::CongruenceMismatch(a, b));
            }
        }
    }
    unreachable!("canonical labellings differ but relations agree")
}

/// The lexicographically first isomorphism `m1 -> m2`, if any.
pub fn find_isomorphism(m1: &FiniteMonoid, m2: &FiniteMonoid) -> Option<MonoidHom> {
    if m1.order() != m2.order() {
        return None;
    }
    let n = m1.order();
    let sig1: Vec<ElementSignature> = m1.elements().map(|x| ElementSignature::of(m1, x)).collect();
    let sig2: Vec<ElementSignature> = m2.elements().map(|x| ElementSignature::of(m2, x)).collect();
    let mut s1 = sig1.clone();
    let mut s2 = sig2.clone();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[0] = 0;
    used[0] = true;
    if iso_search(m1, m2, &sig1, &sig2, &mut map, &mut used, 1) {
        Some(MonoidHom::new_unchecked(m1, m2, map))
    } else {
        None
    }
}

fn iso_search(
    m1: &FiniteMonoid,
    m2: &FiniteMonoid,
    sig1: &[ElementSignature],
    sig2: &[ElementSignature],
    map: &mut [usize],
    used: &mut [bool],
    next: usize,
) -> bool {
    let n = m1.order();
    if next == n {
        return true;
    }
    for v in 0..n {
        if used[v] || sig1[next] != sig2[v] {
            continue;
        }
        map[next] = v;
        used[v] = true;
        if partial_hom_consistent(m1, m2, map, next) && iso_search(m1, m2, sig1, sig2, map, used, next + 1) {
            return true;
        }
        used[v] = false;
    }
    map[next] = usize::MAX;
    false
}

/// Isomorphism-invariant data about one element, used to prune the iso search.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct ElementSignature {
    is_identity: bool,
    idempotent: bool,
    period: usize,
    left_image: usize,
    right_image: usize,
    commutes_with: usize,
}

impl ElementSignature {
    fn of(m: &FiniteMonoid, x: usize) -> Self {
        let mut powers = vec![x];
        loop {
            let p = m.mul(*powers.last().unwrap(), x);
            if powers.contains(&p) {
                break;
            }
            powers.push(p);
        }
        let distinct = |it: &mut dyn Iterator<Item = usize>| {
            let mut seen = vec![false; m.order()];
            it.filter(|&y| !std::mem::replace(&mut seen[y], true)).count()
        };
        ElementSignature {
            is_identity: x == 0,
            idempotent: m.mul(x, x) == x,
            period: powers.len(),
            left_image: distinct(&mut m.elements().map(|y| m.mul(x, y))),
            right_image: distinct(&mut m.elements().map(|y| m.mul(y, x))),
            commutes_with: m.elements().filter(|&y| m.mul(x, y) == m.mul(y, x)).count(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> FiniteMonoid {
        validate_monoid(2, &[vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn s2() -> FiniteMonoid {
        validate_monoid(2, &[vec![0, 1], vec![1, 1]]).unwrap()
    }

    #[test]
    fn validate_small_tables() {
        assert_eq!(validate_monoid(1, &[vec![0]]).unwrap(), FiniteMonoid::trivial());
        assert_eq!(c2(), FiniteMonoid::cyclic(2));
        assert_eq!(s2(), FiniteMonoid::chain(2));
        assert!(c2().is_group());
        assert!(s2().is_semilattice());
    }

    #[test]
    fn validate_reports_witnesses() {
        assert_eq!(validate_monoid(2, &[vec![1, 0], vec![0, 1]]), Err(MonoidError::IdentityViolation(0)));
        // (1·1)·2 = 1 but 1·(1·2) = 2.
        let err = validate_monoid(3, &[vec![0, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]).unwrap_err();
        assert!(matches!(err, MonoidError::AssociativityViolation { .. }), "{err:?}");
        assert!(matches!(
            validate_monoid(2, &[vec![0, 1], vec![1, 2]]),
            Err(MonoidError::EntryOutOfRange { a: 1, b: 1, value: 2, .. })
        ));
        assert!(matches!(validate_monoid(2, &[vec![0, 1]]), Err(MonoidError::ShapeMismatch { .. })));
    }

    #[test]
    fn validate_hom_examples() {
        assert!(validate_hom(&c2(), &c2(), vec![0, 1]).is_ok());
        let zero = validate_hom(&c2(), &c2(), vec![0, 0]).unwrap();
        assert!(zero.is_zero());
        assert_eq!(
            validate_hom(&c2(), &s2(), vec![0, 1]),
            Err(MonoidError::MultiplicationNotPreserved { a: 1, b: 1 })
        );
        assert_eq!(validate_hom(&c2(), &s2(), vec![1, 1]), Err(MonoidError::IdentityNotPreserved(1)));
    }

    #[test]
    fn congruence_closure_examples() {
        assert!(congruence_closure(&c2(), &[]).is_discrete());
        assert_eq!(congruence_closure(&c2(), &[(0, 1)]).num_classes(), 1);
        assert_eq!(congruence_closure(&s2(), &[(0, 1)]).num_classes(), 1);
    }

    #[test]
    fn quotient_examples() {
        let (q, p) = quotient_monoid(&c2(), &Congruence::discrete(2));
        assert!(find_isomorphism(&q, &c2()).is_some());
        assert!(p.is_bijective());
        let (q, _) = quotient_monoid(&c2(), &congruence_closure(&c2(), &[(0, 1)]));
        assert!(q.is_trivial());

        // S2×S2, identify (top,bottom) with (bottom,bottom): elements are a*2+b.
        let p2 = s2().product(&s2());
        let c = congruence_closure(&p2, &[(1, 3)]);
        assert_eq!(c.class_of(), &[0, 1, 2, 1]);
        let (q, proj) = quotient_monoid(&p2, &c);
        assert_eq!(q.order(), 3);
        assert!(proj.is_surjective());
        assert!(validate_hom(&p2, &q, proj.map().to_vec()).is_ok());
        assert!(FiniteMonoid::from_flat(q.order(), q.table().to_vec()).is_ok());
    }

    #[test]
    fn kernel_examples() {
        let (k, _) = kernel(&MonoidHom::identity(&c2()));
        assert_eq!(k.members(), &[0]);
        let (k, _) = kernel(&MonoidHom::zero(&c2(), &c2()));
        assert_eq!(k.members(), &[0, 1]);
        let p2 = s2().product(&s2());
        let proj2 = validate_hom(&p2, &s2(), (0..4).map(|x| x % 2).collect()).unwrap();
        let (k, incl) = kernel(&proj2);
        // (top,top) = 0 and (bottom,top) = 2
        assert_eq!(k.members(), &[0, 2]);
        assert!(find_isomorphism(&k.to_monoid().0, &s2()).is_some());
        assert!(incl.then(&proj2).unwrap().is_zero());
    }

    #[test]
    fn cokernel_examples() {
        let p2 = s2().product(&s2());
        let proj2 = validate_hom(&p2, &s2(), (0..4).map(|x| x % 2).collect()).unwrap();
        let (_, incl) = kernel(&proj2);
        assert!(is_cokernel(&incl, &proj2).unwrap());

        let id = MonoidHom::identity(&c2());
        assert!(!is_cokernel(&id, &id).unwrap());

        let z = MonoidHom::zero(&FiniteMonoid::trivial(), &c2());
        assert!(is_cokernel(&z, &id).unwrap());

        assert!(is_cokernel(&id, &proj2).is_err());
    }

    #[test]
    fn isomorphism_examples() {
        assert_eq!(find_isomorphism(&c2(), &c2()).unwrap().map(), &[0, 1]);
        assert!(find_isomorphism(&c2(), &s2()).is_none());
        let p = s2().product(&s2());
        assert_eq!(find_isomorphism(&p, &p).unwrap().map(), &[0, 1, 2, 3]);
        // C2×S2 -> S2×C2 is forced to be the factor swap (a,b) -> (b,a).
        let a = c2().product(&s2());
        let b = s2().product(&c2());
        assert_eq!(find_isomorphism(&a, &b).unwrap().map(), &[0, 2, 1, 3]);
    }

    #[test]
    fn all_homs_counts() {
        // Endomorphisms of S2: identity and the zero map.
        assert_eq!(all_homs(&s2(), &s2()).len(), 2);
        // C3 -> C3: multiplication by 0, 1, 2.
        assert_eq!(all_homs(&FiniteMonoid::cyclic(3), &FiniteMonoid::cyclic(3)).len(), 3);
        for h in all_homs(&FiniteMonoid::chain(3), &s2().product(&s2())) {
            assert!(validate_hom(h.dom(), h.cod(), h.map().to_vec()).is_ok());
        }
    }

    /// Every map `dom -> cod` that passes `validate_hom`, by exhaustion.
    fn homs_by_exhaustion(dom: &FiniteMonoid, cod: &FiniteMonoid) -> Vec<Vec<usize>> {
        let total = cod.order().pow(dom.order() as u32);
        (0..total)
            .map(|code| (0..dom.order()).map(|i| code / cod.order().pow(i as u32) % cod.order()).collect::<Vec<_>>())
            .filter(|m| validate_hom(dom, cod, m.clone()).is_ok())
            .collect()
    }

    #[test]
    fn all_homs_agrees_with_exhaustion() {
        // A constraint a*b = p with p assigned after a and b must still be checked:
        // here 2*1 = 3 with 1 absorbing on the left.
        let g = validate_monoid(
            6,
            &[
                vec![0, 1, 2, 3, 4, 5],
                vec![1, 1, 1, 1, 1, 1],
                vec![2, 3, 2, 3, 4, 5],
                vec![3, 3, 3, 3, 3, 3],
                vec![4, 5, 4, 5, 4, 5],
                vec![5, 5, 5, 5, 5, 5],
            ],
        )
        .unwrap();
        let ms = [FiniteMonoid::trivial(), c2(), s2(), FiniteMonoid::cyclic(3), FiniteMonoid::chain(3), s2().product(&s2()), g];
        for a in &ms {
            for b in &ms {
                if b.order().pow(a.order() as u32) > 50_000 {
                    continue;
                }
                let mut fast: Vec<Vec<usize>> = all_homs(a, b).into_iter().map(|h| h.map().to_vec()).collect();
                let mut slow = homs_by_exhaustion(a, b);
                fast.sort();
                slow.sort();
                assert_eq!(fast, slow, "{a:?} -> {b:?}");
            }
        }
    }
}
