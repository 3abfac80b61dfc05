//! Actions of `H` on `N` relative to an admissible quotient, their equivalence
//! classes, and the weak semidirect product they induce.
//!
//! An [`ActionClass`] records only the class `[α(h,n), h]` of each value, which is
//! all an extension can observe. The six conditions are checked at that level.

use thiserror::Error;

use crate::bounds::Bounds;
use crate::monoid::{FiniteMonoid, MonoidHom};
use crate::par;
use crate::quotient::AdmissibleQuotient;
use crate::split::{validate_split_extension, SplitExtError, SplitExtension};

/// A raw map `H × N -> N`, stored row-major by `h`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PreAction {
    n_order: usize,
    values: Vec<usize>,
}

impl PreAction {
    pub fn new(n_order: usize, rows: Vec<Vec<usize>>) -> Option<Self> {
        if rows.iter().any(|r| r.len() != n_order || r.iter().any(|&v| v >= n_order)) {
            return None;
        }
        Some(PreAction { n_order, values: rows.concat() })
    }

    pub fn from_fn(n: &FiniteMonoid, h: &FiniteMonoid, mut f: impl FnMut(usize, usize) -> usize) -> Self {
        let mut values = Vec::with_capacity(n.order() * h.order());
        for hh in h.elements() {
            for nn in n.elements() {
                values.push(f(hh, nn));
            }
        }
        PreAction { n_order: n.order(), values }
    }

    /// `α(h, n) = n`.
    pub fn trivial(n: &FiniteMonoid, h: &FiniteMonoid) -> Self {
        Self::from_fn(n, h, |_, nn| nn)
    }

    #[inline]
    pub fn get(&self, h: usize, n: usize) -> usize {
        self.values[h * self.n_order + n]
    }

    pub fn h_order(&self) -> usize {
        self.values.len().checked_div(self.n_order).unwrap_or(0)
    }

    pub fn n_order(&self) -> usize {
        self.n_order
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.values.chunks(self.n_order)
    }
}

/// The first action condition found to fail. Conditions are numbered 1 to 6.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ActionViolation {
    #[error("ShapeMismatch: the table does not have |H| rows of |N| entries in range")]
    ShapeMismatch,
    #[error("LeftCompatibility (condition 1): ({n1},{h}) ~ ({n2},{h}) but {n1}*[a({h},{n}),{h}] != {n2}*[a({h},{n}),{h}]")]
    LeftCompatibility { h: usize, n1: usize, n2: usize, n: usize },
    #[error("RightCompatibility (condition 2): ({n1},{h2}) ~ ({n2},{h2}) but [a({h},{n1}),{h}]*{h2} != [a({h},{n2}),{h}]*{h2}")]
    RightCompatibility { h: usize, h2: usize, n1: usize, n2: usize },
    #[error("Multiplicativity (condition 3): [a({h},{n1}*{n2}),{h}] != [a({h},{n1})*a({h},{n2}),{h}]")]
    Multiplicativity { h: usize, n1: usize, n2: usize },
    #[error("Compositionality (condition 4): [a({h1}*{h2},{n}),{h1}*{h2}] != [a({h1},a({h2},{n})),{h1}*{h2}]")]
    Compositionality { h1: usize, h2: usize, n: usize },
    #[error("UnitPreserved (condition 5): [a({h},1),{h}] != [1,{h}]")]
    UnitPreserved { h: usize },
    #[error("IdentityActsTrivially (condition 6): a(1,{n}) != {n}")]
    IdentityActsTrivially { n: usize },
}

impl ActionViolation {
    pub fn condition(&self) -> u8 {
        match self {
            Self::ShapeMismatch => 0,
            Self::LeftCompatibility { .. } => 1,
            Self::RightCompatibility { .. } => 2,
            Self::Multiplicativity { .. } => 3,
            Self::Compositionality { .. } => 4,
            Self::UnitPreserved { .. } => 5,
            Self::IdentityActsTrivially { .. } => 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("NotAnAction: {0}")]
    NotAnAction(#[from] ActionViolation),
    #[error("BoundExceeded: |H|*|N| = {cells} exceeds the limit {max}")]
    BoundExceeded { cells: usize, max: usize },
    #[error("QuotientMismatch: the action class belongs to a different quotient")]
    QuotientMismatch,
    #[error("ExtensionInvalid: {0}")]
    Extension(#[from] SplitExtError),
}

/// Checks the six action conditions for a raw map, literally as stated on elements.
pub fn is_action(q: &AdmissibleQuotient, alpha: &PreAction) -> Result<(), ActionViolation> {
    let (n, h) = (q.n(), q.h());
    if alpha.n_order() != n.order() || alpha.h_order() != h.order() {
        return Err(ActionViolation::ShapeMismatch);
    }
    let cls = |hh: usize, x: usize| q.class_in_fiber(hh, x);
    for hh in h.elements() {
        for n1 in n.elements() {
            for n2 in n1 + 1..n.order() {
                if !q.same(hh, n1, n2) {
                    continue;
                }
                for m in n.elements() {
                    let a = alpha.get(hh, m);
                    if cls(hh, n.mul(n1, a)) != cls(hh, n.mul(n2, a)) {
                        return Err(ActionViolation::LeftCompatibility { h: hh, n1, n2, n: m });
                    }
                }
            }
        }
    }
    for h2 in h.elements() {
        for n1 in n.elements() {
            for n2 in n1 + 1..n.order() {
                if !q.same(h2, n1, n2) {
                    continue;
                }
                for hh in h.elements() {
                    let hh2 = h.mul(hh, h2);
                    if cls(hh2, alpha.get(hh, n1)) != cls(hh2, alpha.get(hh, n2)) {
                        return Err(ActionViolation::RightCompatibility { h: hh, h2, n1, n2 });
                    }
                }
            }
        }
    }
    for hh in h.elements() {
        for n1 in n.elements() {
            for n2 in n.elements() {
                let lhs = alpha.get(hh, n.mul(n1, n2));
                let rhs = n.mul(alpha.get(hh, n1), alpha.get(hh, n2));
                if cls(hh, lhs) != cls(hh, rhs) {
                    return Err(ActionViolation::Multiplicativity { h: hh, n1, n2 });
                }
            }
        }
    }
    for h1 in h.elements() {
        for h2 in h.elements() {
            let h12 = h.mul(h1, h2);
            for m in n.elements() {
                if cls(h12, alpha.get(h12, m)) != cls(h12, alpha.get(h1, alpha.get(h2, m))) {
                    return Err(ActionViolation::Compositionality { h1, h2, n: m });
                }
            }
        }
    }
    if let Some(hh) = h.elements().find(|&hh| cls(hh, alpha.get(hh, 0)) != cls(hh, 0)) {
        return Err(ActionViolation::UnitPreserved { h: hh });
    }
    if let Some(m) = n.elements().find(|&m| cls(0, alpha.get(0, m)) != cls(0, m)) {
        return Err(ActionViolation::IdentityActsTrivially { n: m });
    }
    Ok(())
}

/// An element of `Act_Q/∼`: the class `[α(h,n), h]` of every value of some action.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActionClass {
    quotient: AdmissibleQuotient,
    table: Vec<usize>,
}

impl ActionClass {
    /// Validates a table of fiber class ids (`table[h][n]` is a class over `h`).
    pub fn new(q: &AdmissibleQuotient, rows: Vec<Vec<usize>>) -> Result<Self, ActionViolation> {
        let (n, h) = (q.n().order(), q.h().order());
        if rows.len() != h || rows.iter().enumerate().any(|(hh, r)| r.len() != n || r.iter().any(|&c| c >= q.class_count(hh))) {
            return Err(ActionViolation::ShapeMismatch);
        }
        let table = rows.concat();
        check_class_table(q, &table)?;
        Ok(ActionClass { quotient: q.clone(), table })
    }

    /// The class of a raw action; fails if `alpha` is not an action for `q`.
    pub fn from_pre_action(q: &AdmissibleQuotient, alpha: &PreAction) -> Result<Self, ActionViolation> {
        is_action(q, alpha)?;
        Ok(Self::from_pre_action_unchecked(q, alpha))
    }

    pub(crate) fn from_pre_action_unchecked(q: &AdmissibleQuotient, alpha: &PreAction) -> Self {
        let nn = q.n().order();
        let table = (0..q.h().order() * nn).map(|i| q.class_in_fiber(i / nn, alpha.get(i / nn, i % nn))).collect();
        ActionClass { quotient: q.clone(), table }
    }

    /// The class of the trivial action; valid only when the trivial map is an action.
    pub fn trivial(q: &AdmissibleQuotient) -> Result<Self, ActionViolation> {
        Self::from_pre_action(q, &PreAction::trivial(q.n(), q.h()))
    }

    pub fn quotient(&self) -> &AdmissibleQuotient {
        &self.quotient
    }

    /// The class `[α(h,n), h]`, as a class id in the fiber over `h`.
    #[inline]
    pub fn get(&self, h: usize, n: usize) -> usize {
        self.table[h * self.quotient.n().order() + n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.table.chunks(self.quotient.n().order())
    }

    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        self.rows().map(<[usize]>::to_vec).collect()
    }

    /// Row-major class ids.
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// The action picking the least element of each class.
    pub fn representative(&self) -> PreAction {
        let q = &self.quotient;
        PreAction::from_fn(q.n(), q.h(), |h, n| q.rep(h, self.get(h, n)))
    }
}

/// Class-level check of the six conditions.
///
/// Conditions 1 and 2 quantify over all members of each class. Once they hold,
/// `x ∗ [α(h,n'),h]` depends only on the class of `x` over `h`, and
/// `[α(h,x),h] ∗ h'` only on the class of `x` over `h'`; conditions 3 and 4 are
/// still evaluated on every member so that no representative is presupposed.
pub fn check_class_table(q: &AdmissibleQuotient, table: &[usize]) -> Result<(), ActionViolation> {
    let (n, h) = (q.n(), q.h());
    let nn = n.order();
    let beta = |hh: usize, m: usize| table[hh * nn + m];
    for hh in h.elements() {
        for n1 in n.elements() {
            for n2 in n1 + 1..nn {
                if !q.same(hh, n1, n2) {
                    continue;
                }
                for m in n.elements() {
                    let c = beta(hh, m);
                    for x in q.members(hh, c) {
                        if q.class_in_fiber(hh, n.mul(n1, x)) != q.class_in_fiber(hh, n.mul(n2, x)) {
                            return Err(ActionViolation::LeftCompatibility { h: hh, n1, n2, n: m });
                        }
                    }
                }
            }
        }
    }
    for h2 in h.elements() {
        for n1 in n.elements() {
            for n2 in n1 + 1..nn {
                if !q.same(h2, n1, n2) {
                    continue;
                }
                for hh in h.elements() {
                    let hh2 = h.mul(hh, h2);
                    let mut seen = None;
                    for x in q.members(hh, beta(hh, n1)).chain(q.members(hh, beta(hh, n2))) {
                        let c = q.class_in_fiber(hh2, x);
                        if *seen.get_or_insert(c) != c {
                            return Err(ActionViolation::RightCompatibility { h: hh, h2, n1, n2 });
                        }
                    }
                }
            }
        }
    }
    for hh in h.elements() {
        for n1 in n.elements() {
            for n2 in n.elements() {
                let want = beta(hh, n.mul(n1, n2));
                for x in q.members(hh, beta(hh, n1)) {
                    for y in q.members(hh, beta(hh, n2)) {
                        if q.class_in_fiber(hh, n.mul(x, y)) != want {
                            return Err(ActionViolation::Multiplicativity { h: hh, n1, n2 });
                        }
                    }
                }
            }
        }
    }
    for h1 in h.elements() {
        for h2 in h.elements() {
            let h12 = h.mul(h1, h2);
            for m in n.elements() {
                let want = beta(h12, m);
                for x in q.members(h2, beta(h2, m)) {
                    for y in q.members(h1, beta(h1, x)) {
                        if q.class_in_fiber(h12, y) != want {
                            return Err(ActionViolation::Compositionality { h1, h2, n: m });
                        }
                    }
                }
            }
        }
    }
    if let Some(hh) = h.elements().find(|&hh| beta(hh, 0) != q.class_in_fiber(hh, 0)) {
        return Err(ActionViolation::UnitPreserved { h: hh });
    }
    if let Some(m) = n.elements().find(|&m| beta(0, m) != q.class_in_fiber(0, m)) {
        return Err(ActionViolation::IdentityActsTrivially { n: m });
    }
    Ok(())
}

/// Whether two actions define the same class, i.e. induce isomorphic extensions on `q`.
pub fn actions_equivalent(q: &AdmissibleQuotient, alpha: &PreAction, beta: &PreAction) -> Result<bool, ActionError> {
    is_action(q, alpha)?;
    is_action(q, beta)?;
    Ok(q.h().elements().all(|h| q.n().elements().all(|n| q.same(h, alpha.get(h, n), beta.get(h, n)))))
}

/// All of `Act_Q/∼` under the default bounds.
pub fn enumerate_action_classes(q: &AdmissibleQuotient) -> Result<Vec<ActionClass>, ActionError> {
    enumerate_action_classes_with(q, &Bounds::default())
}

/// All of `Act_Q/∼`, sorted by class table. Empty when no action is compatible with `q`.
///
/// Conditions 1, 2, 3, 5 and 6 only involve the row of one `h`, so each row is
/// searched on its own. Condition 4 ties the rows over `h`, `h'` and `h·h'`
/// together and is enforced while the rows are combined.
pub fn enumerate_action_classes_with(q: &AdmissibleQuotient, bounds: &Bounds) -> Result<Vec<ActionClass>, ActionError> {
    let (n, h) = (q.n(), q.h());
    let cells = n.order() * h.order();
    if n.is_trivial() || h.is_trivial() {
        // Only the identity fiber exists or every map is constant at 1.
        let alpha = PreAction::from_fn(n, h, |hh, m| if hh == 0 { m } else { 0 });
        return Ok(ActionClass::from_pre_action(q, &alpha).into_iter().collect());
    }
    if cells > bounds.max_action_cells {
        return Err(ActionError::BoundExceeded { cells, max: bounds.max_action_cells });
    }
    let hs: Vec<usize> = h.elements().collect();
    let rows: Vec<Vec<Vec<usize>>> = par::map(&hs, |&hh| RowSearch::new(q, hh).run());
    if rows.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }
    let combine = Combine { q, rows: &rows };
    let split = rows.iter().position(|r| r.len() > 1).unwrap_or(0);
    let branches: Vec<usize> = (0..rows[split].len()).collect();
    let mut tables: Vec<Vec<usize>> = par::flat_map(&branches, |&choice| {
        let mut chosen: Vec<usize> = vec![0; split];
        chosen.push(choice);
        let mut out = Vec::new();
        if (0..=split).all(|last| combine.consistent(&chosen[..=last])) {
            combine.extend(&mut chosen, &mut out);
        }
        out
    });
    tables.sort();
    Ok(tables.into_iter().map(|table| ActionClass { quotient: q.clone(), table }).collect())
}

/// Candidate rows `β(h, ·)` for one `h`.
struct RowSearch<'a> {
    q: &'a AdmissibleQuotient,
    h: usize,
    related_here: Vec<(usize, usize)>,
    related_elsewhere: Vec<(usize, usize, usize)>,
}

impl<'a> RowSearch<'a> {
    fn new(q: &'a AdmissibleQuotient, h: usize) -> Self {
        let nn = q.n().order();
        let pairs = |fiber: usize| {
            (0..nn).flat_map(move |a| (a + 1..nn).map(move |b| (a, b))).filter(move |&(a, b)| q.same(fiber, a, b))
        };
        let related_here = pairs(h).collect();
        let related_elsewhere = q.h().elements().flat_map(|h2| pairs(h2).map(move |(a, b)| (h2, a, b))).collect();
        RowSearch { q, h, related_here, related_elsewhere }
    }

    fn run(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut row = vec![usize::MAX; self.q.n().order()];
        self.extend(&mut row, 0, &mut out);
        out
    }

    fn extend(&self, row: &mut Vec<usize>, next: usize, out: &mut Vec<Vec<usize>>) {
        if next == row.len() {
            out.push(row.clone());
            return;
        }
        let q = self.q;
        let forced = if next == 0 {
            Some(q.class_in_fiber(self.h, 0))
        } else if self.h == 0 {
            Some(q.class_in_fiber(0, next))
        } else {
            None
        };
        let choices = match forced {
            Some(c) => c..c + 1,
            None => 0..q.class_count(self.h),
        };
        for c in choices {
            row[next] = c;
            if self.consistent(row, next) {
                self.extend(row, next + 1, out);
            }
        }
        row[next] = usize::MAX;
    }

    /// Conditions 1-3 for all instances whose entries are among `row[..=last]`
    /// and which involve `last`.
    fn consistent(&self, row: &[usize], last: usize) -> bool {
        let (q, h) = (self.q, self.h);
        let n = q.n();
        let c = row[last];
        if !self.related_here.iter().all(|&(a, b)| q.star_left(a, h, c) == q.star_left(b, h, c)) {
            return false;
        }
        for &(h2, a, b) in &self.related_elsewhere {
            if ((a == last && b < last) || (b == last && a < last))
                && q.star_right(h, row[a], h2) != q.star_right(h, row[b], h2)
            {
                return false;
            }
        }
        for a in 0..=last {
            for b in 0..=last {
                let ab = n.mul(a, b);
                if ab > last || (a != last && b != last && ab != last) {
                    continue;
                }
                if row[ab] != q.star_left(q.rep(h, row[a]), h, row[b]) {
                    return false;
                }
            }
        }
        true
    }
}

/// Combines per-row candidates under condition 4.
struct Combine<'a> {
    q: &'a AdmissibleQuotient,
    rows: &'a [Vec<Vec<usize>>],
}

impl Combine<'_> {
    fn row(&self, chosen: &[usize], h: usize) -> &[usize] {
        &self.rows[h][chosen[h]]
    }

    fn consistent(&self, chosen: &[usize]) -> bool {
        let q = self.q;
        let (n, h) = (q.n(), q.h());
        let last = chosen.len() - 1;
        for h1 in 0..=last {
            for h2 in 0..=last {
                let h12 = h.mul(h1, h2);
                if h12 > last || (h1 != last && h2 != last && h12 != last) {
                    continue;
                }
                let (r1, r2, r12) = (self.row(chosen, h1), self.row(chosen, h2), self.row(chosen, h12));
                for m in n.elements() {
                    let x = q.rep(h2, r2[m]);
                    if r12[m] != q.star_right(h1, r1[x], h2) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn extend(&self, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if chosen.len() == self.rows.len() {
            out.push(chosen.iter().enumerate().flat_map(|(h, &c)| self.rows[h][c].iter().copied()).collect());
            return;
        }
        for c in 0..self.rows[chosen.len()].len() {
            chosen.push(c);
            if self.consistent(chosen) {
                self.extend(chosen, out);
            }
            chosen.pop();
        }
    }
}

/// The monoid `Q_α` on the classes of `q`, with `[n,h]·[n',h'] = n ∗ [α(h,n'),h] ∗ h'`.
pub fn weak_semidirect_monoid(action: &ActionClass) -> FiniteMonoid {
    let q = action.quotient();
    let (n, h) = (q.n(), q.h());
    FiniteMonoid::from_fn_unchecked(q.num_classes(), |x, y| {
        let (n1, h1) = q.global_rep(x);
        let (n2, h2) = q.global_rep(y);
        let a = q.rep(h1, action.get(h1, n2));
        q.global_class(n.mul(n1, a), h.mul(h1, h2))
    })
}

/// The weakly Schreier extension `N -> Q_α -> H` with `k(n) = [n,1]`, `e[n,h] = h`, `s(h) = [1,h]`.
/// Every monoid law and extension axiom is re-verified.
pub fn weak_semidirect_product(action: &ActionClass) -> Result<SplitExtension, ActionError> {
    check_class_table(action.quotient(), &action.table)?;
    let q = action.quotient();
    let (n, h) = (q.n(), q.h());
    let g = weak_semidirect_monoid(action);
    let g = FiniteMonoid::from_flat(g.order(), g.table().to_vec()).map_err(SplitExtError::from)?;
    let k = MonoidHom::new_unchecked(n, &g, n.elements().map(|m| q.global_class(m, 0)).collect());
    let e = MonoidHom::new_unchecked(&g, h, (0..g.order()).map(|c| q.global_rep(c).1).collect());
    let s = MonoidHom::new_unchecked(h, &g, h.elements().map(|x| q.global_class(0, x)).collect());
    let ext = validate_split_extension(n, &g, h, &k, &e, &s)?;
    Ok(ext)
}
