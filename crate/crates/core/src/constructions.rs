//! Factories for concrete extensions: glueings along homomorphisms into a
//! commutative `N`, meet-semilattice glueings, the coarse and prime-ideal
//! quotients, the disjoint-union extension and matrix monoids.

use thiserror::Error;

use crate::action::{ActionClass, ActionViolation, PreAction};
use crate::monoid::{validate_hom, FiniteMonoid, MonoidError, MonoidHom, Submonoid};
use crate::quotient::{AdmissibleQuotient, QuotientError};
use crate::split::{validate_split_extension, SplitExtError, SplitExtension};
use crate::union_find::canonical_labels;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("NotCommutative: {a}*{b} != {b}*{a} in N")]
    NotCommutative { a: usize, b: usize },
    #[error("NotSemilattice: N is not commutative and idempotent")]
    NotSemilattice,
    #[error("HHasRightInvertibles: {h} has a right inverse in H")]
    HHasRightInvertibles { h: usize },
    #[error("NotAnIdeal: {y} is in Y but {product} = {y}*{x} or {x}*{y} is not")]
    NotAnIdeal { y: usize, x: usize, product: usize },
    #[error("IdealContainsRightInvertible: {y} is in Y and has a right inverse")]
    IdealContainsRightInvertible { y: usize },
    #[error("ComplementNotSubmonoid: {a} and {b} lie outside Y but {a}*{b} does not")]
    ComplementNotSubmonoid { a: usize, b: usize },
    #[error("ElementOutOfRange: {0} is not an element of H")]
    ElementOutOfRange(usize),
    #[error("UnsupportedField: {0} is not a prime")]
    UnsupportedField(usize),
    #[error("UnsupportedDimension: matrices of size {0} are not supported")]
    UnsupportedDimension(usize),
    #[error("TooLarge: the matrix monoid would have {order} elements, more than {max}")]
    TooLarge { order: usize, max: usize },
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Action(#[from] ActionViolation),
    #[error(transparent)]
    Split(#[from] SplitExtError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}

/// `H = L(H) ⊔ complement`, where `L(H)` is the submonoid of right-invertible elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightInvertibleDecomposition {
    pub h: FiniteMonoid,
    pub l: Submonoid,
    pub complement: Vec<usize>,
}

impl RightInvertibleDecomposition {
    pub fn is_right_invertible(&self, x: usize) -> bool {
        self.l.contains(x)
    }

    /// Whether the complement is also a left ideal.
    pub fn complement_is_two_sided(&self) -> bool {
        self.complement
            .iter()
            .all(|&y| self.h.elements().all(|x| !self.l.contains(self.h.mul(x, y))))
    }
}

pub fn right_invertible_submonoid(h: &FiniteMonoid) -> RightInvertibleDecomposition {
    let (members, complement): (Vec<usize>, Vec<usize>) = h.elements().partition(|&x| h.right_inverse(x).is_some());
    let l = Submonoid::new(h, members).expect("right-invertible elements form a submonoid");
    debug_assert!(complement.iter().all(|&y| h.elements().all(|x| !l.contains(h.mul(y, x)))));
    RightInvertibleDecomposition { h: h.clone(), l, complement }
}

/// Discrete over `L(H)`, one class per fiber elsewhere.
pub fn coarse_quotient(n: &FiniteMonoid, h: &FiniteMonoid) -> AdmissibleQuotient {
    let d = right_invertible_submonoid(h);
    lumped_over(n, h, |y| !d.is_right_invertible(y))
}

fn lumped_over(n: &FiniteMonoid, h: &FiniteMonoid, lumped: impl Fn(usize) -> bool) -> AdmissibleQuotient {
    let fibers = h
        .elements()
        .map(|y| if lumped(y) { vec![0; n.order()] } else { n.elements().collect() })
        .collect();
    AdmissibleQuotient::from_fibers_unchecked(n, h, fibers)
}

/// Whether `alpha` is compatible with the coarse quotient, decided by the
/// ideal-and-restriction criterion rather than by the six conditions.
pub fn coarse_action_compatible(n: &FiniteMonoid, h: &FiniteMonoid, alpha: &PreAction) -> bool {
    if alpha.n_order() != n.order() || alpha.h_order() != h.order() {
        return false;
    }
    if n.is_trivial() {
        return true;
    }
    let d = right_invertible_submonoid(h);
    if !d.complement_is_two_sided() {
        return false;
    }
    let l = d.l.members();
    let endo = l.iter().all(|&y| {
        alpha.get(y, 0) == 0
            && n.elements().all(|a| n.elements().all(|b| alpha.get(y, n.mul(a, b)) == n.mul(alpha.get(y, a), alpha.get(y, b))))
    });
    let unital = n.elements().all(|a| alpha.get(0, a) == a);
    let composes = l.iter().all(|&y1| {
        l.iter().all(|&y2| n.elements().all(|a| alpha.get(h.mul(y1, y2), a) == alpha.get(y1, alpha.get(y2, a))))
    });
    endo && unital && composes
}

/// `(n,h) ∼ (n',h)` iff `n·f(h) = n'·f(h)`, with the trivial action.
pub fn glueing_quotient(f: &MonoidHom) -> Result<(AdmissibleQuotient, ActionClass), ConstructionError> {
    let (h, n) = (f.dom(), f.cod());
    check_commutative(n)?;
    let fibers = h
        .elements()
        .map(|y| canonical_labels(&n.elements().map(|x| n.mul(x, f.apply(y))).collect::<Vec<_>>()))
        .collect();
    let q = AdmissibleQuotient::new(n, h, fibers)?;
    let action = ActionClass::trivial(&q)?;
    Ok((q, action))
}

fn check_commutative(n: &FiniteMonoid) -> Result<(), ConstructionError> {
    for a in n.elements() {
        for b in a + 1..n.order() {
            if n.mul(a, b) != n.mul(b, a) {
                return Err(ConstructionError::NotCommutative { a, b });
            }
        }
    }
    Ok(())
}

/// The glueing `Gl(f)` on pairs `n ≤ f(h)`, for `f: H -> N` with `N` a meet-semilattice.
/// Pairs are numbered `n`-major, so `(1,1)` is the identity.
pub fn semilattice_glueing(f: &MonoidHom) -> Result<SplitExtension, ConstructionError> {
    let (h, n) = (f.dom(), f.cod());
    if !n.is_semilattice() {
        return Err(ConstructionError::NotSemilattice);
    }
    let pairs: Vec<(usize, usize)> = n
        .elements()
        .flat_map(|x| h.elements().map(move |y| (x, y)))
        .filter(|&(x, y)| n.leq(x, f.apply(y)))
        .collect();
    let index = |p: (usize, usize)| pairs.binary_search(&p).expect("glueing is closed under multiplication");
    let g = FiniteMonoid::from_fn(pairs.len(), |a, b| {
        let ((x1, y1), (x2, y2)) = (pairs[a], pairs[b]);
        index((n.mul(x1, x2), h.mul(y1, y2)))
    })?;
    let k = validate_hom(n, &g, n.elements().map(|x| index((x, 0))).collect())?;
    let e = validate_hom(&g, h, pairs.iter().map(|p| p.1).collect())?;
    let s = validate_hom(h, &g, h.elements().map(|y| index((f.apply(y), y))).collect())?;
    Ok(validate_split_extension(n, &g, h, &k, &e, &s)?)
}

/// `N ⊔ (H − {1})` with `n·h = h = h·n`; `N` keeps its indices and `h ≠ 1` becomes `|N| + h − 1`.
pub fn disjoint_union_extension(n: &FiniteMonoid, h: &FiniteMonoid) -> Result<SplitExtension, ConstructionError> {
    let d = right_invertible_submonoid(h);
    if let Some(&y) = d.l.members().iter().find(|&&y| y != 0) {
        return Err(ConstructionError::HHasRightInvertibles { h: y });
    }
    let no = n.order();
    let to_h = |x: usize| if x < no { 0 } else { x - no + 1 };
    let from_h = |y: usize| if y == 0 { 0 } else { no + y - 1 };
    let g = FiniteMonoid::from_fn(no + h.order() - 1, |a, b| match (a < no, b < no) {
        (true, true) => n.mul(a, b),
        (true, false) => b,
        (false, true) => a,
        (false, false) => from_h(h.mul(to_h(a), to_h(b))),
    })?;
    let k = validate_hom(n, &g, n.elements().collect())?;
    let e = validate_hom(&g, h, g.elements().map(to_h).collect())?;
    let s = validate_hom(h, &g, h.elements().map(from_h).collect())?;
    Ok(validate_split_extension(n, &g, h, &k, &e, &s)?)
}

/// Lumped over the prime ideal `y`, discrete elsewhere.
pub fn prime_ideal_quotient(n: &FiniteMonoid, h: &FiniteMonoid, y: &[usize]) -> Result<AdmissibleQuotient, ConstructionError> {
    if let Some(&bad) = y.iter().find(|&&v| v >= h.order()) {
        return Err(ConstructionError::ElementOutOfRange(bad));
    }
    let mut in_y = vec![false; h.order()];
    for &v in y {
        in_y[v] = true;
    }
    for &v in y {
        for x in h.elements() {
            for product in [h.mul(v, x), h.mul(x, v)] {
                if !in_y[product] {
                    return Err(ConstructionError::NotAnIdeal { y: v, x, product });
                }
            }
        }
    }
    if let Some(&v) = y.iter().find(|&&v| h.right_inverse(v).is_some()) {
        return Err(ConstructionError::IdealContainsRightInvertible { y: v });
    }
    for a in h.elements().filter(|&a| !in_y[a]) {
        if let Some(b) = h.elements().find(|&b| !in_y[b] && in_y[h.mul(a, b)]) {
            return Err(ConstructionError::ComplementNotSubmonoid { a, b });
        }
    }
    Ok(AdmissibleQuotient::new(n, h, lumped_over(n, h, |v| in_y[v]).fibers().to_vec())?)
}

/// Largest matrix monoid [`matrix_monoid`] will tabulate.
pub const MAX_MATRIX_MONOID_ORDER: usize = 1024;

/// `dim × dim` matrices over `F_p` under multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixMonoid {
    pub dim: usize,
    pub field: usize,
    pub monoid: FiniteMonoid,
    /// Entries of each element, row-major. Element 0 is the identity; the rest
    /// follow in lexicographic order of their entry tuples.
    pub matrices: Vec<Vec<usize>>,
    pub determinants: Vec<usize>,
    /// `α(B,A) = BAB⁻¹` when `det B ≠ 0`, else `A`.
    pub conjugation: PreAction,
}

pub fn matrix_monoid(dim: usize, p: usize) -> Result<MatrixMonoid, ConstructionError> {
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return Err(ConstructionError::UnsupportedField(p));
    }
    if dim == 0 {
        return Err(ConstructionError::UnsupportedDimension(dim));
    }
    let cells = dim * dim;
    let order = u32::try_from(cells)
        .ok()
        .and_then(|c| p.checked_pow(c))
        .filter(|&o| o <= MAX_MATRIX_MONOID_ORDER)
        .ok_or(ConstructionError::TooLarge { order: p.saturating_pow(cells.min(64) as u32), max: MAX_MATRIX_MONOID_ORDER })?;

    let identity: Vec<usize> = (0..cells).map(|i| usize::from(i / dim == i % dim)).collect();
    let mut matrices = vec![identity.clone()];
    for code in 0..order {
        let mut m = vec![0; cells];
        let mut c = code;
        for slot in m.iter_mut().rev() {
            *slot = c % p;
            c /= p;
        }
        if m != identity {
            matrices.push(m);
        }
    }
    let encode = |m: &[usize]| -> usize {
        let code = m.iter().fold(0, |acc, &x| acc * p + x);
        let id_code = identity.iter().fold(0, |acc, &x| acc * p + x);
        match code.cmp(&id_code) {
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Less => code + 1,
            std::cmp::Ordering::Greater => code,
        }
    };
    let mul = |a: &[usize], b: &[usize]| -> Vec<usize> {
        (0..cells)
            .map(|i| {
                let (r, c) = (i / dim, i % dim);
                (0..dim).map(|j| a[r * dim + j] * b[j * dim + c]).sum::<usize>() % p
            })
            .collect()
    };
    let monoid = FiniteMonoid::from_fn(order, |a, b| encode(&mul(&matrices[a], &matrices[b])))?;
    let determinants: Vec<usize> = matrices.iter().map(|m| determinant(m, dim, p)).collect();
    let conjugation = PreAction::from_fn(&monoid, &monoid, |b, a| {
        if determinants[b] == 0 {
            return a;
        }
        let inv = monoid.right_inverse(b).expect("nonzero determinant means invertible");
        monoid.mul(monoid.mul(b, a), inv)
    });
    Ok(MatrixMonoid { dim, field: p, monoid, matrices, determinants, conjugation })
}

/// Determinant mod `p` by Gaussian elimination.
fn determinant(m: &[usize], dim: usize, p: usize) -> usize {
    let mut a = m.to_vec();
    let mut det = 1;
    for col in 0..dim {
        let Some(pivot) = (col..dim).find(|&r| a[r * dim + col] != 0) else {
            return 0;
        };
        if pivot != col {
            for j in 0..dim {
                a.swap(pivot * dim + j, col * dim + j);
            }
            det = (p - det) % p;
        }
        let pv = a[col * dim + col];
        det = det * pv % p;
        let inv = mod_pow(pv, p - 2, p);
        for r in col + 1..dim {
            let factor = a[r * dim + col] * inv % p;
            for j in col..dim {
                a[r * dim + j] = (a[r * dim + j] + p * p - factor * a[col * dim + j] % p) % p;
            }
        }
    }
    det
}

fn mod_pow(mut b: usize, mut e: usize, p: usize) -> usize {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}
