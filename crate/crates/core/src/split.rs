//! Split extensions `N -k-> G -e-> H` with section `s`, the weakly Schreier
//! condition, Schreier retractions and the canonical quotient of `N × H`.

use thiserror::Error;

use crate::bounds::Bounds;
use crate::monoid::{cokernel_witness, CokernelFailure, FiniteMonoid, MonoidError, MonoidHom};
use crate::quotient::AdmissibleQuotient;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SplitExtError {
    #[error("SignatureMismatch: {0}")]
    SignatureMismatch(&'static str),
    #[error("KernelMismatch: element {witness} of {side} ({reason})")]
    KernelMismatch { witness: usize, side: &'static str, reason: &'static str },
    #[error("CokernelMismatch: {0}")]
    CokernelMismatch(CokernelWitness),
    #[error("SectionNotSplitting: e(s({h})) = {got}")]
    SectionNotSplitting { h: usize, got: usize },
    #[error("NotWeaklySchreier: no n with {g} = k(n)·s(e({g}))")]
    NotWeaklySchreier { g: usize },
    #[error("TooManyRetractions: {count} retractions exceed the cap {cap}")]
    TooManyRetractions { count: u128, cap: u128 },
    #[error("Monoid: {0}")]
    Monoid(#[from] MonoidError),
}

impl SplitExtError {
    /// The variant name, for reports.
    pub fn name(&self) -> &'static str {
        match self {
            Self::SignatureMismatch(_) => "SignatureMismatch",
            Self::KernelMismatch { .. } => "KernelMismatch",
            Self::CokernelMismatch(_) => "CokernelMismatch",
            Self::SectionNotSplitting { .. } => "SectionNotSplitting",
            Self::NotWeaklySchreier { .. } => "NotWeaklySchreier",
            Self::TooManyRetractions { .. } => "TooManyRetractions",
            Self::Monoid(_) => "Monoid",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CokernelWitness(pub CokernelFailure);

impl std::fmt::Display for CokernelWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            CokernelFailure::NotSurjective(h) => write!(f, "{h} is not in the image of e"),
            CokernelFailure::CongruenceMismatch(a, b) => write!(
                f,
                "elements {a} and {b} are identified by exactly one of ker-pair(e) and the congruence generated by k"
            ),
        }
    }
}

/// A split extension of `H` by `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SplitExtension {
    n: FiniteMonoid,
    g: FiniteMonoid,
    h: FiniteMonoid,
    k: MonoidHom,
    e: MonoidHom,
    s: MonoidHom,
}

/// Checks that `k` is the kernel of `e`, `e` the cokernel of `k`, and `e∘s = 1`.
pub fn validate_split_extension(
    n: &FiniteMonoid,
    g: &FiniteMonoid,
    h: &FiniteMonoid,
    k: &MonoidHom,
    e: &MonoidHom,
    s: &MonoidHom,
) -> Result<SplitExtension, SplitExtError> {
    let sig = [
        (k.dom() == n, "k does not start at N"),
        (k.cod() == g, "k does not land in G"),
        (e.dom() == g, "e does not start at G"),
        (e.cod() == h, "e does not land in H"),
        (s.dom() == h, "s does not start at H"),
        (s.cod() == g, "s does not land in G"),
    ];
    if let Some((_, msg)) = sig.iter().find(|(ok, _)| !ok) {
        return Err(SplitExtError::SignatureMismatch(msg));
    }
    let mut preimage = vec![usize::MAX; g.order()];
    for x in n.elements() {
        let y = k.apply(x);
        if preimage[y] != usize::MAX {
            return Err(SplitExtError::KernelMismatch { witness: x, side: "N", reason: "k is not injective" });
        }
        preimage[y] = x;
        if e.apply(y) != 0 {
            return Err(SplitExtError::KernelMismatch { witness: x, side: "N", reason: "e(k(n)) is not 1" });
        }
    }
    if let Some(y) = g.elements().find(|&y| e.apply(y) == 0 && preimage[y] == usize::MAX) {
        return Err(SplitExtError::KernelMismatch { witness: y, side: "G", reason: "in ker(e) but not in the image of k" });
    }
    if let Some(x) = h.elements().find(|&x| e.apply(s.apply(x)) != x) {
        return Err(SplitExtError::SectionNotSplitting { h: x, got: e.apply(s.apply(x)) });
    }
    if let Some(w) = cokernel_witness(k, e) {
        return Err(SplitExtError::CokernelMismatch(CokernelWitness(w)));
    }
    Ok(SplitExtension { n: n.clone(), g: g.clone(), h: h.clone(), k: k.clone(), e: e.clone(), s: s.clone() })
}

impl SplitExtension {
    /// `N -> N×H -> H` with the product injections and projection.
    pub fn direct_product(n: &FiniteMonoid, h: &FiniteMonoid) -> Self {
        let g = n.product(h);
        let ho = h.order();
        let k = MonoidHom::new_unchecked(n, &g, n.elements().map(|x| x * ho).collect());
        let e = MonoidHom::new_unchecked(&g, h, g.elements().map(|x| x % ho).collect());
        let s = MonoidHom::new_unchecked(h, &g, h.elements().collect());
        SplitExtension { n: n.clone(), g, h: h.clone(), k, e, s }
    }

    pub fn n(&self) -> &FiniteMonoid {
        &self.n
    }
    pub fn g(&self) -> &FiniteMonoid {
        &self.g
    }
    pub fn h(&self) -> &FiniteMonoid {
        &self.h
    }
    pub fn k(&self) -> &MonoidHom {
        &self.k
    }
    pub fn e(&self) -> &MonoidHom {
        &self.e
    }
    pub fn s(&self) -> &MonoidHom {
        &self.s
    }

    /// `k(n)·s(h)`.
    #[inline]
    pub fn phi(&self, n: usize, h: usize) -> usize {
        self.g.mul(self.k.apply(n), self.s.apply(h))
    }

    /// Same `N` and `H` tables.
    pub fn same_signature(&self, other: &SplitExtension) -> bool {
        self.n == other.n && self.h == other.h
    }
}

/// For each `g`, the set `{n : g = k(n)·s(e(g))}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSets {
    sets: Vec<Vec<usize>>,
}

impl WitnessSets {
    pub fn of(ext: &SplitExtension) -> Self {
        let mut sets = vec![Vec::new(); ext.g().order()];
        for (g, set) in sets.iter_mut().enumerate() {
            let sg = ext.s().apply(ext.e().apply(g));
            set.extend(ext.n().elements().filter(|&x| ext.g().mul(ext.k().apply(x), sg) == g));
        }
        WitnessSets { sets }
    }

    pub fn get(&self, g: usize) -> &[usize] {
        &self.sets[g]
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn is_weakly_schreier(&self) -> bool {
        self.first_empty().is_none()
    }

    pub fn first_empty(&self) -> Option<usize> {
        self.sets.iter().position(Vec::is_empty)
    }

    /// Product of the witness-set sizes, saturating at `u128::MAX`.
    pub fn retraction_count(&self) -> u128 {
        self.sets.iter().fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
    }

    /// The retraction choosing the least witness everywhere.
    pub fn least_retraction(&self) -> Option<SchreierRetraction> {
        self.sets.iter().map(|s| s.first().copied()).collect::<Option<Vec<_>>>().map(|q| SchreierRetraction { q })
    }
}

/// Whether every `g` factors as `k(n)·s(e(g))`; the witness sets come along.
pub fn is_weakly_schreier(ext: &SplitExtension) -> (bool, WitnessSets) {
    let w = WitnessSets::of(ext);
    (w.is_weakly_schreier(), w)
}

/// A set map `q: G -> N` with `g = k(q(g))·s(e(g))`. Not a homomorphism in general.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchreierRetraction {
    q: Vec<usize>,
}

impl SchreierRetraction {
    /// Accepts `q` if it satisfies the retraction equation for `ext`.
    pub fn new(ext: &SplitExtension, q: Vec<usize>) -> Option<Self> {
        let ok = q.len() == ext.g().order()
            && ext.g().elements().all(|g| q[g] < ext.n().order() && ext.phi(q[g], ext.e().apply(g)) == g);
        ok.then_some(SchreierRetraction { q })
    }

    /// No check at all; for negative controls.
    pub fn from_raw(q: Vec<usize>) -> Self {
        SchreierRetraction { q }
    }

    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.q[g]
    }

    pub fn map(&self) -> &[usize] {
        &self.q
    }
}

/// Lazy cartesian product of the witness sets, in lexicographic order.
#[derive(Clone, Debug)]
pub struct RetractionCursor {
    sets: Vec<Vec<usize>>,
    idx: Option<Vec<usize>>,
}

impl Iterator for RetractionCursor {
    type Item = SchreierRetraction;

    fn next(&mut self) -> Option<Self::Item> {
        let idx = self.idx.as_mut()?;
        let q = idx.iter().zip(&self.sets).map(|(&i, s)| s[i]).collect();
        // Advance the last coordinate fastest so output is lexicographic.
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                self.idx = None;
                break;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < self.sets[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
        Some(SchreierRetraction { q })
    }
}

/// An independent cursor over all Schreier retractions.
pub fn retractions(ext: &SplitExtension) -> Result<RetractionCursor, SplitExtError> {
    let w = WitnessSets::of(ext);
    if let Some(g) = w.first_empty() {
        return Err(SplitExtError::NotWeaklySchreier { g });
    }
    let start = vec![0; w.sets.len()];
    Ok(RetractionCursor { sets: w.sets, idx: Some(start) })
}

/// All Schreier retractions, refusing to materialize more than `bounds.max_retractions`.
pub fn enumerate_schreier_retractions(
    ext: &SplitExtension,
    bounds: &Bounds,
) -> Result<Vec<SchreierRetraction>, SplitExtError> {
    let w = WitnessSets::of(ext);
    if let Some(g) = w.first_empty() {
        return Err(SplitExtError::NotWeaklySchreier { g });
    }
    let count = w.retraction_count();
    if count > bounds.max_retractions {
        return Err(SplitExtError::TooManyRetractions { count, cap: bounds.max_retractions });
    }
    Ok(retractions(ext)?.collect())
}

/// `qk = 1_N`, `q(1) = 1` and `k(q(s(h)k(n)))·s(h) = s(h)k(n)` for all `h`, `n`.
pub fn check_retraction_properties(ext: &SplitExtension, q: &SchreierRetraction) -> bool {
    let (n, g, h) = (ext.n(), ext.g(), ext.h());
    if q.map().len() != g.order() || q.map().iter().any(|&x| x >= n.order()) {
        return false;
    }
    let retracts = n.elements().all(|x| q.apply(ext.k().apply(x)) == x);
    let unital = q.apply(0) == 0;
    let commutes = h.elements().all(|y| {
        n.elements().all(|x| {
            let shk = g.mul(ext.s().apply(y), ext.k().apply(x));
            g.mul(ext.k().apply(q.apply(shk)), ext.s().apply(y)) == shk
        })
    });
    retracts && unital && commutes
}

/// The equivalence on `N × H` induced by `(n,h) ↦ k(n)·s(h)`, with its bijection to `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalQuotient {
    quotient: AdmissibleQuotient,
    class_to_g: Vec<usize>,
    g_to_class: Vec<usize>,
}

impl CanonicalQuotient {
    pub fn quotient(&self) -> &AdmissibleQuotient {
        &self.quotient
    }

    /// Global class id of `(n, h)`.
    pub fn class_of(&self, n: usize, h: usize) -> usize {
        self.quotient.global_class(n, h)
    }

    /// Least pair in a class.
    pub fn representative(&self, class: usize) -> (usize, usize) {
        self.quotient.global_rep(class)
    }

    /// The bijection from classes to `G`.
    pub fn class_to_g(&self) -> &[usize] {
        &self.class_to_g
    }

    pub fn g_to_class(&self) -> &[usize] {
        &self.g_to_class
    }

    pub fn is_discrete(&self) -> bool {
        self.quotient.is_discrete()
    }
}

/// Groups `N × H` by the value of `k(n)·s(h)`.
pub fn canonical_quotient(ext: &SplitExtension) -> Result<CanonicalQuotient, SplitExtError> {
    let (n, g, h) = (ext.n(), ext.g(), ext.h());
    let mut g_to_rep = vec![usize::MAX; g.order()];
    let mut fibers = vec![vec![0; n.order()]; h.order()];
    for (y, fiber) in fibers.iter_mut().enumerate() {
        for x in n.elements() {
            let p = ext.phi(x, y);
            if g_to_rep[p] == usize::MAX {
                g_to_rep[p] = x;
            }
            fiber[x] = g_to_rep[p];
        }
    }
    if let Some(missing) = g_to_rep.iter().position(|&r| r == usize::MAX) {
        return Err(SplitExtError::NotWeaklySchreier { g: missing });
    }
    let quotient = AdmissibleQuotient::from_fibers_unchecked(n, h, fibers);
    let class_to_g: Vec<usize> = (0..quotient.num_classes())
        .map(|c| {
            let (x, y) = quotient.global_rep(c);
            ext.phi(x, y)
        })
        .collect();
    let mut g_to_class = vec![0; g.order()];
    for (c, &y) in class_to_g.iter().enumerate() {
        g_to_class[y] = c;
    }
    Ok(CanonicalQuotient { quotient, class_to_g, g_to_class })
}

/// Weakly Schreier with a discrete canonical quotient.
pub fn is_schreier(ext: &SplitExtension) -> bool {
    canonical_quotient(ext).is_ok_and(|c| c.is_discrete())
}

/// `G` transported onto the classes of its canonical quotient.
#[derive(Clone, Debug)]
pub struct WeakSemidirectPresentation {
    pub quotient: CanonicalQuotient,
    /// The monoid on class indices.
    pub monoid: FiniteMonoid,
    /// The isomorphism from the class monoid to `G`.
    pub iso: MonoidHom,
    /// `k'(n) = [n,1]`, `e'[n,h] = h`, `s'(h) = [1,h]`.
    pub extension: SplitExtension,
}

pub fn weak_semidirect_presentation(ext: &SplitExtension) -> Result<WeakSemidirectPresentation, SplitExtError> {
    let cq = canonical_quotient(ext)?;
    let q = cq.quotient();
    let (n, g, h) = (ext.n(), ext.g(), ext.h());
    let monoid = FiniteMonoid::from_fn(q.num_classes(), |a, b| {
        cq.g_to_class[g.mul(cq.class_to_g[a], cq.class_to_g[b])]
    })?;
    let iso = crate::monoid::validate_hom(&monoid, g, cq.class_to_g.clone())?;
    let k = MonoidHom::new_unchecked(n, &monoid, n.elements().map(|x| q.global_class(x, 0)).collect());
    let e = MonoidHom::new_unchecked(&monoid, h, (0..monoid.order()).map(|c| q.global_rep(c).1).collect());
    let s = MonoidHom::new_unchecked(h, &monoid, h.elements().map(|y| q.global_class(0, y)).collect());
    let extension = validate_split_extension(n, &monoid, h, &k, &e, &s)?;
    Ok(WeakSemidirectPresentation { quotient: cq, monoid, iso, extension })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{find_isomorphism, validate_hom};
    use crate::quotient::is_admissible;

    fn s2() -> FiniteMonoid {
        FiniteMonoid::chain(2)
    }

    /// Gl(id) over S2: pairs (n,h) with n ≤ h, numbered (top,top)=0, (bottom,top)=1, (bottom,bottom)=2.
    fn glueing_id() -> SplitExtension {
        let g = FiniteMonoid::chain(3);
        let k = validate_hom(&s2(), &g, vec![0, 1]).unwrap();
        let e = validate_hom(&g, &s2(), vec![0, 0, 1]).unwrap();
        let s = validate_hom(&s2(), &g, vec![0, 2]).unwrap();
        validate_split_extension(&s2(), &g, &s2(), &k, &e, &s).unwrap()
    }

    #[test]
    fn product_is_valid_and_schreier() {
        let c2 = FiniteMonoid::cyclic(2);
        let p = SplitExtension::direct_product(&c2, &c2);
        let p2 = validate_split_extension(p.n(), p.g(), p.h(), p.k(), p.e(), p.s()).unwrap();
        assert_eq!(p, p2);
        let (ok, w) = is_weakly_schreier(&p);
        assert!(ok);
        assert!(w.sets().iter().all(|s| s.len() == 1));
        assert!(is_schreier(&p));
        assert_eq!(enumerate_schreier_retractions(&p, &Bounds::default()).unwrap().len(), 1);
        assert_eq!(canonical_quotient(&p).unwrap().quotient().num_classes(), 4);
    }

    #[test]
    fn identity_triple_is_not_an_extension() {
        let c2 = FiniteMonoid::cyclic(2);
        let id = MonoidHom::identity(&c2);
        let err = validate_split_extension(&c2, &c2, &c2, &id, &id, &id).unwrap_err();
        assert!(matches!(err, SplitExtError::KernelMismatch { .. }), "{err}");
    }

    #[test]
    fn section_and_cokernel_failures() {
        let c2 = FiniteMonoid::cyclic(2);
        let p = SplitExtension::direct_product(&c2, &c2);
        let bad_s = MonoidHom::zero(&c2, p.g());
        let err = validate_split_extension(p.n(), p.g(), p.h(), p.k(), p.e(), &bad_s).unwrap_err();
        assert_eq!(err, SplitExtError::SectionNotSplitting { h: 1, got: 0 });

        // N trivial, G = S2 ⊔ ... : take G = 3-chain, H = S2 with e collapsing 0,1 and k trivial.
        let g = FiniteMonoid::chain(3);
        let t = FiniteMonoid::trivial();
        let k = MonoidHom::zero(&t, &g);
        let e = validate_hom(&g, &s2(), vec![0, 0, 1]).unwrap();
        let s = validate_hom(&s2(), &g, vec![0, 2]).unwrap();
        let err = validate_split_extension(&t, &g, &s2(), &k, &e, &s).unwrap_err();
        assert!(matches!(err, SplitExtError::KernelMismatch { witness: 1, .. }), "{err}");
    }

    #[test]
    fn glueing_witnesses_and_retractions() {
        let ext = glueing_id();
        let (ok, w) = is_weakly_schreier(&ext);
        assert!(ok);
        assert_eq!(w.get(2), &[0, 1]);
        assert_eq!(w.retraction_count(), 2);
        let rs = enumerate_schreier_retractions(&ext, &Bounds::default()).unwrap();
        assert_eq!(rs.len(), 2);
        assert!(rs.iter().all(|q| check_retraction_properties(&ext, q)));
        assert!(!is_schreier(&ext));
        let tight = Bounds { max_retractions: 1, ..Bounds::default() };
        assert_eq!(
            enumerate_schreier_retractions(&ext, &tight),
            Err(SplitExtError::TooManyRetractions { count: 2, cap: 1 })
        );
    }

    #[test]
    fn corrupted_retraction_fails() {
        let ext = SplitExtension::direct_product(&s2(), &s2());
        let mut q = enumerate_schreier_retractions(&ext, &Bounds::default()).unwrap().remove(0);
        assert!(check_retraction_properties(&ext, &q));
        q = SchreierRetraction::from_raw({
            let mut m = q.map().to_vec();
            m[0] = 1;
            m
        });
        assert!(!check_retraction_properties(&ext, &q));
    }

    #[test]
    fn glueing_canonical_quotient() {
        let cq = canonical_quotient(&glueing_id()).unwrap();
        let q = cq.quotient();
        assert_eq!(q.num_classes(), 3);
        // {(1,1)}, {(0,1)}, {(1,0),(0,0)} in lattice notation
        assert_eq!(q.fibers(), &[vec![0, 1], vec![0, 0]]);
        assert!(is_admissible(q.n(), q.h(), q.fibers()).is_ok());
        assert_eq!(cq.representative(cq.class_of(1, 1)), (0, 1));
    }

    #[test]
    fn presentation_of_glueing_is_the_chain() {
        let ext = glueing_id();
        let p = weak_semidirect_presentation(&ext).unwrap();
        assert!(find_isomorphism(&p.monoid, &FiniteMonoid::chain(3)).is_some());
        assert!(p.iso.is_bijective());
        assert!(is_weakly_schreier(&p.extension).0);
    }
}
