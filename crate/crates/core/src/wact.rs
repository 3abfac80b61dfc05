//! The preorder of (quotient, action class) pairs, the functors between it and
//! weakly Schreier extensions, and the unique morphisms between extensions.

use thiserror::Error;

use crate::action::{enumerate_action_classes_with, weak_semidirect_product, ActionClass, ActionError, PreAction};
use crate::bounds::Bounds;
use crate::monoid::{validate_hom, MonoidError, MonoidHom};
use crate::par;
use crate::quotient::{enumerate_admissible_quotients_with, partition_refines, AdmissibleQuotient, QuotientError};
use crate::split::{canonical_quotient, retractions, SplitExtError, SplitExtension, WitnessSets};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WActError {
    #[error("SignatureMismatch: the two sides do not share N and H")]
    SignatureMismatch,
    #[error("RetractionDependence: retractions disagree on the class of a({h},{n})")]
    RetractionDependence { h: usize, n: usize },
    #[error("InvalidMorphism: {0}")]
    InvalidMorphism(#[from] MorphismViolation),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Split(#[from] SplitExtError),
}

/// A pair `(Q, [α])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WActObject {
    action: ActionClass,
}

impl WActObject {
    pub fn new(action: ActionClass) -> Self {
        WActObject { action }
    }

    pub fn quotient(&self) -> &AdmissibleQuotient {
        self.action.quotient()
    }

    pub fn action(&self) -> &ActionClass {
        &self.action
    }
}

/// Fiber refinement plus agreement of the actions modulo the coarser quotient.
///
/// The action part is checked for every member of each class `[α(h,n),h]_Q`, so
/// the verdict cannot depend on which representative of `α` one has in mind.
pub fn wact_leq(a: &WActObject, b: &WActObject) -> Result<bool, WActError> {
    let (qa, qb) = (a.quotient(), b.quotient());
    if qa.n() != qb.n() || qa.h() != qb.h() {
        return Err(WActError::SignatureMismatch);
    }
    let refines = qa.fibers().iter().zip(qb.fibers()).all(|(fa, fb)| partition_refines(fa, fb));
    if !refines {
        return Ok(false);
    }
    let agrees = qa.h().elements().all(|h| {
        qa.n().elements().all(|n| {
            let target = b.action().get(h, n);
            qa.members(h, a.action().get(h, n)).all(|m| qb.class_in_fiber(h, m) == target)
        })
    });
    Ok(agrees)
}

/// `T`: the canonical quotient together with the class of `α(h,n) = q(s(h)k(n))`.
///
/// Independence of the retraction is re-checked: against every retraction when
/// there are at most `bounds.max_retractions`, and otherwise witness set by
/// witness set, which covers the same ground.
pub fn functor_t_with(ext: &SplitExtension, bounds: &Bounds) -> Result<WActObject, WActError> {
    let cq = canonical_quotient(ext)?;
    let q = cq.quotient();
    let w = WitnessSets::of(ext);
    let least = w.least_retraction().ok_or(SplitExtError::NotWeaklySchreier { g: w.first_empty().unwrap_or(0) })?;
    let induced = |r: &[usize]| PreAction::from_fn(ext.n(), ext.h(), |h, n| r[ext.g().mul(ext.s().apply(h), ext.k().apply(n))]);
    let class = ActionClass::from_pre_action(q, &induced(least.map())).map_err(ActionError::from)?;

    if w.retraction_count() <= bounds.max_retractions {
        for r in retractions(ext)? {
            let other = ActionClass::from_pre_action(q, &induced(r.map())).map_err(ActionError::from)?;
            if let Some(i) = other.table().iter().zip(class.table()).position(|(x, y)| x != y) {
                let nn = ext.n().order();
                return Err(WActError::RetractionDependence { h: i / nn, n: i % nn });
            }
        }
    } else {
        for h in ext.h().elements() {
            for n in ext.n().elements() {
                let g = ext.g().mul(ext.s().apply(h), ext.k().apply(n));
                let c = class.get(h, n);
                if w.get(g).iter().any(|&x| q.class_in_fiber(h, x) != c) {
                    return Err(WActError::RetractionDependence { h, n });
                }
            }
        }
    }
    Ok(WActObject::new(class))
}

pub fn functor_t(ext: &SplitExtension) -> Result<WActObject, WActError> {
    functor_t_with(ext, &Bounds::default())
}

/// `S`: the weak semidirect product.
pub fn functor_s(obj: &WActObject) -> Result<SplitExtension, WActError> {
    Ok(weak_semidirect_product(obj.action())?)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MorphismViolation {
    #[error("NotAHomomorphism: {0}")]
    NotAHomomorphism(MonoidError),
    #[error("KSquare: psi(k1({n})) != k2({n})")]
    KSquare { n: usize },
    #[error("ESquare: e2(psi({g})) != e1({g})")]
    ESquare { g: usize },
    #[error("SSquare: psi(s1({h})) != s2({h})")]
    SSquare { h: usize },
    #[error("ClassAction: psi(k1({n})s1({h})) != k2({n})s2({h})")]
    ClassAction { n: usize, h: usize },
}

/// A monoid map between the middle objects making the three squares commute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionMorphism {
    source: SplitExtension,
    target: SplitExtension,
    map: MonoidHom,
}

impl ExtensionMorphism {
    pub fn new(source: &SplitExtension, target: &SplitExtension, map: Vec<usize>) -> Result<Self, MorphismViolation> {
        let psi = validate_hom(source.g(), target.g(), map).map_err(MorphismViolation::NotAHomomorphism)?;
        if let Some(n) = source.n().elements().find(|&n| psi.apply(source.k().apply(n)) != target.k().apply(n)) {
            return Err(MorphismViolation::KSquare { n });
        }
        if let Some(g) = source.g().elements().find(|&g| target.e().apply(psi.apply(g)) != source.e().apply(g)) {
            return Err(MorphismViolation::ESquare { g });
        }
        if let Some(h) = source.h().elements().find(|&h| psi.apply(source.s().apply(h)) != target.s().apply(h)) {
            return Err(MorphismViolation::SSquare { h });
        }
        for h in source.h().elements() {
            if let Some(n) = source.n().elements().find(|&n| psi.apply(source.phi(n, h)) != target.phi(n, h)) {
                return Err(MorphismViolation::ClassAction { n, h });
            }
        }
        Ok(ExtensionMorphism { source: source.clone(), target: target.clone(), map: psi })
    }

    pub fn source(&self) -> &SplitExtension {
        &self.source
    }

    pub fn target(&self) -> &SplitExtension {
        &self.target
    }

    pub fn map(&self) -> &MonoidHom {
        &self.map
    }
}

/// The unique morphism `ext1 -> ext2`, present exactly when `T(ext1) ≤ T(ext2)`.
pub fn morphism_exists(ext1: &SplitExtension, ext2: &SplitExtension) -> Result<Option<ExtensionMorphism>, WActError> {
    if !ext1.same_signature(ext2) {
        return Err(WActError::SignatureMismatch);
    }
    let (t1, t2) = (functor_t(ext1)?, functor_t(ext2)?);
    if !wact_leq(&t1, &t2)? {
        return Ok(None);
    }
    let cq = canonical_quotient(ext1)?;
    let map = cq
        .class_to_g()
        .iter()
        .enumerate()
        .fold(vec![0; ext1.g().order()], |mut map, (c, &g)| {
            let (n, h) = cq.representative(c);
            map[g] = ext2.phi(n, h);
            map
        });
    Ok(Some(ExtensionMorphism::new(ext1, ext2, map)?))
}

/// Morphisms both ways; by rigidity the composites are then identities.
pub fn extensions_isomorphic(ext1: &SplitExtension, ext2: &SplitExtension) -> Result<bool, WActError> {
    Ok(morphism_exists(ext1, ext2)?.is_some() && morphism_exists(ext2, ext1)?.is_some())
}

/// Every weakly Schreier extension of `H` by `N` up to isomorphism, as `(Q, [α])`
/// pairs in canonical order, with `leq[i][j] = objects[i] ≤ objects[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub objects: Vec<WActObject>,
    pub leq: Vec<Vec<bool>>,
    /// Enumerated quotients in canonical order.
    pub quotients: Vec<AdmissibleQuotient>,
    /// Indices into `quotients` of those admitting no action at all.
    pub quotients_without_actions: Vec<usize>,
}

pub fn classify_extensions(n: &crate::monoid::FiniteMonoid, h: &crate::monoid::FiniteMonoid) -> Result<Classification, WActError> {
    classify_extensions_with(n, h, &Bounds::default())
}

pub fn classify_extensions_with(
    n: &crate::monoid::FiniteMonoid,
    h: &crate::monoid::FiniteMonoid,
    bounds: &Bounds,
) -> Result<Classification, WActError> {
    let quotients = enumerate_admissible_quotients_with(n, h, bounds)?;
    let per_quotient = par::map(&quotients, |q| enumerate_action_classes_with(q, bounds));
    let mut objects = Vec::new();
    let mut quotients_without_actions = Vec::new();
    for (i, classes) in per_quotient.into_iter().enumerate() {
        let classes = classes?;
        if classes.is_empty() {
            quotients_without_actions.push(i);
        }
        objects.extend(classes.into_iter().map(WActObject::new));
    }
    let rows = par::map(&objects, |a| objects.iter().map(|b| wact_leq(a, b)).collect::<Result<Vec<_>, _>>());
    let leq = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(Classification { objects, leq, quotients, quotients_without_actions })
}
