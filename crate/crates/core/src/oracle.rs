//! Brute-force enumeration used to cross-check the classification.
//!
//! The search never goes through canonical quotients, action classes or the
//! preorder: extensions come from a raw search over all monoids `G` and all
//! hom triples, and are compared by searching all maps `G1 -> G2`. Only
//! [`compare_with_classification`] uses `T`, to line the two lists up.

use std::collections::HashSet;

use thiserror::Error;

use crate::bounds::Bounds;
use crate::monoid::{all_homs, FiniteMonoid, MonoidHom};
use crate::par;
use crate::split::{is_weakly_schreier, validate_split_extension, SplitExtension};
use crate::wact::{functor_t, Classification, WActError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("BoundExceeded: monoids of order {order} exceed the oracle limit {max}")]
    BoundExceeded { order: usize, max: usize },
}

/// All monoids of the given order up to isomorphism, identity at 0, each in
/// canonical form (least relabelled table), sorted by table.
pub fn enumerate_monoids(order: usize, bounds: &Bounds) -> Result<Vec<FiniteMonoid>, OracleError> {
    if order > bounds.max_oracle_order {
        return Err(OracleError::BoundExceeded { order, max: bounds.max_oracle_order });
    }
    if order == 0 {
        return Ok(Vec::new());
    }
    let perms = permutations_fixing_zero(order);
    let mut seen = HashSet::new();
    let mut table = vec![usize::MAX; order * order];
    for x in 0..order {
        table[x] = x;
        table[x * order] = x;
    }
    let free: Vec<(usize, usize)> = (1..order).flat_map(|a| (1..order).map(move |b| (a, b))).collect();
    fill(order, &free, 0, &mut table, &mut |t| {
        seen.insert(canonical_table(order, t, &perms));
    });
    let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
    out.sort();
    Ok(out
        .into_iter()
        .map(|t| FiniteMonoid::from_flat(order, t).expect("generated tables are monoids"))
        .collect())
}

fn fill(order: usize, free: &[(usize, usize)], i: usize, table: &mut [usize], emit: &mut dyn FnMut(&[usize])) {
    if i == free.len() {
        emit(table);
        return;
    }
    let (a, b) = free[i];
    for v in 0..order {
        table[a * order + b] = v;
        if associative_so_far(order, table) {
            fill(order, free, i + 1, table, emit);
        }
    }
    table[a * order + b] = usize::MAX;
}

/// Every fully defined instance of `(xy)z = x(yz)` holds.
fn associative_so_far(order: usize, t: &[usize]) -> bool {
    let get = |x: usize, y: usize| t[x * order + y];
    for x in 1..order {
        for y in 1..order {
            let xy = get(x, y);
            if xy == usize::MAX {
                continue;
            }
            for z in 1..order {
                let yz = get(y, z);
                if yz == usize::MAX {
                    continue;
                }
                let (l, r) = (get(xy, z), get(x, yz));
                if l != usize::MAX && r != usize::MAX && l != r {
                    return false;
                }
            }
        }
    }
    true
}

fn canonical_table(order: usize, t: &[usize], perms: &[Vec<usize>]) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    let mut cand = vec![0; order * order];
    let mut inv = vec![0; order];
    for p in perms {
        for (old, &new) in p.iter().enumerate() {
            inv[new] = old;
        }
        for a in 0..order {
            for b in 0..order {
                cand[a * order + b] = p[t[inv[a] * order + inv[b]]];
            }
        }
        if best.as_ref().is_none_or(|bst| cand < *bst) {
            best = Some(cand.clone());
        }
    }
    best.unwrap_or_default()
}

fn permutations_fixing_zero(order: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..order).collect();
    let mut out = vec![p.clone()];
    // Lexicographic successor on p[1..].
    loop {
        let tail = &mut p[1..];
        let Some(i) = (0..tail.len().saturating_sub(1)).rev().find(|&i| tail[i] < tail[i + 1]) else {
            break;
        };
        let j = (i + 1..tail.len()).rev().find(|&j| tail[j] > tail[i]).unwrap();
        tail.swap(i, j);
        tail[i + 1..].reverse();
        out.push(p.clone());
    }
    out
}

/// Every hom `G1 -> G2` making the three squares commute, by exhaustive search.
pub fn search_extension_morphisms(ext1: &SplitExtension, ext2: &SplitExtension) -> Vec<MonoidHom> {
    if ext1.n() != ext2.n() || ext1.h() != ext2.h() {
        return Vec::new();
    }
    all_homs(ext1.g(), ext2.g())
        .into_iter()
        .filter(|psi| {
            ext1.n().elements().all(|n| psi.apply(ext1.k().apply(n)) == ext2.k().apply(n))
                && ext1.g().elements().all(|g| ext2.e().apply(psi.apply(g)) == ext1.e().apply(g))
                && ext1.h().elements().all(|h| psi.apply(ext1.s().apply(h)) == ext2.s().apply(h))
        })
        .collect()
}

fn isomorphic_by_search(a: &SplitExtension, b: &SplitExtension) -> bool {
    !search_extension_morphisms(a, b).is_empty() && !search_extension_morphisms(b, a).is_empty()
}

/// Every weakly Schreier extension of `h` by `n` up to isomorphism, found by
/// trying every monoid `G` with `|N|+|H|-1 ≤ |G| ≤ |N|·|H|` and every triple
/// `(k, e, s)`.
pub fn brute_force_classify(
    n: &FiniteMonoid,
    h: &FiniteMonoid,
    bounds: &Bounds,
) -> Result<Vec<SplitExtension>, OracleError> {
    let lo = n.order() + h.order() - 1;
    let hi = n.order() * h.order();
    let mut candidates = Vec::new();
    for order in lo..=hi {
        candidates.extend(enumerate_monoids(order, bounds)?);
    }
    let per_g = par::map(&candidates, |g| extensions_through(n, g, h));
    Ok(per_g.into_iter().flatten().collect())
}

/// The weakly Schreier extensions with middle object `g`, pairwise non-isomorphic.
fn extensions_through(n: &FiniteMonoid, g: &FiniteMonoid, h: &FiniteMonoid) -> Vec<SplitExtension> {
    let ks: Vec<MonoidHom> = all_homs(n, g).into_iter().filter(MonoidHom::is_injective).collect();
    let es: Vec<MonoidHom> = all_homs(g, h).into_iter().filter(MonoidHom::is_surjective).collect();
    let ss = all_homs(h, g);
    let mut found: Vec<SplitExtension> = Vec::new();
    for e in &es {
        let sections: Vec<&MonoidHom> = ss.iter().filter(|s| h.elements().all(|x| e.apply(s.apply(x)) == x)).collect();
        if sections.is_empty() {
            continue;
        }
        for k in ks.iter().filter(|k| n.elements().all(|x| e.apply(k.apply(x)) == 0)) {
            for s in &sections {
                let Ok(ext) = validate_split_extension(n, g, h, k, e, s) else {
                    continue;
                };
                if is_weakly_schreier(&ext).0 && !found.iter().any(|f| isomorphic_by_search(f, &ext)) {
                    found.push(ext);
                }
            }
        }
    }
    found
}

/// How a brute-force list lines up with a classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleComparison {
    /// For each brute-force extension, the index of the object equal to its `T`-image.
    pub matched: Vec<Option<usize>>,
    /// Every extension matched, no object hit twice, every object hit.
    pub bijection: bool,
    /// Searched morphism existence agrees with the `≤` matrix on every matched pair.
    pub order_preserving: bool,
}

pub fn compare_with_classification(
    brute: &[SplitExtension],
    classification: &Classification,
) -> Result<OracleComparison, WActError> {
    let matched = brute
        .iter()
        .map(|ext| {
            let t = functor_t(ext)?;
            Ok(classification.objects.iter().position(|o| *o == t))
        })
        .collect::<Result<Vec<_>, WActError>>()?;
    let mut hits = vec![0usize; classification.objects.len()];
    for i in matched.iter().flatten() {
        hits[*i] += 1;
    }
    let bijection = matched.iter().all(Option::is_some) && hits.iter().all(|&h| h == 1);
    let pairs: Vec<(usize, usize)> = (0..brute.len()).flat_map(|i| (0..brute.len()).map(move |j| (i, j))).collect();
    let order_preserving = bijection
        && par::map(&pairs, |&(i, j)| {
            let searched = !search_extension_morphisms(&brute[i], &brute[j]).is_empty();
            let (a, b) = (matched[i].unwrap_or(0), matched[j].unwrap_or(0));
            searched == classification.leq[a][b]
        })
        .into_iter()
        .all(|ok| ok);
    Ok(OracleComparison { matched, bijection, order_preserving })
}
