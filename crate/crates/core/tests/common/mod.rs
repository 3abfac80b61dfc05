//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use wschreier::constructions::semilattice_glueing;
use wschreier::monoid::all_homs;
use wschreier::oracle::{brute_force_classify, enumerate_monoids};
use wschreier::wact::{classify_extensions, functor_s};
use wschreier::{Bounds, FiniteMonoid, SplitExtension};

/// The monoids the desk-scale checks range over.
pub fn desk_monoids() -> Vec<(&'static str, FiniteMonoid)> {
    vec![
        ("trivial", FiniteMonoid::trivial()),
        ("C2", FiniteMonoid::cyclic(2)),
        ("C3", FiniteMonoid::cyclic(3)),
        ("S2", FiniteMonoid::chain(2)),
        ("chain3", FiniteMonoid::chain(3)),
    ]
}

/// The desk monoids of order at most 2.
pub fn tiny_monoids() -> Vec<(&'static str, FiniteMonoid)> {
    desk_monoids().into_iter().filter(|(_, m)| m.order() <= 2).collect()
}

/// Meet-semilattices (commutative idempotent monoids) of order at most `max`.
pub fn semilattices(max: usize) -> Vec<FiniteMonoid> {
    (1..=max)
        .flat_map(|o| enumerate_monoids(o, &Bounds::default()).unwrap())
        .filter(FiniteMonoid::is_semilattice)
        .collect()
}

/// A group of extensions sharing `N` and `H`.
pub struct Family {
    pub label: String,
    pub extensions: Vec<SplitExtension>,
}

/// For each pair of desk monoids: every classified extension, the brute-force
/// ones where both have order at most 2, and the semilattice glueings.
pub fn desk_families() -> Vec<Family> {
    let mut out = Vec::new();
    for (nl, n) in desk_monoids() {
        for (hl, h) in desk_monoids() {
            let mut extensions: Vec<SplitExtension> = classify_extensions(&n, &h)
                .unwrap()
                .objects
                .iter()
                .map(|o| functor_s(o).unwrap())
                .collect();
            if n.order() <= 2 && h.order() <= 2 {
                extensions.extend(brute_force_classify(&n, &h, &Bounds::default()).unwrap());
            }
            if n.is_semilattice() {
                for f in all_homs(&h, &n) {
                    extensions.push(semilattice_glueing(&f).unwrap());
                }
            }
            out.push(Family { label: format!("N={nl}, H={hl}"), extensions });
        }
    }
    out
}
