//! Seeded random inputs for the axiom suites, and structure corruptions for
//! mutation tests. Everything here is driven by a single `u64` seed.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

use crate::finalg::{enumerate_homs, product_ring, FiniteRing, Ideal, RingHom};
use crate::grouptor::GroupObjectStructure;
use crate::modalg::FiniteModule;
use crate::sheafspace::Cogroup;
use crate::{builtin, Limits};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rings() -> Vec<(String, Arc<FiniteRing>)> {
    let mut out: Vec<(String, Arc<FiniteRing>)> = (2..=16)
        .map(|n| (format!("zmod:{n}"), Arc::new(FiniteRing::cyclic(n))))
        .collect();
    for spec in ["gf4", "dual:zmod:2", "dual:zmod:3", "prod:zmod:2,zmod:2", "prod:zmod:2,zmod:3", "prod:zmod:2,zmod:4"] {
        out.push((spec.to_string(), builtin::ring(spec).expect("builtin")));
    }
    out.push((
        "prod:zmod:3,zmod:3".into(),
        product_ring(&Arc::new(FiniteRing::cyclic(3)), &Arc::new(FiniteRing::cyclic(3))).ring,
    ));
    out
}

/// Modules over `a`: zero, regular, every ideal, every quotient through a
/// map to a cyclic ring, and sums of two of these.
fn modules(a: &Arc<FiniteRing>) -> Vec<(String, Arc<FiniteModule>)> {
    let mut base = vec![
        ("zero".to_string(), Arc::new(FiniteModule::zero(a.clone()))),
        ("regular".to_string(), Arc::new(FiniteModule::regular(a.clone()))),
    ];
    for ideal in Ideal::all(a) {
        if ideal.len() > 1 && ideal.len() < a.size() {
            base.push((format!("ideal{:?}", ideal.elements()), Arc::new(FiniteModule::from_ideal(&ideal))));
        }
    }
    for n in 2..a.size() {
        let target = Arc::new(FiniteRing::cyclic(n));
        let homs: Vec<RingHom> = enumerate_homs(a, &target, &Limits::default()).unwrap_or_default();
        if let Some(h) = homs.into_iter().find(RingHom::is_surjective) {
            base.push((format!("zmod:{n}"), Arc::new(FiniteModule::via_hom(&h))));
        }
    }
    let mut out = base.clone();
    for (i, (s, m)) in base.iter().enumerate().skip(1) {
        for (t, n) in base.iter().skip(i) {
            if m.size() * n.size() * a.size() <= 64 {
                if let Ok(sum) = FiniteModule::direct_sum(m, n) {
                    out.push((format!("sum:{s},{t}"), Arc::new(sum)));
                }
            }
        }
    }
    out
}

/// A random pair `(A, M)` with `A` nonzero and `|A|·|M| ≤ max_product`,
/// labeled by a readable description.
#[derive(Clone, Debug)]
pub struct Sample {
    pub label: String,
    pub ring: Arc<FiniteRing>,
    pub module: Arc<FiniteModule>,
}

/// `count` pairs drawn from a catalog of small rings and modules.
pub fn random_pairs(seed: u64, count: usize, max_product: usize) -> Vec<Sample> {
    let mut catalog = Vec::new();
    for (rs, a) in rings() {
        if a.size() > max_product {
            continue;
        }
        for (ms, m) in modules(&a) {
            if a.size() * m.size() <= max_product {
                catalog.push(Sample {
                    label: format!("A={rs}, M={ms}"),
                    ring: a.clone(),
                    module: m,
                });
            }
        }
    }
    let mut rng = rng(seed);
    (0..count)
        .map(|_| catalog.choose(&mut rng).expect("nonempty catalog").clone())
        .collect()
}

/// Which structure map a corruption touched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Unit,
    Addition,
    Inverse,
}

#[derive(Clone, Debug)]
pub struct Corruption {
    pub target: Target,
    pub description: String,
}

/// Changes one entry of one structure map. Units and inverses in a group are
/// unique, and `x + e = x` pins down the entries touched on the addition, so
/// each corruption breaks at least one axiom.
pub fn corrupt_group_object(g: &GroupObjectStructure, rng: &mut ChaCha8Rng) -> (GroupObjectStructure, Corruption) {
    let mut out = g.clone();
    let n = g.total().size();
    assert!(n > 1, "cannot corrupt a structure on a one-element ring");
    let target = [Target::Unit, Target::Addition, Target::Inverse][rng.gen_range(0..3)];
    let other = |rng: &mut ChaCha8Rng, old: usize| (old + rng.gen_range(1..n)) % n;
    let description = match target {
        Target::Unit => {
            let a = rng.gen_range(0..g.e.len());
            out.e[a] = other(rng, g.e[a]);
            format!("unit at a={a}: {} -> {}", g.e[a], out.e[a])
        }
        Target::Addition => {
            let x = rng.gen_range(0..n);
            let e = g.e[g.base.f.apply(x)];
            let k = g
                .pair
                .pairs()
                .iter()
                .position(|&p| p == (x, e))
                .expect("(x, e(π(x))) lies in the fiber product");
            out.plus[k] = other(rng, g.plus[k]);
            format!("addition at (x={x}, e={e}): {} -> {}", g.plus[k], out.plus[k])
        }
        Target::Inverse => {
            let x = rng.gen_range(0..n);
            out.inv[x] = other(rng, g.inv[x]);
            format!("inverse at x={x}: {} -> {}", g.inv[x], out.inv[x])
        }
    };
    (out, Corruption { target, description })
}

/// Corrupts the comorphism tables of a cogroup on one open with nonzero
/// sections, in the same way as [`corrupt_group_object`].
pub fn corrupt_cogroup(c: &Cogroup, rng: &mut ChaCha8Rng) -> (Cogroup, Corruption) {
    let space = c.sum.base.space().clone();
    let opens: Vec<usize> = (0..space.open_count())
        .filter(|&u| c.sum.sheaf.sections(u).size() > 1)
        .collect();
    let u = *opens.choose(rng).expect("some open has nonzero sections");
    let g = c.group_object_at(u);
    let (bad, mut corruption) = corrupt_group_object(&g, rng);
    let mut out = c.clone();
    let w = c.coproduct.sheaf.space().open_index(space.open(u)).expect("same topology");
    let replace = |h: &RingHom, map: Vec<usize>| RingHom::new_unchecked(h.source().clone(), h.target().clone(), map);
    match corruption.target {
        Target::Unit => out.counit.comorph[u] = replace(&c.counit.comorph[u], bad.e),
        Target::Addition => out.comult.comorph[w] = replace(&c.comult.comorph[w], bad.plus),
        Target::Inverse => out.coinv.comorph[u] = replace(&c.coinv.comorph[u], bad.inv),
    }
    corruption.description = format!("open {u}: {}", corruption.description);
    (out, corruption)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouptor::{group_object, verify_group_object};

    #[test]
    fn sampling_is_seeded_and_bounded() {
        let a = random_pairs(7, 20, 64);
        let b = random_pairs(7, 20, 64);
        assert_eq!(a.len(), 20);
        assert!(a.iter().zip(&b).all(|(x, y)| x.label == y.label));
        assert!(a.iter().all(|s| s.ring.size() * s.module.size() <= 64 && s.module.verify().passed()));
        let c = random_pairs(8, 20, 64);
        assert!(a.iter().zip(&c).any(|(x, y)| x.label != y.label));
    }

    #[test]
    fn corruptions_are_rejected() {
        let mut rng = rng(3);
        for s in random_pairs(11, 10, 64) {
            let g = group_object(&s.ring, &s.module);
            if g.total().size() < 2 {
                continue;
            }
            for _ in 0..3 {
                let (bad, what) = corrupt_group_object(&g, &mut rng);
                let r = verify_group_object(&bad);
                assert!(!r.passed(), "{}: {} accepted", s.label, what.description);
                assert!(r.failures().all(|f| f.witness.is_some()));
            }
        }
    }
}
