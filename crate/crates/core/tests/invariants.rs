//! Property tests for the structural invariants of every layer.

use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::Config;

use sqz::cotors::{phi, phi_inverse, trivial_thickening, check_theta, verify_cotorsor, verify_cotorsor_alt};
use sqz::equivfun::{psi, psi_inverse, psi_on_morphism, verify_equivalence};
use sqz::exal::{enumerate_exal_morphisms, enumerate_extensions, verify_exal_morphism, ExalMorphism};
use sqz::finalg::{
    enumerate_homs, fiber_product, ideal_square_is_zero, kernel, product_ring, quotient_ring, FiniteRing, Ideal,
    RingHom,
};
use sqz::finspace::{all_continuous_maps, pushout, verify_continuous, ContinuousMap, FinSpace};
use sqz::grouptor::{
    check_associativity_lemma, check_kernel_lemma, check_translation_lemma, enumerate_torsor_morphisms,
    enumerate_torsor_structures, verify_torsor, verify_torsor_morphism, TorsorMorphism,
};
use sqz::json::{parse_value, ring_to_json, tagged, Object};
use sqz::modalg::{
    enumerate_module_isos, kernel_as_a_module, restrict_scalars, verify_module_iso, FiniteModule, ModuleHom,
};
use sqz::samples::random_pairs;
use sqz::sheafspace::{
    cogroup_structure, direct_sum_space, spec_finite_ring, verify_cogroup, verify_module_sheaf, verify_sheaf,
    RingSheaf,
};
use sqz::{builtin, Limits};

fn catalog() -> Vec<Arc<FiniteRing>> {
    let mut out: Vec<Arc<FiniteRing>> = (1..=12).map(|n| Arc::new(FiniteRing::cyclic(n))).collect();
    for spec in ["gf4", "dual:zmod:2", "dual:zmod:3", "prod:zmod:2,zmod:2", "prod:zmod:2,zmod:4", "prod:zmod:3,zmod:4"] {
        out.push(builtin::ring(spec).unwrap());
    }
    out
}

fn ring() -> impl Strategy<Value = Arc<FiniteRing>> {
    let rings = catalog();
    (0..rings.len()).prop_map(move |i| rings[i].clone())
}

/// A ring with one of its ideals.
fn ring_and_ideal() -> impl Strategy<Value = (Arc<FiniteRing>, Ideal)> {
    (ring(), any::<prop::sample::Index>()).prop_map(|(r, i)| {
        let ideals = Ideal::all(&r);
        let ideal = i.get(&ideals).clone();
        (r, ideal)
    })
}

/// A seeded `(A, M)` with `|A|·|M| ≤ max`.
fn pair(max: usize) -> impl Strategy<Value = (Arc<FiniteRing>, Arc<FiniteModule>)> {
    any::<u64>().prop_map(move |seed| {
        let s = random_pairs(seed, 1, max).remove(0);
        (s.ring, s.module)
    })
}

/// Topologies from random preorders: the open sets are the up-closed sets.
fn space() -> impl Strategy<Value = Arc<FinSpace>> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n).prop_map(move |rel| {
            let mut le = vec![vec![false; n]; n];
            for i in 0..n {
                for j in 0..n {
                    le[i][j] = i == j || rel[i * n + j];
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if le[i][k] && le[k][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
            let opens = (0u32..1 << n)
                .filter(|&s| (0..n).all(|i| s >> i & 1 == 0 || (0..n).all(|j| !le[i][j] || s >> j & 1 == 1)))
                .map(|s| (0..n).filter(|&i| s >> i & 1 == 1).collect())
                .collect();
            Arc::new(FinSpace::new(n, opens).expect("up-sets of a preorder form a topology"))
        })
    })
}

fn limits() -> Limits {
    Limits::default()
}

proptest! {
    #![proptest_config(Config { cases: 48, ..Config::default() })]

    #[test]
    fn constructed_rings_satisfy_the_axioms((r, ideal) in ring_and_ideal(), s in ring()) {
        prop_assert!(r.verify().fully_passed());
        let p = product_ring(&r, &s);
        prop_assert!(p.ring.verify().fully_passed());
        prop_assert!(p.first.verify().passed() && p.second.verify().passed());
        let (q, _) = quotient_ring(&ideal);
        prop_assert!(q.verify().fully_passed());
    }

    #[test]
    fn quotient_then_kernel_is_the_ideal((_r, ideal) in ring_and_ideal()) {
        let (_, proj) = quotient_ring(&ideal);
        prop_assert!(proj.verify().passed());
        let k = kernel(&proj);
        prop_assert_eq!(k.elements(), ideal.elements());
    }

    #[test]
    fn fiber_products_commute((r, i) in ring_and_ideal(), s in ring()) {
        // B = R × S and C = R, both over R/I
        let (_, q) = quotient_ring(&i);
        let p = product_ring(&r, &s);
        let f = p.first.then(&q);
        let fp = fiber_product(&f, &q).unwrap();
        prop_assert!(fp.first.verify().passed());
        prop_assert!(fp.second.verify().passed());
        for x in fp.ring.elements() {
            let via_b = f.apply(fp.first.apply(x));
            prop_assert_eq!(via_b, q.apply(fp.second.apply(x)));
            prop_assert_eq!(via_b, fp.structure.apply(x));
        }
    }

    #[test]
    fn homs_are_listed_once_and_verify(r in ring(), s in ring()) {
        prop_assume!(r.size() * s.size() <= 64);
        let homs = enumerate_homs(&r, &s, &limits()).unwrap();
        for (k, h) in homs.iter().enumerate() {
            prop_assert!(h.verify().passed());
            prop_assert!(!homs[..k].contains(h));
        }
    }

    #[test]
    fn restriction_of_scalars_is_functorial((_r, i) in ring_and_ideal(), seed in any::<u64>()) {
        let (q, proj) = quotient_ring(&i);
        let m = FiniteModule::regular(q.clone());
        prop_assert_eq!(&restrict_scalars(&RingHom::identity(q.clone()), &m), &m);
        // R → R/I → R/I/J for a random ideal J of R/I
        let ideals = Ideal::all(&q);
        let j = &ideals[(seed as usize) % ideals.len()];
        let (q2, proj2) = quotient_ring(j);
        let n = FiniteModule::regular(q2);
        prop_assert_eq!(
            restrict_scalars(&proj.then(&proj2), &n),
            restrict_scalars(&proj, &restrict_scalars(&proj2, &n))
        );
    }

    #[test]
    fn bimodule_compatibility((_r, i) in ring_and_ideal(), seed in any::<u64>()) {
        prop_assume!(ideal_square_is_zero(&i) && i.len() <= 4);
        let (q, f) = quotient_ring(&i);
        let ker_a = Arc::new(kernel_as_a_module(&f).unwrap().0);
        let ker_b = Arc::new(FiniteModule::from_ideal(&kernel(&f)));
        // candidate modules of the kernel's size over A
        let ms: Vec<Arc<FiniteModule>> = random_pairs(seed, 64, 64)
            .into_iter()
            .filter(|s| *s.ring == *q && s.module.size() == i.len())
            .map(|s| s.module)
            .chain([ker_a.clone()])
            .collect();
        let m = ms[(seed as usize) % ms.len()].clone();
        let fm = Arc::new(restrict_scalars(&f, &m));
        let k = i.len();
        for code in 0..k.pow(m.size() as u32) {
            let map: Vec<usize> = (0..m.size()).map(|p| code / k.pow(p as u32) % k).collect();
            let b_side = verify_module_iso(&ModuleHom::new(fm.clone(), ker_b.clone(), map.clone())).passed();
            let a_side = verify_module_iso(&ModuleHom::new(m.clone(), ker_a.clone(), map)).passed();
            prop_assert_eq!(b_side, a_side);
        }
    }

    #[test]
    fn random_topologies_and_maps_verify(x in space(), y in space()) {
        prop_assert!(x.verify().fully_passed());
        for f in all_continuous_maps(&x, &y).into_iter().take(64) {
            prop_assert!(verify_continuous(&f).passed());
        }
    }

    #[test]
    fn pushout_along_a_homeomorphism_keeps_the_other_points(x in space(), z in space()) {
        let id = ContinuousMap::identity(x.clone());
        for g in all_continuous_maps(&x, &z).into_iter().take(16) {
            let p = pushout(&id, &g).unwrap();
            prop_assert_eq!(p.space.points(), z.points());
            prop_assert!(p.space.verify().fully_passed());
        }
    }

    #[test]
    fn constant_sheaves_on_random_spaces_verify(x in space(), r in ring()) {
        prop_assume!(r.size() <= 6);
        let n = x.points();
        let mut rho = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                let (ua, ub) = (x.minimal_open(a), x.minimal_open(b));
                if ub & !ua == 0 && ua != ub {
                    rho.insert((a, b), RingHom::identity(r.clone()));
                }
            }
        }
        let f = RingSheaf::from_stalk_diagram(x.clone(), vec![r.clone(); n], rho).unwrap();
        prop_assert!(verify_sheaf(&f).fully_passed());
    }

    #[test]
    fn json_round_trip(r in ring()) {
        match parse_value(&tagged("ring", ring_to_json(&r))).unwrap() {
            Object::Ring(back) => prop_assert_eq!(&*back, &*r),
            _ => prop_assert!(false, "wrong kind"),
        }
    }
}

proptest! {
    #![proptest_config(Config { cases: 16, ..Config::default() })]

    #[test]
    fn exal_morphisms_are_bijective_and_compose((a, m) in pair(12)) {
        let exts = enumerate_extensions(&a, &m, &limits()).unwrap();
        for e in &exts {
            prop_assert!(verify_exal_morphism(&ExalMorphism::identity(e)).passed());
            let (k, _) = kernel_as_a_module(&e.f).unwrap();
            let k = Arc::new(k);
            // α composed into the kernel numbering is an A-module isomorphism
            let ideal = kernel(&e.f);
            let map: Vec<usize> = m.elements().map(|x| ideal.elements().binary_search(&e.alpha(x)).unwrap()).collect();
            prop_assert!(verify_module_iso(&ModuleHom::new(m.clone(), k, map)).passed());
        }
        for s in exts.iter().take(4) {
            for t in exts.iter().take(4) {
                for h in enumerate_exal_morphisms(s, t, &limits()).unwrap() {
                    prop_assert!(h.is_bijective());
                    let mor = ExalMorphism { source: s.clone(), target: t.clone(), h };
                    prop_assert!(verify_exal_morphism(&mor).passed());
                    let back = ExalMorphism { source: t.clone(), target: s.clone(), h: mor.h.inverse().unwrap() };
                    prop_assert!(verify_exal_morphism(&mor.then(&back)).passed());
                }
            }
        }
    }

    #[test]
    fn torsors_have_square_zero_kernels_and_bijective_morphisms((a, m) in pair(12)) {
        let exts = enumerate_extensions(&a, &m, &limits()).unwrap();
        let mut maps: Vec<RingHom> = Vec::new();
        for e in &exts {
            if !maps.contains(&e.f) {
                maps.push(e.f.clone());
            }
        }
        for f in maps.iter().take(3) {
            let torsors = enumerate_torsor_structures(f, &m, &limits()).unwrap();
            let isos = enumerate_module_isos(
                &Arc::new(restrict_scalars(f, &m)),
                &Arc::new(FiniteModule::from_ideal(&kernel(f))),
                &limits(),
            ).unwrap();
            prop_assert_eq!(torsors.len(), isos.len());
            for t in &torsors {
                prop_assert!(verify_torsor(t).passed());
                prop_assert!(check_kernel_lemma(t).passed());
                prop_assert!(check_translation_lemma(t).fully_passed());
                prop_assert!(check_associativity_lemma(t).fully_passed());
            }
            for s in torsors.iter().take(3) {
                for t in torsors.iter().take(3) {
                    for h in enumerate_torsor_morphisms(s, t, &limits()).unwrap() {
                        let mor = TorsorMorphism { source: s.clone(), target: t.clone(), h };
                        prop_assert!(verify_torsor_morphism(&mor).passed());
                        prop_assert!(mor.h.is_bijective());
                    }
                }
            }
        }
    }

    #[test]
    fn psi_round_trips_and_is_functorial((a, m) in pair(12)) {
        let exts = enumerate_extensions(&a, &m, &limits()).unwrap();
        for e in &exts {
            let t = psi(e);
            prop_assert_eq!(&psi_inverse(&t).unwrap(), e);
            prop_assert_eq!(&psi(&psi_inverse(&t).unwrap()), &t);
        }
        for e in exts.iter().take(3) {
            for h1 in enumerate_exal_morphisms(e, e, &limits()).unwrap().into_iter().take(3) {
                for h2 in enumerate_exal_morphisms(e, e, &limits()).unwrap().into_iter().take(3) {
                    let m1 = ExalMorphism { source: e.clone(), target: e.clone(), h: h1.clone() };
                    let m2 = ExalMorphism { source: e.clone(), target: e.clone(), h: h2 };
                    prop_assert_eq!(psi_on_morphism(&m1.then(&m2)), psi_on_morphism(&m1).then(&psi_on_morphism(&m2)));
                }
            }
            prop_assert_eq!(psi_on_morphism(&ExalMorphism::identity(e)), TorsorMorphism::identity(&psi(e)));
        }
    }

    #[test]
    fn equivalence_holds_on_random_pairs((a, m) in pair(9)) {
        let r = verify_equivalence(&a, &m, &limits()).unwrap();
        prop_assert!(r.passed(), "{}", r.checks);
        prop_assert_eq!(r.instances_checked.exal_classes, r.instances_checked.torsor_classes);
    }

    #[test]
    fn spec_constructions_verify((a, m) in pair(32)) {
        let spec = spec_finite_ring(&a).unwrap();
        prop_assert!(verify_sheaf(&spec.sheaf).fully_passed());
        let ms = Arc::new(spec.localize(&m).unwrap());
        prop_assert!(verify_module_sheaf(&ms).passed());
        let sum = direct_sum_space(&spec.sheaf, &ms).unwrap();
        prop_assert!(verify_sheaf(&sum.sheaf).fully_passed());
        let cg = cogroup_structure(&spec.sheaf, &ms).unwrap();
        prop_assert!(verify_cogroup(&cg).fully_passed());
    }

    #[test]
    fn phi_images_satisfy_theta_and_both_definitions((a, m) in pair(32)) {
        let spec = spec_finite_ring(&a).unwrap();
        let ms = Arc::new(spec.localize(&m).unwrap());
        let t = trivial_thickening(&spec.sheaf, &ms).unwrap();
        let c = phi(&t).unwrap();
        prop_assert!(check_theta(&c).fully_passed());
        let primary = verify_cotorsor(&c).passed();
        prop_assert!(primary);
        prop_assert_eq!(primary, verify_cotorsor_alt(&c).passed());
        prop_assert_eq!(phi_inverse(&c).unwrap(), t);
    }
}
