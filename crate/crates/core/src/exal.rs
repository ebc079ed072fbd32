//! Square-zero extensions of a ring `A` by an `A`-module `M`, their
//! morphisms, the trivial extension `A ⊕ M`, and exhaustive classification.

use std::sync::Arc;

use crate::finalg::{check_flat_ring, kernel, ring_map_search, FiniteRing, RingHom};
use crate::modalg::{enumerate_module_maps, restrict_scalars, verify_module_iso, FiniteModule, ModuleHom};
use crate::report::Report;
use crate::{Budget, Error, Limits, Result};

/// A surjection `f: B → A` with square-zero kernel and an identification
/// `alpha: M → ker f`, stored as a table into `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareZeroExtension {
    pub f: RingHom,
    pub module: Arc<FiniteModule>,
    pub alpha: Vec<usize>,
}

impl SquareZeroExtension {
    pub fn new(f: RingHom, module: Arc<FiniteModule>, alpha: Vec<usize>) -> Self {
        SquareZeroExtension { f, module, alpha }
    }

    /// The total ring `B`.
    pub fn total(&self) -> &Arc<FiniteRing> {
        self.f.source()
    }

    /// The base ring `A`.
    pub fn base(&self) -> &Arc<FiniteRing> {
        self.f.target()
    }

    pub fn alpha(&self, m: usize) -> usize {
        self.alpha[m]
    }
}

/// Checks surjectivity, the square-zero kernel and that `alpha` is an
/// isomorphism of `B`-modules `f_*M → ker f`.
pub fn verify_extension(e: &SquareZeroExtension) -> Report {
    let mut report = Report::new();
    let (b, a) = (e.total(), e.base());
    if **e.module.ring() != **a {
        report.fail("module over base", "M is not a module over the target of f");
        return report;
    }
    report.pass("module over base");
    let hom = e.f.verify();
    if !hom.passed() {
        report.absorb("f ", hom);
        return report;
    }
    report.pass("f is a ring hom");
    if e.f.is_surjective() {
        report.pass("surjective");
    } else {
        let missed = a.elements().find(|&y| !e.f.map().contains(&y)).unwrap_or(0);
        report.fail("surjective", format!("{missed} is not in the image"));
    }
    let ker = kernel(&e.f);
    match ker.square_zero_witness() {
        None => report.pass("kernel square-zero"),
        Some((x, y)) => report.fail(
            "kernel square-zero",
            format!("{x}·{y} = {} ≠ 0 with {x}, {y} ∈ ker f", b.mul(x, y)),
        ),
    }
    if e.alpha.len() != e.module.size() || e.alpha.iter().any(|&x| x >= b.size()) {
        report.fail(
            "alpha well-formed",
            format!("expected {} images below {}", e.module.size(), b.size()),
        );
        return report;
    }
    if let Some(m) = e.module.elements().find(|&m| !ker.contains(e.alpha[m])) {
        report.fail(
            "alpha lands in kernel",
            format!("alpha({m}) = {} has f-image {}", e.alpha[m], e.f.apply(e.alpha[m])),
        );
        return report;
    }
    report.pass("alpha lands in kernel");
    let fm = Arc::new(restrict_scalars(&e.f, &e.module));
    let kb = Arc::new(FiniteModule::from_ideal(&ker));
    let map = e
        .alpha
        .iter()
        .map(|&x| ker.position(x).expect("checked"))
        .collect();
    let iso = verify_module_iso(&ModuleHom::new(fm, kb, map));
    if iso.passed() {
        report.pass("alpha is a B-module isomorphism");
    } else {
        report.absorb("alpha ", iso);
    }
    report
}

/// The ring `A ⊕ M` on pairs, `(a, m)` at index `a·|M| + m`, with
/// `(a₁, m₁)(a₂, m₂) = (a₁a₂, a₁m₂ + a₂m₁)`.
pub fn trivial_extension_ring(a: &FiniteRing, m: &FiniteModule) -> FiniteRing {
    let nm = m.size();
    let n = a.size() * nm;
    let mut add = vec![0; n * n];
    let mut mul = vec![0; n * n];
    for i in 0..n {
        let (a1, m1) = (i / nm, i % nm);
        for j in 0..n {
            let (a2, m2) = (j / nm, j % nm);
            add[i * n + j] = a.add(a1, a2) * nm + m.add(m1, m2);
            mul[i * n + j] = a.mul(a1, a2) * nm + m.add(m.act(a1, m2), m.act(a2, m1));
        }
    }
    FiniteRing::from_flat_unchecked(n, a.one() * nm, add, mul)
}

/// `π_A: A ⊕ M → A` with `alpha(m) = (0, m)`.
pub fn trivial_extension(a: &Arc<FiniteRing>, m: &Arc<FiniteModule>) -> SquareZeroExtension {
    assert_eq!(**m.ring(), **a, "module must be over the base ring");
    let nm = m.size();
    let ring = Arc::new(trivial_extension_ring(a, m));
    let proj = (0..ring.size()).map(|i| i / nm).collect();
    SquareZeroExtension {
        f: RingHom::new_unchecked(ring, a.clone(), proj),
        module: m.clone(),
        alpha: (0..nm).collect(),
    }
}

/// A ring map `h: B → B'` between two extensions of `A` by `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExalMorphism {
    pub source: SquareZeroExtension,
    pub target: SquareZeroExtension,
    pub h: RingHom,
}

impl ExalMorphism {
    pub fn identity(e: &SquareZeroExtension) -> Self {
        ExalMorphism {
            source: e.clone(),
            target: e.clone(),
            h: RingHom::identity(e.total().clone()),
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ExalMorphism) -> ExalMorphism {
        ExalMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            h: self.h.then(&next.h),
        }
    }
}

/// Checks the hom property, `g ∘ h = f` and `h(α_f(m)) = α_g(m)`.
pub fn verify_exal_morphism(mor: &ExalMorphism) -> Report {
    let mut report = Report::new();
    let (e, f) = (&mor.source, &mor.target);
    if e.base() != f.base() || e.module != f.module {
        report.fail("same base and module", "extensions of different (A, M)");
        return report;
    }
    report.pass("same base and module");
    if mor.h.source() != e.total() || mor.h.target() != f.total() {
        report.fail("h between total rings", "h does not run between the total rings");
        return report;
    }
    let hom = mor.h.verify();
    let ok = hom.passed();
    report.absorb("h ", hom);
    if !ok {
        return report;
    }
    report.record(
        "over A",
        e.total()
            .elements()
            .find(|&b| f.f.apply(mor.h.apply(b)) != e.f.apply(b))
            .map_or(Ok(()), |b| {
                Err(format!(
                    "b={b}: g(h(b))={} but f(b)={}",
                    f.f.apply(mor.h.apply(b)),
                    e.f.apply(b)
                ))
            }),
    );
    report.record(
        "alpha-compatible",
        e.module
            .elements()
            .find(|&m| mor.h.apply(e.alpha(m)) != f.alpha(m))
            .map_or(Ok(()), |m| {
                Err(format!(
                    "m={m}: h(α_f(m))={} but α_g(m)={}",
                    mor.h.apply(e.alpha(m)),
                    f.alpha(m)
                ))
            }),
    );
    report
}

/// Every morphism of extensions `e → f`, as ring maps in lexicographic order.
pub fn enumerate_exal_morphisms(e: &SquareZeroExtension, f: &SquareZeroExtension, limits: &Limits) -> Result<Vec<RingHom>> {
    let mut budget = limits.budget();
    enumerate_exal_morphisms_with_budget(e, f, &mut budget)
}

pub(crate) fn exal_morphism_search<'a>(
    e: &'a SquareZeroExtension,
    f: &'a SquareZeroExtension,
) -> crate::search::MapSearch<'a> {
    let (b, c) = (e.total(), f.total());
    let allowed = b
        .elements()
        .map(|x| c.elements().map(|y| e.f.apply(x) == f.f.apply(y)).collect())
        .collect();
    let mut search = ring_map_search(b, c).allowed(allowed);
    for m in e.module.elements() {
        search = search.pin(e.alpha(m), f.alpha(m));
    }
    search
}

pub(crate) fn enumerate_exal_morphisms_with_budget(
    e: &SquareZeroExtension,
    f: &SquareZeroExtension,
    budget: &mut Budget,
) -> Result<Vec<RingHom>> {
    if e.base() != f.base() || e.module != f.module {
        return Ok(Vec::new());
    }
    Ok(exal_morphism_search(e, f)
        .collect(budget)?
        .into_iter()
        .map(|m| RingHom::new_unchecked(e.total().clone(), f.total().clone(), m))
        .collect())
}

pub(crate) fn exal_isomorphic(e: &SquareZeroExtension, f: &SquareZeroExtension, budget: &mut Budget) -> Result<bool> {
    if e.base() != f.base() || e.module != f.module || e.total().size() != f.total().size() {
        return Ok(false);
    }
    Ok(exal_morphism_search(e, f).injective(true).first(budget)?.is_some())
}

/// Every extension of `A` by `M` up to relabeling of the total ring, each
/// paired with every admissible identification `alpha`.
///
/// The total ring is built on the pairs `(a, m)`, read as `s(a) + α(m)` for a
/// set-theoretic section `s` that is additive in the coordinates of an
/// elementary-divisor basis `g_i` of `A`. An extension is then fixed by the
/// kernel elements `t_i` with `n_i·s(g_i) = α(t_i)` and `d_ij` with
/// `s(g_i)s(g_j) = s(g_ig_j) + α(d_ij)`; every choice is tried and kept when
/// it yields a ring. On this carrier `f` is the first projection and the
/// admissible identifications are `α₀ ∘ u` for the automorphisms `u` of `M`.
pub fn enumerate_extensions(a: &Arc<FiniteRing>, m: &Arc<FiniteModule>, limits: &Limits) -> Result<Vec<SquareZeroExtension>> {
    let mut budget = limits.budget();
    enumerate_extensions_with_budget(a, m, limits, &mut budget)
}

pub(crate) fn enumerate_extensions_with_budget(
    a: &Arc<FiniteRing>,
    m: &Arc<FiniteModule>,
    limits: &Limits,
    budget: &mut Budget,
) -> Result<Vec<SquareZeroExtension>> {
    if **m.ring() != **a {
        return Err(Error::Precondition("module must be over the base ring".into()));
    }
    let na = a.size();
    let nm = m.size();
    let n = na * nm;
    limits.check_size(n)?;
    let basis = a.additive_basis();
    let k = basis.len();
    // coordinates of every element of A in the basis
    let mut coords = vec![Vec::new(); na];
    {
        let mut x = vec![0usize; k];
        loop {
            let el = basis
                .iter()
                .zip(&x)
                .fold(0, |acc, (&(g, _), &c)| a.add(acc, a.times(c, g)));
            coords[el] = x.clone();
            let mut i = 0;
            while i < k {
                x[i] += 1;
                if x[i] < basis[i].1 {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
    }
    let slots: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    let unknowns = k + slots.len();
    let autos = enumerate_module_maps(m, m, true, budget)?;
    let mut out = Vec::new();
    let mut pick = vec![0usize; unknowns];
    loop {
        budget.tick(1)?;
        let (t, d) = pick.split_at(k);
        if let Some((ring, proj)) = build_candidate(a, m, &basis, &coords, &slots, t, d, budget)? {
            let ring = Arc::new(ring);
            let f = RingHom::new_unchecked(ring, a.clone(), proj);
            for u in &autos {
                out.push(SquareZeroExtension {
                    f: f.clone(),
                    module: m.clone(),
                    alpha: u.map.clone(),
                });
            }
        }
        let mut i = 0;
        while i < unknowns {
            pick[i] += 1;
            if pick[i] < nm {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
        if i == unknowns {
            break;
        }
    }
    debug_assert!(n == 0 || out.iter().all(|e| e.total().size() == n));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn build_candidate(
    a: &FiniteRing,
    m: &FiniteModule,
    basis: &[(usize, usize)],
    coords: &[Vec<usize>],
    slots: &[(usize, usize)],
    t: &[usize],
    d: &[usize],
    budget: &mut Budget,
) -> Result<Option<(FiniteRing, Vec<usize>)>> {
    let (na, nm) = (a.size(), m.size());
    let n = na * nm;
    let k = basis.len();
    budget.tick((n * n) as u64)?;
    // addition with carries into the kernel
    let mut carry = vec![0usize; na * na];
    for x in 0..na {
        for y in 0..na {
            let mut c = 0;
            for i in 0..k {
                if coords[x][i] + coords[y][i] >= basis[i].1 {
                    c = m.add(c, t[i]);
                }
            }
            carry[x * na + y] = c;
        }
    }
    let mut add = vec![0; n * n];
    for i in 0..n {
        let (a1, m1) = (i / nm, i % nm);
        for j in 0..n {
            let (a2, m2) = (j / nm, j % nm);
            add[i * n + j] = a.add(a1, a2) * nm + m.add(m.add(m1, m2), carry[a1 * na + a2]);
        }
    }
    let badd = |x: usize, y: usize| add[x * n + y];
    // generator products
    let mut p = vec![vec![0usize; k]; k];
    for (s, &(i, j)) in slots.iter().enumerate() {
        let v = a.mul(basis[i].0, basis[j].0) * nm + d[s];
        p[i][j] = v;
        p[j][i] = v;
    }
    // well-definedness on the torsion of the generators: n_i·P_ij = α(g_j·t_i)
    for i in 0..k {
        for j in 0..k {
            let mut acc = 0;
            for _ in 0..basis[i].1 {
                acc = badd(acc, p[i][j]);
            }
            if acc != m.act(basis[j].0, t[i]) {
                return Ok(None);
            }
        }
    }
    // bilinear part on section values
    let mut sprod = vec![0usize; na * na];
    for x in 0..na {
        for y in 0..na {
            let mut acc = 0;
            for i in 0..k {
                for j in 0..k {
                    for _ in 0..coords[x][i] * coords[y][j] {
                        acc = badd(acc, p[i][j]);
                    }
                }
            }
            sprod[x * na + y] = acc;
        }
    }
    let mut mul = vec![0; n * n];
    for i in 0..n {
        let (a1, m1) = (i / nm, i % nm);
        for j in 0..n {
            let (a2, m2) = (j / nm, j % nm);
            let s = sprod[a1 * na + a2];
            mul[i * n + j] = badd(s, m.add(m.act(a1, m2), m.act(a2, m1)));
        }
    }
    let one = (0..nm)
        .map(|c| a.one() * nm + c)
        .find(|&e| (0..n).all(|x| mul[e * n + x] == x));
    let Some(one) = one else {
        return Ok(None);
    };
    budget.tick((n * n * n) as u64)?;
    if !check_flat_ring(n, one, &add, &mul).passed() {
        return Ok(None);
    }
    let proj = (0..n).map(|i| i / nm).collect();
    Ok(Some((FiniteRing::from_flat_unchecked(n, one, add, mul), proj)))
}

/// One isomorphism class of extensions, by index into the enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionClass {
    pub representative: usize,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub extensions: Vec<SquareZeroExtension>,
    pub classes: Vec<ExtensionClass>,
}

/// Partitions the enumerated extensions into isomorphism classes. The
/// representative of each class is the member with the least serialized form.
pub fn classify_extensions(a: &Arc<FiniteRing>, m: &Arc<FiniteModule>, limits: &Limits) -> Result<Classification> {
    let mut budget = limits.budget();
    let extensions = enumerate_extensions_with_budget(a, m, limits, &mut budget)?;
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, e) in extensions.iter().enumerate() {
        let mut home = None;
        for (c, members) in classes.iter().enumerate() {
            if exal_isomorphic(e, &extensions[members[0]], &mut budget)? {
                home = Some(c);
                break;
            }
        }
        match home {
            Some(c) => classes[c].push(i),
            None => classes.push(vec![i]),
        }
    }
    let classes = classes
        .into_iter()
        .map(|members| {
            let representative = *members
                .iter()
                .min_by_key(|&&i| crate::json::extension_to_json(&extensions[i]).to_string())
                .expect("nonempty class");
            ExtensionClass {
                representative,
                members,
            }
        })
        .collect();
    Ok(Classification { extensions, classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finalg::{product_ring, ring_isomorphic};

    fn z(n: usize) -> Arc<FiniteRing> {
        Arc::new(FiniteRing::cyclic(n))
    }

    fn zm(n: usize) -> Arc<FiniteModule> {
        Arc::new(FiniteModule::regular(z(n)))
    }

    fn z4_over_z2() -> SquareZeroExtension {
        let f = RingHom::new(z(4), z(2), vec![0, 1, 0, 1]).unwrap();
        SquareZeroExtension::new(f, zm(2), vec![0, 2])
    }

    #[test]
    fn z4_is_an_extension() {
        assert!(verify_extension(&z4_over_z2()).fully_passed());
    }

    #[test]
    fn product_projection_is_not_square_zero() {
        let z2 = z(2);
        let p = product_ring(&z2, &z2);
        for alpha in [vec![0, 1], vec![0, 0]] {
            let e = SquareZeroExtension::new(p.first.clone(), zm(2), alpha);
            let r = verify_extension(&e);
            assert_eq!(r.verdict_of("kernel square-zero"), Some(crate::Verdict::Fail));
        }
    }

    #[test]
    fn trivial_extensions_verify() {
        for (a, m) in [(2, 2), (3, 3), (4, 2), (6, 6)] {
            let am = Arc::new(FiniteModule::via_hom(
                &RingHom::new(z(a), z(m), (0..a).map(|x| x % m).collect()).unwrap(),
            ));
            assert!(verify_extension(&trivial_extension(&z(a), &am)).fully_passed());
        }
    }

    #[test]
    fn trivial_extension_of_z2() {
        let e = trivial_extension(&z(2), &zm(2));
        let b = e.total();
        assert_eq!(b.size(), 4);
        assert_eq!(b.mul(1, 1), 0);
        assert!(ring_isomorphic(b, &z(4), &Limits::default()).unwrap().is_none());
    }

    #[test]
    fn trivial_extension_by_zero_is_base() {
        let zero = Arc::new(FiniteModule::zero(z(3)));
        let e = trivial_extension(&z(3), &zero);
        assert_eq!(**e.total(), *z(3));
    }

    #[test]
    fn identity_morphism_passes() {
        let e = z4_over_z2();
        assert!(verify_exal_morphism(&ExalMorphism::identity(&e)).fully_passed());
        let t = trivial_extension(&z(3), &zm(3));
        assert!(verify_exal_morphism(&ExalMorphism::identity(&t)).fully_passed());
    }

    #[test]
    fn no_morphisms_between_z4_and_trivial() {
        let l = Limits::default();
        let e = z4_over_z2();
        let t = trivial_extension(&z(2), &zm(2));
        for h in crate::finalg::enumerate_homs(e.total(), t.total(), &l).unwrap() {
            let mor = ExalMorphism { source: e.clone(), target: t.clone(), h };
            assert!(!verify_exal_morphism(&mor).passed());
        }
        for h in crate::finalg::enumerate_homs(t.total(), e.total(), &l).unwrap() {
            let mor = ExalMorphism { source: t.clone(), target: e.clone(), h };
            assert!(!verify_exal_morphism(&mor).passed());
        }
        assert!(enumerate_exal_morphisms(&e, &t, &l).unwrap().is_empty());
    }

    #[test]
    fn automorphisms_of_trivial_z3_extension() {
        // maps fixing α and commuting over A: (a, m) ↦ (a, m + δ(a)) for the
        // derivations δ of ℤ/3, of which only δ = 0 exists
        let t = trivial_extension(&z(3), &zm(3));
        let autos = enumerate_exal_morphisms(&t, &t, &Limits::default()).unwrap();
        assert_eq!(autos.len(), 1);
    }

    #[test]
    fn enumeration_counts() {
        let l = Limits::default();
        let c = classify_extensions(&z(2), &zm(2), &l).unwrap();
        assert_eq!(c.classes.len(), 2);
        let c = classify_extensions(&z(3), &zm(3), &l).unwrap();
        assert_eq!(c.classes.len(), 3);
        let zero = Arc::new(FiniteModule::zero(z(2)));
        let e = enumerate_extensions(&z(2), &zero, &l).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(*e[0].total(), z(2));
    }

    #[test]
    fn enumerated_extensions_verify() {
        let l = Limits::default();
        for (a, m) in [(2, 2), (3, 3)] {
            for e in enumerate_extensions(&z(a), &zm(m), &l).unwrap() {
                assert!(verify_extension(&e).fully_passed());
            }
        }
    }

    #[test]
    fn morphisms_compose_and_are_bijective() {
        let l = Limits::default();
        let exts = enumerate_extensions(&z(3), &zm(3), &l).unwrap();
        for e in &exts {
            for f in &exts {
                for h in enumerate_exal_morphisms(e, f, &l).unwrap() {
                    let mor = ExalMorphism { source: e.clone(), target: f.clone(), h };
                    assert!(verify_exal_morphism(&mor).fully_passed());
                    assert!(mor.h.is_bijective());
                    let back = mor.h.inverse().unwrap();
                    let inv = ExalMorphism { source: f.clone(), target: e.clone(), h: back };
                    assert!(verify_exal_morphism(&mor.then(&inv)).fully_passed());
                }
            }
        }
    }

    #[test]
    fn size_cap_is_enforced() {
        let l = Limits::new(8, 1_000_000).unwrap();
        assert!(matches!(
            enumerate_extensions(&z(3), &zm(3), &l),
            Err(Error::SizeCap { size: 9, cap: 8 })
        ));
    }
}
