//! The abelian group object `π_A: A ⊕ M → A` in rings over `A`, and the
//! category of `M`-torsors.
//!
//! A torsor is a surjection `f: B → A` with an action
//! `τ: (A ⊕ M) ×_A B → B` over `A`. The action is stored as a table on the
//! fiber-product carrier; [`Torsor::act`] evaluates `τ(m, b)` by
//! reconstructing the redundant component `a = f(b)`.

use std::sync::Arc;

use crate::exal::{trivial_extension, SquareZeroExtension};
use crate::finalg::{
    enumerate_homs_with_budget, enumerate_rings, fiber_product, kernel, ring_map_search, FiberProduct, FiniteRing,
    RingHom,
};
use crate::modalg::FiniteModule;
use crate::report::Report;
use crate::{Budget, Error, Limits, Result};

/// Unit, addition and inverse of `A ⊕ M` over `A`, as raw tables.
#[derive(Clone, Debug)]
pub struct GroupObjectStructure {
    pub base: SquareZeroExtension,
    /// `(A ⊕ M) ×_A (A ⊕ M)`.
    pub pair: FiberProduct,
    /// `A → A ⊕ M`.
    pub e: Vec<usize>,
    /// `(A ⊕ M) ×_A (A ⊕ M) → A ⊕ M`.
    pub plus: Vec<usize>,
    /// `A ⊕ M → A ⊕ M`.
    pub inv: Vec<usize>,
}

/// `e(a) = (a, 0)`, `plus((a, m₁), (a, m₂)) = (a, m₁ + m₂)`, `inv(a, m) = (a, -m)`.
pub fn group_object(a: &Arc<FiniteRing>, m: &Arc<FiniteModule>) -> GroupObjectStructure {
    let base = trivial_extension(a, m);
    let pair = fiber_product(&base.f, &base.f).expect("common target");
    let nm = m.size();
    let e = a.elements().map(|x| x * nm).collect();
    let plus = pair
        .pairs()
        .iter()
        .map(|&(x, y)| (x / nm) * nm + m.add(x % nm, y % nm))
        .collect();
    let inv = base
        .total()
        .elements()
        .map(|x| (x / nm) * nm + m.neg(x % nm))
        .collect();
    GroupObjectStructure {
        base,
        pair,
        e,
        plus,
        inv,
    }
}

impl GroupObjectStructure {
    pub fn total(&self) -> &Arc<FiniteRing> {
        self.base.total()
    }

    fn proj(&self, x: usize) -> usize {
        self.base.f.apply(x)
    }

    fn plus_of(&self, x: usize, y: usize) -> Option<usize> {
        self.pair.index_of(x, y).map(|i| self.plus[i])
    }
}

fn hom_over(report: &mut Report, name: &str, h: RingHom, over: impl Fn(usize) -> usize, down: &RingHom) -> bool {
    let r = h.verify();
    if !r.passed() {
        let w = r
            .failures()
            .next()
            .map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()))
            .unwrap_or_default();
        report.fail(name, w);
        return false;
    }
    match h.source().elements().find(|&x| down.apply(h.apply(x)) != over(x)) {
        Some(x) => {
            report.fail(
                name,
                format!("not over A at {x}: lands over {} instead of {}", down.apply(h.apply(x)), over(x)),
            );
            false
        }
        None => {
            report.pass(name);
            true
        }
    }
}

/// Checks that the three maps are ring maps over `A` and that the
/// associativity, unit, inverse and commutativity diagrams commute.
pub fn verify_group_object(g: &GroupObjectStructure) -> Report {
    let mut report = Report::new();
    let total = g.total().clone();
    let a = g.base.base().clone();
    let pi = &g.base.f;
    let n = total.size();
    let shape_ok = g.e.len() == a.size()
        && g.plus.len() == g.pair.ring.size()
        && g.inv.len() == n
        && g.e.iter().chain(&g.plus).chain(&g.inv).all(|&x| x < n);
    if !shape_ok {
        report.fail("tables well-formed", "structure map tables have the wrong shape");
        return report;
    }
    hom_over(
        &mut report,
        "unit is a ring map over A",
        RingHom::new_unchecked(a.clone(), total.clone(), g.e.clone()),
        |x| x,
        pi,
    );
    hom_over(
        &mut report,
        "addition is a ring map over A",
        RingHom::new_unchecked(g.pair.ring.clone(), total.clone(), g.plus.clone()),
        |p| g.pair.structure.apply(p),
        pi,
    );
    hom_over(
        &mut report,
        "inverse is a ring map over A",
        RingHom::new_unchecked(total.clone(), total.clone(), g.inv.clone()),
        |x| pi.apply(x),
        pi,
    );
    let fibers: Vec<Vec<usize>> = a
        .elements()
        .map(|y| total.elements().filter(|&x| pi.apply(x) == y).collect())
        .collect();
    let show = |o: Option<usize>| o.map_or("undefined".to_string(), |v| v.to_string());
    let mut assoc = Ok(());
    'assoc: for fiber in &fibers {
        for &x in fiber {
            for &y in fiber {
                for &z in fiber {
                    let l = g.plus_of(x, y).and_then(|xy| g.plus_of(xy, z));
                    let r = g.plus_of(y, z).and_then(|yz| g.plus_of(x, yz));
                    if l.is_none() || l != r {
                        assoc = Err(format!(
                            "x={x}, y={y}, z={z}: (x+y)+z={} but x+(y+z)={}",
                            show(l),
                            show(r)
                        ));
                        break 'assoc;
                    }
                }
            }
        }
    }
    report.record("associativity", assoc);
    let unit = |x: usize| g.e[g.proj(x)];
    report.record(
        "left unit",
        total
            .elements()
            .find_map(|x| {
                let v = g.plus_of(unit(x), x);
                (v != Some(x)).then(|| format!("x={x}: e(π(x))+x={} ≠ x", show(v)))
            })
            .map_or(Ok(()), Err),
    );
    report.record(
        "right unit",
        total
            .elements()
            .find_map(|x| {
                let v = g.plus_of(x, unit(x));
                (v != Some(x)).then(|| format!("x={x}: x+e(π(x))={} ≠ x", show(v)))
            })
            .map_or(Ok(()), Err),
    );
    report.record(
        "inverse",
        total
            .elements()
            .find_map(|x| {
                let l = g.plus_of(x, g.inv[x]);
                let r = g.plus_of(g.inv[x], x);
                (l != Some(unit(x)) || r != Some(unit(x))).then(|| {
                    format!("x={x}: x+inv(x)={}, inv(x)+x={}, e(π(x))={}", show(l), show(r), unit(x))
                })
            })
            .map_or(Ok(()), Err),
    );
    let mut comm = Ok(());
    'comm: for fiber in &fibers {
        for &x in fiber {
            for &y in fiber {
                if g.plus_of(x, y) != g.plus_of(y, x) {
                    comm = Err(format!(
                        "x={x}, y={y}: x+y={} but y+x={}",
                        show(g.plus_of(x, y)),
                        show(g.plus_of(y, x))
                    ));
                    break 'comm;
                }
            }
        }
    }
    report.record("commutativity", comm);
    report
}

/// `(A ⊕ M) ×_A B` together with the trivial extension it is built from.
#[derive(Clone, Debug)]
pub struct ActionDomain {
    pub trivial: SquareZeroExtension,
    pub ring: FiberProduct,
}

impl ActionDomain {
    pub fn new(f: &RingHom, m: &Arc<FiniteModule>) -> Result<Self> {
        if **m.ring() != **f.target() {
            return Err(Error::Precondition("M must be a module over the target of f".into()));
        }
        let trivial = trivial_extension(f.target(), m);
        let ring = fiber_product(&trivial.f, f)?;
        Ok(ActionDomain { trivial, ring })
    }

    /// Index of `((f(b), m), b)`.
    pub fn index(&self, f: &RingHom, m: usize, b: usize) -> usize {
        let nm = self.trivial.module.size();
        self.ring
            .index_of(f.apply(b) * nm + m, b)
            .expect("pair lies over a common point")
    }
}

#[derive(Clone, Debug)]
pub struct Torsor {
    pub f: RingHom,
    pub module: Arc<FiniteModule>,
    pub tau: Vec<usize>,
    domain: Arc<ActionDomain>,
}

impl PartialEq for Torsor {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f && self.module == other.module && self.tau == other.tau
    }
}

impl Eq for Torsor {}

impl Torsor {
    pub fn new(f: RingHom, module: Arc<FiniteModule>, tau: Vec<usize>) -> Result<Self> {
        let domain = Arc::new(ActionDomain::new(&f, &module)?);
        Ok(Torsor {
            f,
            module,
            tau,
            domain,
        })
    }

    pub(crate) fn with_domain(f: RingHom, module: Arc<FiniteModule>, tau: Vec<usize>, domain: Arc<ActionDomain>) -> Self {
        Torsor {
            f,
            module,
            tau,
            domain,
        }
    }

    pub fn total(&self) -> &Arc<FiniteRing> {
        self.f.source()
    }

    pub fn base(&self) -> &Arc<FiniteRing> {
        self.f.target()
    }

    pub fn domain(&self) -> &ActionDomain {
        &self.domain
    }

    /// `τ(m, b)`.
    pub fn act(&self, m: usize, b: usize) -> usize {
        self.tau[self.domain.index(&self.f, m, b)]
    }

    /// `τ` as a ring map `(A ⊕ M) ×_A B → B`.
    pub fn tau_hom(&self) -> RingHom {
        RingHom::new_unchecked(self.domain.ring.ring.clone(), self.total().clone(), self.tau.clone())
    }
}

/// Checks that `τ` is a ring map over `A`, the identity axiom `τ(0, b) = b`
/// and unique transitivity on `B ×_A B`.
pub fn verify_torsor(t: &Torsor) -> Report {
    let mut report = Report::new();
    let (b, a) = (t.total(), t.base());
    let m = &t.module;
    if t.f.is_surjective() {
        report.pass("surjective");
    } else {
        let missed = a.elements().find(|&y| !t.f.map().contains(&y)).unwrap_or(0);
        report.fail("surjective", format!("{missed} is not in the image"));
    }
    let dom = &t.domain.ring;
    if t.tau.len() != dom.ring.size() || t.tau.iter().any(|&x| x >= b.size()) {
        report.fail(
            "tau well-formed",
            format!("expected {} images below {}", dom.ring.size(), b.size()),
        );
        return report;
    }
    let hom = t.tau_hom().verify();
    if hom.passed() {
        report.pass("tau is a ring hom");
    } else {
        report.absorb("tau ", hom);
    }
    report.record(
        "over A",
        dom.ring
            .elements()
            .find(|&p| t.f.apply(t.tau[p]) != dom.structure.apply(p))
            .map_or(Ok(()), |p| {
                let (x, y) = dom.pair(p);
                Err(format!("τ({}, {y}) lies over {} instead of {}", x % m.size(), t.f.apply(t.tau[p]), dom.structure.apply(p)))
            }),
    );
    report.record(
        "identity axiom",
        b.elements()
            .find(|&y| t.act(0, y) != y)
            .map_or(Ok(()), |y| Err(format!("τ(0, {y}) = {} ≠ {y}", t.act(0, y)))),
    );
    let mut uniq = Ok(());
    'outer: for b1 in b.elements() {
        for b2 in b.elements() {
            if t.f.apply(b1) != t.f.apply(b2) {
                continue;
            }
            let movers: Vec<usize> = m.elements().filter(|&x| t.act(x, b2) == b1).collect();
            if movers.len() != 1 {
                uniq = Err(match movers.as_slice() {
                    [] => format!("no m with τ(m, {b2}) = {b1}"),
                    [m1, m2, ..] => format!("τ({m1}, {b2}) = τ({m2}, {b2}) = {b1}"),
                    _ => unreachable!(),
                });
                break 'outer;
            }
        }
    }
    report.record("unique transitivity", uniq);
    report
}

/// `τ(m, b) = τ(m, 0) + b` at every `(m, b)`.
pub fn check_translation_lemma(t: &Torsor) -> Report {
    let mut report = Report::new();
    if !verify_torsor(t).passed() {
        report.not_applicable("translation lemma", "input is not a torsor");
        return report;
    }
    let b = t.total();
    let mut outcome = Ok(());
    'outer: for m in t.module.elements() {
        for y in b.elements() {
            let l = t.act(m, y);
            let r = b.add(t.act(m, 0), y);
            if l != r {
                outcome = Err(format!("m={m}, b={y}: τ(m, b)={l} but τ(m, 0)+b={r}"));
                break 'outer;
            }
        }
    }
    report.record("translation lemma", outcome);
    report
}

/// `τ(m₁ + m₂, b) = τ(m₁, τ(m₂, b))` at every `(m₁, m₂, b)`.
pub fn check_associativity_lemma(t: &Torsor) -> Report {
    let mut report = Report::new();
    if !verify_torsor(t).passed() {
        report.not_applicable("associativity lemma", "input is not a torsor");
        return report;
    }
    let b = t.total();
    let m = &t.module;
    let mut outcome = Ok(());
    'outer: for m1 in m.elements() {
        for m2 in m.elements() {
            for y in b.elements() {
                let l = t.act(m.add(m1, m2), y);
                let r = t.act(m1, t.act(m2, y));
                if l != r {
                    outcome = Err(format!(
                        "m₁={m1}, m₂={m2}, b={y}: τ(m₁+m₂, b)={l} but τ(m₁, τ(m₂, b))={r}"
                    ));
                    break 'outer;
                }
            }
        }
    }
    report.record("associativity lemma", outcome);
    report
}

/// The kernel of a torsor's structure map squares to zero.
pub fn check_kernel_lemma(t: &Torsor) -> Report {
    let mut report = Report::new();
    if !verify_torsor(t).passed() {
        report.not_applicable("kernel square-zero", "input is not a torsor");
        return report;
    }
    report.record(
        "kernel square-zero",
        kernel(&t.f)
            .square_zero_witness()
            .map_or(Ok(()), |(x, y)| Err(format!("{x}·{y} = {} ≠ 0", t.total().mul(x, y)))),
    );
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorMorphism {
    pub source: Torsor,
    pub target: Torsor,
    pub h: RingHom,
}

impl TorsorMorphism {
    pub fn identity(t: &Torsor) -> Self {
        TorsorMorphism {
            source: t.clone(),
            target: t.clone(),
            h: RingHom::identity(t.total().clone()),
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &TorsorMorphism) -> TorsorMorphism {
        TorsorMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            h: self.h.then(&next.h),
        }
    }
}

/// Checks the hom property, `g ∘ h = f` and `h(τ_f(m, b)) = τ_g(m, h(b))`.
pub fn verify_torsor_morphism(mor: &TorsorMorphism) -> Report {
    let mut report = Report::new();
    let (s, t) = (&mor.source, &mor.target);
    if s.base() != t.base() || s.module != t.module {
        report.fail("same base and module", "torsors under different (A, M)");
        return report;
    }
    report.pass("same base and module");
    if mor.h.source() != s.total() || mor.h.target() != t.total() {
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
        s.total()
            .elements()
            .find(|&b| t.f.apply(mor.h.apply(b)) != s.f.apply(b))
            .map_or(Ok(()), |b| {
                Err(format!("b={b}: g(h(b))={} but f(b)={}", t.f.apply(mor.h.apply(b)), s.f.apply(b)))
            }),
    );
    report.record("equivariant", equivariance_witness(s, t, mor.h.map()).map_or(Ok(()), Err));
    report
}

fn equivariance_witness(s: &Torsor, t: &Torsor, h: &[usize]) -> Option<String> {
    for m in s.module.elements() {
        for b in s.total().elements() {
            let l = h[s.act(m, b)];
            let r = t.act(m, h[b]);
            if l != r {
                return Some(format!("m={m}, b={b}: h(τ_f(m, b))={l} but τ_g(m, h(b))={r}"));
            }
        }
    }
    None
}

/// Every action table making `f` an `M`-torsor, in lexicographic order.
pub fn enumerate_torsor_structures(f: &RingHom, m: &Arc<FiniteModule>, limits: &Limits) -> Result<Vec<Torsor>> {
    limits.check_size(f.source().size())?;
    let mut budget = limits.budget();
    enumerate_torsor_structures_with_budget(f, m, &mut budget)
}

pub(crate) fn enumerate_torsor_structures_with_budget(
    f: &RingHom,
    m: &Arc<FiniteModule>,
    budget: &mut Budget,
) -> Result<Vec<Torsor>> {
    if !f.is_surjective() {
        return Err(Error::Precondition("torsor structures need a surjective map".into()));
    }
    let domain = Arc::new(ActionDomain::new(f, m)?);
    let dom = &domain.ring;
    let b = f.source();
    let allowed = dom
        .ring
        .elements()
        .map(|p| b.elements().map(|y| f.apply(y) == dom.structure.apply(p)).collect())
        .collect();
    let mut search = ring_map_search(&dom.ring, b).allowed(allowed);
    for y in b.elements() {
        search = search.pin(domain.index(f, 0, y), y);
    }
    let mut out = Vec::new();
    for tau in search.collect(budget)? {
        budget.tick((b.size() * b.size()) as u64)?;
        let t = Torsor::with_domain(f.clone(), m.clone(), tau, domain.clone());
        if verify_torsor(&t).passed() {
            out.push(t);
        }
    }
    Ok(out)
}

/// Every torsor morphism `s → t`, as ring maps in lexicographic order.
pub fn enumerate_torsor_morphisms(s: &Torsor, t: &Torsor, limits: &Limits) -> Result<Vec<RingHom>> {
    let mut budget = limits.budget();
    enumerate_torsor_morphisms_with_budget(s, t, &mut budget)
}

pub(crate) fn enumerate_torsor_morphisms_with_budget(s: &Torsor, t: &Torsor, budget: &mut Budget) -> Result<Vec<RingHom>> {
    if s.base() != t.base() || s.module != t.module {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for h in over_a_maps(s, t, false, budget)? {
        budget.tick((s.module.size() * s.total().size()) as u64)?;
        if equivariance_witness(s, t, &h).is_none() {
            out.push(RingHom::new_unchecked(s.total().clone(), t.total().clone(), h));
        }
    }
    Ok(out)
}

fn over_a_maps(s: &Torsor, t: &Torsor, injective: bool, budget: &mut Budget) -> Result<Vec<Vec<usize>>> {
    let (b, c) = (s.total(), t.total());
    let allowed = b
        .elements()
        .map(|x| c.elements().map(|y| s.f.apply(x) == t.f.apply(y)).collect())
        .collect();
    ring_map_search(b, c).allowed(allowed).injective(injective).collect(budget)
}

pub(crate) fn torsors_isomorphic(s: &Torsor, t: &Torsor, budget: &mut Budget) -> Result<bool> {
    if s.base() != t.base() || s.module != t.module || s.total().size() != t.total().size() {
        return Ok(false);
    }
    for h in over_a_maps(s, t, true, budget)? {
        if equivariance_witness(s, t, &h).is_none() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Torsors found without reference to extensions, grouped into isomorphism
/// classes (indices into `torsors`).
#[derive(Clone, Debug)]
pub struct TorsorClassification {
    pub torsors: Vec<Torsor>,
    pub classes: Vec<Vec<usize>>,
}

/// Classifies `M`-torsors by searching action tables on every ring of order
/// `|A|·|M|` and every surjection onto `A`.
pub fn classify_torsors(a: &Arc<FiniteRing>, m: &Arc<FiniteModule>, limits: &Limits) -> Result<TorsorClassification> {
    if **m.ring() != **a {
        return Err(Error::Precondition("module must be over the base ring".into()));
    }
    let order = a.size() * m.size();
    limits.check_size(order)?;
    let mut budget = limits.budget();
    let mut torsors = Vec::new();
    for b in enumerate_rings(order, limits)? {
        for f in enumerate_homs_with_budget(&b, a, &mut budget)? {
            if f.is_surjective() {
                torsors.extend(enumerate_torsor_structures_with_budget(&f, m, &mut budget)?);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, t) in torsors.iter().enumerate() {
        let mut home = None;
        for (c, members) in classes.iter().enumerate() {
            if torsors_isomorphic(t, &torsors[members[0]], &mut budget)? {
                home = Some(c);
                break;
            }
        }
        match home {
            Some(c) => classes[c].push(i),
            None => classes.push(vec![i]),
        }
    }
    Ok(TorsorClassification { torsors, classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finalg::product_ring;
    use crate::Verdict;

    fn z(n: usize) -> Arc<FiniteRing> {
        Arc::new(FiniteRing::cyclic(n))
    }

    fn zm(n: usize) -> Arc<FiniteModule> {
        Arc::new(FiniteModule::regular(z(n)))
    }

    fn reduction(n: usize, k: usize) -> RingHom {
        RingHom::new(z(n), z(k), (0..n).map(|x| x % k).collect()).unwrap()
    }

    fn z4_torsor() -> Torsor {
        let f = reduction(4, 2);
        let m = zm(2);
        let dom = ActionDomain::new(&f, &m).unwrap();
        let tau = dom
            .ring
            .pairs()
            .iter()
            .map(|&(x, b)| (2 * (x % 2) + b) % 4)
            .collect();
        Torsor::new(f, m, tau).unwrap()
    }

    #[test]
    fn group_object_small_cases() {
        let g = group_object(&z(2), &zm(2));
        assert!(g.inv.iter().enumerate().all(|(x, &y)| x == y));
        assert!(verify_group_object(&g).fully_passed());
        let g3 = group_object(&z(3), &zm(3));
        // (0, 1) sits at index 1 and (0, 2) at index 2
        assert_eq!(g3.inv[1], 2);
        let g0 = group_object(&z(3), &Arc::new(FiniteModule::zero(z(3))));
        assert_eq!(g0.e, vec![0, 1, 2]);
        assert_eq!(g0.inv, vec![0, 1, 2]);
        assert!(verify_group_object(&g0).fully_passed());
        assert!(verify_group_object(&group_object(&z(6), &zm(6))).fully_passed());
    }

    #[test]
    fn dropping_the_second_summand_breaks_a_unit() {
        let mut g = group_object(&z(2), &zm(2));
        g.plus = g.pair.pairs().iter().map(|&(x, _)| x).collect();
        let r = verify_group_object(&g);
        assert_eq!(r.verdict_of("left unit"), Some(Verdict::Fail));
        assert!(r.find("left unit").unwrap().witness.is_some());
    }

    #[test]
    fn z4_torsor_passes() {
        let t = z4_torsor();
        assert!(verify_torsor(&t).fully_passed());
        assert!(check_translation_lemma(&t).fully_passed());
        assert!(check_associativity_lemma(&t).fully_passed());
        assert!(check_kernel_lemma(&t).fully_passed());
    }

    #[test]
    fn ignoring_m_fails_uniqueness() {
        let t = z4_torsor();
        let tau = t.domain().ring.pairs().iter().map(|&(_, b)| b).collect();
        let bad = Torsor::new(t.f.clone(), t.module.clone(), tau).unwrap();
        let r = verify_torsor(&bad);
        assert_eq!(r.verdict_of("unique transitivity"), Some(Verdict::Fail));
        assert!(check_translation_lemma(&bad).is_not_applicable());
        assert!(check_associativity_lemma(&bad).is_not_applicable());
    }

    #[test]
    fn trivial_extension_torsor() {
        let base = trivial_extension(&z(2), &zm(2));
        let f = base.f.clone();
        let dom = ActionDomain::new(&f, &zm(2)).unwrap();
        let tau = dom
            .ring
            .pairs()
            .iter()
            .map(|&(x, b)| (b / 2) * 2 + (x % 2 + b % 2) % 2)
            .collect();
        let t = Torsor::new(f, zm(2), tau).unwrap();
        assert!(verify_torsor(&t).fully_passed());
    }

    #[test]
    fn zero_module_lemmas() {
        let zero = Arc::new(FiniteModule::zero(z(3)));
        let f = RingHom::identity(z(3));
        let ts = enumerate_torsor_structures(&f, &zero, &Limits::default()).unwrap();
        assert_eq!(ts.len(), 1);
        assert!(check_translation_lemma(&ts[0]).fully_passed());
        assert!(check_associativity_lemma(&ts[0]).fully_passed());
    }

    #[test]
    fn torsor_structure_counts() {
        let l = Limits::default();
        assert_eq!(enumerate_torsor_structures(&reduction(4, 2), &zm(2), &l).unwrap().len(), 1);
        let pi = trivial_extension(&z(3), &zm(3)).f;
        assert_eq!(enumerate_torsor_structures(&pi, &zm(3), &l).unwrap().len(), 2);
        let z2 = z(2);
        let p = product_ring(&z2, &z2);
        assert!(enumerate_torsor_structures(&p.first, &zm(2), &l).unwrap().is_empty());
    }

    #[test]
    fn translated_identity_is_not_equivariant() {
        // h(b) = τ(1, b) on the trivial ℤ/3 extension
        let l = Limits::default();
        let pi = trivial_extension(&z(3), &zm(3)).f;
        let t = enumerate_torsor_structures(&pi, &zm(3), &l).unwrap().remove(0);
        let map = t.total().elements().map(|b| t.act(1, b)).collect();
        let mor = TorsorMorphism {
            source: t.clone(),
            target: t.clone(),
            h: RingHom::new_unchecked(t.total().clone(), t.total().clone(), map),
        };
        assert!(!verify_torsor_morphism(&mor).passed());
        assert!(verify_torsor_morphism(&TorsorMorphism::identity(&t)).fully_passed());
    }

    #[test]
    fn independent_classification_counts() {
        let l = Limits::default();
        assert_eq!(classify_torsors(&z(2), &zm(2), &l).unwrap().classes.len(), 2);
        assert_eq!(classify_torsors(&z(3), &zm(3), &l).unwrap().classes.len(), 3);
        let zero = Arc::new(FiniteModule::zero(z(2)));
        assert_eq!(classify_torsors(&z(2), &zero, &l).unwrap().classes.len(), 1);
    }
}
