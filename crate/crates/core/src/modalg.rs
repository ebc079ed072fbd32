//! Finite modules over finite rings, given by an addition table and a scalar
//! action table.

use std::sync::Arc;

use crate::finalg::{kernel, FiniteRing, Ideal, RingHom};
use crate::report::Report;
use crate::search::MapSearch;
use crate::{Budget, Error, Limits, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteModule {
    ring: Arc<FiniteRing>,
    size: usize,
    add: Vec<usize>,
    act: Vec<usize>,
    neg: Vec<usize>,
}

impl FiniteModule {
    /// Builds a module from row-major tables (`act[r][m] = r·m`), validating
    /// every module axiom.
    pub fn from_tables(ring: Arc<FiniteRing>, add: Vec<Vec<usize>>, act: Vec<Vec<usize>>) -> Result<Self> {
        let size = add.len();
        let shape_ok = size > 0
            && add.iter().all(|r| r.len() == size)
            && act.len() == ring.size()
            && act.iter().all(|r| r.len() == size);
        if !shape_ok {
            return Err(Error::InvalidModule {
                axiom: "tables well-formed".into(),
                witness: format!(
                    "expected a {size}×{size} addition table and a {}×{size} action table",
                    ring.size()
                ),
            });
        }
        Self::from_flat(ring, size, add.concat(), act.concat())
    }

    pub(crate) fn from_flat(ring: Arc<FiniteRing>, size: usize, add: Vec<usize>, act: Vec<usize>) -> Result<Self> {
        let report = check_flat_module(&ring, size, &add, &act);
        if let Some(c) = report.failures().next() {
            return Err(Error::InvalidModule {
                axiom: c.name.clone(),
                witness: c.witness.clone().unwrap_or_default(),
            });
        }
        Ok(Self::from_flat_unchecked(ring, size, add, act))
    }

    pub(crate) fn from_flat_unchecked(ring: Arc<FiniteRing>, size: usize, add: Vec<usize>, act: Vec<usize>) -> Self {
        let neg = (0..size)
            .map(|a| (0..size).find(|&b| add[a * size + b] == 0).unwrap_or(0))
            .collect();
        FiniteModule {
            ring,
            size,
            add,
            act,
            neg,
        }
    }

    pub fn zero(ring: Arc<FiniteRing>) -> Self {
        let act = vec![0; ring.size()];
        Self::from_flat_unchecked(ring, 1, vec![0], act)
    }

    /// The ring as a module over itself.
    pub fn regular(ring: Arc<FiniteRing>) -> Self {
        let add = ring.add_table().to_vec();
        let act = ring.mul_table().to_vec();
        let n = ring.size();
        Self::from_flat_unchecked(ring, n, add, act)
    }

    /// The target of `h: A → C` as an `A`-module, `a·c = h(a)c`.
    pub fn via_hom(h: &RingHom) -> Self {
        let (a, c) = (h.source(), h.target());
        let n = c.size();
        let mut act = vec![0; a.size() * n];
        for r in a.elements() {
            for m in c.elements() {
                act[r * n + m] = c.mul(h.apply(r), m);
            }
        }
        Self::from_flat_unchecked(a.clone(), n, c.add_table().to_vec(), act)
    }

    /// An ideal of `B` as a `B`-module; element `i` is the `i`-th smallest
    /// ideal element.
    pub fn from_ideal(ideal: &Ideal) -> Self {
        let ring = ideal.ring().clone();
        let els = ideal.elements();
        let n = els.len();
        let pos = |x: usize| ideal.position(x).expect("ideal is closed");
        let mut add = vec![0; n * n];
        for (i, &x) in els.iter().enumerate() {
            for (j, &y) in els.iter().enumerate() {
                add[i * n + j] = pos(ring.add(x, y));
            }
        }
        let mut act = vec![0; ring.size() * n];
        for r in ring.elements() {
            for (i, &x) in els.iter().enumerate() {
                act[r * n + i] = pos(ring.mul(r, x));
            }
        }
        Self::from_flat_unchecked(ring, n, add, act)
    }

    /// `M ⊕ N`, with `(m, n)` at index `m·|N| + n`.
    pub fn direct_sum(m: &FiniteModule, n: &FiniteModule) -> Result<Self> {
        if m.ring != n.ring {
            return Err(Error::Precondition("direct sum needs modules over one ring".into()));
        }
        let (sm, sn) = (m.size, n.size);
        let size = sm * sn;
        let mut add = vec![0; size * size];
        for i in 0..size {
            for j in 0..size {
                add[i * size + j] = m.add(i / sn, j / sn) * sn + n.add(i % sn, j % sn);
            }
        }
        let mut act = vec![0; m.ring.size() * size];
        for r in m.ring.elements() {
            for i in 0..size {
                act[r * size + i] = m.act(r, i / sn) * sn + n.act(r, i % sn);
            }
        }
        Ok(Self::from_flat_unchecked(m.ring.clone(), size, add, act))
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b]
    }

    #[inline]
    pub fn act(&self, r: usize, m: usize) -> usize {
        self.act[r * self.size + m]
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn add_table(&self) -> &[usize] {
        &self.add
    }

    pub fn act_table(&self) -> &[usize] {
        &self.act
    }

    pub fn add_rows(&self) -> Vec<Vec<usize>> {
        self.add.chunks(self.size).map(<[usize]>::to_vec).collect()
    }

    pub fn act_rows(&self) -> Vec<Vec<usize>> {
        self.act.chunks(self.size).map(<[usize]>::to_vec).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn is_zero(&self) -> bool {
        self.size == 1
    }

    pub fn verify(&self) -> Report {
        check_flat_module(&self.ring, self.size, &self.add, &self.act)
    }
}

pub(crate) fn check_flat_module(ring: &FiniteRing, n: usize, add: &[usize], act: &[usize]) -> Report {
    let mut report = Report::new();
    let r = ring.size();
    if n == 0 || add.len() != n * n || act.len() != r * n || add.iter().chain(act).any(|&v| v >= n) {
        report.fail("tables well-formed", "table shape or entry out of range");
        return report;
    }
    report.pass("tables well-formed");
    let a = |x: usize, y: usize| add[x * n + y];
    let s = |k: usize, x: usize| act[k * n + x];
    let mut assoc = Ok(());
    'outer: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if a(a(x, y), z) != a(x, a(y, z)) {
                    assoc = Err(format!("x={x}, y={y}, z={z}"));
                    break 'outer;
                }
            }
        }
    }
    report.record("additive associativity", assoc);
    report.record(
        "additive commutativity",
        first_pair(n, n, |x, y| (a(x, y) != a(y, x)).then(|| format!("x={x}, y={y}"))),
    );
    report.record(
        "additive identity",
        (0..n)
            .find(|&x| a(0, x) != x)
            .map_or(Ok(()), |x| Err(format!("0 + {x} = {}", a(0, x)))),
    );
    report.record(
        "additive inverses",
        (0..n)
            .find(|&x| !(0..n).any(|y| a(x, y) == 0))
            .map_or(Ok(()), |x| Err(format!("{x} has no additive inverse"))),
    );
    report.record(
        "action distributes over module addition",
        first_pair(r, n * n, |k, xy| {
            let (x, y) = (xy / n, xy % n);
            (s(k, a(x, y)) != a(s(k, x), s(k, y))).then(|| format!("r={k}, m={x}, m'={y}"))
        }),
    );
    report.record(
        "action distributes over ring addition",
        first_pair(r * r, n, |kl, x| {
            let (k, l) = (kl / r, kl % r);
            (s(ring.add(k, l), x) != a(s(k, x), s(l, x))).then(|| format!("r={k}, r'={l}, m={x}"))
        }),
    );
    report.record(
        "action is unital",
        (0..n)
            .find(|&x| s(ring.one(), x) != x)
            .map_or(Ok(()), |x| Err(format!("1·{x} = {}", s(ring.one(), x)))),
    );
    report.record(
        "action is associative",
        first_pair(r * r, n, |kl, x| {
            let (k, l) = (kl / r, kl % r);
            (s(ring.mul(k, l), x) != s(k, s(l, x))).then(|| format!("r={k}, r'={l}, m={x}"))
        }),
    );
    report
}

fn first_pair(n1: usize, n2: usize, f: impl Fn(usize, usize) -> Option<String>) -> Result<(), String> {
    for x in 0..n1 {
        for y in 0..n2 {
            if let Some(w) = f(x, y) {
                return Err(w);
            }
        }
    }
    Ok(())
}

/// `f_*M`: the `A`-module `M` viewed over `B` through `f: B → A`.
pub fn restrict_scalars(f: &RingHom, m: &FiniteModule) -> FiniteModule {
    assert_eq!(
        **f.target(),
        *m.ring,
        "restriction of scalars needs M over the target of f"
    );
    let b = f.source();
    let n = m.size;
    let mut act = vec![0; b.size() * n];
    for r in b.elements() {
        let fr = f.apply(r);
        act[r * n..(r + 1) * n].copy_from_slice(&m.act[fr * n..(fr + 1) * n]);
    }
    FiniteModule::from_flat_unchecked(b.clone(), n, m.add.clone(), act)
}

/// The kernel of a surjection `f: B → A` with square-zero kernel, as an
/// `A`-module via `a·k = b'k` for any lift `b'` of `a`.
///
/// Element `i` of the result is the `i`-th smallest kernel element. Every
/// lift is tried, so a kernel whose square is nonzero is reported as
/// [`Error::LiftDependence`].
pub fn kernel_as_a_module(f: &RingHom) -> Result<(FiniteModule, Ideal)> {
    if !f.is_surjective() {
        return Err(Error::Precondition("kernel module needs a surjective map".into()));
    }
    let (b, a) = (f.source(), f.target());
    let ker = kernel(f);
    let els = ker.elements();
    let n = els.len();
    let pos = |x: usize| ker.position(x).expect("ideal is closed");
    let mut act = vec![usize::MAX; a.size() * n];
    for r in b.elements() {
        let ar = f.apply(r);
        for (i, &k) in els.iter().enumerate() {
            let v = pos(b.mul(r, k));
            let slot = &mut act[ar * n + i];
            if *slot == usize::MAX {
                *slot = v;
            } else if *slot != v {
                let first = b
                    .elements()
                    .find(|&r0| f.apply(r0) == ar)
                    .expect("lift exists");
                return Err(Error::LiftDependence {
                    a: ar,
                    lift1: first,
                    lift2: r,
                    element: k,
                });
            }
        }
    }
    let mut add = vec![0; n * n];
    for (i, &x) in els.iter().enumerate() {
        for (j, &y) in els.iter().enumerate() {
            add[i * n + j] = pos(b.add(x, y));
        }
    }
    Ok((FiniteModule::from_flat_unchecked(a.clone(), n, add, act), ker))
}

/// An additive, scalar-compatible map stored as an image table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleHom {
    pub source: Arc<FiniteModule>,
    pub target: Arc<FiniteModule>,
    pub map: Vec<usize>,
}

impl ModuleHom {
    pub fn new(source: Arc<FiniteModule>, target: Arc<FiniteModule>, map: Vec<usize>) -> Self {
        ModuleHom { source, target, map }
    }

    pub fn identity(m: Arc<FiniteModule>) -> Self {
        let map = m.elements().collect();
        ModuleHom {
            source: m.clone(),
            target: m,
            map,
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// Checks additivity and compatibility with the scalar action.
    pub fn verify_hom(&self) -> Report {
        let mut report = Report::new();
        let (s, t) = (&*self.source, &*self.target);
        if s.ring != t.ring {
            report.fail("same ring", "source and target are modules over different rings");
            return report;
        }
        report.pass("same ring");
        if self.map.len() != s.size || self.map.iter().any(|&y| y >= t.size) {
            report.fail("map well-formed", format!("expected {} images below {}", s.size, t.size));
            return report;
        }
        report.pass("map well-formed");
        let h = &self.map;
        report.record(
            "additive",
            first_pair(s.size, s.size, |x, y| {
                (h[s.add(x, y)] != t.add(h[x], h[y])).then(|| {
                    format!("m={x}, m'={y}: h(m+m')={} but h(m)+h(m')={}", h[s.add(x, y)], t.add(h[x], h[y]))
                })
            }),
        );
        report.record(
            "action-compatible",
            first_pair(s.ring.size(), s.size, |r, x| {
                (h[s.act(r, x)] != t.act(r, h[x]))
                    .then(|| format!("r={r}, m={x}: h(rm)={} but r·h(m)={}", h[s.act(r, x)], t.act(r, h[x])))
            }),
        );
        report
    }
}

/// Checks that `h` is a bijective module homomorphism.
pub fn verify_module_iso(h: &ModuleHom) -> Report {
    let mut report = Report::new();
    let base = h.verify_hom();
    let well_formed = base.verdict_of("map well-formed") == Some(crate::Verdict::Pass);
    if well_formed {
        let mut seen = vec![usize::MAX; h.target.size];
        let mut inj = Ok(());
        for (x, &y) in h.map.iter().enumerate() {
            if seen[y] != usize::MAX {
                inj = Err(format!("{} and {x} both map to {y}", seen[y]));
                break;
            }
            seen[y] = x;
        }
        report.record("injective", inj);
        report.record(
            "surjective",
            seen.iter()
                .position(|&x| x == usize::MAX)
                .map_or(Ok(()), |y| Err(format!("{y} is not hit"))),
        );
    }
    report.absorb("", base);
    report
}

/// All module isomorphisms `M → N`, in lexicographic order of their tables.
pub fn enumerate_module_isos(m: &Arc<FiniteModule>, n: &Arc<FiniteModule>, limits: &Limits) -> Result<Vec<ModuleHom>> {
    limits.check_size(m.size)?;
    limits.check_size(n.size)?;
    let mut budget = limits.budget();
    enumerate_module_maps(m, n, true, &mut budget)
}

/// All module homomorphisms `M → N`.
pub fn enumerate_module_homs(m: &Arc<FiniteModule>, n: &Arc<FiniteModule>, limits: &Limits) -> Result<Vec<ModuleHom>> {
    limits.check_size(m.size)?;
    limits.check_size(n.size)?;
    let mut budget = limits.budget();
    enumerate_module_maps(m, n, false, &mut budget)
}

pub(crate) fn enumerate_module_maps(
    m: &Arc<FiniteModule>,
    n: &Arc<FiniteModule>,
    injective: bool,
    budget: &mut Budget,
) -> Result<Vec<ModuleHom>> {
    if m.ring != n.ring {
        return Err(Error::Precondition("module maps need modules over one ring".into()));
    }
    if injective && m.size != n.size {
        return Ok(Vec::new());
    }
    let (sm, sn) = (m.size, n.size);
    let mut search = MapSearch::new(sm, sn)
        .binary(&m.add, &n.add)
        .pin(0, 0)
        .injective(injective);
    for r in m.ring.elements() {
        search = search.unary(&m.act[r * sm..(r + 1) * sm], &n.act[r * sn..(r + 1) * sn]);
    }
    Ok(search
        .collect(budget)?
        .into_iter()
        .map(|map| ModuleHom::new(m.clone(), n.clone(), map))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finalg::{product_ring, RingHom};

    fn z(n: usize) -> Arc<FiniteRing> {
        Arc::new(FiniteRing::cyclic(n))
    }

    fn reduction(n: usize, k: usize) -> RingHom {
        RingHom::new(z(n), z(k), (0..n).map(|x| x % k).collect()).unwrap()
    }

    #[test]
    fn regular_and_zero_modules_are_valid() {
        for n in 1..=6 {
            assert!(FiniteModule::regular(z(n)).verify().passed());
            assert!(FiniteModule::zero(z(n)).verify().passed());
        }
    }

    #[test]
    fn restriction_along_identity() {
        let m = FiniteModule::regular(z(3));
        assert_eq!(restrict_scalars(&RingHom::identity(z(3)), &m), m);
    }

    #[test]
    fn restriction_along_reduction() {
        let m = FiniteModule::regular(z(2));
        let fm = restrict_scalars(&reduction(4, 2), &m);
        assert_eq!(fm.act(2, 1), 0);
        assert_eq!(fm.act(3, 1), 1);
        assert!(fm.verify().passed());
        let zero = restrict_scalars(&reduction(4, 2), &FiniteModule::zero(z(2)));
        assert!(zero.is_zero());
    }

    #[test]
    fn restriction_is_functorial() {
        let g = reduction(12, 4);
        let f = reduction(4, 2);
        let m = FiniteModule::regular(z(2));
        assert_eq!(restrict_scalars(&g.then(&f), &m), restrict_scalars(&g, &restrict_scalars(&f, &m)));
    }

    #[test]
    fn kernel_module_of_z4() {
        let (k, ideal) = kernel_as_a_module(&reduction(4, 2)).unwrap();
        assert_eq!(ideal.elements(), &[0, 2]);
        // element 1 of the module is 2 ∈ ℤ/4; 1·2 = 2 through either lift
        assert_eq!(k.act(1, 1), 1);
        assert!(k.verify().passed());
    }

    #[test]
    fn zero_kernel_gives_zero_module() {
        let (k, _) = kernel_as_a_module(&RingHom::identity(z(5))).unwrap();
        assert!(k.is_zero());
    }

    #[test]
    fn non_square_zero_kernel_is_lift_dependent() {
        let z2 = z(2);
        let p = product_ring(&z2, &z2);
        let err = kernel_as_a_module(&p.first).unwrap_err();
        assert!(matches!(err, Error::LiftDependence { .. }));
    }

    #[test]
    fn alpha_into_z4_kernel() {
        let f = reduction(4, 2);
        let fm = Arc::new(restrict_scalars(&f, &FiniteModule::regular(z(2))));
        let ker = Arc::new(FiniteModule::from_ideal(&kernel(&f)));
        let alpha = ModuleHom::new(fm.clone(), ker.clone(), vec![0, 1]);
        assert!(verify_module_iso(&alpha).fully_passed());
        let bad = ModuleHom::new(fm, ker, vec![0, 0]);
        let r = verify_module_iso(&bad);
        assert_eq!(r.verdict_of("injective"), Some(crate::Verdict::Fail));
        let m = Arc::new(FiniteModule::regular(z(3)));
        assert!(verify_module_iso(&ModuleHom::identity(m)).fully_passed());
    }

    #[test]
    fn module_iso_counts() {
        let l = Limits::default();
        let m2 = Arc::new(FiniteModule::regular(z(2)));
        assert_eq!(enumerate_module_isos(&m2, &m2, &l).unwrap().len(), 1);
        let m3 = Arc::new(FiniteModule::regular(z(3)));
        let isos = enumerate_module_isos(&m3, &m3, &l).unwrap();
        assert_eq!(isos.iter().map(|h| h.map.clone()).collect::<Vec<_>>(), vec![vec![0, 1, 2], vec![0, 2, 1]]);
    }

    #[test]
    fn mismatched_actions_have_no_isos() {
        // ℤ/2 over ℤ/2 × ℤ/2 through the first versus the second projection
        let z2 = z(2);
        let p = product_ring(&z2, &z2);
        let first = Arc::new(FiniteModule::via_hom(&p.first));
        let second = Arc::new(FiniteModule::via_hom(&p.second));
        let l = Limits::default();
        assert_eq!(enumerate_module_isos(&first, &first, &l).unwrap().len(), 1);
        assert!(enumerate_module_isos(&first, &second, &l).unwrap().is_empty());
    }

    #[test]
    fn bimodule_compatibility() {
        // α is a B-iso f_*M → ker f iff it is an A-iso M → kernel module
        let f = reduction(4, 2);
        let m = Arc::new(FiniteModule::regular(z(2)));
        let fm = Arc::new(restrict_scalars(&f, &m));
        let ker_b = Arc::new(FiniteModule::from_ideal(&kernel(&f)));
        let ker_a = Arc::new(kernel_as_a_module(&f).unwrap().0);
        for map in [vec![0, 1], vec![0, 0], vec![1, 0], vec![1, 1]] {
            let b_side = verify_module_iso(&ModuleHom::new(fm.clone(), ker_b.clone(), map.clone())).passed();
            let a_side = verify_module_iso(&ModuleHom::new(m.clone(), ker_a.clone(), map)).passed();
            assert_eq!(b_side, a_side);
        }
    }

    #[test]
    fn direct_sums() {
        let m = FiniteModule::regular(z(2));
        let s = FiniteModule::direct_sum(&m, &m).unwrap();
        assert_eq!(s.size(), 4);
        assert!(s.verify().passed());
    }
}
