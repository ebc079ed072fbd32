//! Sheaves of finite rings and modules on finite spaces, morphisms of ringed
//! spaces, and the constructions built from them: `Spec` of a finite ring,
//! `X ⊕ ℳ`, coproducts under `X`, the cogroup structure on `i_X` and the
//! mediating morphism `θ`.
//!
//! Sections are stored per open (indexed as in [`FinSpace::opens`]), with a
//! restriction map for every inclusion. Stalks are sections over minimal
//! opens. Sheaves built from stalk data keep the given stalk ring on each
//! minimal open and use compatible families, ordered lexicographically, on
//! every other open.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::exal::{trivial_extension, trivial_extension_ring, SquareZeroExtension};
use crate::finalg::{fiber_product, kernel, FiberProduct, FiniteRing, RingHom};
use crate::finspace::{is_closed_immersion_space, points_of, pushout, ContinuousMap, FinSpace, PointSet};
use crate::grouptor::{group_object, verify_group_object, GroupObjectStructure};
use crate::modalg::FiniteModule;
use crate::report::{Report, Verdict};
use crate::{Error, Result};

/// How much of the scheme-level structure is checked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Discrete spaces from `Spec` of finite rings; module sheaves are
    /// quasi-coherent automatically.
    #[default]
    Spec,
    /// Arbitrary finite ringed spaces; quasi-coherence is not checked.
    Ringed,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::Spec => "spec",
            Mode::Ringed => "ringed (quasi-coherence not verified)",
        }
    }
}

/// Each section of an open as its family of restrictions to the minimal
/// opens of the open's points.
#[derive(Debug)]
struct FamilyIndex {
    points: Vec<usize>,
    families: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl FamilyIndex {
    fn new(points: Vec<usize>, families: Vec<Vec<usize>>) -> Self {
        let lookup = families
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        FamilyIndex {
            points,
            families,
            lookup,
        }
    }

    fn glue(&self, family: &[usize]) -> Option<usize> {
        self.lookup.get(family).copied()
    }

    /// Components of `family` (over `self.points`) at the points of `sub`.
    fn restrict_family(&self, family: &[usize], sub: &[usize]) -> Vec<usize> {
        sub.iter()
            .map(|p| family[self.points.binary_search(p).expect("sub-open")])
            .collect()
    }
}

#[derive(Clone, Default)]
struct FamilyCache(Vec<Arc<OnceLock<Arc<FamilyIndex>>>>);

impl FamilyCache {
    fn new(n: usize) -> Self {
        FamilyCache((0..n).map(|_| Arc::new(OnceLock::new())).collect())
    }
}

impl std::fmt::Debug for FamilyCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("FamilyCache")
    }
}

/// Every compatible family over `points`: `rho(x, y, s)` restricts a stalk
/// element at `x` to the stalk at `y` whenever `U_y ⊆ U_x`.
fn compatible_families(
    space: &FinSpace,
    points: &[usize],
    sizes: &[usize],
    rho: &dyn Fn(usize, usize, usize) -> usize,
) -> Vec<Vec<usize>> {
    let mins: Vec<PointSet> = points.iter().map(|&x| space.minimal_open(x)).collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(points.len());
    fn go(
        k: usize,
        points: &[usize],
        mins: &[PointSet],
        sizes: &[usize],
        rho: &dyn Fn(usize, usize, usize) -> usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == points.len() {
            out.push(cur.clone());
            return;
        }
        'cand: for s in 0..sizes[k] {
            for j in 0..k {
                let (x, y) = (points[j], points[k]);
                let ok = if mins[k] & !mins[j] == 0 {
                    rho(x, y, cur[j]) == s
                } else if mins[j] & !mins[k] == 0 {
                    rho(y, x, s) == cur[j]
                } else {
                    true
                };
                if !ok {
                    continue 'cand;
                }
            }
            cur.push(s);
            go(k + 1, points, mins, sizes, rho, cur, out);
            cur.pop();
        }
    }
    go(0, points, &mins, sizes, rho, &mut cur, &mut out);
    out
}

/// Builds a ring on compatible families with componentwise operations.
fn family_ring(index: &FamilyIndex, stalks: &[&FiniteRing]) -> FiniteRing {
    let n = index.families.len();
    let mut add = vec![0; n * n];
    let mut mul = vec![0; n * n];
    let mut buf = vec![0; index.points.len()];
    for (i, fi) in index.families.iter().enumerate() {
        for (j, fj) in index.families.iter().enumerate() {
            for (k, r) in stalks.iter().enumerate() {
                buf[k] = r.add(fi[k], fj[k]);
            }
            add[i * n + j] = index.glue(&buf).expect("families are closed under addition");
            for (k, r) in stalks.iter().enumerate() {
                buf[k] = r.mul(fi[k], fj[k]);
            }
            mul[i * n + j] = index.glue(&buf).expect("families are closed under multiplication");
        }
    }
    let ones: Vec<usize> = stalks.iter().map(|r| r.one()).collect();
    let one = index.glue(&ones).expect("the unit family is compatible");
    FiniteRing::from_flat_unchecked(n, one, add, mul)
}

/// A sheaf of finite rings; also the structure sheaf of a finite ringed space.
#[derive(Clone, Debug)]
pub struct RingSheaf {
    space: Arc<FinSpace>,
    sections: Vec<Arc<FiniteRing>>,
    res: BTreeMap<(usize, usize), RingHom>,
    cache: FamilyCache,
}

pub type RingedSpace = RingSheaf;

impl PartialEq for RingSheaf {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.sections == other.sections && self.res == other.res
    }
}

impl Eq for RingSheaf {}

impl RingSheaf {
    /// Wraps openwise data without checking it; restrictions of an open to
    /// itself default to the identity. Use [`verify_sheaf`] before trusting
    /// the result.
    pub fn new(space: Arc<FinSpace>, sections: Vec<Arc<FiniteRing>>, mut res: BTreeMap<(usize, usize), RingHom>) -> Self {
        for (i, s) in sections.iter().enumerate() {
            res.entry((i, i)).or_insert_with(|| RingHom::identity(s.clone()));
        }
        let cache = FamilyCache::new(space.open_count());
        RingSheaf {
            space,
            sections,
            res,
            cache,
        }
    }

    /// The sheaf with the given stalk rings and restriction maps
    /// `rho[(x, y)]: F_x → F_y` for `U_y ⊊ U_x`; points sharing a minimal
    /// open must carry the same stalk.
    pub fn from_stalk_diagram(
        space: Arc<FinSpace>,
        stalks: Vec<Arc<FiniteRing>>,
        rho: BTreeMap<(usize, usize), RingHom>,
    ) -> Result<Self> {
        check_diagram_shape(&space, stalks.len(), |x, y| rho.contains_key(&(x, y)), |x, y| stalks[x] == stalks[y])?;
        let rho_fn = |x: usize, y: usize, s: usize| -> usize {
            if space.minimal_open(x) == space.minimal_open(y) {
                s
            } else {
                rho[&(x, y)].apply(s)
            }
        };
        let sizes: Vec<usize> = stalks.iter().map(|r| r.size()).collect();
        let indices = build_family_indices(&space, &sizes, &rho_fn);
        let mut sections = Vec::with_capacity(space.open_count());
        for (i, index) in indices.iter().enumerate() {
            let u = space.open(i);
            match (0..space.points()).find(|&x| space.minimal_open(x) == u) {
                Some(x) => sections.push(stalks[x].clone()),
                None => {
                    let rings: Vec<&FiniteRing> = index.points.iter().map(|&p| &*stalks[p]).collect();
                    sections.push(Arc::new(family_ring(index, &rings)));
                }
            }
        }
        let res = restrictions_from_families(&space, &indices, |i, j, map| {
            RingHom::new_unchecked(sections[i].clone(), sections[j].clone(), map)
        })?;
        let sheaf = RingSheaf::new(space, sections, res);
        for (i, index) in indices.into_iter().enumerate() {
            let _ = sheaf.cache.0[i].set(Arc::new(index));
        }
        let report = verify_sheaf(&sheaf);
        if let Some(c) = report.failures().next() {
            return Err(Error::InvalidSheaf(format!(
                "{}: {}",
                c.name,
                c.witness.clone().unwrap_or_default()
            )));
        }
        Ok(sheaf)
    }

    pub fn space(&self) -> &Arc<FinSpace> {
        &self.space
    }

    pub fn sections(&self, open: usize) -> &Arc<FiniteRing> {
        &self.sections[open]
    }

    pub fn all_sections(&self) -> &[Arc<FiniteRing>] {
        &self.sections
    }

    pub fn sections_over(&self, mask: PointSet) -> Option<&Arc<FiniteRing>> {
        self.space.open_index(mask).map(|i| &self.sections[i])
    }

    pub fn res(&self, from: usize, to: usize) -> &RingHom {
        &self.res[&(from, to)]
    }

    pub fn restrictions(&self) -> &BTreeMap<(usize, usize), RingHom> {
        &self.res
    }

    pub fn global_sections(&self) -> &Arc<FiniteRing> {
        &self.sections[self.space.open_index(self.space.full()).expect("whole space is open")]
    }

    /// `F(U_x)`.
    pub fn stalk(&self, x: usize) -> &Arc<FiniteRing> {
        &self.sections[self.space.minimal_open_index(x)]
    }

    fn family_index(&self, open: usize) -> Arc<FamilyIndex> {
        self.cache.0[open]
            .get_or_init(|| {
                let pts = points_of(self.space.open(open));
                let mins: Vec<usize> = pts.iter().map(|&x| self.space.minimal_open_index(x)).collect();
                let families = (0..self.sections[open].size())
                    .map(|s| mins.iter().map(|&m| self.res[&(open, m)].apply(s)).collect())
                    .collect();
                Arc::new(FamilyIndex::new(pts, families))
            })
            .clone()
    }

    /// Restrictions of a section to the stalks at the points of its open.
    pub fn family(&self, open: usize, s: usize) -> Vec<usize> {
        self.family_index(open).families[s].clone()
    }

    /// The section over `open` with the given stalk components, if any.
    pub fn glue(&self, open: usize, family: &[usize]) -> Option<usize> {
        self.family_index(open).glue(family)
    }
}

fn check_diagram_shape(
    space: &FinSpace,
    stalk_count: usize,
    has_rho: impl Fn(usize, usize) -> bool,
    same_stalk: impl Fn(usize, usize) -> bool,
) -> Result<()> {
    if stalk_count != space.points() {
        return Err(Error::InvalidSheaf(format!(
            "{} stalks for {} points",
            stalk_count,
            space.points()
        )));
    }
    for x in 0..space.points() {
        for y in 0..space.points() {
            let (ux, uy) = (space.minimal_open(x), space.minimal_open(y));
            if x == y || uy & !ux != 0 {
                continue;
            }
            if ux == uy {
                if !same_stalk(x, y) {
                    return Err(Error::InvalidSheaf(format!(
                        "points {x} and {y} share a minimal open but not a stalk"
                    )));
                }
            } else if !has_rho(x, y) {
                return Err(Error::InvalidSheaf(format!("missing restriction from stalk {x} to stalk {y}")));
            }
        }
    }
    Ok(())
}

fn build_family_indices(space: &FinSpace, sizes: &[usize], rho: &dyn Fn(usize, usize, usize) -> usize) -> Vec<FamilyIndex> {
    (0..space.open_count())
        .map(|i| {
            let u = space.open(i);
            let pts = points_of(u);
            match (0..space.points()).find(|&x| space.minimal_open(x) == u) {
                Some(x) => {
                    let families = (0..sizes[x])
                        .map(|s| pts.iter().map(|&y| rho(x, y, s)).collect())
                        .collect();
                    FamilyIndex::new(pts, families)
                }
                None => {
                    let local: Vec<usize> = pts.iter().map(|&p| sizes[p]).collect();
                    let families = compatible_families(space, &pts, &local, rho);
                    FamilyIndex::new(pts, families)
                }
            }
        })
        .collect()
}

fn restrictions_from_families<T>(
    space: &FinSpace,
    indices: &[FamilyIndex],
    make: impl Fn(usize, usize, Vec<usize>) -> T,
) -> Result<BTreeMap<(usize, usize), T>> {
    let mut res = BTreeMap::new();
    for (i, j) in space.inclusions() {
        let sub = &indices[j].points;
        let map = indices[i]
            .families
            .iter()
            .map(|fam| {
                let r = indices[i].restrict_family(fam, sub);
                indices[j].glue(&r).ok_or_else(|| {
                    Error::InvalidSheaf(format!(
                        "restriction of a section from open {i} to open {j} is not a section; the stalk maps do not compose"
                    ))
                })
            })
            .collect::<Result<Vec<usize>>>()?;
        res.insert((i, j), make(i, j, map));
    }
    Ok(res)
}

/// Functoriality of restrictions, `F(∅) = 0`, and the gluing condition on
/// every open.
pub fn verify_sheaf(f: &RingSheaf) -> Report {
    let mut report = Report::new();
    let space = &f.space;
    if f.sections.len() != space.open_count() {
        report.fail(
            "sections per open",
            format!("{} section rings for {} opens", f.sections.len(), space.open_count()),
        );
        return report;
    }
    report.pass("sections per open");
    report.record(
        "empty sections are zero",
        if f.sections[0].is_zero_ring() {
            Ok(())
        } else {
            Err(format!("F(∅) has {} elements", f.sections[0].size()))
        },
    );
    let inclusions = space.inclusions();
    let mut present = Ok(());
    for &(i, j) in &inclusions {
        match f.res.get(&(i, j)) {
            None => {
                present = Err(format!("no restriction from open {i} to open {j}"));
                break;
            }
            Some(h) if *h.source() != f.sections[i] || *h.target() != f.sections[j] => {
                present = Err(format!("restriction {i}→{j} does not run between the section rings"));
                break;
            }
            _ => {}
        }
    }
    let ok = present.is_ok();
    report.record("restrictions present", present);
    if !ok {
        return report;
    }
    report.record(
        "restrictions are ring homs",
        inclusions
            .iter()
            .find_map(|&(i, j)| {
                let r = f.res[&(i, j)].verify();
                (!r.passed()).then(|| format!("{i}→{j}: {}", crate::equivfun::first_failure(&r)))
            })
            .map_or(Ok(()), Err),
    );
    report.record(
        "restriction to self is identity",
        (0..space.open_count())
            .find(|&i| f.res[&(i, i)].map().iter().enumerate().any(|(x, &y)| x != y))
            .map_or(Ok(()), |i| Err(format!("open {i}"))),
    );
    let mut compose = Ok(());
    'outer: for &(i, j) in &inclusions {
        for &(j2, k) in &inclusions {
            if j2 != j {
                continue;
            }
            let direct = &f.res[&(i, k)];
            let two = f.res[&(i, j)].then(&f.res[&(j, k)]);
            if direct.map() != two.map() {
                compose = Err(format!("{i}→{j}→{k} differs from {i}→{k}"));
                break 'outer;
            }
        }
    }
    let ok = compose.is_ok();
    report.record("restrictions compose", compose);
    if !ok {
        return report;
    }
    report.record("sheaf condition", gluing_witness(space, f.sections.len(), |i| f.sections[i].size(), |i, j, s| f.res[&(i, j)].apply(s)).map_or(Ok(()), Err));
    report
}

/// First open where sections fail to biject onto compatible families.
fn gluing_witness(
    space: &FinSpace,
    opens: usize,
    size: impl Fn(usize) -> usize,
    res: impl Fn(usize, usize, usize) -> usize,
) -> Option<String> {
    let min_idx: Vec<usize> = (0..space.points()).map(|x| space.minimal_open_index(x)).collect();
    let rho = |x: usize, y: usize, s: usize| res(min_idx[x], min_idx[y], s);
    for i in 0..opens {
        let pts = points_of(space.open(i));
        let sizes: Vec<usize> = pts.iter().map(|&p| size(min_idx[p])).collect();
        let families = compatible_families(space, &pts, &sizes, &rho);
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        for s in 0..size(i) {
            let fam: Vec<usize> = pts.iter().map(|&p| res(i, min_idx[p], s)).collect();
            if let Some(t) = seen.insert(fam, s) {
                return Some(format!(
                    "open {:?}: sections {t} and {s} have the same restrictions (not injective)",
                    pts
                ));
            }
        }
        if seen.len() != families.len() {
            let missing = families
                .iter()
                .find(|f| !seen.contains_key(*f))
                .cloned()
                .unwrap_or_default();
            return Some(format!(
                "open {:?}: compatible family {:?} is not glued from a section (not surjective)",
                pts, missing
            ));
        }
    }
    None
}

/// A sheaf of modules over a [`RingSheaf`].
#[derive(Clone, Debug)]
pub struct ModuleSheaf {
    rings: Arc<RingSheaf>,
    sections: Vec<Arc<FiniteModule>>,
    res: BTreeMap<(usize, usize), Vec<usize>>,
    cache: FamilyCache,
}

impl PartialEq for ModuleSheaf {
    fn eq(&self, other: &Self) -> bool {
        self.rings == other.rings && self.sections == other.sections && self.res == other.res
    }
}

impl Eq for ModuleSheaf {}

impl ModuleSheaf {
    pub fn new(rings: Arc<RingSheaf>, sections: Vec<Arc<FiniteModule>>, mut res: BTreeMap<(usize, usize), Vec<usize>>) -> Self {
        for (i, s) in sections.iter().enumerate() {
            res.entry((i, i)).or_insert_with(|| s.elements().collect());
        }
        let cache = FamilyCache::new(rings.space.open_count());
        ModuleSheaf {
            rings,
            sections,
            res,
            cache,
        }
    }

    pub fn zero(rings: Arc<RingSheaf>) -> Self {
        let sections = rings
            .sections
            .iter()
            .map(|r| Arc::new(FiniteModule::zero(r.clone())))
            .collect();
        let res = rings.space.inclusions().into_iter().map(|p| (p, vec![0])).collect();
        ModuleSheaf::new(rings, sections, res)
    }

    /// `O_X` as a module over itself.
    pub fn regular(rings: Arc<RingSheaf>) -> Self {
        let sections = rings
            .sections
            .iter()
            .map(|r| Arc::new(FiniteModule::regular(r.clone())))
            .collect();
        let res = rings.res.iter().map(|(&k, h)| (k, h.map().to_vec())).collect();
        ModuleSheaf::new(rings, sections, res)
    }

    /// The module sheaf with stalks `M_x` over the stalks of `rings` and
    /// restriction maps `mu[(x, y)]` for `U_y ⊊ U_x`.
    pub fn from_stalk_diagram(
        rings: Arc<RingSheaf>,
        stalks: Vec<Arc<FiniteModule>>,
        mu: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<Self> {
        let space = rings.space.clone();
        check_diagram_shape(&space, stalks.len(), |x, y| mu.contains_key(&(x, y)), |x, y| stalks[x] == stalks[y])?;
        for (x, m) in stalks.iter().enumerate() {
            if m.ring() != rings.stalk(x) {
                return Err(Error::InvalidSheaf(format!("module stalk {x} is not over the ring stalk")));
            }
        }
        let rho_fn = |x: usize, y: usize, s: usize| -> usize {
            if space.minimal_open(x) == space.minimal_open(y) {
                s
            } else {
                mu[&(x, y)][s]
            }
        };
        let sizes: Vec<usize> = stalks.iter().map(|m| m.size()).collect();
        let indices = build_family_indices(&space, &sizes, &rho_fn);
        let mut sections = Vec::with_capacity(space.open_count());
        for (i, index) in indices.iter().enumerate() {
            let u = space.open(i);
            match (0..space.points()).find(|&x| space.minimal_open(x) == u) {
                Some(x) => sections.push(stalks[x].clone()),
                None => {
                    let ring = rings.sections[i].clone();
                    let n = index.families.len();
                    let mods: Vec<&FiniteModule> = index.points.iter().map(|&p| &*stalks[p]).collect();
                    let mut add = vec![0; n * n];
                    let mut buf = vec![0; mods.len()];
                    for (a, fa) in index.families.iter().enumerate() {
                        for (b, fb) in index.families.iter().enumerate() {
                            for (k, m) in mods.iter().enumerate() {
                                buf[k] = m.add(fa[k], fb[k]);
                            }
                            add[a * n + b] = index.glue(&buf).expect("closed under addition");
                        }
                    }
                    let mut act = vec![0; ring.size() * n];
                    for r in ring.elements() {
                        let rf = rings.family(i, r);
                        for (a, fa) in index.families.iter().enumerate() {
                            for (k, m) in mods.iter().enumerate() {
                                buf[k] = m.act(rf[k], fa[k]);
                            }
                            act[r * n + a] = index.glue(&buf).ok_or_else(|| {
                                Error::InvalidSheaf("stalk maps are not compatible with the ring action".into())
                            })?;
                        }
                    }
                    sections.push(Arc::new(FiniteModule::from_flat_unchecked(ring, n, add, act)));
                }
            }
        }
        let res = restrictions_from_families(&space, &indices, |_, _, map| map)?;
        let sheaf = ModuleSheaf::new(rings, sections, res);
        for (i, index) in indices.into_iter().enumerate() {
            let _ = sheaf.cache.0[i].set(Arc::new(index));
        }
        let report = verify_module_sheaf(&sheaf);
        if let Some(c) = report.failures().next() {
            return Err(Error::InvalidSheaf(format!(
                "{}: {}",
                c.name,
                c.witness.clone().unwrap_or_default()
            )));
        }
        Ok(sheaf)
    }

    pub fn rings(&self) -> &Arc<RingSheaf> {
        &self.rings
    }

    pub fn space(&self) -> &Arc<FinSpace> {
        &self.rings.space
    }

    pub fn sections(&self, open: usize) -> &Arc<FiniteModule> {
        &self.sections[open]
    }

    pub fn all_sections(&self) -> &[Arc<FiniteModule>] {
        &self.sections
    }

    pub fn res(&self, from: usize, to: usize) -> &[usize] {
        &self.res[&(from, to)]
    }

    pub fn restrictions(&self) -> &BTreeMap<(usize, usize), Vec<usize>> {
        &self.res
    }

    pub fn stalk(&self, x: usize) -> &Arc<FiniteModule> {
        &self.sections[self.space().minimal_open_index(x)]
    }

    fn family_index(&self, open: usize) -> Arc<FamilyIndex> {
        self.cache.0[open]
            .get_or_init(|| {
                let space = self.space();
                let pts = points_of(space.open(open));
                let mins: Vec<usize> = pts.iter().map(|&x| space.minimal_open_index(x)).collect();
                let families = (0..self.sections[open].size())
                    .map(|s| mins.iter().map(|&m| self.res[&(open, m)][s]).collect())
                    .collect();
                Arc::new(FamilyIndex::new(pts, families))
            })
            .clone()
    }

    pub fn family(&self, open: usize, s: usize) -> Vec<usize> {
        self.family_index(open).families[s].clone()
    }

    pub fn glue(&self, open: usize, family: &[usize]) -> Option<usize> {
        self.family_index(open).glue(family)
    }
}

/// Module axioms per open, compatibility of restrictions with the ring
/// action, functoriality, `ℳ(∅) = 0` and gluing.
pub fn verify_module_sheaf(m: &ModuleSheaf) -> Report {
    let mut report = Report::new();
    let space = m.space().clone();
    let rings = &m.rings;
    if m.sections.len() != space.open_count() {
        report.fail("sections per open", "wrong number of section modules");
        return report;
    }
    report.pass("sections per open");
    report.record(
        "modules over section rings",
        (0..space.open_count())
            .find_map(|i| {
                if m.sections[i].ring() != &rings.sections[i] {
                    return Some(format!("open {i}: module is over a different ring"));
                }
                let r = m.sections[i].verify();
                (!r.passed()).then(|| format!("open {i}: {}", crate::equivfun::first_failure(&r)))
            })
            .map_or(Ok(()), Err),
    );
    report.record(
        "empty sections are zero",
        if m.sections[0].is_zero() { Ok(()) } else { Err("ℳ(∅) is nonzero".into()) },
    );
    let inclusions = space.inclusions();
    let mut maps = Ok(());
    'outer: for &(i, j) in &inclusions {
        let Some(map) = m.res.get(&(i, j)) else {
            maps = Err(format!("no restriction from open {i} to open {j}"));
            break;
        };
        let (s, t) = (&m.sections[i], &m.sections[j]);
        if map.len() != s.size() || map.iter().any(|&y| y >= t.size()) {
            maps = Err(format!("restriction {i}→{j} is malformed"));
            break;
        }
        let rr = &rings.res[&(i, j)];
        for a in s.elements() {
            for b in s.elements() {
                if map[s.add(a, b)] != t.add(map[a], map[b]) {
                    maps = Err(format!("restriction {i}→{j} is not additive at ({a}, {b})"));
                    break 'outer;
                }
            }
            for r in rings.sections[i].elements() {
                if map[s.act(r, a)] != t.act(rr.apply(r), map[a]) {
                    maps = Err(format!("restriction {i}→{j} does not respect the action of {r} on {a}"));
                    break 'outer;
                }
            }
        }
    }
    let ok = maps.is_ok();
    report.record("restrictions are module maps", maps);
    if !ok {
        return report;
    }
    let mut compose = Ok(());
    'c: for &(i, j) in &inclusions {
        for &(j2, k) in &inclusions {
            if j2 == j && (0..m.sections[i].size()).any(|s| m.res[&(j, k)][m.res[&(i, j)][s]] != m.res[&(i, k)][s]) {
                compose = Err(format!("{i}→{j}→{k} differs from {i}→{k}"));
                break 'c;
            }
        }
    }
    report.record(
        "restriction to self is identity",
        (0..space.open_count())
            .find(|&i| m.res[&(i, i)].iter().enumerate().any(|(x, &y)| x != y))
            .map_or(Ok(()), |i| Err(format!("open {i}"))),
    );
    let ok = compose.is_ok();
    report.record("restrictions compose", compose);
    if !ok {
        return report;
    }
    report.record(
        "sheaf condition",
        gluing_witness(&space, m.sections.len(), |i| m.sections[i].size(), |i, j, s| m.res[&(i, j)][s]).map_or(Ok(()), Err),
    );
    report
}

/// A continuous map with a comorphism `f#_V: O_Y(V) → O_X(f⁻¹V)` per open
/// `V` of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingedSpaceMorphism {
    pub source: Arc<RingSheaf>,
    pub target: Arc<RingSheaf>,
    pub cmap: ContinuousMap,
    pub comorph: Vec<RingHom>,
}

impl RingedSpaceMorphism {
    pub fn identity(x: &Arc<RingSheaf>) -> Self {
        RingedSpaceMorphism {
            source: x.clone(),
            target: x.clone(),
            cmap: ContinuousMap::identity(x.space.clone()),
            comorph: x.sections.iter().map(|r| RingHom::identity(r.clone())).collect(),
        }
    }

    /// Open index of `f⁻¹V` in the source.
    pub fn preimage_open(&self, v: usize) -> usize {
        self.source
            .space
            .open_index(self.cmap.preimage(self.target.space.open(v)))
            .expect("continuous")
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &RingedSpaceMorphism) -> RingedSpaceMorphism {
        let cmap = self.cmap.then(&next.cmap);
        let comorph = (0..next.target.space.open_count())
            .map(|w| next.comorph[w].then(&self.comorph[next.preimage_open(w)]))
            .collect();
        RingedSpaceMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            cmap,
            comorph,
        }
    }

    /// `f#_y: O_{Y,y} → (f_*O_X)_y`.
    pub fn stalk_map_at_target(&self, y: usize) -> &RingHom {
        &self.comorph[self.target.space.minimal_open_index(y)]
    }

    /// `f#_x: O_{Y,f(x)} → O_{X,x}`.
    pub fn stalk_map(&self, x: usize) -> RingHom {
        let v = self.target.space.minimal_open_index(self.cmap.map[x]);
        let u = self.preimage_open(v);
        self.comorph[v].then(self.source.res(u, self.source.space.minimal_open_index(x)))
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self.cmap.map.iter().enumerate().all(|(x, &y)| x == y)
            && self
                .comorph
                .iter()
                .all(|h| h.map().iter().enumerate().all(|(x, &y)| x == y))
    }

    pub fn is_bijective(&self) -> bool {
        self.cmap.is_injective() && self.cmap.is_surjective() && self.comorph.iter().all(RingHom::is_bijective)
    }

    pub fn verify(&self) -> Report {
        verify_morphism(self)
    }
}

/// Continuity, comorphisms between the right rings, and compatibility with
/// restrictions.
pub fn verify_morphism(f: &RingedSpaceMorphism) -> Report {
    let mut report = Report::new();
    let cont = f.cmap.verify();
    if !cont.passed() || f.cmap.source != f.source.space || f.cmap.target != f.target.space {
        report.fail("continuous map", crate::equivfun::first_failure(&cont));
        return report;
    }
    report.pass("continuous map");
    let (x, y) = (&f.source, &f.target);
    if f.comorph.len() != y.space.open_count() {
        report.fail("comorphism per open", format!("{} maps for {} opens", f.comorph.len(), y.space.open_count()));
        return report;
    }
    let mut shape = Ok(());
    for v in 0..y.space.open_count() {
        let u = f.preimage_open(v);
        let h = &f.comorph[v];
        if h.source() != y.sections(v) || h.target() != x.sections(u) {
            shape = Err(format!("comorphism at open {v} does not run O_Y(V) → O_X(f⁻¹V)"));
            break;
        }
        let r = h.verify();
        if !r.passed() {
            shape = Err(format!("open {v}: {}", crate::equivfun::first_failure(&r)));
            break;
        }
    }
    let ok = shape.is_ok();
    report.record("comorphisms are ring homs", shape);
    if !ok {
        return report;
    }
    let mut commute = Ok(());
    'outer: for (v, w) in y.space.inclusions() {
        let (u, t) = (f.preimage_open(v), f.preimage_open(w));
        let ry = y.res(v, w);
        let rx = x.res(u, t);
        for s in y.sections(v).elements() {
            if rx.apply(f.comorph[v].apply(s)) != f.comorph[w].apply(ry.apply(s)) {
                commute = Err(format!("opens {v}⊇{w}, section {s}"));
                break 'outer;
            }
        }
    }
    report.record("commutes with restrictions", commute);
    report
}

/// `(f_*F)(V) = F(f⁻¹V)`.
pub fn pushforward(f: &ContinuousMap, sheaf: &RingSheaf) -> RingSheaf {
    let tgt = &f.target;
    let pre: Vec<usize> = tgt
        .opens()
        .iter()
        .map(|&v| sheaf.space.open_index(f.preimage(v)).expect("continuous"))
        .collect();
    let sections = pre.iter().map(|&u| sheaf.sections[u].clone()).collect();
    let res = tgt
        .inclusions()
        .into_iter()
        .map(|(v, w)| ((v, w), sheaf.res[&(pre[v], pre[w])].clone()))
        .collect();
    RingSheaf::new(tgt.clone(), sections, res)
}

/// Stalk of a ring sheaf at `x`.
pub fn stalk(f: &RingSheaf, x: usize) -> Arc<FiniteRing> {
    f.stalk(x).clone()
}

/// For a closed immersion, the canonical maps `(f_*O_X)_{f(x)} → O_{X,x}`
/// are isomorphisms.
pub fn check_stalk_comparison(f: &RingedSpaceMorphism) -> Report {
    let mut report = Report::new();
    let x = &f.source;
    report.record(
        "canonical stalk maps bijective",
        (0..x.space.points())
            .find_map(|p| {
                let v = f.target.space.minimal_open_index(f.cmap.map[p]);
                let u = f.preimage_open(v);
                let r = x.res(u, x.space.minimal_open_index(p));
                (!r.is_bijective()).then(|| format!("point {p}"))
            })
            .map_or(Ok(()), Err),
    );
    report
}

/// A closed immersion of spaces whose stalk maps are surjective.
pub fn check_closed_immersion(f: &RingedSpaceMorphism) -> Report {
    let mut report = Report::new();
    report.record(
        "closed immersion of spaces",
        if is_closed_immersion_space(&f.cmap) {
            Ok(())
        } else {
            Err(format!("point map {:?} is not a homeomorphism onto a closed subset", f.cmap.map))
        },
    );
    report.record(
        "stalk maps surjective",
        (0..f.source.space.points())
            .find(|&x| !f.stalk_map(x).is_surjective())
            .map_or(Ok(()), |x| Err(format!("f# at point {x} is not surjective"))),
    );
    report
}

/// `I_f = ker(f#: O_Y → f_*O_X)` as a module sheaf over `O_Y`.
pub fn kernel_sheaf(f: &RingedSpaceMorphism) -> Result<ModuleSheaf> {
    let y = &f.target;
    let ideals: Vec<_> = f.comorph.iter().map(kernel).collect();
    let sections = ideals.iter().map(|i| Arc::new(FiniteModule::from_ideal(i))).collect();
    let res = y
        .space
        .inclusions()
        .into_iter()
        .map(|(v, w)| {
            let r = y.res(v, w);
            let map = ideals[v]
                .elements()
                .iter()
                .map(|&k| ideals[w].position(r.apply(k)).expect("restriction preserves kernels"))
                .collect();
            ((v, w), map)
        })
        .collect();
    let sheaf = ModuleSheaf::new(y.clone(), sections, res);
    let report = verify_module_sheaf(&sheaf);
    if let Some(c) = report.failures().next() {
        return Err(Error::InvalidSheaf(format!("kernel sheaf: {}: {}", c.name, c.witness.clone().unwrap_or_default())));
    }
    Ok(sheaf)
}

/// `Spec` of a finite ring: one point per primitive idempotent, discrete
/// topology, and `O(U) = ∏_{e ∈ U} R·e`.
#[derive(Clone, Debug)]
pub struct SpecRing {
    pub ring: Arc<FiniteRing>,
    pub idempotents: Vec<usize>,
    /// Inclusion of each local factor `R·e` into `R`.
    pub inclusions: Vec<Vec<usize>>,
    pub sheaf: Arc<RingSheaf>,
    /// `R → O(Spec R)`, `r ↦ (r·e)_e`.
    pub global: RingHom,
}

pub fn spec_finite_ring(r: &Arc<FiniteRing>) -> Result<SpecRing> {
    if r.is_zero_ring() {
        return Err(Error::Precondition("Spec of the zero ring is empty; a nonzero ring is required".into()));
    }
    let report = r.verify();
    if let Some(c) = report.failures().next() {
        return Err(Error::InvalidRing {
            axiom: c.name.clone(),
            witness: c.witness.clone().unwrap_or_default(),
        });
    }
    let idempotents = r.primitive_idempotents();
    let mut stalks = Vec::new();
    let mut inclusions = Vec::new();
    for &e in &idempotents {
        let (corner, incl) = r.corner(e);
        if !corner.is_local() {
            return Err(Error::Precondition(format!("local factor at idempotent {e} is not local")));
        }
        stalks.push(Arc::new(corner));
        inclusions.push(incl);
    }
    let space = Arc::new(FinSpace::discrete(idempotents.len()));
    let sheaf = Arc::new(RingSheaf::from_stalk_diagram(space, stalks, BTreeMap::new())?);
    let global_ring = sheaf.global_sections().clone();
    let full = sheaf.space.open_index(sheaf.space.full()).expect("whole space");
    let map = r
        .elements()
        .map(|x| {
            let fam: Vec<usize> = idempotents
                .iter()
                .zip(&inclusions)
                .map(|(&e, incl)| incl.binary_search(&r.mul(x, e)).expect("in the corner"))
                .collect();
            sheaf.glue(full, &fam).expect("product ring")
        })
        .collect();
    let global = RingHom::new_unchecked(r.clone(), global_ring, map);
    if !global.verify().passed() || !global.is_bijective() {
        return Err(Error::TheoremFault("R is not the ring of global sections of its Spec".into()));
    }
    Ok(SpecRing {
        ring: r.clone(),
        idempotents,
        inclusions,
        sheaf,
        global,
    })
}

impl SpecRing {
    /// The module sheaf `e·M` on `Spec R` of an `R`-module `M`.
    pub fn localize(&self, m: &FiniteModule) -> Result<ModuleSheaf> {
        if **m.ring() != *self.ring {
            return Err(Error::Precondition("module must be over the ring".into()));
        }
        let stalks = self
            .idempotents
            .iter()
            .zip(&self.inclusions)
            .enumerate()
            .map(|(x, (&e, incl))| {
                let mut els: Vec<usize> = m.elements().map(|v| m.act(e, v)).collect();
                els.sort_unstable();
                els.dedup();
                let n = els.len();
                let pos = |v: usize| els.binary_search(&v).expect("closed");
                let ring = self.sheaf.stalk(x).clone();
                let mut add = vec![0; n * n];
                for (i, &a) in els.iter().enumerate() {
                    for (j, &b) in els.iter().enumerate() {
                        add[i * n + j] = pos(m.add(a, b));
                    }
                }
                let mut act = vec![0; ring.size() * n];
                for (c, &rc) in incl.iter().enumerate() {
                    for (i, &a) in els.iter().enumerate() {
                        act[c * n + i] = pos(m.act(rc, a));
                    }
                }
                Arc::new(FiniteModule::from_flat_unchecked(ring, n, add, act))
            })
            .collect();
        ModuleSheaf::from_stalk_diagram(self.sheaf.clone(), stalks, BTreeMap::new())
    }
}

/// `X ⊕ ℳ` with `i_X: X → X ⊕ ℳ` (identity on points, projection on
/// sections) and `α(m) = (0, m)` per open.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub base: Arc<RingSheaf>,
    pub module: Arc<ModuleSheaf>,
    pub sheaf: Arc<RingSheaf>,
    pub i_x: RingedSpaceMorphism,
    pub alpha: Vec<Vec<usize>>,
}

impl DirectSum {
    pub fn extension_at(&self, open: usize) -> SquareZeroExtension {
        SquareZeroExtension::new(
            self.i_x.comorph[open].clone(),
            self.module.sections(open).clone(),
            self.alpha[open].clone(),
        )
    }
}

pub fn direct_sum_space(x: &Arc<RingSheaf>, m: &Arc<ModuleSheaf>) -> Result<DirectSum> {
    if m.rings != *x {
        return Err(Error::Precondition("module sheaf must be over the structure sheaf".into()));
    }
    let space = x.space.clone();
    let sections: Vec<Arc<FiniteRing>> = (0..space.open_count())
        .map(|i| Arc::new(trivial_extension_ring(x.sections(i), m.sections(i))))
        .collect();
    let res = space
        .inclusions()
        .into_iter()
        .map(|(i, j)| {
            let (nm, nm2) = (m.sections(i).size(), m.sections(j).size());
            let rx = x.res(i, j);
            let rm = m.res(i, j);
            let map = sections[i]
                .elements()
                .map(|p| rx.apply(p / nm) * nm2 + rm[p % nm])
                .collect();
            ((i, j), RingHom::new_unchecked(sections[i].clone(), sections[j].clone(), map))
        })
        .collect();
    let sheaf = Arc::new(RingSheaf::new(space.clone(), sections, res));
    let report = verify_sheaf(&sheaf);
    if let Some(c) = report.failures().next() {
        return Err(Error::InvalidSheaf(format!("X ⊕ ℳ: {}: {}", c.name, c.witness.clone().unwrap_or_default())));
    }
    let comorph = (0..space.open_count())
        .map(|i| trivial_extension(x.sections(i), m.sections(i)).f)
        .collect();
    let i_x = RingedSpaceMorphism {
        source: x.clone(),
        target: sheaf.clone(),
        cmap: ContinuousMap::identity(space.clone()),
        comorph,
    };
    let alpha = (0..space.open_count()).map(|i| m.sections(i).elements().collect()).collect();
    Ok(DirectSum {
        base: x.clone(),
        module: m.clone(),
        sheaf,
        i_x,
        alpha,
    })
}

/// `Y ∐_X Z` with structure sheaf `(j_Y)_*O_Y ×_{(j_Y f)_*O_X} (j_Z)_*O_Z`.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub sheaf: Arc<RingSheaf>,
    pub j_y: RingedSpaceMorphism,
    pub j_z: RingedSpaceMorphism,
    /// The fiber product realizing the sections over each open.
    pub sections: Vec<FiberProduct>,
}

impl Coproduct {
    /// `X → Y ∐_X Z`.
    pub fn structure_map(&self, f: &RingedSpaceMorphism) -> RingedSpaceMorphism {
        f.then(&self.j_y)
    }
}

pub fn coproduct_under_x(f: &RingedSpaceMorphism, g: &RingedSpaceMorphism) -> Result<Coproduct> {
    if f.source != g.source {
        return Err(Error::Precondition("coproduct under X needs maps out of one space".into()));
    }
    for (name, h) in [("first", f), ("second", g)] {
        let r = check_closed_immersion(h);
        if !r.passed() {
            return Err(Error::Precondition(format!(
                "{name} map is not a closed immersion: {}",
                crate::equivfun::first_failure(&r)
            )));
        }
    }
    let p = pushout(&f.cmap, &g.cmap)?;
    let space = p.space.clone();
    let (y, z) = (&f.target, &g.target);
    let mut sections = Vec::with_capacity(space.open_count());
    let mut opens_yz = Vec::with_capacity(space.open_count());
    for &w in space.opens() {
        let v1 = y.space.open_index(p.j_y.preimage(w)).expect("continuous");
        let v2 = z.space.open_index(p.j_z.preimage(w)).expect("continuous");
        if f.preimage_open(v1) != g.preimage_open(v2) {
            return Err(Error::TheoremFault("pushout square does not commute".into()));
        }
        sections.push(fiber_product(&f.comorph[v1], &g.comorph[v2])?);
        opens_yz.push((v1, v2));
    }
    let res = space
        .inclusions()
        .into_iter()
        .map(|(a, b)| {
            let ((v1, v2), (w1, w2)) = (opens_yz[a], opens_yz[b]);
            let (ry, rz) = (y.res(v1, w1), z.res(v2, w2));
            let map = sections[a]
                .pairs()
                .iter()
                .map(|&(s, t)| {
                    sections[b]
                        .index_of(ry.apply(s), rz.apply(t))
                        .expect("restrictions commute over X")
                })
                .collect();
            ((a, b), RingHom::new_unchecked(sections[a].ring.clone(), sections[b].ring.clone(), map))
        })
        .collect();
    let rings = sections.iter().map(|s| s.ring.clone()).collect();
    let sheaf = Arc::new(RingSheaf::new(space.clone(), rings, res));
    let report = verify_sheaf(&sheaf);
    if let Some(c) = report.failures().next() {
        return Err(Error::InvalidSheaf(format!(
            "coproduct: {}: {}",
            c.name,
            c.witness.clone().unwrap_or_default()
        )));
    }
    let j_y = RingedSpaceMorphism {
        source: y.clone(),
        target: sheaf.clone(),
        cmap: p.j_y.clone(),
        comorph: sections.iter().map(|s| s.first.clone()).collect(),
    };
    let j_z = RingedSpaceMorphism {
        source: z.clone(),
        target: sheaf.clone(),
        cmap: p.j_z.clone(),
        comorph: sections.iter().map(|s| s.second.clone()).collect(),
    };
    Ok(Coproduct {
        sheaf,
        j_y,
        j_z,
        sections,
    })
}

/// Counit, comultiplication and coinverse of `i_X: X → X ⊕ ℳ`.
#[derive(Clone, Debug)]
pub struct Cogroup {
    pub sum: DirectSum,
    pub coproduct: Coproduct,
    /// `e_ℳ: X ⊕ ℳ → X`, `a ↦ (a, 0)` on sections.
    pub counit: RingedSpaceMorphism,
    /// `+_ℳ: X ⊕ ℳ → (X ⊕ ℳ) ∐_X (X ⊕ ℳ)`, `((a, m₁), (a, m₂)) ↦ (a, m₁ + m₂)`.
    pub comult: RingedSpaceMorphism,
    /// `inv_ℳ: X ⊕ ℳ → X ⊕ ℳ`, `(a, m) ↦ (a, -m)`.
    pub coinv: RingedSpaceMorphism,
}

pub(crate) fn counit(sum: &DirectSum) -> RingedSpaceMorphism {
    let x = &sum.base;
    let comorph = (0..x.space.open_count())
        .map(|u| {
            let nm = sum.module.sections(u).size();
            let map = x.sections(u).elements().map(|a| a * nm).collect();
            RingHom::new_unchecked(x.sections(u).clone(), sum.sheaf.sections(u).clone(), map)
        })
        .collect();
    RingedSpaceMorphism {
        source: sum.sheaf.clone(),
        target: x.clone(),
        cmap: ContinuousMap::identity(x.space.clone()),
        comorph,
    }
}

pub fn cogroup_structure(x: &Arc<RingSheaf>, m: &Arc<ModuleSheaf>) -> Result<Cogroup> {
    let sum = direct_sum_space(x, m)?;
    let coproduct = coproduct_under_x(&sum.i_x, &sum.i_x)?;
    let space = x.space.clone();
    let p_space = coproduct.sheaf.space.clone();
    if coproduct.j_y.cmap.map.iter().enumerate().any(|(a, &b)| a != b) || *p_space != *space {
        return Err(Error::TheoremFault("coproduct of i_X with itself is not X on points".into()));
    }
    let counit = counit(&sum);
    let comult_comorph = (0..p_space.open_count())
        .map(|w| {
            let u = space.open_index(p_space.open(w)).expect("same topology");
            let nm = m.sections(u).size();
            let mods = m.sections(u);
            let fp = &coproduct.sections[w];
            let map = fp
                .pairs()
                .iter()
                .map(|&(s, t)| (s / nm) * nm + mods.add(s % nm, t % nm))
                .collect();
            RingHom::new_unchecked(fp.ring.clone(), sum.sheaf.sections(u).clone(), map)
        })
        .collect();
    let comult = RingedSpaceMorphism {
        source: sum.sheaf.clone(),
        target: coproduct.sheaf.clone(),
        cmap: ContinuousMap {
            source: space.clone(),
            target: p_space.clone(),
            map: (0..space.points()).collect(),
        },
        comorph: comult_comorph,
    };
    let coinv_comorph = (0..space.open_count())
        .map(|u| {
            let nm = m.sections(u).size();
            let mods = m.sections(u);
            let ring = sum.sheaf.sections(u);
            let map = ring.elements().map(|s| (s / nm) * nm + mods.neg(s % nm)).collect();
            RingHom::new_unchecked(ring.clone(), ring.clone(), map)
        })
        .collect();
    let coinv = RingedSpaceMorphism {
        source: sum.sheaf.clone(),
        target: sum.sheaf.clone(),
        cmap: ContinuousMap::identity(space.clone()),
        comorph: coinv_comorph,
    };
    Ok(Cogroup {
        sum,
        coproduct,
        counit,
        comult,
        coinv,
    })
}

impl Cogroup {
    /// The openwise group object read off the comorphisms over `open`.
    pub fn group_object_at(&self, open: usize) -> GroupObjectStructure {
        let space = self.sum.base.space.clone();
        let w = self.coproduct.sheaf.space.open_index(space.open(open)).expect("same topology");
        let base = trivial_extension(self.sum.base.sections(open), self.sum.module.sections(open));
        GroupObjectStructure {
            base,
            pair: self.coproduct.sections[w].clone(),
            e: self.counit.comorph[open].map().to_vec(),
            plus: self.comult.comorph[w].map().to_vec(),
            inv: self.coinv.comorph[open].map().to_vec(),
        }
    }
}

/// Morphism checks for the three structure maps, then coassociativity,
/// counit, coinverse and cocommutativity evaluated openwise.
pub fn verify_cogroup(c: &Cogroup) -> Report {
    let mut report = Report::new();
    for (name, mor) in [("counit", &c.counit), ("comultiplication", &c.comult), ("coinverse", &c.coinv)] {
        let r = mor.verify();
        report.record(
            format!("{name} is a morphism"),
            if r.passed() { Ok(()) } else { Err(crate::equivfun::first_failure(&r)) },
        );
        report.record(
            format!("{name} is the identity on points"),
            if mor.cmap.map.iter().enumerate().all(|(a, &b)| a == b) {
                Ok(())
            } else {
                Err(format!("point map {:?}", mor.cmap.map))
            },
        );
    }
    let diagrams = [
        ("coassociativity", &["associativity"][..]),
        ("counit", &["left unit", "right unit"][..]),
        ("coinverse", &["inverse"][..]),
        ("cocommutativity", &["commutativity"][..]),
        (
            "comorphisms are ring maps over O_X",
            &["unit is a ring map over A", "addition is a ring map over A", "inverse is a ring map over A"][..],
        ),
    ];
    let space = c.sum.base.space.clone();
    let mut failures: Vec<Option<String>> = vec![None; diagrams.len()];
    let mut agree = Ok(());
    for u in 0..space.open_count() {
        let g = c.group_object_at(u);
        let r = verify_group_object(&g);
        for (k, (_, names)) in diagrams.iter().enumerate() {
            if failures[k].is_some() {
                continue;
            }
            if let Some(check) = names
                .iter()
                .filter_map(|n| r.find(n))
                .find(|ch| ch.verdict == Verdict::Fail)
            {
                failures[k] = Some(format!(
                    "open {:?}: {}: {}",
                    points_of(space.open(u)),
                    check.name,
                    check.witness.clone().unwrap_or_default()
                ));
            }
        }
        if agree.is_ok() {
            let reference = group_object(c.sum.base.sections(u), c.sum.module.sections(u));
            if reference.e != g.e || reference.plus != g.plus || reference.inv != g.inv {
                agree = Err(format!("open {:?}", points_of(space.open(u))));
            }
        }
    }
    for (k, (name, _)) in diagrams.iter().enumerate() {
        report.record(*name, failures[k].take().map_or(Ok(()), Err));
    }
    report.record("agrees with the openwise group object", agree);
    report
}

/// The coaction target `(X ⊕ ℳ) ∐_X Y` of a closed immersion `f: X → Y`,
/// relabeled onto the points of `Y`.
#[derive(Clone, Debug)]
pub struct CoactionTarget {
    pub f: RingedSpaceMorphism,
    pub sum: DirectSum,
    /// Over each open `V` of `Y`: `(O_X(f⁻¹V) ⊕ ℳ(f⁻¹V)) ×_{O_X(f⁻¹V)} O_Y(V)`.
    pub sections: Vec<FiberProduct>,
    pub sheaf: Arc<RingSheaf>,
    /// `X ⊕ ℳ → C`.
    pub j_sum: RingedSpaceMorphism,
    /// `Y → C`, the identity on points.
    pub j_y: RingedSpaceMorphism,
}

pub fn coaction_target(f: &RingedSpaceMorphism, m: &Arc<ModuleSheaf>) -> Result<CoactionTarget> {
    let sum = direct_sum_space(&f.source, m)?;
    let cp = coproduct_under_x(&sum.i_x, f)?;
    let y = &f.target;
    let to_p = &cp.j_z.cmap.map;
    if !cp.j_z.cmap.is_injective() || !cp.j_z.cmap.is_surjective() {
        return Err(Error::TheoremFault("Y does not map bijectively onto the coproduct".into()));
    }
    // open V of Y ↔ open j(V) of the pushout
    let p_space = cp.sheaf.space.clone();
    let mut old_index = Vec::with_capacity(y.space.open_count());
    for &v in y.space.opens() {
        let image = points_of(v).iter().fold(0u64, |acc, &q| acc | 1 << to_p[q]);
        match p_space.open_index(image) {
            Some(w) => old_index.push(w),
            None => return Err(Error::TheoremFault("coproduct topology differs from that of Y".into())),
        }
    }
    if p_space.open_count() != y.space.open_count() {
        return Err(Error::TheoremFault("coproduct topology differs from that of Y".into()));
    }
    let sections: Vec<FiberProduct> = old_index.iter().map(|&w| cp.sections[w].clone()).collect();
    let res = y
        .space
        .inclusions()
        .into_iter()
        .map(|(v, w)| ((v, w), cp.sheaf.res(old_index[v], old_index[w]).clone()))
        .collect();
    let sheaf = Arc::new(RingSheaf::new(
        y.space.clone(),
        sections.iter().map(|s| s.ring.clone()).collect(),
        res,
    ));
    let j_sum = RingedSpaceMorphism {
        source: sum.sheaf.clone(),
        target: sheaf.clone(),
        cmap: ContinuousMap {
            source: f.source.space.clone(),
            target: y.space.clone(),
            map: f.cmap.map.clone(),
        },
        comorph: old_index.iter().map(|&w| cp.j_y.comorph[w].clone()).collect(),
    };
    let j_y = RingedSpaceMorphism {
        source: y.clone(),
        target: sheaf.clone(),
        cmap: ContinuousMap::identity(y.space.clone()),
        comorph: old_index.iter().map(|&w| cp.j_z.comorph[w].clone()).collect(),
    };
    Ok(CoactionTarget {
        f: f.clone(),
        sum,
        sections,
        sheaf,
        j_sum,
        j_y,
    })
}

/// The morphism `θ: (X ⊕ ℳ) ∐_X Y → Y` induced by `f ∘ e_ℳ` and `id_Y`:
/// identity on points, `s ↦ ((f#(s), 0), s)` on sections.
pub fn theta(c: &CoactionTarget) -> RingedSpaceMorphism {
    let y = &c.f.target;
    let comorph = (0..y.space.open_count())
        .map(|v| {
            let u = c.f.preimage_open(v);
            let nm = c.sum.module.sections(u).size();
            let fp = &c.sections[v];
            let map = y
                .sections(v)
                .elements()
                .map(|s| {
                    fp.index_of(c.f.comorph[v].apply(s) * nm, s)
                        .expect("(f#(s), 0) lies over f#(s)")
                })
                .collect();
            RingHom::new_unchecked(y.sections(v).clone(), c.sheaf.sections(v).clone(), map)
        })
        .collect();
    RingedSpaceMorphism {
        source: c.sheaf.clone(),
        target: y.clone(),
        cmap: ContinuousMap::identity(y.space.clone()),
        comorph,
    }
}

/// `θ ∘ j_Y = id_Y` and `θ ∘ j_{X⊕ℳ} = f ∘ e_ℳ`.
pub fn check_theta_triangles(c: &CoactionTarget) -> Report {
    let mut report = Report::new();
    let th = theta(c);
    let r = th.verify();
    report.record("theta is a morphism", if r.passed() { Ok(()) } else { Err(crate::equivfun::first_failure(&r)) });
    let left = c.j_y.then(&th);
    report.record(
        "theta after j_Y is the identity",
        if left.is_identity() { Ok(()) } else { Err("θ ∘ j_Y ≠ id_Y".into()) },
    );
    let lhs = c.j_sum.then(&th);
    let rhs = counit(&c.sum).then(&c.f);
    report.record(
        "theta after j_X⊕ℳ is f after the counit",
        if lhs.cmap.map == rhs.cmap.map && lhs.comorph == rhs.comorph {
            Ok(())
        } else {
            Err("θ ∘ j_{X⊕ℳ} ≠ f ∘ e_ℳ".into())
        },
    );
    report
}
