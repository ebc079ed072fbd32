//! First order thickenings, ℳ-cotorsors, the functor `Φ` between them and an
//! exhaustive check that `Φ` is an equivalence.
//!
//! Thickenings and cotorsors over `X` are enumerated stalkwise (extensions
//! and torsors of each stalk) and glued into sheaves on the space of `X`.

use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use crate::equivfun::{first_failure, psi, EquivalenceReport, InstanceCounts, PairCount, Tally};
use crate::exal::{
    classify_extensions, enumerate_exal_morphisms_with_budget, enumerate_extensions_with_budget, trivial_extension,
    verify_exal_morphism, verify_extension, ExalMorphism, SquareZeroExtension,
};
use crate::finalg::{enumerate_homs_with_budget, kernel, RingHom};
use crate::finspace::points_of;
use crate::grouptor::{
    check_associativity_lemma, check_kernel_lemma, check_translation_lemma, enumerate_torsor_morphisms_with_budget,
    enumerate_torsor_structures_with_budget, verify_torsor, verify_torsor_morphism, ActionDomain, Torsor,
    TorsorMorphism,
};
use crate::limits::Budget;
use crate::report::Report;
use crate::sheafspace::{
    check_closed_immersion, check_theta_triangles, coaction_target, theta, verify_morphism, CoactionTarget, Mode,
    ModuleSheaf, RingSheaf, RingedSpaceMorphism,
};
use crate::{Error, Limits, Result};

/// A surjective closed immersion `f: X → Y` with `α_f: f_*ℳ ≅ I_f`, stored
/// as one map `ℳ(f⁻¹V) → O_Y(V)` per open `V` of `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstOrderThickening {
    pub f: RingedSpaceMorphism,
    pub module: Arc<ModuleSheaf>,
    pub alpha: Vec<Vec<usize>>,
}

impl FirstOrderThickening {
    /// The extension `O_Y(V) → O_X(f⁻¹V)` with its module identification.
    pub fn section_extension(&self, v: usize) -> SquareZeroExtension {
        let u = self.f.preimage_open(v);
        SquareZeroExtension::new(self.f.comorph[v].clone(), self.module.sections(u).clone(), self.alpha[v].clone())
    }

    /// `(f#_x, α_{f,x})`, when `f⁻¹(U_{f(x)}) = U_x`.
    pub fn stalk_extension(&self, x: usize) -> Option<SquareZeroExtension> {
        let v = minimal_target_open(&self.f, x);
        (self.f.preimage_open(v) == self.f.source.space().minimal_open_index(x)).then(|| self.section_extension(v))
    }
}

fn minimal_target_open(f: &RingedSpaceMorphism, x: usize) -> usize {
    f.target.space().minimal_open_index(f.cmap.map[x])
}

/// The trivial thickening `i_X: X → X ⊕ ℳ`.
pub fn trivial_thickening(x: &Arc<RingSheaf>, m: &Arc<ModuleSheaf>) -> Result<FirstOrderThickening> {
    let ds = crate::sheafspace::direct_sum_space(x, m)?;
    Ok(FirstOrderThickening {
        f: ds.i_x,
        module: m.clone(),
        alpha: ds.alpha,
    })
}

pub fn verify_thickening(t: &FirstOrderThickening) -> Report {
    let mut report = Report::new();
    let f = &t.f;
    let r = verify_morphism(f);
    report.record("f is a morphism", if r.passed() { Ok(()) } else { Err(first_failure(&r)) });
    if !r.passed() {
        return report;
    }
    if **t.module.rings() != *f.source {
        report.fail("module over X", "ℳ is not a module sheaf over O_X");
        return report;
    }
    report.pass("module over X");
    report.record(
        "surjective on points",
        if f.cmap.is_surjective() {
            Ok(())
        } else {
            Err(format!(
                "points {:?} of Y are missed",
                (0..f.target.space().points())
                    .filter(|y| !f.cmap.map.contains(y))
                    .collect::<Vec<_>>()
            ))
        },
    );
    let ci = check_closed_immersion(f);
    report.record("closed immersion", if ci.passed() { Ok(()) } else { Err(first_failure(&ci)) });
    let y = &f.target;
    let well_formed = t.alpha.len() == y.space().open_count()
        && (0..y.space().open_count()).all(|v| {
            t.alpha[v].len() == t.module.sections(f.preimage_open(v)).size()
                && t.alpha[v].iter().all(|&b| b < y.sections(v).size())
        });
    if !well_formed {
        report.fail("alpha well-formed", "α does not map ℳ(f⁻¹V) into O_Y(V) for every open V");
        return report;
    }
    report.pass("alpha well-formed");
    let mut commute = Ok(());
    'outer: for (v, w) in y.space().inclusions() {
        let (u, s) = (f.preimage_open(v), f.preimage_open(w));
        for m in t.module.sections(u).elements() {
            if y.res(v, w).apply(t.alpha[v][m]) != t.alpha[w][t.module.res(u, s)[m]] {
                commute = Err(format!("opens {v}⊇{w}, module element {m}"));
                break 'outer;
            }
        }
    }
    report.record("alpha commutes with restrictions", commute);
    for p in 0..y.space().points() {
        report.record(format!("kernel square-zero at y={p}"), kernel_square_witness(f, p));
    }
    for x in 0..f.source.space().points() {
        let name = format!("stalk extension at x={x}");
        match t.stalk_extension(x) {
            Some(e) => {
                let r = verify_extension(&e);
                report.record(name, if r.passed() { Ok(()) } else { Err(first_failure(&r)) });
            }
            None => report.fail(name, "f⁻¹ of the minimal open of f(x) is not the minimal open of x"),
        }
    }
    report
}

/// Whether `ker(f#_y)² = 0` on `O_{Y,y} → (f_*O_X)_y`.
fn kernel_square_witness(f: &RingedSpaceMorphism, y: usize) -> Result<(), String> {
    let h = f.stalk_map_at_target(y);
    match kernel(h).square_zero_witness() {
        None => Ok(()),
        Some((a, b)) => Err(format!(
            "kernel elements {a}·{b} = {} ≠ 0 in O_Y,{y}",
            h.source().mul(a, b)
        )),
    }
}

/// A closed immersion `f: X → Y` with a coaction `τ_f: Y → (X ⊕ ℳ) ∐_X Y`.
#[derive(Clone, Debug)]
pub struct Cotorsor {
    pub f: RingedSpaceMorphism,
    pub module: Arc<ModuleSheaf>,
    pub target: Arc<CoactionTarget>,
    pub tau: RingedSpaceMorphism,
}

impl PartialEq for Cotorsor {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f && self.module == other.module && self.tau == other.tau
    }
}

impl Eq for Cotorsor {}

impl Cotorsor {
    /// Builds the coaction target of `f` and wraps `τ` given by its point map
    /// and one comorphism table per open of `Y`.
    pub fn new(f: RingedSpaceMorphism, module: Arc<ModuleSheaf>, points: Vec<usize>, tables: Vec<Vec<usize>>) -> Result<Self> {
        let target = Arc::new(coaction_target(&f, &module)?);
        let y = f.target.clone();
        let cmap = crate::finspace::ContinuousMap::new(y.space().clone(), y.space().clone(), points)?;
        if tables.len() != y.space().open_count() {
            return Err(Error::Precondition(format!(
                "{} coaction tables for {} opens",
                tables.len(),
                y.space().open_count()
            )));
        }
        let comorph = tables
            .into_iter()
            .enumerate()
            .map(|(v, map)| {
                let pre = y.space().open_index(cmap.preimage(y.space().open(v))).expect("continuous");
                RingHom::new_unchecked(target.sheaf.sections(v).clone(), y.sections(pre).clone(), map)
            })
            .collect();
        let tau = RingedSpaceMorphism {
            source: y,
            target: target.sheaf.clone(),
            cmap,
            comorph,
        };
        Ok(Cotorsor { f, module, target, tau })
    }

    fn identity_on_points(&self) -> bool {
        self.tau.cmap.map.iter().enumerate().all(|(a, &b)| a == b)
    }

    /// The `(f_*ℳ)(V)`-torsor on `O_Y(V) → O_X(f⁻¹V)`; needs `τ` to be the
    /// identity on points.
    pub fn section_torsor(&self, v: usize) -> Torsor {
        let u = self.f.preimage_open(v);
        let module = self.module.sections(u).clone();
        let domain = ActionDomain {
            trivial: trivial_extension(self.f.source.sections(u), &module),
            ring: self.target.sections[v].clone(),
        };
        Torsor::with_domain(self.f.comorph[v].clone(), module, self.tau.comorph[v].map().to_vec(), Arc::new(domain))
    }

    /// The `ℳ_x`-torsor at `x`, when `f⁻¹(U_{f(x)}) = U_x`.
    pub fn stalk_torsor(&self, x: usize) -> Option<Torsor> {
        let v = minimal_target_open(&self.f, x);
        (self.f.preimage_open(v) == self.f.source.space().minimal_open_index(x)).then(|| self.section_torsor(v))
    }
}

fn cotorsor_shape(c: &Cotorsor, report: &mut Report) -> bool {
    let r = verify_morphism(&c.tau);
    let ok = r.passed() && c.tau.source == c.f.target && c.tau.target == c.target.sheaf;
    report.record(
        "tau is a morphism",
        if ok {
            Ok(())
        } else if r.passed() {
            Err("τ does not run from Y to the coaction target".into())
        } else {
            Err(first_failure(&r))
        },
    );
    if !ok {
        return false;
    }
    let id = c.identity_on_points();
    report.record(
        "tau is the identity on points",
        if id { Ok(()) } else { Err(format!("point map {:?}", c.tau.cmap.map)) },
    );
    id
}

/// The definition with one torsor condition per point `y` of `Y`.
pub fn verify_cotorsor(c: &Cotorsor) -> Report {
    let mut report = Report::new();
    let ci = check_closed_immersion(&c.f);
    report.record("f is a closed immersion", if ci.passed() { Ok(()) } else { Err(first_failure(&ci)) });
    if !cotorsor_shape(c, &mut report) {
        report.not_applicable("stalk torsors", "τ is not a morphism that is the identity on points");
        return report;
    }
    let y = &c.f.target;
    for p in 0..y.space().points() {
        report.record(format!("kernel square-zero at y={p}"), kernel_square_witness(&c.f, p));
        let r = verify_torsor(&c.section_torsor(y.space().minimal_open_index(p)));
        report.record(format!("torsor at y={p}"), if r.passed() { Ok(()) } else { Err(first_failure(&r)) });
    }
    report
}

/// The alternative definition: `f` surjective, one torsor condition per point
/// `x` of `X`.
pub fn verify_cotorsor_alt(c: &Cotorsor) -> Report {
    let mut report = Report::new();
    let ci = check_closed_immersion(&c.f);
    report.record("f is a closed immersion", if ci.passed() { Ok(()) } else { Err(first_failure(&ci)) });
    let surj = c.f.cmap.is_surjective();
    report.record(
        "f surjective",
        if surj { Ok(()) } else { Err(format!("point map {:?} is not onto", c.f.cmap.map)) },
    );
    if !cotorsor_shape(c, &mut report) {
        report.not_applicable("stalk torsors", "τ is not a morphism that is the identity on points");
        return report;
    }
    for x in 0..c.f.source.space().points() {
        let name = format!("torsor at x={x}");
        match c.stalk_torsor(x) {
            Some(t) => {
                let r = verify_torsor(&t);
                report.record(name, if r.passed() { Ok(()) } else { Err(first_failure(&r)) });
            }
            None => report.fail(name, "f⁻¹ of the minimal open of f(x) is not the minimal open of x"),
        }
    }
    report
}

/// A cotorsor is surjective on points. Not applicable to inputs rejected by
/// [`verify_cotorsor`].
pub fn check_cotorsor_surjectivity_lemma(c: &Cotorsor) -> Report {
    let mut report = Report::new();
    if !verify_cotorsor(c).passed() {
        report.not_applicable("cotorsor is surjective", "not a cotorsor");
        return report;
    }
    report.record(
        "cotorsor is surjective",
        if c.f.cmap.is_surjective() {
            Ok(())
        } else {
            Err(format!("verified cotorsor misses points: map {:?}", c.f.cmap.map))
        },
    );
    report
}

/// Translation, associativity and kernel lemmas on every stalk torsor.
pub fn check_stalk_lemmas(c: &Cotorsor) -> Report {
    let mut report = Report::new();
    if !c.identity_on_points() {
        report.not_applicable("stalk torsor lemmas", "τ is not the identity on points");
        return report;
    }
    for p in 0..c.f.target.space().points() {
        let t = c.section_torsor(c.f.target.space().minimal_open_index(p));
        for (name, r) in [
            ("translation", check_translation_lemma(&t)),
            ("associativity", check_associativity_lemma(&t)),
            ("kernel", check_kernel_lemma(&t)),
        ] {
            if !r.is_not_applicable() {
                report.record(format!("{name} lemma at y={p}"), if r.passed() { Ok(()) } else { Err(first_failure(&r)) });
            }
        }
    }
    report
}

/// `θ ∘ τ_f = id_Y` and the universal-property triangles of `θ`.
pub fn check_theta(c: &Cotorsor) -> Report {
    let mut report = check_theta_triangles(&c.target);
    let composite = c.tau.then(&theta(&c.target));
    report.record(
        "theta after tau is the identity",
        if composite.is_identity() { Ok(()) } else { Err("θ ∘ τ_f ≠ id_Y".into()) },
    );
    report
}

/// `τ_f(m, s) = α_f(m) + s` on every open.
pub fn phi(t: &FirstOrderThickening) -> Result<Cotorsor> {
    let target = Arc::new(coaction_target(&t.f, &t.module)?);
    let y = t.f.target.clone();
    let comorph = (0..y.space().open_count())
        .map(|v| {
            let tors = psi(&t.section_extension(v));
            if tors.domain().ring.ring != target.sections[v].ring {
                return Err(Error::TheoremFault(format!("coaction target differs from the action domain on open {v}")));
            }
            Ok(RingHom::new_unchecked(target.sheaf.sections(v).clone(), y.sections(v).clone(), tors.tau))
        })
        .collect::<Result<Vec<_>>>()?;
    let tau = RingedSpaceMorphism {
        source: y.clone(),
        target: target.sheaf.clone(),
        cmap: crate::finspace::ContinuousMap::identity(y.space().clone()),
        comorph,
    };
    Ok(Cotorsor {
        f: t.f.clone(),
        module: t.module.clone(),
        target,
        tau,
    })
}

/// `α(V)(m) = τ#(V)(m, 0)`.
pub fn phi_inverse(c: &Cotorsor) -> Result<FirstOrderThickening> {
    if !c.identity_on_points() {
        return Err(Error::Precondition("τ is not the identity on points".into()));
    }
    let alpha = (0..c.f.target.space().open_count())
        .map(|v| {
            let t = c.section_torsor(v);
            t.module.elements().map(|m| t.act(m, 0)).collect()
        })
        .collect();
    Ok(FirstOrderThickening {
        f: c.f.clone(),
        module: c.module.clone(),
        alpha,
    })
}

/// `h: Y → Y'` over `X` between two thickenings of `X` by `ℳ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThickeningMorphism {
    pub source: FirstOrderThickening,
    pub target: FirstOrderThickening,
    pub h: RingedSpaceMorphism,
}

/// `h: Y → Y'` over `X` between two cotorsors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotorsorMorphism {
    pub source: Cotorsor,
    pub target: Cotorsor,
    pub h: RingedSpaceMorphism,
}

fn morphism_over_x(
    report: &mut Report,
    fs: &RingedSpaceMorphism,
    ft: &RingedSpaceMorphism,
    ms: &ModuleSheaf,
    mt: &ModuleSheaf,
    h: &RingedSpaceMorphism,
) -> bool {
    if fs.source != ft.source || ms != mt {
        report.fail("same X and module", "objects over different (X, ℳ)");
        return false;
    }
    report.pass("same X and module");
    let r = verify_morphism(h);
    let shape = h.source == fs.target && h.target == ft.target;
    report.record(
        "h is a morphism",
        if !r.passed() {
            Err(first_failure(&r))
        } else if !shape {
            Err("h does not run between the targets".into())
        } else {
            Ok(())
        },
    );
    if !r.passed() || !shape {
        return false;
    }
    let composite = fs.then(h);
    report.record(
        "over X",
        if composite.cmap.map == ft.cmap.map && composite.comorph == ft.comorph {
            Ok(())
        } else {
            Err("h ∘ f ≠ f'".into())
        },
    );
    true
}

/// Stalkwise `h#_x` is a morphism of square-zero extensions of `O_{X,x}`.
pub fn verify_thickening_morphism(mor: &ThickeningMorphism) -> Report {
    let mut report = Report::new();
    let (s, t) = (&mor.source, &mor.target);
    if !morphism_over_x(&mut report, &s.f, &t.f, &s.module, &t.module, &mor.h) {
        return report;
    }
    for x in 0..s.f.source.space().points() {
        let name = format!("stalk morphism at x={x}");
        match (t.stalk_extension(x), s.stalk_extension(x)) {
            (Some(et), Some(es)) => {
                let em = ExalMorphism {
                    source: et,
                    target: es,
                    h: mor.h.stalk_map(s.f.cmap.map[x]),
                };
                let r = verify_exal_morphism(&em);
                report.record(name, if r.passed() { Ok(()) } else { Err(first_failure(&r)) });
            }
            _ => report.fail(name, "stalk extension undefined"),
        }
    }
    report
}

/// Stalkwise `h#_x` is a morphism of `ℳ_x`-torsors.
pub fn verify_cotorsor_morphism(mor: &CotorsorMorphism) -> Report {
    let mut report = Report::new();
    let (s, t) = (&mor.source, &mor.target);
    if !morphism_over_x(&mut report, &s.f, &t.f, &s.module, &t.module, &mor.h) {
        return report;
    }
    for x in 0..s.f.source.space().points() {
        let name = format!("stalk morphism at x={x}");
        match (t.stalk_torsor(x), s.stalk_torsor(x)) {
            (Some(tt), Some(ts)) => {
                let tm = TorsorMorphism {
                    source: tt,
                    target: ts,
                    h: mor.h.stalk_map(s.f.cmap.map[x]),
                };
                let r = verify_torsor_morphism(&tm);
                report.record(name, if r.passed() { Ok(()) } else { Err(first_failure(&r)) });
            }
            _ => report.fail(name, "stalk torsor undefined"),
        }
    }
    report
}

pub fn phi_on_morphism(mor: &ThickeningMorphism) -> Result<CotorsorMorphism> {
    Ok(CotorsorMorphism {
        source: phi(&mor.source)?,
        target: phi(&mor.target)?,
        h: mor.h.clone(),
    })
}

/// Both targets live on the space of `X` and both maps are the identity on
/// points.
fn same_points(fs: &RingedSpaceMorphism, ft: &RingedSpaceMorphism) -> Result<()> {
    let id = |f: &RingedSpaceMorphism| f.cmap.map.iter().enumerate().all(|(i, &p)| i == p);
    if fs.target.space() != ft.target.space() || !id(fs) || !id(ft) {
        return Err(Error::Precondition(
            "morphism enumeration needs both maps to be the identity on points".into(),
        ));
    }
    Ok(())
}

/// Every thickening morphism `s → t`, glued from stalkwise extension
/// morphisms.
pub fn enumerate_thickening_morphisms(
    s: &FirstOrderThickening,
    t: &FirstOrderThickening,
    limits: &Limits,
) -> Result<Vec<ThickeningMorphism>> {
    same_points(&s.f, &t.f)?;
    let mut budget = limits.budget();
    let mut lists = Vec::new();
    for x in 0..s.f.source.space().points() {
        let (et, es) = (t.stalk_extension(x), s.stalk_extension(x));
        lists.push(match (et, es) {
            (Some(et), Some(es)) => enumerate_exal_morphisms_with_budget(&et, &es, &mut budget)?,
            _ => Vec::new(),
        });
    }
    let lists: Vec<&[RingHom]> = lists.iter().map(Vec::as_slice).collect();
    let mut out = Vec::new();
    glued_morphisms(&s.f.target, &t.f.target, &lists, &mut budget, |h| {
        let mor = ThickeningMorphism {
            source: s.clone(),
            target: t.clone(),
            h,
        };
        if verify_thickening_morphism(&mor).passed() {
            out.push(mor);
        }
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Every cotorsor morphism `s → t`, glued from stalkwise torsor morphisms.
pub fn enumerate_cotorsor_morphisms(s: &Cotorsor, t: &Cotorsor, limits: &Limits) -> Result<Vec<CotorsorMorphism>> {
    same_points(&s.f, &t.f)?;
    let mut budget = limits.budget();
    let mut lists = Vec::new();
    for x in 0..s.f.source.space().points() {
        lists.push(match (t.stalk_torsor(x), s.stalk_torsor(x)) {
            (Some(tt), Some(ts)) => enumerate_torsor_morphisms_with_budget(&tt, &ts, &mut budget)?,
            _ => Vec::new(),
        });
    }
    let lists: Vec<&[RingHom]> = lists.iter().map(Vec::as_slice).collect();
    let mut out = Vec::new();
    glued_morphisms(&s.f.target, &t.f.target, &lists, &mut budget, |h| {
        let mor = CotorsorMorphism {
            source: s.clone(),
            target: t.clone(),
            h,
        };
        if verify_cotorsor_morphism(&mor).passed() {
            out.push(mor);
        }
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Glues stalk maps `tgt_x → src_x` into a morphism `src → tgt` that is the
/// identity on points; `None` if some open's image is not a section.
fn glue_on_points(src: &Arc<RingSheaf>, tgt: &Arc<RingSheaf>, stalk: &[&RingHom]) -> Option<RingedSpaceMorphism> {
    let space = tgt.space().clone();
    let mut comorph = Vec::with_capacity(space.open_count());
    for v in 0..space.open_count() {
        let pts = points_of(space.open(v));
        let mut map = Vec::with_capacity(tgt.sections(v).size());
        for s in tgt.sections(v).elements() {
            let fam = tgt.family(v, s);
            let img: Vec<usize> = pts.iter().zip(&fam).map(|(&p, &e)| stalk[p].apply(e)).collect();
            map.push(src.glue(v, &img)?);
        }
        comorph.push(RingHom::new_unchecked(tgt.sections(v).clone(), src.sections(v).clone(), map));
    }
    Some(RingedSpaceMorphism {
        source: src.clone(),
        target: tgt.clone(),
        cmap: crate::finspace::ContinuousMap::identity(space),
        comorph,
    })
}

/// Calls `visit` on every tuple choosing one index below `sizes[k]` per slot,
/// in lexicographic order.
fn for_each_choice(sizes: &[usize], budget: &mut Budget, mut visit: impl FnMut(&[usize]) -> Result<ControlFlow<()>>) -> Result<()> {
    if sizes.iter().any(|&s| s == 0) {
        return Ok(());
    }
    let mut cur = vec![0; sizes.len()];
    loop {
        budget.tick(1)?;
        if visit(&cur)?.is_break() {
            return Ok(());
        }
        let mut k = sizes.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < sizes[k] {
                break;
            }
            cur[k] = 0;
        }
    }
}

/// Per-point extensions of `(O_{X,x}, ℳ_x)`.
struct PointData {
    exts: Vec<Vec<SquareZeroExtension>>,
}

/// One enumerated thickening with the stalk extensions it was glued from.
struct Glued {
    thickening: FirstOrderThickening,
    choice: Vec<usize>,
}

/// Pairs `(x, y)` with `U_y ⊊ U_x`.
fn strict_pairs(x: &RingSheaf) -> Vec<(usize, usize)> {
    let space = x.space();
    let mut out = Vec::new();
    for a in 0..space.points() {
        for b in 0..space.points() {
            let (ua, ub) = (space.minimal_open(a), space.minimal_open(b));
            if ub != ua && ub & !ua == 0 {
                out.push((a, b));
            }
        }
    }
    out
}

fn glue_thickenings(
    x: &Arc<RingSheaf>,
    m: &Arc<ModuleSheaf>,
    data: &PointData,
    budget: &mut Budget,
) -> Result<Vec<Glued>> {
    let space = x.space().clone();
    let n = space.points();
    let pairs = strict_pairs(x);
    let sizes: Vec<usize> = data.exts.iter().map(Vec::len).collect();
    let mut out = Vec::new();
    let mut choices = Vec::new();
    for_each_choice(&sizes, budget, |c| {
        let consistent = (0..n).all(|a| (0..n).all(|b| space.minimal_open(a) != space.minimal_open(b) || c[a] == c[b]));
        if consistent {
            choices.push(c.to_vec());
        }
        Ok(ControlFlow::Continue(()))
    })?;
    for choice in choices {
        let exts: Vec<&SquareZeroExtension> = (0..n).map(|p| &data.exts[p][choice[p]]).collect();
        // candidate stalk restrictions B_x → B_y compatible with f and α
        let mut cands: Vec<Vec<RingHom>> = Vec::with_capacity(pairs.len());
        for &(a, b) in &pairs {
            let (ua, ub) = (space.minimal_open_index(a), space.minimal_open_index(b));
            let rx = x.res(ua, ub);
            let rm = m.res(ua, ub);
            let homs = enumerate_homs_with_budget(exts[a].total(), exts[b].total(), budget)?;
            cands.push(
                homs.into_iter()
                    .filter(|h| {
                        exts[a].total().elements().all(|s| exts[b].f.apply(h.apply(s)) == rx.apply(exts[a].f.apply(s)))
                            && exts[a]
                                .module
                                .elements()
                                .all(|v| h.apply(exts[a].alpha(v)) == exts[b].alpha(rm[v]))
                    })
                    .collect(),
            );
        }
        let csizes: Vec<usize> = cands.iter().map(Vec::len).collect();
        let mut families = Vec::new();
        for_each_choice(&csizes, budget, |r| {
            let rho: BTreeMap<(usize, usize), &RingHom> =
                pairs.iter().zip(r).zip(&cands).map(|((&p, &k), c)| (p, &c[k])).collect();
            let composes = rho.iter().all(|(&(a, b), h1)| {
                rho.iter()
                    .filter(|(&(b2, _), _)| b2 == b)
                    .all(|(&(_, c), h2)| h1.then(h2).map() == rho[&(a, c)].map())
            });
            if composes {
                families.push(rho.into_iter().map(|(k, h)| (k, h.clone())).collect::<BTreeMap<_, _>>());
            }
            Ok(ControlFlow::Continue(()))
        })?;
        for rho in families {
            let stalks = exts.iter().map(|e| e.total().clone()).collect();
            let y = match RingSheaf::from_stalk_diagram(space.clone(), stalks, rho) {
                Ok(y) => Arc::new(y),
                Err(_) => continue,
            };
            let fx: Vec<&RingHom> = exts.iter().map(|e| &e.f).collect();
            let Some(f) = glue_on_points(x, &y, &fx) else { continue };
            let mut alpha = Vec::with_capacity(space.open_count());
            let mut ok = true;
            for v in 0..space.open_count() {
                let pts = points_of(space.open(v));
                let mut map = Vec::with_capacity(m.sections(v).size());
                for s in m.sections(v).elements() {
                    let fam = m.family(v, s);
                    let img: Vec<usize> = pts.iter().zip(&fam).map(|(&p, &e)| exts[p].alpha(e)).collect();
                    match y.glue(v, &img) {
                        Some(b) => map.push(b),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                alpha.push(map);
            }
            if ok {
                out.push(Glued {
                    thickening: FirstOrderThickening {
                        f,
                        module: m.clone(),
                        alpha,
                    },
                    choice: choice.clone(),
                });
            }
        }
    }
    Ok(out)
}

fn check_inputs(x: &Arc<RingSheaf>, m: &Arc<ModuleSheaf>, mode: Mode) -> Result<()> {
    let r = crate::sheafspace::verify_sheaf(x);
    if !r.passed() {
        return Err(Error::InvalidSheaf(first_failure(&r)));
    }
    let r = crate::sheafspace::verify_module_sheaf(m);
    if !r.passed() {
        return Err(Error::InvalidSheaf(first_failure(&r)));
    }
    if m.rings() != x {
        return Err(Error::Precondition("module sheaf must be over the structure sheaf".into()));
    }
    if mode == Mode::Spec && !x.space().is_discrete() {
        return Err(Error::Precondition("Spec mode needs a discrete space; use ringed mode".into()));
    }
    Ok(())
}

fn point_data(x: &Arc<RingSheaf>, m: &Arc<ModuleSheaf>, limits: &Limits, budget: &mut Budget) -> Result<PointData> {
    let exts = (0..x.space().points())
        .map(|p| enumerate_extensions_with_budget(x.stalk(p), m.stalk(p), limits, budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(PointData { exts })
}

/// Every first order thickening of `X` by `ℳ` whose target has the space of
/// `X`, up to equality of tables.
pub fn enumerate_thickenings(x: &Arc<RingSheaf>, m: &Arc<ModuleSheaf>, mode: Mode, limits: &Limits) -> Result<Vec<FirstOrderThickening>> {
    check_inputs(x, m, mode)?;
    let mut budget = limits.budget();
    let data = point_data(x, m, limits, &mut budget)?;
    Ok(glue_thickenings(x, m, &data, &mut budget)?
        .into_iter()
        .map(|g| g.thickening)
        .collect())
}

/// Every cotorsor structure on a closed immersion `f` whose stalk torsors
/// glue to a morphism of ringed spaces.
pub fn enumerate_cotorsors(f: &RingedSpaceMorphism, m: &Arc<ModuleSheaf>, limits: &Limits) -> Result<Vec<Cotorsor>> {
    let mut budget = limits.budget();
    enumerate_cotorsors_with_budget(f, m, &mut budget)
}

fn enumerate_cotorsors_with_budget(f: &RingedSpaceMorphism, m: &Arc<ModuleSheaf>, budget: &mut Budget) -> Result<Vec<Cotorsor>> {
    let target = Arc::new(coaction_target(f, m)?);
    let y = f.target.clone();
    let space = y.space().clone();
    if f.cmap.map.iter().enumerate().any(|(a, &b)| a != b) {
        return Err(Error::Precondition("cotorsor enumeration expects f to be the identity on points".into()));
    }
    let stalk_torsors = (0..space.points())
        .map(|p| {
            let u = space.minimal_open_index(p);
            enumerate_torsor_structures_with_budget(&f.comorph[u], m.sections(u), budget)
        })
        .collect::<Result<Vec<_>>>()?;
    let sizes: Vec<usize> = stalk_torsors.iter().map(Vec::len).collect();
    let mut out = Vec::new();
    for_each_choice(&sizes, budget, |c| {
        let mut comorph = Vec::with_capacity(space.open_count());
        for v in 0..space.open_count() {
            let pts = points_of(space.open(v));
            let mut map = Vec::with_capacity(target.sheaf.sections(v).size());
            for s in target.sheaf.sections(v).elements() {
                let fam = target.sheaf.family(v, s);
                let img: Vec<usize> = pts.iter().zip(&fam).map(|(&p, &e)| stalk_torsors[p][c[p]].tau[e]).collect();
                match y.glue(v, &img) {
                    Some(b) => map.push(b),
                    None => return Ok(ControlFlow::Continue(())),
                }
            }
            comorph.push(RingHom::new_unchecked(target.sheaf.sections(v).clone(), y.sections(v).clone(), map));
        }
        let tau = RingedSpaceMorphism {
            source: y.clone(),
            target: target.sheaf.clone(),
            cmap: crate::finspace::ContinuousMap::identity(space.clone()),
            comorph,
        };
        if verify_morphism(&tau).passed() {
            out.push(Cotorsor {
                f: f.clone(),
                module: m.clone(),
                target: target.clone(),
                tau,
            });
        }
        Ok(ControlFlow::Continue(()))
    })?;
    Ok(out)
}

/// Result of the scheme-level equivalence check.
#[derive(Clone, Debug, Serialize)]
pub struct SchemeEquivalenceReport {
    pub mode: Mode,
    /// Iso classes of affine extensions of each stalk.
    pub point_classes: Vec<usize>,
    pub equivalence: EquivalenceReport,
}

impl SchemeEquivalenceReport {
    pub fn passed(&self) -> bool {
        self.equivalence.passed()
    }
}

const SCHEME_CHECKS: &[&str] = &[
    "thickenings verify",
    "cotorsors verify",
    "faithful",
    "full",
    "essentially surjective",
    "hom-count equality",
    "round trips",
    "theta identity",
    "class counts agree",
    "class count factorization",
    "morphisms bijective",
    "torsor lemmas",
    "cotorsor definitions agree",
    "surjectivity lemma",
];

/// Every glued morphism `Y_i → Y_j` over `X` from stalk maps in `lists`.
fn glued_morphisms(
    src: &Arc<RingSheaf>,
    tgt: &Arc<RingSheaf>,
    lists: &[&[RingHom]],
    budget: &mut Budget,
    mut visit: impl FnMut(RingedSpaceMorphism) -> ControlFlow<()>,
) -> Result<()> {
    let sizes: Vec<usize> = lists.iter().map(|l| l.len()).collect();
    for_each_choice(&sizes, budget, |c| {
        let stalk: Vec<&RingHom> = lists.iter().zip(c).map(|(l, &k)| &l[k]).collect();
        Ok(match glue_on_points(src, tgt, &stalk) {
            Some(h) if verify_morphism(&h).passed() => visit(h),
            _ => ControlFlow::Continue(()),
        })
    })
}

/// Exhaustively checks that `Φ` is fully faithful and essentially surjective
/// over every thickening of `X` by `ℳ` with target on the space of `X`.
pub fn verify_scheme_equivalence(
    x: &Arc<RingSheaf>,
    m: &Arc<ModuleSheaf>,
    mode: Mode,
    limits: &Limits,
) -> Result<SchemeEquivalenceReport> {
    check_inputs(x, m, mode)?;
    let mut budget = limits.budget();
    let n = x.space().points();
    let data = point_data(x, m, limits, &mut budget)?;
    let glued = glue_thickenings(x, m, &data, &mut budget)?;
    let thickenings: Vec<&FirstOrderThickening> = glued.iter().map(|g| &g.thickening).collect();
    let mut tally = Tally::new(SCHEME_CHECKS);

    let mut images = Vec::with_capacity(thickenings.len());
    for (i, t) in thickenings.iter().enumerate() {
        let r = verify_thickening(t);
        tally.check("thickenings verify", r.passed(), || format!("thickening {i}: {}", first_failure(&r)));
        let c = phi(t)?;
        let r = verify_cotorsor(&c);
        tally.check("cotorsors verify", r.passed(), || format!("Φ(thickening {i}): {}", first_failure(&r)));
        let alt = verify_cotorsor_alt(&c);
        tally.check("cotorsor definitions agree", alt.passed() == r.passed(), || format!("Φ(thickening {i})"));
        let r = check_theta(&c);
        tally.check("theta identity", r.passed(), || format!("Φ(thickening {i}): {}", first_failure(&r)));
        match phi_inverse(&c) {
            Ok(back) => tally.check("round trips", back == **t, || format!("Φ⁻¹Φ(thickening {i}) differs")),
            Err(e) => tally.fail("round trips", || format!("thickening {i}: {e}")),
        }
        images.push(c);
    }

    // cotorsors on every distinct underlying f
    let mut fs: Vec<&RingedSpaceMorphism> = Vec::new();
    for t in &thickenings {
        if !fs.contains(&&t.f) {
            fs.push(&t.f);
        }
    }
    let mut cotorsors = Vec::new();
    for f in fs {
        cotorsors.extend(enumerate_cotorsors_with_budget(f, m, &mut budget)?);
    }
    for (j, c) in cotorsors.iter().enumerate() {
        let r = verify_cotorsor(c);
        let alt = verify_cotorsor_alt(c);
        tally.check("cotorsor definitions agree", alt.passed() == r.passed(), || format!("cotorsor {j}"));
        let surj = check_cotorsor_surjectivity_lemma(c);
        tally.check("surjectivity lemma", surj.passed(), || format!("cotorsor {j}: {}", first_failure(&surj)));
        if !r.passed() {
            // glued stalk torsors that are not a cotorsor are not objects
            continue;
        }
        let lemmas = check_stalk_lemmas(c);
        tally.check("torsor lemmas", lemmas.passed(), || format!("cotorsor {j}: {}", first_failure(&lemmas)));
        match phi_inverse(c) {
            Ok(t) => {
                let r = verify_thickening(&t);
                tally.check("essentially surjective", r.passed() && thickenings.contains(&&t), || {
                    format!("Φ⁻¹(cotorsor {j}) is not among the enumerated thickenings")
                });
                match phi(&t) {
                    Ok(back) => tally.check("round trips", back == *c, || format!("ΦΦ⁻¹(cotorsor {j}) differs")),
                    Err(e) => tally.fail("round trips", || format!("cotorsor {j}: {e}")),
                }
            }
            Err(e) => tally.fail("essentially surjective", || format!("cotorsor {j}: {e}")),
        }
    }
    let verified_cotorsors: Vec<&Cotorsor> = cotorsors.iter().filter(|c| verify_cotorsor(c).passed()).collect();
    tally.check("essentially surjective", verified_cotorsors.len() == thickenings.len(), || {
        format!("{} cotorsors but {} thickenings", verified_cotorsors.len(), thickenings.len())
    });

    let mut exal_cache: HashMap<(usize, usize, usize), Vec<RingHom>> = HashMap::new();
    let mut tors_cache: HashMap<(usize, usize, usize), Vec<RingHom>> = HashMap::new();
    let stalk_psi: Vec<Vec<Torsor>> = data.exts.iter().map(|l| l.iter().map(psi).collect()).collect();
    let mut pairs = Vec::new();
    let mut morphisms = 0;
    for (i, gi) in glued.iter().enumerate() {
        for (j, gj) in glued.iter().enumerate() {
            for p in 0..n {
                let key = (p, gj.choice[p], gi.choice[p]);
                if !exal_cache.contains_key(&key) {
                    let e = enumerate_exal_morphisms_with_budget(&data.exts[p][key.1], &data.exts[p][key.2], &mut budget)?;
                    exal_cache.insert(key, e);
                }
                if !tors_cache.contains_key(&key) {
                    let t = enumerate_torsor_morphisms_with_budget(&stalk_psi[p][key.1], &stalk_psi[p][key.2], &mut budget)?;
                    tors_cache.insert(key, t);
                }
            }
            let keys: Vec<(usize, usize, usize)> = (0..n).map(|p| (p, gj.choice[p], gi.choice[p])).collect();
            let (yi, yj) = (&gi.thickening.f.target, &gj.thickening.f.target);

            let mut thick_homs = Vec::new();
            let lists: Vec<&[RingHom]> = keys.iter().map(|k| exal_cache[k].as_slice()).collect();
            glued_morphisms(yi, yj, &lists, &mut budget, |h| {
                thick_homs.push(h);
                ControlFlow::Continue(())
            })?;
            let mut tors_homs = Vec::new();
            let lists: Vec<&[RingHom]> = keys.iter().map(|k| tors_cache[k].as_slice()).collect();
            glued_morphisms(yi, yj, &lists, &mut budget, |h| {
                tors_homs.push(h);
                ControlFlow::Continue(())
            })?;

            let mut valid_thick = Vec::new();
            for h in &thick_homs {
                let mor = ThickeningMorphism {
                    source: gi.thickening.clone(),
                    target: gj.thickening.clone(),
                    h: h.clone(),
                };
                let r = verify_thickening_morphism(&mor);
                if !r.passed() {
                    continue;
                }
                let image = CotorsorMorphism {
                    source: images[i].clone(),
                    target: images[j].clone(),
                    h: h.clone(),
                };
                let r = verify_cotorsor_morphism(&image);
                tally.check("faithful", r.passed() && !valid_thick.contains(h), || {
                    format!("Φ of morphism {i}→{j}: {}", first_failure(&r))
                });
                tally.check("morphisms bijective", h.is_bijective(), || format!("thickening morphism {i}→{j}"));
                valid_thick.push(h.clone());
            }
            let mut valid_tors = 0;
            for h in &tors_homs {
                let mor = CotorsorMorphism {
                    source: images[i].clone(),
                    target: images[j].clone(),
                    h: h.clone(),
                };
                if !verify_cotorsor_morphism(&mor).passed() {
                    continue;
                }
                valid_tors += 1;
                let back = ThickeningMorphism {
                    source: gi.thickening.clone(),
                    target: gj.thickening.clone(),
                    h: h.clone(),
                };
                let r = verify_thickening_morphism(&back);
                tally.check("full", r.passed() && valid_thick.contains(h), || {
                    format!("cotorsor morphism {i}→{j}: {}", first_failure(&r))
                });
                tally.check("morphisms bijective", h.is_bijective(), || format!("cotorsor morphism {i}→{j}"));
            }
            morphisms += valid_thick.len() + valid_tors;
            tally.check("hom-count equality", valid_thick.len() == valid_tors, || {
                format!(
                    "pair ({i}, {j}): {} thickening morphisms, {} cotorsor morphisms",
                    valid_thick.len(),
                    valid_tors
                )
            });
            pairs.push(PairCount {
                e: i,
                f: j,
                homs_exal: valid_thick.len(),
                homs_tors: valid_tors,
            });
        }
    }

    let thick_classes = crate::equivfun::count_classes(&pairs, thickenings.len(), |p| p.homs_exal);
    let image_classes = crate::equivfun::count_classes(&pairs, thickenings.len(), |p| p.homs_tors);
    // classes among the independently enumerated cotorsors
    let mut reps: Vec<&Cotorsor> = Vec::new();
    for c in &verified_cotorsors {
        let mut new = true;
        for r in &reps {
            if cotorsors_isomorphic(c, r, &mut budget)? {
                new = false;
                break;
            }
        }
        if new {
            reps.push(c);
        }
    }
    tally.check(
        "class counts agree",
        thick_classes == image_classes && thick_classes == reps.len(),
        || {
            format!(
                "{thick_classes} thickening classes, {image_classes} classes of Φ-images, {} cotorsor classes",
                reps.len()
            )
        },
    );
    let point_classes = (0..n)
        .map(|p| classify_extensions(x.stalk(p), m.stalk(p), limits).map(|c| c.classes.len()))
        .collect::<Result<Vec<_>>>()?;
    if x.space().is_discrete() {
        let product: usize = point_classes.iter().product();
        tally.check("class count factorization", product == thick_classes, || {
            format!("{thick_classes} classes but per-point counts {point_classes:?} multiply to {product}")
        });
    }
    let counts = InstanceCounts {
        extensions: thickenings.len(),
        torsors: verified_cotorsors.len(),
        exal_classes: thick_classes,
        torsor_classes: reps.len(),
        morphisms,
    };
    Ok(SchemeEquivalenceReport {
        mode,
        point_classes,
        equivalence: EquivalenceReport::from_checks(tally.into_report(), pairs, counts),
    })
}

/// Whether a bijective cotorsor morphism `t → s` exists.
fn cotorsors_isomorphic(s: &Cotorsor, t: &Cotorsor, budget: &mut Budget) -> Result<bool> {
    if s.f.source != t.f.source || s.module != t.module {
        return Ok(false);
    }
    let n = s.f.source.space().points();
    let mut lists = Vec::with_capacity(n);
    for x in 0..n {
        let (Some(ts), Some(tt)) = (s.stalk_torsor(x), t.stalk_torsor(x)) else {
            return Ok(false);
        };
        lists.push(enumerate_torsor_morphisms_with_budget(&tt, &ts, budget)?);
    }
    let refs: Vec<&[RingHom]> = lists.iter().map(Vec::as_slice).collect();
    let mut found = false;
    glued_morphisms(&s.f.target, &t.f.target, &refs, budget, |h| {
        let mor = CotorsorMorphism {
            source: s.clone(),
            target: t.clone(),
            h,
        };
        if mor.h.is_bijective() && verify_cotorsor_morphism(&mor).passed() {
            found = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finalg::{product_ring, FiniteRing};
    use crate::finspace::{ContinuousMap, FinSpace};
    use crate::modalg::FiniteModule;
    use crate::report::Verdict;
    use crate::sheafspace::spec_finite_ring;

    fn z(n: usize) -> Arc<FiniteRing> {
        Arc::new(FiniteRing::cyclic(n))
    }

    fn spec_with_module(r: usize, m: usize) -> (Arc<RingSheaf>, Arc<ModuleSheaf>) {
        let spec = spec_finite_ring(&z(r)).unwrap();
        let red = RingHom::new(z(r), z(m), (0..r).map(|x| x % m).collect()).unwrap();
        let module = Arc::new(spec.localize(&FiniteModule::via_hom(&red)).unwrap());
        (spec.sheaf, module)
    }

    #[test]
    fn trivial_thickening_and_its_cotorsor() {
        let (x, m) = spec_with_module(2, 2);
        let t = trivial_thickening(&x, &m).unwrap();
        assert!(verify_thickening(&t).fully_passed(), "{}", verify_thickening(&t));
        let c = phi(&t).unwrap();
        assert!(verify_cotorsor(&c).fully_passed());
        assert!(verify_cotorsor_alt(&c).fully_passed());
        assert!(check_theta(&c).fully_passed());
        assert!(check_cotorsor_surjectivity_lemma(&c).fully_passed());
        assert_eq!(phi_inverse(&c).unwrap(), t);
        // τ((a, m), s) = α(m) + s on global sections
        let v = x.space().open_count() - 1;
        let st = c.section_torsor(v);
        let b = t.f.target.sections(v);
        for mm in 0..2 {
            for s in b.elements() {
                assert_eq!(st.act(mm, s), b.add(t.alpha[v][mm], s));
            }
        }
    }

    fn spec_z2_into_spec_z4() -> FirstOrderThickening {
        let (x, m) = spec_with_module(2, 2);
        let y = spec_finite_ring(&z(4)).unwrap().sheaf;
        let red = RingHom::new(y.stalk(0).clone(), x.stalk(0).clone(), vec![0, 1, 0, 1]).unwrap();
        let f = glue_on_points(&x, &y, &[&red]).unwrap();
        let alpha = (0..y.space().open_count())
            .map(|v| if y.sections(v).size() == 4 { vec![0, 2] } else { vec![0] })
            .collect();
        FirstOrderThickening { f, module: m, alpha }
    }

    #[test]
    fn spec_z4_thickening() {
        let t = spec_z2_into_spec_z4();
        assert!(verify_thickening(&t).fully_passed(), "{}", verify_thickening(&t));
        let c = phi(&t).unwrap();
        assert!(verify_cotorsor(&c).fully_passed());
        assert!(check_theta(&c).fully_passed());
        assert_eq!(phi_inverse(&c).unwrap(), t);
        let e = t.stalk_extension(0).unwrap();
        assert_eq!(c.stalk_torsor(0).unwrap(), psi(&e));
    }

    /// `Spec(ℤ/2) ↪ Spec(ℤ/2 × ℤ/2)` at the point of the idempotent `(1, 0)`.
    fn missed_point() -> (Arc<RingSheaf>, Arc<RingSheaf>, RingedSpaceMorphism) {
        let x = spec_finite_ring(&z(2)).unwrap().sheaf;
        let p = Arc::new(product_ring(&z(2), &z(2)).ring);
        let y = spec_finite_ring(&p).unwrap().sheaf;
        let target_point = (0..2).find(|&q| y.stalk(q).size() == 2).unwrap();
        let cmap = ContinuousMap::new(x.space().clone(), y.space().clone(), vec![target_point]).unwrap();
        let comorph = (0..y.space().open_count())
            .map(|v| {
                let u = x.space().open_index(cmap.preimage(y.space().open(v))).unwrap();
                let pts = points_of(y.space().open(v));
                let map = y
                    .sections(v)
                    .elements()
                    .map(|s| match pts.iter().position(|&q| q == target_point) {
                        Some(k) => y.family(v, s)[k],
                        None => 0,
                    })
                    .collect();
                RingHom::new(y.sections(v).clone(), x.sections(u).clone(), map).unwrap()
            })
            .collect();
        let f = RingedSpaceMorphism {
            source: x.clone(),
            target: y.clone(),
            cmap,
            comorph,
        };
        (x, y, f)
    }

    #[test]
    fn non_surjective_thickening_fails() {
        let (x, _, f) = missed_point();
        let m = Arc::new(ModuleSheaf::zero(x));
        let alpha = (0..f.target.space().open_count()).map(|_| vec![0]).collect();
        let t = FirstOrderThickening { f, module: m, alpha };
        let r = verify_thickening(&t);
        assert_eq!(r.verdict_of("surjective on points"), Some(Verdict::Fail));
        let missed = 1 - t.f.cmap.map[0];
        assert_eq!(r.verdict_of(&format!("kernel square-zero at y={missed}")), Some(Verdict::Fail));
        assert_eq!(r.verdict_of(&format!("kernel square-zero at y={}", t.f.cmap.map[0])), Some(Verdict::Pass));
    }

    #[test]
    fn cotorsor_missing_a_point_is_rejected_there() {
        let (x, y, f) = missed_point();
        let m = Arc::new(ModuleSheaf::zero(x));
        let target = coaction_target(&f, &m).unwrap();
        let tables = (0..y.space().open_count())
            .map(|v| target.sections[v].pairs().iter().map(|&(_, b)| b).collect())
            .collect();
        let c = Cotorsor::new(f, m, vec![0, 1], tables).unwrap();
        let r = verify_cotorsor(&c);
        assert!(!r.passed());
        let missed = 1 - c.f.cmap.map[0];
        let check = r.find(&format!("kernel square-zero at y={missed}")).unwrap();
        assert_eq!(check.verdict, Verdict::Fail);
        assert!(check.witness.as_ref().unwrap().contains("1·1 = 1"));
        assert_eq!(r.verdict_of(&format!("torsor at y={missed}")), Some(Verdict::Fail));
        assert!(!verify_cotorsor_alt(&c).passed());
        assert!(check_cotorsor_surjectivity_lemma(&c).is_not_applicable());
    }

    #[test]
    fn swapped_points_break_the_first_axiom() {
        let p = Arc::new(product_ring(&z(2), &z(2)).ring);
        let x = spec_finite_ring(&p).unwrap().sheaf;
        let m = Arc::new(ModuleSheaf::zero(x.clone()));
        let f = RingedSpaceMorphism::identity(&x);
        let target = coaction_target(&f, &m).unwrap();
        let space = x.space().clone();
        let swap = |mask: u64| ((mask & 1) << 1) | ((mask >> 1) & 1);
        let tables = (0..space.open_count())
            .map(|v| {
                // τ#_V: C(V) → O_Y(swap V), (a, b) ↦ b with components swapped
                let w = space.open_index(swap(space.open(v))).unwrap();
                target.sections[v]
                    .pairs()
                    .iter()
                    .map(|&(_, b)| {
                        let mut fam = x.family(v, b);
                        fam.reverse();
                        x.glue(w, &fam).unwrap()
                    })
                    .collect()
            })
            .collect();
        let c = Cotorsor::new(f, m, vec![1, 0], tables).unwrap();
        let r = verify_cotorsor(&c);
        assert_eq!(r.verdict_of("tau is a morphism"), Some(Verdict::Pass), "{r}");
        assert_eq!(r.verdict_of("tau is the identity on points"), Some(Verdict::Fail));
        assert!(!verify_cotorsor_alt(&c).passed());
    }

    #[test]
    fn scheme_equivalence_spec_z2() {
        let (x, m) = spec_with_module(2, 2);
        let r = verify_scheme_equivalence(&x, &m, Mode::Spec, &Limits::default()).unwrap();
        assert!(r.passed(), "{}", r.equivalence.checks);
        assert_eq!(r.equivalence.instances_checked.exal_classes, 2);
        assert_eq!(r.equivalence.instances_checked.torsor_classes, 2);
    }

    #[test]
    fn scheme_equivalence_zero_module() {
        let (x, _) = spec_with_module(6, 6);
        let m = Arc::new(ModuleSheaf::zero(x.clone()));
        let r = verify_scheme_equivalence(&x, &m, Mode::Spec, &Limits::default()).unwrap();
        assert!(r.passed(), "{}", r.equivalence.checks);
        assert_eq!(r.equivalence.instances_checked.exal_classes, 1);
    }

    #[test]
    fn ringed_mode_on_sierpinski() {
        let space = Arc::new(FinSpace::sierpinski());
        let rho = BTreeMap::from([((1, 0), RingHom::identity(z(2)))]);
        let x = Arc::new(RingSheaf::from_stalk_diagram(space, vec![z(2), z(2)], rho).unwrap());
        let mods = vec![
            Arc::new(FiniteModule::regular(z(2))),
            Arc::new(FiniteModule::zero(z(2))),
        ];
        let m = Arc::new(ModuleSheaf::from_stalk_diagram(x.clone(), mods, BTreeMap::from([((1, 0), vec![0])])).unwrap());
        assert!(verify_scheme_equivalence(&x, &m, Mode::Spec, &Limits::default()).is_err());
        let r = verify_scheme_equivalence(&x, &m, Mode::Ringed, &Limits::default()).unwrap();
        assert!(r.passed(), "{}", r.equivalence.checks);
        assert!(r.equivalence.instances_checked.extensions > 0);
    }
}
