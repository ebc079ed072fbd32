//! The functor `Ψ` from square-zero extensions to torsors, its inverse on
//! objects, and an exhaustive check that it is an equivalence.

use std::sync::Arc;

use serde::Serialize;

use crate::exal::{
    enumerate_exal_morphisms_with_budget, enumerate_extensions_with_budget, exal_isomorphic, verify_exal_morphism,
    verify_extension, ExalMorphism, SquareZeroExtension,
};
use crate::finalg::{FiniteRing, RingHom};
use crate::grouptor::{
    check_associativity_lemma, check_kernel_lemma, check_translation_lemma, enumerate_torsor_morphisms_with_budget,
    enumerate_torsor_structures_with_budget, torsors_isomorphic, verify_torsor, verify_torsor_morphism, Torsor,
    TorsorMorphism,
};
use crate::modalg::FiniteModule;
use crate::report::{Report, Verdict};
use crate::{Error, Limits, Result};

/// `τ(m, b) = α(m) + b`.
pub fn psi(e: &SquareZeroExtension) -> Torsor {
    let b = e.total();
    let mut t = Torsor::new(e.f.clone(), e.module.clone(), Vec::new()).expect("module over the base");
    let nm = e.module.size();
    t.tau = t
        .domain()
        .ring
        .pairs()
        .iter()
        .map(|&(x, y)| b.add(e.alpha(x % nm), y))
        .collect();
    t
}

pub fn psi_on_morphism(mor: &ExalMorphism) -> TorsorMorphism {
    TorsorMorphism {
        source: psi(&mor.source),
        target: psi(&mor.target),
        h: mor.h.clone(),
    }
}

/// `α(m) = τ(m, 0)`. The square-zero kernel and the module isomorphism are
/// re-verified on the result; a failure there is a [`Error::TheoremFault`].
pub fn psi_inverse(t: &Torsor) -> Result<SquareZeroExtension> {
    let alpha = t.module.elements().map(|m| t.act(m, 0)).collect();
    let e = SquareZeroExtension::new(t.f.clone(), t.module.clone(), alpha);
    let report = verify_extension(&e);
    if let Some(c) = report.failures().next() {
        return Err(Error::TheoremFault(format!(
            "torsor does not yield an extension: {}: {}",
            c.name,
            c.witness.clone().unwrap_or_default()
        )));
    }
    Ok(e)
}

pub fn psi_inverse_on_morphism(mor: &TorsorMorphism) -> Result<ExalMorphism> {
    Ok(ExalMorphism {
        source: psi_inverse(&mor.source)?,
        target: psi_inverse(&mor.target)?,
        h: mor.h.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCount {
    #[serde(rename = "E")]
    pub e: usize,
    #[serde(rename = "F")]
    pub f: usize,
    pub homs_exal: usize,
    pub homs_tors: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InstanceCounts {
    pub extensions: usize,
    pub torsors: usize,
    pub exal_classes: usize,
    pub torsor_classes: usize,
    pub morphisms: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub faithful: Verdict,
    pub full: Verdict,
    pub ess_surj: Verdict,
    pub hom_counts: Verdict,
    pub round_trips: Verdict,
    pub pairs: Vec<PairCount>,
    pub instances_checked: InstanceCounts,
    pub checks: Report,
}

impl EquivalenceReport {
    pub(crate) fn from_checks(checks: Report, pairs: Vec<PairCount>, instances_checked: InstanceCounts) -> Self {
        let v = |name: &str| checks.verdict_of(name).unwrap_or(Verdict::NotApplicable);
        EquivalenceReport {
            faithful: v("faithful"),
            full: v("full"),
            ess_surj: v("essentially surjective"),
            hom_counts: v("hom-count equality"),
            round_trips: v("round trips"),
            pairs,
            instances_checked,
            checks,
        }
    }

    /// All four equivalence verdicts and every auxiliary check passed.
    pub fn passed(&self) -> bool {
        self.checks.fully_passed()
    }
}

/// Sticky first failure per named check.
pub(crate) struct Tally {
    names: Vec<&'static str>,
    failures: Vec<Option<String>>,
}

impl Tally {
    pub(crate) fn new(names: &[&'static str]) -> Self {
        Tally {
            names: names.to_vec(),
            failures: vec![None; names.len()],
        }
    }

    pub(crate) fn fail(&mut self, name: &str, witness: impl FnOnce() -> String) {
        let i = self.names.iter().position(|n| *n == name).expect("registered check");
        if self.failures[i].is_none() {
            self.failures[i] = Some(witness());
        }
    }

    pub(crate) fn check(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> String) {
        if !ok {
            self.fail(name, witness);
        }
    }

    pub(crate) fn into_report(self) -> Report {
        let mut report = Report::new();
        for (name, f) in self.names.into_iter().zip(self.failures) {
            report.record(name, f.map_or(Ok(()), Err));
        }
        report
    }
}

pub(crate) const EQUIVALENCE_CHECKS: &[&str] = &[
    "extensions verify",
    "torsors verify",
    "faithful",
    "full",
    "essentially surjective",
    "hom-count equality",
    "round trips",
    "class counts agree",
    "morphisms bijective",
    "torsor lemmas",
];

/// Exhaustively checks that `Ψ` is fully faithful and essentially surjective
/// over every enumerated extension and torsor of `A` by `M`.
pub fn verify_equivalence(a: &Arc<FiniteRing>, m: &Arc<FiniteModule>, limits: &Limits) -> Result<EquivalenceReport> {
    let mut budget = limits.budget();
    let extensions = enumerate_extensions_with_budget(a, m, limits, &mut budget)?;
    // torsors on every structure map that occurs among the extensions
    let mut maps: Vec<RingHom> = Vec::new();
    for e in &extensions {
        if !maps.contains(&e.f) {
            maps.push(e.f.clone());
        }
    }
    let mut torsors = Vec::new();
    for f in &maps {
        torsors.extend(enumerate_torsor_structures_with_budget(f, m, &mut budget)?);
    }
    let mut tally = Tally::new(EQUIVALENCE_CHECKS);
    for (i, e) in extensions.iter().enumerate() {
        let r = verify_extension(e);
        tally.check("extensions verify", r.passed(), || format!("extension {i}: {}", first_failure(&r)));
        let t = psi(e);
        let r = verify_torsor(&t);
        tally.check("torsors verify", r.passed(), || format!("Ψ(extension {i}): {}", first_failure(&r)));
        match psi_inverse(&t) {
            Ok(back) => tally.check("round trips", back == *e, || format!("Ψ⁻¹Ψ(extension {i}) differs")),
            Err(err) => tally.fail("round trips", || format!("extension {i}: {err}")),
        }
    }
    for (j, t) in torsors.iter().enumerate() {
        let r = verify_torsor(t);
        tally.check("torsors verify", r.passed(), || format!("torsor {j}: {}", first_failure(&r)));
        for lemma in [check_translation_lemma(t), check_associativity_lemma(t), check_kernel_lemma(t)] {
            tally.check("torsor lemmas", lemma.fully_passed(), || format!("torsor {j}: {}", first_failure(&lemma)));
        }
        match psi_inverse(t) {
            Ok(e) => {
                tally.check("round trips", psi(&e) == *t, || format!("ΨΨ⁻¹(torsor {j}) differs"));
                tally.check("essentially surjective", extensions.contains(&e), || {
                    format!("Ψ⁻¹(torsor {j}) is not among the enumerated extensions")
                });
            }
            Err(err) => tally.fail("essentially surjective", || format!("torsor {j}: {err}")),
        }
    }
    tally.check("essentially surjective", torsors.len() == extensions.len(), || {
        format!("{} torsors but {} extensions", torsors.len(), extensions.len())
    });

    let images: Vec<Torsor> = extensions.iter().map(psi).collect();
    let mut pairs = Vec::new();
    let mut morphisms = 0;
    for (i, e) in extensions.iter().enumerate() {
        for (j, f) in extensions.iter().enumerate() {
            let exal = enumerate_exal_morphisms_with_budget(e, f, &mut budget)?;
            let tors = enumerate_torsor_morphisms_with_budget(&images[i], &images[j], &mut budget)?;
            morphisms += exal.len() + tors.len();
            pairs.push(PairCount {
                e: i,
                f: j,
                homs_exal: exal.len(),
                homs_tors: tors.len(),
            });
            tally.check("hom-count equality", exal.len() == tors.len(), || {
                format!("pair ({i}, {j}): {} extension morphisms, {} torsor morphisms", exal.len(), tors.len())
            });
            let mut seen: Vec<&[usize]> = Vec::new();
            for h in &exal {
                let mor = ExalMorphism {
                    source: e.clone(),
                    target: f.clone(),
                    h: h.clone(),
                };
                let r = verify_exal_morphism(&mor);
                tally.check("extensions verify", r.passed(), || format!("morphism {i}→{j}: {}", first_failure(&r)));
                let image = psi_on_morphism(&mor);
                let r = verify_torsor_morphism(&image);
                tally.check("faithful", r.passed() && !seen.contains(&image.h.map()), || {
                    format!("Ψ of morphism {i}→{j} {:?}: {}", h.map(), first_failure(&r))
                });
                seen.push(h.map());
                tally.check("morphisms bijective", h.is_bijective(), || format!("morphism {i}→{j} {:?}", h.map()));
            }
            for h in &tors {
                let mor = ExalMorphism {
                    source: e.clone(),
                    target: f.clone(),
                    h: h.clone(),
                };
                let r = verify_exal_morphism(&mor);
                tally.check("full", r.passed() && exal.contains(h), || {
                    format!("torsor morphism {i}→{j} {:?}: {}", h.map(), first_failure(&r))
                });
                tally.check("morphisms bijective", h.is_bijective(), || format!("torsor morphism {i}→{j} {:?}", h.map()));
            }
        }
    }

    let exal_classes = count_classes(&pairs, extensions.len(), |p| p.homs_exal);
    let mut tors_reps: Vec<usize> = Vec::new();
    for (j, t) in torsors.iter().enumerate() {
        let mut new = true;
        for &r in &tors_reps {
            if torsors_isomorphic(t, &torsors[r], &mut budget)? {
                new = false;
                break;
            }
        }
        if new {
            tors_reps.push(j);
        }
    }
    // cross-check the pair-count classes against direct isomorphism search
    let mut iso_reps: Vec<usize> = Vec::new();
    for (i, e) in extensions.iter().enumerate() {
        let mut new = true;
        for &r in &iso_reps {
            if exal_isomorphic(e, &extensions[r], &mut budget)? {
                new = false;
                break;
            }
        }
        if new {
            iso_reps.push(i);
        }
    }
    tally.check(
        "class counts agree",
        exal_classes == tors_reps.len() && exal_classes == iso_reps.len(),
        || {
            format!(
                "{exal_classes} extension classes by morphisms, {} by isomorphism search, {} torsor classes",
                iso_reps.len(),
                tors_reps.len()
            )
        },
    );
    let counts = InstanceCounts {
        extensions: extensions.len(),
        torsors: torsors.len(),
        exal_classes,
        torsor_classes: tors_reps.len(),
        morphisms,
    };
    Ok(EquivalenceReport::from_checks(tally.into_report(), pairs, counts))
}

pub(crate) fn first_failure(r: &Report) -> String {
    r.failures()
        .next()
        .map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()))
        .unwrap_or_default()
}

/// Number of classes of the relation "a morphism exists both ways".
pub(crate) fn count_classes<P>(pairs: &[P], n: usize, homs: impl Fn(&P) -> usize) -> usize
where
    P: PairIndex,
{
    let mut linked = vec![vec![false; n]; n];
    for p in pairs {
        if homs(p) > 0 {
            linked[p.first()][p.second()] = true;
        }
    }
    let mut class = vec![usize::MAX; n];
    let mut count = 0;
    for i in 0..n {
        if class[i] != usize::MAX {
            continue;
        }
        for j in i..n {
            if class[j] == usize::MAX && linked[i][j] && linked[j][i] {
                class[j] = count;
            }
        }
        count += 1;
    }
    count
}

pub(crate) trait PairIndex {
    fn first(&self) -> usize;
    fn second(&self) -> usize;
}

impl PairIndex for PairCount {
    fn first(&self) -> usize {
        self.e
    }
    fn second(&self) -> usize {
        self.f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exal::trivial_extension;

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
    fn psi_of_trivial_extension() {
        let e = trivial_extension(&z(2), &zm(2));
        let t = psi(&e);
        assert!(verify_torsor(&t).fully_passed());
        // τ(m, (a, m')) = (a, m + m')
        for b in 0..4 {
            for m in 0..2 {
                assert_eq!(t.act(m, b), (b / 2) * 2 + (m + b % 2) % 2);
            }
        }
    }

    #[test]
    fn psi_of_z4() {
        let t = psi(&z4_over_z2());
        assert_eq!(t.act(1, 0), 2);
        assert_eq!(t.act(1, 1), 3);
        assert!(verify_torsor(&t).fully_passed());
    }

    #[test]
    fn psi_with_zero_module() {
        let zero = Arc::new(FiniteModule::zero(z(3)));
        let e = trivial_extension(&z(3), &zero);
        let t = psi(&e);
        assert!((0..3).all(|b| t.act(0, b) == b));
        assert_eq!(psi_inverse(&t).unwrap(), e);
    }

    #[test]
    fn round_trips() {
        let e = z4_over_z2();
        assert_eq!(psi_inverse(&psi(&e)).unwrap(), e);
        let l = Limits::default();
        let ts = crate::grouptor::enumerate_torsor_structures(&e.f, &e.module, &l).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(psi(&psi_inverse(&ts[0]).unwrap()), ts[0]);
    }

    #[test]
    fn morphisms_map_to_themselves() {
        let e = z4_over_z2();
        let id = ExalMorphism::identity(&e);
        let t = psi_on_morphism(&id);
        assert_eq!(t, TorsorMorphism::identity(&psi(&e)));
        assert!(verify_torsor_morphism(&t).fully_passed());
        let twice = id.then(&id);
        assert_eq!(psi_on_morphism(&twice).h, psi_on_morphism(&id).then(&psi_on_morphism(&id)).h);
    }

    #[test]
    fn equivalence_small_cases() {
        let l = Limits::default();
        let r = verify_equivalence(&z(2), &zm(2), &l).unwrap();
        assert!(r.passed(), "{}", r.checks);
        assert_eq!(r.instances_checked.exal_classes, 2);
        let r = verify_equivalence(&z(3), &zm(3), &l).unwrap();
        assert!(r.passed(), "{}", r.checks);
        assert_eq!(r.instances_checked.torsor_classes, 3);
        let zero = Arc::new(FiniteModule::zero(z(2)));
        let r = verify_equivalence(&z(2), &zero, &l).unwrap();
        assert!(r.passed(), "{}", r.checks);
        assert_eq!(r.instances_checked.extensions, 1);
        assert_eq!(r.pairs.len(), 1);
        assert_eq!(r.pairs[0].homs_exal, 1);
    }
}
