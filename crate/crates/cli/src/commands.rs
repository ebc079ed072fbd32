use serde_json::json;

use sqz::builtin;
use sqz::cotors::verify_scheme_equivalence;
use sqz::equivfun::verify_equivalence;
use sqz::exal::{classify_extensions, verify_extension};
use sqz::grouptor::{
    check_associativity_lemma, check_translation_lemma, classify_torsors, group_object, verify_group_object,
    verify_torsor, GroupObjectStructure,
};
use sqz::json::{extension_to_json, parse_document, tagged, torsor_to_json};
use sqz::samples::{self, corrupt_cogroup, corrupt_group_object, Corruption};
use sqz::sheafspace::{cogroup_structure, verify_cogroup};
use sqz::{Check, Error, Report, Result, Verdict};

use crate::{Config, Outcome};

pub fn check(c: &Config) -> Result<Outcome> {
    if c.inputs.is_empty() {
        return Err(Error::Precondition("--input is required for check".into()));
    }
    let mut checks = Report::new();
    let mut kinds = Vec::new();
    for path in &c.inputs {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        let obj = parse_document(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        kinds.push(obj.kind());
        let prefix = if c.inputs.len() > 1 { format!("{}: ", path.display()) } else { String::new() };
        checks.absorb(&prefix, obj.verify());
    }
    Ok(Outcome {
        checks,
        counts: json!({"objects": kinds.len(), "kinds": kinds}),
        details: None,
    })
}

fn first_failure(r: &Report) -> String {
    r.failures()
        .next()
        .map(|f| format!("{}: {}", f.name, f.witness.clone().unwrap_or_default()))
        .unwrap_or_default()
}

/// Records whether every item's report passed, witnessing the first that
/// did not.
fn all_pass(report: &mut Report, name: &str, items: impl IntoIterator<Item = (String, Report)>) {
    let bad = items.into_iter().find(|(_, r)| !r.passed());
    report.record(name, bad.map_or(Ok(()), |(what, r)| Err(format!("{what}: {}", first_failure(&r)))));
}

pub fn classify(c: &Config) -> Result<Outcome> {
    let limits = c.limits()?;
    let a = builtin::ring(&c.require(&c.base, "base")?)?;
    let m = builtin::module(&c.require(&c.module, "module")?, &a)?;
    let exal = classify_extensions(&a, &m, &limits)?;
    let tors = classify_torsors(&a, &m, &limits)?;
    let mut checks = Report::new();
    all_pass(
        &mut checks,
        "extensions verify",
        exal.extensions.iter().enumerate().map(|(i, e)| (format!("extension {i}"), verify_extension(e))),
    );
    all_pass(
        &mut checks,
        "torsors verify",
        tors.torsors.iter().enumerate().map(|(i, t)| (format!("torsor {i}"), verify_torsor(t))),
    );
    checks.record(
        "class counts agree",
        if exal.classes.len() == tors.classes.len() {
            Ok(())
        } else {
            Err(format!(
                "{} extension classes but {} torsor classes",
                exal.classes.len(),
                tors.classes.len()
            ))
        },
    );
    all_pass(
        &mut checks,
        "torsor lemmas",
        tors.torsors.iter().enumerate().map(|(i, t)| {
            let mut r = check_translation_lemma(t);
            r.absorb("", check_associativity_lemma(t));
            (format!("torsor {i}"), r)
        }),
    );
    let details = json!({
        "extensions": {
            "classes": exal
                .classes
                .iter()
                .map(|cl| json!({
                    "representative": tagged("extension", extension_to_json(&exal.extensions[cl.representative])),
                    "members": cl.members.len(),
                }))
                .collect::<Vec<_>>(),
            "total": exal.extensions.len(),
        },
        "torsors": {
            "classes": tors
                .classes
                .iter()
                .map(|cl| json!({
                    "representative": tagged("torsor", torsor_to_json(&tors.torsors[cl[0]])),
                    "members": cl.len(),
                }))
                .collect::<Vec<_>>(),
            "total": tors.torsors.len(),
        },
    });
    Ok(Outcome {
        checks,
        counts: json!({
            "extensions": exal.extensions.len(),
            "extension_classes": exal.classes.len(),
            "torsors": tors.torsors.len(),
            "torsor_classes": tors.classes.len(),
        }),
        details: Some(details),
    })
}

pub fn equiv(c: &Config) -> Result<Outcome> {
    let limits = c.limits()?;
    let a = builtin::ring(&c.require(&c.base, "base")?)?;
    let m = builtin::module(&c.require(&c.module, "module")?, &a)?;
    let r = verify_equivalence(&a, &m, &limits)?;
    Ok(Outcome {
        checks: r.checks.clone(),
        counts: json!({
            "faithful": r.faithful,
            "full": r.full,
            "ess_surj": r.ess_surj,
            "hom_counts": r.hom_counts,
            "round_trips": r.round_trips,
            "instances_checked": r.instances_checked,
        }),
        details: Some(json!({"pairs": r.pairs})),
    })
}

pub fn scheme_equiv(c: &Config) -> Result<Outcome> {
    let limits = c.limits()?;
    let x = builtin::space(&c.require(&c.base, "base")?)?;
    let m = builtin::module_sheaf(&c.require(&c.module, "module")?, &x)?;
    let r = verify_scheme_equivalence(&x.sheaf, &m, c.mode(), &limits)?;
    let e = &r.equivalence;
    Ok(Outcome {
        checks: e.checks.clone(),
        counts: json!({
            "faithful": e.faithful,
            "full": e.full,
            "ess_surj": e.ess_surj,
            "hom_counts": e.hom_counts,
            "round_trips": e.round_trips,
            "point_classes": r.point_classes,
            "instances_checked": e.instances_checked,
        }),
        details: Some(json!({"pairs": e.pairs})),
    })
}

const MUTATIONS: usize = 3;

/// A passing check carrying the rejection as its evidence, or a failure when
/// the corrupted structure was accepted or rejected without a witness.
fn mutation_check(name: String, what: &Corruption, verdict: &Report) -> Check {
    let rejected = !verdict.passed() && verdict.failures().all(|f| f.witness.is_some());
    Check {
        name,
        verdict: if rejected { Verdict::Pass } else { Verdict::Fail },
        witness: Some(if rejected {
            format!("{} rejected by {}", what.description, first_failure(verdict))
        } else {
            format!("{} was accepted", what.description)
        }),
    }
}

fn group_suite(checks: &mut Report, prefix: &str, g: &GroupObjectStructure, rng: &mut samples::ChaCha8Rng) {
    checks.absorb(prefix, verify_group_object(g));
    for k in 1..=MUTATIONS {
        let (bad, what) = corrupt_group_object(g, rng);
        let verdict = verify_group_object(&bad);
        checks.checks.push(mutation_check(format!("{prefix}mutation {k} rejected"), &what, &verdict));
    }
}

pub fn axioms(c: &Config) -> Result<Outcome> {
    let mut rng = samples::rng(c.seed);
    let mut checks = Report::new();
    let base = c.base.as_deref();
    let structures;
    if let Some(space) = base.filter(|b| b.starts_with("spec-ring:") || b.starts_with("sierpinski:")) {
        let x = builtin::space(space)?;
        let m = builtin::module_sheaf(c.module.as_deref().unwrap_or("regular"), &x)?;
        let cg = cogroup_structure(&x.sheaf, &m)?;
        checks.absorb("", verify_cogroup(&cg));
        for k in 1..=MUTATIONS {
            let (bad, what) = corrupt_cogroup(&cg, &mut rng);
            let verdict = verify_cogroup(&bad);
            checks.checks.push(mutation_check(format!("mutation {k} rejected"), &what, &verdict));
        }
        structures = 1;
    } else if let Some(ring) = base {
        let a = builtin::ring(ring)?;
        if a.is_zero_ring() {
            return Err(Error::Precondition("the base ring must be nonzero".into()));
        }
        let m = builtin::module(c.module.as_deref().unwrap_or("regular"), &a)?;
        group_suite(&mut checks, "", &group_object(&a, &m), &mut rng);
        structures = 1;
    } else {
        let pairs = samples::random_pairs(c.seed, 20, 64);
        for s in &pairs {
            group_suite(&mut checks, &format!("[{}] ", s.label), &group_object(&s.ring, &s.module), &mut rng);
        }
        structures = pairs.len();
    }
    let rejected = checks
        .checks
        .iter()
        .filter(|ch| ch.name.ends_with("rejected") && ch.verdict == Verdict::Pass)
        .count();
    Ok(Outcome {
        checks,
        counts: json!({
            "structures": structures,
            "mutations": structures * MUTATIONS,
            "mutations_rejected": rejected,
        }),
        details: None,
    })
}
