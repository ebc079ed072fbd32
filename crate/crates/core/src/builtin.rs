//! Named constructions usable on the command line and as string references
//! inside JSON documents.
//!
//! Rings: `zmod:n`, `prod:R,S`, `dual:R` (`R[ε]/ε²`), `gf4`, `zero`.
//! Modules over a base `A`: `zero`, `regular`, `zmod:n` (through the first
//! ring map `A → ℤ/n`), `ideal:g1,g2,..`, `sum:M,N`.
//! Spaces: `spec-ring:R` (Spec of a finite ring), `sierpinski:R` (constant
//! sheaf on the Sierpiński space).
//! Module sheaves: `zero`, `regular`, a module spec over the global ring
//! (Spec only, localized pointwise), `stalks:M1;M2;..` (discrete only).
//! Parentheses may group nested arguments: `prod:(prod:zmod:2,zmod:2),zmod:3`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::exal::trivial_extension_ring;
use crate::finalg::{enumerate_homs, product_ring, FiniteRing, Ideal, RingHom};
use crate::finspace::FinSpace;
use crate::modalg::FiniteModule;
use crate::sheafspace::{spec_finite_ring, ModuleSheaf, RingSheaf, SpecRing};
use crate::{Error, Limits, Result};

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    if s.starts_with('(') && s.ends_with(')') && balanced(&s[1..s.len() - 1]) {
        &s[1..s.len() - 1]
    } else {
        s
    }
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

/// Splits at the first `sep` outside parentheses.
fn split_top(s: &str, sep: char) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn split_all(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut rest = s;
    while let Some((a, b)) = split_top(rest, sep) {
        out.push(a);
        rest = b;
    }
    out.push(rest);
    out
}

fn bad(spec: &str, why: &str) -> Error {
    Error::Parse(format!("bad spec `{spec}`: {why}"))
}

fn number(spec: &str, s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| bad(spec, "expected a number"))
}

pub fn ring(spec: &str) -> Result<Arc<FiniteRing>> {
    let s = strip_parens(spec);
    let (head, arg) = s.split_once(':').unwrap_or((s, ""));
    let r = match head {
        "zmod" => {
            let n = number(spec, arg)?;
            if n == 0 {
                return Err(bad(spec, "modulus must be positive"));
            }
            Arc::new(FiniteRing::cyclic(n))
        }
        "zero" => Arc::new(FiniteRing::zero_ring()),
        "gf4" => Arc::new(FiniteRing::polynomial_quotient(2, &[1, 1])),
        "prod" => {
            let (a, b) = split_top(arg, ',').ok_or_else(|| bad(spec, "prod needs two factors"))?;
            product_ring(&ring(a)?, &ring(b)?).ring
        }
        "dual" => {
            let a = ring(arg)?;
            Arc::new(trivial_extension_ring(&a, &FiniteModule::regular(a.clone())))
        }
        _ => return Err(bad(spec, "unknown ring")),
    };
    Ok(r)
}

pub fn module(spec: &str, base: &Arc<FiniteRing>) -> Result<Arc<FiniteModule>> {
    let s = strip_parens(spec);
    let (head, arg) = s.split_once(':').unwrap_or((s, ""));
    let m = match head {
        "zero" => FiniteModule::zero(base.clone()),
        "regular" => FiniteModule::regular(base.clone()),
        "zmod" => {
            let target = ring(&format!("zmod:{arg}"))?;
            let h = enumerate_homs(base, &target, &Limits::default())?
                .into_iter()
                .next()
                .ok_or_else(|| bad(spec, "no ring map from the base onto this ring"))?;
            FiniteModule::via_hom(&h)
        }
        "ideal" => {
            let gens = split_all(arg, ',')
                .into_iter()
                .map(|g| number(spec, g))
                .collect::<Result<Vec<_>>>()?;
            if gens.iter().any(|&g| g >= base.size()) {
                return Err(bad(spec, "generator outside the ring"));
            }
            FiniteModule::from_ideal(&Ideal::generated(base.clone(), &gens))
        }
        "sum" => {
            let (a, b) = split_top(arg, ',').ok_or_else(|| bad(spec, "sum needs two summands"))?;
            FiniteModule::direct_sum(&*module(a, base)?, &*module(b, base)?)?
        }
        _ => return Err(bad(spec, "unknown module")),
    };
    Ok(Arc::new(m))
}

/// A finite ringed space, with its `Spec` data when it is affine.
pub struct SpaceSpec {
    pub sheaf: Arc<RingSheaf>,
    pub spec: Option<SpecRing>,
}

pub fn space(spec: &str) -> Result<SpaceSpec> {
    let s = strip_parens(spec);
    let (head, arg) = s.split_once(':').ok_or_else(|| bad(spec, "expected kind:ring"))?;
    match head {
        "spec-ring" => {
            let sp = spec_finite_ring(&ring(arg)?)?;
            Ok(SpaceSpec {
                sheaf: sp.sheaf.clone(),
                spec: Some(sp),
            })
        }
        "sierpinski" => {
            let r = ring(arg)?;
            let rho = BTreeMap::from([((1, 0), RingHom::identity(r.clone()))]);
            let sheaf = RingSheaf::from_stalk_diagram(Arc::new(FinSpace::sierpinski()), vec![r.clone(), r], rho)?;
            Ok(SpaceSpec {
                sheaf: Arc::new(sheaf),
                spec: None,
            })
        }
        _ => Err(bad(spec, "unknown space")),
    }
}

pub fn module_sheaf(spec: &str, x: &SpaceSpec) -> Result<Arc<ModuleSheaf>> {
    let s = strip_parens(spec);
    let sheaf = match s.split_once(':') {
        _ if s == "zero" => ModuleSheaf::zero(x.sheaf.clone()),
        _ if s == "regular" => ModuleSheaf::regular(x.sheaf.clone()),
        Some(("stalks", arg)) => {
            if !x.sheaf.space().is_discrete() {
                return Err(bad(spec, "stalkwise modules need a discrete space"));
            }
            let parts = split_all(arg, ';');
            if parts.len() != x.sheaf.space().points() {
                return Err(bad(spec, "one module spec per point"));
            }
            let stalks = parts
                .iter()
                .enumerate()
                .map(|(p, m)| module(m, x.sheaf.stalk(p)))
                .collect::<Result<Vec<_>>>()?;
            ModuleSheaf::from_stalk_diagram(x.sheaf.clone(), stalks, BTreeMap::new())?
        }
        _ => {
            let sp = x
                .spec
                .as_ref()
                .ok_or_else(|| bad(spec, "global module specs need a Spec space"))?;
            sp.localize(&*module(s, &sp.ring)?)?
        }
    };
    Ok(Arc::new(sheaf))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rings() {
        assert_eq!(ring("zmod:4").unwrap().size(), 4);
        assert_eq!(ring("prod:zmod:2,zmod:3").unwrap().size(), 6);
        assert_eq!(ring("prod:(prod:zmod:2,zmod:2),zmod:3").unwrap().size(), 12);
        assert_eq!(ring("dual:zmod:2").unwrap().size(), 4);
        assert!(ring("gf4").unwrap().verify().fully_passed());
        assert!(ring("zmod:0").is_err());
        assert!(ring("poly").is_err());
    }

    #[test]
    fn modules() {
        let a = ring("zmod:4").unwrap();
        assert_eq!(module("zmod:2", &a).unwrap().size(), 2);
        assert_eq!(module("sum:regular,zmod:2", &a).unwrap().size(), 8);
        assert_eq!(module("ideal:2", &a).unwrap().size(), 2);
        assert!(module("zmod:3", &a).is_err());
    }

    #[test]
    fn spaces_and_sheaves() {
        let x = space("spec-ring:zmod:6").unwrap();
        assert_eq!(x.sheaf.space().points(), 2);
        let m = module_sheaf("stalks:zmod:2;zmod:3", &x).unwrap();
        assert_eq!(m.stalk(1).size(), 3);
        let g = module_sheaf("regular", &x).unwrap();
        assert_eq!(g.stalk(0).size(), 2);
        let s = space("sierpinski:zmod:2").unwrap();
        assert!(module_sheaf("zmod:2", &s).is_err());
        assert!(module_sheaf("zero", &s).is_ok());
    }
}
