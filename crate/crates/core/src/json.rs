//! JSON forms of every object, and parsing of documents tagged with a
//! `"kind"`.
//!
//! Rings may be given inline or by reference: a string naming an entry of the
//! document's top-level `"defs"` object, or a builtin spec such as `"zmod:4"`.
//! Malformed documents (bad syntax, wrong shapes, out-of-range indices) are
//! parse errors carrying a location; well-shaped tables that violate axioms
//! parse fine and fail verification instead.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::cotors::{verify_cotorsor, verify_cotorsor_alt, verify_thickening, Cotorsor, FirstOrderThickening};
use crate::exal::{verify_extension, SquareZeroExtension};
use crate::finalg::{FiniteRing, RingHom};
use crate::finspace::{verify_continuous, verify_space, ContinuousMap, FinSpace};
use crate::grouptor::{verify_torsor, ActionDomain, Torsor};
use crate::modalg::{kernel_as_a_module, FiniteModule};
use crate::report::Report;
use crate::sheafspace::{verify_module_sheaf, verify_morphism, verify_sheaf, ModuleSheaf, RingSheaf, RingedSpaceMorphism};
use crate::{builtin, Error, Result};

/// A parsed document.
#[derive(Clone, Debug)]
pub enum Object {
    Ring(Arc<FiniteRing>),
    Hom(RingHom),
    Module(Arc<FiniteModule>),
    Extension(SquareZeroExtension),
    Torsor(Torsor),
    Space { points: usize, opens: Vec<Vec<usize>> },
    Map(ContinuousMap),
    Sheaf(Arc<RingSheaf>),
    ModuleSheaf(Arc<ModuleSheaf>),
    Morphism(RingedSpaceMorphism),
    Thickening(FirstOrderThickening),
    Cotorsor(Cotorsor),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Ring(_) => "ring",
            Object::Hom(_) => "hom",
            Object::Module(_) => "module",
            Object::Extension(_) => "extension",
            Object::Torsor(_) => "torsor",
            Object::Space { .. } => "space",
            Object::Map(_) => "map",
            Object::Sheaf(_) => "sheaf",
            Object::ModuleSheaf(_) => "module-sheaf",
            Object::Morphism(_) => "rsmorphism",
            Object::Thickening(_) => "thickening",
            Object::Cotorsor(_) => "cotorsor",
        }
    }

    /// Runs the verifier matching the object's kind, including the axioms of
    /// the rings it is built on.
    pub fn verify(&self) -> Report {
        let mut report = Report::new();
        match self {
            Object::Ring(r) => return r.verify(),
            Object::Hom(h) => {
                report.absorb("source: ", h.source().verify());
                report.absorb("target: ", h.target().verify());
                report.absorb("", h.verify());
            }
            Object::Module(m) => {
                report.absorb("ring: ", m.ring().verify());
                report.absorb("", m.verify());
            }
            Object::Extension(e) => {
                report.absorb("B: ", e.total().verify());
                report.absorb("A: ", e.base().verify());
                report.absorb("", verify_extension(e));
            }
            Object::Torsor(t) => {
                report.absorb("B: ", t.total().verify());
                report.absorb("A: ", t.base().verify());
                report.absorb("", verify_torsor(t));
            }
            Object::Space { points, opens } => return verify_space(*points, opens),
            Object::Map(f) => return verify_continuous(f),
            Object::Sheaf(f) => {
                record_section_rings(&mut report, f);
                report.absorb("", verify_sheaf(f));
            }
            Object::ModuleSheaf(m) => {
                record_section_rings(&mut report, m.rings());
                report.absorb("rings: ", verify_sheaf(m.rings()));
                report.absorb("", verify_module_sheaf(m));
            }
            Object::Morphism(f) => {
                report.absorb("source: ", verify_sheaf(&f.source));
                report.absorb("target: ", verify_sheaf(&f.target));
                report.absorb("", verify_morphism(f));
            }
            Object::Thickening(t) => {
                report.absorb("Y: ", verify_sheaf(&t.f.target));
                report.absorb("module: ", verify_module_sheaf(&t.module));
                report.absorb("", verify_thickening(t));
            }
            Object::Cotorsor(c) => {
                report.absorb("module: ", verify_module_sheaf(&c.module));
                report.absorb("", verify_cotorsor(c));
                report.absorb("alternative definition: ", verify_cotorsor_alt(c));
            }
        }
        report
    }
}

fn record_section_rings(report: &mut Report, f: &RingSheaf) {
    report.record(
        "section rings",
        f.all_sections()
            .iter()
            .enumerate()
            .find_map(|(i, r)| {
                let v = r.verify();
                (!v.passed()).then(|| format!("open {i}: {}", crate::equivfun::first_failure(&v)))
            })
            .map_or(Ok(()), Err),
    );
}

fn located(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Parses a JSON document holding one object.
pub fn parse_document(text: &str) -> Result<Object> {
    let v: Value = serde_json::from_str(text).map_err(located)?;
    parse_value(&v)
}

pub fn parse_value(v: &Value) -> Result<Object> {
    let ctx = Ctx::new(v)?;
    let kind = match v.get("kind") {
        Some(Value::String(k)) => k.clone(),
        Some(_) => return Err(at("$.kind", "expected a string")),
        None => infer_kind(v).ok_or_else(|| at("$", "cannot tell the object kind; add a \"kind\" field"))?,
    };
    let p = "$";
    Ok(match kind.as_str() {
        "ring" => Object::Ring(ctx.ring(v, p)?),
        "hom" => Object::Hom(ctx.hom(v, p)?),
        "module" => Object::Module(ctx.module(v, p, None)?),
        "extension" => Object::Extension(ctx.extension(v, p)?),
        "torsor" => Object::Torsor(ctx.torsor(v, p)?),
        "space" => {
            let points = usize_at(field(v, "points", p)?, "$.points")?;
            let opens = table_at(field(v, "opens", p)?, "$.opens")?;
            Object::Space { points, opens }
        }
        "map" => Object::Map(ctx.cmap(v, p)?),
        "sheaf" => Object::Sheaf(ctx.sheaf(v, p)?),
        "module-sheaf" => Object::ModuleSheaf(ctx.module_sheaf(v, p, None)?),
        "rsmorphism" => Object::Morphism(ctx.rsmorphism(v, p)?),
        "thickening" => Object::Thickening(ctx.thickening(v, p)?),
        "cotorsor" => Object::Cotorsor(ctx.cotorsor(v, p)?),
        other => return Err(at("$.kind", &format!("unknown kind `{other}`"))),
    })
}

fn infer_kind(v: &Value) -> Option<String> {
    let has = |k: &str| v.get(k).is_some();
    let f_is_rs = v.get("f").is_some_and(|f| f.get("cmap").is_some());
    let k = if has("mul") {
        "ring"
    } else if has("act") {
        "module"
    } else if has("cmap") {
        "rsmorphism"
    } else if has("alpha") {
        if f_is_rs { "thickening" } else { "extension" }
    } else if has("tau") {
        if f_is_rs { "cotorsor" } else { "torsor" }
    } else if has("rings") {
        "module-sheaf"
    } else if has("sections") {
        "sheaf"
    } else if has("points") && has("opens") {
        "space"
    } else if has("map") && v.get("source").is_some_and(|s| s.get("opens").is_some()) {
        "map"
    } else if has("map") {
        "hom"
    } else {
        return None;
    };
    Some(k.to_string())
}

fn at(path: &str, msg: &str) -> Error {
    Error::Parse(format!("at {path}: {msg}"))
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| at(path, &format!("missing field \"{key}\"")))
}

fn usize_at(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| at(path, "expected a non-negative integer"))
}

fn vec_at(v: &Value, path: &str) -> Result<Vec<usize>> {
    let arr = v.as_array().ok_or_else(|| at(path, "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| usize_at(x, &format!("{path}[{i}]")))
        .collect()
}

fn table_at(v: &Value, path: &str) -> Result<Vec<Vec<usize>>> {
    let arr = v.as_array().ok_or_else(|| at(path, "expected an array of arrays"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| vec_at(x, &format!("{path}[{i}]")))
        .collect()
}

/// A `rows`×`cols` table, flattened row by row.
fn grid(v: &Value, rows: usize, cols: usize, path: &str) -> Result<Vec<usize>> {
    let t = table_at(v, path)?;
    if t.len() != rows {
        return Err(at(path, &format!("expected {rows} rows, found {}", t.len())));
    }
    if let Some(i) = t.iter().position(|r| r.len() != cols) {
        return Err(at(&format!("{path}[{i}]"), &format!("expected {cols} entries")));
    }
    Ok(t.concat())
}

fn in_range(values: &[usize], bound: usize, path: &str) -> Result<()> {
    match values.iter().position(|&x| x >= bound) {
        Some(i) => Err(at(path, &format!("entry {i} is {} but must be below {bound}", values[i]))),
        None => Ok(()),
    }
}

/// Keys `"i"` of an object, one per open.
fn per_open<'a>(v: &'a Value, count: usize, path: &str) -> Result<Vec<&'a Value>> {
    let obj = v.as_object().ok_or_else(|| at(path, "expected an object keyed by open index"))?;
    (0..count)
        .map(|i| {
            obj.get(&i.to_string())
                .ok_or_else(|| at(path, &format!("missing entry for open {i}")))
        })
        .collect()
}

/// Keys `"i,j"` of an object.
fn pair_keys(v: &Value, path: &str) -> Result<BTreeMap<(usize, usize), Vec<usize>>> {
    let obj = v.as_object().ok_or_else(|| at(path, "expected an object keyed by \"i,j\""))?;
    obj.iter()
        .map(|(k, x)| {
            let (a, b) = k
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| at(path, &format!("bad key `{k}`; expected \"i,j\"")))?;
            Ok(((a, b), vec_at(x, &format!("{path}.\"{k}\""))?))
        })
        .collect()
}

struct Ctx<'a> {
    defs: HashMap<String, &'a Value>,
}

impl<'a> Ctx<'a> {
    fn new(doc: &'a Value) -> Result<Self> {
        let mut defs = HashMap::new();
        if let Some(d) = doc.get("defs") {
            let obj = d.as_object().ok_or_else(|| at("$.defs", "expected an object"))?;
            for (k, v) in obj {
                defs.insert(k.clone(), v);
            }
        }
        Ok(Ctx { defs })
    }

    fn ring(&self, v: &Value, path: &str) -> Result<Arc<FiniteRing>> {
        if let Value::String(name) = v {
            return match self.defs.get(name) {
                Some(d) => self.ring(d, &format!("$.defs.{name}")),
                None => builtin::ring(name).map_err(|e| at(path, &e.to_string())),
            };
        }
        let n = usize_at(field(v, "size", path)?, &format!("{path}.size"))?;
        if n == 0 {
            return Err(at(path, "a ring has at least one element"));
        }
        let one = usize_at(field(v, "one", path)?, &format!("{path}.one"))?;
        in_range(&[one], n, &format!("{path}.one"))?;
        let mut tables = Vec::new();
        for key in ["add", "mul"] {
            let p = format!("{path}.{key}");
            let flat = grid(field(v, key, path)?, n, n, &p)?;
            in_range(&flat, n, &p)?;
            tables.push(flat);
        }
        let mul = tables.pop().expect("two tables");
        let add = tables.pop().expect("two tables");
        Ok(Arc::new(FiniteRing::from_flat_unchecked(n, one, add, mul)))
    }

    fn hom(&self, v: &Value, path: &str) -> Result<RingHom> {
        let source = self.ring(field(v, "source", path)?, &format!("{path}.source"))?;
        let target = self.ring(field(v, "target", path)?, &format!("{path}.target"))?;
        let p = format!("{path}.map");
        let map = vec_at(field(v, "map", path)?, &p)?;
        if map.len() != source.size() {
            return Err(at(&p, &format!("expected {} entries", source.size())));
        }
        in_range(&map, target.size(), &p)?;
        Ok(RingHom::new_unchecked(source, target, map))
    }

    fn module(&self, v: &Value, path: &str, ring: Option<&Arc<FiniteRing>>) -> Result<Arc<FiniteModule>> {
        let ring = match (v.get("ring"), ring) {
            (Some(r), _) => self.ring(r, &format!("{path}.ring"))?,
            (None, Some(r)) => r.clone(),
            (None, None) => return Err(at(path, "missing field \"ring\"")),
        };
        if let Value::String(spec) = v {
            return builtin::module(spec, &ring).map_err(|e| at(path, &e.to_string()));
        }
        let n = usize_at(field(v, "size", path)?, &format!("{path}.size"))?;
        if n == 0 {
            return Err(at(path, "a module has at least one element"));
        }
        let p = format!("{path}.add");
        let add = grid(field(v, "add", path)?, n, n, &p)?;
        in_range(&add, n, &p)?;
        let p = format!("{path}.act");
        let act = grid(field(v, "act", path)?, ring.size(), n, &p)?;
        in_range(&act, n, &p)?;
        Ok(Arc::new(FiniteModule::from_flat_unchecked(ring, n, add, act)))
    }

    /// The given module, or the kernel of `f` when the field is absent.
    fn module_or_kernel(&self, v: &Value, path: &str, f: &RingHom) -> Result<Arc<FiniteModule>> {
        match v.get("module") {
            Some(m) => self.module(m, &format!("{path}.module"), Some(f.target())),
            None => kernel_as_a_module(f)
                .map(|(m, _)| Arc::new(m))
                .map_err(|e| at(path, &format!("no \"module\" given and the kernel is not a module: {e}"))),
        }
    }

    fn extension(&self, v: &Value, path: &str) -> Result<SquareZeroExtension> {
        let f = self.hom(field(v, "f", path)?, &format!("{path}.f"))?;
        let module = self.module_or_kernel(v, path, &f)?;
        let p = format!("{path}.alpha");
        let alpha = vec_at(field(v, "alpha", path)?, &p)?;
        if alpha.len() != module.size() {
            return Err(at(&p, &format!("expected {} entries", module.size())));
        }
        in_range(&alpha, f.source().size(), &p)?;
        Ok(SquareZeroExtension::new(f, module, alpha))
    }

    fn torsor(&self, v: &Value, path: &str) -> Result<Torsor> {
        let f = self.hom(field(v, "f", path)?, &format!("{path}.f"))?;
        let module = self.module_or_kernel(v, path, &f)?;
        let p = format!("{path}.tau");
        let tau = vec_at(field(v, "tau", path)?, &p)?;
        let t = Torsor::new(f, module, tau).map_err(|e| at(path, &e.to_string()))?;
        if t.tau.len() != t.domain().ring.ring.size() {
            return Err(at(&p, &format!("expected {} entries", t.domain().ring.ring.size())));
        }
        in_range(&t.tau, t.total().size(), &p)?;
        Ok(t)
    }

    fn space(&self, v: &Value, path: &str) -> Result<Arc<FinSpace>> {
        let points = usize_at(field(v, "points", path)?, &format!("{path}.points"))?;
        let opens = table_at(field(v, "opens", path)?, &format!("{path}.opens"))?;
        let space = FinSpace::new(points, opens.clone()).map_err(|e| at(path, &e.to_string()))?;
        let mut given: Vec<Vec<usize>> = opens
            .into_iter()
            .map(|mut o| {
                o.sort_unstable();
                o
            })
            .collect();
        given.dedup();
        if given != space.open_lists() {
            return Err(at(
                &format!("{path}.opens"),
                &format!("opens must be listed in canonical order: {:?}", space.open_lists()),
            ));
        }
        Ok(Arc::new(space))
    }

    fn cmap(&self, v: &Value, path: &str) -> Result<ContinuousMap> {
        let source = self.space(field(v, "source", path)?, &format!("{path}.source"))?;
        let target = self.space(field(v, "target", path)?, &format!("{path}.target"))?;
        let p = format!("{path}.map");
        let map = vec_at(field(v, "map", path)?, &p)?;
        if map.len() != source.points() {
            return Err(at(&p, &format!("expected {} entries", source.points())));
        }
        in_range(&map, target.points(), &p)?;
        Ok(ContinuousMap { source, target, map })
    }

    fn sheaf(&self, v: &Value, path: &str) -> Result<Arc<RingSheaf>> {
        let space = self.space(field(v, "space", path)?, &format!("{path}.space"))?;
        let sp = format!("{path}.sections");
        let sections = per_open(field(v, "sections", path)?, space.open_count(), &sp)?
            .into_iter()
            .enumerate()
            .map(|(i, r)| self.ring(r, &format!("{sp}.\"{i}\"")))
            .collect::<Result<Vec<_>>>()?;
        let rp = format!("{path}.res");
        let raw = pair_keys(field(v, "res", path)?, &rp)?;
        let mut res = BTreeMap::new();
        for ((i, j), map) in raw {
            let p = format!("{rp}.\"{i},{j}\"");
            if i >= sections.len() || j >= sections.len() {
                return Err(at(&p, "open index out of range"));
            }
            if map.len() != sections[i].size() {
                return Err(at(&p, &format!("expected {} entries", sections[i].size())));
            }
            in_range(&map, sections[j].size(), &p)?;
            res.insert((i, j), RingHom::new_unchecked(sections[i].clone(), sections[j].clone(), map));
        }
        Ok(Arc::new(RingSheaf::new(space, sections, res)))
    }

    fn module_sheaf(&self, v: &Value, path: &str, rings: Option<&Arc<RingSheaf>>) -> Result<Arc<ModuleSheaf>> {
        let rings = match (v.get("rings"), rings) {
            (Some(r), _) => self.sheaf(r, &format!("{path}.rings"))?,
            (None, Some(r)) => r.clone(),
            (None, None) => return Err(at(path, "missing field \"rings\"")),
        };
        let n = rings.space().open_count();
        let sp = format!("{path}.sections");
        let sections = per_open(field(v, "sections", path)?, n, &sp)?
            .into_iter()
            .enumerate()
            .map(|(i, m)| self.module(m, &format!("{sp}.\"{i}\""), Some(rings.sections(i))))
            .collect::<Result<Vec<_>>>()?;
        let rp = format!("{path}.res");
        let res = pair_keys(field(v, "res", path)?, &rp)?;
        for (&(i, j), map) in &res {
            let p = format!("{rp}.\"{i},{j}\"");
            if i >= n || j >= n {
                return Err(at(&p, "open index out of range"));
            }
            if map.len() != sections[i].size() {
                return Err(at(&p, &format!("expected {} entries", sections[i].size())));
            }
            in_range(map, sections[j].size(), &p)?;
        }
        Ok(Arc::new(ModuleSheaf::new(rings, sections, res)))
    }

    fn rsmorphism(&self, v: &Value, path: &str) -> Result<RingedSpaceMorphism> {
        let source = self.sheaf(field(v, "source", path)?, &format!("{path}.source"))?;
        let target = self.sheaf(field(v, "target", path)?, &format!("{path}.target"))?;
        let cp = format!("{path}.cmap");
        let c = field(v, "cmap", path)?;
        let map = vec_at(c.get("map").unwrap_or(c), &cp)?;
        if map.len() != source.space().points() {
            return Err(at(&cp, &format!("expected {} entries", source.space().points())));
        }
        in_range(&map, target.space().points(), &cp)?;
        let cmap = ContinuousMap::new(source.space().clone(), target.space().clone(), map)
            .map_err(|e| at(&cp, &e.to_string()))?;
        let mp = format!("{path}.comorph");
        let comorph = per_open(field(v, "comorph", path)?, target.space().open_count(), &mp)?
            .into_iter()
            .enumerate()
            .map(|(w, m)| {
                let p = format!("{mp}.\"{w}\"");
                let u = source
                    .space()
                    .open_index(cmap.preimage(target.space().open(w)))
                    .expect("continuous");
                let map = vec_at(m, &p)?;
                if map.len() != target.sections(w).size() {
                    return Err(at(&p, &format!("expected {} entries", target.sections(w).size())));
                }
                in_range(&map, source.sections(u).size(), &p)?;
                Ok(RingHom::new_unchecked(target.sections(w).clone(), source.sections(u).clone(), map))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RingedSpaceMorphism {
            source,
            target,
            cmap,
            comorph,
        })
    }

    fn thickening(&self, v: &Value, path: &str) -> Result<FirstOrderThickening> {
        let f = self.rsmorphism(field(v, "f", path)?, &format!("{path}.f"))?;
        let module = self.module_sheaf(field(v, "module", path)?, &format!("{path}.module"), Some(&f.source))?;
        let ap = format!("{path}.alpha");
        let alpha = per_open(field(v, "alpha", path)?, f.target.space().open_count(), &ap)?
            .into_iter()
            .enumerate()
            .map(|(w, a)| {
                let p = format!("{ap}.\"{w}\"");
                let map = vec_at(a, &p)?;
                let u = f.preimage_open(w);
                if map.len() != module.sections(u).size() {
                    return Err(at(&p, &format!("expected {} entries", module.sections(u).size())));
                }
                in_range(&map, f.target.sections(w).size(), &p)?;
                Ok(map)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FirstOrderThickening { f, module, alpha })
    }

    fn cotorsor(&self, v: &Value, path: &str) -> Result<Cotorsor> {
        let f = self.rsmorphism(field(v, "f", path)?, &format!("{path}.f"))?;
        let module = self.module_sheaf(field(v, "module", path)?, &format!("{path}.module"), Some(&f.source))?;
        let tp = format!("{path}.tau");
        let tau = field(v, "tau", path)?;
        let n = f.target.space().points();
        let points = match tau.get("points") {
            Some(p) => vec_at(p, &format!("{tp}.points"))?,
            None => (0..n).collect(),
        };
        if points.len() != n {
            return Err(at(&format!("{tp}.points"), &format!("expected {n} entries")));
        }
        in_range(&points, n, &format!("{tp}.points"))?;
        let (tables_v, mp) = match tau.get("comorph") {
            Some(c) => (c, format!("{tp}.comorph")),
            None => (tau, tp.clone()),
        };
        let tables = per_open(tables_v, f.target.space().open_count(), &mp)?
            .into_iter()
            .enumerate()
            .map(|(w, t)| vec_at(t, &format!("{mp}.\"{w}\"")))
            .collect::<Result<Vec<_>>>()?;
        let c = Cotorsor::new(f, module, points, tables).map_err(|e| at(path, &e.to_string()))?;
        for (w, h) in c.tau.comorph.iter().enumerate() {
            let p = format!("{mp}.\"{w}\"");
            if h.map().len() != h.source().size() {
                return Err(at(&p, &format!("expected {} entries", h.source().size())));
            }
            in_range(h.map(), h.target().size(), &p)?;
        }
        Ok(c)
    }
}

pub fn ring_to_json(r: &FiniteRing) -> Value {
    json!({"size": r.size(), "one": r.one(), "add": r.add_rows(), "mul": r.mul_rows()})
}

pub fn hom_to_json(h: &RingHom) -> Value {
    json!({"source": ring_to_json(h.source()), "target": ring_to_json(h.target()), "map": h.map()})
}

fn module_body(m: &FiniteModule) -> Map<String, Value> {
    let n = m.size();
    let mut o = Map::new();
    o.insert("size".into(), json!(n));
    o.insert("add".into(), json!(m.add_rows()));
    o.insert("act".into(), json!(m.act_rows()));
    o
}

pub fn module_to_json(m: &FiniteModule) -> Value {
    let mut o = module_body(m);
    o.insert("ring".into(), ring_to_json(m.ring()));
    Value::Object(o)
}

pub fn extension_to_json(e: &SquareZeroExtension) -> Value {
    json!({"f": hom_to_json(&e.f), "module": Value::Object(module_body(&e.module)), "alpha": e.alpha})
}

pub fn torsor_to_json(t: &Torsor) -> Value {
    json!({"f": hom_to_json(&t.f), "module": Value::Object(module_body(&t.module)), "tau": t.tau})
}

pub fn space_to_json(s: &FinSpace) -> Value {
    json!({"points": s.points(), "opens": s.open_lists()})
}

pub fn cmap_to_json(f: &ContinuousMap) -> Value {
    json!({"source": space_to_json(&f.source), "target": space_to_json(&f.target), "map": f.map})
}

fn by_open<T: serde::Serialize>(items: impl IntoIterator<Item = T>) -> Value {
    Value::Object(
        items
            .into_iter()
            .enumerate()
            .map(|(i, x)| (i.to_string(), json!(x)))
            .collect(),
    )
}

fn by_pair<'a>(items: impl IntoIterator<Item = (&'a (usize, usize), Vec<usize>)>) -> Value {
    Value::Object(
        items
            .into_iter()
            .filter(|((i, j), _)| i != j)
            .map(|((i, j), m)| (format!("{i},{j}"), json!(m)))
            .collect(),
    )
}

pub fn sheaf_to_json(f: &RingSheaf) -> Value {
    json!({
        "space": space_to_json(f.space()),
        "sections": by_open(f.all_sections().iter().map(|r| ring_to_json(r))),
        "res": by_pair(f.restrictions().iter().map(|(k, h)| (k, h.map().to_vec()))),
    })
}

/// The module sheaf without its rings (implied by context).
fn module_sheaf_body(m: &ModuleSheaf) -> Map<String, Value> {
    let mut o = Map::new();
    o.insert(
        "sections".into(),
        by_open(m.all_sections().iter().map(|s| Value::Object(module_body(s)))),
    );
    o.insert("res".into(), by_pair(m.restrictions().iter().map(|(k, v)| (k, v.clone()))));
    o
}

pub fn module_sheaf_to_json(m: &ModuleSheaf) -> Value {
    let mut o = module_sheaf_body(m);
    o.insert("rings".into(), sheaf_to_json(m.rings()));
    Value::Object(o)
}

pub fn rsmorphism_to_json(f: &RingedSpaceMorphism) -> Value {
    json!({
        "source": sheaf_to_json(&f.source),
        "target": sheaf_to_json(&f.target),
        "cmap": f.cmap.map,
        "comorph": by_open(f.comorph.iter().map(|h| h.map().to_vec())),
    })
}

pub fn thickening_to_json(t: &FirstOrderThickening) -> Value {
    json!({
        "f": rsmorphism_to_json(&t.f),
        "module": Value::Object(module_sheaf_body(&t.module)),
        "alpha": by_open(t.alpha.iter()),
    })
}

pub fn cotorsor_to_json(c: &Cotorsor) -> Value {
    json!({
        "f": rsmorphism_to_json(&c.f),
        "module": Value::Object(module_sheaf_body(&c.module)),
        "tau": {
            "points": c.tau.cmap.map,
            "comorph": by_open(c.tau.comorph.iter().map(|h| h.map().to_vec())),
        },
    })
}

/// `value` with a leading `"kind"` tag.
pub fn tagged(kind: &str, value: Value) -> Value {
    let mut o = Map::new();
    o.insert("kind".into(), json!(kind));
    if let Value::Object(inner) = value {
        o.extend(inner);
    }
    Value::Object(o)
}

pub fn object_to_json(obj: &Object) -> Value {
    let body = match obj {
        Object::Ring(r) => ring_to_json(r),
        Object::Hom(h) => hom_to_json(h),
        Object::Module(m) => module_to_json(m),
        Object::Extension(e) => extension_to_json(e),
        Object::Torsor(t) => torsor_to_json(t),
        Object::Space { points, opens } => json!({"points": points, "opens": opens}),
        Object::Map(f) => cmap_to_json(f),
        Object::Sheaf(f) => sheaf_to_json(f),
        Object::ModuleSheaf(m) => module_sheaf_to_json(m),
        Object::Morphism(f) => rsmorphism_to_json(f),
        Object::Thickening(t) => thickening_to_json(t),
        Object::Cotorsor(c) => cotorsor_to_json(c),
    };
    tagged(obj.kind(), body)
}

/// The action domain a torsor document's `tau` is indexed by.
pub fn tau_carrier(t: &Torsor) -> &ActionDomain {
    t.domain()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cotors::{phi, trivial_thickening};
    use crate::exal::trivial_extension;
    use crate::report::Verdict;

    fn z(n: usize) -> Arc<FiniteRing> {
        Arc::new(FiniteRing::cyclic(n))
    }

    #[test]
    fn ring_round_trip_and_refs() {
        let v = tagged("ring", ring_to_json(&z(4)));
        match parse_value(&v).unwrap() {
            Object::Ring(r) => assert_eq!(*r, *z(4)),
            _ => panic!(),
        }
        let doc = r#"{"kind":"hom","defs":{"A":{"size":2,"one":1,"add":[[0,1],[1,0]],"mul":[[0,0],[0,1]]}},
                      "source":"zmod:4","target":"A","map":[0,1,0,1]}"#;
        let obj = parse_document(doc).unwrap();
        assert!(obj.verify().fully_passed());
    }

    #[test]
    fn broken_tables_fail_verification_not_parsing() {
        let doc = r#"{"size":2,"one":1,"add":[[0,1],[1,0]],"mul":[[0,0],[0,0]]}"#;
        let obj = parse_document(doc).unwrap();
        assert_eq!(obj.kind(), "ring");
        let r = obj.verify();
        assert!(!r.passed());
        assert!(r.failures().next().unwrap().witness.is_some());
    }

    #[test]
    fn malformed_documents_report_locations() {
        let err = parse_document("{\"size\": 2,\n \"one\": }").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = parse_document(r#"{"size":2,"one":1,"add":[[0,1]],"mul":[[0,0],[0,1]]}"#).unwrap_err();
        assert!(err.to_string().contains("$.add"), "{err}");
        let err = parse_document(r#"{"size":2,"one":5,"add":[[0,1],[1,0]],"mul":[[0,0],[0,1]]}"#).unwrap_err();
        assert!(err.to_string().contains("$.one"), "{err}");
    }

    #[test]
    fn extension_documents() {
        let doc = r#"{"kind":"extension","f":{"source":"zmod:4","target":"zmod:2","map":[0,1,0,1]},"alpha":[0,2]}"#;
        let obj = parse_document(doc).unwrap();
        assert!(obj.verify().fully_passed(), "{}", obj.verify());
        let e = trivial_extension(&z(3), &Arc::new(FiniteModule::regular(z(3))));
        let back = parse_value(&tagged("extension", extension_to_json(&e))).unwrap();
        match back {
            Object::Extension(b) => assert_eq!(b, e),
            _ => panic!(),
        }
    }

    #[test]
    fn torsor_and_scheme_round_trips() {
        let e = trivial_extension(&z(2), &Arc::new(FiniteModule::regular(z(2))));
        let t = crate::equivfun::psi(&e);
        match parse_value(&tagged("torsor", torsor_to_json(&t))).unwrap() {
            Object::Torsor(b) => assert_eq!(b, t),
            _ => panic!(),
        }
        let x = builtin::space("spec-ring:zmod:6").unwrap();
        let m = builtin::module_sheaf("regular", &x).unwrap();
        let th = trivial_thickening(&x.sheaf, &m).unwrap();
        let obj = parse_value(&tagged("thickening", thickening_to_json(&th))).unwrap();
        match &obj {
            Object::Thickening(b) => assert_eq!(*b, th),
            _ => panic!(),
        }
        assert!(obj.verify().fully_passed());
        let c = phi(&th).unwrap();
        let obj = parse_value(&tagged("cotorsor", cotorsor_to_json(&c))).unwrap();
        match &obj {
            Object::Cotorsor(b) => assert_eq!(*b, c),
            _ => panic!(),
        }
        assert!(obj.verify().fully_passed());
        let obj = parse_value(&object_to_json(&Object::ModuleSheaf(m.clone()))).unwrap();
        assert!(obj.verify().fully_passed());
    }

    #[test]
    fn space_kind_reports_failures() {
        let obj = parse_document(r#"{"points":2,"opens":[[],[0]]}"#).unwrap();
        assert_eq!(obj.verify().verdict_of("contains whole space"), Some(Verdict::Fail));
    }
}
