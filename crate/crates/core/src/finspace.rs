//! Finite topological spaces given by their explicit family of open sets.
//!
//! Point sets are bitmasks, so spaces have at most 64 points. Opens are kept
//! in a canonical order: each open lists its points ascending, and the family
//! is sorted lexicographically, which puts `∅` at index 0.

use std::sync::Arc;

use crate::report::Report;
use crate::{Error, Result};

pub type PointSet = u64;

pub fn mask_of(points: &[usize]) -> PointSet {
    points.iter().fold(0, |acc, &p| acc | (1 << p))
}

pub fn points_of(mask: PointSet) -> Vec<usize> {
    (0..64).filter(|&p| mask >> p & 1 == 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinSpace {
    points: usize,
    opens: Vec<PointSet>,
}

impl FinSpace {
    /// Validates and canonicalizes a topology.
    pub fn new(points: usize, opens: Vec<Vec<usize>>) -> Result<Self> {
        let report = verify_space(points, &opens);
        if let Some(c) = report.failures().next() {
            return Err(Error::InvalidSpace(format!(
                "{}: {}",
                c.name,
                c.witness.clone().unwrap_or_default()
            )));
        }
        Ok(Self::from_masks(points, opens.iter().map(|o| mask_of(o)).collect()))
    }

    pub(crate) fn from_masks(points: usize, mut masks: Vec<PointSet>) -> Self {
        masks.sort_by_key(|&m| points_of(m));
        masks.dedup();
        FinSpace { points, opens: masks }
    }

    pub fn discrete(points: usize) -> Self {
        assert!(points <= 64);
        let masks = (0..1u64 << points).collect();
        Self::from_masks(points, masks)
    }

    pub fn point() -> Self {
        Self::discrete(1)
    }

    /// `{∅, {0}, {0, 1}}`.
    pub fn sierpinski() -> Self {
        Self::from_masks(2, vec![0, 0b01, 0b11])
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn full(&self) -> PointSet {
        if self.points == 64 {
            u64::MAX
        } else {
            (1u64 << self.points) - 1
        }
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn open_lists(&self) -> Vec<Vec<usize>> {
        self.opens.iter().map(|&m| points_of(m)).collect()
    }

    pub fn open_count(&self) -> usize {
        self.opens.len()
    }

    pub fn open(&self, i: usize) -> PointSet {
        self.opens[i]
    }

    pub fn open_index(&self, mask: PointSet) -> Option<usize> {
        self.opens.iter().position(|&o| o == mask)
    }

    pub fn is_open(&self, mask: PointSet) -> bool {
        self.opens.contains(&mask)
    }

    pub fn is_closed(&self, mask: PointSet) -> bool {
        self.is_open(self.full() & !mask)
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.points).all(|x| self.minimal_open(x) == 1 << x)
    }

    /// Intersection of all opens containing `x`.
    pub fn minimal_open(&self, x: usize) -> PointSet {
        self.opens
            .iter()
            .filter(|&&o| o >> x & 1 == 1)
            .fold(self.full(), |acc, &o| acc & o)
    }

    pub fn minimal_open_index(&self, x: usize) -> usize {
        self.open_index(self.minimal_open(x)).expect("finite intersections of opens are open")
    }

    /// Pairs `(i, j)` of open indices with `open(j) ⊆ open(i)`.
    pub fn inclusions(&self) -> Vec<(usize, usize)> {
        let n = self.opens.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.opens[j] & !self.opens[i] == 0)
            .collect()
    }

    pub fn verify(&self) -> Report {
        verify_space(self.points, &self.open_lists())
    }
}

/// Checks that a family of point sets is a topology.
pub fn verify_space(points: usize, opens: &[Vec<usize>]) -> Report {
    let mut report = Report::new();
    if points > 64 || opens.iter().flatten().any(|&p| p >= points) {
        report.fail("points in range", format!("open sets must use points below {points} (at most 64)"));
        return report;
    }
    report.pass("points in range");
    let masks: Vec<PointSet> = opens.iter().map(|o| mask_of(o)).collect();
    let full = if points == 64 { u64::MAX } else { (1u64 << points) - 1 };
    report.record(
        "contains empty set",
        if masks.contains(&0) { Ok(()) } else { Err("∅ is missing".into()) },
    );
    report.record(
        "contains whole space",
        if masks.contains(&full) { Ok(()) } else { Err(format!("{:?} is missing", points_of(full))) },
    );
    let mut unions = Ok(());
    let mut inters = Ok(());
    for &u in &masks {
        for &v in &masks {
            if unions.is_ok() && !masks.contains(&(u | v)) {
                unions = Err(format!("{:?} ∪ {:?} is not open", points_of(u), points_of(v)));
            }
            if inters.is_ok() && !masks.contains(&(u & v)) {
                inters = Err(format!("{:?} ∩ {:?} is not open", points_of(u), points_of(v)));
            }
        }
    }
    report.record("closed under union", unions);
    report.record("closed under intersection", inters);
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuousMap {
    pub source: Arc<FinSpace>,
    pub target: Arc<FinSpace>,
    pub map: Vec<usize>,
}

impl ContinuousMap {
    pub fn new(source: Arc<FinSpace>, target: Arc<FinSpace>, map: Vec<usize>) -> Result<Self> {
        let f = ContinuousMap { source, target, map };
        let r = f.verify();
        if let Some(c) = r.failures().next() {
            return Err(Error::InvalidSpace(format!(
                "{}: {}",
                c.name,
                c.witness.clone().unwrap_or_default()
            )));
        }
        Ok(f)
    }

    pub fn identity(space: Arc<FinSpace>) -> Self {
        let map = (0..space.points()).collect();
        ContinuousMap {
            source: space.clone(),
            target: space,
            map,
        }
    }

    pub fn preimage(&self, mask: PointSet) -> PointSet {
        self.map
            .iter()
            .enumerate()
            .filter(|&(_, &y)| mask >> y & 1 == 1)
            .fold(0, |acc, (x, _)| acc | 1 << x)
    }

    pub fn image(&self) -> PointSet {
        mask_of(&self.map)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ContinuousMap) -> ContinuousMap {
        ContinuousMap {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&y| next.map[y]).collect(),
        }
    }

    pub fn is_surjective(&self) -> bool {
        self.image() == self.target.full()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = 0u64;
        self.map.iter().all(|&y| {
            let fresh = seen >> y & 1 == 0;
            seen |= 1 << y;
            fresh
        })
    }

    pub fn verify(&self) -> Report {
        verify_continuous(self)
    }
}

/// Checks that the point table is well formed and that preimages of opens are
/// open.
pub fn verify_continuous(f: &ContinuousMap) -> Report {
    let mut report = Report::new();
    if f.map.len() != f.source.points() || f.map.iter().any(|&y| y >= f.target.points()) {
        report.fail(
            "map well-formed",
            format!("expected {} images below {}", f.source.points(), f.target.points()),
        );
        return report;
    }
    report.pass("map well-formed");
    report.record(
        "continuous",
        f.target
            .opens()
            .iter()
            .find(|&&v| !f.source.is_open(f.preimage(v)))
            .map_or(Ok(()), |&v| {
                Err(format!(
                    "preimage {:?} of open {:?} is not open",
                    points_of(f.preimage(v)),
                    points_of(v)
                ))
            }),
    );
    report
}

/// Injective, closed image, and a homeomorphism onto the image.
pub fn is_closed_immersion_space(f: &ContinuousMap) -> bool {
    if !f.verify().passed() || !f.is_injective() || !f.target.is_closed(f.image()) {
        return false;
    }
    // every open of the source is the trace of an open of the target
    f.source
        .opens()
        .iter()
        .all(|&u| f.target.opens().iter().any(|&v| f.preimage(v) == u))
}

#[derive(Clone, Debug)]
pub struct Pushout {
    pub space: Arc<FinSpace>,
    pub j_y: ContinuousMap,
    pub j_z: ContinuousMap,
}

/// `Y ⊔ Z` modulo `f(x) ∼ g(x)`. Blocks meeting `Y` are numbered first by
/// their least `Y` point, then the remaining blocks by their least `Z` point.
pub fn pushout(f: &ContinuousMap, g: &ContinuousMap) -> Result<Pushout> {
    if f.source != g.source {
        return Err(Error::Precondition("pushout needs maps with a common source".into()));
    }
    let (ny, nz) = (f.target.points(), g.target.points());
    if ny + nz > 64 {
        return Err(Error::InvalidSpace("pushout exceeds 64 points".into()));
    }
    // union-find on Y ⊔ Z, Z offset by ny
    let mut parent: Vec<usize> = (0..ny + nz).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let n = p[c];
            p[c] = r;
            c = n;
        }
        r
    }
    for x in 0..f.source.points() {
        let (a, b) = (find(&mut parent, f.map[x]), find(&mut parent, ny + g.map[x]));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut block = vec![usize::MAX; ny + nz];
    let mut label = vec![usize::MAX; ny + nz];
    let mut count = 0;
    for v in 0..ny + nz {
        let r = find(&mut parent, v);
        if label[r] == usize::MAX {
            label[r] = count;
            count += 1;
        }
        block[v] = label[r];
    }
    let j_y_map: Vec<usize> = block[..ny].to_vec();
    let j_z_map: Vec<usize> = block[ny..].to_vec();
    let pull = |map: &[usize], s: PointSet| -> PointSet {
        map.iter()
            .enumerate()
            .filter(|&(_, &p)| s >> p & 1 == 1)
            .fold(0, |acc, (x, _)| acc | 1 << x)
    };
    if count > 20 {
        return Err(Error::InvalidSpace(format!(
            "pushout with {count} points is beyond the open-set enumeration cap of 20"
        )));
    }
    let opens = (0..1u64 << count)
        .filter(|&s| f.target.is_open(pull(&j_y_map, s)) && g.target.is_open(pull(&j_z_map, s)))
        .collect();
    let space = Arc::new(FinSpace::from_masks(count, opens));
    Ok(Pushout {
        j_y: ContinuousMap {
            source: f.target.clone(),
            target: space.clone(),
            map: j_y_map,
        },
        j_z: ContinuousMap {
            source: g.target.clone(),
            target: space.clone(),
            map: j_z_map,
        },
        space,
    })
}

/// Every continuous map between two small spaces.
pub fn all_continuous_maps(source: &Arc<FinSpace>, target: &Arc<FinSpace>) -> Vec<ContinuousMap> {
    let (n, m) = (source.points(), target.points());
    let mut out = Vec::new();
    if m == 0 {
        if n == 0 {
            out.push(ContinuousMap {
                source: source.clone(),
                target: target.clone(),
                map: Vec::new(),
            });
        }
        return out;
    }
    let mut map = vec![0usize; n];
    loop {
        let f = ContinuousMap {
            source: source.clone(),
            target: target.clone(),
            map: map.clone(),
        };
        if verify_continuous(&f).passed() {
            out.push(f);
        }
        let mut i = 0;
        while i < n {
            map[i] += 1;
            if map[i] < m {
                break;
            }
            map[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out
}

/// For every cocone `(u: Y → W, v: Z → W)` with `u ∘ f = v ∘ g` and `W`
/// among `test_spaces`, exactly one continuous mediating map exists.
pub fn check_pushout_universal(f: &ContinuousMap, g: &ContinuousMap, p: &Pushout, test_spaces: &[Arc<FinSpace>]) -> Report {
    let mut report = Report::new();
    let commutes = (0..f.source.points()).all(|x| p.j_y.map[f.map[x]] == p.j_z.map[g.map[x]]);
    report.record(
        "cocone commutes",
        if commutes { Ok(()) } else { Err("j_Y ∘ f ≠ j_Z ∘ g".into()) },
    );
    let mut outcome = Ok(());
    'outer: for w in test_spaces {
        let mediators = all_continuous_maps(&p.space, w);
        for u in all_continuous_maps(&f.target, w) {
            for v in all_continuous_maps(&g.target, w) {
                if (0..f.source.points()).any(|x| u.map[f.map[x]] != v.map[g.map[x]]) {
                    continue;
                }
                let count = mediators
                    .iter()
                    .filter(|m| p.j_y.then(m).map == u.map && p.j_z.then(m).map == v.map)
                    .count();
                if count != 1 {
                    outcome = Err(format!(
                        "cocone ({:?}, {:?}) into a {}-point space has {count} mediating maps",
                        u.map,
                        v.map,
                        w.points()
                    ));
                    break 'outer;
                }
            }
        }
    }
    report.record("universal property", outcome);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(s: FinSpace) -> Arc<FinSpace> {
        Arc::new(s)
    }

    #[test]
    fn basic_spaces_verify() {
        assert!(FinSpace::discrete(2).verify().fully_passed());
        assert!(FinSpace::sierpinski().verify().fully_passed());
        assert!(FinSpace::new(2, vec![vec![], vec![0]]).is_err());
    }

    #[test]
    fn canonical_order_starts_with_empty_set() {
        let s = FinSpace::new(2, vec![vec![0, 1], vec![0], vec![]]).unwrap();
        assert_eq!(s.open_lists(), vec![vec![], vec![0], vec![0, 1]]);
    }

    #[test]
    fn collapsing_sierpinski_is_continuous() {
        let s = arc(FinSpace::sierpinski());
        assert!(ContinuousMap::new(s.clone(), s.clone(), vec![1, 1]).is_ok());
        // swapping the points is not continuous
        assert!(ContinuousMap::new(s.clone(), s, vec![1, 0]).is_err());
    }

    #[test]
    fn minimal_opens() {
        let d = FinSpace::discrete(3);
        assert_eq!(d.minimal_open(1), 0b010);
        let s = FinSpace::sierpinski();
        assert_eq!(s.minimal_open(1), 0b11);
        assert_eq!(s.minimal_open(0), 0b01);
    }

    #[test]
    fn closed_immersions() {
        let s = arc(FinSpace::sierpinski());
        let pt = arc(FinSpace::point());
        assert!(is_closed_immersion_space(&ContinuousMap::identity(s.clone())));
        let open_pt = ContinuousMap::new(pt.clone(), s.clone(), vec![0]).unwrap();
        assert!(!is_closed_immersion_space(&open_pt));
        let closed_pt = ContinuousMap::new(pt, s, vec![1]).unwrap();
        assert!(is_closed_immersion_space(&closed_pt));
    }

    #[test]
    fn pushouts() {
        let pt = arc(FinSpace::point());
        let id = ContinuousMap::identity(pt.clone());
        let p = pushout(&id, &id).unwrap();
        assert_eq!(p.space.points(), 1);

        let s = arc(FinSpace::sierpinski());
        let ids = ContinuousMap::identity(s.clone());
        let p = pushout(&ids, &ids).unwrap();
        assert_eq!(*p.space, *s);
        assert_eq!(p.j_y.map, vec![0, 1]);
        assert_eq!(p.j_z.map, vec![0, 1]);

        let d2 = arc(FinSpace::discrete(2));
        let f = ContinuousMap::new(pt.clone(), d2.clone(), vec![0]).unwrap();
        let p = pushout(&f, &f).unwrap();
        assert_eq!(p.space.points(), 3);
        assert_eq!(p.j_y.map, vec![0, 1]);
        assert_eq!(p.j_z.map, vec![0, 2]);
        assert!(p.space.is_discrete());
        let tests = [pt.clone(), d2.clone(), s.clone()];
        assert!(check_pushout_universal(&f, &f, &p, &tests).fully_passed());
    }

    #[test]
    fn pushout_along_homeomorphism_keeps_points() {
        let s = arc(FinSpace::sierpinski());
        let pt = arc(FinSpace::point());
        let i = ContinuousMap::identity(s.clone());
        let closed = ContinuousMap::new(pt.clone(), s.clone(), vec![1]).unwrap();
        let j = ContinuousMap::new(pt, s.clone(), vec![1]).unwrap();
        let p = pushout(&closed, &j).unwrap();
        assert_eq!(p.space.points(), 3);
        let p = pushout(&i, &i).unwrap();
        assert_eq!(p.space.points(), s.points());
    }
}
