//! Finite commutative rings with identity, given by explicit operation tables.
//!
//! The carrier of a ring of size `n` is `0..n`, with the additive identity
//! always at index 0. Every derived construction fixes its element order:
//! products and fiber products enumerate pairs lexicographically, quotients
//! enumerate cosets by least representative.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::report::Report;
use crate::search::MapSearch;
use crate::{Budget, Error, Limits, Result};

const UNSET: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteRing {
    size: usize,
    one: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
}

impl FiniteRing {
    /// Builds a ring from row-major tables, validating every ring axiom.
    pub fn from_tables(add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>, one: usize) -> Result<Self> {
        let report = check_ring_tables(&add, &mul, one);
        if let Some(c) = report.failures().next() {
            return Err(Error::InvalidRing {
                axiom: c.name.clone(),
                witness: c.witness.clone().unwrap_or_default(),
            });
        }
        let size = add.len();
        Ok(Self::from_flat_unchecked(
            size,
            one,
            add.concat(),
            mul.concat(),
        ))
    }

    /// Builds a ring from flat tables that are known to satisfy the axioms.
    pub(crate) fn from_flat_unchecked(size: usize, one: usize, add: Vec<usize>, mul: Vec<usize>) -> Self {
        debug_assert_eq!(add.len(), size * size);
        debug_assert_eq!(mul.len(), size * size);
        let neg = (0..size)
            .map(|a| {
                (0..size)
                    .find(|&b| add[a * size + b] == 0)
                    .unwrap_or(0)
            })
            .collect();
        FiniteRing {
            size,
            one,
            add,
            mul,
            neg,
        }
    }

    /// Validates flat tables and builds the ring.
    pub(crate) fn from_flat(size: usize, one: usize, add: Vec<usize>, mul: Vec<usize>) -> Result<Self> {
        let report = check_flat_ring(size, one, &add, &mul);
        if let Some(c) = report.failures().next() {
            return Err(Error::InvalidRing {
                axiom: c.name.clone(),
                witness: c.witness.clone().unwrap_or_default(),
            });
        }
        Ok(Self::from_flat_unchecked(size, one, add, mul))
    }

    /// `ℤ/n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic ring needs n ≥ 1");
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = (a + b) % n;
                mul[a * n + b] = (a * b) % n;
            }
        }
        Self::from_flat_unchecked(n, 1 % n, add, mul)
    }

    pub fn zero_ring() -> Self {
        Self::cyclic(1)
    }

    /// `ℤ/n[x] / (x^d + c_{d-1} x^{d-1} + … + c_0)` for `monic_tail = [c_0, …, c_{d-1}]`.
    ///
    /// An element `Σ a_i x^i` sits at index `Σ a_i n^i`.
    pub fn polynomial_quotient(n: usize, monic_tail: &[usize]) -> Self {
        assert!(n >= 1);
        let d = monic_tail.len();
        let size = n.pow(d as u32);
        let decode = |mut idx: usize| -> Vec<usize> {
            let mut c = vec![0; d];
            for ci in c.iter_mut() {
                *ci = idx % n;
                idx /= n;
            }
            c
        };
        let encode = |c: &[usize]| -> usize { c.iter().rev().fold(0, |acc, &ci| acc * n + ci) };
        let mut add = vec![0; size * size];
        let mut mul = vec![0; size * size];
        for a in 0..size {
            let ca = decode(a);
            for b in 0..size {
                let cb = decode(b);
                let sum: Vec<usize> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % n).collect();
                add[a * size + b] = encode(&sum);
                // schoolbook product, then reduce from the top degree down
                let mut prod = vec![0usize; 2 * d.max(1)];
                for (i, x) in ca.iter().enumerate() {
                    for (j, y) in cb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % n;
                    }
                }
                for k in (d..prod.len()).rev() {
                    let lead = prod[k];
                    if lead == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for (i, c) in monic_tail.iter().enumerate() {
                        let t = k - d + i;
                        prod[t] = (prod[t] + (n - (lead * c) % n)) % n;
                    }
                }
                mul[a * size + b] = encode(&prod[..d]);
            }
        }
        let one = if d == 0 || n == 1 { 0 } else { 1 };
        Self::from_flat_unchecked(size, one, add, mul)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn one(&self) -> usize {
        self.one
    }

    #[inline]
    pub fn zero(&self) -> usize {
        0
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b]
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn add_table(&self) -> &[usize] {
        &self.add
    }

    pub fn mul_table(&self) -> &[usize] {
        &self.mul
    }

    pub fn add_rows(&self) -> Vec<Vec<usize>> {
        self.add.chunks(self.size).map(<[usize]>::to_vec).collect()
    }

    pub fn mul_rows(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.size).map(<[usize]>::to_vec).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn is_zero_ring(&self) -> bool {
        self.size == 1
    }

    /// `k · x` for a non-negative integer `k`.
    pub fn times(&self, k: usize, x: usize) -> usize {
        (0..k).fold(0, |acc, _| self.add(acc, x))
    }

    pub fn additive_order(&self, x: usize) -> usize {
        let mut acc = x;
        let mut k = 1;
        while acc != 0 {
            acc = self.add(acc, x);
            k += 1;
        }
        k
    }

    pub fn characteristic(&self) -> usize {
        self.additive_order(self.one)
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.mul(x, x) == x
    }

    pub fn idempotents(&self) -> Vec<usize> {
        self.elements().filter(|&x| self.is_idempotent(x)).collect()
    }

    pub fn is_unit(&self, x: usize) -> bool {
        self.elements().any(|y| self.mul(x, y) == self.one)
    }

    pub fn units(&self) -> Vec<usize> {
        self.elements().filter(|&x| self.is_unit(x)).collect()
    }

    /// A nonzero finite ring is local iff its non-units are closed under
    /// addition (they then form the unique maximal ideal).
    pub fn is_local(&self) -> bool {
        if self.is_zero_ring() {
            return false;
        }
        let non_units: Vec<usize> = self.elements().filter(|&x| !self.is_unit(x)).collect();
        non_units
            .iter()
            .all(|&a| non_units.iter().all(|&b| !self.is_unit(self.add(a, b))))
    }

    /// Nonzero idempotents `e` whose only idempotent divisors are `0` and `e`.
    pub fn primitive_idempotents(&self) -> Vec<usize> {
        let idem = self.idempotents();
        idem.iter()
            .copied()
            .filter(|&e| e != 0)
            .filter(|&e| {
                idem.iter()
                    .all(|&d| d == 0 || d == e || self.mul(d, e) != d)
            })
            .collect()
    }

    pub fn invariants(&self) -> RingInvariants {
        let mut orders = BTreeMap::new();
        for x in self.elements() {
            *orders.entry(self.additive_order(x)).or_insert(0usize) += 1;
        }
        RingInvariants {
            size: self.size,
            characteristic: self.characteristic(),
            idempotents: self.idempotents().len(),
            units: self.units().len(),
            square_zero: self.elements().filter(|&x| self.mul(x, x) == 0).count(),
            additive_orders: orders.into_iter().collect(),
        }
    }

    /// Elementary-divisor basis of the additive group: generators with their
    /// orders such that every element is uniquely `Σ x_i g_i`, `0 ≤ x_i < n_i`.
    pub fn additive_basis(&self) -> Vec<(usize, usize)> {
        additive_basis(self.size, |a, b| self.add(a, b))
    }

    /// Checks all ring axioms on this ring's tables.
    pub fn verify(&self) -> Report {
        check_flat_ring(self.size, self.one, &self.add, &self.mul)
    }

    /// Subring on a sorted subset containing 0 that is closed under the
    /// operations, with its own identity `one` (which may differ from 1, as
    /// for a corner `R·e`). Returns the ring and the inclusion table.
    pub(crate) fn restrict_to(&self, elements: &[usize], one: usize) -> (FiniteRing, Vec<usize>) {
        let n = elements.len();
        let mut pos = vec![UNSET; self.size];
        for (i, &e) in elements.iter().enumerate() {
            pos[e] = i;
        }
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                add[i * n + j] = pos[self.add(a, b)];
                mul[i * n + j] = pos[self.mul(a, b)];
            }
        }
        (
            FiniteRing::from_flat_unchecked(n, pos[one], add, mul),
            elements.to_vec(),
        )
    }

    /// The corner ring `R·e` of an idempotent `e`, with identity `e`.
    pub fn corner(&self, e: usize) -> (FiniteRing, Vec<usize>) {
        let mut elems: Vec<usize> = self.elements().map(|r| self.mul(r, e)).collect();
        elems.sort_unstable();
        elems.dedup();
        self.restrict_to(&elems, e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingInvariants {
    pub size: usize,
    pub characteristic: usize,
    pub idempotents: usize,
    pub units: usize,
    pub square_zero: usize,
    pub additive_orders: Vec<(usize, usize)>,
}

fn additive_basis(size: usize, add: impl Fn(usize, usize) -> usize) -> Vec<(usize, usize)> {
    let order = |x: usize| {
        let (mut acc, mut k) = (x, 1);
        while acc != 0 {
            acc = add(acc, x);
            k += 1;
        }
        k
    };
    let times = |k: usize, x: usize| (0..k).fold(0, |acc, _| add(acc, x));
    let mut primes = Vec::new();
    let mut m = size;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    let mut basis = Vec::new();
    for p in primes {
        // p-primary component
        let comp: Vec<usize> = (0..size)
            .filter(|&x| {
                let mut o = order(x);
                while o % p == 0 {
                    o /= p;
                }
                o == 1
            })
            .collect();
        let mut span = vec![false; size];
        span[0] = true;
        let mut span_count = 1;
        while span_count < comp.len() {
            // coset of maximal order in comp/span, lifted to an element whose
            // order equals the coset order (possible since span is pure)
            let mut best: Option<(usize, usize)> = None;
            for &g in &comp {
                if span[g] {
                    continue;
                }
                let mut k = 1;
                while !span[times(k, g)] {
                    k += 1;
                }
                if order(g) == k && best.map_or(true, |(_, bk)| k > bk) {
                    best = Some((g, k));
                }
            }
            let (g, k) = best.expect("pure lift exists in a finite abelian p-group");
            let old: Vec<usize> = (0..size).filter(|&x| span[x]).collect();
            for i in 1..k {
                let gi = times(i, g);
                for &h in &old {
                    let s = add(h, gi);
                    if !span[s] {
                        span[s] = true;
                        span_count += 1;
                    }
                }
            }
            basis.push((g, k));
        }
    }
    basis
}

/// Checks shape and all eight ring axioms of row-major tables.
pub fn check_ring_tables(add: &[Vec<usize>], mul: &[Vec<usize>], one: usize) -> Report {
    let n = add.len();
    let mut report = Report::new();
    let shape_ok = n > 0
        && mul.len() == n
        && add.iter().chain(mul.iter()).all(|r| r.len() == n)
        && add.iter().chain(mul.iter()).flatten().all(|&v| v < n)
        && one < n;
    if !shape_ok {
        report.fail(
            "tables well-formed",
            format!("expected two {n}×{n} tables with entries and identity below {n}"),
        );
        return report;
    }
    check_flat_ring(n, one, &add.concat(), &mul.concat())
}

pub(crate) fn check_flat_ring(n: usize, one: usize, add: &[usize], mul: &[usize]) -> Report {
    let mut report = Report::new();
    if n == 0 || add.len() != n * n || mul.len() != n * n || one >= n || add.iter().chain(mul).any(|&v| v >= n) {
        report.fail("tables well-formed", "table shape or entry out of range");
        return report;
    }
    report.pass("tables well-formed");
    let a = |x: usize, y: usize| add[x * n + y];
    let m = |x: usize, y: usize| mul[x * n + y];
    let first = |f: &dyn Fn(usize, usize, usize) -> Option<String>| -> Result<(), String> {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if let Some(w) = f(x, y, z) {
                        return Err(w);
                    }
                }
            }
        }
        Ok(())
    };
    report.record(
        "additive associativity",
        first(&|x, y, z| {
            (a(a(x, y), z) != a(x, a(y, z))).then(|| format!("x={x}, y={y}, z={z}"))
        }),
    );
    report.record(
        "additive commutativity",
        pairs(n, |x, y| (a(x, y) != a(y, x)).then(|| format!("x={x}, y={y}"))),
    );
    report.record(
        "additive identity",
        singles(n, |x| {
            (a(0, x) != x || a(x, 0) != x).then(|| format!("0 + {x} = {} ≠ {x}", a(0, x)))
        }),
    );
    report.record(
        "additive inverses",
        singles(n, |x| {
            (!(0..n).any(|y| a(x, y) == 0)).then(|| format!("{x} has no additive inverse"))
        }),
    );
    report.record(
        "multiplicative associativity",
        first(&|x, y, z| {
            (m(m(x, y), z) != m(x, m(y, z))).then(|| {
                format!(
                    "x={x}, y={y}, z={z}: (xy)z={} but x(yz)={}",
                    m(m(x, y), z),
                    m(x, m(y, z))
                )
            })
        }),
    );
    report.record(
        "multiplicative commutativity",
        pairs(n, |x, y| {
            (m(x, y) != m(y, x)).then(|| format!("x={x}, y={y}: xy={} but yx={}", m(x, y), m(y, x)))
        }),
    );
    report.record(
        "multiplicative identity",
        singles(n, |x| {
            (m(one, x) != x || m(x, one) != x).then(|| format!("{one}·{x} = {} ≠ {x}", m(one, x)))
        }),
    );
    report.record(
        "distributivity",
        first(&|x, y, z| {
            (m(x, a(y, z)) != a(m(x, y), m(x, z)) || m(a(y, z), x) != a(m(y, x), m(z, x)))
                .then(|| format!("x={x}, y={y}, z={z}: x(y+z)={} but xy+xz={}", m(x, a(y, z)), a(m(x, y), m(x, z))))
        }),
    );
    report
}

fn singles(n: usize, f: impl Fn(usize) -> Option<String>) -> Result<(), String> {
    (0..n).find_map(f).map_or(Ok(()), Err)
}

fn pairs(n: usize, f: impl Fn(usize, usize) -> Option<String>) -> Result<(), String> {
    for x in 0..n {
        for y in 0..n {
            if let Some(w) = f(x, y) {
                return Err(w);
            }
        }
    }
    Ok(())
}

/// An identity-preserving ring homomorphism, stored as an image table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingHom {
    source: Arc<FiniteRing>,
    target: Arc<FiniteRing>,
    map: Vec<usize>,
}

impl RingHom {
    pub fn new(source: Arc<FiniteRing>, target: Arc<FiniteRing>, map: Vec<usize>) -> Result<Self> {
        let h = RingHom { source, target, map };
        let report = h.verify();
        if let Some(c) = report.failures().next() {
            return Err(Error::InvalidHom(format!(
                "{}: {}",
                c.name,
                c.witness.clone().unwrap_or_default()
            )));
        }
        Ok(h)
    }

    /// Wraps a table without checking it; use [`RingHom::verify`] before
    /// trusting the result.
    pub fn new_unchecked(source: Arc<FiniteRing>, target: Arc<FiniteRing>, map: Vec<usize>) -> Self {
        RingHom { source, target, map }
    }

    pub fn identity(ring: Arc<FiniteRing>) -> Self {
        let map = ring.elements().collect();
        RingHom {
            source: ring.clone(),
            target: ring,
            map,
        }
    }

    /// The unique homomorphism into the zero ring.
    pub fn to_zero(source: Arc<FiniteRing>) -> Self {
        let map = vec![0; source.size()];
        RingHom {
            source,
            target: Arc::new(FiniteRing::zero_ring()),
            map,
        }
    }

    pub fn source(&self) -> &Arc<FiniteRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteRing> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &RingHom) -> RingHom {
        debug_assert_eq!(self.target.size(), next.source.size());
        RingHom {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&x| next.map[x]).collect(),
        }
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        for &y in &self.map {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        self.map.iter().all(|&y| !std::mem::replace(&mut hit[y], true))
    }

    pub fn is_bijective(&self) -> bool {
        self.source.size() == self.target.size() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<RingHom> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(RingHom {
            source: self.target.clone(),
            target: self.source.clone(),
            map: inv,
        })
    }

    /// Checks that the table is an identity-preserving ring homomorphism.
    pub fn verify(&self) -> Report {
        let mut report = Report::new();
        let (s, t) = (&*self.source, &*self.target);
        if self.map.len() != s.size() || self.map.iter().any(|&y| y >= t.size()) {
            report.fail(
                "map well-formed",
                format!(
                    "expected {} images below {}",
                    s.size(),
                    t.size()
                ),
            );
            return report;
        }
        report.pass("map well-formed");
        let h = &self.map;
        report.record(
            "preserves addition",
            pairs(s.size(), |x, y| {
                (h[s.add(x, y)] != t.add(h[x], h[y]))
                    .then(|| format!("x={x}, y={y}: h(x+y)={} but h(x)+h(y)={}", h[s.add(x, y)], t.add(h[x], h[y])))
            }),
        );
        report.record(
            "preserves multiplication",
            pairs(s.size(), |x, y| {
                (h[s.mul(x, y)] != t.mul(h[x], h[y]))
                    .then(|| format!("x={x}, y={y}: h(xy)={} but h(x)h(y)={}", h[s.mul(x, y)], t.mul(h[x], h[y])))
            }),
        );
        if h[s.one()] == t.one() {
            report.pass("preserves identity");
        } else {
            report.fail(
                "preserves identity",
                format!("h(1)={} but 1={}", h[s.one()], t.one()),
            );
        }
        report
    }
}

/// An ideal of a finite ring, as a sorted list of elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    ring: Arc<FiniteRing>,
    elements: Vec<usize>,
    mask: Vec<bool>,
}

impl Ideal {
    pub fn new(ring: Arc<FiniteRing>, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.iter().any(|&x| x >= ring.size()) {
            return Err(Error::NotAnIdeal("element out of range".into()));
        }
        let ideal = Self::new_unchecked(ring, elements);
        ideal.validate()?;
        Ok(ideal)
    }

    pub(crate) fn new_unchecked(ring: Arc<FiniteRing>, elements: Vec<usize>) -> Self {
        let mut mask = vec![false; ring.size()];
        for &e in &elements {
            mask[e] = true;
        }
        Ideal {
            ring,
            elements,
            mask,
        }
    }

    fn validate(&self) -> Result<()> {
        let r = &*self.ring;
        if !self.mask[0] {
            return Err(Error::NotAnIdeal("does not contain 0".into()));
        }
        for &x in &self.elements {
            if !self.mask[r.neg(x)] {
                return Err(Error::NotAnIdeal(format!("-{x} missing")));
            }
            for &y in &self.elements {
                if !self.mask[r.add(x, y)] {
                    return Err(Error::NotAnIdeal(format!("{x}+{y} missing")));
                }
            }
            for s in r.elements() {
                if !self.mask[r.mul(s, x)] {
                    return Err(Error::NotAnIdeal(format!("{s}·{x} missing")));
                }
            }
        }
        Ok(())
    }

    /// Smallest ideal containing `generators`.
    pub fn generated(ring: Arc<FiniteRing>, generators: &[usize]) -> Self {
        let r = &*ring;
        let mut mask = vec![false; r.size()];
        mask[0] = true;
        let mut members = vec![0usize];
        let mut frontier: Vec<usize> = generators
            .iter()
            .flat_map(|&g| r.elements().map(move |s| (s, g)))
            .map(|(s, g)| r.mul(s, g))
            .collect();
        while let Some(x) = frontier.pop() {
            if mask[x] {
                continue;
            }
            mask[x] = true;
            let snapshot = members.clone();
            members.push(x);
            for y in snapshot.into_iter().chain(std::iter::once(x)) {
                frontier.push(r.add(x, y));
            }
        }
        let elements = (0..r.size()).filter(|&x| mask[x]).collect();
        Ideal {
            ring,
            elements,
            mask,
        }
    }

    /// Every ideal of the ring, ordered by (size, elements).
    pub fn all(ring: &Arc<FiniteRing>) -> Vec<Ideal> {
        let mut found: Vec<Vec<usize>> = vec![vec![0]];
        let mut i = 0;
        let principal: Vec<Ideal> = ring
            .elements()
            .map(|g| Ideal::generated(ring.clone(), &[g]))
            .collect();
        while i < found.len() {
            let cur = found[i].clone();
            for p in &principal {
                let mut gens = cur.clone();
                gens.extend(&p.elements);
                let sum = Ideal::generated(ring.clone(), &gens).elements;
                if !found.contains(&sum) {
                    found.push(sum);
                }
            }
            i += 1;
        }
        found.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        found
            .into_iter()
            .map(|e| Ideal::new_unchecked(ring.clone(), e))
            .collect()
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask.get(x).copied().unwrap_or(false)
    }

    /// Position of `x` in the sorted element list.
    pub fn position(&self, x: usize) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    /// A pair `(x, y)` of ideal elements with `x·y ≠ 0`, if any.
    pub fn square_zero_witness(&self) -> Option<(usize, usize)> {
        let r = &*self.ring;
        for &x in &self.elements {
            for &y in &self.elements {
                if r.mul(x, y) != 0 {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_square_zero(&self) -> bool {
        self.square_zero_witness().is_none()
    }
}

pub fn ideal_square_is_zero(ideal: &Ideal) -> bool {
    ideal.is_square_zero()
}

pub fn kernel(h: &RingHom) -> Ideal {
    let elements = h
        .source
        .elements()
        .filter(|&x| h.apply(x) == 0)
        .collect();
    Ideal::new_unchecked(h.source.clone(), elements)
}

pub fn make_cyclic_ring(n: usize) -> Result<FiniteRing> {
    if n == 0 {
        return Err(Error::Precondition("ℤ/n needs n ≥ 1".into()));
    }
    Ok(FiniteRing::cyclic(n))
}

/// `R × S` with its projections; `(r, s)` sits at index `r·|S| + s`.
#[derive(Clone, Debug)]
pub struct ProductRing {
    pub ring: Arc<FiniteRing>,
    pub first: RingHom,
    pub second: RingHom,
}

impl ProductRing {
    pub fn index(&self, r: usize, s: usize) -> usize {
        r * self.second.target().size() + s
    }

    pub fn components(&self, i: usize) -> (usize, usize) {
        (self.first.apply(i), self.second.apply(i))
    }
}

pub fn product_ring(r: &Arc<FiniteRing>, s: &Arc<FiniteRing>) -> ProductRing {
    let (nr, ns) = (r.size(), s.size());
    let n = nr * ns;
    let mut add = vec![0; n * n];
    let mut mul = vec![0; n * n];
    for i in 0..n {
        let (r1, s1) = (i / ns, i % ns);
        for j in 0..n {
            let (r2, s2) = (j / ns, j % ns);
            add[i * n + j] = r.add(r1, r2) * ns + s.add(s1, s2);
            mul[i * n + j] = r.mul(r1, r2) * ns + s.mul(s1, s2);
        }
    }
    let ring = Arc::new(FiniteRing::from_flat_unchecked(
        n,
        r.one() * ns + s.one(),
        add,
        mul,
    ));
    ProductRing {
        first: RingHom::new_unchecked(ring.clone(), r.clone(), (0..n).map(|i| i / ns).collect()),
        second: RingHom::new_unchecked(ring.clone(), s.clone(), (0..n).map(|i| i % ns).collect()),
        ring,
    }
}

/// `R / I` with its projection; cosets are numbered by least representative.
pub fn quotient_ring(ideal: &Ideal) -> (Arc<FiniteRing>, RingHom) {
    let r = ideal.ring();
    let mut class = vec![UNSET; r.size()];
    let mut reps = Vec::new();
    for x in r.elements() {
        if class[x] != UNSET {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &i in ideal.elements() {
            class[r.add(x, i)] = c;
        }
    }
    let n = reps.len();
    let mut add = vec![0; n * n];
    let mut mul = vec![0; n * n];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            add[i * n + j] = class[r.add(a, b)];
            mul[i * n + j] = class[r.mul(a, b)];
        }
    }
    let q = Arc::new(FiniteRing::from_flat_unchecked(n, class[r.one()], add, mul));
    let proj = RingHom::new_unchecked(r.clone(), q.clone(), class);
    (q, proj)
}

/// `B ×_A C = {(b, c) | f(b) = g(c)}` with its projections and the structure
/// map `f × g` to `A`.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub ring: Arc<FiniteRing>,
    pub first: RingHom,
    pub second: RingHom,
    pub structure: RingHom,
    pairs: Vec<(usize, usize)>,
    index: Vec<usize>,
    right_size: usize,
}

impl FiberProduct {
    pub fn index_of(&self, b: usize, c: usize) -> Option<usize> {
        match self.index[b * self.right_size + c] {
            UNSET => None,
            i => Some(i),
        }
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

pub fn fiber_product(f: &RingHom, g: &RingHom) -> Result<FiberProduct> {
    if f.target() != g.target() {
        return Err(Error::Precondition(
            "fiber product needs maps with a common target".into(),
        ));
    }
    let (b, c) = (f.source(), g.source());
    let pairs: Vec<(usize, usize)> = b
        .elements()
        .flat_map(|x| c.elements().map(move |y| (x, y)))
        .filter(|&(x, y)| f.apply(x) == g.apply(y))
        .collect();
    let mut index = vec![UNSET; b.size() * c.size()];
    for (i, &(x, y)) in pairs.iter().enumerate() {
        index[x * c.size() + y] = i;
    }
    let n = pairs.len();
    let mut add = vec![0; n * n];
    let mut mul = vec![0; n * n];
    for (i, &(x1, y1)) in pairs.iter().enumerate() {
        for (j, &(x2, y2)) in pairs.iter().enumerate() {
            add[i * n + j] = index[b.add(x1, x2) * c.size() + c.add(y1, y2)];
            mul[i * n + j] = index[b.mul(x1, x2) * c.size() + c.mul(y1, y2)];
        }
    }
    let one = index[b.one() * c.size() + c.one()];
    let ring = Arc::new(FiniteRing::from_flat_unchecked(n, one, add, mul));
    Ok(FiberProduct {
        first: RingHom::new_unchecked(ring.clone(), b.clone(), pairs.iter().map(|p| p.0).collect()),
        second: RingHom::new_unchecked(ring.clone(), c.clone(), pairs.iter().map(|p| p.1).collect()),
        structure: RingHom::new_unchecked(
            ring.clone(),
            f.target().clone(),
            pairs.iter().map(|p| f.apply(p.0)).collect(),
        ),
        ring,
        pairs,
        index,
        right_size: c.size(),
    })
}

/// Search for ring homomorphisms `r → s` with `0 ↦ 0`, `1 ↦ 1`.
pub(crate) fn ring_map_search<'a>(r: &'a FiniteRing, s: &'a FiniteRing) -> MapSearch<'a> {
    MapSearch::new(r.size(), s.size())
        .binary(r.add_table(), s.add_table())
        .binary(r.mul_table(), s.mul_table())
        .pin(0, 0)
        .pin(r.one(), s.one())
}

/// Admissible images under the order and idempotent constraints every ring
/// homomorphism satisfies.
fn hom_prefilter(r: &FiniteRing, s: &FiniteRing) -> Vec<Vec<bool>> {
    let s_orders: Vec<usize> = s.elements().map(|y| s.additive_order(y)).collect();
    r.elements()
        .map(|x| {
            let ox = r.additive_order(x);
            let idem = r.is_idempotent(x);
            s.elements()
                .map(|y| ox % s_orders[y] == 0 && (!idem || s.is_idempotent(y)))
                .collect()
        })
        .collect()
}

/// All identity-preserving ring homomorphisms `r → s`, in lexicographic order
/// of their tables.
pub fn enumerate_homs(r: &Arc<FiniteRing>, s: &Arc<FiniteRing>, limits: &Limits) -> Result<Vec<RingHom>> {
    limits.check_size(r.size())?;
    limits.check_size(s.size())?;
    let mut budget = limits.budget();
    enumerate_homs_with_budget(r, s, &mut budget)
}

pub(crate) fn enumerate_homs_with_budget(
    r: &Arc<FiniteRing>,
    s: &Arc<FiniteRing>,
    budget: &mut Budget,
) -> Result<Vec<RingHom>> {
    let maps = ring_map_search(r, s)
        .allowed(hom_prefilter(r, s))
        .collect(budget)?;
    Ok(maps
        .into_iter()
        .map(|m| RingHom::new_unchecked(r.clone(), s.clone(), m))
        .collect())
}

/// An isomorphism `r → s` if one exists.
pub fn ring_isomorphic(r: &Arc<FiniteRing>, s: &Arc<FiniteRing>, limits: &Limits) -> Result<Option<RingHom>> {
    limits.check_size(r.size())?;
    limits.check_size(s.size())?;
    let mut budget = limits.budget();
    ring_isomorphic_with_budget(r, s, &mut budget)
}

pub(crate) fn ring_isomorphic_with_budget(
    r: &Arc<FiniteRing>,
    s: &Arc<FiniteRing>,
    budget: &mut Budget,
) -> Result<Option<RingHom>> {
    if r.invariants() != s.invariants() {
        return Ok(None);
    }
    let profile = |ring: &FiniteRing, x: usize| {
        (
            ring.additive_order(x),
            ring.is_idempotent(x),
            ring.is_unit(x),
            ring.mul(x, x) == 0,
        )
    };
    let sp: Vec<_> = s.elements().map(|y| profile(s, y)).collect();
    let allowed = r
        .elements()
        .map(|x| {
            let px = profile(r, x);
            sp.iter().map(|py| *py == px).collect()
        })
        .collect();
    let found = ring_map_search(r, s)
        .allowed(allowed)
        .injective(true)
        .first(budget)?;
    Ok(found.map(|m| RingHom::new_unchecked(r.clone(), s.clone(), m)))
}

/// Every finite commutative ring with identity of the given order, one per
/// isomorphism class.
///
/// Ring structures are searched on each abelian group of that order by
/// choosing products of elementary-divisor generators and extending
/// bilinearly; associativity is pruned on generator triples before the full
/// table is built.
pub fn enumerate_rings(order: usize, limits: &Limits) -> Result<Vec<Arc<FiniteRing>>> {
    limits.check_size(order)?;
    let mut budget = limits.budget();
    if order == 1 {
        return Ok(vec![Arc::new(FiniteRing::zero_ring())]);
    }
    let mut found: Vec<(RingInvariants, Arc<FiniteRing>)> = Vec::new();
    for orders in abelian_group_types(order) {
        let k = orders.len();
        let group = CoordinateGroup::new(&orders);
        // candidates for e_i e_j (i ≤ j): elements whose order divides gcd
        let slots: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
        let choices: Vec<Vec<usize>> = slots
            .iter()
            .map(|&(i, j)| {
                let g = gcd(orders[i], orders[j]);
                (0..order).filter(|&x| g % group.order(x) == 0).collect()
            })
            .collect();
        let mut pick = vec![0usize; slots.len()];
        loop {
            budget.tick(1)?;
            let mut prods = vec![vec![0usize; k]; k];
            for (s, &(i, j)) in slots.iter().enumerate() {
                prods[i][j] = choices[s][pick[s]];
                prods[j][i] = choices[s][pick[s]];
            }
            if let Some(ring) = group.ring_from_generator_products(&prods, &mut budget)? {
                let inv = ring.invariants();
                let mut new = true;
                for (i2, other) in &found {
                    if *i2 == inv && ring_isomorphic_with_budget(&ring, other, &mut budget)?.is_some() {
                        new = false;
                        break;
                    }
                }
                if new {
                    found.push((inv, ring));
                }
            }
            // odometer
            let mut s = 0;
            while s < pick.len() {
                pick[s] += 1;
                if pick[s] < choices[s].len() {
                    break;
                }
                pick[s] = 0;
                s += 1;
            }
            if s == pick.len() {
                break;
            }
        }
    }
    Ok(found.into_iter().map(|(_, r)| r).collect())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Elementary-divisor types of abelian groups of order `n`, as lists of
/// prime-power cyclic orders.
fn abelian_group_types(n: usize) -> Vec<Vec<usize>> {
    let mut factors = Vec::new();
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
        p += 1;
    }
    let mut types = vec![Vec::new()];
    for (p, e) in factors {
        let mut next = Vec::new();
        for part in partitions(e, e) {
            for t in &types {
                let mut t: Vec<usize> = t.clone();
                t.extend(part.iter().map(|&k| p.pow(k as u32)));
                next.push(t);
            }
        }
        types = next;
    }
    types
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `⊕ ℤ/n_i` with elements encoded as mixed-radix coordinates, first
/// coordinate most significant.
struct CoordinateGroup {
    orders: Vec<usize>,
    size: usize,
}

impl CoordinateGroup {
    fn new(orders: &[usize]) -> Self {
        CoordinateGroup {
            orders: orders.to_vec(),
            size: orders.iter().product(),
        }
    }

    fn decode(&self, mut x: usize) -> Vec<usize> {
        let mut c = vec![0; self.orders.len()];
        for (i, &n) in self.orders.iter().enumerate().rev() {
            c[i] = x % n;
            x /= n;
        }
        c
    }

    fn encode(&self, c: &[usize]) -> usize {
        c.iter()
            .zip(&self.orders)
            .fold(0, |acc, (&ci, &n)| acc * n + ci % n)
    }

    fn add(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.decode(x), self.decode(y));
        let s: Vec<usize> = a.iter().zip(&b).map(|(p, q)| p + q).collect();
        self.encode(&s)
    }

    fn order(&self, x: usize) -> usize {
        let c = self.decode(x);
        c.iter()
            .zip(&self.orders)
            .map(|(&ci, &n)| n / gcd(ci, n))
            .fold(1, |acc, o| acc / gcd(acc, o) * o)
    }

    fn mul(&self, x: usize, y: usize, prods: &[Vec<Vec<usize>>]) -> usize {
        let (a, b) = (self.decode(x), self.decode(y));
        let mut acc = vec![0usize; self.orders.len()];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                for (l, &p) in prods[i][j].iter().enumerate() {
                    acc[l] = (acc[l] + ai * bj * p) % self.orders[l];
                }
            }
        }
        self.encode(&acc)
    }

    fn ring_from_generator_products(
        &self,
        prods: &[Vec<usize>],
        budget: &mut Budget,
    ) -> Result<Option<Arc<FiniteRing>>> {
        let k = self.orders.len();
        let pc: Vec<Vec<Vec<usize>>> = prods
            .iter()
            .map(|row| row.iter().map(|&p| self.decode(p)).collect())
            .collect();
        let gens: Vec<usize> = (0..k)
            .map(|i| {
                let mut c = vec![0; k];
                c[i] = 1;
                self.encode(&c)
            })
            .collect();
        for &a in &gens {
            for &b in &gens {
                for &c in &gens {
                    let l = self.mul(self.mul(a, b, &pc), c, &pc);
                    let r = self.mul(a, self.mul(b, c, &pc), &pc);
                    if l != r {
                        return Ok(None);
                    }
                }
            }
        }
        let n = self.size;
        budget.tick((n * n) as u64)?;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                add[x * n + y] = self.add(x, y);
                mul[x * n + y] = self.mul(x, y, &pc);
            }
        }
        let one = (0..n).find(|&u| (0..n).all(|x| mul[u * n + x] == x));
        let Some(one) = one else {
            return Ok(None);
        };
        budget.tick((n * n * n) as u64)?;
        match FiniteRing::from_flat(n, one, add, mul) {
            Ok(r) => Ok(Some(Arc::new(r))),
            // bilinear tables from consistent generator products always
            // satisfy the axioms; a failure here means the products were
            // not well defined on the torsion of the generators
            Err(_) => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(r: FiniteRing) -> Arc<FiniteRing> {
        Arc::new(r)
    }

    #[test]
    fn cyclic_rings_satisfy_axioms() {
        for n in 1..=12 {
            assert!(FiniteRing::cyclic(n).verify().passed(), "ℤ/{n}");
        }
    }

    #[test]
    fn zero_ring_has_one_equal_zero() {
        let z = FiniteRing::cyclic(1);
        assert_eq!(z.size(), 1);
        assert_eq!(z.one(), z.zero());
    }

    #[test]
    fn z2_is_a_field() {
        let r = FiniteRing::cyclic(2);
        assert_eq!(r.size(), 2);
        assert_eq!(r.mul(1, 1), 1);
    }

    #[test]
    fn idempotents_of_z6() {
        assert_eq!(FiniteRing::cyclic(6).idempotents(), vec![0, 1, 3, 4]);
    }

    #[test]
    fn product_z2_z3_is_z6() {
        let p = product_ring(&arc(FiniteRing::cyclic(2)), &arc(FiniteRing::cyclic(3)));
        assert_eq!(p.ring.size(), 6);
        assert!(p.ring.verify().passed());
        let iso = ring_isomorphic(&arc(FiniteRing::cyclic(6)), &p.ring, &Limits::default()).unwrap();
        assert!(iso.unwrap().verify().passed());
    }

    #[test]
    fn product_with_zero_ring_absorbs() {
        let r = arc(FiniteRing::cyclic(4));
        let p = product_ring(&r, &arc(FiniteRing::zero_ring()));
        assert!(ring_isomorphic(&r, &p.ring, &Limits::default()).unwrap().is_some());
    }

    #[test]
    fn z2_squared_has_four_idempotents() {
        let z2 = arc(FiniteRing::cyclic(2));
        let p = product_ring(&z2, &z2);
        assert_eq!(p.ring.idempotents().len(), 4);
    }

    #[test]
    fn quotient_of_z4_by_two() {
        let z4 = arc(FiniteRing::cyclic(4));
        let i = Ideal::new(z4.clone(), vec![0, 2]).unwrap();
        let (q, proj) = quotient_ring(&i);
        assert_eq!(q.size(), 2);
        assert_eq!(proj.map(), &[0, 1, 0, 1]);
        assert_eq!(kernel(&proj), i);
    }

    #[test]
    fn quotient_by_trivial_and_unit_ideal() {
        let r = arc(FiniteRing::cyclic(6));
        let (q, proj) = quotient_ring(&Ideal::new(r.clone(), vec![0]).unwrap());
        assert_eq!(*q, *r);
        assert_eq!(proj.map(), &[0, 1, 2, 3, 4, 5]);
        let (z, _) = quotient_ring(&Ideal::new(r.clone(), (0..6).collect()).unwrap());
        assert!(z.is_zero_ring());
    }

    #[test]
    fn non_ideal_subsets_are_rejected() {
        let r = arc(FiniteRing::cyclic(4));
        assert!(Ideal::new(r.clone(), vec![0, 1]).is_err());
        assert!(Ideal::new(r, vec![2]).is_err());
    }

    #[test]
    fn kernels() {
        let z4 = arc(FiniteRing::cyclic(4));
        let z2 = arc(FiniteRing::cyclic(2));
        let red = RingHom::new(z4.clone(), z2, vec![0, 1, 0, 1]).unwrap();
        assert_eq!(kernel(&red).elements(), &[0, 2]);
        assert_eq!(kernel(&RingHom::identity(z4.clone())).elements(), &[0]);
        assert_eq!(kernel(&RingHom::to_zero(z4)).elements(), &[0, 1, 2, 3]);
    }

    #[test]
    fn square_zero_ideals() {
        let z4 = arc(FiniteRing::cyclic(4));
        assert!(Ideal::new(z4.clone(), vec![0, 2]).unwrap().is_square_zero());
        assert!(Ideal::new(z4, vec![0]).unwrap().is_square_zero());
        let z2 = arc(FiniteRing::cyclic(2));
        let p = product_ring(&z2, &z2);
        // (0,1) sits at index 1
        let i = Ideal::new(p.ring.clone(), vec![0, 1]).unwrap();
        assert_eq!(i.square_zero_witness(), Some((1, 1)));
    }

    #[test]
    fn fiber_product_of_reductions() {
        let z4 = arc(FiniteRing::cyclic(4));
        let z2 = arc(FiniteRing::cyclic(2));
        let f = RingHom::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let fp = fiber_product(&f, &f).unwrap();
        assert_eq!(fp.ring.size(), 8);
        assert!(fp.ring.verify().passed());
        for i in fp.ring.elements() {
            assert_eq!(f.apply(fp.first.apply(i)), fp.structure.apply(i));
            assert_eq!(f.apply(fp.second.apply(i)), fp.structure.apply(i));
        }
        assert!(fp.first.verify().passed() && fp.second.verify().passed());
    }

    #[test]
    fn fiber_product_over_identity_is_other_factor() {
        let a = arc(FiniteRing::cyclic(2));
        let c = arc(FiniteRing::cyclic(4));
        let g = RingHom::new(c.clone(), a.clone(), vec![0, 1, 0, 1]).unwrap();
        let fp = fiber_product(&RingHom::identity(a.clone()), &g).unwrap();
        assert!(ring_isomorphic(&fp.ring, &c, &Limits::default()).unwrap().is_some());
        let diag = fiber_product(&RingHom::identity(a.clone()), &RingHom::identity(a.clone())).unwrap();
        assert!(ring_isomorphic(&diag.ring, &a, &Limits::default()).unwrap().is_some());
    }

    #[test]
    fn hom_counts() {
        let l = Limits::default();
        let z2 = arc(FiniteRing::cyclic(2));
        let z3 = arc(FiniteRing::cyclic(3));
        let z4 = arc(FiniteRing::cyclic(4));
        assert_eq!(enumerate_homs(&z2, &z2, &l).unwrap().len(), 1);
        assert_eq!(enumerate_homs(&z4, &z2, &l).unwrap().len(), 1);
        assert!(enumerate_homs(&z2, &z3, &l).unwrap().is_empty());
        let zero = arc(FiniteRing::zero_ring());
        assert_eq!(enumerate_homs(&z4, &zero, &l).unwrap().len(), 1);
        assert!(enumerate_homs(&zero, &z4, &l).unwrap().is_empty());
        assert_eq!(enumerate_homs(&zero, &zero, &l).unwrap().len(), 1);
    }

    #[test]
    fn isomorphism_negative_by_additive_order() {
        let z2 = arc(FiniteRing::cyclic(2));
        let p = product_ring(&z2, &z2);
        let z4 = arc(FiniteRing::cyclic(4));
        assert!(ring_isomorphic(&z4, &p.ring, &Limits::default()).unwrap().is_none());
        let id = ring_isomorphic(&z4, &z4, &Limits::default()).unwrap().unwrap();
        assert_eq!(id.map(), &[0, 1, 2, 3]);
    }

    #[test]
    fn broken_tables_are_rejected_with_witness() {
        let r = FiniteRing::cyclic(3);
        let mut mul = r.mul_rows();
        mul[2][2] = 2;
        let err = FiniteRing::from_tables(r.add_rows(), mul, 1).unwrap_err();
        assert!(matches!(err, Error::InvalidRing { .. }));
    }

    #[test]
    fn polynomial_quotients() {
        // F_4 = F_2[x]/(x^2 + x + 1)
        let f4 = FiniteRing::polynomial_quotient(2, &[1, 1]);
        assert!(f4.verify().passed());
        assert_eq!(f4.units().len(), 3);
        // F_2[e]/(e^2)
        let d = FiniteRing::polynomial_quotient(2, &[0, 0]);
        assert!(d.verify().passed());
        assert_eq!(d.mul(2, 2), 0);
        assert!(d.is_local());
    }

    #[test]
    fn additive_basis_spans_uniquely() {
        for r in [
            FiniteRing::cyclic(12),
            FiniteRing::polynomial_quotient(2, &[0, 0, 1]),
            FiniteRing::polynomial_quotient(4, &[2, 0]),
        ] {
            let basis = r.additive_basis();
            let total: usize = basis.iter().map(|b| b.1).product();
            assert_eq!(total, r.size());
            let mut seen = vec![false; r.size()];
            let mut coords = vec![0usize; basis.len()];
            loop {
                let x = basis
                    .iter()
                    .zip(&coords)
                    .fold(0, |acc, (&(g, _), &c)| r.add(acc, r.times(c, g)));
                assert!(!seen[x]);
                seen[x] = true;
                let mut i = 0;
                while i < coords.len() {
                    coords[i] += 1;
                    if coords[i] < basis[i].1 {
                        break;
                    }
                    coords[i] = 0;
                    i += 1;
                }
                if i == coords.len() {
                    break;
                }
            }
        }
    }

    #[test]
    fn ring_counts_by_order() {
        // commutative unital rings: order 4 → 4, order 9 → 4, order 6 → 1
        let l = Limits::default();
        assert_eq!(enumerate_rings(4, &l).unwrap().len(), 4);
        assert_eq!(enumerate_rings(9, &l).unwrap().len(), 4);
        assert_eq!(enumerate_rings(6, &l).unwrap().len(), 1);
        assert_eq!(enumerate_rings(1, &l).unwrap().len(), 1);
    }

    #[test]
    fn primitive_idempotents_and_corners() {
        let z6 = FiniteRing::cyclic(6);
        assert_eq!(z6.primitive_idempotents(), vec![3, 4]);
        let (c3, incl) = z6.corner(3);
        assert_eq!(c3.size(), 2);
        assert_eq!(incl, vec![0, 3]);
        assert!(c3.verify().passed());
        let (c4, _) = z6.corner(4);
        assert_eq!(c4.size(), 3);
        assert!(c4.is_local());
    }

    #[test]
    fn all_ideals_of_z12() {
        let r = arc(FiniteRing::cyclic(12));
        // one ideal per divisor of 12
        assert_eq!(Ideal::all(&r).len(), 6);
    }
}
