//! Backtracking search for maps between finite carriers that preserve a list
//! of binary and unary operations.
//!
//! Every tentative assignment `x ↦ y` is closed under the operations
//! immediately: images of `op(x, z)` for every already assigned `z` are
//! forced, and a clash prunes the branch. A complete assignment is therefore
//! a homomorphism for every registered operation.

use std::ops::ControlFlow;

use crate::{Budget, Result};

const UNSET: usize = usize::MAX;

pub(crate) struct MapSearch<'a> {
    src_n: usize,
    dst_n: usize,
    binary: Vec<(&'a [usize], &'a [usize])>,
    unary: Vec<(&'a [usize], &'a [usize])>,
    allowed: Option<Vec<Vec<bool>>>,
    pins: Vec<(usize, usize)>,
    injective: bool,
}

impl<'a> MapSearch<'a> {
    pub fn new(src_n: usize, dst_n: usize) -> Self {
        MapSearch {
            src_n,
            dst_n,
            binary: Vec::new(),
            unary: Vec::new(),
            allowed: None,
            pins: Vec::new(),
            injective: false,
        }
    }

    /// Registers a binary operation given as flat `n × n` tables.
    pub fn binary(mut self, src: &'a [usize], dst: &'a [usize]) -> Self {
        debug_assert_eq!(src.len(), self.src_n * self.src_n);
        debug_assert_eq!(dst.len(), self.dst_n * self.dst_n);
        self.binary.push((src, dst));
        self
    }

    pub fn unary(mut self, src: &'a [usize], dst: &'a [usize]) -> Self {
        self.unary.push((src, dst));
        self
    }

    pub fn pin(mut self, x: usize, y: usize) -> Self {
        self.pins.push((x, y));
        self
    }

    pub fn injective(mut self, yes: bool) -> Self {
        self.injective = yes;
        self
    }

    /// Restricts the admissible images of each source element.
    pub fn allowed(mut self, allowed: Vec<Vec<bool>>) -> Self {
        debug_assert_eq!(allowed.len(), self.src_n);
        self.allowed = Some(allowed);
        self
    }

    /// Visits every complete map in lexicographic order of the image table.
    pub fn run<F>(&self, budget: &mut Budget, mut visit: F) -> Result<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if self.dst_n == 0 {
            if self.src_n == 0 {
                let _ = visit(&[]);
            }
            return Ok(());
        }
        let mut st = State {
            image: vec![UNSET; self.src_n],
            used: vec![false; self.dst_n],
            trail: Vec::with_capacity(self.src_n),
            queue: Vec::new(),
        };
        for &(x, y) in &self.pins {
            if !self.assign(&mut st, x, y, budget)? {
                return Ok(());
            }
        }
        let _ = self.descend(&mut st, budget, &mut visit)?;
        Ok(())
    }

    pub fn collect(&self, budget: &mut Budget) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        self.run(budget, |m| {
            out.push(m.to_vec());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    pub fn first(&self, budget: &mut Budget) -> Result<Option<Vec<usize>>> {
        let mut out = None;
        self.run(budget, |m| {
            out = Some(m.to_vec());
            ControlFlow::Break(())
        })?;
        Ok(out)
    }

    fn descend<F>(&self, st: &mut State, budget: &mut Budget, visit: &mut F) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let next = match st.image.iter().position(|&y| y == UNSET) {
            Some(x) => x,
            None => return Ok(visit(&st.image)),
        };
        for y in 0..self.dst_n {
            if !self.admissible(st, next, y) {
                continue;
            }
            budget.tick(1)?;
            let mark = st.trail.len();
            if self.assign(st, next, y, budget)? {
                if self.descend(st, budget, visit)?.is_break() {
                    return Ok(ControlFlow::Break(()));
                }
            }
            st.undo(mark);
        }
        Ok(ControlFlow::Continue(()))
    }

    #[inline]
    fn admissible(&self, st: &State, x: usize, y: usize) -> bool {
        if self.injective && st.used[y] {
            return false;
        }
        match &self.allowed {
            Some(a) => a[x][y],
            None => true,
        }
    }

    /// Assigns `x ↦ y` and closes under the operations. On failure the state
    /// may hold partial assignments; callers undo to their mark.
    fn assign(&self, st: &mut State, x: usize, y: usize, budget: &mut Budget) -> Result<bool> {
        st.queue.clear();
        st.queue.push((x, y));
        let (n, m) = (self.src_n, self.dst_n);
        while let Some((x, y)) = st.queue.pop() {
            let cur = st.image[x];
            if cur != UNSET {
                if cur != y {
                    return Ok(false);
                }
                continue;
            }
            if !self.admissible(st, x, y) {
                return Ok(false);
            }
            st.image[x] = y;
            st.used[y] = true;
            st.trail.push(x);
            budget.tick(1 + st.trail.len() as u64 * self.binary.len() as u64)?;
            for &(s, t) in &self.unary {
                st.queue.push((s[x], t[y]));
            }
            for &(s, t) in &self.binary {
                for &z in &st.trail {
                    let w = st.image[z];
                    st.queue.push((s[x * n + z], t[y * m + w]));
                    st.queue.push((s[z * n + x], t[w * m + y]));
                }
            }
        }
        Ok(true)
    }
}

struct State {
    image: Vec<usize>,
    used: Vec<bool>,
    trail: Vec<usize>,
    queue: Vec<(usize, usize)>,
}

impl State {
    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().unwrap();
            let y = self.image[x];
            self.image[x] = UNSET;
            // `used` is only consulted for injective searches, where each
            // target has at most one preimage.
            self.used[y] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmod_tables(n: usize) -> (Vec<usize>, Vec<usize>) {
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = (a + b) % n;
                mul[a * n + b] = (a * b) % n;
            }
        }
        (add, mul)
    }

    #[test]
    fn additive_endomorphisms_of_z6() {
        let (add, _) = zmod_tables(6);
        let mut budget = Budget::new(1_000_000);
        let maps = MapSearch::new(6, 6)
            .binary(&add, &add)
            .pin(0, 0)
            .collect(&mut budget)
            .unwrap();
        // End(Z/6) ≅ Z/6
        assert_eq!(maps.len(), 6);
        assert!(maps.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn injective_search_finds_automorphisms() {
        let (add, _) = zmod_tables(5);
        let mut budget = Budget::new(1_000_000);
        let maps = MapSearch::new(5, 5)
            .binary(&add, &add)
            .injective(true)
            .collect(&mut budget)
            .unwrap();
        assert_eq!(maps.len(), 4);
    }

    #[test]
    fn budget_is_enforced() {
        let (add, _) = zmod_tables(12);
        let mut budget = Budget::new(5);
        let r = MapSearch::new(12, 12).binary(&add, &add).collect(&mut budget);
        assert!(matches!(r, Err(crate::Error::BudgetExceeded { .. })));
    }
}
