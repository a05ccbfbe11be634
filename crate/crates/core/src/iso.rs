//! Isomorphism search between finite semigroups.
//!
//! Backtracking over element assignments, pruned by per-element invariants
//! and closed under forced products: once `a ↦ a'` and `b ↦ b'` are fixed,
//! `ab ↦ a'b'` is forced.

use crate::semigroup::{Element, FiniteSemigroup};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("isomorphism search exceeded its budget of {budget} nodes")]
pub struct SearchBudgetExceeded {
    pub budget: u64,
}

/// Isomorphism-invariant fingerprint of one element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Signature {
    idempotent: bool,
    index: usize,
    period: usize,
    left_fixers: usize,
    right_fixers: usize,
    commuting: usize,
    square_roots: usize,
    left_image: usize,
    right_image: usize,
}

fn signatures(s: &FiniteSemigroup) -> Vec<Signature> {
    let n = s.order();
    s.elements()
        .map(|x| {
            let (index, period) = s.index_period(x);
            let mut left_image = vec![false; n];
            let mut right_image = vec![false; n];
            for y in 0..n {
                left_image[s.mul(x, y)] = true;
                right_image[s.mul(y, x)] = true;
            }
            Signature {
                idempotent: s.is_idempotent(x),
                index,
                period,
                left_fixers: (0..n).filter(|&y| s.mul(y, x) == x).count(),
                right_fixers: (0..n).filter(|&y| s.mul(x, y) == x).count(),
                commuting: (0..n).filter(|&y| s.mul(x, y) == s.mul(y, x)).count(),
                square_roots: (0..n).filter(|&y| s.mul(y, y) == x).count(),
                left_image: left_image.iter().filter(|&&b| b).count(),
                right_image: right_image.iter().filter(|&&b| b).count(),
            }
        })
        .collect()
}

pub struct IsoSearch<'a> {
    a: &'a FiniteSemigroup,
    b: &'a FiniteSemigroup,
    budget: u64,
}

struct State {
    forward: Vec<Option<Element>>,
    used: Vec<bool>,
    trail: Vec<Element>,
    nodes: u64,
}

impl<'a> IsoSearch<'a> {
    pub fn new(a: &'a FiniteSemigroup, b: &'a FiniteSemigroup) -> Self {
        Self {
            a,
            b,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// First multiplication-preserving bijection `a → b`, if any.
    pub fn first(&self) -> Result<Option<Vec<Element>>, SearchBudgetExceeded> {
        let mut found = None;
        self.run(&mut |m| {
            found = Some(m.to_vec());
            false
        })?;
        Ok(found)
    }

    /// Every isomorphism, in lexicographic order of the search.
    pub fn all(&self) -> Result<Vec<Vec<Element>>, SearchBudgetExceeded> {
        let mut out = Vec::new();
        self.run(&mut |m| {
            out.push(m.to_vec());
            true
        })?;
        Ok(out)
    }

    fn run(&self, visit: &mut dyn FnMut(&[Element]) -> bool) -> Result<(), SearchBudgetExceeded> {
        let n = self.a.order();
        if n != self.b.order() {
            return Ok(());
        }
        let sa = signatures(self.a);
        let sb = signatures(self.b);
        let mut ka = sa.clone();
        let mut kb = sb.clone();
        ka.sort();
        kb.sort();
        if ka != kb {
            return Ok(());
        }
        // Branch on rare signatures first.
        let mut order: Vec<Element> = (0..n).collect();
        order.sort_by_key(|&x| (sa.iter().filter(|s| **s == sa[x]).count(), x));
        let mut state = State {
            forward: vec![None; n],
            used: vec![false; n],
            trail: Vec::new(),
            nodes: 0,
        };
        self.branch(&order, &sa, &sb, &mut state, visit).map(|_| ())
    }

    /// Returns `Ok(false)` when the visitor asked to stop.
    fn branch(
        &self,
        order: &[Element],
        sa: &[Signature],
        sb: &[Signature],
        st: &mut State,
        visit: &mut dyn FnMut(&[Element]) -> bool,
    ) -> Result<bool, SearchBudgetExceeded> {
        let Some(&x) = order.iter().find(|&&x| st.forward[x].is_none()) else {
            let map: Vec<Element> = st.forward.iter().map(|m| m.expect("complete")).collect();
            return Ok(visit(&map));
        };
        for y in 0..self.b.order() {
            if st.used[y] || sa[x] != sb[y] {
                continue;
            }
            st.nodes += 1;
            if st.nodes > self.budget {
                return Err(SearchBudgetExceeded { budget: self.budget });
            }
            let mark = st.trail.len();
            if self.assign(x, y, sa, sb, st) && !self.branch(order, sa, sb, st, visit)? {
                return Ok(false);
            }
            while st.trail.len() > mark {
                let z = st.trail.pop().expect("trail");
                let w = st.forward[z].take().expect("assigned");
                st.used[w] = false;
            }
        }
        Ok(true)
    }

    /// Assigns `x ↦ y` and propagates forced products. Returns false on conflict;
    /// partial assignments stay on the trail for the caller to undo.
    fn assign(&self, x: Element, y: Element, sa: &[Signature], sb: &[Signature], st: &mut State) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((p, q)) = queue.pop() {
            match st.forward[p] {
                Some(existing) if existing == q => continue,
                Some(_) => return false,
                None => {}
            }
            if st.used[q] || sa[p] != sb[q] {
                return false;
            }
            st.forward[p] = Some(q);
            st.used[q] = true;
            st.trail.push(p);
            let assigned: Vec<Element> = st.trail.clone();
            for &r in &assigned {
                let r_img = st.forward[r].expect("on trail");
                for (u, v, u_img, v_img) in [(p, r, q, r_img), (r, p, r_img, q)] {
                    let prod = self.a.mul(u, v);
                    let target = self.b.mul(u_img, v_img);
                    match st.forward[prod] {
                        Some(t) if t != target => return false,
                        Some(_) => {}
                        None => queue.push((prod, target)),
                    }
                }
            }
        }
        true
    }
}

/// Convenience wrapper: a multiplication-preserving bijection `s1 → s2`.
pub fn iso_equivalent(
    s1: &FiniteSemigroup,
    s2: &FiniteSemigroup,
    budget: u64,
) -> Result<Option<Vec<Element>>, SearchBudgetExceeded> {
    IsoSearch::new(s1, s2).with_budget(budget).first()
}

pub fn is_isomorphism(s1: &FiniteSemigroup, s2: &FiniteSemigroup, map: &[Element]) -> bool {
    if s1.order() != s2.order() || map.len() != s1.order() {
        return false;
    }
    let mut seen = vec![false; s2.order()];
    for &m in map {
        if m >= s2.order() || std::mem::replace(&mut seen[m], true) {
            return false;
        }
    }
    s1.elements()
        .all(|x| s1.elements().all(|y| map[s1.mul(x, y)] == s2.mul(map[x], map[y])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteSemigroup {
        FiniteSemigroup::from_fn(n, |x, y| (x + y) % n).unwrap()
    }

    fn klein() -> FiniteSemigroup {
        FiniteSemigroup::from_fn(4, |x, y| x ^ y).unwrap()
    }

    #[test]
    fn self_iso_is_found() {
        let s = cyclic(6);
        let m = iso_equivalent(&s, &s, DEFAULT_BUDGET).unwrap().unwrap();
        assert!(is_isomorphism(&s, &s, &m));
    }

    #[test]
    fn z4_not_klein() {
        assert_eq!(iso_equivalent(&cyclic(4), &klein(), DEFAULT_BUDGET).unwrap(), None);
    }

    #[test]
    fn automorphism_counts() {
        // |Aut(Z_n)| = φ(n), |Aut(Z2×Z2)| = 6
        assert_eq!(IsoSearch::new(&cyclic(5), &cyclic(5)).all().unwrap().len(), 4);
        assert_eq!(IsoSearch::new(&cyclic(6), &cyclic(6)).all().unwrap().len(), 2);
        assert_eq!(IsoSearch::new(&klein(), &klein()).all().unwrap().len(), 6);
        assert_eq!(IsoSearch::new(&cyclic(2), &cyclic(2)).all().unwrap().len(), 1);
    }

    #[test]
    fn permuted_labels() {
        let s = cyclic(6);
        let perm = [3usize, 5, 0, 1, 4, 2];
        let mut inv = [0usize; 6];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let t = FiniteSemigroup::from_fn(6, |x, y| perm[s.mul(inv[x], inv[y])]).unwrap();
        let m = iso_equivalent(&s, &t, DEFAULT_BUDGET).unwrap().unwrap();
        assert!(is_isomorphism(&s, &t, &m));
    }

    #[test]
    fn budget_is_explicit() {
        let s = FiniteSemigroup::from_fn(6, |x, _| x).unwrap();
        // left-zero semigroups: every bijection is an isomorphism
        assert!(IsoSearch::new(&s, &s).with_budget(10).all().is_err());
        assert_eq!(IsoSearch::new(&s, &s).all().unwrap().len(), 720);
    }
}
