//! Permutation groups backed by a deterministic Schreier–Sims stabilizer
//! chain.
//!
//! The chain always uses the full base `0, 1, .., n-1`: level `l` holds the
//! pointwise stabilizer of `0..l` and the orbit of `l` under it. Levels whose
//! orbit is trivial cost nothing, and the nontrivial levels are exactly the
//! base obtained by repeatedly picking the smallest moved point. A fixed base
//! makes every partial base image a prefix of the image table, which the
//! backtrack searches rely on.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::perm::{Perm, INTERNAL_MAX_DEGREE, MAX_DEGREE};

#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub(crate) gens: Vec<Perm>,
    pub(crate) orbit: Vec<u8>,
    reps: Vec<Option<Perm>>,
    inv_reps: Vec<Option<Perm>>,
}

impl Level {
    fn trivial(point: usize) -> Level {
        Level {
            gens: Vec::new(),
            orbit: vec![point as u8],
            reps: Vec::new(),
            inv_reps: Vec::new(),
        }
    }

    fn recompute(&mut self, point: usize, n: usize) {
        if self.gens.is_empty() {
            self.orbit = vec![point as u8];
            self.reps.clear();
            self.inv_reps.clear();
            return;
        }
        let mut reps: Vec<Option<Perm>> = vec![None; n];
        reps[point] = Some(Perm::identity(n));
        let mut orbit = vec![point as u8];
        let mut head = 0;
        while head < orbit.len() {
            let b = orbit[head] as usize;
            head += 1;
            for s in &self.gens {
                let c = s.image(b);
                if reps[c].is_none() {
                    reps[c] = Some(reps[b].as_ref().unwrap() * s);
                    orbit.push(c as u8);
                }
            }
        }
        self.inv_reps = reps.iter().map(|r| r.as_ref().map(Perm::inverse)).collect();
        self.reps = reps;
        self.orbit = orbit;
    }

    #[inline]
    pub(crate) fn is_trivial(&self) -> bool {
        self.orbit.len() == 1
    }

    /// Transversal element `u` with `point^u = b`; `None` for the identity.
    #[inline]
    pub(crate) fn rep(&self, b: usize) -> Option<&Perm> {
        if self.reps.is_empty() {
            None
        } else {
            self.reps[b].as_ref()
        }
    }

    #[inline]
    pub(crate) fn inv_rep(&self, b: usize) -> Option<&Perm> {
        if self.inv_reps.is_empty() {
            None
        } else {
            self.inv_reps[b].as_ref()
        }
    }
}

/// Base, strong generators and explicit transversals.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    pub(crate) levels: Vec<Level>,
    order: u128,
}

impl StabChain {
    fn new(degree: usize) -> StabChain {
        StabChain {
            degree,
            levels: (0..degree).map(Level::trivial).collect(),
            order: 1,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    /// Nontrivial base points (0-based).
    pub fn base(&self) -> Vec<usize> {
        (0..self.degree).filter(|&l| !self.levels[l].is_trivial()).collect()
    }

    /// Basic orbit lengths along the base.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.base().into_iter().map(|l| self.levels[l].orbit.len()).collect()
    }

    /// Sifts `g` from `level` down. Returns the residue and the level at
    /// which sifting stopped (`degree` when it went all the way through).
    pub(crate) fn strip(&self, g: &Perm, level: usize) -> (Perm, usize) {
        let mut h = g.clone();
        for l in level..self.degree {
            let b = h.image(l);
            if b == l {
                continue;
            }
            let lv = &self.levels[l];
            match lv.inv_rep(b) {
                Some(inv) => h = &h * inv,
                None => return (h, l),
            }
        }
        (h, self.degree)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.strip(g, 0).0.is_identity()
    }

    /// Adds a generator; returns `false` when it was already a member.
    fn add_generator(&mut self, g: &Perm) -> bool {
        let (res, _) = self.strip(g, 0);
        if res.is_identity() {
            return false;
        }
        let j = (0..self.degree).find(|&x| g.image(x) != x).unwrap();
        for l in 0..=j {
            self.levels[l].gens.push(g.clone());
            self.levels[l].recompute(l, self.degree);
        }
        self.schreier_sims(j);
        self.order = self
            .levels
            .iter()
            .try_fold(1u128, |acc, lv| acc.checked_mul(lv.orbit.len() as u128))
            .expect("group order overflows u128");
        true
    }

    fn schreier_sims(&mut self, start: usize) {
        let n = self.degree;
        let mut i = start as isize;
        while i >= 0 {
            let l = i as usize;
            let mut jump = None;
            if !self.levels[l].is_trivial() {
                let orbit = self.levels[l].orbit.clone();
                let gens = self.levels[l].gens.clone();
                'search: for &b in &orbit {
                    let b = b as usize;
                    for s in &gens {
                        let c = s.image(b);
                        let lv = &self.levels[l];
                        let mut h = match lv.rep(b) {
                            Some(u) => u * s,
                            None => s.clone(),
                        };
                        if let Some(inv) = lv.inv_rep(c) {
                            h = &h * inv;
                        }
                        if h.is_identity() {
                            continue;
                        }
                        let (res, m) = self.strip(&h, l + 1);
                        if res.is_identity() {
                            continue;
                        }
                        debug_assert!(m < n);
                        for k in l + 1..=m {
                            self.levels[k].gens.push(res.clone());
                            self.levels[k].recompute(k, n);
                        }
                        jump = Some(m);
                        break 'search;
                    }
                }
            }
            match jump {
                Some(m) => i = m as isize,
                None => i -= 1,
            }
        }
    }

    /// Chain of the pointwise stabilizer of `0..level`.
    fn suffix(&self, level: usize) -> StabChain {
        let mut levels: Vec<Level> = (0..level).map(Level::trivial).collect();
        levels.extend(self.levels[level..].iter().cloned());
        let order = levels.iter().map(|lv| lv.orbit.len() as u128).product();
        StabChain {
            degree: self.degree,
            levels,
            order,
        }
    }
}

/// A permutation group given by generators, with a lazily built stabilizer
/// chain. Cloning is cheap once the chain exists.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    chain: OnceLock<Arc<StabChain>>,
}

impl PermGroup {
    /// Group generated by `gens` on `degree` points. Identity and repeated
    /// generators are dropped.
    pub fn from_generators(degree: usize, gens: Vec<Perm>) -> Result<PermGroup> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeTooLarge(degree));
        }
        Self::new_internal(degree, gens)
    }

    pub(crate) fn new_internal(degree: usize, gens: Vec<Perm>) -> Result<PermGroup> {
        if degree > INTERNAL_MAX_DEGREE {
            return Err(Error::DegreeTooLarge(degree));
        }
        let mut kept: Vec<Perm> = Vec::with_capacity(gens.len());
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
            if !g.is_identity() && !kept.contains(&g) {
                kept.push(g);
            }
        }
        Ok(PermGroup {
            degree,
            gens: kept,
            chain: OnceLock::new(),
        })
    }

    /// Internal constructor for generators already known to be valid.
    pub(crate) fn from_gens_unchecked(degree: usize, gens: Vec<Perm>) -> PermGroup {
        Self::new_internal(degree, gens).expect("generators share the group degree")
    }

    /// Group generated by `gens`, keeping only generators that enlarge the
    /// group generated by the earlier ones.
    pub fn generated_reduced(degree: usize, gens: impl IntoIterator<Item = Perm>) -> PermGroup {
        let mut chain = StabChain::new(degree);
        let mut kept = Vec::new();
        for g in gens {
            assert_eq!(g.degree(), degree);
            if chain.add_generator(&g) {
                kept.push(g);
            }
        }
        PermGroup::with_chain(kept, chain)
    }

    fn with_chain(gens: Vec<Perm>, chain: StabChain) -> PermGroup {
        let degree = chain.degree;
        let lock = OnceLock::new();
        let _ = lock.set(Arc::new(chain));
        PermGroup {
            degree,
            gens,
            chain: lock,
        }
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::from_gens_unchecked(degree, Vec::new())
    }

    pub fn symmetric(n: usize) -> PermGroup {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::from_cycles(n, &[vec![0, 1]]).unwrap());
        }
        if n >= 3 {
            gens.push(Perm::from_cycles(n, &[(0..n).collect()]).unwrap());
        }
        PermGroup::from_gens_unchecked(n, gens)
    }

    pub fn alternating(n: usize) -> PermGroup {
        let gens = (2..n)
            .map(|k| Perm::from_cycles(n, &[vec![0, 1, k]]).unwrap())
            .collect();
        PermGroup::from_gens_unchecked(n, gens)
    }

    /// Cyclic group of order `n` generated by an `n`-cycle.
    pub fn cyclic(n: usize) -> PermGroup {
        let gens = if n >= 2 {
            vec![Perm::from_cycles(n, &[(0..n).collect()]).unwrap()]
        } else {
            Vec::new()
        };
        PermGroup::from_gens_unchecked(n.max(1), gens)
    }

    /// Dihedral group of the given order (`2m`), acting on `m` points; the
    /// Klein four-group (order 4) acts on 4 points as `⟨(1 2), (3 4)⟩`.
    pub fn dihedral(order: usize) -> Result<PermGroup> {
        if order == 0 || order % 2 == 1 {
            return Err(Error::Invalid(format!(
                "dihedral group order must be even, got {order}"
            )));
        }
        let m = order / 2;
        Ok(match m {
            1 => PermGroup::cyclic(2),
            2 => PermGroup::from_gens_unchecked(
                4,
                vec![
                    Perm::from_cycles(4, &[vec![0, 1]]).unwrap(),
                    Perm::from_cycles(4, &[vec![2, 3]]).unwrap(),
                ],
            ),
            _ => {
                let rot = Perm::from_cycles(m, &[(0..m).collect()]).unwrap();
                let refl: Vec<usize> = (0..m).map(|i| (m - i) % m).collect();
                PermGroup::from_gens_unchecked(m, vec![rot, Perm::from_images(&refl).unwrap()])
            }
        })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn chain(&self) -> &StabChain {
        self.chain.get_or_init(|| {
            let mut chain = StabChain::new(self.degree);
            for g in &self.gens {
                chain.add_generator(g);
            }
            Arc::new(chain)
        })
    }

    pub(crate) fn chain_arc(&self) -> Arc<StabChain> {
        self.chain();
        self.chain.get().unwrap().clone()
    }

    pub fn order(&self) -> u128 {
        if self.gens.is_empty() {
            return 1;
        }
        self.chain().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        if self.gens.is_empty() {
            return g.is_identity();
        }
        self.chain().contains(g)
    }

    /// `true` when every generator of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.gens.iter().all(|g| other.contains(g))
    }

    /// Equality as sets of permutations.
    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    pub fn is_normal_in(&self, ambient: &PermGroup) -> bool {
        ambient
            .gens
            .iter()
            .all(|g| self.gens.iter().all(|h| self.contains(&h.conj(g))))
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .enumerate()
            .all(|(i, a)| self.gens[i + 1..].iter().all(|b| a * b == b * a))
    }

    /// Deterministic element iterator (no budget check).
    pub fn iter_elements(&self) -> ElementIter {
        ElementIter::new(self.chain_arc())
    }

    /// All elements, failing when the group is larger than `budget`.
    pub fn elements(&self, budget: u128) -> Result<Vec<Perm>> {
        let order = self.order();
        if order > budget {
            return Err(Error::Budget {
                what: "element enumeration",
                limit: budget,
            });
        }
        Ok(self.iter_elements().collect())
    }

    /// Elements of a subgroup-search prefix level: the pointwise stabilizer
    /// of the points `0..level`.
    pub(crate) fn level_subgroup(&self, level: usize) -> PermGroup {
        let chain = self.chain();
        let level = level.min(self.degree);
        if level == 0 {
            return self.clone();
        }
        if level >= self.degree {
            return PermGroup::trivial(self.degree);
        }
        let sub = chain.suffix(level);
        PermGroup::with_chain(chain.levels[level].gens.clone(), sub)
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[x] = true;
        let mut orbit = vec![x];
        let mut head = 0;
        while head < orbit.len() {
            let b = orbit[head];
            head += 1;
            for g in &self.gens {
                let c = g.image(b);
                if !seen[c] {
                    seen[c] = true;
                    orbit.push(c);
                }
            }
        }
        orbit
    }

    /// Stabilizer of the point `x`.
    pub fn point_stabilizer(&self, x: usize) -> Result<PermGroup> {
        if x >= self.degree {
            return Err(Error::PointOutOfRange {
                point: x + 1,
                degree: self.degree,
            });
        }
        if x == 0 {
            return Ok(self.level_subgroup(1));
        }
        let swap = Perm::from_cycles(self.degree, &[vec![0, x]]).unwrap();
        let moved = self.conjugate_by(&swap);
        let stab = moved.level_subgroup(1);
        Ok(stab.conjugate_by(&swap))
    }

    /// `G^g = g⁻¹ G g`.
    pub fn conjugate_by(&self, g: &Perm) -> PermGroup {
        PermGroup::from_gens_unchecked(self.degree, self.gens.iter().map(|h| h.conj(g)).collect())
    }

    /// Subgroup generated by `self` and `other`.
    pub fn join(&self, other: &PermGroup) -> PermGroup {
        let mut chain = (*self.chain_arc()).clone();
        let mut gens = self.gens.clone();
        for g in &other.gens {
            if chain.add_generator(g) {
                gens.push(g.clone());
            }
        }
        PermGroup::with_chain(gens, chain)
    }

    /// Subgroup generated by `self` and an extra element.
    pub fn with_element(&self, g: &Perm) -> PermGroup {
        let mut chain = (*self.chain_arc()).clone();
        let mut gens = self.gens.clone();
        if chain.add_generator(g) {
            gens.push(g.clone());
        }
        PermGroup::with_chain(gens, chain)
    }

    /// Number of moved points.
    pub fn moved_points(&self) -> Vec<usize> {
        (0..self.degree)
            .filter(|&x| self.gens.iter().any(|g| g.image(x) != x))
            .collect()
    }

    /// Smallest `m ≥ 1` with `g^m ∈ self`.
    pub fn element_order_modulo(&self, g: &Perm) -> u64 {
        let mut x = g.clone();
        let mut m = 1;
        while !self.contains(&x) {
            x = &x * g;
            m += 1;
        }
        m
    }

    /// Canonical representative of the right coset `self·x`: the element of
    /// the coset with lexicographically least image table.
    pub fn canonical_coset_rep(&self, x: &Perm) -> Perm {
        if self.gens.is_empty() {
            return x.clone();
        }
        let chain = self.chain();
        let mut x = x.clone();
        for l in 0..self.degree {
            let lv = &chain.levels[l];
            if lv.is_trivial() {
                continue;
            }
            let best = lv
                .orbit
                .iter()
                .map(|&b| b as usize)
                .min_by_key(|&b| x.image(b))
                .unwrap();
            if let Some(u) = lv.rep(best) {
                x = u * &x;
            }
        }
        x
    }

    /// Canonical right coset representatives of `sub` in `self`, starting
    /// with the identity coset.
    pub fn right_transversal(&self, sub: &PermGroup, budget: u128) -> Result<Vec<Perm>> {
        let index = self.order() / sub.order();
        if index > budget {
            return Err(Error::Budget {
                what: "coset enumeration",
                limit: budget,
            });
        }
        let start = sub.canonical_coset_rep(&Perm::identity(self.degree));
        let mut index_of: HashMap<Perm, usize> = HashMap::new();
        index_of.insert(start.clone(), 0);
        let mut reps = vec![start];
        let mut head = 0;
        while head < reps.len() {
            let x = reps[head].clone();
            head += 1;
            for g in &self.gens {
                let y = sub.canonical_coset_rep(&(&x * g));
                if !index_of.contains_key(&y) {
                    index_of.insert(y.clone(), reps.len());
                    reps.push(y);
                }
            }
        }
        Ok(reps)
    }

    /// Action of `self` by right multiplication on the right cosets of
    /// `sub`. Point `i` of the image is the coset `sub·table.transversal[i]`.
    pub fn coset_action(&self, sub: &PermGroup) -> Result<(PermGroup, CosetTable)> {
        let (images, table) = self.coset_action_images(sub)?;
        Ok((PermGroup::new_internal(table.index, images)?, table))
    }

    /// As [`PermGroup::coset_action`], but returning the image of every
    /// generator of `self` in order, identities included.
    pub fn coset_action_images(&self, sub: &PermGroup) -> Result<(Vec<Perm>, CosetTable)> {
        if !sub.is_subgroup_of(self) {
            return Err(Error::NotSubgroup(
                "coset action needs a subgroup of the acting group".into(),
            ));
        }
        let index = self.order() / sub.order();
        if index as usize > INTERNAL_MAX_DEGREE {
            return Err(Error::Budget {
                what: "coset action degree",
                limit: INTERNAL_MAX_DEGREE as u128,
            });
        }
        let reps = self.right_transversal(sub, index)?;
        debug_assert_eq!(reps.len() as u128, index);
        let lookup: HashMap<&Perm, usize> = reps.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let images = self
            .gens
            .iter()
            .map(|g| {
                let table: SmallVec<[u8; 16]> = reps
                    .iter()
                    .map(|x| lookup[&sub.canonical_coset_rep(&(x * g))] as u8)
                    .collect();
                Perm::from_images_unchecked(table)
            })
            .collect();
        let table = CosetTable {
            subgroup: sub.clone(),
            index: reps.len(),
            transversal: reps,
        };
        Ok((images, table))
    }

    /// Kernel of the homomorphism sending `self.generators()[i]` to
    /// `images[i]` (all on `image_degree` points). The images must define a
    /// homomorphism; this is not checked.
    pub fn kernel_of(&self, images: &[Perm], image_degree: usize) -> Result<PermGroup> {
        let n = self.degree;
        let total = n + image_degree;
        if total > INTERNAL_MAX_DEGREE {
            return Err(Error::Budget {
                what: "homomorphism graph degree",
                limit: INTERNAL_MAX_DEGREE as u128,
            });
        }
        // Image points first so the kernel is a suffix of the chain.
        let graph_gens: Vec<Perm> = self
            .gens
            .iter()
            .zip(images)
            .map(|(g, h)| graph_element(h, g, total))
            .collect();
        let graph = PermGroup::new_internal(total, graph_gens)?;
        let kernel = graph.level_subgroup(image_degree);
        let points: Vec<usize> = (image_degree..total).collect();
        let gens = kernel
            .generators()
            .iter()
            .map(|k| k.restricted(&points).expect("kernel preserves the original points"))
            .collect();
        Ok(PermGroup::from_gens_unchecked(n, gens))
    }
}

/// `a ⊕ b` acting on `a.degree() + b.degree()` points.
pub(crate) fn graph_element(a: &Perm, b: &Perm, total: usize) -> Perm {
    let m = a.degree();
    let table: SmallVec<[u8; 16]> = (0..total)
        .map(|x| {
            if x < m {
                a.image(x) as u8
            } else {
                (b.image(x - m) + m) as u8
            }
        })
        .collect();
    Perm::from_images_unchecked(table)
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(deg {}; ", self.degree)?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg {}: ", self.degree)?;
        if self.gens.is_empty() {
            return f.write_str("()");
        }
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Right cosets of a subgroup, one canonical representative each.
#[derive(Clone, Debug)]
pub struct CosetTable {
    pub subgroup: PermGroup,
    pub transversal: Vec<Perm>,
    pub index: usize,
}

/// Streams the elements of a group in a fixed order.
pub struct ElementIter {
    chain: Arc<StabChain>,
    /// Nontrivial levels, deepest first.
    levels: Vec<usize>,
    idx: Vec<usize>,
    partial: Vec<Perm>,
    done: bool,
}

impl ElementIter {
    fn new(chain: Arc<StabChain>) -> ElementIter {
        let levels: Vec<usize> = chain.base().into_iter().rev().collect();
        let mut it = ElementIter {
            idx: vec![0; levels.len()],
            partial: Vec::with_capacity(levels.len()),
            levels,
            chain,
            done: false,
        };
        it.rebuild(0);
        it
    }

    fn rebuild(&mut self, from: usize) {
        self.partial.truncate(from);
        for k in from..self.levels.len() {
            let lv = &self.chain.levels[self.levels[k]];
            let b = lv.orbit[self.idx[k]] as usize;
            let next = match (k, lv.rep(b)) {
                (0, Some(u)) => u.clone(),
                (0, None) => Perm::identity(self.chain.degree),
                (_, Some(u)) => &self.partial[k - 1] * u,
                (_, None) => self.partial[k - 1].clone(),
            };
            self.partial.push(next);
        }
    }
}

impl Iterator for ElementIter {
    type Item = Perm;

    fn next(&mut self) -> Option<Perm> {
        if self.done {
            return None;
        }
        let out = match self.partial.last() {
            Some(p) => p.clone(),
            None => Perm::identity(self.chain.degree),
        };
        let mut k = self.levels.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.idx[k] += 1;
            if self.idx[k] < self.chain.levels[self.levels[k]].orbit.len() {
                self.rebuild(k);
                break;
            }
            self.idx[k] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn p(text: &str, n: usize) -> Perm {
        Perm::parse(text, n).unwrap()
    }

    pub(crate) fn h7() -> PermGroup {
        PermGroup::from_generators(7, vec![p("(1 2 3)", 7), p("(1 2)(4 5 6 7)", 7)]).unwrap()
    }

    #[test]
    fn orders_of_standard_groups() {
        assert_eq!(h7().order(), 12);
        assert_eq!(PermGroup::trivial(5).order(), 1);
        assert_eq!(PermGroup::symmetric(9).order(), 362_880);
        assert_eq!(PermGroup::alternating(5).order(), 60);
        assert_eq!(PermGroup::cyclic(6).order(), 6);
        assert_eq!(PermGroup::dihedral(8).unwrap().order(), 8);
        assert_eq!(PermGroup::dihedral(4).unwrap().order(), 4);
        assert!(PermGroup::dihedral(7).is_err());
        let s9 = PermGroup::from_generators(9, vec![p("(1 2)", 9), p("(1 2 3 4 5 6 7 8 9)", 9)]).unwrap();
        assert_eq!(s9.order(), 362_880);
        assert_eq!(s9.chain().base(), (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn generator_degree_mismatch() {
        let err = PermGroup::from_generators(7, vec![p("(1 2)", 5)]).unwrap_err();
        assert_eq!(err, Error::DegreeMismatch(7, 5));
    }

    #[test]
    fn membership() {
        let h = h7();
        assert!(h.contains(&p("(4 6)(5 7)", 7)));
        assert!(!h.contains(&p("(4 5 6 7)", 7)));
        let s4 = PermGroup::symmetric(4);
        let padded = PermGroup::from_generators(9, s4.generators().iter().map(|g| g.shifted(0, 9)).collect()).unwrap();
        assert!(!padded.contains(&p("(5 6)", 9)));
        assert!(padded.contains(&p("(1 4)", 9)));
    }

    #[test]
    fn elements_are_distinct_members() {
        let h = h7();
        let els = h.elements(100).unwrap();
        assert_eq!(els.len(), 12);
        let set: HashSet<_> = els.iter().cloned().collect();
        assert_eq!(set.len(), 12);
        assert!(els.iter().all(|g| h.contains(g)));
        assert!(els[0].is_identity());
        assert_eq!(
            h.elements(11).unwrap_err(),
            Error::Budget {
                what: "element enumeration",
                limit: 11
            }
        );
        assert_eq!(PermGroup::trivial(3).elements(1).unwrap().len(), 1);
    }

    #[test]
    fn element_order_is_deterministic() {
        let a: Vec<_> = PermGroup::symmetric(4).iter_elements().collect();
        let b: Vec<_> = PermGroup::symmetric(4).iter_elements().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn point_stabilizers_of_h7() {
        let h = h7();
        let h3 = h.point_stabilizer(2).unwrap();
        let expect3 = PermGroup::from_generators(7, vec![p("(1 2)(4 5 6 7)", 7)]).unwrap();
        assert!(h3.same_group(&expect3));
        let h4 = h.point_stabilizer(3).unwrap();
        let expect4 = PermGroup::from_generators(7, vec![p("(1 2 3)", 7)]).unwrap();
        assert!(h4.same_group(&expect4));
        assert_eq!(PermGroup::trivial(4).point_stabilizer(2).unwrap().order(), 1);
        assert!(h.point_stabilizer(7).is_err());
    }

    #[test]
    fn coset_actions() {
        let s3 = PermGroup::symmetric(3);
        let c2 = PermGroup::from_generators(3, vec![p("(1 2)", 3)]).unwrap();
        let (img, table) = s3.coset_action(&c2).unwrap();
        assert_eq!(table.index, 3);
        assert_eq!(img.degree(), 3);
        assert_eq!(img.order(), 6);

        let a3 = PermGroup::alternating(3);
        let (img, _) = s3.coset_action(&a3).unwrap();
        assert_eq!((img.degree(), img.order()), (2, 2));

        let h = h7();
        let h4 = h.point_stabilizer(3).unwrap();
        let (img, table) = h.coset_action(&h4).unwrap();
        assert_eq!(table.index, 4);
        assert_eq!(img.order(), 4);
        assert_eq!(img.orbit(0).len(), 4);
        assert!(img.generators().iter().any(|g| g.order() == 4));

        let not_sub = PermGroup::from_generators(3, vec![p("(1 2)", 3)]).unwrap();
        assert!(PermGroup::alternating(3).coset_action(&not_sub).is_err());
    }

    #[test]
    fn coset_action_kernel_is_core() {
        // Sym(4) on the cosets of a dihedral subgroup has kernel V4.
        let s4 = PermGroup::symmetric(4);
        let d8 = PermGroup::from_generators(4, vec![p("(1 2 3 4)", 4), p("(1 3)", 4)]).unwrap();
        let (img, _) = s4.coset_action(&d8).unwrap();
        let kernel = s4.kernel_of(img.generators(), img.degree()).unwrap();
        let v4 = PermGroup::from_generators(4, vec![p("(1 2)(3 4)", 4), p("(1 3)(2 4)", 4)]).unwrap();
        assert!(kernel.same_group(&v4));
    }

    #[test]
    fn canonical_coset_reps_agree_on_cosets() {
        let s4 = PermGroup::symmetric(4);
        let d8 = PermGroup::from_generators(4, vec![p("(1 2 3 4)", 4), p("(1 3)", 4)]).unwrap();
        let reps = s4.right_transversal(&d8, 100).unwrap();
        assert_eq!(reps.len(), 3);
        for x in s4.iter_elements() {
            let c = d8.canonical_coset_rep(&x);
            assert!(reps.contains(&c));
            assert!(d8.contains(&(&x * &c.inverse())));
        }
    }

    #[test]
    fn orbit_stabilizer_on_sample_groups() {
        for g in [h7(), PermGroup::symmetric(5), PermGroup::dihedral(10).unwrap()] {
            for x in 0..g.degree() {
                let stab = g.point_stabilizer(x).unwrap();
                assert_eq!(g.orbit(x).len() as u128 * stab.order(), g.order());
            }
        }
    }

    #[test]
    fn transversal_product_matches_order() {
        let g = PermGroup::symmetric(6);
        let product: u128 = g.chain().orbit_lengths().iter().map(|&l| l as u128).product();
        assert_eq!(product, 720);
        assert!(g.generators().iter().all(|x| g.contains(x)));
    }
}
