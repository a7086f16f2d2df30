//! Backtrack search over the elements of a group, organised by the
//! stabilizer chain: a node at level `l` fixes the images of the points
//! `0..=l`, so properties can prune on partial image tables.

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;

/// Default node budget for searches that must not run away.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

pub(crate) trait Property {
    /// `partial` agrees with every completion on the points `0..=level`.
    /// Returning `false` prunes the subtree.
    fn consistent(&mut self, _partial: &Perm, _level: usize) -> bool {
        true
    }

    fn accept(&mut self, g: &Perm) -> bool;
}

struct Search<'a, P> {
    group: &'a PermGroup,
    prop: P,
    nodes: u64,
    budget: u64,
}

impl<P: Property> Search<'_, P> {
    fn descend(&mut self, level: usize, partial: &Perm) -> Result<Option<Perm>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget {
                what: "backtrack nodes",
                limit: self.budget as u128,
            });
        }
        let n = self.group.degree();
        if level == n {
            return Ok(self.prop.accept(partial).then(|| partial.clone()));
        }
        let lv = &self.group.chain().levels[level];
        if lv.is_trivial() {
            if !self.prop.consistent(partial, level) {
                return Ok(None);
            }
            return self.descend(level + 1, partial);
        }
        for &b in &lv.orbit {
            let next = match lv.rep(b as usize) {
                Some(u) => u * partial,
                None => partial.clone(),
            };
            if !self.prop.consistent(&next, level) {
                continue;
            }
            if let Some(g) = self.descend(level + 1, &next)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }

    fn prefix_consistent(&mut self, partial: &Perm, upto: usize) -> bool {
        (0..upto).all(|l| self.prop.consistent(partial, l))
    }
}

/// First element of `group` (in search order) with the property.
pub(crate) fn find_element<P: Property>(group: &PermGroup, prop: P, budget: u64) -> Result<Option<Perm>> {
    let mut s = Search {
        group,
        prop,
        nodes: 0,
        budget,
    };
    s.descend(0, &Perm::identity(group.degree()))
}

/// The subgroup `{g ∈ group : P(g)}`; `P` must define a subgroup.
///
/// `known` is an optional subgroup already known to lie in the answer.
/// Levels are completed bottom-up. At level `l` the generators found so far
/// generate the whole answer inside the stabilizer of `0..=l`, so only one
/// base image per orbit of the partial answer needs a search, and a failed
/// image rules out its whole orbit.
pub(crate) fn subgroup_search<P: Property>(
    group: &PermGroup,
    known: Option<&PermGroup>,
    prop: P,
    budget: u64,
) -> Result<PermGroup> {
    let n = group.degree();
    let mut found: Vec<Perm> = Vec::new();
    let mut s = Search {
        group,
        prop,
        nodes: 0,
        budget,
    };
    let identity = Perm::identity(n);
    let base = group.chain().base();
    for &l in base.iter().rev() {
        let mut orbit: Vec<usize> = group.chain().levels[l].orbit.iter().map(|&b| b as usize).collect();
        orbit.sort_unstable();
        let seed: Vec<Perm> = match known {
            Some(k) if !k.is_trivial() => k.chain().levels[l].gens.clone(),
            _ => Vec::new(),
        };
        let mut gens: Vec<Perm> = seed;
        gens.extend(found.iter().cloned());
        let mut covered = vec![false; n];
        let mut dead = vec![false; n];
        let mut failed: Vec<usize> = Vec::new();
        let refresh = |gens: &[Perm], failed: &[usize], covered: &mut Vec<bool>, dead: &mut Vec<bool>| {
            covered.iter_mut().for_each(|c| *c = false);
            dead.iter_mut().for_each(|c| *c = false);
            for x in orbit_under(gens, l, n) {
                covered[x] = true;
            }
            for &f in failed {
                if !dead[f] {
                    for x in orbit_under(gens, f, n) {
                        dead[x] = true;
                    }
                }
            }
        };
        refresh(&gens, &failed, &mut covered, &mut dead);
        for &b in &orbit {
            if covered[b] || dead[b] {
                continue;
            }
            let lv = &group.chain().levels[l];
            let start = lv.rep(b).cloned().unwrap_or_else(|| identity.clone());
            let hit = if s.prefix_consistent(&start, l + 1) {
                s.descend(l + 1, &start)?
            } else {
                None
            };
            match hit {
                Some(g) => {
                    gens.push(g.clone());
                    found.push(g);
                }
                None => failed.push(b),
            }
            refresh(&gens, &failed, &mut covered, &mut dead);
        }
    }
    let mut all: Vec<Perm> = known.map(|k| k.generators().to_vec()).unwrap_or_default();
    all.extend(found);
    Ok(PermGroup::generated_reduced(n, all))
}

fn orbit_under(gens: &[Perm], x: usize, n: usize) -> Vec<usize> {
    let mut seen = vec![false; n];
    seen[x] = true;
    let mut orbit = vec![x];
    let mut head = 0;
    while head < orbit.len() {
        let b = orbit[head];
        head += 1;
        for g in gens {
            let c = g.image(b);
            if !seen[c] {
                seen[c] = true;
                orbit.push(c);
            }
        }
    }
    orbit
}

/// Orbits of a group on ordered pairs of points.
#[derive(Clone, Debug)]
pub(crate) struct Orbitals {
    n: usize,
    id: Vec<u16>,
    sizes: Vec<u32>,
}

impl Orbitals {
    pub(crate) fn new(group: &PermGroup) -> Orbitals {
        let n = group.degree();
        let mut id = vec![u16::MAX; n * n];
        let mut sizes = Vec::new();
        for start in 0..n * n {
            if id[start] != u16::MAX {
                continue;
            }
            let label = sizes.len() as u16;
            id[start] = label;
            let mut queue = vec![start];
            let mut head = 0;
            while head < queue.len() {
                let pair = queue[head];
                head += 1;
                let (x, y) = (pair / n, pair % n);
                for g in group.generators() {
                    let q = g.image(x) * n + g.image(y);
                    if id[q] == u16::MAX {
                        id[q] = label;
                        queue.push(q);
                    }
                }
            }
            sizes.push(queue.len() as u32);
        }
        Orbitals { n, id, sizes }
    }

    #[inline]
    fn get(&self, x: usize, y: usize) -> usize {
        self.id[x * self.n + y] as usize
    }

    fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Sorted orbital sizes, an invariant under conjugation in `Sym(n)`.
    pub(crate) fn size_profile(&self) -> Vec<u32> {
        let mut s = self.sizes.clone();
        s.sort_unstable();
        s
    }
}

/// Checks that a partial map on points sends the orbitals of one group
/// bijectively onto orbitals of the same size of another, which any element
/// conjugating the first group onto the second must do.
#[derive(Clone, Debug)]
pub(crate) struct OrbitalMatcher {
    src: Orbitals,
    dst: Orbitals,
    fwd: Vec<u16>,
    back: Vec<u16>,
}

impl OrbitalMatcher {
    pub(crate) fn new(src: Orbitals, dst: Orbitals) -> OrbitalMatcher {
        OrbitalMatcher {
            fwd: vec![u16::MAX; src.count()],
            back: vec![u16::MAX; dst.count()],
            src,
            dst,
        }
    }

    pub(crate) fn consistent(&mut self, partial: &Perm, level: usize) -> bool {
        self.fwd.iter_mut().for_each(|x| *x = u16::MAX);
        self.back.iter_mut().for_each(|x| *x = u16::MAX);
        for x in 0..=level {
            let fx = partial.image(x);
            for y in 0..=level {
                let fy = partial.image(y);
                let a = self.src.get(x, y);
                let b = self.dst.get(fx, fy);
                if self.src.sizes[a] != self.dst.sizes[b] {
                    return false;
                }
                match (self.fwd[a], self.back[b]) {
                    (u16::MAX, u16::MAX) => {
                        self.fwd[a] = b as u16;
                        self.back[b] = a as u16;
                    }
                    (fa, ba) if fa as usize == b && ba as usize == a => {}
                    _ => return false,
                }
            }
        }
        true
    }
}
