//! Conjugacy in symmetric groups and abstract isomorphism testing.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::actions::orbits;
use crate::backtrack::{find_element, OrbitalMatcher, Orbitals, Property, DEFAULT_NODE_BUDGET};
use crate::error::{Error, Result};
use crate::group::{graph_element, PermGroup};
use crate::perm::Perm;
use crate::structure::{center, conjugacy_classes, derived_series, prime_factors, sylow_subgroup};

/// Groups above this order skip element-level invariants.
pub const ELEMENT_SCREEN_LIMIT: u128 = 100_000;

/// Per-point data preserved by any conjugating element: the orbit length
/// and the sorted orbit lengths of the point stabilizer.
fn point_invariants(g: &PermGroup) -> Vec<Vec<usize>> {
    (0..g.degree())
        .map(|x| {
            let stab = g.point_stabilizer(x).expect("point in range");
            let mut sizes: Vec<usize> = orbits(&stab).iter().map(Vec::len).collect();
            sizes.sort_unstable();
            sizes.push(g.orbit(x).len());
            sizes
        })
        .collect()
}

struct Transporter {
    src: PermGroup,
    dst: PermGroup,
    src_inv: Vec<Vec<usize>>,
    dst_inv: Vec<Vec<usize>>,
    matcher: OrbitalMatcher,
}

impl Property for Transporter {
    fn consistent(&mut self, partial: &Perm, level: usize) -> bool {
        self.src_inv[level] == self.dst_inv[partial.image(level)] && self.matcher.consistent(partial, level)
    }

    fn accept(&mut self, g: &Perm) -> bool {
        self.src.generators().iter().all(|h| self.dst.contains(&h.conj(g)))
    }
}

fn cycle_census(g: &PermGroup) -> Option<Vec<(Vec<usize>, usize)>> {
    if g.order() > ELEMENT_SCREEN_LIMIT {
        return None;
    }
    let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
    for x in g.iter_elements() {
        *counts.entry(x.cycle_type()).or_default() += 1;
    }
    let mut v: Vec<_> = counts.into_iter().collect();
    v.sort();
    Some(v)
}

/// Invariants that agree for groups conjugate in `Sym(n)`.
pub(crate) fn conjugacy_screen(a: &PermGroup, b: &PermGroup) -> bool {
    if a.degree() != b.degree() || a.order() != b.order() {
        return false;
    }
    let sizes = |g: &PermGroup| {
        let mut s: Vec<usize> = orbits(g).iter().map(Vec::len).collect();
        s.sort_unstable();
        s
    };
    if sizes(a) != sizes(b) {
        return false;
    }
    if Orbitals::new(a).size_profile() != Orbitals::new(b).size_profile() {
        return false;
    }
    cycle_census(a) == cycle_census(b)
}

/// Some `g ∈ ambient` with `a^g = b`, or `None` when there is none.
pub fn transporter_in(ambient: &PermGroup, a: &PermGroup, b: &PermGroup) -> Result<Option<Perm>> {
    if a.degree() != b.degree() || a.degree() != ambient.degree() {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    if a.order() != b.order() {
        return Ok(None);
    }
    let prop = Transporter {
        src: a.clone(),
        dst: b.clone(),
        src_inv: point_invariants(a),
        dst_inv: point_invariants(b),
        matcher: OrbitalMatcher::new(Orbitals::new(a), Orbitals::new(b)),
    };
    find_element(ambient, prop, DEFAULT_NODE_BUDGET)
}

/// Some `g ∈ Sym(n)` with `a^g = b`.
pub fn sym_conjugate(a: &PermGroup, b: &PermGroup) -> Result<Option<Perm>> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    if !conjugacy_screen(a, b) {
        return Ok(None);
    }
    transporter_in(&PermGroup::symmetric(a.degree()), a, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsoVerdict {
    Yes,
    No,
    Unresolved,
}

/// Abstract invariants compared before any search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoInvariants {
    pub order: u128,
    /// `(element order, class size)` multiset, when the group is small
    /// enough to enumerate.
    pub classes: Option<Vec<(u64, usize)>>,
    pub derived_orders: Vec<u128>,
    pub center_order: u128,
    pub normal_sylows: Vec<(u128, bool)>,
}

pub fn iso_invariants(g: &PermGroup) -> Result<IsoInvariants> {
    let classes = if g.order() <= ELEMENT_SCREEN_LIMIT {
        let mut c: Vec<(u64, usize)> = conjugacy_classes(g, ELEMENT_SCREEN_LIMIT)?
            .into_iter()
            .map(|(x, size)| (x.order(), size))
            .collect();
        c.sort_unstable();
        Some(c)
    } else {
        None
    };
    let mut normal_sylows = Vec::new();
    for p in prime_factors(g.order()) {
        let s = sylow_subgroup(g, p as u64)?;
        normal_sylows.push((p, s.is_normal_in(g)));
    }
    Ok(IsoInvariants {
        order: g.order(),
        classes,
        derived_orders: derived_series(g).iter().map(PermGroup::order).collect(),
        center_order: center(g)?.order(),
        normal_sylows,
    })
}

/// Greedy small generating set: elements of large order first, then an
/// attempt to replace the result by a pair.
pub fn small_generating_set(g: &PermGroup) -> Result<Vec<Perm>> {
    let n = g.degree();
    if g.is_trivial() {
        return Ok(Vec::new());
    }
    let mut elements = g.elements(ELEMENT_SCREEN_LIMIT)?;
    elements.sort_by_key(|x| std::cmp::Reverse(x.order()));
    let mut gens: Vec<Perm> = Vec::new();
    let mut sub = PermGroup::trivial(n);
    for x in &elements {
        if sub.order() == g.order() {
            break;
        }
        if !sub.contains(x) {
            sub = sub.with_element(x);
            gens.push(x.clone());
        }
    }
    if gens.len() > 2 {
        let reps: Vec<Perm> = conjugacy_classes(g, ELEMENT_SCREEN_LIMIT)?
            .into_iter()
            .map(|c| c.0)
            .collect();
        let mut budget = 200_000u64;
        'outer: for a in &reps {
            for b in &elements {
                if budget == 0 {
                    break 'outer;
                }
                budget -= 1;
                let pair = PermGroup::generated_reduced(n, [a.clone(), b.clone()]);
                if pair.order() == g.order() {
                    gens = vec![a.clone(), b.clone()];
                    break 'outer;
                }
            }
        }
    }
    Ok(gens)
}

struct IsoSearch<'a> {
    src_gens: Vec<Perm>,
    src_orders: Vec<u64>,
    src_class_sizes: Vec<usize>,
    dst: &'a PermGroup,
    dst_elements: Vec<Perm>,
    dst_class_size: Vec<usize>,
    first_candidates: Vec<usize>,
    src_order: u128,
    nodes: u64,
    budget: u64,
}

impl IsoSearch<'_> {
    fn graph_order(&self, images: &[usize]) -> (u128, u128) {
        let m = self.src_gens[0].degree();
        let n = self.dst.degree();
        let gens: Vec<Perm> = images
            .iter()
            .zip(&self.src_gens)
            .map(|(&i, g)| graph_element(g, &self.dst_elements[i], m + n))
            .collect();
        let graph = PermGroup::generated_reduced(m + n, gens);
        let src = PermGroup::generated_reduced(m, self.src_gens[..images.len()].iter().cloned());
        (graph.order(), src.order())
    }

    fn extend(&mut self, images: &mut Vec<usize>) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget {
                what: "isomorphism search nodes",
                limit: self.budget as u128,
            });
        }
        let i = images.len();
        if i == self.src_gens.len() {
            let imgs: Vec<Perm> = images.iter().map(|&k| self.dst_elements[k].clone()).collect();
            let onto = PermGroup::generated_reduced(self.dst.degree(), imgs).order() == self.dst.order();
            return Ok(onto && self.graph_order(images).0 == self.src_order);
        }
        let candidates: Vec<usize> = if i == 0 {
            self.first_candidates.clone()
        } else {
            (0..self.dst_elements.len()).collect()
        };
        for k in candidates {
            let y = &self.dst_elements[k];
            if y.order() != self.src_orders[i] || self.dst_class_size[k] != self.src_class_sizes[i] {
                continue;
            }
            images.push(k);
            let (graph, src) = self.graph_order(images);
            if graph == src && self.extend(images)? {
                return Ok(true);
            }
            images.pop();
        }
        Ok(false)
    }
}

/// Decides whether two permutation groups are abstractly isomorphic.
/// `Unresolved` is returned only when a search budget is exhausted.
pub fn is_isomorphic(a: &PermGroup, b: &PermGroup) -> IsoVerdict {
    match isomorphic_inner(a, b, 2_000_000) {
        Ok(true) => IsoVerdict::Yes,
        Ok(false) => IsoVerdict::No,
        Err(_) => IsoVerdict::Unresolved,
    }
}

fn isomorphic_inner(a: &PermGroup, b: &PermGroup, budget: u64) -> Result<bool> {
    if a.order() != b.order() {
        return Ok(false);
    }
    if a.order() == 1 {
        return Ok(true);
    }
    if a.degree() == b.degree() && sym_conjugate(a, b)?.is_some() {
        return Ok(true);
    }
    if iso_invariants(a)? != iso_invariants(b)? {
        return Ok(false);
    }
    if a.is_abelian() && b.is_abelian() {
        // Equal (element order, class size) histograms decide abelian groups.
        return Ok(true);
    }
    let src_gens = small_generating_set(a)?;
    let src_table = ClassTable::new(a)?;
    let src_class_sizes: Vec<usize> = src_gens.iter().map(|x| src_table.size[src_table.index[x]]).collect();
    let dst_table = ClassTable::new(b)?;
    let first_candidates = dst_table.reps.clone();
    let ClassTable {
        elements: dst_elements,
        size: dst_class_size,
        ..
    } = dst_table;
    let mut search = IsoSearch {
        src_orders: src_gens.iter().map(Perm::order).collect(),
        src_gens,
        src_class_sizes,
        dst: b,
        dst_elements,
        dst_class_size,
        first_candidates,
        src_order: a.order(),
        nodes: 0,
        budget,
    };
    search.extend(&mut Vec::new())
}

/// Elements with the size of their conjugacy class and one representative
/// index per class.
struct ClassTable {
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    size: Vec<usize>,
    reps: Vec<usize>,
}

impl ClassTable {
    fn new(g: &PermGroup) -> Result<ClassTable> {
        let elements = g.elements(ELEMENT_SCREEN_LIMIT)?;
        let index: HashMap<Perm, usize> = elements.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
        let mut size = vec![0usize; elements.len()];
        let mut reps = Vec::new();
        for start in 0..elements.len() {
            if size[start] != 0 {
                continue;
            }
            reps.push(start);
            let mut class = vec![start];
            let mut seen = vec![false; elements.len()];
            seen[start] = true;
            let mut head = 0;
            while head < class.len() {
                let y = &elements[class[head]];
                head += 1;
                for s in g.generators() {
                    let z = index[&y.conj(s)];
                    if !seen[z] {
                        seen[z] = true;
                        class.push(z);
                    }
                }
            }
            for &m in &class {
                size[m] = class.len();
            }
        }
        Ok(ClassTable {
            elements,
            index,
            size,
            reps,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gp(n: usize, gens: &[&str]) -> PermGroup {
        PermGroup::from_generators(n, gens.iter().map(|t| Perm::parse(t, n).unwrap()).collect()).unwrap()
    }

    #[test]
    fn sym_conjugacy() {
        assert!(sym_conjugate(&gp(4, &["(1 2)"]), &gp(4, &["(3 4)"])).unwrap().is_some());
        assert!(sym_conjugate(&gp(4, &["(1 2)(3 4)"]), &gp(4, &["(1 2)"]))
            .unwrap()
            .is_none());
        let h = gp(7, &["(1 2 3)", "(1 2)(4 5 6 7)"]);
        let t = Perm::parse("(1 7)(2 6)", 7).unwrap();
        let hc = h.conjugate_by(&t);
        let g = sym_conjugate(&h, &hc).unwrap().unwrap();
        assert!(h.conjugate_by(&g).same_group(&hc));
    }

    #[test]
    fn transporter_respects_ambient() {
        // (1 2 3) and (1 3 2) generate the same group; two 3-cycles on
        // different supports are conjugate in S4 and in A4.
        let a = gp(4, &["(1 2 3)"]);
        let b = gp(4, &["(2 3 4)"]);
        assert!(transporter_in(&PermGroup::alternating(4), &a, &b).unwrap().is_some());
        let c = gp(4, &["(1 2)(3 4)"]);
        let d = gp(4, &["(1 3)(2 4)"]);
        let v4 = gp(4, &["(1 2)(3 4)", "(1 3)(2 4)"]);
        assert!(transporter_in(&v4, &c, &d).unwrap().is_none());
    }

    #[test]
    fn isomorphism_verdicts() {
        let c4 = PermGroup::cyclic(4);
        let v4 = gp(4, &["(1 2)(3 4)", "(1 3)(2 4)"]);
        assert_eq!(is_isomorphic(&c4, &v4), IsoVerdict::No);
        let h = gp(7, &["(1 2 3)", "(1 2)(4 5 6 7)"]);
        let other = gp(7, &["(5 6 7)", "(1 2 3 4)(5 6)"]);
        assert_eq!(is_isomorphic(&h, &other), IsoVerdict::Yes);
        let s3 = PermGroup::symmetric(3);
        let s3_reg = gp(6, &["(1 2 3)(4 5 6)", "(1 4)(2 6)(3 5)"]);
        assert_eq!(is_isomorphic(&s3, &s3_reg), IsoVerdict::Yes);
        assert_eq!(is_isomorphic(&s3_reg, &PermGroup::cyclic(6)), IsoVerdict::No);
        // Q8 and D8 share order and element orders differ; SL-style pair:
        // C3 x S3 vs C3 ⋊ C6 style groups of order 18 differ by center.
        let q8 = gp(8, &["(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)"]);
        let d8 = gp(4, &["(1 2 3 4)", "(1 3)"]);
        assert_eq!(q8.order(), 8);
        assert_eq!(is_isomorphic(&q8, &d8), IsoVerdict::No);
    }

    #[test]
    fn isomorphism_is_reflexive_and_symmetric() {
        let gs = [
            PermGroup::symmetric(4),
            gp(6, &["(1 2)(3 4)(5 6)", "(1 3 5)(2 4 6)", "(1 2)"]),
            gp(4, &["(1 2 3 4)", "(1 3)"]),
            PermGroup::alternating(4),
        ];
        for a in &gs {
            assert_eq!(is_isomorphic(a, a), IsoVerdict::Yes);
            for b in &gs {
                assert_eq!(is_isomorphic(a, b), is_isomorphic(b, a));
            }
        }
    }
}
