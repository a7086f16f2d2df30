//! Centralizers, normalizers, cores, intersections and normal structure.
//!
//! Subgroups defined by a property are found with the chain backtrack; the
//! remaining constructions are closures under generators.

use std::collections::HashSet;

use crate::actions::{orbits, restriction};
use crate::backtrack::{subgroup_search, OrbitalMatcher, Orbitals, Property, DEFAULT_NODE_BUDGET};
use crate::error::{Error, Result};
use crate::group::{PermGroup, StabChain};
use crate::perm::Perm;

/// Elements commuting with every element of a generating list, pruned by
/// `(x^h)^c = (x^c)^h` on the points already mapped.
struct Commuting {
    gens: Vec<Perm>,
    invs: Vec<Perm>,
}

impl Commuting {
    fn new(gens: &[Perm]) -> Commuting {
        Commuting {
            gens: gens.to_vec(),
            invs: gens.iter().map(Perm::inverse).collect(),
        }
    }
}

impl Property for Commuting {
    fn consistent(&mut self, partial: &Perm, level: usize) -> bool {
        let x = level;
        let cx = partial.image(x);
        for (h, hi) in self.gens.iter().zip(&self.invs) {
            let y = h.image(x);
            if y <= level && partial.image(y) != h.image(cx) {
                return false;
            }
            let w = hi.image(x);
            if w <= level && cx != h.image(partial.image(w)) {
                return false;
            }
        }
        true
    }

    fn accept(&mut self, g: &Perm) -> bool {
        self.gens.iter().all(|h| g * h == h * g)
    }
}

struct Normalizing {
    sub: PermGroup,
    matcher: OrbitalMatcher,
}

impl Property for Normalizing {
    fn consistent(&mut self, partial: &Perm, level: usize) -> bool {
        self.matcher.consistent(partial, level)
    }

    fn accept(&mut self, g: &Perm) -> bool {
        self.sub.generators().iter().all(|h| self.sub.contains(&h.conj(g)))
    }
}

struct Member {
    chain: std::sync::Arc<StabChain>,
    trivial: bool,
}

impl Property for Member {
    fn consistent(&mut self, partial: &Perm, level: usize) -> bool {
        if self.trivial {
            return (0..=level).all(|x| partial.image(x) == x);
        }
        has_prefix(&self.chain, partial, level)
    }

    fn accept(&mut self, g: &Perm) -> bool {
        self.trivial && g.is_identity() || !self.trivial && self.chain.contains(g)
    }
}

/// Some element of the chain's group agrees with `p` on `0..=upto`.
fn has_prefix(chain: &StabChain, p: &Perm, upto: usize) -> bool {
    let mut cur: Vec<usize> = (0..=upto).map(|x| p.image(x)).collect();
    for i in 0..=upto {
        let b = cur[i];
        if b == i {
            continue;
        }
        match chain.levels[i].inv_rep(b) {
            Some(inv) => cur.iter_mut().for_each(|c| *c = inv.image(*c)),
            None => return false,
        }
    }
    true
}

/// `C_G(S)` for a list of elements `S` of the same degree.
pub fn centralizer(group: &PermGroup, of: &[Perm]) -> Result<PermGroup> {
    for s in of {
        if s.degree() != group.degree() {
            return Err(Error::DegreeMismatch(group.degree(), s.degree()));
        }
    }
    let known = PermGroup::generated_reduced(
        group.degree(),
        of.iter()
            .filter(|s| group.contains(s))
            .filter(|&s| of.iter().all(|t| s * t == t * s))
            .cloned(),
    );
    subgroup_search(group, Some(&known), Commuting::new(of), DEFAULT_NODE_BUDGET)
}

pub fn center(group: &PermGroup) -> Result<PermGroup> {
    centralizer(group, group.generators())
}

/// `C_{Sym(n)}(G)`. When the orbit sizes of `G` are pairwise distinct the
/// result is also built orbit by orbit from `N_T(T_a)/T_a` and the two
/// answers are compared.
pub fn centralizer_in_sym(g: &PermGroup) -> Result<PermGroup> {
    let sym = PermGroup::symmetric(g.degree());
    let c = centralizer(&sym, g.generators())?;
    if let Some(other) = centralizer_by_orbits(g)? {
        if !c.same_group(&other) {
            return Err(Error::Internal(format!(
                "centralizer methods disagree for {g}: {c} vs {other}"
            )));
        }
    }
    Ok(c)
}

/// Orbit-wise centralizer construction, `None` unless all orbit sizes are
/// distinct.
pub fn centralizer_by_orbits(g: &PermGroup) -> Result<Option<PermGroup>> {
    let n = g.degree();
    let orbs = orbits(g);
    let mut sizes: Vec<usize> = orbs.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    if sizes.windows(2).any(|w| w[0] == w[1]) {
        return Ok(None);
    }
    let mut gens = Vec::new();
    for orbit in &orbs {
        if orbit.len() == 1 {
            continue;
        }
        let t = restriction(g, orbit)?;
        let stab = t.point_stabilizer(0)?;
        let norm = normalizer(&t, &stab)?;
        // a^t ↦ a^{m t}: point x = 0^{t_x} goes to (0^m)^{t_x}.
        let transversal = orbit_transversal(&t, 0);
        for m in norm.generators() {
            let am = m.image(0);
            let mut images: Vec<usize> = (0..n).collect();
            for (x, tx) in transversal.iter().enumerate() {
                images[orbit[x]] = orbit[tx.image(am)];
            }
            gens.push(Perm::from_images(&images)?);
        }
    }
    Ok(Some(PermGroup::generated_reduced(n, gens)))
}

/// `t_x` with `a^{t_x} = x` for every point of the orbit of `a`.
fn orbit_transversal(g: &PermGroup, a: usize) -> Vec<Perm> {
    let n = g.degree();
    let mut reps: Vec<Option<Perm>> = vec![None; n];
    reps[a] = Some(Perm::identity(n));
    let mut queue = vec![a];
    let mut head = 0;
    while head < queue.len() {
        let b = queue[head];
        head += 1;
        for s in g.generators() {
            let c = s.image(b);
            if reps[c].is_none() {
                reps[c] = Some(reps[b].as_ref().unwrap() * s);
                queue.push(c);
            }
        }
    }
    reps.into_iter().map(|r| r.expect("transitive")).collect()
}

/// `N_G(H) = {g ∈ G : H^g = H}`. `H` need not lie in `G`.
pub fn normalizer(group: &PermGroup, sub: &PermGroup) -> Result<PermGroup> {
    if group.degree() != sub.degree() {
        return Err(Error::DegreeMismatch(group.degree(), sub.degree()));
    }
    let known = if sub.is_subgroup_of(group) {
        sub.clone()
    } else {
        intersection(group, sub)?
    };
    let orb = Orbitals::new(sub);
    let prop = Normalizing {
        sub: sub.clone(),
        matcher: OrbitalMatcher::new(orb.clone(), orb),
    };
    subgroup_search(group, Some(&known), prop, DEFAULT_NODE_BUDGET)
}

pub fn intersection(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    let (small, big) = if a.order() <= b.order() { (a, b) } else { (b, a) };
    if small.is_subgroup_of(big) {
        return Ok(small.clone());
    }
    let prop = Member {
        chain: big.chain_arc(),
        trivial: big.is_trivial(),
    };
    subgroup_search(small, None, prop, DEFAULT_NODE_BUDGET)
}

/// Largest normal subgroup of `group` inside `sub`.
pub fn core(group: &PermGroup, sub: &PermGroup) -> Result<PermGroup> {
    let mut c = sub.clone();
    loop {
        let mut changed = false;
        for g in group.generators() {
            let conj = c.conjugate_by(g);
            if !conj.is_subgroup_of(&c) {
                c = intersection(&c, &conj)?;
                changed = true;
            }
        }
        if !changed {
            return Ok(c);
        }
    }
}

/// Smallest normal subgroup of `group` containing the elements `of`.
pub fn normal_closure(group: &PermGroup, of: &[Perm]) -> PermGroup {
    let n = group.degree();
    let mut closure = PermGroup::generated_reduced(n, of.iter().cloned());
    let mut i = 0;
    while i < closure.generators().len() {
        let h = closure.generators()[i].clone();
        for g in group.generators() {
            let c = h.conj(g);
            if !closure.contains(&c) {
                closure = closure.with_element(&c);
            }
        }
        i += 1;
    }
    closure
}

pub fn derived_subgroup(group: &PermGroup) -> PermGroup {
    let gens = group.generators();
    let comms: Vec<Perm> = gens
        .iter()
        .enumerate()
        .flat_map(|(i, a)| gens[i + 1..].iter().map(move |b| a.commutator(b)))
        .filter(|c| !c.is_identity())
        .collect();
    normal_closure(group, &comms)
}

/// `G, G', G'', …` down to the perfect residual (included once).
pub fn derived_series(group: &PermGroup) -> Vec<PermGroup> {
    let mut series = vec![group.clone()];
    loop {
        let last = series.last().unwrap();
        let d = derived_subgroup(last);
        if d.order() == last.order() {
            return series;
        }
        series.push(d);
    }
}

pub fn perfect_residual(group: &PermGroup) -> PermGroup {
    derived_series(group).pop().unwrap()
}

pub fn is_perfect(group: &PermGroup) -> bool {
    derived_subgroup(group).order() == group.order()
}

pub fn is_solvable(group: &PermGroup) -> bool {
    perfect_residual(group).is_trivial()
}

pub(crate) fn prime_factors(mut m: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// A Sylow `p`-subgroup, grown one factor `p` at a time inside successive
/// normalizers. Trivial when `p` does not divide `|G|`.
pub fn sylow_subgroup(group: &PermGroup, p: u64) -> Result<PermGroup> {
    let p128 = p as u128;
    let mut target = 1u128;
    let mut m = group.order();
    while m.is_multiple_of(p128) {
        target *= p128;
        m /= p128;
    }
    let mut sylow = PermGroup::trivial(group.degree());
    while sylow.order() < target {
        let norm = normalizer(group, &sylow)?;
        let step = norm
            .generators()
            .iter()
            .cloned()
            .chain(norm.iter_elements())
            .find_map(|x| {
                let k = sylow.element_order_modulo(&x);
                k.is_multiple_of(p).then(|| x.pow((k / p) as i64))
            })
            .ok_or_else(|| Error::Internal("no p-element in the normalizer".into()))?;
        sylow = sylow.with_element(&step);
    }
    Ok(sylow)
}

/// Nilpotent exactly when every Sylow subgroup is normal.
pub fn is_nilpotent(group: &PermGroup) -> Result<bool> {
    for p in prime_factors(group.order()) {
        let s = sylow_subgroup(group, p as u64)?;
        if !s.is_normal_in(group) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Conjugacy classes of elements as `(representative, size)`, in element
/// enumeration order of the first member met.
pub fn conjugacy_classes(group: &PermGroup, budget: u128) -> Result<Vec<(Perm, usize)>> {
    let elements = group.elements(budget)?;
    let mut seen: HashSet<Perm> = HashSet::with_capacity(elements.len());
    let mut classes = Vec::new();
    for x in elements {
        if seen.contains(&x) {
            continue;
        }
        let mut class = vec![x.clone()];
        seen.insert(x.clone());
        let mut head = 0;
        while head < class.len() {
            let y = class[head].clone();
            head += 1;
            for g in group.generators() {
                let z = y.conj(g);
                if seen.insert(z.clone()) {
                    class.push(z);
                }
            }
        }
        classes.push((x, class.len()));
    }
    Ok(classes)
}

/// All normal subgroups, from normal closures of class representatives and
/// their joins, sorted by order.
pub fn normal_subgroups(group: &PermGroup, budget: u128) -> Result<Vec<PermGroup>> {
    let n = group.degree();
    let mut found: Vec<PermGroup> = vec![PermGroup::trivial(n)];
    let push = |found: &mut Vec<PermGroup>, g: PermGroup| {
        if !found.iter().any(|f| f.same_group(&g)) {
            found.push(g);
            true
        } else {
            false
        }
    };
    for (x, _) in conjugacy_classes(group, budget)? {
        if !x.is_identity() {
            push(&mut found, normal_closure(group, &[x]));
        }
    }
    let mut i = 0;
    while i < found.len() {
        for j in 0..i {
            let joined = found[i].join(&found[j]);
            push(&mut found, joined);
        }
        i += 1;
    }
    found.sort_by_key(PermGroup::order);
    Ok(found)
}

/// Minimal elements among the nontrivial groups of a list of normal
/// subgroups, each returned once.
pub fn minimal_normal_subgroups(normals: &[PermGroup]) -> Vec<PermGroup> {
    let mut out: Vec<PermGroup> = Vec::new();
    let mut sorted: Vec<&PermGroup> = normals.iter().filter(|g| !g.is_trivial()).collect();
    sorted.sort_by_key(|g| g.order());
    for g in sorted {
        if !out.iter().any(|m| m.is_subgroup_of(g)) {
            out.push(g.clone());
        }
    }
    out
}

/// An internal direct product decomposition `G = left × right`.
#[derive(Clone, Debug)]
pub struct DirectDecomposition {
    pub left: PermGroup,
    pub right: PermGroup,
}

/// All unordered pairs of nontrivial normal subgroups with trivial
/// intersection and `|A||B| = |G|`, `left` being the one of smaller order
/// (earlier in the list on ties).
pub fn direct_decompositions(group: &PermGroup, normals: &[PermGroup]) -> Result<Vec<DirectDecomposition>> {
    let order = group.order();
    let mut out = Vec::new();
    for (i, a) in normals.iter().enumerate() {
        if a.is_trivial() || a.order() == order {
            continue;
        }
        for b in &normals[i + 1..] {
            if b.is_trivial() || a.order() * b.order() != order {
                continue;
            }
            if intersection(a, b)?.is_trivial() {
                let (left, right) = if b.order() < a.order() {
                    (b.clone(), a.clone())
                } else {
                    (a.clone(), b.clone())
                };
                out.push(DirectDecomposition { left, right });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{fixed_points, wreath_product};

    fn p(text: &str, n: usize) -> Perm {
        Perm::parse(text, n).unwrap()
    }

    fn gp(n: usize, gens: &[&str]) -> PermGroup {
        PermGroup::from_generators(n, gens.iter().map(|t| p(t, n)).collect()).unwrap()
    }

    fn h7() -> PermGroup {
        gp(7, &["(1 2 3)", "(1 2)(4 5 6 7)"])
    }

    fn k8() -> PermGroup {
        gp(
            8,
            &[
                "(1 2)(3 4)(5 6)(7 8)",
                "(1 3)(2 4)(5 7)(6 8)",
                "(1 5)(2 6)(3 7)(4 8)",
                "(2 3 5 4 7 8 6)",
            ],
        )
    }

    fn brute_centralizer(g: &PermGroup) -> usize {
        PermGroup::symmetric(g.degree())
            .iter_elements()
            .filter(|c| g.generators().iter().all(|h| c * h == h * c))
            .count()
    }

    #[test]
    fn centralizers_in_sym() {
        let c = centralizer_in_sym(&h7()).unwrap();
        assert!(c.same_group(&gp(7, &["(4 5 6 7)"])));
        assert!(centralizer_in_sym(&k8()).unwrap().is_trivial());
        let case_a = gp(9, &["(1 2 3)", "(1 3)(4 5 6 7)", "(8 9)"]);
        let c = centralizer_in_sym(&case_a).unwrap();
        assert!(c.same_group(&gp(9, &["(4 5 6 7)", "(8 9)"])));
    }

    #[test]
    fn centralizer_matches_brute_force() {
        for g in [
            h7(),
            gp(6, &["(1 2)(3 4)(5 6)"]),
            gp(6, &["(1 2 3)(4 5 6)"]),
            gp(5, &["(1 2 3 4 5)"]),
            gp(6, &["(1 2)", "(3 4 5)"]),
            PermGroup::trivial(5),
        ] {
            let c = centralizer_in_sym(&g).unwrap();
            assert_eq!(c.order() as usize, brute_centralizer(&g), "{g}");
        }
    }

    #[test]
    fn normalizers() {
        let h = h7();
        let h4 = gp(7, &["(1 2 3)"]);
        let h3 = gp(7, &["(1 2)(4 5 6 7)"]);
        assert!(normalizer(&h, &h4).unwrap().same_group(&h));
        assert!(normalizer(&h, &h3).unwrap().same_group(&h3));
        let s3 = PermGroup::symmetric(3);
        assert!(normalizer(&s3, &PermGroup::alternating(3)).unwrap().same_group(&s3));
        assert_eq!(
            normalizer(&PermGroup::symmetric(5), &gp(5, &["(1 2 3 4 5)"]))
                .unwrap()
                .order(),
            20
        );
    }

    #[test]
    fn normalizer_matches_brute_force() {
        let s5 = PermGroup::symmetric(5);
        for h in [
            gp(5, &["(1 2)(3 4)"]),
            gp(5, &["(1 2 3)", "(1 2)"]),
            gp(5, &["(1 2)(3 4)", "(1 3)(2 4)"]),
        ] {
            let brute = s5
                .iter_elements()
                .filter(|g| h.generators().iter().all(|x| h.contains(&x.conj(g))))
                .count();
            assert_eq!(normalizer(&s5, &h).unwrap().order() as usize, brute);
        }
    }

    #[test]
    fn cores() {
        let s4 = PermGroup::symmetric(4);
        let s3 = gp(4, &["(1 2)", "(1 2 3)"]);
        assert!(core(&s4, &s3).unwrap().is_trivial());
        let d8 = gp(4, &["(1 2 3 4)", "(1 3)"]);
        let v4 = gp(4, &["(1 2)(3 4)", "(1 3)(2 4)"]);
        assert!(core(&s4, &d8).unwrap().same_group(&v4));
        assert!(core(&s4, &s4).unwrap().same_group(&s4));
    }

    #[test]
    fn intersections() {
        let h = gp(8, &["(1 2 3)", "(1 3)(4 5 6 7)"]);
        let c = centralizer_in_sym(&h).unwrap();
        assert!(intersection(&c, &h).unwrap().same_group(&gp(8, &["(4 6)(5 7)"])));
        assert!(intersection(&h, &h).unwrap().same_group(&h));
        assert!(intersection(&gp(4, &["(1 2)"]), &gp(4, &["(1 3)"]))
            .unwrap()
            .is_trivial());
    }

    #[test]
    fn derived_and_residual() {
        assert!(derived_subgroup(&PermGroup::symmetric(4)).same_group(&PermGroup::alternating(4)));
        assert_eq!(perfect_residual(&PermGroup::alternating(5)).order(), 60);
        assert!(is_solvable(&PermGroup::symmetric(4)));
        assert!(!is_solvable(&PermGroup::symmetric(5)));
    }

    #[test]
    fn nilpotency() {
        assert!(!is_nilpotent(&h7()).unwrap());
        assert!(is_nilpotent(&gp(4, &["(1 2 3 4)", "(1 3)"])).unwrap());
        assert!(is_nilpotent(&PermGroup::cyclic(6)).unwrap());
        assert!(!is_nilpotent(&PermGroup::symmetric(3)).unwrap());
    }

    #[test]
    fn sylows() {
        assert_eq!(sylow_subgroup(&PermGroup::symmetric(4), 2).unwrap().order(), 8);
        let s7 = sylow_subgroup(&k8(), 7).unwrap();
        assert_eq!(s7.order(), 7);
        assert!(sylow_subgroup(&PermGroup::cyclic(6), 5).unwrap().is_trivial());
        assert_eq!(sylow_subgroup(&PermGroup::symmetric(9), 3).unwrap().order(), 81);
    }

    #[test]
    fn normal_structure() {
        let s4 = PermGroup::symmetric(4);
        let normals = normal_subgroups(&s4, 1000).unwrap();
        assert_eq!(
            normals.iter().map(|g| g.order()).collect::<Vec<_>>(),
            vec![1, 4, 12, 24]
        );
        let mins = minimal_normal_subgroups(&normals);
        assert_eq!(mins.len(), 1);
        assert_eq!(mins[0].order(), 4);
        let c6 = PermGroup::cyclic(6);
        let mins = minimal_normal_subgroups(&normal_subgroups(&c6, 100).unwrap());
        assert_eq!(mins.iter().map(|g| g.order()).collect::<Vec<_>>(), vec![2, 3]);
        let a5 = PermGroup::alternating(5);
        assert_eq!(
            minimal_normal_subgroups(&normal_subgroups(&a5, 100).unwrap())[0].order(),
            60
        );
    }

    #[test]
    fn decompositions() {
        let g = gp(4, &["(1 2)", "(3 4)"]);
        let d = direct_decompositions(&g, &normal_subgroups(&g, 100).unwrap()).unwrap();
        assert_eq!(d.len(), 3);
        let (a, b) = (gp(4, &["(1 2)"]), gp(4, &["(3 4)"]));
        assert!(d.iter().any(|x| {
            x.left.same_group(&a) && x.right.same_group(&b) || x.left.same_group(&b) && x.right.same_group(&a)
        }));
        let s3 = PermGroup::symmetric(3);
        assert!(direct_decompositions(&s3, &normal_subgroups(&s3, 100).unwrap())
            .unwrap()
            .is_empty());
        let c6 = PermGroup::cyclic(6);
        let d = direct_decompositions(&c6, &normal_subgroups(&c6, 100).unwrap()).unwrap();
        assert_eq!((d.len(), d[0].left.order(), d[0].right.order()), (1, 2, 3));
    }

    #[test]
    fn fixed_points_count_normalizer_quotient() {
        let w = wreath_product(&PermGroup::cyclic(3), &PermGroup::symmetric(3)).unwrap();
        let h = w.point_stabilizer(0).unwrap();
        let n = normalizer(&w, &h).unwrap();
        assert_eq!(fixed_points(&h).len() as u128, n.order() / h.order());
    }

    #[test]
    fn conjugacy_class_sizes() {
        let mut sizes: Vec<usize> = conjugacy_classes(&PermGroup::symmetric(4), 100)
            .unwrap()
            .into_iter()
            .map(|c| c.1)
            .collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 3, 6, 6, 8]);
    }
}
