//! Conjugacy classes of subgroups of an ambient permutation group.
//!
//! Every subgroup `K` is reached from its perfect residual by a chain of
//! normal inclusions of prime index, so the classes are generated from the
//! perfect subgroups (and the trivial group) by repeatedly adjoining an
//! element of prime order modulo `H` from `N(H)`. Up to conjugacy only one
//! coset per `N(H)`-class of such elements is needed.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actions::orbits;
use crate::backtrack::Orbitals;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::iso::transporter_in;
use crate::perfect::{perfect_catalog, CATALOG_MAX_DEGREE};
use crate::perm::Perm;
use crate::structure::{core, is_nilpotent, is_perfect, is_solvable, normalizer};

/// Degree up to which lattices of non-solvable ambients have been checked
/// against the brute-force oracle.
pub const CERTIFIED_DEGREE: usize = 6;

/// Subgroups up to this order get a cycle-type census in their class key.
const CENSUS_LIMIT: u128 = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    CyclicExtension,
    BruteForce,
}

/// How far the class list can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Completeness {
    /// Complete without outside assumptions: the ambient is solvable, the
    /// degree is small enough to be oracle-checked, or the list came from
    /// exhaustive closure.
    Certified,
    /// Complete provided the perfect-subgroup catalog is.
    Assumed,
    /// A budget stopped enumeration early.
    Partial,
}

impl fmt::Display for Completeness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Completeness::Certified => "certified",
            Completeness::Assumed => "assumed",
            Completeness::Partial => "partial",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ClassRecord {
    pub id: usize,
    pub representative: PermGroup,
    pub order: u128,
    pub core: PermGroup,
    pub normalizer_order: u128,
    /// Number of subgroups in the class, `[A : N_A(H)]`.
    pub class_size: u128,
    pub is_normal: bool,
    pub is_nilpotent: bool,
    pub is_perfect: bool,
    /// Class of a normal subgroup of prime index `p` in this one, as
    /// `(class id, p)`; `None` for seeds.
    pub parent: Option<(usize, u64)>,
}

#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    pub ambient: PermGroup,
    pub classes: Vec<ClassRecord>,
    pub method: Method,
    pub completeness: Completeness,
}

impl SubgroupLattice {
    pub fn normal_classes(&self) -> Vec<&ClassRecord> {
        self.classes.iter().filter(|c| c.is_normal).collect()
    }

    /// Total number of subgroups.
    pub fn subgroup_count(&self) -> u128 {
        self.classes.iter().map(|c| c.class_size).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.completeness != Completeness::Partial
    }

    /// Id of the class containing `h`, which must be a subgroup of the
    /// ambient.
    pub fn class_of(&self, h: &PermGroup) -> Result<Option<usize>> {
        let key = ClassKey::new(h);
        for c in &self.classes {
            if c.order == h.order()
                && ClassKey::new(&c.representative) == key
                && transporter_in(&self.ambient, h, &c.representative)?.is_some()
            {
                return Ok(Some(c.id));
            }
        }
        Ok(None)
    }
}

/// Conjugation invariants used to bucket candidate subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct ClassKey {
    order: u128,
    orbit_sizes: Vec<usize>,
    orbitals: Vec<u32>,
    census: Option<Vec<(Vec<usize>, usize)>>,
}

impl ClassKey {
    pub(crate) fn new(g: &PermGroup) -> ClassKey {
        let mut orbit_sizes: Vec<usize> = orbits(g).iter().map(Vec::len).collect();
        orbit_sizes.sort_unstable();
        let census = (g.order() <= CENSUS_LIMIT).then(|| {
            let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
            for x in g.iter_elements() {
                *counts.entry(x.cycle_type()).or_default() += 1;
            }
            let mut v: Vec<_> = counts.into_iter().collect();
            v.sort();
            v
        });
        ClassKey {
            order: g.order(),
            orbit_sizes,
            orbitals: Orbitals::new(g).size_profile(),
            census,
        }
    }
}

/// Limits for [`subgroup_classes`].
#[derive(Clone, Debug)]
pub struct LatticeOptions {
    /// Stop (with a partial lattice) once this many classes are known.
    pub max_classes: usize,
    /// Largest `[N(H) : H]` whose cosets are enumerated.
    pub max_coset_index: u128,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        LatticeOptions {
            max_classes: 20_000,
            max_coset_index: 4_000_000,
        }
    }
}

/// Classes found so far, bucketed by key for conjugacy dedup.
struct ClassSet<'a> {
    ambient: &'a PermGroup,
    reps: Vec<PermGroup>,
    parents: Vec<Option<(usize, u64)>>,
    buckets: HashMap<ClassKey, Vec<usize>>,
}

impl<'a> ClassSet<'a> {
    fn new(ambient: &'a PermGroup) -> Self {
        ClassSet {
            ambient,
            reps: Vec::new(),
            parents: Vec::new(),
            buckets: HashMap::new(),
        }
    }

    /// Adds `g` unless it is conjugate in the ambient to a known class.
    fn insert(&mut self, g: PermGroup, parent: Option<(usize, u64)>) -> Result<bool> {
        let key = ClassKey::new(&g);
        if let Some(bucket) = self.buckets.get(&key) {
            for &i in bucket {
                if transporter_in(self.ambient, &g, &self.reps[i])?.is_some() {
                    return Ok(false);
                }
            }
        }
        self.buckets.entry(key).or_default().push(self.reps.len());
        self.reps.push(g);
        self.parents.push(parent);
        Ok(true)
    }
}

/// Normalizer order of `H` and its prime-index extensions `(⟨H, x⟩, p)`.
type Extensions = (u128, Vec<(PermGroup, u64)>);

/// Subgroups `⟨H, x⟩` for one `x` per `N(H)`-class of cosets `Hx` of
/// prime order in `N(H)/H`, with the prime.
fn extensions(ambient: &PermGroup, h: &PermGroup, max_index: u128) -> Result<Extensions> {
    let norm = normalizer(ambient, h)?;
    let index = norm.order() / h.order();
    if index == 1 {
        return Ok((norm.order(), Vec::new()));
    }
    let cosets = norm.right_transversal(h, max_index)?;
    let lookup: HashMap<&Perm, usize> = cosets.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut seen = vec![false; cosets.len()];
    seen[0] = true;
    let mut out = Vec::new();
    for start in 1..cosets.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = vec![start];
        let mut head = 0;
        while head < queue.len() {
            let x = &cosets[queue[head]];
            head += 1;
            for g in norm.generators() {
                let y = lookup[&h.canonical_coset_rep(&x.conj(g))];
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
        let x = &cosets[start];
        let m = h.element_order_modulo(x);
        if is_prime(m) {
            out.push((h.with_element(x), m));
        }
    }
    Ok((norm.order(), out))
}

fn is_prime(m: u64) -> bool {
    m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| !m.is_multiple_of(d))
}

/// Perfect subgroups of `ambient` up to conjugacy in `ambient`.
pub fn perfect_subgroup_classes(ambient: &PermGroup) -> Result<Vec<PermGroup>> {
    let n = ambient.degree();
    if is_solvable(ambient) {
        return Ok(Vec::new());
    }
    if n > CATALOG_MAX_DEGREE {
        return Err(Error::DegreeTooLarge(n));
    }
    let sym = PermGroup::symmetric(n);
    let full = ambient.order() == sym.order();
    let mut set = ClassSet::new(ambient);
    for p in perfect_catalog(n)? {
        if !ambient.order().is_multiple_of(p.group.order()) {
            continue;
        }
        if full {
            set.insert(p.group, None)?;
            continue;
        }
        let norm = normalizer(&sym, &p.group)?;
        for x in sym.right_transversal(&norm, u128::MAX)? {
            let q = p.group.conjugate_by(&x);
            if q.is_subgroup_of(ambient) {
                set.insert(q, None)?;
            }
        }
    }
    Ok(set.reps)
}

/// Conjugacy classes of subgroups of `ambient` by cyclic extension.
pub fn subgroup_classes(ambient: &PermGroup, opts: &LatticeOptions) -> Result<SubgroupLattice> {
    let n = ambient.degree();
    let mut set = ClassSet::new(ambient);
    set.insert(PermGroup::trivial(n), None)?;
    for p in perfect_subgroup_classes(ambient)? {
        set.insert(p, None)?;
    }
    let mut normalizer_orders: Vec<Option<u128>> = Vec::new();
    let mut processed = 0;
    let mut partial = false;
    while processed < set.reps.len() {
        let batch: Vec<usize> = (processed..set.reps.len()).collect();
        processed = set.reps.len();
        let results: Vec<Result<Extensions>> = batch
            .par_iter()
            .map(|&i| extensions(ambient, &set.reps[i], opts.max_coset_index))
            .collect();
        for (&i, res) in batch.iter().zip(results) {
            let (norm_order, children) = res?;
            normalizer_orders.resize(set.reps.len().max(i + 1), None);
            normalizer_orders[i] = Some(norm_order);
            for (child, p) in children {
                set.insert(child, Some((i, p)))?;
                if set.reps.len() > opts.max_classes {
                    partial = true;
                    break;
                }
            }
            if partial {
                break;
            }
        }
        if partial {
            break;
        }
    }
    let completeness = if partial {
        Completeness::Partial
    } else if is_solvable(ambient) || n <= CERTIFIED_DEGREE {
        Completeness::Certified
    } else {
        Completeness::Assumed
    };
    normalizer_orders.resize(set.reps.len(), None);
    let classes = finish_records(ambient, set.reps, set.parents, normalizer_orders)?;
    Ok(SubgroupLattice {
        ambient: ambient.clone(),
        classes,
        method: Method::CyclicExtension,
        completeness,
    })
}

fn orbit_profile(g: &PermGroup) -> Vec<usize> {
    let mut s: Vec<usize> = orbits(g).iter().map(Vec::len).collect();
    s.sort_unstable();
    s
}

fn generator_strings(g: &PermGroup) -> Vec<String> {
    g.generators().iter().map(Perm::to_string).collect()
}

/// Builds records in canonical order: by order, then orbit-size multiset,
/// then generator strings.
pub(crate) fn finish_records(
    ambient: &PermGroup,
    reps: Vec<PermGroup>,
    parents: Vec<Option<(usize, u64)>>,
    normalizer_orders: Vec<Option<u128>>,
) -> Result<Vec<ClassRecord>> {
    let mut perm: Vec<usize> = (0..reps.len()).collect();
    let sort_keys: Vec<(u128, Vec<usize>, Vec<String>)> = reps
        .iter()
        .map(|r| (r.order(), orbit_profile(r), generator_strings(r)))
        .collect();
    perm.sort_by(|&a, &b| sort_keys[a].cmp(&sort_keys[b]));
    let mut new_id = vec![0; reps.len()];
    for (new, &old) in perm.iter().enumerate() {
        new_id[old] = new;
    }
    let records: Vec<Result<ClassRecord>> = perm
        .par_iter()
        .enumerate()
        .map(|(id, &old)| {
            let rep = &reps[old];
            let normalizer_order = match normalizer_orders.get(old).copied().flatten() {
                Some(o) => o,
                None => normalizer(ambient, rep)?.order(),
            };
            let core = core(ambient, rep)?;
            Ok(ClassRecord {
                id,
                order: rep.order(),
                is_normal: core.order() == rep.order(),
                is_nilpotent: is_nilpotent(rep)?,
                is_perfect: is_perfect(rep),
                normalizer_order,
                class_size: ambient.order() / normalizer_order,
                core,
                parent: parents[old].map(|(p, q)| (new_id[p], q)),
                representative: rep.clone(),
            })
        })
        .collect();
    records.into_iter().collect()
}

/// `true` when the two lattices of the same ambient have the same classes.
pub fn same_classes(a: &SubgroupLattice, b: &SubgroupLattice) -> Result<bool> {
    if a.classes.len() != b.classes.len() || !a.ambient.same_group(&b.ambient) {
        return Ok(false);
    }
    let mut used = vec![false; b.classes.len()];
    for c in &a.classes {
        let key = ClassKey::new(&c.representative);
        let mut matched = false;
        for d in &b.classes {
            if used[d.id] || d.order != c.order || ClassKey::new(&d.representative) != key {
                continue;
            }
            if transporter_in(&a.ambient, &c.representative, &d.representative)?.is_some() {
                used[d.id] = true;
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(g: &PermGroup) -> (usize, u128) {
        let l = subgroup_classes(g, &LatticeOptions::default()).unwrap();
        (l.classes.len(), l.subgroup_count())
    }

    #[test]
    fn symmetric_group_class_counts() {
        assert_eq!(count(&PermGroup::symmetric(3)), (4, 6));
        assert_eq!(count(&PermGroup::symmetric(4)), (11, 30));
        assert_eq!(count(&PermGroup::symmetric(5)), (19, 156));
    }

    #[test]
    fn records_are_consistent() {
        let s4 = PermGroup::symmetric(4);
        let l = subgroup_classes(&s4, &LatticeOptions::default()).unwrap();
        assert_eq!(l.completeness, Completeness::Certified);
        let normal: Vec<u128> = l.normal_classes().iter().map(|c| c.order).collect();
        assert_eq!(normal, vec![1, 4, 12, 24]);
        for c in &l.classes {
            assert!(c.core.is_subgroup_of(&c.representative));
            assert!(c.core.is_normal_in(&s4));
            assert_eq!(24 % c.order, 0);
            if let Some((p, q)) = c.parent {
                let parent = &l.classes[p];
                assert_eq!(parent.order * q as u128, c.order);
            }
        }
        let orders: Vec<u128> = l.classes.iter().map(|c| c.order).collect();
        assert!(orders.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn cyclic_and_simple_ambients() {
        assert_eq!(count(&PermGroup::cyclic(6)), (4, 4));
        let a5 = subgroup_classes(&PermGroup::alternating(5), &LatticeOptions::default()).unwrap();
        assert_eq!(a5.classes.len(), 9);
        assert_eq!(a5.normal_classes().len(), 2);
    }

    #[test]
    fn partial_lattice_is_flagged() {
        let opts = LatticeOptions {
            max_classes: 5,
            ..LatticeOptions::default()
        };
        let l = subgroup_classes(&PermGroup::symmetric(4), &opts).unwrap();
        assert_eq!(l.completeness, Completeness::Partial);
    }
}
