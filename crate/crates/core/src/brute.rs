//! Exhaustive subgroup enumeration on element tables, used as an
//! independent oracle for the cyclic-extension lattice.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::lattice::{finish_records, Completeness, Method, SubgroupLattice};
use crate::perm::Perm;

/// Default largest ambient order accepted by [`brute_force_subgroups`].
pub const DEFAULT_BRUTE_LIMIT: u128 = 2000;

type Bits = Vec<u64>;

struct Table {
    elements: Vec<Perm>,
    mul: Vec<u16>,
    n: usize,
}

impl Table {
    fn new(g: &PermGroup, limit: u128) -> Result<Table> {
        let limit = limit.min(u16::MAX as u128);
        if g.order() > limit {
            return Err(Error::Budget {
                what: "brute-force ambient order",
                limit,
            });
        }
        let elements = g.elements(limit)?;
        let index: HashMap<&Perm, usize> = elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let n = elements.len();
        let mut mul = vec![0u16; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                mul[i * n + j] = index[&(a * b)] as u16;
            }
        }
        Ok(Table { elements, mul, n })
    }

    fn words(&self) -> usize {
        self.n.div_ceil(64)
    }

    /// Subgroup generated by the elements with the given indices.
    fn closure(&self, gens: &[usize]) -> Bits {
        let mut bits = vec![0u64; self.words()];
        let identity = self.elements.iter().position(Perm::is_identity).unwrap();
        bits[identity / 64] |= 1 << (identity % 64);
        let mut list = vec![identity];
        let mut head = 0;
        while head < list.len() {
            let x = list[head];
            head += 1;
            for &g in gens {
                let y = self.mul[x * self.n + g] as usize;
                if bits[y / 64] >> (y % 64) & 1 == 0 {
                    bits[y / 64] |= 1 << (y % 64);
                    list.push(y);
                }
            }
        }
        bits
    }

    fn members(bits: &Bits) -> impl Iterator<Item = usize> + '_ {
        bits.iter()
            .enumerate()
            .flat_map(|(w, &word)| (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b))
    }
}

fn contains(bits: &Bits, x: usize) -> bool {
    bits[x / 64] >> (x % 64) & 1 == 1
}

/// Every subgroup of `g` as a set of element indices, together with the
/// element list. Subgroups are closed joins of cyclic subgroups.
fn all_subgroups(g: &PermGroup, limit: u128) -> Result<(Table, Vec<Bits>)> {
    let table = Table::new(g, limit)?;
    let mut seen: HashSet<Bits> = HashSet::new();
    let mut cyclic: Vec<(usize, Bits)> = Vec::new();
    for x in 0..table.n {
        let c = table.closure(&[x]);
        if seen.insert(c.clone()) {
            cyclic.push((x, c));
        }
    }
    let mut subgroups: Vec<(Vec<usize>, Bits)> = cyclic.iter().map(|(x, c)| (vec![*x], c.clone())).collect();
    let mut i = 0;
    while i < subgroups.len() {
        for (x, _) in &cyclic {
            if contains(&subgroups[i].1, *x) {
                continue;
            }
            let mut gens = subgroups[i].0.clone();
            gens.push(*x);
            let joined = table.closure(&gens);
            if seen.insert(joined.clone()) {
                subgroups.push((gens, joined));
            }
        }
        i += 1;
    }
    Ok((table, subgroups.into_iter().map(|s| s.1).collect()))
}

/// Number of subgroups and conjugacy classes of subgroups, by exhaustive
/// closure over an element table.
pub fn brute_force_counts(g: &PermGroup, limit: u128) -> Result<(usize, usize)> {
    let (table, subs) = all_subgroups(g, limit)?;
    let classes = fold_classes(g, &table, &subs);
    Ok((subs.len(), classes.len()))
}

/// Groups subgroup indices into conjugacy classes; each class is listed by
/// member indices, the first being the representative.
fn fold_classes(g: &PermGroup, table: &Table, subs: &[Bits]) -> Vec<Vec<usize>> {
    let index: HashMap<&Perm, usize> = table.elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let conj: Vec<Vec<usize>> = g
        .generators()
        .iter()
        .map(|s| table.elements.iter().map(|x| index[&x.conj(s)]).collect())
        .collect();
    let position: HashMap<&Bits, usize> = subs.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut class_of = vec![usize::MAX; subs.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for start in 0..subs.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        class_of[start] = id;
        let mut members = vec![start];
        let mut head = 0;
        while head < members.len() {
            let s = members[head];
            head += 1;
            for map in &conj {
                let mut image = vec![0u64; table.words()];
                for x in Table::members(&subs[s]) {
                    let y = map[x];
                    image[y / 64] |= 1 << (y % 64);
                }
                let t = position[&image];
                if class_of[t] == usize::MAX {
                    class_of[t] = id;
                    members.push(t);
                }
            }
        }
        classes.push(members);
    }
    classes
}

/// Full lattice of `g` by exhaustive closure; `g` may have order at most
/// `limit`.
pub fn brute_force_subgroups(g: &PermGroup, limit: u128) -> Result<SubgroupLattice> {
    let (table, subs) = all_subgroups(g, limit)?;
    let mut with_trivial = subs;
    let trivial_bits = table.closure(&[]);
    if !with_trivial.contains(&trivial_bits) {
        with_trivial.push(trivial_bits);
    }
    let classes = fold_classes(g, &table, &with_trivial);
    let n = g.degree();
    let reps: Vec<PermGroup> = classes
        .iter()
        .map(|c| {
            let gens = Table::members(&with_trivial[c[0]]).map(|x| table.elements[x].clone());
            PermGroup::generated_reduced(n, gens)
        })
        .collect();
    let normalizer_orders = classes.iter().map(|c| Some(g.order() / c.len() as u128)).collect();
    let parents = vec![None; reps.len()];
    Ok(SubgroupLattice {
        ambient: g.clone(),
        classes: finish_records(g, reps, parents, normalizer_orders)?,
        method: Method::BruteForce,
        completeness: Completeness::Certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(brute_force_counts(&PermGroup::symmetric(3), 2000).unwrap(), (6, 4));
        assert_eq!(brute_force_counts(&PermGroup::symmetric(4), 2000).unwrap(), (30, 11));
        assert_eq!(brute_force_counts(&PermGroup::cyclic(6), 2000).unwrap(), (4, 4));
    }

    #[test]
    fn limit_is_enforced() {
        assert!(matches!(
            brute_force_counts(&PermGroup::symmetric(7), 2000),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn lattice_records() {
        let l = brute_force_subgroups(&PermGroup::symmetric(4), 2000).unwrap();
        assert_eq!(l.classes.len(), 11);
        assert_eq!(l.subgroup_count(), 30);
        assert_eq!(l.method, Method::BruteForce);
    }
}
