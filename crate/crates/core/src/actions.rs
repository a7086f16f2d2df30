//! Orbits, fixed points, block systems and the product constructions built
//! from them.

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::{Perm, MAX_DEGREE};

/// Orbits sorted internally and by least point.
pub fn orbits(g: &PermGroup) -> Vec<Vec<usize>> {
    let n = g.degree();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        let mut orbit = g.orbit(x);
        orbit.sort_unstable();
        for &y in &orbit {
            seen[y] = true;
        }
        out.push(orbit);
    }
    out
}

pub fn is_transitive(g: &PermGroup) -> bool {
    g.degree() <= 1 || g.orbit(0).len() == g.degree()
}

/// Points fixed by every element of `h`.
pub fn fixed_points(h: &PermGroup) -> Vec<usize> {
    (0..h.degree())
        .filter(|&x| h.generators().iter().all(|g| g.image(x) == x))
        .collect()
}

/// A `G`-invariant partition of the points into blocks of equal size.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockSystem {
    blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    /// Normalises the block order; does not check invariance.
    pub fn new(mut blocks: Vec<Vec<usize>>) -> BlockSystem {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        BlockSystem { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_size(&self) -> usize {
        self.blocks.first().map_or(0, Vec::len)
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.block_count() <= 1 || self.block_size() <= 1
    }

    fn block_index(&self, degree: usize) -> Vec<usize> {
        let mut idx = vec![usize::MAX; degree];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                idx[x] = i;
            }
        }
        idx
    }

    /// Every generator maps each block onto a block.
    pub fn is_invariant_under(&self, g: &PermGroup) -> bool {
        let idx = self.block_index(g.degree());
        if idx.contains(&usize::MAX) {
            return false;
        }
        g.generators().iter().all(|s| {
            self.blocks.iter().all(|b| {
                let target = idx[s.image(b[0])];
                b.iter().all(|&x| idx[s.image(x)] == target)
            })
        })
    }

    /// `true` when every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &BlockSystem) -> bool {
        let n = self.blocks.iter().map(Vec::len).sum();
        let idx = other.block_index(n);
        self.blocks.iter().all(|b| b.iter().all(|&x| idx[x] == idx[b[0]]))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
}

/// Finest block system of the transitive group `g` in which `a` and `b`
/// share a block.
pub fn block_system_containing(g: &PermGroup, a: usize, b: usize) -> BlockSystem {
    let n = g.degree();
    let mut uf = UnionFind((0..n).collect());
    let mut queue = Vec::new();
    let (ra, rb) = (uf.find(a), uf.find(b));
    if ra != rb {
        uf.0[rb] = ra;
        queue.push((a, b));
    }
    while let Some((x, y)) = queue.pop() {
        for s in g.generators() {
            let (u, v) = (uf.find(s.image(x)), uf.find(s.image(y)));
            if u != v {
                uf.0[v] = u;
                queue.push((u, v));
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..n {
        let r = uf.find(x);
        classes[r].push(x);
    }
    BlockSystem::new(classes.into_iter().filter(|c| !c.is_empty()).collect())
}

/// All minimal nontrivial block systems; empty exactly when `g` is
/// primitive.
pub fn minimal_block_systems(g: &PermGroup) -> Result<Vec<BlockSystem>> {
    if !is_transitive(g) {
        return Err(Error::NotTransitive);
    }
    let mut candidates: Vec<BlockSystem> = Vec::new();
    for x in 1..g.degree() {
        let sys = block_system_containing(g, 0, x);
        if sys.block_count() > 1 && !candidates.contains(&sys) {
            candidates.push(sys);
        }
    }
    let minimal = candidates
        .iter()
        .filter(|s| !candidates.iter().any(|t| t != *s && t.refines(s)))
        .cloned()
        .collect();
    Ok(minimal)
}

/// Induced action on the blocks and the action of a block stabilizer on
/// its block.
#[derive(Clone, Debug)]
pub struct BlockAction {
    /// Action on the blocks, block `i` being `system.blocks()[i]`.
    pub block_image: PermGroup,
    /// Setwise stabilizer of the block containing point 0, restricted to
    /// that block (points relabelled in ascending order).
    pub restriction: PermGroup,
    /// `|G|` divides `|restriction|^blocks · |block_image|`.
    pub embeds_in_wreath: bool,
}

pub fn block_action(g: &PermGroup, system: &BlockSystem) -> Result<BlockAction> {
    if !is_transitive(g) {
        return Err(Error::NotTransitive);
    }
    if !system.is_invariant_under(g) {
        return Err(Error::NotBlockSystem(
            "partition is not invariant under the group".into(),
        ));
    }
    let n = g.degree();
    let m = system.block_count();
    let idx = system.block_index(n);
    let images: Vec<Perm> = g
        .generators()
        .iter()
        .map(|s| {
            let table: Vec<usize> = system.blocks().iter().map(|b| idx[s.image(b[0])]).collect();
            Perm::from_images(&table).expect("blocks map onto blocks")
        })
        .collect();
    let block_image = PermGroup::new_internal(m, images.clone())?;

    // Setwise stabilizer of block 0 = preimage of the stabilizer of point 0
    // in the block action, read off the chain of the graph group.
    let total = m + n;
    let graph_gens: Vec<Perm> = g
        .generators()
        .iter()
        .zip(&images)
        .map(|(s, h)| crate::group::graph_element(h, s, total))
        .collect();
    let graph = PermGroup::new_internal(total, graph_gens)?;
    let stab = graph.level_subgroup(1);
    let block = &system.blocks()[0];
    let shifted: Vec<usize> = block.iter().map(|&x| x + m).collect();
    let restricted: Vec<Perm> = stab
        .generators()
        .iter()
        .map(|s| s.restricted(&shifted).expect("stabilizer preserves its block"))
        .collect();
    let restriction = PermGroup::new_internal(block.len(), restricted)?;
    let bound = restriction
        .order()
        .checked_pow(m as u32)
        .and_then(|x| x.checked_mul(block_image.order()));
    let embeds_in_wreath = match bound {
        Some(b) => b % g.order() == 0,
        None => true,
    };
    Ok(BlockAction {
        block_image,
        restriction,
        embeds_in_wreath,
    })
}

/// Imprimitive wreath product `base ≀ top` on `a·b` points, block `j`
/// occupying the points `j·a .. (j+1)·a`.
pub fn wreath_product(base: &PermGroup, top: &PermGroup) -> Result<PermGroup> {
    let a = base.degree();
    let b = top.degree();
    let n = a * b;
    if n > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(n));
    }
    let mut gens: Vec<Perm> = base.generators().iter().map(|g| g.shifted(0, n)).collect();
    for t in top.generators() {
        let table: Vec<usize> = (0..n).map(|x| t.image(x / a) * a + x % a).collect();
        gens.push(Perm::from_images(&table)?);
    }
    PermGroup::from_generators(n, gens)
}

/// `G × H` on `m + n` points, `H` moved onto the last `n` points.
pub fn external_direct_product(g: &PermGroup, h: &PermGroup) -> Result<PermGroup> {
    let (m, n) = (g.degree(), h.degree());
    let total = m + n;
    if total > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(total));
    }
    let mut gens: Vec<Perm> = g.generators().iter().map(|x| x.shifted(0, total)).collect();
    gens.extend(h.generators().iter().map(|x| x.shifted(m, total)));
    PermGroup::from_generators(total, gens)
}

/// Image of `g` acting on an invariant set of points, relabelled
/// `0..points.len()` in the given order.
pub fn restriction(g: &PermGroup, points: &[usize]) -> Result<PermGroup> {
    let gens = g
        .generators()
        .iter()
        .map(|s| {
            s.restricted(points)
                .ok_or_else(|| Error::Invalid("point set is not invariant".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    PermGroup::new_internal(points.len(), gens)
}

/// Elements of `g` fixing every point of `points`. The complement of
/// `points` must be invariant.
pub fn pointwise_stabilizer(g: &PermGroup, points: &[usize]) -> Result<PermGroup> {
    if points.is_empty() {
        return Ok(g.clone());
    }
    let images = g
        .generators()
        .iter()
        .map(|s| {
            s.restricted(points)
                .ok_or_else(|| Error::Invalid("point set is not invariant".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    g.kernel_of(&images, points.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, n: usize) -> Perm {
        Perm::parse(text, n).unwrap()
    }

    fn gp(n: usize, gens: &[&str]) -> PermGroup {
        PermGroup::from_generators(n, gens.iter().map(|t| p(t, n)).collect()).unwrap()
    }

    fn c3_wr_s3() -> PermGroup {
        wreath_product(&PermGroup::cyclic(3), &PermGroup::symmetric(3)).unwrap()
    }

    #[test]
    fn orbits_of_h7_and_trivial() {
        let h = gp(7, &["(1 2 3)", "(1 2)(4 5 6 7)"]);
        assert_eq!(orbits(&h), vec![vec![0, 1, 2], vec![3, 4, 5, 6]]);
        assert!(!is_transitive(&h));
        assert_eq!(orbits(&PermGroup::trivial(4)).len(), 4);
    }

    #[test]
    fn fixed_points_examples() {
        assert_eq!(fixed_points(&gp(7, &["(1 2 3)"])), vec![3, 4, 5, 6]);
        assert_eq!(fixed_points(&PermGroup::trivial(5)).len(), 5);
    }

    #[test]
    fn blocks_of_four_cycle() {
        let c4 = gp(4, &["(1 2 3 4)"]);
        let systems = minimal_block_systems(&c4).unwrap();
        assert_eq!(systems, vec![BlockSystem::new(vec![vec![0, 2], vec![1, 3]])]);
        let act = block_action(&c4, &systems[0]).unwrap();
        assert_eq!(act.block_image.order(), 2);
        assert_eq!(act.restriction.order(), 2);
        assert!(act.embeds_in_wreath);
    }

    #[test]
    fn blocks_of_wreath_product() {
        let w = c3_wr_s3();
        assert_eq!(w.order(), 162);
        let systems = minimal_block_systems(&w).unwrap();
        assert_eq!(
            systems,
            vec![BlockSystem::new(vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]])]
        );
        let act = block_action(&w, &systems[0]).unwrap();
        assert_eq!(act.block_image.order(), 6);
        assert_eq!(act.restriction.order(), 3);
        assert!(act.embeds_in_wreath);
    }

    #[test]
    fn primitive_groups_have_no_blocks() {
        assert!(minimal_block_systems(&PermGroup::symmetric(5)).unwrap().is_empty());
        assert!(minimal_block_systems(&PermGroup::cyclic(7)).unwrap().is_empty());
        assert!(matches!(
            minimal_block_systems(&gp(4, &["(1 2)"])),
            Err(Error::NotTransitive)
        ));
    }

    #[test]
    fn block_action_rejects_non_invariant_partition() {
        let c4 = gp(4, &["(1 2 3 4)"]);
        let bad = BlockSystem::new(vec![vec![0, 1], vec![2, 3]]);
        assert!(matches!(block_action(&c4, &bad), Err(Error::NotBlockSystem(_))));
    }

    #[test]
    fn wreath_products() {
        let c2 = PermGroup::cyclic(2);
        let w = wreath_product(&c2, &PermGroup::symmetric(3)).unwrap();
        assert_eq!((w.degree(), w.order()), (6, 48));
        let w1 = wreath_product(&c2, &PermGroup::trivial(1)).unwrap();
        assert_eq!((w1.degree(), w1.order()), (2, 2));
    }

    #[test]
    fn direct_products() {
        let d = external_direct_product(&PermGroup::cyclic(2), &PermGroup::cyclic(3)).unwrap();
        assert_eq!((d.degree(), d.order()), (5, 6));
        let h = gp(7, &["(1 2 3)", "(1 3)(4 5 6 7)"]);
        let hx = external_direct_product(&h, &PermGroup::cyclic(2)).unwrap();
        assert_eq!((hx.degree(), hx.order()), (9, 24));
        let case_a = gp(9, &["(1 2 3)", "(1 3)(4 5 6 7)", "(8 9)"]);
        assert!(hx.same_group(&case_a));
        let g = PermGroup::symmetric(3);
        let gt = external_direct_product(&g, &PermGroup::trivial(0)).unwrap();
        assert!(gt.same_group(&g));
        let left = restriction(&hx, &[0, 1, 2, 3, 4, 5, 6]).unwrap();
        assert!(left.same_group(&h));
    }
}
