//! Minimal faithful permutation degree.
//!
//! `μ(G)` is the least total index `Σ [G : G_i]` over collections of
//! subgroups whose cores intersect trivially. A collection is core-free
//! exactly when every minimal normal subgroup escapes some core, so the
//! search is a weighted set cover over subgroup classes (cores are constant
//! on a conjugacy class) with the minimal normal subgroups as ground set.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::lattice::{subgroup_classes, ClassKey, LatticeOptions, SubgroupLattice};
use crate::perm::Perm;
use crate::structure::{intersection, minimal_normal_subgroups};

/// Optimal cover: `μ`, the witness class ids (ascending) and the lattice
/// they refer to.
#[derive(Clone, Debug)]
pub struct MuSolution {
    pub mu: usize,
    pub witness: Vec<usize>,
    pub lattice: Arc<SubgroupLattice>,
}

#[derive(Clone, Debug)]
struct Candidate {
    class: usize,
    weight: usize,
    mask: u128,
}

/// Ordering of covers: total weight, then number of subgroups, then the
/// sorted class ids.
type CoverKey = (usize, usize, Vec<usize>);

fn cover_key(chosen: &[&Candidate]) -> CoverKey {
    let mut ids: Vec<usize> = chosen.iter().map(|c| c.class).collect();
    ids.sort_unstable();
    (chosen.iter().map(|c| c.weight).sum(), ids.len(), ids)
}

/// Candidate classes with their index and the minimal normal subgroups
/// they cover, plus the full ground-set mask.
fn candidates(lattice: &SubgroupLattice, max_index: usize) -> Result<(Vec<Candidate>, u128)> {
    let g = &lattice.ambient;
    let normals: Vec<PermGroup> = lattice
        .normal_classes()
        .iter()
        .map(|c| c.representative.clone())
        .collect();
    let mins = minimal_normal_subgroups(&normals);
    if mins.len() > 128 {
        return Err(Error::Budget {
            what: "minimal normal subgroups",
            limit: 128,
        });
    }
    let full = if mins.len() == 128 {
        u128::MAX
    } else {
        (1u128 << mins.len()) - 1
    };
    let mut out = Vec::new();
    for c in &lattice.classes {
        let index = g.order() / c.order;
        if index > max_index as u128 {
            continue;
        }
        let mask = mins
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_subgroup_of(&c.core))
            .fold(0u128, |acc, (i, _)| acc | 1 << i);
        if mask != 0 {
            out.push(Candidate {
                class: c.id,
                weight: index as usize,
                mask,
            });
        }
    }
    Ok((out, full))
}

/// Drops candidates covering a subset of a cheaper-or-equal candidate's
/// set. Among identical (weight, mask) pairs the smallest class id stays.
fn prune_dominated(cands: Vec<Candidate>) -> Vec<Candidate> {
    let keep: Vec<bool> = cands
        .iter()
        .map(|j| {
            !cands.iter().any(|i| {
                i.class != j.class
                    && i.weight <= j.weight
                    && i.mask & j.mask == j.mask
                    && (i.weight < j.weight || i.mask != j.mask || i.class < j.class)
            })
        })
        .collect();
    cands
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(c, _)| c)
        .collect()
}

struct Cover<'a> {
    cands: &'a [Candidate],
    full: u128,
    best: Option<CoverKey>,
}

impl<'a> Cover<'a> {
    /// Sum of cheapest covers over uncovered elements no two of which share
    /// a candidate.
    fn lower_bound(&self, covered: u128) -> usize {
        let mut blocked = 0u128;
        let mut bound = 0;
        let mut rest = self.full & !covered;
        while rest != 0 {
            let e = rest.trailing_zeros();
            rest &= rest - 1;
            let bit = 1u128 << e;
            if blocked & bit != 0 {
                continue;
            }
            let mut cheapest = usize::MAX;
            for c in self.cands.iter().filter(|c| c.mask & bit != 0) {
                cheapest = cheapest.min(c.weight);
                blocked |= c.mask;
            }
            bound += cheapest;
        }
        bound
    }

    fn search(&mut self, covered: u128, weight: usize, chosen: &mut Vec<&'a Candidate>) {
        if covered == self.full {
            let key = cover_key(chosen);
            if self.best.as_ref().is_none_or(|b| key < *b) {
                self.best = Some(key);
            }
            return;
        }
        if let Some(best) = &self.best {
            if weight + self.lower_bound(covered) > best.0 {
                return;
            }
        }
        let e = (self.full & !covered).trailing_zeros();
        let bit = 1u128 << e;
        for c in self.cands.iter().filter(|c| c.mask & bit != 0) {
            chosen.push(c);
            self.search(covered | c.mask, weight + c.weight, chosen);
            chosen.pop();
        }
    }
}

/// Optimal cover over an already computed lattice of `G`.
pub fn mu_from_lattice(lattice: Arc<SubgroupLattice>) -> Result<MuSolution> {
    let g = &lattice.ambient;
    if g.is_trivial() {
        return Ok(MuSolution {
            mu: 0,
            witness: Vec::new(),
            lattice,
        });
    }
    if !lattice.is_complete() {
        return Err(Error::Budget {
            what: "subgroup lattice incomplete",
            limit: lattice.classes.len() as u128,
        });
    }
    let moved = g.moved_points().len();
    let (cands, full) = candidates(&lattice, moved)?;
    let cands = prune_dominated(cands);
    let mut cover = Cover {
        cands: &cands,
        full,
        best: None,
    };
    cover.search(0, 0, &mut Vec::new());
    let (mu, _, witness) = cover
        .best
        .ok_or_else(|| Error::Internal("no faithful action within the moved points".into()))?;
    Ok(MuSolution { mu, witness, lattice })
}

/// `μ(G)` by exhaustive search over all class subsets of total index at
/// most the number of moved points, testing core intersections directly.
/// Returns the optimum under the same tie-breaking as the solver.
pub fn mu_exhaustive(lattice: &SubgroupLattice) -> Result<(usize, Vec<usize>)> {
    let g = &lattice.ambient;
    if g.is_trivial() {
        return Ok((0, Vec::new()));
    }
    let moved = g.moved_points().len();
    let items: Vec<(usize, usize)> = lattice
        .classes
        .iter()
        .filter(|c| c.order < g.order())
        .map(|c| (c.id, (g.order() / c.order) as usize))
        .filter(|&(_, w)| w <= moved)
        .collect();
    let mut best: Option<CoverKey> = None;
    let mut stack: Vec<usize> = Vec::new();
    fn walk(
        lattice: &SubgroupLattice,
        items: &[(usize, usize)],
        start: usize,
        budget: usize,
        stack: &mut Vec<usize>,
        best: &mut Option<CoverKey>,
    ) -> Result<()> {
        if !stack.is_empty() {
            let mut meet = lattice.classes[items[stack[0]].0].core.clone();
            for &s in &stack[1..] {
                meet = intersection(&meet, &lattice.classes[items[s].0].core)?;
            }
            if meet.is_trivial() {
                let mut ids: Vec<usize> = stack.iter().map(|&s| items[s].0).collect();
                ids.sort_unstable();
                let key = (stack.iter().map(|&s| items[s].1).sum(), ids.len(), ids);
                if best.as_ref().is_none_or(|b| key < *b) {
                    *best = Some(key);
                }
            }
        }
        for i in start..items.len() {
            if items[i].1 <= budget {
                stack.push(i);
                walk(lattice, items, i + 1, budget - items[i].1, stack, best)?;
                stack.pop();
            }
        }
        Ok(())
    }
    walk(lattice, &items, 0, moved, &mut stack, &mut best)?;
    let (mu, _, ids) = best.ok_or_else(|| Error::Internal("no core-free collection".into()))?;
    Ok((mu, ids))
}

/// Disjoint union of the coset actions on the witness subgroups, as images
/// of `G`'s generators.
pub fn embedding_images(g: &PermGroup, witness: &[PermGroup]) -> Result<(usize, Vec<Perm>)> {
    let mut tables: Vec<Vec<Perm>> = Vec::new();
    let mut total = 0;
    for h in witness {
        let (images, table) = g.coset_action_images(h)?;
        total += table.index;
        tables.push(images);
    }
    if total > crate::perm::MAX_DEGREE {
        return Err(Error::DegreeTooLarge(total));
    }
    let mut images = Vec::new();
    for i in 0..g.generators().len() {
        let mut table: Vec<usize> = Vec::with_capacity(total);
        for t in &tables {
            let offset = table.len();
            table.extend(t[i].images().map(|y| y + offset));
        }
        images.push(Perm::from_images(&table)?);
    }
    Ok((total, images))
}

/// Minimal faithful representation from a solution: degree `μ` and the
/// images of `G`'s generators.
pub fn minimal_embedding(sol: &MuSolution) -> Result<(usize, Vec<Perm>)> {
    let reps: Vec<PermGroup> = sol
        .witness
        .iter()
        .map(|&id| sol.lattice.classes[id].representative.clone())
        .collect();
    embedding_images(&sol.lattice.ambient, &reps)
}

/// Known `(group, μ)` pairs keyed by degree and conjugacy invariants.
type MuMemo = HashMap<(usize, ClassKey), Vec<(PermGroup, usize)>>;
type LatticeHook = Box<dyn Fn(&PermGroup) -> Result<Arc<SubgroupLattice>> + Send + Sync>;

/// Lattices and `μ` values reused across calls. Groups conjugate in
/// `Sym(n)` share an entry.
pub struct MuEngine {
    pub options: LatticeOptions,
    memo: Mutex<MuMemo>,
    lattice_hook: Option<LatticeHook>,
}

impl Default for MuEngine {
    fn default() -> Self {
        MuEngine::new(LatticeOptions::default())
    }
}

/// Result of the Wright-class test.
#[derive(Clone, Debug)]
pub struct WrightResult {
    pub member: bool,
    /// Class id of a nilpotent subgroup with the same `μ`.
    pub witness: Option<usize>,
}

impl MuEngine {
    pub fn new(options: LatticeOptions) -> MuEngine {
        MuEngine {
            options,
            memo: Mutex::new(HashMap::new()),
            lattice_hook: None,
        }
    }

    /// Routes lattice construction through `hook` (used for on-disk caching).
    pub fn with_lattice_hook(
        mut self,
        hook: impl Fn(&PermGroup) -> Result<Arc<SubgroupLattice>> + Send + Sync + 'static,
    ) -> MuEngine {
        self.lattice_hook = Some(Box::new(hook));
        self
    }

    pub fn lattice(&self, g: &PermGroup) -> Result<Arc<SubgroupLattice>> {
        match &self.lattice_hook {
            Some(hook) => hook(g),
            None => Ok(Arc::new(subgroup_classes(g, &self.options)?)),
        }
    }

    pub fn solve(&self, g: &PermGroup) -> Result<MuSolution> {
        let sol = mu_from_lattice(self.lattice(g)?)?;
        self.remember(g, sol.mu);
        Ok(sol)
    }

    fn lookup(&self, g: &PermGroup) -> Result<Option<usize>> {
        let key = (g.degree(), ClassKey::new(g));
        let known: Vec<(PermGroup, usize)> = self.memo.lock().unwrap().get(&key).cloned().unwrap_or_default();
        for (h, mu) in known {
            if h.same_group(g) || crate::iso::sym_conjugate(&h, g)?.is_some() {
                return Ok(Some(mu));
            }
        }
        Ok(None)
    }

    fn remember(&self, g: &PermGroup, mu: usize) {
        let key = (g.degree(), ClassKey::new(g));
        self.memo.lock().unwrap().entry(key).or_default().push((g.clone(), mu));
    }

    /// `μ(G)`, memoized.
    pub fn mu(&self, g: &PermGroup) -> Result<usize> {
        if g.is_trivial() {
            return Ok(0);
        }
        if let Some(mu) = self.lookup(g)? {
            return Ok(mu);
        }
        Ok(self.solve(g)?.mu)
    }

    /// Whether some nilpotent subgroup has the same `μ` as `G`, checking
    /// candidate classes from the largest down.
    pub fn in_wright_class(&self, g: &PermGroup) -> Result<WrightResult> {
        let lattice = self.lattice(g)?;
        let mu = mu_from_lattice(lattice.clone())?.mu;
        let top = lattice.classes.last().expect("lattice contains G");
        if top.is_nilpotent {
            return Ok(WrightResult {
                member: true,
                witness: Some(top.id),
            });
        }
        let mut nilpotent: Vec<_> = lattice
            .classes
            .iter()
            .filter(|c| c.is_nilpotent && c.representative.moved_points().len() >= mu)
            .collect();
        nilpotent.sort_by_key(|c| std::cmp::Reverse((c.order, c.id)));
        for c in nilpotent {
            if self.mu(&c.representative)? == mu {
                return Ok(WrightResult {
                    member: true,
                    witness: Some(c.id),
                });
            }
        }
        Ok(WrightResult {
            member: false,
            witness: None,
        })
    }

    /// Certificate for `μ(G)`, re-verified before it is returned.
    pub fn certificate(&self, g: &PermGroup, with_wright: bool) -> Result<MuCertificate> {
        let sol = self.solve(g)?;
        let wright_witness = if with_wright {
            self.in_wright_class(g)?.witness
        } else {
            None
        };
        let cert = MuCertificate::from_solution(&sol, wright_witness)?;
        let check = verify_certificate(g, &cert);
        if let Err(reason) = check {
            return Err(Error::Internal(format!("fresh certificate failed: {reason}")));
        }
        Ok(cert)
    }
}

/// Degree and generator strings of a group, in generator order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupLiteral {
    pub degree: usize,
    pub generators: Vec<String>,
}

impl GroupLiteral {
    pub fn of(g: &PermGroup) -> GroupLiteral {
        GroupLiteral {
            degree: g.degree(),
            generators: g.generators().iter().map(Perm::to_string).collect(),
        }
    }

    pub fn perms(&self) -> Result<Vec<Perm>> {
        self.generators.iter().map(|s| Perm::parse(s, self.degree)).collect()
    }

    pub fn group(&self) -> Result<PermGroup> {
        PermGroup::from_generators(self.degree, self.perms()?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub class_id: usize,
    pub generators: Vec<String>,
    pub index: usize,
}

/// `μ(G)` with a core-free witness collection and the faithful action it
/// induces. `embedding[i]` is the image of `group.generators[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuCertificate {
    pub group: GroupLiteral,
    pub mu: usize,
    pub witness: Vec<WitnessEntry>,
    pub embedding: Vec<String>,
    pub wright_witness: Option<usize>,
}

impl MuCertificate {
    pub fn from_solution(sol: &MuSolution, wright_witness: Option<usize>) -> Result<MuCertificate> {
        let g = &sol.lattice.ambient;
        let (degree, images) = minimal_embedding(sol)?;
        debug_assert_eq!(degree, sol.mu);
        Ok(MuCertificate {
            group: GroupLiteral::of(g),
            mu: sol.mu,
            witness: sol
                .witness
                .iter()
                .map(|&id| {
                    let c = &sol.lattice.classes[id];
                    WitnessEntry {
                        class_id: id,
                        generators: c.representative.generators().iter().map(Perm::to_string).collect(),
                        index: (g.order() / c.order) as usize,
                    }
                })
                .collect(),
            embedding: images.iter().map(Perm::to_string).collect(),
            wright_witness,
        })
    }

    /// The embedding as a group on `mu` points.
    pub fn embedded_group(&self) -> Result<PermGroup> {
        let images = self
            .embedding
            .iter()
            .map(|s| Perm::parse(s, self.mu))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::from_generators(self.mu, images)
    }
}

/// Why a certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CertFailure {
    #[error("certificate group differs from the given group")]
    GroupMismatch,
    #[error("unparsable permutation in the certificate: {0}")]
    Malformed(String),
    #[error("witness {0} is not a subgroup")]
    WitnessNotSubgroup(usize),
    #[error("witness {0} has a different index")]
    IndexMismatch(usize),
    #[error("indices sum to {actual}, certificate claims {claimed}")]
    IndexSum { claimed: usize, actual: usize },
    #[error("cores of the witnesses intersect nontrivially")]
    CoresMeetNontrivially,
    #[error("embedding has the wrong shape")]
    EmbeddingShape,
    #[error("embedding images do not define a homomorphism")]
    NotHomomorphism,
    #[error("embedding is not faithful")]
    NotFaithful,
}

/// Re-checks a certificate from scratch: witness membership and indices,
/// trivial intersection of the cores (as kernels of the coset actions) and
/// a faithful homomorphism onto the embedding.
pub fn verify_certificate(g: &PermGroup, cert: &MuCertificate) -> std::result::Result<(), CertFailure> {
    let malformed = |e: Error| CertFailure::Malformed(e.to_string());
    let group = cert.group.group().map_err(malformed)?;
    if !group.same_group(g) {
        return Err(CertFailure::GroupMismatch);
    }
    let domain = cert.group.perms().map_err(malformed)?;
    let n = group.degree();
    let mut meet = group.clone();
    let mut total = 0;
    for (i, w) in cert.witness.iter().enumerate() {
        let gens = w
            .generators
            .iter()
            .map(|s| Perm::parse(s, n))
            .collect::<Result<Vec<_>>>()
            .map_err(malformed)?;
        let h = PermGroup::from_generators(n, gens).map_err(malformed)?;
        if !h.is_subgroup_of(&group) {
            return Err(CertFailure::WitnessNotSubgroup(i));
        }
        let index = (group.order() / h.order()) as usize;
        if index != w.index {
            return Err(CertFailure::IndexMismatch(i));
        }
        total += index;
        let (image, _) = group.coset_action_images(&h).map_err(malformed)?;
        let kernel = group.kernel_of(&image, index).map_err(malformed)?;
        meet = intersection(&meet, &kernel).map_err(malformed)?;
    }
    if total != cert.mu {
        return Err(CertFailure::IndexSum {
            claimed: cert.mu,
            actual: total,
        });
    }
    if !meet.is_trivial() {
        return Err(CertFailure::CoresMeetNontrivially);
    }
    if cert.embedding.len() != domain.len() {
        return Err(CertFailure::EmbeddingShape);
    }
    let images = cert
        .embedding
        .iter()
        .map(|s| Perm::parse(s, cert.mu))
        .collect::<Result<Vec<_>>>()
        .map_err(|_| CertFailure::EmbeddingShape)?;
    let total_degree = n + cert.mu;
    let graph = PermGroup::generated_reduced(
        total_degree,
        domain
            .iter()
            .zip(&images)
            .map(|(a, b)| crate::group::graph_element(a, b, total_degree)),
    );
    if graph.order() != group.order() {
        return Err(CertFailure::NotHomomorphism);
    }
    let image = PermGroup::generated_reduced(cert.mu, images);
    if image.order() != group.order() {
        return Err(CertFailure::NotFaithful);
    }
    Ok(())
}
