//! Additivity sweeps over subgroup classes of small symmetric groups and the
//! targeted checks built on them.
//!
//! Every group `D` with `μ(D) = n` embeds in `Sym(n)` with no fixed points,
//! so sweeping the fixed-point-free classes of `Sym(n)` with `μ(D) = n`
//! covers every isomorphism type of minimal degree `n`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::actions::{
    external_direct_product, fixed_points, is_transitive, orbits, pointwise_stabilizer, restriction, wreath_product,
};
use crate::brute::brute_force_subgroups;
use crate::cache::{LatticeCache, ENGINE_VERSION};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::iso::{is_isomorphic, iso_invariants, IsoVerdict};
use crate::lattice::{Completeness, LatticeOptions, SubgroupLattice};
use crate::mu::{verify_certificate, GroupLiteral, MuCertificate, MuEngine, MuSolution};
use crate::named::{g225, g225_centralizing_involution, h7};
use crate::perm::Perm;
use crate::structure::{centralizer_in_sym, direct_decompositions, intersection, normal_subgroups};

/// Lattices at least this large are routed through the on-disk cache.
const CACHE_MIN_ORDER: u128 = 5_040;

/// A fixed-point-free class of `Sym(n)` with `μ(D) = n`.
#[derive(Clone, Debug)]
pub struct MinimalClass {
    pub class_id: usize,
    pub group: PermGroup,
    pub solution: MuSolution,
    pub in_wright_class: bool,
}

/// Per-degree data shared by the sweeps.
#[derive(Clone, Debug)]
pub struct DegreeData {
    pub degree: usize,
    pub lattice: Arc<SubgroupLattice>,
    /// Classes without fixed points.
    pub examined: usize,
    pub minimal: Vec<MinimalClass>,
}

/// Runs sweeps with a shared `μ` engine and an optional lattice cache.
pub struct Verifier {
    engine: Arc<MuEngine>,
    degrees: Mutex<HashMap<usize, Arc<DegreeData>>>,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier::new(LatticeOptions::default(), None)
    }
}

impl Verifier {
    pub fn new(options: LatticeOptions, cache: Option<LatticeCache>) -> Verifier {
        let mut engine = MuEngine::new(options.clone());
        if let Some(cache) = cache {
            engine = engine.with_lattice_hook(move |g| {
                if g.order() >= CACHE_MIN_ORDER {
                    cache.get_or_build(&format!("degree {} order {}", g.degree(), g.order()), g, &options)
                } else {
                    Ok(Arc::new(crate::lattice::subgroup_classes(g, &options)?))
                }
            });
        }
        Verifier {
            engine: Arc::new(engine),
            degrees: Mutex::new(HashMap::new()),
        }
    }

    pub fn engine(&self) -> &MuEngine {
        &self.engine
    }

    /// Subgroup classes of `Sym(n)` and the minimally embedded ones.
    pub fn degree_data(&self, n: usize) -> Result<Arc<DegreeData>> {
        if let Some(d) = self.degrees.lock().unwrap().get(&n) {
            return Ok(d.clone());
        }
        let lattice = self.engine.lattice(&PermGroup::symmetric(n))?;
        if !lattice.is_complete() {
            return Err(Error::Budget {
                what: "subgroup classes of the symmetric group",
                limit: self.engine.options.max_classes as u128,
            });
        }
        let free: Vec<_> = lattice
            .classes
            .iter()
            .filter(|c| n > 0 && fixed_points(&c.representative).is_empty())
            .collect();
        let examined = free.len();
        let solved: Vec<Option<MinimalClass>> = free
            .par_iter()
            .map(|c| -> Result<Option<MinimalClass>> {
                let solution = self.engine.solve(&c.representative)?;
                if solution.mu != n {
                    return Ok(None);
                }
                let in_wright_class = self.engine.in_wright_class(&c.representative)?.member;
                Ok(Some(MinimalClass {
                    class_id: c.id,
                    group: c.representative.clone(),
                    solution,
                    in_wright_class,
                }))
            })
            .collect::<Result<_>>()?;
        let data = Arc::new(DegreeData {
            degree: n,
            lattice,
            examined,
            minimal: solved.into_iter().flatten().collect(),
        });
        self.degrees.lock().unwrap().insert(n, data.clone());
        Ok(data)
    }

    /// Checks `μ(D) = μ(L) + μ(R)` for every direct decomposition `D = L × R`
    /// of every minimally embedded class of `Sym(n)`, together with the
    /// orbit-projection clauses. Centralizer properties are recorded per
    /// class but judged by [`Verifier::check_centralizer_theorems`].
    pub fn sweep_products(&self, n: usize) -> Result<VerificationReport> {
        let data = self.degree_data(n)?;
        let records: Vec<(ClassReport, Vec<Violation>)> = data
            .minimal
            .par_iter()
            .map(|m| self.class_report(n, m))
            .collect::<Result<_>>()?;
        let mut classes = Vec::new();
        let mut violations = Vec::new();
        for (c, v) in records {
            classes.push(c);
            violations.extend(v);
        }
        let body = ReportBody {
            engine_version: ENGINE_VERSION.to_string(),
            degree: n,
            completeness: data.lattice.completeness,
            classes_total: data.lattice.classes.len(),
            classes_examined: data.examined,
            classes_minimally_embedded: classes.len(),
            decompositions_checked: classes.iter().map(|c| c.decompositions.len()).sum(),
            violations,
            exceptional_classes: classes
                .iter()
                .filter(|c| !c.in_wright_class)
                .map(|c| c.class_id)
                .collect(),
            classes,
        };
        VerificationReport::seal(body)
    }

    fn class_report(&self, n: usize, m: &MinimalClass) -> Result<(ClassReport, Vec<Violation>)> {
        let d = &m.group;
        let mut violations = Vec::new();
        let mut violation = |kind: ViolationKind, detail: String| {
            violations.push(Violation {
                class_id: m.class_id,
                kind,
                detail,
            })
        };
        let normals: Vec<PermGroup> = m
            .solution
            .lattice
            .normal_classes()
            .iter()
            .map(|c| c.representative.clone())
            .collect();
        let mut decompositions = Vec::new();
        for dec in direct_decompositions(d, &normals)? {
            let left = self.engine.certificate(&dec.left, false)?;
            let right = self.engine.certificate(&dec.right, false)?;
            let left_wright = self.engine.in_wright_class(&dec.left)?.member;
            let right_wright = self.engine.in_wright_class(&dec.right)?.member;
            let additive = left.mu + right.mu == n;
            if left.mu + right.mu < n {
                violation(
                    ViolationKind::Subadditivity,
                    format!("{} + {} < {n}", left.mu, right.mu),
                );
            } else if !additive {
                violation(ViolationKind::NonAdditive, format!("{} + {} != {n}", left.mu, right.mu));
            }
            if left_wright && right_wright && !m.in_wright_class {
                violation(
                    ViolationKind::WrightProduct,
                    "both factors lie in the class, the product does not".into(),
                );
            }
            decompositions.push(DecompositionRecord {
                mu_left: left.mu,
                mu_right: right.mu,
                left_in_wright_class: left_wright,
                right_in_wright_class: right_wright,
                additive,
                left,
                right,
            });
        }
        let projections = if is_transitive(d) {
            None
        } else {
            let r = self.check_l1(d)?;
            for c in r.clauses.iter().filter(|c| !c.holds) {
                violation(
                    ViolationKind::ProjectionClause,
                    format!("clause {}: {}", c.clause, c.detail),
                );
            }
            Some(r)
        };
        let centralizer = centralizer_properties(d, m.in_wright_class)?;
        let report = ClassReport {
            class_id: m.class_id,
            group: GroupLiteral::of(d),
            order: d.order(),
            transitive: is_transitive(d),
            mu: m.solution.mu,
            in_wright_class: m.in_wright_class,
            certificate: MuCertificate::from_solution(&m.solution, None)?,
            decompositions,
            projections,
            centralizer,
        };
        Ok((report, violations))
    }

    /// Minimally embedded classes of `Sym(n)` outside the Wright class.
    pub fn exceptional_catalog(&self, n: usize) -> Result<Vec<usize>> {
        Ok(self
            .degree_data(n)?
            .minimal
            .iter()
            .filter(|m| !m.in_wright_class)
            .map(|m| m.class_id)
            .collect())
    }

    /// Centralizer properties of every minimally embedded class of `Sym(n)`.
    pub fn check_centralizer_theorems(&self, n: usize) -> Result<CentralizerSweep> {
        let data = self.degree_data(n)?;
        let per_class: Vec<(usize, CentralizerReport)> = data
            .minimal
            .par_iter()
            .map(|m| Ok((m.class_id, centralizer_properties(&m.group, m.in_wright_class)?)))
            .collect::<Result<_>>()?;
        Ok(CentralizerSweep { degree: n, per_class })
    }

    /// Evaluates the orbit-projection clauses for a group `G` on its orbits
    /// `A_1, …, A_k`, which requires `μ(G)` to equal the degree.
    pub fn check_l1(&self, g: &PermGroup) -> Result<ProjectionReport> {
        let n = g.degree();
        if !fixed_points(g).is_empty() || self.engine.mu(g)? != n {
            return Err(Error::Invalid("group is not minimally embedded".into()));
        }
        let orbs = orbits(g);
        let mut clauses = Vec::new();
        let mut push = |clause: &'static str, holds: bool, detail: String| {
            clauses.push(Clause {
                clause: clause.to_string(),
                holds,
                detail,
            })
        };
        for mask in 1u32..(1 << orbs.len()) {
            let points: Vec<usize> = orbs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .flat_map(|(_, o)| o.iter().copied())
                .collect();
            let mu = self.engine.mu(&restriction(g, &points)?)?;
            push(
                "i",
                mu == points.len(),
                format!("projection onto {} points has mu {mu}", points.len()),
            );
        }
        let sizes: Vec<usize> = orbs.iter().map(Vec::len).collect();
        for (i, orbit) in orbs.iter().enumerate() {
            let rest: Vec<usize> = (0..n).filter(|x| !orbit.contains(x)).collect();
            let local = pointwise_stabilizer(g, &rest)?;
            let label = one_based(orbit);
            push(
                "ii",
                !local.is_trivial(),
                format!("{} elements supported on {label}", local.order()),
            );
            match orbit.len() {
                2 => {
                    let kernel = pointwise_stabilizer(g, orbit)?;
                    let splits = local.order() == 2 && kernel.order() * 2 == g.order();
                    let mu_rest = self.engine.mu(&restriction(g, &rest)?)?;
                    push(
                        "iii",
                        splits && mu_rest == n - 2,
                        format!("splits off the swap on {label}; remaining projection has mu {mu_rest}"),
                    );
                }
                3 => push("iv", local.order() % 3 == 0, format!("3-cycle on {label}")),
                4 => {
                    let on_orbit = restriction(&local, orbit)?;
                    if on_orbit.order() % 3 == 0 {
                        push(
                            "v",
                            PermGroup::alternating(4).is_subgroup_of(&on_orbit),
                            format!("Alt({label}) lies in G"),
                        );
                    }
                    let transpositions = on_orbit.iter_elements().filter(|x| x.cycle_type() == vec![2]).count();
                    let pairs_closed = on_orbit.iter_elements().filter(|x| x.cycle_type() == vec![2]).all(|t| {
                        let moved = t.support();
                        let other: Vec<usize> = (0..4).filter(|p| !moved.contains(p)).collect();
                        on_orbit.contains(&Perm::from_cycles(4, &[other]).unwrap())
                    });
                    if transpositions > 0 {
                        push(
                            "vi",
                            pairs_closed,
                            format!("transpositions on {label} come in disjoint pairs"),
                        );
                    }
                }
                _ => {}
            }
            let p = orbit.len();
            if is_prime(p) && sizes.iter().enumerate().all(|(j, &s)| j == i || s < p) {
                push("vii", local.order() % p as u128 == 0, format!("{p}-cycle on {label}"));
            }
        }
        Ok(ProjectionReport {
            orbit_sizes: sizes,
            clauses,
        })
    }

    /// The degree-10 strict-inequality example.
    pub fn saunders_witness(&self) -> Result<WitnessReport> {
        let g = g225();
        let mu_g = self.engine.mu(&g)?;
        let c = centralizer_in_sym(&g)?;
        let z = g225_centralizing_involution();
        let c_is_z = c.order() == 2 && c.contains(&z);
        let meet_trivial = intersection(&g, &c)?.is_trivial();
        let d = g.join(&c);
        let internal = d.order() == g.order() * c.order() && g.is_normal_in(&d) && c.is_normal_in(&d) && meet_trivial;
        let mu_c = self.engine.mu(&c)?;
        let mu_d = self.engine.mu(&d)?;
        let external = external_direct_product(&g, &PermGroup::cyclic(2))?;
        let mu_external = self.engine.mu(&external)?;
        let d_in_sweep = self.sweep_class_degree(&d, 10)?;
        let holds =
            mu_g == 10 && c_is_z && internal && mu_c == 2 && mu_d == 10 && mu_external == 10 && mu_d < mu_g + mu_c;
        Ok(WitnessReport {
            mu_g,
            centralizer_order: c.order(),
            centralizer_generators: GroupLiteral::of(&c).generators,
            centralizer_meets_trivially: meet_trivial,
            internal_direct_product: internal,
            mu_centralizer: mu_c,
            mu_product: mu_d,
            mu_external_product: mu_external,
            product_violates_additivity: d_in_sweep,
            certificate_g: self.engine.certificate(&g, false)?,
            certificate_product: self.engine.certificate(&d, false)?,
            holds,
        })
    }

    /// `true` when some direct decomposition of `d` (with `μ(d) = n`) is not
    /// additive.
    fn sweep_class_degree(&self, d: &PermGroup, n: usize) -> Result<bool> {
        let sol = self.engine.solve(d)?;
        if sol.mu != n {
            return Ok(false);
        }
        let normals: Vec<PermGroup> = sol
            .lattice
            .normal_classes()
            .iter()
            .map(|c| c.representative.clone())
            .collect();
        for dec in direct_decompositions(d, &normals)? {
            if self.engine.mu(&dec.left)? + self.engine.mu(&dec.right)? != n {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// One row per isomorphism type among the subgroup classes of
    /// `Sym(max_degree)`, i.e. per type with `μ ≤ max_degree`.
    pub fn generate_table(&self, max_degree: usize) -> Result<Table> {
        let lattice = self.engine.lattice(&PermGroup::symmetric(max_degree))?;
        struct Type {
            rep: PermGroup,
            invariants: crate::iso::IsoInvariants,
        }
        let mut types: Vec<Type> = Vec::new();
        let mut unresolved = Vec::new();
        for c in &lattice.classes {
            let rep = &c.representative;
            let inv = iso_invariants(rep)?;
            let mut found = false;
            for (i, t) in types.iter().enumerate() {
                if t.invariants != inv {
                    continue;
                }
                match is_isomorphic(&t.rep, rep) {
                    IsoVerdict::Yes => {
                        found = true;
                        break;
                    }
                    IsoVerdict::Unresolved => unresolved.push((i, c.id)),
                    IsoVerdict::No => {}
                }
            }
            if !found {
                types.push(Type {
                    rep: compact(rep)?,
                    invariants: inv,
                });
            }
        }
        let mut rows: Vec<TableRow> = types
            .par_iter()
            .map(|t| {
                Ok(TableRow {
                    label: String::new(),
                    description: describe(&t.rep)?,
                    order: t.rep.order(),
                    mu: self.engine.mu(&t.rep)?,
                    in_wright_class: self.engine.in_wright_class(&t.rep)?.member,
                    generators: GroupLiteral::of(&t.rep),
                })
            })
            .collect::<Result<_>>()?;
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&i| (rows[i].order, rows[i].mu, i));
        let mut sorted: Vec<TableRow> = order.iter().map(|&i| rows[i].clone()).collect();
        let mut counter: HashMap<u128, usize> = HashMap::new();
        for r in &mut sorted {
            let k = counter.entry(r.order).or_insert(0);
            *k += 1;
            r.label = format!("{}.{}", r.order, k);
        }
        rows = sorted;
        let position: Vec<usize> = {
            let mut p = vec![0; order.len()];
            for (new, &old) in order.iter().enumerate() {
                p[old] = new;
            }
            p
        };
        Ok(Table {
            max_degree,
            completeness: lattice.completeness,
            rows,
            unresolved_pairs: unresolved.into_iter().map(|(t, class)| (position[t], class)).collect(),
        })
    }
}

/// The group moved onto its support, relabelled `0..k`.
fn compact(g: &PermGroup) -> Result<PermGroup> {
    let moved = g.moved_points();
    if moved.is_empty() {
        return Ok(PermGroup::trivial(1));
    }
    restriction(g, &moved)
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn one_based(points: &[usize]) -> String {
    let inner: Vec<String> = points.iter().map(|p| (p + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// Invariant factors of an abelian group in primary form, e.g. `C2 x C4`,
/// or a short structural summary otherwise.
fn describe(g: &PermGroup) -> Result<String> {
    if g.is_trivial() {
        return Ok("1".into());
    }
    if !g.is_abelian() {
        let inv = iso_invariants(g)?;
        let derived = inv.derived_orders.get(1).copied().unwrap_or(1);
        return Ok(format!(
            "nonabelian, centre {}, derived subgroup {}",
            inv.center_order, derived
        ));
    }
    let mut counts: HashMap<u64, u128> = HashMap::new();
    for x in g.iter_elements() {
        *counts.entry(x.order()).or_insert(0) += 1;
    }
    let mut factors: Vec<u64> = Vec::new();
    for p in crate::structure::prime_factors(g.order()) {
        let p = p as u64;
        let below = |k: u32| -> u128 {
            counts
                .iter()
                .filter(|(&o, _)| {
                    let mut m = o;
                    let mut e = 0;
                    while m % p == 0 {
                        m /= p;
                        e += 1;
                    }
                    m == 1 && e <= k
                })
                .map(|(_, &c)| c)
                .sum()
        };
        let log = |x: u128| -> u32 {
            let mut e = 0;
            let mut y = x;
            while y > 1 {
                y /= p as u128;
                e += 1;
            }
            e
        };
        let mut k = 1;
        let mut prev = 0;
        let total = log(below(64));
        let mut ranks = Vec::new();
        while prev < total {
            let r = log(below(k));
            ranks.push(r - prev);
            prev = r;
            k += 1;
        }
        for (j, &count) in ranks.iter().enumerate() {
            let next = ranks.get(j + 1).copied().unwrap_or(0);
            for _ in 0..count - next {
                factors.push(p.pow(j as u32 + 1));
            }
        }
    }
    factors.sort_unstable();
    Ok(factors.iter().map(|f| format!("C{f}")).collect::<Vec<_>>().join(" x "))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// `μ(L) + μ(R) < μ(L × R)`.
    Subadditivity,
    /// `μ(L) + μ(R) > μ(L × R)`.
    NonAdditive,
    /// Both factors lie in the Wright class but the product does not.
    WrightProduct,
    ProjectionClause,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub class_id: usize,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub mu_left: usize,
    pub mu_right: usize,
    pub left_in_wright_class: bool,
    pub right_in_wright_class: bool,
    pub additive: bool,
    pub left: MuCertificate,
    pub right: MuCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub clause: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub orbit_sizes: Vec<usize>,
    pub clauses: Vec<Clause>,
}

impl ProjectionReport {
    pub fn holds(&self) -> bool {
        self.clauses.iter().all(|c| c.holds)
    }

    pub fn clause(&self, name: &str) -> impl Iterator<Item = &Clause> {
        let name = name.to_string();
        self.clauses.iter().filter(move |c| c.clause == name)
    }
}

/// Properties of `C = C_Sym(n)(D)` for a minimally embedded `D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerReport {
    pub generators: Vec<String>,
    pub order: u128,
    pub abelian: bool,
    pub nilpotent: bool,
    pub elementary_abelian: bool,
    /// Every subgroup of prime order of `C` lies in `D`.
    pub minimal_subgroups_meet: bool,
    pub contained: bool,
    pub in_wright_class: bool,
}

impl CentralizerReport {
    /// Failed implications, empty when all hold.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.abelian {
            out.push("centralizer is not abelian");
        }
        if self.in_wright_class && self.nilpotent && !self.minimal_subgroups_meet {
            out.push("a nontrivial subgroup of the centralizer misses the group");
        }
        if self.in_wright_class && self.elementary_abelian && !self.contained {
            out.push("elementary abelian centralizer is not contained in the group");
        }
        out
    }
}

fn centralizer_properties(d: &PermGroup, in_wright_class: bool) -> Result<CentralizerReport> {
    let c = centralizer_in_sym(d)?;
    let abelian = c.is_abelian();
    let primes = crate::structure::prime_factors(c.order());
    let elementary_abelian = abelian
        && primes.len() <= 1
        && c.iter_elements()
            .all(|x| x.is_identity() || primes.contains(&(x.order() as u128)));
    // Every nontrivial subgroup contains one of prime order, so checking
    // elements of prime order suffices.
    let minimal_subgroups_meet = c
        .iter_elements()
        .filter(|x| primes.contains(&(x.order() as u128)))
        .all(|x| d.contains(&x));
    Ok(CentralizerReport {
        generators: GroupLiteral::of(&c).generators,
        order: c.order(),
        abelian,
        nilpotent: crate::structure::is_nilpotent(&c)?,
        elementary_abelian,
        minimal_subgroups_meet,
        contained: c.is_subgroup_of(d),
        in_wright_class,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerSweep {
    pub degree: usize,
    pub per_class: Vec<(usize, CentralizerReport)>,
}

impl CentralizerSweep {
    pub fn holds(&self) -> bool {
        self.per_class.iter().all(|(_, r)| r.failures().is_empty())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub class_id: usize,
    pub group: GroupLiteral,
    pub order: u128,
    pub transitive: bool,
    pub mu: usize,
    pub in_wright_class: bool,
    pub certificate: MuCertificate,
    pub decompositions: Vec<DecompositionRecord>,
    pub projections: Option<ProjectionReport>,
    pub centralizer: CentralizerReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportBody {
    pub engine_version: String,
    pub degree: usize,
    pub completeness: Completeness,
    pub classes_total: usize,
    /// Classes without fixed points.
    pub classes_examined: usize,
    pub classes_minimally_embedded: usize,
    pub decompositions_checked: usize,
    pub violations: Vec<Violation>,
    /// Minimally embedded classes outside the Wright class.
    pub exceptional_classes: Vec<usize>,
    pub classes: Vec<ClassReport>,
}

/// Sweep result with a SHA-256 checksum over the serialized body.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub body: ReportBody,
    pub checksum: String,
}

impl VerificationReport {
    fn seal(body: ReportBody) -> Result<VerificationReport> {
        let checksum = hex::encode(Sha256::digest(serde_json::to_vec(&body)?));
        Ok(VerificationReport { body, checksum })
    }

    pub fn passed(&self) -> bool {
        self.body.violations.is_empty() && self.body.completeness != Completeness::Partial
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Plain-text summary.
    pub fn summary(&self) -> String {
        let b = &self.body;
        let mut out = format!(
            "degree: {}\nlattice: {} classes ({})\nfixed-point-free classes: {}\nminimally embedded classes: {}\ndecompositions checked: {}\nexceptional classes: {:?}\nviolations: {}\n",
            b.degree,
            b.classes_total,
            b.completeness,
            b.classes_examined,
            b.classes_minimally_embedded,
            b.decompositions_checked,
            b.exceptional_classes,
            b.violations.len()
        );
        for v in &b.violations {
            out.push_str(&format!("  class {}: {:?}: {}\n", v.class_id, v.kind, v.detail));
        }
        out
    }
}

/// Result of re-checking a report without recomputing lattices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub certificates_checked: usize,
    pub errors: Vec<String>,
}

impl CheckOutcome {
    pub fn ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Re-verifies every certificate in a report, the structure of every
/// recorded decomposition, the violation list and the checksum.
pub fn check_report(report: &VerificationReport) -> CheckOutcome {
    let mut out = CheckOutcome::default();
    let body = &report.body;
    let sealed = serde_json::to_vec(body).map(|bytes| hex::encode(Sha256::digest(bytes)));
    if sealed.ok().as_deref() != Some(report.checksum.as_str()) {
        out.errors.push("checksum mismatch".into());
    }
    let mut non_additive = 0;
    for c in &body.classes {
        let ctx = format!("class {}", c.class_id);
        let d = match c.group.group() {
            Ok(d) => d,
            Err(e) => {
                out.errors.push(format!("{ctx}: {e}"));
                continue;
            }
        };
        let check = |out: &mut CheckOutcome, g: &PermGroup, cert: &MuCertificate, what: &str| {
            out.certificates_checked += 1;
            if let Err(e) = verify_certificate(g, cert) {
                out.errors.push(format!("{ctx}: {what}: {e}"));
            }
        };
        check(&mut out, &d, &c.certificate, "certificate");
        if c.mu != body.degree || c.certificate.mu != c.mu {
            out.errors
                .push(format!("{ctx}: not minimally embedded at degree {}", body.degree));
        }
        for (i, dec) in c.decompositions.iter().enumerate() {
            let (l, r) = match (dec.left.group.group(), dec.right.group.group()) {
                (Ok(l), Ok(r)) => (l, r),
                _ => {
                    out.errors.push(format!("{ctx}: decomposition {i} unparsable"));
                    continue;
                }
            };
            check(&mut out, &l, &dec.left, "left factor");
            check(&mut out, &r, &dec.right, "right factor");
            let is_product = l.is_normal_in(&d)
                && r.is_normal_in(&d)
                && l.is_subgroup_of(&d)
                && r.is_subgroup_of(&d)
                && l.order() * r.order() == d.order()
                && intersection(&l, &r).map(|m| m.is_trivial()).unwrap_or(false);
            if !is_product {
                out.errors
                    .push(format!("{ctx}: decomposition {i} is not a direct product"));
            }
            if dec.mu_left != dec.left.mu || dec.mu_right != dec.right.mu {
                out.errors
                    .push(format!("{ctx}: decomposition {i} values disagree with certificates"));
            }
            if dec.additive != (dec.mu_left + dec.mu_right == c.mu) {
                out.errors
                    .push(format!("{ctx}: decomposition {i} additivity flag is wrong"));
            }
            if !dec.additive {
                non_additive += 1;
            }
        }
    }
    let listed = body
        .violations
        .iter()
        .filter(|v| matches!(v.kind, ViolationKind::NonAdditive | ViolationKind::Subadditivity))
        .count();
    if listed != non_additive {
        out.errors.push(format!(
            "{non_additive} non-additive decompositions but {listed} listed"
        ));
    }
    if body.classes.len() != body.classes_minimally_embedded {
        out.errors.push("class count mismatch".into());
    }
    out
}

/// Normal subgroups of `C3 ≀ Sym(3)` inside the base group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalReport {
    pub base_order: u128,
    /// Orders of the normal subgroups strictly between 1 and the base.
    pub proper_orders: Vec<u128>,
    pub diagonal_matches: bool,
    pub sum_zero_matches: bool,
    pub chain: bool,
    pub oracle_agrees: bool,
    pub holds: bool,
}

/// The only nontrivial normal subgroups of `C3 ≀ Sym(3)` properly inside the
/// base `B` are the diagonal `V = ⟨x₁x₂x₃⟩` and the sum-zero subgroup
/// `U = {x₁^i x₂^j x₃^k : i+j+k ≡ 0}`, with `V < U`.
pub fn check_diagonal_lemma() -> Result<DiagonalReport> {
    let w = wreath_product(&PermGroup::cyclic(3), &PermGroup::symmetric(3))?;
    let x: Vec<Perm> = ["(1 2 3)", "(4 5 6)", "(7 8 9)"]
        .iter()
        .map(|t| Perm::parse(t, 9))
        .collect::<Result<_>>()?;
    let base = PermGroup::from_generators(9, x.clone())?;
    let word = |i: i64, j: i64, k: i64| &(&x[0].pow(i) * &x[1].pow(j)) * &x[2].pow(k);
    let v = PermGroup::from_generators(9, vec![word(1, 1, 1)])?;
    let u = PermGroup::from_generators(9, vec![word(1, 2, 0), word(0, 1, 2)])?;
    let sum_zero_elements = (0..3)
        .flat_map(|i| (0..3).flat_map(move |j| (0..3).map(move |k| (i, j, k))))
        .filter(|(i, j, k)| (i + j + k) % 3 == 0)
        .all(|(i, j, k)| u.contains(&word(i, j, k)));
    let inside: Vec<PermGroup> = normal_subgroups(&w, 1 << 20)?
        .into_iter()
        .filter(|n| n.is_subgroup_of(&base))
        .collect();
    let proper: Vec<&PermGroup> = inside
        .iter()
        .filter(|n| !n.is_trivial() && n.order() < base.order())
        .collect();
    let proper_orders: Vec<u128> = proper.iter().map(|n| n.order()).collect();
    let diagonal_matches = proper.iter().any(|n| n.same_group(&v));
    let sum_zero_matches = sum_zero_elements && u.order() == 9 && proper.iter().any(|n| n.same_group(&u));
    let chain = v.is_subgroup_of(&u);
    let lattice = brute_force_subgroups(&w, 2000)?;
    let oracle_orders: Vec<u128> = lattice
        .normal_classes()
        .iter()
        .filter(|c| c.representative.is_subgroup_of(&base) && c.order > 1 && c.order < 27)
        .map(|c| c.order)
        .collect();
    let oracle_agrees = oracle_orders == proper_orders;
    let holds = base.order() == 27
        && proper_orders == vec![3, 9]
        && diagonal_matches
        && sum_zero_matches
        && chain
        && oracle_agrees;
    Ok(DiagonalReport {
        base_order: base.order(),
        proper_orders,
        diagonal_matches,
        sum_zero_matches,
        chain,
        oracle_agrees,
        holds,
    })
}

/// Subdirect products of `Sym(3) × C4`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdirectReport {
    /// Proper subgroups projecting onto both factors.
    pub proper_subdirect: usize,
    pub all_isomorphic_to_h7: bool,
    /// Subgroups of order 12 with an element of order 4, and how many of
    /// them are nonabelian.
    pub order12_with_order4: usize,
    pub nonabelian_order12_with_order4: usize,
    pub holds: bool,
}

pub fn check_subdirect_uniqueness() -> Result<SubdirectReport> {
    let g = external_direct_product(&PermGroup::symmetric(3), &PermGroup::cyclic(4))?;
    let lattice = brute_force_subgroups(&g, 2000)?;
    let left: Vec<usize> = (0..3).collect();
    let right: Vec<usize> = (3..7).collect();
    let mut subdirect = Vec::new();
    let mut with4 = 0;
    let mut nonabelian_with4 = 0;
    for c in &lattice.classes {
        let conjugates = g.right_transversal(&crate::structure::normalizer(&g, &c.representative)?, u128::MAX)?;
        for x in conjugates {
            let h = c.representative.conjugate_by(&x);
            if restriction(&h, &left)?.order() == 6 && restriction(&h, &right)?.order() == 4 && h.order() < g.order() {
                subdirect.push(h.clone());
            }
            if h.order() == 12 && h.iter_elements().any(|e| e.order() == 4) {
                with4 += 1;
                if !h.is_abelian() {
                    nonabelian_with4 += 1;
                }
            }
        }
    }
    let target = h7();
    let all_isomorphic_to_h7 = subdirect.iter().all(|h| is_isomorphic(h, &target) == IsoVerdict::Yes);
    let holds = subdirect.len() == 1 && all_isomorphic_to_h7 && nonabelian_with4 == 1;
    Ok(SubdirectReport {
        proper_subdirect: subdirect.len(),
        all_isomorphic_to_h7,
        order12_with_order4: with4,
        nonabelian_order12_with_order4: nonabelian_with4,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub mu_g: usize,
    pub centralizer_order: u128,
    pub centralizer_generators: Vec<String>,
    pub centralizer_meets_trivially: bool,
    pub internal_direct_product: bool,
    pub mu_centralizer: usize,
    pub mu_product: usize,
    pub mu_external_product: usize,
    pub product_violates_additivity: bool,
    pub certificate_g: MuCertificate,
    pub certificate_product: MuCertificate,
    pub holds: bool,
}

impl WitnessReport {
    pub fn summary(&self) -> String {
        format!(
            "mu(G) = {}\ncentralizer order {} generated by {:?}, meets G trivially: {}\nmu(C) = {}\nmu(G x C) = {} (external product on 12 points: {})\n{} < {}: {}\n",
            self.mu_g,
            self.centralizer_order,
            self.centralizer_generators,
            self.centralizer_meets_trivially,
            self.mu_centralizer,
            self.mu_product,
            self.mu_external_product,
            self.mu_product,
            self.mu_g + self.mu_centralizer,
            if self.holds && self.mu_product < self.mu_g + self.mu_centralizer {
                "strict inequality"
            } else {
                "FAILED"
            }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub description: String,
    pub order: u128,
    pub mu: usize,
    pub in_wright_class: bool,
    pub generators: GroupLiteral,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub max_degree: usize,
    pub completeness: Completeness,
    pub rows: Vec<TableRow>,
    /// `(row, class id)` pairs the isomorphism test could not decide.
    pub unresolved_pairs: Vec<(usize, usize)>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,order,mu,in_wright_class,description\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},\"{}\"\n",
                r.label, r.order, r.mu, r.in_wright_class, r.description
            ));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "groups with minimal degree at most {} ({} lattice)\n{:<8} {:>7} {:>3}  {:<6} description\n",
            self.max_degree, self.completeness, "label", "order", "mu", "wright"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:<8} {:>7} {:>3}  {:<6} {}\n",
                r.label,
                r.order,
                r.mu,
                if r.in_wright_class { "yes" } else { "no" },
                r.description
            ));
        }
        if !self.unresolved_pairs.is_empty() {
            out.push_str(&format!("unresolved isomorphism pairs: {:?}\n", self.unresolved_pairs));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn describe_abelian_groups() {
        let c2c4 = external_direct_product(&PermGroup::cyclic(2), &PermGroup::cyclic(4)).unwrap();
        assert_eq!(describe(&c2c4).unwrap(), "C2 x C4");
        assert_eq!(describe(&PermGroup::cyclic(6)).unwrap(), "C2 x C3");
        let v4 = PermGroup::from_generators(
            4,
            vec![
                Perm::parse("(1 2)(3 4)", 4).unwrap(),
                Perm::parse("(1 3)(2 4)", 4).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(describe(&v4).unwrap(), "C2 x C2");
        assert!(describe(&PermGroup::symmetric(3)).unwrap().starts_with("nonabelian"));
    }

    #[test]
    fn small_sweeps() {
        let v = Verifier::default();
        for n in 1..=5 {
            let r = v.sweep_products(n).unwrap();
            assert!(r.passed(), "{}", r.summary());
            assert!(r.body.exceptional_classes.is_empty());
            assert!(check_report(&r).ok());
            let parsed: VerificationReport = serde_json::from_str(&r.to_json().unwrap()).unwrap();
            assert_eq!(parsed, r);
        }
    }

    #[test]
    fn lemma_checks() {
        assert!(check_diagonal_lemma().unwrap().holds);
        let s = check_subdirect_uniqueness().unwrap();
        assert!(s.holds, "{s:?}");
        assert_eq!(s.order12_with_order4, 2);
    }

    #[test]
    fn projection_clauses_for_h7() {
        let v = Verifier::default();
        let r = v.check_l1(&h7()).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!(r.clause("iv").all(|c| c.holds));
        assert!(v.check_l1(&PermGroup::cyclic(4)).is_ok());
        assert!(v.check_l1(&PermGroup::trivial(3)).is_err());
    }
}
