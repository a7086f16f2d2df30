//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs with `harness = false`, so `cargo test` executes `main` directly.
//! Set `MINDEG_DEEP=1` to add the degree 8 and 9 tier; its lattices are
//! cached in `MINDEG_CACHE` (default: a directory under the system temp dir).

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mindeg::actions::{external_direct_product, is_transitive, orbits};
use mindeg::brute::brute_force_subgroups;
use mindeg::cache::{LatticeCache, CACHE_ENV};
use mindeg::error::Error;
use mindeg::iso::sym_conjugate;
use mindeg::lattice::{same_classes, subgroup_classes, LatticeOptions};
use mindeg::mu::{mu_exhaustive, verify_certificate, MuCertificate, MuEngine};
use mindeg::named::{h7, k8, l8};
use mindeg::perm::INTERNAL_MAX_DEGREE;
use mindeg::spec::parse_group;
use mindeg::structure::{centralizer_in_sym, core};
use mindeg::verify::{check_diagonal_lemma, check_subdirect_uniqueness, Verifier};
use mindeg::{Perm, PermGroup};
use proptest::strategy::{Just, Strategy};
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

const DEEP_ENV: &str = "MINDEG_DEEP";

/// Wall-clock limits per criterion.
const LIMIT_H7: Duration = Duration::from_secs(5);
const LIMIT_K8_L8: Duration = Duration::from_secs(30);
const LIMIT_SWEEPS: Duration = Duration::from_secs(600);
const LIMIT_WITNESS10: Duration = Duration::from_secs(600);
const LIMIT_LEMMAS: Duration = Duration::from_secs(30);
const LIMIT_DEEP: Duration = Duration::from_secs(6 * 3600);
const LIMIT_DEFAULT: Duration = Duration::from_secs(1800);

/// Largest ambient order compared against the brute-force oracle.
const ORACLE_MAX_ORDER: u128 = 2000;
/// Largest group order in the solver optimality corpus, and the minimum
/// number of groups it must contain.
const OPTIMALITY_MAX_ORDER: u128 = 200;
const OPTIMALITY_MIN_GROUPS: usize = 50;
const SUBADDITIVITY_CASES: u32 = 500;
const PAIR_MAX_DEGREE: usize = 9;

/// Ambients for the lattice oracle; all have order at most 2000.
const ORACLE_CORPUS: &[&str] = &[
    "S3",
    "S4",
    "S5",
    "S6",
    "A4",
    "A5",
    "A6",
    "C3wrS3",
    "S3 x C4",
    "G225",
    "Dih8",
    "Dih12",
    "Dih18",
    "Dih16",
    "C2xC2xC2",
    "C4 x C4",
    "H7",
    "H7xC2_9",
    "K8",
    "L8",
    "deg 7: (1 2 3 4 5 6 7), (2 3 5)(4 7 6)",
    "wr(C2, C2)",
    "wr(C2, S3)",
    "wr(C2, C4)",
    "wr(S3, S2)",
    "wr(C3, C3)",
    "wr(S2, S4)",
    "S4 x C2",
    "S4 x S3",
    "S4 x S4",
    "S5 x C2",
    "A4 x C3",
    "A4 x A4",
    "A5 x C3",
    "S3 x S3 x S3",
];

/// Extra oracle ambients whose brute-force enumeration takes about a minute.
const ORACLE_DEEP_CORPUS: &[&str] = &["wr(S4, S2)", "wr(S3, S3)"];

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Verdict {
        Verdict {
            passed,
            detail: detail.into(),
        }
    }
}

type Check = Result<Verdict, Error>;

struct Suite {
    failures: usize,
}

impl Suite {
    fn run(&mut self, name: &str, limit: Duration, check: impl FnOnce() -> Check) {
        let start = Instant::now();
        let verdict = check().unwrap_or_else(|e| Verdict::new(false, format!("error: {e}")));
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let passed = verdict.passed && in_time;
        if !passed {
            self.failures += 1;
        }
        println!(
            "{} {name}: {} [{:.2?} / limit {:?}]{}",
            if passed { "PASS" } else { "FAIL" },
            verdict.detail,
            elapsed,
            limit,
            if in_time { "" } else { " time limit exceeded" },
        );
    }
}

fn perm(text: &str, n: usize) -> Perm {
    Perm::parse(text, n).expect("valid literal")
}

fn criterion_h7(engine: &MuEngine) -> Check {
    let g = h7();
    let mu = engine.mu(&g)?;
    let c = centralizer_in_sym(&g)?;
    let expected = PermGroup::from_generators(7, vec![perm("(4 5 6 7)", 7)])?;
    let wright = engine.in_wright_class(&g)?.member;
    Ok(Verdict::new(
        mu == 7 && c.same_group(&expected) && !wright,
        format!(
            "mu = {mu}, |C| = {}, C = <(4 5 6 7)>: {}, in Wright class: {wright}",
            c.order(),
            c.same_group(&expected)
        ),
    ))
}

fn criterion_k8_l8(engine: &MuEngine) -> Check {
    let (k, l) = (k8(), l8());
    let (mu_k, mu_l) = (engine.mu(&k)?, engine.mu(&l)?);
    let (ck, cl) = (centralizer_in_sym(&k)?, centralizer_in_sym(&l)?);
    let wright = engine.in_wright_class(&k)?.member;
    Ok(Verdict::new(
        mu_k == 8 && mu_l == 8 && ck.is_trivial() && cl.is_trivial() && !wright,
        format!(
            "mu(K8) = {mu_k}, mu(L8) = {mu_l}, |C(K8)| = {}, |C(L8)| = {}, K8 in Wright class: {wright}",
            ck.order(),
            cl.order()
        ),
    ))
}

fn criterion_sweeps(verifier: &Verifier, degrees: &[usize]) -> Check {
    let mut parts = Vec::new();
    let mut passed = true;
    for &n in degrees {
        let report = verifier.sweep_products(n)?;
        let ok = report.passed();
        passed &= ok;
        parts.push(format!(
            "n={n}: {} violations over {} decompositions ({})",
            report.body.violations.len(),
            report.body.decompositions_checked,
            report.body.completeness
        ));
    }
    Ok(Verdict::new(passed, parts.join("; ")))
}

fn criterion_catalog(verifier: &Verifier, deep: bool) -> Check {
    let mut passed = true;
    let mut parts = Vec::new();
    for n in 1..=6 {
        let found = verifier.exceptional_catalog(n)?;
        passed &= found.is_empty();
        if !found.is_empty() {
            parts.push(format!("n={n}: unexpected {found:?}"));
        }
    }
    parts.push("n<=6: empty".into());

    let seven = verifier.exceptional_catalog(7)?;
    let data = verifier.degree_data(7)?;
    let conj_h7 = match seven.as_slice() {
        [id] => sym_conjugate(&data.lattice.classes[*id].representative, &h7())?.is_some(),
        _ => false,
    };
    passed &= conj_h7;
    parts.push(format!("n=7: {} class(es), conjugate to H7: {conj_h7}", seven.len()));

    if deep {
        let data = verifier.degree_data(8)?;
        let transitive: Vec<&PermGroup> = verifier
            .exceptional_catalog(8)?
            .into_iter()
            .map(|id| &data.lattice.classes[id].representative)
            .filter(|g| is_transitive(g))
            .collect();
        let mut matched = [false; 2];
        for g in &transitive {
            for (slot, target) in matched.iter_mut().zip([k8(), l8()]) {
                if sym_conjugate(g, &target)?.is_some() {
                    *slot = true;
                }
            }
        }
        let ok = transitive.len() == 2 && matched == [true, true];
        passed &= ok;
        parts.push(format!(
            "n=8 transitive: {} class(es), K8 and L8 matched: {ok}",
            transitive.len()
        ));
        let nine = verifier.exceptional_catalog(9)?;
        parts.push(format!("n=9 (informational): {} classes", nine.len()));
    }
    Ok(Verdict::new(passed, parts.join("; ")))
}

fn criterion_witness10(verifier: &Verifier) -> Check {
    let w = verifier.saunders_witness()?;
    let ok = w.mu_g == 10
        && w.centralizer_order == 2
        && w.centralizer_meets_trivially
        && w.mu_product == 10
        && w.mu_external_product == 10
        && w.holds;
    Ok(Verdict::new(
        ok,
        format!(
            "mu(G) = {}, |C| = {}, C meets G trivially: {}, mu(G x C) = {} < {}",
            w.mu_g,
            w.centralizer_order,
            w.centralizer_meets_trivially,
            w.mu_product,
            w.mu_g + w.mu_centralizer
        ),
    ))
}

fn criterion_oracle(corpus: &[&str]) -> Check {
    let mut mismatched = Vec::new();
    let mut compared = 0;
    for spec in corpus {
        let g = parse_group(spec)?;
        if g.order() > ORACLE_MAX_ORDER {
            return Ok(Verdict::new(false, format!("{spec} exceeds the oracle bound")));
        }
        let fast = subgroup_classes(&g, &LatticeOptions::default())?;
        let brute = brute_force_subgroups(&g, ORACLE_MAX_ORDER)?;
        if !fast.is_complete() || !same_classes(&fast, &brute)? {
            mismatched.push(*spec);
        }
        compared += 1;
    }
    Ok(Verdict::new(
        mismatched.is_empty(),
        format!("{compared} ambients compared, mismatches: {mismatched:?}"),
    ))
}

/// Groups of order at most 200: subgroup classes of Sym(6) plus named and
/// product groups on up to 8 points.
fn optimality_corpus() -> Result<Vec<(String, PermGroup)>, Error> {
    let mut out = Vec::new();
    let s6 = subgroup_classes(&PermGroup::symmetric(6), &LatticeOptions::default())?;
    for c in &s6.classes {
        if c.order > 1 && c.order <= OPTIMALITY_MAX_ORDER {
            out.push((format!("Sym(6) class {}", c.id), c.representative.clone()));
        }
    }
    for spec in [
        "H7",
        "K8",
        "L8",
        "G225",
        "C3wrS3",
        "S3 x C4",
        "Dih16",
        "C4 x C4",
        "C2 x C3 x C5",
        "A4 x C3",
        "S4 x C2",
        "wr(C2, C4)",
        "wr(C3, C3)",
        "S4 x S3",
        "A5 x C3",
        "C7",
        "Dih14",
    ] {
        out.push((spec.to_string(), parse_group(spec)?));
    }
    Ok(out)
}

fn criterion_optimality() -> Check {
    let corpus = optimality_corpus()?;
    let engine = MuEngine::default();
    let mut bad = Vec::new();
    let mut tested = 0;
    for (name, g) in &corpus {
        if g.order() > OPTIMALITY_MAX_ORDER {
            continue;
        }
        let sol = engine.solve(g)?;
        let brute = brute_force_subgroups(g, ORACLE_MAX_ORDER)?;
        let (exhaustive, _) = mu_exhaustive(&brute)?;
        let cert = MuCertificate::from_solution(&sol, None)?;
        if sol.mu != exhaustive || verify_certificate(g, &cert).is_err() {
            bad.push(format!("{name}: {} vs {exhaustive}", sol.mu));
        }
        tested += 1;
    }
    Ok(Verdict::new(
        bad.is_empty() && tested >= OPTIMALITY_MIN_GROUPS,
        format!("{tested} groups (need {OPTIMALITY_MIN_GROUPS}), disagreements: {bad:?}"),
    ))
}

fn criterion_lemmas() -> Check {
    let d = check_diagonal_lemma()?;
    let s = check_subdirect_uniqueness()?;
    Ok(Verdict::new(
        d.holds && s.holds,
        format!(
            "diagonal: {} (normal orders {:?}); subdirect: {} ({} proper, H7-type: {})",
            d.holds, d.proper_orders, s.holds, s.proper_subdirect, s.all_isomorphic_to_h7
        ),
    ))
}

fn criterion_centralizers(verifier: &Verifier, degrees: &[usize]) -> Check {
    let mut passed = true;
    let mut parts = Vec::new();
    for &n in degrees {
        let sweep = verifier.check_centralizer_theorems(n)?;
        let failing: Vec<usize> = sweep
            .per_class
            .iter()
            .filter(|(_, r)| !r.failures().is_empty())
            .map(|(id, _)| *id)
            .collect();
        passed &= failing.is_empty();
        if failing.is_empty() {
            parts.push(format!("n={n}: {} classes ok", sweep.per_class.len()));
        } else {
            let details: Vec<String> = sweep
                .per_class
                .iter()
                .filter(|(id, _)| failing.contains(id))
                .map(|(id, r)| format!("class {id} (|C| = {}): {:?}", r.order, r.failures()))
                .collect();
            parts.push(format!("n={n}: failing {}", details.join(", ")));
        }
    }
    Ok(Verdict::new(passed, parts.join("; ")))
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn random_perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|images| Perm::from_images(&images).expect("a shuffle is a permutation"))
}

fn random_group(max_degree: usize) -> impl Strategy<Value = PermGroup> {
    (2..=max_degree)
        .prop_flat_map(|n| proptest::collection::vec(random_perm(n), 1..=3))
        .prop_map(|gens| PermGroup::from_generators(gens[0].degree(), gens).expect("same degree"))
}

/// Leaf specs with their degrees.
const LEAVES: &[(&str, usize)] = &[
    ("S2", 2),
    ("S3", 3),
    ("S4", 4),
    ("S5", 5),
    ("A4", 4),
    ("A5", 5),
    ("C2", 2),
    ("C3", 3),
    ("C4", 4),
    ("C5", 5),
    ("C6", 6),
    ("C7", 7),
    ("Dih8", 4),
    ("Dih10", 5),
    ("Dih12", 6),
    ("H7", 7),
    ("deg 4: (1 2)(3 4), (1 3)(2 4)", 4),
    ("deg 6: (1 2 3), (4 5 6)", 6),
    ("wr(C2, C2)", 4),
    ("wr(C3, C2)", 6),
];

fn random_spec() -> impl Strategy<Value = (String, usize)> {
    let leaf = proptest::sample::select(LEAVES).prop_map(|(s, d)| (s.to_string(), d));
    proptest::prop_oneof![
        3 => leaf.clone(),
        1 => (leaf.clone(), leaf).prop_map(|((a, da), (b, db))| (format!("{a} x {b}"), da + db)),
    ]
}

fn criterion_properties(verifier: &Verifier) -> Check {
    let mut parts = Vec::new();
    let mut passed = true;
    let mut record = |name: &str, result: Result<(), String>| {
        passed &= result.is_ok();
        parts.push(match result {
            Ok(()) => format!("{name}: ok"),
            Err(e) => format!("{name}: {e}"),
        });
    };

    let orbit_stabilizer = runner(256).run(&(random_group(8), 0usize..8), |(g, x)| {
        let x = x % g.degree();
        let stab = g.point_stabilizer(x).map_err(|e| TestCaseError::fail(e.to_string()))?;
        proptest::prop_assert_eq!(g.orbit(x).len() as u128 * stab.order(), g.order());
        Ok(())
    });
    record(
        "orbit-stabilizer (256 cases)",
        orbit_stabilizer.map_err(|e| e.to_string()),
    );

    let core_kernel = runner(256).run(
        &(random_group(6), proptest::collection::vec(0u128..u128::MAX, 1..=3)),
        |(g, picks)| {
            let elements: Vec<Perm> = picks
                .iter()
                .map(|k| g.iter_elements().nth((k % g.order()) as usize).expect("in range"))
                .collect();
            let h = PermGroup::from_generators(g.degree(), elements).map_err(|e| TestCaseError::fail(e.to_string()))?;
            proptest::prop_assume!(g.order() / h.order() <= INTERNAL_MAX_DEGREE as u128);
            let fail = |e: Error| TestCaseError::fail(e.to_string());
            let (images, table) = g.coset_action_images(&h).map_err(fail)?;
            let kernel = g.kernel_of(&images, table.index).map_err(fail)?;
            let core = core(&g, &h).map_err(fail)?;
            proptest::prop_assert!(core.same_group(&kernel), "core {core} vs kernel {kernel}");
            Ok(())
        },
    );
    record(
        "core = coset-action kernel (256 cases)",
        core_kernel.map_err(|e| e.to_string()),
    );

    let engine = verifier.engine();
    let pairs = (random_spec(), random_spec()).prop_filter("total degree", |((_, a), (_, b))| a + b <= PAIR_MAX_DEGREE);
    let subadditive = runner(SUBADDITIVITY_CASES).run(&pairs, |((a, _), (b, _))| {
        let fail = |e: Error| TestCaseError::fail(e.to_string());
        let g = parse_group(&a).map_err(fail)?;
        let h = parse_group(&b).map_err(fail)?;
        let product = parse_group(&format!("{a} x {b}")).map_err(fail)?;
        proptest::prop_assert!(product.same_group(&external_direct_product(&g, &h).map_err(fail)?));
        let (mg, mh, mp) = (
            engine.mu(&g).map_err(fail)?,
            engine.mu(&h).map_err(fail)?,
            engine.mu(&product).map_err(fail)?,
        );
        proptest::prop_assert!(mp <= mg + mh, "mu({a} x {b}) = {mp} > {mg} + {mh}");
        proptest::prop_assert!(mp >= mg.max(mh));
        Ok(())
    });
    record(
        &format!("subadditivity ({SUBADDITIVITY_CASES} spec pairs, degree <= {PAIR_MAX_DEGREE})"),
        subadditive.map_err(|e| e.to_string()),
    );

    let mut checked = 0;
    let mut l1_failures = Vec::new();
    for n in 4..=7 {
        for m in &verifier.degree_data(n)?.minimal {
            if orbits(&m.group).len() < 2 {
                continue;
            }
            let report = verifier.check_l1(&m.group)?;
            checked += 1;
            if !report.holds() {
                l1_failures.push(format!("n={n} class {}", m.class_id));
            }
        }
    }
    record(
        &format!("orbit projection clauses ({checked} intransitive groups, n = 4..7)"),
        if l1_failures.is_empty() {
            Ok(())
        } else {
            Err(format!("failed: {l1_failures:?}"))
        },
    );
    Ok(Verdict::new(passed, parts.join("; ")))
}

fn main() -> ExitCode {
    let deep = std::env::var(DEEP_ENV).is_ok_and(|v| v == "1");
    let cache = deep.then(|| {
        LatticeCache::from_env()
            .unwrap_or_else(|| LatticeCache::new(std::env::temp_dir().join("mindeg-acceptance-cache")))
    });
    if let Some(c) = &cache {
        println!(
            "deep tier enabled; lattice cache: {} (override with {CACHE_ENV})",
            c.dir().display()
        );
    }
    let verifier = Verifier::new(LatticeOptions::default(), cache);
    let engine = MuEngine::default();
    let mut suite = Suite { failures: 0 };

    suite.run("1 H7", LIMIT_H7, || criterion_h7(&engine));
    suite.run("2 K8 and L8", LIMIT_K8_L8, || criterion_k8_l8(&engine));
    suite.run("3 additivity sweeps n=4..7", LIMIT_SWEEPS, || {
        criterion_sweeps(&verifier, &[4, 5, 6, 7])
    });
    suite.run("4 exceptional catalog", LIMIT_DEFAULT, || {
        criterion_catalog(&verifier, false)
    });
    suite.run("5 degree-10 witness", LIMIT_WITNESS10, || {
        criterion_witness10(&verifier)
    });
    suite.run("6 lattice oracle", LIMIT_DEFAULT, || criterion_oracle(ORACLE_CORPUS));
    suite.run("7 mu optimality", LIMIT_DEFAULT, criterion_optimality);
    suite.run("8 diagonal and subdirect lemmas", LIMIT_LEMMAS, criterion_lemmas);
    suite.run("9 centralizer theorems n<=7", LIMIT_DEFAULT, || {
        criterion_centralizers(&verifier, &[2, 3, 4, 5, 6, 7])
    });
    suite.run("10 property suites", LIMIT_DEFAULT, || criterion_properties(&verifier));

    if deep {
        suite.run("3 additivity sweeps n=8,9 (deep)", LIMIT_DEEP, || {
            criterion_sweeps(&verifier, &[8, 9])
        });
        suite.run("4 exceptional catalog n=8 (deep)", LIMIT_DEEP, || {
            criterion_catalog(&verifier, true)
        });
        suite.run("6 lattice oracle, large ambients (deep)", LIMIT_DEEP, || {
            criterion_oracle(ORACLE_DEEP_CORPUS)
        });
        suite.run("9 centralizer theorems n=8,9 (deep)", LIMIT_DEEP, || {
            criterion_centralizers(&verifier, &[8, 9])
        });
    } else {
        println!("SKIP deep tier (degrees 8 and 9): set {DEEP_ENV}=1");
    }

    if suite.failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criterion line(s) failed", suite.failures);
        ExitCode::FAILURE
    }
}
