//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use charsub::algebra::{Flavor, StructureAlgebra};
use charsub::certificate::{CharMode, CharSubspaceCertificate, ClassTag, Route};
use charsub::corpus;
use charsub::engine::char_subspace::{find_characteristic_subspace, CharSubspaceRequest, PropertyP};
use charsub::engine::series::{
    all_ideals, build_un, check_series, class_laws, find_characteristic_series, LevelRequirement, SeriesRequest,
    SeriesSpec, SeriesWitness,
};
use charsub::lattice::f_iterate;
use charsub::morphisms::{validate_morphism, MorphismKind};
use charsub::predicates::{
    check_declared_laws, extend_c, extend_d, pred_a, pred_b, rank_parity_fixture, zero_predicate, AlgebraClass,
    LawCheckConfig, LawDomain, Predicate,
};
use charsub::subspace::{Row, Subspace};
use charsub::verify::{verify_char_certificate, verify_series_certificate, VerifyLevel};
use charsub::words::{enumerate_monomials, eval_span, MultilinearElement};
use charsub::Error;
use common::{corpus_cases, gf, random_instance, random_subspace, Instance};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Criterion {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
}

impl Criterion {
    fn new(id: &'static str, title: &'static str, passed: bool, detail: String) -> Self {
        Criterion {
            id,
            title,
            passed,
            detail,
        }
    }
}

/// An instance kept for the verifier.
struct Solved {
    algebra: StructureAlgebra,
    n: Subspace,
    matrices: Vec<Vec<Row>>,
    certificate: CharSubspaceCertificate,
}

fn random_n<R: Rng>(inst: &Instance, rng: &mut R) -> Subspace {
    let d = inst.algebra.dim();
    // codim 0 forces H = G, so keep it rare.
    let codim = if rng.gen_bool(0.1) {
        0
    } else {
        rng.gen_range(1..=d.min(2))
    };
    random_subspace(inst.algebra.field(), d, d - codim, rng)
}

fn c1(rng: &mut ChaCha8Rng, solved: &mut Vec<Solved>) -> Criterion {
    let start = Instant::now();
    let target = 200;
    let mut failures = Vec::new();
    let mut by_codim = [0usize; 3];
    let mut max_phi = 0;
    let mut nonzero = 0;
    let mut shrunk = 0;
    while solved.len() + failures.len() < target {
        let p = *[2u64, 3, 5].choose(rng).unwrap();
        let d = rng.gen_range(2..=4);
        let inst = random_instance(gf(p), d, 24, rng.gen_bool(0.5), rng);
        let n = random_n(&inst, rng);
        let t = rng.gen_range(1..=3);
        let req = CharSubspaceRequest::new(inst.algebra.clone(), n.clone(), inst.generators.clone(), t);
        match find_characteristic_subspace(&req) {
            Ok(out) => {
                let c = &out.certificate;
                if out.h.codim() as u64 > c.bound || c.codim_h != out.h.codim() {
                    failures.push(format!("codim H = {} above bound {}", out.h.codim(), c.bound));
                    continue;
                }
                by_codim[n.codim()] += 1;
                nonzero += usize::from(inst.algebra.entries().iter().any(|e| e.3 != 0));
                shrunk += usize::from(out.h.codim() > n.codim());
                max_phi = max_phi.max(c.phi_size);
                solved.push(Solved {
                    algebra: inst.algebra,
                    n,
                    matrices: inst.matrices,
                    certificate: out.certificate,
                });
            }
            Err(e) => failures.push(format!("GF({p})^{d}, t = {t}, N = {n}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    let passed = failures.is_empty() && elapsed < Duration::from_secs(120);
    let mut detail = format!(
        "{} instances (codim N 0/1/2: {}/{}/{}, {nonzero} with nonzero product, {shrunk} with codim H > codim N), max |Φ| {max_phi}, {:.1}s",
        solved.len() + failures.len(),
        by_codim[0],
        by_codim[1],
        by_codim[2],
        elapsed.as_secs_f64()
    );
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; first failure: {f}"));
    }
    Criterion::new(
        "C1",
        "randomized characteristic subspaces meet the codimension bound",
        passed,
        detail,
    )
}

fn c2(solved: &[Solved]) -> Criterion {
    let mut bad = Vec::new();
    for s in solved {
        let r = verify_char_certificate(&s.algebra, s.n.basis(), &s.matrices, &s.certificate);
        if !r.passed() {
            bad.push(r.to_string());
        }
    }
    // f(x) = x(x + 1): f(2) = 6, f(6) = 42.
    let arithmetic = f_iterate(1, 2).ok() == Some(6) && f_iterate(2, 2).ok() == Some(42);
    let bounds_seen: Vec<u64> = [2usize, 3]
        .iter()
        .filter_map(|&t| {
            solved
                .iter()
                .find(|s| s.certificate.codim_n == 2 && s.certificate.t == t)
                .map(|s| s.certificate.bound)
        })
        .collect();
    let mut tampered = solved.first().map(|s| (s, s.certificate.clone()));
    let tamper_caught = match tampered.as_mut() {
        Some((s, c)) => {
            c.bound += 1;
            !verify_char_certificate(&s.algebra, s.n.basis(), &s.matrices, c).passed()
        }
        None => false,
    };
    let passed = bad.is_empty() && arithmetic && tamper_caught;
    let mut detail = format!(
        "{} / {} certificates re-verified, f^1(2) = 6 and f^2(2) = 42: {arithmetic}, bounds for codim 2 at t = 2, 3: {bounds_seen:?}, tampered bound rejected: {tamper_caught}",
        solved.len() - bad.len(),
        solved.len()
    );
    if let Some(b) = bad.first() {
        detail.push_str(&format!("; first discrepancy: {b}"));
    }
    Criterion::new("C2", "independent verifier accepts every certificate", passed, detail)
}

fn c3(rng: &mut ChaCha8Rng) -> Criterion {
    let f2 = gf(2);
    let mut failures = Vec::new();
    let mut runs = 0;

    let tri2 = corpus::upper_triangular_2();
    let gens = vec![validate_morphism(&tri2, &corpus::tri2_conjugation(), MorphismKind::Automorphism).unwrap()];
    let n = Subspace::span(f2, 3, &[vec![1, 0, 0]]).unwrap();
    let comm = MultilinearElement::commutator(f2);
    let req = CharSubspaceRequest::new(tri2.clone(), n.clone(), gens, 2).with_target(CharMode::Identity, "comm", comm);
    let worked = match find_characteristic_subspace(&req) {
        Ok(out) => {
            let c = &out.certificate;
            let v = verify_char_certificate(&tri2, n.basis(), &[corpus::tri2_conjugation()], c).passed();
            if !(out.h.is_zero() && c.codim_h == 3 && c.bound == 6 && v) {
                failures.push("worked example: expected H = 0, codim 3, bound 6".to_string());
            }
            format!("H = {}, codim {} <= {}, verified {v}", out.h, c.codim_h, c.bound)
        }
        Err(e) => {
            failures.push(format!("worked example: {e}"));
            format!("error {e}")
        }
    };
    runs += 1;

    let mut attempts = 0;
    while runs < 60 && attempts < 5_000 {
        attempts += 1;
        let p = *[2u64, 3, 5].choose(rng).unwrap();
        let f = gf(p);
        let d = rng.gen_range(2..=4);
        let inst = random_instance(f, d, 24, rng.gen_bool(0.5), rng);
        let n = random_n(&inst, rng);
        let words = [
            ("comm", MultilinearElement::commutator(f)),
            ("prod", MultilinearElement::product(f)),
            (
                "assoc",
                charsub::words::parse_word("(- (* (* x1 x2) x3) (* x1 (* x2 x3)))", f).unwrap(),
            ),
        ];
        let (name, w) = words.choose(rng).unwrap();
        if !eval_span(w, &inst.algebra, &vec![n.clone(); w.degree()])
            .unwrap()
            .is_zero()
        {
            continue;
        }
        runs += 1;
        let t = rng.gen_range(w.degree()..=3);
        let req = CharSubspaceRequest::new(inst.algebra.clone(), n.clone(), inst.generators.clone(), t).with_target(
            CharMode::Identity,
            *name,
            w.clone(),
        );
        match find_characteristic_subspace(&req) {
            Ok(out) => {
                let lhs = eval_span(w, &inst.algebra, &vec![out.h.clone(); w.degree()]).unwrap();
                let v = verify_char_certificate(&inst.algebra, n.basis(), &inst.matrices, &out.certificate);
                if !lhs.is_zero() || out.h.codim() as u64 > out.certificate.bound || !v.passed() {
                    failures.push(format!(
                        "{name} on GF({p})^{d}, N = {n}: H = {}, verified {}",
                        out.h,
                        v.passed()
                    ));
                }
            }
            Err(e) => failures.push(format!("{name} on GF({p})^{d}, N = {n}: {e}")),
        }
    }
    let passed = failures.is_empty() && runs >= 50;
    let mut detail = format!("{runs} instances; worked example: {worked}");
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; first failure: {f}"));
    }
    Criterion::new("C3", "identity mode: the vanishing word vanishes on H", passed, detail)
}

/// Every vector of the span, as a bitmask over the `2^d` vectors of GF(2)^d.
fn vector_set(s: &Subspace) -> u32 {
    let basis: Vec<u32> = s
        .basis()
        .iter()
        .map(|r| r.iter().enumerate().map(|(i, &x)| (x as u32) << i).sum())
        .collect();
    let mut set = 0u32;
    for mask in 0u32..(1 << basis.len()) {
        let v = basis
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(0, |acc, (_, &b)| acc ^ b);
        set |= 1 << v;
    }
    set
}

fn c4(rng: &mut ChaCha8Rng) -> Criterion {
    let f = gf(2);
    let mut subspaces = 0;
    let mut pairs = 0;
    let mut bad = Vec::new();
    for d in 1..=4 {
        let family: Vec<Subspace> = (0..300)
            .map(|_| {
                let rank = rng.gen_range(0..=d);
                random_subspace(f, d, rank, rng)
            })
            .collect();
        subspaces += family.len();
        let sets: Vec<u32> = family.iter().map(vector_set).collect();
        for (a, &sa) in family.iter().zip(&sets) {
            if sa.count_ones() != 1 << a.rank() {
                bad.push(format!("rank of {a}"));
            }
            for (b, &sb) in family.iter().zip(&sets) {
                pairs += 1;
                let mut sum = 0u32;
                for x in (0..16).filter(|x| sa >> x & 1 == 1) {
                    for y in (0..16).filter(|y| sb >> y & 1 == 1) {
                        sum |= 1 << (x ^ y);
                    }
                }
                let ok = vector_set(&a.sum(b).unwrap()) == sum
                    && vector_set(&a.intersect(b).unwrap()) == sa & sb
                    && a.leq(b).unwrap() == (sa & !sb == 0);
                if !ok && bad.len() < 3 {
                    bad.push(format!("{a} vs {b}"));
                }
            }
        }
    }
    let passed = bad.is_empty() && subspaces >= 1000;
    let detail = format!(
        "{subspaces} subspaces of GF(2)^d, d <= 4, {pairs} pairs; sum, intersection and order match vector sets{}",
        bad.first().map(|b| format!("; mismatch {b}")).unwrap_or_default()
    );
    Criterion::new("C4", "linear algebra agrees with a vector-set oracle", passed, detail)
}

fn c5(rng: &mut ChaCha8Rng) -> Criterion {
    let mut checks = 0usize;
    let mut bad = Vec::new();
    let mut instances: Vec<(String, Vec<Subspace>, Vec<charsub::morphisms::Morphism>)> = corpus_cases()
        .iter()
        .map(|c| (c.name.to_string(), c.lattice(64), c.phi().elements().to_vec()))
        .collect();
    for k in 0..20 {
        let p = *[2u64, 3, 5].choose(rng).unwrap();
        let inst = random_instance(gf(p), rng.gen_range(2..=4), 24, rng.gen_bool(0.5), rng);
        let n = random_n(&inst, rng);
        let mut seed = vec![inst.algebra.zero_subspace(), inst.algebra.full()];
        seed.extend(inst.phi.orbit(&n).unwrap());
        let lattice = charsub::lattice::sublattice_closure(&seed, 64).unwrap();
        instances.push((
            format!("random {k}"),
            lattice.elements().to_vec(),
            inst.phi.elements().to_vec(),
        ));
    }
    for (name, elements, phi) in &instances {
        for m in phi {
            let img: Vec<Subspace> = elements.iter().map(|a| m.apply(a).unwrap()).collect();
            for (i, a) in elements.iter().enumerate() {
                for (j, b) in elements.iter().enumerate() {
                    checks += 1;
                    let sum_ok = m.apply(&a.sum(b).unwrap()).unwrap() == img[i].sum(&img[j]).unwrap();
                    let meet_ok = m.apply(&a.intersect(b).unwrap()).unwrap() == img[i].intersect(&img[j]).unwrap();
                    if !(sum_ok && meet_ok) && bad.len() < 3 {
                        bad.push(format!("{name}: {a}, {b}"));
                    }
                }
            }
        }
    }
    let detail = format!(
        "{} closures (size <= 64), {checks} pair checks over every element of Φ{}",
        instances.len(),
        bad.first().map(|b| format!("; failure {b}")).unwrap_or_default()
    );
    Criterion::new(
        "C5",
        "automorphisms act as lattice endomorphisms",
        bad.is_empty(),
        detail,
    )
}

fn c6() -> Criterion {
    let config = LawCheckConfig::default();
    let mut reports = 0;
    let mut failures = Vec::new();
    let mut run = |p: &Predicate, domain: &LawDomain, case: &str| {
        for r in check_declared_laws(p, domain, &config).unwrap() {
            reports += 1;
            if !r.passed() {
                failures.push(format!("{case}: {r}"));
            }
        }
    };
    let nil = || Arc::new(AlgebraClass::Nilpotent);
    let mut rank_parity = None;
    for case in corpus_cases() {
        let alg = &case.algebra;
        let phi = case.phi();
        let elements = case.lattice(64);
        let ideals: Vec<Subspace> = elements.iter().filter(|s| alg.is_ideal(s).unwrap()).cloned().collect();
        let domain = LawDomain::new(&elements, Some(&phi)).unwrap();
        let ideal_domain = LawDomain::new(&ideals, Some(&phi)).unwrap();
        for w in &case.words {
            run(&pred_a(w, alg).flatten(), &domain, case.name);
        }
        run(&pred_b(nil(), alg).flatten(), &ideal_domain, case.name);
        let u1 = extend_d(nil(), &zero_predicate(), &ideals, alg).unwrap();
        run(&u1, &ideal_domain, case.name);
        for w in &case.words {
            run(&extend_c(w, &u1, &ideals, alg).unwrap(), &ideal_domain, case.name);
        }
        if case.name == "tri2" {
            let words: Vec<(String, MultilinearElement)> = Vec::new();
            let prop = PropertyP::new(alg, &case.seeds[0], &phi, 2, &words).unwrap();
            run(&prop.as_predicate(), &domain, case.name);
            let spec = SeriesSpec::new(vec![
                LevelRequirement::Class(ClassTag::Nilpotent),
                LevelRequirement::Identity {
                    name: "comm".into(),
                    word: MultilinearElement::commutator(alg.field()),
                },
            ])
            .unwrap();
            run(&build_un(alg, &spec, &ideals).unwrap(), &ideal_domain, case.name);
        }
        if case.name == "zero3" {
            let reports = check_declared_laws(&rank_parity_fixture(), &domain, &config).unwrap();
            rank_parity = reports.into_iter().find(|r| !r.passed());
        }
    }
    let fixture_ok = rank_parity.is_some();
    let passed = failures.is_empty() && fixture_ok;
    let detail = format!(
        "{reports} law reports on 8 corpus closures; rank-parity fixture {}{}",
        rank_parity
            .map(|r| format!("fails as intended: {r}"))
            .unwrap_or_else(|| "unexpectedly passes".into()),
        failures.first().map(|f| format!("; failure {f}")).unwrap_or_default()
    );
    Criterion::new("C6", "predicate law suite", passed, detail)
}

/// `[a, b] = ab - ba` on the same basis, as a Lie algebra.
fn commutator_algebra(a: &StructureAlgebra) -> StructureAlgebra {
    let f = a.field();
    StructureAlgebra::from_products(f, a.dim(), Flavor::Lie, |i, j| {
        let mut v = a.basis_product(i, j).to_vec();
        f.add_scaled(&mut v, a.basis_product(j, i), f.neg(1));
        v
    })
    .unwrap()
}

fn c7(rng: &mut ChaCha8Rng) -> Criterion {
    let associative = vec![
        corpus::dual_numbers(),
        corpus::upper_triangular_2(),
        corpus::strictly_upper_3(),
        corpus::strictly_upper(3, 3),
        corpus::upper_triangular(2, 3),
        corpus::strictly_upper(2, 4),
    ];
    let lie = vec![
        corpus::heisenberg_gf5(),
        corpus::sl2_gf5(),
        corpus::borel_gf5(),
        commutator_algebra(&corpus::upper_triangular(3, 2)),
        commutator_algebra(&corpus::strictly_upper(2, 4)),
    ];
    let mut parts = Vec::new();
    let mut passed = true;
    for (label, family) in [("associative", &associative), ("Lie", &lie)] {
        for a in family {
            assert!(
                a.validate_flavor().passed(),
                "{label} corpus member violates its flavor"
            );
        }
        let r = class_laws(&AlgebraClass::Nilpotent, family, 100, rng).unwrap();
        passed &= r.passed() && r.pairs >= 100;
        let counts: Vec<String> = r
            .laws
            .iter()
            .map(|t| format!("{:?} {}/{}", t.law, t.checked - t.violations.len(), t.checked))
            .collect();
        parts.push(format!(
            "{label}: {} algebras, {} pairs, {}{}",
            r.algebras,
            r.pairs,
            counts.join(", "),
            r.laws
                .iter()
                .find_map(|t| t.violations.first())
                .map(|v| format!(", violation {v}"))
                .unwrap_or_default()
        ));
    }
    Criterion::new(
        "C7",
        "nilpotent class satisfies R1, R2, F1, F2",
        passed,
        parts.join("; "),
    )
}

fn series_levels(spec: &SeriesSpec) -> Vec<VerifyLevel> {
    spec.levels()
        .iter()
        .map(|l| match l {
            LevelRequirement::Identity { word, .. } => VerifyLevel::Identity(word.clone()),
            LevelRequirement::Class(tag) => VerifyLevel::Class(*tag),
        })
        .collect()
}

/// Runs both routes and re-verifies; returns `(codim N, codim M)`.
fn solve_series(
    alg: &StructureAlgebra,
    spec: &SeriesSpec,
    levels: Vec<Subspace>,
    matrices: &[Vec<Row>],
) -> Result<(usize, usize), String> {
    let generators = matrices
        .iter()
        .map(|m| validate_morphism(alg, m, MorphismKind::Automorphism))
        .collect::<Result<Vec<_>, Error>>()
        .map_err(|e| e.to_string())?;
    let input: Vec<Vec<Row>> = levels.iter().map(|s| s.basis().to_vec()).collect();
    let witness = SeriesWitness::from_levels(levels).map_err(|e| e.to_string())?;
    let req = SeriesRequest::new(alg.clone(), spec.clone(), witness, generators).with_route(Route::Both);
    let out = find_characteristic_series(&req).map_err(|e| e.to_string())?;
    let c = &out.certificate;
    if c.direct_codim != c.predicate_codim || c.direct_codim.is_none() {
        return Err(format!(
            "routes differ: {:?} vs {:?}",
            c.direct_codim, c.predicate_codim
        ));
    }
    let report = verify_series_certificate(alg, matrices, &series_levels(spec), &input, c);
    if !report.passed() {
        return Err(report.to_string());
    }
    Ok((c.codim_n, c.codim_m))
}

fn c8(rng: &mut ChaCha8Rng) -> Criterion {
    let f2 = gf(2);
    let mut failures = Vec::new();
    let spec_for = |name: &str, w: MultilinearElement| {
        SeriesSpec::new(vec![
            LevelRequirement::Class(ClassTag::Nilpotent),
            LevelRequirement::Identity {
                name: name.into(),
                word: w,
            },
        ])
        .unwrap()
    };

    let tri2 = corpus::upper_triangular_2();
    let spec = spec_for("comm", MultilinearElement::commutator(f2));
    let a1 = Subspace::span(f2, 3, &[vec![0, 0, 1]]).unwrap();
    let worked = solve_series(&tri2, &spec, vec![a1, tri2.full()], &[corpus::tri2_conjugation()]);
    match &worked {
        Ok((0, 0)) => {}
        other => failures.push(format!("worked example: {other:?}")),
    }

    let mut random = 0;
    let mut nontrivial = 0;
    let mut attempts = 0;
    while random < 24 && attempts < 2_000 {
        attempts += 1;
        let p = *[2u64, 3, 5].choose(rng).unwrap();
        let f = gf(p);
        let d = rng.gen_range(2..=4);
        let inst = random_instance(f, d, 24, true, rng);
        let alg = &inst.algebra;
        let (name, w) = if rng.gen_bool(0.5) {
            ("comm", MultilinearElement::commutator(f))
        } else {
            ("prod", MultilinearElement::product(f))
        };
        let spec = spec_for(name, w);
        let ideals = all_ideals(alg).unwrap();
        let mut valid = Vec::new();
        for a in &ideals {
            for n in ideals.iter().filter(|n| !n.is_zero() && a.leq(n).unwrap()) {
                let wit = SeriesWitness::from_levels(vec![a.clone(), n.clone()]).unwrap();
                if check_series(alg, n, &wit, &spec).unwrap().passed() {
                    valid.push((a.clone(), n.clone()));
                }
            }
        }
        let strict: Vec<_> = valid.iter().filter(|(a, n)| !a.is_zero() && a != n).cloned().collect();
        let Some((a, n)) = strict.choose(rng).or_else(|| valid.choose(rng)).cloned() else {
            continue;
        };
        random += 1;
        if !a.is_zero() && a != n {
            nontrivial += 1;
        }
        if let Err(e) = solve_series(alg, &spec, vec![a.clone(), n.clone()], &inst.matrices) {
            failures.push(format!("GF({p})^{d}, A1 = {a}, N = {n}: {e}"));
        }
    }
    let monomials = enumerate_monomials(4).map(|m| m.len()).unwrap_or(0);
    let passed = failures.is_empty() && random >= 20 && monomials == 120;
    let detail = format!(
        "worked example M = G: {}; {random} random specs ({nontrivial} with 0 < A1 < N), routes agree and verify; degree-4 monomials: {monomials}{}",
        worked.is_ok(),
        failures.first().map(|f| format!("; failure {f}")).unwrap_or_default()
    );
    Criterion::new("C8", "characteristic series, both routes", passed, detail)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut solved = Vec::new();
    let mut results = vec![c1(&mut rng, &mut solved)];
    results.push(c2(&solved));
    results.push(c3(&mut rng));
    results.push(c4(&mut rng));
    results.push(c5(&mut rng));
    results.push(c6());
    results.push(c7(&mut rng));
    results.push(c8(&mut rng));

    let mut failed = 0;
    for c in &results {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!("{status} {} {}: {}", c.id, c.title, c.detail);
        failed += usize::from(!c.passed);
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
