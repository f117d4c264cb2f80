//! Characteristic ideal series.
//!
//! Given an ideal `N` with a series `0 = A_0 ≤ … ≤ A_n = N` of ideals whose
//! factors satisfy per-level requirements, find a Φ-invariant ideal `M` of
//! least codimension with a series of the same shape. Two routes are offered:
//! a direct backtracking search over invariant chains, and a filter by the
//! predicate `U_n` assembled from the extension and composition constructions.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::algebra::StructureAlgebra;
use crate::certificate::{ClassTag, LevelDetail, LevelEvidence, LevelSpec, Route, SeriesCertificate};
use crate::error::{Error, Result};
use crate::lattice::{invariant_elements, sublattice_closure, DEFAULT_CLOSURE_CAP};
use crate::morphisms::{closure, Morphism, MorphismSet, DEFAULT_MORPHISM_CAP};
use crate::predicates::{extend_c, extend_d, zero_predicate, AlgebraClass, ClassTest, Predicate};
use crate::subspace::{all_subspaces, Subspace};
use crate::words::{eval_span, MultilinearElement};

use super::{basis, candidate_order, invariance_witnesses, matrices, nonvanishing_witness, require_automorphisms};

impl ClassTag {
    pub fn class(self) -> AlgebraClass {
        match self {
            ClassTag::Nilpotent => AlgebraClass::Nilpotent,
            ClassTag::Abelian => AlgebraClass::Abelian,
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassTag::Nilpotent => "nilpotent",
            ClassTag::Abelian => "abelian",
        })
    }
}

/// What the factor `B_i / B_{i-1}` must satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelRequirement {
    Identity { name: String, word: MultilinearElement },
    Class(ClassTag),
}

impl LevelRequirement {
    /// Contribution to the arity of `U_n`.
    pub fn degree(&self) -> usize {
        match self {
            LevelRequirement::Identity { word, .. } => word.degree(),
            LevelRequirement::Class(_) => 1,
        }
    }

    pub fn spec(&self) -> LevelSpec {
        match self {
            LevelRequirement::Identity { word, .. } => LevelSpec::Identity { word: word.to_string() },
            LevelRequirement::Class(tag) => LevelSpec::Class { tag: *tag },
        }
    }
}

impl fmt::Display for LevelRequirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelRequirement::Identity { name, word } => write!(f, "identity {name} = {word}"),
            LevelRequirement::Class(tag) => write!(f, "class {tag}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesSpec {
    levels: Vec<LevelRequirement>,
}

impl SeriesSpec {
    pub fn new(levels: Vec<LevelRequirement>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidRequest("a series needs at least one level".into()));
        }
        Ok(SeriesSpec { levels })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[LevelRequirement] {
        &self.levels
    }

    /// `Π t_i` with class levels counting 1.
    pub fn arity(&self) -> usize {
        self.levels.iter().map(LevelRequirement::degree).product()
    }
}

/// A chain `0 = B_0 ≤ B_1 ≤ … ≤ B_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesWitness {
    pub chain: Vec<Subspace>,
}

impl SeriesWitness {
    /// Prepends `B_0 = 0` to the given `B_1, …, B_n`.
    pub fn from_levels(levels: Vec<Subspace>) -> Result<Self> {
        let first = levels
            .first()
            .ok_or_else(|| Error::InvalidRequest("empty series witness".into()))?;
        let mut chain = vec![Subspace::zero(first.field(), first.ambient_dim())];
        chain.extend(levels);
        Ok(SeriesWitness { chain })
    }

    pub fn top(&self) -> &Subspace {
        self.chain.last().expect("chain is nonempty")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesFailure {
    /// 0 for shape problems, otherwise the 1-based level.
    pub level: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesReport {
    pub evidence: Vec<LevelEvidence>,
    pub failure: Option<SeriesFailure>,
}

impl SeriesReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    fn fail(evidence: Vec<LevelEvidence>, level: usize, reason: String) -> Self {
        SeriesReport {
            evidence,
            failure: Some(SeriesFailure { level, reason }),
        }
    }
}

/// Checks the factor `top / below` against `req` inside `G / below`.
///
/// `Ok(Err(reason))` means the requirement fails; `below` must be an ideal.
pub fn check_level(
    alg: &StructureAlgebra,
    req: &LevelRequirement,
    below: &Subspace,
    top: &Subspace,
) -> Result<std::result::Result<LevelDetail, String>> {
    let q = alg.quotient(below)?;
    let bar = q.project_subspace(top)?;
    let quotient = q.quotient();
    Ok(match req {
        LevelRequirement::Identity { name, word } => {
            let image = eval_span(word, quotient, &vec![bar.clone(); word.degree()])?;
            if image.is_zero() {
                Ok(LevelDetail::IdentityVanishes {
                    word: word.to_string(),
                    span_dim: 0,
                })
            } else {
                let witness = nonvanishing_witness(quotient, word, &bar).unwrap_or_default();
                Err(format!(
                    "identity {name} spans dimension {} in the quotient: {witness}",
                    image.rank()
                ))
            }
        }
        LevelRequirement::Class(ClassTag::Nilpotent) => match quotient.nilpotency_index(&bar)? {
            Some(index) => Ok(LevelDetail::Nilpotent { index }),
            None => Err("quotient is not nilpotent".into()),
        },
        LevelRequirement::Class(ClassTag::Abelian) => {
            if AlgebraClass::Abelian.contains(quotient, &bar)? {
                Ok(LevelDetail::Abelian)
            } else {
                Err("quotient is not abelian".into())
            }
        }
    })
}

/// Verifies that `witness` is a series of ideals ending at `n` whose factors meet `spec`.
pub fn check_series(
    alg: &StructureAlgebra,
    n: &Subspace,
    witness: &SeriesWitness,
    spec: &SeriesSpec,
) -> Result<SeriesReport> {
    let chain = &witness.chain;
    let mut evidence = Vec::new();
    if chain.len() != spec.len() + 1 {
        return Ok(SeriesReport::fail(
            evidence,
            0,
            format!("chain has {} terms, expected {}", chain.len(), spec.len() + 1),
        ));
    }
    for b in chain {
        b.check_compatible(n)?;
    }
    if !chain[0].is_zero() {
        return Ok(SeriesReport::fail(evidence, 0, "B_0 is not zero".into()));
    }
    if witness.top() != n {
        return Ok(SeriesReport::fail(
            evidence,
            0,
            format!("top {} differs from N = {n}", witness.top()),
        ));
    }
    for (i, b) in chain.iter().enumerate() {
        if !alg.is_ideal(b)? {
            return Ok(SeriesReport::fail(evidence, i, format!("B_{i} = {b} is not an ideal")));
        }
    }
    for (i, req) in spec.levels().iter().enumerate() {
        let (below, top) = (&chain[i], &chain[i + 1]);
        if !below.leq(top)? {
            return Ok(SeriesReport::fail(
                evidence,
                i + 1,
                format!("B_{i} is not contained in B_{}", i + 1),
            ));
        }
        match check_level(alg, req, below, top)? {
            Ok(detail) => evidence.push(LevelEvidence {
                level: i + 1,
                quotient_dim: top.rank() - below.rank(),
                detail,
            }),
            Err(reason) => return Ok(SeriesReport::fail(evidence, i + 1, format!("{req}: {reason}"))),
        }
    }
    Ok(SeriesReport {
        evidence,
        failure: None,
    })
}

/// `U_n`, built as `U_0(M) ⇔ M = 0` and `U_i = C[w_i](U_{i-1})` or `D[K_i](U_{i-1})` over `pool`.
pub fn build_un(alg: &StructureAlgebra, spec: &SeriesSpec, pool: &[Subspace]) -> Result<Predicate> {
    let mut u = zero_predicate();
    for level in spec.levels() {
        u = match level {
            LevelRequirement::Identity { word, .. } => extend_c(word, &u, pool, alg)?,
            LevelRequirement::Class(tag) => extend_d(Arc::new(tag.class()), &u, pool, alg)?,
        };
    }
    Ok(u)
}

#[derive(Clone, Debug)]
pub struct SeriesRequest {
    pub algebra: StructureAlgebra,
    pub spec: SeriesSpec,
    /// The input series; its top is `N`.
    pub input: SeriesWitness,
    pub generators: Vec<Morphism>,
    pub route: Route,
    pub closure_cap: usize,
    pub morphism_cap: usize,
}

impl SeriesRequest {
    pub fn new(algebra: StructureAlgebra, spec: SeriesSpec, input: SeriesWitness, generators: Vec<Morphism>) -> Self {
        SeriesRequest {
            algebra,
            spec,
            input,
            generators,
            route: Route::Both,
            closure_cap: DEFAULT_CLOSURE_CAP,
            morphism_cap: DEFAULT_MORPHISM_CAP,
        }
    }

    pub fn with_route(mut self, route: Route) -> Self {
        self.route = route;
        self
    }
}

#[derive(Clone, Debug)]
pub struct SeriesOutcome {
    pub witness: SeriesWitness,
    pub phi: MorphismSet,
    pub certificate: SeriesCertificate,
}

/// Backtracking search for invariant chains below a fixed top.
struct ChainSearch<'a> {
    alg: &'a StructureAlgebra,
    spec: &'a SeriesSpec,
    /// Invariant ideals, smallest first.
    candidates: Vec<Subspace>,
    level_memo: HashMap<(usize, usize, usize), bool>,
    dead: HashSet<(usize, usize)>,
}

impl<'a> ChainSearch<'a> {
    fn new(alg: &'a StructureAlgebra, spec: &'a SeriesSpec, invariant: &[Subspace]) -> Self {
        let mut candidates = invariant.to_vec();
        candidates.sort_by(|a, b| a.rank().cmp(&b.rank()).then_with(|| a.basis().cmp(b.basis())));
        ChainSearch {
            alg,
            spec,
            candidates,
            level_memo: HashMap::new(),
            dead: HashSet::new(),
        }
    }

    fn level_ok(&mut self, level: usize, below: usize, top: usize) -> Result<bool> {
        if let Some(&v) = self.level_memo.get(&(level, below, top)) {
            return Ok(v);
        }
        let req = &self.spec.levels()[level - 1];
        let v = check_level(self.alg, req, &self.candidates[below], &self.candidates[top])?.is_ok();
        self.level_memo.insert((level, below, top), v);
        Ok(v)
    }

    /// Chain `B_0, …, B_level = candidates[top]` as candidate indices, trying small `B_{level-1}` first.
    fn below(&mut self, level: usize, top: usize) -> Result<Option<Vec<usize>>> {
        if level == 0 {
            return Ok(self.candidates[top].is_zero().then(|| vec![top]));
        }
        if self.dead.contains(&(level, top)) {
            return Ok(None);
        }
        for x in 0..self.candidates.len() {
            if !self.candidates[x].leq(&self.candidates[top])? || !self.level_ok(level, x, top)? {
                continue;
            }
            if let Some(mut chain) = self.below(level - 1, x)? {
                chain.push(top);
                return Ok(Some(chain));
            }
        }
        self.dead.insert((level, top));
        Ok(None)
    }

    fn chain_for(&mut self, top: &Subspace) -> Result<Option<Vec<Subspace>>> {
        let Some(t) = self.candidates.iter().position(|c| c == top) else {
            return Ok(None);
        };
        let n = self.spec.len();
        Ok(self
            .below(n, t)?
            .map(|idx| idx.into_iter().map(|i| self.candidates[i].clone()).collect()))
    }
}

pub fn find_characteristic_series(req: &SeriesRequest) -> Result<SeriesOutcome> {
    let alg = &req.algebra;
    let f = alg.field();
    let d = alg.dim();
    require_automorphisms(&req.generators)?;
    let n = req.input.top().clone();
    n.check_compatible(&alg.full())?;
    let report = check_series(alg, &n, &req.input, &req.spec)?;
    if let Some(fail) = &report.failure {
        return Err(Error::Hypothesis(format!(
            "input series fails at level {}: {}",
            fail.level, fail.reason
        )));
    }

    let phi = closure(f, d, &req.generators, req.morphism_cap)?;
    let mut seed = vec![alg.zero_subspace()];
    for a in &req.input.chain[1..] {
        seed.extend(phi.orbit(a)?);
    }
    let lattice = sublattice_closure(&seed, req.closure_cap)?;
    if !lattice.is_complete() {
        return Err(Error::ClosureCap {
            cap: req.closure_cap,
            reached: lattice.len() + 1,
        });
    }
    let pool = lattice.elements().to_vec();
    for x in &pool {
        if !alg.is_ideal(x)? {
            return Err(Error::TheoremViolation(format!(
                "closure element {x} is not an ideal although the seed consists of ideals"
            )));
        }
    }
    let mut invariant = invariant_elements(&lattice, &phi)?;
    invariant.sort_by(candidate_order);
    let mut search = ChainSearch::new(alg, &req.spec, &invariant);

    let direct = if matches!(req.route, Route::Direct | Route::Both) {
        let mut found = None;
        for m in &invariant {
            if let Some(chain) = search.chain_for(m)? {
                found = Some(chain);
                break;
            }
        }
        let Some(chain) = found else {
            return Err(Error::TheoremViolation(format!(
                "no invariant chain in the complete closure (size {}, {} invariant)",
                lattice.len(),
                invariant.len()
            )));
        };
        Some(chain)
    } else {
        None
    };

    let predicate_m = if matches!(req.route, Route::Predicate | Route::Both) {
        let un = build_un(alg, &req.spec, &pool)?;
        let mut found = None;
        for m in &invariant {
            if un.eval(&vec![m.clone(); un.arity()])? {
                found = Some(m.clone());
                break;
            }
        }
        let Some(m) = found else {
            return Err(Error::TheoremViolation(format!(
                "U_{} holds at no invariant element of the complete closure (size {})",
                req.spec.len(),
                lattice.len()
            )));
        };
        Some(m)
    } else {
        None
    };

    let direct_codim = direct.as_ref().map(|c| c.last().expect("nonempty").codim());
    let predicate_codim = predicate_m.as_ref().map(Subspace::codim);
    if let (Some(a), Some(b)) = (direct_codim, predicate_codim) {
        if a != b {
            return Err(Error::RouteDisagreement(format!(
                "direct search reaches codimension {a}, the U_n filter {b}"
            )));
        }
    }
    let chain = match (direct, &predicate_m) {
        (Some(chain), _) => chain,
        (None, Some(m)) => search
            .chain_for(m)?
            .ok_or_else(|| Error::RouteDisagreement(format!("U_n accepts {m} but no invariant chain ends there")))?,
        (None, None) => unreachable!("route selects at least one search"),
    };
    let witness = SeriesWitness { chain };
    let m = witness.top().clone();
    let report = check_series(alg, &m, &witness, &req.spec)?;
    if let Some(fail) = report.failure {
        return Err(Error::TheoremViolation(format!(
            "selected chain fails at level {}: {}",
            fail.level, fail.reason
        )));
    }

    let certificate = SeriesCertificate {
        field: f.p(),
        dimension: d,
        levels: req.spec.levels().iter().map(LevelRequirement::spec).collect(),
        input_chain: req.input.chain.iter().map(basis).collect(),
        codim_n: n.codim(),
        generators: matrices(&req.generators),
        phi_size: phi.len(),
        seed_size: seed.len(),
        closure_size: lattice.len(),
        pool: pool.iter().map(basis).collect(),
        chain: witness.chain.iter().map(basis).collect(),
        codim_m: m.codim(),
        evidence: report.evidence,
        invariance: witness.chain[1..]
            .iter()
            .map(|b| invariance_witnesses(b, &req.generators))
            .collect::<Result<_>>()?,
        route: req.route,
        direct_codim,
        predicate_codim,
        predicate_arity: req.spec.arity(),
        notes: vec![
            "every B_i is invariant under Φ, which is stronger than invariance of M alone".into(),
            "existentials in U_n range over the ideal closure listed in pool".into(),
            "M has least codimension among invariant closure elements admitting such a chain".into(),
        ],
    };
    Ok(SeriesOutcome {
        witness,
        phi,
        certificate,
    })
}

/// The laws a class needs before it can serve as a series level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassLaw {
    /// Ideals of members are members.
    R1,
    /// The sum of two member ideals is a member.
    R2,
    /// Quotients of members are members.
    F1,
    /// `A/I_1`, `A/I_2` members imply `A/(I_1 ∩ I_2)` is a member.
    F2,
}

impl fmt::Display for ClassLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassLaw::R1 => "R1 (ideals of members)",
            ClassLaw::R2 => "R2 (sums of member ideals)",
            ClassLaw::F1 => "F1 (quotients of members)",
            ClassLaw::F2 => "F2 (subdirect products)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawTally {
    pub law: ClassLaw,
    pub checked: usize,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassLawReport {
    pub class: String,
    pub algebras: usize,
    /// Pairs of ideals examined for R2 and F2, exhaustive and random.
    pub pairs: usize,
    pub laws: Vec<LawTally>,
}

impl ClassLawReport {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| l.violations.is_empty())
    }

    pub fn tally(&self, law: ClassLaw) -> &LawTally {
        self.laws.iter().find(|l| l.law == law).expect("all laws tallied")
    }
}

/// All two-sided ideals of `alg`, by brute force over every subspace.
pub fn all_ideals(alg: &StructureAlgebra) -> Result<Vec<Subspace>> {
    let mut out = Vec::new();
    for s in all_subspaces(alg.field(), alg.dim()) {
        if alg.is_ideal(&s)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// The smallest ideal containing `v`.
pub fn ideal_generated(alg: &StructureAlgebra, v: &Subspace) -> Result<Subspace> {
    let full = alg.full();
    let mut cur = v.clone();
    loop {
        let next = cur
            .sum(&alg.product_span(&full, &cur)?)?
            .sum(&alg.product_span(&cur, &full)?)?;
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
}

fn random_vector<R: Rng>(alg: &StructureAlgebra, rng: &mut R) -> Vec<u64> {
    let p = alg.field().p();
    (0..alg.dim()).map(|_| rng.gen_range(0..p)).collect()
}

fn in_quotient(class: &dyn ClassTest, alg: &StructureAlgebra, i: &Subspace) -> Result<bool> {
    let q = alg.quotient(i)?;
    class.contains(q.quotient(), &q.quotient().full())
}

/// Empirical radical and formation laws for `class` over `corpus`.
///
/// R1 and F1 run over the ideals of every member ideal, taken as an algebra
/// in its own right; R2 and F2 run over all pairs of ideals of each algebra
/// plus `random_pairs` pairs of ideals generated by random vectors.
pub fn class_laws<R: Rng>(
    class: &dyn ClassTest,
    corpus: &[StructureAlgebra],
    random_pairs: usize,
    rng: &mut R,
) -> Result<ClassLawReport> {
    let mut tallies: Vec<LawTally> = [ClassLaw::R1, ClassLaw::R2, ClassLaw::F1, ClassLaw::F2]
        .into_iter()
        .map(|law| LawTally {
            law,
            checked: 0,
            violations: Vec::new(),
        })
        .collect();
    let mut pairs = 0;
    for (a_idx, alg) in corpus.iter().enumerate() {
        let ideals = all_ideals(alg)?;
        let member: Vec<bool> = ideals.iter().map(|i| class.contains(alg, i)).collect::<Result<_>>()?;
        let quotient_member: Vec<bool> = ideals
            .iter()
            .map(|i| in_quotient(class, alg, i))
            .collect::<Result<_>>()?;

        for (i, x) in ideals.iter().enumerate().filter(|(i, _)| member[*i]) {
            let sub = alg.restrict(x)?;
            for j in all_ideals(&sub)? {
                tallies[0].checked += 1;
                if !class.contains(&sub, &j)? {
                    tallies[0]
                        .violations
                        .push(format!("algebra {a_idx}: ideal {j} of member {} ", ideals[i]));
                }
                tallies[2].checked += 1;
                if !in_quotient(class, &sub, &j)? {
                    tallies[2]
                        .violations
                        .push(format!("algebra {a_idx}: member {x} modulo its ideal {j}"));
                }
            }
        }

        let mut check_pair = |x: &Subspace, y: &Subspace, mx: bool, my: bool, qx: bool, qy: bool| -> Result<()> {
            pairs += 1;
            if mx && my {
                tallies[1].checked += 1;
                let s = x.sum(y)?;
                if !class.contains(alg, &s)? {
                    tallies[1].violations.push(format!("algebra {a_idx}: {x} + {y} = {s}"));
                }
            }
            if qx && qy {
                tallies[3].checked += 1;
                let m = x.intersect(y)?;
                if !in_quotient(class, alg, &m)? {
                    tallies[3]
                        .violations
                        .push(format!("algebra {a_idx}: G/({x} ∩ {y}) = G/{m}"));
                }
            }
            Ok(())
        };
        for i in 0..ideals.len() {
            for j in i..ideals.len() {
                check_pair(
                    &ideals[i],
                    &ideals[j],
                    member[i],
                    member[j],
                    quotient_member[i],
                    quotient_member[j],
                )?;
            }
        }
        for _ in 0..random_pairs {
            let gen = |rng: &mut R| -> Result<Subspace> {
                let v = random_vector(alg, rng);
                ideal_generated(alg, &Subspace::span(alg.field(), alg.dim(), &[v])?)
            };
            let x = gen(rng)?;
            let y = gen(rng)?;
            let (mx, my) = (class.contains(alg, &x)?, class.contains(alg, &y)?);
            let (qx, qy) = (in_quotient(class, alg, &x)?, in_quotient(class, alg, &y)?);
            check_pair(&x, &y, mx, my, qx, qy)?;
        }
    }
    Ok(ClassLawReport {
        class: class.name(),
        algebras: corpus.len(),
        pairs,
        laws: tallies,
    })
}
