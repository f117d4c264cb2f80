//! Predicates on tuples of subspaces, their composition, and randomized or exhaustive law checking.
//!
//! A [`TwoLinePredicate`] takes a top tuple `(X_1, …, X_l)` and a bottom `Y`;
//! flattened, the bottom is the last slot. The shipped two-line predicates
//! are [`pred_a`] (`w(X_1, …, X_t) ⊆ Y`) and [`pred_b`] (`X/(X ∩ Y)` lies in
//! a class). [`compose`] implements
//!
//! ```text
//! (Q ∘ R)(N_1, …, N_kl) = ∃ M_1, …, M_k ∈ pool:
//!     Q(M_1, …, M_k) ∧ R_i(N_{(i-1)l+1}, …, N_{il}; M_i) for every i
//! ```
//!
//! with the existential ranging over an explicit finite pool.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Flavor, StructureAlgebra};
use crate::error::{Error, Result};
use crate::morphisms::MorphismSet;
use crate::subspace::Subspace;
use crate::words::{eval_span, MultilinearElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    Monotone,
    Multilinear,
    Comonotone,
    Colinear,
    PhiInvariant,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Law::Monotone => "monotone",
            Law::Multilinear => "multilinear",
            Law::Comonotone => "comonotone",
            Law::Colinear => "colinear",
            Law::PhiInvariant => "phi-invariant",
        })
    }
}

type Evaluator = Arc<dyn Fn(&[Subspace]) -> Result<bool> + Send + Sync>;
type TwoLineEvaluator = Arc<dyn Fn(&[Subspace], &Subspace) -> Result<bool> + Send + Sync>;

/// A deterministic predicate on `arity`-tuples of subspaces, with the laws it claims to satisfy.
#[derive(Clone)]
pub struct Predicate {
    name: String,
    arity: usize,
    slot_laws: Vec<Vec<Law>>,
    phi_invariant: bool,
    eval: Evaluator,
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Predicate")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("slot_laws", &self.slot_laws)
            .field("phi_invariant", &self.phi_invariant)
            .finish_non_exhaustive()
    }
}

impl Predicate {
    /// A predicate declaring no laws.
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        eval: impl Fn(&[Subspace]) -> Result<bool> + Send + Sync + 'static,
    ) -> Self {
        Predicate {
            name: name.into(),
            arity,
            slot_laws: vec![Vec::new(); arity],
            phi_invariant: false,
            eval: Arc::new(eval),
        }
    }

    /// Declares `laws` for every slot.
    pub fn with_laws(mut self, laws: &[Law]) -> Self {
        for slot in &mut self.slot_laws {
            slot.extend(laws.iter().copied().filter(|l| *l != Law::PhiInvariant));
        }
        self.phi_invariant |= laws.contains(&Law::PhiInvariant);
        self
    }

    pub fn with_slot_laws(mut self, slot: usize, laws: &[Law]) -> Self {
        self.slot_laws[slot].extend(laws.iter().copied().filter(|l| *l != Law::PhiInvariant));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn slot_laws(&self) -> &[Vec<Law>] {
        &self.slot_laws
    }

    pub fn declares_phi_invariance(&self) -> bool {
        self.phi_invariant
    }

    /// Declared laws as `(law, slot)`; whole-tuple laws carry no slot.
    pub fn declared(&self) -> Vec<(Law, Option<usize>)> {
        let mut out: Vec<(Law, Option<usize>)> = self
            .slot_laws
            .iter()
            .enumerate()
            .flat_map(|(i, ls)| ls.iter().map(move |l| (*l, Some(i))))
            .collect();
        if self.phi_invariant {
            out.push((Law::PhiInvariant, None));
        }
        out
    }

    pub fn eval(&self, args: &[Subspace]) -> Result<bool> {
        if args.len() != self.arity {
            return Err(Error::Arity {
                expected: self.arity,
                found: args.len(),
            });
        }
        (self.eval)(args)
    }
}

/// A predicate `R(X_1, …, X_l; Y)` with a distinguished bottom argument.
#[derive(Clone)]
pub struct TwoLinePredicate {
    name: String,
    top_arity: usize,
    eval: TwoLineEvaluator,
}

impl fmt::Debug for TwoLinePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TwoLinePredicate")
            .field("name", &self.name)
            .field("top_arity", &self.top_arity)
            .finish_non_exhaustive()
    }
}

impl TwoLinePredicate {
    pub fn new(
        name: impl Into<String>,
        top_arity: usize,
        eval: impl Fn(&[Subspace], &Subspace) -> Result<bool> + Send + Sync + 'static,
    ) -> Self {
        TwoLinePredicate {
            name: name.into(),
            top_arity,
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn top_arity(&self) -> usize {
        self.top_arity
    }

    pub fn eval(&self, top: &[Subspace], bottom: &Subspace) -> Result<bool> {
        if top.len() != self.top_arity {
            return Err(Error::Arity {
                expected: self.top_arity,
                found: top.len(),
            });
        }
        (self.eval)(top, bottom)
    }

    /// The `(l + 1)`-ary predicate with the bottom in the last slot.
    ///
    /// Declares the first line monotone and multilinear, the second line
    /// comonotone and colinear, and the whole predicate Φ-invariant.
    pub fn flatten(&self) -> Predicate {
        let l = self.top_arity;
        let eval = self.eval.clone();
        let mut p = Predicate::new(format!("{} (flattened)", self.name), l + 1, move |args| {
            eval(&args[..l], &args[l])
        });
        for i in 0..l {
            p = p.with_slot_laws(i, &[Law::Monotone, Law::Multilinear]);
        }
        p = p.with_slot_laws(l, &[Law::Comonotone, Law::Colinear]);
        p.phi_invariant = true;
        p
    }
}

/// `A(X_1, …, X_t; Y) ⇔ w(X_1, …, X_t) ⊆ Y`.
pub fn pred_a(w: &MultilinearElement, alg: &StructureAlgebra) -> TwoLinePredicate {
    let w = w.clone();
    let alg = alg.clone();
    let cache: Mutex<HashMap<Vec<Subspace>, Subspace>> = Mutex::new(HashMap::new());
    let name = format!("A[{w}]");
    TwoLinePredicate::new(name, w.degree(), move |top, bottom| {
        let cached = cache.lock().expect("cache lock").get(top).cloned();
        let image = match cached {
            Some(s) => s,
            None => {
                let s = eval_span(&w, &alg, top)?;
                cache.lock().expect("cache lock").insert(top.to_vec(), s.clone());
                s
            }
        };
        image.leq(bottom)
    })
}

/// Membership test for a class of algebras, applied to a subalgebra `v` of `alg`.
pub trait ClassTest: Send + Sync + fmt::Debug {
    fn name(&self) -> String;
    fn contains(&self, alg: &StructureAlgebra, v: &Subspace) -> Result<bool>;
}

/// The shipped classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraClass {
    Nilpotent,
    /// Commutative (`x1 x2 - x2 x1 = 0`); for Lie algebras, zero bracket (`x1 x2 = 0`).
    Abelian,
    SatisfiesIdentity(MultilinearElement),
}

impl ClassTest for AlgebraClass {
    fn name(&self) -> String {
        match self {
            AlgebraClass::Nilpotent => "nilpotent".into(),
            AlgebraClass::Abelian => "abelian".into(),
            AlgebraClass::SatisfiesIdentity(w) => format!("identity {w} = 0"),
        }
    }

    fn contains(&self, alg: &StructureAlgebra, v: &Subspace) -> Result<bool> {
        match self {
            AlgebraClass::Nilpotent => Ok(alg.nilpotency_index(v)?.is_some()),
            AlgebraClass::Abelian => {
                if alg.flavor() == Flavor::Lie {
                    return Ok(alg.product_span(v, v)?.is_zero());
                }
                let comm = MultilinearElement::commutator(alg.field());
                Ok(eval_span(&comm, alg, &[v.clone(), v.clone()])?.is_zero())
            }
            AlgebraClass::SatisfiesIdentity(w) => {
                let args = vec![v.clone(); w.degree()];
                Ok(eval_span(w, alg, &args)?.is_zero())
            }
        }
    }
}

/// Whether `N/(N ∩ M)` lies in `class`, computed inside `G/(N ∩ M)`.
pub fn quotient_in_class(class: &dyn ClassTest, alg: &StructureAlgebra, n: &Subspace, m: &Subspace) -> Result<bool> {
    for x in [n, m] {
        if !alg.is_ideal(x)? {
            return Err(Error::NotAnIdeal(x.to_string()));
        }
    }
    let i = n.intersect(m)?;
    let q = alg.quotient(&i)?;
    let nbar = q.project_subspace(n)?;
    class.contains(q.quotient(), &nbar)
}

/// `B(N; M) ⇔ N/(N ∩ M)` lies in `class`. Both arguments must be ideals.
pub fn pred_b(class: Arc<dyn ClassTest>, alg: &StructureAlgebra) -> TwoLinePredicate {
    let alg = alg.clone();
    let cache: Mutex<HashMap<(Subspace, Subspace), bool>> = Mutex::new(HashMap::new());
    let name = format!("B[{}]", class.name());
    TwoLinePredicate::new(name, 1, move |top, bottom| {
        let key = (top[0].clone(), bottom.clone());
        if let Some(&v) = cache.lock().expect("cache lock").get(&key) {
            return Ok(v);
        }
        let v = quotient_in_class(class.as_ref(), &alg, &top[0], bottom)?;
        cache.lock().expect("cache lock").insert(key, v);
        Ok(v)
    })
}

/// `Q(M) ⇔ M = 0`.
pub fn zero_predicate() -> Predicate {
    Predicate::new("M = 0", 1, |args| Ok(args[0].is_zero())).with_laws(&[
        Law::Monotone,
        Law::Multilinear,
        Law::PhiInvariant,
    ])
}

pub fn constant_true(arity: usize) -> Predicate {
    Predicate::new("true", arity, |_| Ok(true)).with_laws(&[
        Law::Monotone,
        Law::Multilinear,
        Law::Comonotone,
        Law::Colinear,
        Law::PhiInvariant,
    ])
}

/// A deliberately broken predicate: `rank(N_1)` is even, falsely declared monotone and multilinear.
pub fn rank_parity_fixture() -> Predicate {
    Predicate::new("rank(N1) even", 1, |args| Ok(args[0].rank() % 2 == 0)).with_laws(&[Law::Monotone, Law::Multilinear])
}

/// Lazily filled truth table of `q` over `pool^k`, indexed in mixed radix.
struct PoolTable {
    q: Predicate,
    pool: Vec<Subspace>,
    dense: Option<Vec<u8>>,
    sparse: HashMap<Vec<usize>, bool>,
}

const DENSE_TABLE_LIMIT: usize = 1 << 20;

impl PoolTable {
    fn new(q: Predicate, pool: Vec<Subspace>) -> Self {
        let size = pool.len().checked_pow(q.arity() as u32);
        let dense = size.filter(|&s| s <= DENSE_TABLE_LIMIT).map(|s| vec![0u8; s]);
        PoolTable {
            q,
            pool,
            dense,
            sparse: HashMap::new(),
        }
    }

    fn get(&mut self, idx: &[usize]) -> Result<bool> {
        let n = self.pool.len();
        let code = idx.iter().fold(0usize, |acc, &i| acc * n + i);
        if let Some(d) = &self.dense {
            match d[code] {
                1 => return Ok(false),
                2 => return Ok(true),
                _ => {}
            }
        } else if let Some(&v) = self.sparse.get(idx) {
            return Ok(v);
        }
        let args: Vec<Subspace> = idx.iter().map(|&i| self.pool[i].clone()).collect();
        let v = self.q.eval(&args)?;
        match &mut self.dense {
            Some(d) => d[code] = if v { 2 } else { 1 },
            None => {
                self.sparse.insert(idx.to_vec(), v);
            }
        }
        Ok(v)
    }
}

/// The composition `Q ∘ (R_1, …, R_k)` over `pool`; arity `k·l`.
///
/// The result declares every slot monotone and multilinear and the whole
/// predicate Φ-invariant. Those claims hold when `Q` is monotone, the `R_i`
/// satisfy their two-line laws, and `pool` is a Φ-invariant family closed
/// under intersection; [`check_law`] verifies them empirically.
pub fn compose(q: &Predicate, rs: &[TwoLinePredicate], pool: &[Subspace]) -> Result<Predicate> {
    if rs.len() != q.arity() {
        return Err(Error::Arity {
            expected: q.arity(),
            found: rs.len(),
        });
    }
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let l = rs.first().map_or(0, TwoLinePredicate::top_arity);
    if let Some(r) = rs.iter().find(|r| r.top_arity() != l) {
        return Err(Error::Arity {
            expected: l,
            found: r.top_arity(),
        });
    }
    let k = rs.len();
    let rs = rs.to_vec();
    let pool = pool.to_vec();
    let name = format!(
        "({}) o [{}]",
        q.name(),
        rs.iter().map(TwoLinePredicate::name).join(", ")
    );
    let table = Mutex::new(PoolTable::new(q.clone(), pool.clone()));
    let memo: Mutex<HashMap<Vec<Subspace>, bool>> = Mutex::new(HashMap::new());
    let eval = move |args: &[Subspace]| -> Result<bool> {
        if let Some(&v) = memo.lock().expect("memo lock").get(args) {
            return Ok(v);
        }
        let mut admissible: Vec<Vec<usize>> = Vec::with_capacity(k);
        for (i, r) in rs.iter().enumerate() {
            let slice = &args[i * l..(i + 1) * l];
            let mut ok = Vec::new();
            for (j, m) in pool.iter().enumerate() {
                if r.eval(slice, m)? {
                    ok.push(j);
                }
            }
            admissible.push(ok);
        }
        let mut found = false;
        if admissible.iter().all(|a| !a.is_empty()) {
            let mut table = table.lock().expect("table lock");
            if k == 0 {
                found = table.get(&[])?;
            } else {
                for idx in admissible.iter().map(|a| a.iter().copied()).multi_cartesian_product() {
                    if table.get(&idx)? {
                        found = true;
                        break;
                    }
                }
            }
        }
        memo.lock().expect("memo lock").insert(args.to_vec(), found);
        Ok(found)
    };
    Ok(Predicate::new(name, k * l, eval).with_laws(&[Law::Monotone, Law::Multilinear, Law::PhiInvariant]))
}

fn check_ideal_pool(alg: &StructureAlgebra, pool: &[Subspace]) -> Result<()> {
    for m in pool {
        if !alg.is_ideal(m)? {
            return Err(Error::NotAnIdeal(m.to_string()));
        }
    }
    Ok(())
}

/// `C(N_1, …, N_{ld}) ⇔ ∃ M_1, …, M_l ∈ pool: Q(M_1, …, M_l) ∧ w(N_{(i-1)d+1}, …, N_{id}) ⊆ M_i`.
///
/// On the diagonal this says `N/(N ∩ M)` satisfies `w = 0` for an ideal `M`
/// with `Q`; the arity is `l · deg w`.
pub fn extend_c(w: &MultilinearElement, q: &Predicate, pool: &[Subspace], alg: &StructureAlgebra) -> Result<Predicate> {
    check_ideal_pool(alg, pool)?;
    let r = pred_a(w, alg);
    compose(q, &vec![r; q.arity()], pool)
}

/// `D(N_1, …, N_l) ⇔ ∃ M_1, …, M_l ∈ pool: Q(M_1, …, M_l) ∧ N_i/(N_i ∩ M_i) ∈ class`; arity `l`.
pub fn extend_d(
    class: Arc<dyn ClassTest>,
    q: &Predicate,
    pool: &[Subspace],
    alg: &StructureAlgebra,
) -> Result<Predicate> {
    check_ideal_pool(alg, pool)?;
    let r = pred_b(class, alg);
    compose(q, &vec![r; q.arity()], pool)
}

/// A finite set of subspaces with precomputed sum, meet, order and Φ-action tables.
#[derive(Clone, Debug)]
pub struct LawDomain {
    elements: Vec<Subspace>,
    index: HashMap<Subspace, usize>,
    sum: Vec<Option<usize>>,
    meet: Vec<Option<usize>>,
    leq: Vec<bool>,
    generator_images: Vec<Vec<Subspace>>,
}

impl LawDomain {
    /// Builds the tables; `phi` supplies the generators used by the Φ-invariance law.
    pub fn new(elements: &[Subspace], phi: Option<&MorphismSet>) -> Result<Self> {
        let mut uniq: Vec<Subspace> = Vec::new();
        let mut index = HashMap::new();
        for e in elements {
            if !index.contains_key(e) {
                index.insert(e.clone(), uniq.len());
                uniq.push(e.clone());
            }
        }
        let n = uniq.len();
        let mut sum = vec![None; n * n];
        let mut meet = vec![None; n * n];
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                sum[i * n + j] = index.get(&uniq[i].sum(&uniq[j])?).copied();
                meet[i * n + j] = index.get(&uniq[i].intersect(&uniq[j])?).copied();
                leq[i * n + j] = uniq[i].leq(&uniq[j])?;
            }
        }
        let mut generator_images = Vec::new();
        if let Some(phi) = phi {
            for g in phi.generators() {
                generator_images.push(uniq.iter().map(|v| g.apply(v)).collect::<Result<Vec<_>>>()?);
            }
        }
        Ok(LawDomain {
            elements: uniq,
            index,
            sum,
            meet,
            leq,
            generator_images,
        })
    }

    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LawCheckConfig {
    /// Exhaustive when `|domain|^arity` is at most this; sampled otherwise.
    pub exhaustive_bound: usize,
    /// Random base tuples in sampled mode.
    pub trials: usize,
    pub seed: u64,
}

impl Default for LawCheckConfig {
    fn default() -> Self {
        LawCheckConfig {
            exhaustive_bound: 1 << 16,
            trials: 2_000,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Exhaustive,
    Sampled,
}

/// A failing instance; re-evaluating the predicate on `tuple` and the derived tuple reproduces it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub tuple: Vec<Subspace>,
    pub slot: Option<usize>,
    /// The second value placed in `slot` (the smaller/larger element, or the other summand).
    pub other: Option<Subspace>,
    /// The tuple on which the predicate unexpectedly fails.
    pub failing: Vec<Subspace>,
    /// Generator index for Φ-invariance failures.
    pub generator: Option<usize>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |t: &[Subspace]| t.iter().map(|s| s.to_string()).join("; ");
        write!(f, "holds at ({})", show(&self.tuple))?;
        if let (Some(slot), Some(o)) = (self.slot, &self.other) {
            write!(f, " with slot {slot} alternative {o}")?;
        }
        if let Some(g) = self.generator {
            write!(f, " under generator {g}")?;
        }
        write!(f, " but fails at ({})", show(&self.failing))
    }
}

#[derive(Clone, Debug)]
pub struct LawReport {
    pub predicate: String,
    pub law: Law,
    pub slot: Option<usize>,
    pub mode: CheckMode,
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let slot = self.slot.map_or("all".to_string(), |s| s.to_string());
        let mode = match self.mode {
            CheckMode::Exhaustive => "exhaustive",
            CheckMode::Sampled => "sampled",
        };
        match &self.counterexample {
            None => write!(
                f,
                "{} / {} / slot {slot}: pass ({} {mode} checks)",
                self.predicate, self.law, self.checked
            ),
            Some(c) => write!(f, "{} / {} / slot {slot}: FAIL: {c}", self.predicate, self.law),
        }
    }
}

/// Truth values of a predicate on domain tuples, memoised.
struct Truth<'a> {
    p: &'a Predicate,
    domain: &'a LawDomain,
    dense: Option<Vec<u8>>,
    sparse: HashMap<Vec<usize>, bool>,
}

impl<'a> Truth<'a> {
    fn new(p: &'a Predicate, domain: &'a LawDomain, dense: bool) -> Self {
        let dense = dense.then(|| vec![0u8; domain.len().pow(p.arity() as u32)]);
        Truth {
            p,
            domain,
            dense,
            sparse: HashMap::new(),
        }
    }

    fn at(&mut self, idx: &[usize]) -> Result<bool> {
        let n = self.domain.len();
        if let Some(d) = &self.dense {
            let code = idx.iter().fold(0usize, |acc, &i| acc * n + i);
            if d[code] != 0 {
                return Ok(d[code] == 2);
            }
            let v = self.p.eval(&self.tuple(idx))?;
            self.dense.as_mut().expect("dense")[code] = if v { 2 } else { 1 };
            return Ok(v);
        }
        if let Some(&v) = self.sparse.get(idx) {
            return Ok(v);
        }
        let v = self.p.eval(&self.tuple(idx))?;
        self.sparse.insert(idx.to_vec(), v);
        Ok(v)
    }

    fn tuple(&self, idx: &[usize]) -> Vec<Subspace> {
        idx.iter().map(|&i| self.domain.elements[i].clone()).collect()
    }

    /// Value at `idx` with slot `slot` replaced by an arbitrary subspace.
    fn at_replaced(&mut self, idx: &[usize], slot: usize, v: &Subspace) -> Result<(bool, Vec<Subspace>)> {
        let mut t = self.tuple(idx);
        t[slot] = v.clone();
        if let Some(&j) = self.domain.index.get(v) {
            let mut k = idx.to_vec();
            k[slot] = j;
            return Ok((self.at(&k)?, t));
        }
        Ok((self.p.eval(&t)?, t))
    }
}

/// Checks one law of `p` on `domain`, per slot for slotwise laws.
///
/// Slotwise laws quantify over a base tuple, a slot `i` and a second domain
/// element `x` for that slot:
///
/// - monotone: `P(a) ∧ x ≤ a_i ⇒ P(a[i := x])`
/// - comonotone: `P(a) ∧ x ≥ a_i ⇒ P(a[i := x])`
/// - multilinear: `P(a) ∧ P(a[i := x]) ⇒ P(a[i := a_i + x])`
/// - colinear: `P(a) ∧ P(a[i := x]) ⇒ P(a[i := a_i ∩ x])`
///
/// Φ-invariance checks `P(a) ⇒ P(g(a))` for each generator `g` of the domain's Φ.
pub fn check_law(
    p: &Predicate,
    law: Law,
    slot: Option<usize>,
    domain: &LawDomain,
    config: &LawCheckConfig,
) -> Result<LawReport> {
    let n = domain.len();
    let arity = p.arity();
    let total = n.checked_pow(arity as u32);
    let exhaustive = total.is_some_and(|t| t <= config.exhaustive_bound);
    let mut truth = Truth::new(p, domain, exhaustive);
    let mut report = LawReport {
        predicate: p.name().to_string(),
        law,
        slot,
        mode: if exhaustive {
            CheckMode::Exhaustive
        } else {
            CheckMode::Sampled
        },
        checked: 0,
        counterexample: None,
    };
    if n == 0 {
        return Ok(report);
    }
    let slots: Vec<usize> = match (law, slot) {
        (Law::PhiInvariant, _) => Vec::new(),
        (_, Some(s)) => vec![s],
        (_, None) => (0..arity).collect(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let bases: Box<dyn Iterator<Item = Vec<usize>>> = if exhaustive {
        all_tuples(n, arity)
    } else {
        let picks: Vec<Vec<usize>> = (0..config.trials)
            .map(|_| (0..arity).map(|_| rng.gen_range(0..n)).collect())
            .collect();
        Box::new(picks.into_iter())
    };
    for a in bases {
        if !truth.at(&a)? {
            report.checked += 1;
            continue;
        }
        if law == Law::PhiInvariant {
            for (gi, images) in domain.generator_images.iter().enumerate() {
                report.checked += 1;
                let image: Vec<Subspace> = a.iter().map(|&i| images[i].clone()).collect();
                let ok = match image
                    .iter()
                    .map(|s| domain.index.get(s).copied())
                    .collect::<Option<Vec<usize>>>()
                {
                    Some(idx) => truth.at(&idx)?,
                    None => p.eval(&image)?,
                };
                if !ok {
                    report.counterexample = Some(Counterexample {
                        tuple: truth.tuple(&a),
                        slot: None,
                        other: None,
                        failing: image,
                        generator: Some(gi),
                    });
                    return Ok(report);
                }
            }
            continue;
        }
        for &i in &slots {
            let others: Vec<usize> = if exhaustive {
                (0..n).collect()
            } else {
                vec![rng.gen_range(0..n)]
            };
            for x in others {
                report.checked += 1;
                let ai = a[i];
                let target: Option<Subspace> = match law {
                    Law::Monotone => domain.leq[x * n + ai].then(|| domain.elements[x].clone()),
                    Law::Comonotone => domain.leq[ai * n + x].then(|| domain.elements[x].clone()),
                    Law::Multilinear | Law::Colinear => {
                        let mut b = a.clone();
                        b[i] = x;
                        if !truth.at(&b)? {
                            None
                        } else {
                            let table = if law == Law::Multilinear {
                                &domain.sum
                            } else {
                                &domain.meet
                            };
                            Some(match table[ai * n + x] {
                                Some(j) => domain.elements[j].clone(),
                                None if law == Law::Multilinear => domain.elements[ai].sum(&domain.elements[x])?,
                                None => domain.elements[ai].intersect(&domain.elements[x])?,
                            })
                        }
                    }
                    Law::PhiInvariant => unreachable!("handled above"),
                };
                let Some(target) = target else {
                    continue;
                };
                let (ok, failing) = truth.at_replaced(&a, i, &target)?;
                if !ok {
                    report.counterexample = Some(Counterexample {
                        tuple: truth.tuple(&a),
                        slot: Some(i),
                        other: Some(domain.elements[x].clone()),
                        failing,
                        generator: None,
                    });
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

/// Runs [`check_law`] for every law `p` declares, one report per slot.
pub fn check_declared_laws(p: &Predicate, domain: &LawDomain, config: &LawCheckConfig) -> Result<Vec<LawReport>> {
    p.declared()
        .into_iter()
        .map(|(law, slot)| check_law(p, law, slot, domain, config))
        .collect()
}

/// All index tuples of length `arity` over `0..n`, in lexicographic order.
fn all_tuples(n: usize, arity: usize) -> Box<dyn Iterator<Item = Vec<usize>>> {
    if arity == 0 {
        Box::new(std::iter::once(Vec::new()))
    } else {
        Box::new((0..arity).map(|_| 0..n).multi_cartesian_product())
    }
}
