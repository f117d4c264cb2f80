//! Independent certificate checking.
//!
//! Nothing here calls the engines, the lattice closure, the morphism closure
//! or the `Subspace` arithmetic. The verifier has its own row reduction, its
//! own enumeration of Φ from the generator matrices, and its own word
//! evaluation from the structure constants, so a bug shared with the search
//! code cannot hide a bad certificate. What it cannot check is minimality:
//! that would need the search it deliberately avoids.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::algebra::{Flavor, StructureAlgebra};
use crate::certificate::{
    Basis, CharMode, CharSubspaceCertificate, ClassTag, DerivationStep, LevelDetail, LevelSpec, Matrix,
    SeriesCertificate,
};
use crate::field::FieldPrime;
use crate::words::{parse_word, Monomial, MultilinearElement};

/// Largest Φ the verifier is willing to enumerate.
pub const VERIFY_GROUP_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<VerifyCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn discrepancies(&self) -> Vec<&VerifyCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(VerifyCheck {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
        passed
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            write!(f, "{mark} {}", c.name)?;
            if !c.detail.is_empty() {
                write!(f, ": {}", c.detail)?;
            }
            writeln!(f)?;
        }
        let bad = self.discrepancies().len();
        write!(f, "{} checks, {bad} discrepancies", self.checks.len())
    }
}

/// Row-space arithmetic on plain vectors.
struct Lin {
    f: FieldPrime,
    d: usize,
}

impl Lin {
    /// Reduced echelon basis of the row space.
    fn echelon(&self, rows: &[Vec<u64>]) -> Basis {
        let width = rows.first().map_or(self.d, Vec::len);
        let mut m: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| self.f.reduce(x)).collect())
            .collect();
        let mut r = 0;
        for c in 0..width {
            let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else {
                continue;
            };
            m.swap(r, piv);
            let inv = self.f.inv(m[r][c]).expect("nonzero pivot");
            for x in m[r].iter_mut() {
                *x = self.f.mul(*x, inv);
            }
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && row[c] != 0 {
                    let factor = row[c];
                    for (x, &y) in row.iter_mut().zip(&pivot_row).take(width) {
                        *x = self.f.sub(*x, self.f.mul(factor, y));
                    }
                }
            }
            r += 1;
        }
        m.truncate(r);
        m
    }

    fn rank(&self, rows: &[Vec<u64>]) -> usize {
        self.echelon(rows).len()
    }

    fn contains(&self, space: &[Vec<u64>], v: &[u64]) -> bool {
        let mut rows = space.to_vec();
        rows.push(v.to_vec());
        self.rank(&rows) == self.rank(space)
    }

    fn leq(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> bool {
        a.iter().all(|v| self.contains(b, v))
    }

    fn same(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> bool {
        self.leq(a, b) && self.leq(b, a)
    }

    fn sum(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Basis {
        self.echelon(&[a, b].concat())
    }

    /// Rows `(a, a)` and `(b, 0)`; rows of the echelon form with zero left half span `A ∩ B`.
    fn meet(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Basis {
        let d = self.d;
        let mut rows: Vec<Vec<u64>> = a.iter().map(|v| [v.as_slice(), v.as_slice()].concat()).collect();
        rows.extend(b.iter().map(|v| [v.as_slice(), &vec![0; d][..]].concat()));
        if rows.is_empty() {
            return Vec::new();
        }
        let e = self.echelon(&rows);
        let right: Vec<Vec<u64>> = e
            .into_iter()
            .filter(|r| r[..d].iter().all(|&x| x == 0))
            .map(|r| r[d..].to_vec())
            .collect();
        self.echelon(&right)
    }

    /// `g v` with `v` a column vector.
    fn apply(&self, g: &Matrix, v: &[u64]) -> Vec<u64> {
        g.iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| self.f.add(acc, self.f.mul(a, b)))
            })
            .collect()
    }

    fn image(&self, g: &Matrix, space: &[Vec<u64>]) -> Basis {
        self.echelon(&space.iter().map(|v| self.apply(g, v)).collect::<Vec<_>>())
    }

    fn compose(&self, a: &Matrix, b: &Matrix) -> Matrix {
        (0..self.d)
            .map(|i| {
                (0..self.d)
                    .map(|j| (0..self.d).fold(0, |acc, k| self.f.add(acc, self.f.mul(a[i][k], b[k][j]))))
                    .collect()
            })
            .collect()
    }
}

/// Multiplication and word evaluation straight from the structure constants.
struct Table<'a> {
    lin: Lin,
    alg: &'a StructureAlgebra,
}

impl<'a> Table<'a> {
    fn new(alg: &'a StructureAlgebra) -> Self {
        Table {
            lin: Lin {
                f: alg.field(),
                d: alg.dim(),
            },
            alg,
        }
    }

    fn mul(&self, u: &[u64], v: &[u64]) -> Vec<u64> {
        let f = self.lin.f;
        let mut out = vec![0; self.lin.d];
        for (i, &a) in u.iter().enumerate().filter(|(_, &a)| a != 0) {
            for (j, &b) in v.iter().enumerate().filter(|(_, &b)| b != 0) {
                let c = f.mul(a, b);
                for (k, &s) in self.alg.basis_product(i, j).iter().enumerate() {
                    out[k] = f.add(out[k], f.mul(c, s));
                }
            }
        }
        out
    }

    fn monomial(&self, m: &Monomial, args: &[Vec<u64>]) -> Vec<u64> {
        match m {
            Monomial::Var(i) => args[*i].clone(),
            Monomial::Mul(a, b) => self.mul(&self.monomial(a, args), &self.monomial(b, args)),
        }
    }

    fn word(&self, w: &MultilinearElement, args: &[Vec<u64>]) -> Vec<u64> {
        let f = self.lin.f;
        let mut out = vec![0; self.lin.d];
        for (c, m) in w.terms() {
            let v = self.monomial(m, args);
            for (o, x) in out.iter_mut().zip(v) {
                *o = f.add(*o, f.mul(*c, x));
            }
        }
        out
    }

    /// Span of `w` over basis tuples, which suffices by multilinearity.
    fn word_span(&self, w: &MultilinearElement, space: &[Vec<u64>]) -> Basis {
        let k = w.degree();
        let mut values = Vec::new();
        if space.is_empty() && k > 0 {
            return Vec::new();
        }
        let mut idx = vec![0usize; k];
        loop {
            let args: Vec<Vec<u64>> = idx.iter().map(|&i| space[i].clone()).collect();
            values.push(self.word(w, &args));
            let mut pos = k;
            loop {
                if pos == 0 {
                    return self.lin.echelon(&values);
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < space.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    fn is_ideal(&self, space: &[Vec<u64>]) -> bool {
        let d = self.lin.d;
        (0..d).all(|i| {
            let mut e = vec![0; d];
            e[i] = 1;
            space
                .iter()
                .all(|v| self.lin.contains(space, &self.mul(&e, v)) && self.lin.contains(space, &self.mul(v, &e)))
        })
    }

    fn is_automorphism(&self, g: &Matrix) -> bool {
        let d = self.lin.d;
        if g.len() != d || g.iter().any(|r| r.len() != d) || self.lin.rank(g) != d {
            return false;
        }
        let col = |j: usize| -> Vec<u64> { g.iter().map(|r| r[j]).collect() };
        (0..d).all(|i| (0..d).all(|j| self.lin.apply(g, self.alg.basis_product(i, j)) == self.mul(&col(i), &col(j))))
    }

    /// All products of the generators, the identity included.
    fn group(&self, generators: &[Matrix]) -> Option<Vec<Matrix>> {
        let d = self.lin.d;
        let id: Matrix = (0..d).map(|i| (0..d).map(|j| u64::from(i == j)).collect()).collect();
        let mut seen: HashSet<Matrix> = HashSet::from([id.clone()]);
        let mut order = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = self.lin.compose(g, &x);
                if seen.insert(y.clone()) {
                    if seen.len() > VERIFY_GROUP_CAP {
                        return None;
                    }
                    order.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Some(order)
    }

    /// Residual powers of `top` over `below`: `P_1 = top`, `P_k = Σ P_a P_b + below`.
    fn nilpotency_index(&self, top: &[Vec<u64>], below: &[Vec<u64>]) -> Option<usize> {
        let lin = &self.lin;
        let prod = |a: &[Vec<u64>], b: &[Vec<u64>]| -> Basis {
            let mut rows: Vec<Vec<u64>> = below.to_vec();
            for u in a {
                for v in b {
                    rows.push(self.mul(u, v));
                }
            }
            lin.echelon(&rows)
        };
        // Decide first: X_{j+1} = top X_j + X_j top + below must sink into below.
        let mut x = lin.sum(top, below);
        loop {
            if lin.leq(&x, below) {
                break;
            }
            let next = lin.sum(&prod(top, &x), &prod(&x, top));
            if lin.same(&next, &x) {
                return None;
            }
            x = next;
        }
        let mut powers: Vec<Basis> = vec![Vec::new(), lin.sum(top, below)];
        let mut m = 1;
        while !lin.leq(&powers[m], below) {
            let mut next = below.to_vec();
            for a in 1..=m {
                next = lin.sum(&next, &prod(&powers[a], &powers[m + 1 - a]));
            }
            powers.push(next);
            m += 1;
        }
        Some(m)
    }
}

fn f_step(x: u64) -> Option<u64> {
    x.checked_mul(x.checked_add(1)?)
}

/// `k!·Catalan(k-1)`, the number of multilinear monomials of degree `k`.
fn monomial_count(k: usize) -> u64 {
    let k = k as u64;
    let fact: u64 = (1..=k).product();
    let n = k.saturating_sub(1);
    let catalan = (0..n).fold(1u64, |c, i| c * 2 * (2 * i + 1) / (i + 2));
    fact * catalan
}

fn header(
    report: &mut VerifyReport,
    alg: &StructureAlgebra,
    field: u64,
    dimension: usize,
    generators: &[Matrix],
    cert_generators: &[Matrix],
) -> bool {
    let ok = report.check(
        "field and dimension",
        field == alg.field().p() && dimension == alg.dim(),
        format!("certificate GF({field})^{dimension}"),
    );
    let same = generators == cert_generators;
    report.check(
        "generators match the problem",
        same,
        format!("{} problem, {} certificate", generators.len(), cert_generators.len()),
    );
    ok && same
}

fn check_generators_and_group(
    report: &mut VerifyReport,
    t: &Table<'_>,
    generators: &[Matrix],
    phi_size: usize,
) -> Option<Vec<Matrix>> {
    let bad: Vec<usize> = (0..generators.len())
        .filter(|&i| !t.is_automorphism(&generators[i]))
        .collect();
    report.check(
        "generators are automorphisms",
        bad.is_empty(),
        format!("failing: {bad:?}"),
    );
    let group = t.group(generators);
    match &group {
        Some(g) => report.check(
            "|Φ|",
            g.len() == phi_size,
            format!("recomputed {}, certificate {phi_size}", g.len()),
        ),
        None => report.check("|Φ|", false, format!("more than {VERIFY_GROUP_CAP} elements")),
    };
    group
}

fn check_invariance(report: &mut VerifyReport, lin: &Lin, name: &str, space: &[Vec<u64>], generators: &[Matrix]) {
    let bad: Vec<usize> = (0..generators.len())
        .filter(|&i| !lin.leq(&lin.image(&generators[i], space), space))
        .collect();
    report.check(
        format!("{name} is Φ-invariant"),
        bad.is_empty(),
        format!("moved by generators {bad:?}"),
    );
}

/// Re-validates a characteristic-subspace certificate against its problem.
///
/// `n` and `generators` come from the problem, not the certificate.
pub fn verify_char_certificate(
    alg: &StructureAlgebra,
    n: &[Vec<u64>],
    generators: &[Matrix],
    cert: &CharSubspaceCertificate,
) -> VerifyReport {
    let mut report = VerifyReport::default();
    if !header(
        &mut report,
        alg,
        cert.field,
        cert.dimension,
        generators,
        &cert.generators,
    ) {
        return report;
    }
    let t = Table::new(alg);
    let lin = &t.lin;
    let d = alg.dim();
    let n_space = lin.echelon(n);
    report.check("N matches the problem", lin.same(&n_space, &cert.n), "");
    report.check(
        "codim N",
        cert.codim_n == d - n_space.len(),
        format!("certificate {}, recomputed {}", cert.codim_n, d - n_space.len()),
    );
    let h = lin.echelon(&cert.h);
    report.check(
        "codim H",
        cert.codim_h == d - h.len(),
        format!("certificate {}, recomputed {}", cert.codim_h, d - h.len()),
    );

    let group = check_generators_and_group(&mut report, &t, generators, cert.phi_size);

    // Orbit: replay every path and compare with the full orbit from Φ.
    let mut replay_bad = Vec::new();
    for (i, entry) in cert.orbit.iter().enumerate() {
        let mut v = n_space.clone();
        let mut valid = true;
        for &g in &entry.path {
            match generators.get(g) {
                Some(m) => v = lin.image(m, &v),
                None => valid = false,
            }
        }
        if !valid || !lin.same(&v, &entry.basis) {
            replay_bad.push(i);
        }
    }
    report.check(
        "orbit paths replay",
        replay_bad.is_empty(),
        format!("failing entries {replay_bad:?}"),
    );
    if let Some(group) = &group {
        let orbit: HashSet<Basis> = group.iter().map(|g| lin.image(g, &n_space)).collect();
        let listed: HashSet<Basis> = cert.orbit.iter().map(|e| lin.echelon(&e.basis)).collect();
        report.check(
            "orbit is complete",
            orbit == listed && listed.len() == cert.orbit.len(),
            format!("recomputed {}, certificate {}", orbit.len(), cert.orbit.len()),
        );
    }

    // Derivation: each step from earlier steps, ending at H.
    let mut built: Vec<Basis> = Vec::new();
    let mut deriv_bad = Vec::new();
    for (i, entry) in cert.derivation.iter().enumerate() {
        let value = match entry.step {
            DerivationStep::Orbit { index } => cert.orbit.get(index).map(|e| lin.echelon(&e.basis)),
            DerivationStep::Sum { left, right } if left < i && right < i => Some(lin.sum(&built[left], &built[right])),
            DerivationStep::Meet { left, right } if left < i && right < i => {
                Some(lin.meet(&built[left], &built[right]))
            }
            _ => None,
        };
        match value {
            Some(v) if lin.same(&v, &entry.basis) => built.push(v),
            Some(v) => {
                deriv_bad.push(i);
                built.push(v);
            }
            None => {
                deriv_bad.push(i);
                built.push(lin.echelon(&entry.basis));
            }
        }
    }
    report.check(
        "derivation replays",
        deriv_bad.is_empty(),
        format!("failing steps {deriv_bad:?}"),
    );
    report.check(
        "derivation ends at H",
        built.last().is_some_and(|last| lin.same(last, &h)),
        format!("{} steps", built.len()),
    );

    check_invariance(&mut report, lin, "H", &h, generators);

    // Bound arithmetic.
    let mut trace = vec![cert.codim_n as u64];
    for _ in 1..cert.t.max(1) {
        match trace.last().copied().and_then(f_step) {
            Some(x) => trace.push(x),
            None => break,
        }
    }
    report.check(
        "f-trace",
        trace == cert.f_trace && trace.len() == cert.t.max(1),
        format!("recomputed {trace:?}"),
    );
    report.check(
        "bound",
        trace.last() == Some(&cert.bound) && cert.codim_h as u64 <= cert.bound,
        format!(
            "codim H = {} against f^{}({}) = {}",
            cert.codim_h,
            cert.t.saturating_sub(1),
            cert.codim_n,
            cert.bound
        ),
    );

    // Words.
    let field = alg.field();
    let mut per_degree = vec![0u64; cert.t + 1];
    let mut word_bad = Vec::new();
    for wit in &cert.words {
        let w = match parse_word(&wit.word, field) {
            Ok(w) => w,
            Err(e) => {
                word_bad.push(format!("{}: {e}", wit.name));
                continue;
            }
        };
        if w.degree() > cert.t || w.degree() != wit.degree {
            word_bad.push(format!("{}: degree {}", wit.name, w.degree()));
            continue;
        }
        if w.terms().len() == 1 && w.terms()[0].0 == 1 {
            per_degree[w.degree()] += 1;
        }
        let image = t.word_span(&w, &n_space);
        let rhs = match &group {
            Some(g) => lin.echelon(&g.iter().flat_map(|m| lin.image(m, &image)).collect::<Vec<_>>()),
            None => lin.echelon(&wit.rhs),
        };
        let lhs = t.word_span(&w, &h);
        let stated = lin.same(&image, &wit.image) && lin.same(&rhs, &wit.rhs) && lin.same(&lhs, &wit.lhs);
        if !stated || !lin.leq(&lhs, &rhs) {
            word_bad.push(wit.name.clone());
        }
    }
    report.check("word containments", word_bad.is_empty(), word_bad.join("; "));
    let cap = crate::words::DEFAULT_DEGREE_CAP.min(cert.t);
    let missing: Vec<usize> = (1..=cap).filter(|&k| per_degree[k] < monomial_count(k)).collect();
    report.check(
        "all monomials of degree <= t present",
        missing.is_empty(),
        format!("short at degrees {missing:?}"),
    );

    if let Some(target) = &cert.target {
        match parse_word(&target.word, field) {
            Ok(w) => {
                let image = t.word_span(&w, &n_space);
                let lhs = t.word_span(&w, &h);
                let dims_ok = image.len() == target.image_dim
                    && lhs.len() == target.lhs_dim
                    && target.ceiling == cert.phi_size * image.len();
                report.check(
                    "target dimensions",
                    dims_ok,
                    format!("image {}, H-image {}", image.len(), lhs.len()),
                );
                match cert.mode {
                    CharMode::Identity => report.check(
                        "identity vanishes on N and H",
                        image.is_empty() && lhs.is_empty() && target.vanishes,
                        format!("dim on N {}, on H {}", image.len(), lhs.len()),
                    ),
                    _ => report.check(
                        "bounded image",
                        lhs.len() <= cert.phi_size * image.len(),
                        format!("{} <= {} * {}", lhs.len(), cert.phi_size, image.len()),
                    ),
                };
            }
            Err(e) => {
                report.check("target word parses", false, e.to_string());
            }
        }
    } else {
        report.check(
            "mode has no target",
            cert.mode == CharMode::General,
            format!("{:?}", cert.mode),
        );
    }
    report
}

/// A series level as the problem states it.
#[derive(Clone, Debug)]
pub enum VerifyLevel {
    Identity(MultilinearElement),
    Class(ClassTag),
}

/// Re-validates a series certificate against its problem: algebra, generators, levels and input chain `A_1..A_n`.
pub fn verify_series_certificate(
    alg: &StructureAlgebra,
    generators: &[Matrix],
    levels: &[VerifyLevel],
    input: &[Basis],
    cert: &SeriesCertificate,
) -> VerifyReport {
    let mut report = VerifyReport::default();
    if !header(
        &mut report,
        alg,
        cert.field,
        cert.dimension,
        generators,
        &cert.generators,
    ) {
        return report;
    }
    let t = Table::new(alg);
    let lin = &t.lin;
    let d = alg.dim();
    let n = levels.len();

    let input_ok = cert.input_chain.len() == n + 1
        && cert.input_chain[0].is_empty()
        && input.iter().zip(&cert.input_chain[1..]).all(|(a, b)| lin.same(a, b))
        && input.len() == n;
    report.check("input chain matches the problem", input_ok, "");
    if let Some(top) = input.last() {
        let codim = d - lin.rank(top);
        report.check("codim N", codim == cert.codim_n, format!("recomputed {codim}"));
    }
    let specs_ok = cert.levels.len() == n
        && levels.iter().zip(&cert.levels).all(|(l, s)| match (l, s) {
            (VerifyLevel::Identity(w), LevelSpec::Identity { word }) => {
                parse_word(word, alg.field()).ok().as_ref() == Some(w)
            }
            (VerifyLevel::Class(a), LevelSpec::Class { tag }) => a == tag,
            _ => false,
        });
    report.check("levels match the problem", specs_ok, "");
    check_generators_and_group(&mut report, &t, generators, cert.phi_size);

    let chain: Vec<Basis> = cert.chain.iter().map(|b| lin.echelon(b)).collect();
    let shape = chain.len() == n + 1 && chain[0].is_empty();
    report.check("chain shape", shape, format!("{} terms for {n} levels", chain.len()));
    if !shape {
        return report;
    }
    let codim_m = d - chain[n].len();
    report.check("codim M", codim_m == cert.codim_m, format!("recomputed {codim_m}"));
    let not_ideal: Vec<usize> = (0..=n).filter(|&i| !t.is_ideal(&chain[i])).collect();
    report.check(
        "chain consists of ideals",
        not_ideal.is_empty(),
        format!("failing {not_ideal:?}"),
    );
    let not_nested: Vec<usize> = (1..=n).filter(|&i| !lin.leq(&chain[i - 1], &chain[i])).collect();
    report.check(
        "chain is nested",
        not_nested.is_empty(),
        format!("failing {not_nested:?}"),
    );
    for (i, b) in chain.iter().enumerate().skip(1) {
        check_invariance(&mut report, lin, &format!("B_{i}"), b, generators);
    }

    for (i, level) in levels.iter().enumerate() {
        let (below, top) = (&chain[i], &chain[i + 1]);
        let evidence = cert.evidence.get(i);
        let qdim = top.len() - below.len().min(top.len());
        let dim_ok = evidence.is_some_and(|e| e.level == i + 1 && e.quotient_dim == qdim);
        let (ok, detail) = match level {
            VerifyLevel::Identity(w) => {
                let span = t.word_span(w, top);
                let holds = lin.leq(&span, below);
                let matches = matches!(
                    evidence.map(|e| &e.detail),
                    Some(LevelDetail::IdentityVanishes { span_dim: 0, .. })
                );
                (holds && matches, format!("w(B_{}) inside B_{i}: {holds}", i + 1))
            }
            VerifyLevel::Class(ClassTag::Nilpotent) => {
                let index = t.nilpotency_index(top, below);
                let stated = match evidence.map(|e| &e.detail) {
                    Some(LevelDetail::Nilpotent { index }) => Some(*index),
                    _ => None,
                };
                (
                    index.is_some() && index == stated,
                    format!("recomputed index {index:?}, stated {stated:?}"),
                )
            }
            VerifyLevel::Class(ClassTag::Abelian) => {
                let f = alg.field();
                let lie = alg.flavor() == Flavor::Lie;
                let holds = top.iter().all(|u| {
                    top.iter().all(|v| {
                        let uv = t.mul(u, v);
                        let value = if lie {
                            uv
                        } else {
                            let vu = t.mul(v, u);
                            uv.iter().zip(&vu).map(|(&a, &b)| f.sub(a, b)).collect()
                        };
                        lin.contains(below, &value)
                    })
                });
                let matches = matches!(evidence.map(|e| &e.detail), Some(LevelDetail::Abelian));
                (holds && matches, format!("abelian modulo B_{i}: {holds}"))
            }
        };
        report.check(format!("level {}", i + 1), ok && dim_ok, detail);
    }

    let pool: Vec<Basis> = cert.pool.iter().map(|b| lin.echelon(b)).collect();
    let pool_set: HashSet<&Basis> = pool.iter().collect();
    report.check(
        "pool consists of ideals",
        pool.iter().all(|p| t.is_ideal(p)),
        format!("{} elements", pool.len()),
    );
    report.check("chain lies in the pool", chain.iter().all(|b| pool_set.contains(b)), "");
    if pool.len() <= 256 {
        let closed = pool.iter().all(|a| {
            pool.iter()
                .all(|b| pool_set.contains(&lin.sum(a, b)) && pool_set.contains(&lin.meet(a, b)))
        });
        report.check("pool is a sublattice", closed, "");
    }
    let routes_ok = match (cert.direct_codim, cert.predicate_codim) {
        (Some(a), Some(b)) => a == b && a == codim_m,
        (Some(a), None) | (None, Some(a)) => a == codim_m,
        (None, None) => false,
    };
    report.check(
        "route codimensions",
        routes_ok,
        format!("direct {:?}, predicate {:?}", cert.direct_codim, cert.predicate_codim),
    );
    let arity: usize = levels
        .iter()
        .map(|l| match l {
            VerifyLevel::Identity(w) => w.degree(),
            VerifyLevel::Class(_) => 1,
        })
        .product();
    report.check(
        "U_n arity",
        arity == cert.predicate_arity,
        format!("recomputed {arity}"),
    );
    report
}
