//! Search for a Φ-invariant subspace `H` in the sublattice generated by the orbit of `N`.
//!
//! `H` must satisfy property P on the diagonal: for every word `w` of degree
//! `k` in the word set, `w(H, …, H) ⊆ Σ_{φ ∈ Φ} φ(w(N, …, N))`. Among all
//! invariant elements of the generated sublattice that qualify, the engine
//! returns one of least codimension (ties: least canonical basis) and checks
//! `codim H ≤ f^{t-1}(codim N)`.

use std::fmt::Write as _;

use crate::algebra::StructureAlgebra;
use crate::certificate::{
    CharMode, CharSubspaceCertificate, DerivationEntry, DerivationStep, OrbitEntry, TargetWitness, WordWitness,
};
use crate::error::{Error, Result};
use crate::lattice::{
    f_iterate, f_trace, invariant_elements, phi_sum, sublattice_closure, Provenance, DEFAULT_CLOSURE_CAP,
};
use crate::morphisms::{closure, Morphism, MorphismSet, DEFAULT_MORPHISM_CAP};
use crate::predicates::{Law, Predicate};
use crate::subspace::Subspace;
use crate::words::{enumerate_monomials_capped, eval_span, MultilinearElement, DEFAULT_DEGREE_CAP};

use super::{basis, candidate_order, invariance_witnesses, matrices, nonvanishing_witness, require_automorphisms};

#[derive(Clone, Debug)]
pub struct CharSubspaceRequest {
    pub algebra: StructureAlgebra,
    pub n: Subspace,
    /// Automorphism generators of Φ.
    pub generators: Vec<Morphism>,
    /// Required in general mode; defaults to the target degree otherwise.
    pub t: Option<usize>,
    /// Named words added to the default monomial set.
    pub extra_words: Vec<(String, MultilinearElement)>,
    pub mode: CharMode,
    pub target: Option<(String, MultilinearElement)>,
    pub closure_cap: usize,
    pub morphism_cap: usize,
    pub degree_cap: usize,
}

impl CharSubspaceRequest {
    pub fn new(algebra: StructureAlgebra, n: Subspace, generators: Vec<Morphism>, t: usize) -> Self {
        CharSubspaceRequest {
            algebra,
            n,
            generators,
            t: Some(t),
            extra_words: Vec::new(),
            mode: CharMode::General,
            target: None,
            closure_cap: DEFAULT_CLOSURE_CAP,
            morphism_cap: DEFAULT_MORPHISM_CAP,
            degree_cap: DEFAULT_DEGREE_CAP,
        }
    }

    /// Identity or bounded-image mode for `target`.
    pub fn with_target(mut self, mode: CharMode, name: impl Into<String>, w: MultilinearElement) -> Self {
        self.mode = mode;
        self.target = Some((name.into(), w));
        self
    }

    pub fn with_words(mut self, words: Vec<(String, MultilinearElement)>) -> Self {
        self.extra_words = words;
        self
    }

    pub fn with_t(mut self, t: Option<usize>) -> Self {
        self.t = t;
        self
    }
}

/// Property P for a fixed `N`, Φ and word set, with the right-hand sides precomputed.
#[derive(Clone, Debug)]
pub struct PropertyP {
    algebra: StructureAlgebra,
    t: usize,
    words: Vec<PWord>,
}

#[derive(Clone, Debug)]
struct PWord {
    name: String,
    w: MultilinearElement,
    image: Subspace,
    rhs: Subspace,
}

impl PropertyP {
    pub fn new(
        algebra: &StructureAlgebra,
        n: &Subspace,
        phi: &MorphismSet,
        t: usize,
        words: &[(String, MultilinearElement)],
    ) -> Result<Self> {
        let mut out = Vec::with_capacity(words.len());
        for (name, w) in words {
            if w.degree() > t {
                return Err(Error::InvalidRequest(format!(
                    "word {name} has degree {} > t = {t}",
                    w.degree()
                )));
            }
            let image = eval_span(w, algebra, &vec![n.clone(); w.degree()])?;
            let rhs = phi_sum(&image, phi)?;
            out.push(PWord {
                name: name.clone(),
                w: w.clone(),
                image,
                rhs,
            });
        }
        Ok(PropertyP {
            algebra: algebra.clone(),
            t,
            words: out,
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Whether every word, reading its arguments from the first slots, lands in its target.
    pub fn holds(&self, args: &[Subspace]) -> Result<bool> {
        if args.len() != self.t {
            return Err(Error::Arity {
                expected: self.t,
                found: args.len(),
            });
        }
        for pw in &self.words {
            if !eval_span(&pw.w, &self.algebra, &args[..pw.w.degree()])?.leq(&pw.rhs)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn holds_on_diagonal(&self, c: &Subspace) -> Result<bool> {
        self.holds(&vec![c.clone(); self.t])
    }

    /// First word failing on the diagonal at `c`, if any.
    pub fn first_failure(&self, c: &Subspace) -> Result<Option<String>> {
        for pw in &self.words {
            let lhs = eval_span(&pw.w, &self.algebra, &vec![c.clone(); pw.w.degree()])?;
            if !lhs.leq(&pw.rhs)? {
                return Ok(Some(pw.name.clone()));
            }
        }
        Ok(None)
    }

    /// P as a `t`-ary predicate declaring monotonicity, multilinearity and Φ-invariance.
    pub fn as_predicate(&self) -> Predicate {
        let me = self.clone();
        Predicate::new("property P", self.t, move |args| me.holds(args)).with_laws(&[
            Law::Monotone,
            Law::Multilinear,
            Law::PhiInvariant,
        ])
    }
}

#[derive(Clone, Debug)]
pub struct CharSubspaceOutcome {
    pub h: Subspace,
    pub phi: MorphismSet,
    pub certificate: CharSubspaceCertificate,
}

/// The word set: all monomials of degree `1..=t`, then the extra words, then the target.
fn word_set(req: &CharSubspaceRequest, t: usize) -> Result<Vec<(String, MultilinearElement)>> {
    let field = req.algebra.field();
    let mut words: Vec<(String, MultilinearElement)> = Vec::new();
    for k in 1..=t {
        for m in enumerate_monomials_capped(k, req.degree_cap)? {
            let w = MultilinearElement::from_monomial(field, m)?;
            words.push((w.to_string(), w));
        }
    }
    let extra = req.extra_words.iter().chain(req.target.iter());
    for (name, w) in extra {
        if w.field() != field {
            return Err(Error::FieldMismatch {
                left: field.p(),
                right: w.field().p(),
            });
        }
        if !words.iter().any(|(_, v)| v == w) {
            words.push((name.clone(), w.clone()));
        }
    }
    Ok(words)
}

fn resolve_t(req: &CharSubspaceRequest) -> Result<usize> {
    let target_degree = req.target.as_ref().map(|(_, w)| w.degree());
    match (req.mode, req.t, target_degree) {
        (CharMode::General, None, _) => Err(Error::InvalidRequest("general mode needs a degree t".into())),
        (CharMode::General, Some(t), _) => Ok(t),
        (_, _, None) => Err(Error::InvalidRequest(
            "identity and bounded-image modes need a target word".into(),
        )),
        (_, None, Some(k)) => Ok(k),
        (_, Some(t), Some(k)) if t < k => Err(Error::InvalidRequest(format!("t = {t} is below the target degree {k}"))),
        (_, Some(t), Some(_)) => Ok(t),
    }
}

pub fn find_characteristic_subspace(req: &CharSubspaceRequest) -> Result<CharSubspaceOutcome> {
    let alg = &req.algebra;
    let f = alg.field();
    let d = alg.dim();
    req.n.check_compatible(&alg.full())?;
    require_automorphisms(&req.generators)?;
    let t = resolve_t(req)?;
    if t == 0 {
        return Err(Error::InvalidRequest("t must be at least 1".into()));
    }
    let words = word_set(req, t)?;

    if req.mode == CharMode::Identity {
        let (name, w) = req.target.as_ref().expect("resolved above");
        let image = eval_span(w, alg, &vec![req.n.clone(); w.degree()])?;
        if !image.is_zero() {
            let witness = nonvanishing_witness(alg, w, &req.n).unwrap_or_default();
            return Err(Error::Hypothesis(format!(
                "identity {name} does not vanish on N: {witness}"
            )));
        }
    }

    let phi = closure(f, d, &req.generators, req.morphism_cap)?;
    let orbit = phi.orbit_with_witnesses(&req.n)?;
    let seed: Vec<Subspace> = orbit.iter().map(|(s, _)| s.clone()).collect();
    let lattice = sublattice_closure(&seed, req.closure_cap)?;
    if !lattice.is_complete() {
        return Err(Error::ClosureCap {
            cap: req.closure_cap,
            reached: lattice.len() + 1,
        });
    }
    let mut invariant = invariant_elements(&lattice, &phi)?;
    invariant.sort_by(candidate_order);
    let prop = PropertyP::new(alg, &req.n, &phi, t, &words)?;
    let mut qualifying = Vec::new();
    for c in &invariant {
        if prop.holds_on_diagonal(c)? {
            qualifying.push(c.clone());
        }
    }
    let codim_n = req.n.codim();
    let bound = f_iterate(t as u32 - 1, codim_n as u64)?;
    let Some(h) = qualifying.first().cloned() else {
        let mut dump = format!(
            "no invariant element of the complete closure (size {}) satisfies P; codim N = {codim_n}, t = {t}",
            lattice.len()
        );
        for c in &invariant {
            let _ = write!(dump, "; {c} fails {}", prop.first_failure(c)?.unwrap_or_default());
        }
        return Err(Error::TheoremViolation(dump));
    };
    if h.codim() as u64 > bound {
        return Err(Error::TheoremViolation(format!(
            "codim H = {} exceeds f^{}({codim_n}) = {bound}; H = {h}, closure size {}, |Φ| = {}",
            h.codim(),
            t - 1,
            lattice.len(),
            phi.len()
        )));
    }

    let word_witnesses = prop
        .words
        .iter()
        .map(|pw| {
            Ok(WordWitness {
                name: pw.name.clone(),
                word: pw.w.to_string(),
                degree: pw.w.degree(),
                lhs: basis(&eval_span(&pw.w, alg, &vec![h.clone(); pw.w.degree()])?),
                image: basis(&pw.image),
                rhs: basis(&pw.rhs),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let target = match (&req.target, req.mode) {
        (Some((name, w)), CharMode::Identity | CharMode::BoundedImage) => {
            let image = eval_span(w, alg, &vec![req.n.clone(); w.degree()])?;
            let lhs = eval_span(w, alg, &vec![h.clone(); w.degree()])?;
            let ceiling = phi.len() * image.rank();
            if req.mode == CharMode::Identity && !lhs.is_zero() {
                return Err(Error::TheoremViolation(format!(
                    "identity {name} vanishes on N but not on H = {h}"
                )));
            }
            if lhs.rank() > ceiling {
                return Err(Error::TheoremViolation(format!(
                    "dim {name}(H, …, H) = {} exceeds |Φ| · dim {name}(N, …, N) = {ceiling}",
                    lhs.rank()
                )));
            }
            Some(TargetWitness {
                name: name.clone(),
                word: w.to_string(),
                image_dim: image.rank(),
                lhs_dim: lhs.rank(),
                ceiling,
                vanishes: lhs.is_zero(),
            })
        }
        _ => None,
    };

    let h_index = lattice.index_of(&h).expect("H comes from the closure");
    let steps = lattice.derivation(h_index);
    let position = |i: usize| steps.iter().position(|&s| s == i).expect("operands precede results");
    let derivation = steps
        .iter()
        .map(|&i| DerivationEntry {
            step: match lattice.provenance(i) {
                Provenance::Seed(s) => DerivationStep::Orbit { index: s },
                Provenance::Sum(a, b) => DerivationStep::Sum {
                    left: position(a),
                    right: position(b),
                },
                Provenance::Meet(a, b) => DerivationStep::Meet {
                    left: position(a),
                    right: position(b),
                },
            },
            basis: basis(&lattice.elements()[i]),
        })
        .collect();

    let certificate = CharSubspaceCertificate {
        field: f.p(),
        dimension: d,
        mode: req.mode,
        t,
        n: basis(&req.n),
        codim_n,
        h: basis(&h),
        codim_h: h.codim(),
        bound,
        f_trace: f_trace(t as u32 - 1, codim_n as u64)?,
        generators: matrices(&req.generators),
        phi_size: phi.len(),
        orbit: orbit
            .iter()
            .map(|(s, k)| OrbitEntry {
                basis: basis(s),
                path: phi.paths()[*k].clone(),
            })
            .collect(),
        closure_size: lattice.len(),
        invariant_count: invariant.len(),
        qualifying_count: qualifying.len(),
        derivation,
        words: word_witnesses,
        invariance: invariance_witnesses(&h, &req.generators)?,
        target,
        notes: vec![
            "invariance: g(H) <= H for every generator g, hence for all of Φ".into(),
            "image sums use the full Φ-sum, the most permissive finite sum of images".into(),
            "H has least codimension among qualifying invariant elements of the complete closure; ties broken by least canonical basis".into(),
        ],
    };
    Ok(CharSubspaceOutcome { h, phi, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::field::FieldPrime;
    use crate::morphisms::{gl_generators, validate_morphism, MorphismKind};
    use crate::subspace::Row;

    fn gf(p: u64) -> FieldPrime {
        FieldPrime::new(p).unwrap()
    }

    fn span(p: u64, rows: &[&[u64]]) -> Subspace {
        let d = rows[0].len();
        let rows: Vec<Row> = rows.iter().map(|r| r.to_vec()).collect();
        Subspace::span(gf(p), d, &rows).unwrap()
    }

    fn tri2() -> (StructureAlgebra, Vec<Morphism>) {
        let tri = corpus::upper_triangular_2();
        let phi = validate_morphism(&tri, &corpus::tri2_conjugation(), MorphismKind::Automorphism).unwrap();
        (tri, vec![phi])
    }

    #[test]
    fn worked_example_general() {
        let (tri, gens) = tri2();
        let req = CharSubspaceRequest::new(tri, span(2, &[&[1, 0, 0]]), gens, 2);
        let out = find_characteristic_subspace(&req).unwrap();
        assert_eq!(out.h, span(2, &[&[1, 0, 0], &[0, 0, 1]]));
        let c = &out.certificate;
        assert_eq!((c.codim_h, c.bound, c.closure_size, c.invariant_count), (1, 6, 4, 2));
        assert_eq!(c.f_trace, vec![2, 6]);
        assert_eq!(c.words.len(), 3);
    }

    #[test]
    fn worked_example_with_commutator() {
        let (tri, gens) = tri2();
        let comm = MultilinearElement::commutator(gf(2));
        let req =
            CharSubspaceRequest::new(tri, span(2, &[&[1, 0, 0]]), gens, 2).with_words(vec![("comm".into(), comm)]);
        let out = find_characteristic_subspace(&req).unwrap();
        assert!(out.h.is_zero());
        assert_eq!(out.certificate.codim_h, 3);
    }

    #[test]
    fn worked_example_t1() {
        let (tri, gens) = tri2();
        let req = CharSubspaceRequest::new(tri, span(2, &[&[1, 0, 0]]), gens, 1);
        let out = find_characteristic_subspace(&req).unwrap();
        assert_eq!(out.h, span(2, &[&[1, 0, 0], &[0, 0, 1]]));
        assert_eq!(out.certificate.bound, 2);
    }

    #[test]
    fn property_p_examples() {
        let (tri, gens) = tri2();
        let f = gf(2);
        let n = span(2, &[&[1, 0, 0]]);
        let phi = closure(f, 3, &gens, 10).unwrap();
        let mut words: Vec<(String, MultilinearElement)> = Vec::new();
        for k in 1..=2 {
            for m in crate::words::enumerate_monomials(k).unwrap() {
                words.push((m.to_string(), MultilinearElement::from_monomial(f, m).unwrap()));
            }
        }
        let p = PropertyP::new(&tri, &n, &phi, 2, &words).unwrap();
        assert!(p.holds(&[n.clone(), n.clone()]).unwrap());
        let h = span(2, &[&[1, 0, 0], &[0, 0, 1]]);
        assert!(p.holds(&[h.clone(), h.clone()]).unwrap());
        words.push(("comm".into(), MultilinearElement::commutator(f)));
        let p = PropertyP::new(&tri, &n, &phi, 2, &words).unwrap();
        assert!(!p.holds(&[h.clone(), h.clone()]).unwrap());
        assert_eq!(p.first_failure(&h).unwrap().as_deref(), Some("comm"));
    }

    #[test]
    fn zero_algebra_with_gl() {
        let f = gf(2);
        let zero = StructureAlgebra::zero(f, 3);
        let gens: Vec<Morphism> = gl_generators(f, 3)
            .iter()
            .map(|m| validate_morphism(&zero, m, MorphismKind::Automorphism).unwrap())
            .collect();
        let req = CharSubspaceRequest::new(zero, span(2, &[&[1, 0, 0], &[0, 1, 0]]), gens, 2);
        let out = find_characteristic_subspace(&req).unwrap();
        assert!(out.h.is_full());
        assert_eq!(out.certificate.bound, 2);
        assert_eq!(out.certificate.phi_size, 168);
        assert_eq!(out.certificate.orbit.len(), 7);
    }

    #[test]
    fn identity_mode() {
        let dual = corpus::dual_numbers();
        let f = gf(2);
        let eps = span(2, &[&[0, 1]]);
        let req = CharSubspaceRequest::new(dual.clone(), eps.clone(), vec![], 2)
            .with_t(None)
            .with_target(CharMode::Identity, "prod", MultilinearElement::product(f));
        let out = find_characteristic_subspace(&req).unwrap();
        assert_eq!(out.h, eps);
        assert_eq!((out.certificate.codim_h, out.certificate.bound), (1, 2));
        assert!(out.certificate.target.as_ref().unwrap().vanishes);

        let (tri, gens) = tri2();
        let req = CharSubspaceRequest::new(tri.clone(), span(2, &[&[1, 0, 0]]), gens.clone(), 2).with_target(
            CharMode::Identity,
            "comm",
            MultilinearElement::commutator(f),
        );
        let out = find_characteristic_subspace(&req).unwrap();
        assert!(out.h.is_zero());
        assert_eq!((out.certificate.codim_h, out.certificate.bound), (3, 6));

        let req = CharSubspaceRequest::new(tri, span(2, &[&[1, 0, 0]]), gens, 2).with_target(
            CharMode::Identity,
            "prod",
            MultilinearElement::product(f),
        );
        assert!(matches!(find_characteristic_subspace(&req), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn bounded_image_mode() {
        let (tri, gens) = tri2();
        let f = gf(2);
        let req = CharSubspaceRequest::new(tri.clone(), span(2, &[&[1, 0, 0]]), gens, 2).with_target(
            CharMode::BoundedImage,
            "prod",
            MultilinearElement::product(f),
        );
        let out = find_characteristic_subspace(&req).unwrap();
        assert_eq!(out.h, span(2, &[&[1, 0, 0], &[0, 0, 1]]));
        let t = out.certificate.target.unwrap();
        assert_eq!((t.image_dim, t.lhs_dim, t.ceiling), (1, 2, 2));

        let req = CharSubspaceRequest::new(tri, span(2, &[&[1, 0, 0]]), vec![], 2).with_target(
            CharMode::BoundedImage,
            "prod",
            MultilinearElement::product(f),
        );
        let out = find_characteristic_subspace(&req).unwrap();
        assert_eq!(out.h, span(2, &[&[1, 0, 0]]));
        let t = out.certificate.target.unwrap();
        assert!(t.lhs_dim <= t.image_dim);
    }

    #[test]
    fn request_errors() {
        let (tri, gens) = tri2();
        let n = span(2, &[&[1, 0, 0]]);
        let req = CharSubspaceRequest::new(tri.clone(), n.clone(), gens.clone(), 2).with_t(None);
        assert!(matches!(
            find_characteristic_subspace(&req),
            Err(Error::InvalidRequest(_))
        ));
        let mut req = CharSubspaceRequest::new(tri.clone(), n.clone(), gens.clone(), 2);
        req.closure_cap = 2;
        assert!(matches!(
            find_characteristic_subspace(&req),
            Err(Error::ClosureCap { .. })
        ));
        let endo = validate_morphism(&tri, &corpus::tri2_conjugation(), MorphismKind::Endomorphism).unwrap();
        let req = CharSubspaceRequest::new(tri, n, vec![endo], 2);
        assert_eq!(find_characteristic_subspace(&req).unwrap_err(), Error::NotAutomorphisms);
    }
}
