//! Finite sublattices of the subspace lattice, Φ-invariant elements, codimension laws and the bound `f^k`.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::morphisms::MorphismSet;
use crate::subspace::Subspace;

pub const DEFAULT_CLOSURE_CAP: usize = 50_000;

/// How an element entered a closure; indices refer to earlier elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Seed(usize),
    Sum(usize, usize),
    Meet(usize, usize),
}

/// The smallest sum- and intersection-closed set containing a seed, or a prefix of it when the cap was hit.
#[derive(Clone, Debug)]
pub struct SublatticeClosure {
    seed: Vec<Subspace>,
    elements: Vec<Subspace>,
    provenance: Vec<Provenance>,
    index: HashMap<Subspace, usize>,
    cap: usize,
    complete: bool,
}

/// Fixed-point closure of `seed` under pairwise sum and intersection.
///
/// Elements are inserted in a deterministic order: seeds first, then for each
/// element `k` in turn its sums and meets with every earlier element. Hitting
/// `cap` yields a partial closure with `complete == false`.
pub fn sublattice_closure(seed: &[Subspace], cap: usize) -> Result<SublatticeClosure> {
    let Some(first) = seed.first() else {
        return Err(Error::NotFound("sublattice closure needs a nonempty seed".into()));
    };
    for s in seed {
        s.check_compatible(first)?;
    }
    let mut c = SublatticeClosure {
        seed: seed.to_vec(),
        elements: Vec::new(),
        provenance: Vec::new(),
        index: HashMap::new(),
        cap,
        complete: true,
    };
    for (i, s) in seed.iter().enumerate() {
        if !c.insert(s.clone(), Provenance::Seed(i)) {
            c.complete = false;
            return Ok(c);
        }
    }
    let mut k = 0;
    while k < c.elements.len() {
        for i in 0..k {
            let s = c.elements[i].sum(&c.elements[k])?;
            let m = c.elements[i].intersect(&c.elements[k])?;
            if !c.insert(s, Provenance::Sum(i, k)) || !c.insert(m, Provenance::Meet(i, k)) {
                c.complete = false;
                return Ok(c);
            }
        }
        k += 1;
    }
    Ok(c)
}

impl SublatticeClosure {
    /// Returns false when `v` is new but the cap is already reached.
    fn insert(&mut self, v: Subspace, how: Provenance) -> bool {
        if self.index.contains_key(&v) {
            return true;
        }
        if self.elements.len() >= self.cap {
            return false;
        }
        self.index.insert(v.clone(), self.elements.len());
        self.elements.push(v);
        self.provenance.push(how);
        true
    }

    pub fn seed(&self) -> &[Subspace] {
        &self.seed
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

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn index_of(&self, v: &Subspace) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn provenance(&self, i: usize) -> Provenance {
        self.provenance[i]
    }

    /// Indices needed to rebuild element `target` from seeds, in insertion order.
    pub fn derivation(&self, target: usize) -> Vec<usize> {
        let mut needed = vec![false; target + 1];
        needed[target] = true;
        for i in (0..=target).rev() {
            if !needed[i] {
                continue;
            }
            if let Provenance::Sum(a, b) | Provenance::Meet(a, b) = self.provenance[i] {
                needed[a] = true;
                needed[b] = true;
            }
        }
        (0..=target).filter(|&i| needed[i]).collect()
    }

    /// Length (number of elements) of a longest strictly ascending chain in the closure.
    pub fn longest_chain(&self) -> Result<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.elements[i].rank());
        let mut best = vec![1usize; order.len()];
        for a in 0..order.len() {
            for b in 0..a {
                let (lo, hi) = (&self.elements[order[b]], &self.elements[order[a]]);
                if lo.rank() < hi.rank() && lo.leq(hi)? {
                    best[a] = best[a].max(best[b] + 1);
                }
            }
        }
        Ok(best.into_iter().max().unwrap_or(0))
    }
}

/// Elements `V` of a complete closure with `φ(V) ≤ V` for every `φ ∈ Φ`.
///
/// Testing the generators suffices: if each generator maps `V` into `V`, so
/// does every composite of generators.
pub fn invariant_elements(closure: &SublatticeClosure, phi: &MorphismSet) -> Result<Vec<Subspace>> {
    if !closure.is_complete() {
        return Err(Error::IncompleteClosure);
    }
    let mut out = Vec::new();
    for v in closure.elements() {
        if is_invariant(v, phi)? {
            out.push(v.clone());
        }
    }
    Ok(out)
}

pub fn is_invariant(v: &Subspace, phi: &MorphismSet) -> Result<bool> {
    for g in phi.generators() {
        if !g.apply(v)?.leq(v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Σ_{φ ∈ Φ} φ(V)`.
pub fn phi_sum(v: &Subspace, phi: &MorphismSet) -> Result<Subspace> {
    let mut acc = Subspace::zero(v.field(), v.ambient_dim());
    for m in phi.elements() {
        acc = acc.sum(&m.apply(v)?)?;
        if acc.is_full() {
            break;
        }
    }
    Ok(acc)
}

/// `∩_{φ ∈ Φ} φ(V)`.
pub fn phi_core(v: &Subspace, phi: &MorphismSet) -> Result<Subspace> {
    let mut acc = Subspace::full(v.field(), v.ambient_dim());
    for m in phi.elements() {
        acc = acc.intersect(&m.apply(v)?)?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// `f^k(x)` for `f(x) = x(x + 1)`.
pub fn f_iterate(k: u32, x: u64) -> Result<u64> {
    let mut v = x;
    for i in 0..k {
        v = v
            .checked_add(1)
            .and_then(|s| v.checked_mul(s))
            .ok_or_else(|| Error::Overflow(format!("f^{}({x}) exceeds u64", i + 1)))?;
    }
    Ok(v)
}

/// `[f^0(x), f^1(x), …, f^k(x)]`.
pub fn f_trace(k: u32, x: u64) -> Result<Vec<u64>> {
    (0..=k).map(|i| f_iterate(i, x)).collect()
}

/// Greedily keeps each member that enlarges the running sum; the kept members sum to the family's sum.
pub fn greedy_sup_selection(family: &[Subspace]) -> Result<Vec<Subspace>> {
    let Some(first) = family.first() else {
        return Err(Error::NotFound("greedy selection needs a nonempty family".into()));
    };
    let mut acc = Subspace::zero(first.field(), first.ambient_dim());
    let mut picked = Vec::new();
    for v in family {
        let next = acc.sum(v)?;
        if next != acc {
            acc = next;
            picked.push(v.clone());
        }
    }
    if picked.is_empty() {
        picked.push(first.clone());
    }
    Ok(picked)
}

/// A real-valued codimension on the subspace lattice; `f64::INFINITY` is allowed.
pub trait CodimFunction {
    fn codim(&self, v: &Subspace) -> f64;
}

/// Ordinary subspace codimension.
#[derive(Clone, Copy, Debug, Default)]
pub struct OrdinaryCodim;

impl CodimFunction for OrdinaryCodim {
    fn codim(&self, v: &Subspace) -> f64 {
        v.codim() as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CodimLawReport {
    /// `A ≤ B ⇒ codim A ≥ codim B`.
    pub antitone: Option<String>,
    /// `codim φ(A) ≤ codim A`.
    pub phi_nonincreasing: Option<String>,
    /// `codim(A ∩ B) ≤ codim A + codim B`.
    pub meet_subadditive: Option<String>,
    /// Every family's sum is the sum of at most `max codim + 1` members.
    pub sup_selection: Option<String>,
    pub pairs_checked: usize,
    pub families_checked: usize,
}

impl CodimLawReport {
    pub fn passed(&self) -> bool {
        self.antitone.is_none()
            && self.phi_nonincreasing.is_none()
            && self.meet_subadditive.is_none()
            && self.sup_selection.is_none()
    }
}

/// Checks the four codimension laws on all pairs of `elements` and on `families` random subfamilies.
pub fn check_codim_laws<C: CodimFunction, R: Rng>(
    codim: &C,
    elements: &[Subspace],
    phi: &MorphismSet,
    families: usize,
    rng: &mut R,
) -> Result<CodimLawReport> {
    let mut report = CodimLawReport {
        antitone: None,
        phi_nonincreasing: None,
        meet_subadditive: None,
        sup_selection: None,
        pairs_checked: 0,
        families_checked: 0,
    };
    for a in elements {
        let ca = codim.codim(a);
        for m in phi.elements() {
            let ci = codim.codim(&m.apply(a)?);
            if ci > ca && report.phi_nonincreasing.is_none() {
                report.phi_nonincreasing = Some(format!("codim φ({a}) = {ci} > codim {a} = {ca}"));
            }
        }
        for b in elements {
            report.pairs_checked += 1;
            let cb = codim.codim(b);
            if a.leq(b)? && ca < cb && report.antitone.is_none() {
                report.antitone = Some(format!("{a} ≤ {b} but codim {ca} < {cb}"));
            }
            let cm = codim.codim(&a.intersect(b)?);
            if cm > ca + cb && report.meet_subadditive.is_none() {
                report.meet_subadditive = Some(format!("codim({a} ∩ {b}) = {cm} > {ca} + {cb}"));
            }
        }
    }
    let mut pool = elements.to_vec();
    for trial in 0..families {
        if pool.is_empty() {
            break;
        }
        let family: Vec<Subspace> = if trial == 0 {
            pool.clone()
        } else {
            pool.shuffle(rng);
            let n = rng.gen_range(1..=pool.len());
            pool[..n].to_vec()
        };
        report.families_checked += 1;
        let picked = greedy_sup_selection(&family)?;
        let max = family.iter().map(|v| codim.codim(v)).fold(0.0, f64::max);
        let total = family
            .iter()
            .try_fold(Subspace::zero(family[0].field(), family[0].ambient_dim()), |acc, v| {
                acc.sum(v)
            })?;
        let picked_sum = picked
            .iter()
            .try_fold(Subspace::zero(family[0].field(), family[0].ambient_dim()), |acc, v| {
                acc.sum(v)
            })?;
        if (picked.len() as f64 > max + 1.0 || picked_sum != total) && report.sup_selection.is_none() {
            report.sup_selection = Some(format!(
                "family of {} needs {} members (max codim {max})",
                family.len(),
                picked.len()
            ));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::StructureAlgebra;
    use crate::corpus;
    use crate::field::FieldPrime;
    use crate::morphisms::{closure, gl_generators, validate_morphism, Morphism, MorphismKind};
    use crate::subspace::{all_subspaces, Row};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn gf(p: u64) -> FieldPrime {
        FieldPrime::new(p).unwrap()
    }

    fn span(p: u64, rows: &[&[u64]]) -> Subspace {
        let d = rows[0].len();
        let rows: Vec<Row> = rows.iter().map(|r| r.to_vec()).collect();
        Subspace::span(gf(p), d, &rows).unwrap()
    }

    fn tri2_phi() -> MorphismSet {
        let tri = corpus::upper_triangular_2();
        let m = validate_morphism(&tri, &corpus::tri2_conjugation(), MorphismKind::Automorphism).unwrap();
        closure(gf(2), 3, &[m], 10).unwrap()
    }

    #[test]
    fn closure_examples() {
        let v = span(2, &[&[1, 0, 1]]);
        let c = sublattice_closure(std::slice::from_ref(&v), 10).unwrap();
        assert_eq!(c.elements(), &[v]);
        assert!(c.is_complete());

        let e1 = span(2, &[&[1, 0, 0]]);
        let e13 = span(2, &[&[1, 0, 1]]);
        let c = sublattice_closure(&[e1.clone(), e13.clone()], 10).unwrap();
        let expected: HashSet<Subspace> = [e1, e13, span(2, &[&[1, 0, 0], &[0, 0, 1]]), Subspace::zero(gf(2), 3)]
            .into_iter()
            .collect();
        assert_eq!(c.elements().iter().cloned().collect::<HashSet<_>>(), expected);
        assert_eq!(c.len(), 4);

        let a = span(2, &[&[1, 0]]);
        let b = span(2, &[&[0, 1]]);
        let c = sublattice_closure(&[a, b], 10).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.elements().contains(&Subspace::full(gf(2), 2)));

        let lines: Vec<Subspace> = all_subspaces(gf(2), 3).into_iter().filter(|s| s.rank() == 1).collect();
        let c = sublattice_closure(&lines, 5).unwrap();
        assert!(!c.is_complete());
        assert_eq!(c.len(), 5);
        assert!(sublattice_closure(&[], 5).is_err());
    }

    #[test]
    fn derivation_rebuilds_elements() {
        let lines: Vec<Subspace> = all_subspaces(gf(2), 3)
            .into_iter()
            .filter(|s| s.rank() == 1)
            .take(3)
            .collect();
        let c = sublattice_closure(&lines, 100).unwrap();
        for t in 0..c.len() {
            let mut built: HashMap<usize, Subspace> = HashMap::new();
            for i in c.derivation(t) {
                let v = match c.provenance(i) {
                    Provenance::Seed(s) => c.seed()[s].clone(),
                    Provenance::Sum(a, b) => built[&a].sum(&built[&b]).unwrap(),
                    Provenance::Meet(a, b) => built[&a].intersect(&built[&b]).unwrap(),
                };
                built.insert(i, v);
            }
            assert_eq!(built[&t], c.elements()[t]);
        }
    }

    #[test]
    fn invariant_element_examples() {
        let phi = tri2_phi();
        let c = sublattice_closure(&[span(2, &[&[1, 0, 0]]), span(2, &[&[1, 0, 1]])], 10).unwrap();
        let inv: HashSet<Subspace> = invariant_elements(&c, &phi).unwrap().into_iter().collect();
        let expected: HashSet<Subspace> = [Subspace::zero(gf(2), 3), span(2, &[&[1, 0, 0], &[0, 0, 1]])]
            .into_iter()
            .collect();
        assert_eq!(inv, expected);

        let id = closure(gf(2), 3, &[Morphism::identity(gf(2), 3)], 1).unwrap();
        assert_eq!(invariant_elements(&c, &id).unwrap().len(), c.len());

        let partial = sublattice_closure(&[span(2, &[&[1, 0, 0]]), span(2, &[&[0, 1, 0]])], 2).unwrap();
        assert_eq!(
            invariant_elements(&partial, &phi).unwrap_err(),
            Error::IncompleteClosure
        );
    }

    #[test]
    fn phi_sum_and_core() {
        let phi = tri2_phi();
        let e1 = span(2, &[&[1, 0, 0]]);
        assert_eq!(phi_sum(&e1, &phi).unwrap(), span(2, &[&[1, 0, 0], &[0, 0, 1]]));
        assert!(phi_core(&e1, &phi).unwrap().is_zero());
        let id = closure(gf(2), 3, &[], 1).unwrap();
        assert_eq!(phi_sum(&e1, &id).unwrap(), e1);
        assert_eq!(phi_core(&e1, &id).unwrap(), e1);
    }

    #[test]
    fn f_iterate_values() {
        assert_eq!(f_iterate(0, 1).unwrap(), 1);
        assert_eq!(f_iterate(1, 1).unwrap(), 2);
        assert_eq!(f_iterate(2, 1).unwrap(), 6);
        assert_eq!(f_iterate(1, 2).unwrap(), 6);
        assert_eq!(f_iterate(2, 2).unwrap(), 42);
        assert_eq!(f_trace(2, 2).unwrap(), vec![2, 6, 42]);
        assert!(matches!(f_iterate(10, 3), Err(Error::Overflow(_))));
    }

    #[test]
    fn greedy_selection_examples() {
        let l = span(2, &[&[1, 1, 0]]);
        assert_eq!(greedy_sup_selection(&vec![l.clone(); 5]).unwrap(), vec![l]);
        let lines: Vec<Subspace> = all_subspaces(gf(2), 3).into_iter().filter(|s| s.rank() == 1).collect();
        assert_eq!(lines.len(), 7);
        let picked = greedy_sup_selection(&lines).unwrap();
        assert!(picked.len() <= 3);
        let total = picked.iter().fold(Subspace::zero(gf(2), 3), |a, v| a.sum(v).unwrap());
        assert!(total.is_full());
        let full = Subspace::full(gf(2), 3);
        assert_eq!(
            greedy_sup_selection(&[full.clone(), lines[0].clone()]).unwrap(),
            vec![full]
        );
    }

    #[test]
    fn codim_laws_on_gl_closure() {
        let f = gf(2);
        let zero = StructureAlgebra::zero(f, 3);
        let gens: Vec<Morphism> = gl_generators(f, 3)
            .iter()
            .map(|m| validate_morphism(&zero, m, MorphismKind::Automorphism).unwrap())
            .collect();
        let gl = closure(f, 3, &gens, 1000).unwrap();
        let c = sublattice_closure(&gl.orbit(&span(2, &[&[1, 0, 0], &[0, 1, 0]])).unwrap(), 1000).unwrap();
        assert_eq!(c.len(), 16);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let report = check_codim_laws(&OrdinaryCodim, c.elements(), &gl, 50, &mut rng).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(c.longest_chain().unwrap() <= 4);
        assert_eq!(c.longest_chain().unwrap(), 4);
    }

    /// Recomputes a closure by naive saturation in a shuffled order.
    fn naive_closure(seed: &[Subspace], rng: &mut ChaCha8Rng) -> HashSet<Subspace> {
        let mut set: HashSet<Subspace> = seed.iter().cloned().collect();
        loop {
            let mut items: Vec<Subspace> = set.iter().cloned().collect();
            items.sort();
            items.shuffle(rng);
            let mut grew = false;
            for a in &items {
                for b in &items {
                    grew |= set.insert(a.sum(b).unwrap());
                    grew |= set.insert(a.intersect(b).unwrap());
                }
            }
            if !grew {
                return set;
            }
        }
    }

    proptest! {
        #[test]
        fn closure_is_minimal_and_closed(picks in proptest::collection::vec(0usize..67, 1..5), seed in 0u64..1000) {
            let subs = all_subspaces(gf(2), 4);
            let seed_set: Vec<Subspace> = picks.iter().map(|&i| subs[i].clone()).collect();
            let c = sublattice_closure(&seed_set, 1000).unwrap();
            prop_assert!(c.is_complete());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let naive = naive_closure(&seed_set, &mut rng);
            prop_assert_eq!(c.elements().iter().cloned().collect::<HashSet<_>>(), naive);
            prop_assert!(c.longest_chain().unwrap() <= 5);
        }

        #[test]
        fn lattice_laws(i in 0usize..67, j in 0usize..67, k in 0usize..67) {
            let subs = all_subspaces(gf(2), 4);
            let (a, b, c) = (&subs[i], &subs[j], &subs[k]);
            prop_assert_eq!(a.sum(b).unwrap(), b.sum(a).unwrap());
            prop_assert_eq!(a.intersect(b).unwrap(), b.intersect(a).unwrap());
            prop_assert_eq!(a.sum(&b.sum(c).unwrap()).unwrap(), a.sum(b).unwrap().sum(c).unwrap());
            prop_assert_eq!(
                a.intersect(&b.intersect(c).unwrap()).unwrap(),
                a.intersect(b).unwrap().intersect(c).unwrap()
            );
            prop_assert_eq!(a.sum(a).unwrap(), a.clone());
            prop_assert_eq!(a.intersect(a).unwrap(), a.clone());
            prop_assert_eq!(a.sum(&a.intersect(b).unwrap()).unwrap(), a.clone());
            prop_assert!(a.intersect(b).unwrap().codim() <= a.codim() + b.codim());
            if a.leq(b).unwrap() {
                prop_assert!(a.codim() >= b.codim());
            }
        }
    }
}
