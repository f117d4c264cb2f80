//! The two search engines: characteristic subspaces and characteristic ideal series.

pub mod char_subspace;
pub mod series;

use crate::algebra::StructureAlgebra;
use crate::certificate::{Basis, InvarianceWitness, Matrix};
use crate::error::{Error, Result};
use crate::morphisms::{Morphism, MorphismKind};
use crate::subspace::Subspace;
use crate::words::MultilinearElement;

pub(crate) fn require_automorphisms(generators: &[Morphism]) -> Result<()> {
    if generators.iter().any(|g| g.kind() != MorphismKind::Automorphism) {
        return Err(Error::NotAutomorphisms);
    }
    Ok(())
}

pub(crate) fn basis(v: &Subspace) -> Basis {
    v.basis().to_vec()
}

pub(crate) fn matrices(generators: &[Morphism]) -> Vec<Matrix> {
    generators.iter().map(|g| g.matrix().to_vec()).collect()
}

pub(crate) fn invariance_witnesses(v: &Subspace, generators: &[Morphism]) -> Result<Vec<InvarianceWitness>> {
    generators
        .iter()
        .enumerate()
        .map(|(i, g)| {
            Ok(InvarianceWitness {
                generator: i,
                image: basis(&g.apply(v)?),
            })
        })
        .collect()
}

/// Canonical order for candidates: smaller codimension first, then lexicographically least basis.
pub(crate) fn candidate_order(a: &Subspace, b: &Subspace) -> std::cmp::Ordering {
    a.codim().cmp(&b.codim()).then_with(|| a.basis().cmp(b.basis()))
}

/// A basis tuple of `N` on which `w` does not vanish.
pub(crate) fn nonvanishing_witness(alg: &StructureAlgebra, w: &MultilinearElement, n: &Subspace) -> Option<String> {
    use itertools::Itertools;
    (0..w.degree())
        .map(|_| n.basis().iter())
        .multi_cartesian_product()
        .find_map(|tuple| {
            let args: Vec<Vec<u64>> = tuple.into_iter().cloned().collect();
            let value = w.eval(alg, &args);
            value.iter().any(|&x| x != 0).then(|| format!("w{args:?} = {value:?}"))
        })
}
