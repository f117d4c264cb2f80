//! Validated endomorphisms and automorphisms, their closure under composition, and their action on subspaces.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::algebra::StructureAlgebra;
use crate::error::{Error, Result};
use crate::field::FieldPrime;
use crate::subspace::{rref_in_place, Row, Subspace};

pub const DEFAULT_MORPHISM_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MorphismKind {
    Endomorphism,
    Automorphism,
}

/// A linear map stored as a row-major `d×d` matrix whose column `j` is the image of `e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    field: FieldPrime,
    matrix: Vec<Row>,
    kind: MorphismKind,
}

fn mat_mul(f: FieldPrime, a: &[Row], b: &[Row]) -> Vec<Row> {
    let d = a.len();
    (0..d)
        .map(|r| {
            let mut row = vec![0; d];
            for (k, &x) in a[r].iter().enumerate() {
                f.add_scaled(&mut row, &b[k], x);
            }
            row
        })
        .collect()
}

fn mat_vec(f: FieldPrime, m: &[Row], v: &[u64]) -> Row {
    m.iter()
        .map(|row| row.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
        .collect()
}

fn rank(f: FieldPrime, m: &[Row]) -> usize {
    let mut work = m.to_vec();
    let n = m.first().map_or(0, Vec::len);
    rref_in_place(f, &mut work, n).len()
}

/// Checks that `matrix` is multiplicative on `alg` (and invertible for automorphisms).
pub fn validate_morphism(alg: &StructureAlgebra, matrix: &[Row], kind: MorphismKind) -> Result<Morphism> {
    let d = alg.dim();
    let f = alg.field();
    if matrix.len() != d || matrix.iter().any(|r| r.len() != d) {
        return Err(Error::MatrixShape { dim: d });
    }
    let matrix: Vec<Row> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| f.reduce(x)).collect())
        .collect();
    let images: Vec<Row> = (0..d).map(|j| matrix.iter().map(|r| r[j]).collect()).collect();
    for i in 0..d {
        for j in 0..d {
            let lhs = mat_vec(f, &matrix, alg.basis_product(i, j));
            let rhs = alg.mul(&images[i], &images[j]);
            if lhs != rhs {
                return Err(Error::NotMultiplicative { i, j });
            }
        }
    }
    if kind == MorphismKind::Automorphism && rank(f, &matrix) < d {
        return Err(Error::NotInvertible);
    }
    Ok(Morphism { field: f, matrix, kind })
}

impl Morphism {
    pub fn identity(field: FieldPrime, dim: usize) -> Self {
        let matrix = Subspace::full(field, dim).basis().to_vec();
        Morphism {
            field,
            matrix,
            kind: MorphismKind::Automorphism,
        }
    }

    pub fn matrix(&self) -> &[Row] {
        &self.matrix
    }

    pub fn kind(&self) -> MorphismKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix
            .iter()
            .enumerate()
            .all(|(r, row)| row.iter().enumerate().all(|(c, &x)| x == u64::from(r == c)))
    }

    pub fn apply_vector(&self, v: &[u64]) -> Row {
        mat_vec(self.field, &self.matrix, v)
    }

    /// `φ(V)`, the canonical span of the images of the basis rows.
    pub fn apply(&self, v: &Subspace) -> Result<Subspace> {
        if v.ambient_dim() != self.dim() || v.field() != self.field {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.ambient_dim(),
            });
        }
        let rows: Vec<Row> = v.basis().iter().map(|b| self.apply_vector(b)).collect();
        Subspace::span(self.field, self.dim(), &rows)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Morphism) -> Morphism {
        let kind = if self.kind == MorphismKind::Automorphism && other.kind == MorphismKind::Automorphism {
            MorphismKind::Automorphism
        } else {
            MorphismKind::Endomorphism
        };
        Morphism {
            field: self.field,
            matrix: mat_mul(self.field, &self.matrix, &other.matrix),
            kind,
        }
    }
}

/// A finite set of morphisms closed under composition.
///
/// Each element records a generator path: element `k` equals
/// `g[path[m-1]] ∘ … ∘ g[path[0]]`, the empty path being the identity.
#[derive(Clone, Debug)]
pub struct MorphismSet {
    generators: Vec<Morphism>,
    elements: Vec<Morphism>,
    paths: Vec<Vec<usize>>,
    contains_identity: bool,
}

/// Breadth-first composition closure of `generators`; the identity is included when every generator is an automorphism.
///
/// With no generators the result is `{id}` in dimension `dim`.
pub fn closure(field: FieldPrime, dim: usize, generators: &[Morphism], cap: usize) -> Result<MorphismSet> {
    for g in generators {
        if g.dim() != dim || g.field != field {
            return Err(Error::MatrixShape { dim });
        }
    }
    let all_auto = generators.iter().all(|g| g.kind == MorphismKind::Automorphism);
    let mut set = MorphismSet {
        generators: generators.to_vec(),
        elements: Vec::new(),
        paths: Vec::new(),
        contains_identity: false,
    };
    let mut seen: HashSet<Vec<Row>> = HashSet::new();
    let mut push = |set: &mut MorphismSet, m: Morphism, path: Vec<usize>| -> Result<()> {
        if seen.contains(&m.matrix) {
            return Ok(());
        }
        if set.elements.len() == cap {
            return Err(Error::MorphismCap {
                cap,
                reached: set.elements.len() + 1,
            });
        }
        seen.insert(m.matrix.clone());
        set.elements.push(m);
        set.paths.push(path);
        Ok(())
    };
    if all_auto {
        push(&mut set, Morphism::identity(field, dim), Vec::new())?;
    }
    for (gi, g) in generators.iter().enumerate() {
        push(&mut set, g.clone(), vec![gi])?;
    }
    let mut next = 0;
    while next < set.elements.len() {
        let x = next;
        next += 1;
        for (gi, g) in generators.iter().enumerate() {
            let m = g.compose(&set.elements[x]);
            let mut path = set.paths[x].clone();
            path.push(gi);
            push(&mut set, m, path)?;
        }
    }
    set.contains_identity = set.elements.iter().any(Morphism::is_identity);
    Ok(set)
}

impl MorphismSet {
    pub fn generators(&self) -> &[Morphism] {
        &self.generators
    }

    pub fn elements(&self) -> &[Morphism] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn paths(&self) -> &[Vec<usize>] {
        &self.paths
    }

    pub fn contains_identity(&self) -> bool {
        self.contains_identity
    }

    pub fn all_automorphisms(&self) -> bool {
        self.elements.iter().all(|m| m.kind == MorphismKind::Automorphism)
    }

    pub fn contains(&self, m: &Morphism) -> bool {
        self.elements.iter().any(|e| e.matrix == m.matrix)
    }

    /// Distinct images `φ(V)` in element order, each with the index of its first witness.
    pub fn orbit_with_witnesses(&self, v: &Subspace) -> Result<Vec<(Subspace, usize)>> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for (k, m) in self.elements.iter().enumerate() {
            let img = m.apply(v)?;
            if seen.insert(img.clone()) {
                out.push((img, k));
            }
        }
        Ok(out)
    }

    pub fn orbit(&self, v: &Subspace) -> Result<Vec<Subspace>> {
        Ok(self.orbit_with_witnesses(v)?.into_iter().map(|(s, _)| s).collect())
    }
}

/// Generators of `GL(d, p)`: the transvections `I + E_ij` and `diag(g, 1, …, 1)` for a primitive root `g`.
pub fn gl_generators(field: FieldPrime, d: usize) -> Vec<Vec<Row>> {
    let id = Subspace::full(field, d).basis().to_vec();
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let mut m = id.clone();
                m[i][j] = 1;
                out.push(m);
            }
        }
    }
    let g = field.primitive_root();
    if g != 1 && d > 0 {
        let mut m = id;
        m[0][0] = g;
        out.push(m);
    }
    out
}
