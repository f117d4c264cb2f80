//! Random instances shared by the integration tests and the acceptance harness.
#![allow(dead_code)]

use charsub::algebra::{Flavor, StructureAlgebra};
use charsub::corpus;
use charsub::field::FieldPrime;
use charsub::lattice::sublattice_closure;
use charsub::morphisms::{closure, gl_generators, validate_morphism, Morphism, MorphismKind, MorphismSet};
use charsub::subspace::{Row, Subspace};
use charsub::words::MultilinearElement;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn gf(p: u64) -> FieldPrime {
    FieldPrime::new(p).unwrap()
}

pub fn random_vector<R: Rng>(f: FieldPrime, d: usize, rng: &mut R) -> Row {
    (0..d).map(|_| rng.gen_range(0..f.p())).collect()
}

/// A uniformly chosen spanning set of the requested rank (rejection sampling).
pub fn random_subspace<R: Rng>(f: FieldPrime, d: usize, rank: usize, rng: &mut R) -> Subspace {
    loop {
        let rows: Vec<Row> = (0..rank).map(|_| random_vector(f, d, rng)).collect();
        let s = Subspace::span(f, d, &rows).unwrap();
        if s.rank() == rank {
            return s;
        }
    }
}

fn identity(d: usize) -> Vec<Row> {
    (0..d).map(|i| (0..d).map(|j| u64::from(i == j)).collect()).collect()
}

/// Lower unitriangular: fixes the flag of tails `span{e_m, …, e_{d-1}}`.
fn random_unitriangular<R: Rng>(f: FieldPrime, d: usize, rng: &mut R) -> Vec<Row> {
    let mut m = identity(d);
    for (i, row) in m.iter_mut().enumerate() {
        for x in row.iter_mut().take(i) {
            *x = rng.gen_range(0..f.p());
        }
    }
    m
}

fn random_diagonal<R: Rng>(f: FieldPrime, d: usize, rng: &mut R) -> Vec<Row> {
    let mut m = identity(d);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = rng.gen_range(1..f.p());
    }
    m
}

fn random_permutation<R: Rng>(d: usize, rng: &mut R) -> Vec<Row> {
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    let mut m = vec![vec![0; d]; d];
    for (j, &i) in perm.iter().enumerate() {
        m[i][j] = 1;
    }
    m
}

/// A random instance: an algebra together with automorphism generators whose closure has at most `max_phi` elements.
#[derive(Clone, Debug)]
pub struct Instance {
    pub algebra: StructureAlgebra,
    pub matrices: Vec<Vec<Row>>,
    pub generators: Vec<Morphism>,
    pub phi: MorphismSet,
    /// Products only land at or after both factors' indices, so the tails `span{e_m, …}` are ideals.
    pub triangular: bool,
}

/// Picks a small group, then averages a random product over it so every group element is an automorphism.
pub fn random_instance<R: Rng>(f: FieldPrime, d: usize, max_phi: usize, triangular: bool, rng: &mut R) -> Instance {
    loop {
        let count = rng.gen_range(1..=2);
        let mats: Vec<Vec<Row>> = (0..count)
            .map(|_| match (triangular, rng.gen_range(0..3)) {
                (true, 0) | (false, 0) => random_unitriangular(f, d, rng),
                (_, 1) => random_diagonal(f, d, rng),
                (true, _) => random_unitriangular(f, d, rng),
                (false, _) => random_permutation(d, rng),
            })
            .collect();
        let zero = StructureAlgebra::zero(f, d);
        let gens: Vec<Morphism> = mats
            .iter()
            .map(|m| validate_morphism(&zero, m, MorphismKind::Automorphism).unwrap())
            .collect();
        let Ok(group) = closure(f, d, &gens, max_phi) else {
            continue;
        };

        let density = rng.gen_range(0.2..0.8);
        let mut mu = vec![vec![vec![0u64; d]; d]; d];
        for (i, row) in mu.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                for (k, c) in cell.iter_mut().enumerate() {
                    if (!triangular || k >= i.max(j)) && rng.gen_bool(density) {
                        *c = rng.gen_range(1..f.p());
                    }
                }
            }
        }
        let base = StructureAlgebra::from_products(f, d, Flavor::General, |i, j| mu[i][j].clone()).unwrap();
        // Reynolds average: μ'(x, y) = Σ_h h μ(h⁻¹ x, h⁻¹ y).
        let inverses: Vec<Vec<Row>> = group
            .elements()
            .iter()
            .map(|h| {
                group
                    .elements()
                    .iter()
                    .find(|g| g.compose(h).is_identity())
                    .expect("finite group")
                    .matrix()
                    .to_vec()
            })
            .collect();
        let algebra = StructureAlgebra::from_products(f, d, Flavor::General, |i, j| {
            let mut acc = vec![0; d];
            for (h, hinv) in group.elements().iter().zip(&inverses) {
                let x: Row = hinv.iter().map(|r| r[i]).collect();
                let y: Row = hinv.iter().map(|r| r[j]).collect();
                let v = h.apply_vector(&base.multiply(&x, &y).unwrap());
                f.add_scaled(&mut acc, &v, 1);
            }
            acc
        })
        .unwrap();
        let generators: Vec<Morphism> = mats
            .iter()
            .map(|m| validate_morphism(&algebra, m, MorphismKind::Automorphism).expect("averaged product is invariant"))
            .collect();
        let phi = closure(f, d, &generators, max_phi).unwrap();
        return Instance {
            algebra,
            matrices: mats,
            generators,
            phi,
            triangular,
        };
    }
}

/// A named corpus algebra with automorphisms, seed subspaces and words of interest.
#[derive(Clone, Debug)]
pub struct Case {
    pub name: &'static str,
    pub algebra: StructureAlgebra,
    pub automorphisms: Vec<Vec<Row>>,
    pub seeds: Vec<Subspace>,
    pub words: Vec<MultilinearElement>,
}

impl Case {
    pub fn generators(&self) -> Vec<Morphism> {
        self.automorphisms
            .iter()
            .map(|m| validate_morphism(&self.algebra, m, MorphismKind::Automorphism).expect("corpus automorphism"))
            .collect()
    }

    pub fn phi(&self) -> MorphismSet {
        let a = &self.algebra;
        closure(a.field(), a.dim(), &self.generators(), 10_000).unwrap()
    }

    /// The sublattice generated by `0`, `G` and the orbits of the seeds.
    pub fn lattice(&self, cap: usize) -> Vec<Subspace> {
        let phi = self.phi();
        let mut seed = vec![self.algebra.zero_subspace(), self.algebra.full()];
        for s in &self.seeds {
            seed.extend(phi.orbit(s).unwrap());
        }
        sublattice_closure(&seed, cap).unwrap().elements().to_vec()
    }
}

fn span(p: u64, d: usize, rows: &[&[u64]]) -> Subspace {
    let rows: Vec<Row> = rows.iter().map(|r| r.to_vec()).collect();
    Subspace::span(gf(p), d, &rows).unwrap()
}

fn unit(n: usize, i: usize, j: usize) -> Vec<Row> {
    let mut g: Vec<Row> = identity(n);
    g[i][j] = 1;
    g
}

pub fn corpus_cases() -> Vec<Case> {
    let comm = |p| MultilinearElement::commutator(gf(p));
    let prod = |p| MultilinearElement::product(gf(p));
    vec![
        Case {
            name: "tri2",
            algebra: corpus::upper_triangular_2(),
            automorphisms: vec![corpus::tri2_conjugation()],
            seeds: vec![span(2, 3, &[&[1, 0, 0]]), span(2, 3, &[&[0, 0, 1]])],
            words: vec![comm(2), prod(2)],
        },
        Case {
            name: "tri3",
            algebra: corpus::upper_triangular(2, 3),
            automorphisms: vec![
                corpus::triangular_conjugation(2, 3, &unit(3, 0, 1)),
                corpus::triangular_conjugation(2, 3, &unit(3, 1, 2)),
            ],
            seeds: vec![span(2, 6, &[&[1, 0, 0, 0, 0, 0]]), span(2, 6, &[&[0, 0, 0, 0, 0, 1]])],
            words: vec![comm(2)],
        },
        Case {
            name: "strict3",
            algebra: corpus::strictly_upper_3(),
            automorphisms: corpus::strict3_automorphisms(),
            seeds: vec![span(2, 3, &[&[1, 0, 0]]), span(2, 3, &[&[0, 1, 0]])],
            words: vec![comm(2), prod(2)],
        },
        Case {
            name: "dual",
            algebra: corpus::dual_numbers(),
            automorphisms: vec![identity(2)],
            seeds: vec![span(2, 2, &[&[0, 1]])],
            words: vec![prod(2)],
        },
        Case {
            name: "zero3",
            algebra: StructureAlgebra::zero(gf(2), 3),
            automorphisms: gl_generators(gf(2), 3),
            seeds: vec![span(2, 3, &[&[1, 0, 0]])],
            words: vec![prod(2)],
        },
        Case {
            name: "heis",
            algebra: corpus::heisenberg_gf5(),
            automorphisms: corpus::heisenberg_automorphisms(),
            seeds: vec![span(5, 3, &[&[1, 0, 0]])],
            words: vec![prod(5)],
        },
        Case {
            name: "sl2",
            algebra: corpus::sl2_gf5(),
            automorphisms: corpus::sl2_automorphisms(),
            seeds: vec![span(5, 3, &[&[1, 0, 0]])],
            words: vec![prod(5)],
        },
        Case {
            name: "borel",
            algebra: corpus::borel_gf5(),
            automorphisms: corpus::borel_automorphisms(),
            seeds: vec![span(5, 2, &[&[0, 1]])],
            words: vec![prod(5)],
        },
    ]
}
