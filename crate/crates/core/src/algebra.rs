//! Finite-dimensional algebras given by structure constants.
//!
//! The product is `e_i · e_j = Σ_k c[i][j][k] e_k`, extended bilinearly. No
//! associativity is assumed; the [`Flavor`] tag only records which laws the
//! caller claims, and [`StructureAlgebra::validate_flavor`] checks them.
//!
//! Nilpotency here means the split-sum power chain `P_1 = V`,
//! `P_{m+1} = Σ_{i+j=m+1} P_i·P_j` reaches zero. In finite dimension every
//! subalgebra is finitely generated, so this coincides with local nilpotency.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldPrime;
use crate::subspace::{Row, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    General,
    Associative,
    Lie,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlavorLaw {
    Associativity,
    Alternating,
    Anticommutativity,
    Jacobi,
}

impl std::fmt::Display for FlavorLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FlavorLaw::Associativity => "associativity",
            FlavorLaw::Alternating => "alternating law",
            FlavorLaw::Anticommutativity => "anticommutativity",
            FlavorLaw::Jacobi => "Jacobi identity",
        };
        f.write_str(s)
    }
}

/// First violated law, with the basis indices involved and both sides of the failed equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlavorViolation {
    pub law: FlavorLaw,
    pub indices: Vec<usize>,
    pub lhs: Row,
    pub rhs: Row,
}

impl std::fmt::Display for FlavorViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let idx: Vec<String> = self.indices.iter().map(|i| format!("e{i}")).collect();
        write!(
            f,
            "{} violated on basis ({}): {:?} != {:?}",
            self.law,
            idx.join(", "),
            self.lhs,
            self.rhs
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlavorReport {
    Pass,
    Fail(FlavorViolation),
}

impl FlavorReport {
    pub fn passed(&self) -> bool {
        matches!(self, FlavorReport::Pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureAlgebra {
    field: FieldPrime,
    dim: usize,
    flavor: Flavor,
    // table[(i * dim + j) * dim + k] = c[i][j][k]
    table: Vec<u64>,
}

impl StructureAlgebra {
    /// Builds an algebra from sparse `(i, j, k, coeff)` entries; omitted entries are zero.
    pub fn new(field: FieldPrime, dim: usize, entries: &[(usize, usize, usize, u64)], flavor: Flavor) -> Result<Self> {
        let mut table = vec![0; dim * dim * dim];
        let mut seen = vec![false; dim * dim * dim];
        for &(i, j, k, c) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::IndexOutOfRange { i, j, k, dim });
            }
            let at = (i * dim + j) * dim + k;
            if seen[at] {
                return Err(Error::DuplicateEntry { i, j, k });
            }
            seen[at] = true;
            table[at] = field.reduce(c);
        }
        Ok(StructureAlgebra {
            field,
            dim,
            flavor,
            table,
        })
    }

    /// Builds an algebra from a function giving each basis product.
    pub fn from_products(
        field: FieldPrime,
        dim: usize,
        flavor: Flavor,
        mut product: impl FnMut(usize, usize) -> Row,
    ) -> Result<Self> {
        let mut table = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let row = product(i, j);
                if row.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: row.len(),
                    });
                }
                table.extend(row.into_iter().map(|x| field.reduce(x)));
            }
        }
        Ok(StructureAlgebra {
            field,
            dim,
            flavor,
            table,
        })
    }

    /// The algebra with identically zero product.
    pub fn zero(field: FieldPrime, dim: usize) -> Self {
        StructureAlgebra {
            field,
            dim,
            flavor: Flavor::General,
            table: vec![0; dim * dim * dim],
        }
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn with_flavor(mut self, flavor: Flavor) -> Self {
        self.flavor = flavor;
        self
    }

    /// Nonzero structure constants in `(i, j, k)` order.
    pub fn entries(&self) -> Vec<(usize, usize, usize, u64)> {
        let d = self.dim;
        self.table
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(at, &c)| (at / (d * d), (at / d) % d, at % d, c))
            .collect()
    }

    #[inline]
    pub fn basis_product(&self, i: usize, j: usize) -> &[u64] {
        let start = (i * self.dim + j) * self.dim;
        &self.table[start..start + self.dim]
    }

    pub fn full(&self) -> Subspace {
        Subspace::full(self.field, self.dim)
    }

    pub fn zero_subspace(&self) -> Subspace {
        Subspace::zero(self.field, self.dim)
    }

    pub fn multiply(&self, u: &[u64], v: &[u64]) -> Result<Row> {
        for x in [u, v] {
            if x.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: x.len(),
                });
            }
        }
        Ok(self.mul(u, v))
    }

    pub(crate) fn mul(&self, u: &[u64], v: &[u64]) -> Row {
        let f = self.field;
        let mut out = vec![0; self.dim];
        for (i, &a) in u.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in v.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                f.add_scaled(&mut out, self.basis_product(i, j), f.mul(a, b));
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Row {
        let mut row = vec![0; self.dim];
        row[i] = 1;
        row
    }

    /// Checks the laws implied by the flavor on all basis pairs and triples.
    pub fn validate_flavor(&self) -> FlavorReport {
        let d = self.dim;
        let f = self.field;
        match self.flavor {
            Flavor::General => FlavorReport::Pass,
            Flavor::Associative => {
                for i in 0..d {
                    for j in 0..d {
                        let ij = self.basis_product(i, j).to_vec();
                        for k in 0..d {
                            let lhs = self.mul(&ij, &self.unit(k));
                            let rhs = self.mul(&self.unit(i), self.basis_product(j, k));
                            if lhs != rhs {
                                return FlavorReport::Fail(FlavorViolation {
                                    law: FlavorLaw::Associativity,
                                    indices: vec![i, j, k],
                                    lhs,
                                    rhs,
                                });
                            }
                        }
                    }
                }
                FlavorReport::Pass
            }
            Flavor::Lie => {
                let zero = vec![0; d];
                for i in 0..d {
                    let ii = self.basis_product(i, i);
                    if ii.iter().any(|&x| x != 0) {
                        return FlavorReport::Fail(FlavorViolation {
                            law: FlavorLaw::Alternating,
                            indices: vec![i, i],
                            lhs: ii.to_vec(),
                            rhs: zero,
                        });
                    }
                }
                for i in 0..d {
                    for j in 0..d {
                        let lhs = self.basis_product(i, j).to_vec();
                        let rhs: Row = self.basis_product(j, i).iter().map(|&x| f.neg(x)).collect();
                        if lhs != rhs {
                            return FlavorReport::Fail(FlavorViolation {
                                law: FlavorLaw::Anticommutativity,
                                indices: vec![i, j],
                                lhs,
                                rhs,
                            });
                        }
                    }
                }
                for i in 0..d {
                    for j in 0..d {
                        for k in 0..d {
                            let (a, b, c) = (self.unit(i), self.unit(j), self.unit(k));
                            let mut jac = self.mul(&self.mul(&a, &b), &c);
                            let t2 = self.mul(&self.mul(&b, &c), &a);
                            let t3 = self.mul(&self.mul(&c, &a), &b);
                            f.add_scaled(&mut jac, &t2, 1);
                            f.add_scaled(&mut jac, &t3, 1);
                            if jac.iter().any(|&x| x != 0) {
                                return FlavorReport::Fail(FlavorViolation {
                                    law: FlavorLaw::Jacobi,
                                    indices: vec![i, j, k],
                                    lhs: jac,
                                    rhs: zero,
                                });
                            }
                        }
                    }
                }
                FlavorReport::Pass
            }
        }
    }

    fn check(&self, v: &Subspace) -> Result<()> {
        if v.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field.p(),
                right: v.field().p(),
            });
        }
        if v.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.ambient_dim(),
            });
        }
        Ok(())
    }

    /// `G·V ⊆ V`, checked on basis pairs.
    pub fn is_left_ideal(&self, v: &Subspace) -> Result<bool> {
        self.check(v)?;
        Ok((0..self.dim).all(|i| {
            v.basis()
                .iter()
                .all(|b| v.contains_unchecked(&self.mul(&self.unit(i), b)))
        }))
    }

    /// `V·G ⊆ V`, checked on basis pairs.
    pub fn is_right_ideal(&self, v: &Subspace) -> Result<bool> {
        self.check(v)?;
        Ok((0..self.dim).all(|i| {
            v.basis()
                .iter()
                .all(|b| v.contains_unchecked(&self.mul(b, &self.unit(i))))
        }))
    }

    pub fn is_ideal(&self, v: &Subspace) -> Result<bool> {
        Ok(self.is_left_ideal(v)? && self.is_right_ideal(v)?)
    }

    pub fn is_subalgebra(&self, v: &Subspace) -> Result<bool> {
        self.product_span(v, v)?.leq(v)
    }

    /// Span of all products `v·w` over basis vectors of `V` and `W`.
    pub fn product_span(&self, v: &Subspace, w: &Subspace) -> Result<Subspace> {
        self.check(v)?;
        self.check(w)?;
        let rows: Vec<Row> = v
            .basis()
            .iter()
            .flat_map(|a| w.basis().iter().map(move |b| (a, b)))
            .map(|(a, b)| self.mul(a, b))
            .collect();
        Ok(Subspace::span_unchecked(self.field, self.dim, rows))
    }

    /// Smallest subalgebra containing `V`.
    pub fn subalgebra_generated(&self, v: &Subspace) -> Result<Subspace> {
        let mut current = v.clone();
        loop {
            let next = current.sum(&self.product_span(&current, &current)?)?;
            if next == current {
                return Ok(current);
            }
            current = next;
        }
    }

    /// Least `m` with `P_m = 0` for the subalgebra generated by `V`, or `None` when it is not nilpotent.
    ///
    /// Nilpotency is decided first through the operator chain
    /// `W_0 = V`, `W_{j+1} = V·W_j + W_j·V`, which is decreasing and
    /// determined by its last term, so it either reaches zero or stalls. The
    /// subalgebra is nilpotent exactly when that chain reaches zero; only then
    /// is the split-sum chain run to find the index.
    pub fn nilpotency_index(&self, v: &Subspace) -> Result<Option<usize>> {
        let v = self.subalgebra_generated(v)?;
        let mut w = v.clone();
        while !w.is_zero() {
            let next = self.product_span(&v, &w)?.sum(&self.product_span(&w, &v)?)?;
            if next == w {
                return Ok(None);
            }
            w = next;
        }
        let powers = self.power_chain(&v)?;
        Ok(Some(powers.len() - 1))
    }

    /// `[_, P_1, ..., P_m]` with `P_m = 0`; assumes `V` generates a nilpotent subalgebra.
    fn power_chain(&self, v: &Subspace) -> Result<Vec<Subspace>> {
        let mut powers = vec![self.zero_subspace(), v.clone()];
        let mut m = 1;
        while !powers[m].is_zero() {
            let mut next = self.zero_subspace();
            for i in 1..=m {
                next = next.sum(&self.product_span(&powers[i], &powers[m + 1 - i])?)?;
            }
            powers.push(next);
            m += 1;
        }
        Ok(powers)
    }

    /// The split-sum powers `P_1..P_m` of a nilpotent subalgebra, ending with zero.
    pub fn nilpotent_powers(&self, v: &Subspace) -> Result<Option<Vec<Subspace>>> {
        if self.nilpotency_index(v)?.is_none() {
            return Ok(None);
        }
        let v = self.subalgebra_generated(v)?;
        let mut powers = self.power_chain(&v)?;
        powers.remove(0);
        Ok(Some(powers))
    }

    pub fn quotient(&self, ideal: &Subspace) -> Result<QuotientPresentation> {
        if !self.is_ideal(ideal)? {
            return Err(Error::NotAnIdeal(ideal.to_string()));
        }
        let pivots = ideal.pivots();
        let complement: Vec<usize> = (0..self.dim).filter(|c| !pivots.contains(c)).collect();
        let project = |v: &[u64]| -> Row {
            let r = ideal.reduce(v);
            complement.iter().map(|&c| r[c]).collect()
        };
        let q = complement.len();
        let quotient = StructureAlgebra::from_products(self.field, q, self.flavor, |a, b| {
            project(self.basis_product(complement[a], complement[b]))
        })?;
        Ok(QuotientPresentation {
            parent: self.clone(),
            ideal: ideal.clone(),
            complement,
            quotient,
        })
    }

    /// The subalgebra `v` as an algebra in its own right, on the canonical basis of `v`.
    ///
    /// Coordinates are read off the pivot columns, which is exact because the basis is reduced.
    pub fn restrict(&self, v: &Subspace) -> Result<StructureAlgebra> {
        if !self.is_subalgebra(v)? {
            return Err(Error::NotASubalgebra(v.to_string()));
        }
        let pivots = v.pivots();
        let basis = v.basis();
        StructureAlgebra::from_products(self.field, v.rank(), self.flavor, |a, b| {
            let prod = self.mul(&basis[a], &basis[b]);
            pivots.iter().map(|&c| prod[c]).collect()
        })
    }
}

/// `G/I` presented on the standard basis vectors outside the pivot columns of `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientPresentation {
    parent: StructureAlgebra,
    ideal: Subspace,
    complement: Vec<usize>,
    quotient: StructureAlgebra,
}

impl QuotientPresentation {
    pub fn parent(&self) -> &StructureAlgebra {
        &self.parent
    }

    pub fn ideal(&self) -> &Subspace {
        &self.ideal
    }

    /// Parent basis indices whose images form the quotient basis, in order.
    pub fn complement_basis(&self) -> &[usize] {
        &self.complement
    }

    pub fn quotient(&self) -> &StructureAlgebra {
        &self.quotient
    }

    /// The projection `G → G/I` in quotient coordinates.
    pub fn project(&self, v: &[u64]) -> Result<Row> {
        if v.len() != self.parent.dim {
            return Err(Error::DimensionMismatch {
                expected: self.parent.dim,
                found: v.len(),
            });
        }
        let r = self.ideal.reduce(v);
        Ok(self.complement.iter().map(|&c| r[c]).collect())
    }

    pub fn project_subspace(&self, v: &Subspace) -> Result<Subspace> {
        let rows = v.basis().iter().map(|b| self.project(b)).collect::<Result<Vec<_>>>()?;
        Subspace::span(self.parent.field, self.complement.len(), &rows)
    }

    /// Canonical preimage of a quotient vector, supported on the complement basis.
    pub fn lift(&self, q: &[u64]) -> Row {
        let mut out = vec![0; self.parent.dim];
        for (&c, &x) in self.complement.iter().zip(q) {
            out[c] = x;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn gf(p: u64) -> FieldPrime {
        FieldPrime::new(p).unwrap()
    }

    fn span(alg: &StructureAlgebra, rows: &[&[u64]]) -> Subspace {
        let rows: Vec<Row> = rows.iter().map(|r| r.to_vec()).collect();
        Subspace::span(alg.field(), alg.dim(), &rows).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let dual = corpus::dual_numbers();
        assert_eq!(dual.multiply(&[0, 1], &[0, 1]).unwrap(), vec![0, 0]);
        let tri = corpus::upper_triangular_2();
        assert_eq!(tri.multiply(&[1, 0, 0], &[0, 0, 1]).unwrap(), vec![0, 0, 1]);
        let z = StructureAlgebra::zero(gf(3), 3);
        assert_eq!(z.multiply(&[1, 2, 1], &[2, 2, 2]).unwrap(), vec![0, 0, 0]);
        assert!(tri.multiply(&[1, 0], &[0, 0, 1]).is_err());
    }

    #[test]
    fn flavor_validation() {
        assert!(corpus::upper_triangular_2().validate_flavor().passed());
        assert!(corpus::sl2_gf5().validate_flavor().passed());
        assert!(corpus::heisenberg_gf5().validate_flavor().passed());
        let bad = StructureAlgebra::new(gf(2), 2, &[(0, 0, 0, 1)], Flavor::Lie).unwrap();
        match bad.validate_flavor() {
            FlavorReport::Fail(v) => {
                assert_eq!(v.law, FlavorLaw::Alternating);
                assert_eq!(v.indices, vec![0, 0]);
            }
            FlavorReport::Pass => panic!("alternating law should fail"),
        }
        let nonassoc = StructureAlgebra::new(gf(2), 2, &[(0, 0, 1, 1)], Flavor::Associative).unwrap();
        assert!(nonassoc.validate_flavor().passed());
        let nonassoc = StructureAlgebra::new(gf(2), 2, &[(0, 0, 1, 1), (1, 0, 0, 1)], Flavor::Associative).unwrap();
        assert!(!nonassoc.validate_flavor().passed());
    }

    #[test]
    fn sl2_jacobi_by_direct_expansion() {
        // [h,e]=2e, [h,f]=-2f, [e,f]=h; expand the Jacobiator on every triple by hand-rolled bracket.
        let g = corpus::sl2_gf5();
        let f = g.field();
        let br = |a: &[u64], b: &[u64]| g.multiply(a, b).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let e = |n: usize| {
                        let mut r = vec![0; 3];
                        r[n] = 1;
                        r
                    };
                    let mut s = br(&br(&e(i), &e(j)), &e(k));
                    f.add_scaled(&mut s, &br(&br(&e(j), &e(k)), &e(i)), 1);
                    f.add_scaled(&mut s, &br(&br(&e(k), &e(i)), &e(j)), 1);
                    assert_eq!(s, vec![0, 0, 0], "Jacobi fails at {i},{j},{k}");
                }
            }
        }
    }

    #[test]
    fn duplicate_and_out_of_range_entries() {
        assert!(matches!(
            StructureAlgebra::new(gf(2), 2, &[(0, 2, 0, 1)], Flavor::General),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            StructureAlgebra::new(gf(2), 2, &[(0, 0, 0, 1), (0, 0, 0, 1)], Flavor::General),
            Err(Error::DuplicateEntry { .. })
        ));
    }

    #[test]
    fn ideals() {
        let tri = corpus::upper_triangular_2();
        let e3 = span(&tri, &[&[0, 0, 1]]);
        // All six products involving e3 land in span{e3}.
        for i in 0..3 {
            let mut u = vec![0; 3];
            u[i] = 1;
            assert!(e3.contains(&tri.multiply(&u, &[0, 0, 1]).unwrap()).unwrap());
            assert!(e3.contains(&tri.multiply(&[0, 0, 1], &u).unwrap()).unwrap());
        }
        assert!(tri.is_ideal(&e3).unwrap());
        assert!(tri.is_ideal(&tri.full()).unwrap());
        let e1 = span(&tri, &[&[1, 0, 0]]);
        assert!(!tri.is_ideal(&e1).unwrap());
    }

    #[test]
    fn product_spans() {
        let dual = corpus::dual_numbers();
        let eps = span(&dual, &[&[0, 1]]);
        assert!(dual.product_span(&eps, &eps).unwrap().is_zero());
        let tri = corpus::upper_triangular_2();
        let e1 = span(&tri, &[&[1, 0, 0]]);
        let e3 = span(&tri, &[&[0, 0, 1]]);
        assert_eq!(tri.product_span(&e1, &e3).unwrap(), e3);
        assert!(tri.product_span(&e1, &tri.zero_subspace()).unwrap().is_zero());
    }

    #[test]
    fn nilpotency() {
        let tri = corpus::upper_triangular_2();
        assert_eq!(tri.nilpotency_index(&span(&tri, &[&[0, 0, 1]])).unwrap(), Some(2));
        let strict = corpus::strictly_upper_3();
        let powers = strict.nilpotent_powers(&strict.full()).unwrap().unwrap();
        // P2 = span{E13}, P3 = 0 by direct products.
        assert_eq!(powers[1], span(&strict, &[&[0, 0, 1]]));
        assert!(powers[2].is_zero());
        assert_eq!(strict.nilpotency_index(&strict.full()).unwrap(), Some(3));
        let dual = corpus::dual_numbers();
        assert_eq!(dual.nilpotency_index(&dual.full()).unwrap(), None);
        assert_eq!(tri.nilpotency_index(&tri.zero_subspace()).unwrap(), Some(1));
    }

    #[test]
    fn nonassociative_nilpotency_uses_all_bracketings() {
        // e0·e0 = e1, e0·e1 = e2, e1·e0 = 0: left-normed and right-normed chains differ.
        let alg = StructureAlgebra::new(gf(2), 3, &[(0, 0, 1, 1), (0, 1, 2, 1)], Flavor::General).unwrap();
        assert_eq!(alg.nilpotency_index(&alg.full()).unwrap(), Some(4));
        let powers = alg.nilpotent_powers(&alg.full()).unwrap().unwrap();
        assert_eq!(powers[1], span(&alg, &[&[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(powers[2], span(&alg, &[&[0, 0, 1]]));
    }

    #[test]
    fn quotient_of_upper_triangular() {
        let tri = corpus::upper_triangular_2();
        let q = tri.quotient(&span(&tri, &[&[0, 0, 1]])).unwrap();
        let expected =
            StructureAlgebra::new(tri.field(), 2, &[(0, 0, 0, 1), (1, 1, 1, 1)], Flavor::Associative).unwrap();
        assert_eq!(q.quotient(), &expected);
        assert_eq!(q.complement_basis(), &[0, 1]);
        // Projection is multiplicative on all basis pairs.
        for i in 0..3 {
            for j in 0..3 {
                let (mut u, mut v) = (vec![0; 3], vec![0; 3]);
                u[i] = 1;
                v[j] = 1;
                let lhs = q.project(&tri.multiply(&u, &v).unwrap()).unwrap();
                let rhs = q
                    .quotient()
                    .multiply(&q.project(&u).unwrap(), &q.project(&v).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(tri.quotient(&tri.zero_subspace()).unwrap().quotient(), &tri);
        assert_eq!(tri.quotient(&tri.full()).unwrap().quotient().dim(), 0);
        assert!(matches!(
            tri.quotient(&span(&tri, &[&[1, 0, 0]])),
            Err(Error::NotAnIdeal(_))
        ));
    }
}
