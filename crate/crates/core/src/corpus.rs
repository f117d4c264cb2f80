//! Small named algebras and automorphisms used by tests, the acceptance suite and the CLI corpus.
//!
//! Matrix algebras use matrix units ordered by `(j - i, i)`: the diagonal
//! first, then each superdiagonal. For 2×2 upper-triangular matrices this is
//! `e0 = E11, e1 = E22, e2 = E12`.

use crate::algebra::{Flavor, StructureAlgebra};
use crate::field::FieldPrime;
use crate::subspace::Row;

fn gf(p: u64) -> FieldPrime {
    FieldPrime::new(p).expect("corpus primes are prime")
}

/// Matrix units `E_ij` with `i <= j` (or `i < j` when `strict`) in `(j - i, i)` order, 0-based.
pub fn triangular_units(n: usize, strict: bool) -> Vec<(usize, usize)> {
    let start = usize::from(strict);
    (start..n)
        .flat_map(|gap| (0..n - gap).map(move |i| (i, i + gap)))
        .collect()
}

/// The associative algebra spanned by the given matrix units, which must be closed under products.
pub fn matrix_unit_algebra(p: u64, units: &[(usize, usize)]) -> StructureAlgebra {
    let d = units.len();
    StructureAlgebra::from_products(gf(p), d, Flavor::Associative, |a, b| {
        let (i, j) = units[a];
        let (k, l) = units[b];
        let mut row = vec![0; d];
        if j == k {
            let at = units
                .iter()
                .position(|&u| u == (i, l))
                .expect("matrix units closed under products");
            row[at] = 1;
        }
        row
    })
    .expect("rows have the right length")
}

pub fn upper_triangular(p: u64, n: usize) -> StructureAlgebra {
    matrix_unit_algebra(p, &triangular_units(n, false))
}

pub fn strictly_upper(p: u64, n: usize) -> StructureAlgebra {
    matrix_unit_algebra(p, &triangular_units(n, true))
}

/// Upper-triangular 2×2 matrices over GF(2): `e0 = E11, e1 = E22, e2 = E12`.
pub fn upper_triangular_2() -> StructureAlgebra {
    upper_triangular(2, 2)
}

/// Strictly upper-triangular 3×3 matrices over GF(2): `e0 = E12, e1 = E23, e2 = E13`.
pub fn strictly_upper_3() -> StructureAlgebra {
    strictly_upper(2, 3)
}

/// `GF(2)[ε]/(ε²)` with basis `1, ε`.
pub fn dual_numbers() -> StructureAlgebra {
    StructureAlgebra::new(
        gf(2),
        2,
        &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)],
        Flavor::Associative,
    )
    .expect("valid table")
}

/// Heisenberg Lie algebra over GF(5): `[x, y] = z`, basis `x, y, z`.
pub fn heisenberg_gf5() -> StructureAlgebra {
    StructureAlgebra::new(gf(5), 3, &[(0, 1, 2, 1), (1, 0, 2, 4)], Flavor::Lie).expect("valid table")
}

/// `sl2` over GF(5) with basis `h, e, f`: `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
pub fn sl2_gf5() -> StructureAlgebra {
    StructureAlgebra::new(
        gf(5),
        3,
        &[
            (0, 1, 1, 2),
            (1, 0, 1, 3),
            (0, 2, 2, 3),
            (2, 0, 2, 2),
            (1, 2, 0, 1),
            (2, 1, 0, 4),
        ],
        Flavor::Lie,
    )
    .expect("valid table")
}

/// Borel subalgebra of `sl2` over GF(5): basis `h, e`, `[h,e] = 2e`.
pub fn borel_gf5() -> StructureAlgebra {
    StructureAlgebra::new(gf(5), 2, &[(0, 1, 1, 2), (1, 0, 1, 3)], Flavor::Lie).expect("valid table")
}

/// Row-major matrix whose column `j` is `images[j]`.
pub fn matrix_from_images(images: &[Row]) -> Vec<Row> {
    let d = images.len();
    (0..d).map(|r| images.iter().map(|col| col[r]).collect()).collect()
}

/// Conjugation by `I + E12` on upper-triangular 2×2: `e0 ↦ e0 + e2`, `e1 ↦ e1 + e2`, `e2 ↦ e2`.
///
/// Over GF(2) the sign of the E12 coefficient in the image of E11 is immaterial.
pub fn tri2_conjugation() -> Vec<Row> {
    matrix_from_images(&[vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, 1]])
}

/// Conjugation by an invertible upper-triangular matrix `g` on the upper-triangular algebra of size `n`.
pub fn triangular_conjugation(p: u64, n: usize, g: &[Row]) -> Vec<Row> {
    let f = gf(p);
    let units = triangular_units(n, false);
    let ginv = invert(f, g).expect("g invertible");
    let images: Vec<Row> = units
        .iter()
        .map(|&(i, j)| {
            // g E_ij g^{-1} = Σ_{a,b} g[a][i] ginv[j][b] E_ab
            units.iter().map(|&(a, b)| f.mul(g[a][i], ginv[j][b])).collect()
        })
        .collect();
    matrix_from_images(&images)
}

fn invert(f: FieldPrime, m: &[Row]) -> Option<Vec<Row>> {
    let n = m.len();
    let mut aug: Vec<Row> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    let pivots = crate::subspace::rref_in_place(f, &mut aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Automorphisms of the strictly upper 3×3 algebra: `E12 ↦ E12 + E13` and `E23 ↦ E23 + E13`.
pub fn strict3_automorphisms() -> Vec<Vec<Row>> {
    vec![
        matrix_from_images(&[vec![1, 0, 1], vec![0, 1, 0], vec![0, 0, 1]]),
        matrix_from_images(&[vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 1]]),
    ]
}

/// Heisenberg automorphisms: scaling `x ↦ 2x, z ↦ 2z` and the shear `x ↦ x + y`.
pub fn heisenberg_automorphisms() -> Vec<Vec<Row>> {
    vec![
        matrix_from_images(&[vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 2]]),
        matrix_from_images(&[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]),
    ]
}

/// `sl2` automorphisms: the torus element `e ↦ 2e, f ↦ 3f` and the Weyl element `h ↦ -h, e ↦ -f, f ↦ -e`.
pub fn sl2_automorphisms() -> Vec<Vec<Row>> {
    vec![
        matrix_from_images(&[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]),
        matrix_from_images(&[vec![4, 0, 0], vec![0, 0, 4], vec![0, 4, 0]]),
    ]
}

/// Borel automorphism `e ↦ 2e`.
pub fn borel_automorphisms() -> Vec<Vec<Row>> {
    vec![matrix_from_images(&[vec![1, 0], vec![0, 2]])]
}

/// Permutation matrices of the transposition `(0 1)` and the cycle `(0 1 … d-1)`, generating `S_d`.
pub fn symmetric_group_generators(d: usize) -> Vec<Vec<Row>> {
    let perm = |sigma: &dyn Fn(usize) -> usize| -> Vec<Row> {
        let images: Vec<Row> = (0..d)
            .map(|j| {
                let mut col = vec![0; d];
                col[sigma(j)] = 1;
                col
            })
            .collect();
        matrix_from_images(&images)
    };
    let swap = perm(&|j| match j {
        0 => 1,
        1 => 0,
        j => j,
    });
    let cycle = perm(&|j| (j + 1) % d);
    vec![swap, cycle]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_orders() {
        assert_eq!(triangular_units(2, false), vec![(0, 0), (1, 1), (0, 1)]);
        assert_eq!(triangular_units(3, true), vec![(0, 1), (1, 2), (0, 2)]);
        assert_eq!(upper_triangular(2, 3).dim(), 6);
    }

    #[test]
    fn corpus_flavors_validate() {
        for alg in [
            upper_triangular_2(),
            upper_triangular(2, 3),
            strictly_upper_3(),
            dual_numbers(),
            heisenberg_gf5(),
            sl2_gf5(),
            borel_gf5(),
        ] {
            assert!(alg.validate_flavor().passed(), "{alg:?}");
        }
    }

    #[test]
    fn triangular_conjugation_matches_hand_table() {
        let g = vec![vec![1, 1], vec![0, 1]];
        assert_eq!(triangular_conjugation(2, 2, &g), tri2_conjugation());
    }
}
