//! Subspaces of GF(p)^d in canonical reduced row echelon form.
//!
//! A [`Subspace`] stores its basis in reduced row echelon form, so two
//! subspaces are equal as sets exactly when their stored bases are equal.
//! That makes subspaces usable as hash keys in lattice closures.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::field::FieldPrime;

/// A coordinate vector over GF(p); every entry lies in `[0, p)`.
pub type Row = Vec<u64>;

/// Row-reduces `rows` in place and returns the pivot columns.
///
/// Zero rows are dropped; the remaining rows are in reduced row echelon form
/// with unit pivots.
pub fn rref_in_place(field: FieldPrime, rows: &mut Vec<Row>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, i);
        let inv = field.inv(rows[r][c]).expect("nonzero pivot");
        field.scale(&mut rows[r], inv);
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let factor = field.neg(row[c]);
                field.add_scaled(row, &pivot_row, factor);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// A subspace of GF(p)^d with a canonical (RREF) basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    field: FieldPrime,
    dim: usize,
    basis: Vec<Row>,
}

impl Subspace {
    pub fn zero(field: FieldPrime, dim: usize) -> Self {
        Subspace {
            field,
            dim,
            basis: Vec::new(),
        }
    }

    pub fn full(field: FieldPrime, dim: usize) -> Self {
        let basis = (0..dim)
            .map(|i| {
                let mut row = vec![0; dim];
                row[i] = 1;
                row
            })
            .collect();
        Subspace { field, dim, basis }
    }

    /// The canonical subspace spanned by `rows`. Entries are reduced mod p.
    pub fn span(field: FieldPrime, dim: usize, rows: &[Row]) -> Result<Self> {
        let mut work = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            work.push(row.iter().map(|&x| field.reduce(x)).collect::<Row>());
        }
        rref_in_place(field, &mut work, dim);
        Ok(Subspace {
            field,
            dim,
            basis: work,
        })
    }

    /// Builds a subspace from vectors already known to have length `dim` and reduced entries.
    pub(crate) fn span_unchecked(field: FieldPrime, dim: usize, mut rows: Vec<Row>) -> Self {
        rref_in_place(field, &mut rows, dim);
        Subspace {
            field,
            dim,
            basis: rows,
        }
    }

    #[inline]
    pub fn field(&self) -> FieldPrime {
        self.field
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn basis(&self) -> &[Row] {
        &self.basis
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    #[inline]
    pub fn codim(&self) -> usize {
        self.dim - self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.dim
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|row| row.iter().position(|&x| x != 0).expect("basis rows are nonzero"))
            .collect()
    }

    pub fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.p(),
                right: other.field.p(),
            });
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// Residue of `v` after eliminating every pivot column of the basis.
    ///
    /// The residue is zero exactly when `v` lies in the subspace, and it is
    /// linear in `v` with kernel equal to the subspace.
    pub fn reduce(&self, v: &[u64]) -> Row {
        let mut r: Row = v.to_vec();
        for row in &self.basis {
            let pivot = row.iter().position(|&x| x != 0).expect("nonzero row");
            let c = r[pivot];
            if c != 0 {
                self.field.add_scaled(&mut r, row, self.field.neg(c));
            }
        }
        r
    }

    pub fn contains(&self, v: &[u64]) -> Result<bool> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(self.contains_unchecked(v))
    }

    pub(crate) fn contains_unchecked(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// `self ≤ other` in the subspace lattice.
    pub fn leq(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.rank() <= other.rank() && self.basis.iter().all(|row| other.contains_unchecked(row)))
    }

    /// Smallest subspace containing both.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_full() {
            return Ok(other.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(self.clone());
        }
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Subspace::span_unchecked(self.field, self.dim, rows))
    }

    /// Largest subspace contained in both, via the stacked system `[A A; B 0]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_full() {
            return Ok(self.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(other.clone());
        }
        let d = self.dim;
        let mut stacked: Vec<Row> = Vec::with_capacity(self.rank() + other.rank());
        for a in &self.basis {
            let mut row = a.clone();
            row.extend_from_slice(a);
            stacked.push(row);
        }
        for b in &other.basis {
            let mut row = b.clone();
            row.extend(std::iter::repeat_n(0, d));
            stacked.push(row);
        }
        let pivots = rref_in_place(self.field, &mut stacked, 2 * d);
        let rows = stacked
            .into_iter()
            .zip(pivots)
            .filter(|(_, p)| *p >= d)
            .map(|(row, _)| row[d..].to_vec())
            .collect();
        Ok(Subspace::span_unchecked(self.field, d, rows))
    }
}

impl std::fmt::Display for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.basis.is_empty() {
            return write!(f, "0");
        }
        let rows = self
            .basis
            .iter()
            .map(|r| format!("({})", r.iter().join(",")))
            .join(", ");
        write!(f, "span{{{rows}}}")
    }
}

/// Every subspace of GF(p)^dim, ordered by rank, then pivot set, then free entries.
///
/// The count grows quickly; callers are expected to keep `p^dim` small.
pub fn all_subspaces(field: FieldPrime, dim: usize) -> Vec<Subspace> {
    let p = field.p();
    let mut out = Vec::new();
    for rank in 0..=dim {
        for pivots in (0..dim).combinations(rank) {
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(r, &pc)| {
                    let pivots = &pivots;
                    ((pc + 1)..dim)
                        .filter(move |c| !pivots.contains(c))
                        .map(move |c| (r, c))
                })
                .collect();
            let total = p.pow(free.len() as u32);
            for code in 0..total {
                let mut rows: Vec<Row> = pivots
                    .iter()
                    .map(|&pc| {
                        let mut row = vec![0; dim];
                        row[pc] = 1;
                        row
                    })
                    .collect();
                let mut c = code;
                for &(r, col) in &free {
                    rows[r][col] = c % p;
                    c /= p;
                }
                out.push(Subspace {
                    field,
                    dim,
                    basis: rows,
                });
            }
        }
    }
    out
}
