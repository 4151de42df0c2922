//! Sublattices of `Z^r` in row-style Hermite normal form.
//!
//! Row operations run on `BigInt` so intermediate growth never overflows;
//! finished bases are stored as `i64` (entries of an HNF are bounded by the
//! pivots, which stay tiny for the lattices built here).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A sublattice of `Z^ambient_rank` with its canonical HNF basis: pivots
/// strictly increase down the rows, are positive, and every entry above a
/// pivot lies in `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntegerLattice {
    ambient_rank: usize,
    #[serde(rename = "hnf_basis")]
    basis: Vec<Vec<i64>>,
}

type Row = Vec<BigInt>;

fn to_big(v: &[i64]) -> Row {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn from_big(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| x.to_i64().ok_or(Error::Overflow("lattice basis")))
        .collect()
}

fn sub_multiple(target: &mut Row, q: &BigInt, source: &Row) {
    for (t, s) in target.iter_mut().zip(source) {
        *t -= q * s;
    }
}

/// Row-reduces `rows` using pivots in columns `0..pivot_cols` only, applying
/// every operation to whole rows. Returns the number of pivot rows; the rows
/// after them are zero on `0..pivot_cols`.
fn echelon(rows: &mut [Row], pivot_cols: usize) -> usize {
    let n = rows.len();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == n {
            break;
        }
        loop {
            let pivot = (r..n)
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let Some(p) = pivot else { break };
            rows.swap(r, p);
            let mut clean = true;
            for i in r + 1..n {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let (head, tail) = rows.split_at_mut(i);
                sub_multiple(&mut tail[0], &q, &head[r]);
                if !tail[0][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if r < n && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                let q = rows[i][c].div_floor(&rows[r][c]);
                if !q.is_zero() {
                    let (head, tail) = rows.split_at_mut(r);
                    sub_multiple(&mut head[i], &q, &tail[0]);
                }
            }
            r += 1;
        }
    }
    r
}

/// Left kernel `{x : x·M = 0}` of an `m × k` matrix as a list of generators.
fn left_kernel_rows(matrix: &[Row], k: usize) -> Vec<Row> {
    let m = matrix.len();
    let mut rows: Vec<Row> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let rank = echelon(&mut rows, k);
    rows.drain(..rank);
    rows.into_iter().map(|r| r[k..].to_vec()).collect()
}

impl IntegerLattice {
    pub fn zero(ambient_rank: usize) -> IntegerLattice {
        IntegerLattice {
            ambient_rank,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_rank: usize) -> IntegerLattice {
        IntegerLattice {
            ambient_rank,
            basis: (0..ambient_rank)
                .map(|i| (0..ambient_rank).map(|j| i64::from(i == j)).collect())
                .collect(),
        }
    }

    fn from_big_generators(ambient_rank: usize, mut rows: Vec<Row>) -> Result<IntegerLattice> {
        let rank = echelon(&mut rows, ambient_rank);
        rows.truncate(rank);
        let basis = rows.iter().map(|r| from_big(r)).collect::<Result<_>>()?;
        Ok(IntegerLattice {
            ambient_rank,
            basis,
        })
    }

    /// The lattice spanned by arbitrary (possibly dependent) generators.
    pub fn from_generators(ambient_rank: usize, generators: &[Vec<i64>]) -> Result<IntegerLattice> {
        if let Some(g) = generators.iter().find(|g| g.len() != ambient_rank) {
            return Err(Error::Invalid(format!(
                "generator of length {} in a lattice of rank {ambient_rank}",
                g.len()
            )));
        }
        Self::from_big_generators(ambient_rank, generators.iter().map(|g| to_big(g)).collect())
    }

    /// `{x ∈ Z^m : x·M = 0}` for an `m × k` matrix given by its rows.
    pub fn left_kernel(matrix: &[Vec<i64>], k: usize) -> Result<IntegerLattice> {
        let rows: Vec<Row> = matrix.iter().map(|r| to_big(r)).collect();
        debug_assert!(rows.iter().all(|r| r.len() == k));
        Self::from_big_generators(matrix.len(), left_kernel_rows(&rows, k))
    }

    /// `{x ∈ Z^m : x·A ∈ target}` for an `m × r` matrix `A`.
    pub fn preimage(matrix: &[Vec<i64>], target: &IntegerLattice) -> Result<IntegerLattice> {
        let m = matrix.len();
        let r = target.ambient_rank;
        if matrix.iter().any(|row| row.len() != r) {
            return Err(Error::Invalid("matrix width does not match the target lattice".into()));
        }
        let stacked: Vec<Row> = matrix
            .iter()
            .chain(target.basis.iter())
            .map(|row| to_big(row))
            .collect();
        let gens = left_kernel_rows(&stacked, r)
            .into_iter()
            .map(|v| v[..m].to_vec())
            .collect();
        Self::from_big_generators(m, gens)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    fn pivot(row: &[i64]) -> usize {
        row.iter().position(|&x| x != 0).expect("HNF rows are nonzero")
    }

    /// Membership by reduction against the HNF rows.
    pub fn contains(&self, v: &[i64]) -> bool {
        if v.len() != self.ambient_rank {
            return false;
        }
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for row in &self.basis {
            let p = Self::pivot(row);
            let d = row[p] as i128;
            if w[p] % d != 0 {
                return false;
            }
            let q = w[p] / d;
            if q != 0 {
                for (x, &y) in w.iter_mut().zip(row) {
                    *x -= q * y as i128;
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn is_sublattice_of(&self, other: &IntegerLattice) -> bool {
        self.ambient_rank == other.ambient_rank && self.basis.iter().all(|b| other.contains(b))
    }

    /// Product of the pivots; for a full-rank lattice this is its index in `Z^r`.
    pub fn pivot_product(&self) -> BigInt {
        self.basis
            .iter()
            .map(|row| BigInt::from(row[Self::pivot(row)]))
            .product()
    }
}
