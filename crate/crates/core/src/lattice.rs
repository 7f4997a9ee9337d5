//! Lattices: subgroups of Z^n given by generator matrices, kept in
//! canonical column Hermite form so equality is syntactic.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::normal_form::{hermite_normal_form, kernel, solve_integer};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lattice {
    ambient_rank: usize,
    /// Canonical: column HNF with zero columns removed; full column rank.
    generators: IntegerMatrix,
}

impl Lattice {
    /// Canonicalize the column span of `generators` inside Z^ambient_rank.
    pub fn from_generators(ambient_rank: usize, generators: &IntegerMatrix) -> Result<Self> {
        if generators.rows() != ambient_rank {
            return Err(Error::DimensionMismatch(format!(
                "lattice generators have {} rows in ambient Z^{}",
                generators.rows(),
                ambient_rank
            )));
        }
        let (h, _) = hermite_normal_form(generators);
        let keep: Vec<usize> = (0..h.cols())
            .filter(|&j| (0..h.rows()).any(|i| !h.get(i, j).is_zero()))
            .collect();
        Ok(Lattice {
            ambient_rank,
            generators: h.submatrix_cols(&keep),
        })
    }

    pub fn zero(ambient_rank: usize) -> Self {
        Lattice {
            ambient_rank,
            generators: IntegerMatrix::zero(ambient_rank, 0),
        }
    }

    pub fn full(ambient_rank: usize) -> Self {
        Lattice {
            ambient_rank,
            generators: IntegerMatrix::identity(ambient_rank),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// Canonical generator matrix; columns are a basis (full column rank).
    pub fn generators(&self) -> &IntegerMatrix {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.cols()
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        if v.len() != self.ambient_rank {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} in ambient Z^{}",
                v.len(),
                self.ambient_rank
            )));
        }
        Ok(solve_integer(&self.generators, v)?.is_some())
    }

    pub fn contains_lattice(&self, other: &Lattice) -> Result<bool> {
        if other.ambient_rank != self.ambient_rank {
            return Err(Error::DimensionMismatch(
                "lattice containment across different ambients".into(),
            ));
        }
        for j in 0..other.generators.cols() {
            if !self.contains(&other.generators.column(j))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        if other.ambient_rank != self.ambient_rank {
            return Err(Error::DimensionMismatch("lattice sum".into()));
        }
        Lattice::from_generators(self.ambient_rank, &self.generators.hstack(&other.generators)?)
    }

    /// A ∩ B via the kernel of the juxtaposed generator matrix [A | B].
    pub fn intersection(&self, other: &Lattice) -> Result<Lattice> {
        if other.ambient_rank != self.ambient_rank {
            return Err(Error::DimensionMismatch("lattice intersection".into()));
        }
        let j = self.generators.hstack(&other.generators)?;
        let k = kernel(&j);
        // A-part of each kernel vector spans the intersection
        let a_part = k.submatrix_rows(&(0..self.generators.cols()).collect::<Vec<_>>());
        Lattice::from_generators(self.ambient_rank, &self.generators.mul(&a_part)?)
    }

    /// { v in Z^(cols of m) : m·v in self }.
    pub fn preimage(&self, m: &IntegerMatrix) -> Result<Lattice> {
        if m.rows() != self.ambient_rank {
            return Err(Error::DimensionMismatch(format!(
                "preimage: map into Z^{} vs ambient Z^{}",
                m.rows(),
                self.ambient_rank
            )));
        }
        let j = m.hstack(&self.generators)?;
        let k = kernel(&j);
        let v_part = k.submatrix_rows(&(0..m.cols()).collect::<Vec<_>>());
        Lattice::from_generators(m.cols(), &v_part)
    }

    /// Image m(self) inside Z^(rows of m).
    pub fn image(&self, m: &IntegerMatrix) -> Result<Lattice> {
        if m.cols() != self.ambient_rank {
            return Err(Error::DimensionMismatch(format!(
                "image: map from Z^{} vs ambient Z^{}",
                m.cols(),
                self.ambient_rank
            )));
        }
        Lattice::from_generators(m.rows(), &m.mul(&self.generators)?)
    }

    /// Express v in the canonical basis; None when v is outside the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        solve_integer(&self.generators, v)
    }
}

pub fn kernel_lattice(m: &IntegerMatrix) -> Result<Lattice> {
    Lattice::from_generators(m.cols(), &kernel(m))
}

pub fn column_span(m: &IntegerMatrix) -> Result<Lattice> {
    Lattice::from_generators(m.rows(), m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span_1d(n: i64) -> Lattice {
        Lattice::from_generators(1, &IntegerMatrix::from_rows_i64(&[&[n]])).unwrap()
    }

    #[test]
    fn gcd_lcm_oracle() {
        // 2Z + 3Z = Z, 2Z ∩ 3Z = 6Z
        let a = span_1d(2);
        let b = span_1d(3);
        assert_eq!(a.sum(&b).unwrap(), span_1d(1));
        assert_eq!(a.intersection(&b).unwrap(), span_1d(6));
    }

    #[test]
    fn intersection_idempotent() {
        let a = Lattice::from_generators(2, &IntegerMatrix::from_rows_i64(&[&[2, 1], &[0, 3]]))
            .unwrap();
        assert_eq!(a.intersection(&a).unwrap(), a);
        assert_eq!(a.sum(&a).unwrap(), a);
    }

    #[test]
    fn preimage_of_full_is_full() {
        let m = IntegerMatrix::from_rows_i64(&[&[3, 1], &[0, 5]]);
        let full = Lattice::full(2);
        assert_eq!(full.preimage(&m).unwrap(), Lattice::full(2));
    }

    #[test]
    fn canonical_equality_under_shuffle() {
        let g1 = IntegerMatrix::from_rows_i64(&[&[2, 0, 2], &[0, 4, 4]]);
        let g2 = IntegerMatrix::from_rows_i64(&[&[2, 2], &[4, 0]]);
        let a = Lattice::from_generators(2, &g1).unwrap();
        let b = Lattice::from_generators(2, &g2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn membership() {
        let a = span_1d(2);
        assert!(a.contains(&[BigInt::from(6)]).unwrap());
        assert!(!a.contains(&[BigInt::from(3)]).unwrap());
    }

    /// Exhaustive box-enumeration oracle for small ambient rank 2 lattices:
    /// modularity-style checks of sum/intersection against membership.
    #[test]
    fn box_enumeration_oracle() {
        let mats = [
            IntegerMatrix::from_rows_i64(&[&[2, 0], &[0, 3]]),
            IntegerMatrix::from_rows_i64(&[&[1, 1], &[0, 2]]),
            IntegerMatrix::from_rows_i64(&[&[4, 2], &[0, 2]]),
        ];
        let lats: Vec<Lattice> = mats
            .iter()
            .map(|m| Lattice::from_generators(2, m).unwrap())
            .collect();
        for a in &lats {
            for b in &lats {
                let sum = a.sum(b).unwrap();
                let inter = a.intersection(b).unwrap();
                for x in -6i64..=6 {
                    for y in -6i64..=6 {
                        let v = vec![BigInt::from(x), BigInt::from(y)];
                        let in_a = a.contains(&v).unwrap();
                        let in_b = b.contains(&v).unwrap();
                        assert_eq!(inter.contains(&v).unwrap(), in_a && in_b);
                        if in_a || in_b {
                            assert!(sum.contains(&v).unwrap());
                        }
                    }
                }
            }
        }
    }
}
