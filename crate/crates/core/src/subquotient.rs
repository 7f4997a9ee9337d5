//! Finitely generated abelian groups presented as subquotients L1/L2 of
//! nested lattices, with invariant-factor structure from the Smith normal
//! form of the inclusion, and homomorphisms between such presentations.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::IntegerMatrix;
use crate::normal_form::{smith_normal_form, snf_diagonal};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubquotientGroup {
    ambient_rank: usize,
    numerator: Lattice,
    denominator: Lattice,
    free_rank: usize,
    /// Invariant factors >= 2, each dividing the next.
    torsion: Vec<BigInt>,
}

impl SubquotientGroup {
    /// num/den; fails unless den is contained in num.
    pub fn new(numerator: Lattice, denominator: Lattice) -> Result<Self> {
        if numerator.ambient_rank() != denominator.ambient_rank() {
            return Err(Error::DimensionMismatch("subquotient ambients differ".into()));
        }
        if !numerator.contains_lattice(&denominator)? {
            return Err(Error::NotContained(
                "denominator is not a sublattice of the numerator".into(),
            ));
        }
        // inclusion matrix of den in the canonical basis of num
        let mut cols = Vec::new();
        for j in 0..denominator.generators().cols() {
            let v = denominator.generators().column(j);
            cols.push(numerator.coordinates(&v)?.expect("containment checked"));
        }
        let incl = IntegerMatrix::from_columns(numerator.rank(), &cols);
        let (d, _, _) = smith_normal_form(&incl);
        let diag = snf_diagonal(&d);
        let free_rank = numerator.rank() - diag.len();
        let torsion: Vec<BigInt> = diag.into_iter().filter(|e| !e.is_one()).collect();
        Ok(SubquotientGroup {
            ambient_rank: numerator.ambient_rank(),
            numerator,
            denominator,
            free_rank,
            torsion,
        })
    }

    pub fn free(ambient_rank: usize) -> Self {
        SubquotientGroup::new(Lattice::full(ambient_rank), Lattice::zero(ambient_rank))
            .expect("zero is contained in everything")
    }

    pub fn trivial(ambient_rank: usize) -> Self {
        SubquotientGroup::new(Lattice::zero(ambient_rank), Lattice::zero(ambient_rank)).unwrap()
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn numerator(&self) -> &Lattice {
        &self.numerator
    }

    pub fn denominator(&self) -> &Lattice {
        &self.denominator
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Abstract isomorphism class: (free rank, invariant factors).
    pub fn structure(&self) -> (usize, Vec<BigInt>) {
        (self.free_rank, self.torsion.clone())
    }

    pub fn isomorphic(&self, other: &SubquotientGroup) -> bool {
        self.structure() == other.structure()
    }

    /// Dimension of (self ⊗ F) over F, F = Q (p = None) or F_p.
    pub fn field_dimension(&self, p: Option<&BigInt>) -> usize {
        match p {
            None => self.free_rank,
            Some(p) => {
                self.free_rank
                    + self
                        .torsion
                        .iter()
                        .filter(|t| num_integer::Integer::mod_floor(*t, p) == BigInt::from(0))
                        .count()
            }
        }
    }
}

impl std::fmt::Display for SubquotientGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{}", t));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// A homomorphism of subquotients induced by an ambient integer matrix.
#[derive(Clone, Debug)]
pub struct SubquotientMap {
    matrix: IntegerMatrix,
    source: SubquotientGroup,
    target: SubquotientGroup,
}

impl SubquotientMap {
    /// Checks well-definedness: the ambient matrix must carry numerator
    /// into numerator and denominator into denominator.
    pub fn new(
        matrix: IntegerMatrix,
        source: SubquotientGroup,
        target: SubquotientGroup,
    ) -> Result<Self> {
        if matrix.cols() != source.ambient_rank() || matrix.rows() != target.ambient_rank() {
            return Err(Error::DimensionMismatch(format!(
                "map {}x{} between ambients Z^{} -> Z^{}",
                matrix.rows(),
                matrix.cols(),
                source.ambient_rank(),
                target.ambient_rank()
            )));
        }
        let num_img = source.numerator().image(&matrix)?;
        if !target.numerator().contains_lattice(&num_img)? {
            return Err(Error::InvalidMap("numerator not preserved".into()));
        }
        let den_img = source.denominator().image(&matrix)?;
        if !target.denominator().contains_lattice(&den_img)? {
            return Err(Error::InvalidMap("denominator not preserved".into()));
        }
        Ok(SubquotientMap {
            matrix,
            source,
            target,
        })
    }

    pub fn identity(group: &SubquotientGroup) -> Self {
        SubquotientMap::new(
            IntegerMatrix::identity(group.ambient_rank()),
            group.clone(),
            group.clone(),
        )
        .expect("identity is always well defined")
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn source(&self) -> &SubquotientGroup {
        &self.source
    }

    pub fn target(&self) -> &SubquotientGroup {
        &self.target
    }

    pub fn compose(&self, inner: &SubquotientMap) -> Result<SubquotientMap> {
        SubquotientMap::new(
            self.matrix.mul(&inner.matrix)?,
            inner.source.clone(),
            self.target.clone(),
        )
    }

    /// Kernel as a subquotient: (num ∩ f^-1(den_target)) / den.
    pub fn kernel(&self) -> Result<SubquotientGroup> {
        let pre = self.target.denominator().preimage(&self.matrix)?;
        let num = self.source.numerator().intersection(&pre)?;
        SubquotientGroup::new(num, self.source.denominator().clone())
    }

    /// Image as a subquotient of the target: (f(num) + den_target) / den_target.
    pub fn image(&self) -> Result<SubquotientGroup> {
        let img = self
            .source
            .numerator()
            .image(&self.matrix)?
            .sum(self.target.denominator())?;
        SubquotientGroup::new(img, self.target.denominator().clone())
    }

    pub fn is_zero(&self) -> Result<bool> {
        let img = self.source.numerator().image(&self.matrix)?;
        self.target.denominator().contains_lattice(&img)
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        if !self.kernel()?.is_trivial() {
            return Ok(false);
        }
        let img = self
            .source
            .numerator()
            .image(&self.matrix)?
            .sum(self.target.denominator())?;
        Ok(img == *self.target.numerator())
    }
}

/// Exactness of A -g1-> B -g2-> C at B: image(g1) = kernel(g2) as
/// sublattices of B's numerator.
pub fn exact_at(g1: &SubquotientMap, g2: &SubquotientMap) -> Result<bool> {
    let im = g1
        .source()
        .numerator()
        .image(g1.matrix())?
        .sum(g1.target().denominator())?;
    let ker = g2
        .source()
        .numerator()
        .intersection(&g2.target().denominator().preimage(g2.matrix())?)?
        .sum(g2.source().denominator())?;
    Ok(im == ker)
}

/// Convenience for the group Z^r / relations given by columns of `rel`.
pub fn presented_group(rel: &IntegerMatrix) -> Result<SubquotientGroup> {
    let num = Lattice::full(rel.rows());
    let den = Lattice::from_generators(rel.rows(), rel)?;
    SubquotientGroup::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmod(n: i64) -> SubquotientGroup {
        presented_group(&IntegerMatrix::from_rows_i64(&[&[n]])).unwrap()
    }

    #[test]
    fn structures() {
        assert_eq!(SubquotientGroup::free(2).structure(), (2, vec![]));
        assert_eq!(zmod(2).structure(), (0, vec![BigInt::from(2)]));
        let g = presented_group(&IntegerMatrix::from_rows_i64(&[&[2, 0], &[0, 4]])).unwrap();
        assert_eq!(g.structure(), (0, vec![BigInt::from(2), BigInt::from(4)]));
    }

    #[test]
    fn containment_error() {
        let num = Lattice::from_generators(1, &IntegerMatrix::from_rows_i64(&[&[2]])).unwrap();
        let den = Lattice::full(1);
        assert!(SubquotientGroup::new(num, den).is_err());
    }

    #[test]
    fn structure_independent_of_generator_order() {
        let g1 = presented_group(&IntegerMatrix::from_rows_i64(&[&[0, 2], &[4, 0]])).unwrap();
        let g2 = presented_group(&IntegerMatrix::from_rows_i64(&[&[2, 0], &[0, 4]])).unwrap();
        assert_eq!(g1.structure(), g2.structure());
    }

    #[test]
    fn multiplication_by_two_on_z4() {
        let g = zmod(4);
        let f = SubquotientMap::new(IntegerMatrix::from_rows_i64(&[&[2]]), g.clone(), g.clone())
            .unwrap();
        assert_eq!(f.kernel().unwrap().structure(), (0, vec![BigInt::from(2)]));
        assert_eq!(f.image().unwrap().structure(), (0, vec![BigInt::from(2)]));
        assert!(!f.is_isomorphism().unwrap());
        // exhaustive oracle on the 4 elements of Z/4: doubling kills {0, 2}
        // and hits exactly {0, 2}
        let den = g.denominator();
        let mut kernel_size = 0;
        for x in 0..4i64 {
            let img = vec![BigInt::from(2 * x)];
            if den.contains(&img).unwrap() {
                kernel_size += 1;
            }
        }
        assert_eq!(kernel_size, 2);
    }

    #[test]
    fn identity_and_zero_maps() {
        let g = zmod(6);
        let id = SubquotientMap::identity(&g);
        assert!(id.is_isomorphism().unwrap());
        let zero =
            SubquotientMap::new(IntegerMatrix::zero(1, 1), g.clone(), g.clone()).unwrap();
        assert!(zero.is_zero().unwrap());
        assert_eq!(zero.kernel().unwrap().structure(), g.structure());
    }

    #[test]
    fn ill_defined_map_rejected() {
        // halving is not defined on Z (numerator not preserved): 1 -> 1/2
        // model: map Z -> Z/2 sending num Z into num Z but den 2Z onto Z: x -> x
        let src = zmod(2);
        let dst = SubquotientGroup::new(
            Lattice::full(1),
            Lattice::from_generators(1, &IntegerMatrix::from_rows_i64(&[&[4]])).unwrap(),
        )
        .unwrap();
        // den 2Z must land in den 4Z; identity fails
        assert!(SubquotientMap::new(IntegerMatrix::identity(1), src, dst).is_err());
    }
}
