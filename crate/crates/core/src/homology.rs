//! Integral homology of bounded chain complexes via lattices and Smith
//! normal form, induced maps on homology, mapping cones, and the
//! operational triviality test standing in for stable cohomotopy
//! triviality of finite complexes.

use crate::error::Result;
use crate::lattice::{column_span, kernel_lattice, Lattice};
use crate::matrix::IntegerMatrix;
use crate::nerve::{ChainComplex, ChainMap};
use crate::subquotient::{SubquotientGroup, SubquotientMap};

#[derive(Clone, Debug)]
pub struct HomologySummary {
    lo: i64,
    groups: Vec<SubquotientGroup>,
}

impl HomologySummary {
    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.groups.len() as i64 - 1
    }

    /// Trivial outside the complex's degree range.
    pub fn group(&self, n: i64) -> SubquotientGroup {
        if n < self.lo || n > self.hi() {
            SubquotientGroup::trivial(0)
        } else {
            self.groups[(n - self.lo) as usize].clone()
        }
    }

    pub fn nonzero_degrees(&self) -> Vec<i64> {
        (self.lo..=self.hi())
            .filter(|&n| !self.group(n).is_trivial())
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.groups.iter().all(|g| g.is_trivial())
    }

    pub fn isomorphic(&self, other: &HomologySummary) -> bool {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        (lo..=hi).all(|n| self.group(n).isomorphic(&other.group(n)))
    }
}

/// H_n = ker ∂_n / im ∂_{n+1} in every degree of the complex.
pub fn homology(x: &ChainComplex) -> Result<HomologySummary> {
    let mut groups = Vec::new();
    for n in x.lo()..=x.hi() {
        groups.push(homology_at(x, n)?);
    }
    Ok(HomologySummary { lo: x.lo(), groups })
}

pub fn homology_at(x: &ChainComplex, n: i64) -> Result<SubquotientGroup> {
    let ker = cycles(x, n)?;
    let im = boundaries(x, n)?;
    SubquotientGroup::new(ker, im)
}

pub fn cycles(x: &ChainComplex, n: i64) -> Result<Lattice> {
    kernel_lattice(&x.d(n))
}

pub fn boundaries(x: &ChainComplex, n: i64) -> Result<Lattice> {
    column_span(&x.d(n + 1))
}

/// Cone(f)_n = T_n ⊕ S_{n-1} with differential [[∂_T, f], [0, -∂_S]].
pub fn mapping_cone(f: &ChainMap) -> Result<ChainComplex> {
    let (s, t) = (f.source(), f.target());
    if s.is_zero() && t.is_zero() {
        return Ok(ChainComplex::zero());
    }
    let lo = t.lo().min(s.lo() + 1);
    let hi = t.hi().max(s.hi() + 1);
    let mut bases = Vec::new();
    let mut diffs = Vec::new();
    for n in lo..=hi {
        let mut basis: Vec<String> = t.basis(n).iter().map(|l| format!("t:{l}")).collect();
        basis.extend(s.basis(n - 1).iter().map(|l| format!("s:{l}")));
        bases.push(basis);
        let d = if n == lo {
            IntegerMatrix::zero(0, t.rank(n) + s.rank(n - 1))
        } else {
            IntegerMatrix::block2(
                &t.d(n),
                &f.component(n - 1),
                &IntegerMatrix::zero(s.rank(n - 2), t.rank(n)),
                &s.d(n - 1).neg(),
            )?
        };
        diffs.push(d);
    }
    ChainComplex::new(lo, bases, diffs)
}

/// The induced homomorphism H_n(source) -> H_n(target) for every degree.
pub fn induced_map_on_homology(f: &ChainMap) -> Result<Vec<(i64, SubquotientMap)>> {
    let lo = f.source().lo().min(f.target().lo());
    let hi = f.source().hi().max(f.target().hi());
    let mut out = Vec::new();
    for n in lo..=hi {
        let src = homology_at(f.source(), n)?;
        let dst = homology_at(f.target(), n)?;
        out.push((n, SubquotientMap::new(f.component(n), src, dst)?));
    }
    Ok(out)
}

pub fn is_homology_isomorphism(f: &ChainMap) -> Result<bool> {
    for (_, m) in induced_map_on_homology(f)? {
        if !m.is_isomorphism()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff all (reduced) homology vanishes. With `reduced`, a single Z
/// in degree 0 is discounted: the complex is treated as the unreduced
/// chains of a nonempty complex.
pub fn is_homologically_trivial(x: &ChainComplex, reduced: bool) -> Result<bool> {
    let h = homology(x)?;
    if !reduced {
        return Ok(h.is_trivial());
    }
    if x.is_zero() {
        return Ok(true);
    }
    for n in x.lo()..=x.hi() {
        let g = h.group(n);
        if n == 0 {
            if g.structure() != (1, vec![]) {
                return Ok(false);
            }
        } else if !g.is_trivial() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nerve::{order_complex_chains, relative_chains};
    use crate::poset::Poset;
    use num_bigint::BigInt;

    fn segment() -> Poset {
        Poset::from_relations(&["a", "b", "ab"], &[("a", "ab"), ("b", "ab")]).unwrap()
    }

    #[test]
    fn contractible_path() {
        let c = order_complex_chains(&segment(), false).unwrap();
        let h = homology(&c).unwrap();
        assert_eq!(h.group(0).structure(), (1, vec![]));
        assert!(h.group(1).is_trivial());
    }

    #[test]
    fn circle_from_relative_segment() {
        let c = relative_chains(&segment(), &[true, true, false]).unwrap();
        let h = homology(&c).unwrap();
        assert!(h.group(0).is_trivial());
        assert_eq!(h.group(1).structure(), (1, vec![]));
        assert!(!is_homologically_trivial(&c, false).unwrap());
    }

    #[test]
    fn times_two_complex() {
        // Z -2-> Z: H_0 = Z/2, H_1 = 0
        let c = ChainComplex::new(
            0,
            vec![vec!["x".into()], vec!["y".into()]],
            vec![
                IntegerMatrix::zero(0, 1),
                IntegerMatrix::from_rows_i64(&[&[2]]),
            ],
        )
        .unwrap();
        let h = homology(&c).unwrap();
        assert_eq!(h.group(0).structure(), (0, vec![BigInt::from(2)]));
        assert!(h.group(1).is_trivial());
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = order_complex_chains(&segment(), false).unwrap();
        let cone = mapping_cone(&ChainMap::identity(&c)).unwrap();
        assert!(is_homologically_trivial(&cone, false).unwrap());
    }

    #[test]
    fn cone_of_zero_map() {
        // zero map on Z in degree 0: cone = target ⊕ shifted source
        let z = ChainComplex::concentrated(0, 1, "e");
        let cone = mapping_cone(&ChainMap::zero(&z, &z)).unwrap();
        let h = homology(&cone).unwrap();
        assert_eq!(h.group(0).structure(), (1, vec![]));
        assert_eq!(h.group(1).structure(), (1, vec![]));
    }

    #[test]
    fn cone_detects_homology_iso() {
        let pair = crate::poset::simplex_pair(1).unwrap();
        let beta = crate::nerve::quotient_map_beta(&pair, "ab").unwrap();
        let cone = mapping_cone(&beta).unwrap();
        assert!(is_homologically_trivial(&cone, false).unwrap());
        assert!(is_homology_isomorphism(&beta).unwrap());
    }

    #[test]
    fn induced_maps_identity_and_zero() {
        let c = relative_chains(&segment(), &[true, true, false]).unwrap();
        for (_, m) in induced_map_on_homology(&ChainMap::identity(&c)).unwrap() {
            assert!(m.is_isomorphism().unwrap());
        }
        for (_, m) in induced_map_on_homology(&ChainMap::zero(&c, &c)).unwrap() {
            assert!(m.is_zero().unwrap());
        }
    }

    #[test]
    fn reduced_triviality() {
        let c = order_complex_chains(&segment(), false).unwrap();
        assert!(is_homologically_trivial(&c, true).unwrap());
        assert!(!is_homologically_trivial(&c, false).unwrap());
        assert!(is_homologically_trivial(&ChainComplex::zero(), false).unwrap());
    }

    #[test]
    fn rank_nullity() {
        let c = order_complex_chains(&crate::poset::cube_pair(2).unwrap().ambient(), false)
            .unwrap();
        for n in c.lo()..=c.hi() {
            let ker = cycles(&c, n).unwrap().rank();
            let im = crate::normal_form::rank(&c.d(n));
            assert_eq!(c.rank(n), ker + im);
        }
    }
}
