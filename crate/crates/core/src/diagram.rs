//! Poset-indexed diagrams of bounded chain complexes with strict
//! functoriality: maps are given on covering relations, composites are
//! computed for every related pair, and path independence is checked on
//! construction.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::nerve::{ChainComplex, ChainMap};
use crate::poset::Poset;

#[derive(Clone, Debug)]
pub struct DiagramOfComplexes {
    index: Poset,
    values: Vec<ChainComplex>,
    /// Composite map for every strictly related pair x < y.
    maps: HashMap<(usize, usize), ChainMap>,
}

impl DiagramOfComplexes {
    /// `cover_maps` must contain exactly one chain map per covering
    /// relation of the index poset.
    pub fn new(
        index: Poset,
        values: Vec<ChainComplex>,
        cover_maps: HashMap<(usize, usize), ChainMap>,
    ) -> Result<Self> {
        if values.len() != index.len() {
            return Err(Error::Input(format!(
                "{} values for {} elements",
                values.len(),
                index.len()
            )));
        }
        let covers = index.covers();
        for &(x, y) in &covers {
            let m = cover_maps.get(&(x, y)).ok_or_else(|| {
                Error::Input(format!(
                    "missing diagram map for cover {} -> {}",
                    index.label(x),
                    index.label(y)
                ))
            })?;
            if m.source() != &values[x] || m.target() != &values[y] {
                return Err(Error::Input(format!(
                    "diagram map endpoints disagree with values on {} -> {}",
                    index.label(x),
                    index.label(y)
                )));
            }
        }
        // build composites in order of increasing relation "height" and
        // check path independence over every factorization through a cover
        let mut maps: HashMap<(usize, usize), ChainMap> = HashMap::new();
        let mut related: Vec<(usize, usize)> = Vec::new();
        for x in 0..index.len() {
            for y in 0..index.len() {
                if index.is_less(x, y) {
                    related.push((x, y));
                }
            }
        }
        // distance = number of strictly intermediate elements, a valid
        // processing order for composing through covers
        related.sort_by_key(|&(x, y)| {
            (0..index.len())
                .filter(|&z| index.is_less(x, z) && index.is_less(z, y))
                .count()
        });
        for (x, y) in related {
            let mut candidate: Option<ChainMap> = None;
            for &(a, z) in covers.iter().filter(|&&(a, _)| a == x) {
                if !index.is_leq(z, y) {
                    continue;
                }
                let first = &cover_maps[&(a, z)];
                let composite = if z == y {
                    first.clone()
                } else {
                    maps[&(z, y)].compose(first)?
                };
                match &candidate {
                    None => candidate = Some(composite),
                    Some(prev) => {
                        let same = (prev.source().lo().min(prev.target().lo())
                            ..=prev.source().hi().max(prev.target().hi()))
                            .all(|n| prev.component(n) == composite.component(n));
                        if !same {
                            return Err(Error::NotFunctorial(
                                index.label(x).to_string(),
                                index.label(y).to_string(),
                            ));
                        }
                    }
                }
            }
            let composite = candidate.ok_or_else(|| {
                Error::NotFunctorial(index.label(x).to_string(), index.label(y).to_string())
            })?;
            maps.insert((x, y), composite);
        }
        Ok(DiagramOfComplexes { index, values, maps })
    }

    pub fn constant(index: Poset, value: ChainComplex) -> Result<Self> {
        let covers = index.covers();
        let mut cover_maps = HashMap::new();
        for (x, y) in covers {
            cover_maps.insert((x, y), ChainMap::identity(&value));
        }
        let values = vec![value; index.len()];
        Self::new(index, values, cover_maps)
    }

    /// Zero everywhere except the up-set of `support`, where the value is
    /// constant with identity maps. The chain-level analogue of a free
    /// diagram cell.
    pub fn supported_above(index: Poset, support: usize, value: ChainComplex) -> Result<Self> {
        let covers = index.covers();
        let in_support = |x: usize| index.is_leq(support, x);
        let values: Vec<ChainComplex> = (0..index.len())
            .map(|x| {
                if in_support(x) {
                    value.clone()
                } else {
                    ChainComplex::zero()
                }
            })
            .collect();
        let mut cover_maps = HashMap::new();
        for (x, y) in covers {
            let m = if in_support(x) {
                ChainMap::identity(&value)
            } else {
                ChainMap::zero(&values[x], &values[y])
            };
            cover_maps.insert((x, y), m);
        }
        Self::new(index, values, cover_maps)
    }

    pub fn index(&self) -> &Poset {
        &self.index
    }

    pub fn value(&self, x: usize) -> &ChainComplex {
        &self.values[x]
    }

    pub fn map(&self, x: usize, y: usize) -> ChainMap {
        if x == y {
            ChainMap::identity(&self.values[x])
        } else {
            self.maps[&(x, y)].clone()
        }
    }

    /// Common degree window across all values.
    pub fn degree_window(&self) -> (i64, i64) {
        let lo = self.values.iter().map(|c| c.lo()).min().unwrap_or(0);
        let hi = self.values.iter().map(|c| c.hi()).max().unwrap_or(-1);
        (lo, hi.max(lo - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::IntegerMatrix;

    fn segment() -> Poset {
        Poset::from_relations(&["a", "b", "ab"], &[("a", "ab"), ("b", "ab")]).unwrap()
    }

    #[test]
    fn constant_diagram_builds() {
        let d = DiagramOfComplexes::constant(segment(), ChainComplex::concentrated(0, 1, "e"))
            .unwrap();
        assert_eq!(d.value(0).rank(0), 1);
        assert!(d.map(0, 2).component(0).is_identity());
    }

    #[test]
    fn non_functorial_rejected() {
        // diamond x < a, b < y with maps that disagree along the two paths
        let p = Poset::from_relations(
            &["x", "a", "b", "y"],
            &[("x", "a"), ("x", "b"), ("a", "y"), ("b", "y")],
        )
        .unwrap();
        let z = ChainComplex::concentrated(0, 1, "e");
        let times = |k: i64| {
            ChainMap::new(z.clone(), z.clone(), &|n| {
                if n == 0 {
                    IntegerMatrix::from_rows_i64(&[&[k]])
                } else {
                    IntegerMatrix::zero(0, 0)
                }
            })
            .unwrap()
        };
        let mut maps = HashMap::new();
        maps.insert((0, 1), times(1));
        maps.insert((0, 2), times(2));
        maps.insert((1, 3), times(1));
        maps.insert((2, 3), times(1));
        let r = DiagramOfComplexes::new(p.clone(), vec![z.clone(); 4], maps);
        assert!(matches!(r, Err(Error::NotFunctorial(_, _))));
        // consistent weights pass
        let mut maps = HashMap::new();
        maps.insert((0, 1), times(1));
        maps.insert((0, 2), times(2));
        maps.insert((1, 3), times(2));
        maps.insert((2, 3), times(1));
        let d = DiagramOfComplexes::new(p, vec![z; 4], maps).unwrap();
        assert_eq!(
            d.map(0, 3).component(0),
            IntegerMatrix::from_rows_i64(&[&[2]])
        );
    }

    #[test]
    fn supported_diagram() {
        let d = DiagramOfComplexes::supported_above(
            segment(),
            2,
            ChainComplex::concentrated(0, 2, "e"),
        )
        .unwrap();
        assert!(d.value(0).is_zero());
        assert_eq!(d.value(2).rank(0), 2);
    }
}
