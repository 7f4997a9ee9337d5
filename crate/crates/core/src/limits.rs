//! Poset-indexed diagrams of finitely generated abelian groups, the
//! associated cochain complex of the cosimplicial replacement, and the
//! derived inverse limits lim^p computed as its cohomology.
//!
//! Placement convention, frozen: the p-cochains attach the value at the
//! top x_p of a chain x_0 < ... < x_p. The coboundary keeps the top for
//! the faces d_0 .. d_p (sign (-1)^i) and applies the structure map
//! A(x_p) -> A(x_{p+1}) for the face deleting the old top, with sign
//! (-1)^(p+1).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::diagram::DiagramOfComplexes;
use crate::error::{Error, Result};
use crate::homology::homology_at;
use crate::lattice::Lattice;
use crate::matrix::IntegerMatrix;
use crate::poset::Poset;
use crate::subquotient::{SubquotientGroup, SubquotientMap};

/// Covariant functor from a poset to finitely generated abelian groups,
/// with functoriality checked on construction.
#[derive(Clone, Debug)]
pub struct AbelianDiagram {
    index: Poset,
    values: Vec<SubquotientGroup>,
    maps: HashMap<(usize, usize), SubquotientMap>,
}

// equality as group homomorphisms: the matrix difference must carry the
// source numerator into the target denominator
fn maps_agree(a: &SubquotientMap, b: &SubquotientMap) -> Result<bool> {
    let diff = a.matrix().add(&b.matrix().neg())?;
    let img = a.source().numerator().image(&diff)?;
    a.target().denominator().contains_lattice(&img)
}

impl AbelianDiagram {
    pub fn new(
        index: Poset,
        values: Vec<SubquotientGroup>,
        cover_maps: HashMap<(usize, usize), SubquotientMap>,
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
                    "missing map for cover {} -> {}",
                    index.label(x),
                    index.label(y)
                ))
            })?;
            if m.source() != &values[x] || m.target() != &values[y] {
                return Err(Error::Input(format!(
                    "map endpoints disagree with values on {} -> {}",
                    index.label(x),
                    index.label(y)
                )));
            }
        }
        let mut maps: HashMap<(usize, usize), SubquotientMap> = HashMap::new();
        let mut related: Vec<(usize, usize)> = Vec::new();
        for x in 0..index.len() {
            for y in 0..index.len() {
                if index.is_less(x, y) {
                    related.push((x, y));
                }
            }
        }
        related.sort_by_key(|&(x, y)| {
            (0..index.len())
                .filter(|&z| index.is_less(x, z) && index.is_less(z, y))
                .count()
        });
        for (x, y) in related {
            let mut candidate: Option<SubquotientMap> = None;
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
                        if !maps_agree(prev, &composite)? {
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
        Ok(AbelianDiagram { index, values, maps })
    }

    pub fn constant(index: Poset, value: SubquotientGroup) -> Result<Self> {
        let covers = index.covers();
        let mut cover_maps = HashMap::new();
        for (x, y) in covers {
            cover_maps.insert((x, y), SubquotientMap::identity(&value));
        }
        let values = vec![value; index.len()];
        Self::new(index, values, cover_maps)
    }

    pub fn index(&self) -> &Poset {
        &self.index
    }

    pub fn value(&self, x: usize) -> &SubquotientGroup {
        &self.values[x]
    }

    pub fn map(&self, x: usize, y: usize) -> SubquotientMap {
        if x == y {
            SubquotientMap::identity(&self.values[x])
        } else {
            self.maps[&(x, y)].clone()
        }
    }
}

/// One cochain degree of the cosimplicial replacement: a direct sum of
/// diagram values indexed by the p-chains.
#[derive(Clone, Debug)]
pub struct CochainDegree {
    pub chains: Vec<Vec<usize>>,
    /// Ambient offset of each summand in the direct-sum ambient.
    pub offsets: Vec<usize>,
    pub group: SubquotientGroup,
}

/// The full cochain complex: degrees 0..=top with coboundaries as
/// ambient integer matrices between the direct-sum ambients.
#[derive(Clone, Debug)]
pub struct LimCochainComplex {
    pub degrees: Vec<CochainDegree>,
    /// coboundaries[p]: degrees[p] ambient -> degrees[p+1] ambient
    pub coboundaries: Vec<IntegerMatrix>,
}

fn direct_sum_lattice(parts: &[&Lattice], offsets: &[usize], total: usize) -> Result<Lattice> {
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for (part, &off) in parts.iter().zip(offsets) {
        for j in 0..part.generators().cols() {
            let mut v = vec![BigInt::zero(); total];
            for i in 0..part.ambient_rank() {
                v[off + i] = part.generators().get(i, j).clone();
            }
            cols.push(v);
        }
    }
    Lattice::from_generators(total, &IntegerMatrix::from_columns(total, &cols))
}

pub fn lim_cochain_complex(diagram: &AbelianDiagram) -> Result<LimCochainComplex> {
    let poset = diagram.index();
    let allowed = vec![true; poset.len()];
    let top = poset.longest_chain_len();
    let mut degrees: Vec<CochainDegree> = Vec::new();
    for p in 0..=top {
        let chains = poset.strict_chains_in(&allowed, p);
        let mut offsets = Vec::with_capacity(chains.len());
        let mut total = 0usize;
        for c in &chains {
            offsets.push(total);
            total += diagram.value(*c.last().unwrap()).ambient_rank();
        }
        let nums: Vec<&Lattice> = chains
            .iter()
            .map(|c| diagram.value(*c.last().unwrap()).numerator())
            .collect();
        let dens: Vec<&Lattice> = chains
            .iter()
            .map(|c| diagram.value(*c.last().unwrap()).denominator())
            .collect();
        let group = SubquotientGroup::new(
            direct_sum_lattice(&nums, &offsets, total)?,
            direct_sum_lattice(&dens, &offsets, total)?,
        )?;
        degrees.push(CochainDegree {
            chains,
            offsets,
            group,
        });
    }
    let mut coboundaries = Vec::new();
    for p in 0..top {
        let src = &degrees[p];
        let dst = &degrees[p + 1];
        let src_total = src.group.ambient_rank();
        let dst_total = dst.group.ambient_rank();
        let mut d = IntegerMatrix::zero(dst_total, src_total);
        let pos: HashMap<&Vec<usize>, usize> =
            src.chains.iter().enumerate().map(|(i, c)| (c, i)).collect();
        for (ci, c) in dst.chains.iter().enumerate() {
            let dst_off = dst.offsets[ci];
            let top_el = *c.last().unwrap();
            for i in 0..c.len() {
                let mut face = c.clone();
                face.remove(i);
                let fi = pos[&face];
                let src_off = src.offsets[fi];
                let sign: i64 = if i % 2 == 0 { 1 } else { -1 };
                if i == c.len() - 1 {
                    // the old top was deleted: push along the structure map
                    let m = diagram.map(*face.last().unwrap(), top_el);
                    for r in 0..m.matrix().rows() {
                        for s in 0..m.matrix().cols() {
                            let v = d.get(dst_off + r, src_off + s)
                                + BigInt::from(sign) * m.matrix().get(r, s);
                            d.set(dst_off + r, src_off + s, v);
                        }
                    }
                } else {
                    // same top: signed identity block
                    let rank = diagram.value(top_el).ambient_rank();
                    for r in 0..rank {
                        let v = d.get(dst_off + r, src_off + r) + BigInt::from(sign);
                        d.set(dst_off + r, src_off + r, v);
                    }
                }
            }
        }
        coboundaries.push(d);
    }
    // sanity: d o d must vanish as a map of groups
    for p in 0..coboundaries.len().saturating_sub(1) {
        let dd = coboundaries[p + 1].mul(&coboundaries[p])?;
        let img = degrees[p].group.numerator().image(&dd)?;
        if !degrees[p + 2].group.denominator().contains_lattice(&img)? {
            return Err(Error::InvalidComplex(
                "lim coboundary does not square to zero".into(),
            ));
        }
    }
    Ok(LimCochainComplex {
        degrees,
        coboundaries,
    })
}

#[derive(Clone, Debug)]
pub struct LimpResult {
    pub p: i64,
    pub group: SubquotientGroup,
    /// false when p lies outside the cochain range (the group is then
    /// trivially zero)
    pub in_range: bool,
}

/// lim^p of the diagram: cohomology of the cosimplicial cochain complex.
pub fn limp(diagram: &AbelianDiagram, p: i64) -> Result<LimpResult> {
    let cx = lim_cochain_complex(diagram)?;
    limp_of(&cx, p)
}

pub fn limp_of(cx: &LimCochainComplex, p: i64) -> Result<LimpResult> {
    if p < 0 || p as usize >= cx.degrees.len() {
        return Ok(LimpResult {
            p,
            group: SubquotientGroup::trivial(0),
            in_range: false,
        });
    }
    let pu = p as usize;
    let here = &cx.degrees[pu].group;
    // cocycles: elements of num mapped into den by the outgoing coboundary
    let num = if pu < cx.coboundaries.len() {
        let den_next = cx.degrees[pu + 1].group.denominator();
        here.numerator()
            .intersection(&den_next.preimage(&cx.coboundaries[pu])?)?
    } else {
        here.numerator().clone()
    };
    // coboundaries: image of the previous numerator, plus den
    let den = if pu > 0 {
        cx.degrees[pu - 1]
            .group
            .numerator()
            .image(&cx.coboundaries[pu - 1])?
            .sum(here.denominator())?
    } else {
        here.denominator().clone()
    };
    Ok(LimpResult {
        p,
        group: SubquotientGroup::new(num, den)?,
        in_range: true,
    })
}

/// The diagram x -> H_q(X(x)) with the induced maps.
pub fn homotopy_groups_diagram(x: &DiagramOfComplexes, q: i64) -> Result<AbelianDiagram> {
    let poset = x.index().clone();
    let values: Vec<SubquotientGroup> = (0..poset.len())
        .map(|i| homology_at(x.value(i), q))
        .collect::<Result<_>>()?;
    let mut cover_maps = HashMap::new();
    for (a, b) in poset.covers() {
        let m = x.map(a, b).component(q);
        cover_maps.insert(
            (a, b),
            SubquotientMap::new(m, values[a].clone(), values[b].clone())?,
        );
    }
    AbelianDiagram::new(poset, values, cover_maps)
}

/// Independent description of lim^0: tuples over the elements, one per
/// value, compatible along every covering relation, modulo degenerate
/// tuples. Used as an oracle against `limp(_, 0)`.
pub fn lim0_compatible_tuples(diagram: &AbelianDiagram) -> Result<SubquotientGroup> {
    let poset = diagram.index();
    let n = poset.len();
    let mut offsets = Vec::with_capacity(n);
    let mut total = 0usize;
    for x in 0..n {
        offsets.push(total);
        total += diagram.value(x).ambient_rank();
    }
    let nums: Vec<&Lattice> = (0..n).map(|x| diagram.value(x).numerator()).collect();
    let dens: Vec<&Lattice> = (0..n).map(|x| diagram.value(x).denominator()).collect();
    let big_num = direct_sum_lattice(&nums, &offsets, total)?;
    let big_den = direct_sum_lattice(&dens, &offsets, total)?;
    let mut compatible = big_num;
    for (a, b) in poset.covers() {
        let m = diagram.map(a, b);
        let ra = diagram.value(a).ambient_rank();
        let rb = diagram.value(b).ambient_rank();
        // difference map tuple -> M(a_a) - a_b, landing in value(b) ambient
        let mut diff = IntegerMatrix::zero(rb, total);
        for r in 0..rb {
            for s in 0..ra {
                diff.set(r, offsets[a] + s, m.matrix().get(r, s).clone());
            }
            let v = diff.get(r, offsets[b] + r) - BigInt::from(1);
            diff.set(r, offsets[b] + r, v);
        }
        compatible = compatible.intersection(&diagram.value(b).denominator().preimage(&diff)?)?;
    }
    SubquotientGroup::new(compatible, big_den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::homology;
    use crate::nerve::order_complex_chains;
    use crate::poset::{generate, Poset};
    use crate::subquotient::presented_group;

    fn segment() -> Poset {
        Poset::from_relations(&["a", "b", "ab"], &[("a", "ab"), ("b", "ab")]).unwrap()
    }

    fn z() -> SubquotientGroup {
        SubquotientGroup::free(1)
    }

    #[test]
    fn lim0_of_constant_z_on_connected_poset() {
        let d = AbelianDiagram::constant(segment(), z()).unwrap();
        let l0 = limp(&d, 0).unwrap();
        assert!(l0.in_range);
        assert_eq!(l0.group.structure(), (1, vec![]));
        let l1 = limp(&d, 1).unwrap();
        assert!(l1.group.is_trivial());
    }

    #[test]
    fn lim0_matches_compatible_tuples() {
        let d = AbelianDiagram::constant(segment(), presented_group(
            &IntegerMatrix::from_rows_i64(&[&[6]]),
        ).unwrap())
        .unwrap();
        let via_complex = limp(&d, 0).unwrap().group;
        let via_tuples = lim0_compatible_tuples(&d).unwrap();
        assert!(via_complex.isomorphic(&via_tuples));
    }

    #[test]
    fn constant_diagram_limp_is_nerve_cohomology() {
        // circle-shaped poset: lim^0 = A, lim^1 = A for constant A
        let pair = generate("cube:2-boundary").unwrap();
        let p = pair.ambient().clone();
        for a in [
            z(),
            presented_group(&IntegerMatrix::from_rows_i64(&[&[2]])).unwrap(),
            presented_group(&IntegerMatrix::from_rows_i64(&[&[6]])).unwrap(),
        ] {
            let d = AbelianDiagram::constant(p.clone(), a.clone()).unwrap();
            let l0 = limp(&d, 0).unwrap().group;
            let l1 = limp(&d, 1).unwrap().group;
            assert_eq!(l0.structure(), a.structure());
            assert_eq!(l1.structure(), a.structure());
            assert!(limp(&d, 2).unwrap().group.is_trivial());
        }
        // cross-check connectivity data against nerve homology
        let h = homology(&order_complex_chains(&p, false).unwrap()).unwrap();
        assert_eq!(h.group(1).structure(), (1, vec![]));
    }

    #[test]
    fn out_of_range_is_flagged_zero() {
        let d = AbelianDiagram::constant(segment(), z()).unwrap();
        let r = limp(&d, 7).unwrap();
        assert!(!r.in_range);
        assert!(r.group.is_trivial());
        let r = limp(&d, -1).unwrap();
        assert!(!r.in_range);
    }

    #[test]
    fn pullback_poset_lim0_is_fibre_product() {
        // a -> ab <- b with Z -2-> Z <-3- Z: lim^0 = {(x,y,z): 2x=z=3y} = Z
        let p = segment();
        let times = |k: i64, src: &SubquotientGroup, dst: &SubquotientGroup| {
            SubquotientMap::new(
                IntegerMatrix::from_rows_i64(&[&[k]]),
                src.clone(),
                dst.clone(),
            )
            .unwrap()
        };
        let vals = vec![z(), z(), z()];
        let mut maps = HashMap::new();
        maps.insert((0, 2), times(2, &vals[0], &vals[2]));
        maps.insert((1, 2), times(3, &vals[1], &vals[2]));
        let d = AbelianDiagram::new(p, vals, maps).unwrap();
        let l0 = limp(&d, 0).unwrap().group;
        assert_eq!(l0.structure(), (1, vec![]));
        // lim^1 is the cokernel of (x, y) -> 2x - 3y, which is onto
        assert!(limp(&d, 1).unwrap().group.is_trivial());
        let oracle = lim0_compatible_tuples(&d).unwrap();
        assert!(l0.isomorphic(&oracle));
    }

    #[test]
    fn lim1_can_be_nontrivial() {
        // a -> ab <- b with Z -2-> Z <-0- 0: lim^1 = Z/2
        let p = segment();
        let zero = SubquotientGroup::trivial(0);
        let vals = vec![z(), zero.clone(), z()];
        let mut maps = HashMap::new();
        maps.insert(
            (0, 2),
            SubquotientMap::new(
                IntegerMatrix::from_rows_i64(&[&[2]]),
                vals[0].clone(),
                vals[2].clone(),
            )
            .unwrap(),
        );
        maps.insert(
            (1, 2),
            SubquotientMap::new(IntegerMatrix::zero(1, 0), vals[1].clone(), vals[2].clone())
                .unwrap(),
        );
        let d = AbelianDiagram::new(p, vals, maps).unwrap();
        let l1 = limp(&d, 1).unwrap().group;
        assert_eq!(l1.structure(), (0, vec![BigInt::from(2)]));
    }

    #[test]
    fn homotopy_groups_diagram_of_constant() {
        let c = crate::nerve::ChainComplex::concentrated(0, 1, "e");
        let x = DiagramOfComplexes::constant(segment(), c).unwrap();
        let d = homotopy_groups_diagram(&x, 0).unwrap();
        assert_eq!(d.value(0).structure(), (1, vec![]));
        assert!(limp(&d, 0).unwrap().group.structure() == (1, vec![]));
        let d1 = homotopy_groups_diagram(&x, 1).unwrap();
        assert!(d1.value(0).is_trivial());
    }

    #[test]
    fn non_functorial_rejected() {
        let p = Poset::from_relations(
            &["x", "a", "b", "y"],
            &[("x", "a"), ("x", "b"), ("a", "y"), ("b", "y")],
        )
        .unwrap();
        let vals = vec![z(); 4];
        let times = |k: i64| {
            SubquotientMap::new(IntegerMatrix::from_rows_i64(&[&[k]]), z(), z()).unwrap()
        };
        let mut maps = HashMap::new();
        maps.insert((0, 1), times(1));
        maps.insert((0, 2), times(2));
        maps.insert((1, 3), times(1));
        maps.insert((2, 3), times(1));
        assert!(matches!(
            AbelianDiagram::new(p, vals, maps),
            Err(Error::NotFunctorial(_, _))
        ));
    }
}
