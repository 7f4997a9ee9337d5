//! The spectral sequence of the chain-length filtration on a total
//! complex, over an exact coefficient field, with explicit pages and
//! differentials: Z_r^{p} = F^p ∩ d^{-1}(F^{p+r}) and
//! E_r^{p} = Z_r^{p} / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}).
//!
//! Indexing: an entry (p, q) sits in total degree n = q - p; the page-r
//! differential goes (p, q) -> (p+r, q+r-1), dropping n by one. Pages
//! are computed up to r_max = longest chain + 2, past which everything
//! has collapsed.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::diagram::DiagramOfComplexes;
use crate::error::{Error, Result};
use crate::field::{field_homology_dims, Field, FieldMatrix, Subspace};
use crate::total::{holim_total, TotalComplex};

#[derive(Clone, Debug)]
pub struct Page {
    pub r: usize,
    /// (p, q) -> dimension, nonzero entries only.
    pub entries: BTreeMap<(i64, i64), usize>,
    /// Matrix of d_r out of (p, q), for entries where source and target
    /// are both nonzero.
    pub differentials: BTreeMap<(i64, i64), FieldMatrix>,
}

#[derive(Clone, Debug)]
pub struct SpectralSequence {
    pub field: Field,
    pub r_max: usize,
    /// pages[r] is E_r, r = 0 ..= r_max.
    pub pages: Vec<Page>,
}

impl SpectralSequence {
    pub fn page(&self, r: usize) -> &Page {
        &self.pages[r.min(self.pages.len() - 1)]
    }

    pub fn infinity(&self) -> &Page {
        self.pages.last().expect("at least one page")
    }
}

struct Tower {
    field: Field,
    d: HashMap<i64, FieldMatrix>,
    filt: HashMap<i64, Vec<usize>>,
    zcache: HashMap<(i64, i64, i64), Subspace>,
}

impl Tower {
    fn new(total: &TotalComplex, field: &Field) -> Result<Tower> {
        let c = total.complex();
        let mut d = HashMap::new();
        let mut filt = HashMap::new();
        for n in c.lo()..=c.hi() {
            d.insert(n, FieldMatrix::from_integer_matrix(field, &c.d(n)));
            filt.insert(n, total.filtration(n));
        }
        // the differential must not lower filtration
        for n in c.lo()..=c.hi() {
            let dn = &d[&n];
            let rows = filt.get(&(n - 1)).cloned().unwrap_or_default();
            let cols = &filt[&n];
            for j in 0..dn.cols() {
                for i in 0..dn.rows() {
                    if !dn.get(i, j).is_zero() && rows[i] < cols[j] {
                        return Err(Error::Input(
                            "differential lowers the filtration; not a cohomological tower"
                                .into(),
                        ));
                    }
                }
            }
        }
        Ok(Tower {
            field: field.clone(),
            d,
            filt,
            zcache: HashMap::new(),
        })
    }

    fn rank(&self, n: i64) -> usize {
        self.filt.get(&n).map_or(0, |v| v.len())
    }

    fn f(&self, p: i64, n: i64) -> Subspace {
        let rank = self.rank(n);
        let cols: Vec<Vec<BigRational>> = self
            .filt
            .get(&n)
            .map(|f| {
                f.iter()
                    .enumerate()
                    .filter(|&(_, &fp)| fp as i64 >= p)
                    .map(|(i, _)| {
                        let mut v = vec![BigRational::zero(); rank];
                        v[i] = num_traits::One::one();
                        v
                    })
                    .collect()
            })
            .unwrap_or_default();
        Subspace::from_columns(self.field.clone(), rank, &cols)
    }

    fn dmat(&self, n: i64) -> FieldMatrix {
        self.d
            .get(&n)
            .cloned()
            .unwrap_or_else(|| FieldMatrix::zero(self.field.clone(), self.rank(n - 1), self.rank(n)))
    }

    /// Z_r^{p} in total degree n; r < 0 degenerates to F^p.
    fn z(&mut self, r: i64, p: i64, n: i64) -> Result<Subspace> {
        if let Some(s) = self.zcache.get(&(r, p, n)) {
            return Ok(s.clone());
        }
        let s = if r < 0 {
            self.f(p, n)
        } else {
            let target = self.f(p + r, n - 1);
            self.f(p, n).intersection(&target.preimage(&self.dmat(n))?)
        };
        self.zcache.insert((r, p, n), s.clone());
        Ok(s)
    }

    /// Boundary part B_r^{p} = Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}.
    fn b(&mut self, r: i64, p: i64, n: i64) -> Result<Subspace> {
        let stay = self.z(r - 1, p + 1, n)?;
        let incoming = self.z(r - 1, p - r + 1, n + 1)?.image(&self.dmat(n + 1))?;
        Ok(stay.sum(&incoming))
    }
}

/// Full spectral sequence of the filtration by chain length.
pub fn ss_pages(total: &TotalComplex, field: &Field) -> Result<SpectralSequence> {
    let c = total.complex();
    let mut tower = Tower::new(total, field)?;
    let maxp = total.max_filtration() as i64;
    let r_max = (maxp + 2) as usize;
    let (nlo, nhi) = (c.lo() - 1, c.hi() + 1);
    let mut pages = Vec::with_capacity(r_max + 1);
    for r in 0..=r_max as i64 {
        let mut entries = BTreeMap::new();
        let mut differentials = BTreeMap::new();
        // representatives per entry for building d_r
        let mut reps: HashMap<(i64, i64), Vec<Vec<BigRational>>> = HashMap::new();
        let mut bspaces: HashMap<(i64, i64), Subspace> = HashMap::new();
        for n in nlo..=nhi {
            for p in 0..=maxp {
                let z = tower.z(r, p, n)?;
                let b = tower.b(r, p, n)?;
                let rp = z.quotient_representatives(&b)?;
                if !rp.is_empty() {
                    entries.insert((p, n + p), rp.len());
                    reps.insert((p, n), rp);
                    bspaces.insert((p, n), b);
                }
            }
        }
        for (&(p, n), src_reps) in &reps {
            let (tp, tn) = (p + r, n - 1);
            let Some(dst_reps) = reps.get(&(tp, tn)) else {
                continue;
            };
            let b = &bspaces[&(tp, tn)];
            // solve against [boundary basis | representatives]
            let mut cols: Vec<Vec<BigRational>> =
                (0..b.dim()).map(|j| b.basis().column(j)).collect();
            cols.extend(dst_reps.iter().cloned());
            let solver = FieldMatrix::from_columns(field.clone(), tower.rank(tn), &cols);
            let dn = tower.dmat(n);
            let mut m = FieldMatrix::zero(field.clone(), dst_reps.len(), src_reps.len());
            for (j, v) in src_reps.iter().enumerate() {
                let w = dn.mul_vec(v)?;
                let x = solver.solve(&w).ok_or_else(|| {
                    Error::InvalidComplex("page differential leaves its target".into())
                })?;
                for (i, xi) in x[b.dim()..].iter().enumerate() {
                    m.set(i, j, xi.clone());
                }
            }
            differentials.insert((p, n + p), m);
        }
        pages.push(Page {
            r: r as usize,
            entries,
            differentials,
        });
    }
    verify_pages(&pages)?;
    Ok(SpectralSequence {
        field: field.clone(),
        r_max,
        pages,
    })
}

// internal invariants: d_r o d_r = 0 and E_{r+1} = H(E_r, d_r)
fn verify_pages(pages: &[Page]) -> Result<()> {
    for page in pages {
        let r = page.r as i64;
        for (&(p, q), m) in &page.differentials {
            if let Some(next) = page.differentials.get(&(p + r, q + r - 1)) {
                let prod = next.mul(m)?;
                for i in 0..prod.rows() {
                    for j in 0..prod.cols() {
                        if !prod.get(i, j).is_zero() {
                            return Err(Error::InvalidComplex(
                                "page differential does not square to zero".into(),
                            ));
                        }
                    }
                }
            }
        }
    }
    for w in pages.windows(2) {
        let (cur, next) = (&w[0], &w[1]);
        let r = cur.r as i64;
        let keys: std::collections::BTreeSet<(i64, i64)> = cur
            .entries
            .keys()
            .chain(next.entries.keys())
            .copied()
            .collect();
        for (p, q) in keys {
            let dim = *cur.entries.get(&(p, q)).unwrap_or(&0);
            let out_rank = cur
                .differentials
                .get(&(p, q))
                .map(|m| m.rank())
                .unwrap_or(0);
            let in_rank = cur
                .differentials
                .get(&(p - r, q - r + 1))
                .map(|m| m.rank())
                .unwrap_or(0);
            let expected = dim - out_rank - in_rank;
            if *next.entries.get(&(p, q)).unwrap_or(&0) != expected {
                return Err(Error::InvalidComplex(format!(
                    "page {} entry ({}, {}) has dimension {} but homology of the previous page gives {}",
                    next.r,
                    p,
                    q,
                    next.entries.get(&(p, q)).unwrap_or(&0),
                    expected
                )));
            }
        }
    }
    Ok(())
}

// quotient presentation of H_q(value ⊗ F): boundary subspace and coset
// representatives inside the cycle subspace
struct FieldHomology {
    boundaries: Subspace,
    reps: Vec<Vec<BigRational>>,
}

fn field_homology_presentation(
    c: &crate::nerve::ChainComplex,
    q: i64,
    field: &Field,
) -> Result<FieldHomology> {
    let dq = FieldMatrix::from_integer_matrix(field, &c.d(q));
    let dq1 = FieldMatrix::from_integer_matrix(field, &c.d(q + 1));
    let cycles = Subspace::from_matrix(&dq.kernel());
    let boundaries = Subspace::from_matrix(&dq1);
    let reps = cycles.quotient_representatives(&boundaries)?;
    Ok(FieldHomology { boundaries, reps })
}

fn induced_field_matrix(
    m: &FieldMatrix,
    src: &FieldHomology,
    dst: &FieldHomology,
    field: &Field,
    ambient_dst: usize,
) -> Result<FieldMatrix> {
    let mut cols: Vec<Vec<BigRational>> = (0..dst.boundaries.dim())
        .map(|j| dst.boundaries.basis().column(j))
        .collect();
    cols.extend(dst.reps.iter().cloned());
    let solver = FieldMatrix::from_columns(field.clone(), ambient_dst, &cols);
    let mut out = FieldMatrix::zero(field.clone(), dst.reps.len(), src.reps.len());
    for (j, v) in src.reps.iter().enumerate() {
        let w = m.mul_vec(v)?;
        let x = solver
            .solve(&w)
            .ok_or_else(|| Error::InvalidMap("induced map leaves the cycle space".into()))?;
        for (i, xi) in x[dst.boundaries.dim()..].iter().enumerate() {
            out.set(i, j, xi.clone());
        }
    }
    Ok(out)
}

/// dim_F lim^p of the functor x -> H_q(X(x) ⊗ F), for p = 0 ..= longest
/// chain length.
pub fn field_limp_dims(x: &DiagramOfComplexes, q: i64, field: &Field) -> Result<Vec<usize>> {
    let poset = x.index();
    let allowed = vec![true; poset.len()];
    let top = poset.longest_chain_len();
    let homs: Vec<FieldHomology> = (0..poset.len())
        .map(|i| field_homology_presentation(x.value(i), q, field))
        .collect::<Result<_>>()?;
    let mut induced: HashMap<(usize, usize), FieldMatrix> = HashMap::new();
    for a in 0..poset.len() {
        for b in 0..poset.len() {
            if poset.is_less(a, b) {
                let m = FieldMatrix::from_integer_matrix(field, &x.map(a, b).component(q));
                induced.insert(
                    (a, b),
                    induced_field_matrix(&m, &homs[a], &homs[b], field, x.value(b).rank(q))?,
                );
            }
        }
    }
    // cochain complex of the cosimplicial replacement, now over F
    let mut chain_lists: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut dims: Vec<usize> = Vec::new();
    for p in 0..=top {
        let chains = poset.strict_chains_in(&allowed, p);
        dims.push(chains.iter().map(|c| homs[*c.last().unwrap()].reps.len()).sum());
        chain_lists.push(chains);
    }
    let mut ranks = Vec::new();
    for p in 0..top {
        let src = &chain_lists[p];
        let dst = &chain_lists[p + 1];
        let offset = |chains: &Vec<Vec<usize>>, idx: usize| -> usize {
            chains[..idx]
                .iter()
                .map(|c| homs[*c.last().unwrap()].reps.len())
                .sum()
        };
        let pos: HashMap<&Vec<usize>, usize> =
            src.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut d = FieldMatrix::zero(field.clone(), dims[p + 1], dims[p]);
        for (ci, c) in dst.iter().enumerate() {
            let dst_off = offset(dst, ci);
            let top_el = *c.last().unwrap();
            for i in 0..c.len() {
                let mut face = c.clone();
                face.remove(i);
                let src_off = offset(src, pos[&face]);
                let sign = if i % 2 == 0 { 1i64 } else { -1 };
                let sv = field.from_int(&num_bigint::BigInt::from(sign));
                if i == c.len() - 1 {
                    let m = &induced[&(*face.last().unwrap(), top_el)];
                    for r in 0..m.rows() {
                        for s in 0..m.cols() {
                            let v = field.add(
                                d.get(dst_off + r, src_off + s),
                                &field.mul(&sv, m.get(r, s)),
                            );
                            d.set(dst_off + r, src_off + s, v);
                        }
                    }
                } else {
                    for r in 0..homs[top_el].reps.len() {
                        let v = field.add(d.get(dst_off + r, src_off + r), &sv);
                        d.set(dst_off + r, src_off + r, v);
                    }
                }
            }
        }
        ranks.push(d.rank());
    }
    Ok((0..=top)
        .map(|p| {
            let out = if p < top { ranks[p] } else { 0 };
            let inc = if p > 0 { ranks[p - 1] } else { 0 };
            dims[p] - out - inc
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct E2Row {
    pub p: i64,
    pub q: i64,
    pub e2_dim: usize,
    pub limp_dim: usize,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct E2Report {
    pub rows: Vec<E2Row>,
    pub all_match: bool,
}

/// Bousfield-Kan identification over F: E_2^{p,q} of the homotopy-limit
/// spectral sequence must equal lim^p of x -> H_q(X(x) ⊗ F).
pub fn e2_check(x: &DiagramOfComplexes, field: &Field) -> Result<E2Report> {
    let holim = holim_total(x)?;
    let ss = ss_pages(&holim, field)?;
    let page2 = ss.page(2);
    let top = x.index().longest_chain_len() as i64;
    let (qlo, qhi) = x.degree_window();
    let mut rows = Vec::new();
    let mut all = true;
    for q in qlo..=qhi {
        let lims = field_limp_dims(x, q, field)?;
        for p in 0..=top {
            let e2 = *page2.entries.get(&(p, q)).unwrap_or(&0);
            let lp = lims.get(p as usize).copied().unwrap_or(0);
            let matches = e2 == lp;
            all &= matches;
            if e2 != 0 || lp != 0 {
                rows.push(E2Row {
                    p,
                    q,
                    e2_dim: e2,
                    limp_dim: lp,
                    matches,
                });
            }
        }
    }
    // any E2 entry with internal degree outside the value window was not
    // compared above and must vanish
    for (&(p, q), &dim) in &page2.entries {
        if dim > 0 && (q < qlo || q > qhi) {
            all = false;
            rows.push(E2Row {
                p,
                q,
                e2_dim: dim,
                limp_dim: 0,
                matches: false,
            });
        }
    }
    Ok(E2Report {
        rows,
        all_match: all,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AbutmentRow {
    pub n: i64,
    pub einf_total: usize,
    pub homology_dim: usize,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AbutmentReport {
    pub rows: Vec<AbutmentRow>,
    pub all_match: bool,
}

/// Convergence: for each total degree n, the E_infinity dimensions along
/// p must add up to dim_F H_n of the total complex.
pub fn abutment_check(
    total: &TotalComplex,
    ss: &SpectralSequence,
    field: &Field,
) -> Result<AbutmentReport> {
    let inf = ss.infinity();
    let mut per_n: BTreeMap<i64, usize> = BTreeMap::new();
    for (&(p, q), &dim) in &inf.entries {
        *per_n.entry(q - p).or_insert(0) += dim;
    }
    for (n, d) in field_homology_dims(total.complex(), field) {
        per_n.entry(n).or_insert(0);
        let _ = d;
    }
    let hdims: BTreeMap<i64, usize> = field_homology_dims(total.complex(), field)
        .into_iter()
        .collect();
    let mut rows = Vec::new();
    let mut all = true;
    for (&n, &e) in &per_n {
        let h = *hdims.get(&n).unwrap_or(&0);
        let matches = e == h;
        all &= matches;
        rows.push(AbutmentRow {
            n,
            einf_total: e,
            homology_dim: h,
            matches,
        });
    }
    Ok(AbutmentReport {
        rows,
        all_match: all,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::DiagramOfComplexes;
    use crate::nerve::ChainComplex;
    use crate::poset::{generate, Poset};

    fn z_point() -> ChainComplex {
        ChainComplex::concentrated(0, 1, "e")
    }

    fn segment() -> Poset {
        Poset::from_relations(&["a", "b", "ab"], &[("a", "ab"), ("b", "ab")]).unwrap()
    }

    #[test]
    fn constant_diagram_collapses_at_e2() {
        let d = DiagramOfComplexes::constant(segment(), z_point()).unwrap();
        let t = holim_total(&d).unwrap();
        let ss = ss_pages(&t, &Field::Rational).unwrap();
        let p2 = ss.page(2);
        assert_eq!(p2.entries.get(&(0, 0)), Some(&1));
        assert_eq!(p2.entries.len(), 1);
        let r = abutment_check(&t, &ss, &Field::Rational).unwrap();
        assert!(r.all_match);
    }

    #[test]
    fn circle_poset_has_lim1() {
        let pair = generate("cube:2-boundary").unwrap();
        let d = DiagramOfComplexes::constant(pair.ambient().clone(), z_point()).unwrap();
        let t = holim_total(&d).unwrap();
        let ss = ss_pages(&t, &Field::Rational).unwrap();
        let p2 = ss.page(2);
        assert_eq!(p2.entries.get(&(0, 0)), Some(&1));
        assert_eq!(p2.entries.get(&(1, 0)), Some(&1));
        assert_eq!(p2.entries.len(), 2);
        let rep = e2_check(&d, &Field::Rational).unwrap();
        assert!(rep.all_match);
        let ab = abutment_check(&t, &ss, &Field::Rational).unwrap();
        assert!(ab.all_match);
    }

    #[test]
    fn e2_matches_over_f2_with_torsion_values() {
        // value with 2-torsion homology tests the field reduction path
        let value = ChainComplex::new(
            0,
            vec![vec!["x".into()], vec!["y".into()]],
            vec![
                crate::matrix::IntegerMatrix::zero(0, 1),
                crate::matrix::IntegerMatrix::from_rows_i64(&[&[2]]),
            ],
        )
        .unwrap();
        let d = DiagramOfComplexes::constant(segment(), value).unwrap();
        for field in [Field::Rational, Field::prime(2), Field::prime(3)] {
            let rep = e2_check(&d, &field).unwrap();
            assert!(rep.all_match, "field {:?}", field);
            let t = holim_total(&d).unwrap();
            let ss = ss_pages(&t, &field).unwrap();
            let ab = abutment_check(&t, &ss, &field).unwrap();
            assert!(ab.all_match, "field {:?}", field);
        }
    }

    #[test]
    fn field_limp_matches_integral_for_free_values() {
        let pair = generate("cube:2-boundary").unwrap();
        let p = pair.ambient().clone();
        let d = DiagramOfComplexes::constant(p.clone(), z_point()).unwrap();
        let dims = field_limp_dims(&d, 0, &Field::Rational).unwrap();
        assert_eq!(dims[0], 1);
        assert_eq!(dims[1], 1);
        assert!(dims[2..].iter().all(|&x| x == 0));
    }

    #[test]
    fn nonconstant_diagram_spectral_sequence_converges() {
        // a -> ab <- b with values Z, Z, Z and maps 2 and 3
        let p = segment();
        let z = z_point();
        let times = |k: i64| {
            crate::nerve::ChainMap::new(z.clone(), z.clone(), &|n| {
                if n == 0 {
                    crate::matrix::IntegerMatrix::from_rows_i64(&[&[k]])
                } else {
                    crate::matrix::IntegerMatrix::zero(0, 0)
                }
            })
            .unwrap()
        };
        let mut maps = HashMap::new();
        maps.insert((0, 2), times(2));
        maps.insert((1, 2), times(3));
        let d = DiagramOfComplexes::new(p, vec![z.clone(); 3], maps).unwrap();
        for field in [Field::Rational, Field::prime(2), Field::prime(5)] {
            let rep = e2_check(&d, &field).unwrap();
            assert!(rep.all_match, "field {:?}", field);
            let t = holim_total(&d).unwrap();
            let ss = ss_pages(&t, &field).unwrap();
            let ab = abutment_check(&t, &ss, &field).unwrap();
            assert!(ab.all_match, "field {:?}", field);
        }
    }
}
