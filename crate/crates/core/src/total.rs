//! Total complexes of the simplicial-replacement double complexes:
//! chain-level homotopy colimit, homotopy limit, and the total cofibre Γ
//! (quotient of hocolim over C by hocolim over the ideal D), together
//! with the degree-shift equivalence check for ball pairs.
//!
//! Conventions, frozen: hocolim places the value at the bottom of a
//! chain; deleting the bottom element applies the diagram map, other
//! faces carry sign (-1)^i, and the internal differential carries sign
//! (-1)^p. holim places the value at the top of a chain; inserting a new
//! top applies the diagram map with sign (-1)^(p+1), other insertions
//! carry (-1)^i, internal differential again (-1)^p. Total degrees are
//! p + q for hocolim and q - p for holim.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::conditions::{classify_pair, satisfies_conditions};
use crate::diagram::DiagramOfComplexes;
use crate::error::{Error, Result};
use crate::homology::homology;
use crate::matrix::IntegerMatrix;
use crate::nerve::ChainComplex;
use crate::poset::PosetPair;

/// A chain complex with bigrading metadata (p = chain length, q =
/// internal degree) remembering the originating filtration by p.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    complex: ChainComplex,
    /// Per total degree (aligned with the complex bases): (p, q).
    bigrading: HashMap<i64, Vec<(usize, i64)>>,
}

impl TotalComplex {
    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn into_complex(self) -> ChainComplex {
        self.complex
    }

    /// Filtration level (chain length p) of every basis element in total
    /// degree n.
    pub fn filtration(&self, n: i64) -> Vec<usize> {
        self.bigrading
            .get(&n)
            .map(|v| v.iter().map(|&(p, _)| p).collect())
            .unwrap_or_default()
    }

    pub fn bigraded_rank(&self, p: usize, q: i64) -> usize {
        self.bigrading
            .values()
            .flatten()
            .filter(|&&(bp, bq)| bp == p && bq == q)
            .count()
    }

    pub fn max_filtration(&self) -> usize {
        self.bigrading
            .values()
            .flatten()
            .map(|&(p, _)| p)
            .max()
            .unwrap_or(0)
    }
}

// basis element of a total complex: (chain length p, chain, internal
// degree q, index into the value's degree-q basis)
type Cell = (usize, Vec<usize>, i64, usize);

fn build_total(
    diagram: &DiagramOfComplexes,
    chains_by_len: &[Vec<Vec<usize>>],
    covariant: bool,
) -> Result<TotalComplex> {
    let poset = diagram.index();
    let (qlo, qhi) = diagram.degree_window();
    let max_p = chains_by_len.len().saturating_sub(1) as i64;
    // collect cells per total degree, ordered by (p, chain, internal basis)
    let carrier = |c: &Vec<usize>| if covariant { c[0] } else { *c.last().unwrap() };
    let mut cells: HashMap<i64, Vec<Cell>> = HashMap::new();
    for (p, chains) in chains_by_len.iter().enumerate() {
        for c in chains {
            let value = diagram.value(carrier(c));
            for q in value.lo()..=value.hi() {
                let n = if covariant { p as i64 + q } else { q - p as i64 };
                for j in 0..value.rank(q) {
                    cells.entry(n).or_default().push((p, c.clone(), q, j));
                }
            }
        }
    }
    let lo = if covariant { qlo } else { qlo - max_p };
    let hi = if covariant { qhi + max_p } else { qhi };
    if qhi < qlo {
        return Ok(TotalComplex {
            complex: ChainComplex::zero(),
            bigrading: HashMap::new(),
        });
    }
    let empty: Vec<Cell> = Vec::new();
    // position lookup per degree
    let pos: HashMap<i64, HashMap<Cell, usize>> = cells
        .iter()
        .map(|(&n, v)| {
            (
                n,
                v.iter()
                    .enumerate()
                    .map(|(i, t)| (t.clone(), i))
                    .collect(),
            )
        })
        .collect();
    let kept: HashMap<usize, HashMap<&Vec<usize>, bool>> = chains_by_len
        .iter()
        .enumerate()
        .map(|(p, chains)| (p, chains.iter().map(|c| (c, true)).collect()))
        .collect();
    let is_kept = |c: &Vec<usize>| {
        let p = c.len() - 1;
        kept.get(&p).map_or(false, |m| m.contains_key(c))
    };
    let mut bases = Vec::new();
    let mut diffs = Vec::new();
    let mut bigrading = HashMap::new();
    for n in lo..=hi {
        let cur = cells.get(&n).unwrap_or(&empty);
        let prev = cells.get(&(n - 1)).unwrap_or(&empty);
        bases.push(
            cur.iter()
                .map(|(_, c, q, j)| {
                    let value = diagram.value(carrier(c));
                    format!("[{}]·{}@{}", poset.chain_label(c), value.basis(*q)[*j], q)
                })
                .collect::<Vec<String>>(),
        );
        bigrading.insert(
            n,
            cur.iter().map(|&(p, _, q, _)| (p, q)).collect::<Vec<_>>(),
        );
        let rows = if n == lo { 0 } else { prev.len() };
        let mut d = IntegerMatrix::zero(rows, cur.len());
        let empty_pos = HashMap::new();
        if n > lo {
            let prev_pos = pos.get(&(n - 1)).unwrap_or(&empty_pos);
            for (col, (p, c, q, j)) in cur.iter().enumerate() {
                let p = *p;
                let x = carrier(c);
                let value = diagram.value(x);
                let sign_p = if p % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                // internal differential, sign (-1)^p
                let dv = value.d(*q);
                for r in 0..value.rank(*q - 1) {
                    let coeff = dv.get(r, *j);
                    if coeff.is_zero() {
                        continue;
                    }
                    if let Some(&row) = prev_pos.get(&(p, c.clone(), *q - 1, r)) {
                        let v = d.get(row, col) + &sign_p * coeff;
                        d.set(row, col, v);
                    }
                }
                if covariant {
                    // face deletions lower p
                    if p > 0 {
                        for i in 0..=p {
                            let mut face = c.clone();
                            face.remove(i);
                            if !is_kept(&face) {
                                continue;
                            }
                            let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                            if i == 0 {
                                // bottom deleted: push the value forward
                                let m = diagram.map(x, face[0]).component(*q);
                                for r in 0..m.rows() {
                                    let coeff = m.get(r, *j);
                                    if coeff.is_zero() {
                                        continue;
                                    }
                                    if let Some(&row) =
                                        prev_pos.get(&(p - 1, face.clone(), *q, r))
                                    {
                                        let v = d.get(row, col) + &sign * coeff;
                                        d.set(row, col, v);
                                    }
                                }
                            } else if let Some(&row) = prev_pos.get(&(p - 1, face.clone(), *q, *j))
                            {
                                let v = d.get(row, col) + sign;
                                d.set(row, col, v);
                            }
                        }
                    }
                } else {
                    // insertions raise p (total degree q - p drops by one)
                    for y in 0..poset.len() {
                        if c.contains(&y) {
                            continue;
                        }
                        let len = c.len();
                        for i in 0..=len {
                            let below_ok = i == 0 || poset.is_less(c[i - 1], y);
                            let above_ok = i == len || poset.is_less(y, c[i]);
                            if !(below_ok && above_ok) {
                                continue;
                            }
                            let mut sup = c.clone();
                            sup.insert(i, y);
                            if !is_kept(&sup) {
                                continue;
                            }
                            let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                            if i == len {
                                // new top: apply the diagram map
                                let m = diagram.map(x, y).component(*q);
                                for r in 0..m.rows() {
                                    let coeff = m.get(r, *j);
                                    if coeff.is_zero() {
                                        continue;
                                    }
                                    if let Some(&row) =
                                        prev_pos.get(&(p + 1, sup.clone(), *q, r))
                                    {
                                        let v = d.get(row, col) + &sign * coeff;
                                        d.set(row, col, v);
                                    }
                                }
                            } else if let Some(&row) = prev_pos.get(&(p + 1, sup.clone(), *q, *j)) {
                                let v = d.get(row, col) + sign;
                                d.set(row, col, v);
                            }
                        }
                    }
                }
            }
        }
        diffs.push(d);
    }
    // trim empty top degrees for a tight window
    while bases.last().is_some_and(|b: &Vec<String>| b.is_empty()) {
        bases.pop();
        diffs.pop();
    }
    let mut lo = lo;
    while bases.first().is_some_and(|b| b.is_empty()) {
        bases.remove(0);
        diffs.remove(0);
        lo += 1;
    }
    if !diffs.is_empty() {
        diffs[0] = IntegerMatrix::zero(0, bases[0].len());
    }
    let complex = ChainComplex::new(lo, bases, diffs)?;
    Ok(TotalComplex { complex, bigrading })
}

fn chains_with<F: Fn(&Vec<usize>) -> bool>(
    pair_poset: &crate::poset::Poset,
    keep: F,
) -> Vec<Vec<Vec<usize>>> {
    let allowed = vec![true; pair_poset.len()];
    let top = pair_poset.longest_chain_len();
    (0..=top)
        .map(|len| {
            pair_poset
                .strict_chains_in(&allowed, len)
                .into_iter()
                .filter(|c| keep(c))
                .collect()
        })
        .collect()
}

/// Chain-level homotopy colimit over the selected sub-poset (all of C, or
/// the order ideal).
pub fn hocolim_total(diagram: &DiagramOfComplexes, over: &[bool]) -> Result<TotalComplex> {
    let p = diagram.index();
    if over.len() != p.len() {
        return Err(Error::Input("selector mask length mismatch".into()));
    }
    // the selector must be a sub-poset (any subset is); chains entirely inside
    let chains = chains_with(p, |c| c.iter().all(|&x| over[x]));
    build_total(diagram, &chains, true)
}

/// Total cofibre: hocolim over C modulo the subcomplex of chains lying in
/// D. Since D is downward closed a chain lies in D iff its top does.
pub fn gamma_total_complex(diagram: &DiagramOfComplexes, pair: &PosetPair) -> Result<TotalComplex> {
    let chains = chains_with(diagram.index(), |c| !pair.ideal_mask()[*c.last().unwrap()]);
    build_total(diagram, &chains, true)
}

/// Chain-level homotopy limit over the full index poset.
pub fn holim_total(diagram: &DiagramOfComplexes) -> Result<TotalComplex> {
    let chains = chains_with(diagram.index(), |_| true);
    build_total(diagram, &chains, false)
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeComparison {
    pub holim_degree: i64,
    pub gamma_degree: i64,
    pub holim_group: String,
    pub gamma_group: String,
    pub isomorphic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub ball_dim: usize,
    pub rows: Vec<DegreeComparison>,
    pub all_isomorphic: bool,
}

/// For a ball pair of dimension m satisfying (P1)/(P2): H_n(holim) must
/// agree with H_{n+m}(Γ) as abelian groups in every degree.
pub fn verify_ball_equivalence(
    diagram: &DiagramOfComplexes,
    pair: &PosetPair,
) -> Result<EquivalenceReport> {
    let m = pair
        .ball_dim()
        .ok_or_else(|| Error::Input("pair carries no ball dimension metadata".into()))?;
    if !satisfies_conditions(pair)? {
        let report = classify_pair(pair)?;
        return Err(Error::ConditionsFail(
            serde_json::to_string(&report).unwrap_or_else(|_| "unserializable report".into()),
        ));
    }
    let holim = holim_total(diagram)?;
    let gamma = gamma_total_complex(diagram, pair)?;
    let h_holim = homology(holim.complex())?;
    let h_gamma = homology(gamma.complex())?;
    let lo = h_holim.lo().min(h_gamma.lo() - m as i64) - 1;
    let hi = h_holim.hi().max(h_gamma.hi() - m as i64) + 1;
    let mut rows = Vec::new();
    let mut all = true;
    for n in lo..=hi {
        let a = h_holim.group(n);
        let b = h_gamma.group(n + m as i64);
        let isomorphic = a.isomorphic(&b);
        all &= isomorphic;
        rows.push(DegreeComparison {
            holim_degree: n,
            gamma_degree: n + m as i64,
            holim_group: a.to_string(),
            gamma_group: b.to_string(),
            isomorphic,
        });
    }
    Ok(EquivalenceReport {
        ball_dim: m,
        rows,
        all_isomorphic: all,
    })
}
