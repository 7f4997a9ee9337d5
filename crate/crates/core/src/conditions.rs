//! Decides the conditions (P1)/(P2) for a poset pair by integral
//! homology, together with the homological shadows of the stronger
//! inclusion conditions (P1')/(P2').
//!
//! Triviality of stable cohomotopy of a finite pointed complex is decided
//! operationally as triviality of its reduced integral homology; the
//! quotients N(C)/N(A) are realized as relative chain complexes.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::homology::{homology, is_homology_isomorphism, mapping_cone};
use crate::nerve::{inclusion_of_subcomplexes, quotient_map_beta, relative_chains};
use crate::poset::PosetPair;
use crate::subquotient::SubquotientGroup;

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub condition: String,
    pub element: String,
    pub degree: i64,
    pub group: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConditionReport {
    pub p1: BTreeMap<String, bool>,
    pub p2: BTreeMap<String, bool>,
    /// Homological shadows of (P1')/(P2'): necessary consequences of the
    /// weak-equivalence conditions, not equivalent to them.
    pub p1_strong_h: BTreeMap<String, bool>,
    pub p2_strong_h: BTreeMap<String, bool>,
    pub p1_overall: bool,
    pub p2_overall: bool,
    pub witnesses: Vec<Witness>,
}

fn cf_mask(pair: &PosetPair, f: usize) -> Vec<bool> {
    let p = pair.ambient();
    let mut mask = vec![false; p.len()];
    for g in p.complement_star_set(f) {
        mask[g] = true;
    }
    mask
}

fn first_nonzero(summary: &crate::homology::HomologySummary) -> Option<(i64, SubquotientGroup)> {
    summary
        .nonzero_degrees()
        .first()
        .map(|&n| (n, summary.group(n)))
}

/// (P1): N(C)/N(C^F) has trivial homology for every F in D.
pub fn check_p1(pair: &PosetPair, witnesses: Option<&mut Vec<Witness>>) -> Result<BTreeMap<String, bool>> {
    let p = pair.ambient();
    let mut verdicts = BTreeMap::new();
    let mut wit = witnesses;
    for f in pair.ideal_indices() {
        let rel = relative_chains(p, &cf_mask(pair, f))?;
        let h = homology(&rel)?;
        let ok = h.is_trivial();
        if !ok {
            if let Some(w) = wit.as_deref_mut() {
                if let Some((degree, group)) = first_nonzero(&h) {
                    w.push(Witness {
                        condition: "P1".into(),
                        element: p.label(f).to_string(),
                        degree,
                        group: group.to_string(),
                    });
                }
            }
        }
        verdicts.insert(p.label(f).to_string(), ok);
    }
    Ok(verdicts)
}

/// (P2): the cone of β: N(C)/N(D) -> N(C)/N(C^F) has trivial homology
/// for every F outside D.
pub fn check_p2(pair: &PosetPair, witnesses: Option<&mut Vec<Witness>>) -> Result<BTreeMap<String, bool>> {
    let p = pair.ambient();
    let mut verdicts = BTreeMap::new();
    let mut wit = witnesses;
    for f in pair.complement_indices() {
        let beta = quotient_map_beta(pair, p.label(f))?;
        let cone = mapping_cone(&beta)?;
        let h = homology(&cone)?;
        let ok = h.is_trivial();
        if !ok {
            if let Some(w) = wit.as_deref_mut() {
                if let Some((degree, group)) = first_nonzero(&h) {
                    w.push(Witness {
                        condition: "P2".into(),
                        element: p.label(f).to_string(),
                        degree,
                        group: group.to_string(),
                    });
                }
            }
        }
        verdicts.insert(p.label(f).to_string(), ok);
    }
    Ok(verdicts)
}

/// Homological (P1')/(P2'): the inclusions N(C^F) -> N(C) (F in D) and
/// N(D) -> N(C^F) (F outside D) induce homology isomorphisms.
pub fn check_strong(pair: &PosetPair) -> Result<(BTreeMap<String, bool>, BTreeMap<String, bool>)> {
    let p = pair.ambient();
    let all = vec![true; p.len()];
    let mut p1h = BTreeMap::new();
    for f in pair.ideal_indices() {
        let incl = inclusion_of_subcomplexes(p, &cf_mask(pair, f), &all)?;
        p1h.insert(p.label(f).to_string(), is_homology_isomorphism(&incl)?);
    }
    let mut p2h = BTreeMap::new();
    for f in pair.complement_indices() {
        let incl = inclusion_of_subcomplexes(p, pair.ideal_mask(), &cf_mask(pair, f))?;
        p2h.insert(p.label(f).to_string(), is_homology_isomorphism(&incl)?);
    }
    Ok((p1h, p2h))
}

/// Full report over all F, including the strong-condition shadows and
/// failure witnesses.
pub fn classify_pair(pair: &PosetPair) -> Result<ConditionReport> {
    let mut witnesses = Vec::new();
    let p1 = check_p1(pair, Some(&mut witnesses))?;
    let p2 = check_p2(pair, Some(&mut witnesses))?;
    let (p1_strong_h, p2_strong_h) = check_strong(pair)?;
    let p1_overall = p1.values().all(|&v| v);
    let p2_overall = p2.values().all(|&v| v);
    Ok(ConditionReport {
        p1,
        p2,
        p1_strong_h,
        p2_strong_h,
        p1_overall,
        p2_overall,
        witnesses,
    })
}

/// Early-exit variant: stops at the first failing F.
pub fn satisfies_conditions(pair: &PosetPair) -> Result<bool> {
    let p = pair.ambient();
    for f in pair.ideal_indices() {
        let rel = relative_chains(p, &cf_mask(pair, f))?;
        if !crate::homology::is_homologically_trivial(&rel, false)? {
            return Ok(false);
        }
    }
    for f in pair.complement_indices() {
        let beta = quotient_map_beta(pair, p.label(f))?;
        let cone = mapping_cone(&beta)?;
        if !crate::homology::is_homologically_trivial(&cone, false)? {
            return Ok(false);
        }
    }
    Ok(true)
}
