//! Finite posets with a distinguished order ideal, the C^F construction,
//! and combinatorial generators for polytopal face posets (simplices,
//! cubes, products, cones, barycentric subdivision).

use std::collections::HashMap;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ELEMENTS: usize = 512;

pub fn max_elements() -> usize {
    std::env::var("GAMMA_MAX_ELEMENTS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_ELEMENTS)
}

/// Finite strict partial order. The canonical element order is the
/// insertion order of the constructor; every downstream chain basis
/// inherits it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    /// Full strict relation, transitively closed: less[i][j] == (i < j).
    less: Vec<Vec<bool>>,
}

impl Poset {
    /// Build from arbitrary relation pairs; the transitive closure is
    /// computed and cycles rejected.
    pub fn from_relations<S: AsRef<str>>(labels: &[S], pairs: &[(S, S)]) -> Result<Poset> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let n = labels.len();
        if n > max_elements() {
            return Err(Error::TooLarge(n, max_elements()));
        }
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut less = vec![vec![false; n]; n];
        for (a, b) in pairs {
            let &i = index
                .get(a.as_ref())
                .ok_or_else(|| Error::UnknownLabel(a.as_ref().to_string()))?;
            let &j = index
                .get(b.as_ref())
                .ok_or_else(|| Error::UnknownLabel(b.as_ref().to_string()))?;
            less[i][j] = true;
        }
        // Floyd-Warshall closure
        for k in 0..n {
            for i in 0..n {
                if less[i][k] {
                    for j in 0..n {
                        if less[k][j] {
                            less[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            if less[i][i] {
                return Err(Error::Cycle(labels[i].clone()));
            }
        }
        Ok(Poset { labels, index, less })
    }

    pub fn antichain<S: AsRef<str>>(labels: &[S]) -> Result<Poset> {
        Self::from_relations(labels, &[])
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn is_less(&self, i: usize, j: usize) -> bool {
        self.less[i][j]
    }

    pub fn is_leq(&self, i: usize, j: usize) -> bool {
        i == j || self.less[i][j]
    }

    /// Covering relations in canonical order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.less[i][j]
                    && !(0..n).any(|k| self.less[i][k] && self.less[k][j])
                {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Full sub-poset on the given ambient indices (kept in canonical order).
    pub fn subposet(&self, keep: &[usize]) -> Poset {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let labels: Vec<String> = keep.iter().map(|&i| self.labels[i].clone()).collect();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            index.insert(l.clone(), i);
        }
        let less = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| self.less[i][j]).collect())
            .collect();
        Poset { labels, index, less }
    }

    /// Ambient indices of C^F = { G : not (F <= G) }. F itself is removed.
    pub fn complement_star_set(&self, f: usize) -> Vec<usize> {
        (0..self.len()).filter(|&g| !self.is_leq(f, g)).collect()
    }

    pub fn complement_star(&self, f_label: &str) -> Result<Poset> {
        let f = self.index_of(f_label)?;
        Ok(self.subposet(&self.complement_star_set(f)))
    }

    pub fn is_order_ideal(&self, subset: &[usize]) -> bool {
        let mut mask = vec![false; self.len()];
        for &i in subset {
            mask[i] = true;
        }
        for &j in subset {
            for i in 0..self.len() {
                if self.less[i][j] && !mask[i] {
                    return false;
                }
            }
        }
        true
    }

    /// All strictly increasing (p+1)-tuples among `allowed`, in
    /// lexicographic order by canonical element indices.
    pub fn strict_chains_in(&self, allowed: &[bool], p: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(p + 1);
        self.chains_rec(allowed, p + 1, &mut stack, &mut out);
        out
    }

    fn chains_rec(
        &self,
        allowed: &[bool],
        want: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if stack.len() == want {
            out.push(stack.clone());
            return;
        }
        // canonical order need not be a linear extension, so every index
        // is a candidate at every level; poset order still forbids repeats
        for i in 0..self.len() {
            if !allowed[i] {
                continue;
            }
            if let Some(&top) = stack.last() {
                if !self.less[top][i] {
                    continue;
                }
            }
            stack.push(i);
            self.chains_rec(allowed, want, stack, out);
            stack.pop();
        }
    }

    pub fn strict_chains(&self, p: usize) -> ChainBasis {
        let allowed = vec![true; self.len()];
        ChainBasis {
            dimension: p,
            chains: self.strict_chains_in(&allowed, p),
        }
    }

    /// Length (number of relations) of the longest strict chain.
    pub fn longest_chain_len(&self) -> usize {
        let n = self.len();
        let mut height = vec![0usize; n];
        // canonical order is not topological in general; iterate to fixpoint
        let mut changed = true;
        while changed {
            changed = false;
            for j in 0..n {
                for i in 0..n {
                    if self.less[i][j] && height[i] + 1 > height[j] {
                        height[j] = height[i] + 1;
                        changed = true;
                    }
                }
            }
        }
        height.into_iter().max().unwrap_or(0)
    }

    pub fn chain_label(&self, chain: &[usize]) -> String {
        chain
            .iter()
            .map(|&i| self.labels[i].as_str())
            .collect::<Vec<_>>()
            .join("<")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainBasis {
    pub dimension: usize,
    pub chains: Vec<Vec<usize>>,
}

/// A poset with a distinguished order ideal. For generated ball pairs the
/// ball dimension m is recorded as metadata.
#[derive(Clone, Debug)]
pub struct PosetPair {
    ambient: Poset,
    ideal: Vec<bool>,
    ball_dim: Option<usize>,
}

impl PosetPair {
    pub fn new(ambient: Poset, ideal_labels: &[String]) -> Result<PosetPair> {
        let mut ideal = vec![false; ambient.len()];
        for l in ideal_labels {
            ideal[ambient.index_of(l)?] = true;
        }
        // downward closure check
        for j in 0..ambient.len() {
            if !ideal[j] {
                continue;
            }
            for i in 0..ambient.len() {
                if ambient.is_less(i, j) && !ideal[i] {
                    return Err(Error::NotAnIdeal(
                        ambient.label(i).to_string(),
                        ambient.label(j).to_string(),
                    ));
                }
            }
        }
        Ok(PosetPair {
            ambient,
            ideal,
            ball_dim: None,
        })
    }

    pub fn with_ball_dim(mut self, m: usize) -> Self {
        self.ball_dim = Some(m);
        self
    }

    pub fn ambient(&self) -> &Poset {
        &self.ambient
    }

    pub fn ideal_mask(&self) -> &[bool] {
        &self.ideal
    }

    pub fn ideal_indices(&self) -> Vec<usize> {
        (0..self.ambient.len()).filter(|&i| self.ideal[i]).collect()
    }

    pub fn ideal_labels(&self) -> Vec<String> {
        self.ideal_indices()
            .iter()
            .map(|&i| self.ambient.label(i).to_string())
            .collect()
    }

    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.ambient.len()).filter(|&i| !self.ideal[i]).collect()
    }

    pub fn ideal_poset(&self) -> Poset {
        self.ambient.subposet(&self.ideal_indices())
    }

    pub fn ball_dim(&self) -> Option<usize> {
        self.ball_dim
    }
}

// ---------------------------------------------------------------------
// generators

fn vertex_letter(i: usize) -> String {
    // a..z, then a1, b1, ...
    let c = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        c.to_string()
    } else {
        format!("{}{}", c, i / 26)
    }
}

fn poset_from_strict(labels: Vec<String>, less_pred: impl Fn(usize, usize) -> bool) -> Result<Poset> {
    let n = labels.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && less_pred(i, j) {
                pairs.push((labels[i].clone(), labels[j].clone()));
            }
        }
    }
    Poset::from_relations(&labels, &pairs.iter().map(|(a, b)| (a.clone(), b.clone())).collect::<Vec<_>>())
}

/// Face poset of the n-simplex with ideal the proper faces; a PL n-ball.
pub fn simplex_pair(n: usize) -> Result<PosetPair> {
    // nonempty subsets of {0..n}, ordered by (size, lex)
    let verts = n + 1;
    let mut subsets: Vec<Vec<usize>> = (1u64..(1 << verts))
        .map(|mask| (0..verts).filter(|&v| mask >> v & 1 == 1).collect())
        .collect();
    subsets.sort_by_key(|s| (s.len(), s.clone()));
    let labels: Vec<String> = subsets
        .iter()
        .map(|s| s.iter().map(|&v| vertex_letter(v)).collect::<String>())
        .collect();
    let poset = poset_from_strict(labels.clone(), |i, j| {
        subsets[i].len() < subsets[j].len() && subsets[i].iter().all(|v| subsets[j].contains(v))
    })?;
    let ideal: Vec<String> = labels[..labels.len() - 1].to_vec();
    Ok(PosetPair::new(poset, &ideal)?.with_ball_dim(n))
}

/// Face poset of the n-cube with ideal the proper (boundary) faces.
pub fn cube_pair(n: usize) -> Result<PosetPair> {
    // faces are words over {0, 1, *}; * marks a free coordinate
    let mut faces: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..n {
        faces = faces
            .iter()
            .flat_map(|f| {
                [b'0', b'1', b'*'].iter().map(move |&c| {
                    let mut g = f.clone();
                    g.push(c);
                    g
                })
            })
            .collect();
    }
    let dim = |f: &Vec<u8>| f.iter().filter(|&&c| c == b'*').count();
    faces.sort_by_key(|f| (dim(f), f.clone()));
    let labels: Vec<String> = faces
        .iter()
        .map(|f| {
            if f.is_empty() {
                "pt".to_string()
            } else {
                String::from_utf8(f.clone()).unwrap()
            }
        })
        .collect();
    let is_face = |f: &Vec<u8>, g: &Vec<u8>| {
        f.iter()
            .zip(g.iter())
            .all(|(&a, &b)| b == b'*' || a == b)
    };
    let poset = poset_from_strict(labels.clone(), |i, j| {
        faces[i] != faces[j] && is_face(&faces[i], &faces[j])
    })?;
    let ideal: Vec<String> = (0..faces.len())
        .filter(|&i| dim(&faces[i]) < n)
        .map(|i| labels[i].clone())
        .collect();
    Ok(PosetPair::new(poset, &ideal)?.with_ball_dim(n))
}

/// Product of two pairs; the ideal is (D1 x C2) ∪ (C1 x D2), the boundary
/// of the product ball.
pub fn product_pair(a: &PosetPair, b: &PosetPair) -> Result<PosetPair> {
    let (pa, pb) = (a.ambient(), b.ambient());
    let mut labels = Vec::new();
    let mut elems = Vec::new();
    for i in 0..pa.len() {
        for j in 0..pb.len() {
            labels.push(format!("{}|{}", pa.label(i), pb.label(j)));
            elems.push((i, j));
        }
    }
    let poset = poset_from_strict(labels.clone(), |x, y| {
        let (i1, j1) = elems[x];
        let (i2, j2) = elems[y];
        elems[x] != elems[y] && pa.is_leq(i1, i2) && pb.is_leq(j1, j2)
    })?;
    let ideal: Vec<String> = (0..labels.len())
        .filter(|&x| {
            let (i, j) = elems[x];
            a.ideal_mask()[i] || b.ideal_mask()[j]
        })
        .map(|x| labels[x].clone())
        .collect();
    let pair = PosetPair::new(poset, &ideal)?;
    Ok(match (a.ball_dim(), b.ball_dim()) {
        (Some(m1), Some(m2)) => pair.with_ball_dim(m1 + m2),
        _ => pair,
    })
}

/// Cone on a pair: base faces, an apex, and a cone face over every base
/// face. The ideal is base ∪ apex ∪ cone(D): the boundary of the
/// (m+1)-ball.
pub fn cone_pair(base: &PosetPair) -> Result<PosetPair> {
    let p = base.ambient();
    let n = p.len();
    // indices: 0..n base, n apex, n+1..2n+1 cone faces
    let mut labels: Vec<String> = p.labels().to_vec();
    labels.push("apex".to_string());
    labels.extend(p.labels().iter().map(|l| format!("{}*apex", l)));
    let less = move |i: usize, j: usize| {
        let kind = |x: usize| {
            if x < n {
                (0usize, x)
            } else if x == n {
                (1, 0)
            } else {
                (2, x - n - 1)
            }
        };
        match (kind(i), kind(j)) {
            ((0, a), (0, b)) => p.is_less(a, b),
            ((0, a), (2, b)) => p.is_leq(a, b),
            ((1, _), (2, _)) => true,
            ((2, a), (2, b)) => p.is_less(a, b),
            _ => false,
        }
    };
    let poset = poset_from_strict(labels.clone(), less)?;
    let mut ideal: Vec<String> = p.labels().to_vec();
    ideal.push("apex".to_string());
    for (i, l) in p.labels().iter().enumerate() {
        if base.ideal_mask()[i] {
            ideal.push(format!("{}*apex", l));
        }
    }
    let pair = PosetPair::new(poset, &ideal)?;
    Ok(match base.ball_dim() {
        Some(m) => pair.with_ball_dim(m + 1),
        None => pair,
    })
}

/// Face poset of the order complex: elements are the nonempty strict
/// chains, ordered by inclusion; the ideal consists of chains inside D.
pub fn barycentric_subdivision_pair(base: &PosetPair) -> Result<PosetPair> {
    let p = base.ambient();
    let allowed = vec![true; p.len()];
    let mut chains: Vec<Vec<usize>> = Vec::new();
    for len in 0..=p.longest_chain_len() {
        chains.extend(p.strict_chains_in(&allowed, len));
    }
    chains.sort_by_key(|c| (c.len(), c.clone()));
    let labels: Vec<String> = chains.iter().map(|c| p.chain_label(c)).collect();
    let poset = poset_from_strict(labels.clone(), |i, j| {
        chains[i].len() < chains[j].len() && chains[i].iter().all(|x| chains[j].contains(x))
    })?;
    let ideal: Vec<String> = (0..chains.len())
        .filter(|&i| chains[i].iter().all(|&x| base.ideal_mask()[x]))
        .map(|i| labels[i].clone())
        .collect();
    let pair = PosetPair::new(poset, &ideal)?;
    Ok(match base.ball_dim() {
        Some(m) => pair.with_ball_dim(m),
        None => pair,
    })
}

/// The ideal sub-poset as a pair of its own (empty ideal); used for
/// boundary posets such as the square boundary circle.
pub fn boundary_pair(base: &PosetPair) -> Result<PosetPair> {
    let poset = base.ideal_poset();
    PosetPair::new(poset, &[])
}

/// Parse a generator spec such as `simplex:2`, `cube:3`, `cone(cube:1)`,
/// `sd(simplex:2)`, `prod(simplex:1,cube:1)`, or any of these with a
/// `-boundary` suffix.
pub fn generate(spec: &str) -> Result<PosetPair> {
    let spec = spec.trim();
    if let Some(inner) = spec.strip_suffix("-boundary") {
        return boundary_pair(&generate(inner)?);
    }
    if let Some(rest) = spec.strip_prefix("cone(").and_then(|s| s.strip_suffix(')')) {
        return cone_pair(&generate(rest)?);
    }
    if let Some(rest) = spec.strip_prefix("sd(").and_then(|s| s.strip_suffix(')')) {
        return barycentric_subdivision_pair(&generate(rest)?);
    }
    if let Some(rest) = spec.strip_prefix("prod(").and_then(|s| s.strip_suffix(')')) {
        let (a, b) = split_top_level(rest)
            .ok_or_else(|| Error::Input(format!("prod needs two arguments: `{spec}`")))?;
        return product_pair(&generate(a)?, &generate(b)?);
    }
    if let Some(n) = spec.strip_prefix("simplex:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Input(format!("bad simplex dimension in `{spec}`")))?;
        return checked_dim(n).and_then(|_| simplex_pair(n));
    }
    if let Some(n) = spec.strip_prefix("cube:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Input(format!("bad cube dimension in `{spec}`")))?;
        return checked_dim(n).and_then(|_| cube_pair(n));
    }
    Err(Error::Input(format!("unsupported generator kind `{spec}`")))
}

fn checked_dim(n: usize) -> Result<()> {
    if n > 8 {
        return Err(Error::Input(format!("generator dimension {n} exceeds bound 8")));
    }
    Ok(())
}

fn split_top_level(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1)?,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}
