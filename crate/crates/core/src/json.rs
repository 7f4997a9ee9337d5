//! JSON interchange. One schema for every object the CLI reads or
//! writes: posets as {"elements", "covers", "ideal"}, matrices as sparse
//! triplets [row, col, value-as-decimal-string] so arbitrary precision
//! survives, complexes as label lists plus differentials, diagrams keyed
//! by element label and covering pair. Maps use BTreeMap so output is
//! deterministic.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::diagram::DiagramOfComplexes;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::limits::AbelianDiagram;
use crate::matrix::IntegerMatrix;
use crate::nerve::{ChainComplex, ChainMap};
use crate::poset::{Poset, PosetPair};
use crate::subquotient::{SubquotientGroup, SubquotientMap};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    /// [row, col, decimal string]
    pub entries: Vec<(usize, usize, String)>,
}

impl MatrixJson {
    pub fn from_matrix(m: &IntegerMatrix) -> Self {
        let mut entries = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m.get(i, j);
                if !v.is_zero() {
                    entries.push((i, j, v.to_string()));
                }
            }
        }
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }

    pub fn to_matrix(&self) -> Result<IntegerMatrix> {
        let mut m = IntegerMatrix::zero(self.rows, self.cols);
        for (i, j, v) in &self.entries {
            if *i >= self.rows || *j >= self.cols {
                return Err(Error::Input(format!(
                    "matrix entry ({}, {}) outside a {}x{} shape",
                    i, j, self.rows, self.cols
                )));
            }
            let value = BigInt::from_str(v)
                .map_err(|e| Error::Input(format!("bad integer {:?}: {}", v, e)))?;
            m.set(*i, *j, value);
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetPairJson {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    pub ideal: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ball_dim: Option<usize>,
}

impl PosetPairJson {
    pub fn from_pair(pair: &PosetPair) -> Self {
        let p = pair.ambient();
        PosetPairJson {
            elements: p.labels().to_vec(),
            covers: p
                .covers()
                .into_iter()
                .map(|(a, b)| (p.label(a).to_string(), p.label(b).to_string()))
                .collect(),
            ideal: pair.ideal_labels(),
            ball_dim: pair.ball_dim(),
        }
    }

    pub fn to_pair(&self) -> Result<PosetPair> {
        let pairs: Vec<(&str, &str)> = self
            .covers
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let labels: Vec<&str> = self.elements.iter().map(|s| s.as_str()).collect();
        let poset = Poset::from_relations(&labels, &pairs)?;
        let pair = PosetPair::new(poset, &self.ideal)?;
        Ok(match self.ball_dim {
            Some(m) => pair.with_ball_dim(m),
            None => pair,
        })
    }
}

pub fn parse_poset_pair(text: &str) -> Result<PosetPair> {
    let parsed: PosetPairJson =
        serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    parsed.to_pair()
}

pub fn pair_to_json(pair: &PosetPair) -> String {
    serde_json::to_string_pretty(&PosetPairJson::from_pair(pair)).expect("serializable")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub lo: i64,
    pub bases: Vec<Vec<String>>,
    /// differentials[k]: degree lo+k -> lo+k-1 (the first is empty)
    pub differentials: Vec<MatrixJson>,
}

impl ComplexJson {
    pub fn from_complex(c: &ChainComplex) -> Self {
        ComplexJson {
            lo: c.lo(),
            bases: (c.lo()..=c.hi()).map(|n| c.basis(n).to_vec()).collect(),
            differentials: (c.lo()..=c.hi())
                .map(|n| MatrixJson::from_matrix(&c.d(n)))
                .collect(),
        }
    }

    pub fn to_complex(&self) -> Result<ChainComplex> {
        let diffs = self
            .differentials
            .iter()
            .map(|m| m.to_matrix())
            .collect::<Result<Vec<_>>>()?;
        ChainComplex::new(self.lo, self.bases.clone(), diffs)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainMapJson {
    /// degree (as decimal string key) -> component matrix
    pub components: BTreeMap<String, MatrixJson>,
}

impl ChainMapJson {
    pub fn from_map(m: &ChainMap) -> Self {
        let lo = m.source().lo().min(m.target().lo());
        let hi = m.source().hi().max(m.target().hi());
        let mut components = BTreeMap::new();
        for n in lo..=hi {
            let c = m.component(n);
            if (0..c.rows()).any(|i| (0..c.cols()).any(|j| !c.get(i, j).is_zero())) {
                components.insert(n.to_string(), MatrixJson::from_matrix(&c));
            }
        }
        ChainMapJson { components }
    }

    pub fn to_map(&self, source: ChainComplex, target: ChainComplex) -> Result<ChainMap> {
        let mut by_degree: HashMap<i64, IntegerMatrix> = HashMap::new();
        for (k, m) in &self.components {
            let n: i64 = k
                .parse()
                .map_err(|_| Error::Input(format!("bad degree key {:?}", k)))?;
            by_degree.insert(n, m.to_matrix()?);
        }
        ChainMap::new(source.clone(), target.clone(), &|n| {
            by_degree
                .get(&n)
                .cloned()
                .unwrap_or_else(|| IntegerMatrix::zero(target.rank(n), source.rank(n)))
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramJson {
    pub poset: PosetPairJson,
    /// keyed by element label
    pub values: BTreeMap<String, ComplexJson>,
    /// keyed by "a->b" for covering relations a -> b
    pub maps: BTreeMap<String, ChainMapJson>,
}

impl DiagramJson {
    pub fn from_diagram(pair: &PosetPair, d: &DiagramOfComplexes) -> Self {
        let p = d.index();
        let values = (0..p.len())
            .map(|x| (p.label(x).to_string(), ComplexJson::from_complex(d.value(x))))
            .collect();
        let maps = p
            .covers()
            .into_iter()
            .map(|(a, b)| {
                (
                    format!("{}->{}", p.label(a), p.label(b)),
                    ChainMapJson::from_map(&d.map(a, b)),
                )
            })
            .collect();
        DiagramJson {
            poset: PosetPairJson::from_pair(pair),
            values,
            maps,
        }
    }

    pub fn to_diagram(&self) -> Result<(PosetPair, DiagramOfComplexes)> {
        let pair = self.poset.to_pair()?;
        let p = pair.ambient().clone();
        let values: Vec<ChainComplex> = p
            .labels()
            .iter()
            .map(|l| {
                self.values
                    .get(l)
                    .ok_or_else(|| Error::Input(format!("no value for element {:?}", l)))
                    .and_then(|c| c.to_complex())
            })
            .collect::<Result<_>>()?;
        let mut cover_maps = HashMap::new();
        for (a, b) in p.covers() {
            let key = format!("{}->{}", p.label(a), p.label(b));
            let mj = self
                .maps
                .get(&key)
                .ok_or_else(|| Error::Input(format!("no map for cover {:?}", key)))?;
            cover_maps.insert((a, b), mj.to_map(values[a].clone(), values[b].clone())?);
        }
        let d = DiagramOfComplexes::new(p, values, cover_maps)?;
        Ok((pair, d))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupJson {
    pub ambient_rank: usize,
    pub numerator: MatrixJson,
    pub denominator: MatrixJson,
}

impl GroupJson {
    pub fn from_group(g: &SubquotientGroup) -> Self {
        GroupJson {
            ambient_rank: g.ambient_rank(),
            numerator: MatrixJson::from_matrix(g.numerator().generators()),
            denominator: MatrixJson::from_matrix(g.denominator().generators()),
        }
    }

    pub fn to_group(&self) -> Result<SubquotientGroup> {
        SubquotientGroup::new(
            Lattice::from_generators(self.ambient_rank, &self.numerator.to_matrix()?)?,
            Lattice::from_generators(self.ambient_rank, &self.denominator.to_matrix()?)?,
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AbelianDiagramJson {
    pub poset: PosetPairJson,
    pub values: BTreeMap<String, GroupJson>,
    /// keyed by "a->b", ambient matrices
    pub maps: BTreeMap<String, MatrixJson>,
}

impl AbelianDiagramJson {
    pub fn from_diagram(pair: &PosetPair, d: &AbelianDiagram) -> Self {
        let p = d.index();
        AbelianDiagramJson {
            poset: PosetPairJson::from_pair(pair),
            values: (0..p.len())
                .map(|x| (p.label(x).to_string(), GroupJson::from_group(d.value(x))))
                .collect(),
            maps: p
                .covers()
                .into_iter()
                .map(|(a, b)| {
                    (
                        format!("{}->{}", p.label(a), p.label(b)),
                        MatrixJson::from_matrix(d.map(a, b).matrix()),
                    )
                })
                .collect(),
        }
    }

    pub fn to_diagram(&self) -> Result<(PosetPair, AbelianDiagram)> {
        let pair = self.poset.to_pair()?;
        let p = pair.ambient().clone();
        let values: Vec<SubquotientGroup> = p
            .labels()
            .iter()
            .map(|l| {
                self.values
                    .get(l)
                    .ok_or_else(|| Error::Input(format!("no value for element {:?}", l)))
                    .and_then(|g| g.to_group())
            })
            .collect::<Result<_>>()?;
        let mut cover_maps = HashMap::new();
        for (a, b) in p.covers() {
            let key = format!("{}->{}", p.label(a), p.label(b));
            let mj = self
                .maps
                .get(&key)
                .ok_or_else(|| Error::Input(format!("no map for cover {:?}", key)))?;
            cover_maps.insert(
                (a, b),
                SubquotientMap::new(mj.to_matrix()?, values[a].clone(), values[b].clone())?,
            );
        }
        let d = AbelianDiagram::new(p, values, cover_maps)?;
        Ok((pair, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::generate;

    #[test]
    fn matrix_round_trip_preserves_big_values() {
        let mut m = IntegerMatrix::zero(2, 2);
        m.set(0, 1, BigInt::from_str("123456789012345678901234567890").unwrap());
        m.set(1, 0, BigInt::from(-7));
        let j = MatrixJson::from_matrix(&m);
        assert_eq!(j.to_matrix().unwrap(), m);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("123456789012345678901234567890"));
    }

    #[test]
    fn pair_round_trip() {
        let pair = generate("cube:2").unwrap();
        let text = pair_to_json(&pair);
        let back = parse_poset_pair(&text).unwrap();
        assert_eq!(back.ambient(), pair.ambient());
        assert_eq!(back.ideal_labels(), pair.ideal_labels());
        assert_eq!(back.ball_dim(), pair.ball_dim());
        // idempotent after first normalization
        assert_eq!(pair_to_json(&back), text);
    }

    #[test]
    fn bad_inputs_are_diagnosed() {
        let cyclic = r#"{"elements":["a","b"],"covers":[["a","b"],["b","a"]],"ideal":[]}"#;
        assert!(matches!(parse_poset_pair(cyclic), Err(Error::Cycle(_))));
        let not_ideal = r#"{"elements":["a","ab"],"covers":[["a","ab"]],"ideal":["ab"]}"#;
        assert!(parse_poset_pair(not_ideal).is_err());
        let unknown = r#"{"elements":["a"],"covers":[["a","b"]],"ideal":[]}"#;
        assert!(matches!(parse_poset_pair(unknown), Err(Error::UnknownLabel(_))));
        assert!(matches!(
            parse_poset_pair("not json"),
            Err(Error::Json(_))
        ));
    }

    #[test]
    fn diagram_round_trip() {
        let pair = generate("simplex:1").unwrap();
        let d = crate::random::random_diagram(
            pair.ambient(),
            11,
            &crate::random::RandomSpec::default(),
        )
        .unwrap();
        let j = DiagramJson::from_diagram(&pair, &d);
        let (pair2, d2) = j.to_diagram().unwrap();
        assert_eq!(pair2.ambient(), pair.ambient());
        for x in 0..pair.ambient().len() {
            assert_eq!(d2.value(x), d.value(x));
        }
        let text = serde_json::to_string(&j).unwrap();
        let j2: DiagramJson = serde_json::from_str(&text).unwrap();
        let (_, d3) = j2.to_diagram().unwrap();
        for x in 0..pair.ambient().len() {
            assert_eq!(d3.value(x), d.value(x));
        }
    }

    #[test]
    fn abelian_diagram_round_trip() {
        let pair = generate("simplex:1").unwrap();
        let g = crate::subquotient::presented_group(&IntegerMatrix::from_rows_i64(&[&[4]]))
            .unwrap();
        let d = AbelianDiagram::constant(pair.ambient().clone(), g).unwrap();
        let j = AbelianDiagramJson::from_diagram(&pair, &d);
        let (_, d2) = j.to_diagram().unwrap();
        assert!(d2.value(0).isomorphic(d.value(0)));
        assert_eq!(
            crate::limits::limp(&d2, 0).unwrap().group.structure(),
            crate::limits::limp(&d, 0).unwrap().group.structure()
        );
    }
}
