//! gammacalc: condition checks, homology, derived limits, total cofibre
//! and homotopy limit computations, and spectral sequence dumps for
//! diagrams over finite posets.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use gamma_core::conditions::classify_pair;
use gamma_core::diagram::DiagramOfComplexes;
use gamma_core::field::Field;
use gamma_core::homology::{homology, HomologySummary};
use gamma_core::json::{
    parse_poset_pair, AbelianDiagramJson, ComplexJson, DiagramJson, PosetPairJson,
};
use gamma_core::limits::{limp, AbelianDiagram};
use gamma_core::nerve::{order_complex_chains, ChainComplex};
use gamma_core::poset::{generate, PosetPair};
use gamma_core::random::{random_diagram, RandomSpec};
use gamma_core::spectral::{abutment_check, e2_check, ss_pages};
use gamma_core::subquotient::{presented_group, SubquotientGroup};
use gamma_core::total::{gamma_total_complex, holim_total, verify_ball_equivalence};

const CONVENTIONS: &str = "hocolim: value at chain bottom, d = faces + (-1)^p internal, n = p + q; \
     holim: value at chain top, d = insertions with (-1)^i and map at the new top with (-1)^(p+1), \
     plus (-1)^p internal, n = q - p; filtration by chain length; lim^p cochains place the value \
     at the chain top; bases ordered by (chain length, lexicographic chain, internal basis)";

#[derive(Parser)]
#[command(name = "gammacalc", version, about = "total cofibre calculus over finite posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Coefficient field for spectral sequence commands: q or fp:<p>
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Seed for --random-diagram
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Nonzero exit status when a check fails
    #[arg(long, global = true)]
    strict: bool,
    /// Restrict reported degrees, e.g. --degrees -1..3
    #[arg(long, global = true, value_parser = parse_degrees)]
    degrees: Option<(i64, i64)>,
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PairSource {
    /// Poset pair JSON file
    #[arg(long, conflicts_with = "generate")]
    input: Option<PathBuf>,
    /// Generator spec, e.g. cube:2, simplex:1-boundary, prod(cube:1,cube:1)
    #[arg(long)]
    generate: Option<String>,
}

impl PairSource {
    fn load(&self) -> Result<PosetPair> {
        match (&self.input, &self.generate) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                Ok(parse_poset_pair(&text)?)
            }
            (None, Some(spec)) => Ok(generate(spec)?),
            _ => bail!("exactly one of --input and --generate is required"),
        }
    }
}

#[derive(Args)]
struct DiagramSource {
    #[command(flatten)]
    pair: PairSource,
    /// Diagram-of-complexes JSON file (overrides the pair's own poset)
    #[arg(long, conflicts_with_all = ["constant", "random_diagram"])]
    diagram: Option<PathBuf>,
    /// Constant diagram with this value: Z or Z/<n>
    #[arg(long)]
    constant: Option<String>,
    /// Seeded random diagram, e.g. seed=7 (falls back to --seed)
    #[arg(long)]
    random_diagram: Option<String>,
}

impl DiagramSource {
    fn load(&self, default_seed: u64) -> Result<(PosetPair, DiagramOfComplexes)> {
        if let Some(path) = &self.diagram {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let parsed: DiagramJson = serde_json::from_str(&text).context("diagram JSON")?;
            return Ok(parsed.to_diagram()?);
        }
        let pair = self.pair.load()?;
        let poset = pair.ambient().clone();
        if let Some(spec) = &self.random_diagram {
            let seed = parse_seed(spec, default_seed)?;
            let d = random_diagram(&poset, seed, &RandomSpec::default())?;
            return Ok((pair, d));
        }
        let value = constant_value(self.constant.as_deref().unwrap_or("Z"))?;
        let d = DiagramOfComplexes::constant(poset, value)?;
        Ok((pair, d))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a poset pair against conditions (P1), (P2), (P1'), (P2')
    Check(PairSource),
    /// Integral homology of the order complex of the pair's poset, or of
    /// a complex JSON file
    Homology {
        #[command(flatten)]
        pair: PairSource,
        /// Chain complex JSON file instead of a poset
        #[arg(long, conflicts_with_all = ["input", "generate"])]
        complex: Option<PathBuf>,
    },
    /// Derived limit lim^p of an abelian diagram
    Limp {
        #[command(flatten)]
        pair: PairSource,
        /// Abelian diagram JSON file
        #[arg(long, conflicts_with_all = ["input", "generate", "constant"])]
        diagram: Option<PathBuf>,
        /// Constant value on the generated poset: Z or Z/<n>
        #[arg(long)]
        constant: Option<String>,
        /// Cohomological degree; all degrees when omitted
        #[arg(long)]
        p: Option<i64>,
    },
    /// Homology of the total cofibre Γ of a diagram
    Gamma(DiagramSource),
    /// Homology of the homotopy limit of a diagram
    Holim(DiagramSource),
    /// Compare H_n(holim) with H_{n+m}(Γ) for a ball pair
    Verify(DiagramSource),
    /// Spectral sequence pages, E2 identification and abutment check
    Ss(DiagramSource),
}

fn parse_degrees(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("empty degree range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn parse_field(s: &str) -> Result<Field> {
    match s {
        "q" | "Q" => Ok(Field::Rational),
        other => {
            let p = other
                .strip_prefix("fp:")
                .ok_or_else(|| anyhow!("field must be q or fp:<prime>, got {other:?}"))?;
            let p: u64 = p.parse().context("prime")?;
            if p < 2 || (2..p).any(|d| d * d <= p && p % d == 0) {
                bail!("{p} is not prime");
            }
            Ok(Field::prime(p))
        }
    }
}

fn parse_seed(spec: &str, default_seed: u64) -> Result<u64> {
    if spec.is_empty() {
        return Ok(default_seed);
    }
    let v = spec.strip_prefix("seed=").unwrap_or(spec);
    v.parse().with_context(|| format!("bad seed {spec:?}"))
}

fn constant_value(spec: &str) -> Result<ChainComplex> {
    if spec == "Z" {
        return Ok(ChainComplex::concentrated(0, 1, "e"));
    }
    let n = spec
        .strip_prefix("Z/")
        .ok_or_else(|| anyhow!("constant value must be Z or Z/<n>, got {spec:?}"))?;
    let n: i64 = n.parse().context("torsion order")?;
    if n < 2 {
        bail!("torsion order must be at least 2");
    }
    Ok(ChainComplex::new(
        0,
        vec![vec!["e".into()], vec!["r".into()]],
        vec![
            gamma_core::matrix::IntegerMatrix::zero(0, 1),
            gamma_core::matrix::IntegerMatrix::from_rows_i64(&[&[n]]),
        ],
    )?)
}

fn constant_group(spec: &str) -> Result<SubquotientGroup> {
    if spec == "Z" {
        return Ok(SubquotientGroup::free(1));
    }
    let n = spec
        .strip_prefix("Z/")
        .ok_or_else(|| anyhow!("constant value must be Z or Z/<n>, got {spec:?}"))?;
    let n: i64 = n.parse().context("torsion order")?;
    Ok(presented_group(
        &gamma_core::matrix::IntegerMatrix::from_rows_i64(&[&[n]]),
    )?)
}

fn homology_table(
    h: &HomologySummary,
    window: Option<(i64, i64)>,
) -> BTreeMap<i64, String> {
    let (lo, hi) = window.unwrap_or((h.lo(), h.hi()));
    (lo..=hi)
        .map(|n| (n, h.group(n).to_string()))
        .filter(|(_, g)| g != "0")
        .collect()
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    command: String,
    conventions: &'static str,
    #[serde(flatten)]
    body: T,
}

fn emit<T: Serialize>(cli: &Cli, command: &str, body: T) -> Result<()> {
    let report = Report {
        command: command.to_string(),
        conventions: CONVENTIONS,
        body,
    };
    let text = serde_json::to_string_pretty(&report)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text + "\n")
            .with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Check(src) => {
            let pair = src.load()?;
            let report = classify_pair(&pair)?;
            let ok = report.p1_overall && report.p2_overall;
            #[derive(Serialize)]
            struct Body {
                poset: PosetPairJson,
                #[serde(flatten)]
                report: gamma_core::conditions::ConditionReport,
            }
            emit(
                cli,
                "check",
                Body {
                    poset: PosetPairJson::from_pair(&pair),
                    report,
                },
            )?;
            Ok(ok)
        }
        Command::Homology { pair, complex } => {
            let c = match complex {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let parsed: ComplexJson =
                        serde_json::from_str(&text).context("complex JSON")?;
                    parsed.to_complex()?
                }
                None => {
                    let p = pair.load()?;
                    order_complex_chains(p.ambient(), false)?
                }
            };
            let h = homology(&c)?;
            #[derive(Serialize)]
            struct Body {
                groups: BTreeMap<i64, String>,
            }
            emit(
                cli,
                "homology",
                Body {
                    groups: homology_table(&h, cli.degrees),
                },
            )?;
            Ok(true)
        }
        Command::Limp {
            pair,
            diagram,
            constant,
            p,
        } => {
            let (pair_json, d): (PosetPairJson, AbelianDiagram) = match diagram {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let parsed: AbelianDiagramJson =
                        serde_json::from_str(&text).context("abelian diagram JSON")?;
                    let (pp, d) = parsed.to_diagram()?;
                    (PosetPairJson::from_pair(&pp), d)
                }
                None => {
                    let pp = pair.load()?;
                    let value = constant_group(constant.as_deref().unwrap_or("Z"))?;
                    let d = AbelianDiagram::constant(pp.ambient().clone(), value)?;
                    (PosetPairJson::from_pair(&pp), d)
                }
            };
            let range: Vec<i64> = match p {
                Some(p) => vec![*p],
                None => (0..=d.index().longest_chain_len() as i64).collect(),
            };
            let mut groups = BTreeMap::new();
            for p in range {
                let r = limp(&d, p)?;
                groups.insert(p, r.group.to_string());
            }
            #[derive(Serialize)]
            struct Body {
                poset: PosetPairJson,
                limp: BTreeMap<i64, String>,
            }
            emit(
                cli,
                "limp",
                Body {
                    poset: pair_json,
                    limp: groups,
                },
            )?;
            Ok(true)
        }
        Command::Gamma(src) => {
            let (pair, d) = src.load(cli.seed)?;
            let t = gamma_total_complex(&d, &pair)?;
            let h = homology(t.complex())?;
            #[derive(Serialize)]
            struct Body {
                groups: BTreeMap<i64, String>,
            }
            emit(
                cli,
                "gamma",
                Body {
                    groups: homology_table(&h, cli.degrees),
                },
            )?;
            Ok(true)
        }
        Command::Holim(src) => {
            let (_, d) = src.load(cli.seed)?;
            let t = holim_total(&d)?;
            let h = homology(t.complex())?;
            #[derive(Serialize)]
            struct Body {
                groups: BTreeMap<i64, String>,
            }
            emit(
                cli,
                "holim",
                Body {
                    groups: homology_table(&h, cli.degrees),
                },
            )?;
            Ok(true)
        }
        Command::Verify(src) => {
            let (pair, d) = src.load(cli.seed)?;
            let report = verify_ball_equivalence(&d, &pair)?;
            let ok = report.all_isomorphic;
            emit(cli, "verify", report)?;
            Ok(ok)
        }
        Command::Ss(src) => {
            let field = parse_field(&cli.field)?;
            let (_, d) = src.load(cli.seed)?;
            let t = holim_total(&d)?;
            let ss = ss_pages(&t, &field)?;
            let e2 = e2_check(&d, &field)?;
            let abutment = abutment_check(&t, &ss, &field)?;
            let ok = e2.all_match && abutment.all_match;
            #[derive(Serialize)]
            struct PageDump {
                r: usize,
                /// rows (r, p, q, dim)
                cells: Vec<(usize, i64, i64, usize)>,
            }
            #[derive(Serialize)]
            struct Body {
                field: String,
                r_max: usize,
                pages: Vec<PageDump>,
                e2: gamma_core::spectral::E2Report,
                abutment: gamma_core::spectral::AbutmentReport,
            }
            let pages = ss
                .pages
                .iter()
                .map(|page| PageDump {
                    r: page.r,
                    cells: page
                        .entries
                        .iter()
                        .map(|(&(p, q), &dim)| (page.r, p, q, dim))
                        .collect(),
                })
                .collect();
            emit(
                cli,
                "ss",
                Body {
                    field: match &field {
                        Field::Rational => "Q".to_string(),
                        Field::Prime(p) => format!("F_{p}"),
                    },
                    r_max: ss.r_max,
                    pages,
                    e2,
                    abutment,
                },
            )?;
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(ok) => {
            if !ok && cli.strict {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
