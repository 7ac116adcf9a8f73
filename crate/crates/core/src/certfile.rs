//! Text format for certificates: JSON with sorted keys, scalar arrays kept on
//! one line and edge lists packed into rows, so that files are byte-stable
//! and diff cleanly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::circulant_factors::{BaseGraph, CirculantFactor, IsoWitness, Provenance};
use crate::graphs::{ConnectionSet, CycleType, GraphError, VertexGraph};
use crate::solver::{
    Certificate, CirculantStage, ProblemSpec, Role, Source, Stage, Status, TwoFactor,
    TwoFactorStage, VertexEncoding,
};

pub const SCHEMA_VERSION: u64 = 1;
const LINE_WIDTH: usize = 100;

#[derive(Debug, Error)]
pub enum CertFileError {
    #[error("malformed certificate: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {found} (expected {SCHEMA_VERSION})")]
    Version { found: u64 },
    #[error("invalid certificate content: {0}")]
    Content(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type Result<T> = std::result::Result<T, CertFileError>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDto {
    schema_version: u64,
    spec: SpecDto,
    status: StatusDto,
    stages: Vec<StageDto>,
    provenance: Vec<ProvenanceDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum SpecDto {
    OpOdd {
        n: u32,
        cycles: Vec<u32>,
    },
    OpEven {
        n: u32,
        cycles: Vec<u32>,
    },
    Multigraph {
        p: u32,
        lambda: u32,
        cycles: Vec<u32>,
    },
    Prescribed {
        p: u32,
        types: Vec<Vec<u32>>,
    },
    CirculantFactorisation {
        base: BaseDto,
        targets: Vec<TargetDto>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum BaseDto {
    Complete { n: u32 },
    CompleteMinusOneFactor { n: u32 },
    Multigraph { n: u32, lambda: u32 },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetDto {
    connection_set: Vec<u32>,
    count: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StatusDto {
    label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum StageDto {
    Circulant {
        base: BaseDto,
        encoding: String,
        factors: Vec<CirculantDto>,
        removed_one_factor: Option<Vec<[u32; 2]>>,
    },
    TwoFactors {
        parent: Option<[usize; 2]>,
        source: String,
        factors: Vec<TwoFactorDto>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
enum WitnessDto {
    Multiplier(u64),
    VertexMap(Vec<u32>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CirculantDto {
    target: Vec<u32>,
    witness: WitnessDto,
    edges: Vec<[u32; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TwoFactorDto {
    role: String,
    edges: Vec<[u32; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProvenanceDto {
    construction: String,
    parameters: BTreeMap<String, String>,
}

fn edges_dto(g: &VertexGraph) -> Vec<[u32; 2]> {
    g.edges().iter().map(|&(u, v)| [u, v]).collect()
}

fn base_dto(b: BaseGraph) -> BaseDto {
    match b {
        BaseGraph::Complete { n } => BaseDto::Complete { n },
        BaseGraph::CompleteMinusOneFactor { n } => BaseDto::CompleteMinusOneFactor { n },
        BaseGraph::Multigraph { n, lambda } => BaseDto::Multigraph { n, lambda },
    }
}

fn spec_dto(spec: &ProblemSpec) -> SpecDto {
    match spec {
        ProblemSpec::OpOdd { n, f } => SpecDto::OpOdd {
            n: *n,
            cycles: f.lengths().to_vec(),
        },
        ProblemSpec::OpEven { n, f } => SpecDto::OpEven {
            n: *n,
            cycles: f.lengths().to_vec(),
        },
        ProblemSpec::Multigraph { p, lambda, f } => SpecDto::Multigraph {
            p: *p,
            lambda: *lambda,
            cycles: f.lengths().to_vec(),
        },
        ProblemSpec::Prescribed { p, types } => SpecDto::Prescribed {
            p: *p,
            types: types.iter().map(|t| t.lengths().to_vec()).collect(),
        },
        ProblemSpec::CirculantFactorisation { base, targets } => SpecDto::CirculantFactorisation {
            base: base_dto(*base),
            targets: targets
                .iter()
                .map(|(s, count)| TargetDto {
                    connection_set: s.elements().iter().copied().collect(),
                    count: *count,
                })
                .collect(),
        },
    }
}

fn role_label(role: Role) -> String {
    match role {
        Role::TypeF => "F".into(),
        Role::Hamilton => "hamilton".into(),
        Role::Prescribed(i) => format!("prescribed:{i}"),
    }
}

fn stage_dto(stage: &Stage) -> StageDto {
    match stage {
        Stage::Circulant(c) => StageDto::Circulant {
            base: base_dto(c.base),
            encoding: match c.encoding {
                VertexEncoding::Cyclic => "cyclic".into(),
                VertexEncoding::Dihedral => "dihedral".into(),
            },
            factors: c
                .factors
                .iter()
                .map(|f| CirculantDto {
                    target: f.target.elements().iter().copied().collect(),
                    witness: match &f.witness {
                        IsoWitness::Multiplier(a) => WitnessDto::Multiplier(*a),
                        IsoWitness::VertexMap(m) => WitnessDto::VertexMap(m.clone()),
                    },
                    edges: edges_dto(&f.graph),
                })
                .collect(),
            removed_one_factor: c.removed_one_factor.as_ref().map(edges_dto),
        },
        Stage::TwoFactors(t) => StageDto::TwoFactors {
            parent: t.parent.map(|(s, i)| [s, i]),
            source: match t.source {
                Source::Construction => "construction".into(),
                Source::Search => "search".into(),
            },
            factors: t
                .factors
                .iter()
                .map(|f| TwoFactorDto {
                    role: role_label(f.role),
                    edges: edges_dto(&f.graph),
                })
                .collect(),
        },
    }
}

fn file_dto(cert: &Certificate) -> FileDto {
    let (label, reason) = match &cert.status {
        Status::Solved => ("solved", None),
        Status::NoSolution(r) => ("no-solution", Some(r.clone())),
        Status::Unsupported(r) => ("unsupported", Some(r.clone())),
    };
    FileDto {
        schema_version: SCHEMA_VERSION,
        spec: spec_dto(&cert.spec),
        status: StatusDto {
            label: label.into(),
            reason,
        },
        stages: cert.stages.iter().map(stage_dto).collect(),
        provenance: cert
            .provenance
            .iter()
            .map(|p| ProvenanceDto {
                construction: p.construction.clone(),
                parameters: p.parameters.clone(),
            })
            .collect(),
    }
}

/// Serialises a certificate; identical certificates give identical bytes.
pub fn emit(cert: &Certificate) -> String {
    let value = serde_json::to_value(file_dto(cert)).expect("certificate DTOs always serialise");
    let mut out = String::new();
    write_value(&mut out, &value, 0);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn is_flat_array(v: &Value) -> bool {
    matches!(v, Value::Array(items) if items.iter().all(is_scalar))
}

fn scalar(v: &Value) -> String {
    serde_json::to_string(v).expect("scalars always serialise")
}

fn flat(items: &[Value]) -> String {
    let parts: Vec<String> = items.iter().map(scalar).collect();
    format!("[{}]", parts.join(", "))
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent + 1);
    let close = "  ".repeat(indent);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => out.push_str(&flat(items)),
        Value::Array(items) if items.iter().all(is_flat_array) => {
            // rows of short arrays, e.g. edge lists
            out.push_str("[\n");
            let mut line = String::new();
            for (i, item) in items.iter().enumerate() {
                let Value::Array(inner) = item else {
                    unreachable!()
                };
                let text = flat(inner);
                let sep = if i + 1 < items.len() { "," } else { "" };
                if !line.is_empty() && pad.len() + line.len() + text.len() + 2 > LINE_WIDTH {
                    let _ = writeln!(out, "{pad}{}", line.trim_end());
                    line.clear();
                }
                line.push_str(&text);
                line.push_str(sep);
                line.push(' ');
            }
            let _ = writeln!(out, "{pad}{}", line.trim_end());
            out.push_str(&close);
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad);
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&close);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (key, item)) in map.iter().enumerate() {
                let _ = write!(out, "{pad}{}: ", scalar(&Value::String(key.clone())));
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&close);
            out.push('}');
        }
        _ => out.push_str(&scalar(v)),
    }
}

fn content(msg: impl Into<String>) -> CertFileError {
    CertFileError::Content(msg.into())
}

fn cycle_type(lengths: Vec<u32>) -> Result<CycleType> {
    Ok(CycleType::new(lengths)?)
}

fn base_from(b: BaseDto) -> BaseGraph {
    match b {
        BaseDto::Complete { n } => BaseGraph::Complete { n },
        BaseDto::CompleteMinusOneFactor { n } => BaseGraph::CompleteMinusOneFactor { n },
        BaseDto::Multigraph { n, lambda } => BaseGraph::Multigraph { n, lambda },
    }
}

fn graph_from(n: u32, edges: Vec<[u32; 2]>) -> Result<VertexGraph> {
    let mut g = VertexGraph::empty(n);
    for [u, v] in edges {
        if !g.add_edge(u, v)? {
            return Err(content(format!(
                "edge {{{u},{v}}} listed twice in one graph"
            )));
        }
    }
    Ok(g)
}

fn spec_from(dto: SpecDto) -> Result<ProblemSpec> {
    Ok(match dto {
        SpecDto::OpOdd { n, cycles } => ProblemSpec::OpOdd {
            n,
            f: cycle_type(cycles)?,
        },
        SpecDto::OpEven { n, cycles } => ProblemSpec::OpEven {
            n,
            f: cycle_type(cycles)?,
        },
        SpecDto::Multigraph { p, lambda, cycles } => ProblemSpec::Multigraph {
            p,
            lambda,
            f: cycle_type(cycles)?,
        },
        SpecDto::Prescribed { p, types } => ProblemSpec::Prescribed {
            p,
            types: types.into_iter().map(cycle_type).collect::<Result<_>>()?,
        },
        SpecDto::CirculantFactorisation { base, targets } => {
            let base = base_from(base);
            let targets = targets
                .into_iter()
                .map(|t| Ok((ConnectionSet::new(base.order(), t.connection_set)?, t.count)))
                .collect::<Result<_>>()?;
            ProblemSpec::CirculantFactorisation { base, targets }
        }
    })
}

fn role_from(label: &str) -> Result<Role> {
    match label {
        "F" => Ok(Role::TypeF),
        "hamilton" => Ok(Role::Hamilton),
        _ => label
            .strip_prefix("prescribed:")
            .and_then(|i| i.parse().ok())
            .map(Role::Prescribed)
            .ok_or_else(|| content(format!("unknown role {label:?}"))),
    }
}

fn stage_from(n: u32, dto: StageDto) -> Result<Stage> {
    Ok(match dto {
        StageDto::Circulant {
            base,
            encoding,
            factors,
            removed_one_factor,
        } => Stage::Circulant(CirculantStage {
            base: base_from(base),
            encoding: match encoding.as_str() {
                "cyclic" => VertexEncoding::Cyclic,
                "dihedral" => VertexEncoding::Dihedral,
                other => return Err(content(format!("unknown encoding {other:?}"))),
            },
            factors: factors
                .into_iter()
                .map(|f| {
                    Ok(CirculantFactor {
                        graph: graph_from(n, f.edges)?,
                        target: ConnectionSet::new(n, f.target)?,
                        witness: match f.witness {
                            WitnessDto::Multiplier(a) => IsoWitness::Multiplier(a),
                            WitnessDto::VertexMap(m) => IsoWitness::VertexMap(m),
                        },
                    })
                })
                .collect::<Result<_>>()?,
            removed_one_factor: removed_one_factor.map(|e| graph_from(n, e)).transpose()?,
        }),
        StageDto::TwoFactors {
            parent,
            source,
            factors,
        } => Stage::TwoFactors(TwoFactorStage {
            parent: parent.map(|[s, i]| (s, i)),
            source: match source.as_str() {
                "construction" => Source::Construction,
                "search" => Source::Search,
                other => return Err(content(format!("unknown source {other:?}"))),
            },
            factors: factors
                .into_iter()
                .map(|f| {
                    Ok(TwoFactor {
                        graph: graph_from(n, f.edges)?,
                        role: role_from(&f.role)?,
                    })
                })
                .collect::<Result<_>>()?,
        }),
    })
}

/// Parses a certificate file. Structural problems are errors here; whether
/// the certificate is mathematically sound is left to the verifier.
pub fn parse(text: &str) -> Result<Certificate> {
    let raw: Value = serde_json::from_str(text)?;
    let version = raw.get("schema_version").and_then(Value::as_u64);
    if let Some(found) = version.filter(|&v| v != SCHEMA_VERSION) {
        return Err(CertFileError::Version { found });
    }
    let dto: FileDto = serde_json::from_value(raw)?;
    let spec = spec_from(dto.spec)?;
    let n = spec.order();
    let status = match (dto.status.label.as_str(), dto.status.reason) {
        ("solved", None) => Status::Solved,
        ("no-solution", Some(r)) => Status::NoSolution(r),
        ("unsupported", Some(r)) => Status::Unsupported(r),
        (label, _) => return Err(content(format!("bad status {label:?}"))),
    };
    let stages = dto
        .stages
        .into_iter()
        .map(|s| stage_from(n, s))
        .collect::<Result<_>>()?;
    let provenance = dto
        .provenance
        .into_iter()
        .map(|p| Provenance {
            construction: p.construction,
            parameters: p.parameters,
        })
        .collect();
    Ok(Certificate {
        spec,
        status,
        stages,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve, solve_prescribed_with_hamilton, SolverConfig};
    use proptest::prelude::*;

    fn ct(lengths: &[u32]) -> CycleType {
        CycleType::new(lengths.to_vec()).unwrap()
    }

    #[test]
    fn round_trips_each_route() {
        let cfg = SolverConfig::default();
        let certs = vec![
            solve(&ProblemSpec::op(ct(&[3, 3, 4])), &cfg).unwrap(),
            solve(&ProblemSpec::op(ct(&[6, 7])), &cfg).unwrap(),
            solve(&ProblemSpec::op(ct(&[4, 5])), &cfg).unwrap(),
            solve(&ProblemSpec::op(ct(&[3, 6])), &cfg).unwrap(),
            solve_prescribed_with_hamilton(5, &[ct(&[4, 6]), ct(&[5, 5])], &cfg).unwrap(),
            solve(&ProblemSpec::multigraph(7, 5, ct(&[5])).unwrap(), &cfg).unwrap(),
        ];
        for cert in certs {
            let text = emit(&cert);
            assert_eq!(parse(&text).unwrap(), cert);
            assert_eq!(emit(&parse(&text).unwrap()), text);
        }
    }

    #[test]
    fn layout_is_compact_and_sorted() {
        let cert = solve(&ProblemSpec::op(ct(&[7])), &SolverConfig::default()).unwrap();
        let text = emit(&cert);
        assert!(text.contains("\"cycles\": [7]"));
        assert!(text.contains("[0, 1], [0, 2], [0, 3]"));
        let keys: Vec<usize> = [
            "\"provenance\"",
            "\"schema_version\"",
            "\"spec\"",
            "\"stages\"",
            "\"status\"",
        ]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(text.lines().all(|l| l.len() <= LINE_WIDTH));
    }

    #[test]
    fn rejects_bad_files() {
        let cert = solve(&ProblemSpec::op(ct(&[7])), &SolverConfig::default()).unwrap();
        let text = emit(&cert);
        assert!(matches!(
            parse(&text[..text.len() / 2]),
            Err(CertFileError::Json(_))
        ));
        let bumped = text.replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert!(matches!(
            parse(&bumped),
            Err(CertFileError::Version { found: 2 })
        ));
        let bad_role = text.replacen("\"role\": \"F\"", "\"role\": \"G\"", 1);
        assert!(matches!(parse(&bad_role), Err(CertFileError::Content(_))));
        let out_of_range = text.replacen("[0, 1]", "[0, 99]", 1);
        assert!(matches!(parse(&out_of_range), Err(CertFileError::Graph(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn round_trip_small_orders(n in 5u32..=14, pick in any::<prop::sample::Index>(), note in ".{0,12}") {
            let types = CycleType::all_of_order(n);
            let f = types[pick.index(types.len())].clone();
            let mut cert = solve(&ProblemSpec::op(f), &SolverConfig::default()).unwrap();
            cert.provenance.push(Provenance::new("note").with("text", &note));
            let text = emit(&cert);
            prop_assert_eq!(parse(&text).unwrap(), cert);
        }
    }
}
