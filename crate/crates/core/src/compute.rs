//! Single-operation evaluation over JSON documents.
//!
//! Every op reads one JSON object and returns
//! `{"op", "input_sha256", "result"}`; op-level failures return
//! `{"op", "input_sha256", "error", "message"}` instead.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bundle::{catalog, space_by_name, BundlePoint, ProlongedBundle};
use crate::error::Error;
use crate::json::{
    rows_to_matrix, BundlePointJson, ProlongedMatrixJson, Rows, SectionJson, StarElementJson, TangentFiberJson,
    TangentVectorJson, WitnessJson,
};
use crate::lie::groups::group_by_name;
use crate::lie::{AlgebraElement, GroupDescriptor, GroupElement, Vector};
use crate::prolongation::{apply_inverse_action, direct_lower_block_inverse_action, prolong, TangentFiberVector};
use crate::representation::Representation;
use crate::sections::{named_generator, rho_apply, SampledEquivariantSection, GENERATOR_NAMES};
use crate::star::StarElement;
use crate::verify::Suite;

pub const OPS: [&str; 10] = [
    "star_multiply",
    "star_inverse",
    "prolong",
    "apply_inverse_action",
    "prolonged_action",
    "are_equivalent",
    "canonicalize",
    "bundle_projection",
    "local_trivialization",
    "rho_apply",
];

#[derive(Debug, Error)]
pub enum ComputeError {
    /// Unknown op or input not matching the op's schema.
    #[error("schema error: {0}")]
    Schema(String),
    /// The op ran and failed.
    #[error("{0}")]
    Op(Error),
}

impl From<Error> for ComputeError {
    fn from(e: Error) -> Self {
        ComputeError::Op(e)
    }
}

/// Hex SHA-256 of the raw input bytes.
pub fn input_sha256(input: &str) -> String {
    Sha256::digest(input.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Evaluates `op` on `input`. `Ok` carries the output document, which
/// is an error document for op-level failures; `Err` is a schema error.
pub fn compute(op: &str, input: &str) -> Result<(Value, bool), ComputeError> {
    if !OPS.contains(&op) {
        return Err(ComputeError::Schema(format!("unknown op `{op}` (expected one of {})", OPS.join(", "))));
    }
    let doc: Value = serde_json::from_str(input).map_err(|e| ComputeError::Schema(format!("invalid JSON: {e}")))?;
    let hash = input_sha256(input);
    match evaluate(op, doc) {
        Ok(result) => Ok((json!({ "op": op, "input_sha256": hash, "result": result }), true)),
        Err(ComputeError::Op(e)) => {
            Ok((json!({ "op": op, "input_sha256": hash, "error": e.code(), "message": e.to_string() }), false))
        }
        Err(schema) => Err(schema),
    }
}

fn parse<T: DeserializeOwned>(doc: Value) -> Result<T, ComputeError> {
    serde_json::from_value(doc).map_err(|e| ComputeError::Schema(e.to_string()))
}

fn to_value<T: Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("wire types serialize")
}

fn matrix(rows: &Rows) -> Result<crate::lie::Matrix, ComputeError> {
    rows_to_matrix(rows).map_err(ComputeError::Schema)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSelector {
    group: Option<String>,
    example: Option<String>,
}

impl GroupSelector {
    /// Explicit `group`, else the example's `G`.
    fn resolve(&self) -> Result<Arc<GroupDescriptor>, ComputeError> {
        match (&self.group, &self.example) {
            (Some(g), _) => Ok(group_by_name(g)?),
            (None, Some(e)) => Ok(space_by_name(e)?.big_group().clone()),
            (None, None) => Err(ComputeError::Schema("one of `group` or `example` is required".into())),
        }
    }
}

fn star(d: &Arc<GroupDescriptor>, p: &StarElementJson) -> Result<StarElement, ComputeError> {
    let a = AlgebraElement::from_coords(d, Vector::from_vec(p.a.clone()))?;
    let g = GroupElement::new(d, matrix(&p.g)?)?;
    Ok(StarElement::new(a, g)?)
}

fn witness(d: &Arc<GroupDescriptor>, k: &WitnessJson) -> Result<StarElement, ComputeError> {
    star(d, &StarElementJson { a: k.b.clone(), g: k.h.clone() })
}

fn bundle_point(bundle: &ProlongedBundle, p: &BundlePointJson) -> Result<BundlePoint, ComputeError> {
    let s = star(bundle.space().big_group(), &StarElementJson { a: p.a.clone(), g: p.g.clone() })?;
    let fiber = TangentFiberVector::new(Vector::from_vec(p.xi.clone()), Vector::from_vec(p.u.clone()))?;
    Ok(bundle.point(s, fiber)?)
}

fn bundle(example: &str, representation: Option<&str>) -> Result<ProlongedBundle, ComputeError> {
    Ok(ProlongedBundle::from_catalog(example, representation)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StarPairInput {
    #[serde(flatten)]
    selector: GroupSelector,
    p: StarElementJson,
    q: StarElementJson,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StarInput {
    #[serde(flatten)]
    selector: GroupSelector,
    p: StarElementJson,
}

/// `(b, h)` in the domain of `sigma`: `group` names it directly,
/// otherwise the example's subgroup `H`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProlongInput {
    group: Option<String>,
    example: Option<String>,
    representation: String,
    b: Vec<f64>,
    h: Rows,
    v: Option<TangentFiberJson>,
    #[serde(default)]
    paper_variant: bool,
}

impl ProlongInput {
    fn domain(&self) -> Result<Arc<GroupDescriptor>, ComputeError> {
        match (&self.group, &self.example) {
            (Some(g), _) => Ok(group_by_name(g)?),
            (None, Some(e)) => Ok(space_by_name(e)?.subgroup().clone()),
            (None, None) => Err(ComputeError::Schema("one of `group` or `example` is required".into())),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleInput {
    example: String,
    representation: Option<String>,
    p: BundlePointJson,
    q: Option<BundlePointJson>,
    k: Option<WitnessJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RhoInput {
    example: String,
    representation: Option<String>,
    g: Rows,
    section: SectionJson,
}

fn required<T>(v: Option<T>, field: &str) -> Result<T, ComputeError> {
    v.ok_or_else(|| ComputeError::Schema(format!("missing field `{field}`")))
}

fn evaluate(op: &str, doc: Value) -> Result<Value, ComputeError> {
    match op {
        "star_multiply" => {
            let i: StarPairInput = parse(doc)?;
            let d = i.selector.resolve()?;
            let r = star(&d, &i.p)?.multiply(&star(&d, &i.q)?)?;
            Ok(to_value(StarElementJson::from(&r)))
        }
        "star_inverse" => {
            let i: StarInput = parse(doc)?;
            let d = i.selector.resolve()?;
            Ok(to_value(StarElementJson::from(&star(&d, &i.p)?.inverse())))
        }
        "prolong" | "apply_inverse_action" => {
            let i: ProlongInput = parse(doc)?;
            let d = i.domain()?;
            let rep = Representation::by_id(&i.representation, &d)?;
            let k = witness(&d, &WitnessJson { b: i.b.clone(), h: i.h.clone() })?;
            if op == "prolong" {
                return Ok(to_value(ProlongedMatrixJson::from(&prolong(&rep, k.a(), k.g())?)));
            }
            let v = TangentFiberVector::from(&required(i.v.as_ref(), "v")?.clone());
            let w = apply_inverse_action(&rep, k.a(), k.g(), &v)?;
            let mut out = to_value(TangentFiberJson::from(&w));
            if i.paper_variant {
                let direct = direct_lower_block_inverse_action(&rep, k.a(), k.g(), &v)?;
                out["direct_lower_block"] = to_value(TangentFiberJson::from(&direct));
                out["discrepancy"] = json!(direct.distance(&w));
            }
            Ok(out)
        }
        "prolonged_action" | "are_equivalent" | "canonicalize" | "bundle_projection" | "local_trivialization" => {
            let i: BundleInput = parse(doc)?;
            let b = bundle(&i.example, i.representation.as_deref())?;
            let p = bundle_point(&b, &i.p)?;
            match op {
                "prolonged_action" => {
                    let k = required(i.k.as_ref(), "k")?;
                    let h = b.space().subgroup().clone();
                    let g = b.space().big_group().clone();
                    // accept k given in H or already included in G
                    let k = match witness(&h, k) {
                        Ok(k) => k,
                        Err(_) => witness(&g, k)?,
                    };
                    Ok(to_value(BundlePointJson::from(&b.prolonged_action(&p, &k)?)))
                }
                "are_equivalent" => {
                    let q = bundle_point(&b, required(i.q.as_ref(), "q")?)?;
                    Ok(match b.are_equivalent(&p, &q) {
                        Some(k) => json!({ "equivalent": true, "witness": WitnessJson::from(&k) }),
                        None => json!({ "equivalent": false, "witness": null }),
                    })
                }
                "canonicalize" => Ok(to_value(BundlePointJson::from(&b.canonicalize(&p)?))),
                "bundle_projection" => Ok(to_value(TangentVectorJson::from(&b.bundle_projection(&p)?))),
                _ => {
                    let (x, v) = b.local_trivialization(&p)?;
                    Ok(json!({ "label": TangentVectorJson::from(&x), "fiber": TangentFiberJson::from(&v) }))
                }
            }
        }
        "rho_apply" => {
            let i: RhoInput = parse(doc)?;
            let b = bundle(&i.example, i.representation.as_deref())?;
            let d = b.space().big_group().clone();
            let points = i
                .section
                .points
                .iter()
                .map(|r| Ok(GroupElement::new(&d, matrix(r)?)?))
                .collect::<Result<Vec<_>, ComputeError>>()?;
            let s = match &i.section.generator {
                Some(name) => {
                    let generator = named_generator(name, &b)?;
                    SampledEquivariantSection::from_generator(b, points, generator)?
                }
                None => {
                    let values = i.section.values.iter().map(|v| Vector::from_vec(v.clone())).collect();
                    SampledEquivariantSection::tabulated(b, points, values)?
                }
            };
            let g = GroupElement::new(&d, matrix(&i.g)?)?;
            let mut out = SectionJson::from(&rho_apply(&g, &s)?);
            // translated generators are not catalog-registered
            out.generator.take_if(|name| !GENERATOR_NAMES.contains(&name.as_str()));
            Ok(to_value(out))
        }
        _ => unreachable!("op list checked by caller"),
    }
}

/// Static catalog dump in stable order.
pub fn list_examples() -> Value {
    let suites: Vec<&str> = Suite::ALL_SUITES.iter().map(Suite::name).collect();
    let entries: Vec<Value> = catalog()
        .iter()
        .map(|space| {
            let reps: Vec<Value> = space
                .representations()
                .iter()
                .map(|id| {
                    let m = Representation::by_id(id, space.subgroup()).map(|r| r.fiber_dim()).unwrap_or(0);
                    json!({ "id": id, "fiber_dim": m, "prolonged_fiber_dim": 2 * m })
                })
                .collect();
            let m = Representation::by_id(space.default_representation(), space.subgroup())
                .map(|r| r.fiber_dim())
                .unwrap_or(0);
            json!({
                "name": space.name(),
                "group": space.big_group().name(),
                "subgroup": space.subgroup().name(),
                "dim_g": space.big_group().dim(),
                "dim_h": space.subgroup().dim(),
                "fiber_dim": m,
                "prolonged_fiber_dim": 2 * m,
                "representations": reps,
                "suites": suites,
            })
        })
        .collect();
    Value::Array(entries)
}
