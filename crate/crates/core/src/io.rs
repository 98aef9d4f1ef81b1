//! Byte-stable JSON for models, witnesses and certificates, and replay of
//! saved evidence.
//!
//! Keys come out sorted (the default `serde_json` map is ordered), points are
//! referenced by id and exact numbers use [`QuadRat::canonical`].

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::chains::{Chain, HomologyCertificate, Move, Witness};
use crate::error::{Error, Result};
use crate::exactnum::QuadRat;
use crate::homology::Obstruction;
use crate::rips::Rips2;
use crate::space::{Point, ScaleInput, ScaleKind, UniformModel};

/// Pretty-printed, newline-terminated JSON.
pub fn to_stable_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Parses JSON text, reporting the line and column of syntax errors.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

fn field<'v>(v: &'v Value, key: &str, at: &str) -> Result<&'v Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("{at}: missing `{key}`")))
}

fn str_field<'v>(v: &'v Value, key: &str, at: &str) -> Result<&'v str> {
    field(v, key, at)?.as_str().ok_or_else(|| Error::Parse(format!("{at}.{key}: expected a string")))
}

fn array<'v>(v: &'v Value, at: &str) -> Result<&'v Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse(format!("{at}: expected an array")))
}

fn usize_field(v: &Value, key: &str, at: &str) -> Result<usize> {
    field(v, key, at)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("{at}.{key}: expected a non-negative integer")))
}

fn bigint(v: &Value, at: &str) -> Result<BigInt> {
    let s = v.as_str().ok_or_else(|| Error::Parse(format!("{at}: expected an integer string")))?;
    s.parse().map_err(|_| Error::Parse(format!("{at}: malformed integer `{s}`")))
}

pub fn model_to_json(m: &UniformModel) -> Value {
    let points: Vec<Value> = m
        .points()
        .iter()
        .map(|p| {
            let mut o = serde_json::Map::new();
            o.insert("id".into(), p.id.clone().into());
            if let Some(l) = &p.label {
                o.insert("label".into(), l.clone().into());
            }
            if let Some(c) = &p.coords {
                o.insert("coords".into(), c.iter().map(|x| Value::from(x.canonical())).collect());
            }
            Value::Object(o)
        })
        .collect();
    let scales: Vec<Value> = m
        .ladder()
        .iter()
        .map(|s| match &s.kind {
            ScaleKind::MetricThreshold(v) => json!({"tag": s.tag, "kind": "metric", "value": v.canonical()}),
            ScaleKind::ExplicitRelation(pairs) => {
                let pairs: Vec<Value> = pairs.iter().map(|&(i, j)| json!([m.points()[i].id, m.points()[j].id])).collect();
                json!({"tag": s.tag, "kind": "pairs", "pairs": pairs})
            }
        })
        .collect();
    json!({"radicand": m.radicand(), "points": points, "scales": scales})
}

pub fn model_from_json(v: &Value) -> Result<UniformModel> {
    let radicand =
        field(v, "radicand", "model")?.as_u64().ok_or_else(|| Error::Parse("model.radicand: expected an integer".into()))?;
    let mut points = Vec::new();
    for (i, p) in array(field(v, "points", "model")?, "model.points")?.iter().enumerate() {
        let at = format!("points[{i}]");
        let id = str_field(p, "id", &at)?;
        let mut point = match p.get("coords") {
            None | Some(Value::Null) => Point::new(id),
            Some(c) => {
                let c = array(c, &format!("{at}.coords"))?;
                if c.len() != 3 {
                    return Err(Error::Parse(format!("{at}.coords: expected 3 coordinates")));
                }
                let mut xyz = Vec::with_capacity(3);
                for (k, x) in c.iter().enumerate() {
                    let s = x.as_str().ok_or_else(|| Error::Parse(format!("{at}.coords[{k}]: expected a string")))?;
                    xyz.push(QuadRat::parse(s, radicand).map_err(|e| Error::Parse(format!("{at}.coords[{k}]: {e}")))?);
                }
                Point::with_coords(id, xyz.try_into().expect("three coordinates"))
            }
        };
        if let Some(l) = p.get("label").and_then(Value::as_str) {
            point = point.labelled(l);
        }
        points.push(point);
    }
    let mut scales = Vec::new();
    for (i, s) in array(field(v, "scales", "model")?, "model.scales")?.iter().enumerate() {
        let at = format!("scales[{i}]");
        let tag = str_field(s, "tag", &at)?.to_string();
        let input = match str_field(s, "kind", &at)? {
            "metric" => {
                let txt = str_field(s, "value", &at)?;
                ScaleInput::Metric(QuadRat::parse(txt, radicand).map_err(|e| Error::Parse(format!("{at}.value: {e}")))?)
            }
            "pairs" => {
                let mut pairs = Vec::new();
                for (k, pr) in array(field(s, "pairs", &at)?, &format!("{at}.pairs"))?.iter().enumerate() {
                    let pat = format!("{at}.pairs[{k}]");
                    let pr = array(pr, &pat)?;
                    match pr.as_slice() {
                        [Value::String(x), Value::String(y)] => pairs.push((x.clone(), y.clone())),
                        _ => return Err(Error::Parse(format!("{pat}: expected two point ids"))),
                    }
                }
                ScaleInput::Pairs(pairs)
            }
            other => return Err(Error::Parse(format!("{at}.kind: unknown kind `{other}`"))),
        };
        scales.push((tag, input));
    }
    UniformModel::new(radicand, points, scales)
}

pub fn parse_model(text: &str) -> Result<UniformModel> {
    model_from_json(&parse_json(text)?)
}

fn ids(m: &UniformModel, pts: &[usize]) -> Value {
    pts.iter().map(|&p| Value::from(m.points()[p].id.clone())).collect()
}

fn points_of(m: &UniformModel, v: &Value, at: &str) -> Result<Vec<usize>> {
    array(v, at)?
        .iter()
        .map(|p| p.as_str().ok_or_else(|| Error::Parse(format!("{at}: expected point ids"))).and_then(|s| m.point_index(s)))
        .collect()
}

pub fn move_to_json(m: &UniformModel, mv: &Move) -> Value {
    match *mv {
        Move::InsertDuplicate { pos } => json!({"op": "insert_duplicate", "pos": pos}),
        Move::DeleteDuplicate { pos } => json!({"op": "delete_duplicate", "pos": pos}),
        Move::Expand { pos, point } => json!({"op": "expand", "pos": pos, "point": m.points()[point].id}),
        Move::Contract { pos } => json!({"op": "contract", "pos": pos}),
    }
}

pub fn move_from_json(m: &UniformModel, v: &Value, at: &str) -> Result<Move> {
    let pos = usize_field(v, "pos", at)?;
    Ok(match str_field(v, "op", at)? {
        "insert_duplicate" => Move::InsertDuplicate { pos },
        "delete_duplicate" => Move::DeleteDuplicate { pos },
        "expand" => Move::Expand { pos, point: m.point_index(str_field(v, "point", at)?)? },
        "contract" => Move::Contract { pos },
        other => return Err(Error::Parse(format!("{at}.op: unknown move `{other}`"))),
    })
}

/// A self-contained, replayable piece of evidence.
#[derive(Clone, Debug)]
pub enum Artifact {
    Witness { model: Arc<UniformModel>, scale: usize, from: Chain, to: Chain, witness: Witness },
    Certificate { model: Arc<UniformModel>, scale: usize, certificate: HomologyCertificate },
}

fn edge_values(m: &UniformModel, k: &Rips2, vals: impl Iterator<Item = (usize, BigInt)>) -> Value {
    vals.filter(|(_, v)| !v.is_zero())
        .map(|(e, v)| {
            let (x, y) = k.edges[e];
            json!([m.points()[x].id, m.points()[y].id, v.to_string()])
        })
        .collect()
}

fn edge_values_from(m: &UniformModel, k: &Rips2, v: &Value, at: &str) -> Result<Vec<(usize, BigInt)>> {
    let mut out = Vec::new();
    for (i, e) in array(v, at)?.iter().enumerate() {
        let eat = format!("{at}[{i}]");
        let e = array(e, &eat)?;
        let [x, y, c] = e.as_slice() else {
            return Err(Error::Parse(format!("{eat}: expected [x, y, value]")));
        };
        let (Some(x), Some(y)) = (x.as_str(), y.as_str()) else {
            return Err(Error::Parse(format!("{eat}: expected point ids")));
        };
        let (x, y) = (m.point_index(x)?, m.point_index(y)?);
        let (idx, sign) = k.oriented_edge(x, y).ok_or_else(|| Error::Verification(format!("{eat}: not an edge")))?;
        out.push((idx, bigint(c, &eat)? * sign));
    }
    Ok(out)
}

impl Artifact {
    pub fn model(&self) -> &UniformModel {
        match self {
            Artifact::Witness { model, .. } | Artifact::Certificate { model, .. } => model,
        }
    }

    /// Re-checks the evidence from its own data.
    pub fn verify(&self) -> Result<()> {
        match self {
            Artifact::Witness { model, from, to, witness, .. } => witness.verify(model, from, to),
            Artifact::Certificate { model, scale, certificate } => certificate.verify(model, *scale),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Artifact::Witness { model, scale, from, to, witness } => json!({
                "kind": "witness",
                "model": model_to_json(model),
                "scale": model.scale_tag(*scale),
                "from": ids(model, from.points()),
                "to": ids(model, to.points()),
                "moves": witness.moves.iter().map(|mv| move_to_json(model, mv)).collect::<Vec<_>>(),
            }),
            Artifact::Certificate { model, scale, certificate } => {
                let k = Rips2::from_relation(model.relation(*scale));
                let ob = &certificate.obstruction;
                json!({
                    "kind": "certificate",
                    "model": model_to_json(model),
                    "scale": model.scale_tag(*scale),
                    "loop": ids(model, &certificate.loop_points),
                    "cycle": edge_values(model, &k, certificate.cycle.iter().cloned().enumerate()),
                    "status": "nontrivial",
                    "obstruction": {
                        "cocycle": edge_values(model, &k, ob.cocycle.iter().cloned()),
                        "modulus": ob.modulus.to_string(),
                        "pairing": ob.pairing.to_string(),
                        "residues": ob.residues.iter().map(|(i, v)| json!([i, v.to_string()])).collect::<Vec<_>>(),
                    },
                })
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let model = Arc::new(model_from_json(field(v, "model", "artifact")?)?);
        let scale = model.scale_index(str_field(v, "scale", "artifact")?)?;
        match str_field(v, "kind", "artifact")? {
            "witness" => {
                let from = Chain::new(&model, scale, points_of(&model, field(v, "from", "artifact")?, "from")?)?;
                let to = Chain::new(&model, scale, points_of(&model, field(v, "to", "artifact")?, "to")?)?;
                let moves = array(field(v, "moves", "artifact")?, "moves")?
                    .iter()
                    .enumerate()
                    .map(|(i, mv)| move_from_json(&model, mv, &format!("moves[{i}]")))
                    .collect::<Result<_>>()?;
                Ok(Artifact::Witness { model, scale, from, to, witness: Witness { moves } })
            }
            "certificate" => {
                let k = Rips2::from_relation(model.relation(scale));
                let loop_points = points_of(&model, field(v, "loop", "artifact")?, "loop")?;
                let mut cycle = vec![BigInt::zero(); k.edges.len()];
                for (e, c) in edge_values_from(&model, &k, field(v, "cycle", "artifact")?, "cycle")? {
                    cycle[e] += c;
                }
                let ob = field(v, "obstruction", "artifact")?;
                let cocycle = edge_values_from(&model, &k, field(ob, "cocycle", "obstruction")?, "obstruction.cocycle")?;
                let residues = array(field(ob, "residues", "obstruction")?, "obstruction.residues")?
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        let at = format!("obstruction.residues[{i}]");
                        match array(r, &at)?.as_slice() {
                            [idx, val] => Ok((
                                idx.as_u64().ok_or_else(|| Error::Parse(format!("{at}: expected an index")))? as usize,
                                bigint(val, &at)?,
                            )),
                            _ => Err(Error::Parse(format!("{at}: expected [index, value]"))),
                        }
                    })
                    .collect::<Result<_>>()?;
                let obstruction = Obstruction {
                    cocycle,
                    modulus: bigint(field(ob, "modulus", "obstruction")?, "obstruction.modulus")?,
                    pairing: bigint(field(ob, "pairing", "obstruction")?, "obstruction.pairing")?,
                    residues,
                };
                Ok(Artifact::Certificate { model, scale, certificate: HomologyCertificate { loop_points, cycle, obstruction } })
            }
            other => Err(Error::Parse(format!("artifact.kind: unknown kind `{other}`"))),
        }
    }
}

/// Collects every artifact inside a JSON document (a bare artifact, or any
/// object nesting them under `evidence` arrays).
pub fn artifacts_in(v: &Value) -> Result<Vec<Artifact>> {
    let mut out = Vec::new();
    collect(v, &mut out)?;
    Ok(out)
}

fn collect(v: &Value, out: &mut Vec<Artifact>) -> Result<()> {
    match v {
        Value::Object(o) => {
            if matches!(o.get("kind").and_then(Value::as_str), Some("witness" | "certificate")) && o.contains_key("model") {
                out.push(Artifact::from_json(v)?);
            } else {
                for child in o.values() {
                    collect(child, out)?;
                }
            }
        }
        Value::Array(items) => {
            for child in items {
                collect(child, out)?;
            }
        }
        _ => {}
    }
    Ok(())
}

/// Verifies every artifact in a document; returns how many were checked.
pub fn replay_document(v: &Value) -> Result<usize> {
    let arts = artifacts_in(v)?;
    if arts.is_empty() {
        return Err(Error::Parse("no witness or certificate found".into()));
    }
    for a in &arts {
        a.verify()?;
    }
    Ok(arts.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{Budget, HomotopyContext, Verdict};
    use crate::paperlab::{build_hexagon_graph, build_hexagon_square};

    #[test]
    fn model_round_trip_is_byte_stable() {
        for m in [build_hexagon_square(2).unwrap(), build_hexagon_graph(1).unwrap()] {
            let text = to_stable_string(&model_to_json(&m));
            let back = parse_model(&text).unwrap();
            assert_eq!(back.len(), m.len());
            for s in 0..m.ladder().len() {
                assert_eq!(back.relation(s), m.relation(s));
            }
            assert_eq!(to_stable_string(&model_to_json(&back)), text);
        }
    }

    #[test]
    fn parse_errors_carry_locations() {
        let e = parse_model("{\n  \"radicand\": 3,\n  \"points\": [\n").unwrap_err();
        assert!(e.to_string().contains("line"), "{e}");
        let e = parse_model(r#"{"radicand": 3, "points": [{"id": "a", "coords": ["1", "x", "0"]}], "scales": []}"#).unwrap_err();
        assert!(e.to_string().contains("points[0].coords[1]"), "{e}");
    }

    #[test]
    fn artifacts_round_trip_and_replay() {
        let m = Arc::new(build_hexagon_square(1).unwrap());
        let ctx = HomotopyContext::new(&m, 0).unwrap();
        let budget = Budget::default();
        let hex = Chain::parse(&m, 0, &["a", "b", "c", "d", "e", "f", "a"]).unwrap();
        let a = Chain::parse(&m, 0, &["a"]).unwrap();
        let Verdict::Equivalent(witness) = ctx.decide(&hex, &a, &budget).unwrap() else { panic!() };
        let w = Artifact::Witness { model: m.clone(), scale: 0, from: hex, to: a, witness };
        let c1 = Chain::parse(&m, 0, &["a", "g", "h", "o"]).unwrap();
        let c2 = Chain::parse(&m, 0, &["a", "o"]).unwrap();
        let Verdict::Inequivalent(certificate) = ctx.decide(&c1, &c2, &budget).unwrap() else { panic!() };
        let c = Artifact::Certificate { model: m.clone(), scale: 0, certificate };
        let doc = json!({"evidence": [w.to_json(), c.to_json()]});
        let text = to_stable_string(&doc);
        assert_eq!(replay_document(&parse_json(&text).unwrap()).unwrap(), 2);

        let mut broken = w.to_json();
        broken["moves"].as_array_mut().unwrap().pop();
        assert!(replay_document(&broken).is_err());
        let mut forged = c.to_json();
        forged["obstruction"]["pairing"] = Value::from("7");
        assert!(replay_document(&forged).is_err());
    }
}
