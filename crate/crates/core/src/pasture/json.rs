//! The `pasture/v1` JSON format.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{Elem, MultRelation, Pasture, PastureElement, PastureMorphism, Presentation};
use crate::error::{Error, Result};

pub const FORMAT: &str = "pasture/v1";

fn sign_value(s: i8) -> Value {
    json!(s)
}

fn elem_to_json(e: &Elem) -> Value {
    match e {
        Elem::Zero => json!("0"),
        Elem::Unit { sign, exps } => json!({ "sign": sign_value(*sign), "exps": exps }),
    }
}

fn parse_sign(v: Option<&Value>) -> Result<i8> {
    match v.and_then(Value::as_i64) {
        Some(1) => Ok(1),
        Some(-1) => Ok(-1),
        None => Ok(1),
        Some(s) => Err(Error::Parse(format!("sign must be ±1, got {s}"))),
    }
}

fn parse_exps(v: &Map<String, Value>, skip_sign: bool) -> Result<BTreeMap<String, i64>> {
    let mut out = BTreeMap::new();
    for (k, x) in v {
        if skip_sign && k == "sign" {
            continue;
        }
        let e = x.as_i64().ok_or_else(|| Error::Parse(format!("exponent of '{k}' is not an integer")))?;
        out.insert(k.clone(), e);
    }
    Ok(out)
}

fn elem_from_json(v: &Value) -> Result<Elem> {
    match v {
        Value::String(s) if s == "0" => Ok(Elem::Zero),
        Value::Number(n) if n.as_i64() == Some(0) => Ok(Elem::Zero),
        Value::Object(m) => {
            let sign = parse_sign(m.get("sign"))?;
            let exps = match m.get("exps") {
                None => BTreeMap::new(),
                Some(Value::Object(e)) => parse_exps(e, false)?,
                Some(_) => return Err(Error::Parse("'exps' must be an object".into())),
            };
            Ok(Elem::Unit { sign, exps })
        }
        _ => Err(Error::Parse(format!("malformed element {v}"))),
    }
}

pub fn presentation_to_json(p: &Presentation, name: Option<&str>) -> Value {
    let mult: Vec<Value> = p
        .mult_relations
        .iter()
        .map(|r| {
            let mut m: Map<String, Value> = r.exps.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
            m.insert("sign".into(), sign_value(r.sign));
            Value::Object(m)
        })
        .collect();
    let add: Vec<Value> =
        p.add_relations.iter().map(|t| Value::Array(t.iter().map(elem_to_json).collect())).collect();
    let mut out = json!({
        "format": FORMAT,
        "generators": p.generators,
        "mult_relations": mult,
        "add_relations": add,
    });
    if let Some(n) = name {
        out["name"] = json!(n);
    }
    out
}

pub fn presentation_from_json(v: &Value) -> Result<(Presentation, Option<String>)> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("pasture JSON must be an object".into()))?;
    if let Some(f) = obj.get("format") {
        if f.as_str() != Some(FORMAT) {
            return Err(Error::Parse(format!("unsupported format {f}")));
        }
    }
    let generators = match obj.get("generators") {
        None => vec![],
        Some(Value::Array(a)) => a
            .iter()
            .map(|g| g.as_str().map(str::to_string).ok_or_else(|| Error::Parse("generator names must be strings".into())))
            .collect::<Result<_>>()?,
        Some(_) => return Err(Error::Parse("'generators' must be an array".into())),
    };
    let mut mult_relations = Vec::new();
    if let Some(a) = obj.get("mult_relations") {
        let a = a.as_array().ok_or_else(|| Error::Parse("'mult_relations' must be an array".into()))?;
        for r in a {
            let m = r.as_object().ok_or_else(|| Error::Parse("multiplicative relation must be an object".into()))?;
            mult_relations.push(MultRelation { exps: parse_exps(m, true)?, sign: parse_sign(m.get("sign"))? });
        }
    }
    let mut add_relations = Vec::new();
    if let Some(a) = obj.get("add_relations") {
        let a = a.as_array().ok_or_else(|| Error::Parse("'add_relations' must be an array".into()))?;
        for t in a {
            let t = t.as_array().ok_or_else(|| Error::Parse("additive relation must be an array".into()))?;
            if t.len() != 3 {
                return Err(Error::Parse(format!("additive relation needs 3 terms, got {}", t.len())));
            }
            add_relations.push([elem_from_json(&t[0])?, elem_from_json(&t[1])?, elem_from_json(&t[2])?]);
        }
    }
    let name = obj.get("name").and_then(Value::as_str).map(str::to_string);
    Ok((Presentation { generators, mult_relations, add_relations }, name))
}

impl Pasture {
    pub fn to_json(&self) -> Value {
        presentation_to_json(&self.presentation, self.name_hint.as_deref())
    }

    pub fn from_json(v: &Value) -> Result<Pasture> {
        let (p, name) = presentation_from_json(v)?;
        Pasture::from_presentation_named(p, name)
    }

    pub fn from_json_str(s: &str) -> Result<Pasture> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }

    /// Reads a `pasture/v1` element in terms of this pasture's generators.
    pub fn element_from_json(&self, v: &Value) -> Result<PastureElement> {
        match elem_from_json(v)? {
            Elem::Zero => Ok(PastureElement::Zero),
            Elem::Unit { sign, exps } => {
                let f: Vec<(&str, i64)> = exps.iter().map(|(k, &e)| (k.as_str(), e)).collect();
                Ok(PastureElement::Unit(self.word(sign, &f)?))
            }
        }
    }

    /// Morphism images as `pasture/v1` elements, keyed by source generator.
    pub fn morphism_to_json(&self, target: &Pasture, f: &PastureMorphism) -> Value {
        let mut m = Map::new();
        for (name, img) in self.names().iter().zip(&f.images).skip(1) {
            m.insert(name.clone(), elem_to_json(&target.elem(img)));
        }
        Value::Object(m)
    }
}
