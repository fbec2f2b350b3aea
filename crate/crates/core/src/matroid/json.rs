//! The `matroid/v1` JSON format and the canonical text form `r n / b1 b2 …`.

use serde_json::{json, Value};

use super::{elems, set_of, Matroid, Set};
use crate::error::{Error, Result};

pub const FORMAT: &str = "matroid/v1";

pub fn matroid_to_json(m: &Matroid) -> Value {
    let bases: Vec<Vec<usize>> = m.bases().iter().map(|&b| elems(b)).collect();
    json!({ "format": FORMAT, "n": m.n(), "rank": m.rank(), "bases": bases })
}

fn parse_sets(v: &Value, n: usize) -> Result<Vec<Set>> {
    let a = v.as_array().ok_or_else(|| Error::Parse("set list must be an array".into()))?;
    a.iter()
        .map(|s| {
            let items = s.as_array().ok_or_else(|| Error::Parse("each set must be an array".into()))?;
            let mut out = Vec::with_capacity(items.len());
            for x in items {
                let e = x.as_u64().ok_or_else(|| Error::Parse(format!("element {x} is not a non-negative integer")))?
                    as usize;
                if e >= n {
                    return Err(Error::Parse(format!("element {e} outside ground set of size {n}")));
                }
                out.push(e);
            }
            Ok(set_of(&out))
        })
        .collect()
}

pub fn matroid_from_json(v: &Value) -> Result<Matroid> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("matroid JSON must be an object".into()))?;
    if let Some(f) = obj.get("format") {
        if f.as_str() != Some(FORMAT) {
            return Err(Error::Parse(format!("unsupported format {f}")));
        }
    }
    let n = obj.get("n").and_then(Value::as_u64).ok_or_else(|| Error::Parse("missing integer 'n'".into()))? as usize;
    if n > super::MAX_N {
        return Err(Error::Precondition(format!("ground set of size {n} exceeds {}", super::MAX_N)));
    }
    let rank = obj.get("rank").and_then(Value::as_u64).map(|r| r as usize);
    let present: Vec<&str> = ["bases", "circuits", "nonbases"].into_iter().filter(|k| obj.contains_key(*k)).collect();
    if present.len() != 1 {
        return Err(Error::Parse("exactly one of 'bases', 'circuits', 'nonbases' is required".into()));
    }
    let sets = parse_sets(&obj[present[0]], n)?;
    let need_rank = || rank.ok_or_else(|| Error::Parse("missing integer 'rank'".into()));
    let m = match present[0] {
        "bases" => Matroid::from_bases(n, &sets)?,
        "circuits" => Matroid::from_circuits(n, need_rank()?, &sets)?,
        _ => Matroid::from_nonbases(n, need_rank()?, &sets)?,
    };
    if let Some(r) = rank {
        if r != m.rank() {
            return Err(Error::Axiom(format!("declared rank {r} but bases have size {}", m.rank())));
        }
    }
    Ok(m)
}

/// `r n / b1 b2 …` with each basis as its sorted digit string (n ≤ 10).
pub fn to_text(m: &Matroid) -> Result<String> {
    if m.n() > 10 {
        return Err(Error::Precondition("text form needs n ≤ 10".into()));
    }
    let bases: Vec<String> =
        m.bases().iter().map(|&b| elems(b).iter().map(|e| char::from(b'0' + *e as u8)).collect()).collect();
    Ok(format!("{} {} / {}", m.rank(), m.n(), bases.join(" ")))
}

pub fn parse_text(s: &str) -> Result<Matroid> {
    let (head, body) = s.split_once('/').ok_or_else(|| Error::Parse("expected 'r n / bases'".into()))?;
    let nums: Vec<usize> = head
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad number '{t}'"))))
        .collect::<Result<_>>()?;
    let [r, n] = nums[..] else {
        return Err(Error::Parse("expected 'r n' before '/'".into()));
    };
    let mut bases = Vec::new();
    for tok in body.split_whitespace() {
        let es: Vec<usize> = tok
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).filter(|&d| d < n).ok_or_else(|| Error::Parse(format!("bad basis '{tok}'"))))
            .collect::<Result<_>>()?;
        bases.push(set_of(&es));
    }
    if bases.is_empty() && r == 0 {
        bases.push(0);
    }
    let m = Matroid::from_bases(n, &bases)?;
    if m.rank() != r {
        return Err(Error::Axiom(format!("declared rank {r} but bases have size {}", m.rank())));
    }
    Ok(m)
}
