//! Named matroids.
//!
//! Elements are 0-indexed; digit strings in the tables below use 1-indexed labels.
//! C₅ is read as the rank-3 matroid on five elements whose only nonbasis is `123`.

use super::{full_set, set_of, subsets_of_size, Matroid, Set};
use crate::error::{Error, Result};

/// Names accepted by [`named_matroid`], with parameters shown as placeholders.
pub fn matroid_catalog_names() -> Vec<String> {
    [
        "U(r,n)", "F7", "F7dual", "F7minus", "C5", "C5dual", "D6", "wheel(r)", "whirl(r)", "Q6", "P6", "P7", "T8",
        "AG23_minus_e", "PG22",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

/// Sets written as digit strings in 1-indexed labels.
fn sets(spec: &[&str]) -> Vec<Set> {
    spec.iter()
        .map(|s| set_of(&s.chars().map(|c| c.to_digit(10).unwrap() as usize - 1).collect::<Vec<_>>()))
        .collect()
}

fn f7() -> Result<Matroid> {
    Matroid::from_nonbases(7, 3, &sets(&["156", "123", "345", "367", "257", "147", "246"]))
}

fn wheel_graph_bases(r: usize) -> Vec<Set> {
    // Hub is vertex 0, rim vertices 1..=r; element 2i is spoke i+1, element 2i+1 is rim edge i+1.
    let mut edges = Vec::new();
    for i in 0..r {
        edges.push((0, i + 1));
        edges.push((i + 1, (i + 1) % r + 1));
    }
    subsets_of_size(full_set(2 * r), r)
        .into_iter()
        .filter(|&s| {
            let mut parent: Vec<usize> = (0..=r).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                let mut x = x;
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            (0..2 * r).filter(|&e| s >> e & 1 == 1).all(|e| {
                let (a, b) = (find(&mut parent, edges[e].0), find(&mut parent, edges[e].1));
                if a == b {
                    return false;
                }
                parent[a] = b;
                true
            })
        })
        .collect()
}

fn param(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.strip_suffix(')')?.trim().parse().ok()
}

fn uniform_params(name: &str) -> Option<(usize, usize)> {
    if let Some(inner) = name.strip_prefix("U(").and_then(|s| s.strip_suffix(')')) {
        let (a, b) = inner.split_once(',')?;
        return Some((a.trim().parse().ok()?, b.trim().parse().ok()?));
    }
    let digits = name.strip_prefix('U')?;
    if let Some((a, b)) = digits.split_once(',') {
        return Some((a.parse().ok()?, b.parse().ok()?));
    }
    if digits.len() >= 2 && digits.chars().all(|c| c.is_ascii_digit()) {
        return Some((digits[..1].parse().ok()?, digits[1..].parse().ok()?));
    }
    None
}

/// The catalog matroid called `name`; `A+B` denotes a direct sum.
pub fn named_matroid(name: &str) -> Result<Matroid> {
    let name = name.trim();
    if let Some((a, b)) = name.split_once('+') {
        return named_matroid(a)?.direct_sum(&named_matroid(b)?);
    }
    if let Some((r, n)) = uniform_params(name) {
        return Matroid::uniform(r, n);
    }
    if let Some(r) = param(name, "wheel(") {
        if !(2..=6).contains(&r) {
            return Err(Error::Precondition(format!("wheel({r}) is outside 2..=6")));
        }
        return Matroid::from_bases(2 * r, &wheel_graph_bases(r));
    }
    if let Some(r) = param(name, "whirl(") {
        if !(2..=6).contains(&r) {
            return Err(Error::Precondition(format!("whirl({r}) is outside 2..=6")));
        }
        let mut b = wheel_graph_bases(r);
        b.push((0..r).fold(0, |acc, i| acc | 1 << (2 * i + 1)));
        return Matroid::from_bases(2 * r, &b);
    }
    match name {
        "F7" => f7(),
        "F7dual" | "F7*" => Ok(f7()?.dual()),
        "F7minus" | "F7-" => Matroid::from_nonbases(7, 3, &sets(&["156", "123", "345", "367", "257", "147"])),
        "P7" => Matroid::from_nonbases(7, 3, &sets(&["135", "174", "376", "572", "462"])),
        "C5" => Matroid::from_nonbases(5, 3, &sets(&["123"])),
        "C5dual" | "C5*" => Ok(named_matroid("C5")?.dual()),
        "D6" => {
            let mut b = Vec::new();
            for a in 0..4 {
                b.push(set_of(&[a, 4, 5]));
                for c in a + 1..4 {
                    b.push(set_of(&[a, c, 4]));
                    b.push(set_of(&[a, c, 5]));
                }
            }
            Matroid::from_bases(6, &b)
        }
        "W3" => named_matroid("whirl(3)"),
        "Q6" => Matroid::from_circuits(6, 3, &sets(&["145", "123"])),
        "P6" => Matroid::from_circuits(6, 3, &sets(&["123"])),
        "T8" => Matroid::from_nonbases(
            8,
            4,
            &sets(&["1238", "1247", "1346", "2345", "1256", "1357", "1458", "2367", "2468", "3478", "5678"]),
        ),
        "AG23_minus_e" | "AG23-e" => {
            Matroid::from_nonbases(8, 3, &sets(&["123", "146", "178", "247", "258", "345", "368", "567"]))
        }
        "PG22" => {
            let lines: Vec<Set> = subsets_of_size(full_set(7), 3)
                .into_iter()
                .filter(|&s| {
                    let v: Vec<usize> = super::elems(s).into_iter().map(|e| e + 1).collect();
                    v[0] ^ v[1] ^ v[2] == 0
                })
                .collect();
            Matroid::from_nonbases(7, 3, &lines)
        }
        _ => Err(Error::UnknownName(name.to_string())),
    }
}
