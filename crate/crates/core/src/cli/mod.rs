//! The `foundry` command line.

pub mod suite;

use std::collections::{HashSet, VecDeque};
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::abgroup::Coords;
use crate::error::{default_budget, Error, Result};
use crate::foundation::{foundation, foundation_pasture, FoundationOptions, Route};
use crate::matroid::{matroid_catalog_names, matroid_from_json, named_matroid, parse_text, Matroid};
use crate::pasture::{
    automorphisms, catalog_names, colimit, hom_enumerate, named, tensor, Diagram, DiagramEdge, Pasture,
    PastureElement, PastureMorphism,
};
use crate::represent::representability_row;

#[derive(Parser, Debug)]
#[command(name = "foundry", version, about = "Foundations of matroids and pasture morphisms")]
pub struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the foundation of a matroid.
    Compute {
        #[arg(long)]
        matroid: String,
        #[arg(long, default_value = "grs")]
        method: String,
        /// Check every applicable route against the GRS presentation.
        #[arg(long)]
        cross_check: bool,
        /// Identify the result against the named catalog.
        #[arg(long)]
        identify: bool,
    },
    /// Count or list pasture morphisms.
    Hom {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        list: bool,
    },
    /// Automorphism count and a generating set.
    Aut {
        #[arg(long)]
        pasture: String,
    },
    /// Representability of a matroid over a list of pastures.
    Representable {
        #[arg(long)]
        matroid: String,
        #[arg(long, value_delimiter = ',')]
        over: Vec<String>,
    },
    /// Tensor product of two pastures.
    Tensor { a: String, b: String },
    /// Quotient of a pasture by additional null terms.
    Quotient {
        pasture: String,
        #[arg(long)]
        relations: PathBuf,
    },
    /// Colimit of a diagram of pastures.
    Colimit {
        #[arg(long)]
        diagram: PathBuf,
    },
    /// Names of catalog entries.
    Catalog {
        #[arg(long, value_enum, num_args = 0..=1, default_missing_value = "all")]
        list: Option<CatalogKind>,
    },
    /// Run the acceptance suite.
    VerifySuite {
        /// Skip matroids on more than seven elements.
        #[arg(long)]
        fast: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CatalogKind {
    All,
    Pastures,
    Matroids,
}

fn read(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_json(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

/// A matroid by catalog name, else from a `matroid/v1` JSON or text file.
pub fn load_matroid(arg: &str) -> Result<Matroid> {
    match named_matroid(arg) {
        Err(Error::UnknownName(_)) => {}
        other => return other,
    }
    let s = read(arg.as_ref())?;
    if s.trim_start().starts_with('{') {
        matroid_from_json(&parse_json(&s)?)
    } else {
        parse_text(&s)
    }
}

/// A pasture by catalog name, else from a `pasture/v1` JSON file.
pub fn load_pasture(arg: &str) -> Result<Pasture> {
    match named(arg) {
        Err(Error::UnknownName(_)) => {}
        other => return other,
    }
    Pasture::from_json_str(&read(arg.as_ref())?)
}

fn value_to_pasture(v: &Value) -> Result<Pasture> {
    match v {
        Value::String(s) => named(s),
        _ => Pasture::from_json(v),
    }
}

/// Null terms from `{"add_relations": [[e, e, e], ...]}` or a bare array.
fn parse_terms(p: &Pasture, v: &Value) -> Result<Vec<[PastureElement; 3]>> {
    let list = v.get("add_relations").unwrap_or(v);
    let list = list.as_array().ok_or_else(|| Error::Parse("relations must be an array".into()))?;
    list.iter()
        .map(|t| {
            let t = t.as_array().filter(|t| t.len() == 3).ok_or_else(|| Error::Parse("a relation has three terms".into()))?;
            Ok([p.element_from_json(&t[0])?, p.element_from_json(&t[1])?, p.element_from_json(&t[2])?])
        })
        .collect()
}

/// `{"nodes": [pasture or name, ...], "edges": [{"source", "target", "images": {gen: elem}}]}`.
fn parse_diagram(v: &Value) -> Result<Diagram> {
    let nodes: Vec<Pasture> = v
        .get("nodes")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("diagram needs a 'nodes' array".into()))?
        .iter()
        .map(value_to_pasture)
        .collect::<Result<_>>()?;
    let mut edges = Vec::new();
    for e in v.get("edges").and_then(Value::as_array).map(Vec::as_slice).unwrap_or(&[]) {
        let idx = |k: &str| -> Result<usize> {
            let i = e.get(k).and_then(Value::as_u64).ok_or_else(|| Error::Parse(format!("edge needs '{k}'")))? as usize;
            if i >= nodes.len() {
                return Err(Error::Parse(format!("edge {k} {i} is out of range")));
            }
            Ok(i)
        };
        let (s, t) = (idx("source")?, idx("target")?);
        let images = e.get("images").and_then(Value::as_object).ok_or_else(|| Error::Parse("edge needs 'images'".into()))?;
        let (src, tgt) = (&nodes[s], &nodes[t]);
        let mut imgs = vec![tgt.epsilon()];
        for name in &src.names()[1..] {
            let x = images.get(name).ok_or_else(|| Error::Parse(format!("no image for generator '{name}'")))?;
            match tgt.element_from_json(x)? {
                PastureElement::Unit(g) => imgs.push(g),
                PastureElement::Zero => return Err(Error::Precondition(format!("generator '{name}' maps to zero"))),
            }
        }
        let morphism = PastureMorphism { images: imgs };
        if !src.is_morphism(tgt, &morphism)? {
            return Err(Error::Precondition(format!("edge {s} -> {t} is not a morphism")));
        }
        edges.push(DiagramEdge { source: s, target: t, morphism });
    }
    Ok(Diagram { nodes, edges })
}

/// A generating set of `Aut(p)`, chosen greedily in enumeration order.
fn aut_generators(p: &Pasture, auts: &[PastureMorphism]) -> Result<Vec<PastureMorphism>> {
    let key = |f: &PastureMorphism| -> Result<Vec<Coords>> { f.images.iter().map(|g| p.coords(g)).collect() };
    let mut gens: Vec<PastureMorphism> = Vec::new();
    let mut seen: HashSet<Vec<Coords>> = HashSet::new();
    seen.insert(key(&p.identity())?);
    for a in auts {
        if seen.contains(&key(a)?) {
            continue;
        }
        gens.push(a.clone());
        let mut queue: VecDeque<PastureMorphism> = VecDeque::from([p.identity()]);
        let mut group: HashSet<Vec<Coords>> = HashSet::from([key(&p.identity())?]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = x.then(g);
                if group.insert(key(&y)?) {
                    queue.push_back(y);
                }
            }
        }
        seen = group;
    }
    Ok(gens)
}

enum Output {
    Json(Value),
    Text(String),
}

fn execute(cmd: Command) -> Result<(Output, bool)> {
    let out = match cmd {
        Command::Compute { matroid, method, cross_check, identify } => {
            let m = load_matroid(&matroid)?;
            let opts = FoundationOptions {
                method: Route::parse(&method)?,
                cross_check: Some(cross_check),
                identify,
                budget: default_budget(),
            };
            Output::Json(foundation(&m, &opts)?.to_json())
        }
        Command::Hom { from, to, list } => {
            let (p, q) = (load_pasture(&from)?, load_pasture(&to)?);
            let homs = hom_enumerate(&p, &q)?;
            if list {
                Output::Json(Value::Array(homs.iter().map(|f| p.morphism_to_json(&q, f)).collect()))
            } else {
                Output::Json(json!(homs.len()))
            }
        }
        Command::Aut { pasture } => {
            let p = load_pasture(&pasture)?;
            let auts = automorphisms(&p, default_budget())?;
            let gens: Vec<Value> = aut_generators(&p, &auts)?.iter().map(|f| p.morphism_to_json(&p, f)).collect();
            Output::Json(json!({ "count": auts.len(), "generators": gens }))
        }
        Command::Representable { matroid, over } => {
            let m = load_matroid(&matroid)?;
            let targets: Vec<Pasture> = over.iter().map(|s| load_pasture(s)).collect::<Result<_>>()?;
            let row = representability_row(&foundation_pasture(&m)?, &targets)?;
            Output::Json(json!({ "columns": over, "row": row }))
        }
        Command::Tensor { a, b } => Output::Json(tensor(&load_pasture(&a)?, &load_pasture(&b)?)?.pasture.to_json()),
        Command::Quotient { pasture, relations } => {
            let p = load_pasture(&pasture)?;
            let terms = parse_terms(&p, &parse_json(&read(&relations)?)?)?;
            Output::Json(p.quotient(&terms)?.to_json())
        }
        Command::Colimit { diagram } => {
            let d = parse_diagram(&parse_json(&read(&diagram)?)?)?;
            Output::Json(colimit(&d)?.pasture.to_json())
        }
        Command::Catalog { list } => {
            let kind = list.unwrap_or(CatalogKind::All);
            let mut v = serde_json::Map::new();
            if matches!(kind, CatalogKind::All | CatalogKind::Pastures) {
                v.insert("pastures".into(), json!(catalog_names()));
            }
            if matches!(kind, CatalogKind::All | CatalogKind::Matroids) {
                v.insert("matroids".into(), json!(matroid_catalog_names()));
            }
            Output::Json(Value::Object(v))
        }
        Command::VerifySuite { fast } => {
            let results = suite::run_suite(fast);
            let text: Vec<String> = results.iter().map(|r| r.line()).collect();
            let ok = results.iter().all(|r| r.passed());
            return Ok((Output::Text(text.join("\n") + "\n"), ok));
        }
    };
    Ok((out, true))
}

fn error_json(e: &Error) -> String {
    json!({ "error": { "kind": e.kind(), "message": e.to_string() } }).to_string()
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprintln!("{}", error_json(&Error::Parse(e.to_string().trim().to_string())));
            return 1;
        }
    };
    let result = execute(cli.command).and_then(|(out, ok)| {
        let text = match out {
            Output::Json(v) => serde_json::to_string_pretty(&v).expect("serializable") + "\n",
            Output::Text(s) => s,
        };
        match &cli.out {
            Some(path) => std::fs::write(path, text).map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))?,
            None => print!("{text}"),
        }
        Ok(ok)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => Error::Verification(String::new()).exit_code(),
        Err(e) => {
            eprintln!("{}", error_json(&e));
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests;
