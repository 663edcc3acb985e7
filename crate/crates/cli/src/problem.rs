//! Problem files: graph, shift, bandwidth profile and run options.
//!
//! Validation walks the raw JSON so every error carries a JSON pointer.

use graphnyquist::bandwidth::{BandwidthProfile, ExtReal};
use graphnyquist::linalg::Matrix;
use graphnyquist::spectral::{Edge, GraphModel, ShiftKind};
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeKind {
    Periodic,
    Sinc,
}

impl ModeKind {
    pub fn name(self) -> &'static str {
        match self {
            ModeKind::Periodic => "periodic",
            ModeKind::Sinc => "sinc",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Options {
    pub mode: Option<ModeKind>,
    pub period: Option<f64>,
    pub window: Option<(f64, f64)>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    /// 0-based.
    pub v_star: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub graph: GraphModel<f64>,
    pub shift: ShiftKind<f64>,
    pub profile: BandwidthProfile<f64>,
    pub options: Options,
}

impl Problem {
    pub fn n(&self) -> usize {
        self.graph.n_vertices()
    }
}

fn invalid(pointer: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Schema {
        pointer: pointer.into(),
        message: message.into(),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value, CliError> {
    obj.get(key).ok_or_else(|| invalid(format!("{at}/{key}"), "required field is missing"))
}

fn array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| invalid(at, "expected an array"))
}

fn index(v: &Value, n: usize, at: &str) -> Result<usize, CliError> {
    let i = v.as_u64().ok_or_else(|| invalid(at, "expected a non-negative integer"))?;
    usize::try_from(i)
        .ok()
        .filter(|&i| i < n)
        .ok_or_else(|| invalid(at, format!("index {i} out of range for {n} vertices")))
}

fn number(v: &Value, at: &str) -> Result<f64, CliError> {
    v.as_f64().ok_or_else(|| invalid(at, "expected a number"))
}

fn ext_real(v: &Value, at: &str) -> Result<ExtReal<f64>, CliError> {
    match v {
        Value::String(s) if s == "inf" => Ok(ExtReal::Infinite),
        Value::Number(_) => {
            let x = number(v, at)?;
            if x >= 0.0 {
                Ok(ExtReal::Finite(x))
            } else {
                Err(invalid(at, format!("bandwidth {x} is negative")))
            }
        }
        _ => Err(invalid(at, "expected a non-negative number or \"inf\"")),
    }
}

fn bandwidths(obj: &Map<String, Value>, key: &str, n: usize) -> Result<Vec<ExtReal<f64>>, CliError> {
    let at = format!("/{key}");
    let items = array(field(obj, key, "")?, &at)?;
    if items.len() != n {
        return Err(invalid(at, format!("expected {n} entries, got {}", items.len())));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, v)| ext_real(v, &format!("/{key}/{i}")))
        .collect()
}

fn edges(v: &Value, n: usize) -> Result<Vec<Edge<f64>>, CliError> {
    let mut out = Vec::new();
    for (i, e) in array(v, "/edges")?.iter().enumerate() {
        let at = format!("/edges/{i}");
        let parts = array(e, &at)?;
        if !(2..=3).contains(&parts.len()) {
            return Err(invalid(at, "expected [i, j] or [i, j, weight]"));
        }
        let a = index(&parts[0], n, &format!("{at}/0"))?;
        let b = index(&parts[1], n, &format!("{at}/1"))?;
        if a == b {
            return Err(invalid(at, "self-loops are not allowed"));
        }
        let weight = match parts.get(2) {
            Some(w) => number(w, &format!("{at}/2"))?,
            None => 1.0,
        };
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(invalid(format!("{at}/2"), "weight must be positive and finite"));
        }
        out.push(Edge { a, b, weight });
    }
    Ok(out)
}

fn shift(v: Option<&Value>, n: usize) -> Result<ShiftKind<f64>, CliError> {
    match v {
        None => Ok(ShiftKind::Laplacian),
        Some(Value::String(s)) if s == "laplacian" => Ok(ShiftKind::Laplacian),
        Some(Value::String(s)) if s == "adjacency" => Ok(ShiftKind::Adjacency),
        Some(Value::Object(obj)) => {
            let rows = array(field(obj, "matrix", "/shift")?, "/shift/matrix")?;
            if rows.len() != n {
                return Err(invalid("/shift/matrix", format!("expected {n} rows")));
            }
            let mut parsed = Vec::with_capacity(n);
            for (r, row) in rows.iter().enumerate() {
                let at = format!("/shift/matrix/{r}");
                let cells = array(row, &at)?;
                if cells.len() != n {
                    return Err(invalid(at, format!("expected {n} entries")));
                }
                parsed.push(
                    cells
                        .iter()
                        .enumerate()
                        .map(|(c, x)| number(x, &format!("{at}/{c}")))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            let m = Matrix::from_rows(&parsed).map_err(|e| invalid("/shift/matrix", e.to_string()))?;
            Ok(ShiftKind::Custom(m))
        }
        Some(_) => Err(invalid("/shift", "expected \"laplacian\", \"adjacency\" or {\"matrix\": [[...]]}")),
    }
}

fn options(v: Option<&Value>, n: usize) -> Result<Options, CliError> {
    let Some(v) = v else {
        return Ok(Options::default());
    };
    let obj = v.as_object().ok_or_else(|| invalid("/options", "expected an object"))?;
    let mut o = Options::default();
    for (key, value) in obj {
        let at = format!("/options/{key}");
        match key.as_str() {
            "mode" => {
                o.mode = Some(match value.as_str() {
                    Some("periodic") => ModeKind::Periodic,
                    Some("sinc") => ModeKind::Sinc,
                    _ => return Err(invalid(at, "expected \"periodic\" or \"sinc\"")),
                })
            }
            "period" => {
                let t = number(value, &at)?;
                if !(t > 0.0 && t.is_finite()) {
                    return Err(invalid(at, "period must be positive"));
                }
                o.period = Some(t);
            }
            "window" => {
                let w = array(value, &at)?;
                if w.len() != 2 {
                    return Err(invalid(at, "expected [start, end]"));
                }
                let (a, b) = (number(&w[0], &format!("{at}/0"))?, number(&w[1], &format!("{at}/1"))?);
                if !(a < b) {
                    return Err(invalid(at, "window start must precede its end"));
                }
                o.window = Some((a, b));
            }
            "seed" => o.seed = Some(value.as_u64().ok_or_else(|| invalid(&at, "expected a non-negative integer"))?),
            "tolerance" => {
                let t = number(value, &at)?;
                if !(t > 0.0) {
                    return Err(invalid(at, "tolerance must be positive"));
                }
                o.tolerance = Some(t);
            }
            "vstar" => {
                let items = array(value, &at)?;
                o.v_star = Some(
                    items
                        .iter()
                        .enumerate()
                        .map(|(i, x)| index(x, n, &format!("{at}/{i}")))
                        .collect::<Result<_, _>>()?,
                );
            }
            _ => return Err(invalid(at, "unknown option")),
        }
    }
    Ok(o)
}

pub fn parse_problem(text: &str) -> Result<Problem, CliError> {
    let root: Value = serde_json::from_str(text).map_err(|e| invalid("", format!("malformed JSON: {e}")))?;
    let obj = root.as_object().ok_or_else(|| invalid("", "expected an object"))?;
    let n_value = field(obj, "n", "")?;
    let n = n_value
        .as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| invalid("/n", "expected a positive integer"))?;
    let edges = match obj.get("edges") {
        Some(v) => edges(v, n)?,
        None => Vec::new(),
    };
    let labels = match obj.get("labels") {
        Some(v) => {
            let items = array(v, "/labels")?;
            if items.len() != n {
                return Err(invalid("/labels", format!("expected {n} labels")));
            }
            Some(
                items
                    .iter()
                    .enumerate()
                    .map(|(i, l)| {
                        l.as_str()
                            .map(str::to_owned)
                            .ok_or_else(|| invalid(format!("/labels/{i}"), "expected a string"))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            )
        }
        None => None,
    };
    let graph = GraphModel::new(n, edges, labels).map_err(|e| invalid("/edges", e.to_string()))?;
    let shift = shift(obj.get("shift"), n)?;
    let b = bandwidths(obj, "B", n)?;
    let c = bandwidths(obj, "C", n)?;
    let profile = BandwidthProfile::new(b, c).map_err(|e| invalid("", e.to_string()))?;
    let options = options(obj.get("options"), n)?;
    for key in obj.keys() {
        if !["n", "edges", "labels", "shift", "B", "C", "options"].contains(&key.as_str()) {
            return Err(invalid(format!("/{key}"), "unknown field"));
        }
    }
    Ok(Problem {
        graph,
        shift,
        profile,
        options,
    })
}
