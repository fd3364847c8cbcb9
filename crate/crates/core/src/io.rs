//! Text formats: space documents, sequence literals and real lists.
//!
//! A space document is TOML with three keys (plus an optional `name`):
//!
//! ```toml
//! points = [1, 2, 3]                 # integers or strings
//! dist = [                           # row-major, indexed by `points` order
//!   [0, "1/sqrt(2)", 1],
//!   ["1/sqrt(2)", 0, "1/sqrt(2)"],
//!   [1, "1/sqrt(2)", 0],
//! ]
//! alpha = [[1, 1, 1], [1, 1, 1], [1, 1, 1]]
//! ```
//!
//! Table entries may be numbers or strings holding an expression understood
//! by [`crate::expr::eval`]. The loader only checks shape; axioms are checked
//! when the spec is built into a [`ControlledSpace`].

use std::fmt::Write as _;
use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

use crate::error::Error;
use crate::expr;
use crate::sequence::EpSequence;
use crate::space::{paper_example_spec, ControlledSpace, SpaceSpec};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("line {line}: `{field}`: {message}")]
    Field { line: usize, field: String, message: String },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Space(#[from] Error),
}

/// Where a space comes from on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceSource {
    /// `paper-example N`, also written `paper-example:N` or `paper-example=N`.
    Builtin(usize),
    File(PathBuf),
}

impl SpaceSource {
    pub fn parse(arg: &str) -> Result<Self, LoadError> {
        let Some(rest) = arg.trim().strip_prefix("paper-example") else {
            return Ok(SpaceSource::File(PathBuf::from(arg)));
        };
        let n = rest.trim_start_matches([' ', ':', '=']);
        n.trim().parse().map(SpaceSource::Builtin).map_err(|_| LoadError::Field {
            line: 1,
            field: "paper-example".into(),
            message: format!("expected `paper-example N` with integer N, got `{arg}`"),
        })
    }

    pub fn load(&self) -> Result<SpaceSpec, LoadError> {
        match self {
            SpaceSource::Builtin(n) => Ok(paper_example_spec(*n)?),
            SpaceSource::File(path) => load_space_file(path),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawLabel {
    Int(i64),
    Str(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawReal {
    Int(i64),
    Float(f64),
    Expr(String),
}

type RawTable = Spanned<Vec<Spanned<Vec<Spanned<RawReal>>>>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    #[allow(dead_code)]
    name: Option<String>,
    points: Option<Spanned<Vec<Spanned<RawLabel>>>>,
    dist: Option<RawTable>,
    alpha: Option<RawTable>,
}

struct LineIndex<'a>(&'a str);

impl LineIndex<'_> {
    fn line_col(&self, offset: usize) -> (usize, usize) {
        let before = &self.0[..offset.min(self.0.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        (line, column)
    }

    fn line(&self, span: Range<usize>) -> usize {
        self.line_col(span.start).0
    }
}

fn parse_error(src: &str, e: toml::de::Error) -> LoadError {
    let (line, column) = e.span().map_or((1, 1), |s| LineIndex(src).line_col(s.start));
    LoadError::Parse { line, column, message: e.message().trim().to_string() }
}

pub fn load_space_str(src: &str) -> Result<SpaceSpec, LoadError> {
    let raw: RawSpace = toml::from_str(src).map_err(|e| parse_error(src, e))?;
    let idx = LineIndex(src);

    let points = raw.points.ok_or_else(|| LoadError::Shape("missing `points` list".into()))?;
    let labels: Vec<String> = points
        .get_ref()
        .iter()
        .map(|l| match l.get_ref() {
            RawLabel::Int(i) => i.to_string(),
            RawLabel::Str(s) => s.clone(),
        })
        .collect();
    let n = labels.len();

    let table = |name: &str, t: Option<RawTable>| -> Result<Vec<Vec<f64>>, LoadError> {
        let t = t.ok_or_else(|| LoadError::Shape(format!("missing `{name}` table")))?;
        if t.get_ref().len() != n {
            return Err(LoadError::Shape(format!(
                "`{name}` has {} rows but there are {n} points (line {})",
                t.get_ref().len(),
                idx.line(t.span())
            )));
        }
        let mut out = Vec::with_capacity(n);
        for (i, row) in t.into_inner().into_iter().enumerate() {
            let row_line = idx.line(row.span());
            if row.get_ref().len() != n {
                return Err(LoadError::Shape(format!(
                    "`{name}` row {i} has {} entries but there are {n} points (line {row_line})",
                    row.get_ref().len()
                )));
            }
            let mut values = Vec::with_capacity(n);
            for (j, cell) in row.into_inner().into_iter().enumerate() {
                let line = idx.line(cell.span());
                let v = match cell.into_inner() {
                    RawReal::Int(v) => v as f64,
                    RawReal::Float(v) => v,
                    RawReal::Expr(s) => expr::eval(&s).map_err(|e| LoadError::Field {
                        line,
                        field: format!("{name}[{i}][{j}]"),
                        message: format!("cannot evaluate `{s}`: {e}"),
                    })?,
                };
                values.push(v);
            }
            out.push(values);
        }
        Ok(out)
    };
    let dist = table("dist", raw.dist)?;
    let alpha = table("alpha", raw.alpha)?;
    SpaceSpec::new(labels, dist, alpha).map_err(|e| match e {
        Error::Shape(msg) => LoadError::Shape(msg),
        other => LoadError::Space(other),
    })
}

pub fn load_space_file(path: &Path) -> Result<SpaceSpec, LoadError> {
    let src = std::fs::read_to_string(path)
        .map_err(|source| LoadError::Io { path: path.to_path_buf(), source })?;
    load_space_str(&src)
}

/// Decimal with at most 12 significant digits, always a valid TOML number.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let a = rounded.abs();
    if a != 0.0 && !(1e-6..1e15).contains(&a) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

fn format_label(label: &str) -> String {
    match label.parse::<i64>() {
        Ok(i) if i.to_string() == label => label.to_string(),
        _ => toml::Value::String(label.to_string()).to_string(),
    }
}

/// Writes a space document that [`load_space_str`] reads back to the same
/// labels and to the same table values at 12 significant digits.
pub fn emit_space(spec: &SpaceSpec) -> String {
    let mut out = String::new();
    let labels: Vec<String> = spec.labels().iter().map(|l| format_label(l)).collect();
    let _ = writeln!(out, "points = [{}]", labels.join(", "));
    for (name, table) in [("dist", spec.dist_table()), ("alpha", spec.alpha_table())] {
        let _ = writeln!(out, "{name} = [");
        for row in table {
            let cells: Vec<String> = row.iter().map(|&v| format_real(v)).collect();
            let _ = writeln!(out, "  [{}],", cells.join(", "));
        }
        out.push_str("]\n");
    }
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeq {
    #[serde(default)]
    prefix: Vec<RawLabel>,
    cycle: Vec<RawLabel>,
}

#[derive(Deserialize)]
struct SeqDoc {
    seq: RawSeq,
}

/// Parses `prefix = [7], cycle = [2, 3]` (prefix optional) against the
/// labels of `space`. A bare list such as `2, 3` or `[2, 3]` is a cycle.
pub fn parse_sequence(literal: &str, space: &ControlledSpace) -> Result<EpSequence, LoadError> {
    let body = literal.trim();
    let doc = if body.contains('=') {
        format!("seq = {{ {body} }}")
    } else {
        let list = body.trim_start_matches('[').trim_end_matches(']');
        format!("seq = {{ cycle = [{list}] }}")
    };
    let raw: SeqDoc = toml::from_str(&doc).map_err(|e| LoadError::Field {
        line: 1,
        field: "seq".into(),
        message: format!("bad sequence literal `{literal}`: {}", e.message().trim()),
    })?;
    let resolve = |labels: Vec<RawLabel>| {
        labels
            .into_iter()
            .map(|l| {
                let s = match l {
                    RawLabel::Int(i) => i.to_string(),
                    RawLabel::Str(s) => s,
                };
                space.point(&s)
            })
            .collect::<Result<Vec<_>, _>>()
    };
    let prefix = resolve(raw.seq.prefix)?;
    let cycle = resolve(raw.seq.cycle)?;
    Ok(EpSequence::new(prefix, cycle)?)
}

/// Structured-text rendering of any report type (fuzz summaries, theorem
/// reports, analysis results).
pub fn emit_report<T: serde::Serialize>(value: &T) -> Result<String, toml::ser::Error> {
    toml::to_string(value)
}

/// Comma-separated reals; each entry may be an expression like `1/sqrt(2)`.
pub fn parse_real_list(list: &str) -> Result<Vec<f64>, LoadError> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            expr::eval(s).map_err(|e| LoadError::Field {
                line: 1,
                field: "r".into(),
                message: format!("cannot evaluate `{s}`: {e}"),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{validate_axioms, Point};
    use crate::Violation;

    const TRIANGLE: &str = r#"
name = "three points"
points = ["a", "b", "c"]
dist = [
  [0, "1/sqrt(2)", 1],
  ["1/sqrt(2)", 0, "1/sqrt(2)"],
  [1, "1/sqrt(2)", 0.0],
]
alpha = [[1, 1, 1], [1, 1, 1], [1, 1, 1]]
"#;

    #[test]
    fn loads_expressions_and_labels() {
        let spec = load_space_str(TRIANGLE).unwrap();
        assert_eq!(spec.labels(), ["a", "b", "c"]);
        assert_eq!(spec.dist_table()[0][1], 1.0 / 2f64.sqrt());
        assert!(validate_axioms(&spec).is_valid());
    }

    #[test]
    fn builtin_source_is_the_constructor() {
        for arg in ["paper-example 4", "paper-example:4", "paper-example=4"] {
            let src = SpaceSource::parse(arg).unwrap();
            assert_eq!(src, SpaceSource::Builtin(4));
            assert_eq!(src.load().unwrap(), paper_example_spec(4).unwrap());
        }
        assert!(SpaceSource::parse("paper-example x").is_err());
        assert!(matches!(
            SpaceSource::parse("paper-example 1").unwrap().load(),
            Err(LoadError::Space(Error::Domain(_)))
        ));
        assert_eq!(SpaceSource::parse("a.toml").unwrap(), SpaceSource::File("a.toml".into()));
    }

    #[test]
    fn asymmetric_document_loads_then_fails_d2() {
        let doc = "points = [1, 2]\ndist = [[0, 1], [2, 0]]\nalpha = [[1, 1], [1, 1]]\n";
        let spec = load_space_str(doc).unwrap();
        let err = ControlledSpace::new(spec).unwrap_err();
        let Error::Axioms(v) = err else { panic!("expected axiom violations") };
        assert!(v.iter().any(|v| matches!(v, Violation::Asymmetric { .. })));
    }

    #[test]
    fn missing_alpha_is_a_shape_error() {
        let doc = "points = [1, 2]\ndist = [[0, 1], [1, 0]]\n";
        assert!(matches!(load_space_str(doc), Err(LoadError::Shape(m)) if m.contains("alpha")));
    }

    #[test]
    fn short_row_is_a_shape_error_with_line() {
        let doc = "points = [1, 2]\ndist = [\n  [0, 1],\n  [1],\n]\nalpha = [[1, 1], [1, 1]]\n";
        let err = load_space_str(doc).unwrap_err();
        assert!(matches!(&err, LoadError::Shape(m) if m.contains("line 4")), "{err}");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let doc = "points = [1, 2]\ndist = [[0, 1], [1, 0]\n";
        assert!(matches!(load_space_str(doc), Err(LoadError::Parse { line: 2.., .. })));
        let doc = "points = [1]\ndist = [[\"sqrt(\"]]\nalpha = [[1]]\n";
        assert!(matches!(
            load_space_str(doc),
            Err(LoadError::Field { line: 2, ref field, .. }) if field == "dist[0][0]"
        ));
        let doc = "points = [1]\ndist = [[0]]\nalpha = [[1]]\nbeta = 3\n";
        assert!(matches!(load_space_str(doc), Err(LoadError::Parse { line: 4, .. })));
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(1.0), "1");
        assert_eq!(format_real(1.0 / 2f64.sqrt()), "0.707106781187");
        assert_eq!(format_real(0.5), "0.5");
        assert_eq!(format_real(2f64.sqrt() * 1e20), "1.41421356237e20");
        assert_eq!(format_real(1.5e-9), "1.5e-9");
        assert_eq!(format_real(0.0), "0");
    }

    #[test]
    fn example_round_trips() {
        let spec = paper_example_spec(6).unwrap();
        let back = load_space_str(&emit_space(&spec)).unwrap();
        assert_eq!(back.labels(), spec.labels());
        assert!(validate_axioms(&back).is_valid());
        let text = emit_space(&back);
        assert_eq!(text, emit_space(&spec));
    }

    #[test]
    fn quoted_labels_round_trip() {
        let spec = load_space_str(TRIANGLE).unwrap();
        let text = emit_space(&spec);
        assert!(text.starts_with("points = [\"a\", \"b\", \"c\"]"));
        assert_eq!(load_space_str(&text).unwrap().labels(), spec.labels());
    }

    #[test]
    fn sequence_literals() {
        let space = ControlledSpace::new(paper_example_spec(10).unwrap()).unwrap();
        let s = parse_sequence("prefix = [7], cycle = [2, 3]", &space).unwrap();
        assert_eq!(s.prefix(), &[Point(6)]);
        assert_eq!(s.cycle(), &[Point(1), Point(2)]);
        assert_eq!(parse_sequence("cycle=[2,3]", &space).unwrap().cycle(), s.cycle());
        assert_eq!(parse_sequence("2, 3", &space).unwrap().cycle(), s.cycle());
        assert_eq!(parse_sequence("[2,3]", &space).unwrap().cycle(), s.cycle());
        assert!(matches!(
            parse_sequence("cycle = [11]", &space),
            Err(LoadError::Space(Error::UnknownLabel(_)))
        ));
        assert!(parse_sequence("cycle = []", &space).is_err());
        assert!(parse_sequence("prefix = [1]", &space).is_err());
    }

    #[test]
    fn real_lists() {
        assert_eq!(
            parse_real_list("0, 1/sqrt(2), 1").unwrap(),
            vec![0.0, 1.0 / 2f64.sqrt(), 1.0]
        );
        assert!(parse_real_list("1, foo").is_err());
    }
}
