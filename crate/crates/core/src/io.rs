//! JSON input parsing and round-trip-exact output.

use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::classify::ExactRational;
use crate::error::{Error, Result};
use crate::levelset::LevelSetSlice;
use crate::monodromy::{PathKind, PathSpec};
use crate::spectral::{DensityState, HermitianMatrix};

/// Formats with 17 significant digits so the value round-trips.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Pretty JSON formatter that prints floats with 17 significant digits.
struct ExactFloats<'a>(PrettyFormatter<'a>);

impl Formatter for ExactFloats<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty-printed JSON with 17-significant-digit floats and a trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InternalConsistency(format!("cannot serialize output: {e}")))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::InternalConsistency(e.to_string()))
}

/// A parsed matrix argument.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixInput {
    /// Diagonal given by exact rationals (`diag:` shorthand, `identity/d`, or a
    /// `"spectrum"` JSON document).
    Diagonal(Vec<ExactRational>),
    Dense(HermitianMatrix),
}

impl MatrixInput {
    pub fn to_hermitian(&self) -> HermitianMatrix {
        match self {
            MatrixInput::Diagonal(v) => {
                HermitianMatrix::diagonal(&v.iter().map(ExactRational::to_f64).collect::<Vec<_>>())
            }
            MatrixInput::Dense(m) => m.clone(),
        }
    }

    pub fn to_density(&self) -> Result<DensityState> {
        DensityState::new(self.to_hermitian())
    }

    /// Exact diagonal entries, when the input carried them.
    pub fn exact_spectrum(&self) -> Result<&[ExactRational]> {
        match self {
            MatrixInput::Diagonal(v) => Ok(v),
            MatrixInput::Dense(_) => Err(Error::Unsupported(
                "exact classification needs a rational spectrum (diag:… or {\"spectrum\": [...]})".into(),
            )),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum MatrixDoc {
    Spectrum { spectrum: Vec<RationalEntry> },
    Dense { dim: Option<usize>, re: Vec<Vec<f64>>, im: Option<Vec<Vec<f64>>> },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalEntry {
    Text(String),
    Int(i64),
}

impl RationalEntry {
    fn parse(self) -> Result<ExactRational> {
        match self {
            RationalEntry::Text(s) => s.trim().parse(),
            RationalEntry::Int(n) => Ok(ExactRational::integer(n)),
        }
    }
}

fn parse_rational_list(text: &str) -> Result<Vec<ExactRational>> {
    let out: Result<Vec<_>> = text.split(',').map(|s| s.trim().parse::<ExactRational>()).collect();
    let out = out?;
    if out.is_empty() {
        return Err(Error::Validation("empty diagonal".into()));
    }
    Ok(out)
}

/// Parses a matrix JSON document.
///
/// Accepted forms: `{"dim": d, "re": [[…]], "im": [[…]]}` (with `dim` and
/// `im` optional) and `{"spectrum": ["1/2", "1/3", …]}`.
pub fn parse_matrix_json(text: &str) -> Result<MatrixInput> {
    let doc: MatrixDoc =
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("invalid matrix JSON: {e}")))?;
    match doc {
        MatrixDoc::Spectrum { spectrum } => {
            if spectrum.is_empty() {
                return Err(Error::Validation("empty spectrum".into()));
            }
            Ok(MatrixInput::Diagonal(spectrum.into_iter().map(RationalEntry::parse).collect::<Result<_>>()?))
        }
        MatrixDoc::Dense { dim, re, im } => {
            if let Some(d) = dim {
                if d != re.len() {
                    return Err(Error::Validation(format!("dim = {d} but re has {} rows", re.len())));
                }
            }
            Ok(MatrixInput::Dense(HermitianMatrix::from_parts(&re, im.as_deref())?))
        }
    }
}

/// Parses a command-line matrix argument: `diag:a,b,…`, `identity/d`, a
/// path to a JSON file, or inline JSON.
pub fn parse_matrix_arg(arg: &str) -> Result<MatrixInput> {
    let arg = arg.trim();
    if let Some(rest) = arg.strip_prefix("diag:") {
        return Ok(MatrixInput::Diagonal(parse_rational_list(rest)?));
    }
    if let Some(rest) = arg.strip_prefix("identity/") {
        let d: i64 = rest
            .parse()
            .ok()
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::Validation(format!("bad dimension in {arg:?}")))?;
        return Ok(MatrixInput::Diagonal(vec![ExactRational::new(1, d)?; d as usize]));
    }
    parse_matrix_json(&read_arg(arg)?)
}

/// Parses a spectrum argument: a comma-separated list of rationals, or
/// any diagonal matrix argument accepted by [`parse_matrix_arg`].
pub fn parse_spectrum_arg(arg: &str) -> Result<Vec<ExactRational>> {
    let trimmed = arg.trim();
    let looks_numeric = trimmed.chars().all(|ch| ch.is_ascii_digit() || " ,./-+eE".contains(ch));
    if looks_numeric && !Path::new(trimmed).is_file() {
        return parse_rational_list(trimmed);
    }
    match parse_matrix_arg(trimmed)? {
        MatrixInput::Diagonal(v) => Ok(v),
        MatrixInput::Dense(_) => Err(Error::Unsupported(
            "exact classification needs a rational spectrum, not a dense matrix".into(),
        )),
    }
}

/// Returns the contents of `arg` if it names a file, otherwise `arg` itself.
pub fn read_arg(arg: &str) -> Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    let path = Path::new(arg);
    std::fs::read_to_string(path).map_err(|e| Error::Validation(format!("cannot read {arg}: {e}")))
}

/// A parsed slice description.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceInput {
    pub slice: LevelSetSlice,
    /// Requested starting `ξ₁`; for `through` documents this is the first
    /// coordinate.
    pub xi1: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SliceDoc {
    d: usize,
    c: Option<f64>,
    through: Option<[f64; 2]>,
    #[serde(default)]
    tail: Vec<f64>,
    xi1: Option<f64>,
}

/// Parses `{"d": 3, "c": 1.0, "tail": [], "xi1": 0.2}` or
/// `{"d": 3, "through": [0.2, 0.3], "tail": []}`.
pub fn parse_slice_json(text: &str) -> Result<SliceInput> {
    let doc: SliceDoc =
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("invalid slice JSON: {e}")))?;
    let (slice, xi1) = match (doc.c, doc.through) {
        (Some(c), None) => (LevelSetSlice::new(doc.d, c, doc.tail)?, doc.xi1),
        (None, Some([l1, l2])) => (LevelSetSlice::through(doc.d, doc.tail, l1, l2)?, doc.xi1.or(Some(l1))),
        _ => return Err(Error::Validation("slice needs exactly one of \"c\" or \"through\"".into())),
    };
    Ok(SliceInput { slice, xi1 })
}

/// Parses a path document, e.g. `{"kind": "circle", "center": [0, 0], "radius": 0.2}`.
pub fn parse_path_json(text: &str) -> Result<PathSpec> {
    let kind: PathKind =
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("invalid path JSON: {e}")))?;
    PathSpec::from_kind(kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, -2.5e17, std::f64::consts::PI] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(0.2), "2.0000000000000001e-1");
    }

    #[test]
    fn json_output_is_exact() {
        let v = serde_json::json!({"a": 0.1, "b": [1, 2.5], "c": f64::NAN});
        let s = to_json_string(&v).unwrap();
        assert!(s.contains("1.0000000000000001e-1"));
        assert!(s.contains("null"));
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["a"].as_f64(), Some(0.1));
    }

    #[test]
    fn diag_shorthand() {
        let m = parse_matrix_arg("diag:1/2, 0.25,1/4").unwrap();
        let MatrixInput::Diagonal(v) = &m else { panic!() };
        assert_eq!(v[1], ExactRational::new(1, 4).unwrap());
        assert!(m.to_density().is_ok());
    }

    #[test]
    fn spectrum_argument_forms() {
        assert_eq!(parse_spectrum_arg("1/2,1/4,1/4").unwrap().len(), 3);
        assert_eq!(parse_spectrum_arg("diag:1,0").unwrap()[0], ExactRational::one());
        assert_eq!(parse_spectrum_arg(r#"{"spectrum": ["1/3", "2/3"]}"#).unwrap().len(), 2);
        assert!(matches!(parse_spectrum_arg(r#"{"re": [[1]]}"#), Err(Error::Unsupported(_))));
        assert!(parse_spectrum_arg("1/2,x").is_err());
    }

    #[test]
    fn identity_shorthand() {
        let m = parse_matrix_arg("identity/3").unwrap();
        assert_eq!(m.exact_spectrum().unwrap().len(), 3);
        assert!(parse_matrix_arg("identity/0").is_err());
    }

    #[test]
    fn dense_and_spectrum_json() {
        let m = parse_matrix_json(r#"{"dim": 2, "re": [[0.5, 0.1], [0.1, 0.5]], "im": [[0, 0.2], [-0.2, 0]]}"#)
            .unwrap();
        assert!(matches!(m, MatrixInput::Dense(_)));
        assert!(matches!(m.exact_spectrum(), Err(Error::Unsupported(_))));
        let s = parse_matrix_json(r#"{"spectrum": ["1/2", 0, "1/2"]}"#).unwrap();
        assert_eq!(s.exact_spectrum().unwrap()[1], ExactRational::zero());
        assert!(parse_matrix_json(r#"{"dim": 3, "re": [[1]]}"#).is_err());
        assert!(parse_matrix_json("not json").is_err());
    }

    #[test]
    fn slice_forms() {
        let s = parse_slice_json(r#"{"d": 3, "through": [0.2, 0.3]}"#).unwrap();
        assert_eq!(s.xi1, Some(0.2));
        assert!(s.slice.residual(0.2, 0.3).abs() < 1e-15);
        let c = s.slice.level();
        let t = parse_slice_json(&format!(r#"{{"d": 3, "c": {c}, "tail": [], "xi1": 0.25}}"#)).unwrap();
        assert_eq!(t.xi1, Some(0.25));
        assert!(parse_slice_json(r#"{"d": 3}"#).is_err());
        assert!(parse_slice_json(r#"{"d": 3, "c": 1.0, "through": [0.2, 0.3]}"#).is_err());
    }

    #[test]
    fn path_json() {
        let p = parse_path_json(r#"{"kind": "circle", "center": [0, 0], "radius": 0.2}"#).unwrap();
        assert!(p.is_closed());
        assert!((p.start().re - 0.2).abs() < 1e-15);
        let q = parse_path_json(r#"{"kind": "polyline", "vertices": [[0, 0], [1, 0]], "closed": false}"#).unwrap();
        assert!(!q.is_closed());
        assert!(parse_path_json(r#"{"kind": "spiral"}"#).is_err());
    }
}
