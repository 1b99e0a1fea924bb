//! JSON documents and command execution behind the `lft` binary.
//!
//! A document looks like
//!
//! ```json
//! {
//!   "ring": {"kind": "extension", "root_of_unity": 4, "radical_degree": 1, "radical": "1"},
//!   "pieces": [
//!     {"point": "zero", "ram": 1, "alpha": {"-1": "4"}, "regular": [{"c": "0", "size": 1}]}
//!   ]
//! }
//! ```
//!
//! `ring` is optional (rational coefficients by default). In an extension
//! ring coefficients are polynomials in `z` (the root of unity) and `x`
//! (the radical). Unknown fields are rejected; a `meta` object is accepted
//! and carried through unchanged by `canon`.

use std::str::FromStr;

use num_rational::BigRational;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::coeff::{Coeff, CoeffError, CoeffRing};
use crate::connection::{Connection, ConnectionError, ConnectionPiece, ExponentialFactor, JordanBlock, Point, RegularPart};
use crate::oracle::{verify_piece, CheckStatus, OracleError, OracleReport};
use crate::transform::{solve_piece, transform_connection_with_branches, Branch, TransformError, TransformKind, TransformOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Json(_) => "invalid_json",
            CliError::Validation(_) | CliError::Coeff(_) | CliError::Connection(_) => "invalid_input",
            CliError::Transform(_) => "transform_error",
            CliError::Oracle(_) => "oracle_error",
            CliError::Io { .. } => "io_error",
        }
    }

    /// The machine-readable error object written to stderr.
    pub fn to_json(&self) -> Value {
        json!({"error": {"code": self.code(), "message": self.to_string()}})
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

/// A parsed document: coefficient ring, connection and optional metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub ring: CoeffRing,
    pub connection: Connection,
    pub meta: Option<Value>,
}

/// Parses `rational` or `ext:N:m:a` (`Q(ζ_N)[x]/(x^m - a)`).
pub fn parse_backend(spec: &str) -> Result<CoeffRing, CliError> {
    if spec == "rational" {
        return Ok(CoeffRing::Rational);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["ext", n, m, a] => {
            let n: u32 = n.parse().map_err(|_| invalid(format!("backend {spec}: bad root order")))?;
            let m: u32 = m.parse().map_err(|_| invalid(format!("backend {spec}: bad radical degree")))?;
            let a = BigRational::from_str(a).map_err(|_| invalid(format!("backend {spec}: bad radical")))?;
            Ok(CoeffRing::extension(n, m, a)?)
        }
        _ => Err(invalid(format!("unknown backend {spec:?}; expected rational or ext:N:m:a"))),
    }
}

fn check_fields(obj: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<(), CliError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(invalid(format!("{what}: unknown field {key:?}")));
        }
    }
    Ok(())
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| invalid(format!("{what} must be an object")))
}

fn positive_u32(v: Option<&Value>, what: &str) -> Result<u32, CliError> {
    let n = v.and_then(Value::as_u64).ok_or_else(|| invalid(format!("{what} must be a positive integer")))?;
    if n == 0 || n > u32::MAX as u64 {
        return Err(invalid(format!("{what} must be a positive integer")));
    }
    Ok(n as u32)
}

fn string_field<'a>(obj: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a str, CliError> {
    obj.get(key).and_then(Value::as_str).ok_or_else(|| invalid(format!("{what}: {key} must be a string")))
}

fn parse_ring(v: &Value) -> Result<CoeffRing, CliError> {
    let obj = as_object(v, "ring")?;
    match obj.get("kind").and_then(Value::as_str) {
        Some("rational") => {
            check_fields(obj, &["kind"], "ring")?;
            Ok(CoeffRing::Rational)
        }
        Some("extension") => {
            check_fields(obj, &["kind", "root_of_unity", "radical_degree", "radical"], "ring")?;
            let n = positive_u32(obj.get("root_of_unity"), "ring.root_of_unity")?;
            let m = positive_u32(obj.get("radical_degree"), "ring.radical_degree")?;
            let a = string_field(obj, "radical", "ring")?;
            let a = BigRational::from_str(a).map_err(|_| invalid(format!("ring.radical: bad rational {a:?}")))?;
            Ok(CoeffRing::extension(n, m, a)?)
        }
        _ => Err(invalid("ring.kind must be \"rational\" or \"extension\"")),
    }
}

fn parse_piece(v: &Value, index: usize, ring: &CoeffRing) -> Result<ConnectionPiece, CliError> {
    let what = format!("pieces[{index}]");
    let obj = as_object(v, &what)?;
    check_fields(obj, &["point", "ram", "alpha", "regular"], &what)?;
    let point = match string_field(obj, "point", &what)? {
        "zero" => Point::Zero,
        "infinity" => Point::Infinity,
        other => return Err(invalid(format!("{what}: point must be \"zero\" or \"infinity\", got {other:?}"))),
    };
    let ram = positive_u32(obj.get("ram"), &format!("{what}.ram"))?;

    let alpha = as_object(obj.get("alpha").ok_or_else(|| invalid(format!("{what}: missing alpha")))?, &format!("{what}.alpha"))?;
    let mut terms: Vec<(i64, Coeff)> = Vec::with_capacity(alpha.len());
    for (key, value) in alpha {
        let exp: i64 = key.trim().parse().map_err(|_| {
            if key.contains('/') || key.contains('.') {
                invalid(format!("{what}.alpha: fractional exponent {key:?}; exponents are integers in the uniformizer"))
            } else {
                invalid(format!("{what}.alpha: bad exponent {key:?}"))
            }
        })?;
        let text = value.as_str().ok_or_else(|| invalid(format!("{what}.alpha[{key}] must be a string")))?;
        terms.push((exp, ring.parse(text)?));
    }
    terms.sort_by_key(|(e, _)| *e);
    if let Some((e, c)) = terms.first() {
        if c.is_zero() {
            return Err(invalid(format!("{what}.alpha: leading coefficient at exponent {e} is zero")));
        }
    }

    let regular = obj.get("regular").and_then(Value::as_array).ok_or_else(|| invalid(format!("{what}: regular must be an array")))?;
    let mut blocks = Vec::with_capacity(regular.len());
    for (j, b) in regular.iter().enumerate() {
        let bw = format!("{what}.regular[{j}]");
        let bobj = as_object(b, &bw)?;
        check_fields(bobj, &["c", "size"], &bw)?;
        let c = ring.parse(string_field(bobj, "c", &bw)?)?;
        let size = positive_u32(bobj.get("size"), &format!("{bw}.size"))?;
        blocks.push(JordanBlock::new(c, size));
    }
    let factor = ExponentialFactor::from_terms(point, ram, terms)?;
    Ok(ConnectionPiece::new(factor, RegularPart::new(blocks)?))
}

/// Parses a document. `backend`, when given, overrides the document's ring.
pub fn parse_document(text: &str, backend: Option<&CoeffRing>) -> Result<Document, CliError> {
    let root: Value = serde_json::from_str(text).map_err(|e| CliError::Json(e.to_string()))?;
    let obj = as_object(&root, "document")?;
    check_fields(obj, &["ring", "pieces", "meta"], "document")?;
    let declared = obj.get("ring").map(parse_ring).transpose()?.unwrap_or_default();
    let ring = match backend {
        Some(b) => b.join(&declared).ok_or_else(|| invalid("--backend is incompatible with the document's ring"))?,
        None => declared,
    };
    let pieces = obj.get("pieces").and_then(Value::as_array).ok_or_else(|| invalid("document: pieces must be an array"))?;
    let pieces = pieces.iter().enumerate().map(|(i, p)| parse_piece(p, i, &ring)).collect::<Result<Vec<_>, _>>()?;
    let meta = match obj.get("meta") {
        None => None,
        Some(m @ Value::Object(_)) => Some(m.clone()),
        Some(_) => return Err(invalid("document: meta must be an object")),
    };
    Ok(Document { ring, connection: Connection::new(pieces), meta })
}

/// Parses just the connection of a document.
pub fn parse_connection(text: &str) -> Result<Connection, CliError> {
    Ok(parse_document(text, None)?.connection)
}

fn ring_json(ring: &CoeffRing) -> Option<Value> {
    ring.ext().map(|e| {
        json!({
            "kind": "extension",
            "root_of_unity": e.root_order(),
            "radical_degree": e.radical_degree(),
            "radical": e.radical().to_string(),
        })
    })
}

pub fn piece_json(piece: &ConnectionPiece) -> Value {
    let mut alpha = Map::new();
    for (e, c) in piece.factor().alpha_terms() {
        alpha.insert(e.to_string(), Value::String(c.to_string()));
    }
    let regular: Vec<Value> = piece.regular().blocks().iter().map(|b| json!({"c": b.eigenvalue.to_string(), "size": b.size})).collect();
    json!({
        "point": piece.point().as_str(),
        "ram": piece.ram(),
        "alpha": Value::Object(alpha),
        "regular": regular,
    })
}

pub fn document_json(ring: &CoeffRing, conn: &Connection, meta: Option<Value>) -> Value {
    let mut root = Map::new();
    if let Some(r) = ring_json(ring) {
        root.insert("ring".into(), r);
    }
    root.insert("pieces".into(), Value::Array(conn.pieces.iter().map(piece_json).collect()));
    if let Some(m) = meta {
        root.insert("meta".into(), m);
    }
    Value::Object(root)
}

/// Pretty-printed JSON with a trailing newline.
pub fn emit(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Transform { kind: TransformKind, prec: usize, branch: Option<String> },
    /// Verifies `transformed` against the input, or the tool's own transform
    /// when no file is given.
    Verify { kind: TransformKind, prec: usize, branch: Option<String>, transformed: Option<String> },
    Info,
    Canon,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Job {
    pub command: Command,
    pub backend: Option<CoeffRing>,
    /// The input document text.
    pub input: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub document: String,
    pub exit_code: i32,
}

fn branch_of(ring: &CoeffRing, text: &Option<String>) -> Result<Option<Coeff>, CliError> {
    text.as_deref().map(|t| ring.parse(t)).transpose().map_err(CliError::from)
}

pub fn run(job: &Job) -> Result<Outcome, CliError> {
    let doc = parse_document(&job.input, job.backend.as_ref())?;
    let ok = |v: Value| Ok(Outcome { document: emit(&v), exit_code: EXIT_OK });
    match &job.command {
        Command::Transform { kind, prec, branch } => {
            let opts = TransformOptions { prec: *prec, branch: branch_of(&doc.ring, branch)?, ring: doc.ring.clone() };
            let (out, branches) = transform_connection_with_branches(&doc.connection, *kind, &opts)?;
            let per_piece: Vec<Value> = doc
                .connection
                .pieces
                .iter()
                .zip(&branches)
                .map(|(p, b)| json!({"branch": b.to_string(), "shift": Coeff::ratio(p.pole_order() as i64, 2).to_string()}))
                .collect();
            let meta = json!({"kind": kind.label(), "precision": prec, "canonical": true, "pieces": per_piece});
            ok(document_json(&doc.ring, &out, Some(meta)))
        }
        Command::Verify { kind, prec, branch, transformed } => {
            let outputs: Vec<ConnectionPiece> = match transformed {
                Some(text) => parse_document(text, Some(&doc.ring))?.connection.pieces,
                None => {
                    let b = match branch_of(&doc.ring, branch)? {
                        Some(c) => Branch::Explicit(c),
                        None => Branch::Auto(doc.ring.clone()),
                    };
                    doc.connection
                        .pieces
                        .iter()
                        .enumerate()
                        .map(|(index, p)| {
                            solve_piece(*kind, p, *prec, &b).map(|s| s.piece).map_err(|e| TransformError::Piece { index, source: Box::new(e) })
                        })
                        .collect::<Result<_, _>>()?
                }
            };
            if outputs.len() != doc.connection.pieces.len() {
                return Err(OracleError::PieceCount { input: doc.connection.pieces.len(), output: outputs.len() }.into());
            }
            let reports = doc
                .connection
                .pieces
                .iter()
                .zip(&outputs)
                .map(|(i, o)| verify_piece(*kind, i, o, *prec, &doc.ring))
                .collect::<Result<Vec<_>, _>>()?;
            let passed = reports.iter().all(OracleReport::passed);
            let value = json!({
                "kind": kind.label(),
                "precision": prec,
                "passed": passed,
                "pieces": reports.iter().enumerate().map(|(i, r)| report_json(i, r)).collect::<Vec<_>>(),
            });
            Ok(Outcome { document: emit(&value), exit_code: if passed { EXIT_OK } else { EXIT_VERIFY_FAILED } })
        }
        Command::Info => {
            let pieces: Vec<Value> = doc
                .connection
                .pieces
                .iter()
                .map(|p| {
                    let inv = p.invariants();
                    json!({
                        "point": p.point().as_str(),
                        "ram": p.ram(),
                        "pole_order": p.pole_order(),
                        "slope": inv.slope.to_string(),
                        "irregularity": inv.irregularity,
                        "rank": inv.rank,
                    })
                })
                .collect();
            ok(json!({
                "pieces": pieces,
                "irregularity": doc.connection.irregularity(),
                "rank": doc.connection.rank(),
            }))
        }
        Command::Canon => ok(document_json(&doc.ring, &doc.connection.canonicalize_in(&doc.ring), doc.meta.clone())),
    }
}

pub fn report_json(index: usize, report: &OracleReport) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("name".into(), Value::String(c.name.clone()));
            m.insert("status".into(), Value::String(c.status.as_str().into()));
            if let Some(mm) = &c.mismatch {
                m.insert("mismatch".into(), json!({"index": mm.index, "expected": mm.expected, "found": mm.found}));
            }
            if let Some(n) = &c.note {
                m.insert("note".into(), Value::String(n.clone()));
            }
            Value::Object(m)
        })
        .collect();
    let failing: Vec<&str> = report.checks.iter().filter(|c| c.status == CheckStatus::Fail).map(|c| c.name.as_str()).collect();
    json!({
        "index": index,
        "passed": report.passed(),
        "failing": failing,
        "branch": report.branch.as_ref().map(|b| b.to_string()),
        "recovered_b": report.recovered_b.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "checks": checks,
    })
}
