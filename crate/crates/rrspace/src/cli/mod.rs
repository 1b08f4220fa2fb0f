//! Command-line front end.

pub mod parse;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::divisors::{format_place, principal_divisor, Divisor};
use crate::error::{Error, Result};
use crate::field_tower::PrimeField;
use crate::funcfield::{format_bipoly, format_ratfunc, FunctionFieldElement};
use crate::om_places::{Center, PlaceTable, DEFAULT_PRECISION_CAP};
use crate::rr_engine::{contains, curve_invariants, is_irreducible_curve, riemann_roch};

pub use parse::{
    format_element, parse_bipoly, parse_center, parse_curve, parse_curve_file, parse_divisor,
    parse_element, parse_place_id, parse_projective, parse_tpoly, CurveFile, CurveSource,
};

/// Version of every JSON document this tool prints.
pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "rrspace", version, about = "Riemann-Roch spaces of plane curves over prime fields")]
struct Cli {
    #[command(flatten)]
    curve: CurveArgs,
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Bound on the p-adic lifting precision.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_PRECISION_CAP)]
    precision_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CurveArgs {
    /// Curve file with `field = p` and `polynomial = ...` lines.
    #[arg(long, global = true, value_name = "FILE", conflicts_with_all = ["field", "poly"])]
    curve: Option<std::path::PathBuf>,
    /// Prime p of the base field, used with --poly.
    #[arg(long, global = true, value_name = "P", requires = "poly")]
    field: Option<u64>,
    /// Curve polynomial in t, x or homogeneous in X0, X1, X2.
    #[arg(long, global = true, value_name = "POLY", requires = "field")]
    poly: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the places over a center, or over every discriminant prime and infinity.
    Places {
        /// `inf` or a monic irreducible polynomial in t.
        #[arg(long)]
        center: Option<String>,
    },
    /// Compressed basis of L(D).
    Rr {
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        divisor: String,
    },
    /// Genus, index data and the degree of the constant field.
    Genus,
    /// Valuations of an element at given places.
    Valuate {
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long, required = true)]
        place: Vec<String>,
    },
    /// Principal divisor of an element.
    DivisorOf {
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Check the curve, and optionally a divisor and membership of an element in L(D).
    Validate {
        #[arg(long, allow_hyphen_values = true)]
        divisor: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "divisor")]
        element: Option<String>,
    },
    /// The k-basis t^j·b_i of L(D + r·D∞).
    Expand {
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        divisor: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        r: i64,
    },
}

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(message: String) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: message,
        }
    }
}

/// What a command produced: a JSON document, its text rendering, and
/// whether the checks it ran passed.
struct Report {
    json: Value,
    text: String,
    passed: bool,
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    let curve = match load_curve(&cli.curve) {
        Ok(c) => c,
        Err(Usage(m)) => return Outcome::usage(format!("error: {m}\n")),
    };
    let result = curve
        .and_then(|c| c.model(cli.precision_cap))
        .and_then(|m| execute(&cli.command, PlaceTable::with_cap(Arc::new(m), cli.precision_cap)));
    match result {
        Ok(r) => {
            let stdout = if cli.json {
                let mut doc = json!({ "schema": SCHEMA });
                merge(&mut doc, r.json);
                format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
            } else {
                r.text
            };
            Outcome {
                code: if r.passed { 0 } else { 1 },
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => {
            if cli.json {
                let doc = json!({
                    "schema": SCHEMA,
                    "error": { "code": e.code(), "message": e.to_string() },
                });
                Outcome {
                    code: 1,
                    stdout: format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: format!("error[{}]: {e}\n", e.code()),
                }
            }
        }
    }
}

fn merge(doc: &mut Value, extra: Value) {
    if let (Value::Object(a), Value::Object(b)) = (doc, extra) {
        a.extend(b);
    }
}

struct Usage(String);

fn load_curve(args: &CurveArgs) -> std::result::Result<Result<CurveFile>, Usage> {
    match (&args.curve, args.field, &args.poly) {
        (Some(path), _, _) => {
            let src = std::fs::read_to_string(path)
                .map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
            Ok(parse_curve_file(&src))
        }
        (None, Some(p), Some(poly)) => Ok(PrimeField::new(p).and_then(|k| parse_curve(k, poly))),
        _ => Err(Usage("a curve is required: --curve FILE or --field P --poly POLY".into())),
    }
}

fn coords(k: &PrimeField, b: &FunctionFieldElement) -> Vec<String> {
    b.coords().iter().map(|c| format_ratfunc(k, c, "t")).collect()
}

fn resolved(table: &PlaceTable, src: &str) -> Result<Divisor> {
    let d = parse_divisor(table.model().field(), src)?;
    d.resolve(table)?;
    Ok(d)
}

fn execute(cmd: &Command, table: PlaceTable) -> Result<Report> {
    let model = table.model().clone();
    let k = *model.field();
    let mut text = String::new();
    let report = |json: Value, text: String| Ok(Report { json, text, passed: true });
    match cmd {
        Command::Places { center } => {
            let centers: Vec<Center> = match center {
                Some(c) => vec![parse_center(&k, c)?],
                None => model
                    .discriminant_primes()
                    .iter()
                    .cloned()
                    .map(Center::Finite)
                    .chain([Center::Infinity])
                    .collect(),
            };
            let mut records = Vec::new();
            for c in &centers {
                for p in table.places(c)?.iter() {
                    let id = format_place(&k, &p.id);
                    let ty = p.type_strings();
                    writeln!(
                        text,
                        "{id} e={} f={} degree={} type=[{}]",
                        p.e,
                        p.f,
                        p.degree(),
                        ty.join(", ")
                    )
                    .unwrap();
                    records.push(json!({
                        "center": c.format(&k),
                        "index": p.id.index,
                        "id": id,
                        "e": p.e,
                        "f": p.f,
                        "degree": p.degree(),
                        "type": ty,
                    }));
                }
            }
            report(json!({ "places": records }), text)
        }
        Command::Rr { divisor } => {
            let d = resolved(&table, divisor)?;
            let cb = riemann_roch(&table, &d)?;
            let dim = cb.dimension(0);
            writeln!(text, "divisor: {}", d.format(&k)).unwrap();
            writeln!(text, "dim: {dim}").unwrap();
            let mut pairs = Vec::new();
            for (b, di) in &cb.pairs {
                writeln!(text, "d={di} b={}", format_element(b)).unwrap();
                pairs.push(json!({ "b": coords(&k, b), "d": di }));
            }
            report(
                json!({ "divisor": d.format(&k), "dim_for_r0": dim, "pairs": pairs }),
                text,
            )
        }
        Command::Genus => {
            let inv = curve_invariants(&table)?;
            match inv.genus {
                Some(g) => writeln!(text, "genus: {g}").unwrap(),
                None => writeln!(text, "genus: withheld").unwrap(),
            }
            writeln!(text, "rho: {}", inv.rho).unwrap();
            writeln!(text, "delta_finite: {}", inv.delta_finite).unwrap();
            writeln!(text, "delta_infinite: {}", inv.delta_infinite).unwrap();
            writeln!(text, "delta_curve: {}", inv.delta_curve).unwrap();
            report(
                json!({
                    "genus": inv.genus,
                    "rho": inv.rho,
                    "delta_finite": inv.delta_finite,
                    "delta_infinite": inv.delta_infinite,
                    "delta_curve": inv.delta_curve,
                }),
                text,
            )
        }
        Command::Valuate { element, place } => {
            let b = parse_element(&model, element)?;
            if b.is_zero() {
                return Err(Error::InvalidInput("the zero element has no finite valuation".into()));
            }
            let mut vals = Vec::new();
            for src in place {
                let id = parse_place_id(&k, src)?;
                let v = table.valuation(&id, &b)?.expect("nonzero element");
                let name = format_place(&k, &id);
                writeln!(text, "{name}: {v}").unwrap();
                vals.push(json!({ "place": name, "value": v }));
            }
            report(
                json!({ "element": format_element(&b), "valuations": vals }),
                text,
            )
        }
        Command::DivisorOf { element } => {
            let b = parse_element(&model, element)?;
            let d = principal_divisor(&table, &b)?;
            writeln!(text, "{}", d.format(&k)).unwrap();
            report(
                json!({ "element": format_element(&b), "divisor": d.format(&k) }),
                text,
            )
        }
        Command::Validate { divisor, element } => {
            let mut passed = true;
            let f = format_bipoly(&k, model.f(), "t", "x");
            writeln!(text, "model: {f}").unwrap();
            let transform = model.transform().map(|t| {
                writeln!(text, "transform: {:?} swapped={}", t.matrix, t.swapped).unwrap();
                json!({ "matrix": t.matrix, "swapped": t.swapped })
            });
            let irreducible = is_irreducible_curve(&model, table.cap())?;
            passed &= irreducible;
            writeln!(text, "irreducible: {irreducible}").unwrap();
            let mut doc = json!({
                "model": f,
                "transform": transform,
                "irreducible": irreducible,
            });
            if let Some(src) = divisor {
                let d = resolved(&table, src)?;
                let deg = d.degree(&table)?;
                writeln!(text, "divisor: {} (degree {deg})", d.format(&k)).unwrap();
                merge(&mut doc, json!({ "divisor": d.format(&k), "degree": deg }));
                if let Some(src) = element {
                    let b = parse_element(&model, src)?;
                    let m = contains(&table, &d, &b)?;
                    passed &= m.holds();
                    writeln!(text, "member: {}", m.holds()).unwrap();
                    let mut vs = Vec::new();
                    for v in &m.violations {
                        let name = format_place(&k, &v.place);
                        writeln!(
                            text,
                            "  {name}: valuation {}, multiplicity {}",
                            v.valuation, v.multiplicity
                        )
                        .unwrap();
                        vs.push(json!({
                            "place": name,
                            "valuation": v.valuation,
                            "multiplicity": v.multiplicity,
                        }));
                    }
                    merge(
                        &mut doc,
                        json!({
                            "element": format_element(&b),
                            "member": m.holds(),
                            "violations": vs,
                        }),
                    );
                }
            }
            Ok(Report {
                json: doc,
                text,
                passed,
            })
        }
        Command::Expand { divisor, r } => {
            let d = resolved(&table, divisor)?;
            let cb = riemann_roch(&table, &d)?;
            let els = cb.expand(*r);
            writeln!(text, "divisor: {}", d.format(&k)).unwrap();
            writeln!(text, "r: {r}").unwrap();
            writeln!(text, "dim: {}", els.len()).unwrap();
            for b in &els {
                writeln!(text, "{}", format_element(b)).unwrap();
            }
            let elements: Vec<Vec<String>> = els.iter().map(|b| coords(&k, b)).collect();
            report(
                json!({
                    "divisor": d.format(&k),
                    "r": r,
                    "dim": els.len(),
                    "elements": elements,
                }),
                text,
            )
        }
    }
}
