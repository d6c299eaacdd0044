//! The `pkt` command-line front end.
//!
//! Every verb reads JSON (a file path, or an inline document starting with
//! `{` or `[`) and prints text or a JSON envelope `{"ok", "result", "error"}`.
//! Exit codes: 0 on success, 1 on a domain error, 2 on malformed input.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::barcode::{self, GradedBarcode};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::fcomplex::random::{random_complex, RandomParams};
use crate::fcomplex::{FilteredChainMap, FilteredComplex};
use crate::field::FieldSpec;
use crate::ktheory::{self, Combination, PairingTable};
use crate::novikov::{DoubleExpPoly, NovikovPoly};
use crate::stepfn::StepFn;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "pkt", version, about = "Exact persistence K-theory computations")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub output: OutputFormat,
    /// Field characteristic, used when an input complex does not name one.
    #[arg(long, global = true, default_value_t = 2)]
    pub field: u64,
    /// Seed for `random`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct One {
    /// JSON file or inline JSON.
    pub input: String,
}

#[derive(Args, Debug)]
pub struct Two {
    pub first: String,
    pub second: String,
}

#[derive(Args, Debug)]
pub struct WithR {
    pub input: String,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Exponent,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the complex invariants and list violations.
    Validate(One),
    /// Normal form: barcode, ghost-pair count and bar counts.
    Decompose(One),
    /// Homology barcode of a complex.
    Barcode(One),
    /// λ of a barcode.
    Lambda(One),
    /// K-class of a complex.
    Kclass(One),
    /// χ̄ of a barcode as a step function.
    Chi(One),
    /// χ(C^{≤α}) of a complex.
    EulerAlpha {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Exponent,
    },
    /// Direct sum of two complexes.
    Sum(Two),
    /// Filtration shift Σ^r.
    Shift(WithR),
    /// Translation T^k.
    Translate {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Truncation C^{≤r}.
    Truncate(WithR),
    /// Tensor product of two complexes.
    Tensor(Two),
    /// Mapping cone of a filtered chain map.
    Cone(One),
    /// Internal hom complex.
    Hom(Two),
    /// Dual complex with respect to m0.
    Dual {
        input: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        m0: i64,
    },
    /// Q_r = cone(Σ^r C → C).
    Qr(WithR),
    /// Whether a complex is r-acyclic.
    Acyclic(WithR),
    /// Whether a map is an r-isomorphism.
    Riso(WithR),
    /// κ of two complexes through their hom complex.
    Kappa(Two),
    /// κ(P, Q) = P(t⁻¹)Q(t) on two polynomials.
    KappaFormula(Two),
    /// κ of two combinations of pairing-table generators.
    ///
    /// Combination grammar: terms separated by `+` or `-`; each term is a
    /// sequence of factors followed by a generator name. Factors are an
    /// integer coefficient, `t^a` (a filtration shift, with `a` written as
    /// `{1/2}`, `(1/2)` or `1/2`) and `T^k` (a translation). Factors may be
    /// separated by `*`. Examples: `-Z0+Y`, `t^{1/2}*L`, `T^2 L`,
    /// `3*t^(-1)*T^1 L`.
    #[command(verbatim_doc_comment)]
    KappaTable {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Bottleneck distance between two barcodes.
    Bottleneck(Two),
    /// L¹ distance between two step functions.
    L1(Two),
    /// Morse data (P, H, Q) of a complex.
    Morse(One),
    /// Bar counts of a barcode.
    Counts(One),
    /// ℓ of a barcode.
    Length(One),
    /// |ℓ| of a barcode without infinite bars.
    AbsLength(One),
    /// ℓ̄ = ℓ(finite part) + χ.
    BarLength(One),
    /// ℓ_h of a barcode for a step-function weight h.
    GenLength {
        input: String,
        #[arg(long)]
        h: String,
    },
    /// gap of a polynomial.
    Gap(One),
    /// N⁺ of a polynomial.
    Nplus(One),
    /// Whether a polynomial is divisible by t^0 − t^r.
    InImageQr(WithR),
    /// σ of a double-exponent polynomial, or its inverse with --inverse.
    Sigma {
        input: String,
        #[arg(long)]
        inverse: bool,
    },
    /// Q̃_r of a polynomial: t^a ↦ s^{a,a+r}.
    QrTilde(WithR),
    /// Witness data bounding t^a, a < 0, in n steps.
    Witness {
        #[arg(long, allow_hyphen_values = true)]
        a: Exponent,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// A random valid complex for --seed.
    Random {
        #[arg(long, default_value_t = 8)]
        max_generators: usize,
    },
}

/// A verb's result: its JSON value and its text rendering.
struct Output {
    json: Value,
    text: String,
}

impl Output {
    fn new<T: Serialize>(v: &T, text: impl Display) -> Self {
        Output {
            json: serde_json::to_value(v).expect("results serialize"),
            text: text.to_string(),
        }
    }

    fn complex(c: &FilteredComplex) -> Self {
        let json = c.to_json();
        let text = serde_json::to_string_pretty(&json).expect("json");
        Output { json, text }
    }
}

struct Ctx {
    field: FieldSpec,
}

fn read_input(arg: &str) -> Result<Value> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("cannot read `{arg}`: {e}")))?
    };
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("`{arg}` is not JSON: {e}")))?;
    // accept the envelope printed by `--output json`
    if let Value::Object(m) = &v {
        if m.contains_key("ok") && m.contains_key("result") {
            return Ok(m["result"].clone());
        }
    }
    Ok(v)
}

fn typed<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T> {
    serde_json::from_value(read_input(arg)?)
        .map_err(|e| Error::Schema(format!("`{arg}` is not a valid {what}: {e}")))
}

impl Ctx {
    fn complex(&self, arg: &str) -> Result<FilteredComplex> {
        let mut v = read_input(arg)?;
        self.default_field(&mut v);
        FilteredComplex::from_json(&v)
    }

    fn default_field(&self, v: &mut Value) {
        if let Value::Object(m) = v {
            m.entry("field").or_insert(json!(self.field.characteristic()));
        }
    }

    fn map(&self, arg: &str) -> Result<FilteredChainMap> {
        let mut v = read_input(arg)?;
        if let Value::Object(m) = &mut v {
            for key in ["domain", "codomain"] {
                if let Some(c) = m.get_mut(key) {
                    self.default_field(c);
                }
            }
        }
        FilteredChainMap::from_json(&v)
    }
}

fn barcode_in(arg: &str) -> Result<GradedBarcode> {
    typed(arg, "barcode")
}

fn poly_in(arg: &str) -> Result<NovikovPoly> {
    typed(arg, "Novikov polynomial")
}

fn stepfn_in(arg: &str) -> Result<StepFn> {
    typed(arg, "step function")
}

fn rational_json(r: &crate::exponent::Rational) -> Value {
    json!(crate::exponent::format_rational(r))
}

fn execute(cmd: &Command, ctx: &Ctx, seed: u64) -> Result<Output> {
    use Command::*;
    Ok(match cmd {
        Validate(a) => {
            let mut v = read_input(&a.input)?;
            ctx.default_field(&mut v);
            let c = FilteredComplex::from_json_unchecked(&v)?;
            let violations = c.validate();
            if !violations.is_empty() {
                return Err(Error::InvalidComplex(violations));
            }
            Output::new(&json!({"valid": true}), "ok")
        }
        Decompose(a) => {
            let d = barcode::decompose(&ctx.complex(&a.input)?)?;
            let counts = d.barcode.counts();
            let text = format!(
                "{}\nghost pairs: {}\nbars: {} ({} finite, {} infinite)",
                d.barcode, d.ghosts, counts.total, counts.finite, counts.infinite
            );
            Output::new(
                &json!({"barcode": d.barcode, "ghosts": d.ghosts, "counts": counts}),
                text,
            )
        }
        Barcode(a) => {
            let b = barcode::barcode_of(&ctx.complex(&a.input)?)?;
            Output::new(&b, &b)
        }
        Lambda(a) => {
            let p = barcode_in(&a.input)?.lambda();
            Output::new(&p, &p)
        }
        Kclass(a) => {
            let p = ktheory::kclass(&ctx.complex(&a.input)?)?;
            Output::new(&p, &p)
        }
        Chi(a) => {
            let b = barcode_in(&a.input)?;
            let s = b.chi_bar();
            if s != b.chi_bar_direct() {
                return Err(Error::Internal("the two χ̄ computations disagree".into()));
            }
            Output::new(&s, &s)
        }
        EulerAlpha { input, alpha } => {
            let n = ktheory::euler_alpha(&ctx.complex(input)?, alpha);
            Output::new(&n, n)
        }
        Sum(a) => Output::complex(&ctx.complex(&a.first)?.sum(&ctx.complex(&a.second)?)?),
        Shift(a) => Output::complex(&ctx.complex(&a.input)?.shift(&a.r)),
        Translate { input, k } => Output::complex(&ctx.complex(input)?.translate(*k)),
        Truncate(a) => Output::complex(&ctx.complex(&a.input)?.truncate(&a.r)),
        Tensor(a) => Output::complex(&ctx.complex(&a.first)?.tensor(&ctx.complex(&a.second)?)?),
        Cone(a) => Output::complex(&ctx.map(&a.input)?.cone()?),
        Hom(a) => Output::complex(&ctx.complex(&a.first)?.hom(&ctx.complex(&a.second)?)?),
        Dual { input, m0 } => Output::complex(&ctx.complex(input)?.dual(*m0)),
        Qr(a) => Output::complex(&ctx.complex(&a.input)?.qr(&a.r)?),
        Acyclic(a) => {
            let v = ktheory::is_r_acyclic(&ctx.complex(&a.input)?, &a.r)?;
            Output::new(&v, v)
        }
        Riso(a) => {
            let v = ktheory::is_r_isomorphism(&ctx.map(&a.input)?, &a.r)?;
            Output::new(&v, v)
        }
        Kappa(a) => {
            let p = ktheory::kappa_direct(&ctx.complex(&a.first)?, &ctx.complex(&a.second)?)?;
            Output::new(&p, &p)
        }
        KappaFormula(a) => {
            let p = ktheory::kappa_formula(&poly_in(&a.first)?, &poly_in(&a.second)?);
            Output::new(&p, &p)
        }
        KappaTable { input, x, y } => {
            let tbl = PairingTable::from_json(&read_input(input)?)?;
            let x: Combination = x.parse()?;
            let y: Combination = y.parse()?;
            let p = ktheory::kappa_table(&tbl, &x, &y)?;
            Output::new(&p, &p)
        }
        Bottleneck(a) => {
            let d = barcode::bottleneck(&barcode_in(&a.first)?, &barcode_in(&a.second)?);
            Output::new(&d, &d)
        }
        L1(a) => {
            let d = stepfn_in(&a.first)?.l1_distance(&stepfn_in(&a.second)?);
            Output::new(&d, &d)
        }
        Morse(a) => {
            let m = barcode::morse(&ctx.complex(&a.input)?)?;
            let mut text = Vec::new();
            for (label, map) in [("P", &m.p), ("H", &m.h), ("Q", &m.q)] {
                for (k, s) in map {
                    text.push(format!("{label}_{k}:\n{}", indent(&s.to_string())));
                }
            }
            Output::new(&m, text.join("\n"))
        }
        Counts(a) => {
            let c = barcode_in(&a.input)?.counts();
            let per: Vec<String> = c.per_degree.iter().map(|(k, n)| format!("{k}: {n}")).collect();
            let text = format!(
                "total {}\nfinite {}\ninfinite {}\nper degree {{{}}}",
                c.total,
                c.finite,
                c.infinite,
                per.join(", ")
            );
            Output::new(&c, text)
        }
        Length(a) => rational_out(&barcode_in(&a.input)?.length()),
        AbsLength(a) => rational_out(&barcode_in(&a.input)?.abs_length()?),
        BarLength(a) => rational_out(&barcode_in(&a.input)?.bar_length()),
        GenLength { input, h } => rational_out(&barcode_in(input)?.gen_length(&stepfn_in(h)?)?),
        Gap(a) => rational_out(&poly_in(&a.input)?.gap()),
        Nplus(a) => {
            let n = poly_in(&a.input)?.nplus();
            Output::new(&n, n)
        }
        InImageQr(a) => {
            let v = poly_in(&a.input)?.in_image_qr(&a.r)?;
            Output::new(&v, v)
        }
        Sigma { input, inverse } => {
            if *inverse {
                let d = DoubleExpPoly::sigma_inverse(&poly_in(input)?)?;
                Output::new(&d, &d)
            } else {
                let d: DoubleExpPoly = typed(input, "double-exponent polynomial")?;
                let p = d.sigma();
                Output::new(&p, &p)
            }
        }
        QrTilde(a) => {
            let d = DoubleExpPoly::qr_tilde(&poly_in(&a.input)?, &a.r)?;
            Output::new(&d, &d)
        }
        Witness { a, n } => {
            let w = ktheory::seminorm_witness(ctx.field, a, *n)?;
            let half = Exponent::from_rational(
                w.weight.value() / crate::exponent::Rational::from_integer(2.into()),
            );
            let at = ktheory::is_r_isomorphism(&w.phi, &w.weight)?;
            let below = ktheory::is_r_isomorphism(&w.phi, &half)?;
            let k0 = ktheory::kclass(&w.c0)?;
            let text = format!(
                "weight {}\nkclass(C0) = {}\nr-isomorphism at weight: {}\nr-isomorphism at weight/2: {}",
                w.weight, k0, at, below
            );
            let v = json!({
                "weight": w.weight,
                "c0": w.c0.to_json(),
                "source": w.source.to_json(),
                "phi": w.phi.to_json(),
                "kclass_c0": k0,
                "iso_at_weight": at,
                "iso_at_half_weight": below,
            });
            Output { json: v, text }
        }
        Random { max_generators } => {
            let p = RandomParams::default()
                .with_field(ctx.field)
                .with_max_generators(*max_generators);
            Output::complex(&random_complex(seed, &p))
        }
    })
}

fn rational_out(r: &crate::exponent::Rational) -> Output {
    Output {
        json: rational_json(r),
        text: crate::exponent::format_rational(r),
    }
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("  {l}")).collect::<Vec<_>>().join("\n")
}

fn error_json(e: &Error) -> Value {
    match e {
        Error::InvalidComplex(v) => json!({"violations": v}),
        _ => Value::Null,
    }
}

/// Runs one command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let result = FieldSpec::new(cli.field).and_then(|field| execute(&cli.command, &Ctx { field }, cli.seed));
    let code = match &result {
        Ok(_) => 0,
        Err(e) if e.is_input_error() => 2,
        Err(_) => 1,
    };
    match (cli.output, result) {
        (OutputFormat::Json, Ok(o)) => {
            let _ = writeln!(out, "{}", json!({"ok": true, "result": o.json, "error": null}));
        }
        (OutputFormat::Json, Err(e)) => {
            let _ = writeln!(
                out,
                "{}",
                json!({"ok": false, "result": error_json(&e), "error": e.to_string()})
            );
        }
        (OutputFormat::Text, Ok(o)) => {
            let _ = writeln!(out, "{}", o.text);
        }
        (OutputFormat::Text, Err(e)) => {
            let _ = writeln!(err, "error: {e}");
        }
    }
    code
}
