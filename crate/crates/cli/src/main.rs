//! `gkz`: command line access to the gkz-core analyses.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context as _};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gkz_core::diagram::{render_diagram, DiagramFormat, DiagramSpec, Layer};
use gkz_core::family::{factor_b, index_sets, psi_image, psi_kernel_sections, IndexKind};
use gkz_core::poly::TermOrder;
use gkz_core::polyhedral::{face_lattice, hilbert_basis, is_saturated, semigroup_witness, support_functions};
use gkz_core::report::{field, rationals, run_report, to_json, ReportOptions};
use gkz_core::resonance::{dsres_face, dual_parameter, n_beta, ResonanceSet};
use gkz_core::scalar::parse_rational;
use gkz_core::smith::smith_decompose;
use gkz_core::toric::{quasi_degrees, toric_ideal, DEFAULT_FILTRATION_BOUND};
use gkz_core::weyl::{euler_decomposition, gkz_presentation, ideal_member_bounded, restrict_presentation, WeylOperator};
use gkz_core::{GkzError, Int, IntMatrix, Rational};

#[derive(Parser, Debug)]
#[command(name = "gkz", version, about = "Exact toolkit for GKZ hypergeometric systems")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Term order: degrevlex, deglex or lex.
    #[arg(long, default_value = "degrevlex", global = true)]
    order: String,
    /// Cap for certificate degrees and filtration searches.
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Read the matrix from a file (rows on lines or separated by `;`).
    #[arg(short = 'A', long = "file", global = true)]
    file: Option<PathBuf>,
    /// Inline matrix such as "3 2 0; 1 1 1".
    #[arg(short, long, global = true, allow_hyphen_values = true)]
    matrix: Option<String>,
    /// Parameter as a comma list of fractions, e.g. "1/2,-1".
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full analysis report.
    Analyze,
    /// Smith decomposition B = C D1 D2 M.
    Smith,
    /// Adds a row of ones and the column (1,0,..,0).
    Homogenize,
    /// Face lattice and primitive support functions.
    Faces,
    /// Semigroup membership of a lattice point.
    Member {
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// Saturation test and Hilbert basis.
    Saturated,
    /// Reduced Gröbner basis of the toric ideal.
    ToricIdeal,
    /// Quasi-degree decomposition of S_A / <∂_j> (0-based j).
    Qdeg { column: usize },
    /// Membership of β in the strongly resonant set.
    Sres,
    /// Membership of β in the dual obstruction set.
    Dsres,
    /// A translation δ_A with (δ_A + cone) free of strongly resonant points.
    Delta,
    /// A bound n_β such that (β0, β) is non-resonant for β0 ≥ n_β.
    Nbeta,
    /// A parameter congruent to -β outside the dual obstruction set.
    DualParam,
    /// GKZ presentation: box and Euler operators.
    Present,
    /// Generators of the system restricted to λ0 = 1 (matrix is Ã).
    Restrict,
    /// Searches a left ideal membership certificate.
    VerifyMember {
        /// Target operator, e.g. "d0*l0 - 1".
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// Generators separated by ';'; defaults to the GKZ presentation.
        #[arg(long, allow_hyphen_values = true)]
        gens: Option<String>,
    },
    /// Factorization B = C D1 A of the family exponent matrix.
    Factor,
    /// Index sets I or I' for the matrix B.
    IndexSets {
        #[arg(long, default_value = "I")]
        kind: String,
    },
    /// Image of y^{Σ m_i a_i} ω0 ⊗ ∂0^s under ψ; with a matrix also the
    /// kernel sections.
    Psi {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long, default_value_t = 0)]
        s: u64,
    },
    /// Lattice diagram for one- or two-row matrices.
    Diagram {
        #[arg(long, default_value = "-1:9", allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value = "-1:5", allow_hyphen_values = true)]
        y: String,
        /// Comma list of layers: semigroup, saturation-gap, cone,
        /// qdeg:<j>, sres, dsres, delta-cone.
        #[arg(long, default_value = "semigroup,saturation-gap,cone")]
        layers: String,
        #[arg(long, default_value = "ascii")]
        style: String,
        /// Write the rendering to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_vector(s: &str) -> anyhow::Result<Vec<Rational>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_rational(t).ok_or_else(|| GkzError::Parse(format!("bad number {t:?}")).into()))
        .collect()
}

fn parse_ints(s: &str) -> anyhow::Result<Vec<Int>> {
    parse_vector(s)?
        .into_iter()
        .map(|x| if x.is_integer() { Ok(x.to_integer()) } else { Err(GkzError::Parse(format!("{x} is not an integer")).into()) })
        .collect()
}

fn parse_range(s: &str) -> anyhow::Result<(i64, i64)> {
    let (a, b) = s.split_once(':').ok_or_else(|| GkzError::Parse(format!("range {s:?} must look like lo:hi")))?;
    let lo: i64 = a.trim().parse().map_err(|_| GkzError::Parse(format!("bad range {s:?}")))?;
    let hi: i64 = b.trim().parse().map_err(|_| GkzError::Parse(format!("bad range {s:?}")))?;
    if lo > hi {
        return Err(GkzError::Parse(format!("empty range {s:?}")).into());
    }
    Ok((lo, hi))
}

impl Global {
    fn matrix(&self) -> anyhow::Result<IntMatrix> {
        let text = match (&self.matrix, &self.file) {
            (Some(m), None) => m.clone(),
            (None, Some(f)) => std::fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?,
            (Some(_), Some(_)) => return Err(GkzError::Parse("give either --matrix or -A, not both".into()).into()),
            (None, None) => return Err(GkzError::Parse("a matrix is required (--matrix or -A)".into()).into()),
        };
        Ok(IntMatrix::parse(&text)?)
    }

    fn beta(&self, d: usize) -> anyhow::Result<Vec<Rational>> {
        let beta = match &self.beta {
            Some(b) => parse_vector(b)?,
            None => vec![Rational::from_integer(0.into()); d],
        };
        if beta.len() != d {
            return Err(GkzError::DimensionMismatch(format!("parameter has {} entries, matrix has {d} rows", beta.len())).into());
        }
        Ok(beta)
    }

    fn order(&self) -> anyhow::Result<TermOrder> {
        self.order.parse::<TermOrder>().map_err(|_| GkzError::Parse(format!("unknown term order {:?}", self.order)).into())
    }
}

fn ints(v: &[Int]) -> Value {
    Value::Array(v.iter().map(|x| x.to_string().parse::<i64>().map_or_else(|_| x.to_string().into(), Value::from)).collect())
}

fn matrix_value(m: &IntMatrix) -> Value {
    Value::String(m.to_string())
}

fn ok<T: serde::Serialize>(r: gkz_core::Result<T>) -> anyhow::Result<Value> {
    Ok(serde_json::to_value(r?)?)
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let g = &cli.global;
    let order = g.order()?;
    let value = match &cli.command {
        Command::Analyze => {
            let a = g.matrix()?;
            let beta = g.beta(a.nrows())?;
            let opts = ReportOptions { order, filtration_bound: g.bound.unwrap_or(DEFAULT_FILTRATION_BOUND) };
            run_report(&a, &beta, &opts)?
        }
        Command::Smith => {
            let a = g.matrix()?;
            let s = smith_decompose(&a)?;
            json!({
                "divisors": ints(&s.divisors),
                "C": matrix_value(&s.c),
                "D1": matrix_value(&s.d1),
                "D2": matrix_value(&s.d2),
                "M": matrix_value(&s.m),
                "A": matrix_value(&s.lattice_matrix()),
                "product_ok": s.product() == a,
            })
        }
        Command::Homogenize => json!({ "matrix": matrix_value(&g.matrix()?.homogenize()) }),
        Command::Faces => {
            let a = g.matrix()?;
            let lattice = face_lattice(&a)?;
            json!({
                "pointed": lattice.pointed,
                "full_dimensional": lattice.full_dimensional,
                "faces": lattice.faces,
                "support_functions": field(support_functions(&a)),
            })
        }
        Command::Member { point } => {
            let a = g.matrix()?;
            let p = parse_ints(point)?;
            if p.len() != a.nrows() {
                bail!(GkzError::DimensionMismatch(format!("point has {} entries, matrix has {} rows", p.len(), a.nrows())));
            }
            let w = semigroup_witness(&a, &p)?;
            json!({ "member": w.is_some(), "witness": w.map(|w| ints(&w)) })
        }
        Command::Saturated => {
            let a = g.matrix()?;
            let hb: Vec<Value> = hilbert_basis(&a)?.iter().map(|v| ints(v)).collect();
            json!({ "saturated": is_saturated(&a)?, "hilbert_basis": hb })
        }
        Command::ToricIdeal => {
            let t = toric_ideal(&g.matrix()?, order);
            json!({
                "order": order.to_string(),
                "generators": t.generators.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "binomials": t.binomials(),
            })
        }
        Command::Qdeg { column } => {
            let a = g.matrix()?;
            ok(quasi_degrees(&a, *column, order, g.bound.unwrap_or(DEFAULT_FILTRATION_BOUND)))?
        }
        Command::Sres => {
            let a = g.matrix()?;
            let beta = g.beta(a.nrows())?;
            let set = ResonanceSet::with_order(&a, order, g.bound.unwrap_or(DEFAULT_FILTRATION_BOUND))?;
            let w = set.witness(&beta);
            json!({ "beta": rationals(&beta), "member": w.is_some(), "witness": w })
        }
        Command::Dsres => {
            let a = g.matrix()?;
            let beta = g.beta(a.nrows())?;
            let f = dsres_face(&a, &face_lattice(&a)?, &beta);
            json!({ "beta": rationals(&beta), "member": f.is_some(), "face": f })
        }
        Command::Delta => {
            let a = g.matrix()?;
            let set = ResonanceSet::with_order(&a, order, g.bound.unwrap_or(DEFAULT_FILTRATION_BOUND))?;
            json!({ "delta": ints(&set.delta()?) })
        }
        Command::Nbeta => {
            let a = g.matrix()?;
            let beta = g.beta(a.nrows())?;
            json!({ "beta": rationals(&beta), "n_beta": n_beta(&a, &beta)?.to_string() })
        }
        Command::DualParam => {
            let a = g.matrix()?;
            let beta = g.beta(a.nrows())?;
            json!({ "beta": rationals(&beta), "dual": rationals(&dual_parameter(&a, &beta)?) })
        }
        Command::Present => {
            let a = g.matrix()?;
            let beta = g.beta(a.nrows())?;
            let mut v = ok(gkz_presentation(&a, &beta, order))?;
            if let Some(e) = euler_decomposition(&a) {
                v["homogeneity"] = json!({ "h": ints(&e.h), "b": gkz_core::scalar::fmt_rational(&e.b(&beta)) });
            }
            v
        }
        Command::Restrict => {
            let a = g.matrix()?;
            let beta = g.beta(a.nrows())?;
            let gens = restrict_presentation(&a, &beta, order)?;
            json!({ "generators": gens })
        }
        Command::VerifyMember { target, gens } => {
            let (gens, n) = match gens {
                Some(text) => {
                    let parts: Vec<&str> = text.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
                    let joined = parts.join(" + ") + " + " + target;
                    let n = WeylOperator::parse(&joined, None)?.nvars();
                    let gens = parts.iter().map(|p| WeylOperator::parse(p, Some(n))).collect::<gkz_core::Result<Vec<_>>>()?;
                    (gens, n)
                }
                None => {
                    let a = g.matrix()?;
                    let beta = g.beta(a.nrows())?;
                    (gkz_presentation(&a, &beta, order)?.generators(), a.ncols())
                }
            };
            let target = WeylOperator::parse(target, Some(n))?;
            let bound = g.bound.unwrap_or(4) as u32;
            let cert = ideal_member_bounded(&target, &gens, bound)?;
            json!({
                "target": target,
                "generators": gens,
                "bound": bound,
                "certificate": cert,
            })
        }
        Command::Factor => ok(factor_b(&g.matrix()?))?,
        Command::IndexSets { kind } => {
            let kind: IndexKind = kind.parse()?;
            ok(index_sets(&g.matrix()?, kind))?
        }
        Command::Psi { m, s } => {
            let mv = parse_ints(m)?;
            let mut v = json!({ "image": psi_image(&mv, &Int::from(*s)) });
            if g.matrix.is_some() || g.file.is_some() {
                let a = g.matrix()?;
                v["kernel_sections"] = serde_json::to_value(psi_kernel_sections(&a))?;
            }
            v
        }
        Command::Diagram { x, y, layers, style, out } => {
            let a = g.matrix()?;
            let layers = layers.split(',').map(str::parse::<Layer>).collect::<gkz_core::Result<Vec<_>>>()?;
            let format: DiagramFormat = style.parse()?;
            let spec = DiagramSpec { x: parse_range(x)?, y: parse_range(y)?, layers, format };
            let dg = render_diagram(&a, &spec)?;
            let rendered = dg.render();
            if let Some(path) = out {
                std::fs::write(path, &rendered).with_context(|| format!("writing {}", path.display()))?;
            }
            if g.format == Format::Text {
                return Ok(Output::Raw(if out.is_some() { String::new() } else { rendered }));
            }
            serde_json::to_value(&dg)?
        }
    };
    Ok(Output::Value(value))
}

enum Output {
    Value(Value),
    Raw(String),
}

/// Indented `key: value` listing of a JSON value.
fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if is_leaf(x) {
                    out.push_str(&format!("{pad}{k}: {}\n", leaf(x)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    text(x, indent + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if is_leaf(x) {
                    out.push_str(&format!("{pad}- {}\n", leaf(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    text(x, indent + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", leaf(other))),
    }
}

fn is_leaf(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(m) => m.is_empty(),
        _ => true,
    }
}

fn leaf(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(leaf).collect::<Vec<_>>().join(", ")),
        Value::Object(_) => "{}".into(),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Output::Raw(s)) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Ok(Output::Value(v)) => {
            match cli.global.format {
                Format::Json => println!("{}", to_json(&v)),
                Format::Text => {
                    let mut s = String::new();
                    text(&v, 0, &mut s);
                    print!("{s}");
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let (code, exit) = match e.downcast_ref::<GkzError>() {
                Some(g) => (g.code(), g.exit_code()),
                None => ("io_error", 3),
            };
            if cli.global.format == Format::Json {
                println!("{}", to_json(&json!({ "error": code, "message": e.to_string() })));
            }
            eprintln!("error[{code}]: {e:#}");
            ExitCode::from(exit as u8)
        }
    }
}
