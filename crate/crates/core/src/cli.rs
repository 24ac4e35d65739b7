//! The `kloos` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::charsum::{KloostermanTable, SumTables};
use crate::code::{check_injectivity, FamilyCode, MAX_J};
use crate::constants::{family_constants, CosetFamily};
use crate::error::{Error, Result};
use crate::field::{format_poly, parse_coeffs, Field};
use crate::group::{trace_histogram, MinusForm};
use crate::json;
use crate::moments::{
    audit_printed, full_verification, oracle_series, rational_display, sk_from_code, Status,
    MAX_H,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest q for which per-element listings are printed.
const MAX_LISTING_Q: u32 = 6561;

#[derive(Parser, Debug)]
#[command(name = "kloos", version, about = "Exact ternary Kloosterman moments and double-coset codes")]
pub struct Cli {
    /// Field degree: q = 3^r.
    #[arg(long, global = true, default_value_t = 1)]
    pub r: usize,

    /// Monic irreducible modulus, constant term first (e.g. 1,0,1 for x^2 + 1).
    #[arg(long, global = true)]
    pub modulus: Option<String>,

    /// Worker threads.
    #[arg(long, global = true, env = "KLOOS_JOBS")]
    pub jobs: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct Instance {
    #[arg(long)]
    pub family: CosetFamily,
    #[arg(long)]
    pub n: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Field parameters, elements, traces and squares.
    Field,
    /// K(λ; a) for every nonzero a.
    Kloosterman,
    /// SK^h and MK^h for h = 1..hmax, summed directly.
    Moments {
        #[arg(long, default_value_t = 8)]
        hmax: u32,
    },
    /// A, B and N = |DC| for the coset families.
    Constants {
        #[arg(long)]
        family: Option<CosetFamily>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 8)]
        nmax: u32,
    },
    /// Trace profile, dual weights and weight-distribution prefix of one code.
    Weights {
        #[command(flatten)]
        inst: Instance,
        #[arg(long, default_value_t = 8)]
        jmax: usize,
    },
    /// Every check for all families with n <= nmax.
    Verify {
        #[arg(long, default_value_t = 4)]
        nmax: u32,
        #[arg(long, default_value_t = 8)]
        hmax: u32,
    },
    /// Moments from one family's recursion, with the displayed form and the direct sums.
    Recursion {
        #[command(flatten)]
        inst: Instance,
        #[arg(long, default_value_t = 8)]
        hmax: u32,
    },
    /// Trace histogram of an enumerated double coset against its closed form.
    Histogram {
        #[command(flatten)]
        inst: Instance,
    },
}

/// A rendered result and whether every check in it held.
pub struct Emitted {
    pub body: String,
    pub ok: bool,
}

struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(headers: Vec<&'static str>) -> Self {
        Table {
            headers,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    fn text(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let line = |cells: Vec<&str>, out: &mut String| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:>w$}"))
                .collect();
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(self.headers.clone(), &mut out);
        for row in &self.rows {
            line(row.iter().map(String::as_str).collect(), &mut out);
        }
        out
    }
}

fn render(format: Format, value: Value, table: Table, preamble: &str) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => table.csv(),
        Format::Text => format!("{preamble}{}", table.text()),
    }
}

fn build_field(cli: &Cli) -> Result<Field> {
    let modulus = cli.modulus.as_deref().map(parse_coeffs).transpose()?;
    Field::new(cli.r, modulus.as_deref())
}

fn field_header(field: &Field) -> String {
    format!(
        "q = {} (r = {}), modulus {}\n",
        field.q(),
        field.r(),
        format_poly(field.modulus())
    )
}

fn check_h(h_max: u32) -> Result<()> {
    if h_max > MAX_H {
        return Err(Error::Guard {
            what: format!("--hmax {h_max}"),
            limit: format!("hmax <= {MAX_H}"),
        });
    }
    Ok(())
}

fn cmd_field(field: &Field, format: Format) -> Result<Emitted> {
    let eps = field.first_nonsquare();
    let mut table = Table::new(vec!["index", "coeffs", "trace", "square"]);
    let mut elements = Vec::new();
    if field.q() <= MAX_LISTING_Q {
        for x in field.elements() {
            let square = if x.is_zero() {
                Value::Null
            } else {
                Value::Bool(field.is_square(x)?)
            };
            table.push(vec![
                x.raw().to_string(),
                field.key(x),
                field.trace(x).to_string(),
                square.to_string(),
            ]);
            elements.push(json!({
                "index": x.raw(),
                "coeffs": field.key(x),
                "trace": field.trace(x),
                "square": square,
            }));
        }
    }
    let value = json!({
        "r": field.r(),
        "q": field.q(),
        "modulus": field.modulus(),
        "polynomial": format_poly(field.modulus()),
        "generator": field.key(field.generator()),
        "eps": field.key(eps),
        "elements": elements,
    });
    let pre = format!(
        "{}generator {}, first nonsquare {}\n",
        field_header(field),
        field.key(field.generator()),
        field.key(eps)
    );
    Ok(Emitted {
        body: render(format, value, table, &pre),
        ok: true,
    })
}

fn cmd_kloosterman(field: &Field, format: Format) -> Result<Emitted> {
    let table_k = KloostermanTable::new(field)?;
    let mut table = Table::new(vec!["a", "K", "square"]);
    let mut values = Vec::new();
    for (a, k) in table_k.entries() {
        let sq = field.is_square(a)?;
        table.push(vec![field.key(a), k.to_string(), sq.to_string()]);
        values.push(json!({"a": field.key(a), "K": k, "square": sq}));
    }
    let value = json!({"q": field.q(), "values": values});
    Ok(Emitted {
        body: render(format, value, table, &field_header(field)),
        ok: true,
    })
}

fn cmd_moments(field: &Field, format: Format, h_max: u32) -> Result<Emitted> {
    let t = KloostermanTable::new(field)?;
    let sk: Vec<BigInt> = (1..=h_max).map(|h| t.sk_moment(h)).collect();
    let mk: Vec<BigInt> = (1..=h_max).map(|h| t.mk_moment(h)).collect();
    let mut table = Table::new(vec!["q", "h", "SK", "MK"]);
    for (i, (s, m)) in sk.iter().zip(&mk).enumerate() {
        table.push(vec![field.q().to_string(), (i + 1).to_string(), s.to_string(), m.to_string()]);
    }
    let value = json!({
        "q": field.q(),
        "modulus": field.modulus(),
        "SK": json::array(&sk),
        "MK": json::array(&mk),
    });
    Ok(Emitted {
        body: render(format, value, table, &field_header(field)),
        ok: true,
    })
}

fn cmd_constants(
    field: &Field,
    format: Format,
    family: Option<CosetFamily>,
    n: Option<u32>,
    n_max: u32,
) -> Result<Emitted> {
    let families: Vec<CosetFamily> = match family {
        Some(f) => vec![f],
        None => CosetFamily::all().to_vec(),
    };
    let q = field.q() as u64;
    let mut table = Table::new(vec!["family", "n", "q", "A", "B", "N"]);
    let mut rows = Vec::new();
    for f in families {
        let ns: Vec<u32> = match n {
            Some(n) => {
                f.check_n(n)?;
                vec![n]
            }
            None => f.valid_ns(n_max).collect(),
        };
        for n in ns {
            let c = family_constants(f, n, q)?;
            table.push(vec![
                f.to_string(),
                n.to_string(),
                q.to_string(),
                c.a.to_string(),
                c.b.to_string(),
                c.n.to_string(),
            ]);
            rows.push(json!({
                "family": f, "n": n, "q": q,
                "A": json::value(&c.a), "B": json::value(&c.b), "N": json::value(&c.n),
            }));
        }
    }
    Ok(Emitted {
        body: render(format, Value::Array(rows), table, ""),
        ok: true,
    })
}

fn cmd_weights(field: &Field, format: Format, inst: &Instance, j_max: usize) -> Result<Emitted> {
    inst.family.check_n(inst.n)?;
    if j_max > MAX_J {
        return Err(Error::Guard {
            what: format!("--jmax {j_max}"),
            limit: format!("jmax <= {MAX_J}"),
        });
    }
    let tables = SumTables::new(field)?;
    let code = FamilyCode::build(inst.family, inst.n, &tables, j_max)?;
    let inj = check_injectivity(inst.family, inst.n, &tables)?;
    let mut value = code.to_json(field);
    value["injective"] = Value::Bool(inj.injective);
    value["min_dual_weight"] = json::value(&inj.min_weight);
    let mut table = Table::new(vec!["kind", "key", "value"]);
    for x in field.elements() {
        table.push(vec!["profile".into(), field.key(x), code.profile.count(x).to_string()]);
    }
    for a in field.nonzero() {
        table.push(vec!["dual_weight".into(), field.key(a), code.weights.get(a).to_string()]);
    }
    for (j, c) in code.prefix.values.iter().enumerate() {
        table.push(vec!["C".into(), j.to_string(), c.to_string()]);
    }
    let pre = format!(
        "{} (n = {}), q = {}, N = {}, injective: {}\n",
        inst.family,
        inst.n,
        field.q(),
        code.constants.n,
        inj.injective
    );
    Ok(Emitted {
        body: render(format, value, table, &pre),
        ok: inj.injective,
    })
}

fn cmd_verify(field: &Field, format: Format, n_max: u32, h_max: u32) -> Result<Emitted> {
    check_h(h_max)?;
    let report = full_verification(field, n_max, h_max)?;
    let mut table = Table::new(vec!["scope", "name", "status", "lhs", "rhs"]);
    let status = |s: Status| match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Warn => "warn",
    };
    for c in &report.global {
        table.push(vec![
            "global".into(),
            c.name.clone(),
            status(c.status).into(),
            c.lhs.to_string(),
            c.rhs.to_string(),
        ]);
    }
    for inst in &report.instances {
        let scope = format!("{}(n={})", inst.instance.family, inst.instance.n);
        for c in &inst.checks {
            table.push(vec![
                scope.clone(),
                c.name.clone(),
                status(c.status).into(),
                c.lhs.to_string(),
                c.rhs.to_string(),
            ]);
        }
    }
    let body = match format {
        Format::Json => render(format, serde_json::to_value(&report).expect("serializable"), table, ""),
        Format::Csv => table.csv(),
        Format::Text => {
            let mut s = field_header(field);
            let count = |checks: &[crate::moments::Check], st: Status| {
                checks.iter().filter(|c| c.status == st).count()
            };
            let _ = writeln!(
                s,
                "global: {} pass, {} fail",
                count(&report.global, Status::Pass),
                count(&report.global, Status::Fail)
            );
            for inst in &report.instances {
                let _ = writeln!(
                    s,
                    "{}(n={}): {} pass, {} fail, {} warn",
                    inst.instance.family,
                    inst.instance.n,
                    count(&inst.checks, Status::Pass),
                    count(&inst.checks, Status::Fail),
                    count(&inst.checks, Status::Warn)
                );
            }
            for f in report.failures() {
                let _ = writeln!(s, "FAIL {f}");
            }
            let _ = writeln!(s, "{}", if report.passed { "all checks passed" } else { "verification failed" });
            s
        }
    };
    Ok(Emitted {
        body,
        ok: report.passed,
    })
}

fn cmd_recursion(field: &Field, format: Format, inst: &Instance, h_max: u32) -> Result<Emitted> {
    inst.family.check_n(inst.n)?;
    check_h(h_max)?;
    let tables = SumTables::new(field)?;
    let k = field.r() as u32;
    let code = FamilyCode::build(inst.family, inst.n, &tables, h_max as usize)?;
    let series = sk_from_code(&code, k, h_max)?;
    let audit = audit_printed(&code, k, h_max)?;
    let oracle = oracle_series(inst.family, inst.n, &tables.kloosterman, h_max);
    let agrees = series.values == oracle.values;
    let step = if series.even { 2 } else { 1 };
    let printed: Vec<String> = audit.values.iter().map(rational_display).collect();
    let mut table = Table::new(vec!["h", "power", "recursion", "printed", "direct"]);
    for (i, ((s, p), o)) in series.values.iter().zip(&printed).zip(&oracle.values).enumerate() {
        table.push(vec![
            (i + 1).to_string(),
            (step * (i + 1)).to_string(),
            s.to_string(),
            p.clone(),
            o.to_string(),
        ]);
    }
    let value = json!({
        "family": inst.family,
        "n": inst.n,
        "q": field.q(),
        "even": series.even,
        "SK": json::array(&series.values),
        "printed": printed,
        "direct": json::array(&oracle.values),
        "agrees": agrees,
        "printed_discrepancy": audit.discrepancy,
    });
    let pre = format!("{} (n = {}), q = {}\n", inst.family, inst.n, field.q());
    Ok(Emitted {
        body: render(format, value, table, &pre),
        ok: agrees,
    })
}

fn cmd_histogram(field: &Field, format: Format, inst: &Instance) -> Result<Emitted> {
    let form = MinusForm::new(field);
    let set = form.double_coset(inst.family, inst.n)?;
    let hist = trace_histogram(field, &set);
    let tables = SumTables::new(field)?;
    let profile = crate::code::trace_profile(inst.family, inst.n, &tables)?;
    let mut table = Table::new(vec!["beta", "enumerated", "closed_form"]);
    let mut h_map = Map::new();
    let mut p_map = Map::new();
    let mut ok = true;
    for x in field.elements() {
        let e = hist[x.index()];
        let c = profile.count(x);
        ok &= num_bigint::BigUint::from(e) == *c;
        table.push(vec![field.key(x), e.to_string(), c.to_string()]);
        h_map.insert(field.key(x), json!(e));
        p_map.insert(field.key(x), json::value(c));
    }
    let value = json!({
        "family": inst.family,
        "n": inst.n,
        "q": field.q(),
        "eps": field.key(form.eps()),
        "size": set.len(),
        "histogram": h_map,
        "profile": p_map,
        "match": ok,
    });
    let pre = format!(
        "{} (n = {}), q = {}: {} elements enumerated\n",
        inst.family,
        inst.n,
        field.q(),
        set.len()
    );
    Ok(Emitted {
        body: render(format, value, table, &pre),
        ok,
    })
}

/// Runs a parsed command and renders its output.
pub fn execute(cli: &Cli) -> Result<Emitted> {
    let field = build_field(cli)?;
    let f = cli.format;
    match &cli.command {
        Command::Field => cmd_field(&field, f),
        Command::Kloosterman => cmd_kloosterman(&field, f),
        Command::Moments { hmax } => cmd_moments(&field, f, *hmax),
        Command::Constants { family, n, nmax } => cmd_constants(&field, f, *family, *n, *nmax),
        Command::Weights { inst, jmax } => cmd_weights(&field, f, inst, *jmax),
        Command::Verify { nmax, hmax } => cmd_verify(&field, f, *nmax, *hmax),
        Command::Recursion { inst, hmax } => cmd_recursion(&field, f, inst, *hmax),
        Command::Histogram { inst } => cmd_histogram(&field, f, inst),
    }
}

/// Parses `args`, runs the command, writes its output and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.jobs {
        Some(0) => Err(Error::Domain("--jobs must be at least 1".into())),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Error::Domain(format!("cannot start {j} workers: {e}"))),
        },
        None => execute(&cli),
    };
    match result {
        Ok(emitted) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, emitted.body.as_bytes()),
                None => stdout.write_all(emitted.body.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "kloos: cannot write output: {e}");
                return EXIT_USAGE;
            }
            if emitted.ok {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "kloos: {e}");
            if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_FAILED
            }
        }
    }
}
