use std::fmt::Write as _;
use std::process::ExitCode;
use std::sync::Arc;

use burnside_core::biset::{
    compose, hom_biset, identity_biset, jn_bivariant, transfer_biset, BisetElement, BisetSpace,
};
use burnside_core::burnside::BurnsideRing;
use burnside_core::filtration::jn_ideal;
use burnside_core::group::{FiniteGroup, GroupHom, DEFAULT_ORDER_CAP};
use burnside_core::io::{marks_csv, parse_group, parse_i64_list, parse_usize_list, BisetElementJson};
use burnside_core::lattice::IntegerLattice;
use burnside_core::subgroup::{subgroup_as_group, subgroup_generated};
use burnside_core::verify::{self, Fault, Status, VerifyOptions};
use burnside_core::{Error, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "burnside", version, about = "Tables of marks, biset composition and the J_n filtration of Burnside rings")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    format: Format,
    /// Largest group or product order the command may build.
    #[arg(long, env = "BURNSIDE_CAP", default_value_t = DEFAULT_ORDER_CAP, global = true)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Table of marks; row i is [G/H_i], column j the mark at H_j.
    Marks {
        /// Catalog name, inline JSON, @file.json, or SPEC[x,y] for a subgroup.
        group: String,
    },
    /// HNF basis of J_n(G), or of J_n(G,H) with --bivariant.
    Jn {
        group: String,
        level: usize,
        /// Second group H; the basis is over the H-free classes of A(G,H).
        #[arg(long)]
        bivariant: Option<String>,
        /// Coefficient vector to test for membership, e.g. "[-1,1,1,1,-2]".
        #[arg(long, allow_hyphen_values = true)]
        membership: Option<String>,
    },
    /// Composite S ×_H T of two biset specs.
    ///
    /// A biset spec is one of `identity:G`, `hom:G:H:IMAGES`,
    /// `transfer:G:H[:IMAGES]`, `basis:G:H:INDEX` or `@file.json`. IMAGES is
    /// either the full image list `h0,h1,...` or generator images
    /// `g=h,...`. For `transfer` the map goes from H into G and may be
    /// omitted when H is written as `G[x,y]`.
    Compose { left: String, right: String },
    /// Recompute every published example and property check.
    #[command(name = "verify-paper")]
    Verify {
        /// Same as --format json.
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
        /// Randomized instances per group in the ideal suite.
        #[arg(long, default_value_t = VerifyOptions::default().ideal_instances)]
        instances: usize,
        /// Basis pairs compared per group triple in the composition check.
        #[arg(long, default_value_t = VerifyOptions::default().composition_pairs)]
        composition_pairs: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    /// Flip the sign of the constant term of the expected V4 generator.
    KleinSign,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse(_) | Error::UnknownName(_) | Error::NotAGroup(_) | Error::InvalidAction(_) | Error::Invalid(_) => 2,
        Error::TooLarge { .. } | Error::Overflow(_) => 3,
        Error::GroupMismatch(_) | Error::NotInjective(..) | Error::NotAHomomorphism(_) | Error::NotInImage { .. } => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(cli: &Cli) -> Result<(String, u8)> {
    match &cli.command {
        Command::Marks { group } => marks(cli, group).map(|t| (t, 0)),
        Command::Jn { group, level, bivariant, membership } => {
            jn(cli, group, *level, bivariant.as_deref(), membership.as_deref()).map(|t| (t, 0))
        }
        Command::Compose { left, right } => compose_cmd(cli, left, right).map(|t| (t, 0)),
        Command::Verify { json, inject_fault, seed, instances, composition_pairs } => {
            let options = VerifyOptions {
                fault: inject_fault.map(|FaultArg::KleinSign| Fault::KleinSign),
                seed: *seed,
                ideal_instances: *instances,
                composition_pairs: *composition_pairs,
                ..VerifyOptions::default()
            };
            let format = if *json { Format::Json } else { cli.format };
            Ok(run_checks(format, &options))
        }
    }
}

fn ring(cli: &Cli, spec: &str) -> Result<Arc<BurnsideRing>> {
    BurnsideRing::with_cap(parse_group(spec, cli.cap)?, cli.cap)
}

fn group_name(g: &FiniteGroup) -> String {
    g.name().unwrap_or("G").to_string()
}

fn to_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

fn csv_line(fields: impl IntoIterator<Item = String>) -> String {
    let quoted: Vec<String> = fields
        .into_iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f
            }
        })
        .collect();
    quoted.join(",") + "\n"
}

fn marks(cli: &Cli, spec: &str) -> Result<String> {
    let ring = ring(cli, spec)?;
    let rows = ring.table_of_marks().rows();
    let labels: Vec<String> = (0..ring.rank()).map(|i| ring.class_label(i)).collect();
    Ok(match cli.format {
        Format::Csv => marks_csv(&ring)?,
        Format::Json => to_json(&json!({
            "group": group_name(ring.group()),
            "order": ring.group().order(),
            "classes": labels,
            "marks": rows,
        })),
        Format::Pretty => {
            let width = rows.iter().flatten().map(|m| m.to_string().len()).max().unwrap_or(1);
            let label_width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
            let mut out = format!("table of marks of {} (order {})\n", group_name(ring.group()), ring.group().order());
            for (label, row) in labels.iter().zip(rows) {
                let cells: Vec<String> = row.iter().map(|m| format!("{m:>width$}")).collect();
                let _ = writeln!(out, "{label:<label_width$}  {}", cells.join(" "));
            }
            out
        }
    })
}

fn jn(cli: &Cli, spec: &str, level: usize, bivariant: Option<&str>, membership: Option<&str>) -> Result<String> {
    let ring = ring(cli, spec)?;
    let (lattice, labels, over) = match bivariant {
        Some(h) => {
            let target = parse_group(h, cli.cap)?;
            let space = BisetSpace::over(ring.clone(), target.clone())?;
            let lattice = jn_bivariant(&space, level)?;
            let over = format!("A({}, {})", group_name(ring.group()), group_name(&target));
            (lattice, space.labels(), over)
        }
        None => {
            let labels = (0..ring.rank()).map(|i| ring.class_label(i)).collect();
            (jn_ideal(&ring, level)?, labels, format!("A({})", group_name(ring.group())))
        }
    };
    let member = match membership {
        Some(text) => {
            let v = parse_i64_list(text)?;
            if v.len() != lattice.ambient_rank() {
                return Err(Error::Parse(format!(
                    "membership vector has {} entries, expected {}",
                    v.len(),
                    lattice.ambient_rank()
                )));
            }
            Some(lattice.contains(&v))
        }
        None => None,
    };
    Ok(render_lattice(cli.format, &over, level, &lattice, &labels, member))
}

fn render_lattice(format: Format, over: &str, level: usize, lattice: &IntegerLattice, labels: &[String], member: Option<bool>) -> String {
    match format {
        Format::Json => {
            let mut value = json!({
                "space": over,
                "level": level,
                "rank": lattice.rank(),
                "basis_labels": labels,
                "basis": lattice.basis(),
            });
            if let Some(m) = member {
                value["member"] = json!(m);
            }
            to_json(&value)
        }
        Format::Csv => {
            let mut out = csv_line(labels.iter().cloned());
            for row in lattice.basis() {
                out += &csv_line(row.iter().map(i64::to_string));
            }
            out
        }
        Format::Pretty => {
            let mut out = format!("J_{level} in {over}: rank {}\n", lattice.rank());
            for row in lattice.basis() {
                let _ = writeln!(out, "  {}", fmt_vec(row));
            }
            if let Some(m) = member {
                let _ = writeln!(out, "member: {m}");
            }
            out
        }
    }
}

fn fmt_vec(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Splits on `sep` outside brackets, braces and parentheses, so group specs
/// such as `E(2,3)`, `D8[1,4]` or inline JSON stay whole.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '{' | '(' => depth += 1,
            ']' | '}' | ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Images of every element, or `g=h` pairs extended from generators.
fn parse_hom(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>, images: &str) -> Result<GroupHom> {
    if images.contains('=') {
        let pairs = split_top(images, ',')
            .into_iter()
            .map(|pair| {
                let (g, h) = pair
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected g=h, found `{pair}`")))?;
                let parse = |t: &str| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("`{t}` is not an element index")))
                };
                Ok((parse(g)?, parse(h)?))
            })
            .collect::<Result<Vec<_>>>()?;
        GroupHom::from_generator_images(source.clone(), target.clone(), &pairs)
    } else {
        GroupHom::new(source.clone(), target.clone(), parse_usize_list(images)?)
    }
}

/// The inclusion of `P[x,y]` into `P`, when `sub_spec` has that shape and
/// `P` resolves to `parent`.
fn inclusion(cli: &Cli, parent: &Arc<FiniteGroup>, sub_spec: &str) -> Result<Option<GroupHom>> {
    let sub_spec = sub_spec.trim();
    let Some(open) = sub_spec.find('[') else { return Ok(None) };
    if !sub_spec.ends_with(']') {
        return Ok(None);
    }
    let outer = parse_group(&sub_spec[..open], cli.cap)?;
    if !outer.same_table(parent) {
        return Ok(None);
    }
    let seeds = parse_usize_list(&sub_spec[open + 1..sub_spec.len() - 1])?;
    if let Some(&bad) = seeds.iter().find(|&&x| x >= parent.order()) {
        return Err(Error::Parse(format!("element {bad} out of range in `{sub_spec}`")));
    }
    let (_, incl) = subgroup_as_group(parent, &subgroup_generated(parent, &seeds));
    Ok(Some(incl))
}

fn parse_biset(cli: &Cli, spec: &str) -> Result<BisetElement> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
        let json: BisetElementJson = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        return json.build(cli.cap);
    }
    let parts = split_top(spec, ':');
    let space = |g: &str, h: &str| -> Result<(Arc<FiniteGroup>, Arc<FiniteGroup>, Arc<BisetSpace>)> {
        let g = parse_group(g, cli.cap)?;
        let h = parse_group(h, cli.cap)?;
        let space = BisetSpace::with_cap(g.clone(), h.clone(), cli.cap)?;
        Ok((g, h, space))
    };
    match parts.as_slice() {
        ["identity", g] => {
            let (_, _, sp) = space(g, g)?;
            identity_biset(&sp)
        }
        ["hom", g, h, images] => {
            let (g, h, sp) = space(g, h)?;
            hom_biset(&sp, &parse_hom(&g, &h, images)?)
        }
        ["transfer", g, h] => {
            let (g, h_group, sp) = space(g, h)?;
            let theta = inclusion(cli, &g, h)?.ok_or_else(|| {
                Error::Parse(format!("`transfer:{}:{h}` needs images unless H is written as G[...]", group_name(&g)))
            })?;
            transfer_biset(&sp, &GroupHom::new(h_group, g, theta.images().to_vec())?)
        }
        ["transfer", g, h, images] => {
            let (g, h, sp) = space(g, h)?;
            transfer_biset(&sp, &parse_hom(&h, &g, images)?)
        }
        ["basis", g, h, index] => {
            let (_, _, sp) = space(g, h)?;
            let i: usize = index.trim().parse().map_err(|_| Error::Parse(format!("`{index}` is not a basis index")))?;
            if i >= sp.rank() {
                return Err(Error::Parse(format!("basis index {i} out of range for rank {}", sp.rank())));
            }
            Ok(sp.basis_element(i))
        }
        _ => Err(Error::Parse(format!("unrecognized biset spec `{spec}`"))),
    }
}

fn compose_cmd(cli: &Cli, left: &str, right: &str) -> Result<String> {
    let s = parse_biset(cli, left)?;
    let t = parse_biset(cli, right)?;
    let st = compose(&s, &t)?;
    let space = st.space();
    Ok(match cli.format {
        Format::Json => to_json(&serde_json::to_value(BisetElementJson::from_element(&st)).expect("element serializes")),
        Format::Csv => csv_line(space.labels()) + &csv_line(st.coeffs().iter().map(i64::to_string)),
        Format::Pretty => format!(
            "in A({}, {}): {}\ncoefficients: {}\n",
            group_name(space.source()),
            group_name(space.target()),
            st,
            fmt_vec(st.coeffs())
        ),
    })
}

fn run_checks(format: Format, options: &VerifyOptions) -> (String, u8) {
    let report = verify::run(options);
    let code = if report.all_passed() { 0 } else { 1 };
    let status = |s: Status| if s == Status::Pass { "pass" } else { "fail" };
    let text = match format {
        Format::Json => to_json(&serde_json::to_value(&report).expect("report serializes")),
        Format::Csv => {
            let mut out = csv_line(["name", "status", "reference"].map(String::from));
            for c in &report.checks {
                out += &csv_line([c.name.clone(), status(c.status).into(), c.reference.clone()]);
            }
            out
        }
        Format::Pretty => {
            let mut out = String::new();
            for c in &report.checks {
                let _ = writeln!(out, "{:<4} {}  ({})", status(c.status), c.name, c.reference);
                if c.status == Status::Fail {
                    let _ = writeln!(out, "     expected: {}", c.expected);
                    let _ = writeln!(out, "     actual:   {}", c.actual);
                }
            }
            let passed = report.checks.iter().filter(|c| c.passed()).count();
            let _ = writeln!(out, "{passed} of {} checks passed", report.checks.len());
            out
        }
    };
    (text, code)
}
