//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog;
use crate::diagram::{
    classify_signature, format_types, gram_matrix, parse_diagram, recognize_finite_types, vertex_link_diagram,
    AdornedDiagram,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::DEFAULT_COSET_CAP;
use crate::numring::ModulusKind;
use crate::predict::predicted_vector;
use crate::products::{self, affine_example_graph};
use crate::quotient::{self, QuotientOptions, VertexModel, DEFAULT_IMAGE_CAP, DEFAULT_ORBIT_CAP};
use crate::skeleton::{finite_skeleton, indefinite_ball, local_regularity_profile, regularity_vector};
use crate::spectral::{exact_cheeger, family_report, second_eigenvalue, CHEEGER_MAX_VERTICES, DEFAULT_TOL};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
    Edges,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Star,
    Point,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModulusArg {
    Field,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProductOp {
    Tensor,
    Cartesian,
}

#[derive(Debug, Parser)]
#[command(name = "coxpander", version, about = "Highly regular graphs from adorned Coxeter diagrams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, default_value_t = DEFAULT_IMAGE_CAP)]
    pub cap_image: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_ORBIT_CAP)]
    pub cap_orbit: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_COSET_CAP)]
    pub cap_cosets: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output into this directory instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// DIAGRAM arguments are a file, a catalog name (353, 3335, 232, 242, 341, 600cell, e10,
/// p5, triangle7) or an inline `string [..] ring ..` form.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Signature, finite types, Gram matrix and predicted regularity vector.
    Analyze {
        diagram: String,
        #[arg(long, default_value_t = 16)]
        levels: usize,
    },
    /// Vertex link diagram.
    Link { diagram: String },
    /// Ball of radius r around a vertex of the (possibly infinite) skeleton.
    Ball {
        diagram: String,
        #[arg(short, long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = 8)]
        levels: usize,
    },
    /// Skeleton of a finite Wythoffian polytope.
    Skeleton {
        diagram: String,
        #[arg(long, default_value_t = 8)]
        levels: usize,
    },
    /// Congruence quotient mod a prime.
    Quotient {
        diagram: String,
        #[arg(short, long)]
        prime: Option<u64>,
        /// Scan odd primes up to this bound for the first preserved quotient.
        #[arg(long)]
        search: Option<u64>,
        #[arg(long, value_enum, default_value_t = ModelArg::Star)]
        model: ModelArg,
        #[arg(long, value_enum, default_value_t = ModulusArg::Field)]
        modulus: ModulusArg,
        /// Enumerate the full matrix image (orbit–stabilizer data).
        #[arg(long)]
        image: bool,
        #[arg(long)]
        no_spectrum: bool,
    },
    /// Regularity vector of a graph (edge-list file or named graph such as K4, C6, J10,5).
    Verify {
        graph: String,
        #[arg(long, default_value_t = 8)]
        max_level: usize,
        /// Expand one representative clique per level.
        #[arg(long)]
        transitive: bool,
    },
    /// Second eigenvalue, Cheeger bounds, and the exact Cheeger constant on small graphs.
    Spectrum { graph: String },
    /// Tensor or Cartesian product of two graphs.
    Product {
        #[arg(value_enum)]
        op: ProductOp,
        g1: String,
        g2: String,
        #[arg(long, default_value_t = 8)]
        levels: usize,
    },
    /// The affine quotient of [3,…,3,∞] with parameters n, k.
    Affine {
        n: usize,
        k: u32,
        #[arg(long, default_value_t = 20_000_000)]
        cap: usize,
    },
    /// Spectral gaps across graphs, or across quotients of one diagram.
    Family {
        graphs: Vec<String>,
        #[arg(long)]
        diagram: Option<String>,
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
    },
}

/// Result of a command: a JSON report, its text rendering, an optional graph and a
/// domain verdict.
pub struct Outcome {
    pub name: &'static str,
    pub report: Value,
    pub text: String,
    pub graph: Option<Graph>,
    pub ok: bool,
}

pub fn load_diagram(arg: &str) -> Result<AdornedDiagram> {
    let path = Path::new(arg);
    if path.is_file() {
        return parse_diagram(&fs::read_to_string(path)?);
    }
    if let Some(d) = catalog::by_name(arg) {
        return Ok(d);
    }
    if arg.trim_start().starts_with("string") || arg.contains('\n') {
        return parse_diagram(arg);
    }
    Err(Error::Io(format!("no diagram file or catalog entry named {arg:?}")))
}

pub fn load_graph(arg: &str) -> Result<Graph> {
    let path = Path::new(arg);
    if path.is_file() {
        return Graph::parse_edge_list(&fs::read_to_string(path)?);
    }
    products::named_graph(arg).ok_or_else(|| Error::Io(format!("no graph file or named graph {arg:?}")))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

fn vec_text(v: &[usize]) -> String {
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", s.join(","))
}

fn analyze(d: &AdornedDiagram, levels: usize, cap: usize) -> Result<Outcome> {
    let sig = classify_signature(d);
    let types = recognize_finite_types(d).map(|t| format_types(&t));
    let gram = gram_matrix(d);
    let ring = &gram.ring;
    let entries: Vec<Vec<String>> = gram.entries.iter().map(|r| r.iter().map(|a| ring.format(a)).collect()).collect();
    let link = vertex_link_diagram(d).ok();
    let link_types = link.as_ref().and_then(recognize_finite_types).map(|t| format_types(&t));
    let pred = predicted_vector(d, levels, cap)?;
    let mut text = format!(
        "rank {}\nsignature ({}, {}, {}) {:?}\nfinite type {}\nvertex link {}\n",
        d.rank(),
        sig.positive,
        sig.negative,
        sig.zero,
        sig.kind,
        types.clone().unwrap_or_else(|| "-".into()),
        link_types.clone().unwrap_or_else(|| "-".into()),
    );
    text.push_str(&format!("2B over Z[2cos(pi/{})]:\n", ring.conductor()));
    for row in &entries {
        text.push_str(&format!("  [{}]\n", row.join(", ")));
    }
    for (i, parts) in pred.spheres.iter().enumerate() {
        text.push_str(&format!("level {i}: {}\n", parts.join(" + ")));
    }
    text.push_str(&format!("predicted {} ({:?})\n", vec_text(&pred.degrees), pred.stop));
    let report = json!({
        "rank": d.rank(),
        "signature": to_value(&sig),
        "finite_types": types,
        "gram": entries,
        "conductor": ring.conductor(),
        "vertex_link": link.map(|l| l.to_string()),
        "vertex_link_types": link_types,
        "prediction": to_value(&pred),
    });
    Ok(Outcome { name: "analyze", report, text, graph: None, ok: true })
}

fn graph_summary(g: &Graph, levels: usize, transitive: bool) -> (Value, String, bool) {
    match regularity_vector(g, levels, transitive) {
        Ok(rv) => {
            let text = format!(
                "vertices {} edges {}\nvector {} connected {:?}\nlevel {} connected level {}\n",
                g.n(),
                g.edge_count(),
                vec_text(&rv.degrees),
                rv.connected,
                rv.level,
                rv.connected_level()
            );
            let v = json!({"vertices": g.n(), "edges": g.edge_count(), "regularity": to_value(&rv),
                "connected_level": rv.connected_level()});
            (v, text, true)
        }
        Err(Error::Irregular { level, witness }) => {
            let text = format!("vertices {} edges {}\nirregular at level {level}, witness {witness:?}\n", g.n(), g.edge_count());
            let v = json!({"vertices": g.n(), "edges": g.edge_count(), "irregular": {"level": level, "witness": witness}});
            (v, text, false)
        }
        Err(e) => (json!({"error": e.to_string()}), format!("{e}\n"), false),
    }
}

fn quotient_text(r: &quotient::QuotientReport) -> String {
    let mut s = format!(
        "p = {} over {}\nvertices {} edges {} degree {:?}\nmeasured {} expected {}\npreserved {}\n",
        r.prime,
        r.modulus,
        r.vertices,
        r.edges,
        r.degree,
        r.measured.as_ref().map(|m| vec_text(m)).unwrap_or_else(|| "irregular".into()),
        vec_text(&r.expected),
        r.preserved
    );
    s.push_str(&format!("ball-2 sizes X {} quotient {}\n", r.ball2_sizes.0, r.ball2_sizes.1));
    if let (Some(o), Some(st)) = (r.image_order, r.stabilizer_order) {
        s.push_str(&format!("image order {o}, vertex stabiliser {st}\n"));
    }
    if let Some(sp) = &r.spectral {
        s.push_str(&format!(
            "lambda2 {:.10} gap {:.10} cheeger [{:.6}, {:.6}]\n",
            sp.lambda2, sp.gap, sp.cheeger_lower, sp.cheeger_upper
        ));
    }
    for n in &r.notes {
        s.push_str(&format!("note: {n}\n"));
    }
    s
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let qopts = |model: ModelArg, modulus: ModulusArg, image: bool, spectrum: bool| QuotientOptions {
        image_cap: cli.cap_image,
        orbit_cap: cli.cap_orbit,
        coset_cap: cli.cap_cosets,
        tol: cli.tol,
        generate_image: image,
        spectrum,
        kind: match modulus {
            ModulusArg::Field => ModulusKind::ResidueField,
            ModulusArg::Full => ModulusKind::Full,
        },
        model: match model {
            ModelArg::Star => VertexModel::Star,
            ModelArg::Point => VertexModel::Point,
        },
    };
    match &cli.command {
        Command::Analyze { diagram, levels } => analyze(&load_diagram(diagram)?, *levels, cli.cap_cosets),
        Command::Link { diagram } => {
            let d = load_diagram(diagram)?;
            let link = vertex_link_diagram(&d)?;
            let types = recognize_finite_types(&link).map(|t| format_types(&t));
            let text = format!("{}finite type {}\n", link.to_block_string(), types.clone().unwrap_or_else(|| "-".into()));
            let report = json!({"link": link.to_block_string(), "finite_types": types});
            Ok(Outcome { name: "link", report, text, graph: None, ok: true })
        }
        Command::Ball { diagram, radius, levels } => {
            let g = indefinite_ball(&load_diagram(diagram)?, *radius, cli.cap_orbit)?;
            let prof = local_regularity_profile(&g, 0, *levels)?;
            let mut text = format!(
                "radius {radius}: vertices {} edges {}\nlocal vector at centre {}\n",
                g.n(),
                g.edge_count(),
                vec_text(&prof.vector.degrees)
            );
            if let Some((level, w)) = &prof.irregular {
                text.push_str(&format!("irregular at level {level}, witness {w:?}\n"));
            }
            let report = json!({"radius": radius, "vertices": g.n(), "edges": g.edge_count(), "local_regularity": to_value(&prof)});
            Ok(Outcome { name: "ball", report, text, graph: Some(g), ok: true })
        }
        Command::Skeleton { diagram, levels } => {
            let g = finite_skeleton(&load_diagram(diagram)?, cli.cap_cosets)?;
            let (report, text, ok) = graph_summary(&g, *levels, true);
            Ok(Outcome { name: "skeleton", report, text, graph: Some(g), ok })
        }
        Command::Quotient { diagram, prime, search, model, modulus, image, no_spectrum } => {
            let d = load_diagram(diagram)?;
            let opts = qopts(*model, *modulus, *image, !*no_spectrum);
            match (prime, search) {
                (Some(p), None) => {
                    let (q, r) = quotient::quotient(&d, *p, &opts)?;
                    let text = quotient_text(&r);
                    Ok(Outcome { name: "quotient", report: to_value(&r), text, graph: Some(q.graph), ok: r.preserved })
                }
                (None, Some(max)) => {
                    let s = quotient::search_primes(&d, *max, &opts)?;
                    let mut text: String = s.tried.iter().map(|(p, why)| format!("p = {p}: {why}\n")).collect();
                    match &s.found {
                        Some(r) => text.push_str(&quotient_text(r)),
                        None => text.push_str("no prime preserved regularity\n"),
                    }
                    let ok = s.found.is_some();
                    Ok(Outcome { name: "quotient", report: to_value(&s), text, graph: None, ok })
                }
                _ => Err(Error::Invalid("give exactly one of --prime or --search".into())),
            }
        }
        Command::Verify { graph, max_level, transitive } => {
            let g = load_graph(graph)?;
            let (report, text, ok) = graph_summary(&g, *max_level, *transitive);
            Ok(Outcome { name: "verify", report, text, graph: None, ok })
        }
        Command::Spectrum { graph } => {
            let g = load_graph(graph)?;
            let s = second_eigenvalue(&g, cli.tol)?;
            let mut text = format!(
                "vertices {} degree {}\nlambda2 {:.10} (residual {:.1e})\ngap {:.10}\ncheeger lower {:.10} upper {:.10}\n",
                s.vertices, s.degree, s.lambda2, s.residual, s.gap, s.cheeger_lower, s.cheeger_upper
            );
            let exact = if g.n() <= CHEEGER_MAX_VERTICES { Some(exact_cheeger(&g)?) } else { None };
            if let Some(h) = &exact {
                text.push_str(&format!("h = {}/{} witness {:?}\n", h.numerator, h.denominator, h.witness));
            }
            let report = json!({"spectral": to_value(&s), "cheeger_exact": exact.map(|h| to_value(&h))});
            Ok(Outcome { name: "spectrum", report, text, graph: None, ok: true })
        }
        Command::Product { op, g1, g2, levels } => {
            let (a, b) = (load_graph(g1)?, load_graph(g2)?);
            let g = match op {
                ProductOp::Tensor => products::tensor(&a, &b),
                ProductOp::Cartesian => products::cartesian(&a, &b),
            };
            let fa = regularity_vector(&a, *levels, false).ok().map(|r| r.degrees);
            let fb = regularity_vector(&b, *levels, false).ok().map(|r| r.degrees);
            let formula = match (op, &fa, &fb) {
                (ProductOp::Tensor, Some(x), Some(y)) => Some(products::tensor_vector(x, y)),
                (ProductOp::Cartesian, Some(x), Some(y)) => products::cartesian_vector(x, y),
                _ => None,
            };
            let (mut report, mut text, ok) = graph_summary(&g, *levels, false);
            report["formula"] = to_value(&formula);
            text.push_str(&format!("formula {}\n", formula.as_ref().map(|f| vec_text(f)).unwrap_or_else(|| "-".into())));
            Ok(Outcome { name: "product", report, text, graph: Some(g), ok })
        }
        Command::Affine { n, k, cap } => {
            let (g, r) = affine_example_graph(*n, *k, *cap)?;
            let text = format!(
                "n {} k {}\norder {} (2 n! k^(n-1) = {})\nrelations {}\nvertices {}\nmeasured {} connected {:?}\nlisted {}\n",
                r.n,
                r.k,
                r.order,
                r.expected_order,
                r.relations_hold,
                r.vertices,
                vec_text(&r.measured),
                r.connected,
                vec_text(&r.listed)
            );
            let ok = r.order as u128 == r.expected_order && r.relations_hold;
            Ok(Outcome { name: "affine", report: to_value(&r), text, graph: Some(g), ok })
        }
        Command::Family { graphs, diagram, primes, threshold } => {
            let mut named: Vec<(String, Graph)> = Vec::new();
            for g in graphs {
                named.push((g.clone(), load_graph(g)?));
            }
            if let Some(dg) = diagram {
                let d = load_diagram(dg)?;
                let opts = QuotientOptions { spectrum: false, ..qopts(ModelArg::Star, ModulusArg::Field, false, false) };
                for &p in primes {
                    let (q, _) = quotient::quotient(&d, p, &opts)?;
                    named.push((format!("{dg} mod {p}"), q.graph));
                }
            }
            let rep = family_report(&named, *threshold, cli.tol)?;
            let ok = rep.above_threshold;
            Ok(Outcome { name: "family", report: to_value(&rep), text: rep.to_text(), graph: None, ok })
        }
    }
}

/// Process exit code for an error: 1 for usage and input problems, 2 for domain failures.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::UnknownNode(_)
        | Error::Io(_)
        | Error::Invalid(_)
        | Error::NotPrime(_)
        | Error::UnsupportedPrime(_) => 1,
        _ => 2,
    }
}

fn render(cli: &Cli, o: &Outcome) -> Result<(String, &'static str)> {
    match cli.format {
        Format::Json => {
            let mut v = json!({"schema": SCHEMA, "command": o.name});
            v["report"] = o.report.clone();
            Ok((serde_json::to_string_pretty(&v).expect("json") + "\n", "json"))
        }
        Format::Text => Ok((o.text.clone(), "txt")),
        Format::Dot | Format::Edges => {
            let g = o.graph.as_ref().ok_or_else(|| Error::Invalid(format!("{} produces no graph", o.name)))?;
            Ok(if cli.format == Format::Dot { (g.to_dot(), "dot") } else { (g.to_edge_list(), "edges") })
        }
    }
}

fn write_atomic(dir: &Path, file: &str, body: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let target = dir.join(file);
    let tmp = dir.join(format!(".{file}.tmp"));
    fs::write(&tmp, body)?;
    fs::rename(&tmp, &target)?;
    Ok(target)
}

/// Parse arguments, run, and write the result; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if !(cli.tol > 0.0 && cli.tol <= 1e-2) || cli.cap_image == 0 || cli.cap_orbit == 0 || cli.cap_cosets == 0 {
        let _ = writeln!(stderr, "error: caps must be positive and --tol in (0, 1e-2]");
        return 1;
    }
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if cli.format == Format::Json {
                let v = json!({"schema": SCHEMA, "error": e.to_string()});
                let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&v).expect("json"));
            }
            return exit_code(&e);
        }
    };
    let (body, ext) = match render(&cli, &outcome) {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    match &cli.out {
        Some(dir) => match write_atomic(dir, &format!("{}.{ext}", outcome.name), &body) {
            Ok(path) => {
                let _ = writeln!(stdout, "{}", path.display());
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                return 1;
            }
        },
        None => {
            let _ = write!(stdout, "{body}");
        }
    }
    if outcome.ok {
        0
    } else {
        2
    }
}
