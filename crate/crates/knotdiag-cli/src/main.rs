use std::fmt::Write as _;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use knotdiag::constructions::{self, builtin, Builtin, DiagramPair, Witness};
use knotdiag::diagram::Side;
use knotdiag::io::json::{document, gauss_from_json, gauss_to_json, planar_from_json, planar_to_json};
use knotdiag::io::pd::{from_tuples, parse_pd_tuples};
use knotdiag::io::{emit_gauss, emit_pd, parse_gauss};
use knotdiag::render::{render_gauss, render_planar, Format};
use knotdiag::search::{self, SearchBudget, SearchStatus};
use knotdiag::{count_pattern, enumerate_moves, reconstruct_planar, GaussDiagram, MoveKinds, PlanarDiagram};

#[derive(Parser)]
#[command(name = "knotdiag", version, about = "Knot diagrams, Gauss diagrams and Reidemeister moves")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutFormat::Json, global = true)]
    format: OutFormat,
    /// Unbounded face for PD input: `L<k>` or `R<k>`, the side of edge k.
    #[arg(long, global = true)]
    outer_face: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

#[derive(clap::Args)]
struct Input {
    /// File with a PD code, Gauss code or JSON document; `-` or nothing for
    /// stdin.
    input: Option<String>,
    /// Use a built-in diagram instead of reading input.
    #[arg(long, conflicts_with = "input")]
    builtin: Option<String>,
}

#[derive(clap::Args)]
struct Budget {
    #[arg(long, default_value_t = 3)]
    max_depth: usize,
    /// Defaults to four above the start's crossing count.
    #[arg(long)]
    max_crossings: Option<usize>,
    #[arg(long, default_value_t = 2_000_000)]
    max_states: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check a diagram and the rigidity conditions.
    Validate(Input),
    /// Faces and their degrees.
    Faces(Input),
    /// Writhe, rotation number and the signed pattern count.
    Invariants(Input),
    /// Signed Gauss code of a diagram.
    Gauss(Input),
    /// List applicable moves.
    Moves {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "all")]
        allow: String,
    },
    /// Apply the move with the given index in the `moves` listing.
    Apply {
        #[command(flatten)]
        input: Input,
        #[arg(long = "move")]
        index: usize,
        #[arg(long, default_value = "all")]
        allow: String,
    },
    /// Build a dependent diagram pair around the input knot.
    Construct {
        #[arg(value_enum)]
        which: PairKind,
        #[command(flatten)]
        input: Input,
    },
    /// Breadth-first search from one diagram to another.
    Search {
        start: String,
        target: String,
        #[arg(long, default_value = "all")]
        allow: String,
        #[command(flatten)]
        budget: Budget,
    },
    /// Random walk of the given length.
    Walk {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "all")]
        allow: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Verification runs.
    Verify {
        #[arg(value_enum)]
        what: VerifyKind,
        #[command(flatten)]
        input: Input,
        /// Gauss diagram whose isolated copies must persist; defaults to
        /// figure 2's.
        #[arg(long)]
        core: Option<String>,
        #[arg(long, default_value = "r1,r3")]
        allow: String,
        #[command(flatten)]
        budget: Budget,
    },
    /// Draw a diagram as SVG or Graphviz.
    Render {
        #[command(flatten)]
        input: Input,
        #[arg(long = "as", value_enum, default_value_t = Graphic::Svg)]
        graphic: Graphic,
        /// Draw the Gauss diagram of a planar input.
        #[arg(long)]
        gauss: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PairKind {
    Omega2Pair,
    AllPair,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Persistence,
}

#[derive(Clone, Copy, ValueEnum)]
enum Graphic {
    Svg,
    Dot,
}

enum Loaded {
    Planar(PlanarDiagram),
    Gauss(GaussDiagram),
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read_source(path: Option<&str>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        None | Some("-") => {
            std::io::stdin().read_to_string(&mut text)?;
        }
        Some(p) => text = std::fs::read_to_string(p).map_err(|e| Failure(format!("{p}: {e}")))?,
    }
    Ok(text)
}

fn parse_outer(spec: &str) -> Result<(Side, usize), Failure> {
    let side = match spec.chars().next() {
        Some('L') => Side::Left,
        Some('R') => Side::Right,
        _ => return Err(Failure(format!("bad --outer-face {spec:?}"))),
    };
    let k = spec[1..].parse().map_err(|_| Failure(format!("bad --outer-face {spec:?}")))?;
    Ok((side, k))
}

fn parse_text(text: &str, outer: Option<&str>) -> Result<Loaded, Failure> {
    let t = text.trim();
    if t.starts_with('{') {
        let v: Value = serde_json::from_str(t)?;
        return match v.get("kind").and_then(Value::as_str) {
            Some("gauss") => Ok(Loaded::Gauss(gauss_from_json(&v)?)),
            _ => Ok(Loaded::Planar(planar_from_json(&v)?)),
        };
    }
    if t.contains("X[") || t.starts_with("PD") || t.is_empty() {
        let (tuples, directive) = parse_pd_tuples(t)?;
        let outer = match outer {
            Some(s) => Some(parse_outer(s)?),
            None => directive,
        };
        return Ok(Loaded::Planar(from_tuples(&tuples, outer)?));
    }
    Ok(Loaded::Gauss(parse_gauss(t)?))
}

fn load(input: &Input, outer: Option<&str>) -> Result<Loaded, Failure> {
    if let Some(name) = &input.builtin {
        return Ok(match builtin(name)? {
            Builtin::Planar(d) => Loaded::Planar(d),
            Builtin::Gauss(g) => Loaded::Gauss(g),
            Builtin::Pattern(p) => Loaded::Gauss(p.as_diagram()),
        });
    }
    parse_text(&read_source(input.input.as_deref())?, outer)
}

fn planar(l: Loaded) -> Result<PlanarDiagram, Failure> {
    match l {
        Loaded::Planar(d) => Ok(d),
        Loaded::Gauss(g) => Ok(reconstruct_planar(&g)?),
    }
}

fn load_planar(input: &Input, outer: Option<&str>) -> Result<PlanarDiagram, Failure> {
    planar(load(input, outer)?)
}

fn load_path(path: &str, outer: Option<&str>) -> Result<PlanarDiagram, Failure> {
    let input = Input { input: Some(path.to_string()), builtin: None };
    load_planar(&input, outer)
}

fn kinds(s: &str) -> Result<MoveKinds, Failure> {
    MoveKinds::parse(s).map_err(Failure)
}

fn budget(b: &Budget, start: &PlanarDiagram) -> SearchBudget {
    SearchBudget {
        max_depth: b.max_depth,
        max_crossings: b.max_crossings.unwrap_or(start.crossing_count() + 4),
        max_states: b.max_states,
    }
}

fn pair_json(p: &DiagramPair) -> Map<String, Value> {
    let mut m = document("pair");
    m.insert("dependence".into(), serde_json::to_value(p.dependence).expect("plain enum"));
    m.insert("first".into(), json!(emit_pd(&p.first)));
    m.insert("second".into(), json!(emit_pd(&p.second)));
    m.insert("crossings".into(), json!([p.first.crossing_count(), p.second.crossing_count()]));
    match &p.witness {
        Witness::Omega2 { site, copies_before, copies_after } => {
            m.insert("move".into(), serde_json::to_value(site).expect("serializable"));
            m.insert("isolated_copies".into(), json!([copies_before, copies_after]));
        }
        Witness::Summands { f, f_prime, e, e_prime } => {
            m.insert("summands".into(), json!([emit_pd(f), emit_pd(f_prime), emit_pd(e), emit_pd(e_prime)]));
        }
    }
    m
}

/// Renders a JSON document as `key: value` lines.
fn text_lines(v: &Value) -> String {
    let mut s = String::new();
    if let Some(obj) = v.as_object() {
        for (k, x) in obj {
            if k == "schema" || k == "kind" {
                continue;
            }
            let shown = match x {
                Value::String(t) => t.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(s, "{k}: {shown}");
        }
    }
    s
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let outer = cli.outer_face.as_deref();
    let doc: Value = match &cli.command {
        Command::Validate(input) => {
            let d = load_planar(input, outer)?;
            let pre = d.check_theorem1_preconditions();
            let mut m = document("validation");
            m.insert("valid".into(), json!(d.validate().is_empty()));
            m.insert("crossings".into(), json!(d.crossing_count()));
            m.insert("rigid".into(), json!(pre.holds));
            m.insert("violations".into(), json!(pre.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>()));
            Value::Object(m)
        }
        Command::Faces(input) => {
            let d = load_planar(input, outer)?;
            let faces = d.faces();
            let list: Vec<Value> = faces
                .polygons
                .iter()
                .map(|f| json!({ "id": f.id.0, "degree": f.degree(), "vertices": f.vertices(), "outer": f.is_outer }))
                .collect();
            let mut m = document("faces");
            m.insert("faces".into(), Value::Array(list));
            m.insert("census".into(), json!(d.ngon_census()));
            Value::Object(m)
        }
        Command::Invariants(input) => {
            let d = load_planar(input, outer)?;
            let g = GaussDiagram::from_planar(&d);
            let mut m = document("invariants");
            m.insert("crossings".into(), json!(d.crossing_count()));
            m.insert("writhe".into(), json!(d.writhe()));
            m.insert("rotation_number".into(), json!(d.rotation_number()));
            m.insert("figure5_count".into(), json!(count_pattern(&g, &constructions::figure5_pattern())));
            m.insert("key".into(), json!(format!("{:032x}", d.canonical_key().fingerprint())));
            Value::Object(m)
        }
        Command::Gauss(input) => {
            let g = match load(input, outer)? {
                Loaded::Planar(d) => GaussDiagram::from_planar(&d),
                Loaded::Gauss(g) => g,
            };
            if cli.format == OutFormat::Text {
                return Ok(format!("{}\n", emit_gauss(&g)));
            }
            gauss_to_json(&g)
        }
        Command::Moves { input, allow } => {
            let d = load_planar(input, outer)?;
            let moves = enumerate_moves(&d, kinds(allow)?);
            let list: Vec<Value> = moves
                .iter()
                .enumerate()
                .map(|(i, m)| json!({ "index": i, "kind": format!("{:?}", m.kind()), "site": m.site }))
                .collect();
            let mut m = document("moves");
            m.insert("count".into(), json!(list.len()));
            m.insert("moves".into(), Value::Array(list));
            Value::Object(m)
        }
        Command::Apply { input, index, allow } => {
            let d = load_planar(input, outer)?;
            let moves = enumerate_moves(&d, kinds(allow)?);
            let mv = moves.get(*index).ok_or_else(|| Failure(format!("no move {index}; {} listed", moves.len())))?;
            let out = knotdiag::apply_move(&d, mv)?;
            if cli.format == OutFormat::Text {
                return Ok(format!("{}\n", emit_pd(&out)));
            }
            planar_to_json(&out)
        }
        Command::Construct { which, input } => {
            let k = load_planar(input, outer)?;
            let pair = match which {
                PairKind::Omega2Pair => constructions::make_omega2_dependent_pair(&k)?,
                PairKind::AllPair => constructions::make_all_dependent_pair(&k)?,
            };
            Value::Object(pair_json(&pair))
        }
        Command::Search { start, target, allow, budget: b } => {
            let s = load_path(start, outer)?;
            let t = load_path(target, outer)?;
            let out = search::reachable(&s, &t, kinds(allow)?, budget(b, &s))?;
            let mut m = document("search");
            m.insert("status".into(), json!(out.status_name()));
            m.insert("states_explored".into(), json!(out.states_explored));
            m.insert("frontier_sizes".into(), json!(out.frontier_sizes));
            if let SearchStatus::Found(seq) = &out.status {
                m.insert("moves".into(), json!(seq.moves.iter().map(|x| x.site).collect::<Vec<_>>()));
            }
            Value::Object(m)
        }
        Command::Walk { input, allow, steps, seed } => {
            let d = load_planar(input, outer)?;
            let seq = search::random_walk(&d, kinds(allow)?, *steps, *seed)?;
            let end = seq.replay(&d)?;
            let mut m = document("walk");
            m.insert("moves".into(), json!(seq.moves.iter().map(|x| x.site).collect::<Vec<_>>()));
            m.insert("end".into(), json!(emit_pd(&end)));
            Value::Object(m)
        }
        Command::Verify { what: VerifyKind::Persistence, input, core, allow, budget: b } => {
            let d = load_planar(input, outer)?;
            let core = match core {
                Some(path) => match parse_text(&read_source(Some(path))?, None)? {
                    Loaded::Planar(c) => GaussDiagram::from_planar(&c),
                    Loaded::Gauss(g) => g,
                },
                None => GaussDiagram::from_planar(&constructions::figure2()),
            };
            let report = search::verify_isolated_copy_persistence(&d, &core, kinds(allow)?, budget(b, &d))?;
            let mut m = document("persistence");
            if let Value::Object(r) = serde_json::to_value(&report)? {
                m.extend(r);
            }
            Value::Object(m)
        }
        Command::Render { input, graphic, gauss } => {
            let format = match graphic {
                Graphic::Svg => Format::Svg,
                Graphic::Dot => Format::Dot,
            };
            return match load(input, outer)? {
                Loaded::Gauss(g) => Ok(render_gauss(&g, format)),
                Loaded::Planar(d) if *gauss => Ok(render_gauss(&GaussDiagram::from_planar(&d), format)),
                Loaded::Planar(d) => Ok(render_planar(&d, format)?),
            };
        }
    };
    Ok(match cli.format {
        OutFormat::Json => format!("{}\n", serde_json::to_string_pretty(&doc)?),
        OutFormat::Text => text_lines(&doc),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
