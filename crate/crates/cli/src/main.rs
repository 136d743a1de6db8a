use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use polyhom::algebra::{
    find_polymorphism, find_semiprojection, idempotent_pins, is_decomposable, is_projective,
    semiprojection_arity_bound, Polymorphism, ProjectivityStatus,
};
use polyhom::classify::{check_against_expected, classify_cores, verify_conjecture, ClassifyOptions};
use polyhom::cores::{core_retract, is_core};
use polyhom::hom::PartialMap;
use polyhom::relations::{
    check_wall, neq_pp_template, pp_evaluate, qfpp_definable, triviality_witness, Relation, WallMatrix,
};
use polyhom::{find_hom, named, Graph};

#[derive(Parser)]
#[command(name = "polyhom", version, about = "Homomorphisms, cores and polymorphisms of small graphs")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

/// Graphs given as graph6 strings, edge-list files, or `--named NAME`
/// (named graphs fill the first slots).
#[derive(Args)]
struct GraphArgs {
    /// Bundled graph: k<N>, c<N>, cc<N>, c5p<P>, g1..g6, grotzsch, petersen.
    #[arg(long = "named", value_name = "NAME")]
    named: Vec<String>,
    /// graph6 string or path to an edge-list file.
    #[arg(value_name = "GRAPH")]
    graphs: Vec<String>,
}

impl GraphArgs {
    fn resolve(&self, expected: usize) -> Result<Vec<Graph>> {
        let mut out = Vec::new();
        for name in &self.named {
            out.push(named(name).with_context(|| format!("named graph `{name}`"))?);
        }
        for arg in &self.graphs {
            out.push(load_graph(arg)?);
        }
        if out.len() != expected {
            bail!("expected {expected} graph(s), got {}", out.len());
        }
        Ok(out)
    }

    fn one(&self) -> Result<Graph> {
        Ok(self.resolve(1)?.remove(0))
    }
}

fn load_graph(arg: &str) -> Result<Graph> {
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
        Graph::from_edge_list(&text).with_context(|| format!("parsing edge list {arg}"))
    } else {
        Graph::from_graph6(arg).with_context(|| format!("`{arg}` is neither a file nor graph6"))
    }
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
}

#[derive(Subcommand)]
enum Command {
    /// Find a homomorphism G -> H.
    Hom {
        #[command(flatten)]
        graphs: GraphArgs,
        /// Pin a source vertex: `u=x`.
        #[arg(long = "pin", value_name = "U=X")]
        pins: Vec<String>,
    },
    /// Compute the core and a retraction onto it.
    Core(GraphArgs),
    /// Decide whether the graph is a core.
    IsCore(GraphArgs),
    /// Length of the shortest odd cycle.
    OddGirth(GraphArgs),
    /// Search for a polymorphism of the given arity that is not a projection.
    Poly {
        #[command(flatten)]
        graphs: GraphArgs,
        #[arg(long)]
        arity: usize,
        /// Require f(x, .., x) = x.
        #[arg(long)]
        idempotent: bool,
    },
    /// Search for a semiprojection that is not a projection.
    Semiproj {
        #[command(flatten)]
        graphs: GraphArgs,
        #[arg(long)]
        arity: usize,
    },
    /// Decide projectivity, with certificates.
    Projective(GraphArgs),
    /// Search for a factorisation H ~ A x B.
    Decompose(GraphArgs),
    /// Classify all cores on exactly N vertices.
    ClassifyCores {
        #[arg(long)]
        n: usize,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Allow N = 8 (slow, nothing to compare against).
        #[arg(long = "unsafe-n8")]
        unsafe_n8: bool,
    },
    /// Evaluate a bundled pp-template and compare it with disequality.
    Ppdef {
        #[command(flatten)]
        graphs: GraphArgs,
        #[arg(long)]
        template: String,
        #[arg(long)]
        param: Option<usize>,
    },
    /// Decide qfpp-definability of a relation from the edge relation.
    Qfpp {
        relation: String,
        #[command(flatten)]
        graphs: GraphArgs,
    },
    /// Check a wall and look for a triviality witness.
    Wall {
        matrix: String,
        relation: String,
        #[command(flatten)]
        graphs: GraphArgs,
    },
    /// Check "projective iff indecomposable" on all small cores.
    VerifyConjecture {
        #[arg(long, default_value_t = 7)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

struct Output {
    json: bool,
    code: u8,
}

impl Output {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) {
        if self.json {
            println!("{}", serde_json::to_string(value).expect("plain data serializes"));
        } else {
            print!("{}", text());
        }
    }
}

fn parse_pins(specs: &[String], n: usize) -> Result<PartialMap> {
    let mut pins = PartialMap::empty(n);
    for spec in specs {
        let (u, x) = spec.split_once('=').with_context(|| format!("pin `{spec}` is not `u=x`"))?;
        let u: usize = u.trim().parse().with_context(|| format!("pin `{spec}`"))?;
        let x: usize = x.trim().parse().with_context(|| format!("pin `{spec}`"))?;
        if u >= n {
            bail!("pinned vertex {u} is outside the source graph");
        }
        pins.set(u, x);
    }
    Ok(pins)
}

fn fmt_map(map: &[usize]) -> String {
    map.iter()
        .enumerate()
        .map(|(v, x)| format!("{v}->{x}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn fmt_table(op: &Polymorphism) -> String {
    op.table().iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Result<u8> {
    let mut out = Output {
        json: cli.json,
        code: 0,
    };
    match cli.command {
        Command::Hom { graphs, pins } => {
            let gs = graphs.resolve(2)?;
            let (g, h) = (&gs[0], &gs[1]);
            let pins = parse_pins(&pins, g.order())?;
            let map = find_hom(g, h, &pins)?;
            out.emit(&json!({ "exists": map.is_some(), "map": map }), || match &map {
                Some(m) => format!("homomorphism: {}\n", fmt_map(m)),
                None => "no homomorphism\n".into(),
            });
        }
        Command::Core(graphs) => {
            let g = graphs.one()?;
            let r = core_retract(&g);
            let core = r.core(&g);
            let vertices: Vec<usize> = r.vertices.iter().collect();
            out.emit(
                &json!({
                    "core": core.to_graph6(),
                    "order": core.order(),
                    "vertices": vertices,
                    "retraction": r.retraction,
                }),
                || {
                    format!(
                        "core: {} ({} vertices)\nkept vertices: {:?}\nretraction: {}\n",
                        core.to_graph6(),
                        core.order(),
                        vertices,
                        fmt_map(&r.retraction)
                    )
                },
            );
        }
        Command::IsCore(graphs) => {
            let g = graphs.one()?;
            let answer = is_core(&g);
            out.emit(&json!({ "is_core": answer }), || format!("is core: {answer}\n"));
        }
        Command::OddGirth(graphs) => {
            let g = graphs.one()?;
            let og = g.odd_girth();
            out.emit(&json!({ "odd_girth": og }), || format!("odd girth: {og}\n"));
        }
        Command::Poly {
            graphs,
            arity,
            idempotent,
        } => {
            let h = graphs.one()?;
            let n = h.order();
            let pins = if idempotent {
                idempotent_pins(n, arity)
            } else {
                PartialMap::empty(n.pow(arity as u32))
            };
            let projections: Vec<Polymorphism> =
                (0..arity).map(|i| Polymorphism::projection(n, arity, i)).collect();
            let found = find_polymorphism(&h, arity, &pins, &projections)?;
            out.emit(
                &json!({ "arity": arity, "idempotent": idempotent, "found": found.is_some(), "op": found }),
                || match &found {
                    Some(op) => format!("non-projection polymorphism of arity {arity}:\n{}\n", fmt_table(op)),
                    None => format!("every {arity}-ary polymorphism in range is a projection\n"),
                },
            );
        }
        Command::Semiproj { graphs, arity } => {
            let h = graphs.one()?;
            let bound = semiprojection_arity_bound(&h).ok();
            let found = find_semiprojection(&h, arity)?;
            out.emit(
                &json!({
                    "arity": arity,
                    "arity_bound": bound,
                    "found": found.is_some(),
                    "coordinate": found.as_ref().map(|s| s.coordinate),
                    "op": found.as_ref().map(|s| &s.op),
                }),
                || {
                    let mut s = match bound {
                        Some(b) => format!("arity bound: {b}\n"),
                        None => "arity bound: undefined (isolated vertex)\n".into(),
                    };
                    match &found {
                        Some(sp) => s.push_str(&format!(
                            "semiprojection on coordinate {}:\n{}\n",
                            sp.coordinate,
                            fmt_table(&sp.op)
                        )),
                        None => s.push_str(&format!("no {arity}-ary semiprojection besides projections\n")),
                    }
                    s
                },
            );
        }
        Command::Projective(graphs) => {
            let h = graphs.one()?;
            let v = is_projective(&h);
            out.emit(&v, || {
                let mut s = format!("status: {}\n", serde_json::to_value(v.status).unwrap().as_str().unwrap());
                if let Some(r) = &v.reason {
                    s.push_str(&format!("reason: {r}\n"));
                }
                if let Some(pp) = &v.pp_definition {
                    s.push_str(&format!("pp-definition of disequality ({}): {}\n", pp.template, pp.formula));
                }
                if let Some(sp) = &v.semiprojections {
                    s.push_str(&format!("semiprojection arity bound: {}\n", sp.arity_bound));
                    for c in &sp.checked {
                        s.push_str(&format!("  arity {}: {} coordinate(s), {} nodes\n", c.arity, c.coordinates, c.nodes));
                    }
                }
                if let Some(w) = &v.witness {
                    s.push_str(&format!("witness ({:?}, arity {}): {}\n", w.kind, w.op.arity(), fmt_table(&w.op)));
                }
                s
            });
        }
        Command::Decompose(graphs) => {
            let h = graphs.one()?;
            let d = is_decomposable(&h);
            out.emit(
                &json!({
                    "decomposable": d.is_some(),
                    "left": d.as_ref().map(|d| d.left.to_graph6()),
                    "right": d.as_ref().map(|d| d.right.to_graph6()),
                    "phi": d.as_ref().map(|d| &d.phi),
                }),
                || match &d {
                    Some(d) => format!(
                        "decomposable: {} x {}\nphi: {}\n",
                        d.left.to_graph6(),
                        d.right.to_graph6(),
                        d.phi
                            .iter()
                            .enumerate()
                            .map(|(v, (a, b))| format!("{v}->({a},{b})"))
                            .collect::<Vec<_>>()
                            .join(" ")
                    ),
                    None => "not decomposable\n".into(),
                },
            );
        }
        Command::ClassifyCores { n, jobs, unsafe_n8 } => {
            let opts = ClassifyOptions {
                jobs,
                allow_n8: unsafe_n8,
                ..Default::default()
            };
            let records = classify_cores(n, opts)?;
            let check = check_against_expected(n, &records);
            if check.as_ref().is_some_and(|c| !c.matches) {
                out.code = 1;
            }
            if out.json {
                if check.is_none() {
                    println!("{}", json!({ "note": "no reference classification for this order" }));
                }
                for r in &records {
                    println!("{}", serde_json::to_string(r)?);
                }
                println!("{}", json!({ "summary": { "n": n, "cores": records.len(), "check": check } }));
            } else {
                if check.is_none() {
                    println!("note: no reference classification for this order");
                }
                println!("{} core(s) on {n} vertices:", records.len());
                for r in &records {
                    let status = serde_json::to_value(r.projectivity.status)?;
                    println!(
                        "  {:<10} {:<8} m={:<3} og={:<8} {}",
                        r.graph6,
                        r.known_name.as_deref().unwrap_or("-"),
                        r.m,
                        r.odd_girth.to_string(),
                        status.as_str().unwrap_or("")
                    );
                }
                if let Some(c) = &check {
                    println!("matches expected list: {}", c.matches);
                }
            }
        }
        Command::Ppdef {
            graphs,
            template,
            param,
        } => {
            let h = graphs.one()?;
            let f = neq_pp_template(&template, param)?;
            let r = pp_evaluate(&f, &h)?;
            let equals = r == Relation::neq(h.order());
            out.emit(
                &json!({ "formula": f.to_string(), "tuples": r.len(), "equals_neq": equals }),
                || format!("{f}\ndefines {} pairs; equals disequality: {equals}\n", r.len()),
            );
        }
        Command::Qfpp { relation, graphs } => {
            let r = Relation::from_text(&read_file(&relation)?)?;
            let h = graphs.one()?;
            let answer = qfpp_definable(&r, &h)?;
            out.emit(&json!({ "qfpp_definable": answer }), || format!("qfpp-definable: {answer}\n"));
        }
        Command::Wall {
            matrix,
            relation,
            graphs,
        } => {
            let m = WallMatrix::from_text(&read_file(&matrix)?)?;
            let r = Relation::from_text(&read_file(&relation)?)?;
            let h = graphs.one()?;
            let wall = check_wall(&m, &r, &h)?;
            let witness = if wall { triviality_witness(&m, &r, &h)? } else { None };
            out.emit(&json!({ "is_wall": wall, "triviality_witness": witness }), || {
                let mut s = format!("is wall: {wall}\n");
                if wall {
                    match witness {
                        Some(a) => s.push_str(&format!("constant map to {a} preserves the relation\n")),
                        None => s.push_str("no constant map preserves the relation\n"),
                    }
                }
                s
            });
        }
        Command::VerifyConjecture { n, jobs } => {
            let report = verify_conjecture(n, jobs)?;
            if report.counterexamples > 0 {
                out.code = 1;
            }
            out.emit(&report, || {
                let mut s = String::new();
                for c in &report.cases {
                    let status = serde_json::to_value(c.status).unwrap();
                    s.push_str(&format!(
                        "  {:<10} {:<8} {:<15} decomposable={}\n",
                        c.graph6,
                        c.known_name.as_deref().unwrap_or("-"),
                        status.as_str().unwrap_or(""),
                        c.decomposable
                    ));
                }
                s.push_str(&format!(
                    "{} core(s) checked, {} counterexample(s), {} inconclusive\n",
                    report.cases.len(),
                    report.counterexamples,
                    report.inconclusive
                ));
                s
            });
            debug_assert!(report.cases.iter().all(|c| c.status != ProjectivityStatus::NotApplicable));
        }
    }
    Ok(out.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
