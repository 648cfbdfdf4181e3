use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use edgeadm::cuts::{min_s_cut_with, CutOptions, DEFAULT_NODE_BUDGET};
use edgeadm::degeneracy::{
    check_degeneracy_with, edge_degeneracy_with, maximal_hideout_with, parse_hideout,
    parse_layout, verify_hideout, verify_layout, verify_maximal_hideout, DegeneracyVerdict,
    HideOut, Layout,
};
use edgeadm::game::{play, robber_from_hideout, CopStrategy, EscapeRule, GameScenario, OverBudget, Outcome};
use edgeadm::multigraph::is_isomorphic_small;
use edgeadm::structure::{
    decompose, is_almost_bounded, recompose, theta_free, Decomposition, ImmersionWitness, ThetaCheck,
    TreePartition,
};
use edgeadm::testkit::{gadget, generate, AdversarialRobber, CorpusSpec};
use edgeadm::{parse_graph, Error, MultiGraph, Speed, VertexId};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "edgeadm", version, about = "Edge-degeneracy certificates, pursuit games and edge-sum decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the s-edge-degeneracy with a layout and the maximal hide-out.
    Degeneracy(DegeneracyArgs),
    /// Compute the maximal (k, s)-edge-hide-out; exit 1 when it is empty.
    Hideout(CheckArgs),
    /// Find a layout of support at most k; exit 1 with a hide-out otherwise.
    Layout(LayoutArgs),
    /// Play the layout cop against a hide-out or exhaustive robber.
    Play(PlayArgs),
    /// Test for a theta_{k+1} immersion; exit 1 with a witness when present.
    Immersion(KArgs),
    /// Build a tree-partition of adhesion at most k; exit 1 with a witness otherwise.
    Decompose(KArgs),
    /// Rebuild a graph from a tree-partition and compare it with the input.
    Compose(ComposeArgs),
    /// Emit the cut-to-degeneracy gadget graph with its role map.
    Gadget(GadgetArgs),
    /// Generate a corpus graph from a `kind:params:seed` spec.
    Gen(GenArgs),
    /// Check a certificate against a graph; exit 1 when it is rejected.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Args)]
struct Common {
    /// Graph file (`n m` header, one `u v` line per edge); `-` reads stdin.
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Node budget of the bounded-length cut search.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
}

#[derive(Args)]
struct DegeneracyArgs {
    #[command(flatten)]
    common: Common,
    /// Path-length bound: a positive integer or `inf`.
    #[arg(long)]
    speed: Speed,
    /// Also write the layout certificate to this file.
    #[arg(long)]
    layout_out: Option<PathBuf>,
    /// Also write the hide-out certificate to this file.
    #[arg(long)]
    hideout_out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    speed: Speed,
    #[arg(long)]
    k: usize,
}

#[derive(Args)]
struct LayoutArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    speed: Speed,
    /// Support bound; the optimum is used when omitted.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RobberKind {
    Hideout,
    Adversary,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Policy {
    Move,
    Concede,
}

#[derive(Args)]
struct PlayArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    speed: Speed,
    /// Edges the cop may block per round; defaults to the degeneracy.
    #[arg(long)]
    budget: Option<usize>,
    /// Robber to play; defaults to the hide-out robber when a
    /// (budget+1)-hide-out exists and the exhaustive robber otherwise.
    #[arg(long, value_enum)]
    robber: Option<RobberKind>,
    /// Hide-out robber behaviour against an over-budget cop.
    #[arg(long, value_enum, default_value_t = Policy::Move)]
    policy: Policy,
    /// Round limit; defaults to 10 times the vertex count.
    #[arg(long)]
    max_rounds: Option<usize>,
}

#[derive(Args)]
struct KArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    k: usize,
}

#[derive(Args)]
struct ComposeArgs {
    #[command(flatten)]
    common: Common,
    /// Tree-partition file as written by `decompose`.
    #[arg(long)]
    partition: PathBuf,
}

#[derive(Args)]
struct GadgetArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    a: u32,
    #[arg(long)]
    b: u32,
    #[arg(long)]
    k: usize,
    /// Finite subdivision speed, at least 2.
    #[arg(long)]
    speed: u32,
    /// Instead of the graph, report both sides of the degeneracy/cut equivalence.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct GenArgs {
    /// `random:n=N,m=M:SEED`, `bounded:n=N,m=M,d=D:SEED` or `edgesum:k=K,parts=P,n=N:SEED`.
    #[arg(long)]
    spec: CorpusSpec,
}

#[derive(Args)]
#[group(id = "certificate", required = true, multiple = false, args = ["layout", "hideout", "witness", "partition"])]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    layout: Option<PathBuf>,
    #[arg(long)]
    hideout: Option<PathBuf>,
    #[arg(long)]
    witness: Option<PathBuf>,
    #[arg(long)]
    partition: Option<PathBuf>,
    /// Required speed of a layout or hide-out certificate.
    #[arg(long)]
    speed: Option<Speed>,
    /// Claimed bound: layout support, hide-out parameter, witness order minus
    /// one, or partition adhesion.
    #[arg(long)]
    k: Option<usize>,
    /// Also require the hide-out to be the maximal one.
    #[arg(long)]
    maximal: bool,
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok = 0,
    False = 1,
    Usage = 2,
    Budget = 3,
}

enum Failure {
    Lib(Error),
    Io(PathBuf, io::Error),
    Rejected(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Run = Result<Status, Failure>;

struct Out {
    format: Format,
    text: String,
    records: Vec<Value>,
}

impl Out {
    fn new(format: Format) -> Self {
        Out {
            format,
            text: String::new(),
            records: Vec::new(),
        }
    }

    fn emit(&mut self, text: &str, record: Value) {
        self.text.push_str(text);
        self.records.push(record);
    }

    fn flush(self) {
        let mut stdout = io::stdout().lock();
        let _ = match self.format {
            Format::Text => stdout.write_all(self.text.as_bytes()),
            Format::JsonLines => self
                .records
                .iter()
                .try_for_each(|r| writeln!(stdout, "{r}")),
        };
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(path.into(), e))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Io(path.into(), e))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(path.into(), e))
}

fn load_graph(path: &Path) -> Result<MultiGraph, Failure> {
    Ok(parse_graph(&read_text(path)?)?)
}

fn opts(c: &Common) -> CutOptions {
    CutOptions {
        node_budget: c.node_budget,
    }
}

fn layout_record(l: &Layout) -> Value {
    json!({
        "record": "layout",
        "speed": l.speed.to_string(),
        "k": l.degeneracy(),
        "order": l.order.iter().map(|v| v.0).collect::<Vec<_>>(),
        "support": l.supports,
    })
}

fn hideout_record(h: &HideOut) -> Value {
    json!({
        "record": "hideout",
        "speed": h.speed.to_string(),
        "k": h.k,
        "vertices": h.vertices.iter().map(|v| v.0).collect::<Vec<_>>(),
        "support": h.supports.values().collect::<Vec<_>>(),
    })
}

fn witness_record(w: &ImmersionWitness) -> Value {
    json!({
        "record": "witness",
        "x": w.x.0,
        "y": w.y.0,
        "paths": w.paths.iter().map(|p| p.iter().map(|e| e.0).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn partition_record(p: &TreePartition) -> Value {
    json!({
        "record": "partition",
        "nodes": p.node_count(),
        "tree": p.tree,
        "bags": p.bags.iter().map(|b| b.iter().map(|v| v.0).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "adhesion": p.adhesion(),
    })
}

fn run_degeneracy(a: &DegeneracyArgs) -> Run {
    let g = load_graph(&a.common.graph)?;
    let d = edge_degeneracy_with(&g, a.speed, opts(&a.common))?;
    let mut out = Out::new(a.common.format);
    out.emit(
        &format!("delta={}\n", d.value),
        json!({"record": "degeneracy", "speed": a.speed.to_string(), "delta": d.value}),
    );
    out.emit(&d.layout.to_text(), layout_record(&d.layout));
    if let Some(path) = &a.layout_out {
        write_text(path, &d.layout.to_text())?;
    }
    if let Some(h) = &d.hideout {
        out.emit(&h.to_text(), hideout_record(h));
        if let Some(path) = &a.hideout_out {
            write_text(path, &h.to_text())?;
        }
    }
    out.flush();
    Ok(Status::Ok)
}

fn run_hideout(a: &CheckArgs) -> Run {
    let g = load_graph(&a.common.graph)?;
    let h = maximal_hideout_with(&g, a.speed, a.k, opts(&a.common))?;
    let mut out = Out::new(a.common.format);
    out.emit(&h.to_text(), hideout_record(&h));
    out.flush();
    Ok(if h.is_empty() { Status::False } else { Status::Ok })
}

fn run_layout(a: &LayoutArgs) -> Run {
    let g = load_graph(&a.common.graph)?;
    let mut out = Out::new(a.common.format);
    let status = match a.k {
        None => {
            let d = edge_degeneracy_with(&g, a.speed, opts(&a.common))?;
            out.emit(&d.layout.to_text(), layout_record(&d.layout));
            Status::Ok
        }
        Some(k) => match check_degeneracy_with(&g, a.speed, k, opts(&a.common))? {
            DegeneracyVerdict::Layout(l) => {
                out.emit(&l.to_text(), layout_record(&l));
                Status::Ok
            }
            DegeneracyVerdict::HideOut(h) => {
                out.emit(&h.to_text(), hideout_record(&h));
                Status::False
            }
        },
    };
    out.flush();
    Ok(status)
}

fn run_play(a: &PlayArgs) -> Run {
    let g = load_graph(&a.common.graph)?;
    let d = edge_degeneracy_with(&g, a.speed, opts(&a.common))?;
    let budget = a.budget.unwrap_or(d.value);
    let full = edgeadm::game::cop_from_layout(&g, &d.layout)?;
    let cop = CopStrategy::new(
        &g,
        g.vertices()
            .map(|v| (v, full.block(v).into_iter().take(budget).collect()))
            .collect(),
    )?;
    let haven = maximal_hideout_with(&g, a.speed, budget + 1, opts(&a.common))?;
    let kind = a.robber.unwrap_or(if haven.is_empty() {
        RobberKind::Adversary
    } else {
        RobberKind::Hideout
    });
    let robber: Box<dyn EscapeRule> = match kind {
        RobberKind::Hideout if haven.is_empty() => {
            return Err(Failure::Rejected(format!(
                "no ({}, {})-edge-hide-out for a hide-out robber",
                budget + 1,
                a.speed
            )))
        }
        RobberKind::Hideout => {
            let policy = match a.policy {
                Policy::Move => OverBudget::MoveIfPossible,
                Policy::Concede => OverBudget::Concede,
            };
            Box::new(robber_from_hideout(&g, &haven, policy)?)
        }
        RobberKind::Adversary => Box::new(AdversarialRobber::new(&g, a.speed, &cop)),
    };
    let rounds = a.max_rounds.unwrap_or(10 * g.vertex_count().max(1));
    let game = play(&g, a.speed, &cop, robber.as_ref(), rounds)?;
    game.validate(&g, &cop)?;
    let mut out = Out::new(a.common.format);
    out.text = game.trace();
    out.records = game_records(&game);
    out.flush();
    Ok(match game.outcome {
        Outcome::Fault { .. } => Status::False,
        _ => Status::Ok,
    })
}

fn game_records(game: &GameScenario) -> Vec<Value> {
    let mut records: Vec<Value> = game
        .rounds
        .iter()
        .enumerate()
        .map(|(i, r)| {
            json!({
                "record": "round",
                "round": i + 1,
                "blocked": r.blocked.iter().map(|e| e.0).collect::<Vec<_>>(),
                "robber": r.position.0,
            })
        })
        .collect();
    let outcome = match game.outcome {
        Outcome::Captured { round } => json!({"record": "outcome", "outcome": "captured", "round": round}),
        Outcome::Evaded { rounds } => json!({"record": "outcome", "outcome": "evaded", "round": rounds}),
        Outcome::Fault { round, vertex } => {
            json!({"record": "outcome", "outcome": "fault", "round": round, "vertex": vertex.0})
        }
    };
    records.push(outcome);
    records
}

fn run_immersion(a: &KArgs) -> Run {
    let g = load_graph(&a.common.graph)?;
    let mut out = Out::new(a.common.format);
    let status = match theta_free(&g, a.k)? {
        ThetaCheck::Free(_) => {
            out.emit(
                &format!("theta_free k={}\n", a.k),
                json!({"record": "theta_free", "k": a.k}),
            );
            Status::Ok
        }
        ThetaCheck::Witness(w) => {
            out.emit(&w.to_text(), witness_record(&w));
            Status::False
        }
    };
    out.flush();
    Ok(status)
}

fn run_decompose(a: &KArgs) -> Run {
    let g = load_graph(&a.common.graph)?;
    let mut out = Out::new(a.common.format);
    let status = match decompose(&g, a.k)? {
        Decomposition::Partition(p) => {
            out.emit(&p.to_text(), partition_record(&p));
            Status::Ok
        }
        Decomposition::Witness(w) => {
            out.emit(&w.to_text(), witness_record(&w));
            Status::False
        }
    };
    out.flush();
    Ok(status)
}

fn run_compose(a: &ComposeArgs) -> Run {
    let g = load_graph(&a.common.graph)?;
    let p = TreePartition::parse(g.clone(), &read_text(&a.partition)?)?;
    let back = recompose(&p)?;
    let exact = back.vertex_set() == g.vertex_set() && back.edges().eq(g.edges());
    let iso = exact || is_isomorphic_small(&back, &g)?;
    let (dense, _) = back.relabel_dense();
    let mut out = Out::new(a.common.format);
    out.emit(
        &format!("{}# isomorphic to input: {iso}\n", dense.to_graph_file()?),
        json!({
            "record": "composed",
            "vertices": back.vertex_count(),
            "edges": back.edge_count(),
            "identical": exact,
            "isomorphic": iso,
        }),
    );
    out.flush();
    Ok(if iso { Status::Ok } else { Status::False })
}

fn run_gadget(a: &GadgetArgs) -> Run {
    let g = load_graph(&a.common.graph)?;
    let inst = gadget(&g, VertexId(a.a), VertexId(a.b), a.k, a.speed)?;
    let mut out = Out::new(a.common.format);
    if !a.check {
        let mut text = inst.graph.to_graph_file()?;
        for (v, name) in &inst.names {
            text.push_str(&format!("# role {v} {name}\n"));
        }
        out.emit(
            &text,
            json!({
                "record": "gadget",
                "n": inst.graph.vertex_count(),
                "edges": inst.graph.edges().map(|(_, e)| [e.lo.0, e.hi.0]).collect::<Vec<_>>(),
                "roles": inst.names.iter().map(|(v, n)| (v.to_string(), Value::from(n.as_str()))).collect::<serde_json::Map<_, _>>(),
            }),
        );
        out.flush();
        return Ok(Status::Ok);
    }
    let s = Speed::finite(a.speed)?;
    let bound = a.k + g.vertex_count();
    let cut = min_s_cut_with(&g, inst.input_a, inst.input_b, s, None, opts(&a.common))?
        .expect("unbounded query")
        .size();
    let small = check_degeneracy_with(&inst.graph, s, bound, opts(&a.common))?
        .layout()
        .is_some();
    let holds = small == (cut <= a.k);
    out.emit(
        &format!(
            "cut={cut}\ndegeneracy_at_most_{bound}={small}\nequivalence={}\n",
            if holds { "holds" } else { "fails" }
        ),
        json!({"record": "gadget_check", "cut": cut, "bound": bound, "degeneracy_within_bound": small, "holds": holds}),
    );
    out.flush();
    Ok(if holds { Status::Ok } else { Status::False })
}

fn run_gen(a: &GenArgs) -> Run {
    let graph = generate(&a.spec)?.graph;
    print!("# {}\n{}", a.spec, graph.to_graph_file()?);
    Ok(Status::Ok)
}

fn reject(reason: impl Into<String>) -> Run {
    Err(Failure::Rejected(reason.into()))
}

fn check_speed(want: Option<Speed>, got: Speed) -> Result<(), Failure> {
    match want {
        Some(s) if s != got => Err(Failure::Rejected(format!(
            "certificate speed {got} differs from requested {s}"
        ))),
        _ => Ok(()),
    }
}

/// Certificate errors become rejections; anything else stays an error.
fn as_verdict(r: edgeadm::Result<()>) -> Result<(), Failure> {
    match r {
        Ok(()) => Ok(()),
        Err(e @ (Error::BudgetExceeded(_) | Error::SizeBudget { .. } | Error::IterationCap(_))) => {
            Err(Failure::Lib(e))
        }
        Err(e) => Err(Failure::Rejected(e.to_string())),
    }
}

fn run_verify(a: &VerifyArgs) -> Run {
    let g = load_graph(&a.common.graph)?;
    let what;
    if let Some(path) = &a.layout {
        what = "layout";
        let (layout, k) = as_verdict_value(parse_layout(&read_text(path)?))?;
        check_speed(a.speed, layout.speed)?;
        if k != layout.degeneracy() {
            return reject(format!("header k={k} but largest support is {}", layout.degeneracy()));
        }
        as_verdict(verify_layout(&g, &layout, Some(a.k.unwrap_or(k))))?;
    } else if let Some(path) = &a.hideout {
        what = "hideout";
        let h = as_verdict_value(parse_hideout(&read_text(path)?))?;
        check_speed(a.speed, h.speed)?;
        if let Some(k) = a.k {
            if k != h.k {
                return reject(format!("header k={} differs from requested {k}", h.k));
            }
        }
        if h.is_empty() {
            return reject("empty hide-out");
        }
        as_verdict(if a.maximal {
            verify_maximal_hideout(&g, &h)
        } else {
            verify_hideout(&g, &h)
        })?;
    } else if let Some(path) = &a.witness {
        what = "witness";
        let w = as_verdict_value(ImmersionWitness::parse(&read_text(path)?))?;
        let k = a.k.unwrap_or(w.order().saturating_sub(1));
        as_verdict(w.verify(&g, k))?;
    } else if let Some(path) = &a.partition {
        what = "partition";
        let p = as_verdict_value(TreePartition::parse(g.clone(), &read_text(path)?))?;
        if let Some(k) = a.k {
            if p.adhesion() > k {
                return reject(format!("adhesion {} exceeds {k}", p.adhesion()));
            }
            for t in 0..p.node_count() {
                if !is_almost_bounded(&p.torso(t)?.graph, k) {
                    return reject(format!("torso {t} has two vertices of degree above {k}"));
                }
            }
        }
    } else {
        unreachable!("clap requires one certificate");
    }
    let mut out = Out::new(a.common.format);
    out.emit(
        &format!("accepted {what}\n"),
        json!({"record": "verdict", "certificate": what, "accepted": true}),
    );
    out.flush();
    Ok(Status::Ok)
}

fn as_verdict_value<T>(r: edgeadm::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Rejected(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match &cli.command {
        Command::Degeneracy(a) => a.common.format,
        Command::Hideout(a) => a.common.format,
        Command::Layout(a) => a.common.format,
        Command::Play(a) => a.common.format,
        Command::Immersion(a) | Command::Decompose(a) => a.common.format,
        Command::Compose(a) => a.common.format,
        Command::Gadget(a) => a.common.format,
        Command::Verify(a) => a.common.format,
        Command::Gen(_) => Format::Text,
    };
    let result = match &cli.command {
        Command::Degeneracy(a) => run_degeneracy(a),
        Command::Hideout(a) => run_hideout(a),
        Command::Layout(a) => run_layout(a),
        Command::Play(a) => run_play(a),
        Command::Immersion(a) => run_immersion(a),
        Command::Decompose(a) => run_decompose(a),
        Command::Compose(a) => run_compose(a),
        Command::Gadget(a) => run_gadget(a),
        Command::Gen(a) => run_gen(a),
        Command::Verify(a) => run_verify(a),
    };
    let status = match result {
        Ok(s) => s,
        Err(Failure::Rejected(reason)) => {
            if format == Format::JsonLines {
                println!("{}", json!({"record": "verdict", "accepted": false, "reason": reason}));
            } else {
                println!("rejected: {reason}");
            }
            Status::False
        }
        Err(Failure::Io(path, e)) => {
            eprintln!("edgeadm: {}: {e}", path.display());
            Status::Usage
        }
        Err(Failure::Lib(e)) => {
            eprintln!("edgeadm: {e}");
            match e {
                Error::BudgetExceeded(_) | Error::SizeBudget { .. } | Error::IterationCap(_) => Status::Budget,
                _ => Status::Usage,
            }
        }
    };
    ExitCode::from(status as u8)
}
