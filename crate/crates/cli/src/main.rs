//! `tsys`: exact computations and identity checks for the A_r T-system.

mod seed;
mod verify;

use std::fmt::Display;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tsys_core::hardparticle::{build_g, config_weights, enumerate_configs, partition_z};
use tsys_core::pathmodel::{build_gamma, t1_via_paths, t_alpha_via_lgv, Edge, EdgeWeight, MotzkinWeights, PathGraph, PathModel, Vertex};
use tsys_core::quiver::{ClusterSeed, QuiverNode};
use tsys_core::wronskian::{conserved_c, conserved_d};
use tsys_core::{Error, LatticeState, LaurentPoly, Ring, SeedSpec};

use seed::{Lattice, SeedArgs};
use verify::{Params, Record, Suite};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Identity(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InternalMismatch(_) | Error::NotDivisible => Failure::Identity(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "tsys", version, about = "Exact computations for the A_r T-system")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate T[alpha,j,k] from a seed.
    Evolve {
        #[arg(long, allow_hyphen_values = true)]
        alpha: i32,
        #[arg(long, allow_hyphen_values = true)]
        j: i32,
        #[arg(long, allow_hyphen_values = true)]
        k: i32,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Run identity checks and print a JSON array of results.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[command(flatten)]
        opts: VerifyArgs,
    },
    /// The conserved quantity c_m(j) (or d_m(j) with --reflected).
    Conserved {
        #[arg(long, allow_hyphen_values = true)]
        m: i32,
        #[arg(long, allow_hyphen_values = true)]
        j: i32,
        #[arg(long)]
        reflected: bool,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Hard-particle configurations on G_r and their partition function.
    HardParticle {
        #[arg(long, allow_hyphen_values = true)]
        m: i32,
        #[arg(long, allow_hyphen_values = true)]
        j: i32,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        k: i32,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// T[alpha,j,k] from path partition functions, with a positivity verdict.
    Paths {
        #[arg(long, default_value_t = 1)]
        alpha: i32,
        #[arg(long, allow_hyphen_values = true)]
        j: i32,
        #[arg(long)]
        k: i32,
        /// Also dump the path graph.
        #[arg(long)]
        graph: bool,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Apply a mutation sequence to the fundamental exchange matrix.
    Mutate {
        #[arg(long)]
        r: usize,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
        window: Vec<i32>,
        /// Nodes such as `(1,0) (b2,3)`; `b` marks a barred node.
        #[arg(long, default_value = "")]
        sequence: String,
        /// Include frozen coefficient rows.
        #[arg(long)]
        coefficients: bool,
    },
    /// Operator-series lemmas and the A_2 fixtures.
    FractionCheck {
        #[command(flatten)]
        opts: VerifyArgs,
    },
}

#[derive(Args, Clone, Copy)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long, default_value_t = 3)]
    kmax: i32,
    #[arg(long, default_value_t = 8)]
    order: i32,
    #[arg(long, default_value_t = 1)]
    rng_seed: u64,
}

impl VerifyArgs {
    fn params(&self) -> Result<Params, Failure> {
        if self.r == 0 || self.r > 6 {
            return Err(Failure::Usage(format!("--r {} outside 1..=6", self.r)));
        }
        if self.kmax < 0 || self.order < 1 {
            return Err(Failure::Usage("--kmax must be >= 0 and --order >= 1".into()));
        }
        Ok(Params { r: self.r, kmax: self.kmax, order: self.order, rng_seed: self.rng_seed })
    }
}

/// Writes one block to stdout; a closed pipe is not an error.
fn out(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn emit(json: bool, value: Value, text: impl FnOnce() -> String) {
    if json {
        out(&serde_json::to_string_pretty(&value).expect("json"));
    } else {
        out(&text());
    }
}

fn with_lattice<T>(
    l: &Lattice,
    sym: impl FnOnce(&LatticeState<LaurentPoly>) -> Result<T, Failure>,
    num: impl FnOnce(&LatticeState<num_rational::BigRational>) -> Result<T, Failure>,
) -> Result<T, Failure> {
    match l {
        Lattice::Symbolic(s) => sym(s),
        Lattice::Numeric(s) => num(s),
    }
}

fn cmd_evolve(json: bool, alpha: i32, j: i32, k: i32, seed: &SeedArgs) -> Result<(), Failure> {
    let l = seed.load(1, |r, m| SeedSpec::window_for(r, m, j, k.abs(), 1))?;
    let value = with_lattice(&l, |s| Ok(s.evolve(alpha, j, k)?.to_string()), |s| Ok(s.evolve(alpha, j, k)?.to_string()))?;
    emit(json, json!({"alpha": alpha, "j": j, "k": k, "value": value}), || value.clone());
    Ok(())
}

fn cmd_conserved(json: bool, m: i32, j: i32, reflected: bool, seed: &SeedArgs) -> Result<(), Failure> {
    let l = seed.load(1, |r, mp| SeedSpec::window_for(r, mp, j, 2 * r as i32 + 4, 1))?;
    fn get<V: Ring>(s: &LatticeState<V>, m: i32, j: i32, reflected: bool) -> Result<String, Failure> {
        if !s.motzkin().is_zero() {
            return Err(Failure::Usage("conserved quantities are read on the fundamental seed".into()));
        }
        Ok(if reflected { conserved_d(s, m, j)? } else { conserved_c(s, m, j)? }.to_string())
    }
    let value = with_lattice(&l, |s| get(s, m, j, reflected), |s| get(s, m, j, reflected))?;
    let name = if reflected { "d" } else { "c" };
    emit(json, json!({"quantity": name, "m": m, "j": j, "value": value}), || value.clone());
    Ok(())
}

fn cmd_hard(json: bool, m: i32, j: i32, k: i32, seed: &SeedArgs) -> Result<(), Failure> {
    let l = seed.load(1, |r, mp| SeedSpec::window_for(r, mp, j, k.abs() + 2 * r as i32 + 4, 1))?;
    let r = l.spec().r as i32;
    if m < 0 {
        return Err(Failure::Usage("--m must be >= 0".into()));
    }
    let g = build_g(r);
    let configs = enumerate_configs(&g, m as usize);
    let weights = config_weights(&g, m as usize, j);
    let render = |w: &[(i32, i32)]| w.iter().map(|(i, t)| format!("y{i}({t},{k})")).collect::<Vec<_>>().join(" ");
    let z = with_lattice(&l, |s| Ok(partition_z(s, r, m, j, k)?.to_string()), |s| Ok(partition_z(s, r, m, j, k)?.to_string()))?;
    let list: Vec<Value> = configs.iter().zip(&weights).map(|(c, w)| json!({"vertices": c, "weight": render(w)})).collect();
    emit(json, json!({"r": r, "m": m, "j": j, "k": k, "configurations": list, "partition_function": z}), || {
        let mut s = format!("{} configurations\n", configs.len());
        for (c, w) in configs.iter().zip(&weights) {
            s += &format!("{c:?}  {}\n", render(w));
        }
        s + &format!("Z = {z}")
    });
    Ok(())
}

fn vertex_json(v: Vertex) -> Value {
    match v {
        Vertex::Spine(h) => json!({"spine": h}),
        Vertex::Pendant(h) => json!({"pendant": h}),
    }
}

fn edge_json(e: &Edge) -> Value {
    let w = match e.weight {
        EdgeWeight::One => json!("1"),
        EdgeWeight::Skeleton(l) => json!(format!("y{l}")),
        EdgeWeight::Long { from, to } => json!(format!("long {from}->{to}")),
    };
    json!({"src": vertex_json(e.src), "dst": vertex_json(e.dst), "shift": e.shift, "weight": w})
}

fn graph_json(g: &PathGraph) -> Value {
    json!({
        "vertices": g.vertices().iter().map(|&v| vertex_json(v)).collect::<Vec<_>>(),
        "edges": g.edges().iter().map(edge_json).collect::<Vec<_>>(),
    })
}

fn cmd_paths(json: bool, alpha: i32, j: i32, k: i32, graph: bool, seed: &SeedArgs) -> Result<(), Failure> {
    let l = seed.load(1, |r, m| SeedSpec::window_for(r, m, j, k.abs() + 2 * r as i32 + 4, 2))?;
    let st = match &l {
        Lattice::Symbolic(s) => s,
        Lattice::Numeric(_) => return Err(Failure::Usage("paths works on symbolic seeds".into())),
    };
    let m = st.motzkin().clone();
    let g = build_gamma(&m)?;
    let value = if m.is_zero() {
        t_alpha_via_lgv(st, alpha, j, k)?
    } else {
        if alpha != 1 {
            return Err(Failure::Usage("on a Motzkin seed only --alpha 1 is supported".into()));
        }
        let model = PathModel::new(&g, MotzkinWeights { state: st, motzkin: m.clone() });
        t1_via_paths(st, &model, j, k - m.m(1), m.m(1))?
    };
    let evolved = st.evolve(alpha, j, k)?;
    let matches = value == evolved;
    let positive = value.is_positive();
    let mut out = json!({"alpha": alpha, "j": j, "k": k, "value": value.to_string(), "positive": positive, "matches_evolve": matches});
    if graph {
        out["graph"] = graph_json(&g);
    }
    emit(json, out.clone(), || {
        let mut s = format!("{value}\npositive: {positive}\nmatches evolve: {matches}");
        if graph {
            s += &format!("\n{}", serde_json::to_string(&out["graph"]).expect("json"));
        }
        s
    });
    if !matches {
        return Err(Failure::Identity("path value differs from evolve".into()));
    }
    Ok(())
}

fn parse_sequence(s: &str) -> Result<Vec<QuiverNode>, Failure> {
    let bad = |t: &str| Failure::Usage(format!("cannot parse node {t:?}; expected (a,j) or (ba,j)"));
    let mut out = Vec::new();
    for tok in s.split(')').map(str::trim).filter(|t| !t.is_empty()) {
        let body = tok.strip_prefix('(').ok_or_else(|| bad(tok))?;
        let (a, j) = body.split_once(',').ok_or_else(|| bad(tok))?;
        let (a, j) = (a.trim(), j.trim());
        let (barred, a) = match a.strip_prefix('b') {
            Some(rest) => (true, rest),
            None => (false, a),
        };
        let alpha: i32 = a.parse().map_err(|_| bad(tok))?;
        let j: i32 = j.parse().map_err(|_| bad(tok))?;
        out.push(if barred { QuiverNode::Barred { alpha, j } } else { QuiverNode::Unbarred { alpha, j } });
    }
    Ok(out)
}

fn cmd_mutate(json: bool, r: usize, window: &[i32], sequence: &str, coefficients: bool) -> Result<(), Failure> {
    let window = (window[0], window[1]);
    let seq = parse_sequence(sequence)?;
    let st = LatticeState::symbolic(SeedSpec::fundamental(r, window)?);
    let q = coefficients.then(LaurentPoly::one);
    let mut seed = ClusterSeed::fundamental(&st, window, q)?;
    let mut exchanged = Vec::new();
    for &n in &seq {
        seed = seed.mutate(n)?;
        exchanged.push((n, seed.vars[&n].to_string()));
    }
    let b = &seed.matrix;
    let rows: Vec<Value> = b
        .nodes()
        .iter()
        .map(|&row| {
            let entries: Vec<Value> = b
                .mutable_nodes()
                .iter()
                .filter_map(|&col| b.get(row, col).filter(|&x| x != 0).map(|x| json!([col.to_string(), x])))
                .collect();
            json!({"node": row.to_string(), "entries": entries})
        })
        .collect();
    let ex: Vec<Value> = exchanged.iter().map(|(n, v)| json!({"node": n.to_string(), "value": v})).collect();
    emit(json, json!({"r": r, "window": [window.0, window.1], "matrix": rows, "exchanged": ex}), || {
        let mut s = b.to_string();
        for (n, v) in &exchanged {
            s += &format!("x{n} = {v}\n");
        }
        s.trim_end().to_string()
    });
    Ok(())
}

fn print_records(records: &[Record]) -> Result<(), Failure> {
    out(&serde_json::to_string_pretty(records).expect("json"));
    let failed = records.iter().filter(|r| !r.ok).count();
    if failed > 0 {
        return Err(Failure::Identity(format!("{failed} of {} checks failed", records.len())));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Evolve { alpha, j, k, seed } => cmd_evolve(cli.json, *alpha, *j, *k, seed),
        Command::Verify { suite, opts } => print_records(&verify::run(*suite, &opts.params()?)),
        Command::Conserved { m, j, reflected, seed } => cmd_conserved(cli.json, *m, *j, *reflected, seed),
        Command::HardParticle { m, j, k, seed } => cmd_hard(cli.json, *m, *j, *k, seed),
        Command::Paths { alpha, j, k, graph, seed } => cmd_paths(cli.json, *alpha, *j, *k, *graph, seed),
        Command::Mutate { r, window, sequence, coefficients } => cmd_mutate(cli.json, *r, window, sequence, *coefficients),
        Command::FractionCheck { opts } => print_records(&verify::run(Suite::Fractions, &opts.params()?)),
    }
}

fn report(e: &impl Display) {
    eprintln!("tsys: {e}");
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Identity(msg)) => {
            report(&msg);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            report(&msg);
            ExitCode::from(2)
        }
    }
}
