//! Command line front end. Every verb reads JSON files, runs one library
//! operation and prints a deterministic JSON (or plain text) report.
//!
//! Exit codes: 0 when a verdict was computed (including "invalid" and
//! "none"), 1 on an internal failure, 2 on malformed input, 3 when a search
//! ran out of budget.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::fixtures;
use crate::galois::FieldSpec;
use crate::index::{self, check_decoder, IndexCode, IndexInstance, LinearIndexCode};
use crate::io::{
    read_json, subset_to_file, to_json, IndexCodeFile, InstanceFile, IoError, MatroidFile, NetworkCodeFile, NetworkFile,
    RepresentationFile, VerdictFile,
};
use crate::matroid::{search_representation_scalar, verify_representation, AxiomReport, Matroid, MatroidError, RepReport};
use crate::netcode::{self, NetworkCode, NetworkInstance};
use crate::reduce::{self, ClientOrigin, IndexReduction, MatroidIndexOptions, MatroidNetworkOptions, NetworkReduction, ReduceError};
use crate::solve::{self, Evidence, MinIndexStatus, SearchBudget, SearchOptions, SolveError, Status};

#[derive(Debug, Parser)]
#[command(name = "indexcoding", version, about = "Index coding, network coding and matroid representation toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for randomized decoder checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of search candidates.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Maximum search time in seconds.
    #[arg(long, global = true)]
    pub max_seconds: Option<f64>,
    /// Worker threads for searches.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the rank axioms of a matroid and count bases and circuits.
    Axioms { matroid: PathBuf },
    /// Compute mu of an index coding instance.
    Mu { instance: PathBuf },
    /// Verify an index code against an instance.
    VerifyIndex {
        instance: PathBuf,
        code: PathBuf,
        /// Also apply each decoder to this many random source vectors.
        #[arg(long, default_value_t = 0)]
        trials: usize,
    },
    /// Verify a network code against a network.
    VerifyNet { network: PathBuf, code: PathBuf },
    /// Verify a (multi)linear representation of a matroid.
    VerifyRep { matroid: PathBuf, representation: PathBuf },
    /// Build one object from another.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Carry a code or representation across a reduction.
    #[command(subcommand)]
    Transport(TransportCmd),
    /// Exhaustive searches.
    #[command(subcommand)]
    Solve(SolveCmd),
    /// List shipped fixtures, or check one and optionally write its files.
    Fixture {
        name: Option<String>,
        /// Directory to write the fixture's JSON files into.
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Collect bounds on the linear rate of an instance.
    Report {
        instance: PathBuf,
        /// Index code files giving upper bounds.
        #[arg(long = "code")]
        codes: Vec<PathBuf>,
        /// Minimum-length searches, as n:q.
        #[arg(long = "search", value_parser = parse_nq)]
        searches: Vec<(usize, u32)>,
        /// Network the instance was reduced from.
        #[arg(long)]
        network: Option<PathBuf>,
        /// Network code searches on `--network`, as n:q.
        #[arg(long = "network-search", value_parser = parse_nq)]
        network_searches: Vec<(usize, u32)>,
        /// Matroid the instance was reduced from.
        #[arg(long)]
        matroid: Option<PathBuf>,
        /// Scalar representation searches on `--matroid`, by field order.
        #[arg(long = "scalar-search")]
        scalar_searches: Vec<u32>,
    },
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Block length.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Field order.
    #[arg(long, default_value_t = 2)]
    pub q: u32,
}

#[derive(Debug, Subcommand)]
pub enum ReduceCmd {
    /// Network to index coding instance.
    Net2idx {
        network: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Matroid to index coding instance.
    Mat2idx {
        matroid: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
        /// Use only circuits of size at most rank + 1.
        #[arg(long)]
        small_circuits: bool,
    },
    /// Index coding instance to network with `c` bottleneck edges.
    Idx2net {
        instance: PathBuf,
        #[arg(long)]
        c: usize,
    },
    /// Matroid to network.
    Mat2net {
        matroid: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        small_circuits: bool,
        /// Feed every source straight into every relay.
        #[arg(long)]
        direct_feeds: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum TransportCmd {
    /// Network code to an index code for the network's instance.
    Net2idx { network: PathBuf, code: PathBuf },
    /// Perfect linear index code for the network's instance to a network code.
    Idx2net {
        network: PathBuf,
        code: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Representation to a perfect index code for the matroid's instance.
    Rep2idx { matroid: PathBuf, representation: PathBuf },
    /// Perfect linear index code for the matroid's instance to a representation.
    Idx2rep {
        matroid: PathBuf,
        code: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum SolveCmd {
    /// Shortest linear index code, or a single length with `--c`.
    Index {
        instance: PathBuf,
        #[arg(long)]
        c: Option<usize>,
        /// Block length (defaults to the instance's).
        #[arg(long)]
        n: Option<usize>,
        /// Field order (defaults to the instance's).
        #[arg(long)]
        q: Option<u32>,
    },
    /// Linear network code at the given block length and field.
    Net {
        network: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Scalar linear representation over the given field.
    Rep {
        matroid: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: u32,
    },
}

fn parse_nq(s: &str) -> Result<(usize, u32), String> {
    let (n, q) = s.split_once(':').ok_or_else(|| format!("expected n:q, got {s:?}"))?;
    let n = n.parse().map_err(|_| format!("bad block length {n:?}"))?;
    let q = q.parse().map_err(|_| format!("bad field order {q:?}"))?;
    Ok((n, q))
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Malformed(String),
    Internal(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Malformed(e.to_string())
    }
}

impl From<crate::index::IndexError> for Failure {
    fn from(e: crate::index::IndexError) -> Self {
        Failure::Malformed(e.to_string())
    }
}

impl From<crate::netcode::NetError> for Failure {
    fn from(e: crate::netcode::NetError) -> Self {
        Failure::Malformed(e.to_string())
    }
}

impl From<crate::galois::GaloisError> for Failure {
    fn from(e: crate::galois::GaloisError) -> Self {
        Failure::Malformed(e.to_string())
    }
}

impl From<MatroidError> for Failure {
    fn from(e: MatroidError) -> Self {
        Failure::Malformed(e.to_string())
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Integrity(s) => Failure::Internal(s),
            other => Failure::Malformed(other.to_string()),
        }
    }
}

impl From<ReduceError> for Failure {
    fn from(e: ReduceError) -> Self {
        Failure::Malformed(e.to_string())
    }
}

struct Report {
    value: Value,
    inconclusive: bool,
}

impl Report {
    fn done(value: Value) -> Result<Report, Failure> {
        Ok(Report {
            value,
            inconclusive: false,
        })
    }
}

fn value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable value")
}

/// Parses arguments and runs one command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Output {
    match dispatch(cli) {
        Ok(report) => Output {
            code: if report.inconclusive { 3 } else { 0 },
            stdout: match cli.global.format {
                Format::Json => to_json(&report.value),
                Format::Text => render_text(&report.value),
            },
            stderr: String::new(),
        },
        Err(Failure::Malformed(msg)) => Output {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Internal(msg)) => Output {
            code: 1,
            stdout: String::new(),
            stderr: format!("internal error: {msg}\n"),
        },
    }
}

fn options(g: &GlobalArgs) -> SearchOptions {
    let mut budget = SearchBudget::default();
    if let Some(b) = g.budget {
        budget.max_candidates = Some(b);
    }
    if let Some(s) = g.max_seconds {
        budget.max_seconds = Some(s);
    }
    SearchOptions {
        budget,
        threads: g.threads,
    }
}

fn field_of(q: u32) -> Result<FieldSpec, Failure> {
    Ok(FieldSpec::with_order(q)?)
}

fn load_instance(p: &Path) -> Result<IndexInstance, Failure> {
    Ok(read_json::<InstanceFile>(p)?.instance()?)
}

fn load_network(p: &Path) -> Result<NetworkInstance, Failure> {
    Ok(read_json::<NetworkFile>(p)?.network()?)
}

fn load_matroid(p: &Path) -> Result<Matroid, Failure> {
    Ok(read_json::<MatroidFile>(p)?.matroid()?)
}

fn load_index_code(p: &Path, inst: &IndexInstance) -> Result<(IndexInstance, IndexCode), Failure> {
    Ok(read_json::<IndexCodeFile>(p)?.code(inst)?)
}

fn linear_only(code: IndexCode) -> Result<LinearIndexCode, Failure> {
    match code {
        IndexCode::Linear(l) => Ok(l),
        IndexCode::Table(_) => Err(Failure::Malformed("this command needs a linear code (\"L\")".into())),
    }
}

/// Field and block length for a code file that may omit them.
fn code_params(p: &Path, fallback: &FieldArgs) -> Result<(FieldSpec, usize), Failure> {
    let f = read_json::<IndexCodeFile>(p)?;
    let field = match f.field {
        Some(ff) => ff.spec()?,
        None => field_of(fallback.q)?,
    };
    Ok((field, f.n.unwrap_or(fallback.n)))
}

fn ratio(r: num_rational::Ratio<u64>) -> String {
    r.to_string()
}

fn network_labels(net: &NetworkInstance) -> Vec<String> {
    (0..net.k())
        .map(|i| format!("x{}", i + 1))
        .chain((0..net.m()).map(|e| format!("y{}", net.original_index(e) + 1)))
        .collect()
}

fn describe_origin(origin: &ClientOrigin, net: Option<&NetworkInstance>) -> String {
    let edge = |e: usize| net.map_or(e, |n| n.original_index(e)) + 1;
    let set = |s: &[usize]| {
        let v: Vec<String> = s.iter().map(|e| (e + 1).to_string()).collect();
        format!("{{{}}}", v.join(","))
    };
    match origin {
        ClientOrigin::NetInput { edge: e } => format!("input edge {}: x from y", edge(*e)),
        ClientOrigin::NetInputEcho { edge: e } => format!("input edge {}: y from x", edge(*e)),
        ClientOrigin::NetRelay { edge: e } => format!("edge {}: y from parents", edge(*e)),
        ClientOrigin::NetOutput { edge: e } => format!("output edge {}: demand from y", edge(*e)),
        ClientOrigin::NetFromSources { edge: e } => format!("edge {}: y from all x", edge(*e)),
        ClientOrigin::MatBasis { basis, message } => format!("basis {} decodes x{}", set(basis), message + 1),
        ClientOrigin::MatCircuit { circuit, element } => format!("circuit {} decodes y{}", set(circuit), element + 1),
        ClientOrigin::MatFromSources { element } => format!("y{} from all x", element + 1),
    }
}

fn client_label(inst: &IndexInstance, labels: &[String], i: usize) -> String {
    let c = &inst.clients()[i];
    let side: Vec<&str> = c.side.iter().map(|&s| labels[s].as_str()).collect();
    format!("({}, {{{}}})", labels[c.demand], side.join(","))
}

fn index_reduction_json(red: &IndexReduction, net: Option<&NetworkInstance>) -> Value {
    let labels = match net {
        Some(n) => network_labels(n),
        None => red.labels.clone(),
    };
    let trace: Vec<Value> = red
        .origins
        .iter()
        .enumerate()
        .map(|(i, o)| {
            json!({
                "client": i + 1,
                "rule": o.rule(),
                "client_label": client_label(&red.instance, &labels, i),
                "source": describe_origin(o, net),
            })
        })
        .collect();
    let merged: Vec<Value> = red
        .merged
        .iter()
        .map(|m| json!({"rule": m.origin.rule(), "source": describe_origin(&m.origin, net), "into": m.into + 1}))
        .collect();
    json!({
        "instance": value(&InstanceFile::of(&red.instance)),
        "messages": labels,
        "mu": red.instance.mu(),
        "trace": trace,
        "merged": merged,
    })
}

fn network_reduction_json(red: &NetworkReduction) -> Value {
    let net = &red.network;
    let roles: Vec<Value> = (0..net.m())
        .map(|old| {
            let e = net.index_of_original(old);
            let mut v = value(&red.roles[e]);
            if let Value::Object(map) = &mut v {
                for key in ["message", "client", "bottleneck", "index"] {
                    if let Some(Value::Number(x)) = map.get(key) {
                        let x = x.as_u64().expect("index") + 1;
                        map.insert(key.to_string(), json!(x));
                    }
                }
                map.insert("edge".into(), json!(old + 1));
            }
            v
        })
        .collect();
    json!({
        "network": value(&NetworkFile::of(net)),
        "bottlenecks": red.bottlenecks,
        "roles": roles,
    })
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Axioms { matroid } => {
            let m = load_matroid(matroid)?;
            let report = m.check_axioms()?;
            let mut v = json!({"m": m.m(), "rank": m.full_rank()});
            match report {
                AxiomReport::Pass => {
                    v["axioms"] = json!("pass");
                    v["bases"] = json!(m.bases().len());
                    v["circuits"] = json!(m.circuits().len());
                }
                AxiomReport::Violation { axiom, a, b } => {
                    v["axioms"] = json!("violation");
                    v["axiom"] = json!(axiom.to_string());
                    v["a"] = json!(subset_to_file(a));
                    v["b"] = json!(subset_to_file(b));
                }
            }
            Report::done(v)
        }
        Command::Mu { instance } => {
            let inst = load_instance(instance)?;
            Report::done(json!({"k": inst.k(), "clients": inst.clients().len(), "mu": inst.mu()}))
        }
        Command::VerifyIndex { instance, code, trials } => {
            let base = load_instance(instance)?;
            let (inst, code) = load_index_code(code, &base)?;
            let mut v = json!({
                "n": inst.n(),
                "c": code.c(),
                "rate": ratio(code.rate()),
                "mu": inst.mu(),
            });
            match &code {
                IndexCode::Linear(l) => {
                    let rep = index::verify_linear(&inst, l)?;
                    v["valid"] = json!(rep.valid);
                    v["failing_client"] = json!(rep.first_failure().map(|c| c + 1));
                    if *trials > 0 && rep.valid {
                        let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
                        let mut ok = true;
                        for (i, cv) in rep.clients.iter().enumerate() {
                            let d = cv.decoder.as_ref().expect("valid code has decoders");
                            ok &= check_decoder(&inst, l, i, d, *trials, &mut rng)?;
                        }
                        v["decoders_checked"] = json!(ok);
                    }
                }
                IndexCode::Table(t) => {
                    let rep = index::verify_table(&inst, t)?;
                    v["valid"] = json!(rep.valid);
                    v["failing_client"] = json!(rep.counterexample.as_ref().map(|c| c.client + 1));
                }
            }
            if v["valid"] == json!(true) {
                v["perfect"] = json!(index::is_perfect(&inst, &code)?);
            }
            Report::done(v)
        }
        Command::VerifyNet { network, code } => {
            let net = load_network(network)?;
            let code = read_json::<NetworkCodeFile>(code)?.code(&net)?;
            let rep = netcode::verify(&net, &code)?;
            let failures: Vec<Value> = rep
                .failures
                .iter()
                .map(|f| json!({"edge": net.original_index(f.edge) + 1, "condition": f.condition}))
                .collect();
            Report::done(json!({"valid": rep.valid, "failures": failures}))
        }
        Command::VerifyRep { matroid, representation } => {
            let m = load_matroid(matroid)?;
            let rep = read_json::<RepresentationFile>(representation)?.representation()?;
            let v = match verify_representation(&m, &rep)? {
                RepReport::Pass => json!({"valid": true, "n": rep.n, "subsets": 1u64 << m.m()}),
                RepReport::Fail { subset, expected, actual } => json!({
                    "valid": false,
                    "n": rep.n,
                    "subset": subset_to_file(subset),
                    "expected_rank": expected,
                    "actual_rank": actual,
                }),
            };
            Report::done(v)
        }
        Command::Reduce(cmd) => reduce_cmd(cmd),
        Command::Transport(cmd) => transport_cmd(cmd),
        Command::Solve(cmd) => solve_cmd(cmd, g),
        Command::Fixture { name, write } => fixture_cmd(name.as_deref(), write.as_deref()),
        Command::Report {
            instance,
            codes,
            searches,
            network,
            network_searches,
            matroid,
            scalar_searches,
        } => {
            let inst = load_instance(instance)?;
            let opts = options(g);
            let mut evidence = Vec::new();
            let mut inconclusive = false;
            for c in codes {
                let (_, code) = load_index_code(c, &inst)?;
                evidence.push(Evidence::Code(linear_only(code)?));
            }
            for &(n, q) in searches {
                let field = field_of(q)?;
                let at = inst.with_params(&field, n)?;
                let result = solve::min_linear_index(&at, &opts)?;
                inconclusive |= matches!(result.status, MinIndexStatus::Inconclusive { .. });
                evidence.push(Evidence::MinSearch { field, n, result });
            }
            if !network_searches.is_empty() {
                let Some(path) = network else {
                    return Err(Failure::Malformed("--network-search needs --network".into()));
                };
                let net = load_network(path)?;
                for &(n, q) in network_searches {
                    let field = field_of(q)?;
                    let red = reduce::net_to_index(&net, &field, n)?;
                    if red.instance.clients() != inst.clients() || red.instance.k() != inst.k() {
                        return Err(Failure::Malformed("instance is not the reduction of --network".into()));
                    }
                    let r = solve::search_network_code(&net, &field, n, &opts)?;
                    match r.status {
                        Status::Found => {
                            let code = NetworkCode::Linear(r.code.expect("found code"));
                            let idx = reduce::transport_net_to_index(&net, &code, &red)?;
                            evidence.push(Evidence::Code(linear_only(idx)?));
                        }
                        Status::None => evidence.push(Evidence::NoPerfectViaNetwork {
                            field,
                            n,
                            visited: r.visited,
                        }),
                        Status::Inconclusive => inconclusive = true,
                    }
                }
            }
            if !scalar_searches.is_empty() {
                let Some(path) = matroid else {
                    return Err(Failure::Malformed("--scalar-search needs --matroid".into()));
                };
                let m = load_matroid(path)?;
                for &q in scalar_searches {
                    let field = field_of(q)?;
                    let red = reduce::matroid_to_index(&m, &field, 1, MatroidIndexOptions::default())?;
                    if red.instance.clients() != inst.clients() || red.instance.k() != inst.k() {
                        return Err(Failure::Malformed("instance is not the reduction of --matroid".into()));
                    }
                    match search_representation_scalar(&m, &field, &opts) {
                        Ok(s) => match s.representation {
                            Some(rep) => {
                                let (code, _) = reduce::transport_rep_to_index(&m, &rep, &red)?;
                                evidence.push(Evidence::Code(code));
                            }
                            None => evidence.push(Evidence::NoPerfectViaRepresentation {
                                field,
                                visited: s.visited,
                            }),
                        },
                        Err(MatroidError::Budget { .. }) => inconclusive = true,
                        Err(e) => return Err(e.into()),
                    }
                }
            }
            let name = instance.file_stem().map_or("instance".into(), |s| s.to_string_lossy().into_owned());
            let report = solve::rate_report(&name, &inst, &evidence)?;
            Ok(Report {
                value: value(&report),
                inconclusive,
            })
        }
    }
}

fn reduce_cmd(cmd: &ReduceCmd) -> Result<Report, Failure> {
    match cmd {
        ReduceCmd::Net2idx { network, field } => {
            let net = load_network(network)?;
            let red = reduce::net_to_index(&net, &field_of(field.q)?, field.n)?;
            Report::done(index_reduction_json(&red, Some(&net)))
        }
        ReduceCmd::Mat2idx {
            matroid,
            field,
            small_circuits,
        } => {
            let m = load_matroid(matroid)?;
            let opts = MatroidIndexOptions {
                small_circuits_only: *small_circuits,
            };
            let red = reduce::matroid_to_index(&m, &field_of(field.q)?, field.n, opts)?;
            Report::done(index_reduction_json(&red, None))
        }
        ReduceCmd::Idx2net { instance, c } => {
            let inst = load_instance(instance)?;
            let red = reduce::index_to_network(&inst, *c)?;
            Report::done(network_reduction_json(&red))
        }
        ReduceCmd::Mat2net {
            matroid,
            field,
            small_circuits,
            direct_feeds,
        } => {
            let m = load_matroid(matroid)?;
            let opts = MatroidNetworkOptions {
                index: MatroidIndexOptions {
                    small_circuits_only: *small_circuits,
                },
                direct_feeds: *direct_feeds,
            };
            let (net, idx) = reduce::matroid_to_network(&m, &field_of(field.q)?, field.n, opts)?;
            let mut v = network_reduction_json(&net);
            v["index"] = index_reduction_json(&idx, None);
            Report::done(v)
        }
    }
}

/// Transport failures caused by the input code are verdicts, not errors.
fn transport_verdict(r: Result<Value, ReduceError>) -> Result<Report, Failure> {
    match r {
        Ok(v) => Report::done(v),
        Err(
            e @ (ReduceError::InvalidInput(_)
            | ReduceError::NotPerfect { .. }
            | ReduceError::SingularNormalizer { .. }
            | ReduceError::ClientFails { .. }),
        ) => Report::done(json!({"ok": false, "error": e.to_string()})),
        Err(e) => Err(e.into()),
    }
}

fn transport_cmd(cmd: &TransportCmd) -> Result<Report, Failure> {
    match cmd {
        TransportCmd::Net2idx { network, code } => {
            let net = load_network(network)?;
            let code = read_json::<NetworkCodeFile>(code)?.code(&net)?;
            let (field, n) = match &code {
                NetworkCode::Linear(c) => (c.field.clone(), c.n),
                NetworkCode::Table(c) => (c.field.clone(), c.n),
            };
            let red = reduce::net_to_index(&net, &field, n)?;
            transport_verdict(reduce::transport_net_to_index(&net, &code, &red).map(|idx| {
                json!({
                    "ok": true,
                    "instance": value(&InstanceFile::of(&red.instance)),
                    "code": value(&IndexCodeFile::of(&idx)),
                    "perfect": idx.c() == red.instance.mu() * n,
                })
            }))
        }
        TransportCmd::Idx2net { network, code, field } => {
            let net = load_network(network)?;
            let (f, n) = code_params(code, field)?;
            let red = reduce::net_to_index(&net, &f, n)?;
            let (_, idx) = load_index_code(code, &red.instance)?;
            let idx = linear_only(idx)?;
            transport_verdict(reduce::transport_index_to_net(&net, &red, &idx).map(|c| {
                json!({"ok": true, "code": value(&NetworkCodeFile::of(&net, &NetworkCode::Linear(c)))})
            }))
        }
        TransportCmd::Rep2idx { matroid, representation } => {
            let m = load_matroid(matroid)?;
            let rep = read_json::<RepresentationFile>(representation)?.representation()?;
            let red = reduce::matroid_to_index(&m, &rep.field, rep.n, MatroidIndexOptions::default())?;
            transport_verdict(reduce::transport_rep_to_index(&m, &rep, &red).map(|(code, _)| {
                json!({
                    "ok": true,
                    "instance": value(&InstanceFile::of(&red.instance)),
                    "code": value(&IndexCodeFile::of_linear(&code)),
                    "perfect": code.c == red.instance.mu() * rep.n,
                })
            }))
        }
        TransportCmd::Idx2rep { matroid, code, field } => {
            let m = load_matroid(matroid)?;
            let (f, n) = code_params(code, field)?;
            let red = reduce::matroid_to_index(&m, &f, n, MatroidIndexOptions::default())?;
            let (_, idx) = load_index_code(code, &red.instance)?;
            let idx = linear_only(idx)?;
            transport_verdict(
                reduce::transport_index_to_rep(&m, &red, &idx)
                    .map(|rep| json!({"ok": true, "representation": value(&RepresentationFile::of(&rep))})),
            )
        }
    }
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Found => "found",
        Status::None => "none",
        Status::Inconclusive => "inconclusive",
    }
}

fn solve_cmd(cmd: &SolveCmd, g: &GlobalArgs) -> Result<Report, Failure> {
    let opts = options(g);
    let (verdict, inconclusive) = match cmd {
        SolveCmd::Index { instance, c, n, q } => {
            let base = load_instance(instance)?;
            let field = match q {
                Some(q) => field_of(*q)?,
                None => base.field().clone(),
            };
            let inst = base.with_params(&field, n.unwrap_or(base.n()))?;
            match c {
                Some(c) => {
                    let r = solve::search_index_code(&inst, *c, &opts)?;
                    let v = VerdictFile {
                        status: status_str(r.status).into(),
                        c: Some(*c),
                        witness: r.witness.as_ref().map(|w| value(&IndexCodeFile::of_linear(w))),
                        visited: r.visited,
                    };
                    (value(&v), r.status == Status::Inconclusive)
                }
                None => {
                    let r = solve::min_linear_index(&inst, &opts)?;
                    let levels: Vec<Value> = r
                        .levels
                        .iter()
                        .map(|l| json!({"c": l.c, "status": status_str(l.status), "visited": l.visited}))
                        .collect();
                    let (v, inc) = match &r.status {
                        MinIndexStatus::Found { c, code } => (
                            VerdictFile {
                                status: "found".into(),
                                c: Some(*c),
                                witness: Some(value(&IndexCodeFile::of_linear(code))),
                                visited: r.visited,
                            },
                            false,
                        ),
                        MinIndexStatus::Inconclusive { c_reached } => (
                            VerdictFile {
                                status: "inconclusive".into(),
                                c: Some(*c_reached),
                                witness: None,
                                visited: r.visited,
                            },
                            true,
                        ),
                    };
                    let mut v = value(&v);
                    v["mu"] = json!(inst.mu());
                    v["levels"] = json!(levels);
                    (v, inc)
                }
            }
        }
        SolveCmd::Net { network, field } => {
            let net = load_network(network)?;
            let r = solve::search_network_code(&net, &field_of(field.q)?, field.n, &opts)?;
            let v = VerdictFile {
                status: status_str(r.status).into(),
                c: None,
                witness: r
                    .code
                    .map(|c| value(&NetworkCodeFile::of(&net, &NetworkCode::Linear(c)))),
                visited: r.visited,
            };
            (value(&v), r.status == Status::Inconclusive)
        }
        SolveCmd::Rep { matroid, q } => {
            let m = load_matroid(matroid)?;
            match search_representation_scalar(&m, &field_of(*q)?, &opts) {
                Ok(s) => {
                    let found = s.representation.is_some();
                    let v = VerdictFile {
                        status: if found { "found" } else { "none" }.into(),
                        c: None,
                        witness: s.representation.as_ref().map(|r| value(&RepresentationFile::of(r))),
                        visited: s.visited,
                    };
                    (value(&v), false)
                }
                Err(MatroidError::Budget { visited }) => (
                    value(&VerdictFile {
                        status: "inconclusive".into(),
                        c: None,
                        witness: None,
                        visited,
                    }),
                    true,
                ),
                Err(e) => return Err(e.into()),
            }
        }
    };
    Ok(Report {
        value: verdict,
        inconclusive,
    })
}

fn fixture_cmd(name: Option<&str>, write: Option<&Path>) -> Result<Report, Failure> {
    let Some(name) = name else {
        return Report::done(json!({"fixtures": fixtures::NAMES}));
    };
    let fx = fixtures::get(name).map_err(|e| Failure::Malformed(e.to_string()))?;
    let verdicts = fx.verdicts();
    let pass = verdicts.iter().all(|v| v.pass);
    if let Some(dir) = write {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Malformed(format!("cannot create {}: {e}", dir.display())))?;
        for stem in &fx.files {
            let path = dir.join(format!("{stem}.json"));
            std::fs::write(&path, fixtures::file(stem).expect("shipped file"))
                .map_err(|e| Failure::Malformed(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    if !pass {
        return Err(Failure::Internal(format!("fixture {name} fails its verdicts")));
    }
    Report::done(json!({
        "fixture": fx.name,
        "files": fx.files.iter().map(|s| format!("{s}.json")).collect::<Vec<_>>(),
        "verdicts": value(&verdicts),
        "pass": pass,
    }))
}

/// Flattens a JSON value into `path: value` lines.
pub fn render_text(v: &Value) -> String {
    fn walk(v: &Value, path: &str, out: &mut String) {
        let scalar_array = |a: &[Value]| a.iter().all(|x| !x.is_object() && !x.is_array());
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                    walk(x, &p, out);
                }
            }
            Value::Array(a) if !scalar_array(a) => {
                for (i, x) in a.iter().enumerate() {
                    walk(x, &format!("{path}[{}]", i + 1), out);
                }
            }
            Value::String(s) => out.push_str(&format!("{path}: {s}\n")),
            other => out.push_str(&format!("{path}: {other}\n")),
        }
    }
    let mut out = String::new();
    walk(v, "", &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_dir() -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        for (stem, text) in fixtures::FILES {
            std::fs::write(dir.path().join(format!("{stem}.json")), text).unwrap();
        }
        dir
    }

    fn call(args: &[&str]) -> (i32, Value) {
        let mut full = vec!["indexcoding"];
        full.extend(args);
        let out = run(full);
        let v = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
        (out.code, v)
    }

    #[test]
    fn verify_index_butterfly() {
        let d = fixture_dir();
        let p = |s: &str| d.path().join(s).to_string_lossy().into_owned();
        let (code, v) = call(&["verify-index", &p("butterfly-index.json"), &p("butterfly-code.json"), "--trials", "10"]);
        assert_eq!(code, 0);
        assert_eq!(v["valid"], json!(true));
        assert_eq!(v["rate"], json!("2"));
        assert_eq!(v["mu"], json!(1));
        assert_eq!(v["decoders_checked"], json!(true));
    }

    #[test]
    fn parse_nq_forms() {
        assert_eq!(parse_nq("2:3"), Ok((2, 3)));
        assert!(parse_nq("2").is_err());
    }

    #[test]
    fn text_rendering() {
        let t = render_text(&json!({"a": 1, "b": {"c": [1, 2]}, "d": [{"e": "x"}]}));
        assert_eq!(t, "a: 1\nb.c: [1,2]\nd[1].e: x\n");
    }
}
