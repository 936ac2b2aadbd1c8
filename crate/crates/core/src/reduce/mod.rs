//! Reductions between network coding, matroid representation and index
//! coding, plus the constructive code transports along them.
//!
//! Every reduction returns the produced object together with a trace that
//! tags each produced client or edge with the construction rule that made
//! it.

use serde::Serialize;
use thiserror::Error;

use crate::femat::MatrixError;
use crate::galois::FieldSpec;
use crate::index::{Client, IndexError, IndexInstance};
use crate::matroid::{elements, Matroid, MatroidError};
use crate::netcode::{Edge, NetError, NetworkInstance};

mod transport;

pub use transport::*;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("objects do not correspond: {0}")]
    Mismatch(String),
    #[error("input code is invalid: {0}")]
    InvalidInput(String),
    #[error("code is not perfect: length {c}, a perfect code has length {expected}")]
    NotPerfect { c: usize, expected: usize },
    #[error("normalizing block matrix is singular (rank {rank} of {size}); client {client} ({rule}) cannot decode")]
    SingularNormalizer {
        rank: usize,
        size: usize,
        client: usize,
        rule: &'static str,
    },
    #[error("client {client} ({rule}) cannot decode: {detail}")]
    ClientFails {
        client: usize,
        rule: &'static str,
        detail: String,
    },
}

/// Which rule produced a client of a reduced index instance. Edge and
/// element indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule")]
pub enum ClientOrigin {
    /// Input edge `edge`: demand `x`, knowing `y` of that edge.
    #[serde(rename = "R1")]
    NetInput { edge: usize },
    /// Input edge `edge`: demand its `y`, knowing its `x`.
    #[serde(rename = "R2")]
    NetInputEcho { edge: usize },
    /// Non-input edge: demand its `y`, knowing the `y` of its parents.
    #[serde(rename = "R3")]
    NetRelay { edge: usize },
    /// Output edge: demand the message it must deliver, knowing its `y`.
    #[serde(rename = "R4")]
    NetOutput { edge: usize },
    /// Any edge: demand its `y`, knowing every `x`.
    #[serde(rename = "R5")]
    NetFromSources { edge: usize },
    /// Basis `basis` and message `x_{message}`.
    #[serde(rename = "R1")]
    MatBasis { basis: Vec<usize>, message: usize },
    /// Circuit `circuit`, demanding `y_{element}`.
    #[serde(rename = "R2")]
    MatCircuit { circuit: Vec<usize>, element: usize },
    /// Demand `y_{element}`, knowing every `x`.
    #[serde(rename = "R3")]
    MatFromSources { element: usize },
}

impl ClientOrigin {
    pub fn rule(&self) -> &'static str {
        match self {
            ClientOrigin::NetInput { .. } | ClientOrigin::MatBasis { .. } => "R1",
            ClientOrigin::NetInputEcho { .. } | ClientOrigin::MatCircuit { .. } => "R2",
            ClientOrigin::NetRelay { .. } | ClientOrigin::MatFromSources { .. } => "R3",
            ClientOrigin::NetOutput { .. } => "R4",
            ClientOrigin::NetFromSources { .. } => "R5",
        }
    }
}

/// A produced client that duplicated an earlier one and was merged into it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MergedClient {
    pub origin: ClientOrigin,
    pub into: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexReduction {
    pub instance: IndexInstance,
    /// Origin of each client, aligned with `instance.clients()`.
    pub origins: Vec<ClientOrigin>,
    pub merged: Vec<MergedClient>,
    /// Human-readable message names, e.g. `x1`, `y3`.
    pub labels: Vec<String>,
}

impl IndexReduction {
    /// Index of the first client with the given demand and side set.
    pub fn find_client(&self, demand: usize, side: &[usize]) -> Option<usize> {
        let target = Client::new(demand, side.iter().copied());
        self.instance.clients().iter().position(|c| *c == target)
    }
}

struct ClientCollector {
    clients: Vec<Client>,
    origins: Vec<ClientOrigin>,
    merged: Vec<MergedClient>,
    seen: std::collections::HashMap<Client, usize>,
}

impl ClientCollector {
    fn new() -> Self {
        ClientCollector {
            clients: Vec::new(),
            origins: Vec::new(),
            merged: Vec::new(),
            seen: Default::default(),
        }
    }

    fn push(&mut self, client: Client, origin: ClientOrigin) {
        match self.seen.get(&client) {
            Some(&into) => self.merged.push(MergedClient { origin, into }),
            None => {
                self.seen.insert(client.clone(), self.clients.len());
                self.clients.push(client);
                self.origins.push(origin);
            }
        }
    }
}

/// The index instance of a network: messages `x_1..x_k` (indices `0..k`)
/// followed by one message `y_i` per edge (indices `k..k+m`), with the five
/// client families. Duplicate clients are merged.
pub fn net_to_index(network: &NetworkInstance, field: &FieldSpec, n: usize) -> Result<IndexReduction, ReduceError> {
    let k = network.k();
    let m = network.m();
    let x = |i: usize| i;
    let y = |e: usize| k + e;
    let mut col = ClientCollector::new();
    for e in 0..k {
        col.push(Client::new(x(e), [y(e)]), ClientOrigin::NetInput { edge: e });
    }
    for e in 0..k {
        col.push(Client::new(y(e), [x(e)]), ClientOrigin::NetInputEcho { edge: e });
    }
    for e in k..m {
        let side = network.parents(e).iter().map(|&p| y(p));
        col.push(Client::new(y(e), side), ClientOrigin::NetRelay { edge: e });
    }
    for (&e, &d) in network.outputs().iter().zip(network.delta()) {
        col.push(Client::new(x(d), [y(e)]), ClientOrigin::NetOutput { edge: e });
    }
    for e in 0..m {
        col.push(Client::new(y(e), 0..k), ClientOrigin::NetFromSources { edge: e });
    }
    let labels = (0..k)
        .map(|i| format!("x{}", i + 1))
        .chain((0..m).map(|e| format!("y{}", e + 1)))
        .collect();
    Ok(IndexReduction {
        instance: IndexInstance::new(field, n, k + m, col.clients)?,
        origins: col.origins,
        merged: col.merged,
        labels,
    })
}

/// Options for [`matroid_to_index`].
#[derive(Debug, Clone, Copy, Default)]
pub struct MatroidIndexOptions {
    /// Use only circuits with at most `rank + 1` elements in the circuit
    /// family. All circuits are used by default.
    pub small_circuits_only: bool,
}

/// The index instance of a matroid: one message `y_i` per ground element
/// (indices `0..m`) followed by `x_1..x_k` for `k = rank` (indices
/// `m..m+k`).
pub fn matroid_to_index(
    matroid: &Matroid,
    field: &FieldSpec,
    n: usize,
    opts: MatroidIndexOptions,
) -> Result<IndexReduction, ReduceError> {
    matroid.require_axioms()?;
    let m = matroid.m();
    let k = matroid.full_rank();
    let mut col = ClientCollector::new();
    for b in matroid.bases() {
        let basis = elements(b);
        for i in 0..k {
            col.push(
                Client::new(m + i, basis.iter().copied()),
                ClientOrigin::MatBasis {
                    basis: basis.clone(),
                    message: i,
                },
            );
        }
    }
    for c in matroid.circuits() {
        let circuit = elements(c);
        if opts.small_circuits_only && circuit.len() > k + 1 {
            continue;
        }
        for &y in &circuit {
            col.push(
                Client::new(y, circuit.iter().copied().filter(|&z| z != y)),
                ClientOrigin::MatCircuit {
                    circuit: circuit.clone(),
                    element: y,
                },
            );
        }
    }
    for y in 0..m {
        col.push(Client::new(y, m..m + k), ClientOrigin::MatFromSources { element: y });
    }
    let labels = (0..m)
        .map(|i| format!("y{}", i + 1))
        .chain((0..k).map(|i| format!("x{}", i + 1)))
        .collect();
    Ok(IndexReduction {
        instance: IndexInstance::new(field, n, m + k, col.clients)?,
        origins: col.origins,
        merged: col.merged,
        labels,
    })
}

/// Role of an edge in a broadcast-style network built from an index
/// instance. Indices are 0-based; `client` indexes the instance's clients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "role")]
pub enum EdgeRole {
    /// Input edge of message `message`.
    Input { message: usize },
    /// Carries message `message` from its source node towards the sender
    /// side; `bottleneck` is set when the sender is split per bottleneck.
    SenderFeed {
        message: usize,
        bottleneck: Option<usize>,
    },
    /// The `index`-th broadcast channel use.
    Bottleneck { index: usize },
    /// Copy of bottleneck `bottleneck` delivered to client `client`.
    Broadcast { bottleneck: usize, client: usize },
    /// Side-information edge bringing message `message` to client `client`.
    SideInfo { message: usize, client: usize },
    /// Direct edge from a source node to the relay of bottleneck `bottleneck`.
    DirectFeed { message: usize, bottleneck: usize },
    /// Output edge of client `client`.
    Output { client: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkReduction {
    pub network: NetworkInstance,
    /// Role of each edge, indexed by the network's (re-indexed) edge order.
    pub roles: Vec<EdgeRole>,
    /// The index instance whose clients the network serves.
    pub instance: IndexInstance,
    /// Number of bottleneck edges.
    pub bottlenecks: usize,
}

impl NetworkReduction {
    pub fn edges_with_role(&self, pred: impl Fn(&EdgeRole) -> bool) -> Vec<usize> {
        (0..self.roles.len()).filter(|&e| pred(&self.roles[e])).collect()
    }

    /// Bottleneck edges in channel-use order.
    pub fn bottleneck_edges(&self) -> Vec<usize> {
        let mut b: Vec<(usize, usize)> = (0..self.roles.len())
            .filter_map(|e| match self.roles[e] {
                EdgeRole::Bottleneck { index } => Some((index, e)),
                _ => None,
            })
            .collect();
        b.sort_unstable();
        b.into_iter().map(|(_, e)| e).collect()
    }
}

fn assemble(
    nodes: usize,
    edges: Vec<(Edge, EdgeRole)>,
    instance: &IndexInstance,
    bottlenecks: usize,
) -> Result<NetworkReduction, ReduceError> {
    let inputs: Vec<usize> = (0..instance.k()).collect();
    let mut outputs = Vec::new();
    let mut delta = Vec::new();
    for (i, (_, role)) in edges.iter().enumerate() {
        if let EdgeRole::Output { client } = role {
            outputs.push(i);
            delta.push(instance.clients()[*client].demand);
        }
    }
    let (plain, roles_orig): (Vec<Edge>, Vec<EdgeRole>) = edges.into_iter().unzip();
    let network = NetworkInstance::new(nodes, plain, inputs, outputs, delta)?;
    let roles = (0..network.m())
        .map(|e| roles_orig[network.original_index(e)])
        .collect();
    Ok(NetworkReduction {
        network,
        roles,
        instance: instance.clone(),
        bottlenecks,
    })
}

/// The network of an index instance with a broadcast channel of `c` uses.
///
/// Each message `i` has a source node `σ_i` fed by its input edge. Every
/// `σ_i` feeds the sender `s`; `s` has `c` bottleneck edges, the `j`-th
/// ending at relay `t_j`. Each client node `v_ρ` receives one edge from
/// every relay, one edge from `σ_z` for each `z` in its side information,
/// and has an output edge demanding its message.
pub fn index_to_network(instance: &IndexInstance, c: usize) -> Result<NetworkReduction, ReduceError> {
    if c == 0 {
        return Err(ReduceError::Mismatch("need at least one bottleneck edge".into()));
    }
    let k = instance.k();
    let sender = k;
    let relay = |j: usize| k + 1 + j;
    let client_node = |r: usize| k + 1 + c + r;
    let nodes = k + 1 + c + instance.clients().len();
    let mut edges = Vec::new();
    for i in 0..k {
        edges.push((Edge::input(i), EdgeRole::Input { message: i }));
    }
    for i in 0..k {
        edges.push((
            Edge::internal(i, sender),
            EdgeRole::SenderFeed {
                message: i,
                bottleneck: None,
            },
        ));
    }
    for j in 0..c {
        edges.push((Edge::internal(sender, relay(j)), EdgeRole::Bottleneck { index: j }));
    }
    for (r, cl) in instance.clients().iter().enumerate() {
        for j in 0..c {
            edges.push((
                Edge::internal(relay(j), client_node(r)),
                EdgeRole::Broadcast {
                    bottleneck: j,
                    client: r,
                },
            ));
        }
        for &z in &cl.side {
            edges.push((
                Edge::internal(z, client_node(r)),
                EdgeRole::SideInfo { message: z, client: r },
            ));
        }
        edges.push((Edge::output(client_node(r)), EdgeRole::Output { client: r }));
    }
    assemble(nodes, edges, instance, c)
}

/// Options for [`matroid_to_network`].
#[derive(Debug, Clone, Copy, Default)]
pub struct MatroidNetworkOptions {
    pub index: MatroidIndexOptions,
    /// Also add an edge from every source node to every second-layer relay.
    /// Those edges let every relay see all messages, which makes the network
    /// solvable regardless of the matroid; off by default.
    pub direct_feeds: bool,
}

/// The six-layer network of a matroid, built on its index instance: source
/// nodes `s_z` (one per message), first-layer relays `n'_j` fed by every
/// source, bottleneck edges `n'_j → n''_j` (one per ground element), and a
/// client node per client fed by every `n''_j` and by the sources of its
/// side information.
pub fn matroid_to_network(
    matroid: &Matroid,
    field: &FieldSpec,
    n: usize,
    opts: MatroidNetworkOptions,
) -> Result<(NetworkReduction, IndexReduction), ReduceError> {
    let red = matroid_to_index(matroid, field, n, opts.index)?;
    let instance = &red.instance;
    let m = matroid.m();
    let z = instance.k();
    let first = |j: usize| z + j;
    let second = |j: usize| z + m + j;
    let client_node = |r: usize| z + 2 * m + r;
    let nodes = z + 2 * m + instance.clients().len();
    let mut edges = Vec::new();
    for i in 0..z {
        edges.push((Edge::input(i), EdgeRole::Input { message: i }));
    }
    for i in 0..z {
        for j in 0..m {
            edges.push((
                Edge::internal(i, first(j)),
                EdgeRole::SenderFeed {
                    message: i,
                    bottleneck: Some(j),
                },
            ));
        }
    }
    if opts.direct_feeds {
        for i in 0..z {
            for j in 0..m {
                edges.push((
                    Edge::internal(i, second(j)),
                    EdgeRole::DirectFeed {
                        message: i,
                        bottleneck: j,
                    },
                ));
            }
        }
    }
    for j in 0..m {
        edges.push((Edge::internal(first(j), second(j)), EdgeRole::Bottleneck { index: j }));
    }
    for (r, cl) in instance.clients().iter().enumerate() {
        for j in 0..m {
            edges.push((
                Edge::internal(second(j), client_node(r)),
                EdgeRole::Broadcast {
                    bottleneck: j,
                    client: r,
                },
            ));
        }
        for &h in &cl.side {
            edges.push((
                Edge::internal(h, client_node(r)),
                EdgeRole::SideInfo { message: h, client: r },
            ));
        }
        edges.push((Edge::output(client_node(r)), EdgeRole::Output { client: r }));
    }
    Ok((assemble(nodes, edges, instance, m)?, red))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcode::Edge;

    fn gf2() -> FieldSpec {
        FieldSpec::new(2, 1).unwrap()
    }

    #[test]
    fn single_edge_network() {
        let net = NetworkInstance::new(0, vec![Edge::new(None, None)], vec![0], vec![0], vec![0]).unwrap();
        let red = net_to_index(&net, &gf2(), 1).unwrap();
        assert_eq!(red.instance.k(), 2);
        assert_eq!(red.instance.clients(), &[Client::new(0, [1]), Client::new(1, [0])]);
        assert_eq!(red.merged.len(), 2);
        assert_eq!(red.instance.mu(), 1);
    }

    #[test]
    fn u23_index_counts() {
        let u = Matroid::uniform(2, 3).unwrap();
        let red = matroid_to_index(&u, &gf2(), 1, Default::default()).unwrap();
        assert_eq!(red.instance.k(), 5);
        let count = |r: &str| red.origins.iter().filter(|o| o.rule() == r).count();
        assert_eq!((count("R1"), count("R2"), count("R3")), (6, 3, 3));
        assert_eq!(red.instance.mu(), 3);
    }

    #[test]
    fn free_matroid_has_no_circuit_clients() {
        let f = Matroid::free(2).unwrap();
        let red = matroid_to_index(&f, &gf2(), 1, Default::default()).unwrap();
        assert!(red.origins.iter().all(|o| o.rule() != "R2"));
    }

    #[test]
    fn invalid_matroid_is_rejected() {
        let bad = Matroid::from_ranks(1, vec![0, 2]).unwrap();
        assert!(matches!(
            matroid_to_index(&bad, &gf2(), 1, Default::default()),
            Err(ReduceError::Matroid(MatroidError::Axiom { .. }))
        ));
    }

    #[test]
    fn u23_network_counts() {
        let u = Matroid::uniform(2, 3).unwrap();
        let (net, red) = matroid_to_network(&u, &gf2(), 1, Default::default()).unwrap();
        assert_eq!(red.instance.clients().len(), 12);
        assert_eq!(net.bottlenecks, 3);
        let clients = net.edges_with_role(|r| matches!(r, EdgeRole::Output { .. }));
        assert_eq!(clients.len(), 12);
        // 5 sources, 3 + 3 relays, 12 client nodes.
        assert_eq!(net.network.nodes(), 5 + 6 + 12);
    }

    #[test]
    fn index_to_network_shape() {
        let inst = IndexInstance::new(&gf2(), 1, 1, vec![Client::new(0, [])]).unwrap();
        let red = index_to_network(&inst, 1).unwrap();
        // input, sender feed, bottleneck, broadcast, output.
        assert_eq!(red.network.m(), 5);
        assert_eq!(red.bottleneck_edges().len(), 1);
        assert!(index_to_network(&inst, 0).is_err());
    }
}
