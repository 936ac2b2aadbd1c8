//! Network coding on directed acyclic graphs with dangling input and output
//! edges, and verification of codes against the input, output and
//! local-encoding conditions.
//!
//! Edges are re-indexed on construction: input edges first (in the order
//! given), then internal edges in a stable topological order, then output
//! edges (in the order given). Edge order is therefore a topological order.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::femat::{FeMatrix, MatrixError};
use crate::galois::FieldSpec;
use crate::index::{selector, source_vector, table_domain, IndexError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetError {
    #[error("malformed network: {0}")]
    Network(String),
    #[error("code does not fit the network: {0}")]
    Shape(String),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// An edge from `tail` to `head`. A missing tail marks an input edge, a
/// missing head an output edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: Option<usize>,
    pub head: Option<usize>,
}

impl Edge {
    pub fn new(tail: Option<usize>, head: Option<usize>) -> Edge {
        Edge { tail, head }
    }

    pub fn internal(tail: usize, head: usize) -> Edge {
        Edge::new(Some(tail), Some(head))
    }

    pub fn input(head: usize) -> Edge {
        Edge::new(None, Some(head))
    }

    pub fn output(tail: usize) -> Edge {
        Edge::new(Some(tail), None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkInstance {
    nodes: usize,
    edges: Vec<Edge>,
    k: usize,
    outputs: Vec<usize>,
    /// `delta[i]` is the input (message) demanded at `outputs[i]`.
    delta: Vec<usize>,
    parents: Vec<Vec<usize>>,
    /// `original[e]` is the caller's index of edge `e`.
    original: Vec<usize>,
}

impl NetworkInstance {
    /// Builds and validates a network. `inputs` and `outputs` list edge
    /// indices into `edges`; `delta` maps each output edge (by position in
    /// `outputs`) to an input (by position in `inputs`).
    pub fn new(
        nodes: usize,
        edges: Vec<Edge>,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        delta: Vec<usize>,
    ) -> Result<NetworkInstance, NetError> {
        let bad = |s: String| Err(NetError::Network(s));
        let m = edges.len();
        for (i, e) in edges.iter().enumerate() {
            if e.tail.is_some_and(|v| v >= nodes) || e.head.is_some_and(|v| v >= nodes) {
                return bad(format!("edge {} touches a node outside 1..{nodes}", i + 1));
            }
        }
        let input_set: BTreeSet<usize> = inputs.iter().copied().collect();
        let output_set: BTreeSet<usize> = outputs.iter().copied().collect();
        if input_set.len() != inputs.len() || output_set.len() != outputs.len() {
            return bad("repeated input or output edge".into());
        }
        for (i, e) in edges.iter().enumerate() {
            if e.tail.is_none() != input_set.contains(&i) {
                return bad(format!(
                    "edge {} must be listed as an input exactly when it has no tail",
                    i + 1
                ));
            }
            if e.head.is_none() != output_set.contains(&i) {
                return bad(format!(
                    "edge {} must be listed as an output exactly when it has no head",
                    i + 1
                ));
            }
        }
        if delta.len() != outputs.len() {
            return bad("demand must be given for every output edge".into());
        }
        if delta.iter().any(|&d| d >= inputs.len()) {
            return bad("demand refers to an unknown input".into());
        }
        let demanded: BTreeSet<usize> = delta.iter().copied().collect();
        if demanded.len() != inputs.len() {
            return bad("every input must be demanded by some output".into());
        }

        // Kahn's algorithm on nodes, smallest node first, to order internal edges.
        let mut indeg = vec![0usize; nodes];
        let mut out_adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
        for (i, e) in edges.iter().enumerate() {
            if let (Some(t), Some(h)) = (e.tail, e.head) {
                indeg[h] += 1;
                out_adj[t].push(i);
            }
        }
        let mut ready: BTreeSet<usize> = (0..nodes).filter(|&v| indeg[v] == 0).collect();
        let mut node_rank = vec![usize::MAX; nodes];
        let mut next = 0;
        while let Some(v) = ready.pop_first() {
            node_rank[v] = next;
            next += 1;
            for &i in &out_adj[v] {
                let h = edges[i].head.unwrap();
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    ready.insert(h);
                }
            }
        }
        if next != nodes {
            return bad("graph has a cycle".into());
        }
        let mut internal: Vec<usize> = (0..m)
            .filter(|&i| edges[i].tail.is_some() && edges[i].head.is_some())
            .collect();
        internal.sort_by_key(|&i| (node_rank[edges[i].tail.unwrap()], i));

        let mut order: Vec<usize> = inputs.clone();
        order.extend(&internal);
        order.extend(outputs.iter().filter(|o| !input_set.contains(o)));
        let mut new_index = vec![0usize; m];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let new_edges: Vec<Edge> = order.iter().map(|&i| edges[i]).collect();
        let new_outputs: Vec<usize> = outputs.iter().map(|&o| new_index[o]).collect();

        let mut into: Vec<Vec<usize>> = vec![Vec::new(); nodes];
        for (i, e) in new_edges.iter().enumerate() {
            if let Some(h) = e.head {
                into[h].push(i);
            }
        }
        let k = inputs.len();
        let mut parents = Vec::with_capacity(m);
        for (i, e) in new_edges.iter().enumerate() {
            let p = match e.tail {
                None => Vec::new(),
                Some(t) => into[t].clone(),
            };
            if i >= k && p.is_empty() {
                return bad(format!(
                    "edge {} leaves a node with no incoming edges",
                    order[i] + 1
                ));
            }
            parents.push(p);
        }
        Ok(NetworkInstance {
            nodes,
            edges: new_edges,
            k,
            outputs: new_outputs,
            delta,
            parents,
            original: order,
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Number of edges `m`.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Number of inputs (messages) `k`; the inputs are edges `0..k`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Demand of each output, aligned with [`NetworkInstance::outputs`].
    pub fn delta(&self) -> &[usize] {
        &self.delta
    }

    /// The input demanded at edge `e`, if `e` is an output.
    pub fn demand_of(&self, e: usize) -> Option<usize> {
        self.outputs.iter().position(|&o| o == e).map(|i| self.delta[i])
    }

    pub fn is_input(&self, e: usize) -> bool {
        e < self.k
    }

    pub fn parents(&self, e: usize) -> &[usize] {
        &self.parents[e]
    }

    /// The caller's index of edge `e` before re-indexing.
    pub fn original_index(&self, e: usize) -> usize {
        self.original[e]
    }

    /// New index of the caller's edge `old`.
    pub fn index_of_original(&self, old: usize) -> usize {
        self.original.iter().position(|&o| o == old).expect("edge exists")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearNetworkCode {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    /// Global encoder `F_e` (`nk × n`) per edge, with `f_e(ξ) = ξ·F_e`.
    pub global: Vec<FeMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableNetworkCode {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    /// Per edge, `q^{nk}` rows of `n` symbols, source vectors numbered as
    /// in [`crate::index::source_vector`].
    pub global: Vec<Vec<u16>>,
}

impl TableNetworkCode {
    pub fn from_linear(code: &LinearNetworkCode) -> Result<TableNetworkCode, NetError> {
        let len = code.n * code.k;
        let size = table_domain(&code.field, len)?;
        let mut xi = vec![0u16; len];
        let mut global = vec![Vec::with_capacity(size * code.n); code.global.len()];
        for i in 0..size {
            source_vector(&code.field, len, i, &mut xi);
            for (g, f) in global.iter_mut().zip(&code.global) {
                g.extend(f.vec_mul(&xi)?);
            }
        }
        Ok(TableNetworkCode {
            field: code.field.clone(),
            n: code.n,
            k: code.k,
            global,
        })
    }

    pub fn value(&self, edge: usize, index: usize) -> &[u16] {
        &self.global[edge][index * self.n..(index + 1) * self.n]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkCode {
    Linear(LinearNetworkCode),
    Table(TableNetworkCode),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Condition {
    /// Input edges carry their own message.
    N1,
    /// Output edges carry their demanded message.
    N2,
    /// Every other edge is a function of its parents.
    N3,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetFailure {
    pub edge: usize,
    pub condition: Condition,
}

/// Local encoder of a non-input edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalEncoder {
    /// `T_α` (`n × n`) per parent, with `F_e = Σ_α F_{e_α} T_α`.
    Linear(Vec<FeMatrix>),
    /// Map from the concatenated parent values to the edge value.
    Table(HashMap<Vec<u16>, Vec<u16>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetReport {
    pub valid: bool,
    pub failures: Vec<NetFailure>,
    /// Local encoders indexed by edge; `None` for inputs and failed edges.
    pub local: Vec<Option<LocalEncoder>>,
}

fn check_linear_shape(network: &NetworkInstance, code: &LinearNetworkCode) -> Result<(), NetError> {
    if code.k != network.k || code.global.len() != network.m() {
        return Err(NetError::Shape(format!(
            "code has {} encoders for {} inputs, network has {} edges and {} inputs",
            code.global.len(),
            code.k,
            network.m(),
            network.k
        )));
    }
    for (e, f) in code.global.iter().enumerate() {
        if f.field() != &code.field || f.shape() != (code.n * code.k, code.n) {
            return Err(NetError::Shape(format!("encoder of edge {} has the wrong shape", e + 1)));
        }
    }
    Ok(())
}

/// Checks N1, N2 and N3 for a linear code and recovers the local encoders.
pub fn verify_linear(network: &NetworkInstance, code: &LinearNetworkCode) -> Result<NetReport, NetError> {
    check_linear_shape(network, code)?;
    let (n, k) = (code.n, code.k);
    let mut failures = Vec::new();
    let mut local = vec![None; network.m()];
    #[allow(clippy::needless_range_loop)]
    for e in 0..network.m() {
        let f = &code.global[e];
        if e < k && *f != selector(&code.field, n, k, &[e]) {
            failures.push(NetFailure {
                edge: e,
                condition: Condition::N1,
            });
        }
        if let Some(d) = network.demand_of(e) {
            if *f != selector(&code.field, n, k, &[d]) {
                failures.push(NetFailure {
                    edge: e,
                    condition: Condition::N2,
                });
            }
        }
        if e < k {
            continue;
        }
        let ps = network.parents(e);
        let blocks: Vec<&FeMatrix> = ps.iter().map(|&p| &code.global[p]).collect();
        let stacked = FeMatrix::hstack(&blocks)?;
        match stacked.solve_right(f)? {
            Some(t) => {
                let ts = (0..ps.len()).map(|a| t.block(a * n, 0, n, n)).collect();
                local[e] = Some(LocalEncoder::Linear(ts));
            }
            None => failures.push(NetFailure {
                edge: e,
                condition: Condition::N3,
            }),
        }
    }
    Ok(NetReport {
        valid: failures.is_empty(),
        failures,
        local,
    })
}

/// Exhaustive check of N1, N2 and N3 for a table code.
pub fn verify_table(network: &NetworkInstance, code: &TableNetworkCode) -> Result<NetReport, NetError> {
    let (n, k) = (code.n, code.k);
    let len = n * k;
    let size = table_domain(&code.field, len)?;
    if code.k != network.k
        || code.global.len() != network.m()
        || code.global.iter().any(|g| g.len() != size * n)
    {
        return Err(NetError::Shape("table code does not match the network".into()));
    }
    let mut failures = Vec::new();
    let mut local = vec![None; network.m()];
    let mut xi = vec![0u16; len];
    for e in 0..network.m() {
        let mut n1 = e < k;
        let demand = network.demand_of(e);
        let mut n2 = demand.is_some();
        let mut map: HashMap<Vec<u16>, Vec<u16>> = HashMap::new();
        let mut n3 = true;
        for i in 0..size {
            source_vector(&code.field, len, i, &mut xi);
            let v = code.value(e, i);
            if n1 && v != &xi[e * n..(e + 1) * n] {
                failures.push(NetFailure {
                    edge: e,
                    condition: Condition::N1,
                });
                n1 = false;
            }
            if let Some(d) = demand {
                if n2 && v != &xi[d * n..(d + 1) * n] {
                    failures.push(NetFailure {
                        edge: e,
                        condition: Condition::N2,
                    });
                    n2 = false;
                }
            }
            if e >= k && n3 {
                let key: Vec<u16> = network
                    .parents(e)
                    .iter()
                    .flat_map(|&p| code.value(p, i).iter().copied())
                    .collect();
                match map.get(&key) {
                    Some(prev) if prev.as_slice() != v => {
                        failures.push(NetFailure {
                            edge: e,
                            condition: Condition::N3,
                        });
                        n3 = false;
                    }
                    Some(_) => {}
                    None => {
                        map.insert(key, v.to_vec());
                    }
                }
            }
        }
        if e >= k && n3 {
            local[e] = Some(LocalEncoder::Table(map));
        }
    }
    failures.sort_by_key(|f| (f.edge, f.condition as u8));
    Ok(NetReport {
        valid: failures.is_empty(),
        failures,
        local,
    })
}

pub fn verify(network: &NetworkInstance, code: &NetworkCode) -> Result<NetReport, NetError> {
    match code {
        NetworkCode::Linear(l) => verify_linear(network, l),
        NetworkCode::Table(t) => verify_table(network, t),
    }
}

/// Recomputes every edge value for source vector `xi` from the inputs using
/// only local encoders, in edge order.
pub fn propagate(network: &NetworkInstance, code: &LinearNetworkCode, local: &[Option<LocalEncoder>], xi: &[u16]) -> Result<Vec<Vec<u16>>, NetError> {
    let n = code.n;
    let mut values: Vec<Vec<u16>> = Vec::with_capacity(network.m());
    for e in 0..network.m() {
        if e < network.k() {
            values.push(xi[e * n..(e + 1) * n].to_vec());
            continue;
        }
        let mut v = vec![0u16; n];
        match &local[e] {
            Some(LocalEncoder::Linear(ts)) => {
                for (&p, t) in network.parents(e).iter().zip(ts) {
                    let part = t.vec_mul(&values[p])?;
                    for (a, b) in v.iter_mut().zip(part) {
                        *a = code.field.add_raw(*a, b);
                    }
                }
            }
            Some(LocalEncoder::Table(map)) => {
                let key: Vec<u16> = network
                    .parents(e)
                    .iter()
                    .flat_map(|&p| values[p].iter().copied())
                    .collect();
                v = map
                    .get(&key)
                    .cloned()
                    .ok_or_else(|| NetError::Shape("parent values outside the local table".into()))?;
            }
            None => return Err(NetError::Shape(format!("edge {} has no local encoder", e + 1))),
        }
        values.push(v);
    }
    Ok(values)
}

/// Number of draws before [`random_code`] gives up.
pub const RANDOM_CODE_ATTEMPTS: u64 = 32;

/// Draws random local encoders in edge order and sets each output to its
/// demand when the demand is decodable there. Retries with derived seeds
/// and returns `None` when no attempt succeeds.
pub fn random_code(network: &NetworkInstance, field: &FieldSpec, n: usize, seed: u64) -> Option<LinearNetworkCode> {
    let k = network.k();
    'attempt: for attempt in 0..RANDOM_CODE_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(attempt));
        let mut global: Vec<FeMatrix> = Vec::with_capacity(network.m());
        for e in 0..network.m() {
            if e < k {
                global.push(selector(field, n, k, &[e]));
                continue;
            }
            let blocks: Vec<&FeMatrix> = network.parents(e).iter().map(|&p| &global[p]).collect();
            let stacked = FeMatrix::hstack(&blocks).ok()?;
            let f = match network.demand_of(e) {
                Some(d) => {
                    let want = selector(field, n, k, &[d]);
                    if stacked.solve_right(&want).ok()?.is_none() {
                        continue 'attempt;
                    }
                    want
                }
                None => {
                    let t = FeMatrix::random(field, stacked.cols(), n, &mut rng);
                    stacked.mul(&t).ok()?
                }
            };
            global.push(f);
        }
        let code = LinearNetworkCode {
            field: field.clone(),
            n,
            k,
            global,
        };
        if verify_linear(network, &code).ok()?.valid {
            return Some(code);
        }
    }
    None
}

/// A random small network with at most `max_edges` edges, for tests and
/// demos. Every node with outgoing edges has an incoming edge.
pub fn random_network<R: Rng + ?Sized>(rng: &mut R, max_edges: usize) -> NetworkInstance {
    assert!(max_edges >= 2);
    loop {
        let nodes = rng.gen_range(1..=4usize);
        let k = rng.gen_range(1..=2usize.min(max_edges / 2));
        let mut edges = Vec::new();
        let mut inputs = Vec::new();
        let mut fed = vec![false; nodes];
        for i in 0..k {
            let head = if i == 0 { 0 } else { rng.gen_range(0..nodes) };
            fed[head] = true;
            inputs.push(edges.len());
            edges.push(Edge::input(head));
        }
        let budget = max_edges - k;
        let d = rng.gen_range(k..=budget.min(k + 2));
        let internal = rng.gen_range(0..=(budget - d).min(5));
        for _ in 0..internal {
            let tail = rng.gen_range(0..nodes);
            if !fed[tail] || tail + 1 >= nodes {
                continue;
            }
            let head = rng.gen_range(tail + 1..nodes);
            fed[head] = true;
            edges.push(Edge::internal(tail, head));
        }
        let fed_nodes: Vec<usize> = (0..nodes).filter(|&v| fed[v]).collect();
        let mut outputs = Vec::new();
        let mut delta = Vec::new();
        for j in 0..d {
            let tail = fed_nodes[rng.gen_range(0..fed_nodes.len())];
            outputs.push(edges.len());
            edges.push(Edge::output(tail));
            delta.push(if j < k { j } else { rng.gen_range(0..k) });
        }
        if let Ok(net) = NetworkInstance::new(nodes, edges, inputs, outputs, delta) {
            return net;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> FieldSpec {
        FieldSpec::with_order(q).unwrap()
    }

    /// Classic butterfly. Nodes: s1=0, s2=1, C=2, D=3, t1=4, t2=5.
    pub(crate) fn butterfly() -> NetworkInstance {
        let edges = vec![
            Edge::input(0),
            Edge::input(1),
            Edge::internal(0, 4),
            Edge::internal(0, 2),
            Edge::internal(1, 5),
            Edge::internal(1, 2),
            Edge::internal(2, 3),
            Edge::internal(3, 4),
            Edge::internal(3, 5),
            Edge::output(4),
            Edge::output(5),
        ];
        NetworkInstance::new(6, edges, vec![0, 1], vec![9, 10], vec![1, 0]).unwrap()
    }

    fn butterfly_code(bottleneck: &[u16]) -> LinearNetworkCode {
        let f = gf(2);
        let x1 = selector(&f, 1, 2, &[0]);
        let x2 = selector(&f, 1, 2, &[1]);
        let mid = FeMatrix::column(&f, bottleneck).unwrap();
        let net = butterfly();
        let global = (0..net.m())
            .map(|e| match net.original_index(e) {
                0 | 2 | 3 => x1.clone(),
                1 | 4 | 5 => x2.clone(),
                6..=8 => mid.clone(),
                9 => x2.clone(),
                _ => x1.clone(),
            })
            .collect();
        LinearNetworkCode {
            field: f,
            n: 1,
            k: 2,
            global,
        }
    }

    #[test]
    fn butterfly_xor_code_verifies() {
        let net = butterfly();
        let code = butterfly_code(&[1, 1]);
        let rep = verify_linear(&net, &code).unwrap();
        assert!(rep.valid, "{:?}", rep.failures);
        let xi = [1u16, 0];
        let vals = propagate(&net, &code, &rep.local, &xi).unwrap();
        for (v, g) in vals.iter().zip(&code.global) {
            assert_eq!(*v, g.vec_mul(&xi).unwrap());
        }
        let table = TableNetworkCode::from_linear(&code).unwrap();
        assert!(verify_table(&net, &table).unwrap().valid);
    }

    #[test]
    fn butterfly_bottleneck_x1_fails_at_sink_for_x2() {
        let net = butterfly();
        let code = butterfly_code(&[1, 0]);
        let rep = verify_linear(&net, &code).unwrap();
        assert!(!rep.valid);
        // t2 demands x1 and gets x2 plus the bottleneck, fine; t1 demands x2.
        let t1_out = net.index_of_original(9);
        assert!(rep.failures.iter().any(|f| f.edge == t1_out && f.condition == Condition::N3));
        let table = verify_table(&net, &TableNetworkCode::from_linear(&code).unwrap()).unwrap();
        assert_eq!(table.failures, rep.failures);
    }

    #[test]
    fn path_forwarding() {
        let net = NetworkInstance::new(1, vec![Edge::input(0), Edge::output(0)], vec![0], vec![1], vec![0]).unwrap();
        let f = gf(3);
        let code = random_code(&net, &f, 2, 9).unwrap();
        assert!(verify_linear(&net, &code).unwrap().valid);
        assert_eq!(code.global[1], selector(&f, 2, 1, &[0]));
    }

    #[test]
    fn single_edge_is_input_and_output() {
        let net = NetworkInstance::new(0, vec![Edge::new(None, None)], vec![0], vec![0], vec![0]).unwrap();
        assert_eq!(net.m(), 1);
        assert_eq!(net.demand_of(0), Some(0));
        let code = random_code(&net, &gf(2), 1, 0).unwrap();
        assert!(verify_linear(&net, &code).unwrap().valid);
    }

    #[test]
    fn random_code_on_butterfly_uses_xor() {
        let net = butterfly();
        let code = (0..20).find_map(|s| random_code(&net, &gf(2), 1, s)).unwrap();
        let mid = net.index_of_original(6);
        assert_eq!(code.global[mid].col(0), vec![1, 1]);
    }

    #[test]
    fn infeasible_demand_gives_none() {
        // Two inputs into separate nodes; the sink only sees input 1.
        let edges = vec![Edge::input(0), Edge::input(1), Edge::output(0), Edge::output(0)];
        let net = NetworkInstance::new(2, edges, vec![0, 1], vec![2, 3], vec![0, 1]).unwrap();
        assert!(random_code(&net, &gf(2), 1, 3).is_none());
    }

    #[test]
    fn validation_errors() {
        let cyc = vec![Edge::input(0), Edge::internal(0, 1), Edge::internal(1, 0), Edge::output(1)];
        assert!(NetworkInstance::new(2, cyc, vec![0], vec![3], vec![0]).is_err());
        let not_onto = vec![Edge::input(0), Edge::input(0), Edge::output(0)];
        assert!(NetworkInstance::new(1, not_onto, vec![0, 1], vec![2], vec![0]).is_err());
        let orphan = vec![Edge::input(0), Edge::internal(1, 0), Edge::output(0)];
        assert!(NetworkInstance::new(2, orphan, vec![0], vec![2], vec![0]).is_err());
        let unlisted = vec![Edge::input(0), Edge::output(0)];
        assert!(NetworkInstance::new(1, unlisted, vec![], vec![1], vec![]).is_err());
    }

    #[test]
    fn reindexing_puts_internal_edges_in_topological_order() {
        // Internal edges given out of order: 1->2 before 0->1.
        let edges = vec![Edge::internal(1, 2), Edge::output(2), Edge::internal(0, 1), Edge::input(0)];
        let net = NetworkInstance::new(3, edges, vec![3], vec![1], vec![0]).unwrap();
        assert_eq!(net.original_index(0), 3);
        assert_eq!(net.original_index(1), 2);
        assert_eq!(net.original_index(2), 0);
        assert_eq!(net.original_index(3), 1);
        assert_eq!(net.parents(2), &[1]);
    }

    #[test]
    fn random_networks_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let net = random_network(&mut rng, 8);
            assert!(net.m() <= 8);
            for e in 0..net.m() {
                assert!(net.parents(e).iter().all(|&p| p < e));
            }
        }
    }
}
