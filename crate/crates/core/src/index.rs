//! Index coding instances, linear and table codes, and their verifiers.
//!
//! Messages are split into `n` packets. A source vector `ξ` lists all
//! packets, message-major: packet `t` of message `j` sits at `j·n + t`. A
//! linear code of length `c` is an `nk × c` matrix `L` with encoding
//! `f(ξ) = ξ·L`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_rational::Ratio;
use rand::Rng;
use thiserror::Error;

use crate::femat::{FeMatrix, MatrixError};
use crate::galois::FieldSpec;

/// Largest table domain `q^{nk}` accepted by table codes.
pub const MAX_TABLE_DOMAIN: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("malformed instance: {0}")]
    Instance(String),
    #[error("code does not fit the instance: {0}")]
    Shape(String),
    #[error("table domain q^(nk) = {q}^{exp} exceeds the limit of {MAX_TABLE_DOMAIN}")]
    TableTooLarge { q: u32, exp: usize },
    #[error("code is not a valid index code for the instance (client {client} cannot decode)")]
    InvalidCode { client: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A client demanding message `demand` while knowing the messages in `side`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Client {
    pub demand: usize,
    /// Sorted, duplicate-free.
    pub side: Vec<usize>,
}

impl Client {
    pub fn new(demand: usize, side: impl IntoIterator<Item = usize>) -> Client {
        let mut side: Vec<usize> = side.into_iter().collect();
        side.sort_unstable();
        side.dedup();
        Client { demand, side }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexInstance {
    field: FieldSpec,
    n: usize,
    k: usize,
    clients: Vec<Client>,
}

impl IndexInstance {
    pub fn new(field: &FieldSpec, n: usize, k: usize, clients: Vec<Client>) -> Result<IndexInstance, IndexError> {
        if n == 0 {
            return Err(IndexError::Instance("block length must be positive".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for (i, cl) in clients.iter().enumerate() {
            if cl.demand >= k || cl.side.iter().any(|&s| s >= k) {
                return Err(IndexError::Instance(format!(
                    "client {} refers to a message outside 1..{k}",
                    i + 1
                )));
            }
            if cl.side.windows(2).any(|w| w[0] >= w[1]) {
                return Err(IndexError::Instance(format!(
                    "client {} side information is not a sorted set",
                    i + 1
                )));
            }
            if cl.side.contains(&cl.demand) {
                return Err(IndexError::Instance(format!(
                    "client {} already knows its demand",
                    i + 1
                )));
            }
            if !seen.insert(cl.clone()) {
                return Err(IndexError::Instance(format!("client {} is a duplicate", i + 1)));
            }
        }
        Ok(IndexInstance {
            field: field.clone(),
            n,
            k,
            clients,
        })
    }

    /// The same clients over another field and block length.
    pub fn with_params(&self, field: &FieldSpec, n: usize) -> Result<IndexInstance, IndexError> {
        IndexInstance::new(field, n, self.k, self.clients.clone())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn clients(&self) -> &[Client] {
        &self.clients
    }

    /// Length of `ξ`.
    pub fn packets(&self) -> usize {
        self.n * self.k
    }

    /// The largest number of distinct messages demanded by clients sharing
    /// one side-information set.
    pub fn mu(&self) -> usize {
        let mut groups: HashMap<&[usize], std::collections::HashSet<usize>> = HashMap::new();
        for cl in &self.clients {
            groups.entry(&cl.side).or_default().insert(cl.demand);
        }
        groups.values().map(|d| d.len()).max().unwrap_or(0)
    }

    /// Selector matrix with one identity column block per listed message:
    /// `ξ · E_S` lists the packets of the messages in `S` in the given order.
    pub fn selector(&self, msgs: &[usize]) -> FeMatrix {
        selector(&self.field, self.n, self.k, msgs)
    }
}

/// `nk × n|msgs|` matrix picking the packets of `msgs` out of `ξ`.
pub fn selector(field: &FieldSpec, n: usize, k: usize, msgs: &[usize]) -> FeMatrix {
    let mut e = FeMatrix::zeros(field, n * k, n * msgs.len());
    for (b, &j) in msgs.iter().enumerate() {
        for t in 0..n {
            e.set(j * n + t, b * n + t, 1);
        }
    }
    e
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearIndexCode {
    pub field: FieldSpec,
    pub n: usize,
    pub c: usize,
    /// `nk × c` encoding matrix.
    pub enc: FeMatrix,
}

impl LinearIndexCode {
    pub fn new(n: usize, enc: FeMatrix) -> LinearIndexCode {
        LinearIndexCode {
            field: enc.field().clone(),
            n,
            c: enc.cols(),
            enc,
        }
    }

    /// Sends every packet in the clear.
    pub fn identity(instance: &IndexInstance) -> LinearIndexCode {
        LinearIndexCode::new(instance.n, FeMatrix::identity(&instance.field, instance.packets()))
    }

    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.c as u64, self.n as u64)
    }

    pub fn encode(&self, xi: &[u16]) -> Result<Vec<u16>, IndexError> {
        Ok(self.enc.vec_mul(xi)?)
    }
}

/// An arbitrary code given by its full table `Σ^{nk} → Σ^c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableCode {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub c: usize,
    /// Row `i` (length `c`) is the codeword of the `i`-th source vector, where
    /// source vectors are numbered base `q` with `ξ_0` most significant.
    pub table: Vec<u16>,
}

/// Number of source vectors `q^len`, if within the table limit.
pub fn table_domain(field: &FieldSpec, len: usize) -> Result<usize, IndexError> {
    let q = field.q() as u64;
    let mut size: u64 = 1;
    for _ in 0..len {
        size = size.saturating_mul(q);
        if size > MAX_TABLE_DOMAIN {
            return Err(IndexError::TableTooLarge { q: field.q(), exp: len });
        }
    }
    Ok(size as usize)
}

/// The `index`-th vector of `Σ^len`, most significant coordinate first.
pub fn source_vector(field: &FieldSpec, len: usize, mut index: usize, out: &mut [u16]) {
    let q = field.q() as usize;
    for slot in out[..len].iter_mut().rev() {
        *slot = (index % q) as u16;
        index /= q;
    }
}

/// Inverse of [`source_vector`].
pub fn source_index(field: &FieldSpec, xi: &[u16]) -> usize {
    let q = field.q() as usize;
    xi.iter().fold(0, |acc, &v| acc * q + v as usize)
}

impl TableCode {
    pub fn domain(&self) -> usize {
        self.table.len() / self.c.max(1)
    }

    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.c as u64, self.n as u64)
    }

    pub fn codeword(&self, index: usize) -> &[u16] {
        &self.table[index * self.c..(index + 1) * self.c]
    }

    /// Tabulates a linear code over all `q^{nk}` source vectors.
    pub fn from_linear(code: &LinearIndexCode, k: usize) -> Result<TableCode, IndexError> {
        let len = code.n * k;
        if code.enc.rows() != len {
            return Err(IndexError::Shape(format!(
                "encoder has {} rows, expected {len}",
                code.enc.rows()
            )));
        }
        let size = table_domain(&code.field, len)?;
        let mut table = Vec::with_capacity(size * code.c);
        let mut xi = vec![0u16; len];
        for i in 0..size {
            source_vector(&code.field, len, i, &mut xi);
            table.extend(code.enc.vec_mul(&xi)?);
        }
        Ok(TableCode {
            field: code.field.clone(),
            n: code.n,
            k,
            c: code.c,
            table,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexCode {
    Linear(LinearIndexCode),
    Table(TableCode),
}

impl IndexCode {
    pub fn c(&self) -> usize {
        match self {
            IndexCode::Linear(l) => l.c,
            IndexCode::Table(t) => t.c,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            IndexCode::Linear(l) => l.n,
            IndexCode::Table(t) => t.n,
        }
    }

    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.c() as u64, self.n() as u64)
    }
}

/// Verdict for one client under a linear code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClientVerdict {
    pub decodable: bool,
    /// `(c + n|H|) × n` matrix `D` with `[f(ξ) | ξ_H] · D = x`, when decodable.
    pub decoder: Option<FeMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearReport {
    pub valid: bool,
    pub clients: Vec<ClientVerdict>,
}

impl LinearReport {
    /// Index of the first client that cannot decode.
    pub fn first_failure(&self) -> Option<usize> {
        self.clients.iter().position(|v| !v.decodable)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableCounterexample {
    pub client: usize,
    /// Two source vectors that agree on the side information and on the
    /// codeword but differ on the demanded message.
    pub first: Vec<u16>,
    pub second: Vec<u16>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableReport {
    pub valid: bool,
    pub counterexample: Option<TableCounterexample>,
}

static VERIFIED: AtomicU64 = AtomicU64::new(0);
static MU_VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// Counts of successful verifications in this process and of those that
/// broke `c/n >= μ`. The second number is zero unless the theory is wrong.
pub fn mu_bound_stats() -> (u64, u64) {
    (VERIFIED.load(Ordering::Relaxed), MU_VIOLATIONS.load(Ordering::Relaxed))
}

fn record_success(instance: &IndexInstance, c: usize, n: usize) {
    VERIFIED.fetch_add(1, Ordering::Relaxed);
    let ok = c >= instance.mu() * n;
    if !ok {
        MU_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
    }
    debug_assert!(ok, "verified code with c/n = {c}/{n} below mu = {}", instance.mu());
}

fn check_shape(instance: &IndexInstance, field: &FieldSpec, n: usize) -> Result<(), IndexError> {
    if field != instance.field() {
        return Err(IndexError::Shape(format!(
            "code over {field}, instance over {}",
            instance.field()
        )));
    }
    if n != instance.n {
        return Err(IndexError::Shape(format!(
            "code block length {n}, instance block length {}",
            instance.n
        )));
    }
    Ok(())
}

/// Decides each client by `rank([L | E_H]) = rank([L | E_H | E_x])` and
/// returns an explicit decoder for each decodable client.
pub fn verify_linear(instance: &IndexInstance, code: &LinearIndexCode) -> Result<LinearReport, IndexError> {
    check_shape(instance, &code.field, code.n)?;
    if code.enc.rows() != instance.packets() || code.enc.cols() != code.c {
        return Err(IndexError::Shape(format!(
            "encoder is {}x{}, expected {}x{}",
            code.enc.rows(),
            code.enc.cols(),
            instance.packets(),
            code.c
        )));
    }
    let mut clients = Vec::with_capacity(instance.clients.len());
    for cl in &instance.clients {
        let a = FeMatrix::hstack(&[&code.enc, &instance.selector(&cl.side)])?;
        let b = instance.selector(&[cl.demand]);
        let decoder = a.solve_right(&b)?;
        clients.push(ClientVerdict {
            decodable: decoder.is_some(),
            decoder,
        });
    }
    let valid = clients.iter().all(|v| v.decodable);
    if valid {
        record_success(instance, code.c, code.n);
    }
    Ok(LinearReport { valid, clients })
}

/// Exhaustive zero-error check of a table code.
pub fn verify_table(instance: &IndexInstance, code: &TableCode) -> Result<TableReport, IndexError> {
    check_shape(instance, &code.field, code.n)?;
    let len = instance.packets();
    let size = table_domain(&code.field, len)?;
    if code.k != instance.k || code.table.len() != size * code.c {
        return Err(IndexError::Shape(format!(
            "table has {} entries, expected {} x {}",
            code.table.len(),
            size,
            code.c
        )));
    }
    let n = instance.n;
    let mut xi = vec![0u16; len];
    for (ci, cl) in instance.clients.iter().enumerate() {
        let mut seen: HashMap<Vec<u16>, usize> = HashMap::new();
        for i in 0..size {
            source_vector(&code.field, len, i, &mut xi);
            let mut key = code.codeword(i).to_vec();
            for &h in &cl.side {
                key.extend_from_slice(&xi[h * n..(h + 1) * n]);
            }
            match seen.get(&key) {
                None => {
                    seen.insert(key, i);
                }
                Some(&j) => {
                    let mut other = vec![0u16; len];
                    source_vector(&code.field, len, j, &mut other);
                    let d = cl.demand * n..(cl.demand + 1) * n;
                    if other[d.clone()] != xi[d] {
                        return Ok(TableReport {
                            valid: false,
                            counterexample: Some(TableCounterexample {
                                client: ci,
                                first: other,
                                second: xi,
                            }),
                        });
                    }
                }
            }
        }
    }
    record_success(instance, code.c, code.n);
    Ok(TableReport {
        valid: true,
        counterexample: None,
    })
}

pub fn verify(instance: &IndexInstance, code: &IndexCode) -> Result<bool, IndexError> {
    match code {
        IndexCode::Linear(l) => Ok(verify_linear(instance, l)?.valid),
        IndexCode::Table(t) => Ok(verify_table(instance, t)?.valid),
    }
}

/// Whether a valid code reaches `c/n = μ`. Invalid codes are an error.
pub fn is_perfect(instance: &IndexInstance, code: &IndexCode) -> Result<bool, IndexError> {
    let report_failure = match code {
        IndexCode::Linear(l) => verify_linear(instance, l)?.first_failure(),
        IndexCode::Table(t) => verify_table(instance, t)?.counterexample.map(|c| c.client),
    };
    if let Some(client) = report_failure {
        return Err(IndexError::InvalidCode { client });
    }
    Ok(code.c() == instance.mu() * code.n())
}

/// Applies a client decoder to `[f(ξ) | ξ_H]`.
pub fn apply_decoder(
    instance: &IndexInstance,
    code: &LinearIndexCode,
    client: usize,
    decoder: &FeMatrix,
    xi: &[u16],
) -> Result<Vec<u16>, IndexError> {
    let n = instance.n;
    let mut input = code.encode(xi)?;
    for &h in &instance.clients[client].side {
        input.extend_from_slice(&xi[h * n..(h + 1) * n]);
    }
    Ok(decoder.vec_mul(&input)?)
}

/// Checks a decoder against `trials` random source vectors.
pub fn check_decoder<R: Rng + ?Sized>(
    instance: &IndexInstance,
    code: &LinearIndexCode,
    client: usize,
    decoder: &FeMatrix,
    trials: usize,
    rng: &mut R,
) -> Result<bool, IndexError> {
    let n = instance.n;
    let q = instance.field.q() as u16;
    let d = instance.clients[client].demand;
    for _ in 0..trials {
        let xi: Vec<u16> = (0..instance.packets()).map(|_| rng.gen_range(0..q)).collect();
        if apply_decoder(instance, code, client, decoder, &xi)? != xi[d * n..(d + 1) * n] {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf2() -> FieldSpec {
        FieldSpec::new(2, 1).unwrap()
    }

    fn butterfly() -> IndexInstance {
        IndexInstance::new(
            &gf2(),
            1,
            4,
            vec![
                Client::new(0, [3]),
                Client::new(3, [0]),
                Client::new(1, [0, 2]),
                Client::new(2, [0, 1]),
            ],
        )
        .unwrap()
    }

    fn code(cols: &[&[u16]]) -> LinearIndexCode {
        let enc = FeMatrix::from_rows(&gf2(), cols).unwrap().transpose();
        LinearIndexCode::new(1, enc)
    }

    #[test]
    fn butterfly_code_verifies_and_is_not_perfect() {
        let inst = butterfly();
        assert_eq!(inst.mu(), 1);
        let c = code(&[&[1, 1, 1, 0], &[1, 0, 0, 1]]);
        let rep = verify_linear(&inst, &c).unwrap();
        assert!(rep.valid);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (i, v) in rep.clients.iter().enumerate() {
            let d = v.decoder.as_ref().unwrap();
            assert!(check_decoder(&inst, &c, i, d, 100, &mut rng).unwrap());
        }
        assert!(!is_perfect(&inst, &IndexCode::Linear(c)).unwrap());
    }

    #[test]
    fn single_column_fails_for_x2() {
        let inst = butterfly();
        let rep = verify_linear(&inst, &code(&[&[1, 0, 0, 1]])).unwrap();
        assert!(!rep.valid);
        assert!(!rep.clients[2].decodable);
        assert_eq!(
            is_perfect(&inst, &IndexCode::Linear(code(&[&[1, 0, 0, 1]]))),
            Err(IndexError::InvalidCode { client: 2 })
        );
    }

    #[test]
    fn identity_code_and_mu_equal_k() {
        let f = FieldSpec::new(3, 1).unwrap();
        let inst = IndexInstance::new(&f, 2, 3, (0..3).map(|i| Client::new(i, [])).collect()).unwrap();
        assert_eq!(inst.mu(), 3);
        let id = LinearIndexCode::identity(&inst);
        assert!(verify_linear(&inst, &id).unwrap().valid);
        assert!(is_perfect(&inst, &IndexCode::Linear(id)).unwrap());
    }

    #[test]
    fn table_matches_linear() {
        let inst = butterfly();
        for cols in [&[&[1u16, 1, 1, 0][..], &[1, 0, 0, 1]][..], &[&[1, 0, 0, 1]]] {
            let c = code(cols);
            let t = TableCode::from_linear(&c, 4).unwrap();
            assert_eq!(
                verify_linear(&inst, &c).unwrap().valid,
                verify_table(&inst, &t).unwrap().valid
            );
        }
    }

    #[test]
    fn constant_table_fails_with_counterexample() {
        let inst = butterfly();
        let t = TableCode {
            field: gf2(),
            n: 1,
            k: 4,
            c: 1,
            table: vec![0; 16],
        };
        let rep = verify_table(&inst, &t).unwrap();
        assert!(!rep.valid);
        let ce = rep.counterexample.unwrap();
        assert_eq!(ce.client, 0);
        assert_ne!(ce.first[0], ce.second[0]);
    }

    #[test]
    fn instance_validation() {
        let f = gf2();
        assert!(IndexInstance::new(&f, 1, 2, vec![Client::new(0, [0])]).is_err());
        assert!(IndexInstance::new(&f, 1, 2, vec![Client::new(2, [])]).is_err());
        assert!(IndexInstance::new(&f, 1, 2, vec![Client::new(0, [1]), Client::new(0, [1])]).is_err());
        assert!(IndexInstance::new(&f, 0, 2, vec![]).is_err());
        let shape = verify_linear(&butterfly(), &LinearIndexCode::new(1, FeMatrix::zeros(&f, 3, 1)));
        assert!(matches!(shape, Err(IndexError::Shape(_))));
    }

    #[test]
    fn source_vector_round_trip() {
        let f = FieldSpec::new(3, 1).unwrap();
        let mut v = vec![0u16; 3];
        source_vector(&f, 3, 5, &mut v);
        assert_eq!(v, vec![0, 1, 2]);
        assert_eq!(source_index(&f, &v), 5);
    }
}
