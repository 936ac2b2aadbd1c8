//! Exhaustive searches for linear index codes and linear network codes at a
//! fixed block length and field, and rate reports assembled from their
//! results.
//!
//! Every witness is re-verified before it is returned. A search that runs
//! out of budget reports `Inconclusive`, never nonexistence.

use std::collections::HashMap;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::femat::{FeMatrix, MatrixError};
use crate::galois::FieldSpec;
use crate::index::{selector, verify_linear, IndexError, IndexInstance, LinearIndexCode};
use crate::matroid::projective_points;
use crate::netcode::{self, LinearNetworkCode, NetError, NetworkInstance};
use crate::search::{first_success, Meter, Outcome};

pub use crate::search::{SearchBudget, SearchOptions};

/// Largest number of candidate columns the index search will enumerate.
pub const MAX_INDEX_CANDIDATES: usize = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("integrity failure: {0}")]
    Integrity(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Found,
    None,
    Inconclusive,
}

/// Outcome of searching one code length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelResult {
    pub c: usize,
    pub status: Status,
    pub witness: Option<LinearIndexCode>,
    pub visited: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinIndexStatus {
    /// Shortest linear code, with the first witness in enumeration order.
    Found { c: usize, code: LinearIndexCode },
    /// No linear code of length at most `c_reached` exists; longer lengths
    /// were not settled within the budget.
    Inconclusive { c_reached: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinIndexResult {
    pub status: MinIndexStatus,
    pub levels: Vec<LevelResult>,
    pub visited: u64,
}

struct ClientView {
    /// Rows of `ξ` the client does not know.
    unknown: Vec<usize>,
    /// Packet rows of the demand.
    demand: Vec<usize>,
}

fn rank_of_columns(field: &FieldSpec, cols: &[&[u16]], rows: &[usize], extra: &[usize]) -> (usize, usize) {
    // Rank of the selected columns restricted to `rows`, and rank after
    // appending the unit vectors of `extra` (positions within `rows`).
    let h = rows.len();
    let w = cols.len() + extra.len();
    let mut data = vec![0u16; h * w];
    for (j, col) in cols.iter().enumerate() {
        for (i, &r) in rows.iter().enumerate() {
            data[i * w + j] = col[r];
        }
    }
    let base = {
        let mut d = vec![0u16; h * cols.len()];
        for i in 0..h {
            d[i * cols.len()..(i + 1) * cols.len()].copy_from_slice(&data[i * w..i * w + cols.len()]);
        }
        crate::femat::eliminate(field, &mut d, h, cols.len(), false).len()
    };
    for (j, &e) in extra.iter().enumerate() {
        data[e * w + cols.len() + j] = 1;
    }
    let full = crate::femat::eliminate(field, &mut data, h, w, false).len();
    (base, full)
}

fn client_views(instance: &IndexInstance) -> Vec<ClientView> {
    let n = instance.n();
    let mut views: Vec<(usize, ClientView)> = instance
        .clients()
        .iter()
        .map(|cl| {
            let unknown: Vec<usize> = (0..instance.k())
                .filter(|j| !cl.side.contains(j))
                .flat_map(|j| j * n..(j + 1) * n)
                .collect();
            let demand = (0..n)
                .map(|t| unknown.iter().position(|&r| r == cl.demand * n + t).unwrap())
                .collect();
            (cl.side.len(), ClientView { unknown, demand })
        })
        .collect();
    // Clients with little side information fail fastest.
    views.sort_by_key(|(s, _)| *s);
    views.into_iter().map(|(_, v)| v).collect()
}

/// Exhaustively searches for a linear index code of exactly `c` symbols
/// (up to column operations: columns are normalized, strictly increasing
/// and independent). Clients prune a branch once their deficit exceeds the
/// number of columns still to choose.
pub fn search_index_code(instance: &IndexInstance, c: usize, opts: &SearchOptions) -> Result<LevelResult, SolveError> {
    let field = instance.field();
    let rows = instance.packets();
    candidate_count(field, rows)?;
    let cands = projective_points(field, rows);
    let views = client_views(instance);
    let meter = Meter::new(&opts.budget);
    if c == 0 {
        let ok = views.iter().all(|v| v.demand.is_empty());
        return Ok(LevelResult {
            c,
            status: if ok { Status::Found } else { Status::None },
            witness: ok.then(|| LinearIndexCode::new(instance.n(), FeMatrix::zeros(field, rows, 0))),
            visited: 0,
        });
    }
    if c > rows || cands.len() < c {
        return Ok(LevelResult {
            c,
            status: Status::None,
            witness: None,
            visited: 0,
        });
    }
    let roots = cands.len() - c + 1;
    let outcome = first_success(roots, opts.threads, &meter, |root, ctx| {
        let mut ticker = ctx.meter().ticker();
        let mut chosen: Vec<usize> = Vec::with_capacity(c);
        fn feasible(
            field: &FieldSpec,
            cands: &[Vec<u16>],
            chosen: &[usize],
            views: &[ClientView],
            remaining: usize,
        ) -> bool {
            let cols: Vec<&[u16]> = chosen.iter().map(|&i| cands[i].as_slice()).collect();
            views.iter().all(|v| {
                let (base, full) = rank_of_columns(field, &cols, &v.unknown, &v.demand);
                full - base <= remaining
            })
        }
        fn independent(field: &FieldSpec, cands: &[Vec<u16>], chosen: &[usize]) -> bool {
            let rows = cands[0].len();
            let cols: Vec<&[u16]> = chosen.iter().map(|&i| cands[i].as_slice()).collect();
            let all: Vec<usize> = (0..rows).collect();
            rank_of_columns(field, &cols, &all, &[]).0 == chosen.len()
        }
        #[allow(clippy::too_many_arguments)]
        fn dfs(
            field: &FieldSpec,
            cands: &[Vec<u16>],
            views: &[ClientView],
            c: usize,
            chosen: &mut Vec<usize>,
            ticker: &mut crate::search::Ticker<'_>,
            ctx: &crate::search::BranchCtx<'_>,
        ) -> Outcome<Vec<usize>> {
            if chosen.len() == c {
                return Outcome::Found(chosen.clone());
            }
            let start = chosen.last().map_or(0, |&l| l + 1);
            let remaining_after = c - chosen.len() - 1;
            for i in start..cands.len() - remaining_after {
                if !ticker.tick() || ctx.cancelled() {
                    return Outcome::Aborted;
                }
                chosen.push(i);
                if independent(field, cands, chosen) && feasible(field, cands, chosen, views, remaining_after) {
                    match dfs(field, cands, views, c, chosen, ticker, ctx) {
                        Outcome::Exhausted => {}
                        other => return other,
                    }
                }
                chosen.pop();
            }
            Outcome::Exhausted
        }
        if !ticker.tick() {
            return Outcome::Aborted;
        }
        chosen.push(root);
        if !feasible(field, &cands, &chosen, &views, c - 1) {
            return Outcome::Exhausted;
        }
        dfs(field, &cands, &views, c, &mut chosen, &mut ticker, ctx)
    });
    let visited = meter.visited();
    let (status, witness) = match outcome {
        Outcome::Found(cols) => {
            let col_refs: Vec<Vec<u16>> = cols.iter().map(|&i| cands[i].clone()).collect();
            let enc = FeMatrix::from_rows(field, &col_refs)?.transpose();
            let code = LinearIndexCode::new(instance.n(), enc);
            if !verify_linear(instance, &code)?.valid {
                return Err(SolveError::Integrity("index search witness fails verification".into()));
            }
            (Status::Found, Some(code))
        }
        Outcome::Exhausted => (Status::None, None),
        Outcome::Aborted => (Status::Inconclusive, None),
    };
    Ok(LevelResult {
        c,
        status,
        witness,
        visited,
    })
}

fn candidate_count(field: &FieldSpec, rows: usize) -> Result<usize, SolveError> {
    let q = field.q() as u128;
    let total = q.checked_pow(rows as u32).map(|t| (t - 1) / (q - 1));
    match total {
        Some(t) if t <= MAX_INDEX_CANDIDATES as u128 => Ok(t as usize),
        _ => Err(SolveError::TooLarge(format!(
            "{rows}-dimensional columns over {field} exceed {MAX_INDEX_CANDIDATES} candidates"
        ))),
    }
}

/// Smallest length of a linear index code, searching `c = μn, μn+1, ..`.
/// The budget applies to each level separately.
pub fn min_linear_index(instance: &IndexInstance, opts: &SearchOptions) -> Result<MinIndexResult, SolveError> {
    let start = instance.mu() * instance.n();
    let mut levels = Vec::new();
    let mut visited = 0;
    for c in start..=instance.packets() {
        let level = search_index_code(instance, c, opts)?;
        visited += level.visited;
        let status = level.status;
        let witness = level.witness.clone();
        levels.push(level);
        match status {
            Status::Found => {
                return Ok(MinIndexResult {
                    status: MinIndexStatus::Found {
                        c,
                        code: witness.expect("found level has a witness"),
                    },
                    levels,
                    visited,
                })
            }
            Status::None => continue,
            Status::Inconclusive => {
                return Ok(MinIndexResult {
                    status: MinIndexStatus::Inconclusive {
                        c_reached: c.saturating_sub(1),
                    },
                    levels,
                    visited,
                })
            }
        }
    }
    // Sending everything in the clear always works, so this is unreachable
    // unless the instance has no clients; then the empty code is optimal.
    Ok(MinIndexResult {
        status: MinIndexStatus::Inconclusive {
            c_reached: instance.packets(),
        },
        levels,
        visited,
    })
}

/// Result of a network code search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetSearchResult {
    pub status: Status,
    pub code: Option<LinearNetworkCode>,
    pub visited: u64,
}

/// All `n × d` matrices in reduced row echelon form with rank `n`, in
/// canonical order (pivot columns lexicographic, then free entries).
fn rref_matrices(field: &FieldSpec, n: usize, d: usize) -> Vec<Vec<u16>> {
    let q = field.q() as usize;
    let mut out = Vec::new();
    for pivots in crate::matroid::combinations(d, n) {
        let piv = crate::matroid::elements(pivots);
        let mut free_slots = Vec::new();
        for (r, &p) in piv.iter().enumerate() {
            for col in p + 1..d {
                if !piv.contains(&col) {
                    free_slots.push(r * d + col);
                }
            }
        }
        let total = q.pow(free_slots.len() as u32);
        for v in 0..total {
            let mut g = vec![0u16; n * d];
            for (r, &p) in piv.iter().enumerate() {
                g[r * d + p] = 1;
            }
            let mut rest = v;
            for &slot in free_slots.iter().rev() {
                g[slot] = (rest % q) as u16;
                rest /= q;
            }
            out.push(g);
        }
    }
    out
}

/// Gaussian binomial coefficient `[d choose n]_q`.
pub fn gaussian_binomial(q: u64, d: u32, n: u32) -> u64 {
    if n > d {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..n {
        num *= (q as u128).pow(d - i) - 1;
        den *= (q as u128).pow(i + 1) - 1;
    }
    (num / den) as u64
}

/// Canonical basis (as columns) of the column space of `m`.
fn column_basis(m: &FeMatrix) -> FeMatrix {
    let red = m.transpose().rref();
    let r = red.rank();
    red.matrix.block(0, 0, r, m.rows()).transpose()
}

fn pad(field: &FieldSpec, basis: &FeMatrix, n: usize) -> FeMatrix {
    if basis.cols() == n {
        return basis.clone();
    }
    let mut out = FeMatrix::zeros(field, basis.rows(), n);
    out.set_block(0, 0, basis);
    out
}

fn spans(big: &FeMatrix, small: &FeMatrix) -> bool {
    let r = big.rank();
    FeMatrix::hstack(&[big, small]).map(|m| m.rank() == r).unwrap_or(false)
}

/// Order in which edges are decided: each output's ancestors in post-order,
/// then the output itself, so outputs are checked as early as possible.
/// Edges that reach no output come last.
fn schedule(network: &NetworkInstance) -> Vec<usize> {
    let mut placed = vec![false; network.m()];
    let mut order = Vec::with_capacity(network.m());
    fn visit(network: &NetworkInstance, e: usize, placed: &mut [bool], order: &mut Vec<usize>) {
        if placed[e] {
            return;
        }
        for &p in network.parents(e) {
            visit(network, p, placed, order);
        }
        placed[e] = true;
        order.push(e);
    }
    for &o in network.outputs() {
        visit(network, o, &mut placed, &mut order);
    }
    for e in 0..network.m() {
        visit(network, e, &mut placed, &mut order);
    }
    order
}

/// Exhaustive search for a linear network code at block length `n`.
///
/// Works on the column spaces carried by edges rather than on local
/// coefficients: an edge whose parents span at most `n` dimensions carries
/// their whole span, and any other edge carries one of the `n`-dimensional
/// subspaces of its parents' span. Enlarging what an edge carries never
/// hurts downstream decodability, so a code exists if and only if one of
/// these assignments satisfies every output.
pub fn search_network_code(
    network: &NetworkInstance,
    field: &FieldSpec,
    n: usize,
    opts: &SearchOptions,
) -> Result<NetSearchResult, SolveError> {
    let k = network.k();
    let order = schedule(network);
    let meter = Meter::new(&opts.budget);
    let mut subspace_cache: HashMap<usize, Vec<Vec<u16>>> = HashMap::new();
    for d in n + 1..=n * k {
        subspace_cache.insert(d, rref_matrices(field, n, d));
    }
    let demand: Vec<Option<FeMatrix>> = (0..network.m())
        .map(|e| network.demand_of(e).map(|d| selector(field, n, k, &[d])))
        .collect();

    struct Ctx<'a> {
        network: &'a NetworkInstance,
        field: &'a FieldSpec,
        n: usize,
        order: &'a [usize],
        cache: &'a HashMap<usize, Vec<Vec<u16>>>,
        demand: &'a [Option<FeMatrix>],
    }

    enum Step {
        Forced(FeMatrix),
        Free(FeMatrix, usize),
        Fail,
    }

    impl Ctx<'_> {
        /// What edge `e` may carry given its parents' assignments.
        fn step(&self, e: usize, bases: &[Option<FeMatrix>]) -> Step {
            let k = self.network.k();
            if e < k {
                let sel = selector(self.field, self.n, k, &[e]);
                if let Some(d) = &self.demand[e] {
                    if *d != sel {
                        return Step::Fail;
                    }
                }
                return Step::Forced(sel);
            }
            let blocks: Vec<&FeMatrix> = self
                .network
                .parents(e)
                .iter()
                .map(|&p| bases[p].as_ref().expect("parents precede children"))
                .collect();
            let stacked = FeMatrix::hstack(&blocks).expect("uniform blocks");
            if let Some(d) = &self.demand[e] {
                return if spans(&stacked, d) {
                    Step::Forced(d.clone())
                } else {
                    Step::Fail
                };
            }
            let basis = column_basis(&stacked);
            let dim = basis.cols();
            if dim <= self.n {
                Step::Forced(pad(self.field, &basis, self.n))
            } else {
                let count = self.cache[&dim].len();
                Step::Free(basis, count)
            }
        }

        fn candidate(&self, basis: &FeMatrix, idx: usize) -> FeMatrix {
            let dim = basis.cols();
            let g = &self.cache[&dim][idx];
            let g = FeMatrix::from_entries(self.field, self.n, dim, g.clone()).expect("valid rref");
            basis.mul(&g.transpose()).expect("shapes agree")
        }

        /// Assigns forced edges from position `pos` until the first free edge.
        /// Returns the position of that free edge (or the end), or `None` if an
        /// output fails.
        fn advance(&self, mut pos: usize, bases: &mut [Option<FeMatrix>]) -> Option<(usize, Option<(FeMatrix, usize)>)> {
            while pos < self.order.len() {
                let e = self.order[pos];
                match self.step(e, bases) {
                    Step::Forced(b) => bases[e] = Some(b),
                    Step::Free(basis, count) => return Some((pos, Some((basis, count)))),
                    Step::Fail => return None,
                }
                pos += 1;
            }
            Some((pos, None))
        }

        fn dfs(
            &self,
            pos: usize,
            bases: &mut Vec<Option<FeMatrix>>,
            ticker: &mut crate::search::Ticker<'_>,
            bctx: &crate::search::BranchCtx<'_>,
        ) -> Outcome<Vec<Option<FeMatrix>>> {
            let saved = bases.clone();
            let Some((pos, free)) = self.advance(pos, bases) else {
                *bases = saved;
                return Outcome::Exhausted;
            };
            let Some((basis, count)) = free else {
                return Outcome::Found(bases.clone());
            };
            let e = self.order[pos];
            for idx in 0..count {
                if !ticker.tick() || bctx.cancelled() {
                    return Outcome::Aborted;
                }
                bases[e] = Some(self.candidate(&basis, idx));
                match self.dfs(pos + 1, bases, ticker, bctx) {
                    Outcome::Exhausted => {}
                    other => return other,
                }
            }
            *bases = saved;
            Outcome::Exhausted
        }
    }

    let ctx = Ctx {
        network,
        field,
        n,
        order: &order,
        cache: &subspace_cache,
        demand: &demand,
    };
    let mut prefix: Vec<Option<FeMatrix>> = vec![None; network.m()];
    let outcome = match ctx.advance(0, &mut prefix) {
        None => Outcome::Exhausted,
        Some((_, None)) => Outcome::Found(prefix.clone()),
        Some((pos, Some((basis, count)))) => {
            let e = order[pos];
            first_success(count, opts.threads, &meter, |idx, bctx| {
                let mut ticker = bctx.meter().ticker();
                if !ticker.tick() {
                    return Outcome::Aborted;
                }
                let mut bases = prefix.clone();
                bases[e] = Some(ctx.candidate(&basis, idx));
                ctx.dfs(pos + 1, &mut bases, &mut ticker, bctx)
            })
        }
    };
    let visited = meter.visited();
    match outcome {
        Outcome::Found(bases) => {
            let global: Vec<FeMatrix> = bases.into_iter().map(|b| b.expect("every edge assigned")).collect();
            let code = LinearNetworkCode {
                field: field.clone(),
                n,
                k,
                global,
            };
            if !netcode::verify_linear(network, &code)?.valid {
                return Err(SolveError::Integrity("network search witness fails verification".into()));
            }
            Ok(NetSearchResult {
                status: Status::Found,
                code: Some(code),
                visited,
            })
        }
        Outcome::Exhausted => Ok(NetSearchResult {
            status: Status::None,
            code: None,
            visited,
        }),
        Outcome::Aborted => Ok(NetSearchResult {
            status: Status::Inconclusive,
            code: None,
            visited,
        }),
    }
}

/// A piece of evidence about `λ*(n, q)` for an instance.
#[derive(Debug, Clone)]
pub enum Evidence {
    /// A linear code; bounds `λ*` from above by its rate.
    Code(LinearIndexCode),
    /// A minimum-length search at the instance's own `(n, q)`.
    MinSearch { field: FieldSpec, n: usize, result: MinIndexResult },
    /// Network code search on the network the instance was reduced from
    /// found nothing, so no perfect linear index code exists.
    NoPerfectViaNetwork { field: FieldSpec, n: usize, visited: u64 },
    /// Scalar representation search on the matroid the instance was reduced
    /// from found nothing, so no perfect scalar linear index code exists.
    NoPerfectViaRepresentation { field: FieldSpec, visited: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bound {
    #[serde(serialize_with = "ser_ratio")]
    pub value: Ratio<u64>,
    /// The bound excludes `value` itself.
    pub strict: bool,
    pub evidence: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RateEntry {
    pub n: usize,
    pub q: u32,
    pub upper: Option<Bound>,
    pub lower: Bound,
    /// Set when the bounds meet.
    #[serde(serialize_with = "ser_opt_ratio")]
    pub exact: Option<Ratio<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub q: u32,
    /// Block length with the smaller linear rate.
    pub better_n: usize,
    pub worse_n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RateReport {
    pub instance: String,
    pub mu: usize,
    pub entries: Vec<RateEntry>,
    pub separations: Vec<Separation>,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_opt_ratio<S: serde::Serializer>(r: &Option<Ratio<u64>>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// Collects `μ` and bounds on `λ*(n, q)` from the given evidence and flags
/// separations between block lengths over the same field.
pub fn rate_report(name: &str, instance: &IndexInstance, evidence: &[Evidence]) -> Result<RateReport, SolveError> {
    let mu = instance.mu();
    let mu_r = Ratio::from_integer(mu as u64);
    let mut entries: Vec<RateEntry> = Vec::new();
    fn entry(entries: &mut Vec<RateEntry>, n: usize, q: u32, mu_r: Ratio<u64>) -> &mut RateEntry {
        if let Some(i) = entries.iter().position(|e| e.n == n && e.q == q) {
            return &mut entries[i];
        }
        entries.push(RateEntry {
            n,
            q,
            upper: None,
            lower: Bound {
                value: mu_r,
                strict: false,
                evidence: "mu".into(),
            },
            exact: None,
        });
        entries.last_mut().unwrap()
    }
    fn offer_upper(e: &mut RateEntry, value: Ratio<u64>, evidence: String) {
        if e.upper.as_ref().is_none_or(|u| value < u.value) {
            e.upper = Some(Bound {
                value,
                strict: false,
                evidence,
            });
        }
    }
    fn offer_lower(e: &mut RateEntry, value: Ratio<u64>, strict: bool, evidence: String) {
        if value > e.lower.value || (value == e.lower.value && strict && !e.lower.strict) {
            e.lower = Bound {
                value,
                strict,
                evidence,
            };
        }
    }
    let check = |code: &LinearIndexCode| -> Result<(), SolveError> {
        let inst = instance.with_params(&code.field, code.n)?;
        if verify_linear(&inst, code)?.valid {
            Ok(())
        } else {
            Err(SolveError::Integrity(format!(
                "cited code of length {} over {} does not verify",
                code.c, code.field
            )))
        }
    };
    for ev in evidence {
        match ev {
            Evidence::Code(code) => {
                check(code)?;
                let e = entry(&mut entries, code.n, code.field.q(), mu_r);
                offer_upper(e, code.rate(), "linear code".into());
            }
            Evidence::MinSearch { field, n, result } => {
                let e = entry(&mut entries, *n, field.q(), mu_r);
                match &result.status {
                    MinIndexStatus::Found { c, code } => {
                        check(code)?;
                        let v = Ratio::new(*c as u64, *n as u64);
                        offer_upper(e, v, "minimum-length search".into());
                        if *c > 0 {
                            offer_lower(e, Ratio::new(*c as u64 - 1, *n as u64), true, "minimum-length search".into());
                        }
                    }
                    MinIndexStatus::Inconclusive { c_reached } => {
                        offer_lower(e, Ratio::new(*c_reached as u64, *n as u64), true, "partial search".into());
                    }
                }
            }
            Evidence::NoPerfectViaNetwork { field, n, .. } => {
                let e = entry(&mut entries, *n, field.q(), mu_r);
                offer_lower(e, mu_r, true, "no network code (via equivalence)".into());
            }
            Evidence::NoPerfectViaRepresentation { field, .. } => {
                let e = entry(&mut entries, 1, field.q(), mu_r);
                offer_lower(e, mu_r, true, "no scalar representation (via equivalence)".into());
            }
        }
    }
    for e in &mut entries {
        if let Some(u) = &e.upper {
            if u.value < e.lower.value || (u.value == e.lower.value && e.lower.strict) {
                return Err(SolveError::Integrity(format!(
                    "bounds at (n={}, q={}) contradict each other",
                    e.n, e.q
                )));
            }
            let tight = u.value == e.lower.value
                || (e.lower.strict && e.lower.evidence == "minimum-length search");
            if tight {
                e.exact = Some(u.value);
            }
        }
    }
    entries.sort_by_key(|e| (e.q, e.n));
    let mut separations = Vec::new();
    for a in &entries {
        for b in &entries {
            if a.q != b.q || a.n == b.n {
                continue;
            }
            if let Some(u) = &a.upper {
                if u.value < b.lower.value || (u.value == b.lower.value && b.lower.strict) {
                    separations.push(Separation {
                        q: a.q,
                        better_n: a.n,
                        worse_n: b.n,
                    });
                }
            }
        }
    }
    Ok(RateReport {
        instance: name.to_string(),
        mu,
        entries,
        separations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::Client;
    use crate::netcode::Edge;

    fn gf(q: u32) -> FieldSpec {
        FieldSpec::with_order(q).unwrap()
    }

    fn butterfly_index() -> IndexInstance {
        IndexInstance::new(
            &gf(2),
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

    #[test]
    fn butterfly_min_length_is_two() {
        let inst = butterfly_index();
        let r = min_linear_index(&inst, &SearchOptions::default()).unwrap();
        let MinIndexStatus::Found { c, code } = &r.status else { panic!() };
        assert_eq!(*c, 2);
        assert!(verify_linear(&inst, code).unwrap().valid);
        assert_eq!(r.levels[0].c, 1);
        assert_eq!(r.levels[0].status, Status::None);
        assert_eq!(r.levels[0].visited, 15);
    }

    #[test]
    fn single_client_needs_n_symbols() {
        for n in 1..=2 {
            let inst = IndexInstance::new(&gf(3), n, 1, vec![Client::new(0, [])]).unwrap();
            let r = min_linear_index(&inst, &SearchOptions::default()).unwrap();
            assert!(matches!(r.status, MinIndexStatus::Found { c, .. } if c == n));
        }
    }

    #[test]
    fn index_search_is_thread_independent() {
        let inst = butterfly_index();
        let a = search_index_code(&inst, 2, &SearchOptions { threads: Some(1), ..Default::default() }).unwrap();
        let b = search_index_code(&inst, 2, &SearchOptions { threads: Some(4), ..Default::default() }).unwrap();
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn index_search_budget() {
        let inst = butterfly_index();
        let r = search_index_code(&inst, 2, &SearchOptions::with_budget(SearchBudget::candidates(3))).unwrap();
        assert_eq!(r.status, Status::Inconclusive);
        let m = min_linear_index(&inst, &SearchOptions::with_budget(SearchBudget::candidates(3))).unwrap();
        assert!(matches!(m.status, MinIndexStatus::Inconclusive { c_reached: 0 }));
    }

    #[test]
    fn gaussian_binomials_match_enumeration() {
        for (q, d, n) in [(2u32, 4usize, 2usize), (3, 3, 1), (2, 2, 1), (4, 3, 2)] {
            let f = gf(q);
            let count = rref_matrices(&f, n, d).len() as u64;
            assert_eq!(count, gaussian_binomial(q as u64, d as u32, n as u32));
        }
        assert_eq!(gaussian_binomial(2, 4, 2), 35);
    }

    fn butterfly_network() -> NetworkInstance {
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

    #[test]
    fn butterfly_network_search_finds_xor() {
        let net = butterfly_network();
        let r = search_network_code(&net, &gf(2), 1, &SearchOptions::default()).unwrap();
        assert_eq!(r.status, Status::Found);
        let code = r.code.unwrap();
        let mid = net.index_of_original(6);
        assert_eq!(code.global[mid].col(0), vec![1, 1]);
    }

    #[test]
    fn infeasible_network_search() {
        let edges = vec![Edge::input(0), Edge::input(1), Edge::output(0), Edge::output(0)];
        let net = NetworkInstance::new(2, edges, vec![0, 1], vec![2, 3], vec![0, 1]).unwrap();
        let r = search_network_code(&net, &gf(2), 1, &SearchOptions::default()).unwrap();
        assert_eq!(r.status, Status::None);
    }

    #[test]
    fn direct_feeds_make_any_matroid_network_solvable() {
        use crate::matroid::{search_representation_scalar, Matroid};
        use crate::reduce::{matroid_to_network, MatroidNetworkOptions};
        let u24 = Matroid::uniform(2, 4).unwrap();
        let f = gf(2);
        let none = search_representation_scalar(&u24, &f, &SearchOptions::default()).unwrap();
        assert!(none.representation.is_none());
        let opts = MatroidNetworkOptions {
            direct_feeds: true,
            ..Default::default()
        };
        let (red, _) = matroid_to_network(&u24, &f, 1, opts).unwrap();
        let r = search_network_code(&red.network, &f, 1, &SearchOptions::default()).unwrap();
        assert_eq!(r.status, Status::Found);
    }

    #[test]
    fn rate_report_butterfly() {
        let inst = butterfly_index();
        let r = min_linear_index(&inst, &SearchOptions::default()).unwrap();
        let rep = rate_report(
            "butterfly",
            &inst,
            &[Evidence::MinSearch {
                field: gf(2),
                n: 1,
                result: r,
            }],
        )
        .unwrap();
        assert_eq!(rep.mu, 1);
        assert_eq!(rep.entries[0].exact, Some(Ratio::from_integer(2)));
        assert!(rep.separations.is_empty());
    }

    #[test]
    fn rate_report_rejects_bad_witness() {
        let inst = butterfly_index();
        let bad = LinearIndexCode::new(1, FeMatrix::zeros(&gf(2), 4, 1));
        assert!(matches!(
            rate_report("x", &inst, &[Evidence::Code(bad)]),
            Err(SolveError::Integrity(_))
        ));
    }
}
