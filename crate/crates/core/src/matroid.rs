//! Matroids given by a dense rank table, with axiom checking, bases and
//! circuits, and verification and search of (multi)linear representations.
//!
//! Subsets of the ground set `{0, .., m-1}` are bitmasks ([`Subset`]).

use thiserror::Error;

use crate::femat::{FeMatrix, MatrixError};
use crate::galois::FieldSpec;
use crate::search::{first_success, Meter, Outcome, SearchOptions};

pub type Subset = u32;

/// Largest ground set stored as a dense rank table.
pub const MAX_GROUND: usize = 20;
/// Largest ground set for the all-pairs axiom check.
pub const MAX_AXIOM_GROUND: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("ground set of size {m} exceeds the limit of {max}")]
    TooLarge { m: usize, max: usize },
    #[error("malformed matroid: {0}")]
    Malformed(String),
    #[error("matroid axiom {axiom} fails at A={a:?}, B={b:?}")]
    Axiom {
        axiom: Axiom,
        a: Vec<usize>,
        b: Vec<usize>,
    },
    #[error("malformed representation: {0}")]
    Representation(String),
    #[error("search parameters out of range: {0}")]
    SearchRange(String),
    #[error("search budget exhausted after {visited} nodes")]
    Budget { visited: u64 },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// `r(A) <= |A|`.
    M1,
    /// `A ⊆ B` implies `r(A) <= r(B)`.
    M2,
    /// `r(A ∪ B) + r(A ∩ B) <= r(A) + r(B)`.
    M3,
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Axiom::M1 => "M1",
            Axiom::M2 => "M2",
            Axiom::M3 => "M3",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomReport {
    Pass,
    /// First violation found, scanning M1, then M2, then M3, with pairs in
    /// increasing bitmask order.
    Violation { axiom: Axiom, a: Subset, b: Subset },
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        matches!(self, AxiomReport::Pass)
    }
}

/// Elements of a bitmask in increasing order.
pub fn elements(s: Subset) -> Vec<usize> {
    (0..32).filter(|&i| s >> i & 1 == 1).collect()
}

pub fn subset_of(elems: &[usize]) -> Subset {
    elems.iter().fold(0, |acc, &i| acc | 1 << i)
}

/// All `k`-subsets of `{0..m}` in lexicographic order of their sorted
/// element lists.
pub fn combinations(m: usize, k: usize) -> Vec<Subset> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(subset_of(&idx));
        let Some(i) = (0..k).rev().find(|&i| idx[i] < m - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matroid {
    m: usize,
    ranks: Vec<u8>,
}

impl Matroid {
    /// A matroid from an explicit table indexed by bitmask. Only the shape is
    /// checked here; use [`Matroid::check_axioms`] for the axioms.
    pub fn from_ranks(m: usize, ranks: Vec<u8>) -> Result<Matroid, MatroidError> {
        if m > MAX_GROUND {
            return Err(MatroidError::TooLarge { m, max: MAX_GROUND });
        }
        if ranks.len() != 1 << m {
            return Err(MatroidError::Malformed(format!(
                "rank table has {} entries, expected {}",
                ranks.len(),
                1usize << m
            )));
        }
        Ok(Matroid { m, ranks })
    }

    fn from_fn(m: usize, f: impl Fn(Subset) -> u8) -> Result<Matroid, MatroidError> {
        if m > MAX_GROUND {
            return Err(MatroidError::TooLarge { m, max: MAX_GROUND });
        }
        Ok(Matroid {
            m,
            ranks: (0..1u32 << m).map(f).collect(),
        })
    }

    /// The uniform matroid `U_{k,m}`: `r(I) = min(|I|, k)`.
    pub fn uniform(k: usize, m: usize) -> Result<Matroid, MatroidError> {
        if k > m {
            return Err(MatroidError::Malformed(format!("U_{{{k},{m}}} needs k <= m")));
        }
        Matroid::from_fn(m, |s| (s.count_ones() as usize).min(k) as u8)
    }

    /// The free matroid, in which every set is independent.
    pub fn free(m: usize) -> Result<Matroid, MatroidError> {
        Matroid::uniform(m, m)
    }

    /// A rank-3 matroid given by its collinear triples: `r(I) = min(|I|, 3)`
    /// except that each listed triple has rank 2.
    pub fn from_lines(m: usize, lines: &[[usize; 3]]) -> Result<Matroid, MatroidError> {
        if m < 3 {
            return Err(MatroidError::Malformed("a lines presentation needs m >= 3".into()));
        }
        let mut masks = Vec::new();
        for line in lines {
            let mask = subset_of(line);
            if line.iter().any(|&i| i >= m) || mask.count_ones() != 3 {
                return Err(MatroidError::Malformed(format!("bad line {line:?}")));
            }
            masks.push(mask);
        }
        Matroid::from_fn(m, |s| {
            let size = s.count_ones();
            if size == 3 && masks.contains(&s) {
                2
            } else {
                size.min(3) as u8
            }
        })
    }

    /// The matroid induced by a family of matrices with a common row count:
    /// `r(I) = rank(M_I) / n` where every matrix has `n` columns. Fails if
    /// some rank is not a multiple of `n`.
    pub fn from_matrices(field: &FieldSpec, mats: &[FeMatrix]) -> Result<Matroid, MatroidError> {
        let m = mats.len();
        if m > MAX_GROUND {
            return Err(MatroidError::TooLarge { m, max: MAX_GROUND });
        }
        let n = mats.first().map_or(1, |x| x.cols()).max(1);
        if mats.iter().any(|x| x.cols().max(1) != n) {
            return Err(MatroidError::Representation("matrices differ in width".into()));
        }
        let mut ranks = Vec::with_capacity(1 << m);
        for s in 0..1u32 << m {
            let r = FeMatrix::concat_indexed(field, mats, &elements(s))?.rank();
            if r % n != 0 {
                return Err(MatroidError::Representation(format!(
                    "rank {r} of M_{:?} is not a multiple of {n}",
                    elements(s)
                )));
            }
            ranks.push((r / n) as u8);
        }
        Ok(Matroid { m, ranks })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ground(&self) -> Subset {
        ((1u64 << self.m) - 1) as Subset
    }

    #[inline]
    pub fn rank(&self, s: Subset) -> usize {
        self.ranks[s as usize] as usize
    }

    /// The matroid rank `r(ground set)`.
    pub fn full_rank(&self) -> usize {
        self.rank(self.ground())
    }

    pub fn rank_table(&self) -> &[u8] {
        &self.ranks
    }

    pub fn is_independent(&self, s: Subset) -> bool {
        self.rank(s) == s.count_ones() as usize
    }

    pub fn check_axioms(&self) -> Result<AxiomReport, MatroidError> {
        if self.m > MAX_AXIOM_GROUND {
            return Err(MatroidError::TooLarge {
                m: self.m,
                max: MAX_AXIOM_GROUND,
            });
        }
        let n = 1u32 << self.m;
        for a in 0..n {
            if self.rank(a) > a.count_ones() as usize {
                return Ok(AxiomReport::Violation {
                    axiom: Axiom::M1,
                    a,
                    b: a,
                });
            }
        }
        for b in 0..n {
            // Walk all submasks of b in increasing order.
            let mut subs: Vec<Subset> = Vec::new();
            let mut a = b;
            loop {
                subs.push(a);
                if a == 0 {
                    break;
                }
                a = (a - 1) & b;
            }
            subs.reverse();
            if let Some(&a) = subs.iter().find(|&&a| self.rank(a) > self.rank(b)) {
                return Ok(AxiomReport::Violation {
                    axiom: Axiom::M2,
                    a,
                    b,
                });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.rank(a | b) + self.rank(a & b) > self.rank(a) + self.rank(b) {
                    return Ok(AxiomReport::Violation {
                        axiom: Axiom::M3,
                        a,
                        b,
                    });
                }
            }
        }
        Ok(AxiomReport::Pass)
    }

    /// Checks the axioms and turns a violation into an error.
    pub fn require_axioms(&self) -> Result<(), MatroidError> {
        match self.check_axioms()? {
            AxiomReport::Pass => Ok(()),
            AxiomReport::Violation { axiom, a, b } => Err(MatroidError::Axiom {
                axiom,
                a: elements(a),
                b: elements(b),
            }),
        }
    }

    /// All bases, in lexicographic order of their sorted element lists.
    pub fn bases(&self) -> Vec<Subset> {
        let k = self.full_rank();
        combinations(self.m, k)
            .into_iter()
            .filter(|&s| self.rank(s) == k)
            .collect()
    }

    /// All circuits (minimal dependent sets), ordered by size and then
    /// lexicographically.
    pub fn circuits(&self) -> Vec<Subset> {
        let mut out = Vec::new();
        for size in 1..=self.m {
            for s in combinations(self.m, size) {
                if self.rank(s) < size
                    && elements(s)
                        .iter()
                        .all(|&e| self.is_independent(s & !(1 << e)))
                {
                    out.push(s);
                }
            }
        }
        out
    }
}

/// An `n`-linear representation: one `rows × n` matrix per ground element.
/// For a matroid of rank `k`, `rows` is `k·n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub field: FieldSpec,
    pub n: usize,
    pub mats: Vec<FeMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepReport {
    Pass,
    /// First subset (in bitmask order) where `rank(M_I) != n·r(I)`.
    Fail {
        subset: Subset,
        expected: usize,
        actual: usize,
    },
}

impl RepReport {
    pub fn passed(&self) -> bool {
        matches!(self, RepReport::Pass)
    }
}

impl Representation {
    pub fn new(field: &FieldSpec, n: usize, mats: Vec<FeMatrix>) -> Result<Representation, MatroidError> {
        let rows = mats.first().map_or(0, |x| x.rows());
        for (i, x) in mats.iter().enumerate() {
            if x.field() != field {
                return Err(MatroidError::Representation(format!(
                    "matrix {} is over {}, expected {field}",
                    i + 1,
                    x.field()
                )));
            }
            if x.cols() != n || x.rows() != rows {
                return Err(MatroidError::Representation(format!(
                    "matrix {} is {}x{}, expected {rows}x{n}",
                    i + 1,
                    x.rows(),
                    x.cols()
                )));
            }
        }
        Ok(Representation {
            field: field.clone(),
            n,
            mats,
        })
    }

    /// `M_I`.
    pub fn concat(&self, s: Subset) -> FeMatrix {
        FeMatrix::concat_indexed(&self.field, &self.mats, &elements(s))
            .expect("representation matrices are uniform")
    }
}

/// Checks `rank(M_I) = n·r(I)` on every subset of the ground set.
pub fn verify_representation(matroid: &Matroid, rep: &Representation) -> Result<RepReport, MatroidError> {
    if rep.mats.len() != matroid.m() {
        return Err(MatroidError::Representation(format!(
            "{} matrices for a ground set of size {}",
            rep.mats.len(),
            matroid.m()
        )));
    }
    let rows = rep.mats.first().map_or(0, |x| x.rows());
    let expected_rows = matroid.full_rank() * rep.n;
    if rep.mats.iter().any(|x| x.cols() != rep.n || x.rows() != rows) || rows != expected_rows {
        return Err(MatroidError::Representation(format!(
            "expected {}x{} blocks",
            expected_rows, rep.n
        )));
    }
    for s in 0..=matroid.ground() {
        let expected = rep.n * matroid.rank(s);
        let actual = rep.concat(s).rank();
        if actual != expected {
            return Ok(RepReport::Fail {
                subset: s,
                expected,
                actual,
            });
        }
    }
    Ok(RepReport::Pass)
}

/// Scalar (`n = 1`) representation search outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarSearch {
    pub representation: Option<Representation>,
    pub visited: u64,
}

/// Nonzero vectors of `F_q^k` whose first nonzero coordinate is 1, in
/// lexicographic order of coordinates.
pub fn projective_points(field: &FieldSpec, k: usize) -> Vec<Vec<u16>> {
    let q = field.q() as usize;
    let mut out = Vec::new();
    for lead in 0..k {
        let tail = k - lead - 1;
        for v in 0..q.pow(tail as u32) {
            let mut vec = vec![0u16; k];
            vec[lead] = 1;
            let mut rest = v;
            for j in (lead + 1..k).rev() {
                vec[j] = (rest % q) as u16;
                rest /= q;
            }
            out.push(vec);
        }
    }
    out.sort();
    out
}

/// Exhaustive backtracking for a scalar linear representation over `field`.
///
/// The first basis in lexicographic order is fixed to the unit vectors and
/// every other non-loop element ranges over normalized projective points;
/// loops are the zero vector. Column scaling and change of basis preserve
/// every rank, so this loses no representation up to equivalence. Returns
/// the lexicographically first representation under this normalization, or
/// `None` after exhausting the space.
pub fn search_representation_scalar(
    matroid: &Matroid,
    field: &FieldSpec,
    opts: &SearchOptions,
) -> Result<ScalarSearch, MatroidError> {
    let k = matroid.full_rank();
    let m = matroid.m();
    if k > 4 || m > MAX_AXIOM_GROUND || field.q() > 5 {
        return Err(MatroidError::SearchRange(format!(
            "need rank <= 4, m <= {MAX_AXIOM_GROUND}, q <= 5 (got rank {k}, m {m}, q {})",
            field.q()
        )));
    }
    let meter = Meter::new(&opts.budget);
    let to_rep = |vecs: &[Vec<u16>]| -> Representation {
        let mats = vecs
            .iter()
            .map(|v| FeMatrix::column(field, v).expect("valid entries"))
            .collect();
        Representation::new(field, 1, mats).expect("uniform shapes")
    };
    if k == 0 {
        let rep = to_rep(&vec![Vec::new(); m]);
        return Ok(ScalarSearch {
            representation: (verify_representation(matroid, &rep)?.passed()).then_some(rep),
            visited: 0,
        });
    }
    let basis = matroid.bases()[0];
    let mut order: Vec<usize> = elements(basis);
    let fixed = order.len();
    order.extend((0..m).filter(|&e| basis >> e & 1 == 0));

    let points = projective_points(field, k);
    let mut init = vec![Vec::new(); m];
    for (j, &e) in order[..fixed].iter().enumerate() {
        let mut v = vec![0u16; k];
        v[j] = 1;
        init[e] = v;
    }
    let free = &order[fixed..];
    let candidates_for = |e: usize| -> Vec<Vec<u16>> {
        if matroid.rank(1 << e) == 0 {
            vec![vec![0u16; k]]
        } else {
            points.clone()
        }
    };
    if free.is_empty() {
        let rep = to_rep(&init);
        return Ok(ScalarSearch {
            representation: (verify_representation(matroid, &rep)?.passed()).then_some(rep),
            visited: 1,
        });
    }
    let cand: Vec<Vec<Vec<u16>>> = free.iter().map(|&e| candidates_for(e)).collect();

    let outcome = first_success(cand[0].len(), opts.threads, &meter, |branch, ctx| {
        let mut vecs = init.clone();
        let mut ticker = ctx.meter().ticker();
        let mut assigned: Subset = basis;
        let e0 = free[0];
        vecs[e0] = cand[0][branch].clone();
        if !ticker.tick() {
            return Outcome::Aborted;
        }
        if !consistent(matroid, field, &vecs, assigned, e0, k) {
            return Outcome::Exhausted;
        }
        assigned |= 1 << e0;
        let mut pos = vec![0usize; free.len()];
        let mut depth = 1;
        // Iterative DFS over the remaining free elements.
        loop {
            if depth == free.len() {
                return Outcome::Found(vecs);
            }
            if depth == 0 {
                return Outcome::Exhausted;
            }
            let e = free[depth];
            if pos[depth] == cand[depth].len() {
                pos[depth] = 0;
                depth -= 1;
                if depth == 0 {
                    return Outcome::Exhausted;
                }
                assigned &= !(1 << free[depth]);
                pos[depth] += 1;
                continue;
            }
            if !ticker.tick() || ctx.cancelled() {
                return Outcome::Aborted;
            }
            vecs[e].clone_from(&cand[depth][pos[depth]]);
            if consistent(matroid, field, &vecs, assigned, e, k) {
                assigned |= 1 << e;
                depth += 1;
            } else {
                pos[depth] += 1;
            }
        }
    });
    let visited = meter.visited();
    match outcome {
        Outcome::Found(vecs) => {
            let rep = to_rep(&vecs);
            // Independent re-check of the pruned search's answer.
            if !verify_representation(matroid, &rep)?.passed() {
                return Err(MatroidError::Representation(
                    "search produced a representation that fails verification".into(),
                ));
            }
            Ok(ScalarSearch {
                representation: Some(rep),
                visited,
            })
        }
        Outcome::Exhausted => Ok(ScalarSearch {
            representation: None,
            visited,
        }),
        Outcome::Aborted => Err(MatroidError::Budget { visited }),
    }
}

/// Whether adding element `e` keeps independence in agreement with the
/// matroid on every subset of `assigned ∪ {e}` containing `e` with at most
/// `k` elements. Agreement on all sets of size at most `k` fixes both
/// rank functions, since neither has independent sets larger than `k`.
fn consistent(matroid: &Matroid, field: &FieldSpec, vecs: &[Vec<u16>], assigned: Subset, e: usize, k: usize) -> bool {
    let others = elements(assigned);
    let mut stack: Vec<usize> = Vec::with_capacity(k);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        matroid: &Matroid,
        field: &FieldSpec,
        vecs: &[Vec<u16>],
        others: &[usize],
        start: usize,
        e: usize,
        k: usize,
        stack: &mut Vec<usize>,
    ) -> bool {
        let mut set: Subset = 1 << e;
        for &x in stack.iter() {
            set |= 1 << x;
        }
        let indep_m = matroid.is_independent(set);
        let indep_v = vectors_independent(field, vecs, e, stack, k);
        if indep_m != indep_v {
            return false;
        }
        // Supersets of a dependent set are dependent in both; no need to extend.
        if !indep_m || stack.len() + 1 == k {
            return true;
        }
        for i in start..others.len() {
            stack.push(others[i]);
            let ok = rec(matroid, field, vecs, others, i + 1, e, k, stack);
            stack.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    rec(matroid, field, vecs, &others, 0, e, k, &mut stack)
}

fn vectors_independent(field: &FieldSpec, vecs: &[Vec<u16>], e: usize, rest: &[usize], k: usize) -> bool {
    let n = rest.len() + 1;
    let mut data = Vec::with_capacity(n * k);
    data.extend_from_slice(&vecs[e]);
    for &x in rest {
        data.extend_from_slice(&vecs[x]);
    }
    crate::femat::eliminate(field, &mut data, n, k, false).len() == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::SearchBudget;

    fn gf(q: u32) -> FieldSpec {
        FieldSpec::with_order(q).unwrap()
    }

    #[test]
    fn uniform_u23() {
        let u = Matroid::uniform(2, 3).unwrap();
        assert_eq!(u.check_axioms().unwrap(), AxiomReport::Pass);
        assert_eq!(u.bases(), vec![0b011, 0b101, 0b110]);
        assert_eq!(u.circuits(), vec![0b111]);
        assert_eq!(u.full_rank(), 2);
    }

    #[test]
    fn free_matroid() {
        let f = Matroid::free(3).unwrap();
        assert_eq!(f.bases(), vec![0b111]);
        assert!(f.circuits().is_empty());
    }

    #[test]
    fn m1_violation() {
        let m = Matroid::from_ranks(1, vec![0, 2]).unwrap();
        assert_eq!(
            m.check_axioms().unwrap(),
            AxiomReport::Violation {
                axiom: Axiom::M1,
                a: 1,
                b: 1
            }
        );
        assert!(matches!(m.require_axioms(), Err(MatroidError::Axiom { axiom: Axiom::M1, .. })));
    }

    #[test]
    fn m2_and_m3_violations() {
        // r({0}) = 1 but r({0,1}) = 0.
        let m = Matroid::from_ranks(2, vec![0, 1, 0, 0]).unwrap();
        assert!(matches!(
            m.check_axioms().unwrap(),
            AxiomReport::Violation { axiom: Axiom::M2, a: 1, b: 3 }
        ));
        // Monotone and bounded but not submodular: r = 0 except r({0,1}) = 2.
        let m = Matroid::from_ranks(2, vec![0, 0, 0, 2]).unwrap();
        assert!(matches!(
            m.check_axioms().unwrap(),
            AxiomReport::Violation { axiom: Axiom::M1 | Axiom::M3, .. }
        ));
        let m = Matroid::from_ranks(2, vec![0, 1, 1, 1]).unwrap();
        assert!(m.check_axioms().unwrap().passed());
        let m = Matroid::from_ranks(3, vec![0, 0, 0, 1, 0, 1, 1, 1]).unwrap();
        assert!(matches!(
            m.check_axioms().unwrap(),
            AxiomReport::Violation { axiom: Axiom::M3, .. }
        ));
    }

    #[test]
    fn axiom_check_size_limit() {
        let m = Matroid::uniform(2, 13).unwrap();
        assert!(matches!(m.check_axioms(), Err(MatroidError::TooLarge { .. })));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let c: Vec<Vec<usize>> = combinations(4, 2).into_iter().map(elements).collect();
        assert_eq!(
            c,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(combinations(3, 0), vec![0]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn projective_point_counts() {
        for (q, k, expect) in [(2, 2, 3), (3, 3, 13), (4, 3, 21), (5, 2, 6)] {
            let pts = projective_points(&gf(q), k);
            assert_eq!(pts.len(), expect);
            assert!(pts.iter().all(|p| p.iter().find(|&&x| x != 0) == Some(&1)));
        }
    }

    #[test]
    fn u23_scalar_search_finds_verifying_rep() {
        let u = Matroid::uniform(2, 3).unwrap();
        let r = search_representation_scalar(&u, &gf(2), &SearchOptions::default()).unwrap();
        let rep = r.representation.unwrap();
        assert!(verify_representation(&u, &rep).unwrap().passed());
        let cols: Vec<Vec<u16>> = rep.mats.iter().map(|m| m.col(0)).collect();
        assert_eq!(cols, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn u24_needs_three_points_on_a_line() {
        // U_{2,4} needs 4 distinct projective points on the line: none over GF(2).
        let u = Matroid::uniform(2, 4).unwrap();
        let r = search_representation_scalar(&u, &gf(2), &SearchOptions::default()).unwrap();
        assert!(r.representation.is_none());
        let r = search_representation_scalar(&u, &gf(3), &SearchOptions::default()).unwrap();
        assert!(r.representation.is_some());
    }

    #[test]
    fn loops_and_budget() {
        // Element 2 is a loop parallel to nothing.
        let mut ranks = vec![0u8; 8];
        for s in 0..8u32 {
            ranks[s as usize] = (s & 0b011).count_ones() as u8;
        }
        let m = Matroid::from_ranks(3, ranks).unwrap();
        m.require_axioms().unwrap();
        let r = search_representation_scalar(&m, &gf(3), &SearchOptions::default()).unwrap();
        let rep = r.representation.unwrap();
        assert!(rep.mats[2].is_zero());

        let u = Matroid::uniform(3, 7).unwrap();
        let opts = SearchOptions::with_budget(SearchBudget::candidates(5));
        assert!(matches!(
            search_representation_scalar(&u, &gf(2), &opts),
            Err(MatroidError::Budget { .. })
        ));
    }

    #[test]
    fn verify_representation_reports_first_failure() {
        let f = gf(2);
        let u = Matroid::uniform(2, 3).unwrap();
        let col = |a: u16, b: u16| FeMatrix::column(&f, &[a, b]).unwrap();
        let bad = Representation::new(&f, 1, vec![col(0, 1), col(0, 1), col(1, 1)]).unwrap();
        assert_eq!(
            verify_representation(&u, &bad).unwrap(),
            RepReport::Fail {
                subset: 0b011,
                expected: 2,
                actual: 1
            }
        );
    }

    #[test]
    fn from_matrices_induces_rank() {
        let f = gf(3);
        let mats = vec![
            FeMatrix::column(&f, &[1, 0]).unwrap(),
            FeMatrix::column(&f, &[2, 0]).unwrap(),
            FeMatrix::column(&f, &[0, 1]).unwrap(),
        ];
        let m = Matroid::from_matrices(&f, &mats).unwrap();
        assert_eq!(m.rank(0b011), 1);
        assert_eq!(m.rank(0b101), 2);
        assert!(m.check_axioms().unwrap().passed());
        assert_eq!(m.circuits(), vec![0b011]);
    }
}
