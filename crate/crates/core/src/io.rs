//! JSON file formats. Messages, edges, nodes and matroid elements are
//! numbered from 1 in files and from 0 in memory.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::femat::{FeMatrix, MatrixError};
use crate::galois::{FieldSpec, GaloisError};
use crate::index::{Client, IndexCode, IndexError, IndexInstance, LinearIndexCode, TableCode};
use crate::matroid::{subset_of, Matroid, MatroidError, Representation};
use crate::netcode::{Edge, LinearNetworkCode, NetError, NetworkCode, NetworkInstance, TableNetworkCode};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid content: {0}")]
    Invalid(String),
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Invalid(msg.into()))
}

fn from_one(i: usize, what: &str) -> Result<usize, IoError> {
    if i == 0 {
        invalid(format!("{what} indices start at 1"))
    } else {
        Ok(i - 1)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldFile(pub u32, pub u32);

impl FieldFile {
    pub fn of(field: &FieldSpec) -> FieldFile {
        FieldFile(field.p(), field.m())
    }

    pub fn spec(&self) -> Result<FieldSpec, IoError> {
        Ok(FieldSpec::new(self.0, self.1)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u16>,
}

impl MatrixFile {
    pub fn of(m: &FeMatrix) -> MatrixFile {
        MatrixFile {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().to_vec(),
        }
    }

    pub fn matrix(&self, field: &FieldSpec) -> Result<FeMatrix, IoError> {
        Ok(FeMatrix::from_entries(field, self.rows, self.cols, self.entries.clone())?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClientFile {
    pub demand: usize,
    pub side: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub field: FieldFile,
    pub n: usize,
    pub k: usize,
    pub clients: Vec<ClientFile>,
}

impl InstanceFile {
    pub fn of(inst: &IndexInstance) -> InstanceFile {
        InstanceFile {
            field: FieldFile::of(inst.field()),
            n: inst.n(),
            k: inst.k(),
            clients: inst
                .clients()
                .iter()
                .map(|c| ClientFile {
                    demand: c.demand + 1,
                    side: c.side.iter().map(|s| s + 1).collect(),
                })
                .collect(),
        }
    }

    pub fn instance(&self) -> Result<IndexInstance, IoError> {
        let mut clients = Vec::with_capacity(self.clients.len());
        for c in &self.clients {
            let side = c
                .side
                .iter()
                .map(|&s| from_one(s, "message"))
                .collect::<Result<Vec<_>, _>>()?;
            clients.push(Client::new(from_one(c.demand, "message")?, side));
        }
        Ok(IndexInstance::new(&self.field.spec()?, self.n, self.k, clients)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableFile {
    pub c: usize,
    /// Codewords for every source vector in order, `c` symbols each.
    pub entries: Vec<u16>,
}

/// An index code. Field and block length default to the instance's.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexCodeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<MatrixFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableFile>,
}

impl IndexCodeFile {
    pub fn of_linear(code: &LinearIndexCode) -> IndexCodeFile {
        IndexCodeFile {
            field: Some(FieldFile::of(&code.field)),
            n: Some(code.n),
            c: Some(code.c),
            linear: Some(MatrixFile::of(&code.enc)),
            table: None,
        }
    }

    pub fn of_table(code: &TableCode) -> IndexCodeFile {
        IndexCodeFile {
            field: Some(FieldFile::of(&code.field)),
            n: Some(code.n),
            c: Some(code.c),
            linear: None,
            table: Some(TableFile {
                c: code.c,
                entries: code.table.clone(),
            }),
        }
    }

    pub fn of(code: &IndexCode) -> IndexCodeFile {
        match code {
            IndexCode::Linear(l) => Self::of_linear(l),
            IndexCode::Table(t) => Self::of_table(t),
        }
    }

    /// The code, for use with `instance` (the instance is re-parameterized
    /// if the code names a different field or block length).
    pub fn code(&self, instance: &IndexInstance) -> Result<(IndexInstance, IndexCode), IoError> {
        let field = match self.field {
            Some(f) => f.spec()?,
            None => instance.field().clone(),
        };
        let n = self.n.unwrap_or(instance.n());
        let inst = instance.with_params(&field, n)?;
        let code = match (&self.linear, &self.table) {
            (Some(l), None) => {
                let enc = l.matrix(&field)?;
                if self.c.is_some_and(|c| c != enc.cols()) {
                    return invalid("\"c\" disagrees with the columns of \"L\"");
                }
                IndexCode::Linear(LinearIndexCode::new(n, enc))
            }
            (None, Some(t)) => {
                let code = TableCode {
                    field: field.clone(),
                    n,
                    k: inst.k(),
                    c: t.c,
                    table: t.entries.clone(),
                };
                let expected = code.domain().checked_mul(t.c);
                if expected != Some(t.entries.len()) {
                    return invalid("table size does not match q^(nk) codewords of length c");
                }
                if t.entries.iter().any(|&v| v as u32 >= field.q()) {
                    return invalid("table entry outside the field");
                }
                IndexCode::Table(code)
            }
            _ => return invalid("code must have exactly one of \"L\" or \"table\""),
        };
        Ok((inst, code))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkFile {
    pub nodes: usize,
    /// `[tail, head]`, with `null` for the missing end of an input or output.
    pub edges: Vec<[Option<usize>; 2]>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    /// Output edge to the input edge whose message it demands.
    pub delta: BTreeMap<usize, usize>,
}

impl NetworkFile {
    /// Edges are written in the order the network was built from, so codes
    /// written by `NetworkCodeFile::of` line up with this file.
    pub fn of(net: &NetworkInstance) -> NetworkFile {
        let m = net.m();
        let edges = (0..m)
            .map(|old| {
                let e = net.edges()[net.index_of_original(old)];
                [e.tail.map(|v| v + 1), e.head.map(|v| v + 1)]
            })
            .collect();
        let inputs: Vec<usize> = (0..net.k()).map(|i| net.original_index(i) + 1).collect();
        let outputs: Vec<usize> = net.outputs().iter().map(|&o| net.original_index(o) + 1).collect();
        let delta = net
            .outputs()
            .iter()
            .zip(net.delta())
            .map(|(&o, &d)| (net.original_index(o) + 1, net.original_index(d) + 1))
            .collect();
        NetworkFile {
            nodes: net.nodes(),
            edges,
            inputs,
            outputs,
            delta,
        }
    }

    pub fn network(&self) -> Result<NetworkInstance, IoError> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for [t, h] in &self.edges {
            let t = t.map(|v| from_one(v, "node")).transpose()?;
            let h = h.map(|v| from_one(v, "node")).transpose()?;
            edges.push(Edge::new(t, h));
        }
        let inputs = self
            .inputs
            .iter()
            .map(|&i| from_one(i, "edge"))
            .collect::<Result<Vec<_>, _>>()?;
        let outputs = self
            .outputs
            .iter()
            .map(|&i| from_one(i, "edge"))
            .collect::<Result<Vec<_>, _>>()?;
        let mut delta = Vec::with_capacity(outputs.len());
        for &o in &self.outputs {
            let Some(&d) = self.delta.get(&o) else {
                return invalid(format!("output edge {o} has no demand"));
            };
            let d = from_one(d, "edge")?;
            let Some(pos) = inputs.iter().position(|&i| i == d) else {
                return invalid(format!("output edge {o} demands edge {}, which is not an input", d + 1));
            };
            delta.push(pos);
        }
        if self.delta.len() != outputs.len() {
            return invalid("demand given for an edge that is not an output");
        }
        Ok(NetworkInstance::new(self.nodes, edges, inputs, outputs, delta)?)
    }
}

/// A network code, edges in file order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkCodeFile {
    pub field: FieldFile,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub global: Option<Vec<MatrixFile>>,
    /// Per edge, the `n` symbols carried for every source vector in order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<u16>>>,
}

impl NetworkCodeFile {
    pub fn of(net: &NetworkInstance, code: &NetworkCode) -> NetworkCodeFile {
        let order = |e: usize| net.index_of_original(e);
        match code {
            NetworkCode::Linear(c) => NetworkCodeFile {
                field: FieldFile::of(&c.field),
                n: c.n,
                global: Some((0..net.m()).map(|e| MatrixFile::of(&c.global[order(e)])).collect()),
                table: None,
            },
            NetworkCode::Table(c) => NetworkCodeFile {
                field: FieldFile::of(&c.field),
                n: c.n,
                global: None,
                table: Some((0..net.m()).map(|e| c.global[order(e)].clone()).collect()),
            },
        }
    }

    pub fn code(&self, net: &NetworkInstance) -> Result<NetworkCode, IoError> {
        let field = self.field.spec()?;
        let k = net.k();
        let m = net.m();
        match (&self.global, &self.table) {
            (Some(g), None) => {
                if g.len() != m {
                    return invalid(format!("code lists {} edges, network has {m}", g.len()));
                }
                let mut global = vec![FeMatrix::zeros(&field, 0, 0); m];
                for (old, mf) in g.iter().enumerate() {
                    global[net.index_of_original(old)] = mf.matrix(&field)?;
                }
                Ok(NetworkCode::Linear(LinearNetworkCode {
                    field,
                    n: self.n,
                    k,
                    global,
                }))
            }
            (None, Some(t)) => {
                if t.len() != m {
                    return invalid(format!("code lists {} edges, network has {m}", t.len()));
                }
                let mut global = vec![Vec::new(); m];
                for (old, v) in t.iter().enumerate() {
                    if v.iter().any(|&s| s as u32 >= field.q()) {
                        return invalid("table entry outside the field");
                    }
                    global[net.index_of_original(old)] = v.clone();
                }
                Ok(NetworkCode::Table(TableNetworkCode {
                    field,
                    n: self.n,
                    k,
                    global,
                }))
            }
            _ => invalid("network code must have exactly one of \"global\" or \"table\""),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatroidBody {
    /// `ranks[s]` is the rank of the subset with bitmask `s`.
    Table { ranks: Vec<u8> },
    Uniform { k: usize },
    /// Rank 3; listed triples have rank 2.
    Lines { lines: Vec<[usize; 3]> },
    /// Rank of a subset is the rank of the concatenated matrices over `n`.
    Matrix {
        field: FieldFile,
        n: usize,
        mats: Vec<MatrixFile>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidFile {
    pub m: usize,
    #[serde(flatten)]
    pub body: MatroidBody,
}

impl MatroidFile {
    pub fn of(matroid: &Matroid) -> MatroidFile {
        MatroidFile {
            m: matroid.m(),
            body: MatroidBody::Table {
                ranks: matroid.rank_table().to_vec(),
            },
        }
    }

    pub fn matroid(&self) -> Result<Matroid, IoError> {
        let m = self.m;
        Ok(match &self.body {
            MatroidBody::Table { ranks } => Matroid::from_ranks(m, ranks.clone())?,
            MatroidBody::Uniform { k } => Matroid::uniform(*k, m)?,
            MatroidBody::Lines { lines } => {
                let mut zero = Vec::with_capacity(lines.len());
                for l in lines {
                    zero.push([
                        from_one(l[0], "element")?,
                        from_one(l[1], "element")?,
                        from_one(l[2], "element")?,
                    ]);
                }
                Matroid::from_lines(m, &zero)?
            }
            MatroidBody::Matrix { field, n, mats } => {
                let field = field.spec()?;
                if mats.len() != m {
                    return invalid(format!("{} matrices for {m} elements", mats.len()));
                }
                let mats = mats.iter().map(|f| f.matrix(&field)).collect::<Result<Vec<_>, _>>()?;
                if mats.iter().any(|x| x.cols() != *n) {
                    return invalid(format!("every matrix must have {n} columns"));
                }
                Matroid::from_matrices(&field, &mats)?
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationFile {
    pub field: FieldFile,
    pub n: usize,
    pub mats: Vec<MatrixFile>,
}

impl RepresentationFile {
    pub fn of(rep: &Representation) -> RepresentationFile {
        RepresentationFile {
            field: FieldFile::of(&rep.field),
            n: rep.n,
            mats: rep.mats.iter().map(MatrixFile::of).collect(),
        }
    }

    pub fn representation(&self) -> Result<Representation, IoError> {
        let field = self.field.spec()?;
        let mats = self.mats.iter().map(|f| f.matrix(&field)).collect::<Result<Vec<_>, _>>()?;
        Ok(Representation::new(&field, self.n, mats)?)
    }
}

/// Search verdict as printed by the command line tool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictFile {
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    pub visited: u64,
}

/// 1-based element list of a subset, for reports.
pub fn subset_to_file(s: crate::matroid::Subset) -> Vec<usize> {
    crate::matroid::elements(s).into_iter().map(|e| e + 1).collect()
}

/// Subset from a 1-based element list.
pub fn subset_from_file(elems: &[usize]) -> Result<crate::matroid::Subset, IoError> {
    let zero = elems
        .iter()
        .map(|&e| from_one(e, "element"))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(subset_of(&zero))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_round_trip() {
        let text = r#"{"field":[2,1],"n":1,"k":4,"clients":[
            {"demand":1,"side":[4]},{"demand":4,"side":[1]},
            {"demand":2,"side":[1,3]},{"demand":3,"side":[1,2]}]}"#;
        let f: InstanceFile = serde_json::from_str(text).unwrap();
        let inst = f.instance().unwrap();
        assert_eq!(inst.mu(), 1);
        assert_eq!(InstanceFile::of(&inst), f);
    }

    #[test]
    fn zero_index_rejected() {
        let text = r#"{"field":[2,1],"n":1,"k":1,"clients":[{"demand":0,"side":[]}]}"#;
        let f: InstanceFile = serde_json::from_str(text).unwrap();
        assert!(matches!(f.instance(), Err(IoError::Invalid(_))));
    }

    #[test]
    fn network_round_trip_preserves_file_order() {
        // Output listed before the internal edge it depends on.
        let text = r#"{"nodes":2,"edges":[[2,null],[null,1],[1,2]],
            "inputs":[2],"outputs":[1],"delta":{"1":2}}"#;
        let f: NetworkFile = serde_json::from_str(text).unwrap();
        let net = f.network().unwrap();
        assert_eq!(net.original_index(0), 1);
        assert_eq!(NetworkFile::of(&net), f);
    }

    #[test]
    fn matroid_kinds() {
        let u: MatroidFile = serde_json::from_str(r#"{"m":3,"kind":"uniform","k":2}"#).unwrap();
        let m = u.matroid().unwrap();
        assert_eq!(m.bases().len(), 3);
        let t = MatroidFile::of(&m);
        assert_eq!(t.matroid().unwrap(), m);
        let l: MatroidFile = serde_json::from_str(r#"{"m":4,"kind":"lines","lines":[[1,2,3]]}"#).unwrap();
        assert_eq!(l.matroid().unwrap().rank(0b0111), 2);
    }

    #[test]
    fn code_needs_one_body() {
        let inst = InstanceFile {
            field: FieldFile(2, 1),
            n: 1,
            k: 1,
            clients: vec![ClientFile { demand: 1, side: vec![] }],
        }
        .instance()
        .unwrap();
        let empty = IndexCodeFile {
            field: None,
            n: None,
            c: None,
            linear: None,
            table: None,
        };
        assert!(empty.code(&inst).is_err());
    }
}
