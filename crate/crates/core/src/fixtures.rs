//! Canonical instances shipped with the crate, each with the verdicts it
//! is expected to produce. The JSON files under `fixtures/` use the same
//! formats the command line tool reads.

use serde::Serialize;
use thiserror::Error;

use crate::index::{is_perfect, verify, IndexCode, IndexInstance};
use crate::io::{IndexCodeFile, InstanceFile, IoError, MatroidFile, NetworkCodeFile, NetworkFile, RepresentationFile};
use crate::matroid::{verify_representation, Matroid, Representation};
use crate::netcode::{self, NetworkCode, NetworkInstance};

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("unknown fixture {0:?}; known: {known}", known = NAMES.join(", "))]
    Unknown(String),
    #[error("fixture {name} does not load: {source}")]
    Load { name: String, source: IoError },
}

pub const NAMES: [&str; 5] = ["butterfly-index", "butterfly-network", "m-network", "u23", "non-pappus"];

/// Raw JSON of every shipped file, by file stem.
pub const FILES: [(&str, &str); 11] = [
    ("butterfly-index", include_str!("../fixtures/butterfly-index.json")),
    ("butterfly-code", include_str!("../fixtures/butterfly-code.json")),
    ("butterfly-network", include_str!("../fixtures/butterfly-network.json")),
    ("butterfly-network-code", include_str!("../fixtures/butterfly-network-code.json")),
    ("m-network", include_str!("../fixtures/m-network.json")),
    ("m-network-code", include_str!("../fixtures/m-network-code.json")),
    ("u23", include_str!("../fixtures/u23.json")),
    ("u23-rep1", include_str!("../fixtures/u23-rep1.json")),
    ("u23-rep2", include_str!("../fixtures/u23-rep2.json")),
    ("non-pappus", include_str!("../fixtures/non-pappus.json")),
    ("non-pappus-rep", include_str!("../fixtures/non-pappus-rep.json")),
];

pub fn file(stem: &str) -> Option<&'static str> {
    FILES.iter().find(|(s, _)| *s == stem).map(|(_, t)| *t)
}

#[derive(Debug, Clone)]
pub enum FixtureObject {
    Index { instance: IndexInstance, code: IndexCode },
    Network { network: NetworkInstance, code: NetworkCode },
    Matroid { matroid: Matroid, representations: Vec<Representation> },
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    /// Stems of the files this fixture is built from.
    pub files: Vec<&'static str>,
    pub object: FixtureObject,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

fn verdict(check: &str, expected: impl ToString, actual: impl ToString) -> Verdict {
    let expected = expected.to_string();
    let actual = actual.to_string();
    Verdict {
        check: check.to_string(),
        pass: expected == actual,
        expected,
        actual,
    }
}

fn parse<T: serde::de::DeserializeOwned>(stem: &str) -> Result<T, IoError> {
    Ok(serde_json::from_str(file(stem).expect("shipped file"))?)
}

fn load(name: &'static str) -> Result<Fixture, IoError> {
    let (files, object) = match name {
        "butterfly-index" => {
            let instance = parse::<InstanceFile>("butterfly-index")?.instance()?;
            let (_, code) = parse::<IndexCodeFile>("butterfly-code")?.code(&instance)?;
            (vec!["butterfly-index", "butterfly-code"], FixtureObject::Index { instance, code })
        }
        "butterfly-network" | "m-network" => {
            let code_stem = if name == "m-network" { "m-network-code" } else { "butterfly-network-code" };
            let network = parse::<NetworkFile>(name)?.network()?;
            let code = parse::<NetworkCodeFile>(code_stem)?.code(&network)?;
            (vec![name, code_stem], FixtureObject::Network { network, code })
        }
        "u23" | "non-pappus" => {
            let stems: Vec<&'static str> = if name == "u23" {
                vec!["u23", "u23-rep1", "u23-rep2"]
            } else {
                vec!["non-pappus", "non-pappus-rep"]
            };
            let matroid = parse::<MatroidFile>(stems[0])?.matroid()?;
            let representations = stems[1..]
                .iter()
                .map(|s| parse::<RepresentationFile>(s)?.representation())
                .collect::<Result<Vec<_>, _>>()?;
            (stems, FixtureObject::Matroid { matroid, representations })
        }
        _ => unreachable!("name checked by caller"),
    };
    Ok(Fixture { name, files, object })
}

pub fn get(name: &str) -> Result<Fixture, FixtureError> {
    let Some(&name) = NAMES.iter().find(|&&n| n == name) else {
        return Err(FixtureError::Unknown(name.to_string()));
    };
    load(name).map_err(|source| FixtureError::Load {
        name: name.to_string(),
        source,
    })
}

impl Fixture {
    /// Runs the fixture's quick expected verdicts. Searches live in the
    /// acceptance suite.
    pub fn verdicts(&self) -> Vec<Verdict> {
        let mut out = Vec::new();
        match (&self.object, self.name) {
            (FixtureObject::Index { instance, code }, _) => {
                out.push(verdict("mu", 1, instance.mu()));
                out.push(verdict("code length", 2, code.c()));
                out.push(verdict("code valid", true, verify(instance, code).unwrap_or(false)));
                out.push(verdict(
                    "code perfect",
                    false,
                    is_perfect(instance, code).unwrap_or(true),
                ));
            }
            (FixtureObject::Network { network, code }, name) => {
                let (m, k, n) = if name == "m-network" { (46, 4, 2) } else { (11, 2, 1) };
                out.push(verdict("edges", m, network.m()));
                out.push(verdict("messages", k, network.k()));
                let n_code = match code {
                    NetworkCode::Linear(c) => c.n,
                    NetworkCode::Table(c) => c.n,
                };
                out.push(verdict("block length", n, n_code));
                let valid = netcode::verify(network, code).map(|r| r.valid).unwrap_or(false);
                out.push(verdict("code valid", true, valid));
                if name == "butterfly-network" {
                    if let NetworkCode::Linear(c) = code {
                        let mid = network.index_of_original(6);
                        out.push(verdict("bottleneck carries x1+x2", "[1, 1]", format!("{:?}", c.global[mid].col(0))));
                    }
                }
            }
            (FixtureObject::Matroid { matroid, representations }, name) => {
                let (bases, circuits) = if name == "u23" { (3, 1) } else { (76, 86) };
                let axioms = matroid.check_axioms().map(|r| r.passed()).unwrap_or(false);
                out.push(verdict("axioms", true, axioms));
                out.push(verdict("bases", bases, matroid.bases().len()));
                out.push(verdict("circuits", circuits, matroid.circuits().len()));
                for rep in representations {
                    let ok = verify_representation(matroid, rep).map(|r| r.passed()).unwrap_or(false);
                    out.push(verdict(&format!("{}-dimensional representation", rep.n), true, ok));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_passes_its_verdicts() {
        for name in NAMES {
            let f = get(name).unwrap();
            for v in f.verdicts() {
                assert!(v.pass, "{name}: {} expected {} got {}", v.check, v.expected, v.actual);
            }
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(get("fano"), Err(FixtureError::Unknown(_))));
    }

    #[test]
    fn non_pappus_lines_have_rank_two() {
        let FixtureObject::Matroid { matroid, representations } = get("non-pappus").unwrap().object else {
            panic!()
        };
        let rep = &representations[0];
        let s = crate::matroid::subset_of(&[0, 4, 6]);
        assert_eq!(matroid.rank(s), 2);
        assert_eq!(rep.concat(s).rank(), 4);
    }
}
