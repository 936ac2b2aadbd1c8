//! The non-Pappus matroid has a 2-dimensional representation over GF(3)
//! but no scalar one over small fields, so its index instance has a
//! perfect vector linear code and no perfect scalar linear code.
//!
//! cargo run --release --example non_pappus

use std::time::Instant;

use indexcoding::fixtures::{get, FixtureObject};
use indexcoding::galois::FieldSpec;
use indexcoding::index::{is_perfect, IndexCode};
use indexcoding::matroid::{search_representation_scalar, verify_representation};
use indexcoding::reduce::{matroid_to_index, transport_rep_to_index};
use indexcoding::solve::{rate_report, Evidence, SearchOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let FixtureObject::Matroid { matroid, representations } = get("non-pappus")?.object else {
        unreachable!()
    };
    let rep = &representations[0];
    println!(
        "rank {}, {} bases, {} circuits",
        matroid.full_rank(),
        matroid.bases().len(),
        matroid.circuits().len()
    );
    let t = Instant::now();
    println!("2-dimensional GF(3) representation: {:?} ({:?})", verify_representation(&matroid, rep)?, t.elapsed());

    let mut evidence = Vec::new();
    for q in [2, 3, 4] {
        let field = FieldSpec::with_order(q)?;
        let t = Instant::now();
        let s = search_representation_scalar(&matroid, &field, &SearchOptions::default())?;
        println!(
            "scalar representation over {field}: {} ({} nodes, {:?})",
            if s.representation.is_some() { "found" } else { "none" },
            s.visited,
            t.elapsed()
        );
        if q == 3 {
            evidence.push(Evidence::NoPerfectViaRepresentation {
                field,
                visited: s.visited,
            });
        }
    }

    let red = matroid_to_index(&matroid, &rep.field, rep.n, Default::default())?;
    let (code, _) = transport_rep_to_index(&matroid, rep, &red)?;
    let perfect = is_perfect(&red.instance, &IndexCode::Linear(code.clone()))?;
    println!(
        "index instance: {} messages, {} clients, mu = {}; transported code has {} symbols for n = 2, perfect: {perfect}",
        red.instance.k(),
        red.instance.clients().len(),
        red.instance.mu(),
        code.c
    );
    evidence.push(Evidence::Code(code));
    let report = rate_report("non-pappus", &red.instance, &evidence)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
