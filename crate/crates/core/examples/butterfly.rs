//! The butterfly: an index coding instance solved with two transmissions,
//! the two-source network solved by coding at the bottleneck, and the
//! network built from the instance with one and two broadcast edges.
//!
//! cargo run --release --example butterfly

use indexcoding::fixtures::{get, FixtureObject};
use indexcoding::index::{is_perfect, verify_linear, IndexCode};
use indexcoding::reduce::index_to_network;
use indexcoding::solve::{min_linear_index, search_network_code, MinIndexStatus, SearchOptions, Status};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let FixtureObject::Index { instance, code } = get("butterfly-index")?.object else {
        unreachable!()
    };
    let IndexCode::Linear(code) = code else { unreachable!() };
    println!("clients:");
    for c in instance.clients() {
        let side: Vec<String> = c.side.iter().map(|s| format!("x{}", s + 1)).collect();
        println!("  wants x{} knowing {{{}}}", c.demand + 1, side.join(", "));
    }
    println!("mu = {}", instance.mu());
    let report = verify_linear(&instance, &code)?;
    println!("code {{x1+x2+x3, x1+x4}} valid: {}", report.valid);
    for (i, v) in report.clients.iter().enumerate() {
        let d = v.decoder.as_ref().expect("valid code");
        println!("  client {} decoder (codeword rows then side info rows): {:?}", i + 1, d.to_rows());
    }
    println!("perfect: {}", is_perfect(&instance, &IndexCode::Linear(code))?);

    let opts = SearchOptions::default();
    let min = min_linear_index(&instance, &opts)?;
    for level in &min.levels {
        println!("length {}: {:?} after {} candidates", level.c, level.status, level.visited);
    }
    if let MinIndexStatus::Found { c, code } = &min.status {
        println!("shortest linear code has {c} symbols; columns {:?}", code.enc.transpose().to_rows());
    }

    let FixtureObject::Network { network, .. } = get("butterfly-network")?.object else {
        unreachable!()
    };
    let found = search_network_code(&network, instance.field(), 1, &opts)?;
    let code = found.code.expect("butterfly is solvable");
    let mid = network.index_of_original(6);
    println!("network code found; middle edge carries {:?} (x1 + x2)", code.global[mid].col(0));

    for c in [1, 2] {
        let red = index_to_network(&instance, c)?;
        let r = search_network_code(&red.network, instance.field(), 1, &opts)?;
        println!(
            "network from the instance with {c} broadcast edge(s): {} edges, scalar code {}",
            red.network.m(),
            if r.status == Status::Found { "exists" } else { "does not exist" }
        );
    }
    Ok(())
}
