//! The M-network style gadget: no scalar linear network code over GF(2)
//! or GF(3), a routing solution at block length 2, and the resulting gap
//! between scalar and vector linear rates of its index instance.
//!
//! cargo run --release --example m_network

use std::time::Instant;

use indexcoding::fixtures::{get, FixtureObject};
use indexcoding::galois::FieldSpec;
use indexcoding::index::{is_perfect, IndexCode};
use indexcoding::netcode::verify;
use indexcoding::reduce::{net_to_index, transport_net_to_index};
use indexcoding::solve::{rate_report, search_network_code, Evidence, SearchOptions, Status};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let FixtureObject::Network { network, code } = get("m-network")?.object else {
        unreachable!()
    };
    println!("{} edges, {} messages", network.m(), network.k());
    println!("shipped routing code valid: {}", verify(&network, &code)?.valid);

    let gf2 = FieldSpec::with_order(2)?;
    let mut evidence = Vec::new();
    for (n, q) in [(1, 2), (1, 3), (2, 2)] {
        let field = FieldSpec::with_order(q)?;
        let t = Instant::now();
        let r = search_network_code(&network, &field, n, &SearchOptions::default())?;
        println!("(n, q) = ({n}, {q}): {:?} after {} candidates in {:?}", r.status, r.visited, t.elapsed());
        if r.status == Status::None && q == 2 {
            evidence.push(Evidence::NoPerfectViaNetwork {
                field,
                n,
                visited: r.visited,
            });
        }
    }

    let red2 = net_to_index(&network, &gf2, 2)?;
    let index_code = transport_net_to_index(&network, &code, &red2)?;
    println!(
        "index instance: {} messages, mu = {}; transported code has {} symbols for n = 2, perfect: {}",
        red2.instance.k(),
        red2.instance.mu(),
        index_code.c(),
        is_perfect(&red2.instance, &index_code)?
    );
    let IndexCode::Linear(lin) = index_code else { unreachable!() };
    evidence.push(Evidence::Code(lin));
    let red1 = net_to_index(&network, &gf2, 1)?;
    let report = rate_report("m-network", &red1.instance, &evidence)?;
    for s in &report.separations {
        println!("separation over GF({}): n = {} beats n = {}", s.q, s.better_n, s.worse_n);
    }
    Ok(())
}
