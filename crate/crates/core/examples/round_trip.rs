//! Random networks: a random linear network code is carried to a perfect
//! index code and back, and its table form through the table transport.
//!
//! cargo run --release --example round_trip [count]

use indexcoding::galois::FieldSpec;
use indexcoding::index::{is_perfect, IndexCode};
use indexcoding::netcode::{random_code, random_network, verify_linear, NetworkCode, TableNetworkCode};
use indexcoding::reduce::{net_to_index, transport_index_to_net, transport_net_to_index};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let count: usize = std::env::args().nth(1).map_or(Ok(20), |s| s.parse())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut tried, mut linear_ok, mut table_ok) = (0, 0, 0);
    let mut seed = 0;
    while tried < count {
        seed += 1;
        let net = random_network(&mut rng, 8);
        let q = if seed % 2 == 0 { 2 } else { 3 };
        let n = 1 + seed as usize % 2;
        let field = FieldSpec::with_order(q)?;
        let Some(code) = random_code(&net, &field, n, seed) else { continue };
        tried += 1;
        let red = net_to_index(&net, &field, n)?;
        let ic = transport_net_to_index(&net, &NetworkCode::Linear(code.clone()), &red)?;
        let IndexCode::Linear(lin) = &ic else { unreachable!() };
        let back = transport_index_to_net(&net, &red, lin)?;
        if is_perfect(&red.instance, &ic)? && verify_linear(&net, &back)?.valid {
            linear_ok += 1;
        }
        let small = (q as f64).powi((n * red.instance.k()) as i32) <= 4096.0;
        if small {
            let table = TableNetworkCode::from_linear(&code)?;
            let tc = transport_net_to_index(&net, &NetworkCode::Table(table), &red)?;
            if is_perfect(&red.instance, &tc)? {
                table_ok += 1;
            }
        }
        println!(
            "network {tried:>3}: {} edges, {} messages, GF({q}), n = {n}: index code of {} symbols{}",
            net.m(),
            net.k(),
            lin.c,
            if small { ", table transport checked" } else { "" }
        );
    }
    println!("{linear_ok}/{tried} linear round trips succeeded, {table_ok} table transports verified");
    Ok(())
}
