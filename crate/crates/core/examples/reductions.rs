//! The four reductions and their traces: network to index instance,
//! matroid to index instance, index instance to network, matroid to
//! network.
//!
//! cargo run --example reductions

use indexcoding::fixtures::{get, FixtureObject};
use indexcoding::galois::FieldSpec;
use indexcoding::reduce::{index_to_network, matroid_to_index, matroid_to_network, net_to_index, EdgeRole};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gf2 = FieldSpec::with_order(2)?;

    let FixtureObject::Network { network, .. } = get("butterfly-network")?.object else {
        unreachable!()
    };
    let red = net_to_index(&network, &gf2, 1)?;
    println!(
        "butterfly network -> {} messages, {} clients ({} merged), mu = {}",
        red.instance.k(),
        red.instance.clients().len(),
        red.merged.len(),
        red.instance.mu()
    );
    for (c, o) in red.instance.clients().iter().zip(&red.origins).take(6) {
        let side: Vec<&str> = c.side.iter().map(|&s| red.labels[s].as_str()).collect();
        println!("  {}: ({}, {{{}}})", o.rule(), red.labels[c.demand], side.join(","));
    }
    println!("  ...");

    let FixtureObject::Matroid { matroid, .. } = get("u23")?.object else {
        unreachable!()
    };
    let red = matroid_to_index(&matroid, &gf2, 1, Default::default())?;
    println!("\nU(2,3) -> {} messages, {} clients, mu = {}", red.instance.k(), red.instance.clients().len(), red.instance.mu());
    for (c, o) in red.instance.clients().iter().zip(&red.origins) {
        let side: Vec<&str> = c.side.iter().map(|&s| red.labels[s].as_str()).collect();
        println!("  {}: ({}, {{{}}})", o.rule(), red.labels[c.demand], side.join(","));
    }

    let FixtureObject::Index { instance, .. } = get("butterfly-index")?.object else {
        unreachable!()
    };
    let icn = index_to_network(&instance, 2)?;
    println!(
        "\nbutterfly instance with 2 broadcast edges -> network with {} nodes, {} edges, bottlenecks {:?}",
        icn.network.nodes(),
        icn.network.m(),
        icn.bottleneck_edges()
    );

    let (net, idx) = matroid_to_network(&matroid, &gf2, 1, Default::default())?;
    let count = |f: fn(&EdgeRole) -> bool| net.edges_with_role(f).len();
    println!(
        "\nU(2,3) -> network with {} nodes and {} edges: {} inputs, {} bottlenecks, {} outputs, one per client of the {}-client instance",
        net.network.nodes(),
        net.network.m(),
        count(|r| matches!(r, EdgeRole::Input { .. })),
        count(|r| matches!(r, EdgeRole::Bottleneck { .. })),
        count(|r| matches!(r, EdgeRole::Output { .. })),
        idx.instance.clients().len()
    );
    Ok(())
}
