//! The uniform matroid U(2,3): axioms, bases and circuits, its scalar and
//! 2-dimensional representations, and the perfect index codes they give.
//!
//! cargo run --release --example matroid_u23

use indexcoding::fixtures::{get, FixtureObject};
use indexcoding::galois::FieldSpec;
use indexcoding::index::{is_perfect, IndexCode};
use indexcoding::io::subset_to_file;
use indexcoding::matroid::{search_representation_scalar, verify_representation};
use indexcoding::reduce::{matroid_to_index, transport_index_to_rep, transport_rep_to_index};
use indexcoding::solve::SearchOptions;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let FixtureObject::Matroid { matroid, representations } = get("u23")?.object else {
        unreachable!()
    };
    println!("axioms: {:?}", matroid.check_axioms()?);
    let bases: Vec<_> = matroid.bases().into_iter().map(subset_to_file).collect();
    let circuits: Vec<_> = matroid.circuits().into_iter().map(subset_to_file).collect();
    println!("bases {bases:?}, circuits {circuits:?}");

    for rep in &representations {
        println!("\n{}-dimensional representation over {}", rep.n, rep.field);
        for (i, m) in rep.mats.iter().enumerate() {
            println!("  M{} = {:?}", i + 1, m.to_rows());
        }
        println!("  rank check over all subsets: {:?}", verify_representation(&matroid, rep)?);
        let red = matroid_to_index(&matroid, &rep.field, rep.n, Default::default())?;
        let (code, _) = transport_rep_to_index(&matroid, rep, &red)?;
        println!(
            "  index instance: {} messages, {} clients, mu = {}",
            red.instance.k(),
            red.instance.clients().len(),
            red.instance.mu()
        );
        let perfect = is_perfect(&red.instance, &IndexCode::Linear(code.clone()))?;
        println!("  transported code: {} symbols, perfect: {perfect}", code.c);
        let back = transport_index_to_rep(&matroid, &red, &code)?;
        println!("  representation recovered from the code: {:?}", verify_representation(&matroid, &back)?);
    }

    let gf2 = FieldSpec::with_order(2)?;
    let found = search_representation_scalar(&matroid, &gf2, &SearchOptions::default())?;
    let rep = found.representation.expect("U(2,3) is binary");
    let cols: Vec<_> = rep.mats.iter().map(|m| m.col(0)).collect();
    println!("\nscalar search over GF(2): {cols:?} after {} nodes", found.visited);
    Ok(())
}
