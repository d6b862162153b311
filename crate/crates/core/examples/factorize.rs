//! The Petersen graph is vertex-symmetric but not a Cayley graph, so its
//! routes come from a searched spanning factorization instead of group
//! words.

use cayley_transpose::factor::{search_spanning_factorization, verify_spanning, SearchOutcome};
use cayley_transpose::fixtures;

fn main() -> cayley_transpose::Result<()> {
    let graph = fixtures::petersen_digraph();
    match search_spanning_factorization(&graph, 1_000_000)? {
        SearchOutcome::Found {
            factorization,
            short,
            nodes,
        } => {
            println!("found after {nodes} nodes (short: {short})");
            for (k, succ) in factorization
                .factorization
                .successor_maps()
                .iter()
                .enumerate()
            {
                println!("factor {k}: {succ:?}");
            }
            for w in &factorization.words {
                println!(
                    "word {w:?} reaches {}",
                    factorization.factorization.walk(0, w)
                );
            }
            println!(
                "{:?}",
                verify_spanning(&factorization.factorization, &factorization.words)
            );
        }
        SearchOutcome::Unknown {
            nodes, best_depth, ..
        } => {
            println!("no factorization within budget ({nodes} nodes, best depth {best_depth})");
        }
    }
    Ok(())
}
