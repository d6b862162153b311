//! Shortest-word choices on circulants `Cay(Z_n, {1, 3, 4})`: first-found
//! and load-balanced maximum loads next to the proven best, with the
//! average-diameter bound underneath all three.

use cayley_transpose::graph::build_cayley_coset_graph;
use cayley_transpose::group::GroupSpec;
use cayley_transpose::layers::layer_profile;
use cayley_transpose::words::{bfs_word_set, generator_occurrences, regular_bound_exact, WordMode};

fn main() -> cayley_transpose::Result<()> {
    println!(
        "{:>4} {:>6} {:>12} {:>14} {:>6}",
        "n", "theta", "first-found", "load-balanced", "best"
    );
    for n in 9..=20 {
        let graph = build_cayley_coset_graph(&GroupSpec::cyclic(n, &[1, 3, 4])?)?;
        let theta = layer_profile(&graph, 0)?.theta;
        let [first, balanced] = [WordMode::FirstFound, WordMode::LoadBalanced].map(|mode| {
            let words = bfs_word_set(&graph, mode).expect("connected circulant");
            generator_occurrences(&words, graph.degree()).expect("degree matches")
        });
        let best = regular_bound_exact(&graph, 1_000_000)?;
        println!(
            "{:>4} {:>6} {:>12} {:>14} {:>6}",
            n,
            theta,
            first.iter().max().unwrap(),
            balanced.iter().max().unwrap(),
            if best.exact {
                best.value.to_string()
            } else {
                format!("<={}", best.value)
            },
        );
    }
    Ok(())
}
