//! Distance layers and the average-diameter lower bound for a family of
//! circulants `Cay(Z_n, {1, 2, 4})`.

use cayley_transpose::graph::build_cayley_coset_graph;
use cayley_transpose::group::GroupSpec;
use cayley_transpose::layers::layer_profile;

fn main() -> cayley_transpose::Result<()> {
    println!("{:>4} {:>3} {:>6} layers", "n", "D", "theta");
    for n in 7..=24 {
        let graph = build_cayley_coset_graph(&GroupSpec::cyclic(n, &[1, 2, 4])?)?;
        let profile = layer_profile(&graph, 0)?;
        println!(
            "{:>4} {:>3} {:>6} {:?}",
            n, profile.diameter, profile.theta, profile.counts
        );
    }
    Ok(())
}
