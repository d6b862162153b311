//! Two candidate networks under a fixed wire budget, and how the optimal
//! processor count shifts with diameter.

use cayley_transpose::cost::{
    compare_networks, int, regime_time, Candidate, CostParams, Monomial, TauMode,
};

fn params(processors: i64, degree: i64, diameter: i128) -> CostParams {
    CostParams {
        processors,
        degree,
        diameter: int(diameter),
        rho: int(10),
        n: 4096,
        m: 1,
        alpha: Monomial {
            beta: int(1),
            power: 1,
        },
    }
}

fn main() -> cayley_transpose::Result<()> {
    let candidates = [
        Candidate {
            name: "wide".into(),
            params: params(1024, 16, 3),
        },
        Candidate {
            name: "many".into(),
            params: params(4096, 8, 3),
        },
    ];
    let verdict = compare_networks(&candidates, 40_000, TauMode::Ideal)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&verdict).expect("serializable")
    );

    for diameter in 1..=4 {
        let r = regime_time(
            &CostParams {
                n: 1,
                ..params(64, 16, diameter)
            },
            int(4096),
        )?;
        println!(
            "D={diameter}: lambda {:.3e}, total {:.6}",
            r.lambda, r.total
        );
    }
    Ok(())
}
