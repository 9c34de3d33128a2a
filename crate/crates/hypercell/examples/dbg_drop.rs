use hypercell::cli::run_conditioned_campaign;
use hypercell::directions::{DirectionalDistribution, ProcessParams};
use hypercell::functionals::SizeFunctional;

fn main() {
    let params = ProcessParams::new(1.0, 2, DirectionalDistribution::isotropic()).unwrap();
    for j in 0..6u64 {
        let seed = 41 + j;
        let a = 0.2 / 2f64.powi(j as i32);
        let (batch, cap, next) = run_conditioned_campaign(
            &params, SizeFunctional::Circumradius, a, 20_000, seed, 0, 4,
        )
        .unwrap();
        println!(
            "j={j} a={a} cap={cap:?} slots={} dropped={} streams_used={}",
            batch.slots, batch.dropped, next
        );
    }
}
