//! Compare the series-bisection estimate of the critical exponent against
//! the closed form for a few index tuples.
//!
//! Run with `cargo run --release --example critical_beta_demo`.

use opstable::closedform::critical_beta_formula;
use opstable::numlab::{estimate_critical_beta_series, SeriesOptions};
use std::time::Instant;

fn main() {
    let families: &[&[f64]] = &[
        &[2.0, 1.0],
        &[1.9, 1.6],
        &[1.8, 1.2],
        &[2.0, 2.0, 2.0],
        &[2.0, 1.8, 1.6],
    ];
    for alphas in families {
        let opts = SeriesOptions::for_dim(alphas.len());
        let start = Instant::now();
        match estimate_critical_beta_series(alphas, 0.1, &opts) {
            Ok(est) => {
                let closed = critical_beta_formula(alphas).unwrap();
                println!(
                    "alpha={alphas:?} closed={closed:.4} bracket=[{:.4}, {:.4}] point={:.4} evals={} ({:.1?})",
                    est.beta_lo,
                    est.beta_hi,
                    est.point_estimate(),
                    est.evaluations,
                    start.elapsed()
                );
            }
            Err(e) => println!("alpha={alphas:?} failed: {e}"),
        }
    }
}
