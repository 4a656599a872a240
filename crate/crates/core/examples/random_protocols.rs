//! Random protocols: the mean square-root eigenvalue of the ensemble
//! approaches 8/(3 pi), so decoding fails with probability about 0.15.

use superdense::randlab::{distinguishability_experiment, MP1_MEAN_SQRT};

fn main() {
    println!("limit {MP1_MEAN_SQRT:.5}");
    for d in [4, 8, 16] {
        let s = distinguishability_experiment(d, 5, 42).unwrap();
        let pgm = s.pgm.map_or("-".into(), |p| format!("{:.4}", p.mean));
        println!(
            "d={d:>2}: hc {:.4} +- {:.4}, pgm {pgm}, max eigenvalue {:.3}, KS {:.4}",
            s.hc.mean, s.hc.sd, s.max_eig.mean, s.ks_distance
        );
    }
}
