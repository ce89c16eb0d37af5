use std::time::Instant;

use mub_core::matrices::{Basis, PhaseMatrix};
use mub_core::search::{family_coverage, match_against, search, SearchConfig};
use mub_core::solvers::{build_named, solve_d4, solve_d5, F4Angle, Named};

#[test]
fn fourier5_has_twenty_isolated_roots() {
    let t = Instant::now();
    let f = Basis::<f64>::Phase(PhaseMatrix::fourier(5));
    let r = search(&f, &SearchConfig::for_dim(5)).unwrap();
    println!("d=5 oracle: {} clusters in {:?}", r.clusters.len(), t.elapsed());
    assert_eq!(r.clusters.len(), 20);
    assert_eq!(r.isolated().count(), 20);
    assert_eq!(r.rank_deficient, 0);
    assert!(r.clusters.iter().all(|c| c.residual < 1e-10));
    let m = match_against(&r, &solve_d5(), 1e-8);
    assert!(m.is_perfect(), "{m:?}");
}

#[test]
fn half_pi_clusters_lie_on_twelve_families() {
    let f = build_named::<f64>(&Named::F4(F4Angle::half_pi())).unwrap();
    let r = search(&f, &SearchConfig::for_dim(4)).unwrap();
    assert!(r.clusters.iter().all(|c| c.dimension >= 1));
    let cov = family_coverage(&r, &solve_d4(F4Angle::half_pi()).families, 1e-7);
    println!("coverage {:?}, {} unexplained", cov.hits, cov.unexplained.len());
    assert!(cov.is_complete());
}

#[test]
fn generic_x_clusters_lie_on_four_families() {
    let x = F4Angle::new(0.9).unwrap();
    let f = build_named::<f64>(&Named::F4(x)).unwrap();
    let r = search(&f, &SearchConfig::for_dim(4)).unwrap();
    assert!(r.clusters.iter().all(|c| c.dimension == 1));
    let cov = family_coverage(&r, &solve_d4(x).families, 1e-7);
    assert!(cov.is_complete(), "{:?}", cov.hits);
}

#[test]
fn doubling_the_grid_keeps_cluster_counts() {
    for (d, n) in [(2, 2), (3, 6), (5, 20)] {
        let f = Basis::<f64>::Phase(PhaseMatrix::fourier(d));
        let mut cfg = SearchConfig::for_dim(d);
        let base = search(&f, &cfg).unwrap().clusters.len();
        cfg.grid_points_per_angle *= 2;
        let doubled = search(&f, &cfg).unwrap().clusters.len();
        assert_eq!((base, doubled), (n, n), "d = {d}");
    }
}
