use itercur::baselines::naive_cur_residual;
use itercur::itercur::{
    iterative_cur, true_relative_error, IterativeCur, RunStatus, StoppingConfig,
};
use itercur::matcore::{CsrMatrix, DenseMatrix, MatrixHandle};
use itercur::select::SelectionMethod;
use itercur::sketch::{derive_seed, gaussian_matrix};
use itercur::testmat::{generate, GeneratorKind, GeneratorSpec};

fn lupp() -> SelectionMethod {
    SelectionMethod::lupp()
}

fn low_rank(m: usize, n: usize, r: usize, seed: u64) -> DenseMatrix {
    gaussian_matrix(m, r, seed)
        .matmul_t(&gaussian_matrix(n, r, seed + 1))
        .unwrap()
}

#[test]
fn rank_one_converges_in_one_iteration() {
    let u = gaussian_matrix(100, 1, 1);
    let v = gaussian_matrix(80, 1, 2);
    let a = MatrixHandle::from(u.matmul_t(&v).unwrap());
    let (cur, trace) =
        iterative_cur(&a, &StoppingConfig::new(1e-8, 5), &lupp(), &lupp(), 3).unwrap();
    assert_eq!(trace.status, RunStatus::Converged);
    assert_eq!(trace.iterations(), 1);
    assert!(cur.rank() <= 5 && cur.rank() >= 1);
    assert!(true_relative_error(&a, &cur).unwrap() <= 1e-10);
}

#[test]
fn gaussian_product_rank_twenty_in_two_iterations() {
    let a = MatrixHandle::from(low_rank(300, 250, 20, 11));
    let (cur, trace) =
        iterative_cur(&a, &StoppingConfig::new(1e-6, 10), &lupp(), &lupp(), 5).unwrap();
    assert_eq!(trace.status, RunStatus::Converged);
    assert_eq!(cur.rank(), 20);
    assert_eq!(trace.iterations(), 2);
    assert!(true_relative_error(&a, &cur).unwrap() <= 1e-10);
}

#[test]
fn risk_adjusted_runs_on_geometric_spectrum() {
    // b = 10 (c = 11): c = 5 cannot support alpha = 0.1.
    let a = generate(&GeneratorSpec::new(
        GeneratorKind::ExpDecay { n: 60, ratio: 0.5 },
        8,
    ))
    .unwrap();
    let cfg = StoppingConfig::new(1e-3, 10).with_risk(0.5, 0.1);
    let trials = 200;
    let mut over = 0;
    for t in 0..trials {
        let (cur, trace) = iterative_cur(&a, &cfg, &lupp(), &lupp(), derive_seed(99, t)).unwrap();
        assert_eq!(trace.status, RunStatus::Converged);
        if true_relative_error(&a, &cur).unwrap() > 1.5e-3 {
            over += 1;
        }
    }
    assert!(
        over as f64 <= 0.1 * trials as f64,
        "{over} of {trials} overshot"
    );
}

#[test]
fn small_block_rejected_for_alpha() {
    let a = generate(&GeneratorSpec::new(
        GeneratorKind::ExpDecay { n: 60, ratio: 0.5 },
        8,
    ))
    .unwrap();
    let cfg = StoppingConfig::new(1e-3, 5).with_risk(0.5, 0.1);
    let err = iterative_cur(&a, &cfg, &lupp(), &lupp(), 0).unwrap_err();
    assert!(err.to_string().contains("block too small"));
}

#[test]
fn rank_grows_by_block_and_iterations_are_bounded() {
    for seed in 0..10 {
        let a = MatrixHandle::from(gaussian_matrix(45, 37, seed));
        let b = 1 + (seed as usize % 6);
        let cfg = StoppingConfig::new(1e-14, b);
        let mut run = IterativeCur::new(&a, &cfg, lupp(), SelectionMethod::qrcp(), seed).unwrap();
        let mut rank = 0;
        while let Some(rec) = run.step().unwrap() {
            rank += rec.cols_added;
            assert_eq!(rec.cols_added, rec.rows_added);
            assert_eq!(run.cur().rank(), rank);
            assert_eq!(run.cur().row_indices().len(), rank);
        }
        let (_, trace) = run.finish();
        let bound = (37usize.div_ceil(b) + 1).max(37usize.div_ceil(b));
        assert!(trace.iterations() <= bound);
    }
}

#[test]
fn converged_runs_sit_below_threshold() {
    let a = MatrixHandle::from(low_rank(70, 90, 12, 3));
    for seed in 0..5 {
        let (cur, trace) =
            iterative_cur(&a, &StoppingConfig::new(1e-4, 4), &lupp(), &lupp(), seed).unwrap();
        assert_eq!(trace.status, RunStatus::Converged);
        assert!(trace.final_rho() <= trace.threshold);
        assert_eq!(cur.row_indices().len(), cur.col_indices().len());
    }
}

#[test]
fn true_error_matches_dense_materialization() {
    let a = low_rank(50, 40, 8, 21);
    let h = MatrixHandle::from(a.clone());
    let (cur, _) =
        iterative_cur(&h, &StoppingConfig::fixed_rank(8, 8), &lupp(), &lupp(), 2).unwrap();
    assert_eq!(cur.rank(), 8);
    let want = naive_cur_residual(&a, &cur).unwrap().fro_norm() / a.fro_norm();
    let got = true_relative_error(&h, &cur).unwrap();
    assert!((got - want).abs() <= 1e-12, "{got} vs {want}");
    assert!(got <= 1e-13);

    let noisy = a.add(&gaussian_matrix(50, 40, 5)).unwrap();
    let hn = MatrixHandle::from(noisy.clone());
    let (cur, _) =
        iterative_cur(&hn, &StoppingConfig::fixed_rank(4, 12), &lupp(), &lupp(), 2).unwrap();
    let want = naive_cur_residual(&noisy, &cur).unwrap().fro_norm() / noisy.fro_norm();
    let got = true_relative_error(&hn, &cur).unwrap();
    assert!((got - want).abs() <= 1e-12 * want);
}

#[test]
fn sparse_input_runs_like_dense() {
    let mut trip = Vec::new();
    for i in 0..120 {
        trip.push((i, i % 90, 1.0 + (i % 7) as f64));
        trip.push((i, (i * 37 + 5) % 90, 0.5));
    }
    let s = CsrMatrix::from_triplets(120, 90, &trip).unwrap();
    let dense = MatrixHandle::from(s.to_dense());
    let sparse = MatrixHandle::from(s);
    let cfg = StoppingConfig::fixed_rank(6, 30);
    let (cs, ts) = iterative_cur(&sparse, &cfg, &lupp(), &lupp(), 4).unwrap();
    let (cd, _) = iterative_cur(&dense, &cfg, &lupp(), &lupp(), 4).unwrap();
    assert!(sparse.as_sparse().unwrap().has_col_index());
    assert!(cs.c().is_sparse());
    assert_eq!(cs.col_indices(), cd.col_indices());
    assert_eq!(cs.row_indices(), cd.row_indices());
    let es = true_relative_error(&sparse, &cs).unwrap();
    let ed = true_relative_error(&dense, &cd).unwrap();
    assert!((es - ed).abs() <= 1e-12);
    assert_eq!(ts.status, RunStatus::MaxRank);
}

#[test]
fn sketch_estimate_tracks_true_error() {
    // c = 55 sketch rows.
    let mut inside = 0;
    for t in 0..100u64 {
        let base = low_rank(150, 150, 10, derive_seed(t, 0));
        let mut noise = gaussian_matrix(150, 150, derive_seed(t, 1));
        noise.scale(1e-3 * base.fro_norm() / noise.fro_norm());
        let a = MatrixHandle::from(base.add(&noise).unwrap());
        let (cur, trace) = iterative_cur(
            &a,
            &StoppingConfig::new(1e-2, 50),
            &lupp(),
            &lupp(),
            derive_seed(t, 2),
        )
        .unwrap();
        assert_eq!(trace.sketch_rows, 55);
        let ratio = trace.final_rho() / true_relative_error(&a, &cur).unwrap();
        if (0.5..=2.0).contains(&ratio) {
            inside += 1;
        }
    }
    assert!(inside >= 95, "{inside} of 100 inside [0.5, 2]");
}

#[test]
fn identical_seeds_identical_runs() {
    let a = MatrixHandle::from(low_rank(80, 60, 15, 9));
    let cfg = StoppingConfig::new(1e-9, 4);
    let (c1, t1) = iterative_cur(&a, &cfg, &lupp(), &lupp(), 17).unwrap();
    let (c2, t2) = iterative_cur(&a, &cfg, &lupp(), &lupp(), 17).unwrap();
    assert_eq!(c1.col_indices(), c2.col_indices());
    assert_eq!(c1.row_indices(), c2.row_indices());
    let r1: Vec<f64> = t1.records.iter().map(|r| r.rho).collect();
    let r2: Vec<f64> = t2.records.iter().map(|r| r.rho).collect();
    assert_eq!(r1, r2);
}
