use nalgebra::DMatrix;

use itercur::baselines::SpectrumSummary;
use itercur::testmat::{generate, read_matrix_market, GeneratorKind, GeneratorSpec};

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/grid14_sym.mtx");

// Frozen from an independent parse (scipy.io.mmread, duplicates summed).
const FIXTURE_NNZ: usize = 948;
const FIXTURE_FRO: f64 = 62.899604113236684;

#[test]
fn fixture_matches_independent_parse() {
    let a = read_matrix_market(FIXTURE).unwrap();
    assert_eq!(a.shape(), (196, 196));
    let s = a.as_sparse().unwrap();
    assert_eq!(s.nnz(), FIXTURE_NNZ);
    assert!((a.fro_norm() - FIXTURE_FRO).abs() <= 1e-12 * FIXTURE_FRO);
    let d = a.to_dense();
    assert_eq!(d, d.transpose());
}

#[test]
fn low_rank_has_exact_rank() {
    let a = generate(&GeneratorSpec::new(
        GeneratorKind::LowRank { m: 50, n: 40, r: 5 },
        1,
    ))
    .unwrap();
    let s = SpectrumSummary::of(&a.to_dense());
    assert!(s.singular_values[5] / s.singular_values[0] <= 1e-12);
    assert!(s.singular_values[4] / s.singular_values[0] > 1e-3);
}

#[test]
fn low_rank_pd_spectrum_decays_past_rank() {
    let kind = GeneratorKind::LowRankPd {
        m: 100,
        n: 100,
        r: 10,
        decay: None,
    };
    let a = generate(&GeneratorSpec::new(kind, 2)).unwrap();
    let s = SpectrumSummary::of(&a.to_dense()).singular_values;
    assert!(s[10] > 0.0);
    assert!(s[10..].windows(2).all(|w| w[0] > w[1]));
}

#[test]
fn lehmer_is_positive_definite() {
    for n in [1usize, 2, 10, 100, 500] {
        let a = generate(&GeneratorSpec::new(GeneratorKind::Lehmer { n }, 0))
            .unwrap()
            .to_dense();
        assert_eq!(a, a.transpose());
        let eig = DMatrix::from_row_slice(n, n, a.data()).symmetric_eigenvalues();
        assert!(eig.min() > 0.0, "n = {n}: {}", eig.min());
    }
}

#[test]
fn exp_decay_has_requested_spectrum() {
    let a = generate(&GeneratorSpec::new(
        GeneratorKind::ExpDecay { n: 30, ratio: 0.5 },
        5,
    ))
    .unwrap();
    let s = SpectrumSummary::of(&a.to_dense()).singular_values;
    for (i, v) in s.iter().enumerate() {
        assert!((v - 0.5f64.powi(i as i32)).abs() <= 1e-13, "σ_{i} = {v}");
    }
}

#[test]
fn generators_are_bitwise_reproducible() {
    for kind in [
        GeneratorKind::LowRank { m: 20, n: 15, r: 3 },
        GeneratorKind::LowRankPd {
            m: 20,
            n: 25,
            r: 3,
            decay: Some(0.8),
        },
        GeneratorKind::ExpDecay { n: 12, ratio: 0.9 },
    ] {
        let spec = GeneratorSpec::new(kind, 77);
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
    }
}

#[test]
fn invalid_generator_dimensions() {
    let spec = GeneratorSpec::new(GeneratorKind::LowRank { m: 0, n: 3, r: 1 }, 0);
    assert!(generate(&spec).is_err());
    let spec = GeneratorSpec::new(
        GeneratorKind::LowRankPd {
            m: 4,
            n: 4,
            r: 2,
            decay: Some(1.5),
        },
        0,
    );
    assert!(generate(&spec).is_err());
}

#[test]
fn missing_file_is_an_io_error() {
    assert!(read_matrix_market("/nonexistent/none.mtx").is_err());
}
