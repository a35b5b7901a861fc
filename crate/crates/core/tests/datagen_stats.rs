use std::io::Write;

use pgopt::datagen::{
    asymmetric_noise, gen_planted_path, gen_portfolio, gen_shortest_path, gen_simple_misspec, load_returns_csv,
    sample_covariance, usable_pairs, Dataset, NoiseSpec, ReturnsCsvOptions,
};
use pgopt::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn moments(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, v)
}

#[test]
fn asymmetric_noise_has_mean_zero_variance_quarter() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for alpha in [0.0, 0.5, 1.0] {
        let draws: Vec<f64> = (0..1_000_000).map(|_| asymmetric_noise(alpha, &mut rng)).collect();
        let (m, v) = moments(&draws);
        assert!(m.abs() < 0.002, "alpha {alpha}: mean {m}");
        assert!((v - 0.25).abs() < 0.01, "alpha {alpha}: variance {v}");
    }
}

#[test]
fn fully_asymmetric_noise_is_skewed() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut draws: Vec<f64> = (0..100_000).map(|_| asymmetric_noise(1.0, &mut rng)).collect();
    draws.sort_by(f64::total_cmp);
    // exponential minus its mean: bounded below by -0.5, median 0.5 ln 2 - 0.5
    assert!(draws[0] >= -0.5);
    let median = draws[draws.len() / 2];
    assert!((median - (0.5 * 2f64.ln() - 0.5)).abs() < 0.01, "{median}");
}

fn assert_mean_zero_noise(ds: &Dataset, label: &str) {
    let f = ds.f_star.as_ref().expect("synthetic data has f*");
    for j in 0..ds.d() {
        let resid: Vec<f64> = ds.y.iter().zip(f).map(|(y, f)| y[j] - f[j]).collect();
        let (m, v) = moments(&resid);
        let se = (v / resid.len() as f64).sqrt();
        assert!(m.abs() <= 3.0 * se + 1e-15, "{label} coordinate {j}: mean {m}, se {se}");
    }
}

#[test]
fn generators_have_mean_zero_noise() {
    assert_mean_zero_noise(&gen_simple_misspec(100_000, 0.0, 1.0, 1).unwrap(), "simple");
    assert_mean_zero_noise(&gen_shortest_path(100_000, NoiseSpec::mult_uniform(), 2, 9).unwrap(), "shortest mult");
    assert_mean_zero_noise(&gen_planted_path(100_000, NoiseSpec::add_gaussian(), 4, 9).unwrap(), "planted add");
}

#[test]
fn portfolio_noise_covariance_is_half_sigma() {
    // three assets, a few distinct periods with a known sample covariance
    let returns = vec![
        vec![0.5, 0.1, -0.2],
        vec![-0.3, 0.4, 0.1],
        vec![0.2, -0.5, 0.3],
        vec![0.1, 0.2, -0.4],
        vec![-0.4, -0.1, 0.2],
    ];
    let sigma = sample_covariance(&returns);
    let ds = gen_portfolio(&returns, 100_000, 0.5, 11).unwrap();
    let eta: Vec<Vec<f64>> = ds
        .x
        .iter()
        .zip(&ds.y)
        .map(|(x, y)| {
            let t = returns.iter().position(|r| r.iter().zip(y).all(|(a, b)| *a == -b)).unwrap();
            x.iter().zip(&returns[t - 1]).map(|(a, b)| a - b).collect()
        })
        .collect();
    let emp = sample_covariance(&eta);
    for i in 0..3 {
        for j in 0..3 {
            assert!(
                (emp[(i, j)] - 0.5 * sigma[(i, j)]).abs() < 0.02,
                "entry ({i},{j}): {} vs {}",
                emp[(i, j)],
                0.5 * sigma[(i, j)]
            );
        }
    }
}

fn write_temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn small_opts() -> ReturnsCsvOptions {
    ReturnsCsvOptions {
        columns: 3,
        min_rows: 1,
        in_percent: false,
    }
}

#[test]
fn toy_returns_file_round_trips() {
    let f = write_temp("a,b,c\n0.1,-0.2,0.3\n0.25,0,-1.5\n1e-3,2,3\n");
    let rows = load_returns_csv(f.path(), &small_opts()).unwrap();
    assert_eq!(rows, vec![vec![0.1, -0.2, 0.3], vec![0.25, 0.0, -1.5], vec![1e-3, 2.0, 3.0]]);
}

#[test]
fn label_column_is_skipped_and_percent_converted() {
    let f = write_temp("month,a,b,c\n192607,1.5,-2,3\n192608,0,10,-50\n");
    let opts = ReturnsCsvOptions {
        in_percent: true,
        ..small_opts()
    };
    let rows = load_returns_csv(f.path(), &opts).unwrap();
    assert_eq!(rows, vec![vec![0.015, -0.02, 0.03], vec![0.0, 0.1, -0.5]]);
}

#[test]
fn missing_column_names_the_row() {
    let f = write_temp("a,b,c\n0.1,0.2,0.3\n0.1,0.2\n");
    match load_returns_csv(f.path(), &small_opts()) {
        Err(Error::Csv { line, message, .. }) => {
            assert_eq!(line, 3);
            assert!(message.contains("fields"), "{message}");
        }
        other => panic!("expected a CSV error, got {other:?}"),
    }
    let g = write_temp("a,b,c\n0.1,x,0.3\n");
    match load_returns_csv(g.path(), &small_opts()) {
        Err(Error::Csv { line, message, .. }) => {
            assert_eq!(line, 2);
            assert!(message.contains("not a number"), "{message}");
        }
        other => panic!("expected a CSV error, got {other:?}"),
    }
}

#[test]
fn wrong_column_count_and_short_files_are_rejected() {
    let f = write_temp("a,b\n0.1,0.2\n");
    assert!(load_returns_csv(f.path(), &small_opts()).is_err());
    let g = write_temp("a,b,c\n0.1,0.2,0.3\n");
    let strict = ReturnsCsvOptions {
        min_rows: 24,
        ..small_opts()
    };
    assert!(load_returns_csv(g.path(), &strict).is_err());
}

#[test]
fn a_ten_year_file_gives_119_pairs() {
    let mut text = (0..12).map(|j| format!("s{j}")).collect::<Vec<_>>().join(",");
    text.push('\n');
    for t in 0..120 {
        let row: Vec<String> = (0..12).map(|j| format!("{}", ((t * 7 + j * 3) % 11) as f64 / 100.0 - 0.05 + t as f64 * 1e-5)).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    let f = write_temp(&text);
    let rows = load_returns_csv(f.path(), &ReturnsCsvOptions::default()).unwrap();
    assert_eq!(rows.len(), 120);
    assert_eq!(usable_pairs(rows.len()), 119);
    // every sampled pair uses a month with a predecessor
    let ds = gen_portfolio(&rows, 500, 0.0, 1).unwrap();
    for (x, y) in ds.x.iter().zip(&ds.y) {
        let t = rows.iter().position(|r| r.iter().zip(y).all(|(a, b)| *a == -b)).unwrap();
        assert!(t >= 1);
        assert_eq!(*x, rows[t - 1]);
    }
}
