#![allow(dead_code)]

use pgopt::oracle::OracleSpec;
use rand::Rng;

/// All monotone paths on the 5x5 grid, enumerated from 8-bit move masks
/// (bit set = move right) rather than through the library's helpers.
pub fn grid5_paths_bruteforce() -> Vec<Vec<f64>> {
    let mut paths = Vec::new();
    for mask in 0u32..256 {
        if mask.count_ones() != 4 {
            continue;
        }
        let mut z = vec![0.0; 40];
        let (mut r, mut c) = (0usize, 0usize);
        for step in 0..8 {
            if mask >> step & 1 == 1 {
                z[r * 4 + c] = 1.0;
                c += 1;
            } else {
                z[20 + c * 4 + r] = 1.0;
                r += 1;
            }
        }
        paths.push(z);
    }
    paths
}

/// Vertices of `{0 <= z <= cap, sum z = 1}`: every coordinate is 0 or cap
/// except at most one, which takes the remainder.
pub fn capped_simplex_vertices(d: usize, cap: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for free in 0..d {
        for mask in 0u32..(1 << d) {
            if mask >> free & 1 == 1 {
                continue;
            }
            let mut z: Vec<f64> = (0..d).map(|j| if mask >> j & 1 == 1 { cap } else { 0.0 }).collect();
            let rest = 1.0 - z.iter().sum::<f64>();
            if rest < -1e-12 || rest > cap + 1e-12 {
                continue;
            }
            z[free] = rest.max(0.0);
            out.push(z);
        }
    }
    out
}

pub fn brute_min(points: &[Vec<f64>], t: &[f64]) -> f64 {
    points
        .iter()
        .map(|z| z.iter().zip(t).map(|(a, b)| a * b).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

pub fn uniform_vec<R: Rng>(rng: &mut R, d: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(lo..hi)).collect()
}

/// A random direction scaled to norm at most one.
pub fn unit_ball_vec<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    let v = uniform_vec(rng, d, -1.0, 1.0);
    let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let r: f64 = rng.random_range(0.0..1.0);
    if n == 0.0 {
        return v;
    }
    v.iter().map(|a| a * r / n).collect()
}

pub fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Oracles used by the surrogate-bound checks.
pub fn bound_oracles() -> Vec<OracleSpec> {
    vec![OracleSpec::binary(), OracleSpec::Interval, OracleSpec::grid5()]
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
