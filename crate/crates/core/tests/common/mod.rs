#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use spectradiag::{DiagonalSequence, GeometricTail, Scalar};

pub fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn pick_ratio(rng: &mut ChaCha8Rng) -> Scalar {
    [q(1, 2), q(1, 3), q(2, 5)].choose(rng).unwrap().clone()
}

/// Tails accumulating at 0 and at 1, a few interior atoms, and optionally
/// infinite atoms at the endpoints.
pub fn class_f_sequence(rng: &mut ChaCha8Rng) -> DiagonalSequence {
    let mut s = DiagonalSequence::new(Scalar::zero(), Scalar::one())
        .unwrap()
        .with_tail(GeometricTail::new(Scalar::zero(), q(rng.gen_range(1..=10), 10), pick_ratio(rng)).unwrap())
        .unwrap()
        .with_tail(GeometricTail::new(Scalar::one(), -q(rng.gen_range(1..=10), 10), pick_ratio(rng)).unwrap())
        .unwrap();
    for _ in 0..rng.gen_range(0..5) {
        s = s.with_atom(q(rng.gen_range(1..20), 20), rng.gen_range(1..3)).unwrap();
    }
    if rng.gen_bool(0.3) {
        s = s.with_infinite_atom(Scalar::zero()).unwrap();
    }
    if rng.gen_bool(0.3) {
        s = s.with_infinite_atom(Scalar::one()).unwrap();
    }
    s
}

pub fn finite_unit_sequence(rng: &mut ChaCha8Rng, len: usize) -> Vec<Scalar> {
    (0..len).map(|_| q(rng.gen_range(0..=20), 20)).collect()
}

/// Cyclic Jacobi eigenvalues of a symmetric matrix, ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                if a[p][r].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[r][r] - a[p][p]) / (2.0 * a[p][r]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (kp, kr) = (row[p], row[r]);
                    row[p] = c * kp - s * kr;
                    row[r] = s * kp + c * kr;
                }
                let (row_p, row_r) = (a[p].clone(), a[r].clone());
                for (k, (pk, rk)) in row_p.into_iter().zip(row_r).enumerate() {
                    a[p][k] = c * pk - s * rk;
                    a[r][k] = s * pk + c * rk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}
