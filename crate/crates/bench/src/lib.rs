//! Shared fixtures for the benchmarks.

use spectradiag::{DiagonalSequence, GeometricTail, RealVector, Scalar, SpectrumSpec};

pub fn two_sided(ratio: Scalar, atoms: usize) -> DiagonalSequence {
    let mut s = DiagonalSequence::new(Scalar::zero(), Scalar::one())
        .unwrap()
        .with_tail(GeometricTail::new(Scalar::zero(), Scalar::one(), ratio.clone()).unwrap())
        .unwrap()
        .with_tail(GeometricTail::new(Scalar::one(), -Scalar::one(), ratio).unwrap())
        .unwrap();
    for i in 0..atoms {
        s = s.with_atom(Scalar::ratio(1 + (7 * i as i64) % 19, 20), 1).unwrap();
    }
    s
}

/// `{(0, inf), (j/(n+1), 2) for j = 1..=n, (1, inf)}`.
pub fn staircase_spectrum(n: usize) -> SpectrumSpec {
    let mut pairs = vec![(Scalar::zero(), None)];
    let denom = n as i64 + 1;
    pairs.extend((1..=n as i64).map(|j| (Scalar::ratio(j, denom), Some(2))));
    pairs.push((Scalar::one(), None));
    SpectrumSpec::from_pairs(pairs).unwrap()
}

/// Eigenvalues `0, 1/n, ..., (n-1)/n` and their average repeated, which the
/// eigenvalues always majorize.
pub fn flat_pair(n: usize) -> (RealVector, RealVector) {
    let lambda: RealVector = (0..n as i64).map(|i| Scalar::ratio(i, n as i64)).collect();
    let mean = lambda.sum() / Scalar::from_integer(n as i64);
    (lambda, RealVector(vec![mean; n]))
}
