//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach stdout.

mod common;

use std::time::Instant;

use common::{class_f_sequence, jacobi_eigenvalues, pick_ratio, q, rng};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use spectradiag::feasibility::{riemann_interior_check, ZSequence, ZSide};
use spectradiag::{
    beta_sequence, construct_matrix, cut_stats, decide_diagonal, decouple, equivalence_audit, f_value, kadison_check,
    majorizes, minimal_element, minimal_set, move_toward_endpoints, normalize, truncate_to_finite, Band, Branch,
    DiagonalSequence, GeometricTail, Mass, RealVector, Scalar, SpectrumSpec,
};

const WITNESS_EIGEN_TOL: f64 = 1e-8;
const PROJECTION_TOL: f64 = 1e-10;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn show(v: &[Scalar]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

// ---------------------------------------------------------------- 1

fn complement(v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|x| Scalar::one() - x).collect()
}

fn closed_form(b: &Scalar, n: usize) -> Vec<Vec<Scalar>> {
    let one = Scalar::one();
    let c = &one - b;
    let r = b / &c;
    let p = |e: u32| b.pow(e);
    let i = |v: i64| Scalar::from_integer(v);
    let flat = |x: Scalar, n: usize| vec![x; n];
    match n {
        2 => vec![if b < &q(1, 3) { vec![&one - &r, r.clone()] } else { flat(q(1, 2), 2) }],
        3 => {
            let below_golden = p(2) - i(3) * b + &one > Scalar::zero();
            let mu1 = if below_golden {
                vec![&one - &r, b.clone(), p(2) / &c]
            } else if i(3) * p(2) + b - &one < Scalar::zero() {
                let x = q(1, 2) - p(2) / (i(2) * &c);
                vec![x.clone(), x, p(2) / &c]
            } else {
                flat(q(1, 3), 3)
            };
            let mu2 = complement(&mu1);
            vec![mu1, mu2]
        }
        5 => {
            let below_golden = p(2) - i(3) * b + &one > Scalar::zero();
            let mu1 = if below_golden {
                vec![&one - &r, b.clone(), p(2), p(3), p(4) / &c]
            } else if b < &q(1, 2) {
                let x = q(1, 2) - p(2) / (i(2) * &c);
                vec![x.clone(), x, p(2), p(3), p(4) / &c]
            } else if i(5) * p(3) + i(2) * b - i(2) < Scalar::zero() {
                let y = q(1, 3) - p(3) / (i(3) * &c);
                let z = p(3) / (i(2) * &c);
                vec![y.clone(), y.clone(), y, z.clone(), z]
            } else {
                flat(q(1, 5), 5)
            };
            let mu2 = if b < &q(1, 2) {
                vec![&one - p(2) / &c, c.clone(), b.clone(), p(2), p(3) / &c]
            } else if i(5) * p(2) + i(4) * b - i(4) < Scalar::zero() {
                let w = q(2, 3) - p(2) / (i(3) * &c);
                let v = p(2) / (i(2) * &c);
                vec![w.clone(), w.clone(), w, v.clone(), v]
            } else {
                flat(q(2, 5), 5)
            };
            let mu3 = complement(&mu2);
            let mu4 = complement(&mu1);
            vec![mu1, mu2, mu3, mu4]
        }
        _ => unreachable!(),
    }
}

fn criterion_1() -> Outcome {
    let betas = [q(1, 5), q(1, 4), q(2, 5), q(9, 20), q(1, 2), q(11, 20), q(3, 5), q(7, 10), q(4, 5)];
    let mut compared = 0;
    for b in &betas {
        let seq = beta_sequence(b).map_err(|e| e.to_string())?;
        for n in [2usize, 3, 5] {
            let report = minimal_set(&seq, n).map_err(|e| format!("beta {b}, N {n}: {e}"))?;
            ensure(report.eta.is_zero(), || format!("beta {b}: eta {}", report.eta))?;
            let expected = closed_form(b, n);
            ensure(report.entries.len() == expected.len(), || format!("beta {b}, N {n}: {} entries", report.entries.len()))?;
            for (entry, want) in report.entries.iter().zip(&expected) {
                let mut want = want.clone();
                want.sort();
                let got = entry.mu.sorted();
                ensure(got == want, || {
                    format!("beta {b}, N {n}, k {}: got [{}], expected [{}]", entry.k, show(&got), show(&want))
                })?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} minimal elements exact"))
}

// ---------------------------------------------------------------- 2

/// Nonincreasing tuples of length `n` from `1..=99` summing to `total`.
fn grid_points(n: usize, total: i64, cap: i64, out: &mut Vec<i64>, acc: &mut Vec<Vec<i64>>) {
    if n == 0 {
        if total == 0 {
            acc.push(out.clone());
        }
        return;
    }
    let hi = cap.min(total - (n as i64 - 1));
    for x in (1..=hi).rev() {
        if x * (n as i64) < total {
            break;
        }
        out.push(x);
        grid_points(n - 1, total - x, x, out, acc);
        out.pop();
    }
}

fn majorized_int(d: &[i64], lambda: &[i64]) -> bool {
    let mut d = d.to_vec();
    let mut l = lambda.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    l.sort_unstable_by(|a, b| b.cmp(a));
    let (mut sd, mut sl) = (0, 0);
    for (x, y) in d.iter().zip(&l) {
        sd += x;
        sl += y;
        if sd > sl {
            return false;
        }
    }
    sd == sl
}

fn criterion_2() -> Outcome {
    let mut rng = rng(2);
    let (mut sequences, mut runs, mut points, mut mismatches) = (0, 0, 0usize, 0usize);
    let mut first = None;
    while sequences < 100 {
        let m = rng.gen_range(2..=8usize);
        let mut twentieths: Vec<i64> = (0..m).map(|_| rng.gen_range(0..=20)).collect();
        twentieths.sort_unstable_by(|a, b| b.cmp(a));
        let total: i64 = twentieths.iter().sum();
        let (big_k, eta20) = (total / 20, total % 20);
        let d: RealVector = twentieths.iter().map(|&x| q(x, 20)).collect();
        let d100: Vec<i64> = twentieths.iter().map(|x| x * 5).collect();
        let eta = q(eta20, 20);
        let mut used = false;
        for n in 1..=3usize {
            if n >= m {
                continue;
            }
            for k in 0..=big_k {
                let level = 100 * k + 5 * eta20;
                if level == 0 || big_k - k > (m - n) as i64 || level >= 100 * n as i64 {
                    continue;
                }
                let entry = minimal_element(&d, big_k as u64, &eta, n, k as u64)
                    .map_err(|e| format!("d = [{}], N {n}, k {k}: {e}", show(d.as_slice())))?;
                used = true;
                runs += 1;
                let mut grid = Vec::new();
                grid_points(n, level, 99, &mut Vec::new(), &mut grid);
                for lam in grid {
                    let ones = (big_k - k) as usize;
                    let zeros = m - n - ones;
                    let padded: Vec<i64> =
                        std::iter::repeat_n(100, ones).chain(lam.iter().copied()).chain(std::iter::repeat_n(0, zeros)).collect();
                    let oracle = majorized_int(&d100, &padded);
                    let lam_s: RealVector = lam.iter().map(|&x| q(x, 100)).collect();
                    let engine = majorizes(&entry.mu, &lam_s).map_err(|e| e.to_string())?;
                    points += 1;
                    if oracle != engine {
                        mismatches += 1;
                        first.get_or_insert_with(|| {
                            format!("d = [{}], N {n}, k {k}, mu = [{}], lambda = {lam:?}", show(d.as_slice()), show(entry.mu.as_slice()))
                        });
                    }
                }
            }
        }
        if used {
            sequences += 1;
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} mismatches, first: {}", first.unwrap_or_default()))?;
    Ok(format!("{sequences} sequences, {runs} (N, k) pairs, {points} grid points, 0 mismatches"))
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Outcome {
    let mut rng = rng(3);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let n = rng.gen_range(1..=10usize);
        let lambda: Vec<Scalar> = (0..n).map(|_| q(rng.gen_range(-20..=20), 20)).collect();
        let mut d = vec![Scalar::zero(); n];
        let weights: Vec<i64> = (0..3).map(|_| rng.gen_range(1..=5)).collect();
        let wsum: i64 = weights.iter().sum();
        for w in &weights {
            let mut perm = lambda.clone();
            perm.shuffle(&mut rng);
            for (di, p) in d.iter_mut().zip(&perm) {
                *di += q(*w, wsum) * p;
            }
        }
        let (lambda, d) = (RealVector(lambda), RealVector(d));
        let w = construct_matrix(&lambda, &d).map_err(|e| format!("case {case}: {e}"))?;
        let diag = w.diagonal();
        ensure(diag.iter().zip(d.iter()).all(|(x, y)| *x == y.to_f64()), || format!("case {case}: diagonal differs"))?;
        let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| w.entry(i, j)).collect()).collect();
        let eig = jacobi_eigenvalues(rows);
        let mut want: Vec<f64> = lambda.iter().map(|x| x.to_f64()).collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let err = eig.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst = worst.max(err);
        ensure(err <= WITNESS_EIGEN_TOL, || format!("case {case}: eigenvalue error {err:e}"))?;
    }
    Ok(format!("100 witnesses, max eigenvalue error {worst:.2e} <= {WITNESS_EIGEN_TOL:e}"))
}

// ---------------------------------------------------------------- 4

fn random_instance(rng: &mut ChaCha8Rng, fix_trace: bool) -> (ZSequence, SpectrumSpec) {
    let n = rng.gen_range(1..=3usize);
    let mut grid: Vec<i64> = (1..20).collect();
    grid.shuffle(rng);
    let mut interior: Vec<i64> = grid[..n].to_vec();
    interior.sort_unstable();
    let mut pairs = vec![(Scalar::zero(), None)];
    pairs.extend(interior.iter().map(|&a| (q(a, 20), Some(rng.gen_range(1..=3u64)))));
    pairs.push((Scalar::one(), None));
    let spec = SpectrumSpec::from_pairs(pairs).unwrap();

    let lower = GeometricTail::new(Scalar::zero(), q(rng.gen_range(1..=4), 10), pick_ratio(rng)).unwrap();
    let upper = GeometricTail::new(Scalar::one(), -q(rng.gen_range(1..=4), 10), pick_ratio(rng)).unwrap();
    let low_edge = lower.term(1);
    let high_edge = upper.term(1);
    let len = rng.gen_range(0..=6usize);
    let mut middle: Vec<Scalar> =
        (0..len).map(|_| q(rng.gen_range(1..20), 20)).filter(|v| v >= &low_edge && v <= &high_edge).collect();
    middle.sort();
    let mut d = ZSequence {
        lower: ZSide::Geometric(lower),
        middle,
        upper: ZSide::Geometric(upper),
        first_middle_index: rng.gen_range(-3..=3),
    };
    if fix_trace {
        let seq = d.to_diagonal(&Scalar::zero(), &Scalar::one()).unwrap();
        let a_n = &spec.pairs()[n].eigenvalue;
        let gap = cut_stats(&seq, a_n, &Scalar::one()).unwrap().trace_gap().unwrap();
        let inner: Scalar = spec.pairs()[1..=n]
            .iter()
            .map(|p| &p.eigenvalue * Scalar::from_integer(p.multiplicity.finite().unwrap() as i64))
            .sum();
        let x = spectradiag::frac_mod_one(&(inner - gap));
        if !x.is_zero() && x >= low_edge && x <= high_edge {
            d.middle.push(x);
            d.middle.sort();
        }
    }
    (d, spec)
}

fn criterion_4() -> Outcome {
    let mut rng = rng(4);
    let mut feasible = 0;
    for case in 0..200 {
        let (d, spec) = random_instance(&mut rng, case % 2 == 0);
        let nspec = normalize(&spec).map_err(|e| e.to_string())?;
        let agree = equivalence_audit(&d, &nspec).map_err(|e| format!("case {case}: {e}"))?;
        ensure(agree, || format!("case {case}: ordered and unordered checks disagree on {d:?}"))?;
        let seq = d.to_diagonal(&Scalar::zero(), &Scalar::one()).unwrap();
        if decide_diagonal(&seq, &spec).map_err(|e| e.to_string())?.feasible {
            feasible += 1;
        }
    }
    let hand = ZSequence {
        lower: ZSide::Geometric(GeometricTail::new(Scalar::zero(), q(1, 2), q(1, 2)).unwrap()),
        middle: vec![],
        upper: ZSide::Geometric(GeometricTail::new(Scalar::one(), q(-1, 2), q(1, 2)).unwrap()),
        first_middle_index: 1,
    };
    let nspec = normalize(
        &SpectrumSpec::from_pairs([(Scalar::zero(), None), (q(1, 2), Some(2)), (Scalar::one(), None)]).unwrap(),
    )
    .unwrap();
    let k1 = riemann_interior_check(&hand, &nspec, 1).map_err(|e| e.to_string())?;
    let k0 = riemann_interior_check(&hand, &nspec, 0).map_err(|e| e.to_string())?;
    ensure(k1 && !k0, || format!("hand instance: k=1 -> {k1}, k=0 -> {k0}"))?;
    ensure(feasible > 0, || "no feasible random instance generated".into())?;
    Ok(format!("200 instances agree ({feasible} feasible); hand instance k=1 passes, k=0 fails"))
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Outcome {
    let halves = |n| DiagonalSequence::finite(Scalar::zero(), Scalar::one(), vec![q(1, 2); n]).unwrap();
    let four = kadison_check(&halves(4)).map_err(|e| e.to_string())?;
    ensure(four.feasible, || "four halves rejected".into())?;
    let lambda = RealVector(vec![Scalar::one(), Scalar::one(), Scalar::zero(), Scalar::zero()]);
    let w = construct_matrix(&lambda, &RealVector(vec![q(1, 2); 4])).map_err(|e| e.to_string())?;
    let mut dev = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let sq: f64 = (0..4).map(|k| w.entry(i, k) * w.entry(k, j)).sum();
            dev = dev.max((sq - w.entry(i, j)).abs());
        }
    }
    ensure(dev <= PROJECTION_TOL, || format!("|P^2 - P| = {dev:e}"))?;
    let three = kadison_check(&halves(3)).map_err(|e| e.to_string())?;
    ensure(!three.feasible, || "three halves accepted".into())?;
    let beta = beta_sequence(&q(1, 4)).unwrap();
    let gap = cut_stats(&beta, &q(1, 2), &Scalar::one()).unwrap().trace_gap();
    ensure(gap == Some(Scalar::zero()), || format!("C - D = {gap:?}"))?;
    let v = kadison_check(&beta).map_err(|e| e.to_string())?;
    ensure(v.feasible && v.k0 == Some(0), || format!("beta verdict {v:?}"))?;
    Ok(format!("4x4 projection |P^2-P| = {dev:.1e} <= {PROJECTION_TOL:e}; three halves infeasible; beta C-D = 0"))
}

// ---------------------------------------------------------------- 6

fn finite_mass(m: &Mass) -> Scalar {
    m.finite().expect("finite aggregate").clone()
}

fn check_move(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let len = rng.gen_range(2..=10);
    let mut values = common::finite_unit_sequence(rng, len);
    values.sort();
    let seq = DiagonalSequence::finite(Scalar::zero(), Scalar::one(), values.clone()).unwrap();
    let split = rng.gen_range(0..=len);
    let i0: Vec<Scalar> = values[..split].iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
    let i1: Vec<Scalar> = values[split..].iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
    let room0: Scalar = i0.iter().sum();
    let room1: Scalar = i1.iter().map(|v| Scalar::one() - v).sum();
    let eta0 = std::cmp::min(room0, room1) * q(rng.gen_range(0..=10), 10);
    let (out, receipt) = move_toward_endpoints(&seq, &i0, &i1, &eta0, &Scalar::zero(), &Scalar::one())
        .map_err(|e| format!("move: {e}"))?;
    for name in ["I0 excess over A", "I1 deficit below B"] {
        let a = receipt.aggregate(name).ok_or("missing aggregate")?;
        ensure(finite_mass(&a.before) - finite_mass(&a.after) == eta0, || format!("move: {name} off"))?;
    }
    let total = |s: &DiagonalSequence| finite_mass(&s.mass_in(&Band::all(), &Scalar::zero()));
    ensure(total(&out) == total(&seq), || "move: trace changed".into())?;
    ensure(receipt.replay_backwards(&out).map_err(|e| e.to_string())? == seq, || "move: replay differs".into())
}

fn check_decouple(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let mut seq = DiagonalSequence::new(q(-1, 1), Scalar::one()).unwrap();
    seq = match rng.gen_range(0..3) {
        0 => seq.with_infinite_atom(Scalar::zero()).unwrap(),
        1 => seq.with_tail(GeometricTail::new(Scalar::zero(), q(rng.gen_range(1..=10), 10), pick_ratio(rng)).unwrap()).unwrap(),
        _ => seq.with_tail(GeometricTail::new(Scalar::zero(), -q(rng.gen_range(1..=10), 10), pick_ratio(rng)).unwrap()).unwrap(),
    };
    for _ in 0..rng.gen_range(0..5) {
        seq = seq.with_atom(q(rng.gen_range(-20..=20), 20), 1).unwrap();
    }
    let gamma = q(rng.gen_range(1..=10), 10);
    let delta = q(rng.gen_range(1..=10), 10);
    let eta = q(rng.gen_range(0..=12), 8);
    let (out, receipt) = decouple(&seq, &gamma, &delta, &eta).map_err(|e| format!("decouple: {e}"))?;
    let neg = receipt.aggregate("J negative sum").ok_or("missing aggregate")?;
    let pos = receipt.aggregate("J positive sum").ok_or("missing aggregate")?;
    ensure(finite_mass(&neg.before) - finite_mass(&neg.after) == eta, || "decouple: negative part".into())?;
    ensure(finite_mass(&pos.after) - finite_mass(&pos.before) == eta, || "decouple: positive part".into())?;
    let outside = |s: &DiagonalSequence| {
        (
            s.values_in(&Band::below(&-&gamma)),
            s.values_in(&Band::above(&delta)),
        )
    };
    ensure(outside(&out) == outside(&seq), || "decouple: entries outside J changed".into())
}

fn check_truncate(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let seq = class_f_sequence(rng);
    let eps = q(rng.gen_range(1..=10), 20);
    let (out, receipt) = truncate_to_finite(&seq, &eps).map_err(|e| format!("truncate: {e}"))?;
    for a in &receipt.aggregates {
        ensure(a.before == a.after, || format!("truncate: {} changed", a.name))?;
    }
    let one = Scalar::one();
    let band = Band::closed(&eps, &(&one - &eps));
    ensure(out.values_in(&band) == seq.values_in(&band), || "truncate: middle band changed".into())?;
    ensure(out.count_in(&Band::below(&eps)) == seq.count_in(&Band::below(&eps)), || "truncate: I0 changed".into())?;
    ensure(
        out.values_in(&Band::open(&Scalar::zero(), &one)).is_some(),
        || "truncate: infinitely many interior entries remain".into(),
    )
}

fn interior_spectrum(rng: &mut ChaCha8Rng, eps: &Scalar) -> SpectrumSpec {
    let lo = (eps * Scalar::from_integer(20)).ceil().to_i64().unwrap();
    let hi = 20 - lo;
    let mut grid: Vec<i64> = (lo..=hi).collect();
    grid.shuffle(rng);
    let n = rng.gen_range(0..=3usize).min(grid.len());
    let mut interior = grid[..n].to_vec();
    interior.sort_unstable();
    let mut pairs = vec![(Scalar::zero(), None)];
    pairs.extend(interior.iter().map(|&a| (q(a, 20), Some(rng.gen_range(1..=3u64)))));
    pairs.push((Scalar::one(), None));
    SpectrumSpec::from_pairs(pairs).unwrap()
}

fn criterion_6() -> Outcome {
    let mut rng = rng(6);
    for i in 0..100 {
        check_move(&mut rng).map_err(|e| format!("move #{i}: {e}"))?;
        check_decouple(&mut rng).map_err(|e| format!("decouple #{i}: {e}"))?;
        check_truncate(&mut rng).map_err(|e| format!("truncate #{i}: {e}"))?;
    }
    let mut feasible = 0;
    for i in 0..50 {
        let eps = q(rng.gen_range(1..=5), 20);
        let spec = interior_spectrum(&mut rng, &eps);
        let mut seq = class_f_sequence(&mut rng);
        if i % 2 == 0 {
            let top = spec.pairs().len() - 2;
            let probe = if top == 0 { q(1, 2) } else { spec.pairs()[top].eigenvalue.clone() };
            let gap = cut_stats(&seq, &probe, &Scalar::one()).unwrap().trace_gap().unwrap();
            let inner: Scalar = spec.pairs()[1..=top]
                .iter()
                .map(|p| &p.eigenvalue * Scalar::from_integer(p.multiplicity.finite().unwrap() as i64))
                .sum();
            let x = spectradiag::frac_mod_one(&(inner - gap));
            if !x.is_zero() {
                seq = seq.with_atom(x, 1).unwrap();
            }
        }
        let (truncated, _) = truncate_to_finite(&seq, &eps).map_err(|e| format!("instance {i}: {e}"))?;
        let before = decide_diagonal(&seq, &spec).map_err(|e| e.to_string())?;
        let after = decide_diagonal(&truncated, &spec).map_err(|e| e.to_string())?;
        ensure(before == after, || format!("instance {i}: verdict changed {before:?} -> {after:?}"))?;
        if before.feasible {
            feasible += 1;
        }
    }
    Ok(format!("300 receipts exact; 50 verdicts unchanged by truncation ({feasible} feasible)"))
}

// ---------------------------------------------------------------- 7

fn criterion_7() -> Outcome {
    let seq = DiagonalSequence::new(Scalar::zero(), Scalar::one())
        .unwrap()
        .with_tail(GeometricTail::new(Scalar::zero(), q(1, 2), q(1, 2)).unwrap())
        .unwrap()
        .with_tail(GeometricTail::new(Scalar::one(), q(-1, 2), q(1, 2)).unwrap())
        .unwrap();
    let spec = |n1| SpectrumSpec::from_pairs([(Scalar::zero(), None), (q(1, 2), Some(n1)), (Scalar::one(), None)]).unwrap();
    let even = decide_diagonal(&seq, &spec(2)).map_err(|e| e.to_string())?;
    ensure(even.feasible && even.branch == Branch::TwoInfiniteSummable, || format!("N1 = 2: {even:?}"))?;
    ensure(
        even.slack("interior:r=1") == Some(&spectradiag::Slack::Finite(Scalar::zero())),
        || format!("N1 = 2 slack {:?}", even.slack("interior:r=1")),
    )?;
    let odd = decide_diagonal(&seq, &spec(1)).map_err(|e| e.to_string())?;
    ensure(!odd.feasible, || format!("N1 = 1: {odd:?}"))?;
    Ok(format!("N1=2 feasible with slack 0 at r=1; N1=1 infeasible ({})", odd.failed_condition.unwrap_or_default()))
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Outcome {
    let beta = beta_sequence(&q(1, 4)).unwrap();
    let f = f_value(&beta, &q(1, 2)).map_err(|e| e.to_string())?;
    ensure(f == q(1, 3), || format!("f(1/2) = {f}"))?;
    let mut rng = rng(8);
    for s in 0..20 {
        let seq = class_f_sequence(&mut rng);
        let values: Vec<Scalar> = (1..=99).map(|i| f_value(&seq, &q(i, 100)).unwrap()).collect();
        for i in 1..values.len() - 1 {
            let mid = (&values[i - 1] + &values[i + 1]) / Scalar::from_integer(2);
            ensure(values[i] >= mid, || format!("sequence {s}: concavity fails at {}/100", i + 1))?;
        }
    }
    Ok("f_{1/4}(1/2) = 1/3; midpoint concavity on 99 points for 20 sequences".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("beta-example reproduction", criterion_1),
        ("minimal-element oracle equivalence", criterion_2),
        ("matrix witness fidelity", criterion_3),
        ("ordered vs unordered interior majorization", criterion_4),
        ("Kadison exactness", criterion_5),
        ("transform conservation", criterion_6),
        ("parity obstruction", criterion_7),
        ("trace-gap function", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 8 acceptance criteria passed");
}
