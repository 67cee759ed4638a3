use gft_exact::rational::is_reduced;
use gft_exact::{
    eliminate, rank, solve, verify, EliminationOptions, PivotStrategy, Rational, SolveOutcome, SparseRationalMatrix,
    SparseVec,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

const STRATEGIES: [PivotStrategy; 2] = [PivotStrategy::SmallestPivot, PivotStrategy::FirstNonzero];

/// Fraction-free rank of an integer matrix.
fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                m[i][j] = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Each row times the lcm of its denominators. Row scaling keeps the rank.
fn integer_rows(dense: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    dense
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, v| num_integer::Integer::lcm(&acc, &v.denom()));
            row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect()
}

fn oracle_rank(a: &SparseRationalMatrix) -> usize {
    bareiss_rank(integer_rows(&a.to_dense()))
}

fn rational() -> impl Strategy<Value = Rational> {
    prop_oneof![
        3 => Just(Rational::zero()),
        4 => (-9i64..=9, 1i64..=6).prop_map(|(n, d)| Rational::new(n, d)),
    ]
}

fn matrix(max: usize) -> impl Strategy<Value = SparseRationalMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(rational(), c), r)
            .prop_map(|rows| SparseRationalMatrix::from_dense(&rows))
    })
}

/// Low-rank matrices built as products, so dependent rows are common.
fn low_rank(max: usize) -> impl Strategy<Value = SparseRationalMatrix> {
    (1..=max, 1..=max, 1usize..=4).prop_flat_map(|(r, c, k)| {
        (
            prop::collection::vec(prop::collection::vec(rational(), k), r),
            prop::collection::vec(prop::collection::vec(rational(), c), k),
        )
            .prop_map(move |(left, right)| {
                let rows: Vec<Vec<Rational>> = left
                    .iter()
                    .map(|l| (0..c).map(|j| l.iter().zip(&right).map(|(a, row)| a * &row[j]).sum()).collect())
                    .collect();
                SparseRationalMatrix::from_dense(&rows)
            })
    })
}

fn rhs(rows: usize) -> impl Strategy<Value = SparseVec> {
    prop::collection::vec(rational(), rows).prop_map(|v| SparseVec::from_pairs(v.into_iter().enumerate()))
}

fn system(max: usize) -> impl Strategy<Value = (SparseRationalMatrix, SparseVec)> {
    prop_oneof![matrix(max), low_rank(max)].prop_flat_map(|a| {
        let r = a.nrows();
        (Just(a), rhs(r))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_matches_bareiss(a in prop_oneof![matrix(20), low_rank(20)]) {
        let want = oracle_rank(&a);
        for s in STRATEGIES {
            prop_assert_eq!(rank(&a, s).unwrap(), want);
        }
    }

    #[test]
    fn solve_then_verify((a, b) in system(12)) {
        for s in STRATEGIES {
            let rep = solve(&a, &b, EliminationOptions::new(s)).unwrap();
            match &rep.outcome {
                SolveOutcome::Solved(x) => {
                    prop_assert!(verify(&a, x, &b).unwrap());
                    prop_assert!(rep.residual_exact_zero);
                }
                SolveOutcome::Infeasible(c) => {
                    let aug = a.with_column(b.clone()).unwrap();
                    prop_assert_eq!(c.rank, oracle_rank(&a));
                    prop_assert_eq!(c.augmented_rank, oracle_rank(&aug));
                    prop_assert_eq!(c.augmented_rank, c.rank + 1);
                }
            }
        }
    }

    #[test]
    fn consistent_right_hand_sides_always_solve(a in low_rank(12), x0 in prop::collection::vec(rational(), 12)) {
        let x0 = SparseVec::from_pairs(x0.into_iter().take(a.ncols()).enumerate());
        let b = SparseVec::from_pairs(gft_exact::mat_vec(&a, &x0).unwrap().into_iter().enumerate());
        for s in STRATEGIES {
            let rep = solve(&a, &b, EliminationOptions::new(s)).unwrap();
            prop_assert!(rep.is_solved());
        }
    }

    #[test]
    fn eliminated_rows_stay_in_lowest_terms((a, b) in system(12)) {
        for s in STRATEGIES {
            let ech = eliminate(&a, &b, EliminationOptions::new(s)).unwrap();
            for p in &ech.pivots {
                prop_assert!(p.row.iter().all(|(_, v)| is_reduced(v) && !v.is_zero()));
            }
            if let Some(x) = ech.back_substitute() {
                prop_assert!(x.iter().all(is_reduced));
            }
        }
    }

    #[test]
    fn arithmetic_matches_big_rationals(a in (-1_000_000i64..1_000_000, 1i64..1000), b in (-1_000_000i64..1_000_000, 1i64..1000)) {
        let (x, y) = (Rational::new(a.0, a.1), Rational::new(b.0, b.1));
        let (bx, by) = (BigRational::new(a.0.into(), a.1.into()), BigRational::new(b.0.into(), b.1.into()));
        prop_assert_eq!(BigRational::from(&(&x + &y)), &bx + &by);
        prop_assert_eq!(BigRational::from(&(&x - &y)), &bx - &by);
        prop_assert_eq!(BigRational::from(&(&x * &y)), &bx * &by);
        if !y.is_zero() {
            prop_assert_eq!(BigRational::from(&(&x / &y)), &bx / &by);
        }
        prop_assert!(is_reduced(&(&x * &y)));
    }
}

/// Partial-pivot elimination in f64.
fn float_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = a.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        b.swap(c, p);
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for j in c..n {
                a[i][j] -= f * a[c][j];
            }
            b[i] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

#[test]
fn square_solves_agree_with_floating_point() {
    // Diagonally dominant, so the float solve is well conditioned.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    for n in [3, 8, 20] {
        let dense: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = Rational::new(rng.random_range(-5..=5), rng.random_range(1..=4));
                        if i == j { &v + &Rational::from_integer(4 * n as i64) } else { v }
                    })
                    .collect()
            })
            .collect();
        let b: Vec<Rational> = (0..n).map(|_| Rational::new(rng.random_range(-20..=20), rng.random_range(1..=3))).collect();
        let a = SparseRationalMatrix::from_dense(&dense);
        let bv = SparseVec::from_pairs(b.iter().cloned().enumerate());
        let fx = float_solve(
            dense.iter().map(|r| r.iter().map(Rational::to_f64).collect()).collect(),
            b.iter().map(Rational::to_f64).collect(),
        );
        for s in STRATEGIES {
            let rep = solve(&a, &bv, EliminationOptions::new(s)).unwrap();
            let x = rep.solution().unwrap();
            for (j, f) in fx.iter().enumerate() {
                assert!((x.get(j).to_f64() - f).abs() < 1e-10 * (1.0 + f.abs()), "n = {n}, x{j}");
            }
        }
    }
}

#[test]
fn identity_rank_is_size() {
    for n in [0, 1, 7, 50] {
        for s in STRATEGIES {
            assert_eq!(rank(&SparseRationalMatrix::identity(n), s).unwrap(), n);
        }
    }
}

#[test]
fn one_by_one_is_exact_quotient() {
    let a = SparseRationalMatrix::from_dense(&[vec![Rational::new(3, 7)]]);
    let b = SparseVec::from_pairs([(0, Rational::new(-5, 2))]);
    let rep = solve(&a, &b, EliminationOptions::new(PivotStrategy::SmallestPivot)).unwrap();
    assert_eq!(rep.solution().unwrap().get(0), Rational::new(-35, 6));
}

#[test]
fn perturbed_solution_fails_verification() {
    let a = SparseRationalMatrix::from_dense(&[
        vec![Rational::from_integer(1), Rational::from_integer(2), Rational::zero()],
        vec![Rational::zero(), Rational::new(1, 3), Rational::from_integer(-1)],
    ]);
    let b = SparseVec::from_pairs([(0, Rational::from_integer(3)), (1, Rational::new(1, 3))]);
    let rep = solve(&a, &b, EliminationOptions::new(PivotStrategy::FirstNonzero)).unwrap();
    let x = rep.solution().unwrap().clone();
    assert!(verify(&a, &x, &b).unwrap());
    for j in 0..3 {
        let bumped = SparseVec::from_pairs(x.iter().map(|(i, v)| (i, v.clone())).chain([(j, Rational::one())]));
        assert!(!verify(&a, &bumped, &b).unwrap(), "bump at {j}");
    }
    assert!(verify(&a, &SparseVec::new(), &SparseVec::new()).unwrap());
}
