//! An independent Hilbert function oracle: every Taylor condition of order
//! below the multiplicity, as plain rational rows, reduced by textbook
//! Gauss-Jordan elimination. Shares no code with the library beyond point
//! construction.

use fatpoints::field::{trial_rng, FieldSpec};
use fatpoints::plane::{build_c_d, build_c_dr, sample_random_points, Configuration};
use fatpoints::{double, hilbert_function, FatPointScheme, PrimeField, ProjectivePoint};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

fn exponents(t: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in (0..=t).rev() {
        for b in (0..=t - a).rev() {
            out.push([a, b, t - a - b]);
        }
    }
    out
}

fn falling(e: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(e - i))
}

/// `∂^alpha x^mono` evaluated at `p`.
fn derivative_at(mono: &[u32; 3], alpha: &[u32; 3], p: &[BigInt]) -> BigInt {
    let mut v = BigInt::one();
    for i in 0..3 {
        if alpha[i] > mono[i] {
            return BigInt::zero();
        }
        v *= falling(mono[i], alpha[i]) * p[i].pow(mono[i] - alpha[i]);
    }
    v
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

fn oracle_hf(points: &[Vec<BigInt>], mults: &[u32]) -> Vec<usize> {
    let degree: usize = mults.iter().map(|&m| (m * (m + 1) / 2) as usize).sum();
    let mut out = Vec::new();
    for t in 0.. {
        let monos = exponents(t);
        let mut rows = Vec::new();
        for (p, &m) in points.iter().zip(mults) {
            for k in 0..m {
                for alpha in exponents(k) {
                    rows.push(
                        monos
                            .iter()
                            .map(|mono| BigRational::from_integer(derivative_at(mono, &alpha, p)))
                            .collect(),
                    );
                }
            }
        }
        out.push(rank(rows));
        if *out.last().unwrap() == degree {
            return out;
        }
    }
    unreachable!()
}

fn oracle_of(z: &FatPointScheme) -> Vec<usize> {
    let points: Vec<Vec<BigInt>> = z
        .points()
        .iter()
        .map(ProjectivePoint::integer_coords)
        .collect();
    oracle_hf(&points, z.multiplicities())
}

fn library(z: &FatPointScheme) -> Vec<usize> {
    hilbert_function(z, &PrimeField::defaults()).unwrap().values
}

fn doubled(x: &Configuration) -> FatPointScheme {
    double(x).unwrap()
}

// Values recorded from an independent exact-fraction computation.

#[test]
fn frozen_random_double_points() {
    let q = FieldSpec::Rational;
    let cases: [(usize, &[usize]); 5] = [
        (1, &[1, 3]),
        (2, &[1, 3, 5, 6]),
        (3, &[1, 3, 6, 9]),
        (5, &[1, 3, 6, 10, 14, 15]),
        (11, &[1, 3, 6, 10, 15, 21, 28, 33]),
    ];
    for (s, expected) in cases {
        let z = doubled(&sample_random_points(s, q, 5).unwrap());
        assert_eq!(library(&z), expected, "s = {s}");
    }
}

#[test]
fn frozen_line_arrangements() {
    let q = FieldSpec::Rational;
    let cases: [(usize, &[usize]); 4] = [
        (3, &[1, 3, 6, 9]),
        (4, &[1, 3, 6, 10, 14, 18]),
        (5, &[1, 3, 6, 10, 15, 20, 25, 30]),
        (6, &[1, 3, 6, 10, 15, 21, 27, 33, 39, 45]),
    ];
    for (d, expected) in cases {
        assert_eq!(
            library(&doubled(&build_c_d(d, q, 5).unwrap())),
            expected,
            "d = {d}"
        );
    }
    let c51 = build_c_dr(5, 1, q, 5).unwrap();
    assert_eq!(
        library(&doubled(&c51)),
        [1, 3, 6, 10, 15, 21, 26, 31, 32, 33]
    );
    assert_eq!(
        library(&FatPointScheme::uniform(&c51, 1).unwrap()),
        [1, 3, 6, 10, 11]
    );
    let c41 = build_c_dr(4, 1, q, 5).unwrap();
    assert_eq!(library(&doubled(&c41)), [1, 3, 6, 10, 15, 19, 20, 21]);
}

#[test]
fn oracle_reproduces_the_frozen_values() {
    let q = FieldSpec::Rational;
    assert_eq!(
        oracle_of(&doubled(&build_c_d(4, q, 1).unwrap())),
        [1, 3, 6, 10, 14, 18]
    );
    assert_eq!(
        oracle_of(&doubled(&sample_random_points(5, q, 1).unwrap())),
        [1, 3, 6, 10, 14, 15]
    );
    assert_eq!(
        oracle_of(&doubled(&build_c_dr(4, 1, q, 1).unwrap())),
        [1, 3, 6, 10, 15, 19, 20, 21]
    );
}

#[test]
fn library_matches_oracle_on_constructions() {
    let q = FieldSpec::Rational;
    for seed in 0..2 {
        for x in [
            build_c_d(3, q, seed).unwrap(),
            build_c_dr(3, 2, q, seed).unwrap(),
            build_c_d(4, q, seed).unwrap(),
            sample_random_points(6, q, seed).unwrap(),
        ] {
            let z = doubled(&x);
            assert_eq!(
                library(&z),
                oracle_of(&z),
                "{:?} seed {seed}",
                x.provenance()
            );
        }
    }
}

#[test]
fn library_matches_oracle_on_small_special_schemes() {
    let mut checked = 0;
    for case in 0..60 {
        let rng = &mut trial_rng(21, case);
        let n = rng.gen_range(1..=5);
        let points: Option<Vec<ProjectivePoint>> = (0..n)
            .map(|_| {
                let c: Vec<i64> = (0..3).map(|_| rng.gen_range(-3..=3)).collect();
                ProjectivePoint::from_i64(FieldSpec::Rational, &c).ok()
            })
            .collect();
        let mults: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        let Some(z) = points.and_then(|p| FatPointScheme::new(p, mults).ok()) else {
            continue;
        };
        assert_eq!(
            library(&z),
            oracle_of(&z),
            "case {case}: {:?}",
            z.multiplicities()
        );
        checked += 1;
    }
    assert!(checked >= 30, "only {checked} usable cases");
}
