//! Fat-point schemes and their Hilbert functions.
//!
//! `H(t)` is the rank of the conditions matrix in degree `t`: columns are the
//! degree-`t` monomials (graded lex, `x0 > x1 > ...`), and each point of
//! multiplicity `m` contributes one row per partial-derivative operator of
//! order `min(m - 1, t)`, evaluated at the point. With `p > t`, Euler's
//! relation makes vanishing of those partials equivalent to vanishing of all
//! partials of order `< m`, so the row count of a point equals its degree
//! contribution once `t >= m - 1`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::error::{Error, PrimeValues, Result};
use crate::field::{FieldSpec, PrimeField, Scalar};
use crate::linalg::{bareiss_rank, rank_residues, DenseMatrix};
use crate::plane::{Configuration, ProjectivePoint};

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Exponent vectors of `vars` variables with the given total degree, in
/// graded-lex order with the first variable largest.
pub fn monomials(vars: usize, total: usize) -> Vec<Vec<u32>> {
    fn go(vars: usize, total: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if vars == 1 {
            prefix.push(total as u32);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=total).rev() {
            prefix.push(e as u32);
            go(vars - 1, total - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(binomial(total + vars - 1, vars - 1));
    if vars > 0 {
        go(vars, total, &mut Vec::with_capacity(vars), &mut out);
    }
    out
}

/// Distinct points with positive multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FatPointScheme {
    points: Vec<ProjectivePoint>,
    multiplicities: Vec<u32>,
    ambient_dim: usize,
    field: FieldSpec,
}

impl FatPointScheme {
    pub fn new(points: Vec<ProjectivePoint>, multiplicities: Vec<u32>) -> Result<Self> {
        if points.len() != multiplicities.len() {
            return Err(Error::InvalidInput(format!(
                "{} points but {} multiplicities",
                points.len(),
                multiplicities.len()
            )));
        }
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidInput("empty scheme".into()))?;
        let (ambient_dim, field) = (first.ambient_dim(), first.field());
        if ambient_dim == 0 {
            return Err(Error::InvalidInput(
                "ambient dimension must be positive".into(),
            ));
        }
        if let Some(&m) = multiplicities.iter().find(|&&m| m == 0) {
            return Err(Error::InvalidInput(format!("multiplicity {m} < 1")));
        }
        for (i, p) in points.iter().enumerate() {
            if p.ambient_dim() != ambient_dim || p.field() != field {
                return Err(Error::InvalidInput(format!(
                    "point {p} does not match dimension {ambient_dim} over {field}"
                )));
            }
            if points[..i].contains(p) {
                return Err(Error::InvalidInput(format!("repeated point {p}")));
            }
        }
        Ok(Self {
            points,
            multiplicities,
            ambient_dim,
            field,
        })
    }

    pub fn from_configuration(x: &Configuration, multiplicities: Vec<u32>) -> Result<Self> {
        Self::new(x.points().to_vec(), multiplicities)
    }

    /// Every point with the same multiplicity.
    pub fn uniform(x: &Configuration, multiplicity: u32) -> Result<Self> {
        Self::from_configuration(x, vec![multiplicity; x.len()])
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// `Σ C(m_i + n - 1, n)`; `3s` for `s` double points in the plane.
    pub fn degree(&self) -> usize {
        let n = self.ambient_dim;
        self.multiplicities
            .iter()
            .map(|&m| binomial(m as usize + n - 1, n))
            .sum()
    }

    /// The scheme with one more point.
    pub fn with_point(&self, p: ProjectivePoint, multiplicity: u32) -> Result<Self> {
        let mut points = self.points.clone();
        let mut mults = self.multiplicities.clone();
        points.push(p);
        mults.push(multiplicity);
        Self::new(points, mults)
    }

    /// Image under an invertible linear change of coordinates.
    pub fn transformed(&self, m: &DenseMatrix) -> Result<Self> {
        let points = self
            .points
            .iter()
            .map(|p| p.transformed(m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points, self.multiplicities.clone())
    }
}

/// The double point scheme `2X`.
pub fn double(x: &Configuration) -> Result<FatPointScheme> {
    FatPointScheme::uniform(x, 2)
}

/// Which derivative orders a point contributes rows for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Orders {
    /// Order `min(m - 1, t)` only.
    Top,
    /// Every order `0..=min(m - 1, t)`.
    All,
}

fn row_orders(m: u32, t: usize, orders: Orders) -> std::ops::RangeInclusive<usize> {
    let top = (m as usize - 1).min(t);
    match orders {
        Orders::Top => top..=top,
        Orders::All => 0..=top,
    }
}

/// `b! / (b - a)!` as an integer, assuming `a <= b`.
fn falling(b: u32, a: u32) -> u64 {
    (b - a + 1..=b).map(u64::from).product()
}

fn check_char(prime: PrimeField, t: usize) -> Result<()> {
    if prime.modulus() <= t as u64 {
        return Err(Error::CharacteristicGuard {
            prime: prime.modulus(),
            degree: t,
        });
    }
    Ok(())
}

/// Conditions matrix entries over F_p, row-major.
fn condition_residues(
    z: &FatPointScheme,
    t: usize,
    prime: PrimeField,
    orders: Orders,
) -> Result<(usize, usize, Vec<u64>)> {
    check_char(prime, t)?;
    let vars = z.ambient_dim + 1;
    let columns = monomials(vars, t);
    let cols = columns.len();
    let mut data = Vec::new();
    let mut rows = 0;
    for (p, &m) in z.points.iter().zip(&z.multiplicities) {
        let coords = p.residues(prime)?;
        // powers[i][e] = coords[i]^e
        let powers: Vec<Vec<u64>> = coords
            .iter()
            .map(|&c| {
                std::iter::successors(Some(1u64), |&acc| Some(prime.mul(acc, c)))
                    .take(t + 1)
                    .collect()
            })
            .collect();
        for k in row_orders(m, t, orders) {
            for alpha in monomials(vars, k) {
                for beta in &columns {
                    let mut v = 1u64;
                    for i in 0..vars {
                        if beta[i] < alpha[i] {
                            v = 0;
                            break;
                        }
                        let coeff = prime.reduce_i128(falling(beta[i], alpha[i]) as i128);
                        v = prime.mul(
                            v,
                            prime.mul(coeff, powers[i][(beta[i] - alpha[i]) as usize]),
                        );
                    }
                    data.push(v);
                }
                rows += 1;
            }
        }
    }
    Ok((rows, cols, data))
}

/// Conditions matrix entries over Z from primitive integer coordinates.
/// Rescaling a point rescales each of its rows, so the rank over Q is that
/// of the rational scheme.
fn condition_integers(z: &FatPointScheme, t: usize, orders: Orders) -> (usize, Vec<Vec<BigInt>>) {
    let vars = z.ambient_dim + 1;
    let columns = monomials(vars, t);
    let mut rows = Vec::new();
    for (p, &m) in z.points.iter().zip(&z.multiplicities) {
        let coords = p.integer_coords();
        for k in row_orders(m, t, orders) {
            for alpha in monomials(vars, k) {
                rows.push(
                    columns
                        .iter()
                        .map(|beta| {
                            let mut v = BigInt::one();
                            for i in 0..vars {
                                if beta[i] < alpha[i] {
                                    return BigInt::from(0);
                                }
                                v *= BigInt::from(falling(beta[i], alpha[i]));
                                v *= Pow::pow(&coords[i], beta[i] - alpha[i]);
                            }
                            v
                        })
                        .collect(),
                );
            }
        }
    }
    (columns.len(), rows)
}

fn build_matrix(
    z: &FatPointScheme,
    t: usize,
    field: FieldSpec,
    orders: Orders,
) -> Result<DenseMatrix> {
    match field {
        FieldSpec::Prime(prime) => {
            let (rows, cols, data) = condition_residues(z, t, prime, orders)?;
            Ok(DenseMatrix::from_residues(prime, rows, cols, data))
        }
        FieldSpec::Rational => {
            if !z.field.is_rational() {
                return Err(Error::InvalidInput(format!(
                    "scheme over {} has no rational conditions matrix",
                    z.field
                )));
            }
            let (cols, rows) = condition_integers(z, t, orders);
            let n_rows = rows.len();
            let entries = rows
                .iter()
                .flatten()
                .map(|v| Scalar::from_bigint(FieldSpec::Rational, v))
                .collect();
            DenseMatrix::new(n_rows, cols, entries, FieldSpec::Rational)
        }
    }
}

/// The degree-`t` conditions matrix of `z` over `field`. For a prime field,
/// the scheme's points are read modulo that prime (rational points reduce
/// through their primitive integer coordinates).
pub fn conditions_matrix(z: &FatPointScheme, t: usize, field: FieldSpec) -> Result<DenseMatrix> {
    build_matrix(z, t, field, Orders::Top)
}

/// Like [`conditions_matrix`] but with rows for every derivative order below
/// the multiplicity, including plain evaluation.
pub fn full_conditions_matrix(
    z: &FatPointScheme,
    t: usize,
    field: FieldSpec,
) -> Result<DenseMatrix> {
    build_matrix(z, t, field, Orders::All)
}

/// `H(0), H(1), ...` through stabilization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertFunction {
    pub values: Vec<usize>,
    pub degree: usize,
    pub stabilization_index: usize,
    /// `"F_p"` or `"Q"` for computed functions; absent for closed-form tables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default)]
    pub primes_used: Vec<u64>,
}

impl HilbertFunction {
    /// A table given by its values through stabilization; the last value is
    /// the degree.
    pub fn from_values(values: Vec<usize>) -> Result<Self> {
        let degree = *values
            .last()
            .ok_or_else(|| Error::InvalidInput("empty Hilbert function".into()))?;
        let stabilization_index = values
            .iter()
            .position(|&v| v == degree)
            .expect("last value equals degree");
        let mut values = values;
        values.truncate(stabilization_index + 1);
        Ok(Self {
            values,
            degree,
            stabilization_index,
            field: None,
            primes_used: Vec::new(),
        })
    }

    /// `H(t)`, constant past stabilization.
    pub fn value(&self, t: usize) -> usize {
        self.values.get(t).copied().unwrap_or(self.degree)
    }

    pub fn difference(&self) -> DifferenceFunction {
        difference_function(self)
    }
}

impl fmt::Display for HilbertFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.values {
            write!(f, "{v} ")?;
        }
        f.write_str("->")
    }
}

/// `ΔH(t) = H(t) - H(t-1)` with `ΔH(0) = H(0)`, ending with the first 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceFunction {
    pub values: Vec<i64>,
}

impl DifferenceFunction {
    pub fn value(&self, t: usize) -> i64 {
        self.values.get(t).copied().unwrap_or(0)
    }
}

pub fn difference_function(h: &HilbertFunction) -> DifferenceFunction {
    let mut values = Vec::with_capacity(h.values.len() + 1);
    let mut prev = 0i64;
    for &v in &h.values {
        values.push(v as i64 - prev);
        prev = v as i64;
    }
    values.push(0);
    DifferenceFunction { values }
}

fn check_shape(values: &[usize], degree: usize, ambient_dim: usize) -> Result<()> {
    for (t, &v) in values.iter().enumerate() {
        let cap = binomial(t + ambient_dim, ambient_dim);
        if v > cap || v > degree {
            return Err(Error::Invariant(format!("H({t}) = {v} exceeds its cap")));
        }
        if t > 0 && v < values[t - 1] {
            return Err(Error::Invariant(format!("H decreases at t = {t}")));
        }
    }
    if values.first() != Some(&1) {
        return Err(Error::Invariant("H(0) != 1".into()));
    }
    Ok(())
}

/// Ranks for `t = 0, 1, ...` until they reach the degree, stopping at
/// `t = degree`. The flag says whether stabilization happened.
fn values_with(
    degree: usize,
    mut rank_at: impl FnMut(usize) -> Result<usize>,
) -> Result<(Vec<usize>, bool)> {
    let mut values = Vec::new();
    for t in 0..=degree {
        let h = rank_at(t)?;
        values.push(h);
        if h == degree {
            return Ok((values, true));
        }
    }
    Ok((values, false))
}

fn stabilized(z: &FatPointScheme, (values, done): (Vec<usize>, bool)) -> Result<Vec<usize>> {
    if !done {
        return Err(Error::NoStabilization {
            degree: z.degree(),
            reached: values.last().copied().unwrap_or(0),
        });
    }
    check_shape(&values, z.degree(), z.ambient_dim)?;
    Ok(values)
}

fn raw_values_mod(z: &FatPointScheme, prime: PrimeField) -> Result<(Vec<usize>, bool)> {
    values_with(z.degree(), |t| {
        let (rows, cols, mut data) = condition_residues(z, t, prime, Orders::Top)?;
        Ok(rank_residues(prime, rows, cols, &mut data))
    })
}

/// Hilbert function values of `z` computed in a single prime field.
pub fn hilbert_values_mod(z: &FatPointScheme, prime: PrimeField) -> Result<Vec<usize>> {
    stabilized(z, raw_values_mod(z, prime)?)
}

/// Hilbert function of `z`.
///
/// A scheme over F_p is computed in F_p alone. A scheme over Q is reduced
/// modulo every prime in `primes`; all must agree, otherwise the per-prime
/// values come back as a field-artifact error.
pub fn hilbert_function(z: &FatPointScheme, primes: &[PrimeField]) -> Result<HilbertFunction> {
    let primes: Vec<PrimeField> = match z.field {
        FieldSpec::Prime(p) => vec![p],
        FieldSpec::Rational if primes.is_empty() => {
            return Err(Error::InvalidInput("no primes configured".into()))
        }
        FieldSpec::Rational => primes.to_vec(),
    };
    let mut per_prime = Vec::with_capacity(primes.len());
    let mut all_done = true;
    for &p in &primes {
        let (values, done) = raw_values_mod(z, p)?;
        all_done &= done;
        per_prime.push(PrimeValues {
            prime: p.modulus(),
            values,
        });
    }
    if per_prime.len() > 1
        && (!all_done || per_prime.iter().any(|pv| pv.values != per_prime[0].values))
    {
        return Err(Error::FieldArtifact(per_prime));
    }
    let values = stabilized(z, (per_prime.swap_remove(0).values, all_done))?;
    Ok(HilbertFunction {
        stabilization_index: values.len() - 1,
        degree: z.degree(),
        values,
        field: Some(z.field.to_string()),
        primes_used: primes.iter().map(|p| p.modulus()).collect(),
    })
}

/// Hilbert function of a rational scheme by exact fraction-free elimination.
pub fn hilbert_function_exact(z: &FatPointScheme) -> Result<HilbertFunction> {
    if !z.field.is_rational() {
        return Err(Error::InvalidInput(
            "exact path needs a rational scheme".into(),
        ));
    }
    let raw = values_with(z.degree(), |t| {
        let (cols, rows) = condition_integers(z, t, Orders::Top);
        Ok(bareiss_rank(rows, cols))
    })?;
    let values = stabilized(z, raw)?;
    Ok(HilbertFunction {
        stabilization_index: values.len() - 1,
        degree: z.degree(),
        values,
        field: Some("Q".into()),
        primes_used: Vec::new(),
    })
}

/// Hilbert function of `s` general points of the plane: `min(s, C(t+2, 2))`.
pub fn generic_hf(s: usize, t: usize) -> usize {
    s.min(binomial(t + 2, 2))
}

/// The table of [`generic_hf`] through stabilization.
pub fn generic_table(s: usize) -> HilbertFunction {
    let values = (0..)
        .map(|t| generic_hf(s, t))
        .take_while_inclusive(|&v| v < s);
    HilbertFunction::from_values(values).expect("s >= 1")
}

/// Upper bound `min(C(t+2, 2), 3s)` for `s` double points.
pub fn ah_upper_bound(s: usize, t: usize) -> usize {
    binomial(t + 2, 2).min(3 * s)
}

pub fn ah_table(s: usize) -> HilbertFunction {
    let values = (0..)
        .map(|t| ah_upper_bound(s, t))
        .take_while_inclusive(|&v| v < 3 * s);
    HilbertFunction::from_values(values).expect("s >= 1")
}

/// Hilbert function of the double points on the intersections of `d`
/// general lines.
pub fn theorem1_formula(d: usize, t: usize) -> usize {
    if t < d {
        binomial(t + 2, 2)
    } else if t + 3 <= 2 * d {
        binomial(d + 1, 2) + (t + 1 - d) * d
    } else {
        3 * binomial(d, 2)
    }
}

pub fn theorem1_table(d: usize) -> HilbertFunction {
    let degree = 3 * binomial(d, 2);
    let values = (0..)
        .map(|t| theorem1_formula(d, t))
        .take_while_inclusive(|&v| v < degree);
    HilbertFunction::from_values(values).expect("d >= 2")
}

/// The Hilbert function of `2C_{5,1}`.
pub fn h2c51_table() -> HilbertFunction {
    HilbertFunction::from_values(vec![1, 3, 6, 10, 15, 21, 26, 31, 32, 33]).expect("nonempty")
}

/// True iff `h1(t) >= h2(t)` for every `t`.
pub fn dominates(h1: &HilbertFunction, h2: &HilbertFunction) -> bool {
    let horizon = h1.values.len().max(h2.values.len());
    (0..=horizon).all(|t| h1.value(t) >= h2.value(t))
}

trait TakeWhileInclusive: Iterator + Sized {
    fn take_while_inclusive<P: FnMut(&Self::Item) -> bool>(self, pred: P) -> Vec<Self::Item>;
}

impl<I: Iterator> TakeWhileInclusive for I {
    fn take_while_inclusive<P: FnMut(&Self::Item) -> bool>(self, mut pred: P) -> Vec<Self::Item> {
        let mut out = Vec::new();
        for item in self {
            let more = pred(&item);
            out.push(item);
            if !more {
                break;
            }
        }
        out
    }
}
