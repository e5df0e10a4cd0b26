//! Points and lines of the projective plane, general line arrangements, the
//! configurations `C_d` and `C_{d,r}`, random point sets, and incidence
//! diagnostics.
//!
//! Every random choice goes through [`FieldSpec::draw`], so a configuration
//! is a pure function of `(field, seed)`. Over the rationals the draws are
//! integers, and all constructions are exact: a `C_d` built over Q is a
//! genuine line arrangement that can be reduced modulo any working prime.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{primitive_integers, FieldSpec, PrimeField, Rng, Scalar};
use crate::linalg::{determinant, DenseMatrix};

/// Resample budget used by the samplers unless overridden.
pub const DEFAULT_RESAMPLE_BUDGET: usize = 1000;

/// Largest configuration accepted by [`max_on_curve`].
pub const MAX_INCIDENCE_POINTS: usize = 20;

/// A point of projective space, normalized so that its first nonzero
/// coordinate is 1. Equal points therefore compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<Scalar>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        let field = coords
            .first()
            .map(Scalar::field)
            .ok_or_else(|| Error::InvalidInput("point with no coordinates".into()))?;
        if coords.iter().any(|c| c.field() != field) {
            return Err(Error::InvalidInput(
                "coordinates from different fields".into(),
            ));
        }
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::Degenerate("all coordinates are zero".into()))?;
        let inv = lead.inv().expect("nonzero");
        let coords = coords.iter().map(|c| c * &inv).collect();
        Ok(Self { coords })
    }

    pub fn from_i64(field: FieldSpec, coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Scalar::from_i64(field, c)).collect())
    }

    pub fn from_bigints(field: FieldSpec, coords: &[BigInt]) -> Result<Self> {
        Self::new(
            coords
                .iter()
                .map(|c| Scalar::from_bigint(field, c))
                .collect(),
        )
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// Number of homogeneous coordinates minus one.
    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn field(&self) -> FieldSpec {
        self.coords[0].field()
    }

    /// Integer representative: canonical residues over F_p, the primitive
    /// integer vector (first nonzero entry positive) over Q.
    pub fn integer_coords(&self) -> Vec<BigInt> {
        match self.field() {
            FieldSpec::Prime(_) => self
                .coords
                .iter()
                .map(|c| BigInt::from(c.residue().expect("prime field")))
                .collect(),
            FieldSpec::Rational => {
                let qs: Vec<_> = self
                    .coords
                    .iter()
                    .map(|c| c.as_rational().expect("rational field").clone())
                    .collect();
                primitive_integers(&qs)
            }
        }
    }

    /// Coordinates in F_`prime`. Rational points reduce through their
    /// primitive integer vector, which never vanishes identically mod p.
    pub fn residues(&self, prime: PrimeField) -> Result<Vec<u64>> {
        match self.field() {
            FieldSpec::Prime(own) if own == prime => Ok(self
                .coords
                .iter()
                .map(|c| c.residue().expect("prime field"))
                .collect()),
            FieldSpec::Prime(own) => Err(Error::InvalidInput(format!(
                "point over {own} cannot be read in {prime}"
            ))),
            FieldSpec::Rational => Ok(self
                .integer_coords()
                .iter()
                .map(|v| prime.reduce_bigint(v))
                .collect()),
        }
    }

    /// The image of this point applied to a 3x3 (or (n+1)x(n+1)) matrix.
    pub fn transformed(&self, m: &DenseMatrix) -> Result<Self> {
        let n = self.coords.len();
        if m.rows() != n || m.cols() != n || m.field() != self.field() {
            return Err(Error::InvalidInput(
                "transform shape or field mismatch".into(),
            ));
        }
        let field = self.field();
        let coords = (0..n)
            .map(|i| {
                (0..n).fold(Scalar::zero(field), |acc, j| {
                    &acc + &(m.get(i, j) * &self.coords[j])
                })
            })
            .collect();
        Self::new(coords)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

/// The linear form `ax + by + cz`, normalized like a point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LineForm {
    coeffs: [Scalar; 3],
}

impl LineForm {
    pub fn new(coeffs: [Scalar; 3]) -> Result<Self> {
        let p = ProjectivePoint::new(coeffs.to_vec())?;
        let [a, b, c]: [Scalar; 3] = p.coords.try_into().expect("three coordinates");
        Ok(Self { coeffs: [a, b, c] })
    }

    pub fn from_i64(field: FieldSpec, coeffs: [i64; 3]) -> Result<Self> {
        Self::new(coeffs.map(|c| Scalar::from_i64(field, c)))
    }

    pub fn coeffs(&self) -> &[Scalar; 3] {
        &self.coeffs
    }

    pub fn field(&self) -> FieldSpec {
        self.coeffs[0].field()
    }

    /// The line through two distinct points.
    pub fn through(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<Self> {
        let c = cross(plane_coords(p)?, plane_coords(q)?);
        Self::new(c).map_err(|_| Error::Degenerate("points coincide".into()))
    }

    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        let field = self.field();
        self.coeffs
            .iter()
            .zip(p.coords())
            .fold(Scalar::zero(field), |acc, (a, x)| &acc + &(a * x))
            .is_zero()
    }
}

impl fmt::Display for LineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.coeffs;
        write!(f, "{a}x + {b}y + {c}z")
    }
}

fn plane_coords(p: &ProjectivePoint) -> Result<&[Scalar]> {
    if p.coords.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "expected a point of the plane, got dimension {}",
            p.ambient_dim()
        )));
    }
    Ok(&p.coords)
}

fn cross(u: &[Scalar], v: &[Scalar]) -> [Scalar; 3] {
    [
        &(&u[1] * &v[2]) - &(&u[2] * &v[1]),
        &(&u[2] * &v[0]) - &(&u[0] * &v[2]),
        &(&u[0] * &v[1]) - &(&u[1] * &v[0]),
    ]
}

/// Intersection point of two distinct lines.
pub fn intersect(l1: &LineForm, l2: &LineForm) -> Result<ProjectivePoint> {
    ProjectivePoint::new(cross(&l1.coeffs, &l2.coeffs).to_vec())
        .map_err(|_| Error::Degenerate("lines are proportional".into()))
}

/// True iff the three points lie on a common line.
pub fn collinear(p: &ProjectivePoint, q: &ProjectivePoint, r: &ProjectivePoint) -> bool {
    let c = cross(&p.coords, &q.coords);
    c.iter()
        .zip(r.coords())
        .fold(Scalar::zero(p.field()), |acc, (a, x)| &acc + &(a * x))
        .is_zero()
}

/// Where a configuration came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Random,
    CD {
        d: usize,
    },
    CDR {
        d: usize,
        r: usize,
    },
    /// A structured draw from one of the adversarial families.
    Family(String),
    File,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Random => f.write_str("random"),
            Provenance::CD { d } => write!(f, "c_d(d={d})"),
            Provenance::CDR { d, r } => write!(f, "c_dr(d={d}, r={r})"),
            Provenance::Family(name) => write!(f, "family({name})"),
            Provenance::File => f.write_str("file"),
        }
    }
}

/// An ordered set of distinct points of the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    points: Vec<ProjectivePoint>,
    field: FieldSpec,
    provenance: Provenance,
    seed: Option<u64>,
}

impl Configuration {
    pub fn new(
        points: Vec<ProjectivePoint>,
        field: FieldSpec,
        provenance: Provenance,
        seed: Option<u64>,
    ) -> Result<Self> {
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            plane_coords(p)?;
            if p.field() != field {
                return Err(Error::InvalidInput(format!(
                    "point {p} is over {}, configuration over {field}",
                    p.field()
                )));
            }
            if !seen.insert(p) {
                return Err(Error::InvalidInput(format!("repeated point {p}")));
            }
        }
        Ok(Self {
            points,
            field,
            provenance,
            seed,
        })
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// The sub-configuration on the given indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let points = indices
            .iter()
            .map(|&i| {
                self.points
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput(format!("index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points, self.field, self.provenance.clone(), self.seed)
    }

    /// Appends points, keeping provenance and seed.
    pub fn extended(&self, extra: impl IntoIterator<Item = ProjectivePoint>) -> Result<Self> {
        let mut points = self.points.clone();
        points.extend(extra);
        Self::new(points, self.field, self.provenance.clone(), self.seed)
    }

    /// Applies an invertible coordinate change to every point.
    pub fn transformed(&self, m: &DenseMatrix) -> Result<Self> {
        let points = self
            .points
            .iter()
            .map(|p| p.transformed(m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points, self.field, self.provenance.clone(), self.seed)
    }
}

/// `d` general lines: pairwise distinct, no three through a point.
#[derive(Clone, Debug)]
pub struct GeneralLines {
    pub lines: Vec<LineForm>,
    /// Whole-batch redraws needed before the condition held.
    pub resamples: usize,
}

impl GeneralLines {
    /// Intersection point of lines `i` and `j`.
    pub fn meet(&self, i: usize, j: usize) -> ProjectivePoint {
        intersect(&self.lines[i], &self.lines[j]).expect("general lines are distinct")
    }
}

pub fn sample_general_lines(d: usize, field: FieldSpec, seed: u64) -> Result<GeneralLines> {
    sample_general_lines_with_budget(d, field, seed, DEFAULT_RESAMPLE_BUDGET)
}

pub fn sample_general_lines_with_budget(
    d: usize,
    field: FieldSpec,
    seed: u64,
    budget: usize,
) -> Result<GeneralLines> {
    if d < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 lines, got {d}"
        )));
    }
    let mut rng = crate::field::trial_rng(seed, 0);
    for attempt in 0..budget.max(1) {
        if let Some(lines) = draw_line_batch(d, field, &mut rng) {
            return Ok(GeneralLines {
                lines,
                resamples: attempt,
            });
        }
    }
    Err(Error::Genericity {
        what: format!("{d} general lines over {field}"),
        attempts: budget,
    })
}

fn draw_line_batch(d: usize, field: FieldSpec, rng: &mut Rng) -> Option<Vec<LineForm>> {
    let mut lines = Vec::with_capacity(d);
    for _ in 0..d {
        let coeffs = [field.draw(rng), field.draw(rng), field.draw(rng)];
        // a zero draw spoils the batch; keep consuming the stream regardless
        lines.push(LineForm::new(coeffs).ok());
    }
    let lines: Vec<LineForm> = lines.into_iter().collect::<Option<_>>()?;
    let mut meets = HashSet::with_capacity(d * (d - 1) / 2);
    for i in 0..d {
        for j in i + 1..d {
            let p = intersect(&lines[i], &lines[j]).ok()?;
            if !meets.insert(p) {
                return None;
            }
        }
    }
    Some(lines)
}

/// The `C(d,2)` pairwise intersection points of `d` general lines, ordered by
/// line pair `(i, j)`, `i < j`, lexicographically.
pub fn build_c_d(d: usize, field: FieldSpec, seed: u64) -> Result<Configuration> {
    let lines = sample_general_lines(d, field, seed)?;
    let points = pair_points(&lines, d);
    Configuration::new(points, field, Provenance::CD { d }, Some(seed))
}

fn pair_points(lines: &GeneralLines, d: usize) -> Vec<ProjectivePoint> {
    let mut points = Vec::with_capacity(d * (d - 1) / 2);
    for i in 0..d {
        for j in i + 1..d {
            points.push(lines.meet(i, j));
        }
    }
    points
}

/// Which points of the last line `C_{d,r}` keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RemovalOrder {
    /// Keep the points `L_{d+1} ∩ L_i` for `i = 1..r` (remove the largest
    /// partner indices). The default.
    #[default]
    KeepLowestPartners,
    /// Keep the points `L_{d+1} ∩ L_i` for `i = d-r+1..d`.
    KeepHighestPartners,
}

/// `C_{d,r}`: the intersection points of `d+1` general lines with all but
/// `r` of the points on the last line removed.
pub fn build_c_dr(d: usize, r: usize, field: FieldSpec, seed: u64) -> Result<Configuration> {
    build_c_dr_with(d, r, field, seed, RemovalOrder::default())
}

pub fn build_c_dr_with(
    d: usize,
    r: usize,
    field: FieldSpec,
    seed: u64,
    order: RemovalOrder,
) -> Result<Configuration> {
    if r > d {
        return Err(Error::InvalidInput(format!(
            "need 0 <= r <= d, got d={d}, r={r}"
        )));
    }
    if d < 1 {
        return Err(Error::InvalidInput("need d >= 1".into()));
    }
    let lines = sample_general_lines(d + 1, field, seed)?;
    let mut points = pair_points(&lines, d);
    let kept = match order {
        RemovalOrder::KeepLowestPartners => 0..r,
        RemovalOrder::KeepHighestPartners => d - r..d,
    };
    points.extend(kept.map(|partner| lines.meet(partner, d)));
    Configuration::new(points, field, Provenance::CDR { d, r }, Some(seed))
}

/// `s` distinct points with uniformly drawn coordinates.
pub fn sample_random_points(s: usize, field: FieldSpec, seed: u64) -> Result<Configuration> {
    if s < 1 {
        return Err(Error::InvalidInput("need at least one point".into()));
    }
    let mut rng = crate::field::trial_rng(seed, 0);
    let points = draw_distinct_points(s, field, &mut rng, &[])?;
    Configuration::new(points, field, Provenance::Random, Some(seed))
}

/// Draws `s` points distinct from each other and from `avoid`.
pub(crate) fn draw_distinct_points(
    s: usize,
    field: FieldSpec,
    rng: &mut Rng,
    avoid: &[ProjectivePoint],
) -> Result<Vec<ProjectivePoint>> {
    let mut seen: HashSet<ProjectivePoint> = avoid.iter().cloned().collect();
    let mut points = Vec::with_capacity(s);
    let mut failures = 0;
    while points.len() < s {
        let p = ProjectivePoint::new(vec![field.draw(rng), field.draw(rng), field.draw(rng)]);
        match p {
            Ok(p) if seen.insert(p.clone()) => points.push(p),
            _ => {
                failures += 1;
                if failures >= DEFAULT_RESAMPLE_BUDGET {
                    return Err(Error::Genericity {
                        what: format!("{s} distinct points over {field}"),
                        attempts: failures,
                    });
                }
            }
        }
    }
    Ok(points)
}

/// Result of an incidence sweep: how many points a single curve of the
/// given degree can carry, with the indices of one such set of points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveIncidence {
    pub degree: usize,
    pub count: usize,
    pub witness: Vec<usize>,
}

/// Maximum number of points of `x` on one line (`degree = 1`) or one conic
/// (`degree = 2`), by exhaustive search. Ties resolve to the
/// lexicographically smallest witness.
pub fn max_on_curve(x: &Configuration, degree: usize) -> Result<CurveIncidence> {
    if x.len() > MAX_INCIDENCE_POINTS {
        return Err(Error::InvalidInput(format!(
            "incidence sweep supports at most {MAX_INCIDENCE_POINTS} points, got {}",
            x.len()
        )));
    }
    let n = x.len();
    let everything = || CurveIncidence {
        degree,
        count: n,
        witness: (0..n).collect(),
    };
    match degree {
        1 if n <= 2 => Ok(everything()),
        2 if n <= 5 => Ok(everything()),
        1 => Ok(best(degree, spanned_lines(x))),
        2 => {
            let lines = spanned_lines(x);
            let mut candidates = conic_sweep(x);
            // line pairs: degenerate conics the 5-subset sweep can miss
            for (i, a) in lines.iter().enumerate() {
                for b in &lines[i..] {
                    let mut union: Vec<usize> = a.iter().chain(b).copied().collect();
                    union.sort_unstable();
                    union.dedup();
                    candidates.push(union);
                }
            }
            Ok(best(degree, candidates))
        }
        _ => Err(Error::InvalidInput(format!(
            "incidence sweeps cover degree 1 and 2, got {degree}"
        ))),
    }
}

fn best(degree: usize, candidates: Vec<Vec<usize>>) -> CurveIncidence {
    let witness = candidates
        .into_iter()
        .min_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)))
        .unwrap_or_default();
    CurveIncidence {
        degree,
        count: witness.len(),
        witness,
    }
}

/// Point sets of all lines spanned by pairs of points, deduplicated.
fn spanned_lines(x: &Configuration) -> Vec<Vec<usize>> {
    let pts = x.points();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut seen = HashSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let line = LineForm::through(&pts[i], &pts[j]).expect("distinct points");
            let members: Vec<usize> = (0..pts.len()).filter(|&k| line.contains(&pts[k])).collect();
            if seen.insert(members.clone()) {
                out.push(members);
            }
        }
    }
    out
}

fn conic_monomials(p: &ProjectivePoint) -> [BigInt; 6] {
    let c = p.integer_coords();
    [
        &c[0] * &c[0],
        &c[0] * &c[1],
        &c[0] * &c[2],
        &c[1] * &c[1],
        &c[1] * &c[2],
        &c[2] * &c[2],
    ]
}

/// For every 5-subset imposing independent conditions on conics, the set of
/// all points on its unique conic. The conic's coefficients are the signed
/// maximal minors of the 5 x 6 condition matrix, computed over the integers
/// and read in the configuration's field.
fn conic_sweep(x: &Configuration) -> Vec<Vec<usize>> {
    let vanishes = |v: &BigInt| match x.field() {
        FieldSpec::Rational => v.is_zero(),
        FieldSpec::Prime(p) => (v % BigInt::from(p.modulus())).is_zero(),
    };
    let rows: Vec<[BigInt; 6]> = x.points().iter().map(conic_monomials).collect();
    let n = rows.len();
    let subsets = combinations(n, 5);
    let mut found: Vec<Vec<usize>> = subsets
        .par_iter()
        .filter_map(|subset| {
            let conic: Vec<BigInt> = (0..6)
                .map(|skip| {
                    let minor = subset
                        .iter()
                        .map(|&i| {
                            (0..6)
                                .filter(|&j| j != skip)
                                .map(|j| rows[i][j].clone())
                                .collect()
                        })
                        .collect();
                    let det = determinant(minor);
                    if skip % 2 == 0 {
                        det
                    } else {
                        -det
                    }
                })
                .collect();
            if conic.iter().all(&vanishes) {
                return None;
            }
            Some(
                (0..n)
                    .filter(|&k| {
                        let value: BigInt = rows[k].iter().zip(&conic).map(|(a, b)| a * b).sum();
                        vanishes(&value)
                    })
                    .collect(),
            )
        })
        .collect();
    found.sort();
    found.dedup();
    found
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
