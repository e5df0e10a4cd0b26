//! Structured 11-point draws that sit close to the genericity boundary:
//! many points on one line, on one conic, on a line pair, or on small line
//! arrangements. Each family is a deterministic function of the generator
//! state; callers still filter draws by generic simple-point Hilbert
//! function.

use std::collections::HashSet;
use std::fmt;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Rng, Scalar};
use crate::linalg::DenseMatrix;
use crate::plane::{
    build_c_d, build_c_dr, draw_distinct_points, intersect, Configuration, LineForm,
    ProjectivePoint, Provenance,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// 5 points on a line and 6 random points.
    Collinear5,
    /// 8 points on a smooth conic and 3 random points.
    Conic8,
    /// 4 points on each of two lines (not their meet) and 3 random points.
    LinePair44,
    /// `C_4` from one arrangement and `C_{3,2}` from an independent one.
    TwoArrangements,
    /// `C_5` and one random point.
    C5PlusPoint,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Collinear5,
        Family::Conic8,
        Family::LinePair44,
        Family::TwoArrangements,
        Family::C5PlusPoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Collinear5 => "collinear-5",
            Family::Conic8 => "conic-8",
            Family::LinePair44 => "line-pair-4-4",
            Family::TwoArrangements => "two-arrangements",
            Family::C5PlusPoint => "c5-plus-point",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == name)
    }

    /// One 11-point draw.
    pub fn draw(self, field: FieldSpec, rng: &mut Rng) -> Result<Configuration> {
        let mut points = match self {
            Family::Collinear5 => points_on_line(&random_line(field, rng)?, 5, field, rng)?,
            Family::Conic8 => points_on_conic(8, field, rng)?,
            Family::LinePair44 => {
                let a = random_line(field, rng)?;
                let b = random_line(field, rng)?;
                let meet = intersect(&a, &b)?;
                let mut pts = points_on_line(&a, 4, field, rng)?;
                pts.extend(points_on_line(&b, 4, field, rng)?);
                if pts.contains(&meet) || pts.iter().collect::<HashSet<_>>().len() != 8 {
                    return Err(Error::Degenerate("line pair draw hit the meet".into()));
                }
                pts
            }
            Family::TwoArrangements => {
                let mut pts = build_c_d(4, field, rng.next_u64())?.points().to_vec();
                pts.extend(
                    build_c_dr(3, 2, field, rng.next_u64())?
                        .points()
                        .iter()
                        .cloned(),
                );
                pts
            }
            Family::C5PlusPoint => build_c_d(5, field, rng.next_u64())?.points().to_vec(),
        };
        let extra = draw_distinct_points(11 - points.len(), field, rng, &points)?;
        points.extend(extra);
        Configuration::new(points, field, Provenance::Family(self.name().into()), None)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn random_line(field: FieldSpec, rng: &mut Rng) -> Result<LineForm> {
    LineForm::new([field.draw(rng), field.draw(rng), field.draw(rng)])
}

/// `k` distinct points on `line`, cut out by random lines.
fn points_on_line(
    line: &LineForm,
    k: usize,
    field: FieldSpec,
    rng: &mut Rng,
) -> Result<Vec<ProjectivePoint>> {
    let mut out: Vec<ProjectivePoint> = Vec::with_capacity(k);
    let mut attempts = 0;
    while out.len() < k {
        attempts += 1;
        if attempts > 100 * k {
            return Err(Error::Genericity {
                what: format!("{k} distinct points on a line over {field}"),
                attempts,
            });
        }
        let cut = random_line(field, rng);
        if let Ok(p) = cut.and_then(|c| intersect(line, &c)) {
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// `k` distinct points on the image of `xz = y^2` under a random invertible
/// linear map.
fn points_on_conic(k: usize, field: FieldSpec, rng: &mut Rng) -> Result<Vec<ProjectivePoint>> {
    let map = loop {
        let entries: Vec<Scalar> = (0..9).map(|_| field.draw(rng)).collect();
        let m = DenseMatrix::new(3, 3, entries, field)?;
        if m.rank()? == 3 {
            break m;
        }
    };
    let mut out: Vec<ProjectivePoint> = Vec::with_capacity(k);
    let mut attempts = 0;
    while out.len() < k {
        attempts += 1;
        if attempts > 100 * k {
            return Err(Error::Genericity {
                what: format!("{k} distinct points on a conic over {field}"),
                attempts,
            });
        }
        let (s, t) = (field.draw(rng), field.draw(rng));
        let param = ProjectivePoint::new(vec![&s * &s, &s * &t, &t * &t]);
        if let Ok(p) = param.and_then(|p| p.transformed(&map)) {
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}
