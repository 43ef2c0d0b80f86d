//! Ternary quadratic forms and the three conic pencils used by the
//! constructions.
//!
//! - `P1`: `k·xy + z² + yz + xz` (even q). Members `k = 0, 1` and the
//!   generator `xy` are line pairs; all share `(1,0,0),(0,1,0),(1,0,1),(0,1,1)`.
//!   The nucleus of the member with parameter `k` is `(1,1,k)`.
//! - `P2`: `k·xy + z² + xz` (even q). All share `(1,0,0),(0,1,0),(1,0,1)`;
//!   the nucleus of member `k` is `(0,1,k)`.
//! - `P3`: `xy + k·z²` (odd q). All share `(1,0,0),(0,1,0)`; the tangents
//!   there are the two lines of `xy`.
//!
//! Degeneracy, tangents and exterior/interior status are all decided from
//! zero sets and line counts on the plane rather than from matrix rank, so
//! the same code serves both characteristics.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::gf::{Elem, Field};
use crate::plane::{Plane, PointSet, ProjLine, ProjPoint};
use crate::verify::line_hits;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConicError {
    #[error("pencil {pencil} needs {needed} q, got q = {q}")]
    WrongParity { pencil: Pencil, needed: &'static str, q: u32 },
    #[error("the zero quadratic form has no zero set")]
    ZeroForm,
    #[error("quadratic form is degenerate ({0})")]
    Degenerate(&'static str),
    #[error("zero set of {points} points matches no conic, line pair or repeated line")]
    Unclassifiable { points: usize },
    #[error("exterior/interior classification requires odd q")]
    EvenOrder,
    #[error("nuclei exist only for even q")]
    OddOrder,
    #[error("invalid pencil parameters: {0}")]
    BadParameters(&'static str),
    #[error("parameter {0} is out of range for the field")]
    OutOfRange(u32),
    #[error("tangents of the conic are not concurrent")]
    TangentsNotConcurrent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pencil {
    P1,
    P2,
    P3,
}

impl std::fmt::Display for Pencil {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Pencil::P1 => "P1",
            Pencil::P2 => "P2",
            Pencil::P3 => "P3",
        })
    }
}

/// `xx·x² + yy·y² + zz·z² + xy·xy + xz·xz + yz·yz`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quadratic {
    pub xx: Elem,
    pub yy: Elem,
    pub zz: Elem,
    pub xy: Elem,
    pub xz: Elem,
    pub yz: Elem,
}

impl Quadratic {
    /// Coefficients in the order `(xx, yy, zz, xy, xz, yz)`.
    pub fn from_coeffs(c: [Elem; 6]) -> Result<Self, ConicError> {
        if c.iter().all(|e| e.is_zero()) {
            return Err(ConicError::ZeroForm);
        }
        Ok(Quadratic { xx: c[0], yy: c[1], zz: c[2], xy: c[3], xz: c[4], yz: c[5] })
    }

    pub fn coeffs(&self) -> [Elem; 6] {
        [self.xx, self.yy, self.zz, self.xy, self.xz, self.yz]
    }

    /// The common generator `xy` of all three pencils.
    pub fn xy_pair() -> Self {
        let z = Elem::ZERO;
        Quadratic { xx: z, yy: z, zz: z, xy: Elem::ONE, xz: z, yz: z }
    }

    pub fn eval(&self, field: &Field, t: [Elem; 3]) -> Elem {
        let f = field;
        let [x, y, z] = t;
        let terms = [
            f.mul(self.xx, f.mul(x, x)),
            f.mul(self.yy, f.mul(y, y)),
            f.mul(self.zz, f.mul(z, z)),
            f.mul(self.xy, f.mul(x, y)),
            f.mul(self.xz, f.mul(x, z)),
            f.mul(self.yz, f.mul(y, z)),
        ];
        terms.into_iter().fold(Elem::ZERO, |acc, t| f.add(acc, t))
    }

    pub fn vanishes_at(&self, field: &Field, p: &ProjPoint) -> bool {
        self.eval(field, p.coords()).is_zero()
    }
}

/// The member of `pencil` with parameter `k`.
pub fn pencil_conic(field: &Field, pencil: Pencil, k: Elem) -> Result<Quadratic, ConicError> {
    if k.enc() >= field.q() {
        return Err(ConicError::OutOfRange(k.enc()));
    }
    let needs_even = pencil != Pencil::P3;
    if needs_even != field.is_even() {
        let needed = if needs_even { "even" } else { "odd" };
        return Err(ConicError::WrongParity { pencil, needed, q: field.q() });
    }
    let (o, z) = (Elem::ONE, Elem::ZERO);
    Ok(match pencil {
        Pencil::P1 => Quadratic { xx: z, yy: z, zz: o, xy: k, xz: o, yz: o },
        Pencil::P2 => Quadratic { xx: z, yy: z, zz: o, xy: k, xz: o, yz: z },
        Pencil::P3 => Quadratic { xx: z, yy: z, zz: k, xy: o, xz: z, yz: z },
    })
}

pub fn conic_points(plane: &Plane, q: &Quadratic) -> PointSet {
    let f = plane.field();
    let pts = (0..plane.num_points() as u32).filter(|&i| q.eval(f, plane.coords(i)).is_zero());
    plane.point_set(pts).expect("indices come from the plane")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConicClass {
    Nondegenerate,
    /// Two distinct lines (line indices, ascending).
    LinePair(u32, u32),
    RepeatedLine(u32),
}

impl ConicClass {
    pub fn is_nondegenerate(&self) -> bool {
        matches!(self, ConicClass::Nondegenerate)
    }
}

/// Classifies by the shape of the zero set.
pub fn classify(plane: &Plane, q: &Quadratic) -> Result<ConicClass, ConicError> {
    let pts = conic_points(plane, q);
    let members = pts.to_bitset(plane);
    let order = plane.order() as usize;
    let hits: Vec<u32> =
        (0..plane.num_lines() as u32).map(|l| line_hits(plane, &members, l)).collect();
    let full: Vec<u32> = hits
        .iter()
        .enumerate()
        .filter(|(_, &h)| h as usize == order + 1)
        .map(|(l, _)| l as u32)
        .collect();
    let n = pts.len();
    match full.as_slice() {
        [l] if n == order + 1 => Ok(ConicClass::RepeatedLine(*l)),
        [a, b] if n == 2 * order + 1 => Ok(ConicClass::LinePair(*a, *b)),
        [] if n == order + 1 && hits.iter().all(|&h| h <= 2) => Ok(ConicClass::Nondegenerate),
        _ => Err(ConicError::Unclassifiable { points: n }),
    }
}

/// A point of a conic with its tangent line (canonical indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tangent {
    pub point: u32,
    pub line: u32,
}

/// A nondegenerate conic with its points and tangents precomputed.
#[derive(Debug, Clone)]
pub struct Conic {
    quadratic: Quadratic,
    points: PointSet,
    members: BitSet,
    tangents: Vec<Tangent>,
    tangent_set: BitSet,
}

impl Conic {
    pub fn new(plane: &Plane, quadratic: Quadratic) -> Result<Self, ConicError> {
        match classify(plane, &quadratic)? {
            ConicClass::Nondegenerate => {}
            ConicClass::LinePair(..) => return Err(ConicError::Degenerate("line pair")),
            ConicClass::RepeatedLine(_) => return Err(ConicError::Degenerate("repeated line")),
        }
        let points = conic_points(plane, &quadratic);
        let members = points.to_bitset(plane);
        let mut tangents = Vec::with_capacity(points.len());
        let mut tangent_set = BitSet::new(plane.num_lines());
        for p in points.iter() {
            let mut through = plane
                .lines_through(p)
                .iter()
                .copied()
                .filter(|&l| line_hits(plane, &members, l) == 1);
            let line = through.next().expect("a conic has a tangent at each point");
            debug_assert!(through.next().is_none(), "tangent is unique");
            tangents.push(Tangent { point: p, line });
            tangent_set.insert(line as usize);
        }
        Ok(Conic { quadratic, points, members, tangents, tangent_set })
    }

    pub fn from_pencil(plane: &Plane, pencil: Pencil, k: Elem) -> Result<Self, ConicError> {
        Conic::new(plane, pencil_conic(plane.field(), pencil, k)?)
    }

    pub fn quadratic(&self) -> &Quadratic {
        &self.quadratic
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn contains(&self, p: u32) -> bool {
        self.members.contains(p as usize)
    }

    /// One entry per conic point, in point order.
    pub fn tangents(&self) -> &[Tangent] {
        &self.tangents
    }

    pub fn is_tangent(&self, line: u32) -> bool {
        self.tangent_set.contains(line as usize)
    }

    /// Number of tangents of this conic through `p`.
    pub fn tangents_through(&self, plane: &Plane, p: u32) -> usize {
        plane.lines_through(p).iter().filter(|&&l| self.is_tangent(l)).count()
    }

    /// Meet of two tangents, checked to lie on every tangent.
    pub fn nucleus(&self, plane: &Plane) -> Result<u32, ConicError> {
        if !plane.field().is_even() {
            return Err(ConicError::OddOrder);
        }
        let n = plane
            .meet(self.tangents[0].line, self.tangents[1].line)
            .map_err(|_| ConicError::TangentsNotConcurrent)?;
        if self.tangents.iter().all(|t| plane.incident(n, t.line)) {
            Ok(n)
        } else {
            Err(ConicError::TangentsNotConcurrent)
        }
    }

    pub fn point_class(&self, plane: &Plane, p: u32) -> Result<PointClass, ConicError> {
        if plane.field().is_even() {
            return Err(ConicError::EvenOrder);
        }
        if self.contains(p) {
            return Ok(PointClass::On);
        }
        match self.tangents_through(plane, p) {
            2 => Ok(PointClass::Exterior),
            0 => Ok(PointClass::Interior),
            _ => Err(ConicError::Unclassifiable { points: self.points.len() }),
        }
    }
}

/// Each conic point paired with its unique tangent.
pub fn tangent_lines(plane: &Plane, q: &Quadratic) -> Result<Vec<(ProjPoint, ProjLine)>, ConicError> {
    let c = Conic::new(plane, *q)?;
    Ok(c.tangents().iter().map(|t| (plane.point(t.point), plane.line(t.line))).collect())
}

pub fn nucleus(plane: &Plane, q: &Quadratic) -> Result<ProjPoint, ConicError> {
    if !plane.field().is_even() {
        return Err(ConicError::OddOrder);
    }
    let c = Conic::new(plane, *q)?;
    Ok(plane.point(c.nucleus(plane)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointClass {
    On,
    Exterior,
    Interior,
}

pub fn point_class(plane: &Plane, q: &Quadratic, p: &ProjPoint) -> Result<PointClass, ConicError> {
    if plane.field().is_even() {
        return Err(ConicError::EvenOrder);
    }
    Conic::new(plane, *q)?.point_class(plane, plane.point_index(p))
}

/// Whether the `P3` conics with parameters `a` and `b` are mutually exterior:
/// `a(a−b)` and `b(b−a)` both nonzero squares.
pub fn mutually_exterior(field: &Field, a: Elem, b: Elem) -> Result<bool, ConicError> {
    if field.is_even() {
        return Err(ConicError::EvenOrder);
    }
    if a.enc() >= field.q() || b.enc() >= field.q() {
        return Err(ConicError::OutOfRange(a.enc().max(b.enc())));
    }
    if a.is_zero() || b.is_zero() {
        return Err(ConicError::BadParameters("parameters must be nonzero"));
    }
    if a == b {
        return Err(ConicError::BadParameters("parameters must be distinct"));
    }
    let f = field;
    let ab = f.mul(a, f.sub(a, b));
    let ba = f.mul(b, f.sub(b, a));
    Ok(f.is_square(ab) && f.is_square(ba))
}

/// Every `b ∉ {0, 1}` for which `C_1` and `C_b` are mutually exterior.
pub fn exterior_partners(field: &Field) -> Result<Vec<Elem>, ConicError> {
    if field.is_even() {
        return Err(ConicError::EvenOrder);
    }
    let mut out = Vec::new();
    for b in field.nonzero_elements().filter(|&b| b != Elem::ONE) {
        if mutually_exterior(field, Elem::ONE, b)? {
            out.push(b);
        }
    }
    Ok(out)
}

pub fn count_exterior_partners(field: &Field) -> Result<usize, ConicError> {
    Ok(exterior_partners(field)?.len())
}

/// Whether some nondegenerate conic lies entirely inside `set`.
///
/// Enumerates every quadratic form up to scaling, so it is only practical
/// for small planes.
pub fn contains_conic(plane: &Plane, set: &PointSet) -> bool {
    let f = plane.field();
    let q = f.q();
    let order = q as usize;
    if set.len() < order + 1 {
        return false;
    }
    let outside: Vec<[Elem; 3]> =
        (0..plane.num_points() as u32).filter(|&i| !set.contains(i)).map(|i| plane.coords(i)).collect();
    let inside: Vec<u32> = set.iter().collect();

    let mut coeffs = [Elem::ZERO; 6];
    // leading nonzero coefficient at position `lead`, fixed to 1
    for lead in 0..6 {
        let free = 5 - lead;
        let total = (q as u64).pow(free as u32);
        for mut code in 0..total {
            coeffs[..lead].fill(Elem::ZERO);
            coeffs[lead] = Elem::ONE;
            for c in coeffs[lead + 1..].iter_mut() {
                *c = Elem((code % q as u64) as u32);
                code /= q as u64;
            }
            let form = Quadratic::from_coeffs(coeffs).expect("leading coefficient is 1");
            if outside.iter().any(|&t| form.eval(f, t).is_zero()) {
                continue;
            }
            let zeros: Vec<u32> =
                inside.iter().copied().filter(|&i| form.eval(f, plane.coords(i)).is_zero()).collect();
            if zeros.len() != order + 1 {
                continue;
            }
            let collinear =
                plane.line_through(zeros[0], zeros[1]).map(|l| zeros.iter().all(|&p| plane.incident(p, l)));
            if collinear == Ok(false) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: u32) -> Elem {
        Elem(v)
    }

    fn idx(plane: &Plane, t: [u32; 3]) -> u32 {
        plane.index_of(t.map(Elem)).unwrap()
    }

    #[test]
    fn pencil_forms() {
        let f8 = Field::of_order(8).unwrap();
        let c = pencil_conic(&f8, Pencil::P1, e(2)).unwrap();
        assert_eq!(c.coeffs(), [0, 0, 1, 2, 1, 1].map(Elem));
        let d = pencil_conic(&f8, Pencil::P2, e(3)).unwrap();
        assert_eq!(d.coeffs(), [0, 0, 1, 3, 1, 0].map(Elem));
        let f7 = Field::of_order(7).unwrap();
        let c = pencil_conic(&f7, Pencil::P3, e(1)).unwrap();
        assert_eq!(c.coeffs(), [0, 0, 1, 1, 0, 0].map(Elem));
        assert!(matches!(pencil_conic(&f7, Pencil::P1, e(1)), Err(ConicError::WrongParity { .. })));
        assert!(matches!(pencil_conic(&f8, Pencil::P3, e(1)), Err(ConicError::WrongParity { .. })));
        assert_eq!(Quadratic::from_coeffs([Elem::ZERO; 6]), Err(ConicError::ZeroForm));
    }

    #[test]
    fn pencil_one_common_points_and_nucleus_incidence() {
        let plane = Plane::of_order(8).unwrap();
        let f = plane.field();
        for k in f.elements() {
            let c = pencil_conic(f, Pencil::P1, k).unwrap();
            for t in [[1, 0, 0], [0, 1, 0], [1, 0, 1], [0, 1, 1]] {
                assert!(c.eval(f, t.map(Elem)).is_zero());
            }
            for a in f.elements() {
                // k + a^2 in characteristic 2
                let v = c.eval(f, [Elem::ONE, Elem::ONE, a]);
                assert_eq!(v, f.add(k, f.mul(a, a)));
            }
        }
    }

    #[test]
    fn conic_point_counts() {
        let plane = Plane::of_order(8).unwrap();
        let f = plane.field();
        for k in 2..8 {
            assert_eq!(conic_points(&plane, &pencil_conic(f, Pencil::P1, e(k)).unwrap()).len(), 9);
        }
        let c0 = conic_points(&plane, &pencil_conic(f, Pencil::P1, Elem::ZERO).unwrap());
        assert_eq!(c0.len(), 17);
        // z(x+y+z): both lines entirely inside
        let z0 = plane.line_index(&ProjLine { u: e(0), v: e(0), w: e(1) });
        let sum = plane.line_index(&ProjLine { u: e(1), v: e(1), w: e(1) });
        assert_eq!(
            classify(&plane, &pencil_conic(f, Pencil::P1, Elem::ZERO).unwrap()).unwrap(),
            ConicClass::LinePair(sum.min(z0), sum.max(z0))
        );

        let plane7 = Plane::of_order(7).unwrap();
        let c1 = conic_points(&plane7, &pencil_conic(plane7.field(), Pencil::P3, Elem::ONE).unwrap());
        assert_eq!(c1.len(), 8);
        assert!(c1.contains(idx(&plane7, [1, 0, 0])) && c1.contains(idx(&plane7, [0, 1, 0])));
    }

    #[test]
    fn classification_examples() {
        let plane = Plane::of_order(8).unwrap();
        let f = plane.field();
        // (x+z)(y+z)
        let x_z = plane.line_index(&ProjLine { u: e(1), v: e(0), w: e(1) });
        let y_z = plane.line_index(&ProjLine { u: e(0), v: e(1), w: e(1) });
        assert_eq!(
            classify(&plane, &pencil_conic(f, Pencil::P1, Elem::ONE).unwrap()).unwrap(),
            ConicClass::LinePair(x_z.min(y_z), x_z.max(y_z))
        );
        assert!(classify(&plane, &pencil_conic(f, Pencil::P2, e(5)).unwrap()).unwrap().is_nondegenerate());
        assert!(matches!(classify(&plane, &Quadratic::xy_pair()).unwrap(), ConicClass::LinePair(..)));

        let plane7 = Plane::of_order(7).unwrap();
        // the generator z^2 of P3; the member with k = 0 is xy
        let z2 = Quadratic::from_coeffs([e(0), e(0), e(1), e(0), e(0), e(0)]).unwrap();
        let xy = pencil_conic(plane7.field(), Pencil::P3, Elem::ZERO).unwrap();
        assert!(matches!(classify(&plane7, &xy).unwrap(), ConicClass::LinePair(..)));
        let z0 = plane7.line_index(&ProjLine { u: e(0), v: e(0), w: e(1) });
        assert_eq!(classify(&plane7, &z2).unwrap(), ConicClass::RepeatedLine(z0));

        // x^2 - 3y^2 over GF(7): 3 is a non-square, only (0,0,1) vanishes
        let f7 = plane7.field();
        let imag = Quadratic::from_coeffs([Elem::ONE, f7.neg(e(3)), e(0), e(0), e(0), e(0)]).unwrap();
        assert_eq!(classify(&plane7, &imag), Err(ConicError::Unclassifiable { points: 1 }));
    }

    #[test]
    fn tangents_and_nuclei_even() {
        let plane = Plane::of_order(8).unwrap();
        let f = plane.field();
        for a in 2..8 {
            let c = pencil_conic(f, Pencil::P1, e(a)).unwrap();
            let t = tangent_lines(&plane, &c).unwrap();
            assert_eq!(t.len(), 9);
            assert_eq!(nucleus(&plane, &c).unwrap(), ProjPoint { x: e(1), y: e(1), z: e(a) });
        }
        for k in 1..8 {
            let d = pencil_conic(f, Pencil::P2, e(k)).unwrap();
            let n = nucleus(&plane, &d).unwrap();
            assert_eq!(n, ProjPoint { x: e(0), y: e(1), z: e(k) });
            assert!(Quadratic::xy_pair().vanishes_at(f, &n));
        }
        assert!(matches!(
            tangent_lines(&plane, &pencil_conic(f, Pencil::P1, Elem::ONE).unwrap()),
            Err(ConicError::Degenerate(_))
        ));
    }

    #[test]
    fn odd_tangents_at_common_points_are_the_axes() {
        let plane = Plane::of_order(7).unwrap();
        let x0 = plane.line_index(&ProjLine { u: e(1), v: e(0), w: e(0) });
        let y0 = plane.line_index(&ProjLine { u: e(0), v: e(1), w: e(0) });
        let p100 = idx(&plane, [1, 0, 0]);
        let p010 = idx(&plane, [0, 1, 0]);
        for k in 1..7 {
            let c = Conic::from_pencil(&plane, Pencil::P3, e(k)).unwrap();
            let at = |p| c.tangents().iter().find(|t| t.point == p).unwrap().line;
            assert_eq!(at(p100), y0);
            assert_eq!(at(p010), x0);
        }
        let c = pencil_conic(plane.field(), Pencil::P3, Elem::ONE).unwrap();
        assert_eq!(nucleus(&plane, &c), Err(ConicError::OddOrder));
    }

    #[test]
    fn point_classes_q7() {
        let plane = Plane::of_order(7).unwrap();
        let f = plane.field();
        let c1 = pencil_conic(f, Pencil::P3, Elem::ONE).unwrap();
        let origin = ProjPoint { x: e(0), y: e(0), z: e(1) };
        assert_eq!(point_class(&plane, &c1, &origin).unwrap(), PointClass::Exterior);
        assert_eq!(
            point_class(&plane, &c1, &ProjPoint { x: e(1), y: e(0), z: e(0) }).unwrap(),
            PointClass::On
        );
        let conic1 = Conic::new(&plane, c1).unwrap();
        let c6 = Conic::from_pencil(&plane, Pencil::P3, e(6)).unwrap();
        for p in c6.points().iter().filter(|&p| !conic1.contains(p)) {
            assert_eq!(conic1.point_class(&plane, p).unwrap(), PointClass::Exterior);
        }
        let plane8 = Plane::of_order(8).unwrap();
        let c = pencil_conic(plane8.field(), Pencil::P1, e(2)).unwrap();
        assert_eq!(point_class(&plane8, &c, &origin), Err(ConicError::EvenOrder));
    }

    #[test]
    fn mutual_exteriority_residue_examples() {
        let f7 = Field::of_order(7).unwrap();
        assert!(mutually_exterior(&f7, e(1), e(6)).unwrap());
        assert!(!mutually_exterior(&f7, e(1), e(3)).unwrap());
        assert_eq!(exterior_partners(&f7).unwrap(), vec![e(6)]);
        let f11 = Field::of_order(11).unwrap();
        assert_eq!(exterior_partners(&f11).unwrap(), vec![e(7), e(8)]);
        assert_eq!(count_exterior_partners(&Field::of_order(13).unwrap()).unwrap(), 2);
        assert_eq!(count_exterior_partners(&Field::of_order(5).unwrap()).unwrap(), 0);
        assert!(mutually_exterior(&f7, e(2), e(2)).is_err());
        assert!(mutually_exterior(&f7, e(0), e(2)).is_err());
        assert_eq!(count_exterior_partners(&Field::of_order(8).unwrap()), Err(ConicError::EvenOrder));
    }

    #[test]
    fn conic_containment() {
        let plane = Plane::of_order(5).unwrap();
        let c = Conic::from_pencil(&plane, Pencil::P3, e(1)).unwrap();
        let with_extra = c.points().union(&plane.point_set([0]).unwrap()).unwrap();
        assert!(contains_conic(&plane, &with_extra));
        let line = plane.point_set(plane.points_on_line(3).iter().copied()).unwrap();
        assert!(!contains_conic(&plane, &line));
        assert!(!contains_conic(&plane, &c.points().without(c.points().indices()[0])));
    }
}
