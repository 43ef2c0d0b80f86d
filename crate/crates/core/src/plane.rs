//! The Desarguesian plane PG(2,q).
//!
//! Points and lines are homogeneous triples normalized so that the leftmost
//! nonzero coordinate is 1. Points are enumerated in lexicographic order of
//! their coordinate encodings, which makes `(0,0,1)` index 0; lines use the
//! same enumeration through duality, so line `i` has the coordinates of
//! point `i`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::bitset::{words_for, BitSet};
use crate::gf::{Elem, Field, FieldSpec, GfError};

/// Planes up to this order get a dense line-by-point incidence bitmap.
pub const BITMAP_MAX_ORDER: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaneError {
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("the two points coincide")]
    SamePoint,
    #[error("the two lines coincide")]
    SameLine,
    #[error("index {index} is out of range for a plane with {count} points")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("point sets belong to different planes")]
    MixedPlanes,
    #[error("duplicate point {0}")]
    DuplicatePoint(ProjPoint),
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    pub x: Elem,
    pub y: Elem,
    pub z: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLine {
    pub u: Elem,
    pub v: Elem,
    pub w: Elem,
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.u, self.v, self.w)
    }
}

/// Scales a nonzero triple so its leftmost nonzero entry is 1.
pub fn normalize(field: &Field, t: [Elem; 3]) -> Option<[Elem; 3]> {
    let lead = t.iter().copied().find(|e| !e.is_zero())?;
    let inv = field.inv(lead)?;
    Some(t.map(|e| field.mul(e, inv)))
}

pub fn cross(field: &Field, a: [Elem; 3], b: [Elem; 3]) -> [Elem; 3] {
    let f = field;
    [
        f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
        f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
        f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
    ]
}

pub fn dot(field: &Field, a: [Elem; 3], b: [Elem; 3]) -> Elem {
    let f = field;
    f.add(f.add(f.mul(a[0], b[0]), f.mul(a[1], b[1])), f.mul(a[2], b[2]))
}

impl ProjPoint {
    pub fn new(field: &Field, x: Elem, y: Elem, z: Elem) -> Result<Self, PlaneError> {
        Ok(Self::from_normalized(normalize(field, [x, y, z]).ok_or(PlaneError::ZeroVector)?))
    }

    /// Builds a point from raw encodings, validating ranges.
    pub fn from_encodings(field: &Field, t: [u64; 3]) -> Result<Self, PlaneError> {
        Self::new(field, field.elem(t[0])?, field.elem(t[1])?, field.elem(t[2])?)
    }

    fn from_normalized(t: [Elem; 3]) -> Self {
        ProjPoint { x: t[0], y: t[1], z: t[2] }
    }

    pub fn coords(&self) -> [Elem; 3] {
        [self.x, self.y, self.z]
    }
}

impl ProjLine {
    pub fn new(field: &Field, u: Elem, v: Elem, w: Elem) -> Result<Self, PlaneError> {
        let t = normalize(field, [u, v, w]).ok_or(PlaneError::ZeroVector)?;
        Ok(ProjLine { u: t[0], v: t[1], w: t[2] })
    }

    pub fn coords(&self) -> [Elem; 3] {
        [self.u, self.v, self.w]
    }
}

/// The unique line through two distinct points.
pub fn line_through(field: &Field, a: &ProjPoint, b: &ProjPoint) -> Result<ProjLine, PlaneError> {
    let c = cross(field, a.coords(), b.coords());
    ProjLine::new(field, c[0], c[1], c[2]).map_err(|_| PlaneError::SamePoint)
}

/// The common point of two distinct lines.
pub fn meet(field: &Field, l: &ProjLine, m: &ProjLine) -> Result<ProjPoint, PlaneError> {
    let c = cross(field, l.coords(), m.coords());
    ProjPoint::new(field, c[0], c[1], c[2]).map_err(|_| PlaneError::SameLine)
}

pub fn incident(field: &Field, p: &ProjPoint, l: &ProjLine) -> bool {
    dot(field, p.coords(), l.coords()).is_zero()
}

/// All `q^2+q+1` normalized points in canonical order.
pub fn enumerate_points(field: &Field) -> Vec<ProjPoint> {
    let q = field.q();
    let mut out = Vec::with_capacity((q * q + q + 1) as usize);
    out.push(ProjPoint { x: Elem::ZERO, y: Elem::ZERO, z: Elem::ONE });
    for z in 0..q {
        out.push(ProjPoint { x: Elem::ZERO, y: Elem::ONE, z: Elem(z) });
    }
    for y in 0..q {
        for z in 0..q {
            out.push(ProjPoint { x: Elem::ONE, y: Elem(y), z: Elem(z) });
        }
    }
    out
}

#[inline]
fn normalized_index(q: u32, t: [Elem; 3]) -> u32 {
    if t[0].is_zero() {
        if t[1].is_zero() {
            0
        } else {
            1 + t[2].0
        }
    } else {
        1 + q + t[1].0 * q + t[2].0
    }
}

/// Dense incidence matrix, one row of point bits per line.
#[derive(Clone, Debug)]
pub struct IncidenceBitmap {
    words_per_row: usize,
    rows: Vec<u64>,
}

impl IncidenceBitmap {
    #[inline]
    pub fn row(&self, line: u32) -> &[u64] {
        let start = line as usize * self.words_per_row;
        &self.rows[start..start + self.words_per_row]
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }
}

struct PlaneData {
    field: Field,
    coords: Vec<[Elem; 3]>,
    line_points: Vec<u32>,
    point_lines: Vec<u32>,
    bitmap: Option<IncidenceBitmap>,
}

/// Precomputed incidence structure of PG(2,q). Immutable once built and
/// cheap to clone.
#[derive(Clone)]
pub struct Plane {
    data: Arc<PlaneData>,
}

impl fmt::Debug for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PG(2,{})", self.order())
    }
}

impl Plane {
    pub fn new(field: Field) -> Self {
        let q = field.q();
        let per_line = q as usize + 1;
        let coords: Vec<[Elem; 3]> = enumerate_points(&field).iter().map(|p| p.coords()).collect();
        let n = coords.len();

        let mut line_points = Vec::with_capacity(n * per_line);
        for l in &coords {
            // Two points spanning the line, then the q+1 points of the span.
            let m1 = field.neg(Elem::ONE);
            let (a, b) = if !l[0].is_zero() {
                ([field.neg(l[1]), Elem::ONE, Elem::ZERO], [field.neg(l[2]), Elem::ZERO, Elem::ONE])
            } else if !l[1].is_zero() {
                ([Elem::ONE, Elem::ZERO, Elem::ZERO], [Elem::ZERO, field.mul(m1, l[2]), Elem::ONE])
            } else {
                ([Elem::ONE, Elem::ZERO, Elem::ZERO], [Elem::ZERO, Elem::ONE, Elem::ZERO])
            };
            let start = line_points.len();
            line_points.push(normalized_index(q, normalize(&field, b).unwrap()));
            for t in field.elements() {
                let pt = [0, 1, 2].map(|i| field.add(a[i], field.mul(t, b[i])));
                line_points.push(normalized_index(q, normalize(&field, pt).unwrap()));
            }
            line_points[start..].sort_unstable();
        }

        let mut fill = vec![0usize; n];
        let mut point_lines = vec![0u32; n * per_line];
        for (l, pts) in line_points.chunks(per_line).enumerate() {
            for &p in pts {
                let p = p as usize;
                point_lines[p * per_line + fill[p]] = l as u32;
                fill[p] += 1;
            }
        }

        let bitmap = (q <= BITMAP_MAX_ORDER).then(|| {
            let words_per_row = words_for(n);
            let mut rows = vec![0u64; n * words_per_row];
            for (l, pts) in line_points.chunks(per_line).enumerate() {
                for &p in pts {
                    rows[l * words_per_row + p as usize / 64] |= 1 << (p % 64);
                }
            }
            IncidenceBitmap { words_per_row, rows }
        });

        Plane { data: Arc::new(PlaneData { field, coords, line_points, point_lines, bitmap }) }
    }

    pub fn of_order(q: u64) -> Result<Self, PlaneError> {
        Ok(Plane::new(Field::of_order(q)?))
    }

    pub fn field(&self) -> &Field {
        &self.data.field
    }

    pub fn spec(&self) -> &FieldSpec {
        self.data.field.spec()
    }

    /// The order q.
    pub fn order(&self) -> u32 {
        self.data.field.q()
    }

    /// `q^2+q+1`, which is also the number of lines.
    pub fn num_points(&self) -> usize {
        self.data.coords.len()
    }

    pub fn num_lines(&self) -> usize {
        self.data.coords.len()
    }

    pub fn coords(&self, i: u32) -> [Elem; 3] {
        self.data.coords[i as usize]
    }

    pub fn point(&self, i: u32) -> ProjPoint {
        let c = self.coords(i);
        ProjPoint { x: c[0], y: c[1], z: c[2] }
    }

    pub fn line(&self, i: u32) -> ProjLine {
        let c = self.coords(i);
        ProjLine { u: c[0], v: c[1], w: c[2] }
    }

    pub fn point_index(&self, p: &ProjPoint) -> u32 {
        normalized_index(self.order(), p.coords())
    }

    pub fn line_index(&self, l: &ProjLine) -> u32 {
        normalized_index(self.order(), l.coords())
    }

    /// Canonical index of an arbitrary nonzero triple.
    pub fn index_of(&self, t: [Elem; 3]) -> Result<u32, PlaneError> {
        let n = normalize(self.field(), t).ok_or(PlaneError::ZeroVector)?;
        Ok(normalized_index(self.order(), n))
    }

    /// Points of line `l`, ascending.
    pub fn points_on_line(&self, l: u32) -> &[u32] {
        let per = self.order() as usize + 1;
        &self.data.line_points[l as usize * per..(l as usize + 1) * per]
    }

    /// Lines through point `p`, ascending.
    pub fn lines_through(&self, p: u32) -> &[u32] {
        let per = self.order() as usize + 1;
        &self.data.point_lines[p as usize * per..(p as usize + 1) * per]
    }

    pub fn incident(&self, p: u32, l: u32) -> bool {
        dot(self.field(), self.coords(p), self.coords(l)).is_zero()
    }

    pub fn line_through(&self, a: u32, b: u32) -> Result<u32, PlaneError> {
        if a == b {
            return Err(PlaneError::SamePoint);
        }
        self.index_of(cross(self.field(), self.coords(a), self.coords(b)))
    }

    pub fn meet(&self, l: u32, m: u32) -> Result<u32, PlaneError> {
        if l == m {
            return Err(PlaneError::SameLine);
        }
        self.index_of(cross(self.field(), self.coords(l), self.coords(m)))
    }

    pub fn bitmap(&self) -> Option<&IncidenceBitmap> {
        self.data.bitmap.as_ref()
    }

    pub fn point_set<I: IntoIterator<Item = u32>>(&self, indices: I) -> Result<PointSet, PlaneError> {
        PointSet::new(self, indices)
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet { field: self.spec().clone(), indices: Vec::new() }
    }

    pub fn full_set(&self) -> PointSet {
        PointSet { field: self.spec().clone(), indices: (0..self.num_points() as u32).collect() }
    }

    /// Index set of the given points.
    pub fn set_of_points<'a, I>(&self, points: I) -> PointSet
    where
        I: IntoIterator<Item = &'a ProjPoint>,
    {
        let idx = points.into_iter().map(|p| self.point_index(p));
        PointSet::new(self, idx).expect("normalized points index into the plane")
    }

    pub fn belongs(&self, set: &PointSet) -> bool {
        set.field == *self.spec()
    }
}

/// A set of points of one plane, stored as ascending canonical indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSet {
    field: FieldSpec,
    indices: Vec<u32>,
}

impl PointSet {
    pub fn new<I: IntoIterator<Item = u32>>(plane: &Plane, indices: I) -> Result<Self, PlaneError> {
        let count = plane.num_points();
        let mut v: Vec<u32> = indices.into_iter().collect();
        if let Some(&bad) = v.iter().find(|&&i| i as usize >= count) {
            return Err(PlaneError::IndexOutOfRange { index: bad as usize, count });
        }
        v.sort_unstable();
        v.dedup();
        Ok(PointSet { field: plane.spec().clone(), indices: v })
    }

    pub fn field_spec(&self) -> &FieldSpec {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.indices.iter().copied()
    }

    pub fn contains(&self, i: u32) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet, PlaneError> {
        if self.field != other.field {
            return Err(PlaneError::MixedPlanes);
        }
        let mut v = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.indices, &other.indices);
        while i < a.len() || j < b.len() {
            let next = match (a.get(i), b.get(j)) {
                (Some(&x), Some(&y)) if x == y => {
                    i += 1;
                    j += 1;
                    x
                }
                (Some(&x), Some(&y)) if x < y => {
                    i += 1;
                    x
                }
                (Some(_), Some(&y)) => {
                    j += 1;
                    y
                }
                (Some(&x), None) => {
                    i += 1;
                    x
                }
                (None, Some(&y)) => {
                    j += 1;
                    y
                }
                (None, None) => unreachable!(),
            };
            v.push(next);
        }
        Ok(PointSet { field: self.field.clone(), indices: v })
    }

    pub fn intersection(&self, other: &PointSet) -> Result<PointSet, PlaneError> {
        if self.field != other.field {
            return Err(PlaneError::MixedPlanes);
        }
        let indices = self.iter().filter(|&i| other.contains(i)).collect();
        Ok(PointSet { field: self.field.clone(), indices })
    }

    pub fn without(&self, i: u32) -> PointSet {
        PointSet { field: self.field.clone(), indices: self.iter().filter(|&j| j != i).collect() }
    }

    pub fn to_bitset(&self, plane: &Plane) -> BitSet {
        let mut b = BitSet::new(plane.num_points());
        for i in self.iter() {
            b.insert(i as usize);
        }
        b
    }

    pub fn points(&self, plane: &Plane) -> Vec<ProjPoint> {
        self.iter().map(|i| plane.point(i)).collect()
    }
}
