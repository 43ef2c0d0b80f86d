//! Untouchable sets built from unions of conics and their nuclei.
//!
//! Every constructor validates its parameters, builds the set, and checks
//! the result (exact size and no tangent line) before returning it.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conics::{Conic, ConicError, Pencil, Quadratic};
use crate::gf::{Elem, Field};
use crate::plane::{Plane, PlaneError, PointSet, ProjLine};
use crate::verify::{check_set, tangent_witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "EVEN_2QM1")]
    Even2qMinus1,
    #[serde(rename = "EVEN_2QM2")]
    Even2qMinus2,
    #[serde(rename = "EVEN_2QP1")]
    Even2qPlus1,
    #[serde(rename = "ODD_2QP1")]
    Odd2qPlus1,
    #[serde(rename = "HYPERCONIC")]
    Hyperconic,
    #[serde(rename = "UNION")]
    Union,
}

impl Family {
    /// Name used on the command line.
    pub fn cli_name(&self) -> &'static str {
        match self {
            Family::Even2qMinus1 => "even-2q-1",
            Family::Even2qMinus2 => "even-2q-2",
            Family::Even2qPlus1 => "even-2q+1",
            Family::Odd2qPlus1 => "odd-2q+1",
            Family::Hyperconic => "hyperconic",
            Family::Union => "union",
        }
    }

    pub fn from_cli_name(s: &str) -> Option<Family> {
        Self::ALL.into_iter().find(|f| f.cli_name() == s)
    }

    pub const ALL: [Family; 6] = [
        Family::Even2qMinus1,
        Family::Even2qMinus2,
        Family::Even2qPlus1,
        Family::Odd2qPlus1,
        Family::Hyperconic,
        Family::Union,
    ];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

/// Scalar parameters of a construction, as field-element encodings.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pencil: Option<Pencil>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a: Option<Elem>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub b: Option<Elem>,
    /// Form coefficients `(xx, yy, zz, xy, xz, yz)` for a hyperconic over an
    /// arbitrary conic.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coeffs: Option<[Elem; 6]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub parts: Option<usize>,
}

impl Params {
    pub fn a(a: Elem) -> Self {
        Params { a: Some(a), ..Default::default() }
    }

    pub fn ab(a: Elem, b: Elem) -> Self {
        Params { a: Some(a), b: Some(b), ..Default::default() }
    }

    pub fn b(b: Elem) -> Self {
        Params { b: Some(b), ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionResult {
    pub family: Family,
    pub params: Params,
    pub set: PointSet,
    pub expected_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("{family} requires even q >= 8, got q = {q}")]
    NeedsEvenOrder { family: Family, q: u32 },
    #[error("{family} requires q an even power of 2 with q >= 16, got q = {q}")]
    NeedsEvenPowerOfTwo { family: Family, q: u32 },
    #[error("odd-2q+1 requires q ≡ 3 (mod 4) with q >= 7, got q = {q}")]
    NeedsThreeModFour { q: u32 },
    #[error("{0}")]
    InvalidParameter(String),
    #[error("a = {0} is a cube root of unity; use the even-2q-2 family for it")]
    CubeRootOfUnity(Elem),
    #[error("input set {index} is not untouchable: tangent line {line}")]
    NotUntouchable { index: usize, line: ProjLine },
    #[error("no admissible parameter for {family} at q = {q}")]
    NoAdmissibleParameter { family: Family, q: u32 },
    #[error("{family} produced {size} points, expected {expected}, untouchable = {untouchable}")]
    SelfCheckFailed { family: Family, size: usize, expected: usize, untouchable: bool },
    #[error(transparent)]
    Conic(#[from] ConicError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

fn param(field: &Field, e: Elem, name: &str) -> Result<Elem, ConstructionError> {
    if e.enc() < field.q() {
        Ok(e)
    } else {
        Err(ConstructionError::InvalidParameter(format!(
            "{name} = {e} is not an element of GF({})",
            field.q()
        )))
    }
}

fn require_even(plane: &Plane, family: Family) -> Result<(), ConstructionError> {
    let q = plane.order();
    if !plane.field().is_even() || q < 8 {
        return Err(ConstructionError::NeedsEvenOrder { family, q });
    }
    Ok(())
}

fn finish(
    plane: &Plane,
    family: Family,
    params: Params,
    set: PointSet,
    expected_size: usize,
) -> Result<ConstructionResult, ConstructionError> {
    let report = check_set(plane, &set, expected_size);
    if !report.passed() {
        return Err(ConstructionError::SelfCheckFailed {
            family,
            size: report.size,
            expected: expected_size,
            untouchable: report.untouchable,
        });
    }
    Ok(ConstructionResult { family, params, set, expected_size })
}

fn single(plane: &Plane, t: [Elem; 3]) -> PointSet {
    plane.point_set([plane.index_of(t).expect("nonzero triple")]).expect("valid index")
}

/// A conic together with its nucleus; `q+2` points met by every line in
/// 0 or 2 points.
pub fn hyperconic(plane: &Plane, q: &Quadratic) -> Result<ConstructionResult, ConstructionError> {
    if !plane.field().is_even() {
        return Err(ConicError::OddOrder.into());
    }
    let conic = Conic::new(plane, *q)?;
    let nucleus = conic.nucleus(plane)?;
    let set = conic.points().union(&plane.point_set([nucleus])?)?;
    let params = Params { coeffs: Some(q.coeffs()), ..Default::default() };
    finish(plane, Family::Hyperconic, params, set, plane.order() as usize + 2)
}

/// Hyperconic over the member of an even pencil.
pub fn pencil_hyperconic(
    plane: &Plane,
    pencil: Pencil,
    k: Elem,
) -> Result<ConstructionResult, ConstructionError> {
    let quad = crate::conics::pencil_conic(plane.field(), pencil, param(plane.field(), k, "k")?)?;
    let mut r = hyperconic(plane, &quad)?;
    r.params = Params { pencil: Some(pencil), a: Some(k), ..Default::default() };
    Ok(r)
}

/// `C_a ∪ C_{a²} ∪ {(1,1,a²)}` over pencil P1, of size `2q−1`.
pub fn even_2q_minus_1(plane: &Plane, a: Elem) -> Result<ConstructionResult, ConstructionError> {
    let family = Family::Even2qMinus1;
    require_even(plane, family)?;
    let f = plane.field();
    let a = param(f, a, "a")?;
    if a.is_zero() || a == Elem::ONE {
        return Err(ConstructionError::InvalidParameter(format!("a must not be 0 or 1, got {a}")));
    }
    if f.pow(a, 3) == Elem::ONE {
        return Err(ConstructionError::CubeRootOfUnity(a));
    }
    let a2 = f.mul(a, a);
    let ca = Conic::from_pencil(plane, Pencil::P1, a)?;
    let ca2 = Conic::from_pencil(plane, Pencil::P1, a2)?;
    let set = ca
        .points()
        .union(ca2.points())?
        .union(&single(plane, [Elem::ONE, Elem::ONE, a2]))?;
    finish(plane, family, Params::a(a), set, 2 * plane.order() as usize - 1)
}

/// `C_a ∪ C_{a²}` over pencil P1 for a primitive cube root of unity `a`;
/// each conic contains the other's nucleus. Size `2q−2`.
pub fn even_2q_minus_2(plane: &Plane, a: Elem) -> Result<ConstructionResult, ConstructionError> {
    let family = Family::Even2qMinus2;
    let (q, f) = (plane.order(), plane.field());
    if !f.is_even() || f.k() % 2 != 0 || q < 16 {
        return Err(ConstructionError::NeedsEvenPowerOfTwo { family, q });
    }
    let a = param(f, a, "a")?;
    if a == Elem::ONE || f.pow(a, 3) != Elem::ONE {
        return Err(ConstructionError::InvalidParameter(format!(
            "a = {a} is not a primitive cube root of unity"
        )));
    }
    let ca = Conic::from_pencil(plane, Pencil::P1, a)?;
    let ca2 = Conic::from_pencil(plane, Pencil::P1, f.mul(a, a))?;
    let set = ca.points().union(ca2.points())?;
    finish(plane, family, Params::a(a), set, 2 * q as usize - 2)
}

/// `D_a ∪ D_b ∪ {(0,1,a), (0,1,b)}` over pencil P2, of size `2q+1`.
pub fn even_2q_plus_1(
    plane: &Plane,
    a: Elem,
    b: Elem,
) -> Result<ConstructionResult, ConstructionError> {
    let family = Family::Even2qPlus1;
    require_even(plane, family)?;
    let f = plane.field();
    let (a, b) = (param(f, a, "a")?, param(f, b, "b")?);
    if a.is_zero() || b.is_zero() {
        return Err(ConstructionError::InvalidParameter("a and b must be nonzero".into()));
    }
    if a == b {
        return Err(ConstructionError::InvalidParameter("a and b must differ".into()));
    }
    let da = Conic::from_pencil(plane, Pencil::P2, a)?;
    let db = Conic::from_pencil(plane, Pencil::P2, b)?;
    let (o, z) = (Elem::ONE, Elem::ZERO);
    let set = da
        .points()
        .union(db.points())?
        .union(&single(plane, [z, o, a]))?
        .union(&single(plane, [z, o, b]))?;
    finish(plane, family, Params::ab(a, b), set, 2 * plane.order() as usize + 1)
}

/// `C_1 ∪ C_b ∪ {(0,0,1)}` over pencil P3, without checking any hypothesis
/// beyond odd q and `b ∉ {0, 1}`.
pub fn conic_pair_set(plane: &Plane, b: Elem) -> Result<PointSet, ConstructionError> {
    let f = plane.field();
    let b = param(f, b, "b")?;
    if b.is_zero() || b == Elem::ONE {
        return Err(ConstructionError::InvalidParameter(format!("b must not be 0 or 1, got {b}")));
    }
    let c1 = Conic::from_pencil(plane, Pencil::P3, Elem::ONE)?;
    let cb = Conic::from_pencil(plane, Pencil::P3, b)?;
    Ok(c1.points().union(cb.points())?.union(&single(plane, [Elem::ZERO, Elem::ZERO, Elem::ONE]))?)
}

fn require_three_mod_four(field: &Field) -> Result<(), ConstructionError> {
    let q = field.q();
    if field.is_even() || q % 4 != 3 || q < 7 {
        return Err(ConstructionError::NeedsThreeModFour { q });
    }
    Ok(())
}

/// `C_1 ∪ C_b ∪ {(0,0,1)}` for `q ≡ 3 (mod 4)` with `b` and `b−1` both
/// non-squares. Size `2q+1`.
pub fn odd_2q_plus_1(plane: &Plane, b: Elem) -> Result<ConstructionResult, ConstructionError> {
    let f = plane.field();
    require_three_mod_four(f)?;
    let b = param(f, b, "b")?;
    if b.is_zero() || f.is_square(b) || f.is_square(f.sub(b, Elem::ONE)) {
        return Err(ConstructionError::InvalidParameter(format!(
            "b = {b}: b and b-1 must both be non-squares"
        )));
    }
    let set = conic_pair_set(plane, b)?;
    finish(plane, Family::Odd2qPlus1, Params::b(b), set, 2 * plane.order() as usize + 1)
}

/// Union of untouchable sets of one plane; untouchable again.
pub fn union_sets(plane: &Plane, sets: &[PointSet]) -> Result<ConstructionResult, ConstructionError> {
    let mut acc = plane.empty_set();
    for (index, s) in sets.iter().enumerate() {
        if !plane.belongs(s) {
            return Err(PlaneError::MixedPlanes.into());
        }
        if let Some(w) = tangent_witness(plane, s) {
            return Err(ConstructionError::NotUntouchable { index, line: w.line });
        }
        acc = acc.union(s)?;
    }
    let expected = acc.len();
    let params = Params { parts: Some(sets.len()), ..Default::default() };
    finish(plane, Family::Union, params, acc, expected)
}

/// Smallest `b` with `b` and `b−1` both non-squares.
pub fn find_odd_parameter(field: &Field) -> Result<Elem, ConstructionError> {
    require_three_mod_four(field)?;
    odd_parameters(field)
        .into_iter()
        .next()
        .ok_or(ConstructionError::NoAdmissibleParameter { family: Family::Odd2qPlus1, q: field.q() })
}

fn odd_parameters(field: &Field) -> Vec<Elem> {
    field
        .nonzero_elements()
        .filter(|&b| !field.is_square(b) && !field.is_square(field.sub(b, Elem::ONE)))
        .collect()
}

/// Whether the family's field hypotheses hold at this plane.
pub fn family_applies(plane: &Plane, family: Family) -> bool {
    let f = plane.field();
    let q = plane.order();
    match family {
        Family::Even2qMinus1 | Family::Even2qPlus1 => f.is_even() && q >= 8,
        Family::Even2qMinus2 => f.is_even() && f.k().is_multiple_of(2) && q >= 16,
        Family::Odd2qPlus1 => !f.is_even() && q % 4 == 3 && q >= 7,
        Family::Hyperconic => f.is_even(),
        Family::Union => true,
    }
}

/// Every admissible parameter choice of a conic family, in encoding order.
/// Empty when the family does not apply. `Union` has no scalar parameters.
pub fn admissible_params(plane: &Plane, family: Family) -> Vec<Params> {
    if !family_applies(plane, family) {
        return Vec::new();
    }
    let f = plane.field();
    let one = Elem::ONE;
    match family {
        Family::Even2qMinus1 => f
            .elements()
            .filter(|&a| !a.is_zero() && a != one && f.pow(a, 3) != one)
            .map(Params::a)
            .collect(),
        Family::Even2qMinus2 => {
            f.cube_roots_of_unity().into_iter().filter(|&a| a != one).map(Params::a).collect()
        }
        Family::Even2qPlus1 => f
            .nonzero_elements()
            .flat_map(|a| f.nonzero_elements().filter(move |&b| b != a).map(move |b| Params::ab(a, b)))
            .collect(),
        Family::Odd2qPlus1 => odd_parameters(f).into_iter().map(Params::b).collect(),
        Family::Hyperconic => [Pencil::P1, Pencil::P2]
            .into_iter()
            .flat_map(|pencil| {
                f.elements()
                    .filter(move |&k| match pencil {
                        Pencil::P1 => k.enc() > 1,
                        _ => !k.is_zero(),
                    })
                    .map(move |k| Params { pencil: Some(pencil), a: Some(k), ..Default::default() })
            })
            .collect(),
        Family::Union => Vec::new(),
    }
}

/// Runs a conic family with explicit parameters.
pub fn construct(
    plane: &Plane,
    family: Family,
    params: &Params,
) -> Result<ConstructionResult, ConstructionError> {
    let need = |v: Option<Elem>, name: &str| {
        v.ok_or_else(|| ConstructionError::InvalidParameter(format!("{family} needs parameter {name}")))
    };
    match family {
        Family::Even2qMinus1 => even_2q_minus_1(plane, need(params.a, "a")?),
        Family::Even2qMinus2 => even_2q_minus_2(plane, need(params.a, "a")?),
        Family::Even2qPlus1 => even_2q_plus_1(plane, need(params.a, "a")?, need(params.b, "b")?),
        Family::Odd2qPlus1 => odd_2q_plus_1(plane, need(params.b, "b")?),
        Family::Hyperconic => match (params.coeffs, params.a) {
            (Some(c), _) => hyperconic(plane, &Quadratic::from_coeffs(c)?),
            (None, Some(k)) => pencil_hyperconic(plane, params.pencil.unwrap_or(Pencil::P1), k),
            (None, None) => Err(ConstructionError::InvalidParameter(
                "hyperconic needs --a (pencil parameter) or explicit coefficients".into(),
            )),
        },
        Family::Union => Err(ConstructionError::InvalidParameter(
            "union takes point sets, not scalar parameters".into(),
        )),
    }
}

/// Runs a family with its smallest admissible parameters.
pub fn construct_default(plane: &Plane, family: Family) -> Result<ConstructionResult, ConstructionError> {
    match family {
        Family::Even2qMinus1 | Family::Even2qPlus1 => require_even(plane, family)?,
        Family::Even2qMinus2 => {
            if !family_applies(plane, family) {
                return Err(ConstructionError::NeedsEvenPowerOfTwo { family, q: plane.order() });
            }
        }
        Family::Odd2qPlus1 => require_three_mod_four(plane.field())?,
        _ => {}
    }
    let params = admissible_params(plane, family)
        .into_iter()
        .next()
        .ok_or(ConstructionError::NoAdmissibleParameter { family, q: plane.order() })?;
    construct(plane, family, &params)
}

/// One row of a census table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    pub family: Family,
    pub params: Params,
    pub size: Option<usize>,
    pub expected_size: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Runs every applicable conic family over all admissible parameters.
/// For `even-2q+1` only unordered pairs `a < b` are listed, since the set
/// is symmetric in `a` and `b`.
pub fn census(plane: &Plane) -> Vec<CensusEntry> {
    let q = plane.order() as usize;
    let mut out = Vec::new();
    for family in [Family::Even2qMinus1, Family::Even2qMinus2, Family::Even2qPlus1, Family::Odd2qPlus1] {
        let expected_size = match family {
            Family::Even2qMinus1 => 2 * q - 1,
            Family::Even2qMinus2 => 2 * q - 2,
            _ => 2 * q + 1,
        };
        for params in admissible_params(plane, family) {
            if family == Family::Even2qPlus1 && params.a >= params.b {
                continue;
            }
            let entry = match construct(plane, family, &params) {
                Ok(r) => CensusEntry {
                    family,
                    params,
                    size: Some(r.set.len()),
                    expected_size,
                    pass: true,
                    error: None,
                },
                Err(e) => CensusEntry {
                    family,
                    params,
                    size: None,
                    expected_size,
                    pass: false,
                    error: Some(e.to_string()),
                },
            };
            out.push(entry);
        }
    }
    out
}
