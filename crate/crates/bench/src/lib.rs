//! Fixtures shared by the kernel benchmarks.

use untouchable::constructions::{construct_default, Family};
use untouchable::{Plane, PointSet};

/// Planes of the given orders, built once up front.
pub fn planes(orders: &[u64]) -> Vec<Plane> {
    orders.iter().map(|&q| Plane::of_order(q).expect("prime power")).collect()
}

/// A set of about `len` points spread over the plane by a fixed stride.
pub fn strided_set(plane: &Plane, len: usize) -> PointSet {
    let n = plane.num_points();
    let step = (n / len.max(1)).max(1);
    plane.point_set((0..n as u32).step_by(step).take(len)).expect("indices in range")
}

/// The default member of the first conic family that applies at this order.
pub fn family_set(plane: &Plane) -> PointSet {
    [Family::Even2qMinus1, Family::Odd2qPlus1, Family::Hyperconic]
        .into_iter()
        .find_map(|f| construct_default(plane, f).ok())
        .map(|r| r.set)
        .unwrap_or_else(|| strided_set(plane, 2 * plane.order() as usize))
}
