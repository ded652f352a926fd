//! Cone membership for computed nonnegative solutions.
//!
//! Dirichlet solutions belong to the cone interior when they are positive
//! inside and both outward normal derivatives are strictly negative; Neumann
//! solutions when they are positive up to the closure. Zero regions are
//! nodal runs below a discretization-aware threshold; dead cores are the
//! much stricter hard-zero runs whose closure stays inside the domain.

use crate::grid::{
    boundary_derivatives, BoundaryCondition, GridFunction, Subinterval,
};

/// Classification thresholds. All but `trivial` scale with the sup norm so
/// that verdicts are invariant under rescaling u by a few decades.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Below this a nodal value counts as a zero of the solution.
    pub positivity: f64,
    /// Outward normal derivatives must clear this margin for the cone.
    pub derivative: f64,
    /// Sup norms at or below this mean the trivial solution.
    pub trivial: f64,
    /// Hard-zero threshold for dead core detection.
    pub zero: f64,
    /// Minimum dead core width, in units of the mesh spacing.
    pub min_core_width: f64,
}

impl Tolerances {
    /// Defaults tied to the function's scale and the mesh resolution.
    ///
    /// Cone membership is invariant under positive rescaling, so the
    /// positivity and derivative thresholds are proportional to the sup
    /// norm; near the boundary an in-cone function only reaches values of
    /// order slope * h, which an absolute floor would misread as zeros
    /// once the amplitude is small. The h^2 term keeps O(h^2)-accurate
    /// data from upgrading a flat boundary contact into a strictly
    /// positive derivative. Hard zeros stay on an absolute floor: they
    /// come from the solver's arithmetic, not from the function's scale.
    pub fn for_function(u: &GridFunction) -> Self {
        let s = u.sup_norm();
        let h = u.mesh().h();
        Tolerances {
            positivity: s * (1e-8 + 10.0 * h * h),
            derivative: 1e-6 * s,
            trivial: 1e-10,
            zero: 1e-11 * (1.0 + s),
            min_core_width: 10.0 * h,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositivityKind {
    Trivial,
    InConeD,
    InConeN,
    PositiveNotInCone,
    NonnegativeWithInteriorZeros,
}

/// Outcome of classifying one grid function.
#[derive(Debug, Clone)]
pub struct PositivityVerdict {
    pub kind: PositivityKind,
    pub sup_norm: f64,
    /// Minimum over interior nodes (the radial center counts as interior).
    pub min_interior: f64,
    /// Outward normal derivatives at (left, right); for radial geometry the
    /// left entry is the one-sided slope at the center and is ignored by the
    /// cone test.
    pub boundary_derivs: (f64, f64),
    /// Maximal nodal runs with u <= positivity tolerance.
    pub zero_regions: Vec<Subinterval>,
    /// Hard-zero runs with closure strictly inside the domain.
    pub dead_cores: Vec<Subinterval>,
}

pub fn verdict_is_in_cone(v: &PositivityVerdict, bc: BoundaryCondition) -> bool {
    matches!(
        (v.kind, bc),
        (PositivityKind::InConeD, BoundaryCondition::Dirichlet)
            | (PositivityKind::InConeN, BoundaryCondition::Neumann)
    )
}

/// Maximal index runs where the predicate holds.
fn runs_below(values: &[f64], threshold: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, &v) in values.iter().enumerate() {
        if v <= threshold {
            if start.is_none() {
                start = Some(i);
            }
        } else if let Some(s) = start.take() {
            out.push((s, i - 1));
        }
    }
    if let Some(s) = start {
        out.push((s, values.len() - 1));
    }
    out
}

pub fn classify(
    u: &GridFunction,
    bc: BoundaryCondition,
    tols: &Tolerances,
) -> PositivityVerdict {
    let mesh = u.mesh();
    let n = mesh.n();
    let values = u.values();
    let sup = u.sup_norm();
    let radial = mesh.geometry().is_radial();

    // The radial center is a symmetry point, not a boundary.
    let interior_lo = if radial { 0 } else { 1 };
    let min_interior = values[interior_lo..n]
        .iter()
        .fold(f64::INFINITY, |m, &v| m.min(v));

    let (dl, dr) = boundary_derivatives(u);
    let outward = (-dl, dr);

    // A zero located at a node is resolved only to within half a cell, so
    // reported regions are padded by h/2 (clamped to the domain); this also
    // keeps single-node runs representable.
    let half = 0.5 * mesh.h();
    let to_subinterval = |(i, j): (usize, usize)| {
        let left = (mesh.node(i) - half).max(mesh.left());
        let right = (mesh.node(j) + half).min(mesh.right());
        Subinterval::new(left, right).expect("padded run is nondegenerate")
    };

    let zero_runs = runs_below(values, tols.positivity);
    let zero_regions: Vec<Subinterval> = zero_runs.iter().copied().map(to_subinterval).collect();

    // Dead cores: hard zeros, clipped to interior nodes, wide enough to be
    // a genuine region rather than discretization fuzz.
    let mut dead_cores = Vec::new();
    for (mut i, mut j) in runs_below(values, tols.zero) {
        i = i.max(1);
        j = j.min(n - 1);
        if j > i && (j - i) as f64 * mesh.h() >= tols.min_core_width {
            dead_cores.push(
                Subinterval::new(mesh.node(i), mesh.node(j)).expect("core has width"),
            );
        }
    }

    let kind = if sup <= tols.trivial {
        PositivityKind::Trivial
    } else if !dead_cores.is_empty()
        || zero_runs.iter().any(|&(i, j)| i > 0 && j < n)
    {
        PositivityKind::NonnegativeWithInteriorZeros
    } else {
        match bc {
            BoundaryCondition::Dirichlet => {
                let normal_ok = if radial {
                    outward.1 < -tols.derivative
                } else {
                    outward.0 < -tols.derivative && outward.1 < -tols.derivative
                };
                if min_interior > tols.positivity && normal_ok {
                    PositivityKind::InConeD
                } else {
                    PositivityKind::PositiveNotInCone
                }
            }
            BoundaryCondition::Neumann => {
                let min_all = values.iter().fold(f64::INFINITY, |m, &v| m.min(v));
                if min_all > tols.positivity {
                    PositivityKind::InConeN
                } else {
                    PositivityKind::PositiveNotInCone
                }
            }
        }
    };

    PositivityVerdict {
        kind,
        sup_norm: sup,
        min_interior,
        boundary_derivs: outward,
        zero_regions,
        dead_cores,
    }
}
