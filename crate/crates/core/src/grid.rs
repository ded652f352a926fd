//! Uniform one-dimensional meshes, grid functions, quadrature, and one-sided
//! boundary derivatives.
//!
//! Two geometries are supported: a plain interval (left, right) and a radial
//! ball of dimension N >= 1, parametrized by the radius rho in [0, R]. All
//! downstream modules sample coefficients and unknowns on these node sets.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Minimum number of mesh subintervals accepted by [`build_mesh`].
pub const MIN_SUBINTERVALS: usize = 8;

/// Domain shape. Radial geometries always start at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    /// The open interval (left, right).
    Interval { left: f64, right: f64 },
    /// A ball of radius `radius` in dimension `dimension`, reduced to the
    /// radial coordinate on (0, radius) with a symmetry condition at 0.
    Radial { dimension: u32, radius: f64 },
}

impl Geometry {
    /// Interval geometry with validated endpoints.
    pub fn interval(left: f64, right: f64) -> Result<Self> {
        if !left.is_finite() || !right.is_finite() || right <= left {
            return Err(Error::InvalidParameter(format!(
                "interval needs finite left < right, got [{left}, {right}]"
            )));
        }
        Ok(Geometry::Interval { left, right })
    }

    /// Radial geometry with validated dimension and radius.
    pub fn radial(dimension: u32, radius: f64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidParameter(
                "radial dimension must be >= 1".into(),
            ));
        }
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "radial radius must be positive, got {radius}"
            )));
        }
        Ok(Geometry::Radial { dimension, radius })
    }

    pub fn left(&self) -> f64 {
        match self {
            Geometry::Interval { left, .. } => *left,
            Geometry::Radial { .. } => 0.0,
        }
    }

    pub fn right(&self) -> f64 {
        match self {
            Geometry::Interval { right, .. } => *right,
            Geometry::Radial { radius, .. } => *radius,
        }
    }

    pub fn width(&self) -> f64 {
        self.right() - self.left()
    }

    pub fn is_radial(&self) -> bool {
        matches!(self, Geometry::Radial { .. })
    }
}

/// Boundary condition imposed at the outer boundary of the domain.
///
/// Radial meshes always carry the symmetry condition u'(0) = 0 at the center;
/// the variant below only governs the outer endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

/// Equispaced mesh with nodes x_i = left + i h, i = 0..=n.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    geometry: Geometry,
    n: usize,
    h: f64,
    nodes: Vec<f64>,
}

/// Build an equispaced mesh with `n` subintervals (so n + 1 nodes).
pub fn build_mesh(geometry: Geometry, n: usize) -> Result<Mesh> {
    if n < MIN_SUBINTERVALS {
        return Err(Error::MeshTooCoarse {
            n,
            min: MIN_SUBINTERVALS,
        });
    }
    let left = geometry.left();
    let h = geometry.width() / n as f64;
    let nodes: Vec<f64> = (0..=n).map(|i| left + i as f64 * h).collect();
    Ok(Mesh {
        geometry,
        n,
        h,
        nodes,
    })
}

impl Mesh {
    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Number of subintervals.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Mesh width.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// All nodes, including both endpoints.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> f64 {
        self.nodes[i]
    }

    pub fn left(&self) -> f64 {
        self.geometry.left()
    }

    pub fn right(&self) -> f64 {
        self.geometry.right()
    }

    /// Two meshes are compatible when they discretize the same geometry with
    /// the same resolution.
    pub fn compatible(&self, other: &Mesh) -> bool {
        self.geometry == other.geometry && self.n == other.n
    }
}

/// Closed subinterval of a mesh's domain, used to restrict weights and
/// eigenproblems to a positivity component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subinterval {
    pub left: f64,
    pub right: f64,
}

impl Subinterval {
    pub fn new(left: f64, right: f64) -> Result<Self> {
        if !left.is_finite() || !right.is_finite() || right <= left {
            return Err(Error::InvalidParameter(format!(
                "subinterval needs left < right, got [{left}, {right}]"
            )));
        }
        Ok(Subinterval { left, right })
    }

    pub fn width(&self) -> f64 {
        self.right - self.left
    }

    /// Largest node-aligned subinterval [x_i, x_j] contained in `self`.
    ///
    /// Returns the node index pair (i, j); `None` when fewer than two nodes
    /// fall inside. Snapping tolerates endpoints that miss a node by a few
    /// ulps so that analytically exact bounds survive in floating point.
    pub fn snap(&self, mesh: &Mesh) -> Option<(usize, usize)> {
        let h = mesh.h();
        let slack = 1e-9 * h;
        let lo = (self.left - mesh.left() - slack) / h;
        let hi = (self.right - mesh.left() + slack) / h;
        let i = lo.ceil().max(0.0) as usize;
        let j = (hi.floor() as usize).min(mesh.n());
        if j > i {
            Some((i, j))
        } else {
            None
        }
    }
}

/// Nodal values of a function on a shared mesh.
#[derive(Debug, Clone)]
pub struct GridFunction {
    mesh: Arc<Mesh>,
    values: Vec<f64>,
}

impl GridFunction {
    /// Wrap nodal values; the length must be n + 1 and every entry finite.
    pub fn new(mesh: Arc<Mesh>, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.n() + 1 {
            return Err(Error::InvalidParameter(format!(
                "grid function needs {} values, got {}",
                mesh.n() + 1,
                values.len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid function has non-finite value at node {bad}"
            )));
        }
        Ok(GridFunction { mesh, values })
    }

    /// Sample a function at the mesh nodes.
    pub fn from_fn(mesh: Arc<Mesh>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values: Vec<f64> = mesh.nodes().iter().map(|&x| f(x)).collect();
        GridFunction::new(mesh, values)
    }

    pub fn constant(mesh: Arc<Mesh>, c: f64) -> Result<Self> {
        let len = mesh.n() + 1;
        GridFunction::new(mesh, vec![c; len])
    }

    pub fn zeros(mesh: Arc<Mesh>) -> Self {
        let len = mesh.n() + 1;
        GridFunction {
            mesh,
            values: vec![0.0; len],
        }
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// Minimum over nodes 1..n-1.
    pub fn min_interior(&self) -> f64 {
        self.values[1..self.values.len() - 1]
            .iter()
            .fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// New grid function with values `self + c * other`. Meshes must match.
    pub fn add_scaled(&self, c: f64, other: &GridFunction) -> Result<GridFunction> {
        if !self.mesh.compatible(&other.mesh) {
            return Err(Error::InvalidParameter(
                "grid functions live on incompatible meshes".into(),
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + c * b)
            .collect();
        GridFunction::new(self.mesh.clone(), values)
    }

    pub fn scaled(&self, c: f64) -> Result<GridFunction> {
        let values = self.values.iter().map(|v| c * v).collect();
        GridFunction::new(self.mesh.clone(), values)
    }

    /// Nodewise maximum distance to another grid function.
    pub fn sup_distance(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Second-order one-sided derivative estimates at the two endpoints.
///
/// Left: (-3 u_0 + 4 u_1 - u_2) / (2h). Right: (3 u_n - 4 u_{n-1} + u_{n-2}) / (2h).
/// Both approximate u' (not the outward normal derivative) to O(h^2).
pub fn boundary_derivatives(u: &GridFunction) -> (f64, f64) {
    let v = u.values();
    let n = v.len() - 1;
    let h = u.mesh().h();
    let left = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    let right = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
    (left, right)
}

/// Composite quadrature of the nodal values over [left, right].
///
/// Simpson when n is even, trapezoid when n is odd. The radial geometry is
/// integrated in the plain coordinate measure d rho as well; callers that
/// need the volume measure weight the integrand themselves.
pub fn integrate(u: &GridFunction) -> f64 {
    let v = u.values();
    let n = v.len() - 1;
    let h = u.mesh().h();
    if n % 2 == 0 {
        let mut acc = v[0] + v[n];
        for (i, &vi) in v.iter().enumerate().take(n).skip(1) {
            acc += if i % 2 == 1 { 4.0 * vi } else { 2.0 * vi };
        }
        acc * h / 3.0
    } else {
        let mut acc = 0.5 * (v[0] + v[n]);
        for &vi in v.iter().take(n).skip(1) {
            acc += vi;
        }
        acc * h
    }
}

/// Discrete H^1 norm: forward-difference gradient part plus trapezoid value part.
pub fn h1_norm(u: &GridFunction) -> f64 {
    let v = u.values();
    let h = u.mesh().h();
    let mut grad = 0.0;
    for w in v.windows(2) {
        let d = (w[1] - w[0]) / h;
        grad += h * d * d;
    }
    let mut val = 0.5 * (v[0] * v[0] + v[v.len() - 1] * v[v.len() - 1]);
    for &vi in &v[1..v.len() - 1] {
        val += vi * vi;
    }
    (grad + h * val).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn interval_mesh(left: f64, right: f64, n: usize) -> Arc<Mesh> {
        Arc::new(build_mesh(Geometry::interval(left, right).unwrap(), n).unwrap())
    }

    #[test]
    fn mesh_rejects_coarse_resolution() {
        let g = Geometry::interval(0.0, 1.0).unwrap();
        assert!(matches!(
            build_mesh(g, 7),
            Err(Error::MeshTooCoarse { n: 7, .. })
        ));
        assert!(build_mesh(g, 8).is_ok());
    }

    #[test]
    fn mesh_nodes_are_equispaced() {
        let mesh = interval_mesh(0.0, PI, 1000);
        assert_eq!(mesh.nodes().len(), 1001);
        assert_eq!(mesh.node(0), 0.0);
        // n * h reproduces the width within 8 ulps.
        let width = mesh.h() * mesh.n() as f64;
        let ulp = PI * f64::EPSILON;
        assert!((width - PI).abs() <= 8.0 * ulp);
        for i in 0..mesh.n() {
            let gap = mesh.node(i + 1) - mesh.node(i);
            assert!((gap - mesh.h()).abs() <= 4.0 * ulp);
        }
    }

    #[test]
    fn radial_geometry_validates() {
        assert!(Geometry::radial(0, 1.0).is_err());
        assert!(Geometry::radial(3, -1.0).is_err());
        let g = Geometry::radial(3, 2.0).unwrap();
        assert_eq!(g.left(), 0.0);
        assert_eq!(g.right(), 2.0);
    }

    #[test]
    fn grid_function_validates_length_and_finiteness() {
        let mesh = interval_mesh(0.0, 1.0, 8);
        assert!(GridFunction::new(mesh.clone(), vec![0.0; 8]).is_err());
        let mut vals = vec![0.0; 9];
        vals[3] = f64::NAN;
        assert!(GridFunction::new(mesh.clone(), vals).is_err());
        assert!(GridFunction::new(mesh, vec![1.0; 9]).is_ok());
    }

    #[test]
    fn boundary_derivatives_exact_on_affine() {
        let mesh = interval_mesh(0.0, 1.0, 16);
        let u = GridFunction::from_fn(mesh, |x| x).unwrap();
        let (l, r) = boundary_derivatives(&u);
        assert!((l - 1.0).abs() < 1e-13);
        assert!((r - 1.0).abs() < 1e-13);
    }

    #[test]
    fn boundary_derivatives_second_order_on_sine() {
        let mesh = interval_mesh(0.0, PI, 1000);
        let u = GridFunction::from_fn(mesh, |x| x.sin()).unwrap();
        let (l, r) = boundary_derivatives(&u);
        // u'(0) = 1, u'(pi) = -1; one-sided error is O(h^2) ~ 3.3e-6 here.
        assert!((l - 1.0).abs() < 1e-5);
        assert!((r + 1.0).abs() < 1e-5);
    }

    #[test]
    fn boundary_derivatives_flat_quartic_contact() {
        // sin^4(x)/4 has u' = 0 at both endpoints with quartic contact.
        let mesh = interval_mesh(0.0, PI, 1000);
        let u = GridFunction::from_fn(mesh, |x| x.sin().powi(4) / 4.0).unwrap();
        let (l, r) = boundary_derivatives(&u);
        assert!(l.abs() < 1e-6);
        assert!(r.abs() < 1e-6);
    }

    #[test]
    fn simpson_is_exact_on_constants() {
        let mesh = interval_mesh(0.0, PI, 100);
        let u = GridFunction::constant(mesh, 1.0).unwrap();
        let q = integrate(&u);
        assert!((q - PI).abs() <= 16.0 * PI * f64::EPSILON);
    }

    #[test]
    fn simpson_integrates_sine() {
        let mesh = interval_mesh(0.0, PI, 100);
        let u = GridFunction::from_fn(mesh, |x| x.sin()).unwrap();
        assert!((integrate(&u) - 2.0).abs() < 1e-7);
    }

    #[test]
    fn trapezoid_used_for_odd_n() {
        let mesh = interval_mesh(0.0, PI, 101);
        let u = GridFunction::from_fn(mesh, |x| x.sin()).unwrap();
        // Trapezoid error for sin on (0, pi) is ~ pi h^2 / 12 * max|u''| ~ 2.5e-4.
        let err = (integrate(&u) - 2.0).abs();
        assert!(err > 1e-6, "odd n should fall back to trapezoid, err = {err}");
        assert!(err < 1e-3);
    }

    #[test]
    fn subinterval_snaps_inward() {
        let mesh = interval_mesh(0.0, PI, 1000);
        let b = Subinterval::new(1.0, 2.0).unwrap();
        let (i, j) = b.snap(&mesh).unwrap();
        assert!(mesh.node(i) >= 1.0 - 1e-12);
        assert!(mesh.node(j) <= 2.0 + 1e-12);
        assert!(mesh.node(i) - 1.0 < mesh.h());
        assert!(2.0 - mesh.node(j) < mesh.h());
        // Node-aligned bounds survive snapping exactly.
        let aligned = Subinterval::new(mesh.node(10), mesh.node(20)).unwrap();
        assert_eq!(aligned.snap(&mesh), Some((10, 20)));
    }

    #[test]
    fn h1_norm_of_sine() {
        // ||sin||_{H^1}^2 on (0, pi) = int cos^2 + int sin^2 = pi.
        let mesh = interval_mesh(0.0, PI, 2000);
        let u = GridFunction::from_fn(mesh, |x| x.sin()).unwrap();
        assert!((h1_norm(&u) - PI.sqrt()).abs() < 1e-3);
    }
}
