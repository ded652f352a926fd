//! Tridiagonal discretizations of -Delta + M and a direct Thomas solver.
//!
//! Dirichlet rows eliminate the boundary unknowns; Neumann endpoints use
//! ghost-node elimination, which keeps second-order accuracy; radial meshes
//! impose the symmetry row -N u''(0) at the center. With shift M >= 0 and a
//! Dirichlet endpoint the matrix is an irreducible M-matrix, which is what
//! the monotone iteration downstream relies on.

use std::sync::Arc;

use crate::coeffs::{split, Weight};
use crate::error::{Error, Result};
use crate::grid::{integrate, BoundaryCondition, Geometry, GridFunction, Mesh};

/// Right-hand sides for [`solve_linear_special`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialProblem {
    /// -Delta phi = a, phi = 0 on the boundary.
    PhiOfA,
    /// -Delta psi = a_plus, psi = 0 on the boundary.
    PsiOfAPlus,
}

/// Tridiagonal matrix for -Delta + M restricted to the unknown nodes,
/// together with the couplings into eliminated Dirichlet boundary nodes.
#[derive(Debug, Clone)]
pub struct TridiagonalOperator {
    mesh: Arc<Mesh>,
    bc: BoundaryCondition,
    shift: Vec<f64>,
    /// Node index of the first unknown.
    first: usize,
    /// sub[k] = A[k+1][k].
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
    /// Stencil coefficient from the first row into the eliminated left
    /// boundary node (0 when that node is an unknown).
    left_coupling: f64,
    /// Same for the last row and the right boundary node.
    right_coupling: f64,
}

/// Assemble -Delta + M on a mesh. The shift M must be nonnegative; operators
/// with signed diagonal perturbations (Newton Jacobians) are built through
/// the crate-internal constructor instead.
pub fn assemble(
    mesh: &Arc<Mesh>,
    bc: BoundaryCondition,
    shift: &GridFunction,
) -> Result<TridiagonalOperator> {
    if !shift.mesh().compatible(mesh) {
        return Err(Error::InvalidParameter(
            "shift sampled on an incompatible mesh".into(),
        ));
    }
    if let Some(bad) = shift.values().iter().position(|&m| m < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "shift must be nonnegative, found {} at node {bad}",
            shift.values()[bad]
        )));
    }
    Ok(assemble_unchecked(mesh, bc, shift.values()))
}

/// Assembly without the sign restriction on the diagonal perturbation.
pub(crate) fn assemble_unchecked(
    mesh: &Arc<Mesh>,
    bc: BoundaryCondition,
    shift: &[f64],
) -> TridiagonalOperator {
    let n = mesh.n();
    let h = mesh.h();
    let ih2 = 1.0 / (h * h);
    let geometry = mesh.geometry();

    let (first, last) = match (geometry, bc) {
        (Geometry::Interval { .. }, BoundaryCondition::Dirichlet) => (1, n - 1),
        (Geometry::Interval { .. }, BoundaryCondition::Neumann) => (0, n),
        (Geometry::Radial { .. }, BoundaryCondition::Dirichlet) => (0, n - 1),
        (Geometry::Radial { .. }, BoundaryCondition::Neumann) => (0, n),
    };
    let m = last - first + 1;
    let mut sub = vec![0.0; m - 1];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m - 1];
    let mut left_coupling = 0.0;
    let mut right_coupling = 0.0;

    for k in 0..m {
        let i = first + k;
        let (lo, di, up) = row_coefficients(geometry, bc, n, ih2, h, mesh.node(i), i);
        diag[k] = di + shift[i];
        if k > 0 {
            sub[k - 1] = lo;
        } else if i > 0 {
            left_coupling = lo;
        }
        if k < m - 1 {
            sup[k] = up;
        } else if i < n {
            right_coupling = up;
        }
    }

    TridiagonalOperator {
        mesh: mesh.clone(),
        bc,
        shift: shift.to_vec(),
        first,
        sub,
        diag,
        sup,
        left_coupling,
        right_coupling,
    }
}

/// Stencil coefficients (lower, diagonal, upper) of -Delta at node i,
/// before the shift is added.
fn row_coefficients(
    geometry: Geometry,
    bc: BoundaryCondition,
    n: usize,
    ih2: f64,
    h: f64,
    x: f64,
    i: usize,
) -> (f64, f64, f64) {
    match geometry {
        Geometry::Interval { .. } => {
            if i == 0 {
                // Ghost elimination of u_{-1} under u'(left) = 0.
                (0.0, 2.0 * ih2, -2.0 * ih2)
            } else if i == n {
                (-2.0 * ih2, 2.0 * ih2, 0.0)
            } else {
                (-ih2, 2.0 * ih2, -ih2)
            }
        }
        Geometry::Radial { dimension, .. } => {
            let nd = dimension as f64;
            if i == 0 {
                // Symmetry limit at the center: -Delta u -> -N u''(0).
                (0.0, 2.0 * nd * ih2, -2.0 * nd * ih2)
            } else if i == n {
                debug_assert_eq!(bc, BoundaryCondition::Neumann);
                // u'(R) = 0 also kills the first-order term.
                (-2.0 * ih2, 2.0 * ih2, 0.0)
            } else {
                let drift = (nd - 1.0) / (2.0 * h * x);
                (-ih2 + drift, 2.0 * ih2, -ih2 - drift)
            }
        }
    }
}

impl TridiagonalOperator {
    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    /// Node indices (first, last) of the unknowns.
    pub fn unknown_range(&self) -> (usize, usize) {
        (self.first, self.first + self.diag.len() - 1)
    }

    pub fn num_unknowns(&self) -> usize {
        self.diag.len()
    }

    /// True when the matrix has positive diagonal, nonpositive off-diagonals,
    /// and nonnegative row sums (including eliminated boundary couplings).
    pub fn is_m_matrix(&self) -> bool {
        let m = self.diag.len();
        for k in 0..m {
            if self.diag[k] <= 0.0 {
                return false;
            }
            let lo = if k > 0 {
                self.sub[k - 1]
            } else {
                self.left_coupling
            };
            let up = if k < m - 1 {
                self.sup[k]
            } else {
                self.right_coupling
            };
            if lo > 0.0 || up > 0.0 {
                return false;
            }
            if self.diag[k] + lo + up < -1e-9 * self.diag[k] {
                return false;
            }
        }
        true
    }

    /// Apply the full stencil at every unknown row, reading neighbor values
    /// (including eliminated boundary nodes) from `values`.
    pub fn apply_rows(&self, values: &[f64]) -> Vec<f64> {
        let m = self.diag.len();
        let mut out = vec![0.0; m];
        for k in 0..m {
            let i = self.first + k;
            let mut acc = self.diag[k] * values[i];
            if k > 0 {
                acc += self.sub[k - 1] * values[i - 1];
            } else if i > 0 {
                acc += self.left_coupling * values[i - 1];
            }
            if k < m - 1 {
                acc += self.sup[k] * values[i + 1];
            } else if i + 1 < values.len() {
                acc += self.right_coupling * values[i + 1];
            }
            out[k] = acc;
        }
        out
    }

    /// Stencil application embedded in the full grid; rows that are not
    /// unknowns (eliminated Dirichlet boundary nodes) report 0.
    pub fn apply(&self, u: &GridFunction) -> Result<GridFunction> {
        if !u.mesh().compatible(&self.mesh) {
            return Err(Error::InvalidParameter(
                "operator and argument live on different meshes".into(),
            ));
        }
        let rows = self.apply_rows(u.values());
        let mut full = vec![0.0; self.mesh.n() + 1];
        full[self.first..self.first + rows.len()].copy_from_slice(&rows);
        GridFunction::new(self.mesh.clone(), full)
    }

    fn is_pure_neumann_unshifted(&self) -> bool {
        self.bc == BoundaryCondition::Neumann && self.shift.iter().all(|&m| m == 0.0)
    }

    /// Left null vector of the matrix transpose, by forward recurrence.
    /// Only meaningful for the singular pure-Neumann case.
    fn left_null_vector(&self) -> Vec<f64> {
        let m = self.diag.len();
        let mut w = vec![0.0; m];
        w[0] = 1.0;
        if m > 1 {
            w[1] = -self.diag[0] * w[0] / self.sub[0];
            for j in 1..m - 1 {
                w[j + 1] = -(self.sup[j - 1] * w[j - 1] + self.diag[j] * w[j]) / self.sub[j];
            }
        }
        w
    }
}

/// Solve op u = rhs with homogeneous boundary data.
pub fn solve(op: &TridiagonalOperator, rhs: &GridFunction) -> Result<GridFunction> {
    solve_with_boundary(op, rhs, 0.0, 0.0)
}

/// Solve op u = rhs with prescribed Dirichlet boundary values. The boundary
/// values are ignored at Neumann endpoints (where the node is an unknown).
pub fn solve_with_boundary(
    op: &TridiagonalOperator,
    rhs: &GridFunction,
    left_value: f64,
    right_value: f64,
) -> Result<GridFunction> {
    if !rhs.mesh().compatible(&op.mesh) {
        return Err(Error::InvalidParameter(
            "rhs sampled on an incompatible mesh".into(),
        ));
    }
    let n = op.mesh.n();
    let m = op.diag.len();
    let (first, last) = op.unknown_range();
    let mut b: Vec<f64> = rhs.values()[first..=last].to_vec();
    if first > 0 {
        b[0] -= op.left_coupling * left_value;
    }
    if last < n {
        b[m - 1] -= op.right_coupling * right_value;
    }

    let x = if op.is_pure_neumann_unshifted() {
        solve_singular_neumann(op, rhs, &mut b)?
    } else {
        let mut x = thomas(&op.sub, &op.diag, &op.sup, &b)?;
        refine_once(op, &b, &mut x)?;
        x
    };

    let mut full = vec![0.0; n + 1];
    if first > 0 {
        full[0] = left_value;
    }
    if last < n {
        full[n] = right_value;
    }
    full[first..=last].copy_from_slice(&x);
    GridFunction::new(op.mesh.clone(), full)
}

/// Pure Neumann with M == 0 is singular with constant null space. The rhs
/// must integrate to zero; the equation-space defect is then projected out
/// exactly and the solution pinned to 0 at the last node.
fn solve_singular_neumann(
    op: &TridiagonalOperator,
    rhs: &GridFunction,
    b: &mut [f64],
) -> Result<Vec<f64>> {
    let total = integrate(rhs);
    let scale = (1.0 + rhs.sup_norm()) * op.mesh.geometry().width();
    if total.abs() > 1e-8 * scale {
        return Err(Error::SingularOperator(format!(
            "pure Neumann operator with zero shift needs a compatible rhs; \
             integral = {total:.3e}"
        )));
    }
    let w = op.left_null_vector();
    let defect: f64 = w.iter().zip(b.iter()).map(|(wi, bi)| wi * bi).sum();
    let wtw: f64 = w.iter().map(|wi| wi * wi).sum();
    for (bi, wi) in b.iter_mut().zip(&w) {
        *bi -= defect / wtw * wi;
    }
    let m = b.len();
    // Pin the last unknown to zero and solve the leading (m-1) x (m-1) block.
    let mut x = thomas(
        &op.sub[..m - 2],
        &op.diag[..m - 1],
        &op.sup[..m - 2],
        &b[..m - 1],
    )?;
    x.push(0.0);
    Ok(x)
}

/// One pass of iterative refinement; keeps the residual near machine level
/// on fine meshes.
fn refine_once(op: &TridiagonalOperator, b: &[f64], x: &mut [f64]) -> Result<()> {
    let m = x.len();
    let mut r = vec![0.0; m];
    for k in 0..m {
        let mut acc = b[k] - op.diag[k] * x[k];
        if k > 0 {
            acc -= op.sub[k - 1] * x[k - 1];
        }
        if k < m - 1 {
            acc -= op.sup[k] * x[k + 1];
        }
        r[k] = acc;
    }
    let bnorm = b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let rnorm = r.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if rnorm > 1e-13 * (1.0 + bnorm) {
        let dx = thomas(&op.sub, &op.diag, &op.sup, &r)?;
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += di;
        }
    }
    Ok(())
}

/// Thomas elimination for a tridiagonal system; fails on vanishing pivots.
fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let m = diag.len();
    debug_assert_eq!(sub.len() + 1, m);
    debug_assert_eq!(sup.len() + 1, m);
    debug_assert_eq!(rhs.len(), m);
    let mut c = vec![0.0; m];
    let mut d = vec![0.0; m];
    let mut piv = diag[0];
    let row_scale = diag[0].abs() + if m > 1 { sup[0].abs() } else { 0.0 };
    if piv.abs() <= 1e-14 * (1.0 + row_scale) {
        return Err(Error::SingularOperator("zero pivot in row 0".into()));
    }
    c[0] = if m > 1 { sup[0] / piv } else { 0.0 };
    d[0] = rhs[0] / piv;
    for k in 1..m {
        piv = diag[k] - sub[k - 1] * c[k - 1];
        let row_scale = diag[k].abs() + sub[k - 1].abs() + if k < m - 1 { sup[k].abs() } else { 0.0 };
        if piv.abs() <= 1e-14 * (1.0 + row_scale) {
            return Err(Error::SingularOperator(format!("zero pivot in row {k}")));
        }
        if k < m - 1 {
            c[k] = sup[k] / piv;
        }
        d[k] = (rhs[k] - sub[k - 1] * d[k - 1]) / piv;
    }
    let mut x = d;
    for k in (0..m - 1).rev() {
        x[k] -= c[k] * x[k + 1];
    }
    Ok(x)
}

/// Solve the two auxiliary Dirichlet problems used by the sub/supersolution
/// construction: -Delta phi = a or -Delta psi = a_plus on an interval.
pub fn solve_linear_special(
    kind: SpecialProblem,
    a: &Weight,
    mesh: &Arc<Mesh>,
) -> Result<GridFunction> {
    if mesh.geometry().is_radial() {
        return Err(Error::InvalidParameter(
            "special linear problems are posed on interval geometries".into(),
        ));
    }
    let rhs = match kind {
        SpecialProblem::PhiOfA => a.sample(mesh)?,
        SpecialProblem::PsiOfAPlus => split(a, mesh)?.aplus,
    };
    let zero = GridFunction::zeros(mesh.clone());
    let op = assemble(mesh, BoundaryCondition::Dirichlet, &zero)?;
    solve(&op, &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_mesh;
    use std::f64::consts::PI;

    fn mesh_on(left: f64, right: f64, n: usize) -> Arc<Mesh> {
        Arc::new(build_mesh(Geometry::interval(left, right).unwrap(), n).unwrap())
    }

    fn radial_mesh(dim: u32, radius: f64, n: usize) -> Arc<Mesh> {
        Arc::new(build_mesh(Geometry::radial(dim, radius).unwrap(), n).unwrap())
    }

    fn dirichlet_zero(mesh: &Arc<Mesh>) -> TridiagonalOperator {
        let zero = GridFunction::zeros(mesh.clone());
        assemble(mesh, BoundaryCondition::Dirichlet, &zero).unwrap()
    }

    #[test]
    fn dirichlet_rows_frozen() {
        // h = 1/8: diagonal 2/h^2 = 128, off-diagonals -64.
        let mesh = mesh_on(0.0, 1.0, 8);
        let op = dirichlet_zero(&mesh);
        assert_eq!(op.num_unknowns(), 7);
        assert!(op.diag.iter().all(|&d| (d - 128.0).abs() < 1e-9));
        assert!(op.sub.iter().all(|&s| (s + 64.0).abs() < 1e-9));
        assert!(op.sup.iter().all(|&s| (s + 64.0).abs() < 1e-9));
        assert!(op.is_m_matrix());
    }

    #[test]
    fn assemble_rejects_negative_shift() {
        let mesh = mesh_on(0.0, 1.0, 8);
        let mut vals = vec![0.0; 9];
        vals[4] = -1.0;
        let shift = GridFunction::new(mesh.clone(), vals).unwrap();
        assert!(assemble(&mesh, BoundaryCondition::Dirichlet, &shift).is_err());
    }

    #[test]
    fn neumann_annihilates_constants() {
        let mesh = mesh_on(0.0, PI, 32);
        let zero = GridFunction::zeros(mesh.clone());
        let op = assemble(&mesh, BoundaryCondition::Neumann, &zero).unwrap();
        assert_eq!(op.num_unknowns(), 33);
        let ones = vec![1.0; 33];
        let rows = op.apply_rows(&ones);
        assert!(rows.iter().all(|&r| r.abs() < 1e-9));
    }

    #[test]
    fn interior_truncation_is_second_order() {
        // Applying -Delta_h to sin and comparing with sin itself.
        let err_at = |n: usize| -> f64 {
            let mesh = mesh_on(0.0, PI, n);
            let op = dirichlet_zero(&mesh);
            let u = GridFunction::from_fn(mesh.clone(), |x| x.sin()).unwrap();
            let rows = op.apply_rows(u.values());
            rows.iter()
                .enumerate()
                .fold(0.0f64, |m, (k, &r)| m.max((r - mesh.node(k + 1).sin()).abs()))
        };
        let e1 = err_at(100);
        let e2 = err_at(200);
        let ratio = e1 / e2;
        assert!(e1 < 1e-3);
        assert!((3.6..=4.4).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn poisson_quadratic_is_exact() {
        // -u'' = 1 on (0,1), u = x(1-x)/2; the scheme is exact on quadratics.
        let mesh = mesh_on(0.0, 1.0, 100);
        let op = dirichlet_zero(&mesh);
        let rhs = GridFunction::constant(mesh.clone(), 1.0).unwrap();
        let u = solve(&op, &rhs).unwrap();
        let exact = GridFunction::from_fn(mesh.clone(), |x| 0.5 * x * (1.0 - x)).unwrap();
        assert!(u.sup_distance(&exact) < 1e-12);
        let mid = u.values()[50];
        assert!((mid - 0.125).abs() < 1e-13);
    }

    #[test]
    fn poisson_sine_second_order() {
        let err_at = |n: usize| -> f64 {
            let mesh = mesh_on(0.0, PI, n);
            let op = dirichlet_zero(&mesh);
            let rhs = GridFunction::from_fn(mesh.clone(), |x| x.sin()).unwrap();
            let u = solve(&op, &rhs).unwrap();
            u.sup_distance(&rhs)
        };
        let e1 = err_at(100);
        let e2 = err_at(200);
        assert!(e1 < 2e-4);
        let ratio = e1 / e2;
        assert!((3.6..=4.4).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn solve_round_trip_recovers_input() {
        let mesh = mesh_on(0.0, 2.0, 64);
        let shift = GridFunction::from_fn(mesh.clone(), |x| 1.0 + x).unwrap();
        let op = assemble(&mesh, BoundaryCondition::Dirichlet, &shift).unwrap();
        // Deterministic pseudo-random interior values, zero at the boundary.
        let mut state = 0x2545f4914f6cdd1du64;
        let mut vals = vec![0.0; 65];
        for v in vals.iter_mut().take(64).skip(1) {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            *v = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
        }
        let v = GridFunction::new(mesh.clone(), vals).unwrap();
        let image = op.apply(&v).unwrap();
        let u = solve(&op, &image).unwrap();
        let rel = u.sup_distance(&v) / v.sup_norm();
        assert!(rel < 1e-10, "round trip error {rel}");
    }

    #[test]
    fn neumann_rejects_incompatible_rhs() {
        let mesh = mesh_on(0.0, PI, 64);
        let zero = GridFunction::zeros(mesh.clone());
        let op = assemble(&mesh, BoundaryCondition::Neumann, &zero).unwrap();
        let rhs = GridFunction::from_fn(mesh.clone(), |x| x.sin()).unwrap();
        assert!(matches!(
            solve(&op, &rhs),
            Err(Error::SingularOperator(_))
        ));
    }

    #[test]
    fn neumann_compatible_rhs_solves_up_to_constants() {
        // -u'' = cos on (0, pi) with u' = 0 at both ends; u = cos + C.
        let mesh = mesh_on(0.0, PI, 200);
        let zero = GridFunction::zeros(mesh.clone());
        let op = assemble(&mesh, BoundaryCondition::Neumann, &zero).unwrap();
        let rhs = GridFunction::from_fn(mesh.clone(), |x| x.cos()).unwrap();
        let u = solve(&op, &rhs).unwrap();
        // Pinned at the right end: the discrete answer tracks cos(x) + 1.
        let exact = GridFunction::from_fn(mesh.clone(), |x| x.cos() + 1.0).unwrap();
        assert!(u.sup_distance(&exact) < 5e-4);
    }

    #[test]
    fn neumann_shifted_manufactured_solution() {
        // (-Delta + 1) u = 2 cos x has the Neumann solution u = cos x.
        let mesh = mesh_on(0.0, PI, 400);
        let one = GridFunction::constant(mesh.clone(), 1.0).unwrap();
        let op = assemble(&mesh, BoundaryCondition::Neumann, &one).unwrap();
        let rhs = GridFunction::from_fn(mesh.clone(), |x| 2.0 * x.cos()).unwrap();
        let u = solve(&op, &rhs).unwrap();
        let exact = GridFunction::from_fn(mesh.clone(), |x| x.cos()).unwrap();
        assert!(u.sup_distance(&exact) < 5e-4);
    }

    #[test]
    fn radial_center_row_frozen() {
        // -Delta rho^2 = -2N; at the center the symmetry row gives it exactly.
        let mesh = radial_mesh(3, 1.0, 64);
        let zero = GridFunction::zeros(mesh.clone());
        let op = assemble(&mesh, BoundaryCondition::Dirichlet, &zero).unwrap();
        let u = GridFunction::from_fn(mesh.clone(), |r| r * r).unwrap();
        let rows = op.apply_rows(u.values());
        assert!((rows[0] + 6.0).abs() < 1e-9);
        // Interior rows are exact on quadratics as well.
        for (k, &row) in rows.iter().enumerate().take(op.num_unknowns()) {
            assert!((row + 6.0).abs() < 1e-8, "row {k}: {row}");
        }
    }

    #[test]
    fn radial_poisson_ball_exact_on_quadratics() {
        // -Delta u = 1 in the unit ball of R^3, u = (1 - rho^2)/6.
        let mesh = radial_mesh(3, 1.0, 128);
        let zero = GridFunction::zeros(mesh.clone());
        let op = assemble(&mesh, BoundaryCondition::Dirichlet, &zero).unwrap();
        let rhs = GridFunction::constant(mesh.clone(), 1.0).unwrap();
        let u = solve(&op, &rhs).unwrap();
        let exact = GridFunction::from_fn(mesh.clone(), |r| (1.0 - r * r) / 6.0).unwrap();
        assert!(u.sup_distance(&exact) < 1e-12);
    }

    #[test]
    fn radial_neumann_manufactured_solution() {
        // u = (1 - rho^2)^2 in the unit ball of R^3 has u'(0) = u'(1) = 0;
        // (-Delta + 1) u = 12 - 20 rho^2 + u.
        let mesh = radial_mesh(3, 1.0, 400);
        let one = GridFunction::constant(mesh.clone(), 1.0).unwrap();
        let op = assemble(&mesh, BoundaryCondition::Neumann, &one).unwrap();
        let exact = GridFunction::from_fn(mesh.clone(), |r| {
            let s = 1.0 - r * r;
            s * s
        })
        .unwrap();
        let rhs = GridFunction::from_fn(mesh.clone(), |r| {
            let s = 1.0 - r * r;
            12.0 - 20.0 * r * r + s * s
        })
        .unwrap();
        let u = solve(&op, &rhs).unwrap();
        assert!(u.sup_distance(&exact) < 2e-4, "err {}", u.sup_distance(&exact));
    }

    #[test]
    fn inhomogeneous_dirichlet_lifting() {
        // -u'' = 0 with u(0) = 1, u(1) = 3 gives the line 1 + 2x.
        let mesh = mesh_on(0.0, 1.0, 32);
        let op = dirichlet_zero(&mesh);
        let rhs = GridFunction::zeros(mesh.clone());
        let u = solve_with_boundary(&op, &rhs, 1.0, 3.0).unwrap();
        let exact = GridFunction::from_fn(mesh.clone(), |x| 1.0 + 2.0 * x).unwrap();
        assert!(u.sup_distance(&exact) < 1e-12);
    }

    #[test]
    fn special_problems_on_interval() {
        // -Delta phi = 1 on (0,1) gives phi = x(1-x)/2 with max 1/8.
        let mesh = mesh_on(0.0, 1.0, 64);
        let phi = solve_linear_special(SpecialProblem::PhiOfA, &Weight::constant(1.0), &mesh)
            .unwrap();
        assert!((phi.sup_norm() - 0.125).abs() < 1e-12);

        // psi of a_plus is strictly positive inside whenever a_plus != 0.
        let (a, _) = crate::coeffs::pex_pair(0.5).unwrap();
        let mesh_pi = mesh_on(0.0, PI, 256);
        let psi =
            solve_linear_special(SpecialProblem::PsiOfAPlus, &a, &mesh_pi).unwrap();
        assert!(psi.min_interior() > 0.0);
        assert_eq!(psi.values()[0], 0.0);

        let rmesh = radial_mesh(2, 1.0, 64);
        assert!(solve_linear_special(SpecialProblem::PhiOfA, &Weight::constant(1.0), &rmesh)
            .is_err());
    }

    #[test]
    fn thomas_detects_singular_matrix() {
        let mesh = mesh_on(0.0, 1.0, 8);
        let op = dirichlet_zero(&mesh);
        let mut broken = op.clone();
        broken.diag[3] = broken.sub[2] * broken.sup[2] / broken.diag[2] * 0.0;
        // A hard zero pivot cannot be eliminated.
        broken.diag = vec![0.0; broken.diag.len()];
        let rhs = GridFunction::constant(mesh, 1.0).unwrap();
        assert!(solve(&broken, &rhs).is_err());
    }
}
