//! Phase-space machinery built on the overcomplete coherent family.
//!
//! The chart `alpha(x, p) = x / (sqrt2 lambda) + i lambda p / (sqrt2 hbar)`
//! identifies the complex plane with phase space; under it the area
//! elements relate by `d^2alpha = dx dp / (2 hbar)`, and every mass
//! computed here carries that factor.
//!
//! The Husimi distribution is `rho_H(x, p) = |<psi_alpha(x,p), Psi>|^2 / pi`:
//! nonnegative by construction, bounded by `1/pi`, and with marginals
//! broadened by the coherent widths — it is a smoothed phase-space picture,
//! not a joint probability. The same overlaps integrated over the disk
//! resolve the identity, reconstruct number states from Gaussians, and
//! evaluate expectations of functions of the lowering operator two ways.
//!
//! Map nodes and quadrature rings are evaluated independently (in parallel
//! under the `parallel` feature) and reduced in fixed order, so results do
//! not depend on the thread schedule.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::constants::PhysicalConstants;
use crate::error::{KitError, Result};
use crate::grid::{apply_operator, inner_product, moments, Grid, Operator, WaveFunction};
use crate::parallel::map_indexed;
use crate::quadrature::Quadrature;
use crate::states::{coherent_closed_form_relaxed, hermite_family, CoherentLabel};
use crate::sums::{pairwise_dot_conj, pairwise_f64};

/// Rectangular (x, p) lattice with the physical constants that fix its
/// alpha chart.
#[derive(Debug, Clone)]
pub struct PhaseSpaceLattice {
    x_axis: Vec<f64>,
    p_axis: Vec<f64>,
    constants: PhysicalConstants,
}

impl PhaseSpaceLattice {
    pub fn new(x_axis: Vec<f64>, p_axis: Vec<f64>, constants: PhysicalConstants) -> Result<Self> {
        for (name, axis) in [("x", &x_axis), ("p", &p_axis)] {
            if axis.len() < 2 {
                return Err(KitError::LatticeAxis(format!(
                    "{name} axis needs at least 2 nodes"
                )));
            }
            let step = axis[1] - axis[0];
            if step <= 0.0 || step.is_nan() {
                return Err(KitError::LatticeAxis(format!(
                    "{name} axis must be strictly increasing"
                )));
            }
            for w in axis.windows(2) {
                if ((w[1] - w[0]) - step).abs() > 1e-9 * step.abs() {
                    return Err(KitError::LatticeAxis(format!("{name} axis is not uniform")));
                }
            }
        }
        Ok(Self {
            x_axis,
            p_axis,
            constants,
        })
    }

    /// Lattice of `n_x` by `n_p` nodes covering five Husimi widths around
    /// the centroid of `report`, with a node exactly on the centroid.
    pub fn around(
        report: &crate::grid::MomentReport,
        constants: &PhysicalConstants,
        n_x: usize,
        n_p: usize,
    ) -> Result<Self> {
        let sx = husimi_sigma_x(report, constants);
        let sp = husimi_sigma_p(report, constants);
        let make_axis = |center: f64, sigma: f64, n: usize| -> Vec<f64> {
            let h = 10.0 * sigma / n as f64;
            (0..n)
                .map(|i| center + (i as isize - (n / 2) as isize) as f64 * h)
                .collect()
        };
        Self::new(
            make_axis(report.mean_x, sx, n_x),
            make_axis(report.mean_p, sp, n_p),
            *constants,
        )
    }

    pub fn x_axis(&self) -> &[f64] {
        &self.x_axis
    }

    pub fn p_axis(&self) -> &[f64] {
        &self.p_axis
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    pub fn dx(&self) -> f64 {
        self.x_axis[1] - self.x_axis[0]
    }

    pub fn dp(&self) -> f64 {
        self.p_axis[1] - self.p_axis[0]
    }

    /// Chart value at node `(ix, ip)`.
    pub fn alpha_at(&self, ix: usize, ip: usize) -> C64 {
        crate::states::alpha_from_moments(self.x_axis[ix], self.p_axis[ip], &self.constants)
    }

    /// Phase-space measure of one cell, `dx dp / (2 hbar)`; equals the
    /// alpha-plane area of the cell image under the chart.
    pub fn cell_measure(&self) -> f64 {
        self.dx() * self.dp() / (2.0 * self.constants.hbar)
    }

    /// Alpha-plane area of one cell image, for the measure invariant.
    pub fn cell_alpha_area(&self) -> f64 {
        let da_re = self.dx() / (std::f64::consts::SQRT_2 * self.constants.lambda);
        let da_im =
            self.constants.lambda * self.dp() / (std::f64::consts::SQRT_2 * self.constants.hbar);
        da_re * da_im
    }
}

/// Husimi width of the position marginal: state width convolved with the
/// coherent sampling width.
fn husimi_sigma_x(report: &crate::grid::MomentReport, c: &PhysicalConstants) -> f64 {
    (report.delta_x * report.delta_x + c.lambda * c.lambda / 2.0).sqrt()
}

fn husimi_sigma_p(report: &crate::grid::MomentReport, c: &PhysicalConstants) -> f64 {
    (report.delta_p * report.delta_p + c.hbar * c.hbar / (2.0 * c.lambda * c.lambda)).sqrt()
}

/// Husimi density sampled on a phase-space lattice. Values are stored
/// row-major over x: `value(ix, ip) = values[ix * n_p + ip]`.
#[derive(Debug, Clone)]
pub struct HusimiMap {
    lattice: PhaseSpaceLattice,
    values: Vec<f64>,
    coverage_warning: bool,
}

impl HusimiMap {
    pub fn lattice(&self) -> &PhaseSpaceLattice {
        &self.lattice
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, ix: usize, ip: usize) -> f64 {
        self.values[ix * self.lattice.p_axis.len() + ip]
    }

    /// Set when the lattice does not cover the state out to five widths;
    /// masses computed from such a map will fall visibly short.
    pub fn coverage_warning(&self) -> bool {
        self.coverage_warning
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0f64, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Total mass `sum rho dx dp`; equals `2 hbar` for a normalized state
    /// on a covering lattice.
    pub fn total_mass(&self) -> f64 {
        pairwise_f64(&self.values, &|&v| v) * self.lattice.dx() * self.lattice.dp()
    }
}

fn node_state(
    grid: &Arc<Grid>,
    x: f64,
    p: f64,
    constants: &PhysicalConstants,
) -> Result<WaveFunction> {
    let label = CoherentLabel::from_center(x, p, constants)?;
    coherent_closed_form_relaxed(grid, &label, constants).map_err(|e| {
        KitError::QuadratureSize(format!(
            "sampling state at (x = {x:.3}, p = {p:.3}) does not fit the grid: {e}"
        ))
    })
}

/// Husimi distribution of `state` over `lattice`:
/// `rho_H(x, p) = |<psi_alpha(x,p), state>|^2 / pi` at every node.
pub fn husimi(state: &WaveFunction, lattice: &PhaseSpaceLattice) -> Result<HusimiMap> {
    let c = lattice.constants;
    let report = moments(state, &c)?;

    let sx = husimi_sigma_x(&report, &c);
    let sp = husimi_sigma_p(&report, &c);
    let coverage_warning = lattice.x_axis[0] > report.mean_x - 4.5 * sx
        || *lattice.x_axis.last().unwrap() < report.mean_x + 4.5 * sx
        || lattice.p_axis[0] > report.mean_p - 4.5 * sp
        || *lattice.p_axis.last().unwrap() < report.mean_p + 4.5 * sp;

    let grid = state.grid();
    let n_p = lattice.p_axis.len();
    let rows: Vec<Result<Vec<f64>>> = map_indexed(lattice.x_axis.len(), |ix| {
        let x = lattice.x_axis[ix];
        let mut row = Vec::with_capacity(n_p);
        for &p in &lattice.p_axis {
            let probe = node_state(grid, x, p, &c)?;
            let overlap = inner_product(&probe, state)?;
            row.push(overlap.norm_sqr() / PI);
        }
        Ok(row)
    });

    let mut values = Vec::with_capacity(lattice.x_axis.len() * n_p);
    for row in rows {
        values.extend(row?);
    }
    Ok(HusimiMap {
        lattice: lattice.clone(),
        values,
        coverage_warning,
    })
}

/// Integrate the map over p (respectively x) with the trapezoid rule and
/// the `1/(2 hbar)` measure, so each marginal density integrates to one
/// for a normalized state on a covering lattice.
pub fn husimi_marginals(map: &HusimiMap) -> (Vec<f64>, Vec<f64>) {
    let n_x = map.lattice.x_axis.len();
    let n_p = map.lattice.p_axis.len();
    let two_hbar = 2.0 * map.lattice.constants.hbar;
    let trap = |k: usize, n: usize| if k == 0 || k == n - 1 { 0.5 } else { 1.0 };

    let mx: Vec<f64> = (0..n_x)
        .map(|ix| {
            let row: Vec<f64> = (0..n_p)
                .map(|ip| map.value(ix, ip) * trap(ip, n_p))
                .collect();
            pairwise_f64(&row, &|&v| v) * map.lattice.dp() / two_hbar
        })
        .collect();
    let mp: Vec<f64> = (0..n_p)
        .map(|ip| {
            let col: Vec<f64> = (0..n_x)
                .map(|ix| map.value(ix, ip) * trap(ix, n_x))
                .collect();
            pairwise_f64(&col, &|&v| v) * map.lattice.dx() / two_hbar
        })
        .collect();
    (mx, mp)
}

/// Trapezoid mass, mean, and variance of a sampled density.
pub fn marginal_stats(axis: &[f64], density: &[f64]) -> (f64, f64, f64) {
    let n = axis.len();
    let h = axis[1] - axis[0];
    let trap = |k: usize| if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
    let mass = pairwise_f64(
        &(0..n).map(|k| density[k] * trap(k)).collect::<Vec<_>>(),
        &|&v| v,
    ) * h;
    let mean = pairwise_f64(
        &(0..n)
            .map(|k| axis[k] * density[k] * trap(k))
            .collect::<Vec<_>>(),
        &|&v| v,
    ) * h
        / mass;
    let var = pairwise_f64(
        &(0..n)
            .map(|k| (axis[k] - mean).powi(2) * density[k] * trap(k))
            .collect::<Vec<_>>(),
        &|&v| v,
    ) * h
        / mass;
    (mass, mean, var)
}

fn check_probe_size(dim_probe: usize, quad: &Quadrature) -> Result<()> {
    if dim_probe == 0 {
        return Err(KitError::QuadratureSize(
            "probe dimension must be positive".into(),
        ));
    }
    let r_needed = (dim_probe as f64).sqrt() + 4.0;
    if quad.radius() < r_needed {
        return Err(KitError::QuadratureSize(format!(
            "radius {} too small for probe dimension {dim_probe}; need at least {r_needed:.1}",
            quad.radius()
        )));
    }
    let t_needed = 4 * dim_probe;
    if quad.n_theta() < t_needed {
        return Err(KitError::QuadratureSize(format!(
            "{} angular nodes too few for probe dimension {dim_probe}; need at least {t_needed}",
            quad.n_theta()
        )));
    }
    Ok(())
}

/// Assemble `integral of psi_alpha <psi_alpha, .> d^2alpha / pi` on the
/// span of the first `dim_probe` number states, with every coherent state
/// built on the grid, and return the largest entrywise deviation from the
/// identity matrix.
pub fn completeness_residual(
    dim_probe: usize,
    quad: &Quadrature,
    grid: &Arc<Grid>,
    constants: &PhysicalConstants,
) -> Result<f64> {
    check_probe_size(dim_probe, quad)?;
    let family = hermite_family(grid, dim_probe - 1, constants)?;
    let chi: Vec<Vec<C64>> = family
        .iter()
        .map(|col| col.iter().map(|&v| C64::new(v, 0.0)).collect())
        .collect();
    let dx = grid.dx();

    let partials: Vec<Result<DMatrix<C64>>> = map_indexed(quad.n_radial(), |ri| {
        let (_, w) = quad.ring(ri);
        let mut ring = DMatrix::<C64>::zeros(dim_probe, dim_probe);
        for t in 0..quad.n_theta() {
            let alpha = quad.alpha(ri, t);
            let (x, p) = crate::states::center_from_alpha(alpha, constants);
            let psi = node_state(grid, x, p, constants)?;
            let coeffs: Vec<C64> = chi
                .iter()
                .map(|col| pairwise_dot_conj(col, psi.samples()) * dx)
                .collect();
            for n in 0..dim_probe {
                for m in 0..dim_probe {
                    ring[(n, m)] += coeffs[n] * coeffs[m].conj();
                }
            }
        }
        Ok(ring * C64::new(w, 0.0))
    });

    let mut total = DMatrix::<C64>::zeros(dim_probe, dim_probe);
    for p in partials {
        total += p?;
    }
    total /= C64::new(PI, 0.0);

    let mut worst: f64 = 0.0;
    for n in 0..dim_probe {
        for m in 0..dim_probe {
            let expect = if n == m { 1.0 } else { 0.0 };
            worst = worst.max((total[(n, m)] - C64::new(expect, 0.0)).norm());
        }
    }
    Ok(worst)
}

/// The bare alpha-plane moment integrals
/// `integral of alpha^n conj(alpha)^m exp(-|alpha|^2) d^2alpha`
/// evaluated with the quadrature (no grid involved). In exact arithmetic
/// over the full plane these are `pi n! delta_nm`.
pub fn gaussian_moment_matrix(dim_probe: usize, quad: &Quadrature) -> DMatrix<C64> {
    let mut out = DMatrix::<C64>::zeros(dim_probe, dim_probe);
    for ri in 0..quad.n_radial() {
        let (r, w) = quad.ring(ri);
        let gauss = (-r * r).exp();
        for t in 0..quad.n_theta() {
            let theta = quad.theta(t);
            for n in 0..dim_probe {
                for m in 0..dim_probe {
                    let mag = r.powi((n + m) as i32) * gauss * w;
                    out[(n, m)] += C64::from_polar(mag, (n as f64 - m as f64) * theta);
                }
            }
        }
    }
    out
}

/// Largest relative deviation of the moment integrals from
/// `pi n! delta_nm`, normalized per entry by `pi sqrt(n! m!)`.
pub fn moment_integral_residual(dim_probe: usize, quad: &Quadrature) -> Result<f64> {
    check_probe_size(dim_probe, quad)?;
    let mat = gaussian_moment_matrix(dim_probe, quad);
    let mut fact = vec![1.0f64; dim_probe];
    for n in 1..dim_probe {
        fact[n] = fact[n - 1] * n as f64;
    }
    let mut worst: f64 = 0.0;
    for n in 0..dim_probe {
        for m in 0..dim_probe {
            let expect = if n == m { PI * fact[n] } else { 0.0 };
            let scale = PI * (fact[n] * fact[m]).sqrt();
            worst = worst.max((mat[(n, m)] - C64::new(expect, 0.0)).norm() / scale);
        }
    }
    Ok(worst)
}

/// Largest polynomial degree the expectation quadrature is guaranteed for.
pub const MAX_POLY_DEGREE: usize = 8;

/// Expectation of a polynomial `F(A)` two independent ways: the
/// phase-space integral `integral F(alpha) |<psi_alpha, state>|^2 / pi`
/// and the direct matrix element `<state, F(A) state>` via repeated
/// operator application. Returns `(phase_space, direct)`.
pub fn expectation_of_a_function(
    state: &WaveFunction,
    poly_coeffs: &[C64],
    quad: &Quadrature,
    constants: &PhysicalConstants,
) -> Result<(C64, C64)> {
    let degree = poly_coeffs.len().saturating_sub(1);
    if degree > MAX_POLY_DEGREE {
        return Err(KitError::PolynomialDegree {
            degree,
            max: MAX_POLY_DEGREE,
        });
    }
    let deviation = (state.norm() - 1.0).abs();
    if deviation > crate::grid::NORM_TOL {
        return Err(KitError::NotNormalized { deviation });
    }

    let grid = state.grid();
    let eval = |alpha: C64| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &c in poly_coeffs.iter().rev() {
            acc = acc * alpha + c;
        }
        acc
    };

    let partials: Vec<Result<C64>> = map_indexed(quad.n_radial(), |ri| {
        let (_, w) = quad.ring(ri);
        let mut ring = C64::new(0.0, 0.0);
        for t in 0..quad.n_theta() {
            let alpha = quad.alpha(ri, t);
            let (x, p) = crate::states::center_from_alpha(alpha, constants);
            let probe = node_state(grid, x, p, constants)?;
            let overlap = inner_product(&probe, state)?;
            ring += eval(alpha) * overlap.norm_sqr();
        }
        Ok(ring * w)
    });
    let mut phase_space = C64::new(0.0, 0.0);
    for p in partials {
        phase_space += p?;
    }
    phase_space /= PI;

    let mut direct = C64::new(0.0, 0.0);
    let mut power = state.clone();
    for (k, &c) in poly_coeffs.iter().enumerate() {
        if k > 0 {
            power = apply_operator(&power, Operator::A, constants);
        }
        direct += c * inner_product(state, &power)?;
    }
    Ok((phase_space, direct))
}

/// Reconstruct the n-th number state from coherent states alone:
/// `chi_n = integral of conj(alpha)^n / sqrt(n!) exp(-|alpha|^2/2)
/// psi_alpha d^2alpha / pi`, every `psi_alpha` from the Gaussian closed
/// form. The quadrature must satisfy the completeness sizing rules for
/// `dim_probe = n + 1`; the index is capped at 12, past which the
/// reconstruction needs a larger disk than the sizing rule provides.
///
/// The uniform angular rule aliases the component of index `n + n_theta`
/// into the result; its weight falls super-exponentially with the angular
/// count, and at the default 64 angles it sits below 1e-8 for `n <= 5`.
pub fn reconstruct_number_state(
    n: usize,
    quad: &Quadrature,
    grid: &Arc<Grid>,
    constants: &PhysicalConstants,
) -> Result<WaveFunction> {
    if n > 12 {
        return Err(KitError::NumberIndex {
            n,
            limit: 12,
            detail: "reconstruction quadrature guarantee".into(),
        });
    }
    check_probe_size(n + 1, quad)?;
    let sqrt_fact: f64 = (1..=n).map(|k| k as f64).product::<f64>().sqrt();
    let n_points = grid.n_points();

    let partials: Vec<Result<Vec<C64>>> = map_indexed(quad.n_radial(), |ri| {
        let (r, w) = quad.ring(ri);
        let gauss_half = (-r * r / 2.0).exp();
        let mut ring = vec![C64::new(0.0, 0.0); n_points];
        for t in 0..quad.n_theta() {
            let alpha = quad.alpha(ri, t);
            let (x, p) = crate::states::center_from_alpha(alpha, constants);
            let psi = node_state(grid, x, p, constants)?;
            let coef = alpha.conj().powu(n as u32) / sqrt_fact * gauss_half;
            for (acc, s) in ring.iter_mut().zip(psi.samples()) {
                *acc += coef * s;
            }
        }
        Ok(ring.into_iter().map(|v| v * w).collect())
    });

    let mut samples = vec![C64::new(0.0, 0.0); n_points];
    for p in partials {
        for (acc, v) in samples.iter_mut().zip(p?) {
            *acc += v;
        }
    }
    let inv_pi = 1.0 / PI;
    for v in samples.iter_mut() {
        *v *= inv_pi;
    }
    WaveFunction::from_samples(Arc::clone(grid), samples)
}
