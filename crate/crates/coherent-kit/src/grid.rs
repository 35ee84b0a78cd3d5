//! Discretized position-space Hilbert space.
//!
//! A [`Grid`] is a uniform lattice of `n` points (power of two) on
//! `[x_min, x_max)` together with the induced spectral momentum lattice.
//! Wave functions are complex sample vectors on a grid; the momentum
//! operator acts spectrally (forward FFT, multiply by the momentum lattice,
//! inverse FFT), which keeps `[X, P] = i hbar` at machine precision for
//! states whose amplitude is negligible at the grid edges. The spectral
//! method imposes periodic boundaries, so containment is the caller's side
//! of the contract: operations flag, rather than reject, states with edge
//! amplitude above [`EDGE_AMPLITUDE_TOL`].

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::constants::PhysicalConstants;
use crate::error::{KitError, Result};
use crate::sums::{pairwise_dot_conj, pairwise_f64};

/// Relative edge amplitude above which a state is flagged as not contained.
pub const EDGE_AMPLITUDE_TOL: f64 = 1e-10;

/// Norm deviation tolerated by operations that require normalized input.
pub const NORM_TOL: f64 = 1e-6;

/// Uniform position lattice with its spectral momentum lattice and cached
/// FFT plans. Construct through [`Grid::new`]; share through `Arc`.
pub struct Grid {
    n_points: usize,
    x_min: f64,
    x_max: f64,
    dx: f64,
    positions: Vec<f64>,
    /// Angular wavenumbers in standard DFT order; momentum = hbar * k.
    wavenumbers: Vec<f64>,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
}

impl Grid {
    pub fn new(n_points: usize, x_min: f64, x_max: f64) -> Result<Arc<Self>> {
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(KitError::GridSize { n_points });
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(KitError::GridInterval { x_min, x_max });
        }
        let dx = (x_max - x_min) / n_points as f64;
        let positions = (0..n_points).map(|j| x_min + j as f64 * dx).collect();
        let dk = 2.0 * PI / (n_points as f64 * dx);
        let wavenumbers = (0..n_points)
            .map(|j| {
                let k = if j < n_points / 2 {
                    j as isize
                } else {
                    j as isize - n_points as isize
                };
                k as f64 * dk
            })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Arc::new(Self {
            n_points,
            x_min,
            x_max,
            dx,
            positions,
            wavenumbers,
            fft_fwd: planner.plan_fft_forward(n_points),
            fft_inv: planner.plan_fft_inverse(n_points),
        }))
    }

    /// Default desk-scale grid: 1024 points on [-20, 20].
    pub fn default_desk() -> Arc<Self> {
        Self::new(1024, -20.0, 20.0).expect("default grid parameters are valid")
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    /// Angular wavenumbers in DFT order (momentum divided by hbar).
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Spectral momentum lattice `hbar * k_j` in DFT order.
    pub fn momentum_lattice(&self, constants: &PhysicalConstants) -> Vec<f64> {
        self.wavenumbers
            .iter()
            .map(|k| constants.hbar * k)
            .collect()
    }

    /// Largest momentum magnitude representable on this grid.
    pub fn momentum_max(&self, constants: &PhysicalConstants) -> f64 {
        constants.hbar * PI / self.dx
    }

    /// Index of the grid point nearest to `x`, clamped to the lattice.
    pub fn nearest_index(&self, x: f64) -> usize {
        let raw = ((x - self.x_min) / self.dx).round();
        raw.clamp(0.0, (self.n_points - 1) as f64) as usize
    }

    /// Indices of the middle half of the lattice, where spectral identities
    /// are quoted (truncation artifacts concentrate near the edges).
    pub fn interior(&self) -> std::ops::Range<usize> {
        self.n_points / 4..3 * self.n_points / 4
    }

    fn same_lattice(&self, other: &Grid) -> bool {
        self.n_points == other.n_points && self.x_min == other.x_min && self.x_max == other.x_max
    }

    pub(crate) fn forward(&self, samples: &[C64]) -> Vec<C64> {
        let mut buf = samples.to_vec();
        self.fft_fwd.process(&mut buf);
        buf
    }

    pub(crate) fn inverse_inplace(&self, buf: &mut [C64]) {
        self.fft_inv.process(buf);
        let scale = 1.0 / self.n_points as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n_points", &self.n_points)
            .field("x_min", &self.x_min)
            .field("x_max", &self.x_max)
            .field("dx", &self.dx)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.same_lattice(other)
    }
}

/// The operators the grid knows how to apply spectrally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    /// Position: pointwise multiplication by `x`.
    X,
    /// Momentum: spectral multiplication by the momentum lattice.
    P,
    /// Lowering operator `A = X/(lambda sqrt2) + i lambda P/(hbar sqrt2)`.
    A,
    /// Raising operator, the adjoint of `A`.
    ADag,
    /// Free Hamiltonian `P^2 / 2m`.
    H,
}

/// Complex sample vector on a shared grid.
#[derive(Debug, Clone)]
pub struct WaveFunction {
    grid: Arc<Grid>,
    samples: Vec<C64>,
    edge_flagged: bool,
}

impl WaveFunction {
    pub fn from_samples(grid: Arc<Grid>, samples: Vec<C64>) -> Result<Self> {
        if samples.len() != grid.n_points() {
            return Err(KitError::GridMismatch);
        }
        let mut wf = Self {
            grid,
            samples,
            edge_flagged: false,
        };
        wf.edge_flagged = wf.edge_amplitude() >= EDGE_AMPLITUDE_TOL;
        Ok(wf)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    /// True when the construction or some operation saw edge amplitude
    /// above [`EDGE_AMPLITUDE_TOL`]; accuracy guarantees assume containment.
    pub fn edge_flagged(&self) -> bool {
        self.edge_flagged
    }

    /// Edge amplitude relative to the peak amplitude.
    pub fn edge_amplitude(&self) -> f64 {
        let peak = self.samples.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let n = self.samples.len();
        self.samples[0].norm().max(self.samples[n - 1].norm()) / peak
    }

    pub fn norm(&self) -> f64 {
        (pairwise_f64(&self.samples, &|z| z.norm_sqr()) * self.grid.dx()).sqrt()
    }

    /// Rescale so that `sum |psi_j|^2 dx = 1`.
    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(KitError::ZeroNorm);
        }
        let scale = 1.0 / n;
        for v in self.samples.iter_mut() {
            *v *= scale;
        }
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// Raw DFT of the samples (unnormalized, DFT index order). Pointwise
    /// moduli of this spectrum give the momentum distribution up to a
    /// constant factor.
    pub fn spectrum(&self) -> Vec<C64> {
        self.grid.forward(&self.samples)
    }

    /// Norm computed on the momentum lattice; equals [`Self::norm`] up to
    /// roundoff (Parseval).
    pub fn momentum_norm(&self) -> f64 {
        let spec = self.spectrum();
        let scale = self.grid.dx() / self.grid.n_points() as f64;
        (pairwise_f64(&spec, &|z| z.norm_sqr()) * scale).sqrt()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let samples = self.samples.iter().map(|z| z * factor).collect();
        Self {
            grid: Arc::clone(&self.grid),
            samples,
            edge_flagged: self.edge_flagged,
        }
    }

    /// Pointwise difference, for residual norms.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if !self.grid.same_lattice(&other.grid) {
            return Err(KitError::GridMismatch);
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            grid: Arc::clone(&self.grid),
            samples,
            edge_flagged: self.edge_flagged || other.edge_flagged,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.grid.same_lattice(&other.grid) {
            return Err(KitError::GridMismatch);
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            grid: Arc::clone(&self.grid),
            samples,
            edge_flagged: self.edge_flagged || other.edge_flagged,
        })
    }
}

/// Discretized inner product, conjugate-linear in the first argument:
/// `sum conj(f_j) g_j dx`, accumulated pairwise.
pub fn inner_product(f: &WaveFunction, g: &WaveFunction) -> Result<C64> {
    if !f.grid.same_lattice(&g.grid) {
        return Err(KitError::GridMismatch);
    }
    Ok(pairwise_dot_conj(&f.samples, &g.samples) * f.grid.dx())
}

/// Apply one of `{X, P, A, A†, H}` to `f`, returning a new wave function.
/// The input is unchanged; the result inherits an edge warning if the input
/// amplitude at the grid boundary is not negligible.
pub fn apply_operator(
    f: &WaveFunction,
    op: Operator,
    constants: &PhysicalConstants,
) -> WaveFunction {
    let grid = &f.grid;
    let samples = match op {
        Operator::X => mul_positions(f),
        Operator::P => mul_spectral(f, |hk| hk, constants),
        Operator::H => {
            let half_inv_mass = 0.5 / constants.mass;
            mul_spectral(f, |hk| hk * hk * half_inv_mass, constants)
        }
        Operator::A | Operator::ADag => {
            let c_x = 1.0 / (constants.lambda * SQRT_2);
            let c_p = constants.lambda / (constants.hbar * SQRT_2);
            let ip = match op {
                Operator::A => C64::new(0.0, c_p),
                _ => C64::new(0.0, -c_p),
            };
            let xf = mul_positions(f);
            let pf = mul_spectral(f, |hk| hk, constants);
            xf.iter().zip(&pf).map(|(x, p)| x * c_x + p * ip).collect()
        }
    };
    let edge_flagged = f.edge_flagged || f.edge_amplitude() >= EDGE_AMPLITUDE_TOL;
    WaveFunction {
        grid: Arc::clone(grid),
        samples,
        edge_flagged,
    }
}

fn mul_positions(f: &WaveFunction) -> Vec<C64> {
    f.samples
        .iter()
        .zip(f.grid.positions())
        .map(|(z, &x)| z * x)
        .collect()
}

fn mul_spectral<F>(f: &WaveFunction, weight: F, constants: &PhysicalConstants) -> Vec<C64>
where
    F: Fn(f64) -> f64,
{
    let mut spec = f.grid.forward(&f.samples);
    for (v, &k) in spec.iter_mut().zip(f.grid.wavenumbers()) {
        *v *= weight(constants.hbar * k);
    }
    f.grid.inverse_inplace(&mut spec);
    spec
}

/// First and second moments of position and momentum, with widths and the
/// symmetrized covariance `<XP + PX> - 2<X><P>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub mean_x: f64,
    pub mean_p: f64,
    pub mean_x2: f64,
    pub mean_p2: f64,
    pub delta_x: f64,
    pub delta_p: f64,
    pub sym_covariance: f64,
}

/// Extract all moments of a normalized state via inner products with the
/// spectrally applied operators.
pub fn moments(f: &WaveFunction, constants: &PhysicalConstants) -> Result<MomentReport> {
    let deviation = (f.norm() - 1.0).abs();
    if deviation > NORM_TOL {
        return Err(KitError::NotNormalized { deviation });
    }
    let xf = apply_operator(f, Operator::X, constants);
    let pf = apply_operator(f, Operator::P, constants);
    let mean_x = inner_product(f, &xf)?.re;
    let mean_p = inner_product(f, &pf)?.re;
    let mean_x2 = inner_product(&xf, &xf)?.re;
    let mean_p2 = inner_product(&pf, &pf)?.re;
    let sym_covariance = 2.0 * inner_product(&xf, &pf)?.re - 2.0 * mean_x * mean_p;
    Ok(MomentReport {
        mean_x,
        mean_p,
        mean_x2,
        mean_p2,
        delta_x: (mean_x2 - mean_x * mean_x).max(0.0).sqrt(),
        delta_p: (mean_p2 - mean_p * mean_p).max(0.0).sqrt(),
        sym_covariance,
    })
}

/// Best-case residual of the raising-operator eigenproblem,
/// `min over beta of ||(A† - beta) f||`, attained at `beta = <f, A† f>`.
///
/// The raising operator has no eigenvectors: the residual is bounded below
/// by 1 for every normalized state (it equals `sqrt(<A†A> + 1 - |<A>|^2)`),
/// and equals 1 exactly on coherent states. The input is normalized
/// internally; it must have nonzero norm.
pub fn adjoint_eigen_residual(f: &WaveFunction, constants: &PhysicalConstants) -> f64 {
    let n = f.norm();
    let g = apply_operator(f, Operator::ADag, constants);
    let g_sq = inner_product(&g, &g).expect("same grid").re / (n * n);
    let beta = inner_product(f, &g).expect("same grid") / (n * n);
    (g_sq - beta.norm_sqr()).max(0.0).sqrt()
}

/// Best-case residual of the lowering-operator eigenproblem,
/// `min over beta of ||(A - beta) f||`, attained at `beta = <f, A f>`.
///
/// The difference of expectation values floors out near
/// `sqrt(eps) |beta|`; when the candidate eigenvalue is known, prefer
/// [`eigen_relation_residual`], which has no such cancellation.
pub fn lowering_eigen_residual(f: &WaveFunction, constants: &PhysicalConstants) -> f64 {
    let n = f.norm();
    let g = apply_operator(f, Operator::A, constants);
    let g_sq = inner_product(&g, &g).expect("same grid").re / (n * n);
    let beta = inner_product(f, &g).expect("same grid") / (n * n);
    (g_sq - beta.norm_sqr()).max(0.0).sqrt()
}

/// Direct eigen-relation residual `||(A - alpha) f||` for a known `alpha`.
pub fn eigen_relation_residual(f: &WaveFunction, alpha: C64, constants: &PhysicalConstants) -> f64 {
    let g = apply_operator(f, Operator::A, constants);
    let dx = f.grid.dx();
    (pairwise_f64(
        &g.samples
            .iter()
            .zip(&f.samples)
            .map(|(a, s)| (a - s * alpha).norm_sqr())
            .collect::<Vec<_>>(),
        &|&v| v,
    ) * dx)
        .sqrt()
}

/// Relative deviation of `[A, A†] f` from `f` over the grid interior,
/// measured against the peak amplitude of `f`.
pub fn ladder_commutator_residual(f: &WaveFunction, constants: &PhysicalConstants) -> f64 {
    let a_f = apply_operator(f, Operator::A, constants);
    let adag_f = apply_operator(f, Operator::ADag, constants);
    let a_adag = apply_operator(&adag_f, Operator::A, constants);
    let adag_a = apply_operator(&a_f, Operator::ADag, constants);
    let peak = f.samples.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    f.grid
        .interior()
        .map(|j| (a_adag.samples[j] - adag_a.samples[j] - f.samples[j]).norm())
        .fold(0.0f64, f64::max)
        / peak
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constants() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    /// Bare Gaussian samples, independent of the state constructors.
    fn gaussian(grid: &Arc<Grid>, x0: f64, p0: f64, width_sq: f64) -> WaveFunction {
        let samples = grid
            .positions()
            .iter()
            .map(|&x| {
                let env = (-(x - x0) * (x - x0) / (4.0 * width_sq)).exp();
                C64::from_polar(env, p0 * x)
            })
            .collect();
        WaveFunction::from_samples(Arc::clone(grid), samples)
            .unwrap()
            .normalized()
            .unwrap()
    }

    #[test]
    fn grid_spacing_and_momentum_lattice() {
        let g = Grid::new(8, -1.0, 1.0).unwrap();
        assert_eq!(g.dx(), 0.25);
        // momentum spacing 2 pi hbar / (n dx) = pi hbar
        let c = PhysicalConstants::new(2.0, 1.0, 1.0).unwrap();
        let p = g.momentum_lattice(&c);
        assert!((p[1] - p[0] - 2.0 * PI).abs() < 1e-14);
        let c1 = constants();
        let p1 = g.momentum_lattice(&c1);
        assert!((p1[1] - PI).abs() < 1e-14);

        let g = Grid::new(1024, -20.0, 20.0).unwrap();
        assert_eq!(g.dx(), 0.0390625);
    }

    #[test]
    fn grid_rejects_bad_configuration() {
        assert!(matches!(
            Grid::new(6, -1.0, 1.0),
            Err(KitError::GridSize { n_points: 6 })
        ));
        assert!(Grid::new(4, -1.0, 1.0).is_err());
        assert!(Grid::new(9, -1.0, 1.0).is_err());
        assert!(Grid::new(16, 1.0, 1.0).is_err());
        assert!(Grid::new(16, 2.0, -2.0).is_err());
    }

    #[test]
    fn inner_product_of_normalized_state_is_one() {
        let grid = Grid::default_desk();
        let f = gaussian(&grid, 0.5, 0.0, 0.5);
        let ip = inner_product(&f, &f).unwrap();
        assert!((ip.re - 1.0).abs() < 1e-12);
        assert!(ip.im.abs() < 1e-14);
    }

    #[test]
    fn inner_product_conjugate_symmetry() {
        let grid = Grid::default_desk();
        let f = gaussian(&grid, 1.0, 2.0, 0.5);
        let g = gaussian(&grid, -0.5, -1.0, 0.7);
        let fg = inner_product(&f, &g).unwrap();
        let gf = inner_product(&g, &f).unwrap();
        assert!((fg - gf.conj()).norm() < 1e-14);
    }

    #[test]
    fn inner_product_rejects_grid_mismatch() {
        let g1 = Grid::default_desk();
        let g2 = Grid::new(512, -20.0, 20.0).unwrap();
        let f = gaussian(&g1, 0.0, 0.0, 0.5);
        let h = gaussian(&g2, 0.0, 0.0, 0.5);
        assert!(matches!(inner_product(&f, &h), Err(KitError::GridMismatch)));
    }

    #[test]
    fn parseval_holds_to_machine_precision() {
        let grid = Grid::default_desk();
        let f = gaussian(&grid, 1.0, 3.0, 0.5);
        assert!((f.norm() - f.momentum_norm()).abs() < 1e-12);
    }

    #[test]
    fn ladder_combination_reconstructs_position() {
        // X f = (lambda/sqrt2)(A + A†) f, exactly as floating point since
        // the spectral parts cancel by construction.
        let grid = Grid::default_desk();
        let c = PhysicalConstants::new(1.0, 1.0, 1.3).unwrap();
        let f = gaussian(&grid, 0.5, 1.0, c.lambda * c.lambda / 2.0);
        let xf = apply_operator(&f, Operator::X, &c);
        let af = apply_operator(&f, Operator::A, &c);
        let adf = apply_operator(&f, Operator::ADag, &c);
        let scale = c.lambda / SQRT_2;
        let max_dev = xf
            .samples()
            .iter()
            .zip(af.samples().iter().zip(adf.samples()))
            .map(|(x, (a, ad))| (x - (a + ad) * scale).norm())
            .fold(0.0f64, f64::max);
        assert!(max_dev < 1e-10, "max deviation {max_dev:.3e}");
    }

    #[test]
    fn ladder_commutator_is_identity_on_interior() {
        let grid = Grid::default_desk();
        let c = constants();
        let f = gaussian(&grid, 1.0, 2.0, 0.5);
        let r = ladder_commutator_residual(&f, &c);
        assert!(r < 1e-6, "commutator residual {r:.3e}");
    }

    #[test]
    fn moments_of_displaced_gaussian() {
        let grid = Grid::default_desk();
        let c = constants();
        // width^2 = lambda^2/2 -> coherent widths 1/sqrt2
        let f = gaussian(&grid, 1.0, 0.0, 0.5);
        let m = moments(&f, &c).unwrap();
        assert!((m.mean_x - 1.0).abs() < 1e-9);
        assert!(m.mean_p.abs() < 1e-10);
        assert!((m.delta_x - 1.0 / SQRT_2).abs() < 1e-9);
        assert!((m.delta_p - 1.0 / SQRT_2).abs() < 1e-9);
        assert!((m.delta_x * m.delta_p - 0.5).abs() < 1e-8);
        assert!(m.sym_covariance.abs() < 1e-8);
    }

    #[test]
    fn moments_reject_unnormalized_input() {
        let grid = Grid::default_desk();
        let c = constants();
        let f = gaussian(&grid, 0.0, 0.0, 0.5).scaled(C64::new(1.1, 0.0));
        assert!(matches!(
            moments(&f, &c),
            Err(KitError::NotNormalized { .. })
        ));
    }

    #[test]
    fn adjoint_residual_is_one_for_gaussians() {
        let grid = Grid::default_desk();
        let c = constants();
        // coherent-shaped states at two centers
        for (x0, p0) in [(0.0, 0.0), (2.0 * SQRT_2, SQRT_2)] {
            let f = gaussian(&grid, x0, p0, 0.5);
            let r = adjoint_eigen_residual(&f, &c);
            assert!((r - 1.0).abs() < 1e-8, "residual {r} at ({x0}, {p0})");
        }
    }

    #[test]
    fn uncertainty_floor_on_random_mixtures() {
        let grid = Grid::default_desk();
        let c = constants();
        // deterministic family of 100 two-Gaussian superpositions
        for k in 0..100 {
            let t = k as f64 / 100.0;
            let a = gaussian(&grid, -2.0 + 2.5 * t, 0.8 - t, 0.5 + 0.3 * t);
            let b = gaussian(&grid, 1.5 - t, -1.2 * t, 0.7);
            let f = a
                .scaled(C64::new(0.8, 0.1 + t))
                .add(&b.scaled(C64::new(0.3, -0.5 * t)))
                .unwrap();
            let f = f.normalized().unwrap();
            let m = moments(&f, &c).unwrap();
            assert!(m.delta_x * m.delta_p >= 0.5 * (1.0 - 1e-6));
            let r = adjoint_eigen_residual(&f, &c);
            assert!(r >= 1.0 - 1e-6, "adjoint floor violated: {r}");
        }
    }

    /// Oracle for the second moment of the first excited Hermite function:
    /// dense Simpson quadrature of `|chi_1(x)|^2 x^2` with `chi_1` written
    /// out directly, nothing shared with the grid machinery.
    #[test]
    fn first_number_state_width_matches_dense_quadrature_oracle() {
        let lambda = 1.0f64;
        let chi1 = |x: f64| {
            let u = x / lambda;
            SQRT_2 * u * (-u * u / 2.0).exp() / (PI.powf(0.25) * lambda.sqrt())
        };
        let (a, b, n) = (-30.0f64, 30.0f64, 60_000usize);
        let h = (b - a) / n as f64;
        let mut oracle = 0.0;
        for j in 0..=n {
            let x = a + j as f64 * h;
            let weight = if j == 0 || j == n {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            oracle += weight * chi1(x).powi(2) * x * x;
        }
        oracle *= h / 3.0;
        assert!((oracle - 1.5).abs() < 1e-12, "oracle value {oracle}");

        // the grid route must reproduce the oracle value
        let grid = Grid::default_desk();
        let c = constants();
        let samples: Vec<C64> = grid
            .positions()
            .iter()
            .map(|&x| C64::new(chi1(x), 0.0))
            .collect();
        let state = WaveFunction::from_samples(Arc::clone(&grid), samples)
            .unwrap()
            .normalized()
            .unwrap();
        let m = moments(&state, &c).unwrap();
        assert!(
            (m.delta_x * m.delta_x - oracle).abs() <= 1e-9,
            "grid delta_x^2 {} vs oracle {oracle}",
            m.delta_x * m.delta_x
        );
    }

    #[test]
    fn edge_flag_set_for_wide_state() {
        let grid = Grid::new(64, -4.0, 4.0).unwrap();
        let f = gaussian(&grid, 0.0, 0.0, 4.0);
        assert!(f.edge_flagged());
        let g = Grid::default_desk();
        let f = gaussian(&g, 0.0, 0.0, 0.5);
        assert!(!f.edge_flagged());
    }
}
