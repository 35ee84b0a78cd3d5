//! The identity-verification suite.
//!
//! [`run_verification`] exercises every quantitative relation the crate
//! implements — ladder algebra, minimal uncertainty, constructor
//! agreement, drift identities, free evolution, overcompleteness, Husimi
//! properties — at one configurable scale, and returns a machine-readable
//! list of `(check, identity, residual, tolerance, pass)` records.

use num_complex::Complex64 as C64;
use std::f64::consts::{PI, SQRT_2};

use crate::constants::PhysicalConstants;
use crate::dynamics::{coherence_residual, evolve_free, momentum_modulus_drift, EvolutionParams};
use crate::error::Result;
use crate::fock;
use crate::grid::{
    adjoint_eigen_residual, apply_operator, eigen_relation_residual, inner_product,
    ladder_commutator_residual, moments, Grid, Operator, WaveFunction,
};
use crate::phase_space::{
    completeness_residual, expectation_of_a_function, husimi, husimi_marginals, marginal_stats,
    moment_integral_residual, reconstruct_number_state, PhaseSpaceLattice,
};
use crate::quadrature::Quadrature;
use crate::states::{
    alpha_from_moments, apply_drift_grid, coherent_closed_form, coherent_via_number_series,
    coherent_via_ode, number_coefficients, number_state, overlap_closed_form, CoherentLabel,
};

/// One verified identity.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub id: &'static str,
    pub identity: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Outcome of a verification run.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }
}

/// Scale knobs for the verification run. Defaults are the desk scale:
/// 1024-point grid on [-20, 20], Fock dimension 64, 128x128 Husimi map,
/// disk radius 8 with 64 angles.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub n_points: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub constants: PhysicalConstants,
    pub fock_dim: usize,
    pub husimi_nodes: usize,
    pub quad_radius: f64,
    pub quad_radial: usize,
    pub quad_theta: usize,
    pub probe_dim: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n_points: 1024,
            x_min: -20.0,
            x_max: 20.0,
            constants: PhysicalConstants::default(),
            fock_dim: 64,
            husimi_nodes: 128,
            quad_radius: 8.0,
            quad_radial: 80,
            quad_theta: 64,
            probe_dim: 8,
        }
    }
}

struct Recorder {
    checks: Vec<CheckRecord>,
}

impl Recorder {
    fn push(&mut self, id: &'static str, identity: &'static str, residual: f64, tolerance: f64) {
        self.checks.push(CheckRecord {
            id,
            identity,
            residual,
            tolerance,
            pass: residual <= tolerance,
        });
    }
}

fn diff(a: &WaveFunction, b: &WaveFunction) -> Result<f64> {
    Ok(a.sub(b)?.norm())
}

/// Run the whole suite. Individual checks never abort the run by failing a
/// tolerance — that shows up in the report — but configuration errors
/// (an undersized grid, say) abort with the underlying error.
pub fn run_verification(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let grid = Grid::new(cfg.n_points, cfg.x_min, cfg.x_max)?;
    let c = cfg.constants;
    let quad = Quadrature::new(cfg.quad_radius, cfg.quad_radial, cfg.quad_theta)?;
    let mut rec = Recorder { checks: Vec::new() };

    let vac_label = CoherentLabel::from_center(0.0, 0.0, &c)?;
    let vacuum = coherent_closed_form(&grid, &vac_label, &c)?;
    let probe_label = CoherentLabel::from_alpha(C64::new(0.9, -0.7), &c)?;
    let probe = coherent_closed_form(&grid, &probe_label, &c)?;

    // --- spectral grid algebra ---
    rec.push(
        "parseval",
        "||psi||_x = ||psi||_p",
        (probe.norm() - probe.momentum_norm()).abs(),
        1e-12,
    );
    {
        let xf = apply_operator(&probe, Operator::X, &c);
        let af = apply_operator(&probe, Operator::A, &c);
        let adf = apply_operator(&probe, Operator::ADag, &c);
        let scale = c.lambda / SQRT_2;
        let rebuilt = af.add(&adf)?.scaled(C64::new(scale, 0.0));
        rec.push(
            "ladder_x_reconstruction",
            "X = (lambda/sqrt2)(A + A†)",
            diff(&xf, &rebuilt)?,
            1e-10,
        );
        let pf = apply_operator(&probe, Operator::P, &c);
        let p_scale = C64::new(0.0, -c.hbar / (SQRT_2 * c.lambda));
        let rebuilt_p = af.sub(&adf)?.scaled(p_scale);
        rec.push(
            "ladder_p_reconstruction",
            "P = (hbar/(i sqrt2 lambda))(A - A†)",
            diff(&pf, &rebuilt_p)?,
            1e-10,
        );
    }
    rec.push(
        "ladder_commutator",
        "[A, A†] = I",
        ladder_commutator_residual(&probe, &c),
        1e-6,
    );

    // --- coherent constructors ---
    let three_label = CoherentLabel::from_alpha(C64::new(1.0, 1.2), &c)?;
    let closed = coherent_closed_form(&grid, &three_label, &c)?;
    let ode = coherent_via_ode(&grid, &three_label, &c)?;
    let series = coherent_via_number_series(&grid, &three_label, 32, &c)?;
    rec.push(
        "eigen_closed_form",
        "A psi_alpha = alpha psi_alpha",
        eigen_relation_residual(&closed, three_label.alpha(), &c),
        1e-8,
    );
    rec.push(
        "eigen_ode",
        "A psi_alpha = alpha psi_alpha",
        eigen_relation_residual(&ode, three_label.alpha(), &c),
        1e-8,
    );
    rec.push(
        "eigen_series",
        "A psi_alpha = alpha psi_alpha",
        eigen_relation_residual(&series.clone().normalized()?, three_label.alpha(), &c),
        1e-8,
    );
    rec.push(
        "constructor_agreement_ode",
        "psi(closed form) = psi(eigen equation)",
        diff(&closed, &ode)?,
        1e-8,
    );
    rec.push(
        "constructor_agreement_series",
        "psi(closed form) = psi(number series)",
        diff(&closed, &series)?,
        1e-6,
    );

    let report = moments(&closed, &c)?;
    rec.push(
        "minimal_uncertainty",
        "Delta_x Delta_p = hbar/2",
        (report.delta_x * report.delta_p - 0.5 * c.hbar).abs(),
        1e-8,
    );
    rec.push(
        "zero_covariance",
        "<XP + PX> - 2<X><P> = 0",
        report.sym_covariance.abs(),
        1e-8,
    );
    rec.push(
        "alpha_from_measured_moments",
        "alpha = <X>/(sqrt2 lambda) + i lambda <P>/(sqrt2 hbar)",
        (alpha_from_moments(report.mean_x, report.mean_p, &c) - three_label.alpha()).norm(),
        1e-8,
    );
    rec.push(
        "adjoint_no_eigenvector",
        "min_beta ||(A† - beta) psi_alpha|| = 1",
        (adjoint_eigen_residual(&closed, &c) - 1.0).abs(),
        1e-6,
    );
    {
        // shortfall below the unit floor over a deterministic state family
        let mut shortfall: f64 = 0.0;
        for k in 0..8 {
            let t = k as f64 / 8.0;
            let a = coherent_closed_form(
                &grid,
                &CoherentLabel::from_center(-1.5 + 2.0 * t, 0.9 - t, &c)?,
                &c,
            )?;
            let b = number_state(&grid, k, &c)?;
            let mix = a
                .scaled(C64::new(0.7, 0.2 * t))
                .add(&b.scaled(C64::new(0.3, -0.4)))?
                .normalized()?;
            shortfall = shortfall.max((1.0 - adjoint_eigen_residual(&mix, &c)).max(0.0));
        }
        rec.push(
            "adjoint_floor_random",
            "min_beta ||(A† - beta) psi|| >= 1",
            shortfall,
            1e-6,
        );
    }

    // --- number basis ---
    {
        let chi0 = number_state(&grid, 0, &c)?;
        rec.push(
            "vacuum_is_lowest_state",
            "chi_0 = psi_0",
            diff(&chi0, &vacuum)?,
            1e-10,
        );
        let chi1 = number_state(&grid, 1, &c)?;
        let chi2 = number_state(&grid, 2, &c)?;
        let lowered = apply_operator(&chi1, Operator::A, &c);
        rec.push(
            "ladder_lower",
            "A chi_n = sqrt(n) chi_{n-1}",
            diff(&lowered, &chi0)?,
            1e-8,
        );
        let raised = apply_operator(&chi1, Operator::ADag, &c);
        rec.push(
            "ladder_raise",
            "A† chi_n = sqrt(n+1) chi_{n+1}",
            diff(&raised, &chi2.scaled(C64::new(SQRT_2, 0.0)))?,
            1e-8,
        );
        let mut gram_dev: f64 = 0.0;
        let states: Vec<WaveFunction> = (0..=6)
            .map(|n| number_state(&grid, n, &c))
            .collect::<Result<_>>()?;
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                gram_dev = gram_dev.max((inner_product(a, b)? - C64::new(expect, 0.0)).norm());
            }
        }
        rec.push(
            "number_orthonormality",
            "<chi_m, chi_n> = delta_mn",
            gram_dev,
            1e-10,
        );
    }
    {
        let coeffs = number_coefficients(&probe, 20, &c)?;
        let expect = fock::coherent_coefficients(probe_label.alpha(), 21);
        let mut dev: f64 = 0.0;
        for n in 0..=20 {
            dev = dev.max((coeffs[n] - expect[n]).norm());
        }
        rec.push(
            "poisson_coefficients",
            "<chi_n, psi_alpha> = alpha^n/sqrt(n!) exp(-|alpha|^2/2)",
            dev,
            1e-8,
        );
    }

    // --- overlaps and drift ---
    {
        let other = CoherentLabel::from_alpha(C64::new(-0.5, 0.8), &c)?;
        let psi_other = coherent_closed_form(&grid, &other, &c)?;
        let got = inner_product(&probe, &psi_other)?;
        let expect = overlap_closed_form(probe_label.alpha(), other.alpha());
        rec.push(
            "overlap_closed_form",
            "<psi_a, psi_b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b)",
            (got - expect).norm(),
            1e-8,
        );

        let drifted = apply_drift_grid(&vacuum, probe_label.x0(), probe_label.p0(), &c)?;
        rec.push(
            "drift_moves_vacuum",
            "psi_alpha = D(alpha) psi_0",
            diff(&drifted, &probe)?,
            1e-8,
        );

        // grid composition with the projective phase
        let (x1, p1) = (other.x0(), other.p0());
        let (x2, p2) = (probe_label.x0(), probe_label.p0());
        let two_step = apply_drift_grid(&apply_drift_grid(&vacuum, x1, p1, &c)?, x2, p2, &c)?;
        let direct = apply_drift_grid(&vacuum, x1 + x2, p1 + p2, &c)?;
        let a1 = other.alpha();
        let a2 = probe_label.alpha();
        let phase = ((a2 * a1.conj() - a2.conj() * a1) / 2.0).exp();
        rec.push(
            "drift_group_law_grid",
            "D(a) D(b) = exp((a conj(b) - conj(a) b)/2) D(a+b)",
            diff(&two_step, &direct.scaled(phase))?,
            1e-8,
        );
    }
    {
        let alpha = C64::new(1.0, 0.6);
        let beta = C64::new(-0.4, 0.9);
        rec.push(
            "drift_group_law_fock",
            "D(a) D(b) = exp((a conj(b) - conj(a) b)/2) D(a+b)",
            fock::group_law_check(alpha, beta, cfg.fock_dim)?,
            1e-8,
        );
        rec.push(
            "drift_commutator",
            "[A, D(alpha)] = alpha D(alpha)",
            fock::commutator_drift_check(alpha, cfg.fock_dim)?,
            1e-8,
        );
        let d = fock::drift_matrix(alpha, cfg.fock_dim)?;
        let half = cfg.fock_dim / 2;
        let prod = d.adjoint() * &d;
        let mut unit_dev: f64 = 0.0;
        for r in 0..half {
            for col in 0..half {
                let expect = if r == col { 1.0 } else { 0.0 };
                unit_dev = unit_dev.max((prod[(r, col)] - C64::new(expect, 0.0)).norm());
            }
        }
        rec.push("drift_unitary", "D†(alpha) D(alpha) = I", unit_dev, 1e-10);
        let d_inv = fock::drift_matrix(-alpha, cfg.fock_dim)?;
        let prod = &d * &d_inv;
        let mut inv_dev: f64 = 0.0;
        for r in 0..half {
            for col in 0..half {
                let expect = if r == col { 1.0 } else { 0.0 };
                inv_dev = inv_dev.max((prod[(r, col)] - C64::new(expect, 0.0)).norm());
            }
        }
        rec.push("drift_inverse", "D(alpha)^{-1} = D(-alpha)", inv_dev, 1e-10);
        rec.push(
            "product_formula",
            "exp(R) exp(S) = exp(R+S) exp([R,S]/2)",
            fock::hbc_check(
                (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
                (C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
                cfg.fock_dim,
            )?,
            1e-8,
        );
        let d0 = fock::drift_matrix(C64::new(0.0, 0.0), cfg.fock_dim)?;
        let eye = fock::FockMatrix::identity(cfg.fock_dim, cfg.fock_dim);
        let dev = (&d0 - &eye).iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        rec.push("drift_at_origin", "D(0) = I", dev, 1e-12);
    }

    // --- free evolution ---
    {
        let params = EvolutionParams::new(1.5, c)?;
        let evolved = evolve_free(&probe, &params)?;
        rec.push(
            "evolution_unitary",
            "||U_t psi|| = ||psi||",
            (evolved.norm() - probe.norm()).abs(),
            1e-12,
        );
        rec.push(
            "momentum_invariance",
            "|psihat(p, t)| = |psihat(p, 0)|",
            momentum_modulus_drift(&probe, &params)?,
            1e-12,
        );
        let back = evolve_free(&evolved, &EvolutionParams::new(-1.5, c)?)?;
        rec.push(
            "evolution_reversible",
            "U_{-t} U_t psi = psi",
            diff(&back, &probe)?,
            1e-10,
        );

        let mut constrained_worst: f64 = 0.0;
        let mut rate_worst: f64 = 0.0;
        for t in [0.25, 0.5, 1.0, 2.0] {
            let (constrained, eigen) = coherence_residual(&vac_label, t, &c, &grid)?;
            constrained_worst = constrained_worst.max(constrained);
            rate_worst = rate_worst.max((eigen - t / 2.0).abs());
        }
        rec.push(
            "constrained_eigenrelation",
            "(A - t/(sqrt2 m lambda) P) Psi(t) = alpha Psi(t)",
            constrained_worst,
            1e-7,
        );
        rec.push(
            "noncoherence_rate",
            "min_beta ||(A - beta) Psi(t)|| = t/2",
            rate_worst,
            1e-6,
        );

        let evolved = evolve_free(&vacuum, &EvolutionParams::new(1.0, c)?)?;
        let m1 = moments(&evolved, &c)?;
        let d0 = c.coherent_delta_x();
        let law = (d0 * d0 + (c.hbar / (2.0 * c.mass * d0)).powi(2)).sqrt();
        rec.push(
            "spreading_law",
            "Delta_x(t)^2 = Delta_x(0)^2 + (hbar t / (2 m Delta_x(0)))^2",
            (m1.delta_x - law).abs(),
            1e-6,
        );

        let moving = coherent_closed_form(&grid, &CoherentLabel::from_center(-2.0, 3.0, &c)?, &c)?;
        let m2 = moments(&evolve_free(&moving, &EvolutionParams::new(1.0, c)?)?, &c)?;
        rec.push(
            "ballistic_center",
            "<X>(t) = x0 + p0 t / m",
            (m2.mean_x - (-2.0 + 3.0 / c.mass)).abs(),
            1e-8,
        );

        rec.push(
            "hamiltonian_commutators",
            "[H, A] = -i hbar/(sqrt2 m lambda) P and [H, [H, A]] = 0",
            crate::dynamics::commutator_series_check(&c, &grid)?,
            1e-6,
        );
    }

    // --- phase space ---
    {
        rec.push(
            "completeness",
            "integral |psi_a><psi_a| d^2a / pi = I",
            completeness_residual(cfg.probe_dim, &quad, &grid, &c)?,
            1e-6,
        );
        rec.push(
            "gaussian_moment_integrals",
            "integral a^n conj(a)^m exp(-|a|^2) d^2a = pi n! delta_nm",
            moment_integral_residual(cfg.probe_dim, &quad)?,
            1e-8,
        );
        let rebuilt = reconstruct_number_state(3, &quad, &grid, &c)?;
        rec.push(
            "number_from_coherent",
            "chi_n = integral conj(a)^n/sqrt(n!) exp(-|a|^2/2) psi_a d^2a / pi",
            diff(&rebuilt, &number_state(&grid, 3, &c)?)?,
            1e-6,
        );

        let lat = PhaseSpaceLattice::around(&report, &c, cfg.husimi_nodes, cfg.husimi_nodes)?;
        let map = husimi(&closed, &lat)?;
        let half = cfg.husimi_nodes / 2;
        rec.push(
            "husimi_peak",
            "rho_H(centroid) = 1/pi",
            (map.value(half, half) - 1.0 / PI).abs(),
            1e-6,
        );
        rec.push(
            "husimi_bound",
            "rho_H <= 1/pi",
            (map.max_value() - 1.0 / PI).max(0.0),
            1e-10,
        );
        rec.push(
            "husimi_nonnegative",
            "rho_H >= 0",
            (-map.min_value()).max(0.0),
            0.0,
        );
        rec.push(
            "husimi_mass",
            "integral rho_H dx dp = 2 hbar",
            (map.total_mass() - 2.0 * c.hbar).abs(),
            1e-4,
        );
        let (mx, _) = husimi_marginals(&map);
        let (_, _, var_x) = marginal_stats(lat.x_axis(), &mx);
        let true_var = report.delta_x * report.delta_x;
        rec.push(
            "husimi_marginal_broadening",
            "Var_H(x) = Delta_x^2 + lambda^2/2",
            (var_x - (true_var + c.lambda * c.lambda / 2.0)).abs(),
            1e-4,
        );

        let coeffs = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        let (ps, direct) = expectation_of_a_function(&probe, &coeffs, &quad, &c)?;
        rec.push(
            "expectation_identity",
            "<F(A)> = integral F(a) |<psi_a, Psi>|^2 d^2a / pi",
            (ps - direct).norm(),
            1e-6,
        );
    }

    Ok(VerificationReport { checks: rec.checks })
}
