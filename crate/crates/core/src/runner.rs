//! Suite orchestration: builds the chart, forms, vacuum and seeded field
//! configurations from a [`RunConfig`], executes the requested verification
//! suites in dependency order and assembles the report.

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::breaking::{
    az_inverse, az_rotation, boson_lagrangian, build_vacuum_frame, expand_field_strength_check,
    expand_su2_tensor, recompose_su2, solve_vacuum_preserving, u1_potential_of,
    vacuum_frame_residual, vacuum_preservation_residual, BosonFields, VacuumFrame,
};
use crate::bundles::{c, cr, standard_forms, FiberForms, GammaAlgebra, Mat2, Mat3, Mat4};
use crate::config::RunConfig;
use crate::connections::{
    compose_gauge, concordance_residuals, covariant_derivative, su2_exp, su2_gauge_transform,
    ConnectionSet, Couplings, FormsField, GaugePotentials, OmegaField, PhysConstants,
    Su3Connection,
};
use crate::curvature::{
    composed_curvature_residual, curvature, curvature_identity_residuals, field_strength,
    field_strength_constraint_residuals, gauge_kinetic_actions,
};
use crate::error::{Error, Result};
use crate::fields::{IndexedField, Species};
use crate::grid::{GridShape, ScalarField};
use crate::higgs::{
    align_unitary, alignment_residual, doublet_inner, higgs_actions, higgs_kinetic2, higgs_norm2,
    higgs_potential, kgf_gradient_check, kgf_residual, perturb_vacuum, potential_polynomial,
    HiggsParams,
};
use crate::manifold::{
    levi_civita, metricity_residual, structure_constants, torsion_residual, Chart, LeviCivita,
    StructureConstants,
};
use crate::matter::{
    boson_masses, coupling_constraint, higgs_sector_expand, lepton_charges, lepton_masses,
    lepton_sector_actions, quark_charges, quark_charges_general, quark_masses,
    quark_sector_actions, CouplingMode, LeptonConfig, LeptonGeneration, QuarkConfig,
};
use crate::report::{sig17, ActionReport, CheckRow, Provenance, SuiteReport};
use crate::{fd_tol, TOL_ACCUM, TOL_EXACT, TOL_MACHINE};

/// Canonical suite order: module dependencies first, then the cross-module
/// aggregates.
pub const SUITE_NAMES: [&str; 9] = [
    "manifold",
    "bundles",
    "connections",
    "curvature",
    "higgs",
    "breaking",
    "matter",
    "identities",
    "masses",
];

/// Seeded generator of smooth random fields: every sample is a short sum of
/// low-wavenumber trigonometric modes, so finite-difference tolerances hold
/// with margin.
pub struct FieldGen {
    rng: ChaCha8Rng,
    amplitude: f64,
}

impl FieldGen {
    pub fn new(seed: u64, amplitude: f64, generator: &str) -> Result<Self> {
        if generator != "trig-smooth" {
            return Err(Error::UnknownPreset(generator.to_string()));
        }
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            amplitude,
        })
    }

    /// A smooth real function of the coordinates.
    pub fn mode(&mut self) -> impl Fn([f64; 4]) -> f64 {
        let mut modes = Vec::new();
        for _ in 0..3 {
            let a = self.amplitude * self.rng.gen_range(0.4..1.0);
            let k = [
                self.rng.gen_range(-1.0..1.0),
                self.rng.gen_range(-1.0..1.0),
                self.rng.gen_range(-1.0..1.0),
                self.rng.gen_range(-1.0..1.0),
            ];
            let phase = self.rng.gen_range(0.0..std::f64::consts::TAU);
            modes.push((a, k, phase));
        }
        move |x: [f64; 4]| {
            modes
                .iter()
                .map(|(a, k, phase)| {
                    a * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2] + k[3] * x[3] + phase).sin()
                })
                .sum()
        }
    }

    pub fn real_scalar(&mut self, shape: GridShape) -> ScalarField {
        let f = self.mode();
        ScalarField::from_real_fn(shape, f)
    }

    pub fn real_covector(&mut self, shape: GridShape) -> Vec<[f64; 4]> {
        let fs: Vec<_> = (0..4).map(|_| self.mode()).collect();
        let mut out = vec![[0.0; 4]; shape.len()];
        for idx in shape.iter() {
            let p = shape.flat(idx);
            let x = shape.coords(idx);
            for k in 0..4 {
                out[p][k] = fs[k](x);
            }
        }
        out
    }

    pub fn complex_covector(&mut self, shape: GridShape) -> Vec<[Complex64; 4]> {
        let re = self.real_covector(shape);
        let im = self.real_covector(shape);
        let mut out = vec![[crate::bundles::C_ZERO; 4]; shape.len()];
        for p in 0..shape.len() {
            for k in 0..4 {
                out[p][k] = c(re[p][k], im[p][k]);
            }
        }
        out
    }

    /// Smooth boson fields with the conjugate W component tied on.
    pub fn bosons(&mut self, shape: GridShape, forms: &FiberForms) -> BosonFields {
        let mut bosons = BosonFields::zeros(shape);
        bosons.a = self.real_covector(shape);
        bosons.z = self.real_covector(shape);
        bosons.w_plus = self.complex_covector(shape);
        bosons.set_w_minus_conjugate(forms);
        bosons
    }

    /// Smooth Hermitian traceless isospin potentials (the concordant
    /// subspace).
    pub fn su2_potential(&mut self, shape: GridShape) -> Vec<[Mat2; 4]> {
        let comps: Vec<_> = (0..12).map(|_| self.mode()).collect();
        let mut out = vec![[Mat2::zeros(); 4]; shape.len()];
        for idx in shape.iter() {
            let p = shape.flat(idx);
            let x = shape.coords(idx);
            for k in 0..4 {
                let (a, b, d) = (comps[3 * k](x), comps[3 * k + 1](x), comps[3 * k + 2](x));
                out[p][k] = Mat2::new(cr(d), c(a, -b), c(a, b), cr(-d));
            }
        }
        out
    }

    /// Smooth Hermitian traceless color potentials.
    pub fn su3_potential(&mut self, shape: GridShape) -> Vec<[Mat3; 4]> {
        let comps: Vec<_> = (0..32).map(|_| self.mode()).collect();
        let mut out = vec![[Mat3::zeros(); 4]; shape.len()];
        for idx in shape.iter() {
            let p = shape.flat(idx);
            let x = shape.coords(idx);
            for k in 0..4 {
                let g: Vec<f64> = (0..8).map(|i| comps[8 * k + i](x)).collect();
                // Span of the standard Hermitian traceless generators.
                out[p][k] = Mat3::new(
                    cr(g[2] + g[7]),
                    c(g[0], -g[1]),
                    c(g[3], -g[4]),
                    c(g[0], g[1]),
                    cr(-g[2] + g[7]),
                    c(g[5], -g[6]),
                    c(g[3], g[4]),
                    c(g[5], g[6]),
                    cr(-2.0 * g[7]),
                );
            }
        }
        out
    }

    /// Smooth special-unitary gauge field.
    pub fn omega(&mut self, shape: GridShape) -> OmegaField {
        let fs: Vec<_> = (0..3).map(|_| self.mode()).collect();
        shape
            .iter()
            .map(|idx| {
                let x = shape.coords(idx);
                su2_exp([fs[0](x), fs[1](x), fs[2](x)])
            })
            .collect()
    }

    /// Smooth anti-Hermitian traceless connection components (the
    /// concordant connection subspace).
    pub fn su2_connection(&mut self, shape: GridShape) -> Vec<[Mat2; 4]> {
        let herm = self.su2_potential(shape);
        herm.iter()
            .map(|row| {
                let mut out = [Mat2::zeros(); 4];
                for k in 0..4 {
                    out[k] = row[k] * c(0.0, 1.0);
                }
                out
            })
            .collect()
    }

    pub fn su3_connection(&mut self, shape: GridShape) -> Vec<[Mat3; 4]> {
        let herm = self.su3_potential(shape);
        herm.iter()
            .map(|row| {
                let mut out = [Mat3::zeros(); 4];
                for k in 0..4 {
                    out[k] = row[k] * c(0.0, 1.0);
                }
                out
            })
            .collect()
    }

    /// A smooth spinor-slotted field for a species.
    pub fn spinor_field(&mut self, shape: GridShape, species: &Species) -> IndexedField {
        let flen: usize = species.slots.iter().map(|s| s.kind.dim()).product();
        let fs: Vec<_> = (0..2 * flen).map(|_| self.mode()).collect();
        let chirality = species.chirality;
        let mut out = IndexedField::for_species(shape, species);
        let dims: Vec<usize> = species.slots.iter().map(|s| s.kind.dim()).collect();
        for idx in shape.iter() {
            let p = shape.flat(idx);
            let x = shape.coords(idx);
            for f in 0..flen {
                // Decode the Dirac index (first slot) to honor chirality.
                let tail: usize = dims[1..].iter().product::<usize>().max(1);
                let a = f / tail;
                let keep = match chirality {
                    crate::fields::Chirality::Chiral => a < 2,
                    crate::fields::Chirality::Antichiral => a >= 2,
                    crate::fields::Chirality::None => true,
                };
                if keep {
                    out.set_flat(p, f, c(fs[2 * f](x), fs[2 * f + 1](x)));
                }
            }
        }
        out
    }

    pub fn unit_doublet(&mut self, forms: &FiberForms) -> nalgebra::Vector2<Complex64> {
        let mut v = nalgebra::Vector2::new(
            c(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0)),
            c(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0)),
        );
        let n = doublet_inner(forms, &v, &v).re.sqrt();
        v /= cr(n);
        v
    }
}

/// Everything the suites share, built once per run.
pub struct Fixtures {
    pub chart: Chart,
    pub sc: StructureConstants,
    pub lc: LeviCivita,
    pub forms: FiberForms,
    pub gamma: GammaAlgebra,
    pub vacuum: ConnectionSet,
    pub couplings: Couplings,
    pub constants: PhysConstants,
    pub params: HiggsParams,
    pub frame: VacuumFrame,
    pub mode: CouplingMode,
    pub h: f64,
}

impl Fixtures {
    pub fn build(config: &RunConfig) -> Result<Self> {
        let shape = GridShape::new(
            config.chart.extents,
            config.chart.spacing,
            config.chart.origin,
        );
        let chart = Chart::preset(&config.chart.preset, shape)?;
        let sc = structure_constants(&chart)?;
        let lc = levi_civita(&chart, &sc)?;
        let (forms, gamma) = standard_forms();
        let vacuum = ConnectionSet::vacuum_preset(&config.vacuum_preset, &chart)?;
        let couplings = config.couplings.resolve()?;
        let constants = PhysConstants::preset(&config.constants_preset)?;
        let params =
            HiggsParams::vacuum_consistent(config.higgs.mu, config.higgs.v, config.higgs.m_phi)?;
        let mut phi_vac = IndexedField::for_species(shape, &Species::higgs());
        for p in 0..shape.len() {
            phi_vac.set(p, &[0], cr(params.v / 2.0_f64.sqrt()));
        }
        let frame = build_vacuum_frame(&phi_vac, &forms)?;
        let mode = config.quark_mode()?;
        let h = chart.h();
        Ok(Self {
            chart,
            sc,
            lc,
            forms,
            gamma,
            vacuum,
            couplings,
            constants,
            params,
            frame,
            mode,
            h,
        })
    }

    fn shape(&self) -> GridShape {
        self.chart.shape
    }

    fn gen(&self, config: &RunConfig, salt: u64) -> Result<FieldGen> {
        FieldGen::new(
            config.fields.seed.wrapping_add(salt),
            config.fields.amplitude,
            &config.fields.generator,
        )
    }

    fn potentials(&self) -> GaugePotentials {
        GaugePotentials::zeros(self.shape(), self.couplings, self.constants)
    }
}

/// Execute the configured suites and assemble the report.
pub fn run(config: &RunConfig) -> Result<ActionReport> {
    let started = Instant::now();
    let requested: Vec<String> = if config.suites.is_empty() {
        SUITE_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        for name in &config.suites {
            if !SUITE_NAMES.contains(&name.as_str()) {
                return Err(Error::UnknownSuite(name.clone()));
            }
        }
        config.suites.clone()
    };

    let fx = Fixtures::build(config)?;
    let mut suites: BTreeMap<String, SuiteReport> = SUITE_NAMES
        .iter()
        .map(|&name| (name.to_string(), SuiteReport::skipped()))
        .collect();

    for &name in SUITE_NAMES.iter() {
        if !requested.iter().any(|r| r == name) {
            continue;
        }
        let report = match name {
            "manifold" => suite_manifold(&fx)?,
            "bundles" => suite_bundles(&fx, config)?,
            "connections" => suite_connections(&fx, config)?,
            "curvature" => suite_curvature(&fx, config)?,
            "higgs" => suite_higgs(&fx, config)?,
            "breaking" => suite_breaking(&fx, config)?,
            "matter" => suite_matter(&fx, config)?,
            "identities" => suite_identities(&fx, config)?,
            "masses" => suite_masses(&fx, config)?,
            _ => unreachable!(),
        };
        suites.insert(name.to_string(), report);
    }

    let status = if suites.values().all(|s| s.passed()) {
        "pass"
    } else {
        "fail"
    };
    Ok(ActionReport {
        status: status.into(),
        provenance: Provenance {
            version: env!("CARGO_PKG_VERSION").into(),
            grid: config.chart.extents,
            spacing: config.chart.spacing,
            seed: config.fields.seed,
            config: config.clone(),
        },
        suites,
        timing_ms: started.elapsed().as_millis() as u64,
    })
}

fn suite_manifold(fx: &Fixtures) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let mut values = BTreeMap::new();

    checks.push(CheckRow::new(
        "torsion",
        "antisymmetrized connection symbols equal the frame structure constants",
        torsion_residual(&fx.chart, &fx.lc, &fx.sc),
        1e-8,
    ));
    checks.push(CheckRow::new(
        "metricity",
        "covariant derivative of the frame metric vanishes",
        metricity_residual(&fx.chart, &fx.lc),
        1e-3,
    ));

    // Coordinate frames have commuting frame fields.
    let flat = Chart::preset("minkowski-coordinate", fx.shape())?;
    let flat_sc = structure_constants(&flat)?;
    checks.push(CheckRow::new(
        "coordinate-frame-commutators",
        "structure constants of a coordinate frame vanish",
        flat_sc.max_abs(),
        TOL_EXACT,
    ));

    // Lie derivative commutator identity decays with the spacing.
    let residual_at = |h: f64| -> Result<f64> {
        let shape = GridShape::new([9; 4], [h; 4], [1.0, -4.0 * h, -4.0 * h, -4.0 * h]);
        let chart = Chart::preset("curved-demo", shape)?;
        let sc = structure_constants(&chart)?;
        let f =
            ScalarField::from_real_fn(shape, |x| (x[0] + 0.5 * x[1]).sin() * (0.3 * x[2]).cos());
        let lie: Vec<ScalarField> = (0..4)
            .map(|k| chart.lie_derivative(&f, k))
            .collect::<Result<_>>()?;
        let mut worst: f64 = 0.0;
        for idx in shape.iter().filter(|&i| shape.is_interior(i, 2)) {
            let p = shape.flat(idx);
            for i in 0..4 {
                for j in 0..4 {
                    let lij = chart.lie_at(&|q: usize| lie[j].values[q], idx, i);
                    let lji = chart.lie_at(&|q: usize| lie[i].values[q], idx, j);
                    let mut r = lij - lji;
                    for k in 0..4 {
                        r -= sc.get(p, k, i, j) * lie[k].values[p];
                    }
                    worst = worst.max(r.norm());
                }
            }
        }
        Ok(worst)
    };
    let coarse = residual_at(0.1)?;
    let fine = residual_at(0.05)?;
    values.insert("lie_commutator_h_0.1".into(), sig17(coarse));
    values.insert("lie_commutator_h_0.05".into(), sig17(fine));
    checks.push(CheckRow::new(
        "lie-commutator-decay",
        "commutator of Lie derivatives matches the structure constants as h shrinks",
        fine / coarse.max(1e-300),
        0.6,
    ));

    values.insert("volume".into(), sig17(fx.chart.volume()));
    Ok(SuiteReport::from_checks(checks, values))
}

fn suite_bundles(fx: &Fixtures, _config: &RunConfig) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let g = &fx.gamma;
    let mut clifford: f64 = 0.0;
    for p in 0..4 {
        for q in 0..4 {
            let anti = g.gamma[p] * g.gamma[q] + g.gamma[q] * g.gamma[p];
            let expected = Mat4::identity() * cr(2.0 * if p == q { g.eta[p] } else { 0.0 });
            clifford = clifford.max((anti - expected).norm());
        }
    }
    checks.push(CheckRow::new(
        "clifford",
        "anticommutators of the gamma matrices reproduce the flat metric",
        clifford,
        TOL_MACHINE,
    ));
    let product =
        (g.gamma[0] * g.gamma[1] * g.gamma[2] * g.gamma[3] * crate::bundles::C_I - g.h).norm();
    checks.push(CheckRow::new(
        "chirality-product",
        "the chirality operator is i times the ordered product of the gammas",
        product,
        TOL_MACHINE,
    ));
    let mut anticommute: f64 = 0.0;
    for q in 0..4 {
        anticommute = anticommute.max((g.h * g.gamma[q] + g.gamma[q] * g.h).norm());
    }
    checks.push(CheckRow::new(
        "chirality-anticommutes",
        "the chirality operator anticommutes with every gamma",
        anticommute,
        TOL_MACHINE,
    ));
    let projectors = (g.hdot + g.hcirc - Mat4::identity())
        .norm()
        .max((g.hdot * g.hdot - g.hdot).norm())
        .max((g.hcirc * g.hcirc - g.hcirc).norm())
        .max((g.hdot * g.hcirc).norm());
    checks.push(CheckRow::new(
        "projector-algebra",
        "chiral projectors are complementary, idempotent and orthogonal",
        projectors,
        TOL_MACHINE,
    ));
    checks.push(CheckRow::new(
        "form-concordance-su2",
        "the raised symplectic form pairs the isospin metric back to its conjugate",
        fx.forms.concordance_su2_residual(),
        TOL_MACHINE,
    ));
    checks.push(CheckRow::new(
        "form-concordance-su3",
        "the raised color volume form pairs the color metric to its conjugate",
        fx.forms.concordance_su3_residual(),
        TOL_MACHINE,
    ));
    checks.push(CheckRow::new(
        "forms-structure",
        "Hermiticity, positivity and antisymmetry of the basic forms",
        fx.forms.structural_residual(),
        TOL_MACHINE,
    ));
    let mut self_adjoint: f64 = 0.0;
    for q in 0..4 {
        let m = fx.forms.dirac_d * g.gamma[q];
        self_adjoint = self_adjoint.max((m - m.adjoint()).norm());
    }
    checks.push(CheckRow::new(
        "gamma-self-adjoint",
        "the gammas are self-adjoint for the Dirac form",
        self_adjoint,
        TOL_MACHINE,
    ));
    Ok(SuiteReport::from_checks(checks, BTreeMap::new()))
}

fn suite_connections(fx: &Fixtures, config: &RunConfig) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let forms_field = FormsField::Constant(Box::new(fx.forms.clone()));
    let res = concordance_residuals(&fx.vacuum, &forms_field, &fx.chart);
    checks.push(CheckRow::new(
        "vacuum-concordance",
        "the vacuum connection parallelizes the five bundle forms",
        res.gauge_max(),
        TOL_EXACT,
    ));
    checks.push(CheckRow::new(
        "spinor-form",
        "the spinor connection parallelizes the Dirac form",
        res.dirac_d,
        TOL_EXACT,
    ));

    // Gauge covariance of the covariant derivative under a smooth random
    // special-unitary transformation.
    let mut gen = fx.gen(config, 1)?;
    let species = Species::higgs();
    let phi = gen.spinor_like_doublet(fx.shape());
    let omega = gen.omega(fx.shape());
    let (phi2, su2) = su2_gauge_transform(&omega, &phi, &fx.vacuum.su2, &fx.chart)?;
    let mut transformed = fx.vacuum.clone();
    transformed.su2 = su2;
    let left = covariant_derivative(&phi2, &species, &transformed, &fx.chart)?;
    let grad = covariant_derivative(&phi, &species, &fx.vacuum, &fx.chart)?;
    let mut worst: f64 = 0.0;
    for idx in fx.shape().iter_interior() {
        let p = fx.shape().flat(idx);
        for k in 0..4 {
            let v = nalgebra::Vector2::new(grad.get(p, &[k, 0]), grad.get(p, &[k, 1]));
            let w = omega[p] * v;
            worst = worst.max((left.get(p, &[k, 0]) - w[0]).norm());
            worst = worst.max((left.get(p, &[k, 1]) - w[1]).norm());
        }
    }
    checks.push(CheckRow::new(
        "gauge-covariance",
        "the derivative of the rotated doublet equals the rotated derivative",
        worst,
        fd_tol(fx.h),
    ));

    // Constraint residuals of a seeded concordant potential set.
    let mut pot = fx.potentials();
    pot.u1 = gen.real_covector(fx.shape());
    pot.su2 = gen.su2_potential(fx.shape());
    pot.su3 = gen.su3_potential(fx.shape());
    let pot_res = crate::connections::potential_constraint_residuals(&pot, &fx.forms);
    checks.push(CheckRow::new(
        "potential-constraints",
        "Hermiticity and form symmetry of the tensorial gauge potentials",
        pot_res.max(),
        TOL_EXACT,
    ));

    // Composition with zero potentials is the identity.
    let composed = compose_gauge(&fx.vacuum, &fx.potentials());
    let mut ident: f64 = 0.0;
    for p in 0..fx.shape().len() {
        for k in 0..4 {
            ident = ident.max((composed.u1[p][k] - fx.vacuum.u1[p][k]).norm());
            ident = ident.max((composed.su2[p][k] - fx.vacuum.su2[p][k]).norm());
            ident = ident.max((composed.su3[p][k] - fx.vacuum.su3[p][k]).norm());
        }
    }
    checks.push(CheckRow::new(
        "zero-potential-composition",
        "composing zero potentials returns the vacuum connection",
        ident,
        TOL_MACHINE,
    ));
    Ok(SuiteReport::from_checks(checks, BTreeMap::new()))
}

impl FieldGen {
    /// A smooth doublet with the Higgs signature.
    fn spinor_like_doublet(&mut self, shape: GridShape) -> IndexedField {
        let fs: Vec<_> = (0..4).map(|_| self.mode()).collect();
        let mut out = IndexedField::for_species(shape, &Species::higgs());
        for idx in shape.iter() {
            let p = shape.flat(idx);
            let x = shape.coords(idx);
            out.set(p, &[0], c(0.8 + fs[0](x), fs[1](x)));
            out.set(p, &[1], c(fs[2](x), fs[3](x)));
        }
        out
    }
}

fn suite_curvature(fx: &Fixtures, config: &RunConfig) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let mut values = BTreeMap::new();

    let vac_curv = curvature(&fx.vacuum, &fx.sc, &fx.chart).max_norm_interior(&fx.shape());
    checks.push(CheckRow::new(
        "vacuum-flatness",
        "the vacuum preset has zero curvature",
        vac_curv,
        TOL_EXACT,
    ));

    // Smooth concordant connection: identity chain residuals.
    let mut gen = fx.gen(config, 2)?;
    let mut conn = fx.vacuum.clone();
    let u1_field = gen.real_covector(fx.shape());
    for p in 0..fx.shape().len() {
        for k in 0..4 {
            conn.u1[p][k] += c(0.0, u1_field[p][k]);
        }
    }
    let su2_extra = gen.su2_connection(fx.shape());
    let su3_extra = gen.su3_connection(fx.shape());
    for p in 0..fx.shape().len() {
        for k in 0..4 {
            conn.su2[p][k] += su2_extra[p][k];
            conn.su3[p][k] += su3_extra[p][k];
        }
    }
    let curv = curvature(&conn, &fx.sc, &fx.chart);
    let idents = curvature_identity_residuals(&curv, &fx.forms, &fx.shape());
    checks.push(CheckRow::new(
        "curvature-identities",
        "imaginarity, skew-Hermiticity, form symmetries and zero traces of the curvature",
        idents.max(),
        fd_tol(fx.h),
    ));

    // Two-path check on smooth and constant potentials.
    let mut pot = fx.potentials();
    pot.u1 = gen.real_covector(fx.shape());
    pot.su2 = gen.su2_potential(fx.shape());
    pot.su3 = gen.su3_potential(fx.shape());
    checks.push(CheckRow::new(
        "composed-curvature-smooth",
        "curvature of the composed connection equals the scaled field strength",
        composed_curvature_residual(&pot, &fx.vacuum, &fx.sc, &fx.chart),
        fd_tol(fx.h),
    ));
    let mut pot_const = fx.potentials();
    for p in 0..fx.shape().len() {
        pot_const.u1[p] = [0.4, -0.2, 0.1, 0.3];
        pot_const.su2[p][0] = Mat2::new(cr(0.2), c(0.1, 0.3), c(0.1, -0.3), cr(-0.2));
        pot_const.su2[p][2] = Mat2::new(
            crate::bundles::C_ZERO,
            cr(0.5),
            cr(0.5),
            crate::bundles::C_ZERO,
        );
        pot_const.su3[p][1] = Mat3::identity() * cr(0.15)
            - Mat3::new(
                cr(0.0),
                cr(0.0),
                cr(0.0),
                cr(0.0),
                cr(0.0),
                cr(0.0),
                cr(0.0),
                cr(0.0),
                cr(0.45),
            );
    }
    checks.push(CheckRow::new(
        "composed-curvature-constant",
        "the same identity on constant potentials in a coordinate frame",
        composed_curvature_residual(&pot_const, &fx.vacuum, &fx.sc, &fx.chart),
        TOL_ACCUM,
    ));

    // Constraint residuals of the field strengths.
    let fs = field_strength(&pot, &fx.vacuum, &fx.sc, &fx.chart);
    let cons = field_strength_constraint_residuals(&fs.strength, &fx.forms, &fx.shape());
    checks.push(CheckRow::new(
        "strength-reality",
        "the hypercharge field strength is real",
        cons.u1_real,
        TOL_EXACT,
    ));
    checks.push(CheckRow::new(
        "strength-constraints",
        "Hermiticity-type, form and quadratic reality constraints of the strengths",
        cons.max(),
        fd_tol(fx.h),
    ));

    let acts = gauge_kinetic_actions(&fs.strength, &fx.chart, &fx.constants);
    values.insert("l1".into(), sig17(acts.l1));
    values.insert("l2".into(), sig17(acts.l2));
    values.insert("l3".into(), sig17(acts.l3));
    checks.push(CheckRow::new(
        "kinetic-actions-real",
        "the three gauge kinetic integrals are real",
        acts.imag_residual,
        TOL_ACCUM,
    ));
    Ok(SuiteReport::from_checks(checks, values))
}

fn suite_higgs(fx: &Fixtures, config: &RunConfig) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let mut values = BTreeMap::new();
    let mut gen = fx.gen(config, 3)?;

    // Gauge invariance of the densities.
    let phi = gen.spinor_like_doublet(fx.shape());
    let omega = gen.omega(fx.shape());
    let (phi2, su2) = su2_gauge_transform(&omega, &phi, &fx.vacuum.su2, &fx.chart)?;
    let mut transformed = fx.vacuum.clone();
    transformed.su2 = su2;
    let n_before = higgs_norm2(&phi, &fx.forms);
    let n_after = higgs_norm2(&phi2, &fx.forms);
    let mut norm_res: f64 = 0.0;
    for p in 0..fx.shape().len() {
        norm_res = norm_res.max((n_before.values[p] - n_after.values[p]).norm());
    }
    checks.push(CheckRow::new(
        "norm-gauge-invariance",
        "the doublet norm is invariant under special-unitary rotations",
        norm_res,
        TOL_EXACT,
    ));
    let v_before = higgs_potential(&phi, &fx.params, &fx.forms);
    let v_after = higgs_potential(&phi2, &fx.params, &fx.forms);
    let mut pot_res: f64 = 0.0;
    for p in 0..fx.shape().len() {
        pot_res = pot_res.max((v_before.values[p] - v_after.values[p]).norm());
    }
    checks.push(CheckRow::new(
        "potential-gauge-invariance",
        "the potential density is invariant under special-unitary rotations",
        pot_res,
        TOL_EXACT,
    ));
    let k_before = higgs_kinetic2(&phi, &fx.vacuum, &fx.forms, &fx.chart)?;
    let k_after = higgs_kinetic2(&phi2, &transformed, &fx.forms, &fx.chart)?;
    let mut kin_res: f64 = 0.0;
    for idx in fx.shape().iter_interior() {
        let p = fx.shape().flat(idx);
        kin_res = kin_res.max((k_before.values[p] - k_after.values[p]).norm());
    }
    checks.push(CheckRow::new(
        "kinetic-gauge-invariance",
        "the kinetic density is invariant under gauge-rotated connections",
        kin_res,
        fd_tol(fx.h),
    ));

    // Stationarity residual on the two exact solutions.
    let zero = IndexedField::for_species(fx.shape(), &Species::higgs());
    let r0 = kgf_residual(
        &zero,
        &fx.params,
        &fx.vacuum,
        &fx.forms,
        &fx.chart,
        &fx.constants,
    )?;
    // Stationarity residuals are dimensionful, so they are measured
    // against the potential-operator scale acting on the field.
    let pot_scale = |field_norm: f64| {
        fx.params.m_chi * fx.constants.c / 2.0 * fx.params.mu * fx.params.mu * field_norm.max(1.0)
    };
    checks.push(CheckRow::new(
        "stationarity-trivial",
        "the zero field solves the stationarity equation",
        r0.max_norm() / pot_scale(0.0),
        TOL_EXACT,
    ));
    let rv = kgf_residual(
        &fx.frame.phi_vac,
        &fx.params,
        &fx.vacuum,
        &fx.forms,
        &fx.chart,
        &fx.constants,
    )?;
    checks.push(CheckRow::new(
        "stationarity-vacuum",
        "the covariantly constant vacuum solves the stationarity equation",
        rv.max_norm() / pot_scale(fx.frame.phi_vac.max_norm()),
        TOL_EXACT,
    ));

    // Functional-gradient checks on random configurations.
    let mut worst_rel: f64 = 0.0;
    for trial in 0..3 {
        let base = gen.spinor_like_doublet(fx.shape());
        let bump_fn = gen.mode();
        let origin = fx.shape().origin;
        let spacing = fx.shape().spacing;
        let extents = fx.shape().extents;
        let delta = IndexedField::from_fn(fx.shape(), Species::higgs().slots, 3, |x, f| {
            let mut window = 1.0;
            for mu in 0..4 {
                let lo = origin[mu] + 2.0 * spacing[mu];
                let hi = origin[mu] + (extents[mu] as f64 - 3.0) * spacing[mu];
                let mid = 0.5 * (lo + hi);
                let width = 0.5 * (hi - lo).max(1e-9);
                let t = ((x[mu] - mid) / width).clamp(-1.0, 1.0);
                window *= (1.0 - t * t).powi(2);
            }
            c(
                window * (1.0 + 0.2 * f[0] as f64 + bump_fn(x)),
                0.3 * window,
            )
        });
        let (directional, paired) = kgf_gradient_check(
            &base,
            &delta,
            &fx.params,
            &fx.vacuum,
            &fx.forms,
            &fx.chart,
            &fx.constants,
        )?;
        let rel = (directional - paired).abs() / directional.abs().max(1e-6);
        worst_rel = worst_rel.max(rel);
        if trial == 0 {
            values.insert("gradient_directional".into(), sig17(directional));
            values.insert("gradient_paired".into(), sig17(paired));
        }
    }
    checks.push(CheckRow::new(
        "stationarity-gradient",
        "the stationarity residual is the functional gradient of the restricted action",
        worst_rel,
        fd_tol(fx.h),
    ));

    // Elongation norm identity and the alignment construction.
    let chi = gen.real_scalar(fx.shape());
    let pert = perturb_vacuum(&fx.frame.phi_vac, &chi, fx.params.v)?;
    let n2 = higgs_norm2(&pert, &fx.forms);
    let mut elong: f64 = 0.0;
    for p in 0..fx.shape().len() {
        let expected = (fx.params.v + chi.values[p].re).powi(2) / 2.0;
        elong = elong.max((n2.values[p].re - expected).abs());
    }
    checks.push(CheckRow::new(
        "elongation-norm",
        "the elongated vacuum has the squared norm of the shifted amplitude",
        elong,
        TOL_EXACT,
    ));

    let mut align_res: f64 = 0.0;
    for _ in 0..5 {
        let u = gen.unit_doublet(&fx.forms);
        let w = gen.unit_doublet(&fx.forms);
        let omega = align_unitary(&u, &w, &fx.forms)?;
        align_res = align_res.max(alignment_residual(&omega, &u, &w, &fx.forms));
    }
    checks.push(CheckRow::new(
        "alignment",
        "the constructed rotation is special-unitary and maps the first vector to the second",
        align_res,
        TOL_EXACT,
    ));

    let coeffs = potential_polynomial(&fx.params);
    checks.push(CheckRow::new(
        "polynomial-linear-term",
        "vacuum-consistent parameters kill the linear elongation term",
        coeffs[3].abs(),
        TOL_MACHINE,
    ));
    checks.push(CheckRow::new(
        "polynomial-quadratic-term",
        "the quadratic elongation coefficient is the squared mass parameter",
        coeffs[2] - fx.params.mu * fx.params.mu,
        TOL_MACHINE,
    ));

    let acts = higgs_actions(
        &fx.frame.phi_vac,
        &fx.params,
        &fx.vacuum,
        &fx.forms,
        &fx.chart,
        &fx.constants,
    )?;
    values.insert("l4_vacuum".into(), sig17(acts.l4));
    values.insert("l5_vacuum".into(), sig17(acts.l5));
    Ok(SuiteReport::from_checks(checks, values))
}

fn suite_breaking(fx: &Fixtures, config: &RunConfig) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let mut values = BTreeMap::new();
    let mut gen = fx.gen(config, 4)?;

    // Operator algebra over many random nonvanishing vacua.
    let mut algebra: f64 = 0.0;
    for _ in 0..20 {
        let f1 = gen.mode();
        let f2 = gen.mode();
        let f3 = gen.mode();
        let f4 = gen.mode();
        let phi = IndexedField::from_fn(fx.shape(), Species::higgs().slots, 3, |x, f| {
            if f[0] == 0 {
                c(1.0 + f1(x), f2(x))
            } else {
                c(f3(x), 0.5 * f4(x))
            }
        });
        let frame = build_vacuum_frame(&phi, &fx.forms)?;
        algebra = algebra.max(vacuum_frame_residual(&frame, &fx.forms));
    }
    checks.push(CheckRow::new(
        "vacuum-frame-algebra",
        "projector and swap identities hold for random nonvanishing vacua",
        algebra,
        TOL_EXACT,
    ));

    // Expansion round trip.
    let bosons = gen.bosons(fx.shape(), &fx.forms);
    let ca = recompose_su2(&bosons, &fx.frame, fx.couplings.g1, fx.couplings.g2);
    let (coeffs, res) = expand_su2_tensor(&ca, &fx.frame, &fx.forms);
    checks.push(CheckRow::new(
        "expansion-round-trip",
        "expanding the recomposed potential returns the inputs with all constraints",
        res.max(),
        TOL_EXACT,
    ));
    let uca = u1_potential_of(&bosons, fx.couplings.g1, fx.couplings.g2);
    let a3 = coeffs.a3();
    let (z, a) = az_rotation(&a3, &uca, fx.couplings.g1, fx.couplings.g2)?;
    let mut rot_res: f64 = 0.0;
    for p in 0..fx.shape().len() {
        for k in 0..4 {
            rot_res = rot_res.max((z[p][k] - bosons.z[p][k]).abs());
            rot_res = rot_res.max((a[p][k] - bosons.a[p][k]).abs());
        }
    }
    let (a3b, ucab) = az_inverse(&a, &z, fx.couplings.g1, fx.couplings.g2)?;
    for p in 0..fx.shape().len() {
        for k in 0..4 {
            rot_res = rot_res.max((a3b[p][k] - a3[p][k]).abs());
            rot_res = rot_res.max((ucab[p][k] - uca[p][k]).abs());
        }
    }
    checks.push(CheckRow::new(
        "neutral-rotation-round-trip",
        "the photon/Z rotation and its inverse compose to the identity",
        rot_res,
        TOL_EXACT,
    ));

    // Vacuum-preserving solve.
    let uca_in = gen.real_covector(fx.shape());
    let sol = solve_vacuum_preserving(&fx.frame, &uca_in, &fx.couplings, &fx.forms)?;
    checks.push(CheckRow::new(
        "vacuum-preserving-solve",
        "the least-squares solution keeps only the neutral coefficient and kills Z",
        sol.w_plus_max
            .max(sol.constraint_residual)
            .max(sol.implied_z_max),
        TOL_EXACT,
    ));

    // Photon-only configurations preserve the vacuum identically.
    let mut photon = BosonFields::zeros(fx.shape());
    photon.a = gen.real_covector(fx.shape());
    let ca_photon = recompose_su2(&photon, &fx.frame, fx.couplings.g1, fx.couplings.g2);
    let uca_photon = u1_potential_of(&photon, fx.couplings.g1, fx.couplings.g2);
    checks.push(CheckRow::new(
        "residual-electromagnetism",
        "photon-only potentials annihilate the Higgs vacuum",
        vacuum_preservation_residual(&ca_photon, &uca_photon, &fx.frame, &fx.couplings),
        TOL_EXACT,
    ));

    // Central two-path checks.
    let (r_su2, r_u1) = expand_field_strength_check(
        &bosons,
        &fx.frame,
        &fx.vacuum,
        &fx.sc,
        &fx.chart,
        &fx.couplings,
        &fx.constants,
    );
    checks.push(CheckRow::new(
        "strength-expansion-isospin",
        "closed-form isospin strength matches the direct evaluation",
        r_su2,
        fd_tol(fx.h),
    ));
    checks.push(CheckRow::new(
        "strength-expansion-hypercharge",
        "closed-form hypercharge strength matches the direct evaluation",
        r_u1,
        fd_tol(fx.h),
    ));

    let lag = boson_lagrangian(
        &bosons,
        &fx.frame,
        &fx.vacuum,
        &fx.sc,
        &fx.chart,
        &fx.couplings,
        &fx.constants,
    );
    for (name, value) in [
        ("l11", lag.l11),
        ("l12", lag.l12),
        ("l21", lag.l21),
        ("l22", lag.l22),
        ("l23", lag.l23),
        ("l24", lag.l24),
        ("l25", lag.l25),
        ("l26", lag.l26),
    ] {
        values.insert(name.into(), sig17(value));
    }
    let scale = lag.sum().abs().max(1.0);
    checks.push(CheckRow::new(
        "lagrangian-split",
        "the eight boson terms sum to the kinetic actions of the recomposed potentials",
        lag.sum_vs_kinetic_residual / scale,
        fd_tol(fx.h),
    ));
    checks.push(CheckRow::new(
        "lagrangian-real",
        "every boson term is a real integral",
        lag.imag_residual,
        TOL_ACCUM,
    ));
    Ok(SuiteReport::from_checks(checks, values))
}

fn suite_matter(fx: &Fixtures, config: &RunConfig) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let mut values = BTreeMap::new();
    let mut gen = fx.gen(config, 5)?;

    // Higgs-sector expansion two-path check.
    let chi = gen.real_scalar(fx.shape());
    let bosons = gen.bosons(fx.shape(), &fx.forms);
    let sector = higgs_sector_expand(
        &chi,
        &bosons,
        &fx.params,
        &fx.frame,
        &fx.vacuum,
        &fx.forms,
        &fx.chart,
        &fx.couplings,
        &fx.constants,
    )?;
    checks.push(CheckRow::new(
        "higgs-sector-two-path",
        "the closed-form kinetic density matches the direct covariant evaluation",
        sector.kinetic_two_path_residual,
        fd_tol(fx.h),
    ));
    checks.push(CheckRow::new(
        "higgs-sector-split",
        "the five kinetic terms resum the closed-form action",
        sector.kinetic_split_residual,
        TOL_ACCUM,
    ));
    for (name, value) in [
        ("l41", sector.l41),
        ("l42", sector.l42),
        ("l43", sector.l43),
        ("l44", sector.l44),
        ("l45", sector.l45),
        ("l51", sector.l51),
        ("l52", sector.l52),
        ("l53", sector.l53),
        ("m_z", sector.m_z),
        ("m_w", sector.m_w),
    ] {
        values.insert(name.into(), sig17(value));
    }

    // Lepton sector.
    let lepton_config = LeptonConfig {
        generations: (0..3)
            .map(|g| LeptonGeneration {
                charged: gen.spinor_field(fx.shape(), &Species::charged_lepton()),
                neutrino: gen.spinor_field(fx.shape(), &Species::neutrino()),
                yukawa: config.lepton_yukawa[g],
            })
            .collect(),
    };
    let lepton = lepton_sector_actions(
        &lepton_config,
        &bosons,
        &chi,
        &fx.frame,
        &fx.vacuum,
        &fx.forms,
        &fx.gamma,
        &fx.chart,
        &fx.couplings,
        &fx.constants,
    )?;
    let l6_scale = lepton.l6_direct.abs().max(1.0);
    checks.push(CheckRow::new(
        "lepton-kinetic-two-path",
        "the five kinetic/interaction terms resum the doublet kinetic action",
        lepton.kinetic_two_path_residual / l6_scale,
        fd_tol(fx.h),
    ));
    checks.push(CheckRow::new(
        "lepton-yukawa-two-path",
        "the two mass/interaction terms resum the doublet Yukawa action",
        lepton.yukawa_two_path_residual / lepton.l7_direct.abs().max(1.0),
        TOL_ACCUM,
    ));
    checks.push(CheckRow::new(
        "lepton-chirality",
        "neutrino inputs honor their declared chirality",
        lepton.chirality_residual,
        TOL_EXACT,
    ));
    for (name, value) in [
        ("l61", lepton.l61),
        ("l62", lepton.l62),
        ("l63", lepton.l63),
        ("l64", lepton.l64),
        ("l65", lepton.l65),
        ("l71", lepton.l71),
        ("l72", lepton.l72),
    ] {
        values.insert(name.into(), sig17(value));
    }

    // Quark sector.
    let quark_config = QuarkConfig {
        up: (0..3)
            .map(|_| gen.spinor_field(fx.shape(), &Species::up_quark()))
            .collect(),
        down: (0..3)
            .map(|_| gen.spinor_field(fx.shape(), &Species::down_quark()))
            .collect(),
        h1: config.coupling_matrix(&config.quark_h1),
        h2: config.coupling_matrix(&config.quark_h2),
        mode: fx.mode,
    };
    let gluons: Su3Connection = gen.su3_potential(fx.shape());
    let quark = quark_sector_actions(
        &quark_config,
        &bosons,
        &gluons,
        &chi,
        &fx.frame,
        &fx.vacuum,
        &fx.forms,
        &fx.gamma,
        &fx.chart,
        &fx.couplings,
        &fx.constants,
    )?;
    let l8_scale = quark.l8_direct.abs().max(1.0);
    checks.push(CheckRow::new(
        "quark-kinetic-two-path",
        "the five kinetic/interaction terms resum the doublet kinetic action",
        quark.kinetic_two_path_residual / l8_scale,
        fd_tol(fx.h),
    ));
    checks.push(CheckRow::new(
        "quark-yukawa-two-path",
        "the generation-mixed mass terms resum the doublet Yukawa action",
        quark.yukawa_two_path_residual / quark.l9_direct.abs().max(1.0),
        TOL_ACCUM,
    ));
    checks.push(CheckRow::new(
        "quark-chirality",
        "doublet pieces and singlets honor their declared chirality",
        quark.chirality_residual,
        TOL_EXACT,
    ));
    for (name, value) in [
        ("l81", quark.l81),
        ("l82", quark.l82),
        ("l83", quark.l83),
        ("l84", quark.l84),
        ("l85", quark.l85),
        ("l91", quark.l91),
        ("l92", quark.l92),
    ] {
        values.insert(name.into(), sig17(value));
    }
    Ok(SuiteReport::from_checks(checks, values))
}

fn suite_identities(fx: &Fixtures, config: &RunConfig) -> Result<SuiteReport> {
    // The algebraic identity subset across the geometry and algebra
    // modules, on the configured presets.
    let mut checks = Vec::new();
    let bundles = suite_bundles(fx, config)?;
    checks.extend(bundles.checks);
    let connections = suite_connections(fx, config)?;
    checks.extend(connections.checks);
    checks.push(CheckRow::new(
        "torsion",
        "antisymmetrized connection symbols equal the frame structure constants",
        torsion_residual(&fx.chart, &fx.lc, &fx.sc),
        1e-8,
    ));
    let vac_curv = curvature(&fx.vacuum, &fx.sc, &fx.chart).max_norm_interior(&fx.shape());
    checks.push(CheckRow::new(
        "vacuum-flatness",
        "the vacuum preset has zero curvature",
        vac_curv,
        TOL_EXACT,
    ));
    Ok(SuiteReport::from_checks(checks, BTreeMap::new()))
}

fn suite_masses(fx: &Fixtures, config: &RunConfig) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let mut values = BTreeMap::new();
    let (g1, g2) = (fx.couplings.g1, fx.couplings.g2);
    let (m_z, m_w) = boson_masses(g1, g2, fx.params.v, fx.params.m_chi, &fx.constants)?;
    values.insert("m_z".into(), sig17(m_z));
    values.insert("m_w".into(), sig17(m_w));
    values.insert("mass_ratio".into(), sig17(m_w / m_z));
    values.insert(
        "coupling_constraint_residual".into(),
        sig17(coupling_constraint(g1, g2)),
    );

    checks.push(CheckRow::new(
        "mass-ordering",
        "the W boson is not heavier than the Z boson",
        (m_w - m_z).max(0.0),
        TOL_MACHINE,
    ));
    let ratio_closed = g2 / crate::breaking::mixing_norm(g1, g2);
    checks.push(CheckRow::new(
        "mass-ratio-closed-form",
        "the mass ratio reduces to the coupling ratio",
        m_w / m_z - ratio_closed,
        TOL_EXACT,
    ));
    // Linearity in the amplitude.
    let (m_z2, m_w2) = boson_masses(g1, g2, 2.0 * fx.params.v, fx.params.m_chi, &fx.constants)?;
    checks.push(CheckRow::new(
        "mass-scaling",
        "boson masses are linear in the vacuum amplitude",
        (m_z2 - 2.0 * m_z).abs().max((m_w2 - 2.0 * m_w).abs()),
        TOL_EXACT,
    ));

    let (q_lepton, q_neutrino) = lepton_charges(g1, g2, fx.constants.e);
    let (q_up, q_down) = quark_charges(fx.constants.e);
    let (q_up_g, q_down_g) = quark_charges_general(g1, g2, fx.constants.e);
    values.insert("q_charged_lepton".into(), sig17(q_lepton));
    values.insert("q_neutrino".into(), sig17(q_neutrino));
    values.insert("q_up".into(), sig17(q_up));
    values.insert("q_down".into(), sig17(q_down));
    if coupling_constraint(g1, g2).abs() < 1e-9 {
        checks.push(CheckRow::new(
            "lepton-charge",
            "charged leptons carry minus the elementary charge",
            q_lepton + fx.constants.e,
            TOL_EXACT,
        ));
        checks.push(CheckRow::new(
            "quark-charges",
            "quark charges are the rational multiples of the elementary charge",
            (q_up_g - q_up).abs().max((q_down_g - q_down).abs()),
            TOL_EXACT,
        ));
    }

    let yukawa = config.lepton_yukawa;
    let lm = lepton_masses(yukawa, fx.params.v, fx.constants.c)?;
    for (name, mass) in [
        ("m_e_like", lm[0]),
        ("m_mu_like", lm[1]),
        ("m_tau_like", lm[2]),
    ] {
        values.insert(name.into(), sig17(mass));
    }
    checks.push(CheckRow::new(
        "lepton-mass-ratio",
        "lepton mass ratios equal the coupling ratios",
        lm[1] * yukawa[0] - lm[0] * yukawa[1],
        TOL_EXACT,
    ));

    let mut report = match quark_masses(
        &config.coupling_matrix(&config.quark_h1),
        &config.coupling_matrix(&config.quark_h2),
        fx.params.v,
        fx.constants.c,
        fx.mode,
    ) {
        Ok(qm) => {
            for (name, mass) in [
                ("m_up_like", qm[0]),
                ("m_charm_like", qm[1]),
                ("m_top_like", qm[2]),
                ("m_down_like", qm[3]),
                ("m_strange_like", qm[4]),
                ("m_bottom_like", qm[5]),
            ] {
                values.insert(name.into(), sig17(mass));
            }
            SuiteReport::from_checks(checks, values)
        }
        Err(Error::MassesUndefined) => {
            let mut report = SuiteReport::from_checks(checks, values);
            report
                .notes
                .push("individual quark masses are undefined for general coupling matrices".into());
            report
        }
        Err(err) => return Err(err),
    };
    report.notes.push(format!(
        "couplings g1 = {}, g2 = {}, g3 = {}",
        fx.couplings.g1, fx.couplings.g2, fx.couplings.g3
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> RunConfig {
        let mut config = RunConfig::default();
        config.chart.extents = [5, 5, 5, 5];
        config
    }

    #[test]
    fn default_run_passes_every_suite() {
        let config = small_config();
        let report = run(&config).unwrap();
        for (name, suite) in &report.suites {
            assert_eq!(suite.status, "pass", "suite {name}: {suite:?}");
        }
        assert_eq!(report.status, "pass");
    }

    #[test]
    fn reports_contain_all_suites_even_when_skipped() {
        let mut config = small_config();
        config.suites = vec!["bundles".into()];
        let report = run(&config).unwrap();
        assert_eq!(report.suites.len(), SUITE_NAMES.len());
        assert_eq!(report.suites["bundles"].status, "pass");
        assert_eq!(report.suites["matter"].status, "skipped");
    }

    #[test]
    fn unknown_suites_are_rejected() {
        let mut config = small_config();
        config.suites = vec!["no-such-suite".into()];
        assert!(matches!(run(&config), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn cgs_constants_pass_all_suites() {
        let mut config = small_config();
        config.constants_preset = "cgs-nist".into();
        let report = run(&config).unwrap();
        for (name, suite) in &report.suites {
            assert_eq!(suite.status, "pass", "suite {name}: {suite:?}");
        }
    }

    #[test]
    fn curved_demo_chart_passes_all_suites() {
        let mut config = small_config();
        config.chart.preset = "curved-demo".into();
        config.chart.origin = [1.0, -0.2, -0.2, -0.2];
        let report = run(&config).unwrap();
        for (name, suite) in &report.suites {
            assert_eq!(suite.status, "pass", "suite {name}: {suite:?}");
        }
    }

    #[test]
    fn same_seed_gives_identical_comparison_bodies() {
        let mut config = small_config();
        config.suites = vec!["breaking".into(), "masses".into()];
        let r1 = run(&config).unwrap();
        let r2 = run(&config).unwrap();
        assert_eq!(r1.comparison_body(), r2.comparison_body());
    }

    #[test]
    fn different_seeds_change_the_sampled_values() {
        let mut config = small_config();
        config.suites = vec!["breaking".into()];
        let r1 = run(&config).unwrap();
        config.fields.seed += 1;
        let r2 = run(&config).unwrap();
        assert_ne!(
            r1.suites["breaking"].values["l22"],
            r2.suites["breaking"].values["l22"]
        );
    }
}
