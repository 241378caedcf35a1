//! The four numerical experiments and their result rows.

use crate::error::{HarnessError, Result};
use crate::generators::{chebyshev_nodes, circle_poles, ellipse_nodes, perturbed_nodes, unit_circle_nodes, ELLIPSE_HEIGHT};
use ratiep_core::metrics::metric_report;
use ratiep_core::rks::{rational_arnoldi, rational_lanczos};
use ratiep_core::updating::{hpiep_solve, tpiep_solve};
use ratiep_core::{Measure, MetricOptions, OrfError, Pole, Report, Solution, C64};
use std::fmt;
use std::time::Instant;

/// Which experiment to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum ExperimentId {
    /// Unit-circle nodes, inner product.
    HpUnitCircle,
    /// Unit-circle nodes with one node moved close to its predecessor.
    HpPerturbed,
    /// Chebyshev points, bilinear form, plus the inner-product solvers.
    TpChebyshev,
    /// Nodes on a thin ellipse, bilinear form.
    TpEllipse,
}

impl ExperimentId {
    pub fn name(self) -> &'static str {
        match self {
            Self::HpUnitCircle => "hp-unit-circle",
            Self::HpPerturbed => "hp-perturbed",
            Self::TpChebyshev => "tp-chebyshev",
            Self::TpEllipse => "tp-ellipse",
        }
    }

    pub fn is_bilinear(self) -> bool {
        matches!(self, Self::TpChebyshev | Self::TpEllipse)
    }

    pub fn default_radius_xi(self) -> f64 {
        match self {
            Self::HpUnitCircle => 1.5,
            _ => 3.0,
        }
    }

    /// `None` means "same radius as `ξ`".
    pub fn default_radius_psi(self) -> Option<f64> {
        match self {
            Self::TpEllipse => Some(4.0),
            _ => None,
        }
    }

    /// Nodes of size `m` in insertion order.
    pub fn nodes(self, m: usize, perturb_at: usize, theta: f64) -> Result<Vec<C64>> {
        Ok(match self {
            Self::HpUnitCircle => unit_circle_nodes(m),
            Self::HpPerturbed => perturbed_nodes(m, perturb_at, theta)?,
            Self::TpChebyshev => chebyshev_nodes(m),
            Self::TpEllipse => ellipse_nodes(m, ELLIPSE_HEIGHT),
        })
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How the pencil is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Strategy {
    /// Rational Arnoldi or rational Lanczos.
    Krylov,
    /// One node at a time by the updating procedures.
    Update,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Self::Krylov => "krylov",
            Self::Update => "update",
        }
    }
}

/// Every parameter of a run. Construct with [`ExperimentSpec::new`] to get
/// the defaults of the experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub id: ExperimentId,
    pub sizes: Vec<usize>,
    pub radius_xi: f64,
    /// Radius of the `ψ` circle; `None` reuses `radius_xi`.
    pub radius_psi: Option<f64>,
    /// 1-based index of the perturbed node.
    pub perturb_at: usize,
    pub theta: f64,
    pub strategies: Vec<Strategy>,
    /// Common value of all weights.
    pub weight: C64,
    /// Recorded for reproducibility; the generators use no randomness.
    pub seed: u64,
    pub kappa: bool,
    /// Fill the `seconds` column. Off by default so that output is
    /// byte-for-byte reproducible.
    pub timings: bool,
}

/// Default sweep `m = 3, 18, …, 393`.
pub fn default_sizes() -> Vec<usize> {
    (3..=393).step_by(15).collect()
}

impl ExperimentSpec {
    pub fn new(id: ExperimentId) -> Self {
        Self {
            id,
            sizes: default_sizes(),
            radius_xi: id.default_radius_xi(),
            radius_psi: id.default_radius_psi(),
            perturb_at: 50,
            theta: 1e-6,
            strategies: vec![Strategy::Krylov, Strategy::Update],
            weight: C64::new(1.0, 0.0),
            seed: 0,
            kappa: true,
            timings: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(HarnessError::Config(msg.to_string()));
        if self.sizes.is_empty() || self.sizes[0] == 0 {
            return bad("sizes must be nonempty and positive");
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return bad("sizes must be strictly increasing");
        }
        if !(self.radius_xi > 1.0) || self.radius_psi.is_some_and(|r| !(r > 1.0)) {
            return bad("pole radii must exceed 1");
        }
        if self.id == ExperimentId::HpPerturbed && (self.perturb_at < 2 || !(self.theta > 0.0)) {
            return bad("perturbation needs perturb-at >= 2 and theta > 0");
        }
        if self.strategies.is_empty() {
            return bad("at least one strategy is required");
        }
        if !(self.weight.norm() > 0.0 && self.weight.norm().is_finite()) {
            return bad("weight must be nonzero and finite");
        }
        Ok(())
    }

    /// `ξ` poles for size `m`, equidistant on the `ξ` circle.
    pub fn poles_xi(&self, m: usize) -> Vec<Pole> {
        circle_poles(m.saturating_sub(1), self.radius_xi, 0.0)
    }

    /// `ψ` poles for size `m`: the conjugates of the points of the `ψ`
    /// circle. The `W` side is a Krylov space for `Zᴴ`, so equal radii give
    /// `ψ = conj(ξ)` and, for real nodes, the Hermitian special case.
    pub fn poles_psi(&self, m: usize) -> Vec<Pole> {
        circle_poles(m.saturating_sub(1), self.radius_psi.unwrap_or(self.radius_xi), 0.0)
            .iter()
            .map(Pole::conj)
            .collect()
    }

    pub fn measure(&self, m: usize, bilinear: bool) -> Result<Measure> {
        let nodes = self.id.nodes(m, self.perturb_at, self.theta)?;
        let w = vec![self.weight; m];
        Ok(if bilinear { Measure::bilinear(nodes, w.clone(), w)? } else { Measure::inner_product(nodes, w)? })
    }
}

/// Metrics of one solve, or the breakdown that stopped it.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Metrics(Report),
    Breakdown(OrfError),
}

/// One `(strategy, m)` result.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub experiment: ExperimentId,
    /// `krylov` or `update`; the inner-product rows of a bilinear experiment
    /// carry an `-hp` suffix.
    pub strategy: String,
    pub m: usize,
    pub outcome: Outcome,
    pub seconds: Option<f64>,
}

impl ResultRow {
    pub fn report(&self) -> Option<&Report> {
        match &self.outcome {
            Outcome::Metrics(r) => Some(r),
            Outcome::Breakdown(_) => None,
        }
    }

    pub fn is_breakdown(&self) -> bool {
        matches!(self.outcome, Outcome::Breakdown(_))
    }
}

/// Solves one instance with the given strategy.
pub fn solve(strategy: Strategy, measure: &Measure, xi: &[Pole], psi: Option<&[Pole]>) -> ratiep_core::Result<Solution> {
    match (strategy, psi) {
        (Strategy::Krylov, None) => rational_arnoldi(measure, xi),
        (Strategy::Update, None) => hpiep_solve(measure, xi),
        (Strategy::Krylov, Some(psi)) => rational_lanczos(measure, xi, psi),
        (Strategy::Update, Some(psi)) => tpiep_solve(measure, xi, psi),
    }
}

/// Whether a solver error is a breakdown to be recorded rather than a
/// configuration problem that aborts the run.
fn is_breakdown(e: &OrfError) -> bool {
    matches!(
        e,
        OrfError::Breakdown { .. }
            | OrfError::StronglySingular(_)
            | OrfError::NotPositiveDefinite(_)
            | OrfError::Singular
            | OrfError::PoleInstallFailure
            | OrfError::EvaluationSingular(_)
    )
}

/// Runs every `(m, strategy)` pair in `m` order.
///
/// Breakdowns are recorded in their row and the run continues; any other
/// solver error aborts it.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let opts = MetricOptions { kappa: spec.kappa, truncated: true };
    let mut rows = Vec::new();
    for &m in &spec.sizes {
        let xi = spec.poles_xi(m);
        let mut variants: Vec<(bool, &str)> = Vec::new();
        if spec.id.is_bilinear() {
            variants.push((true, ""));
        }
        if !spec.id.is_bilinear() || spec.id == ExperimentId::TpChebyshev {
            variants.push((false, if spec.id.is_bilinear() { "-hp" } else { "" }));
        }
        for (bilinear, suffix) in variants {
            let measure = spec.measure(m, bilinear)?;
            let psi = bilinear.then(|| spec.poles_psi(m));
            for &strategy in &spec.strategies {
                let start = Instant::now();
                let outcome = match solve(strategy, &measure, &xi, psi.as_deref()).and_then(|s| metric_report(&s, opts)) {
                    Ok(r) => Outcome::Metrics(r),
                    Err(e) if is_breakdown(&e) => Outcome::Breakdown(e),
                    Err(e) => return Err(e.into()),
                };
                rows.push(ResultRow {
                    experiment: spec.id,
                    strategy: format!("{}{suffix}", strategy.name()),
                    m,
                    outcome,
                    seconds: spec.timings.then(|| start.elapsed().as_secs_f64()),
                });
            }
        }
    }
    Ok(rows)
}
