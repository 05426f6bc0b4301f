use crate::error::{Error, Result};
use crate::geometry::{frame_at, GeometryFrame, MetricField};
use crate::lattice::{
    assemble_stencil, unitarize, CoinVariant, Direction, LatticeSpec, OperatorPath, StencilOperator, StepUnitary, Strategy,
    UnitarizeOptions, DEFAULT_DENSE_CAP,
};
use crate::par;
use crate::walk::record::{AmplitudeFrame, AmplitudeTrace, DensitySnapshot, RecordRow, RecorderConfig, RunMeta, RunRecord};
use crate::walk::{centroid, probability_density, Component, WalkState, EMPTY_NORM};

/// Orientation of the derivative stencil for one component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StencilRule {
    /// Forward where `a ≥ 0`, backward where `a < 0`.
    #[default]
    Upwind,
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ComponentScheme {
    pub stencil: StencilRule,
    pub strategy: Strategy,
}

/// Time at which the metric is sampled to build the operators of step `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepTime {
    /// `x0 = j ε`
    Start,
    /// `x0 = (j + ½) ε`
    #[default]
    Midpoint,
}

impl StepTime {
    pub fn x0(self, j: u64, eps: f64) -> f64 {
        match self {
            StepTime::Start => j as f64 * eps,
            StepTime::Midpoint => (j as f64 + 0.5) * eps,
        }
    }
}

impl std::fmt::Display for StepTime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StepTime::Start => "start",
            StepTime::Midpoint => "midpoint",
        })
    }
}

impl std::str::FromStr for StepTime {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "start" => Ok(StepTime::Start),
            "midpoint" => Ok(StepTime::Midpoint),
            _ => Err(format!("unknown step time '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    pub coin: CoinVariant,
    pub minus: ComponentScheme,
    pub plus: ComponentScheme,
    pub step_time: StepTime,
    pub path: OperatorPath,
    pub dense_cap: usize,
    pub parallel: bool,
}

impl Default for StepOptions {
    fn default() -> Self {
        StepOptions {
            coin: CoinVariant::default(),
            minus: ComponentScheme::default(),
            plus: ComponentScheme::default(),
            step_time: StepTime::default(),
            path: OperatorPath::Auto,
            dense_cap: DEFAULT_DENSE_CAP,
            parallel: true,
        }
    }
}

impl StepOptions {
    /// Same strategy for both components.
    pub fn with_strategy(self, strategy: Strategy) -> Self {
        StepOptions {
            minus: ComponentScheme { strategy, ..self.minus },
            plus: ComponentScheme { strategy, ..self.plus },
            ..self
        }
    }

    /// Upwind affine shift for `Φ⁻`, forward exponential shift for `Φ⁺`.
    pub fn hybrid(self) -> Self {
        StepOptions {
            minus: ComponentScheme { stencil: StencilRule::Upwind, strategy: Strategy::Affine },
            plus: ComponentScheme { stencil: StencilRule::Forward, strategy: Strategy::Exponential },
            ..self
        }
    }

    fn unitarize_options(&self) -> UnitarizeOptions {
        UnitarizeOptions { path: self.path, dense_cap: self.dense_cap, parallel: self.parallel }
    }
}

/// Advances walk states under a fixed metric and mass.
///
/// Step operators are rebuilt every step when the metric depends on `x0`, and
/// built once otherwise.
#[derive(Debug, Clone)]
pub struct Walker {
    pub metric: MetricField,
    pub mass: f64,
    pub lattice: LatticeSpec,
    pub options: StepOptions,
    cached: Option<StepUnitary>,
}

impl Walker {
    pub fn new(metric: MetricField, mass: f64, lattice: LatticeSpec, options: StepOptions) -> Self {
        Walker { metric, mass, lattice, options, cached: None }
    }

    /// Frames at every site for the operators of step `j`.
    pub fn frames(&self, j: u64) -> Result<Vec<GeometryFrame>> {
        let n = self.lattice.n_sites;
        let eps = self.lattice.eps;
        let x0 = self.options.step_time.x0(j, eps);
        if !self.metric.depends_on_space() {
            let f = frame_at(&self.metric, x0, 0.0, self.mass)?;
            return Ok(vec![f; n]);
        }
        par::try_collect(self.options.parallel, n, |p| frame_at(&self.metric, x0, p as f64 * eps, self.mass))
    }

    /// Builds the shift-then-coin operator for step `j`.
    pub fn step_unitary(&self, j: u64) -> Result<StepUnitary> {
        let frames = self.frames(j)?;
        let eps = self.lattice.eps;
        let a_minus: Vec<f64> = frames.iter().map(GeometryFrame::a_minus).collect();
        let a_plus: Vec<f64> = frames.iter().map(GeometryFrame::a_plus).collect();
        let angles: Vec<f64> = frames.iter().map(|f| eps * f.m_eff).collect();
        let uopts = self.options.unitarize_options();
        let lattice = &self.lattice;
        let build = |a: Vec<f64>, scheme: ComponentScheme| -> Result<_> {
            let op = match scheme.stencil {
                StencilRule::Upwind => assemble_stencil(&a, lattice)?,
                StencilRule::Forward => StencilOperator::new(a, Direction::Forward),
                StencilRule::Backward => StencilOperator::new(a, Direction::Backward),
            };
            unitarize(&op, scheme.strategy, lattice, &uopts)
        };
        let (minus, plus) =
            par::join(self.options.parallel, || build(a_minus, self.options.minus), || build(a_plus, self.options.plus));
        StepUnitary::new(minus?, plus?, angles, self.options.coin, self.options.parallel)
    }

    /// Applies one step to `state` and increments its step index.
    pub fn step(&mut self, state: &mut WalkState) -> Result<()> {
        if state.lattice != self.lattice {
            return Err(Error::ConfigMismatch("state lattice differs from walker lattice".into()));
        }
        if self.metric.depends_on_time() {
            let u = self.step_unitary(state.j)?;
            u.apply(&mut state.phi_minus, &mut state.phi_plus);
        } else {
            if self.cached.is_none() {
                self.cached = Some(self.step_unitary(state.j)?);
            }
            if let Some(u) = &self.cached {
                u.apply(&mut state.phi_minus, &mut state.phi_plus);
            }
        }
        state.j += 1;
        Ok(())
    }

    /// Applies `n_steps` steps, recording observables after each one.
    pub fn evolve(&mut self, state: &mut WalkState, n_steps: u64, recorder: &RecorderConfig) -> Result<RunRecord> {
        let cadence = recorder.snapshot_cadence.max(1);
        let start = state.j;
        let mut record = RunRecord {
            meta: RunMeta {
                n_sites: self.lattice.n_sites,
                eps: self.lattice.eps,
                start_j: start,
                n_steps,
                snapshot_cadence: cadence,
                echo: recorder.echo.clone(),
            },
            rows: Vec::with_capacity(n_steps as usize + 1),
            snapshots: Vec::new(),
            amplitudes: recorder.keep_amplitudes.then(|| AmplitudeTrace {
                n_sites: self.lattice.n_sites,
                eps: self.lattice.eps,
                frames: Vec::new(),
            }),
        };
        let mut previous = (None, None);
        for i in 0..=n_steps {
            if i > 0 {
                self.step(state)?;
            }
            previous = (
                tracked_centroid(state, Component::Minus, previous.0),
                tracked_centroid(state, Component::Plus, previous.1),
            );
            record.rows.push(RecordRow { j: state.j, norm: state.norm(), centroid_minus: previous.0, centroid_plus: previous.1 });
            if i % cadence == 0 {
                record.snapshots.push(DensitySnapshot { j: state.j, density: probability_density(state) });
                if let Some(trace) = record.amplitudes.as_mut() {
                    trace.frames.push(AmplitudeFrame {
                        j: state.j,
                        minus: state.phi_minus.clone(),
                        plus: state.phi_plus.clone(),
                    });
                }
            }
        }
        Ok(record)
    }
}

fn tracked_centroid(state: &WalkState, component: Component, previous: Option<f64>) -> Option<f64> {
    if state.component_norm(component) <= EMPTY_NORM {
        return None;
    }
    centroid(state, component, previous).ok()
}

/// One step of `state` without keeping the operators around.
pub fn step(state: &mut WalkState, metric: &MetricField, mass: f64, options: &StepOptions) -> Result<()> {
    Walker::new(metric.clone(), mass, state.lattice, *options).step(state)
}
