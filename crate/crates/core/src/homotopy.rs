//! Great-circle homotopy on the unit Frobenius sphere and the certified
//! predictor-corrector tracker with explicit step-size constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{condition_numbers, newton_step, EigenTriple, C0};
use crate::linalg::{c64, ComplexMatrix};

/// Default per-path step budget.
pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

/// Endpoints whose spherical separation (or distance from antipodal) is
/// below this are treated as degenerate.
const DEGENERATE_ARC: f64 = 64.0 * f64::EPSILON;

/// `B_t = S·cos t + D·sin t` for `t ∈ [0, a]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GreatCirclePath {
    start: ComplexMatrix,
    direction: ComplexMatrix,
    end: ComplexMatrix,
    arc: f64,
}

fn inner_re(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.inner(b).re
}

fn unit_sphere_point(a: &ComplexMatrix, what: &str) -> Result<ComplexMatrix> {
    if !a.is_finite() {
        return Err(Error::Domain(format!("{what} has non-finite entries")));
    }
    let n = a.frobenius_norm();
    if n == 0.0 {
        return Err(Error::Domain(format!("{what} is the zero matrix")));
    }
    Ok(a.scale_real(1.0 / n))
}

/// Great circle from `A₀/‖A₀‖_F` to `A/‖A‖_F`.
pub fn build_path(a0: &ComplexMatrix, a: &ComplexMatrix) -> Result<GreatCirclePath> {
    if a0.shape() != a.shape() || !a.is_square() {
        return Err(Error::Dimension(format!(
            "path endpoints must be square of equal order, got {:?} and {:?}",
            a0.shape(),
            a.shape()
        )));
    }
    let s = unit_sphere_point(a0, "start matrix")?;
    let e = unit_sphere_point(a, "target matrix")?;
    let c = inner_re(&s, &e);
    let d = e.lin_comb(1.0, &s, -c);
    let sn = d.frobenius_norm();
    let arc = sn.atan2(c);
    if sn <= DEGENERATE_ARC || arc <= DEGENERATE_ARC || std::f64::consts::PI - arc <= DEGENERATE_ARC
    {
        return Err(Error::DegeneratePath { arc });
    }
    Ok(GreatCirclePath {
        direction: d.scale_real(1.0 / sn),
        start: s,
        end: e,
        arc,
    })
}

impl GreatCirclePath {
    /// Zero-length path sitting at `A/‖A‖_F`.
    pub fn constant(a: &ComplexMatrix) -> Result<Self> {
        let s = unit_sphere_point(a, "matrix")?;
        Ok(Self {
            direction: ComplexMatrix::zeros(s.rows(), s.cols()),
            end: s.clone(),
            start: s,
            arc: 0.0,
        })
    }

    /// Great circle, or the constant path when the two endpoints define the
    /// same point of the sphere.
    pub fn between(a0: &ComplexMatrix, a: &ComplexMatrix) -> Result<Self> {
        match build_path(a0, a) {
            Err(Error::DegeneratePath { arc }) if arc <= DEGENERATE_ARC => Self::constant(a),
            other => other,
        }
    }

    pub fn arc(&self) -> f64 {
        self.arc
    }

    pub fn order(&self) -> usize {
        self.start.rows()
    }

    pub fn start(&self) -> &ComplexMatrix {
        &self.start
    }

    pub fn end(&self) -> &ComplexMatrix {
        &self.end
    }

    pub fn direction(&self) -> &ComplexMatrix {
        &self.direction
    }

    /// `B_t`; exactly the stored endpoint at `t = a`.
    pub fn point(&self, t: f64) -> ComplexMatrix {
        if t >= self.arc {
            return self.end.clone();
        }
        if t <= 0.0 {
            return self.start.clone();
        }
        self.start.lin_comb(t.cos(), &self.direction, t.sin())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepConstants {
    pub eps: f64,
    pub c_eps: f64,
    pub c0: f64,
    pub alpha: f64,
}

impl StepConstants {
    pub const DEFAULT_EPS: f64 = 1.0 / 16.0;

    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 0.5) {
            return Err(Error::Domain(format!(
                "eps must lie in (0, 1/2], got {eps}"
            )));
        }
        let alpha = 2.0 * 2f64.sqrt() * (1.0 + 5f64.sqrt());
        let c_eps = (eps / (2f64.sqrt() + alpha * (1.0 + eps))).atan() / (1.0 + eps);
        Ok(Self {
            eps,
            c_eps,
            c0: C0,
            alpha,
        })
    }

    /// Admissible step interval `[C_ε/(6√2(1+ε)μ²), C_ε/(2√2(1+ε)μ²)]`.
    pub fn window(&self, mu: f64) -> (f64, f64) {
        let base = self.c_eps / (2f64.sqrt() * (1.0 + self.eps) * mu * mu);
        (base / 6.0, base / 2.0)
    }

    /// `b = C_ε/(3√2(1+ε)μ²)`.
    pub fn step_size(&self, mu: f64) -> Result<f64> {
        if !mu.is_finite() {
            return Err(Error::IllPosed);
        }
        if mu < 1.0 {
            return Err(Error::Domain(format!("condition number below 1: {mu}")));
        }
        Ok(self.c_eps / (3.0 * 2f64.sqrt() * (1.0 + self.eps) * mu * mu))
    }
}

impl Default for StepConstants {
    fn default() -> Self {
        Self::new(Self::DEFAULT_EPS).expect("default eps is valid")
    }
}

pub fn step_size(mu: f64, k: &StepConstants) -> Result<f64> {
    k.step_size(mu)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackConfig {
    pub constants: StepConstants,
    pub max_steps: u64,
    pub record_trace: bool,
}

impl Default for TrackConfig {
    fn default() -> Self {
        Self {
            constants: StepConstants::default(),
            max_steps: DEFAULT_MAX_STEPS,
            record_trace: false,
        }
    }
}

/// One accepted step: the node `t` where `μ` was evaluated, the step `b`
/// and `μ` itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: f64,
    pub b: f64,
    pub mu: f64,
}

#[derive(Debug, Clone)]
pub struct TrackerState {
    pub t: f64,
    pub current: EigenTriple,
    pub steps: u64,
    pub trace: Option<Vec<TraceRecord>>,
}

/// Step-at-a-time tracker along one path.
#[derive(Debug, Clone)]
pub struct Tracker<'p> {
    path: &'p GreatCirclePath,
    config: TrackConfig,
    state: TrackerState,
}

impl<'p> Tracker<'p> {
    pub fn new(
        path: &'p GreatCirclePath,
        lambda0: c64,
        v0: &[c64],
        config: TrackConfig,
    ) -> Result<Self> {
        let current = EigenTriple::new(path.start.clone(), lambda0, v0)?;
        Ok(Self {
            path,
            config,
            state: TrackerState {
                t: 0.0,
                current,
                steps: 0,
                trace: config.record_trace.then(Vec::new),
            },
        })
    }

    pub fn state(&self) -> &TrackerState {
        &self.state
    }

    pub fn into_state(self) -> TrackerState {
        self.state
    }

    pub fn finished(&self) -> bool {
        self.state.t >= self.path.arc
    }

    /// Advances by one homotopy step. Returns `false` once the end is reached.
    pub fn step(&mut self) -> Result<bool> {
        let s = &mut self.state;
        if s.t >= self.path.arc {
            return Ok(false);
        }
        if s.steps >= self.config.max_steps {
            return Err(Error::BudgetExceeded {
                max_steps: self.config.max_steps,
                t: s.t,
                arc: self.path.arc,
            });
        }
        let ill = |t| Error::PathIllPosed { t };
        let mu = condition_numbers(&s.current)?.mu;
        let b = self.config.constants.step_size(mu).map_err(|_| ill(s.t))?;
        if let Some(trace) = s.trace.as_mut() {
            trace.push(TraceRecord { t: s.t, b, mu });
        }
        let t_next = (s.t + b).min(self.path.arc);
        let moved = s.current.with_matrix(self.path.point(t_next));
        s.current = newton_step(&moved).map_err(|e| match e {
            Error::IllPosed => ill(t_next),
            other => other,
        })?;
        s.t = t_next;
        s.steps += 1;
        Ok(true)
    }
}

/// Follows the path from `(λ₀, v₀)` on `B_0` to `B_a`.
pub fn track(
    path: &GreatCirclePath,
    lambda0: c64,
    v0: &[c64],
    config: TrackConfig,
) -> Result<TrackerState> {
    let mut tracker = Tracker::new(path, lambda0, v0, config)?;
    while tracker.step()? {}
    Ok(tracker.into_state())
}

/// Moves a pair on `A/‖A‖_F` back to `A`: `(λ·‖A‖_F, v)`.
pub fn rescale_to_input(pair: &EigenTriple, a: &ComplexMatrix) -> EigenTriple {
    EigenTriple {
        a: a.clone(),
        lambda: pair.lambda * a.frobenius_norm(),
        v: pair.v.clone(),
    }
}

/// JSON lines, one `{"b","mu","t"}` record per step.
pub fn trace_to_jsonl(trace: &[TraceRecord]) -> String {
    let mut out = String::new();
    for r in trace {
        let value = serde_json::to_value(r).expect("trace records serialize");
        out.push_str(&value.to_string());
        out.push('\n');
    }
    out
}
