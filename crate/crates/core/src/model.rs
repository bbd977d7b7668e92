//! Domain types and geometry/workload primitives shared by every other module.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::{fnv1a64, stream_rng};
use crate::scalar::Scalar;

/// Identifier of an edge or flying node. Edge nodes occupy the low range,
/// flying nodes follow, so ascending-id iteration visits edges first.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct NodeId(pub u64);

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// Identifier of a task.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct TaskId(pub u64);

impl std::fmt::Display for TaskId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "t{}", self.0)
    }
}

/// Plan version number. Strictly increases on every re-plan.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct Epoch(pub u64);

impl Epoch {
    pub fn next(self) -> Epoch {
        Epoch(self.0 + 1)
    }
}

/// A point in the square service area `[0, L] x [0, L]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Position<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Position<S> {
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }

    /// Clamps both coordinates into `[0, world]`.
    pub fn clamped(self, world: S) -> Self {
        Self {
            x: self.x.max(S::zero()).min(world),
            y: self.y.max(S::zero()).min(world),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Euclidean distance between two positions.
pub fn distance<S: Scalar>(a: Position<S>, b: Position<S>) -> S {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    (dx * dx + dy * dy).sqrt()
}

/// Region that concentrates a fraction of the workload.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HotspotSpec<S> {
    pub center: Position<S>,
    pub radius: S,
    /// Fraction of task origins drawn inside the hotspot disk.
    pub proportion: S,
}

/// Which parts of the infrastructure participate in a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Environment {
    CpnOnly,
    LaeOnly,
    Integrated,
}

impl Environment {
    pub fn edges_active(self) -> bool {
        !matches!(self, Environment::LaeOnly)
    }

    pub fn flying_active(self) -> bool {
        !matches!(self, Environment::CpnOnly)
    }

    pub fn relays_allowed(self) -> bool {
        matches!(self, Environment::Integrated)
    }

    /// Stable label used in CSV output and logs.
    pub fn label(self) -> &'static str {
        match self {
            Environment::CpnOnly => "cpn_only",
            Environment::LaeOnly => "lae_only",
            Environment::Integrated => "integrated",
        }
    }
}

impl std::fmt::Display for Environment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Lifecycle of a task. Transitions are monotone: `Pending -> (Relaying ->)
/// Queued -> Running -> Succeeded`, or any non-terminal state to `Failed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskStatus {
    Pending,
    Relaying,
    Queued,
    Running,
    Succeeded,
    Failed,
}

impl TaskStatus {
    pub fn is_terminal(self) -> bool {
        matches!(self, TaskStatus::Succeeded | TaskStatus::Failed)
    }

    fn rank(self) -> u8 {
        match self {
            TaskStatus::Pending => 0,
            TaskStatus::Relaying => 1,
            TaskStatus::Queued => 2,
            TaskStatus::Running => 3,
            TaskStatus::Succeeded => 4,
            TaskStatus::Failed => 4,
        }
    }

    /// True when moving from `self` to `next` respects the monotone order.
    pub fn can_advance_to(self, next: TaskStatus) -> bool {
        if self.is_terminal() {
            return false;
        }
        match next {
            TaskStatus::Failed => true,
            TaskStatus::Queued => {
                // Relay hand-off may re-route a queued-but-unstarted task.
                matches!(
                    self,
                    TaskStatus::Pending | TaskStatus::Relaying | TaskStatus::Queued
                )
            }
            TaskStatus::Relaying => matches!(self, TaskStatus::Pending | TaskStatus::Queued),
            _ => next.rank() == self.rank() + 1,
        }
    }
}

/// A unit of service demand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Task<S> {
    pub id: TaskId,
    pub origin: Position<S>,
    /// Compute units required. Always > 0 at creation.
    pub demand: u64,
    pub arrival_tick: u64,
    /// Waiting-time threshold W: the task fails once it has waited more than
    /// this many ticks without starting service.
    pub deadline_wait: u64,
    pub status: TaskStatus,
}

impl<S: Scalar> Task<S> {
    pub fn new(id: TaskId, origin: Position<S>, demand: u64, arrival_tick: u64, w: u64) -> Self {
        debug_assert!(demand > 0);
        Self {
            id,
            origin,
            demand,
            arrival_tick,
            deadline_wait: w,
            status: TaskStatus::Pending,
        }
    }

    /// Advances the status, enforcing the monotone transition order.
    pub fn advance(&mut self, next: TaskStatus) -> Result<(), ModelError> {
        if !self.status.can_advance_to(next) {
            return Err(ModelError::IllegalStatusTransition {
                task: self.id,
                from: self.status,
                to: next,
            });
        }
        self.status = next;
        Ok(())
    }
}

/// Fixed ground node offering stable compute capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeNode<S> {
    pub id: NodeId,
    pos: Position<S>,
    /// Compute units served per tick.
    pub capacity: u64,
    pub coverage_radius: S,
    pub queue: VecDeque<TaskId>,
}

impl<S: Scalar> EdgeNode<S> {
    pub fn new(id: NodeId, pos: Position<S>, capacity: u64, coverage_radius: S) -> Self {
        debug_assert!(capacity > 0);
        Self {
            id,
            pos,
            capacity,
            coverage_radius,
            queue: VecDeque::new(),
        }
    }

    /// Position is fixed for the lifetime of the node.
    pub fn pos(&self) -> Position<S> {
        self.pos
    }

    pub fn covers(&self, p: Position<S>) -> bool {
        distance(self.pos, p) <= self.coverage_radius
    }
}

/// Mobile aerial node: sensor, relay, preprocessor, and weak compute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlyingNode<S> {
    pub id: NodeId,
    pub pos: Position<S>,
    /// Length units traveled per tick.
    pub speed: S,
    /// Compute units served per tick. Strictly below every edge capacity.
    pub capacity: u64,
    pub link_radius: S,
    pub waypoint: Option<Position<S>>,
    pub queue: VecDeque<TaskId>,
}

impl<S: Scalar> FlyingNode<S> {
    pub fn new(id: NodeId, pos: Position<S>, speed: S, capacity: u64, link_radius: S) -> Self {
        debug_assert!(capacity > 0);
        Self {
            id,
            pos,
            speed,
            capacity,
            link_radius,
            waypoint: None,
            queue: VecDeque::new(),
        }
    }

    pub fn in_link_range(&self, p: Position<S>) -> bool {
        distance(self.pos, p) <= self.link_radius
    }
}

/// How the task batch enters the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrivalMode {
    /// All K tasks arrive at tick 0.
    Batch,
    /// Bernoulli arrivals: `arrival_rate` expected tasks per tick until the
    /// batch size is exhausted or `arrival_duration` ticks have passed.
    Streaming,
}

/// Full description of a reproducible run.
///
/// Loaded from strict JSON: unknown fields are rejected. Fields carrying a
/// serde default are tuning knobs whose defaults match the reference setup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig<S: Scalar> {
    pub environment: Environment,
    /// Side length L of the square service area.
    pub world_size: S,
    pub edge_count: u32,
    /// Seed for the jittered edge grid; independent of `seed` so the fixed
    /// infrastructure stays put across ensemble members.
    pub layout_seed: u64,
    pub flying_count: u32,
    pub edge_capacity: u64,
    pub flying_capacity: u64,
    pub coverage_radius: S,
    pub link_radius: S,
    /// Waiting-time threshold W in ticks.
    pub deadline_wait: u64,
    /// Batch size K.
    pub task_batch_size: u32,
    pub hotspot: Option<HotspotSpec<S>>,
    /// Demand multiplier rho applied by relay preprocessing, in (0, 1].
    pub preprocessing_factor: S,
    /// Relay hop delay d_r in ticks.
    pub relay_hop_delay: u64,
    /// Master seed for workload and flying placement.
    pub seed: u64,

    #[serde(default = "defaults::flying_speed")]
    pub flying_speed: S,
    #[serde(default = "defaults::layout_jitter")]
    pub layout_jitter: S,
    #[serde(default = "defaults::demand_min")]
    pub demand_min: u64,
    #[serde(default = "defaults::demand_max")]
    pub demand_max: u64,
    #[serde(default = "defaults::reflection_window")]
    pub reflection_window: u32,
    #[serde(default = "defaults::deviation_factor_flying")]
    pub deviation_factor_flying: f64,
    #[serde(default = "defaults::deviation_factor_edge")]
    pub deviation_factor_edge: f64,
    #[serde(default = "defaults::deviation_cooldown")]
    pub deviation_cooldown: u64,
    #[serde(default = "defaults::hotspot_grid_size")]
    pub hotspot_grid_size: u32,
    #[serde(default = "defaults::hotspot_threshold")]
    pub hotspot_threshold: f64,
    #[serde(default = "defaults::hotspot_rate_floor")]
    pub hotspot_rate_floor: f64,
    #[serde(default = "defaults::grid_decay")]
    pub grid_decay: f64,
    #[serde(default = "defaults::replan_interval")]
    pub replan_interval: u64,
    #[serde(default = "defaults::message_delay")]
    pub message_delay: u64,
    #[serde(default = "defaults::report_interval")]
    pub report_interval: u64,
    #[serde(default = "defaults::elicitation_enabled")]
    pub elicitation_enabled: bool,
    #[serde(default = "defaults::arrival_mode")]
    pub arrival_mode: ArrivalMode,
    #[serde(default = "defaults::arrival_rate")]
    pub arrival_rate: f64,
    #[serde(default = "defaults::arrival_duration")]
    pub arrival_duration: u64,
    /// Non-termination guard: a run aborts after `horizon_factor * W` ticks.
    #[serde(default = "defaults::horizon_factor")]
    pub horizon_factor: u64,
    /// Scripted scenarios may pin node positions instead of sampling them.
    #[serde(default)]
    pub edge_positions: Option<Vec<Position<S>>>,
    #[serde(default)]
    pub flying_positions: Option<Vec<Position<S>>>,
}

mod defaults {
    use super::{ArrivalMode, Scalar};

    pub fn flying_speed<S: Scalar>() -> S {
        S::from_f64_lossy(4.0)
    }
    pub fn layout_jitter<S: Scalar>() -> S {
        S::from_f64_lossy(0.2)
    }
    pub fn demand_min() -> u64 {
        2
    }
    pub fn demand_max() -> u64 {
        8
    }
    pub fn reflection_window() -> u32 {
        5
    }
    pub fn deviation_factor_flying() -> f64 {
        2.0
    }
    pub fn deviation_factor_edge() -> f64 {
        1000.0
    }
    pub fn deviation_cooldown() -> u64 {
        10
    }
    pub fn hotspot_grid_size() -> u32 {
        10
    }
    pub fn hotspot_threshold() -> f64 {
        2.0
    }
    pub fn hotspot_rate_floor() -> f64 {
        1.0
    }
    pub fn grid_decay() -> f64 {
        0.9
    }
    pub fn replan_interval() -> u64 {
        10
    }
    pub fn message_delay() -> u64 {
        1
    }
    pub fn report_interval() -> u64 {
        1
    }
    pub fn elicitation_enabled() -> bool {
        true
    }
    pub fn arrival_mode() -> ArrivalMode {
        ArrivalMode::Batch
    }
    pub fn arrival_rate() -> f64 {
        8.0
    }
    pub fn arrival_duration() -> u64 {
        20
    }
    pub fn horizon_factor() -> u64 {
        10
    }
}

/// Errors raised by domain-type validation and node placement.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid config field {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error(
        "edge count {count} cannot tile the placement grid: \
         count must be divisible by ceil(sqrt(count)) = {divisor}"
    )]
    GridTiling { count: u32, divisor: u32 },

    #[error("task {task} cannot move from {from:?} to {to:?}")]
    IllegalStatusTransition {
        task: TaskId,
        from: TaskStatus,
        to: TaskStatus,
    },
}

impl<S: Scalar> ScenarioConfig<S> {
    /// Parses a strict JSON document into a validated config.
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let cfg: ScenarioConfig<S> =
            serde_json::from_str(text).map_err(|e| ModelError::InvalidConfig {
                field: "document",
                reason: e.to_string(),
            })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        serde_json::to_string_pretty(&value).expect("config serializes")
    }

    /// 64-bit hash of the canonical (sorted-key) JSON form.
    pub fn hash(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        let canonical = serde_json::to_string(&value).expect("config serializes");
        format!("{:016x}", fnv1a64(canonical.as_bytes()))
    }

    /// Simulation horizon used by the non-termination guard.
    pub fn horizon(&self) -> u64 {
        self.horizon_factor * self.deadline_wait.max(1)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        fn fail<S>(field: &'static str, reason: impl Into<String>) -> Result<(), ModelError> {
            let _ = std::marker::PhantomData::<S>;
            Err(ModelError::InvalidConfig {
                field,
                reason: reason.into(),
            })
        }

        let l = self.world_size;
        if !(l.is_finite() && l > S::zero()) {
            return fail::<S>("world_size", "must be finite and positive");
        }
        if self.edge_capacity == 0 {
            return fail::<S>("edge_capacity", "must be positive");
        }
        if self.flying_capacity == 0 {
            return fail::<S>("flying_capacity", "must be positive");
        }
        if self.edge_count > 0 && self.flying_count > 0 && self.flying_capacity >= self.edge_capacity
        {
            return fail::<S>(
                "flying_capacity",
                format!(
                    "flying capacity {} must be strictly below edge capacity {}",
                    self.flying_capacity, self.edge_capacity
                ),
            );
        }
        if !(self.coverage_radius > S::zero()) {
            return fail::<S>("coverage_radius", "must be positive");
        }
        if !(self.link_radius > S::zero()) {
            return fail::<S>("link_radius", "must be positive");
        }
        if !(self.flying_speed > S::zero()) {
            return fail::<S>("flying_speed", "must be positive");
        }
        if self.deadline_wait == 0 {
            return fail::<S>("deadline_wait", "must be at least 1 tick");
        }
        if self.task_batch_size == 0 {
            return fail::<S>("task_batch_size", "must be at least 1");
        }
        if self.demand_min == 0 || self.demand_min > self.demand_max {
            return fail::<S>("demand_min", "need 0 < demand_min <= demand_max");
        }
        let rho = self.preprocessing_factor;
        if !(rho > S::zero() && rho <= S::one()) {
            return fail::<S>("preprocessing_factor", "must lie in (0, 1]");
        }
        if let Some(h) = &self.hotspot {
            if !(h.radius > S::zero()) {
                return fail::<S>("hotspot.radius", "must be positive");
            }
            if !(h.proportion >= S::zero() && h.proportion <= S::one()) {
                return fail::<S>("hotspot.proportion", "must lie in [0, 1]");
            }
            if !h.center.is_finite()
                || h.center.x < S::zero()
                || h.center.x > l
                || h.center.y < S::zero()
                || h.center.y > l
            {
                return fail::<S>("hotspot.center", "must lie inside the world square");
            }
        }
        if !(self.layout_jitter >= S::zero() && self.layout_jitter < S::from_f64_lossy(0.5)) {
            return fail::<S>("layout_jitter", "must lie in [0, 0.5)");
        }
        if self.reflection_window == 0 {
            return fail::<S>("reflection_window", "must be at least 1");
        }
        if self.deviation_factor_flying <= 1.0 {
            return fail::<S>("deviation_factor_flying", "must exceed 1");
        }
        if self.deviation_factor_edge <= 1.0 {
            return fail::<S>("deviation_factor_edge", "must exceed 1");
        }
        if self.hotspot_grid_size == 0 {
            return fail::<S>("hotspot_grid_size", "must be at least 1");
        }
        if self.hotspot_threshold <= 1.0 {
            return fail::<S>("hotspot_threshold", "must exceed 1");
        }
        if self.hotspot_rate_floor < 0.0 {
            return fail::<S>("hotspot_rate_floor", "must be non-negative");
        }
        if !(self.grid_decay > 0.0 && self.grid_decay <= 1.0) {
            return fail::<S>("grid_decay", "must lie in (0, 1]");
        }
        if self.replan_interval == 0 {
            return fail::<S>("replan_interval", "must be at least 1");
        }
        if self.report_interval == 0 {
            return fail::<S>("report_interval", "must be at least 1");
        }
        if self.horizon_factor == 0 {
            return fail::<S>("horizon_factor", "must be at least 1");
        }
        if matches!(self.arrival_mode, ArrivalMode::Streaming)
            && (self.arrival_rate <= 0.0 || self.arrival_duration == 0)
        {
            return fail::<S>("arrival_rate", "streaming mode needs rate > 0 and duration >= 1");
        }
        if self.edge_count > 0 && self.edge_positions.is_none() {
            edge_grid_shape(self.edge_count)?;
        }
        if let Some(ps) = &self.edge_positions {
            if ps.len() != self.edge_count as usize {
                return fail::<S>("edge_positions", "length must equal edge_count");
            }
            if !ps.iter().all(|p| in_world(*p, l)) {
                return fail::<S>("edge_positions", "all positions must lie in the world square");
            }
        }
        if let Some(ps) = &self.flying_positions {
            if ps.len() != self.flying_count as usize {
                return fail::<S>("flying_positions", "length must equal flying_count");
            }
            if !ps.iter().all(|p| in_world(*p, l)) {
                return fail::<S>(
                    "flying_positions",
                    "all positions must lie in the world square",
                );
            }
        }
        Ok(())
    }
}

fn in_world<S: Scalar>(p: Position<S>, l: S) -> bool {
    p.is_finite() && p.x >= S::zero() && p.x <= l && p.y >= S::zero() && p.y <= l
}

/// Columns/rows of the edge placement grid for `count` nodes.
fn edge_grid_shape(count: u32) -> Result<(u32, u32), ModelError> {
    let cols = (count as f64).sqrt().ceil() as u32;
    if cols == 0 || count % cols != 0 {
        return Err(ModelError::GridTiling {
            count,
            divisor: cols.max(1),
        });
    }
    Ok((cols, count / cols))
}

/// Draws one task origin: with probability `proportion` uniform inside the
/// hotspot disk (rejection-sampled, clamped to the square), otherwise uniform
/// over the whole square.
///
/// One mixture draw is consumed whether or not a hotspot is present, so a
/// zero-proportion hotspot yields the same stream as no hotspot at all.
pub fn sample_origin<S: Scalar, R: Rng>(
    rng: &mut R,
    hotspot: Option<&HotspotSpec<S>>,
    world: S,
) -> Position<S> {
    let mix: S = rng.gen_range(S::zero()..S::one());
    if let Some(h) = hotspot {
        if mix < h.proportion {
            loop {
                let x = rng.gen_range(h.center.x - h.radius..h.center.x + h.radius);
                let y = rng.gen_range(h.center.y - h.radius..h.center.y + h.radius);
                let p = Position::new(x, y);
                if distance(p, h.center) <= h.radius {
                    return p.clamped(world);
                }
            }
        }
    }
    Position::new(
        rng.gen_range(S::zero()..world),
        rng.gen_range(S::zero()..world),
    )
}

/// Places edge nodes on a jittered uniform grid (from `layout_seed`) and
/// flying nodes uniformly at random (from the master `seed`).
///
/// Explicit position overrides in the config win over sampling.
pub fn place_nodes<S: Scalar>(
    config: &ScenarioConfig<S>,
) -> Result<(Vec<EdgeNode<S>>, Vec<FlyingNode<S>>), ModelError> {
    config.validate()?;
    let l = config.world_size;

    let edge_positions: Vec<Position<S>> = if let Some(ps) = &config.edge_positions {
        ps.clone()
    } else if config.edge_count == 0 {
        Vec::new()
    } else {
        let (cols, rows) = edge_grid_shape(config.edge_count)?;
        let mut rng = stream_rng(config.layout_seed, "edge_layout");
        let cell_w = l / S::from_u32(cols).unwrap();
        let cell_h = l / S::from_u32(rows).unwrap();
        let half = S::from_f64_lossy(0.5);
        let mut out = Vec::with_capacity(config.edge_count as usize);
        for row in 0..rows {
            for col in 0..cols {
                let cx = (S::from_u32(col).unwrap() + half) * cell_w;
                let cy = (S::from_u32(row).unwrap() + half) * cell_h;
                let jx = jitter(&mut rng, config.layout_jitter * cell_w);
                let jy = jitter(&mut rng, config.layout_jitter * cell_h);
                out.push(Position::new(cx + jx, cy + jy).clamped(l));
            }
        }
        out
    };

    let flying_positions: Vec<Position<S>> = if let Some(ps) = &config.flying_positions {
        ps.clone()
    } else {
        let mut rng = stream_rng(config.seed, "flying_layout");
        (0..config.flying_count)
            .map(|_| {
                Position::new(
                    rng.gen_range(S::zero()..l),
                    rng.gen_range(S::zero()..l),
                )
            })
            .collect()
    };

    let edges = edge_positions
        .into_iter()
        .enumerate()
        .map(|(i, pos)| {
            EdgeNode::new(
                NodeId(i as u64),
                pos,
                config.edge_capacity,
                config.coverage_radius,
            )
        })
        .collect();
    let base = config.edge_count as u64;
    let flying = flying_positions
        .into_iter()
        .enumerate()
        .map(|(i, pos)| {
            FlyingNode::new(
                NodeId(base + i as u64),
                pos,
                config.flying_speed,
                config.flying_capacity,
                config.link_radius,
            )
        })
        .collect();
    Ok((edges, flying))
}

fn jitter<S: Scalar, R: Rng>(rng: &mut R, amplitude: S) -> S {
    if amplitude <= S::zero() {
        S::zero()
    } else {
        rng.gen_range(-amplitude..amplitude)
    }
}

/// Draws a task demand uniformly from the configured integer range.
pub fn sample_demand<R: Rng>(rng: &mut R, min: u64, max: u64) -> u64 {
    rng.gen_range(min..=max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn test_config(edge_count: u32) -> ScenarioConfig<f64> {
        let text = format!(
            r#"{{
                "environment": "integrated",
                "world_size": 100.0,
                "edge_count": {edge_count},
                "layout_seed": 7,
                "flying_count": 20,
                "edge_capacity": 4,
                "flying_capacity": 1,
                "coverage_radius": 15.0,
                "link_radius": 20.0,
                "deadline_wait": 25,
                "task_batch_size": 160,
                "hotspot": null,
                "preprocessing_factor": 0.5,
                "relay_hop_delay": 2,
                "seed": 1
            }}"#
        );
        ScenarioConfig::from_json(&text).expect("valid config")
    }

    #[test]
    fn distance_examples() {
        let z = Position::new(0.0, 0.0);
        assert_eq!(distance(z, z), 0.0);
        assert_eq!(distance(z, Position::new(3.0, 4.0)), 5.0);
        assert_eq!(
            distance(Position::new(1.0, 1.0), Position::new(4.0, 5.0)),
            5.0
        );
    }

    #[test]
    fn distance_works_in_f32_too() {
        let a = Position::new(0.0f32, 0.0);
        let b = Position::new(3.0f32, 4.0);
        assert_eq!(distance(a, b), 5.0f32);
    }

    #[test]
    fn uniform_origin_mean_is_centered() {
        let cfg = test_config(20);
        let mut rng = stream_rng(cfg.seed, "workload");
        let n = 100_000;
        let (mut sx, mut sy) = (0.0, 0.0);
        for _ in 0..n {
            let p = sample_origin::<f64, _>(&mut rng, None, 100.0);
            assert!(in_world(p, 100.0));
            sx += p.x;
            sy += p.y;
        }
        let (mx, my) = (sx / n as f64, sy / n as f64);
        assert!((mx - 50.0).abs() < 0.5, "mean x {mx}");
        assert!((my - 50.0).abs() < 0.5, "mean y {my}");
    }

    #[test]
    fn zero_proportion_hotspot_matches_uniform_stream() {
        let hotspot = HotspotSpec {
            center: Position::new(10.0, 10.0),
            radius: 2.0,
            proportion: 0.0,
        };
        let mut a = stream_rng(99, "workload");
        let mut b = stream_rng(99, "workload");
        for _ in 0..1000 {
            let pa = sample_origin(&mut a, None, 100.0);
            let pb = sample_origin(&mut b, Some(&hotspot), 100.0);
            assert_eq!(pa, pb);
        }
    }

    #[test]
    fn full_proportion_hotspot_stays_in_disk() {
        let hotspot = HotspotSpec {
            center: Position::new(10.0, 10.0),
            radius: 2.0,
            proportion: 1.0,
        };
        let mut rng = stream_rng(3, "workload");
        for _ in 0..1000 {
            let p = sample_origin(&mut rng, Some(&hotspot), 100.0);
            assert!(distance(p, hotspot.center) <= 2.0);
        }
    }

    #[test]
    fn mixture_fraction_matches_closed_form() {
        // Disk fully inside the square, so the inside-probability is exactly
        // alpha + (1 - alpha) * pi r^2 / L^2.
        let hotspot = HotspotSpec {
            center: Position::new(40.0, 50.0),
            radius: 12.0,
            proportion: 0.4,
        };
        let l = 100.0;
        let n = 100_000;
        let mut rng = stream_rng(17, "workload");
        let mut inside = 0u32;
        for _ in 0..n {
            let p = sample_origin(&mut rng, Some(&hotspot), l);
            if distance(p, hotspot.center) <= hotspot.radius {
                inside += 1;
            }
        }
        let disk = std::f64::consts::PI * hotspot.radius * hotspot.radius;
        let expected = 0.4 + 0.6 * disk / (l * l);
        let observed = inside as f64 / n as f64;
        let stderr = (expected * (1.0 - expected) / n as f64).sqrt();
        assert!(
            (observed - expected).abs() <= 3.0 * stderr,
            "observed {observed}, expected {expected}, stderr {stderr}"
        );
    }

    #[test]
    fn place_twenty_edges_on_grid() {
        let cfg = test_config(20);
        let (edges, flying) = place_nodes(&cfg).unwrap();
        assert_eq!(edges.len(), 20);
        assert_eq!(flying.len(), 20);
        for (i, a) in edges.iter().enumerate() {
            for b in edges.iter().skip(i + 1) {
                assert!(distance(a.pos(), b.pos()) > 1e-9, "positions must differ");
            }
        }
        // Flying ids continue after edge ids.
        assert_eq!(edges[0].id, NodeId(0));
        assert_eq!(flying[0].id, NodeId(20));
    }

    #[test]
    fn single_node_sits_at_cell_center() {
        let mut cfg = test_config(1);
        cfg.layout_jitter = 0.0;
        let (edges, _) = place_nodes(&cfg).unwrap();
        assert_eq!(edges.len(), 1);
        assert_eq!(edges[0].pos(), Position::new(50.0, 50.0));
    }

    #[test]
    fn placement_is_deterministic() {
        let cfg = test_config(20);
        let a = place_nodes(&cfg).unwrap();
        let b = place_nodes(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn grid_rejects_untileable_counts() {
        let mut cfg = test_config(20);
        cfg.edge_count = 8;
        let err = place_nodes(&cfg).unwrap_err();
        match err {
            ModelError::GridTiling { count, divisor } => {
                assert_eq!(count, 8);
                assert_eq!(divisor, 3);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn flying_capacity_must_stay_below_edge_capacity() {
        let mut cfg = test_config(20);
        cfg.flying_capacity = 4;
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("flying capacity"));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"environment": "cpn_only", "bogus": 1}"#;
        assert!(ScenarioConfig::<f64>::from_json(text).is_err());
    }

    #[test]
    fn status_transitions_are_monotone() {
        let mut t = Task::new(TaskId(1), Position::new(0.0, 0.0), 4, 0, 25);
        t.advance(TaskStatus::Queued).unwrap();
        t.advance(TaskStatus::Running).unwrap();
        assert!(t.advance(TaskStatus::Queued).is_err());
        t.advance(TaskStatus::Succeeded).unwrap();
        assert!(t.advance(TaskStatus::Failed).is_err());
    }

    proptest! {
        #[test]
        fn triangle_inequality(
            ax in 0.0..100.0f64, ay in 0.0..100.0f64,
            bx in 0.0..100.0f64, by in 0.0..100.0f64,
            cx in 0.0..100.0f64, cy in 0.0..100.0f64,
        ) {
            let a = Position::new(ax, ay);
            let b = Position::new(bx, by);
            let c = Position::new(cx, cy);
            prop_assert!(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9);
            prop_assert!((distance(a, b) - distance(b, a)).abs() < 1e-12);
        }
    }
}
