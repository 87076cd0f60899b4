//! Cascaded tracking and jamming control.
//!
//! Each agent first keeps only the mobility actions whose detection
//! probability at the predicted target exceeds a threshold, then chooses one
//! (action, power level) pair that maximizes power delivered to the predicted
//! target while keeping the aggregate interference at itself and at every
//! already-decided teammate below `Delta`. Agents decide one after another in
//! ascending id order, each seeing all earlier decisions.

use nalgebra::Vector3;

use crate::dynamics::TargetState;
use crate::geometry_rf::{aggregate_power_db, db_to_linear, linear_to_db, AntennaParams, RfParams, Transmitter};
use crate::sensing::SensingParams;

/// Degraded modes of the jamming controller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fallback {
    None,
    /// No candidate was interference-feasible at its own position; the
    /// best-tracking candidate was taken with the antenna off.
    Tracking,
    /// No feasible pair with the antenna on; antenna switched off.
    PowerOff,
}

impl Fallback {
    pub fn as_str(&self) -> &'static str {
        match self {
            Fallback::None => "none",
            Fallback::Tracking => "tracking_fallback",
            Fallback::PowerOff => "power_off_fallback",
        }
    }

    pub fn is_fallback(&self) -> bool {
        *self != Fallback::None
    }
}

/// One agent's decision for one step.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionRecord {
    pub agent_id: usize,
    pub chosen_position: Vector3<f64>,
    /// Index into the power levels, 0 = off.
    pub power_index: usize,
    /// Point the antenna is steered at (the agent's own predicted target).
    pub aim_point: Vector3<f64>,
    /// Predicted received power at the aim point, if any.
    pub objective_value_db: Option<f64>,
    pub fallback_used: Fallback,
    /// The thresholded action set was empty and the best-tracking action
    /// was substituted before solving.
    pub empty_admissible_set: bool,
}

impl DecisionRecord {
    pub fn transmitter(&self, rf: &RfParams) -> Transmitter {
        Transmitter {
            position: self.chosen_position,
            aim: self.aim_point,
            power_db: rf.power_levels.level_db(self.power_index),
        }
    }
}

/// Detection probability of the predicted target from a candidate position.
pub fn tracking_objective(predicted: &TargetState, candidate: &Vector3<f64>, p: &SensingParams) -> f64 {
    p.detection_prob(&predicted.position, candidate)
}

/// Actions whose tracking objective strictly exceeds `threshold`, in input
/// order.
pub fn admissible_set(
    predicted: &TargetState,
    actions: &[Vector3<f64>],
    p: &SensingParams,
    threshold: f64,
) -> Vec<Vector3<f64>> {
    actions
        .iter()
        .filter(|a| tracking_objective(predicted, a, p) > threshold)
        .copied()
        .collect()
}

/// Index of the first action with maximal tracking objective.
pub fn best_tracking_index(predicted: &TargetState, actions: &[Vector3<f64>], p: &SensingParams) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, a) in actions.iter().enumerate() {
        let v = tracking_objective(predicted, a, p);
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

fn below_threshold(linear: f64, rf: &RfParams) -> bool {
    linear == 0.0 || linear_to_db(linear) < rf.interference_threshold_db
}

fn linear_or_zero(db: Option<f64>) -> f64 {
    db.map_or(0.0, db_to_linear)
}

/// Solves the single-agent selection problem against the already-decided
/// agents. `candidates` must be nonempty.
pub fn solve_p1(
    agent_id: usize,
    candidates: &[Vector3<f64>],
    predicted: &TargetState,
    decided: &[DecisionRecord],
    ant: &AntennaParams,
    rf: &RfParams,
    sensing: &SensingParams,
) -> DecisionRecord {
    assert!(!candidates.is_empty(), "solve_p1 needs at least one candidate");
    let aim = predicted.position;
    let others: Vec<Transmitter> = decided.iter().map(|d| d.transmitter(rf)).collect();

    // interference already reaching each decided agent from the other decided agents
    let baseline: Vec<f64> = decided
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            others
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != i)
                .map(|(_, tx)| linear_or_zero(tx.power_at(&rec.chosen_position, ant, rf)))
                .sum()
        })
        .collect();

    let own_ok: Vec<bool> = candidates
        .iter()
        .map(|c| {
            let received: f64 = others.iter().map(|tx| linear_or_zero(tx.power_at(c, ant, rf))).sum();
            below_threshold(received, rf)
        })
        .collect();

    let record = |k: usize, power_index: usize, objective: Option<f64>, fallback: Fallback| DecisionRecord {
        agent_id,
        chosen_position: candidates[k],
        power_index,
        aim_point: aim,
        objective_value_db: objective,
        fallback_used: fallback,
        empty_admissible_set: false,
    };

    // (objective, power index, candidate index); None objective ranks lowest
    let mut best: Option<(Option<f64>, usize, usize)> = None;
    let mut any_on = false;
    for power_index in 0..rf.power_levels.count() {
        let power_db = rf.power_levels.level_db(power_index);
        for (k, c) in candidates.iter().enumerate() {
            if !own_ok[k] {
                continue;
            }
            let me = Transmitter {
                position: *c,
                aim,
                power_db,
            };
            let protects_others = decided.iter().zip(&baseline).all(|(rec, base)| {
                below_threshold(base + linear_or_zero(me.power_at(&rec.chosen_position, ant, rf)), rf)
            });
            if !protects_others {
                continue;
            }
            any_on |= power_index > 0;
            let objective = me.power_at(&aim, ant, rf);
            let better = match best {
                None => true,
                Some((b, _, _)) => objective > b,
            };
            if better {
                best = Some((objective, power_index, k));
            }
        }
    }

    if any_on {
        let (objective, power_index, k) = best.expect("a feasible pair exists");
        return record(k, power_index, objective, Fallback::None);
    }

    let feasible_positions: Vec<usize> = (0..candidates.len()).filter(|k| own_ok[*k]).collect();
    if !feasible_positions.is_empty() {
        let subset: Vec<Vector3<f64>> = feasible_positions.iter().map(|k| candidates[*k]).collect();
        let k = feasible_positions[best_tracking_index(predicted, &subset, sensing).expect("nonempty")];
        return record(k, 0, None, Fallback::PowerOff);
    }
    let k = best_tracking_index(predicted, candidates, sensing).expect("nonempty");
    record(k, 0, None, Fallback::Tracking)
}

/// Inputs of one agent for one decision round.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentContext {
    pub id: usize,
    /// Predicted target state from the agent's own filter.
    pub predicted: TargetState,
    /// Full mobility action set from the current position.
    pub actions: Vec<Vector3<f64>>,
}

/// Sequential decisions, agents processed in the given order.
pub fn sequential_decide(
    agents: &[AgentContext],
    ant: &AntennaParams,
    rf: &RfParams,
    sensing: &SensingParams,
    threshold: f64,
) -> Vec<DecisionRecord> {
    let mut decided: Vec<DecisionRecord> = Vec::with_capacity(agents.len());
    for agent in agents {
        let mut candidates = admissible_set(&agent.predicted, &agent.actions, sensing, threshold);
        let empty = candidates.is_empty();
        if empty {
            let best =
                best_tracking_index(&agent.predicted, &agent.actions, sensing).expect("action set is never empty");
            candidates = vec![agent.actions[best]];
        }
        let mut rec = solve_p1(agent.id, &candidates, &agent.predicted, &decided, ant, rf, sensing);
        rec.empty_admissible_set = empty;
        decided.push(rec);
    }
    decided
}

/// Tracking-only baseline: each agent independently takes its best-tracking
/// action and transmits at a fixed level, ignoring interference.
pub fn ct_decide(agents: &[AgentContext], sensing: &SensingParams, ct_power_index: usize) -> Vec<DecisionRecord> {
    agents
        .iter()
        .map(|agent| {
            let k = best_tracking_index(&agent.predicted, &agent.actions, sensing).expect("action set is never empty");
            DecisionRecord {
                agent_id: agent.id,
                chosen_position: agent.actions[k],
                power_index: ct_power_index,
                aim_point: agent.predicted.position,
                objective_value_db: None,
                fallback_used: Fallback::None,
                empty_admissible_set: false,
            }
        })
        .collect()
}

/// Aggregate interference received by each decided agent from all others.
pub fn received_interference(decisions: &[DecisionRecord], ant: &AntennaParams, rf: &RfParams) -> Vec<Option<f64>> {
    decisions
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            aggregate_power_db(
                decisions
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .filter_map(|(_, other)| other.transmitter(rf).power_at(&rec.chosen_position, ant, rf)),
            )
        })
        .collect()
}
