//! Browser bindings: a jammer's power footprint, a scan likelihood surface
//! and a full closed-loop run, each sampled for drawing on a canvas.

use cstj_core::estimation::ScanLikelihood;
use cstj_core::geometry_rf::received_power_db;
use cstj_core::sim::{run_trial, Mode, ScenarioConfig};
use cstj_core::{AntennaParams, RfParams, SensingParams};
use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn point(v: &[f64]) -> Result<Vector3<f64>, JsValue> {
    match v {
        [x, y, z] => Ok(Vector3::new(*x, *y, *z)),
        _ => Err(JsValue::from_str("expected a point of three coordinates")),
    }
}

/// Centres of an `n` x `n` grid over a square of side `extent` centred on
/// `center`, in the horizontal plane through it, row-major with y outermost.
fn grid(center: &Vector3<f64>, extent: f64, n: usize) -> impl Iterator<Item = Vector3<f64>> + '_ {
    let cell = extent / n as f64;
    (0..n).flat_map(move |j| {
        (0..n).map(move |i| {
            center
                + Vector3::new(
                    (i as f64 + 0.5) * cell - extent / 2.0,
                    (j as f64 + 0.5) * cell - extent / 2.0,
                    0.0,
                )
        })
    })
}

/// Received power (dB) of one jammer at `transmitter` aimed at `aim`, over a
/// horizontal slice through the transmitter. Cells the beam misses are NaN.
#[wasm_bindgen]
pub fn power_field(
    transmitter: &[f64],
    aim: &[f64],
    power_db: f64,
    opening_angle_deg: f64,
    extent_m: f64,
    n: usize,
) -> Result<Vec<f64>, JsValue> {
    let (tx, aim) = (point(transmitter)?, point(aim)?);
    let ant = AntennaParams::new(
        AntennaParams::default().effective_range_m,
        opening_angle_deg.to_radians(),
    )
    .map_err(|e| JsValue::from_str(&e.to_string()))?;
    let rf = RfParams::default();
    Ok(grid(&tx, extent_m, n)
        .map(|p| received_power_db(Some(power_db), &tx, &aim, &ant, &rf, &p).unwrap_or(f64::NAN))
        .collect())
}

/// Draws one scan of a target seen from `sensor` and returns the scan
/// (cartesian points) with its log-likelihood over a horizontal slice
/// through the target, as JSON.
#[wasm_bindgen]
pub fn likelihood_slice(
    target: &[f64],
    sensor: &[f64],
    clutter_rate: f64,
    seed: u64,
    extent_m: f64,
    n: usize,
) -> Result<String, JsValue> {
    let (target, sensor) = (point(target)?, point(sensor)?);
    let params = SensingParams {
        clutter_rate,
        ..SensingParams::default()
    };
    params.validate().map_err(|e| JsValue::from_str(&e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scan = params.collect(&target, &sensor, &mut rng);
    let lik = ScanLikelihood::new(&scan, sensor, &params);
    let values: Vec<f64> = grid(&target, extent_m, n).map(|p| lik.log_eval(&p)).collect();
    let points: Vec<[f64; 3]> = scan
        .iter()
        .map(|m| {
            let p = sensor + m.to_cartesian();
            [p.x, p.y, p.z]
        })
        .collect();
    Ok(json!({ "n": n, "extent_m": extent_m, "log_likelihood": values, "scan": points }).to_string())
}

/// Runs one trial and returns truth, fused estimate and agent tracks as JSON.
#[wasm_bindgen]
pub fn run_scenario(mode: &str, agents: usize, steps: usize, particles: usize, seed: u64) -> Result<String, JsValue> {
    let cfg = ScenarioConfig {
        mode: mode.parse::<Mode>().map_err(|e| JsValue::from_str(&e.to_string()))?,
        n_agents: agents,
        n_steps: steps,
        n_particles: particles,
        seed,
        ..ScenarioConfig::default()
    };
    let trial = run_trial(&cfg).map_err(|e| JsValue::from_str(&e.to_string()))?;
    let xyz = |v: &Vector3<f64>| [v.x, v.y, v.z];
    let steps: Vec<_> = trial
        .iter()
        .map(|s| {
            json!({
                "truth": xyz(&s.truth.position),
                "estimate": xyz(&s.fused.mean.position),
                "error_m": s.tracking_error_m,
                "target_power_db": s.target_power_db,
                "max_interference_db": s.max_interference_db,
                "agents": s.agents.iter().map(|a| json!({
                    "position": xyz(&a.decision.chosen_position),
                    "power_index": a.decision.power_index,
                    "fallback": a.decision.fallback_used.as_str(),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "arena": [xyz(&cfg.arena_min), xyz(&cfg.arena_max)],
        "threshold_db": cfg.rf.interference_threshold_db,
        "steps": steps,
    })
    .to_string())
}
