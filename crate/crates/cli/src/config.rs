//! Flat key-value scenario files.
//!
//! Keys are dotted (`sensing.lambda_c`), either written literally or grouped
//! under `[section]` headers. Units are fixed per key: meters, seconds,
//! radians and dB, except `antenna.opening_angle_deg` which is converted at
//! parse time. Missing keys take their defaults.

use std::collections::BTreeMap;
use std::path::Path;

use cstj_core::dynamics::MotionModel;
use cstj_core::sim::{ConfigError as CoreConfigError, Mode, ScenarioConfig};
use cstj_core::{ActionGrid, AntennaParams, PowerLevels};
use nalgebra::{Matrix3, Vector3};
use toml::{Table, Value};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed config: {0}")]
    Syntax(String),
    #[error("unknown config keys: {}", .0.join(", "))]
    UnknownKeys(Vec<String>),
    #[error("{key}: {message}")]
    Type { key: String, message: String },
    #[error("out of range: {0}")]
    Range(String),
}

impl From<CoreConfigError> for ConfigError {
    fn from(e: CoreConfigError) -> Self {
        ConfigError::Range(e.to_string())
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub mode: Option<Mode>,
    pub agents: Option<usize>,
    pub steps: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ScenarioConfig) {
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.trials {
            cfg.n_trials = v;
        }
        if let Some(v) = self.mode {
            cfg.mode = v;
        }
        if let Some(v) = self.agents {
            cfg.n_agents = v;
        }
        if let Some(v) = self.steps {
            cfg.n_steps = v;
        }
    }
}

/// Every accepted key with a one-line description, in echo order.
pub const KEYS: &[(&str, &str)] = &[
    ("scenario.mode", "\"cstj\" or \"ct\""),
    ("scenario.seed", "master seed, 0..=2^63-1"),
    ("scenario.agents", "team size"),
    ("scenario.steps", "time steps per trial"),
    ("scenario.trials", "Monte-Carlo trials"),
    (
        "scenario.arena_min",
        "[x, y, z] lower corner of the surveillance area, m",
    ),
    (
        "scenario.arena_max",
        "[x, y, z] upper corner of the surveillance area, m",
    ),
    (
        "scenario.spawn_radius_m",
        "agents spawn within this radius of the target, m",
    ),
    ("target.position", "\"random\" or [x, y, z], m"),
    ("target.velocity", "\"random\" or [vx, vy, vz], m/s"),
    (
        "target.random_speed_mps",
        "random velocity components are uniform in [-v, v], m/s",
    ),
    ("target.prior_position_std_m", "initial estimate position deviation, m"),
    (
        "target.prior_velocity_std_mps",
        "initial estimate velocity deviation, m/s",
    ),
    ("motion.dt_s", "sampling period, s"),
    ("motion.accel_noise_cov", "3x3 acceleration noise covariance, (m/s^2)^2"),
    ("actions.radial_steps_m", "radial step sizes, m"),
    ("actions.n_phi", "polar resolution"),
    ("actions.n_theta", "azimuthal resolution"),
    ("sensing.p_d_max", "peak detection probability"),
    ("sensing.eta_per_m", "detection probability decay, 1/m"),
    ("sensing.r0_m", "full-detection radius, m"),
    ("sensing.sigma_theta_rad", "azimuth noise, rad"),
    ("sensing.sigma_phi_rad", "inclination noise, rad"),
    ("sensing.sigma_rho0_m", "range noise floor, m"),
    ("sensing.beta_rho", "range noise growth per meter"),
    ("sensing.lambda_c", "mean clutter returns per scan"),
    ("sensing.range_max_m", "maximum measurable range, m"),
    ("antenna.effective_range_m", "cone height, m"),
    ("antenna.opening_angle_rad", "full cone opening angle, rad"),
    (
        "antenna.opening_angle_deg",
        "full cone opening angle, degrees (alternative)",
    ),
    ("rf.near_field_loss_db", "near-field loss, dB"),
    ("rf.path_loss_exponent", "path-loss exponent"),
    ("rf.attenuation_db", "attenuation, dB"),
    ("rf.power_levels_db", "[\"off\", increasing levels in dB...]"),
    ("rf.interference_threshold_db", "maximum tolerated interference, dB"),
    (
        "control.tracking_threshold",
        "minimum detection probability for jamming actions",
    ),
    (
        "control.ct_power_db",
        "constant level of the tracking-only baseline, dB",
    ),
    ("filter.particles", "particles per agent"),
];

fn flatten(prefix: &str, table: &Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

struct Reader {
    values: BTreeMap<String, Value>,
}

impl Reader {
    fn type_err(key: &str, message: &str) -> ConfigError {
        ConfigError::Type {
            key: key.to_string(),
            message: message.to_string(),
        }
    }

    fn float_of(key: &str, v: &Value) -> Result<f64, ConfigError> {
        match v {
            Value::Float(f) => Ok(*f),
            Value::Integer(i) => Ok(*i as f64),
            _ => Err(Self::type_err(key, "expected a number")),
        }
    }

    fn float(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.values.get(key).map(|v| Self::float_of(key, v)).transpose()
    }

    fn int(&self, key: &str) -> Result<Option<i64>, ConfigError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) => Ok(Some(*i)),
            Some(_) => Err(Self::type_err(key, "expected an integer")),
        }
    }

    fn count(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        self.int(key)?
            .map(|i| usize::try_from(i).map_err(|_| ConfigError::Range(format!("{key} must be >= 0"))))
            .transpose()
    }

    fn floats(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| Self::float_of(key, v))
                .collect::<Result<_, _>>()
                .map(Some),
            Some(_) => Err(Self::type_err(key, "expected an array of numbers")),
        }
    }

    fn vec3(&self, key: &str) -> Result<Option<Vector3<f64>>, ConfigError> {
        self.floats(key)?
            .map(|v| {
                if v.len() == 3 {
                    Ok(Vector3::new(v[0], v[1], v[2]))
                } else {
                    Err(Self::type_err(key, "expected three numbers"))
                }
            })
            .transpose()
    }

    /// `Some(None)` for "random", `Some(Some(v))` for a vector.
    fn random_or_vec3(&self, key: &str) -> Result<Option<Option<Vector3<f64>>>, ConfigError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::String(s)) if s == "random" => Ok(Some(None)),
            Some(Value::Array(_)) => Ok(Some(self.vec3(key)?)),
            Some(_) => Err(Self::type_err(key, "expected \"random\" or [x, y, z]")),
        }
    }

    fn string(&self, key: &str) -> Result<Option<&str>, ConfigError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(_) => Err(Self::type_err(key, "expected a string")),
        }
    }
}

/// Parses a config document on top of the defaults, then applies overrides
/// and validates the result.
pub fn parse_config(text: &str, overrides: &Overrides) -> Result<ScenarioConfig, ConfigError> {
    let table: Table = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    let mut values = BTreeMap::new();
    flatten("", &table, &mut values);
    let unknown: Vec<String> = values
        .keys()
        .filter(|k| !KEYS.iter().any(|(known, _)| known == k))
        .cloned()
        .collect();
    if !unknown.is_empty() {
        return Err(ConfigError::UnknownKeys(unknown));
    }
    let r = Reader { values };
    let mut cfg = ScenarioConfig::default();

    if let Some(m) = r.string("scenario.mode")? {
        cfg.mode = m
            .parse()
            .map_err(|e: CoreConfigError| Reader::type_err("scenario.mode", &e.to_string()))?;
    }
    if let Some(s) = r.int("scenario.seed")? {
        cfg.seed = u64::try_from(s).map_err(|_| ConfigError::Range("scenario.seed must be >= 0".into()))?;
    }
    if let Some(v) = r.count("scenario.agents")? {
        cfg.n_agents = v;
    }
    if let Some(v) = r.count("scenario.steps")? {
        cfg.n_steps = v;
    }
    if let Some(v) = r.count("scenario.trials")? {
        cfg.n_trials = v;
    }
    if let Some(v) = r.vec3("scenario.arena_min")? {
        cfg.arena_min = v;
    }
    if let Some(v) = r.vec3("scenario.arena_max")? {
        cfg.arena_max = v;
    }
    if let Some(v) = r.float("scenario.spawn_radius_m")? {
        cfg.spawn_radius_m = v;
    }
    if let Some(v) = r.random_or_vec3("target.position")? {
        cfg.target_position = v;
    }
    if let Some(v) = r.random_or_vec3("target.velocity")? {
        cfg.target_velocity = v;
    }
    if let Some(v) = r.float("target.random_speed_mps")? {
        cfg.random_speed_mps = v;
    }
    if let Some(v) = r.float("target.prior_position_std_m")? {
        cfg.prior_position_std_m = v;
    }
    if let Some(v) = r.float("target.prior_velocity_std_mps")? {
        cfg.prior_velocity_std_mps = v;
    }

    let dt = r.float("motion.dt_s")?.unwrap_or(cfg.motion.dt());
    let cov = match r.values.get("motion.accel_noise_cov") {
        None => *cfg.motion.accel_noise_cov(),
        Some(Value::Array(rows)) if rows.len() == 3 => {
            let mut m = Matrix3::zeros();
            for (i, row) in rows.iter().enumerate() {
                let Value::Array(row) = row else {
                    return Err(Reader::type_err("motion.accel_noise_cov", "expected a 3x3 array"));
                };
                if row.len() != 3 {
                    return Err(Reader::type_err("motion.accel_noise_cov", "expected a 3x3 array"));
                }
                for (j, v) in row.iter().enumerate() {
                    m[(i, j)] = Reader::float_of("motion.accel_noise_cov", v)?;
                }
            }
            m
        }
        Some(_) => return Err(Reader::type_err("motion.accel_noise_cov", "expected a 3x3 array")),
    };
    cfg.motion = MotionModel::new(dt, cov).map_err(|e| ConfigError::Range(format!("motion: {e}")))?;

    let radial = r
        .floats("actions.radial_steps_m")?
        .unwrap_or(cfg.actions.radial_steps_m.clone());
    let count_u32 = |key: &str, default: u32| -> Result<u32, ConfigError> {
        r.int(key)?
            .map(|v| u32::try_from(v).map_err(|_| ConfigError::Range(format!("{key} must be >= 1"))))
            .transpose()
            .map(|v| v.unwrap_or(default))
    };
    let n_phi = count_u32("actions.n_phi", cfg.actions.n_phi)?;
    let n_theta = count_u32("actions.n_theta", cfg.actions.n_theta)?;
    cfg.actions = ActionGrid::new(radial, n_phi, n_theta).map_err(|e| ConfigError::Range(format!("actions: {e}")))?;

    let s = &mut cfg.sensing;
    for (key, slot) in [
        ("sensing.p_d_max", &mut s.p_d_max),
        ("sensing.eta_per_m", &mut s.eta_per_m),
        ("sensing.r0_m", &mut s.r0_m),
        ("sensing.sigma_theta_rad", &mut s.sigma_theta_rad),
        ("sensing.sigma_phi_rad", &mut s.sigma_phi_rad),
        ("sensing.sigma_rho0_m", &mut s.sigma_rho0_m),
        ("sensing.beta_rho", &mut s.beta_rho),
        ("sensing.lambda_c", &mut s.clutter_rate),
        ("sensing.range_max_m", &mut s.range_max_m),
    ] {
        if let Some(v) = r.float(key)? {
            *slot = v;
        }
    }

    let rad = r.float("antenna.opening_angle_rad")?;
    let deg = r.float("antenna.opening_angle_deg")?;
    let opening = match (rad, deg) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::Range(
                "give only one of antenna.opening_angle_rad and antenna.opening_angle_deg".into(),
            ))
        }
        (Some(r), None) => r,
        (None, Some(d)) => d.to_radians(),
        (None, None) => cfg.antenna.opening_angle_rad,
    };
    cfg.antenna = AntennaParams {
        effective_range_m: r
            .float("antenna.effective_range_m")?
            .unwrap_or(cfg.antenna.effective_range_m),
        opening_angle_rad: opening,
    };

    let rf = &mut cfg.rf;
    for (key, slot) in [
        ("rf.near_field_loss_db", &mut rf.near_field_loss_db),
        ("rf.path_loss_exponent", &mut rf.path_loss_exponent),
        ("rf.attenuation_db", &mut rf.attenuation_db),
        ("rf.interference_threshold_db", &mut rf.interference_threshold_db),
    ] {
        if let Some(v) = r.float(key)? {
            *slot = v;
        }
    }
    if let Some(levels) = r.values.get("rf.power_levels_db") {
        let key = "rf.power_levels_db";
        let Value::Array(items) = levels else {
            return Err(Reader::type_err(key, "expected [\"off\", levels...]"));
        };
        match items.first() {
            Some(Value::String(s)) if s == "off" => {}
            _ => return Err(ConfigError::Range(format!("{key} must start with \"off\""))),
        }
        let on = items[1..]
            .iter()
            .map(|v| Reader::float_of(key, v))
            .collect::<Result<Vec<_>, _>>()?;
        rf.power_levels = PowerLevels::new(on).map_err(|e| ConfigError::Range(format!("{key}: {e}")))?;
    }

    if let Some(v) = r.float("control.tracking_threshold")? {
        cfg.tracking_threshold = v;
    }
    if let Some(v) = r.float("control.ct_power_db")? {
        cfg.ct_power_db = v;
    }
    if let Some(v) = r.count("filter.particles")? {
        cfg.n_particles = v;
    }

    overrides.apply(&mut cfg);
    check_seed(cfg.seed)?;
    cfg.validate()?;
    Ok(cfg)
}

fn check_seed(seed: u64) -> Result<(), ConfigError> {
    if seed > i64::MAX as u64 {
        return Err(ConfigError::Range("scenario.seed must be <= 2^63-1".into()));
    }
    Ok(())
}

pub fn load_config(path: &Path, overrides: &Overrides) -> Result<ScenarioConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text, overrides)
}

fn vec3_value(v: &Vector3<f64>) -> Value {
    Value::Array(v.iter().map(|c| Value::Float(*c)).collect())
}

fn section<'a>(root: &'a mut Table, name: &str) -> &'a mut Table {
    match root
        .entry(name.to_string())
        .or_insert_with(|| Value::Table(Table::new()))
    {
        Value::Table(t) => t,
        _ => unreachable!("sections are only ever created as tables"),
    }
}

/// Renders a fully resolved config that parses back to the same value.
pub fn echo_config(cfg: &ScenarioConfig) -> String {
    let mut root = Table::new();
    let mut put = |key: &str, value: Value| {
        let (sec, name) = key.split_once('.').expect("dotted key");
        section(&mut root, sec).insert(name.to_string(), value);
    };
    let f = Value::Float;
    let i = |v: u64| Value::Integer(v as i64);

    put("scenario.mode", Value::String(cfg.mode.as_str().into()));
    put("scenario.seed", i(cfg.seed));
    put("scenario.agents", i(cfg.n_agents as u64));
    put("scenario.steps", i(cfg.n_steps as u64));
    put("scenario.trials", i(cfg.n_trials as u64));
    put("scenario.arena_min", vec3_value(&cfg.arena_min));
    put("scenario.arena_max", vec3_value(&cfg.arena_max));
    put("scenario.spawn_radius_m", f(cfg.spawn_radius_m));
    let random_or = |v: &Option<Vector3<f64>>| v.as_ref().map_or(Value::String("random".into()), vec3_value);
    put("target.position", random_or(&cfg.target_position));
    put("target.velocity", random_or(&cfg.target_velocity));
    put("target.random_speed_mps", f(cfg.random_speed_mps));
    put("target.prior_position_std_m", f(cfg.prior_position_std_m));
    put("target.prior_velocity_std_mps", f(cfg.prior_velocity_std_mps));
    put("motion.dt_s", f(cfg.motion.dt()));
    let cov = cfg.motion.accel_noise_cov();
    put(
        "motion.accel_noise_cov",
        Value::Array(
            (0..3)
                .map(|r| Value::Array((0..3).map(|c| f(cov[(r, c)])).collect()))
                .collect(),
        ),
    );
    put(
        "actions.radial_steps_m",
        Value::Array(cfg.actions.radial_steps_m.iter().map(|v| f(*v)).collect()),
    );
    put("actions.n_phi", i(cfg.actions.n_phi as u64));
    put("actions.n_theta", i(cfg.actions.n_theta as u64));
    let s = &cfg.sensing;
    put("sensing.p_d_max", f(s.p_d_max));
    put("sensing.eta_per_m", f(s.eta_per_m));
    put("sensing.r0_m", f(s.r0_m));
    put("sensing.sigma_theta_rad", f(s.sigma_theta_rad));
    put("sensing.sigma_phi_rad", f(s.sigma_phi_rad));
    put("sensing.sigma_rho0_m", f(s.sigma_rho0_m));
    put("sensing.beta_rho", f(s.beta_rho));
    put("sensing.lambda_c", f(s.clutter_rate));
    put("sensing.range_max_m", f(s.range_max_m));
    put("antenna.effective_range_m", f(cfg.antenna.effective_range_m));
    put("antenna.opening_angle_rad", f(cfg.antenna.opening_angle_rad));
    let rf = &cfg.rf;
    put("rf.near_field_loss_db", f(rf.near_field_loss_db));
    put("rf.path_loss_exponent", f(rf.path_loss_exponent));
    put("rf.attenuation_db", f(rf.attenuation_db));
    put(
        "rf.power_levels_db",
        Value::Array(
            std::iter::once(Value::String("off".into()))
                .chain(rf.power_levels.on_levels_db().iter().map(|v| f(*v)))
                .collect(),
        ),
    );
    put("rf.interference_threshold_db", f(rf.interference_threshold_db));
    put("control.tracking_threshold", f(cfg.tracking_threshold));
    put("control.ct_power_db", f(cfg.ct_power_db));
    put("filter.particles", i(cfg.n_particles as u64));
    toml::to_string(&root).expect("config tables always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = parse_config("", &Overrides::default()).unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        assert_eq!(cfg.motion.dt(), 1.0);
        assert_eq!(*cfg.motion.accel_noise_cov(), Matrix3::from_diagonal_element(2.0));
        assert_eq!(cfg.actions.radial_steps_m, vec![1.0, 3.0, 5.0]);
        assert_eq!((cfg.actions.n_phi, cfg.actions.n_theta), (2, 4));
        assert_eq!(cfg.sensing.p_d_max, 0.99);
        assert_eq!(cfg.sensing.eta_per_m, 0.02);
        assert_eq!(cfg.sensing.r0_m, 2.0);
        assert_eq!(cfg.sensing.sigma_theta_rad, PI / 50.0);
        assert_eq!(cfg.sensing.sigma_phi_rad, PI / 50.0);
        assert_eq!(cfg.sensing.sigma_rho0_m, 2.0);
        assert_eq!(cfg.sensing.beta_rho, 0.05);
        assert_eq!(cfg.sensing.clutter_rate, 15.0);
        assert_eq!(cfg.antenna.effective_range_m, 100.0);
        assert!((cfg.antenna.opening_angle_rad - 80f64.to_radians()).abs() < 1e-15);
        assert_eq!(cfg.rf.power_levels.on_levels_db(), &[-10.0, 0.0, 7.0, 10.0]);
        assert_eq!(cfg.rf.interference_threshold_db, -50.0);
        assert_eq!(cfg.rf.path_loss_exponent, 2.5);
        assert_eq!(cfg.rf.near_field_loss_db, 32.4);
        assert_eq!(cfg.rf.attenuation_db, 6.0206);
        assert_eq!(cfg.tracking_threshold, 0.8);
    }

    #[test]
    fn sections_and_dotted_keys_are_equivalent() {
        let a = parse_config(
            "[sensing]\nlambda_c = 3\n[scenario]\nagents = 6\n",
            &Overrides::default(),
        )
        .unwrap();
        let b = parse_config("sensing.lambda_c = 3.0\nscenario.agents = 6\n", &Overrides::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sensing.clutter_rate, 3.0);
        assert_eq!(a.n_agents, 6);
    }

    #[test]
    fn flags_override_file() {
        let o = Overrides {
            mode: Some(Mode::Ct),
            seed: Some(5),
            ..Default::default()
        };
        let cfg = parse_config("scenario.mode = \"cstj\"\nscenario.seed = 1\n", &o).unwrap();
        assert_eq!(cfg.mode, Mode::Ct);
        assert_eq!(cfg.seed, 5);
    }

    #[test]
    fn unknown_keys_are_listed() {
        let err = parse_config("sensing.lamda_c = 3\nfoo = 1\n", &Overrides::default()).unwrap_err();
        match err {
            ConfigError::UnknownKeys(keys) => assert_eq!(keys, vec!["foo".to_string(), "sensing.lamda_c".to_string()]),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn range_errors_name_the_invariant() {
        let err = parse_config("actions.radial_steps_m = [-1]\n", &Overrides::default()).unwrap_err();
        assert!(matches!(err, ConfigError::Range(_)), "{err}");
        assert!(err.to_string().contains("actions"), "{err}");
        for bad in [
            "control.tracking_threshold = 2",
            "scenario.agents = 0",
            "rf.power_levels_db = [\"off\", 10, 7]",
            "rf.power_levels_db = [0, 7]",
            "control.ct_power_db = 3",
            "antenna.opening_angle_deg = 80\nantenna.opening_angle_rad = 1.0",
            "scenario.seed = -1",
            "motion.accel_noise_cov = [[1, 0, 0], [0, -1, 0], [0, 0, 1]]",
        ] {
            let err = parse_config(bad, &Overrides::default()).unwrap_err();
            assert!(matches!(err, ConfigError::Range(_)), "{bad}: {err}");
        }
        let err = parse_config("scenario.agents = \"four\"", &Overrides::default()).unwrap_err();
        assert!(matches!(err, ConfigError::Type { .. }));
    }

    #[test]
    fn degrees_are_converted() {
        let cfg = parse_config("antenna.opening_angle_deg = 90\n", &Overrides::default()).unwrap();
        assert_eq!(cfg.antenna.opening_angle_rad, PI / 2.0);
    }

    #[test]
    fn echo_round_trips() {
        let cfgs = [
            ScenarioConfig::default(),
            parse_config(
                "target.position = [1.5, 2, 3]\ntarget.velocity = [0.1, 0, -0.3]\nscenario.seed = 9223372036854775807\n\
                 rf.power_levels_db = [\"off\", 0, 7, 10]\nactions.radial_steps_m = [1, 3]\nsensing.sigma_theta_rad = 0.0628318530717958\n",
                &Overrides::default(),
            )
            .unwrap(),
        ];
        for cfg in cfgs {
            let text = echo_config(&cfg);
            assert_eq!(parse_config(&text, &Overrides::default()).unwrap(), cfg, "{text}");
        }
    }

    #[test]
    fn every_key_is_documented_once() {
        let mut keys: Vec<&str> = KEYS.iter().map(|(k, _)| *k).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), KEYS.len());
        let echoed = echo_config(&ScenarioConfig::default());
        let table: Table = toml::from_str(&echoed).unwrap();
        let mut flat = BTreeMap::new();
        flatten("", &table, &mut flat);
        assert_eq!(
            flat.len(),
            KEYS.len() - 1,
            "all keys except the degree alias are echoed"
        );
    }
}
