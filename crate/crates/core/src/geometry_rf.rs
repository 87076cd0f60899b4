//! Directional antenna lobe geometry and the log-distance link budget.
//!
//! Every agent carries an antenna whose radiation is confined to a right
//! circular cone (apex at the agent, axis pointing at its aim point, height
//! `h_a`, full opening angle `theta_a`). Inside the cone the received power
//! follows `P_tx - L(d)` with `L(d) = EF + 10 n_e log10(d) + AF`; outside
//! the cone nothing is received.
//!
//! All powers are in dB. Multiple contributions at one receiver are summed
//! in the linear domain.

use nalgebra::Vector3;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("coincident endpoints: path loss is undefined at zero distance")]
    CoincidentEndpoints,
    #[error("invalid antenna parameters: {0}")]
    InvalidAntenna(&'static str),
    #[error("invalid rf parameters: {0}")]
    InvalidRf(&'static str),
}

/// Conic lobe of a directional antenna.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaParams {
    /// Cone height `h_a` (m).
    pub effective_range_m: f64,
    /// Full opening angle `theta_a` (rad), in `(0, pi)`.
    pub opening_angle_rad: f64,
}

impl AntennaParams {
    pub fn new(effective_range_m: f64, opening_angle_rad: f64) -> Result<Self, GeometryError> {
        let ant = Self {
            effective_range_m,
            opening_angle_rad,
        };
        ant.validate()?;
        Ok(ant)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.effective_range_m > 0.0 && self.effective_range_m.is_finite()) {
            return Err(GeometryError::InvalidAntenna("effective_range_m must be > 0"));
        }
        if !(self.opening_angle_rad > 0.0 && self.opening_angle_rad < std::f64::consts::PI) {
            return Err(GeometryError::InvalidAntenna("opening_angle_rad must lie in (0, pi)"));
        }
        Ok(())
    }

    pub fn half_angle(&self) -> f64 {
        0.5 * self.opening_angle_rad
    }

    /// Radius of the cone base, `tan(theta_a / 2) * h_a`.
    pub fn base_radius(&self) -> f64 {
        self.half_angle().tan() * self.effective_range_m
    }
}

impl Default for AntennaParams {
    fn default() -> Self {
        Self {
            effective_range_m: 100.0,
            opening_angle_rad: 80f64.to_radians(),
        }
    }
}

/// Discrete transmit power levels. Index 0 is always "off"; indices
/// `1..count()` map onto the stored levels in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLevels {
    levels_db: Vec<f64>,
}

impl PowerLevels {
    pub fn new(levels_db: Vec<f64>) -> Result<Self, GeometryError> {
        if levels_db.is_empty() {
            return Err(GeometryError::InvalidRf(
                "power_levels_db needs at least one level besides off",
            ));
        }
        if levels_db.iter().any(|l| !l.is_finite()) {
            return Err(GeometryError::InvalidRf("power levels must be finite"));
        }
        if levels_db.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GeometryError::InvalidRf("power levels must be strictly increasing"));
        }
        Ok(Self { levels_db })
    }

    /// Number of levels including off.
    pub fn count(&self) -> usize {
        self.levels_db.len() + 1
    }

    pub fn max_index(&self) -> usize {
        self.levels_db.len()
    }

    /// Transmit power for a level index; `None` for off or out of range.
    pub fn level_db(&self, index: usize) -> Option<f64> {
        index.checked_sub(1).and_then(|i| self.levels_db.get(i).copied())
    }

    /// The non-off levels, ascending.
    pub fn on_levels_db(&self) -> &[f64] {
        &self.levels_db
    }

    pub fn index_of_db(&self, db: f64) -> Option<usize> {
        self.levels_db.iter().position(|&l| l == db).map(|i| i + 1)
    }

    pub fn shifted(&self, offset_db: f64) -> Self {
        Self {
            levels_db: self.levels_db.iter().map(|l| l + offset_db).collect(),
        }
    }
}

impl Default for PowerLevels {
    fn default() -> Self {
        Self {
            levels_db: vec![-10.0, 0.0, 7.0, 10.0],
        }
    }
}

/// Link-budget parameters shared by all agents.
#[derive(Debug, Clone, PartialEq)]
pub struct RfParams {
    /// Near-field loss `EF` (dB).
    pub near_field_loss_db: f64,
    /// Path-loss exponent `n_e`.
    pub path_loss_exponent: f64,
    /// Attenuation `AF` (dB).
    pub attenuation_db: f64,
    pub power_levels: PowerLevels,
    /// Critical interference level `Delta` (dB).
    pub interference_threshold_db: f64,
}

impl RfParams {
    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.path_loss_exponent > 0.0 && self.path_loss_exponent.is_finite()) {
            return Err(GeometryError::InvalidRf("path_loss_exponent must be > 0"));
        }
        if !self.near_field_loss_db.is_finite()
            || !self.attenuation_db.is_finite()
            || !self.interference_threshold_db.is_finite()
        {
            return Err(GeometryError::InvalidRf("rf parameters must be finite"));
        }
        Ok(())
    }
}

impl Default for RfParams {
    fn default() -> Self {
        Self {
            near_field_loss_db: 32.4,
            path_loss_exponent: 2.5,
            attenuation_db: 6.0206,
            power_levels: PowerLevels::default(),
            interference_threshold_db: -50.0,
        }
    }
}

/// `EF + 10 n_e log10(|tx - rx|) + AF`.
pub fn path_loss_db(tx_pos: &Vector3<f64>, rx_pos: &Vector3<f64>, rf: &RfParams) -> Result<f64, GeometryError> {
    let d = (tx_pos - rx_pos).norm();
    if d == 0.0 {
        return Err(GeometryError::CoincidentEndpoints);
    }
    Ok(rf.near_field_loss_db + 10.0 * rf.path_loss_exponent * d.log10() + rf.attenuation_db)
}

/// Whether `point` lies inside the cone with apex `apex` whose axis points at
/// `axis_target`. The apex itself is excluded.
pub fn cone_contains(
    apex: &Vector3<f64>,
    axis_target: &Vector3<f64>,
    ant: &AntennaParams,
    point: &Vector3<f64>,
) -> bool {
    let axis = axis_target - apex;
    let axis_len = axis.norm();
    let offset = point - apex;
    if axis_len == 0.0 || offset.norm() == 0.0 {
        return false;
    }
    let unit = axis / axis_len;
    let axial = offset.dot(&unit);
    if !(0.0..=ant.effective_range_m).contains(&axial) {
        return false;
    }
    let lateral = offset.cross(&unit).norm();
    lateral.atan2(axial) <= ant.half_angle()
}

/// Power received at `rx_pos` from a transmitter at `tx_pos` aimed at
/// `tx_aim`. `None` when the transmitter is off or `rx_pos` is outside its
/// lobe.
pub fn received_power_db(
    tx_power_db: Option<f64>,
    tx_pos: &Vector3<f64>,
    tx_aim: &Vector3<f64>,
    ant: &AntennaParams,
    rf: &RfParams,
    rx_pos: &Vector3<f64>,
) -> Option<f64> {
    let power = tx_power_db?;
    if !cone_contains(tx_pos, tx_aim, ant, rx_pos) {
        return None;
    }
    // cone_contains excludes the apex, so the distance is positive here.
    path_loss_db(tx_pos, rx_pos, rf).ok().map(|loss| power - loss)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Sum of dB contributions in the linear domain, back in dB. `None` when
/// there are no contributions.
pub fn aggregate_power_db<I>(contributions_db: I) -> Option<f64>
where
    I: IntoIterator<Item = f64>,
{
    let mut any = false;
    let total: f64 = contributions_db
        .into_iter()
        .inspect(|_| any = true)
        .map(db_to_linear)
        .sum();
    any.then(|| linear_to_db(total))
}

/// A positioned, aimed antenna with an optional transmit power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transmitter {
    pub position: Vector3<f64>,
    pub aim: Vector3<f64>,
    pub power_db: Option<f64>,
}

impl Transmitter {
    pub fn power_at(&self, rx_pos: &Vector3<f64>, ant: &AntennaParams, rf: &RfParams) -> Option<f64> {
        received_power_db(self.power_db, &self.position, &self.aim, ant, rf, rx_pos)
    }
}
