//! Physical constants and unit helpers. Everything inside the crate is SI
//! (seconds, hertz, metres) unless a field name says otherwise.

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub const PICOSECOND: f64 = 1e-12;
pub const FEMTOSECOND: f64 = 1e-15;

/// ps/(nm·km) to s/m².
pub const PS_PER_NM_KM: f64 = 1e-12 / (1e-9 * 1e3);

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn to_ps(seconds: f64) -> f64 {
    seconds / PICOSECOND
}

pub fn to_fs(seconds: f64) -> f64 {
    seconds / FEMTOSECOND
}
