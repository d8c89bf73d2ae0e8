//! Defaults shared by every subcommand, and the report envelope.

use calogero::exactalg::{parse_rational, CouplingPoly, Rational};
use calogero::Error;
use serde::Serialize;

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Spanning-set degree for `verify` and `symbols` when `--deg` is absent.
pub fn default_degree(n: usize) -> u32 {
    if n <= 3 {
        6
    } else {
        4
    }
}

pub const DEFAULT_TOL: f64 = 1e-10;
// Paths without a `margin` field use 1e-6 (see `ChamberPath`).
pub const DEFAULT_CAP: usize = 5;
pub const DEFAULT_HOLONOMY_TOL: f64 = 1e-8;
pub const DEFAULT_DYSON_TOL: f64 = 1e-6;
pub const DEFAULT_DRIFT_TOL: f64 = 1e-8;
pub const DEFAULT_SEED: u64 = 0;
pub const WORKERS_ENV: &str = "CALOGERO_WORKERS";

/// Exit codes, identical across subcommands.
pub mod exit {
    pub const OK: u8 = 0;
    pub const FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const OUTSIDE_CHAMBER: u8 = 3;
    pub const COLLISION: u8 = 4;
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::OutsideChamber { .. } => exit::OUTSIDE_CHAMBER,
        Error::Collision { .. } => exit::COLLISION,
        Error::StepUnderflow { .. } | Error::NoEquivariance => exit::FAILED,
        _ => exit::USAGE,
    }
}

/// Either the formal symbol `c` or an exact value.
#[derive(Clone, Debug, PartialEq)]
pub enum Coupling {
    Formal,
    Value(Rational),
}

impl Coupling {
    pub fn parse(s: &str) -> Result<Self, String> {
        if s == "formal" {
            Ok(Coupling::Formal)
        } else {
            parse_rational(s)
                .map(Coupling::Value)
                .map_err(|e| e.to_string())
        }
    }

    pub fn poly(&self) -> CouplingPoly {
        match self {
            Coupling::Formal => CouplingPoly::var(),
            Coupling::Value(v) => CouplingPoly::constant(v.clone()),
        }
    }
}

impl std::fmt::Display for Coupling {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coupling::Formal => f.write_str("formal"),
            Coupling::Value(v) => write!(f, "{v}"),
        }
    }
}

pub fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// What every subcommand prints: version, resolved configuration, body and
/// verdict. Nothing time-dependent goes in here, so reruns are
/// byte-identical.
#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Envelope<C: Serialize, B: Serialize> {
    pub schema_version: u32,
    pub command: &'static str,
    pub config: C,
    #[serde(flatten)]
    pub body: B,
    pub passed: bool,
}
