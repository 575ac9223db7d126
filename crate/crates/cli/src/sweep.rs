use std::fmt;

use clap::ValueEnum;

use crate::error::{usage, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SweepVar {
    SnrDb,
    SirDb,
    SinrDb,
    Q,
    RateThreshold,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::SnrDb => "snr_db",
            SweepVar::SirDb => "sir_db",
            SweepVar::SinrDb => "sinr_db",
            SweepVar::Q => "q",
            SweepVar::RateThreshold => "rate_threshold",
        }
    }

    fn is_db(self) -> bool {
        matches!(self, SweepVar::SnrDb | SweepVar::SirDb | SweepVar::SinrDb)
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Point spacing: `linear` spaces values evenly as given, `db` spaces them
/// evenly on a decibel (logarithmic) axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Scale {
    #[default]
    Linear,
    Db,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVar,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: Scale,
}

impl SweepSpec {
    pub fn new(
        variable: SweepVar,
        start: f64,
        stop: f64,
        points: usize,
        scale: Scale,
    ) -> Result<Self, CliError> {
        if !(start < stop) {
            return usage(format!("sweep start ({start}) must be below stop ({stop})"));
        }
        if points < 2 {
            return usage(format!("a sweep needs at least 2 points, got {points}"));
        }
        if scale == Scale::Db && !variable.is_db() && !(start > 0.0) {
            return usage(format!(
                "a dB-spaced sweep of {variable} needs a positive start"
            ));
        }
        Ok(Self {
            variable,
            start,
            stop,
            points,
            scale,
        })
    }

    /// Sweep values in the variable's own units.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        let log_axis = self.scale == Scale::Db && !self.variable.is_db();
        let (a, b) = if log_axis {
            (self.start.log10(), self.stop.log10())
        } else {
            (self.start, self.stop)
        };
        (0..self.points)
            .map(|i| {
                let v = if i == self.points - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / last
                };
                if log_axis {
                    10f64.powf(v)
                } else {
                    v
                }
            })
            .collect()
    }
}
