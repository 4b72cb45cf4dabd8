use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Subcommand, ValueEnum};
use magstep::criterion::Variant;
use magstep::Resolution;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Version of the JSON document layout.
pub const SCHEMA_VERSION: u32 = 1;

/// A single value `x` or an inclusive uniform grid `lo:hi:n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|i| if i + 1 == self.n { self.hi } else { self.lo + step * i as f64 }).collect()
    }
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("'{t}' is not a number"));
        let parts: Vec<&str> = s.split(':').collect();
        let sweep = match parts.as_slice() {
            [x] => {
                let x = num(x)?;
                Sweep { lo: x, hi: x, n: 1 }
            }
            [lo, hi, n] => {
                let n = n.trim().parse::<usize>().map_err(|_| format!("'{n}' is not a count"))?;
                Sweep { lo: num(lo)?, hi: num(hi)?, n }
            }
            _ => return Err(format!("'{s}' is neither a number nor lo:hi:n")),
        };
        if sweep.n == 0 || !sweep.lo.is_finite() || !sweep.hi.is_finite() || (sweep.n > 1 && sweep.hi < sweep.lo) {
            return Err(format!("invalid grid '{s}'"));
        }
        Ok(sweep)
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}:{}:{}", self.lo, self.hi, self.n)
        }
    }
}

impl Serialize for Sweep {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Sweep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Sweep { lo: x, hi: x, n: 1 }),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    Exact,
    Theta0Low,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Exact => Variant::ExactLambda,
            VariantArg::Theta0Low => Variant::Theta0LowerBound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Triple {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct TripleSweep {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Sweep,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Sweep,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Sweep,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "kebab-case")]
pub enum Command {
    /// de Gennes constant and the minimizer of the Neumann band function.
    Degennes,
    /// Band function of the whole-line step fiber.
    Mu {
        #[arg(long, allow_hyphen_values = true)]
        a: Sweep,
        #[arg(long, allow_hyphen_values = true)]
        xi: Sweep,
    },
    /// Bottom of the spectrum of the whole-plane step operator.
    Beta {
        #[arg(long, allow_hyphen_values = true)]
        a: Sweep,
    },
    /// Bottom of the spectrum of the tilted-field half-space operator.
    Zeta {
        #[arg(long, allow_hyphen_values = true)]
        nu: Sweep,
    },
    /// Sampled band function of the reduced operator with verdict.
    Band {
        #[command(flatten)]
        #[serde(flatten)]
        triple: Triple,
        /// Window and sample count `lo:hi:n` (default: the automatic window, 9 samples).
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<Sweep>,
    },
    /// Band infimum over a grid of triples.
    Lambda {
        #[command(flatten)]
        #[serde(flatten)]
        triples: TripleSweep,
    },
    /// Essential threshold of the reduced operator.
    Essential {
        #[command(flatten)]
        #[serde(flatten)]
        triple: Triple,
        #[arg(long, allow_hyphen_values = true)]
        tau: Sweep,
    },
    /// Closed-form admissibility over a grid of triples.
    Region {
        #[arg(long, value_enum, default_value = "theta0-low")]
        variant: VariantArg,
        #[command(flatten)]
        #[serde(flatten)]
        triples: TripleSweep,
    },
    /// Trial energy at the optimal coefficients against the quadratic criterion.
    TrialCheck {
        #[command(flatten)]
        #[serde(flatten)]
        triple: Triple,
        #[arg(long, allow_hyphen_values = true)]
        omega: Sweep,
        /// Value of the bound; defaults to the one selected by `--variant`.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, value_enum, default_value = "theta0-low")]
        variant: VariantArg,
    },
    /// Shell masses and weighted energy of a certified eigenfunction.
    Agmon {
        #[command(flatten)]
        #[serde(flatten)]
        triple: Triple,
        /// Defaults to the minimizer of the band function.
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<f64>,
        /// Weight rate; defaults to `eta_fraction` times the admissible bound.
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        eta_fraction: f64,
    },
    /// Model energies along an edge, localization set and leading energy.
    EdgeProfile {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// Angle profile as CSV (`s,alpha,gamma`) or JSON.
        #[arg(long, conflicts_with = "ball_cut")]
        geometry: Option<PathBuf>,
        /// Great-circle edge of a unit ball cut through its center, with this many samples.
        #[arg(long)]
        ball_cut: Option<usize>,
        /// Field strength for the leading-order ground-state energy.
        #[arg(long)]
        b: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

/// Everything that determines a run's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    #[serde(default)]
    pub resolution: Resolution,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub threads: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_syntax() {
        let s: Sweep = "-1:0.99:40".parse().unwrap();
        assert_eq!(s.values().len(), 40);
        assert_eq!(s.values()[39], 0.99);
        assert_eq!("0.5".parse::<Sweep>().unwrap().values(), vec![0.5]);
        assert!("1:0:3".parse::<Sweep>().is_err());
        assert!("1:2".parse::<Sweep>().is_err());
        assert!("0:1:0".parse::<Sweep>().is_err());
    }

    #[test]
    fn config_round_trip() {
        let cfg = RunConfig {
            command: Command::Region {
                variant: VariantArg::Theta0Low,
                triples: TripleSweep {
                    alpha: "0.1:3.04:3".parse().unwrap(),
                    gamma: "0".parse().unwrap(),
                    a: "-1:0.99:2".parse().unwrap(),
                },
            },
            resolution: Resolution::default(),
            output: OutputSpec::default(),
            threads: Some(2),
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
        let deg = RunConfig { command: Command::Degennes, ..cfg };
        let text = serde_json::to_string(&deg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), deg);
    }
}
