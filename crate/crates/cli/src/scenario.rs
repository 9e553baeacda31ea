//! Scenario files.
//!
//! A scenario is a small TOML document. Complex amplitudes are strings of
//! the form `"re+imi"` (`"0.5"`, `"-0.2+0.1i"`, `"1e-3-2i"`, `"i"`).
//!
//! ```toml
//! task = "transfer"
//!
//! [input]
//! p_in = 0.5                      # or: state = [["0", "1"], ["-1", "0"]]
//!
//! [media]
//! t1 = [["1", "0"], ["0", "0.5"]]
//! t2 = [["0.9", "0"], ["0", "0.9i"]]
//! ```
//!
//! Films instead of explicit matrices:
//!
//! ```toml
//! [media]
//! omega0 = 2.82e15                # optional, default: film1 lattice_a resonance
//!
//! [media.film1]
//! lattice_a = 7.0e-7
//! lattice_b = 7.05e-7
//! order_n = 1
//! gamma = 5.0e13
//! t_peak = 0.6
//! epsilon = 10.0
//!
//! [media.film2]
//! # same keys
//! ```

use std::fmt;
use std::path::Path;

use polent::{Mat2, PlasmonFilmSpec, TransmissionMatrix, TwoPhotonState, C64};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// What a scenario asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Transfer,
    SmaxSweep,
    DistillRegion,
    Plasmon,
    Optimize,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Transfer => "transfer",
            Task::SmaxSweep => "smax-sweep",
            Task::DistillRegion => "distill-region",
            Task::Plasmon => "plasmon",
            Task::Optimize => "optimize",
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    task: Option<Task>,
    input: Option<RawInput>,
    media: Option<RawMedia>,
    sweep: Option<RawSweep>,
    region: Option<RawRegion>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    p_in: Option<f64>,
    state: Option<[[String; 2]; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMedia {
    t1: Option<[[String; 2]; 2]>,
    t2: Option<[[String; 2]; 2]>,
    film1: Option<RawFilm>,
    film2: Option<RawFilm>,
    omega0: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFilm {
    lattice_a: f64,
    lattice_b: f64,
    order_n: u32,
    gamma: f64,
    t_peak: f64,
    epsilon: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis: Option<String>,
    min: Option<f64>,
    max: Option<f64>,
    steps: Option<usize>,
    scale: Option<Scale>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRegion {
    p_in: Option<f64>,
    ln_tau_max: Option<f64>,
    steps: Option<usize>,
}

/// How the incident pair is specified.
#[derive(Debug, Clone, PartialEq)]
pub enum InputSpec {
    /// Concurrence of the incident state; the canonical diagonal state is used.
    Concurrence(f64),
    /// Explicit coefficient matrix (normalized on load).
    State(Mat2),
}

impl InputSpec {
    pub fn state(&self) -> polent::Result<TwoPhotonState> {
        match self {
            InputSpec::Concurrence(p) => TwoPhotonState::canonical(*p),
            InputSpec::State(a) => TwoPhotonState::new(*a),
        }
    }

    pub fn concurrence(&self) -> polent::Result<f64> {
        Ok(self.state()?.concurrence())
    }
}

/// How the two media are specified.
#[derive(Debug, Clone, PartialEq)]
pub enum MediaSpec {
    Matrices(Mat2, Mat2),
    Films {
        film1: PlasmonFilmSpec,
        film2: PlasmonFilmSpec,
        omega0: Option<f64>,
    },
}

impl MediaSpec {
    /// Transmission matrices, and the illumination frequency for films.
    pub fn resolve(&self) -> polent::Result<(TransmissionMatrix, TransmissionMatrix, Option<f64>)> {
        match self {
            MediaSpec::Matrices(t1, t2) => Ok((
                TransmissionMatrix::new(*t1)?,
                TransmissionMatrix::new(*t2)?,
                None,
            )),
            MediaSpec::Films {
                film1,
                film2,
                omega0,
            } => {
                let omega0 = match omega0 {
                    Some(w) => *w,
                    None => film1.resonances()?.0,
                };
                let (t1, t2) = polent::film_pair(film1, film2, omega0)?;
                Ok((t1, t2, Some(omega0)))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

/// A one-dimensional sampling grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub axis: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub scale: Scale,
}

impl SweepGrid {
    pub fn new(axis: &str, min: f64, max: f64, steps: usize, scale: Scale) -> CliResult<Self> {
        if !(min < max) || !min.is_finite() || !max.is_finite() {
            return Err(CliError::Config(format!(
                "sweep: min ({min}) must be less than max ({max})"
            )));
        }
        if steps < 2 {
            return Err(CliError::Config(format!(
                "sweep: steps ({steps}) must be at least 2"
            )));
        }
        if scale == Scale::Log && min <= 0.0 {
            return Err(CliError::Config(format!(
                "sweep: log scale needs a positive min, got {min}"
            )));
        }
        Ok(SweepGrid {
            axis: axis.to_string(),
            min,
            max,
            steps,
            scale,
        })
    }

    /// Grid points, endpoints included.
    pub fn points(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                let t = k as f64 / last;
                match self.scale {
                    Scale::Linear => self.min + (self.max - self.min) * t,
                    Scale::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

/// Partial sweep settings read from a scenario; unset fields fall back to
/// command-line defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepOverrides {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub steps: Option<usize>,
    pub scale: Option<Scale>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RegionOverrides {
    pub p_in: Option<f64>,
    pub ln_tau_max: Option<f64>,
    pub steps: Option<usize>,
}

/// A validated scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub task: Option<Task>,
    pub input: Option<InputSpec>,
    pub media: Option<MediaSpec>,
    pub sweep: SweepOverrides,
    pub region: RegionOverrides,
}

impl Scenario {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read scenario {}: {e}", path.display()))
        })?;
        Scenario::parse(&text)
            .map_err(|e| CliError::Config(format!("{}: {}", path.display(), strip_prefix(&e))))
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let raw: RawScenario =
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string().trim().to_string()))?;

        let input = match raw.input {
            None => None,
            Some(RawInput {
                p_in: Some(_),
                state: Some(_),
            }) => {
                return Err(config("input: give either `p_in` or `state`, not both"));
            }
            Some(RawInput {
                p_in: Some(p),
                state: None,
            }) => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(config(format!("input.p_in: {p} is outside [0, 1]")));
                }
                Some(InputSpec::Concurrence(p))
            }
            Some(RawInput {
                p_in: None,
                state: Some(m),
            }) => {
                let a = parse_matrix(&m, "input.state")?;
                if a.norm_sqr() == 0.0 {
                    return Err(config("input.state: coefficient matrix is zero"));
                }
                Some(InputSpec::State(a))
            }
            Some(RawInput {
                p_in: None,
                state: None,
            }) => return Err(config("input: expected `p_in` or `state`")),
        };

        let media = match raw.media {
            None => None,
            Some(m) => Some(parse_media(m)?),
        };

        let sweep = match raw.sweep {
            None => SweepOverrides::default(),
            Some(s) => {
                if let Some(axis) = &s.axis {
                    if axis != "ratio" {
                        return Err(config(format!(
                            "sweep.axis: only \"ratio\" is supported, got {axis:?}"
                        )));
                    }
                }
                SweepOverrides {
                    min: s.min,
                    max: s.max,
                    steps: s.steps,
                    scale: s.scale,
                }
            }
        };
        let region = raw
            .region
            .map(|r| RegionOverrides {
                p_in: r.p_in,
                ln_tau_max: r.ln_tau_max,
                steps: r.steps,
            })
            .unwrap_or_default();

        Ok(Scenario {
            task: raw.task,
            input,
            media,
            sweep,
            region,
        })
    }

    /// Fails unless the scenario's declared task (if any) is `task`.
    pub fn expect_task(&self, task: Task) -> CliResult<()> {
        match self.task {
            Some(t) if t != task => Err(config(format!(
                "task: scenario declares \"{t}\" but the command is \"{task}\""
            ))),
            _ => Ok(()),
        }
    }

    pub fn require_input(&self) -> CliResult<&InputSpec> {
        self.input
            .as_ref()
            .ok_or_else(|| config("input: section is required for this command"))
    }

    pub fn require_media(&self) -> CliResult<&MediaSpec> {
        self.media
            .as_ref()
            .ok_or_else(|| config("media: section is required for this command"))
    }
}

fn parse_media(m: RawMedia) -> CliResult<MediaSpec> {
    let explicit = m.t1.is_some() || m.t2.is_some();
    let films = m.film1.is_some() || m.film2.is_some();
    match (explicit, films) {
        (true, true) => Err(config(
            "media: give either `t1`/`t2` or `film1`/`film2`, not both",
        )),
        (false, false) => Err(config("media: expected `t1`/`t2` or `film1`/`film2`")),
        (true, false) => {
            if m.omega0.is_some() {
                return Err(config("media.omega0: only meaningful with films"));
            }
            let t1 = m.t1.ok_or_else(|| config("media.t1: missing"))?;
            let t2 = m.t2.ok_or_else(|| config("media.t2: missing"))?;
            Ok(MediaSpec::Matrices(
                parse_matrix(&t1, "media.t1")?,
                parse_matrix(&t2, "media.t2")?,
            ))
        }
        (false, true) => {
            let f1 = m.film1.ok_or_else(|| config("media.film1: missing"))?;
            let f2 = m.film2.ok_or_else(|| config("media.film2: missing"))?;
            Ok(MediaSpec::Films {
                film1: film(f1),
                film2: film(f2),
                omega0: m.omega0,
            })
        }
    }
}

fn film(f: RawFilm) -> PlasmonFilmSpec {
    PlasmonFilmSpec {
        lattice_a: f.lattice_a,
        lattice_b: f.lattice_b,
        order_n: f.order_n,
        gamma: f.gamma,
        t_peak: f.t_peak,
        epsilon: f.epsilon,
    }
}

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn strip_prefix(e: &CliError) -> String {
    match e {
        CliError::Config(msg) => msg.clone(),
        other => other.to_string(),
    }
}

fn parse_matrix(m: &[[String; 2]; 2], field: &str) -> CliResult<Mat2> {
    let mut out = Mat2::ZERO;
    for (i, row) in m.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            out[(i, j)] =
                parse_complex(s).map_err(|e| config(format!("{field}[{i}][{j}]: {e}")))?;
        }
    }
    Ok(out)
}

/// Parses `"re"`, `"imi"` or `"re±imi"`.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    let bad = || format!("cannot parse {s:?} as a complex number (expected re+imi)");
    let Some(body) = t.strip_suffix('i') else {
        return match t.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(C64::from(x)),
            _ => Err(bad()),
        };
    };
    // Split at the last sign that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |part: &str| -> Result<f64, String> {
        match part {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            p => p.parse::<f64>().map_err(|_| bad()),
        }
    };
    let value = match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            C64::new(re, imag(&body[k..])?)
        }
        None => C64::new(0.0, imag(body)?),
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(bad());
    }
    Ok(value)
}

/// Formats a complex number as `re±imi` with 17 significant digits.
pub fn format_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{sign}{:.16e}i", z.re, z.im.abs())
}
