use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::ensembles::Topology;
use crate::recovery::Algorithm;
use crate::{Error, Result};

/// Sensing ensemble of an experiment. `m` for the frame is `R·F`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EnsembleSpec {
    Paraxial { n: usize, m: usize, f: usize },
    Frame { n: usize, r: usize, f: usize },
}

impl EnsembleSpec {
    pub fn name(&self) -> &'static str {
        match self {
            EnsembleSpec::Paraxial { .. } => "paraxial",
            EnsembleSpec::Frame { .. } => "frame",
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            EnsembleSpec::Paraxial { n, .. } | EnsembleSpec::Frame { n, .. } => n,
        }
    }

    pub fn refinement(&self) -> usize {
        match *self {
            EnsembleSpec::Paraxial { f, .. } | EnsembleSpec::Frame { f, .. } => f,
        }
    }

    pub fn grid_len(&self) -> usize {
        match *self {
            EnsembleSpec::Paraxial { m, .. } => m,
            EnsembleSpec::Frame { r, f, .. } => r * f,
        }
    }

    /// Frame coefficients live on a circle; the paraxial grid is an interval.
    pub fn topology(&self) -> Topology {
        match self {
            EnsembleSpec::Paraxial { .. } => Topology::Linear,
            EnsembleSpec::Frame { .. } => Topology::Cyclic,
        }
    }

    pub fn with_n(self, n: usize) -> Self {
        match self {
            EnsembleSpec::Paraxial { m, f, .. } => EnsembleSpec::Paraxial { n, m, f },
            EnsembleSpec::Frame { r, f, .. } => EnsembleSpec::Frame { n, r, f },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            EnsembleSpec::Paraxial { n, m, f } => n > 0 && m > 1 && f > 0,
            EnsembleSpec::Frame { n, r, f } => n > 0 && r > 0 && f > 0 && r * f > 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("degenerate ensemble {self:?}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EtaChoice {
    Fixed(f64),
    /// Resolved per sweep point from an averaged band profile.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    N,
    Sparsity,
    SeparationRl,
    DynamicRange,
    RelativeNoise,
    Eta,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::N => "n",
            SweepParam::Sparsity => "sparsity",
            SweepParam::SeparationRl => "separation_rl",
            SweepParam::DynamicRange => "dynamic_range",
            SweepParam::RelativeNoise => "relative_noise",
            SweepParam::Eta => "eta",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "n" => SweepParam::N,
            "sparsity" => SweepParam::Sparsity,
            "separation_rl" => SweepParam::SeparationRl,
            "dynamic_range" => SweepParam::DynamicRange,
            "relative_noise" => SweepParam::RelativeNoise,
            "eta" => SweepParam::Eta,
            other => return Err(Error::InvalidParameter(format!("unknown sweep parameter `{other}`"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub ensemble: EnsembleSpec,
    pub sparsity: usize,
    /// Minimum object separation in Rayleigh lengths.
    pub separation_rl: f64,
    pub dynamic_range: f64,
    pub relative_noise: f64,
    pub algorithms: Vec<Algorithm>,
    pub eta: EtaChoice,
    pub trials: usize,
    pub base_seed: u64,
    pub sweep_param: SweepParam,
    pub sweep_values: Vec<f64>,
}

impl ExperimentConfig {
    /// Single-point experiment: the sweep runs over the current value of `param` only.
    pub fn single(
        ensemble: EnsembleSpec,
        sparsity: usize,
        algorithms: Vec<Algorithm>,
        eta: EtaChoice,
        trials: usize,
        base_seed: u64,
    ) -> Self {
        Self {
            ensemble,
            sparsity,
            separation_rl: 3.0,
            dynamic_range: 1.0,
            relative_noise: 0.0,
            algorithms,
            eta,
            trials,
            base_seed,
            sweep_param: SweepParam::N,
            sweep_values: vec![ensemble.n() as f64],
        }
    }

    /// Grid separation `⌈separation_rl·F⌉`.
    pub fn min_separation(&self) -> usize {
        let sep = (self.separation_rl * self.ensemble.refinement() as f64).ceil();
        (sep as usize).max(1)
    }

    /// Copy with the sweep parameter set to `value`.
    pub fn at(&self, value: f64) -> Result<Self> {
        let mut c = self.clone();
        match self.sweep_param {
            SweepParam::N => c.ensemble = c.ensemble.with_n(as_count("n", value)?),
            SweepParam::Sparsity => c.sparsity = as_count("sparsity", value)?,
            SweepParam::SeparationRl => c.separation_rl = value,
            SweepParam::DynamicRange => c.dynamic_range = value,
            SweepParam::RelativeNoise => c.relative_noise = value,
            SweepParam::Eta => c.eta = EtaChoice::Fixed(value),
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.ensemble.validate()?;
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.trials == 0 {
            return bad("trials must be >= 1".into());
        }
        if self.sparsity == 0 || self.sparsity > self.ensemble.n() {
            return bad(format!("sparsity {} must lie in 1..=N", self.sparsity));
        }
        if !(self.separation_rl.is_finite() && self.separation_rl > 0.0) {
            return bad(format!("separation_rl must be positive, got {}", self.separation_rl));
        }
        if !(self.dynamic_range.is_finite() && self.dynamic_range >= 1.0) {
            return bad(format!("dynamic_range must be >= 1, got {}", self.dynamic_range));
        }
        if !(self.relative_noise.is_finite() && self.relative_noise >= 0.0) {
            return bad(format!("relative_noise must be >= 0, got {}", self.relative_noise));
        }
        if let EtaChoice::Fixed(eta) = self.eta {
            if !(eta > 0.0 && eta < 1.0) {
                return bad(format!("eta must lie in (0, 1), got {eta}"));
            }
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms requested".into());
        }
        let mut algs = self.algorithms.clone();
        algs.sort();
        algs.dedup();
        if algs.len() != self.algorithms.len() {
            return bad("duplicate algorithm".into());
        }
        if self.sweep_values.is_empty() {
            return bad("sweep_values is empty".into());
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }
}

fn as_count(name: &str, value: f64) -> Result<usize> {
    if value >= 1.0 && value.fract() == 0.0 && value < 1e15 {
        Ok(value as usize)
    } else {
        Err(Error::InvalidParameter(format!("{name} must be a positive integer, got {value}")))
    }
}

const KEYS: [&str; 15] = [
    "ensemble",
    "n",
    "m",
    "r",
    "f",
    "sparsity",
    "separation_rl",
    "dynamic_range",
    "relative_noise",
    "algorithms",
    "eta",
    "trials",
    "base_seed",
    "sweep_param",
    "sweep_values",
];

/// Flat `key = value` text. `#` starts a comment; lists are comma separated.
impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut entries: Vec<(&str, &str, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(config_err(line_no, "expected `key = value`"));
            };
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(config_err(line_no, &format!("unknown key `{key}`")));
            }
            if entries.iter().any(|(k, _, _)| *k == key) {
                return Err(config_err(line_no, &format!("duplicate key `{key}`")));
            }
            entries.push((key, value, line_no));
        }
        let get = |key: &str| entries.iter().find(|(k, _, _)| *k == key).map(|&(_, v, l)| (v, l));
        let num = |key: &str| -> Result<Option<f64>> {
            get(key)
                .map(|(v, l)| v.parse::<f64>().map_err(|_| config_err(l, &format!("`{key}` is not a number"))))
                .transpose()
        };
        let int = |key: &str| -> Result<Option<u64>> {
            get(key)
                .map(|(v, l)| v.parse::<u64>().map_err(|_| config_err(l, &format!("`{key}` is not an integer"))))
                .transpose()
        };
        let required = |key: &str, v: Option<u64>| {
            v.ok_or_else(|| config_err(0, &format!("missing key `{key}`")))
        };

        let (sweep_param, sweep_line) = get("sweep_param").ok_or_else(|| config_err(0, "missing key `sweep_param`"))?;
        let sweep_param: SweepParam = sweep_param.parse().map_err(|e: Error| config_err(sweep_line, &e.to_string()))?;
        let (values, values_line) = get("sweep_values").ok_or_else(|| config_err(0, "missing key `sweep_values`"))?;
        let sweep_values = values
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| config_err(values_line, "sweep_values must be numbers"))?;

        let n = match int("n")? {
            Some(n) => n,
            None if sweep_param == SweepParam::N && !sweep_values.is_empty() => sweep_values[0] as u64,
            None => return Err(config_err(0, "missing key `n`")),
        } as usize;
        let f = required("f", int("f")?)? as usize;
        let (kind, kind_line) = get("ensemble").ok_or_else(|| config_err(0, "missing key `ensemble`"))?;
        let ensemble = match kind {
            "paraxial" => {
                if get("r").is_some() {
                    return Err(config_err(kind_line, "`r` only applies to the frame ensemble"));
                }
                EnsembleSpec::Paraxial { n, m: required("m", int("m")?)? as usize, f }
            }
            "frame" => {
                if get("m").is_some() {
                    return Err(config_err(kind_line, "`m` is implied by r·f for the frame ensemble"));
                }
                EnsembleSpec::Frame { n, r: required("r", int("r")?)? as usize, f }
            }
            other => return Err(config_err(kind_line, &format!("unknown ensemble `{other}`"))),
        };
        let algorithms = match get("algorithms") {
            Some((v, l)) => v
                .split(',')
                .map(|a| a.parse::<Algorithm>())
                .collect::<Result<Vec<_>>>()
                .map_err(|e| config_err(l, &e.to_string()))?,
            None => Algorithm::ALL.to_vec(),
        };
        let eta = match get("eta") {
            None | Some(("auto", _)) => EtaChoice::Auto,
            Some((v, l)) => EtaChoice::Fixed(v.parse().map_err(|_| config_err(l, "`eta` must be a number or `auto`"))?),
        };
        let config = ExperimentConfig {
            ensemble,
            sparsity: int("sparsity")?.unwrap_or(10) as usize,
            separation_rl: num("separation_rl")?.unwrap_or(3.0),
            dynamic_range: num("dynamic_range")?.unwrap_or(1.0),
            relative_noise: num("relative_noise")?.unwrap_or(0.0),
            algorithms,
            eta,
            trials: int("trials")?.unwrap_or(100) as usize,
            base_seed: int("base_seed")?.unwrap_or(0),
            sweep_param,
            sweep_values,
        };
        config.validate().map_err(|e| config_err(0, &e.to_string()))?;
        Ok(config)
    }
}

fn config_err(line: usize, msg: &str) -> Error {
    Error::Config {
        line,
        msg: msg.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PARAXIAL: &str = "
        # success rate against N
        ensemble = paraxial
        m = 4000
        f = 20
        sparsity = 10
        dynamic_range = 5
        algorithms = omp, bomp, bloomp
        eta = 0.3
        trials = 100
        base_seed = 7
        sweep_param = n
        sweep_values = 40, 60, 100
    ";

    #[test]
    fn parses_with_defaults() {
        let c: ExperimentConfig = PARAXIAL.parse().unwrap();
        assert_eq!(c.ensemble, EnsembleSpec::Paraxial { n: 40, m: 4000, f: 20 });
        assert_eq!(c.separation_rl, 3.0);
        assert_eq!(c.min_separation(), 60);
        assert_eq!(c.relative_noise, 0.0);
        assert_eq!(c.eta, EtaChoice::Fixed(0.3));
        assert_eq!(c.algorithms, Algorithm::ALL.to_vec());
        assert_eq!(c.sweep_values, vec![40.0, 60.0, 100.0]);
        let at = c.at(100.0).unwrap();
        assert_eq!(at.ensemble.n(), 100);
        assert!(c.at(50.5).is_err());
    }

    #[test]
    fn frame_grid_is_r_times_f() {
        let c: ExperimentConfig =
            "ensemble = frame\nr = 200\nf = 20\nn = 50\neta = auto\nsweep_param = relative_noise\nsweep_values = 0.01,0.1"
                .parse()
                .unwrap();
        assert_eq!(c.ensemble.grid_len(), 4000);
        assert_eq!(c.ensemble.topology(), Topology::Cyclic);
        assert_eq!(c.eta, EtaChoice::Auto);
        assert_eq!(c.at(0.1).unwrap().relative_noise, 0.1);
    }

    #[test]
    fn unknown_and_duplicate_keys_are_hard_errors() {
        let err = format!("{PARAXIAL}\ncolour = blue").parse::<ExperimentConfig>().unwrap_err();
        assert!(matches!(err, Error::Config { line: 15, .. }), "{err}");
        let err = format!("{PARAXIAL}\nf = 10").parse::<ExperimentConfig>().unwrap_err();
        assert!(matches!(err, Error::Config { line: 15, .. }), "{err}");
    }

    #[test]
    fn invalid_values_are_rejected() {
        for bad in [
            PARAXIAL.replace("eta = 0.3", "eta = 1.5"),
            PARAXIAL.replace("trials = 100", "trials = 0"),
            PARAXIAL.replace("omp, bomp, bloomp", "omp, lasso"),
            PARAXIAL.replace("omp, bomp, bloomp", "omp, omp"),
            PARAXIAL.replace("sweep_param = n", "sweep_param = colour"),
            PARAXIAL.replace("m = 4000", ""),
            PARAXIAL.replace("m = 4000", "r = 200"),
            PARAXIAL.replace("dynamic_range = 5", "dynamic_range = 0.5"),
            PARAXIAL.replace("ensemble = paraxial", "ensemble = lens"),
        ] {
            assert!(bad.parse::<ExperimentConfig>().is_err(), "{bad}");
        }
    }
}
