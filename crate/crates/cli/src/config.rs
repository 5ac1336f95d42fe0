//! Run configuration and its flat `key = value` text format.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemKind {
    Chain,
    Lattice,
    Classical2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pipeline {
    Exact,
    Volterra,
    Both,
    LatticeSeries,
    LatticeInversion,
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_owned())
        .unwrap_or_default()
}

fn parse_value<T: ValueEnum>(s: &str) -> Result<T, String> {
    T::from_str(s.trim(), true)
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&value_name(self))
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&value_name(self))
    }
}

impl FromStr for SystemKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        parse_value(s)
    }
}

impl FromStr for Pipeline {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        parse_value(s)
    }
}

/// Everything needed to run one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemKind,
    pub sites: usize,
    pub boundary: i64,
    pub start: i64,
    /// Site energies; all zero when absent.
    pub energies: Option<Vec<f64>>,
    /// Nearest-neighbour couplings; all one when absent.
    pub couplings: Option<Vec<f64>>,
    pub pipeline: Pipeline,
    pub t_max: f64,
    pub h: f64,
    /// Hop rate of the classical two-site model.
    pub rate: f64,
    pub search_max: f64,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn defaults(system: SystemKind) -> Self {
        Self {
            system,
            sites: 2,
            boundary: 1,
            start: 1,
            energies: None,
            couplings: None,
            pipeline: default_pipeline(system),
            t_max: 2.0,
            h: 1e-3,
            rate: 1.0,
            search_max: qfpt_core::fptcore::DEFAULT_SEARCH_MAX,
            output: None,
        }
    }

    /// Checks the combinations the solvers cannot handle.
    pub fn validate(&self) -> Result<(), String> {
        use Pipeline::*;
        let allowed: &[Pipeline] = match self.system {
            SystemKind::Chain => &[Exact, Volterra, Both],
            SystemKind::Lattice => &[LatticeSeries, LatticeInversion, Volterra],
            SystemKind::Classical2 => &[Volterra],
        };
        if !allowed.contains(&self.pipeline) {
            return Err(format!(
                "pipeline {} is not available for system {}",
                self.pipeline, self.system
            ));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(format!("tmax must be positive, got {}", self.t_max));
        }
        if !(self.h > 0.0 && self.h <= self.t_max) {
            return Err(format!("h must lie in (0, tmax], got {}", self.h));
        }
        if !(self.search_max > 0.0 && self.search_max.is_finite()) {
            return Err(format!(
                "search_max must be positive, got {}",
                self.search_max
            ));
        }
        match self.system {
            SystemKind::Chain => {
                if self.sites < 2 {
                    return Err(format!(
                        "a chain needs at least 2 sites, got {}",
                        self.sites
                    ));
                }
                if let Some(e) = &self.energies {
                    if e.len() != self.sites {
                        return Err(format!(
                            "{} energies given for {} sites",
                            e.len(),
                            self.sites
                        ));
                    }
                }
                if let Some(c) = &self.couplings {
                    if c.len() + 1 != self.sites {
                        return Err(format!(
                            "{} couplings given for {} sites (need {})",
                            c.len(),
                            self.sites,
                            self.sites - 1
                        ));
                    }
                }
            }
            SystemKind::Classical2 => {
                if !(self.rate > 0.0 && self.rate.is_finite()) {
                    return Err(format!("rate must be positive, got {}", self.rate));
                }
            }
            SystemKind::Lattice => {}
        }
        Ok(())
    }

    /// Text form read back by [`RunConfig::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::from("# qfpt run configuration\n");
        let mut line = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        line("system", self.system.to_string());
        line("sites", self.sites.to_string());
        line("boundary", self.boundary.to_string());
        line("start", self.start.to_string());
        if let Some(e) = &self.energies {
            line("energies", join(e));
        }
        if let Some(c) = &self.couplings {
            line("couplings", join(c));
        }
        line("pipeline", self.pipeline.to_string());
        line("tmax", self.t_max.to_string());
        line("h", self.h.to_string());
        line("rate", self.rate.to_string());
        line("search_max", self.search_max.to_string());
        if let Some(p) = &self.output {
            line("output", p.display().to_string());
        }
        out
    }

    /// Parses the text format. Unset keys take the defaults of the given
    /// `system` (which itself defaults to `chain`).
    pub fn parse(text: &str) -> Result<Self, String> {
        let entries = parse_entries(text)?;
        let system = match entries.iter().find(|(k, _)| k == "system") {
            Some((_, v)) => v.parse()?,
            None => SystemKind::Chain,
        };
        let mut cfg = Self::defaults(system);
        for (key, value) in &entries {
            cfg.set(key, value)?;
        }
        Ok(cfg)
    }

    /// Sets one field from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let v = value.trim();
        let bad = |e: &dyn fmt::Display| format!("bad value for {key}: {e}");
        match key {
            "system" => {
                let system: SystemKind = v.parse()?;
                if system != self.system {
                    self.system = system;
                    self.pipeline = default_pipeline(system);
                }
            }
            "sites" => self.sites = v.parse().map_err(|e| bad(&e))?,
            "boundary" => self.boundary = v.parse().map_err(|e| bad(&e))?,
            "start" => self.start = v.parse().map_err(|e| bad(&e))?,
            "energies" => self.energies = Some(parse_list(v).map_err(|e| bad(&e))?),
            "couplings" => self.couplings = Some(parse_list(v).map_err(|e| bad(&e))?),
            "pipeline" => self.pipeline = v.parse()?,
            "tmax" => self.t_max = v.parse().map_err(|e| bad(&e))?,
            "h" => self.h = v.parse().map_err(|e| bad(&e))?,
            "rate" => self.rate = v.parse().map_err(|e| bad(&e))?,
            "search_max" => self.search_max = v.parse().map_err(|e| bad(&e))?,
            "output" => self.output = Some(PathBuf::from(v)),
            _ => return Err(format!("unknown config key `{key}`")),
        }
        Ok(())
    }
}

fn default_pipeline(system: SystemKind) -> Pipeline {
    match system {
        SystemKind::Chain => Pipeline::Exact,
        SystemKind::Lattice => Pipeline::LatticeInversion,
        SystemKind::Classical2 => Pipeline::Volterra,
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
}

fn parse_list(v: &str) -> Result<Vec<f64>, std::num::ParseFloatError> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|x| x.trim().parse()).collect()
}

fn parse_entries(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", n + 1))?;
        out.push((k.trim().to_owned(), v.trim().to_owned()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_comments_and_lists() {
        let cfg = RunConfig::parse(
            "# three sites\nsites = 3\nboundary=2 # doorway (2,3)\ncouplings = 1, 0.5\n\npipeline = both\n",
        )
        .unwrap();
        assert_eq!(cfg.system, SystemKind::Chain);
        assert_eq!(cfg.sites, 3);
        assert_eq!(cfg.boundary, 2);
        assert_eq!(cfg.couplings, Some(vec![1.0, 0.5]));
        assert_eq!(cfg.pipeline, Pipeline::Both);
        assert_eq!(cfg.h, 1e-3);
    }

    #[test]
    fn system_sets_default_pipeline() {
        let cfg = RunConfig::parse("system = lattice").unwrap();
        assert_eq!(cfg.pipeline, Pipeline::LatticeInversion);
        let cfg = RunConfig::parse("pipeline = volterra\nsystem = classical2").unwrap();
        assert_eq!(cfg.pipeline, Pipeline::Volterra);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::parse("sites 3").is_err());
        assert!(RunConfig::parse("colour = red").is_err());
        assert!(RunConfig::parse("sites = three").is_err());
        assert!(RunConfig::parse("pipeline = fast").is_err());
    }

    #[test]
    fn validation_rules() {
        let mut cfg = RunConfig::defaults(SystemKind::Lattice);
        cfg.pipeline = Pipeline::Both;
        assert!(cfg.validate().is_err());
        cfg.pipeline = Pipeline::Exact;
        assert!(cfg.validate().is_err());
        cfg.pipeline = Pipeline::Volterra;
        assert!(cfg.validate().is_ok());

        let mut cfg = RunConfig::defaults(SystemKind::Chain);
        cfg.sites = 3;
        cfg.couplings = Some(vec![1.0]);
        assert!(cfg.validate().is_err());
        cfg.couplings = None;
        cfg.h = 0.0;
        assert!(cfg.validate().is_err());
    }

    fn finite() -> impl Strategy<Value = f64> {
        prop_oneof![-1e3..1e3f64, 1e-9..1e-1f64]
    }

    fn any_config() -> impl Strategy<Value = RunConfig> {
        (
            prop_oneof![
                Just(SystemKind::Chain),
                Just(SystemKind::Lattice),
                Just(SystemKind::Classical2)
            ],
            2usize..12,
            -3i64..12,
            -3i64..12,
            proptest::option::of(proptest::collection::vec(finite(), 0..6)),
            proptest::option::of(proptest::collection::vec(finite(), 0..6)),
            prop_oneof![
                Just(Pipeline::Exact),
                Just(Pipeline::Volterra),
                Just(Pipeline::Both),
                Just(Pipeline::LatticeSeries),
                Just(Pipeline::LatticeInversion)
            ],
            (finite(), finite(), finite(), finite()),
            proptest::option::of("[a-z][a-z0-9_./-]{0,20}"),
        )
            .prop_map(
                |(system, sites, boundary, start, energies, couplings, pipeline, nums, output)| {
                    RunConfig {
                        system,
                        sites,
                        boundary,
                        start,
                        energies,
                        couplings,
                        pipeline,
                        t_max: nums.0,
                        h: nums.1,
                        rate: nums.2,
                        search_max: nums.3,
                        output: output.map(PathBuf::from),
                    }
                },
            )
    }

    proptest! {
        #[test]
        fn dump_round_trips(cfg in any_config()) {
            let back = RunConfig::parse(&cfg.to_text()).unwrap();
            prop_assert_eq!(back, cfg);
        }
    }
}
