//! `name:start:stop:points[:scale]` sweep specifications.

use crate::UsageError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

impl std::str::FromStr for Scale {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "linear" | "lin" => Ok(Scale::Linear),
            "log" => Ok(Scale::Log),
            _ => Err(format!("unknown scale '{s}' (expected linear or log)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: Scale,
}

impl SweepSpec {
    /// `name:start:stop:points[:scale]`
    pub fn parse_named(flag: &str, text: &str, default_scale: Scale) -> Result<Self, UsageError> {
        let (name, rest) = text
            .split_once(':')
            .ok_or_else(|| UsageError::new(flag, format!("expected name:start:stop:points[:scale], got '{text}'")))?;
        Self::parse_unnamed(flag, name, rest, default_scale)
    }

    /// `start:stop:points[:scale]` for a known variable.
    pub fn parse_unnamed(flag: &str, variable: &str, text: &str, default_scale: Scale) -> Result<Self, UsageError> {
        let bad = |m: String| UsageError::new(flag, m);
        let parts: Vec<&str> = text.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad(format!("expected start:stop:points[:scale], got '{text}'")));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(format!("'{s}' is not a number")));
        let start = num(parts[0])?;
        let stop = num(parts[1])?;
        let points: usize = parts[2].trim().parse().map_err(|_| bad(format!("'{}' is not a point count", parts[2])))?;
        let scale = match parts.get(3) {
            Some(s) => s.parse().map_err(bad)?,
            None => default_scale,
        };
        let spec = SweepSpec { variable: variable.to_string(), start, stop, points, scale };
        spec.validate().map_err(bad)?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.points < 2 {
            return Err(format!("a sweep needs at least 2 points, got {}", self.points));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err("sweep bounds must be finite".into());
        }
        if !(self.start < self.stop) {
            return Err(format!("sweep start {} must be below stop {}", self.start, self.stop));
        }
        if self.scale == Scale::Log && !(self.start > 0.0) {
            return Err(format!("log scale needs a positive start, got {}", self.start));
        }
        Ok(())
    }

    /// Grid values; both endpoints are hit exactly.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == n - 1 {
                    return self.stop;
                }
                let t = i as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.start + (self.stop - self.start) * t,
                    Scale::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * t).exp(),
                }
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let s = match self.scale {
            Scale::Linear => "linear",
            Scale::Log => "log",
        };
        format!("{}:{}:{}:{}:{}", self.variable, self.start, self.stop, self.points, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_spans_endpoints() {
        let s = SweepSpec::parse_named("--sweep", "n:1e14:1e17:40:log", Scale::Linear).unwrap();
        assert_eq!(s.variable, "n");
        let v = s.values();
        assert_eq!(v.len(), 40);
        assert_eq!(v[0], 1e14);
        assert_eq!(v[39], 1e17);
        assert!((v[13] / 1e15 - 1.0).abs() < 1e-12);
        let l = SweepSpec::parse_unnamed("--xi-sweep", "xi", "0.1:3:30", Scale::Linear).unwrap();
        assert_eq!(l.scale, Scale::Linear);
        assert!((l.values()[1] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["1:2", "2:1:10", "0:1:10:log", "1:2:1", "1:2:0", "a:2:3", "1:2:3:cubic", "1:2:3:log:x"] {
            let e = SweepSpec::parse_unnamed("--theta-sweep", "theta", bad, Scale::Linear).unwrap_err();
            assert_eq!(e.flag, "--theta-sweep", "{bad}");
        }
        assert!(SweepSpec::parse_named("--sweep", "nocolon", Scale::Log).is_err());
    }

    #[test]
    fn round_trips_through_text() {
        let s = SweepSpec::parse_named("--sweep", "T:60:300:9:linear", Scale::Log).unwrap();
        assert_eq!(SweepSpec::parse_named("--sweep", &s.to_text(), Scale::Log).unwrap(), s);
    }
}
