//! Plain-text configuration files: one `key = value` per line, `#` comments.
//!
//! Keys use the long flag names of the active subcommand. Command-line flags
//! take precedence; keys no subcommand option consumes are errors, so a sweep
//! is always fully described by flags plus one file.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::AppError;

/// Parsed configuration file with consumption tracking.
#[derive(Debug, Default)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

pub fn load(path: Option<&Path>) -> Result<FileConfig, AppError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
    let mut values = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(AppError::Invalid(format!(
                "config line {}: expected `key = value`, got `{raw}`",
                lineno + 1
            )));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if values.insert(key.clone(), value).is_some() {
            return Err(AppError::Invalid(format!(
                "config line {}: duplicate key `{key}`",
                lineno + 1
            )));
        }
    }
    Ok(FileConfig { values })
}

impl FileConfig {
    /// Fills `slot` from the config when the command line left it empty.
    pub fn fill<T: FromStr>(&mut self, key: &str, slot: &mut Option<T>) -> Result<(), AppError>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(raw) = self.values.remove(key) {
            if slot.is_none() {
                let parsed = raw.parse::<T>().map_err(|e| {
                    AppError::Invalid(format!("config key `{key}`: cannot parse `{raw}`: {e}"))
                })?;
                *slot = Some(parsed);
            }
        }
        Ok(())
    }

    /// Fills a boolean flag (`true`/`false`).
    pub fn fill_flag(&mut self, key: &str, slot: &mut bool) -> Result<(), AppError> {
        if let Some(raw) = self.values.remove(key) {
            if !*slot {
                *slot = raw.parse::<bool>().map_err(|_| {
                    AppError::Invalid(format!(
                        "config key `{key}`: expected true or false, got `{raw}`"
                    ))
                })?;
            }
        }
        Ok(())
    }

    /// Fills a repeatable numeric option from a comma-separated value.
    pub fn fill_list(&mut self, key: &str, slot: &mut Vec<f64>) -> Result<(), AppError> {
        if let Some(raw) = self.values.remove(key) {
            if slot.is_empty() {
                for part in raw.split(',') {
                    let v = part.trim().parse::<f64>().map_err(|_| {
                        AppError::Invalid(format!(
                            "config key `{key}`: cannot parse `{part}` as a number"
                        ))
                    })?;
                    slot.push(v);
                }
            }
        }
        Ok(())
    }

    /// Errors on any key the subcommand did not consume.
    pub fn finish(self) -> Result<(), AppError> {
        if let Some(key) = self.values.keys().next() {
            return Err(AppError::Invalid(format!(
                "unknown config key `{key}` for this subcommand"
            )));
        }
        Ok(())
    }
}

/// Parses clap value-enum strings coming from a config file.
pub fn parse_enum<T: clap::ValueEnum>(key: &str, raw: &str) -> Result<T, AppError> {
    T::from_str(raw, true)
        .map_err(|_| AppError::Invalid(format!("config key `{key}`: invalid value `{raw}`")))
}

impl FileConfig {
    /// Fills a clap value-enum option.
    pub fn fill_enum<T: clap::ValueEnum>(
        &mut self,
        key: &str,
        slot: &mut Option<T>,
    ) -> Result<(), AppError> {
        if let Some(raw) = self.values.remove(key) {
            if slot.is_none() {
                *slot = Some(parse_enum(key, &raw)?);
            }
        }
        Ok(())
    }
}
