//! Labelled one- and two-dimensional scan results.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::ExperimentError;

pub const RAD_PER_US: &str = "rad/us";
pub const MHZ: &str = "MHz";
pub const US: &str = "us";
pub const RAD: &str = "rad";
pub const PHOTONS: &str = "photons";
pub const RATE: &str = "1/us";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub unit: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: &str, unit: &str, values: Vec<f64>) -> Self {
        Self {
            name: name.to_string(),
            unit: unit.to_string(),
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Values are stored row-major: `values[i * axis2.len() + j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub value_name: String,
    pub value_unit: String,
    pub values: Vec<f64>,
    pub metadata: BTreeMap<String, String>,
}

impl ScanResult {
    pub fn new(
        axis1: Axis,
        axis2: Option<Axis>,
        value: (&str, &str),
        values: Vec<f64>,
    ) -> Result<Self, ExperimentError> {
        let expected = axis1.len() * axis2.as_ref().map_or(1, Axis::len);
        if values.len() != expected {
            return Err(ExperimentError::InvalidParameter(format!(
                "{} values for a {expected}-point grid",
                values.len()
            )));
        }
        let mut metadata = BTreeMap::new();
        metadata.insert("code_version".to_string(), env!("CARGO_PKG_VERSION").to_string());
        Ok(Self {
            axis1,
            axis2,
            value_name: value.0.to_string(),
            value_unit: value.1.to_string(),
            values,
            metadata,
        })
    }

    pub fn with_metadata(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    pub fn is_map(&self) -> bool {
        self.axis2.is_some()
    }

    pub fn inner_len(&self) -> usize {
        self.axis2.as_ref().map_or(1, Axis::len)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.inner_len() + j]
    }

    /// Values along axis 2 at axis-1 index `i`.
    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.inner_len();
        &self.values[i * n..(i + 1) * n]
    }

    /// Values along axis 1 at axis-2 index `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.axis1.len()).map(|i| self.get(i, j)).collect()
    }
}
