//! CKP instance data model, benchmark generators and the JSON file format.
//!
//! An instance file is a single UTF-8 JSON document:
//!
//! ```json
//! {
//!   "name": "sc-n3-s1",
//!   "kind": "SC",
//!   "n": 3,
//!   "rho": 0.95,
//!   "capacity": 12.0,
//!   "seed": 1,
//!   "items": [ { "profit": 10, "mean": 4.0, "sigma": 0.5 }, ... ]
//! }
//! ```
//!
//! `seed` may be `null` for hand-written instances. Reals are written in
//! shortest round-trip form, so a save/load cycle is lossless.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss;
use crate::rng::SampleRng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Item {
    pub profit: u64,
    pub mean: f64,
    pub sigma: f64,
}

impl Item {
    pub fn new(profit: u64, mean: f64, sigma: f64) -> Self {
        Item {
            profit,
            mean,
            sigma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum InstanceKind {
    /// Strongly correlated: `profit = mean + 10`.
    Sc,
    /// Inverse strongly correlated: `mean = min(100, profit + 10)`.
    Ic,
    /// Subset sum: `profit = mean`.
    Ss,
    Custom,
}

impl InstanceKind {
    pub fn label(self) -> &'static str {
        match self {
            InstanceKind::Sc => "SC",
            InstanceKind::Ic => "IC",
            InstanceKind::Ss => "SS",
            InstanceKind::Custom => "CUSTOM",
        }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SC" => Ok(InstanceKind::Sc),
            "IC" => Ok(InstanceKind::Ic),
            "SS" => Ok(InstanceKind::Ss),
            "CUSTOM" => Ok(InstanceKind::Custom),
            _ => Err(Error::validation(format!("unknown instance kind {s:?}"))),
        }
    }
}

/// A validated CKP instance. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    name: String,
    kind: InstanceKind,
    n: usize,
    rho: f64,
    capacity: f64,
    seed: Option<u64>,
    items: Vec<Item>,
    #[serde(skip)]
    z: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    name: String,
    kind: InstanceKind,
    n: usize,
    rho: f64,
    capacity: f64,
    seed: Option<u64>,
    items: Vec<Item>,
}

impl Instance {
    pub fn new(
        name: impl Into<String>,
        kind: InstanceKind,
        items: Vec<Item>,
        capacity: f64,
        rho: f64,
        seed: Option<u64>,
    ) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::validation("instance must contain at least one item"));
        }
        validate_rho(rho)?;
        if !(capacity.is_finite() && capacity >= 0.0) {
            return Err(Error::validation(format!(
                "capacity must be finite and non-negative, got {capacity}"
            )));
        }
        for (j, item) in items.iter().enumerate() {
            if !(item.mean.is_finite() && item.mean >= 0.0) {
                return Err(Error::validation(format!(
                    "item {j}: mean must be finite and non-negative, got {}",
                    item.mean
                )));
            }
            if !(item.sigma.is_finite() && item.sigma >= 0.0) {
                return Err(Error::validation(format!(
                    "item {j}: sigma must be finite and non-negative, got {}",
                    item.sigma
                )));
            }
        }
        let z = gauss::inv_norm_cdf(rho)?.value();
        Ok(Instance {
            name: name.into(),
            kind,
            n: items.len(),
            rho,
            capacity,
            seed,
            items,
            z,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> InstanceKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    /// The standard normal quantile at `rho`.
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn profits(&self) -> impl Iterator<Item = u64> + '_ {
        self.items.iter().map(|it| it.profit)
    }

    /// Copy of this instance with another capacity.
    pub fn with_capacity(&self, capacity: f64) -> Result<Self> {
        Instance::new(
            self.name.clone(),
            self.kind,
            self.items.clone(),
            capacity,
            self.rho,
            self.seed,
        )
    }

    /// Copy of this instance with another reliability level.
    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        Instance::new(
            self.name.clone(),
            self.kind,
            self.items.clone(),
            self.capacity,
            rho,
            self.seed,
        )
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawInstance =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.n != raw.items.len() {
            return Err(Error::validation(format!(
                "field n = {} does not match {} items",
                raw.n,
                raw.items.len()
            )));
        }
        Instance::new(raw.name, raw.kind, raw.items, raw.capacity, raw.rho, raw.seed)
    }
}

fn validate_rho(rho: f64) -> Result<()> {
    if !(0.5..1.0).contains(&rho) {
        return Err(Error::validation(format!(
            "rho must lie in [0.5, 1), got {rho}"
        )));
    }
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Instance::from_json(&text)
}

pub fn save(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, inst.to_json()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    pub kind: InstanceKind,
    pub n: usize,
    pub rho: f64,
    /// Capacity as a fraction of the total mean weight.
    pub capacity_ratio: f64,
    pub seed: u64,
}

impl GeneratorConfig {
    pub const DEFAULT_CAPACITY_RATIO: f64 = 0.5;

    pub fn new(kind: InstanceKind, n: usize, rho: f64, seed: u64) -> Self {
        GeneratorConfig {
            kind,
            n,
            rho,
            capacity_ratio: Self::DEFAULT_CAPACITY_RATIO,
            seed,
        }
    }

    pub fn with_capacity_ratio(mut self, ratio: f64) -> Self {
        self.capacity_ratio = ratio;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == InstanceKind::Custom {
            return Err(Error::validation("generator kind must be SC, IC or SS"));
        }
        if self.n == 0 {
            return Err(Error::validation("n must be at least 1"));
        }
        validate_rho(self.rho)?;
        if !(self.capacity_ratio > 0.0 && self.capacity_ratio <= 1.0) {
            return Err(Error::validation(format!(
                "capacity ratio must lie in (0, 1], got {}",
                self.capacity_ratio
            )));
        }
        Ok(())
    }
}

/// Draws a benchmark instance. Each item takes one integer draw in `[1, 100]`
/// followed by one real draw for its standard deviation in
/// `[0.1 mean, 0.2 mean)`; capacity is `floor(ratio * sum of means)`.
pub fn generate(config: &GeneratorConfig) -> Result<Instance> {
    config.validate()?;
    let mut rng = SampleRng::new(config.seed);
    let mut items = Vec::with_capacity(config.n);
    for _ in 0..config.n {
        let draw = rng.int_inclusive(1, 100);
        let (profit, mean) = match config.kind {
            InstanceKind::Sc => (draw + 10, draw),
            InstanceKind::Ic => (draw, (draw + 10).min(100)),
            InstanceKind::Ss => (draw, draw),
            InstanceKind::Custom => unreachable!("rejected by validate"),
        };
        let mean = mean as f64;
        let sigma = rng.real(0.1 * mean, 0.2 * mean);
        items.push(Item::new(profit, mean, sigma));
    }
    let total_mean: f64 = items.iter().map(|it| it.mean).sum();
    let capacity = (config.capacity_ratio * total_mean).floor();
    let name = format!(
        "{}-n{}-rho{}-s{}",
        config.kind.label().to_ascii_lowercase(),
        config.n,
        config.rho,
        config.seed
    );
    Instance::new(
        name,
        config.kind,
        items,
        capacity,
        config.rho,
        Some(config.seed),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_items() -> Instance {
        Instance::new(
            "ex-a",
            InstanceKind::Custom,
            vec![
                Item::new(10, 4.0, 3.0),
                Item::new(7, 3.0, 4.0),
                Item::new(5, 2.0, 12.0),
            ],
            12.0,
            0.841_344_746_068_542_9,
            None,
        )
        .unwrap()
    }

    #[test]
    fn save_then_load_is_identity() {
        let inst = three_items();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.json");
        save(&inst, &path).unwrap();
        assert_eq!(load(&path).unwrap(), inst);
    }

    fn edited_json(edit: impl FnOnce(&mut serde_json::Map<String, serde_json::Value>)) -> String {
        let mut v: serde_json::Value = serde_json::from_str(&three_items().to_json()).unwrap();
        edit(v.as_object_mut().unwrap());
        v.to_string()
    }

    #[test]
    fn missing_rho_is_a_parse_error_naming_the_field() {
        let text = edited_json(|obj| {
            obj.remove("rho");
        });
        match Instance::from_json(&text).unwrap_err() {
            Error::Parse(msg) => assert!(msg.contains("missing field `rho`"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rho_below_half_is_a_validation_error() {
        let text = edited_json(|obj| {
            obj.insert("rho".into(), serde_json::json!(0.4));
        });
        assert!(matches!(
            Instance::from_json(&text),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn n_must_match_item_count() {
        let text = edited_json(|obj| {
            obj.insert("n".into(), serde_json::json!(4));
        });
        assert!(matches!(
            Instance::from_json(&text),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn rejects_negative_sigma_and_empty_items() {
        assert!(Instance::new("x", InstanceKind::Custom, vec![], 1.0, 0.9, None).is_err());
        let bad = vec![Item::new(1, 1.0, -0.1)];
        assert!(Instance::new("x", InstanceKind::Custom, bad, 1.0, 0.9, None).is_err());
    }

    #[test]
    fn kind_relations_hold() {
        for kind in [InstanceKind::Sc, InstanceKind::Ic, InstanceKind::Ss] {
            let inst = generate(&GeneratorConfig::new(kind, 200, 0.9, 11)).unwrap();
            assert_eq!(inst.n(), 200);
            let mut total = 0.0;
            for it in inst.items() {
                let a = it.mean as u64;
                assert_eq!(a as f64, it.mean);
                match kind {
                    InstanceKind::Sc => {
                        assert!((1..=100).contains(&a));
                        assert_eq!(it.profit, a + 10);
                    }
                    InstanceKind::Ic => {
                        assert!((1..=100).contains(&it.profit));
                        assert_eq!(a, (it.profit + 10).min(100));
                    }
                    InstanceKind::Ss => {
                        assert!((1..=100).contains(&a));
                        assert_eq!(it.profit, a);
                    }
                    InstanceKind::Custom => unreachable!(),
                }
                let ratio = it.sigma / it.mean;
                assert!((0.1..=0.2).contains(&ratio), "{ratio}");
                total += it.mean;
            }
            assert_eq!(inst.capacity(), (0.5 * total).floor());
        }
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let cfg = GeneratorConfig::new(InstanceKind::Sc, 50, 0.95, 3);
        assert_eq!(generate(&cfg).unwrap().to_json(), generate(&cfg).unwrap().to_json());
        let other = GeneratorConfig { seed: 4, ..cfg };
        assert_ne!(generate(&cfg).unwrap().items(), generate(&other).unwrap().items());
    }

    #[test]
    fn generator_rejects_bad_configs() {
        let ok = GeneratorConfig::new(InstanceKind::Ss, 5, 0.9, 0);
        assert!(generate(&GeneratorConfig { n: 0, ..ok }).is_err());
        assert!(generate(&GeneratorConfig { rho: 0.4, ..ok }).is_err());
        assert!(generate(&ok.with_capacity_ratio(0.0)).is_err());
        assert!(generate(&ok.with_capacity_ratio(1.5)).is_err());
        assert!(generate(&GeneratorConfig { kind: InstanceKind::Custom, ..ok }).is_err());
    }
}
