//! Eigenvalue datasets: factored-integer notation and the JSON layout.
//!
//! A dataset file looks like
//!
//! ```json
//! { "source": "...", "genus": 2, "weight": 20,
//!   "records": [ { "label": "Y20", "p": 2, "T0p": "-2^8*3^2*5*73",
//!                  "Tp2_aggregate": "2^16*523*7243", "Ti_p2": null,
//!                  "flags": [] } ] }
//! ```
//!
//! Eigenvalues stay in factored form in the file and become exact integers
//! on load. Serializing a loaded dataset reproduces the canonical file
//! byte for byte.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Pow};
use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Result, SatakeError};
use crate::hecke::{EigenvalueRecord, GeneratorEigenvalues};
use crate::krieg::MatrixConvention;

/// Flag marking a record that is loaded but known to be unusable.
pub const EXCLUDED: &str = "excluded";

const BUNDLED: [(&str, &str); 2] = [
    ("skoruppa_genus2.json", include_str!("../data/skoruppa_genus2.json")),
    ("schottky_genus4.json", include_str!("../data/schottky_genus4.json")),
];

/// Names of the datasets compiled into the library.
pub fn bundled_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(name, _)| *name)
}

/// Contents of a bundled dataset, looked up by file name.
pub fn bundled_source(name: &str) -> Option<&'static str> {
    let base = Path::new(name).file_name()?.to_str()?;
    BUNDLED.iter().find(|(n, _)| *n == base).map(|(_, text)| *text)
}

/// Parses `[sign] B[^E] * B[^E] * ...`; whitespace is ignored and
/// positions in errors are byte offsets into `s`.
pub fn parse_factored_integer(s: &str) -> Result<BigInt> {
    let bytes = s.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let err = |position: usize, message: &str| SatakeError::Parse {
        position,
        message: message.to_string(),
    };
    let digits = |pos: &mut usize| -> Option<(usize, usize)> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        (*pos > start).then_some((start, *pos))
    };

    skip_ws(&mut pos);
    let negative = match bytes.get(pos) {
        Some(b'-') => {
            pos += 1;
            true
        }
        Some(b'+') => {
            pos += 1;
            false
        }
        _ => false,
    };
    let mut value = BigInt::one();
    loop {
        skip_ws(&mut pos);
        let (a, b) = digits(&mut pos).ok_or_else(|| err(pos, "expected a decimal base"))?;
        let base: BigInt = s[a..b].parse().map_err(|_| err(a, "invalid base"))?;
        skip_ws(&mut pos);
        let mut factor = base;
        if bytes.get(pos) == Some(&b'^') {
            pos += 1;
            skip_ws(&mut pos);
            let (a, b) = digits(&mut pos).ok_or_else(|| err(pos, "expected a decimal exponent"))?;
            let e: u32 = s[a..b].parse().map_err(|_| err(a, "exponent out of range"))?;
            factor = factor.pow(e);
            skip_ws(&mut pos);
        }
        value *= factor;
        match bytes.get(pos) {
            None => break,
            Some(b'*') => pos += 1,
            Some(_) => return Err(err(pos, "expected '*' or end of input")),
        }
    }
    Ok(if negative { -value } else { value })
}

/// How the keys of `Ti_p2` are numbered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorIndexing {
    /// Key `i` is `T_i(p^2)`, the generator with `n - i` unit blocks.
    Standard,
    /// Key `i` counts the unit blocks, i.e. it is our `T_{n-i}(p^2)`.
    UnitBlocks,
}

/// A printed parameter value used as an expectation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedValue {
    pub re: String,
    pub im: String,
    /// Looser tolerance for the real part (documented corrections).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re_tol: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRecord {
    pub label: String,
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<u32>,
    #[serde(rename = "T0p")]
    pub t0p: String,
    #[serde(rename = "Tp2_aggregate", default)]
    pub tp2_aggregate: Option<String>,
    #[serde(rename = "Ti_p2", default, deserialize_with = "unique_keys")]
    pub ti_p2: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expected: Vec<ExpectedValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// On-disk layout of a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetFile {
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    pub genus: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator_indexing: Option<GeneratorIndexing>,
    /// Matrix convention under which the `expected` values were produced.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    pub records: Vec<RawRecord>,
}

struct UniqueMap(BTreeMap<String, String>);

impl<'de> Deserialize<'de> for UniqueMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = UniqueMap;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from generator index to factored integer")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<UniqueMap, A::Error> {
                let mut out = BTreeMap::new();
                while let Some((k, v)) = access.next_entry::<String, String>()? {
                    if out.contains_key(&k) {
                        return Err(serde::de::Error::custom(format!("duplicate generator key {k:?}")));
                    }
                    out.insert(k, v);
                }
                Ok(UniqueMap(out))
            }
        }
        d.deserialize_map(V)
    }
}

fn unique_keys<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BTreeMap<String, String>>, D::Error> {
    Ok(Option::<UniqueMap>::deserialize(d)?.map(|m| m.0))
}

/// An expectation with its numeric tolerance override.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expected {
    pub value: Complex64,
    pub re_tol: Option<f64>,
}

/// A validated record with its annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetEntry {
    pub record: EigenvalueRecord,
    pub flags: Vec<String>,
    pub expected: Vec<Expected>,
    pub note: Option<String>,
}

impl DatasetEntry {
    pub fn excluded(&self) -> bool {
        self.flags.iter().any(|f| f == EXCLUDED)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub file: DatasetFile,
    pub entries: Vec<DatasetEntry>,
}

impl Dataset {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: DatasetFile =
            serde_json::from_str(text).map_err(|e| SatakeError::Dataset(format!("schema violation: {e}")))?;
        Self::from_file(file)
    }

    pub fn from_file(file: DatasetFile) -> Result<Self> {
        if file.genus == 0 {
            return Err(SatakeError::Dataset("genus must be positive".into()));
        }
        if let Some(c) = &file.convention {
            c.parse::<MatrixConvention>()
                .map_err(|e| SatakeError::Dataset(e.to_string()))?;
        }
        let mut seen = HashSet::new();
        let mut entries = Vec::with_capacity(file.records.len());
        for raw in &file.records {
            if !seen.insert((raw.label.clone(), raw.p)) {
                return Err(SatakeError::Dataset(format!(
                    "duplicate record {} p={}",
                    raw.label, raw.p
                )));
            }
            entries.push(convert(&file, raw)?);
        }
        Ok(Dataset { file, entries })
    }

    /// Canonical JSON text: two-space indentation, trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.file).expect("dataset serializes");
        s.push('\n');
        s
    }

    /// Convention declared by the file, if any.
    pub fn convention(&self) -> Option<MatrixConvention> {
        self.file.convention.as_deref().and_then(|c| c.parse().ok())
    }

    pub fn empty(source: &str, genus: usize) -> Self {
        Dataset {
            file: DatasetFile {
                source: source.to_string(),
                table: None,
                genus,
                weight: None,
                generator_indexing: None,
                convention: None,
                records: Vec::new(),
            },
            entries: Vec::new(),
        }
    }
}

fn parse_field(label: &str, p: u64, field: &str, s: &str) -> Result<BigInt> {
    parse_factored_integer(s).map_err(|e| match e {
        SatakeError::Parse { position, message } => SatakeError::Parse {
            position,
            message: format!("{label} p={p} {field} {s:?}: {message}"),
        },
        other => other,
    })
}

fn parse_float(label: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| SatakeError::Dataset(format!("{label}: {s:?} is not a number")))
}

fn convert(file: &DatasetFile, raw: &RawRecord) -> Result<DatasetEntry> {
    let (label, p, n) = (raw.label.as_str(), raw.p, file.genus);
    let k = raw
        .weight
        .or(file.weight)
        .ok_or_else(|| SatakeError::Dataset(format!("{label} p={p}: no weight given")))?;
    let lambda_t0p = parse_field(label, p, "T0p", &raw.t0p)?;
    let generators = match (&raw.tp2_aggregate, &raw.ti_p2) {
        (Some(s), None) => GeneratorEigenvalues::Aggregate {
            tp2: parse_field(label, p, "Tp2_aggregate", s)?,
        },
        (None, Some(map)) => {
            let unit_blocks = file.generator_indexing == Some(GeneratorIndexing::UnitBlocks);
            let mut values = vec![None; n];
            let mut t0p2 = None;
            for (key, s) in map {
                let i: usize = key
                    .parse()
                    .ok()
                    .filter(|i| *i <= n)
                    .ok_or_else(|| SatakeError::Dataset(format!("{label} p={p}: bad generator key {key:?}")))?;
                let ours = if unit_blocks { n - i } else { i };
                let v = parse_field(label, p, &format!("Ti_p2[{key}]"), s)?;
                if ours == 0 {
                    t0p2 = Some(v);
                } else {
                    values[ours - 1] = Some(v);
                }
            }
            GeneratorEigenvalues::PerGenerator { values, t0p2 }
        }
        _ => {
            return Err(SatakeError::Dataset(format!(
                "{label} p={p}: exactly one of Tp2_aggregate and Ti_p2 must be given"
            )))
        }
    };
    let record = EigenvalueRecord {
        label: raw.label.clone(),
        n,
        k,
        p,
        lambda_t0p,
        generators,
    };
    record.validate()?;
    let expected = raw
        .expected
        .iter()
        .map(|e| {
            Ok(Expected {
                value: Complex64::new(parse_float(label, &e.re)?, parse_float(label, &e.im)?),
                re_tol: e.re_tol.as_deref().map(|t| parse_float(label, t)).transpose()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if !expected.is_empty() && expected.len() != n {
        return Err(SatakeError::Dataset(format!(
            "{label} p={p}: {} expected values for genus {n}",
            expected.len()
        )));
    }
    Ok(DatasetEntry {
        record,
        flags: raw.flags.clone(),
        expected,
        note: raw.note.clone(),
    })
}

/// Reads and validates a dataset file.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| SatakeError::Dataset(format!("cannot read {}: {e}", path.display())))?;
    Dataset::from_json(&text)
}

/// A file on disk if it exists, otherwise the bundled dataset of that name.
pub fn resolve_dataset(name: &str) -> Result<Dataset> {
    if Path::new(name).exists() {
        return load_dataset(name);
    }
    match bundled_source(name) {
        Some(text) => Dataset::from_json(text),
        None => Err(SatakeError::Dataset(format!(
            "no such file {name:?} and no bundled dataset of that name"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    #[test]
    fn factored_examples() {
        assert_eq!(parse_factored_integer("-2^8*3^2*5*73").unwrap(), big("-840960"));
        assert_eq!(parse_factored_integer("1").unwrap(), big("1"));
        assert_eq!(parse_factored_integer("2^6*3^3*5").unwrap(), big("8640"));
        assert_eq!(parse_factored_integer(" - 2 ^ 3 * 7 ").unwrap(), big("-56"));
    }

    #[test]
    fn factored_errors_carry_positions() {
        for (s, at) in [("", 0), ("2^", 2), ("2**3", 2), ("2^3x", 3), ("-", 1), ("2 3", 2)] {
            match parse_factored_integer(s) {
                Err(SatakeError::Parse { position, .. }) => assert_eq!(position, at, "{s:?}"),
                other => panic!("{s:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn bundled_genus_two() {
        let d = Dataset::from_json(bundled_source("skoruppa_genus2.json").unwrap()).unwrap();
        assert_eq!(d.entries.len(), 19);
        let excluded: Vec<_> = d.entries.iter().filter(|e| e.excluded()).collect();
        assert_eq!(excluded.len(), 1);
        assert_eq!((excluded[0].record.label.as_str(), excluded[0].record.p), ("Y24a", 5));
        let first = &d.entries[0].record;
        assert_eq!(first.lambda_t0p, big("-840960"));
        assert_eq!(first.k, 20);
    }

    #[test]
    fn bundled_schottky() {
        let d = Dataset::from_json(bundled_source("schottky_genus4.json").unwrap()).unwrap();
        let primes: Vec<u64> = d.entries.iter().map(|e| e.record.p).collect();
        assert_eq!(primes, vec![2, 3, 5, 7]);
        for e in &d.entries {
            assert!(e.record.top_synthesized());
            match &e.record.generators {
                GeneratorEigenvalues::PerGenerator { values, t0p2 } => {
                    assert!(t0p2.is_none());
                    assert!(values[..3].iter().all(Option::is_some));
                }
                other => panic!("unexpected {other:?}"),
            }
        }
        // printed T_1 column (one unit block) lands on our T_3
        match &d.entries[0].record.generators {
            GeneratorEigenvalues::PerGenerator { values, .. } => {
                assert_eq!(values[2], Some(big("-122880")));
                assert_eq!(values[0], Some(big("-11059200")));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn bundled_round_trip_is_byte_identical() {
        for name in bundled_names() {
            let text = bundled_source(name).unwrap();
            assert_eq!(Dataset::from_json(text).unwrap().to_json(), text, "{name}");
        }
    }

    #[test]
    fn empty_record_list_is_valid() {
        let d = Dataset::from_json(r#"{"source": "none", "genus": 2, "records": []}"#).unwrap();
        assert!(d.entries.is_empty());
    }

    #[test]
    fn schema_violations_are_rejected() {
        let bad = [
            r#"{"source": "x", "genus": 2, "records": [], "extra": 1}"#,
            r#"{"source": "x", "genus": 2, "genus": 2, "records": []}"#,
            r#"{"source": "x", "genus": 4, "weight": 8, "records": [{"label": "J", "p": 2, "T0p": "1",
                "Tp2_aggregate": null, "Ti_p2": {"1": "1", "1": "2"}, "flags": []}]}"#,
            r#"{"source": "x", "genus": 2, "weight": 20, "records": [{"label": "A", "p": 2, "T0p": "1",
                "Tp2_aggregate": null, "Ti_p2": null, "flags": []}]}"#,
            r#"{"source": "x", "genus": 2, "records": [{"label": "A", "p": 2, "T0p": "1",
                "Tp2_aggregate": "1", "Ti_p2": null, "flags": []}]}"#,
            r#"{"source": "x", "genus": 2, "weight": 20, "records": [{"label": "A", "p": 4, "T0p": "1",
                "Tp2_aggregate": "1", "Ti_p2": null, "flags": []}]}"#,
        ];
        for text in bad {
            assert!(
                matches!(Dataset::from_json(text), Err(SatakeError::Dataset(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn duplicate_records_are_rejected() {
        let rec = r#"{"label": "A", "p": 2, "T0p": "1", "Tp2_aggregate": "1", "Ti_p2": null, "flags": []}"#;
        let text = format!(r#"{{"source": "x", "genus": 2, "weight": 20, "records": [{rec}, {rec}]}}"#);
        assert!(matches!(Dataset::from_json(&text), Err(SatakeError::Dataset(_))));
    }

    #[test]
    fn inconsistent_top_generator_is_rejected() {
        // genus 1, weight 12, p = 2: T_1(p^2) must be 2^10
        let text = r#"{"source": "x", "genus": 1, "weight": 12, "records": [{"label": "D", "p": 2, "T0p": "-24",
            "Tp2_aggregate": null, "Ti_p2": {"1": "2^9"}, "flags": []}]}"#;
        assert!(matches!(Dataset::from_json(text), Err(SatakeError::Dataset(_))));
    }

    #[test]
    fn malformed_eigenvalue_is_a_parse_error() {
        let text = r#"{"source": "x", "genus": 2, "weight": 20, "records": [{"label": "A", "p": 2, "T0p": "2^^3",
            "Tp2_aggregate": "1", "Ti_p2": null, "flags": []}]}"#;
        assert!(matches!(
            Dataset::from_json(text),
            Err(SatakeError::Parse { position: 2, .. })
        ));
    }
}
