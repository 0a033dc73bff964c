//! Value cache persistence as a JSON object `{key: value}`.
//!
//! Exact values are written `r=<order>:[c0,c1,...]` and approximate ones
//! `approx:<re>,<im>`.

use std::collections::BTreeMap;
use std::fs;
use std::io::ErrorKind;
use std::path::Path;

use decalage_core::rational;
use decalage_core::{ApproxComplex, CyclotomicElement, FieldCache, Scalar, ValueCache};

use crate::error::CliError;

pub fn encode(v: &Scalar) -> String {
    match v {
        Scalar::Exact(e) => {
            let parts: Vec<String> = e.coords().iter().map(rational::canonical).collect();
            format!("r={}:[{}]", e.field().order(), parts.join(","))
        }
        Scalar::Approx(z) => format!("approx:{:e},{:e}", z.re, z.im),
    }
}

pub fn decode(text: &str, fields: &mut FieldCache) -> Option<Scalar> {
    if let Some(rest) = text.strip_prefix("approx:") {
        let (re, im) = rest.split_once(',')?;
        return Some(Scalar::Approx(ApproxComplex::new(re.parse().ok()?, im.parse().ok()?)));
    }
    let rest = text.strip_prefix("r=")?;
    let (order, coords) = rest.split_once(':')?;
    let field = fields.get(order.parse().ok()?).ok()?;
    let inner = coords.strip_prefix('[')?.strip_suffix(']')?;
    let coords = inner.split(',').map(rational::parse).collect::<Option<Vec<_>>>()?;
    if coords.len() != field.degree() {
        return None;
    }
    Some(Scalar::Exact(CyclotomicElement::from_coeffs(&field, coords)))
}

/// Reads a cache file. A missing file gives an empty cache.
pub fn load(path: &Path) -> Result<ValueCache, CliError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == ErrorKind::NotFound => return Ok(ValueCache::new()),
        Err(e) => return Err(CliError::Io(format!("cannot read cache {}: {e}", path.display()))),
    };
    let map: BTreeMap<String, String> =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("cache {}: {e}", path.display())))?;
    let mut fields = FieldCache::new();
    let mut cache = ValueCache::new();
    for (key, value) in map {
        let v = decode(&value, &mut fields).ok_or_else(|| CliError::Parse(format!("cache entry {key:?} has bad value {value:?}")))?;
        cache.insert(key, v);
    }
    Ok(cache)
}

pub fn save(path: &Path, cache: &ValueCache) -> Result<(), CliError> {
    let map: BTreeMap<&String, String> = cache.iter().map(|(k, v)| (k, encode(v))).collect();
    let text = serde_json::to_string_pretty(&map).expect("string map serializes");
    fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("cannot write cache {}: {e}", path.display())))
}
