use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::engine::Instance;
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Serialize)]
struct Document<'a> {
    version: u64,
    #[serde(flatten)]
    instance: &'a Instance,
}

pub fn to_json_string(instance: &Instance) -> Result<String> {
    let doc = Document {
        version: FORMAT_VERSION,
        instance,
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::schema("", e.to_string()))
}

/// Parse and validate an instance document.
pub fn from_json_str(text: &str) -> Result<Instance> {
    let mut value: Value =
        serde_json::from_str(text).map_err(|e| Error::schema("", e.to_string()))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Error::schema("", "expected a JSON object"))?;
    match obj.remove("version") {
        Some(Value::Number(n)) if n.as_u64() == Some(FORMAT_VERSION) => {}
        Some(other) => {
            return Err(Error::schema(
                "version",
                format!("unsupported version {other}, expected {FORMAT_VERSION}"),
            ))
        }
        None => return Err(Error::schema("version", "missing field")),
    }
    let inst: Instance = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        Error::schema(path, e.into_inner().to_string())
    })?;
    inst.validate()?;
    Ok(inst)
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    from_json_str(&fs::read_to_string(path)?)
}

pub fn save_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_json_string(instance)? + "\n")?;
    Ok(())
}
