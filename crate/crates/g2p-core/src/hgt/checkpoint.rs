use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ModelConfig;
use super::params::{tensor_specs, HgtParams, Tensor};
use super::ModelError;

/// File layout: magic, little-endian u32 header length, JSON header with the
/// configuration and the tensor name/shape list in order, then the tensor
/// data as contiguous little-endian f32.
pub const CHECKPOINT_MAGIC: &[u8; 4] = b"G2P1";

#[derive(Serialize, Deserialize)]
struct Header {
    config: ModelConfig,
    tensors: Vec<TensorMeta>,
}

#[derive(Serialize, Deserialize)]
struct TensorMeta {
    name: String,
    shape: Vec<usize>,
}

pub fn save_checkpoint(params: &HgtParams, path: &Path) -> Result<(), ModelError> {
    let header = Header {
        config: params.config.clone(),
        tensors: params
            .tensors
            .iter()
            .map(|t| TensorMeta {
                name: t.name.clone(),
                shape: t.shape.clone(),
            })
            .collect(),
    };
    let header_json = serde_json::to_vec(&header)
        .map_err(|e| checkpoint_err(path, format!("header serialization failed: {e}")))?;

    let mut bytes = Vec::with_capacity(8 + header_json.len() + params.total_params() * 4);
    bytes.extend_from_slice(CHECKPOINT_MAGIC);
    bytes.extend_from_slice(&(header_json.len() as u32).to_le_bytes());
    bytes.extend_from_slice(&header_json);
    for tensor in &params.tensors {
        for value in &tensor.data {
            bytes.extend_from_slice(&value.to_le_bytes());
        }
    }
    fs::write(path, bytes).map_err(|e| ModelError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

pub fn load_checkpoint(path: &Path) -> Result<HgtParams, ModelError> {
    let bytes = fs::read(path).map_err(|e| ModelError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let fail = |reason: String| checkpoint_err(path, reason);

    if bytes.len() < 8 || &bytes[..4] != CHECKPOINT_MAGIC {
        return Err(fail("bad magic: not a model checkpoint".into()));
    }
    let header_len = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    if bytes.len() < 8 + header_len {
        return Err(fail("truncated header".into()));
    }
    let header: Header = serde_json::from_slice(&bytes[8..8 + header_len])
        .map_err(|e| checkpoint_err(path, format!("malformed header: {e}")))?;
    header.config.validate()?;

    // The header must agree with the layout the config implies.
    let expected = tensor_specs(&header.config);
    if expected.len() != header.tensors.len() {
        return Err(fail(format!(
            "tensor list length {} does not match configuration ({} expected)",
            header.tensors.len(),
            expected.len()
        )));
    }
    for ((name, shape), meta) in expected.iter().zip(&header.tensors) {
        if *name != meta.name || *shape != meta.shape {
            return Err(fail(format!(
                "tensor mismatch: header has {} {:?}, config implies {} {:?}",
                meta.name, meta.shape, name, shape
            )));
        }
    }

    let mut offset = 8 + header_len;
    let mut tensors = Vec::with_capacity(header.tensors.len());
    for meta in header.tensors {
        let len: usize = meta.shape.iter().product();
        let n_bytes = len * 4;
        if bytes.len() < offset + n_bytes {
            return Err(fail(format!("truncated data for tensor {}", meta.name)));
        }
        let mut data = Vec::with_capacity(len);
        for chunk in bytes[offset..offset + n_bytes].chunks_exact(4) {
            data.push(f32::from_le_bytes(chunk.try_into().unwrap()));
        }
        offset += n_bytes;
        tensors.push(Tensor {
            name: meta.name,
            shape: meta.shape,
            data,
        });
    }
    if offset != bytes.len() {
        return Err(fail(format!(
            "{} trailing bytes after tensor data",
            bytes.len() - offset
        )));
    }
    Ok(HgtParams {
        config: header.config,
        tensors,
    })
}

fn checkpoint_err(path: &Path, reason: String) -> ModelError {
    ModelError::Checkpoint {
        path: path.display().to_string(),
        reason,
    }
}
