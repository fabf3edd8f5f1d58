use std::path::Path;

use serde::{Deserialize, Serialize};

use super::problem::{decode_versioned, read_text, write_text, FORMAT_VERSION};
use crate::error::HarnessError;
use crate::svm::SvmModel;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u64,
    #[serde(flatten)]
    model: SvmModel,
}

pub fn model_to_json(model: &SvmModel) -> String {
    let file = ModelFile {
        format_version: FORMAT_VERSION,
        model: model.clone(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("finite model");
    s.push('\n');
    s
}

/// Parses a model file; standardization statistics are required.
pub fn model_from_json(text: &str) -> Result<SvmModel, HarnessError> {
    let file: ModelFile = decode_versioned(text, "model")?;
    let m = file.model;
    let stats = m.stats.as_ref().ok_or(HarnessError::MissingStats)?;
    let width = m.feature_mask.as_ref().map_or(stats.width(), |k| k.len());
    if stats.sd.len() != stats.width()
        || width != stats.width()
        || m.support_vectors.len() != m.coefficients.len()
        || m.support_vectors.iter().any(|v| v.len() != width)
    {
        return Err(HarnessError::Corrupt("model: inconsistent dimensions".into()));
    }
    Ok(m)
}

pub fn save_model(model: &SvmModel, path: &Path) -> Result<(), HarnessError> {
    write_text(path, &model_to_json(model))
}

pub fn load_model(path: &Path) -> Result<SvmModel, HarnessError> {
    model_from_json(&read_text(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::fit_standardization;
    use crate::svm::train;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn model() -> SvmModel {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rows: Vec<Vec<f64>> = (0..30).map(|_| (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
        let y: Vec<i8> = rows.iter().map(|r| if r[0] * r[1] > 0.0 { 1 } else { -1 }).collect();
        let stats = fit_standardization(&rows).unwrap();
        let z: Vec<Vec<f64>> = rows.iter().map(|r| stats.apply_row(r).unwrap()).collect();
        let mut m = train(&z, &y, 0.7, 3.0, 1.0).unwrap();
        m.stats = Some(stats);
        m
    }

    #[test]
    fn round_trip_bit_identical() {
        let m = model();
        let back = model_from_json(&model_to_json(&m)).unwrap();
        assert_eq!(back, m);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let (a, b) = (m.decision_value_raw(&x).unwrap(), back.decision_value_raw(&x).unwrap());
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn errors() {
        let text = model_to_json(&model());
        let wrong = text.replacen("\"format_version\": 1", "\"format_version\": 2", 1);
        assert!(matches!(model_from_json(&wrong), Err(HarnessError::VersionMismatch { found: 2, .. })));
        assert!(matches!(model_from_json(&text[..text.len() / 2]), Err(HarnessError::Corrupt(_))));
        let mut m = model();
        m.stats = None;
        assert!(matches!(model_from_json(&model_to_json(&m)), Err(HarnessError::MissingStats)));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.json");
        let m = model();
        save_model(&m, &p).unwrap();
        assert_eq!(load_model(&p).unwrap(), m);
        assert!(matches!(load_model(&dir.path().join("none.json")), Err(HarnessError::Io { .. })));
    }
}
