//! CSV recordings: header row of channel names, numeric body, one column
//! per channel.

use super::{IngestError, Recording};
use std::path::Path;

/// Load a recording from a UTF-8, comma-separated file. The header row gives
/// the channel labels; every body cell must be numeric and every row must
/// match the header width.
pub fn load_csv(
    path: impl AsRef<Path>,
    sampling_rate: f64,
    condition: &str,
) -> Result<Recording, IngestError> {
    let path = path.as_ref();
    let subject = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .map_err(|e| IngestError::Csv {
            row: 0,
            col: 0,
            message: e.to_string(),
        })?;
    let channels: Vec<String> = reader
        .headers()
        .map_err(|e| IngestError::Csv {
            row: 0,
            col: 0,
            message: e.to_string(),
        })?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let width = channels.len();

    let mut samples: Vec<Vec<f64>> = vec![Vec::new(); width];
    for (row_idx, record) in reader.records().enumerate() {
        let row = row_idx + 1; // 1-based body row, header is row 0
        let record = record.map_err(|e| IngestError::Csv {
            row,
            col: 0,
            message: e.to_string(),
        })?;
        if record.len() != width {
            return Err(IngestError::Csv {
                row,
                col: record.len(),
                message: format!("ragged row: {} cells, expected {width}", record.len()),
            });
        }
        for (col, cell) in record.iter().enumerate() {
            let value: f64 = cell.trim().parse().map_err(|_| IngestError::Csv {
                row,
                col,
                message: format!("non-numeric cell {cell:?}"),
            })?;
            samples[col].push(value);
        }
    }

    Ok(Recording::new(channels, samples, sampling_rate)?
        .with_condition(condition)
        .with_subject(subject))
}
