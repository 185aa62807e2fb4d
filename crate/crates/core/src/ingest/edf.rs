//! Reader for classic 16-bit EDF files (256-byte fixed header, per-signal
//! headers, interleaved little-endian data records). EDF+ annotation signals
//! are skipped; other EDF+ extensions are not interpreted.

use super::{IngestError, Recording};
use std::path::Path;

const FIXED_HEADER: usize = 256;
const PER_SIGNAL_HEADER: usize = 256;

struct Field<'a> {
    bytes: &'a [u8],
    offset: usize,
}

impl<'a> Field<'a> {
    fn str(&self) -> Result<&'a str, IngestError> {
        std::str::from_utf8(self.bytes)
            .map(str::trim)
            .map_err(|_| IngestError::Parse {
                offset: Some(self.offset as u64),
                message: "field is not ASCII".into(),
            })
    }

    fn int(&self, what: &str) -> Result<i64, IngestError> {
        let s = self.str()?;
        s.parse().map_err(|_| IngestError::Parse {
            offset: Some(self.offset as u64),
            message: format!("{what}: expected integer, got {s:?}"),
        })
    }

    fn float(&self, what: &str) -> Result<f64, IngestError> {
        let s = self.str()?;
        s.parse().map_err(|_| IngestError::Parse {
            offset: Some(self.offset as u64),
            message: format!("{what}: expected number, got {s:?}"),
        })
    }
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<Field<'a>, IngestError> {
        if self.pos + len > self.data.len() {
            return Err(IngestError::Parse {
                offset: Some(self.pos as u64),
                message: format!(
                    "file truncated: need {len} bytes at offset {}, file has {}",
                    self.pos,
                    self.data.len()
                ),
            });
        }
        let field = Field {
            bytes: &self.data[self.pos..self.pos + len],
            offset: self.pos,
        };
        self.pos += len;
        Ok(field)
    }
}

struct SignalHeader {
    label: String,
    physical_min: f64,
    physical_max: f64,
    digital_min: i64,
    digital_max: i64,
    samples_per_record: usize,
}

impl SignalHeader {
    fn is_annotation(&self) -> bool {
        self.label == "EDF Annotations"
    }

    fn scale(&self) -> f64 {
        (self.physical_max - self.physical_min) / (self.digital_max - self.digital_min) as f64
    }
}

/// Load one recording from a classic EDF file. Digital values are converted
/// to physical units via the per-signal header min/max. The condition label
/// is left empty (assigned by the experiment config); the subject id is the
/// file stem.
pub fn load_edf(path: impl AsRef<Path>) -> Result<Recording, IngestError> {
    let path = path.as_ref();
    let data = std::fs::read(path)?;
    let subject = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();

    let mut r = Reader {
        data: &data,
        pos: 0,
    };
    r.take(8)?; // version
    r.take(80)?; // patient id
    r.take(80)?; // recording id
    r.take(8)?; // start date
    r.take(8)?; // start time
    let header_bytes = r.take(8)?.int("header byte count")?;
    r.take(44)?; // reserved
    let n_records = r.take(8)?.int("number of data records")?;
    let record_duration = r.take(8)?.float("record duration")?;
    let n_signals = r.take(4)?.int("number of signals")?;

    if n_signals <= 0 {
        return Err(IngestError::Integrity(format!(
            "header declares {n_signals} signals"
        )));
    }
    let ns = n_signals as usize;
    let expected_header = FIXED_HEADER + ns * PER_SIGNAL_HEADER;
    if header_bytes != expected_header as i64 {
        return Err(IngestError::Integrity(format!(
            "header byte count {header_bytes} does not match {expected_header} for {ns} signals"
        )));
    }

    // Per-signal headers are grouped by field, not by signal.
    let labels: Vec<Field> = (0..ns).map(|_| r.take(16)).collect::<Result<_, _>>()?;
    for _ in 0..ns {
        r.take(80)?; // transducer type
    }
    for _ in 0..ns {
        r.take(8)?; // physical dimension
    }
    let pmins: Vec<Field> = (0..ns).map(|_| r.take(8)).collect::<Result<_, _>>()?;
    let pmaxs: Vec<Field> = (0..ns).map(|_| r.take(8)).collect::<Result<_, _>>()?;
    let dmins: Vec<Field> = (0..ns).map(|_| r.take(8)).collect::<Result<_, _>>()?;
    let dmaxs: Vec<Field> = (0..ns).map(|_| r.take(8)).collect::<Result<_, _>>()?;
    for _ in 0..ns {
        r.take(80)?; // prefiltering
    }
    let sprs: Vec<Field> = (0..ns).map(|_| r.take(8)).collect::<Result<_, _>>()?;
    for _ in 0..ns {
        r.take(32)?; // reserved
    }

    let mut signals = Vec::with_capacity(ns);
    for i in 0..ns {
        let spr = sprs[i].int("samples per record")?;
        if spr <= 0 {
            return Err(IngestError::Integrity(format!(
                "signal {i} declares {spr} samples per record"
            )));
        }
        let sig = SignalHeader {
            label: labels[i].str()?.to_string(),
            physical_min: pmins[i].float("physical minimum")?,
            physical_max: pmaxs[i].float("physical maximum")?,
            digital_min: dmins[i].int("digital minimum")?,
            digital_max: dmaxs[i].int("digital maximum")?,
            samples_per_record: spr as usize,
        };
        if !sig.is_annotation() && sig.digital_max == sig.digital_min {
            return Err(IngestError::Integrity(format!(
                "signal {i} ({}) has equal digital min and max",
                sig.label
            )));
        }
        signals.push(sig);
    }

    let record_size: usize = signals.iter().map(|s| s.samples_per_record * 2).sum();
    if record_size == 0 {
        return Err(IngestError::Integrity("zero-length data records".into()));
    }
    let payload = &data[r.pos..];
    let n_records = if n_records < 0 {
        // unknown record count: infer from the payload size
        if payload.len() % record_size != 0 {
            return Err(IngestError::Integrity(format!(
                "payload of {} bytes is not a whole number of {record_size}-byte records",
                payload.len()
            )));
        }
        payload.len() / record_size
    } else {
        n_records as usize
    };
    if payload.len() != n_records * record_size {
        return Err(IngestError::Integrity(format!(
            "payload holds {} bytes, expected {} for {n_records} records of {record_size} bytes",
            payload.len(),
            n_records * record_size
        )));
    }

    let kept: Vec<usize> = (0..ns).filter(|&i| !signals[i].is_annotation()).collect();
    if kept.is_empty() {
        return Err(IngestError::Integrity(
            "file holds only annotation signals".into(),
        ));
    }
    let spr0 = signals[kept[0]].samples_per_record;
    if let Some(&bad) = kept.iter().find(|&&i| signals[i].samples_per_record != spr0) {
        return Err(IngestError::Integrity(format!(
            "signal '{}' has {} samples per record, expected {spr0}",
            signals[bad].label, signals[bad].samples_per_record
        )));
    }
    if !(record_duration > 0.0) {
        return Err(IngestError::Integrity(format!(
            "record duration must be positive, got {record_duration}"
        )));
    }
    let sampling_rate = spr0 as f64 / record_duration;

    let mut channels = Vec::with_capacity(kept.len());
    let mut samples: Vec<Vec<f64>> = Vec::with_capacity(kept.len());
    for &i in &kept {
        channels.push(signals[i].label.clone());
        samples.push(Vec::with_capacity(n_records * spr0));
    }

    let mut pos = 0usize;
    for _record in 0..n_records {
        let mut out_idx = 0usize;
        for (i, sig) in signals.iter().enumerate() {
            let nbytes = sig.samples_per_record * 2;
            let chunk = &payload[pos..pos + nbytes];
            if !sig.is_annotation() {
                let scale = sig.scale();
                let out = &mut samples[out_idx];
                for pair in chunk.chunks_exact(2) {
                    let digital = i16::from_le_bytes([pair[0], pair[1]]) as i64;
                    out.push(sig.physical_min + (digital - sig.digital_min) as f64 * scale);
                }
                out_idx += 1;
            }
            pos += nbytes;
            let _ = i;
        }
    }

    Ok(Recording::new(channels, samples, sampling_rate)?.with_subject(subject))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn empty_file_is_a_parse_error() {
        let f = tempfile::NamedTempFile::new().unwrap();
        let err = load_edf(f.path()).unwrap_err();
        assert!(matches!(err, IngestError::Parse { .. }), "{err}");
    }

    #[test]
    fn zero_signal_header_is_an_integrity_error() {
        // minimal fixed header declaring 0 signals
        let mut h = Vec::new();
        h.extend_from_slice(format!("{:<8}", "0").as_bytes());
        h.extend_from_slice(&[b' '; 80]);
        h.extend_from_slice(&[b' '; 80]);
        h.extend_from_slice(format!("{:<8}", "01.01.20").as_bytes());
        h.extend_from_slice(format!("{:<8}", "00.00.00").as_bytes());
        h.extend_from_slice(format!("{:<8}", 256).as_bytes());
        h.extend_from_slice(&[b' '; 44]);
        h.extend_from_slice(format!("{:<8}", 0).as_bytes());
        h.extend_from_slice(format!("{:<8}", 1).as_bytes());
        h.extend_from_slice(format!("{:<4}", 0).as_bytes());
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(&h).unwrap();
        let err = load_edf(f.path()).unwrap_err();
        assert!(matches!(err, IngestError::Integrity(_)), "{err}");
    }
}
