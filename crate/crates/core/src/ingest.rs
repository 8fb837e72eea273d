//! Raw/feature CSV formats, outlier clipping and min-max normalization.

use std::collections::HashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{AffectLabel, Band, FeatureKind, FeatureMatrix, RawDataset, RawRecording, FRAMES, N_BANDS};

pub const RAW_HEADER: &str = "participant_id,label,t,delta,theta,alphaLow,alphaHigh,betaLow,betaHigh,gammaLow,gammaMid";

/// Default clipping threshold in sample standard deviations.
pub const DEFAULT_CLIP_Z: f64 = 3.0;

fn parse_err(line: u64, message: impl Into<String>) -> Error {
    Error::Parse { line: line as usize, message: message.into() }
}

fn line_of(rec: &csv::StringRecord) -> u64 {
    rec.position().map_or(0, |p| p.line())
}

/// Parses the long-format raw CSV (one row per second per recording).
///
/// Recordings appear in order of their first row; frames are ordered by `t`.
pub fn parse_raw_csv<R: Read>(input: R) -> Result<RawDataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
    let header = rdr.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != RAW_HEADER {
        return Err(Error::Header { expected: RAW_HEADER.into(), found: header });
    }

    let mut order: Vec<(u32, AffectLabel)> = Vec::new();
    let mut slots: HashMap<(u32, AffectLabel), Vec<Option<[f64; N_BANDS]>>> = HashMap::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = line_of(&rec);
        let participant: u32 = rec[0]
            .parse()
            .ok()
            .filter(|&p| p > 0)
            .ok_or_else(|| parse_err(line, format!("invalid participant_id `{}`", &rec[0])))?;
        let label: AffectLabel = rec[1].parse().map_err(|_| parse_err(line, format!("invalid label `{}`", &rec[1])))?;
        if rec[2].is_empty() {
            return Err(parse_err(line, "missing t"));
        }
        let t: usize = rec[2]
            .parse()
            .ok()
            .filter(|&t| t < FRAMES)
            .ok_or_else(|| parse_err(line, format!("t `{}` is not an integer in 0..{FRAMES}", &rec[2])))?;
        let mut frame = [0.0; N_BANDS];
        for (b, v) in frame.iter_mut().enumerate() {
            let field = &rec[3 + b];
            *v = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(line, format!("non-numeric {} value `{field}`", Band::ALL[b])))?;
        }
        let key = (participant, label);
        let frames = slots.entry(key).or_insert_with(|| {
            order.push(key);
            vec![None; FRAMES]
        });
        if frames[t].replace(frame).is_some() {
            return Err(Error::DuplicateRow { participant, label: label.to_string(), t });
        }
    }

    let mut recordings = Vec::with_capacity(order.len());
    for key in order {
        let slots = slots.remove(&key).expect("key recorded on insert");
        let present = slots.iter().filter(|s| s.is_some()).count();
        if let Some(t) = slots.iter().position(Option::is_none) {
            if present + 1 < FRAMES {
                return Err(Error::FrameCount { participant: key.0, label: key.1.to_string(), rows: present });
            }
            return Err(Error::MissingFrame { participant: key.0, label: key.1.to_string(), t });
        }
        recordings.push(RawRecording {
            participant_id: key.0,
            label: key.1,
            frames: slots.into_iter().map(|s| s.expect("checked")).collect(),
        });
    }
    Ok(RawDataset { recordings })
}

/// Writes `ds` in the raw CSV format; floats use shortest round-trip form.
pub fn write_raw_csv<W: Write>(ds: &RawDataset, mut out: W) -> Result<()> {
    writeln!(out, "{RAW_HEADER}")?;
    for r in &ds.recordings {
        for (t, frame) in r.frames.iter().enumerate() {
            write!(out, "{},{},{}", r.participant_id, r.label, t)?;
            for v in frame {
                write!(out, ",{v}")?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Writes a feature matrix: `participant_id,label,<column names>`.
pub fn write_feature_csv<W: Write>(fm: &FeatureMatrix, mut out: W) -> Result<()> {
    write!(out, "participant_id,label")?;
    for name in &fm.column_names {
        write!(out, ",{name}")?;
    }
    writeln!(out)?;
    for i in 0..fm.nrows() {
        write!(out, "{},{}", fm.participant_ids[i], fm.labels[i])?;
        for v in fm.values.row(i) {
            write!(out, ",{v}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn infer_kind(names: &[String]) -> FeatureKind {
    let stat = |n: &String| n.starts_with("stat:");
    let adv = |n: &String| n.starts_with("adv:");
    match names.len() {
        56 if names.iter().all(stat) => FeatureKind::Statistical,
        64 if names.iter().all(adv) => FeatureKind::Advanced,
        120 if names[..56].iter().all(stat) && names[56..].iter().all(adv) => FeatureKind::Fused,
        _ => FeatureKind::Derived,
    }
}

pub fn read_feature_csv<R: Read>(input: R) -> Result<FeatureMatrix> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
    let headers = rdr.headers()?.clone();
    if headers.len() < 3 || &headers[0] != "participant_id" || &headers[1] != "label" {
        return Err(Error::Header {
            expected: "participant_id,label,<feature columns>".into(),
            found: headers.iter().collect::<Vec<_>>().join(","),
        });
    }
    let names: Vec<String> = headers.iter().skip(2).map(str::to_owned).collect();
    let (mut ids, mut labels, mut data) = (Vec::new(), Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec?;
        let line = line_of(&rec);
        if rec.len() != headers.len() {
            return Err(parse_err(line, format!("expected {} fields, found {}", headers.len(), rec.len())));
        }
        ids.push(rec[0].parse().map_err(|_| parse_err(line, format!("invalid participant_id `{}`", &rec[0])))?);
        labels.push(rec[1].parse().map_err(|_| parse_err(line, format!("invalid label `{}`", &rec[1])))?);
        for (j, field) in rec.iter().skip(2).enumerate() {
            let v: f64 = field
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| parse_err(line, format!("non-numeric value `{field}` in column {}", names[j])))?;
            data.push(v);
        }
    }
    let kind = infer_kind(&names);
    let values = Matrix::from_vec(labels.len(), names.len(), data)?;
    FeatureMatrix::new(values, names, ids, labels, kind)
}

/// Replaces values farther than `z` sample standard deviations from their
/// column mean with the nearer bound `mean ± z·std`. Zero-variance columns
/// pass through unchanged.
pub fn clip_outliers(m: &Matrix, z: f64) -> Result<Matrix> {
    if !(z > 0.0) {
        return Err(Error::InvalidArgument(format!("clip threshold must be > 0, got {z}")));
    }
    let n = m.nrows();
    if n < 2 {
        return Err(Error::InvalidArgument("clipping needs at least two rows".into()));
    }
    let bounds: Vec<(f64, f64)> = (0..m.ncols())
        .map(|j| {
            let col = m.column(j);
            let mean = col.iter().sum::<f64>() / n as f64;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            let sd = var.sqrt();
            (mean - z * sd, mean + z * sd)
        })
        .collect();
    Ok(m.map_columns(|j, v| {
        let (lo, hi) = bounds[j];
        if lo == hi {
            v
        } else {
            v.clamp(lo, hi)
        }
    }))
}

/// Clips each recording's own 60×8 frame matrix, band by band.
pub fn clip_recordings(ds: &RawDataset, z: f64) -> Result<RawDataset> {
    let recordings = ds
        .recordings
        .iter()
        .map(|r| {
            let m = Matrix::from_rows(&r.frames)?;
            let c = clip_outliers(&m, z)?;
            let frames = c.rows_iter().map(|row| row.try_into().expect("8 bands")).collect();
            Ok(RawRecording { frames, ..r.clone() })
        })
        .collect::<Result<_>>()?;
    Ok(RawDataset { recordings })
}

/// Column-wise range learned from one matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(m: &Matrix) -> Result<Self> {
        if m.nrows() == 0 {
            return Err(Error::Degenerate("cannot fit a scaler on zero rows".into()));
        }
        let (mut min, mut max) = (vec![f64::INFINITY; m.ncols()], vec![f64::NEG_INFINITY; m.ncols()]);
        for row in m.rows_iter() {
            for (j, &v) in row.iter().enumerate() {
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        Ok(Self { min, max })
    }

    /// Maps each column onto `[0, 1]` using the fitted range, clamping values
    /// outside it. Constant columns map to 0.
    pub fn apply(&self, m: &Matrix) -> Result<Matrix> {
        if m.ncols() != self.min.len() {
            return Err(Error::Dimension { expected: self.min.len(), got: m.ncols() });
        }
        Ok(m.map_columns(|j, v| {
            let span = self.max[j] - self.min[j];
            if span > 0.0 {
                ((v - self.min[j]) / span).clamp(0.0, 1.0)
            } else {
                0.0
            }
        }))
    }
}

pub fn fit_minmax(m: &Matrix) -> Result<MinMaxScaler> {
    MinMaxScaler::fit(m)
}

pub fn apply_minmax(s: &MinMaxScaler, m: &Matrix) -> Result<Matrix> {
    s.apply(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: &[f64]) -> Matrix {
        Matrix::from_vec(v.len(), 1, v.to_vec()).unwrap()
    }

    #[test]
    fn clipping() {
        // mean 20.8, sample std 44.27: 100 lies inside mean + 3 std.
        let m = col(&[1.0, 1.0, 1.0, 1.0, 100.0]);
        assert_eq!(clip_outliers(&m, 3.0).unwrap(), m);

        let mut v = vec![0.0; 9];
        v.push(10.0);
        let c = clip_outliers(&col(&v), 2.0).unwrap();
        let bound = 1.0 + 2.0 * 10f64.sqrt();
        assert!((c.get(9, 0) - bound).abs() < 1e-12);
        assert!(c.column(0)[..9].iter().all(|&x| x == 0.0));

        let flat = col(&[4.0; 6]);
        assert_eq!(clip_outliers(&flat, 0.5).unwrap(), flat);
        assert!(clip_outliers(&col(&[1.0]), 3.0).is_err());
        assert!(clip_outliers(&flat, 0.0).is_err());
    }

    #[test]
    fn minmax() {
        let s = fit_minmax(&col(&[2.0, 4.0, 6.0])).unwrap();
        assert_eq!((s.min[0], s.max[0]), (2.0, 6.0));
        assert_eq!(apply_minmax(&s, &col(&[4.0])).unwrap().get(0, 0), 0.5);

        let c = fit_minmax(&col(&[5.0, 5.0])).unwrap();
        assert_eq!((c.min[0], c.max[0]), (5.0, 5.0));
        assert_eq!(apply_minmax(&c, &col(&[5.0, 7.0])).unwrap().column(0), vec![0.0, 0.0]);

        let single = fit_minmax(&Matrix::from_rows(&[[1.0, 2.0]]).unwrap()).unwrap();
        assert_eq!(single.min, single.max);

        let r = fit_minmax(&col(&[0.0, 10.0])).unwrap();
        assert_eq!(apply_minmax(&r, &col(&[12.0, -1.0])).unwrap().column(0), vec![1.0, 0.0]);
        assert!(apply_minmax(&r, &Matrix::zeros(1, 2)).is_err());
    }

    fn raw_text(skip_t: Option<usize>, label: &str) -> String {
        let mut s = format!("{RAW_HEADER}\n");
        for t in 0..FRAMES {
            if Some(t) == skip_t {
                continue;
            }
            s.push_str(&format!("4,{label},{t},1,2,3,4,5,6,7,8.5\n"));
        }
        s
    }

    #[test]
    fn raw_parsing() {
        let ds = parse_raw_csv(raw_text(None, "FUNNY").as_bytes()).unwrap();
        assert_eq!(ds.recordings.len(), 1);
        assert_eq!(ds.recordings[0].label, AffectLabel::Happy);
        assert_eq!(ds.recordings[0].frames[10][7], 8.5);

        let err = parse_raw_csv(raw_text(Some(31), "sad").as_bytes()).unwrap_err();
        assert!(matches!(err, Error::MissingFrame { participant: 4, t: 31, .. }), "{err}");
        assert!(err.to_string().contains("sad"));

        let bad_header = raw_text(None, "sad").replacen("gammaMid", "gamma", 1);
        assert!(matches!(parse_raw_csv(bad_header.as_bytes()), Err(Error::Header { .. })));

        let bad_value = raw_text(None, "sad").replacen(",8.5\n", ",x\n", 1);
        assert!(matches!(parse_raw_csv(bad_value.as_bytes()), Err(Error::Parse { line: 2, .. })));

        let mut dup = raw_text(None, "sad");
        dup.push_str("4,sad,3,1,1,1,1,1,1,1,1\n");
        assert!(matches!(parse_raw_csv(dup.as_bytes()), Err(Error::DuplicateRow { t: 3, .. })));

        let missing_t = raw_text(None, "sad").replacen("4,sad,0,", "4,sad,,", 1);
        assert!(matches!(parse_raw_csv(missing_t.as_bytes()), Err(Error::Parse { .. })));

        let mut short = format!("{RAW_HEADER}\n");
        short.push_str("4,sad,0,1,2,3,4,5,6,7,8\n");
        assert!(matches!(parse_raw_csv(short.as_bytes()), Err(Error::FrameCount { rows: 1, .. })));
    }
}
