use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{RbError, Result};

/// One sequence: length, index within the length, observed survival and counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub m: usize,
    pub seq: usize,
    pub survival: f64,
    pub successes: Option<u64>,
    pub shots: u64,
}

/// Mean survival over the sequences of one length.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub m: usize,
    pub mean: f64,
    /// Unbiased sample variance of the per-sequence survivals (0 for one sequence).
    pub variance: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RbDataset {
    n: usize,
    records: Vec<Record>,
}

impl RbDataset {
    pub fn new(n: usize, records: Vec<Record>) -> Result<Self> {
        if n == 0 {
            return Err(RbError::Domain("n must be at least 1".into()));
        }
        for r in &records {
            if r.m < 1 {
                return Err(RbError::Contract(format!("record with m={} < 1", r.m)));
            }
            if !(0.0..=1.0).contains(&r.survival) {
                return Err(RbError::Contract(format!(
                    "survival {} outside [0, 1] at m={}",
                    r.survival, r.m
                )));
            }
            if let Some(k) = r.successes {
                if k > r.shots {
                    return Err(RbError::Contract(format!(
                        "{k} successes exceed {} shots at m={}",
                        r.shots, r.m
                    )));
                }
            }
        }
        Ok(RbDataset { n, records })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    /// Per-length means in increasing `m`.
    pub fn mean_curve(&self) -> Vec<CurvePoint> {
        let mut ms: Vec<usize> = self.records.iter().map(|r| r.m).collect();
        ms.sort_unstable();
        ms.dedup();
        ms.into_iter()
            .map(|m| {
                let xs: Vec<f64> = self
                    .records
                    .iter()
                    .filter(|r| r.m == m)
                    .map(|r| r.survival)
                    .collect();
                let count = xs.len();
                let mean = xs.iter().sum::<f64>() / count as f64;
                let variance = if count > 1 {
                    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64
                } else {
                    0.0
                };
                CurvePoint {
                    m,
                    mean,
                    variance,
                    count,
                }
            })
            .collect()
    }

    /// CSV with header `m,seq,survival,successes,shots`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.records {
            out.serialize(r).map_err(|e| RbError::Io(e.into()))?;
        }
        Ok(out.flush()?)
    }

    pub fn read_csv<R: Read>(n: usize, r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let records = rdr
            .deserialize()
            .collect::<std::result::Result<Vec<Record>, _>>()
            .map_err(|e| RbError::Parse(format!("bad dataset CSV: {e}")))?;
        if records.is_empty() {
            return Err(RbError::Parse("dataset CSV has no records".into()));
        }
        RbDataset::new(n, records)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(m: usize, seq: usize, survival: f64) -> Record {
        Record {
            m,
            seq,
            survival,
            successes: None,
            shots: 0,
        }
    }

    #[test]
    fn csv_round_trip() {
        let mut records = vec![rec(1, 0, 0.9), rec(1, 1, 0.8), rec(4, 0, 0.5)];
        records[2].successes = Some(5);
        records[2].shots = 10;
        let data = RbDataset::new(1, records).unwrap();
        let mut buf = Vec::new();
        data.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("m,seq,survival,successes,shots\n"));
        assert_eq!(RbDataset::read_csv(1, buf.as_slice()).unwrap(), data);
    }

    #[test]
    fn means_and_validation() {
        let data = RbDataset::new(1, vec![rec(2, 0, 0.9), rec(1, 0, 1.0), rec(2, 1, 0.7)]).unwrap();
        let curve = data.mean_curve();
        assert_eq!(curve.len(), 2);
        assert_eq!(curve[0].m, 1);
        assert!((curve[1].mean - 0.8).abs() < 1e-15);
        assert!((curve[1].variance - 0.02).abs() < 1e-15);
        assert!(RbDataset::new(1, vec![rec(1, 0, 1.5)]).is_err());
        assert!(RbDataset::read_csv(1, "m,seq\n1,x\n".as_bytes()).is_err());
    }
}
