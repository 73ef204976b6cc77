use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{qubits_for_dim, CMatrix, KrausSet, PauliChannel, Superoperator};
use crate::error::{RbError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelRepr {
    Kraus,
    Pauli,
    Super,
}

/// Channel interchange format.
///
/// * `kraus`: `data` is a list of `d × d` matrices.
/// * `pauli`: `data` is a list of `d²` probabilities in Pauli basis order.
/// * `super`: `data` is a `d² × d²` column-stacking superoperator.
///
/// Matrices are lists of rows; entries are `[re, im]` pairs or plain reals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelJson {
    pub d: usize,
    pub repr: ChannelRepr,
    pub data: Value,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Pair([f64; 2]),
    Real(f64),
}

impl Entry {
    fn value(&self) -> Complex64 {
        match *self {
            Entry::Pair([re, im]) => Complex64::new(re, im),
            Entry::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

pub(crate) fn parse_matrix(v: &Value, size: usize) -> Result<CMatrix> {
    let rows: Vec<Vec<Entry>> = serde_json::from_value(v.clone())
        .map_err(|e| RbError::Parse(format!("bad matrix: {e}")))?;
    if rows.len() != size || rows.iter().any(|r| r.len() != size) {
        return Err(RbError::Shape(format!("expected a {size}x{size} matrix")));
    }
    Ok(CMatrix::from_fn(size, size, |r, c| rows[r][c].value()))
}

fn matrix_to_value(m: &CMatrix) -> Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect();
    serde_json::to_value(rows).expect("finite floats serialize")
}

impl ChannelJson {
    pub fn from_superoperator(s: &Superoperator) -> Self {
        ChannelJson {
            d: s.dim(),
            repr: ChannelRepr::Super,
            data: matrix_to_value(s.matrix()),
        }
    }

    pub fn from_pauli(q: &PauliChannel) -> Self {
        ChannelJson {
            d: q.dim(),
            repr: ChannelRepr::Pauli,
            data: serde_json::to_value(q.probs()).expect("finite floats serialize"),
        }
    }

    pub fn from_kraus(k: &KrausSet) -> Self {
        ChannelJson {
            d: k.dim(),
            repr: ChannelRepr::Kraus,
            data: Value::Array(k.ops().iter().map(matrix_to_value).collect()),
        }
    }

    pub fn to_superoperator(&self) -> Result<Superoperator> {
        match self.repr {
            ChannelRepr::Super => {
                Superoperator::from_matrix(self.d, parse_matrix(&self.data, self.d * self.d)?)
            }
            ChannelRepr::Kraus => {
                let ops = self
                    .data
                    .as_array()
                    .ok_or_else(|| RbError::Parse("kraus data must be a list".into()))?
                    .iter()
                    .map(|m| parse_matrix(m, self.d))
                    .collect::<Result<Vec<_>>>()?;
                Ok(KrausSet::new(ops)?.to_superoperator())
            }
            ChannelRepr::Pauli => Ok(self.to_pauli()?.to_superoperator()),
        }
    }

    /// Pauli probabilities; only valid for the `pauli` representation.
    pub fn to_pauli(&self) -> Result<PauliChannel> {
        if self.repr != ChannelRepr::Pauli {
            return Err(RbError::Contract(format!(
                "expected a pauli channel, got {:?}",
                self.repr
            )));
        }
        let q: Vec<f64> = serde_json::from_value(self.data.clone())
            .map_err(|e| RbError::Parse(format!("bad probabilities: {e}")))?;
        PauliChannel::new(qubits_for_dim(self.d)?, q)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| RbError::Parse(format!("bad channel JSON: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::amplitude_damping;

    #[test]
    fn round_trips() {
        let ad = amplitude_damping(0.2).unwrap();
        let text = serde_json::to_string(&ChannelJson::from_superoperator(&ad)).unwrap();
        let back = ChannelJson::parse(&text).unwrap().to_superoperator().unwrap();
        assert!(back.max_abs_diff(&ad) < 1e-15);

        let k = ad.to_kraus().unwrap();
        let back = ChannelJson::from_kraus(&k).to_superoperator().unwrap();
        assert!(back.max_abs_diff(&ad) < 1e-12);

        let q = PauliChannel::depolarizing(1, 0.9).unwrap();
        let j = ChannelJson::from_pauli(&q);
        assert_eq!(j.to_pauli().unwrap(), q);
    }

    #[test]
    fn plain_reals_and_errors() {
        let j = ChannelJson::parse(r#"{"d":2,"repr":"kraus","data":[[[1,0],[0,1]]]}"#).unwrap();
        let s = j.to_superoperator().unwrap();
        assert!(s.max_abs_diff(&Superoperator::identity(2)) < 1e-15);
        assert!(ChannelJson::parse(r#"{"d":2,"repr":"magic","data":[]}"#).is_err());
        let bad = ChannelJson::parse(r#"{"d":2,"repr":"pauli","data":[1,0,0]}"#).unwrap();
        assert!(bad.to_superoperator().is_err());
    }
}
