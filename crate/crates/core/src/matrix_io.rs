//! JSON file formats for operators and pure states.
//!
//! Operators: `{"dim": n, "re": [[...]], "im": [[...]]}`, row-major.
//! States: `{"dims": [dA, dB], "re": [...], "im": [...]}` with amplitude
//! index `jA * dB + jB`; four dims `[a, A, B, b]` describe an
//! ancilla-assisted state.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::entangling::{AncillaDims, AssistedState};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, HermitianOperator, C64};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixFile {
    pub fn from_operator(h: &HermitianOperator) -> Self {
        let n = h.dim();
        let m = h.matrix();
        Self {
            dim: n,
            re: (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect(),
            im: (0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect(),
        }
    }

    pub fn to_operator(&self) -> Result<HermitianOperator> {
        let n = self.dim;
        let rows_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if !rows_ok(&self.re) || !rows_ok(&self.im) {
            return Err(Error::Parse(format!(
                "matrix payload does not match dim {n}"
            )));
        }
        let m = ComplexMatrix::from_fn(n, n, |i, j| C64::new(self.re[i][j], self.im[i][j]));
        HermitianOperator::new(m)
    }
}

impl StateFile {
    pub fn from_state(state: &AssistedState) -> Self {
        let d = state.dims();
        let dims = if d.a == 1 && d.b == 1 {
            vec![d.alice, d.bob]
        } else {
            vec![d.a, d.alice, d.bob, d.b]
        };
        let amps = state.amplitudes();
        Self {
            dims,
            re: amps.iter().map(|z| z.re).collect(),
            im: amps.iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_state(&self) -> Result<AssistedState> {
        let dims = match self.dims.as_slice() {
            &[alice, bob] => AncillaDims::bipartite(alice, bob),
            &[a, alice, bob, b] => AncillaDims { a, alice, bob, b },
            other => {
                return Err(Error::Parse(format!(
                    "state dims must have 2 or 4 entries, got {}",
                    other.len()
                )))
            }
        };
        if self.re.len() != self.im.len() {
            return Err(Error::Parse("re and im lengths differ".into()));
        }
        let amps = ComplexVector::from_iterator(
            self.re.len(),
            self.re.iter().zip(&self.im).map(|(&r, &i)| C64::new(r, i)),
        );
        AssistedState::new(dims, amps)
    }
}

pub fn parse_matrix(json: &str) -> Result<HermitianOperator> {
    let file: MatrixFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_operator()
}

pub fn parse_state(json: &str) -> Result<AssistedState> {
    let file: StateFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_state()
}

pub fn matrix_to_json(h: &HermitianOperator) -> String {
    serde_json::to_string_pretty(&MatrixFile::from_operator(h)).expect("matrix serializes")
}

pub fn state_to_json(state: &AssistedState) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(state)).expect("state serializes")
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<HermitianOperator> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_matrix(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn read_state(path: impl AsRef<Path>) -> Result<AssistedState> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_state(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_matrix(path: impl AsRef<Path>, h: &HermitianOperator) -> Result<()> {
    std::fs::write(path, matrix_to_json(h))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pauli_y() {
        let h = parse_matrix(r#"{"dim": 2, "re": [[0, 0], [0, 0]], "im": [[0, -1], [1, 0]]}"#)
            .unwrap();
        assert_eq!(h.matrix()[(0, 1)], C64::new(0.0, -1.0));
    }

    #[test]
    fn rejects_non_hermitian_payload() {
        let err = parse_matrix(r#"{"dim": 2, "re": [[0, 1], [0, 0]], "im": [[0, 0], [0, 0]]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn parse_error_carries_line() {
        let err = parse_matrix("{\n \"dim\": 2,\n \"re\": [[0, 1]\n}").unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
    }

    #[test]
    fn rejects_shape_mismatch() {
        let err = parse_matrix(r#"{"dim": 3, "re": [[0, 0], [0, 0]], "im": [[0, 0], [0, 0]]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn parses_bell_state() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let json = format!(r#"{{"dims": [2, 2], "re": [{s}, 0, 0, {s}], "im": [0, 0, 0, 0]}}"#);
        let state = parse_state(&json).unwrap();
        assert_eq!(state.dims(), AncillaDims::bipartite(2, 2));
    }
}
