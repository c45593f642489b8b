//! JSON state files: `{"dims": [2, 2], "amplitudes": [[re, im], ...]}`.

use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::Real;
use crate::state::{Dims, PureState};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state<T: Real>(state: &PureState<T>) -> Self {
        Self {
            dims: state.dims().as_slice().to_vec(),
            amplitudes: state
                .amplitudes()
                .iter()
                .map(|z| [z.re.as_f64(), z.im.as_f64()])
                .collect(),
        }
    }

    pub fn into_state<T: Real>(self) -> Result<PureState<T>> {
        let dims = Dims::new(self.dims)?;
        let amps = self
            .amplitudes
            .into_iter()
            .map(|[re, im]| Complex::new(T::lit(re), T::lit(im)))
            .collect();
        PureState::new(dims, amps)
    }
}

/// Compact single-line JSON followed by a newline.
pub fn state_to_json<T: Real>(state: &PureState<T>) -> String {
    let mut s = serde_json::to_string(&StateFile::from_state(state)).expect("state file serializes");
    s.push('\n');
    s
}

pub fn state_from_json<T: Real>(text: &str) -> Result<PureState<T>> {
    serde_json::from_str::<StateFile>(text)?.into_state()
}

pub fn read_state_file<T: Real>(path: impl AsRef<Path>) -> Result<PureState<T>> {
    state_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_state_file<T: Real>(path: impl AsRef<Path>, state: &PureState<T>) -> Result<()> {
    std::fs::write(path, state_to_json(state))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::random::random_state;

    #[test]
    fn exact_round_trip() {
        let s: PureState<f64> = random_state(&Dims::new(vec![2, 3]).unwrap(), 77);
        let text = state_to_json(&s);
        assert!(text.starts_with(r#"{"dims":[2,3],"amplitudes":[["#));
        let back: PureState<f64> = state_from_json(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn malformed_files() {
        assert!(matches!(
            state_from_json::<f64>(r#"{"dims":[2],"amplitudes":[[1,0]]}"#),
            Err(Error::AmplitudeCount { expected: 2, got: 1 })
        ));
        assert!(matches!(state_from_json::<f64>("{"), Err(Error::StateFile(_))));
        assert!(matches!(
            state_from_json::<f64>(r#"{"dims":[1],"amplitudes":[[1,0]]}"#),
            Err(Error::InvalidDims(_))
        ));
    }
}
