//! Parsing of flag values: matrices, vectors, quivers and module names.

use std::path::Path;

use qcluster::repbrute::descr::{indecomposables, Descriptor};
use qcluster::speckit::{preset, Preset, ValuedQuiver};
use qcluster::{Error, Result, SkewForm};

pub type IntMatrix = Vec<Vec<i64>>;

/// A row-major JSON-style matrix such as `[[0,1],[-1,0]]`.
pub fn matrix(text: &str) -> Result<IntMatrix> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix `{text}`: {e}")))
}

/// A comma separated list such as `2,1` or `[2,1]`.
pub fn vector<T: std::str::FromStr>(text: &str) -> Result<Vec<T>> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| Error::Parse(format!("bad list `{text}`"))))
        .collect()
}

/// The quiver named by `spec`: a preset name or a path to a quiver file.
/// `lambda` overrides the configured skew form.
#[derive(Clone, Debug)]
pub struct QuiverInput {
    /// Preset whose module list applies, if the quiver is one of them.
    pub preset: Option<String>,
    pub quiver: ValuedQuiver,
    pub lambda: Option<SkewForm>,
}

const PRESETS: [&str; 4] = ["a2", "b2", "g2", "kronecker"];

impl QuiverInput {
    pub fn resolve(spec: &str, lambda: Option<&str>) -> Result<Self> {
        let (quiver, file_lambda, name) = match preset(spec) {
            Ok(Preset { name, quiver, lambda }) => (quiver, Some(lambda), Some(name)),
            Err(_) => {
                let text = std::fs::read_to_string(Path::new(spec))
                    .map_err(|e| Error::Parse(format!("quiver `{spec}`: {e}")))?;
                let (q, l) = ValuedQuiver::parse(&text)?;
                let name = PRESETS
                    .iter()
                    .find(|p| preset(p).is_ok_and(|pr| pr.quiver.to_text() == q.to_text()))
                    .map(|p| p.to_string());
                (q, l, name)
            }
        };
        let lambda = match lambda {
            Some(t) => Some(SkewForm::new(matrix(t)?)?),
            None => file_lambda,
        };
        Ok(Self { preset: name, quiver, lambda })
    }

    pub fn lambda(&self) -> Result<SkewForm> {
        self.lambda.clone().ok_or_else(|| Error::Parse("this command needs --lambda".into()))
    }

    pub fn indecomposables(&self) -> Result<Vec<Descriptor>> {
        match &self.preset {
            Some(p) => indecomposables(p),
            None => Err(Error::Parse("module lists exist only for the built-in quivers".into())),
        }
    }

    /// Parses `0`, `2,1` (the rigid module of that dimension), or names of
    /// built-in indecomposables joined by `+`, such as `S1+R0`.
    pub fn module(&self, spec: &str) -> Result<Descriptor> {
        let spec = spec.trim();
        if spec == "0" {
            return Ok(Descriptor::zero());
        }
        if spec.chars().all(|c| c.is_ascii_digit() || c == ',' || c.is_whitespace()) {
            let dim: Vec<usize> = vector(spec)?;
            if dim.len() != self.quiver.n() {
                return Err(Error::DimensionMismatch { expected: self.quiver.n(), found: dim.len() });
            }
            return Ok(Descriptor::rigid(dim));
        }
        let known = self.indecomposables()?;
        let parts = spec
            .split('+')
            .map(|name| {
                let name = name.trim();
                known
                    .iter()
                    .find(|d| d.to_string() == name)
                    .cloned()
                    .ok_or_else(|| Error::Parse(format!("unknown module `{name}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Descriptor::sum(parts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_matrices() {
        assert_eq!(vector::<i64>("[1,-2]").unwrap(), vec![1, -2]);
        assert_eq!(vector::<u32>("2, 3").unwrap(), vec![2, 3]);
        assert!(vector::<u32>("2,x").is_err());
        assert_eq!(matrix("[[0,1],[-1,0]]").unwrap(), vec![vec![0, 1], vec![-1, 0]]);
    }

    #[test]
    fn modules() {
        let k = QuiverInput::resolve("kronecker", None).unwrap();
        assert_eq!(k.module("R0+S1").unwrap().dim(2), vec![2, 1]);
        assert_eq!(k.module("0").unwrap(), Descriptor::zero());
        assert!(k.module("X9").is_err());
        let a = QuiverInput::resolve("a2", None).unwrap();
        assert_eq!(a.module("1,1").unwrap(), Descriptor::rigid(vec![1, 1]));
    }
}
