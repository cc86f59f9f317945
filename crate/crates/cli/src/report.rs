//! The single-line JSON report and the stderr summary table.

use std::io::Write;

use cvtq_core::{Point, Quantizer};
use serde::Serialize;

/// Round to 9 significant digits.
pub fn sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

pub fn pt9(p: Point) -> [f64; 2] {
    [sig9(p.x1), sig9(p.x2)]
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub inputs_digest: String,
    pub centers: Vec<[f64; 2]>,
    pub distortion: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<usize>,
    pub is_cvt: bool,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub centroid: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_vector: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density_mismatch: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl RunReport {
    pub fn new(command: &'static str, inputs_digest: String, centers: &Quantizer, distortion: f64) -> Self {
        Self {
            command,
            inputs_digest,
            centers: centers.centers().iter().map(|&c| pt9(c)).collect(),
            distortion: sig9(distortion),
            multiplicity: None,
            is_cvt: false,
            method: String::new(),
            seed: None,
            solver: None,
            centroid: None,
            expected_vector: None,
            density_mismatch: None,
            output: None,
        }
    }

    pub fn emit(&self) {
        println!("{}", serde_json::to_string(self).expect("report serializes"));
    }

    /// Human-readable summary on stderr.
    pub fn describe(&self) {
        let mut e = std::io::stderr().lock();
        let _ = writeln!(e, "{:<14}{}", "command", self.command);
        for (i, c) in self.centers.iter().enumerate() {
            let _ = writeln!(e, "{:<14}({}, {})", format!("center {}", i + 1), c[0], c[1]);
        }
        if let Some(c) = self.centroid {
            let _ = writeln!(e, "{:<14}({}, {})", "centroid", c[0], c[1]);
        }
        if let Some(c) = self.expected_vector {
            let _ = writeln!(e, "{:<14}({}, {})", "expected", c[0], c[1]);
        }
        if let Some(m) = self.density_mismatch {
            let _ = writeln!(e, "{:<14}{}", "mismatch", m);
        }
        let _ = writeln!(e, "{:<14}{}", "distortion", self.distortion);
        if let Some(m) = self.multiplicity {
            let _ = writeln!(e, "{:<14}{}", "optimal sets", m);
        }
        let _ = writeln!(e, "{:<14}{}", "is_cvt", self.is_cvt);
        let _ = writeln!(e, "{:<14}{}", "method", self.method);
        if let Some(s) = &self.solver {
            let _ = writeln!(e, "{:<14}{}", "solver", s);
        }
        if let Some(s) = self.seed {
            let _ = writeln!(e, "{:<14}{}", "seed", s);
        }
        if let Some(o) = &self.output {
            let _ = writeln!(e, "{:<14}{}", "output", o);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_digits() {
        assert_eq!(sig9(0.07182740104361), 0.0718274010);
        assert_eq!(sig9(1.0 / 3.0), 0.333333333);
        assert_eq!(sig9(-2.5), -2.5);
        assert_eq!(sig9(0.0), 0.0);
        assert_eq!(sig9(123456789.7), 123456790.0);
    }
}
