//! Batch kernel evaluation from a JSON request.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{poisson_kernel_euclidean, poisson_kernel_hyp, poisson_kernel_trig, KernelQuery, Order};
use crate::coordmap::MapKind;
use crate::error::{Error, Evaluated, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Euclidean,
    Trig,
    Hyp,
}

/// `{kind, nu, map_kind?, points: [[height, interior, boundary], ...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelBatch {
    pub kind: KernelKind,
    pub nu: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map_kind: Option<MapKind>,
    pub points: Vec<[f64; 3]>,
}

impl KernelBatch {
    pub fn evaluate(&self, point: [f64; 3]) -> Result<Evaluated<f64>> {
        let o = Order::new(self.nu)?;
        let [h, i, b] = point;
        match self.kind {
            KernelKind::Euclidean => poisson_kernel_euclidean(o, KernelQuery::new(h, i, b)),
            KernelKind::Trig => poisson_kernel_trig(o, h, i, b),
            KernelKind::Hyp => {
                let kind = self.map_kind.ok_or_else(|| Error::invalid("hyp kernel needs map_kind"))?;
                poisson_kernel_hyp(o, h, i, b, kind)
            }
        }
    }
}

/// Evaluates every point in request order. Fails on the first point that
/// fails.
pub fn run_batch(batch: &KernelBatch) -> Result<Vec<Evaluated<f64>>> {
    Order::new(batch.nu)?;
    batch.points.par_iter().map(|&p| batch.evaluate(p)).collect()
}

/// Writes `height,interior,boundary,value,warnings` rows.
pub fn write_batch_csv<W: Write>(batch: &KernelBatch, rows: &[Evaluated<f64>], mut out: W) -> Result<()> {
    writeln!(out, "height,interior,boundary,value,warnings")?;
    for (p, r) in batch.points.iter().zip(rows) {
        let w: Vec<String> = r.warnings.iter().map(|w| w.to_string()).collect();
        writeln!(out, "{},{},{},{},\"{}\"", p[0], p[1], p[2], r.value, w.join("; "))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batch_round_trip() {
        let req = r#"{"kind":"euclidean","nu":0.5,"points":[[1,1,1],[0.5,1,2]]}"#;
        let b: KernelBatch = serde_json::from_str(req).unwrap();
        let rows = run_batch(&b).unwrap();
        assert!((rows[0].value - 0.254_647_908_947_032_5).abs() < 1e-15);
        let mut out = Vec::new();
        write_batch_csv(&b, &rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(1).unwrap().starts_with("1,1,1,0.25464790894703"));
    }

    #[test]
    fn hyp_needs_map_kind() {
        let b = KernelBatch { kind: KernelKind::Hyp, nu: 1.0, map_kind: None, points: vec![[1.0, 1.0, 1.0]] };
        assert!(run_batch(&b).is_err());
    }
}
