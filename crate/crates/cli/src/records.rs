//! Run records emitted by `sweep`.

use serde::Serialize;

pub const RUN_RECORD_SCHEMA: u32 = 1;

/// One sweep trial. Reproducible standalone: a sweep with `--n-range n..n
/// --trials 1 --seed <seed>` regenerates exactly this row.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub schema: u32,
    pub n: usize,
    pub seed: u64,
    pub kind: String,
    pub x: String,
    pub y: String,
    pub regret: f64,
    pub threshold: f64,
    pub disputed: usize,
    pub recovered: Option<usize>,
    pub ok: bool,
    pub bits: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl RunRecord {
    pub fn csv_header(timings: bool) -> String {
        let mut cols = vec![
            "schema",
            "n",
            "seed",
            "kind",
            "x",
            "y",
            "regret",
            "threshold",
            "disputed",
            "recovered",
            "ok",
            "bits",
        ];
        if timings {
            cols.push("wall_ms");
        }
        cols.join(",")
    }

    pub fn csv_row(&self, timings: bool) -> Vec<String> {
        let mut row = vec![
            self.schema.to_string(),
            self.n.to_string(),
            self.seed.to_string(),
            self.kind.clone(),
            self.x.clone(),
            self.y.clone(),
            format!("{:e}", self.regret),
            format!("{:e}", self.threshold),
            self.disputed.to_string(),
            self.recovered.map_or_else(String::new, |i| i.to_string()),
            self.ok.to_string(),
            self.bits.to_string(),
        ];
        if timings {
            row.push(self.wall_ms.map_or_else(String::new, |w| format!("{w:.3}")));
        }
        row
    }
}
