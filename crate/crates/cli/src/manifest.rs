//! Record of a command run: inputs, stability, stages and output location.

use serde::Serialize;

/// Pipeline stages in dependency order.
pub const STAGES: [&str; 6] = ["validate", "matchings", "fan", "jigsaw", "recipe", "bundles"];

pub const DIMER_FORMAT: u32 = 1;
pub const REPORT_FORMAT: u32 = 1;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Input {
    File { path: String },
    Generator { spec: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct FormatVersions {
    pub dimer: u32,
    pub report: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub input: Input,
    pub theta: String,
    pub zero_vertex: usize,
    pub stages: Vec<String>,
    pub out: Option<String>,
    pub formats: FormatVersions,
}

impl RunManifest {
    /// Stages up to and including `last`, in dependency order.
    pub fn stages_through(last: &str) -> Vec<String> {
        let k = STAGES.iter().position(|&s| s == last).expect("known stage");
        STAGES[..=k].iter().map(|s| s.to_string()).collect()
    }

    pub fn is_ordered(&self) -> bool {
        let ranks: Option<Vec<usize>> = self.stages.iter().map(|s| STAGES.iter().position(|x| x == s)).collect();
        ranks.is_some_and(|r| r.windows(2).all(|w| w[0] < w[1]))
    }
}
