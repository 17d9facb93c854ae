//! The envelope every output carries: tool, version, command, configuration and seed.

use serde::Serialize;
use serde_json::Value;

pub const TOOL: &str = "multiquilt";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Envelope<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    pub seed: u64,
    pub result: T,
}

/// Error record written for domain errors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(command: &str, config: Value, seed: u64, result: T) -> Envelope<T> {
        Envelope {
            tool: TOOL,
            version: VERSION,
            command: command.to_string(),
            config,
            seed,
            result,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// One-line provenance header for non-JSON artifacts.
    pub fn header(&self) -> String {
        format!(
            "{} {} {} seed={} config={}",
            self.tool,
            self.version,
            self.command,
            self.seed,
            serde_json::to_string(&self.config).expect("config serializes")
        )
    }
}

/// Plain columnar text with `#` header lines.
pub fn columns(header: &str, names: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = format!("# {header}\n# {}\n", names.join(" "));
    for r in rows {
        let line: Vec<String> = r.iter().map(|x| format!("{x:e}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_field_order() {
        let e = Envelope::new("faces", serde_json::json!({"d": 3}), 0, 6);
        assert_eq!(
            serde_json::to_string(&e).unwrap(),
            format!(
                r#"{{"tool":"multiquilt","version":"{VERSION}","command":"faces","config":{{"d":3}},"seed":0,"result":6}}"#
            )
        );
    }

    #[test]
    fn columns_use_round_trip_floats() {
        let text = columns("h", &["a", "b"], &[vec![0.1, 2.0]]);
        assert_eq!(text, "# h\n# a b\n1e-1 2e0\n");
    }
}
