//! Machine-readable run reports.
//!
//! Every command emits exactly one JSON document. Serialization is fully
//! deterministic: object keys are sorted and every float is rendered with 17
//! significant digits, so identical runs are byte-identical.

use serde::Serialize;
use smalltime_core::asymptotics::ImpliedVolAsymptote;
use smalltime_core::mc::RateFit;
use smalltime_core::model::{ModelSpec, OrderClass};

/// Consistency verdict of a verification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    /// Fitted exponent within margin and ratios within tolerance at the two
    /// smallest maturities.
    Consistent,
    /// A check failed with adequate statistical power.
    Inconsistent,
    /// Half-widths exceed the tolerance band: the run cannot distinguish
    /// the hypotheses.
    Inconclusive,
}

/// Classification block of a report.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationBlock {
    /// Leading-order regime.
    pub order: OrderClass,
    /// Call-price coefficient on the regime's rate.
    pub coefficient: f64,
    /// Degree of moneyness the classification used.
    pub moneyness_theta: f64,
    /// Implied-vol asymptote (needs S₀ > 0).
    pub implied_vol_asymptote: Option<ImpliedVolAsymptote>,
}

/// One maturity row of a verification or pricing run.
#[derive(Debug, Clone, Serialize)]
pub struct MaturityRow {
    /// Maturity.
    pub t: f64,
    /// Monte Carlo estimate of the call price.
    pub mc_value: f64,
    /// 95% half-width.
    pub half_width: f64,
    /// Leading-term value coefficient·rate(T), when a classification exists.
    pub asymptote_value: Option<f64>,
    /// mc_value / asymptote_value (absent when the asymptote vanishes).
    pub ratio: Option<f64>,
}

/// Implied-vol block; the unbounded boundary is flagged rather than encoded
/// as a float.
#[derive(Debug, Clone, Serialize)]
pub struct ImpliedVolBlock {
    /// σ_impl, absent at the price = S₀ boundary.
    pub sigma_impl: Option<f64>,
    /// True when price = S₀ (σ_impl = ∞ sentinel).
    pub unbounded: bool,
    /// Reprice residual.
    pub residual: f64,
    /// Solver iterations.
    pub iterations: u32,
}

/// Echo of the run settings that shape the numbers.
#[derive(Debug, Clone, Serialize)]
pub struct SettingsBlock {
    /// Paths per maturity.
    pub n_paths: Option<u64>,
    /// Maturity grid.
    pub grid: Option<Vec<f64>>,
    /// Ratio tolerance.
    pub tol: Option<f64>,
    /// Exponent margin.
    pub exp_margin: Option<f64>,
    /// Euler steps for SDE paths.
    pub n_steps: Option<u32>,
    /// Small-jump truncation cutoff.
    pub truncation_eps: Option<f64>,
}

/// The single JSON document a command emits.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    /// Which subcommand produced the report.
    pub command: String,
    /// Echo of the parsed model (round-trips through the config schema).
    pub model: Option<ModelSpec>,
    /// Seed all randomness was derived from.
    pub seed: Option<u64>,
    /// Run settings echo.
    pub settings: Option<SettingsBlock>,
    /// Classification block.
    pub classification: Option<ClassificationBlock>,
    /// Per-maturity rows.
    pub rows: Vec<MaturityRow>,
    /// Rate fit over the rows.
    pub fit: Option<RateFit>,
    /// Implied-vol inversion result.
    pub implied_vol: Option<ImpliedVolBlock>,
    /// Verdict of a verification run.
    pub verdict: Option<Verdict>,
}

impl RunReport {
    /// Empty skeleton for a command.
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            model: None,
            seed: None,
            settings: None,
            classification: None,
            rows: Vec::new(),
            fit: None,
            implied_vol: None,
            verdict: None,
        }
    }

    /// Deterministic JSON rendering (sorted keys, 17-significant-digit
    /// floats, trailing newline).
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report floats are finite");
        let mut out = String::new();
        write_value(&mut out, &value, 0);
        out.push('\n');
        out
    }
}

fn write_value(out: &mut String, v: &serde_json::Value, indent: usize) {
    match v {
        serde_json::Value::Null => out.push_str("null"),
        serde_json::Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        serde_json::Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    out.push_str(&format!("{f:.16e}"));
                } else {
                    out.push_str(&n.to_string());
                }
            } else {
                out.push_str(&n.to_string());
            }
        }
        serde_json::Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("strings encode"));
        }
        serde_json::Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent + 1));
                write_value(out, item, indent + 1);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        serde_json::Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            // serde_json's default map is a BTreeMap: iteration is sorted,
            // hence deterministic.
            for (i, (k, val)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("keys encode"));
                out.push_str(": ");
                write_value(out, val, indent + 1);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_17_significant_digits() {
        let mut r = RunReport::new("analyze");
        r.rows.push(MaturityRow {
            t: 0.5,
            mc_value: 1.0 / 3.0,
            half_width: 0.25,
            asymptote_value: None,
            ratio: None,
        });
        let json = r.to_json();
        assert!(json.contains("3.3333333333333331e-1"), "{json}");
        assert!(json.contains("5.0000000000000000e-1"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let r = RunReport::new("verify");
        assert_eq!(r.to_json(), r.to_json());
    }
}
