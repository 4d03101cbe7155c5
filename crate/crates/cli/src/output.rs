//! Deterministic CSV emission with provenance header comments.
//!
//! Reals are printed with 17 significant digits so every value round-trips
//! bit-exactly; no wall-clock or locale content appears anywhere, and the
//! config hash covers the scenario name plus the resolved parameter set, so
//! identical configs reproduce identical bytes.

use sha2::{Digest, Sha256};

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(u64),
    S(String),
    B(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(v) => fmt_f64(*v),
            Cell::I(v) => format!("{v}"),
            Cell::S(v) => {
                // RFC 4180: quote when the value holds a comma or quote.
                if v.contains(',') || v.contains('"') || v.contains('\n') {
                    format!("\"{}\"", v.replace('"', "\"\""))
                } else {
                    v.clone()
                }
            }
            Cell::B(v) => format!("{v}"),
        }
    }
}

/// 17 significant digits: exact round-trip for every finite f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// A scenario's tabular result plus the resolved parameters that produced
/// it.
#[derive(Debug)]
pub struct ScenarioOutput {
    pub scenario: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub params: Vec<(String, String)>,
    pub notices: Vec<String>,
}

impl ScenarioOutput {
    /// Hash over the scenario name and the sorted resolved parameters.
    pub fn config_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.scenario.as_bytes());
        hasher.update(b"\n");
        for (k, v) in &self.params {
            hasher.update(k.as_bytes());
            hasher.update(b" = ");
            hasher.update(v.as_bytes());
            hasher.update(b"\n");
        }
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }

    /// Full CSV document: `#`-prefixed provenance comments, header row, data.
    pub fn to_csv(&self, c_value: f64) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# tool: losmimo {}\n",
            env!("CARGO_PKG_VERSION")
        ));
        out.push_str(&format!("# scenario: {}\n", self.scenario));
        out.push_str(&format!("# config_hash: {}\n", self.config_hash()));
        out.push_str(&format!("# c_m_per_s: {}\n", fmt_f64(c_value)));
        for (k, v) in &self.params {
            out.push_str(&format!("# param {k} = {v}\n"));
        }
        for notice in &self.notices {
            out.push_str(&format!("# notice: {notice}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let rendered: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&rendered.join(","));
            out.push('\n');
        }
        out
    }
}
