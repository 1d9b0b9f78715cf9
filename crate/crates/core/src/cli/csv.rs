use std::fmt::Write as _;

use crate::distributions::RNG_ALGORITHM;

/// Numbers are written with 17 significant digits, enough to round-trip.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, Default)]
pub struct CsvReport {
    pub seed: Option<u64>,
    pub command: String,
    pub config: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub trailer: Vec<String>,
}

impl CsvReport {
    pub fn new(command: &str, config: Vec<(String, String)>, columns: &[&str]) -> Self {
        Self {
            command: command.into(),
            config,
            columns: columns.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn push_nums(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|&v| num(v)).collect());
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# tool: ggsum {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "# rng: {RNG_ALGORITHM}");
        match self.seed {
            Some(seed) => {
                let _ = writeln!(s, "# master_seed: {seed}");
            }
            None => s.push_str("# master_seed: none\n"),
        }
        let _ = writeln!(s, "# command: {}", self.command);
        for (k, v) in &self.config {
            let _ = writeln!(s, "# config: {k} = {v}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        for t in &self.trailer {
            let _ = writeln!(s, "# {t}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_round_trips() {
        for x in [0.1, 1e-300, 3.0, -2.5e17, f64::MIN_POSITIVE] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(1e-4), "1.0000000000000000e-4");
    }
}
