use std::fmt::Write;

/// A plain-text table: first column left-aligned, the rest right-aligned.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: &str, header: &[&str]) -> Self {
        Table {
            title: title.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.header.len(), "row width");
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut w: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (i, c) in r.iter().enumerate() {
                w[i] = w[i].max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let mut s = String::new();
            for (i, c) in cells.iter().enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                let pad = w[i] - c.chars().count();
                if i == 0 {
                    s.push_str(c);
                    s.push_str(&" ".repeat(pad));
                } else {
                    s.push_str(&" ".repeat(pad));
                    s.push_str(c);
                }
            }
            s.trim_end().to_string()
        };
        let total = w.iter().sum::<usize>() + 2 * w.len().saturating_sub(1);
        let mut out = String::new();
        writeln!(out, "{}", self.title).unwrap();
        writeln!(out, "{}", "=".repeat(total)).unwrap();
        writeln!(out, "{}", line(&self.header)).unwrap();
        writeln!(out, "{}", "-".repeat(total)).unwrap();
        for r in &self.rows {
            writeln!(out, "{}", line(r)).unwrap();
        }
        out
    }
}

pub fn pct(x: f64) -> String {
    format!("{:.2}%", 100.0 * x)
}

pub fn num(x: f64) -> String {
    format!("{x:.4}")
}

pub fn yn(b: bool) -> String {
    if b { "Y" } else { "N" }.to_string()
}
