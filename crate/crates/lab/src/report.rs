use std::fmt::{self, Write as _};

use cartan_ho_core::AlgebraParams;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsDoc {
    pub n: usize,
    pub p: u32,
    pub t: Vec<u32>,
}

impl From<&AlgebraParams> for ParamsDoc {
    fn from(p: &AlgebraParams) -> Self {
        Self { n: p.n(), p: p.p(), t: p.t().to_vec() }
    }
}

impl fmt::Display for ParamsDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.t.iter().map(u32::to_string).collect();
        write!(f, "n={} p={} t={}", self.n, self.p, t.join(","))
    }
}

/// One asserted statement. The run fails iff some claim fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub claim: String,
    pub computed: String,
    pub expected: String,
    pub pass: bool,
}

/// A computed quantity set beside a closed form it is not required to match.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub quantity: String,
    pub computed: String,
    pub closed_form: String,
    pub formula: String,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub params: ParamsDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub claims: Vec<Claim>,
    pub comparisons: Vec<Comparison>,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>, params: &AlgebraParams) -> Self {
        Self {
            title: title.into(),
            params: params.into(),
            seed: None,
            claims: Vec::new(),
            comparisons: Vec::new(),
            tables: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    /// Records `computed == expected`.
    pub fn check<T: PartialEq + fmt::Display>(&mut self, claim: impl Into<String>, computed: T, expected: T) -> bool {
        let pass = computed == expected;
        self.claims.push(Claim {
            claim: claim.into(),
            computed: computed.to_string(),
            expected: expected.to_string(),
            pass,
        });
        pass
    }

    /// Records a boolean claim with free-form values.
    pub fn assert(&mut self, claim: impl Into<String>, pass: bool, computed: impl Into<String>, expected: impl Into<String>) -> bool {
        self.claims.push(Claim { claim: claim.into(), computed: computed.into(), expected: expected.into(), pass });
        pass
    }

    pub fn compare(&mut self, quantity: impl Into<String>, computed: u64, closed_form: u64, formula: impl Into<String>) {
        self.comparisons.push(Comparison {
            quantity: quantity.into(),
            computed: computed.to_string(),
            closed_form: closed_form.to_string(),
            formula: formula.into(),
            agrees: computed == closed_form,
        });
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn merge(&mut self, other: Report) {
        self.claims.extend(other.claims);
        self.comparisons.extend(other.comparisons);
        self.tables.extend(other.tables);
        self.notes.extend(other.notes);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {} ({})", self.title, self.params);
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "seed {seed}");
        }
        for c in &self.claims {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{verdict}  {}: computed {}, expected {}", c.claim, c.computed, c.expected);
        }
        for c in &self.comparisons {
            let tag = if c.agrees { "SAME" } else { "DIFF" };
            let _ = writeln!(
                s,
                "{tag}  {}: computed {}, closed form {} = {}",
                c.quantity, c.computed, c.formula, c.closed_form
            );
        }
        for t in &self.tables {
            let _ = writeln!(s, "\n[{}]", t.name);
            let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
            for r in &t.rows {
                for (w, x) in widths.iter_mut().zip(r) {
                    *w = (*w).max(x.chars().count());
                }
            }
            let line = |cells: &[String]| {
                let padded: Vec<String> =
                    cells.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
                padded.join("  ")
            };
            let _ = writeln!(s, "{}", line(&t.columns));
            for r in &t.rows {
                let _ = writeln!(s, "{}", line(r));
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(s, "{}", if self.passed() { "RESULT PASS" } else { "RESULT FAIL" });
        s
    }
}
