use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Group {
    SetTheory,
    Bunch,
    Improper,
    Lemma,
    ModelProperty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "UPPERCASE")]
pub enum Outcome {
    Pass {
        instances: usize,
        environments: usize,
        /// Set when some instantiation was too large and was sampled.
        sampled: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    Fail {
        instance: String,
        counterexample: String,
        detail: String,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Line {
    pub name: String,
    pub group: Group,
    #[serde(flatten)]
    pub outcome: Outcome,
}

impl Line {
    pub fn passed(&self) -> bool {
        matches!(self.outcome, Outcome::Pass { .. })
    }

    pub fn failed(&self) -> bool {
        matches!(self.outcome, Outcome::Fail { .. })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub lines: Vec<Line>,
}

impl Report {
    pub fn get(&self, name: &str) -> Option<&Line> {
        self.lines.iter().find(|l| l.name == name)
    }

    pub fn no_failures(&self) -> bool {
        !self.lines.iter().any(Line::failed)
    }

    pub fn count_passed(&self) -> usize {
        self.lines.iter().filter(|l| l.passed()).count()
    }

    /// One JSON object per line.
    pub fn to_records(&self) -> String {
        self.lines
            .iter()
            .map(|l| serde_json::to_string(l).expect("report lines serialize"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Pass {
                instances,
                environments,
                sampled,
                note,
            } => {
                let sampled = if *sampled { ", sampled" } else { "" };
                match self.group {
                    Group::Lemma | Group::ModelProperty => {
                        write!(f, "PASS     {}  ({environments} cases)", self.name)?
                    }
                    _ => write!(
                        f,
                        "PASS     {}  ({instances} instances, {environments} environments{sampled})",
                        self.name
                    )?,
                }
                if let Some(n) = note {
                    write!(f, " [{n}]")?;
                }
                Ok(())
            }
            Outcome::Fail {
                instance,
                counterexample,
                detail,
            } => write!(
                f,
                "FAIL     {}  at {instance}: {counterexample} ({detail})",
                self.name
            ),
            Outcome::Skipped { reason } => write!(f, "SKIPPED  {}  ({reason})", self.name),
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}
