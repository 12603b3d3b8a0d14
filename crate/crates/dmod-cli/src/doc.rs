//! Result documents and their text and JSON renderings.

use serde::{Deserialize, Serialize};

use dmod::weyl::OpMatrix;

pub const SCHEMA: &str = "dmod-hom/1";

/// Rows of operator text.
pub type MatrixText = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema: String,
    pub command: String,
    pub inputs: Vec<String>,
    /// Wall time, only present when requested with `--timing`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    pub result: Payload,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Solutions {
        dim: usize,
        basis: Vec<Vec<String>>,
    },
    Hom {
        dim: usize,
        matrices: Vec<MatrixText>,
    },
    Ext {
        degree: usize,
        dim: usize,
        classes: Vec<MatrixText>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        extension: Option<Extension>,
    },
    Iso {
        verdict: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<Witness>,
    },
    Summand {
        first: String,
        second: String,
        first_summand_of_second: bool,
        second_summand_of_first: bool,
    },
    Defect {
        variables: Vec<String>,
        generators: Vec<String>,
        augmented_minors_vanish: bool,
    },
    DInvariants {
        betti: Vec<u64>,
        d: Vec<usize>,
    },
    BFunction {
        variant: String,
        factored: String,
        coefficients: Vec<String>,
    },
    Resolution {
        lo: i32,
        ranks: Vec<usize>,
        shifts: Vec<Vec<i64>>,
        maps: Vec<MatrixText>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extension {
    pub kappa: Vec<String>,
    pub rank: usize,
    pub relations: Vec<Vec<String>>,
    pub from_n: MatrixText,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub forward: MatrixText,
    pub inverse: MatrixText,
}

pub fn matrix_text(m: &OpMatrix) -> MatrixText {
    m.row_vectors().iter().map(|r| r.entries.iter().map(|e| e.to_string()).collect()).collect()
}

fn show_matrix(m: &MatrixText) -> String {
    let rows: Vec<String> = m.iter().map(|r| r.join(", ")).collect();
    format!("[{}]", rows.join("; "))
}

fn show_vector(v: &[String]) -> String {
    if v.len() == 1 {
        v[0].clone()
    } else {
        format!("[{}]", v.join(", "))
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl ResultDocument {
    pub fn new(command: &str, inputs: Vec<String>, result: Payload) -> ResultDocument {
        ResultDocument { schema: SCHEMA.into(), command: command.into(), inputs, elapsed_ms: None, result }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<ResultDocument> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut lines: Vec<String> = Vec::new();
        match &self.result {
            Payload::Solutions { dim, basis } => {
                lines.push(format!("dim = {dim}"));
                lines.extend(basis.iter().map(|v| show_vector(v)));
            }
            Payload::Hom { dim, matrices } => {
                lines.push(format!("dim = {dim}"));
                lines.extend(matrices.iter().map(show_matrix));
            }
            Payload::Ext { degree, dim, classes, extension } => {
                lines.push(format!("i = {degree}"));
                lines.push(format!("dim = {dim}"));
                lines.extend(classes.iter().map(show_matrix));
                if let Some(e) = extension {
                    lines.push(format!("extension at kappa = ({}), rank {}", e.kappa.join(", "), e.rank));
                    lines.extend(e.relations.iter().map(|r| format!("{};", show_vector(r))));
                    lines.push(format!("from N: {}", show_matrix(&e.from_n)));
                }
            }
            Payload::Iso { verdict, witness } => {
                lines.push(verdict.clone());
                if let Some(wt) = witness {
                    lines.push(format!("forward: {}", show_matrix(&wt.forward)));
                    lines.push(format!("inverse: {}", show_matrix(&wt.inverse)));
                }
            }
            Payload::Summand { first, second, first_summand_of_second, second_summand_of_first } => {
                lines.push(format!("{first} is a summand of {second}: {}", yes_no(*first_summand_of_second)));
                lines.push(format!("{second} is a summand of {first}: {}", yes_no(*second_summand_of_first)));
            }
            Payload::Defect { variables, generators, augmented_minors_vanish } => {
                lines.push(format!("ideal in Q[{}]", variables.join(", ")));
                lines.extend(generators.iter().map(|g| format!("({g})")));
                lines.push(format!("augmented minors vanish: {}", yes_no(*augmented_minors_vanish)));
            }
            Payload::DInvariants { d, .. } => {
                let s: Vec<String> = d.iter().map(|k| k.to_string()).collect();
                lines.push(format!("d = {{{}}}", s.join(", ")));
            }
            Payload::BFunction { factored, .. } => lines.push(format!("b(s) = {factored}")),
            Payload::Resolution { lo, ranks, shifts, maps } => {
                for (k, r) in ranks.iter().enumerate() {
                    let deg = *lo + k as i32;
                    let sh: Vec<String> = shifts[k].iter().map(|s| s.to_string()).collect();
                    lines.push(format!("degree {deg}: rank {r}, shifts [{}]", sh.join(", ")));
                    if let Some(m) = maps.get(k) {
                        lines.push(format!("  d{deg} = {}", show_matrix(m)));
                    }
                }
            }
        }
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_basis() {
        let d = ResultDocument::new("polysol", vec!["a.dmod".into()], Payload::Solutions { dim: 0, basis: vec![] });
        assert_eq!(d.to_text(), "dim = 0\n");
    }

    #[test]
    fn witness_round_trip() {
        let w = Witness { forward: vec![vec!["dx".into()]], inverse: vec![vec!["x*dx + 1".into()]] };
        let d = ResultDocument::new(
            "iso",
            vec!["a.dmod".into(), "b.dmod".into()],
            Payload::Iso { verdict: "Yes".into(), witness: Some(w) },
        );
        let j = d.to_json();
        assert!(j.contains("\"schema\": \"dmod-hom/1\""));
        assert_eq!(ResultDocument::from_json(&j).unwrap(), d);
    }
}
