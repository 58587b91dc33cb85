//! Serializable report structures shared by the CLI's text and JSON
//! output modes. JSON reports re-parse into the same structures.

use serde::{Deserialize, Serialize};

use crate::bracket::AxiomReport;
use crate::ideals::CoreTestResult;
use crate::strata::{CatalogEntryReport, PosetGraph};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckReport {
    pub antisymmetry_ok: bool,
    pub leibniz_ok: bool,
    pub jacobi_ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub axiom: String,
    pub inputs: Vec<String>,
    pub residual: String,
}

impl CheckReport {
    pub fn from_axioms(report: &AxiomReport) -> Self {
        CheckReport {
            antisymmetry_ok: report.antisymmetry_ok,
            leibniz_ok: report.leibniz_ok,
            jacobi_ok: report.jacobi_ok,
            counterexample: report
                .counterexample
                .as_ref()
                .map(|ce| CounterexampleReport {
                    axiom: ce.axiom.to_string(),
                    inputs: ce.inputs.iter().map(|p| p.to_string()).collect(),
                    residual: ce.residual.to_string(),
                }),
        }
    }

    pub fn all_ok(&self) -> bool {
        self.antisymmetry_ok && self.leibniz_ok && self.jacobi_ok
    }

    pub fn to_text(&self) -> String {
        let flag = |ok: bool| if ok { "ok" } else { "FAILED" };
        let mut out = format!(
            "antisymmetry: {}\nleibniz: {}\njacobi: {}\n",
            flag(self.antisymmetry_ok),
            flag(self.leibniz_ok),
            flag(self.jacobi_ok)
        );
        if let Some(ce) = &self.counterexample {
            out.push_str(&format!(
                "counterexample ({}): inputs = [{}], residual = {}\n",
                ce.axiom,
                ce.inputs.join(", "),
                ce.residual
            ));
        }
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CenterReport {
    pub rank: usize,
    pub generators: Vec<String>,
}

impl CenterReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("center rank: {}\n", self.rank);
        if self.rank == 0 {
            out.push_str("Z_P(R) = Q\n");
        } else {
            let vars: Vec<String> = (1..=self.rank).map(|j| format!("z{j}^±1")).collect();
            let gens: Vec<String> = self
                .generators
                .iter()
                .enumerate()
                .map(|(j, g)| format!("z{} = {}", j + 1, g))
                .collect();
            out.push_str(&format!(
                "Z_P(R) = Q[{}], {}\n",
                vars.join(", "),
                gens.join(", ")
            ));
        }
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct StratumReport {
    #[serde(rename = "X")]
    pub x: Vec<String>,
    #[serde(rename = "J")]
    pub j: String,
    pub center: Vec<String>,
    pub primitive_template: String,
}

pub fn strata_to_text(strata: &[StratumReport]) -> String {
    let mut out = String::new();
    for (k, s) in strata.iter().enumerate() {
        out.push_str(&format!(
            "stratum {k}: X={{{}}} J={} center=[{}] template={}\n",
            s.x.join(","),
            s.j,
            s.center.join(", "),
            s.primitive_template
        ));
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PrimitiveReport {
    #[serde(rename = "X")]
    pub x: Vec<String>,
    pub parameters: Vec<String>,
    pub template: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instantiated: Option<String>,
}

impl PrimitiveReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("template: {}\n", self.template);
        if let Some(ideal) = &self.instantiated {
            out.push_str(&format!("primitive ideal: {ideal}\n"));
        }
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PcoreReport {
    pub point: Vec<String>,
    #[serde(rename = "X")]
    pub x: Vec<String>,
    pub ideal: String,
}

impl PcoreReport {
    pub fn to_text(&self) -> String {
        format!("P.core(m_p) = {}\n", self.ideal)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerifyEntryReport {
    pub ideal: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_stable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poisson_stable: Option<bool>,
    pub primality: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerifyReport {
    pub entries: Vec<VerifyEntryReport>,
    pub passed: usize,
    pub failed: usize,
    pub unsupported: usize,
    pub total: usize,
}

impl VerifyReport {
    pub fn from_entries(entries: &[CatalogEntryReport]) -> Self {
        let rows: Vec<VerifyEntryReport> = entries
            .iter()
            .map(|e| VerifyEntryReport {
                ideal: e.ideal.clone(),
                h_stable: e.h_stable,
                poisson_stable: e.poisson_stable,
                primality: e.primality.to_string(),
                failures: e.failures.clone(),
            })
            .collect();
        VerifyReport {
            total: rows.len(),
            passed: entries.iter().filter(|e| e.passed()).count(),
            failed: entries.iter().filter(|e| e.failed()).count(),
            unsupported: entries.iter().filter(|e| e.unsupported()).count(),
            entries: rows,
        }
    }

    /// Unsupported entries are reported but only negative verdicts fail
    /// the run.
    pub fn has_failures(&self) -> bool {
        self.failed > 0
    }

    pub fn to_text(&self) -> String {
        let flag = |v: Option<bool>| match v {
            Some(true) => "true".to_string(),
            Some(false) => "false".to_string(),
            None => "unsupported".to_string(),
        };
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!(
                "ideal {}: h_stable={} poisson_stable={} primality={}\n",
                e.ideal,
                flag(e.h_stable),
                flag(e.poisson_stable),
                e.primality
            ));
            for failure in &e.failures {
                out.push_str(&format!("  failure: {failure}\n"));
            }
        }
        out.push_str(&format!(
            "verified: {}/{} passed\n",
            self.passed, self.total
        ));
        if self.unsupported > 0 {
            out.push_str(&format!("unsupported: {}\n", self.unsupported));
        }
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CoreTestReport {
    pub element: String,
    pub ideal: String,
    pub depth: usize,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

impl CoreTestReport {
    pub fn new(element: String, ideal: String, depth: usize, result: &CoreTestResult) -> Self {
        CoreTestReport {
            element,
            ideal,
            depth,
            verdict: match result {
                CoreTestResult::In => "In".to_string(),
                CoreTestResult::NotIn(_) => "NotIn".to_string(),
                CoreTestResult::InconclusiveAtDepth(d) => format!("InconclusiveAtDepth({d})"),
            },
            witness: match result {
                CoreTestResult::NotIn(w) => Some(w.clone()),
                _ => None,
            },
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("verdict: {}\n", self.verdict);
        if let Some(w) = &self.witness {
            let word: Vec<String> = w.iter().map(|i| format!("d{i}")).collect();
            out.push_str(&format!("witness: [{}]\n", word.join(" ")));
        }
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetReport {
    pub nodes: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unknown_pairs: Vec<(usize, usize)>,
}

impl PosetReport {
    pub fn from_graph(graph: &PosetGraph) -> Self {
        PosetReport {
            nodes: graph.nodes.clone(),
            edges: graph.edges.clone(),
            unknown_pairs: graph.unknown_pairs.clone(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("nodes: {}\nedges: {}\n", self.nodes.len(), self.edges.len());
        for &(i, j) in &self.edges {
            out.push_str(&format!("{} -> {}\n", self.nodes[i], self.nodes[j]));
        }
        for &(i, j) in &self.unknown_pairs {
            out.push_str(&format!(
                "{} ?? {} (unknown)\n",
                self.nodes[i], self.nodes[j]
            ));
        }
        out
    }
}
