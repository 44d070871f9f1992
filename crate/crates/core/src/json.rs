//! JSON interchange formats.
//!
//! Matrices travel as `{"d": n, "entries": [[[re, im], ...], ...]}`
//! (row-major, IEEE-754 doubles in decimal); this is the single operator
//! format shared by every file the tooling reads or writes. Loading a
//! protocol re-runs its certification, so a tampered or truncated file is
//! rejected rather than trusted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexSquareMatrix;
use crate::schemes::PartitionPlan;
use crate::simulator::ShotRecord;
use crate::state::StateVector;
use crate::synthesis::SequentialProtocol;
use crate::unitary::{certify_unitary, UnitaryOperator};
use crate::verify::{CriterionSweep, OptimalityReport, SweepOutcome};
use num_complex::Complex64;

/// `{"d", "entries"}` with complex entries as `[re, im]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub d: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl From<&ComplexSquareMatrix> for MatrixJson {
    fn from(m: &ComplexSquareMatrix) -> Self {
        let d = m.dim();
        let entries = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let z = m.get(i, j);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        Self { d, entries }
    }
}

impl From<&UnitaryOperator> for MatrixJson {
    fn from(u: &UnitaryOperator) -> Self {
        Self::from(u.matrix())
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexSquareMatrix> {
        if self.entries.len() != self.d {
            return Err(Error::DimensionMismatch {
                left: self.d,
                right: self.entries.len(),
            });
        }
        let mut data = Vec::with_capacity(self.d * self.d);
        for row in &self.entries {
            if row.len() != self.d {
                return Err(Error::DimensionMismatch {
                    left: self.d,
                    right: row.len(),
                });
            }
            for &[re, im] in row {
                data.push(Complex64::new(re, im));
            }
        }
        ComplexSquareMatrix::new(self.d, data)
    }

    pub fn to_unitary(&self, tol: f64) -> Result<UnitaryOperator> {
        certify_unitary(self.to_matrix()?, tol)
    }
}

fn state_to_json(s: &StateVector) -> Vec<[f64; 2]> {
    s.amplitudes().iter().map(|z| [z.re, z.im]).collect()
}

fn state_from_json(v: &[[f64; 2]]) -> Result<StateVector> {
    StateVector::new(v.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CandidatesJson {
    pub u: MatrixJson,
    pub v: MatrixJson,
}

/// Serialized [`SequentialProtocol`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProtocolJson {
    pub d: usize,
    pub num_runs: usize,
    pub input_state: Vec<[f64; 2]>,
    pub interleavers: Vec<MatrixJson>,
    pub branch_u_output: Vec<[f64; 2]>,
    pub branch_v_output: Vec<[f64; 2]>,
    pub candidates: CandidatesJson,
    pub orth_defect: f64,
    pub bumped: bool,
}

impl From<&SequentialProtocol> for ProtocolJson {
    fn from(p: &SequentialProtocol) -> Self {
        Self {
            d: p.dim(),
            num_runs: p.num_runs(),
            input_state: state_to_json(p.input_state()),
            interleavers: p.interleavers().iter().map(MatrixJson::from).collect(),
            branch_u_output: state_to_json(p.branch_u_output()),
            branch_v_output: state_to_json(p.branch_v_output()),
            candidates: CandidatesJson {
                u: MatrixJson::from(p.candidate_u()),
                v: MatrixJson::from(p.candidate_v()),
            },
            orth_defect: p.orth_defect(),
            bumped: p.bumped(),
        }
    }
}

impl ProtocolJson {
    /// Rebuilds the protocol, re-certifying unitaries at `unitary_tol` and
    /// re-verifying the branch recomputation and overlap bound.
    pub fn to_protocol(&self, unitary_tol: f64) -> Result<SequentialProtocol> {
        let interleavers = self
            .interleavers
            .iter()
            .map(|m| m.to_unitary(unitary_tol))
            .collect::<Result<Vec<_>>>()?;
        SequentialProtocol::from_parts(
            self.num_runs,
            state_from_json(&self.input_state)?,
            interleavers,
            state_from_json(&self.branch_u_output)?,
            state_from_json(&self.branch_v_output)?,
            self.candidates.u.to_unitary(unitary_tol)?,
            self.candidates.v.to_unitary(unitary_tol)?,
            self.orth_defect,
            self.bumped,
        )
    }
}

/// Serialized [`PartitionPlan`] plus its validation verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanJson {
    pub total_runs: usize,
    pub copies: usize,
    pub parts: Vec<usize>,
    pub length: usize,
    pub valid: bool,
}

impl PlanJson {
    pub fn new(plan: &PartitionPlan, valid: bool) -> Self {
        Self {
            total_runs: plan.total_runs(),
            copies: plan.copies(),
            parts: plan.parts().to_vec(),
            length: plan.length(),
            valid,
        }
    }
}

/// Columnar shot report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShotReportJson {
    pub labels: Vec<String>,
    pub probabilities: Vec<f64>,
    pub counts: Vec<u64>,
    pub seed: u64,
    pub shots: u64,
}

impl ShotReportJson {
    pub fn new(records: &[ShotRecord], seed: u64, shots: u64) -> Self {
        Self {
            labels: records.iter().map(|r| r.label.clone()).collect(),
            probabilities: records.iter().map(|r| r.probability).collect(),
            counts: records.iter().map(|r| r.counts).collect(),
            seed,
            shots,
        }
    }
}

/// Serialized [`OptimalityReport`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimalityReportJson {
    pub k: usize,
    pub chain_bound: f64,
    pub best_chain_theta: f64,
    pub best_orthogonality_gap: f64,
    pub restarts: usize,
    pub seed: u64,
    pub pass: bool,
}

impl From<&OptimalityReport> for OptimalityReportJson {
    fn from(r: &OptimalityReport) -> Self {
        Self {
            k: r.k,
            chain_bound: r.chain_bound,
            best_chain_theta: r.best_chain_theta,
            best_orthogonality_gap: r.best_orthogonality_gap,
            restarts: r.restarts,
            seed: r.seed,
            pass: r.pass,
        }
    }
}

/// Serialized subadditivity sweep outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubadditivityReportJson {
    pub d: usize,
    pub trials: usize,
    pub violations: usize,
    pub max_excess: f64,
    pub seed: u64,
    pub pass: bool,
}

impl SubadditivityReportJson {
    pub fn new(d: usize, outcome: &SweepOutcome) -> Self {
        Self {
            d,
            trials: outcome.trials,
            violations: outcome.violations,
            max_excess: outcome.max_excess,
            seed: outcome.seed,
            pass: outcome.pass(),
        }
    }
}

/// Serialized qubit-criterion sweep outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionReportJson {
    pub trials: usize,
    pub adversarial: usize,
    pub disagreements: usize,
    pub seed: u64,
    pub pass: bool,
}

impl From<&CriterionSweep> for CriterionReportJson {
    fn from(s: &CriterionSweep) -> Self {
        Self {
            trials: s.trials,
            adversarial: s.adversarial,
            disagreements: s.disagreements,
            seed: s.seed,
            pass: s.pass(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::haar_unitary_seeded;
    use crate::synthesis::synthesize_protocol;

    #[test]
    fn matrix_round_trip_is_exact() {
        let u = haar_unitary_seeded(3, 211, 0);
        let json = serde_json::to_string(&MatrixJson::from(&u)).unwrap();
        let back: MatrixJson = serde_json::from_str(&json).unwrap();
        let recovered = back.to_unitary(1e-9).unwrap();
        // shortest-round-trip float formatting reproduces bits exactly
        assert_eq!(u.matrix(), recovered.matrix());
    }

    #[test]
    fn protocol_round_trip_re_verifies() {
        let u = haar_unitary_seeded(3, 223, 1);
        let v = haar_unitary_seeded(3, 227, 1);
        let p = synthesize_protocol(&u, &v).unwrap();
        let json = serde_json::to_string_pretty(&ProtocolJson::from(&p)).unwrap();
        let back: ProtocolJson = serde_json::from_str(&json).unwrap();
        let recovered = back.to_protocol(1e-8).unwrap();
        assert_eq!(recovered.num_runs(), p.num_runs());
        assert_eq!(recovered.input_state(), p.input_state());
        assert_eq!(recovered.orth_defect(), p.orth_defect());
    }

    #[test]
    fn tampered_protocol_is_rejected() {
        let u = haar_unitary_seeded(2, 229, 2);
        let v = haar_unitary_seeded(2, 233, 2);
        let p = synthesize_protocol(&u, &v).unwrap();
        let mut json = ProtocolJson::from(&p);
        // swap the branch outputs: recomputation must notice
        std::mem::swap(&mut json.branch_u_output, &mut json.branch_v_output);
        assert!(json.to_protocol(1e-8).is_err());
    }

    #[test]
    fn malformed_matrix_shapes_are_rejected() {
        let bad = MatrixJson {
            d: 2,
            entries: vec![vec![[1.0, 0.0], [0.0, 0.0]]],
        };
        assert!(bad.to_matrix().is_err());
    }
}
