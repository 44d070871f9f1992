//! Protocol execution against a hypothesis circuit, seeded shot sampling,
//! and the elimination tournament for more than two candidates.
//!
//! Shot sampling draws one uniform variate per shot from the stream
//! `(seed, shot index)`, so counts are reproducible and independent of how
//! shots are scheduled across threads.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arc::min_runs;
use crate::error::{Error, Result};
use crate::exec::{indexed_map, stream_rng};
use crate::measurement::ProjectiveMeasurement;
use crate::state::StateVector;
use crate::synthesis::{build_measurement, synthesize_protocol, SequentialProtocol};
use crate::unitary::UnitaryOperator;

/// Counts and analytic probability for one measurement outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub label: String,
    pub probability: f64,
    pub counts: u64,
}

/// Outcome index for one shot: inverse-CDF sampling of `probabilities`
/// with the uniform variate drawn from stream `(seed, shot)`.
pub fn shot_outcome(probabilities: &[f64], seed: u64, shot: u64) -> usize {
    let total: f64 = probabilities.iter().sum();
    let u: f64 = stream_rng(seed, shot).random::<f64>() * total;
    let mut acc = 0.0;
    for (i, &p) in probabilities.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probabilities.len() - 1
}

/// Samples `shots` outcomes of `measurement` on `state`.
pub fn sample_measurement(
    measurement: &ProjectiveMeasurement,
    state: &StateVector,
    shots: u64,
    seed: u64,
) -> Result<Vec<ShotRecord>> {
    let probabilities = measurement.probabilities(state)?;
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NumericalFailure(format!(
            "outcome probabilities sum to {total}"
        )));
    }
    let outcomes = indexed_map(shots as usize, |s| {
        shot_outcome(&probabilities, seed, s as u64)
    });
    let mut counts = vec![0u64; probabilities.len()];
    for o in outcomes {
        counts[o] += 1;
    }
    Ok(measurement
        .labels()
        .iter()
        .zip(probabilities)
        .zip(counts)
        .map(|((label, probability), counts)| ShotRecord {
            label: label.clone(),
            probability,
            counts,
        })
        .collect())
}

/// Runs a protocol against a hypothesis `truth` and samples the
/// three-outcome discrimination measurement.
pub fn run_protocol(
    protocol: &SequentialProtocol,
    truth: &UnitaryOperator,
    shots: u64,
    seed: u64,
) -> Result<Vec<ShotRecord>> {
    if shots < 1 {
        return Err(Error::PreconditionViolation("shots must be >= 1".into()));
    }
    let output = protocol.run_chain(truth)?;
    let measurement = build_measurement(protocol)?;
    sample_measurement(&measurement, &output, shots, seed)
}

/// Which projector fired in a tournament round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundOutcome {
    /// The branch-U projector fired; the second candidate is eliminated.
    BranchU,
    /// The complement fired; the first candidate is eliminated.
    Complement,
}

/// One round of the elimination tournament.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TournamentRound {
    /// Candidate indices tested as (U, V).
    pub pair: (usize, usize),
    /// Run count of the pairwise protocol.
    pub num_runs: usize,
    pub outcome: RoundOutcome,
    pub eliminated: usize,
}

/// Full record of an elimination tournament.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TournamentTranscript {
    pub rounds: Vec<TournamentRound>,
    pub survivor: usize,
    pub total_runs: usize,
}

/// Discriminates among `n ≥ 2` pairwise-different candidates by repeatedly
/// testing the first two remaining ones with their pairwise protocol and a
/// two-outcome measurement {P = |ψ_U⟩⟨ψ_U|, I−P}. Each round eliminates
/// exactly one candidate of the tested pair, so the true circuit survives:
/// in-pair rounds are deterministic and out-of-pair rounds cannot touch it.
pub fn eliminate_tournament(
    candidates: &[UnitaryOperator],
    truth_index: usize,
    seed: u64,
) -> Result<TournamentTranscript> {
    if candidates.len() < 2 {
        return Err(Error::PreconditionViolation(
            "tournament needs at least two candidates".into(),
        ));
    }
    if truth_index >= candidates.len() {
        return Err(Error::IndexOutOfRange {
            index: truth_index,
            dim: candidates.len(),
        });
    }
    // pairwise-difference precondition, checked up front
    for i in 0..candidates.len() {
        for j in (i + 1)..candidates.len() {
            min_runs(&candidates[i], &candidates[j])?;
        }
    }
    let truth = &candidates[truth_index];
    let mut remaining: Vec<usize> = (0..candidates.len()).collect();
    let mut rounds = Vec::with_capacity(candidates.len() - 1);
    let mut total_runs = 0;
    let mut round_index = 0u64;
    while remaining.len() > 1 {
        let (a, b) = (remaining[0], remaining[1]);
        let protocol = synthesize_protocol(&candidates[a], &candidates[b])?;
        let output = protocol.run_chain(truth)?;
        let p_u = output.inner(protocol.branch_u_output())?.norm_sqr();
        // In-pair truths give probabilities within orth_tol² of 0 or 1;
        // snap those so the promised determinism is exact.
        let hit_u = if p_u >= 1.0 - 1e-9 {
            true
        } else if p_u <= 1e-9 {
            false
        } else {
            let u: f64 = stream_rng(seed, round_index).random();
            u < p_u
        };
        let (outcome, eliminated) = if hit_u {
            (RoundOutcome::BranchU, b)
        } else {
            (RoundOutcome::Complement, a)
        };
        remaining.retain(|&c| c != eliminated);
        total_runs += protocol.num_runs();
        rounds.push(TournamentRound {
            pair: (a, b),
            num_runs: protocol.num_runs(),
            outcome,
            eliminated,
        });
        round_index += 1;
    }
    Ok(TournamentTranscript {
        rounds,
        survivor: remaining[0],
        total_runs,
    })
}
