//! Generators for the hardness constructions, each paired with a decoder that
//! maps a witness of the generated election back to the source problem.

mod lp;

pub use lp::{
    a3_parameters, a5_parameters, enclosing_ball_params, sat_to_rvpm_constructive_lp,
    sat_to_rvpm_destructive_lp, A3Params, A5Params, EnclosingBallParams,
};

use thiserror::Error;

use crate::election::{
    Electorate, ElectionError, Instance, IssueSpace, Norm, Objective, OpinionGroup, ScoringRule,
};
use crate::problems::{BiscInstance, SatFormula};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReductionError {
    #[error("no parameters satisfy the construction's inequalities for d = {d}, p = {p}")]
    ParameterSearch { d: usize, p: u32 },
    #[error("construction needs {0}")]
    Unsupported(String),
    #[error("generated instance violates {0}")]
    Structure(String),
    #[error(transparent)]
    Election(#[from] ElectionError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error("witness has {found} coordinates, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("coordinate {coord} = {value} is not an encoded value")]
    Malformed { coord: usize, value: f64 },
    #[error("witness moved every issue away from the target")]
    EmptySubset,
}

/// Tolerance for snapping witness coordinates to encoded values.
pub const SNAP_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionKind {
    BiscToBvpm,
    SatDestructiveLinf,
    SatConstructiveLinf,
    SatDestructiveLp,
    SatConstructiveLp,
}

/// How to read a source solution off a witness.
#[derive(Clone, Debug, PartialEq)]
pub enum Decoder {
    /// Keep the issues on which the witness still agrees with the target.
    /// When target and rival share an issue, selecting it alone ties every
    /// voter, so that is used whenever the agreeing set does not win.
    Subset {
        bisc: BiscInstance,
        fallback: Option<usize>,
    },
    /// Variable `i` lives on coordinate `i`.
    Assignment {
        dimension: usize,
        true_value: f64,
        false_value: f64,
        /// Whether a value away from both codes is malformed (rather than a
        /// variable the witness leaves unconstrained).
        strict: Vec<bool>,
        /// Coordinates the construction pins to a value.
        fixed: Vec<(usize, f64)>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decoded {
    Assignment {
        values: Vec<bool>,
        /// Variables left strictly between the codes; decoded as false.
        free: Vec<usize>,
    },
    Subset(Vec<bool>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Metadata {
    pub kind: ReductionKind,
    pub dummy_voters: u64,
    /// Named numeric parameters of the construction.
    pub params: Vec<(&'static str, f64)>,
    /// `(electorate entry, candidate)` gadget pairs that start out tied at the
    /// gadget radius.
    pub pairs: Vec<(usize, usize)>,
}

impl Metadata {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(n, _)| *n == name).map(|p| p.1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionOutput {
    pub instance: Instance,
    pub decoder: Decoder,
    pub metadata: Metadata,
}

impl ReductionOutput {
    /// The witness the construction associates with a source assignment.
    pub fn encode_assignment(&self, assignment: &[bool]) -> Option<Vec<f64>> {
        let Decoder::Assignment { dimension, true_value, false_value, fixed, .. } = &self.decoder else {
            return None;
        };
        let mut x = vec![0.0; *dimension];
        for (i, &v) in assignment.iter().enumerate() {
            x[i] = if v { *true_value } else { *false_value };
        }
        for &(j, v) in fixed {
            x[j] = v;
        }
        Some(x)
    }

    /// The witness for a nonempty issue subset: target values on the subset,
    /// rival values elsewhere.
    pub fn encode_subset(&self, subset: &[bool]) -> Option<Vec<f64>> {
        let Decoder::Subset { bisc, .. } = &self.decoder else {
            return None;
        };
        Some(
            subset
                .iter()
                .zip(bisc.target.iter().zip(&bisc.rival))
                .map(|(&s, (&t, &r))| if s { t } else { r })
                .collect(),
        )
    }
}

fn snap(value: f64, code: f64) -> bool {
    (value - code).abs() <= SNAP_TOL * code.abs().max(1.0)
}

pub fn decode_witness(output: &ReductionOutput, witness: &[f64]) -> Result<Decoded, DecodeError> {
    let expected = output.instance.dimension();
    if witness.len() != expected {
        return Err(DecodeError::Dimension { expected, found: witness.len() });
    }
    match &output.decoder {
        Decoder::Subset { bisc, fallback } => {
            let subset: Vec<bool> = witness.iter().zip(&bisc.target).map(|(a, b)| a == b).collect();
            if !subset.iter().any(|&s| s) {
                return Err(DecodeError::EmptySubset);
            }
            match fallback {
                Some(k) if !bisc.target_wins(&subset) => {
                    Ok(Decoded::Subset((0..expected).map(|i| i == *k).collect()))
                }
                _ => Ok(Decoded::Subset(subset)),
            }
        }
        Decoder::Assignment { true_value, false_value, strict, fixed, .. } => {
            for &(j, v) in fixed {
                if !snap(witness[j], v) {
                    return Err(DecodeError::Malformed { coord: j, value: witness[j] });
                }
            }
            let mut values = Vec::with_capacity(strict.len());
            let mut free = Vec::new();
            for (i, &s) in strict.iter().enumerate() {
                let x = witness[i];
                if snap(x, *true_value) {
                    values.push(true);
                } else if snap(x, *false_value) {
                    values.push(false);
                } else if s {
                    return Err(DecodeError::Malformed { coord: i, value: x });
                } else {
                    values.push(false);
                    free.push(i);
                }
            }
            Ok(Decoded::Assignment { values, free })
        }
    }
}

/// Issue selection as perception manipulation: manipulating the target
/// towards the rival on all issues but a nonempty subset.
pub fn bisc_to_bvpm(bisc: &BiscInstance, p: u32) -> Result<ReductionOutput, ReductionError> {
    if p == 0 {
        return Err(ReductionError::Unsupported("a norm exponent of at least 1".into()));
    }
    let d = bisc.dimension();
    let epsilon = ((d - 1) as f64).powf(1.0 / p as f64);
    let instance = Instance::new(
        IssueSpace::Binary,
        vec![bisc.target.clone(), bisc.rival.clone()],
        Electorate::Voters(bisc.voters.clone()),
        Norm::L(p),
        ScoringRule::plurality(2),
        Objective::Constructive,
        epsilon,
    )?;
    let fallback = (0..d).find(|&k| bisc.target[k] == bisc.rival[k]);
    Ok(ReductionOutput {
        instance,
        decoder: Decoder::Subset { bisc: bisc.clone(), fallback },
        metadata: Metadata {
            kind: ReductionKind::BiscToBvpm,
            dummy_voters: 0,
            params: vec![("epsilon", epsilon)],
            pairs: Vec::new(),
        },
    })
}

/// Destructive l_infinity construction: one voter per clause, sitting at
/// distance exactly 2 from the rival, and as many loyal dummy voters at the
/// origin. Losing a clause voter needs some true literal at full budget.
pub fn sat_to_rvpm_destructive_linf(formula: &SatFormula) -> Result<ReductionOutput, ReductionError> {
    let v = formula.num_vars();
    let d = v + 1;
    let r = formula.clauses().len();
    let mut rival = vec![0.0; d];
    rival[v] = 2.0;
    let mut groups: Vec<OpinionGroup> = formula
        .clauses()
        .iter()
        .map(|clause| {
            let mut pos = vec![0.0; d];
            for lit in clause {
                pos[lit.var] = if lit.negated { 1.0 } else { -1.0 };
            }
            OpinionGroup { position: pos, weight: 1 }
        })
        .collect();
    if r > 0 {
        groups.push(OpinionGroup { position: vec![0.0; d], weight: r as u64 });
    }
    let instance = Instance::new(
        IssueSpace::Real,
        vec![vec![0.0; d], rival],
        Electorate::Groups(groups),
        Norm::Inf,
        ScoringRule::plurality(2),
        Objective::Destructive,
        1.0,
    )
    .map_err(|e| match e {
        ElectionError::NoVoters => ReductionError::Unsupported("at least one clause".into()),
        e => e.into(),
    })?;
    Ok(ReductionOutput {
        instance,
        decoder: Decoder::Assignment {
            dimension: d,
            true_value: 1.0,
            false_value: -1.0,
            strict: vec![false; v],
            fixed: Vec::new(),
        },
        metadata: Metadata {
            kind: ReductionKind::SatDestructiveLinf,
            dummy_voters: r as u64,
            params: vec![("epsilon", 1.0), ("rival_offset", 2.0)],
            pairs: Vec::new(),
        },
    })
}

/// Constructive l_infinity construction: for every clause, one voter and one
/// candidate per satisfying local assignment, half a unit apart. A far rival
/// holds as many dummy votes as there are clauses.
pub fn sat_to_rvpm_constructive_linf(formula: &SatFormula) -> Result<ReductionOutput, ReductionError> {
    let v = formula.num_vars();
    let d = v + 1;
    let r = formula.clauses().len();
    if r == 0 {
        return Err(ReductionError::Unsupported("at least one clause".into()));
    }
    let mut candidates = vec![vec![0.0; d], vec![5.0; d]];
    let mut voters = Vec::new();
    let mut pairs = Vec::new();
    let mut used = vec![false; v];
    for clause in formula.clauses() {
        for lit in clause {
            used[lit.var] = true;
        }
        for bits in 0u8..8 {
            let values: Vec<bool> = (0..3).map(|k| bits >> k & 1 == 1).collect();
            if !clause.iter().zip(&values).any(|(lit, &val)| val != lit.negated) {
                continue;
            }
            let mut voter = vec![0.0; d];
            for (lit, &val) in clause.iter().zip(&values) {
                voter[lit.var] = if val { 1.0 } else { -1.0 };
            }
            let mut cand = voter.clone();
            cand[v] = 0.5;
            pairs.push((voters.len(), candidates.len()));
            voters.push(voter);
            candidates.push(cand);
        }
    }
    voters.extend(std::iter::repeat_n(vec![5.0; d], r));
    let n = candidates.len();
    let instance = Instance::new(
        IssueSpace::Real,
        candidates,
        Electorate::Voters(voters),
        Norm::Inf,
        ScoringRule::plurality(n),
        Objective::Constructive,
        0.5,
    )?;
    Ok(ReductionOutput {
        instance,
        decoder: Decoder::Assignment { dimension: d, true_value: 0.5, false_value: -0.5, strict: used, fixed: Vec::new() },
        metadata: Metadata {
            kind: ReductionKind::SatConstructiveLinf,
            dummy_voters: r as u64,
            params: vec![("epsilon", 0.5), ("rival_coordinate", 5.0)],
            pairs,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{distance, tally_and_decide, verify_witness};
    use crate::problems::Literal;

    fn one_clause() -> SatFormula {
        SatFormula::new(3, vec![vec![Literal::pos(0), Literal::neg(1), Literal::pos(2)]]).unwrap()
    }

    #[test]
    fn destructive_linf_layout() {
        let out = sat_to_rvpm_destructive_linf(&one_clause()).unwrap();
        let inst = &out.instance;
        assert_eq!(inst.dimension(), 4);
        assert_eq!(inst.electorate().entry(0).0, &[-1.0, 1.0, -1.0, 0.0]);
        assert_eq!(inst.electorate().entry(1), (&[0.0; 4][..], 1));
        let x = out.encode_assignment(&[true, false, false]).unwrap();
        assert_eq!(x, vec![1.0, -1.0, -1.0, 0.0]);
        let v = inst.electorate().entry(0).0;
        assert_eq!(distance(&x, v, Norm::Inf).unwrap(), 2.0);
        assert_eq!(distance(&inst.candidates()[1], v, Norm::Inf).unwrap(), 2.0);
        assert!(verify_witness(inst, &x).unwrap().passed());
        let decoded = decode_witness(&out, &[1.0, -1.0, 1.0, 0.0]).unwrap();
        assert_eq!(decoded, Decoded::Assignment { values: vec![true, false, true], free: vec![] });
    }

    #[test]
    fn destructive_linf_interior_is_free() {
        let out = sat_to_rvpm_destructive_linf(&one_clause()).unwrap();
        let decoded = decode_witness(&out, &[1.0, 0.2, 0.0, 0.3]).unwrap();
        assert_eq!(decoded, Decoded::Assignment { values: vec![true, false, false], free: vec![1, 2] });
    }

    #[test]
    fn constructive_linf_layout() {
        let out = sat_to_rvpm_constructive_linf(&one_clause()).unwrap();
        assert_eq!(out.metadata.pairs.len(), 7);
        let inst = &out.instance;
        for &(v, c) in &out.metadata.pairs {
            let d = distance(inst.electorate().entry(v).0, &inst.candidates()[c], Norm::Inf).unwrap();
            assert_eq!(d, 0.5);
        }
        // Nobody votes for the unmoved target.
        let base = tally_and_decide(inst, inst.target()).unwrap();
        assert_eq!(base.scores[0], 0.0);
        let x = out.encode_assignment(&[false, false, false]).unwrap();
        assert!(verify_witness(inst, &x).unwrap().passed());
        assert!(matches!(
            decode_witness(&out, &[0.4999, 0.5, 0.5, 0.0]),
            Err(DecodeError::Malformed { coord: 0, .. })
        ));
    }

    #[test]
    fn bisc_epsilon_and_decoding() {
        let bisc = BiscInstance::new(vec![1.0; 4], vec![0.0; 4], vec![vec![1.0, 0.0, 0.0, 0.0]]).unwrap();
        let out = bisc_to_bvpm(&bisc, 1).unwrap();
        assert_eq!(out.instance.budget(), 3.0);
        assert_eq!(decode_witness(&out, &[1.0; 4]).unwrap(), Decoded::Subset(vec![true; 4]));
        assert_eq!(decode_witness(&out, &[0.0; 4]), Err(DecodeError::EmptySubset));
        let w = out.encode_subset(&[true, false, false, false]).unwrap();
        assert_eq!(w, vec![1.0, 0.0, 0.0, 0.0]);
        assert!(verify_witness(&out.instance, &w).unwrap().passed());
        assert_eq!(
            decode_witness(&out, &w).unwrap(),
            Decoded::Subset(vec![true, false, false, false])
        );
    }
}
