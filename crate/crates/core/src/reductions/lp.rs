//! l_p constructions for integer 1 < p < infinity. Gadget parameters only
//! exist through a continuity argument, so they are located numerically and
//! checked against the strict inequalities before an instance is emitted.

use super::{Decoder, Metadata, ReductionError, ReductionKind, ReductionOutput};
use crate::election::{distance, Electorate, Instance, IssueSpace, Norm, Objective, OpinionGroup, ScoringRule};
use crate::problems::SatFormula;

/// Smallest margin accepted on either side of a gadget inequality.
pub const MIN_MARGIN: f64 = 1e-9;

fn exponent(norm: Norm) -> Result<u32, ReductionError> {
    match norm {
        Norm::L(p) if p >= 2 => Ok(p),
        _ => Err(ReductionError::Unsupported(format!("an integer norm exponent 1 < p < inf, got {norm}"))),
    }
}

fn pw(x: f64, p: u32) -> f64 {
    x.abs().powi(p as i32)
}

/// Bisects a continuous function that is negative at 0 and positive far out.
fn bisect_root(f: impl Fn(f64) -> f64) -> Option<f64> {
    let mut hi = 1.0;
    while f(hi) <= 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return None;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Centre coefficient and radius of the smallest l_p ball around the first
/// `d'` unit vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnclosingBallParams {
    pub d_prime: usize,
    pub p: u32,
    pub c: f64,
    pub r: f64,
}

pub fn enclosing_ball_params(d_prime: usize, norm: Norm) -> Result<EnclosingBallParams, ReductionError> {
    let p = exponent(norm)?;
    if d_prime < 2 {
        return Err(ReductionError::Unsupported(format!("at least two unit vectors, got {d_prime}")));
    }
    let c = 1.0 / (1.0 + ((d_prime - 1) as f64).powf(1.0 / (p - 1) as f64));
    let r = ((d_prime - 1) as f64 * pw(c, p) + pw(1.0 - c, p)).powf(1.0 / p as f64);
    Ok(EnclosingBallParams { d_prime, p, c, r })
}

/// Parameters of the destructive construction over `d - 1` variables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct A3Params {
    pub d: usize,
    pub p: u32,
    pub a: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub l: f64,
    /// Distance power to the rival minus the value with no true literal.
    pub margin_low: f64,
    /// Value with one true literal minus the distance power to the rival.
    pub margin_high: f64,
}

impl A3Params {
    /// Distance power from the encoded witness to a clause voter with `t`
    /// true literals.
    pub fn clause_distance_pow(&self, t: u32) -> f64 {
        let (p, u, al) = (self.p, 1.0 / self.d as f64, self.alpha);
        t as f64 * pw(u + al, p)
            + (3 - t) as f64 * pw(u - al, p)
            + (self.d - 4) as f64 * pw(u, p)
            + pw(u + self.l * al, p)
    }

    /// Distance power from the rival to any clause voter.
    pub fn rival_distance_pow(&self) -> f64 {
        pw(self.a, self.p) + 3.0 * pw(self.alpha, self.p) + pw(self.l * self.alpha, self.p)
    }
}

pub fn a3_parameters(d: usize, norm: Norm) -> Result<A3Params, ReductionError> {
    let p = exponent(norm)?;
    if d < 4 {
        return Err(ReductionError::Unsupported(format!("d >= 4, got {d}")));
    }
    let u = 1.0 / d as f64;
    let ap = pw(u + 1.0, p) + (d - 1) as f64 * pw(u, p) - 1.0;
    let a = ap.powf(1.0 / p as f64);
    let epsilon = (d as f64).powf(1.0 / p as f64 - 1.0);
    let mut best: Option<A3Params> = None;
    // The midpoint condition only turns positive for large alpha when
    // l^(p-1) > 2, so the scan starts just above that bound.
    let l_min = 2f64.powf(1.0 / (p - 1) as f64);
    for k in 1..=200 {
        let l = l_min * (1.0 + 0.05 * k as f64);
        let probe = |alpha: f64| A3Params { d, p, a, epsilon, alpha, l, margin_low: 0.0, margin_high: 0.0 };
        let mid = |alpha: f64| {
            let q = probe(alpha);
            0.5 * (q.clause_distance_pow(0) + q.clause_distance_pow(1)) - q.rival_distance_pow()
        };
        let Some(alpha) = bisect_root(mid) else { continue };
        let mut q = probe(alpha);
        let k_val = q.rival_distance_pow();
        q.margin_low = k_val - q.clause_distance_pow(0);
        q.margin_high = q.clause_distance_pow(1) - k_val;
        let score = q.margin_low.min(q.margin_high) / k_val;
        if best.is_none_or(|b| score > b.margin_low.min(b.margin_high) / b.rival_distance_pow()) {
            best = Some(q);
        }
    }
    match best {
        Some(q) if q.margin_low >= MIN_MARGIN && q.margin_high >= MIN_MARGIN => Ok(q),
        _ => Err(ReductionError::ParameterSearch { d, p }),
    }
}

/// Parameters of the constructive construction with `d' - 1` variables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct A5Params {
    pub ball: EnclosingBallParams,
    pub epsilon: f64,
    pub alpha: f64,
    pub l: f64,
    /// Radius power minus the value with one true literal.
    pub margin_low: f64,
    /// Value with no true literal minus the radius power.
    pub margin_high: f64,
}

impl A5Params {
    pub fn clause_distance_pow(&self, t: u32) -> f64 {
        let (p, c, al) = (self.ball.p, self.ball.c, self.alpha);
        t as f64 * pw(al - c, p)
            + (3 - t) as f64 * pw(al + c, p)
            + (self.ball.d_prime - 4) as f64 * pw(c, p)
            + pw(self.l * al - c, p)
    }
}

pub fn a5_parameters(d_prime: usize, norm: Norm) -> Result<A5Params, ReductionError> {
    let ball = enclosing_ball_params(d_prime, norm)?;
    if d_prime < 4 {
        return Err(ReductionError::Unsupported(format!("d' >= 4, got {d_prime}")));
    }
    let rp = pw(ball.r, ball.p);
    // With l * alpha = c the last clause term vanishes and the midpoint of
    // the two sides rises from below r^p to infinity.
    let with = |alpha: f64| A5Params { ball, epsilon: 0.0, alpha, l: ball.c / alpha, margin_low: 0.0, margin_high: 0.0 };
    let mid = |alpha: f64| {
        let q = with(alpha);
        0.5 * (q.clause_distance_pow(0) + q.clause_distance_pow(1)) - rp
    };
    let alpha = bisect_root(mid).ok_or(ReductionError::ParameterSearch { d: d_prime, p: ball.p })?;
    let mut q = with(alpha);
    q.epsilon = ball.c * (d_prime as f64).powf(1.0 / ball.p as f64);
    q.margin_low = rp - q.clause_distance_pow(1);
    q.margin_high = q.clause_distance_pow(0) - rp;
    if q.margin_low < MIN_MARGIN || q.margin_high < MIN_MARGIN {
        return Err(ReductionError::ParameterSearch { d: d_prime, p: ball.p });
    }
    Ok(q)
}

/// Destructive construction: a heavy loyal voter behind the target, a pair
/// of unit voters per coordinate, and one voter per clause that is lost
/// exactly when some literal of the clause is true.
pub fn sat_to_rvpm_destructive_lp(formula: &SatFormula, norm: Norm) -> Result<ReductionOutput, ReductionError> {
    let vars = formula.num_vars();
    let d = vars + 1;
    let q = a3_parameters(d, norm)?;
    let dim = d + 1;
    let r = formula.clauses().len() as u64;
    if q.a + q.epsilon >= 2.0 * q.a {
        return Err(ReductionError::Structure("loyalty of the heavy voter".into()));
    }
    let mut rival = vec![0.0; dim];
    rival[d] = q.a;
    let mut groups = Vec::new();
    for clause in formula.clauses() {
        let mut pos = vec![0.0; dim];
        for lit in clause {
            pos[lit.var] = if lit.negated { q.alpha } else { -q.alpha };
        }
        pos[d - 1] = q.l * q.alpha;
        groups.push(OpinionGroup { position: pos, weight: 1 });
    }
    for i in 0..d {
        for s in [1.0, -1.0] {
            let mut pos = vec![0.0; dim];
            pos[i] = s;
            groups.push(OpinionGroup { position: pos, weight: 1 });
        }
    }
    if r > 0 {
        let mut pos = vec![0.0; dim];
        pos[d] = -q.a;
        groups.push(OpinionGroup { position: pos, weight: r });
    }
    let instance = Instance::new(
        IssueSpace::Real,
        vec![vec![0.0; dim], rival],
        Electorate::Groups(groups),
        norm,
        ScoringRule::plurality(2),
        Objective::Destructive,
        q.epsilon,
    )?;
    let u = 1.0 / d as f64;
    Ok(ReductionOutput {
        instance,
        decoder: Decoder::Assignment {
            dimension: dim,
            true_value: u,
            false_value: -u,
            strict: vec![true; vars],
            fixed: vec![(d - 1, -u), (d, 0.0)],
        },
        metadata: Metadata {
            kind: ReductionKind::SatDestructiveLp,
            dummy_voters: r,
            params: vec![
                ("epsilon", q.epsilon),
                ("a", q.a),
                ("alpha", q.alpha),
                ("l", q.l),
                ("margin_low", q.margin_low),
                ("margin_high", q.margin_high),
            ],
            pairs: Vec::new(),
        },
    })
}

/// Constructive construction: clause and unit-vector gadgets whose voters
/// each sit at the enclosing radius from their own candidate, against a far
/// rival holding as many dummy votes as the target must win.
pub fn sat_to_rvpm_constructive_lp(formula: &SatFormula, norm: Norm) -> Result<ReductionOutput, ReductionError> {
    let vars = formula.num_vars();
    let d_prime = vars + 1;
    let dim = vars + 2;
    let q = a5_parameters(d_prime, norm)?;
    let r_ball = q.ball.r;
    let mut voters = Vec::new();
    let mut candidates = vec![vec![0.0; dim], vec![0.0; dim]];
    let mut pairs = Vec::new();
    let mut add = |voter: Vec<f64>, voters: &mut Vec<Vec<f64>>, candidates: &mut Vec<Vec<f64>>| {
        let mut cand = voter.clone();
        cand[dim - 1] = r_ball;
        pairs.push((voters.len(), candidates.len()));
        voters.push(voter);
        candidates.push(cand);
    };
    for clause in formula.clauses() {
        let mut pos = vec![0.0; dim];
        for lit in clause {
            pos[lit.var] = if lit.negated { -q.alpha } else { q.alpha };
        }
        pos[d_prime - 1] = q.l * q.alpha;
        add(pos, &mut voters, &mut candidates);
    }
    for i in 0..d_prime {
        for s in [1.0, -1.0] {
            let mut pos = vec![0.0; dim];
            pos[i] = s;
            add(pos, &mut voters, &mut candidates);
        }
    }
    let gadget_norm = voters
        .iter()
        .chain(&candidates[2..])
        .map(|x| distance(x, &vec![0.0; dim], norm))
        .try_fold(0.0f64, |m, d| d.map(|d| m.max(d)))?;
    let m = 10.0 * gadget_norm;
    candidates[1][0] = m;
    for v in &voters {
        if distance(v, &candidates[1], norm)? <= r_ball {
            return Err(ReductionError::Structure("rival far from every gadget voter".into()));
        }
    }
    let r = formula.clauses().len() as u64;
    let mut groups: Vec<OpinionGroup> =
        voters.into_iter().map(|position| OpinionGroup { position, weight: 1 }).collect();
    groups.push(OpinionGroup { position: candidates[1].clone(), weight: d_prime as u64 + r });
    let n = candidates.len();
    let instance = Instance::new(
        IssueSpace::Real,
        candidates,
        Electorate::Groups(groups),
        norm,
        ScoringRule::plurality(n),
        Objective::Constructive,
        q.epsilon,
    )?;
    let c = q.ball.c;
    Ok(ReductionOutput {
        instance,
        decoder: Decoder::Assignment {
            dimension: dim,
            true_value: c,
            false_value: -c,
            strict: vec![true; vars],
            fixed: vec![(d_prime - 1, c), (dim - 1, 0.0)],
        },
        metadata: Metadata {
            kind: ReductionKind::SatConstructiveLp,
            dummy_voters: d_prime as u64 + r,
            params: vec![
                ("epsilon", q.epsilon),
                ("c", c),
                ("radius", r_ball),
                ("alpha", q.alpha),
                ("l", q.l),
                ("rival_coordinate", m),
                ("margin_low", q.margin_low),
                ("margin_high", q.margin_high),
            ],
            pairs,
        },
    })
}
