//! Feasibility of `||x - y||_inf <= eps` together with `||x - a_i||_inf >= b_i`
//! for a handful of cubes, in time linear in the dimension.
//!
//! A point escapes cube `i` as soon as one coordinate escapes the cube's
//! interval, so the problem is a set cover over dimensions: each candidate
//! coordinate `p` on dimension `j` covers the cubes it escapes. The family of
//! partial covers is kept as an antichain under inclusion.

use fixedbitset::FixedBitSet;

use super::{endpoint_grid, Cube};

/// A partial solution: the cubes escaped so far and the coordinates that
/// escape them. Unlisted coordinates stay at the budget center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverMember {
    pub set: FixedBitSet,
    pub coords: Vec<(usize, u64)>,
}

#[derive(Clone, Debug, Default)]
pub struct CoverFamily {
    pub members: Vec<CoverMember>,
}

impl CoverFamily {
    /// No member's set is contained in another's.
    pub fn is_antichain(&self) -> bool {
        let m = &self.members;
        (0..m.len()).all(|a| (0..m.len()).all(|b| a == b || !m[a].set.is_subset(&m[b].set)))
    }

    fn prune(&mut self) {
        let m = std::mem::take(&mut self.members);
        let mut keep = vec![true; m.len()];
        for a in 0..m.len() {
            for b in 0..m.len() {
                if a == b || !keep[b] {
                    continue;
                }
                // Strict subsets go; of two equal sets the earlier one stays.
                if m[a].set.is_subset(&m[b].set) && (m[a].set != m[b].set || b < a) {
                    keep[a] = false;
                    break;
                }
            }
        }
        self.members = m.into_iter().zip(keep).filter_map(|(x, k)| k.then_some(x)).collect();
    }
}

fn point_from(y: &[f64], coords: &[(usize, u64)]) -> Vec<f64> {
    let mut out = y.to_vec();
    for &(j, bits) in coords {
        out[j] = f64::from_bits(bits);
    }
    out
}

pub fn feasibility_constant_constraints(y: &[f64], epsilon: f64, cubes: &[Cube]) -> Option<Vec<f64>> {
    feasibility_constant_constraints_traced(y, epsilon, cubes, |_| {})
}

/// As [`feasibility_constant_constraints`], calling `observe` with the
/// family after every pruning step.
pub fn feasibility_constant_constraints_traced(
    y: &[f64],
    epsilon: f64,
    cubes: &[Cube],
    mut observe: impl FnMut(&CoverFamily),
) -> Option<Vec<f64>> {
    let k = cubes.len();
    if k == 0 {
        return Some(y.to_vec());
    }
    let budget = Cube { center: y.to_vec(), radius: epsilon };
    let grid = endpoint_grid(cubes, &budget);
    let mut full = FixedBitSet::with_capacity(k);
    full.insert_range(..);
    let mut family = CoverFamily::default();
    for (j, (points, covers)) in grid.points.iter().zip(&grid.covers).enumerate() {
        // Distinct cover sets only; the first coordinate producing each wins.
        let mut column: Vec<(f64, &FixedBitSet)> = Vec::new();
        for (&p, s) in points.iter().zip(covers) {
            if !column.iter().any(|(_, t)| *t == s) {
                column.push((p, s));
            }
        }
        let mut added = Vec::new();
        if j == 0 {
            for (p, s) in column {
                added.push(CoverMember { set: s.clone(), coords: vec![(0, p.to_bits())] });
            }
        } else {
            for member in &family.members {
                for (p, s) in &column {
                    if !s.is_subset(&member.set) {
                        let mut set = member.set.clone();
                        set.union_with(s);
                        let mut coords = member.coords.clone();
                        coords.push((j, p.to_bits()));
                        added.push(CoverMember { set, coords });
                    }
                }
            }
        }
        if let Some(done) = added.iter().find(|m| m.set == full) {
            return Some(point_from(y, &done.coords));
        }
        family.members.extend(added);
        family.prune();
        debug_assert!(family.is_antichain());
        observe(&family);
    }
    None
}
