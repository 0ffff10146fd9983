//! The identity type DD structure of a pointed matched circle.
//!
//! Generators are pairs of complementary idempotents, indexed by the forward
//! idempotent. For each chord and each generator, there is an arrow exactly
//! when the chord admits a horizontal decoration with left idempotent the
//! generator on the forward side, and one with right idempotent the
//! complement on the reversed side.

use crate::bimod::{DdArrow, DdStructure};
use crate::pmc::Pmc;
use crate::strands::{chord_element, chord_element_right, mul};

/// Builds the identity DD structure over `pmc`.
pub fn build_identity_dd(pmc: &Pmc) -> DdStructure {
    let generators: Vec<_> = pmc.all_idempotents().collect();
    let mut arrows = Vec::new();
    for &i in &generators {
        for chord in pmc.all_chords() {
            let Some(coeff_a) = chord_element(pmc, chord, i) else {
                continue;
            };
            let Some(coeff_ap) = chord_element_right(pmc, chord, pmc.complement(i)) else {
                continue;
            };
            let target = coeff_a.right_idem(pmc);
            debug_assert_eq!(coeff_ap.left_idem(pmc), pmc.complement(target));
            arrows.push(DdArrow {
                source: i,
                coeff_a,
                coeff_ap,
                target,
            });
        }
    }
    arrows.sort_unstable();
    DdStructure { generators, arrows }
}

#[derive(Debug, Clone)]
pub struct BoundError {
    pub path_len: usize,
    pub cap: usize,
}

impl std::fmt::Display for BoundError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "iterated structure map still nonzero at length {} (cap {})",
            self.path_len, self.cap
        )
    }
}

impl std::error::Error for BoundError {}

/// Longest chain of arrows whose A-side coefficients have a nonzero product.
///
/// Every chord coefficient covers at least one segment and a diagram covers
/// each segment at most 2k times, so any surviving chain has length at most
/// 2k(4k-1); exceeding that cap is an invariant violation.
pub fn check_bounded(pmc: &Pmc, dd: &DdStructure) -> Result<usize, BoundError> {
    let cap = 2 * pmc.genus() * (pmc.num_points() as usize - 1);
    let mut best = 0usize;
    for start in &dd.generators {
        let mut stack = vec![(*start, None::<crate::strands::StrandDiagram>, 0usize)];
        while let Some((gen, product, len)) = stack.pop() {
            best = best.max(len);
            if len > cap {
                return Err(BoundError { path_len: len, cap });
            }
            for arrow in dd.arrows_from(gen) {
                let next = match &product {
                    None => Some(arrow.coeff_a.clone()),
                    Some(p) => mul(pmc, p, &arrow.coeff_a),
                };
                if let Some(next) = next {
                    stack.push((arrow.target, Some(next), len + 1));
                }
            }
        }
    }
    Ok(best)
}
