//! Homology of the strands algebra over F2, computed blockwise.
//!
//! The differential preserves the left idempotent, the right idempotent, and
//! the multiplicity vector, so Gaussian elimination runs independently on
//! each block.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::linalg::{Echelon, F2Matrix, F2Span};
use crate::pmc::{Idempotent, Pmc};
use crate::strands::{
    diff, diff_element, enumerate_basis, idempotent_string, AlgebraElement, MultiplicityVector,
    StrandDiagram,
};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BlockKey {
    pub left: Idempotent,
    pub right: Idempotent,
    pub mult: MultiplicityVector,
}

pub fn block_key(pmc: &Pmc, d: &StrandDiagram) -> BlockKey {
    BlockKey {
        left: d.left_idem(pmc),
        right: d.right_idem(pmc),
        mult: d.multiplicity(pmc),
    }
}

#[derive(Debug)]
pub struct HomologyBlock {
    pub key: BlockKey,
    pub basis: Vec<StrandDiagram>,
    pub boundary_rank: usize,
    pub cycle_rank: usize,
    /// Cycle representatives of a homology basis.
    pub representatives: Vec<AlgebraElement>,
    boundaries: Echelon,
}

impl HomologyBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn homology_rank(&self) -> usize {
        self.cycle_rank - self.boundary_rank
    }

    fn coords(&self, x: &AlgebraElement) -> Option<Vec<bool>> {
        let mut v = vec![false; self.basis.len()];
        for t in x.terms() {
            let k = self.basis.binary_search(t).ok()?;
            v[k] = true;
        }
        Some(v)
    }

    /// Whether `x` (supported on this block) is a boundary.
    pub fn is_boundary(&self, x: &AlgebraElement) -> bool {
        match self.coords(x) {
            Some(v) => self.boundaries.express(&v).is_some(),
            None => false,
        }
    }
}

#[derive(Debug)]
pub struct Homology {
    blocks: BTreeMap<BlockKey, HomologyBlock>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomologyError {
    NotHomogeneous,
    NotCycle,
}

impl std::fmt::Display for HomologyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HomologyError::NotHomogeneous => {
                write!(f, "element is not supported on a single block")
            }
            HomologyError::NotCycle => write!(f, "element is not a cycle"),
        }
    }
}

impl std::error::Error for HomologyError {}

/// Runs blockwise elimination of the differential on the full basis.
pub fn homology(pmc: &Pmc) -> Homology {
    let mut grouped: BTreeMap<BlockKey, Vec<StrandDiagram>> = BTreeMap::new();
    for d in enumerate_basis(pmc) {
        grouped.entry(block_key(pmc, &d)).or_default().push(d);
    }
    let mut blocks = BTreeMap::new();
    for (key, basis) in grouped {
        // basis is sorted because enumerate_basis is sorted.
        let n = basis.len();
        let mut mat = F2Matrix::zero(n, n);
        for (r, d0) in basis.iter().enumerate() {
            for t in diff(pmc, d0).terms() {
                let c = basis
                    .binary_search(t)
                    .expect("differential leaves its block");
                mat.flip(r, c);
            }
        }
        let reduced = Echelon::reduce(mat.clone());
        let boundary_rank = reduced.rank();
        let kernel = reduced.kernel_combinations();
        let cycle_rank = kernel.len();

        // Representatives: kernel vectors independent modulo the image.
        let mut span = F2Span::new(n);
        for r in 0..n {
            let row: Vec<bool> = (0..n).map(|c| mat.get(r, c)).collect();
            span.insert(&row);
        }
        debug_assert_eq!(span.dim(), boundary_rank);
        let mut representatives = Vec::new();
        for combo in &kernel {
            let mut cand = vec![false; n];
            for &r in combo {
                cand[r] = !cand[r];
            }
            if span.insert(&cand) {
                representatives.push(AlgebraElement::from_terms(
                    cand.iter()
                        .enumerate()
                        .filter(|(_, &v)| v)
                        .map(|(k, _)| basis[k].clone())
                        .collect(),
                ));
            }
        }
        debug_assert_eq!(representatives.len(), cycle_rank - boundary_rank);

        blocks.insert(
            key.clone(),
            HomologyBlock {
                key,
                basis,
                boundary_rank,
                cycle_rank,
                representatives,
                boundaries: reduced,
            },
        );
    }
    Homology { blocks }
}

impl Homology {
    pub fn blocks(&self) -> impl Iterator<Item = &HomologyBlock> {
        self.blocks.values()
    }

    pub fn block(&self, key: &BlockKey) -> Option<&HomologyBlock> {
        self.blocks.get(key)
    }

    /// The block carrying a nonzero homogeneous element.
    pub fn block_of(
        &self,
        pmc: &Pmc,
        x: &AlgebraElement,
    ) -> Result<&HomologyBlock, HomologyError> {
        let mut terms = x.terms().iter();
        let first = terms.next().ok_or(HomologyError::NotHomogeneous)?;
        let key = block_key(pmc, first);
        for t in terms {
            if block_key(pmc, t) != key {
                return Err(HomologyError::NotHomogeneous);
            }
        }
        self.blocks.get(&key).ok_or(HomologyError::NotHomogeneous)
    }

    pub fn is_cycle(&self, pmc: &Pmc, x: &AlgebraElement) -> bool {
        diff_element(pmc, x).is_zero()
    }

    /// Whether a homogeneous cycle is a boundary; the zero element is one.
    pub fn is_boundary(&self, pmc: &Pmc, x: &AlgebraElement) -> Result<bool, HomologyError> {
        if x.is_zero() {
            return Ok(true);
        }
        Ok(self.block_of(pmc, x)?.is_boundary(x))
    }

    /// Whether two cycles represent the same homology class.
    pub fn homologous(
        &self,
        pmc: &Pmc,
        a: &AlgebraElement,
        b: &AlgebraElement,
    ) -> Result<bool, HomologyError> {
        if !self.is_cycle(pmc, a) || !self.is_cycle(pmc, b) {
            return Err(HomologyError::NotCycle);
        }
        let sum = a.add(b);
        if sum.is_zero() {
            return Ok(true);
        }
        match self.block_of(pmc, &sum) {
            Ok(block) => Ok(block.is_boundary(&sum)),
            // Supported on different blocks: distinct classes.
            Err(HomologyError::NotHomogeneous) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Canonical rank table, one line per nonempty block.
    pub fn rank_table(&self, pmc: &Pmc) -> String {
        let mut out = String::new();
        for block in self.blocks.values() {
            writeln!(
                out,
                "block left={} right={} mult={} dim={} boundaries={} cycles={} homology={}",
                idempotent_string(pmc, block.key.left),
                idempotent_string(pmc, block.key.right),
                block.key.mult,
                block.dim(),
                block.boundary_rank,
                block.cycle_rank,
                block.homology_rank()
            )
            .unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmc::Pmc;
    use crate::strands::parse_element;

    #[test]
    fn idempotents_are_nontrivial_classes() {
        let pmc = Pmc::genus1();
        let h = homology(&pmc);
        for i in pmc.all_idempotents() {
            let x = AlgebraElement::single(StrandDiagram::idempotent(i));
            assert!(h.is_cycle(&pmc, &x));
            assert!(!h.is_boundary(&pmc, &x).unwrap());
        }
    }

    #[test]
    fn crossed_diagram_is_boundary() {
        let pmc = Pmc::genus1();
        let h = homology(&pmc);
        let x = parse_element(&pmc, "1-3,2-4").unwrap();
        assert!(h.is_cycle(&pmc, &x));
        assert!(h.is_boundary(&pmc, &x).unwrap());
        // Its preimage 1-4,2-3 is not a cycle.
        let y = parse_element(&pmc, "1-4,2-3").unwrap();
        assert!(!h.is_cycle(&pmc, &y));
    }

    #[test]
    fn homologous_basics() {
        let pmc = Pmc::genus1();
        let h = homology(&pmc);
        let a = parse_element(&pmc, "1-3").unwrap();
        assert!(h.homologous(&pmc, &a, &a).unwrap());
        let i1 = parse_element(&pmc, "h1").unwrap();
        let i2 = parse_element(&pmc, "h2").unwrap();
        assert!(!h.homologous(&pmc, &i1, &i2).unwrap());
    }

    #[test]
    fn euler_characteristic_per_block() {
        // dim = cycles + boundaries-out; over F2 with d mapping a block to
        // itself, rank-nullity gives dim = cycle_rank + boundary_rank.
        let pmc = Pmc::genus2_split();
        let h = homology(&pmc);
        for block in h.blocks() {
            assert_eq!(block.dim(), block.cycle_rank + block.boundary_rank);
            assert_eq!(
                block.representatives.len(),
                block.homology_rank(),
                "block {:?}",
                block.key
            );
            for rep in &block.representatives {
                assert!(h.is_cycle(&pmc, rep));
                assert!(!block.is_boundary(rep));
            }
        }
    }
}
