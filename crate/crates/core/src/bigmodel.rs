//! The large rank model of the identity AA bimodule: generators are pairs of
//! algebra generators with complementary left idempotents, the differential
//! has three arrow families, and the two action families multiply on the
//! second column and factor off the first.

use std::collections::BTreeMap;
use std::fmt;

use crate::pmc::{Idempotent, Pmc};
use crate::strands::{
    chord_element_right, diagram_string, diff, enumerate_basis, factorizations, mul, rev_diff,
    MultiplicityVector, StrandDiagram,
};

/// A generator `[a1, a2]`; the left idempotent of `a1` is complementary to
/// the left idempotent of `a2`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BigGenerator {
    pub a1: StrandDiagram,
    pub a2: StrandDiagram,
}

#[derive(Debug, Clone)]
pub struct ComplementError;

impl fmt::Display for ComplementError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "left idempotents are not complementary")
    }
}

impl std::error::Error for ComplementError {}

impl BigGenerator {
    pub fn new(
        pmc: &Pmc,
        a1: StrandDiagram,
        a2: StrandDiagram,
    ) -> Result<BigGenerator, ComplementError> {
        if a1.left_idem(pmc) != pmc.complement(a2.left_idem(pmc)) {
            return Err(ComplementError);
        }
        Ok(BigGenerator { a1, a2 })
    }

    /// The idempotent-pair generator indexed by the second column.
    pub fn idempotent_pair(pmc: &Pmc, i: Idempotent) -> BigGenerator {
        BigGenerator {
            a1: StrandDiagram::idempotent(pmc.complement(i)),
            a2: StrandDiagram::idempotent(i),
        }
    }

    pub fn is_idempotent_pair(&self) -> bool {
        self.a1.is_idempotent() && self.a2.is_idempotent()
    }

    /// Sum of the column multiplicities; invariant under the differential.
    pub fn multiplicity(&self, pmc: &Pmc) -> MultiplicityVector {
        self.a1.multiplicity(pmc).add(&self.a2.multiplicity(pmc))
    }

    pub fn to_string_with(&self, pmc: &Pmc) -> String {
        format!(
            "[{} | {}]",
            diagram_string(pmc, &self.a1),
            diagram_string(pmc, &self.a2)
        )
    }
}

/// All differential arrows out of `x`, reduced mod 2 and sorted.
///
/// The three families: differentiate the second column; replace the first
/// column by anything it is a differential term of; factor a chord
/// decoration off the left of the first column and multiply it into the
/// second.
pub fn d_arrows(pmc: &Pmc, x: &BigGenerator) -> Vec<BigGenerator> {
    let mut out: Vec<BigGenerator> = Vec::new();
    for b in diff(pmc, &x.a2).terms() {
        out.push(BigGenerator {
            a1: x.a1.clone(),
            a2: b.clone(),
        });
    }
    for y in rev_diff(pmc, &x.a1) {
        out.push(BigGenerator {
            a1: y,
            a2: x.a2.clone(),
        });
    }
    for (dec, c) in factorizations(pmc, &x.a1) {
        if dec.strands().len() != 1 {
            continue;
        }
        let (s, e) = dec.strands()[0];
        let chord = crate::pmc::Chord::new(s, e);
        let Some(dec_right) = chord_element_right(pmc, chord, x.a2.left_idem(pmc)) else {
            continue;
        };
        let Some(y2) = mul(pmc, &dec_right, &x.a2) else {
            continue;
        };
        out.push(BigGenerator { a1: c, a2: y2 });
    }
    // Cancel duplicated targets mod 2.
    out.sort_unstable();
    let mut reduced: Vec<BigGenerator> = Vec::with_capacity(out.len());
    for g in out {
        if reduced.last() == Some(&g) {
            reduced.pop();
        } else {
            reduced.push(g);
        }
    }
    reduced
}

/// Right action: multiply `b` into the second column.
pub fn action_right(pmc: &Pmc, x: &BigGenerator, b: &StrandDiagram) -> Option<BigGenerator> {
    mul(pmc, &x.a2, b).map(|a2| BigGenerator {
        a1: x.a1.clone(),
        a2,
    })
}

/// Left action: factor `c` off the right of the first column, summing over
/// every factorization.
pub fn action_left(pmc: &Pmc, x: &BigGenerator, c: &StrandDiagram) -> Vec<BigGenerator> {
    let mut out = Vec::new();
    for (y, part) in factorizations(pmc, &x.a1) {
        if &part == c {
            out.push(BigGenerator {
                a1: y,
                a2: x.a2.clone(),
            });
        }
    }
    out.sort_unstable();
    out
}

/// The full generator set, grouped by the left idempotent of the first
/// column. Feasible for desk-scale circles only.
pub struct BigModel {
    /// Basis diagrams grouped by left idempotent.
    pub blocks: BTreeMap<Idempotent, Vec<StrandDiagram>>,
}

impl BigModel {
    pub fn build(pmc: &Pmc) -> BigModel {
        let mut blocks: BTreeMap<Idempotent, Vec<StrandDiagram>> = BTreeMap::new();
        for d in enumerate_basis(pmc) {
            blocks.entry(d.left_idem(pmc)).or_default().push(d);
        }
        BigModel { blocks }
    }

    fn empty_block() -> &'static Vec<StrandDiagram> {
        static EMPTY: Vec<StrandDiagram> = Vec::new();
        &EMPTY
    }

    pub fn block(&self, idem: Idempotent) -> &Vec<StrandDiagram> {
        self.blocks.get(&idem).unwrap_or_else(|| Self::empty_block())
    }

    pub fn num_generators(&self, pmc: &Pmc) -> usize {
        pmc.all_idempotents()
            .map(|i| self.block(pmc.complement(i)).len() * self.block(i).len())
            .sum()
    }

    /// Materializes every generator; intended for small circles and dumps.
    pub fn generators(&self, pmc: &Pmc) -> Vec<BigGenerator> {
        let mut out = Vec::new();
        for i in pmc.all_idempotents() {
            for a1 in self.block(pmc.complement(i)) {
                for a2 in self.block(i) {
                    out.push(BigGenerator {
                        a1: a1.clone(),
                        a2: a2.clone(),
                    });
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Generators of the subcomplex spanned by idempotent pairs.
pub fn subcomplex_n(pmc: &Pmc) -> Vec<BigGenerator> {
    pmc.all_idempotents()
        .map(|i| BigGenerator::idempotent_pair(pmc, i))
        .collect()
}

/// Inclusion of the idempotent subcomplex.
pub fn map_f(pmc: &Pmc, i: Idempotent) -> BigGenerator {
    BigGenerator::idempotent_pair(pmc, i)
}

/// Projection onto the idempotent subcomplex.
pub fn map_g(pmc: &Pmc, x: &BigGenerator) -> Option<Idempotent> {
    if x.is_idempotent_pair() {
        Some(x.a2.left_idem(pmc))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strands::parse_diagram;

    fn gen(pmc: &Pmc, a1: &str, a2: &str) -> BigGenerator {
        BigGenerator::new(
            pmc,
            parse_diagram(pmc, a1).unwrap(),
            parse_diagram(pmc, a2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_complementary() {
        let pmc = Pmc::genus1();
        let a = parse_diagram(&pmc, "1-2").unwrap();
        assert!(BigGenerator::new(&pmc, a.clone(), a).is_err());
    }

    #[test]
    fn differential_families() {
        let g2 = Pmc::genus2_split();
        // Second-column differential.
        let x = gen(&g2, "h5,h6", "3-6,h2");
        let t = gen(&g2, "h5,h6", "3-4,4-6");
        assert!(d_arrows(&g2, &x).contains(&t));
        // First-column reverse differential: [2-4,3-6|.] -> [2-6,3-4|.].
        let x = gen(&g2, "2-4,3-6", "h5,h6");
        let t = gen(&g2, "2-6,3-4", "h5,h6");
        assert!(d_arrows(&g2, &x).contains(&t));
        // Chord exchange across the columns: [2-6|4-7] -> [4-6|2-7], realized
        // in the antipodal circle where the points 2 and 4 are not paired.
        let anti = Pmc::genus2_antipodal();
        let x = gen(&anti, "2-6,h3", "4-7,h1");
        let t = gen(&anti, "4-6,h3", "2-7,h1");
        assert!(d_arrows(&anti, &x).contains(&t));
    }

    #[test]
    fn specialhomotopy_square_genus1() {
        // dx = y + w and dz = w on the four displayed generators.
        let pmc = Pmc::genus1();
        let x = gen(&pmc, "1-4", "h2");
        let y = gen(&pmc, "2-4", "1-2");
        let z = gen(&pmc, "1-2", "2-4");
        let w = gen(&pmc, "h2", "1-4");
        assert_eq!(d_arrows(&pmc, &x), {
            let mut v = vec![y.clone(), w.clone()];
            v.sort_unstable();
            v
        });
        assert_eq!(d_arrows(&pmc, &z), vec![w.clone()]);
        assert!(d_arrows(&pmc, &y).is_empty());
        assert!(d_arrows(&pmc, &w).is_empty());
    }

    #[test]
    fn actions() {
        let pmc = Pmc::genus1();
        // Right action on an idempotent pair.
        let x = BigGenerator::idempotent_pair(&pmc, parse_diagram(&pmc, "1-2").unwrap().left_idem(&pmc));
        let b = parse_diagram(&pmc, "1-2").unwrap();
        let y = action_right(&pmc, &x, &b).unwrap();
        assert_eq!(y, gen(&pmc, "h2", "1-2"));
        // Mismatched idempotent gives zero.
        let x_off = BigGenerator::idempotent_pair(&pmc, pmc.complement(b.left_idem(&pmc)));
        assert!(action_right(&pmc, &x_off, &b).is_none());
        // Left action factors off the first column.
        let x = gen(&pmc, "1-2", "2-4");
        let ys = action_left(&pmc, &x, &b);
        assert_eq!(ys, vec![gen(&pmc, "h1", "2-4")]);
    }

    #[test]
    fn subcomplex_properties() {
        let pmc = Pmc::genus1();
        let n = subcomplex_n(&pmc);
        assert_eq!(n.len(), 4);
        for x in &n {
            assert!(d_arrows(&pmc, x).is_empty());
            let i = map_g(&pmc, x).unwrap();
            assert_eq!(&map_f(&pmc, i), x);
        }
        // No differential arrow reaches an idempotent pair.
        let model = BigModel::build(&pmc);
        for x in model.generators(&pmc) {
            for t in d_arrows(&pmc, &x) {
                assert!(!t.is_idempotent_pair());
            }
        }
    }

    #[test]
    fn multiplicity_examples() {
        let pmc = Pmc::genus1();
        let x = BigGenerator::idempotent_pair(&pmc, Idempotent::EMPTY.with(1));
        assert!(x.multiplicity(&pmc).is_zero());
        let x = gen(&pmc, "1-4", "h2");
        assert_eq!(x.multiplicity(&pmc).0, vec![1, 1, 1]);
    }

    #[test]
    fn genus1_model_size() {
        let pmc = Pmc::genus1();
        let model = BigModel::build(&pmc);
        assert_eq!(model.num_generators(&pmc), 44);
        assert_eq!(model.generators(&pmc).len(), 44);
    }

    #[test]
    fn d_squared_and_multiplicity_invariance_genus1() {
        let pmc = Pmc::genus1();
        let model = BigModel::build(&pmc);
        for x in model.generators(&pmc) {
            let mult = x.multiplicity(&pmc);
            let dx = d_arrows(&pmc, &x);
            let mut second: Vec<BigGenerator> = Vec::new();
            for y in &dx {
                assert_eq!(y.multiplicity(&pmc), mult, "arrow changes multiplicity");
                second.extend(d_arrows(&pmc, y));
            }
            second.sort_unstable();
            let mut leftover: Vec<&BigGenerator> = Vec::new();
            for g in &second {
                if leftover.last() == Some(&g) {
                    leftover.pop();
                } else {
                    leftover.push(g);
                }
            }
            assert!(leftover.is_empty(), "d^2 != 0 at {}", x.to_string_with(&pmc));
        }
    }
}
