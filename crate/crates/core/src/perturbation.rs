//! Actions of the rank-1 bimodule obtained from the large model by
//! homological perturbation. An action on a tuple of inputs is the mod-2
//! count of sequences that start and end at idempotent pairs and alternate
//! between consuming one input (multiplying into the second column or
//! factoring off the first) and applying one homotopy arrow.

use std::collections::BTreeMap;

use crate::bigmodel::{action_left, action_right, BigGenerator};
use crate::bimod::{AaArrow, AaEvaluator, AaTable};
use crate::homotopy::h_map;
use crate::pmc::{Idempotent, Pmc};
use crate::strands::{factorizations, StrandDiagram};

/// Which end of the input lists is consumed first. Matching the worked
/// examples requires `HeadFirst`; `TailFirst` exists as a negative control.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConsumeOrder {
    HeadFirst,
    TailFirst,
}

/// Mod-2 counts of accepting sequences per target generator.
pub fn evaluate_action_parities(
    pmc: &Pmc,
    source: Idempotent,
    lefts: &[StrandDiagram],
    rights: &[StrandDiagram],
    order: ConsumeOrder,
) -> BTreeMap<Idempotent, bool> {
    debug_assert!(
        lefts.iter().chain(rights).all(|d| !d.is_idempotent()),
        "inputs must be non-idempotent"
    );
    let mut parities: BTreeMap<Idempotent, bool> = BTreeMap::new();
    if lefts.is_empty() || rights.is_empty() {
        return parities;
    }
    let start = BigGenerator::idempotent_pair(pmc, source);
    consume(pmc, &start, lefts, rights, 0, 0, order, &mut parities);
    parities.retain(|_, odd| *odd);
    parities
}

#[allow(clippy::too_many_arguments)]
fn consume(
    pmc: &Pmc,
    state: &BigGenerator,
    lefts: &[StrandDiagram],
    rights: &[StrandDiagram],
    l_used: usize,
    r_used: usize,
    order: ConsumeOrder,
    parities: &mut BTreeMap<Idempotent, bool>,
) {
    // One input step from an odd state.
    if r_used < rights.len() {
        let b = match order {
            ConsumeOrder::HeadFirst => &rights[r_used],
            ConsumeOrder::TailFirst => &rights[rights.len() - 1 - r_used],
        };
        if let Some(next) = action_right(pmc, state, b) {
            after_input(pmc, &next, lefts, rights, l_used, r_used + 1, order, parities);
        }
    }
    if l_used < lefts.len() {
        let c = match order {
            ConsumeOrder::HeadFirst => &lefts[l_used],
            ConsumeOrder::TailFirst => &lefts[lefts.len() - 1 - l_used],
        };
        for next in action_left(pmc, state, c) {
            after_input(pmc, &next, lefts, rights, l_used + 1, r_used, order, parities);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn after_input(
    pmc: &Pmc,
    state: &BigGenerator,
    lefts: &[StrandDiagram],
    rights: &[StrandDiagram],
    l_used: usize,
    r_used: usize,
    order: ConsumeOrder,
    parities: &mut BTreeMap<Idempotent, bool>,
) {
    if l_used == lefts.len() && r_used == rights.len() {
        if state.is_idempotent_pair() {
            let j = state.a2.left_idem(pmc);
            let e = parities.entry(j).or_insert(false);
            *e = !*e;
        }
        return;
    }
    if state.is_idempotent_pair() {
        // The homotopy vanishes here, so the branch dies.
        return;
    }
    for t in h_map(pmc, state) {
        consume(pmc, &t, lefts, rights, l_used, r_used, order, parities);
    }
}

/// Evaluates one action. The target is forced by the idempotent chains; a
/// second surviving target would violate the sequence description.
pub fn evaluate_action(
    pmc: &Pmc,
    source: Idempotent,
    lefts: &[StrandDiagram],
    rights: &[StrandDiagram],
) -> Option<Idempotent> {
    let parities = evaluate_action_parities(pmc, source, lefts, rights, ConsumeOrder::HeadFirst);
    let mut it = parities.into_iter();
    let first = it.next();
    assert!(it.next().is_none(), "action has two surviving targets");
    first.map(|(j, _)| j)
}

/// A full accepting sequence of states, for inspection and fixtures.
#[derive(Clone, Debug)]
pub struct ActionSequence {
    pub states: Vec<BigGenerator>,
    pub used_special: bool,
}

impl ActionSequence {
    pub fn target(&self, pmc: &Pmc) -> Idempotent {
        self.states.last().unwrap().a2.left_idem(pmc)
    }
}

/// Enumerates every accepting sequence for one input tuple, with
/// multiplicity (no mod-2 cancellation).
pub fn action_sequences(
    pmc: &Pmc,
    source: Idempotent,
    lefts: &[StrandDiagram],
    rights: &[StrandDiagram],
) -> Vec<ActionSequence> {
    let mut out = Vec::new();
    if lefts.is_empty() || rights.is_empty() {
        return out;
    }
    let start = BigGenerator::idempotent_pair(pmc, source);
    let mut states = vec![start];
    seq_consume(pmc, lefts, rights, 0, 0, &mut states, false, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn seq_consume(
    pmc: &Pmc,
    lefts: &[StrandDiagram],
    rights: &[StrandDiagram],
    l_used: usize,
    r_used: usize,
    states: &mut Vec<BigGenerator>,
    used_special: bool,
    out: &mut Vec<ActionSequence>,
) {
    let state = states.last().unwrap().clone();
    if r_used < rights.len() {
        if let Some(next) = action_right(pmc, &state, &rights[r_used]) {
            states.push(next);
            seq_after(pmc, lefts, rights, l_used, r_used + 1, states, used_special, out);
            states.pop();
        }
    }
    if l_used < lefts.len() {
        for next in action_left(pmc, &state, &lefts[l_used]) {
            states.push(next);
            seq_after(pmc, lefts, rights, l_used + 1, r_used, states, used_special, out);
            states.pop();
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn seq_after(
    pmc: &Pmc,
    lefts: &[StrandDiagram],
    rights: &[StrandDiagram],
    l_used: usize,
    r_used: usize,
    states: &mut Vec<BigGenerator>,
    used_special: bool,
    out: &mut Vec<ActionSequence>,
) {
    let state = states.last().unwrap().clone();
    if l_used == lefts.len() && r_used == rights.len() {
        if state.is_idempotent_pair() {
            debug_assert_eq!(states.len() % 2, 0, "accepting sequences have even length");
            out.push(ActionSequence {
                states: states.clone(),
                used_special,
            });
        }
        return;
    }
    if state.is_idempotent_pair() {
        return;
    }
    let value = crate::homotopy::h_value(pmc, &state);
    if let Some(t) = &value.ordinary {
        states.push(t.clone());
        seq_consume(pmc, lefts, rights, l_used, r_used, states, used_special, out);
        states.pop();
    }
    for (_, t) in &value.specials {
        states.push(t.clone());
        seq_consume(pmc, lefts, rights, l_used, r_used, states, true, out);
        states.pop();
    }
}

/// The perturbation evaluator as an action source.
pub struct PerturbationEvaluator;

impl AaEvaluator for PerturbationEvaluator {
    fn act(
        &self,
        pmc: &Pmc,
        source: Idempotent,
        lefts: &[StrandDiagram],
        rights: &[StrandDiagram],
    ) -> Option<Idempotent> {
        evaluate_action(pmc, source, lefts, rights)
    }
}

/// Tabulates every nonzero action whose inputs' total multiplicity is at
/// most `max_mult`.
pub fn enumerate_actions(pmc: &Pmc, max_mult: u32) -> AaTable {
    let mut arrows = Vec::new();
    crate::bimod::for_each_tuple(pmc, max_mult, &mut |source, lefts, rights| {
        if let Some(target) = evaluate_action(pmc, source, lefts, rights) {
            arrows.push(AaArrow {
                source,
                lefts: lefts.to_vec(),
                rights: rights.to_vec(),
                target,
            });
        }
        Ok(())
    })
    .expect("enumeration callback never fails");
    AaTable::new(arrows, max_mult)
}

/// One term of the one-input specialization: the left inputs factored off,
/// in order of consumption.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phi1Term {
    pub letters: Vec<StrandDiagram>,
    pub used_special: bool,
}

/// All sequences with exactly one right input `a`, consumed first; the
/// sequence then alternates between a homotopy arrow and factoring a
/// non-idempotent generator off the first column.
pub fn phi1_terms(pmc: &Pmc, a: &StrandDiagram) -> Vec<Phi1Term> {
    assert!(!a.is_idempotent(), "inputs must be non-idempotent");
    let source = a.left_idem(pmc);
    let start = BigGenerator::idempotent_pair(pmc, source);
    let mut out = Vec::new();
    let Some(state) = action_right(pmc, &start, a) else {
        return out;
    };
    let mut letters = Vec::new();
    phi1_go(pmc, &state, &mut letters, false, &mut out);
    out
}

fn phi1_go(
    pmc: &Pmc,
    state: &BigGenerator,
    letters: &mut Vec<StrandDiagram>,
    used_special: bool,
    out: &mut Vec<Phi1Term>,
) {
    if state.is_idempotent_pair() {
        out.push(Phi1Term {
            letters: letters.clone(),
            used_special,
        });
        return;
    }
    let value = crate::homotopy::h_value(pmc, state);
    let mut arms: Vec<(bool, &BigGenerator)> = Vec::new();
    if let Some(t) = &value.ordinary {
        arms.push((false, t));
    }
    for (_, t) in &value.specials {
        arms.push((true, t));
    }
    for (special, t) in arms {
        for (y, c) in factorizations(pmc, &t.a1) {
            if c.is_idempotent() {
                continue;
            }
            letters.push(c);
            let next = BigGenerator {
                a1: y,
                a2: t.a2.clone(),
            };
            phi1_go(pmc, &next, letters, used_special || special, out);
            letters.pop();
        }
    }
}

/// The one-input component of the morphism carried by the box tensor with
/// the identity DD structure, evaluated through the sequence description:
/// only sequences whose factored letters are all single-strand chord
/// decorations pair with the DD structure, and each such sequence
/// contributes the product of the matching forward-side decorations.
pub fn phi1_endomorphism(pmc: &Pmc, a: &StrandDiagram) -> crate::strands::AlgebraElement {
    let mut out = crate::strands::AlgebraElement::zero();
    for term in phi1_terms(pmc, a) {
        let mut gen = a.left_idem(pmc);
        let mut product: Option<StrandDiagram> = None;
        let mut alive = true;
        for letter in &term.letters {
            if letter.strands().len() != 1 {
                alive = false;
                break;
            }
            let (s, e) = letter.strands()[0];
            let chord = crate::pmc::Chord::new(s, e);
            // The forward-side decoration paired with this letter.
            let Some(dec) = crate::strands::chord_element(pmc, chord, gen) else {
                alive = false;
                break;
            };
            // The letter must be the reversed-side coefficient of the same
            // arrow of the identity DD structure.
            if crate::strands::chord_element_right(pmc, chord, pmc.complement(gen)).as_ref()
                != Some(letter)
            {
                alive = false;
                break;
            }
            gen = dec.right_idem(pmc);
            product = match product.take() {
                None => Some(dec),
                Some(p) => match crate::strands::mul(pmc, &p, &dec) {
                    Some(q) => Some(q),
                    None => {
                        alive = false;
                        break;
                    }
                },
            };
        }
        if alive {
            if let Some(p) = product {
                out.toggle(p);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmc::Pmc;
    use crate::strands::parse_diagram;

    fn d(pmc: &Pmc, s: &str) -> StrandDiagram {
        parse_diagram(pmc, s).unwrap()
    }

    #[test]
    fn worked_three_input_action() {
        let pmc = Pmc::genus1();
        let i = d(&pmc, "h2").left_idem(&pmc);
        let lefts = vec![d(&pmc, "1-3")];
        let rights = vec![d(&pmc, "2-3"), d(&pmc, "1-2")];
        assert_eq!(evaluate_action(&pmc, i, &lefts, &rights), Some(i));
        // The displayed sequence is the unique accepting one, six states.
        let seqs = action_sequences(&pmc, i, &lefts, &rights);
        assert_eq!(seqs.len(), 1);
        assert_eq!(seqs[0].states.len(), 6);
        assert!(!seqs[0].used_special);
        let expected: Vec<BigGenerator> = [
            ("h1", "h2"),
            ("h1", "2-3"),
            ("2-3", "h1"),
            ("2-3", "1-2"),
            ("1-3", "h2"),
            ("h1", "h2"),
        ]
        .iter()
        .map(|(a1, a2)| BigGenerator {
            a1: d(&pmc, a1),
            a2: d(&pmc, a2),
        })
        .collect();
        assert_eq!(seqs[0].states, expected);
    }

    #[test]
    fn reversed_consumption_breaks_the_example() {
        let pmc = Pmc::genus1();
        let i = d(&pmc, "h2").left_idem(&pmc);
        let lefts = vec![d(&pmc, "1-3")];
        let rights = vec![d(&pmc, "2-3"), d(&pmc, "1-2")];
        let parities =
            evaluate_action_parities(&pmc, i, &lefts, &rights, ConsumeOrder::TailFirst);
        assert!(!parities.contains_key(&i));
    }

    #[test]
    fn degenerate_inputs_vanish() {
        let pmc = Pmc::genus1();
        let i = d(&pmc, "h2").left_idem(&pmc);
        assert_eq!(evaluate_action(&pmc, i, &[], &[]), None);
        assert_eq!(evaluate_action(&pmc, i, &[d(&pmc, "1-3")], &[]), None);
        // A single right input with mismatched idempotent.
        let off = pmc.complement(d(&pmc, "2-3").left_idem(&pmc));
        assert_eq!(
            evaluate_action(&pmc, off, &[d(&pmc, "2-3")], &[d(&pmc, "2-3")]),
            None
        );
    }

    #[test]
    fn table_contains_worked_arrow() {
        let pmc = Pmc::genus1();
        let table = enumerate_actions(&pmc, 6);
        let i = d(&pmc, "h2").left_idem(&pmc);
        let arrow = AaArrow {
            source: i,
            lefts: vec![d(&pmc, "1-3")],
            rights: vec![d(&pmc, "2-3"), d(&pmc, "1-2")],
            target: i,
        };
        assert!(table.contains(&arrow));
        // Every arrow has at least one input on each side, and balanced
        // multiplicity.
        for a in &table.arrows {
            assert!(!a.lefts.is_empty() && !a.rights.is_empty());
            let lm: u32 = a.lefts.iter().map(|x| x.multiplicity(&pmc).total()).sum();
            let rm: u32 = a.rights.iter().map(|x| x.multiplicity(&pmc).total()).sum();
            assert_eq!(lm, rm);
        }
    }

    #[test]
    fn phi1_fixes_length_one_chords() {
        let pmc = Pmc::genus1();
        for p in 1..pmc.num_points() {
            let chord = crate::pmc::Chord::new(p, p + 1);
            for i in pmc.all_idempotents() {
                if let Some(dec) = crate::strands::chord_element(&pmc, chord, i) {
                    let terms = phi1_terms(&pmc, &dec);
                    assert_eq!(terms.len(), 1, "length-1 chord has a single sequence");
                    assert_eq!(terms[0].letters.len(), 1);
                    let image = phi1_endomorphism(&pmc, &dec);
                    assert_eq!(image.terms(), &[dec]);
                }
            }
        }
    }

    #[test]
    fn genus2_upper_first_length_two() {
        // Three consecutive unmatched points whose upper interval comes
        // first in the traversal order: a single letter, the whole strand
        // with a horizontal at the middle point's pair (plus the horizontals
        // at pairs away from the window, which ride along in every letter).
        let pmc = Pmc::genus2_split();
        let a = d(&pmc, "4-6");
        let terms = phi1_terms(&pmc, &a);
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].letters, vec![d(&pmc, "4-6,h1,h5")]);
        assert!(!terms[0].used_special);
    }

    #[test]
    fn antipodal_lower_first_length_two() {
        // Lower interval first: two letters, the lower part consumed first,
        // each with a horizontal at the other part's far endpoint pair.
        let pmc = Pmc::genus2_antipodal();
        let a = d(&pmc, "1-3");
        let terms = phi1_terms(&pmc, &a);
        assert_eq!(terms.len(), 1);
        assert_eq!(
            terms[0].letters,
            vec![d(&pmc, "1-2,h3,h4"), d(&pmc, "2-3,h1,h4")]
        );
        assert!(!terms[0].used_special);
    }
}
