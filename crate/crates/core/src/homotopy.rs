//! The contracting homotopy on the large model: classification of
//! non-idempotent generators by key segment and key pair (multiplicity one)
//! or by the lowest doubly-covered segment (higher multiplicity), the
//! homotopy map with its three special arrow families, the exhaustive
//! verification of d∘H + H∘d = I + f∘g, and the induced pairing of
//! generators.

use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::bigmodel::{d_arrows, BigGenerator, BigModel};
use crate::pmc::{Idempotent, Pmc, Point, Segment};
use crate::strands::StrandDiagram;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairKind {
    DoubleHorizontal,
    MovingStrand,
}

/// Case tags for multiplicity-one generators; H-tags are the homotopy cases,
/// d-tags index the cases handled on the differential side.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum M1Tag {
    H1,
    H2,
    H3,
    H4,
    D5,
    D6,
    D7,
    D8,
}

impl M1Tag {
    pub fn is_h_side(self) -> bool {
        matches!(self, M1Tag::H1 | M1Tag::H2 | M1Tag::H3 | M1Tag::H4)
    }
}

#[derive(Clone, Debug)]
pub struct M1Classification {
    pub key_segment: Segment,
    /// Point paired with the key segment's upper endpoint.
    pub q: Point,
    pub key_pair: u8,
    pub seg_side: Side,
    pub pair_side: Side,
    pub pair_kind: PairKind,
    pub tag: M1Tag,
    /// A strand ends at `q` in the first column.
    pub special: bool,
}

#[derive(Clone, Debug)]
pub struct HigherClassification {
    /// The bottom-most segment of multiplicity two.
    pub segment: Segment,
    /// The unique strand starting at the segment's lower point.
    pub i_strand: (Point, Point),
    pub i_side: Side,
    /// The unique strand covering the segment below.
    pub j_strand: (Point, Point),
    pub j_side: Side,
    pub crossing: bool,
    /// Case 1: both left; 2: both right; 3: i left, j right; 4: i right,
    /// j left.
    pub case: u8,
}

impl HigherClassification {
    pub fn is_h_side(&self) -> bool {
        match self.case {
            1 => self.crossing,
            2 => !self.crossing,
            3 => true,
            _ => false,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Classification {
    IdempotentPair,
    MultOne(M1Classification),
    Higher(HigherClassification),
}

impl Classification {
    pub fn is_h_side(&self) -> bool {
        match self {
            Classification::IdempotentPair => false,
            Classification::MultOne(c) => c.tag.is_h_side(),
            Classification::Higher(c) => c.is_h_side(),
        }
    }
}

/// Classifies a generator as idempotent pair, multiplicity one (with its key
/// segment and key pair data), or higher multiplicity.
pub fn classify(pmc: &Pmc, x: &BigGenerator) -> Classification {
    let mult = x.multiplicity(pmc);
    if mult.is_zero() {
        debug_assert!(x.is_idempotent_pair());
        return Classification::IdempotentPair;
    }
    if mult.is_multiplicity_one() {
        let key_segment = *pmc
            .segment_order()
            .iter()
            .find(|s| mult.at(**s) == 1)
            .expect("nonzero multiplicity-one generator has a key segment");
        let p1 = key_segment.upper();
        let q = pmc.partner(p1);
        let key_pair = pmc.pair_of(p1);
        debug_assert!(
            q == pmc.num_points() || mult.at(Segment::new(q)) == 0,
            "multiplicity must vanish above q"
        );
        let seg_side = match (
            x.a1.strand_covering(key_segment),
            x.a2.strand_covering(key_segment),
        ) {
            (Some(_), None) => Side::Left,
            (None, Some(_)) => Side::Right,
            _ => unreachable!("exactly one column covers the key segment"),
        };
        let (pair_side, owner) = if x.a1.left_idem(pmc).contains(key_pair) {
            (Side::Left, &x.a1)
        } else {
            (Side::Right, &x.a2)
        };
        let pair_kind = if owner.horizontals().contains(key_pair) {
            PairKind::DoubleHorizontal
        } else {
            debug_assert!(owner.strand_from(p1).is_some(), "key pair starts at p+1");
            PairKind::MovingStrand
        };
        let tag = match (seg_side, pair_side, pair_kind) {
            (Side::Left, Side::Left, PairKind::DoubleHorizontal) => M1Tag::H1,
            (Side::Left, Side::Right, PairKind::DoubleHorizontal) => M1Tag::D7,
            (Side::Left, Side::Left, PairKind::MovingStrand) => M1Tag::D5,
            (Side::Left, Side::Right, PairKind::MovingStrand) => M1Tag::D8,
            (Side::Right, Side::Left, PairKind::DoubleHorizontal) => M1Tag::H3,
            (Side::Right, Side::Right, PairKind::DoubleHorizontal) => M1Tag::D6,
            (Side::Right, Side::Left, PairKind::MovingStrand) => M1Tag::H4,
            (Side::Right, Side::Right, PairKind::MovingStrand) => M1Tag::H2,
        };
        let special = x.a1.strand_into(q).is_some();
        return Classification::MultOne(M1Classification {
            key_segment,
            q,
            key_pair,
            seg_side,
            pair_side,
            pair_kind,
            tag,
            special,
        });
    }
    // Higher multiplicity: locate the lowest segment covered twice.
    let segment = pmc
        .all_segments()
        .find(|s| mult.at(*s) >= 2)
        .expect("higher-multiplicity generator has a doubled segment");
    debug_assert_eq!(mult.at(segment), 2, "two strands cannot share a start");
    debug_assert!(segment.lower >= 2 && mult.at(Segment::new(segment.lower - 1)) == 1);
    let i = segment.lower;
    let (i_side, i_strand) = match (x.a1.strand_from(i), x.a2.strand_from(i)) {
        (Some(s), None) => (Side::Left, s),
        (None, Some(s)) => (Side::Right, s),
        _ => unreachable!("exactly one strand starts at the doubled point"),
    };
    let below = Segment::new(i - 1);
    let (j_side, j_strand) = match (x.a1.strand_covering(below), x.a2.strand_covering(below)) {
        (Some(s), None) => (Side::Left, s),
        (None, Some(s)) => (Side::Right, s),
        _ => unreachable!("exactly one strand covers the segment below"),
    };
    let crossing = j_strand.1 > i_strand.1;
    let case = match (i_side, j_side) {
        (Side::Left, Side::Left) => 1,
        (Side::Right, Side::Right) => 2,
        (Side::Left, Side::Right) => 3,
        (Side::Right, Side::Left) => 4,
    };
    Classification::Higher(HigherClassification {
        segment,
        i_strand,
        i_side,
        j_strand,
        j_side,
        crossing,
        case,
    })
}

/// The three special arrow families of the homotopy.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpecialFamily {
    /// Key segment and key pair on the right (moving): exchange the strand
    /// ending at q with the strand into p+1.
    Case2,
    /// Key pair on the left as a moving strand, another strand ends at q.
    Case4Other,
    /// Key pair on the left as the strand p+1 -> q itself.
    Case4KeyToQ,
}

pub const ALL_SPECIAL_FAMILIES: [SpecialFamily; 3] = [
    SpecialFamily::Case2,
    SpecialFamily::Case4Other,
    SpecialFamily::Case4KeyToQ,
];

/// The homotopy value on one generator, split into its ordinary term and its
/// special terms.
#[derive(Clone, Debug, Default)]
pub struct HValue {
    pub ordinary: Option<BigGenerator>,
    pub specials: Vec<(SpecialFamily, BigGenerator)>,
}

impl HValue {
    pub fn terms(&self) -> Vec<BigGenerator> {
        let mut out: Vec<BigGenerator> = self.ordinary.iter().cloned().collect();
        out.extend(self.specials.iter().map(|(_, g)| g.clone()));
        out.sort_unstable();
        out
    }

    fn terms_without(&self, disabled: &[SpecialFamily]) -> Vec<BigGenerator> {
        let mut out: Vec<BigGenerator> = self.ordinary.iter().cloned().collect();
        out.extend(
            self.specials
                .iter()
                .filter(|(f, _)| !disabled.contains(f))
                .map(|(_, g)| g.clone()),
        );
        out.sort_unstable();
        out
    }
}

fn remove_strand(d: &StrandDiagram, s: (Point, Point)) -> Vec<(Point, Point)> {
    let mut out: Vec<(Point, Point)> = d.strands().to_vec();
    let k = out
        .iter()
        .position(|&t| t == s)
        .expect("strand to remove is present");
    out.remove(k);
    out
}

fn rebuild(
    pmc: &Pmc,
    strands: Vec<(Point, Point)>,
    horizontals: Idempotent,
    what: &str,
) -> StrandDiagram {
    StrandDiagram::new(pmc, strands, horizontals)
        .unwrap_or_else(|e| panic!("homotopy output invalid ({what}): {e}"))
}

/// Computes the homotopy on one generator.
pub fn h_value(pmc: &Pmc, x: &BigGenerator) -> HValue {
    match classify(pmc, x) {
        Classification::IdempotentPair => HValue::default(),
        Classification::MultOne(c) => h_mult_one(pmc, x, &c),
        Classification::Higher(c) => h_higher(pmc, x, &c),
    }
}

fn h_mult_one(pmc: &Pmc, x: &BigGenerator, c: &M1Classification) -> HValue {
    let p1 = c.key_segment.upper();
    let q = c.q;
    let kp = c.key_pair;
    let mut value = HValue::default();
    match c.tag {
        M1Tag::D5 | M1Tag::D6 | M1Tag::D7 | M1Tag::D8 => {}
        M1Tag::H1 => {
            // Resolve the crossing of the covering strand with the key-pair
            // horizontal at p+1.
            let (a, b) = x.a1.strand_covering(c.key_segment).unwrap();
            debug_assert!(a < p1 && p1 < b);
            let mut strands = remove_strand(&x.a1, (a, b));
            strands.push((a, p1));
            strands.push((p1, b));
            let a1 = rebuild(pmc, strands, x.a1.horizontals().without(kp), "case 1");
            value.ordinary = Some(BigGenerator {
                a1,
                a2: x.a2.clone(),
            });
        }
        M1Tag::H2 => {
            let (i, e) = x.a2.strand_covering(c.key_segment).unwrap();
            debug_assert_eq!(e, p1);
            let (_, j) = x.a2.strand_from(p1).unwrap();
            let mut strands = remove_strand(&x.a2, (i, p1));
            let k = strands.iter().position(|&t| t == (p1, j)).unwrap();
            strands.remove(k);
            strands.push((i, j));
            let a2 = rebuild(pmc, strands, x.a2.horizontals().with(kp), "case 2");
            value.ordinary = Some(BigGenerator {
                a1: x.a1.clone(),
                a2,
            });
            if let Some((s, _)) = x.a1.strand_into(q) {
                // Move the strand ending at q to the right and the strand
                // into p+1 to the left.
                let mut s1 = remove_strand(&x.a1, (s, q));
                s1.push((i, p1));
                let mut s2 = remove_strand(&x.a2, (i, p1));
                s2.push((s, q));
                let a1 = rebuild(pmc, s1, x.a1.horizontals(), "case 2 special");
                let a2 = rebuild(pmc, s2, x.a2.horizontals(), "case 2 special");
                value
                    .specials
                    .push((SpecialFamily::Case2, BigGenerator { a1, a2 }));
            }
        }
        M1Tag::H3 => {
            let (i, j) = x.a2.strand_covering(c.key_segment).unwrap();
            let mut s1: Vec<(Point, Point)> = x.a1.strands().to_vec();
            s1.push((i, p1));
            let a1 = rebuild(pmc, s1, x.a1.horizontals().without(kp), "case 3");
            let a2 = if j > p1 {
                let mut s2 = remove_strand(&x.a2, (i, j));
                s2.push((p1, j));
                rebuild(pmc, s2, x.a2.horizontals(), "case 3")
            } else {
                debug_assert_eq!(j, p1);
                let s2 = remove_strand(&x.a2, (i, p1));
                rebuild(pmc, s2, x.a2.horizontals().with(kp), "case 3")
            };
            value.ordinary = Some(BigGenerator { a1, a2 });
        }
        M1Tag::H4 => {
            let (i, e) = x.a2.strand_covering(c.key_segment).unwrap();
            debug_assert_eq!(e, p1);
            let (_, j) = x.a1.strand_from(p1).unwrap();
            let mut s1 = remove_strand(&x.a1, (p1, j));
            s1.push((i, j));
            let a1 = rebuild(pmc, s1, x.a1.horizontals(), "case 4");
            let s2 = remove_strand(&x.a2, (i, p1));
            let a2 = rebuild(pmc, s2, x.a2.horizontals().with(kp), "case 4");
            value.ordinary = Some(BigGenerator { a1, a2 });
            if let Some((s, _)) = x.a1.strand_into(q) {
                let family = if s == p1 {
                    debug_assert_eq!(j, q);
                    SpecialFamily::Case4KeyToQ
                } else {
                    SpecialFamily::Case4Other
                };
                let mut s1 = remove_strand(&x.a1, (s, q));
                s1.push((i, p1));
                let mut s2 = remove_strand(&x.a2, (i, p1));
                s2.push((s, q));
                let a1 = rebuild(pmc, s1, x.a1.horizontals(), "case 4 special");
                let a2 = rebuild(pmc, s2, x.a2.horizontals(), "case 4 special");
                value.specials.push((family, BigGenerator { a1, a2 }));
            }
        }
    }
    if let Some(o) = &value.ordinary {
        debug_assert_eq!(o.multiplicity(pmc), x.multiplicity(pmc));
    }
    value
}

fn h_higher(pmc: &Pmc, x: &BigGenerator, c: &HigherClassification) -> HValue {
    let mut value = HValue::default();
    let (i, ti) = c.i_strand;
    let (j, tj) = c.j_strand;
    match (c.case, c.crossing) {
        (1, true) => {
            // Uncross the two left strands.
            let mut s1 = remove_strand(&x.a1, (i, ti));
            let k = s1.iter().position(|&t| t == (j, tj)).unwrap();
            s1.remove(k);
            s1.push((j, ti));
            s1.push((i, tj));
            let a1 = rebuild(pmc, s1, x.a1.horizontals(), "higher case 1");
            value.ordinary = Some(BigGenerator {
                a1,
                a2: x.a2.clone(),
            });
        }
        (2, false) => {
            // Cross the two right strands.
            let mut s2 = remove_strand(&x.a2, (i, ti));
            let k = s2.iter().position(|&t| t == (j, tj)).unwrap();
            s2.remove(k);
            s2.push((j, ti));
            s2.push((i, tj));
            let a2 = rebuild(pmc, s2, x.a2.horizontals(), "higher case 2");
            value.ordinary = Some(BigGenerator {
                a1: x.a1.clone(),
                a2,
            });
        }
        (3, _) => {
            // Factor j -> i off the right strand and attach it to the left
            // strand.
            let mut s1 = remove_strand(&x.a1, (i, ti));
            s1.push((j, ti));
            let mut s2 = remove_strand(&x.a2, (j, tj));
            s2.push((i, tj));
            let a1 = rebuild(pmc, s1, x.a1.horizontals(), "higher case 3");
            let a2 = rebuild(pmc, s2, x.a2.horizontals(), "higher case 3");
            value.ordinary = Some(BigGenerator { a1, a2 });
        }
        _ => {}
    }
    if let Some(o) = &value.ordinary {
        debug_assert_eq!(o.multiplicity(pmc), x.multiplicity(pmc));
    }
    value
}

/// The homotopy as an F2 sum of generators.
pub fn h_map(pmc: &Pmc, x: &BigGenerator) -> Vec<BigGenerator> {
    h_value(pmc, x).terms()
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub generator: BigGenerator,
    pub leftover: Vec<BigGenerator>,
}

impl Counterexample {
    pub fn describe(&self, pmc: &Pmc) -> String {
        let mut s = format!(
            "d∘H + H∘d differs from I + f∘g at {}; uncancelled terms:",
            self.generator.to_string_with(pmc)
        );
        for t in &self.leftover {
            s.push_str(&format!("\n  {}", t.to_string_with(pmc)));
        }
        s
    }
}

fn check_generator(
    pmc: &Pmc,
    x: &BigGenerator,
    disabled: &[SpecialFamily],
) -> Option<Counterexample> {
    let mut terms: Vec<BigGenerator> = Vec::new();
    for t in d_arrows(pmc, x) {
        terms.extend(h_value(pmc, &t).terms_without(disabled));
    }
    for t in h_value(pmc, x).terms_without(disabled) {
        terms.extend(d_arrows(pmc, &t));
    }
    if !x.is_idempotent_pair() {
        terms.push(x.clone());
    }
    terms.sort_unstable();
    let mut leftover: Vec<BigGenerator> = Vec::new();
    for t in terms {
        if leftover.last() == Some(&t) {
            leftover.pop();
        } else {
            leftover.push(t);
        }
    }
    if leftover.is_empty() {
        None
    } else {
        Some(Counterexample {
            generator: x.clone(),
            leftover,
        })
    }
}

/// Exhaustively verifies d∘H + H∘d = I + f∘g over the whole model. Returns
/// the number of generators checked.
pub fn verify_homotopy(pmc: &Pmc, model: &BigModel) -> Result<usize, Counterexample> {
    verify_homotopy_with(pmc, model, &[])
}

/// Verification with selected special arrow families removed from H; used by
/// the negative controls, which expect failure.
pub fn verify_homotopy_with(
    pmc: &Pmc,
    model: &BigModel,
    disabled: &[SpecialFamily],
) -> Result<usize, Counterexample> {
    let mut total = 0usize;
    for i in pmc.all_idempotents() {
        let left_block = model.block(pmc.complement(i));
        let right_block = model.block(i);
        total += left_block.len() * right_block.len();
        let failure = left_block.par_iter().find_map_any(|a1| {
            right_block.iter().find_map(|a2| {
                let x = BigGenerator {
                    a1: a1.clone(),
                    a2: a2.clone(),
                };
                check_generator(pmc, &x, disabled)
            })
        });
        if let Some(cex) = failure {
            return Err(cex);
        }
    }
    Ok(total)
}

#[derive(Debug, Clone)]
pub enum PairingError {
    /// An H-side generator whose ordinary arrow is missing from the
    /// differential of its partner.
    MissingDArrow(BigGenerator),
    /// A d-side generator never reached by an ordinary H-arrow.
    Unmatched(BigGenerator),
    /// Two H-side generators share the same partner.
    Collision(BigGenerator),
}

/// Partitions the non-idempotent generators into ordered pairs (x, y) with a
/// d-arrow x -> y and ordinary homotopy y -> x.
pub fn pairing(
    pmc: &Pmc,
    model: &BigModel,
) -> Result<Vec<(BigGenerator, BigGenerator)>, PairingError> {
    let mut by_partner: BTreeMap<BigGenerator, BigGenerator> = BTreeMap::new();
    let mut d_side: Vec<BigGenerator> = Vec::new();
    for i in pmc.all_idempotents() {
        for a1 in model.block(pmc.complement(i)) {
            for a2 in model.block(i) {
                let y = BigGenerator {
                    a1: a1.clone(),
                    a2: a2.clone(),
                };
                let class = classify(pmc, &y);
                if matches!(class, Classification::IdempotentPair) {
                    continue;
                }
                if class.is_h_side() {
                    let x = h_value(pmc, &y)
                        .ordinary
                        .expect("H-side generator has an ordinary arrow");
                    if !d_arrows(pmc, &x).contains(&y) {
                        return Err(PairingError::MissingDArrow(y));
                    }
                    if by_partner.insert(x, y.clone()).is_some() {
                        return Err(PairingError::Collision(y));
                    }
                } else {
                    d_side.push(y);
                }
            }
        }
    }
    let mut out = Vec::new();
    for x in d_side {
        match by_partner.remove(&x) {
            Some(y) => out.push((x, y)),
            None => return Err(PairingError::Unmatched(x)),
        }
    }
    if let Some((_, y)) = by_partner.into_iter().next() {
        return Err(PairingError::Collision(y));
    }
    Ok(out)
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
    fn classify_tags_genus1() {
        let pmc = Pmc::genus1();
        // Key segment (1,2) left-covered, key pair {2,4} right as double
        // horizontal.
        let x = gen(&pmc, "1-4", "h2");
        match classify(&pmc, &x) {
            Classification::MultOne(c) => {
                assert_eq!(c.key_segment, Segment::new(1));
                assert_eq!(c.q, 4);
                assert_eq!(c.tag, M1Tag::D7);
                assert!(c.special, "the strand 1-4 ends at q = 4 on the left");
            }
            other => panic!("unexpected classification {other:?}"),
        }
        // Key pair left as double horizontal, segment right.
        let w = gen(&pmc, "h2", "1-4");
        match classify(&pmc, &w) {
            Classification::MultOne(c) => assert_eq!(c.tag, M1Tag::H3),
            other => panic!("unexpected classification {other:?}"),
        }
        // Higher multiplicity, both strands on the left, crossing.
        let anti = Pmc::genus2_antipodal();
        let z = gen(&anti, "2-7,3-5,h4", "h1");
        match classify(&anti, &z) {
            Classification::Higher(c) => {
                assert_eq!(c.segment, Segment::new(3));
                assert_eq!(c.i_strand, (3, 5));
                assert_eq!(c.j_strand, (2, 7));
                assert!(c.crossing);
                assert_eq!(c.case, 1);
                assert!(c.is_h_side());
            }
            other => panic!("unexpected classification {other:?}"),
        }
    }

    #[test]
    fn specialhomotopy_square_values() {
        // Hy = x + z and Hw = z forced by dx = y + w, dz = w.
        let pmc = Pmc::genus1();
        let x = gen(&pmc, "1-4", "h2");
        let y = gen(&pmc, "2-4", "1-2");
        let z = gen(&pmc, "1-2", "2-4");
        let w = gen(&pmc, "h2", "1-4");
        let hy = h_value(&pmc, &y);
        assert_eq!(hy.ordinary.as_ref(), Some(&x));
        assert_eq!(hy.specials, vec![(SpecialFamily::Case4KeyToQ, z.clone())]);
        let hw = h_value(&pmc, &w);
        assert_eq!(hw.ordinary.as_ref(), Some(&z));
        assert!(hw.specials.is_empty());
        assert!(h_map(&pmc, &x).is_empty());
        assert!(h_map(&pmc, &z).is_empty());
    }

    #[test]
    fn genus2_special_squares() {
        // Case 2 special: dA = C + D, dB = D force H(C) = A + B, H(D) = B.
        let pmc = Pmc::genus2_split();
        let a = gen(&pmc, "4-5,h1", "6-8,h5");
        let b = gen(&pmc, "6-7,h1", "4-5,7-8");
        let c = gen(&pmc, "4-5,h1", "6-7,7-8");
        let d = gen(&pmc, "h1,h5", "4-5,6-8");
        let hc = h_value(&pmc, &c);
        assert_eq!(hc.ordinary.as_ref(), Some(&a));
        assert_eq!(hc.specials, vec![(SpecialFamily::Case2, b.clone())]);
        let hd = h_value(&pmc, &d);
        assert_eq!(hd.ordinary.as_ref(), Some(&b));
        assert!(hd.specials.is_empty());

        // Case 4 first special, same forcing shape.
        let a = gen(&pmc, "4-5,6-8", "h1,h5");
        let b = gen(&pmc, "6-7,7-8", "4-5,h1");
        let c = gen(&pmc, "4-5,7-8", "6-7,h1");
        let d = gen(&pmc, "6-8,h5", "4-5,h1");
        let hc = h_value(&pmc, &c);
        assert_eq!(hc.ordinary.as_ref(), Some(&a));
        assert_eq!(hc.specials, vec![(SpecialFamily::Case4Other, b.clone())]);
        let hd = h_value(&pmc, &d);
        assert_eq!(hd.ordinary.as_ref(), Some(&b));
        assert!(hd.specials.is_empty());
    }

    #[test]
    fn worked_sequence_h_steps() {
        // The two homotopy steps of the worked three-input action.
        let pmc = Pmc::genus1();
        let s2 = gen(&pmc, "h1", "2-3");
        let s3 = gen(&pmc, "2-3", "h1");
        assert_eq!(h_map(&pmc, &s2), vec![s3.clone()]);
        let s4 = gen(&pmc, "2-3", "1-2");
        let s5 = gen(&pmc, "1-3", "h2");
        assert_eq!(h_map(&pmc, &s4), vec![s5]);
    }

    #[test]
    fn homotopy_identity_genus1() {
        let pmc = Pmc::genus1();
        let model = BigModel::build(&pmc);
        let checked = verify_homotopy(&pmc, &model).unwrap();
        assert_eq!(checked, 44);
    }

    #[test]
    fn homotopy_preserves_multiplicity_and_misses_idempotents() {
        let pmc = Pmc::genus1();
        let model = BigModel::build(&pmc);
        for x in model.generators(&pmc) {
            for t in h_map(&pmc, &x) {
                assert_eq!(t.multiplicity(&pmc), x.multiplicity(&pmc));
                assert!(!t.is_idempotent_pair());
            }
        }
    }

    #[test]
    fn pairing_genus1() {
        let pmc = Pmc::genus1();
        let model = BigModel::build(&pmc);
        let pairs = pairing(&pmc, &model).unwrap();
        // Perfect matching of the 40 non-idempotent generators.
        assert_eq!(pairs.len(), 20);
        for (x, y) in &pairs {
            assert!(!classify(&pmc, x).is_h_side());
            assert!(classify(&pmc, y).is_h_side());
        }
    }

    #[test]
    fn dropping_special_family_breaks_identity() {
        let pmc = Pmc::genus1();
        let model = BigModel::build(&pmc);
        let err = verify_homotopy_with(&pmc, &model, &[SpecialFamily::Case4KeyToQ]);
        assert!(err.is_err());
    }
}
