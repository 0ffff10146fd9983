//! The cobar resolution of the strands algebra: tensor words of duals of
//! non-idempotent generators, the dual differential (co-differentiate one
//! letter, or split one letter along a factorization), the one-input duality
//! map into it, and boundary certificates on graded pieces.

use std::collections::BTreeMap;
use std::fmt;

use crate::linalg::{Echelon, F2Matrix};
use crate::pmc::{Idempotent, Pmc};
use crate::strands::{
    diagram_string, factorizations, parse_diagram, rev_diff, AlgebraElement, MultiplicityVector,
    ParseError, StrandDiagram,
};

/// A tensor word of duals of non-idempotent generators, in written order:
/// the right idempotent of each letter equals the left idempotent of the
/// next.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CobarMonomial {
    letters: Vec<StrandDiagram>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CobarError {
    IdempotentLetter,
    NotComposable(usize),
    EmptyWord,
}

impl fmt::Display for CobarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CobarError::IdempotentLetter => write!(f, "letters must be non-idempotent"),
            CobarError::NotComposable(k) => {
                write!(f, "letters {k} and {} do not compose", k + 1)
            }
            CobarError::EmptyWord => write!(f, "empty word"),
        }
    }
}

impl std::error::Error for CobarError {}

impl CobarMonomial {
    pub fn new(pmc: &Pmc, letters: Vec<StrandDiagram>) -> Result<CobarMonomial, CobarError> {
        if letters.is_empty() {
            return Err(CobarError::EmptyWord);
        }
        if letters.iter().any(|l| l.is_idempotent()) {
            return Err(CobarError::IdempotentLetter);
        }
        for k in 0..letters.len() - 1 {
            if letters[k].right_idem(pmc) != letters[k + 1].left_idem(pmc) {
                return Err(CobarError::NotComposable(k));
            }
        }
        Ok(CobarMonomial { letters })
    }

    pub fn letters(&self) -> &[StrandDiagram] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Total multiplicity over all letters.
    pub fn multiplicity(&self, pmc: &Pmc) -> MultiplicityVector {
        let mut m = MultiplicityVector::zero(pmc);
        for l in &self.letters {
            m = m.add(&l.multiplicity(pmc));
        }
        m
    }

    pub fn to_string_with(&self, pmc: &Pmc) -> String {
        self.letters
            .iter()
            .map(|l| format!("({})*", diagram_string(pmc, l)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// An F2 sum of cobar monomials.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CobarElement {
    monos: Vec<CobarMonomial>,
}

impl CobarElement {
    pub fn zero() -> CobarElement {
        CobarElement::default()
    }

    pub fn from_monomials(mut monos: Vec<CobarMonomial>) -> CobarElement {
        monos.sort_unstable();
        let mut out: Vec<CobarMonomial> = Vec::with_capacity(monos.len());
        for m in monos {
            if out.last() == Some(&m) {
                out.pop();
            } else {
                out.push(m);
            }
        }
        CobarElement { monos: out }
    }

    pub fn add(&self, other: &CobarElement) -> CobarElement {
        let mut monos = self.monos.clone();
        monos.extend(other.monos.iter().cloned());
        CobarElement::from_monomials(monos)
    }

    pub fn toggle(&mut self, m: CobarMonomial) {
        match self.monos.binary_search(&m) {
            Ok(k) => {
                self.monos.remove(k);
            }
            Err(k) => self.monos.insert(k, m),
        }
    }

    pub fn monomials(&self) -> &[CobarMonomial] {
        &self.monos
    }

    pub fn is_zero(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn to_string_with(&self, pmc: &Pmc) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.monos
            .iter()
            .map(|m| m.to_string_with(pmc))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Idempotents map to themselves, every other generator to zero.
pub fn augmentation(d: &StrandDiagram) -> Option<Idempotent> {
    if d.is_idempotent() {
        Some(d.horizontals())
    } else {
        None
    }
}

/// The cobar differential of one monomial: replace a letter by anything it
/// is a differential term of, or split a letter along a two-sided
/// factorization into non-idempotent parts.
pub fn cobar_diff(pmc: &Pmc, m: &CobarMonomial) -> CobarElement {
    let mut out = CobarElement::zero();
    for k in 0..m.letters.len() {
        for e in rev_diff(pmc, &m.letters[k]) {
            let mut letters = m.letters.clone();
            letters[k] = e;
            out.toggle(CobarMonomial { letters });
        }
        for (b, bp) in factorizations(pmc, &m.letters[k]) {
            if b.is_idempotent() || bp.is_idempotent() {
                continue;
            }
            let mut letters = Vec::with_capacity(m.letters.len() + 1);
            letters.extend_from_slice(&m.letters[..k]);
            letters.push(b);
            letters.push(bp);
            letters.extend_from_slice(&m.letters[k + 1..]);
            out.toggle(CobarMonomial { letters });
        }
    }
    out
}

pub fn cobar_diff_element(pmc: &Pmc, x: &CobarElement) -> CobarElement {
    let mut out = CobarElement::zero();
    for m in x.monomials() {
        out = out.add(&cobar_diff(pmc, m));
    }
    out
}

/// The one-input component of the duality map: each alternating sequence
/// contributes the reversed word of duals of its factored letters.
pub fn phi1(pmc: &Pmc, a: &StrandDiagram) -> CobarElement {
    let mut out = CobarElement::zero();
    for term in crate::perturbation::phi1_terms(pmc, a) {
        let mut letters = term.letters;
        letters.reverse();
        let mono = CobarMonomial::new(pmc, letters)
            .expect("factored sequence letters compose as written");
        out.toggle(mono);
    }
    out
}

/// Linear extension of [`phi1`] to elements.
pub fn phi1_element(pmc: &Pmc, x: &AlgebraElement) -> CobarElement {
    let mut out = CobarElement::zero();
    for t in x.terms() {
        out = out.add(&phi1(pmc, t));
    }
    out
}

/// Non-idempotent diagrams whose multiplicity vector is bounded by `cap`,
/// optionally with a prescribed left idempotent.
fn letters_within(
    pmc: &Pmc,
    cap: &MultiplicityVector,
    left: Option<Idempotent>,
) -> Vec<StrandDiagram> {
    // Strands must stay inside the support of the cap.
    let mut candidates: Vec<(crate::pmc::Point, crate::pmc::Point)> = Vec::new();
    for s in 1..pmc.num_points() {
        for e in (s + 1)..=pmc.num_points() {
            if (s..e).all(|p| cap.0[p as usize - 1] > 0) {
                candidates.push((s, e));
            }
        }
    }
    let mut out = Vec::new();
    let mut chosen: Vec<(crate::pmc::Point, crate::pmc::Point)> = Vec::new();
    fn rec(
        pmc: &Pmc,
        candidates: &[(crate::pmc::Point, crate::pmc::Point)],
        from: usize,
        cap: &MultiplicityVector,
        left: Option<Idempotent>,
        chosen: &mut Vec<(crate::pmc::Point, crate::pmc::Point)>,
        out: &mut Vec<StrandDiagram>,
    ) {
        if !chosen.is_empty() {
            if let Ok(bare) = StrandDiagram::new(pmc, chosen.clone(), Idempotent::EMPTY) {
                if within(pmc, &bare, cap) {
                    let used = bare.left_idem(pmc).union(bare.right_idem(pmc));
                    let free: Vec<u8> = pmc
                        .full_idempotent()
                        .iter()
                        .filter(|&p| !used.contains(p))
                        .collect();
                    for bits in 0u32..(1 << free.len()) {
                        let mut mask = Idempotent::EMPTY;
                        for (k, &p) in free.iter().enumerate() {
                            if bits & (1 << k) != 0 {
                                mask = mask.with(p);
                            }
                        }
                        let d = StrandDiagram::new(pmc, chosen.clone(), mask).unwrap();
                        if left.map_or(true, |l| d.left_idem(pmc) == l) {
                            out.push(d);
                        }
                    }
                }
            }
        }
        for k in from..candidates.len() {
            chosen.push(candidates[k]);
            rec(pmc, candidates, k + 1, cap, left, chosen, out);
            chosen.pop();
        }
    }
    fn within(pmc: &Pmc, d: &StrandDiagram, cap: &MultiplicityVector) -> bool {
        let m = d.multiplicity(pmc);
        m.0.iter().zip(&cap.0).all(|(a, b)| a <= b)
    }
    rec(pmc, &candidates, 0, cap, left, &mut chosen, &mut out);
    out.sort_unstable();
    out
}

/// Every composable word with the given total multiplicity, in a
/// deterministic order. Finite because each letter has nonzero multiplicity.
pub fn graded_piece(pmc: &Pmc, mult: &MultiplicityVector) -> Vec<CobarMonomial> {
    let mut out = Vec::new();
    if mult.is_zero() {
        return out;
    }
    fn rec(
        pmc: &Pmc,
        remaining: &MultiplicityVector,
        word: &mut Vec<StrandDiagram>,
        out: &mut Vec<CobarMonomial>,
    ) {
        if remaining.is_zero() {
            out.push(CobarMonomial {
                letters: word.clone(),
            });
            return;
        }
        let need = word.last().map(|l| l.right_idem(pmc));
        for next in letters_within(pmc, remaining, need) {
            let m = next.multiplicity(pmc);
            let left: Vec<u8> = remaining
                .0
                .iter()
                .zip(&m.0)
                .map(|(a, b)| a - b)
                .collect();
            word.push(next);
            rec(pmc, &MultiplicityVector(left), word, out);
            word.pop();
        }
    }
    let mut word = Vec::new();
    rec(pmc, mult, &mut word, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Debug, Clone)]
pub enum BoundaryError {
    /// Monomials do not share one multiplicity vector.
    NotHomogeneous,
    /// The element lies outside the image; the rank of the differential on
    /// the graded piece is reported.
    NotBoundary { piece_dim: usize, rank: usize },
    /// The zero element needs no certificate.
    Zero,
}

impl fmt::Display for BoundaryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryError::NotHomogeneous => {
                write!(f, "element is not homogeneous in total multiplicity")
            }
            BoundaryError::NotBoundary { piece_dim, rank } => write!(
                f,
                "not a boundary: differential on the {piece_dim}-dimensional graded piece has rank {rank}"
            ),
            BoundaryError::Zero => write!(f, "zero element"),
        }
    }
}

impl std::error::Error for BoundaryError {}

/// Solves d(y) = x on the graded piece of x; returns a primitive y, whose
/// differential is verified to reproduce x exactly.
pub fn is_boundary(pmc: &Pmc, x: &CobarElement) -> Result<CobarElement, BoundaryError> {
    let mut monos = x.monomials().iter();
    let Some(first) = monos.next() else {
        return Err(BoundaryError::Zero);
    };
    let mult = first.multiplicity(pmc);
    for m in monos {
        if m.multiplicity(pmc) != mult {
            return Err(BoundaryError::NotHomogeneous);
        }
    }
    let piece = graded_piece(pmc, &mult);
    let index: BTreeMap<&CobarMonomial, usize> =
        piece.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let n = piece.len();
    let mut mat = F2Matrix::zero(n, n);
    for (r, m) in piece.iter().enumerate() {
        for t in cobar_diff(pmc, m).monomials() {
            let c = *index
                .get(t)
                .expect("cobar differential leaves its graded piece");
            mat.flip(r, c);
        }
    }
    let ech = Echelon::reduce(mat);
    let mut target = vec![false; n];
    for m in x.monomials() {
        let c = *index.get(m).ok_or(BoundaryError::NotHomogeneous)?;
        target[c] = true;
    }
    match ech.express(&target) {
        Some(rows) => {
            let primitive =
                CobarElement::from_monomials(rows.into_iter().map(|r| piece[r].clone()).collect());
            debug_assert_eq!(&cobar_diff_element(pmc, &primitive), x);
            Ok(primitive)
        }
        None => Err(BoundaryError::NotBoundary {
            piece_dim: n,
            rank: ech.rank(),
        }),
    }
}

// --- text format ------------------------------------------------------------

/// Parses a space-joined word of `(<diagram>)*` letters.
pub fn parse_monomial(pmc: &Pmc, text: &str) -> Result<CobarMonomial, ParseError> {
    let mut letters = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(ParseError {
                message: format!("expected `(` at `{rest}`"),
                offset: text.len() - rest.len(),
            });
        }
        let close = rest.find(")*").ok_or_else(|| ParseError {
            message: "unterminated letter; expected `)*`".to_string(),
            offset: text.len() - rest.len(),
        })?;
        letters.push(parse_diagram(pmc, &rest[1..close])?);
        rest = rest[close + 2..].trim_start();
    }
    CobarMonomial::new(pmc, letters).map_err(|e| ParseError {
        message: e.to_string(),
        offset: 0,
    })
}

/// Parses an element: `0`, or monomials joined by `+` or newlines.
pub fn parse_cobar_element(pmc: &Pmc, text: &str) -> Result<CobarElement, ParseError> {
    let trimmed = text.trim();
    if trimmed == "0" {
        return Ok(CobarElement::zero());
    }
    let mut monos = Vec::new();
    for part in trimmed.split(['+', '\n']) {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        monos.push(parse_monomial(pmc, part)?);
    }
    Ok(CobarElement::from_monomials(monos))
}
