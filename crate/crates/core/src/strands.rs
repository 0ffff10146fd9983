//! The strands dg-algebra of a pointed matched circle over F2.
//!
//! Basis generators are diagrams of upward moving strands plus paired
//! (double) horizontal strands. The differential and product are defined by
//! expanding every double horizontal into the two single-horizontal
//! placements, computing in the big strands algebra on 4k points, and
//! regrouping the result; the big algebra kills any operation that changes
//! the crossing count by the wrong amount (the double-crossing rule).

use std::collections::BTreeMap;
use std::fmt;

use crate::pmc::{Chord, Idempotent, Pmc, Point, Segment};

/// A diagram in the big strands algebra: strands `(s, e)` with `s <= e`,
/// horizontals encoded as `s == e`. Starts are distinct, ends are distinct.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BigDiagram {
    pub strands: Vec<(Point, Point)>,
}

impl BigDiagram {
    fn new(mut strands: Vec<(Point, Point)>) -> BigDiagram {
        strands.sort_unstable();
        BigDiagram { strands }
    }

    fn inversions(&self) -> usize {
        let s = &self.strands;
        let mut count = 0;
        for i in 0..s.len() {
            for j in (i + 1)..s.len() {
                // Starts are strictly increasing after sorting.
                if s[i].1 > s[j].1 {
                    count += 1;
                }
            }
        }
        count
    }

    /// Terms of the big-algebra differential: resolve one crossing, dropping
    /// resolutions that reduce the crossing count by more than one.
    pub fn diff(&self) -> Vec<BigDiagram> {
        let inv = self.inversions();
        let s = &self.strands;
        let mut out = Vec::new();
        for i in 0..s.len() {
            for j in (i + 1)..s.len() {
                if s[i].1 > s[j].1 {
                    let mut next = s.clone();
                    next[i] = (s[i].0, s[j].1);
                    next[j] = (s[j].0, s[i].1);
                    let resolved = BigDiagram::new(next);
                    if resolved.inversions() == inv - 1 {
                        out.push(resolved);
                    }
                }
            }
        }
        out
    }

    /// Big-algebra product: concatenation when the end set of `self` equals
    /// the start set of `other`; zero when strands cross twice.
    pub fn mul(&self, other: &BigDiagram) -> Option<BigDiagram> {
        if self.strands.len() != other.strands.len() {
            return None;
        }
        let mut composed = Vec::with_capacity(self.strands.len());
        for &(s, e) in &self.strands {
            match other.strands.binary_search_by_key(&e, |&(s2, _)| s2) {
                Ok(k) => composed.push((s, other.strands[k].1)),
                Err(_) => return None,
            }
        }
        let product = BigDiagram::new(composed);
        if product.inversions() == self.inversions() + other.inversions() {
            Some(product)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagramError {
    PointOutOfRange(Point),
    NotUpward(Point, Point),
    DuplicateStart(Point),
    DuplicateEnd(Point),
    StartPairClash(u8),
    EndPairClash(u8),
    HorizontalClash(u8),
    UnknownPair(Point),
}

impl fmt::Display for DiagramError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramError::PointOutOfRange(p) => write!(f, "point {p} out of range"),
            DiagramError::NotUpward(s, e) => write!(f, "strand {s}-{e} does not move upward"),
            DiagramError::DuplicateStart(p) => write!(f, "two strands start at {p}"),
            DiagramError::DuplicateEnd(p) => write!(f, "two strands end at {p}"),
            DiagramError::StartPairClash(i) => write!(f, "two strands start on pair #{i}"),
            DiagramError::EndPairClash(i) => write!(f, "two strands end on pair #{i}"),
            DiagramError::HorizontalClash(i) => {
                write!(f, "horizontal pair #{i} collides with a strand endpoint")
            }
            DiagramError::UnknownPair(p) => write!(f, "{p} is not the smaller point of a pair"),
        }
    }
}

impl std::error::Error for DiagramError {}

/// A basis generator of the strands algebra: moving strands (sorted by start
/// point) plus a set of double-horizontal pairs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StrandDiagram {
    strands: Vec<(Point, Point)>,
    horizontals: Idempotent,
}

impl StrandDiagram {
    pub fn new(
        pmc: &Pmc,
        mut strands: Vec<(Point, Point)>,
        horizontals: Idempotent,
    ) -> Result<StrandDiagram, DiagramError> {
        strands.sort_unstable();
        let mut start_pairs = Idempotent::EMPTY;
        let mut end_pairs = Idempotent::EMPTY;
        let mut seen_end: u64 = 0;
        for k in 0..strands.len() {
            let (s, e) = strands[k];
            if s == 0 || e > pmc.num_points() {
                return Err(DiagramError::PointOutOfRange(s.max(e)));
            }
            if s >= e {
                return Err(DiagramError::NotUpward(s, e));
            }
            if k > 0 && strands[k - 1].0 == s {
                return Err(DiagramError::DuplicateStart(s));
            }
            if seen_end & (1u64 << e) != 0 {
                return Err(DiagramError::DuplicateEnd(e));
            }
            seen_end |= 1u64 << e;
            let sp = pmc.pair_of(s);
            if start_pairs.contains(sp) {
                return Err(DiagramError::StartPairClash(sp));
            }
            start_pairs = start_pairs.with(sp);
            let ep = pmc.pair_of(e);
            if end_pairs.contains(ep) {
                return Err(DiagramError::EndPairClash(ep));
            }
            end_pairs = end_pairs.with(ep);
        }
        if horizontals.intersects(start_pairs) || horizontals.intersects(end_pairs) {
            let clash = horizontals
                .iter()
                .find(|&i| start_pairs.contains(i) || end_pairs.contains(i))
                .unwrap();
            return Err(DiagramError::HorizontalClash(clash));
        }
        Ok(StrandDiagram {
            strands,
            horizontals,
        })
    }

    /// The idempotent diagram occupying exactly the pairs of `idem`.
    pub fn idempotent(idem: Idempotent) -> StrandDiagram {
        StrandDiagram {
            strands: Vec::new(),
            horizontals: idem,
        }
    }

    pub fn strands(&self) -> &[(Point, Point)] {
        &self.strands
    }

    pub fn horizontals(&self) -> Idempotent {
        self.horizontals
    }

    pub fn is_idempotent(&self) -> bool {
        self.strands.is_empty()
    }

    pub fn left_idem(&self, pmc: &Pmc) -> Idempotent {
        let mut idem = self.horizontals;
        for &(s, _) in &self.strands {
            idem = idem.with(pmc.pair_of(s));
        }
        idem
    }

    pub fn right_idem(&self, pmc: &Pmc) -> Idempotent {
        let mut idem = self.horizontals;
        for &(_, e) in &self.strands {
            idem = idem.with(pmc.pair_of(e));
        }
        idem
    }

    /// The strand starting at `pt`, if any.
    pub fn strand_from(&self, pt: Point) -> Option<(Point, Point)> {
        self.strands
            .binary_search_by_key(&pt, |&(s, _)| s)
            .ok()
            .map(|k| self.strands[k])
    }

    /// The strand ending at `pt`, if any.
    pub fn strand_into(&self, pt: Point) -> Option<(Point, Point)> {
        self.strands.iter().copied().find(|&(_, e)| e == pt)
    }

    /// The strand covering segment (p, p+1), if any.
    pub fn strand_covering(&self, seg: Segment) -> Option<(Point, Point)> {
        self.strands
            .iter()
            .copied()
            .find(|&(s, e)| s <= seg.lower && seg.upper() <= e)
    }

    /// Per-segment covering counts of the moving strands.
    pub fn multiplicity(&self, pmc: &Pmc) -> MultiplicityVector {
        let mut v = MultiplicityVector::zero(pmc);
        for &(s, e) in &self.strands {
            for p in s..e {
                v.0[p as usize - 1] += 1;
            }
        }
        v
    }

    /// The 2^h single-horizontal placements of this diagram.
    pub fn expand(&self, pmc: &Pmc) -> Vec<BigDiagram> {
        let pairs: Vec<u8> = self.horizontals.iter().collect();
        let mut out = Vec::with_capacity(1 << pairs.len());
        for choice in 0u32..(1 << pairs.len()) {
            let mut strands = self.strands.clone();
            for (k, &pair) in pairs.iter().enumerate() {
                let name = pmc.pair_name(pair);
                let pt = if choice & (1 << k) == 0 {
                    name
                } else {
                    pmc.partner(name)
                };
                strands.push((pt, pt));
            }
            out.push(BigDiagram::new(strands));
        }
        out
    }
}

/// Non-negative covering counts per segment, one entry per (p, p+1).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MultiplicityVector(pub Vec<u8>);

impl MultiplicityVector {
    pub fn zero(pmc: &Pmc) -> MultiplicityVector {
        MultiplicityVector(vec![0; pmc.num_segments()])
    }

    pub fn at(&self, seg: Segment) -> u8 {
        self.0[seg.lower as usize - 1]
    }

    pub fn add(&self, other: &MultiplicityVector) -> MultiplicityVector {
        MultiplicityVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&x| x as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// True when every entry is at most one.
    pub fn is_multiplicity_one(&self) -> bool {
        self.0.iter().all(|&x| x <= 1)
    }
}

impl fmt::Display for MultiplicityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// An F2 linear combination of strand diagrams, stored as a sorted set.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AlgebraElement {
    terms: Vec<StrandDiagram>,
}

impl AlgebraElement {
    pub fn zero() -> AlgebraElement {
        AlgebraElement { terms: Vec::new() }
    }

    pub fn single(d: StrandDiagram) -> AlgebraElement {
        AlgebraElement { terms: vec![d] }
    }

    /// Builds an element from terms, cancelling duplicates mod 2.
    pub fn from_terms(mut terms: Vec<StrandDiagram>) -> AlgebraElement {
        terms.sort_unstable();
        let mut out: Vec<StrandDiagram> = Vec::with_capacity(terms.len());
        for t in terms {
            if out.last() == Some(&t) {
                out.pop();
            } else {
                out.push(t);
            }
        }
        AlgebraElement { terms: out }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        AlgebraElement::from_terms(terms)
    }

    pub fn toggle(&mut self, d: StrandDiagram) {
        match self.terms.binary_search(&d) {
            Ok(k) => {
                self.terms.remove(k);
            }
            Err(k) => self.terms.insert(k, d),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[StrandDiagram] {
        &self.terms
    }

    pub fn contains(&self, d: &StrandDiagram) -> bool {
        self.terms.binary_search(d).is_ok()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl FromIterator<StrandDiagram> for AlgebraElement {
    fn from_iter<T: IntoIterator<Item = StrandDiagram>>(iter: T) -> AlgebraElement {
        AlgebraElement::from_terms(iter.into_iter().collect())
    }
}

/// Regroups an F2 sum of big diagrams into strand-algebra basis diagrams.
///
/// Every big term must belong to the full expansion of exactly one basis
/// diagram; the algebra is closed under diff and mul, so failure here is an
/// internal invariant violation, not an input error.
fn regroup(pmc: &Pmc, parity: BTreeMap<BigDiagram, bool>) -> AlgebraElement {
    let mut live: BTreeMap<BigDiagram, bool> =
        parity.into_iter().filter(|(_, odd)| *odd).collect();
    let mut out = Vec::new();
    while let Some(big) = live.keys().next().cloned() {
        let mut moving = Vec::new();
        let mut mask = Idempotent::EMPTY;
        for &(s, e) in &big.strands {
            if s == e {
                let pair = pmc.pair_of(s);
                assert!(!mask.contains(pair), "regroup: double horizontal on one pair");
                mask = mask.with(pair);
            } else {
                moving.push((s, e));
            }
        }
        let candidate = StrandDiagram::new(pmc, moving, mask)
            .expect("regroup: big term is not part of any valid diagram expansion");
        for expansion in candidate.expand(pmc) {
            match live.remove(&expansion) {
                Some(true) => {}
                _ => panic!("regroup: incomplete expansion of {candidate:?}"),
            }
        }
        out.push(candidate);
    }
    AlgebraElement::from_terms(out)
}

/// Differential of a basis diagram: resolve one crossing in every expansion
/// and regroup.
pub fn diff(pmc: &Pmc, d: &StrandDiagram) -> AlgebraElement {
    let mut parity: BTreeMap<BigDiagram, bool> = BTreeMap::new();
    for expansion in d.expand(pmc) {
        for term in expansion.diff() {
            let e = parity.entry(term).or_insert(false);
            *e = !*e;
        }
    }
    regroup(pmc, parity)
}

/// Linear extension of [`diff`] to elements.
pub fn diff_element(pmc: &Pmc, x: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for t in x.terms() {
        out = out.add(&diff(pmc, t));
    }
    out
}

/// Product of two basis diagrams; the strands algebra product of two
/// generators is either zero or a single generator.
pub fn mul(pmc: &Pmc, a: &StrandDiagram, b: &StrandDiagram) -> Option<StrandDiagram> {
    if a.right_idem(pmc) != b.left_idem(pmc) {
        return None;
    }
    let mut parity: BTreeMap<BigDiagram, bool> = BTreeMap::new();
    let b_expansions = b.expand(pmc);
    for ea in a.expand(pmc) {
        for eb in &b_expansions {
            if let Some(product) = ea.mul(eb) {
                let e = parity.entry(product).or_insert(false);
                *e = !*e;
            }
        }
    }
    let element = regroup(pmc, parity);
    match element.len() {
        0 => None,
        1 => Some(element.terms()[0].clone()),
        n => panic!("product of basis diagrams has {n} terms"),
    }
}

/// All ways of writing `d = y * c`, including the trivial factorizations with
/// an idempotent on either side. Deterministic order.
pub fn factorizations(pmc: &Pmc, d: &StrandDiagram) -> Vec<(StrandDiagram, StrandDiagram)> {
    let strands = d.strands();
    let n = strands.len();
    let mut splits: Vec<Point> = strands.iter().map(|&(s, _)| s).collect();
    let mut out = Vec::new();
    loop {
        // Build the candidate pair for the current split tuple.
        let mut y_strands = Vec::new();
        let mut c_strands = Vec::new();
        let mut y_mask = d.horizontals();
        let mut c_mask = d.horizontals();
        let mut valid = true;
        for (k, &(s, e)) in strands.iter().enumerate() {
            let m = splits[k];
            if m > s {
                y_strands.push((s, m));
            } else {
                let pair = pmc.pair_of(s);
                if y_mask.contains(pair) {
                    valid = false;
                    break;
                }
                y_mask = y_mask.with(pair);
            }
            if m < e {
                c_strands.push((m, e));
            } else {
                let pair = pmc.pair_of(e);
                if c_mask.contains(pair) {
                    valid = false;
                    break;
                }
                c_mask = c_mask.with(pair);
            }
        }
        if valid {
            if let (Ok(y), Ok(c)) = (
                StrandDiagram::new(pmc, y_strands, y_mask),
                StrandDiagram::new(pmc, c_strands, c_mask),
            ) {
                // The split shape is necessary but not sufficient; the
                // product check enforces the crossing-count condition.
                if mul(pmc, &y, &c).as_ref() == Some(d) {
                    out.push((y, c));
                }
            }
        }
        // Advance the split tuple lexicographically.
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if splits[k] < strands[k].1 {
                splits[k] += 1;
                for j in (k + 1)..n {
                    splits[j] = strands[j].0;
                }
                break;
            }
        }
    }
}

/// All basis diagrams `e` with `d` a term of `diff(e)`.
///
/// Candidates uncross a pair of strands of `d`, or merge two chained strands
/// into one strand plus a double horizontal at the chaining point's pair;
/// each candidate is confirmed against [`diff`].
pub fn rev_diff(pmc: &Pmc, d: &StrandDiagram) -> Vec<StrandDiagram> {
    let strands = d.strands();
    let mut out = Vec::new();
    for i in 0..strands.len() {
        for j in 0..strands.len() {
            if i == j {
                continue;
            }
            let (s1, e1) = strands[i];
            let (s2, e2) = strands[j];
            if s1 < s2 && e1 < e2 && e1 > s2 {
                // Cross the two strands back.
                let mut next: Vec<(Point, Point)> = strands.to_vec();
                next[i] = (s1, e2);
                next[j] = (s2, e1);
                if let Ok(e) = StrandDiagram::new(pmc, next, d.horizontals()) {
                    if diff(pmc, &e).contains(d) {
                        out.push(e);
                    }
                }
            } else if e1 == s2 {
                // Merge the chain and restore a double horizontal at the
                // chaining point's pair.
                let pair = pmc.pair_of(e1);
                let mut next: Vec<(Point, Point)> = Vec::new();
                for (k, &st) in strands.iter().enumerate() {
                    if k == i {
                        next.push((s1, e2));
                    } else if k != j {
                        next.push(st);
                    }
                }
                if let Ok(e) = StrandDiagram::new(pmc, next, d.horizontals().with(pair)) {
                    if diff(pmc, &e).contains(d) {
                        out.push(e);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// The unique horizontal decoration of a chord whose left idempotent is
/// exactly `idem`, when it exists; equals `idem * a(chord)`.
pub fn chord_element(pmc: &Pmc, chord: Chord, idem: Idempotent) -> Option<StrandDiagram> {
    let start_pair = pmc.pair_of(chord.start);
    if !idem.contains(start_pair) {
        return None;
    }
    StrandDiagram::new(
        pmc,
        vec![(chord.start, chord.end)],
        idem.without(start_pair),
    )
    .ok()
}

/// The unique horizontal decoration of a chord whose right idempotent is
/// exactly `idem`, when it exists.
pub fn chord_element_right(pmc: &Pmc, chord: Chord, idem: Idempotent) -> Option<StrandDiagram> {
    let end_pair = pmc.pair_of(chord.end);
    if !idem.contains(end_pair) {
        return None;
    }
    StrandDiagram::new(
        pmc,
        vec![(chord.start, chord.end)],
        idem.without(end_pair),
    )
    .ok()
}

/// Enumerates every basis diagram, in the derived ordering on diagrams.
pub fn enumerate_basis(pmc: &Pmc) -> Vec<StrandDiagram> {
    let n = pmc.num_points();
    let mut all_strands: Vec<(Point, Point)> = Vec::new();
    for s in 1..n {
        for e in (s + 1)..=n {
            all_strands.push((s, e));
        }
    }
    let mut out = Vec::new();
    let mut chosen: Vec<(Point, Point)> = Vec::new();
    fn extend(
        pmc: &Pmc,
        all: &[(Point, Point)],
        from: usize,
        chosen: &mut Vec<(Point, Point)>,
        out: &mut Vec<StrandDiagram>,
    ) {
        // Emit the current strand set with every compatible horizontal mask.
        let mut used = Idempotent::EMPTY;
        let mut ok = true;
        let mut starts = Idempotent::EMPTY;
        let mut ends = Idempotent::EMPTY;
        let mut end_pts: u64 = 0;
        for &(s, e) in chosen.iter() {
            let sp = pmc.pair_of(s);
            let ep = pmc.pair_of(e);
            if starts.contains(sp) || ends.contains(ep) || end_pts & (1u64 << e) != 0 {
                ok = false;
                break;
            }
            starts = starts.with(sp);
            ends = ends.with(ep);
            end_pts |= 1u64 << e;
        }
        if !ok {
            return;
        }
        used = used.union(starts).union(ends);
        let free: Vec<u8> = pmc
            .full_idempotent()
            .iter()
            .filter(|&p| !used.contains(p))
            .collect();
        for mask_bits in 0u32..(1 << free.len()) {
            let mut mask = Idempotent::EMPTY;
            for (k, &p) in free.iter().enumerate() {
                if mask_bits & (1 << k) != 0 {
                    mask = mask.with(p);
                }
            }
            out.push(
                StrandDiagram::new(pmc, chosen.clone(), mask)
                    .expect("enumerated diagram must be valid"),
            );
        }
        for k in from..all.len() {
            chosen.push(all[k]);
            extend(pmc, all, k + 1, chosen, out);
            chosen.pop();
        }
    }
    extend(pmc, &all_strands, 0, &mut chosen, &mut out);
    out.sort_unstable();
    out
}

// --- text format ------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub offset: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.offset + 1, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Canonical literal of an idempotent: its pair names as `h<p>` items, or
/// `e` for the empty idempotent.
pub fn idempotent_string(pmc: &Pmc, idem: Idempotent) -> String {
    diagram_string(pmc, &StrandDiagram::idempotent(idem))
}

/// Canonical diagram literal: strands `s-e` sorted by start, then `h<p>`
/// items sorted by pair name, comma-joined; the empty diagram is `e`.
pub fn diagram_string(pmc: &Pmc, d: &StrandDiagram) -> String {
    let mut items: Vec<String> = d
        .strands()
        .iter()
        .map(|&(s, e)| format!("{s}-{e}"))
        .collect();
    for pair in d.horizontals().iter() {
        items.push(format!("h{}", pmc.pair_name(pair)));
    }
    if items.is_empty() {
        "e".to_string()
    } else {
        items.join(",")
    }
}

/// Canonical element literal: `0`, or `+`-joined diagram literals sorted
/// lexicographically.
pub fn element_string(pmc: &Pmc, x: &AlgebraElement) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let mut strings: Vec<String> = x.terms().iter().map(|d| diagram_string(pmc, d)).collect();
    strings.sort_unstable();
    strings.join("+")
}

pub fn parse_diagram(pmc: &Pmc, text: &str) -> Result<StrandDiagram, ParseError> {
    let trimmed = text.trim();
    if trimmed == "e" {
        return Ok(StrandDiagram::idempotent(Idempotent::EMPTY));
    }
    let mut strands = Vec::new();
    let mut mask = Idempotent::EMPTY;
    let mut offset = 0usize;
    for item in trimmed.split(',') {
        let err = |message: String| ParseError { message, offset };
        let item = item.trim();
        if let Some(rest) = item.strip_prefix('h') {
            let name: Point = rest
                .parse()
                .map_err(|_| err(format!("bad horizontal item `{item}`")))?;
            let pair = pmc
                .pair_by_name(name)
                .ok_or_else(|| err(format!("{name} is not the smaller point of a pair")))?;
            if mask.contains(pair) {
                return Err(err(format!("duplicate horizontal `h{name}`")));
            }
            mask = mask.with(pair);
        } else {
            let (s, e) = item
                .split_once('-')
                .ok_or_else(|| err(format!("bad item `{item}`")))?;
            let s: Point = s.parse().map_err(|_| err(format!("bad start in `{item}`")))?;
            let e: Point = e.parse().map_err(|_| err(format!("bad end in `{item}`")))?;
            strands.push((s, e));
        }
        offset += item.len() + 1;
    }
    StrandDiagram::new(pmc, strands, mask).map_err(|e| ParseError {
        message: e.to_string(),
        offset: 0,
    })
}

pub fn parse_element(pmc: &Pmc, text: &str) -> Result<AlgebraElement, ParseError> {
    let trimmed = text.trim();
    if trimmed == "0" {
        return Ok(AlgebraElement::zero());
    }
    let mut terms = Vec::new();
    for part in trimmed.split('+') {
        terms.push(parse_diagram(pmc, part)?);
    }
    Ok(AlgebraElement::from_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(pmc: &Pmc, s: &str) -> StrandDiagram {
        parse_diagram(pmc, s).unwrap()
    }

    #[test]
    fn expand_counts() {
        let pmc = Pmc::genus1();
        assert_eq!(d(&pmc, "1-2").expand(&pmc).len(), 1);
        assert_eq!(d(&pmc, "1-3,h2").expand(&pmc).len(), 2);
        assert_eq!(d(&pmc, "h1,h2").expand(&pmc).len(), 4);
    }

    #[test]
    fn diff_examples() {
        let g1 = Pmc::genus1();
        // Single crossing resolution.
        assert_eq!(
            element_string(&g1, &diff(&g1, &d(&g1, "1-4,2-3"))),
            "1-3,2-4"
        );
        // Idempotents have no crossings.
        assert!(diff(&g1, &d(&g1, "h1,h2")).is_zero());
        // Strand-horizontal resolution breaking the pair.
        let g2 = Pmc::genus2_split();
        assert_eq!(
            element_string(&g2, &diff(&g2, &d(&g2, "3-6,h2"))),
            "3-4,4-6"
        );
        // Genus-1 strand against its own double horizontal.
        assert_eq!(element_string(&g1, &diff(&g1, &d(&g1, "1-3,h2"))), "1-2,2-3");
    }

    #[test]
    fn mul_examples() {
        let g1 = Pmc::genus1();
        assert_eq!(
            mul(&g1, &d(&g1, "1-2"), &d(&g1, "2-3")),
            Some(d(&g1, "1-3"))
        );
        // Idempotents act as projections.
        let a = d(&g1, "2-3");
        let i_match = StrandDiagram::idempotent(a.left_idem(&g1));
        let i_off = StrandDiagram::idempotent(g1.complement(a.left_idem(&g1)));
        assert_eq!(mul(&g1, &i_match, &a), Some(a.clone()));
        assert_eq!(mul(&g1, &i_off, &a), None);
        let g2 = Pmc::genus2_split();
        assert_eq!(
            mul(&g2, &d(&g2, "2-4"), &d(&g2, "4-6")),
            Some(d(&g2, "2-6"))
        );
        assert_eq!(
            mul(&g2, &d(&g2, "2-4"), &d(&g2, "4-7")),
            Some(d(&g2, "2-7"))
        );
        // Double crossing kills the product.
        assert_eq!(mul(&g1, &d(&g1, "1-4,2-3"), &d(&g1, "3-4")), None);
    }

    #[test]
    fn chord_element_examples() {
        let g1 = Pmc::genus1();
        let i1 = Idempotent::EMPTY.with(0);
        let i2 = Idempotent::EMPTY.with(1);
        let full = i1.union(i2);
        assert_eq!(
            chord_element(&g1, Chord::new(1, 2), i1),
            Some(d(&g1, "1-2"))
        );
        // The chord 1-2 ends on the pair {2,4}, so no decoration can also
        // carry a horizontal there: the full idempotent kills it.
        assert_eq!(chord_element(&g1, Chord::new(1, 2), full), None);
        assert_eq!(chord_element(&g1, Chord::new(1, 2), i2), None);
        // A chord with matching endpoint pairs does admit the decoration.
        assert_eq!(
            chord_element(&g1, Chord::new(1, 3), full),
            Some(d(&g1, "1-3,h2"))
        );
    }

    #[test]
    fn multiplicity_examples() {
        let g1 = Pmc::genus1();
        assert_eq!(d(&g1, "1-3").multiplicity(&g1).0, vec![1, 1, 0]);
        assert_eq!(d(&g1, "h1,h2").multiplicity(&g1).0, vec![0, 0, 0]);
        assert_eq!(d(&g1, "1-4,2-3").multiplicity(&g1).0, vec![1, 2, 1]);
    }

    #[test]
    fn genus1_basis() {
        let g1 = Pmc::genus1();
        let basis = enumerate_basis(&g1);
        assert_eq!(basis.iter().filter(|b| b.is_idempotent()).count(), 4);
        assert_eq!(basis.len(), 16);
        for b in &basis {
            // Construction re-validates every invariant.
            StrandDiagram::new(&g1, b.strands().to_vec(), b.horizontals()).unwrap();
        }
    }

    #[test]
    fn factorizations_cover_products() {
        let g1 = Pmc::genus1();
        let target = d(&g1, "1-3");
        let facts = factorizations(&g1, &target);
        assert!(facts.contains(&(d(&g1, "1-2"), d(&g1, "2-3"))));
        // Trivial factorizations on both sides.
        assert!(facts
            .iter()
            .any(|(y, c)| y.is_idempotent() && c == &target));
        assert!(facts
            .iter()
            .any(|(y, c)| c.is_idempotent() && y == &target));
        // Exhaustive cross-check against the basis.
        let basis = enumerate_basis(&g1);
        for a in &basis {
            let mut expected = Vec::new();
            for y in &basis {
                for c in &basis {
                    if mul(&g1, y, c).as_ref() == Some(a) {
                        expected.push((y.clone(), c.clone()));
                    }
                }
            }
            let mut got = factorizations(&g1, a);
            got.sort_unstable();
            expected.sort_unstable();
            assert_eq!(got, expected, "factorizations of {}", diagram_string(&g1, a));
        }
    }

    #[test]
    fn rev_diff_matches_basis_scan() {
        let g1 = Pmc::genus1();
        let basis = enumerate_basis(&g1);
        for a in &basis {
            let mut expected: Vec<StrandDiagram> = basis
                .iter()
                .filter(|e| diff(&g1, e).contains(a))
                .cloned()
                .collect();
            expected.sort_unstable();
            assert_eq!(rev_diff(&g1, a), expected);
        }
    }

    #[test]
    fn literal_round_trip() {
        let g2 = Pmc::genus2_split();
        for s in ["1-2", "3-6,h2", "h1,h2,h5,h6", "e", "2-4,3-6"] {
            let parsed = d(&g2, s);
            assert_eq!(diagram_string(&g2, &parsed), s);
        }
        assert!(parse_diagram(&g2, "h3").is_err()); // 3 is not a pair name
        assert!(parse_diagram(&g2, "2-2").is_err());
        assert!(parse_diagram(&g2, "1-3,h1").is_err());
    }
}
