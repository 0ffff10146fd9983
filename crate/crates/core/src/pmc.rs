//! Pointed matched circles: 4k marked points on a circle, matched in pairs,
//! with a basepoint above the topmost point. Strands move upward (toward
//! larger point labels).

use std::fmt;

/// A marked point on the circle, labeled 1..=4k from bottom to top.
pub type Point = u8;

/// The segment between points `lower` and `lower + 1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Segment {
    pub lower: Point,
}

impl Segment {
    pub fn new(lower: Point) -> Segment {
        Segment { lower }
    }

    pub fn upper(&self) -> Point {
        self.lower + 1
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lower, self.lower + 1)
    }
}

/// An interval [start, end] on the circle with `start < end`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Chord {
    pub start: Point,
    pub end: Point,
}

impl Chord {
    pub fn new(start: Point, end: Point) -> Chord {
        assert!(start < end);
        Chord { start, end }
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.start, self.end)
    }
}

/// A set of matched pairs, stored as a bitmask over pair indices.
///
/// Pair indices are assigned in increasing order of the pair's smaller point,
/// which is also the pair's canonical name in all text output.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Idempotent(pub u32);

impl Idempotent {
    pub const EMPTY: Idempotent = Idempotent(0);

    pub fn contains(&self, pair: u8) -> bool {
        self.0 & (1 << pair) != 0
    }

    pub fn with(&self, pair: u8) -> Idempotent {
        Idempotent(self.0 | (1 << pair))
    }

    pub fn without(&self, pair: u8) -> Idempotent {
        Idempotent(self.0 & !(1 << pair))
    }

    pub fn union(&self, other: Idempotent) -> Idempotent {
        Idempotent(self.0 | other.0)
    }

    pub fn intersects(&self, other: Idempotent) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    /// Pair indices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        let mask = self.0;
        (0..32).filter(move |i| mask & (1 << i) != 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PmcError {
    /// Number of points is zero or not a multiple of four.
    BadPointCount(usize),
    /// A point is outside 1..=4k or appears in two pairs.
    BadMatching(String),
    /// The traversal order does not visit every segment exactly once, so the
    /// matching does not describe a surface with a single boundary circle.
    IncompleteTraversal { visited: usize, total: usize },
    /// Text format violation.
    Parse(String),
}

impl fmt::Display for PmcError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PmcError::BadPointCount(n) => {
                write!(f, "number of points must be a positive multiple of 4, got {n}")
            }
            PmcError::BadMatching(msg) => write!(f, "invalid matching: {msg}"),
            PmcError::IncompleteTraversal { visited, total } => write!(
                f,
                "traversal order visits {visited} of {total} segments; matching rejected"
            ),
            PmcError::Parse(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for PmcError {}

/// A pointed matched circle on 4k points.
///
/// Immutable after construction; construction computes and validates the
/// traversal order on segments.
#[derive(Clone, Debug)]
pub struct PointedMatchedCircle {
    num_points: Point,
    partner: Vec<Point>,
    pair_index_of: Vec<u8>,
    pair_names: Vec<Point>,
    order: Vec<Segment>,
    order_pos: Vec<u8>,
}

pub type Pmc = PointedMatchedCircle;

impl PointedMatchedCircle {
    /// Builds a pointed matched circle from its list of pairs.
    ///
    /// Rejects matchings whose traversal chain fails to visit every segment
    /// exactly once before reaching the bottom of the circle.
    pub fn new(num_points: usize, pairs: &[(Point, Point)]) -> Result<Pmc, PmcError> {
        if num_points == 0 || num_points % 4 != 0 || num_points > 60 {
            return Err(PmcError::BadPointCount(num_points));
        }
        let n = num_points as Point;
        if pairs.len() != num_points / 2 {
            return Err(PmcError::BadMatching(format!(
                "expected {} pairs, got {}",
                num_points / 2,
                pairs.len()
            )));
        }
        let mut partner = vec![0 as Point; num_points];
        for &(p, q) in pairs {
            if p == 0 || q == 0 || p > n || q > n {
                return Err(PmcError::BadMatching(format!("pair ({p},{q}) out of range")));
            }
            if p >= q {
                return Err(PmcError::BadMatching(format!(
                    "pair ({p},{q}) must list the smaller point first"
                )));
            }
            for pt in [p, q] {
                if partner[pt as usize - 1] != 0 {
                    return Err(PmcError::BadMatching(format!("point {pt} matched twice")));
                }
            }
            partner[p as usize - 1] = q;
            partner[q as usize - 1] = p;
        }

        // Pair indices in increasing order of the smaller point.
        let mut pair_names: Vec<Point> = pairs.iter().map(|&(p, _)| p).collect();
        pair_names.sort_unstable();
        let mut pair_index_of = vec![0u8; num_points];
        for (idx, &name) in pair_names.iter().enumerate() {
            pair_index_of[name as usize - 1] = idx as u8;
            pair_index_of[partner[name as usize - 1] as usize - 1] = idx as u8;
        }

        let (order, order_pos) = compute_order(n, &partner)?;

        Ok(PointedMatchedCircle {
            num_points: n,
            partner,
            pair_index_of,
            pair_names,
            order,
            order_pos,
        })
    }

    /// The unique genus-1 pointed matched circle, pairs {1,3} and {2,4}.
    pub fn genus1() -> Pmc {
        Pmc::new(4, &[(1, 3), (2, 4)]).unwrap()
    }

    /// The split genus-2 pointed matched circle {1,3},{2,4},{5,7},{6,8}.
    pub fn genus2_split() -> Pmc {
        Pmc::new(8, &[(1, 3), (2, 4), (5, 7), (6, 8)]).unwrap()
    }

    /// The antipodal genus-2 pointed matched circle {1,5},{2,6},{3,7},{4,8}.
    pub fn genus2_antipodal() -> Pmc {
        Pmc::new(8, &[(1, 5), (2, 6), (3, 7), (4, 8)]).unwrap()
    }

    pub fn num_points(&self) -> Point {
        self.num_points
    }

    pub fn num_pairs(&self) -> usize {
        self.num_points as usize / 2
    }

    pub fn genus(&self) -> usize {
        self.num_points as usize / 4
    }

    /// The point matched with `pt`.
    pub fn partner(&self, pt: Point) -> Point {
        assert!(pt >= 1 && pt <= self.num_points, "point {pt} out of range");
        self.partner[pt as usize - 1]
    }

    /// Index of the pair containing `pt`.
    pub fn pair_of(&self, pt: Point) -> u8 {
        assert!(pt >= 1 && pt <= self.num_points, "point {pt} out of range");
        self.pair_index_of[pt as usize - 1]
    }

    /// Canonical name (smaller point) of the pair with index `idx`.
    pub fn pair_name(&self, idx: u8) -> Point {
        self.pair_names[idx as usize]
    }

    /// Pair index from its canonical name, if `name` is a smaller point.
    pub fn pair_by_name(&self, name: Point) -> Option<u8> {
        self.pair_names.binary_search(&name).ok().map(|i| i as u8)
    }

    /// The idempotent containing every pair.
    pub fn full_idempotent(&self) -> Idempotent {
        Idempotent((1u32 << self.num_pairs()) - 1)
    }

    pub fn complement(&self, i: Idempotent) -> Idempotent {
        Idempotent(self.full_idempotent().0 & !i.0)
    }

    /// All idempotents, in increasing mask order.
    pub fn all_idempotents(&self) -> impl Iterator<Item = Idempotent> {
        (0..(1u32 << self.num_pairs())).map(Idempotent)
    }

    /// All chords [p,q] with p < q, ordered by (start, end).
    pub fn all_chords(&self) -> Vec<Chord> {
        let n = self.num_points;
        let mut out = Vec::new();
        for p in 1..=n {
            for q in (p + 1)..=n {
                out.push(Chord::new(p, q));
            }
        }
        out
    }

    pub fn num_segments(&self) -> usize {
        self.num_points as usize - 1
    }

    pub fn all_segments(&self) -> impl Iterator<Item = Segment> {
        (1..self.num_points).map(Segment::new)
    }

    /// The traversal order on segments: walk the boundary of the surface
    /// obtained by attaching handles along the matching, starting from the
    /// top of the circle.
    pub fn segment_order(&self) -> &[Segment] {
        &self.order
    }

    /// Position of a segment in the traversal order (0 = first).
    pub fn order_position(&self, seg: Segment) -> usize {
        self.order_pos[seg.lower as usize - 1] as usize
    }

    /// Renders the text format: `points <4k>` then one `pair <p> <q>` line per
    /// pair, sorted by smaller point.
    pub fn to_text(&self) -> String {
        let mut s = format!("points {}\n", self.num_points);
        for &name in &self.pair_names {
            s.push_str(&format!("pair {} {}\n", name, self.partner(name)));
        }
        s
    }

    /// Parses the text format produced by [`Pmc::to_text`].
    pub fn parse(text: &str) -> Result<Pmc, PmcError> {
        let mut num_points: Option<usize> = None;
        let mut pairs: Vec<(Point, Point)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut words = line.split_whitespace();
            match words.next() {
                Some("points") => {
                    if num_points.is_some() {
                        return Err(PmcError::Parse(format!(
                            "line {}: duplicate points line",
                            lineno + 1
                        )));
                    }
                    let v = words
                        .next()
                        .and_then(|w| w.parse::<usize>().ok())
                        .ok_or_else(|| {
                            PmcError::Parse(format!("line {}: expected `points <4k>`", lineno + 1))
                        })?;
                    num_points = Some(v);
                }
                Some("pair") => {
                    let p = words.next().and_then(|w| w.parse::<Point>().ok());
                    let q = words.next().and_then(|w| w.parse::<Point>().ok());
                    match (p, q) {
                        (Some(p), Some(q)) => pairs.push((p, q)),
                        _ => {
                            return Err(PmcError::Parse(format!(
                                "line {}: expected `pair <p> <q>`",
                                lineno + 1
                            )))
                        }
                    }
                }
                Some(other) => {
                    return Err(PmcError::Parse(format!(
                        "line {}: unknown directive `{other}`",
                        lineno + 1
                    )))
                }
                None => {}
            }
            if words.next().is_some() {
                return Err(PmcError::Parse(format!(
                    "line {}: trailing tokens",
                    lineno + 1
                )));
            }
        }
        let num_points =
            num_points.ok_or_else(|| PmcError::Parse("missing `points` line".into()))?;
        Pmc::new(num_points, &pairs)
    }
}

/// Walks the predecessor chain backwards from the initial segment.
///
/// The initial segment is the unique (p,p+1) with partner(p+1) = 4k. The
/// segment following (q,q+1) is (partner(q)-1, partner(q)); the walk stops
/// when partner(q) = 1. Every segment must be visited exactly once.
fn compute_order(n: Point, partner: &[Point]) -> Result<(Vec<Segment>, Vec<u8>), PmcError> {
    let total = n as usize - 1;
    let top_partner = partner[n as usize - 1];
    if top_partner == 0 {
        return Err(PmcError::BadMatching("topmost point unmatched".into()));
    }
    let mut order = Vec::with_capacity(total);
    let mut order_pos = vec![u8::MAX; total];
    // First segment: (p, p+1) with p+1 matched to the topmost point.
    let mut upper = top_partner;
    loop {
        if upper < 2 {
            // Reached the bottom of the circle.
            break;
        }
        let seg = Segment::new(upper - 1);
        if order_pos[seg.lower as usize - 1] != u8::MAX {
            // Revisit: the chain loops without covering everything.
            break;
        }
        order_pos[seg.lower as usize - 1] = order.len() as u8;
        order.push(seg);
        upper = partner[seg.lower as usize - 1];
    }
    if order.len() != total {
        return Err(PmcError::IncompleteTraversal {
            visited: order.len(),
            total,
        });
    }
    Ok((order, order_pos))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partner_is_involution() {
        for pmc in [Pmc::genus1(), Pmc::genus2_split(), Pmc::genus2_antipodal()] {
            for pt in 1..=pmc.num_points() {
                let q = pmc.partner(pt);
                assert_ne!(q, pt);
                assert_eq!(pmc.partner(q), pt);
            }
        }
    }

    #[test]
    fn genus1_partner_values() {
        let pmc = Pmc::genus1();
        assert_eq!(pmc.partner(2), 4);
        assert_eq!(pmc.partner(1), 3);
    }

    #[test]
    fn genus2_split_partner_values() {
        let pmc = Pmc::genus2_split();
        assert_eq!(pmc.partner(6), 8);
    }

    #[test]
    fn split_segment_order_matches_traversal() {
        // (5,6),(6,7),(7,8),(4,5),(1,2),(2,3),(3,4)
        let pmc = Pmc::genus2_split();
        let lowers: Vec<Point> = pmc.segment_order().iter().map(|s| s.lower).collect();
        assert_eq!(lowers, vec![5, 6, 7, 4, 1, 2, 3]);
    }

    #[test]
    fn genus1_segment_order() {
        let pmc = Pmc::genus1();
        let lowers: Vec<Point> = pmc.segment_order().iter().map(|s| s.lower).collect();
        assert_eq!(lowers, vec![1, 2, 3]);
    }

    #[test]
    fn antipodal_order_is_permutation() {
        let pmc = Pmc::genus2_antipodal();
        let mut lowers: Vec<Point> = pmc.segment_order().iter().map(|s| s.lower).collect();
        assert_eq!(lowers.len(), 7);
        lowers.sort_unstable();
        assert_eq!(lowers, vec![1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn rejects_non_surface_matching() {
        // {1,2},{3,4}: the chain loops on one segment.
        let err = Pmc::new(4, &[(1, 2), (3, 4)]).unwrap_err();
        assert!(matches!(err, PmcError::IncompleteTraversal { .. }));
    }

    #[test]
    fn predecessor_rule_consistency() {
        // For each non-initial segment (p,p+1), the predecessor is
        // (q,q+1) with q = partner(p+1).
        for pmc in [Pmc::genus1(), Pmc::genus2_split(), Pmc::genus2_antipodal()] {
            let order = pmc.segment_order();
            for (pos, seg) in order.iter().enumerate() {
                let q = pmc.partner(seg.upper());
                if q == pmc.num_points() {
                    assert_eq!(pos, 0, "initial segment must come first");
                } else {
                    let prev = Segment::new(q);
                    assert_eq!(pmc.order_position(prev) + 1, pos);
                }
            }
        }
    }

    #[test]
    fn order_covers_all_valid_small_matchings() {
        // Exhaustive over all matchings of 4 and 8 points: whenever
        // construction succeeds, the order is a bijection onto segments.
        fn all_matchings(points: Vec<Point>) -> Vec<Vec<(Point, Point)>> {
            if points.is_empty() {
                return vec![vec![]];
            }
            let first = points[0];
            let mut out = Vec::new();
            for i in 1..points.len() {
                let mate = points[i];
                let mut rest: Vec<Point> = points[1..].to_vec();
                rest.retain(|&p| p != mate);
                for mut sub in all_matchings(rest) {
                    sub.insert(0, (first, mate));
                    out.push(sub);
                }
            }
            out
        }
        for n in [4usize, 8] {
            let mut accepted = 0;
            for pairs in all_matchings((1..=n as Point).collect()) {
                if let Ok(pmc) = Pmc::new(n, &pairs) {
                    accepted += 1;
                    let mut lowers: Vec<Point> =
                        pmc.segment_order().iter().map(|s| s.lower).collect();
                    lowers.sort_unstable();
                    assert_eq!(lowers, (1..n as Point).collect::<Vec<_>>());
                }
            }
            assert!(accepted > 0, "no valid matchings on {n} points");
        }
    }

    #[test]
    fn complement_involution() {
        let pmc = Pmc::genus2_split();
        for i in pmc.all_idempotents() {
            let o = pmc.complement(i);
            assert_eq!(pmc.complement(o), i);
            assert!(!i.intersects(o));
            assert_eq!(i.len() + o.len(), pmc.num_pairs());
        }
        assert_eq!(pmc.complement(Idempotent::EMPTY), pmc.full_idempotent());
    }

    #[test]
    fn chord_count() {
        assert_eq!(Pmc::genus1().all_chords().len(), 6);
        assert_eq!(Pmc::genus2_split().all_chords().len(), 28);
        assert!(Pmc::genus1().all_chords().contains(&Chord::new(1, 2)));
    }

    #[test]
    fn text_round_trip() {
        for pmc in [Pmc::genus1(), Pmc::genus2_split(), Pmc::genus2_antipodal()] {
            let text = pmc.to_text();
            let back = Pmc::parse(&text).unwrap();
            assert_eq!(back.to_text(), text);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Pmc::parse("points 4\npair 1 3\npair 1 4\n").is_err());
        assert!(Pmc::parse("pair 1 3\n").is_err());
        assert!(Pmc::parse("points 4\npair 3 1\npair 2 4\n").is_err());
    }
}
