//! Permutations of `[n]`, the Hamming metric, covering radius, transitivity,
//! and the degree-reduction map for non-transitive sets.
//!
//! Symbols are 1-based in every external representation (text format,
//! `Display`, parse); internally images are stored 0-based.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Default cap on the degree for operations that enumerate all of `S_n`.
///
/// `8! = 40320` keeps exhaustive loops sub-second; callers may override
/// through the `*_capped` variants.
pub const DEFAULT_ENUM_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("symbol {symbol} out of range 1..={n}")]
    SymbolOutOfRange { symbol: usize, n: usize },
    #[error("symbol {symbol} occurs more than once")]
    DuplicateSymbol { symbol: usize },
    #[error("permutation set is empty")]
    EmptySet,
    #[error("degree {n} exceeds enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("set is transitive, reduction does not apply")]
    Transitive,
    #[error("degree must be at least 2 to reduce")]
    DegreeTooSmall,
    #[error("degree must be positive")]
    ZeroDegree,
}

/// A permutation of `{1..n}`, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>, // 0-based: image[i] = p(i+1) - 1
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    /// The transposition exchanging `a` and `b` (0-based); identity if `a == b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        assert!(a < n && b < n, "transposition points must lie in 0..n");
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(a, b);
        Permutation { image }
    }

    /// Builds from a 0-based image array, checking it is a bijection.
    pub fn from_zero_based(image: Vec<usize>) -> Result<Self, PermError> {
        let n = image.len();
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n {
                return Err(PermError::SymbolOutOfRange { symbol: v + 1, n });
            }
            if seen[v] {
                return Err(PermError::DuplicateSymbol { symbol: v + 1 });
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    /// Builds from a 1-based image array (the external convention).
    pub fn from_one_based(image: &[usize]) -> Result<Self, PermError> {
        let n = image.len();
        for &v in image {
            if v == 0 || v > n {
                return Err(PermError::SymbolOutOfRange { symbol: v, n });
            }
        }
        Permutation::from_zero_based(image.iter().map(|&v| v - 1).collect())
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// Applies the permutation to a 0-based point.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    /// The 0-based image array.
    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// The image array in the external 1-based convention.
    pub fn one_based(&self) -> Vec<usize> {
        self.image.iter().map(|&v| v + 1).collect()
    }

    /// Composition `self ∘ inner`: `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Result<Self, PermError> {
        if self.n() != inner.n() {
            return Err(PermError::DegreeMismatch {
                left: self.n(),
                right: inner.n(),
            });
        }
        Ok(Permutation {
            image: inner.image.iter().map(|&v| self.image[v]).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![0; self.n()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v] = i;
        }
        Permutation { image }
    }

    /// Hamming distance: the number of positions where the images disagree.
    ///
    /// Always 0 or at least 2 for permutations of equal degree; two distinct
    /// bijections cannot differ in exactly one position.
    pub fn hamming(&self, other: &Self) -> Result<usize, PermError> {
        if self.n() != other.n() {
            return Err(PermError::DegreeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(self
            .image
            .iter()
            .zip(&other.image)
            .filter(|(a, b)| a != b)
            .count())
    }

    /// Lexicographic rank of this permutation among all of `S_n`.
    pub fn rank(&self) -> usize {
        let n = self.n();
        let mut rank = 0;
        let mut fact = factorial(n);
        for i in 0..n {
            fact /= n - i;
            let smaller = self.image[i + 1..]
                .iter()
                .filter(|&&v| v < self.image[i])
                .count();
            rank += smaller * fact;
        }
        rank
    }

    /// The permutation of `S_n` with the given lexicographic rank.
    pub fn from_rank(n: usize, mut rank: usize) -> Option<Self> {
        if n == 0 || rank >= factorial(n) {
            return None;
        }
        let mut pool: Vec<usize> = (0..n).collect();
        let mut image = Vec::with_capacity(n);
        let mut fact = factorial(n);
        for i in 0..n {
            fact /= n - i;
            let idx = rank / fact;
            rank %= fact;
            image.push(pool.remove(idx));
        }
        Some(Permutation { image })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &v in &self.image {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}", v + 1)?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut vals = Vec::new();
        for tok in s.split_whitespace() {
            let v: usize = tok.parse().map_err(|_| PermError::Parse {
                line: 0,
                msg: format!("not an integer: '{tok}'"),
            })?;
            vals.push(v);
        }
        if vals.is_empty() {
            return Err(PermError::ZeroDegree);
        }
        Permutation::from_one_based(&vals)
    }
}

/// `n!` as a machine integer; callers keep `n` within enumeration caps.
pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Iterator over all of `S_n` in lexicographic order.
pub fn all_perms(n: usize) -> LexPerms {
    LexPerms {
        next: if n == 0 { None } else { Some((0..n).collect()) },
    }
}

pub struct LexPerms {
    next: Option<Vec<usize>>,
}

impl Iterator for LexPerms {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        self.next = next_lex(&mut succ).then_some(succ);
        Some(Permutation { image: current })
    }
}

// In-place lexicographic successor; false once the last permutation is reached.
fn next_lex(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// An ordered multiset of permutations of a common degree.
///
/// Duplicates are permitted; order is preserved by every operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermSet {
    n: usize,
    members: Vec<Permutation>,
}

impl PermSet {
    /// Builds a set of explicit degree `n`; members may be empty.
    pub fn new(n: usize, members: Vec<Permutation>) -> Result<Self, PermError> {
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        for m in &members {
            if m.n() != n {
                return Err(PermError::DegreeMismatch {
                    left: n,
                    right: m.n(),
                });
            }
        }
        Ok(PermSet { n, members })
    }

    /// Builds from a nonempty member list, inferring the degree.
    pub fn from_members(members: Vec<Permutation>) -> Result<Self, PermError> {
        let n = members.first().ok_or(PermError::EmptySet)?.n();
        PermSet::new(n, members)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Permutation] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Permutation> {
        self.members.iter()
    }

    /// Parses the text format: one permutation per line, whitespace-separated
    /// 1-based images; `#` starts a comment; blank lines are ignored. The
    /// first data line fixes the degree.
    pub fn parse(text: &str) -> Result<Self, PermError> {
        let mut members: Vec<Permutation> = Vec::new();
        let mut n = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let data = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            if data.trim().is_empty() {
                continue;
            }
            let p: Permutation = data.parse().map_err(|e| match e {
                PermError::Parse { msg, .. } => PermError::Parse { line: line_no, msg },
                other => PermError::Parse {
                    line: line_no,
                    msg: other.to_string(),
                },
            })?;
            if let Some(n) = n {
                if p.n() != n {
                    return Err(PermError::Parse {
                        line: line_no,
                        msg: format!("expected degree {n}, found {}", p.n()),
                    });
                }
            } else {
                n = Some(p.n());
            }
            members.push(p);
        }
        let n = n.ok_or(PermError::EmptySet)?;
        PermSet::new(n, members)
    }

    /// Renders the text format; `parse` of the result reproduces the set.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for m in &self.members {
            out.push_str(&m.to_string());
            out.push('\n');
        }
        out
    }
}

impl<'a> IntoIterator for &'a PermSet {
    type Item = &'a Permutation;
    type IntoIter = std::slice::Iter<'a, Permutation>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Covering radius of `set` in `S_n`: the maximum over all permutations of
/// the distance to the nearest member. Uses the default enumeration cap.
pub fn covering_radius(set: &PermSet) -> Result<usize, PermError> {
    covering_radius_capped(set, DEFAULT_ENUM_CAP)
}

pub fn covering_radius_capped(set: &PermSet, cap: usize) -> Result<usize, PermError> {
    farthest_point_capped(set, cap).map(|(r, _)| r)
}

/// Covering radius together with the lexicographically least permutation
/// attaining it.
///
/// Enumerates `S_n` in lexicographic order and exits early once the running
/// maximum reaches `n`, the diameter of the space.
pub fn farthest_point_capped(
    set: &PermSet,
    cap: usize,
) -> Result<(usize, Permutation), PermError> {
    if set.is_empty() {
        return Err(PermError::EmptySet);
    }
    let n = set.n();
    if n > cap {
        return Err(PermError::CapExceeded { n, cap });
    }
    let mut best = 0;
    let mut witness = None;
    for rho in all_perms(n) {
        let d = set
            .iter()
            .map(|m| m.hamming(&rho).expect("common degree"))
            .min()
            .expect("nonempty set");
        if d > best || witness.is_none() {
            best = d;
            witness = Some(rho);
            if best == n {
                break;
            }
        }
    }
    Ok((best, witness.expect("S_n is nonempty")))
}

/// Least `(x, y)` (0-based, lexicographic) such that no member maps `x` to
/// `y`, or `None` when the set is transitive.
pub fn transitivity_witness(set: &PermSet) -> Result<Option<(usize, usize)>, PermError> {
    if set.is_empty() {
        return Err(PermError::EmptySet);
    }
    let n = set.n();
    for x in 0..n {
        let mut hit = vec![false; n];
        for p in set {
            hit[p.apply(x)] = true;
        }
        if let Some(y) = hit.iter().position(|&h| !h) {
            return Ok(Some((x, y)));
        }
    }
    Ok(None)
}

/// Whether every pair `(x, y)` is realized by some member.
pub fn is_transitive(set: &PermSet) -> Result<bool, PermError> {
    transitivity_witness(set).map(|w| w.is_none())
}

/// Relabels the set to `{tau ∘ p ∘ sigma}`, preserving order.
///
/// Pairwise Hamming distances and the covering radius are invariant under
/// any such relabeling.
pub fn relabel(set: &PermSet, sigma: &Permutation, tau: &Permutation) -> Result<PermSet, PermError> {
    let n = set.n();
    if sigma.n() != n {
        return Err(PermError::DegreeMismatch {
            left: n,
            right: sigma.n(),
        });
    }
    if tau.n() != n {
        return Err(PermError::DegreeMismatch {
            left: n,
            right: tau.n(),
        });
    }
    let members = set
        .iter()
        .map(|p| {
            tau.compose(p)
                .and_then(|tp| tp.compose(sigma))
                .expect("degrees match")
        })
        .collect();
    PermSet::new(n, members)
}

/// Outcome of [`reduce_nontransitive`].
#[derive(Debug, Clone)]
pub struct Reduction {
    /// The reduced set in `S_{n-1}`, one image per input member in order.
    pub reduced: PermSet,
    /// The unhit pair `(x, y)` (0-based) used for normalization.
    pub witness: (usize, usize),
    /// Multiset size of the input (equals the reduced multiset size).
    pub input_size: usize,
    /// Number of distinct permutations among the reduced images.
    pub distinct_size: usize,
}

/// Degree reduction for a non-transitive set.
///
/// Finds the least unhit pair `(x, y)`, relabels by the transpositions
/// `(x n)` on the domain and `(y n)` on the range so that every member moves
/// the last point, then drops the last point through the map
/// `g(p)(i) = p(i)` if `p(i) ≠ n`, else `p(n)`.
///
/// If the input has covering radius at most `n - s`, the result has covering
/// radius at most `(n-1) - s`. Distinct members may collapse to equal images;
/// both cardinalities are reported.
pub fn reduce_nontransitive(set: &PermSet) -> Result<Reduction, PermError> {
    if set.is_empty() {
        return Err(PermError::EmptySet);
    }
    let n = set.n();
    if n < 2 {
        return Err(PermError::DegreeTooSmall);
    }
    let (x, y) = transitivity_witness(set)?.ok_or(PermError::Transitive)?;
    let sigma = Permutation::transposition(n, x, n - 1);
    let tau = Permutation::transposition(n, y, n - 1);
    let normalized = relabel(set, &sigma, &tau)?;

    let mut reduced_members = Vec::with_capacity(set.len());
    for p in &normalized {
        debug_assert_ne!(p.apply(n - 1), n - 1, "witness normalization failed");
        let last = p.apply(n - 1);
        let image: Vec<usize> = (0..n - 1)
            .map(|i| {
                let v = p.apply(i);
                if v == n - 1 {
                    last
                } else {
                    v
                }
            })
            .collect();
        reduced_members
            .push(Permutation::from_zero_based(image).expect("reduction image is a bijection"));
    }
    let distinct: std::collections::BTreeSet<&Permutation> = reduced_members.iter().collect();
    let distinct_size = distinct.len();
    Ok(Reduction {
        reduced: PermSet::new(n - 1, reduced_members)?,
        witness: (x, y),
        input_size: set.len(),
        distinct_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_one_based(v).unwrap()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(p(&[1, 2, 3]).hamming(&p(&[1, 2, 3])).unwrap(), 0);
        assert_eq!(p(&[2, 1, 3]).hamming(&p(&[1, 2, 3])).unwrap(), 2);
        assert_eq!(p(&[2, 3, 1]).hamming(&p(&[3, 1, 2])).unwrap(), 3);
    }

    #[test]
    fn hamming_degree_mismatch() {
        let err = p(&[1, 2]).hamming(&p(&[1, 2, 3])).unwrap_err();
        assert_eq!(err, PermError::DegreeMismatch { left: 2, right: 3 });
    }

    #[test]
    fn hamming_never_one_exhaustive_s4() {
        let perms: Vec<_> = all_perms(4).collect();
        for a in &perms {
            for b in &perms {
                assert_ne!(a.hamming(b).unwrap(), 1);
            }
        }
    }

    #[test]
    fn bijection_validation() {
        assert!(Permutation::from_one_based(&[1, 1, 3]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        assert!(Permutation::from_one_based(&[1, 4, 2]).is_err());
        assert!(Permutation::from_one_based(&[]).is_err());
    }

    #[test]
    fn lex_enumeration_and_ranks() {
        let perms: Vec<_> = all_perms(4).collect();
        assert_eq!(perms.len(), 24);
        let mut sorted = perms.clone();
        sorted.sort();
        assert_eq!(perms, sorted, "enumeration must be lexicographic");
        for (i, q) in perms.iter().enumerate() {
            assert_eq!(q.rank(), i);
            assert_eq!(Permutation::from_rank(4, i).unwrap(), *q);
        }
        assert!(Permutation::from_rank(4, 24).is_none());
    }

    #[test]
    fn compose_and_inverse() {
        let a = p(&[2, 3, 1]);
        let b = p(&[3, 1, 2]);
        // (a ∘ b)(1) = a(b(1)) = a(3) = 1
        assert_eq!(a.compose(&b).unwrap(), p(&[1, 2, 3]));
        assert_eq!(a.inverse(), b);
    }

    #[test]
    fn covering_radius_all_of_s3_is_zero() {
        let set = PermSet::from_members(all_perms(3).collect()).unwrap();
        assert_eq!(covering_radius(&set).unwrap(), 0);
    }

    #[test]
    fn covering_radius_singleton_s3_is_three() {
        let set = PermSet::from_members(vec![p(&[1, 2, 3])]).unwrap();
        assert_eq!(covering_radius(&set).unwrap(), 3);
    }

    #[test]
    fn covering_radius_singleton_is_n_for_small_n() {
        // a derangement relative to any single centre exists once n >= 2
        for n in 2..=6 {
            let set = PermSet::from_members(vec![Permutation::identity(n)]).unwrap();
            assert_eq!(covering_radius(&set).unwrap(), n);
        }
    }

    #[test]
    fn covering_radius_z4_cayley_rows() {
        // rows of the Z_4 addition table
        let rows = vec![
            p(&[1, 2, 3, 4]),
            p(&[2, 3, 4, 1]),
            p(&[3, 4, 1, 2]),
            p(&[4, 1, 2, 3]),
        ];
        let set = PermSet::from_members(rows).unwrap();
        assert_eq!(covering_radius(&set).unwrap(), 2);
    }

    #[test]
    fn covering_radius_errors() {
        let empty = PermSet::new(3, vec![]).unwrap();
        assert_eq!(covering_radius(&empty).unwrap_err(), PermError::EmptySet);
        let set = PermSet::from_members(vec![Permutation::identity(9)]).unwrap();
        assert_eq!(
            covering_radius(&set).unwrap_err(),
            PermError::CapExceeded { n: 9, cap: 8 }
        );
    }

    #[test]
    fn farthest_point_is_lex_least() {
        let set = PermSet::from_members(vec![p(&[1, 2, 3])]).unwrap();
        let (r, w) = farthest_point_capped(&set, 8).unwrap();
        assert_eq!(r, 3);
        // derangements of the identity in lex order: 2 3 1 before 3 1 2
        assert_eq!(w, p(&[2, 3, 1]));
    }

    #[test]
    fn transitivity_of_cayley_rows() {
        let rows = vec![p(&[1, 2, 3]), p(&[2, 3, 1]), p(&[3, 1, 2])];
        let set = PermSet::from_members(rows).unwrap();
        assert!(is_transitive(&set).unwrap());
    }

    #[test]
    fn transitivity_witness_for_singleton() {
        let set = PermSet::from_members(vec![p(&[1, 2])]).unwrap();
        // least unhit pair: 1 cannot reach 2 (0-based (0, 1))
        assert_eq!(transitivity_witness(&set).unwrap(), Some((0, 1)));
    }

    #[test]
    fn small_sets_are_never_transitive() {
        // fewer than n members cannot hit all (x, y)
        for n in 2..=5 {
            let members: Vec<_> = all_perms(n).take(n - 1).collect();
            let set = PermSet::from_members(members).unwrap();
            assert!(!is_transitive(&set).unwrap());
        }
    }

    #[test]
    fn relabel_identity_is_noop() {
        let set = PermSet::from_members(vec![p(&[2, 1, 3]), p(&[3, 2, 1])]).unwrap();
        let id = Permutation::identity(3);
        assert_eq!(relabel(&set, &id, &id).unwrap(), set);
    }

    #[test]
    fn relabel_composition_example() {
        let set = PermSet::from_members(vec![p(&[1, 2, 3])]).unwrap();
        let sigma = p(&[2, 1, 3]);
        let id = Permutation::identity(3);
        let out = relabel(&set, &sigma, &id).unwrap();
        assert_eq!(out.members(), &[p(&[2, 1, 3])]);
    }

    #[test]
    fn reduce_singleton_identity() {
        let set = PermSet::from_members(vec![p(&[1, 2, 3])]).unwrap();
        let red = reduce_nontransitive(&set).unwrap();
        assert_eq!(red.witness, (0, 1));
        assert_eq!(red.input_size, 1);
        assert_eq!(red.distinct_size, 1);
        assert_eq!(red.reduced.n(), 2);
        assert_eq!(red.reduced.len(), 1);
        // normalization sends identity to 2 3 1; dropping the last point gives 2 1
        assert_eq!(red.reduced.members()[0], p(&[2, 1]));
    }

    #[test]
    fn reduce_rejects_transitive_input() {
        let rows = vec![p(&[1, 2, 3]), p(&[2, 3, 1]), p(&[3, 1, 2])];
        let set = PermSet::from_members(rows).unwrap();
        assert_eq!(
            reduce_nontransitive(&set).unwrap_err(),
            PermError::Transitive
        );
    }

    #[test]
    fn reduce_rejects_degree_one() {
        let set = PermSet::from_members(vec![p(&[1])]).unwrap();
        assert_eq!(
            reduce_nontransitive(&set).unwrap_err(),
            PermError::DegreeTooSmall
        );
    }

    #[test]
    fn parse_and_render_roundtrip() {
        let text = "# a comment\n1 2 3\n\n2 1 3   # trailing comment\n";
        let set = PermSet::parse(text).unwrap();
        assert_eq!(set.n(), 3);
        assert_eq!(set.len(), 2);
        assert_eq!(PermSet::parse(&set.to_text()).unwrap(), set);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = PermSet::parse("1 2 3\n1 2 x\n").unwrap_err();
        match err {
            PermError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        let err = PermSet::parse("1 2 3\n1 2\n").unwrap_err();
        match err {
            PermError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected degree error, got {other:?}"),
        }
    }

    #[test]
    fn parse_empty_input_is_error() {
        assert_eq!(PermSet::parse("# nothing\n").unwrap_err(), PermError::EmptySet);
    }
}
