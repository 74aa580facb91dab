//! N-adic digit trees for Cantor-set constructions on [1,2].
//!
//! Level j of a tree holds the left endpoints of the N0^j intervals of
//! length N^{-j} making up the j-th construction stage. All positions and
//! measures are exact rationals: a node at level j is stored as the integer
//! numerator M with position 1 + M * N^{-j}, and the stage-j measure of an
//! interval is a rational with denominator N0^j. No floating point enters
//! this module's arithmetic.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = Ratio<i128>;

/// Construction parameters: branching base N, digits per level N0, and the
/// target exponent p. The dimension alpha = log N0 / log N is derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantorParams {
    pub n: u32,
    pub n0: u32,
    pub p: f64,
}

impl CantorParams {
    pub fn new(n: u32, n0: u32, p: f64) -> Result<Self> {
        if n < 7 {
            return Err(Error::InvalidParameter(format!("branching base N = {n} must be >= 7")));
        }
        if n0 == 0 || n0 >= n {
            return Err(Error::InvalidParameter(format!(
                "digits per level N0 = {n0} must satisfy 1 <= N0 < N = {n}"
            )));
        }
        if p < 2.0 {
            return Err(Error::InvalidParameter(format!("exponent p = {p} must be >= 2")));
        }
        Ok(Self { n, n0, p })
    }

    /// alpha = log N0 / log N, so that N0 = N^alpha.
    pub fn alpha(&self) -> f64 {
        (self.n0 as f64).ln() / (self.n as f64).ln()
    }
}

/// Address of one construction interval: level, digit path, and the offset
/// numerator M = sum_i s_i N^{j-i}. The real position is 1 + M * N^{-j}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeAddress {
    pub level: u32,
    pub digits: Vec<u32>,
    pub offset_numerator: i128,
}

impl NodeAddress {
    pub fn root() -> Self {
        Self { level: 0, digits: Vec::new(), offset_numerator: 0 }
    }

    fn child(&self, n: u32, digit: u32) -> Self {
        let mut digits = self.digits.clone();
        digits.push(digit);
        Self {
            level: self.level + 1,
            digits,
            offset_numerator: self.offset_numerator * n as i128 + digit as i128,
        }
    }

    /// Recomputes M from the digit path; must agree with the stored field.
    pub fn recompute_offset(&self, n: u32) -> i128 {
        self.digits.iter().fold(0i128, |m, &d| m * n as i128 + d as i128)
    }

    /// Exact position 1 + M * N^{-level}.
    pub fn position(&self, n: u32) -> Rat {
        Rat::one() + Rat::new(self.offset_numerator, pow_i128(n, self.level))
    }

    /// Position as f64 (for numerical consumers).
    pub fn position_f64(&self, n: u32) -> f64 {
        1.0 + self.offset_numerator as f64 / (n as f64).powi(self.level as i32)
    }
}

/// Rule assigning a digit set to every node of the construction.
#[derive(Clone)]
pub enum Selector {
    /// One fixed digit set everywhere (self-similar case).
    Constant(Vec<u32>),
    /// Digit set chosen by level parity: even levels use the first set.
    Alternating(Vec<u32>, Vec<u32>),
    /// Arbitrary rule on (level of the child, parent address).
    PerNode { description: String, rule: fn(u32, &NodeAddress) -> Vec<u32> },
}

impl Selector {
    pub fn digits_for(&self, child_level: u32, parent: &NodeAddress) -> Vec<u32> {
        match self {
            Selector::Constant(s) => s.clone(),
            Selector::Alternating(a, b) => {
                if child_level % 2 == 1 {
                    a.clone()
                } else {
                    b.clone()
                }
            }
            Selector::PerNode { rule, .. } => rule(child_level, parent),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Selector::Constant(s) => format!("constant {s:?}"),
            Selector::Alternating(a, b) => format!("alternating {a:?} / {b:?} by level parity"),
            Selector::PerNode { description, .. } => description.clone(),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Selector::Constant(_))
    }
}

/// A built digit tree up to depth J.
pub struct CantorTree {
    pub params: CantorParams,
    pub selector: Selector,
    pub depth: u32,
    /// levels[j] lists the level-j nodes in increasing offset order, j = 0..=J.
    pub levels: Vec<Vec<NodeAddress>>,
}

fn validate_digits(digits: &[u32], params: &CantorParams, level: u32) -> Result<()> {
    if digits.len() != params.n0 as usize {
        return Err(Error::BadSelector {
            level,
            reason: format!("cardinality {} != N0 = {}", digits.len(), params.n0),
        });
    }
    let mut seen = digits.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != digits.len() {
        return Err(Error::BadSelector { level, reason: "repeated digit".into() });
    }
    for &d in digits {
        if d >= params.n {
            return Err(Error::DigitOutOfRange { digit: d as i64, base: params.n });
        }
        if d == params.n - 1 {
            return Err(Error::ForbiddenTopDigit(params.n - 1));
        }
    }
    Ok(())
}

/// Builds the self-similar tree S_{j,a} = S for all j, a.
pub fn build_self_similar(digits: &[u32], params: CantorParams, depth: u32) -> Result<CantorTree> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth J must be >= 1".into()));
    }
    let mut sorted = digits.to_vec();
    sorted.sort_unstable();
    build_with_selector(Selector::Constant(sorted), params, depth)
}

/// Builds a tree from an arbitrary selector.
pub fn build_with_selector(selector: Selector, params: CantorParams, depth: u32) -> Result<CantorTree> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth J must be >= 1".into()));
    }
    let mut levels = vec![vec![NodeAddress::root()]];
    for j in 1..=depth {
        let parents = &levels[(j - 1) as usize];
        let mut children = Vec::with_capacity(parents.len() * params.n0 as usize);
        for parent in parents {
            let mut digits = selector.digits_for(j, parent);
            digits.sort_unstable();
            validate_digits(&digits, &params, j)?;
            for d in digits {
                children.push(parent.child(params.n, d));
            }
        }
        levels.push(children);
    }
    Ok(CantorTree { params, selector, depth, levels })
}

impl CantorTree {
    pub fn nodes(&self, level: u32) -> Result<&[NodeAddress]> {
        if level > self.depth {
            return Err(Error::LevelTooDeep { requested: level, depth: self.depth });
        }
        Ok(&self.levels[level as usize])
    }

    /// Node positions at a level as f64, for numerical consumers.
    pub fn positions_f64(&self, level: u32) -> Result<Vec<f64>> {
        Ok(self.nodes(level)?.iter().map(|a| a.position_f64(self.params.n)).collect())
    }

    pub fn is_self_similar(&self) -> bool {
        self.selector.is_constant()
    }

    /// Structured text form: params, selector description, per-level digit arrays.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("N = {}\n", self.params.n));
        out.push_str(&format!("N0 = {}\n", self.params.n0));
        out.push_str(&format!("p = {}\n", self.params.p));
        out.push_str(&format!("alpha = {:.12}\n", self.params.alpha()));
        out.push_str(&format!("depth = {}\n", self.depth));
        out.push_str(&format!("selector = {}\n", self.selector.describe()));
        for j in 1..=self.depth {
            let offsets: Vec<String> =
                self.levels[j as usize].iter().map(|a| a.offset_numerator.to_string()).collect();
            out.push_str(&format!("level {} offsets = {}\n", j, offsets.join(",")));
        }
        out
    }
}

fn pow_i128(base: u32, exp: u32) -> i128 {
    (0..exp).fold(1i128, |acc, _| acc * base as i128)
}

/// Exact mu_J measure of an interval with rational endpoints. Level-J
/// intervals receive proportional credit for partial overlap (mu_J is the
/// normalized uniform density on the stage-J set).
pub fn measure_of_interval(tree: &CantorTree, level: u32, lo: Rat, hi: Rat) -> Result<Rat> {
    if lo > hi {
        return Err(Error::MalformedInterval);
    }
    let nodes = tree.nodes(level)?;
    let n = tree.params.n;
    let njd = pow_i128(n, level); // denominator N^J
    let width = Rat::new(1, njd);
    let mut total = Rat::zero();
    // Nodes are sorted by offset; restrict to those whose interval can overlap.
    let lo_num = lo - Rat::one(); // positions measured from 1
    let hi_num = hi - Rat::one();
    let start = nodes.partition_point(|a| {
        // a.offset + 1 <= lo_num * N^J  <=>  interval right end <= lo
        Rat::new(a.offset_numerator + 1, njd) <= lo_num
    });
    for node in &nodes[start..] {
        let left = Rat::new(node.offset_numerator, njd);
        if left >= hi_num {
            break;
        }
        let right = left + width;
        let cut_lo = if lo_num > left { lo_num } else { left };
        let cut_hi = if hi_num < right { hi_num } else { right };
        if cut_hi > cut_lo {
            total += (cut_hi - cut_lo) / width;
        }
    }
    let count_den = pow_i128(tree.params.n0, level);
    Ok(total / Rat::from_integer(count_den))
}

/// One sampled Frostman ratio: center, radius exponent i (r = N^{-i}), and
/// the exact value mu(B(x,r)) * r^{-alpha} = mu(B) * N0^i.
#[derive(Debug, Clone)]
pub struct FrostmanSample {
    pub center: Rat,
    pub radius_level: u32,
    pub ratio: Rat,
}

#[derive(Debug, Clone)]
pub struct FrostmanReport {
    pub level: u32,
    pub ratio_min: Rat,
    pub ratio_max: Rat,
    pub exact_unit_samples: usize,
    pub samples: usize,
}

impl FrostmanReport {
    /// max(1/ratioMin, ratioMax) as f64.
    pub fn implied_constant(&self) -> f64 {
        let lo = rat_f64(self.ratio_min);
        let hi = rat_f64(self.ratio_max);
        (1.0 / lo).max(hi)
    }
}

pub fn rat_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Scans mu_J(B(x, N^{-i})) * N0^i over centers at the level-J node
/// positions and the given radius levels i (so all ratios are exact
/// rationals). Centers are the constructed node positions, a proxy for
/// supp mu with resolution floor N^{-J}.
pub fn frostman_scan(tree: &CantorTree, level: u32, radius_levels: &[u32]) -> Result<FrostmanReport> {
    if radius_levels.is_empty() {
        return Err(Error::EmptyGrid("radius grid"));
    }
    for &i in radius_levels {
        if i > level {
            return Err(Error::InvalidParameter(format!(
                "radius N^-{i} below resolution floor N^-{level}"
            )));
        }
    }
    let nodes = tree.nodes(level)?;
    let n = tree.params.n;
    let n0 = tree.params.n0;
    let mut min: Option<Rat> = None;
    let mut max: Option<Rat> = None;
    let mut exact_unit = 0usize;
    let mut count = 0usize;
    for node in nodes {
        let x = node.position(n);
        for &i in radius_levels {
            let r = Rat::new(1, pow_i128(n, i));
            let mass = measure_of_interval(tree, level, x - r, x + r)?;
            let ratio = mass * Rat::from_integer(pow_i128(n0, i));
            debug_assert!(ratio.is_positive());
            if ratio.is_one() {
                exact_unit += 1;
            }
            min = Some(match min {
                Some(m) if m <= ratio => m,
                _ => ratio,
            });
            max = Some(match max {
                Some(m) if m >= ratio => m,
                _ => ratio,
            });
            count += 1;
        }
    }
    Ok(FrostmanReport {
        level,
        ratio_min: min.unwrap(),
        ratio_max: max.unwrap(),
        exact_unit_samples: exact_unit,
        samples: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params7() -> CantorParams {
        CantorParams::new(7, 3, 4.0).unwrap()
    }

    #[test]
    fn self_similar_level_counts_and_positions() {
        let tree = build_self_similar(&[1, 2, 4], params7(), 2).unwrap();
        assert_eq!(tree.levels[1].len(), 3);
        assert_eq!(tree.levels[2].len(), 9);
        let pos: Vec<Rat> = tree.levels[1].iter().map(|a| a.position(7)).collect();
        assert_eq!(pos, vec![Rat::new(8, 7), Rat::new(9, 7), Rat::new(11, 7)]);
    }

    #[test]
    fn level_two_offset_numerators_match_enumeration() {
        // M = 7*s1 + s2 over s1, s2 in {1,2,4}.
        let tree = build_self_similar(&[1, 2, 4], params7(), 2).unwrap();
        let got: Vec<i128> = tree.levels[2].iter().map(|a| a.offset_numerator).collect();
        assert_eq!(got, vec![8, 9, 11, 15, 16, 18, 29, 30, 32]);
    }

    #[test]
    fn degenerate_single_digit_tree() {
        let params = CantorParams::new(7, 1, 4.0).unwrap();
        let tree = build_self_similar(&[0], params, 3).unwrap();
        for j in 0..=3 {
            assert_eq!(tree.levels[j].len(), 1);
            assert_eq!(tree.levels[j][0].offset_numerator, 0);
        }
    }

    #[test]
    fn rejects_forbidden_top_digit_and_bad_cardinality() {
        assert!(matches!(
            build_self_similar(&[1, 2, 6], params7(), 2),
            Err(Error::ForbiddenTopDigit(6))
        ));
        assert!(build_self_similar(&[1, 2], params7(), 2).is_err());
        assert!(build_self_similar(&[1, 2, 9], params7(), 2).is_err());
    }

    #[test]
    fn alternating_selector_level_two_digits() {
        let sel = Selector::Alternating(vec![1, 2, 4], vec![0, 3, 5]);
        let tree = build_with_selector(sel, params7(), 2).unwrap();
        assert_eq!(tree.levels[2].len(), 9);
        for node in &tree.levels[2] {
            assert!([0, 3, 5].contains(node.digits.last().unwrap()));
        }
    }

    #[test]
    fn constant_selector_matches_build_self_similar() {
        let a = build_self_similar(&[1, 2, 4], params7(), 3).unwrap();
        let b = build_with_selector(Selector::Constant(vec![1, 2, 4]), params7(), 3).unwrap();
        for j in 0..=3 {
            assert_eq!(a.levels[j], b.levels[j]);
        }
    }

    fn sibling_dependent(level: u32, parent: &NodeAddress) -> Vec<u32> {
        if level >= 2 && parent.digits[0] == 1 {
            vec![0, 3, 5]
        } else {
            vec![1, 2, 4]
        }
    }

    #[test]
    fn per_node_selector_keeps_counts_but_differs_across_siblings() {
        let sel = Selector::PerNode { description: "first-digit switch".into(), rule: sibling_dependent };
        let tree = build_with_selector(sel, params7(), 2).unwrap();
        assert_eq!(tree.levels[2].len(), 9);
        let under_first: Vec<u32> =
            tree.levels[2].iter().filter(|a| a.digits[0] == 1).map(|a| a.digits[1]).collect();
        let under_second: Vec<u32> =
            tree.levels[2].iter().filter(|a| a.digits[0] == 2).map(|a| a.digits[1]).collect();
        assert_eq!(under_first, vec![0, 3, 5]);
        assert_eq!(under_second, vec![1, 2, 4]);
    }

    #[test]
    fn offsets_recompute_from_digits() {
        let tree = build_self_similar(&[1, 2, 4], params7(), 3).unwrap();
        for level in tree.levels.iter() {
            for node in level {
                assert_eq!(node.offset_numerator, node.recompute_offset(7));
                let pos = node.position(7);
                assert!(pos >= Rat::one() && pos <= Rat::from_integer(2));
            }
        }
    }

    #[test]
    fn total_mass_is_one_and_child_interval_mass() {
        let tree = build_self_similar(&[1, 2, 4], params7(), 2).unwrap();
        let total = measure_of_interval(&tree, 2, Rat::one(), Rat::from_integer(2)).unwrap();
        assert_eq!(total, Rat::one());
        for node in &tree.levels[2] {
            let a = node.position(7);
            let m = measure_of_interval(&tree, 2, a, a + Rat::new(1, 49)).unwrap();
            assert_eq!(m, Rat::new(1, 9));
        }
    }

    #[test]
    fn measure_of_partial_level_one_interval() {
        let tree = build_self_similar(&[1, 2, 4], params7(), 1).unwrap();
        let m = measure_of_interval(&tree, 1, Rat::one(), Rat::one() + Rat::new(3, 7)).unwrap();
        assert_eq!(m, Rat::new(2, 3));
    }

    #[test]
    fn measure_rejects_malformed_interval() {
        let tree = build_self_similar(&[1, 2, 4], params7(), 1).unwrap();
        assert!(matches!(
            measure_of_interval(&tree, 1, Rat::from_integer(2), Rat::one()),
            Err(Error::MalformedInterval)
        ));
    }

    #[test]
    fn measure_additivity_over_nadic_partition() {
        let tree = build_self_similar(&[0, 2, 5], params7(), 2).unwrap();
        let mut total = Rat::zero();
        for k in 0..49 {
            let lo = Rat::one() + Rat::new(k, 49);
            let hi = Rat::one() + Rat::new(k + 1, 49);
            total += measure_of_interval(&tree, 2, lo, hi).unwrap();
        }
        assert_eq!(total, Rat::one());
    }

    #[test]
    fn nesting_every_child_inside_parent() {
        let tree = build_self_similar(&[1, 3, 5], params7(), 3).unwrap();
        for j in 1..=3usize {
            for node in &tree.levels[j] {
                let parent = NodeAddress {
                    level: node.level - 1,
                    digits: node.digits[..node.digits.len() - 1].to_vec(),
                    offset_numerator: node.offset_numerator / 7,
                };
                assert_eq!(parent.offset_numerator, parent.recompute_offset(7));
                let child_lo = node.position(7);
                let child_hi = child_lo + Rat::new(1, 7i128.pow(node.level));
                let par_lo = parent.position(7);
                let par_hi = par_lo + Rat::new(1, 7i128.pow(parent.level));
                assert!(par_lo <= child_lo && child_hi <= par_hi);
            }
        }
    }

    #[test]
    fn self_similar_subtree_is_shifted_copy() {
        let tree = build_self_similar(&[1, 2, 4], params7(), 3).unwrap();
        // Subtree under the first level-1 node, digits beyond the first level,
        // must equal the whole tree truncated one level shorter.
        let first = &tree.levels[1][0];
        let sub: Vec<Vec<u32>> = tree.levels[3]
            .iter()
            .filter(|a| a.digits[0] == first.digits[0])
            .map(|a| a.digits[1..].to_vec())
            .collect();
        let whole: Vec<Vec<u32>> = tree.levels[2].iter().map(|a| a.digits.clone()).collect();
        assert_eq!(sub, whole);
    }

    #[test]
    fn frostman_exact_unit_on_isolated_ancestor() {
        // N = 13, S = {0,1,3,9}: digit 3 has a full gap below it, and the
        // leftmost descendant of the digit-3 block sits at its left endpoint.
        let params = CantorParams::new(13, 4, 4.0).unwrap();
        let tree = build_self_similar(&[0, 1, 3, 9], params, 3).unwrap();
        let x = Rat::one() + Rat::new(3, 13); // digits (3,0,0)
        let r = Rat::new(1, 13);
        let mass = measure_of_interval(&tree, 3, x - r, x + r).unwrap();
        assert_eq!(mass, Rat::new(1, 4));
        let report = frostman_scan(&tree, 3, &[1, 2, 3]).unwrap();
        assert!(report.exact_unit_samples > 0);
        assert!(report.ratio_min <= Rat::one() && Rat::one() <= report.ratio_max);
    }

    #[test]
    fn frostman_radius_one_ratio_at_most_one() {
        let params = CantorParams::new(13, 4, 4.0).unwrap();
        let tree = build_self_similar(&[0, 1, 3, 9], params, 2).unwrap();
        // r = N^0 = 1 covers everything: mass <= 1 so ratio <= 1.
        let report = frostman_scan(&tree, 2, &[0]).unwrap();
        assert!(report.ratio_max <= Rat::one());
    }

    #[test]
    fn frostman_rejects_empty_grid() {
        let tree = build_self_similar(&[1, 2, 4], params7(), 2).unwrap();
        assert!(frostman_scan(&tree, 2, &[]).is_err());
    }
}
