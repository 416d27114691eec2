//! Counting-reduction gadgets with exact brute-force oracles: partition via
//! Khintchine constants, directed s–t connectivity via expected matchings in
//! single-minded environments, and undirected connectivity via graphical
//! matroid welfare.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolpp::{khintchine, WeightVector};
use crate::error::{Error, Result};
use crate::limits;
use crate::model::{Environment, FeasibleFamily};
use crate::rational::{int, pow2, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multigraph {
    pub vertices: usize,
    #[serde(default)]
    pub directed: bool,
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(vertices: usize, directed: bool, edges: Vec<(usize, usize)>) -> Result<Self> {
        let g = Multigraph {
            vertices,
            directed,
            edges,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn undirected(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Multigraph::new(vertices, false, edges)
    }

    pub fn directed(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Multigraph::new(vertices, true, edges)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertices > 64 {
            return Err(Error::InvalidGraph(format!(
                "{} vertices; at most 64 supported",
                self.vertices
            )));
        }
        if let Some((i, &(u, w))) = self
            .edges
            .iter()
            .enumerate()
            .find(|(_, &(u, w))| u >= self.vertices || w >= self.vertices)
        {
            return Err(Error::InvalidGraph(format!(
                "edge {i} = ({u}, {w}) has an endpoint out of range"
            )));
        }
        Ok(())
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn check_vertex(&self, v: usize, name: &str) -> Result<()> {
        if v >= self.vertices {
            return Err(Error::InvalidGraph(format!("{name} = {v} is not a vertex")));
        }
        Ok(())
    }

    fn require_undirected(&self) -> Result<()> {
        if self.directed {
            return Err(Error::InvalidGraph(
                "this operation needs an undirected graph".into(),
            ));
        }
        Ok(())
    }

    /// One player per edge, bundle = endpoints, values uniform on `{0, 1}`.
    /// Self-loops are rejected: they would be one-item bundles, not matching edges.
    pub fn single_minded_environment(&self) -> Result<Environment> {
        if let Some(i) = self.edges.iter().position(|&(u, w)| u == w) {
            return Err(Error::InvalidGraph(format!("edge {i} is a self-loop")));
        }
        let bundles = self
            .edges
            .iter()
            .map(|&(u, w)| vec![format!("v{u}"), format!("v{w}")])
            .collect();
        Environment::uniform_two_point(
            &vec![Rational::one(); self.edges.len()],
            FeasibleFamily::SingleMinded { bundles },
        )
    }

    /// One player per edge of the graphical matroid, values uniform on `{0, 1}`.
    pub fn matroid_environment(&self) -> Result<Environment> {
        self.require_undirected()?;
        Environment::uniform_two_point(
            &vec![Rational::one(); self.edges.len()],
            FeasibleFamily::GraphicalMatroid {
                vertices: self.vertices,
                edges: self.edges.clone(),
            },
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionInstance {
    w: Vec<u64>,
}

impl PartitionInstance {
    pub fn new(w: Vec<u64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidInput(
                "a partition instance needs at least one integer".into(),
            ));
        }
        if let Some(i) = w.iter().position(|&v| v == 0) {
            return Err(Error::InvalidInput(format!("w[{i}] must be positive")));
        }
        Ok(PartitionInstance { w })
    }

    pub fn weights(&self) -> &[u64] {
        &self.w
    }
}

/// `a_0 = (2w_1, …, 2w_n, 0)` and `a_1 = (2w_1, …, 2w_n, 1)`.
pub fn partition_gadget(p: &PartitionInstance) -> (WeightVector, WeightVector) {
    let doubled: Vec<Rational> =
        p.w.iter()
            .map(|&v| Rational::from_integer(BigInt::from(v) * 2))
            .collect();
    let with_last = |last: i64| {
        let mut a = doubled.clone();
        a.push(int(last));
        WeightVector::new(a)
    };
    (with_last(0), with_last(1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionCount {
    /// `K(a_1) − K(a_0)`.
    pub probability: Rational,
    pub count: BigInt,
    pub brute_force: u64,
}

/// Number of balanced sign patterns `x ∈ {±1}^n` with `w · x = 0`.
pub fn balanced_sign_patterns(p: &PartitionInstance) -> Result<u64> {
    let count = limits::check_power_of_two("sign patterns", p.w.len())?;
    let w: Vec<i128> = p.w.iter().map(|&v| v as i128).collect();
    let total: i128 = w.iter().sum();
    Ok((0..count as u64)
        .into_par_iter()
        .filter(|x| {
            let negative: i128 = w
                .iter()
                .enumerate()
                .filter(|(i, _)| x >> i & 1 == 1)
                .map(|(_, v)| v)
                .sum();
            total == 2 * negative
        })
        .count() as u64)
}

pub fn partition_count_via_khintchine(p: &PartitionInstance) -> Result<PartitionCount> {
    let (a0, a1) = partition_gadget(p);
    let probability = khintchine(&a1)? - khintchine(&a0)?;
    let scaled = &probability * pow2(p.w.len());
    if !scaled.is_integer() {
        return Err(Error::IdentityViolated(format!(
            "{probability} · 2^n is not an integer"
        )));
    }
    let count = scaled.to_integer();
    let brute_force = balanced_sign_patterns(p)?;
    if count != BigInt::from(brute_force) {
        return Err(Error::IdentityViolated(format!(
            "Khintchine count {count} differs from brute force {brute_force}"
        )));
    }
    Ok(PartitionCount {
        probability,
        count,
        brute_force,
    })
}

/// Maximum matching size of every edge subset, indexed by subset mask.
///
/// `M(S) = max(M(S − e), 1 + M(S ∩ disjoint(e)))` for the highest edge `e ∈ S`.
fn matching_table(edges: &[(usize, usize)]) -> Result<Vec<u8>> {
    let size = limits::check_power_of_two("edge subsets", edges.len())?;
    let disjoint: Vec<usize> = edges
        .iter()
        .map(|&(u, w)| {
            edges
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| a != u && a != w && b != u && b != w)
                .fold(0usize, |mask, (j, _)| mask | 1 << j)
        })
        .collect();
    let mut table = vec![0u8; size];
    for s in 1..size {
        let e = usize::BITS as usize - 1 - s.leading_zeros() as usize;
        let rest = s & !(1 << e);
        let (u, w) = edges[e];
        table[s] = if u == w {
            table[rest]
        } else {
            table[rest].max(1 + table[s & disjoint[e]])
        };
    }
    Ok(table)
}

/// Expected maximum-matching size over uniformly random edge subsets.
pub fn expected_max_matching(h: &Multigraph) -> Result<Rational> {
    h.validate()?;
    let table = matching_table(&h.edges)?;
    let total: u64 = table.par_iter().map(|&v| v as u64).sum();
    Ok(Rational::new(total.into(), BigInt::from(table.len())))
}

fn reaches(directed: bool, edges: &[(usize, usize)], mask: u64, s: usize, t: usize) -> bool {
    let mut seen = 1u64 << s;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0u64;
        for (j, &(u, w)) in edges.iter().enumerate() {
            if mask >> j & 1 == 0 {
                continue;
            }
            if frontier >> u & 1 == 1 {
                next |= 1 << w;
            }
            if !directed && frontier >> w & 1 == 1 {
                next |= 1 << u;
            }
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen >> t & 1 == 1
}

/// Probability that `t` is reachable from `s` in a uniformly random edge subset.
pub fn stconn_probability(g: &Multigraph, s: usize, t: usize) -> Result<Rational> {
    g.validate()?;
    g.check_vertex(s, "s")?;
    g.check_vertex(t, "t")?;
    let size = limits::check_power_of_two("edge subsets", g.edges.len())?;
    let hits = (0..size as u64)
        .into_par_iter()
        .filter(|&mask| reaches(g.directed, &g.edges, mask, s, t))
        .count();
    Ok(Rational::new(hits.into(), size.into()))
}

fn components(vertices: usize, edges: &[(usize, usize)], mask: u64) -> u64 {
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut count = vertices as u64;
    for (j, &(u, w)) in edges.iter().enumerate() {
        if mask >> j & 1 == 1 {
            let (ru, rw) = (find(&mut parent, u), find(&mut parent, w));
            if ru != rw {
                parent[ru] = rw;
                count -= 1;
            }
        }
    }
    count
}

/// Expected number of connected components of a uniformly random edge subgraph.
pub fn expected_components(g: &Multigraph) -> Result<Rational> {
    g.validate()?;
    g.require_undirected()?;
    let size = limits::check_power_of_two("edge subsets", g.edges.len())?;
    let total: u64 = (0..size as u64)
        .into_par_iter()
        .map(|mask| components(g.vertices, &g.edges, mask))
        .sum();
    Ok(Rational::new(total.into(), size.into()))
}

/// `|V| − E[components]`, the expected size of a spanning forest.
pub fn expected_forest_size(g: &Multigraph) -> Result<Rational> {
    Ok(int(g.vertices as i64) - expected_components(g)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatroidCheck {
    pub c1: Rational,
    pub c2: Rational,
    pub p: Rational,
    /// `C1 − C2 = (1 − p)/2`.
    pub identity_holds: bool,
}

pub fn matroid_gadget_check(g: &Multigraph, s: usize, t: usize) -> Result<MatroidCheck> {
    g.require_undirected()?;
    g.check_vertex(s, "s")?;
    g.check_vertex(t, "t")?;
    let c1 = expected_components(g)?;
    let mut extended = g.clone();
    extended.edges.push((s, t));
    let c2 = expected_components(&extended)?;
    let p = stconn_probability(g, s, t)?;
    let identity_holds = &c1 - &c2 == (Rational::one() - &p) / int(2);
    Ok(MatroidCheck {
        c1,
        c2,
        p,
        identity_holds,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct StconnGadget {
    /// Bipartite graph with `L = {s} ∪ [n]` at indices `0..=n` and
    /// `R = [n] ∪ {t}` at indices `n+1..=2n+1`.
    pub h: Multigraph,
    /// Vertex of `g` carrying each internal label `1..=n`.
    pub internal: Vec<usize>,
    /// The first `red` edges of `h` are red; the rest are blue.
    pub red: usize,
    pub k: usize,
    /// Edge count of `g`.
    pub m: usize,
}

impl StconnGadget {
    pub fn n(&self) -> usize {
        self.internal.len()
    }

    pub fn environment(&self) -> Result<Environment> {
        self.h.single_minded_environment()
    }
}

fn stconn_inputs(g: &Multigraph, s: usize, t: usize) -> Result<()> {
    g.validate()?;
    if !g.directed {
        return Err(Error::InvalidGraph(
            "the s–t gadget needs a directed graph".into(),
        ));
    }
    g.check_vertex(s, "s")?;
    g.check_vertex(t, "t")?;
    if s == t {
        return Err(Error::InvalidGraph("s and t must differ".into()));
    }
    Ok(())
}

/// Builds the bipartite gadget with `k` parallel blue edges per internal
/// vertex. Edges into `s`, out of `t`, and self-loops cannot lie on a simple
/// s–t path and get no red edge.
pub fn stconn_gadget(g: &Multigraph, s: usize, t: usize, k: usize) -> Result<StconnGadget> {
    stconn_inputs(g, s, t)?;
    let internal: Vec<usize> = (0..g.vertices).filter(|&v| v != s && v != t).collect();
    let n = internal.len();
    let label = |v: usize| internal.iter().position(|&u| u == v).map(|i| i + 1);
    let left = |v: usize| if v == s { Some(0) } else { label(v) };
    let right = |v: usize| {
        if v == t {
            Some(2 * n + 1)
        } else {
            label(v).map(|i| n + i)
        }
    };
    let mut edges: Vec<(usize, usize)> = g
        .edges
        .iter()
        .filter(|&&(u, w)| u != w)
        .filter_map(|&(u, w)| Some((left(u)?, right(w)?)))
        .collect();
    let red = edges.len();
    for i in 1..=n {
        edges.extend(std::iter::repeat_n((i, n + i), k));
    }
    Ok(StconnGadget {
        h: Multigraph::undirected(2 * n + 2, edges)?,
        internal,
        red,
        k,
        m: g.edges.len(),
    })
}

/// `E[M]` on the gadget, conditioning on which internal vertices keep at
/// least one blue edge (probability `1 − 2^{−k}` each) instead of
/// enumerating blue subsets.
pub fn gadget_expected_matching(gadget: &StconnGadget) -> Result<Rational> {
    let n = gadget.n();
    let mut edges = gadget.h.edges[..gadget.red].to_vec();
    edges.extend((1..=n).map(|i| (i, n + i)));
    let table = matching_table(&edges)?;
    let red_subsets = 1usize << gadget.red;
    // Integer weight of b surviving blue classes, over a common 2^{kn} denominator.
    let lost = BigInt::one();
    let kept = (BigInt::one() << gadget.k) - 1u32;
    let weights: Vec<BigInt> = (0..=n)
        .map(|b| num_traits::pow(kept.clone(), b) * num_traits::pow(lost.clone(), n - b))
        .collect();
    let mut by_blue = vec![0u64; n + 1];
    let mut totals = vec![0u64; 1 << n];
    for (mask, &v) in table.iter().enumerate() {
        totals[mask >> gadget.red] += v as u64;
    }
    for (blue, total) in totals.iter().enumerate() {
        by_blue[blue.count_ones() as usize] += total;
    }
    let numerator: BigInt = by_blue.iter().zip(&weights).map(|(&c, w)| w * c).sum();
    let denominator = BigInt::from(red_subsets) << (gadget.k * n);
    Ok(Rational::new(numerator, denominator))
}

/// Smallest blue multiplicity accepted for `m` edges and `n` internal vertices.
///
/// Beyond `k > mn`, the recovery also needs the deficit `n/2^k` below
/// `1/2^m`, which only binds when `m = 0`.
pub fn minimum_multiplicity(m: usize, n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let bits = usize::BITS as usize - n.leading_zeros() as usize;
    (m * n + 1).max(m + bits)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StconnRecovery {
    pub expected_matching: Rational,
    /// `E[M] − n`.
    pub remainder: Rational,
    pub p: Rational,
    pub brute_force: Rational,
    pub check: bool,
    /// `n + p − mn/2^k ≤ E[M] ≤ n + p` with the brute-force `p`.
    pub sandwich_holds: bool,
    pub k: usize,
    pub m: usize,
    pub n: usize,
}

/// Recovers the s–t connection probability of `g` from the gadget's expected
/// maximum matching by rounding `E[M] − n` up to a multiple of `1/2^m`.
pub fn stconn_recover(
    g: &Multigraph,
    s: usize,
    t: usize,
    k: Option<usize>,
) -> Result<StconnRecovery> {
    stconn_inputs(g, s, t)?;
    let m = g.edges.len();
    let n = g.vertices - 2;
    let bound = minimum_multiplicity(m, n);
    let k = k.unwrap_or(bound);
    if k < bound {
        return Err(Error::InsufficientMultiplicity { k, bound });
    }
    let gadget = stconn_gadget(g, s, t, k)?;
    let expected_matching = gadget_expected_matching(&gadget)?;
    let n_r = int(n as i64);
    let remainder = &expected_matching - &n_r;
    let scale = pow2(m);
    let scaled = &remainder * &scale;
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let ceil = if r.is_zero() || r < BigInt::zero() {
        q
    } else {
        q + 1
    };
    let p = Rational::new(ceil, scale.to_integer());
    let brute_force = stconn_probability(g, s, t)?;
    let slack = Rational::new(BigInt::from(m * n), BigInt::one() << k);
    let upper = &n_r + &brute_force;
    let sandwich_holds = expected_matching <= upper && &upper - &slack <= expected_matching;
    Ok(StconnRecovery {
        check: p == brute_force,
        expected_matching,
        remainder,
        p,
        brute_force,
        sandwich_holds,
        k,
        m,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn ws(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn partition_examples() {
        let (a0, a1) = partition_gadget(&PartitionInstance::new(vec![1, 1]).unwrap());
        assert_eq!(a0.weights, ws(&[2, 2, 0]));
        assert_eq!(a1.weights, ws(&[2, 2, 1]));
        let (a0, a1) = partition_gadget(&PartitionInstance::new(vec![1, 2, 3]).unwrap());
        assert_eq!(a0.weights, ws(&[2, 4, 6, 0]));
        assert_eq!(a1.weights, ws(&[2, 4, 6, 1]));

        let count = |w: Vec<u64>| {
            partition_count_via_khintchine(&PartitionInstance::new(w).unwrap()).unwrap()
        };
        let c = count(vec![1, 1]);
        assert_eq!((c.probability, c.count), (rat(1, 2), BigInt::from(2)));
        let c = count(vec![1, 2]);
        assert_eq!((c.probability, c.count), (int(0), BigInt::from(0)));
        // Only x_1 = x_2 = −x_3 balances.
        let c = count(vec![1, 1, 2]);
        assert_eq!((c.probability, c.count), (rat(1, 4), BigInt::from(2)));
        assert!(PartitionInstance::new(vec![]).is_err());
        assert!(PartitionInstance::new(vec![1, 0]).is_err());
    }

    #[test]
    fn matching_examples() {
        let g = |edges: Vec<(usize, usize)>| Multigraph::undirected(3, edges).unwrap();
        assert_eq!(expected_max_matching(&g(vec![(0, 1)])).unwrap(), rat(1, 2));
        assert_eq!(
            expected_max_matching(&g(vec![(0, 1), (1, 2)])).unwrap(),
            rat(3, 4)
        );
        assert_eq!(
            expected_max_matching(&g(vec![(0, 1), (1, 2), (0, 2)])).unwrap(),
            rat(7, 8)
        );
        assert_eq!(expected_max_matching(&g(vec![(1, 1)])).unwrap(), int(0));
        let square = Multigraph::undirected(4, vec![(0, 1), (2, 3), (1, 2)]).unwrap();
        // Subsets containing both (0,1) and (2,3) match 2.
        assert_eq!(expected_max_matching(&square).unwrap(), rat(9, 8));
    }

    #[test]
    fn connectivity_examples() {
        let single = Multigraph::directed(2, vec![(0, 1)]).unwrap();
        assert_eq!(stconn_probability(&single, 0, 1).unwrap(), rat(1, 2));
        assert_eq!(stconn_probability(&single, 1, 0).unwrap(), int(0));
        let parallel = Multigraph::undirected(2, vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(stconn_probability(&parallel, 0, 1).unwrap(), rat(3, 4));
        let series = Multigraph::undirected(3, vec![(0, 2), (2, 1)]).unwrap();
        assert_eq!(stconn_probability(&series, 0, 1).unwrap(), rat(1, 4));
    }

    #[test]
    fn component_examples() {
        let k2 = Multigraph::undirected(2, vec![(0, 1)]).unwrap();
        assert_eq!(expected_components(&k2).unwrap(), rat(3, 2));
        assert_eq!(expected_forest_size(&k2).unwrap(), rat(1, 2));
        let doubled = Multigraph::undirected(2, vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(expected_components(&doubled).unwrap(), rat(5, 4));
        let empty = Multigraph::undirected(4, vec![]).unwrap();
        assert_eq!(expected_components(&empty).unwrap(), int(4));
        assert_eq!(expected_forest_size(&empty).unwrap(), int(0));
        assert!(expected_components(&Multigraph::directed(2, vec![(0, 1)]).unwrap()).is_err());
    }

    #[test]
    fn matroid_examples() {
        let k2 = Multigraph::undirected(2, vec![(0, 1)]).unwrap();
        let r = matroid_gadget_check(&k2, 0, 1).unwrap();
        assert_eq!(
            (r.c1, r.c2, r.p, r.identity_holds),
            (rat(3, 2), rat(5, 4), rat(1, 2), true)
        );

        let path = Multigraph::undirected(3, vec![(0, 2), (2, 1)]).unwrap();
        let r = matroid_gadget_check(&path, 0, 1).unwrap();
        assert_eq!(&r.c1 - &r.c2, rat(3, 8));
        assert!(r.identity_holds);

        let empty = Multigraph::undirected(2, vec![]).unwrap();
        let r = matroid_gadget_check(&empty, 0, 1).unwrap();
        assert_eq!(
            (r.c1, r.c2, r.p, r.identity_holds),
            (int(2), rat(3, 2), int(0), true)
        );
    }

    #[test]
    fn gadget_construction() {
        let single = Multigraph::directed(2, vec![(0, 1)]).unwrap();
        let gadget = stconn_gadget(&single, 0, 1, 5).unwrap();
        assert_eq!(gadget.h.edges, vec![(0, 1)]);
        assert_eq!(gadget.n(), 0);

        let g = Multigraph::directed(3, vec![(0, 2), (2, 1), (0, 1)]).unwrap();
        let gadget = stconn_gadget(&g, 0, 1, 10).unwrap();
        assert_eq!(gadget.red, 3);
        assert_eq!(gadget.h.edges.len(), 13);
        assert_eq!(&gadget.h.edges[..3], &[(0, 2), (1, 3), (0, 3)]);

        let empty = Multigraph::directed(2, vec![]).unwrap();
        assert!(stconn_gadget(&empty, 0, 1, 3).unwrap().h.edges.is_empty());
    }

    #[test]
    fn analytic_matching_matches_enumeration() {
        let g = Multigraph::directed(4, vec![(0, 2), (2, 3), (3, 1), (0, 3), (2, 1)]).unwrap();
        for k in 1..=3 {
            let gadget = stconn_gadget(&g, 0, 1, k).unwrap();
            assert_eq!(
                gadget_expected_matching(&gadget).unwrap(),
                expected_max_matching(&gadget.h).unwrap()
            );
        }
    }

    #[test]
    fn recovery_examples() {
        let single = Multigraph::directed(2, vec![(0, 1)]).unwrap();
        let r = stconn_recover(&single, 0, 1, None).unwrap();
        assert_eq!(
            (r.expected_matching, r.p.clone(), r.check),
            (rat(1, 2), rat(1, 2), true)
        );

        let g = Multigraph::directed(3, vec![(0, 2), (2, 1), (0, 1)]).unwrap();
        let r = stconn_recover(&g, 0, 1, Some(12)).unwrap();
        assert_eq!(r.p, rat(5, 8));
        assert!(r.check && r.sandwich_holds);

        let apart = Multigraph::directed(3, vec![(2, 0), (1, 2)]).unwrap();
        let r = stconn_recover(&apart, 0, 1, None).unwrap();
        assert_eq!(r.p, int(0));
        assert!(r.check);

        assert!(matches!(
            stconn_recover(&g, 0, 1, Some(3)),
            Err(Error::InsufficientMultiplicity { k: 3, bound: 4 })
        ));
        let isolated = Multigraph::directed(5, vec![]).unwrap();
        let r = stconn_recover(&isolated, 0, 1, None).unwrap();
        assert_eq!(r.p, int(0));
        assert!(r.check);
    }

    #[test]
    fn welfare_oracles_agree() {
        use crate::optimize::opt_wel;
        let h = Multigraph::undirected(4, vec![(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        assert_eq!(
            opt_wel(&h.single_minded_environment().unwrap()).unwrap(),
            expected_max_matching(&h).unwrap()
        );
        assert_eq!(
            opt_wel(&h.matroid_environment().unwrap()).unwrap(),
            expected_forest_size(&h).unwrap()
        );
    }
}
