//! Mechanism-design environments: players, finite type spaces with product
//! priors, and feasible-set families.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::limits;
use crate::rational::Rational;

/// Widest player set representable by [`PlayerSet`].
pub const MAX_PLAYERS: usize = 63;
const MAX_ITEMS: usize = 128;

/// A subset of players, bit `i` set when player `i` belongs to it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlayerSet(pub u64);

impl PlayerSet {
    pub const EMPTY: PlayerSet = PlayerSet(0);

    pub fn from_players(players: impl IntoIterator<Item = usize>) -> Self {
        PlayerSet(players.into_iter().fold(0, |m, i| m | (1u64 << i)))
    }

    pub fn all(n: usize) -> Self {
        PlayerSet(if n >= 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn contains(self, player: usize) -> bool {
        player < 64 && self.0 >> player & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn players(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.0 >> i & 1 == 1)
    }
}

impl fmt::Display for PlayerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = self.players().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", members.join(","))
    }
}

/// The collection of feasible player sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibleFamily {
    SingleItem,
    KUnit {
        k: usize,
    },
    PublicProject,
    /// One desired bundle per player; a set is feasible when its bundles are
    /// pairwise disjoint.
    SingleMinded {
        bundles: Vec<Vec<String>>,
    },
    /// One player per edge; feasible sets are the acyclic edge subsets.
    GraphicalMatroid {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    /// Taken verbatim.
    Explicit {
        sets: Vec<PlayerSet>,
    },
}

impl FeasibleFamily {
    pub fn kind(&self) -> &'static str {
        match self {
            FeasibleFamily::SingleItem => "single_item",
            FeasibleFamily::KUnit { .. } => "k_unit",
            FeasibleFamily::PublicProject => "public_project",
            FeasibleFamily::SingleMinded { .. } => "single_minded",
            FeasibleFamily::GraphicalMatroid { .. } => "graphical_matroid",
            FeasibleFamily::Explicit { .. } => "explicit",
        }
    }
}

/// One valuation index per player.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeProfile(pub Vec<usize>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationFailure {
    pub player: Option<usize>,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, player: Option<usize>, message: impl Into<String>) {
        self.failures.push(ValidationFailure {
            player,
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let parts: Vec<String> = self
            .failures
            .iter()
            .map(|e| match e.player {
                Some(i) => format!("player {i}: {}", e.message),
                None => e.message.clone(),
            })
            .collect();
        f.write_str(&parts.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Environment {
    supports: Vec<Vec<Rational>>,
    priors: Vec<Vec<Rational>>,
    family: FeasibleFamily,
}

impl Environment {
    /// Builds a validated environment.
    pub fn new(
        supports: Vec<Vec<Rational>>,
        priors: Vec<Vec<Rational>>,
        family: FeasibleFamily,
    ) -> Result<Self> {
        let env = Environment::from_parts_unchecked(supports, priors, family);
        let report = validate(&env);
        if report.is_ok() {
            Ok(env)
        } else {
            Err(Error::InvalidEnvironment(report))
        }
    }

    /// Skips validation; pair with [`validate`].
    pub fn from_parts_unchecked(
        supports: Vec<Vec<Rational>>,
        priors: Vec<Vec<Rational>>,
        family: FeasibleFamily,
    ) -> Self {
        Environment {
            supports,
            priors,
            family,
        }
    }

    /// Every player independently has value 0 or `stakes[i]` with probability 1/2.
    pub fn uniform_two_point(stakes: &[Rational], family: FeasibleFamily) -> Result<Self> {
        let half = Rational::new(1.into(), 2.into());
        let supports = stakes
            .iter()
            .map(|a| vec![Rational::zero(), a.clone()])
            .collect();
        let priors = stakes
            .iter()
            .map(|_| vec![half.clone(), half.clone()])
            .collect();
        Environment::new(supports, priors, family)
    }

    /// Every player draws uniformly from the same support.
    pub fn iid_uniform(
        players: usize,
        support: &[Rational],
        family: FeasibleFamily,
    ) -> Result<Self> {
        let p = Rational::new(1.into(), (support.len().max(1) as i64).into());
        Environment::new(
            vec![support.to_vec(); players],
            vec![vec![p; support.len()]; players],
            family,
        )
    }

    pub fn players(&self) -> usize {
        self.supports.len()
    }

    pub fn supports(&self) -> &[Vec<Rational>] {
        &self.supports
    }

    pub fn priors(&self) -> &[Vec<Rational>] {
        &self.priors
    }

    pub fn support(&self, player: usize) -> &[Rational] {
        &self.supports[player]
    }

    pub fn prior(&self, player: usize) -> &[Rational] {
        &self.priors[player]
    }

    pub fn family(&self) -> &FeasibleFamily {
        &self.family
    }

    pub fn is_single_item(&self) -> bool {
        self.family == FeasibleFamily::SingleItem
    }

    /// Number of type profiles, checked against the enumeration cap.
    pub fn profile_count(&self) -> Result<usize> {
        let count = self
            .supports
            .iter()
            .try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128))
            .unwrap_or(u128::MAX);
        limits::check_enumeration("type profiles", count)?;
        Ok(count as usize)
    }

    /// Decodes a profile index; player 0 varies fastest.
    pub fn profile_at(&self, mut index: usize) -> TypeProfile {
        let mut values = Vec::with_capacity(self.players());
        for support in &self.supports {
            values.push(index % support.len());
            index /= support.len();
        }
        TypeProfile(values)
    }

    pub fn profile_index(&self, profile: &TypeProfile) -> usize {
        profile
            .0
            .iter()
            .zip(&self.supports)
            .rev()
            .fold(0, |acc, (&k, s)| acc * s.len() + k)
    }

    /// All type profiles in index order.
    pub fn profiles(&self) -> Result<impl Iterator<Item = TypeProfile> + '_> {
        let count = self.profile_count()?;
        Ok((0..count).map(move |t| self.profile_at(t)))
    }

    /// Valuation of `player` under `profile`.
    pub fn value(&self, player: usize, profile: &TypeProfile) -> &Rational {
        &self.supports[player][profile.0[player]]
    }

    /// Probability of the other players' part of `profile`.
    pub fn others_probability(&self, player: usize, profile: &TypeProfile) -> Rational {
        let mut p = Rational::one();
        for (j, &k) in profile.0.iter().enumerate() {
            if j != player {
                p *= &self.priors[j][k];
            }
        }
        p
    }
}

/// Checks every environment invariant, collecting all failures.
pub fn validate(env: &Environment) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = env.supports.len();
    if n == 0 {
        report.fail(None, "at least one player is required");
    }
    if n > MAX_PLAYERS {
        report.fail(None, format!("at most {MAX_PLAYERS} players are supported"));
    }
    if env.priors.len() != n {
        report.fail(
            None,
            format!("{} supports but {} prior lists", n, env.priors.len()),
        );
    }
    for (i, support) in env.supports.iter().enumerate() {
        if support.is_empty() {
            report.fail(Some(i), "support is empty");
        }
        if support.iter().any(|v| v.is_negative()) {
            report.fail(Some(i), "negative valuation");
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            report.fail(Some(i), "support not strictly increasing");
        }
        let Some(prior) = env.priors.get(i) else {
            continue;
        };
        if prior.len() != support.len() {
            report.fail(
                Some(i),
                format!("{} values but {} probabilities", support.len(), prior.len()),
            );
        }
        if prior.iter().any(|p| !p.is_positive()) {
            report.fail(Some(i), "priors must be strictly positive");
        }
        let total: Rational = prior.iter().sum();
        if !total.is_one() {
            report.fail(Some(i), format!("priors sum ≠ 1 (sum is {total})"));
        }
    }
    match &env.family {
        FeasibleFamily::SingleItem | FeasibleFamily::PublicProject => {}
        FeasibleFamily::KUnit { k } => {
            if *k < 1 || *k > n {
                report.fail(None, format!("k-unit requires 1 ≤ k ≤ n, got k = {k}"));
            }
        }
        FeasibleFamily::SingleMinded { bundles } => {
            if bundles.len() != n {
                report.fail(None, format!("{} bundles for {} players", bundles.len(), n));
            }
            for (i, b) in bundles.iter().enumerate() {
                if b.is_empty() {
                    report.fail(Some(i), "bundle is empty");
                }
            }
            if item_universe(bundles).len() > MAX_ITEMS {
                report.fail(
                    None,
                    format!("at most {MAX_ITEMS} distinct items are supported"),
                );
            }
        }
        FeasibleFamily::GraphicalMatroid { vertices, edges } => {
            if edges.len() != n {
                report.fail(None, format!("{} edges for {} players", edges.len(), n));
            }
            for (i, &(u, w)) in edges.iter().enumerate() {
                if u >= *vertices || w >= *vertices {
                    report.fail(Some(i), "edge endpoint out of range");
                }
            }
        }
        FeasibleFamily::Explicit { sets } => {
            if sets.is_empty() {
                report.fail(None, "explicit family must be nonempty");
            }
            let all = PlayerSet::all(n);
            if sets.iter().any(|s| s.0 & !all.0 != 0) {
                report.fail(None, "explicit set names a nonexistent player");
            }
        }
    }
    report
}

/// `Π_i f_i(t_i)`.
pub fn profile_probability(env: &Environment, profile: &TypeProfile) -> Rational {
    profile
        .0
        .iter()
        .enumerate()
        .map(|(i, &k)| &env.priors[i][k])
        .product()
}

fn item_universe(bundles: &[Vec<String>]) -> BTreeMap<&str, usize> {
    let mut items = BTreeMap::new();
    for item in bundles.iter().flatten() {
        let next = items.len();
        items.entry(item.as_str()).or_insert(next);
    }
    items
}

fn bundle_masks(bundles: &[Vec<String>]) -> Vec<u128> {
    let items = item_universe(bundles);
    bundles
        .iter()
        .map(|b| {
            b.iter()
                .fold(0u128, |m, it| m | 1u128 << items[it.as_str()])
        })
        .collect()
}

/// The feasible family as an explicit list, sorted by bitmask.
pub fn feasible_sets(env: &Environment) -> Result<Vec<PlayerSet>> {
    let n = env.players();
    let mut sets = match env.family() {
        FeasibleFamily::SingleItem => {
            limits::check_enumeration("feasible sets", n as u128 + 1)?;
            std::iter::once(PlayerSet::EMPTY)
                .chain((0..n).map(|i| PlayerSet(1 << i)))
                .collect()
        }
        FeasibleFamily::PublicProject => vec![PlayerSet::EMPTY, PlayerSet::all(n)],
        FeasibleFamily::KUnit { k } => {
            let count: u128 = (0..=(*k).min(n)).map(|j| binomial(n, j)).sum();
            limits::check_enumeration("feasible sets", count)?;
            let mut out = Vec::with_capacity(count as usize);
            subsets_up_to(n, *k, 0, PlayerSet::EMPTY, &mut out);
            out
        }
        FeasibleFamily::SingleMinded { bundles } => {
            let masks = bundle_masks(bundles);
            let mut out = Vec::new();
            grow_family(n, &mut out, &mut |set, i| {
                set.players().all(|j| masks[j] & masks[i] == 0)
            })?;
            out
        }
        FeasibleFamily::GraphicalMatroid { vertices, edges } => {
            let mut out = Vec::new();
            grow_family(n, &mut out, &mut |set, i| {
                let mut chosen: Vec<(usize, usize)> = set.players().map(|j| edges[j]).collect();
                chosen.push(edges[i]);
                is_forest(*vertices, &chosen)
            })?;
            out
        }
        FeasibleFamily::Explicit { sets } => {
            limits::check_enumeration("feasible sets", sets.len() as u128)?;
            return Ok(sets.clone());
        }
    };
    sets.sort();
    Ok(sets)
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128)
}

fn subsets_up_to(n: usize, k: usize, start: usize, current: PlayerSet, out: &mut Vec<PlayerSet>) {
    out.push(current);
    if current.len() == k {
        return;
    }
    for i in start..n {
        subsets_up_to(n, k, i + 1, PlayerSet(current.0 | 1 << i), out);
    }
}

/// Depth-first growth of a downward-closed family: `admits(set, i)` says
/// whether player `i` may join the feasible `set`.
fn grow_family(
    n: usize,
    out: &mut Vec<PlayerSet>,
    admits: &mut dyn FnMut(PlayerSet, usize) -> bool,
) -> Result<()> {
    fn go(
        n: usize,
        start: usize,
        current: PlayerSet,
        out: &mut Vec<PlayerSet>,
        admits: &mut dyn FnMut(PlayerSet, usize) -> bool,
    ) -> Result<()> {
        out.push(current);
        limits::check_enumeration("feasible sets", out.len() as u128)?;
        for i in start..n {
            if admits(current, i) {
                go(n, i + 1, PlayerSet(current.0 | 1 << i), out, admits)?;
            }
        }
        Ok(())
    }
    go(n, 0, PlayerSet::EMPTY, out, admits)
}

/// Union-find cycle test over an edge list.
pub fn is_forest(vertices: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(u, w) in edges {
        let (ru, rw) = (find(&mut parent, u), find(&mut parent, w));
        if ru == rw {
            return false;
        }
        parent[ru] = rw;
    }
    true
}
