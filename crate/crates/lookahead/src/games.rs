//! Constructors for the game families under study: symmetric network
//! congestion games from composition terms, cost-sharing games, consensus
//! games, and seeded random generators for the property suites.

use crate::model::{
    Action, CongestionGame, DelayTable, Monotonicity, PlayerId, ResourceId,
};
use crate::network::{random_term_with, SPTerm};
use crate::rational::Rational;
use crate::solver::SequentialGame;
use crate::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub const DEFAULT_PATH_BUDGET: usize = 4096;

/// Symmetric game whose shared action set is the od-path set of `term`.
pub fn sncg_from_term(
    term: &SPTerm,
    delays: &BTreeMap<String, DelayTable>,
    n_players: usize,
) -> Result<CongestionGame> {
    let resources = term.resources();
    let paths = term.enumerate_paths(DEFAULT_PATH_BUDGET)?;
    let tables = resources
        .iter()
        .map(|r| {
            delays
                .get(r)
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("no delay table for resource {r}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let index: BTreeMap<&str, ResourceId> = resources
        .iter()
        .enumerate()
        .map(|(i, r)| (r.as_str(), i))
        .collect();
    let actions: Vec<Action> = paths
        .iter()
        .map(|p| Action::new(p.iter().map(|r| index[r.as_str()]).collect()))
        .collect();
    CongestionGame::new(
        (0..n_players).collect(),
        resources,
        vec![actions; n_players],
        tables,
    )
}

/// Delay specification of a cost-sharing game: either explicit non-increasing
/// tables or coefficients of `d(x) = a/x + b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CostSharingSpec {
    Tables(Vec<DelayTable>),
    /// `(a, b)` per resource with `a, b >= 0`.
    Axb(Vec<(Rational, Rational)>),
}

impl CostSharingSpec {
    /// Materializes one non-increasing table per resource covering `len`
    /// congestion levels.
    pub fn tables(&self, len: usize) -> Result<Vec<DelayTable>> {
        match self {
            CostSharingSpec::Tables(tables) => {
                for t in tables {
                    if t.monotonicity() != Monotonicity::NonIncreasing {
                        return Err(Error::NotCostSharing);
                    }
                    if t.len() < len {
                        return Err(Error::TableTooShort { want: len, have: t.len() });
                    }
                }
                Ok(tables.clone())
            }
            CostSharingSpec::Axb(coeffs) => coeffs
                .iter()
                .map(|(a, b)| {
                    if a.is_negative() || b.is_negative() {
                        return Err(Error::NotCostSharing);
                    }
                    let values = (1..=len)
                        .map(|x| &(a / &Rational::from(x)) + b)
                        .collect();
                    DelayTable::non_increasing(values)
                })
                .collect(),
        }
    }
}

/// Congestion game flagged cost-sharing; rejects increasing delay tables.
pub fn cost_sharing_game(
    spec: &CostSharingSpec,
    resources: Vec<String>,
    action_sets: Vec<Vec<Action>>,
    n_players: usize,
) -> Result<CongestionGame> {
    let tables = spec.tables(n_players)?;
    if tables.len() != resources.len() {
        return Err(Error::Invalid("one delay spec per resource required".into()));
    }
    Ok(CongestionGame::new(
        (0..n_players).collect(),
        resources,
        action_sets,
        tables,
    )?
    .with_cost_sharing_flag())
}

/// Binary choice of a consensus-game player.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Choice {
    L,
    R,
}

impl Choice {
    pub fn other(self) -> Choice {
        match self {
            Choice::L => Choice::R,
            Choice::R => Choice::L,
        }
    }
}

/// Players on a weighted undirected graph choose L or R and pay the weight of
/// every disagreeing incident edge.
#[derive(Clone, Debug)]
pub struct ConsensusGame {
    n_players: usize,
    /// `(i, j)` with `i < j`, positive weight.
    edges: Vec<(usize, usize, Rational)>,
}

impl ConsensusGame {
    pub fn new(n_players: usize, edges: Vec<(usize, usize, Rational)>) -> Result<Self> {
        let mut canon = Vec::new();
        for (i, j, w) in edges {
            if i == j {
                return Err(Error::Invalid(format!("self-loop at vertex {i}")));
            }
            if i >= n_players || j >= n_players {
                return Err(Error::Invalid("edge endpoint out of range".into()));
            }
            if w.is_negative() {
                return Err(Error::Invalid("negative edge weight".into()));
            }
            if !w.is_zero() {
                canon.push((i.min(j), i.max(j), w));
            }
        }
        canon.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        Ok(ConsensusGame { n_players, edges: canon })
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn edges(&self) -> &[(usize, usize, Rational)] {
        &self.edges
    }

    pub fn cost(&self, outcome: &[Choice], player: usize) -> Rational {
        let mut cost = Rational::zero();
        for (i, j, w) in &self.edges {
            if (*i == player || *j == player) && outcome[*i] != outcome[*j] {
                cost += w;
            }
        }
        cost
    }

    pub fn social_cost(&self, outcome: &[Choice]) -> Rational {
        (0..self.n_players).map(|i| self.cost(outcome, i)).sum()
    }

    pub fn is_nash(&self, outcome: &[Choice]) -> bool {
        (0..self.n_players).all(|i| {
            let mut flipped = outcome.to_vec();
            flipped[i] = flipped[i].other();
            self.cost(outcome, i) <= self.cost(&flipped, i)
        })
    }

    /// Optimal outcomes are exactly the unanimous ones (social cost zero).
    pub fn is_optimal(&self, outcome: &[Choice]) -> bool {
        self.social_cost(outcome).is_zero()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|(i, j, _)| {
                if *i == v {
                    Some(*j)
                } else if *j == v {
                    Some(*i)
                } else {
                    None
                }
            })
            .collect()
    }

    /// An order is tree respecting iff every non-first player has a neighbor
    /// earlier in the order.
    pub fn is_tree_respecting(&self, order: &[usize]) -> bool {
        order.iter().enumerate().skip(1).all(|(k, &v)| {
            let earlier = &order[..k];
            self.neighbors(v).iter().any(|u| earlier.contains(u))
        })
    }
}

/// Sequential view of a consensus game: partial costs count disagreement
/// weights among the already-moved players only.
pub struct ConsensusView<'a> {
    game: &'a ConsensusGame,
    order: Vec<usize>,
}

pub fn consensus_view<'a>(game: &'a ConsensusGame, order: &[usize]) -> Result<ConsensusView<'a>> {
    let mut seen = vec![false; game.n_players()];
    for &v in order {
        if v >= game.n_players() || seen[v] {
            return Err(Error::Invalid("order is not a permutation of the vertices".into()));
        }
        seen[v] = true;
    }
    if order.len() != game.n_players() {
        return Err(Error::Invalid("order must cover all vertices".into()));
    }
    Ok(ConsensusView { game, order: order.to_vec() })
}

impl ConsensusView<'_> {
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Translates an index outcome (0 = L, 1 = R by position) into a
    /// per-vertex choice vector.
    pub fn to_choices(&self, outcome: &[usize]) -> Vec<Choice> {
        let mut choices = vec![Choice::L; self.game.n_players()];
        for (pos, &a) in outcome.iter().enumerate() {
            choices[self.order[pos]] = if a == 0 { Choice::L } else { Choice::R };
        }
        choices
    }
}

impl SequentialGame for ConsensusView<'_> {
    fn len(&self) -> usize {
        self.game.n_players()
    }

    fn n_actions(&self, _pos: usize) -> usize {
        2
    }

    fn partial_cost(&self, prefix: &[usize], pos: usize) -> Rational {
        let me = self.order[pos];
        let placed: BTreeMap<usize, usize> = prefix
            .iter()
            .enumerate()
            .map(|(q, &a)| (self.order[q], a))
            .collect();
        let mine = placed[&me];
        let mut cost = Rational::zero();
        for (i, j, w) in &self.game.edges {
            let other = if *i == me {
                *j
            } else if *j == me {
                *i
            } else {
                continue;
            };
            if let Some(&theirs) = placed.get(&other) {
                if theirs != mine {
                    cost += w;
                }
            }
        }
        cost
    }
}

/// Per-resource member sets `N_r` and the argmin resources of
/// `d_r(|N_r|)` for a singleton game.
#[derive(Clone, Debug)]
pub struct SingletonStructure {
    /// `(resource, players that can choose it)` for every resource chosen by
    /// at least one player.
    pub members: Vec<(ResourceId, Vec<PlayerId>)>,
    /// Resources minimizing `d_r(|N_r|)`; set-valued on ties.
    pub minimizers: Vec<ResourceId>,
}

pub fn singleton_structure(game: &CongestionGame) -> Result<SingletonStructure> {
    if !game.is_singleton() {
        return Err(Error::Invalid("non-singleton action present".into()));
    }
    let mut members: BTreeMap<ResourceId, Vec<PlayerId>> = BTreeMap::new();
    for &p in game.players() {
        for action in game.actions_of(p)? {
            members.entry(action.resources()[0]).or_default().push(p);
        }
    }
    let mut best: Option<Rational> = None;
    let mut minimizers = Vec::new();
    for (&r, players) in &members {
        let value = game.delay(r).value(players.len())?.clone();
        match &best {
            Some(b) if value > *b => {}
            Some(b) if value == *b => minimizers.push(r),
            _ => {
                best = Some(value);
                minimizers = vec![r];
            }
        }
    }
    Ok(SingletonStructure {
        members: members.into_iter().collect(),
        minimizers,
    })
}

// ---------------------------------------------------------------------------
// Seeded random instance generators.
// ---------------------------------------------------------------------------

/// Granularity of random delay values. `Fine` draws from a dense grid so
/// instances are almost surely generic; `Coarse` draws small integers so ties
/// occur regularly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DelayStyle {
    Fine,
    Coarse,
}

fn random_non_decreasing(rng: &mut impl Rng, len: usize, style: DelayStyle) -> DelayTable {
    let mut values = Vec::with_capacity(len);
    let mut current = match style {
        DelayStyle::Fine => Rational::new(rng.gen_range(1..=2000), 100),
        DelayStyle::Coarse => Rational::int(rng.gen_range(1..=5)),
    };
    for _ in 0..len {
        values.push(current.clone());
        let bump = match style {
            DelayStyle::Fine => Rational::new(rng.gen_range(0..=2000), 100),
            DelayStyle::Coarse => Rational::int(rng.gen_range(0..=3)),
        };
        current = &current + &bump;
    }
    // keep values within the advertised <= 100 range
    let cap = Rational::int(100);
    for v in values.iter_mut() {
        if *v > cap {
            *v = cap.clone();
        }
    }
    DelayTable::non_decreasing(values).expect("constructed non-decreasing")
}

fn random_non_increasing(rng: &mut impl Rng, len: usize, style: DelayStyle) -> DelayTable {
    let mut values = Vec::with_capacity(len);
    let mut current = match style {
        DelayStyle::Fine => Rational::new(rng.gen_range(100..=10000), 100),
        DelayStyle::Coarse => Rational::int(rng.gen_range(2..=8)),
    };
    for _ in 0..len {
        values.push(current.clone());
        let drop = match style {
            DelayStyle::Fine => Rational::new(rng.gen_range(0..=1000), 100),
            DelayStyle::Coarse => Rational::int(rng.gen_range(0..=2)),
        };
        current = if &current - &drop > Rational::zero() {
            &current - &drop
        } else {
            current.clone()
        };
    }
    DelayTable::non_increasing(values).expect("constructed non-increasing")
}

/// Random SNCG on a random SP (or EP) term. Tables cover `n + 1` congestion
/// levels so opportunity costs are defined on the full game.
pub fn random_sncg(
    rng: &mut impl Rng,
    term_size: usize,
    n_players: usize,
    ep_only: bool,
    style: DelayStyle,
) -> Result<(SPTerm, CongestionGame)> {
    let mut counter = 0usize;
    let term = random_term_with(rng, term_size, ep_only, &mut counter);
    let delays: BTreeMap<String, DelayTable> = term
        .resources()
        .into_iter()
        .map(|r| (r, random_non_decreasing(rng, n_players + 1, style)))
        .collect();
    let game = sncg_from_term(&term, &delays, n_players)?;
    Ok((term, game))
}

/// Random SNCG resampled until it passes the exact genericity check.
pub fn random_generic_sncg(
    seed: u64,
    term_size: usize,
    n_players: usize,
    ep_only: bool,
    genericity_budget: usize,
) -> Result<(SPTerm, CongestionGame)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..40 {
        let (term, game) = random_sncg(&mut rng, term_size, n_players, ep_only, DelayStyle::Fine)?;
        if game.is_generic(genericity_budget)?.is_ok() {
            return Ok((term, game));
        }
    }
    Err(Error::PerturbationFailed(
        "no generic instance found within retry budget".into(),
    ))
}

/// Random symmetric cost-sharing game over explicit resource subsets.
pub fn random_cost_sharing(
    rng: &mut impl Rng,
    n_players: usize,
    n_resources: usize,
    axb: bool,
) -> Result<CongestionGame> {
    let resources: Vec<String> = (0..n_resources).map(|i| format!("r{i}")).collect();
    let spec = if axb {
        CostSharingSpec::Axb(
            (0..n_resources)
                .map(|_| {
                    (
                        Rational::new(rng.gen_range(0..=4000), 100),
                        Rational::new(rng.gen_range(0..=2000), 100),
                    )
                })
                .collect(),
        )
    } else {
        CostSharingSpec::Tables(
            (0..n_resources)
                .map(|_| random_non_increasing(rng, n_players, DelayStyle::Fine))
                .collect(),
        )
    };
    // random non-empty shared action set of singletons and pairs
    let mut actions: Vec<Action> = Vec::new();
    for r in 0..n_resources {
        if rng.gen_bool(0.8) {
            actions.push(Action::singleton(r));
        }
    }
    if n_resources >= 2 && rng.gen_bool(0.4) {
        let a = rng.gen_range(0..n_resources);
        let b = (a + 1 + rng.gen_range(0..n_resources - 1)) % n_resources;
        actions.push(Action::new(vec![a, b]));
    }
    if actions.is_empty() {
        actions.push(Action::singleton(0));
    }
    actions.sort();
    actions.dedup();
    cost_sharing_game(&spec, resources, vec![actions; n_players], n_players)
}

/// Random singleton cost-sharing game with per-player resource menus.
pub fn random_singleton_cost_sharing(
    rng: &mut impl Rng,
    n_players: usize,
    n_resources: usize,
) -> Result<CongestionGame> {
    let resources: Vec<String> = (0..n_resources).map(|i| format!("r{i}")).collect();
    let spec = CostSharingSpec::Tables(
        (0..n_resources)
            .map(|_| random_non_increasing(rng, n_players, DelayStyle::Fine))
            .collect(),
    );
    let mut action_sets = Vec::with_capacity(n_players);
    for _ in 0..n_players {
        let mut menu: Vec<Action> = (0..n_resources)
            .filter(|_| rng.gen_bool(0.6))
            .map(Action::singleton)
            .collect();
        if menu.is_empty() {
            menu.push(Action::singleton(rng.gen_range(0..n_resources)));
        }
        action_sets.push(menu);
    }
    cost_sharing_game(&spec, resources, action_sets, n_players)
}

/// Random weighted graph for a consensus game; weight zero drops the edge.
pub fn random_consensus(rng: &mut impl Rng, n_vertices: usize, max_weight: i64) -> ConsensusGame {
    let mut edges = Vec::new();
    for i in 0..n_vertices {
        for j in (i + 1)..n_vertices {
            if rng.gen_bool(0.6) {
                edges.push((i, j, Rational::int(rng.gen_range(1..=max_weight))));
            }
        }
    }
    ConsensusGame::new(n_vertices, edges).expect("valid random graph")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::ActionProfile;
    use crate::network::SPTerm;
    use crate::solver;

    #[test]
    fn sncg_from_intro_term() {
        let g = fixtures::intro_game();
        assert!(g.is_symmetric());
        let actions = g.actions_of(0).unwrap();
        assert_eq!(actions.len(), 3);
    }

    #[test]
    fn sncg_single_arc() {
        let term = SPTerm::single("r");
        let delays = [(
            "r".to_string(),
            DelayTable::non_decreasing(vec![Rational::int(1), Rational::int(2)]).unwrap(),
        )]
        .into();
        let g = sncg_from_term(&term, &delays, 2).unwrap();
        assert_eq!(g.actions_of(0).unwrap().len(), 1);
    }

    #[test]
    fn cost_sharing_rejects_increasing() {
        let spec = CostSharingSpec::Tables(vec![DelayTable::non_decreasing(vec![
            Rational::int(1),
            Rational::int(2),
        ])
        .unwrap()]);
        let err = cost_sharing_game(
            &spec,
            vec!["r".into()],
            vec![vec![Action::singleton(0)]; 2],
            2,
        );
        assert!(matches!(err, Err(Error::NotCostSharing)));
    }

    #[test]
    fn axb_tables() {
        // a = 0, b = c gives a constant table
        let spec = CostSharingSpec::Axb(vec![(Rational::zero(), Rational::int(3))]);
        let tables = spec.tables(4).unwrap();
        assert!(tables[0].values().iter().all(|v| *v == Rational::int(3)));

        let spec = CostSharingSpec::Axb(vec![(Rational::int(4), Rational::new(1, 2))]);
        let tables = spec.tables(2).unwrap();
        assert_eq!(tables[0].value(1).unwrap(), &Rational::new(9, 2));
        assert_eq!(tables[0].value(2).unwrap(), &Rational::new(5, 2));
    }

    #[test]
    fn example2_game_shape() {
        let g = fixtures::example2_game();
        assert!(g.is_cost_sharing());
        assert_eq!(g.delay(0).value(1).unwrap(), &Rational::int(2));
        assert_eq!(g.delay(0).value(3).unwrap(), &Rational::int(1));
        // (r,s,s) is a subgame-perfect outcome but unstable
        let p = ActionProfile::from_pairs([
            (0, Action::singleton(0)),
            (1, Action::singleton(1)),
            (2, Action::singleton(1)),
        ])
        .unwrap();
        assert!(!g.is_nash(&p).unwrap());
        let spos = solver::spo_all_orders(&g, 100_000).unwrap();
        assert!(spos.contains(&p));
    }

    #[test]
    fn consensus_costs_and_stability() {
        let g = fixtures::example5_consensus();
        // all-R is optimal
        assert!(g.is_optimal(&[Choice::R, Choice::R, Choice::R]));
        // outcome (L,R,R): costs (1, 0, 1)
        let o = [Choice::L, Choice::R, Choice::R];
        assert_eq!(g.cost(&o, 0), Rational::int(1));
        assert_eq!(g.cost(&o, 1), Rational::zero());
        assert_eq!(g.cost(&o, 2), Rational::int(1));

        // single edge, disagreeing endpoints: both pay the weight
        let pair = ConsensusGame::new(2, vec![(0, 1, Rational::int(5))]).unwrap();
        let o = [Choice::L, Choice::R];
        assert_eq!(pair.cost(&o, 0), Rational::int(5));
        assert_eq!(pair.cost(&o, 1), Rational::int(5));
    }

    #[test]
    fn tree_respecting_orders() {
        let g = fixtures::example5_consensus();
        assert!(g.is_tree_respecting(&[0, 2, 1]));
        assert!(g.is_tree_respecting(&[2, 0, 1]));
        assert!(!g.is_tree_respecting(&[0, 1, 2]));
    }

    #[test]
    fn singleton_structure_thm11() {
        let g = fixtures::thm11_game();
        let s = singleton_structure(&g).unwrap();
        assert_eq!(s.members, vec![(0, vec![0]), (1, vec![0, 1])]);
        // d_s(2) = 2/3 < d_r(1) = 1
        assert_eq!(s.minimizers, vec![1]);
    }

    #[test]
    fn singleton_structure_rejects_paths() {
        let g = fixtures::intro_game();
        assert!(singleton_structure(&g).is_err());
    }

    #[test]
    fn example4_minimizer_is_r() {
        let g = fixtures::example4_game(4);
        let s = singleton_structure(&g).unwrap();
        assert_eq!(s.minimizers, vec![0]);
    }

    #[test]
    fn generators_are_reproducible() {
        let a = random_generic_sncg(1, 4, 3, true, 2_000_000).unwrap();
        let b = random_generic_sncg(1, 4, 3, true, 2_000_000).unwrap();
        assert_eq!(format!("{:?}", a.1), format!("{:?}", b.1));
        assert!(a.1.is_generic(2_000_000).unwrap().is_ok());

        let (_, g) = random_generic_sncg(7, 5, 3, true, 2_000_000).unwrap();
        assert!(g.is_generic(2_000_000).unwrap().is_ok());

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let cs = random_cost_sharing(&mut rng, 3, 3, true).unwrap();
        assert!(cs.is_cost_sharing());
        for t in cs.delays() {
            assert!(t.values().windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
