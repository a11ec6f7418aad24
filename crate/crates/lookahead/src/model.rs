//! Congestion-game model with exact costs: construction, cost evaluation,
//! subgame induction, truncation, genericity and Nash checks.

use crate::rational::Rational;
use crate::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

pub type PlayerId = usize;
pub type ResourceId = usize;

/// A set of resources chosen by a player. Stored sorted and deduplicated so
/// that equality, ordering and hashing are canonical.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Action(Vec<ResourceId>);

impl Action {
    pub fn new(mut resources: Vec<ResourceId>) -> Self {
        resources.sort_unstable();
        resources.dedup();
        Action(resources)
    }

    pub fn singleton(r: ResourceId) -> Self {
        Action(vec![r])
    }

    pub fn resources(&self) -> &[ResourceId] {
        &self.0
    }

    pub fn contains(&self, r: ResourceId) -> bool {
        self.0.binary_search(&r).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Resources in `self` but not in `other`.
    pub fn difference(&self, other: &Action) -> Vec<ResourceId> {
        self.0.iter().filter(|r| !other.contains(**r)).copied().collect()
    }

    pub fn intersection(&self, other: &Action) -> Vec<ResourceId> {
        self.0.iter().filter(|r| other.contains(**r)).copied().collect()
    }
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{:?}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    NonDecreasing,
    NonIncreasing,
    Unrestricted,
}

/// Tabulated delay function: `value(x)` is the delay at congestion `x` for
/// `x = 1..=len`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DelayTable {
    values: Vec<Rational>,
    monotonicity: Monotonicity,
}

impl DelayTable {
    pub fn new(values: Vec<Rational>, monotonicity: Monotonicity) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Invalid("empty delay table".into()));
        }
        if values.iter().any(|v| v.is_negative()) {
            return Err(Error::Invalid("negative delay value".into()));
        }
        let ok = match monotonicity {
            Monotonicity::NonDecreasing => values.windows(2).all(|w| w[0] <= w[1]),
            Monotonicity::NonIncreasing => values.windows(2).all(|w| w[0] >= w[1]),
            Monotonicity::Unrestricted => true,
        };
        if !ok {
            return Err(Error::Invalid(format!(
                "delay table violates its {monotonicity:?} flag"
            )));
        }
        Ok(DelayTable { values, monotonicity })
    }

    pub fn non_decreasing(values: Vec<Rational>) -> Result<Self> {
        Self::new(values, Monotonicity::NonDecreasing)
    }

    pub fn non_increasing(values: Vec<Rational>) -> Result<Self> {
        Self::new(values, Monotonicity::NonIncreasing)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.monotonicity
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Delay at congestion `x >= 1`.
    pub fn value(&self, x: usize) -> Result<&Rational> {
        if x == 0 {
            return Err(Error::Invalid("congestion level 0".into()));
        }
        self.values.get(x - 1).ok_or(Error::TableTooShort {
            want: x,
            have: self.values.len(),
        })
    }

    /// Table shifted by `base` pre-existing users: `d'(y) = d(y + base)`.
    pub fn shifted(&self, base: usize) -> Result<Self> {
        if base >= self.values.len() {
            return Err(Error::TableTooShort {
                want: base + 1,
                have: self.values.len(),
            });
        }
        Ok(DelayTable {
            values: self.values[base..].to_vec(),
            monotonicity: self.monotonicity,
        })
    }

    /// Extends the table to `len` entries by repeating the last value.
    pub fn extended(&self, len: usize) -> Self {
        let mut values = self.values.clone();
        while values.len() < len {
            values.push(values.last().unwrap().clone());
        }
        DelayTable { values, monotonicity: self.monotonicity }
    }
}

/// A move order: the sequence in which players commit their actions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlayerOrder(Vec<PlayerId>);

impl PlayerOrder {
    pub fn new(order: Vec<PlayerId>, game: &CongestionGame) -> Result<Self> {
        let mut seen: BTreeSet<PlayerId> = BTreeSet::new();
        for &p in &order {
            if !game.players().contains(&p) {
                return Err(Error::Invalid(format!("unknown player {p} in order")));
            }
            if !seen.insert(p) {
                return Err(Error::Invalid(format!("player {p} repeated in order")));
            }
        }
        if seen.len() != game.n_players() {
            return Err(Error::Invalid("order does not cover all players".into()));
        }
        Ok(PlayerOrder(order))
    }

    pub fn identity(game: &CongestionGame) -> Self {
        PlayerOrder(game.players().to_vec())
    }

    pub fn sequence(&self) -> &[PlayerId] {
        &self.0
    }
}

/// Per-player strict total order over that player's actions, most preferred
/// first. Makes best responses unique.
#[derive(Clone, Debug)]
pub enum TieBreakRule {
    /// Prefer actions in their canonical (lexicographic) order.
    Lex,
    /// Explicit ranking per player; must list each action exactly once.
    Explicit(BTreeMap<PlayerId, Vec<Action>>),
}

impl TieBreakRule {
    pub fn validate(&self, game: &CongestionGame) -> Result<()> {
        if let TieBreakRule::Explicit(ranks) = self {
            for &p in game.players() {
                let rank = ranks
                    .get(&p)
                    .ok_or_else(|| Error::Invalid(format!("no tie-break for player {p}")))?;
                let mut sorted = rank.clone();
                sorted.sort();
                sorted.dedup();
                let mut actions = game.actions_of(p)?.to_vec();
                actions.sort();
                if sorted != actions {
                    return Err(Error::Invalid(format!(
                        "tie-break for player {p} is not a strict total order over its actions"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Rank of `action` for `player`; lower is preferred.
    pub fn rank(&self, game: &CongestionGame, player: PlayerId, action: &Action) -> usize {
        match self {
            TieBreakRule::Lex => {
                let mut actions = game.actions_of(player).expect("player").to_vec();
                actions.sort();
                actions.iter().position(|a| a == action).expect("action")
            }
            TieBreakRule::Explicit(ranks) => ranks[&player]
                .iter()
                .position(|a| a == action)
                .expect("action in ranking"),
        }
    }
}

/// A full or partial assignment of actions to players.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct ActionProfile {
    assignments: BTreeMap<PlayerId, Action>,
}

impl ActionProfile {
    pub fn empty() -> Self {
        ActionProfile::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (PlayerId, Action)>) -> Result<Self> {
        let mut assignments = BTreeMap::new();
        for (p, a) in pairs {
            if assignments.insert(p, a).is_some() {
                return Err(Error::Invalid(format!("player {p} assigned twice")));
            }
        }
        Ok(ActionProfile { assignments })
    }

    pub fn get(&self, player: PlayerId) -> Option<&Action> {
        self.assignments.get(&player)
    }

    pub fn assign(&mut self, player: PlayerId, action: Action) {
        self.assignments.insert(player, action);
    }

    pub fn players(&self) -> impl Iterator<Item = PlayerId> + '_ {
        self.assignments.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (PlayerId, &Action)> {
        self.assignments.iter().map(|(p, a)| (*p, a))
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn is_complete(&self, game: &CongestionGame) -> bool {
        game.players().iter().all(|p| self.assignments.contains_key(p))
    }

    /// Same profile with `player` switched to `action`.
    pub fn with(&self, player: PlayerId, action: Action) -> Self {
        let mut p = self.clone();
        p.assign(player, action);
        p
    }

    /// Validates that every assignment picks an action from the owner's set.
    pub fn validate(&self, game: &CongestionGame) -> Result<()> {
        for (p, a) in self.iter() {
            let actions = game.actions_of(p)?;
            if !actions.contains(a) {
                return Err(Error::Invalid(format!(
                    "player {p} assigned an action outside its action set"
                )));
            }
        }
        Ok(())
    }
}

/// Per-resource load counts of a (possibly partial) profile.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CongestionVector(pub Vec<usize>);

/// Witness for a genericity violation: two partial profiles over the same
/// player set giving player `player` equal costs for different actions.
#[derive(Clone, Debug)]
pub struct TieWitness {
    pub players: Vec<PlayerId>,
    pub profile_a: ActionProfile,
    pub profile_b: ActionProfile,
    pub player: PlayerId,
    pub cost: Rational,
}

#[derive(Clone)]
pub struct CongestionGame {
    players: Vec<PlayerId>,
    resources: Vec<String>,
    action_sets: Vec<Vec<Action>>,
    delays: Vec<DelayTable>,
    cost_sharing: bool,
}

impl fmt::Debug for CongestionGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CongestionGame")
            .field("players", &self.players)
            .field("resources", &self.resources)
            .field("action_sets", &self.action_sets)
            .finish_non_exhaustive()
    }
}

impl CongestionGame {
    pub fn new(
        players: Vec<PlayerId>,
        resources: Vec<String>,
        action_sets: Vec<Vec<Action>>,
        delays: Vec<DelayTable>,
    ) -> Result<Self> {
        if players.is_empty() {
            return Err(Error::Invalid("game needs at least one player".into()));
        }
        let mut ids = players.clone();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != players.len() {
            return Err(Error::Invalid("duplicate player ids".into()));
        }
        if action_sets.len() != players.len() {
            return Err(Error::Invalid("one action set per player required".into()));
        }
        if delays.len() != resources.len() {
            return Err(Error::Invalid("one delay table per resource required".into()));
        }
        let mut canon_sets = Vec::with_capacity(action_sets.len());
        for set in action_sets {
            if set.is_empty() {
                return Err(Error::Invalid("empty action set".into()));
            }
            let mut set = set;
            set.sort();
            set.dedup();
            for a in &set {
                if a.is_empty() {
                    return Err(Error::Invalid("empty action".into()));
                }
                if let Some(&r) = a.resources().iter().find(|&&r| r >= resources.len()) {
                    return Err(Error::Invalid(format!("unknown resource index {r}")));
                }
            }
            canon_sets.push(set);
        }
        for table in &delays {
            if table.len() < players.len() {
                return Err(Error::TableTooShort {
                    want: players.len(),
                    have: table.len(),
                });
            }
        }
        Ok(CongestionGame {
            players,
            resources,
            action_sets: canon_sets,
            delays,
            cost_sharing: false,
        })
    }

    pub fn with_cost_sharing_flag(mut self) -> Self {
        self.cost_sharing = true;
        self
    }

    pub fn is_cost_sharing(&self) -> bool {
        self.cost_sharing
    }

    pub fn n_players(&self) -> usize {
        self.players.len()
    }

    pub fn players(&self) -> &[PlayerId] {
        &self.players
    }

    pub fn resources(&self) -> &[String] {
        &self.resources
    }

    pub fn resource_index(&self, name: &str) -> Option<ResourceId> {
        self.resources.iter().position(|r| r == name)
    }

    pub fn delay(&self, r: ResourceId) -> &DelayTable {
        &self.delays[r]
    }

    pub fn delays(&self) -> &[DelayTable] {
        &self.delays
    }

    fn player_index(&self, player: PlayerId) -> Result<usize> {
        self.players
            .iter()
            .position(|&p| p == player)
            .ok_or(Error::UnknownPlayer(player))
    }

    pub fn actions_of(&self, player: PlayerId) -> Result<&[Action]> {
        Ok(&self.action_sets[self.player_index(player)?])
    }

    /// True iff all players share an identical action set.
    pub fn is_symmetric(&self) -> bool {
        self.action_sets.windows(2).all(|w| w[0] == w[1])
    }

    /// True iff every action of every player is a single resource.
    pub fn is_singleton(&self) -> bool {
        self.action_sets
            .iter()
            .all(|set| set.iter().all(|a| a.len() == 1))
    }

    /// The union of all players' action sets, deduplicated and sorted.
    pub fn action_universe(&self) -> Vec<Action> {
        let mut all: Vec<Action> = self.action_sets.iter().flatten().cloned().collect();
        all.sort();
        all.dedup();
        all
    }

    /// Per-resource load counts over the assigned players of `profile`.
    pub fn congestion_vector(&self, profile: &ActionProfile) -> CongestionVector {
        let mut load = vec![0usize; self.resources.len()];
        for (_, action) in profile.iter() {
            for &r in action.resources() {
                load[r] += 1;
            }
        }
        CongestionVector(load)
    }

    /// Current cost of `player` in a (possibly partial) profile: loads are
    /// taken over the assigned players only.
    pub fn player_cost(&self, profile: &ActionProfile, player: PlayerId) -> Result<Rational> {
        let action = profile
            .get(player)
            .ok_or(Error::UnassignedPlayer(player))?;
        let loads = self.congestion_vector(profile);
        let mut cost = Rational::zero();
        for &r in action.resources() {
            cost += self.delays[r].value(loads.0[r])?;
        }
        Ok(cost)
    }

    /// Cost of playing `action` against the loads in `loads` where the player
    /// is already counted in `loads`.
    fn action_cost(&self, action: &Action, loads: &[usize]) -> Result<Rational> {
        let mut cost = Rational::zero();
        for &r in action.resources() {
            cost += self.delays[r].value(loads[r])?;
        }
        Ok(cost)
    }

    /// The subgame left for the unassigned players once the players in
    /// `partial` are committed: delay tables are shifted by the fixed loads.
    pub fn induced_subgame(&self, partial: &ActionProfile) -> Result<CongestionGame> {
        partial.validate(self)?;
        let remaining: Vec<PlayerId> = self
            .players
            .iter()
            .copied()
            .filter(|p| partial.get(*p).is_none())
            .collect();
        if remaining.is_empty() {
            return Err(Error::Invalid("no players remain".into()));
        }
        let base = self.congestion_vector(partial);
        let delays = self
            .delays
            .iter()
            .zip(&base.0)
            .map(|(t, &b)| {
                let shifted = t.shifted(b)?;
                // The shifted flag may no longer be literally true of the kept
                // prefix only when the original already violated it, which
                // construction rules out.
                Ok(shifted)
            })
            .collect::<Result<Vec<_>>>()?;
        let action_sets = remaining
            .iter()
            .map(|&p| self.actions_of(p).map(|s| s.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        let mut game = CongestionGame::new(remaining, self.resources.clone(), action_sets, delays)?;
        game.cost_sharing = self.cost_sharing;
        Ok(game)
    }

    /// Keeps the first `min(k, n)` players under `order`; delays unchanged.
    pub fn truncate_game(&self, order: &PlayerOrder, k: usize) -> Result<CongestionGame> {
        if k == 0 {
            return Err(Error::Invalid("k must be at least 1".into()));
        }
        let keep: Vec<PlayerId> = order.sequence().iter().copied().take(k).collect();
        let action_sets = keep
            .iter()
            .map(|&p| self.actions_of(p).map(|s| s.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        let mut game = CongestionGame::new(
            keep,
            self.resources.clone(),
            action_sets,
            self.delays.clone(),
        )?;
        game.cost_sharing = self.cost_sharing;
        Ok(game)
    }

    /// Exhaustive genericity check per the no-indifference definition: over
    /// every subset of players and every two partial profiles on it, a player
    /// choosing different actions must see different costs.
    ///
    /// `budget` caps the number of (profile, player) cost evaluations.
    pub fn is_generic(&self, budget: usize) -> Result<std::result::Result<(), TieWitness>> {
        let n = self.n_players();
        let mut evals = 0usize;
        for mask in 1u64..(1u64 << n) {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            // cost -> (action, representative profile), separately per player
            let mut seen: Vec<HashMap<Rational, (Action, ActionProfile)>> =
                vec![HashMap::new(); members.len()];
            let sizes: Vec<usize> = members.iter().map(|&i| self.action_sets[i].len()).collect();
            let mut idx = vec![0usize; members.len()];
            loop {
                let profile = ActionProfile::from_pairs(members.iter().enumerate().map(
                    |(slot, &i)| (self.players[i], self.action_sets[i][idx[slot]].clone()),
                ))?;
                let loads = self.congestion_vector(&profile);
                for (slot, &i) in members.iter().enumerate() {
                    evals += 1;
                    if evals > budget {
                        return Err(Error::BudgetExceeded(
                            "instance too large for exact genericity check".into(),
                        ));
                    }
                    let action = &self.action_sets[i][idx[slot]];
                    let cost = self.action_cost(action, &loads.0)?;
                    match seen[slot].get(&cost) {
                        None => {
                            seen[slot].insert(cost, (action.clone(), profile.clone()));
                        }
                        Some((prev_action, prev_profile)) => {
                            if prev_action != action {
                                return Ok(Err(TieWitness {
                                    players: members.iter().map(|&i| self.players[i]).collect(),
                                    profile_a: prev_profile.clone(),
                                    profile_b: profile.clone(),
                                    player: self.players[i],
                                    cost,
                                }));
                            }
                        }
                    }
                }
                // next profile in mixed radix
                let mut carry = true;
                for slot in 0..idx.len() {
                    if carry {
                        idx[slot] += 1;
                        if idx[slot] == sizes[slot] {
                            idx[slot] = 0;
                        } else {
                            carry = false;
                        }
                    }
                }
                if carry {
                    break;
                }
            }
        }
        Ok(Ok(()))
    }

    /// Argmin set of current costs for `player` over its action set, holding
    /// the other assignments of `profile` fixed.
    pub fn best_responses(&self, profile: &ActionProfile, player: PlayerId) -> Result<Vec<Action>> {
        let actions = self.actions_of(player)?.to_vec();
        let mut best: Option<Rational> = None;
        let mut arg = Vec::new();
        for action in actions {
            let candidate = profile.with(player, action.clone());
            let cost = self.player_cost(&candidate, player)?;
            match &best {
                Some(b) if cost > *b => {}
                Some(b) if cost == *b => arg.push(action),
                _ => {
                    best = Some(cost);
                    arg = vec![action];
                }
            }
        }
        Ok(arg)
    }

    /// True iff every player plays a best response in the complete `profile`.
    pub fn is_nash(&self, profile: &ActionProfile) -> Result<bool> {
        if !profile.is_complete(self) {
            return Err(Error::Invalid("is_nash needs a complete profile".into()));
        }
        for &p in self.players() {
            let own = self.player_cost(profile, p)?;
            for alt in self.actions_of(p)?.to_vec() {
                let cost = self.player_cost(&profile.with(p, alt), p)?;
                if cost < own {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Brute-force enumeration of all pure Nash equilibria.
    pub fn enumerate_nash(&self, budget: usize) -> Result<BTreeSet<ActionProfile>> {
        let total: usize = self
            .action_sets
            .iter()
            .map(|s| s.len())
            .try_fold(1usize, |acc, k| acc.checked_mul(k))
            .ok_or_else(|| Error::BudgetExceeded("profile space overflow".into()))?;
        if total > budget {
            return Err(Error::BudgetExceeded(format!(
                "{total} profiles exceed budget {budget}"
            )));
        }
        let mut result = BTreeSet::new();
        for profile in self.all_profiles() {
            if self.is_nash(&profile)? {
                result.insert(profile);
            }
        }
        Ok(result)
    }

    /// Iterator over all complete profiles in canonical order.
    pub fn all_profiles(&self) -> impl Iterator<Item = ActionProfile> + '_ {
        let sizes: Vec<usize> = self.action_sets.iter().map(|s| s.len()).collect();
        let total: usize = sizes.iter().product();
        (0..total).map(move |mut code| {
            let mut pairs = Vec::with_capacity(sizes.len());
            for (i, &size) in sizes.iter().enumerate() {
                let choice = code % size;
                code /= size;
                pairs.push((self.players[i], self.action_sets[i][choice].clone()));
            }
            ActionProfile::from_pairs(pairs).expect("distinct players")
        })
    }
}

/// Minimal nonzero gap between achievable costs of distinct actions, used to
/// bound perturbation magnitudes. Falls back to 1 when every value ties.
fn minimal_cost_gap(game: &CongestionGame) -> Rational {
    let n = game.n_players();
    let mut values: Vec<Rational> = Vec::new();
    for action in game.action_universe() {
        let rs = action.resources();
        let mut loads = vec![1usize; rs.len()];
        loop {
            let mut cost = Rational::zero();
            for (i, &r) in rs.iter().enumerate() {
                cost += game.delay(r).value(loads[i]).expect("table covers n");
            }
            values.push(cost);
            let mut carry = true;
            for l in loads.iter_mut() {
                if carry {
                    *l += 1;
                    if *l > n {
                        *l = 1;
                    } else {
                        carry = false;
                    }
                }
            }
            if carry {
                break;
            }
        }
    }
    values.sort();
    values.dedup();
    let mut gap: Option<Rational> = None;
    for w in values.windows(2) {
        let d = &w[1] - &w[0];
        if gap.as_ref().map_or(true, |g| d < *g) {
            gap = Some(d);
        }
    }
    gap.unwrap_or_else(Rational::one)
}

/// Returns a generic game obtained by nudging delays of resources that are
/// unique to a single action; all perturbations stay below half the minimal
/// cost gap, so strict cost comparisons of the input carry over weakly.
///
/// With `preserve` set, the given Nash equilibrium of the input remains a
/// Nash equilibrium of the output (intended for symmetric games on
/// extension-parallel networks, where every path has a private resource).
pub fn perturb_to_generic(
    game: &CongestionGame,
    preserve: Option<&ActionProfile>,
    seed: u64,
    budget: usize,
) -> Result<CongestionGame> {
    if game.is_generic(budget)?.is_ok() {
        return Ok(game.clone());
    }
    if let Some(p) = preserve {
        if !game.is_nash(p)? {
            return Err(Error::Invalid("preserve profile is not a Nash equilibrium".into()));
        }
    }
    let universe = game.action_universe();
    // private resource of each action, if any
    let private: Vec<Option<ResourceId>> = universe
        .iter()
        .map(|a| {
            a.resources()
                .iter()
                .copied()
                .find(|&r| {
                    universe
                        .iter()
                        .filter(|b| *b != a)
                        .all(|b| !b.contains(r))
                })
        })
        .collect();
    let gap = minimal_cost_gap(game);
    let preserved: BTreeSet<&Action> = preserve
        .map(|p| p.iter().map(|(_, a)| a).collect())
        .unwrap_or_default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut witness = None;
    for attempt in 0..8u32 {
        // Distinct nudges below gap/2. Actions of the preserved equilibrium
        // get the smallest nudges so tied deviations keep pointing away.
        let m = universe.len();
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(&mut rng);
        order.sort_by_key(|&i| !preserved.contains(&universe[i]));
        let scale = Rational::new(1, 4 * (m as i64 + 1) * (1i64 << attempt));
        let mut delays = game.delays.to_vec();
        let mut missing_private = false;
        for (slot, &i) in order.iter().enumerate() {
            let eta = &(&gap * &scale) * &Rational::int(slot as i64 + 1);
            match private[i] {
                Some(r) => {
                    let values = delays[r]
                        .values()
                        .iter()
                        .map(|v| v + &eta)
                        .collect::<Vec<_>>();
                    delays[r] = DelayTable::new(values, delays[r].monotonicity())?;
                }
                None => missing_private = true,
            }
        }
        if missing_private {
            // Fallback: nudge every resource by a distinct tiny amount.
            for (r, table) in delays.iter_mut().enumerate() {
                let eta = &(&gap * &scale)
                    * &Rational::new(r as i64 + 1, (game.resources.len() as i64 + 1) * (m as i64 + 1));
                let values = table.values().iter().map(|v| v + &eta).collect::<Vec<_>>();
                *table = DelayTable::new(values, table.monotonicity())?;
            }
        }
        let mut candidate = CongestionGame::new(
            game.players.clone(),
            game.resources.clone(),
            game.action_sets.clone(),
            delays,
        )?;
        candidate.cost_sharing = game.cost_sharing;
        match candidate.is_generic(budget)? {
            Ok(()) => {
                if let Some(p) = preserve {
                    if !candidate.is_nash(p)? {
                        continue;
                    }
                }
                return Ok(candidate);
            }
            Err(w) => witness = Some(w),
        }
    }
    Err(Error::PerturbationFailed(format!(
        "ties remain after retries: {witness:?}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn act(game: &CongestionGame, names: &[&str]) -> Action {
        Action::new(
            names
                .iter()
                .map(|n| game.resource_index(n).expect("resource"))
                .collect(),
        )
    }

    fn profile(game: &CongestionGame, choices: &[&[&str]]) -> ActionProfile {
        ActionProfile::from_pairs(
            choices
                .iter()
                .enumerate()
                .map(|(i, names)| (game.players()[i], act(game, names))),
        )
        .unwrap()
    }

    #[test]
    fn intro_game_costs() {
        let g = fixtures::intro_game();
        // profile (bl, m): player 1 pays bike 3 + long walk 2.
        let p = profile(&g, &[&["b", "l"], &["m"]]);
        assert_eq!(g.player_cost(&p, 0).unwrap(), Rational::int(5));
        assert_eq!(g.player_cost(&p, 1).unwrap(), Rational::int(6));
    }

    #[test]
    fn example1_costs_and_vector() {
        let g = fixtures::example1_game();
        let p = profile(&g, &[&["s"], &["s"], &["t"]]);
        assert_eq!(g.player_cost(&p, 0).unwrap(), Rational::int(3));
        let x = g.congestion_vector(&p);
        assert_eq!(x.0, vec![0, 2, 1]);
    }

    #[test]
    fn single_player_cost_is_unit_loads() {
        let g = fixtures::intro_game();
        let p = ActionProfile::from_pairs([(0, act(&g, &["b", "s"]))]).unwrap();
        assert_eq!(g.player_cost(&p, 0).unwrap(), Rational::int(4));
        assert!(matches!(
            g.player_cost(&p, 1),
            Err(Error::UnassignedPlayer(1))
        ));
    }

    #[test]
    fn congestion_vector_partial_and_empty() {
        let g = fixtures::example1_game();
        assert_eq!(g.congestion_vector(&ActionProfile::empty()).0, vec![0, 0, 0]);
        let all_t = profile(&g, &[&["s"], &["t"], &["t"]]);
        assert_eq!(g.congestion_vector(&all_t).0[2], 2);
    }

    #[test]
    fn induced_subgame_matches_trees() {
        // Curse-of-ties game: after player 1 takes s, player 2 sees 4 on both.
        let g = fixtures::curse_of_ties_game();
        let part = ActionProfile::from_pairs([(0, act(&g, &["s"]))]).unwrap();
        let sub = g.induced_subgame(&part).unwrap();
        assert_eq!(sub.players(), &[1]);
        let s = ActionProfile::from_pairs([(1, act(&g, &["s"]))]).unwrap();
        let t = ActionProfile::from_pairs([(1, act(&g, &["t"]))]).unwrap();
        assert_eq!(sub.player_cost(&s, 1).unwrap(), Rational::int(4));
        assert_eq!(sub.player_cost(&t, 1).unwrap(), Rational::int(4));

        // Intro game: after (bl) the remaining 1-player costs are 7, 6, 6.
        let g = fixtures::intro_game();
        let part = ActionProfile::from_pairs([(0, act(&g, &["b", "l"]))]).unwrap();
        let sub = g.induced_subgame(&part).unwrap();
        for (names, want) in [(vec!["b", "l"], 7), (vec!["m"], 6), (vec!["b", "s"], 6)] {
            let p = ActionProfile::from_pairs([(1, act(&g, &names.iter().map(|s| *s).collect::<Vec<_>>()))]).unwrap();
            assert_eq!(sub.player_cost(&p, 1).unwrap(), Rational::int(want));
        }
    }

    #[test]
    fn induced_subgame_identity_and_errors() {
        let g = fixtures::example1_game();
        let same = g.induced_subgame(&ActionProfile::empty()).unwrap();
        assert_eq!(same.players(), g.players());
        let full = profile(&g, &[&["s"], &["s"], &["t"]]);
        assert!(g.induced_subgame(&full).is_err());
    }

    #[test]
    fn induction_composes() {
        let g = fixtures::example1_game();
        let a = ActionProfile::from_pairs([(0, act(&g, &["s"]))]).unwrap();
        let b = ActionProfile::from_pairs([(1, act(&g, &["s"]))]).unwrap();
        let ab = ActionProfile::from_pairs([
            (0, act(&g, &["s"])),
            (1, act(&g, &["s"])),
        ])
        .unwrap();
        let step = g.induced_subgame(&a).unwrap().induced_subgame(&b).unwrap();
        let joint = g.induced_subgame(&ab).unwrap();
        let t = ActionProfile::from_pairs([(2, act(&g, &["t"]))]).unwrap();
        assert_eq!(step.players(), joint.players());
        assert_eq!(
            step.player_cost(&t, 2).unwrap(),
            joint.player_cost(&t, 2).unwrap()
        );
    }

    #[test]
    fn truncate_conventions() {
        let g = fixtures::example1_game();
        let id = PlayerOrder::identity(&g);
        let same = g.truncate_game(&id, 99).unwrap();
        assert_eq!(same.players(), g.players());
        let two = g.truncate_game(&id, 2).unwrap();
        assert_eq!(two.players(), &[0, 1]);
        let one = g.truncate_game(&id, 1).unwrap();
        assert_eq!(one.players(), &[0]);
        assert!(g.truncate_game(&id, 0).is_err());
    }

    #[test]
    fn genericity_verdicts() {
        assert!(fixtures::example1_game().is_generic(2_000_000).unwrap().is_ok());
        let g = fixtures::curse_of_ties_game();
        let w = g.is_generic(2_000_000).unwrap().unwrap_err();
        assert_ne!(w.profile_a.get(w.player), w.profile_b.get(w.player));
        assert_eq!(g.player_cost(&w.profile_a, w.player).unwrap(), w.cost);
        assert_eq!(g.player_cost(&w.profile_b, w.player).unwrap(), w.cost);
    }

    #[test]
    fn duplicate_resource_tie() {
        // one player, two identical resources
        let g = CongestionGame::new(
            vec![0],
            vec!["r".into(), "s".into()],
            vec![vec![Action::singleton(0), Action::singleton(1)]],
            vec![
                DelayTable::non_decreasing(vec![Rational::int(2)]).unwrap(),
                DelayTable::non_decreasing(vec![Rational::int(2)]).unwrap(),
            ],
        )
        .unwrap();
        assert!(g.is_generic(1000).unwrap().is_err());
    }

    #[test]
    fn best_responses_and_nash() {
        let g = fixtures::intro_game();
        // player 1 against m: bs (4) beats bl (5) and m (6)
        let vs_m = ActionProfile::from_pairs([(1, act(&g, &["m"]))]).unwrap();
        assert_eq!(g.best_responses(&vs_m, 0).unwrap(), vec![act(&g, &["b", "s"])]);

        let bl_m = profile(&g, &[&["b", "l"], &["m"]]);
        assert!(!g.is_nash(&bl_m).unwrap());
        let bs_m = profile(&g, &[&["b", "s"], &["m"]]);
        assert!(g.is_nash(&bs_m).unwrap());
        let ne = g.enumerate_nash(1_000_000).unwrap();
        assert!(ne.contains(&bs_m));
        assert!(!ne.contains(&bl_m));
    }

    #[test]
    fn thm11_best_response() {
        let g = fixtures::thm11_game();
        let vs_s = ActionProfile::from_pairs([(1, act(&g, &["s"]))]).unwrap();
        assert_eq!(g.best_responses(&vs_s, 0).unwrap(), vec![act(&g, &["s"])]);
    }

    #[test]
    fn cost_decomposition() {
        let g = fixtures::prop6_game();
        for p in g.all_profiles() {
            let total: Rational = g
                .players()
                .iter()
                .map(|&i| g.player_cost(&p, i).unwrap())
                .sum();
            let loads = g.congestion_vector(&p);
            let mut by_resource = Rational::zero();
            for (r, &x) in loads.0.iter().enumerate() {
                if x > 0 {
                    by_resource += &(g.delay(r).value(x).unwrap() * &Rational::from(x));
                }
            }
            assert_eq!(total, by_resource);
        }
    }

    #[test]
    fn perturbation_already_generic_is_identity() {
        let g = fixtures::example1_game();
        let out = perturb_to_generic(&g, None, 1, 2_000_000).unwrap();
        assert_eq!(out.delays(), g.delays());
    }

    #[test]
    fn perturbation_fixes_curse_of_ties() {
        let g = fixtures::curse_of_ties_game();
        let out = perturb_to_generic(&g, None, 7, 2_000_000).unwrap();
        assert!(out.is_generic(2_000_000).unwrap().is_ok());
    }

    #[test]
    fn perturbation_preserves_intro_nash() {
        let g = fixtures::intro_game();
        let bs_bs = profile(&g, &[&["b", "s"], &["b", "s"]]);
        let out = perturb_to_generic(&g, Some(&bs_bs), 3, 2_000_000).unwrap();
        assert!(out.is_generic(2_000_000).unwrap().is_ok());
        assert!(out.is_nash(&bs_bs).unwrap());
    }
}
