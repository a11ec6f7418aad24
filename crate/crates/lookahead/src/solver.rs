//! Backward induction over an abstract sequential game: the unique
//! tie-broken outcome, full enumeration of subgame-perfect outcomes, the
//! naive strategy-profile oracle, and k-lookahead outcome sets.

use crate::model::{Action, ActionProfile, CongestionGame, PlayerId, PlayerOrder, TieBreakRule};
use crate::rational::Rational;
use crate::{Error, Result};
use itertools::Itertools;
use std::collections::BTreeSet;

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// A sequential game seen by the solver: players move at positions
/// `0..len()`, each with a finite action set. `partial_cost` evaluates the
/// current cost of the player at `pos` once the first `prefix.len()`
/// positions have committed; on complete prefixes it is the terminal cost.
pub trait SequentialGame {
    fn len(&self) -> usize;
    fn n_actions(&self, pos: usize) -> usize;
    fn partial_cost(&self, prefix: &[usize], pos: usize) -> Rational;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Outcomes as action-index vectors, canonically ordered.
pub type IndexOutcomeSet = BTreeSet<Vec<usize>>;

struct Budget {
    used: usize,
    cap: usize,
}

impl Budget {
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.cap {
            Err(Error::BudgetExceeded(format!(
                "solver node budget {} exceeded",
                self.cap
            )))
        } else {
            Ok(())
        }
    }
}

/// All subgame-perfect outcome suffixes of the subtree rooted at `prefix`,
/// with the game cut off at `horizon` positions (costs evaluated by the
/// partial evaluator at that depth).
///
/// At a decision node an outcome handed up from child `a` stays on-path iff
/// every sibling subtree has some subgame-perfect outcome that is at least as
/// expensive for the mover: off-path subtrees may be assigned any of their
/// subgame-perfect equilibria independently.
fn spo_suffixes(
    view: &dyn SequentialGame,
    prefix: &mut Vec<usize>,
    horizon: usize,
    budget: &mut Budget,
) -> Result<Vec<Vec<usize>>> {
    budget.tick()?;
    let pos = prefix.len();
    if pos == horizon {
        return Ok(vec![Vec::new()]);
    }
    let n_actions = view.n_actions(pos);
    let mut children: Vec<Vec<(Vec<usize>, Rational)>> = Vec::with_capacity(n_actions);
    for a in 0..n_actions {
        prefix.push(a);
        let suffixes = spo_suffixes(view, prefix, horizon, budget)?;
        let mut with_costs = Vec::with_capacity(suffixes.len());
        for suffix in suffixes {
            prefix.extend(suffix.iter().copied());
            let cost = view.partial_cost(prefix, pos);
            prefix.truncate(pos + 1);
            with_costs.push((suffix, cost));
        }
        prefix.pop();
        children.push(with_costs);
    }
    let max_cost: Vec<&Rational> = children
        .iter()
        .map(|c| c.iter().map(|(_, cost)| cost).max().expect("non-empty"))
        .collect();
    let mut result = Vec::new();
    for (a, outcomes) in children.iter().enumerate() {
        for (suffix, cost) in outcomes {
            let on_path = (0..n_actions)
                .filter(|&b| b != a)
                .all(|b| cost <= max_cost[b]);
            if on_path {
                let mut full = Vec::with_capacity(suffix.len() + 1);
                full.push(a);
                full.extend(suffix.iter().copied());
                result.push(full);
            }
        }
    }
    result.sort();
    result.dedup();
    Ok(result)
}

/// Unique subgame-perfect suffix under a tie-breaking rule: at every node the
/// mover takes the cheapest continuation, preferring lower `rank` on ties.
fn spo_unique_suffix(
    view: &dyn SequentialGame,
    prefix: &mut Vec<usize>,
    horizon: usize,
    rank: &dyn Fn(usize, usize) -> usize,
    budget: &mut Budget,
) -> Result<Vec<usize>> {
    budget.tick()?;
    let pos = prefix.len();
    if pos == horizon {
        return Ok(Vec::new());
    }
    let mut best: Option<(Rational, usize, Vec<usize>)> = None;
    for a in 0..view.n_actions(pos) {
        prefix.push(a);
        let suffix = spo_unique_suffix(view, prefix, horizon, rank, budget)?;
        prefix.extend(suffix.iter().copied());
        let cost = view.partial_cost(prefix, pos);
        prefix.truncate(pos);
        let key = rank(pos, a);
        let better = match &best {
            None => true,
            Some((c, r, _)) => cost < *c || (cost == *c && key < *r),
        };
        if better {
            let mut full = Vec::with_capacity(suffix.len() + 1);
            full.push(a);
            full.extend(suffix);
            best = Some((cost, key, full));
        }
    }
    Ok(best.expect("at least one action").2)
}

/// The set of subgame-perfect outcomes of the full-depth view.
pub fn spo_set(view: &dyn SequentialGame, node_budget: usize) -> Result<IndexOutcomeSet> {
    let mut budget = Budget { used: 0, cap: node_budget };
    let outcomes = spo_suffixes(view, &mut Vec::new(), view.len(), &mut budget)?;
    Ok(outcomes.into_iter().collect())
}

/// The unique subgame-perfect outcome under `rank` (per-position action
/// ranking, lower preferred).
pub fn spo_unique(
    view: &dyn SequentialGame,
    rank: &dyn Fn(usize, usize) -> usize,
    node_budget: usize,
) -> Result<Vec<usize>> {
    let mut budget = Budget { used: 0, cap: node_budget };
    spo_unique_suffix(view, &mut Vec::new(), view.len(), rank, &mut budget)
}

/// All k-lookahead outcomes of the view for its fixed order: every entrant
/// plays a first action of some subgame-perfect outcome of the k-player
/// truncation of the remaining game, and the recursion branches over every
/// such choice.
pub fn k_lookahead_set(
    view: &dyn SequentialGame,
    k: usize,
    node_budget: usize,
) -> Result<IndexOutcomeSet> {
    if k == 0 {
        return Err(Error::Invalid("lookahead k must be at least 1".into()));
    }
    let mut budget = Budget { used: 0, cap: node_budget };
    let mut result = BTreeSet::new();
    lookahead_rec(view, k, &mut Vec::new(), &mut result, &mut budget)?;
    Ok(result)
}

fn lookahead_rec(
    view: &dyn SequentialGame,
    k: usize,
    prefix: &mut Vec<usize>,
    out: &mut IndexOutcomeSet,
    budget: &mut Budget,
) -> Result<()> {
    let n = view.len();
    if prefix.len() == n {
        out.insert(prefix.clone());
        return Ok(());
    }
    let horizon = n.min(prefix.len() + k);
    let spos = spo_suffixes(view, prefix, horizon, budget)?;
    let firsts: BTreeSet<usize> = spos.iter().map(|o| o[0]).collect();
    for a in firsts {
        prefix.push(a);
        lookahead_rec(view, k, prefix, out, budget)?;
        prefix.pop();
    }
    Ok(())
}

/// Deterministic k-lookahead outcome when every player resolves ties by
/// `rank`. With `k = 1` this is the greedy best-response sequence.
pub fn k_lookahead_unique(
    view: &dyn SequentialGame,
    k: usize,
    rank: &dyn Fn(usize, usize) -> usize,
    node_budget: usize,
) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::Invalid("lookahead k must be at least 1".into()));
    }
    let mut budget = Budget { used: 0, cap: node_budget };
    let n = view.len();
    let mut prefix = Vec::with_capacity(n);
    while prefix.len() < n {
        let horizon = n.min(prefix.len() + k);
        let spo = spo_unique_suffix(view, &mut prefix, horizon, rank, &mut budget)?;
        prefix.push(spo[0]);
    }
    Ok(prefix)
}

/// Reference oracle: enumerates every strategy profile of the game tree,
/// keeps those inducing a Nash equilibrium in every subgame, and collects the
/// equilibrium-path outcomes. Doubly exponential; tiny views only.
pub fn spo_set_naive(view: &dyn SequentialGame, strategy_budget: usize) -> Result<IndexOutcomeSet> {
    let n = view.len();
    let counts: Vec<usize> = (0..n).map(|p| view.n_actions(p)).collect();
    // histories[p]: number of decision nodes of position p
    let mut histories = Vec::with_capacity(n);
    let mut h = 1usize;
    for &c in &counts {
        histories.push(h);
        h = h.checked_mul(c).ok_or_else(|| {
            Error::BudgetExceeded("game tree too large for naive oracle".into())
        })?;
    }
    let leaves = h;
    let mut total_strategies: f64 = 1.0;
    for p in 0..n {
        total_strategies *= (counts[p] as f64).powi(histories[p] as i32);
    }
    if total_strategies > strategy_budget as f64 {
        return Err(Error::BudgetExceeded(format!(
            "{total_strategies:.0} strategy profiles exceed budget {strategy_budget}"
        )));
    }

    // Precompute terminal costs per leaf, reduced to per-position ranks so
    // the hot loop compares machine integers.
    let mut cost_rank: Vec<Vec<usize>> = Vec::with_capacity(n);
    let decode = |mut code: usize| -> Vec<usize> {
        let mut profile = Vec::with_capacity(n);
        for &c in &counts {
            profile.push(code % c);
            code /= c;
        }
        profile
    };
    for p in 0..n {
        let mut costs = Vec::with_capacity(leaves);
        for code in 0..leaves {
            costs.push(view.partial_cost(&decode(code), p));
        }
        let mut sorted = costs.clone();
        sorted.sort();
        sorted.dedup();
        cost_rank.push(
            costs
                .iter()
                .map(|c| sorted.binary_search(c).unwrap())
                .collect(),
        );
    }
    let encode = |profile: &[usize]| -> usize {
        let mut code = 0usize;
        let mut stride = 1usize;
        for (p, &a) in profile.iter().enumerate() {
            code += a * stride;
            stride *= counts[p];
        }
        code
    };

    // cells: one action choice per (position, history) pair
    let mut cell_pos = Vec::new();
    for (p, &hp) in histories.iter().enumerate() {
        for _ in 0..hp {
            cell_pos.push(p);
        }
    }
    let offsets: Vec<usize> = {
        let mut off = Vec::with_capacity(n);
        let mut acc = 0;
        for &hp in &histories {
            off.push(acc);
            acc += hp;
        }
        off
    };
    let hist_index = |prefix: &[usize]| -> usize {
        // mixed-radix code of the prefix under counts
        let mut code = 0usize;
        let mut stride = 1usize;
        for (q, &a) in prefix.iter().enumerate() {
            code += a * stride;
            stride *= counts[q];
        }
        code
    };
    let mut cells = vec![0usize; cell_pos.len()];
    let mut outcomes = BTreeSet::new();
    loop {
        // follow play from a subgame root; returns the complete profile
        let play = |cells: &[usize], root: &[usize]| -> Vec<usize> {
            let mut profile = root.to_vec();
            for q in root.len()..n {
                let hi = hist_index(&profile);
                profile.push(cells[offsets[q] + hi]);
            }
            profile
        };
        // SPE test: in every subgame, every mover's single reachable decision
        // must be unimprovable given the others' strategies. Deepest
        // subgames first so most profiles are rejected cheaply.
        let mut is_spe = true;
        'depths: for d in (0..n).rev() {
            let mut root = vec![0usize; d];
            loop {
                let on_path = play(&cells, &root);
                let leaf = encode(&on_path);
                for q in d..n {
                    let own = cost_rank[q][leaf];
                    let chosen = on_path[q];
                    for alt in 0..counts[q] {
                        if alt == chosen {
                            continue;
                        }
                        let mut dev_root = on_path[..q].to_vec();
                        dev_root.push(alt);
                        let dev_leaf = encode(&play(&cells, &dev_root));
                        if cost_rank[q][dev_leaf] < own {
                            is_spe = false;
                            break 'depths;
                        }
                    }
                }
                // next subgame root at this depth
                let mut carry = true;
                for q in 0..d {
                    if carry {
                        root[q] += 1;
                        if root[q] == counts[q] {
                            root[q] = 0;
                        } else {
                            carry = false;
                        }
                    }
                }
                if carry || d == 0 {
                    break;
                }
            }
        }
        if is_spe {
            outcomes.insert(play(&cells, &[]));
        }
        // next strategy profile
        let mut carry = true;
        for (i, cell) in cells.iter_mut().enumerate() {
            if carry {
                *cell += 1;
                if *cell == counts[cell_pos[i]] {
                    *cell = 0;
                } else {
                    carry = false;
                }
            }
        }
        if carry {
            break;
        }
    }
    Ok(outcomes)
}

/// Sequential-move view of a congestion game under a fixed order, using the
/// current-costs evaluation of partial profiles.
pub struct CongestionView<'a> {
    game: &'a CongestionGame,
    order: Vec<PlayerId>,
    actions: Vec<Vec<Action>>,
}

impl<'a> CongestionView<'a> {
    pub fn new(game: &'a CongestionGame, order: &PlayerOrder) -> Result<Self> {
        let order = order.sequence().to_vec();
        let actions = order
            .iter()
            .map(|&p| game.actions_of(p).map(|s| s.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Ok(CongestionView { game, order, actions })
    }

    pub fn identity(game: &'a CongestionGame) -> Self {
        let order = PlayerOrder::identity(game);
        CongestionView::new(game, &order).expect("identity order is valid")
    }

    pub fn order(&self) -> &[PlayerId] {
        &self.order
    }

    pub fn action_at(&self, pos: usize, index: usize) -> &Action {
        &self.actions[pos][index]
    }

    /// Translates an index outcome back into an action profile of the game.
    pub fn to_profile(&self, outcome: &[usize]) -> ActionProfile {
        ActionProfile::from_pairs(
            outcome
                .iter()
                .enumerate()
                .map(|(pos, &a)| (self.order[pos], self.actions[pos][a].clone())),
        )
        .expect("order has distinct players")
    }

    pub fn to_profiles(&self, outcomes: &IndexOutcomeSet) -> BTreeSet<ActionProfile> {
        outcomes.iter().map(|o| self.to_profile(o)).collect()
    }

    /// Action ranking induced by a tie-breaking rule of the game.
    pub fn rank_fn(&self, rule: &TieBreakRule) -> impl Fn(usize, usize) -> usize + '_ {
        let ranks: Vec<Vec<usize>> = self
            .order
            .iter()
            .zip(&self.actions)
            .map(|(&p, actions)| {
                actions
                    .iter()
                    .map(|a| rule.rank(self.game, p, a))
                    .collect()
            })
            .collect();
        move |pos, a| ranks[pos][a]
    }
}

impl SequentialGame for CongestionView<'_> {
    fn len(&self) -> usize {
        self.order.len()
    }

    fn n_actions(&self, pos: usize) -> usize {
        self.actions[pos].len()
    }

    fn partial_cost(&self, prefix: &[usize], pos: usize) -> Rational {
        let mut loads = vec![0usize; self.game.resources().len()];
        for (q, &a) in prefix.iter().enumerate() {
            for &r in self.actions[q][a].resources() {
                loads[r] += 1;
            }
        }
        let mut cost = Rational::zero();
        for &r in self.actions[pos][prefix[pos]].resources() {
            cost += self
                .game
                .delay(r)
                .value(loads[r])
                .expect("delay table covers player count");
        }
        cost
    }
}

/// An explicit sequential game given by cost tables, one per prefix length.
/// Used for random solver-oracle corpora and for hosting games that are not
/// congestion games.
pub struct TableView {
    counts: Vec<usize>,
    /// `costs[j - 1]`: for each mixed-radix code of a length-`j` prefix, the
    /// costs of positions `0..j`. The last layer holds the terminal costs, so
    /// the partial evaluator agrees with it on complete profiles by
    /// construction.
    costs: Vec<Vec<Vec<Rational>>>,
}

impl TableView {
    pub fn new(counts: Vec<usize>, costs: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        if costs.len() != counts.len() {
            return Err(Error::Invalid("one cost layer per prefix length".into()));
        }
        let mut prefixes = 1usize;
        for (j, layer) in costs.iter().enumerate() {
            prefixes *= counts[j];
            if layer.len() != prefixes {
                return Err(Error::Invalid(format!(
                    "layer {j} must have {prefixes} entries"
                )));
            }
            if layer.iter().any(|entry| entry.len() != j + 1) {
                return Err(Error::Invalid(format!(
                    "layer {j} entries must cost positions 0..={j}"
                )));
            }
        }
        Ok(TableView { counts, costs })
    }
}

impl SequentialGame for TableView {
    fn len(&self) -> usize {
        self.counts.len()
    }

    fn n_actions(&self, pos: usize) -> usize {
        self.counts[pos]
    }

    fn partial_cost(&self, prefix: &[usize], pos: usize) -> Rational {
        let j = prefix.len();
        let mut code = 0usize;
        let mut stride = 1usize;
        for (q, &a) in prefix.iter().enumerate() {
            code += a * stride;
            stride *= self.counts[q];
        }
        self.costs[j - 1][code][pos].clone()
    }
}

/// Union of k-lookahead outcome sets over all player orders.
pub fn k_lookahead_all_orders(
    game: &CongestionGame,
    k: usize,
    node_budget: usize,
) -> Result<BTreeSet<ActionProfile>> {
    let mut result = BTreeSet::new();
    for perm in game.players().iter().copied().permutations(game.n_players()) {
        let order = PlayerOrder::new(perm, game)?;
        let view = CongestionView::new(game, &order)?;
        let set = k_lookahead_set(&view, k, node_budget)?;
        result.extend(view.to_profiles(&set));
    }
    Ok(result)
}

/// Union of subgame-perfect outcomes over all player orders.
pub fn spo_all_orders(
    game: &CongestionGame,
    node_budget: usize,
) -> Result<BTreeSet<ActionProfile>> {
    let mut result = BTreeSet::new();
    for perm in game.players().iter().copied().permutations(game.n_players()) {
        let order = PlayerOrder::new(perm, game)?;
        let view = CongestionView::new(game, &order)?;
        let set = spo_set(&view, node_budget)?;
        result.extend(view.to_profiles(&set));
    }
    Ok(result)
}

/// Greedy best-response sequence: each entrant plays the tie-broken argmin of
/// its current cost given the predecessors.
pub fn greedy_sequence(
    game: &CongestionGame,
    order: &PlayerOrder,
    rule: &TieBreakRule,
) -> Result<ActionProfile> {
    rule.validate(game)?;
    let view = CongestionView::new(game, order)?;
    let rank = view.rank_fn(rule);
    let outcome = k_lookahead_unique(&view, 1, &rank, DEFAULT_NODE_BUDGET)?;
    Ok(view.to_profile(&outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::ActionProfile;

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
    fn example1_partial_truncation_spo() {
        // G^2 of Example 1: unique SPO (s, t) with costs (1.5, 2).
        let g = fixtures::example1_game();
        let two = g.truncate_game(&PlayerOrder::identity(&g), 2).unwrap();
        let view = CongestionView::identity(&two);
        let spos = spo_set(&view, 10_000).unwrap();
        assert_eq!(spos.len(), 1);
        let outcome = spos.iter().next().unwrap();
        let p = view.to_profile(outcome);
        assert_eq!(p.get(0).unwrap(), &act(&g, &["s"]));
        assert_eq!(p.get(1).unwrap(), &act(&g, &["t"]));
        assert_eq!(view.partial_cost(outcome, 0), Rational::new(3, 2));
        assert_eq!(view.partial_cost(outcome, 1), Rational::int(2));
    }

    #[test]
    fn example1_two_lookahead_is_ss_t() {
        let g = fixtures::example1_game();
        let view = CongestionView::identity(&g);
        let set = k_lookahead_set(&view, 2, 100_000).unwrap();
        let profiles = view.to_profiles(&set);
        let want = profile(&g, &[&["s"], &["s"], &["t"]]);
        assert_eq!(profiles, [want].into_iter().collect());
    }

    #[test]
    fn intro_spo_set_contains_bl_m() {
        let g = fixtures::intro_game();
        let view = CongestionView::identity(&g);
        let profiles = view.to_profiles(&spo_set(&view, 10_000).unwrap());
        assert!(profiles.contains(&profile(&g, &[&["b", "l"], &["m"]])));
    }

    #[test]
    fn curse_of_ties_spo_set_and_lookahead() {
        let g = fixtures::curse_of_ties_game();
        let view = CongestionView::identity(&g);
        let spos = view.to_profiles(&spo_set(&view, 10_000).unwrap());
        let expected: BTreeSet<ActionProfile> = [
            profile(&g, &[&["r"], &["s"]]),
            profile(&g, &[&["s"], &["t"]]),
        ]
        .into_iter()
        .collect();
        assert_eq!(spos, expected);
        let naive = view.to_profiles(&spo_set_naive(&view, 10_000_000).unwrap());
        assert_eq!(naive, expected);

        let two = view.to_profiles(&k_lookahead_set(&view, 2, 10_000).unwrap());
        let ss = profile(&g, &[&["s"], &["s"]]);
        assert!(two.contains(&ss));
        assert!(!spos.contains(&ss));
    }

    #[test]
    fn naive_oracle_matches_on_intro() {
        let g = fixtures::intro_game();
        let view = CongestionView::identity(&g);
        assert_eq!(
            spo_set(&view, 10_000).unwrap(),
            spo_set_naive(&view, 10_000_000).unwrap()
        );
    }

    #[test]
    fn one_player_view_is_argmin() {
        let g = fixtures::intro_game();
        let one = g.truncate_game(&PlayerOrder::identity(&g), 1).unwrap();
        let view = CongestionView::identity(&one);
        let spos = spo_set(&view, 100).unwrap();
        let profiles = view.to_profiles(&spos);
        // cheapest single-player path: bs at cost 4
        let want = ActionProfile::from_pairs([(0, act(&g, &["b", "s"]))]).unwrap();
        assert_eq!(profiles, [want].into_iter().collect());
        assert_eq!(spo_set_naive(&view, 1000).unwrap(), spos);
        let unique = spo_unique(&view, &|_, _| 0, 100).unwrap();
        assert!(spos.contains(&unique));
    }

    #[test]
    fn greedy_matches_paper_intro() {
        let g = fixtures::intro_game();
        let order = PlayerOrder::identity(&g);
        // any tiebreak: player 1 strictly prefers bs; player 2 ties m vs bs
        let greedy = greedy_sequence(&g, &order, &TieBreakRule::Lex).unwrap();
        assert_eq!(greedy.get(0).unwrap(), &act(&g, &["b", "s"]));
        let one_lo = k_lookahead_set(&CongestionView::identity(&g), 1, 10_000).unwrap();
        let profiles = CongestionView::identity(&g).to_profiles(&one_lo);
        assert!(profiles.contains(&profile(&g, &[&["b", "s"], &["m"]])));
        assert!(profiles.contains(&profile(&g, &[&["b", "s"], &["b", "s"]])));
        assert_eq!(profiles.len(), 2);
    }

    #[test]
    fn prop6_one_and_three_lookahead_disjoint() {
        let g = fixtures::prop6_game();
        let one = k_lookahead_all_orders(&g, 1, 1_000_000).unwrap();
        let three = k_lookahead_all_orders(&g, 3, 1_000_000).unwrap();
        assert!(one.iter().all(|p| !three.contains(p)));
        // greedy under identity: (rt, su, ru)
        let greedy = greedy_sequence(&g, &PlayerOrder::identity(&g), &TieBreakRule::Lex).unwrap();
        assert_eq!(greedy.get(0).unwrap(), &act(&g, &["r", "t"]));
        assert_eq!(greedy.get(1).unwrap(), &act(&g, &["s", "u"]));
        assert_eq!(greedy.get(2).unwrap(), &act(&g, &["r", "u"]));
    }

    #[test]
    fn thm11_greedy_not_nash() {
        let g = fixtures::thm11_game();
        let greedy = greedy_sequence(&g, &PlayerOrder::identity(&g), &TieBreakRule::Lex).unwrap();
        assert_eq!(greedy, profile(&g, &[&["r"], &["s"]]));
        assert!(!g.is_nash(&greedy).unwrap());
    }

    #[test]
    fn k_larger_than_n_behaves_like_n() {
        let g = fixtures::example1_game();
        let view = CongestionView::identity(&g);
        assert_eq!(
            k_lookahead_set(&view, 3, 100_000).unwrap(),
            k_lookahead_set(&view, 99, 100_000).unwrap()
        );
    }

    #[test]
    fn budget_errors_surface() {
        let g = fixtures::prop6_game();
        let view = CongestionView::identity(&g);
        assert!(matches!(
            spo_set(&view, 3),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(matches!(
            spo_set_naive(&view, 10),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
