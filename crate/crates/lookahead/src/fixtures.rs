//! Small reference games used throughout the test suite and exposed through
//! the CLI `reproduce` command.

use crate::games::{cost_sharing_game, sncg_from_term, ConsensusGame, CostSharingSpec};
use crate::model::{Action, CongestionGame, DelayTable};
use crate::network::SPTerm;
use crate::rational::Rational;
use std::collections::BTreeMap;

fn table(values: Vec<Rational>) -> DelayTable {
    DelayTable::non_decreasing(values).expect("non-decreasing fixture table")
}

fn ints(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| Rational::int(v)).collect()
}

/// Two commuters choosing between a metro line `m` and a bike `b` followed by
/// a long (`l`) or short (`s`) walk. The short walk is only worth it when the
/// bike is not shared.
pub fn intro_game() -> CongestionGame {
    let term = SPTerm::parallel(
        SPTerm::single("m"),
        SPTerm::series(
            SPTerm::single("b"),
            SPTerm::parallel(SPTerm::single("l"), SPTerm::single("s")),
        ),
    );
    let delays: BTreeMap<String, DelayTable> = [
        ("m".to_string(), table(ints(&[6, 6]))),
        ("b".to_string(), table(ints(&[3, 5]))),
        ("l".to_string(), table(ints(&[2, 2]))),
        ("s".to_string(), table(ints(&[1, 1]))),
    ]
    .into();
    sncg_from_term(&term, &delays, 2).expect("intro fixture")
}

/// Three players on `r, s, t` with linear delays `2x, 1.5x, 2x`; the unique
/// 2-lookahead outcome for the identity order is `(s, s, t)`.
pub fn example1_game() -> CongestionGame {
    CongestionGame::new(
        vec![0, 1, 2],
        vec!["r".into(), "s".into(), "t".into()],
        vec![
            vec![Action::singleton(0), Action::singleton(1)],
            vec![Action::singleton(1), Action::singleton(2)],
            vec![Action::singleton(2)],
        ],
        vec![
            table(ints(&[2, 4, 6])),
            table(vec![
                Rational::new(3, 2),
                Rational::int(3),
                Rational::new(9, 2),
            ]),
            table(ints(&[2, 4, 6])),
        ],
    )
    .expect("example 1 fixture")
}

/// Two players, delays `2x, 2x, 4`: the second player's indifference after
/// `s` lets `(s, s)` arise as a full-lookahead outcome that is not an SPO.
pub fn curse_of_ties_game() -> CongestionGame {
    CongestionGame::new(
        vec![0, 1],
        vec!["r".into(), "s".into(), "t".into()],
        vec![
            vec![Action::singleton(0), Action::singleton(1)],
            vec![Action::singleton(1), Action::singleton(2)],
        ],
        vec![
            table(ints(&[2, 4])),
            table(ints(&[2, 4])),
            table(ints(&[4, 4])),
        ],
    )
    .expect("curse-of-ties fixture")
}

/// Generic three-player game on the smallest SP-but-not-EP network (paths
/// `rt, st, ru, su`) whose 1-lookahead and full-lookahead outcome sets are
/// disjoint.
pub fn prop6_game() -> CongestionGame {
    let term = SPTerm::series(
        SPTerm::parallel(SPTerm::single("r"), SPTerm::single("s")),
        SPTerm::parallel(SPTerm::single("t"), SPTerm::single("u")),
    );
    let delays: BTreeMap<String, DelayTable> = [
        ("r".to_string(), table(ints(&[1, 3, 100]))),
        ("s".to_string(), table(ints(&[2, 4, 200]))),
        (
            "t".to_string(),
            table(vec![
                Rational::new(11, 10),
                Rational::new(41, 10),
                Rational::new(1001, 10),
            ]),
        ),
        (
            "u".to_string(),
            table(vec![
                Rational::new(11, 5),
                Rational::new(16, 5),
                Rational::new(501, 5),
            ]),
        ),
    ]
    .into();
    sncg_from_term(&term, &delays, 3).expect("non-EP fixture")
}

/// Three players sharing two resources with `d(1) = 2` and `d(x > 1) = 1`;
/// the unstable subgame-perfect outcomes are `(r, s, s)` and `(s, r, r)`.
pub fn example2_game() -> CongestionGame {
    let spec = CostSharingSpec::Tables(vec![table_ni(ints(&[2, 1, 1])), table_ni(ints(&[2, 1, 1]))]);
    cost_sharing_game(
        &spec,
        vec!["r".into(), "s".into()],
        vec![vec![Action::singleton(0), Action::singleton(1)]; 3],
        3,
    )
    .expect("cost-sharing fixture")
}

/// Singleton cost-sharing game with `d_r(x) = n/x`, `d_s(1) = n + 1` and
/// `d_s(x > 1) = 2`: 1-lookahead outcomes are optimal while intermediate
/// lookahead is not.
pub fn example3_game(n: usize) -> CongestionGame {
    assert!(n >= 2, "needs at least two players");
    let r_values: Vec<Rational> = (1..=n).map(|x| Rational::new(n as i64, x as i64)).collect();
    let mut s_values = vec![Rational::int(n as i64 + 1)];
    s_values.extend(std::iter::repeat(Rational::int(2)).take(n - 1));
    let spec = CostSharingSpec::Tables(vec![table_ni(r_values), table_ni(s_values)]);
    cost_sharing_game(
        &spec,
        vec!["r".into(), "s".into()],
        vec![vec![Action::singleton(0), Action::singleton(1)]; n],
        n,
    )
    .expect("threshold fixture")
}

/// Symmetric singleton game with `d_r(x) = x` and `d_s(x) = x + 1/2`: the
/// first player's subgame-perfect cost alternates with the parity of `n`.
pub fn example4_game(n: usize) -> CongestionGame {
    let r_values: Vec<Rational> = (1..=n).map(|x| Rational::int(x as i64)).collect();
    let s_values: Vec<Rational> = (1..=n)
        .map(|x| &Rational::int(x as i64) + &Rational::new(1, 2))
        .collect();
    CongestionGame::new(
        (0..n).collect(),
        vec!["r".into(), "s".into()],
        vec![vec![Action::singleton(0), Action::singleton(1)]; n],
        vec![table(r_values), table(s_values)],
    )
    .expect("parity-of-n fixture")
}

/// Symmetric singleton game with `d_r(x) = d_s(x) = x` for an odd number of
/// players: the successors can always make player 1 pay the worse resource.
pub fn parity_game(n: usize) -> CongestionGame {
    let values: Vec<Rational> = (1..=n).map(|x| Rational::int(x as i64)).collect();
    CongestionGame::new(
        (0..n).collect(),
        vec!["r".into(), "s".into()],
        vec![vec![Action::singleton(0), Action::singleton(1)]; n],
        vec![table(values.clone()), table(values)],
    )
    .expect("identical-resources fixture")
}

/// Singleton cost-sharing game with `d_r(x) = 1/x`, `d_s(x) = 4/(3x)`,
/// action sets `{r, s}` and `{s}`: the greedy outcome `(r, s)` is unstable.
pub fn thm11_game() -> CongestionGame {
    let spec = CostSharingSpec::Axb(vec![
        (Rational::one(), Rational::zero()),
        (Rational::new(4, 3), Rational::zero()),
    ]);
    cost_sharing_game(
        &spec,
        vec!["r".into(), "s".into()],
        vec![
            vec![Action::singleton(0), Action::singleton(1)],
            vec![Action::singleton(1)],
        ],
        2,
    )
    .expect("singleton cost-sharing fixture")
}

/// Path graph on three vertices with edge weights `w_12 = 0`, `w_23 = 2`,
/// `w_13 = 1` (vertices 0-indexed): for the order `1, 2, 3` an unstable SPO
/// exists, while tree-respecting orders give only unanimous outcomes.
pub fn example5_consensus() -> ConsensusGame {
    ConsensusGame::new(
        3,
        vec![(1, 2, Rational::int(2)), (0, 2, Rational::int(1))],
    )
    .expect("consensus fixture")
}

fn table_ni(values: Vec<Rational>) -> DelayTable {
    DelayTable::non_increasing(values).expect("non-increasing fixture table")
}
