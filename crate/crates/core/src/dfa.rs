//! Quota-based DFA expansion: given a minimal DFA and a size for each
//! Myhill-Nerode class, build a random connected DFA with those class sizes
//! that accepts the same language.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::feasibility::achievable;
use crate::graph::{Mode, MultiGraph, QuotaSpec};
use crate::search::{quota_search, Discipline, SearchConfig, SearchError};

pub type StateId = usize;

/// A complete deterministic automaton. `delta[state][symbol]` is the
/// successor; symbols are indices into `alphabet`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: StateId,
    accepts: BTreeSet<StateId>,
    delta: Vec<Vec<StateId>>,
}

impl Dfa {
    pub fn new(
        alphabet: Vec<String>,
        states: Vec<String>,
        initial: StateId,
        accepts: BTreeSet<StateId>,
        delta: Vec<Vec<StateId>>,
    ) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::InvalidDfa("no states".into()));
        }
        if initial >= n {
            return Err(Error::InvalidDfa(format!("initial state {initial} out of range")));
        }
        if let Some(a) = accepts.iter().find(|&&a| a >= n) {
            return Err(Error::InvalidDfa(format!("accepting state {a} out of range")));
        }
        if delta.len() != n {
            return Err(Error::InvalidDfa(format!("{} transition rows for {n} states", delta.len())));
        }
        for (s, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::InvalidDfa(format!("state {s} has {} transitions", row.len())));
            }
            if let Some(t) = row.iter().find(|&&t| t >= n) {
                return Err(Error::InvalidDfa(format!("transition from {s} to missing state {t}")));
            }
        }
        let distinct: BTreeSet<&String> = alphabet.iter().collect();
        if distinct.len() != alphabet.len() {
            return Err(Error::InvalidDfa("repeated symbol".into()));
        }
        Ok(Dfa {
            alphabet,
            states,
            initial,
            accepts,
            delta,
        })
    }

    /// States named `0..n`.
    pub fn unnamed(alphabet: &[&str], initial: StateId, accepts: &[StateId], delta: Vec<Vec<StateId>>) -> Result<Self> {
        Dfa::new(
            alphabet.iter().map(|s| s.to_string()).collect(),
            (0..delta.len()).map(|i| i.to_string()).collect(),
            initial,
            accepts.iter().copied().collect(),
            delta,
        )
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn accepts(&self) -> &BTreeSet<StateId> {
        &self.accepts
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accepts.contains(&s)
    }

    pub fn delta(&self) -> &[Vec<StateId>] {
        &self.delta
    }

    pub fn step(&self, s: StateId, symbol: usize) -> StateId {
        self.delta[s][symbol]
    }

    /// Runs the automaton on a word of symbol indices.
    pub fn accepts_word(&self, word: &[usize]) -> bool {
        self.is_accepting(word.iter().fold(self.initial, |s, &a| self.delta[s][a]))
    }

    /// States reachable from the initial state, in breadth-first order with
    /// symbols tried in alphabet order.
    pub fn reachable(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.state_count()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            for &t in &self.delta[order[i]] {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    pub fn is_connected(&self) -> bool {
        self.reachable().len() == self.state_count()
    }

    /// Same alphabet, and the reachable parts agree up to renaming states.
    pub fn isomorphic(&self, other: &Dfa) -> bool {
        if self.alphabet != other.alphabet {
            return false;
        }
        let (a, b) = (self.reachable(), other.reachable());
        if a.len() != b.len() {
            return false;
        }
        let pos = |order: &[StateId], n: usize| {
            let mut p = vec![usize::MAX; n];
            for (i, &s) in order.iter().enumerate() {
                p[s] = i;
            }
            p
        };
        let (pa, pb) = (pos(&a, self.state_count()), pos(&b, other.state_count()));
        a.iter().zip(&b).all(|(&x, &y)| {
            self.is_accepting(x) == other.is_accepting(y)
                && self.delta[x].iter().zip(&other.delta[y]).all(|(&s, &t)| pa[s] == pb[t])
        })
    }
}

/// One edge per `(state, symbol)`, ordered by state then symbol.
pub fn dfa_graph(d: &Dfa) -> MultiGraph {
    let edges = d
        .delta
        .iter()
        .enumerate()
        .flat_map(|(s, row)| row.iter().map(move |&t| (s, t)));
    MultiGraph::new(d.state_count(), edges)
        .expect("transitions are in range")
        .with_names(d.states.clone())
        .expect("one name per state")
}

fn initial_portfolio(d: &Dfa) -> Vec<usize> {
    let mut s = vec![0; d.state_count()];
    s[d.initial] = 1;
    s
}

/// Whether some connected DFA has the given Myhill-Nerode class sizes over
/// the minimal DFA `d_min`.
pub fn feasible_class_sizes(d_min: &Dfa, sizes: &[usize]) -> Result<bool> {
    crate::graph::check_len("class sizes", d_min.state_count(), sizes.len())?;
    if sizes.contains(&0) {
        return Ok(false);
    }
    let g = dfa_graph(d_min);
    let spec = QuotaSpec::new(&g, sizes.to_vec(), initial_portfolio(d_min))?;
    achievable(&g, &spec, Mode::Exact)
}

/// Expanded DFA together with the class of each of its states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub dfa: Dfa,
    pub class_of: Vec<StateId>,
}

/// A random connected DFA with `sizes[c]` states over each state `c` of
/// `d_min`, equivalent to it.
///
/// A quota tree found with a random queue fixes one incoming transition for
/// every state but the initial one; every other transition goes to a state
/// drawn uniformly from the class it must land in. The search uses stream 0
/// of `seed` and the completion stream 1. The result is not uniform over
/// all such DFAs.
pub fn expand_dfa(d_min: &Dfa, sizes: &[usize], seed: u64) -> Result<Expansion> {
    if !feasible_class_sizes(d_min, sizes)? {
        return Err(Error::InfeasibleSizes(sizes.to_vec()));
    }
    let g = dfa_graph(d_min);
    let spec = QuotaSpec::new(&g, sizes.to_vec(), initial_portfolio(d_min))?;
    let cfg = SearchConfig::new(Discipline::Random(seed), Mode::Exact);
    let tree = match quota_search(&g, &spec, cfg, None) {
        Ok(t) => t,
        Err(SearchError::Input(e)) => return Err(e),
        Err(SearchError::Incomplete { .. }) => unreachable!("achievable quotas always succeed"),
    };
    let k = d_min.alphabet.len();
    let n = tree.node_count();
    let class_of: Vec<StateId> = tree.nodes.iter().map(|node| node.image).collect();
    let mut delta: Vec<Vec<Option<StateId>>> = vec![vec![None; k]; n];
    for node in &tree.nodes {
        if let (Some(p), Some(e)) = (node.parent, node.parent_edge) {
            delta[p][e % k] = Some(node.id);
        }
    }
    let mut members: Vec<Vec<StateId>> = vec![Vec::new(); d_min.state_count()];
    for (s, &c) in class_of.iter().enumerate() {
        members[c].push(s);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let delta: Vec<Vec<StateId>> = delta
        .into_iter()
        .enumerate()
        .map(|(s, row)| {
            row.into_iter()
                .enumerate()
                .map(|(a, t)| {
                    t.unwrap_or_else(|| {
                        let class = &members[d_min.delta[class_of[s]][a]];
                        class[rng.random_range(0..class.len())]
                    })
                })
                .collect()
        })
        .collect();
    let mut index_in_class = vec![0; d_min.state_count()];
    let states = class_of
        .iter()
        .map(|&c| {
            index_in_class[c] += 1;
            format!("{}_{}", d_min.states[c], index_in_class[c])
        })
        .collect();
    let accepts = (0..n).filter(|&s| d_min.is_accepting(class_of[s])).collect();
    let root = tree.root_slots[d_min.initial][0].expect("exact forest fills its root slot");
    let dfa = Dfa::new(d_min.alphabet.clone(), states, root, accepts, delta)?;
    Ok(Expansion { dfa, class_of })
}

/// Minimal DFA of the reachable part of `d`, by partition refinement.
/// States are numbered breadth-first from the initial state and keep the
/// name of the first state of their class met in that order.
pub fn minimize_dfa(d: &Dfa) -> Dfa {
    let order = d.reachable();
    let mut block: HashMap<StateId, usize> = order.iter().map(|&s| (s, usize::from(d.is_accepting(s)))).collect();
    let mut count = block.values().collect::<BTreeSet<_>>().len();
    loop {
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut next = HashMap::new();
        for &s in &order {
            let signature = (block[&s], d.delta[s].iter().map(|t| block[t]).collect());
            let fresh = ids.len();
            next.insert(s, *ids.entry(signature).or_insert(fresh));
        }
        let refined = ids.len();
        block = next;
        if refined == count {
            break;
        }
        count = refined;
    }
    // Renumber blocks breadth-first.
    let mut number: HashMap<usize, StateId> = HashMap::new();
    let mut representative = Vec::new();
    let mut queue = VecDeque::from([d.initial]);
    number.insert(block[&d.initial], 0);
    representative.push(d.initial);
    while let Some(s) = queue.pop_front() {
        for &t in &d.delta[s] {
            if let std::collections::hash_map::Entry::Vacant(slot) = number.entry(block[&t]) {
                slot.insert(representative.len());
                representative.push(t);
                queue.push_back(t);
            }
        }
    }
    let delta = representative
        .iter()
        .map(|&s| d.delta[s].iter().map(|t| number[&block[t]]).collect())
        .collect();
    let accepts = representative
        .iter()
        .enumerate()
        .filter(|(_, &s)| d.is_accepting(s))
        .map(|(i, _)| i)
        .collect();
    let states = representative.iter().map(|&s| d.states[s].clone()).collect();
    Dfa::new(d.alphabet.clone(), states, 0, accepts, delta).expect("quotient of a valid DFA")
}

/// Whether the two automata accept the same language.
pub fn dfa_equivalent(d1: &Dfa, d2: &Dfa) -> Result<bool> {
    if d1.alphabet != d2.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let mut seen = BTreeSet::from([(d1.initial, d2.initial)]);
    let mut queue = VecDeque::from([(d1.initial, d2.initial)]);
    while let Some((a, b)) = queue.pop_front() {
        if d1.is_accepting(a) != d2.is_accepting(b) {
            return Ok(false);
        }
        for sym in 0..d1.alphabet.len() {
            let pair = (d1.delta[a][sym], d2.delta[b][sym]);
            if seen.insert(pair) {
                queue.push_back(pair);
            }
        }
    }
    Ok(true)
}

/// Words over `{a, b}` with no two consecutive `b`s: state 0 after `a` (or
/// at the start), 1 after a single `b`, 2 dead.
pub fn fibonacci_dfa() -> Dfa {
    Dfa::new(
        vec!["a".into(), "b".into()],
        vec!["A".into(), "B".into(), "C".into()],
        0,
        BTreeSet::from([0, 1]),
        vec![vec![0, 1], vec![0, 2], vec![2, 2]],
    )
    .expect("valid")
}
