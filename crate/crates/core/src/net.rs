//! Elementary Petri nets, their firing rule and state-space exploration.
//!
//! A net is `(P, E, pre, post, s0)`. A state is a subset of `P`, stored as a
//! [`Marking`]. Event `a` is enabled at `s` when `pre(a) ⊆ s` and
//! `(s ∖ pre(a)) ∩ post(a) = ∅`; firing yields `(s ∖ pre(a)) ∪ post(a)`.
//! Firing is a partial map: a disabled event gives `None`, which is a valid
//! answer and not an error.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A set of occupied places, encoded as a bit vector in declared place order.
///
/// Place 0 is the most significant bit, so the derived ordering is the
/// numeric order of the state string `ε_1 ε_2 ⋯ ε_|P|` read in binary.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Marking {
    len: usize,
    words: Vec<u64>,
}

impl Marking {
    pub fn empty(len: usize) -> Self {
        Marking {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn from_places<I: IntoIterator<Item = usize>>(len: usize, places: I) -> Self {
        let mut m = Marking::empty(len);
        for p in places {
            m.set(p, true);
        }
        m
    }

    /// Decodes the `index`-th marking in numeric order (`index < 2^len`).
    pub fn from_index(len: usize, index: u64) -> Self {
        assert!(len <= 64, "index decoding needs at most 64 places");
        Marking::from_places(len, (0..len).filter(|&p| index >> (len - 1 - p) & 1 == 1))
    }

    /// Number of places of the underlying net.
    pub fn width(&self) -> usize {
        self.len
    }

    pub fn contains(&self, place: usize) -> bool {
        assert!(place < self.len, "place {place} out of range");
        self.words[place / WORD] >> (WORD - 1 - place % WORD) & 1 == 1
    }

    pub fn set(&mut self, place: usize, occupied: bool) {
        assert!(place < self.len, "place {place} out of range");
        let bit = 1u64 << (WORD - 1 - place % WORD);
        if occupied {
            self.words[place / WORD] |= bit;
        } else {
            self.words[place / WORD] &= !bit;
        }
    }

    pub fn occupied(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&p| self.contains(p))
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset(&self, other: &Marking) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn intersects(&self, other: &Marking) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    fn zip_with(&self, other: &Marking, f: impl Fn(u64, u64) -> u64) -> Marking {
        Marking {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Binary value of the state string, most significant bit first.
    ///
    /// For the pipeline places `p_1 < ⋯ < p_{n-1}` this is
    /// `ε_1·2^{n-2} + ⋯ + ε_{n-1}·2^0`.
    ///
    /// # Panics
    /// If the marking has more than 64 places.
    pub fn state_index(&self) -> u64 {
        assert!(self.len <= 64, "state_index needs at most 64 places");
        if self.len == 0 {
            0
        } else {
            self.words[0] >> (WORD - self.len)
        }
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 0..self.len {
            f.write_str(if self.contains(p) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Marking({self})")
    }
}

impl FromStr for Marking {
    type Err = Error;

    /// Parses a `0`/`1` state string such as `"101"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut m = Marking::empty(s.len());
        for (p, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => m.set(p, true),
                _ => return Err(Error::UnknownState(s.to_string())),
            }
        }
        Ok(m)
    }
}

/// Index of an event in its net's declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventId(usize);

impl EventId {
    pub const fn new(index: usize) -> Self {
        EventId(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }
}

/// An event as declared: its name and the names of its pre and post places.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventDef {
    pub name: String,
    pub pre: Vec<String>,
    pub post: Vec<String>,
}

impl EventDef {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        pre: impl IntoIterator<Item = S>,
        post: impl IntoIterator<Item = S>,
    ) -> Self {
        EventDef {
            name: name.into(),
            pre: pre.into_iter().map(Into::into).collect(),
            post: post.into_iter().map(Into::into).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Transition {
    pre: Marking,
    post: Marking,
    neighborhood: Marking,
}

/// An elementary Petri net `(P, E, pre, post, s0)`.
///
/// Event declaration order is the linear order on `E` used when building
/// cubes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryNet {
    places: Vec<String>,
    events: Vec<EventDef>,
    initial: Marking,
    place_index: HashMap<String, usize>,
    event_index: HashMap<String, usize>,
    transitions: Vec<Transition>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl ElementaryNet {
    pub fn new<S: AsRef<str>>(places: Vec<String>, events: Vec<EventDef>, initial: &[S]) -> Result<Self> {
        let mut names = HashSet::new();
        for id in places.iter().chain(events.iter().map(|e| &e.name)) {
            if !is_identifier(id) {
                return Err(Error::InvalidIdentifier(id.clone()));
            }
            if !names.insert(id.as_str()) {
                return Err(Error::DuplicateIdentifier(id.clone()));
            }
        }
        let place_index: HashMap<String, usize> =
            places.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let n = places.len();
        let resolve = |names: &[String]| -> Result<Marking> {
            let mut m = Marking::empty(n);
            for name in names {
                let p = *place_index
                    .get(name)
                    .ok_or_else(|| Error::UnknownPlace(name.clone()))?;
                m.set(p, true);
            }
            Ok(m)
        };
        let transitions = events
            .iter()
            .map(|e| {
                let pre = resolve(&e.pre)?;
                let post = resolve(&e.post)?;
                let neighborhood = pre.zip_with(&post, |a, b| a | b);
                Ok(Transition {
                    pre,
                    post,
                    neighborhood,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let initial: Vec<String> = initial.iter().map(|s| s.as_ref().to_string()).collect();
        let initial = resolve(&initial)?;
        let event_index = events
            .iter()
            .enumerate()
            .map(|(i, e)| (e.name.clone(), i))
            .collect();
        Ok(ElementaryNet {
            places,
            events,
            initial,
            place_index,
            event_index,
            transitions,
        })
    }

    pub fn places(&self) -> &[String] {
        &self.places
    }

    pub fn events(&self) -> &[EventDef] {
        &self.events
    }

    pub fn initial(&self) -> &Marking {
        &self.initial
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn event_count(&self) -> usize {
        self.events.len()
    }

    pub fn event_ids(&self) -> impl Iterator<Item = EventId> {
        (0..self.events.len()).map(EventId)
    }

    pub fn event_id(&self, name: &str) -> Result<EventId> {
        self.event_index
            .get(name)
            .map(|&i| EventId(i))
            .ok_or_else(|| Error::UnknownEvent(name.to_string()))
    }

    pub fn place_id(&self, name: &str) -> Result<usize> {
        self.place_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownPlace(name.to_string()))
    }

    pub fn event_name(&self, id: EventId) -> &str {
        &self.events[id.0].name
    }

    /// Builds a marking of this net from occupied place names.
    pub fn marking<S: AsRef<str>>(&self, occupied: &[S]) -> Result<Marking> {
        let places = occupied
            .iter()
            .map(|s| self.place_id(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Marking::from_places(self.place_count(), places))
    }

    fn check_event(&self, id: EventId) -> Result<()> {
        if id.0 < self.events.len() {
            Ok(())
        } else {
            Err(Error::UnknownEvent(format!("#{}", id.0)))
        }
    }

    fn check_marking(&self, s: &Marking) -> Result<()> {
        if s.width() == self.place_count() {
            Ok(())
        } else {
            Err(Error::MarkingSize {
                expected: self.place_count(),
                found: s.width(),
            })
        }
    }

    /// Whether `a` and `b` are distinct events with disjoint neighborhoods
    /// `pre ∪ post`. The relation is irreflexive even for events with an
    /// empty neighborhood.
    pub fn independent(&self, a: EventId, b: EventId) -> Result<bool> {
        self.check_event(a)?;
        self.check_event(b)?;
        Ok(self.independent_unchecked(a, b))
    }

    pub(crate) fn independent_unchecked(&self, a: EventId, b: EventId) -> bool {
        a != b
            && !self.transitions[a.0]
                .neighborhood
                .intersects(&self.transitions[b.0].neighborhood)
    }

    /// Fires `a` at `s`. `Ok(None)` means `a` is not enabled at `s`.
    pub fn fire(&self, s: &Marking, a: EventId) -> Result<Option<Marking>> {
        self.check_event(a)?;
        self.check_marking(s)?;
        Ok(self.step(s, a))
    }

    pub(crate) fn step(&self, s: &Marking, a: EventId) -> Option<Marking> {
        let t = &self.transitions[a.0];
        if !t.pre.is_subset(s) {
            return None;
        }
        let rest = s.zip_with(&t.pre, |x, p| x & !p);
        if rest.intersects(&t.post) {
            return None;
        }
        Some(rest.zip_with(&t.post, |x, q| x | q))
    }

    /// Left fold of [`fire`](Self::fire) over `word`; the empty word returns `s`.
    pub fn fire_trace(&self, s: &Marking, word: &[EventId]) -> Result<Option<Marking>> {
        self.check_marking(s)?;
        for &a in word {
            self.check_event(a)?;
        }
        Ok(self.step_trace(s, word))
    }

    pub(crate) fn step_trace(&self, s: &Marking, word: &[EventId]) -> Option<Marking> {
        let mut cur = s.clone();
        for &a in word {
            cur = self.step(&cur, a)?;
        }
        Some(cur)
    }

    /// Name-based form of [`independent`](Self::independent).
    pub fn independent_named(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.independent_unchecked(self.event_id(a)?, self.event_id(b)?))
    }

    /// Name-based form of [`fire_trace`](Self::fire_trace).
    pub fn fire_named<S: AsRef<str>>(&self, s: &Marking, word: &[S]) -> Result<Option<Marking>> {
        let ids = word
            .iter()
            .map(|w| self.event_id(w.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.fire_trace(s, &ids)
    }

    /// The same net with events declared in a different order.
    /// `order[k]` is the old index of the event placed at position `k`.
    pub fn reorder_events(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.events.len()];
        if order.len() != self.events.len()
            || order
                .iter()
                .any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::UnknownEvent(format!("bad permutation {order:?}")));
        }
        let events = order.iter().map(|&i| self.events[i].clone()).collect();
        self.with_events(events)
    }

    /// The same net without the named events.
    pub fn without_events<S: AsRef<str>>(&self, drop: &[S]) -> Result<Self> {
        for d in drop {
            self.event_id(d.as_ref())?;
        }
        let events = self
            .events
            .iter()
            .filter(|e| !drop.iter().any(|d| d.as_ref() == e.name))
            .cloned()
            .collect();
        self.with_events(events)
    }

    fn with_events(&self, events: Vec<EventDef>) -> Result<Self> {
        let initial: Vec<&str> = self.initial.occupied().map(|p| self.places[p].as_str()).collect();
        ElementaryNet::new(self.places.clone(), events, &initial)
    }
}

/// Which markings a [`StateSpace`] ranges over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Closure of the initial marking under firing.
    #[default]
    Reachable,
    /// The full power set `{0,1}^P`.
    AllStates,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Reachable => "reachable",
            Mode::AllStates => "all-states",
        })
    }
}

pub const DEFAULT_STATE_CAP: usize = 1 << 20;

/// A forward-closed set of markings together with the transitions between
/// them. States are kept sorted by [`Marking`] order.
#[derive(Clone, Debug)]
pub struct StateSpace {
    net: Arc<ElementaryNet>,
    mode: Option<Mode>,
    states: Vec<Marking>,
    index: HashMap<Marking, usize>,
    successors: Vec<Vec<(EventId, usize)>>,
}

/// Explores the state space of `net` in the given mode, failing when more
/// than `cap` states would be produced.
pub fn explore(net: Arc<ElementaryNet>, mode: Mode, cap: usize) -> Result<StateSpace> {
    let states = match mode {
        Mode::AllStates => {
            let p = net.place_count();
            if p >= usize::BITS as usize - 1 || (1usize << p) > cap {
                return Err(Error::StateCapExceeded { cap });
            }
            (0..1u64 << p).map(|i| Marking::from_index(p, i)).collect()
        }
        Mode::Reachable => {
            let mut seen: HashSet<Marking> = HashSet::new();
            let mut queue = VecDeque::new();
            seen.insert(net.initial().clone());
            queue.push_back(net.initial().clone());
            while let Some(s) = queue.pop_front() {
                for a in net.event_ids() {
                    if let Some(t) = net.step(&s, a) {
                        if !seen.contains(&t) {
                            if seen.len() >= cap {
                                return Err(Error::StateCapExceeded { cap });
                            }
                            seen.insert(t.clone());
                            queue.push_back(t);
                        }
                    }
                }
            }
            seen.into_iter().collect()
        }
    };
    StateSpace::assemble(net, Some(mode), states)
}

impl StateSpace {
    /// Wraps a caller-supplied state set, which must be forward closed.
    pub fn from_states(net: Arc<ElementaryNet>, states: Vec<Marking>) -> Result<Self> {
        for s in &states {
            net.check_marking(s)?;
        }
        StateSpace::assemble(net, None, states)
    }

    fn assemble(net: Arc<ElementaryNet>, mode: Option<Mode>, mut states: Vec<Marking>) -> Result<Self> {
        states.sort();
        states.dedup();
        let index: HashMap<Marking, usize> = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut successors = Vec::with_capacity(states.len());
        for s in &states {
            let mut out = Vec::new();
            for a in net.event_ids() {
                if let Some(t) = net.step(s, a) {
                    match index.get(&t) {
                        Some(&j) => out.push((a, j)),
                        None => {
                            return Err(Error::NotForwardClosed {
                                state: s.to_string(),
                                event: net.event_name(a).to_string(),
                                target: t.to_string(),
                            })
                        }
                    }
                }
            }
            successors.push(out);
        }
        Ok(StateSpace {
            net,
            mode,
            states,
            index,
            successors,
        })
    }

    pub fn net(&self) -> &Arc<ElementaryNet> {
        &self.net
    }

    /// How the states were produced; `None` for a caller-supplied set.
    pub fn mode(&self) -> Option<Mode> {
        self.mode
    }

    pub fn states(&self) -> &[Marking] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn contains(&self, s: &Marking) -> bool {
        self.index.contains_key(s)
    }

    pub fn index_of(&self, s: &Marking) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Outgoing transitions of the `i`-th state as `(event, target index)`.
    pub fn successors(&self, i: usize) -> &[(EventId, usize)] {
        &self.successors[i]
    }

    /// States at which no event fires into the space.
    pub fn deadlocks(&self) -> Vec<Marking> {
        self.states
            .iter()
            .zip(&self.successors)
            .filter(|(_, out)| out.is_empty())
            .map(|(s, _)| s.clone())
            .collect()
    }

    /// States with no incoming transition from within the space.
    pub fn senders(&self) -> Vec<Marking> {
        let mut hit = vec![false; self.states.len()];
        for out in &self.successors {
            for &(_, j) in out {
                hit[j] = true;
            }
        }
        self.states
            .iter()
            .zip(hit)
            .filter(|(_, h)| !h)
            .map(|(s, _)| s.clone())
            .collect()
    }
}
