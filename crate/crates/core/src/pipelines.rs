//! The pipeline net family and a runner that checks its homology claims.
//!
//! `P_n` is the chain `t_1 → p_1 → t_2 → ⋯ → p_{n-1} → t_n`; `N_n` drops
//! `t_1` and `N'_n` drops `t_2`. Generated nets start from the empty marking.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::cubical::{build_q, NamedCubes, SemicubicalSet};
use crate::error::{Error, Result};
use crate::homology::{
    all_zero, cubical_homology, degree, directed_cubical_homology, is_point_like, mv_check, Endpoint,
    HomologyGroup,
};
use crate::net::{explore, ElementaryNet, EventDef, Marking, Mode, StateSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    /// The full pipeline.
    P,
    /// `t_1` deleted.
    N,
    /// `t_2` deleted.
    NPrime,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::P => "P",
            Variant::N => "N",
            Variant::NPrime => "Nprime",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "P" | "p" => Ok(Variant::P),
            "N" | "n" => Ok(Variant::N),
            "Nprime" | "nprime" | "N'" => Ok(Variant::NPrime),
            _ => Err(format!(
                "unknown pipeline variant `{s}` (expected P, N or Nprime)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PipelineSpec {
    pub n: usize,
    pub variant: Variant,
}

impl PipelineSpec {
    pub fn new(n: usize, variant: Variant) -> Self {
        PipelineSpec { n, variant }
    }
}

impl fmt::Display for PipelineSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.variant, self.n)
    }
}

impl FromStr for PipelineSpec {
    type Err = String;

    /// Parses `N` or `N,variant`, e.g. `4` or `4,Nprime`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (n, v) = match s.split_once(',') {
            Some((n, v)) => (n, v.trim().parse()?),
            None => (s, Variant::P),
        };
        let n = n
            .trim()
            .parse()
            .map_err(|_| format!("bad pipeline length `{n}`"))?;
        Ok(PipelineSpec::new(n, v))
    }
}

/// Builds `P_n`, `N_n` or `N'_n` with places `p1..p{n-1}`, events `t1..tn`
/// and the empty initial marking.
pub fn make_pipeline(spec: PipelineSpec) -> Result<ElementaryNet> {
    let n = spec.n;
    if n < 2 {
        return Err(Error::InvalidPipeline(n));
    }
    let places: Vec<String> = (1..n).map(|i| format!("p{i}")).collect();
    let events = (1..=n)
        .filter(|&i| !matches!((spec.variant, i), (Variant::N, 1) | (Variant::NPrime, 2)))
        .map(|i| {
            let pre: Vec<String> = if i > 1 {
                vec![format!("p{}", i - 1)]
            } else {
                vec![]
            };
            let post: Vec<String> = if i < n { vec![format!("p{i}")] } else { vec![] };
            EventDef::new(format!("t{i}"), pre, post)
        })
        .collect();
    ElementaryNet::new(places, events, &Vec::<String>::new())
}

/// One pass/fail line of a [`VerifyReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub n: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] n={} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.n,
            self.name,
            self.detail
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn render(groups: &[HomologyGroup]) -> String {
    groups
        .iter()
        .enumerate()
        .map(|(k, g)| format!("H_{k} = {g}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn all_states(net: ElementaryNet, cap: usize) -> Result<StateSpace> {
    explore(Arc::new(net), Mode::AllStates, cap)
}

/// Whether every transition strictly lowers [`Marking::state_index`].
pub fn descends(space: &StateSpace) -> bool {
    space.states().iter().enumerate().all(|(i, s)| {
        space
            .successors(i)
            .iter()
            .all(|&(_, j)| space.states()[j].state_index() < s.state_index())
    })
}

/// Indices of states reachable from `start` along transitions, or along
/// reversed transitions when `backward`.
pub fn reach(space: &StateSpace, start: usize, backward: bool) -> HashSet<usize> {
    let mut preds = vec![Vec::new(); space.len()];
    if backward {
        for i in 0..space.len() {
            for &(_, j) in space.successors(i) {
                preds[j].push(i);
            }
        }
    }
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        let next: Vec<usize> = if backward {
            preds[i].clone()
        } else {
            space.successors(i).iter().map(|&(_, j)| j).collect()
        };
        for j in next {
            if seen.insert(j) {
                queue.push_back(j);
            }
        }
    }
    seen
}

/// Cube counts of `Q(N_m)`; `N_1` is a single point.
fn n_counts(m: usize, cap: usize) -> Result<Vec<usize>> {
    if m < 2 {
        return Ok(vec![1]);
    }
    let space = all_states(make_pipeline(PipelineSpec::new(m, Variant::N))?, cap)?;
    Ok(build_q(&space)?.counts())
}

struct Recorder<'a> {
    n: usize,
    report: &'a mut VerifyReport,
}

impl Recorder<'_> {
    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.report.checks.push(Check {
            n: self.n,
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }
}

fn marking_list(ms: &[Marking]) -> String {
    let v: Vec<String> = ms.iter().map(ToString::to_string).collect();
    format!("{{{}}}", v.join(", "))
}

/// Runs every pipeline check for `n = 2..=n_max`.
pub fn verify_theorems(n_max: usize, cap: usize) -> Result<VerifyReport> {
    if n_max < 2 {
        return Err(Error::InvalidPipeline(n_max));
    }
    let mut report = VerifyReport::default();
    for n in 2..=n_max {
        verify_one(n, cap, &mut report)?;
    }
    Ok(report)
}

fn verify_one(n: usize, cap: usize, report: &mut VerifyReport) -> Result<()> {
    let mut rec = Recorder { n, report };
    let p_net = Arc::new(make_pipeline(PipelineSpec::new(n, Variant::P))?);
    let p_all = explore(p_net.clone(), Mode::AllStates, cap)?;
    let p_reach = explore(p_net, Mode::Reachable, cap)?;
    rec.check(
        "reachable set saturates",
        p_reach.states() == p_all.states(),
        format!("{} of {} states", p_reach.len(), p_all.len()),
    );

    let q = build_q(&p_all)?;
    let violations = q.validate();
    rec.check(
        "Q(P) cubical identities",
        violations.is_empty(),
        format!("{} violations", violations.len()),
    );

    let h = cubical_homology(&q)?;
    let expected = degree(&h, 0) == HomologyGroup::free(1)
        && degree(&h, 1) == HomologyGroup::free(1)
        && h.iter().skip(2).all(HomologyGroup::is_zero);
    rec.check("H(P) = Z, Z, 0", expected, render(&h));
    for e in Endpoint::BOTH {
        let hd = directed_cubical_homology(&q, e)?;
        rec.check(&format!("H^{}(P) = 0", e.bit()), all_zero(&hd), render(&hd));
    }

    let deadlocks = p_all.deadlocks();
    let senders = p_all.senders();
    rec.check(
        "P has no deadlocks or senders",
        deadlocks.is_empty() && senders.is_empty(),
        format!(
            "deadlocks {}, senders {}",
            marking_list(&deadlocks),
            marking_list(&senders)
        ),
    );

    let x1 = q.without_events(&["t1"])?;
    let x2 = q.without_events(&["t2"])?;
    let subnets = [(Variant::N, &x1), (Variant::NPrime, &x2)];
    for (variant, restricted) in subnets {
        let net = make_pipeline(PipelineSpec::new(n, variant))?;
        let space = all_states(net, cap)?;
        let qs = build_q(&space)?;
        rec.check(
            &format!("Q({variant}) is an event restriction of Q(P)"),
            qs.named_cubes() == restricted.named_cubes() && qs.validate().is_empty(),
            format!("counts {:?}", qs.counts()),
        );
        let hs = cubical_homology(&qs)?;
        rec.check(&format!("H({variant}) = Z, 0"), is_point_like(&hs), render(&hs));
        for e in Endpoint::BOTH {
            let hd = directed_cubical_homology(&qs, e)?;
            rec.check(
                &format!("H^{}({variant}) = Z, 0", e.bit()),
                is_point_like(&hd),
                render(&hd),
            );
        }
        for (e, found) in [
            (Endpoint::Initial, space.deadlocks()),
            (Endpoint::Final, space.senders()),
        ] {
            let h0 = degree(&directed_cubical_homology(&qs, e)?, 0);
            rec.check(
                &format!(
                    "rank H^{}_0({variant}) counts {}",
                    e.bit(),
                    if e == Endpoint::Initial {
                        "deadlocks"
                    } else {
                        "senders"
                    }
                ),
                h0.betti == found.len() && h0.torsion.is_empty(),
                format!("{h0} vs {}", marking_list(&found)),
            );
        }
        if variant == Variant::N {
            let top = Marking::from_index(n - 1, (1u64 << (n - 1)) - 1);
            let bottom = Marking::empty(n - 1);
            rec.check(
                "N: deadlock 0..0, sender 1..1",
                space.deadlocks() == [bottom.clone()] && space.senders() == [top.clone()],
                format!(
                    "deadlocks {}, senders {}",
                    marking_list(&space.deadlocks()),
                    marking_list(&space.senders())
                ),
            );
            rec.check("N: transitions lower the state index", descends(&space), "");
            let (ti, bi) = (space.index_of(&top), space.index_of(&bottom));
            let extremal = match (ti, bi) {
                (Some(ti), Some(bi)) => {
                    reach(&space, ti, false).len() == space.len()
                        && reach(&space, bi, true).len() == space.len()
                }
                _ => false,
            };
            rec.check("N: 1..1 reaches all, all reach 0..0", extremal, "");
        }
    }
    for (name, space) in [("P", &p_all)] {
        for e in Endpoint::BOTH {
            let h0 = degree(&directed_cubical_homology(&q, e)?, 0);
            let count = if e == Endpoint::Initial {
                space.deadlocks().len()
            } else {
                space.senders().len()
            };
            rec.check(
                &format!("rank H^{}_0({name}) counts extremal states", e.bit()),
                h0.betti == count && h0.torsion.is_empty(),
                format!("{h0} vs {count}"),
            );
        }
    }

    let join = x1.union(&x2)?;
    rec.check(
        "Q(P) = Q(N) ∪ Q(N')",
        join == q,
        format!("counts {:?}", join.counts()),
    );
    let meet = x1.intersection(&x2)?;
    let per = meet.component_counts();
    let want = n_counts(n - 1, cap)?;
    let trim = |v: &Vec<usize>| {
        let mut v = v.clone();
        while v.len() > 1 && v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    rec.check(
        "Q(N) ∩ Q(N') is two copies of Q(N_{n-1})",
        per.len() == 2 && per.iter().all(|c| trim(c) == want),
        format!("component counts {per:?}, Q(N_{}) counts {want:?}", n - 1),
    );
    let target = n_named(n - 1, cap)?;
    let relabelled = (0..per.len())
        .map(|l| meet.component(l).map(|c| shift_down(&c) == target))
        .collect::<Result<Vec<_>>>()?;
    rec.check(
        "intersection components relabel onto Q(N_{n-1})",
        relabelled.len() == 2 && relabelled.iter().all(|&b| b),
        format!("{relabelled:?}"),
    );
    let mv = mv_check(&x1, &x2)?;
    rec.check(
        "Mayer-Vietoris sequence exact",
        mv.exact(),
        format!("{} grades", mv.grades.len()),
    );
    rec.check(
        "H_0(θ) is the all-ones 2x2 matrix",
        mv.h0_theta == vec![vec![1, 1], vec![1, 1]],
        format!("{:?}", mv.h0_theta),
    );
    rec.check(
        "Euler characteristic additive",
        mv.euler_additive(),
        format!("{:?}", mv.euler),
    );
    Ok(())
}

/// Named cubes of a pipeline sub-complex after deleting the first place and
/// shifting every index down by one (`p_k ↦ p_{k-1}`, `t_k ↦ t_{k-1}`).
pub fn shift_down(x: &SemicubicalSet) -> NamedCubes {
    x.named_cubes()
        .into_iter()
        .map(|g| {
            g.into_iter()
                .map(|(base, events)| {
                    let events = events
                        .iter()
                        .map(|e| {
                            let k: usize = e[1..].parse().expect("pipeline event name");
                            format!("t{}", k - 1)
                        })
                        .collect();
                    (base[1..].to_string(), events)
                })
                .collect()
        })
        .collect()
}

/// Named cubes of `Q(N_m)`, with `N_1` the one-point complex.
fn n_named(m: usize, cap: usize) -> Result<NamedCubes> {
    if m < 2 {
        return Ok(vec![BTreeSet::from([(String::new(), Vec::new())])]);
    }
    let space = all_states(make_pipeline(PipelineSpec::new(m, Variant::N))?, cap)?;
    Ok(build_q(&space)?.named_cubes())
}

/// The components of `Q(N'_n)` once its `t_1`-cubes are removed.
pub fn nprime_halves(n: usize, cap: usize) -> Result<Vec<SemicubicalSet>> {
    let space = all_states(make_pipeline(PipelineSpec::new(n, Variant::NPrime))?, cap)?;
    let q = build_q(&space)?.without_events(&["t1"])?;
    (0..q.components().count).map(|l| q.component(l)).collect()
}
