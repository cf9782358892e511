//! Semicubical sets, and the cube complex `Q(S, E, I)` of a state space.
//!
//! An `n`-cube of `Q` is a tuple `(s, a_1 < ⋯ < a_n)` of pairwise independent
//! events such that `s·a_1⋯a_n` is defined and lies in `S`. Faces are
//! `∂_i^ε(s, a) = (s·a_i^ε, a_1, …, â_i, …, a_n)` with `a^0` the empty word.
//!
//! Face tables are stored explicitly, one slot per `(i, ε)` at position
//! `2(i-1) + ε`, so arbitrary semicubical sets can be represented and checked
//! by [`SemicubicalSet::validate`].

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::net::{ElementaryNet, EventId, Marking, StateSpace};

/// A cube `(base, a_1 < ⋯ < a_n)`, identified by its base marking and event
/// tuple. The derived order is base first, then the event tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    base: Marking,
    events: Vec<EventId>,
}

impl Cube {
    pub fn new(base: Marking, events: Vec<EventId>) -> Self {
        Cube { base, events }
    }

    pub fn vertex(base: Marking) -> Self {
        Cube {
            base,
            events: Vec::new(),
        }
    }

    pub fn base(&self) -> &Marking {
        &self.base
    }

    pub fn events(&self) -> &[EventId] {
        &self.events
    }

    pub fn dim(&self) -> usize {
        self.events.len()
    }

    /// Renders as `(01; t1, t3)`.
    pub fn display<'a>(&'a self, net: &'a ElementaryNet) -> impl fmt::Display + 'a {
        CubeDisplay { cube: self, net }
    }
}

struct CubeDisplay<'a> {
    cube: &'a Cube,
    net: &'a ElementaryNet,
}

impl fmt::Display for CubeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.cube.base)?;
        for (k, &a) in self.cube.events.iter().enumerate() {
            f.write_str(if k == 0 { "; " } else { ", " })?;
            f.write_str(self.net.event_name(a))?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Grade {
    cubes: Vec<Cube>,
    index: HashMap<Cube, usize>,
    faces: Vec<Vec<usize>>,
}

impl Grade {
    fn new(cubes: Vec<Cube>, faces: Vec<Vec<usize>>) -> Self {
        let index = cubes.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect();
        Grade { cubes, index, faces }
    }
}

/// A failed check reported by [`SemicubicalSet::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A stored cube's dimension differs from its grade.
    WrongDimension { n: usize, cube: Cube },
    /// The face table of a cube does not have `2n` entries.
    FaceArity { n: usize, cube: Cube, found: usize },
    /// A face points outside grade `n - 1`.
    FaceOutOfRange {
        n: usize,
        i: usize,
        epsilon: u8,
        cube: Cube,
    },
    /// `∂_i^α ∂_j^β ≠ ∂_{j-1}^β ∂_i^α` on `cube`, for `i < j`.
    Identity {
        n: usize,
        i: usize,
        j: usize,
        alpha: u8,
        beta: u8,
        cube: Cube,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongDimension { n, cube } => {
                write!(f, "cube of dimension {} stored in grade {n}", cube.dim())
            }
            Violation::FaceArity { n, found, .. } => {
                write!(f, "grade {n} cube has {found} faces, expected {}", 2 * n)
            }
            Violation::FaceOutOfRange { n, i, epsilon, .. } => {
                write!(f, "face d_{i}^{epsilon} of a grade {n} cube is not stored")
            }
            Violation::Identity {
                n, i, j, alpha, beta, ..
            } => write!(
                f,
                "identity fails in grade {n}: d_{i}^{alpha} d_{j}^{beta} != d_{}^{beta} d_{i}^{alpha}",
                j - 1
            ),
        }
    }
}

/// Connected components of a semicubical set, as labels on its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    /// Component label of each vertex, in grade-0 order.
    pub labels: Vec<usize>,
}

/// Grade-by-grade listing of cubes and face tables, for `--dump-complex`.
/// Cubes of each grade as `(base string, event names)`.
pub type NamedCubes = Vec<BTreeSet<(String, Vec<String>)>>;

#[derive(Clone, Debug, Serialize)]
pub struct ComplexDump {
    pub grades: Vec<GradeDump>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GradeDump {
    pub dim: usize,
    pub cubes: Vec<CubeDump>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CubeDump {
    pub base: String,
    pub events: Vec<String>,
    /// `[∂_i^0, ∂_i^1]` as indices into the previous grade, for `i = 1..n`.
    pub faces: Vec<[usize; 2]>,
}

impl fmt::Display for ComplexDump {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.grades {
            writeln!(f, "grade {} ({} cubes)", g.dim, g.cubes.len())?;
            for (k, c) in g.cubes.iter().enumerate() {
                write!(f, "  [{k}] ({}", c.base)?;
                for (m, e) in c.events.iter().enumerate() {
                    write!(f, "{}{e}", if m == 0 { "; " } else { ", " })?;
                }
                f.write_str(")")?;
                for (i, [lo, hi]) in c.faces.iter().enumerate() {
                    write!(f, " d{}:{lo}/{hi}", i + 1)?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// A finite semicubical set whose cubes are tuples over an ambient net.
#[derive(Clone, Debug)]
pub struct SemicubicalSet {
    net: Arc<ElementaryNet>,
    grades: Vec<Grade>,
}

impl PartialEq for SemicubicalSet {
    fn eq(&self, other: &Self) -> bool {
        self.same_ambient(other) && self.grades == other.grades
    }
}

impl Eq for SemicubicalSet {}

fn slot(i: usize, epsilon: u8) -> usize {
    2 * (i - 1) + epsilon as usize
}

/// Builds `Q(S, E, I)` for a state space, using the net's event order.
pub fn build_q(space: &StateSpace) -> Result<SemicubicalSet> {
    build_q_truncated(space, None)
}

/// Like [`build_q`], but stops after grade `max_grade` when given.
pub fn build_q_truncated(space: &StateSpace, max_grade: Option<usize>) -> Result<SemicubicalSet> {
    let net = space.net();
    let mut grades: Vec<Vec<Cube>> = vec![Vec::new()];
    for (si, s) in space.states().iter().enumerate() {
        grades[0].push(Cube::vertex(s.clone()));
        let enabled: Vec<EventId> = space.successors(si).iter().map(|&(a, _)| a).collect();
        // depth-first over increasing, pairwise independent tuples
        let mut stack: Vec<(Vec<EventId>, Marking, usize)> = vec![(Vec::new(), s.clone(), 0)];
        while let Some((tuple, cur, from)) = stack.pop() {
            for k in (from..enabled.len()).rev() {
                let b = enabled[k];
                if max_grade.is_some_and(|m| tuple.len() >= m) {
                    break;
                }
                if !tuple.iter().all(|&a| net.independent_unchecked(a, b)) {
                    continue;
                }
                let Some(next) = net.step(&cur, b) else {
                    continue;
                };
                if !space.contains(&next) {
                    return Err(Error::NotForwardClosed {
                        state: cur.to_string(),
                        event: net.event_name(b).to_string(),
                        target: next.to_string(),
                    });
                }
                let mut t = tuple.clone();
                t.push(b);
                let n = t.len();
                if grades.len() <= n {
                    grades.resize_with(n + 1, Vec::new);
                }
                grades[n].push(Cube::new(s.clone(), t.clone()));
                stack.push((t, next, k + 1));
            }
        }
    }
    let with_faces = grades
        .into_iter()
        .map(|g| {
            g.into_iter()
                .map(|c| {
                    let faces = formula_faces(net, &c)?;
                    Ok((c, faces))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SemicubicalSet::from_cube_faces(net.clone(), with_faces)
}

fn formula_faces(net: &ElementaryNet, c: &Cube) -> Result<Vec<Cube>> {
    let mut out = Vec::with_capacity(2 * c.dim());
    for i in 0..c.dim() {
        let mut rest = c.events.clone();
        let a = rest.remove(i);
        let moved = net.step(&c.base, a).ok_or_else(|| {
            Error::MalformedComplex(format!(
                "{} does not fire at the base of {}",
                net.event_name(a),
                c.display(net)
            ))
        })?;
        out.push(Cube::new(c.base.clone(), rest.clone()));
        out.push(Cube::new(moved, rest));
    }
    Ok(out)
}

impl SemicubicalSet {
    /// The empty semicubical set over `net`.
    pub fn empty(net: Arc<ElementaryNet>) -> Self {
        SemicubicalSet {
            net,
            grades: vec![Grade::default()],
        }
    }

    /// Assembles a set from cubes and face tables without checking the
    /// cubical identities; see [`validate`](Self::validate). `faces[n][k]`
    /// lists `2n` indices into grade `n - 1`.
    pub fn from_raw(
        net: Arc<ElementaryNet>,
        cubes: Vec<Vec<Cube>>,
        faces: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if cubes.len() != faces.len() || cubes.iter().zip(&faces).any(|(c, f)| c.len() != f.len()) {
            return Err(Error::MalformedComplex(
                "face tables do not match cube lists".into(),
            ));
        }
        let mut grades: Vec<Grade> = cubes
            .into_iter()
            .zip(faces)
            .map(|(c, f)| Grade::new(c, f))
            .collect();
        if grades.is_empty() {
            grades.push(Grade::default());
        }
        if grades.iter().any(|g| g.index.len() != g.cubes.len()) {
            return Err(Error::MalformedComplex("repeated cube".into()));
        }
        Ok(SemicubicalSet { net, grades })
    }

    /// Cube lists and face tables, the inverse of [`from_raw`](Self::from_raw).
    pub fn to_raw(&self) -> (Vec<Vec<Cube>>, Vec<Vec<Vec<usize>>>) {
        (
            self.grades.iter().map(|g| g.cubes.clone()).collect(),
            self.grades.iter().map(|g| g.faces.clone()).collect(),
        )
    }

    /// Sorts each grade and resolves face cubes to indices.
    fn from_cube_faces(net: Arc<ElementaryNet>, grades: Vec<Vec<(Cube, Vec<Cube>)>>) -> Result<Self> {
        let mut out: Vec<Grade> = Vec::with_capacity(grades.len());
        for (n, mut g) in grades.into_iter().enumerate() {
            g.sort_by(|a, b| a.0.cmp(&b.0));
            let (cubes, face_cubes): (Vec<Cube>, Vec<Vec<Cube>>) = g.into_iter().unzip();
            let faces = if n == 0 {
                vec![Vec::new(); cubes.len()]
            } else {
                let below = &out[n - 1];
                face_cubes
                    .iter()
                    .zip(&cubes)
                    .map(|(fs, c)| {
                        fs.iter()
                            .map(|f| {
                                below.index.get(f).copied().ok_or_else(|| {
                                    Error::MalformedComplex(format!(
                                        "face {} of {} is missing",
                                        f.display(&net),
                                        c.display(&net)
                                    ))
                                })
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            out.push(Grade::new(cubes, faces));
        }
        while out.len() > 1 && out.last().is_some_and(|g| g.cubes.is_empty()) {
            out.pop();
        }
        if out.is_empty() {
            out.push(Grade::default());
        }
        Ok(SemicubicalSet { net, grades: out })
    }

    pub fn net(&self) -> &Arc<ElementaryNet> {
        &self.net
    }

    /// Highest nonempty grade, or `None` for the empty set.
    pub fn dim(&self) -> Option<usize> {
        self.grades.iter().rposition(|g| !g.cubes.is_empty())
    }

    /// Number of stored grades (at least one).
    pub fn grade_count(&self) -> usize {
        self.grades.len()
    }

    /// Cubes of grade `n`, in enumeration order; empty above the top grade.
    pub fn grade(&self, n: usize) -> &[Cube] {
        self.grades.get(n).map_or(&[], |g| &g.cubes)
    }

    pub fn len(&self, n: usize) -> usize {
        self.grade(n).len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.iter().all(|g| g.cubes.is_empty())
    }

    /// `|X_n|` for each stored grade.
    pub fn counts(&self) -> Vec<usize> {
        self.grades.iter().map(|g| g.cubes.len()).collect()
    }

    pub fn index_of(&self, n: usize, cube: &Cube) -> Option<usize> {
        self.grades.get(n)?.index.get(cube).copied()
    }

    pub fn contains(&self, cube: &Cube) -> bool {
        self.index_of(cube.dim(), cube).is_some()
    }

    /// Index of `∂_i^ε` of the `k`-th cube of grade `n`.
    pub fn face_index(&self, n: usize, i: usize, epsilon: u8, k: usize) -> Result<usize> {
        if n == 0 || i == 0 || i > n || epsilon > 1 {
            return Err(Error::FaceIndex { n, i });
        }
        let g = self.grades.get(n).ok_or(Error::UnknownCube(n))?;
        let f = g
            .faces
            .get(k)
            .ok_or(Error::UnknownCube(n))?
            .get(slot(i, epsilon))
            .copied()
            .ok_or(Error::FaceIndex { n, i })?;
        if f < self.len(n - 1) {
            Ok(f)
        } else {
            Err(Error::MalformedComplex(format!("face index {f} out of range")))
        }
    }

    /// The face `∂_i^{n,ε}` of a stored cube.
    pub fn face(&self, n: usize, i: usize, epsilon: u8, cube: &Cube) -> Result<Cube> {
        if n == 0 || i == 0 || i > n || epsilon > 1 {
            return Err(Error::FaceIndex { n, i });
        }
        let k = self.index_of(n, cube).ok_or(Error::UnknownCube(n))?;
        let f = self.face_index(n, i, epsilon, k)?;
        Ok(self.grades[n - 1].cubes[f].clone())
    }

    /// Checks dimensions, face-table shape and the cubical identities
    /// `∂_i^α ∂_j^β = ∂_{j-1}^β ∂_i^α` for `i < j`. Empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut well_formed = vec![true; 0];
        for (n, g) in self.grades.iter().enumerate() {
            let below = if n == 0 { 0 } else { self.grades[n - 1].cubes.len() };
            let mut ok_grade = Vec::with_capacity(g.cubes.len());
            for (k, cube) in g.cubes.iter().enumerate() {
                let mut ok = true;
                if cube.dim() != n {
                    out.push(Violation::WrongDimension {
                        n,
                        cube: cube.clone(),
                    });
                }
                let faces = &g.faces[k];
                if faces.len() != 2 * n {
                    out.push(Violation::FaceArity {
                        n,
                        cube: cube.clone(),
                        found: faces.len(),
                    });
                    ok = false;
                } else {
                    for (s, &f) in faces.iter().enumerate() {
                        if f >= below {
                            out.push(Violation::FaceOutOfRange {
                                n,
                                i: s / 2 + 1,
                                epsilon: (s % 2) as u8,
                                cube: cube.clone(),
                            });
                            ok = false;
                        }
                    }
                }
                ok_grade.push(ok);
            }
            if n >= 2 {
                let prev = &self.grades[n - 1];
                for (k, cube) in g.cubes.iter().enumerate() {
                    if !ok_grade[k] {
                        continue;
                    }
                    let faces = &g.faces[k];
                    for j in 2..=n {
                        for i in 1..j {
                            for alpha in 0..2u8 {
                                for beta in 0..2u8 {
                                    let fj = faces[slot(j, beta)];
                                    let fi = faces[slot(i, alpha)];
                                    if !well_formed[fj] || !well_formed[fi] {
                                        continue;
                                    }
                                    let lhs = prev.faces[fj][slot(i, alpha)];
                                    let rhs = prev.faces[fi][slot(j - 1, beta)];
                                    if lhs != rhs {
                                        out.push(Violation::Identity {
                                            n,
                                            i,
                                            j,
                                            alpha,
                                            beta,
                                            cube: cube.clone(),
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
            well_formed = ok_grade;
        }
        out
    }

    fn same_ambient(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.net, &other.net) || *self.net == *other.net
    }

    /// Collects cubes grade by grade, pairing each with its face cubes.
    fn cubes_with_faces(&self, keep: impl Fn(&Cube) -> bool) -> Vec<Vec<(Cube, Vec<Cube>)>> {
        self.grades
            .iter()
            .enumerate()
            .map(|(n, g)| {
                g.cubes
                    .iter()
                    .zip(&g.faces)
                    .filter(|(c, _)| keep(c))
                    .map(|(c, fs)| {
                        let faces = fs.iter().map(|&f| self.grades[n - 1].cubes[f].clone()).collect();
                        (c.clone(), faces)
                    })
                    .collect()
            })
            .collect()
    }

    /// Semicubical subset of cubes whose events all lie in `keep`.
    /// Grade 0 is unchanged.
    pub fn restrict_to_events(&self, keep: &[EventId]) -> Result<Self> {
        for &a in keep {
            if a.index() >= self.net.event_count() {
                return Err(Error::UnknownEvent(format!("#{}", a.index())));
            }
        }
        let grades = self.cubes_with_faces(|c| c.events.iter().all(|a| keep.contains(a)));
        SemicubicalSet::from_cube_faces(self.net.clone(), grades)
    }

    /// [`restrict_to_events`](Self::restrict_to_events) keeping every event
    /// except the named ones.
    pub fn without_events<S: AsRef<str>>(&self, drop: &[S]) -> Result<Self> {
        let drop = drop
            .iter()
            .map(|d| self.net.event_id(d.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let keep: Vec<EventId> = self.net.event_ids().filter(|a| !drop.contains(a)).collect();
        self.restrict_to_events(&keep)
    }

    /// Grade-wise union of two subcomplexes of a common ambient set.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if !self.same_ambient(other) {
            return Err(Error::IncompatibleAmbient);
        }
        let a = self.cubes_with_faces(|_| true);
        let b = other.cubes_with_faces(|_| true);
        let top = a.len().max(b.len());
        let mut grades = Vec::with_capacity(top);
        let mut ai = a.into_iter();
        let mut bi = b.into_iter();
        for _ in 0..top {
            let mut merged: HashMap<Cube, Vec<Cube>> = HashMap::new();
            for (c, f) in ai.next().unwrap_or_default() {
                merged.insert(c, f);
            }
            for (c, f) in bi.next().unwrap_or_default() {
                match merged.get(&c) {
                    Some(g) if *g != f => return Err(Error::IncompatibleAmbient),
                    Some(_) => {}
                    None => {
                        merged.insert(c, f);
                    }
                }
            }
            grades.push(merged.into_iter().collect());
        }
        SemicubicalSet::from_cube_faces(self.net.clone(), grades)
    }

    /// Grade-wise intersection of two subcomplexes of a common ambient set.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        if !self.same_ambient(other) {
            return Err(Error::IncompatibleAmbient);
        }
        let grades = self.cubes_with_faces(|c| other.contains(c));
        SemicubicalSet::from_cube_faces(self.net.clone(), grades)
    }

    /// Whether every cube of `self` is a cube of `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.same_ambient(other)
            && self
                .grades
                .iter()
                .all(|g| g.cubes.iter().all(|c| other.contains(c)))
    }

    /// Components of the 1-skeleton.
    pub fn components(&self) -> Components {
        let n0 = self.len(0);
        let mut parent: Vec<usize> = (0..n0).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        if let Some(g1) = self.grades.get(1) {
            for f in &g1.faces {
                if let [lo, hi] = f[..] {
                    if lo < n0 && hi < n0 {
                        let (a, b) = (find(&mut parent, lo), find(&mut parent, hi));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                }
            }
        }
        let mut label_of_root = HashMap::new();
        let labels = (0..n0)
            .map(|v| {
                let r = find(&mut parent, v);
                let next = label_of_root.len();
                *label_of_root.entry(r).or_insert(next)
            })
            .collect();
        Components {
            count: label_of_root.len(),
            labels,
        }
    }

    /// Index of the vertex `∂_1^0 ⋯ ∂_1^0` of the `k`-th cube of grade `n`.
    pub fn lowest_vertex(&self, n: usize, k: usize) -> usize {
        let mut idx = k;
        for m in (1..=n).rev() {
            idx = self.grades[m].faces[idx][0];
        }
        idx
    }

    /// Cube counts per grade for each connected component.
    pub fn component_counts(&self) -> Vec<Vec<usize>> {
        let comps = self.components();
        let mut out = vec![vec![0; self.grades.len()]; comps.count];
        for (n, g) in self.grades.iter().enumerate() {
            for k in 0..g.cubes.len() {
                out[comps.labels[self.lowest_vertex(n, k)]][n] += 1;
            }
        }
        out
    }

    /// The subcomplex of cubes whose vertices lie in component `label` of
    /// [`components`](Self::components).
    pub fn component(&self, label: usize) -> Result<Self> {
        let comps = self.components();
        let grades = self
            .grades
            .iter()
            .enumerate()
            .map(|(n, g)| {
                g.cubes
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| comps.labels[self.lowest_vertex(n, k)] == label)
                    .map(|(k, c)| {
                        let faces = g.faces[k]
                            .iter()
                            .map(|&f| self.grades[n - 1].cubes[f].clone())
                            .collect();
                        (c.clone(), faces)
                    })
                    .collect()
            })
            .collect();
        SemicubicalSet::from_cube_faces(self.net.clone(), grades)
    }

    /// Euler characteristic `Σ (-1)^n |X_n|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.counts()
            .iter()
            .enumerate()
            .map(|(n, &c)| if n % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Cube identities as `(base string, event names)`, grade by grade.
    /// Comparable across different ambient nets.
    pub fn named_cubes(&self) -> NamedCubes {
        self.grades
            .iter()
            .map(|g| {
                g.cubes
                    .iter()
                    .map(|c| {
                        (
                            c.base.to_string(),
                            c.events
                                .iter()
                                .map(|&a| self.net.event_name(a).to_string())
                                .collect(),
                        )
                    })
                    .collect()
            })
            .collect()
    }

    pub fn dump(&self) -> ComplexDump {
        ComplexDump {
            grades: self
                .grades
                .iter()
                .enumerate()
                .map(|(n, g)| GradeDump {
                    dim: n,
                    cubes: g
                        .cubes
                        .iter()
                        .zip(&g.faces)
                        .map(|(c, fs)| CubeDump {
                            base: c.base.to_string(),
                            events: c
                                .events
                                .iter()
                                .map(|&a| self.net.event_name(a).to_string())
                                .collect(),
                            faces: fs.chunks(2).map(|p| [p[0], p[1]]).collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}
