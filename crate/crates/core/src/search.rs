//! Bounded exhaustive enumeration of diagrams and model-relative degree
//! certification.
//!
//! Diagrams are generated in two stages. A *skeleton* fixes the component
//! trees of the spheres (with a portal and a plus/minus direction on every
//! token) and the token nesting on each portal; skeletons are deduplicated
//! by canonical form. Each skeleton is then completed by a backtracking
//! search over zone assignments and the containment forest, where the
//! token adjacency rule forces most choices, and finally over sphere
//! orientations.
//!
//! Every certified value is relative to this model: a witness proves an
//! upper bound, while the absence of a cheaper diagram only rules out
//! cheaper diagrams expressible here.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{CanonicalKey, Component, NestedDiagram, Region, Side, SphereModel, Token, TokenId};
use crate::error::{check_rank, Error, Result};
use crate::morphism::Endomorphism;
use crate::word::{Letter, Word};

/// Desk-scale limits; exceeding them requires `allow_large`.
pub const MAX_GUARDED_RANK: usize = 3;
pub const MAX_GUARDED_TOKENS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Worker threads; `0` uses the rayon default.
    pub jobs: usize,
    pub allow_large: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            jobs: 1,
            allow_large: false,
        }
    }
}

impl SearchOptions {
    pub fn with_jobs(jobs: usize) -> Self {
        SearchOptions {
            jobs,
            ..Default::default()
        }
    }

    pub(crate) fn check(&self, rank: usize, tokens: usize) -> Result<()> {
        check_rank(rank)?;
        if self.allow_large {
            return Ok(());
        }
        if rank > MAX_GUARDED_RANK {
            return Err(Error::GuardExceeded(format!("rank {rank} > {MAX_GUARDED_RANK}")));
        }
        if tokens > MAX_GUARDED_TOKENS {
            return Err(Error::GuardExceeded(format!(
                "budget {tokens} > {MAX_GUARDED_TOKENS} tokens"
            )));
        }
        Ok(())
    }

    pub(crate) fn run<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        if self.jobs == 1 {
            return f();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.jobs).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Edge lists of all labeled trees on `m` vertices, via Prüfer sequences.
fn labeled_trees(m: usize) -> Vec<Vec<(usize, usize)>> {
    match m {
        0 => return vec![],
        1 => return vec![vec![]],
        2 => return vec![vec![(0, 1)]],
        _ => {}
    }
    let len = m - 2;
    let mut out = Vec::new();
    let mut seq = vec![0usize; len];
    loop {
        let mut degree = vec![1usize; m];
        for &x in &seq {
            degree[x] += 1;
        }
        let mut edges = Vec::with_capacity(m - 1);
        for &x in &seq {
            let leaf = (0..m).find(|&v| degree[v] == 1).unwrap();
            edges.push((leaf.min(x), leaf.max(x)));
            degree[leaf] -= 1;
            degree[x] -= 1;
        }
        let rest: Vec<usize> = (0..m).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        edges.sort_unstable();
        out.push(edges);
        // next sequence
        let mut i = 0;
        loop {
            if i == len {
                return out;
            }
            seq[i] += 1;
            if seq[i] < m {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

/// All rooted forests on `items` given as parent maps (index into `items`).
fn forests(size: usize) -> Vec<Vec<Option<usize>>> {
    let mut out = Vec::new();
    let mut parent: Vec<Option<usize>> = vec![None; size];
    fn acyclic(parent: &[Option<usize>]) -> bool {
        (0..parent.len()).all(|i| {
            let mut cur = parent[i];
            let mut steps = 0;
            while let Some(p) = cur {
                steps += 1;
                if p == i || steps > parent.len() {
                    return false;
                }
                cur = parent[p];
            }
            true
        })
    }
    fn rec(i: usize, parent: &mut Vec<Option<usize>>, out: &mut Vec<Vec<Option<usize>>>) {
        if i == parent.len() {
            if acyclic(parent) {
                out.push(parent.clone());
            }
            return;
        }
        parent[i] = None;
        rec(i + 1, parent, out);
        for p in 0..parent.len() {
            if p != i {
                parent[i] = Some(p);
                rec(i + 1, parent, out);
            }
        }
        parent[i] = None;
    }
    rec(0, &mut parent, &mut out);
    out
}

fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![vec![]];
    for list in lists {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for item in list {
                let mut p = prefix.clone();
                p.push(item.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Per-sphere component tree with token directions and portals.
#[derive(Clone)]
struct SphereShape {
    components: usize,
    /// (plus component, minus component, portal), local component ids
    tokens: Vec<(usize, usize, usize)>,
}

fn sphere_shapes(rank: usize, degree: usize) -> Vec<SphereShape> {
    let mut out = Vec::new();
    for edges in labeled_trees(degree + 1) {
        let choices = 2 * rank;
        let total = choices.pow(degree as u32);
        for code in 0..total {
            let mut c = code;
            let mut tokens = Vec::with_capacity(degree);
            for &(u, v) in &edges {
                let pick = c % choices;
                c /= choices;
                let portal = pick / 2;
                let (plus, minus) = if pick.is_multiple_of(2) { (u, v) } else { (v, u) };
                tokens.push((plus, minus, portal));
            }
            out.push(SphereShape {
                components: degree + 1,
                tokens,
            });
        }
    }
    out
}

/// Deduplicated skeletons with exactly `tokens` tokens, in canonical order.
/// Zones are placeholders (all ambient) and every sign is `+1`.
fn skeletons(rank: usize, tokens: usize) -> Vec<NestedDiagram> {
    let mut seen: HashSet<CanonicalKey> = HashSet::new();
    let mut out: Vec<(CanonicalKey, NestedDiagram)> = Vec::new();
    for degrees in compositions(tokens, rank) {
        let per_sphere: Vec<Vec<SphereShape>> = degrees.iter().map(|&d| sphere_shapes(rank, d)).collect();
        for shapes in cartesian(&per_sphere) {
            let mut components = Vec::new();
            let mut toks = Vec::new();
            for (label, shape) in shapes.iter().enumerate() {
                let base = components.len();
                for _ in 0..shape.components {
                    components.push(Component { sphere: label, side: 1 });
                }
                for &(p, m, portal) in &shape.tokens {
                    toks.push(Token {
                        portal,
                        plus: base + p,
                        minus: base + m,
                    });
                }
            }
            let by_portal: Vec<Vec<TokenId>> = (0..rank)
                .map(|j| (0..toks.len()).filter(|&t| toks[t].portal == j).collect())
                .collect();
            let forest_choices: Vec<Vec<Vec<Option<usize>>>> = by_portal.iter().map(|ts| forests(ts.len())).collect();
            for choice in cartesian(&forest_choices) {
                let mut nesting = vec![None; toks.len()];
                for (j, f) in choice.iter().enumerate() {
                    for (local, p) in f.iter().enumerate() {
                        nesting[by_portal[j][local]] = p.map(|q| by_portal[j][q]);
                    }
                }
                let d = NestedDiagram {
                    rank,
                    spheres: (0..rank).map(|label| SphereModel { label, orientation: 1 }).collect(),
                    components: components.clone(),
                    tokens: toks.clone(),
                    nesting,
                    containment: vec![Region::Ambient; components.len()],
                    outer_zones: vec![[Some(Region::Ambient); 2]; rank],
                    inner_zones: vec![[Some(Region::Ambient); 2]; toks.len()],
                };
                let (canon, key) = d.canonical();
                if seen.insert(key.clone()) {
                    out.push((key, canon));
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, d)| d).collect()
}

#[derive(Clone, Copy)]
enum Task {
    Outer(usize, Side),
    Token(TokenId, Side),
}

/// Backtracking completion of one skeleton.
struct Completer<'a> {
    skel: &'a NestedDiagram,
    tasks: Vec<Task>,
    regions: Vec<Region>,
    parent: Vec<Option<Region>>,
    outer: Vec<[Option<Region>; 2]>,
    inner: Vec<[Option<Region>; 2]>,
}

impl<'a> Completer<'a> {
    fn new(skel: &'a NestedDiagram) -> Self {
        let k = skel.tokens.len();
        let m = skel.components.len();
        let mut tasks = Vec::new();
        for portal in 0..skel.rank {
            for side in Side::BOTH {
                tasks.push(Task::Outer(portal, side));
                // preorder over the nesting forest of this portal
                let mut stack: Vec<TokenId> = (0..k)
                    .rev()
                    .filter(|&t| skel.tokens[t].portal == portal && skel.nesting[t].is_none())
                    .collect();
                while let Some(t) = stack.pop() {
                    tasks.push(Task::Token(t, side));
                    stack.extend((0..k).rev().filter(|&c| skel.nesting[c] == Some(t)));
                }
            }
        }
        let mut regions = vec![Region::Ambient];
        regions.extend((0..m).map(Region::Inside));
        Completer {
            skel,
            tasks,
            regions,
            parent: vec![None; m],
            outer: vec![[None; 2]; skel.rank],
            inner: vec![[None; 2]; k],
        }
    }

    fn parent_zone_region(&self, t: TokenId, side: Side) -> Region {
        let r = match self.skel.nesting[t] {
            Some(p) => self.inner[p][side.index()],
            None => self.outer[self.skel.tokens[t].portal][side.index()],
        };
        r.expect("parent zone assigned before child")
    }

    fn step(&mut self, i: usize, emit: &mut impl FnMut(&NestedDiagram)) {
        if i == self.tasks.len() {
            self.finish(emit);
            return;
        }
        match self.tasks[i] {
            Task::Outer(portal, side) => {
                for r in self.regions.clone() {
                    self.outer[portal][side.index()] = Some(r);
                    self.step(i + 1, emit);
                }
                self.outer[portal][side.index()] = None;
            }
            Task::Token(t, side) => {
                let y = self.parent_zone_region(t, side);
                let c = self.skel.tokens[t].component(side);
                let inside = Region::Inside(c);
                if y == inside {
                    // the parent zone is inside c, so the disc faces the outside
                    match self.parent[c] {
                        Some(p) => {
                            self.inner[t][side.index()] = Some(p);
                            self.step(i + 1, emit);
                        }
                        None => {
                            for r in self.regions.clone() {
                                if r == inside {
                                    continue;
                                }
                                self.parent[c] = Some(r);
                                self.inner[t][side.index()] = Some(r);
                                self.step(i + 1, emit);
                            }
                            self.parent[c] = None;
                        }
                    }
                } else {
                    let fresh = self.parent[c].is_none();
                    if !fresh && self.parent[c] != Some(y) {
                        return;
                    }
                    self.parent[c] = Some(y);
                    self.inner[t][side.index()] = Some(inside);
                    self.step(i + 1, emit);
                    if fresh {
                        self.parent[c] = None;
                    }
                }
                self.inner[t][side.index()] = None;
            }
        }
    }

    fn finish(&mut self, emit: &mut impl FnMut(&NestedDiagram)) {
        let free: Vec<usize> = (0..self.parent.len()).filter(|&c| self.parent[c].is_none()).collect();
        let choices: Vec<Vec<Region>> = free
            .iter()
            .map(|&c| {
                self.regions
                    .iter()
                    .copied()
                    .filter(|&r| r != Region::Inside(c))
                    .collect()
            })
            .collect();
        for pick in cartesian(&choices) {
            let mut containment: Vec<Region> = Vec::with_capacity(self.parent.len());
            let mut fi = 0;
            for c in 0..self.parent.len() {
                match self.parent[c] {
                    Some(r) => containment.push(r),
                    None => {
                        containment.push(pick[fi]);
                        fi += 1;
                    }
                }
            }
            if !rooted(&containment) {
                continue;
            }
            let mut d = NestedDiagram {
                rank: self.skel.rank,
                spheres: self.skel.spheres.clone(),
                components: self.skel.components.clone(),
                tokens: self.skel.tokens.clone(),
                nesting: self.skel.nesting.clone(),
                containment,
                outer_zones: self.outer.clone(),
                inner_zones: self.inner.clone(),
            };
            assign_sides(&mut d);
            emit(&d);
        }
    }
}

fn rooted(containment: &[Region]) -> bool {
    (0..containment.len()).all(|c| {
        let mut cur = containment[c];
        let mut steps = 0;
        while let Region::Inside(p) = cur {
            steps += 1;
            if steps > containment.len() {
                return false;
            }
            cur = containment[p];
        }
        true
    })
}

/// Sets relative component signs so that positive sides agree across every
/// token, with each sphere's first component at `+1`. Orientations are left
/// at `+1`.
fn assign_sides(d: &mut NestedDiagram) {
    let m = d.components.len();
    let mut eff: Vec<Option<i8>> = vec![None; m];
    for label in 0..d.rank {
        if let Some(first) = (0..m).find(|&c| d.components[c].sphere == label) {
            eff[first] = Some(1);
        }
    }
    // component trees have at most 7 vertices; relax until fixed
    let mut changed = true;
    while changed {
        changed = false;
        for (t, tok) in d.tokens.iter().enumerate() {
            let inward = |side: Side, c: usize| d.inner_zones[t][side.index()] == Some(Region::Inside(c));
            let in_plus = inward(Side::Plus, tok.plus);
            let in_minus = inward(Side::Minus, tok.minus);
            match (eff[tok.plus], eff[tok.minus]) {
                (Some(e), None) => {
                    let facing = (e > 0) == in_plus;
                    eff[tok.minus] = Some(if facing == in_minus { 1 } else { -1 });
                    changed = true;
                }
                (None, Some(e)) => {
                    let facing = (e > 0) == in_minus;
                    eff[tok.plus] = Some(if facing == in_plus { 1 } else { -1 });
                    changed = true;
                }
                _ => {}
            }
        }
    }
    for (c, comp) in d.components.iter_mut().enumerate() {
        comp.side = eff[c].unwrap_or(1);
    }
}

/// Inverts every letter whose generator is in `mask`.
fn flip_letters(e: &Endomorphism, mask: u32) -> Endomorphism {
    let images = e
        .images()
        .iter()
        .map(|w| {
            w.letters()
                .iter()
                .map(|&l| if mask & (1 << l.index()) != 0 { l.inverse() } else { l })
                .collect::<Word>()
        })
        .collect();
    Endomorphism::new(e.rank(), images).expect("same rank")
}

/// Visits every diagram of one skeleton that passes validation, in a fixed
/// order, together with its trace. Orientation variants are produced from a
/// single trace by inverting letters.
fn visit_valid(
    skel: &NestedDiagram,
    cache: &mut HashMap<Endomorphism, bool>,
    visit: &mut impl FnMut(&NestedDiagram, &Endomorphism),
) {
    let rank = skel.rank;
    let mut completer = Completer::new(skel);
    completer.step(0, &mut |d: &NestedDiagram| {
        debug_assert!(d.structural_violations().is_empty(), "{:?}", d.structural_violations());
        let base = match d.trace() {
            Ok(e) => e,
            Err(_) => return,
        };
        let ok = *cache.entry(base.clone()).or_insert_with(|| base.is_automorphism());
        if !ok {
            return;
        }
        for mask in 0u32..(1 << rank) {
            let mut v = d.clone();
            for s in &mut v.spheres {
                if mask & (1 << s.label) != 0 {
                    s.orientation = -1;
                }
            }
            let e = if mask == 0 {
                base.clone()
            } else {
                flip_letters(&base, mask)
            };
            visit(&v, &e);
        }
    });
}

/// Every valid diagram of rank `rank` with at most `max_tokens` tokens, one
/// per canonical form, ordered by token count and then canonical key.
pub fn enumerate_diagrams(rank: usize, max_tokens: usize, opts: SearchOptions) -> Result<Vec<NestedDiagram>> {
    opts.check(rank, max_tokens)?;
    let mut out = Vec::new();
    for k in 0..=max_tokens {
        let skels = skeletons(rank, k);
        let per_skel: Vec<Vec<(CanonicalKey, NestedDiagram)>> = opts.run(|| {
            skels
                .par_iter()
                .map(|s| {
                    let mut cache = HashMap::new();
                    let mut found = Vec::new();
                    visit_valid(s, &mut cache, &mut |d, _| {
                        let (c, key) = d.canonical();
                        found.push((key, c));
                    });
                    found
                })
                .collect()
        });
        let mut level: BTreeMap<CanonicalKey, NestedDiagram> = BTreeMap::new();
        for (key, d) in per_skel.into_iter().flatten() {
            level.entry(key).or_insert(d);
        }
        out.extend(level.into_values());
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeStatus {
    /// Minimal within the model: a witness exists and the exhaustive scan of
    /// cheaper diagrams found none.
    Certified,
    /// A witness exists but cheaper diagrams were not exhausted.
    UpperBoundOnly,
    /// Nothing found within the budget.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedDegree {
    pub value: Option<usize>,
    pub status: DegreeStatus,
    pub witness: Option<NestedDiagram>,
    /// Largest token count searched exhaustively.
    pub budget: usize,
}

impl CertifiedDegree {
    pub fn certified(&self) -> Option<usize> {
        match self.status {
            DegreeStatus::Certified => self.value,
            _ => None,
        }
    }

    /// Upper bound if any witness is known.
    pub fn upper(&self) -> Option<usize> {
        self.value
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogueEntry {
    pub tokens: usize,
    pub witness: NestedDiagram,
}

/// Least token count of every automorphism traced by a valid diagram within
/// a budget, with one canonical witness each. Acts as the memo for repeated
/// degree queries.
#[derive(Clone, Debug)]
pub struct DegreeCatalogue {
    rank: usize,
    budget: usize,
    entries: BTreeMap<Endomorphism, CatalogueEntry>,
}

impl DegreeCatalogue {
    /// Exhausts all token counts `0..=budget`.
    pub fn build(rank: usize, budget: usize, opts: SearchOptions) -> Result<Self> {
        Self::build_until(rank, budget, opts, None)
    }

    /// Like [`DegreeCatalogue::build`] but stops after the first token count
    /// at which `target` appears.
    fn build_until(rank: usize, budget: usize, opts: SearchOptions, target: Option<&Endomorphism>) -> Result<Self> {
        opts.check(rank, budget)?;
        let mut entries: BTreeMap<Endomorphism, CatalogueEntry> = BTreeMap::new();
        let mut searched = 0;
        for k in 0..=budget {
            let skels = skeletons(rank, k);
            // first witness per automorphism in skeleton order, so the result
            // does not depend on the worker count
            let per_skel: Vec<Vec<(Endomorphism, NestedDiagram)>> = opts.run(|| {
                skels
                    .par_iter()
                    .map(|s| {
                        let mut cache = HashMap::new();
                        let mut firsts: Vec<(Endomorphism, NestedDiagram)> = Vec::new();
                        let mut seen: HashSet<Endomorphism> = HashSet::new();
                        visit_valid(s, &mut cache, &mut |d, e| {
                            if seen.insert(e.clone()) {
                                firsts.push((e.clone(), d.clone()));
                            }
                        });
                        firsts
                    })
                    .collect()
            });
            for (e, d) in per_skel.into_iter().flatten() {
                entries.entry(e).or_insert_with(|| CatalogueEntry {
                    tokens: k,
                    witness: d.canonical().0,
                });
            }
            searched = k;
            if target.is_some_and(|t| entries.contains_key(t)) {
                break;
            }
        }
        Ok(DegreeCatalogue {
            rank,
            budget: searched,
            entries,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Endomorphism, &CatalogueEntry)> {
        self.entries.iter()
    }

    /// Automorphisms whose least token count is exactly `k`.
    pub fn with_degree(&self, k: usize) -> Vec<&Endomorphism> {
        self.entries
            .iter()
            .filter(|(_, e)| e.tokens == k)
            .map(|(f, _)| f)
            .collect()
    }

    pub fn degree(&self, f: &Endomorphism) -> CertifiedDegree {
        match self.entries.get(f) {
            Some(entry) => CertifiedDegree {
                value: Some(entry.tokens),
                status: DegreeStatus::Certified,
                witness: Some(entry.witness.clone()),
                budget: self.budget,
            },
            None => CertifiedDegree {
                value: None,
                status: DegreeStatus::Unknown,
                witness: None,
                budget: self.budget,
            },
        }
    }
}

/// Least token count of a diagram tracing to `f`, searching token counts in
/// increasing order up to `budget`.
pub fn degree(f: &Endomorphism, budget: usize, opts: SearchOptions) -> Result<CertifiedDegree> {
    degree_with_hint(f, budget, None, opts)
}

/// As [`degree`], falling back to `hint` (a valid diagram tracing to `f`) as
/// an upper bound when the budget is exhausted.
pub fn degree_with_hint(
    f: &Endomorphism,
    budget: usize,
    hint: Option<&NestedDiagram>,
    opts: SearchOptions,
) -> Result<CertifiedDegree> {
    if !f.is_automorphism() {
        return Err(Error::NotAnAutomorphism(f.to_string()));
    }
    if let Some(h) = hint {
        let ok = h.validate().is_empty() && h.trace().ok().as_ref() == Some(f);
        if !ok {
            return Err(Error::InvalidDiagram(h.validate()));
        }
    }
    let cat = DegreeCatalogue::build_until(f.rank(), budget, opts, Some(f))?;
    let found = cat.degree(f);
    if found.status == DegreeStatus::Certified {
        return Ok(found);
    }
    if let Some(h) = hint {
        return Ok(CertifiedDegree {
            value: Some(h.total_tokens()),
            status: if h.total_tokens() <= cat.budget() + 1 {
                // everything below the hint was exhausted
                DegreeStatus::Certified
            } else {
                DegreeStatus::UpperBoundOnly
            },
            witness: Some(h.clone()),
            budget: cat.budget(),
        });
    }
    Ok(found)
}

/// All automorphisms traced by token-free diagrams, in the endomorphism
/// order, each with a canonical witness.
pub fn degree_zero_set(rank: usize, opts: SearchOptions) -> Result<Vec<(Endomorphism, NestedDiagram)>> {
    let cat = DegreeCatalogue::build(rank, 0, opts)?;
    Ok(cat.entries.into_iter().map(|(f, e)| (f, e.witness)).collect())
}

/// Signed permutation automorphisms of the given rank.
pub fn signed_permutations(rank: usize) -> Vec<Endomorphism> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..rank).collect();
    fn rec(i: usize, perm: &mut Vec<usize>, out: &mut Vec<Endomorphism>) {
        let n = perm.len();
        if i == n {
            for mask in 0u32..(1 << n) {
                let images = (0..n)
                    .map(|g| Word::letter(Letter::new(perm[g], mask & (1 << g) == 0)))
                    .collect();
                out.push(Endomorphism::new(n, images).unwrap());
            }
            return;
        }
        for j in i..n {
            perm.swap(i, j);
            rec(i + 1, perm, out);
            perm.swap(i, j);
        }
    }
    rec(0, &mut perm, &mut out);
    out.sort();
    out
}
