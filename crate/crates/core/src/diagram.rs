//! Combinatorial model of a collared sphere basis drawn against the standard
//! basis.
//!
//! Cutting `M_n` along the standard spheres leaves `S^3` minus `2n` balls,
//! the *portals*. Each standard sphere `S_j` appears twice, as the plus and
//! minus side of portal `j`. A nonstandard sphere meets the standard spheres
//! in circles (*tokens*); cut along them it falls apart into *components*,
//! which are glued back in pairs across each token.
//!
//! The embedding is recorded as:
//!
//! * a nesting forest of the tokens on each portal, shared by both sides;
//! * a containment forest over components, rooted at the ambient region that
//!   holds the basepoint (each component separates, and its *inside* is the
//!   side away from the basepoint);
//! * for every zone (a region of a portal side cut out by its tokens), the
//!   complementary region it faces.
//!
//! Orientation is stored per sphere with a relative sign per component; the
//! effective sign of a component says whether the sphere's positive side
//! faces the component's inside.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morphism::Endomorphism;
use crate::word::{Letter, Word, MAX_RANK};

pub type ComponentId = usize;
pub type TokenId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Plus, Side::Minus];

    pub fn index(self) -> usize {
        match self {
            Side::Plus => 0,
            Side::Minus => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Side::Plus => '+',
            Side::Minus => '-',
        }
    }
}

/// A complementary region: the ambient one, or the inside of a component
/// minus the insides of its children.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    Ambient,
    Inside(ComponentId),
}

impl Region {
    fn code(self) -> u16 {
        match self {
            Region::Ambient => 0,
            Region::Inside(c) => c as u16 + 1,
        }
    }
}

/// A region of one portal side: the outer surface, or the disc inside a token
/// minus the discs of its nesting children.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Zone {
    Outer { portal: usize, side: Side },
    Inner { token: TokenId, side: Side },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SphereModel {
    /// Zero-based output generator.
    pub label: usize,
    /// `+1` or `-1`; multiplies every component's relative sign.
    pub orientation: i8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub sphere: usize,
    /// Relative sign, `+1` or `-1`.
    pub side: i8,
}

/// One intersection circle with standard sphere `portal`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Token {
    pub portal: usize,
    pub plus: ComponentId,
    pub minus: ComponentId,
}

impl Token {
    pub fn component(&self, side: Side) -> ComponentId {
        match side {
            Side::Plus => self.plus,
            Side::Minus => self.minus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentKind {
    Closed,
    EndCap,
    Tunnel,
}

impl ComponentKind {
    pub fn from_boundary_count(count: usize) -> Self {
        match count {
            0 => ComponentKind::Closed,
            1 => ComponentKind::EndCap,
            _ => ComponentKind::Tunnel,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ComponentKind::Closed => "closed",
            ComponentKind::EndCap => "end-cap",
            ComponentKind::Tunnel => "tunnel",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NestedDiagram {
    pub rank: usize,
    pub spheres: Vec<SphereModel>,
    pub components: Vec<Component>,
    pub tokens: Vec<Token>,
    /// Per token: the token directly enclosing it on the same portal.
    pub nesting: Vec<Option<TokenId>>,
    /// Per component: the region directly outside it.
    pub containment: Vec<Region>,
    /// Per portal, indexed by [`Side::index`]: region faced by the outer zone.
    pub outer_zones: Vec<[Option<Region>; 2]>,
    /// Per token, indexed by [`Side::index`]: region faced by its inner zone.
    pub inner_zones: Vec<[Option<Region>; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationCode {
    RankOutOfRange,
    SphereLabels,
    BadSign,
    DanglingReference,
    TokenSphereMismatch,
    SphereNotTree,
    NestingPortalMismatch,
    NestingCycle,
    ContainmentCycle,
    ZoneUnassigned,
    TokenAdjacency,
    OrientationInconsistent,
    NotAutomorphism,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::RankOutOfRange => "rank-out-of-range",
            ViolationCode::SphereLabels => "sphere-labels",
            ViolationCode::BadSign => "bad-sign",
            ViolationCode::DanglingReference => "dangling-reference",
            ViolationCode::TokenSphereMismatch => "token-sphere-mismatch",
            ViolationCode::SphereNotTree => "sphere-not-tree",
            ViolationCode::NestingPortalMismatch => "nesting-portal-mismatch",
            ViolationCode::NestingCycle => "nesting-cycle",
            ViolationCode::ContainmentCycle => "containment-cycle",
            ViolationCode::ZoneUnassigned => "zone-unassigned",
            ViolationCode::TokenAdjacency => "token-adjacency",
            ViolationCode::OrientationInconsistent => "orientation-inconsistent",
            ViolationCode::NotAutomorphism => "not-automorphism",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.detail)
    }
}

fn violation(code: ViolationCode, detail: impl Into<String>) -> Violation {
    Violation {
        code,
        detail: detail.into(),
    }
}

fn label_char(label: usize) -> char {
    Letter::generator(label).to_char()
}

/// Serialized form used for canonical ordering.
pub type CanonicalKey = Vec<u16>;

impl NestedDiagram {
    /// `n` closed spheres; sphere `i` encloses the plus side of portal `i`.
    pub fn standard_like(rank: usize) -> Result<Self> {
        crate::error::check_rank(rank)?;
        Ok(NestedDiagram {
            rank,
            spheres: (0..rank).map(|label| SphereModel { label, orientation: 1 }).collect(),
            components: (0..rank).map(|sphere| Component { sphere, side: 1 }).collect(),
            tokens: Vec::new(),
            nesting: Vec::new(),
            containment: vec![Region::Ambient; rank],
            outer_zones: (0..rank)
                .map(|i| [Some(Region::Inside(i)), Some(Region::Ambient)])
                .collect(),
            inner_zones: Vec::new(),
        })
    }

    pub fn total_tokens(&self) -> usize {
        self.tokens.len()
    }

    fn sphere_index(&self, label: usize) -> Result<usize> {
        self.spheres
            .iter()
            .position(|s| s.label == label)
            .ok_or(Error::UnknownLabel(label))
    }

    fn sphere_of_label(&self, label: usize) -> Option<&SphereModel> {
        self.spheres.iter().find(|s| s.label == label)
    }

    /// Effective sign of a component: `+1` when the owning sphere's positive
    /// side faces the component's inside.
    pub fn effective_sign(&self, c: ComponentId) -> i8 {
        let comp = self.components[c];
        let orientation = self.sphere_of_label(comp.sphere).map_or(1, |s| s.orientation);
        orientation * comp.side
    }

    fn token_sphere(&self, t: TokenId) -> usize {
        self.components[self.tokens[t].plus].sphere
    }

    /// Number of intersection circles of sphere `label` with all standard
    /// spheres.
    pub fn degree_of_sphere(&self, label: usize) -> Result<usize> {
        self.sphere_index(label)?;
        Ok((0..self.tokens.len())
            .filter(|&t| self.token_sphere(t) == label)
            .count())
    }

    /// Intersection circles of sphere `label` with standard sphere `portal`.
    pub fn pair_count(&self, portal: usize, label: usize) -> Result<usize> {
        if portal >= self.rank {
            return Err(Error::UnknownLabel(portal));
        }
        self.sphere_index(label)?;
        Ok(self
            .tokens
            .iter()
            .enumerate()
            .filter(|(t, tok)| tok.portal == portal && self.token_sphere(*t) == label)
            .count())
    }

    /// Tokens bounding component `c`.
    pub fn boundary_tokens(&self, c: ComponentId) -> Vec<TokenId> {
        self.tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| t.plus == c || t.minus == c)
            .map(|(i, _)| i)
            .collect()
    }

    /// Euler characteristic of a component: a sphere with holes.
    pub fn euler_characteristic(&self, c: ComponentId) -> i64 {
        2 - self.boundary_tokens(c).len() as i64
    }

    pub fn kind(&self, c: ComponentId) -> ComponentKind {
        ComponentKind::from_boundary_count(self.boundary_tokens(c).len())
    }

    /// Components of sphere `label` in tree order: a depth-first walk of the
    /// component tree starting from its lowest-numbered leaf.
    pub fn components_of(&self, label: usize) -> Result<Vec<(ComponentId, ComponentKind)>> {
        self.sphere_index(label)?;
        let comps: Vec<ComponentId> = (0..self.components.len())
            .filter(|&c| self.components[c].sphere == label)
            .collect();
        let mut adj: BTreeMap<ComponentId, Vec<ComponentId>> = comps.iter().map(|&c| (c, Vec::new())).collect();
        for t in &self.tokens {
            if let (Some(_), Some(_)) = (adj.get(&t.plus), adj.get(&t.minus)) {
                adj.get_mut(&t.plus).unwrap().push(t.minus);
                adj.get_mut(&t.minus).unwrap().push(t.plus);
            }
        }
        for v in adj.values_mut() {
            v.sort_unstable();
        }
        let start = comps
            .iter()
            .copied()
            .find(|c| adj[c].len() <= 1)
            .or_else(|| comps.first().copied());
        let mut order = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        let mut stack: Vec<ComponentId> = start.into_iter().collect();
        while let Some(c) = stack.pop() {
            if !seen.insert(c) {
                continue;
            }
            order.push(c);
            for &m in adj[&c].iter().rev() {
                if !seen.contains(&m) {
                    stack.push(m);
                }
            }
        }
        // anything unreachable (only in malformed diagrams) goes last
        order.extend(comps.iter().filter(|c| !seen.contains(c)));
        Ok(order.into_iter().map(|c| (c, self.kind(c))).collect())
    }

    /// Region faced by a zone, if assigned.
    pub fn zone_region(&self, zone: Zone) -> Option<Region> {
        match zone {
            Zone::Outer { portal, side } => self.outer_zones.get(portal)?[side.index()],
            Zone::Inner { token, side } => self.inner_zones.get(token)?[side.index()],
        }
    }

    /// The zone directly outside token `t` on the given side.
    pub fn parent_zone(&self, t: TokenId, side: Side) -> Zone {
        match self.nesting[t] {
            Some(p) => Zone::Inner { token: p, side },
            None => Zone::Outer {
                portal: self.tokens[t].portal,
                side,
            },
        }
    }

    /// All zones in a fixed order: per portal the outer zones, then tokens.
    pub fn zones(&self) -> Vec<Zone> {
        let mut out = Vec::new();
        for portal in 0..self.rank {
            for side in Side::BOTH {
                out.push(Zone::Outer { portal, side });
            }
        }
        for token in 0..self.tokens.len() {
            for side in Side::BOTH {
                out.push(Zone::Inner { token, side });
            }
        }
        out
    }

    /// Components crossed going from the ambient region down to `r`,
    /// outermost first. `None` if the containment forest has a cycle.
    fn descent(&self, r: Region) -> Option<Vec<ComponentId>> {
        let mut path = Vec::new();
        let mut cur = r;
        while let Region::Inside(c) = cur {
            if path.len() > self.components.len() {
                return None;
            }
            path.push(c);
            cur = *self.containment.get(c)?;
        }
        path.reverse();
        Some(path)
    }

    fn crossing(&self, c: ComponentId, inward: bool) -> Letter {
        let label = self.components[c].sphere;
        let positive = (self.effective_sign(c) > 0) == inward;
        Letter::new(label, positive)
    }

    /// Reads the loop through portal `j`, entering through `zone_token`'s
    /// inner zone (or the outer zone when `None`) on the plus side and
    /// returning from the same zone on the minus side.
    fn loop_word(&self, portal: usize, zone_token: Option<TokenId>) -> Option<Word> {
        let (plus, minus) = match zone_token {
            None => (
                Zone::Outer {
                    portal,
                    side: Side::Plus,
                },
                Zone::Outer {
                    portal,
                    side: Side::Minus,
                },
            ),
            Some(token) => (
                Zone::Inner {
                    token,
                    side: Side::Plus,
                },
                Zone::Inner {
                    token,
                    side: Side::Minus,
                },
            ),
        };
        let down = self.descent(self.zone_region(plus)?)?;
        let up = self.descent(self.zone_region(minus)?)?;
        let letters = down
            .iter()
            .map(|&c| self.crossing(c, true))
            .chain(up.iter().rev().map(|&c| self.crossing(c, false)));
        Some(Word::reduced_from(letters))
    }

    /// The induced endomorphism, read along the canonical loops through the
    /// outer zones. Fails on malformed diagrams.
    pub fn trace(&self) -> Result<Endomorphism> {
        self.trace_via(&vec![None; self.rank])
    }

    /// Trace with an explicit zone choice per portal: `None` for the outer
    /// zone, `Some(t)` for the inner zone of token `t` (which must lie on
    /// that portal).
    pub fn trace_via(&self, choice: &[Option<TokenId>]) -> Result<Endomorphism> {
        let malformed = || {
            let mut v = self.structural_violations();
            if v.is_empty() {
                v.push(violation(ViolationCode::DanglingReference, "bad zone choice"));
            }
            Error::InvalidDiagram(v)
        };
        if !(1..=MAX_RANK).contains(&self.rank) || choice.len() != self.rank {
            return Err(malformed());
        }
        if self.spheres.len() != self.rank {
            return Err(malformed());
        }
        let mut images = Vec::with_capacity(self.rank);
        for (portal, &z) in choice.iter().enumerate() {
            if let Some(t) = z {
                if self.tokens.get(t).map(|tok| tok.portal) != Some(portal) {
                    return Err(malformed());
                }
            }
            images.push(self.loop_word(portal, z).ok_or_else(malformed)?);
        }
        let bad_label = self.components.iter().any(|c| c.sphere >= self.rank);
        if bad_label {
            return Err(malformed());
        }
        Endomorphism::new(self.rank, images).map_err(|_| malformed())
    }

    /// Violations of the combinatorial invariants, excluding the automorphism
    /// check.
    pub fn structural_violations(&self) -> Vec<Violation> {
        use ViolationCode::*;
        let mut out = Vec::new();
        let n = self.rank;
        if !(1..=MAX_RANK).contains(&n) {
            out.push(violation(RankOutOfRange, format!("rank {n}")));
            return out;
        }

        let mut labels: Vec<usize> = self.spheres.iter().map(|s| s.label).collect();
        labels.sort_unstable();
        if labels != (0..n).collect::<Vec<_>>() {
            out.push(violation(
                SphereLabels,
                format!("expected one sphere per label a..{}", label_char(n - 1)),
            ));
        }
        for s in &self.spheres {
            if s.orientation != 1 && s.orientation != -1 {
                out.push(violation(BadSign, format!("sphere orientation {}", s.orientation)));
            }
        }

        let m = self.components.len();
        let k = self.tokens.len();
        let mut dangling = false;
        for (i, c) in self.components.iter().enumerate() {
            if c.sphere >= n {
                dangling = true;
                out.push(violation(DanglingReference, format!("component {i} on unknown sphere")));
            }
            if c.side != 1 && c.side != -1 {
                out.push(violation(BadSign, format!("component {i} side {}", c.side)));
            }
        }
        for (i, t) in self.tokens.iter().enumerate() {
            if t.portal >= n || t.plus >= m || t.minus >= m {
                dangling = true;
                out.push(violation(
                    DanglingReference,
                    format!("token {i} references unknown portal or component"),
                ));
            }
        }
        if self.nesting.len() != k
            || self.inner_zones.len() != k
            || self.containment.len() != m
            || self.outer_zones.len() != n
        {
            out.push(violation(
                DanglingReference,
                "forest or zone tables have the wrong length",
            ));
            return out;
        }
        for (i, p) in self.nesting.iter().enumerate() {
            if matches!(p, Some(p) if *p >= k) {
                dangling = true;
                out.push(violation(
                    DanglingReference,
                    format!("token {i} nested in unknown token"),
                ));
            }
        }
        let region_ok = |r: Region| matches!(r, Region::Ambient) || matches!(r, Region::Inside(c) if c < m);
        for (i, &r) in self.containment.iter().enumerate() {
            if !region_ok(r) {
                dangling = true;
                out.push(violation(
                    DanglingReference,
                    format!("component {i} inside unknown region"),
                ));
            }
        }
        for z in self.zones() {
            match self.zone_region(z) {
                None => out.push(violation(
                    ZoneUnassigned,
                    format!("{} has no region", self.zone_name(z)),
                )),
                Some(r) if !region_ok(r) => {
                    dangling = true;
                    out.push(violation(
                        DanglingReference,
                        format!("{} faces unknown region", self.zone_name(z)),
                    ));
                }
                _ => {}
            }
        }
        if dangling {
            return out;
        }

        for (i, t) in self.tokens.iter().enumerate() {
            if self.components[t.plus].sphere != self.components[t.minus].sphere {
                out.push(violation(TokenSphereMismatch, format!("token {i} joins two spheres")));
            }
        }

        // each sphere's components and tokens form a tree
        for label in 0..n {
            let comps: Vec<ComponentId> = (0..m).filter(|&c| self.components[c].sphere == label).collect();
            let toks: Vec<&Token> = self
                .tokens
                .iter()
                .filter(|t| self.components[t.plus].sphere == label)
                .collect();
            let mut uf: HashMap<ComponentId, ComponentId> = comps.iter().map(|&c| (c, c)).collect();
            fn find(uf: &mut HashMap<usize, usize>, x: usize) -> usize {
                let p = uf[&x];
                if p == x {
                    return x;
                }
                let r = find(uf, p);
                uf.insert(x, r);
                r
            }
            let mut cycle = false;
            for t in &toks {
                if !uf.contains_key(&t.minus) {
                    continue;
                }
                let (a, b) = (find(&mut uf, t.plus), find(&mut uf, t.minus));
                if a == b {
                    cycle = true;
                } else {
                    uf.insert(a, b);
                }
            }
            let roots = comps.iter().filter(|&&c| find(&mut uf, c) == c).count();
            if comps.len() != toks.len() + 1 || cycle || roots != 1 {
                out.push(violation(
                    SphereNotTree,
                    format!(
                        "sphere {}: {} components, {} tokens",
                        label_char(label),
                        comps.len(),
                        toks.len()
                    ),
                ));
            }
        }

        let mut nesting_cycle = false;
        for i in 0..k {
            if let Some(p) = self.nesting[i] {
                if self.tokens[p].portal != self.tokens[i].portal {
                    out.push(violation(
                        NestingPortalMismatch,
                        format!("token {i} nested in token {p} of another portal"),
                    ));
                }
            }
            let mut cur = self.nesting[i];
            let mut steps = 0;
            while let Some(p) = cur {
                steps += 1;
                if p == i || steps > k {
                    nesting_cycle = true;
                    break;
                }
                cur = self.nesting[p];
            }
        }
        if nesting_cycle {
            out.push(violation(NestingCycle, "token nesting is not a forest"));
            return out;
        }
        let containment_cycle = (0..m).any(|c| self.descent(Region::Inside(c)).is_none());
        if containment_cycle {
            out.push(violation(
                ContainmentCycle,
                "containment is not a tree rooted at the ambient region",
            ));
            return out;
        }
        if out.iter().any(|v| v.code == ZoneUnassigned) {
            return out;
        }

        for t in 0..k {
            let mut facing = [false; 2];
            for side in Side::BOTH {
                let c = self.tokens[t].component(side);
                let inner = self.zone_region(Zone::Inner { token: t, side }).unwrap();
                let outer = self.zone_region(self.parent_zone(t, side)).unwrap();
                let inside = Region::Inside(c);
                let around = self.containment[c];
                if !((inner == inside && outer == around) || (inner == around && outer == inside)) {
                    out.push(violation(
                        TokenAdjacency,
                        format!(
                            "token {t} ({}): zones beside it are not the two sides of component {c}",
                            side.symbol()
                        ),
                    ));
                }
                facing[side.index()] = (self.effective_sign(c) > 0) == (inner == inside);
            }
            if facing[0] != facing[1] {
                out.push(violation(
                    OrientationInconsistent,
                    format!("token {t}: positive sides disagree across the portal"),
                ));
            }
        }
        out
    }

    /// Every violated invariant, including the requirement that the trace
    /// is an automorphism. Empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.structural_violations();
        if out.is_empty() {
            match self.trace() {
                Ok(e) if e.is_automorphism() => {}
                Ok(e) => out.push(violation(
                    ViolationCode::NotAutomorphism,
                    format!("trace {e} is not an automorphism"),
                )),
                Err(Error::InvalidDiagram(v)) => out.extend(v),
                Err(e) => out.push(violation(ViolationCode::DanglingReference, e.to_string())),
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Human-readable zone name, e.g. `a+` or `b-/t3`.
    pub fn zone_name(&self, z: Zone) -> String {
        match z {
            Zone::Outer { portal, side } => format!("{}{}", label_char(portal), side.symbol()),
            Zone::Inner { token, side } => {
                let portal = self.tokens.get(token).map_or(0, |t| t.portal);
                format!("{}{}/t{}", label_char(portal), side.symbol(), token)
            }
        }
    }

    /// Renames tokens by `order` (new position -> old token) and components
    /// by sphere label, then by their lowest new token id. Orientation is
    /// normalized so that each sphere's first component has relative sign
    /// `+1`. Requires a structurally valid diagram.
    fn relabeled(&self, order: &[TokenId]) -> (NestedDiagram, CanonicalKey) {
        let k = self.tokens.len();
        let m = self.components.len();
        let mut new_token = vec![0usize; k];
        for (new, &old) in order.iter().enumerate() {
            new_token[old] = new;
        }
        // (lowest new token id, 0 if plus side of it else 1)
        let mut first_token = vec![(usize::MAX, 0u8); m];
        for (old, t) in self.tokens.iter().enumerate() {
            let nt = new_token[old];
            first_token[t.plus] = first_token[t.plus].min((nt, 0));
            first_token[t.minus] = first_token[t.minus].min((nt, 1));
        }
        let mut comp_order: Vec<ComponentId> = (0..m).collect();
        comp_order.sort_by_key(|&c| (self.components[c].sphere, first_token[c]));
        let mut new_comp = vec![0usize; m];
        for (new, &old) in comp_order.iter().enumerate() {
            new_comp[old] = new;
        }
        let map_region = |r: Region| match r {
            Region::Ambient => Region::Ambient,
            Region::Inside(c) => Region::Inside(new_comp[c]),
        };

        let mut orientation = vec![0i8; self.rank];
        for &old in &comp_order {
            let s = self.components[old].sphere;
            if orientation[s] == 0 {
                orientation[s] = self.effective_sign(old);
            }
        }
        let spheres: Vec<SphereModel> = (0..self.rank)
            .map(|label| SphereModel {
                label,
                orientation: orientation[label],
            })
            .collect();
        let components: Vec<Component> = comp_order
            .iter()
            .map(|&old| {
                let c = self.components[old];
                Component {
                    sphere: c.sphere,
                    side: self.effective_sign(old) * orientation[c.sphere],
                }
            })
            .collect();
        let tokens: Vec<Token> = order
            .iter()
            .map(|&old| {
                let t = self.tokens[old];
                Token {
                    portal: t.portal,
                    plus: new_comp[t.plus],
                    minus: new_comp[t.minus],
                }
            })
            .collect();
        let nesting: Vec<Option<TokenId>> = order
            .iter()
            .map(|&old| self.nesting[old].map(|p| new_token[p]))
            .collect();
        let containment: Vec<Region> = comp_order
            .iter()
            .map(|&old| map_region(self.containment[old]))
            .collect();
        let outer_zones: Vec<[Option<Region>; 2]> = self
            .outer_zones
            .iter()
            .map(|z| [z[0].map(map_region), z[1].map(map_region)])
            .collect();
        let inner_zones: Vec<[Option<Region>; 2]> = order
            .iter()
            .map(|&old| {
                let z = self.inner_zones[old];
                [z[0].map(map_region), z[1].map(map_region)]
            })
            .collect();

        let mut key: CanonicalKey = Vec::with_capacity(4 + 2 * m + 6 * k + 2 * self.rank);
        key.push(self.rank as u16);
        key.push(k as u16);
        for s in &spheres {
            key.push((s.orientation > 0) as u16);
        }
        for t in &tokens {
            key.push(components[t.plus].sphere as u16);
            key.push(t.portal as u16);
        }
        for (i, t) in tokens.iter().enumerate() {
            key.push(t.plus as u16);
            key.push(t.minus as u16);
            key.push(nesting[i].map_or(0, |p| p as u16 + 1));
        }
        for c in &components {
            key.push(c.sphere as u16);
            key.push((c.side > 0) as u16);
        }
        for r in &containment {
            key.push(r.code());
        }
        for z in &outer_zones {
            key.push(z[0].map_or(u16::MAX, Region::code));
            key.push(z[1].map_or(u16::MAX, Region::code));
        }
        for z in &inner_zones {
            key.push(z[0].map_or(u16::MAX, Region::code));
            key.push(z[1].map_or(u16::MAX, Region::code));
        }
        let d = NestedDiagram {
            rank: self.rank,
            spheres,
            components,
            tokens,
            nesting,
            containment,
            outer_zones,
            inner_zones,
        };
        (d, key)
    }

    /// The representative of this diagram's relabeling class with the least
    /// serialization, and that serialization.
    ///
    /// Only token renamings that keep tokens sorted by (sphere, portal) are
    /// tried; every class has its least member among them because the key
    /// starts with that sequence.
    pub fn canonical(&self) -> (NestedDiagram, CanonicalKey) {
        let k = self.tokens.len();
        let class = |t: TokenId| (self.token_sphere(t), self.tokens[t].portal);
        let mut base: Vec<TokenId> = (0..k).collect();
        base.sort_by_key(|&t| class(t));
        let mut best: Option<(NestedDiagram, CanonicalKey)> = None;
        let mut blocks: Vec<(usize, usize)> = Vec::new();
        let mut i = 0;
        while i < k {
            let mut j = i;
            while j < k && class(base[j]) == class(base[i]) {
                j += 1;
            }
            blocks.push((i, j));
            i = j;
        }
        permute_blocks(&mut base, &blocks, 0, &mut |order| {
            let cand = self.relabeled(order);
            if best.as_ref().is_none_or(|b| cand.1 < b.1) {
                best = Some(cand);
            }
        });
        best.expect("at least one ordering")
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        self.canonical().1
    }

    /// Two DOT graphs: the component tree of each sphere, then the
    /// containment forest with portal zones as leaves.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        s.push_str("graph components {\n");
        for sp in &self.spheres {
            let l = label_char(sp.label);
            let _ = writeln!(s, "  subgraph cluster_{l} {{");
            let _ = writeln!(
                s,
                "    label=\"sphere {l} ({})\";",
                if sp.orientation > 0 { "+" } else { "-" }
            );
            for (c, comp) in self.components.iter().enumerate() {
                if comp.sphere == sp.label {
                    let _ = writeln!(s, "    c{c} [label=\"c{c} {}\"];", self.kind(c).as_str());
                }
            }
            for (t, tok) in self.tokens.iter().enumerate() {
                if self.components.get(tok.plus).map(|c| c.sphere) == Some(sp.label) {
                    let _ = writeln!(
                        s,
                        "    c{} -- c{} [label=\"t{t} @{}\"];",
                        tok.plus,
                        tok.minus,
                        label_char(tok.portal)
                    );
                }
            }
            s.push_str("  }\n");
        }
        s.push_str("}\n");
        s.push_str("digraph containment {\n  ambient [shape=box];\n");
        let node = |r: Region| match r {
            Region::Ambient => "ambient".to_string(),
            Region::Inside(c) => format!("c{c}"),
        };
        for (c, comp) in self.components.iter().enumerate() {
            let _ = writeln!(
                s,
                "  c{c} [label=\"c{c} {}{}\"];",
                label_char(comp.sphere),
                if self.effective_sign(c) > 0 { "+" } else { "-" }
            );
        }
        for (c, &r) in self.containment.iter().enumerate() {
            let _ = writeln!(s, "  {} -> c{c};", node(r));
        }
        for z in self.zones() {
            let name = self.zone_name(z);
            let _ = writeln!(s, "  \"{name}\" [shape=plaintext];");
            if let Some(r) = self.zone_region(z) {
                let _ = writeln!(s, "  {} -> \"{name}\" [style=dashed];", node(r));
            }
        }
        s.push_str("}\n");
        s
    }
}

fn permute_blocks(order: &mut [TokenId], blocks: &[(usize, usize)], b: usize, visit: &mut impl FnMut(&[TokenId])) {
    if b == blocks.len() {
        visit(order);
        return;
    }
    let (lo, hi) = blocks[b];
    heap_permute(order, lo, hi - lo, &mut |o| {
        let mut o = o.to_vec();
        permute_blocks(&mut o, blocks, b + 1, visit)
    });
}

/// Heap's algorithm over `order[lo..hi]`.
fn heap_permute(order: &mut [TokenId], lo: usize, size: usize, visit: &mut impl FnMut(&[TokenId])) {
    if size <= 1 {
        visit(order);
        return;
    }
    heap_permute(order, lo, size - 1, visit);
    for i in 0..size - 1 {
        let swap_with = if size.is_multiple_of(2) { lo + i } else { lo };
        order.swap(swap_with, lo + size - 1);
        heap_permute(order, lo, size - 1, visit);
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::word::tests::w;

    pub(crate) fn endo(images: &[&str]) -> Endomorphism {
        Endomorphism::new(images.len(), images.iter().map(|s| w(s)).collect()).unwrap()
    }

    /// Sphere a encloses a+ and b+; sphere b, inside a, encloses b+.
    pub(crate) fn d1() -> NestedDiagram {
        NestedDiagram {
            rank: 2,
            spheres: vec![
                SphereModel {
                    label: 0,
                    orientation: 1,
                },
                SphereModel {
                    label: 1,
                    orientation: 1,
                },
            ],
            components: vec![Component { sphere: 0, side: 1 }, Component { sphere: 1, side: 1 }],
            tokens: vec![],
            nesting: vec![],
            containment: vec![Region::Ambient, Region::Inside(0)],
            outer_zones: vec![
                [Some(Region::Inside(0)), Some(Region::Ambient)],
                [Some(Region::Inside(1)), Some(Region::Ambient)],
            ],
            inner_zones: vec![],
        }
    }

    /// Sphere b encloses a+ and b+; sphere a, inside b, encloses a+.
    pub(crate) fn d2() -> NestedDiagram {
        NestedDiagram {
            rank: 2,
            spheres: vec![
                SphereModel {
                    label: 0,
                    orientation: 1,
                },
                SphereModel {
                    label: 1,
                    orientation: 1,
                },
            ],
            components: vec![Component { sphere: 0, side: 1 }, Component { sphere: 1, side: 1 }],
            tokens: vec![],
            nesting: vec![],
            containment: vec![Region::Inside(1), Region::Ambient],
            outer_zones: vec![
                [Some(Region::Inside(0)), Some(Region::Ambient)],
                [Some(Region::Inside(1)), Some(Region::Ambient)],
            ],
            inner_zones: vec![],
        }
    }

    /// Rank 1, one sphere crossing the standard sphere once: a plus-side cap
    /// c0 and a minus-side cap c1 glued along t0.
    pub(crate) fn degree_one_rank_one() -> NestedDiagram {
        NestedDiagram {
            rank: 1,
            spheres: vec![SphereModel {
                label: 0,
                orientation: 1,
            }],
            components: vec![Component { sphere: 0, side: 1 }, Component { sphere: 0, side: -1 }],
            tokens: vec![Token {
                portal: 0,
                plus: 0,
                minus: 1,
            }],
            nesting: vec![None],
            containment: vec![Region::Ambient, Region::Ambient],
            // the cap c0 covers the disc inside t0 on a+; c1 covers the
            // outer part on a-
            outer_zones: vec![[Some(Region::Ambient), Some(Region::Inside(1))]],
            inner_zones: vec![[Some(Region::Inside(0)), Some(Region::Ambient)]],
        }
    }

    #[test]
    fn standard_traces_to_identity() {
        for n in 1..=5 {
            let d = NestedDiagram::standard_like(n).unwrap();
            assert!(d.validate().is_empty(), "{:?}", d.validate());
            assert!(d.trace().unwrap().is_identity());
            for label in 0..n {
                assert_eq!(d.degree_of_sphere(label).unwrap(), 0);
            }
            assert_eq!(d.total_tokens(), 0);
        }
        assert!(NestedDiagram::standard_like(0).is_err());
    }

    #[test]
    fn d1_traces_to_standard_transvection() {
        let d = d1();
        assert_eq!(d.validate(), vec![]);
        assert_eq!(d.trace().unwrap(), endo(&["a", "ab"]));
        for label in 0..2 {
            assert_eq!(d.degree_of_sphere(label).unwrap(), 0);
            for portal in 0..2 {
                assert_eq!(d.pair_count(portal, label).unwrap(), 0);
            }
        }
    }

    #[test]
    fn nested_other_way() {
        assert_eq!(d2().trace().unwrap(), endo(&["ba", "b"]));
        assert!(d2().is_valid());
    }

    #[test]
    fn degree_one_sphere() {
        let d = degree_one_rank_one();
        assert_eq!(d.structural_violations(), vec![]);
        assert_eq!(d.degree_of_sphere(0).unwrap(), 1);
        let kinds: Vec<_> = d.components_of(0).unwrap().into_iter().map(|(_, k)| k).collect();
        assert_eq!(kinds, vec![ComponentKind::EndCap, ComponentKind::EndCap]);
        // loop via outer zones: down to ambient, back out of c1 whose
        // positive side faces away from its inside
        let e = d.trace().unwrap();
        assert_eq!(e, endo(&["a"]));
        // same reading through the inner zone
        assert_eq!(d.trace_via(&[Some(0)]).unwrap(), e);
        assert!(d.is_valid());
    }

    #[test]
    fn degree_two_sphere_components() {
        // three components in a row: c0 -t0- c1 -t1- c2, both tokens on b
        let d = NestedDiagram {
            rank: 2,
            spheres: vec![
                SphereModel {
                    label: 0,
                    orientation: 1,
                },
                SphereModel {
                    label: 1,
                    orientation: 1,
                },
            ],
            components: vec![
                Component { sphere: 1, side: 1 },
                Component { sphere: 1, side: 1 },
                Component { sphere: 1, side: 1 },
                Component { sphere: 0, side: 1 },
            ],
            tokens: vec![
                Token {
                    portal: 1,
                    plus: 0,
                    minus: 1,
                },
                Token {
                    portal: 1,
                    plus: 2,
                    minus: 1,
                },
            ],
            nesting: vec![None, None],
            containment: vec![Region::Ambient, Region::Ambient, Region::Ambient, Region::Ambient],
            outer_zones: vec![
                [Some(Region::Inside(3)), Some(Region::Ambient)],
                [Some(Region::Ambient), Some(Region::Ambient)],
            ],
            inner_zones: vec![
                [Some(Region::Inside(0)), Some(Region::Inside(1))],
                [Some(Region::Inside(2)), Some(Region::Inside(1))],
            ],
        };
        assert_eq!(d.structural_violations(), vec![]);
        assert_eq!(d.degree_of_sphere(1).unwrap(), 2);
        assert_eq!(d.pair_count(1, 1).unwrap(), 2);
        assert_eq!(d.pair_count(0, 1).unwrap(), 0);
        let kinds: Vec<_> = d.components_of(1).unwrap().into_iter().map(|(_, k)| k).collect();
        assert_eq!(
            kinds,
            vec![ComponentKind::EndCap, ComponentKind::Tunnel, ComponentKind::EndCap]
        );
        assert_eq!(d.components_of(0).unwrap(), vec![(3, ComponentKind::Closed)]);
        let chi: i64 = (0..3).map(|c| d.euler_characteristic(c)).sum();
        assert_eq!(chi, 2);
        assert!(d.components_of(5).is_err());
        assert!(d.degree_of_sphere(7).is_err());
    }

    #[test]
    fn cyclic_sphere_is_rejected() {
        let mut d = degree_one_rank_one();
        // second token between the same two caps: V = E
        d.tokens.push(Token {
            portal: 0,
            plus: 0,
            minus: 1,
        });
        d.nesting.push(None);
        d.inner_zones.push([Some(Region::Inside(0)), Some(Region::Ambient)]);
        let v = d.validate();
        assert!(v.iter().any(|v| v.code == ViolationCode::SphereNotTree), "{v:?}");
    }

    #[test]
    fn validate_reports_every_violation() {
        let mut d = d1();
        d.spheres[1].orientation = 0;
        d.spheres[0].label = 1;
        let v = d.validate();
        let codes: Vec<_> = v.iter().map(|v| v.code).collect();
        assert!(codes.contains(&ViolationCode::SphereLabels));
        assert!(codes.contains(&ViolationCode::BadSign));
    }

    #[test]
    fn unassigned_zone_and_cycles() {
        let mut d = d1();
        d.outer_zones[1][1] = None;
        assert!(d.validate().iter().any(|v| v.code == ViolationCode::ZoneUnassigned));
        assert!(d.trace().is_err());
        let mut d = d1();
        d.containment = vec![Region::Inside(1), Region::Inside(0)];
        assert!(d.validate().iter().any(|v| v.code == ViolationCode::ContainmentCycle));
    }

    #[test]
    fn empty_sphere_is_not_automorphism() {
        // sphere b encloses nothing
        let mut d = NestedDiagram::standard_like(2).unwrap();
        d.outer_zones[1][0] = Some(Region::Ambient);
        let v = d.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].code, ViolationCode::NotAutomorphism);
    }

    #[test]
    fn adjacency_and_orientation_checks() {
        let mut d = degree_one_rank_one();
        d.components[1].side = 1;
        assert!(d
            .validate()
            .iter()
            .any(|v| v.code == ViolationCode::OrientationInconsistent));
        let mut d = degree_one_rank_one();
        d.inner_zones[0][0] = Some(Region::Ambient);
        assert!(d.validate().iter().any(|v| v.code == ViolationCode::TokenAdjacency));
    }

    #[test]
    fn relabel_and_flip() {
        let d = d1();
        let mut swapped = d.clone();
        for c in &mut swapped.components {
            c.sphere = 1 - c.sphere;
        }
        assert_eq!(swapped.trace().unwrap(), d.trace().unwrap().relabel_outputs(&[1, 0]));
        let mut flipped = d.clone();
        flipped.spheres[0].orientation = -1;
        assert_eq!(flipped.trace().unwrap(), endo(&["A", "Ab"]));
    }

    #[test]
    fn canonical_is_relabeling_invariant() {
        let mut d = degree_one_rank_one();
        let (c1, k1) = d.canonical();
        // swap component ids
        d.components.swap(0, 1);
        d.tokens[0] = Token {
            portal: 0,
            plus: 1,
            minus: 0,
        };
        d.containment.swap(0, 1);
        let fix = |z: &mut Option<Region>| {
            if let Some(Region::Inside(c)) = z {
                *c = 1 - *c;
            }
        };
        for z in d.outer_zones.iter_mut().chain(d.inner_zones.iter_mut()) {
            fix(&mut z[0]);
            fix(&mut z[1]);
        }
        assert_eq!(d.structural_violations(), vec![]);
        let (c2, k2) = d.canonical();
        assert_eq!(k1, k2);
        assert_eq!(c1, c2);
        assert_eq!(c1.trace().unwrap(), d.trace().unwrap());
    }

    #[test]
    fn dot_output_is_stable() {
        let dot = d1().to_dot();
        let expected = "graph components {
  subgraph cluster_a {
    label=\"sphere a (+)\";
    c0 [label=\"c0 closed\"];
  }
  subgraph cluster_b {
    label=\"sphere b (+)\";
    c1 [label=\"c1 closed\"];
  }
}
digraph containment {
  ambient [shape=box];
  c0 [label=\"c0 a+\"];
  c1 [label=\"c1 b+\"];
  ambient -> c0;
  c0 -> c1;
  \"a+\" [shape=plaintext];
  c0 -> \"a+\" [style=dashed];
  \"a-\" [shape=plaintext];
  ambient -> \"a-\" [style=dashed];
  \"b+\" [shape=plaintext];
  c1 -> \"b+\" [style=dashed];
  \"b-\" [shape=plaintext];
  ambient -> \"b-\" [style=dashed];
}
";
        assert_eq!(dot, expected);
    }
}
