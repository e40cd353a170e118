//! Text formats: words, endomorphisms, diagram files and catalogue lines.
//!
//! Words use `1` for the empty word and ignore whitespace. Endomorphisms are
//! written `a->ab; b->b`. Diagram files are JSON.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Component, NestedDiagram, Region, SphereModel, Token, Violation, ViolationCode};
use crate::error::{Error, Result};
use crate::morphism::Endomorphism;
use crate::word::{Letter, Word, MAX_RANK};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParseCode {
    IllegalCharacter,
    UnexpectedEnd,
    ExpectedArrow,
    ExpectedGenerator,
    GeneratorOutOfRange,
    MissingGenerator,
    DuplicateGenerator,
    Syntax,
    Schema,
}

impl ParseCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ParseCode::IllegalCharacter => "illegal-character",
            ParseCode::UnexpectedEnd => "unexpected-end",
            ParseCode::ExpectedArrow => "expected-arrow",
            ParseCode::ExpectedGenerator => "expected-generator",
            ParseCode::GeneratorOutOfRange => "generator-out-of-range",
            ParseCode::MissingGenerator => "missing-generator",
            ParseCode::DuplicateGenerator => "duplicate-generator",
            ParseCode::Syntax => "syntax",
            ParseCode::Schema => "schema",
        }
    }
}

impl fmt::Display for ParseCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A parse failure located by byte offsets `start..end` into the input.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{code} at {start}..{end}: expected {expected}")]
pub struct ParseError {
    pub start: usize,
    pub end: usize,
    pub expected: String,
    pub code: ParseCode,
}

impl ParseError {
    fn new(code: ParseCode, start: usize, end: usize, expected: impl Into<String>) -> Self {
        ParseError {
            start,
            end,
            expected: expected.into(),
            code,
        }
    }
}

/// Parses a word; the input is not reduced.
pub fn parse_word(text: &str) -> std::result::Result<Word, ParseError> {
    parse_word_at(text, 0)
}

fn parse_word_at(text: &str, offset: usize) -> std::result::Result<Word, ParseError> {
    let mut letters = Vec::new();
    let mut one: Option<usize> = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            continue;
        }
        if c == '1' && one.is_none() && letters.is_empty() {
            one = Some(i);
            continue;
        }
        match Letter::from_char(c) {
            Some(l) if one.is_none() => letters.push(l),
            _ => {
                let at = offset + i;
                return Err(ParseError::new(
                    ParseCode::IllegalCharacter,
                    at,
                    at + c.len_utf8(),
                    "a letter a-z or A-Z, or 1 alone",
                ));
            }
        }
    }
    if one.is_none() && letters.is_empty() {
        let at = offset + text.len();
        return Err(ParseError::new(
            ParseCode::UnexpectedEnd,
            at,
            at,
            "a word (1 for the empty word)",
        ));
    }
    Ok(Word::from_letters(letters))
}

pub fn format_word(w: &Word) -> String {
    w.to_string()
}

struct Assignment {
    generator: usize,
    start: usize,
    end: usize,
    image: Word,
}

fn parse_assignments(text: &str) -> std::result::Result<Vec<Assignment>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in text.split(';') {
        let here = offset;
        offset += piece.len() + 1;
        let trimmed = piece.trim_start();
        let lead = here + piece.len() - trimmed.len();
        if trimmed.trim().is_empty() {
            // a trailing separator is allowed, an empty one elsewhere is not
            if offset > text.len() && !out.is_empty() {
                break;
            }
            return Err(ParseError::new(
                ParseCode::UnexpectedEnd,
                lead,
                lead,
                "an assignment like a->ab",
            ));
        }
        let c = trimmed.chars().next().unwrap();
        let generator = match Letter::from_char(c) {
            Some(l) if l.is_positive() => l.index(),
            _ => {
                return Err(ParseError::new(
                    ParseCode::ExpectedGenerator,
                    lead,
                    lead + c.len_utf8(),
                    "a lowercase generator",
                ))
            }
        };
        let rest = &trimmed[c.len_utf8()..];
        let after = rest.trim_start();
        let arrow_at = lead + c.len_utf8() + rest.len() - after.len();
        let Some(body) = after.strip_prefix("->") else {
            return Err(ParseError::new(
                ParseCode::ExpectedArrow,
                arrow_at,
                arrow_at + 1.min(after.len()),
                "->",
            ));
        };
        let image = parse_word_at(body, arrow_at + 2)?;
        out.push(Assignment {
            generator,
            start: lead,
            end: here + piece.trim_end().len(),
            image,
        });
    }
    Ok(out)
}

/// Parses `a->w1; b->w2; ...` for the given rank; every generator must be
/// assigned exactly once.
pub fn parse_endomorphism(text: &str, rank: usize) -> Result<Endomorphism> {
    crate::error::check_rank(rank)?;
    let assignments = parse_assignments(text)?;
    let mut images: Vec<Option<Word>> = vec![None; rank];
    for a in &assignments {
        if a.generator >= rank {
            return Err(ParseError::new(
                ParseCode::GeneratorOutOfRange,
                a.start,
                a.start + 1,
                format!("a generator below {}", Letter::generator(rank).to_char()),
            )
            .into());
        }
        for l in a.image.letters() {
            if l.index() >= rank {
                return Err(Error::GeneratorOutOfRange {
                    letter: l.to_char(),
                    rank,
                });
            }
        }
        if images[a.generator].is_some() {
            return Err(ParseError::new(
                ParseCode::DuplicateGenerator,
                a.start,
                a.end,
                format!("a single assignment for {}", Letter::generator(a.generator).to_char()),
            )
            .into());
        }
        images[a.generator] = Some(a.image.clone());
    }
    if let Some(missing) = images.iter().position(Option::is_none) {
        return Err(ParseError::new(
            ParseCode::MissingGenerator,
            text.len(),
            text.len(),
            format!("an assignment for {}", Letter::generator(missing).to_char()),
        )
        .into());
    }
    Endomorphism::new(rank, images.into_iter().map(Option::unwrap).collect())
}

/// The rank implied by an endomorphism text: its number of assignments, or
/// the highest generator mentioned if that is larger.
pub fn implied_rank(text: &str) -> std::result::Result<usize, ParseError> {
    let assignments = parse_assignments(text)?;
    let mut rank = assignments.len();
    for a in &assignments {
        rank = rank.max(a.generator + 1).max(a.image.rank_needed());
    }
    Ok(rank.min(MAX_RANK))
}

pub fn format_endomorphism(f: &Endomorphism) -> String {
    f.to_string()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDiagram {
    rank: usize,
    spheres: Vec<FileSphere>,
    portal_nesting: Vec<FileNesting>,
    containment: FileContainment,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSphere {
    label: char,
    orientation: i8,
    components: Vec<FileComponent>,
    tokens: Vec<FileToken>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileComponent {
    id: usize,
    side: i8,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileToken {
    id: usize,
    portal: char,
    plus: usize,
    minus: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileNesting {
    portal: char,
    parents: Vec<FileTokenParent>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileTokenParent {
    token: usize,
    parent: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileContainment {
    parents: Vec<FileComponentParent>,
    zones: Vec<FileZone>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileComponentParent {
    component: usize,
    parent: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileZone {
    portal: char,
    side: String,
    token: Option<usize>,
    region: Option<usize>,
}

fn region_ref(r: Region) -> Option<usize> {
    match r {
        Region::Ambient => None,
        Region::Inside(c) => Some(c),
    }
}

fn ref_region(r: Option<usize>) -> Region {
    r.map_or(Region::Ambient, Region::Inside)
}

fn label(i: usize) -> char {
    Letter::generator(i).to_char()
}

fn to_file(d: &NestedDiagram) -> FileDiagram {
    let spheres = d
        .spheres
        .iter()
        .map(|s| FileSphere {
            label: label(s.label),
            orientation: s.orientation,
            components: d
                .components
                .iter()
                .enumerate()
                .filter(|(_, c)| c.sphere == s.label)
                .map(|(id, c)| FileComponent { id, side: c.side })
                .collect(),
            tokens: d
                .tokens
                .iter()
                .enumerate()
                .filter(|(_, t)| d.components.get(t.plus).map(|c| c.sphere) == Some(s.label))
                .map(|(id, t)| FileToken {
                    id,
                    portal: label(t.portal),
                    plus: t.plus,
                    minus: t.minus,
                })
                .collect(),
        })
        .collect();
    let portal_nesting = (0..d.rank)
        .map(|p| FileNesting {
            portal: label(p),
            parents: d
                .tokens
                .iter()
                .enumerate()
                .filter(|(_, t)| t.portal == p)
                .map(|(token, _)| FileTokenParent {
                    token,
                    parent: d.nesting[token],
                })
                .collect(),
        })
        .collect();
    let mut zones = Vec::new();
    for p in 0..d.rank {
        for s in 0..2 {
            // unassigned zones are left out
            if let Some(r) = d.outer_zones[p][s] {
                zones.push(FileZone {
                    portal: label(p),
                    side: if s == 0 { "+" } else { "-" }.to_string(),
                    token: None,
                    region: region_ref(r),
                });
            }
        }
    }
    for (t, tok) in d.tokens.iter().enumerate() {
        for s in 0..2 {
            if let Some(r) = d.inner_zones[t][s] {
                zones.push(FileZone {
                    portal: label(tok.portal),
                    side: if s == 0 { "+" } else { "-" }.to_string(),
                    token: Some(t),
                    region: region_ref(r),
                });
            }
        }
    }
    FileDiagram {
        rank: d.rank,
        spheres,
        portal_nesting,
        containment: FileContainment {
            parents: d
                .containment
                .iter()
                .enumerate()
                .map(|(component, &r)| FileComponentParent {
                    component,
                    parent: region_ref(r),
                })
                .collect(),
            zones,
        },
    }
}

/// Pretty-printed diagram file.
pub fn format_diagram(d: &NestedDiagram) -> String {
    serde_json::to_string_pretty(&to_file(d)).expect("diagram serialization")
}

/// Single-line diagram file, as used in catalogue output.
pub fn format_diagram_compact(d: &NestedDiagram) -> String {
    serde_json::to_string(&to_file(d)).expect("diagram serialization")
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let start: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum();
    (start + column.saturating_sub(1)).min(text.len())
}

fn schema(expected: impl Into<String>) -> ParseError {
    ParseError::new(ParseCode::Schema, 0, 0, expected)
}

fn generator_of(c: char, rank: usize, what: &str) -> std::result::Result<usize, ParseError> {
    match Letter::from_char(c) {
        Some(l) if l.is_positive() && l.index() < rank => Ok(l.index()),
        _ => Err(schema(format!("{what}: a generator below rank {rank}, got {c:?}"))),
    }
}

fn dense<T: Copy>(slots: Vec<Option<T>>, what: &str) -> std::result::Result<Vec<T>, ParseError> {
    slots
        .iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| schema(format!("{what} ids 0..{} each listed once, missing {i}", slots.len()))))
        .collect()
}

fn place<T>(slots: &mut [Option<T>], id: usize, value: T, what: &str) -> std::result::Result<(), ParseError> {
    if id >= slots.len() {
        return Err(schema(format!("{what} ids 0..{}, got {id}", slots.len())));
    }
    if slots[id].is_some() {
        return Err(schema(format!("{what} {id} listed once")));
    }
    slots[id] = Some(value);
    Ok(())
}

fn from_file(f: FileDiagram) -> Result<NestedDiagram> {
    let rank = f.rank;
    crate::error::check_rank(rank)?;
    let m: usize = f.spheres.iter().map(|s| s.components.len()).sum();
    let k: usize = f.spheres.iter().map(|s| s.tokens.len()).sum();
    let mut spheres = Vec::new();
    let mut components: Vec<Option<Component>> = vec![None; m];
    let mut tokens: Vec<Option<Token>> = vec![None; k];
    let mut token_home = vec![0usize; k];
    for s in &f.spheres {
        let lab = generator_of(s.label, rank, "sphere label")?;
        spheres.push(SphereModel {
            label: lab,
            orientation: s.orientation,
        });
        for c in &s.components {
            place(
                &mut components,
                c.id,
                Component {
                    sphere: lab,
                    side: c.side,
                },
                "component",
            )?;
        }
        for t in &s.tokens {
            let portal = generator_of(t.portal, rank, "token portal")?;
            place(
                &mut tokens,
                t.id,
                Token {
                    portal,
                    plus: t.plus,
                    minus: t.minus,
                },
                "token",
            )?;
            token_home[t.id] = lab;
        }
    }
    let components = dense(components, "component")?;
    let tokens = dense(tokens, "token")?;

    let mut nesting: Vec<Option<Option<usize>>> = vec![None; k];
    let mut named_portal = vec![None; k];
    for pn in &f.portal_nesting {
        let portal = generator_of(pn.portal, rank, "nesting portal")?;
        for p in &pn.parents {
            place(&mut nesting, p.token, p.parent, "nesting token")?;
            named_portal[p.token] = Some(portal);
        }
    }
    // tokens missing from the nesting lists are outermost
    let nesting: Vec<Option<usize>> = nesting.into_iter().map(Option::flatten).collect();

    let mut containment: Vec<Option<Region>> = vec![None; m];
    for p in &f.containment.parents {
        place(
            &mut containment,
            p.component,
            ref_region(p.parent),
            "containment component",
        )?;
    }
    let containment = dense(containment, "containment component")?;

    let mut outer_zones = vec![[None; 2]; rank];
    let mut inner_zones = vec![[None; 2]; k];
    for z in &f.containment.zones {
        let portal = generator_of(z.portal, rank, "zone portal")?;
        let side = match z.side.as_str() {
            "+" => 0,
            "-" => 1,
            other => return Err(schema(format!("zone side \"+\" or \"-\", got {other:?}")).into()),
        };
        let slot = match z.token {
            None => &mut outer_zones[portal][side],
            Some(t) if t < k && tokens[t].portal == portal => &mut inner_zones[t][side],
            Some(t) => return Err(schema(format!("zone token {t} on portal {}", z.portal)).into()),
        };
        if slot.is_some() {
            return Err(schema("each zone listed once").into());
        }
        *slot = Some(ref_region(z.region));
    }

    let d = NestedDiagram {
        rank,
        spheres,
        components,
        tokens,
        nesting,
        containment,
        outer_zones,
        inner_zones,
    };
    let mut violations = Vec::new();
    for (t, tok) in d.tokens.iter().enumerate() {
        let on = |c: usize| d.components.get(c).map(|c| c.sphere);
        if on(tok.plus) != Some(token_home[t]) || on(tok.minus) != Some(token_home[t]) {
            violations.push(Violation {
                code: ViolationCode::TokenSphereMismatch,
                detail: format!("token {t} is listed under sphere {}", label(token_home[t])),
            });
        }
        if named_portal[t].is_some_and(|p| p != tok.portal) {
            violations.push(Violation {
                code: ViolationCode::NestingPortalMismatch,
                detail: format!("token {t} is nested under the wrong portal"),
            });
        }
    }
    if violations.is_empty() {
        violations = d.validate();
    }
    if violations.is_empty() {
        Ok(d)
    } else {
        Err(Error::InvalidDiagram(violations))
    }
}

/// Parses and validates a diagram file.
pub fn parse_diagram(text: &str) -> Result<NestedDiagram> {
    let file: FileDiagram = serde_json::from_str(text).map_err(|e| {
        let at = byte_offset(text, e.line(), e.column());
        let code = if e.is_data() {
            ParseCode::Schema
        } else {
            ParseCode::Syntax
        };
        ParseError::new(code, at, (at + 1).min(text.len()), e.to_string())
    })?;
    from_file(file)
}

/// One catalogue line: the trace, a tab, then the compact diagram file.
pub fn format_catalogue_line(trace: &Endomorphism, d: &NestedDiagram) -> String {
    format!("{trace}\t{}", format_diagram_compact(d))
}

/// Parses a line written by [`format_catalogue_line`].
pub fn parse_catalogue_line(line: &str) -> Result<(Endomorphism, NestedDiagram)> {
    let (trace, file) = line
        .split_once('\t')
        .ok_or_else(|| ParseError::new(ParseCode::Syntax, 0, line.len(), "trace, tab, diagram"))?;
    let d = parse_diagram(file)?;
    let f = parse_endomorphism(trace, d.rank)?;
    Ok((f, d))
}
