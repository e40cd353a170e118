//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every function takes and returns plain strings; errors come back as
//! thrown JS strings.

use wasm_bindgen::prelude::*;

use whitehead_core::morphism::is_basis;
use whitehead_core::textio::{implied_rank, parse_diagram, parse_endomorphism, parse_word};
use whitehead_core::{Endomorphism, Error, Word};

fn fail(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn endo(text: &str, rank: usize) -> Result<Endomorphism, JsValue> {
    let rank = if rank == 0 {
        implied_rank(text).map_err(fail)?
    } else {
        rank
    };
    parse_endomorphism(text, rank).map_err(fail)
}

fn words(text: &str) -> Result<Vec<Word>, JsValue> {
    text.split([',', '\n'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_word(s).map_err(fail))
        .collect()
}

/// Reduced form, inverse and product of comma-separated words, one per line.
#[wasm_bindgen]
pub fn word_report(text: &str) -> Result<String, JsValue> {
    let ws = words(text)?;
    let mut out = String::new();
    let mut product = Word::empty();
    for w in &ws {
        let r = w.reduce();
        out.push_str(&format!("{w}  reduces to {r}, inverse {}\n", r.invert()));
        product = product.concat(w);
    }
    if ws.len() > 1 {
        out.push_str(&format!("product: {product}\n"));
    }
    Ok(out)
}

/// `f∘g`, or `f` alone when `g` is blank; reports inverse and basis status.
/// A `rank` of 0 infers it from the input.
#[wasm_bindgen]
pub fn automorphism_report(f: &str, g: &str, rank: usize) -> Result<String, JsValue> {
    let mut f = endo(f, rank)?;
    if !g.trim().is_empty() {
        let g = endo(g, f.rank())?;
        f = f.compose(&g).map_err(fail)?;
    }
    let mut out = format!("map: {f}\n");
    match f.invert() {
        Ok(inv) => out.push_str(&format!("automorphism, inverse {inv}\n")),
        Err(Error::NotAnAutomorphism(_)) => out.push_str("not an automorphism: the images are not a basis\n"),
        Err(e) => return Err(fail(e)),
    }
    Ok(out)
}

/// Whether comma-separated words form a basis of the free group on them.
#[wasm_bindgen]
pub fn basis_report(text: &str, rank: usize) -> Result<String, JsValue> {
    let ws = words(text)?;
    let rank = if rank == 0 { ws.len() } else { rank };
    match is_basis(rank, &ws).map_err(fail)? {
        Some(cert) => Ok(format!(
            "basis ({} Nielsen moves from the standard basis)",
            cert.moves.len()
        )),
        None => Ok("not a basis".to_string()),
    }
}

/// Validates a diagram file and returns its trace and degree summary.
#[wasm_bindgen]
pub fn diagram_report(json: &str) -> Result<String, JsValue> {
    let d = match parse_diagram(json) {
        Ok(d) => d,
        Err(Error::InvalidDiagram(vs)) => {
            let lines: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
            return Err(JsValue::from_str(&format!("invalid diagram:\n{}", lines.join("\n"))));
        }
        Err(e) => return Err(fail(e)),
    };
    let mut out = format!("trace: {}\ntokens: {}\n", d.trace().map_err(fail)?, d.total_tokens());
    for s in 0..d.rank {
        let kinds: Vec<&str> = d
            .components_of(s)
            .map_err(fail)?
            .iter()
            .map(|(_, k)| k.as_str())
            .collect();
        out.push_str(&format!("sphere {}: {}\n", (b'a' + s as u8) as char, kinds.join(", ")));
    }
    Ok(out)
}

/// Graphviz source for a diagram file.
#[wasm_bindgen]
pub fn diagram_dot(json: &str) -> Result<String, JsValue> {
    Ok(parse_diagram(json).map_err(fail)?.to_dot())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports() {
        let w = word_report("bAcCaB, ab").unwrap();
        assert!(w.contains("reduces to 1"));
        assert!(w.contains("product: ab"));
        let a = automorphism_report("a->b; b->bAB", "a->ABa; b->a", 0).unwrap();
        assert!(a.starts_with("map: a->a; b->b"));
        assert_eq!(basis_report("a, Abc, CA", 3).unwrap().split(' ').next(), Some("basis"));
        assert_eq!(basis_report("aa, b", 0).unwrap(), "not a basis");
    }
}
