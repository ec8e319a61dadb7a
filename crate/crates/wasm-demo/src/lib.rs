//! Browser bindings: draw a tangle, multiply two tangles, normalise a word.
//!
//! The plain functions return `Result<String, String>` so they can be tested
//! natively; the `#[wasm_bindgen]` wrappers only convert the error.

use std::fmt::Write as _;

use tl_core::{normal_form, normal_form_e, Alphabet, Tangle, Word};
use wasm_bindgen::prelude::*;

const GAP: f64 = 40.0;
const TOP: f64 = 24.0;
const HEIGHT: f64 = 150.0;

fn x(i: i32) -> f64 {
    GAP * i.unsigned_abs() as f64
}

fn parse(t: &str) -> Result<Tangle, String> {
    t.trim().parse().map_err(|e: tl_core::TangleError| e.to_string())
}

pub fn svg(t: &Tangle) -> String {
    let n = t.degree() as f64;
    let bottom = TOP + HEIGHT;
    let mut s = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = GAP * (n + 1.0),
        h = bottom + TOP
    );
    let _ = write!(
        s,
        r##"<rect x="{}" y="{TOP}" width="{}" height="{HEIGHT}" fill="#fafafa" stroke="#bbb"/>"##,
        GAP / 2.0,
        GAP * n
    );
    for (a, b) in t.blocks() {
        let (xa, xb) = (x(a), x(b));
        let d = match (a > 0, b > 0) {
            (true, true) => {
                let y = TOP + (b - a).abs() as f64 * 14.0;
                format!("M{xa} {TOP} C{xa} {y} {xb} {y} {xb} {TOP}")
            }
            (false, false) => {
                let y = bottom - (b - a).abs() as f64 * 14.0;
                format!("M{xa} {bottom} C{xa} {y} {xb} {y} {xb} {bottom}")
            }
            _ => {
                let (up, down) = if a > 0 { (xa, xb) } else { (xb, xa) };
                let mid = TOP + HEIGHT / 2.0;
                format!("M{up} {TOP} C{up} {mid} {down} {mid} {down} {bottom}")
            }
        };
        let _ = write!(
            s,
            r##"<path d="{d}" fill="none" stroke="#1f4e99" stroke-width="2.5"/>"##
        );
    }
    for i in 1..=t.degree() as i32 {
        for (y, label, dy) in [(TOP, format!("{i}"), -8.0), (bottom, format!("{i}'"), 18.0)] {
            let _ = write!(
                s,
                r##"<circle cx="{0}" cy="{y}" r="3.5"/><text x="{0}" y="{1}" font-size="12" text-anchor="middle">{label}</text>"##,
                x(i),
                y + dy
            );
        }
    }
    s.push_str("</svg>");
    s
}

/// SVG drawing of a tangle given as `n=..; blocks=(a,b)...` or JSON.
pub fn render(t: &str) -> Result<String, String> {
    Ok(svg(&parse(t)?))
}

/// Product of two tangles: first line the tangle, second line `loops=m`.
pub fn multiply(a: &str, b: &str) -> Result<String, String> {
    let (p, m) = parse(a)?.compose(&parse(b)?).map_err(|e| e.to_string())?;
    Ok(format!("{p}\nloops={m}"))
}

/// Normal form of a word: `x=(..) y=(..)`, the normal word, the tangle and
/// the number of rewriting steps, one per line.
pub fn normalise(n: usize, word: &str) -> Result<String, String> {
    let w = Word::parse(n, word).map_err(|e| e.to_string())?;
    let (nf, steps) = if w.uses_only(&[Alphabet::E]) && !w.is_empty() {
        let (nf, _, d) = normal_form_e(&w).map_err(|e| e.to_string())?;
        (nf, d.steps.len())
    } else {
        let (nf, d) = normal_form(&w).map_err(|e| e.to_string())?;
        (nf, d.steps.len())
    };
    let t = tl_core::evaluate(&nf.word()).0;
    Ok(format!("{nf}\n{}\n{t}\nsteps={steps}", nf.word()))
}

#[wasm_bindgen(js_name = render)]
pub fn render_js(t: &str) -> Result<String, JsValue> {
    render(t).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = multiply)]
pub fn multiply_js(a: &str, b: &str) -> Result<String, JsValue> {
    multiply(a, b).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = normalise)]
pub fn normalise_js(n: usize, word: &str) -> Result<String, JsValue> {
    normalise(n, word).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALPHA: &str = "n=9; blocks=(1,-3)(2,7)(3,4)(5,6)(8,-6)(9,-9)(-8,-7)(-5,-4)(-2,-1)";
    const BETA: &str = "n=9; blocks=(1,2)(3,4)(5,6)(7,-7)(8,9)(-9,-8)(-6,-3)(-5,-4)(-2,-1)";

    #[test]
    fn svg_has_one_path_per_block() {
        let s = render(ALPHA).unwrap();
        assert!(s.starts_with("<svg") && s.ends_with("</svg>"));
        assert_eq!(s.matches("<path").count(), 9);
        assert_eq!(s.matches("<circle").count(), 18);
    }

    #[test]
    fn multiply_example() {
        let out = multiply(ALPHA, BETA).unwrap();
        assert_eq!(
            out,
            "n=9; blocks=(1,8)(2,7)(3,4)(5,6)(9,-7)(-9,-8)(-6,-3)(-5,-4)(-2,-1)\nloops=1"
        );
    }

    #[test]
    fn normalise_words() {
        let out = normalise(9, "L5 L3 L2 R1 R4 R7").unwrap();
        assert_eq!(out.lines().next(), Some("x=(5,3,2) y=(7,4,1)"));
        assert_eq!(out.lines().nth(2), Some(ALPHA));
        assert!(normalise(5, "E2 E2").unwrap().starts_with("x=(2) y=(2)\nL2 R2\n"));
    }

    #[test]
    fn errors_are_messages() {
        assert!(render("n=2; blocks=(1,-2)(2,-1)").is_err());
        assert!(multiply(ALPHA, "n=3; blocks=(1,-1)(2,-2)(3,-3)").is_err());
        assert!(normalise(4, "E9").unwrap_err().contains("E9"));
    }
}
