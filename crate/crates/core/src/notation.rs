//! Human-readable rendering of monomials and forms.
//!
//! Unicode mode follows the usual coframe notation: `φ³¹̄²̄³̄` for models whose generators
//! are `pK` / `qK` (with braces once an index has two digits), and `φ`, `φ̄`, `ω₁` style
//! names otherwise. ASCII mode writes a conjugate generator as `~` followed by its partner's name.

use crate::algebra::{Form, GradedAlgebra, Monomial};
use num_traits::Zero;

use crate::linalg::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Notation {
    #[default]
    Unicode,
    Ascii,
}

impl Notation {
    /// ASCII when `HERMFORM_ASCII=1` is set, Unicode otherwise.
    pub fn from_env() -> Self {
        match std::env::var("HERMFORM_ASCII") {
            Ok(v) if v == "1" => Notation::Ascii,
            _ => Notation::Unicode,
        }
    }
}

const OVERLINE: char = '\u{0304}';

fn subscript(digits: &str) -> String {
    digits
        .chars()
        .map(|c| c.to_digit(10).map(|d| char::from_u32(0x2080 + d).unwrap()).unwrap_or(c))
        .collect()
}

fn superscript(n: u32) -> String {
    const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| SUP[c.to_digit(10).unwrap() as usize])
        .collect()
}

/// Index `K` if every generator is called `pK` (holomorphic) or `qK` (its conjugate).
fn coframe_index(alg: &GradedAlgebra) -> Option<Vec<(bool, String)>> {
    alg.generators()
        .iter()
        .map(|g| {
            let (head, tail) = g.name.split_at(1);
            let ok = !tail.is_empty() && tail.bytes().all(|b| b.is_ascii_digit());
            match head {
                "p" if ok && g.bidegree == (1, 0) => Some((false, tail.to_string())),
                "q" if ok && g.bidegree == (0, 1) => Some((true, tail.to_string())),
                _ => None,
            }
        })
        .collect()
}

fn unicode_name(alg: &GradedAlgebra, g: usize) -> String {
    let gen = &alg.generators()[g];
    let base = |name: &str| -> String {
        match name {
            "phi" => "φ".into(),
            "psi" => "ψ".into(),
            "eta" => "η".into(),
            _ => match name.strip_prefix('w') {
                Some(d) if !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) => format!("ω{}", subscript(d)),
                _ => name.to_string(),
            },
        }
    };
    let partner = &alg.generators()[gen.conjugate];
    if gen.conjugate != g && gen.name == format!("{}bar", partner.name) {
        let mut s = base(&partner.name);
        let first_len = s.chars().next().map(char::len_utf8).unwrap_or(0);
        s.insert(first_len, OVERLINE);
        s
    } else {
        base(&gen.name)
    }
}

fn ascii_name(alg: &GradedAlgebra, g: usize) -> String {
    let gen = &alg.generators()[g];
    let partner = &alg.generators()[gen.conjugate];
    let auto = crate::catalog::auto_conjugate_name(&partner.name);
    if gen.conjugate != g && gen.name == auto && g > gen.conjugate {
        format!("~{}", partner.name)
    } else {
        gen.name.clone()
    }
}

pub fn format_monomial(alg: &GradedAlgebra, m: &Monomial, notation: Notation) -> String {
    if m.is_unit() {
        return "1".into();
    }
    if notation == Notation::Unicode {
        if let Some(idx) = coframe_index(alg) {
            let mut holo = String::new();
            let mut anti = String::new();
            let long = idx.iter().any(|(_, k)| k.len() > 1);
            for (g, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let (conj, k) = &idx[g];
                let target = if *conj { &mut anti } else { &mut holo };
                if long && !target.is_empty() {
                    target.push(',');
                }
                for c in k.chars() {
                    // single-digit indices become superscripts, as in φ³¹̄
                    if long {
                        target.push(c);
                    } else {
                        target.push_str(&superscript(c.to_digit(10).unwrap()));
                    }
                    if *conj {
                        target.push(OVERLINE);
                    }
                }
            }
            if !long {
                return format!("φ{holo}{anti}");
            }
            let sep = if holo.is_empty() || anti.is_empty() { "" } else { " " };
            return format!("φ^{{{holo}{sep}{anti}}}");
        }
    }
    let mut parts = Vec::new();
    for (g, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let (name, pow) = match notation {
            Notation::Unicode => (unicode_name(alg, g), if e > 1 { superscript(e) } else { String::new() }),
            Notation::Ascii => (ascii_name(alg, g), if e > 1 { format!("^{e}") } else { String::new() }),
        };
        parts.push(format!("{name}{pow}"));
    }
    parts.join(if notation == Notation::Unicode { "" } else { "*" })
}

fn format_coeff(c: &Scalar) -> (bool, String) {
    if c.is_real() || c.re().is_zero() {
        let s = c.to_string();
        match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        }
    } else {
        (false, format!("({c})"))
    }
}

pub fn format_form(alg: &GradedAlgebra, f: &Form, notation: Notation) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    let dot = if notation == Notation::Unicode { "·" } else { "*" };
    for (k, (m, c)) in f.terms().enumerate() {
        let (neg, mag) = format_coeff(c);
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mono = format_monomial(alg, m, notation);
        if m.is_unit() {
            out.push_str(&mag);
        } else if mag == "1" {
            out.push_str(&mono);
        } else {
            out.push_str(&mag);
            out.push_str(dot);
            out.push_str(&mono);
        }
    }
    out
}
