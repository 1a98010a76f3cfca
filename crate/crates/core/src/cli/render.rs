//! Text and LaTeX renderings of relations.

use crate::algebra::{Coefficient, Context, ExchangeRelation, GenId, Relation};
use crate::phase::{fmt_rational, LinearForm, PhaseExponent};

const GREEK: [&str; 12] =
    ["alpha", "beta", "gamma", "delta", "epsilon", "theta", "kappa", "lambda", "mu", "nu", "phi", "psi"];

/// `lambda12` ↦ `\lambda_{12}`, `t13` ↦ `t_{13}`.
pub fn param_latex(name: &str) -> String {
    let head = name.trim_end_matches(|c: char| c.is_ascii_digit());
    let digits = &name[head.len()..];
    let head = if GREEK.contains(&head) { format!("\\{head}") } else { head.to_string() };
    if digits.is_empty() {
        head
    } else {
        format!("{head}_{{{digits}}}")
    }
}

pub fn form_latex(f: &LinearForm) -> String {
    let mut s = String::new();
    for (p, c) in f.coeffs() {
        let neg = c < &num_traits::Zero::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let name = param_latex(p.name());
        if mag == num_traits::One::one() {
            s.push_str(&name);
        } else if mag.is_integer() {
            s.push_str(&format!("{}{name}", mag.numer()));
        } else {
            s.push_str(&format!("\\tfrac{{{}}}{{{}}}{name}", mag.numer(), mag.denom()));
        }
    }
    let c = f.constant_part();
    if s.is_empty() {
        return fmt_rational(c);
    }
    if !num_traits::Zero::is_zero(c) {
        let neg = c < &num_traits::Zero::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        s.push_str(if neg { " - " } else { " + " });
        s.push_str(&fmt_rational(&mag));
    }
    s
}

pub fn generator_latex(ctx: &Context, g: GenId) -> String {
    let gen = ctx.generator(g);
    let idx: Vec<String> = gen.indices.iter().map(|i| i.to_string()).collect();
    let sep = if gen.indices.iter().all(|&i| i < 10) { "" } else { "," };
    format!("{}_{{{}}}{}", gen.name, idx.join(sep), if gen.starred { "^*" } else { "" })
}

fn phase_latex(x: &PhaseExponent) -> String {
    format!("e^{{2\\pi i({})}}", form_latex(x.form()))
}

pub fn exchange_latex(ctx: &Context, r: &ExchangeRelation) -> String {
    let l = generator_latex(ctx, r.left);
    let rr = generator_latex(ctx, r.right);
    if r.is_commutator() {
        format!("[{l}, {rr}] &= 0")
    } else {
        format!("{l} {rr} &= {}\\, {rr} {l}", phase_latex(&r.phase))
    }
}

fn coefficient_latex(c: &Coefficient) -> String {
    let parts: Vec<String> = c
        .terms()
        .map(|(x, q)| {
            let q = fmt_rational(q);
            if x.is_zero() {
                q
            } else if q == "1" {
                phase_latex(x)
            } else if q == "-1" {
                format!("-{}", phase_latex(x))
            } else {
                format!("{q}\\, {}", phase_latex(x))
            }
        })
        .collect();
    if parts.len() > 1 {
        format!("({})", parts.join(" + "))
    } else {
        parts.join("")
    }
}

pub fn relation_latex(ctx: &Context, r: &Relation) -> String {
    let mut s = String::new();
    for (i, (c, letters)) in r.terms.iter().enumerate() {
        let word: Vec<String> = letters.iter().map(|&g| generator_latex(ctx, g)).collect();
        let mut coef = coefficient_latex(c);
        let negative = coef.starts_with('-');
        if negative {
            coef.remove(0);
        }
        if i > 0 || negative {
            s.push_str(if negative { " - " } else { " + " });
        }
        match (letters.is_empty(), coef.as_str()) {
            (true, _) => s.push_str(&coef),
            (false, "1") => s.push_str(&word.join(" ")),
            (false, _) => s.push_str(&format!("{coef}\\, {}", word.join(" "))),
        }
    }
    s.push_str(" &= 0");
    s.trim_start_matches(" + ").to_string()
}

pub fn align(lines: &[String]) -> String {
    let mut s = String::from("\\begin{align*}\n");
    for (i, l) in lines.iter().enumerate() {
        s.push_str(l);
        s.push_str(if i + 1 < lines.len() { " \\\\\n" } else { "\n" });
    }
    s.push_str("\\end{align*}\n");
    s
}
