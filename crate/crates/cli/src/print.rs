use num_traits::{One, Signed};

use ncsaito_core::ncseries::{Series, Word};
use ncsaito_core::saito::CommutativePoly;
use ncsaito_core::Rat;

/// `p/q` in lowest terms with the sign on the numerator; integers print
/// without a denominator.
pub fn rational(c: &Rat) -> String {
    c.to_string()
}

/// Letters joined by `*` without compressing powers, e.g. `x*x*y`.
pub fn word(w: Word, vars: &[String]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.letters().map(|l| vars[l].as_str()).collect::<Vec<_>>().join("*")
}

/// Runs of a letter written as powers, e.g. `x^2*y`.
fn compact(runs: impl Iterator<Item = (usize, usize)>, vars: &[String]) -> String {
    runs.map(|(l, k)| match k {
        1 => vars[l].clone(),
        _ => format!("{}^{k}", vars[l]),
    })
    .collect::<Vec<_>>()
    .join("*")
}

fn runs(w: Word) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for l in w.letters() {
        match out.last_mut() {
            Some((prev, k)) if *prev == l => *k += 1,
            _ => out.push((l, 1)),
        }
    }
    out
}

fn push_term(out: &mut String, c: &Rat, monomial: Option<String>) {
    let first = out.is_empty();
    match (first, c.is_negative()) {
        (true, true) => out.push('-'),
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
        (true, false) => {}
    }
    let a = c.abs();
    match monomial {
        None => out.push_str(&rational(&a)),
        Some(m) if a.is_one() => out.push_str(&m),
        Some(m) => {
            out.push_str(&rational(&a));
            out.push('*');
            out.push_str(&m);
        }
    }
}

/// Human- and parser-readable form of a series; `parse(series(s)) == s`.
pub fn series(s: &Series, vars: &[String]) -> String {
    let mut out = String::new();
    for (w, c) in s.terms() {
        let m = (!w.is_empty()).then(|| compact(runs(*w).into_iter(), vars));
        push_term(&mut out, c, m);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Commutative polynomial in the same notation, variables in declared order.
pub fn commutative(p: &CommutativePoly, vars: &[String]) -> String {
    let mut out = String::new();
    let mut terms: Vec<(&Vec<usize>, &Rat)> = p.terms.iter().collect();
    // graded, then lexicographically larger exponent vectors first (x before y)
    terms.sort_by(|a, b| {
        let da: usize = a.0.iter().sum();
        let db: usize = b.0.iter().sum();
        da.cmp(&db).then(b.0.cmp(a.0))
    });
    for (e, c) in terms {
        let m = e.iter().any(|k| *k > 0).then(|| {
            compact(e.iter().copied().enumerate().filter(|(_, k)| *k > 0), vars)
        });
        push_term(&mut out, c, m);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
