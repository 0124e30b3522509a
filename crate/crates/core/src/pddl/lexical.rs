//! Token-level classification of PDDL atoms.

/// `letter (letter | digit | '-' | '_')*`, ASCII only.
pub fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

/// `?` followed by a name.
pub fn is_variable(s: &str) -> bool {
    s.strip_prefix('?').is_some_and(is_name)
}

/// Optionally signed decimal: `-?digits(.digits)?`.
pub fn is_number(s: &str) -> bool {
    let unsigned = s.strip_prefix('-').unwrap_or(s);
    let (int, frac) = match unsigned.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (unsigned, None),
    };
    let digits = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
    digits(int) && frac.is_none_or(digits)
}

/// Requirement flags known to PDDL 3.1.
pub const REQUIREMENTS: &[&str] = &[
    ":strips",
    ":typing",
    ":negative-preconditions",
    ":disjunctive-preconditions",
    ":equality",
    ":existential-preconditions",
    ":universal-preconditions",
    ":quantified-preconditions",
    ":conditional-effects",
    ":fluents",
    ":numeric-fluents",
    ":object-fluents",
    ":adl",
    ":durative-actions",
    ":duration-inequalities",
    ":continuous-effects",
    ":derived-predicates",
    ":timed-initial-literals",
    ":preferences",
    ":constraints",
    ":action-costs",
];

pub fn is_requirement(s: &str) -> bool {
    REQUIREMENTS.iter().any(|r| r.eq_ignore_ascii_case(s))
}

/// Words with a fixed meaning inside formulas; never predicate names.
pub const RESERVED: &[&str] = &[
    "and",
    "or",
    "not",
    "imply",
    "exists",
    "forall",
    "when",
    "either",
    "preference",
    "increase",
    "decrease",
    "assign",
    "scale-up",
    "scale-down",
    "define",
    "domain",
    "problem",
    "always",
    "sometime",
    "within",
    "at-most-once",
    "sometime-after",
    "sometime-before",
    "always-within",
    "hold-during",
    "hold-after",
    "minimize",
    "maximize",
    "is-violated",
];

pub fn is_reserved(s: &str) -> bool {
    RESERVED.iter().any(|r| r.eq_ignore_ascii_case(s))
}

/// A name usable for a predicate, function, action or object.
pub fn is_identifier(s: &str) -> bool {
    is_name(s) && !is_reserved(s)
}

pub fn eq_ci(a: &str, b: &str) -> bool {
    a.eq_ignore_ascii_case(b)
}
