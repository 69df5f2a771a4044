//! Necessary conditions on the quotient matrix of an equitable 2-partition.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::QuotientMatrix;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Rule {
    /// Row sums agree and both off-diagonal entries are positive.
    A,
    /// `(b+c)/gcd(b,c)` is a power of two.
    B,
    /// `a - c ≥ -n/3` when `b ≠ c`.
    C,
    /// On the correlation-immunity bound, 3 divides `b/g` or `c/g`.
    Div3,
    /// The smaller cell, read as an orthogonal array, meets the
    /// Bierbrauer–Friedman bound.
    Bf,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::A => "A",
            Rule::B => "B",
            Rule::C => "C",
            Rule::Div3 => "DIV3",
            Rule::Bf => "BF",
        };
        f.write_str(s)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RuleVerdict {
    pub rule: Rule,
    /// False when the rule does not apply to this matrix.
    pub applicable: bool,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ScreenVerdict {
    pub matrix: QuotientMatrix,
    pub passed: bool,
    pub reasons: Vec<RuleVerdict>,
}

impl ScreenVerdict {
    pub fn failed_rules(&self) -> Vec<Rule> {
        self.reasons.iter().filter(|r| !r.passed).map(|r| r.rule).collect()
    }
}

fn verdict(rule: Rule, passed: bool, detail: String) -> RuleVerdict {
    RuleVerdict { rule, applicable: true, passed, detail }
}

fn not_applicable(rule: Rule, detail: &str) -> RuleVerdict {
    RuleVerdict { rule, applicable: false, passed: true, detail: detail.to_string() }
}

/// Rules (a), (b) and (c).
pub fn check_conditions_abc(m: &QuotientMatrix) -> [RuleVerdict; 3] {
    let QuotientMatrix { a, b, c, d } = *m;
    let rule_a = verdict(
        Rule::A,
        a + b == c + d && b > 0 && c > 0,
        format!("row sums {} and {}, b = {b}, c = {c}", a + b, c + d),
    );
    let rule_b = if b == 0 || c == 0 {
        verdict(Rule::B, false, "b or c is zero".into())
    } else {
        let q = (b + c) / b.gcd(&c);
        verdict(Rule::B, q.is_power_of_two(), format!("(b+c)/gcd(b,c) = {q}"))
    };
    let rule_c = if b == c {
        not_applicable(Rule::C, "b = c")
    } else {
        let n = (a + b) as i64;
        let diff = a as i64 - c as i64;
        verdict(Rule::C, 3 * diff >= -n, format!("a - c = {diff}, -n/3 = {}", Ratio::new(-n, 3)))
    };
    [rule_a, rule_b, rule_c]
}

/// `b ≠ c`, `3 | n` and `a - c = -n/3`.
pub fn attains_ci_bound(m: &QuotientMatrix) -> bool {
    let n = m.a + m.b;
    m.b != m.c && m.a + m.b == m.c + m.d && n.is_multiple_of(3) && 3 * (m.c as i64 - m.a as i64) == n as i64
}

/// Either `b/gcd(b,c)` or `c/gcd(b,c)` is divisible by 3.
pub fn divisibility_condition(m: &QuotientMatrix) -> Result<bool> {
    if !attains_ci_bound(m) {
        return Err(Error::Precondition(format!("{m} does not attain the correlation-immunity bound")));
    }
    let g = m.b.gcd(&m.c);
    Ok((m.b / g).is_multiple_of(3) || (m.c / g).is_multiple_of(3))
}

/// Right-hand side of `N ≥ q^n (1 - (q-1)n / (q(t+1)))`.
pub fn bierbrauer_min_n(n: u32, q: u32, t: u32) -> Result<Ratio<i128>> {
    if q < 2 || t >= n {
        return Err(Error::InvalidParameters(format!("need q ≥ 2 and t < n, got n={n} q={q} t={t}")));
    }
    let qn = (q as i128)
        .checked_pow(n)
        .ok_or_else(|| Error::InvalidParameters("q^n overflows".into()))?;
    let frac = Ratio::new((q as i128 - 1) * n as i128, q as i128 * (t as i128 + 1));
    Ok(Ratio::from_integer(qn) * (Ratio::from_integer(1) - frac))
}

/// All rules combined; the matrix is reported with `b ≥ c`.
pub fn screen(m: &QuotientMatrix) -> ScreenVerdict {
    let m = m.normalized();
    let mut reasons: Vec<RuleVerdict> = check_conditions_abc(&m).into();
    let well_formed = reasons[0].passed;

    reasons.push(if well_formed && attains_ci_bound(&m) {
        let ok = divisibility_condition(&m).expect("bound attained");
        let g = m.b.gcd(&m.c);
        verdict(Rule::Div3, ok, format!("b/g = {}, c/g = {}", m.b / g, m.c / g))
    } else {
        not_applicable(Rule::Div3, "correlation-immunity bound not attained")
    });

    // The associated function has spectrum at weight (b+c)/2 only, so the
    // smaller cell is an orthogonal array of strength (b+c)/2 - 1.
    let n = m.a + m.b;
    reasons.push(if well_formed && (m.b + m.c).is_multiple_of(2) && (m.b + m.c) / 2 <= n {
        let t = (m.b + m.c) / 2 - 1;
        match (bierbrauer_min_n(n, 2, t), m.first_cell_size()) {
            (Ok(bound), Some(size)) => verdict(
                Rule::Bf,
                Ratio::from_integer(size as i128) >= bound,
                format!("N = {size}, t = {t}, bound = {bound}"),
            ),
            _ => not_applicable(Rule::Bf, "cell size or strength undefined"),
        }
    } else {
        not_applicable(Rule::Bf, "b + c odd")
    });

    let passed = reasons.iter().all(|r| r.passed);
    ScreenVerdict { matrix: m, passed, reasons }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(a: u32, b: u32, c: u32, d: u32) -> QuotientMatrix {
        QuotientMatrix { a, b, c, d }
    }

    #[test]
    fn abc_examples() {
        assert!(check_conditions_abc(&qm(3, 9, 7, 5)).iter().all(|r| r.passed));
        assert!(check_conditions_abc(&qm(1, 11, 5, 7)).iter().all(|r| r.passed));
        let r = check_conditions_abc(&qm(1, 5, 2, 4));
        assert!(!r[1].passed);
        assert!(check_conditions_abc(&qm(1, 2, 2, 1))[1].passed);
    }

    #[test]
    fn bound_and_divisibility() {
        assert!(attains_ci_bound(&qm(0, 12, 4, 8)));
        assert!(!attains_ci_bound(&qm(3, 8, 8, 3)));
        assert!(!attains_ci_bound(&qm(0, 13, 3, 10)));
        assert!(!divisibility_condition(&qm(1, 11, 5, 7)).unwrap());
        assert!(!divisibility_condition(&qm(5, 19, 13, 11)).unwrap());
        assert!(divisibility_condition(&qm(3, 9, 7, 5)).unwrap());
        assert!(divisibility_condition(&qm(3, 8, 8, 3)).is_err());
    }

    #[test]
    fn bierbrauer_values() {
        assert_eq!(bierbrauer_min_n(12, 2, 7).unwrap(), Ratio::from_integer(1024));
        assert_eq!(bierbrauer_min_n(13, 2, 7).unwrap(), Ratio::from_integer(1536));
        assert_eq!(bierbrauer_min_n(6, 2, 3).unwrap(), Ratio::from_integer(16));
        assert!(bierbrauer_min_n(6, 1, 3).is_err());
        assert!(bierbrauer_min_n(6, 2, 6).is_err());
    }

    #[test]
    fn screen_examples() {
        for m in [qm(2, 22, 10, 14), qm(5, 19, 13, 11), qm(1, 11, 5, 7)] {
            assert_eq!(screen(&m).failed_rules(), vec![Rule::Div3], "{m}");
        }
        for m in [qm(1, 23, 9, 15), qm(3, 21, 11, 13), qm(7, 17, 15, 9), qm(0, 3, 1, 2)] {
            assert!(screen(&m).passed, "{m}");
        }
    }

    #[test]
    fn screen_normalizes() {
        let v = screen(&qm(5, 7, 11, 1));
        assert_eq!(v.matrix, qm(1, 11, 7, 5));
    }

    #[test]
    fn div3_scale_invariant() {
        for m in [qm(1, 11, 5, 7), qm(3, 9, 7, 5), qm(0, 3, 1, 2), qm(5, 19, 13, 11)] {
            let base = divisibility_condition(&m).unwrap();
            for t in 1..6 {
                assert_eq!(divisibility_condition(&m.scaled(t)).unwrap(), base);
            }
        }
    }
}
