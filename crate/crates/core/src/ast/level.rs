use std::fmt;

use super::Rewb;

/// Position of an expression in the iterated-binding hierarchy.
///
/// `f_level` is the least `i` with the expression in `F_i`, `e_level` the
/// least `j >= 1` with the expression in `E_j`. Since
/// `F_{j-1} ⊆ E_j ⊆ F_j`, always `f_level <= e_level <= f_level + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Level {
    pub f_level: usize,
    pub e_level: usize,
}

impl Level {
    /// The outermost layer is a binding layer: the expression sits in
    /// `E_i` for `i = f_level`.
    pub fn is_e_shaped(&self) -> bool {
        self.e_level == self.f_level
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F-level: {}  E-level: {}", self.f_level, self.e_level)
    }
}

const INF: usize = usize::MAX;

/// Computes the level bottom-up.
///
/// For every node two candidate values are formed: `fr`, the F-level the
/// node reaches through an F-production (union, concatenation, star), and
/// `er`, the E-level it reaches through an E-production (union,
/// concatenation, binding). Then `f_level = min(fr, er)` and
/// `e_level = min(er, fr + 1)`.
pub fn classify(e: &Rewb) -> Level {
    let (fr, er) = match e {
        Rewb::Eps | Rewb::Atom(_) | Rewb::Test(..) => (0, INF),
        Rewb::Union(l, r) | Rewb::Concat(l, r) => {
            let (l, r) = (classify(l), classify(r));
            (l.f_level.max(r.f_level), l.e_level.max(r.e_level))
        }
        Rewb::Star(b) => (classify(b).f_level, INF),
        Rewb::Bind(_, _, b) => (INF, classify(b).e_level),
    };
    Level { f_level: fr.min(er), e_level: er.min(fr.saturating_add(1)) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_expr;

    fn lv(s: &str) -> (usize, usize) {
        let l = classify(&parse_expr(s).unwrap());
        (l.f_level, l.e_level)
    }

    #[test]
    fn binding_free_is_level_zero() {
        assert_eq!(lv("a.b*"), (0, 1));
        assert_eq!(lv("eps"), (0, 1));
    }

    #[test]
    fn witness_expressions() {
        assert_eq!(lv("(a1@x1(b1[x1=]))*"), (1, 2));
        assert_eq!(lv("(a2@x2((a1@x1(b1[x1=]))*.b2[x2=]))*"), (2, 3));
    }

    #[test]
    fn single_binding() {
        assert_eq!(lv("a@x(b[x=])"), (1, 1));
        assert_eq!(lv("a@x(b[x=]).c*"), (1, 1));
    }

    #[test]
    fn binding_over_star_over_binding() {
        assert_eq!(lv("a@x((b@y(c[y=]))*)"), (2, 2));
        assert_eq!(lv("(a@x(b[x=]))*.c@y(d)"), (1, 2));
    }
}
