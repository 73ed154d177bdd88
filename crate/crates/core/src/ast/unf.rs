use super::Rewb;

/// Union Normal Form: returns `u_1, ..., u_r` whose union is language-equal
/// to `e` and where no `u_j` has a union outside a Kleene star.
///
/// Binding and concatenation distribute over union, so unions are pushed to
/// the top through every `+`, `.` and `@` node. Stars are the leaves of the
/// distribution and keep their bodies intact. In an `E_i` expression every
/// star sits inside an `F_{i-1}` block, so each part is in the union-free
/// grammar `U_i ::= F_{i-1} | U_i . U_i | a@x(U_i)`.
///
/// The number of parts can be exponential in the size of `e` (one per
/// choice of union branch); no cap is applied.
pub fn to_unf(e: &Rewb) -> Vec<Rewb> {
    match e {
        Rewb::Eps | Rewb::Atom(_) | Rewb::Test(..) | Rewb::Star(_) => vec![e.clone()],
        Rewb::Union(l, r) => {
            let mut out = to_unf(l);
            out.extend(to_unf(r));
            out
        }
        Rewb::Concat(l, r) => {
            let right = to_unf(r);
            to_unf(l)
                .into_iter()
                .flat_map(|u| right.iter().map(move |v| u.clone().concat(v.clone())))
                .collect()
        }
        Rewb::Bind(a, x, b) => {
            to_unf(b).into_iter().map(|u| Rewb::Bind(a.clone(), x.clone(), Box::new(u))).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_expr, print_expr};

    fn unf(s: &str) -> Vec<String> {
        to_unf(&parse_expr(s).unwrap()).iter().map(print_expr).collect()
    }

    #[test]
    fn top_level_union_splits() {
        assert_eq!(unf("a+b"), vec!["a", "b"]);
    }

    #[test]
    fn binding_distributes() {
        assert_eq!(unf("a@x(b[x=]+c[x=])"), vec!["a@x(b[x=])", "a@x(c[x=])"]);
    }

    #[test]
    fn star_is_a_leaf() {
        assert_eq!(unf("(a+b)*"), vec!["(a+b)*"]);
    }

    #[test]
    fn concatenation_distributes() {
        assert_eq!(unf("(a+b).(c+d)"), vec!["a.c", "a.d", "b.c", "b.d"]);
    }
}
