use dmod::text::w;
use dmod::weyl::{Ctx, Weyl};
use dmod::Q;
use proptest::prelude::*;

/// Random operators in `D_n` of total degree at most `deg`.
pub fn weyl(n: usize, deg: u32, max_terms: usize) -> impl Strategy<Value = Weyl> {
    prop::collection::vec((-5i64..6, 1i64..4, prop::collection::vec(0u32..=deg, 2 * n)), 0..=max_terms).prop_map(
        move |ts| {
            let ctx = Ctx::std(n);
            let mut acc = Weyl::zero(&ctx);
            for (p, q, mut e) in ts {
                let mut total: u32 = e.iter().sum();
                for x in e.iter_mut() {
                    while total > deg && *x > 0 {
                        *x -= 1;
                        total -= 1;
                    }
                }
                acc = &acc + &Weyl::monomial(&ctx, Q::new(p.into(), q.into()), &e[..n], &e[n..]);
            }
            acc
        },
    )
}

pub fn nonzero(n: usize, deg: u32) -> impl Strategy<Value = Weyl> {
    weyl(n, deg, 3).prop_filter("nonzero", |p| !p.is_zero())
}

/// `x^k dx + c` with k <= 1, sometimes times `dx - a`.
pub fn small_ops() -> impl Strategy<Value = Weyl> {
    (0u32..2, -2i64..3, any::<bool>(), -1i64..2).prop_map(|(k, c, twice, a)| {
        let ctx = Ctx::std(1);
        let first = w(&ctx, &format!("x1^{k}*dx1 + ({c})"));
        if twice {
            &first * &w(&ctx, &format!("dx1 - ({a})"))
        } else {
            first
        }
    })
}
