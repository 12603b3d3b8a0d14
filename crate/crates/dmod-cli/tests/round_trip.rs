use dmod::homology::Presentation;
use dmod::weyl::{Ctx, FreeVector, Weyl};
use dmod::Q;
use dmod_cli::{parse, Localization, Module, ProblemFile};
use proptest::prelude::*;

fn op(ctx: &Ctx, terms: &[(i64, i64, Vec<u32>, Vec<u32>)]) -> Weyl {
    let mut w = Weyl::zero(ctx);
    for (p, q, x, d) in terms {
        w = &w + &Weyl::monomial(ctx, Q::new((*p).into(), (*q).into()), x, d);
    }
    w
}

fn terms(n: usize) -> impl Strategy<Value = Vec<(i64, i64, Vec<u32>, Vec<u32>)>> {
    prop::collection::vec(
        (-9i64..10, 1i64..5, prop::collection::vec(0u32..3, n), prop::collection::vec(0u32..3, n)),
        0..4,
    )
}

fn problem() -> impl Strategy<Value = ProblemFile> {
    (1usize..3, any::<bool>()).prop_flat_map(|(n, named)| {
        let ctx = if named { Ctx::custom(&["u", "v"][..n]) } else { Ctx::std(n) };
        let rels = prop::collection::vec(prop::collection::vec(terms(n), 1..3), 0..3);
        let betti = prop::collection::vec(prop::collection::vec(0u64..5, 1..5), 0..2);
        (Just(ctx), prop::collection::vec(rels, 1..3), betti, any::<bool>(), 0u32..9)
    })
    .prop_map(|(ctx, mods, betti, with_loc, a)| {
        let mut modules = Vec::new();
        for (k, rels) in mods.into_iter().enumerate() {
            let rank = rels.first().map_or(1, |r| r.len());
            let rows: Vec<FreeVector> = rels
                .iter()
                .filter(|r| r.len() == rank)
                .map(|r| FreeVector::new(&ctx, r.iter().map(|t| op(&ctx, t)).collect()))
                .collect();
            modules.push(Module { name: format!("M{k}"), presentation: Presentation::new(&ctx, rank, rows) });
        }
        let mut localizations = Vec::new();
        if with_loc {
            let f = &Weyl::x(&ctx, 0) + &Weyl::int(&ctx, 1);
            let presentation = Presentation::cyclic(&ctx, &[Weyl::d(&ctx, 0)]);
            localizations.push(Localization { module: "M0".into(), f, exponents: vec![a], presentation });
        }
        ProblemFile { ctx, modules, localizations, betti }
    })
}

proptest! {
    #[test]
    fn emit_then_parse(p in problem()) {
        let text = p.to_string();
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_string(), text);
    }
}
