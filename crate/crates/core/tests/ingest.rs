use healthgraph::ingest::{emit_facts, parse_facts, Fact, FactBase, Term};
use proptest::prelude::*;

fn symbol() -> impl Strategy<Value = String> {
    "[a-zA-Z][a-zA-Z0-9_]{0,10}"
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![any::<i64>().prop_map(Term::Int), symbol().prop_map(Term::Sym)];
    leaf.prop_recursive(3, 16, 4, |inner| {
        (symbol(), prop::collection::vec(inner, 1..4)).prop_map(|(name, args)| Term::Compound(name, args))
    })
}

fn fact() -> impl Strategy<Value = Fact> {
    let known = prop_oneof![
        (symbol(), -3i64..3, 0i64..2).prop_map(|(i, v, t)| Fact::new("obsInd", [Term::Sym(i), Term::Int(v), Term::Int(t)])),
        (0i64..8, 0i64..8, 0i64..24, 0i64..100).prop_map(|(x, y, t, p)| Fact::new("in", [x, y, t, p])),
        (symbol(), 0i64..24).prop_map(|(a, t)| Fact::new("action_observed", [Term::Sym(a), Term::Int(t)])),
        (0i64..8, 0i64..8, 0i64..24).prop_map(|(x, y, t)| Fact::new(
            "at",
            [Term::Compound("loc".into(), vec![Term::Int(x), Term::Int(y)]), Term::Int(t)]
        )),
    ];
    let arbitrary = (symbol(), prop::collection::vec(term(), 0..5)).prop_map(|(p, args)| Fact::new(p, args));
    prop_oneof![known, arbitrary]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn emitted_facts_parse_back(facts in prop::collection::vec(fact(), 0..40)) {
        let mut base = FactBase::new();
        base.extend(facts);
        let text = emit_facts(&base);
        let back = parse_facts(&text).unwrap();
        prop_assert_eq!(back.facts(), base.facts());
        prop_assert_eq!(emit_facts(&back), text);
    }

    /// Comments and blank space between statements are ignored.
    #[test]
    fn trivia_is_ignored(facts in prop::collection::vec(fact(), 1..10), gap in "[ \t\n]{0,3}(% [a-z ]{0,10}\n)?[ \t\n]{0,3}") {
        let mut base = FactBase::new();
        base.extend(facts);
        let spaced: String = base.iter().map(|f| format!("{gap}{f}{gap}")).collect();
        let back = parse_facts(&spaced).unwrap();
        prop_assert_eq!(back.facts(), base.facts());
    }
}

#[test]
fn extreme_integers_round_trip() {
    for value in [i64::MIN, i64::MAX, 0, -1] {
        let mut base = FactBase::new();
        base.insert(Fact::new("count_infl", [Term::sym("x"), Term::Int(value), Term::Int(value)]));
        assert_eq!(parse_facts(&emit_facts(&base)).unwrap().facts(), base.facts());
    }
}
