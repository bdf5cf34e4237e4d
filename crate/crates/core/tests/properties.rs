use bandlab::cayley::{distance, word_length, WordBall};
use bandlab::diagram::{area, boundary_word, fill, validate, Diagram};
use bandlab::extended::{abelian_image, e_from_lamp, e_from_word, e_inv, e_mul, e_to_lamp, EElement};
use bandlab::lamp::{eval_word, lamp_inv, lamp_mul, normal_word};
use bandlab::presented::{dinfty_certificate, g1_from_word, g1_inv, g1_is_identity, g1_mul, g1_to_lamp};
use bandlab::{GroupWord, LampElement, Letter};
use proptest::prelude::*;

fn letters(alphabet: &'static [Letter], max: usize) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec(prop::sample::select(alphabet), 0..=max).prop_map(GroupWord::new)
}

const AX: &[Letter] = &[Letter::A, Letter::X, Letter::XInv];
const AXT: &[Letter] = &[Letter::A, Letter::X, Letter::XInv, Letter::T, Letter::TInv];

fn lamp() -> impl Strategy<Value = LampElement> {
    (prop::collection::btree_set(-6i64..6, 0..5), -6i64..6).prop_map(|(l, s)| LampElement::new(l, s))
}

proptest! {
    #[test]
    fn eval_is_a_homomorphism(u in letters(AX, 20), v in letters(AX, 20)) {
        let uv = eval_word(&u.concat(&v)).unwrap();
        prop_assert_eq!(uv, lamp_mul(&eval_word(&u).unwrap(), &eval_word(&v).unwrap()));
        prop_assert_eq!(eval_word(&u.inverse()).unwrap(), lamp_inv(&eval_word(&u).unwrap()));
        prop_assert_eq!(eval_word(&u.free_reduce()).unwrap(), eval_word(&u).unwrap());
        prop_assert_eq!(eval_word(&u).unwrap().shift, u.x_exponent_sum());
    }

    #[test]
    fn lamp_group_laws(p in lamp(), q in lamp(), r in lamp()) {
        prop_assert_eq!(lamp_mul(&lamp_mul(&p, &q), &r), lamp_mul(&p, &lamp_mul(&q, &r)));
        prop_assert!(lamp_mul(&p, &lamp_inv(&p)).is_identity());
        prop_assert_eq!(eval_word(&normal_word(&p)).unwrap(), p.clone());
        let text: LampElement = p.to_string().parse().unwrap();
        prop_assert_eq!(text, p);
    }

    #[test]
    fn word_length_is_symmetric_and_subadditive(p in lamp(), q in lamp()) {
        prop_assert_eq!(word_length(&p), word_length(&lamp_inv(&p)));
        prop_assert!(word_length(&lamp_mul(&p, &q)) <= word_length(&p) + word_length(&q));
        prop_assert!(word_length(&p) <= normal_word(&p).len());
    }

    #[test]
    fn g1_maps_onto_l(u in letters(AX, 24), v in letters(AX, 24), n in 1u32..4) {
        let gu = g1_from_word(&u, n).unwrap();
        let gv = g1_from_word(&v, n).unwrap();
        prop_assert_eq!(g1_from_word(&u.concat(&v), n).unwrap(), g1_mul(&gu, &gv).unwrap());
        prop_assert!(g1_is_identity(&g1_mul(&gu, &g1_inv(&gu)).unwrap()));
        prop_assert_eq!(g1_to_lamp(&gu), eval_word(&u).unwrap());
        if g1_is_identity(&gu) {
            prop_assert!(eval_word(&u).unwrap().is_identity());
            prop_assert!(dinfty_certificate(&gu).is_none());
        }
    }

    #[test]
    fn relations_at_a_level_hold_above_it(u in letters(AX, 16), n in 1u32..4) {
        if g1_is_identity(&g1_from_word(&u, n).unwrap()) {
            prop_assert!(g1_is_identity(&g1_from_word(&u, n + 1).unwrap()));
        }
    }

    #[test]
    fn e_group_laws(u in letters(AXT, 16), v in letters(AXT, 16), w in letters(AXT, 8)) {
        let (eu, ev, ew) = (e_from_word(&u), e_from_word(&v), e_from_word(&w));
        prop_assert_eq!(e_from_word(&u.concat(&v)), e_mul(&eu, &ev));
        prop_assert_eq!(e_mul(&e_mul(&eu, &ev), &ew), e_mul(&eu, &e_mul(&ev, &ew)));
        prop_assert!(e_mul(&eu, &e_inv(&eu)).is_identity());
        prop_assert!(eu.nu.is_canonical());
        prop_assert_eq!(abelian_image(&eu), (u.x_exponent_sum(), u.t_exponent_sum()));
        let back: EElement = serde_json::from_str(&eu.to_json()).unwrap();
        prop_assert_eq!(back, eu);
    }

    #[test]
    fn lamp_embeds_in_e(u in letters(AX, 20)) {
        let p = eval_word(&u).unwrap();
        prop_assert_eq!(e_from_word(&u), e_from_lamp(&p));
        prop_assert_eq!(e_to_lamp(&e_from_lamp(&p)).unwrap(), p);
    }
}

/// `t⁻¹ g t` equals the image of `g` under `a ↦ x⁻¹axa`, `x ↦ x`, evaluated
/// in `L`, across a ball of radius 5.
#[test]
fn t_conjugation_is_the_monomorphism() {
    let t = e_from_word(&GroupWord::parse("t").unwrap());
    let image = GroupWord::parse("Xaxa").unwrap();
    for (g, _) in WordBall::new(5).elements() {
        let mut sub = GroupWord::empty();
        for l in normal_word(g).iter() {
            if l == Letter::A {
                sub = sub.concat(&image);
            } else {
                sub.push(l);
            }
        }
        let conj = e_mul(&e_inv(&t), &e_mul(&e_from_lamp(g), &t));
        assert_eq!(conj, e_from_lamp(&eval_word(&sub).unwrap()), "{g}");
    }
}

#[test]
fn ball_agrees_with_distance() {
    let ball = WordBall::new(4);
    for (g, d) in ball.elements() {
        assert_eq!(distance(&LampElement::identity(), g, 4), Some(d));
        assert_eq!(word_length(g), d);
    }
    let sizes: Vec<usize> = (0..5).map(|r| WordBall::new(r).len()).collect();
    assert!(sizes.windows(2).all(|w| w[0] < w[1]));
}

fn check_fill(d: &Diagram, w: &GroupWord, level: u32) {
    assert!(validate(d).is_empty(), "{w}: {:?}", validate(d));
    assert_eq!(boundary_word(d).unwrap(), w.free_reduce());
    assert!(g1_is_identity(&g1_from_word(w, level).unwrap()));
    let back = Diagram::from_json(&d.to_json()).unwrap();
    assert_eq!(&back, d);
    assert_eq!(area(&back), area(d));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn products_of_conjugates_fill(
        factors in prop::collection::vec((-3i64..=3, 0i64..2, any::<bool>()), 1..3),
    ) {
        let mut w = GroupWord::empty();
        for &(c, k, inv) in &factors {
            let r = bandlab::word::relator(k).unwrap();
            let r = if inv { r.inverse() } else { r };
            w = w.concat(&GroupWord::x_power(c)).concat(&r).concat(&GroupWord::x_power(-c));
        }
        let out = fill(&w, 2, factors.len()).unwrap();
        let d = out.diagram().expect("area bounded by the number of factors");
        check_fill(d, &w, 2);
        prop_assert!(area(d) <= factors.len());
    }

    #[test]
    fn found_diagrams_are_sound(u in letters(AX, 10)) {
        if let Some(d) = fill(&u, 2, 6).unwrap().diagram() {
            check_fill(d, &u, 2);
        }
    }
}
