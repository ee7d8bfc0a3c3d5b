use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sylow_d4_core::characters::enumerate_chars;
use sylow_d4_core::classes::enumerate_class_reps;
use sylow_d4_core::ffield::Field;
use sylow_d4_core::oracle::{certify_characters, certify_classes, construction, Oracle};
use sylow_d4_core::table::{CharTable, OrthMode};

#[test]
fn q2_is_certified() {
    let f = Field::prime(2).unwrap();
    let classes = enumerate_class_reps(&f).unwrap();
    assert!(certify_classes(&f, &classes).unwrap().is_empty());
    let chars = enumerate_chars(&f).unwrap();
    let cert = certify_characters(&f, &classes, &chars).unwrap();
    assert_eq!(cert.mismatch_count, 0, "{:#?}", cert.mismatches);
    assert!(cert.reducible.is_empty());
    let t = CharTable::build(f, true).unwrap();
    assert!(t.orthogonality(OrthMode::Full).unwrap().ok());
}

// q = 4 is past the exhaustive range; compare the formulas with induced
// characters for a few labels of every family on a sample of classes.
#[test]
fn q4_sampled_against_induction() {
    let f = Field::new(2, 2, None).unwrap();
    let classes = enumerate_class_reps(&f).unwrap();
    let chars = enumerate_chars(&f).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut reps: Vec<usize> = (0..classes.reps.len()).collect();
    reps.shuffle(&mut rng);
    reps.truncate(80);
    // the identity and the t3 != 0 classes carry most of the structure
    reps.extend(0..classes.offsets[1]);
    let mut oracle = Oracle::new(&f);
    for fam in 0..chars.families.len() {
        let (lo, hi) = (chars.offsets[fam], chars.offsets[fam + 1]);
        for i in [lo, (lo + hi) / 2, hi - 1] {
            let c = construction(&f, &chars, i);
            oracle.check_inducing(&c.inducing, 2_000, i as u64).unwrap();
            for &j in &reps {
                let x = &classes.reps[j].rep;
                let want = oracle.value(&c, x).unwrap();
                let got = chars.value_expr_at(&f, i, x).unwrap().evaluate(&f);
                assert_eq!(
                    got,
                    want,
                    "{} at {}",
                    chars.label(&chars.labels[i]),
                    classes.label(&classes.reps[j])
                );
            }
        }
    }
}
