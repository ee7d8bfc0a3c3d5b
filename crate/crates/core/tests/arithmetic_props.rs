use proptest::prelude::*;
use sylow_d4_core::cyclotomic::{gauss_quadratic, CycInt};
use sylow_d4_core::ffield::{Field, Fq};

fn cyc(p: u32) -> impl Strategy<Value = CycInt> {
    prop::collection::vec(-50i128..50, p as usize - 1).prop_map(move |c| CycInt::from_coeffs(p, c))
}

proptest! {
    #[test]
    fn ring_laws(x in cyc(5), y in cyc(5), z in cyc(5)) {
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(
            x.mul(&y.add(&z).unwrap()).unwrap(),
            x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
        );
    }

    #[test]
    fn conjugation_is_a_ring_automorphism(x in cyc(7), y in cyc(7)) {
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!(x.mul(&y).unwrap().conj(), x.conj().mul(&y.conj()).unwrap());
    }

    #[test]
    fn complex_embedding_is_multiplicative(x in cyc(3), y in cyc(3)) {
        let (a, b) = x.to_complex();
        let (c, d) = y.to_complex();
        let (e, f) = x.mul(&y).unwrap().to_complex();
        prop_assert!((e - (a * c - b * d)).abs() < 1e-6);
        prop_assert!((f - (a * d + b * c)).abs() < 1e-6);
    }

    #[test]
    fn field_laws_in_f9(a in 0u16..9, b in 0u16..9, c in 0u16..9) {
        let f = Field::new(3, 2, None).unwrap();
        let (a, b, c) = (Fq(a), Fq(b), Fq(c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % 3);
        prop_assert_eq!(f.trace(f.pow(a, 3)), f.trace(a));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Fq::ONE);
        }
    }
}

#[test]
fn gauss_sums_have_norm_q() {
    for (p, a) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
        let f = Field::new(p, a, None).unwrap();
        for c in f.units() {
            let g = gauss_quadratic(&f, c);
            assert_eq!(g.mul(&g.conj()).unwrap(), CycInt::from_int(p, f.q() as i128));
        }
    }
}
