use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sylow_d4_core::ffield::{Field, Fq};
use sylow_d4_core::group::{m_coordinates_zero, GraphAuto, Group, UElement};

fn random_elem(rng: &mut ChaCha8Rng, q: u32) -> UElement {
    let mut x = UElement::IDENTITY;
    for t in x.0.iter_mut() {
        *t = Fq(rng.gen_range(0..q) as u16);
    }
    x
}

fn fields() -> Vec<Field> {
    [(2, 1), (3, 1), (2, 2), (5, 1)].iter().map(|&(p, a)| Field::new(p, a, None).unwrap()).collect()
}

#[test]
fn associativity_on_random_triples() {
    for f in fields() {
        let g = Group::new(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(f.q() as u64);
        for _ in 0..10_000 {
            let (x, y, z) =
                (random_elem(&mut rng, f.q()), random_elem(&mut rng, f.q()), random_elem(&mut rng, f.q()));
            assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)), "q = {}", f.q());
        }
    }
}

#[test]
fn inverses_and_root_conjugation() {
    for f in fields() {
        let g = Group::new(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(100 + f.q() as u64);
        for _ in 0..2_000 {
            let x = random_elem(&mut rng, f.q());
            assert!(g.mul(&x, &g.inv(&x)).is_identity());
            let i = rng.gen_range(1..=12);
            let s = Fq(rng.gen_range(0..f.q()) as u16);
            let h = g.root_elem(i, s).unwrap();
            assert_eq!(g.conj_by_root(&x, i, s), g.conj(&x, &h));
        }
    }
}

#[test]
fn graph_automorphisms_are_homomorphisms() {
    for f in fields() {
        let g = Group::new(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(200 + f.q() as u64);
        for a in GraphAuto::all() {
            for _ in 0..1_000 {
                let (x, y) = (random_elem(&mut rng, f.q()), random_elem(&mut rng, f.q()));
                assert_eq!(
                    g.apply_auto(&a, &g.mul(&x, &y)),
                    g.mul(&g.apply_auto(&a, &x), &g.apply_auto(&a, &y)),
                    "{} at q = {}",
                    a.name(),
                    f.q()
                );
            }
        }
    }
}

#[test]
fn tau_has_order_three() {
    let t = GraphAuto::tau();
    assert_eq!(t.compose(&t).compose(&t), GraphAuto::identity());
    assert_eq!(t.compose(&t), GraphAuto::tau2());
}

// Conjugation by every root element maps each M_i into itself; together
// the root elements generate U, so M_i is normal.
#[test]
fn normal_series_at_q2_exhaustive() {
    let f = Field::prime(2).unwrap();
    let g = Group::new(&f);
    for i in 1..=13 {
        let free: Vec<usize> =
            (1..=12).filter(|j| !m_coordinates_zero(i).contains(&(*j as u8))).collect();
        for n in 0..(1usize << free.len()) {
            let mut m = UElement::IDENTITY;
            for (b, &j) in free.iter().enumerate() {
                m.set(j, Fq(((n >> b) & 1) as u16));
            }
            assert!(m.in_m(i));
            for k in 1..=12 {
                assert!(g.conj_by_root(&m, k, Fq::ONE).in_m(i), "M_{i} not normal");
            }
        }
    }
}

#[test]
fn parse_and_format_round_trip() {
    let f = Field::new(2, 2, None).unwrap();
    let g = Group::new(&f);
    let x = g.parse("x3(1)*x8(2)").unwrap();
    assert_eq!(x.t(3), Fq(1));
    assert_eq!(x.t(8), Fq(2));
    assert_eq!(g.parse(&g.format(&x)).unwrap(), x);
    assert!(g.parse("x13(1)").is_err());
    assert!(g.parse("x1(4)").is_err());
}
