mod common;

use common::*;
use expoly::constants::{rational_ratio, transcendence_degree};
use expoly::lattice::{hnf, hnf_with_transform, IntMatrix};
use expoly::ritt::{divides, ritt_factor};
use expoly::unitcheck::{solution_vector, split_by_subset, vanishing_subsums, UnitVector};
use expoly::{Const, Context, ExpPoly};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pools(ctx: &mut Context) -> (Vec<Const>, Vec<Const>) {
    let t = ctx.declare("t");
    let u = ctx.declare("u");
    let pi = ctx.pi();
    let coefs = vec![Const::one(), t.clone(), &t + &u, &Const::one() / &u];
    let exps = vec![Const::one(), pi, t, Const::i()];
    (coefs, exps)
}

fn small_const(rng: &mut ChaCha8Rng, gens: &[Const]) -> Const {
    let g = &gens[rng.gen_range(0..gens.len())];
    &(&gauss(rng, 3) * g) + &gauss(rng, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constant_field_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ctx = Context::new();
        let gens = [ctx.declare("a"), ctx.declare("b"), ctx.pi(), Const::one()];
        let (a, b, c) = (small_const(&mut rng, &gens), small_const(&mut rng, &gens), small_const(&mut rng, &gens));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.checked_inv().unwrap()).is_one());
        }
    }

    #[test]
    fn exponential_is_a_homomorphism(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ctx = Context::new();
        let t = ctx.declare("t");
        let quarter_turn = &ctx.pi_i() * &Const::ratio(1, 2);
        let gens = [t.clone(), ctx.pi(), quarter_turn.clone(), Const::one()];
        let pick = |rng: &mut ChaCha8Rng| -> Const {
            (0..2).fold(Const::zero(), |acc, _| &acc + &(&gens[rng.gen_range(0..gens.len())] * &Const::from_int(rng.gen_range(-3..=3))))
        };
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        let ea = ctx.formal_exp(&a).unwrap();
        let eb = ctx.formal_exp(&b).unwrap();
        let eab = ctx.formal_exp(&(&a + &b)).unwrap();
        prop_assert_eq!(eab, &ea * &eb);
        // the kernel is exactly 2*pi*i*Z
        let same = ea == eb;
        let period = rational_ratio(&(&a - &b), &ctx.two_pi_i()).unwrap();
        prop_assert_eq!(same, period.is_some_and(|q| q.is_integer()));
    }

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ctx = Context::new();
        let (coefs, exps) = pools(&mut ctx);
        let f = random_poly(&mut rng, &coefs, &exps, 0, 4);
        let g = random_poly(&mut rng, &coefs, &exps, 0, 4);
        let h = random_poly(&mut rng, &coefs, &exps, 0, 3);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&(&f - &g) + &g, f);
    }

    #[test]
    fn transcendence_degree_is_monotone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ctx = Context::new();
        let gens = [ctx.declare("a"), ctx.declare("b"), ctx.declare("c"), ctx.pi()];
        let mut set: Vec<Const> = Vec::new();
        let mut last = 0;
        for _ in 0..4 {
            set.push(small_const(&mut rng, &gens));
            let td = transcendence_degree(&set);
            prop_assert!(td >= last && td <= gens.len());
            last = td;
        }
    }

    #[test]
    fn hnf_is_canonical(rows in prop::collection::vec(prop::collection::vec(-50i64..50, 3), 1..5), ops in prop::collection::vec((0usize..4, 0usize..4, -3i64..4), 0..6)) {
        let m = IntMatrix::from_i64(&rows);
        let h = hnf(&m);
        prop_assert_eq!(&hnf(&h), &h);
        let (u, h2) = hnf_with_transform(&m);
        prop_assert_eq!(u.mul(&m), h2);
        // elementary row operations do not change the row lattice
        let n = rows.len();
        let mut shuffled = rows.clone();
        for (i, j, k) in ops {
            let (i, j) = (i % n, j % n);
            if i != j {
                let add: Vec<i64> = shuffled[j].iter().map(|x| x * k).collect();
                for (x, a) in shuffled[i].iter_mut().zip(add) {
                    *x += a;
                }
            }
            shuffled.swap(i, j);
        }
        prop_assert_eq!(hnf(&IntMatrix::from_i64(&shuffled)), h);
    }

    #[test]
    fn split_recombines(seed in any::<u64>(), pick in any::<u32>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ctx = Context::new();
        let (coefs, exps) = pools(&mut ctx);
        let g = random_poly(&mut rng, &coefs, &exps, 2, 5);
        prop_assume!(g.len() >= 2);
        let n = g.len();
        let mask = 1 + pick % ((1u32 << n) - 2);
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let (g1, g2) = split_by_subset(&g, &subset).unwrap();
        prop_assert_eq!(g1.len(), subset.len());
        prop_assert_eq!(&g1 + &g2, g);
    }

    #[test]
    fn solution_vectors_are_multiplicative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ctx = Context::new();
        let (coefs, exps) = pools(&mut ctx);
        let f = random_poly(&mut rng, &coefs, &exps, 1, 3);
        prop_assume!(!f.is_zero());
        let s = ctx.declare("s");
        let s1 = &s * &Const::from_int(rng.gen_range(1..=3));
        let s2 = &(&s * &Const::from_int(rng.gen_range(1..=3))) + &Const::one();
        let w1 = solution_vector(&f, &s1, &mut ctx).unwrap();
        let w2 = solution_vector(&f, &s2, &mut ctx).unwrap();
        let w12 = solution_vector(&f, &(&s1 + &s2), &mut ctx).unwrap();
        for ((a, b), c) in w1.entries.iter().zip(&w2.entries).zip(&w12.entries) {
            prop_assert_eq!(&(a * b), c);
        }
    }

    #[test]
    fn division_recovers_the_cofactor(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ctx = Context::new();
        let (coefs, exps) = pools(&mut ctx);
        let g = random_poly(&mut rng, &coefs, &exps, 1, 3);
        let q = random_poly(&mut rng, &coefs, &exps, 1, 3);
        prop_assume!(!g.is_zero() && !q.is_zero());
        prop_assert_eq!(divides(&g, &(&g * &q), 6).unwrap(), Some(q));
    }

    #[test]
    fn factorization_multiplies_back(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = Context::new();
        let exps = [Const::one(), ctx.pi(), Const::ratio(1, 2)];
        let fs: Vec<ExpPoly> = (0..rng.gen_range(1..=3)).map(|_| random_poly(&mut rng, &[Const::one()], &exps, 1, 3)).collect();
        let f = product(&fs);
        prop_assume!(!f.is_zero());
        let r = ritt_factor(&f, 6, 6).unwrap();
        prop_assert_eq!(r.expand().unwrap(), f);
    }

    #[test]
    fn vanishing_subsums_are_minimal(values in prop::collection::vec((-2i64..3, 0usize..3), 2..9)) {
        let mut ctx = Context::new();
        let t = ctx.declare("t");
        let lambda: Vec<Const> = values.iter().map(|&(c, _)| Const::from_int(if c == 0 { 1 } else { c })).collect();
        let omega = UnitVector { entries: values.iter().map(|&(_, k)| t.pow(k as i64).unwrap()).collect(), is_solution: false };
        let sum = |idx: &[usize]| idx.iter().fold(Const::zero(), |acc, &i| &acc + &(&lambda[i] * &omega.entries[i]));
        let subsets = vanishing_subsums(&lambda, &omega).unwrap();
        for s in &subsets {
            prop_assert!(!s.is_empty() && s.len() < lambda.len());
            prop_assert!(sum(s).is_zero());
            // no proper nonempty part of a minimal subset vanishes
            for mask in 1..(1u32 << s.len()) - 1 {
                let part: Vec<usize> = (0..s.len()).filter(|k| mask & (1 << k) != 0).map(|k| s[k]).collect();
                prop_assert!(!sum(&part).is_zero());
            }
        }
    }
}
