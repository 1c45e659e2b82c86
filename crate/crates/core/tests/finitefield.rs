use slowness::finitefield::*;

// Independent F_p polynomial helpers (lowest degree first).
fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    fp_trim(r)
}

fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = fp_trim(a.to_vec());
    let dm = m.len() - 1;
    let inv = (1..p).find(|i| i * m[dm] % p == 1).unwrap();
    while r.len() > dm {
        let k = r.len() - 1;
        let c = r[k] * inv % p;
        for i in 0..=dm {
            r[k - dm + i] = (r[k - dm + i] + p * p - c * m[i]) % p;
        }
        r = fp_trim(r);
    }
    r
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (fp_trim(a.to_vec()), fp_trim(b.to_vec()));
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn x_pow_pk(k: u32, m: &[u64], p: u64) -> Vec<u64> {
    // x^(p^k) by k rounds of p-th powering via repeated multiplication.
    let mut h = fp_rem(&[0, 1], m, p);
    for _ in 0..k {
        let mut acc = vec![1];
        for _ in 0..p {
            acc = fp_rem(&fp_mul(&acc, &h, p), m, p);
        }
        h = acc;
    }
    h
}

fn check_modulus(p: u64, d: u32) {
    let ctx = fq_build(p, d as usize).unwrap();
    let m = ctx.modulus().to_vec();
    assert_eq!(m.len(), d as usize + 1);
    assert_eq!(m[d as usize], 1);
    let x = fp_rem(&[0, 1], &m, p);
    assert_eq!(x_pow_pk(d, &m, p), x, "x^(p^d) must equal x");
    for k in 1..d {
        let h = x_pow_pk(k, &m, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = fp_gcd(&diff, &m, p);
        assert_eq!(g.len(), 1, "gcd(x^(p^{k}) − x, m) must be constant");
    }
}

#[test]
fn fq_build_gives_verified_moduli() {
    let ctx = fq_build(2, 2).unwrap();
    assert_eq!(ctx.modulus(), &[1, 1, 1]);
    check_modulus(7, 4);
    check_modulus(5, 6);
    check_modulus(3, 5);
}

#[test]
fn fq_build_rejects_composites() {
    assert!(matches!(fq_build(9, 2), Err(FieldError::NotPrime(9))));
    assert!(fq_build(1, 1).is_err());
}

#[test]
fn field_axioms_small_extension() {
    let k = fq_build(3, 3).unwrap();
    let q = k.order();
    for a in 0..q {
        assert_eq!(k.add(a, k.neg(a)), 0);
        if a != 0 {
            assert_eq!(k.mul(a, k.inv(a)), 1);
        }
        for b in 0..q {
            assert_eq!(k.add(a, b), k.add(b, a));
            assert_eq!(k.mul(a, b), k.mul(b, a));
            let c = (a * 7 + b) % q;
            assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
        }
    }
}

#[test]
fn table_and_polynomial_arithmetic_agree() {
    // F_{2^23} is above the table threshold and uses polynomial arithmetic.
    let big = fq_build(2, 23).unwrap();
    let a = 0x1234_5;
    let b = 0x7_6543;
    assert_eq!(big.mul(big.mul(a, b), big.inv(b)), a);
    assert_eq!(big.pow(a, big.order() - 1), 1);
    let small = fq_build(5, 6).unwrap();
    assert_eq!(small.pow(123, small.order() - 1), 1);
}

#[test]
fn uni_factor_examples() {
    let f5 = fq_build(5, 1).unwrap();
    let f = UniPoly::from_ints(&f5, &[1, 0, 1]);
    let fac = uni_factor(&f, 1).unwrap();
    let got: Vec<Vec<u64>> = fac.factors.iter().map(|(g, _)| g.coeffs().to_vec()).collect();
    assert_eq!(got, vec![vec![2, 1], vec![3, 1]]);
    assert!(!uni_is_irreducible(&f).unwrap());

    let f2 = fq_build(2, 1).unwrap();
    let g = UniPoly::from_ints(&f2, &[1, 1, 1]);
    assert!(uni_factor(&g, 1).unwrap().is_irreducible());
    assert!(uni_is_irreducible(&g).unwrap());

    let h = UniPoly::from_ints(&f2, &[0, 1, 0, 0, 1]);
    let fac = uni_factor(&h, 1).unwrap();
    let got: Vec<Vec<u64>> = fac.factors.iter().map(|(g, _)| g.coeffs().to_vec()).collect();
    assert_eq!(got, vec![vec![0, 1], vec![1, 1], vec![1, 1, 1]]);
    assert_eq!(fac.expand(), h);
    assert!(!uni_is_irreducible(&h).unwrap());
    assert!(uni_factor(&UniPoly::new(&f2, vec![]), 1).is_err());
}

#[test]
fn uni_factor_reexpands_with_multiplicities() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    for (p, d) in [(2, 1), (3, 2), (7, 1), (2, 3), (5, 2)] {
        let k = fq_build(p, d).unwrap();
        for _ in 0..40 {
            let mut f = UniPoly::new(&k, vec![k.random_nonzero(&mut rng)]);
            for _ in 0..rng.gen_range(1..4) {
                let n = rng.gen_range(1..4);
                let mut c: Vec<u64> = (0..n).map(|_| k.random(&mut rng)).collect();
                c.push(1);
                let g = UniPoly::new(&k, c);
                f = f.mul(&g.pow(rng.gen_range(1..4)));
            }
            let fac = uni_factor(&f, 9).unwrap();
            assert_eq!(fac.expand(), f);
            let total: usize = fac.degrees().iter().sum();
            assert_eq!(total as i64, f.degree());
            for (g, _) in &fac.factors {
                assert!(uni_is_irreducible(g).unwrap());
            }
        }
    }
}

#[test]
fn frobenius_root_count() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for (p, d) in [(7, 1), (3, 2), (7, 3), (2, 5)] {
        let k = fq_build(p, d).unwrap();
        let q = k.order();
        assert!(q <= 343);
        for _ in 0..20 {
            let mut c: Vec<u64> = (0..5).map(|_| k.random(&mut rng)).collect();
            c.push(1);
            let f = UniPoly::new(&k, c);
            let xq = f.x_pow_mod(q);
            let g = f.gcd(&xq.sub(&UniPoly::new(&k, vec![0, 1])));
            let roots = (0..q).filter(|&a| f.eval(&FqElement::new(&k, a)).code() == 0).count();
            assert_eq!(g.degree() as usize, roots);
        }
    }
}

#[test]
fn bivariate_examples() {
    let f7 = fq_build(7, 1).unwrap();
    // (x + y)(x − y) = x² − y²
    let f = BiPoly::from_int_terms(&f7, &[(2, 0, 1), (0, 2, -1)]);
    match bi_is_irreducible(&f).unwrap() {
        BiVerdict::Reducible(a, b) => {
            assert_eq!(a.mul(&b), f);
            let mut got = vec![a.terms(), b.terms()];
            got.sort();
            let minus = f7.from_int(-1);
            let mut want = vec![vec![(0, 1, 1), (1, 0, 1)], vec![(0, 1, minus), (1, 0, 1)]];
            for w in want.iter_mut() {
                w.sort();
            }
            for g in got.iter_mut() {
                g.sort();
            }
            // Factors are determined up to units; compare after scaling to
            // a leading x-coefficient of 1.
            let norm = |t: &Vec<(usize, usize, u64)>| {
                let lc = t.iter().find(|(i, _, _)| *i == 1).unwrap().2;
                let inv = f7.inv(lc);
                let mut v: Vec<_> = t.iter().map(|&(i, j, c)| (i, j, f7.mul(c, inv))).collect();
                v.sort();
                v
            };
            let mut got: Vec<_> = got.iter().map(norm).collect();
            got.sort();
            want.sort();
            assert_eq!(got, want);
        }
        other => panic!("expected reducible, got {other:?}"),
    }
    // (4(x²+y²) − 1)(x²+y² − 1)
    let g = BiPoly::from_int_terms(&f7, &[(2, 0, 4), (0, 2, 4), (0, 0, -1)])
        .mul(&BiPoly::from_int_terms(&f7, &[(2, 0, 1), (0, 2, 1), (0, 0, -1)]));
    assert!(matches!(bi_is_irreducible(&g).unwrap(), BiVerdict::Reducible(_, _)));
    // x² + y² + 1 over F_7 is irreducible (smooth conic).
    let c = BiPoly::from_int_terms(&f7, &[(2, 0, 1), (0, 2, 1), (0, 0, 1)]);
    assert_eq!(bi_is_irreducible(&c).unwrap(), BiVerdict::Irreducible);
    let constant = BiPoly::from_int_terms(&f7, &[(0, 0, 3)]);
    assert!(bi_is_irreducible(&constant).is_err());
}

#[test]
fn bivariate_factorization_multiplies_back() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
    for (p, d) in [(2, 1), (3, 1), (5, 1), (2, 2), (7, 2), (101, 1)] {
        let k = fq_build(p, d).unwrap();
        for _ in 0..25 {
            let mut f = BiPoly::from_code_terms(&k, &[(0, 0, 1)]);
            let mut count = 0;
            while f.degree() < 2 || count < 2 {
                let dg = rng.gen_range(1..4);
                let mut ts = Vec::new();
                for i in 0..=dg {
                    for j in 0..=(dg - i) {
                        ts.push((i, j, k.random(&mut rng)));
                    }
                }
                let g = BiPoly::from_code_terms(&k, &ts);
                if g.degree() >= 1 && f.degree() + g.degree() <= 8 {
                    f = f.mul(&g);
                    count += 1;
                } else if f.degree() >= 2 {
                    break;
                }
            }
            let fac = bi_factor(&f).unwrap().expect("decision completes");
            assert_eq!(fac.expand(), f);
            for (g, _) in &fac.factors {
                assert_eq!(bi_is_irreducible(g).unwrap(), BiVerdict::Irreducible);
            }
        }
    }
}

mod common {
    pub mod exhaustive;
}

#[test]
fn exhaustive_f2_degree_four() {
    let (checked, bad, inconclusive) = common::exhaustive::compare(2, 1, false);
    assert_eq!(checked, (1 << 15) - 2);
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(5)]);
    assert_eq!(inconclusive, 0);
}

#[test]
fn sampled_f3_degree_four() {
    let (checked, bad, inconclusive) = common::exhaustive::compare(
        3,
        std::env::var("F3_STRIDE").ok().and_then(|s| s.parse().ok()).unwrap_or(97),
        false,
    );
    assert!(checked > 100_000);
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(5)]);
    assert_eq!(inconclusive, 0);
}
