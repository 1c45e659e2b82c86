use proptest::prelude::*;
use slowness::algebra::*;
use slowness::elastic::*;

fn ints(v: &[BigRational]) -> Vec<i64> {
    v.iter()
        .map(|x| {
            assert!(x.is_integer());
            i64::try_from(x.to_integer()).unwrap()
        })
        .collect()
}

const OLIVINE: [i64; 9] = [321, 68, 72, 197, 77, 234, 64, 77, 79];

#[test]
fn forward_two_dimensional_goldens() {
    let sp = forward(&StiffnessTensor::full2d([10, 2, 3, 12, 5, 20]), true);
    assert_eq!(sp.basis(), Basis::Canon2d);
    assert_eq!(ints(&sp.coeffs().unwrap()), [191, 88, 66, -30, 52, -16, 215, -32, 1]);
    let sp = forward(&StiffnessTensor::full2d([20, 39, -65, -16, -87, 30]), true);
    assert_eq!(ints(&sp.coeffs().unwrap()), [-3625, 1590, 7129, -50, 8866, 304, -8049, -14, 1]);
}

#[test]
fn forward_olivine_golden() {
    let sp = forward(&StiffnessTensor::orthorhombic(OLIVINE), true);
    assert_eq!(sp.basis(), Basis::Ortho3d);
    assert_eq!(
        ints(&sp.coeffs().unwrap()),
        [
            1952643, 5308889, 6230406, -56159, 4261967, 9884047, -94721, 5189310, -108883, 477, 996032, 3365543,
            -33227, 3517205, -73952, 340, 1153152, -37922, 375, -1
        ]
    );
}

#[test]
fn dehomogenized_curve_matches_expanded_form() {
    // 1 − 30x² + 191x⁴ − 16xy + 88x³y − 32y² + 66x²y² + 52xy³ + 215y⁴
    let sp = forward(&StiffnessTensor::full2d([10, 2, 3, 12, 5, 20]), false);
    assert!(!sp.is_homogeneous());
    let want = [
        ((0, 0), 1),
        ((2, 0), -30),
        ((4, 0), 191),
        ((1, 1), -16),
        ((3, 1), 88),
        ((0, 2), -32),
        ((2, 2), 66),
        ((1, 3), 52),
        ((0, 4), 215),
    ];
    let p = sp.poly();
    assert_eq!(p.num_terms(), want.len());
    for ((i, j), c) in want {
        assert_eq!(p.coeff(&Monomial::from_exps(&[i, j])), Some(&rat(c)));
    }
}

#[test]
fn coefficient_formula_examples() {
    let v = |names: &[&str], terms: &[(&[u16], i64)]| {
        MultiPoly::from_terms(var_names(names), terms.iter().map(|(e, c)| (Monomial::from_exps(e), rat(*c))))
    };
    let f2 = coefficient_formulas(SymmetryClass::Full2d).unwrap();
    assert_eq!(f2[&4], v(&FULL2D, &[(&[1, 0, 0, 0, 0, 0], -1), (&[0, 0, 0, 0, 0, 1], -1)]));
    assert_eq!(f2[&9], v(&FULL2D, &[(&[0; 6], 1)]));

    let fo = coefficient_formulas(SymmetryClass::Orthorhombic).unwrap();
    let unit = |i: usize| MultiPoly::var(var_names(&ORTHO), i, rat(1));
    assert_eq!(fo[&10], unit(0).add(&unit(7)).add(&unit(8)));
    // c7 = −b11b22 − b11b44 + b12² + 2b12b66 − b22b55 − b44b66 − b55b66
    let (b11, b12, b22, b44, b55, b66) = (unit(0), unit(1), unit(3), unit(6), unit(7), unit(8));
    let two = MultiPoly::constant(var_names(&ORTHO), rat(2));
    let c7 = b12
        .mul(&b12)
        .add(&two.mul(&b12).mul(&b66))
        .sub(&b11.mul(&b22))
        .sub(&b11.mul(&b44))
        .sub(&b22.mul(&b55))
        .sub(&b44.mul(&b66))
        .sub(&b55.mul(&b66));
    assert_eq!(fo[&7], c7);
    assert_eq!(fo[&20], MultiPoly::constant(var_names(&ORTHO), rat(-1)));

    let fm = coefficient_formulas(SymmetryClass::Monoclinic).unwrap();
    let m = |i: usize| MultiPoly::var(var_names(&MONO), i, rat(1));
    // MONO order: b11 b12 b13 b15 b22 b23 b25 b33 b35 b44 b46 b55 b66
    // The p1p3p0⁴ slot is the trace's p1p3 part: 2(b15 + b35 + b46).
    assert_eq!(fm[&20], m(3).add(&m(8)).add(&m(10)).scale(&rat(2)));
    let two = MultiPoly::constant(var_names(&MONO), rat(2));
    let c8 = two.mul(
        &m(2)
            .mul(&m(3))
            .sub(&m(0).mul(&m(8)))
            .sub(&m(0).mul(&m(10)))
            .sub(&m(3).mul(&m(12)))
            .sub(&m(8).mul(&m(12)))
            .sub(&m(10).mul(&m(11))),
    );
    assert_eq!(fm[&8], c8);
    assert_eq!(fm[&14], m(0).add(&m(11)).add(&m(12)));
    assert_eq!(fm[&26], m(4).add(&m(9)).add(&m(12)));
    assert_eq!(fm[&29], m(7).add(&m(9)).add(&m(11)));
    assert_eq!(fm[&30], MultiPoly::constant(var_names(&MONO), rat(-1)));

    assert!(matches!(coefficient_formulas(SymmetryClass::Isotropic), Err(ElasticError::Unsupported(_))));
}

#[test]
fn voigt_expansion_examples() {
    let t = StiffnessTensor::full2d([1, 2, 3, 4, 5, 6]);
    let a = t.voigt_expand();
    let idx = |i: usize, j: usize, k: usize, l: usize| (((i - 1) * 2 + j - 1) * 2 + k - 1) * 2 + l - 1;
    for (i, j, k, l) in [(1, 1, 1, 2), (1, 1, 2, 1), (1, 2, 1, 1), (2, 1, 1, 1)] {
        assert_eq!(a[idx(i, j, k, l)], rat(3));
    }
    assert_eq!(a[idx(1, 2, 1, 2)], rat(6));
    assert_eq!(a[idx(2, 2, 1, 2)], rat(5));

    let iso = StiffnessTensor::isotropic(2, rat(4), rat(1)).unwrap();
    let a = iso.voigt_expand();
    assert_eq!(a[idx(1, 1, 1, 1)], rat(4));
    assert_eq!(a[idx(2, 2, 2, 2)], rat(4));
    assert_eq!(a[idx(1, 1, 2, 2)], rat(2));
    assert_eq!(a[idx(1, 2, 1, 2)], rat(1));
    assert_eq!(a[idx(1, 1, 1, 2)], rat(0));

    let mut vals = [0i64; 13];
    vals[10] = 7; // b46
    let t = StiffnessTensor::monoclinic(vals);
    let a = t.voigt_expand();
    let idx3 = |i: usize, j: usize, k: usize, l: usize| (((i - 1) * 3 + j - 1) * 3 + k - 1) * 3 + l - 1;
    for (i, j, k, l) in [(2, 3, 1, 2), (3, 2, 1, 2), (2, 3, 2, 1), (1, 2, 2, 3), (2, 1, 3, 2)] {
        assert_eq!(a[idx3(i, j, k, l)], rat(7));
    }
    assert_eq!(a.iter().filter(|x| **x != rat(0)).count(), 8);
}

#[test]
fn voigt_expansion_has_tensor_symmetries() {
    let t = StiffnessTensor::from_ints(3, SymmetryClass::Triclinic3d, &(1..=21).collect::<Vec<_>>()).unwrap();
    let a = t.voigt_expand();
    let at = |i: usize, j: usize, k: usize, l: usize| &a[((i * 3 + j) * 3 + k) * 3 + l];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    assert_eq!(at(i, j, k, l), at(j, i, k, l));
                    assert_eq!(at(i, j, k, l), at(k, l, i, j));
                }
            }
        }
    }
    let distinct: std::collections::BTreeSet<_> = a.iter().cloned().collect();
    assert_eq!(distinct.len(), 21);
    assert_eq!(SymmetryClass::Full2d.param_names().len(), 6);
    assert_eq!(SymmetryClass::Triclinic3d.param_names().len(), 21);
}

#[test]
fn christoffel_examples() {
    let t = StiffnessTensor::full2d([10, 2, 3, 12, 5, 20]);
    let g = christoffel(&t);
    assert!(g.is_symmetric());
    let v = var_names(&["p1", "p2"]);
    let want = MultiPoly::from_terms(
        v,
        [
            (Monomial::from_exps(&[2, 0]), rat(10)),
            (Monomial::from_exps(&[1, 1]), rat(6)),
            (Monomial::from_exps(&[0, 2]), rat(20)),
        ],
    );
    assert_eq!(g.entry(0, 0), &want);

    let g = christoffel(&StiffnessTensor::orthorhombic(OLIVINE));
    let e12 = g.entry(0, 1);
    assert_eq!(e12.num_terms(), 1);
    assert_eq!(e12.coeff(&Monomial::from_exps(&[1, 1, 0])), Some(&rat(68 + 79)));

    // Isotropic: Γ(p) has eigenvalues cP²|p|² and cS²|p|², so
    // det(Γ − λ) = (4|p|² − λ)(|p|² − λ) at p = (1, 2).
    let g = christoffel(&StiffnessTensor::isotropic(2, rat(4), rat(1)).unwrap());
    let pt = [rat(1), rat(2)];
    let m: Vec<Vec<BigRational>> = (0..2).map(|i| (0..2).map(|j| g.entry(i, j).eval(&pt).unwrap()).collect()).collect();
    let tr = &m[0][0] + &m[1][1];
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    assert_eq!(tr, rat(25));
    assert_eq!(det, rat(100));
}

#[test]
fn isotropic_forward_factors() {
    for dim in [2usize, 3] {
        for (cp, cs) in [(4, 1), (9, 2), (3, 5)] {
            let t = StiffnessTensor::isotropic(dim, rat(cp), rat(cs)).unwrap();
            let p = forward(&t, false).poly();
            let v = p.vars().clone();
            let mut norm = MultiPoly::zero(v.clone());
            for i in 0..dim {
                let x = MultiPoly::var(v.clone(), i, rat(1));
                norm = norm.add(&x.mul(&x));
            }
            let one = MultiPoly::constant(v.clone(), rat(1));
            let fp = norm.scale(&rat(cp)).sub(&one);
            let fs = norm.scale(&rat(cs)).sub(&one);
            let mut want = fp;
            for _ in 1..dim {
                want = want.mul(&fs);
            }
            assert_eq!(p, want, "dim {dim}, ({cp}, {cs})");
        }
    }
    // The isotropic (4, 1) image used elsewhere.
    let sp = forward(&StiffnessTensor::isotropic(2, rat(4), rat(1)).unwrap(), true);
    assert_eq!(ints(&sp.coeffs().unwrap()), [4, 0, 8, -5, 0, 0, 4, -5, 1]);
}

#[test]
fn positivity_examples() {
    let r = positivity(&StiffnessTensor::orthorhombic(OLIVINE));
    assert!(r.is_positive);
    assert_eq!(r.cayley_region, Some(CayleyRegion::InsideTetrahedron));
    let (x, y, z) = r.cayley_point.unwrap();
    assert!((x - 68.0 / (321.0f64 * 197.0).sqrt()).abs() < 1e-15);
    assert!(1.0 + 2.0 * x * y * z - x * x - y * y - z * z > 0.0);

    let mut comp = OLIVINE;
    comp[2] = -226;
    comp[4] = -205;
    let r = positivity(&StiffnessTensor::orthorhombic(comp));
    assert!(!r.is_positive);
    let (idx, val) = r.failing_minor.unwrap();
    assert_eq!(idx, vec![0, 1, 2]);
    // 321·197·234 + 2·68·(−226)(−205) − 321·205² − 197·226² − 234·68²
    assert_eq!(val, rat(321 * 197 * 234 + 2 * 68 * 226 * 205 - 321 * 205 * 205 - 197 * 226 * 226 - 234 * 68 * 68));
    assert!(val < rat(0));
    assert_eq!(r.cayley_region, Some(CayleyRegion::Outside));

    // Zero off-diagonal terms put the point at the origin.
    let r = positivity(&StiffnessTensor::orthorhombic([1, 0, 0, 1, 0, 1, 1, 1, 1]));
    assert_eq!(r.cayley_point, Some((0.0, 0.0, 0.0)));
    assert_eq!(r.cayley_region, Some(CayleyRegion::InsideTetrahedron));
    // x = 1 exactly lies on the boundary.
    let r = positivity(&StiffnessTensor::orthorhombic([1, 1, 0, 1, 0, 1, 1, 1, 1]));
    assert_eq!(r.cayley_region, Some(CayleyRegion::Boundary));

    assert!(matches!(cayley(&StiffnessTensor::full2d([1, 0, 0, 1, 0, 1])), Err(ElasticError::Unsupported(_))));
}

#[test]
fn tensor_json() {
    let t = StiffnessTensor::full2d([10, 2, 3, 12, 5, 20]);
    let j = t.to_json();
    assert_eq!(j["voigt"]["b11"], "10/1");
    assert_eq!(StiffnessTensor::from_json(&j).unwrap(), t);
    let bad = [
        serde_json::json!({"dim": 2, "class": "full2d", "voigt": {"b11": "1"}}),
        serde_json::json!({"dim": 3, "class": "full2d", "voigt": {}}),
        serde_json::json!({"dim": 2, "class": "cubic", "voigt": {}}),
        serde_json::json!({"dim": 2, "class": "isotropic", "voigt": {"cp2": "4", "cs2": "1", "b11": "1"}}),
        serde_json::json!({"dim": 2, "class": "isotropic", "voigt": {"cp2": "4", "cs2": "1"}, "rho": 1}),
        serde_json::json!({"dim": 2, "class": "isotropic", "voigt": {"cp2": "4", "cs2": "x"}}),
    ];
    for b in bad {
        assert!(StiffnessTensor::from_json(&b).is_err(), "{b}");
    }
    let iso = serde_json::json!({"dim": 3, "class": "isotropic", "voigt": {"cp2": "4", "cs2": "1/2"}});
    let t = StiffnessTensor::from_json(&iso).unwrap();
    assert_eq!(t.param("cs2"), Some(&rat_frac(1, 2)));
}

#[test]
fn slowness_json() {
    for t in [StiffnessTensor::full2d([10, 2, 3, 12, 5, 20]), StiffnessTensor::orthorhombic(OLIVINE)] {
        for h in [true, false] {
            let sp = forward(&t, h);
            let j = sp.to_json();
            assert_eq!(SlownessPoly::from_json(&j).unwrap(), sp);
        }
    }
    let tri = StiffnessTensor::from_ints(3, SymmetryClass::Triclinic3d, &(1..=21).collect::<Vec<_>>()).unwrap();
    let sp = forward(&tri, false);
    assert_eq!(sp.basis(), Basis::Generic);
    assert!(sp.coeffs().is_none());
    assert_eq!(SlownessPoly::from_json(&sp.to_json()).unwrap(), sp);
    let bad = serde_json::json!({"dim": 2, "basis": "canon2d", "coeffs": ["1", "2"]});
    assert!(SlownessPoly::from_json(&bad).is_err());
}

fn full2d_strategy() -> impl Strategy<Value = [i64; 6]> {
    prop::array::uniform6(-50i64..50)
}

fn oracle_2d(b: [i64; 6]) -> [i64; 9] {
    let [b11, b12, b13, b22, b23, b33] = b;
    [
        b11 * b33 - b13 * b13,
        2 * (b11 * b23 - b12 * b13),
        b11 * b22 - b12 * b12 - 2 * b12 * b33 + 2 * b13 * b23,
        -(b11 + b33),
        2 * (-b12 * b23 + b13 * b22),
        -2 * (b13 + b23),
        b22 * b33 - b23 * b23,
        -(b22 + b33),
        1,
    ]
}

proptest! {
    #[test]
    fn forward_satisfies_reconstruction_relations(b in full2d_strategy()) {
        let sp = forward(&StiffnessTensor::full2d(b), true);
        prop_assert_eq!(ints(&sp.coeffs().unwrap()), oracle_2d(b).to_vec());
        let formulas = coefficient_formulas(SymmetryClass::Full2d).unwrap();
        let pt: Vec<BigRational> = b.iter().map(|&x| rat(x)).collect();
        for (slot, c) in sp.coeffs().unwrap().iter().enumerate() {
            prop_assert_eq!(&formulas[&(slot + 1)].eval(&pt).unwrap(), c);
        }
    }

    #[test]
    fn homogenized_form_is_even_in_p0(vals in prop::array::uniform13(-20i64..20)) {
        let sp = forward(&StiffnessTensor::monoclinic(vals), true);
        let h = sp.homogenized();
        prop_assert!(h.is_homogeneous());
        prop_assert_eq!(h.degree(), 6);
        prop_assert!(h.terms().all(|(m, _)| m.exps()[0] % 2 == 0));
        prop_assert_eq!(h.coeff(&Monomial::from_exps(&[6, 0, 0, 0])), Some(&rat(-1)));
        let formulas = coefficient_formulas(SymmetryClass::Monoclinic).unwrap();
        let pt: Vec<BigRational> = vals.iter().map(|&x| rat(x)).collect();
        for (slot, c) in sp.coeffs().unwrap().iter().enumerate() {
            prop_assert_eq!(&formulas[&(slot + 1)].eval(&pt).unwrap(), c);
        }
    }

    #[test]
    fn positive_tensors_give_positive_christoffel(
        diag in prop::array::uniform3(50i64..100),
        off in prop::array::uniform3(-10i64..10),
        shear in prop::array::uniform3(20i64..60),
        pts in prop::collection::vec(prop::array::uniform3(-5i64..5), 100),
    ) {
        let t = StiffnessTensor::orthorhombic([diag[0], off[0], off[1], diag[1], off[2], diag[2], shear[0], shear[1], shear[2]]);
        prop_assume!(positivity(&t).is_positive);
        let g = christoffel(&t);
        for p in pts {
            if p == [0, 0, 0] {
                continue;
            }
            let pt: Vec<BigRational> = p.iter().map(|&x| rat(x)).collect();
            let m: Vec<Vec<BigRational>> = (0..3).map(|i| (0..3).map(|j| g.entry(i, j).eval(&pt).unwrap()).collect()).collect();
            for minor in leading_minors(&m) {
                prop_assert!(minor > rat(0));
            }
        }
    }
}
