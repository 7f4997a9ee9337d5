//! Cross-module oracle tests: long exact sequences relating hocolim,
//! gamma and holim, Kuenneth checks for the tensor product, and
//! independent recomputations of derived limits.

use num_bigint::BigInt;

use gamma_core::diagram::DiagramOfComplexes;
use gamma_core::field::Field;
use gamma_core::homology::{homology, homology_at, mapping_cone};
use gamma_core::limits::{homotopy_groups_diagram, lim0_compatible_tuples, limp};
use gamma_core::matrix::IntegerMatrix;
use gamma_core::nerve::{relative_chains_of_pair, tensor_product, ChainComplex, ChainMap};
use gamma_core::poset::generate;
use gamma_core::random::{random_diagram, RandomSpec};
use gamma_core::spectral::e2_check;
use gamma_core::subquotient::{exact_at, SubquotientMap};
use gamma_core::total::{gamma_total_complex, hocolim_total, holim_total};

// chain map matching basis elements by label; absent labels go to zero
fn map_by_labels(src: &ChainComplex, dst: &ChainComplex) -> ChainMap {
    ChainMap::new(src.clone(), dst.clone(), &|n| {
        let mut m = IntegerMatrix::zero(dst.rank(n), src.rank(n));
        for (j, label) in src.basis(n).iter().enumerate() {
            if let Some(i) = dst.basis(n).iter().position(|l| l == label) {
                m.set(i, j, BigInt::from(1));
            }
        }
        m
    })
    .expect("label inclusion commutes with the differentials")
}

fn small_spec() -> RandomSpec {
    RandomSpec {
        pieces: 2,
        degree_range: (0, 1),
        max_torsion: 5,
        conjugate: false,
    }
}

#[test]
fn gamma_is_cone_of_ideal_inclusion() {
    // H(Gamma) must agree with the cone over hocolim(D) -> hocolim(C),
    // and the quotient triple must induce a long exact sequence
    for spec in ["simplex:1", "cube:2"] {
        let pair = generate(spec).unwrap();
        let p = pair.ambient().clone();
        for seed in 0..10 {
            let d = random_diagram(&p, seed, &small_spec()).unwrap();
            let over_c = hocolim_total(&d, &vec![true; p.len()]).unwrap();
            let over_d = hocolim_total(&d, pair.ideal_mask()).unwrap();
            let gamma = gamma_total_complex(&d, &pair).unwrap();
            let incl = map_by_labels(over_d.complex(), over_c.complex());
            let cone = mapping_cone(&incl).unwrap();
            let h_cone = homology(&cone).unwrap();
            let h_gamma = homology(gamma.complex()).unwrap();
            assert!(h_cone.isomorphic(&h_gamma), "{spec} seed {seed}");
        }
    }
}

#[test]
fn hocolim_gamma_long_exact_sequence() {
    let pair = generate("cube:2").unwrap();
    let p = pair.ambient().clone();
    for seed in 0..10 {
        let d = random_diagram(&p, seed, &small_spec()).unwrap();
        let over_c = hocolim_total(&d, &vec![true; p.len()]).unwrap();
        let over_d = hocolim_total(&d, pair.ideal_mask()).unwrap();
        let gamma = gamma_total_complex(&d, &pair).unwrap();
        let incl = map_by_labels(over_d.complex(), over_c.complex());
        let proj = map_by_labels(over_c.complex(), gamma.complex());
        // exactness of H(D-part) -> H(C-part) -> H(Gamma) in the middle
        for n in gamma.complex().lo() - 1..=gamma.complex().hi() + 1 {
            let g1 = SubquotientMap::new(
                incl.component(n),
                homology_at(over_d.complex(), n).unwrap(),
                homology_at(over_c.complex(), n).unwrap(),
            )
            .unwrap();
            let g2 = SubquotientMap::new(
                proj.component(n),
                homology_at(over_c.complex(), n).unwrap(),
                homology_at(gamma.complex(), n).unwrap(),
            )
            .unwrap();
            assert!(exact_at(&g1, &g2).unwrap(), "seed {seed} degree {n}");
        }
    }
}

#[test]
fn conjugation_invariance_of_all_pipelines() {
    let pair = generate("cube:2").unwrap();
    let p = pair.ambient().clone();
    for seed in 0..5 {
        let plain = random_diagram(&p, seed, &small_spec()).unwrap();
        let twisted = random_diagram(
            &p,
            seed,
            &RandomSpec {
                conjugate: true,
                ..small_spec()
            },
        )
        .unwrap();
        let h1 = homology(holim_total(&plain).unwrap().complex()).unwrap();
        let h2 = homology(holim_total(&twisted).unwrap().complex()).unwrap();
        assert!(h1.isomorphic(&h2), "holim seed {seed}");
        let g1 = homology(gamma_total_complex(&plain, &pair).unwrap().complex()).unwrap();
        let g2 = homology(gamma_total_complex(&twisted, &pair).unwrap().complex()).unwrap();
        assert!(g1.isomorphic(&g2), "gamma seed {seed}");
    }
}

#[test]
fn lim0_oracle_on_homology_diagrams() {
    let pair = generate("cube:1").unwrap();
    let p = pair.ambient().clone();
    for seed in 0..15 {
        let x = random_diagram(&p, seed, &RandomSpec::default()).unwrap();
        let (qlo, qhi) = x.degree_window();
        for q in qlo..=qhi {
            let d = homotopy_groups_diagram(&x, q).unwrap();
            let via_complex = limp(&d, 0).unwrap().group;
            let via_tuples = lim0_compatible_tuples(&d).unwrap();
            assert!(
                via_complex.isomorphic(&via_tuples),
                "seed {seed} degree {q}: {} vs {}",
                via_complex,
                via_tuples
            );
        }
    }
}

#[test]
fn e2_over_odd_primes() {
    let pair = generate("simplex:1").unwrap();
    let p = pair.ambient().clone();
    for seed in 0..10 {
        let d = random_diagram(&p, seed, &RandomSpec::default()).unwrap();
        for field in [Field::prime(3), Field::prime(5)] {
            assert!(e2_check(&d, &field).unwrap().all_match, "seed {seed}");
        }
    }
}

#[test]
fn tensor_kuenneth_oracle() {
    // circle x circle = torus: H_0 = Z, H_1 = Z^2, H_2 = Z
    let pair = generate("cube:2-boundary").unwrap();
    let circle = relative_chains_of_pair(&generate("simplex:1").unwrap()).unwrap();
    let h_c = homology(&circle).unwrap();
    assert_eq!(h_c.nonzero_degrees(), vec![1]);
    let nerve_circle =
        gamma_core::nerve::order_complex_chains(pair.ambient(), false).unwrap();
    let torus = tensor_product(&nerve_circle, &nerve_circle).unwrap();
    let h = homology(&torus).unwrap();
    assert_eq!(h.group(0).structure(), (1, vec![]));
    assert_eq!(h.group(1).structure(), (2, vec![]));
    assert_eq!(h.group(2).structure(), (1, vec![]));
    // torsion Kuenneth: (Z/2 in degree 0) ⊗ (Z/3 in degree 0) = 0,
    // (Z/2) ⊗ (Z/2) = Z/2 + Tor term in degree 1
    let mod_k = |k: i64| {
        ChainComplex::new(
            0,
            vec![vec!["x".into()], vec!["y".into()]],
            vec![
                IntegerMatrix::zero(0, 1),
                IntegerMatrix::from_rows_i64(&[&[k]]),
            ],
        )
        .unwrap()
    };
    let h23 = homology(&tensor_product(&mod_k(2), &mod_k(3)).unwrap()).unwrap();
    assert!(h23.is_trivial());
    let h22 = homology(&tensor_product(&mod_k(2), &mod_k(2)).unwrap()).unwrap();
    assert_eq!(h22.group(0).structure(), (0, vec![BigInt::from(2)]));
    assert_eq!(h22.group(1).structure(), (0, vec![BigInt::from(2)]));
}

#[test]
fn holim_respects_quasi_isomorphic_replacement_of_values() {
    // Z/2 modelled two ways: minimal (Z -2-> Z) and with an extra
    // contractible summand; holim homology must agree
    let pair = generate("simplex:1").unwrap();
    let p = pair.ambient().clone();
    let minimal = ChainComplex::new(
        0,
        vec![vec!["x".into()], vec!["y".into()]],
        vec![
            IntegerMatrix::zero(0, 1),
            IntegerMatrix::from_rows_i64(&[&[2]]),
        ],
    )
    .unwrap();
    let padded = ChainComplex::new(
        0,
        vec![
            vec!["x".into(), "u".into()],
            vec!["y".into(), "v".into()],
        ],
        vec![
            IntegerMatrix::zero(0, 2),
            IntegerMatrix::from_rows_i64(&[&[2, 0], &[0, 1]]),
        ],
    )
    .unwrap();
    let d1 = DiagramOfComplexes::constant(p.clone(), minimal).unwrap();
    let d2 = DiagramOfComplexes::constant(p.clone(), padded).unwrap();
    let h1 = homology(holim_total(&d1).unwrap().complex()).unwrap();
    let h2 = homology(holim_total(&d2).unwrap().complex()).unwrap();
    assert!(h1.isomorphic(&h2));
}
