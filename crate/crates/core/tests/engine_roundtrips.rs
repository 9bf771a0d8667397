//! Seeded roundtrip suites for the reconstruction engine and the
//! inhomogeneous system, exercising the identities on randomized corpora.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use blowup_core::coeff::{Coefficient, Mode};
use blowup_core::corpus::{random_closed_one_form, random_germ};
use blowup_core::engine::*;
use blowup_core::multiindex::MultiIndex;
use blowup_core::series::{s_vars, Series};

#[test]
fn hypocomplex_roundtrip_seeded() {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    for _ in 0..30 {
        for m in 1..=3usize {
            let deg = 1 + (m as u32 % 3) + 2;
            let h = random_germ(&mut rng, m, deg, 8);
            let d = h.truncation();
            let f = pullback(&h, d).unwrap();
            assert!(verify_solution(&f).unwrap().all_zero());
            let back = hypocomplex_reconstruct(&f).unwrap();
            assert_eq!(back, h);
        }
    }
}

#[test]
fn reconstruct_then_pullback_reproduces_truncated_solutions() {
    // build a truncated solution from arbitrary b_k data via the closed
    // form, reconstruct, and pull back; all stored degrees must agree
    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    let d = 6u32;
    for _ in 0..10 {
        let m = 2usize;
        let mut bs = Vec::new();
        for k in 0..=d {
            // random polynomial in s of degree <= D - k
            let germ = random_germ(&mut rng, m, (d - k).max(1).min(3), 4);
            // project the germ onto s-variables: take the z-free part
            let zfree = germ.extract_layer("z", 0).unwrap();
            let bk = Series::from_terms(
                s_vars(m),
                d - k,
                Mode::Exact,
                zfree
                    .terms()
                    .filter(|(idx, _)| idx.total_degree() <= d - k)
                    .map(|(idx, c)| (idx.clone(), c.clone())),
            )
            .unwrap();
            bs.push(bk);
        }
        let b = BSequence::new(bs, m, d).unwrap();
        let f = {
            // assemble sum z^k a_k from the closed form
            let mut terms = Vec::new();
            for k in 0..=d {
                let ak = b.expected_layer(k).unwrap();
                for (idx, c) in ak.terms() {
                    let mut e = vec![k, 0];
                    e.extend(idx.exponents());
                    terms.push((MultiIndex::new(e), c.clone()));
                }
            }
            Series::from_terms(blowup_core::series::chart_vars(m), d, Mode::Exact, terms)
                .unwrap()
        };
        let layers = LayerDecomposition::of(&f).unwrap();
        let b_re = reconstruct_b(&layers).unwrap();
        assert_eq!(&b_re, &b);
        let h = assemble_germ(&b_re).unwrap();
        let f_re = pullback(&h, d).unwrap();
        assert_eq!(f_re, f);
    }
}

#[test]
fn inhomogeneous_identity_seeded() {
    let mut rng = ChaCha8Rng::seed_from_u64(3003);
    for _ in 0..20 {
        for m in 1..=3usize {
            let deg = 1 + (rng.clone().get_stream() as u32 % 2);
            let v = random_closed_one_form(&mut rng, m, deg);
            let needed = 2 * v.max_degree() + 1;
            let d = needed + 1;
            let f = inhomogeneous_solve(&v, d).unwrap();
            let recovered = recover_inhomogeneity(&f).unwrap();
            assert_eq!(recovered.m(), v.m());
            for (a, b) in recovered.components().iter().zip(v.components()) {
                // align declared truncations: both windows hold every term
                let t = a.truncation().min(b.truncation());
                assert!(t >= b.max_total_degree());
                assert_eq!(a.truncated(t), b.truncated(t));
            }
        }
    }
}

#[test]
fn general_solution_is_canonical_plus_pullback() {
    // adding any pullback to an inhomogeneous solution solves the same
    // system
    let mut rng = ChaCha8Rng::seed_from_u64(4004);
    for _ in 0..10 {
        let m = 2usize;
        let v = random_closed_one_form(&mut rng, m, 1);
        let d = 2 * v.max_degree() + 3;
        let f = inhomogeneous_solve(&v, d).unwrap();
        let h = random_germ(&mut rng, m, 1, 4);
        let p = pullback(&h, d).unwrap();
        let g = f.add(&p).unwrap();
        let recovered = recover_inhomogeneity(&g).unwrap();
        for (a, b) in recovered.components().iter().zip(v.components()) {
            let t = a.truncation().min(b.truncation());
            assert!(t >= b.max_total_degree());
            assert_eq!(a.truncated(t), b.truncated(t));
        }
    }
}

#[test]
fn certificate_monotone_approach() {
    // truncations of 1/(1 - s/rho): M equals 1/rho at every depth, so the
    // approach over D in {8, 12, 16} is (weakly) monotone and lands within
    // 20 percent
    for (rho_num, rho_den) in [(2i64, 1i64), (1, 2)] {
        let target = rho_den as f64 / rho_num as f64;
        let mut last = 0.0;
        for d in [8u32, 12, 16] {
            let mut terms = Vec::new();
            for k in 0..=d {
                // coefficient rho^{-k}
                let num = rho_den.pow(k);
                let den = rho_num.pow(k);
                terms.push((
                    MultiIndex::new(vec![k]),
                    Coefficient::from_ratio(Mode::Exact, num, den),
                ));
            }
            let g = Series::from_terms(s_vars(1), d, Mode::Exact, terms).unwrap();
            let cert = analyticity_certificate(&g).unwrap();
            assert!(cert.m >= last - 1e-12, "M not monotone at D = {d}");
            last = cert.m;
            if d == 16 {
                assert!(
                    (cert.m - target).abs() <= 0.2 * target,
                    "M = {} vs 1/rho = {target}",
                    cert.m
                );
            }
        }
    }
}
