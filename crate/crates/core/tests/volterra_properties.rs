mod common;

use circle_norms::volterra::{sup_norm_01, volterra_apply, volterra_iterate, Func1D};
use circle_norms::{Poly, C64};
use common::{poly, rel_err, rng};
use proptest::prelude::*;
use rand::Rng;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn grid_samples(f: &Func1D) -> &[C64] {
    match f {
        Func1D::Grid(s) => s,
        Func1D::Poly(_) => panic!("expected a grid"),
    }
}

#[test]
fn factorial_decay_on_poly_backend() {
    let one = Func1D::constant(1.0);
    for n in 1..=18 {
        let it = volterra_iterate(&one, n).unwrap().func;
        let expected = 1.0 / factorial(n);
        assert!(rel_err(it.eval(1.0).re, expected) <= 1e-12, "n = {n}");
        assert!(rel_err(sup_norm_01(&it), expected) <= 1e-12, "n = {n}");
        // monotone nonnegative integrand: the sup sits at the right end
        assert_eq!(sup_norm_01(&it), it.eval(1.0).norm());
    }
}

#[test]
fn iterate_at_one_is_ordered_simplex_volume() {
    let samples = 1_000_000;
    let mut r = rng(31);
    for n in 2..=4usize {
        let inside = (0..samples)
            .filter(|_| {
                let x: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
                x.windows(2).all(|w| w[0] <= w[1])
            })
            .count();
        let p_hat = inside as f64 / samples as f64;
        let se = (p_hat * (1.0 - p_hat) / samples as f64).sqrt();
        let value = volterra_iterate(&Func1D::constant(1.0), n).unwrap().func.eval(1.0).re;
        assert!((value - p_hat).abs() <= 4.0 * se, "n = {n}: {value} vs {p_hat} ± {se}");
    }
}

#[test]
fn trapezoid_error_is_second_order() {
    // degree-10 Taylor polynomial of cos
    let mut c = vec![0.0; 11];
    let mut term = 1.0;
    for (k, ck) in c.iter_mut().enumerate() {
        if k > 0 {
            term /= k as f64;
        }
        *ck = match k % 4 {
            0 => term,
            2 => -term,
            _ => 0.0,
        };
    }
    let f = Func1D::poly(Poly::from_real(&c));
    let exact = volterra_apply(&f);
    let error = |n: usize| {
        let t = volterra_apply(&f.to_grid(n).unwrap());
        grid_samples(&t)
            .iter()
            .enumerate()
            .map(|(i, v)| (v - exact.eval(i as f64 / n as f64)).norm())
            .fold(0.0, f64::max)
    };
    for n in [32, 64, 128, 256] {
        let ratio = error(n) / error(2 * n);
        assert!((3.5..=4.5).contains(&ratio), "N = {n}: ratio {ratio}");
    }
}

#[test]
fn nonnegative_input_gives_nondecreasing_output() {
    let mut r = rng(32);
    for _ in 0..50 {
        let n = r.random_range(2..200);
        let s: Vec<C64> = (0..n).map(|_| C64::new(r.random::<f64>(), 0.0)).collect();
        let t = volterra_apply(&Func1D::grid(s).unwrap());
        let out = grid_samples(&t);
        assert_eq!(out[0], C64::new(0.0, 0.0));
        assert!(out.windows(2).all(|w| w[1].re >= w[0].re && w[1].im == 0.0));
    }
}

fn complex_poly(max_degree: usize) -> impl Strategy<Value = Poly> {
    poly(max_degree)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linear_on_poly_backend(p in complex_poly(12), q in complex_poly(12), a in common::complex()) {
        let (f, g) = (Func1D::poly(p), Func1D::poly(q));
        let lhs = volterra_apply(&Func1D::linear_combination(a, &f, &g).unwrap());
        let rhs = Func1D::linear_combination(a, &volterra_apply(&f), &volterra_apply(&g)).unwrap();
        let scale = a.norm() * sup_norm_01(&f) + sup_norm_01(&g);
        for k in 0..=16 {
            let x = k as f64 / 16.0;
            prop_assert!((lhs.eval(x) - rhs.eval(x)).norm() <= 1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn linear_on_grid_backend(p in complex_poly(8), q in complex_poly(8), a in common::complex()) {
        let f = Func1D::poly(p).to_grid(256).unwrap();
        let g = Func1D::poly(q).to_grid(256).unwrap();
        let lhs = volterra_apply(&Func1D::linear_combination(a, &f, &g).unwrap());
        let rhs = Func1D::linear_combination(a, &volterra_apply(&f), &volterra_apply(&g)).unwrap();
        let scale = a.norm() * sup_norm_01(&f) + sup_norm_01(&g);
        for (u, v) in grid_samples(&lhs).iter().zip(grid_samples(&rhs)) {
            prop_assert!((u - v).norm() <= 1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn contraction(p in complex_poly(12)) {
        let f = Func1D::poly(p);
        let tf = volterra_apply(&f);
        prop_assert!(sup_norm_01(&tf) <= sup_norm_01(&f) * (1.0 + 1e-9));
    }

    #[test]
    fn iterates_obey_factorial_bound(p in complex_poly(10), n in 1usize..=8) {
        let f = Func1D::poly(p);
        let it = volterra_iterate(&f, n).unwrap().func;
        prop_assert!(sup_norm_01(&it) <= sup_norm_01(&f) / factorial(n) * (1.0 + 1e-9));
    }
}
