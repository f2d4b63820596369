use causal_product::discrete::{
    convergence_study, double_product, h_discrete, kernel_estimate, linearized_product, midpoint,
    rotation_factor, ComplexMatrix, PairOrdering, SampleRegion,
};
use causal_product::kernel::{ker_w_minus_i, DEFAULT_TOL};
use causal_product::lattice::{enumerate_paths, essential_order, EssentialOrder};
use causal_product::{ComplexParam, Interval};
use num_complex::Complex64;
use proptest::prelude::*;

fn nu() -> ComplexParam {
    ComplexParam::new(1.0, 0.5).unwrap()
}

#[test]
fn disjoint_factors_commute() {
    let iv = Interval::unit();
    let n = 6;
    let pairs: Vec<(usize, usize)> = (1..n)
        .flat_map(|j| (j + 1..=n).map(move |k| (j, k)))
        .collect();
    for &(j, k) in &pairs {
        for &(jp, kp) in &pairs {
            let a = rotation_factor(n, j, k, &iv, &nu()).unwrap().matrix;
            let b = rotation_factor(n, jp, kp, &iv, &nu()).unwrap().matrix;
            let gap = a.matmul(&b).max_abs_diff(&b.matmul(&a));
            let disjoint = j != jp && j != kp && k != jp && k != kp;
            if disjoint || (j, k) == (jp, kp) {
                assert_eq!(gap, 0.0, "({j},{k}) ({jp},{kp})");
            } else {
                assert!(gap > 1e-6, "({j},{k}) ({jp},{kp}) should not commute");
            }
        }
    }
}

#[test]
fn three_by_three_orderings_agree() {
    let iv = Interval::unit();
    let row = double_product(3, &iv, &nu(), &PairOrdering::row_major(3)).unwrap();
    let col = double_product(3, &iv, &nu(), &PairOrdering::column_major(3)).unwrap();
    assert!(row.matrix.max_abs_diff(&col.matrix) < 1e-15);
}

#[test]
fn disallowed_ordering_rejected() {
    let iv = Interval::unit();
    let bad = PairOrdering::new(3, vec![(1, 2), (2, 3), (1, 3)]);
    assert!(bad.is_err());
    let row = PairOrdering::row_major(3);
    assert!(double_product(3, &iv, &nu(), &row).is_ok());
}

#[test]
fn real_parameter_gives_real_orthogonal_product() {
    let iv = Interval::new(0.0, 2.0).unwrap();
    let w = double_product(
        12,
        &iv,
        &ComplexParam::new(0.8, 0.0).unwrap(),
        &PairOrdering::row_major(12),
    )
    .unwrap();
    assert!(w.matrix.as_slice().iter().all(|v| v.im == 0.0));
    assert!(w.unitarity_defect() < 1e-13);
}

#[test]
fn conjugate_parameter_conjugates_product() {
    let iv = Interval::unit();
    let ord = PairOrdering::row_major(10);
    for p in [ComplexParam::new(0.0, 1.3).unwrap(), nu()] {
        let w = double_product(10, &iv, &p, &ord).unwrap().matrix;
        let wc = double_product(10, &iv, &p.conjugated(), &ord)
            .unwrap()
            .matrix;
        assert!(w.conj().max_abs_diff(&wc) < 1e-15);
    }
}

#[test]
fn linearized_gap_is_first_order() {
    let iv = Interval::unit();
    let gap = |n: usize| {
        let ord = PairOrdering::row_major(n);
        let exact = double_product(n, &iv, &nu(), &ord).unwrap().matrix;
        linearized_product(n, &iv, &nu(), &ord)
            .unwrap()
            .max_abs_diff(&exact)
    };
    let ratio = gap(50) / gap(100);
    assert!((1.6..=2.4).contains(&ratio), "ratio {ratio}");
}

/// Values in `[1, n]` for each class, strictly increasing along relations,
/// ties between incomparable classes allowed.
fn assignments(order: &EssentialOrder, n: usize) -> Vec<Vec<usize>> {
    let k = order.len();
    // A topological order of the classes.
    let mut topo: Vec<usize> = (0..k).collect();
    topo.sort_by_key(|&c| (0..k).filter(|&a| order.less(a, c)).count());
    let mut out = Vec::new();
    let mut value = vec![0usize; k];
    fn rec(
        depth: usize,
        topo: &[usize],
        order: &EssentialOrder,
        n: usize,
        value: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == topo.len() {
            out.push(value.clone());
            return;
        }
        let c = topo[depth];
        let low = topo[..depth]
            .iter()
            .filter(|&&a| order.less(a, c))
            .map(|&a| value[a] + 1)
            .max()
            .unwrap_or(1);
        for v in low..=n {
            value[c] = v;
            rec(depth + 1, topo, order, n, value, out);
        }
    }
    rec(0, &topo, order, n, &mut value, &mut out);
    out
}

#[test]
fn linearized_product_is_the_lattice_path_sum() {
    let iv = Interval::new(0.0, 1.5).unwrap();
    let p = ComplexParam::new(0.7, -0.4).unwrap();
    for n in [3usize, 4, 5] {
        let delta = iv.length() / n as f64;
        let mut expansion = ComplexMatrix::identity(n);
        for s in 1..=(2 * n - 3) {
            for path in enumerate_paths(s).unwrap() {
                let order = essential_order(&path);
                let q = path.upper_vertex_count() as u32;
                let weight =
                    (-p.nu_bar()).powu(q) * p.nu().powu(s as u32 - q) * delta.powi(s as i32);
                for vals in assignments(&order, n) {
                    let (j, k) = (vals[order.start()] - 1, vals[order.end()] - 1);
                    expansion.set(j, k, expansion.get(j, k) + weight);
                }
            }
        }
        for ord in [
            PairOrdering::row_major(n),
            PairOrdering::column_major(n),
            PairOrdering::random_allowed(n, 3),
        ] {
            let lin = linearized_product(n, &iv, &p, &ord).unwrap();
            assert!(lin.max_abs_diff(&expansion) < 1e-13, "N = {n}");
        }
    }
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            rec(v + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, size, &mut Vec::new(), &mut out);
    out
}

#[test]
fn counting_matrix_matches_subset_tally() {
    let iv = Interval::new(0.0, 2.0).unwrap();
    let n = 7;
    for s in 1..=4usize {
        let delta_s = (iv.length() / n as f64).powi(s as i32);
        for r in 0..=s {
            for rp in 0..=s {
                if r + rp == s {
                    continue;
                }
                let h = h_discrete(n, s, r, rp, &iv).unwrap();
                let mut tally = vec![vec![0u64; n + 1]; n + 1];
                for set in subsets(n, s + 1) {
                    // j has r values below it and k has r' above, in either branch.
                    tally[set[r]][set[s - rp]] += 1;
                }
                for j in 1..=n {
                    for k in 1..=n {
                        let want = tally[j][k] as f64 * delta_s;
                        assert!(
                            (h.get(j - 1, k - 1) - want).abs() < 1e-15,
                            "s={s} r={r} r'={rp} ({j},{k})"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn counting_matrix_approximates_monomial() {
    let iv = Interval::unit();
    let n = 400;
    let (s, r, rp) = (4usize, 1usize, 1usize);
    let h = h_discrete(n, s, r, rp, &iv).unwrap();
    let mut worst: f64 = 0.0;
    for j in (1..=n).step_by(7) {
        for k in (j + 1..=n).step_by(5) {
            let (x, y) = (midpoint(&iv, n, j), midpoint(&iv, n, k));
            let want = x * (y - x) * (1.0 - y);
            worst = worst.max((h.get(j - 1, k - 1) * n as f64 - want).abs());
        }
    }
    assert!(worst < 2.0 / n as f64, "worst {worst}");
}

#[test]
fn estimate_tracks_kernel_in_both_regions() {
    let iv = Interval::unit();
    let p = ComplexParam::new(1.0, 0.0).unwrap();
    let n = 100;
    let est = kernel_estimate(&double_product(n, &iv, &p, &PairOrdering::row_major(n)).unwrap());
    for (j, k) in [(20, 70), (70, 20), (35, 65), (80, 30)] {
        let (x, y, v) = est.at(j, k);
        let exact = ker_w_minus_i(x, y, &iv, &p, DEFAULT_TOL).unwrap();
        assert!(
            (v - exact).norm() < 5.0 / n as f64,
            "({j},{k}) {v} vs {exact}"
        );
    }
}

#[test]
fn imaginary_parameter_estimate() {
    let iv = Interval::unit();
    let p = ComplexParam::new(0.0, 1.0).unwrap();
    let n = 200;
    let est = kernel_estimate(&double_product(n, &iv, &p, &PairOrdering::row_major(n)).unwrap());
    // Midpoints 0.2025 and 0.7975, nearest to (0.2, 0.8).
    let (x, y, v) = est.at(41, 160);
    let exact = ker_w_minus_i(x, y, &iv, &p, DEFAULT_TOL).unwrap();
    assert!((v - exact).norm() < 3.0 / n as f64, "{v} vs {exact}");
}

#[test]
fn study_error_decays_first_order() {
    let iv = Interval::unit();
    let study = convergence_study(&[25, 50, 100], &SampleRegion::default(), &iv, &nu()).unwrap();
    for pair in study.rows.windows(2) {
        assert!(pair[1].max_error < pair[0].max_error);
        assert!(pair[1].weak_error < pair[0].weak_error);
    }
    let exponent = study.fitted_exponent.unwrap();
    assert!((0.8..=1.2).contains(&exponent), "exponent {exponent}");
    let first = study.rows[0].scaled_error;
    assert!(study.rows.iter().all(|r| r.scaled_error <= 1.5 * first));
    let weak = study.weak_exponent.unwrap();
    assert!(weak > 0.8, "weak exponent {weak}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_orderings_give_same_product(n in 2usize..14, seed in any::<u64>()) {
        let iv = Interval::new(-1.0, 1.0).unwrap();
        let p = ComplexParam::new(0.9, -0.3).unwrap();
        let reference = double_product(n, &iv, &p, &PairOrdering::row_major(n)).unwrap().matrix;
        let ord = PairOrdering::random_allowed(n, seed);
        prop_assert!(ord.validate().is_ok());
        let w = double_product(n, &iv, &p, &ord).unwrap().matrix;
        prop_assert!(w.max_abs_diff(&reference) < 1e-14);
        prop_assert!(w.unitarity_defect() < 1e-13);
    }

    #[test]
    fn factor_entries(n in 2usize..10, lambda in -2.0f64..2.0, mu in -2.0f64..2.0) {
        prop_assume!(lambda.hypot(mu) > 1e-3);
        let iv = Interval::unit();
        let p = ComplexParam::new(lambda, mu).unwrap();
        let r = rotation_factor(n, 1, n, &iv, &p).unwrap();
        let angle = p.modulus() / n as f64;
        let unit = p.unit().unwrap();
        prop_assert!((r.matrix.get(n - 1, 0) - unit * angle.sin()).norm() < 1e-15);
        prop_assert!((r.matrix.get(0, n - 1) + unit.conj() * angle.sin()).norm() < 1e-15);
        prop_assert!(r.unitarity_defect() < 1e-15);
        prop_assert_eq!(r.matrix.get(0, 0), Complex64::new(angle.cos(), 0.0));
    }
}
