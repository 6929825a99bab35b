use grid_core::*;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn rel_err(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

prop_compose! {
    fn arb_stencil(dim: usize)(entries in prop::collection::vec(
        (prop::array::uniform3(-2i32..=2), -3.0f64..3.0), 1..12)) -> Stencil<f64> {
        Stencil::from_padded(dim, entries.into_iter().map(|(mut o, w)| {
            for v in o.iter_mut().skip(dim) { *v = 0; }
            (o, w)
        }))
    }
}

prop_compose! {
    fn arb_grid(dim: usize, max: usize)(dims in prop::collection::vec(1usize..=max, dim)) -> GridDesc {
        let n = dims.len();
        GridDesc::new(dims, vec![1.0; n], 0).unwrap()
    }
}

fn field(grid: &GridDesc, seed: &[f64]) -> GridFunction<f64> {
    GridFunction::from_fn(grid, 1, |_, p| {
        let i = grid.index(p);
        seed[i % seed.len()] + 0.37 * i as f64 % 1.3
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apply_is_linear(dim in 1usize..=3, seed in prop::collection::vec(-1.0f64..1.0, 5..40),
                       alpha in -2.0f64..2.0, beta in -2.0f64..2.0) {
        let grid = GridDesc::new(vec![if dim == 3 { 7 } else { 17 }; dim], vec![1.0; dim], 0).unwrap();
        let s = Stencil::<f64>::tensor(&vec![&[0.5, -1.25, 2.0][..]; dim], 1.0);
        let u = field(&grid, &seed);
        let v = field(&grid, &seed.iter().rev().copied().collect::<Vec<_>>());
        let mut w = u.clone();
        w.scale(alpha);
        w.axpy(beta, &v);
        let lhs = stencil_apply(&s, &w, Boundary::Dirichlet).unwrap();
        let mut rhs = stencil_apply(&s, &u, Boundary::Dirichlet).unwrap();
        rhs.scale(alpha);
        rhs.axpy(beta, &stencil_apply(&s, &v, Boundary::Dirichlet).unwrap());
        let mut d = lhs.clone();
        d.axpy(-1.0, &rhs);
        prop_assert!(d.norm() <= 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn apply_matches_assembly(dim in 1usize..=3, seed in prop::collection::vec(-1.0f64..1.0, 3..20),
                              s in (1usize..=3).prop_flat_map(arb_stencil), periodic in any::<bool>()) {
        let s = Stencil::from_padded(dim, s.entries().iter().map(|(o, w)| {
            let mut o = *o; for v in o.iter_mut().skip(dim) { *v = 0; } (o, *w) }));
        let grid = GridDesc::new(vec![5; dim], vec![1.0; dim], 0).unwrap();
        let b = if periodic { Boundary::Periodic } else { Boundary::Dirichlet };
        let u = field(&grid, &seed);
        let r = stencil_apply(&s, &u, b).unwrap();
        let m = assemble_matrix(&s, &grid, b);
        let v = &m * DVector::from_vec(u.values.clone());
        prop_assert!(rel_err(&DVector::from_vec(r.values), &v) < 1e-12 || v.norm() < 1e-12);
    }

    #[test]
    fn periodic_homomorphism(a in arb_stencil(2), b in arb_stencil(2), grid in arb_grid(2, 6)) {
        let ma = assemble_matrix(&a, &grid, Boundary::Periodic);
        let mb = assemble_matrix(&b, &grid, Boundary::Periodic);
        let prod = assemble_matrix(&a.mult(&b).unwrap(), &grid, Boundary::Periodic);
        let sum = assemble_matrix(&a.add(&b).unwrap(), &grid, Boundary::Periodic);
        let diff = assemble_matrix(&a.sub(&b).unwrap(), &grid, Boundary::Periodic);
        prop_assert!((&ma * &mb - prod).norm() < 1e-10);
        prop_assert!((&ma + &mb - sum).norm() < 1e-12);
        prop_assert!((&ma - &mb - diff).norm() < 1e-12);
    }

    #[test]
    fn splitting_is_complete(s in arb_stencil(3)) {
        // 5^3 grid: every offset of reach <= 2 stays interior for the centre point
        let grid = GridDesc::new(vec![5, 5, 5], vec![1.0; 3], 0).unwrap();
        let parts = [s.diag(), s.lower(), s.upper()];
        let sum: DMatrix<f64> = parts.iter().map(|p| assemble_matrix(p, &grid, Boundary::Dirichlet))
            .fold(DMatrix::zeros(125, 125), |acc, m| acc + m);
        prop_assert!((sum - assemble_matrix(&s, &grid, Boundary::Dirichlet)).norm() < 1e-12);
        // lower is strictly lower triangular in the natural ordering
        let lower = assemble_matrix(&s.lower(), &grid, Boundary::Dirichlet);
        for i in 0..125 { for j in i..125 { prop_assert_eq!(lower[(i, j)], 0.0); } }
    }

    #[test]
    fn transfers_match_assembly(dim in 1usize..=3, seed in prop::collection::vec(-1.0f64..1.0, 3..30),
                                s in arb_stencil(1)) {
        let s = Stencil::from_padded(dim, s.entries().iter().map(|(o, w)| ([o[0], o[0].signum(), 0], *w))
            .map(|(mut o, w)| { for v in o.iter_mut().skip(dim) { *v = 0; } (o, w) }));
        let coarse = GridDesc::new(vec![if dim == 3 { 2 } else { 4 }; dim], vec![2.0; dim], 0).unwrap();
        let fine = coarse.refine();
        let uf = field(&fine, &seed);
        let r = restrict_apply(&s, &uf, &coarse).unwrap();
        let mr = assemble_restriction(&s, &fine, &coarse);
        let v = &mr * DVector::from_vec(uf.values.clone());
        prop_assert!((DVector::from_vec(r.values) - &v).norm() <= 1e-12 * v.norm().max(1.0));
        let uc = field(&coarse, &seed);
        let p = prolong_apply(&s, &uc, &fine).unwrap();
        let mp = assemble_prolongation(&s, &coarse, &fine);
        let v = &mp * DVector::from_vec(uc.values.clone());
        prop_assert!((DVector::from_vec(p.values) - &v).norm() <= 1e-12 * v.norm().max(1.0));
    }
}

#[test]
fn full_weighting_is_scaled_interpolation_transpose() {
    for d in 1..=3usize {
        let fw = Stencil::<f64>::tensor(&vec![&[1.0, 2.0, 1.0][..]; d], 0.25f64.powi(d as i32));
        let li = Stencil::<f64>::tensor(&vec![&[1.0, 2.0, 1.0][..]; d], 0.5f64.powi(d as i32));
        let coarse = GridDesc::unit(d, if d == 3 { 2 } else { 3 });
        let fine = coarse.refine();
        let r = assemble_restriction(&fw, &fine, &coarse);
        let p = assemble_prolongation(&li, &coarse, &fine);
        let scaled = p.transpose() * 0.5f64.powi(d as i32);
        assert!((r - scaled).norm() < 1e-14, "d = {d}");
    }
}

#[test]
fn transfers_preserve_constants_in_the_interior() {
    for d in 1..=3usize {
        let fw = Stencil::<f64>::tensor(&vec![&[1.0, 2.0, 1.0][..]; d], 0.25f64.powi(d as i32));
        let li = Stencil::<f64>::tensor(&vec![&[1.0, 2.0, 1.0][..]; d], 0.5f64.powi(d as i32));
        let coarse = GridDesc::unit(d, 3);
        let fine = coarse.refine();
        let one_f = GridFunction::from_fn(&fine, 1, |_, _| 1.0);
        let r = restrict_apply(&fw, &one_f, &coarse).unwrap();
        assert!(r.values.iter().all(|v| (v - 1.0).abs() < 1e-14));
        let one_c = GridFunction::from_fn(&coarse, 1, |_, _| 1.0);
        let p = prolong_apply(&li, &one_c, &fine).unwrap();
        let n = fine.dims[0];
        for i in 0..fine.len() {
            let q = fine.point(i);
            if (0..d).all(|k| q[k] >= 1 && q[k] + 1 < n) {
                assert!((p.values[i] - 1.0).abs() < 1e-14);
            }
        }
    }
}
