use grid_core::*;
use nalgebra::DMatrix;

fn laplace_1d(h: f64) -> Stencil<f64> {
    let s = 1.0 / (h * h);
    Stencil::new(1, [(&[-1][..], -s), (&[0][..], 2.0 * s), (&[1][..], -s)]).unwrap()
}

fn laplace_2d(h: f64) -> Stencil<f64> {
    let s = 1.0 / (h * h);
    Stencil::new(
        2,
        [(&[0, 0][..], 4.0 * s), (&[-1, 0][..], -s), (&[1, 0][..], -s), (&[0, -1][..], -s), (&[0, 1][..], -s)],
    )
    .unwrap()
}

fn grid1(n: usize, h: f64) -> GridDesc {
    GridDesc::new(vec![n], vec![h], 0).unwrap()
}

#[test]
fn five_point_at_interior_point() {
    let h = 0.25;
    let g = GridDesc::new(vec![3, 3], vec![h, h], 2).unwrap();
    let u = GridFunction::from_fn(&g, 1, |_, p| (1 + p[0] + 3 * p[1]) as f64 * 0.5 + (p[0] * p[1]) as f64);
    let r = stencil_apply(&laplace_2d(h), &u, Boundary::Dirichlet).unwrap();
    let at = |x: usize, y: usize| u.values[x + 3 * y];
    let expect = (4.0 * at(1, 1) - at(0, 1) - at(2, 1) - at(1, 0) - at(1, 2)) / (h * h);
    assert!((r.values[4] - expect).abs() < 1e-12);
}

#[test]
fn second_difference_annihilates_linears() {
    let h = 0.125;
    let g = grid1(7, h);
    let u = GridFunction::from_fn(&g, 1, |_, p| (p[0] + 1) as f64 * h);
    let r = stencil_apply(&laplace_1d(h), &u, Boundary::Dirichlet).unwrap();
    for v in &r.values[1..6] {
        assert!(v.abs() < 1e-9);
    }
}

#[test]
fn second_difference_of_quadratic() {
    let g = grid1(5, 1.0);
    let u = GridFunction::from_values(&g, 1, vec![0.0, 1.0, 4.0, 9.0, 16.0]).unwrap();
    let r = stencil_apply(&laplace_1d(1.0), &u, Boundary::Dirichlet).unwrap();
    assert_eq!(r.values[2], -2.0);
}

#[test]
fn dimension_mismatch_is_an_error() {
    let u = GridFunction::<f64>::zeros(&grid1(3, 1.0), 1);
    assert!(matches!(stencil_apply(&laplace_2d(1.0), &u, Boundary::Dirichlet), Err(GridError::DimMismatch { .. })));
    assert!(laplace_1d(1.0).add(&laplace_2d(1.0)).is_err());
    assert!(laplace_1d(1.0).mult(&laplace_2d(1.0)).is_err());
}

#[test]
fn add_sub_cases() {
    let a = laplace_1d(1.0);
    assert_eq!(a.add(&Stencil::empty(1)).unwrap(), a);
    let two = Stencil::new(1, [(&[0][..], 2.0)]).unwrap();
    let three = Stencil::new(1, [(&[0][..], 3.0)]).unwrap();
    assert_eq!(two.add(&three).unwrap().entries(), &[([0, 0, 0], 5.0)]);
    let one = Stencil::new(1, [(&[0][..], 1.0)]).unwrap();
    let right = Stencil::new(1, [(&[1][..], 1.0)]).unwrap();
    assert_eq!(one.add(&right).unwrap().entries(), &[([0, 0, 0], 1.0), ([1, 0, 0], 1.0)]);
    assert_eq!(three.sub(&two).unwrap().entries(), &[([0, 0, 0], 1.0)]);
}

#[test]
fn mult_cases() {
    let s = laplace_1d(1.0);
    assert!(Stencil::identity(1).mult(&s).unwrap().approx_eq(&s, 0.0));
    assert!(s.mult(&Stencil::empty(1)).unwrap().is_empty());
    let d2 = Stencil::new(1, [(&[-1][..], 1.0), (&[0][..], -2.0), (&[1][..], 1.0)]).unwrap();
    let d4 = Stencil::new(1, [(&[-2][..], 1.0), (&[-1][..], -4.0), (&[0][..], 6.0), (&[1][..], -4.0), (&[2][..], 1.0)])
        .unwrap();
    let prod = d2.mult(&d2).unwrap();
    assert!(prod.approx_eq(&d4, 0.0));
    // matrix-product oracle on an 8-point periodic grid
    let g = grid1(8, 1.0);
    let a = assemble_matrix(&d2, &g, Boundary::Periodic);
    let p = assemble_matrix(&prod, &g, Boundary::Periodic);
    assert!((&a * &a - p).norm() < 1e-12);
}

#[test]
fn scale_cases() {
    let s = laplace_2d(0.5);
    assert_eq!(s.scale(1.0), s);
    let z = s.scale(0.0);
    assert_eq!(z.len(), s.len());
    assert!(z.entries().iter().all(|(_, w)| *w == 0.0));
    let three = Stencil::new(1, [(&[0][..], 3.0)]).unwrap();
    assert_eq!(three.scale(2.0).entries(), &[([0, 0, 0], 6.0)]);
}

#[test]
fn diag_lower_upper() {
    let h = 0.25;
    assert_eq!(laplace_2d(h).diag().entries(), &[([0, 0, 0], 4.0 / (h * h))]);
    let off = Stencil::new(1, [(&[1][..], 1.0)]).unwrap();
    assert_eq!(off.diag().entries(), &[([0, 0, 0], 0.0)]);
    assert_eq!(off.diag_inv(), Err(GridError::SingularDiagonal));
    assert_eq!(off.diag().diag_inv(), Err(GridError::SingularDiagonal));
    let s = Stencil::new(1, [(&[-1][..], -1.0), (&[0][..], 2.0), (&[1][..], -1.0)]).unwrap();
    assert_eq!(s.lower().entries(), &[([-1, 0, 0], -1.0)]);
    assert_eq!(s.upper().entries(), &[([1, 0, 0], -1.0)]);
    assert_eq!(s.diag_inv().unwrap().entries(), &[([0, 0, 0], 0.5)]);
    let back = s.diag().add(&s.lower()).unwrap().add(&s.upper()).unwrap();
    assert!(back.approx_eq(&s, 0.0));
}

#[test]
fn assembled_poisson_3x3_matches_reference_matrix() {
    let h = 0.25;
    let g = GridDesc::new(vec![3, 3], vec![h, h], 2).unwrap();
    let m = assemble_matrix(&laplace_2d(h), &g, Boundary::Dirichlet);
    #[rustfmt::skip]
    let reference = [
         4., -1.,  0., -1.,  0.,  0.,  0.,  0.,  0.,
        -1.,  4., -1.,  0., -1.,  0.,  0.,  0.,  0.,
         0., -1.,  4.,  0.,  0., -1.,  0.,  0.,  0.,
        -1.,  0.,  0.,  4., -1.,  0., -1.,  0.,  0.,
         0., -1.,  0., -1.,  4., -1.,  0., -1.,  0.,
         0.,  0., -1.,  0., -1.,  4.,  0.,  0., -1.,
         0.,  0.,  0., -1.,  0.,  0.,  4., -1.,  0.,
         0.,  0.,  0.,  0., -1.,  0., -1.,  4., -1.,
         0.,  0.,  0.,  0.,  0., -1.,  0., -1.,  4.,
    ];
    let expect = DMatrix::from_row_slice(9, 9, &reference) / (h * h);
    assert_eq!(m, expect);
}

#[test]
fn identity_and_tridiagonal_assembly() {
    let g = GridDesc::new(vec![3, 2], vec![1.0, 1.0], 0).unwrap();
    assert_eq!(assemble_matrix(&Stencil::<f64>::identity(2), &g, Boundary::Dirichlet), DMatrix::identity(6, 6));
    let h = 0.25;
    let m = assemble_matrix(&laplace_1d(h), &grid1(3, h), Boundary::Dirichlet);
    let expect = DMatrix::from_row_slice(3, 3, &[2., -1., 0., -1., 2., -1., 0., -1., 2.]) / (h * h);
    assert_eq!(m, expect);
}

#[test]
fn full_weighting_on_constant_and_linear() {
    let fw = Stencil::<f64>::tensor(&[&[1.0, 2.0, 1.0]], 0.25);
    let fine = GridDesc::unit(1, 4);
    let coarse = fine.coarsen().unwrap();
    let one = GridFunction::from_fn(&fine, 1, |_, _| 1.0);
    let r = restrict_apply(&fw, &one, &coarse).unwrap();
    assert!(r.values.iter().all(|v| (v - 1.0).abs() < 1e-15));
    let lin = GridFunction::from_fn(&fine, 1, |_, p| fine.coord(p)[0]);
    let r = restrict_apply(&fw, &lin, &coarse).unwrap();
    for (i, v) in r.values.iter().enumerate() {
        assert!((v - coarse.coord([i, 0, 0])[0]).abs() < 1e-15);
    }
}

#[test]
fn interpolation_of_constant_and_impulse() {
    let p = Stencil::<f64>::tensor(&[&[1.0, 2.0, 1.0]], 0.5);
    let coarse = GridDesc::unit(1, 3);
    let fine = coarse.refine();
    let one = GridFunction::from_fn(&coarse, 1, |_, _| 1.0);
    let f = prolong_apply(&p, &one, &fine).unwrap();
    for v in &f.values[1..fine.len() - 1] {
        assert!((v - 1.0).abs() < 1e-15);
    }
    let mut imp = GridFunction::zeros(&coarse, 1);
    imp.values[3] = 1.0;
    let f = prolong_apply(&p, &imp, &fine).unwrap();
    let mut expect = vec![0.0; fine.len()];
    expect[6] = 0.5;
    expect[7] = 1.0;
    expect[8] = 0.5;
    assert_eq!(f.values, expect);
}

#[test]
fn non_nested_grids_are_rejected() {
    let fw = Stencil::<f64>::tensor(&[&[1.0, 2.0, 1.0]], 0.25);
    let fine = GridFunction::<f64>::zeros(&grid1(8, 1.0), 1);
    assert!(matches!(restrict_apply(&fw, &fine, &grid1(3, 2.0)), Err(GridError::NonNested { .. })));
    let coarse = GridFunction::<f64>::zeros(&grid1(3, 1.0), 1);
    assert!(prolong_apply(&fw, &coarse, &grid1(8, 1.0)).is_err());
}

#[test]
fn duplicate_offsets_rejected() {
    let e = Stencil::new(1, [(&[0][..], 1.0), (&[0][..], 2.0)]);
    assert_eq!(e, Err(GridError::DuplicateOffset(vec![0])));
}

#[test]
fn complex_scalars_work() {
    let s = Stencil::new(1, [(&[0][..], Complex64::new(2.0, 1.0)), (&[1][..], Complex64::new(-1.0, 0.0))]).unwrap();
    let g = grid1(3, 1.0);
    let u = GridFunction::from_fn(&g, 1, |_, p| Complex64::new(p[0] as f64, 1.0));
    let r = stencil_apply(&s, &u, Boundary::Dirichlet).unwrap();
    let m = assemble_matrix(&s, &g, Boundary::Dirichlet);
    let v = m * nalgebra::DVector::from_vec(u.values.clone());
    for (a, b) in r.values.iter().zip(v.iter()) {
        assert!((a - b).norm() < 1e-14);
    }
}

#[test]
fn system_and_shift_assembly_agree_with_apply() {
    let g = GridDesc::new(vec![4, 3], vec![1.0, 1.0], 0).unwrap();
    let l = laplace_2d(1.0);
    let x = Stencil::new(2, [(&[1, 1][..], 0.25), (&[-1, -1][..], 0.25), (&[1, -1][..], -0.25), (&[-1, 1][..], -0.25)])
        .unwrap();
    let sys = SystemStencil::new(vec![vec![l.clone(), x.clone()], vec![x, l.scale(2.0)]]).unwrap();
    let mut op = Operator::new(sys);
    op.shift = Some((0..24).map(|i| i as f64 * 0.1).collect());
    let u = GridFunction::from_fn(&g, 2, |c, p| (c + 1) as f64 * (p[0] as f64 - 0.3 * p[1] as f64).sin());
    let r = op.apply(&u).unwrap();
    let m = assemble_operator(&op, &g);
    let v = m * nalgebra::DVector::from_vec(u.values.clone());
    for (a, b) in r.values.iter().zip(v.iter()) {
        assert!((a - b).abs() < 1e-13);
    }
}
