use std::f64::consts::PI;

use emscatter::dictionary::DictionaryEntry;
use emscatter::farfield::{FarFieldPattern, IncidentWave};
use emscatter::forward::{
    eval_far_field, in_plane_pose, scene_far_field, Euler, Material, Pose, Scene, SceneComponent, ShapeModel,
};
use emscatter::indicators::{
    evaluate_grid, find_peaks, indicator_r, indicator_s, trim, IndicatorField, IndicatorKind, IndicatorSpec,
    SamplingGrid,
};
use emscatter::sph::{lebedev_rule, vsh_u, vsh_v, QuadratureRule, TangentialField};
use emscatter::{Error, Vec3};
use num_complex::Complex64;

fn wave(k: f64) -> IncidentWave {
    IncidentWave::new(k, Vec3::x(), Vec3::z()).unwrap()
}

fn small_sphere_scene(centers: &[Vec3]) -> Scene {
    let m = ShapeModel::sphere("s", 0.1, Material::dielectric(4.0).unwrap()).unwrap();
    Scene::new(centers.iter().map(|z| SceneComponent::new(m.clone(), Pose::at(*z))).collect()).unwrap()
}

fn entry_from(pattern: FarFieldPattern, rule: &QuadratureRule) -> DictionaryEntry {
    let norm = pattern.norm(rule).unwrap();
    DictionaryEntry { shape_id: "x".into(), euler: Euler::identity(), tau: 1.0, pattern, norm, radius: 1.0 }
}

#[test]
fn dipole_pattern_is_captured_exactly() {
    let rule = lebedev_rule(590).unwrap();
    let w = wave(2.0);
    let z0 = Vec3::new(0.4, -1.0, 0.7);
    let base = FarFieldPattern::new(TangentialField::from_fn(&rule, |x| vsh_u(1, 0, x).unwrap()), w);
    let a = base.translate_phase(&z0, &rule).unwrap();
    assert!((indicator_s(&a, &z0, &rule).unwrap() - 1.0).abs() < 1e-10);
    let scaled = a.scale_amplitude(Complex64::new(-3.0, 0.5));
    for z in [z0, Vec3::new(1.0, 2.0, 3.0)] {
        let (u, v) = (indicator_s(&a, &z, &rule).unwrap(), indicator_s(&scaled, &z, &rule).unwrap());
        assert!((u - v).abs() < 1e-14);
    }
    let zero = FarFieldPattern::zeros(&rule, w);
    assert!(matches!(indicator_s(&zero, &z0, &rule), Err(Error::ZeroNorm(_))));
}

#[test]
fn grid_sweep_matches_pointwise_evaluation() {
    let rule = lebedev_rule(302).unwrap();
    let w = wave(PI);
    let kite = ShapeModel::kite_like(Material::Pec);
    let pose = in_plane_pose(Vec3::new(0.5, 0.2, -0.3), PI / 4.0, 1.0).unwrap();
    let a = eval_far_field(&kite, &pose, &w, &rule).unwrap();
    let entry = entry_from(
        eval_far_field(&kite, &in_plane_pose(Vec3::zeros(), PI / 4.0, 1.0).unwrap(), &w, &rule).unwrap(),
        &rule,
    );
    let mut grid = SamplingGrid::new(Vec3::new(-1.0, -1.0, -1.0), Vec3::new(1.0, 1.0, 0.6), 0.4).unwrap();
    grid.deactivate_where(|x| x.x > 0.7);
    let fs = evaluate_grid(IndicatorSpec::Small, &a, &grid, &rule, false).unwrap();
    let fr = evaluate_grid(IndicatorSpec::Regular(&entry.pattern), &a, &grid, &rule, false).unwrap();
    assert_eq!(fs.nodes, grid.active_indices());
    for (i, &idx) in fs.nodes.iter().enumerate() {
        let z = grid.position(idx);
        assert!((fs.values[i] - indicator_s(&a, &z, &rule).unwrap()).abs() < 1e-12);
        assert!((fr.values[i] - indicator_r(&a, &entry, &z, &rule).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn small_sphere_is_located_within_a_cell() {
    let rule = lebedev_rule(590).unwrap();
    let k = 1.0;
    let z0 = Vec3::new(1.0, -1.0, 2.0);
    let a = scene_far_field(&small_sphere_scene(&[z0]), &wave(k), &rule).unwrap();
    let h = 2.0 * PI / k / 10.0;
    let grid = SamplingGrid::centered(Vec3::zeros(), 4.0, h).unwrap();
    let f = evaluate_grid(IndicatorSpec::Small, &a, &grid, &rule, true).unwrap();
    let (idx, v) = f.max().unwrap();
    assert_eq!(v, 1.0);
    assert!((grid.position(idx) - z0).norm() <= h * 3f64.sqrt());
}

#[test]
fn matched_and_orthogonal_entries() {
    let rule = lebedev_rule(590).unwrap();
    let w = wave(PI);
    let peanut = ShapeModel::peanut_like(Material::dielectric(4.0).unwrap());
    let e = Euler::in_plane(3.0 * PI / 4.0).unwrap();
    let mut entry =
        entry_from(eval_far_field(&peanut, &Pose { z: Vec3::zeros(), euler: e, tau: 1.0 }, &w, &rule).unwrap(), &rule);
    entry.euler = e;
    let z0 = Vec3::new(-2.0, -2.0, -2.0);
    let a = eval_far_field(&peanut, &entry.pose_at(z0), &w, &rule).unwrap();
    let v = indicator_r(&a, &entry, &z0, &rule).unwrap();
    assert!((v - 1.0).abs() < 1e-10, "{v}");

    let u = FarFieldPattern::new(TangentialField::from_fn(&rule, |x| vsh_u(2, 1, x).unwrap()), w);
    let v = entry_from(FarFieldPattern::new(TangentialField::from_fn(&rule, |x| vsh_v(3, -1, x).unwrap()), w), &rule);
    assert!(indicator_r(&u, &v, &Vec3::zeros(), &rule).unwrap() < 1e-10);

    let mut zero = v.clone();
    zero.pattern = FarFieldPattern::zeros(&rule, w);
    assert!(matches!(indicator_r(&u, &zero, &Vec3::zeros(), &rule), Err(Error::ZeroNorm(_))));
    let other_k = FarFieldPattern::new(u.field().clone(), wave(1.0));
    assert!(matches!(indicator_r(&other_k, &v, &Vec3::zeros(), &rule), Err(Error::Incompatible(_))));
}

#[test]
fn separation_improves_matched_value() {
    let rule = lebedev_rule(590).unwrap();
    let w = wave(PI);
    let kite = ShapeModel::kite_like(Material::Pec);
    let peanut = ShapeModel::peanut_like(Material::Pec);
    let entry = entry_from(eval_far_field(&kite, &Pose::identity(), &w, &rule).unwrap(), &rule);
    let dev = |l: f64| {
        let scene = Scene::new(vec![
            SceneComponent::new(kite.clone(), Pose::identity()),
            SceneComponent::new(peanut.clone(), Pose::at(Vec3::new(l, 0.3 * l, 0.1 * l).normalize() * l)),
        ])
        .unwrap();
        let a = scene_far_field(&scene, &w, &rule).unwrap();
        (indicator_r(&a, &entry, &Vec3::zeros(), &rule).unwrap() - 1.0).abs()
    };
    assert!(dev(20.0) < dev(10.0), "{} vs {}", dev(20.0), dev(10.0));
}

#[test]
fn grid_edge_cases() {
    let rule = lebedev_rule(50).unwrap();
    let w = wave(1.0);
    let zero = FarFieldPattern::zeros(&rule, w);
    let grid = SamplingGrid::new(Vec3::zeros(), Vec3::repeat(1.0), 0.5).unwrap();
    assert_eq!(grid.len(), 27);
    assert!(evaluate_grid(IndicatorSpec::Small, &zero, &grid, &rule, true).is_err());

    let a = scene_far_field(&small_sphere_scene(&[Vec3::new(0.3, 0.2, 0.1)]), &w, &rule).unwrap();
    let mut masked = grid.clone();
    masked.deactivate_where(|_| true);
    let f = evaluate_grid(IndicatorSpec::Small, &a, &masked, &rule, true).unwrap();
    assert!(f.values.is_empty() && find_peaks(&f, 0.8, 1.0).is_empty());

    let f = evaluate_grid(IndicatorSpec::Small, &a, &grid, &rule, true).unwrap();
    let max = f.values.iter().cloned().fold(f64::MIN, f64::max);
    assert_eq!(max, 1.0);
    assert!(f.values.iter().all(|v| *v >= 0.0));
    assert!(SamplingGrid::new(Vec3::zeros(), Vec3::repeat(1.0), 0.0).is_err());
    assert!(SamplingGrid::new(Vec3::zeros(), Vec3::new(-1.0, 1.0, 1.0), 0.1).is_err());
}

fn synthetic_field(grid: &SamplingGrid, f: impl Fn(&Vec3) -> f64) -> IndicatorField {
    let nodes = grid.active_indices();
    let values = nodes.iter().map(|&i| f(&grid.position(i))).collect();
    IndicatorField { grid: grid.clone(), nodes, values, kind: IndicatorKind::Small, normalized: false }
}

#[test]
fn peak_extraction() {
    let grid = SamplingGrid::new(Vec3::repeat(-2.0), Vec3::repeat(2.0), 0.25).unwrap();
    assert!(find_peaks(&synthetic_field(&grid, |_| 0.7), 0.5, 0.1).is_empty());

    let c = Vec3::new(0.5, -0.25, 1.0);
    let bump = synthetic_field(&grid, |x| (-(x - c).norm_squared()).exp());
    let peaks = find_peaks(&bump, 0.8, 1.0);
    assert_eq!(peaks.len(), 1);
    assert!((peaks[0].position - c).norm() < 1e-12);

    // two nearby bumps merge; a distant low one falls below the threshold
    let two = synthetic_field(&grid, |x| {
        (-4.0 * (x - c).norm_squared()).exp()
            + 0.9 * (-4.0 * (x - c - Vec3::new(1.0, 0.0, 0.0)).norm_squared()).exp()
            + 0.3 * (-4.0 * (x + Vec3::repeat(1.5)).norm_squared()).exp()
    });
    assert_eq!(find_peaks(&two, 0.5, 0.5).len(), 2);
    assert_eq!(find_peaks(&two, 0.5, 1.25).len(), 1);
    assert_eq!(find_peaks(&two, 0.2, 0.5).len(), 3);
}

#[test]
fn three_spheres_give_three_peaks() {
    let rule = lebedev_rule(590).unwrap();
    let k = 1.0;
    let lambda = 2.0 * PI / k;
    let truth = [Vec3::new(-12.0, 3.0, 1.0), Vec3::new(13.0, -2.0, 4.0), Vec3::new(1.0, 12.0, -12.0)];
    let a = scene_far_field(&small_sphere_scene(&truth), &wave(k), &rule).unwrap();
    let h = lambda / 10.0;
    let grid = SamplingGrid::centered(Vec3::zeros(), 16.0, h).unwrap();
    let f = evaluate_grid(IndicatorSpec::Small, &a, &grid, &rule, true).unwrap();
    let peaks = find_peaks(&f, 0.8, lambda / 2.0);
    assert_eq!(peaks.len(), 3, "{peaks:?}");
    for t in &truth {
        assert!(peaks.iter().any(|p| (p.position - t).norm() <= h * 3f64.sqrt()), "missing {t:?}");
    }
}

#[test]
fn trimming() {
    let grid = SamplingGrid::new(Vec3::repeat(-1.0), Vec3::repeat(1.0), 0.1).unwrap();
    let c = Vec3::new(0.2, 0.0, -0.1);
    let t = trim(&grid, &c, 0.5, 0.0);
    for idx in 0..grid.len() {
        assert_eq!(t.is_active(idx), (grid.position(idx) - c).norm() > 0.5);
    }
    assert_eq!(trim(&t, &c, 0.5, 0.0), t);
    assert!(trim(&t, &c, 0.5, 0.2).active_count() < t.active_count());
}

#[test]
fn translation_covariance_and_scalar_invariance() {
    let rule = lebedev_rule(302).unwrap();
    let w = wave(PI);
    let kite = ShapeModel::kite_like(Material::Pec);
    let entry = entry_from(eval_far_field(&kite, &Pose::identity(), &w, &rule).unwrap(), &rule);
    let z0 = Vec3::new(0.3, 0.1, -0.2);
    let t = Vec3::new(1.2, -0.4, 2.0);
    let a0 = eval_far_field(&kite, &Pose::at(z0), &w, &rule).unwrap();
    let a1 = eval_far_field(&kite, &Pose::at(z0 + t), &w, &rule).unwrap();
    let g0 = SamplingGrid::new(Vec3::repeat(-1.0), Vec3::repeat(1.0), 0.2).unwrap();
    let g1 = SamplingGrid::new(Vec3::repeat(-1.0) + t, Vec3::repeat(1.0) + t, 0.2).unwrap();
    for spec in [IndicatorSpec::Small, IndicatorSpec::Regular(&entry.pattern)] {
        let f0 = evaluate_grid(spec, &a0, &g0, &rule, false).unwrap();
        let f1 = evaluate_grid(spec, &a1, &g1, &rule, false).unwrap();
        for (u, v) in f0.values.iter().zip(&f1.values) {
            assert!((u - v).abs() < 1e-10);
        }
        let c = Complex64::new(0.0, -2.5);
        let fs = evaluate_grid(spec, &a0.scale_amplitude(c), &g0, &rule, true).unwrap();
        let fn0 = evaluate_grid(spec, &a0, &g0, &rule, true).unwrap();
        // argmax of one field is a maximizer of the other (up to roundoff ties)
        let top = fn0.max().unwrap().0;
        assert!((fs.value_at(top).unwrap() - 1.0).abs() < 1e-12);
        for (u, v) in fs.values.iter().zip(&fn0.values) {
            assert!((u - v).abs() < 1e-12);
        }
    }
}
