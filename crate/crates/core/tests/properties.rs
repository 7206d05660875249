use dhlab_core::construct::{build_counterexample, CounterexampleInput};
use dhlab_core::dhcore::{dh_density, log_concavity_verdict, DHProfile, ReducedComponentData, Verdict};
use dhlab_core::exactlin::{
    diagonalize, evaluate, find_positive_orthogonal_class, ClassVector, IntegerSymmetricForm, RationalMatrix,
};
use dhlab_core::lefschetz::{check_map1, check_map2, find_hl_epsilon, neq1_holds, FourManifoldRing, SixManifoldLefschetzData};
use dhlab_core::polycert::{sign_on_interval, Interval, Polynomial, SignKind};
use dhlab_core::wallcross::{
    duality_warnings, poincare_jump, propagate, signature_jump, bplus_one_defect, CriticalLevelData,
    CriticalStratumData, MomentProfileSpec,
};
use dhlab_core::{rat, Rational};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

mod common;
use common::{f64_of, horner_f64, int, oracle_inertia, oracle_pair, oracle_rank};

fn symmetric(n: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(-bound..=bound, n * (n + 1) / 2).prop_map(move |upper| {
        let mut q = vec![vec![0; n]; n];
        let mut it = upper.into_iter();
        for i in 0..n {
            for j in i..n {
                let v = it.next().unwrap();
                q[i][j] = v;
                q[j][i] = v;
            }
        }
        q
    })
}

fn any_form() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6).prop_flat_map(|n| symmetric(n, 10))
}

/// A form with `b⁺ ≥ 2` and an integral `ω` of positive square.
fn orthogonal_input() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>)> {
    (2usize..=6)
        .prop_flat_map(|n| (symmetric(n, 10), prop::collection::vec(-3i64..=3, n)))
        .prop_filter("b+ >= 2 and Q(w,w) > 0", |(q, w)| {
            let wr: Vec<Rational> = w.iter().map(|&v| int(v)).collect();
            oracle_inertia(q).0 >= 2 && oracle_pair(q, &wr, &wr).is_positive()
        })
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn orthogonal_contract(q: &[Vec<i64>], w: &[i64], c: &ClassVector) -> bool {
    let wr: Vec<Rational> = w.iter().map(|&v| int(v)).collect();
    c.is_integral() && oracle_pair(q, c.coords(), c.coords()).is_positive() && oracle_pair(q, c.coords(), &wr).is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sylvester_invariance(q in any_form()) {
        let d = diagonalize(&IntegerSymmetricForm::new(q.clone()).unwrap());
        prop_assert_eq!((d.b_plus, d.b_minus, d.b_zero), oracle_inertia(&q));
    }

    #[test]
    fn diagonalization_reconstructs(q in any_form()) {
        let form = IntegerSymmetricForm::new(q).unwrap();
        let d = diagonalize(&form);
        let b = &d.basis;
        prop_assert!(!b.determinant().is_zero());
        let congruent = b.transpose().mul(&form.to_rational_matrix()).mul(b);
        prop_assert!(congruent.is_diagonal());
        prop_assert_eq!(congruent.diagonal(), d.diagonal.clone());
        let positives = d.diagonal.iter().filter(|v| v.is_positive()).count();
        let negatives = d.diagonal.iter().filter(|v| v.is_negative()).count();
        prop_assert_eq!((positives, negatives, d.diagonal.len() - positives - negatives), (d.b_plus, d.b_minus, d.b_zero));
    }

    #[test]
    fn orthogonal_class_contract((q, w) in orthogonal_input(), k in 1i64..=5) {
        let form = IntegerSymmetricForm::new(q.clone()).unwrap();
        let c = find_positive_orthogonal_class(&form, &ClassVector::from_integers(&w)).unwrap();
        prop_assert!(orthogonal_contract(&q, &w, &c));
        let scaled: Vec<i64> = w.iter().map(|v| v * k).collect();
        let c = find_positive_orthogonal_class(&form, &ClassVector::from_integers(&scaled)).unwrap();
        prop_assert!(orthogonal_contract(&q, &scaled, &c));
    }

    #[test]
    fn counterexample_soundness((q, w) in orthogonal_input()) {
        let input = CounterexampleInput::new("p", IntegerSymmetricForm::new(q.clone()).unwrap(), ClassVector::from_integers(&w)).unwrap();
        let r = build_counterexample(&input).unwrap();
        prop_assert_eq!(r.certificate.kind, SignKind::PositiveThroughout);
        prop_assert!(r.certificate.verify(&r.defect, &r.interval));
        prop_assert!(r.density.coeff(1).is_zero());
        let [cc, _, ww] = r.pairings.clone();
        prop_assert!(&r.epsilon * &r.epsilon < &ww / &cc);
        let margin = (&cc * &ww - &cc * &cc * &r.epsilon * &r.epsilon) / int(2);
        prop_assert!(margin.is_positive());
        prop_assert_eq!(r.defect.evaluate(&r.epsilon), margin.clone());
        prop_assert_eq!(r.defect.evaluate(&-&r.epsilon), margin);
    }

    #[test]
    fn sturm_matches_sampling(
        roots in prop::collection::vec((-8i64..=8, 1i64..=3), 0..=5),
        extra in prop::collection::vec(small_rational(), 0..=3),
        scale in small_rational(),
        lo in -6i64..=0, width in 1i64..=8,
    ) {
        let mut p = Polynomial::constant(scale);
        for (n, d) in &roots {
            p = &p * &Polynomial::new(vec![rat(-n, *d), Rational::one()]);
        }
        if !extra.is_empty() {
            p = &p * &Polynomial::new(extra);
        }
        let interval = Interval::bounded(int(lo), int(lo + width)).unwrap();
        let v = sign_on_interval(&p, &interval);
        prop_assert!(v.verify(&p, &interval));
        prop_assert_eq!(v.kind == SignKind::IdenticallyZero, p.is_zero());
        let coeffs: Vec<f64> = p.coeffs().iter().map(f64_of).collect();
        let (a, b) = (lo as f64, (lo + width) as f64);
        for i in 0..1000 {
            let t = a + (i as f64 + 0.5) * (b - a) / 1000.0;
            let h = horner_f64(&coeffs, t);
            if h.abs() <= 1e-9 {
                continue;
            }
            let ok = match v.kind {
                SignKind::PositiveThroughout | SignKind::NonNegative => h > 0.0,
                SignKind::NegativeThroughout | SignKind::NonPositive => h < 0.0,
                SignKind::IdenticallyZero => false,
                SignKind::Mixed => true,
            };
            prop_assert!(ok, "{:?} but p({}) = {}", v.kind, t, h);
        }
    }

    #[test]
    fn affine_reparameterization(
        (q, w) in (2usize..=4).prop_flat_map(|n| (symmetric(n, 6), prop::collection::vec(-3i64..=3, n))),
        c in prop::collection::vec(-3i64..=3, 4),
        shift in small_rational(),
    ) {
        let n = q.len();
        let form = IntegerSymmetricForm::new(q).unwrap();
        let omega = ClassVector::from_integers(&w);
        prop_assume!(evaluate(&form, &omega, &omega).unwrap().is_positive());
        let chern = ClassVector::from_integers(&c[..n]);
        let comp = ReducedComponentData::new(form, omega, chern, Interval::symmetric(&int(1)).unwrap()).unwrap();
        let rebased = comp.rebase(&shift);
        let original = dh_density(&comp).unwrap();
        prop_assert_eq!(dh_density(&rebased).unwrap(), original.compose_affine(&int(1), &shift));
    }

    #[test]
    fn verdicts_match_log_samples(
        a in -6i64..=6, b in -6i64..=6, c in 1i64..=12,
    ) {
        // f = ½(a t² + 2b t + c) on a subinterval of its positivity set.
        let f = Polynomial::new(vec![rat(c, 2), int(b), rat(a, 2)]);
        let mut radius = Rational::one();
        while sign_on_interval(&f, &Interval::symmetric(&radius).unwrap()).kind != SignKind::PositiveThroughout {
            radius /= int(2);
        }
        let interval = Interval::symmetric(&radius).unwrap();
        let profile = DHProfile::single(interval, f.clone()).unwrap();
        prop_assert!(f.evaluate(&Rational::zero()).is_positive());
        let report = log_concavity_verdict(&profile);
        let coeffs: Vec<f64> = f.coeffs().iter().map(f64_of).collect();
        let r = f64_of(&radius);
        let step = 2.0 * r / 1001.0;
        let ln: Vec<f64> = (1..=1000).map(|i| horner_f64(&coeffs, -r + i as f64 * step).ln()).collect();
        let second: Vec<f64> = ln.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]).collect();
        match report.verdict {
            Verdict::LogConcave => prop_assert!(second.iter().all(|d| *d <= 1e-9)),
            Verdict::StrictlyNonLogConcave => prop_assert!(second.iter().all(|d| *d > -1e-9)),
            Verdict::Inconclusive => {}
        }
    }

    #[test]
    fn level_conservation_and_exact_division(picks in prop::collection::vec(0usize..5, 1..=6)) {
        let pool = [
            CriticalStratumData::surface("s", 0).unwrap(),
            CriticalStratumData::surface("s", 1).unwrap(),
            CriticalStratumData::surface("s", 3).unwrap(),
            CriticalStratumData::point("p", (2, 4)).unwrap(),
            CriticalStratumData::point("p", (4, 2)).unwrap(),
        ];
        let strata: Vec<CriticalStratumData> = picks
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let mut s = pool[k].clone();
                s.label = format!("{}{i}", s.label);
                s
            })
            .collect();
        let level = CriticalLevelData::new(int(1), strata).unwrap();
        let jump = poincare_jump(&level).unwrap();
        prop_assert_eq!(int(signature_jump(&level)) + jump.coeff(2), Rational::zero());
        prop_assert!(jump.coeff(0).is_zero() && jump.coeff(4).is_zero());
    }

    #[test]
    fn propagation_keeps_duality(picks in prop::collection::vec(0usize..2, 0..=4)) {
        let points = [
            CriticalStratumData::point("x", (2, 4)).unwrap(),
            CriticalStratumData::point("y", (4, 2)).unwrap(),
        ];
        let mut levels = vec![CriticalLevelData::new(int(0), vec![CriticalStratumData::point("min", (6, 0)).unwrap()]).unwrap()];
        for (i, &k) in picks.iter().enumerate() {
            levels.push(CriticalLevelData::new(int(i as i64 + 1), vec![points[k].clone()]).unwrap());
        }
        levels.push(CriticalLevelData::new(int(picks.len() as i64 + 1), vec![CriticalStratumData::point("max", (0, 6)).unwrap()]).unwrap());
        let spec = MomentProfileSpec::new(levels, -3, Polynomial::from_integers(&[1, 0, 5, 0, 1])).unwrap();
        let profiles = propagate(&spec).unwrap();
        prop_assert!(duality_warnings(&profiles).is_empty());
        prop_assert!(profiles.iter().all(|p| p.b_plus == int(1)));
    }

    #[test]
    fn bplus_one_certificate(lambda in prop::collection::vec(small_rational(), 1..=6), r in positive_rational()) {
        let out = bplus_one_defect(&lambda, &r).unwrap();
        let v = sign_on_interval(&out.defect2, &Interval::real_line());
        prop_assert!(matches!(v.kind, SignKind::NonPositive | SignKind::NegativeThroughout | SignKind::IdenticallyZero));
        prop_assert!(!out.discriminant.is_positive());
        if !out.s.is_zero() {
            let c = out.defect2.coeffs();
            prop_assert_eq!(&c[1] * &c[1] - int(4) * &c[2] * &c[0], out.discriminant);
        }
    }
}

#[derive(Debug, Clone)]
struct RingCase {
    b1: usize,
    cup: Vec<Vec<Vec<i64>>>,
    form: Vec<Vec<i64>>,
    omega: Vec<i64>,
    beta2: Vec<i64>,
    beta4: Rational,
    m: i64,
    vol: i64,
}

fn ring_case() -> impl Strategy<Value = RingCase> {
    (0usize..=3, 1usize..=3)
        .prop_flat_map(|(b1, b2)| {
            (
                Just(b1),
                prop::collection::vec(prop::collection::vec(prop::collection::vec(-2i64..=2, b1), b2), b1),
                symmetric(b2, 3),
                prop::collection::vec(-2i64..=2, b2),
                prop::collection::vec(-2i64..=2, b2),
                small_rational(),
                1i64..=4,
                1i64..=3,
            )
        })
        .prop_map(|(b1, cup, form, omega, beta2, beta4, m, vol)| RingCase { b1, cup, form, omega, beta2, beta4, m, vol })
}

fn build_ring(case: &RingCase) -> Option<FourManifoldRing> {
    let cup = case.cup.iter().map(|s| s.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()).collect();
    let form = IntegerSymmetricForm::new(case.form.clone()).ok()?;
    FourManifoldRing::new(case.b1, cup, RationalMatrix::identity(case.b1), form, int(case.vol)).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn map2_routes_agree_and_match_rank(case in ring_case(), force_equality in any::<bool>()) {
        let Some(ring) = build_ring(&case) else { return Ok(()) };
        let omega: Vec<Rational> = case.omega.iter().map(|&v| int(v)).collect();
        let ww = oracle_pair(&case.form, &omega, &omega);
        prop_assume!(ww.is_positive());
        let eps = rat(1, case.m);
        let beta2: Vec<Rational> = case.beta2.iter().map(|&v| int(v)).collect();
        let beta4 = if force_equality {
            let wb = oracle_pair(&case.form, &omega, &beta2);
            (&ww + &eps * wb) / (&eps * &eps * int(case.vol))
        } else {
            case.beta4.clone()
        };
        let data = SixManifoldLefschetzData::new(ring.clone(), ClassVector::new(omega.clone()), ClassVector::new(beta2.clone()), beta4.clone(), eps.clone()).unwrap();
        let m2 = check_map2(&data).unwrap();
        prop_assert_eq!(m2.injective, neq1_holds(&ring, &data.omega0, &data.beta2, &beta4, &eps));
        if force_equality {
            prop_assert!(!m2.injective);
        }
        let rows: Vec<Vec<Rational>> = (0..m2.matrix.rows()).map(|i| m2.matrix.row(i).to_vec()).collect();
        prop_assert_eq!(oracle_rank(&rows) == case.form.len() + 1, m2.injective);

        let m1 = check_map1(&data);
        if case.b1 == 0 {
            prop_assert!(m1.injective && m1.matrix.rows() == 0);
        }
        let class: Vec<Rational> = omega.iter().zip(&beta2).map(|(w, b)| int(2) * &eps * w + &eps * &eps * b).collect();
        let mut rows = vec![vec![Rational::zero(); case.b1]; case.b1];
        for (i, slice) in case.cup.iter().enumerate() {
            for (j, h3) in slice.iter().enumerate() {
                for (k, &v) in h3.iter().enumerate() {
                    rows[k][i] += &class[j] * int(v);
                }
            }
        }
        prop_assert_eq!(oracle_rank(&rows) == case.b1, m1.injective);
        if let Some(w) = m1.witness {
            prop_assert!(m1.matrix.mul_vec(&w).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn epsilon_search_succeeds_on_generic_rings(case in ring_case()) {
        let Some(ring) = build_ring(&case) else { return Ok(()) };
        let omega = ClassVector::from_integers(&case.omega);
        prop_assume!(evaluate(ring.form(), &omega, &omega).unwrap().is_positive());
        prop_assume!(case.b1 == 0 || !ring.lefschetz_matrix(&omega).unwrap().determinant().is_zero());
        let beta2 = ClassVector::from_integers(&case.beta2);
        let eps = find_hl_epsilon(&ring, &omega, &beta2, &case.beta4, 1000, None).unwrap();
        let data = SixManifoldLefschetzData::new(ring, omega, beta2, case.beta4.clone(), eps).unwrap();
        prop_assert!(check_map1(&data).injective && check_map2(&data).unwrap().injective);
    }
}
