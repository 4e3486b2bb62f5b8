use rcp_core::gen::generate;
use rcp_core::instance::Problem;
use rcp_core::synthesis::{synthesize, SynthesisOptions, Verdict};
use rcp_core::verify::{check_certificate, sample_check};
use rcp_core::{CaseTag, Rational, Scalar, Tolerances};

fn tags() -> Vec<(usize, CaseTag)> {
    let mut out = Vec::new();
    for n in 2..=3 {
        for tag in CaseTag::ALL {
            if tag.valid_for(n) && tag != CaseTag::Unsupported {
                out.push((n, tag));
            }
        }
    }
    out
}

fn run<S: Scalar>(p: &Problem<S>, allow_constant: bool) -> (Verdict, Option<CaseTag>) {
    let opts = SynthesisOptions {
        allow_constant,
        ..SynthesisOptions::default()
    };
    let result = synthesize(&p.system, &p.simplex, &opts).unwrap();
    if let Some(f) = result.feasible() {
        let g = &result.analysis.as_ref().unwrap().polytope;
        let report = check_certificate(&p.simplex, &p.system, &f.law, g, &opts.tolerances).unwrap();
        assert!(report.passed, "{report:?}");
        let sampled = sample_check(&p.simplex, &f.law, 200, 0, &opts.tolerances).unwrap();
        assert!(sampled.passed, "{sampled:?}");
    }
    (result.verdict(), result.case().map(|c| c.tag))
}

#[test]
fn generated_instances_synthesize_in_both_backends() {
    let tol = Tolerances::default();
    for (n, tag) in tags() {
        let mut verdicts = [0usize; 2];
        for seed in 0..25 {
            let inst = generate(n, tag, seed).unwrap();
            let exact = inst.to_problem::<Rational>(&tol).unwrap();
            let (verdict, case) = run(&exact, true);
            assert_eq!(case, Some(tag));
            if tag.always_feasible() {
                assert_eq!(run(&exact, false).0, Verdict::Feasible, "{tag} seed {seed}");
            }
            let float = inst.to_problem::<f64>(&tol).unwrap();
            let (fv, fcase) = run(&float, true);
            assert_eq!((fv, fcase), (verdict, case), "{tag} seed {seed}");
            verdicts[usize::from(verdict == Verdict::Feasible)] += 1;
        }
        eprintln!("{tag} n={n}: feasible {} obstructed {}", verdicts[1], verdicts[0]);
    }
}
