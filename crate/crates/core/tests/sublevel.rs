use vecopt_core::poly::PolyMap;
use vecopt_core::sublevel::*;

const MOTZKIN: &str = "x1^2*x2^4 + x1^4*x2^2 - 3*x1^2*x2^2 + 1";

fn lifted() -> PolyMap {
    PolyMap::parse(&format!("x1\nx2\n{} + x3^2", MOTZKIN), 3).unwrap()
}

#[test]
fn motzkin_section_bounded() {
    let f = PolyMap::parse(MOTZKIN, 2).unwrap();
    let r = probe_bounded_section(&f, &[2.0], &SectionBudget::default());
    assert_eq!(r.verdict, SectionVerdict::BoundedLikely);
    assert!(r.lower_envelope[0].unwrap().abs() < 1e-6);
}

#[test]
fn lifted_sections() {
    let f = lifted();
    let r = probe_bounded_section(&f, &[1.0, 1.0, 0.0], &SectionBudget::default());
    eprintln!("{:?}", r);
    assert_eq!(r.verdict, SectionVerdict::BoundedLikely);
    let r = probe_bounded_section(&f, &[0.0, 0.0, 2.0], &SectionBudget::default());
    eprintln!("{:?} {:?}", r.verdict, r.witness.as_ref().map(|w| w.values.last().cloned()));
    assert_eq!(r.verdict, SectionVerdict::UnboundedWitness);
}

#[test]
fn hyperbola_empty_at_zero() {
    let f = PolyMap::parse("(x1*x2 - 1)^2 + x1^2", 2).unwrap();
    let r = probe_bounded_section(&f, &[0.0], &SectionBudget::default());
    eprintln!("{:?}", r);
}

#[test]
fn motzkin_properness() {
    let f = PolyMap::parse(MOTZKIN, 2).unwrap();
    let r = probe_properness(&f, &[0.5], &PropernessBudget::default());
    assert_eq!(r.verdict, PropernessVerdict::NoWitnessFound, "{:?}", r.witness);
    let r = probe_properness(&f, &[1.5], &PropernessBudget::default());
    assert_eq!(r.verdict, PropernessVerdict::NotProperWitness);
    let w = r.witness.unwrap();
    eprintln!("{:?} {:?}", w.target, w.values.last());
}

#[test]
fn plane_sum_not_proper() {
    let f = PolyMap::parse("x1 + x2", 2).unwrap();
    let r = probe_properness(&f, &[0.0], &PropernessBudget::default());
    assert_eq!(r.verdict, PropernessVerdict::NotProperWitness);
}

#[test]
fn ps_probe_linear() {
    let f = PolyMap::parse("x1\nx2", 3).unwrap();
    let r = probe_palais_smale(&f, &[1.0, 1.0], &PsBudget::default());
    eprintln!("{:?} {:?} {:?} {}", r.verdict, r.min_nu, r.min_nu_scaled, r.escape_samples);
}
