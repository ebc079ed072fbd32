use sqz::builtin;
use sqz::cotors::verify_scheme_equivalence;
use sqz::sheafspace::{cogroup_structure, direct_sum_space, verify_cogroup, Mode};
use sqz::{Limits, Verdict};

#[test]
fn direct_sum_over_spec_z6_with_mixed_stalks() {
    let x = builtin::space("spec-ring:zmod:6").unwrap();
    let m = builtin::module_sheaf("stalks:zmod:2;zmod:3", &x).unwrap();
    let d = direct_sum_space(&x.sheaf, &m).unwrap();
    assert_eq!(d.sheaf.global_sections().size(), 36);
    assert!(d.i_x.verify().passed());
}

#[test]
fn cogroup_on_spec_z6_mixed_stalks() {
    let x = builtin::space("spec-ring:zmod:6").unwrap();
    let m = builtin::module_sheaf("stalks:zmod:2;zmod:3", &x).unwrap();
    let c = cogroup_structure(&x.sheaf, &m).unwrap();
    let r = verify_cogroup(&c);
    assert!(r.fully_passed(), "{r}");
}

#[test]
fn zero_module_sheaf_has_one_class() {
    let x = builtin::space("spec-ring:zmod:6").unwrap();
    let m = builtin::module_sheaf("zero", &x).unwrap();
    let r = verify_scheme_equivalence(&x.sheaf, &m, Mode::Spec, &Limits::default()).unwrap();
    assert!(r.passed());
    assert_eq!(r.equivalence.instances_checked.exal_classes, 1);
    assert_eq!(r.equivalence.instances_checked.torsor_classes, 1);
}

#[test]
fn spec_z2_regular_has_two_classes() {
    let x = builtin::space("spec-ring:zmod:2").unwrap();
    let m = builtin::module_sheaf("regular", &x).unwrap();
    let r = verify_scheme_equivalence(&x.sheaf, &m, Mode::Spec, &Limits::default()).unwrap();
    assert_eq!(r.equivalence.faithful, Verdict::Pass);
    assert_eq!(r.equivalence.full, Verdict::Pass);
    assert_eq!(r.equivalence.ess_surj, Verdict::Pass);
    assert_eq!(r.equivalence.instances_checked.exal_classes, 2);
    assert_eq!(r.point_classes, vec![2]);
}

#[test]
fn sierpinski_ringed_mode_zero_module() {
    let x = builtin::space("sierpinski:zmod:2").unwrap();
    let m = builtin::module_sheaf("zero", &x).unwrap();
    let r = verify_scheme_equivalence(&x.sheaf, &m, Mode::Ringed, &Limits::default()).unwrap();
    assert!(r.passed());
}
