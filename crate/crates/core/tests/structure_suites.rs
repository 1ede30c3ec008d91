mod common;

use common::{lie_type_instance, random_divisible_dgl, restriction_instance, rng};
use dgl_core::lie::PbwAlgebra;
use dgl_core::structure::verify_theorem3;

#[test]
fn restriction_verdicts_agree() {
    let mut r = rng(31);
    let (mut yes, mut no) = (0, 0);
    for i in 0..150 {
        let (expect, v) = restriction_instance(&mut r, 3, true);
        assert!(v.agree(), "instance {i}: {v:?}");
        assert_eq!(v.restricts(), expect, "instance {i}");
        if expect {
            yes += 1
        } else {
            no += 1
        }
    }
    assert!(yes > 20 && no > 20, "{yes} / {no}");
}

#[test]
fn lie_type_verdicts_agree() {
    let mut r = rng(32);
    let (mut yes, mut no) = (0, 0);
    for i in 0..150 {
        let (expect, v) = lie_type_instance(&mut r, 3);
        assert!(v.agree(), "instance {i}: {v:?}");
        assert_eq!(v.is_lie_type(), expect, "instance {i}");
        if expect {
            yes += 1
        } else {
            no += 1
        }
    }
    assert!(yes > 20 && no > 20, "{yes} / {no}");
}

#[test]
fn theorem3_on_random_divisible_dgls_p3() {
    let mut r = rng(33);
    for i in 0..10 {
        let l = random_divisible_dgl(&mut r, 3, 20, 4);
        let ul = PbwAlgebra::build(&l).unwrap();
        let report = verify_theorem3(&ul, 2).unwrap();
        assert!(report.passed(), "instance {i}: {report:?}");
    }
}
