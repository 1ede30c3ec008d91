mod common;

use common::{compare_with_oracle as compare, random_complex, rng, IntComplex};

#[test]
fn elementary_complex_pages() {
    // Z --p^2--> Z in degrees 1, 0.
    let c = IntComplex {
        dims: vec![1, 1, 0],
        d: vec![vec![], vec![vec![9]], vec![vec![]; 1]],
    };
    assert_eq!(
        (1..=3).map(|r| c.page_dim(3, r, 0)).collect::<Vec<_>>(),
        [1, 1, 0]
    );
    assert_eq!(
        (1..=3).map(|r| c.page_dim(3, r, 1)).collect::<Vec<_>>(),
        [1, 1, 0]
    );
    compare(&c, 3).unwrap();
}

#[test]
fn random_complexes_match_oracle() {
    let mut r = rng(17);
    for (i, p) in [3u64, 5, 3, 7].iter().cycle().take(120).enumerate() {
        let c = random_complex(&mut r, *p as i128, 5, 12);
        if let Err(e) = compare(&c, *p) {
            panic!("case {i} (p = {p}): {e}\n{c:?}");
        }
    }
}
