use dgl_cli::dgl_file::{BracketLine, DifferentialLine, Generator, Term};
use dgl_cli::DglFile;
use dgl_core::scalar::PLocal;
use num_bigint::BigInt;
use proptest::prelude::*;

const NAMES: [&str; 5] = ["a", "b2", "x_1", "y'", "Z"];

fn coeff(p: u64) -> impl Strategy<Value = PLocal> {
    (-40i64..40, 1i64..30)
        .prop_filter("p-local", move |(_, d)| d % p as i64 != 0)
        .prop_map(move |(n, d)| PLocal::from_fraction(BigInt::from(n), BigInt::from(d), p).unwrap())
}

fn terms(p: u64, s: usize) -> impl Strategy<Value = Vec<Term>> {
    proptest::sample::subsequence((0..s).collect::<Vec<_>>(), 0..=s)
        .prop_flat_map(move |idx| {
            let n = idx.len();
            (Just(idx), proptest::collection::vec(coeff(p), n))
        })
        .prop_map(|(idx, cs)| {
            idx.into_iter()
                .zip(cs)
                .map(|(i, c)| Term {
                    coeff: c,
                    gen: NAMES[i].to_string(),
                })
                .collect()
        })
}

fn dgl_file() -> impl Strategy<Value = DglFile> {
    (
        prop_oneof![Just(3u64), Just(5), Just(7), Just(101)],
        1usize..=5,
        6usize..30,
    )
        .prop_flat_map(|(p, s, nmax)| {
            let gens = proptest::collection::vec(0..=nmax, s);
            let diffs = proptest::collection::vec(proptest::option::of(terms(p, s)), s);
            let pairs = proptest::collection::vec(((0..s), (0..s), terms(p, s)), 0..6);
            (Just(p), Just(nmax), gens, diffs, pairs)
        })
        .prop_map(|(p, nmax, degrees, diffs, pairs)| {
            let generators = degrees
                .iter()
                .enumerate()
                .map(|(i, &d)| Generator {
                    name: NAMES[i].to_string(),
                    degree: d,
                })
                .collect();
            let differential = diffs
                .into_iter()
                .enumerate()
                .filter_map(|(i, t)| {
                    t.map(|targets| DifferentialLine {
                        source: NAMES[i].to_string(),
                        targets,
                    })
                })
                .collect();
            let mut brackets: Vec<BracketLine> = Vec::new();
            for (i, j, targets) in pairs {
                if !brackets
                    .iter()
                    .any(|b| b.left == NAMES[i] && b.right == NAMES[j])
                {
                    brackets.push(BracketLine {
                        left: NAMES[i].to_string(),
                        right: NAMES[j].to_string(),
                        targets,
                    });
                }
            }
            DglFile {
                prime: p,
                max_degree: nmax,
                generators,
                differential,
                brackets,
            }
        })
}

proptest! {
    #[test]
    fn emit_then_parse_is_identity(f in dgl_file()) {
        let text = f.emit();
        let g = DglFile::parse(&text).unwrap();
        prop_assert_eq!(&g, &f);
        prop_assert_eq!(g.emit(), text);
    }

    #[test]
    fn canonical_file_rebuilds_the_same_algebra(f in dgl_file()) {
        let l = f.to_dgl().unwrap();
        let canonical = DglFile::from_dgl(&l);
        prop_assert_eq!(canonical.to_dgl().unwrap(), l);
        prop_assert_eq!(DglFile::parse(&canonical.emit()).unwrap(), canonical);
    }
}
