use num_complex::Complex64;
use proptest::prelude::*;

use oneway::cluster::{build_cluster_state, ClusterAssignment, ClusterGraph};
use oneway::subcluster::Subcluster;
use oneway::tabular::{
    decompose, expand, parse, render, tables_equal, BasisAssignment, BasisSymbol, ColumnBasis, Sign, Table, TableComparison,
    TableRow,
};
use oneway::{Error, InputQubitState, StateVector};

fn generic() -> InputQubitState {
    InputQubitState::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap()
}

fn chain(n: usize) -> StateVector {
    build_cluster_state(&ClusterAssignment::without_inputs(ClusterGraph::chain(1..=n).unwrap())).unwrap()
}

#[test]
fn two_row_table_is_the_two_chain() {
    let t = parse("+|0|+\n+|1|-\n").unwrap();
    let e = expand(&t).unwrap();
    assert!((e.coefficient - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    assert!(e.state.equal_up_to_global_phase(&chain(2), 1e-12).unwrap().equal);
    let back = decompose(&chain(2), &BasisAssignment::new(vec![1, 2], vec![ColumnBasis::Computational, ColumnBasis::Hadamard])).unwrap();
    assert_eq!(tables_equal(&back, &t).unwrap(), TableComparison::Equal);
}

#[test]
fn single_row() {
    let e = expand(&parse("+|0").unwrap()).unwrap();
    assert_eq!(e.state, StateVector::basis(1, 0).unwrap());
}

#[test]
fn input_table_matches_three_chain() {
    let t = parse("sign|1|2|3\n+|psi|0|+\n+|psi*|1|-\n").unwrap().bind(1, generic());
    let want = build_cluster_state(&ClusterAssignment::new(ClusterGraph::chain(1..=3).unwrap(), [(1, generic())]).unwrap()).unwrap();
    assert!(expand(&t).unwrap().state.equal_up_to_global_phase(&want, 1e-12).unwrap().equal);
    let lines: Vec<_> = render(&t).lines().skip(1).map(str::to_string).collect();
    assert_eq!(lines, ["+|psi|0|+", "+|psi*|1|-"]);
}

#[test]
fn four_chain_table() {
    let asg = BasisAssignment::alternating(vec![1, 2, 3, 4], false, ColumnBasis::Computational);
    let t = decompose(&chain(4), &asg).unwrap();
    let want = parse("+|0|+|0|+\n+|0|-|1|-\n+|1|-|0|+\n+|1|+|1|-\n").unwrap();
    assert!(tables_equal(&t, &want).unwrap().is_match());
}

#[test]
fn parse_errors() {
    assert!(matches!(parse("+|2|0"), Err(Error::UnknownSymbol(_))));
    assert!(matches!(parse("+|0|1\n+|1"), Err(Error::RaggedRow { .. })));
    let t = parse("+|psi|0").unwrap();
    assert!(matches!(expand(&t), Err(Error::UnboundInput(1))));
}

#[test]
fn degenerate_input_pair() {
    let asg = BasisAssignment::new(vec![1], vec![ColumnBasis::InputPair]).bind(1, InputQubitState::zero());
    assert!(matches!(decompose(&StateVector::basis(1, 0).unwrap(), &asg), Err(Error::DegenerateInputPair(1))));
}

#[test]
fn wrong_basis_is_honest() {
    // the 3-chain in an all-computational basis has unequal magnitudes or expands back
    let asg = BasisAssignment::new(vec![1, 2, 3], vec![ColumnBasis::Hadamard; 3]);
    match decompose(&chain(3), &asg) {
        Err(Error::NotTabular { .. }) => {}
        Ok(t) => assert!(expand(&t).unwrap().state.equal_up_to_global_phase(&chain(3), 1e-10).unwrap().equal),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn comparison_outcomes() {
    let x = parse("+|0|+\n+|1|-\n").unwrap();
    assert_eq!(tables_equal(&x, &x).unwrap(), TableComparison::Equal);
    assert_eq!(tables_equal(&x, &x.with_all_signs_flipped()).unwrap(), TableComparison::EqualUpToGlobalSign);
    let y = parse("+|0|+\n-|1|-\n").unwrap();
    assert!(!tables_equal(&x, &y).unwrap().is_match());
    let z = parse("sign|2|3\n+|0|+\n").unwrap();
    assert!(tables_equal(&x, &z).is_err());
}

#[test]
fn subcluster_tables_against_golden() {
    let b = InputQubitState::new(Complex64::new(12.0 / 13.0, 0.0), Complex64::new(3.0 / 13.0, 4.0 / 13.0)).unwrap();
    for s in Subcluster::ALL {
        let (derived, golden, cmp) = s.compare(|l| if l >= 9 { b } else { generic() }).unwrap();
        assert_eq!(derived.len(), golden.len(), "{s}");
        if s == Subcluster::Full {
            // four sign flips in one eight-row block
            match cmp {
                TableComparison::Different { only_left, only_right } => {
                    assert_eq!((only_left.len(), only_right.len()), (4, 4));
                }
                other => panic!("{other:?}"),
            }
        } else {
            assert!(cmp.is_match(), "{s}: {cmp:?}");
        }
    }
}

#[test]
fn bridge_table_has_four_negative_rows() {
    let t = Subcluster::ControlBridge.golden(|_| generic()).unwrap();
    assert_eq!((t.len(), t.negative_rows()), (16, 4));
}

fn random_table() -> impl Strategy<Value = Table> {
    (1usize..=5).prop_flat_map(|n| {
        prop::collection::btree_set(prop::collection::vec(0usize..6, n), 1..8).prop_flat_map(move |cells| {
            let k = cells.len();
            (Just(n), Just(cells), prop::collection::vec(any::<bool>(), k))
        })
    })
    .prop_map(|(n, cells, signs)| {
        let rows = cells
            .into_iter()
            .zip(signs)
            .map(|(c, s)| {
                let sign = if s { Sign::Minus } else { Sign::Plus };
                TableRow::new(sign, c.into_iter().map(|i| BasisSymbol::ALL[i]).collect())
            })
            .collect();
        Table::new((1..=n).collect(), rows).unwrap()
    })
}

fn random_input() -> impl Strategy<Value = InputQubitState> {
    (0.1f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("nonzero b", |(_, r, i)| r.abs() + i.abs() > 0.1)
        .prop_map(|(a, r, i)| InputQubitState::normalized(Complex64::new(a, 0.0), Complex64::new(r, i)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn render_parse_round_trip(t in random_table()) {
        let back = parse(&render(&t)).unwrap();
        prop_assert_eq!(back.labels(), t.labels());
        prop_assert_eq!(back.rows(), t.rows());
    }

    #[test]
    fn decompose_then_expand_is_identity(n in 2usize..=6, with_input in any::<bool>(), psi in random_input()) {
        let labels: Vec<usize> = (1..=n).collect();
        let inputs: Vec<_> = if with_input { vec![(1, psi)] } else { vec![] };
        let state = build_cluster_state(&ClusterAssignment::new(ClusterGraph::chain(1..=n).unwrap(), inputs).unwrap()).unwrap();
        let mut asg = BasisAssignment::alternating(labels, with_input, ColumnBasis::Computational);
        if with_input {
            asg = asg.bind(1, psi);
        }
        let t = decompose(&state, &asg).unwrap();
        prop_assert!(t.len().is_power_of_two());
        let e = expand(&t).unwrap();
        prop_assert!(e.state.equal_up_to_global_phase(&state, 1e-10).unwrap().equal);
    }
}
