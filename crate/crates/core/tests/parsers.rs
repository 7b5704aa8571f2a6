mod common;

use common::fixture;
use ghosa_core::ingest::{
    checksum, load_instance, parse_orlib_mknap, parse_qaplib, parse_qaplib_solution, parse_roadnet, parse_tsplib,
    write_orlib_mknap, write_qaplib, write_roadnet, write_tsplib, IngestError, Instance, InstanceFormat,
};
use ghosa_core::problems::{qap_cost, tsp_tour_length};
use ghosa_core::{EventSequence, Metric};

const TSP_COORDS: &str = "NAME: five
TYPE: TSP
COMMENT: synthetic
DIMENSION: 5
EDGE_WEIGHT_TYPE: EUC_2D
NODE_COORD_SECTION
1 0 0
2 3 0
3 3 4
4 0 4
5 1.5 6
EOF
";

const TSP_LOWER_DIAG: &str = "NAME: four
TYPE: TSP
DIMENSION: 4
EDGE_WEIGHT_TYPE: EXPLICIT
EDGE_WEIGHT_FORMAT: LOWER_DIAG_ROW
EDGE_WEIGHT_SECTION
0
2 0
9 6 0
10 4 3 0
EOF
";

const QAP: &str = "3
0 1 2
1 0 3
2 3 0

0 5 2
5 0 4
2 4 0
";

const MKNAP: &str = "2
4 2 30
10 20 15 5
2 3 4 1
1 1 3 3
6 5
3 1 0
1 2 3
4 4 4
8
";

const ROAD: &str = "S A T
S A 10 2 1
A T 10 1 1
S T 25 0 3
CAPS 2.5
5 S T
";

#[test]
fn tsplib_coords_round_trip() {
    let inst = parse_tsplib(TSP_COORDS).unwrap();
    assert_eq!((inst.n, inst.metric), (5, Metric::Euc2d));
    let text = write_tsplib(&inst).unwrap();
    let again = parse_tsplib(&text).unwrap();
    assert_eq!(again, inst);
    assert_eq!(write_tsplib(&again).unwrap(), text);
    assert_eq!(inst.distance(0, 2), 5.0);
}

#[test]
fn tsplib_explicit_round_trip_and_symmetry() {
    let inst = parse_tsplib(TSP_LOWER_DIAG).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(inst.distance(i, j), inst.distance(j, i));
        }
    }
    assert_eq!(inst.distance(3, 1), 4.0);
    let again = parse_tsplib(&write_tsplib(&inst).unwrap()).unwrap();
    assert_eq!(again, inst);
}

#[test]
fn tsplib_dimension_mismatch() {
    let short = TSP_COORDS.replace("5 1.5 6\n", "");
    assert!(matches!(
        parse_tsplib(&short),
        Err(IngestError::DimensionMismatch {
            expected: 5,
            got: 4,
            ..
        })
    ));
    let short = TSP_LOWER_DIAG.replace("10 4 3 0\n", "10 4 3\n");
    assert!(matches!(
        parse_tsplib(&short),
        Err(IngestError::DimensionMismatch {
            expected: 10,
            got: 9,
            ..
        })
    ));
}

#[test]
fn qaplib_round_trip_and_mismatch() {
    let inst = parse_qaplib(QAP, "q3").unwrap();
    assert_eq!(parse_qaplib(&write_qaplib(&inst), "q3").unwrap(), inst);
    // identity: sum of flow(i,j) * dist(i,j)
    assert_eq!(qap_cost(&inst, &EventSequence::identity(3)).unwrap(), 2 * (5 + 4 + 12));
    assert!(matches!(
        parse_qaplib(&QAP.replace("2 4 0\n", "2 4\n"), "q3"),
        Err(IngestError::TruncatedMatrix { expected: 18, got: 17 })
    ));
    assert!(parse_qaplib(&format!("4\n{}", &QAP[2..]), "q4").is_err());
}

#[test]
fn qaplib_solution_file() {
    let sol = parse_qaplib_solution("3 42\n2, 3, 1\n").unwrap();
    assert_eq!((sol.n, sol.cost), (3, 42));
    assert_eq!(sol.permutation.to_one_based(), vec![2, 3, 1]);
}

#[test]
fn mknap_round_trip_and_mismatch() {
    let list = parse_orlib_mknap(MKNAP, "mk").unwrap();
    assert_eq!(list.len(), 2);
    assert_eq!((list[0].n, list[0].m, list[0].best_known), (4, 2, Some(30.0)));
    assert_eq!((list[1].n, list[1].m, list[1].best_known), (3, 1, None));
    assert_eq!(list[0].name, "mk-1");
    let again = parse_orlib_mknap(&write_orlib_mknap(&list), "mk").unwrap();
    assert_eq!(again, list);
    let truncated = MKNAP.trim_end().trim_end_matches('8');
    assert!(matches!(
        parse_orlib_mknap(truncated, "mk"),
        Err(IngestError::CountMismatch {
            expected: 1,
            got: 0,
            ..
        })
    ));
    assert!(parse_orlib_mknap(&MKNAP.replacen("2\n", "3\n", 1), "mk").is_err());
}

#[test]
fn roadnet_round_trip() {
    let net = parse_roadnet(ROAD, "r").unwrap();
    assert_eq!(net.node_count(), 3);
    assert_eq!(net.caps, vec![2.5]);
    assert_eq!(parse_roadnet(&write_roadnet(&net), "r").unwrap(), net);
    assert!(matches!(
        parse_roadnet(&ROAD.replace("A T", "A X"), "r"),
        Err(IngestError::UnknownNodeReference(_))
    ));
}

#[test]
fn fixtures_load_by_extension() {
    let cases = [
        ("ulysses16.tsp", InstanceFormat::Tsplib),
        ("toy6.dat", InstanceFormat::Qaplib),
        ("toy.mknap", InstanceFormat::OrlibMknap),
        ("toy.roadnet", InstanceFormat::Roadnet),
    ];
    for (file, format) in cases {
        let rec = load_instance(&fixture(file), None).unwrap();
        assert_eq!(rec.format, format, "{file}");
        let again = load_instance(&fixture(file), None).unwrap();
        assert_eq!(rec.checksum, again.checksum);
        assert_eq!(rec.checksum, checksum(&std::fs::read(fixture(file)).unwrap()));
    }
}

#[test]
fn ulysses16_geo_tour() {
    let Instance::Tsp(inst) = load_instance(&fixture("ulysses16.tsp"), None).unwrap().payload else {
        panic!("not a TSP file");
    };
    assert_eq!((inst.n, inst.metric), (16, Metric::Geo));
    // optimal tour from the TSPLIB distribution
    let tour = EventSequence::from_one_based(&[1, 14, 13, 12, 7, 6, 15, 5, 11, 9, 10, 16, 3, 2, 4, 8]);
    assert_eq!(tsp_tour_length(&inst, &tour).unwrap(), 6859.0);
}

#[test]
fn unknown_extension_is_rejected() {
    assert!(matches!(
        load_instance(std::path::Path::new("x.bin"), None),
        Err(IngestError::UnknownFormat(_))
    ));
}
