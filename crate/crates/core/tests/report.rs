use ldes_boundary::model::CostCategory;
use ldes_boundary::report::tables::*;
use ldes_boundary::report::{atomic_write, sha256_hex};
use ldes_boundary::scenario::{run_baseline, sweep_boundary_curve, ScenarioOptions};
use ldes_boundary::toy;

#[test]
fn cost_rows_round_trip_through_csv() {
    let b = run_baseline(&toy::toy_a(), &ScenarioOptions::default()).unwrap();
    let rows = cost_rows(&b.breakdown);
    let back: Vec<CostRow> = from_csv(&to_csv(&rows, COST_HEADER)).unwrap();
    assert_eq!(back, rows);
    for r in &back {
        let c = parse_category(&r.category, &r.technology).unwrap();
        assert_eq!(b.breakdown[&c], r.cost_usd);
    }
    assert_eq!(parse_category("nonsense", ""), None);
    assert_eq!(parse_category("imbalance", ""), Some(CostCategory::Imbalance));
}

#[test]
fn sweep_tables_round_trip() {
    let inst = toy::toy_b();
    let opts = ScenarioOptions::default();
    let q = run_baseline(&inst, &opts).unwrap().q_star;
    let pts = sweep_boundary_curve(&inst, q, &[10.0, 20.0], &opts).unwrap();

    let curve = curve_rows(&pts);
    assert_eq!(from_csv::<CurveRow>(&to_csv(&curve, CURVE_HEADER)).unwrap(), curve);
    let inv = investment_rows(&pts);
    assert_eq!(from_csv::<InvestmentRow>(&to_csv(&inv, INVESTMENT_HEADER)).unwrap(), inv);
    assert!(inv.iter().any(|r| r.kind == "storage" && r.asset == "ldes" && r.energy_mwh == 20.0));
    let red = cost_reduction_rows(&pts);
    assert_eq!(from_csv::<CostReductionRow>(&to_csv(&red, COST_REDUCTION_HEADER)).unwrap(), red);
    assert!((red[0].net_cost_reduction - 120.0).abs() < 1e-9);
    let dec = decomposition_rows(&pts);
    assert_eq!(from_csv::<DecompositionRow>(&to_csv(&dec, DECOMPOSITION_HEADER)).unwrap(), dec);

    let soc = soc_rows(&inst, &pts, &[10.0]);
    assert_eq!(soc.len(), 3);
    assert!(soc.iter().all(|r| r.capacity_mw == 10.0 && r.storage_id == "ldes"));
    assert_eq!(soc_rows(&inst, &pts, &[]).len(), 6);
}

#[test]
fn atomic_write_replaces_whole_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("nested/out.txt");
    atomic_write(&p, b"first").unwrap();
    atomic_write(&p, b"second").unwrap();
    assert_eq!(std::fs::read(&p).unwrap(), b"second");
    let names: Vec<_> = std::fs::read_dir(p.parent().unwrap()).unwrap().collect();
    assert_eq!(names.len(), 1);
    assert_eq!(
        sha256_hex(b"abc"),
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
    );
}
